//! Argument handling and report rendering for the `esscoh` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use esscoh::algebra::Presentation;
use esscoh::catalog::{maximal_subgroup_data, presentation_of, theorem, Family, GroupSpec, MaximalSubgroups};
use esscoh::ideals::{ideals_equal_up_to, IdealSpec};
use esscoh::oracle::oracle_check;
use esscoh::steenrod::{steenrod_closure, SteenrodAction};
use esscoh::verifier::{
    default_max_degree, default_method, essential_by_h1_presentation, verify_theorem, Method, VerificationReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "esscoh", version, about = "Essential cohomology of p-groups with a cyclic subgroup of index p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the essential ideal and compare it with the expected one.
    Verify(VerifyArgs),
    /// Print the presentation and the expected essential ideal.
    Show(GroupArgs),
    /// Print Hilbert dimensions up to the degree bound.
    Hilbert(GroupArgs),
    /// Compare the presentation with a minimal resolution of the group.
    Oracle(GroupArgs),
    /// Steenrod closure of a seed in the cohomology of Z_p x Z_p.
    Closure(ClosureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Kernels,
    H1,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Kernels => Method::Kernels,
            MethodArg::H1 => Method::H1,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// TOML presentation over F_2, checked by the degree-1 route instead
    /// of a catalog group.
    #[arg(long, conflicts_with_all = ["family", "p", "n", "method"])]
    pub presentation_file: Option<PathBuf>,
    /// Expected generators for `--presentation-file`.
    #[arg(long = "expect", requires = "presentation_file")]
    pub expected: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub seed: Vec<String>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: esscoh::catalog::CatalogError| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub d: u32,
    pub dim_computed: usize,
    pub dim_expected: Option<usize>,
    pub equal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceEntry {
    pub label: String,
    pub equal: bool,
}

/// The structured verification report. Field order is the key order of
/// the serialized document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredReport {
    pub family: String,
    pub p: u32,
    pub n: Option<u32>,
    pub max_degree: u32,
    pub method: String,
    pub per_degree: Vec<DegreeEntry>,
    pub invariance: Vec<InvarianceEntry>,
    pub pass: bool,
}

impl From<&VerificationReport> for StructuredReport {
    fn from(r: &VerificationReport) -> Self {
        StructuredReport {
            family: r.group.family().to_string(),
            p: r.group.p(),
            n: Some(r.group.n()),
            max_degree: r.max_degree,
            method: r.method.to_string(),
            per_degree: r
                .per_degree
                .iter()
                .map(|row| DegreeEntry {
                    d: row.degree,
                    dim_computed: row.dim_computed,
                    dim_expected: Some(row.dim_expected),
                    equal: Some(row.equal),
                })
                .collect(),
            invariance: r
                .invariance
                .iter()
                .map(|c| InvarianceEntry {
                    label: c.label.clone(),
                    equal: c.equal,
                })
                .collect(),
            pass: r.pass(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

/// A failure that maps to an exit code and a diagnostic.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

/// Runs one request. Reports go to `out`, diagnostics to `err`; the return
/// value is the process exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let result = match cli.command {
        Command::Verify(a) => run_verify(&a),
        Command::Show(a) => run_show(&a),
        Command::Hilbert(a) => run_hilbert(&a),
        Command::Oracle(a) => run_oracle(&a),
        Command::Closure(a) => run_closure(&a),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn group_of(a: &GroupArgs) -> Result<GroupSpec, Failure> {
    let missing = |flag: &str| Failure(format!("--{flag} is required"));
    let family = a.family.ok_or_else(|| missing("family"))?;
    let p = a.p.ok_or_else(|| missing("p"))?;
    let n = a.n.ok_or_else(|| missing("n"))?;
    Ok(GroupSpec::new(family, p, n)?)
}

fn verdict(pass: bool) -> (&'static str, i32) {
    if pass {
        ("PASS", EXIT_PASS)
    } else {
        ("FAIL", EXIT_FAIL)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn run_verify(a: &VerifyArgs) -> Outcome {
    if let Some(path) = &a.presentation_file {
        return run_verify_file(a, path);
    }
    let g = group_of(&a.group)?;
    let max_degree = a.group.max_degree.unwrap_or_else(|| default_max_degree(g.p()));
    let method = match a.method {
        Some(m) => m.into(),
        None => default_method(g)?,
    };
    let report = verify_theorem(g, max_degree, method)?;
    let (word, code) = verdict(report.pass());
    if a.group.format == Format::Structured {
        return Ok((to_json(&StructuredReport::from(&report)) + "\n", code));
    }
    let thm = theorem(g)?;
    let mut s = String::new();
    let _ = writeln!(s, "group: {} = {g}", g.group_name());
    let _ = writeln!(s, "expected: {}", thm.statement);
    let _ = writeln!(s, "method: {method}, degrees 0..={max_degree}");
    let _ = writeln!(s, "{:>3} {:>9} {:>9}  equal", "d", "computed", "expected");
    for row in &report.per_degree {
        let _ = writeln!(
            s,
            "{:>3} {:>9} {:>9}  {}",
            row.degree,
            row.dim_computed,
            row.dim_expected,
            yes_no(row.equal)
        );
    }
    if !report.invariance.is_empty() {
        let _ = writeln!(s, "invariance:");
        for c in &report.invariance {
            let _ = writeln!(s, "  {}: {}", c.label, yes_no(c.equal));
        }
    }
    if let Some(d) = report.first_mismatch() {
        let _ = writeln!(s, "first mismatch in degree {d}");
    }
    let _ = writeln!(s, "verdict: {word}");
    Ok((s, code))
}

fn load_presentation(path: &PathBuf) -> Result<Arc<Presentation>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(Presentation::from_toml(&text)?)
}

fn run_verify_file(a: &VerifyArgs, path: &PathBuf) -> Outcome {
    let pres = load_presentation(path)?;
    if pres.p() != 2 {
        return Err(Failure("--presentation-file requires p = 2".into()));
    }
    let max_degree = a.group.max_degree.unwrap_or_else(|| default_max_degree(2));
    let computed = essential_by_h1_presentation(&pres, max_degree)?;
    let per_degree: Vec<DegreeEntry> = if a.expected.is_empty() {
        computed
            .dimensions()
            .into_iter()
            .enumerate()
            .map(|(d, dim)| DegreeEntry {
                d: d as u32,
                dim_computed: dim,
                dim_expected: None,
                equal: None,
            })
            .collect()
    } else {
        let refs: Vec<&str> = a.expected.iter().map(String::as_str).collect();
        let expected = IdealSpec::parse(pres.clone(), &refs)?;
        ideals_equal_up_to(&computed, &expected.family(max_degree), max_degree)?
            .per_degree
            .into_iter()
            .map(|c| DegreeEntry {
                d: c.degree,
                dim_computed: c.dim_left,
                dim_expected: Some(c.dim_right),
                equal: Some(c.equal),
            })
            .collect()
    };
    let pass = per_degree.iter().all(|e| e.equal != Some(false));
    let (word, code) = verdict(pass);
    if a.group.format == Format::Structured {
        let report = StructuredReport {
            family: "custom".into(),
            p: 2,
            n: None,
            max_degree,
            method: Method::H1.to_string(),
            per_degree,
            invariance: Vec::new(),
            pass,
        };
        return Ok((to_json(&report) + "\n", code));
    }
    let mut s = String::new();
    let _ = writeln!(s, "presentation: {}", path.display());
    let _ = writeln!(s, "method: h1, degrees 0..={max_degree}");
    let _ = writeln!(s, "{:>3} {:>9} {:>9}  equal", "d", "computed", "expected");
    for e in &per_degree {
        let exp = e.dim_expected.map_or("-".to_string(), |x| x.to_string());
        let eq = e.equal.map_or("-", yes_no);
        let _ = writeln!(s, "{:>3} {:>9} {:>9}  {eq}", e.d, e.dim_computed, exp);
    }
    let _ = writeln!(s, "verdict: {word}");
    Ok((s, code))
}

#[derive(Serialize)]
struct ShowDoc {
    family: String,
    p: u32,
    n: u32,
    group: String,
    order: Option<u64>,
    generators: Vec<GeneratorDoc>,
    relations: Vec<String>,
    theorem: String,
    maximal_subgroups: Vec<String>,
}

#[derive(Serialize)]
struct GeneratorDoc {
    name: String,
    degree: u32,
    exterior: bool,
}

pub fn run_show(a: &GroupArgs) -> Outcome {
    let g = group_of(a)?;
    let pres = presentation_of(g)?;
    let thm = theorem(g)?;
    let subgroups = match maximal_subgroup_data(g)? {
        MaximalSubgroups::Explicit(data) => data.into_iter().map(|d| d.label).collect(),
        MaximalSubgroups::H1RouteOnly => Vec::new(),
    };
    let doc = ShowDoc {
        family: g.family().to_string(),
        p: g.p(),
        n: g.n(),
        group: g.group_name(),
        order: g.order(),
        generators: pres
            .generators()
            .iter()
            .enumerate()
            .map(|(i, gen)| GeneratorDoc {
                name: gen.name.clone(),
                degree: gen.degree,
                exterior: pres.is_exterior(i),
            })
            .collect(),
        relations: pres.relation_strings(),
        theorem: thm.statement,
        maximal_subgroups: subgroups,
    };
    if a.format == Format::Structured {
        return Ok((to_json(&doc) + "\n", EXIT_PASS));
    }
    let mut s = String::new();
    let order = doc.order.map_or_else(|| "large".to_string(), |o| o.to_string());
    let _ = writeln!(s, "group: {} = {g}, order {order}", doc.group);
    let gens: Vec<String> = doc
        .generators
        .iter()
        .map(|x| {
            let ext = if x.exterior { ", exterior" } else { "" };
            format!("{} (degree {}{ext})", x.name, x.degree)
        })
        .collect();
    let _ = writeln!(s, "generators: {}", gens.join(", "));
    let rels = if doc.relations.is_empty() { "none".to_string() } else { doc.relations.join(", ") };
    let _ = writeln!(s, "relations: {rels}");
    let _ = writeln!(s, "theorem: {}", doc.theorem);
    if doc.maximal_subgroups.is_empty() {
        let _ = writeln!(s, "maximal subgroups: not encoded (degree-1 route)");
    } else {
        let _ = writeln!(s, "maximal subgroups: {}", doc.maximal_subgroups.join(", "));
    }
    Ok((s, EXIT_PASS))
}

#[derive(Serialize)]
struct HilbertDoc {
    family: String,
    p: u32,
    n: u32,
    max_degree: u32,
    dimensions: Vec<usize>,
}

pub fn run_hilbert(a: &GroupArgs) -> Outcome {
    let g = group_of(a)?;
    let max_degree = a.max_degree.unwrap_or_else(|| default_max_degree(g.p()));
    let dims = presentation_of(g)?.hilbert_series(max_degree);
    if a.format == Format::Structured {
        let doc = HilbertDoc {
            family: g.family().to_string(),
            p: g.p(),
            n: g.n(),
            max_degree,
            dimensions: dims,
        };
        return Ok((to_json(&doc) + "\n", EXIT_PASS));
    }
    let list: Vec<String> = dims.iter().map(usize::to_string).collect();
    Ok((format!("{}\n", list.join(",")), EXIT_PASS))
}

#[derive(Serialize)]
struct OracleDoc {
    family: String,
    p: u32,
    n: u32,
    max_degree: u32,
    betti: Vec<usize>,
    hilbert: Vec<usize>,
    matches: bool,
}

pub fn run_oracle(a: &GroupArgs) -> Outcome {
    let g = group_of(a)?;
    let max_degree = a.max_degree.unwrap_or(8);
    let r = oracle_check(g, max_degree)?;
    let (word, code) = verdict(r.matches());
    if a.format == Format::Structured {
        let doc = OracleDoc {
            family: g.family().to_string(),
            p: g.p(),
            n: g.n(),
            max_degree,
            betti: r.betti.clone(),
            hilbert: r.hilbert.clone(),
            matches: r.matches(),
        };
        return Ok((to_json(&doc) + "\n", code));
    }
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let mut s = String::new();
    let _ = writeln!(s, "group: {} = {g}", g.group_name());
    let _ = writeln!(s, "betti:   {}", join(&r.betti));
    let _ = writeln!(s, "hilbert: {}", join(&r.hilbert));
    let status = if r.matches() { "match" } else { "mismatch" };
    let _ = writeln!(s, "{status}");
    let _ = writeln!(s, "verdict: {word}");
    Ok((s, code))
}

#[derive(Serialize)]
struct ClosureDoc {
    p: u32,
    seed: Vec<String>,
    max_degree: u32,
    generators: Vec<String>,
}

pub fn run_closure(a: &ClosureArgs) -> Outcome {
    if a.seed.is_empty() {
        return Err(Failure("--seed is required".into()));
    }
    let g = GroupSpec::new(Family::B, a.p, 1)?;
    let pres = presentation_of(g)?;
    let max_degree = a.max_degree.unwrap_or_else(|| default_max_degree(a.p));
    let action = SteenrodAction::elementary(pres.clone())?;
    let refs: Vec<&str> = a.seed.iter().map(String::as_str).collect();
    let seed = IdealSpec::parse(pres.clone(), &refs)?;
    let closure = steenrod_closure(&action, &seed, max_degree)?;
    let generators = closure.format_generators();
    if a.format == Format::Structured {
        let doc = ClosureDoc {
            p: a.p,
            seed: a.seed.clone(),
            max_degree,
            generators,
        };
        return Ok((to_json(&doc) + "\n", EXIT_PASS));
    }
    let mut s = String::new();
    let _ = writeln!(s, "ring: H*({}; F_{})", g.group_name(), a.p);
    let _ = writeln!(s, "seed: {}", a.seed.join(", "));
    let _ = writeln!(s, "closure up to degree {max_degree}: {} generators", generators.len());
    for x in &generators {
        let _ = writeln!(s, "  {x}");
    }
    Ok((s, EXIT_PASS))
}
