//! The six families of p-groups with a cyclic subgroup of index p: their
//! cohomology presentations, restriction maps to maximal subgroups, and the
//! expected essential ideals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use thiserror::Error;

use crate::algebra::{kunneth_product, AlgebraError, Element, GeneratorDecl, Presentation};
use crate::fplinalg::is_prime;
use crate::ideals::{AlgebraMorphism, IdealSpec, MapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("unknown family `{0}` (expected one of A-F)")]
    UnknownFamily(String),
    #[error("unknown knob `{0}`")]
    UnknownKnob(String),
    #[error("the H^1 route needs p = 2, got p = {0}")]
    OddPrime(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
        };
        f.write_str(c)
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            _ => Err(CatalogError::UnknownFamily(s.to_string())),
        }
    }
}

/// A group of one of the six families.
///
/// | family | group | order |
/// |---|---|---|
/// | A | Z_{p^n} | p^n |
/// | B | Z_{p^n} x Z_p | p^{n+1} |
/// | C | Z_{p^n} ⋊ Z_p, s t s^-1 = t^{p^{n-1}+1} | p^{n+1} |
/// | D | dihedral D_{2^n} | 2^n |
/// | E | generalized quaternion Q_{2^n} | 2^n |
/// | F | Z_{2^n} ⋊ Z_2, s t s = t^{2^{n-1}-1} | 2^{n+1} |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    family: Family,
    p: u32,
    n: u32,
}

impl GroupSpec {
    pub fn new(family: Family, p: u32, n: u32) -> Result<Self, CatalogError> {
        let bad = |msg: String| Err(CatalogError::OutOfRange(msg));
        if !is_prime(p) {
            return bad(format!("p = {p} is not a prime"));
        }
        match family {
            Family::A | Family::B if n < 1 => bad(format!("family {family} needs n >= 1")),
            Family::C if n < 2 => bad("family C needs n >= 2".to_string()),
            Family::D | Family::E | Family::F if p != 2 => bad(format!("family {family} needs p = 2")),
            Family::D | Family::E | Family::F if n < 3 => bad(format!("family {family} needs n >= 3")),
            _ if n > 64 => bad(format!("n = {n} is too large")),
            _ => Ok(GroupSpec { family, p, n }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Group order, or `None` if it overflows `u64`.
    pub fn order(&self) -> Option<u64> {
        let exp = match self.family {
            Family::A | Family::D | Family::E => self.n,
            Family::B | Family::C | Family::F => self.n + 1,
        };
        (self.p as u64).checked_pow(exp)
    }

    pub fn is_elementary_abelian(&self) -> bool {
        matches!((self.family, self.n), (Family::A, 1) | (Family::B, 1))
    }

    pub fn group_name(&self) -> String {
        let (p, n) = (self.p, self.n);
        match self.family {
            Family::A => format!("Z_{}", pow_label(p, n)),
            Family::B => format!("Z_{} x Z_{p}", pow_label(p, n)),
            Family::C => format!("Z_{} : Z_{p} (modular)", pow_label(p, n)),
            Family::D => format!("D_{}", 1u64 << n),
            Family::E => format!("Q_{}", 1u64 << n),
            Family::F => format!("SD_{}", 1u64 << (n + 1)),
        }
    }
}

fn pow_label(p: u32, n: u32) -> String {
    match (p as u64).checked_pow(n) {
        Some(v) => v.to_string(),
        None => format!("{p}^{n}"),
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}, n={})", self.family, self.p, self.n)
    }
}

/// Every catalog group whose order is at most `max_order`.
pub fn groups_up_to_order(max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for p in 2..=max_order as u32 {
            if !is_prime(p) {
                continue;
            }
            for n in 1..=64 {
                let Ok(g) = GroupSpec::new(family, p, n) else { continue };
                match g.order() {
                    Some(o) if o <= max_order => out.push(g),
                    _ => break,
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Group(GroupSpec),
    Trivial(u32),
}

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Presentation>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Presentation>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(
    key: CacheKey,
    build: impl FnOnce() -> Result<Arc<Presentation>, CatalogError>,
) -> Result<Arc<Presentation>, CatalogError> {
    if let Some(p) = cache().lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let built = build()?;
    Ok(cache().lock().unwrap().entry(key).or_insert(built).clone())
}

/// The cohomology ring of the trivial group.
pub fn trivial_presentation(p: u32) -> Result<Arc<Presentation>, CatalogError> {
    cached(CacheKey::Trivial(p), || Ok(Presentation::trivial(p)?))
}

/// The presentation of `H^*(G, F_p)`. Repeated calls return the same
/// shared presentation, so elements can be passed between calls.
pub fn presentation_of(g: GroupSpec) -> Result<Arc<Presentation>, CatalogError> {
    cached(CacheKey::Group(g), || build_presentation(g))
}

fn gen(name: &str, degree: u32) -> GeneratorDecl {
    GeneratorDecl::new(name, degree)
}

fn build_presentation(g: GroupSpec) -> Result<Arc<Presentation>, CatalogError> {
    let p = g.p;
    let n = g.n;
    let pres = match g.family {
        Family::A if p == 2 && n == 1 => Presentation::new(2, vec![gen("x", 1)], &[])?,
        Family::A => Presentation::new(p, vec![GeneratorDecl::exterior("x", 1), gen("y", 2)], &[])?,
        Family::B => {
            let a = presentation_of(GroupSpec::new(Family::A, p, n)?)?;
            let z = presentation_of(GroupSpec::new(Family::A, p, 1)?)?;
            kunneth_product(&a, &z)?
        }
        Family::C if p == 2 => Presentation::new(
            2,
            vec![gen("a", 1), gen("b", 1), gen("v", 3), gen("w", 4)],
            &["a^2", "v^2", "a*v", "a*b^2"],
        )?,
        Family::C => {
            let mut gens: Vec<GeneratorDecl> = (1..p).map(|i| gen(&format!("a{i}"), 2 * i - 1)).collect();
            gens.extend([gen("b", 1), gen("y", 2), gen("v", 2 * p - 1), gen("w", 2 * p)]);
            let mut rels = vec!["b^2".to_string(), "v^2".to_string()];
            for i in 1..p {
                for j in i + 1..p {
                    rels.push(format!("a{i}*a{j}"));
                }
                rels.push(format!("a{i}*v"));
                rels.push(format!("a{i}*y"));
            }
            let refs: Vec<&str> = rels.iter().map(String::as_str).collect();
            Presentation::new(p, gens, &refs)?
        }
        Family::D => Presentation::new(2, vec![gen("x", 1), gen("y", 1), gen("z", 2)], &["x*y"])?,
        Family::E if n == 3 => Presentation::new(
            2,
            vec![gen("x", 1), gen("y", 1), gen("z", 4)],
            &["x^2 + x*y + y^2", "x^2*y + x*y^2"],
        )?,
        Family::E => Presentation::new(2, vec![gen("x", 1), gen("y", 1), gen("z", 4)], &["x*y", "x^3 + y^3"])?,
        Family::F => Presentation::new(
            2,
            vec![gen("a", 1), gen("b", 1), gen("y", 2), gen("v", 3), gen("w", 4)],
            &["a*y", "a*v", "b^2", "a^2 + a*b", "v^2 + w*a*b + v*y*b"],
        )?,
    };
    Ok(pres)
}

/// Restriction to one maximal subgroup.
#[derive(Debug, Clone)]
pub struct SubgroupDatum {
    pub label: String,
    /// `None` for the trivial subgroup.
    pub subgroup: Option<GroupSpec>,
    pub restriction: AlgebraMorphism,
    pub knobs: BTreeMap<String, u32>,
}

#[derive(Debug, Clone)]
pub enum MaximalSubgroups {
    Explicit(Vec<SubgroupDatum>),
    /// No restriction maps are encoded; use the principal-ideal route.
    H1RouteOnly,
}

/// Free parameters of the encoded restriction maps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Choices {
    /// Family C at odd p: knob values for `M_i`, keyed by `i`. Missing
    /// entries default to 1; `M_0` always uses 1.
    pub knobs: BTreeMap<u32, BTreeMap<String, u32>>,
    /// Family E with n >= 4: image of `y` under restriction to `H`,
    /// written in the subgroup ring. Defaults to `x + y`.
    pub res_h_y: Option<String>,
    /// Family B at odd p, n >= 2: send `y1` to zero on the cyclic
    /// subgroups `M_i`, i >= 1, instead of to the degree-2 generator.
    pub cyclic_y1_vanishes: bool,
}

/// Knob names for family C at odd p.
pub fn knob_symbols(p: u32) -> Vec<String> {
    let mut out: Vec<String> = (2..p).map(|j| format!("c{j}")).collect();
    out.push("cv".into());
    out.push("cw".into());
    out
}

/// Uniformly random knob values in `0..p` for every `M_i`, i >= 1.
pub fn random_knobs(g: GroupSpec, rng: &mut impl Rng) -> Choices {
    let mut choices = Choices::default();
    if g.family == Family::C && g.p != 2 {
        for i in 1..g.p {
            let values = knob_symbols(g.p)
                .into_iter()
                .map(|s| (s, rng.gen_range(0..g.p)))
                .collect();
            choices.knobs.insert(i, values);
        }
    }
    choices
}

pub fn maximal_subgroup_data(g: GroupSpec) -> Result<MaximalSubgroups, CatalogError> {
    maximal_subgroup_data_with(g, &Choices::default())
}

pub fn maximal_subgroup_data_with(g: GroupSpec, choices: &Choices) -> Result<MaximalSubgroups, CatalogError> {
    let (p, n) = (g.p, g.n);
    let src = presentation_of(g)?;
    let spec = |f, p, n| GroupSpec::new(f, p, n);
    let datum = |label: String, sub: Option<GroupSpec>, images: &[(&str, String)], knobs| {
        let target = match sub {
            Some(s) => presentation_of(s)?,
            None => trivial_presentation(p)?,
        };
        let pairs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (*a, b.as_str())).collect();
        let f = AlgebraMorphism::from_strings(src.clone(), target, &pairs)?;
        let f = AlgebraMorphism::checked(f.source().clone(), f.target().clone(), f.images().to_vec())?;
        Ok::<_, CatalogError>(SubgroupDatum {
            label,
            subgroup: sub,
            restriction: f,
            knobs,
        })
    };
    let s = |x: &str| x.to_string();
    let data = match g.family {
        Family::A if n == 1 => {
            let images: Vec<(&str, String)> = src.generators().iter().map(|d| (d.name.as_str(), s("0"))).collect();
            vec![datum(s("{1}"), None, &images, BTreeMap::new())?]
        }
        Family::A => {
            let y = if p == 2 && n == 2 { "x^2" } else { "y" };
            vec![datum(
                s("<t^p>"),
                Some(spec(Family::A, p, n - 1)?),
                &[("x", s("0")), ("y", s(y))],
                BTreeMap::new(),
            )?]
        }
        Family::B if p == 2 => return Ok(MaximalSubgroups::H1RouteOnly),
        Family::B if n == 1 => {
            let cyclic = spec(Family::A, p, 1)?;
            let mut lines = vec![(1, 0)];
            lines.extend((0..p).map(|i| (i, 1)));
            lines
                .into_iter()
                .map(|(a, b)| {
                    let label = match (a, b) {
                        (1, 0) => s("<t>"),
                        (0, _) => s("<s>"),
                        (a, _) => format!("<t^{a} s>"),
                    };
                    datum(
                        label,
                        Some(cyclic),
                        &[
                            ("x1", format!("{a}*x")),
                            ("y1", format!("{a}*y")),
                            ("x2", format!("{b}*x")),
                            ("y2", format!("{b}*y")),
                        ],
                        BTreeMap::new(),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        Family::B => {
            let mut out = vec![datum(
                s("K = <t^p, s>"),
                Some(spec(Family::B, p, n - 1)?),
                &[("x1", s("0")), ("y1", s("y1")), ("x2", s("x2")), ("y2", s("y2"))],
                BTreeMap::new(),
            )?];
            let cyclic = spec(Family::A, p, n)?;
            for i in 0..p {
                let y1 = if i > 0 && choices.cyclic_y1_vanishes { "0" } else { "y" };
                out.push(datum(
                    format!("M_{i} = <t s^{i}>"),
                    Some(cyclic),
                    &[("x1", s("x")), ("y1", s(y1)), ("x2", format!("{i}*x")), ("y2", s("0"))],
                    BTreeMap::new(),
                )?);
            }
            out
        }
        Family::C if p == 2 => return Ok(MaximalSubgroups::H1RouteOnly),
        Family::C => {
            let mut k_images: Vec<(&str, String)> = Vec::new();
            let a_names: Vec<String> = (1..p).map(|i| format!("a{i}")).collect();
            for a in &a_names {
                k_images.push((a, s("0")));
            }
            k_images.extend([
                ("v", s("0")),
                ("b", s("x2")),
                ("y", s("y2")),
                ("w", format!("y1^{p}")),
            ]);
            let mut out = vec![datum(
                s("K = <t^p, s>"),
                Some(spec(Family::B, p, n - 1)?),
                &k_images,
                BTreeMap::new(),
            )?];
            let cyclic = spec(Family::A, p, n)?;
            let symbols = knob_symbols(p);
            for i in 0..p {
                let mut knobs: BTreeMap<String, u32> = symbols.iter().map(|k| (k.clone(), 1)).collect();
                if i > 0 {
                    if let Some(given) = choices.knobs.get(&i) {
                        for (k, &v) in given {
                            let slot = knobs.get_mut(k).ok_or_else(|| CatalogError::UnknownKnob(k.clone()))?;
                            *slot = v % p;
                        }
                    }
                }
                let mut images: Vec<(&str, String)> = vec![("a1", s("x"))];
                for (j, a) in a_names.iter().enumerate().skip(1) {
                    let j = j + 1;
                    images.push((a, format!("{}*y^{}*x", knobs[&format!("c{j}")], j - 1)));
                }
                images.extend([
                    ("b", format!("{i}*x")),
                    ("y", s("0")),
                    ("v", format!("{}*y^{}*x", knobs["cv"], p - 1)),
                    ("w", format!("{}*y^{p}", knobs["cw"])),
                ]);
                out.push(datum(format!("M_{i} = <t s^{i}>"), Some(cyclic), &images, knobs)?);
            }
            out
        }
        Family::E if n == 3 => {
            let z4 = spec(Family::A, 2, 2)?;
            [("<i>", "x", "0"), ("<j>", "0", "x"), ("<ij>", "x", "x")]
                .into_iter()
                .map(|(label, x, y)| {
                    datum(s(label), Some(z4), &[("x", s(x)), ("y", s(y)), ("z", s("y^2"))], BTreeMap::new())
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        Family::E => {
            let quaternion = spec(Family::E, 2, n - 1)?;
            let y_h = choices.res_h_y.clone().unwrap_or_else(|| s("x + y"));
            vec![
                datum(
                    s("C = <t>"),
                    Some(spec(Family::A, 2, n - 1)?),
                    &[("x", s("x")), ("y", s("x")), ("z", s("y^2"))],
                    BTreeMap::new(),
                )?,
                datum(
                    s("H = <t^2, s>"),
                    Some(quaternion),
                    &[("x", s("0")), ("y", y_h), ("z", s("z"))],
                    BTreeMap::new(),
                )?,
                datum(
                    s("K = <t^2, t s>"),
                    Some(quaternion),
                    &[("x", s("x + y")), ("y", s("0")), ("z", s("z"))],
                    BTreeMap::new(),
                )?,
            ]
        }
        Family::D | Family::F => return Ok(MaximalSubgroups::H1RouteOnly),
    };
    Ok(MaximalSubgroups::Explicit(data))
}

/// Family E with n >= 4: the nonzero degree-1 classes of the ring of `H`
/// that give a well-defined restriction when used as the image of `y`.
pub fn admissible_res_h_choices(g: GroupSpec) -> Result<Vec<String>, CatalogError> {
    if g.family != Family::E || g.n < 4 {
        return Ok(Vec::new());
    }
    let target = presentation_of(GroupSpec::new(Family::E, 2, g.n - 1)?)?;
    let mut out = Vec::new();
    for class in h1_classes(&target)? {
        let text = target.format_element(&class);
        let choices = Choices {
            res_h_y: Some(text.clone()),
            ..Choices::default()
        };
        match maximal_subgroup_data_with(g, &choices) {
            Ok(_) => out.push(text),
            Err(CatalogError::Map(MapError::IllDefined(_))) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// The expected essential ideal with a one-line statement.
#[derive(Debug, Clone)]
pub struct TheoremRecord {
    pub group: GroupSpec,
    pub statement: String,
    pub expected: IdealSpec,
}

pub fn expected_generators(g: GroupSpec) -> Vec<String> {
    let p = g.p;
    let v = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    match g.family {
        Family::A if p != 2 && g.n == 1 => v(&["x", "y"]),
        Family::A => v(&["x"]),
        Family::B if p == 2 && g.n == 1 => v(&["x1^2*x2 + x1*x2^2"]),
        Family::B if p == 2 => v(&["x1*x2"]),
        Family::B if g.n == 1 => vec![
            "x1*x2".to_string(),
            "x1*y2 - x2*y1".to_string(),
            format!("x1*y2^{p} - x2*y1^{p}"),
            format!("y1^{p}*y2 - y1*y2^{p}"),
        ],
        Family::B => v(&["x1*x2", "x1*y2"]),
        Family::C if p == 2 => v(&["a*b"]),
        Family::C => {
            let mut out: Vec<String> = (1..p).map(|i| format!("a{i}*b")).collect();
            out.push("v*b".into());
            out.push("v*y".into());
            out
        }
        Family::D => Vec::new(),
        Family::E if g.n == 3 => v(&["x^2", "y^2"]),
        Family::E => v(&["x^3"]),
        Family::F => v(&["a*b"]),
    }
}

pub fn expected_essential(g: GroupSpec) -> Result<IdealSpec, CatalogError> {
    let pres = presentation_of(g)?;
    let gens = expected_generators(g);
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    Ok(IdealSpec::parse(pres, &refs)?)
}

pub fn theorem(g: GroupSpec) -> Result<TheoremRecord, CatalogError> {
    let expected = expected_essential(g)?;
    let gens = expected.display_generators();
    let ideal = if gens.is_empty() { "0".to_string() } else { format!("({})", gens.join(", ")) };
    Ok(TheoremRecord {
        group: g,
        statement: format!("Ess({}) = {ideal}", g.group_name()),
        expected,
    })
}

/// All nonzero classes of degree 1 over F_2, ordered by the bit pattern of
/// their coordinates.
pub fn h1_classes(pres: &Presentation) -> Result<Vec<Element>, CatalogError> {
    if pres.p() != 2 {
        return Err(CatalogError::OddPrime(pres.p()));
    }
    let m = pres.hilbert_dimension(1);
    if m >= 20 {
        return Err(CatalogError::OutOfRange(format!("{m} degree-1 classes is too many")));
    }
    Ok((1u32..1 << m)
        .map(|mask| {
            let coords: Vec<u32> = (0..m).map(|k| (mask >> k) & 1).collect();
            pres.from_coordinates(1, &coords)
        })
        .collect())
}

#[cfg(test)]
mod tests;
