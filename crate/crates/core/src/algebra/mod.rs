//! Finitely presented graded-commutative algebras over F_p.
//!
//! A [`Presentation`] lists generators (with degrees and an optional
//! exterior flag) and homogeneous relations. Every graded piece is computed
//! on demand as the span of all canonical monomials of that degree modulo the
//! span of all monomial multiples of the relations; the non-pivot monomials of
//! that quotient are the normal-form representatives.
//!
//! Sign conventions: at odd p an odd-degree generator anticommutes with every
//! other odd-degree generator and squares to zero. At p = 2 everything
//! commutes and only generators flagged `exterior` square to zero.

mod file;
mod parse;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fplinalg::{self, rref, FpMatrix, LinalgError};

pub use file::PresentationFile;
pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("relation `{0}` is not homogeneous")]
    InhomogeneousRelation(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("generator name collision after renaming: `{0}`")]
    NameCollision(String),
    #[error("presentations have different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),
    #[error("malformed presentation file: {0}")]
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: u32,
    #[serde(default)]
    pub exterior: bool,
}

impl GeneratorDecl {
    pub fn new(name: &str, degree: u32) -> Self {
        GeneratorDecl {
            name: name.to_string(),
            degree,
            exterior: false,
        }
    }

    pub fn exterior(name: &str, degree: u32) -> Self {
        GeneratorDecl {
            name: name.to_string(),
            degree,
            exterior: true,
        }
    }
}

/// Exponent vector indexed by generator position.
///
/// The derived ordering is lexicographic in declaration order; the largest
/// monomial of a degree comes first in bases and printed output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(num_generators: usize) -> Self {
        Monomial(vec![0; num_generators])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// Unreduced linear combination of canonical monomials (the free
/// graded-commutative algebra, before dividing out the relations).
pub type Terms = BTreeMap<Monomial, u32>;

fn add_term(terms: &mut Terms, m: Monomial, c: u32, p: u32) {
    let c = c % p;
    if c == 0 {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            let s = (*slot.get() + c) % p;
            if s == 0 {
                slot.remove();
            } else {
                *slot.get_mut() = s;
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Relation {
    degree: u32,
    terms: Terms,
}

/// One graded piece: all canonical monomials of the degree, the chosen
/// representatives, and the projection onto them.
#[derive(Debug)]
pub struct DegreeBasis {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    representatives: Vec<usize>,
    rep_pos: Vec<Option<usize>>,
    projection: FpMatrix,
}

impl DegreeBasis {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    /// All canonical monomials of this degree, largest first.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.representatives.iter().map(|&i| &self.monomials[i])
    }

    pub fn representative(&self, i: usize) -> &Monomial {
        &self.monomials[self.representatives[i]]
    }

    /// `dim x num_monomials` matrix sending a monomial to its normal form
    /// coordinates.
    pub fn projection(&self) -> &FpMatrix {
        &self.projection
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Position of `m` among the representatives, if it is one.
    pub fn representative_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).and_then(|&i| self.rep_pos[i])
    }

    fn project_terms(&self, terms: &Terms, p: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.dim()];
        for (m, &c) in terms {
            let col = self.index[m];
            for (slot, r) in out.iter_mut().enumerate() {
                let v = self.projection.get(slot, col);
                if v != 0 {
                    *r = (*r + c * v) % p;
                }
            }
        }
        out
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub struct Presentation {
    id: u64,
    p: u32,
    generators: Vec<GeneratorDecl>,
    relations: Vec<Relation>,
    cache: RwLock<HashMap<u32, Arc<DegreeBasis>>>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.summary())
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Builds a presentation from generator declarations and relation
    /// strings in the element grammar. Relations that vanish identically
    /// (for example the square of an odd generator at odd p) are dropped.
    pub fn new(
        p: u32,
        generators: Vec<GeneratorDecl>,
        relations: &[&str],
    ) -> Result<Arc<Presentation>, AlgebraError> {
        fplinalg::check_prime(p)?;
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !valid_name(&g.name) {
                return Err(AlgebraError::InvalidName(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut pres = Presentation {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            generators,
            relations: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        };
        let mut rels = Vec::new();
        for text in relations {
            let terms = parse::parse_terms(&pres, text)?;
            if terms.is_empty() {
                continue;
            }
            let degrees: std::collections::BTreeSet<u32> =
                terms.keys().map(|m| pres.monomial_degree(m)).collect();
            if degrees.len() != 1 {
                return Err(AlgebraError::InhomogeneousRelation(text.to_string()));
            }
            rels.push(Relation {
                degree: *degrees.iter().next().unwrap(),
                terms,
            });
        }
        pres.relations = rels;
        Ok(Arc::new(pres))
    }

    /// The ground field as a presentation with no generators.
    pub fn trivial(p: u32) -> Result<Arc<Presentation>, AlgebraError> {
        Presentation::new(p, Vec::new(), &[])
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    /// Relations as printed strings (after sign normalization).
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| self.format_terms(&r.terms))
            .collect()
    }

    /// Relations as elements of this presentation, each one reduced (so all
    /// of them are zero); paired with the raw unreduced terms for evaluation
    /// under morphisms.
    pub fn relation_terms(&self) -> Vec<(u32, Terms)> {
        self.relations
            .iter()
            .map(|r| (r.degree, r.terms.clone()))
            .collect()
    }

    /// Whether generator `i` squares to zero.
    pub fn is_exterior(&self, i: usize) -> bool {
        let g = &self.generators[i];
        g.exterior || self.is_odd(i)
    }

    /// Whether generator `i` carries a Koszul sign (odd degree at odd p).
    pub fn is_odd(&self, i: usize) -> bool {
        self.p != 2 && self.generators[i].degree % 2 == 1
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn neg_one(&self) -> u32 {
        self.p - 1
    }

    /// Sorts a word of generator powers into declaration order, tracking the
    /// Koszul sign. Returns `None` when the word is zero because a
    /// square-zero generator repeats.
    pub(crate) fn normalize_word(&self, word: &[(usize, u32)]) -> Option<(u32, Monomial)> {
        let mut factors: Vec<(usize, u32)> = word.iter().copied().filter(|f| f.1 > 0).collect();
        let mut odd_swaps = 0u32;
        // Insertion sort so that each adjacent transposition is counted.
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1].0 > factors[j].0 {
                let (a, b) = (factors[j - 1], factors[j]);
                if self.factor_is_odd(a) && self.factor_is_odd(b) {
                    odd_swaps += 1;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut exps = vec![0u32; self.generators.len()];
        for (g, e) in factors {
            exps[g] += e;
        }
        for (i, &e) in exps.iter().enumerate() {
            if e >= 2 && self.is_exterior(i) {
                return None;
            }
        }
        let sign = if odd_swaps % 2 == 1 { self.neg_one() } else { 1 };
        Some((sign, Monomial(exps)))
    }

    fn factor_is_odd(&self, (g, e): (usize, u32)) -> bool {
        self.is_odd(g) && e % 2 == 1
    }

    /// Normalizes a word given by generator names.
    pub fn normalize_monomial(
        &self,
        word: &[(&str, u32)],
    ) -> Result<Option<(u32, Monomial)>, AlgebraError> {
        let mut idx = Vec::with_capacity(word.len());
        for (name, e) in word {
            idx.push((self.generator_index(name)?, *e));
        }
        Ok(self.normalize_word(&idx))
    }

    /// Product of two canonical monomials with its sign.
    pub(crate) fn monomial_product(&self, a: &Monomial, b: &Monomial) -> Option<(u32, Monomial)> {
        let mut exps = Vec::with_capacity(a.0.len());
        for (i, (x, y)) in a.0.iter().zip(&b.0).enumerate() {
            let e = x + y;
            if e >= 2 && self.is_exterior(i) {
                return None;
            }
            exps.push(e);
        }
        // Moving each odd factor of b left past the odd factors of a with a
        // larger index.
        let mut swaps = 0u32;
        if self.p != 2 {
            let mut odd_after = 0u32;
            for i in (0..a.0.len()).rev() {
                if self.factor_is_odd((i, b.0[i])) {
                    swaps += odd_after;
                }
                if self.factor_is_odd((i, a.0[i])) {
                    odd_after += 1;
                }
            }
        }
        let sign = if swaps % 2 == 1 { self.neg_one() } else { 1 };
        Some((sign, Monomial(exps)))
    }

    /// All canonical monomials of degree `d`, largest first.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.generators.len()];
        self.enumerate(0, d, &mut cur, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let deg = self.generators[i].degree;
        let mut max = remaining / deg;
        if self.is_exterior(i) {
            max = max.min(1);
        }
        for e in 0..=max {
            cur[i] = e;
            self.enumerate(i + 1, remaining - e * deg, cur, out);
        }
        cur[i] = 0;
    }

    /// Normal-form basis of the degree-`d` piece. Cached per degree.
    pub fn degree_basis(&self, d: u32) -> Arc<DegreeBasis> {
        if let Some(b) = self.cache.read().expect("cache poisoned").get(&d) {
            return Arc::clone(b);
        }
        let basis = Arc::new(self.compute_degree_basis(d));
        self.cache
            .write()
            .expect("cache poisoned")
            .entry(d)
            .or_insert(basis)
            .clone()
    }

    fn compute_degree_basis(&self, d: u32) -> DegreeBasis {
        let p = self.p;
        let monomials = self.monomials_of_degree(d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let n = monomials.len();
        let mut rows = Vec::new();
        for rel in &self.relations {
            if rel.degree > d {
                continue;
            }
            for m in self.monomials_of_degree(d - rel.degree) {
                let mut row = vec![0u32; n];
                let mut nonzero = false;
                for (rm, &c) in &rel.terms {
                    if let Some((s, prod)) = self.monomial_product(&m, rm) {
                        let col = index[&prod];
                        row[col] = (row[col] + s * c) % p;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        let rel_space = FpMatrix::from_rows(p, n, &rows).expect("rows have monomial width");
        let (r, pivots) = rref(&rel_space);
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let representatives: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut rep_pos = vec![None; n];
        for (k, &c) in representatives.iter().enumerate() {
            rep_pos[c] = Some(k);
        }
        let dim = representatives.len();
        let mut projection = FpMatrix::zeros(p, dim, n);
        for (k, &c) in representatives.iter().enumerate() {
            projection.set(k, c, 1);
        }
        // A pivot monomial equals minus the non-pivot part of its row.
        for (i, &pc) in pivots.iter().enumerate() {
            for (c, &v) in r.row(i).iter().enumerate() {
                if c != pc && v != 0 {
                    projection.set(rep_pos[c].expect("non-pivot column"), pc, p - v);
                }
            }
        }
        DegreeBasis {
            degree: d,
            monomials,
            index,
            representatives,
            rep_pos,
            projection,
        }
    }

    pub fn hilbert_dimension(&self, d: u32) -> usize {
        self.degree_basis(d).dim()
    }

    pub fn hilbert_series(&self, max_degree: u32) -> Vec<usize> {
        (0..=max_degree).map(|d| self.hilbert_dimension(d)).collect()
    }

    // ---- elements -------------------------------------------------------

    pub fn zero(&self) -> Element {
        Element {
            presentation: self.id,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Element {
        self.reduce(std::iter::once((Monomial::one(self.generators.len()), 1)).collect())
    }

    pub fn generator(&self, name: &str) -> Result<Element, AlgebraError> {
        let i = self.generator_index(name)?;
        Ok(self.generator_at(i))
    }

    pub fn generator_at(&self, i: usize) -> Element {
        let mut exps = vec![0; self.generators.len()];
        exps[i] = 1;
        self.reduce(std::iter::once((Monomial(exps), 1)).collect())
    }

    pub fn monomial_element(&self, m: &Monomial) -> Element {
        self.reduce(std::iter::once((m.clone(), 1)).collect())
    }

    /// Reduces free-algebra terms to normal form, degree by degree.
    pub fn reduce(&self, terms: Terms) -> Element {
        let mut by_degree: BTreeMap<u32, Terms> = BTreeMap::new();
        for (m, c) in terms {
            if c % self.p != 0 {
                by_degree
                    .entry(self.monomial_degree(&m))
                    .or_default()
                    .insert(m, c % self.p);
            }
        }
        let mut out = BTreeMap::new();
        for (d, part) in by_degree {
            let basis = self.degree_basis(d);
            let coords = basis.project_terms(&part, self.p);
            for (k, c) in coords.into_iter().enumerate() {
                if c != 0 {
                    out.insert(basis.representative(k).clone(), c);
                }
            }
        }
        Element {
            presentation: self.id,
            terms: out,
        }
    }

    fn check_owner(&self, e: &Element) -> Result<(), AlgebraError> {
        if e.presentation == self.id {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch)
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        let mut terms = a.terms.clone();
        for (m, &c) in &b.terms {
            add_term(&mut terms, m.clone(), c, self.p);
        }
        Ok(Element {
            presentation: self.id,
            terms,
        })
    }

    pub fn scale(&self, a: &Element, c: u32) -> Element {
        let c = c % self.p;
        let terms = if c == 0 {
            BTreeMap::new()
        } else {
            a.terms
                .iter()
                .map(|(m, &v)| (m.clone(), v * c % self.p))
                .collect()
        };
        Element {
            presentation: a.presentation,
            terms,
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(a, self.p - 1)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.add(a, &self.neg(b))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        let mut raw = Terms::new();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                if let Some((s, m)) = self.monomial_product(ma, mb) {
                    add_term(&mut raw, m, ca * cb % self.p * s, self.p);
                }
            }
        }
        Ok(self.reduce(raw))
    }

    pub fn pow(&self, a: &Element, e: u32) -> Result<Element, AlgebraError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Product of a list of elements, left to right.
    pub fn product(&self, factors: &[Element]) -> Result<Element, AlgebraError> {
        factors
            .iter()
            .try_fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    pub fn degree_of(&self, e: &Element) -> Option<u32> {
        e.degree_with(|m| self.monomial_degree(m))
    }

    pub fn is_homogeneous(&self, e: &Element) -> bool {
        e.is_zero() || self.degree_of(e).is_some()
    }

    /// Coordinates of the degree-`d` component of `e` in the normal-form
    /// basis.
    pub fn coordinates(&self, e: &Element, d: u32) -> Vec<u32> {
        let basis = self.degree_basis(d);
        let mut v = vec![0u32; basis.dim()];
        for (m, &c) in &e.terms {
            if self.monomial_degree(m) == d {
                let k = basis
                    .representative_index(m)
                    .expect("element terms are representatives");
                v[k] = c;
            }
        }
        v
    }

    pub fn from_coordinates(&self, d: u32, coords: &[u32]) -> Element {
        let basis = self.degree_basis(d);
        assert_eq!(coords.len(), basis.dim());
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c % self.p != 0)
            .map(|(k, &c)| (basis.representative(k).clone(), c % self.p))
            .collect();
        Element {
            presentation: self.id,
            terms,
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, AlgebraError> {
        let terms = parse::parse_terms(self, text)?;
        Ok(self.reduce(terms))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        parts.join("*")
    }

    fn format_terms(&self, terms: &Terms) -> String {
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, &c)) in terms.iter().rev().enumerate() {
            let body = self.format_monomial(m);
            let (sep, coeff) = if i == 0 {
                ("", c)
            } else if self.p > 2 && c == self.p - 1 {
                (" - ", 1)
            } else {
                (" + ", c)
            };
            out.push_str(sep);
            match (body.is_empty(), coeff) {
                (true, _) => out.push_str(&coeff.to_string()),
                (false, 1) => out.push_str(&body),
                (false, _) => out.push_str(&format!("{coeff}*{body}")),
            }
        }
        out
    }

    /// Prints an element in the element grammar; parsing the output gives
    /// back the same element.
    pub fn format_element(&self, e: &Element) -> String {
        self.format_terms(&e.terms)
    }

    /// Human-readable summary such as `F_2[x, y, z]/(x*y)` with degrees.
    pub fn summary(&self) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let ext = if g.exterior { ", ext" } else { "" };
                format!("{}:{}{}", g.name, g.degree, ext)
            })
            .collect();
        let rels = self.relation_strings();
        if rels.is_empty() {
            format!("F_{}[{}]", self.p, gens.join(", "))
        } else {
            format!("F_{}[{}]/({})", self.p, gens.join(", "), rels.join(", "))
        }
    }

    /// Same algebra with generators renamed positionally.
    pub fn renamed(&self, names: &[&str]) -> Result<Arc<Presentation>, AlgebraError> {
        assert_eq!(names.len(), self.generators.len());
        let gens: Vec<GeneratorDecl> = self
            .generators
            .iter()
            .zip(names)
            .map(|(g, n)| GeneratorDecl {
                name: n.to_string(),
                degree: g.degree,
                exterior: g.exterior,
            })
            .collect();
        let renamed = Presentation {
            id: 0,
            p: self.p,
            generators: gens.clone(),
            relations: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        };
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| renamed.format_terms(&r.terms))
            .collect();
        let rel_refs: Vec<&str> = rels.iter().map(String::as_str).collect();
        Presentation::new(self.p, gens, &rel_refs)
    }
}

/// Graded tensor product of two presentations. Generators of the factors are
/// renamed by appending `suffix_a` and `suffix_b`.
pub fn kunneth_product_with_suffixes(
    a: &Presentation,
    suffix_a: &str,
    b: &Presentation,
    suffix_b: &str,
) -> Result<Arc<Presentation>, AlgebraError> {
    if a.p != b.p {
        return Err(AlgebraError::PrimeMismatch(a.p, b.p));
    }
    let rename = |g: &GeneratorDecl, s: &str| GeneratorDecl {
        name: format!("{}{}", g.name, s),
        degree: g.degree,
        exterior: g.exterior,
    };
    let mut gens: Vec<GeneratorDecl> = a.generators.iter().map(|g| rename(g, suffix_a)).collect();
    gens.extend(b.generators.iter().map(|g| rename(g, suffix_b)));
    let mut seen = std::collections::HashSet::new();
    for g in &gens {
        if !seen.insert(g.name.clone()) {
            return Err(AlgebraError::NameCollision(g.name.clone()));
        }
    }
    let na = a.generators.len();
    let shifted = |terms: &Terms, offset: usize, total: usize| -> Terms {
        terms
            .iter()
            .map(|(m, &c)| {
                let mut exps = vec![0u32; total];
                exps[offset..offset + m.0.len()].copy_from_slice(&m.0);
                (Monomial(exps), c)
            })
            .collect()
    };
    let total = gens.len();
    let mut relations: Vec<Relation> = a
        .relations
        .iter()
        .map(|r| Relation {
            degree: r.degree,
            terms: shifted(&r.terms, 0, total),
        })
        .collect();
    relations.extend(b.relations.iter().map(|r| Relation {
        degree: r.degree,
        terms: shifted(&r.terms, na, total),
    }));
    Ok(Arc::new(Presentation {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        p: a.p,
        generators: gens,
        relations,
        cache: RwLock::new(HashMap::new()),
    }))
}

/// Künneth product with the factors' generators suffixed `1` and `2`.
pub fn kunneth_product(
    a: &Presentation,
    b: &Presentation,
) -> Result<Arc<Presentation>, AlgebraError> {
    kunneth_product_with_suffixes(a, "1", b, "2")
}

/// An element in normal form: coefficients on representative monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    presentation: u64,
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn presentation_id(&self) -> u64 {
        self.presentation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    fn degree_with(&self, deg: impl Fn(&Monomial) -> u32) -> Option<u32> {
        let mut it = self.terms.keys().map(deg);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}
