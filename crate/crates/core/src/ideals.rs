//! Algebra morphisms, their degreewise kernels, ideal slices and graded
//! intersections.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Monomial, Presentation};
use crate::fplinalg::{intersect_subspaces, kernel_basis, subspaces_equal, EchelonBuilder, FpMatrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generator `{generator}` has degree {expected} but its image has degree {got}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        got: u32,
    },
    #[error("image of `{0}` is not homogeneous")]
    InhomogeneousImage(String),
    #[error("expected {expected} generator images, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("morphism is not well defined: {}", .0.iter().map(|v| v.relation.as_str()).collect::<Vec<_>>().join(", "))]
    IllDefined(Vec<Violation>),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("ideal generators must be nonzero")]
    ZeroGenerator,
    #[error("objects belong to different presentations")]
    PresentationMismatch,
    #[error("morphisms are not composable")]
    NotComposable,
}

/// A source relation (or exterior square) with nonzero image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub relation: String,
    pub image: String,
}

/// A degree-preserving map of graded-commutative algebras, determined by the
/// images of the source generators.
pub struct AlgebraMorphism {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Element>,
    memo: Mutex<HashMap<Monomial, Element>>,
}

impl std::fmt::Debug for AlgebraMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (g, img) in self.source.generators().iter().zip(&self.images) {
            m.entry(&g.name, &self.target.format_element(img));
        }
        m.finish()
    }
}

impl Clone for AlgebraMorphism {
    fn clone(&self) -> Self {
        AlgebraMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl AlgebraMorphism {
    /// Checks degrees only; see [`AlgebraMorphism::checked`].
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Element>,
    ) -> Result<Self, MapError> {
        if images.len() != source.num_generators() {
            return Err(MapError::WrongArity {
                expected: source.num_generators(),
                got: images.len(),
            });
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if img.presentation_id() != target.id() {
                return Err(MapError::PresentationMismatch);
            }
            if img.is_zero() {
                continue;
            }
            match target.degree_of(img) {
                None => return Err(MapError::InhomogeneousImage(g.name.clone())),
                Some(d) if d != g.degree => {
                    return Err(MapError::DegreeMismatch {
                        generator: g.name.clone(),
                        expected: g.degree,
                        got: d,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(AlgebraMorphism {
            source,
            target,
            images,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Builds the morphism and rejects it unless it is well defined.
    pub fn checked(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Element>,
    ) -> Result<Self, MapError> {
        let f = Self::new(source, target, images)?;
        let v = f.check_well_defined();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(MapError::IllDefined(v))
        }
    }

    /// Images given as `(generator, expression)` pairs parsed in the target.
    /// Every source generator must appear.
    pub fn from_strings(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: &[(&str, &str)],
    ) -> Result<Self, MapError> {
        let mut slots: Vec<Option<Element>> = vec![None; source.num_generators()];
        for (name, text) in images {
            let i = source.generator_index(name)?;
            slots[i] = Some(target.parse_element(text)?);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| MapError::MissingImage(source.generators()[i].name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Image of a free-algebra monomial, multiplied out left to right in the
    /// target.
    fn monomial_image(&self, m: &Monomial) -> Element {
        if let Some(e) = self.memo.lock().unwrap().get(m) {
            return e.clone();
        }
        let exps = m.exponents();
        let out = match exps.iter().rposition(|&e| e > 0) {
            None => self.target.one(),
            Some(last) => {
                let mut rest = exps.to_vec();
                rest[last] -= 1;
                let head = self.monomial_image(&Monomial::from_exponents(rest));
                self.target
                    .multiply(&head, &self.images[last])
                    .expect("images live in the target")
            }
        };
        self.memo.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    fn apply_terms<'a>(&self, terms: impl IntoIterator<Item = (&'a Monomial, &'a u32)>) -> Element {
        let p = self.target.p();
        let mut acc = self.target.zero();
        for (m, &c) in terms {
            let img = self.monomial_image(m);
            if !img.is_zero() {
                acc = self
                    .target
                    .add(&acc, &self.target.scale(&img, c % p))
                    .expect("same target");
            }
        }
        acc
    }

    pub fn apply(&self, e: &Element) -> Result<Element, MapError> {
        if e.presentation_id() != self.source.id() {
            return Err(MapError::PresentationMismatch);
        }
        Ok(self.apply_terms(e.terms()))
    }

    /// Lists every source relation whose image in the target is nonzero,
    /// plus squares of exterior generators at p = 2 whose images do not
    /// square to zero.
    pub fn check_well_defined(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for ((_, terms), text) in self
            .source
            .relation_terms()
            .into_iter()
            .zip(self.source.relation_strings())
        {
            let img = self.apply_terms(&terms);
            if !img.is_zero() {
                out.push(Violation {
                    relation: text,
                    image: self.target.format_element(&img),
                });
            }
        }
        if self.source.p() == 2 {
            for (i, g) in self.source.generators().iter().enumerate() {
                if self.source.is_exterior(i) {
                    let sq = self
                        .target
                        .multiply(&self.images[i], &self.images[i])
                        .expect("same target");
                    if !sq.is_zero() {
                        out.push(Violation {
                            relation: format!("{}^2", g.name),
                            image: self.target.format_element(&sq),
                        });
                    }
                }
            }
        }
        out
    }

    /// Matrix of the degree-`d` component: target dim rows, source dim
    /// columns, in the normal-form bases.
    pub fn matrix_degree(&self, d: u32) -> FpMatrix {
        let sb = self.source.degree_basis(d);
        let tb = self.target.degree_basis(d);
        let mut m = FpMatrix::zeros(self.target.p(), tb.dim(), sb.dim());
        for (j, mono) in sb.representatives().enumerate() {
            let img = self.monomial_image(mono);
            for (i, c) in self.target.coordinates(&img, d).into_iter().enumerate() {
                if c != 0 {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    pub fn kernel_degree(&self, d: u32) -> Subspace {
        kernel_basis(&self.matrix_degree(d))
    }

    pub fn kernel_family(&self, max_degree: u32) -> GradedSubspaceFamily {
        GradedSubspaceFamily {
            presentation: self.source.clone(),
            slices: (0..=max_degree).map(|d| self.kernel_degree(d)).collect(),
        }
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &AlgebraMorphism) -> Result<AlgebraMorphism, MapError> {
        if self.target.id() != after.source.id() {
            return Err(MapError::NotComposable);
        }
        let images = self
            .images
            .iter()
            .map(|e| after.apply(e))
            .collect::<Result<Vec<_>, _>>()?;
        AlgebraMorphism::new(self.source.clone(), after.target.clone(), images)
    }
}

/// `g ∘ f`.
pub fn compose(g: &AlgebraMorphism, f: &AlgebraMorphism) -> Result<AlgebraMorphism, MapError> {
    f.then(g)
}

/// A homogeneous ideal given by generators.
#[derive(Clone)]
pub struct IdealSpec {
    presentation: Arc<Presentation>,
    generators: Vec<Element>,
    texts: Vec<String>,
    slices: Arc<Mutex<Vec<Subspace>>>,
}

impl std::fmt::Debug for IdealSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.texts.join(", "))
    }
}

impl IdealSpec {
    pub fn new(presentation: Arc<Presentation>, generators: Vec<Element>) -> Result<Self, MapError> {
        for g in &generators {
            if g.presentation_id() != presentation.id() {
                return Err(MapError::PresentationMismatch);
            }
            if g.is_zero() {
                return Err(MapError::ZeroGenerator);
            }
            if presentation.degree_of(g).is_none() {
                return Err(MapError::Inhomogeneous);
            }
        }
        let texts = generators.iter().map(|g| presentation.format_element(g)).collect();
        Ok(IdealSpec {
            presentation,
            generators,
            texts,
            slices: Arc::new(Mutex::new(Vec::new())),
        })
    }

    /// Parses each generator; the input texts are kept for display.
    pub fn parse(presentation: Arc<Presentation>, generators: &[&str]) -> Result<Self, MapError> {
        let gens = generators
            .iter()
            .map(|g| presentation.parse_element(g))
            .collect::<Result<Vec<_>, _>>()?;
        let mut ideal = Self::new(presentation, gens)?;
        ideal.texts = generators.iter().map(|g| g.trim().to_string()).collect();
        Ok(ideal)
    }

    pub fn empty(presentation: Arc<Presentation>) -> Self {
        Self::new(presentation, Vec::new()).expect("no generators to check")
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn format_generators(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| self.presentation.format_element(g))
            .collect()
    }

    /// Generators as written when parsed, otherwise in normal form.
    pub fn display_generators(&self) -> &[String] {
        &self.texts
    }

    /// A new ideal with one more generator.
    pub fn with_generator(&self, g: Element) -> Result<Self, MapError> {
        let mut gens = self.generators.clone();
        gens.push(g);
        let mut ideal = Self::new(self.presentation.clone(), gens)?;
        ideal.texts[..self.texts.len()].clone_from_slice(&self.texts);
        Ok(ideal)
    }

    /// Degree-`d` slice. Built inductively: the generators of degree `d`
    /// together with `x · I_{d - |x|}` for every algebra generator `x`.
    pub fn degree(&self, d: u32) -> Subspace {
        let mut cache = self.slices.lock().unwrap();
        while cache.len() <= d as usize {
            let next = self.compute_slice(cache.len() as u32, &cache);
            cache.push(next);
        }
        cache[d as usize].clone()
    }

    fn compute_slice(&self, d: u32, lower: &[Subspace]) -> Subspace {
        let pres = &self.presentation;
        let p = pres.p();
        let dim = pres.hilbert_dimension(d);
        let mut b = EchelonBuilder::new(p, dim);
        for g in &self.generators {
            if pres.degree_of(g) == Some(d) {
                b.insert(pres.coordinates(g, d));
            }
        }
        for (i, gen) in pres.generators().iter().enumerate() {
            if gen.degree > d {
                continue;
            }
            let lo = d - gen.degree;
            let x = pres.generator_at(i);
            for v in lower[lo as usize].basis_vectors() {
                let e = pres.from_coordinates(lo, &v);
                let prod = pres.multiply(&x, &e).expect("same presentation");
                b.insert(pres.coordinates(&prod, d));
            }
        }
        b.into_subspace()
    }

    pub fn family(&self, max_degree: u32) -> GradedSubspaceFamily {
        GradedSubspaceFamily {
            presentation: self.presentation.clone(),
            slices: (0..=max_degree).map(|d| self.degree(d)).collect(),
        }
    }
}

pub fn ideal_degree(ideal: &IdealSpec, d: u32) -> Subspace {
    ideal.degree(d)
}

/// Whether a homogeneous element lies in the ideal.
pub fn membership(e: &Element, ideal: &IdealSpec) -> Result<bool, MapError> {
    let pres = &ideal.presentation;
    if e.presentation_id() != pres.id() {
        return Err(MapError::PresentationMismatch);
    }
    if e.is_zero() {
        return Ok(true);
    }
    let d = pres.degree_of(e).ok_or(MapError::Inhomogeneous)?;
    Ok(ideal.degree(d).contains(&pres.coordinates(e, d)))
}

/// Subspaces of each degree `0..=max_degree` of one presentation.
#[derive(Clone, Debug)]
pub struct GradedSubspaceFamily {
    presentation: Arc<Presentation>,
    slices: Vec<Subspace>,
}

impl GradedSubspaceFamily {
    pub fn new(presentation: Arc<Presentation>, slices: Vec<Subspace>) -> Result<Self, MapError> {
        for (d, s) in slices.iter().enumerate() {
            if s.ambient_dim() != presentation.hilbert_dimension(d as u32) || s.p() != presentation.p() {
                return Err(MapError::PresentationMismatch);
            }
        }
        Ok(GradedSubspaceFamily { presentation, slices })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn max_degree(&self) -> u32 {
        self.slices.len() as u32 - 1
    }

    pub fn degree(&self, d: u32) -> &Subspace {
        &self.slices[d as usize]
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.slices.iter().map(Subspace::dim).collect()
    }

    /// Elements spanning the degree-`d` slice.
    pub fn basis_elements(&self, d: u32) -> Vec<Element> {
        self.slices[d as usize]
            .basis_vectors()
            .iter()
            .map(|v| self.presentation.from_coordinates(d, v))
            .collect()
    }
}

/// Degreewise intersection for `d ≤ max_degree`. An empty list yields the
/// whole algebra, which needs the presentation, so at least one family is
/// required.
pub fn intersect_graded(
    families: &[GradedSubspaceFamily],
    max_degree: u32,
) -> Result<GradedSubspaceFamily, MapError> {
    let first = families.first().ok_or(MapError::PresentationMismatch)?;
    let pres = first.presentation.clone();
    if families.iter().any(|f| f.presentation.id() != pres.id() || f.max_degree() < max_degree) {
        return Err(MapError::PresentationMismatch);
    }
    let slices = (0..=max_degree)
        .map(|d| {
            let parts: Vec<Subspace> = families.iter().map(|f| f.degree(d).clone()).collect();
            intersect_subspaces(pres.p(), pres.hilbert_dimension(d), &parts)
                .expect("slices checked against the presentation")
        })
        .collect();
    Ok(GradedSubspaceFamily {
        presentation: pres,
        slices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: u32,
    pub dim_left: usize,
    pub dim_right: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityReport {
    pub per_degree: Vec<DegreeComparison>,
}

impl EqualityReport {
    pub fn equal(&self) -> bool {
        self.per_degree.iter().all(|c| c.equal)
    }

    pub fn first_mismatch(&self) -> Option<u32> {
        self.per_degree.iter().find(|c| !c.equal).map(|c| c.degree)
    }
}

pub fn ideals_equal_up_to(
    left: &GradedSubspaceFamily,
    right: &GradedSubspaceFamily,
    max_degree: u32,
) -> Result<EqualityReport, MapError> {
    if left.presentation.id() != right.presentation.id()
        || left.max_degree() < max_degree
        || right.max_degree() < max_degree
    {
        return Err(MapError::PresentationMismatch);
    }
    let per_degree = (0..=max_degree)
        .map(|d| {
            let (a, b) = (left.degree(d), right.degree(d));
            DegreeComparison {
                degree: d,
                dim_left: a.dim(),
                dim_right: b.dim(),
                equal: subspaces_equal(a, b).expect("same ambient"),
            }
        })
        .collect();
    Ok(EqualityReport { per_degree })
}

#[cfg(test)]
mod tests;
