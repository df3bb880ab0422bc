//! The Bockstein and the first reduced power on a presentation, extended
//! from generator images as derivations, and the Steenrod closure of an
//! ideal.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Monomial, Presentation};
use crate::ideals::{membership, IdealSpec, MapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{op} image of `{generator}` has the wrong degree")]
    BadDegree { op: &'static str, generator: String },
    #[error("beta(beta({0})) is not zero")]
    BetaSquare(String),
    #[error("expected {expected} images, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("P^1 is not defined at p = 2")]
    NoPowerAtTwo,
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("presentation has no generator `{0}`")]
    MissingGenerator(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Op {
    Beta,
    Power,
}

pub struct SteenrodAction {
    presentation: Arc<Presentation>,
    beta: Vec<Element>,
    power: Option<Vec<Element>>,
    memo: Mutex<HashMap<(Op, Monomial), Element>>,
}

impl SteenrodAction {
    /// `power` must be `None` at p = 2.
    pub fn new(
        presentation: Arc<Presentation>,
        beta: Vec<Element>,
        power: Option<Vec<Element>>,
    ) -> Result<Self, SteenrodError> {
        let p = presentation.p();
        let n = presentation.num_generators();
        if p == 2 && power.is_some() {
            return Err(SteenrodError::NoPowerAtTwo);
        }
        let check = |op: &'static str, images: &[Element], shift: u32| {
            if images.len() != n {
                return Err(SteenrodError::WrongArity {
                    expected: n,
                    got: images.len(),
                });
            }
            for (g, img) in presentation.generators().iter().zip(images) {
                if img.presentation_id() != presentation.id() {
                    return Err(AlgebraError::PresentationMismatch.into());
                }
                if !img.is_zero() && presentation.degree_of(img) != Some(g.degree + shift) {
                    return Err(SteenrodError::BadDegree {
                        op,
                        generator: g.name.clone(),
                    });
                }
            }
            Ok(())
        };
        check("beta", &beta, 1)?;
        if let Some(pw) = &power {
            check("P^1", pw, 2 * (p - 1))?;
        }
        let action = SteenrodAction {
            presentation,
            beta,
            power,
            memo: Mutex::new(HashMap::new()),
        };
        for (i, g) in action.presentation.generators().iter().enumerate() {
            if !action.bockstein(&action.beta[i])?.is_zero() {
                return Err(SteenrodError::BetaSquare(g.name.clone()));
            }
        }
        Ok(action)
    }

    /// Action on an elementary abelian ring with generators `x1, x2, …`
    /// (and `y1, y2, …` at odd p): at odd p, β x_i = y_i, β y_i = 0,
    /// P¹ x_i = 0, P¹ y_i = y_i^p; at p = 2, β x_i = x_i².
    pub fn elementary(presentation: Arc<Presentation>) -> Result<Self, SteenrodError> {
        let pres = &presentation;
        let p = pres.p();
        let mut beta = Vec::new();
        let mut power = Vec::new();
        for g in pres.generators() {
            let name = &g.name;
            let (b, pw) = match (name.as_bytes()[0], p) {
                (b'x', 2) => (pres.parse_element(&format!("{name}^2"))?, pres.zero()),
                (b'x', _) => {
                    let y = format!("y{}", &name[1..]);
                    pres.generator_index(&y)
                        .map_err(|_| SteenrodError::MissingGenerator(y.clone()))?;
                    (pres.parse_element(&y)?, pres.zero())
                }
                (b'y', _) if p != 2 => (pres.zero(), pres.parse_element(&format!("{name}^{p}"))?),
                _ => return Err(SteenrodError::MissingGenerator(name.clone())),
            };
            beta.push(b);
            power.push(pw);
        }
        let power = (p != 2).then_some(power);
        Self::new(presentation, beta, power)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn has_power(&self) -> bool {
        self.power.is_some()
    }

    /// Value on a monomial written `m' · g` with `g` its last generator:
    /// `D(m' g) = D(m') g + (-1)^{|D||m'|} m' D(g)`.
    fn on_monomial(&self, op: Op, m: &Monomial) -> Element {
        if let Some(e) = self.memo.lock().unwrap().get(&(op, m.clone())) {
            return e.clone();
        }
        let pres = &self.presentation;
        let exps = m.exponents();
        let out = match exps.iter().rposition(|&e| e > 0) {
            None => pres.zero(),
            Some(last) => {
                let mut rest = exps.to_vec();
                rest[last] -= 1;
                let head = Monomial::from_exponents(rest);
                let head_elt = pres.monomial_element(&head);
                let g = pres.generator_at(last);
                let image = match op {
                    Op::Beta => &self.beta[last],
                    Op::Power => &self.power.as_ref().expect("checked by caller")[last],
                };
                let first = pres
                    .multiply(&self.on_monomial(op, &head), &g)
                    .expect("same presentation");
                let mut second = pres.multiply(&head_elt, image).expect("same presentation");
                if op == Op::Beta && pres.monomial_degree(&head) % 2 == 1 {
                    second = pres.neg(&second);
                }
                pres.add(&first, &second).expect("same presentation")
            }
        };
        self.memo.lock().unwrap().insert((op, m.clone()), out.clone());
        out
    }

    fn apply(&self, op: Op, e: &Element) -> Result<Element, SteenrodError> {
        let pres = &self.presentation;
        if e.presentation_id() != pres.id() {
            return Err(AlgebraError::PresentationMismatch.into());
        }
        if !pres.is_homogeneous(e) {
            return Err(SteenrodError::Inhomogeneous);
        }
        let mut acc = pres.zero();
        for (m, &c) in e.terms() {
            let v = self.on_monomial(op, m);
            acc = pres.add(&acc, &pres.scale(&v, c))?;
        }
        Ok(acc)
    }

    pub fn bockstein(&self, e: &Element) -> Result<Element, SteenrodError> {
        self.apply(Op::Beta, e)
    }

    pub fn power_p1(&self, e: &Element) -> Result<Element, SteenrodError> {
        if self.power.is_none() {
            return Err(SteenrodError::NoPowerAtTwo);
        }
        self.apply(Op::Power, e)
    }

    /// Operations in scope for the closure: β, and P¹ at odd p.
    fn images(&self, e: &Element) -> Result<Vec<Element>, SteenrodError> {
        let mut out = vec![self.bockstein(e)?];
        if self.has_power() {
            out.push(self.power_p1(e)?);
        }
        Ok(out)
    }
}

pub fn bockstein(action: &SteenrodAction, e: &Element) -> Result<Element, SteenrodError> {
    action.bockstein(e)
}

pub fn power_p1(action: &SteenrodAction, e: &Element) -> Result<Element, SteenrodError> {
    action.power_p1(e)
}

/// Smallest ideal containing `seed` whose generators are closed under the
/// operations in scope, up to degree `max_degree`. Images already in the
/// current ideal are not appended.
pub fn steenrod_closure(
    action: &SteenrodAction,
    seed: &IdealSpec,
    max_degree: u32,
) -> Result<IdealSpec, SteenrodError> {
    let pres = &action.presentation;
    if seed.presentation().id() != pres.id() {
        return Err(AlgebraError::PresentationMismatch.into());
    }
    let mut ideal = seed.clone();
    let mut next = 0;
    while next < ideal.generators().len() {
        let g = ideal.generators()[next].clone();
        next += 1;
        for img in action.images(&g)? {
            if img.is_zero() || pres.degree_of(&img).is_some_and(|d| d > max_degree) {
                continue;
            }
            if !membership(&img, &ideal)? {
                ideal = ideal.with_generator(img)?;
            }
        }
    }
    Ok(ideal)
}
