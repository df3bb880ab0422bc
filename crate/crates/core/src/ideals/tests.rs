use super::*;
use crate::algebra::{kunneth_product, GeneratorDecl};
use crate::fplinalg::Subspace;
use proptest::prelude::*;

fn pres(p: u32, gens: &[(&str, u32, bool)], rels: &[&str]) -> Arc<Presentation> {
    let decls = gens
        .iter()
        .map(|&(n, d, ext)| if ext { GeneratorDecl::exterior(n, d) } else { GeneratorDecl::new(n, d) })
        .collect();
    Presentation::new(p, decls, rels).unwrap()
}

fn cyclic(p: u32) -> Arc<Presentation> {
    pres(p, &[("x", 1, true), ("y", 2, false)], &[])
}

fn elementary(p: u32) -> Arc<Presentation> {
    pres(p, &[("x1", 1, false), ("y1", 2, false), ("x2", 1, false), ("y2", 2, false)], &[])
}

fn poly2(names: &[&str]) -> Arc<Presentation> {
    let gens: Vec<(&str, u32, bool)> = names.iter().map(|n| (*n, 1, false)).collect();
    pres(2, &gens, &[])
}

fn q8() -> Arc<Presentation> {
    pres(2, &[("x", 1, false), ("y", 1, false), ("z", 4, false)], &["x^2 + x*y + y^2", "x^2*y + x*y^2"])
}

fn semidihedral() -> Arc<Presentation> {
    pres(
        2,
        &[("a", 1, false), ("b", 1, false), ("y", 2, false), ("v", 3, false), ("w", 4, false)],
        &["a*y", "a*v", "b^2", "a^2 + a*b", "v^2 + w*a*b + v*y*b"],
    )
}

fn dihedral() -> Arc<Presentation> {
    pres(2, &[("x", 1, false), ("y", 1, false), ("z", 2, false)], &["x*y"])
}

fn span(p: &Presentation, d: u32, elems: &[&str]) -> Subspace {
    let vecs = elems
        .iter()
        .map(|e| p.coordinates(&p.parse_element(e).unwrap(), d))
        .collect();
    Subspace::from_vectors(p.p(), p.hilbert_dimension(d), vecs).unwrap()
}

#[test]
fn class_c_restriction_to_k_is_well_defined() {
    let c = pres(
        3,
        &[("a1", 1, false), ("a2", 3, false), ("b", 1, false), ("y", 2, false), ("v", 5, false), ("w", 6, false)],
        &["b^2", "v^2", "a1*a2", "a1*v", "a2*v", "a1*y", "a2*y"],
    );
    let t = elementary(3);
    let f = AlgebraMorphism::from_strings(
        c,
        t,
        &[("a1", "0"), ("a2", "0"), ("v", "0"), ("b", "x2"), ("y", "y2"), ("w", "y1^3")],
    )
    .unwrap();
    assert!(f.check_well_defined().is_empty());
}

#[test]
fn cyclic_maximal_subgroup_map_is_well_defined() {
    for p in [3, 5] {
        let g = kunneth_product(&cyclic(p), &cyclic(p)).unwrap();
        for i in 0..p {
            let f = AlgebraMorphism::from_strings(
                g.clone(),
                cyclic(p),
                &[("x1", "x"), ("x2", &format!("{i}*x")), ("y1", "0"), ("y2", "0")],
            )
            .unwrap();
            assert!(f.check_well_defined().is_empty());
        }
    }
}

#[test]
fn ill_defined_map_reports_relation() {
    let target = pres(2, &[("a", 1, false), ("b", 1, false), ("c", 4, false)], &["a*b", "a^3 + b^3"]);
    let f = AlgebraMorphism::from_strings(q8(), target, &[("x", "a"), ("y", "b"), ("z", "c")]).unwrap();
    let v = f.check_well_defined();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].relation, "x^2 + x*y + y^2");
    assert_eq!(v[0].image, "a^2 + b^2");
    assert!(matches!(
        AlgebraMorphism::checked(f.source().clone(), f.target().clone(), f.images().to_vec()),
        Err(MapError::IllDefined(_))
    ));
}

#[test]
fn exterior_squares_are_checked_at_two() {
    let z4 = pres(2, &[("x", 1, true), ("y", 2, false)], &[]);
    let z2 = poly2(&["u"]);
    let f = AlgebraMorphism::from_strings(z4, z2, &[("x", "u"), ("y", "u^2")]).unwrap();
    let v = f.check_well_defined();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].relation, "x^2");
}

#[test]
fn degree_mismatch_is_an_error() {
    let err = AlgebraMorphism::from_strings(cyclic(3), cyclic(3), &[("x", "y"), ("y", "y")]).unwrap_err();
    assert_eq!(
        err,
        MapError::DegreeMismatch {
            generator: "x".into(),
            expected: 1,
            got: 2
        }
    );
    assert!(matches!(
        AlgebraMorphism::from_strings(cyclic(3), cyclic(3), &[("x", "x")]),
        Err(MapError::MissingImage(_))
    ));
}

#[test]
fn kernel_examples() {
    let p = 3;
    let g = kunneth_product(&cyclic(p), &cyclic(p)).unwrap();
    let f = AlgebraMorphism::from_strings(g.clone(), cyclic(p), &[("x1", "x"), ("x2", "x"), ("y1", "0"), ("y2", "0")]).unwrap();
    assert_eq!(f.kernel_degree(1), span(&g, 1, &["x1 - x2"]));
    assert_eq!(f.kernel_degree(0).dim(), 0);

    let a32 = cyclic(3);
    let res = AlgebraMorphism::from_strings(a32.clone(), cyclic(3), &[("x", "0"), ("y", "y")]).unwrap();
    assert_eq!(res.kernel_degree(1), span(&a32, 1, &["x"]));
    assert_eq!(res.kernel_degree(0).dim(), 0);
}

#[test]
fn ideal_slices() {
    let e = poly2(&["x1", "x2"]);
    let i = IdealSpec::parse(e.clone(), &["x1^2*x2 + x1*x2^2"]).unwrap();
    assert_eq!(ideal_degree(&i, 3).dim(), 1);
    assert_eq!(ideal_degree(&i, 2).dim(), 0);
    assert_eq!(ideal_degree(&i, 4).dim(), 2);

    let f = semidihedral();
    let ab = IdealSpec::parse(f.clone(), &["a*b"]).unwrap();
    assert_eq!(ab.degree(2), span(&f, 2, &["a*b"]));
    assert!(membership(&f.parse_element("a^2").unwrap(), &ab).unwrap());
    assert_eq!(ab.degree(1).dim(), 0);
}

#[test]
fn graded_intersections() {
    let d = dihedral();
    let fam = |g: &str| IdealSpec::parse(d.clone(), &[g]).unwrap().family(16);
    let ess = intersect_graded(&[fam("x"), fam("y"), fam("x + y")], 16).unwrap();
    assert!(ess.dimensions().iter().all(|&n| n == 0));

    let f = semidihedral();
    let fam = |g: &str| IdealSpec::parse(f.clone(), &[g]).unwrap().family(2);
    let ess = intersect_graded(&[fam("a"), fam("b"), fam("a + b")], 2).unwrap();
    assert_eq!(ess.degree(2), &span(&f, 2, &["a*b"]));

    let e = poly2(&["x1", "x2"]);
    let fam = |g: &str| IdealSpec::parse(e.clone(), &[g]).unwrap().family(3);
    let ess = intersect_graded(&[fam("x1"), fam("x2"), fam("x1 + x2")], 3).unwrap();
    assert_eq!(ess.degree(3), &span(&e, 3, &["x1^2*x2 + x1*x2^2"]));

    let other = IdealSpec::parse(dihedral(), &["x"]).unwrap().family(3);
    assert_eq!(
        intersect_graded(&[ess, other], 3).unwrap_err(),
        MapError::PresentationMismatch
    );
}

#[test]
fn quaternion_kernels_match_theorem_ideal() {
    let q = q8();
    let z4 = pres(2, &[("x", 1, true), ("y", 2, false)], &[]);
    let maps = [
        [("x", "x"), ("y", "0"), ("z", "y^2")],
        [("x", "0"), ("y", "x"), ("z", "y^2")],
        [("x", "x"), ("y", "x"), ("z", "y^2")],
    ];
    let kernels: Vec<_> = maps
        .iter()
        .map(|m| {
            let f = AlgebraMorphism::from_strings(q.clone(), z4.clone(), m).unwrap();
            assert!(f.check_well_defined().is_empty());
            f.kernel_family(12)
        })
        .collect();
    let ess = intersect_graded(&kernels, 12).unwrap();
    let expected = IdealSpec::parse(q.clone(), &["x^2", "y^2"]).unwrap();
    let report = ideals_equal_up_to(&ess, &expected.family(12), 12).unwrap();
    assert!(report.equal(), "{report:?}");
    assert_eq!(report.per_degree.len(), 13);
    assert!(membership(&q.parse_element("x*y").unwrap(), &expected).unwrap());
    assert!(membership(&q.zero(), &expected).unwrap());
}

#[test]
fn equality_report_finds_first_mismatch() {
    let z = cyclic(5);
    let x = IdealSpec::parse(z.clone(), &["x"]).unwrap().family(4);
    let xy = IdealSpec::parse(z.clone(), &["x", "y"]).unwrap().family(4);
    let r = ideals_equal_up_to(&x, &xy, 4).unwrap();
    assert!(!r.equal());
    assert_eq!(r.first_mismatch(), Some(2));
    let r = ideals_equal_up_to(&xy, &xy, 4).unwrap();
    assert!(r.equal());
    assert_eq!(r.first_mismatch(), None);
}

#[test]
fn ideal_constructor_rejects_bad_generators() {
    let z = cyclic(3);
    assert_eq!(IdealSpec::parse(z.clone(), &["0"]).unwrap_err(), MapError::ZeroGenerator);
    assert_eq!(IdealSpec::parse(z.clone(), &["x + y"]).unwrap_err(), MapError::Inhomogeneous);
    let inhom = z.parse_element("x + y").unwrap();
    let i = IdealSpec::parse(z.clone(), &["x"]).unwrap();
    assert_eq!(membership(&inhom, &i), Err(MapError::Inhomogeneous));
}

#[test]
fn class_c_generator_outside_ideal() {
    let c = pres(
        3,
        &[("a1", 1, false), ("a2", 3, false), ("b", 1, false), ("y", 2, false), ("v", 5, false), ("w", 6, false)],
        &["b^2", "v^2", "a1*a2", "a1*v", "a2*v", "a1*y", "a2*y"],
    );
    let ess = IdealSpec::parse(c.clone(), &["a1*b", "a2*b", "v*b", "v*y"]).unwrap();
    assert!(!membership(&c.generator("a1").unwrap(), &ess).unwrap());
}

/// Random map from the p = 3 elementary ring into itself. Degree-1 images
/// are combinations of x1, x2; degree-2 images of y1, x1*x2, y2.
fn random_endo(e: &Arc<Presentation>, c: &[u32]) -> AlgebraMorphism {
    let lin = |a: u32, b: u32| format!("{a}*x1 + {b}*x2");
    let quad = |a: u32, b: u32, d: u32| format!("{a}*y1 + {b}*x1*x2 + {d}*y2");
    AlgebraMorphism::from_strings(
        e.clone(),
        e.clone(),
        &[
            ("x1", &lin(c[0], c[1])),
            ("x2", &lin(c[2], c[3])),
            ("y1", &quad(c[4], c[5], c[6])),
            ("y2", &quad(c[7], c[8], c[9])),
        ],
    )
    .unwrap_or_else(|_| panic!("{c:?}"))
}

fn element_at(pres: &Presentation, d: u32, seed: &[u32]) -> Element {
    let n = pres.hilbert_dimension(d);
    let coords: Vec<u32> = (0..n).map(|i| seed[i % seed.len()] % pres.p()).collect();
    pres.from_coordinates(d, &coords)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn composite_matrix_is_product(
        a in prop::collection::vec(0u32..3, 10),
        b in prop::collection::vec(0u32..3, 10),
        d in 0u32..7,
    ) {
        let e = elementary(3);
        let f = random_endo(&e, &a);
        let g = random_endo(&e, &b);
        let gf = compose(&g, &f).unwrap();
        prop_assert_eq!(gf.matrix_degree(d), g.matrix_degree(d).mul(&f.matrix_degree(d)).unwrap());
    }

    #[test]
    fn morphism_is_multiplicative(
        a in prop::collection::vec(0u32..3, 10),
        s in prop::collection::vec(0u32..3, 1..6),
        t in prop::collection::vec(0u32..3, 1..6),
        da in 0u32..4,
        db in 0u32..4,
    ) {
        let e = elementary(3);
        let f = random_endo(&e, &a);
        let u = element_at(&e, da, &s);
        let v = element_at(&e, db, &t);
        let lhs = f.apply(&e.multiply(&u, &v).unwrap()).unwrap();
        let rhs = e.multiply(&f.apply(&u).unwrap(), &f.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernels_are_ideals(
        c in prop::collection::vec(0u32..3, 4),
        d in 1u32..6,
    ) {
        let e = elementary(3);
        let z = cyclic(3);
        let f = AlgebraMorphism::from_strings(
            e.clone(),
            z,
            &[
                ("x1", &format!("{}*x", c[0])),
                ("x2", &format!("{}*x", c[1])),
                ("y1", &format!("{}*y", c[2])),
                ("y2", &format!("{}*y", c[3])),
            ],
        )
        .unwrap();
        let ker = f.kernel_degree(d);
        for v in ker.basis_vectors() {
            let k = e.from_coordinates(d, &v);
            for (i, g) in e.generators().iter().enumerate() {
                let prod = e.multiply(&e.generator_at(i), &k).unwrap();
                let dd = d + g.degree;
                prop_assert!(f.kernel_degree(dd).contains(&e.coordinates(&prod, dd)));
            }
        }
    }

    #[test]
    fn adding_a_member_leaves_slices_unchanged(
        s in prop::collection::vec(0u32..2, 1..8),
        m in prop::collection::vec(0u32..2, 1..8),
        extra in 0u32..3,
    ) {
        let f = semidihedral();
        let base = IdealSpec::parse(f.clone(), &["a*b", "v"]).unwrap();
        let g = element_at(&f, 4, &s);
        prop_assume!(!g.is_zero());
        let bigger = base.with_generator(g.clone()).unwrap();
        for d in 0..10 {
            prop_assert!(bigger.degree(d).contains_subspace(&base.degree(d)));
        }
        let mult = f.multiply(&g, &element_at(&f, extra, &m)).unwrap();
        prop_assume!(!mult.is_zero());
        let same = bigger.with_generator(mult).unwrap();
        for d in 0..10 {
            prop_assert_eq!(same.degree(d), bigger.degree(d));
        }
    }
}
