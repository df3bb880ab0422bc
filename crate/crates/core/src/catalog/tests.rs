use super::*;
use crate::ideals::membership;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(f: Family, p: u32, n: u32) -> GroupSpec {
    GroupSpec::new(f, p, n).unwrap()
}

fn explicit(g: GroupSpec) -> Vec<SubgroupDatum> {
    match maximal_subgroup_data(g).unwrap() {
        MaximalSubgroups::Explicit(v) => v,
        MaximalSubgroups::H1RouteOnly => panic!("{g} has no explicit data"),
    }
}

fn names(pres: &Presentation) -> Vec<(String, u32)> {
    pres.generators().iter().map(|g| (g.name.clone(), g.degree)).collect()
}

#[test]
fn parameter_ranges() {
    assert!(GroupSpec::new(Family::C, 3, 1).is_err());
    assert!(GroupSpec::new(Family::D, 3, 3).is_err());
    assert!(GroupSpec::new(Family::E, 2, 2).is_err());
    assert!(GroupSpec::new(Family::A, 4, 2).is_err());
    assert!(GroupSpec::new(Family::A, 2, 0).is_err());
    assert!(GroupSpec::new(Family::C, 2, 2).is_ok());
    assert_eq!("e".parse::<Family>().unwrap(), Family::E);
    assert!("G".parse::<Family>().is_err());
}

#[test]
fn orders() {
    assert_eq!(spec(Family::A, 3, 2).order(), Some(9));
    assert_eq!(spec(Family::B, 3, 2).order(), Some(27));
    assert_eq!(spec(Family::C, 2, 2).order(), Some(8));
    assert_eq!(spec(Family::D, 2, 3).order(), Some(8));
    assert_eq!(spec(Family::E, 2, 3).order(), Some(8));
    assert_eq!(spec(Family::F, 2, 3).order(), Some(16));
    let all = groups_up_to_order(64);
    assert!(all.iter().all(|g| g.order().unwrap() <= 64));
    assert!(all.contains(&spec(Family::A, 61, 1)));
    assert!(all.contains(&spec(Family::F, 2, 5)));
    assert!(!all.contains(&spec(Family::F, 2, 6)));
    assert!(all.contains(&spec(Family::C, 3, 2)));
    assert!(!all.contains(&spec(Family::C, 5, 2)));
}

#[test]
fn presentation_examples() {
    let q8 = presentation_of(spec(Family::E, 2, 3)).unwrap();
    assert_eq!(names(&q8), vec![("x".into(), 1), ("y".into(), 1), ("z".into(), 4)]);
    assert_eq!(q8.relation_strings(), vec!["x^2 + x*y + y^2", "x^2*y + x*y^2"]);

    let d = presentation_of(spec(Family::D, 2, 3)).unwrap();
    assert_eq!(d.summary(), "F_2[x:1, y:1, z:2]/(x*y)");

    let b = presentation_of(spec(Family::B, 3, 1)).unwrap();
    assert_eq!(
        names(&b),
        vec![("x1".into(), 1), ("y1".into(), 2), ("x2".into(), 1), ("y2".into(), 2)]
    );
    assert_eq!(b.num_relations(), 0);

    let b2 = presentation_of(spec(Family::B, 2, 2)).unwrap();
    assert!(b2.is_exterior(0));
    assert!(!b2.is_exterior(2));
    assert!(Arc::ptr_eq(&b, &presentation_of(spec(Family::B, 3, 1)).unwrap()));
}

#[test]
fn degree_one_counts_generators() {
    for g in groups_up_to_order(64).into_iter().chain([spec(Family::C, 5, 2), spec(Family::C, 5, 3)]) {
        let pres = presentation_of(g).unwrap();
        let expected = if g.family() == Family::A { 1 } else { 2 };
        assert_eq!(pres.hilbert_dimension(1), expected, "{g}");
    }
}

#[test]
fn subgroup_examples() {
    let c = explicit(spec(Family::C, 3, 2));
    assert_eq!(c.len(), 4);
    assert_eq!(c[0].subgroup, Some(spec(Family::B, 3, 1)));
    for d in &c[1..] {
        assert_eq!(d.subgroup, Some(spec(Family::A, 3, 2)));
    }

    let e = explicit(spec(Family::E, 2, 3));
    let labels: Vec<&str> = e.iter().map(|d| d.label.as_str()).collect();
    assert_eq!(labels, vec!["<i>", "<j>", "<ij>"]);
    assert!(e.iter().all(|d| d.subgroup == Some(spec(Family::A, 2, 2))));

    let a = explicit(spec(Family::A, 5, 1));
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].subgroup, None);
    for d in 1..8 {
        let src = a[0].restriction.source().hilbert_dimension(d);
        assert_eq!(a[0].restriction.kernel_degree(d).dim(), src);
    }

    assert_eq!(explicit(spec(Family::B, 5, 1)).len(), 6);
    assert_eq!(explicit(spec(Family::B, 3, 3)).len(), 4);
    for g in [spec(Family::D, 2, 3), spec(Family::F, 2, 3), spec(Family::C, 2, 2), spec(Family::B, 2, 2)] {
        assert!(matches!(maximal_subgroup_data(g).unwrap(), MaximalSubgroups::H1RouteOnly));
    }
}

#[test]
fn every_encoded_restriction_is_well_defined() {
    for p in [2, 3, 5] {
        for n in 1..=4 {
            for f in Family::ALL {
                let Ok(g) = GroupSpec::new(f, p, n) else { continue };
                if let MaximalSubgroups::Explicit(data) = maximal_subgroup_data(g).unwrap() {
                    for d in data {
                        assert!(d.restriction.check_well_defined().is_empty(), "{g} {}", d.label);
                    }
                }
            }
        }
    }
}

#[test]
fn vanishing_y1_variant_of_cyclic_maps_is_well_defined() {
    let choices = Choices {
        cyclic_y1_vanishes: true,
        ..Choices::default()
    };
    for p in [3, 5] {
        assert!(maximal_subgroup_data_with(spec(Family::B, p, 2), &choices).is_ok());
    }
}

#[test]
fn quaternion_choices() {
    assert_eq!(admissible_res_h_choices(spec(Family::E, 2, 4)).unwrap().len(), 3);
    assert_eq!(admissible_res_h_choices(spec(Family::E, 2, 5)).unwrap(), vec!["x + y"]);
    assert!(admissible_res_h_choices(spec(Family::E, 2, 3)).unwrap().is_empty());
    // The map x, y -> a + b on K is not a ring map: x*y would go to (a+b)^2.
    let g = spec(Family::E, 2, 5);
    let src = presentation_of(g).unwrap();
    let tgt = presentation_of(spec(Family::E, 2, 4)).unwrap();
    let f = AlgebraMorphism::from_strings(src, tgt, &[("x", "x + y"), ("y", "x + y"), ("z", "z")]).unwrap();
    assert_eq!(f.check_well_defined()[0].relation, "x*y");
}

#[test]
fn expected_examples() {
    assert!(expected_essential(spec(Family::D, 2, 5)).unwrap().generators().is_empty());
    let e4 = expected_essential(spec(Family::E, 2, 4)).unwrap();
    let pres = e4.presentation();
    assert_eq!(e4.generators(), &[pres.parse_element("x^3").unwrap()]);
    // x^3 = y^3 and the normal form keeps y^3.
    assert_eq!(e4.format_generators(), vec!["y^3"]);
    assert_eq!(
        expected_essential(spec(Family::C, 5, 2)).unwrap().format_generators(),
        vec!["a1*b", "a2*b", "a3*b", "a4*b", "4*b*v", "y*v"]
    );
    assert_eq!(theorem(spec(Family::E, 2, 3)).unwrap().statement, "Ess(Q_8) = (x^2, y^2)");
    assert_eq!(theorem(spec(Family::D, 2, 3)).unwrap().statement, "Ess(D_8) = 0");
}

#[test]
fn h1_examples() {
    let fmt = |g: GroupSpec| {
        let p = presentation_of(g).unwrap();
        h1_classes(&p).unwrap().iter().map(|e| p.format_element(e)).collect::<Vec<_>>()
    };
    assert_eq!(fmt(spec(Family::E, 2, 3)), vec!["x", "y", "x + y"]);
    assert_eq!(fmt(spec(Family::A, 2, 3)), vec!["x"]);
    assert_eq!(fmt(spec(Family::B, 2, 2)), vec!["x1", "x2", "x1 + x2"]);
    let odd = presentation_of(spec(Family::A, 3, 1)).unwrap();
    assert_eq!(h1_classes(&odd).unwrap_err(), CatalogError::OddPrime(3));
}

#[test]
fn unknown_knobs_are_rejected() {
    let mut choices = Choices::default();
    choices.knobs.insert(1, [("c9".to_string(), 2)].into_iter().collect());
    assert_eq!(
        maximal_subgroup_data_with(spec(Family::C, 3, 2), &choices).unwrap_err(),
        CatalogError::UnknownKnob("c9".into())
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_c_expected_generators_restrict_to_zero(
        p in prop::sample::select(vec![3u32, 5]),
        n in 2u32..4,
        seed in any::<u64>(),
    ) {
        let g = spec(Family::C, p, n);
        let choices = random_knobs(g, &mut ChaCha8Rng::seed_from_u64(seed));
        let MaximalSubgroups::Explicit(data) = maximal_subgroup_data_with(g, &choices).unwrap() else {
            panic!()
        };
        let expected = expected_essential(g).unwrap();
        for d in &data {
            for gen in expected.generators() {
                prop_assert!(d.restriction.apply(gen).unwrap().is_zero(), "{} {}", d.label, gen.presentation_id());
            }
        }
        let pres = presentation_of(g).unwrap();
        prop_assert!(!membership(&pres.generator("a1").unwrap(), &expected).unwrap());
    }
}
