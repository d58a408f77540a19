use std::collections::BTreeSet;

use proptest::prelude::*;
use thc_core::configurations::{config, matches_polytope};
use thc_core::homology::{cls, pairing, std_area};
use thc_core::polytope::*;
use thc_core::scalars::{qi, Chamber, LinForm};

fn lf(s: &str) -> LinForm {
    LinForm::parse(s).unwrap()
}

fn coords(p: &[Point]) -> BTreeSet<LinForm> {
    p.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect()
}

#[test]
fn edge_examples() {
    let g = Chamber::generic();
    let pent = delta_tilde(0, &g).unwrap();
    let i = pent.vertices.iter().position(|v| *v == pt("0", "c1")).unwrap();
    assert_eq!(pent.vertices[(i + 1) % pent.len()], pt("c1", "0"));
    let e = pent.edge_data(i).unwrap();
    assert_eq!((e.direction, e.length), ((1, -1), lf("c1")));

    let sq = unit_square(&g);
    let e = sq.edge_data(0).unwrap();
    assert_eq!((e.direction, e.length), ((1, 0), lf("1")));

    let d = delta(0, &g).unwrap();
    let e = d.edge_data(3).unwrap();
    assert_eq!((e.direction, e.length), ((0, -1), lf("mu")));
}

#[test]
fn delzant_checks() {
    let g = Chamber::generic();
    assert!(delta_tilde(0, &g).unwrap().check_delzant().is_ok());
    assert!(unit_square(&g).check_delzant().is_ok());
    // a scaled simplex is still smooth; a 1x2 corner is not
    let simplex = DelzantPolytope::new(
        "simplex",
        vec![pt("0", "0"), pt("2", "0"), pt("0", "2")],
        vec![cls("F"), cls("B"), cls("F")],
        &g,
    );
    assert!(simplex.check_delzant().is_ok());
    let skew = DelzantPolytope::new(
        "skew",
        vec![pt("0", "0"), pt("1", "0"), pt("0", "2")],
        vec![cls("F"), cls("B"), cls("F")],
        &g,
    );
    assert!(skew.check_delzant().is_err());
}

#[test]
fn sl2z_examples() {
    let g = Chamber::generic();
    let p = delta_tilde(0, &g).unwrap();
    assert_eq!(p.sl2z_apply([[1, 0], [0, 1]]).unwrap(), p);
    let c0 = p.sl2z_apply(frame(0)).unwrap();
    for (x, _) in &c0.vertices {
        let v = g.eval(x);
        assert!(v <= qi(0) && v >= qi(-1));
    }
    assert!(c0.check_delzant().is_ok());
    assert!(p.sl2z_apply([[2, 0], [0, 1]]).is_err());
}

#[test]
fn first_blow_up_of_the_square() {
    let g = Chamber::generic();
    let d = delta(0, &g).unwrap();
    let p = d.blow_up_vertex(0, &lf("c1")).unwrap();
    let want: BTreeSet<Point> = [pt("1", "mu"), pt("0", "mu"), pt("0", "c1"), pt("c1", "0"), pt("1", "0")].into();
    assert_eq!(p.vertices.iter().cloned().collect::<BTreeSet<_>>(), want);
    let cycle = ["F", "B-E1", "E1", "F-E1", "B"].map(cls);
    assert!(cycles_equal(&p.class_cycle(), &cycle), "{:?}", p.class_cycle());
    let c1 = g.sample[1].clone();
    assert_eq!(d.double_area_at() - p.double_area_at(), &c1 * &c1);
    assert!(d.blow_up_vertex(0, &lf("1")).is_err());
    assert!(d.blow_up_vertex(0, &lf("-c1")).is_err());
}

#[test]
fn named_fixture_labels() {
    let t1 = coords(&t0_fixture(1));
    for s in ["c1", "mu", "mu-c2", "-c1", "-1+c2", "-1"] {
        assert!(t1.contains(&lf(s)), "{s}");
    }
    let p9 = coords(&appendix_fixture(9).unwrap());
    for s in ["mu", "mu-1+c2", "mu-1-c2", "c1", "-c1", "-1"] {
        assert!(p9.contains(&lf(s)), "{s}");
    }
}

#[test]
fn t14_realizes_configuration_1_4() {
    let p = catalog("T1,4").unwrap();
    let c = config("1.4").unwrap();
    assert!(matches_polytope(&c, &p));
    let neg = |v: Vec<thc_core::HomologyClass>| {
        let mut v: Vec<_> = v.into_iter().filter(|x| pairing(x, x) < 0).collect();
        v.sort();
        v
    };
    assert_eq!(neg(p.class_cycle()), neg(c.classes.clone()));
}

#[test]
fn whole_catalog_is_delzant_with_matching_lengths() {
    for name in catalog_names() {
        let p = catalog(&name).unwrap();
        assert!(p.check_delzant().is_ok(), "{name}");
        assert!(p.check_facet_areas().is_ok(), "{name}");
        for (i, c) in p.facet_classes.iter().enumerate() {
            assert_eq!(p.edge_data(i).unwrap().length, std_area(c), "{name} facet {i}");
        }
    }
    assert_eq!(t0_family().unwrap().len(), 30);
    assert_eq!(appendix_family().unwrap().len(), APPENDIX_CHOPS.len());
    assert!(catalog("T6,1").is_err());
    assert!(catalog("Q1").is_err());
}

#[test]
fn dot_output() {
    let dot = to_dot(&catalog("T1").unwrap());
    assert!(dot.starts_with("graph \"T1\""));
    assert_eq!(dot.matches(" -- ").count(), 6);
}

fn unimodular() -> impl Strategy<Value = Mat2> {
    let gens: Vec<Mat2> = vec![[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, -1], [1, 0]], [[-1, 0], [0, 1]], [[1, -1], [0, 1]]];
    prop::collection::vec(prop::sample::select(gens), 1..5).prop_map(|ms| {
        ms.into_iter().fold([[1, 0], [0, 1]], |a, b| {
            [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ]
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sl2z_preserves_lengths_and_smoothness(i in 1usize..=5, j in 1usize..=6, m in unimodular()) {
        let p = catalog(&format!("T{i},{j}")).unwrap();
        let q = p.sl2z_apply(m).unwrap();
        prop_assert!(q.check_delzant().is_ok());
        let mut a: Vec<LinForm> = p.edges().unwrap().into_iter().map(|e| e.length).collect();
        let mut b: Vec<LinForm> = q.edges().unwrap().into_iter().map(|e| e.length).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert!(cycles_equal(&p.class_cycle(), &q.class_cycle()));
    }

    #[test]
    fn blow_up_then_down(i in 1usize..=5, v in 0usize..6, k in 1i64..=9) {
        // T_i(0) carries E1, E2; chop with a small multiple of c3 and undo
        let p = catalog(&format!("T{i}")).unwrap();
        let v = v % p.len();
        let cap = lf(&format!("{k}/10c3"));
        let up = p.blow_up_vertex(v, &cap);
        prop_assume!(up.is_ok());
        let up = up.unwrap();
        prop_assert!(up.check_delzant().is_ok());
        prop_assert_eq!(up.len(), p.len() + 1);
        let f = up.facet_classes.iter().position(|c| *c == cls("E3")).unwrap();
        let down = up.blow_down(f).unwrap();
        prop_assert!(cycles_equal(&down.vertices, &p.vertices));
        prop_assert!(cycles_equal(&down.facet_classes, &p.facet_classes));
    }
}
