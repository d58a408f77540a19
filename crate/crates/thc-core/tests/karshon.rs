use proptest::prelude::*;
use thc_core::karshon::*;
use thc_core::polytope::{catalog, unit_square, Mat2};
use thc_core::scalars::{Chamber, LinForm};

fn lf(s: &str) -> LinForm {
    LinForm::parse(s).unwrap()
}

fn xi_of(name: &str) -> (i64, i64) {
    if name.starts_with('x') {
        (1, 0)
    } else {
        (0, 1)
    }
}

#[test]
fn x0_from_t11() {
    let g = project(&catalog("T1,1").unwrap(), (1, 0)).unwrap();
    let want = graph_from_labels(&[("0", "mu-c1-c3"), ("-1", "mu-c2")], &["-c3", "-c1", "-1+c2"], &[]);
    assert_eq!(g.encode(), want.encode());
}

#[test]
fn x1_carries_a_z2_edge() {
    let g = project(&catalog("T1,2").unwrap(), (1, 0)).unwrap();
    let k = g.encode();
    assert_eq!(k.edges, vec![(lf("-1+c2-c3"), lf("-1+c2+c3"), 2)]);
}

#[test]
fn square_projects_to_a_product() {
    let g = project(&unit_square(&Chamber::generic()), (0, 1)).unwrap();
    let k = g.encode();
    assert_eq!(k.fat, vec![(lf("0"), lf("1"), 0), (lf("1"), lf("1"), 0)]);
    assert!(k.iso.is_empty() && k.edges.is_empty());
    assert!(project(&unit_square(&Chamber::generic()), (2, 2)).is_err());
}

#[test]
fn blow_up_at_a_fixed_surface() {
    let ch = Chamber::generic();
    let g = graph_from_labels(&[("0", "mu"), ("1", "mu")], &[], &[]);
    let h = graph_blow_up_fat_min(&g, &lf("c1"), &ch).unwrap();
    assert_eq!(h.iso, vec![lf("c1")]);
    assert!(h.fat.contains(&FatVertex { moment: lf("0"), area: lf("mu-c1"), genus: 0 }));
    assert!(graph_blow_up_fat_min(&g, &lf("mu"), &ch).is_err());
    assert!(graph_blow_up_fat_min(&g, &lf("-c1"), &ch).is_err());
}

#[test]
fn blow_up_at_an_interior_point() {
    let ch = Chamber::generic();
    let g = graph_from_labels(&[], &["0"], &[]);
    let h = graph_blow_up_interior(&g, 0, 1, 1, &lf("c1"), &ch).unwrap();
    let mut iso = h.iso.clone();
    iso.sort();
    assert_eq!(iso, vec![lf("-c1"), lf("c1")]);
    assert_eq!(h.encode().edges, vec![(lf("-c1"), lf("c1"), 2)]);
    assert!(graph_blow_up_interior(&g, 0, 0, 1, &lf("c1"), &ch).is_err());
}

#[test]
fn named_graphs_are_reproduced() {
    let mut members = 0;
    for name in NAMED_GRAPHS {
        let (g, ms) = named_graph(name).unwrap();
        assert!(!ms.is_empty(), "{name}");
        for (i, j) in ms {
            let p = project(&catalog(&format!("T{i},{j}")).unwrap(), xi_of(name)).unwrap();
            assert_eq!(p.encode(), g.encode(), "{name} vs T{i},{j}");
            members += 1;
        }
    }
    assert_eq!(members, 60);
    let (x9, _) = named_graph("x9").unwrap();
    let ks: Vec<i64> = x9.encode().edges.iter().map(|e| e.2).collect();
    assert!(ks.contains(&2) && ks.contains(&3));
    assert!(named_graph("x12").is_err());
}

#[test]
fn naming_identities() {
    let (x0, _) = named_graph("x0").unwrap();
    let (x4, _) = named_graph("x4").unwrap();
    let a = project(&catalog("T1,1").unwrap(), (1, 0)).unwrap();
    let b = project(&catalog("T5,5").unwrap(), (1, 0)).unwrap();
    assert!(a.equivalent(&b));
    assert!(!x0.equivalent(&x4));
    assert!(x0.equivalent(&x0.translate(&lf("mu-c2"))));
}

#[test]
fn zk_edges_measure_their_spheres() {
    for i in 1..=5 {
        for j in 1..=6 {
            let p = catalog(&format!("T{i},{j}")).unwrap();
            for xi in [(1, 0), (0, 1), (1, 1), (1, -1)] {
                let Ok(g) = project(&p, xi) else { continue };
                let mut want: Vec<(LinForm, i64)> = Vec::new();
                for e in p.edges().unwrap() {
                    let k = (e.direction.0 * xi.0 + e.direction.1 * xi.1).abs();
                    if k >= 2 {
                        want.push((e.length.scale_int(k), k));
                    }
                }
                let mut got: Vec<(LinForm, i64)> = g.encode().edges.into_iter().map(|(a, b, k)| (&b - &a, k)).collect();
                want.sort();
                got.sort();
                assert_eq!(got, want, "T{i},{j} at {xi:?}");
            }
        }
    }
}

#[test]
fn polytope_blow_ups_commute_with_projection() {
    let mut checked = 0;
    for i in 1..=5 {
        let p = catalog(&format!("T{i}")).unwrap();
        let cap = lf("c3");
        let n = p.len();
        let edges = p.edges().unwrap();
        for xi in [(1, 0), (0, 1), (1, 1), (1, -1)] {
            let Ok(g) = project(&p, xi) else { continue };
            for v in 0..n {
                let Ok(up) = p.blow_up_vertex(v, &cap) else { continue };
                let d_in = edges[(v + n - 1) % n].direction;
                let d_out = edges[v].direction;
                let w1 = -(d_in.0 * xi.0 + d_in.1 * xi.1);
                let w2 = d_out.0 * xi.0 + d_out.1 * xi.1;
                if w1 == 0 || w2 == 0 || w1 == w2 {
                    continue;
                }
                let phi = &p.vertices[v].0.scale_int(xi.0) + &p.vertices[v].1.scale_int(xi.1);
                let idx = g.iso.iter().position(|m| *m == phi).unwrap();
                let h = graph_blow_up_weights(&g, idx, w1, w2, &cap, &p.chamber).unwrap();
                let Ok(direct) = project(&up, xi) else { continue };
                assert_eq!(h.encode(), direct.encode(), "T{i} vertex {v} at {xi:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "{checked}");
}

fn shift() -> impl Strategy<Value = LinForm> {
    prop::array::uniform5((-6i64..=6, 1i64..=4).prop_map(|(n, d)| thc_core::scalars::q(n, d))).prop_map(LinForm)
}

fn matrix() -> impl Strategy<Value = Mat2> {
    prop::sample::select(vec![
        [[1, 0], [0, 1]],
        [[1, 1], [0, 1]],
        [[1, 0], [-1, 1]],
        [[0, -1], [1, 0]],
        [[-1, 0], [0, 1]],
        [[2, 1], [1, 1]],
        [[1, -2], [0, 1]],
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn canonical_form_laws(k in 0usize..24, s in shift(), t in shift()) {
        let (g, _) = named_graph(NAMED_GRAPHS[k]).unwrap();
        let a = g.translate(&s);
        let b = a.flip().translate(&t);
        prop_assert_eq!(g.canonical(), a.canonical());
        prop_assert!(g.equivalent(&g));
        prop_assert_eq!(a.equivalent(&b), b.equivalent(&a));
        prop_assert!(g.equivalent(&a) && a.equivalent(&b) && g.equivalent(&b));
        prop_assert_eq!(a.translation_key(), a.translate(&t).translation_key());
    }

    #[test]
    fn distinct_names_stay_distinct(a in 0usize..24, b in 0usize..24, s in shift()) {
        prop_assume!(a != b);
        let (g, _) = named_graph(NAMED_GRAPHS[a]).unwrap();
        let (h, _) = named_graph(NAMED_GRAPHS[b]).unwrap();
        prop_assert_eq!(g.equivalent(&h.translate(&s)), g.equivalent(&h));
    }

    #[test]
    fn projection_is_covariant(i in 1usize..=5, j in 1usize..=6, m in matrix(), xi in prop::sample::select(vec![(1i64, 0i64), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)])) {
        let p = catalog(&format!("T{i},{j}")).unwrap();
        let mp = p.sl2z_apply(m).unwrap();
        let mt = (m[0][0] * xi.0 + m[1][0] * xi.1, m[0][1] * xi.0 + m[1][1] * xi.1);
        let a = project(&mp, xi);
        let b = project(&p, mt);
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.encode(), b.encode());
        }
    }
}
