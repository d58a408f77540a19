use std::collections::BTreeSet;

use proptest::prelude::*;
use thc_core::homology::*;
use thc_core::scalars::{q, qi, Chamber, LinForm, Q};
use thc_core::HomologyClass;

// Independent form: B.F = 1, B.B = F.F = 0, Ei.Ej = -delta, with classes
// pB + qF - sum r_i E_i.
fn oracle_pairing(a: &HomologyClass, b: &HomologyClass) -> i64 {
    a.p() * b.q() + a.q() * b.p() - (1..=3).map(|i| a.r(i) * b.r(i)).sum::<i64>()
}

#[test]
fn pairing_examples() {
    assert_eq!(pairing(&cls("B+F-E1"), &cls("B-E1")), 0);
    assert_eq!(pairing(&cls("E3"), &cls("E3")), -1);
    assert_eq!(pairing(&cls("B+F"), &cls("B+F")), 2);
    assert_eq!(d_class(4, None).unwrap(), cls("B+F"));
}

#[test]
fn chern_examples() {
    assert_eq!(chern(&cls("B")), 2);
    assert_eq!(chern(&cls("E1")), 1);
    // 2 + 0 - 3; the piecewise (i+1)/2 agrees at i = -3
    assert_eq!(chern(&d_class(-3, None).unwrap()), -1);
    assert_eq!(d_invariants(-3).1, -1);
    assert_eq!(d_class(-3, None).unwrap(), cls("B-E1-E2-E3"));
}

#[test]
fn area_examples() {
    assert_eq!(std_area(&cls("E2")), LinForm::c(2));
    assert!(std_area(&HomologyClass::zero()).is_zero());
    assert_eq!(Chamber::generic().eval(&std_area(&cls("F-E2-E3"))), q(1, 2));
}

#[test]
fn virtual_genus_examples() {
    assert_eq!(virtual_genus(&cls("B+F")), qi(0));
    assert_eq!(virtual_genus(&cls("B")), qi(0));
    for i in -3..=8 {
        for j in 1..=3 {
            let d = d_class(i, Some(j)).unwrap();
            assert_eq!(virtual_genus(&d), qi(0), "D_{i}");
        }
    }
}

#[test]
fn table1_by_chamber() {
    let e: BTreeSet<_> = enumerate_p0_classes(&Chamber::e1neg()).into_iter().collect();
    let all: BTreeSet<_> = table1().into_iter().map(|(c, _)| c).collect();
    assert_eq!(e.len(), 15);
    assert_eq!(e, all);
    let g: BTreeSet<_> = enumerate_p0_classes(&Chamber::generic()).into_iter().collect();
    assert_eq!(g.len(), 14);
    assert!(!g.contains(&cls("E1-E2-E3")));
    assert!(g.contains(&cls("F-E1-E2-E3")));
}

#[test]
fn brute_force_finds_nothing_new() {
    for ch in [Chamber::generic(), Chamber::e1neg()] {
        let listed: BTreeSet<_> = enumerate_p0_classes(&ch).into_iter().collect();
        for c in scan_p0(&ch, 3) {
            assert!(listed.contains(&c), "{c} in {}", ch.name);
        }
    }
}

#[test]
fn table1_classes_are_spheres_of_positive_area() {
    for ch in [Chamber::generic(), Chamber::e1neg()] {
        for c in enumerate_p0_classes(&ch) {
            assert!(virtual_genus(&c) >= Q::from_integer(0.into()));
            assert!(ch.positive(&std_area(&c)), "{c}");
        }
    }
}

#[test]
fn p_is_nonnegative_in_a_box() {
    for ch in [Chamber::generic(), Chamber::e1neg()] {
        assert!(lemma_p_nonnegative_violations(&ch, 4).is_empty());
    }
}

#[test]
fn d_invariants_at_four() {
    assert_eq!(d_invariants(4), (2, 4, 6, 3));
    for i in -3..=12 {
        let js: Vec<Option<usize>> = match (-i as i64).rem_euclid(4) {
            1 | 2 => (1..=3).map(Some).collect(),
            _ => vec![None],
        };
        for j in js {
            let d = d_class(i, j).unwrap();
            assert_eq!(d_invariants(i), d_invariants_direct(&d), "D_{i}");
        }
    }
    assert!(d_class(-4, None).is_err());
    assert!(d_class(3, None).is_err());
}

#[test]
fn coexistence_examples() {
    assert!(!can_coexist(3, Some(2), &cls("E1-E2")).unwrap());
    assert!(can_coexist(0, None, &cls("F")).unwrap());
    for (br, classes) in exception_list() {
        for a in classes {
            for k in 1..=3 {
                let d = d_class_branch(br, k).unwrap();
                assert!(pairing(&d, &a) < 0, "{br:?} {a}");
            }
        }
    }
}

#[test]
fn exception_sweep_up_to_the_unlisted_pairs() {
    let key = |b: DBranch, c: &HomologyClass| format!("{b:?} {c}");
    let mut expected: BTreeSet<String> =
        exception_list().into_iter().flat_map(|(b, cs)| cs.into_iter().map(move |c| key(b, &c))).collect();
    expected.extend(unlisted_exceptions().iter().map(|(b, c)| key(*b, c)));
    let found: BTreeSet<String> = negative_pairs(-2..=2)
        .into_iter()
        .filter(|(b, _)| *b != DBranch::S0)
        .map(|(b, c)| key(b, &c))
        .collect();
    assert_eq!(found, expected);
    for (b, c) in unlisted_exceptions() {
        assert_eq!(pairing(&d_class_branch(b, 1).unwrap(), &c), -1);
    }
}

#[test]
fn reduced_classes() {
    assert!(is_reduced(&LClass([1, 1, 0, 0, 0])));
    assert!(!is_reduced(&LClass([3, 2, 1, 1, 1])));
    assert!(is_reduced(&LClass([0, 0, 0, 0, 0])));
}

#[test]
fn projective_plane_model() {
    let [mu, c1, c2, c3] = cp2_parameters(&qi(3), [&qi(1), &qi(1), &qi(1), &qi(1)]).unwrap();
    assert_eq!((mu, c1, c2, c3), (qi(1), q(1, 2), q(1, 2), q(1, 2)));
    assert_eq!(basis_change(&LClass([0, 0, 0, -1, 0])), cls("E2"));
    let l = basis_change(&LClass([1, 0, 0, 0, 0]));
    assert_eq!(pairing(&l, &l), 1);
}

#[test]
fn parse_rejects_garbage() {
    assert!(HomologyClass::parse("B+Q").is_err());
    assert_eq!(HomologyClass::parse("2B-F+E1").unwrap(), HomologyClass::new(2, -1, [-1, 0, 0]));
    assert_eq!(cls("0"), HomologyClass::zero());
}

fn class() -> impl Strategy<Value = HomologyClass> {
    (-5i64..=5, -5i64..=5, prop::array::uniform3(-4i64..=4)).prop_map(|(p, q, r)| HomologyClass::new(p, q, r))
}

fn lclass() -> impl Strategy<Value = LClass> {
    prop::array::uniform5(-4i64..=4).prop_map(LClass)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn pairing_matches_the_oracle(a in class(), b in class(), c in class(), k in -3i64..=3) {
        prop_assert_eq!(pairing(&a, &b), oracle_pairing(&a, &b));
        prop_assert_eq!(pairing(&a, &b), pairing(&b, &a));
        prop_assert_eq!(pairing(&a.scale(k).add(&c), &b), k * pairing(&a, &b) + pairing(&c, &b));
    }

    #[test]
    fn chern_is_pairing_with_anticanonical(a in class()) {
        prop_assert_eq!(chern(&a), pairing(&a, &cls("2B+2F-E1-E2-E3")));
    }

    #[test]
    fn basis_change_is_an_isometry(a in lclass(), b in lclass()) {
        prop_assert_eq!(pairing(&basis_change(&a), &basis_change(&b)), cp2_pairing(&a, &b));
        prop_assert_eq!(basis_change_inv(&basis_change(&a)), a);
    }
}

#[test]
fn form_is_unimodular() {
    let basis: Vec<HomologyClass> = vec![cls("B"), cls("F"), cls("E1"), cls("E2"), cls("E3")];
    let gram: Vec<Vec<i64>> = basis.iter().map(|a| basis.iter().map(|b| pairing(a, b)).collect()).collect();
    // block [[0,1],[1,0]] times -I3: determinant (-1)(-1)^3 = 1
    let det2 = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
    let det3: i64 = (2..5).map(|i| gram[i][i]).product();
    assert_eq!((det2 * det3).abs(), 1);
    for i in 2..5 {
        for j in 0..5 {
            if i != j {
                assert_eq!(gram[i][j], 0);
            }
        }
    }
}
