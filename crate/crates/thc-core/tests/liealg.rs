use proptest::prelude::*;
use serde_json::json;
use thc_core::liealg::*;
use thc_core::relations::{parse_bracket, sym2_rank};

// h'_n for the two-point blow-up as listed: 5 h_{n-1} of the b2 = 3 loop space.
const H_PRIME: [i64; 6] = [1, 5, 15, 40, 105, 275];
const H_TILDE: [i64; 5] = [1, 4, 15, 56, 209];

#[test]
fn loop_space_examples() {
    assert_eq!(loop_space_betti(3, 4), vec![1, 3, 8, 21, 55]);
    assert_eq!(loop_space_betti(4, 4), H_TILDE.to_vec());
    assert_eq!(loop_space_betti(2, 2), vec![1, 2, 3]);
}

#[test]
fn series_inversion_examples() {
    assert_eq!(ranks_from_series(&[1, 4, 15, 56]).unwrap()[1..], [4, 9, 16]);
    assert_eq!(ranks_from_series(&[1, 3, 8, 21, 55, 144]).unwrap()[1..], [3, 5, 5, 10, 24]);
    assert_eq!(ranks_from_series(&H_TILDE).unwrap()[4], 45);
    assert_ne!(ranks_from_series(&H_TILDE).unwrap()[4], STATED_R4);
    assert!(ranks_from_series(&[2, 1]).is_err());
    assert!(ranks_from_series(&[1, 0, -1]).is_err());
}

#[test]
fn log_oracle_agrees() {
    for b2 in 2..=6 {
        let h = loop_space_betti(b2, 7);
        assert_eq!(ranks_by_log(&h).unwrap(), ranks_from_series(&h).unwrap(), "b2 = {b2}");
    }
    assert_eq!(ranks_by_log(&H_TILDE).unwrap()[4], 45);
}

#[test]
fn hilbert_series_low_degrees() {
    let p = lambda_tilde();
    assert_eq!(p.ngens(), 9);
    assert_eq!(relation_rank(&p), 31);
    assert_eq!(hilbert_series(&p, 2).unwrap(), vec![1, 9, 50]);
}

#[test]
fn hilbert_series_three_ways() {
    let h = hilbert_series(&lambda_tilde(), 4).unwrap();
    assert_eq!(h, vec![1, 9, 50, 231, 979]);
    // recurrence with the listed h' and the convolution with the listed loop series
    let mut rec = vec![1i64];
    for n in 1..=4 {
        let prev2 = if n >= 2 { rec[n - 2] } else { 0 };
        rec.push(H_PRIME[n] + 4 * rec[n - 1] - prev2);
    }
    assert_eq!(h, rec);
    let conv: Vec<i64> = (0..=4).map(|n| (0..=n).map(|i| H_TILDE[i] * H_PRIME[n - i]).sum()).collect();
    assert_eq!(h, conv);
    assert_eq!(predicted_hilbert(4), h);
    assert_eq!(convolved_hilbert(4), h);
}

#[test]
fn degree_five_by_primes() {
    let h = hilbert_modular(&lambda_tilde(), 5, &DEFAULT_PRIMES).unwrap();
    assert_eq!(h[..5], [1, 9, 50, 231, 979]);
    assert_eq!(h[5], 3960);
    assert_eq!(h[5], H_PRIME[5] + 4 * 979 - 231);
    assert_eq!(predicted_hilbert(5)[5], 3960);
}

#[test]
fn lie_ranks_of_the_presentation() {
    let r = lie_ranks(&lambda_tilde(), 4).unwrap();
    assert_eq!(r[1..], [9, 14, 21, 55]);
    assert_eq!(45 - 31, r[2]);
}

#[test]
fn free_presentations_are_tensor_algebras() {
    assert_eq!(hilbert_series(&LiePresentation::free(&["a", "b"]), 3).unwrap(), vec![1, 2, 4, 8]);
    for g in 1..=4usize {
        let names: Vec<String> = (0..g).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let h = hilbert_series(&LiePresentation::free(&refs), 4).unwrap();
        let want: Vec<i64> = (0..=4).map(|n| (g as i64).pow(n)).collect();
        assert_eq!(h, want, "g = {g}");
    }
}

#[test]
fn modular_agrees_with_exact() {
    let p = lambda_tilde();
    assert_eq!(hilbert_modular(&p, 3, &DEFAULT_PRIMES).unwrap(), hilbert_series(&p, 3).unwrap());
}

#[test]
fn pi2_basis() {
    let p = lambda_tilde();
    let idx = bracket_indices(&p, &PI2_BASIS).unwrap();
    assert!(pi2_basis_check(&p, &idx));
    let mut swapped = PI2_BASIS.to_vec();
    swapped[0] = ("x2", "y0");
    assert!(!pi2_basis_check(&p, &bracket_indices(&p, &swapped).unwrap()));
    assert!(!pi2_basis_check(&LiePresentation::free(&["a"]), &[]));
    assert!(bracket_indices(&p, &[("x0", "w")]).is_err());
}

#[test]
fn stabilizer_examples() {
    let rt = ranks_from_series(&loop_space_betti(4, 4)).unwrap();
    assert_eq!(stabilizer_ranks(&TWO_BLOWUP_RANKS, &rt[1..], 4).unwrap(), vec![9, 14, 21, 55]);
    let g = lie_ranks(&lambda_tilde(), 1).unwrap();
    assert_eq!(stabilizer_ranks(&g[1..], &[5], 1).unwrap(), vec![14]);
    assert_eq!(stabilizer_ranks(&[2, 0], &rt[1..3], 2).unwrap(), vec![6, 9]);
    assert!(stabilizer_ranks(&[1], &[1, 2], 2).is_err());
}

#[test]
fn presentation_json_round_trip() {
    let p = lambda_tilde();
    let q = LiePresentation::from_json(&p.to_json()).unwrap();
    assert_eq!(q, p);
    let small = json!({"generators": ["a", "b"], "relations": [{"a,b": "1"}, {"a,a": 1}]});
    let s = LiePresentation::from_json(&small).unwrap();
    assert_eq!(hilbert_series(&s, 2).unwrap(), vec![1, 2, 2]);
    assert!(LiePresentation::from_json(&json!({"generators": ["a"], "relations": [{"a,c": 1}]})).is_err());
}

#[test]
fn listed_relations_are_independent() {
    let p = lambda_tilde();
    let listed: Vec<_> = p.relations.iter().take(22).cloned().collect();
    assert_eq!(sym2_rank(&listed), 22);
    assert_eq!(p.relations[0], parse_bracket("[x0,y0] = [y0,y3]").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pbw_round_trip(r in prop::collection::vec(0i64..6, 1..=6)) {
        let mut ranks = vec![0];
        ranks.extend(r);
        let h = pbw_series_from_ranks(&ranks);
        prop_assert_eq!(ranks_from_series(&h).unwrap(), ranks.clone());
        prop_assert_eq!(ranks_by_log(&h).unwrap(), ranks);
    }
}
