use num_traits::{One, Zero};
use proptest::prelude::*;
use thc_core::scalars::{eval, parse_q, q, qi, sign_in_chamber, Chamber, Field, Fp, LinForm, Sign, Q};

fn lf(s: &str) -> LinForm {
    LinForm::parse(s).unwrap()
}

#[test]
fn eval_examples() {
    let g = Chamber::generic();
    assert_eq!(eval(&lf("mu-c2"), &g), q(7, 10));
    assert_eq!(eval(&lf("1"), &g), qi(1));
    assert_eq!(eval(&lf("1"), &Chamber::e1neg()), qi(1));
    assert_eq!(eval(&lf("c1+c2+c3"), &g), q(9, 10));
}

#[test]
fn sign_examples() {
    let (g, e) = (Chamber::generic(), Chamber::e1neg());
    assert_eq!(sign_in_chamber(&lf("c2-c3"), &g), Sign::Positive);
    assert_eq!(sign_in_chamber(&LinForm::zero(), &g), Sign::Zero);
    assert_eq!(sign_in_chamber(&lf("c2+c3-c1"), &g), Sign::Positive);
    assert_eq!(sign_in_chamber(&lf("c2+c3-c1"), &e), Sign::Negative);
}

#[test]
fn shipped_chambers_respect_the_ordering_chain() {
    for ch in Chamber::shipped() {
        assert!(ch.is_consistent(), "{}", ch.name);
        let [_, c1, c2, c3] = ch.sample.clone();
        assert!(qi(1) > c1.clone() + c2.clone());
        assert!(c1.clone() + c2.clone() > c1.clone() + c3.clone());
        assert!(c1 > c2 && c2 > c3 && c3 > Q::zero());
    }
    assert!(Chamber::by_name("nowhere").is_err());
}

#[test]
fn parse_and_display() {
    assert_eq!(lf("2mu - 1/2c1 + 3"), LinForm([qi(3), qi(2), q(-1, 2), qi(0), qi(0)]));
    assert_eq!(lf("-1+c2").to_string(), lf("c2-1").to_string());
    assert_eq!(parse_q("-3/6").unwrap(), q(-1, 2));
    assert!(LinForm::parse("c4").is_err());
    assert!(parse_q("1/0").is_err());
}

#[test]
fn finite_field_inverse() {
    let p = 2147483647u64;
    for v in [1i64, 2, 12345, -7, 2147483646] {
        let x = Fp::new(v, p);
        assert_eq!(x.clone() * x.inv(), Fp::new(1, p));
    }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn form() -> impl Strategy<Value = LinForm> {
    prop::array::uniform5(small_q()).prop_map(LinForm)
}

fn sample() -> impl Strategy<Value = Chamber> {
    prop::array::uniform4(small_q()).prop_map(|[a, b, c, d]| Chamber::custom("s", a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_linear(f in form(), g in form(), k in small_q(), ch in sample()) {
        prop_assert_eq!(eval(&(&f + &g), &ch), eval(&f, &ch) + eval(&g, &ch));
        prop_assert_eq!(eval(&f.scale(&k), &ch), k * eval(&f, &ch));
        prop_assert_eq!(eval(&(&f - &f), &ch), Q::zero());
    }

    #[test]
    fn rational_inverse(n in 1i64..1000, d in 1i64..1000) {
        prop_assert_eq!(q(n, d) * q(d, n), Q::one());
    }

    #[test]
    fn display_parses_back(f in form()) {
        prop_assert_eq!(LinForm::parse(&f.to_string()).unwrap(), f);
    }
}
