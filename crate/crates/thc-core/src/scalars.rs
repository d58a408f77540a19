//! Exact scalars: rationals, a small field abstraction, affine forms in the
//! symplectic parameters and sample-point chambers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p".
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A field whose elements may need a runtime context (a prime modulus) to
/// be created from scratch.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    /// None when the denominator vanishes in the field.
    fn from_q(ctx: &Self::Ctx, x: &Q) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Self;
}

impl Field for Q {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        Q::zero()
    }
    fn one_in(_: &()) -> Self {
        Q::one()
    }
    fn from_q(_: &(), x: &Q) -> Option<Self> {
        Some(x.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Element of Z/p for a prime p < 2^32 chosen at runtime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.v;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Fp { v: acc, p: self.p }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.v + o.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp { v: if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v }, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp { v: self.v * o.v % self.p, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl Field for Fp {
    type Ctx = u64;

    fn zero_in(p: &u64) -> Self {
        Fp { v: 0, p: *p }
    }
    fn one_in(p: &u64) -> Self {
        Fp { v: 1, p: *p }
    }
    fn from_q(p: &u64, x: &Q) -> Option<Self> {
        let pb = BigInt::from(*p);
        let n = x.numer().mod_floor(&pb).to_u64()?;
        let d = x.denom().mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(Fp { v: n, p: *p } * Fp { v: d, p: *p }.inv())
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero");
        self.pow(self.p - 2)
    }
}

pub const PARAM_NAMES: [&str; 5] = ["1", "mu", "c1", "c2", "c3"];

/// Affine form a + b·μ + Σ cᵢ·cᵢ over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinForm(pub [Q; 5]);

impl LinForm {
    pub fn zero() -> Self {
        LinForm(std::array::from_fn(|_| Q::zero()))
    }

    pub fn basis(i: usize) -> Self {
        let mut f = Self::zero();
        f.0[i] = Q::one();
        f
    }

    pub fn constant(x: Q) -> Self {
        let mut f = Self::zero();
        f.0[0] = x;
        f
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qi(n))
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn mu() -> Self {
        Self::basis(1)
    }

    /// c_i for i in 1..=3.
    pub fn c(i: usize) -> Self {
        assert!((1..=3).contains(&i));
        Self::basis(i + 1)
    }

    pub fn from_ints(v: [i64; 5]) -> Self {
        LinForm(v.map(qi))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Q) -> Self {
        LinForm(std::array::from_fn(|i| &self.0[i] * k))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&qi(k))
    }

    /// Exchanges the roles of the constant and μ (the B↔F swap on labels).
    pub fn swap_mu_one(&self) -> Self {
        let mut f = self.clone();
        f.0.swap(0, 1);
        f
    }

    /// `self = k·other` for some rational k, if any.
    pub fn ratio_to(&self, other: &LinForm) -> Option<Q> {
        let i = other.0.iter().position(|x| !Zero::is_zero(x))?;
        let k = &self.0[i] / &other.0[i];
        (other.scale(&k) == *self).then_some(k)
    }

    /// Parses labels such as "-1+c_{2}-c_{3}", "\mu-c_{1}", "c1+c2-2c3", "mu".
    pub fn parse(s: &str) -> Result<Self> {
        let norm: String = s
            .replace("\\mu", "mu")
            .replace('μ', "mu")
            .replace(['{', '}', '_', ' ', '$'], "")
            .replace('−', "-")
            .replace(['₁'], "1")
            .replace(['₂'], "2")
            .replace(['₃'], "3");
        if norm.is_empty() {
            return Err(Error::Parse("empty label".into()));
        }
        let mut out = Self::zero();
        let b = norm.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let mut sign = 1i64;
            while i < b.len() && (b[i] == b'+' || b[i] == b'-') {
                if b[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'/') {
                i += 1;
            }
            let coef = if i > start { parse_q(&norm[start..i])? } else { Q::one() };
            let coef = coef * qi(sign);
            let rest = &norm[i..];
            let idx = if rest.starts_with("mu") {
                i += 2;
                1
            } else if rest.starts_with('c') && rest.len() >= 2 {
                let d = rest.as_bytes()[1];
                i += 2;
                match d {
                    b'1' => 2,
                    b'2' => 3,
                    b'3' => 4,
                    _ => return Err(Error::Parse(format!("bad label {s:?}"))),
                }
            } else if i > start {
                0
            } else {
                return Err(Error::Parse(format!("bad label {s:?}")));
            };
            out.0[idx] += coef;
        }
        Ok(out)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if i == 0 {
                write!(f, "{}", fmt_q(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}", fmt_q(&a))?;
                }
                write!(f, "{}", PARAM_NAMES[i])?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &LinForm {
    type Output = LinForm;
    fn add(self, o: &LinForm) -> LinForm {
        LinForm(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &LinForm {
    type Output = LinForm;
    fn sub(self, o: &LinForm) -> LinForm {
        LinForm(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Add for LinForm {
    type Output = LinForm;
    fn add(self, o: LinForm) -> LinForm {
        &self + &o
    }
}

impl Sub for LinForm {
    type Output = LinForm;
    fn sub(self, o: LinForm) -> LinForm {
        &self - &o
    }
}

impl Neg for LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        LinForm(self.0.map(|x| -x))
    }
}

impl Neg for &LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        -self.clone()
    }
}

impl AddAssign<&LinForm> for LinForm {
    fn add_assign(&mut self, o: &LinForm) {
        for i in 0..5 {
            self.0[i] += &o.0[i];
        }
    }
}

impl SubAssign<&LinForm> for LinForm {
    fn sub_assign(&mut self, o: &LinForm) {
        for i in 0..5 {
            self.0[i] -= &o.0[i];
        }
    }
}

impl Serialize for LinForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> =
            self.0.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 5 {
            return Err(D::Error::custom("LinForm needs 5 entries"));
        }
        let mut out = LinForm::zero();
        for (i, s) in v.iter().enumerate() {
            out.0[i] = parse_q(s).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// Serde for rationals as "p/q" strings.
pub mod q_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        fmt_q(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        parse_q(&String::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_q(s).map_err(D::Error::custom))
            .collect()
    }
}

mod q_array4 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Q; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
        q_vec::serialize(x, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Q; 4], D::Error> {
        let v = q_vec::deserialize(d)?;
        v.try_into().map_err(|_| D::Error::custom("expected 4 values"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Chamber {
    pub name: String,
    /// (μ, c1, c2, c3)
    #[serde(with = "q_array4")]
    pub sample: [Q; 4],
    pub inequalities: Vec<LinForm>,
}

fn ordering_chain() -> Vec<LinForm> {
    // 1 > c1+c2 > c1+c3 > c1 > c2 > c3 > 0
    ["1-c1-c2", "c2-c3", "c3", "c1-c2"]
        .iter()
        .map(|s| LinForm::parse(s).unwrap())
        .collect()
}

impl Chamber {
    fn build(name: &str, sample: [Q; 4], extra: &[&str]) -> Self {
        let mut ineq = ordering_chain();
        ineq.extend(extra.iter().map(|s| LinForm::parse(s).unwrap()));
        let ch = Chamber { name: name.into(), sample, inequalities: ineq };
        debug_assert!(ch.is_consistent());
        ch
    }

    pub fn generic() -> Self {
        Self::build("generic", [qi(1), q(2, 5), q(3, 10), q(1, 5)], &["c2+c3-c1", "1-c1-c2-c3"])
    }

    pub fn e1neg() -> Self {
        Self::build("e1neg", [qi(1), q(1, 2), q(3, 10), q(3, 20)], &["c1-c2-c3", "1-c1-c2-c3"])
    }

    pub fn generic_mu2() -> Self {
        let mut c = Self::generic();
        c.name = "generic-mu2".into();
        c.sample[0] = qi(2);
        c.inequalities.push(LinForm::parse("mu-1").unwrap());
        c
    }

    pub fn e1neg_mu2() -> Self {
        let mut c = Self::e1neg();
        c.name = "e1neg-mu2".into();
        c.sample[0] = qi(2);
        c.inequalities.push(LinForm::parse("mu-1").unwrap());
        c
    }

    /// A chamber given only by a sample point; its inequality list is the
    /// ordering chain (empty when the sample violates it).
    pub fn custom(name: &str, mu: Q, c1: Q, c2: Q, c3: Q) -> Self {
        let mut ch = Chamber { name: name.into(), sample: [mu, c1, c2, c3], inequalities: vec![] };
        let chain = ordering_chain();
        if chain.iter().all(|f| ch.sign(f) == Sign::Positive) {
            ch.inequalities = chain;
        }
        ch
    }

    pub fn shipped() -> Vec<Chamber> {
        vec![Self::generic(), Self::e1neg(), Self::generic_mu2(), Self::e1neg_mu2()]
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::shipped()
            .into_iter()
            .find(|c| c.name == name.to_ascii_lowercase())
            .ok_or_else(|| Error::Unknown(format!("chamber {name}")))
    }

    pub fn eval(&self, f: &LinForm) -> Q {
        let mut v = f.0[0].clone();
        for i in 0..4 {
            v += &f.0[i + 1] * &self.sample[i];
        }
        v
    }

    pub fn sign(&self, f: &LinForm) -> Sign {
        let v = self.eval(f);
        if Zero::is_zero(&v) {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn positive(&self, f: &LinForm) -> bool {
        self.sign(f) == Sign::Positive
    }

    pub fn is_consistent(&self) -> bool {
        self.inequalities.iter().all(|f| self.positive(f))
    }

    /// Three-way comparison of two forms at the sample.
    pub fn cmp(&self, a: &LinForm, b: &LinForm) -> std::cmp::Ordering {
        self.eval(a).cmp(&self.eval(b))
    }
}

pub fn eval(f: &LinForm, ch: &Chamber) -> Q {
    ch.eval(f)
}

pub fn sign_in_chamber(f: &LinForm, ch: &Chamber) -> Sign {
    ch.sign(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_labels() {
        assert_eq!(LinForm::parse("-1+c_{2}-c_{3}").unwrap(), LinForm::from_ints([-1, 0, 0, 1, -1]));
        assert_eq!(LinForm::parse("\\mu-c_{1}").unwrap(), LinForm::from_ints([0, 1, -1, 0, 0]));
        assert_eq!(LinForm::parse("c1+c2-2c3").unwrap(), LinForm::from_ints([0, 0, 1, 1, -2]));
        assert_eq!(LinForm::parse("0").unwrap(), LinForm::zero());
        assert!(LinForm::parse("c4").is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["mu-c1-c3", "-1+c2", "1/2c1", "0", "2mu+3"] {
            let f = LinForm::parse(s).unwrap();
            assert_eq!(LinForm::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn fp_inverse() {
        let p = 2_147_483_647;
        let x = Fp::new(123456, p);
        assert_eq!((x * x.inv()).v, 1);
        assert_eq!(Fp::from_q(&p, &q(1, 2)).unwrap().v * 2 % p, 1);
        assert!(Fp::from_q(&7, &q(1, 7)).is_none());
    }

    #[test]
    fn custom_chamber_checks_chain() {
        let c = Chamber::custom("x", qi(1), q(1, 2), q(1, 3), q(1, 4));
        assert!(!c.inequalities.is_empty());
        let bad = Chamber::custom("y", qi(1), q(1, 5), q(1, 3), q(1, 4));
        assert!(bad.inequalities.is_empty());
    }
}
