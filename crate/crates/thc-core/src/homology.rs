//! The lattice H₂ of the blow-ups of S²×S²: pairing, Chern number, area,
//! adjunction, curve enumeration and the Dᵢ family.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{q, qi, Chamber, LinForm, Q};

/// pB + qF − Σ rᵢEᵢ stored as [p, q, r1, r2, r3(, r4)].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(pub Vec<i64>);

impl HomologyClass {
    pub fn new(p: i64, q: i64, r: [i64; 3]) -> Self {
        HomologyClass(vec![p, q, r[0], r[1], r[2]])
    }

    pub fn zero() -> Self {
        Self::new(0, 0, [0, 0, 0])
    }

    pub fn b() -> Self {
        Self::new(1, 0, [0, 0, 0])
    }

    pub fn f() -> Self {
        Self::new(0, 1, [0, 0, 0])
    }

    /// The exceptional class E_i (1-based), as a class of the 5-term basis.
    pub fn e(i: usize) -> Self {
        let mut c = Self::zero();
        c.0[1 + i] = -1;
        c
    }

    pub fn p(&self) -> i64 {
        self.0[0]
    }

    pub fn q(&self) -> i64 {
        self.0[1]
    }

    pub fn r(&self, i: usize) -> i64 {
        self.0[1 + i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    /// Parses "B+2F-E1-E2", "E1-E2-E3", "F", "0".
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('−', "-");
        let mut out = Self::zero();
        let b = s.as_bytes();
        let mut i = 0;
        let bad = || Error::Parse(format!("bad class {s:?}"));
        if s == "0" {
            return Ok(out);
        }
        while i < b.len() {
            let mut sign = 1;
            if b[i] == b'+' || b[i] == b'-' {
                if b[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let k: i64 = if i > start { s[start..i].parse().map_err(|_| bad())? } else { 1 };
            let k = k * sign;
            match b.get(i) {
                Some(b'B') => {
                    out.0[0] += k;
                    i += 1;
                }
                Some(b'F') => {
                    out.0[1] += k;
                    i += 1;
                }
                Some(b'E') => {
                    let d = *b.get(i + 1).ok_or_else(bad)?;
                    let idx = (d as char).to_digit(10).ok_or_else(bad)? as usize;
                    if !(1..=4).contains(&idx) {
                        return Err(bad());
                    }
                    if idx == 4 && out.0.len() < 6 {
                        out.0.push(0);
                    }
                    out.0[1 + idx] -= k;
                    i += 2;
                }
                _ => return Err(bad()),
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        same_len(self, o)?;
        Ok(HomologyClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect()))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("basis mismatch")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        HomologyClass(self.0.iter().map(|x| x * k).collect())
    }

    /// The B↔F involution.
    pub fn swap_bf(&self) -> Self {
        let mut c = self.clone();
        c.0.swap(0, 1);
        c
    }

    /// Pads to the 6-term basis with r4 = 0.
    pub fn extend(&self) -> Self {
        let mut c = self.clone();
        if c.0.len() == 5 {
            c.0.push(0);
        }
        c
    }
}

fn same_len(a: &HomologyClass, b: &HomologyClass) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::BasisMismatch(a.len(), b.len()));
    }
    Ok(())
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = vec![(self.0[0], "B".into()), (self.0[1], "F".into())];
        for i in 2..self.0.len() {
            terms.push((-self.0[i], format!("E{}", i - 1)));
        }
        let mut first = true;
        for (k, name) in terms {
            if k == 0 {
                continue;
            }
            if k < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if k.abs() != 1 {
                write!(f, "{}", k.abs())?;
            }
            write!(f, "{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn cls(s: &str) -> HomologyClass {
    HomologyClass::parse(s).unwrap_or_else(|e| panic!("{e}"))
}

pub fn checked_pairing(a: &HomologyClass, b: &HomologyClass) -> Result<i64> {
    same_len(a, b)?;
    let mut v = a.0[0] * b.0[1] + a.0[1] * b.0[0];
    for i in 2..a.len() {
        v -= a.0[i] * b.0[i];
    }
    Ok(v)
}

pub fn pairing(a: &HomologyClass, b: &HomologyClass) -> i64 {
    checked_pairing(a, b).expect("basis mismatch")
}

pub fn chern(a: &HomologyClass) -> i64 {
    2 * a.0[0] + 2 * a.0[1] - a.0[2..].iter().sum::<i64>()
}

/// Anticanonical class 2B+2F−ΣEᵢ in the basis length `n`.
pub fn anticanonical(n: usize) -> HomologyClass {
    let mut v = vec![2, 2];
    v.extend(std::iter::repeat(1).take(n - 2));
    HomologyClass(v)
}

pub fn virtual_genus(a: &HomologyClass) -> Q {
    qi(1) + q(pairing(a, a) - chern(a), 2)
}

/// Values (ω(B), ω(F), ω(E1), ω(E2), ω(E3)).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SymplecticClass(pub [LinForm; 5]);

impl SymplecticClass {
    pub fn standard() -> Self {
        SymplecticClass([LinForm::mu(), LinForm::one(), LinForm::c(1), LinForm::c(2), LinForm::c(3)])
    }

    /// A numeric class ω(B)=mu, ω(F)=1, ω(Ei)=ci.
    pub fn numeric(mu: Q, c: [Q; 3]) -> Self {
        let [c1, c2, c3] = c;
        SymplecticClass([mu, qi(1), c1, c2, c3].map(LinForm::constant))
    }

    /// The cohomology class acting on H₂: A ↦ pω(B) + qω(F) − Σ rᵢω(Eᵢ).
    pub fn area(&self, a: &HomologyClass) -> LinForm {
        let mut out = self.0[0].scale_int(a.0[0]);
        out += &self.0[1].scale_int(a.0[1]);
        for i in 0..3 {
            out -= &self.0[2 + i].scale_int(a.0[2 + i]);
        }
        out
    }
}

pub fn area(a: &HomologyClass, w: &SymplecticClass) -> LinForm {
    w.area(a)
}

/// Area under the standard form.
pub fn std_area(a: &HomologyClass) -> LinForm {
    SymplecticClass::standard().area(a)
}

/// Inverse of `std_area` on forms with integer coefficients.
pub fn class_from_length(f: &LinForm) -> Option<HomologyClass> {
    let int = |x: &Q| x.is_integer().then(|| x.to_integer().try_into().ok()).flatten();
    let p: i64 = int(&f.0[1])?;
    let q: i64 = int(&f.0[0])?;
    let r: Vec<i64> = (2..5).map(|i| int(&f.0[i]).map(|x: i64| -x)).collect::<Option<_>>()?;
    Some(HomologyClass::new(p, q, [r[0], r[1], r[2]]))
}

/// Classes with p = 0 passing adjunction and area positivity in the chamber.
pub fn enumerate_p0_classes(ch: &Chamber) -> Vec<HomologyClass> {
    scan_p0(ch, 3)
}

/// Brute-force scan over |q|, |rᵢ| ≤ bound.
pub fn scan_p0(ch: &Chamber, bound: i64) -> Vec<HomologyClass> {
    let mut out = Vec::new();
    let range = -bound..=bound;
    for q in range.clone() {
        for r1 in range.clone() {
            for r2 in range.clone() {
                for r3 in range.clone() {
                    let a = HomologyClass::new(0, q, [r1, r2, r3]);
                    let adj = 2 * (q - 1) + [r1, r2, r3].iter().map(|r| r * (r - 1)).sum::<i64>();
                    if adj <= 0 && ch.positive(&std_area(&a)) {
                        out.push(a);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Table 1 verbatim, with the subchamber condition (if any) that each row needs.
pub fn table1() -> Vec<(HomologyClass, Option<&'static str>)> {
    [
        ("F", None),
        ("F-E3", None),
        ("F-E2", None),
        ("F-E2-E3", None),
        ("F-E1", None),
        ("F-E1-E3", None),
        ("F-E1-E2", None),
        ("F-E1-E2-E3", Some("1-c1-c2-c3")),
        ("E1", None),
        ("E1-E3", None),
        ("E1-E2", None),
        ("E1-E2-E3", Some("c1-c2-c3")),
        ("E3", None),
        ("E2", None),
        ("E2-E3", None),
    ]
    .into_iter()
    .map(|(c, cond)| (cls(c), cond))
    .collect()
}

/// Table 1 filtered by the chamber's subcase signs.
pub fn table1_in(ch: &Chamber) -> Vec<HomologyClass> {
    let mut v: Vec<HomologyClass> = table1()
        .into_iter()
        .filter(|(_, cond)| cond.is_none_or(|c| ch.positive(&LinForm::parse(c).unwrap())))
        .map(|(c, _)| c)
        .collect();
    v.sort();
    v
}

/// Counterexamples to "2g_v ≥ 0 and area > 0 imply p ≥ 0, and p = 1 forces
/// rᵢ ∈ {0,1}" within |·| ≤ bound.
pub fn lemma_p_nonnegative_violations(ch: &Chamber, bound: i64) -> Vec<HomologyClass> {
    let mut out = Vec::new();
    let r = -bound..=bound;
    for p in r.clone() {
        for q in r.clone() {
            for r1 in r.clone() {
                for r2 in r.clone() {
                    for r3 in r.clone() {
                        let a = HomologyClass::new(p, q, [r1, r2, r3]);
                        let two_g = 2 * (p - 1) * (q - 1) - [r1, r2, r3].iter().map(|x| x * (x - 1)).sum::<i64>();
                        if two_g < 0 || !ch.positive(&std_area(&a)) {
                            continue;
                        }
                        let p1_bad = p == 1 && [r1, r2, r3].iter().any(|x| !(0..=1).contains(x));
                        if p < 0 || p1_bad {
                            out.push(a);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Residue branch of Dᵢ: i = 4k − s.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DBranch {
    /// 4k
    S0,
    /// 4k−1(j): minus E_j
    S1(usize),
    /// 4k−2(j): minus the two E's other than E_j
    S2(usize),
    /// 4k−3
    S3,
}

impl DBranch {
    pub fn s(&self) -> i64 {
        match self {
            DBranch::S0 => 0,
            DBranch::S1(_) => 1,
            DBranch::S2(_) => 2,
            DBranch::S3 => 3,
        }
    }
}

/// The branch an index lives in, given j for the two indexed branches.
pub fn d_branch(i: i64, j: Option<usize>) -> Result<DBranch> {
    let s = (-i).rem_euclid(4);
    let jj = || match j {
        Some(j) if (1..=3).contains(&j) => Ok(j),
        _ => Err(Error::Invalid(format!("D_{i} needs an index j in 1..=3"))),
    };
    match s {
        0 => Ok(DBranch::S0),
        1 => Ok(DBranch::S1(jj()?)),
        2 => Ok(DBranch::S2(jj()?)),
        _ => Ok(DBranch::S3),
    }
}

pub fn d_class(i: i64, j: Option<usize>) -> Result<HomologyClass> {
    if i < -3 {
        return Err(Error::Invalid(format!("D_{i}: index below -3")));
    }
    let br = d_branch(i, j)?;
    let k = (i + br.s()) / 4;
    let mut c = HomologyClass::new(1, k, [0, 0, 0]);
    match br {
        DBranch::S0 => {}
        DBranch::S1(j) => c.0[1 + j] = 1,
        DBranch::S2(j) => {
            for m in 1..=3 {
                if m != j {
                    c.0[1 + m] = 1;
                }
            }
        }
        DBranch::S3 => c.0[2..].iter_mut().for_each(|x| *x = 1),
    }
    Ok(c)
}

/// (self-intersection, c₁, moduli dimension, k(Dᵢ)) from the piecewise tables.
pub fn d_invariants(i: i64) -> (i64, i64, i64, i64) {
    match (-i).rem_euclid(4) {
        0 => (i / 2, i / 2 + 2, i + 2, i / 2 + 1),
        1 => ((i - 1) / 2, (i + 3) / 2, i + 1, (i + 1) / 2),
        2 => (i / 2 - 1, i / 2 + 1, i, i / 2),
        _ => ((i - 3) / 2, (i + 1) / 2, i - 1, (i - 1) / 2),
    }
}

/// The same invariants computed from the class itself, with dim = 2c₁ − 2
/// and k = dim/2.
pub fn d_invariants_direct(c: &HomologyClass) -> (i64, i64, i64, i64) {
    let c1 = chern(c);
    (pairing(c, c), c1, 2 * c1 - 2, c1 - 1)
}

pub fn can_coexist(i: i64, j: Option<usize>, a: &HomologyClass) -> Result<bool> {
    Ok(pairing(&d_class(i, j)?, a) >= 0)
}

/// The exception bullets: (branch with k symbolic, classes listed).
pub fn exception_list() -> Vec<(DBranch, Vec<HomologyClass>)> {
    let l = |v: &[&str]| v.iter().map(|s| cls(s)).collect::<Vec<_>>();
    vec![
        (DBranch::S1(2), l(&["E1-E2", "E1-E2-E3"])),
        (DBranch::S1(3), l(&["E1-E3", "E2-E3", "E1-E2-E3"])),
        (DBranch::S2(1), l(&["F-E2-E3", "E1-E2-E3", "E1-E2", "E1-E3"])),
        (DBranch::S2(2), l(&["F-E1-E3", "E2-E3"])),
        (DBranch::S2(3), l(&["F-E1-E2"])),
        (DBranch::S3, l(&["F-E1-E2-E3", "F-E1-E2", "F-E1-E3", "F-E2-E3", "E1-E2-E3"])),
    ]
}

/// Negative pairs the bullets omit: every 4k−2 branch pairs to −1 with
/// F−E1−E2−E3.
pub fn unlisted_exceptions() -> Vec<(DBranch, HomologyClass)> {
    (1..=3).map(|j| (DBranch::S2(j), cls("F-E1-E2-E3"))).collect()
}

/// Dᵢ for branch `br` and a given k.
pub fn d_class_branch(br: DBranch, k: i64) -> Result<HomologyClass> {
    let j = match br {
        DBranch::S1(j) | DBranch::S2(j) => Some(j),
        _ => None,
    };
    d_class(4 * k - br.s(), j)
}

pub fn all_branches() -> Vec<DBranch> {
    let mut v = vec![DBranch::S0];
    v.extend((1..=3).map(DBranch::S1));
    v.extend((1..=3).map(DBranch::S2));
    v.push(DBranch::S3);
    v
}

/// Every (branch, Table-1 class) pair with negative pairing for some k in the
/// given range. Pairings with p = 0 classes do not depend on k.
pub fn negative_pairs(ks: std::ops::RangeInclusive<i64>) -> Vec<(DBranch, HomologyClass)> {
    let mut out = Vec::new();
    for br in all_branches() {
        for (a, _) in table1() {
            let neg = ks.clone().any(|k| {
                d_class_branch(br, k).map(|d| pairing(&d, &a) < 0).unwrap_or(false)
            });
            if neg {
                out.push((br, a));
            }
        }
    }
    out
}

/// A class in the basis {L, V1, V2, V3, V4}: a0·L − Σ aᵢVᵢ.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LClass(pub [i64; 5]);

pub fn is_reduced(a: &LClass) -> bool {
    let [a0, a1, a2, a3, a4] = a.0;
    a1 >= a2 && a2 >= a3 && a3 >= a4 && a0 >= a1 + a2 + a3
}

/// Pairing on CP²#4: L² = 1, Vᵢ² = −1.
pub fn cp2_pairing(a: &LClass, b: &LClass) -> i64 {
    a.0[0] * b.0[0] - (1..5).map(|i| a.0[i] * b.0[i]).sum::<i64>()
}

/// L ↦ B+F−E1, V1 ↦ B−E1, V2 ↦ F−E1, V3 ↦ E2, V4 ↦ E3.
pub fn basis_change(a: &LClass) -> HomologyClass {
    let images = [cls("B+F-E1"), cls("B-E1"), cls("F-E1"), cls("E2"), cls("E3")];
    let mut out = HomologyClass::zero();
    for (i, img) in images.iter().enumerate() {
        let coef = if i == 0 { a.0[0] } else { -a.0[i] };
        out = out.add(&img.scale(coef));
    }
    out
}

/// Inverse of [`basis_change`].
pub fn basis_change_inv(c: &HomologyClass) -> LClass {
    let (p, q, r1) = (c.0[0], c.0[1], c.0[2]);
    LClass([p + q - r1, q - r1, p - r1, c.0[3], c.0[4]])
}

/// (μ, c1, c2, c3) from CP²#4 data (ν; δ1..δ4).
pub fn cp2_parameters(nu: &Q, d: [&Q; 4]) -> Result<[Q; 4]> {
    let den = nu - d[0];
    if den <= Q::zero() {
        return Err(Error::Invalid("need nu > delta1".into()));
    }
    Ok([
        (nu - d[1]) / &den,
        (nu - d[0] - d[1]) / &den,
        d[2] / &den,
        d[3] / &den,
    ])
}
