//! Graded Lie algebras on odd generators: enveloping-algebra Hilbert series,
//! PBW series inversion and the rank arithmetic around them.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::relations::{pair_index, pair_of, square_relations, sym2_dim, theorem_relations, Sym2Relation, GENERATORS};
use crate::scalars::{fmt_q, parse_q, Field, Fp, Q};

/// Moduli used for the top degree unless `THC_PRIMES` overrides them.
pub const DEFAULT_PRIMES: [u64; 3] = [2147483647, 2147483629, 2147483587];

/// Degrees up to this one are computed over Q.
pub const EXACT_DEGREE: usize = 4;

/// Generators in degree 1 and degree-2 relations (squares included).
#[derive(Clone, Debug, PartialEq)]
pub struct LiePresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Sym2Relation>,
}

impl LiePresentation {
    pub fn free(names: &[&str]) -> Self {
        LiePresentation { generators: names.iter().map(|s| s.to_string()).collect(), relations: Vec::new() }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    /// Relations as tensors uv + vu in V⊗V, index u·g + v.
    fn tensor_relations(&self) -> Vec<Vec<(usize, usize, Q)>> {
        let g = self.ngens();
        self.relations
            .iter()
            .map(|r| {
                let mut t = Vec::new();
                for (k, c) in r.0.iter().enumerate() {
                    if Zero::is_zero(c) {
                        continue;
                    }
                    let (i, j) = pair_of(g, k);
                    if i == j {
                        t.push((i, i, c.clone()));
                    } else {
                        t.push((i, j, c.clone()));
                        t.push((j, i, c.clone()));
                    }
                }
                t
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let g = self.ngens();
        let rels: Vec<Value> = self
            .relations
            .iter()
            .map(|r| {
                let m: serde_json::Map<String, Value> = r
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !Zero::is_zero(*c))
                    .map(|(k, c)| {
                        let (i, j) = pair_of(g, k);
                        (format!("{},{}", self.generators[i], self.generators[j]), Value::String(fmt_q(c)))
                    })
                    .collect();
                Value::Object(m)
            })
            .collect();
        json!({ "generators": self.generators, "relations": rels })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("presentation: {m}"));
        let generators: Vec<String> = v["generators"]
            .as_array()
            .ok_or_else(|| bad("missing generators"))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("generator names must be strings")))
            .collect::<Result<_>>()?;
        let g = generators.len();
        let idx = |s: &str| generators.iter().position(|x| x == s).ok_or_else(|| bad(&format!("unknown generator {s}")));
        let mut relations = Vec::new();
        for r in v["relations"].as_array().ok_or_else(|| bad("missing relations"))? {
            let mut vec = vec![Q::zero(); sym2_dim(g)];
            for (k, c) in r.as_object().ok_or_else(|| bad("relation must be an object"))? {
                let (a, b) = k.split_once(',').ok_or_else(|| bad(&format!("pair key {k}")))?;
                let c = match c {
                    Value::String(s) => parse_q(s)?,
                    Value::Number(n) => parse_q(&n.to_string())?,
                    _ => return Err(bad("coefficient must be a string or number")),
                };
                vec[pair_index(g, idx(a.trim())?, idx(b.trim())?)] += c;
            }
            relations.push(Sym2Relation(vec));
        }
        Ok(LiePresentation { generators, relations })
    }
}

/// The presentation with nine generators, the 22 listed relations and the
/// nine squares.
pub fn lambda_tilde() -> LiePresentation {
    let mut relations = theorem_relations();
    relations.extend(square_relations(GENERATORS.len()));
    LiePresentation { generators: GENERATORS.iter().map(|s| s.to_string()).collect(), relations }
}

/// Betti numbers of a loop space with h₀ = 1, h₁ = b2, hₙ = b2·hₙ₋₁ − hₙ₋₂.
pub fn loop_space_betti(b2: i64, n: usize) -> Vec<i64> {
    let mut h = vec![1i64];
    if n >= 1 {
        h.push(b2);
    }
    for k in 2..=n {
        h.push(b2 * h[k - 1] - h[k - 2]);
    }
    h
}

fn binom(n: i128, k: i128) -> i128 {
    let mut r = 1i128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Multiplies `s` by the PBW factor of r generators in degree d.
fn mul_factor(s: &[i128], d: usize, r: i128) -> Vec<i128> {
    let n = s.len();
    let mut out = vec![0i128; n];
    for k in 0..n {
        if k * d >= n {
            break;
        }
        let c = if d % 2 == 1 { binom(r, k as i128) } else { binom(r + k as i128 - 1, k as i128) };
        if c == 0 {
            continue;
        }
        for i in 0..n - k * d {
            out[i + k * d] += c * s[i];
        }
    }
    out
}

/// Π (1+zⁿ)^{rₙ} (n odd) · Π (1−zⁿ)^{−rₙ} (n even), truncated at the length
/// of `r` (entry 0 ignored).
pub fn pbw_series_from_ranks(r: &[i64]) -> Vec<i64> {
    let n = r.len();
    let mut s = vec![0i128; n.max(1)];
    s[0] = 1;
    for d in 1..n {
        s = mul_factor(&s, d, r[d] as i128);
    }
    s.into_iter().map(|x| x as i64).collect()
}

/// Inverse of [`pbw_series_from_ranks`]; entry 0 of the result is 0.
pub fn ranks_from_series(h: &[i64]) -> Result<Vec<i64>> {
    if h.first() != Some(&1) {
        return Err(Error::NotPbw(0));
    }
    let n = h.len();
    let mut s = vec![0i128; n];
    s[0] = 1;
    let mut r = vec![0i64; n];
    for d in 1..n {
        let rd = h[d] as i128 - s[d];
        if rd < 0 {
            return Err(Error::NotPbw(d));
        }
        r[d] = rd as i64;
        s = mul_factor(&s, d, rd);
    }
    Ok(r)
}

/// One degree of the enveloping algebra: rref over columns
/// (basis index of the previous degree, letter).
struct Level<F: Field> {
    ech: Echelon<F>,
    /// Free columns, i.e. the monomial basis of this degree.
    basis: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl<F: Field> Level<F> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Normal form of column `c` in basis coordinates.
    fn nf(&self, c: usize) -> Vec<(usize, F)> {
        self.ech.normal_form_of_col(c).into_iter().map(|(k, x)| (self.pos[k].unwrap(), x)).collect()
    }
}

fn build_level<F: Field>(ctx: &F::Ctx, ncols: usize, vs: Vec<SparseVec<F>>, need_nf: bool) -> Level<F> {
    let mut ech = Echelon::new(ctx.clone(), ncols);
    ech.insert_all(&vs);
    if need_nf {
        ech.rref();
    }
    let basis: Vec<usize> = (0..ncols).filter(|c| !ech.is_pivot(*c)).collect();
    let mut pos = vec![None; ncols];
    for (i, c) in basis.iter().enumerate() {
        pos[*c] = Some(i);
    }
    Level { ech, basis, pos }
}

/// dim U(L)ₙ for n ≤ max over the field F.
fn hilbert_over<F: Field>(p: &LiePresentation, ctx: F::Ctx, max: usize) -> Result<Vec<usize>> {
    let g = p.ngens();
    let rels: Vec<Vec<(usize, usize, F)>> = p
        .tensor_relations()
        .into_iter()
        .map(|t| {
            t.into_iter()
                .map(|(a, b, c)| {
                    F::from_q(&ctx, &c)
                        .map(|x| (a, b, x))
                        .ok_or_else(|| Error::PrimeDisagreement(format!("coefficient {} not invertible", fmt_q(&c))))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut dims = vec![1usize];
    if max == 0 {
        return Ok(dims);
    }
    dims.push(g);
    // degree 1: columns are letters; identity normal forms
    let mut prev: Option<Level<F>> = None;
    let mut cur = build_level::<F>(&ctx, g, Vec::new(), true);
    for n in 2..=max {
        let ncols = cur.dim() * g;
        // basis of degree n-2 is `prev` (or the empty word for n = 2)
        let prev_dim = prev.as_ref().map(|l| l.dim()).unwrap_or(1);
        let vs: Vec<SparseVec<F>> = (0..prev_dim)
            .into_par_iter()
            .flat_map_iter(|u| {
                let cur = &cur;
                let ctx = &ctx;
                rels.iter().map(move |rel| {
                    let mut acc: BTreeMap<usize, F> = BTreeMap::new();
                    for (a, b, c) in rel {
                        // u·a in degree n-1, then ·b
                        let col = u * g + a;
                        let nf = if n == 2 { vec![(*a, F::one_in(ctx))] } else { cur.nf(col) };
                        for (k, x) in nf {
                            let e = acc.entry(k * g + b).or_insert_with(|| F::zero_in(ctx));
                            *e = e.clone() + x * c.clone();
                        }
                    }
                    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
                })
            })
            .collect();
        let next = build_level::<F>(&ctx, ncols, vs, n < max);
        dims.push(next.dim());
        prev = Some(cur);
        cur = next;
    }
    Ok(dims)
}

/// The primes used for modular degrees, honouring `THC_PRIMES`.
pub fn primes() -> Result<Vec<u64>> {
    match std::env::var("THC_PRIMES") {
        Ok(s) if !s.trim().is_empty() => s
            .split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|_| Error::Parse(format!("THC_PRIMES entry {p:?}"))))
            .collect(),
        _ => Ok(DEFAULT_PRIMES.to_vec()),
    }
}

/// Dimensions of U(L) in degrees 0..=n: exact through degree 4, modular
/// with agreement required beyond.
pub fn hilbert_series(p: &LiePresentation, n: usize) -> Result<Vec<i64>> {
    let exact = hilbert_over::<Q>(p, (), n.min(EXACT_DEGREE))?;
    let mut out: Vec<i64> = exact.iter().map(|x| *x as i64).collect();
    if n > EXACT_DEGREE {
        let ps = primes()?;
        out.extend(hilbert_modular(p, n, &ps)?[EXACT_DEGREE + 1..].iter());
    }
    Ok(out)
}

/// Dimensions computed modulo each prime; all must agree.
pub fn hilbert_modular(p: &LiePresentation, n: usize, primes: &[u64]) -> Result<Vec<i64>> {
    if primes.is_empty() {
        return Err(Error::PrimeDisagreement("no primes given".into()));
    }
    let runs: Vec<(u64, Vec<usize>)> = primes
        .par_iter()
        .map(|q| hilbert_over::<Fp>(p, *q, n).map(|d| (*q, d)))
        .collect::<Result<_>>()?;
    let first = &runs[0].1;
    for (q, d) in &runs[1..] {
        if d != first {
            return Err(Error::PrimeDisagreement(format!("mod {} gives {:?}, mod {} gives {:?}", runs[0].0, first, q, d)));
        }
    }
    Ok(first.iter().map(|x| *x as i64).collect())
}

pub fn lie_ranks(p: &LiePresentation, n: usize) -> Result<Vec<i64>> {
    ranks_from_series(&hilbert_series(p, n)?)
}

/// Rank of the relation span in the symmetric square.
pub fn relation_rank(p: &LiePresentation) -> usize {
    crate::relations::sym2_rank(&p.relations)
}

/// True iff the given brackets complete the relations to a basis of the
/// symmetric square, i.e. they form a basis of degree 2.
pub fn pi2_basis_check(p: &LiePresentation, candidates: &[(usize, usize)]) -> bool {
    let g = p.ngens();
    let total = sym2_dim(g);
    let target = total - relation_rank(p);
    if candidates.len() != target || target == 0 {
        return false;
    }
    let mut all = p.relations.clone();
    for (i, j) in candidates {
        if *i >= g || *j >= g {
            return false;
        }
        let mut v = vec![Q::zero(); total];
        v[pair_index(g, *i, *j)] = Q::from_integer(1.into());
        all.push(Sym2Relation(v));
    }
    crate::relations::sym2_rank(&all) == total
}

/// Brackets named as "x0,x1" resolved against the presentation.
pub fn bracket_indices(p: &LiePresentation, names: &[(&str, &str)]) -> Result<Vec<(usize, usize)>> {
    let idx = |s: &str| p.generators.iter().position(|x| x == s).ok_or_else(|| Error::Unknown(format!("generator {s}")));
    names.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect()
}

/// The fourteen degree-2 brackets proposed as a basis.
pub const PI2_BASIS: [(&str, &str); 14] = [
    ("x0", "x1"),
    ("x0", "x2"),
    ("x0", "y0"),
    ("x0", "z"),
    ("x1", "y4"),
    ("x1", "z"),
    ("x2", "x4"),
    ("x2", "y2"),
    ("x2", "y3"),
    ("x4", "y4"),
    ("y0", "y2"),
    ("y2", "y3"),
    ("y2", "y4"),
    ("y2", "z"),
];

/// Ranks of a stabilizer from the fibration exact sequence:
/// outₙ = gₙ + mₙ, where mₙ = dim π_{n+1} of the manifold. Inputs are
/// indexed from degree 1.
pub fn stabilizer_ranks(g: &[i64], m: &[i64], n: usize) -> Result<Vec<i64>> {
    if g.len() < n || m.len() < n {
        return Err(Error::Invalid(format!("need {n} ranks, got {} and {}", g.len(), m.len())));
    }
    Ok((0..n).map(|i| g[i] + m[i]).collect())
}

/// Quoted ranks of the two-point blow-up group in degrees 1..=5.
pub const TWO_BLOWUP_RANKS: [i64; 5] = [5, 5, 5, 10, 24];

/// Value stated in the text for r̃₄, which series inversion contradicts.
pub const STATED_R4: i64 = 27;

/// Predicted dims of U(Λ̃): h̃′ₙ = h′ₙ + 4h̃′ₙ₋₁ − h̃′ₙ₋₂ with h′ₙ = 5hₙ₋₁.
pub fn predicted_hilbert(n: usize) -> Vec<i64> {
    let h = loop_space_betti(3, n);
    let hp: Vec<i64> = (0..=n).map(|k| if k == 0 { 1 } else { 5 * h[k - 1] }).collect();
    let mut out: Vec<i64> = Vec::new();
    for k in 0..=n {
        let v = match k {
            0 => 1,
            1 => hp[1] + 4,
            _ => hp[k] + 4 * out[k - 1] - out[k - 2],
        };
        out.push(v);
    }
    out
}

/// The same numbers as a convolution of the two loop series.
pub fn convolved_hilbert(n: usize) -> Vec<i64> {
    let ht = loop_space_betti(4, n);
    let h = loop_space_betti(3, n);
    let hp: Vec<i64> = (0..=n).map(|k| if k == 0 { 1 } else { 5 * h[k - 1] }).collect();
    (0..=n).map(|k| (0..=k).map(|i| ht[i] * hp[k - i]).sum()).collect()
}

/// Ranks recovered from n·[zⁿ] log H(z), an inversion independent of
/// [`ranks_from_series`]: each rₖ contributes k·rₖ·ε to every multiple
/// of k, with ε = (−1)^{j+1} for odd k at multiple j and 1 for even k.
pub fn ranks_by_log(h: &[i64]) -> Result<Vec<i64>> {
    if h.first() != Some(&1) {
        return Err(Error::NotPbw(0));
    }
    let n = h.len();
    let h: Vec<i128> = h.iter().map(|x| *x as i128).collect();
    let mut inv = vec![0i128; n];
    inv[0] = 1;
    for m in 1..n {
        inv[m] = -(1..=m).map(|k| h[k] * inv[m - k]).sum::<i128>();
    }
    let mut r = vec![0i64; n];
    for m in 1..n {
        let mlog: i128 = (1..=m).map(|k| k as i128 * h[k] * inv[m - k]).sum();
        let mut rest = mlog;
        for d in (1..m).filter(|d| m % d == 0) {
            let j = m / d;
            let eps = if d % 2 == 1 && j % 2 == 0 { -1 } else { 1 };
            rest -= d as i128 * r[d] as i128 * eps;
        }
        if rest % m as i128 != 0 {
            return Err(Error::NotPbw(m));
        }
        r[m] = (rest / m as i128) as i64;
    }
    Ok(r)
}
