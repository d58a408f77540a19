//! Inflation as cohomology-class arithmetic: Poincaré-dual additions,
//! negative-inflation bounds and exact verification of curve recipes.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::configurations::{catalog, config, validate};
use crate::error::{Error, Result};
use crate::homology::{can_coexist, cls, d_class, pairing, HomologyClass, SymplecticClass};
use crate::linalg::Echelon;
use crate::scalars::{fmt_q, q, qi, Chamber, LinForm, Sign, Q};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum StepKind {
    NonNegativeSelfInt,
    Negative(i64),
}

impl StepKind {
    pub fn of(curve: &HomologyClass) -> Self {
        let s = pairing(curve, curve);
        if s >= 0 {
            StepKind::NonNegativeSelfInt
        } else {
            StepKind::Negative(-s)
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct InflationStep {
    pub curve: HomologyClass,
    pub coefficient: LinForm,
    pub kind: StepKind,
}

impl InflationStep {
    pub fn new(curve: HomologyClass, coefficient: LinForm) -> Self {
        let kind = StepKind::of(&curve);
        InflationStep { curve, coefficient, kind }
    }

    pub fn numeric(curve: HomologyClass, t: Q) -> Self {
        Self::new(curve, LinForm::constant(t))
    }
}

fn basis() -> [HomologyClass; 5] {
    [HomologyClass::b(), HomologyClass::f(), HomologyClass::e(1), HomologyClass::e(2), HomologyClass::e(3)]
}

/// Values of PD(Z) on B, F, E1, E2, E3.
pub fn pd(z: &HomologyClass) -> [i64; 5] {
    basis().map(|x| pairing(z, &x))
}

/// [ω] + t·PD(Z), with the strict bound t < ω(Z)/m when Z² = −m.
pub fn inflate(w: &SymplecticClass, step: &InflationStep, ch: &Chamber) -> Result<SymplecticClass> {
    let t = &step.coefficient;
    if ch.sign(t) == Sign::Negative {
        return Err(Error::Bound(format!("negative coefficient {t} along {}", step.curve)));
    }
    if StepKind::of(&step.curve) != step.kind {
        return Err(Error::Invalid(format!("kind {:?} does not match {}", step.kind, step.curve)));
    }
    if let StepKind::Negative(m) = step.kind {
        let room = &w.area(&step.curve) - &t.scale_int(m);
        if !ch.positive(&room) {
            return Err(Error::Bound(format!(
                "t = {t} reaches area({})/{m} = ({})/{m}",
                step.curve,
                w.area(&step.curve)
            )));
        }
    }
    let d = pd(&step.curve);
    let mut out = w.clone();
    for i in 0..5 {
        out.0[i] += &t.scale_int(d[i]);
    }
    Ok(out)
}

/// Rescales so that ω(F) = 1.
pub fn normalize(w: &SymplecticClass, ch: &Chamber) -> Result<SymplecticClass> {
    let f = ch.eval(&w.0[1]);
    if !w.0[1].0[1..].iter().all(Zero::is_zero) {
        return Err(Error::Invalid(format!("ω(F) = {} is not a constant", w.0[1])));
    }
    if !f.is_positive() {
        return Err(Error::Invalid(format!("ω(F) = {} is not positive", fmt_q(&f))));
    }
    let inv = f.recip();
    Ok(SymplecticClass(w.0.clone().map(|x| x.scale(&inv))))
}

/// A numeric class (μ, 1, c1, c2, c3) from a sample (μ, c1, c2, c3).
pub fn class_at(sample: &[Q; 4]) -> SymplecticClass {
    SymplecticClass::numeric(sample[0].clone(), [sample[1].clone(), sample[2].clone(), sample[3].clone()])
}

fn values(w: &SymplecticClass) -> Result<[Q; 5]> {
    let mut out: [Q; 5] = Default::default();
    for (o, f) in out.iter_mut().zip(&w.0) {
        if !f.0[1..].iter().all(Zero::is_zero) {
            return Err(Error::Invalid(format!("non-numeric class value {f}")));
        }
        *o = f.0[0].clone();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RecipeSolution {
    pub curves: Vec<String>,
    /// Raw coefficients tᵢ: [start] + Σ tᵢ PD(Cᵢ) = scale·[target].
    #[serde(with = "crate::scalars::q_vec")]
    pub coefficients: Vec<Q>,
    #[serde(with = "crate::scalars::q_str")]
    pub scale: Q,
    /// Nonnegative curves keep tᵢ; negative curves report tᵢ/scale, the
    /// coefficient applied after normalizing.
    #[serde(with = "crate::scalars::q_vec")]
    pub normalized: Vec<Q>,
    /// For each negative curve, the bound area/m it must stay under (raw scale).
    pub bounds: Vec<Option<String>>,
}

/// Affine solution set x0 + span(null) of the system in the unknowns
/// (t₁..tₙ, s), or None when inconsistent.
fn solve_system(start: &[Q; 5], target: &[Q; 5], curves: &[HomologyClass], fixed_zero: &[bool]) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let n = curves.len();
    let ncols = n + 2;
    let mut ech: Echelon<Q> = Echelon::new((), ncols);
    let pds: Vec<[i64; 5]> = curves.iter().map(pd).collect();
    for x in 0..5 {
        let mut row: Vec<(usize, Q)> = Vec::new();
        for (i, d) in pds.iter().enumerate() {
            if d[x] != 0 && !fixed_zero[i] {
                row.push((i, qi(d[x])));
            }
        }
        if !target[x].is_zero() {
            row.push((n, -target[x].clone()));
        }
        if !start[x].is_zero() {
            row.push((n + 1, start[x].clone()));
        }
        ech.insert(&row);
    }
    for (i, z) in fixed_zero.iter().enumerate() {
        if *z {
            ech.insert(&[(i, qi(1))]);
        }
    }
    ech.rref();
    if ech.is_pivot(n + 1) {
        return None;
    }
    let mut x0 = vec![Q::zero(); n + 1];
    for p in ech.pivots() {
        let row = ech.pivot_row_of(p).unwrap();
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == n + 1) {
            x0[p] = -v.clone();
        }
    }
    let mut null = Vec::new();
    for f in (0..=n).filter(|c| !ech.is_pivot(*c)) {
        let mut v = vec![Q::zero(); n + 1];
        v[f] = qi(1);
        for p in ech.pivots() {
            let row = ech.pivot_row_of(p).unwrap();
            if let Some((_, x)) = row.iter().find(|(c, _)| *c == f) {
                v[p] = -x.clone();
            }
        }
        null.push(v);
    }
    Some((x0, null))
}

/// Constraints g(x) = a·x + b, each either > 0 or ≥ 0.
fn constraints(start: &[Q; 5], curves: &[HomologyClass]) -> Vec<(Vec<Q>, Q, bool)> {
    let n = curves.len();
    let mut out = Vec::new();
    for i in 0..n {
        let mut a = vec![Q::zero(); n + 1];
        a[i] = qi(1);
        out.push((a, Q::zero(), false));
    }
    let mut s = vec![Q::zero(); n + 1];
    s[n] = qi(1);
    out.push((s, Q::zero(), true));
    // Nonnegative curves first, then negatives in listed order; each negative
    // coefficient stays under the current area over m.
    let order = inflation_order(curves);
    for (pos, &i) in order.iter().enumerate() {
        if let StepKind::Negative(m) = StepKind::of(&curves[i]) {
            let z = &curves[i];
            let mut a = vec![Q::zero(); n + 1];
            let b = dot(start, &area_vector(z));
            for &j in &order[..pos] {
                a[j] = qi(pairing(&curves[j], z));
            }
            a[i] -= qi(m);
            out.push((a, b, true));
        }
    }
    out
}

fn inflation_order(curves: &[HomologyClass]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..curves.len()).collect();
    order.sort_by_key(|&i| matches!(StepKind::of(&curves[i]), StepKind::Negative(_)));
    order
}

/// Coordinates of ω(Z) against the basis values (ω(B), ω(F), ω(Ei)).
fn area_vector(z: &HomologyClass) -> [Q; 5] {
    [qi(z.p()), qi(z.q()), qi(-z.r(1)), qi(-z.r(2)), qi(-z.r(3))]
}

fn dot(a: &[Q; 5], b: &[Q; 5]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn eval_at(a: &[Q], b: &Q, x: &[Q]) -> Q {
    a.iter().zip(x).map(|(p, q)| p * q).sum::<Q>() + b
}

fn satisfied(cs: &[(Vec<Q>, Q, bool)], x: &[Q]) -> bool {
    cs.iter().all(|(a, b, strict)| {
        let v = eval_at(a, b, x);
        if *strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    })
}

/// A point of x0 + λ·d meeting every constraint, if any.
fn feasible_on_line(cs: &[(Vec<Q>, Q, bool)], x0: &[Q], d: &[Q]) -> Option<Vec<Q>> {
    let mut lo: Option<(Q, bool)> = None;
    let mut hi: Option<(Q, bool)> = None;
    for (a, b, strict) in cs {
        let c0 = eval_at(a, b, x0);
        let c1 = eval_at(a, &Q::zero(), d);
        if c1.is_zero() {
            if c0.is_negative() || (*strict && c0.is_zero()) {
                return None;
            }
            continue;
        }
        let root = -&c0 / &c1;
        if c1.is_positive() {
            if lo.as_ref().map_or(true, |(l, s)| root > *l || (root == *l && *strict && !s)) {
                lo = Some((root, *strict));
            }
        } else if hi.as_ref().map_or(true, |(h, s)| root < *h || (root == *h && *strict && !s)) {
            hi = Some((root, *strict));
        }
    }
    let lam = match (&lo, &hi) {
        (Some((l, ls)), Some((h, hs))) => {
            if l > h || (l == h && (*ls || *hs)) {
                return None;
            }
            (l + h) / qi(2)
        }
        (Some((l, _)), None) => l + qi(1),
        (None, Some((h, _))) => h - qi(1),
        (None, None) => Q::zero(),
    };
    let x: Vec<Q> = x0.iter().zip(d).map(|(p, v)| p + &lam * v).collect();
    satisfied(cs, &x).then_some(x)
}

/// Exact search for nonnegative coefficients, one per curve, so that the
/// normalized inflated start equals the target, with every negative-curve
/// bound strict.
pub fn verify_recipe(start: &SymplecticClass, target: &SymplecticClass, curves: &[HomologyClass]) -> Result<RecipeSolution> {
    let sv = values(start)?;
    let tv = values(target)?;
    let n = curves.len();
    let cs = constraints(&sv, curves);
    let mut consistent = false;
    // Fewer forced zeros first.
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let fixed: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let Some((x0, null)) = solve_system(&sv, &tv, curves, &fixed) else { continue };
        consistent = true;
        let found = match null.len() {
            0 => satisfied(&cs, &x0).then(|| x0.clone()),
            1 => feasible_on_line(&cs, &x0, &null[0]),
            _ => None,
        };
        if let Some(x) = found {
            return Ok(solution(&sv, curves, x));
        }
    }
    if !consistent {
        return Err(Error::Inconsistent(format!(
            "no inflation along {} reaches the target",
            curves.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Err(Error::Bound(format!(
        "every solution along {} violates a sign or bound",
        curves.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    )))
}

fn solution(sv: &[Q; 5], curves: &[HomologyClass], x: Vec<Q>) -> RecipeSolution {
    let n = curves.len();
    let scale = x[n].clone();
    let order = inflation_order(curves);
    let mut bounds = vec![None; n];
    let mut normalized = x[..n].to_vec();
    for (pos, &i) in order.iter().enumerate() {
        if let StepKind::Negative(m) = StepKind::of(&curves[i]) {
            let mut area = dot(sv, &area_vector(&curves[i]));
            for &j in &order[..pos] {
                area += &x[j] * qi(pairing(&curves[j], &curves[i]));
            }
            bounds[i] = Some(fmt_q(&(area / qi(m))));
            normalized[i] = &x[i] / &scale;
        }
    }
    RecipeSolution {
        curves: curves.iter().map(|c| c.to_string()).collect(),
        coefficients: x[..n].to_vec(),
        scale,
        normalized,
        bounds,
    }
}

/// Applies a solution step by step with [`inflate`] and [`normalize`],
/// checking it lands on the target.
pub fn replay(start: &SymplecticClass, target: &SymplecticClass, curves: &[HomologyClass], sol: &RecipeSolution) -> Result<bool> {
    let ch = Chamber::custom("replay", qi(1), q(1, 2), q(1, 3), q(1, 4));
    let mut w = start.clone();
    let order = inflation_order(curves);
    let (pos, neg): (Vec<usize>, Vec<usize>) =
        order.iter().partition(|&&i| StepKind::of(&curves[i]) == StepKind::NonNegativeSelfInt);
    for i in pos {
        w = inflate(&w, &InflationStep::numeric(curves[i].clone(), sol.coefficients[i].clone()), &ch)?;
    }
    w = normalize(&w, &ch)?;
    for i in neg {
        w = inflate(&w, &InflationStep::numeric(curves[i].clone(), sol.normalized[i].clone()), &ch)?;
    }
    Ok(values(&w)? == values(target)?)
}

/// The closed forms for the case inflating along B+F−E₂, B+F then E₁−E₃
/// (lowering c₁' to c₁): (e, b, a) with e along B+F, b along B+F−E₂.
pub fn closed_form_e1e3(c: [&Q; 3], c1_prime: &Q) -> (Q, Q, Q) {
    let [c1, c2, c3] = c;
    let one = Q::one();
    let e = (&one - c2) * (c1_prime - c1) / (c1 + c3);
    let b = c2 * &e / (&one - c2);
    let a = c3 * (&b + &e) / (&one + &b + &e);
    (e, b, a)
}

/// The closed forms for B+2F−E₁−E₂, B+F, B then E₁−E₂−E₃: (e, b, a) with e
/// along B+F and b along both B+2F−E₁−E₂ and B.
pub fn closed_form_e1e2e3(c: [&Q; 3], c1_prime: &Q) -> (Q, Q, Q) {
    let [c1, c2, c3] = c;
    let one = Q::one();
    let two = qi(2);
    let k = &one - &two * c2 + &two * c3;
    let e = &k * (c1_prime - c1) / (c1 - c2 + &two * c3);
    let b = (c2 - c3) * &e / &k;
    let a = c3 * (&two * &b + &e) / (&one + &two * &b + &e);
    (e, b, a)
}

/// Which capacity moves, and whether it goes up (the tables) or down (the
/// worked negative-inflation cases).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Direction {
    Up,
    Down,
}

/// A linear condition f > 0 (strict) or f ≥ 0 on the capacities.
#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub form: LinForm,
    pub strict: bool,
    pub label: &'static str,
}

impl Condition {
    fn new(form: &str, strict: bool, label: &'static str) -> Self {
        Condition { form: LinForm::parse(form).unwrap(), strict, label }
    }

    pub fn holds(&self, ch: &Chamber) -> bool {
        match ch.sign(&self.form) {
            Sign::Positive => true,
            Sign::Zero => !self.strict,
            Sign::Negative => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Recipe {
    /// 1, 2 or 3: the capacity that moves.
    pub step: usize,
    pub direction: Direction,
    pub configs: Vec<String>,
    pub condition: Option<Condition>,
    /// A condition the printed row leaves implicit, found by solving.
    pub side: Option<Condition>,
    /// The curves as printed; `curves` differs only for corrected rows.
    pub printed: Vec<HomologyClass>,
    pub curves: Vec<HomologyClass>,
    pub label: String,
}

impl Recipe {
    fn new(step: usize, direction: Direction, configs: Vec<String>, curves: Vec<HomologyClass>, label: String) -> Self {
        Recipe { step, direction, configs, condition: None, side: None, printed: curves.clone(), curves, label }
    }

    pub fn corrected(&self) -> bool {
        self.printed != self.curves
    }
}

/// Expands "1: 1-13; 2: 1,2,3" into configuration ids.
pub fn parse_config_list(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (fam, items) = part.split_once(':').ok_or_else(|| Error::Parse(format!("config list {part:?}")))?;
        let fam = fam.trim();
        for item in items.split(',').map(str::trim) {
            let num = |x: &str| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("config index {x:?}")));
            match item.split_once('-') {
                Some((a, b)) => {
                    for k in num(a)?..=num(b)? {
                        out.push(format!("{fam}.{k}"));
                    }
                }
                None => out.push(format!("{fam}.{}", num(item)?)),
            }
        }
    }
    Ok(out)
}

fn curves(list: &[&str]) -> Vec<HomologyClass> {
    list.iter().map(|s| cls(s)).collect()
}

type Row = (&'static str, Option<(&'static str, bool, &'static str)>, &'static [&'static str]);

const TABLE2: &[Row] = &[
    ("1: 1-13; 2: 1,2,3,6,7,9,10", None, &["B", "B+F-E1", "B+F-E2", "B+2F-E1-E2-E3"]),
    ("2: 4,5,8", None, &["B", "B+F-E1", "B+F-E2", "B+3F-E1-E2-E3"]),
    ("3: 1,2,6; 6: 1,2,7", None, &["B", "B+F-E1", "B+F-E3", "B+2F-E1-E2-E3"]),
    ("3: 3; 6: 3", None, &["B", "B+F-E1", "B+2F-E1-E2", "F-E1-E3"]),
    ("3: 4,8; 6: 4,6", None, &["B", "B+F-E1", "B+2F-E1-E2", "E1-E2-E3"]),
    ("3: 5,7; 6: 5", None, &["B", "B+F-E1", "B+2F-E1-E2", "B+3F-E1-E2-E3"]),
];

const TABLE3: &[Row] = &[
    ("1: 1-13; 2: 1-3,6,7,9,10", None, &["B", "B+F-E1", "B+F-E2", "B+2F-E1-E2-E3"]),
    ("2: 4,5,8", None, &["B", "B+F-E1", "B+F-E2", "B+3F-E1-E2-E3"]),
    ("3: 1,2,7; 6: 1,2,5,7", Some(("1-2c1", true, "2c1<1")), &["B", "B+F", "B+2F-E1-E2", "B+2F-E1-E2-E3"]),
    ("3: 1,2,7; 6: 1,2,5,7", Some(("2c1-1", false, "2c1>=1")), &["B", "B+F-E1", "B+2F-E1-E2", "B+2F-E1-E2-E3"]),
    ("3: 3,4,8; 6: 3,4,6", Some(("1-2c1-2c3", true, "2c1+2c3<1")), &["B", "B+F", "B+2F-E1-E2", "E1-E2-E3"]),
    ("3: 3,4,8; 6: 3,4,6", Some(("2c1+2c3-1", false, "2c1+2c3>=1")), &["B", "B+F-E1", "B+2F-E1-E2", "E1-E2-E3"]),
    ("3: 5,6", None, &["B", "B+F-E1", "B+3F-E1-E2-E3", "E1-E2"]),
];

const TABLE4: &[Row] = &[
    ("1: 1,4,7,8,10,11,13; 2: 1,2,10; 3: 1,2; 6: 1,2,7", None, &["B", "B+F-E1", "B+F-E3", "B+2F-E1-E2-E3"]),
    ("1: 2,3,9; 2: 6,9", Some(("1-2c1", true, "2c1<1")), &["B", "B+F-E2", "B+2F-E1-E2-E3", "E2-E3"]),
    ("1: 2,3,9; 2: 6,9", Some(("2c1-1", false, "2c1>=1")), &["B", "B+F-E1", "B+2F-E1-E2-E3", "E2-E3"]),
    ("1: 5,6,12; 2: 3,7", None, &["B", "B+F-E1", "B+2F-E1-E2-E3", "E1-E3"]),
    ("2: 4,8", Some(("1-c1-2c2", true, "c1+2c2<1")), &["B", "B+F-E1", "B+3F-E1-E2-E3", "E1-E3"]),
    ("2: 4,8", Some(("c1+2c2-1", false, "c1+2c2>=1")), &["B", "B+F-E1", "B+3F-E1-E2-E3", "B+2F-E1-E2"]),
    ("2: 5", None, &["B+F-E1", "B+F-E2", "E2-E3"]),
    ("3: 3,8; 6: 3,6", Some(("1-2c1-2c2", true, "2c1+2c2<1")), &["B", "B+F", "B+2F-E1-E3", "E1-E2-E3"]),
    ("3: 3,8; 6: 3,6", Some(("2c1+2c2-1", false, "2c1+2c2>=1")), &["B", "B+F-E1", "B+2F-E1-E3", "E1-E2-E3"]),
    ("3: 4,5,7; 6: 4,5", Some(("1-2c1", true, "2c1<1")), &["B", "B+F", "B+2F-E1-E2", "E2-E3"]),
    ("3: 4,5,7; 6: 4,5", Some(("2c1-1", false, "2c1>=1")), &["B", "B+F-E1", "B+2F-E1-E2", "E2-E3"]),
    ("3: 6", Some(("1-c1-2c2", true, "c1+2c2<1")), &["B", "B+F-E1", "B+3F-E1-E2-E3", "B+F-E3"]),
    ("3: 6", Some(("c1+2c2-1", false, "c1+2c2>=1")), &["B", "B+F-E1", "B+3F-E1-E2-E3", "B+2F-E1-E2"]),
];

fn build(step: usize, direction: Direction, rows: &[Row]) -> Vec<Recipe> {
    rows.iter()
        .map(|(cfg, cond, cv)| {
            let condition = cond.map(|(f, s, l)| Condition::new(f, s, l));
            let label = match &condition {
                Some(c) => format!("{cfg} [{}]", c.label),
                None => cfg.to_string(),
            };
            let mut r = Recipe::new(step, direction, parse_config_list(cfg).unwrap(), curves(cv), label);
            r.condition = condition;
            amend(&mut r, cfg);
            r
        })
        .collect()
}

/// Corrections and implicit conditions, keyed by (moving capacity, direction, row).
fn amend(r: &mut Recipe, cfg: &str) {
    match (r.step, r.direction, cfg) {
        // B+F−E3 cannot lift c₁ while c₃ < c₂ stays fixed; B+2F−E1−E2 can.
        (1, Direction::Up, "3: 1,2,6; 6: 1,2,7") => {
            r.curves = curves(&["B", "B+F-E1", "B+2F-E1-E2", "B+2F-E1-E2-E3"]);
        }
        (1, Direction::Up, "3: 5,7; 6: 5") => {
            r.side = Some(Condition::new("1-c1-c2-c3", true, "c1+c2+c3<1"));
        }
        (3, Direction::Up, "3: 4,5,7; 6: 4,5") => {
            r.side = Some(Condition::new("c1-c2-c3", true, "c1>c2+c3"));
        }
        (2, Direction::Down, _) if r.curves.len() == 3 => {
            r.printed = curves(&STEP2_PRINTED);
        }
        _ => {}
    }
}

/// Rows of the curve tables for raising c₁ (table 2), c₂ (3) or c₃ (4).
pub fn table(n: usize) -> Result<Vec<Recipe>> {
    match n {
        2 => Ok(build(1, Direction::Up, TABLE2)),
        3 => Ok(build(2, Direction::Up, TABLE3)),
        4 => Ok(build(3, Direction::Up, TABLE4)),
        _ => Err(Error::Unknown(format!("inflation table {n}"))),
    }
}

const STEP1_DOWN: &[Row] = &[
    ("1: 1-4,7-11,13; 2: 1,2,5,6,8-10", None, &["E1"]),
    ("1: 5,6,12; 2: 3,4,7", None, &["B+F-E2", "B+F", "E1-E3"]),
    ("3: 1,2; 6: 1,2", None, &["B+F-E3", "B+F", "E1-E2"]),
    ("3: 3,4,8; 6: 3,4,6", None, &["B+2F-E1-E2", "B+F", "B", "E1-E2-E3"]),
    ("3: 5-7; 6: 5,7", None, &["B+3F-E1-E2-E3", "B+F", "B", "E1-E2"]),
];

const STEP2_NEG_E2: &str = "1: 1,4-8,10-13; 2: 1-4,7,8,10; 3: 1,2,3,6,8; 6: 1,2,3,6,7";

/// The remaining-cases curve list for lowering c₂, as printed.
pub const STEP2_PRINTED: [&str; 3] = ["B+F+E1", "B+F", "E2-E3"];
/// The same list with the sign of E₁ corrected.
pub const STEP2_CORRECTED: [&str; 3] = ["B+F-E1", "B+F", "E2-E3"];

/// Recipes for lowering c₁, c₂ or c₃ (the negative-inflation direction).
pub fn worked_cases(step: usize) -> Result<Vec<Recipe>> {
    match step {
        1 => Ok(build(1, Direction::Down, STEP1_DOWN)),
        2 => {
            let neg = parse_config_list(STEP2_NEG_E2)?;
            let rest: Vec<String> = catalog()
                .into_iter()
                .map(|c| c.id)
                .filter(|id| matches!(id.split('.').next(), Some("1" | "2" | "3" | "6")) && !neg.contains(id))
                .collect();
            let label = format!("remaining: {}", rest.join(","));
            let mut remaining = Recipe::new(2, Direction::Down, rest, curves(&STEP2_CORRECTED), label);
            amend(&mut remaining, "");
            Ok(vec![Recipe::new(2, Direction::Down, neg, curves(&["E2"]), STEP2_NEG_E2.into()), remaining])
        }
        3 => {
            let all: Vec<String> = catalog().into_iter().map(|c| c.id).filter(|id| id.contains('.')).collect();
            Ok(vec![Recipe::new(3, Direction::Down, all, curves(&["E3"]), "all".into())])
        }
        _ => Err(Error::Unknown(format!("inflation step {step}"))),
    }
}

/// Sample capacities (μ = 1) covering both sides of every table condition.
pub fn sample_pool() -> Vec<Chamber> {
    let c = |name: &str, c1: Q, c2: Q, c3: Q| Chamber::custom(name, qi(1), c1, c2, c3);
    vec![
        Chamber::generic(),
        Chamber::e1neg(),
        c("small", q(1, 5), q(3, 20), q(1, 40)),
        c("small-generic", q(1, 5), q(3, 20), q(1, 10)),
        c("mid", q(2, 5), q(1, 5), q(1, 10)),
        c("large", q(11, 20), q(2, 5), q(3, 10)),
        c("large-e1neg", q(3, 5), q(1, 4), q(1, 10)),
    ]
}

pub const DELTA: (i64, i64) = (1, 100);

/// The start and target classes for a recipe at a sample.
pub fn endpoints(r: &Recipe, ch: &Chamber) -> (SymplecticClass, SymplecticClass) {
    let s = ch.sample.clone();
    let mut t = s.clone();
    let d = q(DELTA.0, DELTA.1);
    match r.direction {
        Direction::Up => t[r.step] += &d,
        Direction::Down => t[r.step] -= &d,
    }
    (class_at(&s), class_at(&t))
}

/// Samples where the printed condition holds, both endpoints keep the
/// capacity ordering, and at least one listed configuration validates.
pub fn matches(r: &Recipe, ch: &Chamber) -> bool {
    if ch.inequalities.is_empty() || !r.condition.as_ref().map_or(true, |c| c.holds(ch)) {
        return false;
    }
    let (_, t) = endpoints(r, ch);
    let tv = values(&t).unwrap();
    let tch = Chamber::custom("target", tv[0].clone(), tv[2].clone(), tv[3].clone(), tv[4].clone());
    if tch.inequalities.is_empty() {
        return false;
    }
    r.configs.iter().any(|id| config(id).map(|c| validate(&c, ch).passed()).unwrap_or(false))
}

/// [`matches`] plus the implicit side condition.
pub fn applicable(r: &Recipe, ch: &Chamber) -> bool {
    matches(r, ch) && r.side.as_ref().map_or(true, |c| c.holds(ch))
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub label: String,
    pub step: usize,
    pub direction: Direction,
    pub curves: Vec<String>,
    pub samples: Vec<SampleCheck>,
    /// Matching samples cut out by the side condition; each should fail.
    pub outside: Vec<SampleCheck>,
    /// The printed curves at the applicable samples, for corrected rows.
    pub printed: Vec<SampleCheck>,
    pub conflicts: Vec<Conflict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleCheck {
    pub chamber: String,
    pub solution: Option<RecipeSolution>,
    pub error: Option<String>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        !self.samples.is_empty()
            && self.samples.iter().all(|s| s.solution.is_some())
            && self.outside.iter().all(|s| s.solution.is_none())
    }
}

/// A curve of negative pairing with the stratum class Dᵢ of a listed configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub config: String,
    pub stratum: String,
    pub curve: String,
}

/// (i, j) with Dᵢ = c, for classes B + kF − (a subset of the Eᵢ).
pub fn d_index(c: &HomologyClass) -> Option<(i64, Option<usize>)> {
    if c.p() != 1 || (1..=3).any(|i| !(0..=1).contains(&c.r(i))) {
        return None;
    }
    let s: i64 = (1..=3).map(|i| c.r(i)).sum();
    let j = match s {
        1 => (1..=3).find(|&i| c.r(i) == 1),
        2 => (1..=3).find(|&i| c.r(i) == 0),
        _ => None,
    };
    let i = 4 * c.q() - s;
    (d_class(i, j).ok()? == *c).then_some((i, j))
}

/// The coexistence screen: every p = 0 curve of the recipe that is not
/// already in a configuration must pair nonnegatively with its most negative
/// p = 1 classes.
pub fn coexistence_conflicts(r: &Recipe) -> Vec<Conflict> {
    let mut out = Vec::new();
    for id in &r.configs {
        let Ok(c) = config(id) else { continue };
        let strata: Vec<&HomologyClass> = c.classes.iter().filter(|x| x.p() == 1).collect();
        let Some(min) = strata.iter().map(|x| pairing(x, x)).min() else { continue };
        for d in strata.iter().filter(|x| pairing(x, x) == min) {
            let Some((i, j)) = d_index(d) else { continue };
            for curve in r.curves.iter().filter(|x| x.p() == 0 && !c.classes.contains(x)) {
                if !can_coexist(i, j, curve).unwrap_or(true) {
                    out.push(Conflict { config: id.clone(), stratum: d.to_string(), curve: curve.to_string() });
                }
            }
        }
    }
    out
}

fn sample_check(r: &Recipe, ch: &Chamber, cv: &[HomologyClass]) -> SampleCheck {
    let (s, t) = endpoints(r, ch);
    match verify_recipe(&s, &t, cv) {
        Ok(sol) => SampleCheck { chamber: ch.name.clone(), solution: Some(sol), error: None },
        Err(e) => SampleCheck { chamber: ch.name.clone(), solution: None, error: Some(e.to_string()) },
    }
}

pub fn check_row(r: &Recipe, pool: &[Chamber]) -> RowCheck {
    let inside: Vec<&Chamber> = pool.iter().filter(|ch| applicable(r, ch)).collect();
    let outside = pool
        .iter()
        .filter(|ch| matches(r, ch) && !applicable(r, ch))
        .map(|ch| sample_check(r, ch, &r.curves))
        .collect();
    let printed = if r.corrected() {
        inside.iter().map(|ch| sample_check(r, ch, &r.printed)).collect()
    } else {
        Vec::new()
    };
    RowCheck {
        label: r.label.clone(),
        step: r.step,
        direction: r.direction,
        curves: r.curves.iter().map(|c| c.to_string()).collect(),
        samples: inside.iter().map(|ch| sample_check(r, ch, &r.curves)).collect(),
        outside,
        printed,
        conflicts: coexistence_conflicts(r),
    }
}

/// Checks every row of a table at the pool samples that match it, or only at
/// `only` when given.
pub fn check_table(n: usize, only: Option<&Chamber>) -> Result<Vec<RowCheck>> {
    use rayon::prelude::*;
    let rows = table(n)?;
    let pool = match only {
        Some(ch) => vec![ch.clone()],
        None => sample_pool(),
    };
    Ok(rows.par_iter().map(|r| check_row(r, &pool)).collect())
}

pub fn check_worked(step: usize, only: Option<&Chamber>) -> Result<Vec<RowCheck>> {
    let pool = match only {
        Some(ch) => vec![ch.clone()],
        None => sample_pool(),
    };
    Ok(worked_cases(step)?.iter().map(|r| check_row(r, &pool)).collect())
}
