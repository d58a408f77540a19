//! Linear relations between circle actions found by matching decorated
//! graphs, the rank-9 quotient, and degree-2 bracket relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::karshon::{named_graph, project, GraphKey, NAMED_GRAPHS};
use crate::linalg::{Echelon, SparseVec};
use crate::polytope::{appendix_index, catalog, DelzantPolytope, APPENDIX_CHOPS, ROMAN};
use crate::scalars::{fmt_q, qi, Q};

pub const GENERATORS: [&str; 9] = ["x0", "x1", "x2", "x4", "y0", "y2", "y3", "y4", "z"];

/// The auxiliary action housing y := y_{1,1,1}.
pub const Y_FLOWER: &str = "y_{1,1,1}";

/// Integer relation Σ cᵢ·sᵢ = 0, gcd-reduced, first coefficient (in symbol
/// order) positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct LinearRelation(pub BTreeMap<String, i64>);

impl LinearRelation {
    pub fn new(terms: impl IntoIterator<Item = (String, i64)>) -> Option<Self> {
        let mut m: BTreeMap<String, i64> = BTreeMap::new();
        for (s, c) in terms {
            *m.entry(s).or_default() += c;
        }
        m.retain(|_, c| *c != 0);
        let g = m.values().fold(0i64, |g, c| num_integer::gcd(g, *c));
        if g == 0 {
            return None;
        }
        let sign = if *m.values().next().unwrap() < 0 { -1 } else { 1 };
        for c in m.values_mut() {
            *c = *c / g * sign;
        }
        Some(LinearRelation(m))
    }

    /// Parses "lhs = rhs" or a bare expression set to zero.
    pub fn parse(s: &str) -> Result<Self> {
        let terms = match s.split_once('=') {
            Some((l, r)) => {
                let mut t = parse_linear(l)?;
                t.extend(parse_linear(r)?.into_iter().map(|(s, c)| (s, -c)));
                t
            }
            None => parse_linear(s)?,
        };
        Self::new(terms).ok_or_else(|| Error::Parse(format!("trivial relation {s}")))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    /// Replaces named symbols (x0, y7, …) by their representative actions.
    pub fn resolve(&self) -> Result<Self> {
        let mut t = Vec::new();
        for (s, c) in &self.0 {
            t.push((representative(s)?, *c));
        }
        Self::new(t).ok_or_else(|| Error::Invalid(format!("{self} resolves to zero")))
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0.iter().map(|(s, c)| (s.as_str(), qi(*c))))?;
        write!(f, " = 0")
    }
}

fn write_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (&'a str, Q)>) -> fmt::Result {
    let mut first = true;
    for (s, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        let coef = if a.is_one() { String::new() } else { fmt_q(&a) };
        match (first, neg) {
            (true, true) => write!(f, "-{coef}{s}")?,
            (true, false) => write!(f, "{coef}{s}")?,
            (false, true) => write!(f, " - {coef}{s}")?,
            (false, false) => write!(f, " + {coef}{s}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn split_terms(s: &str) -> Vec<(i64, String)> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut sign = 1;
    for ch in s.chars() {
        match ch {
            '{' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            '}' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

fn split_coef(t: &str) -> (i64, &str) {
    let digits = t.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        (1, t)
    } else {
        (t[..digits].parse().unwrap(), t[digits..].trim_start_matches('*'))
    }
}

/// Parses "x0 - 2x_{1,3} + z" into (symbol, coefficient) terms.
pub fn parse_linear(s: &str) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    for (sign, t) in split_terms(s) {
        if t == "0" {
            continue;
        }
        let (c, sym) = split_coef(&t);
        if sym.is_empty() || !(sym.starts_with('x') || sym.starts_with('y') || sym == "z") {
            return Err(Error::Parse(format!("bad term {t:?}")));
        }
        out.push((sym.to_string(), sign * c));
    }
    Ok(out)
}

/// x-action symbol of a catalog polytope ("T1,2" → x_{1,2}, "P9(v)" →
/// x_{2,2,5}); the y-symbol swaps the letter.
pub fn symbol_stem(poly: &str) -> Result<String> {
    let bad = || Error::Unknown(format!("polytope {poly}"));
    if let Some(rest) = poly.strip_prefix('T') {
        if rest.contains(',') {
            return Ok(format!("{{{rest}}}"));
        }
    }
    if let Some(rest) = poly.strip_prefix('P') {
        let (n, r) = rest.split_once('(').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let r = r.strip_suffix(')').ok_or_else(bad)?;
        let j = ROMAN.iter().position(|x| *x == r).ok_or_else(bad)? + 1;
        let (a, b) = appendix_index(n).ok_or_else(bad)?;
        return Ok(format!("{{{a},{b},{j}}}"));
    }
    Err(bad())
}

/// Maps a named action (x0..x11, y0..y11) to its first drawn source;
/// other symbols map to themselves.
pub fn representative(s: &str) -> Result<String> {
    if NAMED_GRAPHS.contains(&s) {
        let (_, members) = named_graph(s)?;
        let (i, j) = members[0];
        return Ok(format!("{}_{{{i},{j}}}", &s[..1]));
    }
    Ok(s.to_string())
}

/// The named action whose graph is drawn for x_{i,j} or y_{i,j}.
pub fn name_of(sym: &str) -> Option<&'static str> {
    for n in NAMED_GRAPHS {
        if !sym.starts_with(&n[..1]) {
            continue;
        }
        let (_, members) = named_graph(n).ok()?;
        if members.iter().any(|(i, j)| sym == format!("{}_{{{i},{j}}}", &n[..1])) {
            return Some(n);
        }
    }
    None
}

pub fn t0_sources() -> Result<Vec<(String, DelzantPolytope)>> {
    let mut v = Vec::new();
    for i in 1..=5 {
        for j in 1..=6 {
            let n = format!("T{i},{j}");
            v.push((n.clone(), catalog(&n)?));
        }
    }
    Ok(v)
}

pub fn appendix_sources() -> Result<Vec<(String, DelzantPolytope)>> {
    APPENDIX_CHOPS
        .iter()
        .map(|(n, j)| {
            let name = format!("P{n}({})", ROMAN[j - 1]);
            catalog(&name).map(|p| (name, p))
        })
        .collect()
}

/// Named polytope sets accepted by the CLI.
pub fn sources(set: &str) -> Result<Vec<(String, DelzantPolytope)>> {
    match set {
        "t0-family" => t0_sources(),
        "appendix" => appendix_sources(),
        "all" => {
            let mut v = t0_sources()?;
            v.extend(appendix_sources()?);
            Ok(v)
        }
        other => Err(Error::Unknown(format!("polytope set {other}"))),
    }
}

/// Primitive functionals with entries bounded by `bound`, both signs.
pub fn functionals(bound: i64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if num_integer::gcd(a, b) == 1 {
                v.push((a, b));
            }
        }
    }
    v
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Projection {
    pub polytope: String,
    pub functional: (i64, i64),
}

impl Projection {
    /// a·x_P + b·y_P.
    pub fn action(&self) -> Result<Vec<(String, i64)>> {
        let stem = symbol_stem(&self.polytope)?;
        let (a, b) = self.functional;
        Ok(vec![(format!("x_{stem}"), a), (format!("y_{stem}"), b)])
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{})", self.polytope, self.functional.0, self.functional.1)
    }
}

/// Projections sharing one graph up to translation.
pub fn graph_groups(src: &[(String, DelzantPolytope)], bound: i64) -> Result<Vec<(GraphKey, Vec<Projection>)>> {
    let xis = functionals(bound);
    let jobs: Vec<(usize, (i64, i64))> = (0..src.len()).flat_map(|i| xis.iter().map(move |x| (i, *x))).collect();
    let keyed: Vec<(GraphKey, Projection)> = jobs
        .par_iter()
        .map(|(i, xi)| {
            let g = project(&src[*i].1, *xi)?;
            Ok((g.translation_key(), Projection { polytope: src[*i].0.clone(), functional: *xi }))
        })
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<GraphKey, Vec<Projection>> = BTreeMap::new();
    for (k, p) in keyed {
        groups.entry(k).or_default().push(p);
    }
    Ok(groups.into_iter().filter(|(_, v)| v.len() >= 2).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Harvested {
    pub relation: LinearRelation,
    pub from: (Projection, Projection),
}

/// Pairwise relations from every graph collision, deduplicated.
pub fn harvest_linear(src: &[(String, DelzantPolytope)], combo_bound: i64) -> Result<Vec<Harvested>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (_, group) in graph_groups(src, combo_bound)? {
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let mut t = group[a].action()?;
                t.extend(group[b].action()?.into_iter().map(|(s, c)| (s, -c)));
                if let Some(r) = LinearRelation::new(t) {
                    if seen.insert(r.clone()) {
                        out.push(Harvested { relation: r, from: (group[a].clone(), group[b].clone()) });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn z_definition() -> LinearRelation {
    LinearRelation::parse("z = y8 - x4").unwrap().resolve().unwrap()
}

/// Relations of the form type-0 (1)–(16).
pub const TYPE0: [&str; 16] = [
    "y2 - x1 = y1 - x2",
    "y0 - x3 = y3 - x0",
    "y0 - x5 = y3 - x6",
    "y1 + x6 = y2 + x7",
    "y8 - x4 = y4 - x8",
    "y10 - x4 = y6 - x8",
    "y6 - x9 = y9 - x6",
    "y8 - x6 = y4 - x10",
    "y7 + x2 = y6 + x1",
    "y6 - x3 = y5 - x0",
    "y10 - x5 = y11 - x7",
    "y11 - 2x7 = y9 - 2x6",
    "x9 - 2y6 = x11 - 2y7",
    "y7 - x11 = y5 - x10",
    "y11 - x7 = y5 - x10",
    "y10 - x5 = y7 - x11",
];

pub const XY_RELATIONS: [&str; 2] = ["x0 + x4 = x2 + x6", "y0 + y4 = y2 + y6"];

pub const S_RELATIONS: [&str; 8] = [
    "x_{2,2,5} = x_{2,3,5}",
    "x_{2,2,6} = x_{2,3,6}",
    "y_{2,2,5} = x_{1,5} + y_{1,5}",
    "y_{2,2,6} = x_{1,4} + y_{1,4}",
    "y_{2,3,5} = x_{3,3} + y_{3,3}",
    "y_{2,3,6} = x_{3,2} + y_{3,2}",
    "x_{2,2,5} + y_{2,2,5} = x_{2,2,6} + y_{2,2,6}",
    "x_{2,3,5} + y_{2,3,5} = x_{2,3,6} + y_{2,3,6}",
];

/// (r1)–(r24) as listed; (r9) repeats (r8) and (r16) repeats (r4).
pub const R_RELATIONS: [&str; 24] = [
    "x_{1,1,1} = y_{1,5} - x_{1,5}",
    "x_{1,1,3} = y_{1,4} - x_{1,4}",
    "x_{1,2,1} = y_{2,3} - x_{2,3}",
    "x_{1,2,3} = y_{2,2} - x_{2,2}",
    "x_{2,1,4} + y_{2,1,4} = 2x_{1,1,1} + y_{1,1,1}",
    "x_{2,1,6} + y_{2,1,6} = 2x_{1,1,3} + y_{1,1,3}",
    "x_{2,2,4} + y_{2,2,4} = 2x_{1,2,1} + y_{1,2,1}",
    "x_{2,2,6} + y_{2,2,6} = 2x_{1,2,3} + y_{1,2,3}",
    "x_{2,2,6} + y_{2,2,6} = 2x_{1,2,3} + y_{1,2,3}",
    "x_{2,1,3} - y_{2,1,3} = x_{2,2,1} - y_{2,2,1}",
    "x_{2,1,4} - y_{2,1,4} = x_{2,2,4} - y_{2,2,4}",
    "x_{2,5,1} - y_{2,5,1} = x_{2,5,2} - y_{2,5,2}",
    "y_{2,1,3} = x_{2,1} + y_{2,1}",
    "y_{2,1,4} = x_{2,4} + y_{2,4}",
    "y_{2,1,6} = x_{2,2} + y_{2,2}",
    "x_{1,2,3} = y_{2,2} - x_{2,2}",
    "y_{2,2,1} = x_{1,1} + y_{1,1}",
    "y_{2,2,4} = x_{1,6} + y_{1,6}",
    "y_{2,2,6} = x_{1,4} + y_{1,4}",
    "y_{2,5,1} = x_{5,6} + y_{5,6}",
    "y_{2,5,2} = x_{5,1} + y_{5,1}",
    "x_{2,1,6} = x_{2,5,1}",
    "x_{2,1,3} = x_{2,5,2}",
    "x_{2,2,1} = x_{2,2,6}",
];

/// The second equality of (r23).
pub const R23_SECOND: &str = "x_{2,1,4} = x_{2,5,2}";

/// Expressions of the non-generator named actions in the generators.
pub const GENERATOR_EXPRESSIONS: [(&str, &str); 16] = [
    ("x3", "x0 + y0 - y3"),
    ("x5", "x0 - x2 + x4 + y0 - y3"),
    ("x6", "x0 - x2 + x4"),
    ("x7", "x0 - x1 + x4"),
    ("x8", "y4 - z"),
    ("x9", "x0 - x1 + y0 - y3 + y4 - z"),
    ("x10", "x0 - x2 + y4 - z"),
    ("x11", "x0 + x1 - 2x2 + y0 - y3 + y4 - z"),
    ("y1", "-x1 + x2 + y2"),
    ("y5", "-y2 + y3 + y4"),
    ("y6", "y0 - y2 + y4"),
    ("y7", "x1 - x2 + y0 - y2 + y4"),
    ("y8", "x4 + z"),
    ("y9", "x1 - x2 + x4 - y2 + y3 + z"),
    ("y10", "x4 + y0 - y2 + z"),
    ("y11", "-x1 + x2 + x4 - y2 + y3 + z"),
];

fn sparse(rel: &LinearRelation, col: &HashMap<String, usize>) -> Result<SparseVec<Q>> {
    let mut v: Vec<(usize, Q)> = Vec::new();
    for (s, c) in &rel.0 {
        let i = *col.get(s).ok_or_else(|| Error::Unknown(format!("symbol {s}")))?;
        v.push((i, qi(*c)));
    }
    v.sort_by_key(|e| e.0);
    Ok(v)
}

/// Row space of a set of relations over a fixed symbol list.
pub struct RelationSpan {
    pub symbols: Vec<String>,
    col: HashMap<String, usize>,
    ech: Echelon<Q>,
}

impl RelationSpan {
    pub fn new(symbols: Vec<String>, rels: &[LinearRelation]) -> Result<Self> {
        let col: HashMap<String, usize> = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let vs: Vec<SparseVec<Q>> = rels.iter().map(|r| sparse(r, &col)).collect::<Result<_>>()?;
        let mut ech = Echelon::new((), symbols.len());
        ech.insert_all(&vs);
        ech.rref();
        Ok(RelationSpan { symbols, col, ech })
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn contains(&self, r: &LinearRelation) -> bool {
        match sparse(r, &self.col) {
            Ok(v) => self.ech.contains(&v),
            Err(_) => false,
        }
    }

    /// Expression of every column outside `dropped` in the free columns
    /// outside `dropped`, valid on the subspace spanned by those symbols.
    fn expressions(&self, dropped: usize) -> (Vec<String>, BTreeMap<String, Vec<Q>>) {
        let free: Vec<usize> = (dropped..self.symbols.len()).filter(|c| !self.ech.is_pivot(*c)).collect();
        let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut expr = BTreeMap::new();
        for c in dropped..self.symbols.len() {
            let mut v = vec![Q::zero(); free.len()];
            for (k, x) in self.ech.normal_form_of_col(c) {
                v[pos[&k]] = x;
            }
            expr.insert(self.symbols[c].clone(), v);
        }
        (free.iter().map(|c| self.symbols[*c].clone()).collect(), expr)
    }
}

fn symbols_of(rels: &[LinearRelation]) -> BTreeSet<String> {
    rels.iter().flat_map(|r| r.symbols().cloned()).collect()
}

/// The quotient of a symbol space by relations, expressed in a basis of
/// free symbols.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub basis: Vec<String>,
    pub expressions: BTreeMap<String, Vec<Q>>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a symbol, resolving named actions.
    pub fn expr(&self, s: &str) -> Result<Vec<Q>> {
        let r = representative(s)?;
        self.expressions.get(&r).cloned().ok_or_else(|| Error::Unknown(format!("symbol {s}")))
    }

    pub fn expr_of(&self, terms: &[(String, i64)]) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); self.dim()];
        for (s, c) in terms {
            for (a, b) in v.iter_mut().zip(self.expr(s)?) {
                *a += b * qi(*c);
            }
        }
        Ok(v)
    }

    pub fn display_expr(&self, v: &[Q]) -> String {
        struct D<'a>(&'a [String], &'a [Q]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_terms(f, self.0.iter().map(|s| s.as_str()).zip(self.1.iter().cloned()))
            }
        }
        let names: Vec<String> = self.basis.iter().map(|b| display_name(b)).collect();
        D(&names, v).to_string()
    }
}

/// Short name of a representative symbol (x_{1,1} → x0).
pub fn display_name(s: &str) -> String {
    for n in NAMED_GRAPHS {
        if representative(n).ok().as_deref() == Some(s) {
            return n.to_string();
        }
    }
    s.to_string()
}

fn is_appendix_symbol(s: &str) -> bool {
    s.matches(',').count() == 2
}

/// Orders symbols as dropped | others | preferred, with preferred last so
/// they end up free after elimination.
fn ordered_symbols(all: &BTreeSet<String>, drop: impl Fn(&str) -> bool, preferred: &[String]) -> (Vec<String>, usize) {
    let mut first: Vec<String> = all.iter().filter(|s| drop(s) && !preferred.contains(s)).cloned().collect();
    let dropped = first.len();
    first.extend(all.iter().filter(|s| !drop(s) && !preferred.contains(s)).cloned());
    first.extend(preferred.iter().cloned());
    (first, dropped)
}

pub fn generator_symbols() -> Vec<String> {
    GENERATORS.iter().map(|g| representative(g).unwrap()).collect()
}

fn mu1_quotient_of(rels: &[LinearRelation]) -> Result<Quotient> {
    let mut all = symbols_of(rels);
    all.extend(generator_symbols());
    let (syms, dropped) = ordered_symbols(&all, is_appendix_symbol, &generator_symbols());
    let span = RelationSpan::new(syms, rels)?;
    let (basis, expressions) = span.expressions(dropped);
    Ok(Quotient { basis, expressions })
}

/// Relations pinned on the named actions that every μ = 1 quotient needs.
pub fn base_relations() -> Vec<LinearRelation> {
    let mut v = vec![z_definition()];
    v.extend(XY_RELATIONS.iter().map(|s| LinearRelation::parse(s).unwrap().resolve().unwrap()));
    v
}

/// The μ = 1 quotient (appendix symbols eliminated), in the nine
/// generators.
pub fn quotient_basis(harvest: &[LinearRelation]) -> Result<Quotient> {
    let mut rels = base_relations();
    rels.extend(harvest.iter().cloned());
    let q = mu1_quotient_of(&rels)?;
    let gens = generator_symbols();
    if q.dim() < 9 {
        let offending = first_collapse(&rels)?;
        return Err(Error::Inconsistent(format!("quotient has dimension {} < 9; first collapsing relation {offending}", q.dim())));
    }
    if q.basis != gens {
        return Err(Error::Inconsistent(format!(
            "free symbols {:?} differ from the generators",
            q.basis.iter().map(|b| display_name(b)).collect::<Vec<_>>()
        )));
    }
    Ok(q)
}

fn first_collapse(rels: &[LinearRelation]) -> Result<LinearRelation> {
    let (mut lo, mut hi) = (0, rels.len());
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if mu1_quotient_of(&rels[..mid])?.dim() < 9 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(rels[hi - 1].clone())
}

/// Quotient of the full symbol space (appendix actions kept), with y_{1,1,1}
/// and the generators preferred as free symbols.
pub fn extended_quotient(harvest: &[LinearRelation]) -> Result<Quotient> {
    let mut rels = base_relations();
    rels.extend(harvest.iter().cloned());
    let mut all = symbols_of(&rels);
    let mut pref = vec![Y_FLOWER.to_string()];
    pref.extend(generator_symbols());
    all.extend(pref.iter().cloned());
    let (syms, _) = ordered_symbols(&all, |_| false, &pref);
    let span = RelationSpan::new(syms, &rels)?;
    let (basis, expressions) = span.expressions(0);
    Ok(Quotient { basis, expressions })
}

/// Checks each generator expression against the quotient.
pub fn check_generator_expressions(q: &Quotient) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    for (s, e) in GENERATOR_EXPRESSIONS {
        let want = q.expr_of(&parse_linear(e)?.into_iter().map(|(s, c)| (s, c)).collect::<Vec<_>>())?;
        out.push((s.to_string(), q.expr(s)? == want));
    }
    Ok(out)
}

/// Replays the elimination producing x0 + x4 = x2 + x6 from (S1)–(S8) and
/// two type-0 relations; the y-relation is its image under the B↔F swap.
pub fn derive_xy_relations(harvest: &[LinearRelation]) -> Result<[LinearRelation; 2]> {
    let span = RelationSpan::new(symbols_of(harvest).into_iter().collect(), harvest)?;
    let s: Vec<LinearRelation> = S_RELATIONS.iter().map(|r| LinearRelation::parse(r).unwrap()).collect();
    for (i, r) in s.iter().enumerate() {
        if !span.contains(r) {
            return Err(Error::Inconsistent(format!("(S{}) {r} is not among the harvested relations", i + 1)));
        }
    }
    let v = |i: usize| lhs_minus_rhs(S_RELATIONS[i]);
    // S8 + S1 - S2, then - S7, then + S3 - S4 - S5 + S6
    let mut acc = combine(&[(v(7), 1), (v(0), 1), (v(1), -1)]);
    acc = combine(&[(acc, 1), (v(6), -1)]);
    acc = combine(&[(acc, 1), (v(2), 1), (v(3), -1), (v(4), -1), (v(5), 1)]);
    // now x_{1,4}+y_{1,4}+x_{3,3}+y_{3,3} - x_{1,5}-y_{1,5}-x_{3,2}-y_{3,2}; rename
    let mut named = BTreeMap::new();
    for (k, c) in acc {
        let n = name_of(&k).ok_or_else(|| Error::Inconsistent(format!("{k} is not a named action")))?;
        *named.entry(n.to_string()).or_insert(0) += c;
    }
    let t = |i: usize| lhs_minus_rhs(TYPE0[i]);
    let x = combine(&[(named, 1), (t(1), -1), (t(2), 1)]);
    let x = LinearRelation::new(x).ok_or_else(|| Error::Inconsistent("replay cancelled out".into()))?;
    let y = swap_named(&x)?;
    Ok([x, y])
}

fn lhs_minus_rhs(s: &str) -> BTreeMap<String, i64> {
    let (l, r) = s.split_once('=').unwrap();
    let mut m = BTreeMap::new();
    for (k, c) in parse_linear(l).unwrap() {
        *m.entry(k).or_insert(0) += c;
    }
    for (k, c) in parse_linear(r).unwrap() {
        *m.entry(k).or_insert(0) -= c;
    }
    m
}

fn combine(parts: &[(BTreeMap<String, i64>, i64)]) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    for (v, k) in parts {
        for (s, c) in v {
            *m.entry(s.clone()).or_insert(0) += c * k;
        }
    }
    m.retain(|_, c| *c != 0);
    m
}

/// The B↔F swap on named actions: σ(s) = ±s' where the graph of s with
/// μ and 1 exchanged equals the graph of s' (sign − when only its flip does).
pub fn swap_symmetry() -> Result<BTreeMap<String, (String, i64)>> {
    let mut keys = Vec::new();
    for n in NAMED_GRAPHS {
        let (g, _) = named_graph(n)?;
        keys.push((n, g.translation_key(), g.flip().translation_key()));
    }
    let mut out = BTreeMap::new();
    for n in NAMED_GRAPHS {
        let (g, _) = named_graph(n)?;
        let k = g.swap_mu_one().translation_key();
        let hit = keys.iter().find_map(|(m, a, b)| {
            if *a == k {
                Some((m.to_string(), 1))
            } else if *b == k {
                Some((m.to_string(), -1))
            } else {
                None
            }
        });
        let hit = hit.ok_or_else(|| Error::Inconsistent(format!("no swapped partner for {n}")))?;
        out.insert(n.to_string(), hit);
    }
    Ok(out)
}

fn swap_named(r: &LinearRelation) -> Result<LinearRelation> {
    let s = swap_symmetry()?;
    let mut t = Vec::new();
    for (k, c) in &r.0 {
        let (m, e) = s.get(k).ok_or_else(|| Error::Unknown(format!("symbol {k}")))?;
        t.push((m.clone(), c * e));
    }
    LinearRelation::new(t).ok_or_else(|| Error::Inconsistent("swap cancelled out".into()))
}

/// The swap as a matrix on generator coordinates (column g = σ(g)).
pub fn swap_matrix(q: &Quotient) -> Result<Vec<Vec<Q>>> {
    let s = swap_symmetry()?;
    let mut cols = Vec::new();
    for g in GENERATORS {
        let img = if g == "z" {
            // z = y8 - x4
            let (a, ea) = &s["y8"];
            let (b, eb) = &s["x4"];
            vec![(a.clone(), *ea), (b.clone(), -eb)]
        } else {
            let (a, e) = &s[g];
            vec![(a.clone(), *e)]
        };
        cols.push(q.expr_of(&img)?);
    }
    Ok(cols)
}

/// Vector in the symmetric square of an n-dimensional space, over pairs
/// i ≤ j in lexicographic order.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Sym2Relation(#[serde(with = "crate::scalars::q_vec")] pub Vec<Q>);

pub fn sym2_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

pub fn pair_of(n: usize, mut k: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i;
        if k < row {
            return (i, i + k);
        }
        k -= row;
    }
    panic!("pair index out of range")
}

/// Bilinear symmetric expansion of [a, b].
pub fn samelson_expand(a: &[Q], b: &[Q]) -> Sym2Relation {
    let n = a.len();
    let mut v = vec![Q::zero(); sym2_dim(n)];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            v[pair_index(n, i, j)] += &a[i] * &b[j];
        }
    }
    Sym2Relation(v)
}

impl Sym2Relation {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    fn sparse(&self) -> SparseVec<Q> {
        self.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
    }

    /// Image under a linear map given by columns.
    pub fn map(&self, cols: &[Vec<Q>]) -> Sym2Relation {
        let n = cols.len();
        let mut out = vec![Q::zero(); sym2_dim(n)];
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = pair_of(n, k);
            let e = samelson_expand(&cols[i], &cols[j]);
            for (o, x) in out.iter_mut().zip(e.0) {
                *o += c * x;
            }
        }
        Sym2Relation(out)
    }

    pub fn display(&self, names: &[&str]) -> String {
        let n = names.len();
        let terms: Vec<(String, Q)> = self
            .0
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let (i, j) = pair_of(n, k);
                (format!("[{},{}]", names[i], names[j]), c.clone())
            })
            .collect();
        struct D(Vec<(String, Q)>);
        impl fmt::Display for D {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_terms(f, self.0.iter().map(|(s, c)| (s.as_str(), c.clone())))?;
                write!(f, " = 0")
            }
        }
        D(terms).to_string()
    }
}

/// Parses "[x0,y0] = [y0,y3]" over the nine generators.
pub fn parse_bracket(s: &str) -> Result<Sym2Relation> {
    let n = GENERATORS.len();
    let idx = |g: &str| GENERATORS.iter().position(|x| *x == g).ok_or_else(|| Error::Parse(format!("generator {g}")));
    let mut v = vec![Q::zero(); sym2_dim(n)];
    let sides: Vec<(&str, i64)> = match s.split_once('=') {
        Some((l, r)) => vec![(l, 1), (r, -1)],
        None => vec![(s, 1)],
    };
    for (side, sg) in sides {
        for (sign, t) in split_terms(side) {
            if t == "0" {
                continue;
            }
            let (c, br) = split_coef(&t);
            let inner = br
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad bracket {t:?}")))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad bracket {t:?}")))?;
            v[pair_index(n, idx(a.trim())?, idx(b.trim())?)] += qi(sg * sign * c);
        }
    }
    Ok(Sym2Relation(v))
}

/// The degree-2 relations of the presentation: twelve equalities and ten
/// vanishing brackets.
pub const THEOREM_RELATIONS: [&str; 22] = [
    "[x0,y0] = [y0,y3]",
    "[x2,y2] = [x1,x2]",
    "[x2,y3] = [x4,y3]",
    "[x1,y0] + [x1,y4] = 0",
    "[x2,z] = [x0,x2] + [x0,z]",
    "[y0,z] = [y0,y2] + [y2,z]",
    "[x0,x4] = [x0,x2] + [x2,x4]",
    "[y0,y4] = [y0,y2] + [y2,y4]",
    "[x0,x4] = [x0,x1] + [x1,x4]",
    "[y3,y4] = [y2,y3] + [y2,y4]",
    "[x2,y3] + [y3,z] = [x2,y2] + [y2,y3] + [y2,z]",
    "[x1,x2] + [x1,y3] + [x1,z] = [x0,x1] + [x4,y3] + [x0,z]",
    "[x0,y2]",
    "[x0,y3]",
    "[x0,y4]",
    "[x1,y2]",
    "[x2,y0]",
    "[x2,y4]",
    "[x4,y0]",
    "[x4,y2]",
    "[x4,z]",
    "[y4,z]",
];

pub fn theorem_relations() -> Vec<Sym2Relation> {
    THEOREM_RELATIONS.iter().map(|s| parse_bracket(s).unwrap()).collect()
}

pub fn square_relations(n: usize) -> Vec<Sym2Relation> {
    (0..n)
        .map(|i| {
            let mut v = vec![Q::zero(); sym2_dim(n)];
            v[pair_index(n, i, i)] = Q::one();
            Sym2Relation(v)
        })
        .collect()
}

pub fn sym2_rank(rels: &[Sym2Relation]) -> usize {
    let n = rels.first().map(|r| r.0.len()).unwrap_or(0);
    let vs: Vec<SparseVec<Q>> = rels.iter().map(|r| r.sparse()).collect();
    crate::linalg::rank((), n, &vs)
}

#[derive(Clone, Debug)]
pub struct SamelsonHarvest {
    /// [x_P, y_P] = 0 for the T̃ᵢ,ⱼ(0), over the generators.
    pub toric: Vec<(String, Sym2Relation)>,
    /// Consequences of the appendix pairs lying in the generators' square.
    pub extended: Vec<Sym2Relation>,
    /// Images of everything above under the B↔F swap.
    pub swapped: Vec<Sym2Relation>,
    pub squares: Vec<Sym2Relation>,
    /// Extra free symbols of the extended quotient besides the generators.
    pub auxiliary: Vec<String>,
}

impl SamelsonHarvest {
    pub fn all(&self) -> Vec<Sym2Relation> {
        let mut v: Vec<Sym2Relation> = self.toric.iter().map(|(_, r)| r.clone()).collect();
        v.extend(self.extended.iter().cloned());
        v.extend(self.swapped.iter().cloned());
        v.extend(self.squares.iter().cloned());
        v
    }

    pub fn rank(&self) -> usize {
        sym2_rank(&self.all())
    }
}

/// Brackets of commuting toric pairs, reduced to the nine generators.
pub fn harvest_samelson(harvest: &[LinearRelation], polys: &[String]) -> Result<SamelsonHarvest> {
    let q = quotient_basis(harvest)?;
    let ext = extended_quotient(harvest)?;
    let n = GENERATORS.len();
    let gens = generator_symbols();
    let mut toric = Vec::new();
    let mut ext_rels = Vec::new();
    for p in polys {
        let stem = symbol_stem(p)?;
        let (xs, ys) = (format!("x_{stem}"), format!("y_{stem}"));
        if is_appendix_symbol(&xs) {
            ext_rels.push(samelson_expand(&ext.expr(&xs)?, &ext.expr(&ys)?));
        } else {
            toric.push((p.clone(), samelson_expand(&q.expr(&xs)?, &q.expr(&ys)?)));
        }
    }
    // generator coordinates inside the extended basis
    let gpos: Vec<usize> = gens
        .iter()
        .map(|g| ext.basis.iter().position(|b| b == g).ok_or_else(|| Error::Inconsistent(format!("{g} not free"))))
        .collect::<Result<_>>()?;
    let m = ext.dim();
    let inner: BTreeSet<usize> = gpos.iter().copied().collect();
    // columns: pairs touching an auxiliary symbol first, generator pairs last
    let mut order: Vec<usize> = (0..sym2_dim(m))
        .filter(|k| {
            let (i, j) = pair_of(m, *k);
            !(inner.contains(&i) && inner.contains(&j))
        })
        .collect();
    let outer = order.len();
    for a in 0..n {
        for b in a..n {
            order.push(pair_index(m, gpos[a], gpos[b]));
        }
    }
    let newpos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut ech: Echelon<Q> = Echelon::new((), order.len());
    let mut vs: Vec<SparseVec<Q>> = ext_rels
        .iter()
        .map(|r| {
            let mut v: SparseVec<Q> =
                r.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (newpos[&k], x.clone())).collect();
            v.sort_by_key(|e| e.0);
            v
        })
        .collect();
    vs.extend(toric.iter().map(|(_, r)| {
        r.sparse().into_iter().map(|(k, x)| (outer + k, x)).collect::<SparseVec<Q>>()
    }));
    ech.insert_all(&vs);
    let extended: Vec<Sym2Relation> = ech
        .rows()
        .iter()
        .filter(|r| r[0].0 >= outer)
        .map(|r| {
            let mut v = vec![Q::zero(); sym2_dim(n)];
            for (k, x) in r {
                v[k - outer] = x.clone();
            }
            Sym2Relation(v)
        })
        .collect();
    let sigma = swap_matrix(&q)?;
    let mut swapped: Vec<Sym2Relation> = toric.iter().map(|(_, r)| r.map(&sigma)).collect();
    swapped.extend(extended.iter().map(|r| r.map(&sigma)));
    let auxiliary = ext.basis.iter().filter(|b| !gens.contains(b)).cloned().collect();
    Ok(SamelsonHarvest { toric, extended, swapped, squares: square_relations(n), auxiliary })
}

/// True when `a` and `b` span the same subspace.
pub fn same_span(a: &[Sym2Relation], b: &[Sym2Relation]) -> bool {
    let ra = sym2_rank(a);
    let rb = sym2_rank(b);
    let mut ab = a.to_vec();
    ab.extend(b.iter().cloned());
    ra == rb && sym2_rank(&ab) == ra
}

/// Polytope names of the harvest sources.
pub fn source_names(src: &[(String, DelzantPolytope)]) -> Vec<String> {
    src.iter().map(|(n, _)| n.clone()).collect()
}

pub fn relations_of(h: &[Harvested]) -> Vec<LinearRelation> {
    h.iter().map(|x| x.relation.clone()).collect()
}

/// Membership of a listed relation in the span of harvested relations.
pub fn in_span(harvest: &[LinearRelation], listed: &str) -> Result<bool> {
    let r = LinearRelation::parse(listed)?.resolve()?;
    let mut syms = symbols_of(harvest);
    syms.extend(r.symbols().cloned());
    let span = RelationSpan::new(syms.into_iter().collect(), harvest)?;
    Ok(span.contains(&r))
}
