//! Decorated graphs of circle actions: projection of a polygon along a
//! functional, graph blow-ups and normal forms up to translation and flip.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::DelzantPolytope;
use crate::scalars::{Chamber, LinForm, Q};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FatVertex {
    pub moment: LinForm,
    pub area: LinForm,
    pub genus: i64,
}

/// An isotropy sphere between two fixed components; `k` = 1 is kept
/// internally but never shown.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ZkEdge {
    pub lo: LinForm,
    pub hi: LinForm,
    pub k: i64,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub fat: Vec<FatVertex>,
    pub iso: Vec<LinForm>,
    pub edges: Vec<ZkEdge>,
}

/// Sorted, translation-normalized encoding; equal keys mean equal graphs
/// up to translation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct GraphKey {
    pub fat: Vec<(LinForm, LinForm, i64)>,
    pub iso: Vec<LinForm>,
    pub edges: Vec<(LinForm, LinForm, i64)>,
}

fn ordered(a: LinForm, b: LinForm) -> (LinForm, LinForm) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DecoratedGraph {
    pub fn map_moments(&self, f: impl Fn(&LinForm) -> LinForm) -> Self {
        DecoratedGraph {
            fat: self
                .fat
                .iter()
                .map(|v| FatVertex { moment: f(&v.moment), area: v.area.clone(), genus: v.genus })
                .collect(),
            iso: self.iso.iter().map(&f).collect(),
            edges: self.edges.iter().map(|e| ZkEdge { lo: f(&e.lo), hi: f(&e.hi), k: e.k }).collect(),
        }
    }

    pub fn translate(&self, t: &LinForm) -> Self {
        self.map_moments(|m| m + t)
    }

    /// The graph of the inverse action.
    pub fn flip(&self) -> Self {
        self.map_moments(|m| -m)
    }

    /// Applies the B↔F relabelling μ ↔ 1 to moments and areas.
    pub fn swap_mu_one(&self) -> Self {
        let mut g = self.map_moments(LinForm::swap_mu_one);
        for v in g.fat.iter_mut() {
            v.area = v.area.swap_mu_one();
        }
        g
    }

    fn centroid(&self) -> LinForm {
        let mut s = LinForm::zero();
        let mut n = 0i64;
        for v in &self.fat {
            s += &v.moment;
            n += 1;
        }
        for m in &self.iso {
            s += m;
            n += 1;
        }
        if n == 0 {
            return s;
        }
        s.scale(&Q::new(1.into(), n.into()))
    }

    /// Exact encoding without any normalization (only sorting).
    pub fn encode(&self) -> GraphKey {
        let mut fat: Vec<_> = self.fat.iter().map(|v| (v.moment.clone(), v.area.clone(), v.genus)).collect();
        let mut iso = self.iso.clone();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|e| e.k >= 2)
            .map(|e| {
                let (a, b) = ordered(e.lo.clone(), e.hi.clone());
                (a, b, e.k)
            })
            .collect();
        fat.sort();
        iso.sort();
        edges.sort();
        GraphKey { fat, iso, edges }
    }

    /// Encoding up to translation: moments measured from the centroid of
    /// the fixed components.
    pub fn translation_key(&self) -> GraphKey {
        self.translate(&-self.centroid()).encode()
    }

    /// Encoding up to translation and flip.
    pub fn canonical(&self) -> GraphKey {
        let a = self.translation_key();
        let b = self.flip().translation_key();
        a.min(b)
    }

    pub fn equivalent(&self, other: &DecoratedGraph) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n  rankdir=BT;\n");
        let id = |m: &LinForm| format!("\"{m}\"");
        for v in &self.fat {
            s += &format!("  {} [shape=ellipse, label=\"{}, {}\"];\n", id(&v.moment), v.moment, v.area);
        }
        for m in &self.iso {
            s += &format!("  {} [shape=point, xlabel=\"{m}\"];\n", id(m));
        }
        for e in self.edges.iter().filter(|e| e.k >= 2) {
            s += &format!("  {} -- {} [label=\"{}\"];\n", id(&e.lo), id(&e.hi), e.k);
        }
        s + "}\n"
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.encode();
        for (m, a, _) in &k.fat {
            writeln!(f, "fat {m}, area {a}")?;
        }
        for m in &k.iso {
            writeln!(f, "iso {m}")?;
        }
        for (a, b, kk) in &k.edges {
            writeln!(f, "Z{kk} {a} -- {b}")?;
        }
        Ok(())
    }
}

fn pair(p: &(LinForm, LinForm), xi: (i64, i64)) -> LinForm {
    &p.0.scale_int(xi.0) + &p.1.scale_int(xi.1)
}

/// The circle action generated by the functional `xi`.
pub fn project(p: &DelzantPolytope, xi: (i64, i64)) -> Result<DecoratedGraph> {
    if num_integer::gcd(xi.0, xi.1) != 1 {
        return Err(Error::Invalid(format!("functional {xi:?} is not primitive")));
    }
    let ch = &p.chamber;
    let n = p.len();
    let moments: Vec<LinForm> = p.vertices.iter().map(|v| pair(v, xi)).collect();
    let lo = moments.iter().min_by(|a, b| ch.cmp(a, b)).unwrap().clone();
    let hi = moments.iter().max_by(|a, b| ch.cmp(a, b)).unwrap().clone();
    let mut on_fat = vec![false; n];
    let mut g = DecoratedGraph::default();
    for (i, e) in p.edges()?.into_iter().enumerate() {
        let s = e.direction.0 * xi.0 + e.direction.1 * xi.1;
        let (a, b) = (&moments[i], &moments[(i + 1) % n]);
        if s == 0 {
            let extreme = ch.cmp(a, &lo).is_eq() || ch.cmp(a, &hi).is_eq();
            if !extreme {
                return Err(Error::Geometry(format!("fixed surface at {a} is not extremal")));
            }
            on_fat[i] = true;
            on_fat[(i + 1) % n] = true;
            g.fat.push(FatVertex { moment: a.clone(), area: e.length, genus: 0 });
        } else {
            let (l, h) = if ch.cmp(a, b).is_lt() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            g.edges.push(ZkEdge { lo: l, hi: h, k: s.abs() });
        }
    }
    for i in 0..n {
        if !on_fat[i] {
            g.iso.push(moments[i].clone());
        }
    }
    Ok(g)
}

fn is_extreme_fat(g: &DecoratedGraph, idx: usize, ch: &Chamber) -> Option<bool> {
    let m = &g.fat[idx].moment;
    let all: Vec<&LinForm> = g.fat.iter().map(|v| &v.moment).chain(g.iso.iter()).collect();
    if all.iter().all(|x| ch.cmp(m, x).is_le()) {
        Some(true)
    } else if all.iter().all(|x| ch.cmp(m, x).is_ge()) {
        Some(false)
    } else {
        None
    }
}

/// Blows up a point on the fixed surface `fat_index` (at the minimum or the
/// maximum of the moment map).
pub fn graph_blow_up_fat(g: &DecoratedGraph, fat_index: usize, cap: &LinForm, ch: &Chamber) -> Result<DecoratedGraph> {
    let v = g.fat.get(fat_index).ok_or_else(|| Error::Invalid("no such fixed surface".into()))?;
    if !ch.positive(cap) {
        return Err(Error::Bound(format!("capacity {cap} is not positive")));
    }
    if !ch.positive(&(&v.area - cap)) {
        return Err(Error::Bound(format!("capacity {cap} is not below the area {}", v.area)));
    }
    let at_min = is_extreme_fat(g, fat_index, ch).ok_or_else(|| Error::Invalid("surface is not extremal".into()))?;
    let mut out = g.clone();
    let new = if at_min { &v.moment + cap } else { &v.moment - cap };
    out.fat[fat_index].area = &v.area - cap;
    let (lo, hi) = if at_min { (v.moment.clone(), new.clone()) } else { (new.clone(), v.moment.clone()) };
    out.edges.push(ZkEdge { lo, hi, k: 1 });
    out.iso.push(new);
    Ok(out)
}

/// The minimum-surface case.
pub fn graph_blow_up_fat_min(g: &DecoratedGraph, cap: &LinForm, ch: &Chamber) -> Result<DecoratedGraph> {
    let idx = (0..g.fat.len())
        .find(|i| is_extreme_fat(g, *i, ch) == Some(true))
        .ok_or_else(|| Error::Invalid("no fixed surface at the minimum".into()))?;
    graph_blow_up_fat(g, idx, cap, ch)
}

/// Blows up the isolated fixed point `iso_index` whose two weights are
/// `w1`, `w2` (signed: positive means the sphere goes up). The point splits
/// into Φ + w1·cap and Φ + w2·cap joined by a sphere of label |w1 − w2|.
pub fn graph_blow_up_weights(
    g: &DecoratedGraph,
    iso_index: usize,
    w1: i64,
    w2: i64,
    cap: &LinForm,
    ch: &Chamber,
) -> Result<DecoratedGraph> {
    if !ch.positive(cap) {
        return Err(Error::Bound(format!("capacity {cap} is not positive")));
    }
    if w1 == 0 || w2 == 0 || w1 == w2 {
        return Err(Error::Invalid("weights must be nonzero and distinct".into()));
    }
    let phi = g.iso.get(iso_index).ok_or_else(|| Error::Invalid("no such fixed point".into()))?.clone();
    let mut out = g.clone();
    let p1 = &phi + &cap.scale_int(w1);
    let p2 = &phi + &cap.scale_int(w2);
    let mut used = [false, false];
    for e in out.edges.iter_mut() {
        let (other, at_lo) = if e.lo == phi {
            (e.hi.clone(), true)
        } else if e.hi == phi {
            (e.lo.clone(), false)
        } else {
            continue;
        };
        let up = ch.cmp(&other, &phi).is_gt();
        for (slot, (w, p)) in [(w1, &p1), (w2, &p2)].into_iter().enumerate() {
            if !used[slot] && e.k == w.abs() && up == (w > 0) {
                used[slot] = true;
                if at_lo {
                    e.lo = p.clone();
                } else {
                    e.hi = p.clone();
                }
                break;
            }
        }
    }
    out.iso.remove(iso_index);
    out.iso.push(p1.clone());
    out.iso.push(p2.clone());
    let (lo, hi) = if ch.cmp(&p1, &p2).is_lt() { (p1, p2) } else { (p2, p1) };
    out.edges.push(ZkEdge { lo, hi, k: (w1 - w2).abs() });
    Ok(out)
}

/// Interior fixed point with one sphere of label m going up and one of
/// label n going down: new points Φ + m·cap, Φ − n·cap, middle label m + n.
pub fn graph_blow_up_interior(
    g: &DecoratedGraph,
    iso_index: usize,
    m: i64,
    n: i64,
    cap: &LinForm,
    ch: &Chamber,
) -> Result<DecoratedGraph> {
    if m <= 0 || n <= 0 {
        return Err(Error::Invalid("labels must be positive".into()));
    }
    graph_blow_up_weights(g, iso_index, m, -n, cap, ch)
}

fn lf(s: &str) -> LinForm {
    LinForm::parse(s).unwrap()
}

/// A graph given by figure labels: two fat vertices (moment, area), the
/// isolated moments and the Z_k edges between isolated points.
pub fn graph_from_labels(fat: &[(&str, &str)], iso: &[&str], zk: &[(&str, &str, i64)]) -> DecoratedGraph {
    DecoratedGraph {
        fat: fat.iter().map(|(m, a)| FatVertex { moment: lf(m), area: lf(a), genus: 0 }).collect(),
        iso: iso.iter().map(|m| lf(m)).collect(),
        edges: zk.iter().map(|(a, b, k)| ZkEdge { lo: lf(a), hi: lf(b), k: *k }).collect(),
    }
}

pub const NAMED_GRAPHS: [&str; 24] = [
    "x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10", "x11", "y0", "y1", "y2", "y3", "y4", "y5",
    "y6", "y7", "y8", "y9", "y10", "y11",
];

/// The named graphs as drawn, with the polytopes (i, j) whose x- or
/// y-projection they are.
pub fn named_graph(name: &str) -> Result<(DecoratedGraph, Vec<(usize, usize)>)> {
    let g = graph_from_labels;
    let (graph, members): (DecoratedGraph, &[(usize, usize)]) = match name {
        "x0" => (
            g(&[("0", "mu-c1-c3"), ("-1", "mu-c2")], &["-c3", "-c1", "-1+c2"], &[]),
            &[(1, 1), (1, 6), (5, 5), (5, 6)],
        ),
        "x1" => (
            g(&[("0", "mu-c1"), ("-1", "mu-c2")], &["-c1", "-1+c2+c3", "-1+c2-c3"], &[("-1+c2-c3", "-1+c2+c3", 2)]),
            &[(1, 2), (5, 3)],
        ),
        "x2" => (
            g(&[("0", "mu-c1"), ("-1", "mu-c2-c3")], &["-c1", "-1+c2", "-1+c3"], &[]),
            &[(1, 3), (1, 4), (5, 1), (5, 2)],
        ),
        "x3" => (
            g(&[("0", "mu-c1"), ("-1", "mu-c2")], &["-c1+c3", "-c1-c3", "-1+c2"], &[("-c1-c3", "-c1+c3", 2)]),
            &[(1, 5), (5, 4)],
        ),
        "x4" => (
            g(&[("0", "mu-c1-c2"), ("-1", "mu-c3")], &["-c2", "-c1", "-1+c3"], &[]),
            &[(2, 1), (2, 2), (3, 1), (3, 2)],
        ),
        "x5" => (
            g(&[("0", "mu-c1-c2"), ("-1", "mu")], &["-c2", "-c1+c3", "-c1-c3"], &[("-c1-c3", "-c1+c3", 2)]),
            &[(2, 3), (3, 3)],
        ),
        "x6" => (
            g(&[("0", "mu-c1-c2-c3"), ("-1", "mu")], &["-c3", "-c2", "-c1"], &[]),
            &[(2, 4), (2, 5), (3, 5), (3, 6)],
        ),
        "x7" => (
            g(&[("0", "mu-c1-c2"), ("-1", "mu")], &["-c2+c3", "-c2-c3", "-c1"], &[("-c2-c3", "-c2+c3", 2)]),
            &[(2, 6), (3, 4)],
        ),
        "x8" => (
            g(&[("0", "mu-c1"), ("-1", "mu-c3")], &["-c1+c2", "-c1-c2", "-1+c3"], &[("-c1-c2", "-c1+c2", 2)]),
            &[(4, 1), (4, 2)],
        ),
        "x9" => (
            g(
                &[("0", "mu-c1"), ("-1", "mu")],
                &["-c1+c2", "-c1-c2+2c3", "-c1-c2-c3"],
                &[("-c1-c2+2c3", "-c1+c2", 2), ("-c1-c2-c3", "-c1-c2+2c3", 3)],
            ),
            &[(4, 3)],
        ),
        "x10" => (
            g(&[("0", "mu-c1-c3"), ("-1", "mu")], &["-c3", "-c1+c2", "-c1-c2"], &[("-c1-c2", "-c1+c2", 2)]),
            &[(4, 5), (4, 6)],
        ),
        "x11" => (
            g(
                &[("0", "mu-c1"), ("-1", "mu")],
                &["-c1+c2+c3", "-c1+c2-2c3", "-c1-c2"],
                &[("-c1+c2-2c3", "-c1+c2+c3", 3), ("-c1-c2", "-c1+c2-2c3", 2)],
            ),
            &[(4, 4)],
        ),
        "y0" => (
            g(&[("mu", "1-c2"), ("0", "1-c1-c3")], &["mu-c2", "c1", "c3"], &[]),
            &[(1, 4), (1, 5), (2, 2), (2, 3)],
        ),
        "y1" => (
            g(&[("mu", "1-c2"), ("0", "1-c1")], &["mu-c2+c3", "mu-c2-c3", "c1"], &[("mu-c2-c3", "mu-c2+c3", 2)]),
            &[(1, 3), (2, 5)],
        ),
        "y2" => (
            g(&[("mu", "1-c2-c3"), ("0", "1-c1")], &["mu-c3", "mu-c2", "c1"], &[]),
            &[(1, 1), (1, 2), (2, 1), (2, 6)],
        ),
        "y3" => (
            g(&[("mu", "1-c2"), ("0", "1-c1")], &["mu-c2", "c1+c3", "c1-c3"], &[("c1-c3", "c1+c3", 2)]),
            &[(1, 6), (2, 4)],
        ),
        "y4" => (
            g(&[("mu", "1-c3"), ("0", "1-c1-c2")], &["mu-c3", "c1", "c2"], &[]),
            &[(4, 1), (4, 6), (5, 1), (5, 6)],
        ),
        "y5" => (
            g(&[("mu", "1"), ("0", "1-c1-c2")], &["c1+c3", "c1-c3", "c2"], &[("c1-c3", "c1+c3", 2)]),
            &[(4, 5), (5, 5)],
        ),
        "y6" => (
            g(&[("mu", "1"), ("0", "1-c1-c2-c3")], &["c1", "c2", "c3"], &[]),
            &[(4, 2), (4, 3), (5, 3), (5, 4)],
        ),
        "y7" => (
            g(&[("mu", "1"), ("0", "1-c1-c2")], &["c1", "c2+c3", "c2-c3"], &[("c2-c3", "c2+c3", 2)]),
            &[(4, 4), (5, 2)],
        ),
        "y8" => (
            g(&[("mu", "1-c3"), ("0", "1-c1")], &["mu-c3", "c1+c2", "c1-c2"], &[("c1-c2", "c1+c2", 2)]),
            &[(3, 1), (3, 6)],
        ),
        "y9" => (
            g(
                &[("mu", "1"), ("0", "1-c1")],
                &["c1+c2+c3", "c1+c2-2c3", "c1-c2"],
                &[("c1+c2-2c3", "c1+c2+c3", 3), ("c1-c2", "c1+c2-2c3", 2)],
            ),
            &[(3, 5)],
        ),
        "y10" => (
            g(&[("mu", "1"), ("0", "1-c1-c3")], &["c1+c2", "c1-c2", "c3"], &[("c1-c2", "c1+c2", 2)]),
            &[(3, 2), (3, 3)],
        ),
        "y11" => (
            g(
                &[("mu", "1"), ("0", "1-c1")],
                &["c1+c2", "c1-c2+2c3", "c1-c2-c3"],
                &[("c1-c2+2c3", "c1+c2", 2), ("c1-c2-c3", "c1-c2+2c3", 3)],
            ),
            &[(3, 4)],
        ),
        _ => return Err(Error::Unknown(format!("graph {name}"))),
    };
    Ok((graph, members.to_vec()))
}
