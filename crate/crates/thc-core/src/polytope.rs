//! Delzant polygons with symbolic vertices and facet classes.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{class_from_length, cls, std_area, HomologyClass};
use crate::scalars::{Chamber, LinForm, Sign, Q};

pub type Point = (LinForm, LinForm);

pub fn pt(x: &str, y: &str) -> Point {
    (LinForm::parse(x).unwrap(), LinForm::parse(y).unwrap())
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DelzantPolytope {
    pub name: String,
    /// Counter-clockwise.
    pub vertices: Vec<Point>,
    /// `facet_classes[i]` sits on the edge from vertex i to vertex i+1.
    pub facet_classes: Vec<HomologyClass>,
    pub chamber: Chamber,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EdgeData {
    pub direction: (i64, i64),
    pub length: LinForm,
}

pub type Mat2 = [[i64; 2]; 2];

pub fn det2(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

impl DelzantPolytope {
    pub fn new(name: &str, vertices: Vec<Point>, facet_classes: Vec<HomologyClass>, chamber: &Chamber) -> Self {
        DelzantPolytope { name: name.into(), vertices, facet_classes, chamber: chamber.clone() }
    }

    /// Facet classes read off from the edge lengths.
    pub fn with_length_classes(name: &str, vertices: Vec<Point>, chamber: &Chamber) -> Result<Self> {
        let mut p = Self::new(name, vertices, vec![], chamber);
        p.facet_classes = (0..p.len())
            .map(|i| {
                let e = p.edge_data(i)?;
                class_from_length(&e.length)
                    .ok_or_else(|| Error::Geometry(format!("{name}: length {} is not a class area", e.length)))
            })
            .collect::<Result<_>>()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_data(&self, i: usize) -> Result<EdgeData> {
        let n = self.len();
        let (a, b) = (&self.vertices[i % n], &self.vertices[(i + 1) % n]);
        let dx = &b.0 - &a.0;
        let dy = &b.1 - &a.1;
        let (dir, len) = if dx.is_zero() {
            if dy.is_zero() {
                return Err(Error::Geometry(format!("{}: repeated vertex {i}", self.name)));
            }
            ((0, 1), dy)
        } else {
            let k = if dy.is_zero() {
                Q::zero()
            } else {
                dy.ratio_to(&dx)
                    .ok_or_else(|| Error::Geometry(format!("{}: edge {i} is not rational", self.name)))?
            };
            let m = k.denom().to_i64().unwrap();
            let nn = k.numer().to_i64().unwrap();
            ((m, nn), dx.scale(&Q::new(1.into(), m.into())))
        };
        match self.chamber.sign(&len) {
            Sign::Positive => Ok(EdgeData { direction: dir, length: len }),
            Sign::Negative => Ok(EdgeData { direction: (-dir.0, -dir.1), length: -len }),
            Sign::Zero => Err(Error::Geometry(format!("{}: edge {i} has zero length", self.name))),
        }
    }

    pub fn edges(&self) -> Result<Vec<EdgeData>> {
        (0..self.len()).map(|i| self.edge_data(i)).collect()
    }

    /// First Delzant violation, if any.
    pub fn check_delzant(&self) -> std::result::Result<(), String> {
        let n = self.len();
        if n < 3 {
            return Err("fewer than three vertices".into());
        }
        if self.facet_classes.len() != n {
            return Err("facet count differs from vertex count".into());
        }
        let edges = self.edges().map_err(|e| e.to_string())?;
        for i in 0..n {
            let u_in = edges[(i + n - 1) % n].direction;
            let u_out = edges[i].direction;
            let d = det2(u_in, u_out);
            if d <= 0 {
                return Err(format!("vertex {i}: not a convex counter-clockwise corner"));
            }
            if d != 1 {
                return Err(format!("vertex {i}: edge directions have determinant {d}"));
            }
        }
        // simple polygon: total turning is one revolution, checked by the
        // angle count of direction changes crossing the positive x-axis
        let mut winding = 0;
        for i in 0..n {
            let a = edges[i].direction;
            let b = edges[(i + 1) % n].direction;
            if a.1 < 0 && b.1 >= 0 && det2(a, b) > 0 {
                winding += 1;
            }
        }
        if winding != 1 {
            return Err(format!("edge directions wind {winding} times"));
        }
        Ok(())
    }

    /// Checks that each facet's lattice length is the area of its class.
    pub fn check_facet_areas(&self) -> std::result::Result<(), String> {
        for (i, e) in self.edges().map_err(|e| e.to_string())?.iter().enumerate() {
            let a = std_area(&self.facet_classes[i]);
            if a != e.length {
                return Err(format!("edge {i}: length {} but class {} has area {a}", e.length, self.facet_classes[i]));
            }
        }
        Ok(())
    }

    /// Twice the Euclidean area at the chamber sample (shoelace).
    pub fn double_area_at(&self) -> Q {
        let n = self.len();
        let ev: Vec<(Q, Q)> =
            self.vertices.iter().map(|(x, y)| (self.chamber.eval(x), self.chamber.eval(y))).collect();
        let mut s = Q::zero();
        for i in 0..n {
            let (a, b) = (&ev[i], &ev[(i + 1) % n]);
            s += &a.0 * &b.1 - &a.1 * &b.0;
        }
        s
    }

    pub fn sl2z_apply(&self, m: Mat2) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(Error::Invalid(format!("matrix determinant {det}")));
        }
        let map = |(x, y): &Point| -> Point {
            (&x.scale_int(m[0][0]) + &y.scale_int(m[0][1]), &x.scale_int(m[1][0]) + &y.scale_int(m[1][1]))
        };
        let mut out = self.clone();
        out.vertices = self.vertices.iter().map(map).collect();
        if det < 0 {
            let n = self.len();
            out.vertices = (0..n).map(|k| map(&self.vertices[(n - k) % n])).collect();
            out.facet_classes = (0..n).map(|k| self.facet_classes[(2 * n - 1 - k) % n].clone()).collect();
        }
        Ok(out)
    }

    pub fn translate(&self, t: &Point) -> Self {
        let mut out = self.clone();
        for v in out.vertices.iter_mut() {
            v.0 += &t.0;
            v.1 += &t.1;
        }
        out
    }

    /// Rotates so that `v` becomes vertex 0.
    pub fn rotate_to(&self, v: &Point) -> Option<Self> {
        let i = self.vertices.iter().position(|w| w == v)?;
        let mut out = self.clone();
        out.vertices.rotate_left(i);
        out.facet_classes.rotate_left(i);
        Some(out)
    }

    /// Smallest i such that no facet involves Eᵢ.
    fn next_exceptional(&self) -> Result<usize> {
        (1..=3)
            .find(|i| self.facet_classes.iter().all(|c| c.r(*i) == 0))
            .ok_or_else(|| Error::Invalid("no exceptional index left".into()))
    }

    /// Chops vertex `v` at lattice distance `cap`.
    pub fn blow_up_vertex(&self, v: usize, cap: &LinForm) -> Result<Self> {
        let n = self.len();
        if !self.chamber.positive(cap) {
            return Err(Error::Bound(format!("capacity {cap} is not positive")));
        }
        let e_in = self.edge_data((v + n - 1) % n)?;
        let e_out = self.edge_data(v)?;
        for e in [&e_in, &e_out] {
            if !self.chamber.positive(&(&e.length - cap)) {
                return Err(Error::Bound(format!("capacity {cap} exceeds adjacent edge length {}", e.length)));
            }
        }
        let k = self.next_exceptional()?;
        let e_new = HomologyClass::e(k);
        let (x, y) = &self.vertices[v];
        let p1 = (x - &cap.scale_int(e_in.direction.0), y - &cap.scale_int(e_in.direction.1));
        let p2 = (x + &cap.scale_int(e_out.direction.0), y + &cap.scale_int(e_out.direction.1));
        let mut out = self.clone();
        out.vertices.splice(v..=v, [p1, p2]);
        let prev = (v + n - 1) % n;
        out.facet_classes[prev] = out.facet_classes[prev].sub(&e_new);
        out.facet_classes[v] = out.facet_classes[v].sub(&e_new);
        out.facet_classes.insert(v, e_new);
        Ok(out)
    }

    /// Inverse of [`Self::blow_up_vertex`]: collapses facet `f`, which must
    /// be an exceptional class Eₖ.
    pub fn blow_down(&self, f: usize) -> Result<Self> {
        let n = self.len();
        let exc = &self.facet_classes[f];
        let single_e = (1..exc.len() - 1).any(|i| exc.r(i) == -1) && exc.0.iter().filter(|x| **x != 0).count() == 1;
        if !single_e {
            return Err(Error::Invalid(format!("facet {f} is not exceptional")));
        }
        let e = self.edge_data(f)?;
        let e_in = self.edge_data((f + n - 1) % n)?;
        let (x, y) = &self.vertices[f];
        let v = (x + &e.length.scale_int(e_in.direction.0), y + &e.length.scale_int(e_in.direction.1));
        let mut out = self.clone();
        let next = (f + 1) % n;
        let prev = (f + n - 1) % n;
        out.facet_classes[prev] = out.facet_classes[prev].add(exc);
        out.facet_classes[next] = out.facet_classes[next].add(exc);
        out.vertices[f] = v;
        out.vertices.remove(next);
        out.facet_classes.remove(f);
        if next == 0 {
            out.facet_classes.rotate_left(1);
        }
        Ok(out)
    }

    /// Facet classes in cyclic order.
    pub fn class_cycle(&self) -> Vec<HomologyClass> {
        self.facet_classes.clone()
    }
}

/// Equality of cyclic sequences up to rotation and reflection.
pub fn cycles_equal<T: PartialEq + Clone>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    if n == 0 {
        return true;
    }
    let rev: Vec<T> = b.iter().rev().cloned().collect();
    (0..n).any(|s| (0..n).all(|i| a[i] == b[(i + s) % n]) || (0..n).all(|i| a[i] == rev[(i + s) % n]))
}

/// The frame matrix Cₙ.
pub fn frame(n: i64) -> Mat2 {
    if n == 0 {
        return [[-1, 0], [0, 1]];
    }
    if n % 2 == 0 {
        let k = n / 2;
        [[1, 0], [-k, 1]]
    } else {
        let k = (n + 1) / 2;
        [[1 - k, k], [1, -1]]
    }
}

/// Δ(n) with facet classes from lengths.
pub fn delta(n: i64, ch: &Chamber) -> Result<DelzantPolytope> {
    let k = (n + 1) / 2;
    let mu = LinForm::mu();
    let top_left = if n % 2 == 0 { &mu - &LinForm::int(k) } else { &mu - &LinForm::int(k - 1) };
    let verts = vec![
        (LinForm::zero(), LinForm::zero()),
        (LinForm::one(), LinForm::zero()),
        (LinForm::one(), &mu + &LinForm::int(k)),
        (LinForm::zero(), top_left),
    ];
    if n == 0 {
        let classes = vec![cls("F"), cls("B"), cls("F"), cls("B")];
        return Ok(DelzantPolytope::new("delta(0)", verts, classes, ch));
    }
    DelzantPolytope::with_length_classes(&format!("delta({n})"), verts, ch)
}

/// Δ̃(n): Δ(n) with the origin chopped (capacity c1, or 1−c1 for odd n).
pub fn delta_tilde(n: i64, ch: &Chamber) -> Result<DelzantPolytope> {
    let base = delta(n, ch)?;
    let cap = if n % 2 == 0 { LinForm::c(1) } else { &LinForm::one() - &LinForm::c(1) };
    let mut p = base.blow_up_vertex(0, &cap)?;
    p.name = format!("delta~({n})");
    if n != 0 {
        p = DelzantPolytope::with_length_classes(&p.name, p.vertices, ch)?;
    }
    Ok(p)
}

/// Vertex lists (i)..(vi) of T̃ᵢ(0) in the C₀ frame.
pub fn t0_fixture(i: usize) -> Vec<Point> {
    let v: &[(&str, &str)] = match i {
        1 => &[("0", "mu"), ("-1+c2", "mu"), ("-1", "mu-c2"), ("-1", "0"), ("-c1", "0"), ("0", "c1")],
        2 => &[("-1", "mu"), ("-1", "0"), ("-c1", "0"), ("0", "c1"), ("0", "mu-c2"), ("-c2", "mu")],
        3 => &[("-1", "mu"), ("-1", "0"), ("-c1", "0"), ("-c2", "c1-c2"), ("0", "c1+c2"), ("0", "mu")],
        4 => &[("-1", "mu"), ("-1", "0"), ("-c1-c2", "0"), ("-c1+c2", "c2"), ("0", "c1"), ("0", "mu")],
        5 => &[("-1", "mu"), ("-1", "c2"), ("-1+c2", "0"), ("-c1", "0"), ("0", "c1"), ("0", "mu")],
        _ => panic!("T{i}(0) does not exist"),
    };
    v.iter().map(|(x, y)| pt(x, y)).collect()
}

/// The vertex of C₀·Δ̃(0) chopped to make T̃ᵢ(0).
fn t0_chopped_vertex(i: usize) -> Point {
    match i {
        1 => pt("-1", "mu"),
        2 => pt("0", "mu"),
        3 => pt("0", "c1"),
        4 => pt("-c1", "0"),
        5 => pt("-1", "0"),
        _ => panic!("T{i}(0) does not exist"),
    }
}

/// Picks the first shipped chamber (with the requested μ) where `build` works.
fn in_some_chamber(mu2: bool, build: impl Fn(&Chamber) -> Result<DelzantPolytope>) -> Result<DelzantPolytope> {
    let chambers = if mu2 {
        [Chamber::generic_mu2(), Chamber::e1neg_mu2()]
    } else {
        [Chamber::generic(), Chamber::e1neg()]
    };
    let mut last = None;
    for ch in &chambers {
        match build(ch).and_then(|p| p.check_delzant().map(|_| p).map_err(Error::Geometry)) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// T̃ᵢ(0) generated by blow-ups and rotated to the (i)..(vi) order.
pub fn t0(i: usize, ch: &Chamber) -> Result<DelzantPolytope> {
    if !(1..=5).contains(&i) {
        return Err(Error::Unknown(format!("T{i}")));
    }
    let base = delta_tilde(0, ch)?.sl2z_apply(frame(0))?;
    let v = base
        .vertices
        .iter()
        .position(|w| *w == t0_chopped_vertex(i))
        .ok_or_else(|| Error::Geometry("missing vertex".into()))?;
    let p = base.blow_up_vertex(v, &LinForm::c(2))?;
    let mut p = p.rotate_to(&t0_fixture(i)[0]).ok_or_else(|| Error::Geometry("fixture mismatch".into()))?;
    p.name = format!("T{i}");
    Ok(p)
}

/// T̃ᵢ,ⱼ(0): vertex j (1-based) of T̃ᵢ(0) chopped with c3.
pub fn tij(i: usize, j: usize, ch: &Chamber) -> Result<DelzantPolytope> {
    if !(1..=6).contains(&j) {
        return Err(Error::Unknown(format!("T{i},{j}")));
    }
    let mut p = t0(i, ch)?.blow_up_vertex(j - 1, &LinForm::c(3))?;
    p.name = format!("T{i},{j}");
    Ok(p)
}

/// The appendix polytopes at k = 1, vertices (i)..(vi).
pub fn appendix_fixture(n: usize) -> Result<Vec<Point>> {
    let v: &[(&str, &str)] = match n {
        6 => &[
            ("0", "1"),
            ("0", "1-c1"),
            ("1-c1", "-1+c1"),
            ("mu-c1", "-mu+c1"),
            ("mu+1-c1-c2", "-mu+c1"),
            ("mu+1-c1-c2", "-mu+c1+c2"),
        ],
        7 => &[
            ("0", "1"),
            ("0", "1-c1"),
            ("1-c1", "-1+c1"),
            ("mu-c1-c2", "-mu+c1+c2"),
            ("mu-c1+c2", "-mu+c1"),
            ("mu+1-c1", "-mu+c1"),
        ],
        8 => &[("1", "mu-c2"), ("1-c2", "mu-c2"), ("0", "mu-1"), ("0", "c1"), ("c1", "-c1"), ("1", "-1")],
        9 => &[("1", "mu"), ("c2", "mu-1+c2"), ("0", "mu-1-c2"), ("0", "c1"), ("c1", "-c1"), ("1", "-1")],
        10 => &[("1", "mu"), ("0", "mu-1"), ("0", "c1"), ("c1", "-c1"), ("1-c2", "-1+c2"), ("1", "-1+c2")],
        11 => &[("1", "mu"), ("0", "mu-1"), ("0", "c1+c2"), ("c2", "c1-2c2"), ("c1", "-c1"), ("1", "-1")],
        _ => return Err(Error::Unknown(format!("P{n}"))),
    };
    Ok(v.iter().map(|(x, y)| pt(x, y)).collect())
}

/// Appendix polytope number ↦ (frame n, family index i) in the x_{n,i,j} naming.
pub fn appendix_index(n: usize) -> Option<(usize, usize)> {
    match n {
        6 => Some((1, 1)),
        7 => Some((1, 2)),
        8 => Some((2, 1)),
        9 => Some((2, 2)),
        10 => Some((2, 5)),
        11 => Some((2, 3)),
        _ => None,
    }
}

pub fn appendix(n: usize, ch: &Chamber) -> Result<DelzantPolytope> {
    DelzantPolytope::with_length_classes(&format!("P{n}"), appendix_fixture(n)?, ch)
}

pub const ROMAN: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];

/// Appendix polytope `n` with vertex j (1-based) chopped at c3.
pub fn appendix_chop(n: usize, j: usize, ch: &Chamber) -> Result<DelzantPolytope> {
    if !(1..=6).contains(&j) {
        return Err(Error::Unknown(format!("P{n}({j})")));
    }
    let mut p = appendix(n, ch)?.blow_up_vertex(j - 1, &LinForm::c(3))?;
    p.name = format!("P{n}({})", ROMAN[j - 1]);
    Ok(p)
}

/// Resolves a catalog name in the first shipped chamber where it exists.
///
/// Names: "delta(n)", "delta~(n)", "T1".."T5", "T1,4", "P6".."P11",
/// "P9(v)" and so on.
pub fn catalog(name: &str) -> Result<DelzantPolytope> {
    let name = name.trim();
    let unknown = || Error::Unknown(format!("polytope {name}"));
    if let Some(rest) = name.strip_prefix("delta~(").and_then(|r| r.strip_suffix(')')) {
        let n: i64 = rest.parse().map_err(|_| unknown())?;
        return in_some_chamber(n > 0, |ch| delta_tilde(n, ch));
    }
    if let Some(rest) = name.strip_prefix("delta(").and_then(|r| r.strip_suffix(')')) {
        let n: i64 = rest.parse().map_err(|_| unknown())?;
        return in_some_chamber(n > 0, |ch| delta(n, ch));
    }
    if let Some(rest) = name.strip_prefix('T') {
        return match rest.split_once(',') {
            Some((i, j)) => {
                let i: usize = i.parse().map_err(|_| unknown())?;
                let j: usize = j.parse().map_err(|_| unknown())?;
                in_some_chamber(false, |ch| tij(i, j, ch))
            }
            None => {
                let i: usize = rest.parse().map_err(|_| unknown())?;
                in_some_chamber(false, |ch| t0(i, ch))
            }
        };
    }
    if let Some(rest) = name.strip_prefix('P') {
        return match rest.split_once('(') {
            Some((n, r)) => {
                let n: usize = n.parse().map_err(|_| unknown())?;
                let r = r.strip_suffix(')').ok_or_else(unknown)?;
                let j = ROMAN.iter().position(|x| *x == r).ok_or_else(unknown)? + 1;
                in_some_chamber(true, |ch| appendix_chop(n, j, ch))
            }
            None => {
                let n: usize = rest.parse().map_err(|_| unknown())?;
                in_some_chamber(true, |ch| appendix(n, ch))
            }
        };
    }
    Err(unknown())
}

/// All 30 polytopes T̃ᵢ,ⱼ(0).
pub fn t0_family() -> Result<Vec<DelzantPolytope>> {
    let mut out = Vec::new();
    for i in 1..=5 {
        for j in 1..=6 {
            out.push(catalog(&format!("T{i},{j}"))?);
        }
    }
    Ok(out)
}

/// The chopped appendix polytopes used by the relation harvest.
pub const APPENDIX_CHOPS: [(usize, usize); 15] = [
    (6, 1),
    (6, 3),
    (7, 1),
    (7, 3),
    (8, 3),
    (8, 4),
    (8, 6),
    (9, 1),
    (9, 4),
    (9, 5),
    (9, 6),
    (10, 1),
    (10, 2),
    (11, 5),
    (11, 6),
];

pub fn appendix_family() -> Result<Vec<DelzantPolytope>> {
    APPENDIX_CHOPS.iter().map(|(n, j)| catalog(&format!("P{n}({})", ROMAN[j - 1]))).collect()
}

pub fn catalog_names() -> Vec<String> {
    let mut v: Vec<String> = vec!["delta(0)", "delta(1)", "delta(2)", "delta~(0)", "delta~(1)", "delta~(2)"]
        .into_iter()
        .map(String::from)
        .collect();
    v.extend((1..=5).map(|i| format!("T{i}")));
    for i in 1..=5 {
        v.extend((1..=6).map(|j| format!("T{i},{j}")));
    }
    v.extend((6..=11).map(|n| format!("P{n}")));
    v.extend(APPENDIX_CHOPS.iter().map(|(n, j)| format!("P{n}({})", ROMAN[j - 1])));
    v
}

pub fn unit_square(ch: &Chamber) -> DelzantPolytope {
    DelzantPolytope::new(
        "square",
        vec![pt("0", "0"), pt("1", "0"), pt("1", "1"), pt("0", "1")],
        vec![cls("F"), cls("B"), cls("F"), cls("B")],
        ch,
    )
}

/// Vertices pinned at their sample positions, edges labelled by facet class.
pub fn to_dot(p: &DelzantPolytope) -> String {
    let f = |x: &LinForm| p.chamber.eval(x).to_f64().unwrap_or(0.0);
    let mut s = format!("graph \"{}\" {{\n  node [shape=point];\n", p.name);
    for (i, (x, y)) in p.vertices.iter().enumerate() {
        s += &format!("  v{i} [pos=\"{:.4},{:.4}!\", xlabel=\"({x}, {y})\"];\n", 4.0 * f(x), 4.0 * f(y));
    }
    let n = p.len();
    for i in 0..n {
        let label = p.facet_classes.get(i).map(|c| c.to_string()).unwrap_or_default();
        s += &format!("  v{i} -- v{} [label=\"{label}\"];\n", (i + 1) % n);
    }
    s + "}\n"
}
