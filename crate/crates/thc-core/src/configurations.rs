//! Configurations of embedded spheres: the catalog, validation, blow-ups
//! and the isometry-type split.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{cls, pairing, std_area, virtual_genus, HomologyClass};
use crate::polytope::{t0_family, DelzantPolytope};
use crate::scalars::Chamber;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Configuration {
    pub id: String,
    pub classes: Vec<HomologyClass>,
    pub adjacency: Vec<Vec<i64>>,
    /// Set for entries not printed in the source figures.
    pub reconstructed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum IsometryType {
    Trivial,
    Circle,
    Torus,
}

/// Where the third point is blown up.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Site {
    Intersection(usize, usize),
    Interior(usize),
    Generic,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Check {
    Intersections,
    Areas,
    Genus,
    ExceptionalE3,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub id: String,
    pub chamber: String,
    pub failures: Vec<(Check, String)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn adjacency(classes: &[HomologyClass]) -> Vec<Vec<i64>> {
    classes.iter().map(|a| classes.iter().map(|b| pairing(a, b)).collect()).collect()
}

impl Configuration {
    pub fn new(id: &str, classes: Vec<HomologyClass>) -> Self {
        let adjacency = adjacency(&classes);
        Configuration { id: id.into(), classes, adjacency, reconstructed: false }
    }

    pub fn from_labels(id: &str, labels: &[&str]) -> Self {
        Self::new(id, labels.iter().map(|s| cls(s)).collect())
    }

    pub fn multiset(&self) -> Vec<HomologyClass> {
        let mut v = self.classes.clone();
        v.sort();
        v
    }

    pub fn family(&self) -> usize {
        self.id.split('.').next().and_then(|s| s.parse().ok()).unwrap_or(0)
    }

    pub fn is_derived(&self) -> bool {
        self.id.contains('.')
    }

    /// The pairing-1 graph as a cycle, if it is one.
    pub fn class_cycle(&self) -> Option<Vec<HomologyClass>> {
        let n = self.classes.len();
        let nbrs: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).filter(|j| *j != i && self.adjacency[i][*j] == 1).collect()).collect();
        if n < 3 || nbrs.iter().any(|v| v.len() != 2) {
            return None;
        }
        let mut order = vec![0];
        let mut prev = 0;
        let mut cur = nbrs[0][0];
        while cur != 0 {
            order.push(cur);
            let next = if nbrs[cur][0] == prev { nbrs[cur][1] } else { nbrs[cur][0] };
            prev = cur;
            cur = next;
            if order.len() > n {
                return None;
            }
        }
        (order.len() == n).then(|| order.iter().map(|i| self.classes[*i].clone()).collect())
    }
}

pub fn validate(c: &Configuration, ch: &Chamber) -> ValidationReport {
    let mut failures = Vec::new();
    let n = c.classes.len();
    for i in 0..n {
        for j in i + 1..n {
            let v = pairing(&c.classes[i], &c.classes[j]);
            if !(0..=1).contains(&v) {
                failures.push((Check::Intersections, format!("{} . {} = {v}", c.classes[i], c.classes[j])));
            }
        }
    }
    for a in &c.classes {
        let ar = std_area(a);
        if !ch.positive(&ar) {
            failures.push((Check::Areas, format!("area({a}) = {ar} is not positive")));
        }
        if virtual_genus(a) != crate::scalars::qi(0) {
            failures.push((Check::Genus, format!("g_v({a}) = {}", virtual_genus(a))));
        }
    }
    if c.is_derived() && !c.classes.contains(&HomologyClass::e(3)) {
        failures.push((Check::ExceptionalE3, "E3 missing".into()));
    }
    ValidationReport { id: c.id.clone(), chamber: ch.name.clone(), failures }
}

/// Blows up a point lying on the curves named by `site` and on the extra
/// curves `aux` (classes not in the configuration, such as a fibre F); each
/// curve through the point loses E3, the aux curves join, and E3 is added.
/// `Generic` means the point lies on one B-curve and one F-curve only.
pub fn blow_up_config(c: &Configuration, site: &Site, aux: &[HomologyClass]) -> Result<Configuration> {
    let e3 = HomologyClass::e(3);
    let n = c.classes.len();
    let mut classes = c.classes.clone();
    let through: Vec<usize> = match site {
        Site::Intersection(i, j) => {
            if *i >= n || *j >= n || i == j || pairing(&c.classes[*i], &c.classes[*j]) != 1 {
                return Err(Error::Invalid(format!("no intersection point between curves {i} and {j}")));
            }
            vec![*i, *j]
        }
        Site::Interior(i) => {
            if *i >= n {
                return Err(Error::Invalid(format!("no curve {i}")));
            }
            vec![*i]
        }
        Site::Generic => vec![],
    };
    for i in through {
        classes[i] = classes[i].sub(&e3);
    }
    let mut extra: Vec<HomologyClass> = aux.to_vec();
    if *site == Site::Generic && extra.is_empty() {
        extra = vec![cls("B"), cls("F")];
    }
    classes.push(e3.clone());
    classes.extend(extra.iter().map(|a| a.sub(&e3)));
    Ok(Configuration::new(&c.id, classes))
}

/// Removes E3, restores the classes through the point and drops the curves
/// that stop being negative.
pub fn blow_down_config(c: &Configuration) -> Configuration {
    let e3 = HomologyClass::e(3);
    let classes = c
        .classes
        .iter()
        .filter(|a| **a != e3)
        .map(|a| if a.r(3) == 1 { a.add(&e3) } else { a.clone() })
        .filter(|a| pairing(a, a) < 0)
        .collect();
    Configuration::new(&c.id, classes)
}

pub fn swap_bf(c: &Configuration) -> Configuration {
    let mut out = Configuration::new(&c.id, c.classes.iter().map(HomologyClass::swap_bf).collect());
    out.reconstructed = c.reconstructed;
    out
}

/// The two-point configurations (1)–(6).
pub fn base_config(k: usize) -> Result<Configuration> {
    let labels: &[&str] = match k {
        1 => &["B-E2", "E2", "F-E1", "E1", "B-E1", "F-E2"],
        2 => &["E1", "B-E1-E2", "E2", "F-E2", "F-E1"],
        3 => &["B-E1-E2", "E2", "E1-E2", "F-E1"],
        4 => &["B-E1", "E1-E2", "E2", "F-E1-E2"],
        5 => &["E2", "F-E1-E2", "E1", "B-E1", "B-E2"],
        6 => &["F-E1", "E1-E2", "B-E1", "E2"],
        _ => return Err(Error::Unknown(format!("configuration {k}"))),
    };
    Ok(Configuration::from_labels(&k.to_string(), labels))
}

/// Class lists of configurations 1.x, 2.x and 3.x as drawn.
fn drawn(id: &str) -> Option<&'static [&'static str]> {
    Some(match id {
        "1.1" => &["B-E2", "E2", "F-E1", "E1", "B-E1-E3", "E3", "F-E2-E3"],
        "1.2" => &["B-E2", "E2-E3", "F-E1", "E1", "B-E1", "F-E2-E3", "E3"],
        "1.3" => &["B-E2-E3", "E3", "F-E1", "E1", "B-E1", "F-E2", "E2-E3"],
        "1.4" => &["B-E2-E3", "E2", "E3", "E1", "B-E1", "F-E2", "F-E1-E3"],
        "1.5" => &["B-E2", "E2", "F-E1-E3", "E1-E3", "B-E1", "F-E2", "E3"],
        "1.6" => &["B-E2", "E2", "F-E1", "E3", "B-E1-E3", "F-E2", "E1-E3"],
        "1.7" => &["B-E2", "E2", "F-E1", "E1", "B-E1-E3", "F-E2", "F-E3", "E3"],
        "1.8" => &["B-E2", "E2", "F-E1", "E1", "B-E1", "F-E2-E3", "E3", "B-E3"],
        "1.9" => &["B-E2", "E2-E3", "F-E1", "E1", "B-E1", "F-E2", "E3"],
        "1.10" => &["B-E2-E3", "E2", "F-E1", "E1", "B-E1", "F-E2", "E3", "F-E3"],
        "1.11" => &["B-E2", "E2", "F-E1-E3", "E1", "B-E1", "F-E2", "B-E3", "E3"],
        "1.12" => &["B-E2", "E2", "F-E1", "E1-E3", "B-E1", "F-E2", "E3"],
        "1.13" => &["B-E2", "E2", "F-E1", "E1", "B-E1", "F-E2", "E3", "F-E3", "B-E3"],
        "2.1" => &["E1", "B-E1-E2", "E2", "F-E2-E3", "E3", "F-E1", "B-E3"],
        "2.2" => &["E1", "B-E1-E2", "E2", "F-E2", "E3", "F-E1-E3", "B-E3"],
        "2.3" => &["E1-E3", "B-E1-E2", "E2", "F-E2", "F-E1-E3", "E3"],
        "2.4" => &["E3", "B-E1-E2-E3", "E2", "F-E2", "F-E1", "E1-E3"],
        "2.5" => &["B-E1-E2-E3", "E3", "E2-E3", "F-E2", "F-E1", "E1"],
        "2.6" => &["B-E1-E2", "E2-E3", "E3", "F-E2-E3", "F-E1", "E1"],
        "2.7" => &["E1-E3", "B-E1-E2", "E2", "F-E2", "F-E1", "E3"],
        "2.8" => &["E1", "B-E1-E2-E3", "E2", "F-E2", "F-E1", "E3", "F-E3"],
        "2.9" => &["E1", "B-E1-E2", "E2-E3", "F-E2", "F-E1", "E3"],
        "2.10" => &["E1", "F-E1", "B-E1-E2", "E2", "F-E2", "B-E3", "E3", "F-E3"],
        "3.1" => &["B-E1-E2", "F-E3", "E2", "E1-E2", "F-E1", "B-E3", "E3"],
        "3.2" => &["B-E1-E2", "E2", "E1-E2", "F-E1-E3", "E3", "B-E3"],
        "3.3" => &["B-E1-E2", "E2", "E1-E2-E3", "E3", "F-E1-E3"],
        "3.4" => &["B-E1-E2", "E2-E3", "E3", "E1-E2-E3", "F-E1"],
        "3.5" => &["B-E1-E2-E3", "E3", "E2-E3", "E1-E2", "F-E1"],
        "3.6" => &["E3", "B-E1-E2-E3", "E2", "E1-E2", "F-E1", "F-E3"],
        "3.7" => &["B-E1-E2", "E2-E3", "E1-E2", "F-E1", "E3"],
        "3.8" => &["B-E1-E2", "E2", "E1-E2-E3", "F-E1", "E3"],
        _ => return None,
    })
}

pub const FAMILY_SIZES: [usize; 6] = [13, 10, 8, 8, 10, 8];

/// The marked blow-up points of each base configuration: (site, aux curves).
pub fn sites(family: usize) -> Result<Vec<(Site, Vec<HomologyClass>)>> {
    let base = base_config(family)?;
    let idx = |s: &str| base.classes.iter().position(|c| *c == cls(s)).unwrap();
    let int = |a: &str, b: &str| (Site::Intersection(idx(a), idx(b)), vec![]);
    let int_aux = |a: &str, x: &str| (Site::Interior(idx(a)), vec![cls(x)]);
    let interior = |a: &str| (Site::Interior(idx(a)), vec![]);
    let aux_only = |xs: &[&str]| (Site::Generic, xs.iter().map(|x| cls(x)).collect::<Vec<_>>());
    Ok(match family {
        1 => vec![
            int("B-E1", "F-E2"),
            int("E2", "F-E2"),
            int("B-E2", "E2"),
            int("F-E1", "B-E2"),
            int("E1", "F-E1"),
            int("B-E1", "E1"),
            int_aux("B-E1", "F"),
            int_aux("F-E2", "B"),
            interior("E2"),
            int_aux("B-E2", "F"),
            int_aux("F-E1", "B"),
            interior("E1"),
            aux_only(&["B", "F"]),
        ],
        2 => vec![
            int_aux("F-E2", "B"),
            int_aux("F-E1", "B"),
            int("E1", "F-E1"),
            int("B-E1-E2", "E1"),
            int("B-E1-E2", "E2"),
            int("E2", "F-E2"),
            interior("E1"),
            int_aux("B-E1-E2", "F"),
            interior("E2"),
            aux_only(&["B", "F"]),
        ],
        3 => vec![
            aux_only(&["B", "F"]),
            int_aux("F-E1", "B"),
            int("E1-E2", "F-E1"),
            int("E2", "E1-E2"),
            int("B-E1-E2", "E2"),
            int_aux("B-E1-E2", "F"),
            interior("E2"),
            interior("E1-E2"),
        ],
        4 | 5 => {
            let src_family = if family == 4 { 3 } else { 2 };
            let src = base_config(src_family)?;
            let moved = |i: &usize| idx(&src.classes[*i].swap_bf().to_string());
            sites(src_family)?
                .into_iter()
                .map(|(s, aux)| {
                    let s = match s {
                        Site::Intersection(i, j) => Site::Intersection(moved(&i), moved(&j)),
                        Site::Interior(i) => Site::Interior(moved(&i)),
                        Site::Generic => Site::Generic,
                    };
                    (s, aux.iter().map(HomologyClass::swap_bf).collect())
                })
                .collect()
        }
        6 => vec![
            aux_only(&["B", "F"]),
            int_aux("F-E1", "B"),
            int("F-E1", "E1-E2"),
            int("E1-E2", "E2"),
            interior("E2"),
            int("E1-E2", "B-E1"),
            int_aux("B-E1", "F"),
            interior("E1-E2"),
        ],
        _ => return Err(Error::Unknown(format!("configuration {family}"))),
    })
}

/// Configuration `family.j`.
pub fn config(id: &str) -> Result<Configuration> {
    let unknown = || Error::Unknown(format!("configuration {id}"));
    let Some((f, j)) = id.split_once('.') else {
        return base_config(id.parse().map_err(|_| unknown())?);
    };
    let f: usize = f.parse().map_err(|_| unknown())?;
    let j: usize = j.parse().map_err(|_| unknown())?;
    if !(1..=6).contains(&f) || j == 0 || j > FAMILY_SIZES[f - 1] {
        return Err(unknown());
    }
    let mut c = match f {
        1..=3 => Configuration::from_labels(id, drawn(id).ok_or_else(unknown)?),
        4 => swap_bf(&config(&format!("3.{j}"))?),
        5 => swap_bf(&config(&format!("2.{j}"))?),
        _ => {
            let (site, aux) = sites(6)?.swap_remove(j - 1);
            let mut c = blow_up_config(&base_config(6)?, &site, &aux)?;
            c.reconstructed = true;
            c
        }
    };
    c.id = id.to_string();
    Ok(c)
}

pub fn catalog() -> Vec<Configuration> {
    let mut out = Vec::new();
    for (f, n) in FAMILY_SIZES.iter().enumerate() {
        for j in 1..=*n {
            out.push(config(&format!("{}.{j}", f + 1)).expect("catalog entry"));
        }
    }
    out
}

/// First shipped μ=1 chamber in which the configuration validates.
pub fn valid_chamber(c: &Configuration) -> Option<Chamber> {
    [Chamber::generic(), Chamber::e1neg()].into_iter().find(|ch| validate(c, ch).passed())
}

pub fn isometry_type(c: &Configuration) -> Result<IsometryType> {
    if !c.is_derived() {
        return Err(Error::Unknown(format!("configuration {} is not in the catalog", c.id)));
    }
    if c.id == "1.13" {
        return Ok(IsometryType::Trivial);
    }
    if toric_match(c)?.is_some() {
        return Ok(IsometryType::Torus);
    }
    Ok(IsometryType::Circle)
}

/// Negative facets of a polytope and the pairs of them that are adjacent
/// in the polygon.
pub fn negative_facet_pattern(p: &DelzantPolytope) -> (Vec<HomologyClass>, BTreeSet<(HomologyClass, HomologyClass)>) {
    let n = p.facet_classes.len();
    let neg = |a: &HomologyClass| pairing(a, a) < 0;
    let mut classes: Vec<HomologyClass> = p.facet_classes.iter().filter(|a| neg(a)).cloned().collect();
    classes.sort();
    let mut adj = BTreeSet::new();
    for i in 0..n {
        let (a, b) = (&p.facet_classes[i], &p.facet_classes[(i + 1) % n]);
        if neg(a) && neg(b) {
            adj.insert(if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
        }
    }
    (classes, adj)
}

/// The configuration's classes and its pairing-1 pairs.
pub fn intersection_pattern(c: &Configuration) -> (Vec<HomologyClass>, BTreeSet<(HomologyClass, HomologyClass)>) {
    let mut adj = BTreeSet::new();
    for (i, a) in c.classes.iter().enumerate() {
        for b in &c.classes[i + 1..] {
            if pairing(a, b) == 1 {
                adj.insert(if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
            }
        }
    }
    (c.multiset(), adj)
}

/// Whether the configuration is the negative part of the polytope's facet
/// cycle: same classes, and intersecting pairs are exactly adjacent facets.
pub fn matches_polytope(c: &Configuration, p: &DelzantPolytope) -> bool {
    intersection_pattern(c) == negative_facet_pattern(p)
}

/// Name of a T̃ᵢ,ⱼ(0) polytope realizing the configuration.
pub fn toric_match(c: &Configuration) -> Result<Option<String>> {
    Ok(t0_family()?.into_iter().find(|p| matches_polytope(c, p)).map(|p| p.name))
}

/// The isometry type the case list prescribes.
pub fn expected_isometry_type(id: &str) -> IsometryType {
    let (f, j) = id.split_once('.').unwrap();
    let (f, j): (usize, usize) = (f.parse().unwrap(), j.parse().unwrap());
    if id == "1.13" {
        IsometryType::Trivial
    } else if f <= 5 && j <= 6 {
        IsometryType::Torus
    } else {
        IsometryType::Circle
    }
}

/// Catalog as JSON-ready records keyed by id.
pub fn catalog_map() -> BTreeMap<String, Configuration> {
    catalog().into_iter().map(|c| (c.id.clone(), c)).collect()
}

pub fn to_dot(c: &Configuration) -> String {
    let mut s = format!("graph \"{}\" {{\n", c.id);
    for (i, a) in c.classes.iter().enumerate() {
        s += &format!("  n{i} [label=\"{a} ({})\"];\n", pairing(a, a));
    }
    for i in 0..c.classes.len() {
        for j in i + 1..c.classes.len() {
            if c.adjacency[i][j] != 0 {
                s += &format!("  n{i} -- n{j};\n");
            }
        }
    }
    s + "}\n"
}
