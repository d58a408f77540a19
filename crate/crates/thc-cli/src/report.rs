//! The acceptance pipeline: one check per criterion, each with a short
//! detail line.

use std::collections::BTreeSet;
use std::time::Instant;

use thc_core::configurations::{base_config, blow_down_config, blow_up_config, config, matches_polytope, sites};
use thc_core::homology::{
    all_branches, d_class, d_invariants, d_invariants_direct, enumerate_p0_classes, exception_list, unlisted_exceptions, negative_pairs, table1,
};
use thc_core::inflation::{check_table, check_worked, class_at, closed_form_e1e3, verify_recipe};
use thc_core::karshon::{named_graph, project, NAMED_GRAPHS};
use thc_core::liealg::{
    bracket_indices, convolved_hilbert, hilbert_modular, hilbert_series, lambda_tilde, lie_ranks, loop_space_betti,
    pbw_series_from_ranks, pi2_basis_check, predicted_hilbert, ranks_by_log, ranks_from_series, stabilizer_ranks,
    DEFAULT_PRIMES, PI2_BASIS, STATED_R4, TWO_BLOWUP_RANKS,
};
use thc_core::polytope::{catalog, cycles_equal, Mat2};
use thc_core::relations::{
    check_generator_expressions, derive_xy_relations, harvest_linear, harvest_samelson, in_span, quotient_basis,
    relations_of, same_span, source_names, sources, square_relations, sym2_rank, theorem_relations, LinearRelation,
    GENERATORS, R23_SECOND, R_RELATIONS, S_RELATIONS, TYPE0, XY_RELATIONS,
};
use thc_core::scalars::{q, qi, Chamber, LinForm};
use thc_core::{HomologyClass, Result};

pub const NAMES: [&str; 11] = [
    "table1",
    "d-invariants",
    "exception-sweep",
    "toric-configurations",
    "named-graphs",
    "relation-harvest",
    "samelson-ledger",
    "hilbert-series",
    "rank-pipeline",
    "inflation-tables",
    "property-sweeps",
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<22} {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.millis
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "millis": self.millis as u64,
        })
    }
}

pub fn run(id: usize) -> Outcome {
    let t = Instant::now();
    let res = match id {
        1 => table1_check(),
        2 => d_invariant_check(),
        3 => exception_check(),
        4 => toric_check(),
        5 => graph_check(),
        6 => harvest_check(),
        7 => samelson_check(),
        8 => hilbert_check(),
        9 => rank_check(),
        10 => inflation_check(),
        11 => property_check(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { id, name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("?"), passed, detail, millis: t.elapsed().as_millis() }
}

/// All criteria, run on parallel threads and returned in order.
pub fn run_all() -> Vec<Outcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = (1..=NAMES.len()).map(|i| s.spawn(move || run(i))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    })
}

type Check = Result<(bool, String)>;

fn table1_check() -> Check {
    let listed: BTreeSet<HomologyClass> = table1().into_iter().map(|(a, _)| a).collect();
    let e1neg: BTreeSet<HomologyClass> = enumerate_p0_classes(&Chamber::e1neg()).into_iter().collect();
    let generic: BTreeSet<HomologyClass> = enumerate_p0_classes(&Chamber::generic()).into_iter().collect();
    let mut without = listed.clone();
    without.remove(&HomologyClass::new(0, 0, [-1, 1, 1]));
    let ok = listed.len() == 15 && e1neg == listed && generic == without;
    Ok((ok, format!("e1neg {} classes, generic {}", e1neg.len(), generic.len())))
}

fn d_invariant_check() -> Check {
    let mut n = 0;
    for i in -3..=12i64 {
        let js: Vec<Option<usize>> = match (-i).rem_euclid(4) {
            1 | 2 => (1..=3).map(Some).collect(),
            _ => vec![None],
        };
        for j in js {
            let c = d_class(i, j)?;
            if d_invariants(i) != d_invariants_direct(&c) {
                return Ok((false, format!("D_{i} ({j:?}) disagrees")));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} classes agree")))
}

fn exception_check() -> Check {
    let listed: BTreeSet<String> = exception_list()
        .into_iter()
        .flat_map(|(b, cs)| cs.into_iter().map(move |c| format!("{b:?} {c}")))
        .collect();
    let listed_branches: BTreeSet<String> = exception_list().iter().map(|(b, _)| format!("{b:?}")).collect();
    let found: BTreeSet<String> = negative_pairs(-2..=2)
        .into_iter()
        .map(|(b, c)| format!("{b:?} {c}"))
        .filter(|s| listed_branches.iter().any(|b| s.starts_with(&format!("{b} "))))
        .collect();
    let extra: BTreeSet<String> = unlisted_exceptions().into_iter().map(|(b, c)| format!("{b:?} {c}")).collect();
    let expected: BTreeSet<String> = listed.union(&extra).cloned().collect();
    let ok = found == expected;
    Ok((
        ok,
        format!(
            "{} listed pairs negative, {} unlisted ({}), {} found over {} branches",
            listed.intersection(&found).count(),
            extra.len(),
            extra.iter().cloned().collect::<Vec<_>>().join(", "),
            found.len(),
            all_branches().len()
        ),
    ))
}

/// The configuration realized by T̃ᵢ,ⱼ(0): i.j, with j permuted by (2 6)(3 5)
/// in families 4 and 5.
pub fn config_of_polytope(i: usize, j: usize) -> String {
    let j = if i >= 4 {
        match j {
            2 => 6,
            6 => 2,
            3 => 5,
            5 => 3,
            _ => j,
        }
    } else {
        j
    };
    format!("{i}.{j}")
}

fn toric_check() -> Check {
    for i in 1..=5 {
        for j in 1..=6 {
            let p = catalog(&format!("T{i},{j}"))?;
            if let Err(e) = p.check_delzant().and_then(|_| p.check_facet_areas()) {
                return Ok((false, format!("{}: {e}", p.name)));
            }
            let c = config(&config_of_polytope(i, j))?;
            if !matches_polytope(&c, &p) {
                return Ok((false, format!("{} does not realize {}", p.name, c.id)));
            }
        }
    }
    Ok((true, "30 polytopes realize their configurations".into()))
}

fn graph_check() -> Check {
    let mut n = 0;
    for name in NAMED_GRAPHS {
        let (g, members) = named_graph(name)?;
        let xi = if name.starts_with('x') { (1, 0) } else { (0, 1) };
        for (i, j) in members {
            if project(&catalog(&format!("T{i},{j}"))?, xi)?.encode() != g.encode() {
                return Ok((false, format!("{name} differs from the projection of T{i},{j}")));
            }
            n += 1;
        }
    }
    Ok((true, format!("24 graphs, {n} member projections equal label for label")))
}

fn harvest_check() -> Check {
    let src = sources("all")?;
    let rels = relations_of(&harvest_linear(&src, 2)?);
    let listed: Vec<&str> = TYPE0.iter().chain(&S_RELATIONS).chain(&R_RELATIONS).copied().chain([R23_SECOND, XY_RELATIONS[0]]).collect();
    let mut missing = Vec::new();
    for r in &listed {
        if !in_span(&rels, r)? {
            missing.push(r.to_string());
        }
    }
    let xy = derive_xy_relations(&rels)?;
    let want = [LinearRelation::parse(XY_RELATIONS[0])?, LinearRelation::parse(XY_RELATIONS[1])?];
    let quot = quotient_basis(&rels)?;
    let exprs = check_generator_expressions(&quot)?;
    let bad_expr = exprs.iter().filter(|(_, ok)| !ok).count();
    let ok = missing.is_empty() && xy == want && quot.dim() == 9 && bad_expr == 0;
    Ok((
        ok,
        format!(
            "{} relations harvested, {} listed missing, quotient dim {}, {}/{} expressions",
            rels.len(),
            missing.len(),
            quot.dim(),
            exprs.len() - bad_expr,
            exprs.len()
        ),
    ))
}

fn samelson_check() -> Check {
    let src = sources("all")?;
    let rels = relations_of(&harvest_linear(&src, 2)?);
    let h = harvest_samelson(&rels, &source_names(&src))?;
    let mut listed = theorem_relations();
    listed.extend(square_relations(GENERATORS.len()));
    let p = lambda_tilde();
    let pi2 = pi2_basis_check(&p, &bracket_indices(&p, &PI2_BASIS)?);
    let ok = h.rank() == 31 && sym2_rank(&listed) == 31 && same_span(&h.all(), &listed) && pi2;
    Ok((ok, format!("harvested rank {}, listed rank {}, pi2 basis {}", h.rank(), sym2_rank(&listed), pi2)))
}

fn hilbert_check() -> Check {
    let p = lambda_tilde();
    let h4 = hilbert_series(&p, 4)?;
    let want = vec![1, 9, 50, 231, 979];
    let h5 = hilbert_modular(&p, 5, &DEFAULT_PRIMES)?;
    let ok = h4 == want && predicted_hilbert(4) == want && convolved_hilbert(4) == want && h5[5] == 3960 && predicted_hilbert(5)[5] == 3960;
    Ok((ok, format!("exact {h4:?}, modular degree 5 = {}", h5[5])))
}

fn rank_check() -> Check {
    let p = lambda_tilde();
    let ranks = lie_ranks(&p, 4)?;
    let rt = ranks_from_series(&loop_space_betti(4, 4))?;
    let oracle = ranks_by_log(&loop_space_betti(4, 4))?;
    let prop = stabilizer_ranks(&TWO_BLOWUP_RANKS, &rt[1..], 4)?;
    let m5 = ranks_from_series(&loop_space_betti(5, 1))?;
    let cor = stabilizer_ranks(&ranks[1..], &m5[1..], 1)?;
    let torus = stabilizer_ranks(&[2, 0], &rt[1..3], 2)?;
    let sum1 = stabilizer_ranks(&[3], &rt[1..2], 1)?;
    let ok = ranks[1..] == [9, 14, 21, 55]
        && prop == [9, 14, 21, 55]
        && rt == oracle
        && rt[4] == 45
        && cor == [14]
        && torus == [6, 9]
        && sum1 == [7];
    Ok((
        ok,
        format!(
            "ranks {:?}; r~4 = {} (log oracle {}, stated {STATED_R4}); X5 pi1 {}; torus case {:?}; c1+c2=1 rank {}",
            &ranks[1..],
            rt[4],
            oracle[4],
            cor[0],
            torus,
            sum1[0]
        ),
    ))
}

fn inflation_check() -> Check {
    let mut rows = 0;
    let mut samples = 0;
    for n in 2..=4 {
        for r in check_table(n, None)? {
            if !r.passed() {
                return Ok((false, format!("table {n} row {} fails", r.label)));
            }
            rows += 1;
            samples += r.samples.len();
        }
    }
    for step in 1..=3 {
        for r in check_worked(step, None)? {
            if !r.passed() {
                return Ok((false, format!("step {step} case {} fails", r.label)));
            }
            rows += 1;
            samples += r.samples.len();
        }
    }
    let curves: Vec<HomologyClass> = ["B+F-E2", "B+F", "E1-E3"].iter().map(|s| HomologyClass::parse(s)).collect::<Result<_>>()?;
    let start = class_at(&[qi(1), q(1, 2), q(3, 10), q(1, 5)]);
    let target = class_at(&Chamber::generic().sample);
    let sol = verify_recipe(&start, &target, &curves)?;
    let (e, b, a) = closed_form_e1e3([&q(2, 5), &q(3, 10), &q(1, 5)], &q(1, 2));
    let closed = sol.normalized == vec![b.clone(), e.clone(), a.clone()] && (e, b, a) == (q(7, 60), q(1, 20), q(1, 35));
    Ok((closed, format!("{rows} rows over {samples} samples; closed form e=7/60 b=1/20 a=1/35 {}", if closed { "matches" } else { "differs" })))
}

fn matrices() -> Vec<Mat2> {
    vec![[[1, 0], [0, 1]], [[0, -1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [0, -1]], [[2, 1], [1, 1]], [[1, -1], [1, 0]]]
}

fn property_check() -> Check {
    let mut cases = 0usize;
    // PBW round trip on every rank vector in a small box.
    for code in 0..5usize.pow(4) {
        let mut r = vec![0i64];
        let mut c = code;
        for _ in 0..4 {
            r.push((c % 5) as i64);
            c /= 5;
        }
        if ranks_from_series(&pbw_series_from_ranks(&r))? != r {
            return Ok((false, format!("PBW round trip fails at {r:?}")));
        }
        cases += 1;
    }
    // Canonical form: translation and flip invariance, and reflexive/symmetric
    // equivalence on the named graphs.
    let shifts = ["0", "1", "-1", "c1", "mu-c2", "2c3-1", "1/2", "-mu", "c1+c2", "-3c3"];
    for name in NAMED_GRAPHS {
        let (g, _) = named_graph(name)?;
        for s in shifts {
            let h = g.translate(&LinForm::parse(s)?);
            if h.canonical() != g.canonical() || !h.flip().equivalent(&g) || !g.equivalent(&h.flip()) {
                return Ok((false, format!("canonical form of {name} moves under {s}")));
            }
            cases += 1;
        }
    }
    // Configurations: blowing up a two-point configuration and down again.
    for k in 1..=6 {
        let base = base_config(k)?;
        for (site, aux) in sites(k)? {
            let down = blow_down_config(&blow_up_config(&base, &site, &aux)?);
            if down.multiset() != base.multiset() {
                return Ok((false, format!("configuration ({k}) does not return from {site:?}")));
            }
            cases += 1;
        }
    }
    // Polytopes: collapsing an exceptional facet and chopping it back.
    for i in 1..=5 {
        for j in 1..=6 {
            let p = catalog(&format!("T{i},{j}"))?;
            for f in 0..p.len() {
                let Ok(down) = p.blow_down(f) else { continue };
                let cap = p.edge_data(f)?.length;
                let v = down.vertices.iter().position(|w| !p.vertices.contains(w)).expect("collapsed vertex");
                let up = down.blow_up_vertex(v, &cap)?;
                if !cycles_equal(&up.vertices, &p.vertices) || !cycles_equal(&up.facet_classes, &p.facet_classes) {
                    return Ok((false, format!("{} facet {f} does not round trip", p.name)));
                }
                cases += 1;
            }
        }
    }
    // Projection covariance: the graph of ξ on M·P is the graph of Mᵀξ on P.
    for i in 1..=5 {
        for j in 1..=6 {
            let p = catalog(&format!("T{i},{j}"))?;
            for m in matrices() {
                let mp = p.sl2z_apply(m)?;
                for xi in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)] {
                    let mt = (m[0][0] * xi.0 + m[1][0] * xi.1, m[0][1] * xi.0 + m[1][1] * xi.1);
                    if project(&mp, xi)?.encode() != project(&p, mt)?.encode() {
                        return Ok((false, format!("covariance fails for {} under {m:?} at {xi:?}", p.name)));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok((cases >= 1000, format!("{cases} cases")))
}
