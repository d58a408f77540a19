use std::sync::OnceLock;

use thc_core::polytope::tij;
use thc_core::relations::*;
use thc_core::scalars::Chamber;

fn harvest() -> &'static Vec<LinearRelation> {
    static H: OnceLock<Vec<LinearRelation>> = OnceLock::new();
    H.get_or_init(|| relations_of(&harvest_linear(&sources("all").unwrap(), 2).unwrap()))
}

fn samelson() -> &'static SamelsonHarvest {
    static S: OnceLock<SamelsonHarvest> = OnceLock::new();
    S.get_or_init(|| harvest_samelson(harvest(), &source_names(&sources("all").unwrap())).unwrap())
}

fn br(s: &str) -> Sym2Relation {
    parse_bracket(s).unwrap()
}

#[test]
fn first_family_at_bound_one_finds_relation_1() {
    let src: Vec<_> = sources("t0-family").unwrap().into_iter().filter(|(n, _)| n.starts_with("T1,")).collect();
    let rels = relations_of(&harvest_linear(&src, 1).unwrap());
    assert!(in_span(&rels, "y2 - x1 = y1 - x2").unwrap());
    assert!(in_span(&rels, TYPE0[0]).unwrap());
}

#[test]
fn naming_identities_are_harvested() {
    let src = sources("t0-family").unwrap();
    let rels = relations_of(&harvest_linear(&src, 1).unwrap());
    for r in ["x_{1,1} = x_{1,6}", "x_{1,6} = x_{5,5}", "x_{5,5} = x_{5,6}"] {
        assert!(in_span(&rels, r).unwrap(), "{r}");
    }
    assert!(!in_span(&rels, "x_{1,1} = x_{1,2}").unwrap());
}

#[test]
fn every_listed_relation_is_in_the_span() {
    let h = harvest();
    for r in TYPE0.iter().chain(&S_RELATIONS).chain(&R_RELATIONS) {
        assert!(in_span(h, r).unwrap(), "{r}");
    }
    // the y-relation only follows through the B/F swap
    assert!(in_span(h, XY_RELATIONS[0]).unwrap());
    assert!(!in_span(h, XY_RELATIONS[1]).unwrap());
    assert!(in_span(h, R23_SECOND).unwrap());
    assert!(in_span(h, "x_{1,1,1} = y_{1,5} - x_{1,5}").unwrap());
    assert!(in_span(h, "x_{2,2,5} = x_{2,3,5}").unwrap());
}

#[test]
fn listed_duplicates() {
    assert_eq!(R_RELATIONS[8], R_RELATIONS[7]);
    assert_eq!(R_RELATIONS[15], R_RELATIONS[3]);
}

#[test]
fn bound_one_is_not_enough() {
    let rels = relations_of(&harvest_linear(&sources("all").unwrap(), 1).unwrap());
    let all = TYPE0.iter().chain(&S_RELATIONS).chain(&R_RELATIONS);
    assert!(all.clone().any(|r| !in_span(&rels, r).unwrap()));
}

#[test]
fn quotient_has_nine_generators() {
    let q = quotient_basis(harvest()).unwrap();
    assert_eq!(q.dim(), 9);
    let e = |s: &str| q.expr_of(&parse_linear(s).unwrap()).unwrap();
    assert_eq!(q.expr("x6").unwrap(), e("x0 - x2 + x4"));
    assert_eq!(q.expr("y8").unwrap(), e("x4 + z"));
    assert_eq!(q.expr("x0").unwrap(), e("x0"));
    assert!(check_generator_expressions(&q).unwrap().iter().all(|(_, ok)| *ok));
    assert!(q.expr("x99").is_err());
}

#[test]
fn xy_relations_replay() {
    let [x, y] = derive_xy_relations(harvest()).unwrap();
    assert_eq!(x, LinearRelation::parse("x2 + x6 = x0 + x4").unwrap());
    assert_eq!(y, LinearRelation::parse("y0 + y4 = y2 + y6").unwrap());
    assert!(in_span(harvest(), &x.to_string()).unwrap());
    assert!(!in_span(harvest(), &y.to_string()).unwrap());
    let t0_only = relations_of(&harvest_linear(&sources("t0-family").unwrap(), 2).unwrap());
    assert!(derive_xy_relations(&t0_only).is_err());
}

#[test]
fn bracket_examples() {
    let s = samelson();
    let t14 = &s.toric.iter().find(|(p, _)| p == "T1,4").unwrap().1;
    assert_eq!(sym2_rank(&[t14.clone(), br("[x2,y0]")]), 1);
    assert!(!t14.is_zero());

    let t53 = &s.toric.iter().find(|(p, _)| p == "T5,3").unwrap().1;
    let pair = [br("[x1,y0] + [x1,y4] = 0"), br("[x1,y2]")];
    let mut with = pair.to_vec();
    with.push(t53.clone());
    assert_eq!(sym2_rank(&with), 2);
    assert_eq!(sym2_rank(&[t53.clone(), br("[x1,y2]")]), 2);

    let mut all = s.all();
    let r = sym2_rank(&all);
    all.push(br("[x0,x4] - [x0,x2] - [x2,x4]"));
    assert_eq!(sym2_rank(&all), r);
}

#[test]
fn expand_is_symmetric() {
    let a: Vec<_> = (0..9).map(|i| thc_core::scalars::qi(i % 3 - 1)).collect();
    let b: Vec<_> = (0..9).map(|i| thc_core::scalars::qi(i % 2)).collect();
    assert_eq!(samelson_expand(&a, &b), samelson_expand(&b, &a));
    assert_eq!(sym2_dim(9), 45);
}

#[test]
fn degree_two_ledger() {
    let s = samelson();
    assert_eq!(s.rank(), 31);
    let mut listed = theorem_relations();
    assert_eq!(sym2_rank(&listed), 22);
    listed.extend(square_relations(9));
    assert_eq!(sym2_rank(&listed), 31);
    assert!(same_span(&s.all(), &listed));
}

#[test]
fn swap_is_needed_for_the_full_rank() {
    let s = samelson();
    let mut v: Vec<Sym2Relation> = s.toric.iter().map(|(_, r)| r.clone()).collect();
    v.extend(s.extended.iter().cloned());
    v.extend(s.squares.iter().cloned());
    assert_eq!(sym2_rank(&v), 30);
}

#[test]
fn swap_is_an_involution() {
    let q = quotient_basis(harvest()).unwrap();
    let m = swap_matrix(&q).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            let s: thc_core::scalars::Q = (0..9).map(|k| &m[i][k] * &m[k][j]).sum();
            assert_eq!(s, thc_core::scalars::qi((i == j) as i64), "{i},{j}");
        }
    }
}

#[test]
fn harvest_does_not_depend_on_mu() {
    let at = |chs: [Chamber; 2]| {
        let mut src = Vec::new();
        for i in 1..=5 {
            for j in 1..=6 {
                let p = tij(i, j, &chs[0]).or_else(|_| tij(i, j, &chs[1])).unwrap();
                src.push((format!("T{i},{j}"), p));
            }
        }
        relations_of(&harvest_linear(&src, 2).unwrap())
    };
    let one = at([Chamber::generic(), Chamber::e1neg()]);
    let two = at([Chamber::generic_mu2(), Chamber::e1neg_mu2()]);
    assert!(!one.is_empty());
    for r in &two {
        assert!(in_span(&one, &r.to_string()).unwrap(), "{r}");
    }
    for r in &one {
        assert!(in_span(&two, &r.to_string()).unwrap(), "{r}");
    }
}

#[test]
fn parse_errors() {
    assert!(LinearRelation::parse("x0 = x0").is_err());
    assert!(parse_bracket("[x0,w]").is_err());
    assert!(sources("none").is_err());
}
