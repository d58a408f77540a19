use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use thc_core::configurations::{self, catalog as config_catalog, isometry_type, valid_chamber, validate};
use thc_core::homology::{chern, enumerate_p0_classes, pairing, table1};
use thc_core::inflation::{check_table, check_worked, sample_pool, RowCheck};
use thc_core::karshon::named_graph;
use thc_core::liealg::{
    hilbert_modular, hilbert_series, lambda_tilde, loop_space_betti, primes, ranks_by_log, ranks_from_series,
    LiePresentation, EXACT_DEGREE, STATED_R4,
};
use thc_core::polytope::{self, catalog, catalog_names};
use thc_core::relations::{
    check_generator_expressions, derive_xy_relations, display_name, extended_quotient, graph_groups, harvest_linear,
    harvest_samelson, quotient_basis, relations_of, source_names, sources, Projection,
};
use thc_core::scalars::Chamber;
use thc_core::{Error, HomologyClass};

use crate::report;

#[derive(Parser, Debug)]
#[command(name = "thc", about = "Exact computations for circle actions on the three-point blow-up of S2xS2")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classes with p = 0 represented by embedded spheres.
    Table1 {
        #[arg(long, default_value = "e1neg")]
        chamber: String,
    },
    #[command(subcommand)]
    Configs(ConfigsCmd),
    #[command(subcommand)]
    Polytopes(PolytopesCmd),
    #[command(subcommand)]
    Graphs(GraphsCmd),
    #[command(subcommand)]
    Relations(RelationsCmd),
    #[command(subcommand)]
    Ranks(RanksCmd),
    #[command(subcommand)]
    Inflation(InflationCmd),
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
pub enum ConfigsCmd {
    List,
    Validate {
        #[arg(long)]
        id: Option<String>,
        /// Defaults to the first shipped chamber where each configuration exists.
        #[arg(long)]
        chamber: Option<String>,
    },
    RenderDot {
        #[arg(long)]
        id: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolytopesCmd {
    Build {
        #[arg(long)]
        name: String,
    },
    List,
    RenderDot {
        #[arg(long)]
        name: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphsCmd {
    Show {
        #[arg(long)]
        name: String,
    },
    Match {
        #[arg(long, default_value = "t0-family")]
        polytopes: String,
        #[arg(long, default_value_t = 1)]
        combo_bound: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RelationsCmd {
    Derive {
        #[arg(long, default_value = "all")]
        polytopes: String,
        #[arg(long, default_value_t = 2)]
        combo_bound: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RanksCmd {
    Compute {
        /// "lambda-tilde", "free:<n>" or a JSON presentation file.
        #[arg(long, default_value = "lambda-tilde")]
        presentation: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum InflationCmd {
    Check {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        table: Option<u8>,
        /// The negative-inflation cases lowering c1, c2 or c3.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        step: Option<u8>,
        #[arg(long)]
        chamber: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReportCmd {
    All,
}

/// A finished command: rendered output and the exit code.
pub struct Done {
    pub out: String,
    pub code: i32,
}

fn ok(out: String) -> Done {
    Done { out, code: 0 }
}

fn checked(out: String, passed: bool) -> Done {
    Done { out, code: if passed { 0 } else { 1 } }
}

/// Usage-level failures exit 2, everything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unknown(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn chamber(name: &str) -> thc_core::Result<Chamber> {
    Chamber::by_name(name).or_else(|e| sample_pool().into_iter().find(|c| c.name == name).ok_or(e))
}

fn no_dot(f: Format) -> thc_core::Result<()> {
    if f == Format::Dot {
        return Err(Error::Parse("this command has no dot output".into()));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> thc_core::Result<Done> {
    let f = cli.format;
    match &cli.command {
        Command::Table1 { chamber: name } => {
            no_dot(f)?;
            table1_cmd(&chamber(name)?, f)
        }
        Command::Configs(c) => configs_cmd(c, f),
        Command::Polytopes(c) => polytopes_cmd(c, f),
        Command::Graphs(c) => graphs_cmd(c, f),
        Command::Relations(RelationsCmd::Derive { polytopes, combo_bound }) => {
            no_dot(f)?;
            relations_cmd(polytopes, *combo_bound, f)
        }
        Command::Ranks(RanksCmd::Compute { presentation, max_degree }) => {
            no_dot(f)?;
            ranks_cmd(presentation, *max_degree, f)
        }
        Command::Inflation(InflationCmd::Check { table, step, chamber: name }) => {
            no_dot(f)?;
            let only = name.as_deref().map(chamber).transpose()?;
            inflation_cmd(table.map(usize::from), step.map(usize::from), only.as_ref(), f)
        }
        Command::Report(ReportCmd::All) => {
            no_dot(f)?;
            let all = report::run_all();
            let passed = all.iter().all(|o| o.passed);
            let out = match f {
                Format::Json => pretty(&Value::Array(all.iter().map(|o| o.to_json()).collect())),
                _ => all.iter().map(|o| o.line() + "\n").collect(),
            };
            Ok(checked(out, passed))
        }
    }
}

fn table1_cmd(ch: &Chamber, f: Format) -> thc_core::Result<Done> {
    let found: BTreeSet<HomologyClass> = enumerate_p0_classes(ch).into_iter().collect();
    let rows: Vec<(HomologyClass, Option<&str>)> = table1().into_iter().filter(|(c, _)| found.contains(c)).collect();
    let agrees = rows.len() == found.len();
    let out = match f {
        Format::Json => pretty(&json!({
            "chamber": ch.name,
            "classes": rows.iter().map(|(c, cond)| json!({
                "class": c.to_string(),
                "self_intersection": pairing(c, c),
                "chern": chern(c),
                "condition": cond,
            })).collect::<Vec<_>>(),
            "agrees_with_table": agrees,
        })),
        _ => {
            let mut s = format!("{:<12} {:>4} {:>3}  condition\n", "class", "A.A", "c1");
            for (c, cond) in &rows {
                let _ = writeln!(s, "{:<12} {:>4} {:>3}  {}", c.to_string(), pairing(c, c), chern(c), cond.map(|x| format!("{x} > 0")).unwrap_or_default());
            }
            s
        }
    };
    Ok(checked(out, agrees))
}

fn configs_cmd(c: &ConfigsCmd, f: Format) -> thc_core::Result<Done> {
    match c {
        ConfigsCmd::List => {
            no_dot(f)?;
            let all = config_catalog();
            Ok(ok(match f {
                Format::Json => pretty(&Value::Array(
                    all.iter()
                        .map(|c| {
                            json!({
                                "id": c.id,
                                "classes": c.classes.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "reconstructed": c.reconstructed,
                                "isometry": isometry_type(c).map(|t| format!("{t:?}")).unwrap_or_default(),
                            })
                        })
                        .collect(),
                )),
                _ => all
                    .iter()
                    .map(|c| format!("{:<5} {}\n", c.id, c.classes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect(),
            }))
        }
        ConfigsCmd::Validate { id, chamber: name } => {
            no_dot(f)?;
            let fixed = name.as_deref().map(chamber).transpose()?;
            let list = match id {
                Some(id) => vec![configurations::config(id)?],
                None => config_catalog(),
            };
            let mut reports = Vec::new();
            for c in &list {
                match fixed.clone().or_else(|| valid_chamber(c)) {
                    Some(ch) => reports.push(validate(c, &ch)),
                    None => reports.push(thc_core::configurations::ValidationReport {
                        id: c.id.clone(),
                        chamber: "none".into(),
                        failures: vec![(thc_core::configurations::Check::Areas, "no shipped chamber".into())],
                    }),
                }
            }
            let passed = reports.iter().all(|r| r.passed());
            let out = match f {
                Format::Json => pretty(&serde_json::to_value(&reports).expect("json")),
                _ => reports
                    .iter()
                    .map(|r| {
                        let msg: Vec<String> = r.failures.iter().map(|(k, m)| format!("{k:?}: {m}")).collect();
                        format!("{:<5} {:<12} {}\n", r.id, r.chamber, if r.passed() { "ok".into() } else { msg.join("; ") })
                    })
                    .collect(),
            };
            Ok(checked(out, passed))
        }
        ConfigsCmd::RenderDot { id } => Ok(ok(configurations::to_dot(&configurations::config(id)?))),
    }
}

fn polytopes_cmd(c: &PolytopesCmd, f: Format) -> thc_core::Result<Done> {
    match c {
        PolytopesCmd::List => {
            no_dot(f)?;
            let names = catalog_names();
            Ok(ok(match f {
                Format::Json => pretty(&json!(names)),
                _ => names.iter().map(|n| format!("{n}\n")).collect(),
            }))
        }
        PolytopesCmd::Build { name } => {
            no_dot(f)?;
            let p = catalog(name)?;
            let delzant = p.check_delzant();
            let areas = p.check_facet_areas();
            let passed = delzant.is_ok() && areas.is_ok();
            let out = match f {
                Format::Json => pretty(&json!({
                    "polytope": serde_json::to_value(&p).expect("json"),
                    "delzant": delzant.err().unwrap_or_else(|| "ok".into()),
                    "facet_areas": areas.err().unwrap_or_else(|| "ok".into()),
                })),
                _ => {
                    let mut s = format!("{} in {}\n", p.name, p.chamber.name);
                    for (i, (x, y)) in p.vertices.iter().enumerate() {
                        let _ = writeln!(s, "  ({x}, {y})  --{}-->", p.facet_classes[i]);
                    }
                    let _ = writeln!(s, "delzant: {}", if delzant.is_ok() { "ok" } else { "FAILED" });
                    s
                }
            };
            Ok(checked(out, passed))
        }
        PolytopesCmd::RenderDot { name } => Ok(ok(polytope::to_dot(&catalog(name)?))),
    }
}

/// a·x_P + b·y_P, written with the symbol names.
fn projection_label(p: &Projection) -> thc_core::Result<String> {
    let terms = p.action()?;
    let mut s = String::new();
    for (sym, c) in terms.iter().filter(|(_, c)| *c != 0) {
        if !s.is_empty() {
            s += if *c < 0 { " - " } else { " + " };
        } else if *c < 0 {
            s += "-";
        }
        if c.abs() != 1 {
            s += &c.abs().to_string();
        }
        s += sym;
    }
    Ok(s)
}

fn graphs_cmd(c: &GraphsCmd, f: Format) -> thc_core::Result<Done> {
    match c {
        GraphsCmd::Show { name } => {
            let (g, members) = named_graph(name)?;
            Ok(ok(match f {
                Format::Dot => g.to_dot(name),
                Format::Text => format!("{name}: members {members:?}\n{g}\n"),
                Format::Json => pretty(&json!({
                    "name": name,
                    "members": members.iter().map(|(i, j)| format!("T{i},{j}")).collect::<Vec<_>>(),
                    "graph": serde_json::to_value(&g).expect("json"),
                })),
            }))
        }
        GraphsCmd::Match { polytopes, combo_bound } => {
            no_dot(f)?;
            let src = sources(polytopes)?;
            let groups = graph_groups(&src, *combo_bound)?;
            let mut rows = Vec::new();
            for (_, members) in &groups {
                let labels: Vec<String> = members.iter().map(projection_label).collect::<thc_core::Result<_>>()?;
                rows.push(labels);
            }
            Ok(ok(match f {
                Format::Json => pretty(&json!({
                    "polytopes": polytopes,
                    "combo_bound": combo_bound,
                    "groups": rows,
                })),
                _ => rows.iter().map(|r| format!("{{{}}}\n", r.join(", "))).collect(),
            }))
        }
    }
}

fn relations_cmd(set: &str, bound: i64, f: Format) -> thc_core::Result<Done> {
    let src = sources(set)?;
    let harvested = harvest_linear(&src, bound)?;
    let rels = relations_of(&harvested);
    let q = quotient_basis(&rels)?;
    let exprs = check_generator_expressions(&q)?;
    let xy = derive_xy_relations(&rels)?;
    let ext = extended_quotient(&rels)?;
    let sam = harvest_samelson(&rels, &source_names(&src))?;
    let passed = q.dim() == 9 && exprs.iter().all(|(_, ok)| *ok) && sam.rank() == 31;
    let basis: Vec<String> = q.basis.iter().map(|b| display_name(b)).collect();
    let out = match f {
        Format::Json => pretty(&json!({
            "polytopes": set,
            "combo_bound": bound,
            "harvested": harvested.iter().map(|h| json!({
                "relation": h.relation.to_string(),
                "from": [h.from.0.to_string(), h.from.1.to_string()],
            })).collect::<Vec<_>>(),
            "quotient_basis": basis,
            "generator_expressions": exprs.iter().map(|(e, ok)| json!({"expression": e, "holds": ok})).collect::<Vec<_>>(),
            "xy_relations": xy.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "extended_dim": ext.dim(),
            "samelson_rank": sam.rank(),
        })),
        _ => {
            let mut s = format!("{} relations from {} polytopes (bound {bound})\n", rels.len(), src.len());
            let _ = writeln!(s, "quotient basis ({}): {}", q.dim(), basis.join(", "));
            for (e, ok) in &exprs {
                let _ = writeln!(s, "  {} {e}", if *ok { "ok  " } else { "FAIL" });
            }
            let _ = writeln!(s, "xy relations: {} ; {}", xy[0], xy[1]);
            let _ = writeln!(s, "extended quotient dim {}", ext.dim());
            let _ = writeln!(s, "degree-2 relation rank {}", sam.rank());
            s
        }
    };
    Ok(checked(out, passed))
}

fn presentation(spec: &str) -> thc_core::Result<(String, LiePresentation)> {
    if spec == "lambda-tilde" {
        return Ok((spec.into(), lambda_tilde()));
    }
    if let Some(n) = spec.strip_prefix("free:") {
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("generator count {n:?}")))?;
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        return Ok((spec.into(), LiePresentation::free(&refs)));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Unknown(format!("presentation {spec}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    Ok((spec.into(), LiePresentation::from_json(&v)?))
}

fn ranks_cmd(spec: &str, n: usize, f: Format) -> thc_core::Result<Done> {
    let (name, p) = presentation(spec)?;
    let (hilbert, method, used) = if n <= EXACT_DEGREE {
        (hilbert_series(&p, n)?, "exact", Vec::new())
    } else {
        let ps = primes()?;
        (hilbert_modular(&p, n, &ps)?, "modular", ps)
    };
    let ranks = ranks_from_series(&hilbert)?;
    let mut v = json!({
        "presentation": name,
        "max_degree": n,
        "method": method,
        "hilbert": hilbert,
        "ranks": &ranks[1..],
    });
    if !used.is_empty() {
        v["primes"] = json!(used);
    }
    if spec == "lambda-tilde" && n >= 4 {
        let rt = ranks_from_series(&loop_space_betti(4, 4))?;
        let oracle = ranks_by_log(&loop_space_betti(4, 4))?;
        v["r_tilde_4"] = json!({"stated": STATED_R4, "derived": rt[4], "log_oracle": oracle[4]});
    }
    Ok(ok(match f {
        Format::Json => pretty(&v),
        _ => {
            let mut s = format!("{name} up to degree {n} ({method})\nhilbert {hilbert:?}\nranks {:?}\n", &ranks[1..]);
            if let Some(r) = v.get("r_tilde_4") {
                let _ = writeln!(s, "r~4: stated {} derived {} log oracle {}", r["stated"], r["derived"], r["log_oracle"]);
            }
            s
        }
    }))
}

fn inflation_cmd(table: Option<usize>, step: Option<usize>, only: Option<&Chamber>, f: Format) -> thc_core::Result<Done> {
    let mut sections: Vec<(String, Vec<RowCheck>)> = Vec::new();
    let all = table.is_none() && step.is_none();
    for n in 2..=4 {
        if all || table == Some(n) {
            sections.push((format!("table {n}"), check_table(n, only)?));
        }
    }
    for s in 1..=3 {
        if all || step == Some(s) {
            sections.push((format!("step {s}"), check_worked(s, only)?));
        }
    }
    let passed = sections.iter().all(|(_, rows)| rows.iter().all(RowCheck::passed));
    let out = match f {
        Format::Json => pretty(&json!(sections
            .iter()
            .map(|(name, rows)| json!({"section": name, "rows": serde_json::to_value(rows).expect("json")}))
            .collect::<Vec<_>>())),
        _ => {
            let mut s = String::new();
            for (name, rows) in &sections {
                for r in rows {
                    let at: Vec<&str> = r.samples.iter().map(|x| x.chamber.as_str()).collect();
                    let _ = writeln!(s, "[{}] {name}: {}  curves {}  at {}", if r.passed() { "PASS" } else { "FAIL" }, r.label, r.curves.join(", "), at.join(","));
                }
            }
            s
        }
    };
    Ok(checked(out, passed))
}

/// Parses, runs and writes; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(done) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &done.out),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(done.out.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("thc: {e}");
                return 1;
            }
            done.code
        }
        Err(e) => {
            eprintln!("thc: {e}");
            exit_code(&e)
        }
    }
}
