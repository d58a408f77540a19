// Runs without the libtest harness so each criterion line reaches the log.
use thc_cli::report::run_all;

fn main() {
    let outcomes = run_all();
    assert_eq!(outcomes.len(), 11);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("acceptance: {}/{} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
