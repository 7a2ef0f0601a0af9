//! Run every lemma-check suite with a small config and print a summary,
//! then one report as CSV.

use qph::lab::{render, run_lemma_suite, ExperimentConfig, Format, SUITES};

fn main() -> qph::Result<()> {
    let mut cfg = ExperimentConfig::default().with_seed(11);
    cfg.sweeps.samples = 5;
    cfg.sweeps.r = vec![2, 3, 4];
    for name in SUITES {
        let report = run_lemma_suite(name, &cfg)?;
        println!("{name:<22} {:>3} cases, {} failed", report.cases.len(), report.failures());
        for c in report.cases.iter().filter(|c| !c.passed) {
            println!("    {}: {}", c.id, c.message.as_deref().unwrap_or(""));
        }
    }
    cfg.sweeps.n = vec![1, 2];
    print!("{}", render(&run_lemma_suite("m0-reconstruction", &cfg)?, Format::Csv)?);
    Ok(())
}
