//! Randomized checks of the inequalities behind the decay argument.

use dampwave::lemmas::{best_monotonicity_constant, oscillation_constant, run_lemma_suite, SuiteOptions};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [1.5, 2.0, 3.0, 4.0] {
        let (c, n) = oscillation_constant(1.0, 0.1, p);
        println!("p = {p}: C_p = {:.4}  oscillation constant = {c:.4e} (n = {n})", best_monotonicity_constant(p)?);
    }
    let report = run_lemma_suite(&SuiteOptions {
        seed: 42,
        trials: 10,
        force_violation: false,
    })?;
    print!("{}", report.to_table());
    println!("all pass: {}", report.all_pass());
    Ok(())
}
