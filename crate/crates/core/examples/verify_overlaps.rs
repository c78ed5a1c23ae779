//! Randomized check of every overlap kernel against quadrature.

use mixent::verify_overlaps;

fn main() -> mixent::Result<()> {
    let report = verify_overlaps(500, 1, 1e-8)?;
    for p in &report.pairs {
        println!(
            "{}: max rel error {:.2e} over {} trials",
            p.pair, p.max_rel_error, p.trials
        );
    }
    println!(
        "{}",
        if report.passed() {
            "ok"
        } else {
            "tolerance exceeded"
        }
    );
    Ok(())
}
