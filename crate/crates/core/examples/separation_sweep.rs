//! Separation sweep for every family composition, written as CSV to stdout.
//!
//! cargo run --release --example separation_sweep -- 2 8 > sweeps.csv

use std::io::{stdout, Write};

use mixent::harness::{run_sweep, SweepFamily, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (n, k) = match args[..] {
        [n, k] => (n, k),
        [] => (2, 8),
        _ => return Err("usage: separation_sweep [n K]".into()),
    };
    let mut out = stdout().lock();
    let mut header = true;
    for family in &SweepFamily::ALL[..6] {
        let mut spec = SweepSpec::new(*family, n, k);
        spec.mc_samples = 20_000;
        let csv = run_sweep(&spec)?.to_csv_string();
        let body = if header {
            &csv[..]
        } else {
            csv.split_once('\n').map_or("", |(_, b)| b)
        };
        out.write_all(body.as_bytes())?;
        header = false;
    }
    Ok(())
}
