//! Round trip between the JSON mixture format and an in-memory model.

use mixent::mixture_file::{parse_mixture, MixtureFile};
use mixent::{approximate, estimate};

const TEXT: &str = r#"{
  "dimension": 2,
  "weights": [0.25, 0.25, 0.5],
  "components": [
    {"kind": "gaussian", "mean": [0, 0], "cov": {"diag": [1.0, 2.0]}},
    {"kind": "laplacian", "location": [3, 0], "scale": [0.5, 0.5]},
    {"kind": "uniform_box", "center": [0, 3], "half_width": [1, 1]}
  ]
}"#;

fn main() -> mixent::Result<()> {
    let model = parse_mixture(TEXT)?;
    let report = approximate(&model)?;
    let mc = estimate(&model, 100_000, 0)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    println!("mc {:.5} ± {:.5}", mc.entropy_bits, mc.std_error_bits);
    println!("{}", MixtureFile::from_model(&model).to_json());
    Ok(())
}
