//! Closed-form bounds for a two-component Gaussian/Laplace mixture as the
//! means move apart.

use mixent::{approximate, Gaussian, Laplacian, MixtureModel};

fn main() -> mixent::Result<()> {
    println!(
        "{:>5} {:>9} {:>9} {:>9} {:>9}",
        "S", "lower", "jensen", "clipped", "upper"
    );
    for s in [0.0, 1.0, 2.0, 4.0, 8.0] {
        let m = MixtureModel::new(
            vec![0.3, 0.7],
            vec![
                Gaussian::isotropic(vec![-s / 2.0, 0.0], 1.0)?.into(),
                Laplacian::new(vec![s / 2.0, 0.0], vec![0.5, 1.5])?.into(),
            ],
        )?;
        let r = approximate(&m)?;
        println!(
            "{s:>5.1} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            r.lower_bits, r.jensen_bits, r.clipped_bits, r.upper_bits
        );
    }
    Ok(())
}
