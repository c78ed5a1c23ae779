//! Pairwise overlaps `∫ f g` from the closed-form kernels, next to the
//! quadrature oracle.

use mixent::quad::overlap_1d_relative;
use mixent::{log2_overlap, ComponentDensity, Gaussian, Laplacian, UniformBox};

fn main() -> mixent::Result<()> {
    let g: ComponentDensity = Gaussian::isotropic(vec![0.0], 1.0)?.into();
    let l: ComponentDensity = Laplacian::new(vec![1.5], vec![0.8])?.into();
    let u: ComponentDensity = UniformBox::new(vec![-1.0], vec![3f64.sqrt()])?.into();
    let parts = [("G", &g), ("L", &l), ("U", &u)];
    for (i, (na, a)) in parts.iter().enumerate() {
        for (nb, b) in &parts[i..] {
            let closed = log2_overlap(a, b)?.exp2();
            let quad = overlap_1d_relative(a, b, 1e-12)?;
            println!(
                "{na}{nb}: closed {closed:.15e}  quad {:.15e}  ({} evals)",
                quad.value, quad.evaluations
            );
        }
    }
    Ok(())
}
