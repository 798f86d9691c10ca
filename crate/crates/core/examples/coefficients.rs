//! Mixture coefficients from the two recursions and the shared cache.

use genf::coeffs::{coeffs_kjb, coeffs_symfun, CoefficientCache, CoefficientMethod, WeightConfig};

pub fn run_example() -> genf::Result<()> {
    let cfg = WeightConfig::new(vec![4.0, 2.0, 1.0], vec![1.0, 3.0, 2.0])?;
    let a = coeffs_kjb(&cfg, 30)?;
    let b = coeffs_symfun(&cfg, 30)?;
    let worst = a.c.iter().zip(&b.c).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("c_0..c_5 = {:?}", &a.c[..6]);
    println!("largest disagreement over 31 terms: {worst:.2e}");
    println!("tail mass after c_30: {:.3e}", b.tail);

    let cache = CoefficientCache::new(&cfg, CoefficientMethod::SymmetricFunctions);
    let first = cache.prefix(10).len();
    let later = cache.prefix(500).len();
    println!("cache grew from {first} to {later} coefficients without recomputing");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("coefficients example failed");
}
