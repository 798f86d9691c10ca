//! Simulated draws of W compared with the series distribution function.

use genf::mc::{empirical_cdf, sample, SamplerConfig};
use genf::GeneralizedF;

pub fn run_example() -> genf::Result<()> {
    let law = GeneralizedF::new(&[3.0, 1.0, 0.25], &[2.0, 1.0, 3.0], 12.0)?;
    let n = 200_000;
    let draws = sample(&SamplerConfig::for_law(&law, n, 2024)?)?;
    let band = |p: f64| 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    println!("{:>6} {:>9} {:>9} {:>8}", "y", "series", "sampled", "3 sd");
    for y in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let p = law.cdf_series(y, 1e-10)?.value;
        println!("{y:>6} {p:>9.5} {:>9.5} {:>8.5}", empirical_cdf(&draws, y)?, band(p));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("monte_carlo example failed");
}
