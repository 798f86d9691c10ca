//! Seeded Monte Carlo draws of W for checking the series numerically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution};
use rayon::prelude::*;

use crate::error::{domain, invalid, Result};
use crate::genf::GeneralizedF;

/// Draws per generator stream. Chunk i always uses stream i, so the output
/// does not depend on how chunks are scheduled.
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub alphas: Vec<f64>,
    pub dofs: Vec<f64>,
    pub nu: f64,
    pub n: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(alphas: Vec<f64>, dofs: Vec<f64>, nu: f64, n: usize, seed: u64) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != dofs.len() {
            return Err(invalid("need matching, nonempty weight and dof lists"));
        }
        if alphas.iter().chain(&dofs).chain([&nu]).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(domain("weights, dofs and nu must be positive and finite"));
        }
        if n == 0 {
            return Err(invalid("sample size must be at least 1"));
        }
        Ok(SamplerConfig { alphas, dofs, nu, n, seed })
    }

    pub fn for_law(law: &GeneralizedF, n: usize, seed: u64) -> Result<Self> {
        SamplerConfig::new(law.original_alphas().to_vec(), law.original_dofs().to_vec(), law.nu(), n, seed)
    }
}

/// n draws of ((Σ α_i χ²_{m_i}) / |m|) / (χ²_ν / ν), identical for equal
/// configurations.
pub fn sample(cfg: &SamplerConfig) -> Result<Vec<f64>> {
    let num: Vec<ChiSquared<f64>> = cfg
        .dofs
        .iter()
        .map(|&m| ChiSquared::new(m).map_err(|e| domain(e.to_string())))
        .collect::<Result<_>>()?;
    let den = ChiSquared::new(cfg.nu).map_err(|e| domain(e.to_string()))?;
    let m_total: f64 = cfg.dofs.iter().sum();
    let chunks = cfg.n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let len = CHUNK.min(cfg.n - i * CHUNK);
            (0..len)
                .map(|_| {
                    let s: f64 = cfg.alphas.iter().zip(&num).map(|(a, d)| a * d.sample(&mut rng)).sum();
                    (s / m_total) / (den.sample(&mut rng) / cfg.nu)
                })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Fraction of samples at or below y.
pub fn empirical_cdf(samples: &[f64], y: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("empirical cdf of an empty sample"));
    }
    let k = samples.iter().filter(|&&s| s <= y).count();
    Ok(k as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::central_f_cdf;

    #[test]
    fn repeatable() {
        let cfg = SamplerConfig::new(vec![2.0, 0.5], vec![2.0, 1.0], 9.0, 150_000, 42).unwrap();
        let a = sample(&cfg).unwrap();
        let b = sample(&cfg).unwrap();
        assert_eq!(a.len(), 150_000);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = sample(&SamplerConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a[..10], c[..10]);
    }

    #[test]
    fn empirical_cdf_edges() {
        let s = [3.0, 1.0, 2.0, 5.0];
        assert_eq!(empirical_cdf(&s, 0.5).unwrap(), 0.0);
        assert_eq!(empirical_cdf(&s, 9.0).unwrap(), 1.0);
        assert_eq!(empirical_cdf(&s, 2.0).unwrap(), 0.5);
        assert!(empirical_cdf(&[], 1.0).is_err());
    }

    #[test]
    fn equal_weights_pass_ks() {
        let n = 100_000;
        let mut s = sample(&SamplerConfig::new(vec![1.5, 1.5], vec![1.0, 2.0], 7.0, n, 11).unwrap()).unwrap();
        s.sort_by(f64::total_cmp);
        let mut d = 0.0_f64;
        for (i, &x) in s.iter().enumerate() {
            let f = central_f_cdf(x / 1.5, 3.0, 7.0).unwrap();
            d = d.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs());
        }
        assert!(d <= 1.95 / (n as f64).sqrt(), "KS statistic {d}");
        let med = s[n / 2];
        assert!((empirical_cdf(&s, med).unwrap() - 0.5).abs() <= 1.0 / n as f64 + 1e-12);
    }
}
