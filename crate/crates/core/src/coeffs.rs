//! Mixture coefficients c_j of the weighted chi-square sum, defined by
//!
//! ```text
//! A · Π (1 - u_i z)^(-m_i/2) = Σ c_j z^j,   u_i = 1 - α_r/α_i,   A = Π (α_r/α_i)^(m_i/2)
//! ```
//!
//! Two independent recursions are provided. [`coeffs_kjb`] uses the power
//! sums d_j = Σ (m_i/2) u_i^j and costs O(τ²); [`coeffs_symfun`] runs an
//! r-term recursion over elementary symmetric functions of the u_i and
//! costs O(τ·r). [`CoefficientCache`] extends either incrementally.

use std::sync::{RwLock, RwLockReadGuard};

use crate::error::{domain, invalid, Result};
use crate::series::{CompensatedSum, DoubleDouble};

/// Tail masses in (-TAIL_CLAMP, 0) are rounding noise and read as 0.
const TAIL_CLAMP: f64 = 1e-14;

/// Positive weights sorted nonincreasing with their degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    alphas: Vec<f64>,
    dofs: Vec<f64>,
}

impl WeightConfig {
    pub fn new(alphas: Vec<f64>, dofs: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(invalid("at least one weight is required"));
        }
        if alphas.len() != dofs.len() {
            return Err(invalid(format!(
                "{} weights but {} degrees of freedom",
                alphas.len(),
                dofs.len()
            )));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(domain(format!("weights must be positive and finite, got {a}")));
        }
        if let Some(m) = dofs.iter().find(|m| !(**m > 0.0) || !m.is_finite()) {
            return Err(domain(format!("degrees of freedom must be positive, got {m}")));
        }
        if alphas.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("weights must be sorted nonincreasing"));
        }
        Ok(WeightConfig { alphas, dofs })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn dofs(&self) -> &[f64] {
        &self.dofs
    }

    pub fn alpha_min(&self) -> f64 {
        self.alphas[self.alphas.len() - 1]
    }

    pub fn dof_total(&self) -> f64 {
        self.dofs.iter().sum()
    }

    /// u_i = 1 - α_r/α_i; the last entry is exactly zero.
    pub fn u(&self) -> Vec<f64> {
        let ar = self.alpha_min();
        let r = self.len();
        self.alphas
            .iter()
            .enumerate()
            .map(|(i, &a)| if i + 1 == r { 0.0 } else { 1.0 - ar / a })
            .collect()
    }

    /// μ_i = m_i / 2.
    pub fn mu(&self) -> Vec<f64> {
        self.dofs.iter().map(|m| 0.5 * m).collect()
    }

    pub fn ln_a_const(&self) -> f64 {
        let ar = self.alpha_min();
        self.alphas
            .iter()
            .zip(&self.dofs)
            .map(|(a, m)| 0.5 * m * (ar / a).ln())
            .sum()
    }

    /// A = Π (α_r/α_i)^(m_i/2) = c_0.
    pub fn a_const(&self) -> f64 {
        self.ln_a_const().exp()
    }
}

/// c_0..c_τ with running partial sums and the remaining mass 1 - Σ c_j.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub c: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub tail: f64,
}

impl CoefficientTable {
    fn from_coefficients(c: Vec<f64>) -> Result<Self> {
        let mut acc = CompensatedSum::new();
        let partial_sums = c
            .iter()
            .map(|&x| {
                acc.add(x);
                acc.value()
            })
            .collect();
        let tail = clamp_tail(acc.one_minus())?;
        Ok(CoefficientTable {
            c,
            partial_sums,
            tail,
        })
    }

    pub fn tau(&self) -> usize {
        self.c.len() - 1
    }
}

fn clamp_tail(t: f64) -> Result<f64> {
    if t >= 0.0 {
        Ok(t)
    } else if t > -TAIL_CLAMP {
        Ok(0.0)
    } else {
        Err(domain(format!(
            "coefficient partial sum exceeds one by {:e}",
            -t
        )))
    }
}

/// Which recursion produces the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientMethod {
    /// r-term recursion over elementary symmetric functions.
    #[default]
    SymmetricFunctions,
    /// Power-sum recursion of Kotz, Johnson and Boyd.
    KotzJohnsonBoyd,
}

/// Elementary symmetric polynomials e_i of `u` and the weighted variants
/// f_i = Σ_{|S|=i} (Σ_{j∈S} μ_j) Π_{j∈S} u_j, for i = 1..=r.
pub fn sym_poly(u: &[f64], mu: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (e, f) = sym_poly_dd(u, mu);
    (
        e.iter().map(|x| x.to_f64()).collect(),
        f.iter().map(|x| x.to_f64()).collect(),
    )
}

fn sym_poly_dd(u: &[f64], mu: &[f64]) -> (Vec<DoubleDouble>, Vec<DoubleDouble>) {
    assert_eq!(u.len(), mu.len(), "u and mu must have the same length");
    let r = u.len();
    let e_full = elementary(u.iter().copied(), r);
    let mut f = vec![DoubleDouble::ZERO; r];
    for j in 0..r {
        // μ_j u_j times the symmetric polynomials of the other variables
        let others = elementary(
            u.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, &x)| x),
            r,
        );
        let w = DoubleDouble::product(mu[j], u[j]);
        for i in 1..=r {
            f[i - 1] = f[i - 1] + w * others[i - 1];
        }
    }
    (e_full[1..].to_vec(), f)
}

/// e_0..e_n of the given variables.
fn elementary(vars: impl Iterator<Item = f64>, n: usize) -> Vec<DoubleDouble> {
    let mut e = vec![DoubleDouble::ZERO; n + 1];
    e[0] = DoubleDouble::from(1.0);
    let mut k = 0;
    for x in vars {
        k += 1;
        for i in (1..=k.min(n)).rev() {
            e[i] = e[i] + e[i - 1] * x;
        }
    }
    e
}

/// Coefficients by the Kotz–Johnson–Boyd recursion:
/// d_j = Σ μ_i u_i^j, c_j = (1/j) Σ_{l<j} d_{j-l} c_l.
pub fn coeffs_kjb(cfg: &WeightConfig, tau: usize) -> Result<CoefficientTable> {
    let mut gen = KjbGenerator::new(cfg);
    let mut c = Vec::with_capacity(tau + 1);
    while c.len() <= tau {
        let next = gen.next(&c);
        c.push(next);
    }
    CoefficientTable::from_coefficients(c)
}

/// Coefficients by the symmetric-function recursion
/// k c_k = Σ_{i=1}^{r} (-1)^{i-1} ((k-i) e_i + f_i) c_{k-i}, c_0 = A.
pub fn coeffs_symfun(cfg: &WeightConfig, tau: usize) -> Result<CoefficientTable> {
    let mut gen = SymfunGenerator::new(cfg);
    let mut c = Vec::with_capacity(tau + 1);
    while c.len() <= tau {
        let next = gen.next(&c);
        c.push(next);
    }
    CoefficientTable::from_coefficients(c)
}

trait Generator: Send + Sync {
    /// c_k for k = prefix.len(), given c_0..c_{k-1}.
    fn next(&mut self, prefix: &[f64]) -> f64;
}

struct KjbGenerator {
    a: f64,
    u: Vec<f64>,
    mu: Vec<f64>,
    // d_1, d_2, ... (index j-1)
    d: Vec<f64>,
    // u_i^j for the latest j
    powers: Vec<f64>,
}

impl KjbGenerator {
    fn new(cfg: &WeightConfig) -> Self {
        let u = cfg.u();
        KjbGenerator {
            a: cfg.a_const(),
            powers: vec![1.0; u.len()],
            u,
            mu: cfg.mu(),
            d: Vec::new(),
        }
    }
}

impl Generator for KjbGenerator {
    fn next(&mut self, prefix: &[f64]) -> f64 {
        let k = prefix.len();
        if k == 0 {
            return self.a;
        }
        while self.d.len() < k {
            let mut s = CompensatedSum::new();
            for ((p, u), mu) in self.powers.iter_mut().zip(&self.u).zip(&self.mu) {
                *p *= u;
                s.add(mu * *p);
            }
            self.d.push(s.value());
        }
        let s: CompensatedSum = (0..k).map(|l| self.d[k - l - 1] * prefix[l]).collect();
        s.value() / k as f64
    }
}

struct SymfunGenerator {
    e: Vec<DoubleDouble>,
    f: Vec<DoubleDouble>,
    // c_k carried in double-double; the alternating recursion cancels
    // heavily when several u_i cluster near one.
    hist: Vec<DoubleDouble>,
}

impl SymfunGenerator {
    fn new(cfg: &WeightConfig) -> Self {
        let (e, f) = sym_poly_dd(&cfg.u(), &cfg.mu());
        SymfunGenerator {
            e,
            f,
            hist: vec![DoubleDouble::from(cfg.a_const())],
        }
    }
}

impl Generator for SymfunGenerator {
    fn next(&mut self, prefix: &[f64]) -> f64 {
        let k = prefix.len();
        while self.hist.len() <= k {
            let n = self.hist.len();
            let mut s = DoubleDouble::ZERO;
            for i in 1..=self.e.len().min(n) {
                let coef = self.e[i - 1] * (n - i) as f64 + self.f[i - 1];
                let term = coef * self.hist[n - i];
                s = if i % 2 == 1 { s + term } else { s - term };
            }
            self.hist.push(s / n as f64);
        }
        // all c_k are nonnegative; cancellation may leave -0 or -ε
        self.hist[k].to_f64().max(0.0)
    }
}

/// Coefficients computed so far, with compensated partial sums.
#[derive(Debug, Default)]
pub struct CoefficientPrefix {
    c: Vec<f64>,
    partial: Vec<CompensatedSum>,
}

impl CoefficientPrefix {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn c(&self, j: usize) -> f64 {
        self.c[j]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    /// Σ_{i≤j} c_i.
    pub fn partial_sum(&self, j: usize) -> f64 {
        self.partial[j].value()
    }

    /// 1 - Σ_{i≤j} c_i, clamped at zero.
    pub fn tail(&self, j: usize) -> f64 {
        self.partial[j].one_minus().max(0.0)
    }

    pub fn table(&self, tau: usize) -> Result<CoefficientTable> {
        let c = self.c[..=tau].to_vec();
        Ok(CoefficientTable {
            partial_sums: (0..=tau).map(|j| self.partial_sum(j)).collect(),
            tail: clamp_tail(self.partial[tau].one_minus())?,
            c,
        })
    }
}

struct CacheState {
    prefix: CoefficientPrefix,
    gen: Box<dyn Generator>,
}

/// Read guard over the computed coefficient prefix.
pub struct PrefixGuard<'a>(RwLockReadGuard<'a, CacheState>);

impl std::ops::Deref for PrefixGuard<'_> {
    type Target = CoefficientPrefix;

    fn deref(&self) -> &CoefficientPrefix {
        &self.0.prefix
    }
}

/// Incrementally extended coefficient sequence. Readers of the computed
/// prefix share a read lock; extension takes the write lock, so raising τ
/// never recomputes the prefix.
pub struct CoefficientCache {
    method: CoefficientMethod,
    state: RwLock<CacheState>,
}

impl std::fmt::Debug for CoefficientCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let len = self.state.read().map(|s| s.prefix.len()).unwrap_or(0);
        f.debug_struct("CoefficientCache")
            .field("method", &self.method)
            .field("computed", &len)
            .finish()
    }
}

impl CoefficientCache {
    pub fn new(cfg: &WeightConfig, method: CoefficientMethod) -> Self {
        let gen: Box<dyn Generator> = match method {
            CoefficientMethod::SymmetricFunctions => Box::new(SymfunGenerator::new(cfg)),
            CoefficientMethod::KotzJohnsonBoyd => Box::new(KjbGenerator::new(cfg)),
        };
        CoefficientCache {
            method,
            state: RwLock::new(CacheState {
                prefix: CoefficientPrefix::default(),
                gen,
            }),
        }
    }

    pub fn method(&self) -> CoefficientMethod {
        self.method
    }

    /// Read access to at least `len` coefficients.
    pub fn prefix(&self, len: usize) -> PrefixGuard<'_> {
        {
            let guard = self.state.read().expect("coefficient cache poisoned");
            if guard.prefix.len() >= len {
                return PrefixGuard(guard);
            }
        }
        {
            let mut guard = self.state.write().expect("coefficient cache poisoned");
            let CacheState { prefix, gen } = &mut *guard;
            let target = len.max(prefix.len() + 64);
            while prefix.c.len() < target {
                let next = gen.next(&prefix.c);
                let mut acc = prefix.partial.last().copied().unwrap_or_default();
                acc.add(next);
                prefix.c.push(next);
                prefix.partial.push(acc);
            }
        }
        PrefixGuard(self.state.read().expect("coefficient cache poisoned"))
    }

    pub fn table(&self, tau: usize) -> Result<CoefficientTable> {
        self.prefix(tau + 1).table(tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// P_0..P_n of Π (1 - u_i z)^(-μ_i) by multiplying out each binomial
    /// series in exact arithmetic.
    fn exact_p(u: &[BigRational], mu: &[BigRational], n: usize) -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); n + 1];
        acc[0] = BigRational::one();
        for (ui, mi) in u.iter().zip(mu) {
            // (μ)_k / k! · u^k
            let mut factor = vec![BigRational::one(); n + 1];
            for k in 1..=n {
                let kk = BigRational::from_integer(BigInt::from(k as i64));
                factor[k] = &factor[k - 1] * (mi + &kk - BigRational::one()) / &kk * ui;
            }
            let mut next = vec![BigRational::zero(); n + 1];
            for i in 0..=n {
                for j in 0..=n - i {
                    next[i + j] += &acc[i] * &factor[j];
                }
            }
            acc = next;
        }
        acc
    }

    fn cfg(alphas: &[f64], dofs: &[f64]) -> WeightConfig {
        WeightConfig::new(alphas.to_vec(), dofs.to_vec()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(WeightConfig::new(vec![], vec![]).is_err());
        assert!(WeightConfig::new(vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(WeightConfig::new(vec![2.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(WeightConfig::new(vec![2.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(WeightConfig::new(vec![2.0, 1.0], vec![1.0]).is_err());
        let c = cfg(&[4.0, 2.0, 1.0], &[1.0, 3.0, 2.0]);
        assert_eq!(c.u(), vec![0.75, 0.5, 0.0]);
        assert!(c.a_const() > 0.0 && c.a_const() <= 1.0);
    }

    #[test]
    fn leading_coefficient_is_a() {
        let c = cfg(&[2.0, 1.0], &[1.0, 1.0]);
        for t in [coeffs_kjb(&c, 0).unwrap(), coeffs_symfun(&c, 0).unwrap()] {
            assert!((t.c[0] - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_weights_give_a_point_mass() {
        let c = cfg(&[1.5, 1.5, 1.5], &[1.0, 2.0, 0.5]);
        for t in [coeffs_kjb(&c, 10).unwrap(), coeffs_symfun(&c, 10).unwrap()] {
            assert_eq!(t.c[0], 1.0);
            assert!(t.c[1..].iter().all(|&x| x == 0.0));
            assert_eq!(t.tail, 0.0);
        }
    }

    #[test]
    fn two_weight_example_against_exact_expansion() {
        let c = cfg(&[2.0, 1.0], &[1.0, 1.0]);
        let p = exact_p(&[rat(1, 2), rat(0, 1)], &[rat(1, 2), rat(1, 2)], 2);
        let a = c.a_const();
        let want: Vec<f64> = p.iter().map(|x| a * x.to_f64().unwrap()).collect();
        assert!((want[1] - 0.176_776_695).abs() < 1e-9);
        assert!((want[2] - 0.066_291_260_7).abs() < 1e-10);
        for t in [coeffs_kjb(&c, 2).unwrap(), coeffs_symfun(&c, 2).unwrap()] {
            for j in 0..=2 {
                assert!((t.c[j] - want[j]).abs() < 1e-15, "c_{j}");
            }
        }
    }

    #[test]
    fn three_weight_example_against_exact_expansion() {
        let c = cfg(&[4.0, 2.0, 1.0], &[1.0, 3.0, 2.0]);
        let n = 40;
        let p = exact_p(
            &[rat(3, 4), rat(1, 2), rat(0, 1)],
            &[rat(1, 2), rat(3, 2), rat(1, 1)],
            n,
        );
        let a = c.a_const();
        let kjb = coeffs_kjb(&c, n).unwrap();
        let sym = coeffs_symfun(&c, n).unwrap();
        for j in 0..=n {
            let want = a * p[j].to_f64().unwrap();
            assert!((kjb.c[j] - want).abs() <= 1e-15 + 1e-13 * want, "kjb c_{j}");
            assert!((sym.c[j] - want).abs() <= 1e-15 + 1e-13 * want, "sym c_{j}");
        }
    }

    #[test]
    fn sym_poly_two_variables() {
        let (e, f) = sym_poly(&[0.5, 0.2], &[1.0, 1.0]);
        assert!((e[0] - 0.7).abs() < 1e-15 && (e[1] - 0.1).abs() < 1e-15);
        assert!((f[0] - 0.7).abs() < 1e-15 && (f[1] - 0.2).abs() < 1e-15);
        let (e, f) = sym_poly(&[0.3, 0.0], &[2.5, 1.0]);
        assert_eq!(e, vec![0.3, 0.0]);
        assert_eq!(f, vec![2.5 * 0.3, 0.0]);
    }

    /// e_i and f_i by enumerating every subset.
    fn sym_poly_bruteforce(u: &[f64], mu: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let r = u.len();
        let mut e = vec![0.0; r];
        let mut f = vec![0.0; r];
        for mask in 1u32..(1 << r) {
            let size = mask.count_ones() as usize;
            let members: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let prod: f64 = members.iter().map(|&i| u[i]).product();
            let msum: f64 = members.iter().map(|&i| mu[i]).sum();
            e[size - 1] += prod;
            f[size - 1] += msum * prod;
        }
        (e, f)
    }

    #[test]
    fn partial_sums_approach_one_from_below() {
        let c = cfg(&[3.0, 1.2, 0.4], &[2.0, 1.0, 5.0]);
        let t = coeffs_symfun(&c, 400).unwrap();
        assert!(t.partial_sums.windows(2).all(|w| w[0] <= w[1]));
        assert!(*t.partial_sums.last().unwrap() <= 1.0 + 1e-15);
        assert!(t.tail >= 0.0 && t.tail < 1e-10);
    }

    #[test]
    fn table1_half_correlation_global_bound() {
        // α = (2, 2, 1/2), unit dofs, ν = 9, y = 3.8625: τ₁ = 28
        let c = cfg(&[2.0, 2.0, 0.5], &[1.0, 1.0, 1.0]);
        let t = coeffs_symfun(&c, 40).unwrap();
        let y = 3.8625;
        let bound = |tau: usize| {
            let tail = 1.0 - t.partial_sums[tau];
            y * 3.0 / (0.5 * (3.0 + 2.0 * (tau as f64 + 1.0))) * tail
        };
        assert!(bound(28) <= 1e-4);
        assert!(bound(27) > 1e-4);
    }

    #[test]
    fn equal_weight_blocks_permute_freely() {
        let a = cfg(&[3.0, 3.0, 1.0], &[1.0, 2.0, 1.5]);
        let b = cfg(&[3.0, 3.0, 1.0], &[2.0, 1.0, 1.5]);
        let ta = coeffs_symfun(&a, 60).unwrap();
        let tb = coeffs_symfun(&b, 60).unwrap();
        for (x, y) in ta.c.iter().zip(&tb.c) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn cache_extension_matches_direct_computation() {
        let c = cfg(&[5.0, 2.0, 1.0, 0.3], &[1.0, 2.0, 3.0, 1.0]);
        for method in [CoefficientMethod::SymmetricFunctions, CoefficientMethod::KotzJohnsonBoyd] {
            let cache = CoefficientCache::new(&c, method);
            let _ = cache.prefix(5);
            let _ = cache.prefix(150);
            let direct = match method {
                CoefficientMethod::SymmetricFunctions => coeffs_symfun(&c, 149).unwrap(),
                CoefficientMethod::KotzJohnsonBoyd => coeffs_kjb(&c, 149).unwrap(),
            };
            let p = cache.prefix(150);
            assert_eq!(&p.coefficients()[..150], &direct.c[..]);
            assert_eq!(cache.table(149).unwrap().tail, direct.tail);
        }
    }

    #[test]
    fn cache_is_shareable_across_threads() {
        let c = cfg(&[4.0, 1.0, 0.5], &[1.0, 1.0, 1.0]);
        let cache = CoefficientCache::new(&c, CoefficientMethod::default());
        let reference = coeffs_symfun(&c, 999).unwrap();
        std::thread::scope(|s| {
            for i in 0..8 {
                let cache = &cache;
                let reference = &reference;
                s.spawn(move || {
                    let n = 100 * (i + 1) + 37;
                    let p = cache.prefix(n);
                    assert_eq!(&p.coefficients()[..n], &reference.c[..n]);
                });
            }
        });
    }

    fn config_strategy() -> impl Strategy<Value = WeightConfig> {
        (2usize..=6)
            .prop_flat_map(|r| {
                (
                    proptest::collection::vec(0.05f64..10.0, r),
                    proptest::collection::vec(0.5f64..8.0, r),
                )
            })
            .prop_map(|(mut a, m)| {
                a.sort_by(|x, y| y.partial_cmp(x).unwrap());
                WeightConfig::new(a, m).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recursions_agree(c in config_strategy()) {
            let kjb = coeffs_kjb(&c, 200).unwrap();
            let sym = coeffs_symfun(&c, 200).unwrap();
            for (x, y) in kjb.c.iter().zip(&sym.c) {
                prop_assert!((x - y).abs() < 1e-13);
            }
            prop_assert!(sym.c.iter().all(|&x| x >= 0.0));
            prop_assert!(kjb.c.iter().all(|&x| x >= 0.0));
            prop_assert!(sym.tail >= 0.0);
        }

        #[test]
        fn sym_poly_matches_subset_enumeration(
            u in proptest::collection::vec(0.0f64..1.0, 1..=6),
            seed in proptest::collection::vec(0.1f64..5.0, 6),
        ) {
            let mu = &seed[..u.len()];
            let (e, f) = sym_poly(&u, mu);
            let (eb, fb) = sym_poly_bruteforce(&u, mu);
            for i in 0..u.len() {
                prop_assert!((e[i] - eb[i]).abs() < 1e-13);
                prop_assert!((f[i] - fb[i]).abs() < 1e-12);
            }
        }
    }
}
