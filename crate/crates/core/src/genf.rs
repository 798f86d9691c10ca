//! The generalized F law
//!
//! ```text
//! W = ((Σ α_i χ²_{m_i}) / |m|) / (χ²_ν / ν),   α_1 ≥ … ≥ α_r > 0
//! ```
//!
//! evaluated through its chi-square mixture series. With
//! a = ν α_r / |m|, t(w) = w / (a + w) and b = (ν + |m|)/2 the density is
//!
//! ```text
//! h(w) = B0 · B1(w) · Σ c_j (b)_j / (|m|/2)_j · t^j
//! ```
//!
//! and the distribution function is a similar series in the partial sums
//! of c_j. Every evaluation carries a rigorous bound on the truncation
//! error and picks the number of terms adaptively.

use serde::Serialize;

use crate::coeffs::{CoefficientCache, CoefficientMethod, PrefixGuard, WeightConfig};
use crate::error::{domain, invalid, Error, Result};
use crate::series::{CompensatedSum, SeriesEvaluation};
use crate::special::{
    central_f_pdf, central_f_quantile, central_f_sf, gauss_2f1_with_cap, log_gamma,
    reg_inc_beta, HypergeometricArgs, DEFAULT_2F1_TERM_CAP,
};

/// Weights within this relative distance are merged.
pub const MERGE_REL_TOL: f64 = 1e-12;
/// Suggested absolute tolerance for probabilities.
pub const DEFAULT_CDF_TOL: f64 = 1e-4;
pub const DEFAULT_TERM_CAP: usize = 10_000;

/// Default density tolerance at `y`: 1e-4 / y, so that y · e_τ(y) ≤ 1e-4.
pub fn default_pdf_tol(y: f64) -> f64 {
    if y > 0.0 {
        DEFAULT_CDF_TOL / y
    } else {
        DEFAULT_CDF_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenFOptions {
    pub method: CoefficientMethod,
    /// Merge weights equal within [`MERGE_REL_TOL`]. Turning this off keeps
    /// repeated weights as separate entries; the law is the same.
    pub merge: bool,
    /// Largest τ the adaptive loops may reach.
    pub term_cap: usize,
    /// Term cap for each ₂F₁ evaluation inside the bounds.
    pub hyp_term_cap: usize,
}

impl Default for GenFOptions {
    fn default() -> Self {
        GenFOptions {
            method: CoefficientMethod::default(),
            merge: true,
            term_cap: DEFAULT_TERM_CAP,
            hyp_term_cap: DEFAULT_2F1_TERM_CAP,
        }
    }
}

/// A generalized F distribution with its coefficient cache.
///
/// Weights are sorted nonincreasing and weights equal within
/// [`MERGE_REL_TOL`] are merged by adding their degrees of freedom. With a
/// single weight left the law is a scaled central F and no series is used.
#[derive(Debug)]
pub struct GeneralizedF {
    original_alphas: Vec<f64>,
    original_dofs: Vec<f64>,
    cfg: WeightConfig,
    nu: f64,
    m_total: f64,
    a: f64,
    b: f64,
    half_m: f64,
    ln_b0: f64,
    cache: Option<CoefficientCache>,
    opts: GenFOptions,
}

pub type GeneralizedFParams = GeneralizedF;

impl GeneralizedF {
    pub fn new(alphas: &[f64], dofs: &[f64], nu: f64) -> Result<Self> {
        Self::with_options(alphas, dofs, nu, GenFOptions::default())
    }

    pub fn with_options(alphas: &[f64], dofs: &[f64], nu: f64, opts: GenFOptions) -> Result<Self> {
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
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(domain(format!("nu must be positive and finite, got {nu}")));
        }
        for (&a, &m) in alphas.iter().zip(dofs) {
            if !(a > 0.0) || !a.is_finite() {
                return Err(domain(format!("weights must be positive and finite, got {a}")));
            }
            if !(m > 0.0) || !m.is_finite() {
                return Err(domain(format!("degrees of freedom must be positive, got {m}")));
            }
        }
        let mut pairs: Vec<(f64, f64)> = alphas.iter().copied().zip(dofs.iter().copied()).collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (a, m) in pairs {
            match merged.last_mut() {
                Some(last) if opts.merge && (last.0 - a).abs() <= MERGE_REL_TOL * last.0 => {
                    last.1 += m
                }
                _ => merged.push((a, m)),
            }
        }
        let cfg = WeightConfig::new(
            merged.iter().map(|p| p.0).collect(),
            merged.iter().map(|p| p.1).collect(),
        )?;
        let m_total = cfg.dof_total();
        let half_m = 0.5 * m_total;
        let b = 0.5 * (nu + m_total);
        let a = nu * cfg.alpha_min() / m_total;
        let ln_b0 = 0.5 * nu * a.ln() + log_gamma(b)? - log_gamma(half_m)? - log_gamma(0.5 * nu)?;
        let cache = (cfg.len() > 1).then(|| CoefficientCache::new(&cfg, opts.method));
        Ok(GeneralizedF {
            original_alphas: alphas.to_vec(),
            original_dofs: dofs.to_vec(),
            cfg,
            nu,
            m_total,
            a,
            b,
            half_m,
            ln_b0,
            cache,
            opts,
        })
    }

    /// Canonical (sorted, merged) weights.
    pub fn alphas(&self) -> &[f64] {
        self.cfg.alphas()
    }

    /// Degrees of freedom matching [`alphas`](Self::alphas).
    pub fn dofs(&self) -> &[f64] {
        self.cfg.dofs()
    }

    pub fn original_alphas(&self) -> &[f64] {
        &self.original_alphas
    }

    pub fn original_dofs(&self) -> &[f64] {
        &self.original_dofs
    }

    pub fn weights(&self) -> &WeightConfig {
        &self.cfg
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// |m| = Σ m_i.
    pub fn m_total(&self) -> f64 {
        self.m_total
    }

    /// a = ν α_r / |m|.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn ln_b0(&self) -> f64 {
        self.ln_b0
    }

    /// True when all weights merged into one, so W is α·F(|m|, ν).
    pub fn is_central(&self) -> bool {
        self.cache.is_none()
    }

    pub fn options(&self) -> &GenFOptions {
        &self.opts
    }

    pub fn t(&self, y: f64) -> f64 {
        y / (self.a + y)
    }

    /// ln B1(w) = ((|m|-2)/2) ln w - b ln(a + w), for w > 0.
    fn ln_b1(&self, w: f64) -> f64 {
        (self.half_m - 1.0) * w.ln() - self.b * (self.a + w).ln()
    }

    fn prefix(&self, len: usize) -> PrefixGuard<'_> {
        self.cache
            .as_ref()
            .expect("series path used on a central F law")
            .prefix(len)
    }

    /// Coefficient table c_0..c_τ (a single unit mass for a central law).
    pub fn coefficients(&self, tau: usize) -> Result<crate::coeffs::CoefficientTable> {
        match &self.cache {
            Some(cache) => cache.table(tau),
            None => {
                let mut c = vec![0.0; tau + 1];
                c[0] = 1.0;
                Ok(crate::coeffs::CoefficientTable {
                    partial_sums: vec![1.0; tau + 1],
                    c,
                    tail: 0.0,
                })
            }
        }
    }

    fn hyp(&self, a: f64, c: f64, t: f64) -> Result<f64> {
        let e = gauss_2f1_with_cap(&HypergeometricArgs::new(a, 1.0, c, t)?, self.opts.hyp_term_cap)?;
        Ok(e.value + e.error_bound)
    }

    fn check_w(&self, w: f64) -> Result<()> {
        if !(w >= 0.0) {
            return Err(domain(format!("argument must be nonnegative, got {w}")));
        }
        Ok(())
    }

    /// Density at w = 0: zero for |m| > 2, finite for |m| = 2, an error below.
    fn pdf_at_zero(&self) -> Result<SeriesEvaluation> {
        if self.m_total > 2.0 {
            Ok(SeriesEvaluation::exact(0.0))
        } else if self.m_total == 2.0 {
            let c0 = self.cfg.a_const();
            Ok(SeriesEvaluation::exact(c0 * (self.ln_b0 - self.b * self.a.ln()).exp()))
        } else {
            Err(domain("the density diverges at w = 0 when |m| < 2"))
        }
    }

    fn central_pdf(&self, w: f64) -> Result<f64> {
        let alpha = self.cfg.alphas()[0];
        Ok(central_f_pdf(w / alpha, self.m_total, self.nu)? / alpha)
    }

    fn central_cdf(&self, y: f64) -> Result<f64> {
        reg_inc_beta(self.half_m, 0.5 * self.nu, self.t(y))
    }

    /// Density with τ chosen adaptively so that the local bound e_τ(w) is at
    /// most `tol`.
    pub fn pdf_series(&self, w: f64, tol: f64) -> Result<SeriesEvaluation> {
        self.check_w(w)?;
        check_tol(tol)?;
        if w == 0.0 {
            return self.pdf_at_zero();
        }
        if w.is_infinite() {
            return Ok(SeriesEvaluation::exact(0.0));
        }
        if self.is_central() {
            return Ok(SeriesEvaluation::exact(self.central_pdf(w)?));
        }
        self.pdf_loop(w, Some(tol), self.opts.term_cap)
    }

    /// Density partial sum with exactly τ + 1 terms and its local bound.
    pub fn pdf_at_tau(&self, w: f64, tau: usize) -> Result<SeriesEvaluation> {
        self.check_w(w)?;
        if w == 0.0 {
            return self.pdf_at_zero();
        }
        if self.is_central() {
            return Ok(SeriesEvaluation::exact(self.central_pdf(w)?));
        }
        self.pdf_loop(w, None, tau)
    }

    fn pdf_loop(&self, w: f64, tol: Option<f64>, max_tau: usize) -> Result<SeriesEvaluation> {
        let t = self.t(w);
        let ln_t = t.ln();
        let ln_base = self.ln_b0 + self.ln_b1(w);
        // ln of B0 B1 (b)_j/(|m|/2)_j t^j, advanced one step per term
        let mut ln_g = ln_base;
        let mut sum = CompensatedSum::new();
        let mut tau = 0;
        loop {
            let c = self.prefix(tau + 1).c(tau);
            sum.add(c * ln_g.exp());
            let jf = tau as f64;
            let ln_g_next = ln_g + ((self.b + jf) / (self.half_m + jf)).ln() + ln_t;
            let done = tau >= max_tau;
            if tol.is_some() || done {
                let bound = self.pdf_bound_from(tau, ln_g_next, t)?;
                let converged = tol.is_none_or(|tol| bound <= tol);
                if converged || done {
                    return Ok(SeriesEvaluation {
                        value: sum.value(),
                        tau_used: tau,
                        error_bound: bound,
                        converged,
                    });
                }
            }
            ln_g = ln_g_next;
            tau += 1;
        }
    }

    /// Local density bound e_τ(w), the truncation error of the partial sum
    /// through c_τ.
    pub fn pdf_error_bound(&self, w: f64, tau: usize) -> Result<f64> {
        self.check_w(w)?;
        if self.is_central() || w == 0.0 {
            return Ok(0.0);
        }
        let ln_g = self.ln_b0
            + self.ln_b1(w)
            + crate::special::pochhammer_log_ratio(self.b, self.half_m, tau + 1)?
            + (tau + 1) as f64 * self.t(w).ln();
        self.pdf_bound_from(tau, ln_g, self.t(w))
    }

    /// Bound with ln_g = ln[B0 B1 (b)_{τ+1}/(|m|/2)_{τ+1} t^{τ+1}]:
    ///
    /// ```text
    /// e_τ(w) = c* · exp(ln_g) · ₂F₁(b + τ + 1, 1; |m|/2 + τ + 1; t)
    /// ```
    ///
    /// where c* bounds every c_j with j > τ.
    fn pdf_bound_from(&self, tau: usize, ln_g: f64, t: f64) -> Result<f64> {
        let c_star = self.coefficient_sup_after(tau);
        if c_star == 0.0 {
            return Ok(0.0);
        }
        let n = (tau + 1) as f64;
        let f = self.hyp(self.b + n, self.half_m + n, t)?;
        Ok(c_star * ln_g.exp() * f)
    }

    /// An upper bound on sup_{j>τ} c_j: the running maximum of c_{τ+1..J}
    /// together with the tail mass 1 - S_J, which dominates every later c_j.
    pub fn coefficient_sup_after(&self, tau: usize) -> f64 {
        let Some(cache) = &self.cache else {
            return 0.0;
        };
        let limit = tau + 1 + self.opts.term_cap;
        let mut j = tau + 1;
        let mut best = 0.0_f64;
        let mut guard = cache.prefix(j + 1);
        loop {
            if j >= guard.len() {
                drop(guard);
                guard = cache.prefix(2 * j + 1);
            }
            best = best.max(guard.c(j));
            let tail = guard.tail(j);
            if tail <= best {
                return best;
            }
            if j >= limit {
                return best.max(tail);
            }
            j += 1;
        }
    }

    /// Global bound from the tail mass alone,
    /// e_τ = |m| / (α_r (|m| + 2(τ+1))) · (1 - S_τ), valid for |m| ≥ 2.
    pub fn global_bound(&self, tau: usize) -> f64 {
        let tail = match &self.cache {
            Some(cache) => cache.prefix(tau + 1).tail(tau),
            None => 0.0,
        };
        self.m_total / (self.cfg.alpha_min() * (self.m_total + 2.0 * (tau + 1) as f64)) * tail
    }

    /// Smallest τ whose global bound is at most `tol`.
    pub fn global_tau(&self, tol: f64) -> Result<usize> {
        check_tol(tol)?;
        for tau in 0..=self.opts.term_cap {
            if self.global_bound(tau) <= tol {
                return Ok(tau);
            }
        }
        Err(Error::NonConvergence {
            what: "global truncation bound",
            terms: self.opts.term_cap,
        })
    }

    /// Closed-form density for two distinct weights:
    /// A · B0 · B1(w) · ₂F₁(b, m_1/2; |m|/2; u_1 t(w)).
    pub fn pdf_exact_r2(&self, w: f64) -> Result<f64> {
        if self.cfg.len() != 2 {
            return Err(invalid(format!(
                "closed form needs exactly two distinct weights, have {}; use the central F path",
                self.cfg.len()
            )));
        }
        self.check_w(w)?;
        if w == 0.0 {
            return Ok(self.pdf_at_zero()?.value);
        }
        let u1 = self.cfg.u()[0];
        let m1 = self.cfg.dofs()[0];
        let args = HypergeometricArgs::new(self.b, 0.5 * m1, self.half_m, u1 * self.t(w))?;
        let f = gauss_2f1_with_cap(&args, self.opts.hyp_term_cap)?.value;
        Ok((self.cfg.ln_a_const() + self.ln_b0 + self.ln_b1(w)).exp() * f)
    }

    /// Distribution function through the enhanced estimate, with τ chosen
    /// so that the bound e*_τ(y) is at most `tol`. The value is clamped to
    /// [0, 1].
    pub fn cdf_series(&self, y: f64, tol: f64) -> Result<SeriesEvaluation> {
        self.check_w(y)?;
        check_tol(tol)?;
        if let Some(e) = self.cdf_trivial(y)? {
            return Ok(e);
        }
        self.cdf_loop(y, Some(tol), self.opts.term_cap)
    }

    /// Enhanced estimate at a fixed τ with its bound e*_τ(y).
    pub fn cdf_at_tau(&self, y: f64, tau: usize) -> Result<SeriesEvaluation> {
        self.check_w(y)?;
        if let Some(e) = self.cdf_trivial(y)? {
            return Ok(e);
        }
        self.cdf_loop(y, None, tau)
    }

    fn cdf_trivial(&self, y: f64) -> Result<Option<SeriesEvaluation>> {
        if y == 0.0 {
            return Ok(Some(SeriesEvaluation::exact(0.0)));
        }
        if y.is_infinite() {
            return Ok(Some(SeriesEvaluation::exact(1.0)));
        }
        if self.is_central() {
            return Ok(Some(SeriesEvaluation::exact(self.central_cdf(y)?)));
        }
        Ok(None)
    }

    fn cdf_loop(&self, y: f64, tol: Option<f64>, max_tau: usize) -> Result<SeriesEvaluation> {
        let t = self.t(y);
        let ln_t = t.ln();
        // ln K = ln[B0 B1(y) y / (|m|/2)]; q_j = (b)_j / (|m|/2 + 1)_j t^j
        let ln_k = self.ln_b0 + self.ln_b1(y) + y.ln() - self.half_m.ln();
        let mut ln_q = ln_k;
        let mut plain = CompensatedSum::new();
        let mut tau = 0;
        loop {
            let guard = self.prefix(tau + 2);
            let s_tau = guard.partial_sum(tau);
            let tail_next = guard.tail(tau + 1);
            drop(guard);
            plain.add(s_tau * ln_q.exp());
            let jf = tau as f64;
            let ln_q_next = ln_q + ((self.b + jf) / (self.half_m + 1.0 + jf)).ln() + ln_t;
            let done = tau >= max_tau;
            let n = (tau + 1) as f64;
            let completion = ln_q_next.exp() * self.hyp(self.b + n, self.half_m + 1.0 + n, t)?;
            let bound = tail_next * completion;
            let converged = tol.is_none_or(|tol| bound <= tol);
            if (tol.is_some() && converged) || done {
                let value = (plain.value() + completion).clamp(0.0, 1.0);
                return Ok(SeriesEvaluation {
                    value,
                    tau_used: tau,
                    error_bound: bound,
                    converged,
                });
            }
            ln_q = ln_q_next;
            tau += 1;
        }
    }

    /// Local distribution-function bound e*_τ(y).
    pub fn cdf_error_bound(&self, y: f64, tau: usize) -> Result<f64> {
        self.check_w(y)?;
        if self.is_central() || y == 0.0 || y.is_infinite() {
            return Ok(0.0);
        }
        let t = self.t(y);
        let n = (tau + 1) as f64;
        let ln_q = self.ln_b0 + self.ln_b1(y) + y.ln() - self.half_m.ln()
            + crate::special::pochhammer_log_ratio(self.b, self.half_m + 1.0, tau + 1)?
            + n * t.ln();
        let tail = self.prefix(tau + 2).tail(tau + 1);
        Ok(tail * ln_q.exp() * self.hyp(self.b + n, self.half_m + 1.0 + n, t)?)
    }

    /// P[W > y] with the same bound as [`cdf_series`](Self::cdf_series).
    pub fn survival(&self, y: f64, tol: f64) -> Result<SeriesEvaluation> {
        self.check_w(y)?;
        check_tol(tol)?;
        if self.is_central() && y > 0.0 && y.is_finite() {
            let alpha = self.cfg.alphas()[0];
            return Ok(SeriesEvaluation::exact(central_f_sf(y / alpha, self.m_total, self.nu)?));
        }
        let e = self.cdf_series(y, tol)?;
        Ok(SeriesEvaluation {
            value: (1.0 - e.value).max(0.0),
            ..e
        })
    }

    /// y with |cdf(y) - prob| ≤ tol, by bracket doubling from [0, a] and
    /// bisection.
    pub fn quantile(&self, prob: f64, tol: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(domain(format!("quantile requires 0 < p < 1, got {prob}")));
        }
        check_tol(tol)?;
        if self.is_central() {
            return Ok(self.cfg.alphas()[0] * central_f_quantile(prob, self.m_total, self.nu)?);
        }
        let inner = 0.25 * tol;
        let cdf = |y: f64| -> Result<SeriesEvaluation> {
            let e = self.cdf_series(y, inner)?;
            if !e.converged {
                return Err(Error::NonConvergence {
                    what: "cdf series inside quantile",
                    terms: e.tau_used,
                });
            }
            Ok(e)
        };
        let mut lo = 0.0;
        let mut hi = self.a;
        loop {
            let e = cdf(hi)?;
            if (e.value - prob).abs() + e.error_bound <= tol {
                return Ok(hi);
            }
            if e.value >= prob {
                break;
            }
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(domain("quantile bracket overflow"));
            }
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            let e = cdf(mid)?;
            if (e.value - prob).abs() + e.error_bound <= tol {
                return Ok(mid);
            }
            if e.value < prob {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Stochastic p-value interval of the original weights. Every degree of
    /// freedom must be one.
    pub fn stochastic_bounds(&self, y: f64) -> Result<StochasticBounds> {
        if self.original_dofs.iter().any(|&m| m != 1.0) {
            return Err(invalid("stochastic bounds are defined for unit degrees of freedom"));
        }
        stochastic_bounds(&self.original_alphas, self.nu, y)
    }
}

/// p-value interval from the scaled central F laws at the largest weight and
/// at the geometric mean of the weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StochasticBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Bounds on P[W > y] for r unit-dof weights:
/// lower = P[F(r, ν) > y/α*], upper = P[F(r, ν) > y/α_1], α* the geometric mean.
pub fn stochastic_bounds(alphas: &[f64], nu: f64, y: f64) -> Result<StochasticBounds> {
    if alphas.is_empty() {
        return Err(invalid("at least one weight is required"));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(domain(format!("weights must be positive and finite, got {a}")));
    }
    if !(y >= 0.0) {
        return Err(domain(format!("statistic must be nonnegative, got {y}")));
    }
    let r = alphas.len() as f64;
    let a1 = alphas.iter().copied().fold(f64::MIN, f64::max);
    let geo = (alphas.iter().map(|a| a.ln()).sum::<f64>() / r).exp();
    let lower = central_f_sf(y / geo, r, nu)?;
    let upper = central_f_sf(y / a1, r, nu)?;
    Ok(StochasticBounds {
        lower: lower.min(upper),
        upper,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}
