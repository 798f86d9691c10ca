//! Hotelling's T² when the assumed dispersion Ω differs from the true Σ.
//! The scaled statistic ((N-p)/p) T²/(N-1) then follows a generalized F
//! law with unit degrees of freedom, ν = N - p and weights given by the
//! roots π of |Σ - πΩ| = 0.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, invalid, Error, Result};
use crate::genf::{GenFOptions, GeneralizedF};
use crate::linalg::{cholesky, pencil_eigenvalues, Matrix, SymMatrix};
use crate::series::SeriesEvaluation;
use crate::special::central_f_quantile;

/// Correlation matrix with unit diagonal and constant off-diagonal ρ.
pub fn equicorrelated(p: usize, rho: f64) -> Result<SymMatrix> {
    if p == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let lower = if p > 1 { -1.0 / (p as f64 - 1.0) } else { f64::NEG_INFINITY };
    if !(rho > lower && rho < 1.0) {
        return Err(Error::NotPositiveDefinite {
            pivot: p,
            value: if rho >= 1.0 { 1.0 - rho } else { 1.0 + (p as f64 - 1.0) * rho },
        });
    }
    let mut m = Matrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            m[(i, j)] = if i == j { 1.0 } else { rho };
        }
    }
    SymMatrix::new(m)
}

/// True and assumed dispersions with the sample size.
#[derive(Debug, Clone)]
pub struct HotellingScenario {
    sigma: SymMatrix,
    omega: SymMatrix,
    n: usize,
    pis: Vec<f64>,
}

impl HotellingScenario {
    pub fn new(sigma: SymMatrix, omega: SymMatrix, n: usize) -> Result<Self> {
        let p = sigma.order();
        if omega.order() != p {
            return Err(invalid(format!(
                "Sigma is {p}x{p} but Omega is {0}x{0}",
                omega.order()
            )));
        }
        if n <= p {
            return Err(invalid(format!("sample size N = {n} must exceed the dimension p = {p}")));
        }
        cholesky(&sigma)?;
        let pis = pencil_eigenvalues(&sigma, &omega)?;
        if pis.iter().any(|&x| !(x > 0.0)) {
            return Err(domain(format!("misspecification roots {pis:?} are not all positive")));
        }
        Ok(HotellingScenario { sigma, omega, n, pis })
    }

    pub fn sigma(&self) -> &SymMatrix {
        &self.sigma
    }

    pub fn omega(&self) -> &SymMatrix {
        &self.omega
    }

    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.sigma.order()
    }

    /// Roots π_1 ≥ … ≥ π_p of Ω^{-1/2} Σ Ω^{-1/2}.
    pub fn pis(&self) -> &[f64] {
        &self.pis
    }

    /// ν = N - p.
    pub fn nu(&self) -> usize {
        self.n - self.dimension()
    }

    pub fn law(&self) -> Result<GeneralizedF> {
        self.law_with(GenFOptions::default())
    }

    pub fn law_with(&self, opts: GenFOptions) -> Result<GeneralizedF> {
        let ones = vec![1.0; self.pis.len()];
        GeneralizedF::with_options(&self.pis, &ones, self.nu() as f64, opts)
    }

    /// Central F critical value F(1 - level; p, N - p) of the nominal test.
    pub fn critical_value(&self, level: f64) -> Result<f64> {
        central_f_quantile(1.0 - level, self.dimension() as f64, self.nu() as f64)
    }
}

/// P[((N-p)/p) T²/(N-1) ≥ y] under the scenario.
pub fn misspecified_tail(s: &HotellingScenario, y: f64, tol: f64) -> Result<SeriesEvaluation> {
    s.law()?.survival(y, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub rho: f64,
    /// Smallest τ whose global density bound satisfies y e_τ ≤ target.
    pub tau1: usize,
    /// Smallest τ with y e_τ(y) ≤ target for the local density bound.
    pub tau2: usize,
    /// Smallest τ with e*_τ(y) ≤ target for the distribution function.
    pub tau3: usize,
    pub tail: f64,
    pub tail_error_bound: f64,
}

pub const TABLE1_P: usize = 3;
pub const TABLE1_N: usize = 12;

/// Critical value of the nominal 5% test with p = 3, N = 12, rounded to four
/// decimals.
pub fn table1_critical_value() -> Result<f64> {
    let s = HotellingScenario::new(
        SymMatrix::identity(TABLE1_P),
        SymMatrix::identity(TABLE1_P),
        TABLE1_N,
    )?;
    Ok((s.critical_value(0.05)? * 1e4).round() / 1e4)
}

/// Type I error of the nominal 5% test when Σ = I but Ω is equicorrelated
/// with ρ = 0, 0.1, …, 0.9, together with the term counts each bound needs
/// to reach `target`.
pub fn table1(target: f64) -> Result<Vec<Table1Row>> {
    let y = table1_critical_value()?;
    let rhos: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    rhos.par_iter()
        .map(|&rho| table1_row(rho, y, target))
        .collect()
}

pub fn table1_row(rho: f64, y: f64, target: f64) -> Result<Table1Row> {
    let s = HotellingScenario::new(
        SymMatrix::identity(TABLE1_P),
        equicorrelated(TABLE1_P, rho)?,
        TABLE1_N,
    )?;
    // term counts on the separate, unmerged weights
    let law = s.law_with(GenFOptions {
        merge: false,
        ..GenFOptions::default()
    })?;
    let cap = law.options().term_cap;
    let tau1 = law.global_tau(target / y)?;
    let tau2 = first_tau(cap, "local density bound", |t| Ok(y * law.pdf_error_bound(y, t)? <= target))?;
    let tau3 = first_tau(cap, "local distribution bound", |t| Ok(law.cdf_error_bound(y, t)? <= target))?;
    let unmerged = law.survival(y, 1e-10)?;
    let merged = s.law()?.survival(y, 1e-10)?;
    if (unmerged.value - merged.value).abs() > 1e-9 {
        return Err(domain(format!(
            "merged and unmerged tails disagree at rho = {rho}: {} vs {}",
            merged.value, unmerged.value
        )));
    }
    Ok(Table1Row {
        rho,
        tau1,
        tau2,
        tau3,
        tail: merged.value,
        tail_error_bound: merged.error_bound,
    })
}

fn first_tau(cap: usize, what: &'static str, mut ok: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    for t in 0..=cap {
        if ok(t)? {
            return Ok(t);
        }
    }
    Err(Error::NonConvergence { what, terms: cap })
}

/// Reads a square symmetric matrix from CSV: numbers only, `#` comments.
pub fn load_square_matrix(path: impl AsRef<Path>) -> Result<SymMatrix> {
    read_square_matrix(std::fs::File::open(path)?)
}

pub fn read_square_matrix(reader: impl Read) -> Result<SymMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("{f:?} is not a finite number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, row));
    }
    let n = rows.len();
    if n == 0 {
        return Err(invalid("matrix file has no rows"));
    }
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse {
            line: *line,
            msg: format!("expected {n} entries for a square matrix, found {}", row.len()),
        });
    }
    SymMatrix::from_rows(&rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>())
}
