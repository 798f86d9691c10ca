//! Joint influence of observation subsets in a linear model through Cook's
//! D_I. Under normal errors D_I follows a generalized F law whose weights
//! are the canonical leverages of the deleted rows, with unit degrees of
//! freedom and ν = N - r - k.

use std::io::Read;
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, invalid, Error, Result};
use crate::genf::{stochastic_bounds, GeneralizedF};
use crate::linalg::{least_squares, sym_eigenvalues, thin_qr, Matrix, SymMatrix};
use crate::series::SeriesEvaluation;
use crate::special::student_t_two_sided;

/// Largest number of subsets [`screen_subsets`] enumerates by default.
pub const DEFAULT_SUBSET_CAP: u128 = 1_000_000;

/// Which CSV column holds the response.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ResponseColumn {
    #[default]
    Last,
    /// 0-based column index.
    Index(usize),
    /// Header name; needs `has_header`.
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub has_header: bool,
    pub response: ResponseColumn,
    /// Prepend a column of ones.
    pub intercept: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            has_header: true,
            response: ResponseColumn::Last,
            intercept: true,
        }
    }
}

/// Design matrix X0 (N×k, full column rank), response Y0 and the full-data
/// fit. Observations are addressed by 1-based indices.
#[derive(Debug, Clone)]
pub struct RegressionData {
    x: Matrix,
    y: Vec<f64>,
    q: Matrix,
    beta: Vec<f64>,
    rss: f64,
}

impl RegressionData {
    pub fn new(x: Matrix, y: Vec<f64>) -> Result<Self> {
        let (n, k) = (x.rows(), x.cols());
        if y.len() != n {
            return Err(invalid(format!("{} responses for {n} rows", y.len())));
        }
        if k == 0 {
            return Err(invalid("design matrix has no columns"));
        }
        if n <= k {
            return Err(invalid(format!("need more observations than columns, got N={n}, k={k}")));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(invalid("responses must be finite"));
        }
        let (q, _) = thin_qr(&x)?;
        let fit = least_squares(&x, &y)?;
        Ok(RegressionData {
            x,
            y,
            q,
            beta: fit.beta,
            rss: fit.rss,
        })
    }

    pub fn from_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file, opts)
    }

    pub fn from_reader(reader: impl Read, opts: &CsvOptions) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(opts.has_header)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let response = match &opts.response {
            ResponseColumn::Last => None,
            ResponseColumn::Index(i) => Some(*i),
            ResponseColumn::Name(name) => {
                if !opts.has_header {
                    return Err(invalid("a response column name needs a header row"));
                }
                let headers = rdr.headers().map_err(csv_error)?;
                let pos = headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| invalid(format!("no column named {name:?}")))?;
                Some(pos)
            }
        };
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut y = Vec::new();
        let mut width = None;
        for rec in rdr.records() {
            let rec = rec.map_err(csv_error)?;
            let line = rec.position().map_or(0, |p| p.line());
            let vals = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            line,
                            msg: format!("{f:?} is not a finite number"),
                        })
                })
                .collect::<Result<Vec<f64>>>()?;
            let w = *width.get_or_insert(vals.len());
            if vals.len() != w {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {w} fields, found {}", vals.len()),
                });
            }
            let resp = response.unwrap_or(w - 1);
            if resp >= w {
                return Err(invalid(format!("response column {resp} is out of range for {w} columns")));
            }
            let mut row = Vec::with_capacity(w);
            if opts.intercept {
                row.push(1.0);
            }
            row.extend(vals.iter().enumerate().filter(|(i, _)| *i != resp).map(|(_, v)| *v));
            y.push(vals[resp]);
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(invalid("no data rows"));
        }
        RegressionData::new(Matrix::from_rows(&rows)?, y)
    }

    /// Number of observations N.
    pub fn n(&self) -> usize {
        self.x.rows()
    }

    /// Number of columns k, counting an intercept.
    pub fn k(&self) -> usize {
        self.x.cols()
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn rss(&self) -> f64 {
        self.rss
    }

    /// Diagonal h_ii of the hat matrix.
    pub fn hat_diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.q.row(i).iter().map(|v| v * v).sum()).collect()
    }

    /// Validated 0-based rows for a 1-based subset with r < k.
    fn rows_of(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.len() >= self.k() {
            return Err(invalid(format!(
                "subset size {} must be smaller than k = {}",
                subset.len(),
                self.k()
            )));
        }
        self.any_rows_of(subset)
    }

    fn any_rows_of(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(invalid("subset is empty"));
        }
        if subset.len() >= self.n() {
            return Err(invalid("subset must leave at least one observation"));
        }
        let mut rows = Vec::with_capacity(subset.len());
        for &i in subset {
            if i == 0 || i > self.n() {
                return Err(invalid(format!("observation {i} is outside 1..={}", self.n())));
            }
            rows.push(i - 1);
        }
        let mut sorted = rows.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != rows.len() {
            return Err(invalid("subset has repeated observations"));
        }
        Ok(sorted)
    }

    fn leverages_of(&self, rows: &[usize]) -> Result<Vec<f64>> {
        // Z (X0'X0)⁻¹ Z' = Q_I Q_I' with X0 = Q R
        let qi = self.q.select_rows(rows);
        sym_eigenvalues(&SymMatrix::new(qi.matmul(&qi.transpose())?)?)
    }

    fn cook_of(&self, rows: &[usize]) -> Result<(f64, usize)> {
        let (n, k, r) = (self.n(), self.k(), rows.len());
        if n < r + k + 1 {
            return Err(domain(format!("N - r - k = {} leaves no residual degrees of freedom", n as i64 - r as i64 - k as i64)));
        }
        let nu = n - r - k;
        let keep: Vec<usize> = (0..n).filter(|i| rows.binary_search(i).is_err()).collect();
        let x = self.x.select_rows(&keep);
        let y: Vec<f64> = keep.iter().map(|&i| self.y[i]).collect();
        let fit = least_squares(&x, &y)?;
        let s2 = fit.rss / nu as f64;
        let diff: Vec<f64> = fit.beta.iter().zip(&self.beta).map(|(a, b)| a - b).collect();
        let xd = x.mul_vec(&diff);
        let q: f64 = xd.iter().map(|v| v * v).sum();
        Ok((q / (r as f64 * s2), nu))
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            msg: format!("{other:?}"),
        },
    }
}

/// Eigenvalues of Z (X0'X0)⁻¹ Z' for the rows Z indexed by `subset`,
/// nonincreasing. Unlike the statistics below this accepts r ≥ k.
pub fn canonical_leverages(data: &RegressionData, subset: &[usize]) -> Result<Vec<f64>> {
    data.leverages_of(&data.any_rows_of(subset)?)
}

/// Cook's D_I = (β_I - β)' X'X (β_I - β) / (r s_I²) with X the retained rows
/// and s_I² their residual variance on ν = N - r - k degrees of freedom.
/// Returns (D_I, ν).
pub fn cook_d(data: &RegressionData, subset: &[usize]) -> Result<(f64, usize)> {
    data.cook_of(&data.rows_of(subset)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetReport {
    /// Sorted 1-based observation indices.
    pub subset: Vec<usize>,
    pub leverages: Vec<f64>,
    pub d_stat: f64,
    pub nu: usize,
    pub p_lower: f64,
    pub p_upper: f64,
    pub p_exact: Option<SeriesEvaluation>,
}

fn screen_report(data: &RegressionData, rows: &[usize]) -> Result<SubsetReport> {
    let leverages = data.leverages_of(rows)?;
    if leverages.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(domain(format!("leverages {leverages:?} fall outside (0, 1)")));
    }
    let (d_stat, nu) = data.cook_of(rows)?;
    let b = stochastic_bounds(&leverages, nu as f64, d_stat)?;
    Ok(SubsetReport {
        subset: rows.iter().map(|i| i + 1).collect(),
        leverages,
        d_stat,
        nu,
        p_lower: b.lower,
        p_upper: b.upper,
        p_exact: None,
    })
}

fn add_exact(mut rep: SubsetReport, tol: f64) -> Result<SubsetReport> {
    let ones = vec![1.0; rep.leverages.len()];
    let law = GeneralizedF::new(&rep.leverages, &ones, rep.nu as f64)?;
    rep.p_exact = Some(law.survival(rep.d_stat, tol)?);
    Ok(rep)
}

/// Leverages, D_I, screening bounds and the exact p-value P[W ≥ D_I].
pub fn subset_p_value(data: &RegressionData, subset: &[usize], tol: f64) -> Result<SubsetReport> {
    add_exact(screen_report(data, &data.rows_of(subset)?)?, tol)
}

/// Every size-r subset whose lower bound p_lower is at most `level`, with
/// exact p-values, sorted by exact p-value.
pub fn screen_subsets(data: &RegressionData, r: usize, level: f64, tol: f64) -> Result<Vec<SubsetReport>> {
    screen_subsets_with_cap(data, r, level, tol, DEFAULT_SUBSET_CAP)
}

pub fn screen_subsets_with_cap(
    data: &RegressionData,
    r: usize,
    level: f64,
    tol: f64,
    cap: u128,
) -> Result<Vec<SubsetReport>> {
    if r == 0 || r >= data.k() {
        return Err(invalid(format!("subset size must satisfy 1 <= r < k = {}", data.k())));
    }
    if !(0.0..=1.0).contains(&level) {
        return Err(domain(format!("level must lie in [0, 1], got {level}")));
    }
    let n = data.n();
    let count = binomial(n, r);
    if count > cap {
        return Err(Error::TooManySubsets { n, r, count, cap });
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(r).collect();
    let mut out = subsets
        .par_iter()
        .map(|rows| -> Result<Option<SubsetReport>> {
            let rep = screen_report(data, rows)?;
            if rep.p_lower <= level {
                add_exact(rep, tol).map(Some)
            } else {
                Ok(None)
            }
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| {
        let pa = a.p_exact.map_or(f64::INFINITY, |e| e.value);
        let pb = b.p_exact.map_or(f64::INFINITY, |e| e.value);
        pa.total_cmp(&pb).then_with(|| a.subset.cmp(&b.subset))
    });
    Ok(out)
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r.min(n));
    let mut c: u128 = 1;
    for i in 0..r {
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}

/// Two-sided p-value of the externally studentized residual of the 1-based
/// observation `i`, on N - k - 1 degrees of freedom.
pub fn rstudent_p_value(data: &RegressionData, i: usize) -> Result<f64> {
    let (n, k) = (data.n(), data.k());
    if i == 0 || i > n {
        return Err(invalid(format!("observation {i} is outside 1..={n}")));
    }
    if n < k + 2 {
        return Err(domain("N - k - 1 must be at least 1"));
    }
    let row = i - 1;
    let h: f64 = data.q.row(row).iter().map(|v| v * v).sum();
    if h >= 1.0 - 1e-12 {
        return Err(domain(format!("observation {i} has leverage {h}, too close to one")));
    }
    let fitted: f64 = data.x.row(row).iter().zip(&data.beta).map(|(a, b)| a * b).sum();
    let e = data.y[row] - fitted;
    let dof = (n - k - 1) as f64;
    let s2 = (data.rss - e * e / (1.0 - h)) / dof;
    if e == 0.0 {
        return Ok(1.0);
    }
    let t = e / (s2.max(0.0).sqrt() * (1.0 - h).sqrt());
    student_t_two_sided(t, dof)
}
