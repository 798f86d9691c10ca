//! Small dense linear algebra: Cholesky, Householder least squares,
//! Jacobi eigenvalues of symmetric matrices and of symmetric pencils.

use crate::error::{invalid, Error, Result};

const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_REL_TOL: f64 = 1e-12;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("rows have different lengths"));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rows `idx` in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// X'X as a symmetric matrix.
    pub fn gram(&self) -> SymMatrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                for j in 0..=i {
                    g[(i, j)] += row[i] * row[j];
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                g[(j, i)] = g[(i, j)];
            }
        }
        SymMatrix(g)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Square symmetric matrix. Construction symmetrizes exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Accepts a square matrix whose asymmetry is within 1e-10 relative and
    /// replaces it by (A + A')/2.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(invalid(format!("matrix is {}x{}, not square", m.rows, m.cols)));
        }
        let scale = m.data.iter().fold(0.0_f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
        let mut s = m;
        for i in 0..s.rows {
            for j in 0..i {
                let (a, b) = (s[(i, j)], s[(j, i)]);
                if (a - b).abs() > 1e-10 * scale {
                    return Err(invalid(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
                let avg = 0.5 * (a + b);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        Ok(SymMatrix(s))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SymMatrix::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        SymMatrix(m)
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.order()).map(|i| self.0[(i, i)]).sum()
    }

    /// M A M' for a square M of matching order.
    pub fn congruence(&self, m: &Matrix) -> Result<SymMatrix> {
        let p = m.matmul(&self.0)?.matmul(&m.transpose())?;
        SymMatrix::new(p)
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.0[ij]
    }
}

/// Lower-triangular L with L L' = A.
pub fn cholesky(a: &SymMatrix) -> Result<Matrix> {
    let n = a.order();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j + 1, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves L x = b for lower-triangular L.
pub fn forward_substitute(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[(i, k)] * x[k];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Solves L' x = b for lower-triangular L.
pub fn back_substitute_transpose(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in i + 1..n {
            x[i] -= l[(k, i)] * x[k];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Solves A x = b for symmetric positive definite A.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.order() {
        return Err(invalid("right-hand side length does not match the matrix"));
    }
    let l = cholesky(a)?;
    Ok(back_substitute_transpose(&l, &forward_substitute(&l, b)))
}

/// Thin QR by Householder reflections: Q is N×k with orthonormal columns
/// and R is k×k upper triangular.
pub fn thin_qr(x: &Matrix) -> Result<(Matrix, Matrix)> {
    let (n, k) = (x.rows, x.cols);
    if n < k {
        return Err(invalid(format!("QR needs at least as many rows as columns, got {n}x{k}")));
    }
    let mut a = x.clone();
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let col_scale = |j: usize| (0..n).map(|i| x[(i, j)] * x[(i, j)]).sum::<f64>().sqrt();
    for j in 0..k {
        let norm = (j..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        if norm <= 1e-13 * col_scale(j).max(f64::MIN_POSITIVE) {
            return Err(Error::RankDeficient { column: j + 1 });
        }
        let alpha = if a[(j, j)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        for c in j..k {
            let dot: f64 = (j..n).map(|i| v[i - j] * a[(i, c)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                a[(i, c)] -= f * v[i - j];
            }
        }
        vs.push(v);
    }
    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r[(i, j)] = a[(i, j)];
        }
    }
    // Q = H_0 … H_{k-1} applied to the first k columns of the identity
    let mut q = Matrix::zeros(n, k);
    for i in 0..k {
        q[(i, i)] = 1.0;
    }
    for j in (0..k).rev() {
        let v = &vs[j];
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        for c in 0..k {
            let dot: f64 = (j..n).map(|i| v[i - j] * q[(i, c)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                q[(i, c)] -= f * v[i - j];
            }
        }
    }
    Ok((q, r))
}

/// Ordinary least squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub beta: Vec<f64>,
    pub rss: f64,
}

/// β minimizing ‖y - Xβ‖² and the residual sum of squares, via Householder QR.
pub fn least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquares> {
    if y.len() != x.rows {
        return Err(invalid(format!("{} responses for {} rows", y.len(), x.rows)));
    }
    let (q, r) = thin_qr(x)?;
    let qty = q.transpose().mul_vec(y);
    let k = x.cols;
    let mut beta = qty;
    for i in (0..k).rev() {
        for j in i + 1..k {
            beta[i] -= r[(i, j)] * beta[j];
        }
        beta[i] /= r[(i, i)];
    }
    let fitted = x.mul_vec(&beta);
    let rss = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(LeastSquares { beta, rss })
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// nonincreasing.
pub fn sym_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    let n = a.order();
    let mut m = a.0.clone();
    let total = m.frobenius();
    let off = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > JACOBI_REL_TOL * total {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Eigenvalues of L⁻¹ Σ L⁻ᵀ with L L' = Ω, i.e. the roots of |Σ - λΩ| = 0.
pub fn pencil_eigenvalues(sigma: &SymMatrix, omega: &SymMatrix) -> Result<Vec<f64>> {
    let n = sigma.order();
    if omega.order() != n {
        return Err(invalid("pencil matrices have different orders"));
    }
    let l = cholesky(omega)?;
    // W = L⁻¹ Σ column by column, then L⁻¹ W'
    let mut w = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| sigma[(i, j)]).collect();
        let x = forward_substitute(&l, &col);
        for i in 0..n {
            w[(i, j)] = x[i];
        }
    }
    let wt = w.transpose();
    let mut c = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| wt[(i, j)]).collect();
        let x = forward_substitute(&l, &col);
        for i in 0..n {
            c[(i, j)] = x[i];
        }
    }
    sym_eigenvalues(&SymMatrix::new(c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: &[f64]) -> Matrix {
        Matrix::from_vec(rows, cols, seed[..rows * cols].to_vec()).unwrap()
    }

    #[test]
    fn cholesky_examples() {
        assert_eq!(cholesky(&SymMatrix::identity(3)).unwrap(), Matrix::identity(3));
        let a = SymMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        let l = cholesky(&a).unwrap();
        assert_eq!(l, Matrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 2.0]]).unwrap());
        let bad = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&bad), Err(Error::NotPositiveDefinite { pivot: 2, .. })));
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn least_squares_examples() {
        let fit = least_squares(&Matrix::identity(3), &[1.0, -2.0, 3.5]).unwrap();
        for (b, y) in fit.beta.iter().zip([1.0, -2.0, 3.5]) {
            assert!((b - y).abs() < 1e-14);
        }
        assert!(fit.rss < 1e-28);
        let ones = Matrix::from_vec(4, 1, vec![1.0; 4]).unwrap();
        let fit = least_squares(&ones, &[1.0, 2.0, 3.0, 6.0]).unwrap();
        assert_relative_eq!(fit.beta[0], 3.0, max_relative = 1e-15);
        assert_relative_eq!(fit.rss, 14.0, max_relative = 1e-14);
        let dup = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(least_squares(&dup, &[1.0, 2.0, 3.0]), Err(Error::RankDeficient { column: 2 })));
    }

    #[test]
    fn eigen_examples() {
        assert_eq!(sym_eigenvalues(&SymMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap(), vec![3.0, 2.0, 1.0]);
        let ev = sym_eigenvalues(&SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pencil_examples() {
        let s = SymMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap();
        for ev in pencil_eigenvalues(&s, &s).unwrap() {
            assert!((ev - 1.0).abs() < 1e-14);
        }
        let rho = 0.5;
        let omega = SymMatrix::from_rows(&[
            vec![1.0, rho, rho],
            vec![rho, 1.0, rho],
            vec![rho, rho, 1.0],
        ])
        .unwrap();
        let ev = pencil_eigenvalues(&SymMatrix::identity(3), &omega).unwrap();
        for (a, b) in ev.iter().zip([2.0, 2.0, 0.5]) {
            assert!((a - b).abs() < 1e-13, "{ev:?}");
        }
        let ev = pencil_eigenvalues(&SymMatrix::identity(3), &SymMatrix::diagonal(&[2.0, 0.5, 4.0])).unwrap();
        for (a, b) in ev.iter().zip([2.0, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    fn spd_from(b: &Matrix) -> SymMatrix {
        let mut g = b.gram();
        for i in 0..g.order() {
            g.0[(i, i)] += 0.1;
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cholesky_reconstructs(n in 1usize..20, seed in prop::collection::vec(-1.0f64..1.0, 400)) {
            let a = spd_from(&random_matrix(n, n, &seed));
            let l = cholesky(&a).unwrap();
            let back = l.matmul(&l.transpose()).unwrap();
            let mut diff = back.clone();
            for i in 0..n { for j in 0..n { diff[(i, j)] -= a[(i, j)]; } }
            prop_assert!(diff.frobenius() <= 1e-10 * a.matrix().frobenius());
        }

        #[test]
        fn eigen_trace_and_determinant(seed in prop::collection::vec(-1.0f64..1.0, 25)) {
            let a = spd_from(&random_matrix(5, 5, &seed));
            let ev = sym_eigenvalues(&a).unwrap();
            prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
            let tr: f64 = ev.iter().sum();
            prop_assert!((tr - a.trace()).abs() <= 1e-9 * a.trace().abs());
            let l = cholesky(&a).unwrap();
            let det: f64 = (0..5).map(|i| l[(i, i)] * l[(i, i)]).product();
            let prod: f64 = ev.iter().product();
            prop_assert!((prod - det).abs() <= 1e-9 * det.abs());
        }

        #[test]
        fn pencil_congruence_invariant(seed in prop::collection::vec(-1.0f64..1.0, 48)) {
            let sigma = spd_from(&random_matrix(4, 4, &seed[..16]));
            let omega = spd_from(&random_matrix(4, 4, &seed[16..32]));
            let mut m = random_matrix(4, 4, &seed[32..]);
            for i in 0..4 { m[(i, i)] += 3.0; }
            let base = pencil_eigenvalues(&sigma, &omega).unwrap();
            let moved = pencil_eigenvalues(&sigma.congruence(&m).unwrap(), &omega.congruence(&m).unwrap()).unwrap();
            for (a, b) in base.iter().zip(&moved) {
                prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
            }
        }

        #[test]
        fn residual_orthogonal(seed in prop::collection::vec(-1.0f64..1.0, 60), y in prop::collection::vec(-5.0f64..5.0, 12)) {
            let x = random_matrix(12, 5, &seed);
            let fit = least_squares(&x, &y).unwrap();
            let fitted = x.mul_vec(&fit.beta);
            let resid: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
            for g in x.transpose().mul_vec(&resid) {
                prop_assert!(g.abs() <= 1e-8);
            }
        }
    }
}
