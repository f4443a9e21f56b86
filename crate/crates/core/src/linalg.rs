//! Dense complex linear algebra for the small matrices that arise from
//! excitation ladders (typically 3x3 or 4x4, never large).
//!
//! Provides LU factorization with partial pivoting and an eigendecomposition
//! of general complex matrices via Householder reduction to Hessenberg form
//! followed by a shifted QR iteration to Schur form, with eigenvectors
//! recovered by back substitution on the triangular factor. Everything is
//! written for correctness and testability at small dimension rather than
//! throughput.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Square complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn mul_mat(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let mut out = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..self.n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// LU factorization with partial pivoting. Fails on exactly singular
    /// input.
    pub fn lu(&self) -> Result<Lu> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty column");
            if pivot_abs == 0.0 {
                return Err(Error::Numerical(
                    "singular matrix in LU factorization".into(),
                ));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                a[r * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * a[col * n + j];
                    a[r * n + j] -= sub;
                }
            }
        }
        Ok(Lu { n, lu: a, perm })
    }

    /// 1-norm condition number via the explicit inverse; fine at the
    /// dimensions used here.
    pub fn cond_one(&self) -> f64 {
        match self.lu().and_then(|lu| lu.inverse()) {
            Ok(inv) => self.one_norm() * inv.one_norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// LU factors of a square complex matrix.
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * y[j];
                y[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[i * n + j] * y[j];
                y[i] -= sub;
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.n;
        let mut inv = CMatrix::zeros(n);
        let mut e = vec![C64::ZERO; n];
        for col in 0..n {
            e[col] = C64::ONE;
            let x = self.solve(&e);
            e[col] = C64::ZERO;
            for (row, v) in x.into_iter().enumerate() {
                inv[(row, col)] = v;
            }
        }
        Ok(inv)
    }
}

/// Right eigendecomposition A V = V diag(values).
pub struct Eigensystem {
    pub values: Vec<C64>,
    /// Eigenvectors as columns, normalized to unit 2-norm.
    pub vectors: CMatrix,
}

impl Eigensystem {
    /// Condition number of the eigenvector matrix; large values signal a
    /// nearly defective eigensystem.
    pub fn vector_condition(&self) -> f64 {
        self.vectors.cond_one()
    }
}

/// Eigendecomposition of a general complex matrix.
pub fn eigendecompose(a: &CMatrix) -> Result<Eigensystem> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(Eigensystem {
            values: vec![C64::ZERO; n],
            vectors: CMatrix::identity(n),
        });
    }
    let mut h = a.scaled(1.0 / scale);
    let mut q = CMatrix::identity(n);
    hessenberg(&mut h, &mut q);
    schur(&mut h, &mut q)?;
    let y = triangular_eigenvectors(&h);
    let mut v = q.mul_mat(&y);
    for col in 0..n {
        let norm: f64 = (0..n).map(|i| v[(i, col)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                v[(i, col)] /= norm;
            }
        }
    }
    let values = (0..n).map(|i| h[(i, i)] * scale).collect();
    Ok(Eigensystem { values, vectors: v })
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// similarity transform into `q`: on exit q^H a q = h.
fn hessenberg(h: &mut CMatrix, q: &mut CMatrix) {
    let n = h.dim();
    for k in 0..n.saturating_sub(2) {
        // Householder vector zeroing column k below the subdiagonal
        let norm_x: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0 == C64::ZERO {
            C64::ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut u: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        u[0] -= alpha;
        let unorm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if unorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / unorm_sqr;
        // left: h <- P h with P = I - beta u u^H acting on rows k+1..n
        for j in 0..n {
            let dot: C64 = u
                .iter()
                .zip(k + 1..n)
                .map(|(ui, i)| ui.conj() * h[(i, j)])
                .sum();
            let s = beta * dot;
            for (ui, i) in u.iter().zip(k + 1..n) {
                let sub = s * ui;
                h[(i, j)] -= sub;
            }
        }
        // right: h <- h P on columns k+1..n
        for i in 0..n {
            let dot: C64 = u.iter().zip(k + 1..n).map(|(uj, j)| h[(i, j)] * uj).sum();
            let s = beta * dot;
            for (uj, j) in u.iter().zip(k + 1..n) {
                let sub = s * uj.conj();
                h[(i, j)] -= sub;
            }
        }
        // accumulate: q <- q P
        for i in 0..n {
            let dot: C64 = u.iter().zip(k + 1..n).map(|(uj, j)| q[(i, j)] * uj).sum();
            let s = beta * dot;
            for (uj, j) in u.iter().zip(k + 1..n) {
                let sub = s * uj.conj();
                q[(i, j)] -= sub;
            }
        }
        // enforce the exact zeros
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::ZERO;
        }
    }
}

/// Complex Givens rotation: returns (c, s) with c real such that
/// applying rows (x_row, z_row) -> (c x - s z, conj(s) x + c z) maps the
/// pair (x, z) to (r, 0).
fn givens(x: C64, z: C64) -> (f64, C64) {
    let zn = z.norm();
    if zn == 0.0 {
        return (1.0, C64::ZERO);
    }
    let xn = x.norm();
    if xn == 0.0 {
        return (0.0, -z.conj() / zn);
    }
    let rho = (xn * xn + zn * zn).sqrt();
    let c = xn / rho;
    let s = -z.conj() * (x / xn) / rho;
    (c, s)
}

const MAX_QR_SWEEPS_PER_EIGENVALUE: usize = 40;

/// Shifted QR iteration driving a Hessenberg matrix to upper triangular
/// (Schur) form; rotations accumulate into `q` so q^H a q = t throughout.
fn schur(h: &mut CMatrix, q: &mut CMatrix) -> Result<()> {
    let n = h.dim();
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let mut hi = n - 1;
    let mut sweeps = 0;
    while hi > 0 {
        // deflate converged subdiagonals
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * local + tiny {
                h[(lo, lo - 1)] = C64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_QR_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Numerical("QR iteration failed to converge".into()));
        }
        // Wilkinson shift from the trailing 2x2; every tenth sweep take an
        // exceptional shift to break symmetry-induced stalls
        let mu = if sweeps % 10 == 0 {
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(h, q, lo, hi, mu);
    }
    Ok(())
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit-shift QR step on the active block lo..=hi, applied as a
/// global similarity transform.
fn qr_sweep(h: &mut CMatrix, q: &mut CMatrix, lo: usize, hi: usize, mu: C64) {
    let n = h.dim();
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    // left phase: triangularize the shifted block with rotations on rows
    // (k, k+1); by construction row k holds no entries left of column k when
    // its rotation is applied
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = c * t1 - s * t2;
            h[(k + 1, j)] = s.conj() * t1 + c * t2;
        }
        rotations.push((c, s));
    }
    // right phase: apply the adjoint rotations from the right, restoring
    // Hessenberg structure
    for (k, &(c, s)) in (lo..hi).zip(&rotations) {
        for i in 0..=(k + 1).min(hi) {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = c * t1 - s.conj() * t2;
            h[(i, k + 1)] = s * t1 + c * t2;
        }
        for i in 0..n {
            let t1 = q[(i, k)];
            let t2 = q[(i, k + 1)];
            q[(i, k)] = c * t1 - s.conj() * t2;
            q[(i, k + 1)] = s * t1 + c * t2;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Unit right eigenvectors of an upper triangular matrix by back
/// substitution; near-defective divisors are perturbed to machine scale so
/// degeneracy surfaces as an ill-conditioned eigenvector matrix rather than
/// a panic.
fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.dim();
    let scale = t.max_abs().max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * scale;
    let mut y = CMatrix::zeros(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = C64::ONE;
        for i in (0..k).rev() {
            let sum: C64 = (i + 1..=k).map(|m| t[(i, m)] * y[(m, k)]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < floor {
                denom = C64::new(floor, 0.0);
            }
            y[(i, k)] = -sum / denom;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn residual(a: &CMatrix, eig: &Eigensystem) -> f64 {
        let n = a.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let v: Vec<C64> = (0..n).map(|i| eig.vectors[(i, k)]).collect();
            let av = a.mul_vec(&v);
            let err: f64 = (0..n)
                .map(|i| (av[i] - eig.values[k] * v[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(err);
        }
        worst / a.max_abs().max(1e-300)
    }

    fn rng_matrix(n: usize, seed: u64) -> CMatrix {
        // xorshift, good enough for test matrices
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(next(), next());
            }
        }
        m
    }

    #[test]
    fn lu_solves_known_system() {
        let a = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, -1.0), c(3.0, 0.0)],
        ]);
        let x = vec![c(1.0, 2.0), c(-0.5, 0.25)];
        let b = a.mul_vec(&x);
        let solved = a.lu().unwrap().solve(&b);
        for (got, want) in solved.iter().zip(&x) {
            assert_relative_eq!(got.re, want.re, max_relative = 1e-13);
            assert_relative_eq!(got.im, want.im, max_relative = 1e-13);
        }
    }

    #[test]
    fn lu_inverse_and_condition() {
        let a = CMatrix::from_rows(&[
            vec![c(4.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.25, 0.0)],
        ]);
        let inv = a.lu().unwrap().inverse().unwrap();
        assert_relative_eq!(inv[(0, 0)].re, 0.25, max_relative = 1e-14);
        assert_relative_eq!(inv[(1, 1)].re, 4.0, max_relative = 1e-14);
        assert_relative_eq!(a.cond_one(), 16.0, max_relative = 1e-12);
    }

    #[test]
    fn lu_detects_singularity() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert!(a.lu().is_err());
    }

    #[test]
    fn eigen_diagonal() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, -0.5), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-2.0, 0.125)],
        ]);
        let eig = eigendecompose(&a).unwrap();
        let mut values = eig.values.clone();
        values.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_relative_eq!(values[0].re, -2.0, max_relative = 1e-13);
        assert_relative_eq!(values[1].im, -0.5, max_relative = 1e-13);
        assert!(residual(&a, &eig) < 1e-13);
    }

    #[test]
    fn eigen_two_level_coupling() {
        // [[0, g], [g, 0]] has eigenvalues +-g
        let g = 7.5;
        let a = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(g, 0.0)], vec![c(g, 0.0), c(0.0, 0.0)]]);
        let eig = eigendecompose(&a).unwrap();
        let mut re: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_relative_eq!(re[0], -g, max_relative = 1e-13);
        assert_relative_eq!(re[1], g, max_relative = 1e-13);
        assert!(residual(&a, &eig) < 1e-13);
        assert!(eig.vector_condition() < 10.0);
    }

    #[test]
    fn eigen_random_matrices_have_small_residuals() {
        for n in 2..=8 {
            for seed in 1..=6u64 {
                let a = rng_matrix(n, seed * 77 + n as u64);
                let eig = eigendecompose(&a).unwrap();
                assert!(
                    residual(&a, &eig) < 1e-11,
                    "residual too large for n={n} seed={seed}: {}",
                    residual(&a, &eig)
                );
            }
        }
    }

    #[test]
    fn eigen_random_tridiagonal_ladders() {
        // the shape produced by ladder Hamiltonians: complex diagonal, real
        // symmetric off-diagonals
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 2..=6 {
            for _ in 0..8 {
                let mut a = CMatrix::zeros(n);
                for i in 0..n {
                    a[(i, i)] = c(next() - 0.5, -next());
                }
                for i in 0..n - 1 {
                    let coupling = c(next(), 0.0);
                    a[(i, i + 1)] = coupling;
                    a[(i + 1, i)] = coupling;
                }
                let eig = eigendecompose(&a).unwrap();
                assert!(residual(&a, &eig) < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_defective_matrix_reports_huge_condition() {
        // Jordan block: eigenvector matrix is numerically singular
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let eig = eigendecompose(&a).unwrap();
        assert!(eig.vector_condition() > 1e12);
    }

    #[test]
    fn eigen_zero_matrix() {
        let eig = eigendecompose(&CMatrix::zeros(3)).unwrap();
        assert!(eig.values.iter().all(|z| *z == C64::ZERO));
        assert!(eig.vector_condition() < 1.0 + 1e-12);
    }
}
