//! LU factorization with partial pivoting for dense complex matrices,
//! plus a Hager-style one-norm condition estimator.

use num_complex::Complex64;

use super::{ComplexTM, MatrixError};

/// Packed LU factors of a square complex matrix: `P·A = L·U` with `L`
/// unit lower triangular stored below the diagonal of `lu` and `U` on
/// and above it. `perm[k]` is the original row index now in row `k`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
}

/// Factor a square complex matrix with partial pivoting.
///
/// A pivot whose magnitude falls at or below `n·ε·max|a|` makes the
/// matrix singular to working tolerance and is reported together with
/// its magnitude.
pub fn lu_factor(a: &ComplexTM) -> Result<LuFactorization, MatrixError> {
    let n = a.n();
    let mut lu = a.data().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let tol = n as f64 * f64::EPSILON * a.max_abs();

    for col in 0..n {
        // choose pivot row by magnitude
        let mut p = col;
        let mut pmag = lu[col * n + col].norm();
        for r in (col + 1)..n {
            let mag = lu[r * n + col].norm();
            if mag > pmag {
                pmag = mag;
                p = r;
            }
        }
        if pmag <= tol {
            return Err(MatrixError::Singular { pivot: pmag, col });
        }
        if p != col {
            for j in 0..n {
                lu.swap(col * n + j, p * n + j);
            }
            perm.swap(col, p);
            sign = -sign;
        }
        let piv = lu[col * n + col];
        for r in (col + 1)..n {
            let factor = lu[r * n + col] / piv;
            lu[r * n + col] = factor;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                let u = lu[col * n + j];
                lu[r * n + j] -= factor * u;
            }
        }
    }

    Ok(LuFactorization { n, lu, perm, sign })
}

impl LuFactorization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// Determinant from the factorization: `sign · Π U_kk`.
    pub fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for k in 0..self.n {
            d *= self.lu[k * self.n + k];
        }
        d
    }

    /// Solve `A·x = b` for one right-hand-side vector in place.
    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = (0..n).map(|k| b[self.perm[k]]).collect();
        // forward: L y = P b
        for i in 1..n {
            let mut acc = x[i];
            for k in 0..i {
                acc -= self.lu[i * n + k] * x[k];
            }
            x[i] = acc;
        }
        // back: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in (i + 1)..n {
                acc -= self.lu[i * n + k] * x[k];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }

    /// Solve `Aᴴ·x = b` using the same factors (`Aᴴ = Uᴴ·Lᴴ·P`).
    pub fn solve_adjoint_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut w = b.to_vec();
        // Uᴴ w = b  (lower triangular with conjugated entries)
        for i in 0..n {
            let mut acc = w[i];
            for k in 0..i {
                acc -= self.lu[k * n + i].conj() * w[k];
            }
            w[i] = acc / self.lu[i * n + i].conj();
        }
        // Lᴴ v = w  (unit upper triangular)
        for i in (0..n).rev() {
            let mut acc = w[i];
            for k in (i + 1)..n {
                acc -= self.lu[k * n + i].conj() * w[k];
            }
            w[i] = acc;
        }
        // x = Pᵀ v
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            x[self.perm[k]] = w[k];
        }
        x
    }

    /// Solve `A·X = rhs` column by column.
    pub fn solve(&self, rhs: &ComplexTM) -> Result<ComplexTM, MatrixError> {
        let n = self.n;
        if rhs.n() != n {
            return Err(MatrixError::DimensionMismatch(format!(
                "solve: factor is {n}x{n}, rhs is {r}x{r}",
                r = rhs.n()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = rhs.get(i, j);
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[i * n + j] = x[i];
            }
        }
        ComplexTM::new(n, out, rhs.family(), rhs.seed())
    }

    /// Estimate the one-norm condition number `‖A‖₁·‖A⁻¹‖₁` using
    /// Hager's power method on the inverse (at most five iterations).
    pub fn condition_estimate(&self, a: &ComplexTM) -> f64 {
        let n = self.n;
        // exact ‖A‖₁: max column sum of magnitudes
        let mut norm_a = 0.0f64;
        for j in 0..n {
            let s: f64 = (0..n).map(|i| a.get(i, j).norm()).sum();
            norm_a = norm_a.max(s);
        }

        // Hager's estimate of ‖A⁻¹‖₁
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0f64;
        for _ in 0..5 {
            let y = self.solve_vec(&x);
            let y_norm1: f64 = y.iter().map(|z| z.norm()).sum();
            est = est.max(y_norm1);
            let xi: Vec<Complex64> = y
                .iter()
                .map(|z| {
                    let m = z.norm();
                    if m == 0.0 { Complex64::new(1.0, 0.0) } else { z / m }
                })
                .collect();
            let z = self.solve_adjoint_vec(&xi);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, 0.0), |acc, it| if it.1 > acc.1 { it } else { acc });
            let zx: f64 = z.iter().zip(&x).map(|(zi, xi)| (zi.conj() * xi).re).sum();
            if zmax <= zx.abs() {
                break;
            }
            x = vec![Complex64::new(0.0, 0.0); n];
            x[jmax] = Complex64::new(1.0, 0.0);
        }
        norm_a * est
    }
}

/// Solve `b_mat·X = rhs`: factor and substitute.
pub fn lu_solve(b_mat: &ComplexTM, rhs: &ComplexTM) -> Result<ComplexTM, MatrixError> {
    if b_mat.n() != rhs.n() {
        return Err(MatrixError::DimensionMismatch(format!(
            "lu_solve: lhs is {}x{}, rhs is {}x{}",
            b_mat.n(),
            b_mat.n(),
            rhs.n(),
            rhs.n()
        )));
    }
    lu_factor(b_mat)?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TmFamily;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_tm(n: usize, seed: u64) -> ComplexTM {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexTM::from_fn(n, TmFamily::Forward, seed, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .unwrap()
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let t = random_tm(5, 3);
        let i5 = ComplexTM::identity(5, TmFamily::Forward, 0);
        let x = lu_solve(&i5, &t).unwrap();
        let diff = x.sub(&t).frobenius_norm();
        assert!(diff <= 1e-14 * t.frobenius_norm());
    }

    #[test]
    fn scalar_matrix_solve() {
        let two_i = ComplexTM::identity(4, TmFamily::Forward, 0).scale(Complex64::new(2.0, 0.0));
        let i4 = ComplexTM::identity(4, TmFamily::Forward, 0);
        let x = lu_solve(&two_i, &i4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert_eq!(x.get(i, j), Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn residual_below_tolerance_random_6x6() {
        for seed in 0..30 {
            let b = random_tm(6, seed);
            let rhs = random_tm(6, seed + 500);
            let x = lu_solve(&b, &rhs).unwrap();
            let residual = b.matmul(&x).sub(&rhs).frobenius_norm() / rhs.frobenius_norm();
            assert!(residual < 1e-8, "seed {seed}: residual {residual:.3e}");
        }
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        // third column is a copy of the first
        let mut t = random_tm(4, 9);
        let n = 4;
        let mut data = t.data().to_vec();
        for i in 0..n {
            data[i * n + 2] = data[i * n];
        }
        t = ComplexTM::new(n, data, TmFamily::Forward, 9).unwrap();
        match lu_factor(&t) {
            Err(MatrixError::Singular { pivot, .. }) => assert!(pivot < 1e-12),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn determinant_of_triangular() {
        let c = Complex64::new;
        let t = ComplexTM::new(
            3,
            vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 3.0),
                 c(0.0, 0.0), c(0.0, 1.0), c(5.0, 0.0),
                 c(0.0, 0.0), c(0.0, 0.0), c(-1.5, 0.0)],
            TmFamily::Forward,
            0,
        )
        .unwrap();
        let d = lu_factor(&t).unwrap().det();
        let expect = c(2.0, 0.0) * c(0.0, 1.0) * c(-1.5, 0.0);
        assert!((d - expect).norm() < 1e-12);
    }

    #[test]
    fn condition_estimate_brackets_known_case() {
        // diagonal matrix with entries 1..=10: exact 1-norm condition 10
        let n = 10;
        let t = ComplexTM::from_fn(n, TmFamily::Forward, 0, |i, j| {
            if i == j { Complex64::new((i + 1) as f64, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
        .unwrap();
        let f = lu_factor(&t).unwrap();
        let est = f.condition_estimate(&t);
        assert!(est >= 9.0 && est <= 10.5, "est = {est}");
    }

    #[test]
    fn adjoint_solve_consistent() {
        let a = random_tm(7, 21);
        let b: Vec<Complex64> = (0..7).map(|i| Complex64::new(i as f64 + 1.0, -0.5)).collect();
        let f = lu_factor(&a).unwrap();
        let x = f.solve_adjoint_vec(&b);
        // residual of Aᴴ x − b
        let ah = a.adjoint();
        let mut res = 0.0;
        for i in 0..7 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..7 {
                acc += ah.get(i, j) * x[j];
            }
            res += (acc - b[i]).norm_sqr();
        }
        assert!(res.sqrt() < 1e-9);
    }
}
