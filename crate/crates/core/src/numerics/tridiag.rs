//! Tridiagonal linear algebra: complex Thomas solves, Sturm-sequence
//! bisection and inverse iteration for real symmetric matrices.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Solves `A x = rhs` for a tridiagonal `A` given by its sub-, main and
/// super-diagonals (`lower[i]` couples rows `i+1` and `i`).
///
/// No pivoting: intended for diagonally dominant or Crank-Nicolson systems.
pub fn solve_complex(lower: &[C64], diag: &[C64], upper: &[C64], rhs: &[C64]) -> Result<Vec<C64>> {
    let n = diag.len();
    if rhs.len() != n || lower.len() + 1 != n || upper.len() + 1 != n {
        return Err(Error::Precondition("tridiagonal dimensions mismatch".into()));
    }
    let mut c = vec![C64::new(0.0, 0.0); n];
    let mut d = vec![C64::new(0.0, 0.0); n];
    let mut pivot = diag[0];
    if pivot.norm() == 0.0 {
        return Err(Error::SingularSystem("zero pivot in tridiagonal solve".into()));
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot.norm() == 0.0 {
            return Err(Error::SingularSystem("zero pivot in tridiagonal solve".into()));
        }
        if i < n - 1 {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Precondition("symmetric tridiagonal dimensions mismatch".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let prev = if q == 0.0 {
                f64::EPSILON * (self.off[i - 1].abs() + 1.0)
            } else {
                q
            };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.spectral_bounds();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit-norm eigenvector for an (accurate) eigenvalue estimate.
    pub fn eigenvector(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let (lo, hi) = self.spectral_bounds();
        let shift = eigenvalue + 1e-10 * (hi - lo).abs().max(1.0);
        let lower: Vec<C64> = self.off.iter().map(|&o| C64::new(o, 0.0)).collect();
        let diag: Vec<C64> = self.diag.iter().map(|&d| C64::new(d - shift, 0.0)).collect();
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + 1e-3 * ((i * 7919) % 13) as f64, 0.0))
            .collect();
        for _ in 0..4 {
            v = solve_complex(&lower, &diag, &lower, &v)?;
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::SingularSystem("inverse iteration breakdown".into()));
            }
            v.iter_mut().for_each(|z| *z /= norm);
        }
        let mut out: Vec<f64> = v.iter().map(|z| z.re).collect();
        // Fix the sign so the largest-magnitude component is positive.
        if let Some(peak) = out.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())) {
            if peak < 0.0 {
                out.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn thomas_matches_dense_product() {
        let n = 6;
        let lower: Vec<C64> = (0..n - 1).map(|i| C64::new(0.3 * i as f64, -0.1)).collect();
        let upper: Vec<C64> = (0..n - 1).map(|i| C64::new(-0.2, 0.05 * i as f64)).collect();
        let diag: Vec<C64> = (0..n).map(|i| C64::new(3.0 + i as f64, 0.5)).collect();
        let x_true: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let rhs: Vec<C64> = (0..n)
            .map(|i| {
                let mut y = diag[i] * x_true[i];
                if i > 0 {
                    y += lower[i - 1] * x_true[i - 1];
                }
                if i + 1 < n {
                    y += upper[i] * x_true[i + 1];
                }
                y
            })
            .collect();
        let x = solve_complex(&lower, &diag, &upper, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // Dirichlet chain: eigenvalues 2 - 2 cos(j pi / (n + 1)).
        let n = 50;
        let m = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        for j in [0usize, 1, 7, 49] {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((m.eigenvalue(j) - exact).abs() < 1e-13);
        }
        let lam = m.eigenvalue(0);
        let v = m.eigenvector(lam).unwrap();
        let mv = m.apply(&v);
        let resid: f64 = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lam * b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-10);
        assert_eq!(m.count_below(0.0), 0);
        assert_eq!(m.count_below(4.0), n);
    }
}
