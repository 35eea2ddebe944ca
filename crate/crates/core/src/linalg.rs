//! Tridiagonal systems.

use crate::error::{NNError, Result};

/// A square tridiagonal matrix stored by diagonals; `lower[i]` sits at
/// `(i + 1, i)` and `upper[i]` at `(i, i + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    #[cfg(test)]
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.lower[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
    /// A pivot below `1e-300` in magnitude is reported as singular.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        // Rows hold (sub, diag, super, super2); pivoting can fill in one
        // extra super-diagonal.
        let mut a: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                [
                    self.diag[i],
                    if i + 1 < n { self.upper[i] } else { 0.0 },
                    0.0,
                ]
            })
            .collect();
        let mut sub: Vec<f64> = self.lower.clone();
        let mut b = rhs.to_vec();
        for k in 0..n {
            if k + 1 < n && sub[k].abs() > a[k][0].abs() {
                // swap rows k and k+1, aligned by column
                let below = [sub[k], a[k + 1][0], a[k + 1][1]];
                let here = a[k];
                a[k] = below;
                sub[k] = here[0];
                a[k + 1] = [here[1], here[2], 0.0];
                b.swap(k, k + 1);
            }
            let p = a[k][0];
            if !(p.abs() > 1e-300) {
                return Err(NNError::WellPosedness(format!(
                    "singular tridiagonal system (zero pivot at row {k})"
                )));
            }
            if k + 1 < n {
                let m = sub[k] / p;
                a[k + 1][0] -= m * a[k][1];
                a[k + 1][1] -= m * a[k][2];
                b[k + 1] -= m * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let mut s = b[k];
            if k + 1 < n {
                s -= a[k][1] * x[k + 1];
            }
            if k + 2 < n {
                s -= a[k][2] * x[k + 2];
            }
            x[k] = s / a[k][0];
        }
        Ok(x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(t: &Tridiagonal) -> Vec<Vec<f64>> {
        let n = t.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = t.diag[i];
            if i + 1 < n {
                m[i][i + 1] = t.upper[i];
                m[i + 1][i] = t.lower[i];
            }
        }
        m
    }

    #[test]
    fn needs_pivoting() {
        let t = Tridiagonal {
            lower: vec![1.0, 1.0],
            diag: vec![0.0, 0.0, 1.0],
            upper: vec![1.0, 1.0],
        };
        let x = t.solve(&[1.0, 2.0, 3.0]).unwrap();
        let back = t.mul_vec(&x);
        for (u, v) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_detected() {
        let t = Tridiagonal {
            lower: vec![1.0],
            diag: vec![1.0, 1.0],
            upper: vec![1.0],
        };
        assert!(matches!(t.solve(&[1.0, 1.0]), Err(NNError::WellPosedness(_))));
    }

    proptest! {
        #[test]
        fn residual_small_for_dominant_systems(
            n in 1usize..40,
            seed in proptest::collection::vec(-1.0f64..1.0, 120),
        ) {
            let mut t = Tridiagonal::zeros(n);
            for i in 0..n {
                t.diag[i] = 3.0 + seed[i];
                if i + 1 < n {
                    t.upper[i] = seed[40 + i];
                    t.lower[i] = seed[80 + i];
                }
            }
            let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let x = t.solve(&rhs).unwrap();
            let m = dense(&t);
            for i in 0..n {
                let r: f64 = (0..n).map(|j| m[i][j] * x[j]).sum::<f64>() - rhs[i];
                prop_assert!(r.abs() < 1e-12);
            }
        }
    }
}
