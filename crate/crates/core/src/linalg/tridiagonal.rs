//! Real symmetric tridiagonal eigenvalues by Sturm-sequence bisection, with
//! eigenvectors by shifted inverse iteration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tridiagonal entries".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let (lo, hi) = self.gershgorin();
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * (hi - lo).abs().max(1.0));
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue index {k} out of range for order {}",
                self.len()
            )));
        }
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * (glo.abs().max(ghi.abs()).max(1.0)) * 4.0;
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Lowest `k` eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        (0..k).map(|i| self.eigenvalue(i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
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

    /// Unit eigenvector for an (approximate) eigenvalue, by inverse iteration.
    ///
    /// Sign convention: the largest-magnitude component is positive.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = lambda + f64::EPSILON * (hi - lo).abs().max(1.0) * 8.0;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_7).sin()).collect();
        normalize(&mut x);
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x);
            normalize(&mut x);
        }
        let imax = x
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map_or(0, |(i, _)| i);
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }

    /// Solves `(T - sigma I) x = b` by LU with partial pivoting.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - sigma).collect();
        if n == 1 {
            return vec![b[0] / nonzero(d[0])];
        }
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let mut x = b.to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = x[i] - dl[i] * x[i + 1];
                x[i] = x[i + 1];
                x[i + 1] = temp;
            } else {
                x[i + 1] -= dl[i] * x[i];
            }
        }
        x[n - 1] /= nonzero(d[n - 1]);
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / nonzero(d[n - 2]);
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / nonzero(d[i]);
        }
        x
    }
}

fn nonzero(x: f64) -> f64 {
    if x == 0.0 {
        f64::EPSILON * f64::EPSILON
    } else {
        x
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}
