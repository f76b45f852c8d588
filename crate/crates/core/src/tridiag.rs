//! Sturm-sequence bisection for the lowest eigenvalues of a symmetric
//! tridiagonal matrix.

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// # Panics
    /// If `off.len() + 1 != diag.len()` or the matrix is empty.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (negative LDL^T pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for (d, e) in self.diag[1..].iter().zip(&self.off) {
            let pivot = if q == 0.0 { f64::EPSILON * e.abs().max(f64::MIN_POSITIVE) } else { q };
            q = (d - x) - e * e / pivot;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
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

    /// The `index`-th smallest eigenvalue (zero-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.dim(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let norm = lo.abs().max(hi.abs());
        let tol = 2.0 * f64::EPSILON * norm;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.dim())).map(|i| self.eigenvalue(i)).collect()
    }
}
