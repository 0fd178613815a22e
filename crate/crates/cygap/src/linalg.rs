//! Minimal dense LU with partial pivoting — enough for determinants of
//! Nyström matrices (≤ 512²) and correlation determinants. Row-major.

use crate::error::{Error, Result};

pub(crate) struct LuFactors {
    lu: Vec<f64>,
    piv: Vec<usize>,
    n: usize,
    sign: f64,
}

pub(crate) fn lu_factor(mut a: Vec<f64>, n: usize) -> Result<LuFactors> {
    assert_eq!(a.len(), n * n);
    let mut piv = Vec::with_capacity(n);
    let mut sign = 1.0_f64;
    for k in 0..n {
        // pivot search in column k
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !best.is_finite() {
            return Err(Error::Numeric("non-finite entry during LU".into()));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        piv.push(p);
        let pivot = a[k * n + k];
        if pivot == 0.0 {
            // exactly singular; determinant is zero, solves will fail
            continue;
        }
        for i in (k + 1)..n {
            let m = a[i * n + k] / pivot;
            a[i * n + k] = m;
            if m != 0.0 {
                for j in (k + 1)..n {
                    a[i * n + j] -= m * a[k * n + j];
                }
            }
        }
    }
    Ok(LuFactors {
        lu: a,
        piv,
        n,
        sign,
    })
}

impl LuFactors {
    pub fn det(&self) -> f64 {
        let mut d = self.sign;
        for k in 0..self.n {
            d *= self.lu[k * self.n + k];
        }
        d
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        // forward (unit lower)
        for i in 1..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * b[j];
            }
            b[i] = s;
        }
        // backward
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.lu[i * n + j] * b[j];
            }
            let d = self.lu[i * n + i];
            if d == 0.0 {
                return Err(Error::Conditioning(
                    "singular matrix in resolvent solve".into(),
                ));
            }
            b[i] = s / d;
        }
        Ok(())
    }
}

/// Determinant of a small dense matrix (consumes a copy).
pub(crate) fn det(a: Vec<f64>, n: usize) -> Result<f64> {
    Ok(lu_factor(a, n)?.det())
}
