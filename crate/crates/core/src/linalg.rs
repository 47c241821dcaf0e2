//! Small dense linear algebra over generic fields, 2x2 spectral-parameter
//! matrices, quartic root finding, and rank tests on lifted coordinates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::scalar::Field;

/// Failure of a dense solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singular;

/// Solve `a x = b` in place by Gaussian elimination with pivoting by `mag`.
/// For exact fields any nonzero pivot is accepted.
pub fn solve_dense<T: Field>(a: &mut [Vec<T>], b: &mut [T]) -> Result<Vec<T>, Singular> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let (mut piv, mut best) = (col, a[col][col].mag());
        for row in (col + 1)..n {
            let m = a[row][col].mag();
            if m > best {
                piv = row;
                best = m;
            }
        }
        if best == 0.0 || a[piv][col].is_zero() {
            return Err(Singular);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = T::one() / a[col][col].clone();
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() * inv.clone();
            for k in col..n {
                let sub = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - sub;
            }
            let sub = factor * b[col].clone();
            b[row] = b[row].clone() - sub;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Ok(x)
}

/// Solve a real 3x3 system; returns the solution and a crude reciprocal
/// condition estimate (smallest pivot / largest entry).
pub fn solve3_f64(a: [[f64; 3]; 3], b: [f64; 3]) -> Result<([f64; 3], f64), Singular> {
    let mut m = a;
    let mut rhs = b;
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1e-300);
    let mut min_piv = f64::INFINITY;
    for col in 0..3 {
        let (mut piv, mut best) = (col, m[col][col].abs());
        for row in (col + 1)..3 {
            if m[row][col].abs() > best {
                piv = row;
                best = m[row][col].abs();
            }
        }
        if best == 0.0 {
            return Err(Singular);
        }
        min_piv = min_piv.min(best);
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok((x, min_piv / scale))
}

/// 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Mat2([[o, z], [z, o]])
    }

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = self.0;
        for r in out.iter_mut() {
            for v in r.iter_mut() {
                *v *= s;
            }
        }
        Mat2(out)
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn inv(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Mat2::new(
            self.0[1][1] / d,
            -self.0[0][1] / d,
            -self.0[1][0] / d,
            self.0[0][0] / d,
        ))
    }

    pub fn norm_max(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |acc, v| acc.max(v.norm()))
    }

    /// Moebius action (a z + b) / (c z + d).
    pub fn moebius(&self, z: Complex64) -> Complex64 {
        (self.0[0][0] * z + self.0[0][1]) / (self.0[1][0] * z + self.0[1][1])
    }
}

/// Entrywise max norm of the difference of two matrix products, used for
/// zero-curvature residuals.
pub fn zc_residual(left: (&Mat2, &Mat2), right: (&Mat2, &Mat2)) -> f64 {
    let l = left.0.mul(left.1);
    let r = right.0.mul(right.1);
    l.sub(&r).norm_max()
}

/// 4x4 complex matrix, used as the 2x2-block representation of 2x2 matrices
/// with Clifford-algebra entries.
#[derive(Debug, Clone, Copy)]
pub struct Mat4(pub [[Complex64; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    /// Assemble from 2x2 blocks [[a, b], [c, d]].
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j];
                m.0[i][j + 2] = b.0[i][j];
                m.0[i + 2][j] = c.0[i][j];
                m.0[i + 2][j + 2] = d.0[i][j];
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        out
    }

    pub fn norm_max(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |acc, v| acc.max(v.norm()))
    }
}

/// Roots of a complex polynomial (ascending coefficients) by Durand-Kerner.
/// Leading zero coefficients are trimmed; the effective degree is returned
/// with the roots.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() < 1e-14 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..200 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut num = Complex64::new(0.0, 0.0);
            // Horner evaluation of the monic polynomial at roots[i].
            for &cf in monic.iter().rev() {
                num = num * roots[i] + cf;
            }
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = num / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

/// Multiplicity pattern of a degree-4 binary form given by ascending
/// coefficients of the dehomogenized quartic; a root at infinity of
/// multiplicity `4 - deg` is appended. Clusters within `tol` are merged.
/// Returns multiplicities sorted descending, or None when clustering is
/// ambiguous (a pairwise distance falls inside the dead band
/// `(tol, 10 tol)`).
pub fn quartic_multiplicities(coeffs: &[Complex64; 5], tol: f64) -> Option<Vec<usize>> {
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    if scale == 0.0 {
        return Some(Vec::new());
    }
    let mut c = *coeffs;
    for v in c.iter_mut() {
        *v /= scale;
    }
    let mut deg = 4usize;
    while deg > 0 && c[deg].norm() < 1e-12 {
        deg -= 1;
    }
    let roots = poly_roots(&c[..=deg]);
    let inf_mult = 4 - deg;
    // cluster
    let mut used = vec![false; roots.len()];
    let mut mults: Vec<usize> = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut m = 1;
        used[i] = true;
        for j in (i + 1)..roots.len() {
            if used[j] {
                continue;
            }
            let d = (roots[i] - roots[j]).norm() / (1.0 + roots[i].norm());
            if d < tol {
                used[j] = true;
                m += 1;
            } else if d < 10.0 * tol {
                return None;
            }
        }
        mults.push(m);
    }
    if inf_mult > 0 {
        mults.push(inf_mult);
    }
    mults.sort_unstable_by(|a, b| b.cmp(a));
    Some(mults)
}
