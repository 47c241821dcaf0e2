//! Biquadratics attached to an equation: g = Q Q_yv - Q_y Q_v factors as
//! k(alpha,beta) h(x,u;alpha); the discriminant r(x) = h_u^2 - 2 h h_uu is
//! a quartic independent of alpha whose root pattern classifies the
//! equation.

use alloc::collections::BTreeMap;

use num_complex::Complex64;

use super::catalog::{eval_q, QuadEqError, QuadKind};
use crate::linalg::quartic_multiplicities;

const Z: Complex64 = Complex64::new(0.0, 0.0);

/// Polynomial in (x, u, y, v) with bounded degrees, dense map representation.
#[derive(Debug, Clone, Default)]
struct Poly4 {
    c: BTreeMap<(u8, u8, u8, u8), Complex64>,
}

impl Poly4 {
    fn add_term(&mut self, key: (u8, u8, u8, u8), v: Complex64) {
        if v.norm() != 0.0 {
            *self.c.entry(key).or_insert(Z) += v;
        }
    }

    fn mul(&self, rhs: &Poly4) -> Poly4 {
        let mut out = Poly4::default();
        for (&(a1, b1, c1, d1), &v1) in &self.c {
            for (&(a2, b2, c2, d2), &v2) in &rhs.c {
                out.add_term((a1 + a2, b1 + b2, c1 + c2, d1 + d2), v1 * v2);
            }
        }
        out
    }

    fn sub(&self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (&k, &v) in &rhs.c {
            out.add_term(k, -v);
        }
        out
    }

    /// Partial derivative in variable index (0 = x, 1 = u, 2 = y, 3 = v).
    fn diff(&self, var: usize) -> Poly4 {
        let mut out = Poly4::default();
        for (&k, &v) in &self.c {
            let mut k = [k.0, k.1, k.2, k.3];
            let d = k[var];
            if d == 0 {
                continue;
            }
            k[var] -= 1;
            out.add_term((k[0], k[1], k[2], k[3]), v * d as f64);
        }
        out
    }

    fn max_norm(&self) -> f64 {
        self.c.values().fold(0.0, |a, v| a.max(v.norm()))
    }
}

/// Multilinear coefficient tensor of Q at fixed labels, extracted by
/// inclusion-exclusion over {0,1}^4; also verifies affine linearity by
/// comparing against direct evaluation at random points.
fn multilinear_tensor(
    kind: &QuadKind,
    alpha: Complex64,
    beta: Complex64,
) -> Result<Poly4, QuadEqError> {
    let eval = |mask: usize| -> Result<Complex64, QuadEqError> {
        let pick = |b: usize| if mask >> b & 1 == 1 { Complex64::new(1.0, 0.0) } else { Z };
        eval_q(kind, &pick(0), &pick(1), &pick(2), &pick(3), &alpha, &beta)
    };
    let mut vals = [Z; 16];
    for (m, slot) in vals.iter_mut().enumerate() {
        *slot = eval(m)?;
    }
    let mut p = Poly4::default();
    for s in 0..16usize {
        let mut coeff = Z;
        // subsets of s
        let mut t = s;
        loop {
            let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            coeff += vals[t] * sign;
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        p.add_term(
            ((s & 1) as u8, (s >> 1 & 1) as u8, (s >> 2 & 1) as u8, (s >> 3 & 1) as u8),
            coeff,
        );
    }
    // affine linearity: the multilinear extension must reproduce Q
    let probe = |x: Complex64, u: Complex64, y: Complex64, v: Complex64| -> Result<(), QuadEqError> {
        let direct = eval_q(kind, &x, &u, &y, &v, &alpha, &beta)?;
        let mut acc = Z;
        for (&(a, b, c, d), &w) in &p.c {
            acc += w * x.powu(a as u32) * u.powu(b as u32) * y.powu(c as u32) * v.powu(d as u32);
        }
        let scale = p.max_norm().max(1.0);
        if (acc - direct).norm() > 1e-8 * scale {
            return Err(QuadEqError::FactorizationFailed);
        }
        Ok(())
    };
    probe(
        Complex64::new(1.3, 0.4),
        Complex64::new(-0.7, 0.9),
        Complex64::new(0.5, -1.2),
        Complex64::new(-1.1, -0.3),
    )?;
    probe(
        Complex64::new(-2.0, 0.1),
        Complex64::new(0.3, -0.8),
        Complex64::new(1.7, 0.2),
        Complex64::new(0.9, 1.4),
    )?;
    Ok(p)
}

/// Symmetric biquadratic h(x,u); coeffs[m][n] multiplies x^m u^n.
#[derive(Debug, Clone)]
pub struct Biquadratic {
    pub coeffs: [[Complex64; 3]; 3],
}

impl Biquadratic {
    pub fn eval(&self, x: Complex64, u: Complex64) -> Complex64 {
        let mut acc = Z;
        for m in 0..3 {
            for n in 0..3 {
                acc += self.coeffs[m][n] * x.powu(m as u32) * u.powu(n as u32);
            }
        }
        acc
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0, |a, v| a.max(v.norm()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let s = self.max_norm().max(1e-30);
        (0..3).all(|m| (0..3).all(|n| (self.coeffs[m][n] - self.coeffs[n][m]).norm() <= tol * s))
    }
}

/// Raw biquadratic g(x,u; alpha, beta) = Q Q_yv - Q_y Q_v.
fn g_tensor(kind: &QuadKind, alpha: Complex64, beta: Complex64) -> Result<Biquadratic, QuadEqError> {
    let q = multilinear_tensor(kind, alpha, beta)?;
    let qy = q.diff(2);
    let qv = q.diff(3);
    let qyv = qy.diff(3);
    let g = q.mul(&qyv).sub(&qy.mul(&qv));
    // y, v dependence must cancel
    let scale = g.max_norm().max(1e-30);
    let mut coeffs = [[Z; 3]; 3];
    for (&(a, b, c, d), &w) in &g.c {
        if c > 0 || d > 0 {
            if w.norm() > 1e-9 * scale {
                return Err(QuadEqError::FactorizationFailed);
            }
            continue;
        }
        coeffs[a as usize][b as usize] += w;
    }
    Ok(Biquadratic { coeffs })
}

/// Compute the edge biquadratic h(x,u;alpha) (up to one global constant)
/// together with the antisymmetric factor value k(alpha,beta) relative to
/// that normalization, verifying the factorization g = k h.
pub fn biquadratic_g(
    kind: &QuadKind,
    alpha: Complex64,
    beta: Complex64,
) -> Result<(Biquadratic, Complex64), QuadEqError> {
    let beta0 = pick_reference(kind, alpha, beta);
    let h = g_tensor(kind, alpha, beta0)?;
    if h.max_norm() < 1e-12 {
        return Err(QuadEqError::FactorizationFailed);
    }
    if !h.is_symmetric(1e-8) {
        return Err(QuadEqError::FactorizationFailed);
    }
    let g = g_tensor(kind, alpha, beta)?;
    // proportionality: g = k h entrywise
    let mut k = Z;
    let mut best = 0.0;
    for m in 0..3 {
        for n in 0..3 {
            if h.coeffs[m][n].norm() > best {
                best = h.coeffs[m][n].norm();
                k = g.coeffs[m][n] / h.coeffs[m][n];
            }
        }
    }
    let scale = g.max_norm().max(1e-30);
    for m in 0..3 {
        for n in 0..3 {
            if (g.coeffs[m][n] - k * h.coeffs[m][n]).norm() > 1e-7 * scale {
                return Err(QuadEqError::FactorizationFailed);
            }
        }
    }
    Ok((h, k))
}

fn pick_reference(kind: &QuadKind, alpha: Complex64, beta: Complex64) -> Complex64 {
    for cand in [Complex64::new(0.77, 0.31), Complex64::new(1.31, -0.45), Complex64::new(0.41, 0.93)] {
        if (cand - alpha).norm() > 0.05 && (cand - beta).norm() > 0.05 {
            return cand;
        }
    }
    let _ = kind;
    Complex64::new(0.2, 1.7)
}

/// Normalization-free antisymmetry check of the factor k:
/// g(a,b) g(b,c) g(c,a) = - g(b,a) g(c,b) g(a,c) at a probe point.
pub fn antisymmetry_check(kind: &QuadKind, tol: f64) -> Result<bool, QuadEqError> {
    let (a, b, c) = (
        Complex64::new(0.9, 0.2),
        Complex64::new(-0.6, 0.7),
        Complex64::new(1.4, -0.5),
    );
    let probe = (Complex64::new(0.37, -0.81), Complex64::new(-1.21, 0.44));
    let g_at = |p: Complex64, q: Complex64| -> Result<Complex64, QuadEqError> {
        Ok(g_tensor(kind, p, q)?.eval(probe.0, probe.1))
    };
    let lhs = g_at(a, b)? * g_at(b, c)? * g_at(c, a)?;
    let rhs = -(g_at(b, a)? * g_at(c, b)? * g_at(a, c)?);
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Ok((lhs - rhs).norm() <= tol * scale)
}

/// Quartic r(x) = h_u^2 - 2 h h_uu = B(x)^2 - 4 A(x) C(x) for
/// h = A(x) u^2 + B(x) u + C(x); ascending coefficients.
pub fn discriminant_r(h: &Biquadratic) -> [Complex64; 5] {
    let a = [h.coeffs[0][2], h.coeffs[1][2], h.coeffs[2][2]];
    let b = [h.coeffs[0][1], h.coeffs[1][1], h.coeffs[2][1]];
    let c = [h.coeffs[0][0], h.coeffs[1][0], h.coeffs[2][0]];
    let mut r = [Z; 5];
    for i in 0..3 {
        for j in 0..3 {
            r[i + j] += b[i] * b[j] - 4.0 * a[i] * c[j];
        }
    }
    r
}

/// Canonical forms of r(x) by the multiplicity pattern of its zeros on the
/// projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalDiscriminant {
    /// r = 0
    Zero,
    /// one quadruple zero: r ~ 1
    One,
    /// one simple and one triple zero: r ~ x
    X,
    /// two double zeros: r ~ x^2
    XSquared,
    /// two simple and one double zero: r ~ 1 - x^2
    OneMinusXSquared,
    /// four simple zeros: r ~ (1 - x^2)(1 - k^2 x^2)
    FourSimple,
}

/// Classify a quartic by its root multiplicities (including infinity);
/// `reference_scale` guards the r = 0 case against numerical noise.
pub fn classify_by_discriminant(
    r: &[Complex64; 5],
    reference_scale: f64,
) -> Result<CanonicalDiscriminant, QuadEqError> {
    let scale = r.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if scale <= 1e-9 * reference_scale.max(1e-30) {
        return Ok(CanonicalDiscriminant::Zero);
    }
    let mults = quartic_multiplicities(r, 1e-5).ok_or(QuadEqError::NumericallyAmbiguous)?;
    Ok(match mults.as_slice() {
        [4] => CanonicalDiscriminant::One,
        [3, 1] => CanonicalDiscriminant::X,
        [2, 2] => CanonicalDiscriminant::XSquared,
        [2, 1, 1] => CanonicalDiscriminant::OneMinusXSquared,
        [1, 1, 1, 1] => CanonicalDiscriminant::FourSimple,
        _ => return Err(QuadEqError::NumericallyAmbiguous),
    })
}

/// r is independent of alpha up to an overall factor: proportionality of
/// the quartics computed at two labels.
pub fn r_alpha_independent(kind: &QuadKind, a1: Complex64, a2: Complex64, tol: f64) -> Result<bool, QuadEqError> {
    let b = Complex64::new(0.53, -0.29);
    let (h1, _) = biquadratic_g(kind, a1, b)?;
    let (h2, _) = biquadratic_g(kind, a2, b)?;
    let r1 = discriminant_r(&h1);
    let r2 = discriminant_r(&h2);
    let s1 = r1.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let s2 = r2.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if s1 < 1e-10 && s2 < 1e-10 {
        return Ok(true);
    }
    // ratio at the dominant coefficient
    let idx = (0..5).max_by(|&i, &j| r1[i].norm().partial_cmp(&r1[j].norm()).unwrap()).unwrap();
    if r2[idx].norm() < 1e-14 {
        return Ok(false);
    }
    let rho = r1[idx] / r2[idx];
    Ok((0..5).all(|i| (r1[i] - rho * r2[i]).norm() <= tol * s1.max(s2 * rho.norm())))
}

/// Convenience: the canonical tag for a kind, evaluated at generic labels.
pub fn classify_kind(kind: &QuadKind) -> Result<CanonicalDiscriminant, QuadEqError> {
    let a = Complex64::new(1.1, 0.35);
    let b = Complex64::new(-0.62, 0.83);
    let (h, _) = biquadratic_g(kind, a, b)?;
    let r = discriminant_r(&h);
    classify_by_discriminant(&r, h.max_norm() * h.max_norm())
}
