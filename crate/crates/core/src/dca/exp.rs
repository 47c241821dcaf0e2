//! The discrete exponential e(n; z) = prod ((z + theta_k)/(z - theta_k))^{n_k}
//! and the expansion of exponentially bounded discrete holomorphic
//! functions over it, realized by exact residue sums.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::DcaError;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// e(n; z) over Z^d with slopes theta.
pub fn discrete_exp(theta: &[Complex64], n: &[i64], z: Complex64) -> Result<Complex64, DcaError> {
    let mut acc = ONE;
    for (k, &nk) in n.iter().enumerate() {
        if nk == 0 {
            continue;
        }
        let num = z + theta[k];
        let den = z - theta[k];
        if den.norm() < 1e-14 || num.norm() < 1e-14 {
            return Err(DcaError::PoleHit);
        }
        let ratio = num / den;
        acc *= ratio.powi(nk as i32);
    }
    Ok(acc)
}

/// Truncated power series in the local variable t around a pole.
#[derive(Debug, Clone)]
pub(crate) struct TSeries {
    pub(crate) c: Vec<Complex64>,
}

impl TSeries {
    pub(crate) fn zero(order: usize) -> Self {
        TSeries { c: vec![ZERO; order] }
    }

    pub(crate) fn constant(order: usize, v: Complex64) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = v;
        s
    }

    /// a + t
    pub(crate) fn linear(order: usize, a: Complex64) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = a;
        if order > 1 {
            s.c[1] = ONE;
        }
        s
    }

    pub(crate) fn mul(&self, rhs: &TSeries) -> TSeries {
        let order = self.c.len();
        let mut out = TSeries::zero(order);
        for i in 0..order {
            if self.c[i] == ZERO {
                continue;
            }
            for j in 0..order - i {
                out.c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        out
    }

    pub(crate) fn add(&self, rhs: &TSeries) -> TSeries {
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
        out
    }

    pub(crate) fn scale(&self, s: Complex64) -> TSeries {
        TSeries { c: self.c.iter().map(|v| v * s).collect() }
    }

    /// multiply by t^m (shift coefficients up)
    #[allow(dead_code)]
    pub(crate) fn shift_up(&self, m: usize) -> TSeries {
        let order = self.c.len();
        let mut out = TSeries::zero(order);
        for idx in 0..order.saturating_sub(m) {
            out.c[idx + m] = self.c[idx];
        }
        out
    }

    /// 1 / (a + t), a != 0
    pub(crate) fn inv_linear(order: usize, a: Complex64) -> Result<TSeries, DcaError> {
        if a.norm() < 1e-14 {
            return Err(DcaError::PoleHit);
        }
        let mut s = TSeries::zero(order);
        let mut cur = ONE / a;
        for k in 0..order {
            s.c[k] = cur;
            cur *= -ONE / a;
        }
        Ok(s)
    }

    pub(crate) fn pow_nonneg(&self, n: i64) -> TSeries {
        let order = self.c.len();
        if n == 0 {
            return TSeries::constant(order, ONE);
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.mul(self);
        }
        out
    }
}

/// Restrictions of f to the coordinate axes, enough to expand over the
/// exponentials: values f(n e_k) for n in [-reach, reach].
#[derive(Debug, Clone)]
pub struct ExpansionData {
    pub theta: Vec<Complex64>,
    /// axis_values[k][reach + n] = f(n e_k)
    pub axis_values: Vec<Vec<Complex64>>,
    pub reach: usize,
}

impl ExpansionData {
    pub fn axis(&self, k: usize, n: i64) -> Complex64 {
        self.axis_values[k][(self.reach as i64 + n) as usize]
    }
}

/// Expansion data for a function given on the axes.
pub fn exp_expansion(
    theta: &[Complex64],
    axis_values: Vec<Vec<Complex64>>,
    reach: usize,
) -> Result<ExpansionData, DcaError> {
    if axis_values.len() != theta.len() || axis_values.iter().any(|v| v.len() != 2 * reach + 1) {
        return Err(DcaError::BadInput);
    }
    Ok(ExpansionData { theta: theta.to_vec(), axis_values, reach })
}

/// The analytic germ of the expansion density near the pole eps theta_k,
/// as a truncated series in t = lambda - eps theta_k:
/// g(lambda) = 1/(2 lambda) [f(eps e_k) - f(0)
///   + sum_{n >= 1} rho(lambda)^n (f((n+1) eps e_k) - f((n-1) eps e_k))]
/// with rho = (lambda - eps theta_k)/(lambda + eps theta_k). Terms beyond
/// the truncation order cannot contribute to the residues.
fn g_series(data: &ExpansionData, k: usize, eps: i64, order: usize) -> Result<TSeries, DcaError> {
    let p = data.theta[k] * eps as f64;
    // rho(t) = t / (t + 2p)
    let rho = TSeries::linear(order, ZERO).mul(&TSeries::inv_linear(order, 2.0 * p)?);
    let mut bracket = TSeries::constant(order, data.axis(k, eps) - data.axis(k, 0));
    let mut rho_n = TSeries::constant(order, ONE);
    for n in 1..order as i64 {
        rho_n = rho_n.mul(&rho);
        let c = data.axis(k, (n + 1) * eps) - data.axis(k, (n - 1) * eps);
        bracket = bracket.add(&rho_n.scale(c));
    }
    // 1 / (2 lambda) = 1 / (2 (p + t))
    let half_inv_lambda = TSeries::inv_linear(order, p)?.scale(Complex64::new(0.5, 0.0));
    Ok(bracket.mul(&half_inv_lambda))
}

/// e(n; lambda) near the pole p = eps theta_k: the analytic part as a
/// series in t, with e = series / t^m for the pole order m = |n_k|.
pub(crate) fn exp_series_at_pole(
    theta: &[Complex64],
    n: &[i64],
    k: usize,
    eps: i64,
    order: usize,
) -> Result<(TSeries, usize), DcaError> {
    let p = theta[k] * eps as f64;
    let mut acc = TSeries::constant(order, ONE);
    let mut pole_order = 0usize;
    for (j, &nj) in n.iter().enumerate() {
        if nj == 0 {
            continue;
        }
        let a_plus = p + theta[j]; // (lambda + theta_j) = a_plus + t
        let a_minus = p - theta[j]; // (lambda - theta_j) = a_minus + t
        if j == k {
            // one linear factor is exactly t; with eps = sign(n_k) it sits
            // in the denominator, giving the pole of order |n_k|
            debug_assert_eq!(eps, nj.signum());
            pole_order = nj.unsigned_abs() as usize;
            let base = if eps > 0 {
                // (a_plus + t)^{n_k} / t^{n_k}
                TSeries::linear(order, a_plus).pow_nonneg(nj)
            } else {
                // ((lambda - theta)/(lambda + theta))^{|n_k|}
                //   = (a_minus + t)^{|n_k|} / t^{|n_k|}
                TSeries::linear(order, a_minus).pow_nonneg(-nj)
            };
            acc = acc.mul(&base);
            continue;
        }
        let factor = if nj > 0 {
            TSeries::linear(order, a_plus)
                .pow_nonneg(nj)
                .mul(&TSeries::inv_linear(order, a_minus)?.pow_nonneg(nj))
        } else {
            TSeries::linear(order, a_minus)
                .pow_nonneg(-nj)
                .mul(&TSeries::inv_linear(order, a_plus)?.pow_nonneg(-nj))
        };
        acc = acc.mul(&factor);
    }
    Ok((acc, pole_order))
}

/// Reconstruct f(n) - f(0) as the sum of residues of g(lambda) e(n; lambda)
/// over the active poles eps_k theta_k.
pub fn reconstruct(data: &ExpansionData, n: &[i64]) -> Result<Complex64, DcaError> {
    let mut acc = ZERO;
    for (k, &nk) in n.iter().enumerate() {
        if nk == 0 {
            continue;
        }
        let eps: i64 = if nk > 0 { 1 } else { -1 };
        let m = nk.unsigned_abs() as usize;
        if m > data.reach {
            return Err(DcaError::BadInput);
        }
        let order = m + 1;
        let g = g_series(data, k, eps, order)?;
        let (e_analytic, pole_order) = exp_series_at_pole(&data.theta, n, k, eps, order)?;
        debug_assert_eq!(pole_order, m);
        let prod = g.mul(&e_analytic);
        // residue: coefficient of t^{m-1}
        acc += prod.c[m - 1];
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thetas() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
    }

    #[test]
    fn exp_basic_values() {
        let th = thetas();
        assert_eq!(discrete_exp(&th, &[0, 0], Complex64::new(0.7, 0.3)).unwrap(), ONE);
        // n = e_k, z = 2 theta_k -> 3
        let v = discrete_exp(&th, &[1, 0], Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        assert!(discrete_exp(&th, &[1, 0], Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn exp_satisfies_cr_on_faces() {
        let th = thetas();
        let z = Complex64::new(0.37, -1.21);
        let mut worst = 0.0f64;
        for a in -2..2i64 {
            for b in -2..2i64 {
                let f = |n: [i64; 2]| discrete_exp(&th, &n, z).unwrap();
                let r = (f([a + 1, b + 1]) - f([a, b]))
                    - (th[0] + th[1]) / (th[0] - th[1]) * (f([a + 1, b]) - f([a, b + 1]));
                worst = worst.max(r.norm());
            }
        }
        assert!(worst < 1e-12, "CR residual {worst}");
    }

    fn axis_table<F: Fn(i64, i64) -> Complex64>(f: F, reach: usize) -> Vec<Vec<Complex64>> {
        let r = reach as i64;
        vec![
            (-r..=r).map(|n| f(n, 0)).collect(),
            (-r..=r).map(|n| f(0, n)).collect(),
        ]
    }

    #[test]
    fn reconstruct_exponential() {
        let th = thetas();
        let z0 = Complex64::new(1.7, 0.9);
        let f = |a: i64, b: i64| discrete_exp(&th, &[a, b], z0).unwrap();
        let data = exp_expansion(&th, axis_table(f, 8), 8).unwrap();
        let mut worst = 0.0f64;
        for a in 0..6i64 {
            for b in 0..6i64 {
                let got = reconstruct(&data, &[a, b]).unwrap();
                let want = f(a, b) - f(0, 0);
                worst = worst.max((got - want).norm());
            }
        }
        assert!(worst < 1e-10, "reconstruction error {worst}");
    }

    #[test]
    fn reconstruct_p_squared_and_constant() {
        let th = thetas();
        let p = |a: i64, b: i64| th[0] * a as f64 + th[1] * b as f64;
        let f = |a: i64, b: i64| p(a, b) * p(a, b);
        let data = exp_expansion(&th, axis_table(f, 8), 8).unwrap();
        let mut worst = 0.0f64;
        for a in 0..6i64 {
            for b in 0..6i64 {
                let got = reconstruct(&data, &[a, b]).unwrap();
                worst = worst.max((got - f(a, b)).norm());
            }
        }
        assert!(worst < 1e-10, "p^2 reconstruction error {worst}");
        // constant function reconstructs to zero increments
        let c = |_: i64, _: i64| Complex64::new(2.5, -0.5);
        let data = exp_expansion(&th, axis_table(c, 6), 6).unwrap();
        for a in 0..4i64 {
            for b in 0..4i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                assert!(reconstruct(&data, &[a, b]).unwrap().norm() < 1e-13);
            }
        }
    }

    #[test]
    fn reconstruct_mixed_octant() {
        let th = thetas();
        let z0 = Complex64::new(-0.8, 1.3);
        let f = |a: i64, b: i64| discrete_exp(&th, &[a, b], z0).unwrap();
        let data = exp_expansion(&th, axis_table(f, 8), 8).unwrap();
        let mut worst = 0.0f64;
        for a in -5..0i64 {
            for b in 0..5i64 {
                let got = reconstruct(&data, &[a, b]).unwrap();
                let want = f(a, b) - f(0, 0);
                worst = worst.max((got - want).norm());
            }
        }
        assert!(worst < 1e-10, "mixed octant reconstruction {worst}");
    }
}
