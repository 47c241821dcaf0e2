//! Linearization of integrable pattern families: derivatives of
//! one-parameter solution families solve discrete Cauchy-Riemann
//! equations, and the z- and w-descriptions pair as discrete derivative
//! and anti-derivative.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dca::Sectors;

/// Discrete holomorphy residual on an octant field: for every unit square
/// (f(n + e_j + e_k) - f(n)) (theta_j - theta_k)
///   - (f(n + e_j) - f(n + e_k)) (theta_j + theta_k) = 0.
pub fn holomorphy_residual_octant(
    sectors: &Sectors,
    m: i64,
    f: &BTreeMap<Vec<i64>, Complex64>,
    size: usize,
    d: usize,
) -> f64 {
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let mut worst = 0.0f64;
    for (p, &f0) in f {
        for j in 0..d {
            for k in (j + 1)..d {
                if p[j] as usize >= size || p[k] as usize >= size {
                    continue;
                }
                let mut pj = p.clone();
                pj[j] += 1;
                let mut pk = p.clone();
                pk[k] += 1;
                let mut pjk = p.clone();
                pjk[j] += 1;
                pjk[k] += 1;
                let (Some(&fj), Some(&fk), Some(&fjk)) = (f.get(&pj), f.get(&pk), f.get(&pjk))
                else {
                    continue;
                };
                let r = (fjk - f0) * (theta[j] - theta[k]) - (fj - fk) * (theta[j] + theta[k]);
                worst = worst.max(r.norm());
            }
        }
    }
    worst
}

/// Residual of the derivative pairing g(n + e_k) - g(n) =
/// (f(n) + f(n + e_k)) theta_k over all octant edges.
pub fn derivative_pairing_residual(
    sectors: &Sectors,
    m: i64,
    f: &BTreeMap<Vec<i64>, Complex64>,
    g: &BTreeMap<Vec<i64>, Complex64>,
    d: usize,
) -> f64 {
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let mut worst = 0.0f64;
    for (p, &f0) in f {
        for k in 0..d {
            let mut up = p.clone();
            up[k] += 1;
            let (Some(&fu), Some(&g0), Some(&gu)) = (f.get(&up), g.get(p), g.get(&up)) else {
                continue;
            };
            let r = (gu - g0) - (f0 + fu) * theta[k];
            worst = worst.max(r.norm());
        }
    }
    worst
}

/// Central-difference linearization of a solution family indexed by a real
/// parameter: returns (g = dz/deps, f = w^{-1} dw/deps).
pub fn linearize_octant(
    z_plus: &BTreeMap<Vec<i64>, Complex64>,
    z_minus: &BTreeMap<Vec<i64>, Complex64>,
    w_base: &BTreeMap<Vec<i64>, Complex64>,
    w_plus: &BTreeMap<Vec<i64>, Complex64>,
    w_minus: &BTreeMap<Vec<i64>, Complex64>,
    h: f64,
) -> (BTreeMap<Vec<i64>, Complex64>, BTreeMap<Vec<i64>, Complex64>) {
    let mut g = BTreeMap::new();
    for (p, zp) in z_plus {
        if let Some(zm) = z_minus.get(p) {
            g.insert(p.clone(), (zp - zm) / (2.0 * h));
        }
    }
    let mut f = BTreeMap::new();
    for (p, wp) in w_plus {
        if let (Some(wm), Some(w0)) = (w_minus.get(p), w_base.get(p)) {
            f.insert(p.clone(), (wp - wm) / (2.0 * h) / w0);
        }
    }
    (g, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dca::{discrete_log_octant, log_white_values_z2};
    use crate::patterns::{wpow_octant, zpow_from_w};

    fn z2_sectors() -> Sectors {
        Sectors::new(
            alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            0.0,
        )
    }

    #[test]
    fn linearized_family_is_holomorphic_and_paired() {
        // the linearization statement is at the isoradial point a = 1/2
        // where the family passes through the trivial solution
        let s = z2_sectors();
        let h = 1e-4;
        let a0 = 0.5;
        let size = 8;
        let wp = wpow_octant(&s, a0 + h, 0, size).unwrap();
        let wm = wpow_octant(&s, a0 - h, 0, size).unwrap();
        let w0 = wpow_octant(&s, a0, 0, size).unwrap();
        let (zp, _) = zpow_from_w(&s, &wp).unwrap();
        let (zm, _) = zpow_from_w(&s, &wm).unwrap();
        let (g, f) = linearize_octant(&zp, &zm, &w0.values, &wp.values, &wm.values, h);
        let rf = holomorphy_residual_octant(&s, 0, &f, size, 2);
        let rg = holomorphy_residual_octant(&s, 0, &g, size, 2);
        assert!(rf < 1e-6, "f residual {rf}");
        assert!(rg < 1e-5, "g residual {rg}");
        let pair = derivative_pairing_residual(&s, 0, &f, &g, 2);
        assert!(pair < 1e-5, "pairing residual {pair}");
    }

    #[test]
    fn constant_family_linearizes_to_zero() {
        let s = z2_sectors();
        let w = wpow_octant(&s, 0.4, 0, 5).unwrap();
        let (z, _) = zpow_from_w(&s, &w).unwrap();
        let (g, f) = linearize_octant(&z, &z, &w.values, &w.values, &w.values, 1e-4);
        for v in g.values() {
            assert!(v.norm() < 1e-12);
        }
        for v in f.values() {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn w_family_derivative_is_discrete_logarithm() {
        // (1/2) d/da w^{2a-1} at a = 1/2 equals the linear-theory discrete
        // logarithm
        let s = z2_sectors();
        let h = 1e-4;
        let size = 10;
        let wp = wpow_octant(&s, 0.5 + h, 0, size).unwrap();
        let wm = wpow_octant(&s, 0.5 - h, 0, size).unwrap();
        let ell = discrete_log_octant(&s, 0, size).unwrap();
        let mut worst = 0.0f64;
        for (p, wpv) in &wp.values {
            let wmv = wm.values[p];
            let deriv = (wpv - wmv) / (2.0 * h) * 0.5;
            let expect = ell.at(p).unwrap();
            worst = worst.max((deriv - expect).norm());
        }
        assert!(worst < 1e-6, "w-derivative vs discrete log: {worst}");
        let _ = log_white_values_z2(4).unwrap();
    }

    #[test]
    fn quadratic_family_gives_p_squared_antiderivative() {
        // z_eps = p + eps p^2 on the octant: g = p^2, f = p up to a
        // black-white constant
        let s = z2_sectors();
        let h = 1e-5;
        let size = 6;
        let p_of = |x: i64, y: i64| Complex64::new(x as f64, y as f64);
        let mut z_plus = BTreeMap::new();
        let mut z_minus = BTreeMap::new();
        let mut w_base = BTreeMap::new();
        for x in 0..=size as i64 {
            for y in 0..=size as i64 {
                let p = p_of(x, y);
                z_plus.insert(alloc::vec![x, y], p + h * p * p);
                z_minus.insert(alloc::vec![x, y], p - h * p * p);
                w_base.insert(alloc::vec![x, y], Complex64::new(1.0, 0.0));
            }
        }
        // w fields from the z families: w(x) w(y) = (z(y) - z(x))/theta with
        // w(0) = 1; build by the same integration used in the pattern layer
        let w_from = |z: &BTreeMap<Vec<i64>, Complex64>| -> BTreeMap<Vec<i64>, Complex64> {
            let mut w = BTreeMap::new();
            w.insert(alloc::vec![0i64, 0], Complex64::new(1.0, 0.0));
            for total in 1..=(2 * size as i64) {
                for x in 0..=size as i64 {
                    let y = total - x;
                    if !(0..=size as i64).contains(&y) {
                        continue;
                    }
                    let key = alloc::vec![x, y];
                    let (prev, theta) = if x > 0 {
                        (alloc::vec![x - 1, y], Complex64::new(1.0, 0.0))
                    } else {
                        (alloc::vec![x, y - 1], Complex64::new(0.0, 1.0))
                    };
                    let wprev = w[&prev];
                    let val = (z[&key] - z[&prev]) / (theta * wprev);
                    w.insert(key, val);
                }
            }
            w
        };
        let w_plus = w_from(&z_plus);
        let w_minus = w_from(&z_minus);
        let (g, f) = linearize_octant(&z_plus, &z_minus, &w_base, &w_plus, &w_minus, h);
        // g = p^2 exactly
        for (p, v) in &g {
            let expect = p_of(p[0], p[1]) * p_of(p[0], p[1]);
            assert!((v - expect).norm() < 1e-9);
        }
        // f is holomorphic and f(x) + f(y) = p(x) + p(y) along edges
        let rf = holomorphy_residual_octant(&s, 0, &f, size, 2);
        assert!(rf < 1e-8, "f residual {rf}");
        let pair = derivative_pairing_residual(&s, 0, &f, &g, 2);
        assert!(pair < 1e-6, "pairing {pair}");
    }
}
