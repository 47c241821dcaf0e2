//! Discrete z^{2a}, w^{2a-1} and the nonlinear discrete logarithm on
//! octant sectors: axis closed forms, octant fills, and the isomonodromic
//! constraints.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::hirota::{hirota_fill_octant, octant_points, HirotaOctant};
use super::{solve_cross_ratio_third, PatternError};
use crate::dca::Sectors;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Axis values of the discrete z^{2a} on the r-th semi-axis:
/// z_{2n+1} = prod_{k=1}^n (k+a)/(k-a) theta_r^{2a},
/// z_{2n} = prod_{k=1}^{n-1} (k+a)/(k-a) * n/(n-a) * theta_r^{2a}.
pub fn zpow_axis(sectors: &Sectors, a: f64, r: i64, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let theta_2a = Complex64::from_polar(1.0, 2.0 * a * sectors.gamma_at(r));
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        let mut prod = 1.0f64;
        for k in 1..=m {
            prod *= (k as f64 + a) / (k as f64 - a);
        }
        theta_2a * prod
    } else {
        let m = n / 2;
        let mut prod = 1.0f64;
        for k in 1..m {
            prod *= (k as f64 + a) / (k as f64 - a);
        }
        theta_2a * (prod * m as f64 / (m as f64 - a))
    }
}

/// Axis values of the discrete w^{2a-1}: w_{2n} = prod (k-1+a)/(k-a),
/// w_{2n+1} = theta_r^{2a-1}; w(0) = 1 so the closed form holds verbatim.
pub fn wpow_axis(sectors: &Sectors, a: f64, r: i64, n: usize) -> Complex64 {
    if n % 2 == 1 {
        Complex64::from_polar(1.0, (2.0 * a - 1.0) * sectors.gamma_at(r))
    } else {
        let m = n / 2;
        let mut prod = 1.0f64;
        for k in 1..=m {
            prod *= (k as f64 - 1.0 + a) / (k as f64 - a);
        }
        Complex64::new(prod, 0.0)
    }
}

/// Hirota octant fill of w^{2a-1}.
pub fn wpow_octant(
    sectors: &Sectors,
    a: f64,
    m: i64,
    size: usize,
) -> Result<HirotaOctant, PatternError> {
    hirota_fill_octant(sectors, m, size, &|r, n| wpow_axis(sectors, a, r, n), 1e-8)
}

/// z^{2a} on the octant by integrating the w-field:
/// z(n + e_k) = z(n) + theta_k w(n) w(n + e_k); the Hirota equation closes
/// the form. Returns the field and the worst closure deviation.
pub fn zpow_from_w(
    sectors: &Sectors,
    w: &HirotaOctant,
) -> Result<(BTreeMap<Vec<i64>, Complex64>, f64), PatternError> {
    let d = sectors.dim();
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(w.m + r)).collect();
    let mut z: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    z.insert(vec![0; d], Complex64::new(0.0, 0.0));
    let mut pts = octant_points(d, w.size);
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    let mut worst = 0.0f64;
    for p in pts {
        if p.iter().all(|&v| v == 0) {
            continue;
        }
        let mut computed: Option<Complex64> = None;
        for k in 0..d {
            if p[k] == 0 {
                continue;
            }
            let mut prev = p.clone();
            prev[k] -= 1;
            let (Some(&zp), Some(wp), Some(wc)) = (z.get(&prev), w.at(&prev), w.at(&p)) else {
                continue;
            };
            let val = zp + theta[k] * wp * wc;
            match computed {
                None => computed = Some(val),
                Some(prevv) => worst = worst.max((prevv - val).norm()),
            }
        }
        z.insert(p, computed.ok_or(PatternError::BadInput)?);
    }
    Ok((z, worst))
}

/// z^{2a} filled directly through the cross-ratio equations from the axis
/// closed forms (independent route to `zpow_from_w`).
pub fn zpow_octant_direct(
    sectors: &Sectors,
    a: f64,
    m: i64,
    size: usize,
) -> Result<BTreeMap<Vec<i64>, Complex64>, PatternError> {
    let d = sectors.dim();
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let mut z: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    z.insert(vec![0; d], Complex64::new(0.0, 0.0));
    for k in 0..d {
        for n in 1..=size {
            let mut p = vec![0i64; d];
            p[k] = n as i64;
            z.insert(p, zpow_axis(sectors, a, m + k as i64, n));
        }
    }
    let mut pts = octant_points(d, size);
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    for p in pts {
        let nz: Vec<usize> = (0..d).filter(|&k| p[k] > 0).collect();
        if nz.len() < 2 {
            continue;
        }
        let mut computed: Option<Complex64> = None;
        for ai in 0..nz.len() {
            for bi in (ai + 1)..nz.len() {
                let (j, k) = (nz[ai], nz[bi]);
                let mut base = p.clone();
                base[j] -= 1;
                base[k] -= 1;
                let mut pj = p.clone();
                pj[k] -= 1;
                let mut pk = p.clone();
                pk[j] -= 1;
                let (Some(&z0), Some(&zj), Some(&zk)) =
                    (z.get(&base), z.get(&pj), z.get(&pk))
                else {
                    continue;
                };
                let rho = (theta[j] / theta[k]) * (theta[j] / theta[k]);
                let val = solve_cross_ratio_third(z0, zj, zk, rho)?;
                match computed {
                    None => computed = Some(val),
                    Some(prev) => {
                        if (prev - val).norm() > 1e-7 * (1.0 + prev.norm()) {
                            return Err(PatternError::IllPosedPath);
                        }
                    }
                }
            }
        }
        z.insert(p, computed.ok_or(PatternError::BadInput)?);
    }
    Ok(z)
}

/// Stable w^{2a-1} fill on the quarter-plane sector S_m of Z^2: the first
/// row comes from the Hirota face equation, all further rows from the
/// isomonodromic constraint, which propagates without the exponential
/// error growth of the plain face-by-face fill. Values are projected onto
/// their reality classes (unimodular at odd, real at even parity), which
/// the exact solution occupies. Fills the staircase x + y <= 2 size + 1
/// and returns the [0, size]^2 square.
pub fn wpow_octant_stable(
    sectors: &Sectors,
    a: f64,
    m: i64,
    size: usize,
) -> Result<HirotaOctant, PatternError> {
    if sectors.dim() != 2 {
        return Err(PatternError::BadInput);
    }
    let reach = 2 * size as i64 + 1;
    let th0 = sectors.theta_at(m);
    let th1 = sectors.theta_at(m + 1);
    let mut w: BTreeMap<(i64, i64), Complex64> = BTreeMap::new();
    for n in 0..=reach {
        w.insert((n, 0), wpow_axis(sectors, a, m, n as usize));
        w.insert((0, n), wpow_axis(sectors, a, m + 1, n as usize));
    }
    let project = |x: i64, y: i64, v: Complex64| -> Complex64 {
        if (x + y).rem_euclid(2) == 1 {
            v / v.norm()
        } else {
            Complex64::new(v.re, 0.0)
        }
    };
    for x in 1..reach {
        let (w00, w10, w01) = (w[&(x - 1, 0)], w[&(x, 0)], w[&(x - 1, 1)]);
        let den = th1 * w10 - th0 * w01;
        if den.norm() < 1e-13 {
            return Err(PatternError::SingularConfiguration);
        }
        let val = w00 * (th1 * w01 - th0 * w10) / den;
        w.insert((x, 1), project(x, 1, val));
    }
    for row in 1..reach {
        for x in 1..(reach - row) {
            let rhs = (a - 0.5) * (1.0 - if (x + row) % 2 == 0 { 1.0 } else { -1.0 });
            let (wp1, wm1, wm2) = (w[&(x + 1, row)], w[&(x - 1, row)], w[&(x, row - 1)]);
            let s = Complex64::new(rhs, 0.0) - x as f64 * (wp1 - wm1) / (wp1 + wm1);
            let mm = row as f64;
            let den = mm - s;
            if den.norm() < 1e-13 {
                return Err(PatternError::SingularConfiguration);
            }
            let val = wm2 * (mm + s) / den;
            w.insert((x, row + 1), project(x, row + 1, val));
        }
    }
    let mut values = BTreeMap::new();
    for x in 0..=size as i64 {
        for y in 0..=size as i64 {
            values.insert(vec![x, y], w[&(x, y)]);
        }
    }
    Ok(HirotaOctant { m, size, values })
}

/// Stable z^{2a} fill on the quarter-plane: first row by the cross-ratio
/// face equation, further rows by the isomonodromic constraint.
pub fn zpow_octant_stable(
    sectors: &Sectors,
    a: f64,
    m: i64,
    size: usize,
) -> Result<BTreeMap<Vec<i64>, Complex64>, PatternError> {
    if sectors.dim() != 2 {
        return Err(PatternError::BadInput);
    }
    let reach = 2 * size as i64 + 1;
    let th0 = sectors.theta_at(m);
    let th1 = sectors.theta_at(m + 1);
    let rho = (th0 / th1) * (th0 / th1);
    let mut z: BTreeMap<(i64, i64), Complex64> = BTreeMap::new();
    for n in 0..=reach {
        z.insert((n, 0), zpow_axis(sectors, a, m, n as usize));
        z.insert((0, n), zpow_axis(sectors, a, m + 1, n as usize));
    }
    for x in 1..reach {
        let val = solve_cross_ratio_third(z[&(x - 1, 0)], z[&(x, 0)], z[&(x - 1, 1)], rho)?;
        z.insert((x, 1), val);
    }
    for row in 1..reach {
        for x in 1..(reach - row) {
            let zc = z[&(x, row)];
            let (zp1, zm1, zm2) = (z[&(x + 1, row)], z[&(x - 1, row)], z[&(x, row - 1)]);
            let den1 = zp1 - zm1;
            if den1.norm() < 1e-14 {
                return Err(PatternError::SingularConfiguration);
            }
            let t1 = x as f64 * (zp1 - zc) * (zc - zm1) / den1;
            let s = a * zc - t1;
            let mm = row as f64;
            let den = mm * (zc - zm2) - s;
            if den.norm() < 1e-14 {
                return Err(PatternError::SingularConfiguration);
            }
            let val = (mm * zc * (zc - zm2) - s * zm2) / den;
            z.insert((x, row + 1), val);
        }
    }
    let mut values = BTreeMap::new();
    for x in 0..=size as i64 {
        for y in 0..=size as i64 {
            values.insert(vec![x, y], z[&(x, y)]);
        }
    }
    Ok(values)
}

/// Stable fill of the nonlinear discrete logarithm on the quarter-plane:
/// first row through the face equations (origin in the 1/L chart), rows
/// beyond through the constraint with right-hand side 1/2.
pub fn dlog_octant_stable(
    sectors: &Sectors,
    m: i64,
    size: usize,
) -> Result<DlogField, PatternError> {
    if sectors.dim() != 2 {
        return Err(PatternError::BadInput);
    }
    let reach = 2 * size as i64 + 1;
    let th0 = sectors.theta_at(m);
    let th1 = sectors.theta_at(m + 1);
    let rho = (th0 / th1) * (th0 / th1);
    let mut z: BTreeMap<(i64, i64), Complex64> = BTreeMap::new();
    for n in 1..=reach {
        z.insert((n, 0), dlog_axis(sectors, m, n as usize).unwrap());
        z.insert((0, n), dlog_axis(sectors, m + 1, n as usize).unwrap());
    }
    // (1, 1) through the infinity chart of the origin face
    {
        let den = ONE - rho;
        if den.norm() < 1e-14 {
            return Err(PatternError::SingularConfiguration);
        }
        z.insert((1, 1), (z[&(0, 1)] - rho * z[&(1, 0)]) / den);
    }
    for x in 2..reach {
        let val = solve_cross_ratio_third(z[&(x - 1, 0)], z[&(x, 0)], z[&(x - 1, 1)], rho)?;
        z.insert((x, 1), val);
    }
    for row in 1..reach {
        for x in 1..(reach - row) {
            let zc = z[&(x, row)];
            let (zp1, zm1) = (z[&(x + 1, row)], z[&(x - 1, row)]);
            let den1 = zp1 - zm1;
            if den1.norm() < 1e-14 {
                return Err(PatternError::SingularConfiguration);
            }
            let t1 = x as f64 * (zp1 - zc) * (zc - zm1) / den1;
            let s = Complex64::new(0.5, 0.0) - t1;
            let mm = row as f64;
            let zm2 = z[&(x, row - 1)];
            let den = mm * (zc - zm2) - s;
            if den.norm() < 1e-14 {
                return Err(PatternError::SingularConfiguration);
            }
            let val = (mm * zc * (zc - zm2) - s * zm2) / den;
            z.insert((x, row + 1), val);
        }
    }
    let mut values = BTreeMap::new();
    for x in 0..=size as i64 {
        for y in 0..=size as i64 {
            if x == 0 && y == 0 {
                continue;
            }
            values.insert(vec![x, y], z[&(x, y)]);
        }
    }
    Ok(DlogField { m, size, values })
}

/// Isomonodromic constraint of z^{2a}:
/// sum_j n_j (z(n+e_j) - z(n)) (z(n) - z(n-e_j)) / (z(n+e_j) - z(n-e_j))
///   = a z(n).
pub fn zpow_constraint_residual(
    z: &BTreeMap<Vec<i64>, Complex64>,
    a: f64,
    n: &[i64],
) -> Option<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &nj) in n.iter().enumerate() {
        if nj == 0 {
            continue;
        }
        let mut up = n.to_vec();
        up[j] += 1;
        let mut dn = n.to_vec();
        dn[j] -= 1;
        let (zu, z0, zd) = (z.get(&up)?, z.get(&n.to_vec())?, z.get(&dn)?);
        let den = zu - zd;
        if den.norm() < 1e-14 {
            return None;
        }
        acc += nj as f64 * (zu - z0) * (z0 - zd) / den;
    }
    Some((acc - a * z.get(&n.to_vec())?).norm())
}

/// Isomonodromic constraint of w^{2a-1}:
/// sum_l n_l (w(n+e_l) - w(n-e_l)) / (w(n+e_l) + w(n-e_l))
///   = (a - 1/2)(1 - (-1)^{sum n}).
pub fn zpow_hirota_constraint_residual(w: &HirotaOctant, a: f64, n: &[i64]) -> Option<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut total = 0i64;
    for (l, &nl) in n.iter().enumerate() {
        total += nl;
        if nl == 0 {
            continue;
        }
        let mut up = n.to_vec();
        up[l] += 1;
        let mut dn = n.to_vec();
        dn[l] -= 1;
        let (wu, wd) = (w.at(&up)?, w.at(&dn)?);
        let den = wu + wd;
        if den.norm() < 1e-14 {
            return None;
        }
        acc += nl as f64 * (wu - wd) / den;
    }
    let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = (a - 0.5) * (1.0 - sign);
    Some((acc - Complex64::new(rhs, 0.0)).norm())
}

/// The nonlinear discrete logarithm: L(0) is the point at infinity, axis
/// values L_{2n+1} = log theta_r + sum_{k<=n} 1/k,
/// L_{2n} = log theta_r + sum_{k<=n-1} 1/k + 1/(2n).
pub fn dlog_axis(sectors: &Sectors, r: i64, n: usize) -> Option<Complex64> {
    if n == 0 {
        return None; // infinity
    }
    let log_theta = Complex64::new(0.0, sectors.gamma_at(r));
    let mut acc = 0.0f64;
    if n % 2 == 1 {
        for k in 1..=(n - 1) / 2 {
            acc += 1.0 / k as f64;
        }
    } else {
        for k in 1..n / 2 {
            acc += 1.0 / k as f64;
        }
        acc += 1.0 / n as f64;
    }
    Some(log_theta + acc)
}

/// Nonlinear discrete logarithm field: finite values everywhere except the
/// origin (tagged infinity).
#[derive(Debug, Clone)]
pub struct DlogField {
    pub m: i64,
    pub size: usize,
    pub values: BTreeMap<Vec<i64>, Complex64>,
}

impl DlogField {
    pub fn at(&self, p: &[i64]) -> Option<Complex64> {
        self.values.get(p).copied()
    }
}

/// Fill the discrete logarithm on an octant: faces touching the origin
/// are solved in the chart 1/L (the origin value is infinity), the rest by
/// the cross-ratio equations.
pub fn dlog_octant(sectors: &Sectors, m: i64, size: usize) -> Result<DlogField, PatternError> {
    let d = sectors.dim();
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let mut values: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for k in 0..d {
        for n in 1..=size {
            let mut p = vec![0i64; d];
            p[k] = n as i64;
            values.insert(p, dlog_axis(sectors, m + k as i64, n).unwrap());
        }
    }
    let mut pts = octant_points(d, size);
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    for p in pts {
        let nz: Vec<usize> = (0..d).filter(|&k| p[k] > 0).collect();
        if nz.len() < 2 || values.contains_key(&p) {
            continue;
        }
        let mut computed: Option<Complex64> = None;
        for ai in 0..nz.len() {
            for bi in (ai + 1)..nz.len() {
                let (j, k) = (nz[ai], nz[bi]);
                let mut base = p.clone();
                base[j] -= 1;
                base[k] -= 1;
                let mut pj = p.clone();
                pj[k] -= 1;
                let mut pk = p.clone();
                pk[j] -= 1;
                let rho = (theta[j] / theta[k]) * (theta[j] / theta[k]);
                let (Some(&zj), Some(&zk)) = (values.get(&pj), values.get(&pk)) else {
                    continue;
                };
                let val = if base.iter().all(|&v| v == 0) {
                    // origin at infinity: q(inf, zj, X, zk) = (zk - X)/(zj - X)
                    // wait: q(a,b,c,d) with a -> inf gives (c - d)/(b - c) * (-1)
                    // = (d - c)/(b - c); solve (zk - X)/(zj - X) = rho
                    let den = ONE - rho;
                    if den.norm() < 1e-14 {
                        return Err(PatternError::SingularConfiguration);
                    }
                    (zk - rho * zj) / den
                } else {
                    let Some(&z0) = values.get(&base) else { continue };
                    solve_cross_ratio_third(z0, zj, zk, rho)?
                };
                match computed {
                    None => computed = Some(val),
                    Some(prev) => {
                        if (prev - val).norm() > 1e-7 * (1.0 + prev.norm()) {
                            return Err(PatternError::IllPosedPath);
                        }
                    }
                }
            }
        }
        values.insert(p, computed.ok_or(PatternError::BadInput)?);
    }
    Ok(DlogField { m, size, values })
}

/// Constraint of the discrete logarithm:
/// sum_j n_j (L(n+e_j) - L(n)) (L(n) - L(n-e_j)) / (L(n+e_j) - L(n-e_j)) = 1/2
/// at points away from the origin.
pub fn dlog_constraint_residual(field: &DlogField, n: &[i64]) -> Option<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &nj) in n.iter().enumerate() {
        if nj == 0 {
            continue;
        }
        let mut up = n.to_vec();
        up[j] += 1;
        let mut dn = n.to_vec();
        dn[j] -= 1;
        if dn.iter().all(|&v| v == 0) {
            // L at the origin is infinite: the term limits to L(n+e_j) - L(n)
            let (lu, l0) = (field.at(&up)?, field.at(n)?);
            acc += nj as f64 * (lu - l0);
            continue;
        }
        let (lu, l0, ld) = (field.at(&up)?, field.at(n)?, field.at(&dn)?);
        let den = lu - ld;
        if den.norm() < 1e-14 {
            return None;
        }
        acc += nj as f64 * (lu - l0) * (l0 - ld) / den;
    }
    Some((acc - Complex64::new(0.5, 0.0)).norm())
}
