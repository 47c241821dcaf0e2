//! The discrete logarithmic function on the branched covering of octant
//! sectors, its axis values, the octant fill through the square
//! Cauchy-Riemann equations, and the Green's function on Z^2.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::DcaError;

/// Slope alphabet theta_1..theta_d with the argument assignment
/// gamma_{r+1} - gamma_r in (0, pi), gamma_{r+d} = gamma_r + pi; indices
/// are 2d-periodic with theta_{k+d} = -theta_k.
#[derive(Debug, Clone)]
pub struct Sectors {
    pub theta: Vec<Complex64>,
    pub gamma1: f64,
}

impl Sectors {
    pub fn new(theta: Vec<Complex64>, gamma1: f64) -> Self {
        Sectors { theta, gamma1 }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// theta_r for r in Z (0-based: r = 0 is theta_1).
    pub fn theta_at(&self, r: i64) -> Complex64 {
        let d = self.dim() as i64;
        let m = r.rem_euclid(2 * d);
        if m < d {
            self.theta[m as usize]
        } else {
            -self.theta[(m - d) as usize]
        }
    }

    /// gamma_r: argument of theta_r on the covering.
    pub fn gamma_at(&self, r: i64) -> f64 {
        let d = self.dim() as i64;
        let base = r.rem_euclid(2 * d);
        let turns = (r - base) / (2 * d);
        let mut g = self.gamma1;
        for k in 1..=base {
            let prev = self.theta_at(k - 1);
            let cur = self.theta_at(k);
            let mut step = (cur / prev).arg();
            if step <= 0.0 {
                step += 2.0 * core::f64::consts::PI;
            }
            g += step;
        }
        g + 2.0 * core::f64::consts::PI * turns as f64
    }
}

/// Axis values of the discrete logarithm on the r-th semi-axis of a
/// sector: l_0 = 0, l_{2n} = 2 (1 + 1/3 + ... + 1/(2n-1)), l_{2n+1} =
/// i gamma_r.
pub fn discrete_log_axis(sectors: &Sectors, r: i64, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    if n % 2 == 1 {
        Complex64::new(0.0, sectors.gamma_at(r))
    } else {
        let mut acc = 0.0;
        for j in 1..=(n / 2) {
            acc += 1.0 / (2.0 * j as f64 - 1.0);
        }
        Complex64::new(2.0 * acc, 0.0)
    }
}

/// Values on an octant of the covering, filled from axis data through the
/// square Cauchy-Riemann equations
/// f(n + e_j + e_k) = f(n) + (theta_j + theta_k)/(theta_j - theta_k)
/// (f(n + e_j) - f(n + e_k)).
#[derive(Debug, Clone)]
pub struct OctantField {
    /// first axis index m: the octant spans e_m .. e_{m+d-1}
    pub m: i64,
    pub size: usize,
    pub values: BTreeMap<Vec<i64>, Complex64>,
}

impl OctantField {
    pub fn at(&self, p: &[i64]) -> Option<Complex64> {
        self.values.get(p).copied()
    }
}

/// Fill an octant from axis value functions; asserts agreement of double
/// determinations (within `tol`) at points reachable through two faces.
pub fn fill_octant(
    sectors: &Sectors,
    m: i64,
    size: usize,
    axis: &dyn Fn(i64, usize) -> Complex64,
    tol: f64,
) -> Result<OctantField, DcaError> {
    let d = sectors.dim();
    let mut values: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    // axes
    let zero = alloc::vec![0i64; d];
    values.insert(zero, axis(m, 0));
    for axis_idx in 0..d {
        for n in 1..=size {
            let mut p = alloc::vec![0i64; d];
            p[axis_idx] = n as i64;
            values.insert(p, axis(m + axis_idx as i64, n));
        }
    }
    // wavefront fill by l1 norm
    let theta_loc: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let points = octant_points(d, size);
    for p in points {
        let nz: Vec<usize> = (0..d).filter(|&k| p[k] > 0).collect();
        if nz.len() < 2 {
            continue; // axis point, already set
        }
        let mut computed: Option<Complex64> = None;
        for a in 0..nz.len() {
            for b in (a + 1)..nz.len() {
                let (j, k) = (nz[a], nz[b]);
                let mut base = p.clone();
                base[j] -= 1;
                base[k] -= 1;
                let mut pj = p.clone();
                pj[k] -= 1;
                let mut pk = p.clone();
                pk[j] -= 1;
                let (Some(&f0), Some(&fj), Some(&fk)) =
                    (values.get(&base), values.get(&pj), values.get(&pk))
                else {
                    continue;
                };
                let rho = (theta_loc[j] + theta_loc[k]) / (theta_loc[j] - theta_loc[k]);
                let val = f0 + rho * (fj - fk);
                match computed {
                    None => computed = Some(val),
                    Some(prev) => {
                        if (prev - val).norm() > tol * (1.0 + prev.norm()) {
                            return Err(DcaError::NotHarmonic);
                        }
                    }
                }
            }
        }
        let val = computed.ok_or(DcaError::BadInput)?;
        values.insert(p, val);
    }
    Ok(OctantField { m, size, values })
}

fn octant_points(d: usize, size: usize) -> Vec<Vec<i64>> {
    let mut pts = alloc::vec![alloc::vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for p in pts {
            for v in 0..=size as i64 {
                let mut q: Vec<i64> = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        pts = next;
    }
    pts.sort_by_key(|p: &Vec<i64>| p.iter().sum::<i64>());
    pts
}

/// Discrete logarithm on the sector octant S_m, filled face by face
/// through the square Cauchy-Riemann equations. Reliable at desk-scale
/// octants (the double-determination assert guards the fill); the
/// black-vertex values at large radius come from `green_function_z2`.
pub fn discrete_log_octant(sectors: &Sectors, m: i64, size: usize) -> Result<OctantField, DcaError> {
    fill_octant(sectors, m, size, &|r, n| discrete_log_axis(sectors, r, n), 1e-8)
}

/// Discrete logarithm at a single octant point as the residue sum of its
/// defining contour integral; the density log(lambda)/(2 lambda) is
/// analytic at each active pole, with the branch fixed by the sector's
/// argument assignment. Exact up to rounding at small orders (binomial
/// cancellation grows with |n|; keep |n|_1 below ~15).
pub fn discrete_log_value(sectors: &Sectors, m: i64, n: &[i64]) -> Result<Complex64, DcaError> {
    use super::exp::{exp_series_at_pole, TSeries};
    let d = sectors.dim();
    if n.len() != d || n.iter().any(|&v| v < 0) {
        return Err(DcaError::BadInput);
    }
    let theta: Vec<Complex64> = (0..d as i64).map(|r| sectors.theta_at(m + r)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &nk) in n.iter().enumerate() {
        if nk == 0 {
            continue;
        }
        let order = nk as usize + 1;
        let p = theta[k];
        // log(p + t) with log(p) = ln|p| + i gamma_r on this sheet
        let log_p = Complex64::new(p.norm().ln(), sectors.gamma_at(m + k as i64));
        let mut log_series = TSeries::constant(order, log_p);
        let inv_p = TSeries::constant(order, 1.0 / p);
        let t_over_p = TSeries::linear(order, Complex64::new(0.0, 0.0)).mul(&inv_p);
        let mut pow = t_over_p.clone();
        for j in 1..order as i64 {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            log_series = log_series.add(&pow.scale(Complex64::new(sign / j as f64, 0.0)));
            pow = pow.mul(&t_over_p);
        }
        let density = log_series
            .mul(&TSeries::inv_linear(order, p)?)
            .scale(Complex64::new(0.5, 0.0));
        let (analytic, pole_order) = exp_series_at_pole(&theta, n, k, 1, order)?;
        debug_assert_eq!(pole_order, nk as usize);
        let prod = density.mul(&analytic);
        acc += prod.c[nk as usize - 1];
    }
    Ok(acc)
}

/// Potential kernel of the simple square lattice, evaluated pointwise by
/// the classical single-integral representation
/// a(m, n) = (2/pi) int_0^pi (1 - e^{-|n| t} cos(m theta)) / sinh t dtheta
/// with cosh t = 2 - cos theta. Satisfies a(0,0) = 0, a(1,0) = 1,
/// a(1,1) = 4/pi, and Delta a = 4 delta; every value is an independent
/// quadrature, so there is no propagation error at any radius.
pub fn potential_kernel_z2(m: i64, n: i64) -> f64 {
    let (m, n) = (m.unsigned_abs() as f64, n.unsigned_abs() as f64);
    // composite Simpson; the integrand is analytic, oscillation ~ m
    let half = 6144 + 160 * (m as usize + n as usize);
    let nn = 2 * half;
    let h = core::f64::consts::PI / nn as f64;
    let mut acc = 0.0;
    for k in 0..=nn {
        let th = k as f64 * h;
        let w = if k == 0 || k == nn {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let f = if th < 1e-9 {
            n
        } else {
            let c = 2.0 - th.cos();
            let sh = (c * c - 1.0).sqrt();
            let t = (c + sh).ln();
            (1.0 - (-n * t).exp() * (m * th).cos()) / sh
        };
        acc += w * f;
    }
    acc * h / 3.0 * 2.0 / core::f64::consts::PI
}

/// Black-vertex values of the discrete logarithm on Z^2 (theta = {1, i}),
/// assembled from the four sector octants: the Green's function of the
/// diagonal lattice, with Delta l = 2 pi delta at the origin.
pub fn green_function_z2(radius: usize) -> Result<BTreeMap<(i64, i64), f64>, DcaError> {
    let r = radius as i64;
    let mut out = BTreeMap::new();
    for x in -r..=r {
        for y in -r..=r {
            if (x + y).rem_euclid(2) != 0 {
                continue;
            }
            // rotate to standard coordinates of the black sublattice
            let (u, v) = ((x + y) / 2, (x - y) / 2);
            out.insert((x, y), 0.5 * core::f64::consts::PI * potential_kernel_z2(u, v));
        }
    }
    Ok(out)
}

fn unit_vec2(r: i64) -> (i64, i64) {
    match r.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

/// White-vertex values of the discrete logarithm on the covering sectors
/// of Z^2, for one chosen sector index (used by the Laplacian stencil at
/// axis points and by the linearization tests).
pub fn log_white_values_z2(radius: usize) -> Result<BTreeMap<(i64, i64), Complex64>, DcaError> {
    let sectors = Sectors::new(alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], 0.0);
    let mut out = BTreeMap::new();
    for m in 0..4i64 {
        let oct = discrete_log_octant(&sectors, m, radius)?;
        let e_a = unit_vec2(m);
        let e_b = unit_vec2(m + 1);
        for (p, v) in &oct.values {
            let global = (p[0] * e_a.0 + p[1] * e_b.0, p[0] * e_a.1 + p[1] * e_b.1);
            if (global.0 + global.1).rem_euclid(2) != 1 {
                continue;
            }
            // the positive x-axis of sector 4 sits on the sheet above; keep
            // the first (lowest-sector) determination
            out.entry(global).or_insert(*v);
        }
    }
    Ok(out)
}
