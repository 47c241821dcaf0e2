//! Discrete K-surfaces: Gauss maps as T-nets in the unit sphere, the
//! Lelieuvre surface, and Baecklund transformations.

use alloc::vec::Vec;


use super::anet::anet_from_lelieuvre;
use super::vector::{add, dot, norm, scale, sub};
use super::NetError;
use crate::grid::Grid2;

/// Fourth vertex of a Gauss-map quadrilateral:
/// n12 = a (n1 + n2) - n with a = <n, n1 + n2> / (1 + <n1, n2>).
pub fn ksurface_step(n: &[f64], n1: &[f64], n2: &[f64]) -> Result<Vec<f64>, NetError> {
    let den = 1.0 + dot(n1, n2);
    if den.abs() < 1e-12 {
        return Err(NetError::SingularConfiguration);
    }
    let s = add(n1, n2);
    let a = dot(n, &s) / den;
    let out = sub(&scale(&s, &a), n);
    // the exact step stays on the sphere; renormalizing removes the
    // rounding drift that otherwise compounds across fine fills
    let nn = norm(&out);
    if nn < 1e-12 {
        return Err(NetError::SingularConfiguration);
    }
    Ok(scale(&out, &(1.0 / nn)))
}

/// Fill the Gauss map from its two coordinate rings of unit vectors.
pub fn ksurface_extend(
    row0: &[Vec<f64>],
    col0: &[Vec<f64>],
) -> Result<Grid2<Vec<f64>>, NetError> {
    let w = row0.len();
    let h = col0.len();
    let mut n: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    for (i, p) in row0.iter().enumerate() {
        n.set(i, 0, p.clone());
    }
    for (j, p) in col0.iter().enumerate() {
        n.set(0, j, p.clone());
    }
    for j in 1..h {
        for i in 1..w {
            let v = ksurface_step(n.at(i - 1, j - 1), n.at(i, j - 1), n.at(i - 1, j))?;
            n.set(i, j, v);
        }
    }
    Ok(n)
}

/// Surface from the Gauss map via the 2D Lelieuvre formulas.
pub fn lelieuvre_surface(n: &Grid2<Vec<f64>>) -> Result<(Grid2<Vec<f64>>, f64), NetError> {
    anet_from_lelieuvre(n, &[0.0, 0.0, 0.0], 1e-8)
}

/// Baecklund transform of the Gauss map from a seed unit vector at the
/// origin, via
/// tau1 n+ = n + b1 (n+ - tau1 n), b1 = <n, tau1 n - n+> / (1 - <tau1 n, n+>),
/// tau2 n+ = -n + b2 (n+ + tau2 n), b2 = <n, tau2 n + n+> / (1 + <tau2 n, n+>).
/// Returns the transform and the worst double-determination deviation.
pub fn ksurface_backlund(
    n: &Grid2<Vec<f64>>,
    seed: &[f64],
) -> Result<(Grid2<Vec<f64>>, f64), NetError> {
    let (w, h) = (n.w, n.h);
    let step1 = |nv: &[f64], n1: &[f64], np: &[f64]| -> Result<Vec<f64>, NetError> {
        let den = 1.0 - dot(n1, np);
        if den.abs() < 1e-12 {
            return Err(NetError::SingularConfiguration);
        }
        let b1 = dot(nv, &sub(n1, np)) / den;
        Ok(add(nv, &scale(&sub(np, n1), &b1)))
    };
    let step2 = |nv: &[f64], n2: &[f64], np: &[f64]| -> Result<Vec<f64>, NetError> {
        let den = 1.0 + dot(n2, np);
        if den.abs() < 1e-12 {
            return Err(NetError::SingularConfiguration);
        }
        let b2 = dot(nv, &add(n2, np)) / den;
        Ok(sub(&scale(&add(np, n2), &b2), nv))
    };
    if (norm(seed) - 1.0).abs() > 1e-9 {
        return Err(NetError::SingularConfiguration);
    }
    if dot(seed, n.at(0, 0)) > 1.0 - 1e-9 {
        // seed coinciding with n(0) degenerates the transform
        return Err(NetError::SingularConfiguration);
    }
    let mut p: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    p.set(0, 0, seed.to_vec());
    for i in 1..w {
        let v = step1(n.at(i - 1, 0), n.at(i, 0), p.at(i - 1, 0))?;
        p.set(i, 0, v);
    }
    let mut worst = 0.0f64;
    for j in 1..h {
        for i in 0..w {
            let v = step2(n.at(i, j - 1), n.at(i, j), p.at(i, j - 1))?;
            if i > 0 {
                let alt = step1(n.at(i - 1, j), n.at(i, j), p.at(i - 1, j))?;
                worst = worst.max(super::vector::dist(&v, &alt));
            }
            p.set(i, j, v);
        }
    }
    Ok((p, worst))
}
