//! T-nets: the star-triangle coefficient map, Moutard fills, and T-nets in
//! quadrics.

use alloc::vec::Vec;

use rand::Rng;

use super::vector::{add, scale, sub};
use super::{BilinearForm, NetError};
use crate::grid::Grid2;
use crate::scalar::Field;

/// Star-triangle map: (a12, a23, a31) -> (tau1 a23, tau2 a31, tau3 a12)
/// with tau_i a_jk = -a_jk / (a12 a23 + a23 a31 + a31 a12).
pub fn star_triangle<T: Field>(a12: &T, a23: &T, a31: &T) -> Result<(T, T, T), NetError> {
    let s = a12.clone() * a23.clone() + a23.clone() * a31.clone() + a31.clone() * a12.clone();
    if s.is_zero() || s.mag() < 1e-12 {
        return Err(NetError::SingularConfiguration);
    }
    Ok((
        -a23.clone() / s.clone(),
        -a31.clone() / s.clone(),
        -a12.clone() / s,
    ))
}

/// Exact 4D consistency of the star-triangle map: antisymmetric fields
/// a_jk on pairs of {0..3}; compare tau_i tau_j a_kl both ways.
pub fn tnet_check_star_triangle_4d<T: Field, R: Rng + ?Sized>(
    samples: usize,
    rng: &mut R,
) -> Result<usize, NetError> {
    let mut passed = 0;
    let mut attempts = 0;
    'outer: while passed < samples {
        attempts += 1;
        if attempts > 20 * samples + 100 {
            return Err(NetError::SingularConfiguration);
        }
        // a[j][k] for j < k; a_kj = -a_jk
        let mut a = alloc::collections::BTreeMap::new();
        for j in 0..4 {
            for k in (j + 1)..4 {
                a.insert((j, k), T::sample_label(rng));
            }
        }
        let get = |j: usize, k: usize| -> T {
            if j < k {
                a[&(j, k)].clone()
            } else {
                -a[&(k, j)].clone()
            }
        };
        // cube on a triple (p, q, r): returns tau-shifted values
        // tau_p a_qr, tau_q a_rp, tau_r a_pq
        let cube = |tri: [usize; 3], at: &dyn Fn(usize, usize) -> T| -> Result<[(usize, usize, usize, T); 3], NetError> {
            let (p, q, r) = (tri[0], tri[1], tri[2]);
            let (t1, t2, t3) = star_triangle(&at(p, q), &at(q, r), &at(r, p))?;
            Ok([(p, q, r, t1), (q, r, p, t2), (r, p, q, t3)])
        };
        let mut tau1: Vec<(usize, usize, usize, T)> = Vec::new();
        for tri in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            match cube(tri, &get) {
                Ok(v) => tau1.extend(v),
                Err(_) => continue 'outer,
            }
        }
        let get1 = |i: usize, j: usize, k: usize| -> T {
            // tau_i a_jk, stored possibly with (j, k) swapped
            for (s, a, b, v) in &tau1 {
                if *s == i && *a == j && *b == k {
                    return v.clone();
                }
                if *s == i && *a == k && *b == j {
                    return -v.clone();
                }
            }
            unreachable!("first layer")
        };
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut rest = (0..4).filter(|&x| x != i && x != j);
                let k = rest.next().unwrap();
                let l = rest.next().unwrap();
                let at_i = |p: usize, q: usize| get1(i, p, q);
                let at_j = |p: usize, q: usize| get1(j, p, q);
                let via_i = match cube([j, k, l], &at_i) {
                    Ok(v) => v,
                    Err(_) => continue 'outer,
                };
                let via_j = match cube([i, k, l], &at_j) {
                    Ok(v) => v,
                    Err(_) => continue 'outer,
                };
                // tau_i (tau_j a_kl) vs tau_j (tau_i a_kl)
                let lhs = via_i[0].3.clone();
                debug_assert!(via_i[0].1 == k && via_i[0].2 == l);
                let rhs = via_j[0].3.clone();
                debug_assert!(via_j[0].1 == k && via_j[0].2 == l);
                let agree = if T::EXACT {
                    lhs == rhs
                } else {
                    (lhs.clone() - rhs.clone()).mag() <= 1e-9 * (1.0 + lhs.mag())
                };
                if !agree {
                    return Ok(passed);
                }
            }
        }
        passed += 1;
    }
    Ok(passed)
}

/// Fill a 2D T-net from two coordinate curves and the face coefficients:
/// f_12 = f + a (f_2 - f_1).
pub fn tnet_extend_2d(
    row0: &[Vec<f64>],
    col0: &[Vec<f64>],
    a12: &Grid2<f64>,
) -> Grid2<Vec<f64>> {
    let w = row0.len();
    let h = col0.len();
    let mut out: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    for (i, p) in row0.iter().enumerate() {
        out.set(i, 0, p.clone());
    }
    for (j, p) in col0.iter().enumerate() {
        out.set(0, j, p.clone());
    }
    for j in 1..h {
        for i in 1..w {
            let f = out.at(i - 1, j - 1);
            let fi = out.at(i, j - 1);
            let fj = out.at(i - 1, j);
            let v = add(f, &scale(&sub(fj, fi), a12.at(i - 1, j - 1)));
            out.set(i, j, v);
        }
    }
    out
}

/// One step of a T-net in the quadric <n, n> = kappa^2:
/// n_ij = n + a (n_j - n_i), a = <n, n_i - n_j> / (kappa^2 - <n_i, n_j>).
/// Coinciding neighbors give the degenerate step a = 0, n_ij = n.
pub fn tnet_in_quadric_step(
    form: BilinearForm,
    kappa_sq: f64,
    n: &[f64],
    ni: &[f64],
    nj: &[f64],
) -> Result<Vec<f64>, NetError> {
    let diff = sub(ni, nj);
    if super::vector::dot(&diff, &diff).abs() < 1e-24 {
        return Ok(n.to_vec());
    }
    let den = kappa_sq - form.inner(ni, nj);
    if den.abs() < 1e-12 {
        return Err(NetError::SingularConfiguration);
    }
    let a = form.inner(n, &diff) / den;
    Ok(add(n, &scale(&sub(nj, ni), &a)))
}
