//! A-nets from Lelieuvre normal fields and Weingarten transforms.

use alloc::vec::Vec;


use super::vector::{add, cross3, dist, dot, norm, sub};
use super::NetError;
use crate::grid::Grid2;

/// Integrate the discrete Lelieuvre one-form of a 2D normal field:
/// delta_1 f = delta_1 n x n, delta_2 f = n x delta_2 n.
/// Fails with `NotMoutard` when the form does not close (the normal field
/// does not solve the Moutard equation). Returns the surface and the worst
/// closure residual.
pub fn anet_from_lelieuvre(
    n: &Grid2<Vec<f64>>,
    base: &[f64],
    tol: f64,
) -> Result<(Grid2<Vec<f64>>, f64), NetError> {
    let (w, h) = (n.w, n.h);
    let d1 = |i: usize, j: usize| -> Vec<f64> {
        cross3(&sub(n.at(i + 1, j), n.at(i, j)), n.at(i, j))
    };
    let d2 = |i: usize, j: usize| -> Vec<f64> {
        cross3(n.at(i, j), &sub(n.at(i, j + 1), n.at(i, j)))
    };
    // closure over all faces
    let mut worst = 0.0f64;
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let path_a = add(&d1(i, j), &d2(i + 1, j));
            let path_b = add(&d2(i, j), &d1(i, j + 1));
            worst = worst.max(dist(&path_a, &path_b));
        }
    }
    if worst > tol {
        return Err(NetError::NotMoutard);
    }
    let mut f: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    f.set(0, 0, base.to_vec());
    for i in 1..w {
        let prev = f.at(i - 1, 0).clone();
        f.set(i, 0, add(&prev, &d1(i - 1, 0)));
    }
    for j in 1..h {
        for i in 0..w {
            let prev = f.at(i, j - 1).clone();
            f.set(i, j, add(&prev, &d2(i, j - 1)));
        }
    }
    Ok((f, worst))
}

/// Weingarten transform: f^+ - f = n^+ x n pointwise.
pub fn weingarten(
    f: &Grid2<Vec<f64>>,
    n: &Grid2<Vec<f64>>,
    n_plus: &Grid2<Vec<f64>>,
) -> Grid2<Vec<f64>> {
    Grid2::from_fn(f.w, f.h, |i, j| add(f.at(i, j), &cross3(n_plus.at(i, j), n.at(i, j))))
}

/// Max normalized determinant of star-neighbor triples at interior
/// vertices: zero for a genuine A-net (all neighbors coplanar with f).
pub fn coplanarity_defect(f: &Grid2<Vec<f64>>) -> f64 {
    let mut worst = 0.0f64;
    for j in 1..f.h - 1 {
        for i in 1..f.w - 1 {
            let c = f.at(i, j);
            let dirs = [
                sub(f.at(i + 1, j), c),
                sub(f.at(i, j + 1), c),
                sub(f.at(i - 1, j), c),
                sub(f.at(i, j - 1), c),
            ];
            for a in 0..4 {
                for b in (a + 1)..4 {
                    for cdx in (b + 1)..4 {
                        let det = dot(&dirs[a], &cross3(&dirs[b], &dirs[cdx]));
                        let scale = norm(&dirs[a]) * norm(&dirs[b]) * norm(&dirs[cdx]);
                        if scale > 1e-30 {
                            worst = worst.max(det.abs() / scale);
                        }
                    }
                }
            }
        }
    }
    worst
}
