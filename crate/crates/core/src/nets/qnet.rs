//! Q-nets: the eighth hexahedron vertex by plane intersection, the local
//! coefficient maps and their exact 4D consistency, Goursat fills, and the
//! quadratic reduction.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::vector::{add, cross3, dot, scale, sub};
use super::NetError;
use crate::grid::Grid2;
use crate::linalg::solve_dense;
use crate::scalar::Field;

/// Intersection of the three planes through (f1, f12, f13), (f2, f12, f23),
/// (f3, f13, f23); points in R^3.
pub fn qnet_extend<T: Field>(
    f_i: [&[T]; 3],
    f_ij: [&[T]; 3], // f12, f13, f23
) -> Result<Vec<T>, NetError> {
    let [f1, f2, f3] = f_i;
    let [f12, f13, f23] = f_ij;
    let planes = [
        (f1, f12, f13),
        (f2, f12, f23),
        (f3, f13, f23),
    ];
    let mut m: Vec<Vec<T>> = Vec::with_capacity(3);
    let mut rhs: Vec<T> = Vec::with_capacity(3);
    let mut scale_max = 0.0f64;
    for (p, q, r) in planes {
        let n = cross3(&sub(q, p), &sub(r, p));
        let d = dot(&n, p);
        scale_max = n.iter().fold(scale_max, |acc, v| acc.max(v.mag()));
        m.push(n);
        rhs.push(d);
    }
    // crude conditioning guard for floating fields
    let min_row = m
        .iter()
        .map(|row| row.iter().fold(0.0f64, |a, v| a.max(v.mag())))
        .fold(f64::INFINITY, f64::min);
    if scale_max > 0.0 && min_row / scale_max < 1e-12 {
        return Err(NetError::DegeneratePlanes);
    }
    solve_dense(&mut m, &mut rhs).map_err(|_| NetError::DegeneratePlanes)
}

/// f_ij from the plaquette coefficients:
/// f_ij = f_i + f_j - f + c_ji (f_i - f) + c_ij (f_j - f).
pub fn qnet_extend_with_coeffs<T: Field>(
    f: &[T],
    f_i: &[T],
    f_j: &[T],
    c_ij: &T,
    c_ji: &T,
) -> Vec<T> {
    let mut out = sub(&add(f_i, f_j), f);
    out = add(&out, &scale(&sub(f_i, f), c_ji));
    add(&out, &scale(&sub(f_j, f), c_ij))
}

/// The six plaquette coefficients of an elementary cube, indexed by
/// ordered pairs of {0,1,2}.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeCoeffs<T> {
    /// c[j][k] for j != k
    pub c: [[Option<T>; 3]; 3],
}

impl<T: Clone> CubeCoeffs<T> {
    pub fn new(vals: [[Option<T>; 3]; 3]) -> Self {
        CubeCoeffs { c: vals }
    }
    pub fn get(&self, j: usize, k: usize) -> T {
        self.c[j][k].clone().expect("ordered pair")
    }
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut c: [[Option<T>; 3]; 3] = Default::default();
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    c[j][k] = Some(f(j, k));
                }
            }
        }
        CubeCoeffs { c }
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];

/// Solve the six linear compatibility equations for the shifted plaquette
/// coefficients tau_i c_jk of an elementary cube:
/// (1 + c_ik) tau_i c_jk - c_jk tau_k c_ij - c_ik tau_k c_ji = c_jk.
pub fn qnet_c_update<T: Field>(c: &CubeCoeffs<T>) -> Result<CubeCoeffs<T>, NetError> {
    let idx = |j: usize, k: usize| PAIRS.iter().position(|&p| p == (j, k)).unwrap();
    let mut m = vec![vec![T::zero(); 6]; 6];
    let mut rhs = vec![T::zero(); 6];
    for (row, &(j, k)) in PAIRS.iter().enumerate() {
        let i = 3 - j - k;
        m[row][idx(j, k)] = T::one() + c.get(i, k);
        m[row][idx(i, j)] = -c.get(j, k);
        m[row][idx(j, i)] = -c.get(i, k);
        rhs[row] = c.get(j, k);
    }
    let x = solve_dense(&mut m, &mut rhs).map_err(|_| NetError::SingularConfiguration)?;
    let mut out: [[Option<T>; 3]; 3] = Default::default();
    for (p, &(j, k)) in PAIRS.iter().enumerate() {
        out[j][k] = Some(x[p].clone());
    }
    Ok(CubeCoeffs { c: out })
}

/// Explicit rotation-coefficient map
/// tau_i beta_kj = (beta_kj + beta_ki beta_ij) / (1 - beta_ij beta_ji).
pub fn rotation_update<T: Field>(b: &CubeCoeffs<T>) -> Result<CubeCoeffs<T>, NetError> {
    let mut out: [[Option<T>; 3]; 3] = Default::default();
    for &(k, j) in PAIRS.iter() {
        let i = 3 - k - j;
        let den = T::one() - b.get(i, j).clone() * b.get(j, i);
        if den.is_zero() || den.mag() < 1e-12 {
            return Err(NetError::SingularConfiguration);
        }
        let num = b.get(k, j) + b.get(k, i) * b.get(i, j);
        out[k][j] = Some(num / den);
    }
    Ok(CubeCoeffs { c: out })
}

/// 4D consistency of a cube map on plaquette coefficients: with fields
/// c_jk for j != k in {0..3}, compare tau_i tau_j c_kl computed through the
/// two cube orders; exact equality over exact fields.
fn check_plaquette_map_4d<T: Field>(
    mut step: impl FnMut(&CubeCoeffs<T>) -> Result<CubeCoeffs<T>, NetError>,
    fields: &dyn Fn(usize, usize) -> T,
) -> Result<bool, NetError> {
    // local coefficients at the base point for all ordered pairs of {0..3}
    let base = |j: usize, k: usize| fields(j, k);
    // apply the cube map on the triple (a, b, c): result holds tau-shifted
    // coefficients of pairs inside the triple
    let mut cube = |tri: [usize; 3], at: &dyn Fn(usize, usize) -> T| -> Result<Vec<(usize, usize, usize, T)>, NetError> {
        // returns (shift direction, j, k, tau value)
        let local = CubeCoeffs::from_fn(|a, b| at(tri[a], tri[b]));
        let shifted = step(&local)?;
        let mut out = Vec::new();
        for (j, k) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
            let i = 3 - j - k;
            out.push((tri[i], tri[j], tri[k], shifted.get(j, k)));
        }
        Ok(out)
    };
    // first layer: tau_i c_jk for all distinct (i, j, k) in {0..3}
    let mut tau1: Vec<(usize, usize, usize, T)> = Vec::new();
    for tri in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        tau1.extend(cube(tri, &base)?);
    }
    let get1 = |i: usize, j: usize, k: usize| -> T {
        tau1.iter()
            .find(|(a, b, c, _)| *a == i && *b == j && *c == k)
            .map(|(_, _, _, v)| v.clone())
            .expect("first layer")
    };
    // second layer: tau_i tau_j c_kl computed from the cube {j, k, l}
    // evaluated at the i-shifted coefficients, compared with the roles of
    // i and j swapped
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut rest = (0..4).filter(|&x| x != i && x != j);
            let k = rest.next().unwrap();
            let l = rest.next().unwrap();
            let at_i = |a: usize, b: usize| get1(i, a, b);
            let at_j = |a: usize, b: usize| get1(j, a, b);
            let via_i = cube([j, k, l], &at_i)?; // tau_i tau_j c_kl and friends
            let via_j = cube([i, k, l], &at_j)?;
            let pick = |list: &[(usize, usize, usize, T)], s: usize| -> T {
                list.iter()
                    .find(|(a, b, c, _)| *a == s && *b == k && *c == l)
                    .map(|(_, _, _, v)| v.clone())
                    .unwrap()
            };
            let lhs = pick(&via_i, j);
            let rhs = pick(&via_j, i);
            let agree = if T::EXACT {
                lhs == rhs
            } else {
                (lhs.clone() - rhs.clone()).mag() <= 1e-9 * (1.0 + lhs.mag())
            };
            if !agree {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Randomized exact 4D-consistency sweep of the Q-net coefficient map.
pub fn qnet_check_c_map_4d<T: Field, R: Rng + ?Sized>(
    samples: usize,
    rng: &mut R,
) -> Result<usize, NetError> {
    let mut passed = 0;
    let mut attempts = 0;
    while passed < samples {
        attempts += 1;
        if attempts > 20 * samples + 100 {
            return Err(NetError::SingularConfiguration);
        }
        let vals: Vec<T> = (0..12).map(|_| T::sample_field(rng)).collect();
        let mut it = vals.into_iter();
        let mut table = alloc::collections::BTreeMap::new();
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    table.insert((j, k), it.next().unwrap());
                }
            }
        }
        let fields = |j: usize, k: usize| table[&(j, k)].clone();
        match check_plaquette_map_4d(qnet_c_update, &fields) {
            Ok(true) => passed += 1,
            Ok(false) => return Err(NetError::SingularConfiguration),
            Err(NetError::SingularConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(passed)
}

/// Randomized exact 4D-consistency sweep of the rotation-coefficient map.
pub fn qnet_check_rotation_map_4d<T: Field, R: Rng + ?Sized>(
    samples: usize,
    rng: &mut R,
) -> Result<usize, NetError> {
    let mut passed = 0;
    let mut attempts = 0;
    while passed < samples {
        attempts += 1;
        if attempts > 20 * samples + 100 {
            return Err(NetError::SingularConfiguration);
        }
        let vals: Vec<T> = (0..12).map(|_| T::sample_field(rng)).collect();
        let mut it = vals.into_iter();
        let mut table = alloc::collections::BTreeMap::new();
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    table.insert((j, k), it.next().unwrap());
                }
            }
        }
        let fields = |j: usize, k: usize| table[&(j, k)].clone();
        match check_plaquette_map_4d(rotation_update, &fields) {
            Ok(true) => passed += 1,
            Ok(false) => return Err(NetError::SingularConfiguration),
            Err(NetError::SingularConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(passed)
}

/// Goursat fill of a 2D Q-net from two coordinate curves and plaquette
/// coefficients on all squares (c12, c21 per square).
pub fn qnet_solve_goursat_2d<T: Field>(
    row0: &[Vec<T>],
    col0: &[Vec<T>],
    c12: &Grid2<T>,
    c21: &Grid2<T>,
) -> Grid2<Vec<T>> {
    let w = row0.len();
    let h = col0.len();
    let mut out: Grid2<Vec<T>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    for (i, p) in row0.iter().enumerate() {
        out.set(i, 0, p.clone());
    }
    for (j, p) in col0.iter().enumerate() {
        out.set(0, j, p.clone());
    }
    for j in 1..h {
        for i in 1..w {
            let f = out.at(i - 1, j - 1).clone();
            let fi = out.at(i, j - 1).clone();
            let fj = out.at(i - 1, j).clone();
            let v = qnet_extend_with_coeffs(
                &f,
                &fi,
                &fj,
                c12.at(i - 1, j - 1),
                c21.at(i - 1, j - 1),
            );
            out.set(i, j, v);
        }
    }
    out
}

/// Quadric x^T A x + b . x + gamma = 0 with symmetric A.
#[derive(Debug, Clone)]
pub struct Quadric<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub gamma: T,
}

pub fn quadric_value<T: Field>(q: &Quadric<T>, p: &[T]) -> T {
    let n = p.len();
    let mut acc = q.gamma.clone();
    for i in 0..n {
        acc = acc + q.b[i].clone() * p[i].clone();
        for j in 0..n {
            acc = acc + q.a[i][j].clone() * p[i].clone() * p[j].clone();
        }
    }
    acc
}

/// A quadric through seven points of R^3 (member of the two-parameter
/// family), found as a kernel vector of the interpolation system.
pub fn quadric_through<T: Field>(points: &[Vec<T>]) -> Result<Quadric<T>, NetError> {
    assert_eq!(points.len(), 7);
    // monomials: x^2, y^2, z^2, xy, xz, yz, x, y, z, 1
    let monomials = |p: &[T]| -> Vec<T> {
        vec![
            p[0].clone() * p[0].clone(),
            p[1].clone() * p[1].clone(),
            p[2].clone() * p[2].clone(),
            p[0].clone() * p[1].clone(),
            p[0].clone() * p[2].clone(),
            p[1].clone() * p[2].clone(),
            p[0].clone(),
            p[1].clone(),
            p[2].clone(),
            T::one(),
        ]
    };
    let mut m: Vec<Vec<T>> = points.iter().map(|p| monomials(p)).collect();
    // row echelon over the field
    let rows = m.len();
    let cols = 10;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero() && m[i][c].mag() > 1e-10) else {
            continue;
        };
        m.swap(r, pr);
        let inv = T::one() / m[r][c].clone();
        for cc in 0..cols {
            m[r][cc] = m[r][cc].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..cols {
                    let sub = f.clone() * m[r][cc].clone();
                    m[i][cc] = m[i][cc].clone() - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // choose a free column and build a kernel vector
    let free = (0..cols).find(|c| !pivot_cols.contains(c)).ok_or(NetError::DegeneratePlanes)?;
    let mut coeffs = vec![T::zero(); cols];
    coeffs[free] = T::one();
    for (ri, &pc) in pivot_cols.iter().enumerate() {
        coeffs[pc] = -m[ri][free].clone();
    }
    let half = |t: T| t / T::from_int(2);
    let a = vec![
        vec![coeffs[0].clone(), half(coeffs[3].clone()), half(coeffs[4].clone())],
        vec![half(coeffs[3].clone()), coeffs[1].clone(), half(coeffs[5].clone())],
        vec![half(coeffs[4].clone()), half(coeffs[5].clone()), coeffs[2].clone()],
    ];
    let b = vec![coeffs[6].clone(), coeffs[7].clone(), coeffs[8].clone()];
    Ok(Quadric { a, b, gamma: coeffs[9].clone() })
}
