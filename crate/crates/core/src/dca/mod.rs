//! Linear discrete complex analysis: weighted Laplacians and discrete
//! Cauchy-Riemann equations on quad-graph doubles, Moutard transformations
//! of the weights, integrability, the discrete exponential with its basis
//! expansion, the discrete logarithm / Green's function, and isomonodromy.

mod exp;
mod isomonodromy;
mod log;

pub use exp::{discrete_exp, exp_expansion, reconstruct, ExpansionData};
pub use isomonodromy::{
    constraint_residual, frame_a_matrices, isomonodromy_check, IsomonodromyReport, PoleReport,
};
pub use log::{
    discrete_log_axis, discrete_log_octant, discrete_log_value, fill_octant, green_function_z2,
    log_white_values_z2, potential_kernel_z2, OctantField, Sectors,
};

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::quadcomplex::{Color, QuadGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DcaError {
    /// The black restriction fails to be harmonic; white increments do not
    /// close.
    NotHarmonic,
    /// A weight or transform hit a zero value.
    ZeroDivisor,
    /// Spectral parameter hit a pole of the exponential.
    PoleHit,
    /// Series outside its convergence region.
    SeriesDiverged,
    /// The logarithmic-derivative matrices grew a higher-order pole.
    PoleOrderGrew,
    /// Bad inputs (sizes, missing seed, non-quad data).
    BadInput,
}

impl core::fmt::Display for DcaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::NotHarmonic => "function is not discrete harmonic",
            Self::ZeroDivisor => "zero weight or transform value",
            Self::PoleHit => "spectral parameter on a pole",
            Self::SeriesDiverged => "series diverged",
            Self::PoleOrderGrew => "pole order grew (not isomonodromic)",
            Self::BadInput => "bad input",
        };
        write!(f, "{s}")
    }
}

/// Weights on the black graph of a quad-graph double; the weight is
/// attached to the black diagonal of each proper face, the dual weight is
/// its reciprocal.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    pub double: QuadGraph,
    nu: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(double: QuadGraph, nu_per_face: Vec<f64>) -> Result<Self, DcaError> {
        if nu_per_face.len() != double.n_faces() || nu_per_face.iter().any(|v| *v == 0.0) {
            return Err(DcaError::BadInput);
        }
        Ok(WeightedGraph { double, nu: nu_per_face })
    }

    /// Weights induced by a planar realization with parallelogram faces:
    /// nu = i (theta0 - theta1) / (theta0 + theta1) evaluated at each face,
    /// real for rhombic realizations.
    pub fn from_positions(double: QuadGraph) -> Result<Self, DcaError> {
        let mut nu = Vec::with_capacity(double.n_faces());
        for fi in 0..double.n_faces() {
            if double.face_is_degenerate(fi) {
                nu.push(0.0); // slit face: never read by the stencils
                continue;
            }
            let q = double.face(fi);
            let p = |v: usize| double.position(v).ok_or(DcaError::BadInput);
            let theta0 = p(q[1])? - p(q[0])?;
            let theta1 = p(q[3])? - p(q[0])?;
            let val = Complex64::new(0.0, 1.0) * (theta0 - theta1) / (theta0 + theta1);
            if val.im.abs() > 1e-9 {
                return Err(DcaError::BadInput);
            }
            nu.push(val.re);
        }
        Ok(WeightedGraph { double, nu })
    }

    pub fn nu_of_face(&self, f: usize) -> f64 {
        self.nu[f]
    }

    /// Black diagonal (x0, x1) of a face.
    fn face_black_pair(&self, f: usize) -> (usize, usize) {
        let q = self.double.face(f);
        (q[0], q[2])
    }

    /// Laplacian at the interior black vertices:
    /// (Delta f)(x0) = sum nu (f(x1) - f(x0)) over the faces at x0.
    pub fn laplacian_apply(&self, f: &[Complex64]) -> Vec<(usize, Complex64)> {
        let mut out = Vec::new();
        for v in self.double.interior_vertices() {
            if self.double.color(v) != Color::Black {
                continue;
            }
            let flower = self.double.flower(v).expect("interior");
            let mut acc = Complex64::new(0.0, 0.0);
            for face in flower {
                let (a, b) = self.face_black_pair(face);
                let other = if a == v { b } else { a };
                acc += self.nu[face] * (f[other] - f[v]);
            }
            out.push((v, acc));
        }
        out
    }

    /// Max |Delta f| over interior black vertices.
    pub fn harmonicity_residual(&self, f: &[Complex64]) -> f64 {
        self.laplacian_apply(f)
            .into_iter()
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Per-face residual of the discrete Cauchy-Riemann equations
    /// f(y1) - f(y0) = i nu (f(x1) - f(x0)).
    pub fn holomorphy_residual(&self, f: &[Complex64]) -> f64 {
        let mut worst = 0.0f64;
        for fi in self.double.proper_faces() {
            let q = self.double.face(fi);
            let r = (f[q[3]] - f[q[1]]) - Complex64::new(0.0, self.nu[fi]) * (f[q[2]] - f[q[0]]);
            worst = worst.max(r.norm());
        }
        worst
    }

    /// Extend a harmonic function on the black graph to a holomorphic
    /// function on the double, fixed by one white value.
    pub fn holo_extension(
        &self,
        u: &[Complex64],
        seed_white: usize,
        seed_value: Complex64,
    ) -> Result<Vec<Complex64>, DcaError> {
        let d = &self.double;
        if d.color(seed_white) != Color::White {
            return Err(DcaError::BadInput);
        }
        let mut f: Vec<Option<Complex64>> = (0..d.n_vertices())
            .map(|v| if d.color(v) == Color::Black { Some(u[v]) } else { None })
            .collect();
        f[seed_white] = Some(seed_value);
        let mut queue = VecDeque::from([seed_white]);
        while let Some(y) = queue.pop_front() {
            let fy = f[y].unwrap();
            for fi in d.proper_faces() {
                let q = d.face(fi);
                let (y0, y1) = (q[1], q[3]);
                let (other, sign) = if y0 == y {
                    (y1, 1.0)
                } else if y1 == y {
                    (y0, -1.0)
                } else {
                    continue;
                };
                let inc = Complex64::new(0.0, self.nu[fi]) * (f[q[2]].unwrap() - f[q[0]].unwrap());
                let val = fy + sign * inc;
                match f[other] {
                    Some(existing) => {
                        if (existing - val).norm() > 1e-9 * (1.0 + existing.norm()) {
                            return Err(DcaError::NotHarmonic);
                        }
                    }
                    None => {
                        f[other] = Some(val);
                        queue.push_back(other);
                    }
                }
            }
        }
        if f.iter().any(|v| v.is_none()) {
            return Err(DcaError::BadInput);
        }
        Ok(f.into_iter().map(|v| v.unwrap()).collect())
    }

    /// Integrability around interior vertices: the product of
    /// (1 + i nu)/(1 - i nu) over the star equals 1 (dual weights 1/nu on
    /// white stars). Returns (vertex, |product - 1|).
    pub fn integrability_check(&self) -> Vec<(usize, f64)> {
        let d = &self.double;
        let mut out = Vec::new();
        for v in d.interior_vertices() {
            let flower = match d.flower(v) {
                Some(fl) => fl,
                None => continue,
            };
            let mut prod = Complex64::new(1.0, 0.0);
            for face in flower {
                let nu = if d.color(v) == Color::Black {
                    self.nu[face]
                } else {
                    1.0 / self.nu[face]
                };
                prod *= Complex64::new(1.0, nu) / Complex64::new(1.0, -nu);
            }
            out.push((v, (prod - 1.0).norm()));
        }
        out
    }

    /// Moutard transform of the weights defined by a discrete holomorphic
    /// function theta (real on black, imaginary on white):
    /// nu+ nu = theta(y0) theta(y1) / (theta(x0) theta(x1)).
    pub fn cr_moutard(&self, theta: &[Complex64]) -> Result<Vec<f64>, DcaError> {
        let d = &self.double;
        let mut out = Vec::with_capacity(d.n_faces());
        for fi in 0..d.n_faces() {
            if d.face_is_degenerate(fi) {
                out.push(0.0);
                continue;
            }
            let q = d.face(fi);
            for &v in &q {
                if theta[v].norm() < 1e-14 {
                    return Err(DcaError::ZeroDivisor);
                }
            }
            let val = theta[q[1]] * theta[q[3]] / (theta[q[0]] * theta[q[2]]) / self.nu[fi];
            if val.im.abs() > 1e-9 * (1.0 + val.re.abs()) {
                return Err(DcaError::BadInput);
            }
            out.push(val.re);
        }
        Ok(out)
    }

    /// Solution transform attached to the Moutard transform of the
    /// weights: propagates f+ from a seed through the vertical-face
    /// equations f(x+) - f(y) = (theta(y)/theta(x)) (f(y+) - f(x)) over
    /// the edges (x, y) of the double. Returns the transform and the worst
    /// revisit deviation.
    pub fn mt_solution(
        &self,
        theta: &[Complex64],
        f: &[Complex64],
        seed_vertex: usize,
        seed_value: Complex64,
    ) -> Result<(Vec<Complex64>, f64), DcaError> {
        let d = &self.double;
        let mut plus: Vec<Option<Complex64>> = vec![None; d.n_vertices()];
        plus[seed_vertex] = Some(seed_value);
        let mut worst = 0.0f64;
        let mut queue = VecDeque::from([seed_vertex]);
        while let Some(v) = queue.pop_front() {
            let pv = plus[v].unwrap();
            for w in d.neighbors(v) {
                // orient the edge black -> white
                let (x, y) = if d.color(v) == Color::Black { (v, w) } else { (w, v) };
                if theta[x].norm() < 1e-14 || theta[y].norm() < 1e-14 {
                    return Err(DcaError::ZeroDivisor);
                }
                let mu = theta[y] / theta[x];
                // f(x+) = f(y) + mu (f(y+) - f(x))
                let val = if w == y {
                    // know f+(x) = pv, find f+(y)
                    f[x] + (pv - f[y]) / mu
                } else {
                    // know f+(y) = pv, find f+(x)
                    f[y] + mu * (pv - f[x])
                };
                match plus[w] {
                    Some(existing) => worst = worst.max((existing - val).norm()),
                    None => {
                        plus[w] = Some(val);
                        queue.push_back(w);
                    }
                }
            }
        }
        if plus.iter().any(|p| p.is_none()) {
            return Err(DcaError::BadInput);
        }
        Ok((plus.into_iter().map(|p| p.unwrap()).collect(), worst))
    }
}
