//! Goursat solves on grids and quad-graphs, and Baecklund transforms by
//! imposing the same equation on vertical faces with a constant label.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::catalog::{eval_q, solve_vertex, QuadEqError, QuadKind, VertexRole};
use crate::quadcomplex::QuadGraph;

/// Edge labels on a grid: `alpha1[i]` on horizontal edges of column i,
/// `alpha2[j]` on vertical edges of row j (the labelling property).
#[derive(Debug, Clone)]
pub struct GridLabels {
    pub alpha1: Vec<Complex64>,
    pub alpha2: Vec<Complex64>,
}

impl GridLabels {
    pub fn constant(fw: usize, fh: usize, a1: Complex64, a2: Complex64) -> Self {
        GridLabels { alpha1: vec![a1; fw], alpha2: vec![a2; fh] }
    }

    /// Label of the grid edge (v, w) given vertex coordinates.
    pub fn of_edge(&self, from: (usize, usize), to: (usize, usize)) -> Complex64 {
        if from.1 == to.1 {
            self.alpha1[from.0.min(to.0)]
        } else {
            self.alpha2[from.1.min(to.1)]
        }
    }
}

/// Solution of a Goursat problem on a `fw` x `fh` face grid.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub fw: usize,
    pub fh: usize,
    pub values: Vec<Complex64>,
}

impl GridSolution {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * (self.fw + 1) + i]
    }
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let w = self.fw + 1;
        self.values[j * w + i] = v;
    }
}

/// Fill the grid from Cauchy data on the bottom row and left column.
pub fn solve_goursat_grid(
    kind: &QuadKind,
    labels: &GridLabels,
    row0: &[Complex64],
    col0: &[Complex64],
) -> Result<GridSolution, QuadEqError> {
    let fw = labels.alpha1.len();
    let fh = labels.alpha2.len();
    if row0.len() != fw + 1 || col0.len() != fh + 1 || (row0[0] - col0[0]).norm() > 1e-12 {
        return Err(QuadEqError::IllPosedData);
    }
    let mut sol = GridSolution { fw, fh, values: vec![Complex64::default(); (fw + 1) * (fh + 1)] };
    for (i, &v) in row0.iter().enumerate() {
        sol.set(i, 0, v);
    }
    for (j, &v) in col0.iter().enumerate() {
        sol.set(0, j, v);
    }
    for j in 1..=fh {
        for i in 1..=fw {
            let x = sol.at(i - 1, j - 1);
            let u = sol.at(i, j - 1);
            let v = sol.at(i - 1, j);
            let y = solve_vertex(
                kind,
                VertexRole::Y,
                &x,
                &u,
                &Complex64::default(),
                &v,
                &labels.alpha1[i - 1],
                &labels.alpha2[j - 1],
            )?;
            sol.set(i, j, y);
        }
    }
    Ok(sol)
}

/// Max residual of the equation over all faces of the grid solution.
pub fn grid_residual(kind: &QuadKind, labels: &GridLabels, sol: &GridSolution) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..sol.fh {
        for i in 0..sol.fw {
            let r = eval_q(
                kind,
                &sol.at(i, j),
                &sol.at(i + 1, j),
                &sol.at(i + 1, j + 1),
                &sol.at(i, j + 1),
                &labels.alpha1[i],
                &labels.alpha2[j],
            )
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY);
            worst = worst.max(r);
        }
    }
    worst
}

/// Baecklund transform of a solution on a quad-graph: propagates the seed
/// through the vertical-face equations `Q(f, f_i, f_i^+, f^+; alpha_i,
/// lambda) = 0` and returns the transform with the worst revisit deviation
/// (zero for consistent kinds up to rounding).
pub fn backlund(
    kind: &QuadKind,
    graph: &QuadGraph,
    labels: &dyn Fn(usize, usize) -> Complex64,
    f: &[Complex64],
    lambda: Complex64,
    seed_vertex: usize,
    seed_value: Complex64,
) -> Result<(Vec<Complex64>, f64), QuadEqError> {
    let n = graph.n_vertices();
    if f.len() != n || seed_vertex >= n {
        return Err(QuadEqError::IllPosedData);
    }
    let mut plus: Vec<Option<Complex64>> = vec![None; n];
    plus[seed_vertex] = Some(seed_value);
    let mut worst = 0.0f64;
    let mut queue = VecDeque::from([seed_vertex]);
    while let Some(v) = queue.pop_front() {
        let pv = plus[v].unwrap();
        for w in graph.neighbors(v) {
            let a = labels(v, w);
            // label collision degenerates the transform onto the seed net
            if (a - lambda).norm() < 1e-12 {
                return Err(QuadEqError::SingularConfiguration);
            }
            let pw = solve_vertex(
                kind,
                VertexRole::Y,
                &f[v],
                &f[w],
                &Complex64::default(),
                &pv,
                &a,
                &lambda,
            )?;
            match plus[w] {
                Some(existing) => worst = worst.max((existing - pw).norm()),
                None => {
                    plus[w] = Some(pw);
                    queue.push_back(w);
                }
            }
        }
    }
    if plus.iter().any(|p| p.is_none()) {
        return Err(QuadEqError::IllPosedData);
    }
    Ok((plus.into_iter().map(|p| p.unwrap()).collect(), worst))
}

/// Max face residual of a vertex function on a quad-graph (proper faces).
pub fn graph_residual(
    kind: &QuadKind,
    graph: &QuadGraph,
    labels: &dyn Fn(usize, usize) -> Complex64,
    f: &[Complex64],
) -> f64 {
    let mut worst = 0.0f64;
    for fi in graph.proper_faces() {
        let q = graph.face(fi);
        let r = eval_q(
            kind,
            &f[q[0]],
            &f[q[1]],
            &f[q[2]],
            &f[q[3]],
            &labels(q[0], q[1]),
            &labels(q[0], q[3]),
        )
        .map(|v| v.norm())
        .unwrap_or(f64::INFINITY);
        worst = worst.max(r);
    }
    worst
}

/// Max residual of the vertical-face equations linking `f` and its
/// transform.
pub fn backlund_edge_residual(
    kind: &QuadKind,
    graph: &QuadGraph,
    labels: &dyn Fn(usize, usize) -> Complex64,
    f: &[Complex64],
    plus: &[Complex64],
    lambda: Complex64,
) -> f64 {
    let mut worst = 0.0f64;
    for &(a, b) in graph.edges() {
        let r = eval_q(kind, &f[a], &f[b], &plus[b], &plus[a], &labels(a, b), &lambda)
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY);
        worst = worst.max(r);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{seeded_rng, Field};

    fn grid_label_fn<'a>(
        graph: &'a QuadGraph,
        labels: &'a GridLabels,
    ) -> impl Fn(usize, usize) -> Complex64 + 'a {
        move |v, w| {
            let pv = graph.position(v).unwrap();
            let pw = graph.position(w).unwrap();
            labels.of_edge(
                (pv.re as usize, pv.im as usize),
                (pw.re as usize, pw.im as usize),
            )
        }
    }

    #[test]
    fn cross_ratio_backlund_of_trivial_solution() {
        // trivial solution z = p; Baecklund transform solves face and edge
        // equations
        let g = QuadGraph::grid(4, 4);
        let labels = GridLabels::constant(4, 4, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
        let lf = grid_label_fn(&g, &labels);
        let f: Vec<Complex64> = (0..g.n_vertices()).map(|v| g.position(v).unwrap()).collect();
        assert!(graph_residual(&QuadKind::CrossRatio, &g, &lf, &f) < 1e-12);
        let lambda = Complex64::new(0.35, 0.2);
        let seed = Complex64::new(0.7, -0.4);
        let (plus, dev) =
            backlund(&QuadKind::CrossRatio, &g, &lf, &f, lambda, 0, seed).unwrap();
        assert!(dev < 1e-10, "revisit deviation {dev}");
        assert!(graph_residual(&QuadKind::CrossRatio, &g, &lf, &plus) < 1e-10);
        assert!(backlund_edge_residual(&QuadKind::CrossRatio, &g, &lf, &f, &plus, lambda) < 1e-10);
    }

    #[test]
    fn backlund_superposition_commutes() {
        let g = QuadGraph::grid(3, 3);
        let labels = GridLabels::constant(3, 3, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
        let lf = grid_label_fn(&g, &labels);
        let f: Vec<Complex64> = (0..g.n_vertices()).map(|v| g.position(v).unwrap()).collect();
        let (l1, l2) = (Complex64::new(0.4, 0.1), Complex64::new(-0.8, 0.55));
        let kind = QuadKind::CrossRatio;
        let (f1, _) = backlund(&kind, &g, &lf, &f, l1, 0, Complex64::new(0.3, 0.9)).unwrap();
        let (f2, _) = backlund(&kind, &g, &lf, &f, l2, 0, Complex64::new(-0.5, 0.2)).unwrap();
        // superposition value at the seed from the consistency cube
        let top = solve_vertex(
            &kind,
            VertexRole::Y,
            &f[0],
            &f1[0],
            &Complex64::default(),
            &f2[0],
            &l1,
            &l2,
        )
        .unwrap();
        let (f12, d12) = backlund(&kind, &g, &lf, &f1, l2, 0, top).unwrap();
        let (f21, d21) = backlund(&kind, &g, &lf, &f2, l1, 0, top).unwrap();
        assert!(d12 < 1e-9 && d21 < 1e-9);
        let worst = f12
            .iter()
            .zip(&f21)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-9, "superposition deviation {worst}");
    }

    #[test]
    fn degenerate_lambda_on_strip_flagged() {
        // lambda equal to a strip label collides with the equation
        let g = QuadGraph::grid(2, 2);
        let labels = GridLabels::constant(2, 2, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
        let lf = grid_label_fn(&g, &labels);
        let f: Vec<Complex64> = (0..g.n_vertices()).map(|v| g.position(v).unwrap()).collect();
        let r = backlund(&QuadKind::CrossRatio, &g, &lf, &f, Complex64::new(1.0, 0.0), 0, Complex64::new(2.0, 0.3));
        assert!(matches!(r, Err(QuadEqError::SingularConfiguration)));
    }

    #[test]
    fn h1_goursat_grid_solves() {
        let mut rng = seeded_rng(41);
        let labels = GridLabels {
            alpha1: (0..5).map(|_| <Complex64 as Field>::sample_label(&mut rng)).collect(),
            alpha2: (0..5).map(|_| <Complex64 as Field>::sample_label(&mut rng)).collect(),
        };
        let mut row0 = vec![Complex64::default(); 6];
        let mut col0 = vec![Complex64::default(); 6];
        for v in row0.iter_mut() {
            *v = <Complex64 as Field>::sample_field(&mut rng);
        }
        col0[0] = row0[0];
        for v in col0.iter_mut().skip(1) {
            *v = <Complex64 as Field>::sample_field(&mut rng);
        }
        let sol = solve_goursat_grid(&QuadKind::H1, &labels, &row0, &col0).unwrap();
        assert!(grid_residual(&QuadKind::H1, &labels, &sol) < 1e-11);
    }
}
