//! Three-leg forms centered at a vertex and the induced Laplace-type
//! equations on the black graph.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::catalog::{QuadEqError, QuadKind};
use crate::quadcomplex::QuadGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegForm {
    Additive,
    Multiplicative,
}

/// Evaluated legs of a quad `(x0, y0, x1, y1)` centered at `x0`:
/// short legs pair `x0` with the white vertices, the long leg with the
/// opposite black vertex. The residual vanishes on solved quads.
#[derive(Debug, Clone)]
pub struct ThreeLeg {
    pub form: LegForm,
    pub short0: Complex64,
    pub short1: Complex64,
    pub long: Complex64,
    pub residual: f64,
}

fn form_of(kind: &QuadKind) -> Result<LegForm, QuadEqError> {
    Ok(match kind {
        QuadKind::Q1 { delta: false } | QuadKind::CrossRatio | QuadKind::H1 | QuadKind::Calapso => {
            LegForm::Additive
        }
        QuadKind::A1 { delta: false } => LegForm::Additive,
        QuadKind::Q1 { delta: true }
        | QuadKind::Q2
        | QuadKind::Q3 { .. }
        | QuadKind::Q4 { .. }
        | QuadKind::H2
        | QuadKind::H3 { .. }
        | QuadKind::A1 { delta: true }
        | QuadKind::A2 => LegForm::Multiplicative,
        QuadKind::Hirota | QuadKind::MoutardMinus | QuadKind::MoutardPlus => {
            return Err(QuadEqError::Unsupported)
        }
    })
}

/// Short leg psi(x0, w; alpha) (or its multiplicative counterpart).
fn short_leg(
    kind: &QuadKind,
    x: Complex64,
    w: Complex64,
    alpha: Complex64,
    branch: Option<Complex64>,
) -> Result<Complex64, QuadEqError> {
    Ok(match kind {
        QuadKind::Q1 { delta: false } | QuadKind::CrossRatio => alpha / (x - w),
        QuadKind::Q1 { delta: true } => (x + alpha - w) / (x - alpha - w),
        QuadKind::Q2 => {
            let big_x = branch.ok_or(QuadEqError::BranchRequired)?;
            ((big_x + alpha) * (big_x + alpha) - w) / ((big_x - alpha) * (big_x - alpha) - w)
        }
        QuadKind::Q3 { delta: false } => {
            // multiplicative label A = e^{i alpha} for the trig form
            let a = (Complex64::new(0.0, 1.0) * alpha).exp();
            (a * x - w) / (x - a * w)
        }
        QuadKind::Q3 { delta: true } => {
            let big_x = branch.ok_or(QuadEqError::BranchRequired)?;
            ((big_x + alpha).sin() - w) / ((big_x - alpha).sin() - w)
        }
        QuadKind::Q4 { modulus } => {
            let big_x = branch.ok_or(QuadEqError::BranchRequired)?;
            let theta = modulus.big_theta(big_x + alpha) / modulus.big_theta(big_x - alpha);
            theta * (modulus.sn(big_x + alpha) - w) / (modulus.sn(big_x - alpha) - w)
        }
        QuadKind::H1 => x + w,
        QuadKind::H2 => x + w + alpha,
        QuadKind::H3 { delta } => {
            x * w + if *delta { alpha } else { Complex64::new(0.0, 0.0) }
        }
        QuadKind::A1 { delta: false } => alpha / (x + w),
        QuadKind::A1 { delta: true } => (x + alpha + w) / (x - alpha + w),
        QuadKind::A2 => {
            let a = (Complex64::new(0.0, 1.0) * alpha).exp();
            (a * x * w - 1.0) / (x * w - a)
        }
        QuadKind::Calapso => x + w,
        _ => return Err(QuadEqError::Unsupported),
    })
}

/// Long leg phi(x0, x1; alpha, beta) (or Phi for multiplicative forms).
pub fn long_leg(
    kind: &QuadKind,
    x0: Complex64,
    x1: Complex64,
    alpha: Complex64,
    beta: Complex64,
    branch: Option<Complex64>,
) -> Result<Complex64, QuadEqError> {
    Ok(match kind {
        QuadKind::Q1 { delta: false } | QuadKind::CrossRatio | QuadKind::A1 { delta: false } => {
            (alpha - beta) / (x0 - x1)
        }
        QuadKind::Q1 { delta: true } | QuadKind::A1 { delta: true } => {
            short_leg(&QuadKind::Q1 { delta: true }, x0, x1, alpha - beta, None)?
        }
        QuadKind::Q2 => short_leg(kind, x0, x1, alpha - beta, branch)?,
        QuadKind::Q3 { delta: false } | QuadKind::A2 => {
            // A/B = e^{i(alpha - beta)}
            short_leg(&QuadKind::Q3 { delta: false }, x0, x1, alpha - beta, None)?
        }
        QuadKind::Q3 { delta: true } | QuadKind::Q4 { .. } => {
            short_leg(kind, x0, x1, alpha - beta, branch)?
        }
        QuadKind::H1 => (alpha - beta) / (x0 - x1),
        QuadKind::H2 => (x0 - x1 + alpha - beta) / (x0 - x1 - alpha + beta),
        QuadKind::H3 { .. } => (beta * x0 - alpha * x1) / (alpha * x0 - beta * x1),
        QuadKind::Calapso => (beta - alpha) / (x0 - x1),
        _ => return Err(QuadEqError::Unsupported),
    })
}

/// Evaluate the three-leg form of a solved quad centered at `x0`. For
/// uniformized kinds (Q2, Q3 delta=1, Q4) the uniformizing center value
/// must be supplied in `branch` (x0 = X^2, sin X, sn X respectively).
pub fn three_leg(
    kind: &QuadKind,
    x0: Complex64,
    y0: Complex64,
    x1: Complex64,
    y1: Complex64,
    alpha: Complex64,
    beta: Complex64,
    branch: Option<Complex64>,
) -> Result<ThreeLeg, QuadEqError> {
    let form = form_of(kind)?;
    // A-list short legs act on transformed whites; the uniformized kinds
    // keep x0 in its chart, whites stay affine.
    let s0 = short_leg(kind, x0, y0, alpha, branch)?;
    let s1 = short_leg(kind, x0, y1, beta, branch)?;
    let long = long_leg(kind, x0, x1, alpha, beta, branch)?;
    for v in [s0, s1, long] {
        if !v.is_finite() {
            return Err(QuadEqError::SingularConfiguration);
        }
    }
    let residual = match form {
        LegForm::Additive => (s0 - s1 - long).norm(),
        LegForm::Multiplicative => {
            if s1.norm() < 1e-14 || long.norm() < 1e-14 {
                return Err(QuadEqError::SingularConfiguration);
            }
            (s0 / (s1 * long) - 1.0).norm()
        }
    };
    Ok(ThreeLeg { form, short0: s0, short1: s1, long, residual })
}

/// Laplace-type residuals at the interior black vertices of a solved
/// quad-graph: the long legs around each vertex sum to zero (additive) or
/// multiply to one (multiplicative).
pub fn laplace_reduce(
    kind: &QuadKind,
    graph: &QuadGraph,
    labels: &dyn Fn(usize, usize) -> Complex64,
    f: &[Complex64],
) -> Result<Vec<(usize, f64)>, QuadEqError> {
    let form = form_of(kind)?;
    let mut out = Vec::new();
    for v in graph.interior_vertices() {
        if graph.color(v) != crate::quadcomplex::Color::Black {
            continue;
        }
        let flower = graph.flower(v).ok_or(QuadEqError::IllPosedData)?;
        let n = flower.len();
        let mut acc_add = Complex64::new(0.0, 0.0);
        let mut acc_mul = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let q = {
                let raw = graph.face(flower[k]);
                if raw[0] == v {
                    raw
                } else {
                    [raw[2], raw[3], raw[0], raw[1]]
                }
            };
            debug_assert_eq!(q[0], v);
            let (wa, xop, wb) = (q[1], q[2], q[3]);
            // white shared with the next face of the flower plays y1
            let next = graph.face(flower[(k + 1) % n]);
            let (w_prev, w_next) = if next.contains(&wb) { (wa, wb) } else { (wb, wa) };
            let long = long_leg(
                kind,
                f[v],
                f[xop],
                labels(v, w_prev),
                labels(v, w_next),
                None,
            )?;
            match form {
                LegForm::Additive => acc_add += long,
                LegForm::Multiplicative => acc_mul *= long,
            }
        }
        let residual = match form {
            LegForm::Additive => acc_add.norm(),
            LegForm::Multiplicative => (acc_mul - 1.0).norm(),
        };
        out.push((v, residual));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadeq::{solve_goursat_grid, solve_vertex, GridLabels, VertexRole};
    use crate::scalar::{seeded_rng, Field};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q1d0_legs_on_square_solution() {
        // square solution (0, 1, 1+i, i) of the cross-ratio equation with
        // alpha1 = 1, alpha2 = -1: legs sum to zero
        let legs = three_leg(
            &QuadKind::Q1 { delta: false },
            c(0., 0.),
            c(1., 0.),
            c(1., 1.),
            c(0., 1.),
            c(1., 0.),
            c(-1., 0.),
            None,
        )
        .unwrap();
        assert_eq!(legs.form, LegForm::Additive);
        assert!(legs.residual < 1e-14, "residual {}", legs.residual);
    }

    #[test]
    fn equal_arguments_are_singular() {
        let r = three_leg(
            &QuadKind::Q1 { delta: false },
            c(0.5, 0.5),
            c(0.5, 0.5),
            c(1., 1.),
            c(0., 1.),
            c(1., 0.),
            c(-1., 0.),
            None,
        );
        assert!(matches!(r, Err(QuadEqError::SingularConfiguration)));
    }

    fn random_solved_quad(
        kind: &QuadKind,
        rng: &mut impl rand::Rng,
    ) -> Option<(Complex64, Complex64, Complex64, Complex64, Complex64, Complex64)> {
        let x = <Complex64 as Field>::sample_field(rng);
        let u = <Complex64 as Field>::sample_field(rng);
        let v = <Complex64 as Field>::sample_field(rng);
        let a = <Complex64 as Field>::sample_label(rng);
        let b = <Complex64 as Field>::sample_label(rng);
        if (a - b).norm() < 0.1 {
            return None;
        }
        let y = solve_vertex(kind, VertexRole::Y, &x, &u, &Complex64::default(), &v, &a, &b).ok()?;
        Some((x, u, y, v, a, b))
    }

    #[test]
    fn legs_vanish_on_solved_quads() {
        let mut rng = seeded_rng(43);
        let kinds = [
            QuadKind::Q1 { delta: false },
            QuadKind::Q1 { delta: true },
            QuadKind::Q3 { delta: false },
            QuadKind::H1,
            QuadKind::H2,
            QuadKind::H3 { delta: true },
            QuadKind::H3 { delta: false },
            QuadKind::A1 { delta: false },
            QuadKind::A1 { delta: true },
            QuadKind::A2,
        ];
        for kind in kinds {
            let mut checked = 0;
            while checked < 12 {
                let Some((x, u, y, v, a, b)) = random_solved_quad(&kind, &mut rng) else {
                    continue;
                };
                match three_leg(&kind, x, u, y, v, a, b, None) {
                    Ok(legs) => {
                        assert!(legs.residual < 1e-8, "{} residual {}", kind.name(), legs.residual);
                        checked += 1;
                    }
                    Err(QuadEqError::SingularConfiguration) => continue,
                    Err(e) => panic!("{}: {e:?}", kind.name()),
                }
            }
        }
    }

    #[test]
    fn uniformized_legs_with_branch_hint() {
        let mut rng = seeded_rng(47);
        let m = crate::elliptic::JacobiModulus::new(c(0.5, 0.0));
        let kinds = [
            QuadKind::Q2,
            QuadKind::Q3 { delta: true },
            QuadKind::Q4 { modulus: m },
        ];
        for kind in kinds {
            let mut checked = 0;
            while checked < 6 {
                // sample the uniformized center value first
                let big_x = <Complex64 as Field>::sample_field(&mut rng) * 0.6;
                let x = match kind {
                    QuadKind::Q2 => big_x * big_x,
                    QuadKind::Q3 { .. } => big_x.sin(),
                    QuadKind::Q4 { modulus } => modulus.sn(big_x),
                    _ => unreachable!(),
                };
                let u = <Complex64 as Field>::sample_field(&mut rng);
                let v = <Complex64 as Field>::sample_field(&mut rng);
                let a = <Complex64 as Field>::sample_label(&mut rng) * 0.3;
                let b = <Complex64 as Field>::sample_label(&mut rng) * 0.3;
                if (a - b).norm() < 0.05 {
                    continue;
                }
                let y = match solve_vertex(&kind, VertexRole::Y, &x, &u, &Complex64::default(), &v, &a, &b) {
                    Ok(y) => y,
                    Err(_) => continue,
                };
                match three_leg(&kind, x, u, y, v, a, b, Some(big_x)) {
                    Ok(legs) => {
                        assert!(legs.residual < 1e-7, "{} residual {}", kind.name(), legs.residual);
                        checked += 1;
                    }
                    Err(QuadEqError::SingularConfiguration) => continue,
                    Err(e) => panic!("{}: {e:?}", kind.name()),
                }
            }
            // no hint -> BranchRequired
            let r = three_leg(&kind, c(0.4, 0.), c(1., 0.), c(0., 1.), c(0.3, 0.2), c(0.9, 0.), c(0.2, 0.), None);
            assert!(matches!(r, Err(QuadEqError::BranchRequired)));
        }
    }

    #[test]
    fn laplace_reduction_on_grids() {
        let mut rng = seeded_rng(53);
        let kinds = [
            (QuadKind::Q1 { delta: false }, 1e-10),
            (QuadKind::H1, 1e-10),
            (QuadKind::H3 { delta: false }, 1e-9),
        ];
        for (kind, tol) in kinds {
            let labels = GridLabels::constant(3, 3, c(1.3, 0.4), c(-0.8, 0.9));
            let mut row0 = alloc::vec![Complex64::default(); 4];
            let mut col0 = alloc::vec![Complex64::default(); 4];
            for v in row0.iter_mut() {
                *v = <Complex64 as Field>::sample_field(&mut rng);
            }
            col0[0] = row0[0];
            for v in col0.iter_mut().skip(1) {
                *v = <Complex64 as Field>::sample_field(&mut rng);
            }
            let sol = solve_goursat_grid(&kind, &labels, &row0, &col0).unwrap();
            let g = QuadGraph::grid(3, 3);
            let f: Vec<Complex64> = (0..g.n_vertices())
                .map(|v| {
                    let p = g.position(v).unwrap();
                    sol.at(p.re as usize, p.im as usize)
                })
                .collect();
            let lf = |v: usize, w: usize| {
                let pv = g.position(v).unwrap();
                let pw = g.position(w).unwrap();
                labels.of_edge(
                    (pv.re as usize, pv.im as usize),
                    (pw.re as usize, pw.im as usize),
                )
            };
            let residuals = laplace_reduce(&kind, &g, &lf, &f).unwrap();
            assert!(!residuals.is_empty());
            for (v, r) in residuals {
                assert!(r < tol, "{} vertex {v}: residual {r}", kind.name());
            }
        }
    }
}
