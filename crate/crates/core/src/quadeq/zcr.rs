//! Zero curvature representations: spectral-parameter transition matrices
//! along edges whose products around any solved face agree identically.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{Mat2, Mat4};

/// Evaluator for a 2x2 transition matrix along a directed edge
/// `from -> to` carrying a label, at spectral parameter lambda.
pub type Mat2Fn = fn(Complex64, Complex64, Complex64, Complex64) -> Mat2;

/// Vertex values and edge labels of a solved quadrilateral
/// `(f, f1, f12, f2)`. For undirected-label equations `la, lb` are
/// `(alpha1, alpha2)`; for directed-slope equations they are
/// `(theta0, theta1)` of the edges from the base vertex.
#[derive(Debug, Clone, Copy)]
pub struct FaceData {
    pub f: Complex64,
    pub f1: Complex64,
    pub f12: Complex64,
    pub f2: Complex64,
    pub la: Complex64,
    pub lb: Complex64,
}

/// Cross-ratio transition before gauging; det = 1 - lambda alpha.
pub fn cross_ratio_l1(fi: Complex64, f: Complex64, alpha: Complex64, lambda: Complex64) -> Mat2 {
    let s = lambda * alpha / (f - fi);
    Mat2::new(
        1.0 + s * fi,
        -s * f * fi,
        s,
        1.0 - s * f,
    )
}

pub fn det_cross_ratio_l1(alpha: Complex64, lambda: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - lambda * alpha
}

/// Gauged cross-ratio transition matrix.
pub fn cross_ratio_transition(fi: Complex64, f: Complex64, alpha: Complex64, lambda: Complex64) -> Mat2 {
    Mat2::new(
        Complex64::new(1.0, 0.0),
        f - fi,
        lambda * alpha / (f - fi),
        Complex64::new(1.0, 0.0),
    )
}

/// Discrete Calapso transition matrix.
pub fn calapso_transition(fi: Complex64, f: Complex64, alpha: Complex64, lambda: Complex64) -> Mat2 {
    Mat2::new(f, lambda - alpha - f * fi, Complex64::new(1.0, 0.0), -fi)
}

/// Transition matrix of the linear discrete Cauchy-Riemann equations along
/// a directed edge with slope theta; `to`, `from` are the function values.
pub fn linear_cr_transition(to: Complex64, from: Complex64, theta: Complex64, lambda: Complex64) -> Mat2 {
    Mat2::new(
        lambda + theta,
        -2.0 * theta * (from + to),
        Complex64::new(0.0, 0.0),
        lambda - theta,
    )
}

/// Transition matrix of the Hirota system along a directed edge with slope
/// theta; `to`, `from` are the w-values.
pub fn hirota_transition(to: Complex64, from: Complex64, theta: Complex64, lambda: Complex64) -> Mat2 {
    Mat2::new(
        Complex64::new(1.0, 0.0),
        -theta * to,
        -lambda * theta / from,
        to / from,
    )
}

/// Zero-curvature residual over faces and sampled spectral parameters:
/// max entrywise norm of L(f12,f1,lb) L(f1,f,la) - L(f12,f2,la) L(f2,f,lb).
pub fn zcr_check_faces(
    step: &dyn Fn(Complex64, Complex64, Complex64, Complex64) -> Mat2,
    faces: &[FaceData],
    lambdas: &[Complex64],
) -> f64 {
    let mut worst = 0.0f64;
    for fd in faces {
        for &lam in lambdas {
            let left = step(fd.f12, fd.f1, fd.lb, lam).mul(&step(fd.f1, fd.f, fd.la, lam));
            let right = step(fd.f12, fd.f2, fd.la, lam).mul(&step(fd.f2, fd.f, fd.lb, lam));
            worst = worst.max(left.sub(&right).norm_max());
        }
    }
    worst
}

/// R^3 vectors as 2x2 complex matrices (v . sigma); the matrix product
/// realizes the Clifford product of vectors.
pub fn pauli(v: [f64; 3]) -> Mat2 {
    Mat2::new(
        Complex64::new(v[2], 0.0),
        Complex64::new(v[0], -v[1]),
        Complex64::new(v[0], v[1]),
        Complex64::new(-v[2], 0.0),
    )
}

/// Transition matrix for T-nets in quadrics, evaluated in the 2x2-block
/// representation with Clifford-algebra entries:
/// L(fi, f; lambda) = [[f, lambda + fi f], [1, -fi]].
pub fn tquadric_transition(fi: [f64; 3], f: [f64; 3], lambda: Complex64) -> Mat4 {
    let pf = pauli(f);
    let pfi = pauli(fi);
    let id = Mat2::identity();
    let lam = id.scale(lambda);
    let b = lam.add(&pfi.mul(&pf));
    let d = pfi.scale(Complex64::new(-1.0, 0.0));
    Mat4::from_blocks(&pf, &b, &id, &d)
}

/// Zero-curvature residual for the T-in-quadric matrices over quads
/// (n, n1, n12, n2) of unit vectors.
pub fn tquadric_zcr_residual(
    quads: &[[[f64; 3]; 4]],
    lambdas: &[Complex64],
) -> f64 {
    let mut worst = 0.0f64;
    for q in quads {
        let [n, n1, n12, n2] = *q;
        for &lam in lambdas {
            let left = tquadric_transition(n12, n1, lam).mul(&tquadric_transition(n1, n, lam));
            let right = tquadric_transition(n12, n2, lam).mul(&tquadric_transition(n2, n, lam));
            worst = worst.max(left.sub(&right).norm_max());
        }
    }
    worst
}

/// Default spectral-parameter sample set used in verification sweeps.
pub fn default_lambdas() -> Vec<Complex64> {
    alloc::vec![
        Complex64::new(0.3, 0.0),
        Complex64::new(1.7, 0.0),
        Complex64::new(-2.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(2.0, 1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadeq::{solve_vertex, QuadKind, VertexRole};
    use crate::scalar::{seeded_rng, Field};
    use alloc::vec::Vec;
    
    fn solved_faces(kind: &QuadKind, count: usize, seed: u64) -> Vec<FaceData> {
        let mut rng = seeded_rng(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let f = <Complex64 as Field>::sample_field(&mut rng);
            let f1 = <Complex64 as Field>::sample_field(&mut rng);
            let f2 = <Complex64 as Field>::sample_field(&mut rng);
            let a1 = <Complex64 as Field>::sample_label(&mut rng);
            let a2 = <Complex64 as Field>::sample_label(&mut rng);
            if (a1 - a2).norm() < 0.1 || (f - f1).norm() < 0.2 || (f - f2).norm() < 0.2 {
                continue;
            }
            let f12 = match solve_vertex(kind, VertexRole::Y, &f, &f1, &Complex64::default(), &f2, &a1, &a2) {
                Ok(y) => y,
                Err(_) => continue,
            };
            if (f12 - f1).norm() < 0.2 || (f12 - f2).norm() < 0.2 {
                continue;
            }
            out.push(FaceData { f, f1, f12, f2, la: a1, lb: a2 });
        }
        out
    }

    #[test]
    fn cross_ratio_zcr_and_det() {
        let faces = solved_faces(&QuadKind::CrossRatio, 50, 61);
        let lambdas = default_lambdas();
        let r = zcr_check_faces(&|t, fr, a, l| cross_ratio_transition(t, fr, a, l), &faces, &lambdas);
        assert!(r < 1e-12, "cross-ratio zcr residual {r}");
        // det of the ungauged matrix is 1 - lambda alpha
        let mut rng = seeded_rng(67);
        for _ in 0..20 {
            let f = <Complex64 as Field>::sample_field(&mut rng);
            let fi = <Complex64 as Field>::sample_field(&mut rng);
            let a = <Complex64 as Field>::sample_label(&mut rng);
            let l = <Complex64 as Field>::sample_label(&mut rng);
            let d = cross_ratio_l1(fi, f, a, l).det();
            assert!((d - det_cross_ratio_l1(a, l)).norm() < 1e-12);
        }
    }

    #[test]
    fn calapso_zcr() {
        let faces = solved_faces(&QuadKind::Calapso, 50, 71);
        let lambdas = default_lambdas();
        let r = zcr_check_faces(&|t, fr, a, l| calapso_transition(t, fr, a, l), &faces, &lambdas);
        assert!(r < 1e-12, "calapso zcr residual {r}");
    }

    #[test]
    fn tquadric_zcr_on_sphere_quads() {
        use rand::Rng;
        let mut rng = seeded_rng(73);
        let unit = |rng: &mut rand_chacha::ChaCha8Rng| -> [f64; 3] {
            loop {
                let v = [
                    rng.gen::<f64>() * 2.0 - 1.0,
                    rng.gen::<f64>() * 2.0 - 1.0,
                    rng.gen::<f64>() * 2.0 - 1.0,
                ];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if n > 0.3 {
                    return [v[0] / n, v[1] / n, v[2] / n];
                }
            }
        };
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let mut quads = Vec::new();
        while quads.len() < 25 {
            let n = unit(&mut rng);
            let n1 = unit(&mut rng);
            let n2 = unit(&mut rng);
            let den = 1.0 - dot(n1, n2);
            if den.abs() < 0.2 {
                continue;
            }
            // T-net step in S^2: n12 = n + a (n2 - n1), a = <n, n1 - n2> / (1 - <n1, n2>)
            let a = (dot(n, n1) - dot(n, n2)) / den;
            let n12 = [
                n[0] + a * (n2[0] - n1[0]),
                n[1] + a * (n2[1] - n1[1]),
                n[2] + a * (n2[2] - n1[2]),
            ];
            quads.push([n, n1, n12, n2]);
        }
        let r = tquadric_zcr_residual(&quads, &default_lambdas());
        assert!(r < 1e-12, "T-in-quadric zcr residual {r}");
    }

    #[test]
    fn pauli_is_clifford() {
        let v = [0.3, -0.7, 1.1];
        let sq = pauli(v).mul(&pauli(v));
        let n2 = v.iter().map(|x| x * x).sum::<f64>();
        assert!((sq.0[0][0] - Complex64::new(n2, 0.0)).norm() < 1e-14);
        assert!(sq.0[0][1].norm() < 1e-14);
    }
}
