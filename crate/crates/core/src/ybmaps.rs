//! Quadrirational Yang-Baxter maps R_I..R_V: evaluation, involutivity and
//! companion checks, the Yang-Baxter relation, the pencil-of-conics
//! construction, and verification of user-supplied Lax matrices.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::Mat2;
use crate::scalar::{Field, GaussRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YbKind {
    RI,
    RII,
    RIII,
    RIV,
    RV,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YbError {
    /// Denominator vanished (x = y for the subtraction kinds, or a
    /// degenerate parameter combination).
    SingularConfiguration,
    /// Line tangent or degenerate in the conic construction.
    TangencyDegenerate,
    /// Inputs outside the expected domain.
    BadInput,
}

impl core::fmt::Display for YbError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::SingularConfiguration => "singular configuration",
            Self::TangencyDegenerate => "tangency or degenerate line",
            Self::BadInput => "bad input",
        };
        write!(f, "{s}")
    }
}

/// Apply the normal-form map: (x, y) -> (u, v).
pub fn apply<T: Field>(
    kind: YbKind,
    alpha: &T,
    beta: &T,
    x: &T,
    y: &T,
) -> Result<(T, T), YbError> {
    let guard = |d: &T| -> Result<(), YbError> {
        if d.is_zero() || d.mag() < 1e-13 {
            Err(YbError::SingularConfiguration)
        } else {
            Ok(())
        }
    };
    match kind {
        YbKind::RI => {
            let one = T::one();
            let num = (one.clone() - beta.clone()) * x.clone() + beta.clone() - alpha.clone()
                + (alpha.clone() - one.clone()) * y.clone();
            let den = beta.clone() * (one.clone() - alpha.clone()) * x.clone()
                + (alpha.clone() - beta.clone()) * y.clone() * x.clone()
                + alpha.clone() * (beta.clone() - one) * y.clone();
            guard(&den)?;
            let p = num / den;
            Ok((alpha.clone() * y.clone() * p.clone(), beta.clone() * x.clone() * p))
        }
        YbKind::RII => {
            let den = x.clone() - y.clone();
            guard(&den)?;
            guard(alpha)?;
            guard(beta)?;
            let p = (alpha.clone() * x.clone() - beta.clone() * y.clone() + beta.clone()
                - alpha.clone())
                / den;
            Ok((y.clone() * p.clone() / alpha.clone(), x.clone() * p / beta.clone()))
        }
        YbKind::RIII => {
            let den = x.clone() - y.clone();
            guard(&den)?;
            guard(alpha)?;
            guard(beta)?;
            let p = (alpha.clone() * x.clone() - beta.clone() * y.clone()) / den;
            Ok((y.clone() * p.clone() / alpha.clone(), x.clone() * p / beta.clone()))
        }
        YbKind::RIV => {
            let den = x.clone() - y.clone();
            guard(&den)?;
            let p = T::one() + (beta.clone() - alpha.clone()) / den;
            Ok((y.clone() * p.clone(), x.clone() * p))
        }
        YbKind::RV => {
            let den = x.clone() - y.clone();
            guard(&den)?;
            let p = (alpha.clone() - beta.clone()) / den;
            Ok((y.clone() + p.clone(), x.clone() + p))
        }
    }
}

/// Componentwise Yang-Baxter defect of R23 R13 R12 = R12 R13 R23 on a
/// sample (x, y, z) with parameters (a1, a2, a3).
pub fn yb_defect<T: Field>(
    kind: YbKind,
    params: &[T; 3],
    x: &T,
    y: &T,
    z: &T,
) -> Result<f64, YbError> {
    let [a1, a2, a3] = params;
    // left-hand side: R12, then R13, then R23
    let (x2, y1) = apply(kind, a1, a2, x, y)?;
    let (x23, z1) = apply(kind, a1, a3, &x2, z)?;
    let (y13, z12) = apply(kind, a2, a3, &y1, &z1)?;
    // right-hand side: R23, then R13, then R12
    let (y3, z2) = apply(kind, a2, a3, y, z)?;
    let (x3, z12b) = apply(kind, a1, a3, x, &z2)?;
    let (x23b, y13b) = apply(kind, a1, a2, &x3, &y3)?;
    if T::EXACT {
        let ok = x23 == x23b && y13 == y13b && z12 == z12b;
        Ok(if ok { 0.0 } else { f64::INFINITY })
    } else {
        let d = (x23.clone() - x23b)
            .mag()
            .max((y13.clone() - y13b).mag())
            .max((z12.clone() - z12b).mag());
        Ok(d)
    }
}

/// Randomized Yang-Baxter sweep; singular draws are rejected and redrawn.
pub fn yb_check<T: Field, R: Rng + ?Sized>(
    kind: YbKind,
    samples: usize,
    rng: &mut R,
) -> Result<f64, YbError> {
    let mut worst = 0.0f64;
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > 50 * samples + 100 {
            return Err(YbError::SingularConfiguration);
        }
        let params = [T::sample_label(rng), T::sample_label(rng), T::sample_label(rng)];
        let x = T::sample_field(rng);
        let y = T::sample_field(rng);
        let z = T::sample_field(rng);
        match yb_defect(kind, &params, &x, &y, &z) {
            Ok(d) => {
                worst = worst.max(d);
                done += 1;
            }
            Err(YbError::SingularConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}

/// Exact Yang-Baxter sweep over Gaussian rationals.
pub fn yb_check_exact<R: Rng + ?Sized>(
    kind: YbKind,
    samples: usize,
    rng: &mut R,
) -> Result<bool, YbError> {
    let worst = yb_check::<GaussRational, R>(kind, samples, rng)?;
    Ok(worst == 0.0)
}

/// Involutivity defect: applying the map twice returns the input.
pub fn involution_defect<T: Field>(
    kind: YbKind,
    alpha: &T,
    beta: &T,
    x: &T,
    y: &T,
) -> Result<f64, YbError> {
    let (u, v) = apply(kind, alpha, beta, x, y)?;
    let (x2, y2) = apply(kind, alpha, beta, &u, &v)?;
    if T::EXACT {
        Ok(if x2 == *x && y2 == *y { 0.0 } else { f64::INFINITY })
    } else {
        Ok((x2 - x.clone()).mag().max((y2 - y.clone()).mag()))
    }
}

/// Companion coincidence: the same formulas solve for (u, y) from (x, v):
/// apply(x, v) == (u, y).
pub fn companion_defect<T: Field>(
    kind: YbKind,
    alpha: &T,
    beta: &T,
    x: &T,
    y: &T,
) -> Result<f64, YbError> {
    let (u, v) = apply(kind, alpha, beta, x, y)?;
    let (u2, y2) = apply(kind, alpha, beta, x, &v)?;
    if T::EXACT {
        Ok(if u2 == u && y2 == *y { 0.0 } else { f64::INFINITY })
    } else {
        Ok((u2 - u).mag().max((y2 - y.clone()).mag()))
    }
}

/// Projective plane point.
pub type P2 = [Complex64; 3];

/// Conic as a 3x3 symmetric coefficient matrix.
#[derive(Debug, Clone)]
pub struct Conic(pub [[Complex64; 3]; 3]);

impl Conic {
    pub fn eval(&self, p: &P2) -> Complex64 {
        self.pair(p, p)
    }

    pub fn pair(&self, p: &P2, q: &P2) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += self.0[i][j] * p[i] * q[j];
            }
        }
        acc
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

pub fn normalize_p2(p: &P2) -> P2 {
    let s = p.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    [p[0] / s, p[1] / s, p[2] / s]
}

/// Projective distance: cross-product norm of normalized representatives.
pub fn p2_dist(p: &P2, q: &P2) -> f64 {
    let p = normalize_p2(p);
    let q = normalize_p2(q);
    let c = [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ];
    c.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Second intersections: the line through X on Q1 and Y on Q2 meets Q1
/// again in U and Q2 again in V.
pub fn conic_map(q1: &Conic, q2: &Conic, x: &P2, y: &P2) -> Result<(P2, P2), YbError> {
    if p2_dist(x, y) < 1e-12 {
        return Err(YbError::TangencyDegenerate);
    }
    let second = |q: &Conic, on: &P2, other: &P2| -> Result<P2, YbError> {
        // p(t) = on + t other: q(p) = t^2 q(other) + 2 t q(on, other) + q(on),
        // and q(on) = 0, so the second root is t = -2 q(on, other) / q(other)
        let a = q.eval(other);
        let b = q.pair(on, other);
        if a.norm() < 1e-13 * (1.0 + b.norm()) {
            return Err(YbError::TangencyDegenerate);
        }
        let t = -2.0 * b / a;
        if t.norm() < 1e-12 {
            return Err(YbError::TangencyDegenerate);
        }
        Ok([on[0] + t * other[0], on[1] + t * other[1], on[2] + t * other[2]])
    };
    let u = second(q1, x, y)?;
    let v = second(q2, y, x)?;
    Ok((normalize_p2(&u), normalize_p2(&v)))
}

fn join(p: &P2, q: &P2) -> P2 {
    [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ]
}

/// Incidence defect of the three-conic configuration: with
/// (X2, Y1) = F12(X, Y), (X3, Z1) = F13(X, Z), (Y3, Z2) = F23(Y, Z), the
/// meets X23 = X3Y3 ^ X2Z2, Y13 = X3Y3 ^ Y1Z1, Z12 = Y1Z1 ^ X2Z2 land on
/// Q1, Q2, Q3. Returns the worst membership residual.
pub fn pencil_incidence_defect(
    q1: &Conic,
    q2: &Conic,
    q3: &Conic,
    x: &P2,
    y: &P2,
    z: &P2,
) -> Result<f64, YbError> {
    let (x2, y1) = conic_map(q1, q2, x, y)?;
    let (x3, z1) = conic_map(q1, q3, x, z)?;
    let (y3, z2) = conic_map(q2, q3, y, z)?;
    let l_x3y3 = join(&x3, &y3);
    let l_y1z1 = join(&y1, &z1);
    let l_x2z2 = join(&x2, &z2);
    let x23 = normalize_p2(&join(&l_x3y3, &l_x2z2));
    let y13 = normalize_p2(&join(&l_x3y3, &l_y1z1));
    let z12 = normalize_p2(&join(&l_y1z1, &l_x2z2));
    Ok(q1
        .eval(&x23)
        .norm()
        .max(q2.eval(&y13).norm())
        .max(q3.eval(&z12).norm()))
}

/// Verify user-supplied Lax matrices for a map of the special form
/// x2 = B(y, beta, alpha)[x], y1 = A(x, alpha, beta)[y]:
/// A(y1, b, lam) A(x2, a, lam) = A(x, a, lam) A(y, b, lam), and the mirror
/// B-relation. Matrices are compared projectively (normalized by their
/// largest entry). Returns the worst residual over the lambda samples.
pub fn lax_check(
    kind: YbKind,
    a_mat: &dyn Fn(Complex64, Complex64, Complex64) -> Mat2,
    b_mat: &dyn Fn(Complex64, Complex64, Complex64) -> Mat2,
    alpha: Complex64,
    beta: Complex64,
    x: Complex64,
    y: Complex64,
    lambdas: &[Complex64],
) -> Result<f64, YbError> {
    let (x2, y1) = apply(kind, &alpha, &beta, &x, &y)?;
    let mut worst = 0.0f64;
    // projective representative: divide by the entry of largest modulus
    let norm_scale = |m: &Mat2| -> Mat2 {
        let mut best = m.0[0][0];
        for r in &m.0 {
            for v in r {
                if v.norm() > best.norm() {
                    best = *v;
                }
            }
        }
        m.scale(Complex64::new(1.0, 0.0) / best)
    };
    for &lam in lambdas {
        let left = a_mat(y1, beta, lam).mul(&a_mat(x2, alpha, lam));
        let right = a_mat(x, alpha, lam).mul(&a_mat(y, beta, lam));
        worst = worst.max(norm_scale(&left).sub(&norm_scale(&right)).norm_max());
        let left_b = b_mat(x2, alpha, lam).mul(&b_mat(y1, beta, lam));
        let right_b = b_mat(y, beta, lam).mul(&b_mat(x, alpha, lam));
        worst = worst.max(norm_scale(&left_b).sub(&norm_scale(&right_b)).norm_max());
    }
    Ok(worst)
}

/// Candidate Lax matrices of R_III built from its projective scaling
/// action; verified by `lax_check` in the test suite.
pub fn r3_a_matrix(x: Complex64, alpha: Complex64, lambda: Complex64) -> Mat2 {
    // v = A(x, alpha, beta)[y] with A = [[-beta x, alpha x^2], [-beta, beta x]]
    Mat2::new(-lambda * x, alpha * x * x, -lambda, lambda * x)
}

pub fn r3_b_matrix(y: Complex64, beta: Complex64, lambda: Complex64) -> Mat2 {
    // u = B(y, beta, alpha)[x] with B = [[alpha y, -beta y^2], [alpha, -alpha y]]
    Mat2::new(lambda * y, -beta * y * y, lambda, -lambda * y)
}
