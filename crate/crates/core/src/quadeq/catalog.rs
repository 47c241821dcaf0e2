//! The equation catalog and its basic algebra: evaluation of the defining
//! affine-linear polynomial and the unique solve for any vertex.
//!
//! Slot convention for a quadrilateral `(x, u, y, v)` with labels
//! `(alpha, beta)`: `x` and `y` are opposite (black diagonal), the edges
//! `(x,u)` and `(v,y)` carry `alpha`, the edges `(x,v)` and `(u,y)` carry
//! `beta`. On the lattice this is `(f, f1, f12, f2; alpha1, alpha2)`.

use num_complex::Complex64;

use crate::elliptic::JacobiModulus;
use crate::scalar::{Field, GaussRational};

#[derive(Debug, Clone, PartialEq)]
pub enum QuadEqError {
    /// Leading coefficient of the unknown vanishes (or a required
    /// denominator does).
    SingularConfiguration,
    /// Operation needs transcendental label functions not available in
    /// exact mode, or the kind does not support the operation.
    Unsupported,
    /// Uniformized three-leg forms need a branch hint for the center value.
    BranchRequired,
    /// The biquadratic does not factor as k(alpha,beta) h(x,u;alpha).
    FactorizationFailed,
    /// Root clustering of the discriminant is within tolerance of a tie.
    NumericallyAmbiguous,
    /// Cauchy data incomplete or ill-posed for the requested solve.
    IllPosedData,
}

impl core::fmt::Display for QuadEqError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::SingularConfiguration => "singular configuration",
            Self::Unsupported => "unsupported kind/mode combination",
            Self::BranchRequired => "uniformizing branch hint required",
            Self::FactorizationFailed => "biquadratic factorization failed",
            Self::NumericallyAmbiguous => "root clustering numerically ambiguous",
            Self::IllPosedData => "ill-posed data",
        };
        write!(f, "{s}")
    }
}

/// Catalog member. `delta` parameters are restricted to {0, 1}.
#[derive(Debug, Clone, Copy)]
pub enum QuadKind {
    Q1 { delta: bool },
    Q2,
    Q3 { delta: bool },
    Q4 { modulus: JacobiModulus },
    H1,
    H2,
    H3 { delta: bool },
    A1 { delta: bool },
    A2,
    CrossRatio,
    Hirota,
    Calapso,
    /// Discrete Moutard equation with minus signs (T-nets):
    /// y - x = alpha (v - u); beta is ignored.
    MoutardMinus,
    /// Discrete Moutard equation with plus signs (M-nets):
    /// y + x = alpha (u + v); beta is ignored.
    MoutardPlus,
}

impl QuadKind {
    pub fn q4(k: Complex64) -> Self {
        QuadKind::Q4 { modulus: JacobiModulus::new(k) }
    }

    /// Kinds whose defining polynomial is rational in the labels support
    /// exact Gaussian-rational arithmetic.
    pub fn supports_exact(&self) -> bool {
        !matches!(self, QuadKind::Q3 { .. } | QuadKind::Q4 { .. } | QuadKind::A2)
    }

    pub fn name(&self) -> &'static str {
        match self {
            QuadKind::Q1 { delta: false } => "Q1(d=0)",
            QuadKind::Q1 { delta: true } => "Q1(d=1)",
            QuadKind::Q2 => "Q2",
            QuadKind::Q3 { delta: false } => "Q3(d=0)",
            QuadKind::Q3 { delta: true } => "Q3(d=1)",
            QuadKind::Q4 { .. } => "Q4",
            QuadKind::H1 => "H1",
            QuadKind::H2 => "H2",
            QuadKind::H3 { delta: false } => "H3(d=0)",
            QuadKind::H3 { delta: true } => "H3(d=1)",
            QuadKind::A1 { delta: false } => "A1(d=0)",
            QuadKind::A1 { delta: true } => "A1(d=1)",
            QuadKind::A2 => "A2",
            QuadKind::CrossRatio => "cross-ratio",
            QuadKind::Hirota => "Hirota",
            QuadKind::Calapso => "Calapso",
            QuadKind::MoutardMinus => "Moutard(-)",
            QuadKind::MoutardPlus => "Moutard(+)",
        }
    }
}

/// Fields the catalog evaluates over; trig hooks return `None` when the
/// field cannot represent them (exact rationals).
pub trait CatalogField: Field {
    fn try_sin(x: &Self) -> Option<Self>;
    fn try_sn(x: &Self, m: &JacobiModulus) -> Option<Self>;
    fn from_c64(z: Complex64) -> Option<Self>;
}

impl CatalogField for Complex64 {
    fn try_sin(x: &Self) -> Option<Self> {
        Some(x.sin())
    }
    fn try_sn(x: &Self, m: &JacobiModulus) -> Option<Self> {
        Some(m.sn(*x))
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
}

impl CatalogField for GaussRational {
    fn try_sin(_: &Self) -> Option<Self> {
        None
    }
    fn try_sn(_: &Self, _: &JacobiModulus) -> Option<Self> {
        None
    }
    fn from_c64(_: Complex64) -> Option<Self> {
        None
    }
}

/// Which argument slot to solve for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    X,
    U,
    Y,
    V,
}

/// Evaluate the defining polynomial `Q(x,u,y,v; alpha, beta)`.
pub fn eval_q<T: CatalogField>(
    kind: &QuadKind,
    x: &T,
    u: &T,
    y: &T,
    v: &T,
    alpha: &T,
    beta: &T,
) -> Result<T, QuadEqError> {
    let (x, u, y, v, a, b) = (
        x.clone(),
        u.clone(),
        y.clone(),
        v.clone(),
        alpha.clone(),
        beta.clone(),
    );
    Ok(match kind {
        QuadKind::Q1 { delta } => {
            let base = a.clone() * (x.clone() - v.clone()) * (u.clone() - y.clone())
                - b.clone() * (x - u) * (v - y);
            if *delta {
                base + a.clone() * b.clone() * (a - b)
            } else {
                base
            }
        }
        QuadKind::Q2 => {
            let ab = a.clone() * b.clone();
            let amb = a.clone() - b.clone();
            a.clone() * (x.clone() - v.clone()) * (u.clone() - y.clone())
                - b.clone() * (x.clone() - u.clone()) * (v.clone() - y.clone())
                + ab.clone() * amb.clone() * (x + y + u + v)
                - ab.clone() * amb * (a.clone() * a - ab + b.clone() * b)
        }
        QuadKind::Q3 { delta } => {
            let sa = T::try_sin(&a).ok_or(QuadEqError::Unsupported)?;
            let sb = T::try_sin(&b).ok_or(QuadEqError::Unsupported)?;
            let sab = T::try_sin(&(a - b)).ok_or(QuadEqError::Unsupported)?;
            let base = sa.clone() * (x.clone() * u.clone() + v.clone() * y.clone())
                - sb.clone() * (x.clone() * v.clone() + u.clone() * y.clone())
                - sab.clone() * (x * y + u * v);
            if *delta {
                base + sab * sa * sb
            } else {
                base
            }
        }
        QuadKind::Q4 { modulus } => {
            let sa = T::try_sn(&a, modulus).ok_or(QuadEqError::Unsupported)?;
            let sb = T::try_sn(&b, modulus).ok_or(QuadEqError::Unsupported)?;
            let sab = T::try_sn(&(a - b), modulus).ok_or(QuadEqError::Unsupported)?;
            let ksq = T::from_c64(modulus.k * modulus.k).ok_or(QuadEqError::Unsupported)?;
            sa.clone() * (x.clone() * u.clone() + v.clone() * y.clone())
                - sb.clone() * (x.clone() * v.clone() + u.clone() * y.clone())
                - sab.clone() * (x.clone() * y.clone() + u.clone() * v.clone())
                + sab * sa * sb * (T::one() + ksq * x * y * u * v)
        }
        QuadKind::H1 => (x - y) * (u - v) + b - a,
        QuadKind::H2 => {
            (x.clone() - y.clone()) * (u.clone() - v.clone())
                + (b.clone() - a.clone()) * (x + y + u + v)
                + b.clone() * b
                - a.clone() * a
        }
        QuadKind::H3 { delta } => {
            let base = a.clone() * (x.clone() * u.clone() + v.clone() * y.clone())
                - b.clone() * (x * v + u * y);
            if *delta {
                base + (a.clone() * a - b.clone() * b)
            } else {
                base
            }
        }
        QuadKind::A1 { delta } => {
            let base = a.clone() * (x.clone() + v.clone()) * (u.clone() + y.clone())
                - b.clone() * (x + u) * (v + y);
            if *delta {
                base - a.clone() * b.clone() * (a - b)
            } else {
                base
            }
        }
        QuadKind::A2 => {
            let sa = T::try_sin(&a).ok_or(QuadEqError::Unsupported)?;
            let sb = T::try_sin(&b).ok_or(QuadEqError::Unsupported)?;
            let sab = T::try_sin(&(a - b)).ok_or(QuadEqError::Unsupported)?;
            sa * (x.clone() * v.clone() + u.clone() * y.clone())
                - sb * (x.clone() * u.clone() + v.clone() * y.clone())
                - sab * (T::one() + x * y * u * v)
        }
        QuadKind::CrossRatio => {
            b * (x.clone() - u.clone()) * (y.clone() - v.clone()) - a * (u - y) * (v - x)
        }
        QuadKind::Hirota => a * (x.clone() * u.clone() + y.clone() * v.clone()) - b * (x * v + y * u),
        QuadKind::Calapso => (y - x) * (v - u) - (b - a),
        QuadKind::MoutardMinus => (y - x) - a * (v - u),
        QuadKind::MoutardPlus => (y + x) - a * (u + v),
    })
}

/// Solve the equation for one argument given the other three, using the
/// affine linearity of the polynomial.
pub fn solve_vertex<T: CatalogField>(
    kind: &QuadKind,
    role: VertexRole,
    x: &T,
    u: &T,
    y: &T,
    v: &T,
    alpha: &T,
    beta: &T,
) -> Result<T, QuadEqError> {
    solve_vertex_with_tol(kind, role, x, u, y, v, alpha, beta, 1e-12)
}

/// As `solve_vertex` with an explicit smallness threshold on the leading
/// coefficient (randomized sweeps reject and redraw below 1e-8).
pub fn solve_vertex_with_tol<T: CatalogField>(
    kind: &QuadKind,
    role: VertexRole,
    x: &T,
    u: &T,
    y: &T,
    v: &T,
    alpha: &T,
    beta: &T,
    tol: f64,
) -> Result<T, QuadEqError> {
    let eval_with = |t: &T| -> Result<T, QuadEqError> {
        match role {
            VertexRole::X => eval_q(kind, t, u, y, v, alpha, beta),
            VertexRole::U => eval_q(kind, x, t, y, v, alpha, beta),
            VertexRole::Y => eval_q(kind, x, u, t, v, alpha, beta),
            VertexRole::V => eval_q(kind, x, u, y, t, alpha, beta),
        }
    };
    let b0 = eval_with(&T::zero())?;
    let b1 = eval_with(&T::one())?;
    let lead = b1 - b0.clone();
    if lead.is_zero() || lead.mag() < tol {
        return Err(QuadEqError::SingularConfiguration);
    }
    Ok(-b0 / lead)
}
