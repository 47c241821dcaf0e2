//! Nonlinear discrete complex analysis: cross-ratio and Hirota systems on
//! quad-graphs and octants, circle patterns, Baecklund transforms of
//! patterns, discrete z^{2a} and Log, and the linearization onto the
//! linear theory.

mod circlepattern;
mod hirota;
mod linearize;
mod zpow;

pub use circlepattern::{
    integrable_pattern_check, kite_overlap_count, pattern_from_z, pattern_laplace_residuals,
    Circle, CirclePattern,
};
pub use hirota::{
    cross_ratio_residual_octant, crossratio_solve, hirota_backlund_octant, hirota_fill_octant,
    hirota_solve, w_from_z, z_from_w, HirotaOctant,
};
pub use linearize::{derivative_pairing_residual, holomorphy_residual_octant, linearize_octant};
pub use zpow::{
    dlog_axis, dlog_constraint_residual, dlog_octant, dlog_octant_stable, wpow_axis, wpow_octant,
    wpow_octant_stable, zpow_axis, zpow_constraint_residual, zpow_from_w,
    zpow_hirota_constraint_residual, zpow_octant_direct, zpow_octant_stable, DlogField,
};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternError {
    /// Vanishing denominator during a solve.
    SingularConfiguration,
    /// Cauchy data does not determine the solution (or overdetermines it).
    IllPosedPath,
    /// Division by a vanishing field value.
    ZeroDivisor,
    /// A face fails the kite conditions (witness face id).
    NotAKite(usize),
    /// Bad input sizes or domains.
    BadInput,
}

impl core::fmt::Display for PatternError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::SingularConfiguration => write!(f, "singular configuration"),
            Self::IllPosedPath => write!(f, "ill-posed Cauchy data"),
            Self::ZeroDivisor => write!(f, "zero divisor"),
            Self::NotAKite(face) => write!(f, "face {face} is not a kite"),
            Self::BadInput => write!(f, "bad input"),
        }
    }
}

/// Complex cross-ratio q(a, b, c, d) = (a - b)(c - d) / ((b - c)(d - a)).
pub fn cross_ratio(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    (a - b) * (c - d) / ((b - c) * (d - a))
}

/// Solve q(a, b, X, d) = rho for X.
pub fn solve_cross_ratio_third(
    a: Complex64,
    b: Complex64,
    d: Complex64,
    rho: Complex64,
) -> Result<Complex64, PatternError> {
    let k = rho * (d - a);
    let den = (a - b) + k;
    if den.norm() < 1e-14 {
        return Err(PatternError::SingularConfiguration);
    }
    let x = ((a - b) * d + k * b) / den;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(PatternError::SingularConfiguration)
    }
}
