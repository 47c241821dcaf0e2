//! Discrete nets in R^N and their transformations: Q-nets and their
//! coefficient maps, circular nets via Miquel, T-nets and the
//! star-triangle map, A-nets via Lelieuvre, K-surfaces with Baecklund,
//! isothermic surfaces with Christoffel dual and Darboux, and the
//! S-isothermic dual.

mod anet;
mod circular;
mod isothermic;
mod ksurface;
mod qnet;
mod sisothermic;
mod tnet;
pub mod vector;

pub use anet::{anet_from_lelieuvre, coplanarity_defect, weingarten};
pub use circular::{circular_check, circular_extend, lifted_rank, sphere_fit};
pub use isothermic::{
    cross_ratio_planar, isothermic_check, isothermic_darboux, isothermic_dual, isothermic_metric,
    lift_moutard_residual, lightcone_lift, solve_cross_ratio_in_plane,
};
pub use ksurface::{ksurface_backlund, ksurface_extend, ksurface_step, lelieuvre_surface};
pub use qnet::{
    qnet_c_update, qnet_check_c_map_4d, qnet_check_rotation_map_4d, qnet_extend,
    qnet_extend_with_coeffs, qnet_solve_goursat_2d, quadric_through, quadric_value, rotation_update,
    CubeCoeffs, Quadric,
};
pub use sisothermic::{sisothermic_dual, sisothermic_from_lift, sisothermic_moutard_fill};
pub use tnet::{star_triangle, tnet_check_star_triangle_4d, tnet_extend_2d, tnet_in_quadric_step};

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetError {
    /// Three planes fail to intersect in a single point.
    DegeneratePlanes,
    /// Input quadrilateral not concircular.
    NotConcircular,
    /// Normal field does not solve the discrete Moutard equation.
    NotMoutard,
    /// Cross-ratios of the surface do not factorize as -alpha1/alpha2.
    NotIsothermic,
    /// A discrete one-form failed to close around a face.
    NonClosedForm,
    /// Vanishing denominator in a step.
    SingularConfiguration,
}

impl core::fmt::Display for NetError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Self::DegeneratePlanes => "degenerate plane intersection",
            Self::NotConcircular => "quadrilateral not concircular",
            Self::NotMoutard => "normal field not a Moutard solution",
            Self::NotIsothermic => "cross-ratios do not factorize",
            Self::NonClosedForm => "discrete one-form does not close",
            Self::SingularConfiguration => "singular configuration",
        };
        write!(f, "{s}")
    }
}

/// Bilinear forms on R^N / R^{N+1,1}; the Minkowski form negates the last
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearForm {
    Euclidean,
    Minkowski,
}

impl BilinearForm {
    pub fn inner<T: Field>(&self, a: &[T], b: &[T]) -> T {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = T::zero();
        let n = a.len();
        for k in 0..n {
            let term = a[k].clone() * b[k].clone();
            if matches!(self, BilinearForm::Minkowski) && k == n - 1 {
                acc = acc - term;
            } else {
                acc = acc + term;
            }
        }
        acc
    }
}
