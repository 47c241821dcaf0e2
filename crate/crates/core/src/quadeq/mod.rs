//! Integrable quad-equation engine: the Q/H/A catalog plus cross-ratio,
//! Hirota, Calapso and Moutard kinds; solve-for-any-vertex, 3D consistency
//! and tetrahedron sweeps, biquadratic classification, three-leg forms and
//! Laplace reductions, Baecklund transforms, zero-curvature matrices.

mod backlund;
mod biquadratic;
mod catalog;
mod consistency;
mod threeleg;
mod zcr;

pub use backlund::{
    backlund, backlund_edge_residual, graph_residual, grid_residual, solve_goursat_grid,
    GridLabels, GridSolution,
};
pub use biquadratic::{
    antisymmetry_check, biquadratic_g, classify_by_discriminant, classify_kind, discriminant_r,
    r_alpha_independent, Biquadratic, CanonicalDiscriminant,
};
pub use catalog::{
    eval_q, solve_vertex, solve_vertex_with_tol, CatalogField, QuadEqError, QuadKind, VertexRole,
};
pub use consistency::{
    check_3d_consistency, check_tetrahedron, closed_form_f123, cube_routes, ConsistencyReport,
};
pub use threeleg::{laplace_reduce, long_leg, three_leg, LegForm, ThreeLeg};
pub use zcr::{
    calapso_transition, cross_ratio_l1, cross_ratio_transition, default_lambdas,
    det_cross_ratio_l1, hirota_transition, linear_cr_transition, pauli, tquadric_transition,
    tquadric_zcr_residual, zcr_check_faces, FaceData, Mat2Fn,
};
