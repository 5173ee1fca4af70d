//! Explicit frame constants for finite exponential systems on balls.
//!
//! Given a finite family of frequencies in R^N whose points keep a minimal
//! Euclidean gap, the exponentials e^{i omega_k . t} form a Riesz sequence
//! in L^2(B_R) once R exceeds a critical radius R_0 determined by the gaps.
//! This crate computes fully explicit two-sided constants for that
//! inequality, and independently certifies them against the exact spectral
//! bounds of the system's Gram matrix.
//!
//! The pieces:
//!
//! - [`spectra`]: frequency families, class partitions, gap geometry, and
//!   the critical radius.
//! - [`ball`]: the first Dirichlet eigenfunction of the unit ball, its
//!   Fourier transform, the ball indicator transform, and certified
//!   minorant constants.
//! - [`constants`]: the assembled constant chain and the frame bounds
//!   c1, c2 with their decay exponent in R - R_0.
//! - [`gram`]: exact Gram matrices, spectral frame bounds, dual families,
//!   and interpolating multipliers used for certification.
//! - [`linalg`]: the dense symmetric eigensolver and Cholesky kernels
//!   backing the above.
//!
//! Bessel evaluation and adaptive quadrature are internal; the Bessel
//! entry points [`bessel_j`] and [`first_bessel_zero`] are re-exported for
//! callers that need the special functions directly.

// `!(x > 0.0)` validation guards reject NaN together with the out-of-range
// values; the spelled-out comparison is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// the dense kernels keep the textbook index-loop shape
#![allow(clippy::needless_range_loop)]

mod bessel;
mod quadrature;

pub mod ball;
pub mod constants;
pub mod error;
pub mod gram;
pub mod linalg;
pub mod spectra;

pub use bessel::{bessel_j, first_bessel_zero};
pub use error::{Error, Result};

pub use ball::{
    alpha_m_plus_1, alpha_m_plus_1_certified, ball_transform_g, ball_volume, dirichlet_mu,
    eigen_profile, fourier_h, min_h_squared, AlphaCertificate, RadialWindow,
};
pub use constants::{alpha_zero, exponent, theorem_constants, ChainMode, ConstantChain};
pub use gram::{
    dual_family, gram_matrix, haraux_map, kahane_interpolant, quadratic_form, rho_hat,
    riesz_bounds, DualFamily, GramMatrix, KahaneInterpolant, RieszBounds,
};
pub use spectra::{
    class_gaps, geometry, minimal_gap, one_d_mth_gap, parse_family, partition_from_classes,
    remark_radius, residue_partition, theorem_radius, FrequencyFamily, GapGeometry,
    PartitionedFamily,
};
