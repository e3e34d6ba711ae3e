//! Numerical analysis of Riesz means of Fourier–Laplace series on the unit
//! sphere `S^N`: zonal harmonics, summation kernels and their growth, means of
//! zonal functions, interpolation of complex-order Riesz means, and maximal
//! operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod geometry;
pub mod interp;
pub mod kernels;
pub mod maximal;
pub mod special;
pub mod spectral;
pub mod zonal;

pub use error::{Error, Result};
pub use fit::{envelope, envelope_slope, fit_loglog_slope, SlopeFit};
pub use geometry::{
    antipode, build_zonal_quadrature, geodesic_distance, sphere_area, SpherePoint, ZonalQuadrature,
};
pub use interp::{
    check_interpolation, riesz_mean_step, spectral_step, InterpolationWitness, StepFunction,
};
pub use kernels::{
    cesaro_kernel, classify_regime, interior_bound, interior_bound_parts, majorant_m, riesz_kernel,
    Family, KernelSpec, MajorantParams, Regime, ZonalSeries,
};
pub use maximal::{
    ball_average, inequality_constants, mass_function, maximal_function, maximal_riesz,
    region_decomposition, MassFunction, MaximalProfile, RegionDecomposition,
};
pub use num_complex::Complex64;
pub use spectral::{eigenvalue, multiplicity, CesaroWeights, SpectralTable};
pub use zonal::{
    apply_riesz_mean_coeffs, apply_riesz_mean_kernel, project, project_all, CoefficientVector,
    EvalPoint, Profile, ZonalFunction,
};
