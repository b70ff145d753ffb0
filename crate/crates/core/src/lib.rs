//! Exact and approximate Green's functions of finitely supported convolution
//! schemes for the transport equation, with tools to audit the dispersive
//! small-frequency expansion of the amplification factor, evaluate the
//! explicit Airy-type approximations of the Green's function and measure the
//! slow `n^{1/8}` growth of its `ℓ¹` norm.
//!
//! Everything is generic over a real scalar implementing [`Real`] (`f32` and
//! `f64`); the moment and cumulant algebra used to extract the expansion is
//! generic over any numeric ring and can run on exact rationals
//! ([`Rational`]). The `*64` aliases below fix the scalar to `f64`, which is
//! what all tolerances in the test-suite are calibrated for.

pub mod analysis;
pub mod approx;
pub mod error;
pub mod green;
pub mod moments;
pub mod scalar;
pub mod special;
pub mod stencil;

pub use analysis::{
    bound_report, bv_apply_bound, bv_bounds, check_bound1, check_bound2, corollary1_report,
    corollary1_sums, expected_oscillation_side, fit_decay_rate, growth_series, omega,
    oscillation_side, AnalysisOptions, BVReport, BoundReport, BoundSide, Corollary1Report,
    Corollary1Sums, GrowthReport, Side,
};
pub use approx::{approx_g, approx_h, growth_constant, ApproxParams, C3Sign};
pub use error::{Error, Result};
pub use green::{
    apply, evolve, evolve_snapshots, green, green_direct, green_spectral, sample_step, GreenMethod, GreenTable,
    GridFunction, Norms, SpectralOptions,
};
pub use scalar::Real;
pub use stencil::{
    assumption_audit, dissipation_check, expansion_coefficients, modulus_identity_check,
    AssumptionAudit, Dissipation, SchemeKind, Stencil, SymbolExpansion,
};

pub use num_complex::Complex;

/// Exact rational scalar for the moment/cumulant algebra.
pub type Rational = num_rational::Ratio<i128>;

pub type Stencil64 = Stencil<f64>;
pub type SymbolExpansion64 = SymbolExpansion<f64>;
pub type AssumptionAudit64 = AssumptionAudit<f64>;
pub type GreenTable64 = GreenTable<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type ApproxParams64 = ApproxParams<f64>;
pub type BoundReport64 = BoundReport<f64>;
pub type GrowthReport64 = GrowthReport<f64>;
pub type BVReport64 = BVReport<f64>;
pub type Complex64 = Complex<f64>;
