//! Scheme stencils, their symbol (amplification factor) and the audit of the
//! dispersive small-frequency expansion
//! `F̂(θ) = exp(iαθ − ic₃θ³ − c₄θ⁴ + O(θ⁵))`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{
    beam_warming_weights, expansion_from_cumulants, lax_wendroff_weights, stencil_cumulants,
    upwind_weights,
};
use crate::scalar::Real;

/// Tolerance on `|Σ aₗ − 1|` for a stencil to count as conservative.
pub const CONSERVATION_TOL: f64 = 1e-12;
/// `|κ₂|` above this means the scheme is diffusive rather than dispersive.
pub const KAPPA2_TOL: f64 = 1e-10;
/// `|c₃|` and `c₄` must exceed this.
pub const COEFF_FLOOR: f64 = 1e-12;
/// Imaginary parts of `κ₁..κ₄` above this make `α, c₃, c₄` non-real.
pub const IMAG_TOL: f64 = 1e-10;
pub const AUDIT_GRID: usize = 4096;
pub const AUDIT_EXCLUSION: f64 = 1e-3;

/// A finitely supported stencil: `coefficients[k]` is `a_{min_offset + k}`.
///
/// Leading and trailing zero coefficients are trimmed on construction, so the
/// first and last stored entries are nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stencil<T> {
    min_offset: i64,
    coefficients: Vec<Complex<T>>,
    label: Option<String>,
}

/// The two model schemes with closed-form modulus identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    LaxWendroff,
    BeamWarming,
}

impl SchemeKind {
    pub fn stencil<T: Real>(self, lambda: T) -> Result<Stencil<T>> {
        match self {
            SchemeKind::LaxWendroff => Stencil::lax_wendroff(lambda),
            SchemeKind::BeamWarming => Stencil::beam_warming(lambda),
        }
    }

    /// Closed form of `|F̂(θ)|²`.
    pub fn modulus_squared<T: Real>(self, lambda: T, theta: T) -> T {
        let one = T::one();
        let s = (theta / T::lit(2.0)).sin();
        let s4 = s * s * s * s;
        let k = match self {
            SchemeKind::LaxWendroff => lambda * lambda * (one - lambda * lambda),
            SchemeKind::BeamWarming => {
                lambda * (one - lambda) * (one - lambda) * (T::lit(2.0) - lambda)
            }
        };
        one - T::lit(4.0) * k * s4
    }
}

fn check_lambda<T: Real>(lambda: T, upper: f64) -> Result<()> {
    if !(lambda > T::zero() && lambda <= T::lit(upper)) {
        return Err(Error::invalid(
            "lambda",
            lambda,
            "outside the l2-stable range of the scheme",
        ));
    }
    Ok(())
}

impl<T: Real> Stencil<T> {
    pub fn new(
        min_offset: i64,
        coefficients: Vec<Complex<T>>,
        label: Option<String>,
    ) -> Result<Self> {
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("coefficients", "non-finite", "must be finite"));
        }
        let first = coefficients.iter().position(|c| !c.is_zero_exact());
        let Some(first) = first else {
            return Err(Error::EmptyStencil);
        };
        let last = coefficients.iter().rposition(|c| !c.is_zero_exact()).unwrap();
        Ok(Self {
            min_offset: min_offset + first as i64,
            coefficients: coefficients[first..=last].to_vec(),
            label,
        })
    }

    pub fn from_real(min_offset: i64, coefficients: &[T], label: Option<String>) -> Result<Self> {
        let c = coefficients.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::new(min_offset, c, label)
    }

    /// Builds a stencil from `(offset, coefficient)` pairs; repeated offsets add up.
    pub fn from_pairs(pairs: &[(i64, Complex<T>)], label: Option<String>) -> Result<Self> {
        let Some(lo) = pairs.iter().map(|p| p.0).min() else {
            return Err(Error::EmptyStencil);
        };
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut c = vec![Complex::new(T::zero(), T::zero()); (hi - lo + 1) as usize];
        for &(off, v) in pairs {
            c[(off - lo) as usize] = c[(off - lo) as usize] + v;
        }
        Self::new(lo, c, label)
    }

    /// Lax-Wendroff, `λ ∈ (0, 1]`.
    pub fn lax_wendroff(lambda: T) -> Result<Self> {
        check_lambda(lambda, 1.0)?;
        Self::from_real(
            -1,
            &lax_wendroff_weights(lambda),
            Some(format!("lax-wendroff lambda={lambda}")),
        )
    }

    /// Beam-Warming, `λ ∈ (0, 2]`.
    pub fn beam_warming(lambda: T) -> Result<Self> {
        check_lambda(lambda, 2.0)?;
        Self::from_real(
            0,
            &beam_warming_weights(lambda),
            Some(format!("beam-warming lambda={lambda}")),
        )
    }

    /// Monotone first-order upwind scheme, `λ ∈ (0, 1]`.
    pub fn upwind(lambda: T) -> Result<Self> {
        check_lambda(lambda, 1.0)?;
        Self::from_real(0, &upwind_weights(lambda), Some(format!("upwind lambda={lambda}")))
    }

    pub fn min_offset(&self) -> i64 {
        self.min_offset
    }

    pub fn max_offset(&self) -> i64 {
        self.min_offset + self.coefficients.len() as i64 - 1
    }

    /// `max_offset − min_offset`.
    pub fn span(&self) -> u64 {
        (self.coefficients.len() - 1) as u64
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `a_ℓ`, zero outside the support.
    pub fn coefficient(&self, offset: i64) -> Complex<T> {
        let k = offset - self.min_offset;
        if k < 0 || k >= self.coefficients.len() as i64 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coefficients[k as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.min_offset + k as i64, c))
    }

    pub fn sum(&self) -> Complex<T> {
        self.coefficients
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc + c)
    }

    pub fn is_conservative(&self, tol: T) -> bool {
        (self.sum() - Complex::new(T::one(), T::zero())).norm() <= tol
    }

    pub fn l1_norm(&self) -> T {
        self.coefficients.iter().fold(T::zero(), |acc, c| acc + c.norm())
    }

    /// All coefficients real and nonnegative.
    pub fn is_monotone(&self) -> bool {
        self.coefficients
            .iter()
            .all(|c| c.im == T::zero() && c.re >= T::zero())
    }

    /// `F̂(θ) = Σ aₗ e^{iℓθ}`.
    pub fn symbol(&self, theta: T) -> Complex<T> {
        self.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (l, c)| {
            acc + c * Complex::from_polar(T::one(), T::from_int(l) * theta)
        })
    }

    /// The spatially reflected stencil `aₗ ↦ a₋ₗ`.
    pub fn reflected(&self) -> Self {
        let mut c = self.coefficients.clone();
        c.reverse();
        Self {
            min_offset: -self.max_offset(),
            coefficients: c,
            label: self.label.as_ref().map(|l| format!("reflected {l}")),
        }
    }

    /// The stencil `aₗ ↦ a_{ℓ−shift}`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            min_offset: self.min_offset + shift,
            coefficients: self.coefficients.clone(),
            label: self.label.clone(),
        }
    }

    /// `1 − |F̂(θ)|²` evaluated through the autocorrelation of the weights, so
    /// that it is accurate to relative precision even where `|F̂| ≈ 1`.
    pub fn modulus_deficit(&self, theta: T) -> T {
        let c = &self.coefficients;
        let s = self.sum().norm_sqr();
        let mut deficit = T::one() - s;
        for k in 1..c.len() {
            let r = (0..c.len() - k).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                acc + c[l + k] * c[l].conj()
            });
            let kt = T::from_int(k as i64) * theta;
            let h = (kt / T::lit(2.0)).sin();
            deficit = deficit + T::lit(4.0) * r.re * h * h + T::lit(2.0) * r.im * kt.sin();
        }
        deficit
    }
}

trait ExactZero {
    fn is_zero_exact(&self) -> bool;
}

impl<T: Real> ExactZero for Complex<T> {
    fn is_zero_exact(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
}

/// Max over an equispaced θ-grid of `| |F̂(θ)|² − closed form |`.
pub fn modulus_identity_check<T: Real>(kind: SchemeKind, lambda: T, grid_size: usize) -> Result<T> {
    if grid_size < 16 {
        return Err(Error::invalid("grid_size", grid_size, "must be at least 16"));
    }
    let s = kind.stencil(lambda)?;
    let mut worst = T::zero();
    for k in 0..grid_size {
        let theta = theta_grid::<T>(k, grid_size);
        let err = (s.symbol(theta).norm_sqr() - kind.modulus_squared(lambda, theta)).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Point `k` of the closed grid `[−π, π]` with `grid_size` intervals.
fn theta_grid<T: Real>(k: usize, grid_size: usize) -> T {
    let pi = T::PI();
    -pi + T::lit(2.0) * pi * T::from_int(k as i64) / T::from_int(grid_size as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dissipation<T> {
    pub dissipative: bool,
    /// `1 − max |F̂(θ)|` over the probe grid.
    pub min_margin: T,
}

/// Samples `|F̂|` on `[−π, π]` minus `(−r, r)` and checks it stays below 1.
pub fn dissipation_check<T: Real>(
    s: &Stencil<T>,
    grid_size: usize,
    exclusion_radius: T,
) -> Result<Dissipation<T>> {
    if grid_size < 64 {
        return Err(Error::invalid("grid_size", grid_size, "must be at least 64"));
    }
    if !(exclusion_radius > T::zero() && exclusion_radius < T::PI()) {
        return Err(Error::invalid(
            "exclusion_radius",
            exclusion_radius,
            "must lie in (0, pi)",
        ));
    }
    let mut min_deficit = T::infinity();
    let mut probe = |theta: T| {
        if theta.abs() >= exclusion_radius {
            min_deficit = min_deficit.min(s.modulus_deficit(theta));
        }
    };
    for k in 0..=grid_size {
        probe(theta_grid(k, grid_size));
    }
    // the exclusion boundary itself is where the margin is thinnest
    probe(exclusion_radius);
    probe(-exclusion_radius);
    let modulus = (T::one() - min_deficit).max(T::zero()).sqrt();
    Ok(Dissipation {
        dissipative: min_deficit > T::zero(),
        min_margin: min_deficit / (T::one() + modulus),
    })
}

/// Expansion data of `log F̂` at `θ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolExpansion<T> {
    pub alpha: T,
    /// Second cumulant; vanishes for dispersive schemes.
    pub kappa2: T,
    pub c3: T,
    pub c4: T,
    /// `max |log F̂(θ) − (iαθ − ic₃θ³ − c₄θ⁴)| / |θ|⁵` over `0.02 ≤ |θ| ≤ 0.1`.
    pub residual5: T,
    /// Largest imaginary part among `κ₁..κ₄`.
    pub imag_residual: T,
}

impl<T: Real> SymbolExpansion<T> {
    pub fn c3_is_positive(&self) -> bool {
        self.c3 > T::zero()
    }
}

/// Extracts `α, c₃, c₄` from exact lattice moments of the stencil.
pub fn expansion_coefficients<T: Real>(s: &Stencil<T>) -> Result<SymbolExpansion<T>> {
    if !s.is_conservative(T::lit(CONSERVATION_TOL)) {
        return Err(Error::NonConservative {
            sum: format!("{}", s.sum()),
        });
    }
    Ok(expansion_of(s))
}

fn expansion_of<T: Real>(s: &Stencil<T>) -> SymbolExpansion<T> {
    // moments about the nearest lattice point to the mean keep the powers small
    let mean = s
        .iter()
        .fold(T::zero(), |acc, (l, c)| acc + T::from_int(l) * c.re);
    let origin = mean.round().to_i64().unwrap_or(0);
    let kappa = stencil_cumulants(s.min_offset(), s.coefficients(), origin);
    let (alpha, kappa2, c3, c4) = expansion_from_cumulants(&kappa);
    let imag_residual = kappa[1..=4]
        .iter()
        .fold(T::zero(), |acc, k| acc.max(k.im.abs()));

    let (alpha, c3, c4) = (alpha.re, c3.re, c4.re);
    let mut residual5 = T::zero();
    for k in 4..=20 {
        for sign in [-1.0, 1.0] {
            let theta = T::lit(sign * 0.005 * k as f64);
            let log_f = s.symbol(theta).ln();
            let t3 = theta * theta * theta;
            let model = Complex::new(-c4 * t3 * theta, alpha * theta - c3 * t3);
            let r = (log_f - model).norm() / theta.abs().powi(5);
            residual5 = residual5.max(r);
        }
    }
    SymbolExpansion {
        alpha,
        kappa2: kappa2.re,
        c3,
        c4,
        residual5,
        imag_residual,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionAudit<T> {
    pub sums_to_one: bool,
    pub dissipative: bool,
    pub min_margin: T,
    pub expansion: SymbolExpansion<T>,
    pub admissible: bool,
    /// Human-readable list of the failed checks.
    pub violations: Vec<String>,
}

/// Checks conservation, dissipation and the shape of the expansion.
pub fn assumption_audit<T: Real>(s: &Stencil<T>) -> AssumptionAudit<T> {
    let sums_to_one = s.is_conservative(T::lit(CONSERVATION_TOL));
    let diss = dissipation_check(s, AUDIT_GRID, T::lit(AUDIT_EXCLUSION))
        .expect("audit grid parameters are valid");
    let expansion = expansion_of(s);
    let mut violations = Vec::new();
    if !sums_to_one {
        violations.push(format!("coefficients sum to {}", s.sum()));
    }
    if !diss.dissipative {
        violations.push("dissipation condition fails (|F| reaches 1 away from 0)".into());
    }
    if expansion.kappa2.abs() > T::lit(KAPPA2_TOL) {
        violations.push(format!("second cumulant {} does not vanish", expansion.kappa2));
    }
    if expansion.imag_residual > T::lit(IMAG_TOL) {
        violations.push("expansion coefficients are not real".into());
    }
    if expansion.c3.abs() <= T::lit(COEFF_FLOOR) {
        violations.push("c3 vanishes".into());
    }
    if expansion.c4 <= T::lit(COEFF_FLOOR) {
        violations.push("c4 is not positive".into());
    }
    AssumptionAudit {
        sums_to_one,
        dissipative: diss.dissipative,
        min_margin: diss.min_margin,
        expansion,
        admissible: violations.is_empty(),
        violations,
    }
}
