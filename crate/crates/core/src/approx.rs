//! Explicit approximate Green's functions and the `ℓ¹` growth constant.
//!
//! With `d = j − αn`, the damped-cosine approximation is
//!
//! ```text
//! 𝔾ⱼⁿ = (1/π) exp(−c₄d²/(9c₃²n)) cos(2|d|^{3/2}/(3√(3c₃n)) − π/4) ∫_{−A}^{A} e^{−Bu²} du,
//! A = √(2|d|/(3c₃n)),  B = √(3c₃n|d|),
//! ```
//!
//! and the Airy-profile approximation is
//! `ℋⱼⁿ = (3c₃n)^{−1/3} Ai(d/(3c₃n)^{1/3})`, times the same Gaussian factor
//! when `d < 0`. The Gaussian integral is `A√π·erf(A√B)/(A√B)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{airy_ai, erf_over_x, gamma};
use crate::stencil::{SymbolExpansion, COEFF_FLOOR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C3Sign {
    Positive,
    Negative,
}

impl C3Sign {
    pub fn as_real<T: Real>(self) -> T {
        match self {
            C3Sign::Positive => T::one(),
            C3Sign::Negative => -T::one(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams<T> {
    pub alpha: T,
    pub c3_abs: T,
    pub c3_sign: C3Sign,
    pub c4: T,
    /// `c₄ / (9c₃²)`
    pub beta0: T,
    /// `2 / (3√(3|c₃|))`
    pub beta1: T,
}

impl<T: Real> ApproxParams<T> {
    pub fn new(alpha: T, c3: T, c4: T) -> Result<Self> {
        if !(c3.abs() > T::lit(COEFF_FLOOR)) {
            return Err(Error::invalid("c3", c3, "must be nonzero"));
        }
        if !(c4 > T::lit(COEFF_FLOOR)) {
            return Err(Error::invalid("c4", c4, "must be positive"));
        }
        let c3_abs = c3.abs();
        Ok(Self {
            alpha,
            c3_abs,
            c3_sign: if c3 > T::zero() {
                C3Sign::Positive
            } else {
                C3Sign::Negative
            },
            c4,
            beta0: c4 / (T::lit(9.0) * c3_abs * c3_abs),
            beta1: T::lit(2.0) / (T::lit(3.0) * (T::lit(3.0) * c3_abs).sqrt()),
        })
    }

    pub fn from_expansion(e: &SymbolExpansion<T>) -> Result<Self> {
        Self::new(e.alpha, e.c3, e.c4)
    }

    /// `j − αn`.
    pub fn offset(&self, n: u64, j: i64) -> T {
        T::from_int(j) - self.alpha * T::from_int(n as i64)
    }

    /// `sign(c₃)·(j − αn)`: the coordinate in which the dispersive tail lies
    /// on the negative side.
    pub fn oriented_offset(&self, n: u64, j: i64) -> T {
        self.c3_sign.as_real::<T>() * self.offset(n, j)
    }

    /// `exp(−c₄d²/(9c₃²n))`.
    fn gaussian(&self, n: T, d: T) -> T {
        (-self.beta0 * d * d / n).exp()
    }
}

/// `𝔾ⱼⁿ` at lattice point `j`.
pub fn approx_g<T: Real>(p: &ApproxParams<T>, n: u64, j: i64) -> T {
    approx_g_at(p, n, p.oriented_offset(n, j))
}

/// `𝔾` as a function of the real, oriented offset `d`.
pub fn approx_g_at<T: Real>(p: &ApproxParams<T>, n: u64, d: T) -> T {
    let ad = d.abs();
    if ad == T::zero() {
        return T::zero();
    }
    let nf = T::from_int(n as i64);
    let three = T::lit(3.0);
    let c3n = three * p.c3_abs * nf;
    let a = (T::lit(2.0) * ad / c3n).sqrt();
    let b = (c3n * ad).sqrt();
    let z = a * b.sqrt();
    let integral = a * T::PI().sqrt() * erf_over_x(z);
    let phase = T::lit(2.0) * ad * ad.sqrt() / (three * c3n.sqrt()) - T::FRAC_PI_4();
    p.gaussian(nf, d) * phase.cos() * integral / T::PI()
}

/// Upper bound `(2/π)√(2|d|/(3|c₃|n))` on `|𝔾ⱼⁿ|`.
pub fn approx_g_trivial_bound<T: Real>(p: &ApproxParams<T>, n: u64, j: i64) -> T {
    let d = p.offset(n, j).abs();
    T::lit(2.0) / T::PI()
        * (T::lit(2.0) * d / (T::lit(3.0) * p.c3_abs * T::from_int(n as i64))).sqrt()
}

/// `ℋⱼⁿ`; only defined for `c₃ > 0`.
pub fn approx_h<T: Real>(p: &ApproxParams<T>, n: u64, j: i64) -> Result<T> {
    if p.c3_sign != C3Sign::Positive {
        return Err(Error::Unsupported("the Airy approximation requires c3 > 0"));
    }
    let nf = T::from_int(n as i64);
    let d = p.offset(n, j);
    let scale = (T::lit(3.0) * p.c3_abs * nf).cbrt();
    let base = airy_ai(d / scale) / scale;
    Ok(if d >= T::zero() {
        base
    } else {
        base * p.gaussian(nf, d)
    })
}

/// `ℓ = 8Γ(11/8)/(√3 π^{3/2}) · c₃^{1/2} / c₄^{3/8}`, the limit of
/// `‖𝒢ⁿ‖₁ / n^{1/8}`.
pub fn growth_constant<T: Real>(c3_abs: T, c4: T) -> Result<T> {
    if !(c3_abs > T::zero()) {
        return Err(Error::invalid("c3_abs", c3_abs, "must be positive"));
    }
    if !(c4 > T::zero()) {
        return Err(Error::invalid("c4", c4, "must be positive"));
    }
    let k = T::lit(8.0) * gamma(T::lit(11.0 / 8.0))
        / (T::lit(3.0).sqrt() * T::PI().powf(T::lit(1.5)));
    Ok(k * c3_abs.sqrt() / c4.powf(T::lit(3.0 / 8.0)))
}
