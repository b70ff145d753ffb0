//! Scheme weights, lattice moments and the moment-to-cumulant map.
//!
//! These routines only need ring operations, so they run unchanged on `f64`,
//! on complex floats and on exact rationals. For a conservative stencil the
//! weights `a_ℓ` behave like a (signed, possibly complex) jump law on `ℤ` and
//! `log F̂(θ) = Σ_k κ_k (iθ)^k / k!`, which is how the expansion data
//! `α = κ₁`, `c₃ = κ₃/6`, `c₄ = −κ₄/24` is read off.

use num_traits::{FromPrimitive, Num};

/// Highest moment order carried by the expansion (`θ⁵` remainder).
pub const MAX_ORDER: usize = 5;

fn two<T: Num>() -> T {
    T::one() + T::one()
}

/// Lax-Wendroff weights `[a₋₁, a₀, a₁]`.
pub fn lax_wendroff_weights<T: Num + Clone>(lambda: T) -> [T; 3] {
    let l2 = lambda.clone() * lambda.clone();
    let am1 = (l2.clone() - lambda.clone()) / two();
    let a0 = T::one() - l2.clone();
    let a1 = (lambda + l2) / two();
    [am1, a0, a1]
}

/// Beam-Warming weights `[a₀, a₁, a₂]`.
pub fn beam_warming_weights<T: Num + Clone>(lambda: T) -> [T; 3] {
    let one_m = T::one() - lambda.clone();
    let two_m = two::<T>() - lambda.clone();
    let a0 = one_m * two_m.clone() / two();
    let a1 = lambda.clone() * two_m;
    let a2 = (lambda.clone() * lambda.clone() - lambda) / two();
    [a0, a1, a2]
}

/// First-order upwind weights `[a₀, a₁] = [1 − λ, λ]`.
pub fn upwind_weights<T: Num + Clone>(lambda: T) -> [T; 2] {
    [T::one() - lambda.clone(), lambda]
}

/// Raw moments `m_k = Σ_ℓ (ℓ − origin)^k a_ℓ` for `k = 0..=5`.
pub fn raw_moments<T>(min_offset: i64, weights: &[T], origin: i64) -> [T; MAX_ORDER + 1]
where
    T: Num + Clone + FromPrimitive,
{
    let mut m: [T; MAX_ORDER + 1] = std::array::from_fn(|_| T::zero());
    for (k, w) in weights.iter().enumerate() {
        let ell = T::from_i64(min_offset + k as i64 - origin).expect("offset representable");
        let mut pow = T::one();
        for mk in m.iter_mut() {
            *mk = mk.clone() + pow.clone() * w.clone();
            pow = pow * ell.clone();
        }
    }
    m
}

/// Cumulants `κ₁..κ₅` (index 0 is unused and left at zero) of the normalized
/// moments `m_k / m_0`.
pub fn cumulants_from_moments<T>(m: &[T; MAX_ORDER + 1]) -> [T; MAX_ORDER + 1]
where
    T: Num + Clone + FromPrimitive,
{
    let mu: Vec<T> = m.iter().map(|x| x.clone() / m[0].clone()).collect();
    let mut kappa: [T; MAX_ORDER + 1] = std::array::from_fn(|_| T::zero());
    for n in 1..=MAX_ORDER {
        let mut acc = mu[n].clone();
        for k in 1..n {
            let b = T::from_u64(binomial(n as u64 - 1, k as u64 - 1)).expect("small binomial");
            acc = acc - b * kappa[k].clone() * mu[n - k].clone();
        }
        kappa[n] = acc;
    }
    kappa
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(α, κ₂, c₃, c₄)` read off the cumulants.
pub fn expansion_from_cumulants<T>(kappa: &[T; MAX_ORDER + 1]) -> (T, T, T, T)
where
    T: Num + Clone + FromPrimitive,
{
    let six = T::from_u8(6).unwrap();
    let twenty_four = T::from_u8(24).unwrap();
    (
        kappa[1].clone(),
        kappa[2].clone(),
        kappa[3].clone() / six,
        T::zero() - kappa[4].clone() / twenty_four,
    )
}

/// Cumulants of a stencil given as `(min_offset, weights)`, taken about the
/// lattice point `origin` and translated back so `κ₁` is absolute.
pub fn stencil_cumulants<T>(min_offset: i64, weights: &[T], origin: i64) -> [T; MAX_ORDER + 1]
where
    T: Num + Clone + FromPrimitive,
{
    let m = raw_moments(min_offset, weights, origin);
    let mut kappa = cumulants_from_moments(&m);
    kappa[1] = kappa[1].clone() + T::from_i64(origin).unwrap();
    kappa
}
