//! Empirical checks of the generalized-Gaussian envelopes, the one-sided
//! summability of `𝒢ⁿ` and `𝒢ⁿ − 𝔾ⁿ`, the `n^{1/8}` growth law of `‖𝒢ⁿ‖₁`
//! and the uniform bound of `Lₐⁿ` on data of bounded variation.
//!
//! Sides are expressed in the oriented offset `s = sign(c₃)·(j − αn)`: the
//! fast-decay side is `s ≥ 0`, the oscillatory side `s < 0`. For `c₃ > 0`
//! these are the right and left of the front `j = αn`; for `c₃ < 0` they swap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{approx_g, growth_constant, ApproxParams, C3Sign};
use crate::error::{Error, Result};
use crate::green::{
    evolve_snapshots, green, GreenMethod, GreenTable, GridFunction, SpectralOptions,
};
use crate::scalar::Real;
use crate::stencil::{assumption_audit, Stencil, SymbolExpansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Which of the two envelope bounds a report refers to. The names follow the
/// `c₃ > 0` picture; [`BoundReport::spatial_side`] gives the actual side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    /// `|𝒢ⁿⱼ|` on the fast-decay side.
    RightTail,
    /// `|𝒢ⁿⱼ − 𝔾ⁿⱼ|` on the oscillatory side.
    LeftDifference,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    /// Largest `n` computed by direct convolution; spectral above.
    pub direct_max_n: u64,
    pub spectral: SpectralOptions,
    /// `c_used = safety_factor × fitted decay rate`.
    pub safety_factor: f64,
    /// Residual magnitudes below `fit_threshold × max|𝒢ⁿ|` are left out of the fit.
    pub fit_threshold: f64,
    /// Entries of spectral tables below `spectral_floor × max|𝒢ⁿ|` are leakage.
    pub spectral_floor: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            direct_max_n: 4096,
            spectral: SpectralOptions::default(),
            safety_factor: 0.8,
            fit_threshold: 1e-6,
            spectral_floor: 1e-13,
        }
    }
}

impl AnalysisOptions {
    pub fn method_for(&self, n: u64) -> GreenMethod {
        if n <= self.direct_max_n {
            GreenMethod::Direct
        } else {
            GreenMethod::Spectral
        }
    }

    pub fn green<T: Real>(&self, s: &Stencil<T>, n: u64) -> Result<GreenTable<T>> {
        green(s, n, self.method_for(n), &self.spectral)
    }
}

/// `ω = (j − αn)/n`.
pub fn omega<T: Real>(j: i64, n: u64, alpha: T) -> T {
    let nf = T::from_int(n as i64);
    (T::from_int(j) - alpha * nf) / nf
}

fn params<T: Real>(e: &SymbolExpansion<T>) -> Result<ApproxParams<T>> {
    ApproxParams::from_expansion(e)
        .map_err(|_| Error::Inadmissible("c3 must be nonzero and c4 positive".into()))
}

fn leakage_floor<T: Real>(g: &GreenTable<T>, floor: f64) -> T {
    match g.method() {
        GreenMethod::Direct => T::zero(),
        GreenMethod::Spectral => T::lit(floor) * g.norms().linf,
    }
}

/// `(|s|/n^{1/3}, residual)` over the entries of the requested side.
fn side_residuals<T: Real>(
    g: &GreenTable<T>,
    p: &ApproxParams<T>,
    side: BoundSide,
    floor: T,
) -> Vec<(T, T)> {
    let n = g.n();
    let n13 = T::from_int(n as i64).cbrt();
    g.iter()
        .filter_map(|(j, v)| {
            let s = p.oriented_offset(n, j);
            let on_side = match side {
                BoundSide::RightTail => s >= T::zero(),
                BoundSide::LeftDifference => s < T::zero(),
            };
            let a = v.norm();
            if !on_side || a == T::zero() || a <= floor {
                return None;
            }
            let r = match side {
                BoundSide::RightTail => a,
                BoundSide::LeftDifference => (v - approx_g(p, n, j)).norm(),
            };
            Some((s.abs() / n13, r))
        })
        .collect()
}

/// `ln` of the envelope `n^{−1/3} min(1, x^{−p}) exp(−c x^{3/2})`.
fn log_envelope<T: Real>(n: u64, x: T, power: T, c: T) -> T {
    let mut v = -T::from_int(n as i64).ln() / T::lit(3.0) - c * x * x.sqrt();
    if x > T::one() {
        v = v - power * x.ln();
    }
    v
}

fn minimal_constant<T: Real>(
    g: &GreenTable<T>,
    e: &SymbolExpansion<T>,
    c_used: T,
    side: BoundSide,
    floor: f64,
) -> Result<T> {
    if !(c_used > T::zero()) {
        return Err(Error::invalid("c_used", c_used, "must be positive"));
    }
    let p = params(e)?;
    let power = match side {
        BoundSide::RightTail => T::lit(0.25),
        BoundSide::LeftDifference => T::one(),
    };
    let worst = side_residuals(g, &p, side, leakage_floor(g, floor))
        .into_iter()
        .filter(|&(_, r)| r > T::zero())
        .map(|(x, r)| r.ln() - log_envelope(g.n(), x, power, c_used))
        .fold(T::neg_infinity(), T::max);
    let c = worst.exp();
    if !c.is_finite() {
        return Err(Error::EnvelopeUnderflow {
            c_used: c_used.to_string(),
        });
    }
    Ok(c)
}

/// Smallest `C` with `|𝒢ⁿⱼ| ≤ C n^{−1/3} min(1, x^{−1/4}) e^{−c x^{3/2}}` on the
/// fast-decay side, `x = |j − αn|/n^{1/3}`. Ratios are taken in log space.
pub fn check_bound1<T: Real>(g: &GreenTable<T>, e: &SymbolExpansion<T>, c_used: T) -> Result<T> {
    minimal_constant(
        g,
        e,
        c_used,
        BoundSide::RightTail,
        AnalysisOptions::default().spectral_floor,
    )
}

/// Smallest `C` with `|𝒢ⁿⱼ − 𝔾ⁿⱼ| ≤ C n^{−1/3} min(1, x^{−1}) e^{−c x^{3/2}}` on
/// the oscillatory side.
pub fn check_bound2<T: Real>(g: &GreenTable<T>, e: &SymbolExpansion<T>, c_used: T) -> Result<T> {
    minimal_constant(
        g,
        e,
        c_used,
        BoundSide::LeftDifference,
        AnalysisOptions::default().spectral_floor,
    )
}

/// Least-squares slope of `−ln R(x)` against `x^{3/2}`, where `R` is the
/// outward running maximum of the side residual, restricted to `x ≥ 1` and
/// `R ≥ threshold·max|𝒢ⁿ|`.
pub fn fit_decay_rate<T: Real>(
    g: &GreenTable<T>,
    e: &SymbolExpansion<T>,
    side: BoundSide,
    threshold: f64,
) -> Result<T> {
    let p = params(e)?;
    let mut pts = side_residuals(g, &p, side, leakage_floor(g, 1e-13));
    pts.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let cutoff = T::lit(threshold) * g.norms().linf;
    let mut running = T::zero();
    let mut samples = Vec::new();
    // walk from the far tail toward the front
    for (x, r) in pts {
        running = running.max(r);
        if x >= T::one() && running >= cutoff && running > T::zero() {
            samples.push((x * x.sqrt(), -running.ln()));
        }
    }
    if samples.len() < 3 {
        return Err(Error::InsufficientData(samples.len()));
    }
    let m = T::from_int(samples.len() as i64);
    let (st, sy) = samples
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(t, y)| (a + t, b + y));
    let (mt, my) = (st / m, sy / m);
    let (cov, var) = samples.iter().fold((T::zero(), T::zero()), |(c, v), &(t, y)| {
        (c + (t - mt) * (y - my), v + (t - mt) * (t - mt))
    });
    let slope = cov / var;
    if !(slope > T::zero()) {
        return Err(Error::InsufficientData(samples.len()));
    }
    Ok(slope)
}

fn median<T: Real>(v: &[T]) -> T {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = s.len();
    if k == 0 {
        T::nan()
    } else if k % 2 == 1 {
        s[k / 2]
    } else {
        (s[k / 2 - 1] + s[k / 2]) / T::lit(2.0)
    }
}

fn check_increasing(n_values: &[u64]) -> Result<()> {
    if n_values.is_empty() || n_values[0] == 0 || n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "n_values",
            format!("{n_values:?}"),
            "must be a nonempty increasing list of positive integers",
        ));
    }
    Ok(())
}

fn admissible_expansion<T: Real>(s: &Stencil<T>) -> Result<SymbolExpansion<T>> {
    let audit = assumption_audit(s);
    if !audit.admissible {
        return Err(Error::Inadmissible(audit.violations.join("; ")));
    }
    Ok(audit.expansion)
}

fn tables<T: Real>(
    s: &Stencil<T>,
    n_values: &[u64],
    opts: &AnalysisOptions,
) -> Result<Vec<GreenTable<T>>> {
    n_values.par_iter().map(|&n| opts.green(s, n)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub side: BoundSide,
    /// Physical side of `j = αn` the bound is checked on.
    pub spatial_side: Side,
    /// `c₃ < 0`: the two bounds trade sides.
    pub sides_switched: bool,
    /// Raw regression slope at the largest `n`.
    pub decay_rate_fit: T,
    pub c_used: T,
    pub c_fitted_per_n: Vec<(u64, T)>,
    pub sup_c: T,
    pub median_c: T,
    /// `sup_c ≤ 2 × median_c`.
    pub stable: bool,
}

/// Fits the decay rate at the largest `n`, then the minimal constant for
/// every `n`.
pub fn bound_report<T: Real>(
    s: &Stencil<T>,
    n_values: &[u64],
    side: BoundSide,
    opts: &AnalysisOptions,
) -> Result<BoundReport<T>> {
    check_increasing(n_values)?;
    let e = admissible_expansion(s)?;
    let tabs = tables(s, n_values, opts)?;
    let fit = fit_decay_rate(tabs.last().unwrap(), &e, side, opts.fit_threshold)?;
    let c_used = T::lit(opts.safety_factor) * fit;
    let cs = tabs
        .par_iter()
        .map(|g| minimal_constant(g, &e, c_used, side, opts.spectral_floor).map(|c| (g.n(), c)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<T> = cs.iter().map(|p| p.1).collect();
    let sup_c = values.iter().copied().fold(T::zero(), T::max);
    let median_c = median(&values);
    let switched = !e.c3_is_positive();
    let spatial_side = match (side, switched) {
        (BoundSide::RightTail, false) | (BoundSide::LeftDifference, true) => Side::Right,
        _ => Side::Left,
    };
    Ok(BoundReport {
        side,
        spatial_side,
        sides_switched: switched,
        decay_rate_fit: fit,
        c_used,
        c_fitted_per_n: cs,
        sup_c,
        median_c,
        stable: sup_c <= T::lit(2.0) * median_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Sums<T> {
    pub n: u64,
    /// `Σ |𝒢ⁿⱼ|` over the fast-decay side.
    pub right_abs_sum: T,
    /// `Σ |𝒢ⁿⱼ − 𝔾ⁿⱼ|` over the oscillatory side.
    pub left_diff_abs_sum: T,
    /// `Σ |𝔾ⁿⱼ|` over the oscillatory side, restricted to the support.
    pub left_approx_abs_sum: T,
}

pub fn corollary1_sums<T: Real>(g: &GreenTable<T>, e: &SymbolExpansion<T>) -> Result<Corollary1Sums<T>> {
    let p = params(e)?;
    let n = g.n();
    let mut out = Corollary1Sums {
        n,
        right_abs_sum: T::zero(),
        left_diff_abs_sum: T::zero(),
        left_approx_abs_sum: T::zero(),
    };
    for (j, v) in g.iter() {
        if p.oriented_offset(n, j) >= T::zero() {
            out.right_abs_sum = out.right_abs_sum + v.norm();
        } else {
            let a = approx_g(&p, n, j);
            out.left_diff_abs_sum = out.left_diff_abs_sum + (v - a).norm();
            out.left_approx_abs_sum = out.left_approx_abs_sum + a.abs();
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Report<T> {
    pub sums: Vec<Corollary1Sums<T>>,
    /// `max ≤ 1.5 × median` for the fast-side sums.
    pub right_stable: bool,
    pub left_stable: bool,
}

pub fn corollary1_report<T: Real>(
    s: &Stencil<T>,
    n_values: &[u64],
    opts: &AnalysisOptions,
) -> Result<Corollary1Report<T>> {
    check_increasing(n_values)?;
    let e = admissible_expansion(s)?;
    let sums = tables(s, n_values, opts)?
        .par_iter()
        .map(|g| corollary1_sums(g, &e))
        .collect::<Result<Vec<_>>>()?;
    let stable = |v: Vec<T>| v.iter().copied().fold(T::zero(), T::max) <= T::lit(1.5) * median(&v);
    Ok(Corollary1Report {
        right_stable: stable(sums.iter().map(|s| s.right_abs_sum).collect()),
        left_stable: stable(sums.iter().map(|s| s.left_diff_abs_sum).collect()),
        sums,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport<T> {
    pub n_values: Vec<u64>,
    pub l1_values: Vec<T>,
    /// `‖𝒢ⁿ‖₁ / n^{1/8}`
    pub ratios: Vec<T>,
    /// `None` when the stencil is not admissible.
    pub ell_target: Option<T>,
    pub final_rel_error: Option<T>,
    /// `|ratio − ℓ|` strictly decreasing along `n_values`.
    pub errors_decreasing: bool,
    /// Least-squares slope of `ln ‖𝒢ⁿ‖₁` against `ln n`.
    pub loglog_slope: T,
    /// `c₃ < 0`: the reflected stencil was analysed.
    pub reflected: bool,
}

/// `‖𝒢ⁿ‖₁ / n^{1/8}` along `n_values`, compared with the limit `ℓ`.
pub fn growth_series<T: Real>(
    s: &Stencil<T>,
    n_values: &[u64],
    opts: &AnalysisOptions,
) -> Result<GrowthReport<T>> {
    check_increasing(n_values)?;
    let audit = assumption_audit(s);
    if !audit.sums_to_one {
        return Err(Error::NonConservative {
            sum: format!("{}", s.sum()),
        });
    }
    let e = audit.expansion;
    let reflected = e.c3 < T::zero();
    let stencil = if reflected { s.reflected() } else { s.clone() };
    let l1_values: Vec<T> = tables(&stencil, n_values, opts)?
        .iter()
        .map(|g| g.norms().l1)
        .collect();
    let eighth = T::lit(0.125);
    let ratios: Vec<T> = n_values
        .iter()
        .zip(&l1_values)
        .map(|(&n, &l1)| l1 / T::from_int(n as i64).powf(eighth))
        .collect();
    let ell_target = if audit.admissible {
        Some(growth_constant(e.c3.abs(), e.c4)?)
    } else {
        None
    };
    let errors: Option<Vec<T>> =
        ell_target.map(|ell| ratios.iter().map(|r| (*r - ell).abs()).collect());
    let errors_decreasing = errors
        .as_ref()
        .is_some_and(|err| err.windows(2).all(|w| w[1] < w[0]));
    let final_rel_error = errors
        .as_ref()
        .zip(ell_target)
        .map(|(err, ell)| *err.last().unwrap() / ell);
    Ok(GrowthReport {
        n_values: n_values.to_vec(),
        loglog_slope: loglog_slope(n_values, &l1_values),
        l1_values,
        ratios,
        ell_target,
        final_rel_error,
        errors_decreasing,
        reflected,
    })
}

fn loglog_slope<T: Real>(n_values: &[u64], values: &[T]) -> T {
    let pts: Vec<(T, T)> = n_values
        .iter()
        .zip(values)
        .map(|(&n, &v)| (T::from_int(n as i64).ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return T::nan();
    }
    let m = T::from_int(pts.len() as i64);
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / m;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / m;
    let (cov, var) = pts.iter().fold((T::zero(), T::zero()), |(c, v), p| {
        (c + (p.0 - mx) * (p.1 - my), v + (p.0 - mx) * (p.0 - mx))
    });
    cov / var
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BVReport<T> {
    pub n_values: Vec<u64>,
    /// `sup_j |Σ_{ℓ≤j} 𝒢ⁿ_ℓ|`
    pub sup_cumsum_per_n: Vec<T>,
    pub sup_overall: T,
    /// `‖Lₐⁿ 𝐇‖_∞` from evolving the Heaviside sequence.
    pub heaviside_linf_per_n: Vec<T>,
    /// `max ≤ 1.5 × median` of `sup_cumsum_per_n`.
    pub stable: bool,
}

pub fn bv_bounds<T: Real>(
    s: &Stencil<T>,
    n_values: &[u64],
    opts: &AnalysisOptions,
) -> Result<BVReport<T>> {
    check_increasing(n_values)?;
    admissible_expansion(s)?;
    let sup_cumsum_per_n: Vec<T> = tables(s, n_values, opts)?
        .par_iter()
        .map(|g| {
            g.cumulative_sums()
                .iter()
                .fold(T::zero(), |m, c| m.max(c.norm()))
        })
        .collect();
    let mut heaviside_linf_per_n = Vec::with_capacity(n_values.len());
    evolve_snapshots(s, &GridFunction::heaviside(), n_values, |_, u| {
        heaviside_linf_per_n.push(u.sup_norm())
    });
    let sup_overall = sup_cumsum_per_n.iter().copied().fold(T::zero(), T::max);
    Ok(BVReport {
        n_values: n_values.to_vec(),
        stable: sup_overall <= T::lit(1.5) * median(&sup_cumsum_per_n),
        sup_cumsum_per_n,
        sup_overall,
        heaviside_linf_per_n,
    })
}

/// `(max_n ‖Lₐⁿu‖_∞, Σ|u_{j+1} − u_j|)` for data vanishing at `−∞`.
pub fn bv_apply_bound<T: Real>(
    s: &Stencil<T>,
    u: &GridFunction<T>,
    n_values: &[u64],
) -> Result<(T, T)> {
    if u.left_tail.norm() != T::zero() {
        return Err(Error::NonzeroLeftTail(u.left_tail.to_string()));
    }
    check_increasing(n_values)?;
    let mut sup = T::zero();
    evolve_snapshots(s, u, n_values, |_, v| sup = sup.max(v.sup_norm()));
    Ok((sup, u.total_variation()))
}

/// Side of `j = αn` where the real part of `𝒢ⁿ` changes sign most often,
/// counting only entries above `1e-6 × max|𝒢ⁿ|`.
pub fn oscillation_side<T: Real>(g: &GreenTable<T>, e: &SymbolExpansion<T>) -> Result<Side> {
    let cutoff = T::lit(1e-6) * g.norms().linf;
    let n = g.n();
    let nf = T::from_int(n as i64);
    let mut count = [0usize; 2];
    let mut last: [Option<bool>; 2] = [None, None];
    for (j, v) in g.iter() {
        if v.norm() < cutoff || v.re == T::zero() {
            continue;
        }
        let k = usize::from(T::from_int(j) - e.alpha * nf >= T::zero());
        let positive = v.re > T::zero();
        if let Some(prev) = last[k] {
            if prev != positive {
                count[k] += 1;
            }
        }
        last[k] = Some(positive);
    }
    match count {
        [0, 0] => Err(Error::NoOscillations),
        [l, r] if l >= r => Ok(Side::Left),
        _ => Ok(Side::Right),
    }
}

/// Oscillatory side predicted by the sign of `c₃`.
pub fn expected_oscillation_side(sign: C3Sign) -> Side {
    match sign {
        C3Sign::Positive => Side::Left,
        C3Sign::Negative => Side::Right,
    }
}
