//! Laurent operators on `ℤ`, exact Green's functions `𝒢ⁿ = Lₐⁿ δ` and grid
//! functions with constant tails.
//!
//! Two independent routes to `𝒢ⁿ` are provided: iterated convolution
//! ([`green_direct`], `O(n²)`) and a single FFT of the sampled symbol raised to
//! the `n`-th power ([`green_spectral`], `O(N log N)`). The transform length is
//! at least the support length `n·span + 1`, so there is no wrap-around.

use std::ops::RangeInclusive;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stencil::Stencil;

/// Default cap on the working memory of [`green_spectral`].
pub const DEFAULT_MEMORY_BUDGET_MB: u64 = 2048;
pub const MEMORY_BUDGET_ENV: &str = "DG_MEMORY_BUDGET_MB";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenMethod {
    Direct,
    Spectral,
}

/// `𝒢ⁿ` on its support: `values[k]` is `𝒢ⁿ_{min_offset + k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenTable<T> {
    n: u64,
    min_offset: i64,
    values: Vec<Complex<T>>,
    method: GreenMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms<T> {
    pub l1: T,
    pub l2: T,
    pub linf: T,
    pub sum: Complex<T>,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> GreenTable<T> {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn min_offset(&self) -> i64 {
        self.min_offset
    }

    pub fn max_offset(&self) -> i64 {
        self.min_offset + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn method(&self) -> GreenMethod {
        self.method
    }

    /// `𝒢ⁿ_j`, zero outside the stored support.
    pub fn get(&self, j: i64) -> Complex<T> {
        let k = j - self.min_offset;
        if k < 0 || k >= self.values.len() as i64 {
            zero()
        } else {
            self.values[k as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.min_offset + k as i64, v))
    }

    pub fn norms(&self) -> Norms<T> {
        let mut l1 = T::zero();
        let mut l2 = T::zero();
        let mut linf = T::zero();
        let mut sum = zero();
        for v in &self.values {
            let a = v.norm();
            l1 = l1 + a;
            l2 = l2 + v.norm_sqr();
            linf = linf.max(a);
            sum = sum + v;
        }
        Norms { l1, l2: l2.sqrt(), linf, sum }
    }

    /// Running sums `Σ_{ℓ≤j} 𝒢ⁿ_ℓ` over the support, i.e. `(Lₐⁿ 𝐇)_j`.
    pub fn cumulative_sums(&self) -> Vec<Complex<T>> {
        self.values
            .iter()
            .scan(zero(), |acc: &mut Complex<T>, &v| {
                *acc = *acc + v;
                Some(*acc)
            })
            .collect()
    }

    /// `𝒢ᵐ ⋆ 𝒢ⁿ = 𝒢^{m+n}`.
    pub fn convolve(&self, other: &GreenTable<T>) -> GreenTable<T> {
        GreenTable {
            n: self.n + other.n,
            min_offset: self.min_offset + other.min_offset,
            values: convolve(&self.values, &other.values),
            method: GreenMethod::Direct,
        }
    }
}

fn convolve<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o = *o + x * y;
        }
    }
    out
}

/// A sequence on `ℤ` stored on a finite window with constant values beyond it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction<T> {
    pub min_index: i64,
    pub values: Vec<Complex<T>>,
    /// Cell width when the sequence samples a function on the line.
    pub dx: Option<T>,
    pub left_tail: Complex<T>,
    pub right_tail: Complex<T>,
}

impl<T: Real> GridFunction<T> {
    /// Finitely supported sequence (both tails zero).
    pub fn new(min_index: i64, values: Vec<Complex<T>>) -> Self {
        Self {
            min_index,
            values,
            dx: None,
            left_tail: zero(),
            right_tail: zero(),
        }
    }

    pub fn from_real(min_index: i64, values: &[T]) -> Self {
        Self::new(
            min_index,
            values.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        )
    }

    pub fn with_tails(mut self, left: Complex<T>, right: Complex<T>) -> Self {
        self.left_tail = left;
        self.right_tail = right;
        self
    }

    pub fn with_dx(mut self, dx: T) -> Self {
        self.dx = Some(dx);
        self
    }

    /// Discrete Dirac mass at 0.
    pub fn delta() -> Self {
        Self::from_real(0, &[T::one()])
    }

    /// Heaviside sequence `𝐇_j = 1` for `j ≥ 0`, `0` for `j < 0`.
    pub fn heaviside() -> Self {
        Self::from_real(0, &[T::one()]).with_tails(zero(), Complex::new(T::one(), T::zero()))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(0, vec![c]).with_tails(c, c)
    }

    pub fn max_index(&self) -> i64 {
        self.min_index + self.values.len() as i64 - 1
    }

    pub fn get(&self, j: i64) -> Complex<T> {
        if j < self.min_index {
            self.left_tail
        } else if j > self.max_index() {
            self.right_tail
        } else {
            self.values[(j - self.min_index) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.min_index + k as i64, v))
    }

    /// `sup_j |u_j|` over the whole line, tails included.
    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .fold(self.left_tail.norm().max(self.right_tail.norm()), |m, v| {
                m.max(v.norm())
            })
    }

    /// `Σ_j |u_{j+1} − u_j|` over the whole line.
    pub fn total_variation(&self) -> T {
        let mut prev = self.left_tail;
        let mut tv = T::zero();
        for &v in self.values.iter().chain(std::iter::once(&self.right_tail)) {
            tv = tv + (v - prev).norm();
            prev = v;
        }
        tv
    }
}

/// `(Lₐu)_j = Σ_ℓ aₗ u_{j−ℓ}`; the stored window widens by the stencil span
/// and the tails are mapped to `(Σ aₗ)·tail`.
pub fn apply<T: Real>(s: &Stencil<T>, u: &GridFunction<T>) -> GridFunction<T> {
    let c = s.coefficients();
    let span = c.len() - 1;
    let mut padded = Vec::with_capacity(u.values.len() + 2 * span);
    padded.extend(std::iter::repeat(u.left_tail).take(span));
    padded.extend_from_slice(&u.values);
    padded.extend(std::iter::repeat(u.right_tail).take(span));

    let out_len = u.values.len() + span;
    let values = (0..out_len)
        .map(|k| {
            c.iter()
                .enumerate()
                .fold(zero(), |acc, (i, &a)| acc + a * padded[k + span - i])
        })
        .collect();
    let total = s.sum();
    GridFunction {
        min_index: u.min_index + s.min_offset(),
        values,
        dx: u.dx,
        left_tail: total * u.left_tail,
        right_tail: total * u.right_tail,
    }
}

/// `Lₐⁿ u0`.
pub fn evolve<T: Real>(s: &Stencil<T>, u0: &GridFunction<T>, n: u64) -> GridFunction<T> {
    (0..n).fold(u0.clone(), |u, _| apply(s, &u))
}

/// Calls `visit(k, Lₐᵏ u0)` for every `k` in the increasing list `steps`.
pub fn evolve_snapshots<T: Real>(
    s: &Stencil<T>,
    u0: &GridFunction<T>,
    steps: &[u64],
    mut visit: impl FnMut(u64, &GridFunction<T>),
) {
    let mut u = u0.clone();
    let mut k = 0;
    for &target in steps {
        while k < target {
            u = apply(s, &u);
            k += 1;
        }
        visit(k, &u);
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", n, "must be a positive integer"));
    }
    Ok(())
}

/// `𝒢ⁿ` by iterated convolution of the stencil with itself.
pub fn green_direct<T: Real>(s: &Stencil<T>, n: u64) -> Result<GreenTable<T>> {
    check_n(n)?;
    let c = s.coefficients();
    let mut values = c.to_vec();
    for _ in 1..n {
        values = convolve(&values, c);
    }
    Ok(GreenTable {
        n,
        min_offset: s.min_offset() * n as i64,
        values,
        method: GreenMethod::Direct,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralOptions {
    pub memory_budget_bytes: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self::with_budget_mb(DEFAULT_MEMORY_BUDGET_MB)
    }
}

impl SpectralOptions {
    pub fn with_budget_mb(mb: u64) -> Self {
        Self {
            memory_budget_bytes: mb.saturating_mul(1 << 20),
        }
    }

    /// Reads the budget from `DG_MEMORY_BUDGET_MB`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MEMORY_BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .map(Self::with_budget_mb)
                .map_err(|_| Error::invalid("DG_MEMORY_BUDGET_MB", v, "not an integer")),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Smallest `m ≥ n` whose prime factors are all in `{2, 3, 5, 7}`.
pub fn fast_transform_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5, 7] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// `𝒢ⁿ_j = (1/2π) ∫ e^{−ijθ} F̂(θ)ⁿ dθ`, evaluated exactly by a discrete
/// transform whose length exceeds the support.
pub fn green_spectral<T: Real>(
    s: &Stencil<T>,
    n: u64,
    opts: &SpectralOptions,
) -> Result<GreenTable<T>> {
    check_n(n)?;
    let exponent = u32::try_from(n).map_err(|_| Error::invalid("n", n, "exceeds u32 range"))?;
    let support = s
        .span()
        .checked_mul(n)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::invalid("n", n, "support length overflows"))?;
    let len = fast_transform_len(support as usize);
    // signal buffer + in-place scratch + twiddles
    let required = 3 * len as u64 * std::mem::size_of::<Complex<T>>() as u64;
    if required > opts.memory_budget_bytes {
        return Err(Error::MemoryBudget {
            required,
            budget: opts.memory_budget_bytes,
        });
    }

    let mut planner = FftPlanner::<T>::new();
    let mut buf = vec![zero(); len];
    buf[..s.coefficients().len()].copy_from_slice(s.coefficients());
    // unnormalized inverse transform samples Σ_k a_{min+k} e^{+ikθ_m}
    planner.plan_fft_inverse(len).process(&mut buf);
    for v in buf.iter_mut() {
        *v = v.powu(exponent);
    }
    planner.plan_fft_forward(len).process(&mut buf);
    let scale = T::one() / T::from_int(len as i64);
    buf.truncate(support as usize);
    for v in buf.iter_mut() {
        *v = *v * scale;
    }
    Ok(GreenTable {
        n,
        min_offset: s.min_offset() * n as i64,
        values: buf,
        method: GreenMethod::Spectral,
    })
}

pub fn green<T: Real>(
    s: &Stencil<T>,
    n: u64,
    method: GreenMethod,
    opts: &SpectralOptions,
) -> Result<GreenTable<T>> {
    match method {
        GreenMethod::Direct => green_direct(s, n),
        GreenMethod::Spectral => green_spectral(s, n, opts),
    }
}

/// Average of the indicator of `[−half_width, half_width]` over `[a, b]`.
pub fn cell_average<T: Real>(a: T, b: T, half_width: T) -> T {
    let covered = (b.min(half_width) - a.max(-half_width)).max(T::zero());
    covered / (b - a)
}

/// Cell averages `fⱼ = (1/Δx) ∫_{jΔx}^{(j+1)Δx} u₀` of the step
/// `u₀ = 1_{[−h, h]}`, for `j` in `cells`; zero tails on both sides.
pub fn sample_step<T: Real>(
    dx: T,
    half_width: T,
    cells: RangeInclusive<i64>,
) -> Result<GridFunction<T>> {
    if !(dx > T::zero()) || !dx.is_finite() {
        return Err(Error::invalid("dx", dx, "must be positive"));
    }
    if !(half_width >= T::zero()) {
        return Err(Error::invalid("half_width", half_width, "must be nonnegative"));
    }
    let lo = *cells.start();
    let values: Vec<T> = cells
        .map(|j| {
            let a = T::from_int(j) * dx;
            cell_average(a, a + dx, half_width)
        })
        .collect();
    Ok(GridFunction::from_real(lo, &values).with_dx(dx))
}
