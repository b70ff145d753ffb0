//! Real special functions: `erf`, `Γ` and the Airy function `Ai`.
//!
//! Airy evaluation uses three pieces:
//! * the Maclaurin series for `|x| ≤ 1`;
//! * the large-argument asymptotic expansions for `|x| ≥ 8.5`, truncated at
//!   the smallest term (error `≈ e^{−2ζ}`, `ζ = 2|x|^{3/2}/3`);
//! * in between, Taylor-series continuation of the Airy equation `y'' = xy`,
//!   started from `(Ai(0), Ai'(0))` on the oscillatory side and from the
//!   asymptotic values at `x = 8.5` on the decaying side. Stepping toward the
//!   origin on `ℝ⁺` keeps `Ai` the dominant solution, so `Bi` contamination
//!   decays instead of growing.

use crate::scalar::Real;

/// `Ai(0) = 3^{−2/3} / Γ(2/3)`.
pub const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004;
/// `Ai'(0) = −3^{−1/3} / Γ(1/3)`.
pub const AIP0: f64 = -0.258_819_403_792_806_798_405_183_560_189;

const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 8.5;
const MARCH_STEP: f64 = 0.5;
const ERF_SERIES_LIMIT: f64 = 2.5;

/// Error function, absolute accuracy ~1e-15 in double precision.
pub fn erf<T: Real>(x: T) -> T {
    let ax = x.abs();
    let v = if ax < T::lit(ERF_SERIES_LIMIT) {
        ax * erf_over_x(ax)
    } else {
        T::one() - erfc_continued_fraction(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    if x >= T::lit(ERF_SERIES_LIMIT) {
        erfc_continued_fraction(x)
    } else {
        T::one() - erf(x)
    }
}

/// `erf(x)/x`, finite at `x = 0` (value `2/√π`).
///
/// Uses `erf x = (2/√π) e^{−x²} Σ 2ᵏ x^{2k+1}/(2k+1)!!`, whose terms are all
/// positive; for large `|x|` falls back to `erf(x)/x`.
pub fn erf_over_x<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax >= T::lit(ERF_SERIES_LIMIT) {
        return erf(ax) / ax;
    }
    let x2 = ax * ax;
    let mut term = T::one();
    let mut sum = T::one();
    let mut k = 0;
    loop {
        k += 1;
        term = term * T::lit(2.0) * x2 / T::from_int(2 * k + 1);
        sum = sum + term;
        if term <= sum * T::epsilon() * T::lit(0.5) || k > 200 {
            break;
        }
    }
    T::lit(2.0) / T::PI().sqrt() * (-x2).exp() * sum
}

/// `erfc(x)` for `x ≥ 2.5` by the Laplace continued fraction, modified Lentz.
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() * T::lit(1e10);
    // erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for k in 1..500 {
        let a = T::from_int(k) * T::lit(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (T::PI().sqrt() * f)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function (Lanczos, `g = 7`), relative accuracy ~1e-15 on `ℝ⁺`.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection Γ(x)Γ(1−x) = π / sin(πx)
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_int(i as i64));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(z + half) * (-t).exp() * acc
}

/// `Ai(x)`.
pub fn airy_ai<T: Real>(x: T) -> T {
    airy_ai_and_derivative(x).0
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_ai_and_derivative<T: Real>(x: T) -> (T, T) {
    let ax = x.abs();
    if ax <= T::lit(SERIES_LIMIT) {
        airy_maclaurin(x)
    } else if ax >= T::lit(ASYMPTOTIC_LIMIT) {
        airy_asymptotic(x)
    } else if x < T::zero() {
        airy_march(T::zero(), (T::lit(AI0), T::lit(AIP0)), x)
    } else {
        let start = T::lit(ASYMPTOTIC_LIMIT);
        airy_march(start, airy_asymptotic(start), x)
    }
}

/// Maclaurin series of `Ai` about the origin.
pub(crate) fn airy_maclaurin<T: Real>(x: T) -> (T, T) {
    airy_taylor_step(T::zero(), T::lit(AI0), T::lit(AIP0), x)
}

/// Sums the Taylor series of the solution of `y'' = xy` with
/// `y(x0) = y`, `y'(x0) = yp` at `x0 + h`. Returns `(y, y')` there.
fn airy_taylor_step<T: Real>(x0: T, y: T, yp: T, h: T) -> (T, T) {
    // a_{k+2} = (x0 a_k + a_{k−1}) / ((k+1)(k+2))
    let (mut am1, mut a0, mut a1) = (T::zero(), y, yp);
    let mut hk = T::one();
    let mut value = a0;
    let mut deriv = a1;
    let mut k = 0_i64;
    let mut quiet = 0;
    loop {
        let a2 = (x0 * a0 + am1) / T::from_int((k + 1) * (k + 2));
        // term index k+2
        let t_val = a1 * hk * h;
        let t_der = a2 * T::from_int(k + 2) * hk * h;
        value = value + t_val;
        deriv = deriv + t_der;
        hk = hk * h;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        k += 1;
        let scale = value.abs().max(deriv.abs()).max(T::min_positive_value());
        if t_val.abs().max(t_der.abs()) <= scale * T::epsilon() * T::lit(0.01) {
            quiet += 1;
            // coefficients can vanish in patterns of three; demand a full cycle
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        if k > 400 {
            break;
        }
    }
    (value, deriv)
}

/// Continues `(y, y')` from `from` to `to` in steps of at most `MARCH_STEP`.
fn airy_march<T: Real>(from: T, start: (T, T), to: T) -> (T, T) {
    let step = T::lit(MARCH_STEP);
    let mut x = from;
    let (mut y, mut yp) = start;
    let dir = if to > from { T::one() } else { -T::one() };
    while (to - x) * dir > T::zero() {
        let h = if (to - x).abs() > step {
            step * dir
        } else {
            to - x
        };
        let (ny, nyp) = airy_taylor_step(x, y, yp, h);
        y = ny;
        yp = nyp;
        x = x + h;
    }
    (y, yp)
}

/// Large-`|x|` expansions (DLMF 9.7.5–9.7.10), truncated at the smallest term.
pub(crate) fn airy_asymptotic<T: Real>(x: T) -> (T, T) {
    let ax = x.abs();
    let zeta = T::lit(2.0) / T::lit(3.0) * ax * ax.sqrt();
    let sqrt_pi = T::PI().sqrt();
    let q = ax.sqrt().sqrt();
    // u_k, v_k coefficients evaluated on the fly
    let mut u = T::one();
    let mut terms_u = vec![T::one()];
    let mut terms_v = vec![T::one()];
    let mut inv = T::one();
    let mut last = T::infinity();
    for k in 1..200_i64 {
        u = u * T::from_int((6 * k - 5) * (6 * k - 3) * (6 * k - 1))
            / T::from_int((2 * k - 1) * 216 * k);
        let v = -u * T::from_int(6 * k + 1) / T::from_int(6 * k - 1);
        inv = inv / zeta;
        let size = (u * inv).abs();
        if size >= last || size < T::epsilon() * T::lit(1e-3) {
            break;
        }
        last = size;
        terms_u.push(u * inv);
        terms_v.push(v * inv);
    }
    if x > T::zero() {
        let alt = |t: &[T]| {
            t.iter()
                .enumerate()
                .rev()
                .fold(T::zero(), |acc, (k, &c)| if k % 2 == 0 { acc + c } else { acc - c })
        };
        let e = (-zeta).exp();
        let ai = e / (T::lit(2.0) * sqrt_pi * q) * alt(&terms_u);
        let aip = -q * e / (T::lit(2.0) * sqrt_pi) * alt(&terms_v);
        (ai, aip)
    } else {
        // even and odd parts with alternating signs inside each
        let split = |t: &[T]| {
            let mut even = T::zero();
            let mut odd = T::zero();
            for (k, &c) in t.iter().enumerate().rev() {
                let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
                if k % 2 == 0 {
                    even = even + sign * c;
                } else {
                    odd = odd + sign * c;
                }
            }
            (even, odd)
        };
        let phase = zeta - T::FRAC_PI_4();
        let (c, s) = (phase.cos(), phase.sin());
        let (pu, qu) = split(&terms_u);
        let (pv, qv) = split(&terms_v);
        let ai = (c * pu + s * qu) / (sqrt_pi * q);
        let aip = q / sqrt_pi * (s * pv - c * qv);
        (ai, aip)
    }
}
