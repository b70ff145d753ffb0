use std::path::Path;

use dispersive_green::{
    approx_g, approx_h, assumption_audit, bound_report, bv_bounds, corollary1_report, evolve,
    green, growth_constant, growth_series, sample_step, ApproxParams64, AssumptionAudit64,
    BVReport64, BoundReport64, BoundSide, C3Sign, Corollary1Report, GreenMethod, GrowthReport64,
    Stencil64,
};
use serde::Serialize;

use crate::config::{analysis_options, green_method, Format, OutputArgs, RunConfig};
use crate::failure::{Failure, EXIT_INADMISSIBLE, EXIT_STRICT};
use crate::output::{emit, json, num, opt_num, Csv};

pub const DEFAULT_GROWTH_TOLERANCE: f64 = 0.10;

pub struct Run {
    pub config: RunConfig,
    pub output: OutputArgs,
    pub require_admissible: bool,
}

impl Run {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.output.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(Failure::invalid(format!(
                "{} does not support --format {}",
                self.config.command,
                format!("{f:?}").to_lowercase()
            )));
        }
        Ok(f)
    }

    fn out(&self) -> Option<&Path> {
        self.output.out.as_deref()
    }

    fn stencil(&self) -> Result<(Stencil64, AssumptionAudit64), Failure> {
        let s = self.config.stencil()?;
        let audit = assumption_audit(&s);
        Ok((s, audit))
    }

    fn checked_stencil(&self) -> Result<(Stencil64, AssumptionAudit64), Failure> {
        let (s, audit) = self.stencil()?;
        if self.require_admissible && !audit.admissible {
            return Err(inadmissible(&audit));
        }
        Ok((s, audit))
    }

    fn strict(&self, passed: bool, what: &str) -> Result<(), Failure> {
        if self.output.strict && !passed {
            return Err(Failure::new(EXIT_STRICT, format!("{what} failed")));
        }
        Ok(())
    }
}

fn inadmissible(audit: &AssumptionAudit64) -> Failure {
    Failure::new(
        EXIT_INADMISSIBLE,
        format!("stencil is not admissible: {}", audit.violations.join("; ")),
    )
}

#[derive(Serialize)]
struct Coefficient {
    offset: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffsReport {
    label: Option<String>,
    coefficients: Vec<Coefficient>,
    alpha: f64,
    kappa2: f64,
    c3: f64,
    c4: f64,
    residual5: f64,
    imag_residual: f64,
    sums_to_one: bool,
    dissipative: bool,
    min_margin: f64,
    admissible: bool,
    violations: Vec<String>,
    growth_constant: Option<f64>,
}

pub fn coeffs(run: &Run) -> Result<(), Failure> {
    let format = run.format(Format::Text, &[Format::Text, Format::Json])?;
    let (s, audit) = run.stencil()?;
    let e = audit.expansion;
    let report = CoeffsReport {
        label: s.label().map(str::to_owned),
        coefficients: s
            .iter()
            .map(|(offset, c)| Coefficient { offset, re: c.re, im: c.im })
            .collect(),
        alpha: e.alpha,
        kappa2: e.kappa2,
        c3: e.c3,
        c4: e.c4,
        residual5: e.residual5,
        imag_residual: e.imag_residual,
        sums_to_one: audit.sums_to_one,
        dissipative: audit.dissipative,
        min_margin: audit.min_margin,
        admissible: audit.admissible,
        violations: audit.violations.clone(),
        growth_constant: audit
            .admissible
            .then(|| growth_constant(e.c3.abs(), e.c4).ok())
            .flatten(),
    };
    let text = match format {
        Format::Json => json(&run.config, &report),
        _ => coeffs_text(&report),
    };
    emit(run.out(), &text)?;
    if run.require_admissible && !audit.admissible {
        return Err(inadmissible(&audit));
    }
    Ok(())
}

fn coeffs_text(r: &CoeffsReport) -> String {
    let mut rows: Vec<(String, String)> = vec![(
        "stencil".into(),
        r.label.clone().unwrap_or_else(|| "unnamed".into()),
    )];
    for c in &r.coefficients {
        let v = if c.im == 0.0 {
            num(c.re)
        } else {
            format!("{} {}i", num(c.re), num(c.im))
        };
        rows.push((format!("a[{}]", c.offset), v));
    }
    for (k, v) in [
        ("alpha", r.alpha),
        ("kappa2", r.kappa2),
        ("c3", r.c3),
        ("c4", r.c4),
        ("residual5", r.residual5),
        ("imag_residual", r.imag_residual),
        ("min_margin", r.min_margin),
    ] {
        rows.push((k.into(), num(v)));
    }
    if let Some(ell) = r.growth_constant {
        rows.push(("growth_constant".into(), num(ell)));
    }
    let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
    rows.push(("sums_to_one".into(), yes(r.sums_to_one)));
    rows.push(("dissipative".into(), yes(r.dissipative)));
    rows.push(("admissible".into(), yes(r.admissible)));
    for v in &r.violations {
        rows.push(("violation".into(), v.clone()));
    }
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

#[derive(Serialize)]
struct GreenRow {
    j: i64,
    re: f64,
    im: f64,
    abs: f64,
    approx_g: Option<f64>,
    approx_h: Option<f64>,
}

#[derive(Serialize)]
struct GreenReport {
    n: u64,
    method: GreenMethod,
    rows: Vec<GreenRow>,
}

pub fn green_cmd(run: &Run, n: u64) -> Result<(), Failure> {
    let format = run.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let (s, audit) = run.checked_stencil()?;
    let opts = analysis_options(run.config.method)?;
    let method = green_method(run.config.method, n, &opts);
    let g = green(&s, n, method, &opts.spectral)?;
    let params = audit
        .admissible
        .then(|| ApproxParams64::from_expansion(&audit.expansion).ok())
        .flatten();
    let rows: Vec<GreenRow> = g
        .iter()
        .map(|(j, v)| GreenRow {
            j,
            re: v.re,
            im: v.im,
            abs: v.norm(),
            approx_g: params.as_ref().map(|p| approx_g(p, n, j)),
            approx_h: params
                .as_ref()
                .filter(|p| p.c3_sign == C3Sign::Positive)
                .and_then(|p| approx_h(p, n, j).ok()),
        })
        .collect();
    let text = match format {
        Format::Json => json(&run.config, &GreenReport { n, method, rows }),
        _ => {
            let mut csv = Csv::new(&run.config, &["j", "re", "im", "abs", "approx_G", "approx_H"]);
            for r in &rows {
                csv.row(&[
                    r.j.to_string(),
                    num(r.re),
                    num(r.im),
                    num(r.abs),
                    opt_num(r.approx_g),
                    opt_num(r.approx_h),
                ]);
            }
            csv.finish()
        }
    };
    emit(run.out(), &text)
}

#[derive(Serialize)]
struct EvolveRow {
    x: f64,
    u0: f64,
    un: f64,
}

#[derive(Serialize)]
struct EvolveReport {
    n: u64,
    dt: f64,
    rows: Vec<EvolveRow>,
}

/// Number of steps reaching `t`, rounding up.
pub fn step_count(t: f64, dt: f64) -> u64 {
    (t / dt - 1e-9).ceil().max(0.0) as u64
}

pub fn evolve_cmd(run: &Run, dx: f64, t: f64, half_width: f64) -> Result<(), Failure> {
    let format = run.format(Format::Csv, &[Format::Csv, Format::Json])?;
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Failure::invalid("--dx must be positive"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Failure::invalid("--t must be nonnegative"));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Failure::invalid("--half-width must be positive"));
    }
    let (s, audit) = run.checked_stencil()?;
    // a = 1, so Δt = λΔx; for custom stencils λ is the advection speed α
    let lambda = run.config.lambda.unwrap_or(audit.expansion.alpha);
    if !(lambda > 0.0) {
        return Err(Failure::invalid("the scheme must advect to the right (lambda > 0)"));
    }
    let dt = lambda * dx;
    let n = step_count(t, dt);
    let lo = (-half_width / dx).floor() as i64 - 1;
    let hi = (half_width / dx).ceil() as i64;
    let u0 = sample_step(dx, half_width, lo..=hi)?;
    let un = evolve(&s, &u0, n);
    let rows: Vec<EvolveRow> = un
        .iter()
        .map(|(j, v)| EvolveRow {
            x: (j as f64 + 0.5) * dx,
            u0: u0.get(j).re,
            un: v.re,
        })
        .collect();
    let text = match format {
        Format::Json => json(&run.config, &EvolveReport { n, dt, rows }),
        _ => {
            let mut csv = Csv::new(&run.config, &["x", "u0", "un"]);
            for r in &rows {
                csv.row(&[num(r.x), num(r.u0), num(r.un)]);
            }
            csv.finish()
        }
    };
    emit(run.out(), &text)
}

#[derive(Serialize)]
struct GrowthOutput<'a> {
    #[serde(flatten)]
    growth: &'a GrowthReport64,
    tolerance: f64,
    passed: bool,
}

pub fn growth_cmd(run: &Run, n_list: &[u64], tolerance: f64) -> Result<(), Failure> {
    let format = run.format(Format::Json, &[Format::Csv, Format::Json])?;
    if !(tolerance > 0.0) {
        return Err(Failure::invalid("--tolerance must be positive"));
    }
    let (s, _) = run.checked_stencil()?;
    let opts = analysis_options(run.config.method)?;
    let r = growth_series(&s, n_list, &opts)?;
    let passed = r.errors_decreasing && r.final_rel_error.is_some_and(|e| e <= tolerance);
    let text = match format {
        Format::Json => json(&run.config, &GrowthOutput { growth: &r, tolerance, passed }),
        _ => {
            let mut csv = Csv::new(&run.config, &["n", "l1", "ratio", "ell"]);
            for ((n, l1), ratio) in r.n_values.iter().zip(&r.l1_values).zip(&r.ratios) {
                csv.row(&[n.to_string(), num(*l1), num(*ratio), opt_num(r.ell_target)]);
            }
            csv.finish()
        }
    };
    emit(run.out(), &text)?;
    run.strict(passed, "growth check")
}

#[derive(Serialize)]
struct BoundsOutput {
    fast_side: BoundReport64,
    oscillatory_side: BoundReport64,
    summability: Corollary1Report<f64>,
    stable: bool,
}

pub fn bounds_cmd(run: &Run, n_list: &[u64]) -> Result<(), Failure> {
    run.format(Format::Json, &[Format::Json])?;
    let (s, audit) = run.stencil()?;
    if !audit.admissible {
        return Err(inadmissible(&audit));
    }
    let opts = analysis_options(run.config.method)?;
    let fast_side = bound_report(&s, n_list, BoundSide::RightTail, &opts)?;
    let oscillatory_side = bound_report(&s, n_list, BoundSide::LeftDifference, &opts)?;
    let summability = corollary1_report(&s, n_list, &opts)?;
    let stable = fast_side.stable
        && oscillatory_side.stable
        && summability.right_stable
        && summability.left_stable;
    let report = BoundsOutput { fast_side, oscillatory_side, summability, stable };
    emit(run.out(), &json(&run.config, &report))?;
    run.strict(stable, "uniform bound check")
}

pub fn bv_cmd(run: &Run, n_list: &[u64]) -> Result<(), Failure> {
    run.format(Format::Json, &[Format::Json])?;
    let (s, audit) = run.stencil()?;
    if !audit.admissible {
        return Err(inadmissible(&audit));
    }
    let opts = analysis_options(run.config.method)?;
    let r: BVReport64 = bv_bounds(&s, n_list, &opts)?;
    emit(run.out(), &json(&run.config, &r))?;
    run.strict(r.stable && r.sup_overall.is_finite(), "bounded-variation check")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_counts() {
        assert_eq!(step_count(0.0, 0.1), 0);
        assert_eq!(step_count(2.0, 0.75 * 0.005), 534);
        // exact multiples do not take an extra step
        assert_eq!(step_count(1.0, 0.25), 4);
        assert_eq!(step_count(0.3, 0.1), 3);
    }

    #[test]
    fn spectral_options_default_without_env() {
        if std::env::var_os(dispersive_green::green::MEMORY_BUDGET_ENV).is_none() {
            assert!(crate::config::spectral_options().is_ok());
        }
    }
}
