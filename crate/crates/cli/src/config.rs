use clap::{Args, ValueEnum};
use dispersive_green::{
    AnalysisOptions, Complex64, Error, GreenMethod, SpectralOptions, Stencil64,
};
use serde::Serialize;

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Lw,
    Bw,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Direct,
    Spectral,
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    /// Built-in scheme, or `custom` together with --custom.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeName>,
    /// Courant number a·Δt/Δx.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Coefficients as `offset:re[:im]`, comma separated, e.g. `-1:0.25,0:0.5,1:0.25`.
    #[arg(long, allow_hyphen_values = true)]
    pub custom: Option<String>,
    /// Exit 3 unless the stencil satisfies every standing assumption.
    #[arg(long)]
    pub require_admissible: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Exit 5 when the computed checks fail.
    #[arg(long)]
    pub strict: bool,
    /// Green's function method; direct up to n = 4096 and spectral above by default.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CustomCoefficient {
    pub offset: i64,
    pub re: f64,
    pub im: f64,
}

/// Resolved, serializable description of a run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub scheme: SchemeName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom_coefficients: Option<Vec<CustomCoefficient>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn new(command: &'static str, scheme: &SchemeArgs) -> Result<Self, Failure> {
        let custom = scheme.custom.as_deref().map(parse_custom).transpose()?;
        let name = match (scheme.scheme, &custom) {
            (Some(SchemeName::Custom) | None, Some(_)) => SchemeName::Custom,
            (Some(SchemeName::Custom), None) => {
                return Err(Failure::invalid("--scheme custom requires --custom"))
            }
            (Some(_), Some(_)) => {
                return Err(Failure::invalid("--custom cannot be combined with --scheme lw|bw"))
            }
            (Some(s), None) => s,
            (None, None) => return Err(Failure::invalid("one of --scheme or --custom is required")),
        };
        if name == SchemeName::Custom && scheme.lambda.is_some() {
            return Err(Failure::invalid("--lambda does not apply to custom coefficients"));
        }
        if name != SchemeName::Custom && scheme.lambda.is_none() {
            return Err(Failure::invalid("--lambda is required for --scheme lw|bw"));
        }
        Ok(Self {
            command,
            scheme: name,
            lambda: scheme.lambda,
            custom_coefficients: custom,
            n: None,
            n_list: None,
            method: None,
            dx: None,
            t: None,
            half_width: None,
            tolerance: None,
        })
    }

    pub fn stencil(&self) -> Result<Stencil64, Failure> {
        let s = match (self.scheme, self.lambda) {
            (SchemeName::Lw, Some(l)) => Stencil64::lax_wendroff(l),
            (SchemeName::Bw, Some(l)) => Stencil64::beam_warming(l),
            _ => {
                let pairs: Vec<(i64, Complex64)> = self
                    .custom_coefficients
                    .iter()
                    .flatten()
                    .map(|c| (c.offset, Complex64::new(c.re, c.im)))
                    .collect();
                Stencil64::from_pairs(&pairs, Some("custom".into()))
            }
        };
        s.map_err(Failure::from)
    }

    /// `# key=value ...` line written ahead of CSV data.
    pub fn header_line(&self) -> String {
        let json = serde_json::to_value(self).expect("config serializes");
        let mut parts = vec![format!("dgreen {}", env!("CARGO_PKG_VERSION"))];
        if let serde_json::Value::Object(map) = json {
            for (k, v) in map {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                parts.push(format!("{k}={v}"));
            }
        }
        format!("# {}\n", parts.join(" "))
    }
}

pub fn parse_custom(text: &str) -> Result<Vec<CustomCoefficient>, Failure> {
    let bad = |item: &str| Failure::invalid(format!("malformed coefficient `{item}`; expected offset:re[:im]"));
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let fields: Vec<&str> = item.split(':').collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(bad(item));
            }
            let offset = fields[0].trim().parse::<i64>().map_err(|_| bad(item))?;
            let re = fields[1].trim().parse::<f64>().map_err(|_| bad(item))?;
            let im = match fields.get(2) {
                Some(f) => f.trim().parse::<f64>().map_err(|_| bad(item))?,
                None => 0.0,
            };
            Ok(CustomCoefficient { offset, re, im })
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(Failure::invalid("--custom lists no coefficients"))
            } else {
                Ok(v)
            }
        })
}

pub fn parse_n_list(text: &str) -> Result<Vec<u64>, Failure> {
    let list = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.fract() == 0.0 && *v >= 1.0 && *v <= 9.0e15)
                .map(|v| v as u64)
                .ok_or_else(|| Failure::invalid(format!("`{s}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() || list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::invalid("--n-list must be a nonempty increasing list"));
    }
    Ok(list)
}

pub fn spectral_options() -> Result<SpectralOptions, Failure> {
    SpectralOptions::from_env().map_err(|e| match e {
        Error::InvalidParameter { .. } => Failure::invalid(e.to_string()),
        other => Failure::from(other),
    })
}

pub fn green_method(method: Option<MethodArg>, n: u64, opts: &AnalysisOptions) -> GreenMethod {
    match method {
        Some(MethodArg::Direct) => GreenMethod::Direct,
        Some(MethodArg::Spectral) => GreenMethod::Spectral,
        None => opts.method_for(n),
    }
}

pub fn analysis_options(method: Option<MethodArg>) -> Result<AnalysisOptions, Failure> {
    let mut opts = AnalysisOptions { spectral: spectral_options()?, ..AnalysisOptions::default() };
    match method {
        Some(MethodArg::Direct) => opts.direct_max_n = u64::MAX,
        Some(MethodArg::Spectral) => opts.direct_max_n = 0,
        None => {}
    }
    Ok(opts)
}
