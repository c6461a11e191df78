//! Scenario configuration: defaults, JSON config file, and flag overrides,
//! in that precedence order.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use redyn::dynamics::AmplitudePair;
use redyn::C64;

/// Largest supported joint dimension `d_A * d_B`.
pub const MAX_JOINT_DIM: usize = 64;

/// Everything a scenario run needs, fully resolved and validated.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub alpha: C64,
    pub beta: C64,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub dims: (usize, usize),
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn amps(&self) -> AmplitudePair {
        AmplitudePair::new(self.alpha, self.beta)
            .expect("normalization validated at resolution")
    }

    /// The `steps + 1` evenly spaced grid points over `[t_start, t_end]`.
    pub fn time_grid(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        (0..=self.steps)
            .map(|k| self.t_start + span * k as f64 / self.steps as f64)
            .collect()
    }
}

/// Unresolved values as they arrive from flags; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub beta_re: Option<f64>,
    pub beta_im: Option<f64>,
    pub t_start: Option<String>,
    pub t_end: Option<String>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub dims: Option<String>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

/// JSON config file schema; every field optional, same names as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
    beta_re: Option<f64>,
    beta_im: Option<f64>,
    t_start: Option<TimeValue>,
    t_end: Option<TimeValue>,
    steps: Option<usize>,
    seed: Option<u64>,
    trials: Option<usize>,
    tol: Option<f64>,
    dims: Option<String>,
    out: Option<PathBuf>,
}

/// Time fields accept plain numbers or pi expressions ("pi/2", "3pi/4").
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TimeValue {
    Number(f64),
    Expression(String),
}

impl TimeValue {
    fn resolve(&self) -> Result<f64, String> {
        match self {
            TimeValue::Number(x) => Ok(*x),
            TimeValue::Expression(s) => parse_time(s),
        }
    }
}

/// Parse a time literal: a float, or `[coef][*]pi[/divisor]`.
///
/// Accepted pi forms include `pi`, `-pi`, `2pi`, `2*pi`, `pi/2`, `3pi/4`,
/// `0.5pi`. The token keeps quarter-period times exact instead of forcing
/// callers to paste truncated decimals.
pub fn parse_time(s: &str) -> Result<f64, String> {
    let trimmed = s.trim();
    if let Ok(x) = trimmed.parse::<f64>() {
        if x.is_finite() {
            return Ok(x);
        }
        return Err(format!("non-finite time value `{trimmed}`"));
    }
    let lower = trimmed.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return Err(format!("cannot parse time value `{trimmed}`"));
    };
    let (prefix, rest) = lower.split_at(pos);
    let suffix = &rest[2..];

    let coef_str = prefix.strip_suffix('*').unwrap_or(prefix);
    let coef = match coef_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("bad coefficient `{other}` in `{trimmed}`"))?,
    };
    let divisor = match suffix.strip_prefix('/') {
        None if suffix.is_empty() => 1.0,
        None => return Err(format!("trailing `{suffix}` in `{trimmed}`")),
        Some(d) => {
            let v = d
                .parse::<f64>()
                .map_err(|_| format!("bad divisor `{d}` in `{trimmed}`"))?;
            if v == 0.0 {
                return Err(format!("zero divisor in `{trimmed}`"));
            }
            v
        }
    };
    Ok(coef * std::f64::consts::PI / divisor)
}

/// Parse subsystem dimensions given as `dAxdB`, e.g. `2x2` or `2x3`.
pub fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let lower = s.trim().to_ascii_lowercase();
    let mut parts = lower.splitn(2, 'x');
    let a = parts
        .next()
        .and_then(|p| p.parse::<usize>().ok())
        .ok_or_else(|| format!("cannot parse dims `{s}`; expected e.g. 2x2"))?;
    let b = parts
        .next()
        .and_then(|p| p.parse::<usize>().ok())
        .ok_or_else(|| format!("cannot parse dims `{s}`; expected e.g. 2x2"))?;
    Ok((a, b))
}

/// Tolerance for the `|alpha|^2 + |beta|^2 = 1` check; pairs further out are
/// rejected rather than silently renormalized.
pub const AMP_NORM_TOL: f64 = 1e-9;

pub fn resolve(overrides: &Overrides) -> Result<ScenarioConfig, String> {
    let file = match &overrides.config {
        Some(path) => load_config_file(path)?,
        None => ConfigFile::default(),
    };

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let alpha_re = overrides.alpha_re.or(file.alpha_re).unwrap_or(s);
    let alpha_im = overrides.alpha_im.or(file.alpha_im).unwrap_or(0.0);
    let beta_re = overrides.beta_re.or(file.beta_re).unwrap_or(s);
    let beta_im = overrides.beta_im.or(file.beta_im).unwrap_or(0.0);

    let t_start = match (&overrides.t_start, &file.t_start) {
        (Some(s), _) => parse_time(s)?,
        (None, Some(v)) => v.resolve()?,
        (None, None) => 0.0,
    };
    let t_end = match (&overrides.t_end, &file.t_end) {
        (Some(s), _) => parse_time(s)?,
        (None, Some(v)) => v.resolve()?,
        (None, None) => 2.0 * std::f64::consts::PI,
    };
    let steps = overrides.steps.or(file.steps).unwrap_or(100);
    let seed = overrides.seed.or(file.seed).unwrap_or(42);
    let trials = overrides.trials.or(file.trials).unwrap_or(1000);
    let tol = overrides.tol.or(file.tol).unwrap_or(1e-10);
    let dims = match (&overrides.dims, &file.dims) {
        (Some(s), _) => parse_dims(s)?,
        (None, Some(s)) => parse_dims(s)?,
        (None, None) => (2, 2),
    };
    let out = overrides.out.clone().or(file.out);

    let config = ScenarioConfig {
        alpha: C64::new(alpha_re, alpha_im),
        beta: C64::new(beta_re, beta_im),
        t_start,
        t_end,
        steps,
        seed,
        trials,
        tol,
        dims,
        out,
    };
    validate(&config)?;
    Ok(config)
}

fn load_config_file(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("cannot parse config file {}: {e}", path.display()))
}

fn validate(cfg: &ScenarioConfig) -> Result<(), String> {
    let norm = cfg.alpha.norm_sqr() + cfg.beta.norm_sqr();
    if (norm - 1.0).abs() > AMP_NORM_TOL {
        return Err(format!(
            "amplitudes not normalized: |alpha|^2 + |beta|^2 = {norm} \
             (deviation above {AMP_NORM_TOL:.0e} is rejected, not renormalized)"
        ));
    }
    if cfg.steps < 1 {
        return Err("steps must be >= 1".into());
    }
    if !cfg.t_start.is_finite() || !cfg.t_end.is_finite() {
        return Err("time bounds must be finite".into());
    }
    if cfg.t_end < cfg.t_start {
        return Err(format!(
            "t_end ({}) must be >= t_start ({})",
            cfg.t_end, cfg.t_start
        ));
    }
    if !(cfg.tol > 0.0) {
        return Err("tol must be > 0".into());
    }
    if cfg.trials < 1 {
        return Err("trials must be >= 1".into());
    }
    let (da, db) = cfg.dims;
    if da < 2 || db < 2 {
        return Err(format!("dims must both be >= 2, got {da}x{db}"));
    }
    if da * db > MAX_JOINT_DIM {
        return Err(format!(
            "joint dimension {} exceeds the supported envelope {MAX_JOINT_DIM}",
            da * db
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parse_time_plain_and_pi_forms() {
        assert_eq!(parse_time("1.5").unwrap(), 1.5);
        assert_eq!(parse_time("pi").unwrap(), PI);
        assert_eq!(parse_time("PI/2").unwrap(), PI / 2.0);
        assert_eq!(parse_time("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_time("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_time("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_time("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_time("0.5pi").unwrap(), 0.5 * PI);
        assert!(parse_time("two pies").is_err());
        assert!(parse_time("pi/0").is_err());
        assert!(parse_time("nan").is_err());
    }

    #[test]
    fn parse_dims_forms() {
        assert_eq!(parse_dims("2x2").unwrap(), (2, 2));
        assert_eq!(parse_dims("2X3").unwrap(), (2, 3));
        assert!(parse_dims("2").is_err());
        assert!(parse_dims("axb").is_err());
    }

    #[test]
    fn defaults_resolve_to_balanced_pair() {
        let cfg = resolve(&Overrides::default()).unwrap();
        assert!((cfg.alpha.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(cfg.steps, 100);
        assert_eq!(cfg.dims, (2, 2));
        assert_eq!(cfg.trials, 1000);
    }

    #[test]
    fn flags_reject_unnormalized_amplitudes() {
        let overrides = Overrides {
            alpha_re: Some(1.0),
            beta_re: Some(1.0),
            ..Default::default()
        };
        assert!(resolve(&overrides).is_err());
    }

    #[test]
    fn trials_zero_is_a_config_error() {
        let overrides = Overrides {
            trials: Some(0),
            ..Default::default()
        };
        assert!(resolve(&overrides).is_err());
    }

    #[test]
    fn grid_is_inclusive_and_even() {
        let cfg = ScenarioConfig {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
            t_start: 0.0,
            t_end: 1.0,
            steps: 4,
            seed: 0,
            trials: 1,
            tol: 1e-10,
            dims: (2, 2),
            out: None,
        };
        let grid = cfg.time_grid();
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[4], 1.0);
        assert!((grid[2] - 0.5).abs() < 1e-15);
    }
}
