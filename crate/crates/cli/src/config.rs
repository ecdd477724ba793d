//! Run configuration: a flat `key=value` file merged with command-line flags.
//!
//! Blank lines and text after `#` are ignored. Flags override file entries.
//! Recognized keys are listed in [`KEYS`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ecp_core::protocol::{Detector, NoiseModel, Pipeline};
use ecp_core::{Complex64, SystemParams};
use serde::Serialize;

use crate::args::{CommandKind, Flags, Format};
use crate::error::CliError;

/// Seed used when none is given, so bare runs are reproducible.
pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_TRIALS: u64 = 10_000;
/// `(α, β)` inputs within this distance of unit norm are renormalized.
pub const RENORMALIZATION_TOLERANCE: f64 = 1e-3;

pub const KEYS: &[&str] = &[
    "omega_m",
    "delta",
    "g",
    "kappa",
    "coupling",
    "alpha",
    "beta",
    "p_p",
    "dark_rate",
    "window",
    "noise",
    "t",
    "gt",
    "trials",
    "seed",
    "out",
    "format",
    "exhaustive",
    "pipeline",
    "detector",
    "second_order",
    "ratios",
    "t_p_max",
    "t_p_step",
    "alpha_sq",
    "gt_list",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag(&'static str),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag(name) => write!(f, "--{name}"),
        }
    }
}

/// Unvalidated entries with where each came from.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    source: Option<PathBuf>,
    entries: BTreeMap<&'static str, (String, Origin)>,
}

fn known_key(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl RawConfig {
    pub fn parse(text: &str, source: Option<&Path>) -> Result<Self, CliError> {
        let mut raw = RawConfig {
            source: source.map(Path::to_path_buf),
            entries: BTreeMap::new(),
        };
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(raw.error(Origin::Line(n), "expected key=value"));
            };
            let key = key.trim();
            let Some(k) = known_key(key) else {
                return Err(raw.error(Origin::Line(n), &format!("unknown key '{key}'")));
            };
            if let Some((_, first)) = raw.entries.get(k) {
                return Err(raw.error(Origin::Line(n), &format!("duplicate key '{k}' (first on {first})")));
            }
            raw.entries.insert(k, (value.trim().to_string(), Origin::Line(n)));
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, Some(path))
    }

    pub fn set(&mut self, key: &'static str, value: impl Into<String>, origin: Origin) {
        self.entries.insert(key, (value.into(), origin));
    }

    fn error(&self, origin: Origin, msg: &str) -> CliError {
        match (origin, &self.source) {
            (Origin::Line(n), Some(p)) => CliError::Config(format!("{}:{n}: {msg}", p.display())),
            _ => CliError::Config(format!("{origin}: {msg}")),
        }
    }

    fn raw(&self, key: &str) -> Option<&(String, Origin)> {
        self.entries.get(key)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((v, origin)) => v
                .parse()
                .map(Some)
                .map_err(|e| self.error(*origin, &format!("{key}: cannot parse '{v}': {e}"))),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, origin)) => match v.to_ascii_lowercase().as_str() {
                "true" | "on" | "yes" | "1" => Ok(Some(true)),
                "false" | "off" | "no" | "0" => Ok(Some(false)),
                _ => Err(self.error(*origin, &format!("{key}: expected true or false, got '{v}'"))),
            },
        }
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, origin)) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| self.error(*origin, &format!("{key}: cannot parse '{v}': {e}"))),
        }
    }

    fn invalid(&self, key: &str, msg: &str) -> CliError {
        match self.raw(key) {
            Some((_, origin @ Origin::Line(_))) => self.error(*origin, &format!("{key}: {msg}")),
            Some((_, origin)) => self.error(*origin, msg),
            None => CliError::Config(format!("{key}: {msg}")),
        }
    }
}

/// How the `(α, β)` input was turned into a normalized pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeInput {
    /// `|α|² + |β|²` as given, before any completion or rescaling.
    pub norm_sq_given: f64,
    pub renormalized: bool,
    /// Which amplitude was filled in from the other, if any.
    pub completed: Option<&'static str>,
}

/// Validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: SystemParams,
    pub amplitudes: AmplitudeInput,
    pub gt: f64,
    /// Seconds; always `gt / g`.
    pub t: f64,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub exhaustive: bool,
    pub noise: NoiseModel,
    pub pipeline: Pipeline,
    pub detector: Option<Detector>,
    pub second_order: bool,
    pub ratios: Vec<f64>,
    pub t_p_max: f64,
    pub t_p_step: f64,
    pub alpha_sq: Vec<f64>,
    pub gt_list: Vec<f64>,
}

fn flag_overrides(raw: &mut RawConfig, flags: &Flags) {
    let num = |x: f64| format!("{x:?}");
    let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
    if let Some(v) = flags.seed {
        raw.set("seed", v.to_string(), Origin::Flag("seed"));
    }
    if let Some(v) = &flags.out {
        raw.set("out", v.to_string_lossy(), Origin::Flag("out"));
    }
    if let Some(v) = flags.format {
        let s = match v {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        raw.set("format", s, Origin::Flag("format"));
    }
    if flags.exhaustive {
        raw.set("exhaustive", "true", Origin::Flag("exhaustive"));
    }
    if let Some(v) = flags.trials {
        raw.set("trials", v.to_string(), Origin::Flag("trials"));
    }
    if let Some(v) = flags.gt {
        raw.set("gt", num(v), Origin::Flag("gt"));
    }
    if let Some(v) = flags.t {
        raw.set("t", num(v), Origin::Flag("t"));
    }
    if let Some(v) = &flags.alpha {
        raw.set("alpha", v.clone(), Origin::Flag("alpha"));
    }
    if let Some(v) = &flags.beta {
        raw.set("beta", v.clone(), Origin::Flag("beta"));
    }
    if let Some(v) = &flags.ratios {
        raw.set("ratios", list(v), Origin::Flag("ratios"));
    }
    if let Some(v) = flags.dark_rate {
        raw.set("dark_rate", num(v), Origin::Flag("dark-rate"));
    }
    if flags.noise {
        raw.set("noise", "true", Origin::Flag("noise"));
    }
    if let Some(v) = flags.window {
        raw.set("window", num(v), Origin::Flag("window"));
    }
    if let Some(v) = &flags.pipeline {
        raw.set("pipeline", v.clone(), Origin::Flag("pipeline"));
    }
    if let Some(v) = flags.p_p {
        raw.set("p_p", num(v), Origin::Flag("p-p"));
    }
    if let Some(v) = &flags.detector {
        raw.set("detector", v.clone(), Origin::Flag("detector"));
    }
    if flags.second_order {
        raw.set("second_order", "true", Origin::Flag("second-order"));
    }
    if let Some(v) = flags.t_p_max {
        raw.set("t_p_max", num(v), Origin::Flag("t-p-max"));
    }
    if let Some(v) = flags.t_p_step {
        raw.set("t_p_step", num(v), Origin::Flag("t-p-step"));
    }
    if let Some(v) = &flags.alpha_sq {
        raw.set("alpha_sq", list(v), Origin::Flag("alpha-sq"));
    }
    if let Some(v) = &flags.gt_list {
        raw.set("gt_list", list(v), Origin::Flag("gt-list"));
    }
}

/// Reads `flags.config` if given, applies the flags on top and validates.
pub fn parse_config(command: CommandKind, flags: &Flags) -> Result<RunConfig, CliError> {
    let mut raw = match &flags.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    flag_overrides(&mut raw, flags);
    resolve(command, &raw)
}

fn resolve_amplitudes(raw: &RawConfig) -> Result<(Complex64, Complex64, AmplitudeInput), CliError> {
    let parse = |key: &str| -> Result<Option<Complex64>, CliError> {
        let v: Option<Complex64> = raw.get(key)?;
        if let Some(z) = v {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(raw.invalid(key, "must be finite"));
            }
            if z.norm_sqr() > 1.0 + RENORMALIZATION_TOLERANCE {
                return Err(raw.invalid(key, &format!("|{key}| = {} exceeds 1", z.norm())));
            }
        }
        Ok(v)
    };
    let complete = |z: Complex64| Complex64::new((1.0 - z.norm_sqr()).max(0.0).sqrt(), 0.0);
    let (alpha, beta) = (parse("alpha")?, parse("beta")?);
    let (a, b, completed) = match (alpha, beta) {
        (None, None) => {
            let d = SystemParams::default();
            (d.alpha, d.beta, None)
        }
        (Some(a), None) => (a, complete(a), Some("beta")),
        (None, Some(b)) => (complete(b), b, Some("alpha")),
        (Some(a), Some(b)) => (a, b, None),
    };
    let norm_sq_given = match (alpha, beta) {
        (Some(a), Some(b)) => a.norm_sqr() + b.norm_sqr(),
        (Some(z), None) | (None, Some(z)) => z.norm_sqr(),
        (None, None) => 1.0,
    };
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > RENORMALIZATION_TOLERANCE {
        let key = if beta.is_some() { "beta" } else { "alpha" };
        return Err(raw.invalid(
            key,
            &format!("|alpha|^2 + |beta|^2 = {n} is not 1 within {RENORMALIZATION_TOLERANCE}"),
        ));
    }
    let renormalized = n != 1.0;
    let s = n.sqrt();
    let (a, b) = if renormalized { (a / s, b / s) } else { (a, b) };
    Ok((
        a,
        b,
        AmplitudeInput {
            norm_sq_given,
            renormalized,
            completed,
        },
    ))
}

fn positive(raw: &RawConfig, key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(raw.invalid(key, &format!("{v} must be finite and > 0")))
    }
}

fn resolve(command: CommandKind, raw: &RawConfig) -> Result<RunConfig, CliError> {
    let d = SystemParams::default();
    let omega_m = positive(raw, "omega_m", raw.get("omega_m")?.unwrap_or(d.omega_m))?;
    // coupling and linewidth scale with ω_m unless given
    let g = positive(raw, "g", raw.get("g")?.unwrap_or(d.g / d.omega_m * omega_m))?;
    let kappa = positive(raw, "kappa", raw.get("kappa")?.unwrap_or(d.kappa / d.omega_m * omega_m))?;
    let (alpha, beta, amplitudes) = resolve_amplitudes(raw)?;
    let p_p: f64 = raw.get("p_p")?.unwrap_or(d.p_p);
    let params = SystemParams {
        omega_m,
        delta: raw.get("delta")?.unwrap_or(d.delta),
        g,
        kappa,
        coupling_as: raw.get("coupling")?.unwrap_or(d.coupling_as),
        alpha,
        beta,
        p_p,
        dark_rate: raw.get("dark_rate")?.unwrap_or(d.dark_rate),
    };
    if let Err(e) = params.validate() {
        let key = match &e {
            ecp_core::Error::InvalidParams(m) => KEYS
                .iter()
                .find(|k| m.starts_with(&format!("{k} ")))
                .copied()
                .unwrap_or("params"),
            _ => "alpha",
        };
        let key = if key == "G" { "coupling" } else { key };
        return Err(raw.invalid(key, &e.to_string()));
    }

    let (gt, t) = match (raw.get::<f64>("gt")?, raw.get::<f64>("t")?) {
        (Some(gt), _) => (gt, gt / g),
        (None, Some(t)) => (g * t, t),
        (None, None) => (PI, PI / g),
    };
    if !(gt >= 0.0) || !gt.is_finite() {
        let key = if raw.raw("gt").is_some() { "gt" } else { "t" };
        return Err(raw.invalid(key, "interaction time must be finite and >= 0"));
    }

    let trials = raw.get::<u64>("trials")?.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(raw.invalid("trials", "must be >= 1"));
    }
    let format = match raw.raw("format") {
        None if matches!(command, CommandKind::Papd | CommandKind::Sweep) => Format::Csv,
        None => Format::Json,
        Some((v, _)) => match v.to_ascii_lowercase().as_str() {
            "json" => Format::Json,
            "csv" => Format::Csv,
            _ => return Err(raw.invalid("format", &format!("expected json or csv, got '{v}'"))),
        },
    };
    let pipeline = match raw.raw("pipeline") {
        None => Pipeline::Bell,
        Some((v, _)) => match v.to_ascii_lowercase().as_str() {
            "bell" => Pipeline::Bell,
            "ghz" => Pipeline::Ghz,
            _ => return Err(raw.invalid("pipeline", &format!("expected bell or ghz, got '{v}'"))),
        },
    };
    let detector = match raw.raw("detector") {
        None => None,
        Some((v, _)) => Some(match v.to_ascii_lowercase().as_str() {
            "d6" => Detector::D6,
            "d7" => Detector::D7,
            _ => return Err(raw.invalid("detector", &format!("expected d6 or d7, got '{v}'"))),
        }),
    };
    let window = match raw.get::<f64>("window")? {
        Some(w) => Some(positive(raw, "window", w)?),
        None => None,
    };
    let noise = NoiseModel {
        enabled: raw.get_bool("noise")?.unwrap_or(false),
        dark_rate: params.dark_rate,
        window,
    };

    let ratios = raw.get_list("ratios")?.unwrap_or_else(|| vec![30.0, 90.0, 150.0]);
    if ratios.is_empty() || ratios.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(raw.invalid("ratios", "every ratio must be finite and > 0"));
    }
    let t_p_max: f64 = raw.get("t_p_max")?.unwrap_or(5.0);
    if !(t_p_max >= 0.0) || !t_p_max.is_finite() {
        return Err(raw.invalid("t_p_max", "must be finite and >= 0"));
    }
    let t_p_step = positive(raw, "t_p_step", raw.get("t_p_step")?.unwrap_or(0.01))?;

    let alpha_sq = raw
        .get_list("alpha_sq")?
        .unwrap_or_else(|| (1..=9).map(|i| i as f64 / 10.0).collect());
    if alpha_sq.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(raw.invalid("alpha_sq", "values must lie in [0, 1]"));
    }
    let gt_list = raw
        .get_list("gt_list")?
        .unwrap_or_else(|| (0..8).map(|i| 0.1 + (2.0 * PI - 0.1) * i as f64 / 7.0).collect());
    if gt_list.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(raw.invalid("gt_list", "values must be finite and >= 0"));
    }

    Ok(RunConfig {
        command,
        params,
        amplitudes,
        gt,
        t,
        trials,
        seed: raw.get("seed")?.unwrap_or(DEFAULT_SEED),
        out: raw.raw("out").map(|(v, _)| PathBuf::from(v)),
        format,
        exhaustive: raw.get_bool("exhaustive")?.unwrap_or(false),
        noise,
        pipeline,
        detector,
        second_order: raw.get_bool("second_order")?.unwrap_or(false),
        ratios,
        t_p_max,
        t_p_step,
        alpha_sq,
        gt_list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_text(text: &str) -> Result<RunConfig, CliError> {
        resolve(CommandKind::Bell, &RawConfig::parse(text, None)?)
    }

    fn msg(e: CliError) -> String {
        e.to_string()
    }

    #[test]
    fn near_normalized_input_is_renormalized() {
        let c = from_text("alpha=0.8944\nbeta=0.4472\n").unwrap();
        let n = c.params.alpha.norm_sqr() + c.params.beta.norm_sqr();
        assert!((n - 1.0).abs() < 1e-15);
        assert!(c.amplitudes.renormalized);
        assert!((c.amplitudes.norm_sq_given - (0.8944f64.powi(2) + 0.4472f64.powi(2))).abs() < 1e-15);
    }

    #[test]
    fn beta_is_completed() {
        let c = from_text("alpha = 0.6").unwrap();
        assert_eq!(c.params.beta, Complex64::new(0.8, 0.0));
        assert_eq!(c.amplitudes.completed, Some("beta"));
        let c = from_text("alpha=0.6i").unwrap();
        assert_eq!(c.params.alpha, Complex64::new(0.0, 0.6));
        assert!((c.params.beta.re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn oversized_alpha_is_rejected_with_its_line() {
        let e = msg(from_text("# device\n\nalpha=1.2\n").unwrap_err());
        assert!(e.starts_with("line 3: alpha:"), "{e}");
    }

    #[test]
    fn far_from_normalized_is_rejected() {
        assert!(from_text("alpha=0.8\nbeta=0.5").is_err());
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let e = msg(RawConfig::parse("gt=1\nnonsense\n", None).unwrap_err());
        assert_eq!(e, "line 2: expected key=value");
        let e = msg(RawConfig::parse("colour=red", None).unwrap_err());
        assert!(e.contains("unknown key 'colour'"));
        let e = msg(RawConfig::parse("gt=1\ngt=2", None).unwrap_err());
        assert!(e.contains("duplicate"));
        let e = msg(from_text("gt=abc").unwrap_err());
        assert!(e.starts_with("line 1: gt: cannot parse"));
    }

    #[test]
    fn flags_override_file_values() {
        let mut raw = RawConfig::parse("gt=1.0\ntrials=5\n", None).unwrap();
        let flags = Flags {
            gt: Some(2.0),
            ..Flags::default()
        };
        flag_overrides(&mut raw, &flags);
        let c = resolve(CommandKind::Montecarlo, &raw).unwrap();
        assert_eq!(c.gt, 2.0);
        assert_eq!(c.trials, 5);
    }

    #[test]
    fn gt_takes_precedence_over_t() {
        let c = from_text("t=1e-9\ngt=0.5").unwrap();
        assert_eq!(c.gt, 0.5);
        assert_eq!(c.t, 0.5 / c.params.g);
        let c = from_text("t=1e-9").unwrap();
        assert_eq!(c.gt, c.params.g * 1e-9);
    }

    #[test]
    fn defaults() {
        let c = from_text("").unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.gt, PI);
        assert_eq!(c.format, Format::Json);
        assert!(!c.noise.enabled);
        let c = resolve(CommandKind::Papd, &RawConfig::default()).unwrap();
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.ratios, [30.0, 90.0, 150.0]);
    }

    #[test]
    fn zero_trials_is_a_config_error() {
        let e = from_text("trials=0").unwrap_err();
        assert_eq!(e.exit_code(), crate::error::EXIT_CONFIG);
    }

    #[test]
    fn invalid_physics_is_rejected() {
        assert!(from_text("kappa=-1").is_err());
        assert!(from_text("p_p=1.5").is_err());
        assert!(from_text("pipeline=w").is_err());
        assert!(from_text("detector=d9").is_err());
    }
}
