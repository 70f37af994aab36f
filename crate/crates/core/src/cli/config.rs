//! Experiment configuration: a flat `key = value` file, overridable from the
//! command line.
//!
//! ```text
//! # comments start with '#'
//! command = chsh
//! model = iid
//! seed = 42
//! trials = 100000
//! angles = 0, pi/2, pi/4, 3pi/4
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::phase::{PhaseKind, PhaseModel};
use crate::stats::ChshSampling;

pub const SEED_ENV: &str = "PHASEBIT_SEED";
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Curve,
    Chsh,
    Init,
    Gates,
    Compare,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Curve,
        Command::Chsh,
        Command::Init,
        Command::Gates,
        Command::Compare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Curve => "curve",
            Command::Chsh => "chsh",
            Command::Init => "init",
            Command::Gates => "gates",
            Command::Compare => "compare",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown command `{}`", s.trim())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum OutputTarget {
    #[default]
    Stdout,
    File(PathBuf),
}

impl OutputTarget {
    fn parse(s: &str) -> Self {
        match s.trim() {
            "" | "-" => OutputTarget::Stdout,
            p => OutputTarget::File(PathBuf::from(p)),
        }
    }

    fn as_string(&self) -> String {
        match self {
            OutputTarget::Stdout => "-".to_string(),
            OutputTarget::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub phase_model: PhaseModel,
    pub trials: u64,
    /// Radians. Empty means "use the command's default angles".
    pub angles: Vec<f64>,
    pub output: OutputTarget,
    pub format: Format,
    pub workers: usize,
    /// Register commands: index of the signal qubit.
    pub signal_index: usize,
    /// `gates`: CNOT control qubit; defaults to the signal qubit.
    pub control: Option<usize>,
    pub sampling: ChshSampling,
}

impl ExperimentConfig {
    pub fn new(command: Command, seed: u64) -> Self {
        ExperimentConfig {
            command,
            phase_model: PhaseModel::iid(seed),
            trials: DEFAULT_TRIALS,
            angles: Vec::new(),
            output: OutputTarget::Stdout,
            format: Format::Csv,
            workers: 1,
            signal_index: 0,
            control: None,
            sampling: ChshSampling::SharedTrials,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.phase_model.validate()?;
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        if let Some(bad) = self.angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::config(format!("angle {bad} is not finite")));
        }
        let n = self.resolved_angles().len();
        match self.command {
            Command::Chsh if n != 4 => {
                return Err(Error::config(format!(
                    "chsh takes exactly 4 angles (a1,a2,b1,b2), got {n}"
                )))
            }
            Command::Init | Command::Gates if self.signal_index >= n => {
                return Err(Error::config(format!(
                    "signal_index {} out of range for {n} qubits",
                    self.signal_index
                )))
            }
            Command::Gates => {
                if n < 2 {
                    return Err(Error::config("gates needs at least 2 qubits"));
                }
                let control = self.control.unwrap_or(self.signal_index);
                if control >= n {
                    return Err(Error::config(format!(
                        "control {control} out of range for {n} qubits"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The configured angles, or the command's defaults when none were given.
    pub fn resolved_angles(&self) -> Vec<f64> {
        if !self.angles.is_empty() {
            return self.angles.clone();
        }
        match self.command {
            Command::Curve | Command::Compare => (0..=16).map(|i| PI * i as f64 / 16.0).collect(),
            Command::Chsh => vec![0.0, PI / 2.0, PI / 4.0, 3.0 * PI / 4.0],
            Command::Init | Command::Gates => vec![0.0, PI / 4.0],
        }
    }

    /// Canonical text form; `parse` of this text gives back `self`.
    pub fn to_canonical_string(&self) -> String {
        let m = &self.phase_model;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("command", self.command.as_str().to_string());
        line("model", m.kind.as_str().to_string());
        line("seed", m.seed.to_string());
        line("ensemble_size", m.ensemble_size.to_string());
        line("frequency_spread", format!("{:?}", m.frequency_spread));
        line("burn_in", m.burn_in.to_string());
        line("trials", self.trials.to_string());
        line(
            "angles",
            self.angles
                .iter()
                .map(|a| format!("{a:?}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        line("out", self.output.as_string());
        line("format", self.format.as_str().to_string());
        line("workers", self.workers.to_string());
        line("signal_index", self.signal_index.to_string());
        line(
            "control",
            self.control.map(|c| c.to_string()).unwrap_or_default(),
        );
        line("sampling", self.sampling.as_str().to_string());
        out
    }
}

/// Key/value pairs from a config file, in file order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: Vec<(String, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = k.trim().to_ascii_lowercase().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::config(format!(
                    "line {}: unknown key `{}`",
                    lineno + 1,
                    k.trim()
                )));
            }
            entries.push((key, v.trim().to_string()));
        }
        Ok(RawConfig { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    /// Last value wins, so later `set` calls override the file.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Build a validated config. `env_seed` is used only when no seed is set.
    pub fn resolve(&self, env_seed: Option<&str>) -> Result<ExperimentConfig> {
        let command: Command = self
            .get("command")
            .ok_or_else(|| Error::config("no command given"))?
            .parse()?;
        let seed = match self.get("seed").or(env_seed) {
            Some(s) => parse_num::<u64>("seed", s)?,
            None => 0,
        };
        let mut cfg = ExperimentConfig::new(command, seed);
        let m = &mut cfg.phase_model;
        if let Some(v) = self.get("model").or_else(|| self.get("kind")) {
            m.kind = PhaseKind::from_str(v)?;
        }
        if let Some(v) = self.get("ensemble_size") {
            m.ensemble_size = parse_num("ensemble_size", v)?;
        }
        if let Some(v) = self.get("frequency_spread") {
            m.frequency_spread = parse_num("frequency_spread", v)?;
        }
        if let Some(v) = self.get("burn_in") {
            m.burn_in = parse_num("burn_in", v)?;
        }
        if let Some(v) = self.get("trials") {
            cfg.trials = parse_count("trials", v)?;
        }
        if let Some(v) = self.get("angles") {
            cfg.angles = parse_angle_list(v)?;
        }
        if let Some(v) = self.get("out") {
            cfg.output = OutputTarget::parse(v);
        }
        if let Some(v) = self.get("format") {
            cfg.format = v.parse()?;
        }
        if let Some(v) = self.get("workers") {
            cfg.workers = parse_num("workers", v)?;
        }
        if let Some(v) = self.get("signal_index") {
            cfg.signal_index = parse_num("signal_index", v)?;
        }
        if let Some(v) = self.get("control") {
            cfg.control = match v.trim() {
                "" => None,
                s => Some(parse_num("control", s)?),
            };
        }
        if let Some(v) = self.get("sampling") {
            cfg.sampling = v.parse()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "command",
    "model",
    "kind",
    "seed",
    "ensemble_size",
    "frequency_spread",
    "burn_in",
    "trials",
    "angles",
    "out",
    "format",
    "workers",
    "signal_index",
    "control",
    "sampling",
];

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    RawConfig::parse(text)?.resolve(None)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    let v = v.trim().replace('_', "");
    v.parse()
        .map_err(|_| Error::config(format!("invalid value `{v}` for {key}")))
}

/// Accepts plain integers and `1e5`-style shorthand.
fn parse_count(key: &str, v: &str) -> Result<u64> {
    if let Ok(n) = parse_num::<u64>(key, v) {
        return Ok(n);
    }
    let x: f64 = parse_num(key, v)?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(Error::config(format!("invalid value `{v}` for {key}")))
    }
}

/// Comma-separated angles in radians. Each item is a number or a multiple of
/// pi: `0.5`, `pi`, `-pi/2`, `3pi/4`, `0.25*pi`.
pub fn parse_angle_list(v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(parse_angle).collect()
}

pub fn parse_angle(item: &str) -> Result<f64> {
    let s: String = item
        .split_whitespace()
        .collect::<String>()
        .to_ascii_lowercase();
    let err = || Error::config(format!("invalid angle `{}`", item.trim()));
    if s.is_empty() {
        return Err(err());
    }
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|_| err())?,
        Some(at) => {
            let coef = s[..at].trim_end_matches('*');
            let rest = &s[at + 2..];
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| err())?,
            };
            let den = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix('/')
                    .ok_or_else(err)?
                    .parse::<f64>()
                    .map_err(|_| err())?,
            };
            coef * PI / den
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_forms() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle(" pi ").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        for bad in ["", "pie", "pi/", "x", "pi/0", "1/2"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn minimal_file() {
        let cfg = parse_config("command = curve\n").unwrap();
        assert_eq!(cfg.command, Command::Curve);
        assert_eq!(cfg.trials, DEFAULT_TRIALS);
        assert_eq!(cfg.phase_model, PhaseModel::iid(0));
        assert_eq!(cfg.resolved_angles().len(), 17);
    }

    #[test]
    fn full_file() {
        let text = "\
# chsh sweep
command = chsh
model = oscillator
seed = 7
ensemble_size = 16
frequency_spread = 2.5
burn_in = 10
trials = 1e4
angles = 0, pi/2, pi/4, 3pi/4
out = results.csv
format = json
workers = 4
sampling = independent
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.phase_model, PhaseModel::oscillator(7, 16, 2.5, 10));
        assert_eq!(cfg.trials, 10_000);
        assert_eq!(cfg.angles.len(), 4);
        assert_eq!(cfg.output, OutputTarget::File("results.csv".into()));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.workers, 4);
        assert_eq!(cfg.sampling, ChshSampling::IndependentStreams);
    }

    #[test]
    fn env_seed_is_fallback_only() {
        let raw = RawConfig::parse("command = curve").unwrap();
        assert_eq!(raw.resolve(Some("99")).unwrap().phase_model.seed, 99);
        let raw = RawConfig::parse("command = curve\nseed = 5").unwrap();
        assert_eq!(raw.resolve(Some("99")).unwrap().phase_model.seed, 5);
        assert!(RawConfig::parse("command = curve")
            .unwrap()
            .resolve(Some("x"))
            .is_err());
    }

    #[test]
    fn later_values_override() {
        let mut raw = RawConfig::parse("command = curve\ntrials = 10").unwrap();
        raw.set("trials", "20");
        assert_eq!(raw.resolve(None).unwrap().trials, 20);
    }

    #[test]
    fn config_errors() {
        for text in [
            "",
            "command = nope",
            "command = curve\ntrials = 0",
            "command = curve\nbogus = 1",
            "command curve",
            "command = chsh\nangles = 0, 1",
            "command = init\nangles = 0\nsignal_index = 1",
            "command = gates\nangles = 0",
            "command = gates\nangles = 0, 1\ncontrol = 2",
            "command = curve\nworkers = 0",
            "command = curve\nmodel = oscillator\nensemble_size = 0",
            "command = curve\nformat = xml",
            "command = curve\nseed = -1",
        ] {
            assert!(
                matches!(parse_config(text), Err(Error::Config(_))),
                "accepted: {text:?}"
            );
        }
    }

    #[test]
    fn canonical_round_trip() {
        let text = "command = gates\nangles = 0, pi/3, 1\ncontrol = 1\nout = -\n";
        let cfg = parse_config(text).unwrap();
        let canon = cfg.to_canonical_string();
        assert_eq!(parse_config(&canon).unwrap(), cfg);
        assert_eq!(parse_config(&canon).unwrap().to_canonical_string(), canon);
    }
}
