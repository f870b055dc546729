//! Run configuration: a per-subcommand key schema, `key=value` config
//! files, and command-line flags (flags win over file values).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, Command};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    Text,
    IntList,
    RealList,
    Bool,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Int => "an integer",
            Kind::Real => "a real number",
            Kind::Text => "a string",
            Kind::IntList => "a comma-separated list of integers",
            Kind::RealList => "a comma-separated list of reals",
            Kind::Bool => "true or false",
        }
    }
}

/// One configurable key of a subcommand.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub kind: Kind,
    pub required: bool,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(key: &'static str, kind: Kind, help: &'static str) -> KeySpec {
    KeySpec { key, kind, required: true, default: None, help }
}

const fn opt(key: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> KeySpec {
    KeySpec { key, kind, required: false, default, help }
}

const SET_HELP: &str = "lacunary set: e1, e2, or etN for the order-N sum form (e.g. et3)";

/// `(name, about, keys)` for every subcommand.
pub const SUBCOMMANDS: &[(&str, &str, &[KeySpec])] = &[
    (
        "enumerate-intervals",
        "List the intervals induced by a lacunary set",
        &[
            key("set", Kind::Text, SET_HELP),
            key("k-min", Kind::Int, "smallest leading exponent"),
            key("k-max", Kind::Int, "largest leading exponent"),
            opt("l-min", Kind::Int, Some("0"), "smallest trailing exponent"),
            opt("sign", Kind::Text, Some("both"), "positive, negative, or both"),
        ],
    ),
    (
        "square-function",
        "Evaluate S_I on a grid from a spectrum CSV (columns freq,re,im)",
        &[
            key("input", Kind::Text, "spectrum CSV path"),
            key("set", Kind::Text, SET_HELP),
            key("k-min", Kind::Int, "smallest leading exponent"),
            key("k-max", Kind::Int, "largest leading exponent"),
            opt("l-min", Kind::Int, Some("0"), "smallest trailing exponent"),
            opt("sign", Kind::Text, Some("both"), "positive, negative, or both"),
            key("half-width", Kind::Real, "grid half-width T"),
            key("samples", Kind::Int, "grid size n (power of two)"),
        ],
    ),
    (
        "a2",
        "A_2 characteristic of a weight",
        &[
            key("kind", Kind::Text, "constant, power, or step"),
            opt("alpha", Kind::Real, Some("0"), "exponent of the power weight, in (-1, 1)"),
            opt("value", Kind::Real, Some("1"), "level of the constant weight"),
            opt("lo", Kind::Real, Some("0"), "left end of the step"),
            opt("hi", Kind::Real, Some("1"), "right end of the step"),
            opt("inside", Kind::Real, Some("10"), "step weight on [lo, hi)"),
            opt("outside", Kind::Real, Some("1"), "step weight elsewhere"),
            opt("half-width", Kind::Real, Some("8"), "grid half-width T"),
            opt("samples", Kind::Int, Some("4096"), "grid size n"),
            opt("wrap", Kind::Bool, Some("false"), "scan arcs of the circle instead of intervals"),
        ],
    ),
    (
        "witness",
        "L^p norms of the witness g_N",
        &[
            key("n-list", Kind::IntList, "values of N (powers of two)"),
            opt("p-list", Kind::RealList, Some("1.1,1.25,1.5"), "exponents in (1, 2]"),
            opt("half-width", Kind::Real, Some("8"), "grid half-width T"),
            opt("samples", Kind::Int, None, "grid size n (default 2^(log2 N + 8))"),
        ],
    ),
    (
        "lower-bound-scan",
        "Growth statistic B(N) and end-to-end ratio R(N)",
        &[
            key("set", Kind::Text, SET_HELP),
            key("n-list", Kind::IntList, "values of N (powers of two)"),
            opt("half-width", Kind::Real, Some("8"), "grid half-width T"),
            opt("samples", Kind::Int, None, "grid size n (default 2^(log2 N + 8))"),
        ],
    ),
    (
        "weighted-scan",
        "Weighted L^2 ratios of S_I against power-weight A_2 characteristics",
        &[
            key("alpha-list", Kind::RealList, "power-weight exponents in (-1, 1)"),
            opt("set", Kind::Text, Some("e2"), SET_HELP),
            opt("half-width", Kind::Real, Some("8"), "grid half-width T"),
            opt("samples", Kind::Int, Some("4096"), "grid size n"),
            opt("family-size", Kind::Int, Some("20"), "number of test functions"),
        ],
    ),
    (
        "fit",
        "Log-log least-squares fit of two CSV columns",
        &[
            key("input", Kind::Text, "CSV path"),
            key("x", Kind::Text, "column for the abscissa"),
            key("y", Kind::Text, "column for the ordinate"),
        ],
    ),
];

/// Keys shared by every subcommand; these do not enter the canonical form
/// except `seed`.
const COMMON: &[KeySpec] = &[
    opt("seed", Kind::Int, Some("0"), "seed for randomized inputs"),
    opt("output", Kind::Text, None, "output path (stdout when absent)"),
    opt("config", Kind::Text, None, "key=value config file"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(i64),
    Real(f64),
    Text(String),
    IntList(Vec<i64>),
    RealList(Vec<f64>),
    Bool(bool),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Real(v) => write!(f, "{v}"),
            Param::Text(v) => write!(f, "{v}"),
            Param::IntList(v) => write!(f, "{}", join(v)),
            Param::RealList(v) => write!(f, "{}", join(v)),
            Param::Bool(v) => write!(f, "{v}"),
        }
    }
}

fn parse_value(spec: &KeySpec, raw: &str) -> Result<Param, CliError> {
    let bad = || CliError::Validation(format!("value '{raw}' for key '{}' is not {}", spec.key, spec.kind.describe()));
    let raw = raw.trim();
    Ok(match spec.kind {
        Kind::Int => Param::Int(raw.parse().map_err(|_| bad())?),
        Kind::Real => {
            let v: f64 = raw.parse().map_err(|_| bad())?;
            if !v.is_finite() {
                return Err(bad());
            }
            Param::Real(v)
        }
        Kind::Text => Param::Text(raw.to_string()),
        Kind::IntList => Param::IntList(
            raw.split(',').map(|s| s.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| bad())?,
        ),
        Kind::RealList => {
            let v: Vec<f64> =
                raw.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(bad());
            }
            Param::RealList(v)
        }
        Kind::Bool => Param::Bool(match raw {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            _ => return Err(bad()),
        }),
    })
}

/// Validated configuration for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, Param>,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&Param> {
        self.params.get(key)
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.params.get(key) {
            Some(Param::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.params.get(key) {
            Some(Param::Real(v)) => Some(*v),
            Some(Param::Int(v)) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Param::Text(v)) => Some(v),
            _ => None,
        }
    }

    pub fn int_list(&self, key: &str) -> Option<&[i64]> {
        match self.params.get(key) {
            Some(Param::IntList(v)) => Some(v),
            _ => None,
        }
    }

    pub fn real_list(&self, key: &str) -> Option<&[f64]> {
        match self.params.get(key) {
            Some(Param::RealList(v)) => Some(v),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.params.get(key) {
            Some(Param::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    /// `subcommand key=value ... seed=S version=V`, keys sorted.
    pub fn canonical(&self) -> String {
        let mut s = self.subcommand.clone();
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push_str(&format!(" seed={} version={}", self.seed, env!("CARGO_PKG_VERSION")));
        s
    }
}

fn schema(sub: &str) -> Option<&'static [KeySpec]> {
    SUBCOMMANDS.iter().find(|(name, _, _)| *name == sub).map(|(_, _, keys)| *keys)
}

/// The clap command tree generated from [`SUBCOMMANDS`].
pub fn command() -> Command {
    let mut cmd = Command::new("lplab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Littlewood-Paley square functions over lacunary sets")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for (name, about, keys) in SUBCOMMANDS {
        let mut sub = Command::new(*name).about(*about);
        for spec in keys.iter().chain(COMMON) {
            let mut arg = Arg::new(spec.key).long(spec.key).action(ArgAction::Set).help(spec.help);
            if spec.key == "output" {
                arg = arg.short('o');
            }
            if matches!(spec.kind, Kind::Int | Kind::Real | Kind::IntList | Kind::RealList) {
                arg = arg.allow_hyphen_values(true);
            }
            sub = sub.arg(arg);
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Parses a flat `key=value` file; `#` starts a comment line.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {} is not key=value: '{line}'", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from `args` (including the program name) and an
/// optional `--config` file.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = command().try_get_matches_from(args).map_err(CliError::from_clap)?;
    let (sub, m) = matches.subcommand().ok_or_else(|| CliError::Validation("missing subcommand".into()))?;
    let keys = schema(sub).ok_or_else(|| CliError::Validation(format!("unknown subcommand '{sub}'")))?;

    let mut raw: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = m.get_one::<String>("config") {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| CliError::Validation(format!("cannot read config file '{path}': {e}")))?;
        for (k, v) in parse_config_file(&text)? {
            let known = keys.iter().chain(COMMON).any(|s| s.key == k) && k != "config";
            if !known {
                return Err(CliError::Validation(format!("unknown key '{k}' in config file for '{sub}'")));
            }
            raw.insert(k, v);
        }
    }
    for spec in keys.iter().chain(COMMON) {
        if let Some(v) = m.get_one::<String>(spec.key) {
            raw.insert(spec.key.to_string(), v.clone());
        }
    }

    let mut params = BTreeMap::new();
    for spec in keys {
        match raw.get(spec.key).map(String::as_str).or(spec.default) {
            Some(v) => {
                params.insert(spec.key.to_string(), parse_value(spec, v)?);
            }
            None if spec.required => {
                return Err(CliError::Validation(format!("missing required key '{}' for '{sub}'", spec.key)));
            }
            None => {}
        }
    }
    let seed = match raw.get("seed") {
        Some(s) => s.trim().parse::<u64>().map_err(|_| {
            CliError::Validation(format!("value '{s}' for key 'seed' is not an unsigned integer"))
        })?,
        None => 0,
    };
    Ok(RunConfig { subcommand: sub.to_string(), params, output: raw.get("output").map(PathBuf::from), seed })
}
