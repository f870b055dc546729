//! Subcommand dispatch. Every subcommand returns its records; parallel
//! points are evaluated on the configured pool and merged in input order.

use rayon::prelude::*;

use lplab_core::experiments::{
    family_pairs, fit_exponent, lower_bound_point, weighted_point, witness_lp_profile, witness_norm, ExperimentRecord,
    ScanConfig, Value, WeightedConfig, WitnessSpec,
};
use lplab_core::lacunary::{enumerate_ikl, generate_points, intervals_from_points, LacunarySpec, SetKind, SignMode};
use lplab_core::measures::{a2_characteristic, make_constant_weight, make_power_weight, make_step_weight, A2Scan};
use lplab_core::spectral::{inverse_transform, Spectrum};
use lplab_core::squarefn::square_function_grid;
use lplab_core::Complex64;

use crate::config::RunConfig;
use crate::csv;
use crate::error::CliError;

pub fn parse_set(s: &str) -> Result<SetKind, CliError> {
    let s = s.trim().to_ascii_lowercase();
    let order = match s.as_str() {
        "e1" => return Ok(SetKind::E1),
        "e2" => return Ok(SetKind::E2),
        _ => s.strip_prefix("et").or_else(|| s.strip_prefix("sum")).and_then(|n| n.parse::<u32>().ok()),
    };
    match order {
        Some(n) if n >= 1 => Ok(SetKind::Sum(n)),
        _ => Err(CliError::Validation(format!("unknown set '{s}': expected e1, e2, or etN with N >= 1"))),
    }
}

pub fn parse_sign(s: &str) -> Result<SignMode, CliError> {
    match s.trim() {
        "positive" | "pos" | "+" => Ok(SignMode::Positive),
        "negative" | "neg" | "-" => Ok(SignMode::Negative),
        "both" => Ok(SignMode::Both),
        other => Err(CliError::Validation(format!("unknown sign '{other}': expected positive, negative, or both"))),
    }
}

fn req_int(cfg: &RunConfig, key: &str) -> Result<i64, CliError> {
    cfg.int(key).ok_or_else(|| CliError::Validation(format!("missing required key '{key}'")))
}

fn req_real(cfg: &RunConfig, key: &str) -> Result<f64, CliError> {
    cfg.real(key).ok_or_else(|| CliError::Validation(format!("missing required key '{key}'")))
}

fn req_text<'a>(cfg: &'a RunConfig, key: &str) -> Result<&'a str, CliError> {
    cfg.text(key).ok_or_else(|| CliError::Validation(format!("missing required key '{key}'")))
}

fn to_i32(key: &str, v: i64) -> Result<i32, CliError> {
    i32::try_from(v).map_err(|_| CliError::Validation(format!("value {v} for key '{key}' is out of range")))
}

fn to_usize(key: &str, v: i64) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::Validation(format!("value {v} for key '{key}' must be nonnegative")))
}

fn n_list(cfg: &RunConfig) -> Result<Vec<u64>, CliError> {
    let list = cfg.int_list("n-list").ok_or_else(|| CliError::Validation("missing required key 'n-list'".into()))?;
    list.iter()
        .map(|&n| match u64::try_from(n) {
            Ok(v) if v >= 4 && v.is_power_of_two() => Ok(v),
            _ => Err(CliError::Validation(format!("N = {n} in 'n-list' must be a power of two >= 4"))),
        })
        .collect()
}

fn lacunary_spec(cfg: &RunConfig) -> Result<LacunarySpec, CliError> {
    let spec = LacunarySpec {
        kind: parse_set(req_text(cfg, "set")?)?,
        k_min: to_i32("k-min", req_int(cfg, "k-min")?)?,
        k_max: to_i32("k-max", req_int(cfg, "k-max")?)?,
        l_min: to_i32("l-min", cfg.int("l-min").unwrap_or(0))?,
        sign: parse_sign(cfg.text("sign").unwrap_or("both"))?,
    };
    spec.validate()?;
    Ok(spec)
}

fn samples(cfg: &RunConfig) -> Result<Option<usize>, CliError> {
    cfg.int("samples").map(|v| to_usize("samples", v)).transpose()
}

/// Runs the configured subcommand and returns its records.
pub fn execute(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    match cfg.subcommand.as_str() {
        "enumerate-intervals" => enumerate_intervals(cfg),
        "square-function" => square_function(cfg),
        "a2" => a2(cfg),
        "witness" => witness(cfg),
        "lower-bound-scan" => lower_bound_scan(cfg),
        "weighted-scan" => weighted_scan(cfg),
        "fit" => fit(cfg),
        other => Err(CliError::Validation(format!("unknown subcommand '{other}'"))),
    }
}

/// Runs the subcommand and writes its CSV to the configured output, or
/// returns the text when no output path is set.
pub fn run(cfg: &RunConfig) -> Result<Option<String>, CliError> {
    let records = crate::threads::install(|| execute(cfg))??;
    let text = csv::render(&cfg.canonical(), &records)?;
    match &cfg.output {
        Some(path) => {
            csv::write_atomic(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn enumerate_intervals(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let spec = lacunary_spec(cfg)?;
    let row = |k: Value, l: Value, sign: &str, a: f64, b: f64| {
        ExperimentRecord::new().with("k", k).with("l", l).with("sign", sign).with("a", a).with("b", b)
    };
    if spec.kind == SetKind::E2 {
        let ivs = enumerate_ikl(spec.k_min, spec.k_max, spec.l_min, spec.sign)?;
        return Ok(ivs
            .iter()
            .map(|li| row(Value::Int(li.k as i64), Value::Int(li.l as i64), li.sign.as_str(), li.interval.a(), li.interval.b()))
            .collect());
    }
    let coll = intervals_from_points(&generate_points(&spec)?)?;
    Ok(coll
        .iter()
        .map(|iv| {
            let sign = if iv.a() >= 0.0 { "+" } else { "-" };
            row(Value::Text(String::new()), Value::Text(String::new()), sign, iv.a(), iv.b())
        })
        .collect())
}

fn square_function(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let spec = lacunary_spec(cfg)?;
    let coll = intervals_from_points(&generate_points(&spec)?)?;
    let t = req_real(cfg, "half-width")?;
    let n = to_usize("samples", req_int(cfg, "samples")?)?;
    let path = req_text(cfg, "input")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read input '{path}': {e}")))?;
    let (_, rows) = csv::parse(&text)?;
    let mut s = Spectrum::zeros(t, n)?;
    for (i, r) in rows.iter().enumerate() {
        let get = |k: &str| {
            r.real(k).ok_or_else(|| CliError::Validation(format!("row {} of '{path}' lacks a numeric '{k}'", i + 1)))
        };
        let xi = get("freq")?;
        let m = s.grid_index(xi).ok_or_else(|| {
            CliError::Validation(format!("frequency {xi} is not a grid frequency m/(2T) below the Nyquist limit"))
        })?;
        s.set_coeff(m, Complex64::new(get("re")?, get("im")?))?;
    }
    let f = inverse_transform(&s)?;
    let sf = square_function_grid(&f, &coll)?;
    Ok((0..sf.len())
        .map(|j| ExperimentRecord::new().with("x", sf.x(j)).with("value", sf.samples()[j].re))
        .collect())
}

fn a2(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let t = cfg.real("half-width").unwrap_or(8.0);
    let n = to_usize("samples", cfg.int("samples").unwrap_or(4096))?;
    let w = match req_text(cfg, "kind")? {
        "constant" => make_constant_weight(t, n, cfg.real("value").unwrap_or(1.0))?,
        "power" => make_power_weight(req_real(cfg, "alpha")?, t, n)?,
        "step" => make_step_weight(
            t,
            n,
            cfg.real("lo").unwrap_or(0.0),
            cfg.real("hi").unwrap_or(1.0),
            cfg.real("inside").unwrap_or(10.0),
            cfg.real("outside").unwrap_or(1.0),
        )?,
        other => {
            return Err(CliError::Validation(format!("unknown weight kind '{other}': expected constant, power, or step")))
        }
    };
    let scan = A2Scan { wrap: cfg.flag("wrap").unwrap_or(false), ..A2Scan::default() };
    let rep = a2_characteristic(&w, &scan);
    Ok(vec![ExperimentRecord::new()
        .with("characteristic", rep.characteristic)
        .with("a", rep.argmax.a())
        .with("b", rep.argmax.b())
        .with("family_size", rep.family_size as i64)])
}

fn witness(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let t = cfg.real("half-width").unwrap_or(8.0);
    let ps = cfg.real_list("p-list").unwrap_or(&[1.1, 1.25, 1.5]).to_vec();
    let samples = samples(cfg)?;
    let ns = n_list(cfg)?;
    let parts: Vec<Result<Vec<ExperimentRecord>, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let size = samples.unwrap_or(1usize << (n.trailing_zeros() + 8));
            let spec = WitnessSpec::new(n, t, size)?;
            Ok(witness_lp_profile(&spec, &ps)?)
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn lower_bound_scan(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let kind = parse_set(req_text(cfg, "set")?)?;
    let scan = ScanConfig { half_width: cfg.real("half-width").unwrap_or(8.0), samples: samples(cfg)?, ..ScanConfig::default() };
    let ns = n_list(cfg)?;
    for &n in &ns {
        scan.spec_for(n)?;
    }
    let points: Vec<Result<ExperimentRecord, CliError>> = ns
        .par_iter()
        .map(|&n| {
            let wn = witness_norm(n, &scan)?;
            Ok(lower_bound_point(kind, n, &scan, Some(&wn))?.to_record())
        })
        .collect();
    points.into_iter().collect()
}

fn weighted_scan(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let alphas = cfg.real_list("alpha-list").ok_or_else(|| CliError::Validation("missing required key 'alpha-list'".into()))?;
    let wcfg = WeightedConfig {
        half_width: cfg.real("half-width").unwrap_or(8.0),
        samples: to_usize("samples", cfg.int("samples").unwrap_or(4096))?,
        seed: cfg.seed,
        family_size: to_usize("family-size", cfg.int("family-size").unwrap_or(20))?,
        set: parse_set(cfg.text("set").unwrap_or("e2"))?,
        ..WeightedConfig::default()
    };
    for &a in alphas {
        make_power_weight(a, wcfg.half_width, 2)?;
    }
    let pairs = family_pairs(&wcfg)?;
    let points: Vec<Result<ExperimentRecord, CliError>> =
        alphas.par_iter().map(|&a| Ok(weighted_point(a, &wcfg, &pairs)?.to_record())).collect();
    points.into_iter().collect()
}

fn fit(cfg: &RunConfig) -> Result<Vec<ExperimentRecord>, CliError> {
    let path = req_text(cfg, "input")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read input '{path}': {e}")))?;
    let (_, records) = csv::parse(&text)?;
    let (x, y) = (req_text(cfg, "x")?, req_text(cfg, "y")?);
    for key in [x, y] {
        if records.first().is_some_and(|r| r.get(key).is_none()) {
            return Err(CliError::Validation(format!("column '{key}' not found in '{path}'")));
        }
    }
    let f = fit_exponent(&records, x, y)?;
    Ok(vec![ExperimentRecord::new()
        .with("slope", f.slope)
        .with("intercept", f.intercept)
        .with("r2", f.r2)
        .with("count", records.len() as i64)])
}
