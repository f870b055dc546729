use alloc::vec::Vec;

use super::record::ExperimentRecord;
use crate::error::{Error, Result};

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() {
        return Err(Error::Degenerate("x and y lengths differ".into()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::TooFew { need: 3, got: n });
    }
    if let Some(i) = xs.iter().chain(ys).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i % n));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| {
        let r = y - (slope * x + intercept);
        r * r
    }).sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(Fit { slope, intercept, r2 })
}

/// Fit of `log y` against `log x`.
pub fn fit_exponent_xy(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::OutOfRange("log-log fit needs positive values".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| libm::log(y)).collect();
    fit_linear(&lx, &ly)
}

pub fn fit_exponent(records: &[ExperimentRecord], x_key: &str, y_key: &str) -> Result<Fit> {
    let mut xs = Vec::with_capacity(records.len());
    let mut ys = Vec::with_capacity(records.len());
    for r in records {
        let x = r.real(x_key).ok_or_else(|| Error::OutOfRange(alloc::format!("missing numeric column {x_key}")))?;
        let y = r.real(y_key).ok_or_else(|| Error::OutOfRange(alloc::format!("missing numeric column {y_key}")))?;
        xs.push(x);
        ys.push(y);
    }
    fit_exponent_xy(&xs, &ys)
}
