use crate::error::{Error, Result};

/// Least-squares exponential fit `norm(t) ~ intercept * exp(-rate * t)`
/// over a time window, performed in log space.
#[derive(Debug, Clone)]
pub struct DecayFit {
    /// Fitted decay rate (positive for decaying data).
    pub rate: f64,
    /// Fitted prefactor, the norm the fit extrapolates to at `t = 0`.
    pub intercept: f64,
    /// Window actually used, `(start, end)` inclusive.
    pub window: (f64, f64),
    /// Root-mean-square misfit of the log norms.
    pub residual: f64,
}

/// Fit a decay rate to sampled norms inside `window`. Needs at least eight
/// samples there and strictly positive norms (log space), and rejects a
/// window with no width.
pub fn decay_fit(times: &[f64], norms: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != norms.len() {
        return Err(Error::InvalidInput(format!(
            "{} times against {} norms",
            times.len(),
            norms.len()
        )));
    }
    if !(window.0.is_finite() && window.1.is_finite() && window.0 < window.1) {
        return Err(Error::InvalidInput(format!(
            "decay window ({}, {}) is empty or not finite",
            window.0, window.1
        )));
    }
    let mut logs = Vec::new();
    for (&t, &n) in times.iter().zip(norms) {
        if t < window.0 || t > window.1 {
            continue;
        }
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NonPositiveNorm { t });
        }
        logs.push((t, n.ln()));
    }
    if logs.len() < 8 {
        return Err(Error::InvalidInput(format!(
            "only {} samples inside the window; a rate fit needs at least 8",
            logs.len()
        )));
    }
    let m = logs.len() as f64;
    let st: f64 = logs.iter().map(|(t, _)| t).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let t_mean = st / m;
    let y_mean = sy / m;
    let var: f64 = logs.iter().map(|(t, _)| (t - t_mean).powi(2)).sum();
    if var == 0.0 {
        return Err(Error::InvalidInput(
            "all samples in the window share one time; no slope to fit".into(),
        ));
    }
    let cov: f64 = logs
        .iter()
        .map(|(t, y)| (t - t_mean) * (y - y_mean))
        .sum();
    let slope = cov / var;
    let offset = y_mean - slope * t_mean;
    let rss: f64 = logs
        .iter()
        .map(|(t, y)| (y - (offset + slope * t)).powi(2))
        .sum();
    Ok(DecayFit {
        rate: -slope,
        intercept: offset.exp(),
        window,
        residual: (rss / m).sqrt(),
    })
}
