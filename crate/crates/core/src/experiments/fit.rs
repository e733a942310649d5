use super::ExperimentError;

/// Points required in the fitted (second) half of a regret curve.
pub const MIN_FIT_POINTS: usize = 100;

/// Least-squares slope of `ln y` against `ln x`, over points with `x, y > 0`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64, ExperimentError> {
    if x.len() != y.len() {
        return Err(ExperimentError::Fit(format!("{} x values, {} y values", x.len(), y.len())));
    }
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(ExperimentError::Fit("fewer than two positive points".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Fit("all x values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Log-log growth exponent of a regret curve sampled at `times`, fitted on
/// the second half of the horizon.
pub fn sublinearity_check(times: &[usize], regret: &[f64]) -> Result<f64, ExperimentError> {
    if times.len() != regret.len() {
        return Err(ExperimentError::Fit(format!("{} times, {} values", times.len(), regret.len())));
    }
    let horizon = times.iter().copied().max().unwrap_or(0);
    let (x, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(regret)
        .filter(|(&t, _)| 2 * t > horizon)
        .map(|(&t, &r)| (t as f64, r))
        .unzip();
    if x.len() < MIN_FIT_POINTS {
        return Err(ExperimentError::Fit(format!(
            "{} points after burn-in, need {MIN_FIT_POINTS}",
            x.len()
        )));
    }
    loglog_slope(&x, &y)
}
