//! Verdicts: fitted exponents against the theoretical rates, plus two-sided
//! constant brackets.

use anyhow::{bail, Result};
use liqlab::radial::two_sided_rate_check;
use liqlab::series::{SeriesLabel, TimeSeries};

use crate::fitting::fit_exponent;

/// The measured components and their theoretical decay exponents.
///
/// Density, compressible velocity, and the director gradient all decay at
/// `(1+t)^{-3/4-k/2}` (`N_k` of the director measures `‖∇^{k+1} n‖`, whose
/// exponent `(3+2k)/4` is the same number). The incompressible part follows
/// the plain heat scaling with viscosity μ, again `3/4 + k/2`.
pub fn theoretical_exponent(component: &str, k: u32) -> Option<f64> {
    match component {
        "density" | "compressible" | "director" | "incompressible" | "all" => {
            Some(0.75 + 0.5 * k as f64)
        }
        _ => None,
    }
}

/// Labels a verification run requires: k = 0, 1, 2 for the density,
/// compressible, and director components.
pub fn required_labels() -> Vec<SeriesLabel> {
    let mut labels = Vec::new();
    for component in ["density", "compressible", "director"] {
        for k in 0..=2u32 {
            labels.push(SeriesLabel { component: component.into(), k });
        }
    }
    labels
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub label: SeriesLabel,
    pub fitted: f64,
    pub theoretical: f64,
    pub r_squared: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub pass: bool,
    pub window: (f64, f64),
}

#[derive(Clone, Copy, Debug)]
pub struct VerifySettings {
    pub window: (f64, f64),
    pub tolerance: f64,
    pub ratio_bound: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { window: (1e2, 1e4), tolerance: 0.05, ratio_bound: 3.0 }
    }
}

/// Fit one series and bracket it against its theoretical exponent.
pub fn report_for(series: &TimeSeries, settings: &VerifySettings) -> Result<DecayReport> {
    let label = series.label().clone();
    let Some(theoretical) = theoretical_exponent(&label.component, label.k) else {
        bail!("no theoretical exponent known for component '{}'", label.component);
    };
    let fit = fit_exponent(series, settings.window)?;
    let bracket =
        two_sided_rate_check(series, theoretical, settings.window, settings.ratio_bound)?;
    let pass = (fit.alpha - theoretical).abs() <= settings.tolerance && bracket.two_sided;
    Ok(DecayReport {
        label,
        fitted: fit.alpha,
        theoretical,
        r_squared: fit.r_squared,
        c_lower: bracket.c_lower,
        c_upper: bracket.c_upper,
        pass,
        window: settings.window,
    })
}

/// Verify every required series (and any extra recognized ones present),
/// in stable label order. Missing required labels are enumerated.
pub fn verify_rates(series: &[TimeSeries], settings: &VerifySettings) -> Result<Vec<DecayReport>> {
    let missing: Vec<String> = required_labels()
        .iter()
        .filter(|need| !series.iter().any(|s| s.label() == *need))
        .map(|l| l.to_string())
        .collect();
    if !missing.is_empty() {
        bail!("missing required series: {}", missing.join(", "));
    }
    let mut sorted: Vec<&TimeSeries> = series.iter().collect();
    sorted.sort_by(|a, b| a.label().cmp(b.label()));
    sorted.iter().map(|s| report_for(s, settings)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use liqlab::series::geometric_times;

    fn synthetic(component: &str, k: u32, alpha: f64) -> TimeSeries {
        let times = geometric_times(1e2, 1e4, 16);
        let values = times.iter().map(|&t| 2.0 * (1.0 + t).powf(-alpha)).collect();
        TimeSeries::new(SeriesLabel { component: component.into(), k }, times, values).unwrap()
    }

    #[test]
    fn exact_rates_pass() {
        let mut all = Vec::new();
        for comp in ["density", "compressible", "director"] {
            for k in 0..=2u32 {
                all.push(synthetic(comp, k, 0.75 + 0.5 * k as f64));
            }
        }
        let reports = verify_rates(&all, &VerifySettings::default()).unwrap();
        assert_eq!(reports.len(), 9);
        assert!(reports.iter().all(|r| r.pass));
        // stable order: sorted by label
        let labels: Vec<String> = reports.iter().map(|r| r.label.to_string()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
    }

    #[test]
    fn wrong_exponent_fails_the_verdict() {
        let mut all = Vec::new();
        for comp in ["density", "compressible", "director"] {
            for k in 0..=2u32 {
                all.push(synthetic(comp, k, 0.75 + 0.5 * k as f64));
            }
        }
        // make density k=1 decay half a power too slowly
        all[1] = synthetic("density", 1, 0.75);
        let reports = verify_rates(&all, &VerifySettings::default()).unwrap();
        let bad = reports.iter().find(|r| r.label.component == "density" && r.label.k == 1);
        assert!(!bad.unwrap().pass);
    }

    #[test]
    fn missing_series_are_enumerated() {
        let some = vec![synthetic("density", 0, 0.75)];
        let err = verify_rates(&some, &VerifySettings::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("compressible:k0"), "{msg}");
        assert!(msg.contains("director:k2"), "{msg}");
    }
}
