//! Sampled norm histories: the raw material for decay-exponent fitting.

/// What a series measures: a component name, and the derivative order `k`
/// of the norm `‖∇^k · ‖_{L²}` it samples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeriesLabel {
    pub component: String,
    pub k: u32,
}

impl std::fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:k{}", self.component, self.k)
    }
}

/// Strictly increasing sample times with positive values (norms).
#[derive(Clone, Debug)]
pub struct TimeSeries {
    label: SeriesLabel,
    times: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("times and values differ in length: {times} vs {values}")]
    LengthMismatch { times: usize, values: usize },
    #[error("sample times must be strictly increasing and positive")]
    NonMonotonicTimes,
    #[error("series values must be positive and finite, got {0}")]
    NonPositiveValue(f64),
    #[error("window [{t1}, {t2}] holds {got} samples, need at least {need}")]
    TooFewSamples { t1: f64, t2: f64, got: usize, need: usize },
}

impl TimeSeries {
    pub fn new(
        label: SeriesLabel,
        times: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self, SeriesError> {
        if times.len() != values.len() {
            return Err(SeriesError::LengthMismatch { times: times.len(), values: values.len() });
        }
        if times.is_empty() || times[0] <= 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SeriesError::NonMonotonicTimes);
        }
        if let Some(&bad) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(SeriesError::NonPositiveValue(bad));
        }
        Ok(Self { label, times, values })
    }

    pub fn label(&self) -> &SeriesLabel {
        &self.label
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Samples with `t1 ≤ t ≤ t2`, requiring at least `need` of them.
    pub fn window(
        &self,
        t1: f64,
        t2: f64,
        need: usize,
    ) -> Result<(Vec<f64>, Vec<f64>), SeriesError> {
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (t, v) in self.times.iter().zip(&self.values) {
            if *t >= t1 && *t <= t2 {
                ts.push(*t);
                vs.push(*v);
            }
        }
        if ts.len() < need {
            return Err(SeriesError::TooFewSamples { t1, t2, got: ts.len(), need });
        }
        Ok((ts, vs))
    }
}

/// Geometric time grid with a fixed number of points per decade, inclusive
/// of both endpoints.
pub fn geometric_times(t_lo: f64, t_hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(t_lo > 0.0 && t_hi > t_lo && per_decade > 0);
    let decades = (t_hi / t_lo).log10();
    let count = (decades * per_decade as f64).round() as usize;
    (0..=count)
        .map(|i| t_lo * 10f64.powf(decades * i as f64 / count as f64))
        .collect()
}
