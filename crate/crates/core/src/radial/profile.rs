//! Radially symmetric Fourier-space initial data.

use super::RadialError;

/// A real radial profile `r ↦ f(r)` given by nodes and values with piecewise
/// linear interpolation, identically zero beyond `support_radius`.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
    support_radius: f64,
}

impl RadialProfile {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, RadialError> {
        if nodes.len() != values.len() || nodes.is_empty() {
            return Err(RadialError::BadProfile("nodes and values must match and be nonempty".into()));
        }
        if nodes[0] < 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RadialError::BadProfile("nodes must be nonnegative and strictly increasing".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(RadialError::BadProfile("values must be finite".into()));
        }
        let support_radius = *nodes.last().unwrap();
        Ok(Self { nodes, values, support_radius })
    }

    /// The zero profile.
    pub fn zero() -> Self {
        Self { nodes: vec![0.0, 1.0], values: vec![0.0, 0.0], support_radius: 0.0 }
    }

    /// Constant value on `[0, radius]`, zero beyond (sharp edge).
    pub fn indicator(radius: f64, value: f64) -> Result<Self, RadialError> {
        if !(radius > 0.0) {
            return Err(RadialError::BadProfile("indicator radius must be positive".into()));
        }
        Self::new(vec![0.0, radius], vec![value, value])
    }

    /// Sample a closed form on the given nodes.
    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self, RadialError> {
        let values = nodes.iter().map(|&r| f(r)).collect();
        Self::new(nodes, values)
    }

    /// Plateau at `value` on `[0, inner]`, C² ramp to zero on `[inner, outer]`.
    pub fn plateau(value: f64, inner: f64, outer: f64) -> Result<Self, RadialError> {
        if !(0.0 < inner && inner < outer) {
            return Err(RadialError::BadProfile(format!(
                "need 0 < inner < outer, got inner = {inner}, outer = {outer}"
            )));
        }
        // dense sampling of the ramp keeps the piecewise-linear profile within
        // interpolation noise of the smooth shape
        let ramp_nodes = 256;
        let mut nodes = vec![0.0];
        let mut values = vec![value];
        for i in 0..=ramp_nodes {
            let x = i as f64 / ramp_nodes as f64;
            nodes.push(inner + x * (outer - inner));
            let s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
            values.push(value * (1.0 - s));
        }
        Self::new(nodes, values)
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    /// Interpolation breakpoints (quadrature panels snap to these).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Evaluate by linear interpolation; zero outside the node range.
    pub fn eval(&self, r: f64) -> f64 {
        if r < self.nodes[0] || r > self.support_radius {
            return 0.0;
        }
        match self.nodes.binary_search_by(|n| n.partial_cmp(&r).unwrap()) {
            Ok(i) => self.values[i],
            Err(i) => {
                // nodes[i-1] < r < nodes[i]
                let (n0, n1) = (self.nodes[i - 1], self.nodes[i]);
                let (v0, v1) = (self.values[i - 1], self.values[i]);
                v0 + (v1 - v0) * (r - n0) / (n1 - n0)
            }
        }
    }

    /// Minimum of |f| over node points in `(0, r_small]`.
    pub fn min_abs_below(&self, r_small: f64) -> f64 {
        let mut min = f64::INFINITY;
        for (n, v) in self.nodes.iter().zip(&self.values) {
            if *n <= r_small {
                min = min.min(v.abs());
            }
        }
        min = min.min(self.eval(r_small).abs());
        min
    }
}

/// Initial data triple `(ϱ̂₀, b̂₀, ŵ₀)` for the three-component semigroup.
///
/// `momentum` is the compressible potential of the momentum field; the
/// lower-bound construction demands it vanish identically while density and
/// director stay bounded away from zero near ξ = 0.
#[derive(Clone, Debug)]
pub struct ProfileTriple {
    pub density: RadialProfile,
    pub momentum: RadialProfile,
    pub director: RadialProfile,
}

impl ProfileTriple {
    /// Plateau data: `ϱ̂₀ = ŵ₀ = c0` on `[0, inner]` decaying smoothly to zero
    /// at `outer`, with vanishing momentum everywhere.
    pub fn plateau(c0: f64, inner: f64, outer: f64) -> Result<Self, RadialError> {
        if !(c0 > 0.0) {
            return Err(RadialError::BadProfile(format!("plateau level must be positive, got {c0}")));
        }
        Ok(Self {
            density: RadialProfile::plateau(c0, inner, outer)?,
            momentum: RadialProfile::zero(),
            director: RadialProfile::plateau(c0, inner, outer)?,
        })
    }

    /// True when this data satisfies the lower-bound hypotheses: momentum
    /// identically zero with `|ϱ̂₀| ≥ c0` and `|ŵ₀| ≥ c0` on `(0, r_small]`.
    pub fn certifies_low_band(&self, c0: f64, r_small: f64) -> bool {
        self.momentum.is_zero()
            && self.density.min_abs_below(r_small) >= c0 - 1e-12
            && self.director.min_abs_below(r_small) >= c0 - 1e-12
    }

    /// Largest support radius among the three components.
    pub fn support_radius(&self) -> f64 {
        self.density
            .support_radius()
            .max(self.momentum.support_radius())
            .max(self.director.support_radius())
    }

    /// Union of interpolation breakpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .density
            .nodes()
            .iter()
            .chain(self.momentum.nodes())
            .chain(self.director.nodes())
            .copied()
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_holds_level_then_decays() {
        let p = RadialProfile::plateau(1.0, 1.0, 2.0).unwrap();
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(0.7), 1.0);
        assert_eq!(p.eval(1.0), 1.0);
        assert!(p.eval(1.5) > 0.0 && p.eval(1.5) < 1.0);
        assert_eq!(p.eval(2.0), 0.0);
        assert_eq!(p.eval(3.0), 0.0);
        assert!((p.eval(1.5) - 0.5).abs() < 1e-12); // ramp midpoint
    }

    #[test]
    fn triple_certifies_its_construction() {
        let t = ProfileTriple::plateau(1.0, 1.0, 2.0).unwrap();
        assert!(t.momentum.is_zero());
        assert!(t.certifies_low_band(1.0, 0.5));
        assert!((t.density.min_abs_below(1.0) - 1.0).abs() < 1e-14);
        assert!(!t.certifies_low_band(1.1, 0.5));
    }

    #[test]
    fn interpolation_and_support() {
        let p = RadialProfile::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.eval(0.5), 1.5);
        assert_eq!(p.eval(1.5), 0.5);
        assert_eq!(p.eval(2.5), 0.0);
        assert_eq!(p.support_radius(), 2.0);
    }

    #[test]
    fn rejects_malformed_profiles() {
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(RadialProfile::new(vec![1.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![f64::NAN, 0.0]).is_err());
        assert!(RadialProfile::plateau(1.0, 2.0, 1.0).is_err());
        assert!(ProfileTriple::plateau(0.0, 1.0, 2.0).is_err());
    }
}
