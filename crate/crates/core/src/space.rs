use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, strictly increasing grid of real states.
///
/// All finite kernels are indexed by one of these. Cloning is cheap; the
/// grid is shared.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct OrderedStateSpace {
    states: Arc<[f64]>,
    labels: Option<Arc<[String]>>,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    states: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<SpaceRepr> for OrderedStateSpace {
    type Error = Error;

    fn try_from(repr: SpaceRepr) -> Result<Self> {
        let space = OrderedStateSpace::new(repr.states)?;
        match repr.labels {
            Some(labels) => space.with_labels(labels),
            None => Ok(space),
        }
    }
}

impl From<OrderedStateSpace> for SpaceRepr {
    fn from(space: OrderedStateSpace) -> Self {
        SpaceRepr {
            states: space.states.to_vec(),
            labels: space.labels.map(|l| l.to_vec()),
        }
    }
}

impl PartialEq for OrderedStateSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.states, &other.states) || self.states == other.states
    }
}

impl OrderedStateSpace {
    pub fn new(states: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidSpace("state space is empty".into()));
        }
        if let Some(i) = states.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidSpace(format!(
                "state {i} is not finite ({})",
                states[i]
            )));
        }
        if let Some(i) = states.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpace(format!(
                "states not strictly increasing at index {}: {} >= {}",
                i + 1,
                states[i],
                states[i + 1]
            )));
        }
        Ok(OrderedStateSpace {
            states: states.into(),
            labels: None,
        })
    }

    /// The integer grid `lo, lo+1, ..., hi`.
    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidSpace(format!("empty integer range {lo}..={hi}")));
        }
        Self::new((lo..=hi).map(|i| i as f64).collect())
    }

    /// `n` equally spaced points from `lo` to `hi` inclusive.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("uniform grid needs at least one point".into()));
        }
        if n == 1 {
            return Self::new(vec![lo]);
        }
        let step = (hi - lo) / (n - 1) as f64;
        Self::new((0..n).map(|i| lo + step * i as f64).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.states.len() {
            return Err(Error::InvalidSpace(format!(
                "{} labels for {} states",
                labels.len(),
                self.states.len()
            )));
        }
        self.labels = Some(labels.into());
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn states(&self) -> &[f64] {
        &self.states
    }

    #[inline]
    pub fn state(&self, index: usize) -> f64 {
        self.states[index]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            Some(l) => l[index].clone(),
            None => format!("{}", self.states[index]),
        }
    }

    pub fn min(&self) -> f64 {
        self.states[0]
    }

    pub fn max(&self) -> f64 {
        self.states[self.states.len() - 1]
    }

    /// Smallest gap between consecutive states (infinite for a single state).
    pub fn min_spacing(&self) -> f64 {
        self.states
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Snapping radius used when a computed coordinate should coincide with a
    /// grid point but carries rounding error.
    pub fn snap_eps(&self) -> f64 {
        let scale = self.min().abs().max(self.max().abs()).max(1.0);
        let spacing = self.min_spacing();
        if spacing.is_finite() {
            (1e-9 * spacing).max(8.0 * f64::EPSILON * scale)
        } else {
            8.0 * f64::EPSILON * scale
        }
    }

    /// Index of `x` if it is a grid point (up to [`snap_eps`](Self::snap_eps)).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let eps = self.snap_eps();
        let i = self.floor_index(x)?;
        ((x - self.states[i]).abs() <= eps).then_some(i)
    }

    /// Largest index `i` with `state(i) <= z`, treating points within
    /// `snap_eps` of a grid point as equal to it. `None` if `z` lies below the grid.
    pub fn floor_index(&self, z: f64) -> Option<usize> {
        let eps = self.snap_eps();
        let p = self.states.partition_point(|&s| s <= z + eps);
        p.checked_sub(1)
    }

    /// True when consecutive gaps agree to relative precision 1e-9.
    pub fn is_uniform(&self) -> bool {
        if self.len() < 3 {
            return true;
        }
        let h = (self.max() - self.min()) / (self.len() - 1) as f64;
        self.states
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(OrderedStateSpace::new(vec![]).is_err());
        assert!(OrderedStateSpace::new(vec![0.0, 0.0]).is_err());
        assert!(OrderedStateSpace::new(vec![1.0, 0.0]).is_err());
        assert!(OrderedStateSpace::new(vec![0.0, f64::NAN]).is_err());
        assert!(OrderedStateSpace::new(vec![0.0, f64::INFINITY]).is_err());
        assert!(OrderedStateSpace::new(vec![3.5]).is_ok());
    }

    #[test]
    fn floor_index_snaps_rounding_noise() {
        let s = OrderedStateSpace::uniform(0.0, 3.0, 101).unwrap();
        let h = 0.03;
        let z = 7.0 * h - 1e-16;
        assert_eq!(s.floor_index(z), Some(7));
        assert_eq!(s.floor_index(-0.5), None);
        assert_eq!(s.floor_index(100.0), Some(100));
        assert_eq!(s.index_of(0.21 + 1e-15), Some(7));
        assert_eq!(s.index_of(0.215), None);
    }

    #[test]
    fn json_revalidates() {
        let err = serde_json::from_str::<OrderedStateSpace>(r#"{"states":[2,1]}"#);
        assert!(err.is_err());
        let ok: OrderedStateSpace = serde_json::from_str(r#"{"states":[0,1,2]}"#).unwrap();
        assert_eq!(ok.len(), 3);
    }
}
