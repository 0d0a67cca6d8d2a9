use serde::{Deserialize, Serialize};

use super::Curve;
use crate::error::Result;

/// Index of the first point at which each property fails, if it does.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ShapeWitnesses {
    pub nonnegative: Option<usize>,
    pub nonincreasing: Option<usize>,
    pub nondecreasing: Option<usize>,
    pub convex: Option<usize>,
    pub concave: Option<usize>,
}

/// Mechanized shape verdicts for a sampled curve.
///
/// Monotonicity uses first differences and convexity uses second
/// differences (divided differences scaled by the mean spacing on uneven
/// grids), each with slack `tol`. Convexity is certified on the sampled grid
/// only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeCertificate {
    pub nonnegative: bool,
    pub nonincreasing: bool,
    pub nondecreasing: bool,
    pub convex: bool,
    pub concave: bool,
    pub tol: f64,
    pub witnesses: ShapeWitnesses,
    pub note: String,
}

impl ShapeCertificate {
    pub fn flags(&self) -> [(&'static str, bool); 5] {
        [
            ("nonnegative", self.nonnegative),
            ("nonincreasing", self.nonincreasing),
            ("nondecreasing", self.nondecreasing),
            ("convex", self.convex),
            ("concave", self.concave),
        ]
    }
}

fn first_violation(it: impl Iterator<Item = (usize, bool)>) -> Option<usize> {
    it.into_iter().find(|&(_, ok)| !ok).map(|(i, _)| i)
}

pub fn certify_shape(curve: &Curve, tol: f64) -> ShapeCertificate {
    let v = &curve.values;
    let t = &curve.times;
    let n = v.len();

    let nonnegative = first_violation(v.iter().enumerate().map(|(i, &x)| (i, x >= -tol)));
    let nonincreasing =
        first_violation((1..n).map(|i| (i, v[i] - v[i - 1] <= tol)));
    let nondecreasing =
        first_violation((1..n).map(|i| (i, v[i] - v[i - 1] >= -tol)));

    let uniform = n < 3 || {
        let h = (t[n - 1] - t[0]) / (n - 1) as f64;
        t.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
    };
    let second: Vec<f64> = if uniform {
        (1..n.saturating_sub(1))
            .map(|i| v[i + 1] - 2.0 * v[i] + v[i - 1])
            .collect()
    } else {
        let h = (t[n - 1] - t[0]) / (n - 1) as f64;
        (1..n - 1)
            .map(|i| {
                let right = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
                let left = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
                (right - left) * h
            })
            .collect()
    };
    let convex = first_violation(second.iter().enumerate().map(|(k, &d)| (k + 1, d >= -tol)));
    let concave = first_violation(second.iter().enumerate().map(|(k, &d)| (k + 1, d <= tol)));

    let mut note = String::from("convexity certified on the sampled time grid only");
    if n < 3 {
        note = "fewer than 3 points: convexity flags vacuously true".into();
    } else if !uniform {
        note.push_str("; uneven grid, divided differences used");
    }

    ShapeCertificate {
        nonnegative: nonnegative.is_none(),
        nonincreasing: nonincreasing.is_none(),
        nondecreasing: nondecreasing.is_none(),
        convex: convex.is_none(),
        concave: concave.is_none(),
        tol,
        witnesses: ShapeWitnesses {
            nonnegative,
            nonincreasing,
            nondecreasing,
            convex,
            concave,
        },
        note,
    }
}

/// Certifies a skeleton-derived curve at time steps `dt, dt/2, dt/4, ...`
/// (`levels` refinements in total). The caller rebuilds the curve for each
/// step; agreement between levels is reported, not proven.
pub fn certify_refined(
    build: impl Fn(f64) -> Result<Curve>,
    dt: f64,
    levels: usize,
    tol: f64,
) -> Result<Vec<(f64, ShapeCertificate)>> {
    let mut out = Vec::with_capacity(levels);
    let mut step = dt;
    for _ in 0..levels {
        let curve = build(step)?;
        out.push((step, certify_shape(&curve, tol)));
        step /= 2.0;
    }
    Ok(out)
}
