use serde::{Deserialize, Serialize};

use super::{poisson_weights, Prediction, ZooModel};
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::space::OrderedStateSpace;

/// Largest admissible probability that one step's input exceeds the grid span.
pub const OVERFLOW_LIMIT: f64 = 1e-6;

/// Poisson cutoff for the number of jumps in one step.
const JUMP_COUNT_TAIL: f64 = 1e-15;

/// Finitely supported law of nonnegative jump sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct JumpDistribution {
    atoms: Vec<(f64, f64)>,
}

impl JumpDistribution {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("jump distribution has no atoms".into()));
        }
        if atoms
            .iter()
            .any(|&(s, p)| !(s >= 0.0 && s.is_finite() && p >= 0.0 && p.is_finite()))
        {
            return Err(Error::Domain("jump sizes and probabilities must be finite and >= 0".into()));
        }
        let total: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("jump probabilities sum to {total}")));
        }
        Ok(JumpDistribution { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(s, p)| s * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|(s, p)| s * s * p).sum()
    }
}

impl TryFrom<Vec<(f64, f64)>> for JumpDistribution {
    type Error = Error;
    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<JumpDistribution> for Vec<(f64, f64)> {
    fn from(d: JumpDistribution) -> Self {
        d.atoms
    }
}

/// How an off-grid point is assigned to grid states.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridRounding {
    /// Split between the two neighbouring states so that the mean is kept.
    #[default]
    Split,
    /// Nearest state, ties up.
    Nearest,
}

/// Law of the compound-Poisson input over one step, atoms sorted by size.
fn compound_poisson(jumps: &JumpDistribution, rate: f64, dt: f64) -> Vec<(f64, f64)> {
    let weights = poisson_weights(rate * dt, JUMP_COUNT_TAIL);
    let kept: f64 = weights.iter().sum();
    let scale = jumps.atoms().iter().map(|a| a.0).fold(1.0, f64::max);
    let merge_eps = 1e-12 * scale;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut n_fold: Vec<(f64, f64)> = vec![(0.0, 1.0)];
    for (n, &w) in weights.iter().enumerate() {
        if n > 0 {
            let mut next: Vec<(f64, f64)> = Vec::with_capacity(n_fold.len() * jumps.atoms().len());
            for &(s, p) in &n_fold {
                for &(j, q) in jumps.atoms() {
                    next.push((s + j, p * q));
                }
            }
            n_fold = merge(next, merge_eps);
        }
        out.extend(n_fold.iter().map(|&(s, p)| (s, p * w / kept)));
    }
    merge(out, merge_eps)
}

fn merge(mut atoms: Vec<(f64, f64)>, eps: f64) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (s, p) in atoms {
        match out.last_mut() {
            Some((last, q)) if s - *last <= eps => *q += p,
            _ => out.push((s, p)),
        }
    }
    out
}

/// Puts mass `p` at the real point `y` (already clamped to the grid range).
fn place(space: &OrderedStateSpace, rounding: GridRounding, y: f64, p: f64, row: &mut [f64]) {
    let s = space.states();
    let eps = space.snap_eps();
    let k = space.floor_index(y).unwrap_or(0);
    if k + 1 == s.len() || (y - s[k]).abs() <= eps {
        row[k] += p;
        return;
    }
    let (lo, hi) = (s[k], s[k + 1]);
    match rounding {
        GridRounding::Split => {
            let w = (hi - y) / (hi - lo);
            row[k] += p * w;
            row[k + 1] += p * (1.0 - w);
        }
        GridRounding::Nearest => {
            if y - lo >= hi - y {
                row[k + 1] += p;
            } else {
                row[k] += p;
            }
        }
    }
}

/// Rows of `x ↦ clamp(g(x) + J)` and the largest per-row mass clamped at the top.
fn input_kernel(
    grid: &OrderedStateSpace,
    g: impl Fn(f64) -> f64,
    input: &[(f64, f64)],
    rounding: GridRounding,
) -> Result<(FiniteKernel, f64)> {
    let (lo, hi) = (grid.min(), grid.max());
    let n = grid.len();
    let mut top_mass: f64 = 0.0;
    let kernel = FiniteKernel::from_fn(grid.clone(), |i| {
        let base = g(grid.state(i));
        let mut row = vec![0.0; n];
        let mut over = 0.0;
        for &(j, p) in input {
            let y = base + j;
            if y > hi {
                over += p;
            }
            place(grid, rounding, y.clamp(lo, hi), p, &mut row);
        }
        top_mass = top_mass.max(over);
        row
    })?;
    Ok((kernel, top_mass))
}

fn check_input(
    jumps: &JumpDistribution,
    jump_rate: f64,
    dt: f64,
    grid: &OrderedStateSpace,
) -> Result<Vec<(f64, f64)>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("step dt = {dt} must be positive")));
    }
    if !(jump_rate >= 0.0 && jump_rate.is_finite()) {
        return Err(Error::Domain(format!("jump rate {jump_rate} must be >= 0")));
    }
    if grid.len() < 2 {
        return Err(Error::InvalidSpace("need at least two grid states".into()));
    }
    let input = compound_poisson(jumps, jump_rate, dt);
    let span = grid.max() - grid.min();
    let overflow: f64 = input.iter().filter(|(s, _)| *s > span).map(|(_, p)| p).sum();
    if overflow > OVERFLOW_LIMIT {
        return Err(Error::Truncation {
            mass: overflow,
            limit: OVERFLOW_LIMIT,
            message: format!("one-step input exceeds the grid span {span}"),
        });
    }
    Ok(input)
}

fn finish(name: String, kernel: FiniteKernel, grid: &OrderedStateSpace, top_mass: f64, rounding: GridRounding) -> ZooModel {
    let predicted = Prediction {
        monotone: Some(true),
        condition1: grid.is_uniform().then_some(true),
    };
    let mut model = ZooModel::new(name, kernel, predicted);
    model.truncation_mass = top_mass;
    model.notes.push(format!("grid rounding: {rounding:?}"));
    if top_mass > 0.0 {
        model
            .notes
            .push(format!("up to {top_mass:e} per row clamped at the top state"));
    }
    model
}

/// One step of length `dt` of a shot-noise process: linear decay at rate `r`
/// plus compound-Poisson jumps, `x ↦ x e^{−r dt} + J(dt)`, placed on `grid`.
///
/// Requires `e^{−r dt} >= 0.5`. Fails with a truncation error if `J(dt)`
/// exceeds the grid span with probability above [`OVERFLOW_LIMIT`].
pub fn shot_noise_skeleton(
    r: f64,
    jumps: &JumpDistribution,
    jump_rate: f64,
    dt: f64,
    grid: &OrderedStateSpace,
    rounding: GridRounding,
) -> Result<ZooModel> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("decay rate {r} must be positive")));
    }
    let a = (-r * dt).exp();
    if a < 0.5 {
        return Err(Error::Precondition(format!(
            "decay factor e^(-r dt) = {a} is below 0.5; reduce dt"
        )));
    }
    let input = check_input(jumps, jump_rate, dt, grid)?;
    let (kernel, top) = input_kernel(grid, |x| a * x, &input, rounding)?;
    Ok(finish(format!("shot-noise(r={r}, dt={dt})"), kernel, grid, top, rounding))
}

/// Euler step of a dam with release rate `release(x)`:
/// `x ↦ max(x − release(x) dt, min) + J(dt)`.
///
/// `release` must be nonnegative and nondecreasing on the grid, and
/// `x − release(x) dt` nondecreasing.
pub fn dam_skeleton(
    release: impl Fn(f64) -> f64,
    jumps: &JumpDistribution,
    jump_rate: f64,
    dt: f64,
    grid: &OrderedStateSpace,
    rounding: GridRounding,
) -> Result<ZooModel> {
    let input = check_input(jumps, jump_rate, dt, grid)?;
    let rel: Vec<f64> = grid.states().iter().map(|&x| release(x)).collect();
    if rel.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::Domain("release rate must be finite and >= 0".into()));
    }
    for i in 1..rel.len() {
        if rel[i] < rel[i - 1] {
            return Err(Error::Precondition(format!(
                "release rate decreases at state {}",
                grid.state(i)
            )));
        }
        let (x0, x1) = (grid.state(i - 1), grid.state(i));
        if x1 - rel[i] * dt < x0 - rel[i - 1] * dt {
            return Err(Error::Precondition(format!(
                "x - release(x) dt decreases at state {x1}; reduce dt"
            )));
        }
    }
    let lo = grid.min();
    let (kernel, top) = input_kernel(
        grid,
        |x| {
            let i = grid.index_of(x).unwrap_or(0);
            (x - rel[i] * dt).max(lo)
        },
        &input,
        rounding,
    )?;
    Ok(finish(format!("dam(dt={dt})"), kernel, grid, top, rounding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_condition1, check_stoch_monotone, DEFAULT_TOL};

    fn grid() -> OrderedStateSpace {
        OrderedStateSpace::uniform(0.0, 6.0, 121).unwrap()
    }

    #[test]
    fn compound_poisson_moments() {
        let jumps = JumpDistribution::new(vec![(0.5, 0.5), (1.0, 0.5)]).unwrap();
        let (rate, dt) = (2.0, 0.1);
        let law = compound_poisson(&jumps, rate, dt);
        let mass: f64 = law.iter().map(|a| a.1).sum();
        let mean: f64 = law.iter().map(|(s, p)| s * p).sum();
        let var: f64 = law.iter().map(|(s, p)| (s - mean) * (s - mean) * p).sum();
        assert!((mass - 1.0).abs() < 1e-14);
        assert!((mean - rate * dt * jumps.mean()).abs() < 1e-13);
        assert!((var - rate * dt * jumps.second_moment()).abs() < 1e-13);
    }

    #[test]
    fn no_jumps_is_deterministic_decay() {
        let jumps = JumpDistribution::new(vec![(1.0, 1.0)]).unwrap();
        let g = grid();
        let m = shot_noise_skeleton(1.0, &jumps, 0.0, 0.05, &g, GridRounding::Split).unwrap();
        assert!(check_stoch_monotone(&m.kernel, DEFAULT_TOL).passed);
        assert!(check_condition1(&m.kernel, DEFAULT_TOL).passed);
        // split rounding keeps the conditional mean exact, so n steps land on
        // x e^{-r n dt} in mean, well inside one grid cell
        let n = 20;
        let pn = m.kernel.n_step(n);
        let h = g.min_spacing();
        for i in 0..g.len() {
            let x = g.state(i);
            let mean: f64 = pn.row(i).iter().zip(g.states()).map(|(p, y)| p * y).sum();
            assert!((mean - x * (-0.05 * n as f64).exp()).abs() < h * 1e-6, "x={x}");
        }
    }

    #[test]
    fn nearest_rounding_sticks_near_zero() {
        let jumps = JumpDistribution::new(vec![(1.0, 1.0)]).unwrap();
        let g = grid();
        let m = shot_noise_skeleton(1.0, &jumps, 0.0, 0.05, &g, GridRounding::Nearest).unwrap();
        // 0.05 · e^{-0.05} rounds back to 0.05: the state never decays
        let i = g.index_of(0.05).unwrap();
        assert_eq!(m.kernel.prob(i, i), 1.0);
        assert!(check_condition1(&m.kernel, DEFAULT_TOL).passed);
    }

    #[test]
    fn guards() {
        let jumps = JumpDistribution::new(vec![(1.0, 1.0)]).unwrap();
        let g = grid();
        assert!(matches!(
            shot_noise_skeleton(1.0, &jumps, 1.0, 1.0, &g, GridRounding::Split),
            Err(Error::Precondition(_))
        ));
        let big = JumpDistribution::new(vec![(10.0, 1.0)]).unwrap();
        assert!(matches!(
            shot_noise_skeleton(1.0, &big, 1.0, 0.05, &g, GridRounding::Split),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn dam_with_increasing_release_passes_both_checks() {
        let jumps = JumpDistribution::new(vec![(0.25, 0.3), (0.75, 0.7)]).unwrap();
        let g = grid();
        let release = |x: f64| 0.5 * x + 0.2 * x.sqrt();
        let m = dam_skeleton(release, &jumps, 1.5, 0.02, &g, GridRounding::Split).unwrap();
        assert!(check_stoch_monotone(&m.kernel, DEFAULT_TOL).passed);
        assert!(check_condition1(&m.kernel, DEFAULT_TOL).passed);
        assert!(dam_skeleton(|x: f64| 6.0 - x, &jumps, 1.5, 0.02, &g, GridRounding::Split).is_err());
    }
}
