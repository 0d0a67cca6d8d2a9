//! Exact structural checks on finite kernels.
//!
//! Two independent routes are provided for each kernel property: a scan of
//! tail probabilities and a scan of the generalized inverse. They are
//! equivalent, and the test suite holds them to identical verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ginv::GeneralizedInverseTable;
use crate::kernel::{FiniteKernel, KernelSequence};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Step of the uniform level grid scanned by the quantile checks.
pub const LEVEL_GRID_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    StochMonotone,
    #[serde(rename = "condition-1")]
    Condition1,
    Supermodular,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::StochMonotone => "stoch-monotone",
            Property::Condition1 => "condition-1",
            Property::Supermodular => "supermodular",
        })
    }
}

/// Which characterization produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Tail probabilities `p(x, (y, ∞))`.
    Tail,
    /// Generalized inverse `G(x, u)`.
    Quantile,
    /// Direct evaluation of a bivariate function.
    Function,
}

/// A violation of the checked property.
///
/// * tail basis: `threshold` is the grid threshold `y` (stochastic
///   monotonicity) or the shift `y` in `x + y` (Condition 1); `gap` is a
///   probability.
/// * quantile basis: `threshold` is the level `u`; `gap` is in state units.
/// * supermodularity: `x1 < x2` are first coordinates, `threshold` is the
///   lower second coordinate of the violating square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x1: f64,
    pub x2: f64,
    pub threshold: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: Property,
    pub basis: Basis,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub tolerance: f64,
}

impl CheckReport {
    fn from_worst(property: Property, basis: Basis, tol: f64, worst: Option<Witness>) -> Self {
        CheckReport {
            property,
            basis,
            passed: worst.is_none(),
            witness: worst,
            tolerance: tol,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({:?}, tol {:e})", self.property, self.basis, self.tolerance)?;
        if let Some(w) = &self.witness {
            write!(
                f,
                " witness x1={} x2={} threshold={} gap={:e}",
                w.x1, w.x2, w.threshold, w.gap
            )?;
        }
        Ok(())
    }
}

fn keep_worst(worst: &mut Option<Witness>, candidate: Witness) {
    if worst.is_none_or(|w| candidate.gap > w.gap) {
        *worst = Some(candidate);
    }
}

/// Stochastic monotonicity: `p(x, (y, ∞))` nondecreasing in `x` for every `y`.
///
/// Consecutive state pairs suffice by transitivity.
pub fn check_stoch_monotone(kernel: &FiniteKernel, tol: f64) -> CheckReport {
    let table = GeneralizedInverseTable::new(kernel);
    stoch_monotone_on(&table, tol)
}

fn stoch_monotone_on(table: &GeneralizedInverseTable, tol: f64) -> CheckReport {
    let space = table.space();
    let n = space.len();
    let mut worst = None;
    for i in 0..n.saturating_sub(1) {
        for j in 0..n {
            // tail(x_i, y) - tail(x_{i+1}, y) = F_{i+1}(y) - F_i(y)
            let gap = table.cdf(i + 1, j) - table.cdf(i, j);
            if gap > tol {
                keep_worst(
                    &mut worst,
                    Witness {
                        x1: space.state(i),
                        x2: space.state(i + 1),
                        threshold: space.state(j),
                        gap,
                    },
                );
            }
        }
    }
    CheckReport::from_worst(Property::StochMonotone, Basis::Tail, tol, worst)
}

/// Condition 1: `p(x, (x + y, ∞))` nonincreasing in `x` for every real `y`.
///
/// Tails are step functions of `y`, so for each consecutive pair the scan over
/// the shifted grids `{s - x1} ∪ {s - x2}` is exhaustive.
pub fn check_condition1(kernel: &FiniteKernel, tol: f64) -> CheckReport {
    let table = GeneralizedInverseTable::new(kernel);
    condition1_on(&table, tol)
}

fn condition1_on(table: &GeneralizedInverseTable, tol: f64) -> CheckReport {
    let space = table.space();
    let n = space.len();
    let mut worst = None;
    for i in 0..n.saturating_sub(1) {
        let (x1, x2) = (space.state(i), space.state(i + 1));
        let shifts = space
            .states()
            .iter()
            .map(|s| s - x1)
            .chain(space.states().iter().map(|s| s - x2));
        for y in shifts {
            // tail(x2, x2+y) - tail(x1, x1+y) = F_1(x1+y) - F_2(x2+y)
            let gap = table.cdf_at(i, x1 + y) - table.cdf_at(i + 1, x2 + y);
            if gap > tol {
                keep_worst(
                    &mut worst,
                    Witness {
                        x1,
                        x2,
                        threshold: y,
                        gap,
                    },
                );
            }
        }
    }
    CheckReport::from_worst(Property::Condition1, Basis::Tail, tol, worst)
}

/// Level grid for the quantile scans: `k · 1e-4` plus the jump levels of both rows.
fn scan_levels(table: &GeneralizedInverseTable, rows: [usize; 2]) -> Vec<f64> {
    let steps = (1.0 / LEVEL_GRID_STEP).round() as usize;
    let mut levels: Vec<f64> = (1..=steps).map(|k| k as f64 * LEVEL_GRID_STEP).collect();
    for r in rows {
        levels.extend(table.jump_levels(r));
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

/// Generalized-inverse characterizations of both kernel properties:
/// `G(x, u)` nondecreasing in `x`, and `G(x, u) - x` nonincreasing in `x`.
///
/// With slack `tol` on the probability scale the scans test
/// `G(x1, u - tol) <= G(x2, u)` and `G(x2, u - tol) - x2 <= G(x1, u) - x1`,
/// which are exactly equivalent to the tail checks at the same tolerance.
/// Returns `(monotone, condition1)` reports with [`Basis::Quantile`].
pub fn check_ginv_monotone(kernel: &FiniteKernel, tol: f64) -> (CheckReport, CheckReport) {
    let table = GeneralizedInverseTable::new(kernel);
    let space = table.space();
    let n = space.len();
    let eps = space.snap_eps();
    let mut worst_mono = None;
    let mut worst_c1 = None;
    for i in 0..n.saturating_sub(1) {
        let (x1, x2) = (space.state(i), space.state(i + 1));
        for u in scan_levels(&table, [i, i + 1]) {
            let g1_lo = space.state(table.query_index_unchecked(i, u - tol));
            let g2 = space.state(table.query_index_unchecked(i + 1, u));
            if g1_lo > g2 {
                keep_worst(
                    &mut worst_mono,
                    Witness {
                        x1,
                        x2,
                        threshold: u,
                        gap: g1_lo - g2,
                    },
                );
            }
            let g1 = space.state(table.query_index_unchecked(i, u));
            let g2_lo = space.state(table.query_index_unchecked(i + 1, u - tol));
            let gap = (g2_lo - x2) - (g1 - x1);
            if gap > eps {
                keep_worst(
                    &mut worst_c1,
                    Witness {
                        x1,
                        x2,
                        threshold: u,
                        gap,
                    },
                );
            }
        }
    }
    (
        CheckReport::from_worst(Property::StochMonotone, Basis::Quantile, tol, worst_mono),
        CheckReport::from_worst(Property::Condition1, Basis::Quantile, tol, worst_c1),
    )
}

/// Supermodularity of `h` on the lattice `grid_x × grid_y`, tested on
/// consecutive 2×2 squares (the inequality telescopes across the lattice).
pub fn check_supermodular<H>(h: H, grid_x: &[f64], grid_y: &[f64], tol: f64) -> Result<CheckReport>
where
    H: Fn(f64, f64) -> f64,
{
    for (name, g) in [("x", grid_x), ("y", grid_y)] {
        if g.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("{name} grid is not strictly increasing")));
        }
    }
    let ny = grid_y.len();
    let mut table = Vec::with_capacity(grid_x.len() * ny);
    for &x in grid_x {
        for &y in grid_y {
            let v = h(x, y);
            if !v.is_finite() {
                return Err(Error::Domain(format!("h({x}, {y}) = {v} is not finite")));
            }
            table.push(v);
        }
    }
    let at = |i: usize, j: usize| table[i * ny + j];
    let mut worst = None;
    for i in 0..grid_x.len().saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            let gap = at(i, j + 1) + at(i + 1, j) - at(i, j) - at(i + 1, j + 1);
            if gap > tol {
                keep_worst(
                    &mut worst,
                    Witness {
                        x1: grid_x[i],
                        x2: grid_x[i + 1],
                        threshold: grid_y[j],
                        gap,
                    },
                );
            }
        }
    }
    Ok(CheckReport::from_worst(
        Property::Supermodular,
        Basis::Function,
        tol,
        worst,
    ))
}

/// Both tail-basis kernel checks.
pub fn check_kernel(kernel: &FiniteKernel, tol: f64) -> (CheckReport, CheckReport) {
    let table = GeneralizedInverseTable::new(kernel);
    (stoch_monotone_on(&table, tol), condition1_on(&table, tol))
}

/// Outcome of re-checking the product of a kernel sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub members_monotone: bool,
    pub members_condition1: bool,
    pub product_monotone: CheckReport,
    pub product_condition1: CheckReport,
    /// Accumulated tolerance used for the product checks.
    pub tol_budget: f64,
}

impl ClosureReport {
    /// The closure implication holds: members passing a check implies the
    /// product passes it. A failure here is tolerance leakage.
    pub fn holds(&self) -> bool {
        (!self.members_monotone || self.product_monotone.passed)
            && (!self.members_condition1 || self.product_condition1.passed)
    }
}

/// Composes the whole sequence and re-runs both checks on the product with
/// budget `len · member_tol`.
pub fn check_closure(seq: &KernelSequence, member_tol: f64) -> ClosureReport {
    let mut members_monotone = true;
    let mut members_condition1 = true;
    for k in seq.kernels() {
        let (m, c) = check_kernel(k, member_tol);
        members_monotone &= m.passed;
        members_condition1 &= c.passed;
    }
    let budget = member_tol * seq.len() as f64;
    let (product_monotone, product_condition1) = check_kernel(&seq.product(), budget);
    ClosureReport {
        members_monotone,
        members_condition1,
        product_monotone,
        product_condition1,
        tol_budget: budget,
    }
}
