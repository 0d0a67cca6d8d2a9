use serde::{Deserialize, Serialize};

use super::stationary;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

/// Two sides of an expectation inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Tolerance on the invariant law of `p1`.
const STATIONARY_TOL: f64 = 1e-11;

fn check_spaces(kernels: &[&FiniteKernel]) -> Result<()> {
    let first = kernels[0].space();
    if kernels.iter().any(|k| k.space() != first) {
        return Err(Error::Shape("kernels live on different state spaces".into()));
    }
    Ok(())
}

/// Exact triple sums for `X_0 ~ π_1`, `X_1 ~ p_1(X_0, ·)`, `X_2 ~ p_2(X_1, ·)`:
/// `lhs = E h(X_0, X_2)`, `rhs = E h(X_1, X_2)`.
pub fn three_point_check(
    p1: &FiniteKernel,
    p2: &FiniteKernel,
    h: impl Fn(f64, f64) -> f64,
) -> Result<InequalityCheck> {
    check_spaces(&[p1, p2])?;
    let pi = stationary(p1, STATIONARY_TOL)?;
    let s = p1.space().states();
    let n = s.len();
    let hv: Vec<f64> = (0..n * n).map(|k| h(s[k / n], s[k % n])).collect();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for x0 in 0..n {
        let w0 = pi.mass()[x0];
        if w0 == 0.0 {
            continue;
        }
        for x1 in 0..n {
            let w1 = w0 * p1.prob(x0, x1);
            if w1 == 0.0 {
                continue;
            }
            for x2 in 0..n {
                let w2 = w1 * p2.prob(x1, x2);
                lhs += w2 * hv[x0 * n + x2];
                rhs += w2 * hv[x1 * n + x2];
            }
        }
    }
    Ok(InequalityCheck { lhs, rhs })
}

/// Exact sums over `X_0 ~ π_1 → X_1 → X_2 → X_3` (kernels `p_1, p_2, p_3`):
/// `lhs = E h(X_0, X_2 − X_3)`, `rhs = E h(X_1, X_2 − X_3)`.
///
/// The quadruple sum is evaluated as nested partial sums
/// `V(x1, a) = Σ_{x2} p_2(x1, x2) Σ_{x3} p_3(x2, x3) h(a, x2 − x3)`, O(n³).
pub fn four_point_check(
    p1: &FiniteKernel,
    p2: &FiniteKernel,
    p3: &FiniteKernel,
    h: impl Fn(f64, f64) -> f64,
) -> Result<InequalityCheck> {
    check_spaces(&[p1, p2, p3])?;
    let pi = stationary(p1, STATIONARY_TOL)?;
    let s = p1.space().states();
    let n = s.len();
    // w[x2 * n + a] = Σ_{x3} p3(x2, x3) h(s_a, s_x2 − s_x3)
    let mut w = vec![0.0; n * n];
    for x2 in 0..n {
        for x3 in 0..n {
            let p = p3.prob(x2, x3);
            if p == 0.0 {
                continue;
            }
            let d = s[x2] - s[x3];
            for a in 0..n {
                w[x2 * n + a] += p * h(s[a], d);
            }
        }
    }
    let mut v = vec![0.0; n * n];
    for x1 in 0..n {
        for x2 in 0..n {
            let p = p2.prob(x1, x2);
            if p == 0.0 {
                continue;
            }
            for a in 0..n {
                v[x1 * n + a] += p * w[x2 * n + a];
            }
        }
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for x0 in 0..n {
        let w0 = pi.mass()[x0];
        if w0 == 0.0 {
            continue;
        }
        for x1 in 0..n {
            let w1 = w0 * p1.prob(x0, x1);
            lhs += w1 * v[x1 * n + x0];
            rhs += w1 * v[x1 * n + x1];
        }
    }
    Ok(InequalityCheck { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::OrderedStateSpace;

    fn walk(p: f64, n: i64) -> FiniteKernel {
        let last = n as usize;
        FiniteKernel::from_fn(OrderedStateSpace::integers(0, n).unwrap(), |i| {
            let mut row = vec![0.0; last + 1];
            row[(i + 1).min(last)] += p;
            row[i.saturating_sub(1)] += 1.0 - p;
            row
        })
        .unwrap()
    }

    fn brute_four(p1: &FiniteKernel, p2: &FiniteKernel, p3: &FiniteKernel, h: impl Fn(f64, f64) -> f64) -> (f64, f64) {
        let pi = stationary(p1, 1e-12).unwrap();
        let s = p1.space().states();
        let n = s.len();
        let (mut l, mut r) = (0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let w = pi.mass()[a] * p1.prob(a, b) * p2.prob(b, c) * p3.prob(c, d);
                        l += w * h(s[a], s[c] - s[d]);
                        r += w * h(s[b], s[c] - s[d]);
                    }
                }
            }
        }
        (l, r)
    }

    #[test]
    fn identity_second_kernel_reduces_to_comonotone_bound() {
        let k = walk(0.3, 10);
        let id = FiniteKernel::identity(k.space().clone());
        let r = three_point_check(&k, &id, |x, y| x * y).unwrap();
        let pi = stationary(&k, 1e-12).unwrap();
        // rhs = E X_1^2 = E X_0^2 under stationarity
        assert!((r.rhs - pi.expect(|x| x * x)).abs() < 1e-12);
        assert!(r.holds(1e-12));
    }

    #[test]
    fn reflected_walks_satisfy_three_point() {
        let r = three_point_check(&walk(0.3, 15), &walk(0.2, 15), |x, y| x * y).unwrap();
        assert!(r.holds(1e-12), "{r:?}");
        assert!(r.slack() > 0.0);
    }

    #[test]
    fn four_point_matches_brute_force() {
        let (a, b, c) = (walk(0.3, 6), walk(0.25, 6), walk(0.4, 6));
        let h = |x: f64, d: f64| x.min(d) + 0.5 * x * d;
        let r = four_point_check(&a, &b, &c, h).unwrap();
        let (l, rr) = brute_four(&a, &b, &c, h);
        assert!((r.lhs - l).abs() < 1e-12 && (r.rhs - rr).abs() < 1e-12);
        assert!(r.holds(1e-12));
    }

    #[test]
    fn identity_third_kernel_makes_sides_equal() {
        let k = walk(0.3, 8);
        let id = FiniteKernel::identity(k.space().clone());
        let r = four_point_check(&k, &walk(0.2, 8), &id, |x, d| x * x + d).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12);
    }
}
