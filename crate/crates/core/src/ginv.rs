//! Generalized inverses `G(x, u) = inf { y : F_x(y) >= u }` of kernel rows.

use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::matrix::Matrix;
use crate::space::OrderedStateSpace;

/// Per-state CDF rows of a kernel, supporting quantile queries.
///
/// Every row ends at exactly 1 from its last positive-mass state onward, so
/// `G(x, 1)` is the largest state carrying mass and the Galois property
/// `G(x,u) <= y  <=>  u <= F_x(y)` holds exactly against the stored rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedInverseTable {
    space: OrderedStateSpace,
    cdf: Matrix,
}

impl GeneralizedInverseTable {
    pub fn new(kernel: &FiniteKernel) -> Self {
        let n = kernel.len();
        let mut cdf = Matrix::zeros(n);
        for i in 0..n {
            let row = kernel.row(i);
            let last = row.iter().rposition(|&p| p > 0.0).unwrap_or(n - 1);
            let out = cdf.row_mut(i);
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j];
                out[j] = if j >= last { 1.0 } else { acc.min(1.0) };
            }
        }
        GeneralizedInverseTable {
            space: kernel.space().clone(),
            cdf,
        }
    }

    pub fn space(&self) -> &OrderedStateSpace {
        &self.space
    }

    /// `F_{x_i}(x_j) = p(x_i, (-∞, x_j])`.
    #[inline]
    pub fn cdf(&self, i: usize, j: usize) -> f64 {
        self.cdf.get(i, j)
    }

    #[inline]
    pub fn cdf_row(&self, i: usize) -> &[f64] {
        self.cdf.row(i)
    }

    /// `F_{x_i}(z)` at an arbitrary real `z` (step function, right-continuous).
    pub fn cdf_at(&self, i: usize, z: f64) -> f64 {
        match self.space.floor_index(z) {
            None => 0.0,
            Some(j) => self.cdf.get(i, j),
        }
    }

    /// Index of `G(x_i, u)` without domain checks; `u <= 0` maps to the first
    /// state carrying mass.
    #[inline]
    pub fn query_index_unchecked(&self, i: usize, u: f64) -> usize {
        let row = self.cdf.row(i);
        let k = row.partition_point(|&f| f < u);
        if k < row.len() {
            k
        } else {
            row.len() - 1
        }
    }

    /// Index of `G(x_i, u)` for `u` in `(0, 1]`.
    pub fn query_index(&self, i: usize, u: f64) -> Result<usize> {
        check_level(u)?;
        if i >= self.space.len() {
            return Err(Error::Domain(format!("state index {i} out of range")));
        }
        Ok(self.query_index_unchecked(i, u))
    }

    /// `G(x, u)` for a grid state `x` and `u` in `(0, 1]`.
    pub fn query(&self, x: f64, u: f64) -> Result<f64> {
        let i = self
            .space
            .index_of(x)
            .ok_or_else(|| Error::Domain(format!("{x} is not a grid state")))?;
        Ok(self.space.state(self.query_index(i, u)?))
    }

    /// Distinct positive values taken by row `i` of the CDF, i.e. the levels
    /// at which `G(x_i, ·)` jumps.
    pub fn jump_levels(&self, i: usize) -> Vec<f64> {
        let mut levels: Vec<f64> = self.cdf.row(i).iter().copied().filter(|&f| f > 0.0).collect();
        levels.dedup();
        levels
    }
}

fn check_level(u: f64) -> Result<()> {
    if u > 0.0 && u <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("quantile level {u} outside (0, 1]")))
    }
}

/// Convenience wrapper for [`GeneralizedInverseTable::new`].
pub fn build_ginv(kernel: &FiniteKernel) -> GeneralizedInverseTable {
    GeneralizedInverseTable::new(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: i64) -> OrderedStateSpace {
        OrderedStateSpace::integers(0, n - 1).unwrap()
    }

    #[test]
    fn identity_rows_are_point_masses() {
        let t = build_ginv(&FiniteKernel::identity(space(3)));
        for x in 0..3 {
            for &u in &[1e-9, 0.3, 0.5, 1.0] {
                assert_eq!(t.query(x as f64, u).unwrap(), x as f64);
            }
        }
    }

    #[test]
    fn left_continuous_at_atom_boundary() {
        let k = FiniteKernel::new(space(2), vec![vec![0.4, 0.6], vec![0.5, 0.5]]).unwrap();
        let t = build_ginv(&k);
        assert_eq!(t.query(0.0, 0.4).unwrap(), 0.0);
        assert_eq!(t.query(0.0, 0.400001).unwrap(), 1.0);
        assert_eq!(t.query(1.0, 0.5).unwrap(), 0.0);
        assert_eq!(t.query(1.0, 0.75).unwrap(), 1.0);
    }

    #[test]
    fn level_one_is_essential_supremum() {
        // trailing zero-mass states must not be returned for u = 1
        let k = FiniteKernel::new(
            space(4),
            vec![
                vec![0.1, 0.2, 0.7, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.3, 0.3, 0.3, 0.1],
                vec![0.0, 0.0, 0.0, 1.0],
            ],
        )
        .unwrap();
        let t = build_ginv(&k);
        assert_eq!(t.query(0.0, 1.0).unwrap(), 2.0);
        assert_eq!(t.query(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(t.query(2.0, 1.0).unwrap(), 3.0);
    }

    #[test]
    fn zero_mass_ties_resolve_to_smallest_index() {
        let k = FiniteKernel::new(
            space(3),
            vec![vec![0.5, 0.0, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.0, 0.5]],
        )
        .unwrap();
        let t = build_ginv(&k);
        assert_eq!(t.query(0.0, 0.5).unwrap(), 0.0);
        assert_eq!(t.query(0.0, 0.5000001).unwrap(), 2.0);
    }

    #[test]
    fn domain_errors() {
        let t = build_ginv(&FiniteKernel::identity(space(2)));
        assert!(matches!(t.query(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(t.query(0.0, 1.5), Err(Error::Domain(_))));
        assert!(matches!(t.query(0.0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(t.query(0.5, 0.5), Err(Error::Domain(_))));
    }
}
