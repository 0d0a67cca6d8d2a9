use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::Distribution;
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;

/// Closed communicating classes of the kernel's transition graph, each sorted,
/// ordered by smallest member. Their count is the dimension of the space of
/// invariant measures.
pub fn closed_classes(kernel: &FiniteKernel) -> Vec<Vec<usize>> {
    let n = kernel.len();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, n * 3);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for (j, &p) in kernel.row(i).iter().enumerate() {
            if p > 0.0 && i != j {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut class_of = vec![0usize; n];
    let sccs = tarjan_scc(&graph);
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            class_of[v.index()] = c;
        }
    }
    let mut closed: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter().all(|v| {
                let i = v.index();
                kernel
                    .row(i)
                    .iter()
                    .enumerate()
                    .all(|(j, &p)| p == 0.0 || class_of[j] == *c)
            })
        })
        .map(|(_, scc)| {
            let mut members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
            members.sort_unstable();
            members
        })
        .collect();
    closed.sort_by_key(|c| c[0]);
    closed
}

/// Invariant distribution `π` with `‖πP − π‖∞ <= tol`.
///
/// Solves `(Pᵀ − I) π = 0` with one balance equation replaced by the
/// normalization `Σ π = 1`, using a dense LU factorization. When the kernel
/// has several closed classes the invariant law is not unique; the solution
/// supported on the class containing the smallest state is returned with
/// `non_unique` set.
pub fn stationary(kernel: &FiniteKernel, tol: f64) -> Result<Distribution> {
    let n = kernel.len();
    let classes = closed_classes(kernel);
    let non_unique = classes.len() > 1;
    let support: Vec<usize> = if non_unique {
        classes[0].clone()
    } else {
        (0..n).collect()
    };

    let m = support.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    for (col, &i) in support.iter().enumerate() {
        for (row, &j) in support.iter().enumerate() {
            a[(row, col)] = kernel.prob(i, j) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for col in 0..m {
        a[(m - 1, col)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(m);
    b[m - 1] = 1.0;
    let solution = a.lu().solve(&b).ok_or_else(|| Error::Numerical {
        message: "singular balance system".into(),
        residual: f64::INFINITY,
    })?;

    let mut mass = vec![0.0; n];
    for (k, &i) in support.iter().enumerate() {
        let v = solution[k];
        if v < -tol {
            return Err(Error::Numerical {
                message: format!("negative stationary mass {v:e} at state index {i}"),
                residual: -v,
            });
        }
        mass[i] = v.max(0.0);
    }
    let total: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|p| *p /= total);

    let pushed = kernel.push_forward(&mass);
    let residual = pushed
        .iter()
        .zip(&mass)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::Numerical {
            message: "stationary residual exceeds tolerance".into(),
            residual,
        });
    }
    let mut dist = Distribution::with_tolerance(kernel.space().clone(), mass, tol.max(1e-12))?;
    dist.non_unique = non_unique;
    dist.residual = Some(residual);
    Ok(dist)
}
