#![allow(dead_code)]

use monotone_markov::zoo::{standard_battery, state_dependent_walk, WalkSpec, ZooModel};
use monotone_markov::{Distribution, FiniteKernel, OrderedStateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random nearest-neighbour walk on `n` states. With `graded`, `p` is
/// nonincreasing and `q` nondecreasing, so both checks hold; otherwise the
/// entries are independent and either verdict is possible.
pub fn random_walk(rng: &mut ChaCha8Rng, n: usize, graded: bool, p_max: f64) -> ZooModel {
    let mut p: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..p_max)).collect();
    let mut q: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..(1.0 - p_max).min(0.5))).collect();
    q[0] = 0.0;
    if graded {
        p.sort_by(|a, b| b.total_cmp(a));
        q[1..].sort_by(f64::total_cmp);
    }
    let spec = WalkSpec::from_up_down(p, q).expect("valid walk");
    state_dependent_walk(&spec).expect("walk kernel")
}

/// Ten random tridiagonal kernels: graded, free with small `p`, and free
/// with large `p`.
pub fn random_tridiagonal(seed: u64) -> Vec<ZooModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..10)
        .map(|k| {
            let n = rng.random_range(5..=30);
            let (graded, p_max) = match k % 3 {
                0 => (true, 0.5),
                1 => (false, 0.5),
                _ => (false, 0.9),
            };
            let mut m = random_walk(&mut rng, n, graded, p_max);
            m.name = format!("random-tridiagonal-{k}");
            m
        })
        .collect()
}

/// The standard battery plus ten random tridiagonal kernels.
pub fn full_battery() -> Vec<ZooModel> {
    let mut all = standard_battery().expect("battery builds");
    all.extend(random_tridiagonal(0x7a11));
    all
}

/// Nondecreasing test functions of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum F {
    Id,
    Square,
    /// `1{x >= c}`.
    Step(f64),
}

impl F {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            F::Id => x,
            F::Square => x * x,
            F::Step(c) => {
                if x >= c {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Supermodular test functions of two variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H {
    Product,
    Min,
    Separable(F, F),
}

impl H {
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            H::Product => x * y,
            H::Min => x.min(y),
            H::Separable(f, g) => f.eval(x) * g.eval(y),
        }
    }
}

/// `{id, x², step}` with the step placed just above the median of `law`.
pub fn test_functions(law: &Distribution) -> [F; 3] {
    let s = law.space().states();
    let mut cum = 0.0;
    let mut k = s.len() - 1;
    for (i, m) in law.mass().iter().enumerate() {
        cum += m;
        if cum >= 0.5 {
            k = i;
            break;
        }
    }
    [F::Id, F::Square, F::Step(s[(k + 1).min(s.len() - 1)])]
}

/// `xy`, `min`, and every product `f1(x) f2(y)` other than `xy`.
pub fn test_bivariates(fs: &[F; 3]) -> Vec<H> {
    let mut out = vec![H::Product, H::Min];
    for &f in fs {
        for &g in fs {
            if !(f == F::Id && g == F::Id) {
                out.push(H::Separable(f, g));
            }
        }
    }
    out
}

pub fn tridiagonal(space: OrderedStateSpace, rows: &[(f64, f64)]) -> FiniteKernel {
    let n = rows.len();
    FiniteKernel::from_fn(space, |i| {
        let (q, p) = rows[i];
        let mut row = vec![0.0; n];
        if i > 0 {
            row[i - 1] = q;
        }
        if i + 1 < n {
            row[i + 1] = p;
        }
        row[i] = 1.0 - row.iter().sum::<f64>();
        row
    })
    .expect("valid tridiagonal kernel")
}
