use super::{
    absorbed_poisson, birth_death_skeleton, constant_xi, dam_skeleton, default_skeleton_step,
    reflected_walk, shot_noise_skeleton, state_dependent_walk, two_sided_reflected_walk,
    BirthDeathSpec, GridRounding, IncrementDistribution, JumpDistribution, WalkSpec, ZooModel,
    DEFAULT_TRUNC_TOL,
};
use crate::error::Result;
use crate::space::OrderedStateSpace;

/// One instance of every constructor, sized for dense O(n³) analysis, plus
/// instances built to fail a check. Names are unique and the order is fixed.
pub fn standard_battery() -> Result<Vec<ZooModel>> {
    let simple = |p| IncrementDistribution::simple(p);
    let five = IncrementDistribution::new(vec![(-2, 0.3), (-1, 0.25), (0, 0.2), (1, 0.15), (2, 0.1)])?;
    let five_up = IncrementDistribution::new(vec![(-2, 0.1), (-1, 0.2), (0, 0.2), (1, 0.3), (2, 0.2)])?;

    let mut out = vec![
        named(reflected_walk(&simple(0.3)?, 30)?, "reflected-walk-p0.3"),
        named(reflected_walk(&simple(0.45)?, 40)?, "reflected-walk-p0.45"),
        named(reflected_walk(&five, 40)?, "reflected-walk-5pt"),
        named(
            reflected_walk(&IncrementDistribution::new(vec![(0, 1.0)])?, 7)?,
            "reflected-walk-zero",
        ),
        named(two_sided_reflected_walk(&simple(0.5)?, 5)?, "two-sided-p0.5-b5"),
        named(two_sided_reflected_walk(&five_up, 20)?, "two-sided-5pt-b20"),
    ];

    let n = 25;
    let p: Vec<f64> = (0..n).map(|i| 0.4 - 0.01 * i as f64).collect();
    let q: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 0.3 + 0.015 * i as f64 }).collect();
    out.push(named(state_dependent_walk(&WalkSpec::from_up_down(p, q)?)?, "walk-graded"));
    out.push(named(
        state_dependent_walk(&WalkSpec::from_up_down(
            vec![0.1, 0.4, 0.3, 0.3, 0.2, 0.0],
            vec![0.0, 0.2, 0.3, 0.4, 0.4, 0.5],
        )?)?,
        "walk-p-rises",
    ));
    out.push(named(
        state_dependent_walk(&WalkSpec::from_up_down(
            vec![0.8, 0.1, 0.1, 0.0],
            vec![0.0, 0.5, 0.5, 0.5],
        )?)?,
        "walk-not-monotone",
    ));

    let mm1 = BirthDeathSpec::constant(0.6, 1.0, 30)?;
    out.push(named(birth_death_skeleton(&mm1, 0.5, DEFAULT_TRUNC_TOL)?, "bd-queue-t0.5"));
    out.push(named(
        birth_death_skeleton(&mm1, default_skeleton_step(&mm1), DEFAULT_TRUNC_TOL)?,
        "bd-queue-small-step",
    ));
    let death = BirthDeathSpec::new(vec![0.0; 15], (0..15).map(|i| 0.2 * i as f64).collect())?;
    out.push(named(birth_death_skeleton(&death, 1.0, DEFAULT_TRUNC_TOL)?, "bd-pure-death"));
    let graded = BirthDeathSpec::new(
        (0..20).map(|i| 1.2 - 0.04 * i as f64).collect(),
        (0..20).map(|i| if i == 0 { 0.0 } else { 0.8 + 0.03 * i as f64 }).collect(),
    )?;
    out.push(named(birth_death_skeleton(&graded, 1.0, DEFAULT_TRUNC_TOL)?, "bd-graded"));
    let rising = BirthDeathSpec::new(
        (0..12).map(|i| 0.2 + 0.1 * i as f64).collect(),
        (0..12).map(|i| if i == 0 { 0.0 } else { 1.5 }).collect(),
    )?;
    out.push(named(
        birth_death_skeleton(&rising, default_skeleton_step(&rising), DEFAULT_TRUNC_TOL)?,
        "bd-rising-births",
    ));

    let grid = OrderedStateSpace::uniform(0.0, 6.0, 61)?;
    let jumps = JumpDistribution::new(vec![(0.5, 0.5), (1.0, 0.5)])?;
    out.push(named(
        shot_noise_skeleton(1.0, &jumps, 1.0, 0.05, &grid, GridRounding::Split)?,
        "shot-noise-split",
    ));
    out.push(named(
        shot_noise_skeleton(1.0, &jumps, 1.0, 0.05, &grid, GridRounding::Nearest)?,
        "shot-noise-nearest",
    ));
    out.push(named(
        dam_skeleton(|x| 0.6 * x + 0.3 * x.sqrt(), &jumps, 1.0, 0.05, &grid, GridRounding::Split)?,
        "dam-concave-release",
    ));

    out.push(named(absorbed_poisson(0, 2, 1.0, 0.25)?, "absorbed-poisson-m2"));
    out.push(named(absorbed_poisson(0, 8, 1.5, 0.25)?, "absorbed-poisson-m8"));
    out.push(named(
        constant_xi(vec![0.0, 1.0, 2.0, 4.0], vec![0.1, 0.4, 0.3, 0.2])?,
        "constant-xi",
    ));
    Ok(out)
}

fn named(mut model: ZooModel, name: &str) -> ZooModel {
    model.name = name.to_string();
    model
}
