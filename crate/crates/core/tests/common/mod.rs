#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use semicrossed::lattice::grid_closure;
use semicrossed::{ClassicalSystem, DilationElement, Grid, GroupPoint, OrderSpec, PointMap, ScalarFunction};

pub fn worked_example() -> ClassicalSystem {
    ClassicalSystem::new(
        OrderSpec::product(2).unwrap(),
        3,
        vec![
            PointMap::from_one_based(&[1, 3, 3]),
            PointMap::from_one_based(&[3, 2, 3]),
        ],
    )
    .unwrap()
}

pub fn collapse() -> ClassicalSystem {
    let psi = PointMap::from_one_based(&[3, 3, 3]);
    ClassicalSystem::new(
        OrderSpec::chain(vec![1, 2]).unwrap(),
        3,
        vec![psi.power(2), psi],
    )
    .unwrap()
}

pub fn gp(c: &[i64]) -> GroupPoint {
    GroupPoint::new(c.to_vec())
}

pub fn random_point<R: Rng>(rng: &mut R, rank: usize, radius: i64) -> GroupPoint {
    GroupPoint((0..rank).map(|_| rng.random_range(-radius..=radius)).collect())
}

/// Join closure of a few random points, redrawn until it fits `max_points`.
pub fn random_grid<R: Rng>(rng: &mut R, sys: &ClassicalSystem, max_points: usize, radius: i64) -> Grid {
    loop {
        let k = rng.random_range(1..=max_points.min(3));
        let pts: Vec<GroupPoint> = (0..k).map(|_| random_point(rng, sys.rank(), radius)).collect();
        let grid = grid_closure(&pts, sys.order()).unwrap();
        if grid.len() <= max_points {
            return grid;
        }
    }
}

pub fn random_function<R: Rng>(rng: &mut R, n: usize) -> ScalarFunction {
    let v: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
    ScalarFunction::from_ints(&v)
}

pub fn random_element<R: Rng>(rng: &mut R, sys: &ClassicalSystem, max_points: usize, radius: i64) -> DilationElement {
    let grid = random_grid(rng, sys, max_points, radius);
    let coeffs: BTreeMap<GroupPoint, ScalarFunction> = grid
        .iter()
        .map(|g| (g.clone(), random_function(rng, sys.points())))
        .collect();
    DilationElement::from_coeffs(sys, coeffs).unwrap()
}
