mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use semicrossed::crossed::{cross_mul, cross_star};
use semicrossed::dfk::{gamma_apply, pi_map, DfkIdealFamily};
use semicrossed::dilation::{shifted_unit, sup_norm_sqr};
use semicrossed::gen::{random_chain_system, random_product_system};
use semicrossed::lattice::{c_coefficients, grid_closure};
use semicrossed::shilov::{shilov_subspace, tower_subspace};
use semicrossed::{ClassicalSystem, CrossedElement, DilationElement, Exec, GroupPoint, OrderSpec};

fn order_strategy() -> impl Strategy<Value = OrderSpec> {
    prop_oneof![
        (1usize..=3).prop_map(|r| OrderSpec::product(r).unwrap()),
        (1usize..=3).prop_map(|r| OrderSpec::lex(r).unwrap()),
        Just(OrderSpec::chain(vec![1, 2, 6]).unwrap()),
    ]
}

fn point(rank: usize) -> impl Strategy<Value = GroupPoint> {
    prop::collection::vec(-4i64..=4, rank).prop_map(GroupPoint)
}

fn order_and_points(k: usize) -> impl Strategy<Value = (OrderSpec, Vec<GroupPoint>)> {
    order_strategy().prop_flat_map(move |o| {
        let r = o.rank();
        (Just(o), prop::collection::vec(point(r), k))
    })
}

/// A random system of the given kind: 0 rank-1 product, 1 rank-2 product,
/// 2 two-level chain.
fn system(seed: u64, kind: u8, max_points: usize) -> (ChaCha8Rng, ClassicalSystem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_points);
    let sys = match kind % 3 {
        0 => random_product_system(&mut rng, n, 1, false),
        1 => random_product_system(&mut rng, n, 2, false),
        _ => random_chain_system(&mut rng, n, &[1, 2], false),
    };
    (rng, sys)
}

fn nonpositive(mut x: DilationElement, sys: &ClassicalSystem) -> DilationElement {
    if let Some((_, hi)) = x.corners() {
        let s = sys.order().join_of(&hi, &sys.zero());
        x = x.shift(&s);
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_laws((o, p) in order_and_points(3)) {
        let (g, h, k) = (&p[0], &p[1], &p[2]);
        let j = o.join_of(g, h);
        let m = o.meet_of(g, h);
        prop_assert_eq!(&j, &o.join_of(h, g));
        prop_assert!(o.le(g, &j) && o.le(h, &j) && o.le(&m, g) && o.le(&m, h));
        prop_assert_eq!(o.join_of(&j, k), o.join_of(g, &o.join_of(h, k)));
        prop_assert_eq!(&o.join_of(g, &o.meet_of(g, h)), g);
        prop_assert_eq!(o.join_of(&(g + k), &(h + k)), &j + k);
        // j is the least upper bound among the three
        if o.le(g, k) && o.le(h, k) {
            prop_assert!(o.le(&j, k));
        }
        prop_assert_eq!(o.le(g, h) && o.le(h, g), g == h);
        prop_assert_eq!(&(g + &(-g)), &o.zero());
    }

    #[test]
    fn closure_and_coefficients((o, p) in order_and_points(3)) {
        let grid = grid_closure(&p, &o).unwrap();
        for g in grid.iter() {
            for h in grid.iter() {
                prop_assert!(grid.contains(&o.join_of(g, h)));
            }
        }
        let c = c_coefficients(&grid, &o).unwrap();
        for g in grid.iter() {
            let s: i64 = grid.iter().filter(|h| o.le(h, g)).map(|h| c[h]).sum();
            prop_assert_eq!(s, 1);
        }
    }

    #[test]
    fn action_law(seed in any::<u64>(), kind in 0u8..3) {
        let (mut rng, sys) = system(seed, kind, 6);
        let v = GroupPoint((0..sys.rank()).map(|_| rng.random_range(0..12)).collect());
        let w = GroupPoint((0..sys.rank()).map(|_| rng.random_range(0..12)).collect());
        let f = random_function(&mut rng, sys.points());
        let vw = sys.apply_exponent(&(&v + &w), &f).unwrap();
        let step = sys.apply_exponent(&v, &sys.apply_exponent(&w, &f).unwrap()).unwrap();
        prop_assert_eq!(vw, step);
        for (i, per) in sys.periodicity().iter().enumerate() {
            let g = sys.action_generator(i);
            prop_assert_eq!(g.power(per.index as u64), g.power(per.window() as u64));
        }
    }

    #[test]
    fn dilation_product_and_shift(seed in any::<u64>(), kind in 0u8..3) {
        let (mut rng, sys) = system(seed, kind, 4);
        let x = random_element(&mut rng, &sys, 3, 2);
        let y = random_element(&mut rng, &sys, 3, 2);
        let g = random_point(&mut rng, sys.rank(), 2);
        let xy = x.multiply(&sys, &y);
        let box_lo = GroupPoint(vec![-4; sys.rank()]);
        let box_hi = GroupPoint(vec![8; sys.rank()]);
        for h in semicrossed::lattice::enum_box(&box_lo, &box_hi, sys.order()).unwrap() {
            prop_assert_eq!(
                xy.entry_at(&sys, &h),
                x.entry_at(&sys, &h).pointwise_mul(&y.entry_at(&sys, &h))
            );
            prop_assert_eq!(x.shift(&g).entry_at(&sys, &h), x.entry_at(&sys, &(&h + &g)));
        }
        prop_assert_eq!(xy.shift(&g), x.shift(&g).multiply(&sys, &y.shift(&g)));
        prop_assert_eq!(x.adjoint().adjoint(), x.clone());
        prop_assert_eq!(xy.adjoint(), y.adjoint().multiply(&sys, &x.adjoint()));
    }

    #[test]
    fn norms(seed in any::<u64>(), kind in 0u8..3) {
        let (mut rng, sys) = system(seed, kind, 4);
        let x = random_element(&mut rng, &sys, 3, 2);
        let n = sup_norm_sqr(&sys, &x);
        // C*-identity on squared norms: |x*x|^2 = (|x|^2)^2
        let xsx = x.adjoint().multiply(&sys, &x);
        prop_assert_eq!(sup_norm_sqr(&sys, &xsx), &n * &n);
        prop_assert_eq!(x.sup_norm_sqr(&sys, Exec::Sequential), x.sup_norm_sqr(&sys, Exec::Parallel));
        if let Some((lo, hi)) = x.evaluation_box(&sys) {
            let pad = sys.periodicity_bound() as i64 + 3;
            let lo2 = GroupPoint(lo.0.iter().map(|c| c - pad).collect());
            let hi2 = GroupPoint(hi.0.iter().map(|c| c + pad).collect());
            prop_assert_eq!(x.sup_norm_sqr_on(&sys, &lo2, &hi2, Exec::Sequential), n.clone());
        }
        let p = GroupPoint((0..sys.rank()).map(|_| rng.random_range(0..4)).collect());
        let e = shifted_unit(&sys, &p);
        prop_assert_eq!(e.multiply(&sys, &x), x.multiply(&sys, &e));
    }

    #[test]
    fn crossed_laws(seed in any::<u64>(), kind in 0u8..3) {
        let (mut rng, sys) = system(seed, kind, 3);
        let mut mono = || {
            let g = random_point(&mut rng, sys.rank(), 2);
            CrossedElement::monomial(g, random_element(&mut rng, &sys, 2, 1))
        };
        let (x, y, z) = (mono(), mono(), mono());
        let x2 = x.add(&sys, &mono());
        prop_assert_eq!(
            cross_mul(&sys, &cross_mul(&sys, &x2, &y), &z),
            cross_mul(&sys, &x2, &cross_mul(&sys, &y, &z))
        );
        prop_assert_eq!(
            cross_star(&cross_mul(&sys, &x2, &y)),
            cross_mul(&sys, &cross_star(&y), &cross_star(&x2))
        );
        prop_assert_eq!(cross_star(&cross_star(&x2)), x2);
    }

    #[test]
    fn dfk_representation(seed in any::<u64>(), rank in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4);
        let sys = random_product_system(&mut rng, n, rank, false);
        let fam = DfkIdealFamily::new(&sys).unwrap();
        let x = nonpositive(random_element(&mut rng, &sys, 3, 2), &sys);
        let y = nonpositive(random_element(&mut rng, &sys, 3, 2), &sys);
        let px = pi_map(&sys, &fam, &x).unwrap();
        let py = pi_map(&sys, &fam, &y).unwrap();
        prop_assert_eq!(pi_map(&sys, &fam, &x.multiply(&sys, &y)).unwrap(), px.mul(&fam, &py));
        prop_assert_eq!(pi_map(&sys, &fam, &x.add(&sys, &y)).unwrap(), {
            let mut s = px.clone();
            for (k, a) in py.summands() {
                s.add_term(&fam, k.clone(), a);
            }
            s
        });
        prop_assert!(px.max_norm_sqr() <= sup_norm_sqr(&sys, &x));
        for i in 0..rank {
            let moved = pi_map(&sys, &fam, &x.shift(&sys.unit(i))).unwrap();
            let gx = gamma_apply(&sys, &fam, i, &px);
            prop_assert_eq!(&moved, &gx);
            prop_assert_eq!(gx.is_zero(), px.is_zero());
        }
    }

    #[test]
    fn tower_monotone(seed in any::<u64>(), kind in 0u8..3) {
        let (mut rng, sys) = system(seed, kind, 4);
        let grid = random_grid(&mut rng, &sys, 3, 1);
        let w1 = vec![random_point(&mut rng, sys.rank(), 2)];
        let mut w2 = w1.clone();
        w2.push(random_point(&mut rng, sys.rank(), 2));
        let small = tower_subspace(&sys, &grid, &w1).unwrap();
        let large = tower_subspace(&sys, &grid, &w2).unwrap();
        prop_assert!(small.space().is_subspace_of(large.space()));
        let shilov = shilov_subspace(&sys, &grid).unwrap();
        prop_assert!(large.space().is_subspace_of(shilov.space()));
    }
}
