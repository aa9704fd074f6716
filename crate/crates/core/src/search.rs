//! Seeded search over small systems for three finite patterns:
//!
//! * `subgroup`: the subgroup's boundary ideal is not `I ∩ C`;
//! * `boundary`: the naive set `B ∩ c_0(G, R_α^⊥)` meets `ι(A)`, so it is not
//!   a boundary ideal;
//! * `dist`: `dist(α_2^j(a), (ker α_1)^⊥)` stays away from zero for every
//!   large `j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynsys::{ClassicalSystem, PointMap, SystemFile};
use crate::error::{Error, Result};
use crate::gen::{
    all_maps, all_permutations, centralizer, chain_generators, random_chain_system,
    random_product_system,
};
use crate::lattice::{box_points, Grid, GroupPoint, OrderSpec};
use crate::par::Exec;
use crate::shilov::{subgroup_compat, CompatReport, SubgroupSpec};

pub const MAX_POINTS: usize = 8;
pub const MAX_RANK: usize = 2;
/// Above this many candidates the search samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Subgroup,
    Boundary,
    Dist,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subgroup" => Ok(Target::Subgroup),
            "boundary" => Ok(Target::Boundary),
            "dist" => Ok(Target::Dist),
            _ => Err(Error::InvalidArgument(format!(
                "unknown target {s:?}; expected subgroup, boundary or dist"
            ))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Subgroup => "subgroup",
            Target::Boundary => "boundary",
            Target::Dist => "dist",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub target: Target,
    pub order: OrderSpec,
    pub points: usize,
    pub bijective: bool,
    pub seed: u64,
    pub samples: usize,
    pub max_hits: usize,
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        self.order.validate()?;
        if self.points == 0 || self.points > MAX_POINTS {
            return Err(Error::InvalidArgument(format!(
                "points must be in 1..={MAX_POINTS}, got {}",
                self.points
            )));
        }
        match &self.order {
            OrderSpec::Product { rank } if *rank > MAX_RANK => Err(Error::InvalidArgument(
                format!("rank must be at most {MAX_RANK}, got {rank}"),
            )),
            OrderSpec::Lex { .. } => Err(Error::InvalidArgument(
                "search needs a product or chain order".into(),
            )),
            OrderSpec::Chain { levels } if levels.len() < 2 && self.target == Target::Subgroup => {
                Err(Error::InvalidArgument(
                    "subgroup on chains needs at least two levels".into(),
                ))
            }
            OrderSpec::Chain { .. } if self.target == Target::Dist => Err(Error::InvalidArgument(
                "dist needs a rank-2 product order".into(),
            )),
            OrderSpec::Product { rank } if *rank != 2 && self.target == Target::Dist => Err(
                Error::InvalidArgument("dist needs a rank-2 product order".into()),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Subgroup { report: Box<CompatReport> },
    /// `ι(a)` with `a = 1_T` lies in the naive `c_0` set.
    Boundary {
        points: Vec<usize>,
        eventual_image: Vec<usize>,
    },
    /// `a = 1_{im φ_1}` and, per residue `j` of the period, a point of
    /// `X \ im φ_1` that `φ_2^j` sends into `im φ_1`.
    Dist {
        window: Vec<(usize, usize)>,
        subgroup_violation: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub system: SystemFile,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub target: Target,
    pub order: OrderSpec,
    pub points: usize,
    pub bijective: bool,
    pub seed: u64,
    pub exhaustive: bool,
    pub candidates: usize,
    /// Distinct hits up to relabeling of points.
    pub hits_total: usize,
    pub hits: Vec<Hit>,
}

/// How many candidates a search would examine and whether it enumerates
/// them all; reported before any evaluation.
pub fn plan(params: &SearchParams) -> Result<(usize, bool)> {
    params.validate()?;
    let n = params.points;
    let maps = if params.bijective {
        (1..=n).product::<usize>()
    } else {
        n.pow(n as u32)
    };
    let full = match &params.order {
        OrderSpec::Product { rank: 2 } => maps.saturating_mul(maps),
        _ => maps,
    };
    if full <= EXHAUSTIVE_LIMIT {
        Ok((exhaustive_candidates(params).len(), true))
    } else {
        Ok((params.samples, false))
    }
}

fn exhaustive_candidates(params: &SearchParams) -> Vec<ClassicalSystem> {
    let n = params.points;
    let base = if params.bijective {
        all_permutations(n)
    } else {
        all_maps(n)
    };
    match &params.order {
        OrderSpec::Chain { levels } => base
            .iter()
            .map(|f| {
                ClassicalSystem::new(params.order.clone(), n, chain_generators(f, levels))
                    .expect("powers form a chain")
            })
            .collect(),
        OrderSpec::Product { rank: 1 } => base
            .into_iter()
            .map(|f| ClassicalSystem::new(params.order.clone(), n, vec![f]).expect("valid"))
            .collect(),
        _ => base
            .iter()
            .flat_map(|f| {
                centralizer(f, params.bijective).into_iter().map(move |g| {
                    ClassicalSystem::new(OrderSpec::Product { rank: 2 }, n, vec![f.clone(), g])
                        .expect("commuting pair")
                })
            })
            .collect(),
    }
}

fn sampled_candidates(params: &SearchParams) -> Vec<ClassicalSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..params.samples)
        .map(|_| match &params.order {
            OrderSpec::Chain { levels } => {
                random_chain_system(&mut rng, params.points, levels, params.bijective)
            }
            other => random_product_system(&mut rng, params.points, other.rank(), params.bijective),
        })
        .collect()
}

/// Points reachable from `seed` under the acting maps, seed included.
fn forward_orbit(sys: &ClassicalSystem, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    sys.forward_closure(seed.iter().copied())
}

/// `∪_{h ∈ [c, c+p)} im φ^h`: `a` has `α_h(a) = 0` for all large `h` iff
/// it vanishes here.
pub fn eventual_image(sys: &ClassicalSystem) -> BTreeSet<usize> {
    let lo = GroupPoint(sys.periodicity().iter().map(|p| p.index as i64).collect());
    let hi = GroupPoint(
        sys.periodicity()
            .iter()
            .map(|p| (p.index + p.period - 1) as i64)
            .collect(),
    );
    box_points(&lo, &hi)
        .iter()
        .flat_map(|h| sys.map_for(h).image())
        .collect()
}

/// Points `z` for which `ι(1_z)` satisfies `x_h ∈ R_α^⊥` for every `h` and
/// `x_h = 0` for large `h`. `α_h(a) ∈ R_α^⊥` means `a` vanishes on
/// `φ^h(X \ ∪ im φ_i)`.
pub fn naive_c0_points(sys: &ClassicalSystem) -> BTreeSet<usize> {
    let images: BTreeSet<usize> = (0..sys.rank())
        .flat_map(|i| sys.action_generator(i).image())
        .collect();
    let outside: BTreeSet<usize> = (0..sys.points()).filter(|z| !images.contains(z)).collect();
    let reach = forward_orbit(sys, &outside);
    let eventual = eventual_image(sys);
    (0..sys.points())
        .filter(|z| !reach.contains(z) && !eventual.contains(z))
        .collect()
}

/// For each `j` in one period of `φ_2` past its index, a point outside
/// `im φ_1` mapped into `im φ_1` by `φ_2^j`; `None` if some `j` has none.
pub fn dist_window(sys: &ClassicalSystem) -> Option<Vec<(usize, usize)>> {
    let im1 = sys.action_generator(0).image();
    let outside: Vec<usize> = (0..sys.points()).filter(|z| !im1.contains(z)).collect();
    let per = sys.periodicity()[1];
    let g2 = sys.action_generator(1);
    (per.index..per.window())
        .map(|j| {
            let m = g2.power(j as u64);
            outside
                .iter()
                .find(|&&z| im1.contains(&m.apply(z)))
                .map(|&z| (j, z + 1))
        })
        .collect()
}

fn small_grid() -> Grid {
    Grid::from_closed(
        [GroupPoint(vec![0]), GroupPoint(vec![1])],
        &OrderSpec::Chain { levels: vec![1] },
    )
    .expect("two comparable points")
}

fn subgroup_report(sys: &ClassicalSystem) -> Option<CompatReport> {
    let specs: Vec<SubgroupSpec> = match sys.order() {
        OrderSpec::Chain { levels } => {
            let last = *levels.last().expect("nonempty");
            levels[..levels.len() - 1]
                .iter()
                .map(|l| SubgroupSpec::Index(last / l))
                .collect()
        }
        _ => vec![SubgroupSpec::Coord(0)],
    };
    specs.into_iter().find_map(|spec| {
        let rep = subgroup_compat(sys, spec, &small_grid(), Exec::Sequential).ok()?;
        (!rep.holds()).then_some(rep)
    })
}

fn evaluate(target: Target, sys: &ClassicalSystem) -> Option<Witness> {
    match target {
        Target::Subgroup => subgroup_report(sys).map(|r| Witness::Subgroup {
            report: Box::new(r),
        }),
        Target::Boundary => {
            let pts = naive_c0_points(sys);
            (!pts.is_empty()).then(|| Witness::Boundary {
                points: pts.iter().map(|z| z + 1).collect(),
                eventual_image: eventual_image(sys).iter().map(|z| z + 1).collect(),
            })
        }
        Target::Dist => {
            let window = dist_window(sys)?;
            let subgroup_violation = subgroup_compat(
                sys,
                SubgroupSpec::Coord(0),
                &small_grid(),
                Exec::Sequential,
            )
            .map(|r| !r.holds())
            .unwrap_or(false);
            Some(Witness::Dist {
                window,
                subgroup_violation,
            })
        }
    }
}

/// Lexicographically least relabeling of the generators; identity above
/// six points where trying every permutation is too slow.
pub fn canonical_form(sys: &ClassicalSystem) -> Vec<Vec<usize>> {
    let gens: Vec<&PointMap> = sys.generators().iter().collect();
    let n = sys.points();
    let raw: Vec<Vec<usize>> = gens.iter().map(|g| g.images().to_vec()).collect();
    if n > 6 {
        return raw;
    }
    let mut best = raw;
    for sigma in all_permutations(n) {
        let s = sigma.images();
        let mut inv = vec![0; n];
        for (x, &y) in s.iter().enumerate() {
            inv[y] = x;
        }
        // σ ∘ g ∘ σ^{-1}
        let relabeled: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| (0..n).map(|y| s[g.apply(inv[y])]).collect())
            .collect();
        if relabeled < best {
            best = relabeled;
        }
    }
    best
}

pub fn run_search(params: &SearchParams, exec: Exec) -> Result<SearchReport> {
    let (_, exhaustive) = plan(params)?;
    let candidates = if exhaustive {
        exhaustive_candidates(params)
    } else {
        sampled_candidates(params)
    };
    let found = exec.map(&candidates, |sys| {
        evaluate(params.target, sys).map(|w| (canonical_form(sys), sys.clone(), w))
    });
    let mut distinct: BTreeMap<Vec<Vec<usize>>, Hit> = BTreeMap::new();
    for (key, sys, witness) in found.into_iter().flatten() {
        distinct.entry(key.clone()).or_insert_with(|| {
            let gens = key.iter().map(|g| PointMap::new(g.clone())).collect();
            let canon = ClassicalSystem::new(sys.order().clone(), sys.points(), gens)
                .expect("relabeling preserves validity");
            let witness = if canon == sys {
                witness
            } else {
                evaluate(params.target, &canon).expect("relabeling preserves hits")
            };
            Hit {
                system: canon.to_file(),
                witness,
            }
        });
    }
    let hits_total = distinct.len();
    Ok(SearchReport {
        target: params.target,
        order: params.order.clone(),
        points: params.points,
        bijective: params.bijective,
        seed: params.seed,
        exhaustive,
        candidates: candidates.len(),
        hits_total,
        hits: distinct.into_values().take(params.max_hits).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(target: Target, order: OrderSpec, points: usize, bijective: bool) -> SearchParams {
        SearchParams {
            target,
            order,
            points,
            bijective,
            seed: 1,
            samples: 50,
            max_hits: usize::MAX,
        }
    }

    fn worked_example() -> ClassicalSystem {
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

    #[test]
    fn naive_c0_on_worked_example() {
        let sys = worked_example();
        assert_eq!(naive_c0_points(&sys), BTreeSet::from([0, 1]));
        assert_eq!(eventual_image(&sys), BTreeSet::from([2]));
    }

    #[test]
    fn boundary_rediscovers_worked_example() {
        let p = params(Target::Boundary, OrderSpec::product(2).unwrap(), 3, false);
        let rep = run_search(&p, Exec::default()).unwrap();
        assert!(rep.exhaustive);
        let key = canonical_form(&worked_example());
        assert!(rep
            .hits
            .iter()
            .any(|h| ClassicalSystem::from_file(&h.system).map(|s| canonical_form(&s)).ok()
                == Some(key.clone())));
    }

    #[test]
    fn subgroup_chain_collapse_found() {
        let p = params(Target::Subgroup, OrderSpec::chain(vec![1, 2]).unwrap(), 3, false);
        let rep = run_search(&p, Exec::default()).unwrap();
        assert!(rep.hits.iter().any(|h| { let g = &h.system.generators[1]; g.iter().all(|v| *v == g[0]) }));
        let b = params(Target::Subgroup, OrderSpec::chain(vec![1, 2]).unwrap(), 3, true);
        assert_eq!(run_search(&b, Exec::default()).unwrap().hits_total, 0);
    }

    #[test]
    fn bounds_rejected() {
        let mut p = params(Target::Boundary, OrderSpec::product(2).unwrap(), 9, false);
        assert!(plan(&p).is_err());
        p.points = 3;
        p.order = OrderSpec::Product { rank: 3 };
        assert!(plan(&p).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = params(Target::Dist, OrderSpec::product(2).unwrap(), 3, false);
        assert_eq!(
            run_search(&p, Exec::Sequential).unwrap(),
            run_search(&p, Exec::Parallel).unwrap()
        );
    }
}
