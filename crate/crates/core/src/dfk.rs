//! The comparison algebra for `P = Z_+^n`: quotients `A/Q_x` indexed by
//! `x ∈ Z_+^n`, the map `π(b) = Σ_y q_y(b_{-y}) ⊗ e_y`, and its kernel.
//!
//! `Q_x` depends only on `supp(x)`, so the family is cached per support.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dilation::DilationElement;
use crate::dynsys::{ClassicalSystem, ZeroSetIdeal};
use crate::error::{Result, SystemError};
use crate::lattice::{box_points, Grid, GroupPoint};
use crate::scalar::ScalarFunction;
use crate::shilov::{tower_oracle, Conditions, GridCoords, MapCache, ShilovSubspace};

fn require_product(sys: &ClassicalSystem) -> Result<()> {
    if sys.is_chain() {
        return Err(SystemError::UnsupportedOrder {
            required: "product",
            found: "chain",
        }
        .into());
    }
    Ok(())
}

fn mask_of(s: &BTreeSet<usize>) -> usize {
    s.iter().fold(0, |m, i| m | (1 << i))
}

/// `Q_S^0 = (∩_{i∈S} ker α_i)^⊥`: zero set `X \ ∪_{i∈S} im φ_i`.
pub fn q0_ideal(sys: &ClassicalSystem, s: &BTreeSet<usize>) -> Result<ZeroSetIdeal> {
    require_product(sys)?;
    let mut kernel = ZeroSetIdeal::full(sys.points());
    for &i in s {
        kernel = kernel.meet(&sys.kernel_ideal(&sys.unit(i))?);
    }
    Ok(kernel.annihilator())
}

/// `Q_S = ∩_{y ⊥ S} α_y^{-1}(Q_S^0)`: the zero set of `Q_S^0` pushed
/// forward by every `φ^y` with `y` supported off `S`. Powers beyond each
/// generator's window repeat, so `y` ranges over a finite box.
pub fn q_ideal(sys: &ClassicalSystem, s: &BTreeSet<usize>) -> Result<ZeroSetIdeal> {
    let q0 = q0_ideal(sys, s)?;
    let r = sys.rank();
    let lo = GroupPoint::zero(r);
    let hi = GroupPoint(
        (0..r)
            .map(|i| {
                if s.contains(&i) {
                    0
                } else {
                    sys.periodicity()[i].window() as i64 - 1
                }
            })
            .collect(),
    );
    let mut zs = BTreeSet::new();
    for y in box_points(&lo, &hi) {
        zs.extend(sys.map_for(&y).image_of(q0.zero_set()));
    }
    Ok(ZeroSetIdeal::new(sys.points(), zs))
}

/// `Q_S` and `Q_S^0` for every support `S ⊆ {0..n-1}`, by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfkIdealFamily {
    rank: usize,
    q0: Vec<ZeroSetIdeal>,
    q: Vec<ZeroSetIdeal>,
}

impl DfkIdealFamily {
    pub fn new(sys: &ClassicalSystem) -> Result<Self> {
        require_product(sys)?;
        let r = sys.rank();
        let mut q0 = Vec::with_capacity(1 << r);
        let mut q = Vec::with_capacity(1 << r);
        for mask in 0..(1usize << r) {
            let s: BTreeSet<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            q0.push(q0_ideal(sys, &s)?);
            q.push(q_ideal(sys, &s)?);
        }
        Ok(DfkIdealFamily { rank: r, q0, q })
    }

    pub fn q0(&self, s: &BTreeSet<usize>) -> &ZeroSetIdeal {
        &self.q0[mask_of(s)]
    }

    pub fn q(&self, s: &BTreeSet<usize>) -> &ZeroSetIdeal {
        &self.q[mask_of(s)]
    }

    /// `Q_x`, through `supp(x)`.
    pub fn q_at(&self, x: &GroupPoint) -> &ZeroSetIdeal {
        let mask = x
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .fold(0, |m, (i, _)| m | (1 << i));
        &self.q[mask]
    }

    pub fn supports(&self) -> Vec<SupportEntry> {
        (0..self.q.len())
            .map(|mask| SupportEntry {
                support: (0..self.rank).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect(),
                q0_zero_set: self.q0[mask].clone(),
                zero_set: self.q[mask].clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportEntry {
    /// 1-based generator indices.
    #[serde(rename = "S")]
    pub support: Vec<usize>,
    pub q0_zero_set: ZeroSetIdeal,
    pub zero_set: ZeroSetIdeal,
}

/// `Σ_x q_x(a_x) ⊗ e_x`, each representative keeping only its values on
/// the zero set of `Q_x`; zero summands are dropped, so `==` is equality
/// in the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfkVector {
    summands: BTreeMap<GroupPoint, ScalarFunction>,
}

impl DfkVector {
    pub fn zero() -> Self {
        DfkVector {
            summands: BTreeMap::new(),
        }
    }

    pub fn summands(&self) -> &BTreeMap<GroupPoint, ScalarFunction> {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Adds `q_x(a) ⊗ e_x`.
    pub fn add_term(&mut self, fam: &DfkIdealFamily, x: GroupPoint, a: &ScalarFunction) {
        let q = fam.q_at(&x);
        let rep = match self.summands.remove(&x) {
            Some(prev) => q.reduce(&(&prev + a)),
            None => q.reduce(a),
        };
        if !rep.is_zero() {
            self.summands.insert(x, rep);
        }
    }

    pub fn single(fam: &DfkIdealFamily, x: GroupPoint, a: &ScalarFunction) -> Self {
        let mut v = DfkVector::zero();
        v.add_term(fam, x, a);
        v
    }

    /// Summandwise product; each quotient `A/Q_x` is an algebra.
    pub fn mul(&self, fam: &DfkIdealFamily, other: &Self) -> Self {
        let mut out = DfkVector::zero();
        for (x, a) in &self.summands {
            if let Some(b) = other.summands.get(x) {
                out.add_term(fam, x.clone(), &a.pointwise_mul(b));
            }
        }
        out
    }

    pub fn max_norm_sqr(&self) -> num_rational::BigRational {
        self.summands
            .values()
            .map(ScalarFunction::max_norm_sqr)
            .max()
            .unwrap_or_else(|| num_rational::BigRational::from_integer(0.into()))
    }
}

/// `γ_i`: a summand at `x` with `x_i = 0` goes to `q_x(α_i a)` at `x` plus
/// `q_{x+e_i}(a)` at `x + e_i`; with `x_i > 0` it moves to `x + e_i`.
pub fn gamma_apply(
    sys: &ClassicalSystem,
    fam: &DfkIdealFamily,
    i: usize,
    v: &DfkVector,
) -> DfkVector {
    let e = sys.unit(i);
    let mut out = DfkVector::zero();
    for (x, a) in &v.summands {
        if x.0[i] == 0 {
            out.add_term(fam, x.clone(), &sys.act(&e, a));
        }
        out.add_term(fam, x + &e, a);
    }
    out
}

/// Translation `s = (∨F) ∨ 0` that moves the grid into `-Z_+^n`.
fn positive_translation(sys: &ClassicalSystem, grid_top: &GroupPoint) -> GroupPoint {
    sys.order().join_of(grid_top, &sys.zero())
}

/// `π(x)` after translating `x` so every shift is positive:
/// the summand at `y ∈ [0, ∨(s - F)]` is `q_y(entry at -y)`.
pub fn pi_map(sys: &ClassicalSystem, fam: &DfkIdealFamily, x: &DilationElement) -> Result<DfkVector> {
    require_product(sys)?;
    let Some((lo, hi)) = x.corners() else {
        return Ok(DfkVector::zero());
    };
    let s = positive_translation(sys, &hi);
    let t = x.shift(&s);
    let mut out = DfkVector::zero();
    for y in box_points(&sys.zero(), &(&s - &lo)) {
        out.add_term(fam, y.clone(), &t.entry_at(sys, &-&y));
    }
    Ok(out)
}

/// Conditions `entry_at(x, h) ∈ Q_y` cutting `ker π` out of `B_H`, as
/// `(h, zero set of Q_y)` with `h = s - y`.
pub fn kernel_conditions(sys: &ClassicalSystem, grid: &Grid) -> Result<Vec<(GroupPoint, Vec<usize>)>> {
    let fam = DfkIdealFamily::new(sys)?;
    let lo = grid.lower_corner().expect("nonempty grid");
    let hi = grid.upper_corner().expect("nonempty grid");
    let s = positive_translation(sys, &hi);
    Ok(box_points(&sys.zero(), &(&s - &lo))
        .into_iter()
        .map(|y| {
            let zs = fam.q_at(&y).zero_set().iter().copied().collect();
            (&s - &y, zs)
        })
        .collect())
}

/// `ker π ∩ B_H`, in the coordinates of `B_H`.
pub fn pi_kernel(sys: &ClassicalSystem, grid: &Grid) -> Result<ShilovSubspace> {
    require_product(sys)?;
    if grid.is_empty() {
        return Err(crate::error::LatticeError::EmptyGrid.into());
    }
    let coords = GridCoords::new(grid, sys.points());
    let mut maps = MapCache::default();
    let mut conds = Conditions::default();
    for (h, zs) in kernel_conditions(sys, grid)? {
        conds.vanish_on(&coords, sys, &mut maps, &h, zs);
    }
    Ok(ShilovSubspace::new(coords.clone(), conds.solve(&coords)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelComparison {
    pub grid: Grid,
    pub supports: Vec<SupportEntry>,
    pub kernel_dim: usize,
    pub tower_dim: usize,
    pub tower_history: Vec<usize>,
    pub tower_stable: bool,
    pub agreement: bool,
    /// A basis vector of one side missing from the other.
    pub mismatch: Option<DilationElement>,
}

/// `ker π ∩ B_H` against the tower oracle.
pub fn compare_kernels(sys: &ClassicalSystem, grid: &Grid) -> Result<KernelComparison> {
    let fam = DfkIdealFamily::new(sys)?;
    let kernel = pi_kernel(sys, grid)?;
    let tower = tower_oracle(sys, grid, 4)?;
    let agreement = kernel == tower.subspace;
    let mismatch = kernel
        .space()
        .first_outside(tower.subspace.space())
        .or_else(|| tower.subspace.space().first_outside(kernel.space()))
        .map(|v| kernel.coords().to_element(v));
    Ok(KernelComparison {
        grid: grid.clone(),
        supports: fam.supports(),
        kernel_dim: kernel.dim(),
        tower_dim: tower.dimension,
        tower_history: tower.history,
        tower_stable: tower.stable,
        agreement,
        mismatch,
    })
}
