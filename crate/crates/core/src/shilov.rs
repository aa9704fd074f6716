//! The maximal invariant boundary ideal `I` intersected with a truncation
//! `B_H`, computed as an exact subspace of the coefficient space of `B_H`.
//!
//! Primary routes: the comparison map kernel for product orders and the
//! closed form `B ∩ c_0(G, (ker α)^⊥)` for chains. The tower
//! `I_F = {x : x_h ∈ J_{F-h}}` is kept as an independent oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dfk;
use crate::dilation::DilationElement;
use crate::dynsys::{ClassicalSystem, PointMap, ZeroSetIdeal};
use crate::error::{Error, LatticeError, ParseError, Result, SystemError};
use crate::lattice::{box_points, grid_closure, Grid, GroupPoint, OrderSpec};
use crate::linalg::{unit, Subspace, Vector};
use crate::par::Exec;
use crate::scalar::{Scalar, ScalarFunction};

/// Coordinates of `B_H`: one block of `|X|` scalars per grid point, grid
/// points in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCoords {
    grid: Grid,
    order: Vec<GroupPoint>,
    points: usize,
}

impl GridCoords {
    pub fn new(grid: &Grid, points: usize) -> Self {
        GridCoords {
            grid: grid.clone(),
            order: grid.iter().cloned().collect(),
            points,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.order.len() * self.points
    }

    pub fn var(&self, slot: usize, z: usize) -> usize {
        slot * self.points + z
    }

    /// Variables read by the functional `x ↦ entry_at(x, h)(z)`; each grid
    /// point contributes one variable, so the row is 0/1.
    pub fn entry_support(&self, sys: &ClassicalSystem, h: &GroupPoint, maps: &mut MapCache, z: usize) -> Vec<usize> {
        let mut vars = Vec::new();
        for (slot, g) in self.order.iter().enumerate() {
            if sys.order().le(g, h) {
                let m = maps.get(sys, &(h - g));
                vars.push(self.var(slot, m.apply(z)));
            }
        }
        vars
    }

    pub fn dense_row(&self, support: &[usize]) -> Vector {
        let mut row = vec![Scalar::zero(); self.dim()];
        for &v in support {
            row[v] = Scalar::one();
        }
        row
    }

    pub fn to_element(&self, v: &[Scalar]) -> DilationElement {
        let coeffs: BTreeMap<GroupPoint, ScalarFunction> = self
            .order
            .iter()
            .enumerate()
            .map(|(slot, g)| {
                let vals = v[slot * self.points..(slot + 1) * self.points].to_vec();
                (g.clone(), ScalarFunction::new(vals))
            })
            .collect();
        DilationElement::from_parts(self.points, coeffs)
    }

    /// Coefficient vector of `x`; `None` if `x` has a nonzero coefficient
    /// off the grid.
    pub fn from_element(&self, x: &DilationElement) -> Option<Vector> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for (g, a) in x.coeffs() {
            match self.order.iter().position(|p| p == g) {
                Some(slot) => {
                    for z in 0..self.points {
                        v[self.var(slot, z)] = a.get(z).clone();
                    }
                }
                None if a.is_zero() => {}
                None => return None,
            }
        }
        Some(v)
    }
}

/// Memoized `φ^v`.
#[derive(Default)]
pub struct MapCache {
    maps: BTreeMap<GroupPoint, PointMap>,
}

impl MapCache {
    pub fn get(&mut self, sys: &ClassicalSystem, v: &GroupPoint) -> &PointMap {
        let reduced = reduce_exponent(sys, v);
        self.maps
            .entry(reduced.clone())
            .or_insert_with(|| sys.map_for(&reduced))
    }
}

fn reduce_exponent(sys: &ClassicalSystem, v: &GroupPoint) -> GroupPoint {
    GroupPoint(
        v.coords()
            .iter()
            .zip(sys.periodicity())
            .map(|(&e, per)| per.reduce(e as u64) as i64)
            .collect(),
    )
}

/// Collects vanishing conditions as 0/1 supports, deduplicated.
#[derive(Default)]
pub(crate) struct Conditions {
    rows: BTreeSet<Vec<usize>>,
}

impl Conditions {
    pub(crate) fn push(&mut self, support: Vec<usize>) {
        if !support.is_empty() {
            self.rows.insert(support);
        }
    }

    /// `entry_at(x, h)` vanishes on `zero_set`.
    pub(crate) fn vanish_on(
        &mut self,
        coords: &GridCoords,
        sys: &ClassicalSystem,
        maps: &mut MapCache,
        h: &GroupPoint,
        zero_set: impl IntoIterator<Item = usize>,
    ) {
        for z in zero_set {
            let s = coords.entry_support(sys, h, maps, z);
            self.push(s);
        }
    }

    pub(crate) fn solve(self, coords: &GridCoords) -> Subspace {
        Subspace::nullspace(
            coords.dim(),
            self.rows.iter().map(|s| coords.dense_row(s)).collect::<Vec<_>>(),
        )
    }
}

/// `I ∩ B_H` as an exact subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShilovSubspace {
    coords: GridCoords,
    space: Subspace,
}

impl ShilovSubspace {
    pub fn new(coords: GridCoords, space: Subspace) -> Self {
        ShilovSubspace { coords, space }
    }

    pub fn grid(&self) -> &Grid {
        self.coords.grid()
    }

    pub fn coords(&self) -> &GridCoords {
        &self.coords
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<DilationElement> {
        self.space
            .basis()
            .iter()
            .map(|v| self.coords.to_element(v))
            .collect()
    }

    pub fn contains(&self, x: &DilationElement) -> bool {
        self.coords
            .from_element(x)
            .is_some_and(|v| self.space.contains(&v))
    }

    /// Replaces the basis; used to plant faults in tests.
    pub fn with_basis(&self, basis: &[DilationElement]) -> Option<Self> {
        let vecs = basis
            .iter()
            .map(|x| self.coords.from_element(x))
            .collect::<Option<Vec<_>>>()?;
        Some(ShilovSubspace {
            coords: self.coords.clone(),
            space: Subspace::span(self.coords.dim(), vecs),
        })
    }
}

impl Serialize for ShilovSubspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            grid: &'a Grid,
            dimension: usize,
            basis: Vec<DilationElement>,
        }
        Out {
            grid: self.grid(),
            dimension: self.dim(),
            basis: self.basis(),
        }
        .serialize(serializer)
    }
}

fn check_grid(sys: &ClassicalSystem, grid: &Grid) -> Result<()> {
    for g in grid.iter() {
        if g.rank() != sys.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: sys.rank(),
                found: g.rank(),
            }
            .into());
        }
    }
    if grid.is_empty() {
        return Err(LatticeError::EmptyGrid.into());
    }
    Ok(())
}

/// `K_F = ∩_{g∈F, g≰0} ker α_{g∨0}`; its zero set is the union of the
/// image sets.
pub fn k_f_ideal(sys: &ClassicalSystem, f: &[GroupPoint]) -> ZeroSetIdeal {
    let order = sys.order();
    let zero = sys.zero();
    let mut zs = BTreeSet::new();
    for g in f {
        if !order.le(g, &zero) {
            zs.extend(sys.map_for(&order.join_of(g, &zero)).image());
        }
    }
    ZeroSetIdeal::new(sys.points(), zs)
}

/// `J_F = K_F^⊥`.
pub fn j_f_ideal(sys: &ClassicalSystem, f: &[GroupPoint]) -> ZeroSetIdeal {
    k_f_ideal(sys, f).annihilator()
}

/// Zero set of `K_{W-h}` for a box `W = [a, b]`.
///
/// Image sets shrink as exponents grow, so only the minimal exponents
/// `(g - h) ∨ 0` over `g ∈ W`, `g ≰ h` matter. With `g_i > h_i` forced, the
/// minimum sits at `g_i = max(h_i + 1, a_i)` and `g_j = a_j` elsewhere.
fn k_box_zero_set(
    sys: &ClassicalSystem,
    a: &GroupPoint,
    b: &GroupPoint,
    h: &GroupPoint,
    maps: &mut MapCache,
) -> BTreeSet<usize> {
    let r = sys.rank();
    let mut zs = BTreeSet::new();
    for i in 0..r {
        if b.0[i] <= h.0[i] {
            continue;
        }
        let v = GroupPoint(
            (0..r)
                .map(|j| {
                    if j == i {
                        a.0[i].max(h.0[i] + 1) - h.0[i]
                    } else {
                        (a.0[j] - h.0[j]).max(0)
                    }
                })
                .collect(),
        );
        zs.extend(maps.get(sys, &v).image());
    }
    zs
}

/// Box outside of which the tower conditions for `(H, W)` repeat.
fn tower_box(sys: &ClassicalSystem, grid: &Grid, w_hi: Option<&GroupPoint>) -> (GroupPoint, GroupPoint) {
    let lo = grid.lower_corner().expect("nonempty grid");
    let mut hi = grid.upper_corner().expect("nonempty grid");
    if let Some(w) = w_hi {
        for i in 0..hi.rank() {
            hi.0[i] = hi.0[i].max(w.0[i]);
        }
    }
    for (i, per) in sys.periodicity().iter().enumerate() {
        hi.0[i] += per.window() as i64;
    }
    (lo, hi)
}

/// `x ∈ I_F`: every entry `x_h` lies in `J_{F-h}`.
pub fn in_i_f(sys: &ClassicalSystem, x: &DilationElement, f: &[GroupPoint]) -> bool {
    let Some((lo, mut hi)) = x.corners() else {
        return true;
    };
    for g in f {
        for i in 0..hi.rank() {
            hi.0[i] = hi.0[i].max(g.0[i]);
        }
    }
    for (i, per) in sys.periodicity().iter().enumerate() {
        hi.0[i] += per.window() as i64;
    }
    box_points(&lo, &hi).iter().all(|h| {
        let shifted: Vec<GroupPoint> = f.iter().map(|g| g - h).collect();
        let j = j_f_ideal(sys, &shifted);
        x.entry_at(sys, h).vanishes_on(j.zero_set())
    })
}

/// `I_W ∩ B_H` for an arbitrary finite `W`.
pub fn tower_subspace(sys: &ClassicalSystem, grid: &Grid, w: &[GroupPoint]) -> Result<ShilovSubspace> {
    check_grid(sys, grid)?;
    let coords = GridCoords::new(grid, sys.points());
    let w_hi = w.iter().cloned().reduce(|a, b| {
        GroupPoint(a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect())
    });
    let (lo, hi) = tower_box(sys, grid, w_hi.as_ref());
    let mut maps = MapCache::default();
    let mut conds = Conditions::default();
    for h in box_points(&lo, &hi) {
        let shifted: Vec<GroupPoint> = w.iter().map(|g| g - &h).collect();
        let j = j_f_ideal(sys, &shifted);
        conds.vanish_on(&coords, sys, &mut maps, &h, j.zero_set().iter().copied());
    }
    let space = conds.solve(&coords);
    Ok(ShilovSubspace::new(coords, space))
}

/// `I_W ∩ B_H` for a box `W = [a, b]`.
pub fn tower_box_subspace(
    sys: &ClassicalSystem,
    grid: &Grid,
    a: &GroupPoint,
    b: &GroupPoint,
) -> Result<ShilovSubspace> {
    check_grid(sys, grid)?;
    let coords = GridCoords::new(grid, sys.points());
    let (lo, hi) = tower_box(sys, grid, Some(b));
    let mut maps = MapCache::default();
    let mut conds = Conditions::default();
    for h in box_points(&lo, &hi) {
        let k = k_box_zero_set(sys, a, b, &h, &mut maps);
        let j = (0..sys.points()).filter(|z| !k.contains(z));
        conds.vanish_on(&coords, sys, &mut maps, &h, j.collect::<Vec<_>>());
    }
    let space = conds.solve(&coords);
    Ok(ShilovSubspace::new(coords, space))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerResult {
    #[serde(skip)]
    pub subspace: ShilovSubspace,
    pub dimension: usize,
    /// Dimensions for `W = H` and then each expanded box.
    pub history: Vec<usize>,
    pub stable: bool,
}

/// Union of the tower over `F ⊆ W`, for `W = H` and then boxes around `H`
/// widened by one periodicity window at a time. `I_F` grows with `F`, so
/// the union over subsets of `W` is `I_W`; the loop stops once two
/// consecutive boxes give the same subspace.
pub fn tower_oracle(sys: &ClassicalSystem, grid: &Grid, max_expansions: usize) -> Result<TowerResult> {
    check_grid(sys, grid)?;
    let own: Vec<GroupPoint> = grid.iter().cloned().collect();
    let mut current = tower_subspace(sys, grid, &own)?;
    let mut history = vec![current.dim()];
    let lo = grid.lower_corner().expect("nonempty");
    let hi = grid.upper_corner().expect("nonempty");
    let w = sys.periodicity_bound() as i64;
    let mut stable = false;
    for k in 1..=max_expansions.max(2) as i64 {
        let a = GroupPoint(lo.0.iter().map(|c| c - k * w).collect());
        let b = GroupPoint(hi.0.iter().map(|c| c + k * w).collect());
        let next = tower_box_subspace(sys, grid, &a, &b)?;
        history.push(next.dim());
        let same = next == current;
        current = next;
        if same && k >= 2 {
            stable = true;
            break;
        }
    }
    Ok(TowerResult {
        dimension: current.dim(),
        subspace: current,
        history,
        stable,
    })
}

/// `I ∩ B_H` by the order's primary algorithm.
pub fn shilov_subspace(sys: &ClassicalSystem, grid: &Grid) -> Result<ShilovSubspace> {
    match sys.order() {
        OrderSpec::Chain { .. } => z_case_ideal(sys, grid),
        _ => dfk::pi_kernel(sys, grid),
    }
}

/// `B ∩ c_0(Z, (ker α)^⊥)` on `B_H` for a chain, at its finest level:
/// entries lie in `(ker ψ)^⊥` everywhere and vanish from `max H + c` on.
pub fn z_case_ideal(sys: &ClassicalSystem, grid: &Grid) -> Result<ShilovSubspace> {
    if !sys.is_chain() {
        return Err(SystemError::UnsupportedOrder {
            required: "chain",
            found: sys.order().kind_name(),
        }
        .into());
    }
    check_grid(sys, grid)?;
    let coords = GridCoords::new(grid, sys.points());
    let mut maps = MapCache::default();
    let mut conds = Conditions::default();
    for (h, zs) in z_case_conditions(sys, grid) {
        conds.vanish_on(&coords, sys, &mut maps, &h, zs);
    }
    let space = conds.solve(&coords);
    Ok(ShilovSubspace::new(coords, space))
}

fn z_case_conditions(sys: &ClassicalSystem, grid: &Grid) -> Vec<(GroupPoint, Vec<usize>)> {
    let per = sys.periodicity()[0];
    let image = sys.action_generator(0).image();
    let off_image: Vec<usize> = (0..sys.points()).filter(|z| !image.contains(z)).collect();
    let all: Vec<usize> = (0..sys.points()).collect();
    let lo = grid.lower_corner().expect("nonempty").0[0];
    let top = grid.upper_corner().expect("nonempty").0[0];
    let tail = top + per.index as i64;
    (lo..tail + per.period as i64)
        .map(|h| {
            let zs = if h >= tail { all.clone() } else { off_image.clone() };
            (GroupPoint(vec![h]), zs)
        })
        .collect()
}

/// `{x ∈ B_H : x_h = 0 for all h ≥ N}`.
pub fn c0_subspace(sys: &ClassicalSystem, grid: &Grid) -> Result<ShilovSubspace> {
    check_grid(sys, grid)?;
    let coords = GridCoords::new(grid, sys.points());
    let top = grid.upper_corner().expect("nonempty");
    let lo = GroupPoint(
        top.0
            .iter()
            .zip(sys.periodicity())
            .map(|(t, per)| t + per.index as i64)
            .collect(),
    );
    let hi = GroupPoint(
        lo.0.iter()
            .zip(sys.periodicity())
            .map(|(t, per)| t + per.period as i64 - 1)
            .collect(),
    );
    let mut maps = MapCache::default();
    let mut conds = Conditions::default();
    for h in box_points(&lo, &hi) {
        conds.vanish_on(&coords, sys, &mut maps, &h, 0..sys.points());
    }
    let space = conds.solve(&coords);
    Ok(ShilovSubspace::new(coords, space))
}

/// An entry of an element that breaks a membership condition of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryViolation {
    pub h: GroupPoint,
    pub entry: ScalarFunction,
    /// Points (1-based) where the entry was required to vanish.
    pub required_zero_on: Vec<usize>,
}

/// First failing membership condition of `I`, in enumeration order.
pub fn first_violation(sys: &ClassicalSystem, x: &DilationElement) -> Option<EntryViolation> {
    let grid = Grid::from_closed(x.grid_points().cloned(), sys.order()).ok()?;
    if grid.is_empty() {
        return None;
    }
    let conditions: Vec<(GroupPoint, Vec<usize>)> = match sys.order() {
        OrderSpec::Chain { .. } => z_case_conditions(sys, &grid),
        _ => dfk::kernel_conditions(sys, &grid).ok()?,
    };
    conditions.into_iter().find_map(|(h, zs)| {
        let entry = x.entry_at(sys, &h);
        (!entry.vanishes_on(&zs)).then(|| EntryViolation {
            h,
            entry,
            required_zero_on: zs.iter().map(|z| z + 1).collect(),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub dimension: usize,
    pub members_verified: usize,
    pub iota_intersection: usize,
    pub shifts_verified: usize,
}

/// `sub ∩ ι(A) = 0`, every basis vector satisfies the membership
/// conditions, and `β_{±e_i}` carries the basis into the subspace computed
/// on the shifted grid. Any failure is a hard error.
pub fn boundary_invariance_check(sys: &ClassicalSystem, sub: &ShilovSubspace) -> Result<BoundaryReport> {
    let grid = sub.grid();
    let reference = shilov_subspace(sys, grid)?;
    let basis = sub.basis();
    for x in &basis {
        if !reference.contains(x) {
            return Err(Error::IdentityViolation(format!("{x} is not in I")));
        }
    }
    let zero = sys.zero();
    let mut iota_dim = 0;
    if grid.contains(&zero) {
        let coords = sub.coords();
        let slot = grid.iter().position(|g| *g == zero).expect("present");
        let iota = Subspace::span(
            coords.dim(),
            (0..sys.points())
                .map(|z| unit(coords.dim(), coords.var(slot, z)))
                .collect::<Vec<_>>(),
        );
        iota_dim = sub.space().intersect(&iota).dim();
        if iota_dim != 0 {
            return Err(Error::IdentityViolation(format!(
                "subspace meets ι(A) in dimension {iota_dim}"
            )));
        }
    }
    let mut shifts = 0;
    for i in 0..sys.rank() {
        for sign in [1, -1] {
            let g = sys.unit(i).scale(sign).map_err(Error::from)?;
            let moved = grid.translate(&-&g);
            let target = shilov_subspace(sys, &moved)?;
            for x in &basis {
                let y = x.shift(&g);
                if !target.contains(&y) {
                    return Err(Error::IdentityViolation(format!(
                        "β_{g}({x}) is not in I over the shifted grid"
                    )));
                }
                shifts += 1;
            }
        }
    }
    Ok(BoundaryReport {
        dimension: sub.dim(),
        members_verified: basis.len(),
        iota_intersection: iota_dim,
        shifts_verified: shifts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeEntry {
    pub f: Vec<GroupPoint>,
    pub k_zero_set: ZeroSetIdeal,
    pub annihilator_zero_set: ZeroSetIdeal,
    pub essential: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeReport {
    /// Whether the product cover itself is the envelope.
    pub envelope: bool,
    pub sets_checked: usize,
    pub witness: Option<EnvelopeEntry>,
}

/// The product cover is the envelope iff every `K_F` with
/// `F ⊆ P \ {0}` finite is essential. Singletons and pairs of generator
/// multiples up to the periodicity bound are checked; on a finite nonempty
/// space `K_{e_1}` already vanishes on the nonempty set `im φ_1`.
pub fn envelope_criterion(sys: &ClassicalSystem) -> EnvelopeReport {
    let mut candidates: Vec<GroupPoint> = Vec::new();
    for i in 0..sys.rank() {
        for k in 1..=sys.periodicity()[i].window() as i64 {
            candidates.push(sys.unit(i).scale(k).expect("small"));
        }
    }
    let mut sets: Vec<Vec<GroupPoint>> = candidates.iter().map(|g| vec![g.clone()]).collect();
    for (x, g) in candidates.iter().enumerate() {
        for h in &candidates[x + 1..] {
            sets.push(vec![g.clone(), h.clone()]);
        }
    }
    let mut witness = None;
    for f in &sets {
        let k = k_f_ideal(sys, f);
        let ann = k.annihilator();
        let essential = ann.is_zero_ideal();
        if !essential && witness.is_none() {
            witness = Some(EnvelopeEntry {
                f: f.clone(),
                k_zero_set: k,
                annihilator_zero_set: ann,
                essential,
            });
        }
    }
    EnvelopeReport {
        envelope: witness.is_none(),
        sets_checked: sets.len(),
        witness,
    }
}

/// A lattice-ordered subgroup to compare against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// `Z e_i` in a product order (0-based here, 1-based on the command line).
    Coord(usize),
    /// `kZ` inside a chain, in finest units.
    Index(u64),
}

impl FromStr for SubgroupSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let bad = || ParseError::Subgroup(format!("expected coord:i or index:k, got {s:?}"));
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "coord" if n >= 1 => Ok(SubgroupSpec::Coord(n as usize - 1)),
            "index" if n >= 1 => Ok(SubgroupSpec::Index(n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Coord(i) => write!(f, "coord:{}", i + 1),
            SubgroupSpec::Index(k) => write!(f, "index:{k}"),
        }
    }
}

/// The restricted system and the embedding of its group.
pub fn subsystem(sys: &ClassicalSystem, spec: SubgroupSpec) -> Result<(ClassicalSystem, Vec<i64>)> {
    match spec {
        SubgroupSpec::Coord(i) => {
            if sys.is_chain() {
                return Err(SystemError::UnsupportedOrder {
                    required: "product",
                    found: "chain",
                }
                .into());
            }
            if i >= sys.rank() {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {} out of range for rank {}",
                    i + 1,
                    sys.rank()
                )));
            }
            let sub = ClassicalSystem::new(
                OrderSpec::Product { rank: 1 },
                sys.points(),
                vec![sys.generators()[i].clone()],
            )?;
            let mut e = vec![0; sys.rank()];
            e[i] = 1;
            Ok((sub, e))
        }
        SubgroupSpec::Index(k) => {
            if !sys.is_chain() {
                return Err(SystemError::UnsupportedOrder {
                    required: "chain",
                    found: sys.order().kind_name(),
                }
                .into());
            }
            let sub = ClassicalSystem::new(
                OrderSpec::Chain { levels: vec![1] },
                sys.points(),
                vec![sys.action_generator(0).power(k)],
            )?;
            Ok((sub, vec![k as i64]))
        }
    }
}

fn embed_point(t: &GroupPoint, e: &[i64]) -> GroupPoint {
    GroupPoint(e.iter().map(|c| c * t.0[0]).collect())
}

pub fn embed_element(x: &DilationElement, e: &[i64]) -> DilationElement {
    let coeffs = x
        .coeffs()
        .iter()
        .map(|(g, a)| (embed_point(g, e), a.clone()))
        .collect();
    DilationElement::from_parts(x.points(), coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatWitness {
    pub element: DilationElement,
    pub embedded: DilationElement,
    pub violation: Option<EntryViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub subgroup: String,
    pub grid: Grid,
    pub embedded_grid: Grid,
    pub j_dimension: usize,
    pub i_dimension: usize,
    /// `J ⊆ I`.
    pub j_in_i: bool,
    /// `I ∩ C ⊆ J`.
    pub i_in_j: bool,
    pub isometry_cases: usize,
    pub isometry_failures: usize,
    pub witness: Option<CompatWitness>,
}

impl CompatReport {
    /// `J = I ∩ C` and the embedding preserved every norm tested.
    pub fn holds(&self) -> bool {
        self.j_in_i && self.i_in_j && self.isometry_failures == 0
    }
}

/// Compares the subgroup's own boundary ideal `J ∩ C_H` with
/// `I ∩ B_{ι(H)}` and checks that the embedding `C → B` preserves sup-norms.
pub fn subgroup_compat(
    sys: &ClassicalSystem,
    spec: SubgroupSpec,
    grid: &Grid,
    exec: Exec,
) -> Result<CompatReport> {
    let (sub, e) = subsystem(sys, spec)?;
    check_grid(&sub, grid)?;
    let embedded_grid = grid_closure(
        &grid.iter().map(|t| embed_point(t, &e)).collect::<Vec<_>>(),
        sys.order(),
    )?;
    let j = shilov_subspace(&sub, grid)?;
    let i = shilov_subspace(sys, &embedded_grid)?;
    // same slot order on both sides: the embedding is increasing
    let j_in_i = j.space().is_subspace_of(i.space());
    let i_in_j = i.space().is_subspace_of(j.space());

    let mut samples: Vec<DilationElement> = j.basis();
    let coords = j.coords();
    samples.extend((0..coords.dim()).map(|v| coords.to_element(&unit(coords.dim(), v))));
    let checks = exec.map(&samples, |x| {
        x.sup_norm_sqr(&sub, Exec::Sequential)
            == embed_element(x, &e).sup_norm_sqr(sys, Exec::Sequential)
    });
    let isometry_failures = checks.iter().filter(|ok| !**ok).count();

    let witness = j.space().first_outside(i.space()).map(|v| {
        let element = coords.to_element(v);
        let embedded = embed_element(&element, &e);
        let violation = first_violation(sys, &embedded);
        CompatWitness {
            element,
            embedded,
            violation,
        }
    });
    Ok(CompatReport {
        subgroup: spec.to_string(),
        grid: grid.clone(),
        embedded_grid,
        j_dimension: j.dim(),
        i_dimension: i.dim(),
        j_in_i,
        i_in_j,
        isometry_cases: checks.len(),
        isometry_failures,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::embed_iota;
    use crate::lattice::parse_grid;

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

    fn chain(levels: &[u64], finest: &[usize]) -> ClassicalSystem {
        let f = PointMap::from_one_based(finest);
        ClassicalSystem::new(
            OrderSpec::chain(levels.to_vec()).unwrap(),
            finest.len(),
            crate::gen::chain_generators(&f, levels),
        )
        .unwrap()
    }

    fn gp(c: &[i64]) -> GroupPoint {
        GroupPoint::new(c.to_vec())
    }

    fn set(pts: &[usize]) -> BTreeSet<usize> {
        pts.iter().map(|p| p - 1).collect()
    }

    #[test]
    fn k_and_j_examples() {
        let sys = worked_example();
        assert!(k_f_ideal(&sys, &[gp(&[1, 0]), gp(&[0, 1])]).is_zero_ideal());
        assert!(k_f_ideal(&sys, &[gp(&[-1, 0]), gp(&[0, -2])]).is_full());
        assert_eq!(k_f_ideal(&sys, &[gp(&[1, 1])]).zero_set(), &set(&[3]));
        assert!(j_f_ideal(&sys, &[gp(&[1, 0]), gp(&[0, 1])]).is_full());
        assert_eq!(j_f_ideal(&sys, &[gp(&[1, 0])]).zero_set(), &set(&[2]));
        assert!(j_f_ideal(&sys, &[]).is_zero_ideal());
    }

    #[test]
    fn in_i_f_examples() {
        let z = chain(&[1], &[1, 1]);
        assert!(in_i_f(&z, &DilationElement::zero(2), &[gp(&[1])]));
        let f = ScalarFunction::delta(2, 0);
        let x = embed_iota(&z, f.clone())
            .unwrap()
            .sub(&z, &embed_iota(&z, z.act(&gp(&[1]), &f)).unwrap().shift(&gp(&[-1])));
        assert!(in_i_f(&z, &x, &[gp(&[1])]));
        let sys = worked_example();
        let iota = embed_iota(&sys, ScalarFunction::from_ints(&[1, 1, 0])).unwrap();
        for f in [vec![gp(&[1, 0])], vec![gp(&[3, 3]), gp(&[-2, 5])]] {
            assert!(!in_i_f(&sys, &iota, &f));
        }
    }

    #[test]
    fn box_tower_matches_general_tower() {
        let sys = worked_example();
        let grid = parse_grid("0,0;1,0", sys.order()).unwrap();
        let (a, b) = (gp(&[-2, -1]), gp(&[3, 2]));
        let w = box_points(&a, &b);
        assert_eq!(
            tower_box_subspace(&sys, &grid, &a, &b).unwrap(),
            tower_subspace(&sys, &grid, &w).unwrap()
        );
    }

    #[test]
    fn worked_example_dimension_two() {
        let sys = worked_example();
        let grid = parse_grid("0,0;1,0", sys.order()).unwrap();
        let sub = shilov_subspace(&sys, &grid).unwrap();
        assert_eq!(sub.dim(), 2);
        let tower = tower_oracle(&sys, &grid, 4).unwrap();
        assert!(tower.stable);
        assert_eq!(tower.subspace, sub);
        boundary_invariance_check(&sys, &sub).unwrap();
    }

    #[test]
    fn z_case_examples() {
        let z = chain(&[1], &[1, 1]);
        let grid = parse_grid("0;1", z.order()).unwrap();
        let sub = z_case_ideal(&z, &grid).unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(tower_oracle(&z, &grid, 4).unwrap().subspace, sub);
        assert_eq!(z_case_ideal(&z, &Grid::singleton(gp(&[0]))).unwrap().dim(), 0);
        let swap = chain(&[1], &[2, 1]);
        assert_eq!(
            z_case_ideal(&swap, &grid).unwrap(),
            c0_subspace(&swap, &grid).unwrap()
        );
        assert!(z_case_ideal(&worked_example(), &grid).is_err());
    }

    #[test]
    fn corrupted_basis_fails() {
        let sys = worked_example();
        let grid = parse_grid("0,0;1,0", sys.order()).unwrap();
        let sub = shilov_subspace(&sys, &grid).unwrap();
        let bad = sub
            .with_basis(&[embed_iota(&sys, ScalarFunction::delta(3, 0)).unwrap()])
            .unwrap();
        assert!(boundary_invariance_check(&sys, &bad).is_err());
        let trivial = shilov_subspace(&sys, &Grid::singleton(sys.zero())).unwrap();
        assert_eq!(boundary_invariance_check(&sys, &trivial).unwrap().dimension, 0);
    }

    #[test]
    fn envelope_examples() {
        let rep = envelope_criterion(&worked_example());
        assert!(!rep.envelope);
        let w = rep.witness.unwrap();
        assert_eq!(w.f, vec![gp(&[1, 0])]);
        assert_eq!(w.annihilator_zero_set.zero_set(), &set(&[2]));
        let one = chain(&[1], &[1]);
        let w = envelope_criterion(&one).witness.unwrap();
        assert!(w.k_zero_set.is_zero_ideal());
        assert!(w.annihilator_zero_set.is_full());
    }

    #[test]
    fn subgroup_examples() {
        let grid = parse_grid("0;1", &OrderSpec::Chain { levels: vec![1] }).unwrap();
        let swap = chain(&[1, 2], &[2, 1]);
        assert!(subgroup_compat(&swap, SubgroupSpec::Index(2), &grid, Exec::Sequential)
            .unwrap()
            .holds());
        let collapse = chain(&[1, 2], &[3, 3, 3]);
        let rep = subgroup_compat(&collapse, SubgroupSpec::Index(2), &grid, Exec::Sequential).unwrap();
        assert!(!rep.j_in_i);
        let w = rep.witness.unwrap();
        let v = w.violation.unwrap();
        assert_eq!(v.h, gp(&[1]));
        assert_eq!(v.entry, ScalarFunction::ones(3));
        assert_eq!(rep.isometry_failures, 0);
    }

    #[test]
    fn subgroup_spec_parsing() {
        assert_eq!("coord:1".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Coord(0));
        assert_eq!("index:2".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Index(2));
        for bad in ["coord:0", "index", "lev:2", "index:x"] {
            assert!(bad.parse::<SubgroupSpec>().is_err(), "{bad}");
        }
    }
}
