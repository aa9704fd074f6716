//! Lattice-ordered abelian groups: `Z^n` with the product or lexicographic
//! order, and chains `(1/L)Z` stored at their finest level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, ParseError};

/// Which order a group of integer vectors carries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum OrderSpec {
    /// `(Z^rank, Z_+^rank)`, coordinatewise order.
    Product { rank: usize },
    /// `Z^rank` ordered lexicographically; order arithmetic only.
    Lex { rank: usize },
    /// The totally ordered group `(1/L)Z`, `L` the last level, with one
    /// subgroup `(1/l)Z` per level `l`. Elements are integers in units of `1/L`.
    Chain { levels: Vec<u64> },
}

impl OrderSpec {
    pub fn product(rank: usize) -> Result<Self, LatticeError> {
        let spec = OrderSpec::Product { rank };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lex(rank: usize) -> Result<Self, LatticeError> {
        let spec = OrderSpec::Lex { rank };
        spec.validate()?;
        Ok(spec)
    }

    pub fn chain(levels: Vec<u64>) -> Result<Self, LatticeError> {
        let spec = OrderSpec::Chain { levels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        match self {
            OrderSpec::Product { rank } | OrderSpec::Lex { rank } if *rank == 0 => {
                Err(LatticeError::InvalidOrder("rank must be at least 1".into()))
            }
            OrderSpec::Product { .. } | OrderSpec::Lex { .. } => Ok(()),
            OrderSpec::Chain { levels } => {
                if levels.first() != Some(&1) {
                    return Err(LatticeError::InvalidOrder(
                        "chain levels must start at 1".into(),
                    ));
                }
                for w in levels.windows(2) {
                    if w[1] <= w[0] || w[1] % w[0] != 0 {
                        return Err(LatticeError::InvalidOrder(format!(
                            "chain level {} does not strictly divide {}",
                            w[0], w[1]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Length of the coordinate vectors.
    pub fn rank(&self) -> usize {
        match self {
            OrderSpec::Product { rank } | OrderSpec::Lex { rank } => *rank,
            OrderSpec::Chain { .. } => 1,
        }
    }

    pub fn is_total(&self) -> bool {
        match self {
            OrderSpec::Product { rank } => *rank == 1,
            OrderSpec::Lex { .. } | OrderSpec::Chain { .. } => true,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OrderSpec::Product { .. } => "product",
            OrderSpec::Lex { .. } => "lex",
            OrderSpec::Chain { .. } => "chain",
        }
    }

    pub fn zero(&self) -> GroupPoint {
        GroupPoint::zero(self.rank())
    }

    fn check(&self, g: &GroupPoint) -> Result<(), LatticeError> {
        if g.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: g.rank(),
            });
        }
        Ok(())
    }

    /// `g ≤ h`; ranks are assumed to match.
    pub fn le(&self, g: &GroupPoint, h: &GroupPoint) -> bool {
        debug_assert_eq!(g.rank(), h.rank());
        match self {
            OrderSpec::Product { .. } => g.0.iter().zip(&h.0).all(|(a, b)| a <= b),
            // Vec ordering is lexicographic; chains have a single coordinate.
            OrderSpec::Lex { .. } | OrderSpec::Chain { .. } => g <= h,
        }
    }

    pub fn lt(&self, g: &GroupPoint, h: &GroupPoint) -> bool {
        g != h && self.le(g, h)
    }

    pub fn join_of(&self, g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
        match self {
            OrderSpec::Product { .. } => {
                GroupPoint(g.0.iter().zip(&h.0).map(|(a, b)| *a.max(b)).collect())
            }
            _ => g.max(h).clone(),
        }
    }

    pub fn meet_of(&self, g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
        match self {
            OrderSpec::Product { .. } => {
                GroupPoint(g.0.iter().zip(&h.0).map(|(a, b)| *a.min(b)).collect())
            }
            _ => g.min(h).clone(),
        }
    }

    pub fn is_positive(&self, g: &GroupPoint) -> bool {
        self.le(&self.zero(), g)
    }
}

/// An element of the group, as an integer vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupPoint(pub Vec<i64>);

impl GroupPoint {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupPoint(coords)
    }

    pub fn zero(rank: usize) -> Self {
        GroupPoint(vec![0; rank])
    }

    /// The `i`-th standard generator `e_i`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        GroupPoint(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.rank() != other.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()
            .map(GroupPoint)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self, LatticeError> {
        self.0
            .iter()
            .map(|a| a.checked_neg().ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()
            .map(GroupPoint)
    }

    pub fn scale(&self, k: i64) -> Result<Self, LatticeError> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()
            .map(GroupPoint)
    }
}

// The operator forms treat overflow as a fatal error.
impl Add<&GroupPoint> for &GroupPoint {
    type Output = GroupPoint;
    fn add(self, rhs: &GroupPoint) -> GroupPoint {
        self.checked_add(rhs).expect("group coordinate overflow")
    }
}

impl Sub<&GroupPoint> for &GroupPoint {
    type Output = GroupPoint;
    fn sub(self, rhs: &GroupPoint) -> GroupPoint {
        self.checked_sub(rhs).expect("group coordinate overflow")
    }
}

impl Neg for &GroupPoint {
    type Output = GroupPoint;
    fn neg(self) -> GroupPoint {
        self.checked_neg().expect("group coordinate overflow")
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn leq(g: &GroupPoint, h: &GroupPoint, spec: &OrderSpec) -> Result<bool, LatticeError> {
    spec.check(g)?;
    spec.check(h)?;
    Ok(spec.le(g, h))
}

pub fn join(g: &GroupPoint, h: &GroupPoint, spec: &OrderSpec) -> Result<GroupPoint, LatticeError> {
    spec.check(g)?;
    spec.check(h)?;
    Ok(spec.join_of(g, h))
}

pub fn meet(g: &GroupPoint, h: &GroupPoint, spec: &OrderSpec) -> Result<GroupPoint, LatticeError> {
    spec.check(g)?;
    spec.check(h)?;
    Ok(spec.meet_of(g, h))
}

/// `g ∨ 0`.
pub fn pos_part(g: &GroupPoint, spec: &OrderSpec) -> Result<GroupPoint, LatticeError> {
    join(g, &spec.zero(), spec)
}

/// A finite subset of the group closed under `∨`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Grid {
    points: BTreeSet<GroupPoint>,
}

impl Grid {
    pub fn empty() -> Self {
        Grid {
            points: BTreeSet::new(),
        }
    }

    pub fn singleton(g: GroupPoint) -> Self {
        Grid {
            points: BTreeSet::from([g]),
        }
    }

    /// Accepts `points` only if it is already join-closed.
    pub fn from_closed(
        points: impl IntoIterator<Item = GroupPoint>,
        spec: &OrderSpec,
    ) -> Result<Self, LatticeError> {
        let points: BTreeSet<GroupPoint> = points.into_iter().collect();
        for g in &points {
            spec.check(g)?;
        }
        for a in &points {
            for b in &points {
                if !points.contains(&spec.join_of(a, b)) {
                    return Err(LatticeError::NotJoinClosed {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        Ok(Grid { points })
    }

    pub fn points(&self) -> &BTreeSet<GroupPoint> {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupPoint> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, g: &GroupPoint) -> bool {
        self.points.contains(g)
    }

    /// The largest element `∨F`; `None` for the empty grid.
    pub fn top(&self, spec: &OrderSpec) -> Option<GroupPoint> {
        let mut it = self.points.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, g| spec.join_of(&acc, g)))
    }

    /// Coordinatewise minimum, for enumeration boxes.
    pub fn lower_corner(&self) -> Option<GroupPoint> {
        let mut it = self.points.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, g| {
            GroupPoint(acc.0.iter().zip(&g.0).map(|(a, b)| *a.min(b)).collect())
        }))
    }

    /// Coordinatewise maximum, for enumeration boxes.
    pub fn upper_corner(&self) -> Option<GroupPoint> {
        let mut it = self.points.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, g| {
            GroupPoint(acc.0.iter().zip(&g.0).map(|(a, b)| *a.max(b)).collect())
        }))
    }

    /// `F + g`.
    pub fn translate(&self, g: &GroupPoint) -> Self {
        Grid {
            points: self.points.iter().map(|p| p + g).collect(),
        }
    }

    /// Minimal elements of the grid, in coordinate order.
    pub fn minimal_elements(&self, spec: &OrderSpec) -> Vec<GroupPoint> {
        minimal_in(&self.points, spec)
    }
}

fn minimal_in(set: &BTreeSet<GroupPoint>, spec: &OrderSpec) -> Vec<GroupPoint> {
    set.iter()
        .filter(|g| !set.iter().any(|h| spec.lt(h, g)))
        .cloned()
        .collect()
}

/// Smallest join-closed superset of `points`.
pub fn grid_closure<'a>(
    points: impl IntoIterator<Item = &'a GroupPoint>,
    spec: &OrderSpec,
) -> Result<Grid, LatticeError> {
    let mut closed: BTreeSet<GroupPoint> = BTreeSet::new();
    let mut pending: Vec<GroupPoint> = Vec::new();
    for g in points {
        spec.check(g)?;
        if closed.insert(g.clone()) {
            pending.push(g.clone());
        }
    }
    while let Some(g) = pending.pop() {
        let joins: Vec<GroupPoint> = closed.iter().map(|h| spec.join_of(&g, h)).collect();
        for j in joins {
            if closed.insert(j.clone()) {
                pending.push(j);
            }
        }
    }
    Ok(Grid { points: closed })
}

/// Order in which minimal elements are consumed by [`c_coefficients_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LexAscending,
    LexDescending,
}

/// Integers `c_g` with `Σ_{h∈F, h≤g} c_h = 1` for every `g ∈ F`.
pub fn c_coefficients(
    grid: &Grid,
    spec: &OrderSpec,
) -> Result<BTreeMap<GroupPoint, i64>, LatticeError> {
    c_coefficients_with(grid, spec, TieBreak::LexAscending)
}

pub fn c_coefficients_with(
    grid: &Grid,
    spec: &OrderSpec,
    tie_break: TieBreak,
) -> Result<BTreeMap<GroupPoint, i64>, LatticeError> {
    if grid.is_empty() {
        return Err(LatticeError::EmptyGrid);
    }
    let mut remaining = grid.points.clone();
    let mut coeffs: BTreeMap<GroupPoint, i64> = BTreeMap::new();
    while !remaining.is_empty() {
        let minimal = minimal_in(&remaining, spec);
        let next = match tie_break {
            TieBreak::LexAscending => minimal.first(),
            TieBreak::LexDescending => minimal.last(),
        }
        .expect("a nonempty finite poset has a minimal element")
        .clone();
        // every h < next has already been assigned
        let below: i64 = coeffs
            .iter()
            .filter(|(h, _)| spec.lt(h, &next))
            .map(|(_, c)| *c)
            .sum();
        remaining.remove(&next);
        coeffs.insert(next, 1 - below);
    }
    Ok(coeffs)
}

/// All points of the closed box `[lo, hi]`, lexicographically ordered.
pub fn enum_box(
    lo: &GroupPoint,
    hi: &GroupPoint,
    spec: &OrderSpec,
) -> Result<Vec<GroupPoint>, LatticeError> {
    spec.check(lo)?;
    spec.check(hi)?;
    if lo.0.iter().zip(&hi.0).any(|(a, b)| a > b) {
        return Err(LatticeError::ReversedBounds {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    Ok(box_points(lo, hi))
}

pub(crate) fn box_points(lo: &GroupPoint, hi: &GroupPoint) -> Vec<GroupPoint> {
    let mut out = vec![Vec::with_capacity(lo.rank())];
    for (a, b) in lo.0.iter().zip(&hi.0) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (*a..=*b).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(GroupPoint).collect()
}

/// Parses `"0,0;1,0;0,1"` into points of the given rank.
pub fn parse_points(literal: &str, spec: &OrderSpec) -> Result<Vec<GroupPoint>, ParseError> {
    let mut points = Vec::new();
    for part in literal.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let coords = part
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|_| ParseError::Grid(format!("bad coordinate {c:?} in {part:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != spec.rank() {
            return Err(ParseError::Grid(format!(
                "point {part:?} has {} coordinates, expected {}",
                coords.len(),
                spec.rank()
            )));
        }
        points.push(GroupPoint(coords));
    }
    Ok(points)
}

/// Parses a grid literal and closes it under joins.
pub fn parse_grid(literal: &str, spec: &OrderSpec) -> Result<Grid, ParseError> {
    let points = parse_points(literal, spec)?;
    grid_closure(&points, spec).map_err(|e| ParseError::Grid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> GroupPoint {
        GroupPoint(c.to_vec())
    }

    #[test]
    fn order_examples() {
        let prod = OrderSpec::product(2).unwrap();
        assert!(leq(&p(&[0, 1]), &p(&[1, 1]), &prod).unwrap());
        assert!(!leq(&p(&[1, 0]), &p(&[0, 1]), &prod).unwrap());
        let lex = OrderSpec::lex(2).unwrap();
        assert!(leq(&p(&[0, 5]), &p(&[1, -100]), &lex).unwrap());
        assert!(matches!(
            leq(&p(&[0]), &p(&[1, 1]), &prod),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn join_meet_examples() {
        let prod = OrderSpec::product(2).unwrap();
        assert_eq!(join(&p(&[1, 0]), &p(&[0, 1]), &prod).unwrap(), p(&[1, 1]));
        assert_eq!(meet(&p(&[2, 1]), &p(&[1, 3]), &prod).unwrap(), p(&[1, 1]));
        assert_eq!(meet(&p(&[4, -2]), &p(&[4, -2]), &prod).unwrap(), p(&[4, -2]));
    }

    #[test]
    fn pos_part_examples() {
        let prod = OrderSpec::product(2).unwrap();
        assert_eq!(pos_part(&p(&[-1, 2]), &prod).unwrap(), p(&[0, 2]));
        assert_eq!(pos_part(&p(&[0, 0]), &prod).unwrap(), p(&[0, 0]));
        let lex = OrderSpec::lex(2).unwrap();
        assert_eq!(pos_part(&p(&[-1, 5]), &lex).unwrap(), p(&[0, 0]));
    }

    #[test]
    fn closure_examples() {
        let prod = OrderSpec::product(2).unwrap();
        let g = grid_closure(&[p(&[1, 0]), p(&[0, 1])], &prod).unwrap();
        assert_eq!(
            g.points().iter().cloned().collect::<Vec<_>>(),
            vec![p(&[0, 1]), p(&[1, 0]), p(&[1, 1])]
        );
        let again = grid_closure(g.points(), &prod).unwrap();
        assert_eq!(again, g);
        let chain = OrderSpec::chain(vec![1, 2]).unwrap();
        let pts = [p(&[3]), p(&[-1]), p(&[7])];
        assert_eq!(grid_closure(&pts, &chain).unwrap().len(), 3);
    }

    #[test]
    fn coefficient_examples() {
        let prod = OrderSpec::product(2).unwrap();
        let single = Grid::singleton(p(&[0, 0]));
        assert_eq!(
            c_coefficients(&single, &prod).unwrap(),
            BTreeMap::from([(p(&[0, 0]), 1)])
        );
        let l = grid_closure(&[p(&[1, 0]), p(&[0, 1])], &prod).unwrap();
        assert_eq!(
            c_coefficients(&l, &prod).unwrap(),
            BTreeMap::from([(p(&[1, 0]), 1), (p(&[0, 1]), 1), (p(&[1, 1]), -1)])
        );
        let sq = grid_closure(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])], &prod).unwrap();
        assert_eq!(
            c_coefficients(&sq, &prod).unwrap(),
            BTreeMap::from([
                (p(&[0, 0]), 1),
                (p(&[1, 0]), 0),
                (p(&[0, 1]), 0),
                (p(&[1, 1]), 0)
            ])
        );
        assert_eq!(
            c_coefficients(&Grid::empty(), &prod),
            Err(LatticeError::EmptyGrid)
        );
    }

    #[test]
    fn box_examples() {
        let prod = OrderSpec::product(2).unwrap();
        let g = p(&[3, -1]);
        assert_eq!(enum_box(&g, &g, &prod).unwrap(), vec![g.clone()]);
        assert_eq!(enum_box(&p(&[0, 0]), &p(&[1, 1]), &prod).unwrap().len(), 4);
        let chain = OrderSpec::chain(vec![1]).unwrap();
        assert_eq!(
            enum_box(&p(&[0]), &p(&[3]), &chain).unwrap(),
            vec![p(&[0]), p(&[1]), p(&[2]), p(&[3])]
        );
        assert!(enum_box(&p(&[1, 0]), &p(&[0, 0]), &prod).is_err());
    }

    #[test]
    fn chain_levels_validated() {
        assert!(OrderSpec::chain(vec![1, 2, 6]).is_ok());
        assert!(OrderSpec::chain(vec![2, 4]).is_err());
        assert!(OrderSpec::chain(vec![1, 4, 6]).is_err());
        assert!(OrderSpec::chain(vec![1, 1]).is_err());
        assert!(OrderSpec::product(0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let a = p(&[i64::MAX]);
        assert_eq!(a.checked_add(&p(&[1])), Err(LatticeError::Overflow));
    }

    #[test]
    fn grid_literal() {
        let prod = OrderSpec::product(2).unwrap();
        let g = parse_grid("0,0;1,0;0,1", &prod).unwrap();
        assert_eq!(g.len(), 4);
        assert!(parse_grid("0,0;1", &prod).is_err());
        assert!(parse_grid("a,b", &prod).is_err());
    }
}
