//! Finite classical systems `(X, φ, P)` and the ideal calculus of `C(X)`.
//!
//! Every closed ideal of `C(X)` with `X` finite is `{f : f|_S = 0}` for a
//! unique `S ⊆ X`, so ideals are carried by their zero sets and all ideal
//! operations become set algebra.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, SystemError};
use crate::lattice::{GroupPoint, OrderSpec};
use crate::scalar::ScalarFunction;

/// A self-map of `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointMap(Vec<usize>);

impl PointMap {
    pub fn new(images: Vec<usize>) -> Self {
        PointMap(images)
    }

    /// From 1-based image indices, as written in system files.
    pub fn from_one_based(images: &[usize]) -> Self {
        PointMap(images.iter().map(|&i| i.wrapping_sub(1)).collect())
    }

    pub fn identity(n: usize) -> Self {
        PointMap((0..n).collect())
    }

    pub fn constant(n: usize, target: usize) -> Self {
        PointMap(vec![target; n])
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &PointMap) -> PointMap {
        PointMap(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn power(&self, k: u64) -> PointMap {
        let mut out = PointMap::identity(self.len());
        for _ in 0..k {
            out = self.after(&out);
        }
        out
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    pub fn image_of<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> BTreeSet<usize> {
        set.into_iter().map(|&x| self.0[x]).collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.image().len() == self.len()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// Index and period of the power sequence `id, φ, φ², ...`.
    ///
    /// The index is the longest tail in the functional graph and the period
    /// is the lcm of the cycle lengths.
    pub fn periodicity(&self) -> Periodicity {
        let n = self.len();
        let mut index = 0usize;
        let mut period = 1usize;
        let mut cycle_len: Vec<Option<usize>> = vec![None; n];
        for start in 0..n {
            // walk until a repeated point; positions give tail and cycle
            let mut seen: HashMap<usize, usize> = HashMap::new();
            let mut x = start;
            let mut step = 0;
            while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(x) {
                e.insert(step);
                x = self.0[x];
                step += 1;
            }
            let entered = seen[&x];
            index = index.max(entered);
            let len = step - entered;
            if cycle_len[x].is_none() {
                cycle_len[x] = Some(len);
                period = period.lcm(&len);
            }
        }
        Periodicity { index, period }
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_based())
    }
}

/// `φ^{index+period} = φ^{index}`, both minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub index: usize,
    pub period: usize,
}

impl Periodicity {
    /// Smallest exponent with the same power as `e`.
    pub fn reduce(&self, e: u64) -> usize {
        let index = self.index as u64;
        if e < index {
            e as usize
        } else {
            (index + (e - index) % self.period as u64) as usize
        }
    }

    /// Number of distinct powers, `index + period`.
    pub fn window(&self) -> usize {
        self.index + self.period
    }
}

/// The on-disk form of a system (1-based images).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub order: OrderSpec,
    pub points: usize,
    pub generators: Vec<Vec<usize>>,
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::SystemFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system files always serialize")
    }
}

/// A finite set `X` with commuting generator maps over a lattice order.
///
/// Product order: one generator per coordinate. Chain order: one map per
/// level, coarsest first, each the appropriate power of the next; the
/// finest map alone drives the action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSystem {
    order: OrderSpec,
    points: usize,
    generators: Vec<PointMap>,
    periodicity: Vec<Periodicity>,
    // powers[i][k] = (action generator i)^k for k < window
    powers: Vec<Vec<PointMap>>,
}

impl ClassicalSystem {
    pub fn new(
        order: OrderSpec,
        points: usize,
        generators: Vec<PointMap>,
    ) -> Result<Self, SystemError> {
        order.validate()?;
        if points == 0 {
            return Err(SystemError::EmptySpace);
        }
        let expected = match &order {
            OrderSpec::Lex { rank } if *rank >= 2 => return Err(SystemError::LexAction(*rank)),
            OrderSpec::Product { rank } | OrderSpec::Lex { rank } => *rank,
            OrderSpec::Chain { levels } => levels.len(),
        };
        if generators.len() != expected {
            return Err(SystemError::GeneratorCount {
                expected,
                found: generators.len(),
            });
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != points {
                return Err(SystemError::MapLength {
                    generator: i + 1,
                    expected: points,
                    found: g.len(),
                });
            }
            if let Some((x, &y)) = g.0.iter().enumerate().find(|(_, &y)| y >= points) {
                return Err(SystemError::ImageOutOfRange {
                    generator: i + 1,
                    point: x + 1,
                    image: y.wrapping_add(1),
                    points,
                });
            }
        }
        match &order {
            OrderSpec::Chain { levels } => {
                for i in 0..levels.len() - 1 {
                    let power = levels[i + 1] / levels[i];
                    let expected = generators[i + 1].power(power);
                    if let Some(x) = (0..points).find(|&x| expected.0[x] != generators[i].0[x]) {
                        return Err(SystemError::ChainIncompatible {
                            level: i + 1,
                            next: i + 2,
                            power,
                            point: x + 1,
                        });
                    }
                }
            }
            _ => {
                for i in 0..generators.len() {
                    for j in i + 1..generators.len() {
                        let left = generators[i].after(&generators[j]);
                        let right = generators[j].after(&generators[i]);
                        if let Some(x) = (0..points).find(|&x| left.0[x] != right.0[x]) {
                            return Err(SystemError::NonCommuting {
                                first: i + 1,
                                second: j + 1,
                                point: x + 1,
                                left: left.0[x] + 1,
                                right: right.0[x] + 1,
                            });
                        }
                    }
                }
            }
        }
        let action: Vec<&PointMap> = match &order {
            OrderSpec::Chain { .. } => vec![generators.last().expect("levels are nonempty")],
            _ => generators.iter().collect(),
        };
        let periodicity: Vec<Periodicity> = action.iter().map(|g| g.periodicity()).collect();
        let powers = action
            .iter()
            .zip(&periodicity)
            .map(|(g, per)| {
                let mut list = vec![PointMap::identity(points)];
                for k in 1..per.window() {
                    let next = g.after(&list[k - 1]);
                    list.push(next);
                }
                list
            })
            .collect();
        Ok(ClassicalSystem {
            order,
            points,
            generators,
            periodicity,
            powers,
        })
    }

    pub fn from_file(file: &SystemFile) -> Result<Self, SystemError> {
        let gens = file
            .generators
            .iter()
            .map(|g| PointMap::from_one_based(g))
            .collect();
        ClassicalSystem::new(file.order.clone(), file.points, gens)
    }

    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            order: self.order.clone(),
            points: self.points,
            generators: self.generators.iter().map(PointMap::one_based).collect(),
        }
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn generators(&self) -> &[PointMap] {
        &self.generators
    }

    /// Per-coordinate eventual periodicity of the acting maps.
    pub fn periodicity(&self) -> &[Periodicity] {
        &self.periodicity
    }

    /// The map driving coordinate `i` (for chains, the finest level).
    pub fn action_generator(&self, i: usize) -> &PointMap {
        &self.powers[i][1.min(self.powers[i].len() - 1)]
    }

    /// `max_i (index_i + period_i)`.
    pub fn periodicity_bound(&self) -> usize {
        self.periodicity.iter().map(Periodicity::window).max().unwrap_or(1)
    }

    pub fn is_product_like(&self) -> bool {
        !matches!(self.order, OrderSpec::Chain { .. })
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.order, OrderSpec::Chain { .. })
    }

    pub fn is_injective(&self) -> bool {
        self.generators.iter().all(PointMap::is_bijective)
    }

    pub fn zero(&self) -> GroupPoint {
        self.order.zero()
    }

    pub fn unit(&self, i: usize) -> GroupPoint {
        GroupPoint::unit(self.rank(), i)
    }

    fn check_exponent(&self, v: &GroupPoint) -> Result<(), SystemError> {
        if v.rank() != self.rank() {
            return Err(crate::error::LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.rank(),
            }
            .into());
        }
        if !self.order.is_positive(v) {
            return Err(SystemError::NotPositive(v.clone()));
        }
        Ok(())
    }

    /// `φ^v` for `v` in the cone (not rechecked).
    pub(crate) fn map_for(&self, v: &GroupPoint) -> PointMap {
        let mut out: Option<PointMap> = None;
        for (i, &e) in v.coords().iter().enumerate() {
            debug_assert!(e >= 0);
            let k = self.periodicity[i].reduce(e as u64);
            let m = &self.powers[i][k];
            out = Some(match out {
                None => m.clone(),
                Some(acc) => m.after(&acc),
            });
        }
        out.unwrap_or_else(|| PointMap::identity(self.points))
    }

    /// `φ^v`, with each exponent reduced by its generator's periodicity.
    pub fn map_at(&self, v: &GroupPoint) -> Result<PointMap, SystemError> {
        self.check_exponent(v)?;
        Ok(self.map_for(v))
    }

    /// `α_v(f) = f ∘ φ^v`.
    pub fn apply_exponent(
        &self,
        v: &GroupPoint,
        f: &ScalarFunction,
    ) -> Result<ScalarFunction, SystemError> {
        self.check_function(f)?;
        Ok(f.compose(self.map_at(v)?.images()))
    }

    pub(crate) fn act(&self, v: &GroupPoint, f: &ScalarFunction) -> ScalarFunction {
        f.compose(self.map_for(v).images())
    }

    pub fn check_function(&self, f: &ScalarFunction) -> Result<(), SystemError> {
        if f.len() != self.points {
            return Err(SystemError::FunctionLength {
                expected: self.points,
                found: f.len(),
            });
        }
        Ok(())
    }

    /// `φ^v(X)`.
    pub fn image_set(&self, v: &GroupPoint) -> Result<BTreeSet<usize>, SystemError> {
        Ok(self.map_at(v)?.image())
    }

    /// `ker α_v`, the functions vanishing on `φ^v(X)`.
    pub fn kernel_ideal(&self, v: &GroupPoint) -> Result<ZeroSetIdeal, SystemError> {
        Ok(ZeroSetIdeal::new(self.points, self.image_set(v)?))
    }

    /// `α_v^{-1}(I)`: `f ∘ φ^v` vanishes on `S` iff `f` vanishes on `φ^v(S)`.
    pub fn preimage_ideal(
        &self,
        v: &GroupPoint,
        ideal: &ZeroSetIdeal,
    ) -> Result<ZeroSetIdeal, SystemError> {
        let map = self.map_at(v)?;
        Ok(ZeroSetIdeal::new(self.points, map.image_of(&ideal.zero_set)))
    }

    /// Smallest forward-invariant set containing `seed`.
    pub fn forward_closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.into_iter().collect();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for i in 0..self.rank() {
                let y = self.action_generator(i).apply(x);
                if set.insert(y) {
                    stack.push(y);
                }
            }
        }
        set
    }

    pub fn is_invariant(&self, set: &BTreeSet<usize>) -> bool {
        (0..self.rank()).all(|i| {
            let g = self.action_generator(i);
            set.iter().all(|&x| set.contains(&g.apply(x)))
        })
    }
}

/// Outcome of validating a system file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub order: String,
    pub points: usize,
    pub error: Option<String>,
    /// 1-based point where commutativity or chain compatibility first fails.
    pub witness_point: Option<usize>,
    pub periodicity: Vec<Periodicity>,
}

pub fn validate_system(file: &SystemFile) -> ValidationReport {
    match ClassicalSystem::from_file(file) {
        Ok(sys) => ValidationReport {
            valid: true,
            order: sys.order.kind_name().into(),
            points: sys.points,
            error: None,
            witness_point: None,
            periodicity: sys.periodicity.clone(),
        },
        Err(e) => {
            let witness_point = match &e {
                SystemError::NonCommuting { point, .. }
                | SystemError::ChainIncompatible { point, .. }
                | SystemError::ImageOutOfRange { point, .. } => Some(*point),
                _ => None,
            };
            ValidationReport {
                valid: false,
                order: file.order.kind_name().into(),
                points: file.points,
                error: Some(e.to_string()),
                witness_point,
                periodicity: Vec::new(),
            }
        }
    }
}

/// The ideal `{f ∈ C(X) : f|_S = 0}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZeroSetIdeal {
    points: usize,
    zero_set: BTreeSet<usize>,
}

impl ZeroSetIdeal {
    pub fn new(points: usize, zero_set: BTreeSet<usize>) -> Self {
        debug_assert!(zero_set.iter().all(|&z| z < points));
        ZeroSetIdeal { points, zero_set }
    }

    /// The zero ideal (vanishing everywhere).
    pub fn zero(points: usize) -> Self {
        ZeroSetIdeal::new(points, (0..points).collect())
    }

    /// The whole algebra.
    pub fn full(points: usize) -> Self {
        ZeroSetIdeal::new(points, BTreeSet::new())
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn zero_set(&self) -> &BTreeSet<usize> {
        &self.zero_set
    }

    pub fn zero_set_one_based(&self) -> Vec<usize> {
        self.zero_set.iter().map(|z| z + 1).collect()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.zero_set.len() == self.points
    }

    pub fn is_full(&self) -> bool {
        self.zero_set.is_empty()
    }

    /// `I^⊥`: the complement of the zero set.
    pub fn annihilator(&self) -> Self {
        ZeroSetIdeal::new(
            self.points,
            (0..self.points)
                .filter(|z| !self.zero_set.contains(z))
                .collect(),
        )
    }

    /// `I ∩ J`.
    pub fn meet(&self, other: &Self) -> Self {
        ZeroSetIdeal::new(
            self.points,
            self.zero_set.union(&other.zero_set).copied().collect(),
        )
    }

    /// `I + J`.
    pub fn sum(&self, other: &Self) -> Self {
        ZeroSetIdeal::new(
            self.points,
            self.zero_set.intersection(&other.zero_set).copied().collect(),
        )
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Self) -> bool {
        self.zero_set.is_subset(&other.zero_set)
    }

    pub fn contains(&self, f: &ScalarFunction) -> bool {
        f.vanishes_on(&self.zero_set)
    }

    /// Canonical representative of `f` modulo the ideal: keeps the values on
    /// the zero set and clears everything else.
    pub fn reduce(&self, f: &ScalarFunction) -> ScalarFunction {
        let mut out = ScalarFunction::zeros(f.len());
        for &z in &self.zero_set {
            out.set(z, f.get(z).clone());
        }
        out
    }
}

pub fn annihilator(ideal: &ZeroSetIdeal) -> ZeroSetIdeal {
    ideal.annihilator()
}

pub fn ideal_meet(a: &ZeroSetIdeal, b: &ZeroSetIdeal) -> ZeroSetIdeal {
    a.meet(b)
}

pub fn ideal_sum(a: &ZeroSetIdeal, b: &ZeroSetIdeal) -> ZeroSetIdeal {
    a.sum(b)
}

/// `b ⊆ a`.
pub fn ideal_contains(a: &ZeroSetIdeal, b: &ZeroSetIdeal) -> bool {
    a.contains_ideal(b)
}

impl fmt::Display for ZeroSetIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.zero_set.iter().map(|z| (z + 1).to_string()).collect();
        write!(f, "zero_set{{{}}}", pts.join(","))
    }
}

impl Serialize for ZeroSetIdeal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.zero_set_one_based().serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    /// A proper nonempty invariant subset (1-based) when not minimal.
    pub witness: Option<Vec<usize>>,
}

/// No proper nonempty forward-invariant subset exists.
pub fn is_minimal(sys: &ClassicalSystem) -> MinimalityVerdict {
    let smallest = (0..sys.points)
        .map(|x| sys.forward_closure([x]))
        .min_by_key(|s| s.len())
        .expect("nonempty space");
    if smallest.len() == sys.points {
        MinimalityVerdict {
            minimal: true,
            witness: None,
        }
    } else {
        MinimalityVerdict {
            minimal: false,
            witness: Some(smallest.iter().map(|z| z + 1).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionVerdict {
    pub distinct: bool,
    /// `v ≠ w` in the cone with `φ^v = φ^w`.
    pub witness: Option<(GroupPoint, GroupPoint)>,
}

/// Whether `v ↦ φ^v` is injective on the cone. On a finite nonempty space
/// the first generator's power sequence always repeats.
pub fn distinct_maps_check(sys: &ClassicalSystem) -> CollisionVerdict {
    let per = sys.periodicity[0];
    let e = sys.unit(0);
    let v = e.scale(per.index as i64).expect("small exponent");
    let w = e.scale(per.window() as i64).expect("small exponent");
    debug_assert_eq!(sys.map_for(&v), sys.map_for(&w));
    CollisionVerdict {
        distinct: false,
        witness: Some((v, w)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub minimal: MinimalityVerdict,
    pub maps: CollisionVerdict,
    pub simple: bool,
}

/// Simple envelope iff the system is minimal and `p ↦ φ_p` is injective.
pub fn simplicity_verdict(sys: &ClassicalSystem) -> SimplicityReport {
    let minimal = is_minimal(sys);
    let maps = distinct_maps_check(sys);
    let simple = minimal.minimal && maps.distinct;
    SimplicityReport {
        minimal,
        maps,
        simple,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GroupPoint;

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

    fn z_system(images: &[usize]) -> ClassicalSystem {
        ClassicalSystem::new(
            OrderSpec::product(1).unwrap(),
            images.len(),
            vec![PointMap::from_one_based(images)],
        )
        .unwrap()
    }

    fn set(pts: &[usize]) -> BTreeSet<usize> {
        pts.iter().map(|p| p - 1).collect()
    }

    #[test]
    fn validation_examples() {
        let sys = worked_example();
        assert_eq!(sys.periodicity()[0], Periodicity { index: 1, period: 1 });
        let bad = ClassicalSystem::new(
            OrderSpec::product(2).unwrap(),
            2,
            vec![
                PointMap::from_one_based(&[2, 1]),
                PointMap::from_one_based(&[1, 1]),
            ],
        );
        assert!(matches!(
            bad,
            Err(SystemError::NonCommuting { point: 1, left: 2, right: 1, .. })
        ));
        let ident = ClassicalSystem::new(
            OrderSpec::product(2).unwrap(),
            4,
            vec![PointMap::identity(4), PointMap::identity(4)],
        );
        assert!(ident.is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        let prod = OrderSpec::product(1).unwrap();
        assert_eq!(
            ClassicalSystem::new(prod.clone(), 0, vec![PointMap::identity(0)]),
            Err(SystemError::EmptySpace)
        );
        assert!(matches!(
            ClassicalSystem::new(prod.clone(), 2, vec![PointMap::from_one_based(&[1, 3])]),
            Err(SystemError::ImageOutOfRange { point: 2, image: 3, .. })
        ));
        assert!(matches!(
            ClassicalSystem::new(prod, 2, vec![]),
            Err(SystemError::GeneratorCount { .. })
        ));
        assert!(matches!(
            ClassicalSystem::new(
                OrderSpec::lex(2).unwrap(),
                1,
                vec![PointMap::identity(1), PointMap::identity(1)]
            ),
            Err(SystemError::LexAction(2))
        ));
        // coarse level must be the square of the fine one
        let chain = OrderSpec::chain(vec![1, 2]).unwrap();
        assert!(matches!(
            ClassicalSystem::new(
                chain.clone(),
                2,
                vec![PointMap::from_one_based(&[2, 1]), PointMap::from_one_based(&[2, 1])]
            ),
            Err(SystemError::ChainIncompatible { .. })
        ));
        assert!(ClassicalSystem::new(
            chain,
            2,
            vec![PointMap::identity(2), PointMap::from_one_based(&[2, 1])]
        )
        .is_ok());
    }

    #[test]
    fn apply_exponent_examples() {
        let sys = worked_example();
        let f = ScalarFunction::from_ints(&[1, 1, 0]);
        assert_eq!(sys.apply_exponent(&sys.zero(), &f).unwrap(), f);
        assert_eq!(
            sys.apply_exponent(&GroupPoint::new(vec![1, 1]), &f).unwrap(),
            ScalarFunction::from_ints(&[0, 0, 0])
        );
        assert_eq!(
            sys.apply_exponent(&GroupPoint::new(vec![1_000_000_000, 0]), &f)
                .unwrap(),
            sys.apply_exponent(&GroupPoint::new(vec![1, 0]), &f).unwrap()
        );
        assert!(matches!(
            sys.apply_exponent(&GroupPoint::new(vec![-1, 0]), &f),
            Err(SystemError::NotPositive(_))
        ));
    }

    #[test]
    fn kernel_and_image_examples() {
        let sys = worked_example();
        assert_eq!(sys.image_set(&sys.unit(0)).unwrap(), set(&[1, 3]));
        assert_eq!(
            sys.kernel_ideal(&GroupPoint::new(vec![1, 1])).unwrap().zero_set(),
            &set(&[3])
        );
        let swap = z_system(&[2, 1]);
        assert!(swap.kernel_ideal(&swap.unit(0)).unwrap().is_zero_ideal());
    }

    #[test]
    fn annihilator_examples() {
        let i = ZeroSetIdeal::new(3, set(&[1, 3]));
        assert_eq!(i.annihilator().zero_set(), &set(&[2]));
        assert!(ZeroSetIdeal::zero(3).annihilator().is_full());
        assert_eq!(i.annihilator().annihilator(), i);
        assert!(i.meet(&i.annihilator()).is_zero_ideal());
    }

    #[test]
    fn preimage_examples() {
        let sys = worked_example();
        let i = ZeroSetIdeal::new(3, set(&[2]));
        assert_eq!(sys.preimage_ideal(&sys.zero(), &i).unwrap(), i);
        assert_eq!(sys.preimage_ideal(&sys.unit(1), &i).unwrap(), i);
        let konst = z_system(&[3, 3, 3]);
        let j = ZeroSetIdeal::new(3, set(&[3]));
        assert_eq!(konst.preimage_ideal(&konst.unit(0), &j).unwrap(), j);
    }

    #[test]
    fn ideal_algebra_examples() {
        let a = ZeroSetIdeal::new(3, set(&[1, 3]));
        let b = ZeroSetIdeal::new(3, set(&[2, 3]));
        assert!(ideal_meet(&a, &b).is_zero_ideal());
        assert_eq!(ideal_meet(&a, &ZeroSetIdeal::full(3)), a);
        assert!(ideal_contains(&ZeroSetIdeal::full(3), &a));
        assert_eq!(ideal_sum(&a, &b).zero_set(), &set(&[3]));
        assert!(!ideal_contains(&a, &ZeroSetIdeal::full(3)));
    }

    #[test]
    fn reduce_keeps_values_on_zero_set() {
        let q = ZeroSetIdeal::new(3, set(&[2]));
        let f = ScalarFunction::from_ints(&[4, 5, 6]);
        assert_eq!(q.reduce(&f), ScalarFunction::from_ints(&[0, 5, 0]));
        assert!(q.contains(&(&f - &q.reduce(&f))));
    }

    #[test]
    fn minimality_examples() {
        let one = z_system(&[1]);
        assert!(is_minimal(&one).minimal);
        let v = is_minimal(&worked_example());
        assert!(!v.minimal);
        assert_eq!(v.witness, Some(vec![3]));
        assert!(is_minimal(&z_system(&[2, 3, 1])).minimal);
    }

    #[test]
    fn collision_examples() {
        let ident = z_system(&[1]);
        assert_eq!(
            distinct_maps_check(&ident).witness,
            Some((GroupPoint::new(vec![0]), GroupPoint::new(vec![1])))
        );
        assert_eq!(
            distinct_maps_check(&z_system(&[2, 1])).witness,
            Some((GroupPoint::new(vec![0]), GroupPoint::new(vec![2])))
        );
        assert_eq!(
            distinct_maps_check(&worked_example()).witness,
            Some((GroupPoint::new(vec![1, 0]), GroupPoint::new(vec![2, 0])))
        );
    }

    #[test]
    fn simplicity_examples() {
        for sys in [z_system(&[1]), worked_example(), z_system(&[2, 3, 1])] {
            assert!(!simplicity_verdict(&sys).simple);
        }
        let rot = simplicity_verdict(&z_system(&[2, 3, 1]));
        assert!(rot.minimal.minimal);
        assert_eq!(
            rot.maps.witness,
            Some((GroupPoint::new(vec![0]), GroupPoint::new(vec![3])))
        );
    }

    #[test]
    fn periodicity_matches_brute_force() {
        let maps: [&[usize]; 5] = [&[1, 3, 3], &[2, 3, 1], &[2, 1, 4, 5, 3], &[2, 3, 4, 4], &[1]];
        for images in maps {
            let m = PointMap::from_one_based(images);
            // first repeat in the power sequence
            let mut seen: HashMap<PointMap, usize> = HashMap::new();
            let mut cur = PointMap::identity(m.len());
            let mut k = 0;
            let (index, period) = loop {
                if let Some(&first) = seen.get(&cur) {
                    break (first, k - first);
                }
                seen.insert(cur.clone(), k);
                cur = m.after(&cur);
                k += 1;
            };
            assert_eq!(m.periodicity(), Periodicity { index, period }, "{images:?}");
        }
    }

    #[test]
    fn system_file_round_trip() {
        let text = r#"{"order": {"type":"product","rank":2}, "points": 3, "generators": [[1,3,3],[3,2,3]]}"#;
        let file = SystemFile::from_json(text).unwrap();
        let sys = ClassicalSystem::from_file(&file).unwrap();
        assert_eq!(sys, worked_example());
        assert_eq!(sys.to_file(), file);
        let chain = r#"{"order": {"type":"chain","levels":[1,2,6]}, "points": 1, "generators": [[1],[1],[1]]}"#;
        assert!(ClassicalSystem::from_file(&SystemFile::from_json(chain).unwrap()).is_ok());
        assert!(SystemFile::from_json("{not json").is_err());
    }
}
