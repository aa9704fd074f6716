//! Truncations of the product dilation: formal sums `Σ_{g∈F} β_{-g} ι(a_g)`
//! over a join-closed grid `F`, evaluated on demand.
//!
//! The entry of such a sum at `h ∈ G` is `Σ_{g∈F, g≤h} α_{h-g}(a_g)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::dynsys::ClassicalSystem;
use crate::error::{Error, Result, SystemError};
use crate::lattice::{box_points, grid_closure, Grid, GroupPoint};
use crate::par::Exec;
use crate::scalar::{Scalar, ScalarFunction};

/// `Σ_{g} β_{-g} ι(a_g)`; the keys form the grid.
#[derive(Clone, Debug)]
pub struct DilationElement {
    points: usize,
    coeffs: BTreeMap<GroupPoint, ScalarFunction>,
}

impl DilationElement {
    pub fn zero(points: usize) -> Self {
        DilationElement {
            points,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds an element from grid-indexed coefficients; the grid must be
    /// join-closed in the system's order.
    pub fn from_coeffs(
        sys: &ClassicalSystem,
        coeffs: BTreeMap<GroupPoint, ScalarFunction>,
    ) -> Result<Self> {
        for (g, f) in &coeffs {
            sys.check_function(f)?;
            if g.rank() != sys.rank() {
                return Err(crate::error::LatticeError::DimensionMismatch {
                    expected: sys.rank(),
                    found: g.rank(),
                }
                .into());
            }
        }
        Grid::from_closed(coeffs.keys().cloned(), sys.order())?;
        Ok(DilationElement {
            points: sys.points(),
            coeffs,
        })
    }

    pub(crate) fn from_parts(points: usize, coeffs: BTreeMap<GroupPoint, ScalarFunction>) -> Self {
        DilationElement { points, coeffs }
    }

    /// `β_{-g} ι(a)`.
    pub fn monomial(sys: &ClassicalSystem, g: GroupPoint, a: ScalarFunction) -> Result<Self> {
        Self::from_coeffs(sys, BTreeMap::from([(g, a)]))
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn coeffs(&self) -> &BTreeMap<GroupPoint, ScalarFunction> {
        &self.coeffs
    }

    pub fn grid_points(&self) -> impl Iterator<Item = &GroupPoint> {
        self.coeffs.keys()
    }

    pub fn coeff(&self, g: &GroupPoint) -> Option<&ScalarFunction> {
        self.coeffs.get(g)
    }

    /// Every coefficient vanishes; by uniqueness of the representation this
    /// is the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(ScalarFunction::is_zero)
    }

    /// Coordinatewise lower and upper corners of the grid.
    pub fn corners(&self) -> Option<(GroupPoint, GroupPoint)> {
        let mut it = self.coeffs.keys();
        let first = it.next()?.clone();
        let (mut lo, mut hi) = (first.clone(), first);
        for g in it {
            for i in 0..g.rank() {
                lo.0[i] = lo.0[i].min(g.0[i]);
                hi.0[i] = hi.0[i].max(g.0[i]);
            }
        }
        Some((lo, hi))
    }

    /// Same element with extra zero coefficients on `grid`.
    pub fn padded(&self, sys: &ClassicalSystem, grid: &Grid) -> Self {
        let mut keys: BTreeSet<GroupPoint> = self.coeffs.keys().cloned().collect();
        keys.extend(grid.iter().cloned());
        let closed = grid_closure(&keys, sys.order()).expect("ranks already checked");
        let coeffs = closed
            .iter()
            .map(|g| {
                let f = self
                    .coeffs
                    .get(g)
                    .cloned()
                    .unwrap_or_else(|| ScalarFunction::zeros(self.points));
                (g.clone(), f)
            })
            .collect();
        DilationElement {
            points: self.points,
            coeffs,
        }
    }

    /// `β_g(x)`: the grid moves to `F - g`.
    pub fn shift(&self, g: &GroupPoint) -> Self {
        DilationElement {
            points: self.points,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, a)| (k - g, a.clone()))
                .collect(),
        }
    }

    /// `Σ_{g≤h} α_{h-g}(a_g)`.
    pub fn entry_at(&self, sys: &ClassicalSystem, h: &GroupPoint) -> ScalarFunction {
        let mut out = ScalarFunction::zeros(self.points);
        for (g, a) in &self.coeffs {
            if sys.order().le(g, h) {
                out += &sys.act(&(h - g), a);
            }
        }
        out
    }

    pub fn add(&self, sys: &ClassicalSystem, other: &Self) -> Self {
        let keys: Vec<GroupPoint> = self.coeffs.keys().chain(other.coeffs.keys()).cloned().collect();
        let grid = grid_closure(&keys, sys.order()).expect("ranks already checked");
        let zero = ScalarFunction::zeros(self.points);
        let coeffs = grid
            .iter()
            .map(|g| {
                let a = self.coeffs.get(g).unwrap_or(&zero);
                let b = other.coeffs.get(g).unwrap_or(&zero);
                (g.clone(), a + b)
            })
            .collect();
        DilationElement {
            points: self.points,
            coeffs,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DilationElement {
            points: self.points,
            coeffs: self.coeffs.iter().map(|(g, a)| (g.clone(), a.scale(c))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, sys: &ClassicalSystem, other: &Self) -> Self {
        self.add(sys, &other.neg())
    }

    /// `β_{-g}ι(a) · β_{-h}ι(b) = β_{-(g∨h)} ι(α_{g∨h-g}(a) α_{g∨h-h}(b))`,
    /// extended bilinearly. Pairwise joins of two grids are join-closed.
    pub fn multiply(&self, sys: &ClassicalSystem, other: &Self) -> Self {
        let mut coeffs: BTreeMap<GroupPoint, ScalarFunction> = BTreeMap::new();
        for (g, a) in &self.coeffs {
            for (h, b) in &other.coeffs {
                let k = sys.order().join_of(g, h);
                let term = sys
                    .act(&(&k - g), a)
                    .pointwise_mul(&sys.act(&(&k - h), b));
                match coeffs.get_mut(&k) {
                    Some(c) => *c += &term,
                    None => {
                        coeffs.insert(k, term);
                    }
                }
            }
        }
        DilationElement {
            points: self.points,
            coeffs,
        }
    }

    /// Entries are conjugated in place, so the coefficients are too.
    pub fn adjoint(&self) -> Self {
        DilationElement {
            points: self.points,
            coeffs: self.coeffs.iter().map(|(g, a)| (g.clone(), a.conj())).collect(),
        }
    }

    /// Box containing every distinct entry pattern: `[min F, max F + c + p]`
    /// per coordinate. Below `min F` nothing is `≤ h`; past `max F + c` the
    /// down-set is all of `F`, every exponent is at least `c`, and entries
    /// repeat with period `p`.
    pub fn evaluation_box(&self, sys: &ClassicalSystem) -> Option<(GroupPoint, GroupPoint)> {
        let (lo, mut hi) = self.corners()?;
        for (i, per) in sys.periodicity().iter().enumerate() {
            hi.0[i] += per.window() as i64;
        }
        Some((lo, hi))
    }

    /// `sup_h |entry_at(h)|^2`, exact.
    pub fn sup_norm_sqr(&self, sys: &ClassicalSystem, exec: Exec) -> BigRational {
        let Some((lo, hi)) = self.evaluation_box(sys) else {
            return BigRational::zero();
        };
        self.sup_norm_sqr_on(sys, &lo, &hi, exec)
    }

    pub fn sup_norm_sqr_on(
        &self,
        sys: &ClassicalSystem,
        lo: &GroupPoint,
        hi: &GroupPoint,
        exec: Exec,
    ) -> BigRational {
        let pts = box_points(lo, hi);
        exec.map(&pts, |h| self.entry_at(sys, h).max_norm_sqr())
            .into_iter()
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Semantic equality: coefficients agree with missing keys read as zero.
    pub fn same_as(&self, other: &Self) -> bool {
        let zero = ScalarFunction::zeros(self.points);
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .all(|g| self.coeffs.get(g).unwrap_or(&zero) == other.coeffs.get(g).unwrap_or(&zero))
    }
}

impl PartialEq for DilationElement {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.same_as(other)
    }
}

impl Eq for DilationElement {}

impl fmt::Display for DilationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(g, a)| {
                if g.is_zero() {
                    format!("ι{a}")
                } else {
                    format!("β_{}ι{a}", -g)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize)]
struct CoeffEntry<'a> {
    g: &'a GroupPoint,
    values: &'a ScalarFunction,
}

#[derive(Serialize)]
struct ElementOut<'a> {
    grid: Vec<&'a GroupPoint>,
    coefficients: Vec<CoeffEntry<'a>>,
}

impl Serialize for DilationElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementOut {
            grid: self.coeffs.keys().collect(),
            coefficients: self
                .coeffs
                .iter()
                .map(|(g, values)| CoeffEntry { g, values })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// `ι(f)`: grid `{0}`.
pub fn embed_iota(sys: &ClassicalSystem, f: ScalarFunction) -> Result<DilationElement> {
    DilationElement::monomial(sys, sys.zero(), f)
}

/// `p_A = ι(1)`.
pub fn unit_projection(sys: &ClassicalSystem) -> DilationElement {
    embed_iota(sys, ScalarFunction::ones(sys.points())).expect("unit has the right length")
}

/// `β_g(p_A)`: the indicator of `{h : h ≥ -g}`.
pub fn shifted_unit(sys: &ClassicalSystem, g: &GroupPoint) -> DilationElement {
    unit_projection(sys).shift(g)
}

pub fn sup_norm_sqr(sys: &ClassicalSystem, x: &DilationElement) -> BigRational {
    x.sup_norm_sqr(sys, Exec::default())
}

/// Least `p ∈ P` with `β_p(p_A) x = x`.
///
/// The set of such `p` is an up-set closed under meets, so greedy
/// coordinate descent from `∨_g ((-g) ∨ 0)` lands on its least element.
pub fn approx_identity_index(sys: &ClassicalSystem, x: &DilationElement) -> GroupPoint {
    let order = sys.order();
    let mut p = sys.zero();
    if x.is_zero() {
        return p;
    }
    for g in x.grid_points() {
        let neg = (-g).clone();
        p = order.join_of(&p, &order.join_of(&neg, &sys.zero()));
    }
    let fixes = |p: &GroupPoint| shifted_unit(sys, p).multiply(sys, x) == *x;
    debug_assert!(fixes(&p));
    for i in 0..p.rank() {
        while p.0[i] > 0 {
            let mut q = p.clone();
            q.0[i] -= 1;
            if fixes(&q) {
                p = q;
            } else {
                break;
            }
        }
    }
    p
}

/// One named identity family and how it fared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl AxiomCheck {
    fn new(name: &str) -> Self {
        AxiomCheck {
            name: name.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NicaReport {
    pub radius: i64,
    pub checks: Vec<AxiomCheck>,
}

impl NicaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }
}

fn radius_box(sys: &ClassicalSystem, radius: i64) -> Vec<GroupPoint> {
    let r = sys.rank();
    box_points(
        &GroupPoint(vec![-radius; r]),
        &GroupPoint(vec![radius; r]),
    )
}

/// Unit steps of the positive cone (finest step for chains).
pub fn cone_generators(sys: &ClassicalSystem) -> Vec<GroupPoint> {
    (0..sys.rank()).map(|i| sys.unit(i)).collect()
}

/// Checks, by exact element equality:
/// `p_A β_p(ι(a)) = ι(α_p(a))` for cone generators `p` and point masses `a`;
/// `β_g(p_A) β_h(p_A) = β_{g∧h}(p_A)` for `g, h` in `[-r, r]^n`;
/// `β_p(p_A)` commutes with test elements and fixes them once `p` is large.
pub fn verify_nica_axioms(sys: &ClassicalSystem, radius: i64) -> NicaReport {
    let order = sys.order();
    let n = sys.points();
    let p_a = unit_projection(sys);

    let mut covariance = AxiomCheck::new("p_A β_p(ι(a)) = ι(α_p(a))");
    for p in cone_generators(sys) {
        for z in 0..n {
            let a = ScalarFunction::delta(n, z);
            let lhs = p_a.multiply(sys, &embed_iota(sys, a.clone()).expect("len").shift(&p));
            let rhs = embed_iota(sys, sys.act(&p, &a)).expect("len");
            covariance.record(lhs == rhs, || format!("p = {p}, a = δ{}", z + 1));
        }
    }

    let window = radius_box(sys, radius);
    let mut nica = AxiomCheck::new("β_g(p_A) β_h(p_A) = β_{g∧h}(p_A)");
    for g in &window {
        for h in &window {
            let lhs = shifted_unit(sys, g).multiply(sys, &shifted_unit(sys, h));
            let rhs = shifted_unit(sys, &order.meet_of(g, h));
            nica.record(lhs == rhs, || format!("g = {g}, h = {h}"));
        }
    }

    // test elements: shifted point masses across the window
    let tests: Vec<DilationElement> = window
        .iter()
        .flat_map(|g| {
            (0..n).map(move |z| {
                embed_iota(sys, ScalarFunction::delta(n, z))
                    .expect("len")
                    .shift(g)
            })
        })
        .collect();
    let mut central = AxiomCheck::new("β_p(p_A) x = x β_p(p_A)");
    let mut approx = AxiomCheck::new("β_p(p_A) x = x for p past the grid");
    for x in &tests {
        for p in window.iter().filter(|p| order.is_positive(p)) {
            let e = shifted_unit(sys, p);
            central.record(e.multiply(sys, x) == x.multiply(sys, &e), || {
                format!("p = {p}, x = {x}")
            });
        }
        let idx = approx_identity_index(sys, x);
        approx.record(shifted_unit(sys, &idx).multiply(sys, x) == *x, || {
            format!("x = {x}, index {idx}")
        });
    }

    NicaReport {
        radius,
        checks: vec![covariance, nica, central, approx],
    }
}

/// Compares `entry_at(x·y, h)` with `entry_at(x, h)·entry_at(y, h)` on a box
/// covering both grids; `multiply` is injectable so faults can be planted.
pub fn product_oracle_check<M>(
    sys: &ClassicalSystem,
    x: &DilationElement,
    y: &DilationElement,
    multiply: M,
) -> Result<usize>
where
    M: Fn(&ClassicalSystem, &DilationElement, &DilationElement) -> DilationElement,
{
    check_same_system(sys, x)?;
    check_same_system(sys, y)?;
    let xy = multiply(sys, x, y);
    let sum = x.add(sys, y);
    let Some((lo, hi)) = sum.evaluation_box(sys) else {
        return Ok(0);
    };
    let pts = box_points(&lo, &hi);
    for h in &pts {
        let lhs = xy.entry_at(sys, h);
        let rhs = x.entry_at(sys, h).pointwise_mul(&y.entry_at(sys, h));
        if lhs != rhs {
            return Err(Error::IdentityViolation(format!(
                "product entry at {h}: got {lhs}, expected {rhs}"
            )));
        }
    }
    Ok(pts.len())
}

pub(crate) fn check_same_system(sys: &ClassicalSystem, x: &DilationElement) -> Result<()> {
    if x.points != sys.points() {
        return Err(SystemError::FunctionLength {
            expected: sys.points(),
            found: x.points,
        }
        .into());
    }
    Ok(())
}
