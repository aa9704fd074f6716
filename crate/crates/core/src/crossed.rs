//! Monomial sums `Σ_g u_g b_g` in `B ⋊ G` with `b_g` grid truncations,
//! multiplied by `u_g a · u_h b = u_{g+h} β_h(a) b`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::dilation::{embed_iota, unit_projection, DilationElement};
use crate::dynsys::ClassicalSystem;
use crate::error::{Error, Result};
use crate::lattice::GroupPoint;
use crate::scalar::ScalarFunction;

#[derive(Clone, Debug)]
pub struct CrossedElement {
    points: usize,
    terms: BTreeMap<GroupPoint, DilationElement>,
}

impl CrossedElement {
    pub fn zero(points: usize) -> Self {
        CrossedElement {
            points,
            terms: BTreeMap::new(),
        }
    }

    /// `u_g b`.
    pub fn monomial(g: GroupPoint, b: DilationElement) -> Self {
        CrossedElement {
            points: b.points(),
            terms: BTreeMap::from([(g, b)]),
        }
    }

    /// `u_g p_A`.
    pub fn unit_at(sys: &ClassicalSystem, g: GroupPoint) -> Self {
        Self::monomial(g, unit_projection(sys))
    }

    pub fn terms(&self) -> &BTreeMap<GroupPoint, DilationElement> {
        &self.terms
    }

    pub fn add(&self, sys: &ClassicalSystem, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (g, b) in &other.terms {
            let sum = match terms.get(g) {
                Some(a) => a.add(sys, b),
                None => b.clone(),
            };
            terms.insert(g.clone(), sum);
        }
        CrossedElement {
            points: self.points,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(DilationElement::is_zero)
    }
}

impl PartialEq for CrossedElement {
    fn eq(&self, other: &Self) -> bool {
        let zero = DilationElement::zero(self.points);
        self.points == other.points
            && self.terms.keys().chain(other.terms.keys()).all(|g| {
                self.terms.get(g).unwrap_or(&zero) == other.terms.get(g).unwrap_or(&zero)
            })
    }
}

impl Eq for CrossedElement {}

impl fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, b)| !b.is_zero())
            .map(|(g, b)| format!("u_{g}[{b}]"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    g: &'a GroupPoint,
    element: &'a DilationElement,
}

impl Serialize for CrossedElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            terms: Vec<TermOut<'a>>,
        }
        Out {
            terms: self
                .terms
                .iter()
                .map(|(g, element)| TermOut { g, element })
                .collect(),
        }
        .serialize(serializer)
    }
}

pub fn cross_mul(sys: &ClassicalSystem, x: &CrossedElement, y: &CrossedElement) -> CrossedElement {
    let mut out = CrossedElement::zero(x.points);
    for (g, a) in &x.terms {
        for (h, b) in &y.terms {
            let term = a.shift(h).multiply(sys, b);
            out = out.add(sys, &CrossedElement::monomial(g + h, term));
        }
    }
    out
}

/// `(u_g b)^* = u_{-g} β_{-g}(b^*)`.
pub fn cross_star(x: &CrossedElement) -> CrossedElement {
    CrossedElement {
        points: x.points,
        terms: x
            .terms
            .iter()
            .map(|(g, b)| (-g, b.adjoint().shift(&-g)))
            .collect(),
    }
}

/// The coefficient of `u_0`.
pub fn gauge_expectation(x: &CrossedElement) -> DilationElement {
    let zero_key = x.terms.keys().next().map(|g| GroupPoint::zero(g.rank()));
    zero_key
        .and_then(|k| x.terms.get(&k).cloned())
        .unwrap_or_else(|| DilationElement::zero(x.points))
}

/// `p_A x p_A`.
pub fn corner_compress(sys: &ClassicalSystem, x: &CrossedElement) -> CrossedElement {
    let p = CrossedElement::unit_at(sys, sys.zero());
    cross_mul(sys, &cross_mul(sys, &p, x), &p)
}

/// `(u_{g-} p_A)^* (u_{g+} p_A) (u_h p_A)^* ι(a) (u_h p_A)`, checked against
/// `p_A u_g β_h(ι(a)) p_A`. A mismatch is a defect, never an expected outcome.
pub fn monomial_normal_form(
    sys: &ClassicalSystem,
    g: &GroupPoint,
    h: &GroupPoint,
    a: ScalarFunction,
) -> Result<CrossedElement> {
    let order = sys.order();
    let zero = sys.zero();
    let g_plus = order.join_of(g, &zero);
    let g_minus = order.join_of(&-g, &zero);
    let iota_a = embed_iota(sys, a)?;
    let u_h = CrossedElement::unit_at(sys, h.clone());
    let factors = [
        cross_star(&CrossedElement::unit_at(sys, g_minus)),
        CrossedElement::unit_at(sys, g_plus),
        cross_star(&u_h),
        CrossedElement::monomial(zero.clone(), iota_a.clone()),
        u_h,
    ];
    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = cross_mul(sys, &product, f);
    }
    let expected = corner_compress(sys, &CrossedElement::monomial(g.clone(), iota_a.shift(h)));
    if product != expected {
        return Err(Error::IdentityViolation(format!(
            "normal form at g = {g}, h = {h}: {product} ≠ {expected}"
        )));
    }
    Ok(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::shifted_unit;
    use crate::dynsys::PointMap;
    use crate::lattice::OrderSpec;

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

    fn gp(c: &[i64]) -> GroupPoint {
        GroupPoint::new(c.to_vec())
    }

    #[test]
    fn projection_and_isometries() {
        let sys = worked_example();
        let u0 = CrossedElement::unit_at(&sys, sys.zero());
        assert_eq!(cross_mul(&sys, &u0, &u0), u0);
        let (p, q) = (gp(&[1, 0]), gp(&[1, 2]));
        assert_eq!(
            cross_mul(
                &sys,
                &CrossedElement::unit_at(&sys, p.clone()),
                &CrossedElement::unit_at(&sys, q.clone())
            ),
            CrossedElement::unit_at(&sys, &p + &q)
        );
        let up = CrossedElement::unit_at(&sys, p.clone());
        assert_eq!(cross_mul(&sys, &cross_star(&up), &up), u0);
        assert_eq!(
            cross_mul(&sys, &up, &cross_star(&up)),
            CrossedElement::monomial(sys.zero(), shifted_unit(&sys, &-&p))
        );
    }

    #[test]
    fn expectation_examples() {
        let sys = worked_example();
        let b = embed_iota(&sys, ScalarFunction::from_ints(&[1, 2, 0])).unwrap();
        assert_eq!(gauge_expectation(&CrossedElement::monomial(sys.zero(), b.clone())), b);
        assert!(gauge_expectation(&CrossedElement::unit_at(&sys, gp(&[0, 1]))).is_zero());
        let p = gp(&[1, 1]);
        let a = ScalarFunction::from_ints(&[1, 2, 3]);
        let c = ScalarFunction::from_ints(&[0, 1, 4]);
        let left = cross_mul(
            &sys,
            &CrossedElement::unit_at(&sys, p.clone()),
            &CrossedElement::monomial(sys.zero(), embed_iota(&sys, a.clone()).unwrap()),
        );
        let right = cross_mul(
            &sys,
            &CrossedElement::unit_at(&sys, p.clone()),
            &CrossedElement::monomial(sys.zero(), embed_iota(&sys, c.clone()).unwrap()),
        );
        let e = gauge_expectation(&cross_mul(&sys, &left, &cross_star(&right)));
        let expected = embed_iota(&sys, a.pointwise_mul(&c.conj())).unwrap().shift(&-&p);
        assert_eq!(e, expected);
    }

    #[test]
    fn corner_examples() {
        let sys = worked_example();
        let p = gp(&[0, 1]);
        let up = CrossedElement::unit_at(&sys, p.clone());
        assert_eq!(corner_compress(&sys, &up), up);
        let iota = CrossedElement::monomial(
            sys.zero(),
            embed_iota(&sys, ScalarFunction::from_ints(&[3, 0, 1])).unwrap(),
        );
        assert_eq!(corner_compress(&sys, &iota), iota);
        assert_eq!(
            corner_compress(&sys, &CrossedElement::unit_at(&sys, -&p)),
            cross_star(&up)
        );
    }

    #[test]
    fn normal_form_examples() {
        let sys = worked_example();
        let a = ScalarFunction::delta(3, 1);
        let nf = monomial_normal_form(&sys, &sys.zero(), &sys.zero(), a.clone()).unwrap();
        assert_eq!(
            nf,
            CrossedElement::monomial(sys.zero(), embed_iota(&sys, a.clone()).unwrap())
        );
        monomial_normal_form(&sys, &gp(&[1, -1]), &gp(&[0, 1]), a.clone()).unwrap();
        let p = gp(&[1, 0]);
        let nf = monomial_normal_form(&sys, &p, &sys.zero(), a.clone()).unwrap();
        let iota_a = CrossedElement::monomial(sys.zero(), embed_iota(&sys, a.clone()).unwrap());
        assert_eq!(nf, CrossedElement::monomial(p.clone(), embed_iota(&sys, a.clone()).unwrap()));
        // ι(a) u_p p_A = u_p p_A ι(α_p(a))
        let lhs = cross_mul(&sys, &iota_a, &CrossedElement::unit_at(&sys, p.clone()));
        let rhs = cross_mul(
            &sys,
            &CrossedElement::unit_at(&sys, p.clone()),
            &CrossedElement::monomial(sys.zero(), embed_iota(&sys, sys.act(&p, &a)).unwrap()),
        );
        assert_eq!(lhs, rhs);
    }
}
