//! Truncated noncommutative formal series over the quantum torus: a Laurent
//! base monomial Y^gamma carrying a series supported on the non-negative
//! exponent cone, truncated at a total-degree bound.
//!
//! Internally every term is stored against its absolute normal-ordered
//! monomial: the series is sum_delta terms[delta] * Y^{base+delta}, so
//! rebasing never touches coefficients; the skew twists enter only through
//! products. The base is kept canonical (componentwise minimum of the
//! support), which makes structural equality coincide with termwise equality
//! after prefactor alignment.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::torus::{Algebra, Exponent, TorusElement};

#[derive(Clone, Debug)]
pub struct ConeSeries {
    alg: Arc<Algebra>,
    base: Exponent,
    /// Offset from `base` (non-negative entries, total degree <= order) to
    /// the coefficient of the absolute monomial Y^{base+offset}.
    terms: BTreeMap<Exponent, Coeff>,
    order: i64,
}

/// All cone exponents of length n with total degree <= max_deg, ordered by
/// (total degree, lexicographic).
pub(crate) fn cone_exponents(n: usize, max_deg: i64) -> Vec<Exponent> {
    fn rec(n: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(n, left - v, prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    for deg in 0..=max_deg {
        let mut layer = Vec::new();
        rec(n, deg, &mut Vec::new(), &mut layer);
        layer.retain(|v| v.iter().sum::<i64>() == deg);
        layer.sort();
        all.extend(layer.into_iter().map(Exponent::new));
    }
    all
}

impl ConeSeries {
    fn finish(
        alg: Arc<Algebra>,
        base: Exponent,
        terms: BTreeMap<Exponent, Coeff>,
        order: i64,
    ) -> Self {
        let mut kept: BTreeMap<Exponent, Coeff> = terms
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && e.total_degree() <= order)
            .collect();
        let base = match kept.keys().cloned().reduce(|a, b| a.cmin(&b)) {
            None => Exponent::zero(alg.n()),
            Some(min) => {
                if !min.is_zero() {
                    kept = kept
                        .into_iter()
                        .map(|(e, c)| (e.sub(&min), c))
                        .collect();
                }
                base.add(&min)
            }
        };
        ConeSeries {
            alg,
            base,
            terms: kept,
            order,
        }
    }

    pub fn zero(alg: Arc<Algebra>, order: i64) -> Self {
        let n = alg.n();
        ConeSeries {
            alg,
            base: Exponent::zero(n),
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn one(alg: Arc<Algebra>, order: i64) -> Self {
        let n = alg.n();
        Self::monomial(alg, Exponent::zero(n), Coeff::one(), order)
    }

    /// The single term c * Y^exp.
    pub fn monomial(alg: Arc<Algebra>, exp: Exponent, c: Coeff, order: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent::zero(alg.n()), c);
        }
        ConeSeries {
            alg,
            base: exp,
            terms,
            order,
        }
    }

    pub fn generator(alg: Arc<Algebra>, i: usize, order: i64) -> Self {
        let n = alg.n();
        Self::monomial(alg, Exponent::unit(n, i), Coeff::one(), order)
    }

    /// Exact embedding of a torus element, truncated at the order.
    pub fn from_torus(a: &TorusElement, order: i64) -> Self {
        let alg = Arc::clone(a.algebra());
        let base = match a.terms().keys().cloned().reduce(|x, y| x.cmin(&y)) {
            None => return Self::zero(alg, order),
            Some(min) => min,
        };
        let terms = a
            .terms()
            .iter()
            .map(|(e, c)| (e.sub(&base), c.clone()))
            .collect();
        Self::finish(alg, base, terms, order)
    }

    /// Embedding that refuses to lose terms: errors when the element does not
    /// fit inside the degree-`order` window above its support minimum.
    pub fn try_from_torus_exact(a: &TorusElement, order: i64) -> Result<Self> {
        if let Some(min) = a.terms().keys().cloned().reduce(|x, y| x.cmin(&y)) {
            for e in a.terms().keys() {
                if e.sub(&min).total_degree() > order {
                    return Err(Error::NotConeEmbeddable { order });
                }
            }
        }
        Ok(Self::from_torus(a, order))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn base(&self) -> &Exponent {
        &self.base
    }

    pub fn body(&self) -> &BTreeMap<Exponent, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.base.is_zero()
            && self.terms.len() == 1
            && self
                .terms
                .get(&Exponent::zero(self.alg.n()))
                .is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms with absolute exponents.
    pub fn absolute_terms(&self) -> impl Iterator<Item = (Exponent, &Coeff)> {
        self.terms.iter().map(|(e, c)| (self.base.add(e), c))
    }

    /// Least absolute exponent (lexicographic) with a nonzero coefficient.
    pub fn leading_term(&self) -> Option<(Exponent, Coeff)> {
        self.terms
            .iter()
            .next()
            .map(|(e, c)| (self.base.add(e), c.clone()))
    }

    /// Minimal total degree over the support (absolute), None when zero.
    pub fn min_total_degree(&self) -> Option<i64> {
        self.absolute_terms()
            .map(|(e, _)| e.total_degree())
            .min()
    }

    /// Maximal total degree over the support (absolute), None when zero.
    pub fn max_total_degree(&self) -> Option<i64> {
        self.absolute_terms()
            .map(|(e, _)| e.total_degree())
            .max()
    }

    /// Image under the torus automorphism Y^a -> Y^{-a} (the skew form is
    /// invariant under joint negation, so products are preserved exactly).
    /// Swaps which corner of the support the truncation window is anchored
    /// at; exact on the stored terms.
    pub fn mirror(&self) -> Self {
        let negated: Vec<(Exponent, Coeff)> = self
            .absolute_terms()
            .map(|(e, c)| (e.neg(), c.clone()))
            .collect();
        let base = negated
            .iter()
            .map(|(e, _)| e.clone())
            .reduce(|a, b| a.cmin(&b))
            .unwrap_or_else(|| Exponent::zero(self.alg.n()));
        let terms = negated
            .into_iter()
            .map(|(e, c)| (e.sub(&base), c))
            .collect();
        ConeSeries {
            alg: Arc::clone(&self.alg),
            base,
            terms,
            order: self.order,
        }
    }

    /// Restriction to total degree <= new_order above the base.
    pub fn truncated(&self, new_order: i64) -> Self {
        Self::finish(
            Arc::clone(&self.alg),
            self.base.clone(),
            self.terms.clone(),
            new_order.min(self.order),
        )
    }

    pub fn scalar_mul(&self, s: &Coeff) -> Self {
        if s.is_zero() {
            return Self::zero(Arc::clone(&self.alg), self.order);
        }
        ConeSeries {
            alg: Arc::clone(&self.alg),
            base: self.base.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
            order: self.order,
        }
    }

    pub fn neg(&self) -> Self {
        self.scalar_mul(&Coeff::from_int(-1))
    }

    /// Termwise sum after aligning both supports over the common prefactor
    /// (the componentwise minimum of the two bases).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::MixedAlgebra);
        }
        let order = self.order.min(other.order);
        let base = self.base.cmin(&other.base);
        let mut terms: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (src, src_base) in [(self, &self.base), (other, &other.base)] {
            let shift = src_base.sub(&base);
            for (e, c) in &src.terms {
                let key = e.add(&shift);
                match terms.get_mut(&key) {
                    Some(acc) => *acc = &*acc + c,
                    None => {
                        terms.insert(key, c.clone());
                    }
                }
            }
        }
        Ok(Self::finish(Arc::clone(&self.alg), base, terms, order))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Noncommutative product, truncated at the common order above the
    /// combined prefactor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::MixedAlgebra);
        }
        let order = self.order.min(other.order);
        let base = self.base.add(&other.base);
        let mut terms: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if da > order {
                continue;
            }
            let abs_a = self.base.add(ea);
            for (eb, cb) in &other.terms {
                if da + eb.total_degree() > order {
                    continue;
                }
                let abs_b = other.base.add(eb);
                let qpow = -self.alg.skew(&abs_a, &abs_b);
                let c = &(ca * cb) * &Coeff::q_pow(qpow);
                let key = ea.add(eb);
                match terms.get_mut(&key) {
                    Some(acc) => *acc = &*acc + &c,
                    None => {
                        terms.insert(key, c);
                    }
                }
            }
        }
        Ok(Self::finish(Arc::clone(&self.alg), base, terms, order))
    }

    /// Two-sided inverse up to the truncation order. Requires the constant
    /// term above the base to be a unit (nonzero with z-free numerator).
    pub fn invert(&self) -> Result<Self> {
        let n = self.alg.n();
        let zero_off = Exponent::zero(n);
        let c0 = self.terms.get(&zero_off).ok_or(Error::NonUnitConstantTerm)?;
        let c0_inv = c0.invert().map_err(|e| match e {
            Error::ZDependentInverse(_) | Error::ZeroDivision => Error::NonUnitConstantTerm,
            other => other,
        })?;
        // Strip the base: u = Y^{-base} * self has cone support and unit
        // constant term; u_delta = q^{lambda(base, delta)} * terms[delta].
        // Note u_0 = c0 since lambda(base, 0) = 0.
        let mut u: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (e, c) in &self.terms {
            let tw = self.alg.skew(&self.base, e);
            u.insert(e.clone(), c * &Coeff::q_pow(tw));
        }
        // Solve u * v = 1 degree by degree.
        let neg_c0_inv = -&c0_inv;
        let mut v: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        v.insert(zero_off, c0_inv);
        for delta in cone_exponents(n, self.order) {
            if delta.is_zero() {
                continue;
            }
            let mut acc = Coeff::zero();
            for (eps, ue) in &u {
                if eps.is_zero() {
                    continue;
                }
                let rest = delta.sub(eps);
                if !rest.is_cone() {
                    continue;
                }
                if let Some(vr) = v.get(&rest) {
                    let tw = -self.alg.skew(eps, &rest);
                    acc = &acc + &(&(ue * vr) * &Coeff::q_pow(tw));
                }
            }
            if !acc.is_zero() {
                v.insert(delta, &acc * &neg_c0_inv);
            }
        }
        // Reattach the inverse prefactor: result = v * Y^{-base}.
        let inv_base = self.base.neg();
        let mut terms: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (e, c) in v {
            let tw = self.alg.skew(&e, &self.base);
            terms.insert(e, &c * &Coeff::q_pow(tw));
        }
        Ok(Self::finish(
            Arc::clone(&self.alg),
            inv_base,
            terms,
            self.order,
        ))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, m: i64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::one(Arc::clone(&self.alg), self.order));
        }
        let b = if m < 0 { self.invert()? } else { self.clone() };
        let mut out = b.clone();
        for _ in 1..m.abs() {
            out = out.mul(&b)?;
        }
        Ok(out)
    }

    /// Classical image: q = 1 in every coefficient, over the commutative
    /// algebra with the same exchange data.
    pub fn eval_q1(&self) -> Result<Self> {
        let alg = self.alg.classical();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(e.clone(), c.eval_q1()?);
        }
        Ok(Self::finish(alg, self.base.clone(), terms, self.order))
    }
}

impl PartialEq for ConeSeries {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.base == other.base && self.terms == other.terms
    }
}

impl fmt::Display for ConeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Pure monomial: print without the bracket.
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Exponent::zero(self.alg.n())) {
                return if self.base.is_zero() {
                    write!(f, "{c}")
                } else if c.is_one() {
                    write!(f, "Y^{}", self.base)
                } else {
                    write!(f, "{c} Y^{}", self.base)
                };
            }
        }
        let factored = !self.base.is_zero();
        if factored {
            write!(f, "Y^{} * (", self.base)?;
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            // Body coefficient in the factored form Y^base * sum c'_d Y^d.
            let c = if factored {
                &c.clone() * &Coeff::q_pow(self.alg.skew(&self.base, e))
            } else {
                c.clone()
            };
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "Y^{e}")?;
            } else {
                write!(f, "{c} Y^{e}")?;
            }
        }
        if factored {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ZVar;
    use crate::torus::{ExchangeData, IntMatrix};

    fn alg() -> Arc<Algebra> {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        Algebra::quantum(ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap())
    }

    fn z() -> Coeff {
        Coeff::z(ZVar { i: 1, s: 1 })
    }

    /// 1 + z q^2 Y_1 + q^4 Y_1^2 as a torus element.
    fn bracket(alg: &Arc<Algebra>) -> TorusElement {
        let one = TorusElement::one(Arc::clone(alg));
        let t1 = TorusElement::monomial(
            Arc::clone(alg),
            Exponent::new(vec![1, 0]),
            &z() * &Coeff::q_pow(2),
        );
        let t2 = TorusElement::monomial(Arc::clone(alg), Exponent::new(vec![2, 0]), Coeff::q_pow(4));
        one.add(&t1).unwrap().add(&t2).unwrap()
    }

    #[test]
    fn from_torus_examples() {
        let alg = alg();
        let s = ConeSeries::from_torus(&bracket(&alg), 8);
        assert!(s.base().is_zero());
        assert_eq!(s.term_count(), 3);
        assert_eq!(
            s.body().get(&Exponent::new(vec![1, 0])),
            Some(&(&z() * &Coeff::q_pow(2)))
        );

        let y1_inv = TorusElement::monomial(
            Arc::clone(&alg),
            Exponent::new(vec![-1, 0]),
            Coeff::one(),
        );
        let s = ConeSeries::from_torus(&y1_inv, 8);
        assert_eq!(s.base(), &Exponent::new(vec![-1, 0]));
        assert_eq!(s.term_count(), 1);

        let y1 = TorusElement::generator(Arc::clone(&alg), 0);
        let y2 = TorusElement::generator(Arc::clone(&alg), 1);
        let s = ConeSeries::from_torus(&y1.add(&y2).unwrap(), 8);
        assert!(s.base().is_zero());
        assert_eq!(s.term_count(), 2);
    }

    #[test]
    fn exact_embedding_guard() {
        let alg = alg();
        assert!(ConeSeries::try_from_torus_exact(&bracket(&alg), 1).is_err());
        assert!(ConeSeries::try_from_torus_exact(&bracket(&alg), 2).is_ok());
    }

    #[test]
    fn product_matches_torus_normal_form() {
        let alg = alg();
        let y1 = ConeSeries::generator(Arc::clone(&alg), 0, 8);
        let y2 = ConeSeries::generator(Arc::clone(&alg), 1, 8);
        let lhs = y1.mul(&y2).unwrap();
        let t = TorusElement::generator(Arc::clone(&alg), 0)
            .mul(&TorusElement::generator(Arc::clone(&alg), 1))
            .unwrap();
        assert_eq!(lhs, ConeSeries::from_torus(&t, 8));
    }

    #[test]
    fn one_is_neutral() {
        let alg = alg();
        let a = ConeSeries::from_torus(&bracket(&alg), 8);
        let one = ConeSeries::one(Arc::clone(&alg), 8);
        assert_eq!(a.mul(&one).unwrap(), a);
        assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn associativity_sample() {
        let alg = alg();
        let a = ConeSeries::from_torus(&bracket(&alg), 6);
        let y2 = ConeSeries::generator(Arc::clone(&alg), 1, 6);
        let b = y2.add(&ConeSeries::one(Arc::clone(&alg), 6)).unwrap();
        let c = a.add(&y2).unwrap();
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn geometric_inverse_oracle() {
        // (1 + q^2 Y_2)^{-1} = sum (-1)^k q^{2k} Y_2^k
        let alg = alg();
        let n = 8;
        let one = ConeSeries::one(Arc::clone(&alg), n);
        let t = ConeSeries::monomial(
            Arc::clone(&alg),
            Exponent::new(vec![0, 1]),
            Coeff::q_pow(2),
            n,
        );
        let a = one.add(&t).unwrap();
        let inv = a.invert().unwrap();
        let mut expected = ConeSeries::zero(Arc::clone(&alg), n);
        for k in 0..=n {
            let c = &Coeff::from_int(if k % 2 == 0 { 1 } else { -1 }) * &Coeff::q_pow(2 * k);
            expected = expected
                .add(&ConeSeries::monomial(
                    Arc::clone(&alg),
                    Exponent::new(vec![0, k]),
                    c,
                    n,
                ))
                .unwrap();
        }
        assert_eq!(inv, expected);
        assert!(a.mul(&inv).unwrap().is_one());
        assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn monomial_inverse() {
        let alg = alg();
        let y1 = ConeSeries::generator(Arc::clone(&alg), 0, 8);
        let inv = y1.invert().unwrap();
        assert_eq!(inv.base(), &Exponent::new(vec![-1, 0]));
        assert!(y1.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn bracket_inverse_pairs() {
        let alg = alg();
        let a = ConeSeries::from_torus(&bracket(&alg), 10);
        let inv = a.invert().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
        assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn non_unit_constant_term_rejected() {
        let alg = alg();
        let y1 = ConeSeries::generator(Arc::clone(&alg), 0, 8);
        let y2 = ConeSeries::generator(Arc::clone(&alg), 1, 8);
        // support {e1, e2}: componentwise minimum (0,0) not attained
        let s = y1.add(&y2).unwrap();
        assert!(matches!(s.invert(), Err(Error::NonUnitConstantTerm)));
    }

    #[test]
    fn add_aligns_prefactors() {
        let alg = alg();
        let y1_inv = ConeSeries::generator(Arc::clone(&alg), 0, 8)
            .invert()
            .unwrap();
        let s = y1_inv.add(&ConeSeries::one(Arc::clone(&alg), 8)).unwrap();
        assert_eq!(s.base(), &Exponent::new(vec![-1, 0]));
        assert_eq!(s.body().get(&Exponent::new(vec![0, 0])), Some(&Coeff::one()));
        assert_eq!(s.body().get(&Exponent::new(vec![1, 0])), Some(&Coeff::one()));
    }

    #[test]
    fn mixed_prefactor_sum_embeds() {
        // Y_1 + Y_2^{-1} Y_1^2 aligns over the componentwise minimum.
        let alg = alg();
        let y1 = ConeSeries::generator(Arc::clone(&alg), 0, 8);
        let y2_inv = ConeSeries::generator(Arc::clone(&alg), 1, 8)
            .invert()
            .unwrap();
        let s = y1.add(&y2_inv.mul(&y1.pow(2).unwrap()).unwrap()).unwrap();
        assert_eq!(s.base(), &Exponent::new(vec![1, -1]));
        assert_eq!(s.term_count(), 2);
        assert_eq!(s.body().get(&Exponent::new(vec![0, 1])), Some(&Coeff::one()));
        assert!(s.body().contains_key(&Exponent::new(vec![1, 0])));
    }

    #[test]
    fn powers() {
        let alg = alg();
        let y1 = ConeSeries::generator(Arc::clone(&alg), 0, 8);
        assert_eq!(y1.pow(2).unwrap().base(), &Exponent::new(vec![2, 0]));
        assert!(y1.pow(0).unwrap().is_one());

        let one = ConeSeries::one(Arc::clone(&alg), 8);
        let t = ConeSeries::monomial(
            Arc::clone(&alg),
            Exponent::new(vec![0, 1]),
            Coeff::q_pow(2),
            8,
        );
        let a = one.add(&t).unwrap();
        assert!(a.pow(-1).unwrap().mul(&a).unwrap().is_one());
    }

    #[test]
    fn classical_image() {
        let alg = alg();
        let y2 = ConeSeries::generator(Arc::clone(&alg), 1, 8);
        let quantum = y2
            .mul(&ConeSeries::from_torus(&bracket(&alg), 8))
            .unwrap();
        let classical = quantum.eval_q1().unwrap();
        // y_2 (1 + z y_1 + y_1^2)
        let calg = alg.classical();
        let cy1 = ConeSeries::generator(Arc::clone(&calg), 0, 8);
        let cy2 = ConeSeries::generator(Arc::clone(&calg), 1, 8);
        let cone = ConeSeries::one(Arc::clone(&calg), 8);
        let expected = cy2
            .mul(
                &cone
                    .add(&cy1.scalar_mul(&z()))
                    .unwrap()
                    .add(&cy1.pow(2).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(classical, expected);

        // q^4 Y^{(2,1)} -> y_1^2 y_2
        let m = ConeSeries::monomial(
            Arc::clone(&alg),
            Exponent::new(vec![2, 1]),
            Coeff::q_pow(4),
            8,
        );
        let c = m.eval_q1().unwrap();
        assert_eq!(c.leading_term().unwrap().1, Coeff::one());
    }

    #[test]
    fn truncation_is_homomorphism() {
        let alg = alg();
        let a = ConeSeries::from_torus(&bracket(&alg), 8);
        let y2 = ConeSeries::generator(Arc::clone(&alg), 1, 8);
        let b = ConeSeries::one(Arc::clone(&alg), 8).add(&y2).unwrap();
        let full = a.mul(&b).unwrap().truncated(4);
        let low = a.truncated(4).mul(&b.truncated(4)).unwrap();
        assert_eq!(full, low);
    }
}
