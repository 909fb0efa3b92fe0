//! Exact scalar arithmetic for the engine: Laurent polynomials in `q` with
//! arbitrary-precision integer coefficients and polynomial dependence on the
//! frozen coefficients `z[i,s]`, quotiented by z-free polynomial denominators
//! in `q`.
//!
//! A [`Coeff`] is a fraction `num / den` where `num` lives in Z[q^{±1}][z]
//! and `den` in Z[q]. Denominators are kept z-free: no formula in scope ever
//! inverts a z-dependent scalar (the constant terms of all inverted series
//! are 1). Reduction is best-effort — integer content, the q-monomial
//! content of the denominator, and a univariate gcd in q are always
//! extracted — and equality is decided by cross-multiplication, so it does
//! not depend on the reduction state.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qpoly::{self, Dense};

/// Identifier of a frozen coefficient `z[i,s]` (1-based labels, 1 <= s <= d_i - 1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ZVar {
    pub i: usize,
    pub s: usize,
}

impl fmt::Display for ZVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z[{},{}]", self.i, self.s)
    }
}

/// Multiplicative monomial in the frozen coefficients; the empty monomial is 1.
/// Zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ZMonomial(BTreeMap<ZVar, u32>);

impl ZMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: ZVar) -> Self {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        ZMonomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(*v).or_insert(0) += e;
        }
        ZMonomial(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&ZVar, &u32)> {
        self.0.iter()
    }
}

impl fmt::Display for ZMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Element of Z[q^{±1}][z]: a canonical mapping from (z-monomial, q-exponent)
/// to a nonzero integer. Two polynomials are equal iff the maps are identical.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<(ZMonomial, i64), BigInt>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(ZMonomial::one(), 0, BigInt::one())
    }

    pub fn term(z: ZMonomial, qexp: i64, c: BigInt) -> Self {
        let mut p = Self::default();
        p.add_term(z, qexp, c);
        p
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::term(ZMonomial::one(), 0, n.into())
    }

    pub fn q_pow(k: i64) -> Self {
        Self::term(ZMonomial::one(), k, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, z: ZMonomial, qexp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (z, qexp);
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((z, e), c) in &other.terms {
            out.add_term(z.clone(), *e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((za, ea), ca) in &self.terms {
            for ((zb, eb), cb) in &other.terms {
                out.add_term(za.mul(zb), ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn shift_q(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|((z, e), c)| ((z.clone(), e + k), c.clone()))
                .collect(),
        }
    }

    pub fn min_q_exp(&self) -> Option<i64> {
        self.terms.keys().map(|(_, e)| *e).min()
    }

    pub fn max_q_exp(&self) -> Option<i64> {
        self.terms.keys().map(|(_, e)| *e).max()
    }

    pub fn is_z_free(&self) -> bool {
        self.terms.keys().all(|(z, _)| z.is_one())
    }

    /// Split into z-monomial components, each a shifted dense q-polynomial
    /// `(min exponent, coefficients)` with nonzero constant term.
    fn z_components(&self) -> Vec<(ZMonomial, i64, Dense)> {
        let mut out: Vec<(ZMonomial, i64, Dense)> = Vec::new();
        for ((z, e), c) in &self.terms {
            match out.last_mut() {
                Some((zl, shift, dense)) if zl == z => {
                    let idx = (e - *shift) as usize;
                    if dense.len() <= idx {
                        dense.resize(idx + 1, BigInt::zero());
                    }
                    dense[idx] = c.clone();
                }
                _ => {
                    out.push((z.clone(), *e, vec![c.clone()]));
                }
            }
        }
        out
    }

    fn from_z_components(comps: Vec<(ZMonomial, i64, Dense)>) -> Self {
        let mut p = Self::default();
        for (z, shift, dense) in comps {
            for (j, c) in dense.into_iter().enumerate() {
                p.add_term(z.clone(), shift + j as i64, c);
            }
        }
        p
    }

    /// Dense representation of a z-free polynomial together with its q-shift.
    fn as_dense(&self) -> Option<(i64, Dense)> {
        if !self.is_z_free() {
            return None;
        }
        if self.is_zero() {
            return Some((0, Vec::new()));
        }
        let shift = self.min_q_exp().unwrap();
        let max = self.max_q_exp().unwrap();
        let mut dense = vec![BigInt::zero(); (max - shift + 1) as usize];
        for ((_, e), c) in &self.terms {
            dense[(e - shift) as usize] = c.clone();
        }
        Some((shift, dense))
    }

    fn from_dense(shift: i64, dense: &Dense) -> Self {
        let mut p = Self::default();
        for (j, c) in dense.iter().enumerate() {
            p.add_term(ZMonomial::one(), shift + j as i64, c.clone());
        }
        p
    }

    /// Sum of the coefficients of each z-monomial: the value at q = 1.
    fn eval_q1(&self) -> Self {
        let mut p = Self::default();
        for ((z, _), c) in &self.terms {
            p.add_term(z.clone(), 0, c.clone());
        }
        p
    }

    fn eval_numeric(&self, q: Complex64, zvals: &BTreeMap<ZVar, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((z, e), c) in &self.terms {
            let mut t = q.powi(i32::try_from(*e).expect("q exponent fits in i32"));
            for (v, exp) in z.vars() {
                let zv = zvals.get(v).ok_or(Error::UnboundZ { i: v.i, s: v.s })?;
                t *= zv.powi(i32::try_from(*exp).unwrap());
            }
            let cf = c.to_f64().expect("integer coefficient fits in f64");
            acc += t * cf;
        }
        Ok(acc)
    }

    fn leading_int(&self) -> Option<&BigInt> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((z, e), c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let mut wrote = false;
            if !a.is_one() || (z.is_one() && *e == 0) {
                write!(f, "{a}")?;
                wrote = true;
            }
            if *e != 0 {
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "q^{e}")?;
                wrote = true;
            }
            if !z.is_one() {
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{z}")?;
            }
        }
        Ok(())
    }
}

/// Exact scalar: a fraction of a Laurent polynomial in q with z-polynomial
/// coefficients over a z-free polynomial in q. The denominator is normalized
/// (nonzero constant term, positive leading integer); equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct Coeff {
    num: CoeffPoly,
    den: CoeffPoly,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            num: CoeffPoly::zero(),
            den: CoeffPoly::one(),
        }
    }

    pub fn one() -> Self {
        Coeff {
            num: CoeffPoly::one(),
            den: CoeffPoly::one(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Coeff {
            num: CoeffPoly::from_int(n),
            den: CoeffPoly::one(),
        }
    }

    /// q^k, Laurent exponents allowed.
    pub fn q_pow(k: i64) -> Self {
        Coeff {
            num: CoeffPoly::q_pow(k),
            den: CoeffPoly::one(),
        }
    }

    /// The frozen coefficient z[i,s] as a symbolic scalar.
    pub fn z(v: ZVar) -> Self {
        Coeff {
            num: CoeffPoly::term(ZMonomial::var(v), 0, BigInt::one()),
            den: CoeffPoly::one(),
        }
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = den.into();
        if d.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(Self::normalized(
            CoeffPoly::from_int(num),
            CoeffPoly::from_int(d),
        ))
    }

    /// Build from raw parts; the denominator must be nonzero and z-free.
    pub fn from_parts(num: CoeffPoly, den: CoeffPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if !den.is_z_free() {
            return Err(Error::ZDependentInverse(den.to_string()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn num(&self) -> &CoeffPoly {
        &self.num
    }

    pub fn den(&self) -> &CoeffPoly {
        &self.den
    }

    fn normalized(num: CoeffPoly, den: CoeffPoly) -> Self {
        debug_assert!(!den.is_zero() && den.is_z_free());
        if num.is_zero() {
            return Self::zero();
        }
        // Shift the denominator to constant term 1..; the numerator absorbs
        // the q-monomial.
        let dshift = den.min_q_exp().unwrap();
        let mut num = num.shift_q(-dshift);
        let (_, mut dden) = den.shift_q(-dshift).as_dense().unwrap();

        let den_is_trivial = qpoly::degree(&dden) == 0 && dden[0].magnitude().is_one();
        if !den_is_trivial {
            // Best-effort reduction: gcd of the denominator with every
            // z-component of the numerator, all univariate in q.
            let comps = num.z_components();
            let mut g = dden.clone();
            for (_, _, dense) in &comps {
                g = qpoly::gcd(&g, dense);
                if qpoly::degree(&g) == 0 && g[0].is_one() {
                    break;
                }
            }
            if qpoly::degree(&g) > 0 || !g[0].is_one() {
                dden = qpoly::div_exact(&dden, &g).expect("gcd divides denominator");
                let reduced = comps
                    .into_iter()
                    .map(|(z, shift, dense)| {
                        (
                            z,
                            shift,
                            qpoly::div_exact(&dense, &g).expect("gcd divides numerator"),
                        )
                    })
                    .collect();
                num = CoeffPoly::from_z_components(reduced);
            }
        }
        let mut den = CoeffPoly::from_dense(0, &dden);
        if den.leading_int().is_some_and(|c| c.is_negative()) {
            den = den.neg();
            num = num.neg();
        }
        Coeff { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_z_free(&self) -> bool {
        self.num.is_z_free()
    }

    /// Reciprocal. Fails on zero and on z-dependent numerators.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if !self.num.is_z_free() {
            return Err(Error::ZDependentInverse(self.num.to_string()));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut out = Coeff::one();
        for _ in 0..k.abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Substitute q = 1. Fails when the denominator vanishes there.
    pub fn eval_q1(&self) -> Result<Self> {
        let d1 = self.den.eval_q1();
        if d1.is_zero() {
            return Err(Error::PoleAtOne(self.den.to_string()));
        }
        Ok(Self::normalized(self.num.eval_q1(), d1))
    }

    /// Evaluate at a complex q with all frozen coefficients bound.
    pub fn eval_numeric(
        &self,
        q: Complex64,
        zvals: &BTreeMap<ZVar, Complex64>,
        pole_eps: f64,
    ) -> Result<Complex64> {
        let dv = self.den.eval_numeric(q, zvals)?;
        if dv.norm() < pole_eps {
            return Err(Error::NumericPole {
                q: format!("{q}"),
                mag: dv.norm(),
            });
        }
        Ok(self.num.eval_numeric(q, zvals)? / dv)
    }

    /// Order of vanishing at q = 0 (minimal q-exponent of the fraction).
    /// None for the zero scalar.
    pub fn q_valuation(&self) -> Option<i64> {
        self.num.min_q_exp()
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        // Cross-multiplication: decidable regardless of reduction state.
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Coeff {}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Coeff::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Coeff::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        Coeff::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == CoeffPoly::one() {
            if self.num.term_count() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
