//! The quantum torus T(B): exchange data (B, d, r, z), the skew bilinear form
//! twisting the multiplication, and Laurent-polynomial elements in the
//! normal-ordered basis Y^alpha.
//!
//! Generators satisfy Y_i Y_j = q^{2 r_j d_j b_ji} Y_j Y_i, and the
//! normal-ordered monomials compose as Y^a Y^b = q^{-lambda(a,b)} Y^{a+b}
//! with lambda(a,b) = sum_ij a_i r_i d_i b_ij b_j.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::{Coeff, ZVar};
use crate::error::{Error, Result};

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    n: usize,
    a: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), n * n, "matrix entries must be n*n");
        IntMatrix { n, a: entries }
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            n: self.n,
            a: self.a.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Integer exponent vector of a normal-ordered monomial Y^alpha.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(v: Vec<i64>) -> Self {
        Exponent(v)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_cone(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise minimum.
    pub fn cmin(&self, other: &Self) -> Self {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A sign, identified with +1 / -1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(v: i64) -> Option<Sign> {
        match v.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "+" } else { "-" })
    }
}

/// Value bound to a frozen coefficient z[i,s]: left symbolic or fixed to an
/// exact rational.
#[derive(Clone, PartialEq, Debug)]
pub enum ZValue {
    Symbolic,
    Rational(Coeff),
}

impl ZValue {
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        Ok(ZValue::Rational(Coeff::rational(num, den)?))
    }
}

/// The data (B, d, r, z) fixing a quantum torus and its generalized mutations:
/// skew-symmetrizable exchange matrix B, mutation degrees d, weights r with
/// r_i d_i b_ij = -r_j d_j b_ji, and frozen coefficients z[i,s] subject to the
/// reciprocity z[i,s] = z[i,d_i-s].
#[derive(Clone, PartialEq, Debug)]
pub struct ExchangeData {
    b: IntMatrix,
    d: Vec<i64>,
    r: Vec<i64>,
    /// Canonical half of the z table: keys (i, s) with 1-based i and
    /// s <= d_i - s.
    z: BTreeMap<(usize, usize), ZValue>,
}

impl ExchangeData {
    pub fn new(
        b: IntMatrix,
        d: Vec<i64>,
        r: Vec<i64>,
        z: BTreeMap<(usize, usize), ZValue>,
    ) -> Result<Self> {
        let n = b.n();
        if d.len() != n || r.len() != n {
            return Err(Error::InvalidExchangeData(format!(
                "expected {n} mutation degrees and {n} weights"
            )));
        }
        if let Some(i) = d.iter().position(|&x| x < 1) {
            return Err(Error::InvalidExchangeData(format!(
                "mutation degree d[{}] = {} must be positive",
                i + 1,
                d[i]
            )));
        }
        if let Some(i) = r.iter().position(|&x| x < 1) {
            return Err(Error::InvalidExchangeData(format!(
                "weight r[{}] = {} must be positive",
                i + 1,
                r[i]
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if r[i] * d[i] * b.get(i, j) != -r[j] * d[j] * b.get(j, i) {
                    return Err(Error::InvalidExchangeData(format!(
                        "matrix is not skew-symmetrizable by the weights: \
                         r[{i1}]*d[{i1}]*b[{i1},{j1}] = {lhs} but -r[{j1}]*d[{j1}]*b[{j1},{i1}] = {rhs}",
                        i1 = i + 1,
                        j1 = j + 1,
                        lhs = r[i] * d[i] * b.get(i, j),
                        rhs = -r[j] * d[j] * b.get(j, i),
                    )));
                }
            }
        }
        // Fold the z table onto its canonical half and check reciprocity.
        let mut canon: BTreeMap<(usize, usize), ZValue> = BTreeMap::new();
        for ((i, s), v) in z {
            if i < 1 || i > n {
                return Err(Error::InvalidExchangeData(format!(
                    "z[{i},{s}]: index {i} out of range 1..={n}"
                )));
            }
            let di = d[i - 1] as usize;
            if s < 1 || s > di - 1 {
                return Err(Error::InvalidExchangeData(format!(
                    "z[{i},{s}]: power index {s} out of range 1..={}",
                    di - 1
                )));
            }
            let sc = s.min(di - s);
            match canon.get(&(i, sc)) {
                Some(prev) if *prev != v => {
                    return Err(Error::InvalidExchangeData(format!(
                        "reciprocity z[{i},{s}] = z[{i},{}] violated",
                        di - s
                    )));
                }
                _ => {
                    canon.insert((i, sc), v);
                }
            }
        }
        // Materialize the full canonical half so that defaulted and explicit
        // symbolic tables compare equal.
        for i in 1..=n {
            for s in 1..=(d[i - 1] / 2) as usize {
                canon.entry((i, s)).or_insert(ZValue::Symbolic);
            }
        }
        Ok(ExchangeData { b, d, r, z: canon })
    }

    /// All frozen coefficients left symbolic.
    pub fn with_symbolic_z(b: IntMatrix, d: Vec<i64>, r: Vec<i64>) -> Result<Self> {
        Self::new(b, d, r, BTreeMap::new())
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn r(&self, i: usize) -> i64 {
        self.r[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.d
    }

    pub fn weights(&self) -> &[i64] {
        &self.r
    }

    /// q_i = q^{r_i d_i}: the exponent r_i d_i (0-based index).
    pub fn q_base_exp(&self, i: usize) -> i64 {
        self.r[i] * self.d[i]
    }

    /// The scalar z[i,s] for 0-based index i and 0 <= s <= d_i. Boundary
    /// values z[i,0] = z[i,d_i] = 1; interior values resolve through the
    /// reciprocity-canonical table, defaulting to a symbolic marker.
    pub fn z_coeff(&self, i: usize, s: usize) -> Coeff {
        let di = self.d[i] as usize;
        assert!(s <= di, "z power index out of range");
        if s == 0 || s == di {
            return Coeff::one();
        }
        let sc = s.min(di - s);
        match self.z.get(&(i + 1, sc)) {
            Some(ZValue::Rational(c)) => c.clone(),
            _ => Coeff::z(ZVar { i: i + 1, s: sc }),
        }
    }

    /// Raw canonical z table (1-based keys).
    pub fn z_table(&self) -> &BTreeMap<(usize, usize), ZValue> {
        &self.z
    }
}

/// The skew bilinear form lambda(a, b) = sum_ij a_i r_i d_i b_ij b_j derived
/// from the exchange data. lambda(e_i, e_j) = r_i d_i b_ij and
/// lambda(a, b) = -lambda(b, a).
#[derive(Clone, PartialEq, Debug)]
pub struct SkewForm {
    lambda: IntMatrix,
}

impl SkewForm {
    pub fn from_exchange_data(ed: &ExchangeData) -> Self {
        let n = ed.n();
        let mut lambda = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                lambda.set(i, j, ed.r(i) * ed.d(i) * ed.b().get(i, j));
            }
        }
        SkewForm { lambda }
    }

    pub fn apply(&self, a: &Exponent, b: &Exponent) -> i64 {
        let n = self.lambda.n();
        let mut acc = 0;
        for i in 0..n {
            let ai = a.get(i);
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                acc += ai * self.lambda.get(i, j) * b.get(j);
            }
        }
        acc
    }
}

/// Shared handle fixing the algebra all elements live in: the exchange data
/// plus whether the torus is the quantum one or its classical (q = 1,
/// commutative) image.
#[derive(PartialEq, Debug)]
pub struct Algebra {
    ed: ExchangeData,
    skew: SkewForm,
    commutative: bool,
}

impl Algebra {
    pub fn quantum(ed: ExchangeData) -> Arc<Self> {
        let skew = SkewForm::from_exchange_data(&ed);
        Arc::new(Algebra {
            ed,
            skew,
            commutative: false,
        })
    }

    /// The commutative image of the same exchange data, used for classical
    /// (q = 1) computations.
    pub fn classical(self: &Arc<Self>) -> Arc<Self> {
        if self.commutative {
            return Arc::clone(self);
        }
        let skew = SkewForm::from_exchange_data(&self.ed);
        Arc::new(Algebra {
            ed: self.ed.clone(),
            skew,
            commutative: true,
        })
    }

    pub fn exchange_data(&self) -> &ExchangeData {
        &self.ed
    }

    pub fn n(&self) -> usize {
        self.ed.n()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn skew(&self, a: &Exponent, b: &Exponent) -> i64 {
        if self.commutative {
            0
        } else {
            self.skew.apply(a, b)
        }
    }

    /// Normal-ordered product of two monomials:
    /// Y^a Y^b = q^{-lambda(a,b)} Y^{a+b}; returns the q-power and the sum.
    pub fn monomial_product(&self, a: &Exponent, b: &Exponent) -> (i64, Exponent) {
        (-self.skew(a, b), a.add(b))
    }

    /// Exponent in Y_i Y_j = q^{2 r_j d_j b_ji} Y_j Y_i (0-based indices).
    pub fn commutation_exponent(&self, i: usize, j: usize) -> i64 {
        if self.commutative {
            0
        } else {
            2 * self.ed.r(j) * self.ed.d(j) * self.ed.b().get(j, i)
        }
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        self.commutative == other.commutative && self.ed == other.ed
    }
}

/// Finite sum of coefficients times normal-ordered monomials Y^alpha.
#[derive(Clone, Debug)]
pub struct TorusElement {
    alg: Arc<Algebra>,
    terms: BTreeMap<Exponent, Coeff>,
}

impl TorusElement {
    pub fn zero(alg: Arc<Algebra>) -> Self {
        TorusElement {
            alg,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: Arc<Algebra>) -> Self {
        let n = alg.n();
        Self::monomial(alg, Exponent::zero(n), Coeff::one())
    }

    pub fn monomial(alg: Arc<Algebra>, exp: Exponent, c: Coeff) -> Self {
        assert_eq!(exp.len(), alg.n());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        TorusElement { alg, terms }
    }

    /// The generator Y_i (0-based).
    pub fn generator(alg: Arc<Algebra>, i: usize) -> Self {
        let n = alg.n();
        Self::monomial(alg, Exponent::unit(n, i), Coeff::one())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: Exponent, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(e) => {
                let sum = &*e + &c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *e = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::MixedAlgebra);
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TorusElement {
            alg: Arc::clone(&self.alg),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scalar_mul(&self, s: &Coeff) -> Self {
        if s.is_zero() {
            return Self::zero(Arc::clone(&self.alg));
        }
        TorusElement {
            alg: Arc::clone(&self.alg),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Normal-ordered noncommutative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_as(&other.alg) {
            return Err(Error::MixedAlgebra);
        }
        let mut out = Self::zero(Arc::clone(&self.alg));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let (qpow, exp) = self.alg.monomial_product(ea, eb);
                let c = &(ca * cb) * &Coeff::q_pow(qpow);
                out.add_term(exp, c);
            }
        }
        Ok(out)
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.terms == other.terms
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c} Y^{e}")?;
        }
        Ok(())
    }
}
