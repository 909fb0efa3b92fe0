//! Quantum dilogarithms of higher degrees as truncated series.
//!
//! The series Psi_{d,z,q}(x) is generated from its difference recursion
//!   a_0 = 1,  a_n (q^{2n} - 1) = sum_{s=1}^{min(d,n)} z_s q^s a_{n-s},
//! never from the infinite product: the product's x-coefficients are
//! infinite q-sums, while the recursion stays inside the exact scalar field.
//! The checks in this module verify the shift law, the factorization into
//! ordinary quantum dilogarithms, the trivial-coefficient splitting, and the
//! exponential bridge to the q-dilogarithm.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::series::ConeSeries;
use crate::torus::{ExchangeData, Sign};

/// Data selecting one quantum dilogarithm: degree d, coefficients
/// z = (z_1, ..., z_{d-1}) with z_0 = z_d = 1 implicit, and the base
/// q_k = q^{base_q_exp}.
#[derive(Clone, Debug)]
pub struct PsiSpec {
    degree: i64,
    coeffs: Vec<Coeff>,
    base_q_exp: i64,
}

impl PsiSpec {
    pub fn new(degree: i64, coeffs: Vec<Coeff>, base_q_exp: i64) -> Self {
        assert!(degree >= 1, "degree must be positive");
        assert!(base_q_exp >= 1, "base exponent must be positive");
        assert_eq!(
            coeffs.len(),
            (degree - 1) as usize,
            "need z_1..z_{{d-1}} coefficients"
        );
        PsiSpec {
            degree,
            coeffs,
            base_q_exp,
        }
    }

    /// The dilogarithm attached to index k of the exchange data: degree d_k,
    /// coefficients z_{k,s}, base q_k = q^{r_k d_k}. Reciprocity of the
    /// coefficients is inherited from the exchange data.
    pub fn for_index(ed: &ExchangeData, k: usize) -> Self {
        let d = ed.d(k);
        let coeffs = (1..d).map(|s| ed.z_coeff(k, s as usize)).collect();
        Self::new(d, coeffs, ed.q_base_exp(k))
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn base_q_exp(&self) -> i64 {
        self.base_q_exp
    }

    /// z_1..z_d including the implicit top coefficient 1.
    fn z_full(&self) -> Vec<Coeff> {
        let mut z = self.coeffs.clone();
        z.push(Coeff::one());
        z
    }
}

/// The x-expansion a_0..a_N of Psi_{d,z,q}(x).
#[derive(Clone, Debug, PartialEq)]
pub struct PsiCoefficients {
    a: Vec<Coeff>,
}

impl PsiCoefficients {
    pub fn as_slice(&self) -> &[Coeff] {
        &self.a
    }

    pub fn get(&self, n: usize) -> &Coeff {
        &self.a[n]
    }
}

/// Run the recursion with an explicit coefficient list z_1..z_top (the top
/// coefficient need not be 1, which the factorization instances require).
fn recursion_coefficients(z_full: &[Coeff], base: i64, order: i64) -> Vec<Coeff> {
    let mut a = vec![Coeff::one()];
    for m in 1..=order {
        let mut num = Coeff::zero();
        for s in 1..=(z_full.len() as i64).min(m) {
            let zs = &z_full[(s - 1) as usize];
            let t = &(zs * &Coeff::q_pow(base * s)) * &a[(m - s) as usize];
            num = &num + &t;
        }
        // q^{2m} - 1 in the base: never vanishes as a polynomial.
        let den = &Coeff::q_pow(2 * m * base) + &Coeff::from_int(-1);
        a.push(&num * &den.invert().expect("nonzero denominator"));
    }
    a
}

/// Expansion coefficients of Psi to the given order.
pub fn psi_coefficients(spec: &PsiSpec, order: i64) -> PsiCoefficients {
    PsiCoefficients {
        a: recursion_coefficients(&spec.z_full(), spec.base_q_exp, order),
    }
}

/// Substitute a torus series of strictly positive total degree for x:
/// sum_n a_n arg^n truncated at the order, inverted when `exponent` is -1.
/// The zero series is allowed and yields 1.
pub fn psi_of(
    spec: &PsiSpec,
    arg: &ConeSeries,
    exponent: Sign,
    order: i64,
) -> Result<ConeSeries> {
    let alg = Arc::clone(arg.algebra());
    let min_deg = match arg.min_total_degree() {
        None => return Ok(ConeSeries::one(alg, order)),
        Some(m) => m,
    };
    if min_deg < 1 {
        return Err(Error::NonPositiveArgument {
            step: 0,
            degree: min_deg,
        });
    }
    let nmax = order / min_deg;
    let coeffs = psi_coefficients(spec, nmax);
    let mut acc = ConeSeries::one(Arc::clone(&alg), order);
    let mut p = ConeSeries::one(Arc::clone(&alg), order);
    for n in 1..=nmax {
        p = p.mul(arg)?;
        if p.is_zero() {
            break;
        }
        acc = acc.add(&p.scalar_mul(coeffs.get(n as usize)))?;
    }
    match exponent {
        Sign::Plus => Ok(acc),
        Sign::Minus => acc.invert(),
    }
}

// ---------------------------------------------------------------------------
// Univariate x-series over the exact scalars, used by the dilogarithm checks.
// ---------------------------------------------------------------------------

/// Dense x-power series with Coeff entries, truncated at a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct XSeries {
    c: Vec<Coeff>,
}

impl XSeries {
    fn zero(order: i64) -> Self {
        XSeries {
            c: vec![Coeff::zero(); (order + 1) as usize],
        }
    }

    fn one(order: i64) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = Coeff::one();
        s
    }

    fn from_coeffs(c: Vec<Coeff>) -> Self {
        XSeries { c }
    }

    fn order(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for i in 0..=(order as usize) {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(order as usize - i) {
                if other.c[j].is_zero() {
                    continue;
                }
                out.c[i + j] = &out.c[i + j] + &(&self.c[i] * &other.c[j]);
            }
        }
        out
    }

    fn invert(&self) -> Result<Self> {
        let order = self.order();
        let c0_inv = self.c[0].invert()?;
        let mut out = Self::zero(order);
        out.c[0] = c0_inv.clone();
        for k in 1..=(order as usize) {
            let mut acc = Coeff::zero();
            for j in 1..=k {
                if self.c[j].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.c[j] * &out.c[k - j]);
            }
            out.c[k] = &(-&acc) * &c0_inv;
        }
        Ok(out)
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one(self.order());
        for _ in 0..e.abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order()) as usize;
        XSeries {
            c: (0..=order).map(|i| &self.c[i] + &other.c[i]).collect(),
        }
    }

    fn scale(&self, s: &Coeff) -> Self {
        XSeries {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }
}

/// The polynomial sum_{s=0}^{d} z_s q^{base * t * s} x^s as an x-series
/// (z_0 = 1 from the full list convention, top coefficient included).
fn z_polynomial(z_full: &[Coeff], base: i64, t: i64, order: i64) -> XSeries {
    let mut p = XSeries::zero(order);
    p.c[0] = Coeff::one();
    for (s, zs) in z_full.iter().enumerate() {
        let s1 = s as i64 + 1;
        if s1 <= order {
            p.c[s1 as usize] = zs * &Coeff::q_pow(base * t * s1);
        }
    }
    p
}

/// Does Psi(q^{2a} x) equal the closed finite product times Psi(x), as
/// x-series to the given order?
pub fn psi_shift_check(spec: &PsiSpec, a: i64, order: i64) -> bool {
    let base = spec.base_q_exp;
    let z_full = spec.z_full();
    let coeffs = recursion_coefficients(&z_full, base, order);
    // x -> q^{2a} x rescales a_n by q^{2an} in the base.
    let lhs = XSeries::from_coeffs(
        coeffs
            .iter()
            .enumerate()
            .map(|(n, an)| an * &Coeff::q_pow(2 * a * n as i64 * base))
            .collect(),
    );
    let sgn = a.signum();
    let mut rhs = XSeries::from_coeffs(coeffs);
    for m in 1..=a.abs() {
        let factor = z_polynomial(&z_full, base, sgn * (2 * m - 1), order);
        let factor = match factor.pow(sgn) {
            Ok(f) => f,
            Err(_) => return false,
        };
        rhs = rhs.mul(&factor);
    }
    lhs == rhs
}

/// Does the degree-d series with coefficients read off from
/// prod_s (1 - w_s x) factor as prod_s Psi_q(-w_s x)?
pub fn psi_factorization_check(d: i64, w: &[Coeff], order: i64) -> bool {
    assert_eq!(w.len(), d as usize);
    // z_0..z_d from the product of linear factors.
    let mut zpoly = vec![Coeff::one()];
    for ws in w {
        let mut next = vec![Coeff::zero(); zpoly.len() + 1];
        for (k, c) in zpoly.iter().enumerate() {
            next[k] = &next[k] + c;
            next[k + 1] = &next[k + 1] - &(c * ws);
        }
        zpoly = next;
    }
    let z_full: Vec<Coeff> = zpoly[1..].to_vec();
    let lhs = XSeries::from_coeffs(recursion_coefficients(&z_full, 1, order));

    let a1 = recursion_coefficients(&[Coeff::one()], 1, order);
    let mut rhs = XSeries::one(order);
    for ws in w {
        let factor = XSeries::from_coeffs(
            a1.iter()
                .enumerate()
                .map(|(n, an)| {
                    an * &(-ws).pow(n as i64).expect("nonnegative power")
                })
                .collect(),
        );
        rhs = rhs.mul(&factor);
    }
    lhs == rhs
}

/// For trivial coefficients z = (1,...,1): does the degree-d series split as
/// Psi_{q^{d+1}}(-x^{d+1}) Psi_q(-x)^{-1}?
pub fn psi_trivialz_split_check(d: i64, order: i64) -> bool {
    let z_full = vec![Coeff::one(); d as usize];
    let lhs = XSeries::from_coeffs(recursion_coefficients(&z_full, 1, order));

    // Psi_{q^{d+1}}(-x^{d+1}): coefficient a_n in base d+1 lands on x^{(d+1)n}.
    let stretched = recursion_coefficients(&[Coeff::one()], d + 1, order / (d + 1));
    let mut f = XSeries::zero(order);
    for (n, an) in stretched.iter().enumerate() {
        let pos = (d + 1) as usize * n;
        if pos <= order as usize {
            f.c[pos] = if n % 2 == 0 { an.clone() } else { -an };
        }
    }
    let a1 = recursion_coefficients(&[Coeff::one()], 1, order);
    let g = XSeries::from_coeffs(
        a1.iter()
            .enumerate()
            .map(|(n, an)| if n % 2 == 0 { an.clone() } else { -an })
            .collect(),
    );
    let rhs = f.mul(&g.invert().expect("unit constant term"));
    lhs == rhs
}

/// Does exp(-L_{2,q}(-x)) reproduce the degree-1 coefficients, with
/// L_{2,q}(x) = sum_n x^n / (n (q^n - q^{-n})), to the given order?
pub fn qdilog_exp_check(order: i64) -> bool {
    // s_n = -(-1)^n q^n / (n (q^{2n} - 1)) is the n-th coefficient of
    // -L_{2,q}(-x).
    let mut s = XSeries::zero(order);
    for n in 1..=order {
        let den_poly = &Coeff::q_pow(2 * n) + &Coeff::from_int(-1);
        let den = &den_poly * &Coeff::from_int(n);
        let l = &Coeff::q_pow(n) * &den.invert().expect("nonzero denominator");
        s.c[n as usize] = if n % 2 == 0 { -&l } else { l };
    }
    // exp via termwise exact division by factorials.
    let mut acc = XSeries::one(order);
    let mut p = XSeries::one(order);
    let mut factorial = BigInt::from(1);
    for k in 1..=order {
        p = p.mul(&s);
        factorial *= k;
        let inv_fact = Coeff::rational(1, factorial.clone()).expect("nonzero factorial");
        acc = acc.add(&p.scale(&inv_fact));
    }
    let psi = XSeries::from_coeffs(recursion_coefficients(&[Coeff::one()], 1, order));
    acc == psi
}
