//! Dense univariate integer polynomials in q: content extraction, primitive
//! pseudo-remainder GCD, and exact division. Backs the best-effort reduction
//! of [`crate::coeff::Coeff`] fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Coefficients indexed by exponent, constant term first. Trimmed: the last
/// entry is nonzero unless the vector is empty (the zero polynomial).
pub(crate) type Dense = Vec<BigInt>;

pub(crate) fn trim(v: &mut Dense) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn degree(v: &Dense) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

/// Positive gcd of all coefficients; zero for the zero polynomial.
pub(crate) fn content(v: &Dense) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        if !c.is_zero() {
            g = g.gcd(c);
            if g == BigInt::from(1) {
                break;
            }
        }
    }
    g
}

pub(crate) fn scale_down(v: &mut Dense, g: &BigInt) {
    if g.is_zero() || *g == BigInt::from(1) {
        return;
    }
    for c in v.iter_mut() {
        *c = &*c / g;
    }
}

fn neg(v: &mut Dense) {
    for c in v.iter_mut() {
        *c = -std::mem::take(c);
    }
}

/// Pseudo-remainder of a by b (b nonzero, deg a >= deg b): the remainder of
/// lc(b)^(deg a - deg b + 1) * a divided by b.
fn pseudo_rem(a: &Dense, b: &Dense) -> Dense {
    let db = degree(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            let t = &lead * bj;
            r[shift + j] -= t;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// GCD over Z[q] via the primitive pseudo-remainder sequence. Result has
/// positive leading coefficient and carries gcd of the integer contents.
pub(crate) fn gcd(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() {
        let mut g = b.clone();
        if g.last().is_some_and(|c| c.is_negative()) {
            neg(&mut g);
        }
        return g;
    }
    if b.is_empty() {
        return gcd(b, a);
    }
    let mut p = a.clone();
    let mut q = b.clone();
    let ca = content(&p);
    let cb = content(&q);
    scale_down(&mut p, &ca);
    scale_down(&mut q, &cb);
    let c = ca.gcd(&cb);
    if degree(&p) < degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let mut r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        let cr = content(&r);
        scale_down(&mut r, &cr);
        p = q;
        q = r;
        if degree(&q) == 0 {
            break;
        }
    }
    if degree(&q) == 0 {
        q = vec![BigInt::from(1)];
    }
    if q.last().is_some_and(|x| x.is_negative()) {
        neg(&mut q);
    }
    for x in q.iter_mut() {
        *x = &*x * &c;
    }
    q
}

/// Exact division a / b; None when the division is not exact.
pub(crate) fn div_exact(a: &Dense, b: &Dense) -> Option<Dense> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.is_empty() || a.len() < b.len() {
        return None;
    }
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let (qc, rem) = r[dr].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        q[shift] = qc.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = &qc * bj;
            r[shift + j] -= t;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Dense {
        let mut out: Dense = v.iter().map(|&x| BigInt::from(x)).collect();
        trim(&mut out);
        out
    }

    #[test]
    fn gcd_of_q2_minus_1_and_q_minus_1() {
        // q^2 - 1 = (q-1)(q+1)
        let g = gcd(&p(&[-1, 0, 1]), &p(&[-1, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn gcd_carries_integer_content() {
        let g = gcd(&p(&[2, 2]), &p(&[4]));
        assert_eq!(g, p(&[2]));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let g = gcd(&p(&[1, 1]), &p(&[1, 0, 1]));
        assert_eq!(g, p(&[1]));
    }

    #[test]
    fn div_exact_roundtrip() {
        let a = p(&[-1, 0, 0, 0, 1]); // q^4 - 1
        let b = p(&[-1, 0, 1]); // q^2 - 1
        assert_eq!(div_exact(&a, &b), Some(p(&[1, 0, 1])));
        assert_eq!(div_exact(&b, &a), None);
        assert_eq!(div_exact(&p(&[1, 1]), &p(&[2])), None);
    }

    #[test]
    fn pseudo_gcd_common_cyclotomic() {
        // (q^6-1, q^4-1) share q^2-1
        let g = gcd(&p(&[-1, 0, 0, 0, 0, 0, 1]), &p(&[-1, 0, 0, 0, 1]));
        assert_eq!(g, p(&[-1, 0, 1]));
    }
}
