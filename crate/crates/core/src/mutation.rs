//! Quantum Y-seeds and the generalized (d,z)-mutation: exchange-matrix
//! mutation, the monomial part, the dilogarithm dressing (adjoint action),
//! and the classical (q = 1) counterpart.
//!
//! A seed stores each current variable Y_i(t) as a fully expanded cone
//! series in the initial torus. Mutation applies the closed formula
//!
//!   Y'_k = Y_k^{-1},
//!   Y'_i = q_i^{b_ik d_k [eps b_ki]_+} Y_i Y_k^{d_k [eps b_ki]_+}
//!          * prod_{m=1}^{|b_ki|} (sum_{s=0}^{d_k} z_{k,s}
//!                q_k^{-eps sgn(b_ki)(2m-1) s} Y_k^{eps s})^{-sgn(b_ki)},
//!
//! with b taken from the current exchange matrix. The same dressing product
//! is what the adjoint action of Psi_{d_k,z_k,q_k}(Y_k^eps) produces on a
//! generator, which the checks in this module exercise as two independent
//! code paths.

use std::sync::Arc;

use crate::coeff::Coeff;
use crate::dilog::{psi_of, PsiSpec};
use crate::error::{Error, Result};
use crate::series::ConeSeries;
use crate::torus::{Algebra, ExchangeData, Exponent, IntMatrix, Sign};
use crate::tropical::TropicalState;

fn plus_part(a: i64) -> i64 {
    a.max(0)
}

/// Exchange-matrix mutation at k (0-based):
/// b'_ij = -b_ij when i = k or j = k, else
/// b_ij + d_k ([-b_ik]_+ b_kj + b_ik [b_kj]_+).
pub fn mutate_matrix(bt: &IntMatrix, ed: &ExchangeData, k: usize) -> IntMatrix {
    let n = bt.n();
    let dk = ed.d(k);
    let mut out = IntMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let b = bt.get(i, j);
            let v = if i == k || j == k {
                -b
            } else {
                b + dk * (plus_part(-bt.get(i, k)) * bt.get(k, j)
                    + bt.get(i, k) * plus_part(bt.get(k, j)))
            };
            out.set(i, j, v);
        }
    }
    out
}

/// Core of the dressing product: with `yk_eps` already holding the eps-power
/// of the k-th variable (or its mirror image), form
/// prod_{m=1}^{|b_ki|} (sum_{s=0}^{d_k} z_{k,s} q_k^{-eps sgn(b_ki)(2m-1) s}
/// yk_eps^s)^{-sgn(b_ki)}.
fn dressing_product_with(
    alg: &Arc<Algebra>,
    k: usize,
    scalar_eps: i64,
    b_ki: i64,
    yk_eps: &ConeSeries,
    order: i64,
) -> Result<ConeSeries> {
    let mut acc = ConeSeries::one(Arc::clone(alg), order);
    if b_ki == 0 {
        return Ok(acc);
    }
    let ed = alg.exchange_data();
    let dk = ed.d(k);
    let base = ed.q_base_exp(k);
    let sgn = b_ki.signum();
    let mut pows = Vec::with_capacity(dk as usize + 1);
    pows.push(ConeSeries::one(Arc::clone(alg), order));
    for s in 1..=dk {
        pows.push(pows[(s - 1) as usize].mul(yk_eps)?);
    }
    for m in 1..=b_ki.abs() {
        let mut factor = ConeSeries::zero(Arc::clone(alg), order);
        for s in 0..=dk {
            let c = &ed.z_coeff(k, s as usize)
                * &Coeff::q_pow(base * (-scalar_eps * sgn * (2 * m - 1) * s));
            factor = factor.add(&pows[s as usize].scalar_mul(&c))?;
        }
        acc = acc.mul(&factor.pow(-sgn)?)?;
    }
    Ok(acc)
}

/// The dressing product with yk substituted for the k-th variable.
fn dressing_product(
    alg: &Arc<Algebra>,
    k: usize,
    eps: Sign,
    b_ki: i64,
    yk: &ConeSeries,
    order: i64,
) -> Result<ConeSeries> {
    let e = eps.as_i64();
    let yk_eps = yk.pow(e)?;
    dressing_product_with(alg, k, e, b_ki, &yk_eps, order)
}

/// Conjugation Psi(yk^eps)^eps * target * Psi(yk^eps)^{-eps}, expanding the
/// dilogarithm as a series; the independent route to the adjoint action.
///
/// When yk^eps has uniformly negative total degree the dilogarithm lives in
/// the opposite-cone completion; exponent negation is a torus automorphism,
/// so the product is computed mirrored and mapped back.
pub fn conjugate_by_psi(
    spec: &PsiSpec,
    yk: &ConeSeries,
    eps: Sign,
    target: &ConeSeries,
    order: i64,
) -> Result<ConeSeries> {
    let arg = yk.pow(eps.as_i64())?;
    if arg.max_total_degree().is_some_and(|d| d <= -1) {
        let arg_m = arg.mirror();
        let left = psi_of(spec, &arg_m, eps, order)?;
        let right = psi_of(spec, &arg_m, eps.flip(), order)?;
        return Ok(left.mul(&target.mirror())?.mul(&right)?.mirror());
    }
    let left = psi_of(spec, &arg, eps, order)?;
    let right = psi_of(spec, &arg, eps.flip(), order)?;
    left.mul(target)?.mul(&right)
}

/// Adjoint action of Psi_{d_k,z_k,q_k}(Y_k^eps) on a torus series, with the
/// generators of the torus as the conjugating variables. A generator target
/// Y_i takes the closed finite product (exact, no extra truncation loss);
/// anything else is conjugated by the expanded dilogarithm series directly.
pub fn adjoint_action(
    alg: &Arc<Algebra>,
    bt: &IntMatrix,
    k: usize,
    eps: Sign,
    target: &ConeSeries,
    order: i64,
) -> Result<ConeSeries> {
    if let Some(i) = generator_index(target) {
        return adjoint_action_closed(alg, bt, k, eps, i, order);
    }
    let spec = PsiSpec::for_index(alg.exchange_data(), k);
    let yk = ConeSeries::generator(Arc::clone(alg), k, order);
    conjugate_by_psi(&spec, &yk, eps, target, order)
}

/// Closed form of the adjoint action on the generator Y_i:
/// Y_i * dressing product with exponent data b_ki read from `bt`. For
/// eps = -1 the brackets expand in the opposite-cone completion (where
/// Psi(Y_k^{-1}) lives), again via the mirror automorphism.
pub fn adjoint_action_closed(
    alg: &Arc<Algebra>,
    bt: &IntMatrix,
    k: usize,
    eps: Sign,
    i: usize,
    order: i64,
) -> Result<ConeSeries> {
    let b_ki = bt.get(k, i);
    match eps {
        Sign::Plus => {
            let yi = ConeSeries::generator(Arc::clone(alg), i, order);
            let yk = ConeSeries::generator(Arc::clone(alg), k, order);
            let dress = dressing_product_with(alg, k, 1, b_ki, &yk, order)?;
            yi.mul(&dress)
        }
        Sign::Minus => {
            // Mirrored: Y_k^{-s} maps to Y_k^s, Y_i to Y_i^{-1}.
            let yi_m = ConeSeries::monomial(
                Arc::clone(alg),
                Exponent::unit(alg.n(), i).neg(),
                Coeff::one(),
                order,
            );
            let yk = ConeSeries::generator(Arc::clone(alg), k, order);
            let dress = dressing_product_with(alg, k, -1, b_ki, &yk, order)?;
            Ok(yi_m.mul(&dress)?.mirror())
        }
    }
}

fn generator_index(s: &ConeSeries) -> Option<usize> {
    if s.term_count() != 1 {
        return None;
    }
    let (exp, c) = s.leading_term()?;
    if !c.is_one() {
        return None;
    }
    let mut idx = None;
    for j in 0..exp.len() {
        match (exp.get(j), idx) {
            (0, _) => {}
            (1, None) => idx = Some(j),
            _ => return None,
        }
    }
    idx
}

/// A quantum Y-seed along a mutation history: current exchange matrix,
/// each variable expanded in the initial torus, and the synchronized
/// tropical state.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    alg: Arc<Algebra>,
    bt: IntMatrix,
    vars: Vec<ConeSeries>,
    trop: TropicalState,
    order: i64,
}

impl QuantumSeed {
    /// The initial seed: variables are the torus generators.
    pub fn initial(alg: Arc<Algebra>, order: i64) -> Self {
        let n = alg.n();
        let vars = (0..n)
            .map(|i| ConeSeries::generator(Arc::clone(&alg), i, order))
            .collect();
        let trop = TropicalState::initial(alg.exchange_data());
        let bt = alg.exchange_data().b().clone();
        QuantumSeed {
            alg,
            bt,
            vars,
            trop,
            order,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn bt(&self) -> &IntMatrix {
        &self.bt
    }

    pub fn vars(&self) -> &[ConeSeries] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &ConeSeries {
        &self.vars[i]
    }

    pub fn trop(&self) -> &TropicalState {
        &self.trop
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn tropical_sign(&self, k: usize) -> Result<Sign> {
        self.trop.tropical_sign(k)
    }

    /// The monomial part Z^{(eps)}: Z_k = Y_k^{-1} and for i != k
    /// Z_i = q_i^{b_ik d_k [eps b_ki]_+} Y_i Y_k^{d_k [eps b_ki]_+}.
    pub fn monomial_part(&self, k: usize, eps: Sign) -> Result<Vec<ConeSeries>> {
        let ed = self.alg.exchange_data();
        let n = self.alg.n();
        let dk = ed.d(k);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i == k {
                out.push(self.vars[k].invert()?);
                continue;
            }
            let b_ki = self.bt.get(k, i);
            let b_ik = self.bt.get(i, k);
            let p = dk * plus_part(eps.as_i64() * b_ki);
            let scalar = Coeff::q_pow(ed.q_base_exp(i) * b_ik * p);
            let z = self.vars[i]
                .mul(&self.vars[k].pow(p)?)?
                .scalar_mul(&scalar);
            out.push(z);
        }
        Ok(out)
    }

    /// One (d,z)-mutation with eps = the tropical sign at k.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        let eps = self.trop.tropical_sign(k)?;
        self.mutate_with_sign(k, eps)
    }

    /// One (d,z)-mutation with a forced sign; the result does not depend on
    /// it whenever both signs are computable.
    pub fn mutate_with_sign(&self, k: usize, eps: Sign) -> Result<QuantumSeed> {
        let ed = self.alg.exchange_data();
        let n = self.alg.n();
        let zero = Exponent::zero(n);
        let monomial = self.monomial_part(k, eps)?;
        let mut vars = Vec::with_capacity(n);
        for (i, z) in monomial.into_iter().enumerate() {
            let v = if i == k {
                z
            } else {
                let dress =
                    dressing_product(&self.alg, k, eps, self.bt.get(k, i), &self.vars[k], self.order)?;
                z.mul(&dress)?
            };
            // The cone strategy keeps the leading monomial present; losing it
            // means later inversions would be unsound.
            if !v.is_zero() && !v.body().contains_key(&zero) {
                return Err(Error::PrefactorMisaligned { step: 0 });
            }
            vars.push(v);
        }
        Ok(QuantumSeed {
            alg: Arc::clone(&self.alg),
            bt: mutate_matrix(&self.bt, ed, k),
            vars,
            trop: self.trop.mutate(ed, k)?,
            order: self.order,
        })
    }

    /// Do vars[i] vars[j] = q^{2 r_j d_j b'_ji} vars[j] vars[i] hold for all
    /// pairs, to the truncation order, with b' the current matrix?
    pub fn commutation_check(&self) -> Result<bool> {
        let ed = self.alg.exchange_data();
        let n = self.alg.n();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.vars[i].mul(&self.vars[j])?;
                let qpow = Coeff::q_pow(2 * ed.r(j) * ed.d(j) * self.bt.get(j, i));
                let rhs = self.vars[j].mul(&self.vars[i])?.scalar_mul(&qpow);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Compare a mutation computed with both signs (termwise, and the
    /// exchange matrices).
    pub fn epsilon_independence_check(&self, k: usize) -> Result<bool> {
        let plus = self.mutate_with_sign(k, Sign::Plus)?;
        let minus = self.mutate_with_sign(k, Sign::Minus)?;
        Ok(plus.bt == minus.bt && plus.vars == minus.vars)
    }

    /// Classical (q = 1) image of the whole seed.
    pub fn eval_q1(&self) -> Result<Vec<ConeSeries>> {
        self.vars.iter().map(|v| v.eval_q1()).collect()
    }
}

/// Commutative generalized y-mutation, coded directly from
///   y'_k = y_k^{-1},
///   y'_i = y_i y_k^{d_k [eps b_ki]_+} (sum_{s=0}^{d_k} z_{k,s} y_k^{eps s})^{-b_ki},
/// over commutative cone series at q = 1. This is a separate route from the
/// quantum formula (single bracket power instead of the m-indexed product).
pub fn classical_mutate(
    yvars: &[ConeSeries],
    ed: &ExchangeData,
    bt: &IntMatrix,
    k: usize,
    eps: Sign,
) -> Result<Vec<ConeSeries>> {
    let n = yvars.len();
    assert!(
        yvars
            .iter()
            .all(|v| v.algebra().is_commutative()),
        "classical mutation expects commutative series"
    );
    let alg = Arc::clone(yvars[k].algebra());
    let order = yvars[k].order();
    let dk = ed.d(k);
    let e = eps.as_i64();
    let yk_eps = yvars[k].pow(e)?;
    let mut bracket = ConeSeries::zero(Arc::clone(&alg), order);
    let mut pow = ConeSeries::one(Arc::clone(&alg), order);
    for s in 0..=dk {
        if s > 0 {
            pow = pow.mul(&yk_eps)?;
        }
        let zs = ed.z_coeff(k, s as usize).eval_q1()?;
        bracket = bracket.add(&pow.scalar_mul(&zs))?;
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i == k {
            out.push(yvars[k].invert()?);
            continue;
        }
        let b_ki = bt.get(k, i);
        let mono = yvars[i].mul(&yvars[k].pow(dk * plus_part(e * b_ki))?)?;
        out.push(mono.mul(&bracket.pow(-b_ki)?)?);
    }
    Ok(out)
}
