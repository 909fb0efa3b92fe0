//! Verification of the quantum dilogarithm identities attached to a periodic
//! mutation sequence, in tropical form (arguments are the monomials
//! Y^{eps_t c_t}) and universal form (arguments are the in-sequence
//! variables Y_{k_t}(t)^{eps_t}, multiplied in reverse order), plus
//! periodicity detection under a permutation.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dilog::{psi_of, PsiSpec};
use crate::error::{Error, Result};
use crate::mutation::QuantumSeed;
use crate::series::ConeSeries;
use crate::torus::{Algebra, ExchangeData, Exponent, Sign};
use crate::tropical;

/// A mutation sequence with its periodicity permutation and working order.
#[derive(Clone, Debug)]
pub struct MutationSequence {
    ed: ExchangeData,
    ks: Vec<usize>,
    sigma: Vec<usize>,
    order: i64,
}

impl MutationSequence {
    /// `ks` and `sigma` are 0-based; `sigma[i]` is the image of i.
    pub fn new(ed: ExchangeData, ks: Vec<usize>, sigma: Vec<usize>, order: i64) -> Result<Self> {
        let n = ed.n();
        if let Some(&k) = ks.iter().find(|&&k| k >= n) {
            return Err(Error::InvalidExchangeData(format!(
                "mutation index {} out of range 1..={n}",
                k + 1
            )));
        }
        let mut seen = vec![false; n];
        if sigma.len() != n || sigma.iter().any(|&s| s >= n) {
            return Err(Error::InvalidExchangeData(
                "permutation must list each index once".into(),
            ));
        }
        for &s in &sigma {
            if seen[s] {
                return Err(Error::InvalidExchangeData(
                    "permutation must list each index once".into(),
                ));
            }
            seen[s] = true;
        }
        Ok(MutationSequence {
            ed,
            ks,
            sigma,
            order,
        })
    }

    pub fn identity_sigma(ed: ExchangeData, ks: Vec<usize>, order: i64) -> Result<Self> {
        let sigma = (0..ed.n()).collect();
        Self::new(ed, ks, sigma, order)
    }

    pub fn exchange_data(&self) -> &ExchangeData {
        &self.ed
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

/// Residual of a product compared against 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ResidualOutcome {
    /// The product minus one vanishes identically to the working order.
    Clean,
    /// Leading (lexicographically least) nonzero term of product minus one.
    Nonzero {
        exponent: Vec<i64>,
        coefficient: String,
    },
    Skipped {
        reason: String,
    },
}

impl ResidualOutcome {
    pub fn is_clean(&self) -> bool {
        matches!(self, ResidualOutcome::Clean)
    }

    fn of_series(diff: &ConeSeries) -> Self {
        match diff.leading_term() {
            None => ResidualOutcome::Clean,
            Some((e, c)) => ResidualOutcome::Nonzero {
                exponent: e.as_slice().to_vec(),
                coefficient: c.to_string(),
            },
        }
    }
}

impl fmt::Display for ResidualOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualOutcome::Clean => write!(f, "residual none"),
            ResidualOutcome::Nonzero {
                exponent,
                coefficient,
            } => write!(f, "residual {coefficient} at Y^{exponent:?}"),
            ResidualOutcome::Skipped { reason } => write!(f, "skipped: {reason}"),
        }
    }
}

/// Per-step data echoed into reports (1-based step and index).
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub t: usize,
    pub k: usize,
    pub epsilon: i8,
    pub c_vector: Vec<i64>,
    pub variable_terms: usize,
}

/// Outcome of the full verification: tropical data, periodicity, both
/// identity residuals. All failures are data, never panics.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub order: i64,
    pub sign_coherent: bool,
    pub periodicity_holds: bool,
    pub tropical_identity: ResidualOutcome,
    pub universal_identity: ResidualOutcome,
    pub steps: Vec<StepRecord>,
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn all_green(&self) -> bool {
        self.sign_coherent
            && self.periodicity_holds
            && self.tropical_identity.is_clean()
            && self.universal_identity.is_clean()
            && self.error.is_none()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "sign-coherent: {}", self.sign_coherent)?;
        for s in &self.steps {
            writeln!(
                f,
                "  t={} k={} eps={} c={:?} terms={}",
                s.t,
                s.k,
                if s.epsilon >= 0 { "+" } else { "-" },
                s.c_vector,
                s.variable_terms
            )?;
        }
        writeln!(f, "periodicity: {}", self.periodicity_holds)?;
        writeln!(f, "tropical identity: {}", self.tropical_identity)?;
        write!(f, "universal identity: {}", self.universal_identity)
    }
}

/// All seeds along the sequence: t = 1..=L+1 (0-based vector index t-1).
pub fn evaluate_sequence(seq: &MutationSequence) -> Result<Vec<QuantumSeed>> {
    let alg = Algebra::quantum(seq.ed.clone());
    let mut seeds = vec![QuantumSeed::initial(alg, seq.order)];
    for (t, &k) in seq.ks.iter().enumerate() {
        let next = seeds.last().unwrap().mutate(k).map_err(|e| match e {
            Error::SignCoherenceViolated { cvec, .. } => {
                Error::SignCoherenceViolated { step: t + 1, cvec }
            }
            Error::PrefactorMisaligned { .. } => Error::PrefactorMisaligned { step: t + 1 },
            other => other,
        })?;
        seeds.push(next);
    }
    Ok(seeds)
}

/// Periodicity test against an already evaluated trajectory.
pub fn periodicity_from_seeds(seq: &MutationSequence, seeds: &[QuantumSeed]) -> bool {
    let n = seq.ed.n();
    let first = &seeds[0];
    let last = seeds.last().unwrap();
    for i in 0..n {
        for j in 0..n {
            if last.bt().get(seq.sigma[i], seq.sigma[j]) != first.bt().get(i, j) {
                return false;
            }
        }
    }
    (0..n).all(|i| last.var(seq.sigma[i]) == first.var(i))
}

/// Does the sequence close up: B(L+1), Y(L+1) match B(1), Y(1) under sigma,
/// variables compared termwise to the working order?
pub fn check_periodicity(seq: &MutationSequence) -> Result<bool> {
    let seeds = evaluate_sequence(seq)?;
    Ok(periodicity_from_seeds(seq, &seeds))
}

/// Tropical-form identity: ordered product over t of
/// Psi_{d_k,z_k,q_k}(Y^{eps_t c_t})^{eps_t}, compared against 1.
pub fn tropical_identity_check(seq: &MutationSequence) -> Result<ResidualOutcome> {
    let data = tropical::sequence_data(&seq.ed, &seq.ks)?;
    let alg = Algebra::quantum(seq.ed.clone());
    let mut acc = ConeSeries::one(Arc::clone(&alg), seq.order);
    for (&k, (eps, cvec)) in seq.ks.iter().zip(&data) {
        let spec = PsiSpec::for_index(&seq.ed, k);
        let exp = Exponent::new(cvec.iter().map(|c| c * eps.as_i64()).collect());
        let arg = ConeSeries::monomial(
            Arc::clone(&alg),
            exp,
            crate::coeff::Coeff::one(),
            seq.order,
        );
        let factor = psi_of(&spec, &arg, *eps, seq.order)?;
        acc = acc.mul(&factor)?;
    }
    let one = ConeSeries::one(alg, seq.order);
    Ok(ResidualOutcome::of_series(&acc.sub(&one)?))
}

/// Universal-form identity: reverse-ordered product over t of
/// Psi_{d_k,z_k,q_k}(Y_{k_t}(t)^{eps_t})^{eps_t}, compared against 1.
pub fn universal_identity_check(seq: &MutationSequence) -> Result<ResidualOutcome> {
    let data = tropical::sequence_data(&seq.ed, &seq.ks)?;
    let seeds = evaluate_sequence(seq)?;
    universal_identity_from_seeds(seq, &data, &seeds)
}

pub(crate) fn universal_identity_from_seeds(
    seq: &MutationSequence,
    data: &[(Sign, Vec<i64>)],
    seeds: &[QuantumSeed],
) -> Result<ResidualOutcome> {
    let alg = Algebra::quantum(seq.ed.clone());
    let mut acc = ConeSeries::one(Arc::clone(&alg), seq.order);
    for t in (0..seq.ks.len()).rev() {
        let k = seq.ks[t];
        let eps = data[t].0;
        let spec = PsiSpec::for_index(&seq.ed, k);
        let arg = seeds[t].var(k).pow(eps.as_i64())?;
        if arg.min_total_degree().is_some_and(|d| d < 1) {
            return Err(Error::NonPositiveArgument {
                step: t + 1,
                degree: arg.min_total_degree().unwrap(),
            });
        }
        let factor = psi_of(&spec, &arg, eps, seq.order).map_err(|e| match e {
            Error::NonPositiveArgument { degree, .. } => Error::NonPositiveArgument {
                step: t + 1,
                degree,
            },
            other => other,
        })?;
        acc = acc.mul(&factor)?;
    }
    let one = ConeSeries::one(alg, seq.order);
    Ok(ResidualOutcome::of_series(&acc.sub(&one)?))
}

/// Full verification: tropical data, periodicity, then both identities
/// (skipped with reasons when the preconditions fail). Never returns an
/// error; failures are captured in the report.
pub fn run_report(seq: &MutationSequence) -> VerificationReport {
    let mut report = VerificationReport {
        order: seq.order,
        sign_coherent: true,
        periodicity_holds: false,
        tropical_identity: ResidualOutcome::Skipped {
            reason: "not run".into(),
        },
        universal_identity: ResidualOutcome::Skipped {
            reason: "not run".into(),
        },
        steps: Vec::new(),
        error: None,
    };
    let data = match tropical::sequence_data(&seq.ed, &seq.ks) {
        Ok(d) => d,
        Err(e) => {
            report.sign_coherent = false;
            report.error = Some(e.to_string());
            let reason = "sign-coherence violated".to_string();
            report.tropical_identity = ResidualOutcome::Skipped {
                reason: reason.clone(),
            };
            report.universal_identity = ResidualOutcome::Skipped { reason };
            return report;
        }
    };
    let seeds = match evaluate_sequence(seq) {
        Ok(s) => s,
        Err(e) => {
            report.error = Some(e.to_string());
            let reason = format!("sequence evaluation failed: {e}");
            report.tropical_identity = ResidualOutcome::Skipped {
                reason: reason.clone(),
            };
            report.universal_identity = ResidualOutcome::Skipped { reason };
            return report;
        }
    };
    for (t, ((eps, cvec), &k)) in data.iter().zip(&seq.ks).enumerate() {
        report.steps.push(StepRecord {
            t: t + 1,
            k: k + 1,
            epsilon: eps.as_i64() as i8,
            c_vector: cvec.clone(),
            variable_terms: seeds[t].var(k).term_count(),
        });
    }
    report.periodicity_holds = periodicity_from_seeds(seq, &seeds);
    if !report.periodicity_holds {
        let reason = "sequence is not periodic".to_string();
        report.tropical_identity = ResidualOutcome::Skipped {
            reason: reason.clone(),
        };
        report.universal_identity = ResidualOutcome::Skipped { reason };
        return report;
    }
    match tropical_identity_check(seq) {
        Ok(res) => report.tropical_identity = res,
        Err(e) => {
            report.tropical_identity = ResidualOutcome::Skipped {
                reason: e.to_string(),
            };
            report.error = Some(e.to_string());
        }
    }
    match universal_identity_from_seeds(seq, &data, &seeds) {
        Ok(res) => report.universal_identity = res,
        Err(e) => {
            report.universal_identity = ResidualOutcome::Skipped {
                reason: e.to_string(),
            };
            report.error = Some(e.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::IntMatrix;

    fn example_seq(order: i64) -> MutationSequence {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        MutationSequence::identity_sigma(ed, vec![0, 1, 0, 1, 0, 1], order).unwrap()
    }

    #[test]
    fn example_is_periodic() {
        assert!(check_periodicity(&example_seq(8)).unwrap());
    }

    #[test]
    fn truncated_example_is_not_periodic() {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        let seq =
            MutationSequence::identity_sigma(ed, vec![0, 1, 0, 1, 0], 8).unwrap();
        assert!(!check_periodicity(&seq).unwrap());
    }

    #[test]
    fn empty_sequence_is_periodic_with_clean_identities() {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        let seq = MutationSequence::identity_sigma(ed, vec![], 6).unwrap();
        let report = run_report(&seq);
        assert!(report.all_green());
    }

    #[test]
    fn example_identities_hold_at_low_order() {
        let seq = example_seq(6);
        let report = run_report(&seq);
        assert!(report.sign_coherent);
        assert!(report.periodicity_holds);
        assert!(report.tropical_identity.is_clean(), "{}", report.tropical_identity);
        assert!(report.universal_identity.is_clean(), "{}", report.universal_identity);
    }

    #[test]
    fn immediate_involution_sequence() {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        let seq = MutationSequence::identity_sigma(ed, vec![0, 0], 8).unwrap();
        let report = run_report(&seq);
        assert!(report.all_green(), "{report}");
    }

    #[test]
    fn non_periodic_single_step_reports_skip() {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        let seq = MutationSequence::identity_sigma(ed, vec![0], 8).unwrap();
        let report = run_report(&seq);
        assert!(!report.periodicity_holds);
        assert!(matches!(
            report.tropical_identity,
            ResidualOutcome::Skipped { .. }
        ));
        assert!(matches!(
            report.universal_identity,
            ResidualOutcome::Skipped { .. }
        ));
    }

    #[test]
    fn ordinary_pentagon_specialization() {
        // d = (1,1), r = (1,1): the length-5 alternating period with the
        // swap permutation.
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![1, 1], vec![1, 1]).unwrap();
        let seq =
            MutationSequence::new(ed, vec![0, 1, 0, 1, 0], vec![1, 0], 8).unwrap();
        let report = run_report(&seq);
        assert!(report.all_green(), "{report}");
    }

    #[test]
    fn bad_inputs_rejected() {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        assert!(MutationSequence::identity_sigma(ed.clone(), vec![7], 8).is_err());
        assert!(MutationSequence::new(ed, vec![0], vec![0, 0], 8).is_err());
    }
}
