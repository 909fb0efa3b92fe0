//! Tropical (principal-coefficient) dynamics along mutation sequences:
//! c-vectors, tropical signs, and sign-coherence checking.
//!
//! The c-vector update is the tropicalization of the generalized y-mutation
//! at the tropical sign: with eps the sign of the k-th c-vector, the
//! degree-d_k exchange sum tropicalizes to 1 and the rule reduces to
//!   row'_k = -row_k,
//!   row'_i = row_i + d_k [eps * b_ki]_+ row_k      (i != k),
//! with b taken from the current exchange matrix, which mutates alongside.
//! Sign-coherence is assumed and checked at every step; a violation is a
//! detected error, never silently repaired.

use crate::error::{Error, Result};
use crate::mutation::mutate_matrix;
use crate::torus::{ExchangeData, IntMatrix, Sign};

/// C-matrix (row i = c-vector of y_i) plus the current exchange matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct TropicalState {
    c: IntMatrix,
    bt: IntMatrix,
}

fn row_sign(row: &[i64]) -> Option<Sign> {
    let mut sign = None;
    for &v in row {
        match (sign, v.signum()) {
            (_, 0) => {}
            (None, s) => sign = Sign::of(s),
            (Some(Sign::Plus), -1) | (Some(Sign::Minus), 1) => return None,
            _ => {}
        }
    }
    sign
}

impl TropicalState {
    /// Principal-coefficient start: C = identity, exchange matrix B.
    pub fn initial(ed: &ExchangeData) -> Self {
        TropicalState {
            c: IntMatrix::identity(ed.n()),
            bt: ed.b().clone(),
        }
    }

    #[cfg(test)]
    pub(crate) fn from_parts(c: IntMatrix, bt: IntMatrix) -> Self {
        TropicalState { c, bt }
    }

    pub fn c_matrix(&self) -> &IntMatrix {
        &self.c
    }

    pub fn bt(&self) -> &IntMatrix {
        &self.bt
    }

    pub fn c_vector(&self, k: usize) -> &[i64] {
        self.c.row(k)
    }

    /// Sign of the k-th c-vector; errors when the row has mixed signs or is
    /// zero. `step` 0 means "outside a sequence".
    pub fn tropical_sign(&self, k: usize) -> Result<Sign> {
        row_sign(self.c.row(k)).ok_or_else(|| Error::SignCoherenceViolated {
            step: 0,
            cvec: self.c.row(k).to_vec(),
        })
    }

    /// Mutate the tropical state at k with eps = tropical sign.
    pub fn mutate(&self, ed: &ExchangeData, k: usize) -> Result<Self> {
        let eps = self.tropical_sign(k)?.as_i64();
        let n = self.c.n();
        let mut c = self.c.clone();
        for j in 0..n {
            c.set(k, j, -self.c.get(k, j));
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let coef = ed.d(k) * (eps * self.bt.get(k, i)).max(0);
            if coef != 0 {
                for j in 0..n {
                    c.set(i, j, self.c.get(i, j) + coef * self.c.get(k, j));
                }
            }
        }
        Ok(TropicalState {
            c,
            bt: mutate_matrix(&self.bt, ed, k),
        })
    }
}

/// The (tropical sign, c-vector) pairs consumed by the tropical-form identity,
/// one per mutation step. Steps are reported 1-based in errors.
pub fn sequence_data(ed: &ExchangeData, ks: &[usize]) -> Result<Vec<(Sign, Vec<i64>)>> {
    let mut state = TropicalState::initial(ed);
    let mut out = Vec::with_capacity(ks.len());
    for (t, &k) in ks.iter().enumerate() {
        let at_step = |e: Error| match e {
            Error::SignCoherenceViolated { cvec, .. } => Error::SignCoherenceViolated {
                step: t + 1,
                cvec,
            },
            other => other,
        };
        let eps = state.tropical_sign(k).map_err(at_step)?;
        out.push((eps, state.c_vector(k).to_vec()));
        state = state.mutate(ed, k).map_err(at_step)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_ed() -> ExchangeData {
        let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
        ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap()
    }

    #[test]
    fn signs_from_rows() {
        assert_eq!(row_sign(&[1, 0]), Some(Sign::Plus));
        assert_eq!(row_sign(&[-2, -1]), Some(Sign::Minus));
        assert_eq!(row_sign(&[0, -3]), Some(Sign::Minus));
        assert_eq!(row_sign(&[1, -1]), None);
        assert_eq!(row_sign(&[0, 0]), None);
    }

    #[test]
    fn mixed_row_is_an_error() {
        let ed = example_ed();
        let state = TropicalState::from_parts(
            IntMatrix::new(2, vec![1, -1, 0, 1]),
            ed.b().clone(),
        );
        assert!(matches!(
            state.tropical_sign(0),
            Err(Error::SignCoherenceViolated { .. })
        ));
    }

    #[test]
    fn first_step_of_example() {
        let ed = example_ed();
        let state = TropicalState::initial(&ed);
        assert_eq!(state.tropical_sign(0).unwrap(), Sign::Plus);
        let next = state.mutate(&ed, 0).unwrap();
        assert_eq!(next.c_vector(0), &[-1, 0]);
        assert_eq!(next.c_vector(1), &[0, 1]);
    }

    #[test]
    fn example_sequence_golden_data() {
        let ed = example_ed();
        let data = sequence_data(&ed, &[0, 1, 0, 1, 0, 1]).unwrap();
        let expected: [(Sign, [i64; 2]); 6] = [
            (Sign::Plus, [1, 0]),
            (Sign::Plus, [0, 1]),
            (Sign::Minus, [-1, 0]),
            (Sign::Minus, [-2, -1]),
            (Sign::Minus, [-1, -1]),
            (Sign::Minus, [0, -1]),
        ];
        assert_eq!(data.len(), 6);
        for (got, want) in data.iter().zip(expected.iter()) {
            assert_eq!(got.0, want.0);
            assert_eq!(got.1.as_slice(), want.1.as_slice());
        }
    }

    #[test]
    fn empty_sequence_is_empty() {
        let ed = example_ed();
        assert!(sequence_data(&ed, &[]).unwrap().is_empty());
    }

    #[test]
    fn single_step_gives_unit_vector() {
        let ed = example_ed();
        let data = sequence_data(&ed, &[1]).unwrap();
        assert_eq!(data[0].0, Sign::Plus);
        assert_eq!(data[0].1, vec![0, 1]);
    }

    #[test]
    fn double_mutation_is_identity() {
        let ed = example_ed();
        let s0 = TropicalState::initial(&ed);
        let s1 = s0.mutate(&ed, 0).unwrap();
        let s2 = s1.mutate(&ed, 0).unwrap();
        assert_eq!(s0, s2);
        let s1 = s0.mutate(&ed, 1).unwrap();
        let s2 = s1.mutate(&ed, 1).unwrap();
        assert_eq!(s0, s2);
    }

    /// Brute-force oracle: evaluate the generalized y-mutation in the
    /// tropical semifield (min convention), tracking full Laurent monomials.
    /// Works for any eps, so it also witnesses sign-independence.
    pub(crate) fn tropical_oracle_step(
        ed: &ExchangeData,
        bt: &IntMatrix,
        rows: &[Vec<i64>],
        k: usize,
        eps: i64,
    ) -> Vec<Vec<i64>> {
        let n = rows.len();
        let dk = ed.d(k);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i == k {
                out.push(rows[k].iter().map(|x| -x).collect());
                continue;
            }
            let bki = bt.get(k, i);
            let mono_pow = dk * (eps * bki).max(0);
            // tropicalized exchange sum: min over s of s * eps * row_k
            let trop_sum: Vec<i64> = (0..n)
                .map(|j| {
                    (0..=dk)
                        .map(|s| s * eps * rows[k][j])
                        .min()
                        .unwrap()
                })
                .collect();
            out.push(
                (0..n)
                    .map(|j| rows[i][j] + mono_pow * rows[k][j] - bki * trop_sum[j])
                    .collect(),
            );
        }
        out
    }

    #[test]
    fn oracle_agrees_on_example_sequence() {
        let ed = example_ed();
        let ks = [0usize, 1, 0, 1, 0, 1];
        let mut state = TropicalState::initial(&ed);
        let mut rows: Vec<Vec<i64>> = (0..2)
            .map(|i| state.c_vector(i).to_vec())
            .collect();
        let mut bt = ed.b().clone();
        for &k in &ks {
            let eps = state.tropical_sign(k).unwrap().as_i64();
            let plus = tropical_oracle_step(&ed, &bt, &rows, k, 1);
            let minus = tropical_oracle_step(&ed, &bt, &rows, k, -1);
            assert_eq!(plus, minus, "oracle must be sign-independent");
            rows = tropical_oracle_step(&ed, &bt, &rows, k, eps);
            bt = mutate_matrix(&bt, &ed, k);
            state = state.mutate(&ed, k).unwrap();
            for i in 0..2 {
                assert_eq!(state.c_vector(i), rows[i].as_slice());
            }
        }
    }

    #[test]
    fn oracle_agrees_on_ordinary_rank2_grid() {
        // d = (1,1): ordinary c-vector mutation against the semifield oracle.
        for b in 1..=3i64 {
            let mat = IntMatrix::new(2, vec![0, -b, b, 0]);
            let ed = ExchangeData::with_symbolic_z(mat, vec![1, 1], vec![1, 1]).unwrap();
            let mut state = TropicalState::initial(&ed);
            let mut rows: Vec<Vec<i64>> =
                (0..2).map(|i| state.c_vector(i).to_vec()).collect();
            let mut bt = ed.b().clone();
            for step in 0..8 {
                let k = step % 2;
                let eps = state.tropical_sign(k).unwrap().as_i64();
                rows = tropical_oracle_step(&ed, &bt, &rows, k, eps);
                bt = mutate_matrix(&bt, &ed, k);
                state = state.mutate(&ed, k).unwrap();
                for i in 0..2 {
                    assert_eq!(state.c_vector(i), rows[i].as_slice());
                }
            }
        }
    }
}
