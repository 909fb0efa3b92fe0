//! Property suites: ring axioms for the exact scalars, algebra laws for the
//! torus and cone series, dilogarithm recursion invariants, tropical
//! dynamics against the semifield oracle, and identity checks on rotated
//! and searched periodic sequences.

use std::sync::Arc;

use proptest::prelude::*;

use qgca_core::coeff::{Coeff, CoeffPoly, ZMonomial, ZVar};
use qgca_core::dilog::{psi_of, psi_shift_check, PsiSpec};
use qgca_core::identity::{run_report, MutationSequence};
use qgca_core::mutation::{mutate_matrix, QuantumSeed};
use qgca_core::series::ConeSeries;
use qgca_core::torus::{Algebra, ExchangeData, Exponent, IntMatrix, Sign, TorusElement};
use qgca_core::tropical::TropicalState;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn zvar() -> impl Strategy<Value = ZVar> {
    (1usize..=2, 1usize..=2).prop_map(|(i, s)| ZVar { i, s })
}

fn zmono() -> impl Strategy<Value = ZMonomial> {
    prop::collection::vec((zvar(), 1u32..=2), 0..=2).prop_map(|vars| {
        let mut m = ZMonomial::one();
        for (v, e) in vars {
            for _ in 0..e {
                m = m.mul(&ZMonomial::var(v));
            }
        }
        m
    })
}

fn coeff_poly() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec((zmono(), -4i64..=4, -5i64..=5), 0..=4).prop_map(|terms| {
        let mut p = CoeffPoly::zero();
        for (z, e, c) in terms {
            p.add_term(z, e, c.into());
        }
        p
    })
}

fn zfree_poly_nonzero() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec((-3i64..=3, -5i64..=5), 1..=3).prop_map(|terms| {
        let mut p = CoeffPoly::zero();
        for (e, c) in terms {
            p.add_term(ZMonomial::one(), e, c.into());
        }
        if p.is_zero() {
            p.add_term(ZMonomial::one(), 0, 1.into());
        }
        p
    })
}

fn coeff() -> impl Strategy<Value = Coeff> {
    (coeff_poly(), zfree_poly_nonzero())
        .prop_map(|(num, den)| Coeff::from_parts(num, den).unwrap())
}

fn example_algebra() -> Arc<Algebra> {
    let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
    Algebra::quantum(ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap())
}

fn exponent2() -> impl Strategy<Value = Exponent> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Exponent::new(vec![a, b]))
}

fn torus_element(alg: Arc<Algebra>) -> impl Strategy<Value = TorusElement> {
    prop::collection::vec((exponent2(), coeff()), 0..=3).prop_map(move |terms| {
        let mut acc = TorusElement::zero(Arc::clone(&alg));
        for (e, c) in terms {
            acc = acc
                .add(&TorusElement::monomial(Arc::clone(&alg), e, c))
                .unwrap();
        }
        acc
    })
}

/// A series with unit constant term above its base, so it is invertible.
fn invertible_series(alg: Arc<Algebra>, order: i64) -> impl Strategy<Value = ConeSeries> {
    let alg2 = Arc::clone(&alg);
    (
        exponent2(),
        prop::collection::vec(((0i64..=2, 0i64..=2), -3i64..=3, -2i64..=2), 0..=3),
    )
        .prop_map(move |(base, body)| {
            let mut acc = ConeSeries::monomial(Arc::clone(&alg2), base.clone(), Coeff::one(), order);
            for ((dx, dy), qe, c) in body {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let exp = base.add(&Exponent::new(vec![dx, dy]));
                let coeff = &Coeff::from_int(c) * &Coeff::q_pow(qe);
                acc = acc
                    .add(&ConeSeries::monomial(Arc::clone(&alg2), exp, coeff, order))
                    .unwrap();
            }
            acc
        })
}

// ---------------------------------------------------------------------------
// Scalar field
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coeff_add_commutes(a in coeff(), b in coeff()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn coeff_mul_commutes(a in coeff(), b in coeff()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn coeff_add_associates(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn coeff_mul_associates(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn coeff_distributes(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn cross_multiplication_is_an_equivalence(
        x in coeff(),
        g in zfree_poly_nonzero(),
        h in zfree_poly_nonzero(),
    ) {
        // Three representations of the same value, pairwise equal.
        let a = x.clone();
        let b = Coeff::from_parts(x.num().mul(&g), x.den().mul(&g)).unwrap();
        let c = Coeff::from_parts(x.num().mul(&h), x.den().mul(&h)).unwrap();
        prop_assert_eq!(&a, &a);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &a);
        prop_assert_eq!(&b, &c);
        prop_assert_eq!(&a, &c);
    }

    #[test]
    fn inverses_multiply_to_one(num in zfree_poly_nonzero(), den in zfree_poly_nonzero()) {
        let a = Coeff::from_parts(num, den).unwrap();
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.invert().unwrap()).is_one());
    }

    #[test]
    fn normalization_is_idempotent(x in coeff(), g in zfree_poly_nonzero()) {
        // Re-normalizing an already canonical fraction changes nothing, and
        // blowing it up by a common z-free factor reduces back to it.
        let renorm = Coeff::from_parts(x.num().clone(), x.den().clone()).unwrap();
        prop_assert_eq!(renorm.num(), x.num());
        prop_assert_eq!(renorm.den(), x.den());
        let blown = Coeff::from_parts(x.num().mul(&g), x.den().mul(&g)).unwrap();
        prop_assert_eq!(blown.num(), x.num());
        prop_assert_eq!(blown.den(), x.den());
    }
}

// ---------------------------------------------------------------------------
// Torus and series
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn skew_form_is_antisymmetric(a in exponent2(), b in exponent2()) {
        let alg = example_algebra();
        prop_assert_eq!(alg.skew(&a, &b), -alg.skew(&b, &a));
    }

    #[test]
    fn generator_commutation_matches_base_powers(i in 0usize..2, j in 0usize..2) {
        // Y_i Y_j = q_j^{2 b_ji} Y_j Y_i with q_j = q^{r_j d_j}
        let alg = example_algebra();
        let ed = alg.exchange_data();
        let expect = ed.q_base_exp(j) * 2 * ed.b().get(j, i);
        prop_assert_eq!(alg.commutation_exponent(i, j), expect);
    }

    #[test]
    fn torus_mul_associates(
        a in torus_element(example_algebra()),
        b in torus_element(example_algebra()),
        c in torus_element(example_algebra()),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_mul_associates(
        a in invertible_series(example_algebra(), 6),
        b in invertible_series(example_algebra(), 6),
        c in invertible_series(example_algebra(), 6),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_inverse_is_two_sided(a in invertible_series(example_algebra(), 6)) {
        let inv = a.invert().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_one());
        prop_assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn truncation_commutes_with_arithmetic(
        a in invertible_series(example_algebra(), 8),
        b in invertible_series(example_algebra(), 8),
        low in 2i64..=6,
    ) {
        prop_assert_eq!(
            a.mul(&b).unwrap().truncated(low),
            a.truncated(low).mul(&b.truncated(low)).unwrap()
        );
        prop_assert_eq!(
            a.add(&b).unwrap().truncated(low),
            a.truncated(low).add(&b.truncated(low)).unwrap()
        );
    }

    #[test]
    fn classical_image_is_multiplicative(
        a in invertible_series(example_algebra(), 6),
        b in invertible_series(example_algebra(), 6),
    ) {
        let lhs = a.mul(&b).unwrap().eval_q1().unwrap();
        let rhs = a.eval_q1().unwrap().mul(&b.eval_q1().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

// ---------------------------------------------------------------------------
// Dilogarithm invariants
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn recursion_survives_resubstitution(d in 1i64..=3, base in 1i64..=3) {
        let coeffs = (1..d)
            .map(|s| Coeff::z(ZVar { i: 1, s: s as usize }))
            .collect();
        let spec = PsiSpec::new(d, coeffs, base);
        prop_assert!(psi_shift_check(&spec, 1, 8));
    }

    #[test]
    fn psi_inverse_pairs_on_monomials(a in 1i64..=2, b in 0i64..=2) {
        prop_assume!(a + b >= 1);
        let alg = example_algebra();
        let ed = alg.exchange_data().clone();
        let spec = PsiSpec::for_index(&ed, 0);
        let arg = ConeSeries::monomial(
            Arc::clone(&alg),
            Exponent::new(vec![a, b]),
            Coeff::q_pow(1),
            8,
        );
        let plus = psi_of(&spec, &arg, Sign::Plus, 8).unwrap();
        let minus = psi_of(&spec, &arg, Sign::Minus, 8).unwrap();
        prop_assert!(plus.mul(&minus).unwrap().is_one());
    }
}

// ---------------------------------------------------------------------------
// Tropical dynamics: random rank-3 ordinary seeds against the rule
// ---------------------------------------------------------------------------

fn random_skew_rank3(seed: u64) -> ExchangeData {
    let mut s = seed.max(1);
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        s
    };
    loop {
        let mut entries = vec![0i64; 9];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let v = (next() % 5) as i64 - 2;
                entries[i * 3 + j] = v;
                entries[j * 3 + i] = -v;
            }
        }
        let b = IntMatrix::new(3, entries);
        if let Ok(ed) = ExchangeData::with_symbolic_z(b, vec![1; 3], vec![1; 3]) {
            return ed;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tropical_involution_rank3(seed in 1u64..5000, k in 0usize..3) {
        let ed = random_skew_rank3(seed);
        let s0 = TropicalState::initial(&ed);
        let s2 = s0.mutate(&ed, k).unwrap().mutate(&ed, k).unwrap();
        prop_assert_eq!(s0, s2);
    }

    #[test]
    fn unit_degree_c_vectors_match_semifield_oracle(seed in 1u64..5000) {
        // Ordinary (d = 1) mutation walks checked against min-plus tropical
        // evaluation of the full mutation formula.
        let ed = random_skew_rank3(seed);
        let mut state = TropicalState::initial(&ed);
        let mut rows: Vec<Vec<i64>> = (0..3).map(|i| state.c_vector(i).to_vec()).collect();
        let mut bt = ed.b().clone();
        let mut s = seed;
        for _ in 0..6 {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let k = (s % 3) as usize;
            let eps = state.tropical_sign(k).unwrap().as_i64();
            // oracle step at both signs
            let step = |e: i64, rows: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
                (0..3)
                    .map(|i| {
                        if i == k {
                            return rows[k].iter().map(|x| -x).collect();
                        }
                        let bki = bt.get(k, i);
                        let pow = (e * bki).max(0);
                        (0..3)
                            .map(|j| {
                                let trop = (0..=1)
                                    .map(|t| t * e * rows[k][j])
                                    .min()
                                    .unwrap();
                                rows[i][j] + pow * rows[k][j] - bki * trop
                            })
                            .collect()
                    })
                    .collect()
            };
            let plus = step(1, &rows);
            let minus = step(-1, &rows);
            prop_assert_eq!(&plus, &minus);
            rows = step(eps, &rows);
            bt = mutate_matrix(&bt, &ed, k);
            state = state.mutate(&ed, k).unwrap();
            for i in 0..3 {
                prop_assert_eq!(state.c_vector(i), rows[i].as_slice());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Identity suites beyond the bundled sequence
// ---------------------------------------------------------------------------

/// Rotations of the bundled example: start the alternating sequence at seed
/// t, i.e. from the exchange matrix (-1)^{t+1} B with the rotated index
/// pattern. Every rotation is again periodic and both identities must hold.
#[test]
fn rotated_example_sequences_verify() {
    let base = qgca_core::example::exchange_data();
    let ks = qgca_core::example::sequence();
    for start in 0..6 {
        let b = if start % 2 == 0 {
            base.b().clone()
        } else {
            base.b().neg()
        };
        let ed = ExchangeData::with_symbolic_z(b, vec![2, 1], vec![1, 2]).unwrap();
        let rotated: Vec<usize> = (0..6).map(|t| ks[(start + t) % 6]).collect();
        let seq = MutationSequence::identity_sigma(ed, rotated.clone(), 8).unwrap();
        let report = run_report(&seq);
        assert!(report.all_green(), "rotation {start} ({rotated:?}): {report}");
    }
}

/// Bounded search for periodic alternating sequences on the rank-2 data with
/// d = (3,1), then full verification of the found period.
#[test]
fn degree_three_rank2_period_found_and_verified() {
    let b = IntMatrix::new(2, vec![0, -1, 1, 0]);
    let ed = ExchangeData::with_symbolic_z(b, vec![3, 1], vec![1, 3]).unwrap();
    // tropical pre-search for the shortest alternating period with sigma = id
    let mut found = None;
    'outer: for len in 2..=12usize {
        let ks: Vec<usize> = (0..len).map(|t| t % 2).collect();
        let mut state = TropicalState::initial(&ed);
        for &k in &ks {
            state = match state.mutate(&ed, k) {
                Ok(s) => s,
                Err(_) => continue 'outer,
            };
        }
        if state.c_matrix() == &IntMatrix::identity(2) && state.bt() == ed.b() {
            found = Some(ks);
            break;
        }
    }
    let ks = found.expect("a tropical period of length <= 12 exists");
    assert_eq!(ks.len(), 8, "degree (3,1) data closes after 8 steps");
    let seq = MutationSequence::identity_sigma(ed, ks, 8).unwrap();
    let report = run_report(&seq);
    assert!(report.all_green(), "{report}");
}

/// The tropical-form identity product evaluated at q = 1 is the classical
/// unit.
#[test]
fn tropical_product_classical_limit_is_one() {
    let seq = qgca_core::example::mutation_sequence(8);
    let res = qgca_core::identity::tropical_identity_check(&seq).unwrap();
    assert!(res.is_clean());
    // the (zero) residual series maps to the classical zero
    let alg = Algebra::quantum(seq.exchange_data().clone());
    let one = ConeSeries::one(Arc::clone(&alg), 8);
    let classical = one.eval_q1().unwrap();
    assert!(classical.is_one());
}

/// Mutation equals the adjoint action applied to the monomial part at every
/// step of the bundled sequence: the dressing-product route inside mutate
/// and the expanded-dilogarithm conjugation route must agree termwise.
#[test]
fn adjoint_of_monomial_part_reproduces_mutation_along_the_sequence() {
    use qgca_core::dilog::PsiSpec;
    use qgca_core::mutation::conjugate_by_psi;

    let order = 8;
    let seq = qgca_core::example::mutation_sequence(order);
    let ed = seq.exchange_data().clone();
    let seeds = qgca_core::identity::evaluate_sequence(&seq).unwrap();
    for (t, &k) in seq.ks().iter().enumerate() {
        let eps = seeds[t].tropical_sign(k).unwrap();
        let zs = seeds[t].monomial_part(k, eps).unwrap();
        let spec = PsiSpec::for_index(&ed, k);
        for i in 0..2 {
            let conj = conjugate_by_psi(&spec, seeds[t].var(k), eps, &zs[i], order).unwrap();
            assert_eq!(&conj, seeds[t + 1].var(i), "t={} i={i}", t + 1);
        }
    }
}

/// Commutation of the monomial part against the mutated matrix on random
/// rank-2 seeds (both signs).
#[test]
fn monomial_part_commutation_random_seeds() {
    for seedval in [3u64, 17, 91, 203] {
        let ed = {
            let mut s = seedval;
            let mut next = move || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                s
            };
            let b12 = [(-2i64), -1, 1, 2][(next() % 4) as usize];
            let b21 = -(b12.signum()) * ((next() % 2) as i64 + 1);
            let d1 = (next() % 3) as i64 + 1;
            let d2 = (next() % 3) as i64 + 1;
            let g = {
                fn gcd(a: i64, b: i64) -> i64 {
                    if b == 0 {
                        a.abs()
                    } else {
                        gcd(b, a % b)
                    }
                }
                gcd(d1 * b12.abs(), d2 * b21.abs())
            };
            let b = IntMatrix::new(2, vec![0, b12, b21, 0]);
            ExchangeData::with_symbolic_z(
                b,
                vec![d1, d2],
                vec![d2 * b21.abs() / g, d1 * b12.abs() / g],
            )
            .unwrap()
        };
        let alg = Algebra::quantum(ed.clone());
        let seed = QuantumSeed::initial(Arc::clone(&alg), 8);
        for k in 0..2 {
            for eps in [Sign::Plus, Sign::Minus] {
                let zs = seed.monomial_part(k, eps).unwrap();
                let bprime = mutate_matrix(seed.bt(), &ed, k);
                for i in 0..2 {
                    for j in 0..2 {
                        if i == j {
                            continue;
                        }
                        let lhs = zs[i].mul(&zs[j]).unwrap();
                        let qpow =
                            Coeff::q_pow(2 * ed.r(j) * ed.d(j) * bprime.get(j, i));
                        let rhs = zs[j].mul(&zs[i]).unwrap().scalar_mul(&qpow);
                        assert_eq!(lhs, rhs, "k={k} i={i} j={j} eps={eps}");
                    }
                }
            }
        }
    }
}
