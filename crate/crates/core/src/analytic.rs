//! Floating-point verification of the analytic layer: the infinite-product
//! logarithm of the dilogarithms, the degree-d dilogarithm integral, the
//! q -> 1 asymptotics, and the root-of-unity factorization identities.
//!
//! Everything here is numeric by design: the asymptotic statements have no
//! exact finite-order content, and the root-of-unity identities are scalar
//! identities ideal for floating-point checking. No symbolic cyclotomic
//! arithmetic is built.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Knobs for the numeric suites.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Number of factors kept from the infinite product.
    pub product_terms: usize,
    /// Sample resolution for integration-path scanning and the series
    /// oracles.
    pub quadrature_points: usize,
    /// Acceptance tolerance for residuals.
    pub tolerance: f64,
    /// Increasing path of q values in (0,1) for asymptotic checks.
    pub q_path: Vec<f64>,
    /// Magnitude below which a product factor counts as a pole.
    pub pole_eps: f64,
    /// Imaginary-part margin around the negative real axis for log branches.
    pub branch_eps: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            product_terms: 100_000,
            quadrature_points: 2_000,
            tolerance: 1e-3,
            q_path: vec![0.9, 0.99, 0.999],
            pole_eps: 1e-300,
            branch_eps: 1e-12,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<()> {
        if self.product_terms < 1 {
            return Err(Error::InvalidExchangeData(
                "product_terms must be at least 1".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidExchangeData(
                "tolerance must be positive".into(),
            ));
        }
        if self.q_path.iter().any(|&q| !(0.0 < q && q < 1.0)) {
            return Err(Error::InvalidExchangeData(
                "q path values must lie in (0,1)".into(),
            ));
        }
        Ok(())
    }
}

/// The exchange polynomial sum_{s=0}^d z_s t^s with z_0 = z_d = 1 and the
/// interior coefficients from `zvals`.
fn z_poly(d: usize, zvals: &[f64], t: Complex64) -> Complex64 {
    debug_assert_eq!(zvals.len() + 1, d.max(1));
    let mut acc = Complex64::new(1.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for s in 1..=d {
        p *= t;
        let zs = if s == d { 1.0 } else { zvals[s - 1] };
        acc += zs * p;
    }
    acc
}

fn z_poly_scaled(d: usize, zvals: &[f64], q_pow: f64, x: Complex64) -> Complex64 {
    // sum_s z_s (q_pow x)^s with the same coefficient convention
    z_poly(d, zvals, q_pow * x)
}

/// log of the truncated infinite product:
/// -sum_{m=0}^{M-1} log(sum_s z_s q^{s(2m+1)} x^s), principal branch per
/// factor.
pub fn numeric_psi_log(
    d: usize,
    zvals: &[f64],
    q: f64,
    x: Complex64,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qp = q; // q^{2m+1}
    let q2 = q * q;
    for _ in 0..cfg.product_terms {
        let f = z_poly_scaled(d, zvals, qp, x);
        if f.norm() < cfg.pole_eps {
            return Err(Error::NumericPole {
                q: format!("{q}"),
                mag: f.norm(),
            });
        }
        if f.re < 0.0 && f.im.abs() < cfg.branch_eps {
            return Err(Error::BranchAmbiguity {
                factor: format!("{f}"),
            });
        }
        acc -= f.ln();
        qp *= q2;
    }
    Ok(acc)
}

/// Adaptive Simpson quadrature with Richardson acceleration.
fn simpson_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, left, lm, flm, 0.5 * eps, depth - 1)
            + rec(f, m, fm, b, fb, right, rm, frm, 0.5 * eps, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, eps, 48)
}

/// The dilogarithm of degree d with coefficients z:
/// Li_{2;d,z}(x) = -int_0^{-x} log(sum_s z_s y^s) dy/y,
/// computed as -int_0^1 log(p(-x t)) dt/t with the integrand extended
/// continuously to t = 0.
pub fn li2d_numeric(d: usize, zvals: &[f64], x: f64, cfg: &NumericConfig) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    // Scan the segment for zeros of the polynomial.
    let steps = cfg.quadrature_points.max(64);
    for j in 0..=steps {
        let t = j as f64 / steps as f64;
        let y = -x * t;
        let p = z_poly(d, zvals, Complex64::new(y, 0.0)).re;
        if p <= 0.0 {
            return Err(Error::PoleOnPath { y });
        }
    }
    let z1 = if d == 1 { 1.0 } else { zvals[0] };
    let integrand = move |t: f64| -> f64 {
        if t == 0.0 {
            // log(p(-x t))/t -> -z_1 x as t -> 0
            return -z1 * x;
        }
        let y = -x * t;
        let p = z_poly(d, zvals, Complex64::new(y, 0.0)).re;
        p.ln() / t
    };
    Ok(-simpson_adaptive(&integrand, 0.0, 1.0, 1e-12))
}

/// Residuals of (1-q^2) log Psi_{d,z,q}(x) against Li_{2;d,z}(-x) along the
/// q path; passes when they decrease monotonically into the tolerance.
#[derive(Clone, Debug)]
pub struct AsymptoticsReport {
    pub rows: Vec<(f64, f64)>,
    pub monotone: bool,
    pub final_residual: f64,
    pub pass: bool,
}

pub fn asymptotics_check(
    d: usize,
    zvals: &[f64],
    x: f64,
    cfg: &NumericConfig,
) -> Result<AsymptoticsReport> {
    let target = li2d_numeric(d, zvals, -x, cfg)?;
    let mut rows = Vec::with_capacity(cfg.q_path.len());
    for &q in &cfg.q_path {
        let lp = numeric_psi_log(d, zvals, q, Complex64::new(x, 0.0), cfg)?;
        let residual = ((1.0 - q * q) * lp.re - target).abs();
        rows.push((q, residual));
    }
    let monotone = rows.windows(2).all(|w| w[1].1 <= w[0].1) || x == 0.0;
    let final_residual = rows.last().map(|r| r.1).unwrap_or(0.0);
    let pass = monotone && final_residual < cfg.tolerance;
    Ok(AsymptoticsReport {
        rows,
        monotone,
        final_residual,
        pass,
    })
}

/// Li_2 by its power series (|z| < 1).
pub fn li2_series(z: Complex64, terms: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        p *= z;
        acc += p / (n * n) as f64;
    }
    acc
}

/// The q-dilogarithm by its power series: sum_n x^n / (n (q^n - q^{-n})).
pub fn qdilog_series(x: Complex64, q: f64, terms: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        p *= x;
        let den = q.powi(n as i32) - q.powi(-(n as i32));
        acc += p / (n as f64 * den);
    }
    acc
}

/// Residuals of the two root-of-unity identities at (x, q):
/// Li_2(x^{d+1})/(d+1) = sum_{s=0}^d Li_2(w^s x) and the same shape for the
/// q-dilogarithm with base q^{d+1}, w = exp(2 pi i/(d+1)).
#[derive(Clone, Debug)]
pub struct RootsOfUnityReport {
    pub li2_residual: f64,
    pub qdilog_residual: f64,
    pub pass: bool,
}

pub fn roots_of_unity_checks(
    d: usize,
    x: f64,
    q: f64,
    cfg: &NumericConfig,
) -> Result<RootsOfUnityReport> {
    let terms = cfg.quadrature_points.max(200);
    let omega = Complex64::from_polar(1.0, 2.0 * PI / (d as f64 + 1.0));
    let xz = Complex64::new(x, 0.0);

    let lhs = li2_series(xz.powu(d as u32 + 1), terms) / (d as f64 + 1.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    for s in 0..=d {
        rhs += li2_series(omega.powu(s as u32) * xz, terms);
    }
    let li2_residual = (lhs - rhs).norm();

    let qd1 = q.powi(d as i32 + 1);
    let lhs_q = qdilog_series(xz.powu(d as u32 + 1), qd1, terms);
    let mut rhs_q = Complex64::new(0.0, 0.0);
    for s in 0..=d {
        rhs_q += qdilog_series(omega.powu(s as u32) * xz, q, terms);
    }
    let qdilog_residual = (lhs_q - rhs_q).norm();

    let pass = li2_residual < cfg.tolerance && qdilog_residual < cfg.tolerance;
    Ok(RootsOfUnityReport {
        li2_residual,
        qdilog_residual,
        pass,
    })
}

/// Residual of the trivial-coefficient splitting
/// log Psi_{d,1,q}(x) = log Psi_{q^{d+1}}(-x^{d+1}) - log Psi_q(-x).
pub fn split_consistency_residual(
    d: usize,
    q: f64,
    x: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let ones = vec![1.0; d.saturating_sub(1)];
    let xz = Complex64::new(x, 0.0);
    let lhs = numeric_psi_log(d, &ones, q, xz, cfg)?;
    let a = numeric_psi_log(1, &[], q.powi(d as i32 + 1), -xz.powu(d as u32 + 1), cfg)?;
    let b = numeric_psi_log(1, &[], q, -xz, cfg)?;
    Ok((lhs - (a - b)).norm())
}

/// Residual of the root-of-unity product factorization
/// log Psi_{d,1,q}(x) = sum_{s=1}^d log Psi_q(-w^s x).
pub fn product_factorization_residual(
    d: usize,
    q: f64,
    x: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let ones = vec![1.0; d.saturating_sub(1)];
    let xz = Complex64::new(x, 0.0);
    let lhs = numeric_psi_log(d, &ones, q, xz, cfg)?;
    let omega = Complex64::from_polar(1.0, 2.0 * PI / (d as f64 + 1.0));
    let mut rhs = Complex64::new(0.0, 0.0);
    for s in 1..=d {
        rhs += numeric_psi_log(1, &[], q, -omega.powu(s as u32) * xz, cfg)?;
    }
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig {
            product_terms: 4_000,
            ..NumericConfig::default()
        }
    }

    #[test]
    fn psi_log_at_zero_is_zero() {
        let v = numeric_psi_log(1, &[], 0.5, Complex64::new(0.0, 0.0), &cfg()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn psi_log_matches_qdilog_exponential() {
        // log Psi_q(x) = -L_{2,q}(-x)
        let q = 0.5;
        let x = Complex64::new(0.25, 0.0);
        let lhs = numeric_psi_log(1, &[], q, x, &cfg()).unwrap();
        let rhs = -qdilog_series(-x, q, 60);
        assert!((lhs - rhs).norm() < 1e-10, "{}", (lhs - rhs).norm());
    }

    #[test]
    fn psi_log_factorizes_at_trivial_coefficients() {
        let r = product_factorization_residual(2, 0.9, 0.1, &cfg()).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn li2d_reduces_to_li2_at_degree_one() {
        let got = li2d_numeric(1, &[], 0.5, &cfg()).unwrap();
        let want = li2_series(Complex64::new(0.5, 0.0), 400).re;
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn li2d_zero_is_zero() {
        assert_eq!(li2d_numeric(2, &[1.0], 0.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn li2d_against_riemann_oracle() {
        let d = 2;
        let z = [2.0];
        let x = 0.3_f64;
        let got = li2d_numeric(d, &z, x, &cfg()).unwrap();
        // brute-force midpoint rule on -int_0^1 log(p(-x t)) dt / t
        let n = 1_000_000;
        let mut acc = 0.0;
        for j in 0..n {
            let t = (j as f64 + 0.5) / n as f64;
            let y = -x * t;
            let p = 1.0 + z[0] * y + y * y;
            acc += p.ln() / t;
        }
        let want = -acc / n as f64;
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn psi_log_detects_branch_crossing() {
        // 1 + q x < 0 on the real axis puts the first factor on the cut
        let r = numeric_psi_log(1, &[], 0.9, Complex64::new(-2.0, 0.0), &cfg());
        assert!(matches!(r, Err(Error::BranchAmbiguity { .. })));
    }

    #[test]
    fn li2d_detects_pole_on_path() {
        // 1 + y vanishes at y = -1, inside the segment for x = 1.5
        assert!(matches!(
            li2d_numeric(1, &[], 1.5, &cfg()),
            Err(Error::PoleOnPath { .. })
        ));
    }

    #[test]
    fn asymptotics_residual_shrinks() {
        let mut c = cfg();
        c.product_terms = 100_000;
        let rep = asymptotics_check(1, &[], 0.2, &c).unwrap();
        assert!(rep.monotone, "{:?}", rep.rows);
        assert!(rep.pass, "{:?}", rep.rows);
    }

    #[test]
    fn asymptotics_at_zero_argument() {
        let rep = asymptotics_check(1, &[], 0.0, &cfg()).unwrap();
        assert_eq!(rep.final_residual, 0.0);
    }

    #[test]
    fn roots_of_unity_identities() {
        let c = cfg();
        let mut strict = c.clone();
        strict.tolerance = 1e-12;
        let rep = roots_of_unity_checks(1, 0.3, 0.6, &strict).unwrap();
        assert!(rep.li2_residual < 1e-12, "{rep:?}");
        let mut tol10 = c.clone();
        tol10.tolerance = 1e-10;
        let rep = roots_of_unity_checks(2, 0.25, 0.6, &tol10).unwrap();
        assert!(rep.pass, "{rep:?}");
        let rep = roots_of_unity_checks(2, 0.0, 0.6, &tol10).unwrap();
        assert_eq!(rep.li2_residual, 0.0);
    }

    #[test]
    fn split_identity_consistent() {
        let r = split_consistency_residual(2, 0.8, 0.2, &cfg()).unwrap();
        assert!(r < 1e-10, "{r}");
        let r = split_consistency_residual(3, 0.7, 0.15, &cfg()).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn doubling_product_terms_halves_the_tail() {
        let q = 0.9;
        let x = Complex64::new(0.2, 0.0);
        let at = |m: usize| {
            let c = NumericConfig {
                product_terms: m,
                ..NumericConfig::default()
            };
            numeric_psi_log(1, &[], q, x, &c).unwrap()
        };
        let truth = at(4000);
        let r1 = (at(50) - truth).norm();
        let r2 = (at(100) - truth).norm();
        assert!(r2 <= 0.55 * r1, "r1={r1} r2={r2}");
    }

    #[test]
    fn config_validation() {
        let mut c = NumericConfig::default();
        assert!(c.validate().is_ok());
        c.q_path = vec![1.5];
        assert!(c.validate().is_err());
        c.q_path = vec![0.9];
        c.tolerance = 0.0;
        assert!(c.validate().is_err());
    }
}
