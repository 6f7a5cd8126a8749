//! Closed-form predictions for random instances: the critical size below
//! which perfect partitions almost surely do not exist, the expected
//! optimum difference in the no-perfect-partition regime, and the
//! empirical scaling law of the BLDM difference.
//!
//! These are floating-point predictions for experiment post-processing and
//! are never used inside the exact solvers.

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::error::{Error, Result};

/// Second moment and variance of the weight distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleMoments {
    mean_sq: f64,
    variance: f64,
}

impl EnsembleMoments {
    pub fn new(mean_sq: f64, variance: f64) -> Result<Self> {
        if !(mean_sq.is_finite() && variance.is_finite() && variance >= 0.0 && mean_sq >= variance)
        {
            return Err(Error::Config(format!(
                "moments need mean_sq >= variance >= 0, got mean_sq={mean_sq}, variance={variance}"
            )));
        }
        Ok(EnsembleMoments { mean_sq, variance })
    }

    /// Uniform on `[0, 1)`: `<x^2> = 1/3`, variance `1/12`.
    pub fn unit_uniform() -> Self {
        EnsembleMoments {
            mean_sq: 1.0 / 3.0,
            variance: 1.0 / 12.0,
        }
    }

    pub fn mean_sq(&self) -> f64 {
        self.mean_sq
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }
}

/// Exact moments of the discrete uniform distribution on `0..2^b`.
pub fn moments_uniform_bits(bits: u32) -> EnsembleMoments {
    let range = 2f64.powi(bits as i32);
    let mean = (range - 1.0) / 2.0;
    let variance = (range * range - 1.0) / 12.0;
    EnsembleMoments {
        mean_sq: variance + mean * mean,
        variance,
    }
}

const ROOT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 500;

/// Critical instance size `n_c`.
///
/// Unconstrained: `n - log2(n)/2 = log2(pi/2 * <x^2>) / 2`.
/// Balanced: `n - log2(n) = log2(pi * sqrt(var))`.
///
/// Returns the larger root, which must exceed 1.
pub fn critical_n(moments: &EnsembleMoments, balanced: bool) -> Result<f64> {
    let (coef, rhs) = if balanced {
        (1.0, (PI * moments.variance.sqrt()).log2())
    } else {
        (0.5, 0.5 * (PI / 2.0 * moments.mean_sq).log2())
    };
    if !rhs.is_finite() {
        return Err(Error::NoRoot(format!("non-positive moment (rhs = {rhs})")));
    }
    solve_n_minus_log(coef, rhs)
}

/// Larger root of `n - coef * log2(n) = rhs`.
fn solve_n_minus_log(coef: f64, rhs: f64) -> Result<f64> {
    let g = |n: f64| n - coef * n.log2();
    // g is convex with its minimum at coef / ln 2; the larger root lies
    // to the right of it.
    let n_min = coef / LN_2;
    if g(n_min) >= rhs {
        return Err(Error::NoRoot(format!(
            "n - {coef} log2 n = {rhs} has no solution above {n_min:.4}"
        )));
    }

    // Damped fixed point n <- rhs + coef * log2(n), started above the root.
    let mut n = rhs.max(n_min) + coef * rhs.max(2.0).log2() + 1.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let next = 0.5 * n + 0.5 * (rhs + coef * n.log2());
        if (next - n).abs() <= ROOT_TOL * next.abs() {
            n = next;
            converged = true;
            break;
        }
        n = next;
    }
    if !converged || n.is_nan() || n <= n_min {
        n = bisect(|x| g(x) - rhs, n_min, upper_bracket(g, rhs, n_min));
    }
    if n <= 1.0 {
        return Err(Error::NoRoot(format!("root {n} is not above 1")));
    }
    Ok(n)
}

fn upper_bracket(g: impl Fn(f64) -> f64, rhs: f64, start: f64) -> f64 {
    let mut hi = start.max(2.0) * 2.0;
    while g(hi) <= rhs {
        hi *= 2.0;
    }
    hi
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) < 0 < f(hi)
    while hi - lo > ROOT_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Expected optimum partition difference for `1 << n << n_c`.
///
/// Unconstrained: `sqrt(2 pi <x^2>) sqrt(n) 2^-n`.
/// Balanced: `pi sqrt(var) n 2^-n`.
pub fn expected_optimum(moments: &EnsembleMoments, n: u32, balanced: bool) -> f64 {
    let n_f = n as f64;
    let scale = 2f64.powi(-(n as i32));
    if balanced {
        PI * moments.variance.sqrt() * n_f * scale
    } else {
        (2.0 * PI * moments.mean_sq).sqrt() * n_f.sqrt() * scale
    }
}

/// Conjectured mean BLDM difference for `n` uniform weights on `[0, 1)`:
/// `(sqrt 2 - 1) n^(-(2/3) ln n)`.
pub fn bldm_prediction(n: f64) -> f64 {
    let ln_n = n.ln();
    (SQRT_2 - 1.0) * (-(2.0 / 3.0) * ln_n * ln_n).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn uniform_bit_moments() {
        let m = moments_uniform_bits(1);
        assert_eq!((m.mean_sq(), m.variance()), (0.5, 0.25));
        let m = moments_uniform_bits(2);
        // {0,1,2,3}: mean 1.5, <x^2> = 14/4, var = 3.5 - 2.25
        assert!((m.variance() - 1.25).abs() < 1e-15);
        assert!((m.mean_sq() - 3.5).abs() < 1e-15);
        let m = moments_uniform_bits(25);
        assert!(rel(m.variance(), (2f64.powi(50) - 1.0) / 12.0) < 1e-15);
    }

    #[test]
    fn critical_n_balanced_b25() {
        let nc = critical_n(&moments_uniform_bits(25), true).unwrap();
        assert!((nc - 29.7).abs() < 0.1, "{nc}");
        // residual check
        let rhs = (PI * moments_uniform_bits(25).variance().sqrt()).log2();
        assert!((nc - nc.log2() - rhs).abs() < 1e-7);
    }

    #[test]
    fn critical_n_balanced_b15() {
        let nc = critical_n(&moments_uniform_bits(15), true).unwrap();
        assert!((nc - 19.1).abs() < 0.05, "{nc}");
    }

    #[test]
    fn critical_n_unconstrained_residual() {
        let m = moments_uniform_bits(20);
        let nc = critical_n(&m, false).unwrap();
        let rhs = 0.5 * (PI / 2.0 * m.mean_sq()).log2();
        assert!((nc - 0.5 * nc.log2() - rhs).abs() < 1e-7);
        assert!(nc > 20.0 && nc < 25.0, "{nc}");
    }

    #[test]
    fn degenerate_has_no_root() {
        // pi * sqrt(var) = 1 makes the right-hand side zero.
        let sd = 1.0 / PI;
        let m = EnsembleMoments::new(sd * sd, sd * sd).unwrap();
        assert!(matches!(critical_n(&m, true), Err(Error::NoRoot(_))));
        let zero = EnsembleMoments::new(0.0, 0.0).unwrap();
        assert!(critical_n(&zero, true).is_err());
    }

    #[test]
    fn critical_n_increases_with_bits() {
        let nc: Vec<f64> = (10..=40)
            .map(|b| critical_n(&moments_uniform_bits(b), true).unwrap())
            .collect();
        let slopes: Vec<f64> = nc.windows(2).map(|w| w[1] - w[0]).collect();
        // Slope is 1 / (1 - 1/(n ln 2)): above one, shrinking towards it.
        assert!(slopes.iter().all(|&s| s > 1.0 && s < 1.15), "{slopes:?}");
        assert!(slopes.windows(2).all(|w| w[1] < w[0]));
        for &s in &slopes[20..] {
            assert!((s - 1.0).abs() < 0.05, "{s}");
        }
    }

    #[test]
    fn expected_optimum_examples() {
        let v = expected_optimum(&EnsembleMoments::unit_uniform(), 20, false);
        let want = (2.0 * PI / 3.0).sqrt() * 20f64.sqrt() * 2f64.powi(-20);
        assert!(rel(v, want) < 1e-14);
        assert!(rel(v, 6.17e-6) < 1e-3, "{v}");

        let v = expected_optimum(&EnsembleMoments::unit_uniform(), 24, true);
        assert!(rel(v, PI / 12f64.sqrt() * 24.0 * 2f64.powi(-24)) < 1e-14);
        assert!(rel(v, 1.30e-6) < 5e-3, "{v}");

        let m = EnsembleMoments::unit_uniform();
        let (a, b) = (
            expected_optimum(&m, 10, true),
            expected_optimum(&m, 20, true),
        );
        assert!(rel(b / a, 2.0 * 2f64.powi(-10)) < 1e-14);
        let grid: Vec<f64> = (2..60).map(|n| expected_optimum(&m, n, false)).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
        assert!(grid.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn bldm_prediction_examples() {
        let v = bldm_prediction(100.0);
        assert!(rel(v, 3.0e-7) < 0.02, "{v}");
        let e = std::f64::consts::E;
        assert!(rel(bldm_prediction(e), (SQRT_2 - 1.0) * (-2.0f64 / 3.0).exp()) < 1e-14);
        let grid: Vec<f64> = (3..2000).map(|n| bldm_prediction(n as f64)).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }
}
