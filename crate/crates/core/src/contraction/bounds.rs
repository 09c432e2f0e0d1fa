use serde::Serialize;

use crate::error::{KcutError, Result};

/// Parameters of the expected-vertex-count bound: at most `beta * n` cuts
/// weigh in `[λ̄_k, γ λ̄_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub gamma: f64,
}

impl BoundParams {
    pub fn new(n: usize, k: usize, beta: f64, gamma: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&gamma) {
            return Err(KcutError::InvalidParameter(format!(
                "gamma must lie in [1, 2), got {gamma}"
            )));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(KcutError::InvalidParameter(format!(
                "beta must be finite and nonnegative, got {beta}"
            )));
        }
        if k < 2 {
            return Err(KcutError::InvalidParameter(format!("k must be at least 2, got {k}")));
        }
        Ok(BoundParams { n, k, beta, gamma })
    }

    /// `B = (γ - 1) β / 2`
    pub fn b(&self) -> f64 {
        (self.gamma - 1.0) * self.beta / 2.0
    }

    /// `A = B / (B + 1 - γ/2)`, always below 1 for `γ < 2`.
    pub fn a(&self) -> f64 {
        let b = self.b();
        b / (b + 1.0 - self.gamma / 2.0)
    }

    /// Upper envelope `f̃(t) = n (e^{-(γ/2)t} - A e^{-t}) / (1 - A)` of the
    /// expected vertex count minus its linear drift term.
    pub fn envelope(&self, t: f64) -> f64 {
        let a = self.a();
        self.n as f64 * ((-(self.gamma / 2.0) * t).exp() - a * (-t).exp()) / (1.0 - a)
    }

    pub fn bound(&self, t: f64) -> f64 {
        self.envelope(t) + self.gamma / 2.0 * (self.k - 1) as f64 * t
    }
}

/// Upper bound on the expected supervertex count of the clock process at
/// time `t`: `f̃(t) + (γ/2)(k-1)t`.
pub fn lemma_expect_bound(n: usize, k: usize, beta: f64, gamma: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(KcutError::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    Ok(BoundParams::new(n, k, beta, gamma)?.bound(t))
}

/// Freedman's martingale tail: `exp(-(s²/2) / (σ² + R s / 3))`.
pub fn freedman_tail_bound(r: f64, sigma2: f64, s: f64) -> Result<f64> {
    if !(r > 0.0) || !(sigma2 >= 0.0) || !(s >= 0.0) {
        return Err(KcutError::InvalidParameter(format!(
            "need R > 0, sigma^2 >= 0, s >= 0; got R = {r}, sigma^2 = {sigma2}, s = {s}"
        )));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    Ok((-(s * s / 2.0) / (sigma2 + r * s / 3.0)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Classical RK4 on `f' = -(γ/2) f + B e^{-t} n`, `f(0) = n`.
    fn integrate(p: &BoundParams, t_end: f64, steps: usize) -> f64 {
        let n = p.n as f64;
        let (half_gamma, b) = (p.gamma / 2.0, p.b());
        let rhs = |t: f64, f: f64| -half_gamma * f + b * (-t).exp() * n;
        let h = t_end / steps as f64;
        let (mut t, mut f) = (0.0, n);
        for _ in 0..steps {
            let k1 = rhs(t, f);
            let k2 = rhs(t + h / 2.0, f + h / 2.0 * k1);
            let k3 = rhs(t + h / 2.0, f + h / 2.0 * k2);
            let k4 = rhs(t + h, f + h * k3);
            f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        f
    }

    #[test]
    fn starts_at_n() {
        for (beta, gamma) in [(0.0, 1.0), (2.0, 1.5), (7.0, 1.99)] {
            assert_eq!(lemma_expect_bound(16, 3, beta, gamma, 0.0).unwrap(), 16.0);
        }
    }

    #[test]
    fn gamma_one_collapses() {
        for t in [0.3, 1.0, 2.5] {
            let got = lemma_expect_bound(20, 4, 5.0, 1.0, t).unwrap();
            let want = 20.0 * (-t / 2.0).exp() + 3.0 * t / 2.0;
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_ode_integration() {
        let p = BoundParams::new(16, 2, 2.0, 1.5).unwrap();
        let numeric = integrate(&p, 2.0, 20_000) + 0.75 * 2.0;
        let closed = lemma_expect_bound(16, 2, 2.0, 1.5, 2.0).unwrap();
        assert!(((closed - numeric) / numeric).abs() < 1e-6, "{closed} vs {numeric}");
    }

    #[test]
    fn rejects_gamma_two() {
        assert!(lemma_expect_bound(10, 2, 1.0, 2.0, 1.0).is_err());
        assert!(lemma_expect_bound(10, 2, 1.0, 0.9, 1.0).is_err());
        assert!(lemma_expect_bound(10, 2, -1.0, 1.5, 1.0).is_err());
        assert!(lemma_expect_bound(10, 2, 1.0, 1.5, -1.0).is_err());
    }

    #[test]
    fn freedman_examples() {
        assert_eq!(freedman_tail_bound(1.0, 4.0, 0.0).unwrap(), 1.0);
        assert_eq!(freedman_tail_bound(1.0, 0.0, 0.0).unwrap(), 1.0);
        let v = freedman_tail_bound(1.0, 4.0, 4.0).unwrap();
        assert!((v - (-1.5f64).exp()).abs() < 1e-15);
        assert!(freedman_tail_bound(0.0, 1.0, 1.0).is_err());
        assert!(freedman_tail_bound(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn freedman_concentration_instance() {
        // R = 1, sigma^2 = p m <= alpha t n with alpha = k; deviation of
        // order k ln N sqrt(alpha t n).
        let (n, k) = (1000.0f64, 2.0f64);
        let big_n = n;
        let t = 0.5 * n.ln();
        let sigma2 = k * t * n;
        let s = 4.0 * k * big_n.ln() * (k * t * n).sqrt();
        let bound = freedman_tail_bound(1.0, sigma2, s).unwrap();
        assert!(bound <= big_n.powf(-2.0 * k));
    }

    proptest! {
        #[test]
        fn never_below_pure_decay(
            n in 1usize..200, k in 2usize..6, beta in 0.0f64..20.0,
            gamma in 1.0f64..1.999, t in 0.0f64..10.0,
        ) {
            let v = lemma_expect_bound(n, k, beta, gamma, t).unwrap();
            let decay = n as f64 * (-(gamma / 2.0) * t).exp();
            prop_assert!(v >= decay * (1.0 - 1e-12));
        }
    }
}
