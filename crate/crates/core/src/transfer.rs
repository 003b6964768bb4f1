//! Node transfer functions: fixed and adaptive logistic and
//! tangent-hyperbolic, Gaussian, and Beta basis variants.
//!
//! The adaptive variants carry shape parameters that are optimized
//! alongside the connection weights:
//!
//! * logistic / tanh: steepness `lambda` and center `theta`
//! * Gaussian: width `sigma` and center `mu`
//! * Beta: center `theta`, width `sigma`, and shape exponents `p`, `q`
//!
//! All evaluators are pure functions; invalid shape parameters are a
//! caller bug and panic (decode-time clamping keeps optimizer iterates
//! valid).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest exponent magnitude fed to `exp`; larger arguments saturate.
const EXP_ARG_LIMIT: f64 = 500.0;

/// The six transfer-function variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransferKind {
    /// Logistic with lambda = 1, theta = 0.
    SigFix,
    /// Logistic with optimizable (lambda, theta).
    SigAdp,
    /// Tangent-hyperbolic with lambda = 1, theta = 0.
    TanhFix,
    /// Tangent-hyperbolic with optimizable (lambda, theta).
    TanhAdp,
    /// Gaussian with optimizable (sigma, mu).
    Gaussian,
    /// Beta basis with optimizable (theta, sigma, p, q).
    Beta,
}

impl TransferKind {
    pub const ALL: [TransferKind; 6] = [
        TransferKind::SigFix,
        TransferKind::SigAdp,
        TransferKind::TanhFix,
        TransferKind::TanhAdp,
        TransferKind::Gaussian,
        TransferKind::Beta,
    ];

    /// Number of optimizable shape parameters contributed per node.
    pub fn param_count(self) -> usize {
        match self {
            TransferKind::SigFix | TransferKind::TanhFix => 0,
            TransferKind::SigAdp | TransferKind::TanhAdp | TransferKind::Gaussian => 2,
            TransferKind::Beta => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TransferKind::SigFix => "sigfix",
            TransferKind::SigAdp => "sigadp",
            TransferKind::TanhFix => "tanhfix",
            TransferKind::TanhAdp => "tanhadp",
            TransferKind::Gaussian => "gaussian",
            TransferKind::Beta => "beta",
        }
    }

    /// True for the two fixed-parameter kinds the gradient baseline supports.
    pub fn is_fixed(self) -> bool {
        matches!(self, TransferKind::SigFix | TransferKind::TanhFix)
    }
}

impl fmt::Display for TransferKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransferKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TransferKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown transfer function `{s}`")))
    }
}

/// A transfer function variant together with its live parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferSpec<F> {
    kind: TransferKind,
    params: Vec<F>,
}

impl<F: Scalar> TransferSpec<F> {
    /// Builds a spec, validating parameter count and domains.
    pub fn new(kind: TransferKind, params: Vec<F>) -> Result<Self> {
        if params.len() != kind.param_count() {
            return Err(Error::Config(format!(
                "{kind} takes {} parameters, got {}",
                kind.param_count(),
                params.len()
            )));
        }
        match kind {
            TransferKind::Gaussian => {
                if params[0] == F::zero() {
                    return Err(Error::Config("gaussian sigma must be nonzero".into()));
                }
            }
            TransferKind::Beta => {
                if params[1] <= F::zero() || params[2] <= F::zero() || params[3] <= F::zero() {
                    return Err(Error::Config(
                        "beta sigma, p, q must be positive".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(TransferSpec { kind, params })
    }

    /// Neutral defaults: lambda = 1, theta = mu = 0, sigma = p = q = 1.
    pub fn default_for(kind: TransferKind) -> Self {
        let one = F::one();
        let zero = F::zero();
        let params = match kind {
            TransferKind::SigFix | TransferKind::TanhFix => vec![],
            TransferKind::SigAdp | TransferKind::TanhAdp => vec![one, zero],
            TransferKind::Gaussian => vec![one, zero],
            TransferKind::Beta => vec![zero, one, one, one],
        };
        TransferSpec { kind, params }
    }

    pub fn kind(&self) -> TransferKind {
        self.kind
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    /// Applies the transfer function to a net input.
    pub fn eval(&self, x: F) -> F {
        match self.kind {
            TransferKind::SigFix => logistic(x, F::one(), F::zero()),
            TransferKind::SigAdp => logistic(x, self.params[0], self.params[1]),
            TransferKind::TanhFix => tanh(x, F::one(), F::zero()),
            TransferKind::TanhAdp => tanh(x, self.params[0], self.params[1]),
            TransferKind::Gaussian => gaussian(x, self.params[0], self.params[1]),
            TransferKind::Beta => beta(
                x,
                self.params[0],
                self.params[1],
                self.params[2],
                self.params[3],
            ),
        }
    }

    /// d(phi)/dx at `x`. Only defined for the fixed kinds the gradient
    /// baseline trains.
    pub fn eval_derivative(&self, x: F) -> Result<F> {
        match self.kind {
            TransferKind::SigFix => {
                let y = logistic(x, F::one(), F::zero());
                Ok(y * (F::one() - y))
            }
            TransferKind::TanhFix => {
                let y = tanh(x, F::one(), F::zero());
                Ok(F::one() - y * y)
            }
            kind => Err(Error::UnsupportedKind(kind, "gradient evaluation")),
        }
    }
}

#[inline]
fn bounded_exp<F: Scalar>(a: F) -> F {
    let limit = F::from_f64(EXP_ARG_LIMIT);
    a.max(-limit).min(limit).exp()
}

/// Logistic (sigmoid): `1 / (1 + e^(-lambda (x - theta)))`.
#[inline]
pub fn logistic<F: Scalar>(x: F, lambda: F, theta: F) -> F {
    F::one() / (F::one() + bounded_exp(-lambda * (x - theta)))
}

/// Tangent-hyperbolic: the bipolar counterpart of the logistic,
/// `(e^a - e^-a) / (e^a + e^-a)` with `a = lambda (x - theta)`.
#[inline]
pub fn tanh<F: Scalar>(x: F, lambda: F, theta: F) -> F {
    (lambda * (x - theta)).tanh()
}

/// Gaussian bump: `1/(sqrt(2 pi) sigma) e^(-(x-mu)^2 / (2 sigma^2))`,
/// peaked at `mu` with width `sigma`.
#[inline]
pub fn gaussian<F: Scalar>(x: F, sigma: F, mu: F) -> F {
    assert!(sigma != F::zero(), "gaussian sigma must be nonzero");
    let two = F::from_f64(2.0);
    let norm = F::one() / (F::from_f64(std::f64::consts::TAU).sqrt() * sigma);
    let d = x - mu;
    norm * bounded_exp(-(d * d) / (two * sigma * sigma))
}

/// Beta basis function with center `theta`, width `sigma`, and shape
/// exponents `p`, `q`.
///
/// The support is the open interval `(x0, x1)` with
/// `x0 = theta - sigma p/(p+q)` and `x1 = theta + sigma q/(p+q)`;
/// inside it the value is `A * B` with
/// `A = (1 + (p+q)(x-theta)/(sigma p))^p` and
/// `B = (1 - (p+q)(x-theta)/(sigma q))^q`, outside it is exactly 0.
/// The center value is exactly 1.
pub fn beta<F: Scalar>(x: F, theta: F, sigma: F, p: F, q: F) -> F {
    assert!(
        p > F::zero() && q > F::zero() && sigma > F::zero(),
        "beta sigma, p, q must be positive"
    );
    let zero = F::zero();
    let one = F::one();
    let pq = p + q;
    let x0 = theta - sigma * p / pq;
    let x1 = theta + sigma * q / pq;
    if x <= x0 || x >= x1 {
        return zero;
    }
    if x == theta {
        return one;
    }
    let d = x - theta;
    // Round-off at the support edges may push a base a hair negative;
    // clamp so fractional exponents stay real.
    let base_a = (one + pq * d / (sigma * p)).max(zero);
    let base_b = (one - pq * d / (sigma * q)).max(zero);
    base_a.powf(p) * base_b.powf(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Pin the scalar type for the assertions below.
    fn logistic(x: f64, lambda: f64, theta: f64) -> f64 {
        super::logistic(x, lambda, theta)
    }
    fn tanh(x: f64, lambda: f64, theta: f64) -> f64 {
        super::tanh(x, lambda, theta)
    }
    fn gaussian(x: f64, sigma: f64, mu: f64) -> f64 {
        super::gaussian(x, sigma, mu)
    }
    fn beta(x: f64, theta: f64, sigma: f64, p: f64, q: f64) -> f64 {
        super::beta(x, theta, sigma, p, q)
    }

    /// Closed-form oracle for the Beta support/center formulation:
    /// `((x-x0)/(theta-x0))^p ((x1-x)/(x1-theta))^q` on `(x0, x1)`.
    fn beta_support_form(x: f64, theta: f64, sigma: f64, p: f64, q: f64) -> f64 {
        let x0 = theta - sigma * p / (p + q);
        let x1 = theta + sigma * q / (p + q);
        if x <= x0 || x >= x1 {
            return 0.0;
        }
        ((x - x0) / (theta - x0)).powf(p) * ((x1 - x) / (x1 - theta)).powf(q)
    }

    #[test]
    fn logistic_center_is_half() {
        assert_eq!(logistic(0.0, 1.0, 0.0), 0.5);
        for (lambda, theta) in [(0.3, -2.0), (1.0, 0.7), (4.5, 3.2)] {
            assert!((logistic(theta, lambda, theta) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn logistic_matches_closed_form_oracle() {
        // 1 / (1 + e^-2), evaluated independently.
        assert!((logistic(1.0, 2.0, 0.0) - 0.8807970779778823).abs() < 1e-15);
    }

    #[test]
    fn tanh_is_zero_at_origin() {
        assert_eq!(tanh(0.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn tanh_matches_closed_form_oracle() {
        assert!((tanh(0.5, 1.5, -0.2) - 0.781806357608774).abs() < 1e-15);
    }

    #[test]
    fn tanh_saturates_without_overflow() {
        assert_eq!(tanh(1e6, 300.0, 0.0), 1.0);
        assert_eq!(tanh(-1e6, 300.0, 0.0), -1.0);
        assert_eq!(logistic(1e6, 300.0, 0.0), 1.0);
        // The exponent clamp keeps the low tail finite and positive.
        let low = logistic(-1e6, 300.0, 0.0);
        assert!(low >= 0.0 && low < 1e-200, "low tail = {low}");
    }

    #[test]
    fn gaussian_peak_value() {
        let inv_sqrt_tau = 0.3989422804014327;
        assert!((gaussian(3.0, 1.0, 3.0) - inv_sqrt_tau).abs() < 1e-15);
    }

    #[test]
    fn gaussian_matches_closed_form_oracle() {
        assert!((gaussian(1.0, 0.5, 0.0) - 0.10798193302637613).abs() < 1e-15);
    }

    #[test]
    fn gaussian_is_even_about_mu() {
        for a in [0.1, 0.5, 1.7, 4.0] {
            let lhs = gaussian(2.0 + a, 0.8, 2.0);
            let rhs = gaussian(2.0 - a, 0.8, 2.0);
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[should_panic]
    #[test]
    fn gaussian_rejects_zero_sigma() {
        gaussian(0.0, 0.0, 0.0);
    }

    #[test]
    fn beta_center_is_exactly_one() {
        assert_eq!(beta(0.0, 0.0, 2.0, 2.0, 3.0), 1.0);
        assert_eq!(beta(1.3, 1.3, 0.4, 0.7, 2.5), 1.0);
    }

    #[test]
    fn beta_is_zero_outside_support() {
        // theta=0, sigma=2, p=2, q=3 => x0=-0.8, x1=1.2
        assert_eq!(beta(-0.8, 0.0, 2.0, 2.0, 3.0), 0.0);
        assert_eq!(beta(1.2, 0.0, 2.0, 2.0, 3.0), 0.0);
        assert_eq!(beta(-5.0, 0.0, 2.0, 2.0, 3.0), 0.0);
        assert_eq!(beta(5.0, 0.0, 2.0, 2.0, 3.0), 0.0);
    }

    #[test]
    fn beta_matches_support_form_oracle() {
        // Both algebraic routes, frozen from an independent script.
        let want = 0.8547236124674479;
        assert!((beta(0.25, 0.0, 2.0, 2.0, 3.0) - want).abs() < 1e-15);
        let oracle = beta_support_form(0.25, 0.0, 2.0, 2.0, 3.0);
        assert!((beta(0.25, 0.0, 2.0, 2.0, 3.0) - oracle).abs() < 1e-15);
    }

    #[test]
    fn beta_agrees_with_support_form_on_a_grid() {
        let (theta, sigma, p, q) = (0.4, 1.7, 2.3, 1.1);
        for i in 0..=200 {
            let x = -2.0 + 4.0 * i as f64 / 200.0;
            let got = beta(x, theta, sigma, p, q);
            let want = beta_support_form(x, theta, sigma, p, q);
            assert!(
                (got - want).abs() < 1e-12,
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn beta_vanishes_approaching_the_support_edges() {
        let (theta, sigma, p, q) = (0.0, 2.0, 2.0, 3.0);
        let x0 = -0.8;
        let x1 = 1.2;
        assert!(beta(x0 + 1e-9, theta, sigma, p, q) < 1e-6);
        assert!(beta(x1 - 1e-9, theta, sigma, p, q) < 1e-6);
    }

    #[should_panic]
    #[test]
    fn beta_rejects_nonpositive_shape() {
        beta(0.0, 0.0, 1.0, -1.0, 1.0);
    }

    #[test]
    fn spec_dispatch_fixed_kinds() {
        let sig = TransferSpec::<f64>::default_for(TransferKind::SigFix);
        let th = TransferSpec::<f64>::default_for(TransferKind::TanhFix);
        assert_eq!(sig.eval(0.0), 0.5);
        assert_eq!(th.eval(0.0), 0.0);
    }

    #[test]
    fn spec_dispatch_beta_center() {
        let spec =
            TransferSpec::new(TransferKind::Beta, vec![0.0, 2.0, 1.0, 1.0]).unwrap();
        assert_eq!(spec.eval(0.0), 1.0);
    }

    #[test]
    fn spec_rejects_bad_parameters() {
        assert!(TransferSpec::new(TransferKind::SigAdp, vec![1.0]).is_err());
        assert!(TransferSpec::new(TransferKind::Gaussian, vec![0.0, 0.0]).is_err());
        assert!(TransferSpec::new(TransferKind::Beta, vec![0.0, 1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn derivative_trivial_values() {
        let sig = TransferSpec::<f64>::default_for(TransferKind::SigFix);
        let th = TransferSpec::<f64>::default_for(TransferKind::TanhFix);
        assert_eq!(sig.eval_derivative(0.0).unwrap(), 0.25);
        assert_eq!(th.eval_derivative(0.0).unwrap(), 1.0);
    }

    #[test]
    fn derivative_rejects_adaptive_kinds() {
        let spec = TransferSpec::<f64>::default_for(TransferKind::Gaussian);
        assert!(spec.eval_derivative(0.0).is_err());
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-5;
        for kind in [TransferKind::SigFix, TransferKind::TanhFix] {
            let spec = TransferSpec::<f64>::default_for(kind);
            for x in [-3.0, -1.0, 0.0, 1.0, 3.0] {
                let fd = (spec.eval(x + h) - spec.eval(x - h)) / (2.0 * h);
                let analytic = spec.eval_derivative(x).unwrap();
                assert!(
                    (fd - analytic).abs() < 1e-6,
                    "{kind} at {x}: {analytic} vs fd {fd}"
                );
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in TransferKind::ALL {
            assert_eq!(kind.name().parse::<TransferKind>().unwrap(), kind);
        }
        assert!("relu".parse::<TransferKind>().is_err());
    }

    proptest! {
        #[test]
        fn logistic_stays_in_unit_interval(
            x in -1e3f64..1e3, lambda in -50.0f64..50.0, theta in -10.0f64..10.0
        ) {
            // Mathematically (0,1); saturates to the closed endpoints in floats.
            let y = logistic(x, lambda, theta);
            prop_assert!((0.0..=1.0).contains(&y));
        }

        #[test]
        fn tanh_stays_in_bipolar_interval(
            x in -1e3f64..1e3, lambda in -50.0f64..50.0, theta in -10.0f64..10.0
        ) {
            let y = tanh(x, lambda, theta);
            prop_assert!((-1.0..=1.0).contains(&y));
        }

        #[test]
        fn gaussian_is_nonnegative(
            x in -1e3f64..1e3, sigma in 0.05f64..10.0, mu in -10.0f64..10.0
        ) {
            prop_assert!(gaussian(x, sigma, mu) >= 0.0);
        }

        #[test]
        fn beta_is_in_unit_interval(
            x in -5.0f64..5.0, theta in -2.0f64..2.0,
            sigma in 0.05f64..10.0, p in 0.05f64..10.0, q in 0.05f64..10.0
        ) {
            let y = beta(x, theta, sigma, p, q);
            prop_assert!((0.0..=1.0).contains(&y), "beta = {y}");
        }

        #[test]
        fn logistic_shift_equivariance(
            x in -20.0f64..20.0, lambda in -5.0f64..5.0, theta in -5.0f64..5.0
        ) {
            let lhs = logistic(x, lambda, theta);
            let rhs = logistic(x - theta, lambda, 0.0);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn tanh_shift_equivariance(
            x in -20.0f64..20.0, lambda in -5.0f64..5.0, theta in -5.0f64..5.0
        ) {
            let lhs = tanh(x, lambda, theta);
            let rhs = tanh(x - theta, lambda, 0.0);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn tanh_odd_symmetry_about_theta(
            a in 0.0f64..10.0, lambda in -5.0f64..5.0, theta in -5.0f64..5.0
        ) {
            let lhs = tanh(theta + a, lambda, theta);
            let rhs = -tanh(theta - a, lambda, theta);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn tanh_equals_scaled_logistic(
            x in -30.0f64..30.0, lambda in -4.0f64..4.0, theta in -5.0f64..5.0
        ) {
            let lhs = tanh(x, lambda, theta);
            let rhs = 2.0 * logistic(x, 2.0 * lambda, theta) - 1.0;
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
