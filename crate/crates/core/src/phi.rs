//! φ-functions: the exponential and Kaniadakis κ-deformations.
//!
//! A φ-function is, for every point `t`, a convex injective map `φ(t,·)` from
//! the reals onto `(0,∞)` with `φ(t,-∞)=0` and `φ(t,∞)=∞`. The shipped
//! implementations are the exponential, the κ-exponential with a constant κ,
//! and the variable κ-exponential `φ(t,u) = exp_{κ(t)}(u)`. Other
//! deformations plug in through the [`PhiFn`] trait.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{MeasureSpace, ScalarField};

/// `|κ|` below this is treated as exactly zero (plain `exp`/`ln`).
pub const KAPPA_ZERO: f64 = 1e-12;

/// Smallest admissible `min_t |κ(t)|` for a variable κ-exponential.
pub const KAPPA_VARIABLE_FLOOR: f64 = 1e-6;

/// Far-field probe used for the `φ(-∞)=0`, `φ(∞)=∞` check.
const LIMIT_PROBE: f64 = 1e12;
const LIMIT_RATIO: f64 = 1e6;

/// `asinh(x)` written as `sign(x)·log1p(|x| + x²/(1+√(1+x²)))`, exact in the
/// tails where `x + √(1+x²)` cancels.
fn kappa_log_base(x: f64) -> f64 {
    let ax = x.abs();
    let r = if ax > 1e150 {
        std::f64::consts::LN_2 + ax.ln()
    } else {
        (ax + ax * ax / (1.0 + (1.0 + ax * ax).sqrt())).ln_1p()
    };
    r.copysign(x)
}

/// Kaniadakis κ-exponential `(κu + √(1+κ²u²))^{1/κ}`, or `exp(u)` for κ = 0.
///
/// Overflow saturates to `+∞`; callers that integrate must treat an infinite
/// result as an error (see [`PhiFn::try_eval`]).
pub fn exp_kappa(kappa: f64, u: f64) -> f64 {
    if kappa.abs() < KAPPA_ZERO {
        return u.exp();
    }
    (kappa_log_base(kappa * u) / kappa).exp()
}

/// Kaniadakis κ-logarithm `(y^κ - y^{-κ})/(2κ)`, the inverse of [`exp_kappa`].
pub fn ln_kappa(kappa: f64, y: f64) -> Result<f64> {
    check_positive(y)?;
    if kappa.abs() < KAPPA_ZERO {
        return Ok(y.ln());
    }
    Ok(kappa_sinh(kappa, y) / kappa)
}

/// `ln_κ'(y) = (1/y)·(y^κ + y^{-κ})/2`.
pub fn ln_kappa_deriv(kappa: f64, y: f64) -> Result<f64> {
    check_positive(y)?;
    if kappa.abs() < KAPPA_ZERO {
        return Ok(1.0 / y);
    }
    Ok(kappa_cosh(kappa, y) / y)
}

/// `sinh(κ·ln y) = (y^κ − y^{-κ})/2`.
///
/// The power form is exact whenever `y^{±κ}` are, and loses at most a bit to
/// cancellation once `|κ·ln y| ≥ 1/2`; closer to `y = 1` the `sinh` form keeps
/// full relative accuracy.
pub(crate) fn kappa_sinh(kappa: f64, y: f64) -> f64 {
    let x = kappa * y.ln();
    if x.abs() < 0.5 {
        x.sinh()
    } else {
        0.5 * (y.powf(kappa) - y.powf(-kappa))
    }
}

/// `cosh(κ·ln y) = (y^κ + y^{-κ})/2`.
pub(crate) fn kappa_cosh(kappa: f64, y: f64) -> f64 {
    0.5 * (y.powf(kappa) + y.powf(-kappa))
}

/// `exp_κ'(u) = exp_κ(u)/√(1+κ²u²)`.
pub fn exp_kappa_deriv(kappa: f64, u: f64) -> f64 {
    if kappa.abs() < KAPPA_ZERO {
        return u.exp();
    }
    exp_kappa(kappa, u) / (kappa * u).hypot(1.0)
}

fn check_positive(y: f64) -> Result<()> {
    if y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "the κ-logarithm requires a positive argument, got {y}"
        )))
    }
}

/// Pointwise interface of a φ-function.
pub trait PhiFn: Send + Sync {
    /// `φ(t,u)`; `+∞` signals overflow.
    fn eval(&self, t: usize, u: f64) -> f64;

    /// `∂φ(t,u)/∂u`; `+∞` signals overflow.
    fn deriv(&self, t: usize, u: f64) -> f64;

    /// `φ⁻¹(t,y)` for `y > 0`.
    fn inverse(&self, t: usize, y: f64) -> Result<f64>;

    /// `(φ⁻¹)'(t,y)` for `y > 0`.
    fn inverse_deriv(&self, t: usize, y: f64) -> Result<f64>;

    /// Number of points the function is defined on, if it is tied to a space.
    fn dimension(&self) -> Option<usize> {
        None
    }

    fn try_eval(&self, t: usize, u: f64) -> Result<f64> {
        finite_or_overflow(self.eval(t, u), t, u)
    }

    fn try_deriv(&self, t: usize, u: f64) -> Result<f64> {
        finite_or_overflow(self.deriv(t, u), t, u)
    }
}

fn finite_or_overflow(v: f64, point: usize, arg: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { point, arg })
    }
}

/// The φ-functions shipped with the library.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFunction {
    Exponential,
    KappaConst(f64),
    KappaVariable(Vec<f64>),
}

impl PhiFunction {
    pub fn exponential() -> Self {
        PhiFunction::Exponential
    }

    /// κ-exponential with a constant nonzero `κ ∈ [-1, 1]`.
    pub fn kappa_const(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa.abs() > 1.0 {
            return Err(Error::Domain(format!("κ = {kappa} is outside [-1, 1]")));
        }
        if kappa == 0.0 {
            return Err(Error::Domain(
                "κ = 0 is the exponential; use the exponential φ-function".into(),
            ));
        }
        Ok(PhiFunction::KappaConst(kappa))
    }

    /// Variable κ-exponential `φ(t,u) = exp_{κ(t)}(u)`.
    ///
    /// Requires `|κ(t)| ≤ 1` everywhere and `κ₋ = min_t |κ(t)| > 1e-6`.
    pub fn kappa_variable(kappa: &ScalarField) -> Result<Self> {
        let values = kappa.values();
        if let Some((t, k)) = values.iter().enumerate().find(|(_, k)| k.abs() > 1.0) {
            return Err(Error::Domain(format!("κ({t}) = {k} is outside [-1, 1]")));
        }
        let kappa_min = values.iter().fold(f64::INFINITY, |m, k| m.min(k.abs()));
        if kappa_min <= KAPPA_VARIABLE_FLOOR {
            return Err(Error::Domain(format!(
                "κ₋ = min|κ(t)| = {kappa_min} does not exceed the floor {KAPPA_VARIABLE_FLOOR}"
            )));
        }
        Ok(PhiFunction::KappaVariable(values.to_vec()))
    }

    /// The κ used at point `t` (0 for the exponential).
    pub fn kappa_at(&self, t: usize) -> f64 {
        match self {
            PhiFunction::Exponential => 0.0,
            PhiFunction::KappaConst(k) => *k,
            PhiFunction::KappaVariable(ks) => ks[t],
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, PhiFunction::Exponential)
    }

    /// `κ₋ = min_t |κ(t)|`, or 0 for the exponential.
    pub fn kappa_min(&self) -> f64 {
        match self {
            PhiFunction::Exponential => 0.0,
            PhiFunction::KappaConst(k) => k.abs(),
            PhiFunction::KappaVariable(ks) => ks.iter().fold(f64::INFINITY, |m, k| m.min(k.abs())),
        }
    }
}

impl PhiFn for PhiFunction {
    fn eval(&self, t: usize, u: f64) -> f64 {
        exp_kappa(self.kappa_at(t), u)
    }

    fn deriv(&self, t: usize, u: f64) -> f64 {
        exp_kappa_deriv(self.kappa_at(t), u)
    }

    fn inverse(&self, t: usize, y: f64) -> Result<f64> {
        ln_kappa(self.kappa_at(t), y)
    }

    fn inverse_deriv(&self, t: usize, y: f64) -> Result<f64> {
        ln_kappa_deriv(self.kappa_at(t), y)
    }

    fn dimension(&self) -> Option<usize> {
        match self {
            PhiFunction::KappaVariable(ks) => Some(ks.len()),
            _ => None,
        }
    }
}

/// Property verified by [`validate_phi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// (a1): `φ(t,·)` strictly increasing on the grid.
    Monotone,
    /// (a1): midpoint convexity on the grid.
    Convex,
    /// (a2): positivity, `φ(t,-∞)=0` and `φ(t,∞)=∞`.
    Limits,
    /// (a4): `E[φ(c+λu₀)]` finite for λ ∈ {1,2,4}.
    Integrable,
    /// `φ⁻¹(t, φ(t,u)) = u` on the grid.
    RoundTrip,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Monotone => "(a1) monotonicity test",
            Axiom::Convex => "(a1) convexity test",
            Axiom::Limits => "(a2) limit test",
            Axiom::Integrable => "(a4) integrability test",
            Axiom::RoundTrip => "inverse round-trip test",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    /// `Err(Error::Axiom)` naming every failed check.
    pub fn into_result(self) -> Result<()> {
        let failed: Vec<&AxiomCheck> = self.failures().collect();
        if failed.is_empty() {
            return Ok(());
        }
        Err(Error::Axiom {
            axiom: failed
                .iter()
                .map(|c| c.axiom.label())
                .collect::<Vec<_>>()
                .join(", "),
            detail: failed
                .iter()
                .map(|c| c.detail.as_str())
                .collect::<Vec<_>>()
                .join("; "),
        })
    }
}

/// 81 evenly spaced points on `[-10, 10]`.
pub fn default_grid() -> Vec<f64> {
    (0..=80).map(|i| -10.0 + 0.25 * i as f64).collect()
}

/// Checks the φ-function axioms numerically for every point of `space`.
///
/// Monotonicity and midpoint convexity are tested on `grid`, the limits with
/// far probes at `±1e12`, and integrability along `c + λ·u0`. Structural
/// problems (length mismatches, empty grid) are returned as errors; axiom
/// failures are recorded in the report.
pub fn validate_phi<P: PhiFn + ?Sized>(
    phi: &P,
    space: &MeasureSpace,
    c: &ScalarField,
    u0: &ScalarField,
    grid: &[f64],
) -> Result<ValidationReport> {
    space.check(c, "c")?;
    space.check(u0, "u0")?;
    if let Some(n) = phi.dimension() {
        if n != space.len() {
            return Err(Error::DimensionMismatch {
                what: "κ field",
                expected: space.len(),
                found: n,
            });
        }
    }
    let mut grid: Vec<f64> = grid.iter().copied().filter(|g| g.is_finite()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.len() < 3 {
        return Err(Error::Domain(
            "validation grid needs at least 3 distinct points".into(),
        ));
    }

    let n = space.len();
    let mut monotone = Ok(());
    let mut convex = Ok(());
    let mut limits = Ok(());
    let mut round_trip = Ok(());

    for t in 0..n {
        let vals: Vec<f64> = grid.iter().map(|&u| phi.eval(t, u)).collect();

        if monotone.is_ok() {
            if let Some(i) = (1..vals.len()).find(|&i| !(vals[i] > vals[i - 1])) {
                monotone = Err(format!(
                    "φ({t},{}) = {} is not above φ({t},{}) = {}",
                    grid[i],
                    vals[i],
                    grid[i - 1],
                    vals[i - 1]
                ));
            }
        }

        if convex.is_ok() {
            'pairs: for step in 1..=2 {
                for i in 0..vals.len().saturating_sub(step) {
                    let (a, b) = (grid[i], grid[i + step]);
                    let mid = phi.eval(t, 0.5 * (a + b));
                    let chord = 0.5 * (vals[i] + vals[i + step]);
                    if mid > chord * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                        convex = Err(format!(
                            "φ({t},·) at midpoint of [{a}, {b}] is {mid}, above the chord {chord}"
                        ));
                        break 'pairs;
                    }
                }
            }
        }

        if limits.is_ok() {
            if let Some(i) = vals.iter().position(|&v| !(v > 0.0)) {
                limits = Err(format!("φ({t},{}) = {} is not positive", grid[i], vals[i]));
            } else {
                let low = phi.eval(t, -LIMIT_PROBE);
                let high = phi.eval(t, LIMIT_PROBE);
                let (lo_ref, hi_ref) = (vals[0], vals[vals.len() - 1]);
                if !(low >= 0.0 && low < lo_ref / LIMIT_RATIO) {
                    limits = Err(format!(
                        "φ({t},-{LIMIT_PROBE:e}) = {low} does not approach 0"
                    ));
                } else if !(high > hi_ref * LIMIT_RATIO) {
                    limits = Err(format!(
                        "φ({t},{LIMIT_PROBE:e}) = {high} does not grow without bound"
                    ));
                }
            }
        }

        if round_trip.is_ok() {
            for (&u, &y) in grid.iter().zip(&vals) {
                let back = if y > 0.0 && y.is_finite() {
                    phi.inverse(t, y).ok()
                } else {
                    None
                };
                match back {
                    Some(b) if (b - u).abs() <= 1e-10 * u.abs().max(1.0) => {}
                    other => {
                        round_trip = Err(format!("φ⁻¹({t}, φ({t},{u})) = {other:?}, expected {u}"));
                        break;
                    }
                }
            }
        }
    }

    let mut integrable = Ok(());
    for lambda in [1.0, 2.0, 4.0] {
        let e = space.integrate(|t| phi.eval(t, c.get(t) + lambda * u0.get(t)));
        if !e.is_finite() {
            integrable = Err(format!("E[φ(c + {lambda}·u0)] is not finite"));
            break;
        }
    }
    if let Some(t) = u0.values().iter().position(|&v| !(v > 0.0)) {
        integrable = Err(format!("u0({t}) = {} is not positive", u0.get(t)));
    }

    let mk = |axiom, r: std::result::Result<(), String>, ok: &str| AxiomCheck {
        axiom,
        passed: r.is_ok(),
        detail: r.err().unwrap_or_else(|| ok.to_string()),
    };
    Ok(ValidationReport {
        checks: vec![
            mk(Axiom::Monotone, monotone, "strictly increasing on the grid"),
            mk(Axiom::Convex, convex, "midpoint convex on the grid"),
            mk(
                Axiom::Limits,
                limits,
                "positive, vanishing at -∞ and unbounded at +∞",
            ),
            mk(
                Axiom::Integrable,
                integrable,
                "E[φ(c+λu0)] finite for λ = 1, 2, 4",
            ),
            mk(Axiom::RoundTrip, round_trip, "inverse reproduces the grid"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const KAPPAS: [f64; 6] = [-1.0, -0.5, -1e-3, 1e-3, 0.5, 1.0];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn log_grid() -> Vec<f64> {
        // 50 log-spaced magnitudes in [1e-3, 30], mirrored.
        let pos: Vec<f64> = (0..50)
            .map(|i| 10f64.powf(-3.0 + (30f64.log10() + 3.0) * i as f64 / 49.0))
            .collect();
        pos.iter().map(|x| -x).chain(pos.iter().copied()).collect()
    }

    #[test]
    fn exp_kappa_fixtures() {
        for k in KAPPAS {
            assert_eq!(exp_kappa(k, 0.0), 1.0);
        }
        assert!(rel(exp_kappa(1.0, 0.75), 2.0) < 1e-15);
        assert!(rel(exp_kappa(0.5, 1.5), 4.0) < 1e-15);
        assert_eq!(exp_kappa(0.0, 1.3), 1.3f64.exp());
        for k in KAPPAS {
            for u in [-7.0, -0.3, 0.2, 5.0] {
                assert!((exp_kappa(k, u) * exp_kappa(k, -u) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn exp_kappa_overflow_saturates() {
        assert_eq!(exp_kappa(1e-3, 1e6), f64::INFINITY);
        assert_eq!(exp_kappa(0.0, 1e4), f64::INFINITY);
        let phi = PhiFunction::kappa_const(1e-3).unwrap();
        assert!(matches!(phi.try_eval(0, 1e6), Err(Error::Overflow { .. })));
        // Large arguments must not wrap or produce NaN.
        assert!(exp_kappa(1.0, 1e200).is_finite());
        assert!(exp_kappa(1.0, -1e200) > 0.0);
    }

    #[test]
    fn ln_kappa_fixtures() {
        for k in KAPPAS {
            assert_eq!(ln_kappa(k, 1.0).unwrap(), 0.0);
        }
        assert!(rel(ln_kappa(0.5, 4.0).unwrap(), 1.5) < 1e-15);
        assert!(rel(ln_kappa(1.0, 0.2).unwrap(), -2.4) < 1e-15);
        assert!(ln_kappa(1.0, 0.0).is_err());
        assert!(ln_kappa(1.0, -1.0).unwrap_err().is_domain());
        assert!(ln_kappa(0.5, f64::NAN).is_err());
    }

    #[test]
    fn derivative_fixtures() {
        assert_eq!(ln_kappa_deriv(0.0, 4.0).unwrap(), 0.25);
        assert!(rel(ln_kappa_deriv(1.0, 0.5).unwrap(), 2.5) < 1e-15);
        assert_eq!(ln_kappa_deriv(1.0, 1.0).unwrap(), 1.0);
        assert!(ln_kappa_deriv(1.0, 0.0).is_err());
        for k in KAPPAS {
            assert_eq!(exp_kappa_deriv(k, 0.0), 1.0);
        }
        assert!(rel(exp_kappa_deriv(1.0, -0.75), 0.4) < 1e-15);
        assert_eq!(exp_kappa_deriv(0.0, 2.0), 2f64.exp());
    }

    #[test]
    fn derivatives_are_reciprocal() {
        for k in KAPPAS {
            for u in [-10.0, -1.0, 0.3, 4.0, 10.0] {
                let d = exp_kappa_deriv(k, u);
                let inv = 1.0 / ln_kappa_deriv(k, exp_kappa(k, u)).unwrap();
                assert!(rel(d, inv) < 1e-12, "κ={k} u={u}");
            }
        }
    }

    #[test]
    fn round_trip_on_log_grid() {
        for k in KAPPAS {
            for u in log_grid() {
                let back = ln_kappa(k, exp_kappa(k, u)).unwrap();
                assert!(
                    (back - u).abs() <= 1e-9 * u.abs().max(1.0),
                    "κ={k} u={u} back={back}"
                );
            }
        }
    }

    #[test]
    fn small_kappa_is_continuous() {
        for i in 0..=80 {
            let u = -20.0 + 0.5 * i as f64;
            assert!((exp_kappa(1e-8, u) - u.exp()).abs() <= 1e-6 * u.exp());
        }
    }

    #[test]
    fn finite_difference_derivative() {
        let h = 1e-5;
        for k in KAPPAS {
            for i in 0..=40 {
                let u = -10.0 + 0.5 * i as f64;
                let fd = (exp_kappa(k, u + h) - exp_kappa(k, u - h)) / (2.0 * h);
                assert!(rel(fd, exp_kappa_deriv(k, u)) < 1e-6, "κ={k} u={u}");
            }
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(PhiFunction::kappa_const(1.5).is_err());
        assert!(PhiFunction::kappa_const(0.0).is_err());
        assert!(PhiFunction::kappa_const(-1.0).is_ok());
        let zero = ScalarField::new(vec![0.5, 0.0]).unwrap();
        let err = PhiFunction::kappa_variable(&zero).unwrap_err();
        assert!(err.is_domain());
        assert!(err.to_string().contains("floor"));
        let tiny = ScalarField::new(vec![0.5, 1e-6]).unwrap();
        assert!(PhiFunction::kappa_variable(&tiny).is_err());
        let ok = ScalarField::new(vec![0.5, -0.2]).unwrap();
        let phi = PhiFunction::kappa_variable(&ok).unwrap();
        assert_eq!(phi.kappa_at(1), -0.2);
        assert_eq!(phi.kappa_min(), 0.2);
        assert_eq!(phi.dimension(), Some(2));
    }

    fn unit_setup() -> (MeasureSpace, ScalarField, ScalarField) {
        let space = MeasureSpace::counting(2).unwrap();
        let c = ScalarField::constant(2, 0.5f64.ln()).unwrap();
        let u0 = ScalarField::constant(2, 1.0).unwrap();
        (space, c, u0)
    }

    #[test]
    fn shipped_phi_functions_validate() {
        let (space, c, u0) = unit_setup();
        let kappa = ScalarField::new(vec![0.3, -0.9]).unwrap();
        for phi in [
            PhiFunction::exponential(),
            PhiFunction::kappa_const(1.0).unwrap(),
            PhiFunction::kappa_const(-0.25).unwrap(),
            PhiFunction::kappa_variable(&kappa).unwrap(),
        ] {
            let report = validate_phi(&phi, &space, &c, &u0, &default_grid()).unwrap();
            assert!(report.passed(), "{phi:?}: {report:?}");
        }
    }

    struct Sigmoid;

    impl PhiFn for Sigmoid {
        fn eval(&self, _: usize, u: f64) -> f64 {
            1.0 / (1.0 + (-u).exp())
        }
        fn deriv(&self, t: usize, u: f64) -> f64 {
            let s = self.eval(t, u);
            s * (1.0 - s)
        }
        fn inverse(&self, _: usize, y: f64) -> Result<f64> {
            Ok((y / (1.0 - y)).ln())
        }
        fn inverse_deriv(&self, _: usize, y: f64) -> Result<f64> {
            Ok(1.0 / (y * (1.0 - y)))
        }
    }

    #[test]
    fn bounded_sigmoid_fails_limit_test() {
        let (space, c, u0) = unit_setup();
        let report = validate_phi(&Sigmoid, &space, &c, &u0, &default_grid()).unwrap();
        assert!(!report.passed());
        assert!(!report.check(Axiom::Limits).unwrap().passed);
        let err = report.into_result().unwrap_err();
        assert!(err.to_string().contains("(a2) limit test"), "{err}");
    }

    #[test]
    fn non_convex_phi_fails_convexity() {
        struct Cubeish;
        impl PhiFn for Cubeish {
            fn eval(&self, _: usize, u: f64) -> f64 {
                // increasing, positive, concave on u > 0
                if u <= 0.0 {
                    u.exp()
                } else {
                    1.0 + u.sqrt() * 3.0 + u.powi(3) * 1e-6
                }
            }
            fn deriv(&self, _: usize, _: f64) -> f64 {
                1.0
            }
            fn inverse(&self, _: usize, _: f64) -> Result<f64> {
                Ok(0.0)
            }
            fn inverse_deriv(&self, _: usize, _: f64) -> Result<f64> {
                Ok(1.0)
            }
        }
        let (space, c, u0) = unit_setup();
        let report = validate_phi(&Cubeish, &space, &c, &u0, &default_grid()).unwrap();
        assert!(!report.check(Axiom::Convex).unwrap().passed);
    }

    #[test]
    fn integrability_failure_reported() {
        let (space, c, _) = unit_setup();
        let huge = ScalarField::constant(2, 300.0).unwrap();
        let report = validate_phi(
            &PhiFunction::exponential(),
            &space,
            &c,
            &huge,
            &default_grid(),
        )
        .unwrap();
        assert!(!report.check(Axiom::Integrable).unwrap().passed);
    }

    #[test]
    fn variable_kappa_dimension_checked() {
        let (space, c, u0) = unit_setup();
        let kappa = ScalarField::new(vec![0.3, 0.4, 0.5]).unwrap();
        let phi = PhiFunction::kappa_variable(&kappa).unwrap();
        assert!(validate_phi(&phi, &space, &c, &u0, &default_grid()).is_err());
    }
}
