//! Divergences built on the normalizer ψ.
//!
//! The φ-divergence `D(p‖q)` is the Bregman divergence of ψ read in the chart
//! centered at `p`. It is available in closed form ([`phi_divergence`],
//! [`kappa_divergence`]) and through the chart machinery ([`d_psi`],
//! [`bregman_divergence`]); the two routes are cross-checked in the tests.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{Chart, TangentVector};
use crate::measure::{MeasureSpace, ScalarField, DEFAULT_DENSITY_TOL};
use crate::phi::{kappa_cosh, kappa_sinh, PhiFn, PhiFunction, KAPPA_ZERO};
use crate::solver::SolverOptions;

/// How a divergence value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ClosedForm,
    Bregman,
    /// The densities are not in a common family (a non-positive entry).
    Infinite,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Normalizer values computed along the way.
    pub psi: Vec<f64>,
    pub solver_iterations: Vec<usize>,
}

/// A divergence value with provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    /// Nonnegative; `+∞` (serialized as `"inf"`) on the infinite branch.
    #[serde(serialize_with = "serialize_extended")]
    pub value: f64,
    pub branch: Branch,
    pub diagnostics: Diagnostics,
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

impl DivergenceReport {
    fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            branch: Branch::Infinite,
            diagnostics: Diagnostics::default(),
        }
    }

    fn closed_form(value: f64) -> Self {
        Self {
            value: value.max(0.0),
            branch: Branch::ClosedForm,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.branch == Branch::Infinite
    }
}

/// Gâteaux derivative of ψ at `u` in direction `v`:
/// `E[v·φ'(r)] / E[u0·φ'(r)]` with `r = c + u − ψ(u)·u0`.
pub fn psi_gateaux(chart: &Chart, u: &TangentVector, v: &ScalarField) -> Result<f64> {
    let psi = chart.normalizer(u)?;
    gateaux_at(chart, u, psi, v)
}

fn gateaux_at(chart: &Chart, u: &TangentVector, psi: f64, v: &ScalarField) -> Result<f64> {
    let space = chart.space();
    space.check(v, "v")?;
    let (c, u0, phi) = (chart.origin(), chart.direction(), chart.phi());
    let d = (0..space.len())
        .map(|t| phi.try_deriv(t, c.get(t) + u.field().get(t) - psi * u0.get(t)))
        .collect::<Result<Vec<_>>>()?;
    let num = space.integrate(|t| v.get(t) * d[t]);
    let den = space.integrate(|t| u0.get(t) * d[t]);
    Ok(num / den)
}

/// `B_ψ(v, u) = ψ(v) − ψ(u) − ∂ψ(u)(v − u)`.
///
/// Nonnegative up to rounding; the raw value is returned.
pub fn bregman_psi(chart: &Chart, v: &TangentVector, u: &TangentVector) -> Result<f64> {
    Ok(bregman_parts(chart, v, u)?.0)
}

fn bregman_parts(
    chart: &Chart,
    v: &TangentVector,
    u: &TangentVector,
) -> Result<(f64, Diagnostics)> {
    let nv = chart.normalize(v)?;
    let nu = chart.normalize(u)?;
    let dir = v.field().sub(u.field())?;
    let slope = gateaux_at(chart, u, nu.psi, &dir)?;
    Ok((
        nv.psi - nu.psi - slope,
        Diagnostics {
            psi: vec![nu.psi, nv.psi],
            solver_iterations: vec![nu.iterations, nv.iterations],
        },
    ))
}

/// `D_ψ(u, v) = B_ψ(v, u)`: the divergence between `φ_c(u)` and `φ_c(v)`.
pub fn d_psi(chart: &Chart, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    bregman_psi(chart, v, u)
}

/// [`d_psi`] as a report.
pub fn d_psi_report(
    chart: &Chart,
    u: &TangentVector,
    v: &TangentVector,
) -> Result<DivergenceReport> {
    let (value, diagnostics) = bregman_parts(chart, v, u)?;
    Ok(DivergenceReport {
        value: value.max(0.0),
        branch: Branch::Bregman,
        diagnostics,
    })
}

/// Validates a possibly degenerate density: nonnegative with unit mass.
fn check_mass(space: &MeasureSpace, p: &ScalarField, what: &'static str) -> Result<()> {
    space.check(p, what)?;
    if let Some(t) = p.values().iter().position(|&v| v < 0.0) {
        return Err(Error::NotDensity(format!(
            "{what}({t}) = {} is negative",
            p.get(t)
        )));
    }
    let mass = space.integrate(|t| p.get(t));
    if (mass - 1.0).abs() > DEFAULT_DENSITY_TOL {
        return Err(Error::NotDensity(format!(
            "{what} has total mass {mass}, expected 1"
        )));
    }
    Ok(())
}

fn check_direction(space: &MeasureSpace, u0: &ScalarField) -> Result<()> {
    space.check(u0, "u0")?;
    if let Some(t) = u0.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "u0({t}) = {} is not positive",
            u0.get(t)
        )));
    }
    Ok(())
}

fn strictly_positive(p: &ScalarField) -> bool {
    p.values().iter().all(|&v| v > 0.0)
}

/// Closed-form φ-divergence
/// `E[(φ⁻¹(p) − φ⁻¹(q)) / (φ⁻¹)'(p)] / E[u0 / (φ⁻¹)'(p)]`.
///
/// A non-positive entry in either density yields the infinite branch.
pub fn phi_divergence<P: PhiFn + ?Sized>(
    space: &MeasureSpace,
    phi: &P,
    u0: &ScalarField,
    p: &ScalarField,
    q: &ScalarField,
) -> Result<DivergenceReport> {
    if let Some(n) = phi.dimension() {
        if n != space.len() {
            return Err(Error::DimensionMismatch {
                what: "κ field",
                expected: space.len(),
                found: n,
            });
        }
    }
    check_direction(space, u0)?;
    check_mass(space, p, "p")?;
    check_mass(space, q, "q")?;
    if !strictly_positive(p) || !strictly_positive(q) {
        return Ok(DivergenceReport::infinite());
    }
    let n = space.len();
    let mut num = Vec::with_capacity(n);
    let mut den = Vec::with_capacity(n);
    for t in 0..n {
        let slope = phi.inverse_deriv(t, p.get(t))?;
        num.push((phi.inverse(t, p.get(t))? - phi.inverse(t, q.get(t))?) / slope);
        den.push(u0.get(t) / slope);
    }
    let value = space.integrate(|t| num[t]) / space.integrate(|t| den[t]);
    Ok(DivergenceReport::closed_form(value))
}

/// Deformation parameter for [`kappa_divergence`].
#[derive(Debug, Clone, PartialEq)]
pub enum Kappa {
    Constant(f64),
    PerPoint(Vec<f64>),
}

impl Kappa {
    fn at(&self, t: usize) -> f64 {
        match self {
            Kappa::Constant(k) => *k,
            Kappa::PerPoint(ks) => ks[t],
        }
    }
}

impl From<f64> for Kappa {
    fn from(k: f64) -> Self {
        Kappa::Constant(k)
    }
}

impl From<&PhiFunction> for Kappa {
    fn from(phi: &PhiFunction) -> Self {
        match phi {
            PhiFunction::Exponential => Kappa::Constant(0.0),
            PhiFunction::KappaConst(k) => Kappa::Constant(*k),
            PhiFunction::KappaVariable(ks) => Kappa::PerPoint(ks.clone()),
        }
    }
}

/// κ-divergence
/// `E_p[(1/κ)·((p^κ − p^{−κ}) − (q^κ − q^{−κ}))/(p^κ + p^{−κ})] / E_p[2u0/(p^κ + p^{−κ})]`.
///
/// Points with `|κ| < 1e-12` use the κ → 0 limit `log p − log q` (numerator)
/// and `u0` (denominator); a κ that is zero everywhere gives `KL(p‖q)/E_p[u0]`.
pub fn kappa_divergence(
    space: &MeasureSpace,
    kappa: &Kappa,
    u0: &ScalarField,
    p: &ScalarField,
    q: &ScalarField,
) -> Result<DivergenceReport> {
    let n = space.len();
    match kappa {
        Kappa::PerPoint(ks) if ks.len() != n => {
            return Err(Error::DimensionMismatch {
                what: "κ field",
                expected: n,
                found: ks.len(),
            })
        }
        _ => {}
    }
    if let Some(t) = (0..n).find(|&t| !(kappa.at(t).abs() <= 1.0)) {
        return Err(Error::Domain(format!(
            "κ({t}) = {} is outside [-1, 1]",
            kappa.at(t)
        )));
    }
    check_direction(space, u0)?;
    check_mass(space, p, "p")?;
    check_mass(space, q, "q")?;
    if !strictly_positive(p) || !strictly_positive(q) {
        return Ok(DivergenceReport::infinite());
    }
    let mut num = Vec::with_capacity(n);
    let mut den = Vec::with_capacity(n);
    for t in 0..n {
        let (pt, qt, k) = (p.get(t), q.get(t), kappa.at(t));
        if k.abs() < KAPPA_ZERO {
            num.push(pt * (pt.ln() - qt.ln()));
            den.push(pt * u0.get(t));
        } else {
            // Half of p^κ − p^{−κ}, q^κ − q^{−κ} and p^κ + p^{−κ}.
            let p_diff = kappa_sinh(k, pt);
            let q_diff = kappa_sinh(k, qt);
            let p_sum = kappa_cosh(k, pt);
            num.push(pt * (p_diff - q_diff) / (k * p_sum));
            den.push(pt * u0.get(t) / p_sum);
        }
    }
    let value = space.integrate(|t| num[t]) / space.integrate(|t| den[t]);
    Ok(DivergenceReport::closed_form(value))
}

/// Kullback–Leibler divergence `Σ p·log(p/q)·w`.
///
/// Entries with `p = 0` contribute nothing; `q = 0` where `p > 0` gives `+∞`.
pub fn kl_divergence(space: &MeasureSpace, p: &ScalarField, q: &ScalarField) -> Result<f64> {
    check_mass(space, p, "p")?;
    check_mass(space, q, "q")?;
    let n = space.len();
    if (0..n).any(|t| p.get(t) > 0.0 && q.get(t) == 0.0) {
        return Ok(f64::INFINITY);
    }
    let kl = space.integrate(|t| {
        let pt = p.get(t);
        if pt == 0.0 {
            0.0
        } else {
            pt * (pt / q.get(t)).ln()
        }
    });
    Ok(kl.max(0.0))
}

/// Divergence `D(p‖q)` computed through the chart centered at `p`:
/// `D_ψ(0, v) = ψ(v)` with `v` the coordinates of `q`.
pub fn bregman_divergence(
    space: &MeasureSpace,
    phi: &PhiFunction,
    u0: &ScalarField,
    p: &ScalarField,
    q: &ScalarField,
) -> Result<DivergenceReport> {
    bregman_divergence_with(space, phi, u0, p, q, SolverOptions::default())
}

/// [`bregman_divergence`] with explicit solver tolerances for ψ.
pub fn bregman_divergence_with(
    space: &MeasureSpace,
    phi: &PhiFunction,
    u0: &ScalarField,
    p: &ScalarField,
    q: &ScalarField,
    opts: SolverOptions,
) -> Result<DivergenceReport> {
    check_direction(space, u0)?;
    check_mass(space, p, "p")?;
    check_mass(space, q, "q")?;
    if !strictly_positive(p) || !strictly_positive(q) {
        return Ok(DivergenceReport::infinite());
    }
    let chart = Chart::at_density(space.clone(), phi.clone(), u0.clone(), p)?.with_solver(opts);
    let v = chart.chart_inverse(q)?;
    d_psi_report(&chart, &chart.zero(), &v)
}

/// Moment-generating functional `M_p(u) = E_p[e^u]`.
pub fn moment_gen(space: &MeasureSpace, p: &ScalarField, u: &ScalarField) -> Result<f64> {
    let m = cumulant(space, p, u)?.exp();
    if !m.is_finite() {
        return Err(Error::Overflow {
            point: 0,
            arg: u.sup_norm(),
        });
    }
    Ok(m)
}

/// Cumulant-generating functional `K_p(u) = log E_p[e^u]`, evaluated as a
/// shifted log-sum-exp.
pub fn cumulant(space: &MeasureSpace, p: &ScalarField, u: &ScalarField) -> Result<f64> {
    crate::measure::ensure_density(space, p, DEFAULT_DENSITY_TOL)?;
    space.check(u, "u")?;
    let shift = u.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s = space.integrate(|t| p.get(t) * (u.get(t) - shift).exp());
    Ok(shift + s.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[f64]) -> ScalarField {
        ScalarField::new(v.to_vec()).unwrap()
    }

    fn two() -> MeasureSpace {
        MeasureSpace::counting(2).unwrap()
    }

    fn ones() -> ScalarField {
        ScalarField::constant(2, 1.0).unwrap()
    }

    fn sigma2() -> ScalarField {
        let s = 1.0 / (1.0 + (-2f64).exp());
        f(&[s, 1.0 - s])
    }

    fn exp_chart() -> Chart {
        Chart::with_unit_direction(
            two(),
            PhiFunction::exponential(),
            f(&[0.5f64.ln(), 0.5f64.ln()]),
        )
        .unwrap()
    }

    fn kappa1_chart() -> Chart {
        Chart::with_unit_direction(
            two(),
            PhiFunction::kappa_const(1.0).unwrap(),
            f(&[-0.75, -0.75]),
        )
        .unwrap()
    }

    const LN_COSH_1: f64 = 0.433_780_830_483_027;

    #[test]
    fn ln_cosh_constant() {
        assert!((1f64.cosh().ln() - LN_COSH_1).abs() < 1e-15);
    }

    #[test]
    fn gateaux_fixtures() {
        let e = exp_chart();
        let v = f(&[1.0, -1.0]);
        assert_eq!(psi_gateaux(&e, &e.zero(), &v).unwrap(), 0.0);
        let u = e.tangent(f(&[1.0, -1.0])).unwrap();
        let g = psi_gateaux(&e, &u, &v).unwrap();
        assert!((g - 1f64.tanh()).abs() < 1e-14, "{g}");
        assert!((g - 0.761594).abs() < 1e-6);
    }

    #[test]
    fn gateaux_matches_central_difference() {
        let h = 1e-5;
        for chart in [exp_chart(), kappa1_chart()] {
            let u = chart.center(&f(&[0.3, -0.8])).unwrap();
            let v = chart.center(&f(&[-0.6, 0.2])).unwrap();
            let plus = chart
                .tangent(u.field().axpy(h, v.field()).unwrap())
                .unwrap();
            let minus = chart
                .tangent(u.field().axpy(-h, v.field()).unwrap())
                .unwrap();
            let fd =
                (chart.normalizer(&plus).unwrap() - chart.normalizer(&minus).unwrap()) / (2.0 * h);
            let g = psi_gateaux(&chart, &u, v.field()).unwrap();
            assert!((g - fd).abs() <= 1e-6 * g.abs(), "g={g} fd={fd}");
        }
    }

    #[test]
    fn bregman_fixtures() {
        let e = exp_chart();
        let v = e.tangent(f(&[1.0, -1.0])).unwrap();
        assert_eq!(bregman_psi(&e, &v, &v).unwrap(), 0.0);
        let b = bregman_psi(&e, &v, &e.zero()).unwrap();
        assert!((b - LN_COSH_1).abs() < 1e-14);
        assert_eq!(b, e.normalizer(&v).unwrap());
        assert_eq!(d_psi(&e, &v, &v).unwrap(), 0.0);

        let k = kappa1_chart();
        let v = k.tangent(f(&[1.0875, -1.0875])).unwrap();
        let d = d_psi(&k, &k.zero(), &v).unwrap();
        assert!((d - 0.5625).abs() < 1e-14, "{d}");
        let report = d_psi_report(&k, &k.zero(), &v).unwrap();
        assert_eq!(report.branch, Branch::Bregman);
        assert_eq!(report.diagnostics.psi.len(), 2);
    }

    #[test]
    fn phi_divergence_fixtures() {
        let p = f(&[0.5, 0.5]);
        let exp = PhiFunction::exponential();
        assert_eq!(
            phi_divergence(&two(), &exp, &ones(), &p, &p).unwrap().value,
            0.0
        );
        let r = phi_divergence(&two(), &exp, &ones(), &p, &sigma2()).unwrap();
        assert_eq!(r.branch, Branch::ClosedForm);
        assert!((r.value - LN_COSH_1).abs() < 1e-14);
        let k1 = PhiFunction::kappa_const(1.0).unwrap();
        let r = phi_divergence(&two(), &k1, &ones(), &p, &f(&[0.8, 0.2])).unwrap();
        assert!((r.value - 0.5625).abs() < 1e-14, "{}", r.value);
    }

    #[test]
    fn infinite_branch_on_support_violation() {
        let exp = PhiFunction::exponential();
        let r = phi_divergence(&two(), &exp, &ones(), &f(&[1.0, 0.0]), &f(&[0.0, 1.0])).unwrap();
        assert!(r.is_infinite());
        assert_eq!(serde_json::to_value(&r).unwrap()["value"], "inf");
        let r = kappa_divergence(
            &two(),
            &1.0.into(),
            &ones(),
            &f(&[0.5, 0.5]),
            &f(&[1.0, 0.0]),
        )
        .unwrap();
        assert!(r.is_infinite());
        assert!(phi_divergence(&two(), &exp, &ones(), &f(&[0.9, 0.9]), &f(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn kappa_divergence_fixtures() {
        let p = f(&[0.5, 0.5]);
        assert_eq!(
            kappa_divergence(&two(), &1.0.into(), &ones(), &p, &p)
                .unwrap()
                .value,
            0.0
        );
        let r = kappa_divergence(&two(), &1.0.into(), &ones(), &p, &f(&[0.8, 0.2])).unwrap();
        assert!((r.value - 0.5625).abs() < 1e-14, "{}", r.value);
        let kl = kl_divergence(&two(), &p, &sigma2()).unwrap();
        let small = kappa_divergence(&two(), &1e-6.into(), &ones(), &p, &sigma2()).unwrap();
        assert!((small.value - kl).abs() < 1e-5);
        let zero = kappa_divergence(&two(), &0.0.into(), &ones(), &p, &sigma2()).unwrap();
        assert!((zero.value - kl).abs() < 1e-15);
        assert!(kappa_divergence(&two(), &1.5.into(), &ones(), &p, &p).is_err());
    }

    #[test]
    fn kappa_zero_limit_scales_by_direction_mass() {
        let p = f(&[0.5, 0.5]);
        let u0 = f(&[2.0, 2.0]);
        let kl = kl_divergence(&two(), &p, &sigma2()).unwrap();
        let r = kappa_divergence(&two(), &0.0.into(), &u0, &p, &sigma2()).unwrap();
        assert!((r.value - kl / 2.0).abs() < 1e-15);
    }

    #[test]
    fn kl_fixtures() {
        let p = f(&[0.5, 0.5]);
        assert_eq!(kl_divergence(&two(), &p, &p).unwrap(), 0.0);
        let kl = kl_divergence(&two(), &p, &sigma2()).unwrap();
        assert!((kl - LN_COSH_1).abs() < 1e-15);
        assert_eq!(
            kl_divergence(&two(), &f(&[1.0, 0.0]), &f(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            kl_divergence(&two(), &f(&[1.0, 0.0]), &f(&[0.5, 0.5])).unwrap(),
            2f64.ln()
        );
    }

    #[test]
    fn cumulant_fixtures() {
        let p = f(&[0.5, 0.5]);
        let zero = f(&[0.0, 0.0]);
        assert_eq!(cumulant(&two(), &p, &zero).unwrap(), 0.0);
        assert_eq!(moment_gen(&two(), &p, &zero).unwrap(), 1.0);
        let u = f(&[1.0, -1.0]);
        assert!((moment_gen(&two(), &p, &u).unwrap() - 1f64.cosh()).abs() < 1e-15);
        assert!((cumulant(&two(), &p, &u).unwrap() - LN_COSH_1).abs() < 1e-15);
        assert!(cumulant(&two(), &p, &f(&[1000.0, 0.0]))
            .unwrap()
            .is_finite());
        assert!(matches!(
            moment_gen(&two(), &p, &f(&[1000.0, 0.0])),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn bregman_route_matches_closed_form() {
        let p = f(&[0.3, 0.7]);
        let q = f(&[0.6, 0.4]);
        for phi in [
            PhiFunction::exponential(),
            PhiFunction::kappa_const(0.4).unwrap(),
            PhiFunction::kappa_variable(&f(&[0.9, -0.3])).unwrap(),
        ] {
            let closed = phi_divergence(&two(), &phi, &ones(), &p, &q).unwrap();
            let breg = bregman_divergence(&two(), &phi, &ones(), &p, &q).unwrap();
            assert_eq!(breg.branch, Branch::Bregman);
            assert!(
                (closed.value - breg.value).abs() <= 1e-9 * closed.value,
                "{phi:?}"
            );
        }
    }

    #[test]
    fn divergence_is_asymmetric_without_crashing() {
        let p = f(&[0.1, 0.9]);
        let q = f(&[0.6, 0.4]);
        let k = PhiFunction::kappa_const(0.7).unwrap();
        let a = phi_divergence(&two(), &k, &ones(), &p, &q).unwrap().value;
        let b = phi_divergence(&two(), &k, &ones(), &q, &p).unwrap().value;
        assert!(a > 0.0 && b > 0.0);
    }
}
