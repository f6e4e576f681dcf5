//! φ-family charts.
//!
//! A [`Chart`] fixes an origin `c` with `φ(c)` a density and a positive
//! direction `u₀`. Coordinates are fields `u` with `E[u·φ'(c)] = 0`
//! ([`TangentVector`]); the chart maps them to densities
//! `φ(c + u − ψ(u)·u₀)`, where the normalizer `ψ(u)` is the unique scalar
//! making the result integrate to one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{ensure_density, MeasureSpace, ScalarField, DEFAULT_DENSITY_TOL};
use crate::orlicz::MusielakOrliczFunction;
use crate::phi::{default_grid, validate_phi, PhiFn, PhiFunction};
use crate::solver::{bisect_decreasing, SolverOptions};

/// Bracket expansion for ψ stops once the endpoint exceeds this magnitude.
const PSI_BRACKET_LIMIT: f64 = 1_099_511_627_776.0; // 2^40

/// Relative centering tolerance for [`TangentVector`] membership.
pub const CENTERING_TOL: f64 = 1e-10;

/// Coordinate system of one φ-family.
#[derive(Debug, Clone)]
pub struct Chart {
    space: MeasureSpace,
    phi: PhiFunction,
    c: ScalarField,
    u0: ScalarField,
    deriv_at_c: ScalarField,
    u0_mass: f64,
    opts: SolverOptions,
}

/// A centered coordinate vector: `E[u·φ'(c)] = 0` for the chart it was made on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentVector {
    values: ScalarField,
}

impl TangentVector {
    pub fn field(&self) -> &ScalarField {
        &self.values
    }

    pub fn values(&self) -> &[f64] {
        self.values.values()
    }

    pub fn into_field(self) -> ScalarField {
        self.values
    }
}

/// ψ together with the solver effort spent on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    pub psi: f64,
    pub iterations: usize,
}

impl Chart {
    /// Builds a chart, checking the φ axioms, `|E[φ(c)] − 1| ≤ 1e-10` and `u0 > 0`.
    pub fn new(
        space: MeasureSpace,
        phi: PhiFunction,
        c: ScalarField,
        u0: ScalarField,
    ) -> Result<Self> {
        space.check(&c, "c")?;
        space.check(&u0, "u0")?;
        if let Some(t) = u0.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::Domain(format!(
                "u0({t}) = {} is not positive",
                u0.get(t)
            )));
        }
        validate_phi(&phi, &space, &c, &u0, &default_grid())?.into_result()?;

        let mass = space.integrate(|t| phi.eval(t, c.get(t)));
        if !((mass - 1.0).abs() <= DEFAULT_DENSITY_TOL) {
            return Err(Error::NotDensity(format!(
                "E[φ(c)] = {mass}, expected 1 within {DEFAULT_DENSITY_TOL}"
            )));
        }
        let deriv_at_c = ScalarField::from_fn(space.len(), |t| phi.deriv(t, c.get(t)))?;
        let u0_mass = space.integrate(|t| u0.get(t) * deriv_at_c.get(t));
        if !(u0_mass > 0.0 && u0_mass.is_finite()) {
            return Err(Error::Domain(format!(
                "E[u0·φ'(c)] = {u0_mass} is not positive"
            )));
        }
        Ok(Self {
            space,
            phi,
            c,
            u0,
            deriv_at_c,
            u0_mass,
            opts: SolverOptions::default(),
        })
    }

    /// Chart with the default direction `u0 ≡ 1`.
    pub fn with_unit_direction(
        space: MeasureSpace,
        phi: PhiFunction,
        c: ScalarField,
    ) -> Result<Self> {
        let u0 = ScalarField::constant(space.len(), 1.0)?;
        Self::new(space, phi, c, u0)
    }

    /// Chart centered at the density `p`, i.e. with origin `c = φ⁻¹(p)`.
    pub fn at_density(
        space: MeasureSpace,
        phi: PhiFunction,
        u0: ScalarField,
        p: &ScalarField,
    ) -> Result<Self> {
        if let Some(n) = phi.dimension() {
            if n != space.len() {
                return Err(Error::DimensionMismatch {
                    what: "κ field",
                    expected: space.len(),
                    found: n,
                });
            }
        }
        ensure_density(&space, p, DEFAULT_DENSITY_TOL)?;
        let c = (0..space.len())
            .map(|t| phi.inverse(t, p.get(t)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, phi, ScalarField::new(c)?, u0)
    }

    pub fn with_solver(mut self, opts: SolverOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    pub fn origin(&self) -> &ScalarField {
        &self.c
    }

    pub fn direction(&self) -> &ScalarField {
        &self.u0
    }

    /// Cached `φ'(t, c(t))`.
    pub fn deriv_at_origin(&self) -> &ScalarField {
        &self.deriv_at_c
    }

    /// Cached `E[u0·φ'(c)]`.
    pub fn direction_mass(&self) -> f64 {
        self.u0_mass
    }

    pub fn solver_options(&self) -> SolverOptions {
        self.opts
    }

    /// The density `φ(c)` at the chart origin.
    pub fn origin_density(&self) -> Result<ScalarField> {
        self.phi_of(|t| self.c.get(t))
    }

    /// Musielak–Orlicz function `φ(c+·) − φ(c)` of this chart.
    pub fn orlicz(&self) -> Result<MusielakOrliczFunction> {
        Ok(
            MusielakOrliczFunction::new(self.space.clone(), self.phi.clone(), self.c.clone())?
                .with_solver(self.opts),
        )
    }

    /// `E[v·φ'(c)]`.
    pub fn centering_residual(&self, v: &ScalarField) -> Result<f64> {
        self.space.check(v, "v")?;
        Ok(self.space.integrate(|t| v.get(t) * self.deriv_at_c.get(t)))
    }

    /// Projects `v` onto the centered subspace along `u0`.
    pub fn center(&self, v: &ScalarField) -> Result<TangentVector> {
        let ratio = self.centering_residual(v)? / self.u0_mass;
        Ok(TangentVector {
            values: v.axpy(-ratio, &self.u0)?,
        })
    }

    /// Wraps an already centered field; fails if `E[u·φ'(c)]` is not zero
    /// within `1e-10·(1 + ‖u‖∞)`.
    pub fn tangent(&self, u: ScalarField) -> Result<TangentVector> {
        let r = self.centering_residual(&u)?;
        if r.abs() > CENTERING_TOL * (1.0 + u.sup_norm()) {
            return Err(Error::Domain(format!(
                "field is not centered for this chart: E[u·φ'(c)] = {r}"
            )));
        }
        Ok(TangentVector { values: u })
    }

    pub fn zero(&self) -> TangentVector {
        TangentVector {
            values: ScalarField::zeros(self.space.len()),
        }
    }

    fn check_tangent(&self, u: &TangentVector) -> Result<()> {
        self.space.check(&u.values, "tangent vector")
    }

    /// The normalizer `ψ(u)`.
    pub fn normalizer(&self, u: &TangentVector) -> Result<f64> {
        Ok(self.normalize(u)?.psi)
    }

    /// `ψ(u)` with solver diagnostics.
    pub fn normalize(&self, u: &TangentVector) -> Result<Normalization> {
        self.check_tangent(u)?;
        self.solve_psi(&u.values)
    }

    /// Root of `J(ψ) = E[φ(c + u − ψ·u0)] = 1` for an arbitrary field `u`.
    ///
    /// `J` is strictly decreasing. The bracket starts at `[0, 1]` and its
    /// failing end is doubled until the root is enclosed; bisection then runs
    /// to `|J − 1| ≤ tol` and a single Newton step removes the residual.
    pub fn solve_psi(&self, u: &ScalarField) -> Result<Normalization> {
        self.space.check(u, "u")?;
        if u.is_zero() {
            return Ok(Normalization {
                psi: 0.0,
                iterations: 0,
            });
        }
        let g = |psi: f64| {
            self.space.integrate(|t| {
                self.phi
                    .eval(t, self.c.get(t) + u.get(t) - psi * self.u0.get(t))
            }) - 1.0
        };

        let mut evals = 0;
        let (mut lo, mut hi) = (0.0, 1.0);
        let g0 = g(lo);
        evals += 1;
        if g0 >= 0.0 {
            while g(hi) > 0.0 {
                evals += 1;
                lo = hi;
                hi *= 2.0;
                if hi > PSI_BRACKET_LIMIT {
                    return Err(Error::Solver {
                        what: "normalizer bracket",
                        iterations: evals,
                        lo,
                        hi,
                    });
                }
            }
        } else {
            hi = 0.0;
            lo = -1.0;
            while g(lo) < 0.0 {
                evals += 1;
                hi = lo;
                lo *= 2.0;
                if lo < -PSI_BRACKET_LIMIT {
                    return Err(Error::Solver {
                        what: "normalizer bracket",
                        iterations: evals,
                        lo,
                        hi,
                    });
                }
            }
        }
        let root = bisect_decreasing(g, lo, hi, self.opts, "normalizer")?;

        // Newton polish: J'(ψ) = −E[u0·φ'(c + u − ψ·u0)].
        let slope = self.space.integrate(|t| {
            self.u0.get(t)
                * self
                    .phi
                    .deriv(t, self.c.get(t) + u.get(t) - root.x * self.u0.get(t))
        });
        let mut psi = root.x;
        if slope.is_finite() && slope > 0.0 {
            let polished = root.x + root.residual / slope;
            if polished >= lo && polished <= hi && g(polished).abs() <= root.residual.abs() {
                psi = polished;
            }
        }
        Ok(Normalization {
            psi,
            iterations: evals + root.iterations,
        })
    }

    fn phi_of<F: Fn(usize) -> f64>(&self, arg: F) -> Result<ScalarField> {
        let vals = (0..self.space.len())
            .map(|t| self.phi.try_eval(t, arg(t)))
            .collect::<Result<Vec<_>>>()?;
        ScalarField::new(vals)
    }

    /// `φ_c(u) = φ(c + u − ψ(u)·u0)`.
    pub fn parametrize(&self, u: &TangentVector) -> Result<ScalarField> {
        let psi = self.normalizer(u)?;
        self.density_at(u, psi)
    }

    /// `φ(c + u − ψ·u0)` for a given ψ.
    pub(crate) fn density_at(&self, u: &TangentVector, psi: f64) -> Result<ScalarField> {
        self.phi_of(|t| self.c.get(t) + u.values.get(t) - psi * self.u0.get(t))
    }

    /// Coordinates of the density `q`: `center(φ⁻¹(q) − c)`.
    ///
    /// Any non-positive entry puts `q` outside the family.
    pub fn chart_inverse(&self, q: &ScalarField) -> Result<TangentVector> {
        self.space.check(q, "q")?;
        if let Some(t) = q.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::OutsideFamily(format!(
                "q({t}) = {} is not positive",
                q.get(t)
            )));
        }
        ensure_density(&self.space, q, DEFAULT_DENSITY_TOL)?;
        let raw = (0..self.space.len())
            .map(|t| Ok(self.phi.inverse(t, q.get(t))? - self.c.get(t)))
            .collect::<Result<Vec<_>>>()?;
        self.center(&ScalarField::new(raw)?)
    }

    /// Chart anchored at `φ_c(u)`, i.e. with origin `c + u − ψ(u)·u0`.
    pub fn reanchor(&self, u: &TangentVector) -> Result<Chart> {
        let psi = self.normalizer(u)?;
        let c = self.c.add(&u.values)?.axpy(-psi, &self.u0)?;
        Ok(
            Chart::new(self.space.clone(), self.phi.clone(), c, self.u0.clone())?
                .with_solver(self.opts),
        )
    }

    fn compatible(&self, other: &Chart) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Incompatible(
                "charts live on different spaces".into(),
            ));
        }
        if self.phi != other.phi {
            return Err(Error::Incompatible(
                "charts use different φ-functions".into(),
            ));
        }
        if self.u0 != other.u0 {
            return Err(Error::Incompatible("charts use different u0".into()));
        }
        Ok(())
    }
}

/// Transition map `φ_{c₂}⁻¹ ∘ φ_{c₁}`:
/// `w ↦ c₁ − c₂ + w − (E[(c₁ − c₂ + w)·φ'(c₂)]/E[u0·φ'(c₂)])·u0`.
pub fn transition(from: &Chart, to: &Chart, w: &TangentVector) -> Result<TangentVector> {
    from.compatible(to)?;
    from.check_tangent(w)?;
    if from.c == to.c {
        return Ok(w.clone());
    }
    let shifted = from.c.sub(&to.c)?.add(&w.values)?;
    to.center(&shifted)
}
