//! Musielak–Orlicz modular and norms for `Φ(t,u) = φ(t,c(t)+u) − φ(t,c(t))`.

use crate::error::{Error, Result};
use crate::measure::{MeasureSpace, ScalarField};
use crate::phi::{PhiFn, PhiFunction};
use crate::solver::{bisect_decreasing, golden_min, SolverOptions};

/// Doubling limit when searching for brackets.
const MAX_EXPANSIONS: usize = 1100;
/// Beyond this the conjugate supremum is reported as `+∞`.
const CONJUGATE_U_CAP: f64 = 1_152_921_504_606_846_976.0; // 2^60

/// The Musielak–Orlicz function induced by a φ-function and an origin `c`.
#[derive(Debug, Clone)]
pub struct MusielakOrliczFunction {
    space: MeasureSpace,
    phi: PhiFunction,
    c: ScalarField,
    base: Vec<f64>,
    opts: SolverOptions,
}

impl MusielakOrliczFunction {
    /// Requires `E[φ(c)]` finite.
    pub fn new(space: MeasureSpace, phi: PhiFunction, c: ScalarField) -> Result<Self> {
        space.check(&c, "c")?;
        if let Some(n) = phi.dimension() {
            if n != space.len() {
                return Err(Error::DimensionMismatch {
                    what: "κ field",
                    expected: space.len(),
                    found: n,
                });
            }
        }
        let base = (0..space.len())
            .map(|t| phi.try_eval(t, c.get(t)))
            .collect::<Result<Vec<_>>>()?;
        if !space.integrate(|t| base[t]).is_finite() {
            return Err(Error::Domain("E[φ(c)] is not finite".into()));
        }
        Ok(Self {
            space,
            phi,
            c,
            base,
            opts: SolverOptions::default(),
        })
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

    /// `Φ(t,u)` for `u ≥ 0`; `+∞` on overflow.
    pub fn eval(&self, t: usize, u: f64) -> f64 {
        self.phi.eval(t, self.c.get(t) + u) - self.base[t]
    }

    fn modular_scaled(&self, scale: f64, u: &ScalarField) -> f64 {
        self.space
            .integrate(|t| self.eval(t, (scale * u.get(t)).abs()))
    }

    /// `I_Φ(u) = Σ_t Φ(t,|u(t)|)·w(t)`.
    pub fn modular(&self, u: &ScalarField) -> Result<f64> {
        self.space.check(u, "u")?;
        let mut terms = Vec::with_capacity(u.len());
        for t in 0..u.len() {
            let a = u.get(t).abs();
            let v = self.phi.try_eval(t, self.c.get(t) + a)? - self.base[t];
            terms.push(v);
        }
        Ok(self.space.integrate(|t| terms[t]))
    }

    /// Luxemburg norm `inf{λ > 0 : I_Φ(u/λ) ≤ 1}`.
    pub fn luxemburg_norm(&self, u: &ScalarField) -> Result<f64> {
        self.space.check(u, "u")?;
        if u.is_zero() {
            return Ok(0.0);
        }
        let g = |lambda: f64| self.modular_scaled(1.0 / lambda, u) - 1.0;

        let mut hi = u.sup_norm();
        let mut n = 0;
        while g(hi) > 0.0 {
            hi *= 2.0;
            n += 1;
            if n > MAX_EXPANSIONS || !hi.is_finite() {
                return Err(Error::Solver {
                    what: "Luxemburg norm bracket",
                    iterations: n,
                    lo: hi / 2.0,
                    hi,
                });
            }
        }
        let mut lo = hi / 2.0;
        while g(lo) <= 0.0 {
            hi = lo;
            lo /= 2.0;
            n += 1;
            if n > MAX_EXPANSIONS || lo == 0.0 {
                return Err(Error::Solver {
                    what: "Luxemburg norm bracket",
                    iterations: n,
                    lo,
                    hi,
                });
            }
        }
        Ok(bisect_decreasing(g, lo, hi, self.opts, "Luxemburg norm")?.x)
    }

    /// Fenchel conjugate `Φ*(t,v) = sup_{u ≥ 0} (uv − Φ(t,u))`.
    ///
    /// Closed form for the exponential; otherwise golden-section search on a
    /// doubling bracket. Returns `+∞` if no maximizer is found below `2^60`.
    pub fn fenchel_conjugate(&self, t: usize, v: f64) -> Result<f64> {
        if t >= self.space.len() {
            return Err(Error::DimensionMismatch {
                what: "point index",
                expected: self.space.len(),
                found: t,
            });
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "conjugate argument must be finite and nonnegative, got {v}"
            )));
        }
        let slope0 = self.phi.deriv(t, self.c.get(t));
        if v <= slope0 {
            return Ok(0.0);
        }
        if self.phi.is_exponential() {
            let wc = self.base[t];
            return Ok((v * (v / wc).ln() - v + wc).max(0.0));
        }
        let objective = |u: f64| u * v - self.eval(t, u);
        let mut hi = 1.0;
        while objective(2.0 * hi) >= objective(hi) {
            hi *= 2.0;
            if hi > CONJUGATE_U_CAP {
                return Ok(f64::INFINITY);
            }
        }
        let upper = 2.0 * hi;
        let (_, neg) = golden_min(
            |u| -objective(u),
            0.0,
            upper,
            1e-12 * upper.max(1.0),
            self.opts.max_iter,
            "Fenchel conjugate",
        )?;
        Ok((-neg).max(0.0))
    }

    /// `I_{Φ*}(v) = Σ_t Φ*(t,|v(t)|)·w(t)`.
    pub fn conjugate_modular(&self, v: &ScalarField) -> Result<f64> {
        self.space.check(v, "v")?;
        let terms = (0..v.len())
            .map(|t| self.fenchel_conjugate(t, v.get(t).abs()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.space.integrate(|t| terms[t]))
    }

    /// Orlicz norm via the Amemiya form `inf_{k>0} (1 + I_Φ(k·u))/k`.
    pub fn orlicz_norm(&self, u: &ScalarField) -> Result<f64> {
        let lux = self.luxemburg_norm(u)?;
        if lux == 0.0 {
            return Ok(0.0);
        }
        // Minimize over s = ln k; the objective is unimodal in k.
        let g = |s: f64| {
            let k = s.exp();
            (1.0 + self.modular_scaled(k, u)) / k
        };
        let step = 1.0;
        let mut mid = -lux.ln();
        let mut g_mid = g(mid);
        let mut left = mid - step;
        let mut right = mid + step;
        let mut n = 0;
        loop {
            let g_left = g(left);
            let g_right = g(right);
            if g_left >= g_mid && g_right >= g_mid {
                break;
            }
            n += 1;
            if n > MAX_EXPANSIONS {
                return Err(Error::Solver {
                    what: "Orlicz norm bracket",
                    iterations: n,
                    lo: left,
                    hi: right,
                });
            }
            let width = right - left;
            if g_left < g_mid {
                right = mid;
                mid = left;
                g_mid = g_left;
                left = mid - width;
            } else {
                left = mid;
                mid = right;
                g_mid = g_right;
                right = mid + width;
            }
        }
        let (_, value) = golden_min(g, left, right, 1e-10, self.opts.max_iter, "Orlicz norm")?;
        Ok(value.min(g_mid))
    }
}
