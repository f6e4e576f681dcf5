//! Finite measure spaces and integration against them.
//!
//! A [`MeasureSpace`] is a finite list of atoms with strictly positive
//! weights. Integrals are weighted sums taken in ascending point order with
//! compensated (Neumaier) accumulation, so a given input always produces the
//! same bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|E[p] - 1|` when testing whether a field is a density.
pub const DEFAULT_DENSITY_TOL: f64 = 1e-10;

/// Finite set of weighted atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct MeasureSpace {
    point_ids: Vec<String>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    points: Vec<serde_json::Value>,
    weights: Vec<f64>,
}

impl TryFrom<RawSpace> for MeasureSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        let ids = raw
            .points
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            })
            .collect();
        MeasureSpace::new(ids, raw.weights)
    }
}

impl From<MeasureSpace> for RawSpace {
    fn from(space: MeasureSpace) -> Self {
        RawSpace {
            points: space
                .point_ids
                .into_iter()
                .map(serde_json::Value::String)
                .collect(),
            weights: space.weights,
        }
    }
}

impl MeasureSpace {
    pub fn new(point_ids: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if point_ids.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                what: "weights",
                expected: point_ids.len(),
                found: weights.len(),
            });
        }
        if weights.is_empty() {
            return Err(Error::InvalidSpace("no points".into()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "weight {w} at point {i} is not finite and positive"
                )));
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(point_ids.len());
        for id in &point_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate point id {id:?}")));
            }
        }
        Ok(Self { point_ids, weights })
    }

    /// Space with the given weights and point ids `"0"`, `"1"`, ...
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let ids = (0..weights.len()).map(|i| i.to_string()).collect();
        Self::new(ids, weights)
    }

    /// Counting measure on `n` points.
    pub fn counting(n: usize) -> Result<Self> {
        Self::from_weights(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point_ids(&self) -> &[String] {
        &self.point_ids
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// Returns an error unless `f` has one value per point.
    pub fn check(&self, f: &ScalarField, what: &'static str) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.len(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// `Σ_t g(t)·w(t)` in ascending index order with compensated summation.
    ///
    /// Non-finite terms propagate into the result.
    pub fn integrate<F: FnMut(usize) -> f64>(&self, mut g: F) -> f64 {
        compensated_sum(self.weights.iter().enumerate().map(|(i, &w)| g(i) * w))
    }
}

/// Neumaier's variant of Kahan summation.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    if sum.is_finite() {
        sum + comp
    } else {
        sum
    }
}

/// One finite real value per point of some [`MeasureSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct ScalarField {
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawField {
    values: Vec<f64>,
}

impl TryFrom<RawField> for ScalarField {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        ScalarField::new(raw.values)
    }
}

impl From<ScalarField> for RawField {
    fn from(f: ScalarField) -> Self {
        RawField { values: f.values }
    }
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((point, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "scalar field",
                point,
                value,
            });
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    /// Builds a field from `f(0), f(1), ...`; fails if any value is not finite.
    pub fn from_fn<F: FnMut(usize) -> f64>(n: usize, f: F) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, t: usize) -> f64 {
        self.values[t]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Pointwise `f(self[t], other[t])`.
    pub fn zip_map<F: FnMut(f64, f64) -> f64>(
        &self,
        other: &ScalarField,
        mut f: F,
    ) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                what: "scalar field",
                expected: self.len(),
                found: other.len(),
            });
        }
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.values.iter().copied().map(f).collect())
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: f64) -> Result<Self> {
        self.map(|a| alpha * a)
    }

    /// `self + alpha·other`.
    pub fn axpy(&self, alpha: f64, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a + alpha * b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ScalarField) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }
}

/// `E[f] = Σ_t f(t)·w(t)`.
pub fn expectation(space: &MeasureSpace, f: &ScalarField) -> Result<f64> {
    space.check(f, "f")?;
    Ok(space.integrate(|t| f.values[t]))
}

/// `E_p[f] = Σ_t f(t)·p(t)·w(t)`; `p` must be a density.
pub fn expectation_wrt(space: &MeasureSpace, p: &ScalarField, f: &ScalarField) -> Result<f64> {
    space.check(p, "p")?;
    space.check(f, "f")?;
    ensure_density(space, p, DEFAULT_DENSITY_TOL)?;
    // Same product order as `expectation(space, p·f)` so the two agree bit for bit.
    Ok(space.integrate(|t| p.values[t] * f.values[t]))
}

/// True iff `min p > 0` and `|E[p] - 1| ≤ tol`.
pub fn is_density(space: &MeasureSpace, p: &ScalarField, tol: f64) -> bool {
    density_violation(space, p, tol).is_none()
}

pub(crate) fn ensure_density(space: &MeasureSpace, p: &ScalarField, tol: f64) -> Result<()> {
    space.check(p, "density")?;
    match density_violation(space, p, tol) {
        None => Ok(()),
        Some(msg) => Err(Error::NotDensity(msg)),
    }
}

fn density_violation(space: &MeasureSpace, p: &ScalarField, tol: f64) -> Option<String> {
    if p.len() != space.len() {
        return Some(format!(
            "field has {} values but the space has {} points",
            p.len(),
            space.len()
        ));
    }
    if let Some((t, v)) = p.values.iter().enumerate().find(|(_, &v)| v <= 0.0) {
        return Some(format!("value {v} at point {t} is not positive"));
    }
    let mass = space.integrate(|t| p.values[t]);
    if (mass - 1.0).abs() > tol {
        return Some(format!(
            "total mass {mass} differs from 1 by more than {tol}"
        ));
    }
    None
}
