//! Batch evaluation over independent inputs.
//!
//! With the `parallel` feature (on by default) the batch entry points fan out
//! over rayon's global pool; without it they run in order on the calling
//! thread. The `*_sequential` variants are always sequential. Results come
//! back in input order either way, and each item is computed by the same pure
//! function, so both paths produce identical bits.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::divergence::{phi_divergence, DivergenceReport};
use crate::error::Result;
use crate::family::{Chart, TangentVector};
use crate::measure::{MeasureSpace, ScalarField};
use crate::phi::PhiFunction;

/// Applies `f` to every item, in parallel when the `parallel` feature is on.
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// One `(p, q)` density pair.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DensityPair {
    pub p: ScalarField,
    pub q: ScalarField,
}

/// Closed-form φ-divergence for each pair.
pub fn divergence_table(
    space: &MeasureSpace,
    phi: &PhiFunction,
    u0: &ScalarField,
    pairs: &[DensityPair],
) -> Vec<Result<DivergenceReport>> {
    map_batch(pairs, |pr| phi_divergence(space, phi, u0, &pr.p, &pr.q))
}

pub fn divergence_table_sequential(
    space: &MeasureSpace,
    phi: &PhiFunction,
    u0: &ScalarField,
    pairs: &[DensityPair],
) -> Vec<Result<DivergenceReport>> {
    map_sequential(pairs, |pr| phi_divergence(space, phi, u0, &pr.p, &pr.q))
}

/// ψ for each coordinate vector.
pub fn normalizer_batch(chart: &Chart, us: &[TangentVector]) -> Vec<Result<f64>> {
    map_batch(us, |u| chart.normalizer(u))
}

pub fn normalizer_batch_sequential(chart: &Chart, us: &[TangentVector]) -> Vec<Result<f64>> {
    map_sequential(us, |u| chart.normalizer(u))
}
