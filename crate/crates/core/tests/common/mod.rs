//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use phifam::{Chart, MeasureSpace, PhiFunction, ScalarField, TangentVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    Exponential,
    KappaConst,
    KappaVariable,
}

pub const PHI_KINDS: [PhiKind; 3] = [
    PhiKind::Exponential,
    PhiKind::KappaConst,
    PhiKind::KappaVariable,
];

pub fn random_space(rng: &mut impl Rng, n: usize) -> MeasureSpace {
    MeasureSpace::from_weights((0..n).map(|_| rng.gen_range(0.2..2.0)).collect()).unwrap()
}

/// Strictly positive density with entries bounded away from zero.
pub fn random_density(rng: &mut impl Rng, space: &MeasureSpace) -> ScalarField {
    let raw: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
    let mass = space.integrate(|t| raw[t]);
    ScalarField::new(raw.iter().map(|v| v / mass).collect()).unwrap()
}

pub fn random_field(rng: &mut impl Rng, n: usize, scale: f64) -> ScalarField {
    ScalarField::new((0..n).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

/// κ with |κ| ∈ [0.1, 1] and a random sign.
pub fn random_kappa(rng: &mut impl Rng) -> f64 {
    let k = rng.gen_range(0.1..=1.0);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

pub fn random_phi(rng: &mut impl Rng, kind: PhiKind, n: usize) -> PhiFunction {
    match kind {
        PhiKind::Exponential => PhiFunction::exponential(),
        PhiKind::KappaConst => PhiFunction::kappa_const(random_kappa(rng)).unwrap(),
        PhiKind::KappaVariable => {
            let ks = ScalarField::new((0..n).map(|_| random_kappa(rng)).collect()).unwrap();
            PhiFunction::kappa_variable(&ks).unwrap()
        }
    }
}

/// Positive direction field; `unit` forces u0 ≡ 1.
pub fn random_direction(rng: &mut impl Rng, n: usize, unit: bool) -> ScalarField {
    if unit {
        ScalarField::constant(n, 1.0).unwrap()
    } else {
        ScalarField::new((0..n).map(|_| rng.gen_range(0.5..1.5)).collect()).unwrap()
    }
}

/// Chart at a random density on a random space of `n` points.
pub fn random_chart(rng: &mut impl Rng, kind: PhiKind, n: usize) -> Chart {
    let s = random_space(rng, n);
    let p = random_density(rng, &s);
    let phi = random_phi(rng, kind, n);
    let unit = kind == PhiKind::Exponential || rng.gen_bool(0.5);
    let u0 = random_direction(rng, n, unit);
    Chart::at_density(s, phi, u0, &p).unwrap()
}

pub fn random_tangent(rng: &mut impl Rng, chart: &Chart, scale: f64) -> TangentVector {
    chart
        .center(&random_field(rng, chart.space().len(), scale))
        .unwrap()
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
