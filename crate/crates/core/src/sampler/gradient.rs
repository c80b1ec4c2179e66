use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::TargetDensity;
use crate::{Error, Result};

pub const GRADIENT_CHECK_POINTS: usize = 20;
pub const GRADIENT_CHECK_STEP: f64 = 1e-5;
pub const GRADIENT_CHECK_TOLERANCE: f64 = 1e-4;

/// Largest componentwise `|analytic − central difference| / (|central difference| + 1e-12)`.
pub fn check_gradient<T: TargetDensity + ?Sized>(target: &T, point: &[f64], h: f64) -> f64 {
    let mut analytic = vec![0.0; point.len()];
    target.logpdf_and_grad(point, &mut analytic);
    let mut work = point.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..point.len() {
        work[i] = point[i] + h;
        let plus = target.logpdf(&work);
        work[i] = point[i] - h;
        let minus = target.logpdf(&work);
        work[i] = point[i];
        let fd = (plus - minus) / (2.0 * h);
        let err = (analytic[i] - fd).abs() / (fd.abs() + 1e-12);
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    worst
}

/// A target whose gradient was verified against central differences at
/// [`GRADIENT_CHECK_POINTS`] random points around a center.
#[derive(Debug, Clone)]
pub struct CheckedTarget<T> {
    inner: T,
    max_rel_error: f64,
}

impl<T: TargetDensity> CheckedTarget<T> {
    /// Checks points `center + spread · z` with `z ~ N(0, I)`; points where
    /// the density is not finite nearby are redrawn.
    pub fn new(inner: T, center: &[f64], spread: f64, seed: u64) -> Result<Self> {
        if center.len() != inner.dim() {
            return Err(Error::InvalidConfig(format!(
                "center has {} coordinates, target has {}",
                center.len(),
                inner.dim()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        let mut attempts = 0;
        while checked < GRADIENT_CHECK_POINTS {
            attempts += 1;
            if attempts > 100 * GRADIENT_CHECK_POINTS {
                return Err(Error::InvalidConfig(
                    "could not find points with a finite log-density for the gradient check".into(),
                ));
            }
            let point: Vec<f64> = center
                .iter()
                .map(|c| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    c + spread * z
                })
                .collect();
            if !finite_around(&inner, &point, GRADIENT_CHECK_STEP) {
                continue;
            }
            worst = worst.max(check_gradient(&inner, &point, GRADIENT_CHECK_STEP));
            checked += 1;
        }
        if !(worst <= GRADIENT_CHECK_TOLERANCE) {
            return Err(Error::GradientMismatch {
                max_rel_error: worst,
            });
        }
        Ok(CheckedTarget {
            inner,
            max_rel_error: worst,
        })
    }

    pub fn max_rel_error(&self) -> f64 {
        self.max_rel_error
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }
}

fn finite_around<T: TargetDensity + ?Sized>(target: &T, point: &[f64], h: f64) -> bool {
    if !target.logpdf(point).is_finite() {
        return false;
    }
    let mut work = point.to_vec();
    for i in 0..point.len() {
        for s in [h, -h] {
            work[i] = point[i] + s;
            if !target.logpdf(&work).is_finite() {
                return false;
            }
        }
        work[i] = point[i];
    }
    true
}

impl<T: TargetDensity> TargetDensity for CheckedTarget<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn logpdf(&self, x: &[f64]) -> f64 {
        self.inner.logpdf(x)
    }

    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self.inner.logpdf_and_grad(x, grad)
    }
}
