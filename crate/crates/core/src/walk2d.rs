//! Planar von Mises random walk with unit steps.
//!
//! Step `i` moves by the unit vector `(cos θᵢ, sin θᵢ)` starting from the
//! origin; the coarse-grained summary is the resultant length
//! `d = ‖Σᵢ v(θᵢ)‖ ∈ [0, N]`.

use rand::Rng;

use crate::angle::AngleVector;
use crate::distributions::{vm_sample, VonMisesParams};
use crate::{Error, Result};

/// Below this resultant length the gradient of `d` is treated as singular.
pub const SINGULAR_RESULTANT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Walk2D {
    points: Vec<[f64; 2]>,
}

impl Walk2D {
    /// `N + 1` points, the first at the origin.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn endpoint(&self) -> [f64; 2] {
        *self.points.last().expect("walk has at least the origin")
    }

    /// Distance from the origin to the final point.
    pub fn end_to_end(&self) -> f64 {
        let [x, y] = self.endpoint();
        x.hypot(y)
    }
}

pub fn coords_from_angles(theta: &[f64]) -> Walk2D {
    let mut points = Vec::with_capacity(theta.len() + 1);
    let mut cur = [0.0, 0.0];
    points.push(cur);
    for &t in theta {
        let (s, c) = t.sin_cos();
        cur = [cur[0] + c, cur[1] + s];
        points.push(cur);
    }
    Walk2D { points }
}

fn resultant_vector(theta: &[f64]) -> (f64, f64) {
    theta.iter().fold((0.0, 0.0), |(x, y), &t| {
        let (s, c) = t.sin_cos();
        (x + c, y + s)
    })
}

pub fn resultant_length(theta: &[f64]) -> f64 {
    let (x, y) = resultant_vector(theta);
    x.hypot(y)
}

/// Resultant length together with its gradient with respect to each angle.
pub fn resultant_length_and_grad(theta: &[f64], grad: &mut [f64]) -> Result<f64> {
    debug_assert_eq!(theta.len(), grad.len());
    let (rx, ry) = resultant_vector(theta);
    let d = rx.hypot(ry);
    if !(d > SINGULAR_RESULTANT) {
        return Err(Error::SingularResultant { length: d });
    }
    for (g, &t) in grad.iter_mut().zip(theta) {
        let (s, c) = t.sin_cos();
        *g = (-s * rx + c * ry) / d;
    }
    Ok(d)
}

pub fn resultant_length_grad(theta: &[f64]) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; theta.len()];
    resultant_length_and_grad(theta, &mut grad)?;
    Ok(grad)
}

/// Draws `n_steps` i.i.d. von Mises step angles and the walk they induce.
pub fn vrw_sample<R: Rng + ?Sized>(
    rng: &mut R,
    params: &VonMisesParams,
    n_steps: usize,
) -> Result<(AngleVector, Walk2D)> {
    if n_steps == 0 {
        return Err(Error::Domain {
            name: "n_steps",
            value: 0.0,
            expected: ">= 1",
        });
    }
    let angles = AngleVector::new((0..n_steps).map(|_| vm_sample(rng, params)));
    let walk = coords_from_angles(&angles);
    Ok((angles, walk))
}
