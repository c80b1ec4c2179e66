use rand::Rng;

use crate::backbone3d::{
    end_to_end_from_angles, end_to_end_grad, GeometryParams, END_TO_END_GRAD_STEP,
};
use crate::distributions::{vm_dlogpdf, vm_logpdf, vm_sample, VonMisesParams};
use crate::walk2d::{resultant_length, resultant_length_and_grad};
use crate::{AngleVector, Error, Result};

/// Prior density over the fine-grained state.
pub trait FineDensity: Send + Sync {
    fn dim(&self) -> usize;

    fn logpdf(&self, x: &[f64]) -> f64;

    /// Log-density; writes its gradient into `grad`.
    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

/// Deterministic coarse-graining `ξ(ω)`.
pub trait CoarseMap: Send + Sync {
    fn value(&self, x: &[f64]) -> Result<f64>;

    /// Value of `ξ` with its gradient written into `grad`. Fails where the
    /// map is not differentiable.
    fn value_and_grad(&self, x: &[f64], grad: &mut [f64]) -> Result<f64>;

    /// Interval containing every attainable value.
    fn range(&self) -> (f64, f64);
}

/// Independent von Mises angles, one parameter set per coordinate.
#[derive(Debug, Clone)]
pub struct VonMisesProduct {
    params: Vec<VonMisesParams>,
}

impl VonMisesProduct {
    pub fn new(params: Vec<VonMisesParams>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::Domain {
                name: "dim",
                value: 0.0,
                expected: ">= 1",
            });
        }
        Ok(VonMisesProduct { params })
    }

    /// Same parameters in every coordinate.
    pub fn iid(params: VonMisesParams, dim: usize) -> Result<Self> {
        Self::new(vec![params; dim])
    }

    pub fn params(&self) -> &[VonMisesParams] {
        &self.params
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> AngleVector {
        AngleVector::new(self.params.iter().map(|p| vm_sample(rng, p)))
    }
}

impl FineDensity for VonMisesProduct {
    fn dim(&self) -> usize {
        self.params.len()
    }

    fn logpdf(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.params)
            .map(|(&t, p)| vm_logpdf(t, p))
            .sum()
    }

    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut total = 0.0;
        for ((g, &t), p) in grad.iter_mut().zip(x).zip(&self.params) {
            total += vm_logpdf(t, p);
            *g = vm_dlogpdf(t, p);
        }
        total
    }
}

/// End-to-end length of a planar unit-step walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultantLength {
    n_steps: usize,
}

impl ResultantLength {
    pub fn new(n_steps: usize) -> Result<Self> {
        if n_steps < 2 {
            return Err(Error::Domain {
                name: "n_steps",
                value: n_steps as f64,
                expected: ">= 2",
            });
        }
        Ok(ResultantLength { n_steps })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }
}

impl CoarseMap for ResultantLength {
    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(resultant_length(x))
    }

    fn value_and_grad(&self, x: &[f64], grad: &mut [f64]) -> Result<f64> {
        resultant_length_and_grad(x, grad)
    }

    fn range(&self) -> (f64, f64) {
        (0.0, self.n_steps as f64)
    }
}

/// First-to-last Cα distance of a backbone built from `[φ…, ψ…]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndToEndDistance {
    n_residues: usize,
    geometry: GeometryParams,
    step: f64,
}

impl EndToEndDistance {
    /// Cβ placement is switched off; it does not affect the Cα positions.
    pub fn new(n_residues: usize, mut geometry: GeometryParams) -> Result<Self> {
        if n_residues < 2 {
            return Err(Error::Domain {
                name: "n_residues",
                value: n_residues as f64,
                expected: ">= 2",
            });
        }
        geometry.validate()?;
        geometry.place_cb = false;
        Ok(EndToEndDistance {
            n_residues,
            geometry,
            step: END_TO_END_GRAD_STEP,
        })
    }

    pub fn n_residues(&self) -> usize {
        self.n_residues
    }

    pub fn geometry(&self) -> &GeometryParams {
        &self.geometry
    }
}

impl CoarseMap for EndToEndDistance {
    fn value(&self, x: &[f64]) -> Result<f64> {
        end_to_end_from_angles(x, &self.geometry)
    }

    fn value_and_grad(&self, x: &[f64], grad: &mut [f64]) -> Result<f64> {
        end_to_end_grad(x, &self.geometry, self.step, grad)
    }

    /// Bounded by the fully stretched chain.
    fn range(&self) -> (f64, f64) {
        let g = &self.geometry;
        let per_residue = g.n_ca + g.ca_c + g.c_n;
        (0.0, (self.n_residues - 1) as f64 * per_residue)
    }
}
