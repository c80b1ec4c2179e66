use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::adapt::DualAveraging;
use super::leapfrog::PhasePoint;
use super::{ChainResult, SamplerConfig, TargetDensity};
use crate::{Error, Result};

/// Energy error above which a trajectory is declared divergent.
pub const MAX_ENERGY_ERROR: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub accept_stat: f64,
    pub depth: usize,
    pub n_leapfrog: usize,
    pub divergent: bool,
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add_into(acc: &mut [f64], x: &[f64]) {
    acc.iter_mut().zip(x).for_each(|(a, b)| *a += b);
}

fn sum(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Generalized no-U-turn criterion for a subtrajectory with summed momentum
/// `rho` and end momenta `p_minus`, `p_plus` (identity metric).
fn no_u_turn(p_minus: &[f64], p_plus: &[f64], rho: &[f64]) -> bool {
    dot(p_plus, rho) > 0.0 && dot(p_minus, rho) > 0.0
}

/// Bookkeeping shared by all leaves of one transition.
struct Trajectory {
    h0: f64,
    n_leapfrog: usize,
    sum_metro_prob: f64,
    divergent: bool,
}

/// Ends and summary of a finished subtree.
struct Subtree {
    p_beg: Vec<f64>,
    p_end: Vec<f64>,
    rho: Vec<f64>,
    log_weight: f64,
    proposal: PhasePoint,
}

/// Multinomial NUTS over an identity metric.
pub struct Nuts<'a, T: TargetDensity + ?Sized> {
    target: &'a T,
    rng: ChaCha8Rng,
    max_depth: usize,
    step_size: f64,
    current: PhasePoint,
}

impl<'a, T: TargetDensity + ?Sized> Nuts<'a, T> {
    pub fn new(
        target: &'a T,
        init: &[f64],
        step_size: f64,
        max_depth: usize,
        seed: u64,
    ) -> Result<Self> {
        if init.len() != target.dim() {
            return Err(Error::InvalidConfig(format!(
                "initial point has {} coordinates, target has {}",
                init.len(),
                target.dim()
            )));
        }
        let current = PhasePoint::new(target, init.to_vec(), vec![0.0; init.len()]);
        if !current.is_finite() {
            return Err(Error::InvalidConfig(
                "log-density or gradient is not finite at the initial point".into(),
            ));
        }
        Ok(Nuts {
            target,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth,
            step_size,
            current,
        })
    }

    pub fn position(&self) -> &[f64] {
        &self.current.q
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn set_step_size(&mut self, eps: f64) {
        self.step_size = eps;
    }

    fn resample_momentum(&mut self) {
        let rng = &mut self.rng;
        self.current
            .p
            .iter_mut()
            .for_each(|p| *p = rng.sample(StandardNormal));
    }

    /// Doubles or halves the step size until the one-step acceptance
    /// probability crosses 0.8.
    pub fn find_reasonable_step_size(&mut self) -> Result<f64> {
        let log_target = 0.8f64.ln();
        let one_step = |this: &mut Self| -> f64 {
            this.resample_momentum();
            let h0 = this.current.hamiltonian();
            let mut z = this.current.clone();
            let h = if z.step(this.target, this.step_size) {
                z.hamiltonian()
            } else {
                f64::INFINITY
            };
            h0 - h
        };
        let direction = if one_step(self) > log_target {
            1.0
        } else {
            -1.0
        };
        for _ in 0..200 {
            let delta = one_step(self);
            if (direction > 0.0 && !(delta > log_target))
                || (direction < 0.0 && !(delta < log_target))
            {
                return Ok(self.step_size);
            }
            self.step_size *= if direction > 0.0 { 2.0 } else { 0.5 };
            if self.step_size > 1e7 || self.step_size < 1e-300 {
                return Err(Error::AdaptationFailure(format!(
                    "no usable step size found (reached {:e})",
                    self.step_size
                )));
            }
        }
        Ok(self.step_size)
    }

    /// One NUTS transition from the current point.
    pub fn transition(&mut self) -> Transition {
        self.resample_momentum();
        let z0 = self.current.clone();
        let mut traj = Trajectory {
            h0: z0.hamiltonian(),
            n_leapfrog: 0,
            sum_metro_prob: 0.0,
            divergent: false,
        };

        let mut z_fwd = z0.clone();
        let mut z_bck = z0.clone();
        let mut sample = z0.clone();

        let mut p_fwd_fwd = z0.p.clone();
        let mut p_fwd_bck = z0.p.clone();
        let mut p_bck_fwd = z0.p.clone();
        let mut p_bck_bck = z0.p.clone();
        let mut rho = z0.p.clone();
        let mut log_sum_weight = 0.0;
        let mut depth = 0;

        while depth < self.max_depth {
            let forward = self.rng.random::<f64>() > 0.5;
            let (rho_fwd, rho_bck, subtree);
            if forward {
                rho_bck = rho.clone();
                p_bck_fwd = p_fwd_bck.clone();
                let Some(t) = self.build_tree(&mut z_fwd, depth, 1.0, &mut traj) else {
                    break;
                };
                p_fwd_bck = t.p_beg.clone();
                p_fwd_fwd = t.p_end.clone();
                rho_fwd = t.rho.clone();
                subtree = t;
            } else {
                rho_fwd = rho.clone();
                p_fwd_bck = p_bck_fwd.clone();
                let Some(t) = self.build_tree(&mut z_bck, depth, -1.0, &mut traj) else {
                    break;
                };
                p_bck_fwd = t.p_beg.clone();
                p_bck_bck = t.p_end.clone();
                rho_bck = t.rho.clone();
                subtree = t;
            }
            depth += 1;

            if subtree.log_weight > log_sum_weight
                || self.rng.random::<f64>() < (subtree.log_weight - log_sum_weight).exp()
            {
                sample = subtree.proposal;
            }
            log_sum_weight = log_sum_exp(log_sum_weight, subtree.log_weight);

            rho = sum(&rho_bck, &rho_fwd);
            let mut persist = no_u_turn(&p_bck_bck, &p_fwd_fwd, &rho);
            persist &= no_u_turn(&p_bck_bck, &p_fwd_bck, &sum(&rho_bck, &p_fwd_bck));
            persist &= no_u_turn(&p_bck_fwd, &p_fwd_fwd, &sum(&rho_fwd, &p_bck_fwd));
            if !persist {
                break;
            }
        }

        self.current = sample;
        Transition {
            accept_stat: if traj.n_leapfrog > 0 {
                traj.sum_metro_prob / traj.n_leapfrog as f64
            } else {
                0.0
            },
            depth,
            n_leapfrog: traj.n_leapfrog,
            divergent: traj.divergent,
        }
    }

    /// Extends `z` by `2^depth` leapfrog steps in direction `sign`. Returns
    /// `None` if the subtree diverged or turned back on itself.
    fn build_tree(
        &mut self,
        z: &mut PhasePoint,
        depth: usize,
        sign: f64,
        traj: &mut Trajectory,
    ) -> Option<Subtree> {
        if depth == 0 {
            let ok = z.step(self.target, sign * self.step_size);
            traj.n_leapfrog += 1;
            let h = if ok { z.hamiltonian() } else { f64::INFINITY };
            if h - traj.h0 > MAX_ENERGY_ERROR {
                traj.divergent = true;
            }
            let log_weight = traj.h0 - h;
            traj.sum_metro_prob += if log_weight > 0.0 {
                1.0
            } else {
                log_weight.exp()
            };
            if traj.divergent {
                return None;
            }
            return Some(Subtree {
                p_beg: z.p.clone(),
                p_end: z.p.clone(),
                rho: z.p.clone(),
                log_weight,
                proposal: z.clone(),
            });
        }

        let init = self.build_tree(z, depth - 1, sign, traj)?;
        let fin = self.build_tree(z, depth - 1, sign, traj)?;

        let log_weight = log_sum_exp(init.log_weight, fin.log_weight);
        let proposal = if fin.log_weight > log_weight
            || self.rng.random::<f64>() < (fin.log_weight - log_weight).exp()
        {
            fin.proposal
        } else {
            init.proposal
        };

        let mut rho = init.rho.clone();
        add_into(&mut rho, &fin.rho);
        let mut persist = no_u_turn(&init.p_beg, &fin.p_end, &rho);
        persist &= no_u_turn(&init.p_beg, &fin.p_beg, &sum(&init.rho, &fin.p_beg));
        persist &= no_u_turn(&init.p_end, &fin.p_end, &sum(&fin.rho, &init.p_end));
        if !persist {
            return None;
        }
        Some(Subtree {
            p_beg: init.p_beg,
            p_end: fin.p_end,
            rho,
            log_weight,
            proposal,
        })
    }
}

/// Runs warmup with dual-averaging step-size adaptation followed by
/// `sample_steps` NUTS transitions.
pub fn nuts_sample<T: TargetDensity + ?Sized>(
    target: &T,
    init: &[f64],
    config: &SamplerConfig,
) -> Result<ChainResult> {
    config.validate()?;
    let mut nuts = Nuts::new(
        target,
        init,
        config.initial_step_size,
        config.max_tree_depth,
        config.seed,
    )?;
    let eps0 = nuts.find_reasonable_step_size()?;
    let mut adapt = DualAveraging::new(eps0, config.target_accept);

    let mut step_size_trace = Vec::with_capacity(config.warmup_steps);
    let mut warmup_divergences = 0;
    for _ in 0..config.warmup_steps {
        step_size_trace.push(nuts.step_size());
        let t = nuts.transition();
        warmup_divergences += t.divergent as usize;
        let eps = adapt.update(t.accept_stat);
        nuts.set_step_size(eps);
    }
    if warmup_divergences == config.warmup_steps {
        return Err(Error::AdaptationFailure(format!(
            "all {} warmup transitions diverged",
            config.warmup_steps
        )));
    }
    let step_size = adapt.final_step_size();
    if !(step_size.is_finite() && step_size > 0.0) {
        return Err(Error::AdaptationFailure(format!(
            "adapted step size {step_size}"
        )));
    }
    nuts.set_step_size(step_size);

    let n = config.sample_steps;
    let mut result = ChainResult {
        samples: Vec::with_capacity(n),
        accept_stats: Vec::with_capacity(n),
        step_size_trace,
        step_size,
        tree_depths: Vec::with_capacity(n),
        n_leapfrog: Vec::with_capacity(n),
        divergence_count: 0,
        warmup_divergences,
    };
    for _ in 0..n {
        let t = nuts.transition();
        result.samples.push(nuts.position().to_vec());
        result.accept_stats.push(t.accept_stat);
        result.tree_depths.push(t.depth);
        result.n_leapfrog.push(t.n_leapfrog);
        result.divergence_count += t.divergent as usize;
    }
    Ok(result)
}
