use super::TargetDensity;

/// A phase-space point with its cached log-density and gradient.
#[derive(Debug, Clone)]
pub(crate) struct PhasePoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub logp: f64,
    pub grad: Vec<f64>,
}

impl PhasePoint {
    pub fn new<T: TargetDensity + ?Sized>(target: &T, q: Vec<f64>, p: Vec<f64>) -> Self {
        let mut grad = vec![0.0; q.len()];
        let logp = target.logpdf_and_grad(&q, &mut grad);
        PhasePoint { q, p, logp, grad }
    }

    pub fn kinetic(&self) -> f64 {
        0.5 * self.p.iter().map(|x| x * x).sum::<f64>()
    }

    /// Negative log joint density; `+inf` when not finite.
    pub fn hamiltonian(&self) -> f64 {
        let h = -self.logp + self.kinetic();
        if h.is_nan() {
            f64::INFINITY
        } else {
            h
        }
    }

    pub fn is_finite(&self) -> bool {
        self.logp.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }

    /// Half kick, drift, half kick. Returns `false` if the new point has a
    /// non-finite log-density or gradient.
    pub fn step<T: TargetDensity + ?Sized>(&mut self, target: &T, eps: f64) -> bool {
        let half = 0.5 * eps;
        for (p, g) in self.p.iter_mut().zip(&self.grad) {
            *p += half * g;
        }
        for (q, p) in self.q.iter_mut().zip(&self.p) {
            *q += eps * p;
        }
        self.logp = target.logpdf_and_grad(&self.q, &mut self.grad);
        if !self.is_finite() {
            return false;
        }
        for (p, g) in self.p.iter_mut().zip(&self.grad) {
            *p += half * g;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeapfrogStep {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
    pub log_density: f64,
    /// Set when the log-density or gradient at the new position is not
    /// finite; position and momentum are then not meaningful.
    pub divergent: bool,
}

/// One leapfrog step of size `step_size` under the identity metric.
pub fn leapfrog<T: TargetDensity + ?Sized>(
    target: &T,
    position: &[f64],
    momentum: &[f64],
    step_size: f64,
) -> LeapfrogStep {
    let mut z = PhasePoint::new(target, position.to_vec(), momentum.to_vec());
    let ok = z.is_finite() && z.step(target, step_size);
    LeapfrogStep {
        position: z.q,
        momentum: z.p,
        log_density: z.logp,
        divergent: !ok,
    }
}
