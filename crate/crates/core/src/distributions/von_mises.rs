use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::special::log_bessel_i0;
use crate::angle::wrap_angle;
use crate::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Von Mises distribution on (−π, π] with mean direction `mu` and
/// concentration `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesParams {
    mu: f64,
    kappa: f64,
    // ln(2π I₀(κ))
    log_norm: f64,
}

impl VonMisesParams {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain {
                name: "mu",
                value: mu,
                expected: "finite",
            });
        }
        if !(kappa >= 0.0) || kappa.is_infinite() {
            return Err(Error::Domain {
                name: "kappa",
                value: kappa,
                expected: "finite and >= 0",
            });
        }
        Ok(VonMisesParams {
            mu: wrap_angle(mu),
            kappa,
            log_norm: LN_2PI + log_bessel_i0(kappa)?,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

pub fn vm_logpdf(theta: f64, params: &VonMisesParams) -> f64 {
    params.kappa * (wrap_angle(theta) - params.mu).cos() - params.log_norm
}

/// d/dθ of [`vm_logpdf`].
pub fn vm_dlogpdf(theta: f64, params: &VonMisesParams) -> f64 {
    -params.kappa * (theta - params.mu).sin()
}

/// Draws one angle in (−π, π] with the Best–Fisher rejection sampler.
pub fn vm_sample<R: Rng + ?Sized>(rng: &mut R, params: &VonMisesParams) -> f64 {
    let kappa = params.kappa;
    if kappa < 1e-8 {
        return wrap_angle(PI * (2.0 * rng.random::<f64>() - 1.0));
    }
    if kappa > 1e6 {
        // Best–Fisher loses precision to cancellation here; the wrapped
        // normal agrees with the von Mises to O(1/κ).
        let z: f64 = rng.sample(StandardNormal);
        return wrap_angle(params.mu + z / kappa.sqrt());
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let s = (1.0 + rho * rho) / (2.0 * rho);
    let w = loop {
        let u1: f64 = rng.random();
        let z = (PI * u1).cos();
        let w = (1.0 + s * z) / (s + z);
        let y = kappa * (s - w);
        let u2: f64 = rng.random();
        if y * (2.0 - y) - u2 > 0.0 || (y / u2).ln() + 1.0 - y >= 0.0 {
            break w;
        }
    };
    let angle = w.clamp(-1.0, 1.0).acos();
    let signed = if rng.random::<f64>() < 0.5 {
        -angle
    } else {
        angle
    };
    wrap_angle(params.mu + signed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::quadrature::{simpson, trapezoid};
    use crate::distributions::special::chi2_sf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_case() {
        let p = VonMisesParams::new(0.0, 0.0).unwrap();
        assert!((vm_logpdf(0.0, &p) + 1.837877).abs() < 1e-6);
        assert!((vm_logpdf(2.0, &p) - vm_logpdf(-1.0, &p)).abs() < 1e-15);
    }

    #[test]
    fn mode_value() {
        for &k in &[0.5, 10.0, 50.0, 1000.0] {
            let p = VonMisesParams::new(0.7, k).unwrap();
            let want = k - (2.0 * PI).ln() - log_bessel_i0(k).unwrap();
            assert!((vm_logpdf(0.7, &p) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn normalizes_by_quadrature() {
        for &k in &[0.0, 1.0, 10.0, 50.0] {
            let p = VonMisesParams::new(0.3, k).unwrap();
            let mass = trapezoid(|t| vm_logpdf(t, &p).exp(), -PI, PI, 20_000);
            assert!((mass - 1.0).abs() < 1e-8, "kappa={k}: {mass}");
        }
    }

    #[test]
    fn periodic_in_theta() {
        let p = VonMisesParams::new(-2.0, 4.0).unwrap();
        for k in -4..=4 {
            let t = 1.1 + 2.0 * PI * k as f64;
            assert!((vm_logpdf(t, &p) - vm_logpdf(1.1, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let p = VonMisesParams::new(0.4, 7.0).unwrap();
        let h = 1e-6;
        for &t in &[-3.0, -1.0, 0.0, 0.4, 2.5] {
            let fd = (vm_logpdf(t + h, &p) - vm_logpdf(t - h, &p)) / (2.0 * h);
            assert!((vm_dlogpdf(t, &p) - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_negative_kappa() {
        assert!(matches!(
            VonMisesParams::new(0.0, -1.0),
            Err(Error::Domain { name: "kappa", .. })
        ));
        assert!(VonMisesParams::new(f64::NAN, 1.0).is_err());
    }

    fn resultant(xs: &[f64]) -> (f64, f64) {
        let c: f64 = xs.iter().map(|x| x.cos()).sum::<f64>() / xs.len() as f64;
        let s: f64 = xs.iter().map(|x| x.sin()).sum::<f64>() / xs.len() as f64;
        ((c * c + s * s).sqrt(), s.atan2(c))
    }

    fn draws(mu: f64, kappa: f64, n: usize, seed: u64) -> Vec<f64> {
        let p = VonMisesParams::new(mu, kappa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| vm_sample(&mut rng, &p)).collect()
    }

    #[test]
    fn uniform_draws_have_small_resultant() {
        let xs = draws(0.0, 0.0, 100_000, 1);
        assert!(resultant(&xs).0 < 0.01);
        assert!(xs.iter().all(|&x| x > -PI && x <= PI));
    }

    #[test]
    fn concentrated_draws_center_on_mu() {
        let xs = draws(0.0, 10.0, 100_000, 2);
        assert!(resultant(&xs).1.abs() < 0.02);

        let xs = draws(1.0, 50.0, 100_000, 3);
        let inside = xs.iter().filter(|&&x| (x - 1.0).abs() < 0.5).count();
        assert!(inside as f64 / xs.len() as f64 > 0.99);
    }

    #[test]
    fn huge_kappa_is_nearly_deterministic() {
        let xs = draws(0.2, 1e7, 1000, 4);
        assert!(xs.iter().all(|x| (x - 0.2).abs() < 0.01));
    }

    #[test]
    fn sampler_passes_chi_squared_goodness_of_fit() {
        for (i, &(mu, kappa)) in [(0.0, 0.0), (0.0, 1.0), (-2.5, 10.0), (3.0, 50.0)]
            .iter()
            .enumerate()
        {
            let p = VonMisesParams::new(mu, kappa).unwrap();
            let bins = 50;
            let n = 100_000;
            let width = 2.0 * PI / bins as f64;
            let mut counts = vec![0usize; bins];
            for x in draws(mu, kappa, n, 100 + i as u64) {
                let b = (((x + PI) / width) as usize).min(bins - 1);
                counts[b] += 1;
            }
            let mut stat = 0.0;
            let mut used = 0;
            for (b, &c) in counts.iter().enumerate() {
                let lo = -PI + b as f64 * width;
                let prob = simpson(|t| vm_logpdf(t, &p).exp(), lo, lo + width, 200);
                let expected = prob * n as f64;
                if expected < 5.0 {
                    continue;
                }
                used += 1;
                stat += (c as f64 - expected).powi(2) / expected;
            }
            let pval = chi2_sf(stat, (used - 1) as f64).unwrap();
            assert!(pval > 0.01, "mu={mu} kappa={kappa}: p={pval}");
        }
    }
}
