//! Exact one-step transition of the linear torsion Langevin equation.
//!
//! The state (theta, theta_dot) of
//!
//!     theta'' = -Omega^2 theta - gamma theta' + sqrt(A) xi(t)
//!
//! is a Gaussian process, so a step of any size dt is exact:
//! x_{n+1} = M x_n + w_n with M = exp(F dt) and w_n ~ N(0, Q), where Q is
//! the process-noise covariance accumulated over the step. Damping rates
//! spanning 1e-10..1e5 1/s rule out naive explicit stepping; the matrix
//! exponential and Q are evaluated in closed form with branch-safe
//! kernels, falling back to Gauss-Legendre for the one entry that
//! cancels catastrophically at small gamma*dt.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::langevin::LangevinParams;
use crate::math::gauss_legendre_01;

/// Damped oscillator kernel: (e^{-lambda t} c(t), e^{-lambda t} s(t)) with
/// c = cos(w_d t), s = sin(w_d t)/w_d for positive discriminant
/// disc = Omega^2 - lambda^2, the hyperbolic pair for negative disc, and a
/// series near critical damping. The damped products stay bounded for any
/// gamma*t, unlike cosh/sinh alone.
pub(crate) fn damped_kernel(lambda: f64, disc: f64, t: f64) -> (f64, f64) {
    let x2 = disc * t * t;
    if x2.abs() < 1e-8 {
        // series in disc*t^2, entire across the critical point
        let c = 1.0 + x2 * (-0.5 + x2 * (1.0 / 24.0 - x2 / 720.0));
        let s = t * (1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0)));
        let e = (-lambda * t).exp();
        (e * c, e * s)
    } else if disc > 0.0 {
        let w = disc.sqrt();
        let e = (-lambda * t).exp();
        (e * (w * t).cos(), e * (w * t).sin() / w)
    } else {
        let mu = (-disc).sqrt();
        // lambda - mu via the conjugate to avoid cancellation; the
        // identity lambda^2 - mu^2 = Omega^2 = lambda^2 + disc is exact.
        let omega_sq = lambda * lambda + disc;
        let slow = omega_sq / (lambda + mu);
        let e1 = (-slow * t).exp();
        let e2 = (-(lambda + mu) * t).exp();
        ((e1 + e2) / 2.0, (e1 - e2) / (2.0 * mu))
    }
}

/// Precomputed exact transition for a fixed (params, dt).
#[derive(Debug, Clone, Copy)]
pub struct StepPropagator {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    // Cholesky factor of the per-step noise covariance Q (A folded in).
    l11: f64,
    l21: f64,
    l22: f64,
}

impl StepPropagator {
    pub fn new(params: &LangevinParams, dt: f64) -> Self {
        let omega = params.omega_rot;
        let gamma = params.gamma;
        let a = params.amplitude_a;
        let lambda = gamma / 2.0;
        let disc = omega * omega - lambda * lambda;

        let (ec, es) = damped_kernel(lambda, disc, dt);
        let m11 = ec + lambda * es;
        let m12 = es;
        let m21 = -omega * omega * es;
        let m22 = ec - lambda * es;

        let q11 = if gamma * dt < 0.5 {
            // closed form suffers 1 - e^{-gamma dt}(..) cancellation here;
            // the integrand h(u)^2 is smooth on the step (omega dt < 0.1
            // is enforced upstream), so fixed-order quadrature is exact to
            // machine precision.
            let (nodes, weights) = gauss_legendre_01();
            let mut acc = 0.0;
            for (x, w) in nodes.iter().zip(weights) {
                let (_, h) = damped_kernel(lambda, disc, x * dt);
                acc += w * h * h;
            }
            a * acc * dt
        } else if omega > 0.0 {
            let e = (-gamma * dt).exp();
            a * (1.0 - (e + 2.0 * lambda * ec * es + 2.0 * lambda * lambda * es * es))
                / (4.0 * lambda * omega * omega)
        } else {
            // free damped rotation: h(u) = (1 - e^{-gamma u})/gamma
            let t = dt;
            let em1 = (-gamma * t).exp_m1(); // e^{-gt} - 1
            let em2 = (-2.0 * gamma * t).exp_m1();
            a / (gamma * gamma) * (t + 2.0 * em1 / gamma - em2 / (2.0 * gamma))
        };
        let q12 = a * es * es / 2.0;
        // integration by parts against the oscillator equation:
        // int h'^2 = h h' + gamma h^2/2 + Omega^2 int h^2
        let q22 = a * (es * (ec - lambda * es) + gamma * es * es / 2.0) + omega * omega * q11;

        let (l11, l21, l22) = if q11 > 0.0 {
            let l11 = q11.sqrt();
            let l21 = q12 / l11;
            (l11, l21, (q22 - l21 * l21).max(0.0).sqrt())
        } else {
            (0.0, 0.0, q22.max(0.0).sqrt())
        };

        Self { m11, m12, m21, m22, l11, l21, l22 }
    }

    /// Advance (theta, theta_dot) by one step.
    #[inline]
    pub fn step<R: Rng>(&self, state: (f64, f64), rng: &mut R) -> (f64, f64) {
        let (th, td) = state;
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        (
            self.m11 * th + self.m12 * td + self.l11 * z1,
            self.m21 * th + self.m22 * td + self.l21 * z1 + self.l22 * z2,
        )
    }

    /// Per-step noise covariance (for tests).
    pub fn noise_covariance(&self) -> (f64, f64, f64) {
        (
            self.l11 * self.l11,
            self.l11 * self.l21,
            self.l21 * self.l21 + self.l22 * self.l22,
        )
    }
}

/// One Euler-Maruyama step, kept as an independent cross-check integrator.
#[inline]
pub fn euler_maruyama_step<R: Rng>(
    params: &LangevinParams,
    dt: f64,
    state: (f64, f64),
    rng: &mut R,
) -> (f64, f64) {
    let (th, td) = state;
    let z: f64 = rng.sample(StandardNormal);
    (
        th + td * dt,
        td + (-params.omega_rot * params.omega_rot * th - params.gamma * td) * dt
            + (params.amplitude_a * dt).sqrt() * z,
    )
}
