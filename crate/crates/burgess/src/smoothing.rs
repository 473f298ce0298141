//! The smooth cutoff used by the congruence-count verifier: nonnegative on
//! the line, bounded below on [-1, 1], with a Fourier transform supported in
//! [-1/10, 1/10]. The concrete choice is the squared sinc
//!
//!   phi(x) = (1/10) * (sin(pi x / 10) / (pi x / 10))^2,
//!
//! whose transform under e(xy) = exp(2*pi*i*x*y) is the triangle
//! phi_hat(y) = max(0, 1 - 10|y|), so both support and the |phi_hat| <= 1
//! bound are exact closed forms.

use num_complex::Complex64;

use crate::arith::RootOfUnity;

/// How far the lattice sums are truncated: |c| <= TRUNCATION_FACTOR * n.
/// The quadratic tail of phi keeps the truncation error below 0.01 * n.
pub const TRUNCATION_FACTOR: u64 = 1000;

/// The fixed cutoff. `scale` is the sinc frequency, `normalization` the
/// value at zero.
#[derive(Debug, Clone, Copy)]
pub struct SmoothCutoff {
    scale: f64,
    normalization: f64,
}

impl Default for SmoothCutoff {
    fn default() -> Self {
        SmoothCutoff {
            scale: std::f64::consts::PI / 10.0,
            normalization: 0.1,
        }
    }
}

impl SmoothCutoff {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// phi(x) >= 0 everywhere; the singularity at 0 is removable.
    pub fn phi(&self, x: f64) -> f64 {
        let u = self.scale * x;
        if u.abs() < 1e-9 {
            return self.normalization;
        }
        let s = u.sin() / u;
        self.normalization * s * s
    }

    /// Closed-form transform: max(0, 1 - 10|y|).
    pub fn phi_hat(&self, y: f64) -> f64 {
        (1.0 - 10.0 * y.abs()).max(0.0)
    }

    /// Minimum of phi over [-1, 1]; phi decreases away from 0 there, so the
    /// minimum sits at the endpoints.
    pub fn min_on_unit_interval(&self) -> f64 {
        self.phi(1.0)
    }

    /// Both sides of the lattice identity
    /// sum_c phi(c/n) e_l(-c r) = n * sum_k phi_hat(n (k - r/l)).
    /// The left side is truncated at |c| <= 1000 n; the right side is a
    /// finite sum because of the compact support. |lhs - rhs| <= 0.01 n.
    pub fn poisson_pair(&self, n: u64, ell: u64, r: i64) -> (Complex64, Complex64) {
        assert!(n >= 1 && ell >= 2);
        let radius = (TRUNCATION_FACTOR * n) as i64;
        let mut lhs = Complex64::new(0.0, 0.0);
        for c in -radius..=radius {
            let w = self.phi(c as f64 / n as f64);
            if w > 0.0 {
                lhs += w * RootOfUnity::new(-c * r, ell).to_complex();
            }
        }
        let frac = (r.rem_euclid(ell as i64)) as f64 / ell as f64;
        let mut rhs = 0.0;
        for k in -2i64..=2 {
            rhs += self.phi_hat(n as f64 * (k as f64 - frac));
        }
        (lhs, Complex64::new(n as f64 * rhs, 0.0))
    }
}
