//! Herglotz triplets `(alpha, beta, mu)` and pointwise evaluation of the
//! self-map they represent:
//!
//! `f(z) = alpha z + beta + int (1 + t z) / (t - z) d mu(t)`.
//!
//! `alpha` is stored exactly: parabolicity (`alpha == 1`) is an input choice,
//! never a floating-point estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::UpperHalfPoint;
use crate::measure::FiniteMeasure;
use crate::quadrature::QuadConfig;

/// Dynamical class read off the angular derivative at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MapClass {
    /// `alpha < 1`: the Denjoy-Wolff point is not at infinity.
    NotDenjoyWolffInfinity,
    /// `alpha > 1`: orbits escape exponentially like `alpha^n`.
    Hyperbolic { alpha: f64 },
    /// `alpha == 1`: parabolic; the hyperbolic-step refinement is an
    /// orbit-level question.
    ParabolicCandidate,
}

/// The triplet `(alpha, beta, mu)` of a holomorphic self-map of the
/// upper half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzTriplet {
    alpha: f64,
    beta: f64,
    mu: FiniteMeasure,
}

impl HerglotzTriplet {
    pub fn new(alpha: f64, beta: f64, mu: FiniteMeasure) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidTriplet(format!(
                "alpha must be finite and nonnegative, got {alpha}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidTriplet(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { alpha, beta, mu })
    }

    /// Purely affine map `alpha z + beta`.
    pub fn affine(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, FiniteMeasure::zero())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> &FiniteMeasure {
        &self.mu
    }

    /// `alpha >= 1` exactly: the Denjoy-Wolff point sits at infinity.
    pub fn is_non_elliptic(&self) -> bool {
        self.alpha >= 1.0
    }

    pub fn classify(&self) -> MapClass {
        if self.alpha < 1.0 {
            MapClass::NotDenjoyWolffInfinity
        } else if self.alpha > 1.0 {
            MapClass::Hyperbolic { alpha: self.alpha }
        } else {
            MapClass::ParabolicCandidate
        }
    }

    /// Evaluates the represented map at `z`.
    pub fn evaluate(&self, z: &UpperHalfPoint, cfg: &Config) -> Result<UpperHalfPoint> {
        let w = self.eval_complex(z.as_complex(), &cfg.eval_quad)?;
        UpperHalfPoint::from_complex(w)
    }

    /// Raw complex evaluation. The imaginary part is mathematically at least
    /// `alpha * Im z`; a nonpositive result can only come from a failed
    /// quadrature and is rejected.
    pub fn eval_complex(&self, z: Complex64, quad: &QuadConfig) -> Result<Complex64> {
        self.eval_impl(z, quad, false)
    }

    /// Evaluation for orbit stepping: Cauchy components contribute their
    /// exact value `i * mass` (residue calculus) instead of a quadrature.
    /// Long orbits multiply the per-step cost by up to 1e6; every other
    /// component still goes through the adaptive integrals.
    pub(crate) fn eval_complex_stepping(&self, z: Complex64, quad: &QuadConfig) -> Result<Complex64> {
        self.eval_impl(z, quad, true)
    }

    fn eval_impl(&self, z: Complex64, quad: &QuadConfig, cauchy_closed: bool) -> Result<Complex64> {
        let mut w = self.alpha * z + self.beta;
        for a in self.mu.atoms() {
            let t = Complex64::new(a.location, 0.0);
            w += a.mass * (1.0 + a.location * z) / (t - z);
        }
        // Each density integral is one additive piece of f(z); its error
        // budget is relative to the displacement scale (alpha-1)|z| + |beta|
        // that the orbit accumulators consume, not to the piece itself.
        // Pieces that nearly cancel (resabs far above the piece value) would
        // otherwise demand unreachable tolerances, while tangential parabolic
        // orbits (y << |z|) still need the tight per-piece resolution.
        let scale = (self.alpha - 1.0) * z.norm() + self.beta.abs() + 1.0;
        let piece_quad = QuadConfig {
            abs_tol: quad.abs_tol.max(quad.rel_tol * scale),
            ..*quad
        };
        for d in self.mu.densities() {
            if cauchy_closed && matches!(d.family(), crate::measure::DensityFamily::Cauchy) {
                w += Complex64::new(0.0, d.mass());
            } else {
                w += herglotz_density_integral(d, z, &piece_quad)?;
            }
        }
        if !(w.im > 0.0) {
            return Err(Error::QuadratureFailure {
                error: w.im.abs(),
                tolerance: 0.0,
                evals: 0,
            });
        }
        Ok(w)
    }

    /// `int (1 + t^2) / (t^2 + y^2) d mu(t) = (Im f(iy) - alpha y) / y`,
    /// the normalized imaginary excess along the imaginary axis.
    ///
    /// Nonnegative by the Julia Lemma (the integrand is nonnegative).
    pub fn imag_excess(&self, y: f64, cfg: &Config) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("imag_excess requires y > 0, got {y}")));
        }
        let mut total = 0.0;
        for a in self.mu.atoms() {
            let t = a.location;
            total += a.mass * (1.0 + t * t) / (t * t + y * y);
        }
        let kernel = move |t: f64| {
            Complex64::new((1.0 + t * t) / (t * t + y * y), 0.0)
        };
        // (1 + e^{2v}) / (e^{2v} + y^2) = (e^{-2v} + 1) / (1 + y^2 e^{-2v})
        let kernel_log = move |v: f64, _positive: bool| {
            let e2 = (-2.0 * v).exp();
            Complex64::new((e2 + 1.0) / (1.0 + y * y * e2), 0.0)
        };
        for d in self.mu.densities() {
            total += d
                .integrate_kernel_log(kernel, kernel_log, &[-y, y], &cfg.eval_quad)?
                .re;
        }
        Ok(total)
    }

    /// The Herglotz integral term alone, `f(z) - alpha z - beta`. Computing it
    /// directly avoids the cancellation in `f(iy) - i alpha y` for large `y`.
    pub fn integral_term(&self, z: Complex64, quad: &QuadConfig) -> Result<Complex64> {
        let mut w = Complex64::new(0.0, 0.0);
        for a in self.mu.atoms() {
            let t = Complex64::new(a.location, 0.0);
            w += a.mass * (1.0 + a.location * z) / (t - z);
        }
        let piece_quad = QuadConfig {
            abs_tol: quad.abs_tol.max(quad.rel_tol * (1.0 + self.mu.total_mass())),
            ..*quad
        };
        for d in self.mu.densities() {
            w += herglotz_density_integral(d, z, &piece_quad)?;
        }
        Ok(w)
    }
}

/// Integral of the Herglotz kernel against one density component.
///
/// The kernel in log abscissa, for `t = sign * e^v`:
/// `(1 + t z) / (t - z) = (e^{-v} + sign z) / (sign - z e^{-v})`.
fn herglotz_density_integral(
    d: &crate::measure::DensityComponent,
    z: Complex64,
    quad: &QuadConfig,
) -> Result<Complex64> {
    let kernel = move |t: f64| (1.0 + t * z) / (Complex64::new(t, 0.0) - z);
    let kernel_log = move |v: f64, positive: bool| {
        let emv = (-v).exp();
        let sign = if positive { 1.0 } else { -1.0 };
        (emv + sign * z) / (sign - z * emv)
    };
    let x = z.re;
    let y = z.im;
    // Panels refine where |t - z| is minimal; the singularity is benign
    // (Im z > 0) but the kernel peaks there.
    let hints = [x - y, x, x + y];
    d.integrate_kernel_log(kernel, kernel_log, &hints, quad)
}
