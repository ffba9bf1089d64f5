//! Geometry of the upper half-plane `H = { z : Im z > 0 }`: the hyperbolic
//! metric, its numerically stable variant, and the Cayley transforms between
//! `H` and the unit disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `|z|` above this threshold go through the stable distance
/// formula; the naive `(1-rho)` denominator underflows near the boundary.
const STABLE_DISTANCE_SWITCH: f64 = 1e6;

/// A point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    /// Builds a half-plane point. Rejects `im <= 0` and non-finite coordinates.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidPoint(format!(
                "coordinates must be finite, got {re} + {im}i"
            )));
        }
        if im <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "imaginary part must be strictly positive, got {im}"
            )));
        }
        Ok(Self { re, im })
    }

    /// The base point `i`.
    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

impl std::fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint {
    re: f64,
    im: f64,
}

impl DiscPoint {
    /// Builds a disc point. Rejects modulus `>= 1` and non-finite coordinates.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidPoint(format!(
                "coordinates must be finite, got {re} + {im}i"
            )));
        }
        if re * re + im * im >= 1.0 {
            return Err(Error::InvalidPoint(format!(
                "modulus must be strictly below 1, got |z| = {}",
                (re * re + im * im).sqrt()
            )));
        }
        Ok(Self { re, im })
    }

    pub fn origin() -> Self {
        Self { re: 0.0, im: 0.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.as_complex().norm()
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

/// A boundary point of the half-plane: a real number or the point at infinity.
///
/// Infinity is a tag, never a coordinate; all limits toward infinity are
/// expressed through finite iterates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryAnchor {
    Finite(f64),
    Infinity,
}

/// A point of the unit circle, used as the disc-side anchor of the Cayley
/// transform (the Denjoy-Wolff point of the conjugated map).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscBoundaryPoint {
    re: f64,
    im: f64,
}

impl DiscBoundaryPoint {
    /// Builds a unit-circle point; the modulus must equal 1 within `1e-12`.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let norm = (re * re + im * im).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPoint(format!(
                "tau must be unimodular within 1e-12, got |tau| = {norm}"
            )));
        }
        Ok(Self { re, im })
    }

    pub fn one() -> Self {
        Self { re: 1.0, im: 0.0 }
    }

    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Pseudo-hyperbolic distance `rho(z, w) = |(z - w) / (z - conj(w))|` in `[0, 1)`.
pub fn pseudo_hyperbolic(z: &UpperHalfPoint, w: &UpperHalfPoint) -> f64 {
    let zc = z.as_complex();
    let wc = w.as_complex();
    ((zc - wc) / (zc - wc.conj())).norm()
}

/// Hyperbolic distance `d(z, w) = log((1 + rho) / (1 - rho)) / 2`.
///
/// Delegates to [`hyperbolic_distance_stable`] once either argument is large,
/// where `1 - rho` cancels catastrophically.
pub fn hyperbolic_distance(z: &UpperHalfPoint, w: &UpperHalfPoint) -> f64 {
    if z.as_complex().norm() > STABLE_DISTANCE_SWITCH
        || w.as_complex().norm() > STABLE_DISTANCE_SWITCH
    {
        return hyperbolic_distance_stable(z, w);
    }
    let rho = pseudo_hyperbolic(z, w);
    0.5 * ((1.0 + rho) / (1.0 - rho)).ln()
}

/// Hyperbolic distance through the identity
/// `1 - rho^2 = 4 Im(z) Im(w) / |z - conj(w)|^2`, which avoids the
/// `1 - rho` cancellation when `rho` approaches the boundary:
///
/// `d(z, w) = log((1 + rho)^2 |z - conj(w)|^2 / (4 Im(z) Im(w))) / 2`.
pub fn hyperbolic_distance_stable(z: &UpperHalfPoint, w: &UpperHalfPoint) -> f64 {
    let zc = z.as_complex();
    let wc = w.as_complex();
    let rho = ((zc - wc) / (zc - wc.conj())).norm();
    let cross = (zc - wc.conj()).norm();
    // Split the logarithm so |z - conj(w)|^2 never overflows.
    0.5 * (2.0 * (1.0 + rho).ln() + 2.0 * cross.ln() - (4.0 * z.im() * w.im()).ln())
}

/// Stable distance on raw complex values already known to lie in `H`.
pub(crate) fn hyperbolic_distance_complex(z: Complex64, w: Complex64) -> f64 {
    let rho = ((z - w) / (z - w.conj())).norm();
    let cross = (z - w.conj()).norm();
    0.5 * (2.0 * (1.0 + rho).ln() + 2.0 * cross.ln() - (4.0 * z.im * w.im).ln())
}

/// Inverse Cayley transform `S^{-1}(w) = tau (w - i) / (w + i)` into the disc.
pub fn cayley_to_disc(w: &UpperHalfPoint, tau: DiscBoundaryPoint) -> DiscPoint {
    let wc = w.as_complex();
    let i = Complex64::new(0.0, 1.0);
    let z = tau.as_complex() * (wc - i) / (wc + i);
    // |g| < 1 holds exactly in reals; roundoff cannot push it to 1 because
    // |w - i| < |w + i| strictly for Im w > 0.
    DiscPoint { re: z.re, im: z.im }
}

/// Cayley transform `S(z) = i (tau + z) / (tau - z)` onto the half-plane.
pub fn cayley_to_halfplane(z: &DiscPoint, tau: DiscBoundaryPoint) -> UpperHalfPoint {
    let zc = z.as_complex();
    let i = Complex64::new(0.0, 1.0);
    let w = i * (tau.as_complex() + zc) / (tau.as_complex() - zc);
    UpperHalfPoint { re: w.re, im: w.im }
}

/// Pseudo-hyperbolic distance in the disc, `|(z - w) / (1 - z conj(w))|`.
/// The Cayley transforms are isometries for this metric.
pub fn disc_pseudo_hyperbolic(z: &DiscPoint, w: &DiscPoint) -> f64 {
    let zc = z.as_complex();
    let wc = w.as_complex();
    ((zc - wc) / (Complex64::new(1.0, 0.0) - zc * wc.conj())).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_lower_half_plane() {
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
        assert!(UpperHalfPoint::new(1.0, -0.5).is_err());
        assert!(UpperHalfPoint::new(f64::NAN, 1.0).is_err());
        assert!(UpperHalfPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn rejects_non_unimodular_tau() {
        assert!(DiscBoundaryPoint::new(0.5, 0.5).is_err());
        assert!(DiscBoundaryPoint::new(1.0 + 1e-10, 0.0).is_err());
        assert!(DiscBoundaryPoint::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn pseudo_hyperbolic_hand_values() {
        let i = UpperHalfPoint::i();
        assert_eq!(pseudo_hyperbolic(&i, &i), 0.0);
        let w = UpperHalfPoint::new(0.0, 3.0).unwrap();
        assert!((pseudo_hyperbolic(&i, &w) - 0.5).abs() < 1e-15);
        let a = UpperHalfPoint::new(1.0, 1.0).unwrap();
        let b = UpperHalfPoint::new(-1.0, 1.0).unwrap();
        assert!((pseudo_hyperbolic(&a, &b) - 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn distance_hand_values() {
        let i = UpperHalfPoint::i();
        assert_eq!(hyperbolic_distance(&i, &i), 0.0);
        let w = UpperHalfPoint::new(0.0, 4.0).unwrap();
        assert!((hyperbolic_distance(&i, &w) - 2.0_f64.ln()).abs() < 1e-14);
        let w = UpperHalfPoint::new(0.0, 3.0).unwrap();
        assert!((hyperbolic_distance(&i, &w) - 0.5 * 3.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn stable_distance_far_into_the_cusp() {
        let i = UpperHalfPoint::i();
        // d(i, 2^100 i) = 50 log 2 exactly.
        let w = UpperHalfPoint::new(0.0, 2.0_f64.powi(100)).unwrap();
        let expected = 50.0 * 2.0_f64.ln();
        let got = hyperbolic_distance_stable(&i, &w);
        assert!((got - expected).abs() / expected < 1e-9);

        // d(i, n + i) - log n -> 0.
        let w = UpperHalfPoint::new(1e8, 1.0).unwrap();
        assert!((hyperbolic_distance_stable(&i, &w) - 1e8_f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn cayley_hand_values() {
        let tau = DiscBoundaryPoint::one();
        let z = cayley_to_disc(&UpperHalfPoint::i(), tau);
        assert!(z.modulus() < 1e-15);

        let n = 7.0;
        let z = cayley_to_disc(&UpperHalfPoint::new(n, 1.0).unwrap(), tau);
        assert!((z.modulus() - n / (n * n + 4.0).sqrt()).abs() < 1e-15);

        let y = 2.0_f64.powi(20);
        let z = cayley_to_disc(&UpperHalfPoint::new(0.0, y).unwrap(), tau);
        assert!((z.re() - (y - 1.0) / (y + 1.0)).abs() < 1e-15);

        let w = cayley_to_halfplane(&DiscPoint::origin(), tau);
        assert!((w.re(), w.im()) == (0.0, 1.0));
    }
}
