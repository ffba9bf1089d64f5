//! Numerical Koenigs functions and conformality at the Denjoy-Wolff point.
//!
//! Hyperbolic maps use the Valiron quotient `h_n(z) = f^n(z) / |f^n(i)|`;
//! parabolic maps of positive hyperbolic step use the normalized difference
//! quotient `F_n(z) = (f^n(z) - x_n) / y_n` divided by the drift `b`. Both
//! constructions are validated exclusively through the residual of their
//! functional equation (`h o f = alpha h`, resp. `h o f = h + 1`), never
//! trusted on their own.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance_complex, UpperHalfPoint};
use crate::herglotz::{HerglotzTriplet, MapClass};
use crate::orbit::{self, Orbit, DRIFT_ZERO_THRESHOLD};
use crate::par;

/// Which linearization the approximant realizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KoenigsKind {
    /// `h o f = alpha h` (hyperbolic).
    Valiron,
    /// `h o f = h + 1` (parabolic positive step), normalized by the drift.
    PommerenkeNormalized { b: f64 },
}

/// A depth-`n` Koenigs approximant with its cached anchor orbit.
#[derive(Debug, Clone)]
pub struct KoenigsApprox {
    map: HerglotzTriplet,
    kind: KoenigsKind,
    depth: usize,
    anchor: Orbit,
}

/// Builds the Valiron approximant `h_n(z) = f^n(z)/|f^n(i)|` at depth `n`.
pub fn valiron_koenigs(f: &HerglotzTriplet, depth: usize, cfg: &Config) -> Result<KoenigsApprox> {
    if !matches!(f.classify(), MapClass::Hyperbolic { .. }) {
        return Err(Error::Classification(
            "the Valiron construction requires a hyperbolic map".into(),
        ));
    }
    let anchor = orbit::iterate(f, &UpperHalfPoint::i(), depth, cfg)?;
    Ok(KoenigsApprox {
        map: f.clone(),
        kind: KoenigsKind::Valiron,
        depth,
        anchor,
    })
}

/// Builds the Pommerenke-normalized approximant anchored at `z0`.
///
/// Fails with `DriftZero` when `|b| < 1e-8`: without positive hyperbolic step
/// the normalization is invalid.
pub fn pommerenke_koenigs(
    f: &HerglotzTriplet,
    z0: &UpperHalfPoint,
    depth: usize,
    cfg: &Config,
) -> Result<KoenigsApprox> {
    if f.alpha() != 1.0 {
        return Err(Error::Classification(
            "the Pommerenke construction requires a parabolic map".into(),
        ));
    }
    let anchor = orbit::iterate(f, z0, depth, cfg)?;
    let b = orbit::drift_coefficient(&anchor, cfg)?;
    if b.abs() < DRIFT_ZERO_THRESHOLD {
        return Err(Error::DriftZero(b));
    }
    Ok(KoenigsApprox {
        map: f.clone(),
        kind: KoenigsKind::PommerenkeNormalized { b },
        depth,
        anchor,
    })
}

impl KoenigsApprox {
    pub fn kind(&self) -> KoenigsKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn map(&self) -> &HerglotzTriplet {
        &self.map
    }

    /// `h_n(z)` at the construction depth.
    pub fn evaluate(&self, z: &UpperHalfPoint, cfg: &Config) -> Result<Complex64> {
        let orbit = orbit::iterate(&self.map, z, self.depth, cfg)?;
        self.evaluate_with_orbit(&orbit, self.depth)
    }

    /// `h_d(z)` at depth `d <= depth`, reading iterates off a precomputed
    /// orbit of `z` (which must be at least `d` long).
    pub fn evaluate_with_orbit(&self, orbit_of_z: &Orbit, d: usize) -> Result<Complex64> {
        if d > self.depth || d > orbit_of_z.len() {
            return Err(Error::Domain(format!("depth {d} exceeds available iterates")));
        }
        let zn = orbit_of_z.sample(d);
        let an = self.anchor.sample(d);
        match self.kind {
            KoenigsKind::Valiron => {
                // f^d(z) / |f^d(i)|: both grow like alpha^d, the ratio is O(1).
                Ok(Complex64::from_polar((zn.log_abs - an.log_abs).exp(), zn.arg))
            }
            KoenigsKind::PommerenkeNormalized { b } => {
                let (zx, zy) = zn
                    .z
                    .ok_or_else(|| Error::Undetermined("iterate left Cartesian range".into()))?;
                let (ax, ay) = an
                    .z
                    .ok_or_else(|| Error::Undetermined("anchor left Cartesian range".into()))?;
                Ok(Complex64::new((zx - ax) / ay, zy / ay) / b)
            }
        }
    }

    /// Maximum functional-equation residual over a grid:
    /// `|h(f(z)) - alpha h(z)|` or `|h(f(z)) - h(z) - 1|`.
    pub fn abel_residual(&self, grid: &[UpperHalfPoint], cfg: &Config) -> Result<f64> {
        self.abel_residual_at(grid, self.depth, cfg)
    }

    /// Residual at a chosen depth `d <= depth`.
    pub fn abel_residual_at(&self, grid: &[UpperHalfPoint], d: usize, cfg: &Config) -> Result<f64> {
        if d > self.depth {
            return Err(Error::Domain(format!("depth {d} exceeds construction depth")));
        }
        let results = par::map_collect(grid.to_vec(), |z| -> Result<f64> {
            let orbit = orbit::iterate(&self.map, &z, d + 1, cfg)?;
            let h_z = self.evaluate_with_orbit(&orbit, d)?;
            // h_d(f(z)) reads one more iterate of the same orbit.
            let zn = orbit.sample(d + 1);
            let an = self.anchor.sample(d);
            let res = match self.kind {
                KoenigsKind::Valiron => {
                    let h_fz = Complex64::from_polar((zn.log_abs - an.log_abs).exp(), zn.arg);
                    (h_fz - self.map.alpha() * h_z).norm()
                }
                KoenigsKind::PommerenkeNormalized { b } => {
                    let (zx, zy) = zn.z.ok_or_else(|| {
                        Error::Undetermined("iterate left Cartesian range".into())
                    })?;
                    let (ax, ay) = an.z.ok_or_else(|| {
                        Error::Undetermined("anchor left Cartesian range".into())
                    })?;
                    let h_fz = Complex64::new((zx - ax) / ay, zy / ay) / b;
                    (h_fz - h_z - Complex64::new(1.0, 0.0)).norm()
                }
            };
            Ok(res)
        });
        let mut max = 0.0_f64;
        for r in results {
            max = max.max(r?);
        }
        Ok(max)
    }

    /// Hyperbolic-distance defect `d_H(i, w) - d_H(i, h(w))`.
    ///
    /// Bounded along orbits exactly when `h` is conformal at infinity.
    pub fn distance_defect(&self, w: &UpperHalfPoint, cfg: &Config) -> Result<f64> {
        let hw = self.evaluate(w, cfg)?;
        if !(hw.im > 0.0) {
            return Err(Error::Domain(format!("h(w) = {hw} left the upper half-plane")));
        }
        let i = Complex64::new(0.0, 1.0);
        Ok(hyperbolic_distance_complex(i, w.as_complex()) - hyperbolic_distance_complex(i, hw))
    }
}

/// Verdict on conformality of `h` at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConformalityVerdict {
    /// The angular derivative `lim h(w)/w` stabilized to a nonzero value.
    Conformal {
        derivative_re: f64,
        derivative_im: f64,
    },
    NotConformal,
    Undetermined,
}

impl ConformalityVerdict {
    pub fn is_conformal(&self) -> bool {
        matches!(self, ConformalityVerdict::Conformal { .. })
    }
}

/// Probes conformality at infinity with two congruent probes:
///
/// (i) `h(iy)/(iy)` along the ladder `y = 10^2 .. 10^6` must stabilize to a
/// nonzero value (Conformal) or decline monotonically toward zero;
/// (ii) row minima of `Im h(z)/Im z` over a cone grid (imaginary axis plus
/// the rays `arg z = pi/4, 3pi/4`) at the scales `|z| ~ 1e2, 1e4, 1e6`,
/// compared against the `1e-6` floor and across the scales. The infimum of
/// a non-conformal map drains toward zero as the grid extends outward; at
/// any fixed point `Im h_d(z)/Im z` converges in the depth, so only the
/// outward trend separates the catalog.
///
/// The verdict requires the probes to agree; otherwise `Undetermined`.
pub fn conformality_at_infinity(h: &KoenigsApprox, cfg: &Config) -> Result<ConformalityVerdict> {
    // Probe (i): angular-derivative ladder.
    let ladder = [1e2, 1e3, 1e4, 1e5, 1e6];
    let qs = par::map_collect(ladder.to_vec(), |y| -> Result<Complex64> {
        let z = UpperHalfPoint::new(0.0, y).unwrap();
        let hz = h.evaluate(&z, cfg)?;
        Ok(hz / Complex64::new(0.0, y))
    });
    let mut q = Vec::with_capacity(ladder.len());
    for v in qs {
        q.push(v?);
    }
    let mags: Vec<f64> = q.iter().map(|v| v.norm()).collect();
    let qmax = mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let qmin = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    let stable_i = qmin > 1e-6 && (qmax - qmin) <= 0.05 * qmax;
    let declining_i = mags.windows(2).all(|w| w[1] < w[0])
        && (mags[0] / mags[mags.len() - 1] >= 1.5 || qmin <= 1e-6);

    // Probe (ii): cone rows at increasing scale.
    let scales = [1e2, 1e4, 1e6];
    let row_min = |y: f64| -> Result<f64> {
        let row: Vec<UpperHalfPoint> = [0.0, y, -y]
            .iter()
            .map(|&x| UpperHalfPoint::new(x, y).unwrap())
            .collect();
        let vals = par::map_collect(row, |z| -> Result<f64> {
            let hz = h.evaluate(&z, cfg)?;
            Ok(hz.im / z.im())
        });
        let mut inf = f64::INFINITY;
        for v in vals {
            inf = inf.min(v?);
        }
        Ok(inf)
    };
    let m: Vec<f64> = {
        let mut m = Vec::new();
        for &y in &scales {
            m.push(row_min(y)?);
        }
        m
    };
    let stable_ii = m[2] > 1e-6 && m[2] >= 0.9 * m[0];
    let declining_ii = m[2] <= 1e-6 || (m[2] < m[1] && m[1] < m[0] && m[2] <= 0.85 * m[0]);

    if stable_i && stable_ii {
        // The farthest ladder point is the best angular-limit estimate.
        let far = q[q.len() - 1];
        return Ok(ConformalityVerdict::Conformal {
            derivative_re: far.re,
            derivative_im: far.im,
        });
    }
    if declining_i && declining_ii {
        return Ok(ConformalityVerdict::NotConformal);
    }
    Ok(ConformalityVerdict::Undetermined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::FiniteMeasure;

    fn cfg() -> Config {
        Config::default()
    }

    fn grid() -> Vec<UpperHalfPoint> {
        let mut g = Vec::new();
        for &x in &[-1.0, 0.0, 1.0] {
            for &y in &[0.5, 1.0, 2.0] {
                g.push(UpperHalfPoint::new(x, y).unwrap());
            }
        }
        g
    }

    #[test]
    fn valiron_is_identity_for_doubling() {
        let f = HerglotzTriplet::affine(2.0, 0.0).unwrap();
        let h = valiron_koenigs(&f, 30, &cfg()).unwrap();
        for z in grid() {
            let hz = h.evaluate(&z, &cfg()).unwrap();
            assert!((hz - z.as_complex()).norm() < 1e-12, "h({z}) = {hz}");
        }
        assert!(h.abel_residual(&grid(), &cfg()).unwrap() < 1e-12);
    }

    #[test]
    fn valiron_for_shifted_doubling() {
        // f(z) = 2z + 1: h(z) = (z+1)/sqrt(2) and the residual vanishes
        // geometrically in the depth.
        let f = HerglotzTriplet::affine(2.0, 1.0).unwrap();
        let h = valiron_koenigs(&f, 40, &cfg()).unwrap();
        let z = UpperHalfPoint::i();
        let hz = h.evaluate(&z, &cfg()).unwrap();
        let expect = Complex64::new(1.0, 1.0) / 2.0_f64.sqrt();
        assert!((hz - expect).norm() < 1e-8, "h(i) = {hz}, expected {expect}");
        assert!(h.abel_residual(&grid(), &cfg()).unwrap() < 1e-8);
    }

    #[test]
    fn valiron_maps_into_the_half_plane() {
        let f =
            HerglotzTriplet::new(2.0, 0.0, FiniteMeasure::from_atoms(&[(1.0, 0.5)]).unwrap())
                .unwrap();
        let h = valiron_koenigs(&f, 60, &cfg()).unwrap();
        for z in grid() {
            assert!(h.evaluate(&z, &cfg()).unwrap().im > 0.0);
        }
    }

    #[test]
    fn pommerenke_for_translation() {
        // f(z) = z + 1 anchored at i: h = id, zero Abel residual.
        let f = HerglotzTriplet::affine(1.0, 1.0).unwrap();
        let h = pommerenke_koenigs(&f, &UpperHalfPoint::i(), 500, &cfg()).unwrap();
        let z = UpperHalfPoint::new(0.25, 2.0).unwrap();
        let hz = h.evaluate(&z, &cfg()).unwrap();
        assert!((hz - z.as_complex()).norm() < 1e-12);
        assert!(h.abel_residual(&grid(), &cfg()).unwrap() < 1e-12);
    }

    #[test]
    fn pommerenke_rejects_zero_step() {
        // f(z) = z - 1/z has zero hyperbolic step.
        let f = HerglotzTriplet::new(1.0, 0.0, FiniteMeasure::from_atoms(&[(0.0, 1.0)]).unwrap())
            .unwrap();
        let r = pommerenke_koenigs(&f, &UpperHalfPoint::i(), 5_000, &cfg());
        assert!(matches!(r, Err(Error::DriftZero(_))), "got {r:?}");
    }

    #[test]
    fn abel_residual_decreases_with_depth() {
        let f = HerglotzTriplet::affine(2.0, 1.0).unwrap();
        let h = valiron_koenigs(&f, 40, &cfg()).unwrap();
        let r20 = h.abel_residual_at(&grid(), 20, &cfg()).unwrap();
        let r40 = h.abel_residual_at(&grid(), 40, &cfg()).unwrap();
        assert!(r40 <= r20 * 1.1, "residual must not grow: {r20} -> {r40}");
    }

    #[test]
    fn conformality_of_affine_maps() {
        let f = HerglotzTriplet::affine(2.0, 1.0).unwrap();
        let h = valiron_koenigs(&f, 60, &cfg()).unwrap();
        match conformality_at_infinity(&h, &cfg()).unwrap() {
            ConformalityVerdict::Conformal {
                derivative_re,
                derivative_im,
            } => {
                // lim h(w)/w = 1/sqrt(2).
                assert!((derivative_re - 1.0 / 2.0_f64.sqrt()).abs() < 1e-3);
                assert!(derivative_im.abs() < 1e-3);
            }
            other => panic!("expected Conformal, got {other:?}"),
        }
    }

    #[test]
    fn distance_defect_values() {
        // h = id for f(z) = 2z: defect 0.
        let f = HerglotzTriplet::affine(2.0, 0.0).unwrap();
        let h = valiron_koenigs(&f, 30, &cfg()).unwrap();
        for z in grid() {
            assert!(h.distance_defect(&z, &cfg()).unwrap().abs() < 1e-10);
        }
    }
}
