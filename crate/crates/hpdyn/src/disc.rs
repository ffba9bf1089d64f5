//! Cayley conjugation to the unit disc, disc-side rate translations, and the
//! Hardy/Bergman composition-operator norm-growth sandwiches.
//!
//! Disc iterates are always computed through half-plane orbits
//! (`g^n = S^{-1} o f^n o S`): near-boundary disc arithmetic loses precision
//! exactly where the rates live. `1 - |g^n(z)|` comes from the identity
//! `Im f^n(w) = (1 - |g^n(z)|^2) / |g^n(z) - tau|^2`, which avoids the
//! subtraction of near-unit moduli.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{cayley_to_disc, cayley_to_halfplane, DiscBoundaryPoint, DiscPoint};
use crate::herglotz::HerglotzTriplet;
use crate::limits::{detect_limit, LimitVerdict};
use crate::orbit::{self, Orbit, OrbitSample};

/// The conjugated self-map `g = S^{-1} o f o S` of the unit disc, with
/// Denjoy-Wolff point `tau`.
#[derive(Debug, Clone)]
pub struct DiscMap {
    f: HerglotzTriplet,
    tau: DiscBoundaryPoint,
}

/// Builds the conjugation and verifies the round-trip identity
/// `S(g(z)) = f(S(z))` on a grid.
pub fn conjugate(f: &HerglotzTriplet, tau: DiscBoundaryPoint, cfg: &Config) -> Result<DiscMap> {
    let map = DiscMap {
        f: f.clone(),
        tau,
    };
    for &(x, y) in &[(0.0, 0.0), (0.3, 0.2), (-0.5, 0.1), (0.0, -0.6), (0.7, -0.1)] {
        let z = DiscPoint::new(x, y)?;
        let g = map.apply(&z, cfg)?;
        let lhs = cayley_to_halfplane(&g, tau).as_complex();
        let rhs = f
            .evaluate(&cayley_to_halfplane(&z, tau), cfg)?
            .as_complex();
        if (lhs - rhs).norm() > 1e-10 * (1.0 + rhs.norm()) {
            return Err(Error::Contradiction(format!(
                "conjugation round-trip failed at {x}+{y}i: {lhs} vs {rhs}"
            )));
        }
    }
    Ok(map)
}

impl DiscMap {
    pub fn tau(&self) -> DiscBoundaryPoint {
        self.tau
    }

    pub fn map(&self) -> &HerglotzTriplet {
        &self.f
    }

    /// One application `g(z) = S^{-1}(f(S(z)))`.
    pub fn apply(&self, z: &DiscPoint, cfg: &Config) -> Result<DiscPoint> {
        let w = cayley_to_halfplane(z, self.tau);
        let fw = self.f.evaluate(&w, cfg)?;
        Ok(cayley_to_disc(&fw, self.tau))
    }

    /// The half-plane orbit of `S(z)`, from which every disc-side quantity
    /// is derived.
    pub fn halfplane_orbit(&self, z: &DiscPoint, n: usize, cfg: &Config) -> Result<Orbit> {
        let w0 = cayley_to_halfplane(z, self.tau);
        orbit::iterate(&self.f, &w0, n, cfg)
    }
}

/// Disc-side gap quantities of one iterate, all computed from half-plane data.
#[derive(Debug, Clone, Copy)]
pub struct DiscGap {
    /// `log |g^n(z) - tau| = log 2 - log |w_n + i|`.
    pub log_dist_to_tau: f64,
    /// `log (1 - |g^n(z)|)`.
    pub log_one_minus_mod: f64,
    /// `|g^n(z)|`.
    pub modulus: f64,
}

/// `log|w + i|` and the gaps, stable in both orbit regimes.
pub fn disc_gap(sample: &OrbitSample) -> DiscGap {
    let (log_wpi, log_wmi) = match sample.z {
        Some((x, y)) => {
            let w = Complex64::new(x, y);
            let i = Complex64::new(0.0, 1.0);
            ((w + i).norm().ln(), (w - i).norm().ln())
        }
        None => {
            // |w +- i| = |w| |1 +- i e^{-log|w|} e^{-i arg}|
            let u = (-sample.log_abs).exp();
            let rot = Complex64::from_polar(u, -sample.arg);
            let i = Complex64::new(0.0, 1.0);
            (
                sample.log_abs + (Complex64::new(1.0, 0.0) + i * rot).norm().ln(),
                sample.log_abs + (Complex64::new(1.0, 0.0) - i * rot).norm().ln(),
            )
        }
    };
    let modulus = (log_wmi - log_wpi).exp();
    // 1 - |g|^2 = 4 y / |w + i|^2 and 1 - |g| = (1 - |g|^2)/(1 + |g|).
    let log_one_minus_mod =
        (4.0_f64).ln() + sample.log_im - 2.0 * log_wpi - (1.0 + modulus).ln();
    DiscGap {
        log_dist_to_tau: (2.0_f64).ln() - log_wpi,
        log_one_minus_mod,
        modulus,
    }
}

/// The sequences of the disc-side rate translation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscRateSeries {
    /// `|g^n(z) - tau| * |f^n(w)|`, which tends to 2 for every non-elliptic map.
    pub product: Vec<f64>,
    /// Classification-appropriate normalized gap `c_n |g^n(z) - tau|`
    /// (`c_n = alpha^n` hyperbolic, `n` parabolic).
    pub normalized_dist: Vec<f64>,
    /// Normalized `c_n (1 - |g^n(z)|)` (`alpha^n` resp. `n^2`).
    pub normalized_gap: Vec<f64>,
    /// Verdict from the normalized gap sequence.
    pub verdict: GapVerdict,
}

/// Disc-side extremality verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GapVerdict {
    /// Normalized gap converges in `(0, inf)`: extremal rate.
    FinitePositive(f64),
    /// Normalized gap drains to 0 or grows without bound: not extremal.
    Degenerate,
    Undetermined,
}

/// Computes the disc-side sequences for a map of known class along the orbit
/// of `S(z)`. `hyperbolic` selects the normalizers.
pub fn disc_rate_products(
    g: &DiscMap,
    z: &DiscPoint,
    n: usize,
    cfg: &Config,
) -> Result<DiscRateSeries> {
    let orbit = g.halfplane_orbit(z, n, cfg)?;
    disc_rate_products_from_orbit(&orbit, cfg)
}

/// Same, reusing a precomputed half-plane orbit of `S(z)`.
pub fn disc_rate_products_from_orbit(orbit: &Orbit, cfg: &Config) -> Result<DiscRateSeries> {
    let n = orbit.len();
    if n < 32 {
        return Err(Error::Undetermined("orbit too short for disc-side rates".into()));
    }
    let hyperbolic = orbit.alpha() > 1.0;
    let log_alpha = orbit.alpha().ln();
    let mut product = Vec::with_capacity(n);
    let mut normalized_dist = Vec::with_capacity(n);
    let mut normalized_gap = Vec::with_capacity(n);
    let mut log_gap_norm = Vec::with_capacity(n);
    for k in 1..=n {
        let s = orbit.sample(k);
        let gap = disc_gap(s);
        product.push((gap.log_dist_to_tau + s.log_abs).exp());
        let (log_cn_dist, log_cn_gap) = if hyperbolic {
            (k as f64 * log_alpha, k as f64 * log_alpha)
        } else {
            ((k as f64).ln(), 2.0 * (k as f64).ln())
        };
        normalized_dist.push((log_cn_dist + gap.log_dist_to_tau).exp());
        let lg = log_cn_gap + gap.log_one_minus_mod;
        normalized_gap.push(lg.exp());
        log_gap_norm.push(lg);
    }
    // Detect on the log of the normalized gap: a finite positive limit shows
    // up as a finite log, degeneracy as divergence in either direction.
    let verdict = match detect_limit(&log_gap_norm, &cfg.limit) {
        LimitVerdict::Finite { value, .. } => GapVerdict::FinitePositive(value.exp()),
        LimitVerdict::Diverging { .. } => GapVerdict::Degenerate,
        LimitVerdict::Undetermined { .. } => GapVerdict::Undetermined,
    };
    Ok(DiscRateSeries {
        product,
        normalized_dist,
        normalized_gap,
        verdict,
    })
}

/// Hardy-space norm bounds for a single composition operator:
/// `(1/(1-m^2))^{1/p} <= ||C_g||_{H^p} <= ((1+m)/(1-m))^{1/p}` with `m = |g(0)|`.
pub fn hardy_norm_bounds(g0_modulus: f64, p: f64) -> Result<(f64, f64)> {
    norm_bounds(g0_modulus, p, 1.0)
}

/// Bergman-space norm bounds: the same expressions with exponent `2/p`.
pub fn bergman_norm_bounds(g0_modulus: f64, p: f64) -> Result<(f64, f64)> {
    norm_bounds(g0_modulus, p, 2.0)
}

fn norm_bounds(m: f64, p: f64, exponent_scale: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "|g(0)| must lie in [0, 1), got {m}"
        )));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must be at least 1, got {p}")));
    }
    let e = exponent_scale / p;
    let lower = (1.0 / (1.0 - m * m)).powf(e);
    let upper = ((1.0 + m) / (1.0 - m)).powf(e);
    Ok((lower, upper))
}

/// Function space for norm-growth reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Hardy,
    Bergman,
}

/// Norm-growth sandwich for the iterates `C_{g^n}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormBoundReport {
    pub space: Space,
    pub p: f64,
    /// `(lower, upper)` bounds for `||C_{g^n}||^p`, indexed by `n - 1`.
    pub bounds: Vec<(f64, f64)>,
    /// The same bounds divided by the class normalizer
    /// (`alpha^n` / `alpha^{2n}` hyperbolic, `n^2` / `n^4` parabolic).
    pub normalized: Vec<(f64, f64)>,
    pub verdict: GapVerdict,
}

/// Computes `m_n = |g^n(0)|`, the norm-bound pairs, and the normalized
/// sandwich along the orbit of `0` (i.e. of `w_0 = i`).
pub fn norm_growth_report(
    f: &HerglotzTriplet,
    tau: DiscBoundaryPoint,
    p: f64,
    space: Space,
    n: usize,
    cfg: &Config,
) -> Result<NormBoundReport> {
    let g = conjugate(f, tau, cfg)?;
    let orbit = g.halfplane_orbit(&DiscPoint::origin(), n, cfg)?;
    norm_growth_report_from_orbit(&orbit, p, space, cfg)
}

/// Same, reusing a precomputed orbit of `w_0 = S(0) = i`.
pub fn norm_growth_report_from_orbit(
    orbit: &Orbit,
    p: f64,
    space: Space,
    cfg: &Config,
) -> Result<NormBoundReport> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must be at least 1, got {p}")));
    }
    let n = orbit.len();
    if n < 32 {
        return Err(Error::Undetermined("orbit too short for norm growth".into()));
    }
    let hyperbolic = orbit.alpha() > 1.0;
    let log_alpha = orbit.alpha().ln();
    // ||C||^p bounds carry exponent 1 (Hardy) or 2 (Bergman).
    let e = match space {
        Space::Hardy => 1.0,
        Space::Bergman => 2.0,
    };
    let mut bounds = Vec::with_capacity(n);
    let mut normalized = Vec::with_capacity(n);
    let mut log_norm_lower = Vec::with_capacity(n);
    for k in 1..=n {
        let gap = disc_gap(orbit.sample(k));
        let m = gap.modulus;
        // log(1/(1-m^2)) = -log((1-m)(1+m)); log((1+m)/(1-m)).
        let log_lower = -(gap.log_one_minus_mod + (1.0 + m).ln());
        let log_upper = (1.0 + m).ln() - gap.log_one_minus_mod;
        bounds.push(((e * log_lower).exp(), (e * log_upper).exp()));
        let log_cn = if hyperbolic {
            e * k as f64 * log_alpha
        } else {
            e * 2.0 * (k as f64).ln()
        };
        normalized.push((
            (e * log_lower - log_cn).exp(),
            (e * log_upper - log_cn).exp(),
        ));
        log_norm_lower.push(e * log_lower - log_cn);
    }
    let verdict = match detect_limit(&log_norm_lower, &cfg.limit) {
        LimitVerdict::Finite { value, .. } => GapVerdict::FinitePositive(value.exp()),
        LimitVerdict::Diverging { .. } => GapVerdict::Degenerate,
        LimitVerdict::Undetermined { .. } => GapVerdict::Undetermined,
    };
    Ok(NormBoundReport {
        space,
        p,
        bounds,
        normalized,
        verdict,
    })
}
