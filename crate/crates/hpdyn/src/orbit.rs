//! Orbit iteration with log-scaled rate accumulators, the hyperbolic-step /
//! drift / shift classifiers, and the rate limits `L(z)`.
//!
//! Rate products are accumulated in log space through the telescoping identity
//! `y_{n+1} / (alpha^{n+1} y_0) = prod_k (1 + (1/alpha) int (1+t^2)/|t - z_k|^2 dmu)`;
//! dividing huge magnitudes would overflow long before the ratios converge.
//! Once `|z|` passes `1e150` the iteration switches to `(log|z|, arg z)`
//! coordinates: squared moduli overflow beyond that point, and the Herglotz
//! integral reduces to its far-tail part with remainder below double noise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance_complex, UpperHalfPoint};
use crate::herglotz::HerglotzTriplet;
use crate::limits::{detect_limit, LimitVerdict, WindowStats};
use crate::measure::{DensityFamily, Side, TAIL_SPLIT};
use crate::quadrature::{self, QuadConfig};

/// `|z|` beyond which iteration tracks `(log|z|, arg z)` instead of `z`.
const LOG_REGIME_SWITCH: f64 = 1e150;

/// Drift magnitudes below this count as zero (Pommerenke's `b = 0`).
pub const DRIFT_ZERO_THRESHOLD: f64 = 1e-8;

/// One orbit point. `z` stays populated while the Cartesian coordinate is
/// representable; the log-polar coordinates are always populated.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrbitSample {
    pub z: Option<(f64, f64)>,
    pub log_abs: f64,
    pub arg: f64,
    pub log_im: f64,
}

impl OrbitSample {
    fn from_complex(z: Complex64) -> Self {
        Self {
            z: Some((z.re, z.im)),
            log_abs: z.norm().ln(),
            arg: z.arg(),
            log_im: z.im.ln(),
        }
    }

    fn from_log(log_abs: f64, arg: f64) -> Self {
        Self {
            z: None,
            log_abs,
            arg,
            log_im: log_abs + arg.sin().ln(),
        }
    }

    /// `Re z / Im z = cot(arg z)`.
    pub fn xy_ratio(&self) -> f64 {
        match self.z {
            Some((x, y)) => x / y,
            None => self.arg.cos() / self.arg.sin(),
        }
    }

    /// `d_H(i, z)` through the stable formula, valid in both regimes.
    pub fn dist_to_i(&self) -> f64 {
        match self.z {
            Some((x, y)) => {
                hyperbolic_distance_complex(Complex64::new(0.0, 1.0), Complex64::new(x, y))
            }
            None => {
                let i = Complex64::new(0.0, 1.0);
                let u = (-self.log_abs).exp();
                // z - i = z (1 - i e^{-log|z|} e^{-i arg}), likewise conj(z) - i.
                let rho_num = (Complex64::new(1.0, 0.0)
                    - i * u * Complex64::from_polar(1.0, -self.arg))
                .norm();
                let rho_den = (Complex64::new(1.0, 0.0)
                    - i * u * Complex64::from_polar(1.0, self.arg))
                .norm();
                let rho = rho_num / rho_den;
                0.5 * (2.0 * (1.0 + rho).ln() + 2.0 * (self.log_abs + rho_den.ln())
                    - (4.0_f64).ln()
                    - self.log_im)
            }
        }
    }
}

/// An iterate trajectory `z_0, f(z_0), ..., f^n(z_0)` with accumulators.
#[derive(Debug, Clone)]
pub struct Orbit {
    alpha: f64,
    samples: Vec<OrbitSample>,
    /// `[k] = log(y_k / (alpha^k y_0))`, accumulated in log space.
    log_y_ratio: Vec<f64>,
    /// `[k] = d_H(z_{k+1}, z_k)`.
    step_distances: Vec<f64>,
}

impl Orbit {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of iterations (`samples` holds one more point).
    pub fn len(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn samples(&self) -> &[OrbitSample] {
        &self.samples
    }

    pub fn sample(&self, k: usize) -> &OrbitSample {
        &self.samples[k]
    }

    pub fn log_y_ratio(&self) -> &[f64] {
        &self.log_y_ratio
    }

    pub fn step_distances(&self) -> &[f64] {
        &self.step_distances
    }

    /// `Im z_k`; `inf` if it left the representable range.
    pub fn y(&self, k: usize) -> f64 {
        match self.samples[k].z {
            Some((_, y)) => y,
            None => self.samples[k].log_im.exp(),
        }
    }

    pub fn arg_seq(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.arg).collect()
    }

    pub fn xy_ratio_seq(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.xy_ratio()).collect()
    }
}

/// Per-step state of the large-`|z|` recurrence `z'/z = alpha + ...`.
struct LogRegime {
    /// `beta - sum_i m_i t_i - sum(light first moments)`: the coefficient of
    /// `1/z` up to the dropped `O(1/z^2)` remainder.
    constant_term: f64,
    /// Total Cauchy mass: contributes exactly `i c` to the integral.
    cauchy_mass: f64,
    /// Heavy-tailed components needing the far-tail integral.
    heavy: Vec<usize>,
}

impl LogRegime {
    fn new(f: &HerglotzTriplet) -> Self {
        let mut constant_term = f.beta();
        let mut cauchy_mass = 0.0;
        let mut heavy = Vec::new();
        for a in f.mu().atoms() {
            constant_term -= a.mass * a.location;
        }
        for (i, d) in f.mu().densities().iter().enumerate() {
            match d.family() {
                DensityFamily::Cauchy => cauchy_mass += d.mass(),
                DensityFamily::Gaussian => {}
                DensityFamily::CompactUniform { a, b } => {
                    constant_term -= d.mass() * 0.5 * (a + b);
                }
                DensityFamily::OneSidedQuadratic | DensityFamily::LogTail { .. } => {
                    heavy.push(i);
                }
            }
        }
        Self {
            constant_term,
            cauchy_mass,
            heavy,
        }
    }

    /// `z'/z` for `z = e^{log_abs + i arg}` beyond the switch.
    fn ratio(
        &self,
        f: &HerglotzTriplet,
        log_abs: f64,
        arg: f64,
        quad: &QuadConfig,
    ) -> Result<Complex64> {
        let inv_z = Complex64::from_polar((-log_abs).exp(), -arg);
        let mut r = Complex64::new(f.alpha(), 0.0)
            + (self.constant_term + Complex64::new(0.0, self.cauchy_mass)) * inv_z;
        for &i in &self.heavy {
            let d = &f.mu().densities()[i];
            r += tail_over_z(d, log_abs, arg, quad)?;
        }
        Ok(r)
    }
}

/// Far-tail part of `H(z)/z` for one heavy component:
/// `int_{|t| > T} t/(t-z) dmu(t)` with `t/(t-z) = 1/(1 - (z/t))`,
/// computed in `v = ln|t|`. The dropped `1/(tz)` factor and the inner part
/// `|t| <= T` are below `1e-100` relative here.
fn tail_over_z(
    d: &crate::measure::DensityComponent,
    log_abs: f64,
    arg: f64,
    quad: &QuadConfig,
) -> Result<Complex64> {
    let side = |positive: bool| -> Result<Complex64> {
        let w = |v: f64| {
            let weight = d.log_weight(v, positive);
            if weight == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let s = log_abs - v;
            // 1/(1 -+ e^{s + i arg}); saturates cleanly when e^s overflows.
            let q = if s > 700.0 {
                return Complex64::new(0.0, 0.0);
            } else {
                Complex64::from_polar(s.exp(), arg)
            };
            let denom = if positive {
                Complex64::new(1.0, 0.0) - q
            } else {
                Complex64::new(1.0, 0.0) + q
            };
            weight / denom
        };
        quadrature::integrate_semiline_log(w, TAIL_SPLIT, &[log_abs], quad)
    };
    let charges_positive = match d.family() {
        DensityFamily::OneSidedQuadratic => (true, false),
        DensityFamily::LogTail { side: Side::Both } => (true, true),
        DensityFamily::LogTail {
            side: Side::Positive,
        } => (true, false),
        DensityFamily::LogTail {
            side: Side::Negative,
        } => (false, true),
        _ => (false, false),
    };
    let mut total = Complex64::new(0.0, 0.0);
    if charges_positive.0 {
        total += side(true)?;
    }
    if charges_positive.1 {
        total += side(false)?;
    }
    Ok(total)
}

/// Iterates `f` from `z0` for `n` steps.
///
/// Requires `alpha >= 1`; orbits of elliptic-type triplets do not converge to
/// the boundary and none of the rate machinery applies.
pub fn iterate(f: &HerglotzTriplet, z0: &UpperHalfPoint, n: usize, cfg: &Config) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::Domain("orbit length must be at least 1".into()));
    }
    if !f.is_non_elliptic() {
        return Err(Error::Classification(format!(
            "orbit iteration requires alpha >= 1, got alpha = {}",
            f.alpha()
        )));
    }
    let alpha = f.alpha();
    let log_alpha = alpha.ln();
    let log_regime = LogRegime::new(f);

    let mut samples = Vec::with_capacity(n + 1);
    let mut log_y_ratio = Vec::with_capacity(n + 1);
    let mut step_distances = Vec::with_capacity(n);
    samples.push(OrbitSample::from_complex(z0.as_complex()));
    log_y_ratio.push(0.0);

    for _ in 0..n {
        let prev = *samples.last().unwrap();
        let next = match prev.z {
            Some((x, y)) if (x * x + y * y).sqrt() <= LOG_REGIME_SWITCH => {
                let z = Complex64::new(x, y);
                let w = f.eval_complex_stepping(z, &cfg.eval_quad)?;
                step_distances.push(hyperbolic_distance_complex(z, w));
                log_y_ratio.push(log_y_ratio.last().unwrap() + (w.im / y).ln() - log_alpha);
                if w.norm() <= LOG_REGIME_SWITCH {
                    OrbitSample::from_complex(w)
                } else {
                    // Still representable; keep the Cartesian value too.
                    let mut s = OrbitSample::from_complex(w);
                    s.z = Some((w.re, w.im));
                    s
                }
            }
            _ => {
                let r = log_regime.ratio(f, prev.log_abs, prev.arg, &cfg.eval_quad)?;
                let log_abs = prev.log_abs + r.norm().ln();
                let arg = prev.arg + r.arg();
                if !(arg > 0.0 && arg < std::f64::consts::PI) {
                    return Err(Error::Classification(format!(
                        "orbit left the upper half-plane numerically (arg = {arg})"
                    )));
                }
                let next = OrbitSample::from_log(log_abs, arg);
                // d_H(z', z) from the ratio alone: the |z|^2 factors cancel.
                let rho_num = (r - Complex64::new(1.0, 0.0)).norm();
                let rho_den = (r - Complex64::from_polar(1.0, -2.0 * prev.arg)).norm();
                let rho = rho_num / rho_den;
                let d = 0.5
                    * (2.0 * (1.0 + rho).ln() + 2.0 * rho_den.ln()
                        - (4.0 * r.norm() * prev.arg.sin() * arg.sin()).ln());
                step_distances.push(d);
                log_y_ratio
                    .push(log_y_ratio.last().unwrap() + next.log_im - prev.log_im - log_alpha);
                next
            }
        };
        samples.push(next);
    }

    Ok(Orbit {
        alpha,
        samples,
        log_y_ratio,
        step_distances,
    })
}

/// Hyperbolic-step verdict for a parabolic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepVerdict {
    Positive(f64),
    Zero,
}

/// Classifies the hyperbolic step from the step-distance tail.
///
/// Positive requires the tail above `1e-6` and stabilized (relative change
/// below `1e-4` over the last 10% of iterates); Zero requires decay below
/// `1e-6` with a decreasing trend. Anything else is `Undetermined`: the
/// classifier prefers that over a guess.
pub fn hyperbolic_step(orbit: &Orbit) -> Result<StepVerdict> {
    if orbit.alpha != 1.0 {
        return Err(Error::Classification(
            "hyperbolic step is defined for parabolic maps (alpha = 1)".into(),
        ));
    }
    let steps = orbit.step_distances();
    if steps.len() < 32 {
        return Err(Error::Undetermined("orbit too short for step detection".into()));
    }
    // Schwarz-Pick: d_H(f^{n+1}, f^n) is non-increasing. The slack covers the
    // noise floor of the stable distance formula, which scales with the value.
    for w in steps.windows(2) {
        if w[1] > w[0] + 1e-12 + 1e-8 * w[0] {
            return Err(Error::Contradiction(format!(
                "step distances must be non-increasing (Schwarz-Pick), got {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let tail = *steps.last().unwrap();
    let window = &steps[steps.len() - steps.len() / 10 - 1..];
    let wmax = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let wmin = window.iter().cloned().fold(f64::INFINITY, f64::min);
    let stabilized = (wmax - wmin) <= 1e-4 * tail.max(f64::MIN_POSITIVE);

    if tail > 1e-6 && stabilized {
        return Ok(StepVerdict::Positive(tail));
    }
    let decreasing = tail < 0.9 * steps[0] || steps[0] == 0.0;
    if tail < 1e-6 && decreasing {
        return Ok(StepVerdict::Zero);
    }
    Err(Error::Undetermined(format!(
        "step tail {tail:.3e} neither stabilized positive nor decayed below 1e-6 at budget {}",
        steps.len()
    )))
}

/// Pommerenke drift coefficient `b = lim (x_{n+1} - x_n) / y_n`.
///
/// Cross-checked against the step verdict: `b = 0` exactly for zero
/// hyperbolic step, so a determinate disagreement is a contradiction.
pub fn drift_coefficient(orbit: &Orbit, cfg: &Config) -> Result<f64> {
    if orbit.alpha != 1.0 {
        return Err(Error::Classification(
            "drift coefficient is defined for parabolic maps (alpha = 1)".into(),
        ));
    }
    let mut seq = Vec::with_capacity(orbit.len());
    for w in orbit.samples().windows(2) {
        match (w[0].z, w[1].z) {
            (Some((x0, y0)), Some((x1, _))) => seq.push((x1 - x0) / y0),
            _ => {
                return Err(Error::Undetermined(
                    "drift detection needs Cartesian iterates".into(),
                ))
            }
        }
    }
    if seq.len() < 32 {
        return Err(Error::Undetermined("orbit too short for drift detection".into()));
    }
    let verdict = detect_limit(&seq, &cfg.limit);
    let b = match verdict {
        LimitVerdict::Finite { value, .. } => value,
        _ => {
            return Err(Error::Undetermined(
                "drift quotient did not stabilize at budget".into(),
            ))
        }
    };
    if let Ok(step) = hyperbolic_step(orbit) {
        let b_zero = b.abs() < DRIFT_ZERO_THRESHOLD;
        match step {
            StepVerdict::Zero if b.abs() > 1e-6 => {
                return Err(Error::Contradiction(format!(
                    "zero hyperbolic step with nonzero drift b = {b}"
                )))
            }
            StepVerdict::Positive(_) if b_zero => {
                return Err(Error::Contradiction(
                    "positive hyperbolic step with vanishing drift".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(b)
}

/// Shift classification: does `Im f^n(z)` stay bounded?
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ShiftClass {
    Finite(f64),
    Infinite,
}

/// Uses Julia monotonicity of `Im`: finite shift when the increments have
/// converged (tail increment below `1e-9` relative), infinite when `Im` has
/// grown by `1e3` or the increment blocks refuse to be summable.
pub fn shift_classification(orbit: &Orbit) -> Result<ShiftClass> {
    let n = orbit.len();
    if n < 32 {
        return Err(Error::Undetermined("orbit too short for shift detection".into()));
    }
    let log_im_first = orbit.sample(0).log_im;
    let log_im_last = orbit.sample(n).log_im;
    if log_im_last - log_im_first > 1e3_f64.ln() {
        return Ok(ShiftClass::Infinite);
    }
    // All y are representable below the 1e3 growth cap.
    let y_last = orbit.y(n);
    let k = (n / 100).max(8).min(n / 2);
    let tail_increment = (y_last - orbit.y(n - k)) / k as f64;
    if tail_increment <= 1e-9 * y_last {
        return Ok(ShiftClass::Finite(y_last));
    }
    // Dyadic block sums of the increments: harmonic-type (non-summable)
    // growth keeps the ratio near 1, summable tails at or below 1/2.
    let s_last = y_last - orbit.y(n / 2);
    let s_prev = orbit.y(n / 2) - orbit.y(n / 4);
    if s_last >= 0.7 * s_prev && s_last > 1e-6 * orbit.y(0) {
        return Ok(ShiftClass::Infinite);
    }
    Err(Error::Undetermined(format!(
        "imaginary parts neither converged (tail increment {tail_increment:.3e}) nor grew at budget {n}"
    )))
}

/// Complex rate limit `L(z) = lim f^n(z) / alpha^n` for hyperbolic maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ComplexLimit {
    Finite {
        re: f64,
        im: f64,
        evidence: WindowStats,
    },
    Diverging {
        growth_exponent: f64,
        evidence: WindowStats,
    },
    Undetermined {
        evidence: WindowStats,
    },
}

impl ComplexLimit {
    pub fn is_finite(&self) -> bool {
        matches!(self, ComplexLimit::Finite { .. })
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self, ComplexLimit::Diverging { .. })
    }

    pub fn value(&self) -> Option<Complex64> {
        match self {
            ComplexLimit::Finite { re, im, .. } => Some(Complex64::new(*re, *im)),
            _ => None,
        }
    }
}

/// `L(z)` from the factorization `f^n(z)/alpha^n = (y_n / alpha^n)(x_n/y_n + i)`:
/// the log-ratio accumulator must converge and the angle must stabilize.
pub fn hyperbolic_rate_limit(orbit: &Orbit, cfg: &Config) -> Result<ComplexLimit> {
    if orbit.alpha <= 1.0 {
        return Err(Error::Classification(
            "hyperbolic rate limit requires alpha > 1".into(),
        ));
    }
    let u = detect_limit(orbit.log_y_ratio(), &cfg.limit);
    match u {
        LimitVerdict::Finite { value, evidence } => {
            let s = detect_limit(&orbit.xy_ratio_seq(), &cfg.limit);
            match s {
                LimitVerdict::Finite { value: slope, .. } => {
                    let y0 = orbit.y(0);
                    let scale = y0 * value.exp();
                    Ok(ComplexLimit::Finite {
                        re: scale * slope,
                        im: scale,
                        evidence,
                    })
                }
                _ => Ok(ComplexLimit::Undetermined { evidence }),
            }
        }
        LimitVerdict::Diverging {
            direction,
            growth_exponent,
            evidence,
        } => {
            if direction > 0.0 {
                Ok(ComplexLimit::Diverging {
                    growth_exponent,
                    evidence,
                })
            } else {
                // log(y_n/alpha^n) is non-decreasing for alpha >= 1; a downward
                // drift can only be numerical noise.
                Err(Error::Contradiction(
                    "log-ratio accumulator decreasing for a hyperbolic map".into(),
                ))
            }
        }
        LimitVerdict::Undetermined { evidence } => Ok(ComplexLimit::Undetermined { evidence }),
    }
}

/// Real rate limit for parabolic positive-step maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum RealLimit {
    Finite {
        value: f64,
        evidence: WindowStats,
    },
    Diverging {
        growth_exponent: f64,
        evidence: WindowStats,
    },
    Undetermined {
        evidence: WindowStats,
    },
}

impl RealLimit {
    pub fn is_finite(&self) -> bool {
        matches!(self, RealLimit::Finite { .. })
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self, RealLimit::Diverging { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            RealLimit::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// `L = lim f^n(z)/n`, real and nonzero exactly for finite shift. The verdict
/// is cross-checked against [`shift_classification`]; a determinate
/// disagreement is a contradiction, never silently reconciled.
pub fn parabolic_rate_limit(orbit: &Orbit, cfg: &Config) -> Result<RealLimit> {
    if orbit.alpha != 1.0 {
        return Err(Error::Classification(
            "parabolic rate limit requires alpha = 1".into(),
        ));
    }
    let n = orbit.len();
    if n < 32 {
        return Err(Error::Undetermined("orbit too short for rate detection".into()));
    }
    let abs_over_n: Vec<f64> = (1..=n)
        .map(|k| (orbit.sample(k).log_abs - (k as f64).ln()).exp())
        .collect();
    let x_over_n: Vec<f64> = (1..=n)
        .map(|k| match orbit.sample(k).z {
            Some((x, _)) => x / k as f64,
            None => (orbit.sample(k).log_abs - (k as f64).ln()).exp() * orbit.sample(k).arg.cos(),
        })
        .collect();
    let shift = shift_classification(orbit);
    let div = detect_limit(&abs_over_n, &cfg.limit);
    if let LimitVerdict::Diverging {
        direction,
        growth_exponent,
        evidence,
    } = div
    {
        if direction > 0.0 {
            if matches!(shift, Ok(ShiftClass::Finite(_))) {
                return Err(Error::Contradiction(
                    "diverging |f^n(z)|/n for a finite-shift orbit".into(),
                ));
            }
            return Ok(RealLimit::Diverging {
                growth_exponent,
                evidence,
            });
        }
    }
    match detect_limit(&x_over_n, &cfg.limit) {
        LimitVerdict::Finite { value, evidence } => {
            let y_over_n = orbit.y(n) / n as f64;
            if value.abs() > 1e-9 && y_over_n < 0.1 * value.abs() {
                if matches!(shift, Ok(ShiftClass::Infinite)) {
                    return Err(Error::Contradiction(
                        "finite f^n(z)/n for an infinite-shift orbit".into(),
                    ));
                }
                // x_n/n approaches L only like 1/n; the increment tail
                // x_{k+1} - x_k has the same limit (Stolz-Cesaro) and
                // converges at the map's own rate, so it carries the value.
                let window = n / 4;
                let mut inc = 0.0;
                for k in n - window..n {
                    let (x1, _) = orbit.sample(k + 1).z.unwrap_or((f64::NAN, 0.0));
                    let (x0, _) = orbit.sample(k).z.unwrap_or((f64::NAN, 0.0));
                    inc += x1 - x0;
                }
                let value = inc / window as f64;
                Ok(RealLimit::Finite { value, evidence })
            } else {
                Ok(RealLimit::Undetermined { evidence })
            }
        }
        LimitVerdict::Diverging { evidence, .. } | LimitVerdict::Undetermined { evidence } => {
            Ok(RealLimit::Undetermined { evidence })
        }
    }
}

/// Limit angle of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AngleVerdict {
    /// `theta(z)` strictly inside `(0, pi)`: non-tangential convergence.
    Interior(f64),
    /// The limit landed within `1e-4` of `{0, pi}`.
    Tangential,
}

/// Windowed limit of `arg f^n(z)`.
pub fn orbit_angle(orbit: &Orbit, cfg: &Config) -> Result<AngleVerdict> {
    let args = orbit.arg_seq();
    if args.len() < 32 {
        return Err(Error::Undetermined("orbit too short for angle detection".into()));
    }
    match detect_limit(&args, &cfg.limit) {
        LimitVerdict::Finite { value, .. } => {
            if value < 1e-4 || std::f64::consts::PI - value < 1e-4 {
                Ok(AngleVerdict::Tangential)
            } else {
                Ok(AngleVerdict::Interior(value))
            }
        }
        // arg is bounded; a monotone drift toward an endpoint is tangential
        // convergence that has not flattened yet within the window tolerance.
        LimitVerdict::Diverging { evidence, .. } => {
            let last = evidence.last;
            if last < 1e-2 || std::f64::consts::PI - last < 1e-2 {
                Ok(AngleVerdict::Tangential)
            } else {
                Err(Error::Undetermined("orbit angle still drifting at budget".into()))
            }
        }
        LimitVerdict::Undetermined { .. } => {
            Err(Error::Undetermined("orbit angle did not stabilize".into()))
        }
    }
}
