//! Finite positive Borel measures on the real line, represented as point
//! atoms plus parametric density components.
//!
//! Whether the `|t|` and `log(1+|t|)` moments are finite is decided
//! analytically per family; quadrature only ever supplies finite values.
//! No cutoff can prove divergence.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadConfig};

/// Split point between the compactified inner integral and the logarithmic
/// far-tail integrals of unbounded densities.
pub(crate) const TAIL_SPLIT: f64 = 1e6;

/// Effective support half-width of the standard Gaussian in f64.
const GAUSSIAN_SUPPORT: f64 = 40.0;

/// Which half-lines a density charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Both,
    Positive,
    Negative,
}

/// A finite or analytically-divergent moment value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn is_finite(&self) -> bool {
        matches!(self, Moment::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(*v),
            Moment::Infinite => None,
        }
    }
}

/// `int_0^inf dt / ((1+t) ln^2(e+t))`, the half-line normalizer of the
/// logarithmic-tail family.
static LOG_TAIL_HALF_NORM: Lazy<f64> = Lazy::new(|| {
    let cfg = QuadConfig {
        rel_tol: 1e-12,
        ..QuadConfig::default()
    };
    let inner = quadrature::integrate_tan_range(
        |t| Complex64::new(log_tail_shape(t), 0.0),
        0.0,
        TAIL_SPLIT,
        &[1.0, 100.0],
        &cfg,
    )
    .expect("log-tail normalizer inner integral");
    let tail = quadrature::integrate_semiline_log(
        |v| Complex64::new(log_tail_shape_log(v), 0.0),
        TAIL_SPLIT,
        &[],
        &cfg,
    )
    .expect("log-tail normalizer tail integral");
    inner.re + tail.re
});

/// Unnormalized log-tail shape `1 / ((1+|t|) ln^2(e+|t|))`.
fn log_tail_shape(t: f64) -> f64 {
    let a = t.abs();
    let l = (std::f64::consts::E + a).ln();
    1.0 / ((1.0 + a) * l * l)
}

/// `shape(e^v) * e^v`, stable for any `v`.
fn log_tail_shape_log(v: f64) -> f64 {
    // ln(e + e^v) = v + ln(1 + e^{1-v})
    let l = v + f64::exp(1.0 - v).ln_1p();
    1.0 / ((1.0 + (-v).exp()) * l * l)
}

/// One parametric density family. The `scale` is the component's total mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DensityFamily {
    /// `c / (pi (1 + t^2))`: infinite `|t|`-moment, finite log-moment.
    Cauchy,
    /// `c 1_{t>0} / (1+t)^2`: infinite `|t|`-moment, finite log-moment.
    OneSidedQuadratic,
    /// `c / (Z (1+|t|) ln^2(e+|t|))` on the chosen side(s): both moments infinite.
    LogTail { side: Side },
    /// Standard Gaussian scaled to mass `c`: both moments finite.
    Gaussian,
    /// Uniform on `[a, b]` with mass `c`: both moments finite.
    CompactUniform { a: f64, b: f64 },
}

/// A density component: a family together with its mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityComponent {
    family: DensityFamily,
    scale: f64,
}

/// Support of a component, used to route integrals.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Support {
    Bounded(f64, f64),
    RightHalf,
    LeftHalf,
    WholeLine,
}

impl DensityComponent {
    /// Builds a component and verifies by quadrature that the density
    /// integrates to `scale` within `1e-8` relative.
    pub fn new(family: DensityFamily, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "density scale must be positive and finite, got {scale}"
            )));
        }
        if let DensityFamily::CompactUniform { a, b } = family {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "compact_uniform requires finite a < b, got [{a}, {b}]"
                )));
            }
        }
        let comp = Self { family, scale };
        let cfg = QuadConfig::with_rel_tol(1e-10);
        let mass = comp
            .integrate_kernel(|_| 1.0, |_| 1.0, &cfg)
            .map_err(|e| Error::InvalidMeasure(format!("normalization quadrature failed: {e}")))?;
        if (mass - scale).abs() > 1e-8 * scale {
            return Err(Error::InvalidMeasure(format!(
                "density integrates to {mass}, expected mass {scale}"
            )));
        }
        Ok(comp)
    }

    pub fn family(&self) -> &DensityFamily {
        &self.family
    }

    /// Total mass of the component.
    pub fn mass(&self) -> f64 {
        self.scale
    }

    /// Density value at `t`.
    pub fn density(&self, t: f64) -> f64 {
        let c = self.scale;
        match self.family {
            DensityFamily::Cauchy => c / (std::f64::consts::PI * (1.0 + t * t)),
            DensityFamily::OneSidedQuadratic => {
                if t > 0.0 {
                    c / ((1.0 + t) * (1.0 + t))
                } else {
                    0.0
                }
            }
            DensityFamily::LogTail { side } => {
                let on_side = match side {
                    Side::Both => true,
                    Side::Positive => t > 0.0,
                    Side::Negative => t < 0.0,
                };
                if on_side {
                    c * log_tail_shape(t) / self.log_tail_norm()
                } else {
                    0.0
                }
            }
            DensityFamily::Gaussian => {
                c * (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
            }
            DensityFamily::CompactUniform { a, b } => {
                if t >= a && t <= b {
                    c / (b - a)
                } else {
                    0.0
                }
            }
        }
    }

    fn log_tail_norm(&self) -> f64 {
        match self.family {
            DensityFamily::LogTail { side: Side::Both } => 2.0 * *LOG_TAIL_HALF_NORM,
            DensityFamily::LogTail { .. } => *LOG_TAIL_HALF_NORM,
            _ => 1.0,
        }
    }

    /// `density(sign * e^v) * e^v`, stable when `e^v` overflows.
    pub(crate) fn log_weight(&self, v: f64, positive_side: bool) -> f64 {
        let c = self.scale;
        let sign = if positive_side { 1.0 } else { -1.0 };
        match self.family {
            DensityFamily::Cauchy => {
                // c e^v / (pi (1 + e^{2v})) = c / (pi (e^{-v} + e^v))
                let ev = v.exp();
                c / (std::f64::consts::PI * (ev + (-v).exp()))
            }
            DensityFamily::OneSidedQuadratic => {
                if positive_side {
                    // c e^v / (1+e^v)^2 = c / (e^v + 2 + e^{-v})
                    c / (v.exp() + 2.0 + (-v).exp())
                } else {
                    0.0
                }
            }
            DensityFamily::LogTail { side } => {
                let on_side = match side {
                    Side::Both => true,
                    Side::Positive => positive_side,
                    Side::Negative => !positive_side,
                };
                if on_side {
                    c * log_tail_shape_log(v) / self.log_tail_norm()
                } else {
                    0.0
                }
            }
            // Bounded-support families never route through tail integrals,
            // but keep the definition total.
            DensityFamily::Gaussian => self.density(sign * v.exp()) * v.exp(),
            DensityFamily::CompactUniform { .. } => self.density(sign * v.exp()) * v.exp(),
        }
    }

    pub(crate) fn support(&self) -> Support {
        match self.family {
            DensityFamily::Cauchy => Support::WholeLine,
            DensityFamily::OneSidedQuadratic => Support::RightHalf,
            DensityFamily::LogTail { side: Side::Both } => Support::WholeLine,
            DensityFamily::LogTail {
                side: Side::Positive,
            } => Support::RightHalf,
            DensityFamily::LogTail {
                side: Side::Negative,
            } => Support::LeftHalf,
            DensityFamily::Gaussian => Support::Bounded(-GAUSSIAN_SUPPORT, GAUSSIAN_SUPPORT),
            DensityFamily::CompactUniform { a, b } => Support::Bounded(a, b),
        }
    }

    /// Analytic flag: is `int |t| d(component)` finite?
    pub fn abs_moment_finite(&self) -> bool {
        matches!(
            self.family,
            DensityFamily::Gaussian | DensityFamily::CompactUniform { .. }
        )
    }

    /// Analytic flag: is `int log(1+|t|) d(component)` finite?
    pub fn log_moment_finite(&self) -> bool {
        !matches!(self.family, DensityFamily::LogTail { .. })
    }

    /// Integrates `kernel(t) * density(t)` over the support. Far tails use
    /// `kernel_v`, the same kernel in the variable `v = ln|t|`, which must
    /// stay representable when `e^v` does not.
    pub(crate) fn integrate_kernel<K, KV>(
        &self,
        kernel: K,
        kernel_v: KV,
        cfg: &QuadConfig,
    ) -> Result<f64>
    where
        K: Fn(f64) -> f64 + Copy,
        KV: Fn(f64) -> f64 + Copy,
    {
        let f = |t: f64| Complex64::new(kernel(t) * self.density(t), 0.0);
        let tail = |positive: bool| -> Result<f64> {
            let w = |v: f64| Complex64::new(kernel_v(v) * self.log_weight(v, positive), 0.0);
            Ok(quadrature::integrate_semiline_log(w, TAIL_SPLIT, &[], cfg)?.re)
        };
        match self.support() {
            Support::Bounded(a, b) => {
                Ok(quadrature::integrate(f, a, b, &[0.0, -1.0, 1.0], cfg)?.re)
            }
            Support::RightHalf => {
                let inner =
                    quadrature::integrate_tan_range(f, 0.0, TAIL_SPLIT, &[1.0, 100.0], cfg)?;
                Ok(inner.re + tail(true)?)
            }
            Support::LeftHalf => {
                let inner =
                    quadrature::integrate_tan_range(f, -TAIL_SPLIT, 0.0, &[-1.0, -100.0], cfg)?;
                Ok(inner.re + tail(false)?)
            }
            Support::WholeLine => {
                let inner = quadrature::integrate_tan_range(
                    f,
                    -TAIL_SPLIT,
                    TAIL_SPLIT,
                    &[-1.0, 0.0, 1.0],
                    cfg,
                )?;
                Ok(inner.re + tail(true)? + tail(false)?)
            }
        }
    }

    /// Like `integrate_kernel`, but the kernel is given in both plain and
    /// log-abscissa form so far tails stay representable.
    pub(crate) fn integrate_kernel_log<K, KL>(
        &self,
        kernel: K,
        kernel_log: KL,
        hints: &[f64],
        cfg: &QuadConfig,
    ) -> Result<Complex64>
    where
        K: Fn(f64) -> Complex64 + Copy,
        KL: Fn(f64, bool) -> Complex64 + Copy,
    {
        let f = |t: f64| kernel(t) * self.density(t);
        let tail = |positive: bool| -> Result<Complex64> {
            let w = |v: f64| {
                kernel_log(v, positive) * Complex64::new(self.log_weight(v, positive), 0.0)
            };
            let hints_v: Vec<f64> = hints
                .iter()
                .filter(|h| h.abs() > 1.0)
                .map(|h| h.abs().ln())
                .collect();
            quadrature::integrate_semiline_log(w, TAIL_SPLIT, &hints_v, cfg)
        };
        match self.support() {
            Support::Bounded(a, b) => quadrature::integrate(f, a, b, hints, cfg),
            Support::RightHalf => {
                let mut hints_in = vec![1.0, 100.0];
                hints_in.extend_from_slice(hints);
                let inner = quadrature::integrate_tan_range(f, 0.0, TAIL_SPLIT, &hints_in, cfg)?;
                Ok(inner + tail(true)?)
            }
            Support::LeftHalf => {
                let mut hints_in = vec![-1.0, -100.0];
                hints_in.extend_from_slice(hints);
                let inner = quadrature::integrate_tan_range(f, -TAIL_SPLIT, 0.0, &hints_in, cfg)?;
                Ok(inner + tail(false)?)
            }
            Support::WholeLine => {
                let mut hints_in = vec![-1.0, 0.0, 1.0];
                hints_in.extend_from_slice(hints);
                let inner =
                    quadrature::integrate_tan_range(f, -TAIL_SPLIT, TAIL_SPLIT, &hints_in, cfg)?;
                Ok(inner + tail(true)? + tail(false)?)
            }
        }
    }
}

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// A finite positive measure: atoms plus density components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FiniteMeasure {
    atoms: Vec<Atom>,
    densities: Vec<DensityComponent>,
}

impl FiniteMeasure {
    /// The zero measure.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(atoms: Vec<Atom>, densities: Vec<DensityComponent>) -> Result<Self> {
        for a in &atoms {
            if !a.location.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "atom location must be finite, got {}",
                    a.location
                )));
            }
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "atom mass must be positive and finite, got {}",
                    a.mass
                )));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if a.location == b.location {
                    return Err(Error::InvalidMeasure(format!(
                        "atom locations must be pairwise distinct, {} repeats",
                        a.location
                    )));
                }
            }
        }
        Ok(Self { atoms, densities })
    }

    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(location, mass)| Atom { location, mass })
                .collect(),
            Vec::new(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[DensityComponent] {
        &self.densities
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.densities.is_empty()
    }

    /// Total mass `mu(R)`.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.densities.iter().map(|d| d.mass()).sum::<f64>()
    }

    /// `int |t| d mu`, or the divergence flag.
    pub fn abs_moment(&self, cfg: &QuadConfig) -> Result<Moment> {
        self.moment(|t| t.abs(), |v| v.exp(), |d| d.abs_moment_finite(), cfg)
    }

    /// `int log(1+|t|) d mu`, or the divergence flag.
    pub fn log_moment(&self, cfg: &QuadConfig) -> Result<Moment> {
        // log(1 + e^v) = v + log(1 + e^{-v})
        self.moment(
            |t| t.abs().ln_1p(),
            |v| v + (-v).exp().ln_1p(),
            |d| d.log_moment_finite(),
            cfg,
        )
    }

    fn moment<K, KV, P>(&self, kernel: K, kernel_v: KV, finite: P, cfg: &QuadConfig) -> Result<Moment>
    where
        K: Fn(f64) -> f64 + Copy,
        KV: Fn(f64) -> f64 + Copy,
        P: Fn(&DensityComponent) -> bool,
    {
        if self.densities.iter().any(|d| !finite(d)) {
            return Ok(Moment::Infinite);
        }
        let mut total: f64 = self.atoms.iter().map(|a| a.mass * kernel(a.location)).sum();
        for d in &self.densities {
            total += d.integrate_kernel(kernel, kernel_v, cfg)?;
        }
        Ok(Moment::Finite(total))
    }

    /// Truncated log-moment `int_{|t| <= cutoff} log(1+|t|) d mu`, used as
    /// monotone evidence alongside the analytic divergence flags.
    pub fn log_moment_cutoff(&self, cutoff: f64, cfg: &QuadConfig) -> Result<f64> {
        let kernel = |t: f64| t.abs().ln_1p();
        let mut total: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location.abs() <= cutoff)
            .map(|a| a.mass * kernel(a.location))
            .sum();
        for d in &self.densities {
            let f = |t: f64| Complex64::new(kernel(t) * d.density(t), 0.0);
            total += quadrature::integrate_tan_range(
                f,
                -cutoff,
                cutoff,
                &[-1.0, 0.0, 1.0, -cutoff / 2.0, cutoff / 2.0],
                cfg,
            )?
            .re;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::with_rel_tol(1e-10)
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(FiniteMeasure::from_atoms(&[(0.0, -1.0)]).is_err());
        assert!(FiniteMeasure::from_atoms(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(DensityComponent::new(DensityFamily::Cauchy, 0.0).is_err());
        assert!(
            DensityComponent::new(DensityFamily::CompactUniform { a: 2.0, b: 1.0 }, 1.0).is_err()
        );
    }

    #[test]
    fn families_are_normalized() {
        // Construction itself verifies each family integrates to its mass.
        for family in [
            DensityFamily::Cauchy,
            DensityFamily::OneSidedQuadratic,
            DensityFamily::LogTail { side: Side::Both },
            DensityFamily::LogTail {
                side: Side::Positive,
            },
            DensityFamily::Gaussian,
            DensityFamily::CompactUniform { a: 0.0, b: 1.0 },
        ] {
            let c = DensityComponent::new(family, 3.0).unwrap();
            assert_eq!(c.mass(), 3.0);
        }
    }

    #[test]
    fn total_mass_is_additive() {
        let mu = FiniteMeasure::new(
            vec![Atom {
                location: 0.0,
                mass: 1.0,
            }],
            vec![DensityComponent::new(DensityFamily::Cauchy, 3.0).unwrap()],
        )
        .unwrap();
        assert!((mu.total_mass() - 4.0).abs() < 1e-12);
        assert_eq!(FiniteMeasure::zero().total_mass(), 0.0);
    }

    #[test]
    fn atom_moments_are_exact_sums() {
        let mu = FiniteMeasure::from_atoms(&[(-2.0, 1.0), (3.0, 2.0)]).unwrap();
        match mu.abs_moment(&cfg()).unwrap() {
            Moment::Finite(v) => assert!((v - 8.0).abs() < 1e-14),
            Moment::Infinite => panic!("atoms always have finite moments"),
        }
        let mu0 = FiniteMeasure::from_atoms(&[(0.0, 5.0)]).unwrap();
        assert_eq!(mu0.log_moment(&cfg()).unwrap(), Moment::Finite(0.0));
    }

    #[test]
    fn divergence_is_flagged_analytically() {
        let cauchy = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::Cauchy, 2.5).unwrap()],
        )
        .unwrap();
        assert_eq!(cauchy.abs_moment(&cfg()).unwrap(), Moment::Infinite);
        assert!(cauchy.log_moment(&cfg()).unwrap().is_finite());

        let lt = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::LogTail { side: Side::Both }, 1.0).unwrap()],
        )
        .unwrap();
        assert_eq!(lt.abs_moment(&cfg()).unwrap(), Moment::Infinite);
        assert_eq!(lt.log_moment(&cfg()).unwrap(), Moment::Infinite);
    }

    #[test]
    fn closed_form_moments() {
        // Uniform on [0,1]: int |t| = 1/2.
        let u = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::CompactUniform { a: 0.0, b: 1.0 }, 1.0)
                .unwrap()],
        )
        .unwrap();
        assert!((u.abs_moment(&cfg()).unwrap().value().unwrap() - 0.5).abs() < 1e-10);

        // Gaussian: int |t| = sqrt(2/pi).
        let g = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::Gaussian, 1.0).unwrap()],
        )
        .unwrap();
        let expect = (2.0 / std::f64::consts::PI).sqrt();
        assert!((g.abs_moment(&cfg()).unwrap().value().unwrap() - expect).abs() < 1e-10);

        // One-sided quadratic: int log(1+t) / (1+t)^2 dt = 1 (by parts).
        let o = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::OneSidedQuadratic, 1.0).unwrap()],
        )
        .unwrap();
        assert!((o.log_moment(&cfg()).unwrap().value().unwrap() - 1.0).abs() < 1e-8);

        // Cauchy log-moment: log(2)/2 + 2 G / pi with Catalan's constant G,
        // matching the 30-digit reference quadrature 0.929695398341610215.
        let c = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::Cauchy, 1.0).unwrap()],
        )
        .unwrap();
        let v = c.log_moment(&cfg()).unwrap().value().unwrap();
        assert!((v - 0.929695398341610215).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn log_moment_cutoffs_grow_for_divergent_tails() {
        let lt = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::LogTail { side: Side::Both }, 1.0).unwrap()],
        )
        .unwrap();
        let t1 = lt.log_moment_cutoff(1e2, &cfg()).unwrap();
        let t2 = lt.log_moment_cutoff(1e4, &cfg()).unwrap();
        let t3 = lt.log_moment_cutoff(1e6, &cfg()).unwrap();
        assert!(t1 < t2 && t2 < t3, "cutoff trajectory must grow: {t1} {t2} {t3}");

        // Cauchy tails decay: the trajectory is Cauchy in the cutoff.
        let c = FiniteMeasure::new(
            vec![],
            vec![DensityComponent::new(DensityFamily::Cauchy, 1.0).unwrap()],
        )
        .unwrap();
        let c1 = c.log_moment_cutoff(1e2, &cfg()).unwrap();
        let c2 = c.log_moment_cutoff(1e4, &cfg()).unwrap();
        let c3 = c.log_moment_cutoff(1e6, &cfg()).unwrap();
        assert!((c3 - c2).abs() < (c2 - c1).abs());
        assert!((c3 - 0.929695398341610215).abs() < 1e-3);
    }
}
