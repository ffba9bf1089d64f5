//! The built-in map catalog: named triplets with ground-truth labels and the
//! oracle each label came from. Compiled into the binary; no external data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::HerglotzTriplet;
use crate::measure::{Atom, DensityComponent, DensityFamily, FiniteMeasure, Side};

/// Ground-truth classification labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepLabel {
    Hyperbolic,
    ParabolicPositive,
    ParabolicZero,
    Elliptic,
}

/// One catalog entry with its expected outcomes.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub triplet: HerglotzTriplet,
    pub step: StepLabel,
    /// `Some(true)` extremal, `Some(false)` not; `None` out of scope
    /// (zero step / elliptic).
    pub extremal: Option<bool>,
    /// Finite shift? `None` where the question is out of scope.
    pub finite_shift: Option<bool>,
    /// Known limit `L` where a closed form exists: `(re, im)`.
    pub known_limit: Option<(f64, f64)>,
    /// Orbit budget override; entries needing slow separations carry their own.
    pub budget: Option<usize>,
    /// Where the labels come from.
    pub provenance: &'static str,
}

fn density(family: DensityFamily, scale: f64) -> FiniteMeasure {
    FiniteMeasure::new(
        vec![],
        vec![DensityComponent::new(family, scale).expect("catalog density")],
    )
    .expect("catalog measure")
}

fn atoms(list: &[(f64, f64)]) -> FiniteMeasure {
    FiniteMeasure::new(
        list.iter()
            .map(|&(location, mass)| Atom { location, mass })
            .collect(),
        vec![],
    )
    .expect("catalog atoms")
}

/// Builds the full catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "affine2",
            triplet: HerglotzTriplet::affine(2.0, 0.0).unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: Some((0.0, 1.0)),
            budget: None,
            provenance: "f(z) = 2z: f^n(i) = 2^n i, L(z) = z, h = id (closed form)",
        },
        CatalogEntry {
            name: "affine2shift",
            triplet: HerglotzTriplet::affine(2.0, 1.0).unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: Some((1.0, 1.0)),
            budget: None,
            provenance: "f(z) = 2z + 1: f^n(z) = 2^n(z+1) - 1, L(z) = z + 1 (closed form)",
        },
        CatalogEntry {
            name: "cauchyhyp2",
            triplet: HerglotzTriplet::new(2.0, 0.0, density(DensityFamily::Cauchy, 1.0)).unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: Some((0.0, 2.0)),
            budget: None,
            provenance: "Cauchy kernel integral is the constant i, so f(z) = 2z + i and \
                         f^n(z) = 2^n z + (2^n - 1) i, L(z) = z + i (residue calculus)",
        },
        CatalogEntry {
            name: "atomhyp2",
            triplet: HerglotzTriplet::new(2.0, 0.0, atoms(&[(1.0, 0.5)])).unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: Some((-0.2084915180992969, 1.3655513376098405)),
            budget: None,
            provenance: "finite log-moment (single atom); L(i) frozen from 30-digit \
                         reference iteration",
        },
        CatalogEntry {
            name: "gausshyp2",
            triplet: HerglotzTriplet::new(2.0, 0.0, density(DensityFamily::Gaussian, 1.0))
                .unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: Some((0.0, 1.6895973695468308)),
            budget: None,
            provenance: "finite log-moment (Gaussian decay); symmetric density keeps the \
                         orbit of i on the axis; L(i) frozen from reference quadrature",
        },
        CatalogEntry {
            name: "uniformhyp2",
            triplet: HerglotzTriplet::new(
                2.0,
                0.0,
                density(DensityFamily::CompactUniform { a: 0.0, b: 1.0 }, 1.0),
            )
            .unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(true),
            finite_shift: None,
            known_limit: None,
            budget: None,
            provenance: "compactly supported density: both moments finite",
        },
        CatalogEntry {
            name: "logtail2",
            triplet: HerglotzTriplet::new(
                2.0,
                0.0,
                density(DensityFamily::LogTail { side: Side::Both }, 1.0),
            )
            .unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(false),
            finite_shift: None,
            known_limit: None,
            budget: None,
            provenance: "log(1+|t|) not integrable against 1/((1+|t|) ln^2(e+|t|)); \
                         log-ratio accumulator grows like 0.49 ln n (reference recursion)",
        },
        CatalogEntry {
            name: "onesidedlog2",
            triplet: HerglotzTriplet::new(
                2.0,
                0.0,
                density(
                    DensityFamily::LogTail {
                        side: Side::Positive,
                    },
                    1.0,
                ),
            )
            .unwrap(),
            step: StepLabel::Hyperbolic,
            extremal: Some(false),
            finite_shift: None,
            known_limit: None,
            budget: None,
            provenance: "one-sided log-heavy tail: log-moment diverges on the right tail",
        },
        CatalogEntry {
            name: "translate1",
            triplet: HerglotzTriplet::affine(1.0, 1.0).unwrap(),
            step: StepLabel::ParabolicPositive,
            extremal: Some(true),
            finite_shift: Some(true),
            known_limit: Some((1.0, 0.0)),
            budget: None,
            provenance: "f(z) = z + 1: orbit n + i, b = 1, I = 1, L = 1 (closed form)",
        },
        CatalogEntry {
            name: "paratom",
            triplet: HerglotzTriplet::new(1.0, 2.0, atoms(&[(0.0, 0.1)])).unwrap(),
            step: StepLabel::ParabolicPositive,
            extremal: Some(true),
            finite_shift: Some(true),
            known_limit: Some((2.0, 0.0)),
            budget: None,
            provenance: "f(z) = z + 2 - 0.1/z: increments m y/|z|^2 ~ m/(4n^2) summable, \
                         L = 2, I(i) = 1.13890726 (reference iteration)",
        },
        CatalogEntry {
            name: "onesidedheavy1",
            triplet: HerglotzTriplet::new(
                1.0,
                1.0,
                density(DensityFamily::OneSidedQuadratic, 1000.0),
            )
            .unwrap(),
            step: StepLabel::ParabolicPositive,
            extremal: Some(false),
            finite_shift: Some(false),
            known_limit: None,
            budget: None,
            provenance: "int |t| dmu = inf forces infinite shift; reference iteration shows \
                         step 1.128, b = -2.767, Im growing past 1e3 within 1e5 iterates",
        },
        CatalogEntry {
            name: "vertical",
            triplet: HerglotzTriplet::new(1.0, 0.0, density(DensityFamily::Cauchy, 1.0)).unwrap(),
            step: StepLabel::ParabolicZero,
            extremal: None,
            finite_shift: Some(false),
            known_limit: None,
            budget: Some(700_000),
            provenance: "constant-i identity gives f(z) = z + i: steps log((y+1)/y)/2 -> 0",
        },
        CatalogEntry {
            name: "sqrtgrowth",
            triplet: HerglotzTriplet::new(1.0, 0.0, atoms(&[(0.0, 1.0)])).unwrap(),
            step: StepLabel::ParabolicZero,
            extremal: None,
            finite_shift: Some(false),
            known_limit: None,
            budget: Some(2_500_000),
            provenance: "f(z) = z - 1/z: y_{n+1} = y_n + 1/y_n ~ sqrt(2n), steps ~ 1/(4n)",
        },
        CatalogEntry {
            name: "halfaffine",
            triplet: HerglotzTriplet::affine(0.5, 0.0).unwrap(),
            step: StepLabel::Elliptic,
            extremal: None,
            finite_shift: None,
            known_limit: None,
            budget: None,
            provenance: "alpha = 1/2 < 1: the Denjoy-Wolff point is not at infinity",
        },
    ]
}

/// Looks a catalog entry up by name.
pub fn find(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = catalog().iter().map(|e| e.name).collect();
            Error::Spec(format!(
                "unknown catalog map '{name}'; available: {}",
                names.join(", ")
            ))
        })
}
