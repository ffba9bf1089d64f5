//! Dynamics of holomorphic self-maps of the upper half-plane.
//!
//! A self-map is given by its Herglotz triplet `(alpha, beta, mu)`. The crate
//! iterates the map with overflow-safe log-coordinate tracking, classifies the
//! dynamics (hyperbolic / parabolic with positive or zero hyperbolic step,
//! finite or infinite shift), builds numerical Koenigs functions, and runs a
//! family of mutually redundant extremal-rate criteria: the orbit limit, the
//! log-moment of `mu`, conformality of the Koenigs function at infinity, the
//! asymptotic integrals along the imaginary axis, hyperbolic-distance defects,
//! and the disc-side gap and composition-operator norm sandwiches.

pub mod catalog;
pub mod config;
pub mod criteria;
pub mod disc;
pub mod error;
pub mod geometry;
pub mod herglotz;
pub mod koenigs;
pub mod limits;
pub mod mapspec;
pub mod measure;
pub mod orbit;
pub mod par;
pub mod quadrature;

pub use config::Config;
pub use error::{Error, Result};
pub use geometry::{BoundaryAnchor, DiscBoundaryPoint, DiscPoint, UpperHalfPoint};
pub use herglotz::{HerglotzTriplet, MapClass};
pub use limits::{LimitConfig, LimitVerdict};
pub use measure::{Atom, DensityComponent, DensityFamily, FiniteMeasure, Moment, Side};
pub use orbit::Orbit;
