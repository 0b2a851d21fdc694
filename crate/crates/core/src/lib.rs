//! Secant-quandle invariants of braids and plat-closed links.
//!
//! A braid word is realized as a piecewise-linear motion of points in the
//! plane with rational coordinates. Horizontal trisecant events are found
//! exactly, the secant classes between them become generators, and each event
//! contributes quandle relations. Braids are compared through their top-maps
//! in the free quandle, plat closures through coloring counts into finite
//! quandles.

pub mod braid;
pub mod error;
pub mod exact;
pub mod finite;
pub mod free_quandle;
pub mod geometry;
pub mod harness;
pub mod presentation;
pub mod trace;
pub mod trisecant;

pub use braid::{parse_braid_word, BraidWord};
pub use error::{Error, Result};
pub use geometry::{GeometricBraid, LayoutParams, Sign};
pub use trisecant::{enumerate_trisecants, perturb_and_retry, TrisecantEvent};

/// Exact rational coordinates.
pub type Rational = num_rational::BigRational;
/// Event times in a real quadratic extension.
pub type EventTime = exact::Quad2Real<num_bigint::BigInt>;
pub type RationalPoint = exact::Point2<Rational>;
pub type FloatPoint = exact::Point2<f64>;
