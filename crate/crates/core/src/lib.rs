//! Zero sets of poly-exponential equations `a₀ + Σ aᵢ e^{ℓᵢ w} = 0` as the
//! exponent vector `ℓ` varies.
//!
//! The crate covers exact spectra at rational `ℓ` ([`oracle`]), zero finding
//! for arbitrary real exponents ([`zeros`]), continuation of individual
//! zeros along parameter paths ([`continuation`]), limit and boundary
//! behaviour ([`asymptotics`]), and a directed-graph front end producing
//! Perron polynomials ([`graph`]).

// `!(x > 0.0)` is how NaN gets rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Row operations read two rows of the same matrix.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fixtures;
pub mod form;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod polyexp;
pub mod roots;
pub mod upoly;
pub mod zeros;
pub mod continuation;
pub mod asymptotics;

pub use error::{Error, Result};
pub use form::{LinearForm, Rational};
pub use asymptotics::{
    boundary_spectrum, growth_rate, limit_set, perron_frontier, BoundarySpectrum, ExtendedParam, GrowthClassification,
    GrowthKind, IntervalSet,
};
pub use continuation::{track, track_all, ParamPath, TrackOpts, TrackStatus, Trajectory};
pub use polyexp::{BarData, ConcretePolyExp, IotaImage, ParamPoint, PolyExponential};
pub use zeros::{count_zeros, zeros_in_band, LocatedZero, Rectangle, ZeroOpts};
