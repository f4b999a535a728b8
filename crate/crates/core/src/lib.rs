//! Numerical Loewner evolution in the upper half-plane.
//!
//! The crate works entirely with vertical-slit maps: a hull is represented by
//! an ordered composition of elementary slit maps ([`MapStack`]), a curve is
//! turned into a driving function by peeling slits off it ([`zipper`]), and a
//! driving function is turned back into a curve by composing inverse slit maps
//! ([`tracer`]). On top of that sit the Loewner energy ([`energy`]), the
//! incremental chord reversal by hyperbolic-geodesic surgery ([`surgery`]) and
//! property checks for the capacity and mapping-out estimates ([`verify`]).
//!
//! Time is measured in the `a_t = t` clock: `g_t(z) = z + 2t/z + O(z^-2)`, so a
//! hull grown for time `t` has half-plane capacity `2t`.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to get
//! `std::error::Error` through the standard library prelude.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod conformal;
pub mod energy;
mod error;
pub mod slitstack;
pub mod surgery;
pub mod tracer;
pub mod verify;
pub mod zipper;

pub use conformal::{BoundaryPoint, MobiusMap, Point};
pub use energy::{chord_energy, dirichlet_energy, partial_energy, EnergyOptions, EnergyReport, Target};
pub use error::{Error, Result};
pub use slitstack::{MapStack, SlitElement};
pub use surgery::{
    chord_from_driving, commutation_defect, hyperbolic_geodesic, local_reversal_step, reverse_chord,
    GeodesicSpec, LedgerRecord, PrimeEnd, ReversalFailure, ReversalLedger, ReversalOptions, ReversalState,
};
pub use tracer::{slice_by_capacity, trace_curve, TraceOptions, TracedCurve};
pub use zipper::{compute_driving, zip_chord, Chord, CurveSegment, DrivingFunction, ZipOptions, ZipperResult};
