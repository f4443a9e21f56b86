//! Simulation of coherent multi-photon ladder excitation of single trapped
//! atoms in tightly focused laser beams.
//!
//! The crate propagates rotating-wave amplitude equations with radiative
//! decay for N-level excitation ladders, derives effective two-level models
//! by adiabatic elimination of strongly coupled intermediate states, and
//! averages excitation dynamics over Gaussian beam profiles and thermal
//! atom-position distributions. The headline outputs are light-shift
//! spectra, Rabi-oscillation contrast, the first-peak amplitude A1 as a
//! function of the beam/atom spot ratio, and neighbor-atom crosstalk in
//! trap arrays.
//!
//! Internal units are SI throughout: angular frequencies in rad/s, times in
//! seconds, lengths in meters. Configuration documents quote ordinary
//! frequencies (MHz), times (us or ns), and lengths (um); conversion happens
//! at the ingestion boundary only.

pub mod effective;
pub mod error;
pub mod export;
pub mod linalg;
pub mod ode;
pub mod propagator;
pub mod scheme;
pub mod spatial;
pub mod units;

pub use error::{Error, Result};
pub use scheme::{AtomCloud, LadderScheme, Level, Transition};
