//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scheme violated a structural invariant at construction.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    /// An operation requires a ladder shape the given scheme does not have.
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),

    /// A transition has no waist but was evaluated off axis.
    #[error("transition {transition} has no waist set but r > 0 was requested")]
    MissingWaist { transition: usize },

    /// Adiabatic elimination divides by the local second-step Rabi frequency.
    #[error("adiabatic elimination undefined: local second-step Rabi frequency is zero")]
    EliminationUndefined,

    /// The two-photon effective model divides by the single-photon detuning.
    #[error("two-photon effective model undefined: single-photon detuning is zero")]
    ZeroDetuning,

    /// Peak-height analytics need a nonzero effective Rabi frequency.
    #[error("no oscillation: effective Rabi frequency is zero")]
    NoOscillation,

    /// An analytic formula was evaluated outside its validity region.
    #[error("out of validity: {0}")]
    OutOfValidity(String),

    /// No first oscillation maximum exists in the search window.
    #[error("degenerate dynamics: no oscillation maximum found in the search window")]
    DegenerateDynamics,

    /// The fitted spectral peak sits on the edge of the detuning grid.
    #[error("light shift unresolved: spectral peak lies at the edge of the detuning grid")]
    ShiftUnresolved,

    /// Invalid numeric input to an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical routine failed beyond recovery.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A configuration document failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),
}
