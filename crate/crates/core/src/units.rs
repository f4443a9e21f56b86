//! Unit conversions at the ingestion boundary.
//!
//! Everything internal is SI: angular frequencies omega in rad/s, times in
//! seconds, lengths in meters. Inputs and reports use ordinary frequencies
//! nu = omega / (2 pi) in MHz, times in us or ns, lengths in um.

pub use std::f64::consts::TAU;

// Conversions scale by exactly representable powers of ten (divide on the
// way in, multiply on the way out) so each direction costs one correctly
// rounded operation and round trips wobble by at most one ulp.

/// Ordinary frequency in MHz to angular frequency in rad/s.
pub fn mhz(nu: f64) -> f64 {
    nu * 1e6 * TAU
}

/// Angular frequency in rad/s to ordinary frequency in MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / TAU / 1e6
}

/// Ordinary frequency in GHz to angular frequency in rad/s.
pub fn ghz(nu: f64) -> f64 {
    nu * 1e9 * TAU
}

/// Microseconds to seconds.
pub fn us(t: f64) -> f64 {
    t / 1e6
}

/// Seconds to microseconds.
pub fn to_us(t: f64) -> f64 {
    t * 1e6
}

/// Nanoseconds to seconds.
pub fn ns(t: f64) -> f64 {
    t / 1e9
}

/// Micrometers to meters.
pub fn um(x: f64) -> f64 {
    x / 1e6
}

/// Meters to micrometers.
pub fn to_um(x: f64) -> f64 {
    x * 1e6
}
