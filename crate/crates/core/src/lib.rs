//! Two identical qubits coupled symmetrically to one cavity mode, with the
//! counter-rotating interaction kept — the two-qubit Tavis-Cummings model
//! beyond the rotating-wave approximation. In the triplet space of the two
//! qubits the system is a spin-1 coupled to an oscillator,
//!
//! ```text
//! H = Δ Jx + ω a†a + g (a† + a) Jz
//! ```
//!
//! with `ω` the energy unit. Four solvers share one operator toolkit:
//!
//! * [`models`] — numerically exact diagonalization in a truncated Fock
//!   space (with truncation-convergence certification) and the ordinary RWA,
//!   which is block-diagonal in the conserved excitation number;
//! * [`adiabatic`] — the zeroth-order approximation after the polaron
//!   (displacement) transform: closed-form levels per photon number;
//! * [`grwa`] — the generalized RWA: an RWA performed in the polaron frame,
//!   giving RWA-shaped blocks with renormalized, Laguerre-dressed couplings
//!   that retain the counter-rotating physics;
//! * [`dynamics`] — spin-population time series from a displaced coherent
//!   initial state under any of the four methods.
//!
//! All numerics are generic over the scalar type via [`Real`] (`f32` or
//! `f64`); the `*64` aliases below fix the common instantiation.

pub mod adiabatic;
pub mod dynamics;
pub mod eigen;
mod error;
pub mod grwa;
pub mod hilbert;
pub mod models;
mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

use std::fmt;
use std::str::FromStr;

/// Physical parameter set: qubit splitting `delta`, oscillator frequency
/// `omega` (the energy unit), and collective coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub delta: T,
    pub omega: T,
    pub g: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(delta: T, omega: T, g: T) -> Result<Self> {
        if !(delta.is_finite() && omega.is_finite() && g.is_finite()) {
            return Err(Error::InvalidArgument(
                "system parameters must be finite".into(),
            ));
        }
        if omega <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "oscillator frequency must be positive, got {omega}"
            )));
        }
        if delta < T::zero() || g < T::zero() {
            return Err(Error::InvalidArgument(format!(
                "delta and g must be nonnegative, got delta = {delta}, g = {g}"
            )));
        }
        Ok(Self { delta, omega, g })
    }

    /// Parameters with `omega = 1`, i.e. everything in units of the
    /// oscillator frequency.
    pub fn with_unit_omega(delta: T, g: T) -> Result<Self> {
        Self::new(delta, T::one(), g)
    }

    /// The polaron displacement g/ω.
    #[inline]
    pub fn lambda(&self) -> T {
        self.g / self.omega
    }

    /// The Laguerre argument (g/ω)².
    #[inline]
    pub fn lag_x(&self) -> T {
        let l = self.lambda();
        l * l
    }
}

/// Solution method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Exact,
    Rwa,
    Zeroth,
    Grwa,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Exact, Method::Rwa, Method::Zeroth, Method::Grwa];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Rwa => "rwa",
            Method::Zeroth => "zeroth",
            Method::Grwa => "grwa",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "rwa" => Ok(Method::Rwa),
            "zeroth" => Ok(Method::Zeroth),
            "grwa" => Ok(Method::Grwa),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected exact, rwa, zeroth, or grwa)"
            ))),
        }
    }
}

pub type SystemParams64 = SystemParams<f64>;
pub type SystemParams32 = SystemParams<f32>;
pub type QuantumState64 = hilbert::QuantumState<f64>;
pub type EigenDecomposition64 = eigen::EigenDecomposition<f64>;
pub type SpectrumResult64 = models::SpectrumResult<f64>;
pub type TimeSeries64 = dynamics::TimeSeries<f64>;
