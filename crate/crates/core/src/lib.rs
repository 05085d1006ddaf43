//! Heat and particle transport through inhomogeneous XX spin chains coupled
//! to two thermal baths by a global (eigenoperator) Lindblad dissipator.
//!
//! The chain maps to free fermions, so the steady state is fixed by the
//! single-particle spectrum and two boundary weights per mode:
//!
//! ```
//! use xxrect::{bath::BathPair, chain::ChainSpec, transport};
//!
//! let chain = ChainSpec::field_junction(10, 4.0, -2.0, 1.0, 1.0).unwrap();
//! let r = transport::rectify(&chain, BathPair::from_values(12.5, 7.5).unwrap()).unwrap();
//! assert!(r.j_fwd > 0.0 && r.j_rev < 0.0);
//! assert!(r.r.unwrap().abs() > 1e-6);
//! ```
//!
//! [`oracle`] rebuilds the same quantities on the full `2^N` Hilbert space
//! for small `N`.

pub mod bath;
pub mod chain;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod spectral;
pub mod sweep;
pub mod transport;

pub use error::{Category, Error};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/model.md")]
    struct Model;
    #[doc = include_str!("../../../book/src/spectrum.md")]
    struct Spectrum;
    #[doc = include_str!("../../../book/src/baths.md")]
    struct Baths;
    #[doc = include_str!("../../../book/src/currents.md")]
    struct Currents;
    #[doc = include_str!("../../../book/src/rectification.md")]
    struct Rectification;
    #[doc = include_str!("../../../book/src/linear_response.md")]
    struct LinearResponse;
    #[doc = include_str!("../../../book/src/dynamics.md")]
    struct Dynamics;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
