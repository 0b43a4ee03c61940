//! Exact partition functions of Potts, Fortuin-Kasteleyn cluster and RSOS
//! models on `L x N` square-lattice tori.
//!
//! Two independent routes are provided:
//!
//! * [`topology`] + [`weights`]: exhaustive enumeration of the `2^E` edge
//!   colourings, each reduced to its topological invariants and weighted per
//!   model, giving partition functions as exact Laurent polynomials in `x`;
//! * [`transfer`] + [`spectra`]: Temperley-Lieb column transfer matrices in
//!   the spin and RSOS representations, with twisted seams, traced or
//!   diagonalized numerically.
//!
//! [`identities`] checks the relations between the two pictures and
//! [`cli`] drives everything from the command line.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod identities;
pub mod lattice;
pub mod spectra;
pub mod topology;
pub mod transfer;
pub mod weights;

pub use error::{Error, Result};
