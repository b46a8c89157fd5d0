//! Boolean circuits as string-diagram terms.
//!
//! The crate covers the whole path from syntax to learning:
//!
//! * [`circuit`]: the term language, its typing, a textual syntax and the
//!   port-graph view used for reachability and fast evaluation.
//! * [`semantics`]: interpretation as boolean functions and as tuples of
//!   polynomials over Z2, plus the two equivalence deciders.
//! * [`rdiff`]: the syntactic reverse derivative, the brute-force reverse
//!   derivative of black-box functions, safety analysis and safe forms.
//! * [`learn`]: parametrised models and the Reverse Derivative Ascent loop.
//! * [`data`]: binarization, label encodings and stratified splits.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod axioms;
pub mod bits;
pub mod circuit;
pub mod data;
pub mod error;
pub mod learn;
pub mod rdiff;
pub mod sample;
pub mod semantics;

pub use bits::BitVec;
pub use circuit::{Arity, Gen, Term};
pub use error::{Error, Result};
