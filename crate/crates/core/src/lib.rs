//! Exact computations in Ringel–Hall algebras of quiver representations over
//! finite fields, their Drinfeld doubles, and the derived Hall algebras built
//! from them.

pub mod backend;
pub mod error;
pub mod fq;
pub mod hall;
pub mod morphism;
pub mod presented;
pub mod quiver;
pub mod parse;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
