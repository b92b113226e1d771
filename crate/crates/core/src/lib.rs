pub mod error;
pub mod gf2;
pub mod groebner;
pub mod milnor;
pub mod polycore;
pub mod quotient;
pub mod sseq;
pub mod verify;

pub use error::{Error, Result};
