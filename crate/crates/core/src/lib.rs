pub mod cipher;
pub mod cli;
pub mod diff;
pub mod document;
pub mod error;
pub mod gf2;
pub mod lin;
pub mod middle;
pub mod model;
pub mod search;
pub mod trail;
pub mod verify;
pub mod word;

pub use cipher::{CipherSpec, KeyMaterial, Variant};
pub use error::{Error, Result};
pub use word::Pair;
