#![no_std]
extern crate alloc;

pub mod cells;
pub mod cover;
pub mod error;
pub mod enumerate;
pub mod ext;
pub mod field;
pub mod homalg;
pub mod kac;
pub mod labeled;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod stability;
pub mod torus;

pub use error::{Budget, Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use quiver::{DimVector, Quiver};
pub use rep::{Morphism, RElement, Representation};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
