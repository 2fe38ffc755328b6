//! Numerical Schiffer operators, Bergman kernels and the jump decomposition
//! for a Jordan curve splitting the Riemann sphere or a flat torus.
//!
//! The crate is organized bottom-up: [`numerics`] holds FFT, quadrature and
//! linear-algebra helpers; [`geometry`] builds a [`geometry::SurfaceModel`]
//! (charts, welding, Green function, level curves); [`kernels`], [`forms`],
//! [`schiffer`] and [`jump`] implement the analytic objects on top of it.

pub mod error;
pub mod forms;
pub mod geometry;
pub mod jump;
pub mod kernels;
pub mod numerics;
pub mod report;
pub mod schiffer;

pub use error::{Result, SchifferError};
pub use num_complex::Complex64 as C64;
