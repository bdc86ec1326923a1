//! Exact symbolic engine for n-ary brackets on polynomial coordinate patches:
//! Filippov (n-Lie) algebras and algebroids, their graded extensions,
//! Nambu-Poisson tensors, linear Nambu structures and Lie-Filippov bialgebroids.

pub mod bialgebroid;
pub mod cli;
pub mod error;
pub mod extension;
pub mod exterior;
pub mod filippov;
pub mod io;
pub mod linalg;
pub mod linear;
pub mod nambu;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sample;

pub use error::{Error, Result};
pub use exterior::{Form, Frame, FrameKind, MultiVector};
pub use poly::Poly;
pub use rational::Rational;
pub use report::{Verdict, VerificationReport, Witness};
pub use sample::CheckConfig;
