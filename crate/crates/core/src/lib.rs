pub mod curve;
pub mod error;
pub mod field;
pub mod loopgroup;
pub mod modp;
pub mod polynomials;
pub mod quiver;
pub mod random;
pub mod scalars;
pub mod series;
pub mod shuffle;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use field::Field;
pub use loopgroup::UElement;
pub use quiver::Quiver;
pub use scalars::{ParamPoly, ParamRing, ParamScalar};
