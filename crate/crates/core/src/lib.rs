//! Class numbers and class group structure of imaginary quadratic fields,
//! computed with binary quadratic forms, together with a verification engine
//! for order-`n` classes in the fields `Q(sqrt(p^2 - 2 q^n))`.

pub mod error;
pub mod family;
pub mod classgroup;
pub mod intcore;
pub mod qform;
pub mod wada;

pub use error::{Error, Result};
pub use qform::{Discriminant, QForm};
