pub mod builder;
pub mod certificate;
pub mod field;
pub mod geometry;
pub mod orbits;
pub mod verifier;
