//! Exact construction and classification of rational elliptic surfaces whose
//! six singular fibres are all of type `II` or `I2`, together with the plane
//! quartic double covers that realize them and the E8 lattice bookkeeping for
//! their Mordell-Weil groups.

pub mod binaryquartic;
pub mod exactfield;
pub mod families;
pub mod lattice;
pub mod linalg;
pub mod planecurves;
pub mod ternaryform;
pub mod unipoly;
pub mod weierstrass;
