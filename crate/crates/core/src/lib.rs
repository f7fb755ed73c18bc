//! Numerical laboratory for the values of ζ at the zeros of ζ′ in the right
//! half of the critical strip.

pub mod number_theory;
pub mod quad;
pub mod winding;
pub mod zeta;
pub mod critical;
pub mod dirichlet;
pub mod kronecker;
pub mod bounds;
pub mod verify;
