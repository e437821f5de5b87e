//! Exact Davenport constants of finite commutative semigroups, with a focus
//! on the multiplicative semigroups of `F_p[x] / <f(x)>`.

pub mod cli;
pub mod gfpoly;
pub mod semigroup;
pub mod verify;
pub mod zerosum;
