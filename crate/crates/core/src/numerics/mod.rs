//! Numerical building blocks shared by the geometric modules.

pub mod ball;
pub mod ode;
pub mod quad;
pub mod roots;
