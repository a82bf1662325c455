//! Isoperimetric profiles of unbounded convex bodies of revolution that are
//! asymptotic to a cone.
//!
//! - [`geometry`]: generating functions, affine asymptotes, asymptotic cones.
//! - [`foliation`]: spherical caps meeting the boundary orthogonally, and the
//!   cone and half-space reference profiles.
//! - [`solver`]: free-boundary constant-mean-curvature shooting and profile
//!   sampling, with checks of the large-volume behaviour.
//! - [`spectral`]: Neumann eigenvalues of spherical caps and the Jacobi
//!   kernel.
//! - [`numerics`]: quadrature, root finding and ODE integration shared by
//!   the rest.

pub mod foliation;
pub mod geometry;
pub mod numerics;
pub mod solver;
pub mod spectral;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/foliation.md")]
    mod foliation {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
