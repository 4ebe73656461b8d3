//! Potential theory of iterated preimages of rational maps on the projective
//! line.
//!
//! The crate computes the dynamical Green function and the kernel
//! `Phi_f(z, w) = log[z, w] - g_f(z) - g_f(w)` of a rational map `f` of degree
//! `d >= 2`, the iterated preimage measures `(f^k)^*(a)`, their Fekete energy
//! by two independent routes, the proximity-controlled sandwich bounds on that
//! energy, equidistribution errors against smooth test functions, and an exact
//! calculator for the p-adic kernels on the tree of balls.
//!
//! Module map:
//!
//! | module      | contents                                                   |
//! |-------------|------------------------------------------------------------|
//! | `projline`  | points of the projective line, chordal metric, isometries  |
//! | `rootsolve` | roots of binary forms with multiplicities                  |
//! | `ratmap`    | homogeneous lifts, critical points, resultants, cycles     |
//! | `potential` | escape rate, Green functions, kernels, `B(f)`, `f^#`       |
//! | `pullback`  | preimage towers, local degrees, `eta` and `D` sequences    |
//! | `fekete`    | energy routes, `c_z` values, sandwich bounds               |
//! | `equidist`  | test functions, sphere quadrature, equidistribution error  |
//! | `nonarch`   | exact p-adic balls, Hsia kernel, Gauss-point Green values  |
//! | `expr`      | map expression parser                                      |

pub mod equidist;
pub mod error;
pub mod exact;
pub mod expr;
pub mod fekete;
pub mod nonarch;
pub mod potential;
pub mod projline;
pub mod pullback;
pub mod quadrature;
pub mod ratmap;
pub mod rootsolve;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use projline::{Mobius, ProjPoint, EPS_PT};
pub use ratmap::HomLift;

/// Relative tolerance used when two independent routes to the same energy are
/// compared, plus an absolute floor.
pub const ROUTE_REL_TOL: f64 = 1e-6;
pub const ROUTE_ABS_TOL: f64 = 1e-9;
