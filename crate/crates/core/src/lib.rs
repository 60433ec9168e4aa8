//! Optimal experimental designs for spherical harmonic regression.
//!
//! A least-squares fit of a star-shaped surface `r(θ, φ)` in the real
//! spherical harmonic basis of degree `d` has `(d+1)²` coefficients. This
//! crate builds discrete designs on `[0, π] × (−π, π]` whose information
//! matrix is the identity. Such designs are simultaneously optimal for every
//! Kiefer Φ_p criterion over level selectors and for every Ψ_{p,r}
//! (smallest-eigenvalue) criterion. The crate also scores arbitrary designs
//! against those optima.
//!
//! The construction is a product `μ ⊗ ν`: `μ` places polar angles at
//! `arccos` of the nodes of a positive quadrature rule of degree `2d` on
//! `[−1, 1]`, and `ν` is a uniform azimuthal grid of `t ≥ 2d + 1` points.
//!
//! ```
//! use sphdesign::{design, quadrature};
//!
//! let rule = quadrature::gauss_rule(3).unwrap();
//! let mu = design::polar_from_rule(&rule);
//! let nu = design::azimuthal_design(-std::f64::consts::PI, 5).unwrap();
//! let xi = design::product_design(&mu, &nu);
//! let m = design::information_matrix(&xi, 2);
//! assert!(m.distance_to_identity() < 1e-12);
//! ```

pub mod angle;
pub mod criteria;
pub mod design;
mod error;
pub mod harmonics;
pub mod io;
pub mod linalg;
pub mod orthopoly;
pub mod quadrature;
pub mod regression;

pub use error::{Error, Result};
