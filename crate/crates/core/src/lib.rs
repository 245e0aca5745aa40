//! Spectral bifurcation analysis for the Yamabe problem on product manifolds.
//!
//! Given the Laplace–Beltrami spectra of two compact manifolds with constant
//! scalar curvature, this crate studies the one-parameter family of product
//! metrics `g_λ = g⁽⁰⁾ ⊕ λ·g⁽¹⁾`. The Jacobi operator of the total scalar
//! curvature functional along the family has eigenvalues
//!
//! ```text
//! σ_{i,j}(λ) = A_i + B_j / λ,   A_i = ρ⁽⁰⁾_i − κ⁽⁰⁾/(m−1),   B_j = ρ⁽¹⁾_j − κ⁽¹⁾/(m−1)
//! ```
//!
//! and everything interesting (degeneracy instants, Morse index jumps, rigidity
//! intervals) follows from where these branches vanish. All of that is done in
//! exact rational arithmetic; the only floating point path is the Yamabe
//! obstruction certificate in [`sphere_case`].
//!
//! ```
//! use yamabif::{bifurcation, family::ProductFamily, rational::q, spectra};
//!
//! let s2 = spectra::sphere_spectrum(2, 12).unwrap();
//! let fam = ProductFamily::new(s2.clone(), s2).unwrap();
//! let instants = bifurcation::enumerate_instants(&fam, &q(1, 10), &q(3, 1)).unwrap();
//! let lambdas: Vec<_> = instants.iter().map(|i| i.lambda.clone()).collect();
//! assert_eq!(lambdas, vec![q(1, 8), q(1, 2), q(2, 1)]);
//! ```

pub mod bifurcation;
pub mod error;
pub mod family;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod spectra;
pub mod sphere_case;

pub use error::{Error, Result};
