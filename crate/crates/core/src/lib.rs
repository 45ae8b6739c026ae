//! Multisymmetric power-sum embeddings of point configurations.
//!
//! A configuration of `n` points in `R^d` is mapped to the vector of power
//! sums `eta_s(x) = sum_i x_i^s` over all multidegrees `1 <= |s| <= n`. The
//! map is invariant under permuting the points and separates orbits, so every
//! continuous symmetric `f` factors as `f = g o eta` with `g` continuous.
//!
//! Modules:
//! - [`basis`]: generator enumeration in graded, lex-descending order.
//! - [`embed`]: configurations, canonical representatives, the embedding.
//! - [`calculus`]: analytic Jacobian and rank diagnostics.
//! - [`separation`]: orbit equality, quotient metric, separating polynomials.
//! - [`decompose`]: tabulated `g`, symmetry checks, `d = 1` inversion.
//! - [`geometry2x2`]: image and fibers for two points in the plane.
//! - [`probes`]: Lipschitz-ratio and Hölder-exponent diagnostics for `g`.

pub mod assignment;
pub mod basis;
pub mod calculus;
pub mod decompose;
pub mod embed;
pub mod error;
pub mod geometry2x2;
pub mod probes;
pub mod separation;

pub use basis::{enumerate_generators, generator_count, ExponentVector, GeneratorBasis};
pub use calculus::{classify_rank, jacobian, singularity_predicate, JacobianMatrix, RankReport};
pub use decompose::{check_symmetry, eval_g, fit_g, invert_d1, FittedDecomposition, LabeledDataset, SymmetryReport};
pub use embed::{canonicalize, embed, point_features, reconstruct_norm, Configuration, Embedding, Permutation};
pub use error::{Error, Result};
pub use geometry2x2::{fiber, image_membership, FiberCase, FiberClassification, FiberQuery};
pub use probes::{builtin_example, holder_exponent, lipschitz_ratio_sequence, ProbePath};
pub use separation::{
    evaluate_separating, orbit_equal, quotient_distance, separating_polynomial, SeparatingPolynomial,
};
