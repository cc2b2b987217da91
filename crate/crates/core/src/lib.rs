//! Exact-arithmetic toolkit for symmetric tensors of border rank at most three.
//!
//! Forms are homogeneous polynomials with rational coefficients. From a form we
//! build its catalecticant (symmetric flattening) matrices, graded pieces of its
//! apolar ideal, and from those decide membership in the secant varieties
//! `σ₁ ⊂ σ₂ ⊂ σ₃` of the Veronese embedding, compute conormal spaces of `σ₃`
//! and classify points into the four orbit types of `σ₃ ∖ σ₂`.
//!
//! Everything is computed over `ℚ` with no rounding; ranks and dimensions are
//! exact integers.

pub mod catalecticant;
pub mod error;
pub mod exact_linalg;
pub mod forms;
pub mod par;
pub mod secant;
pub mod table;
pub mod tangent;
mod univariate;

pub use catalecticant::{
    apolar_piece, build_flattening, flattening_rank, graded_product, restrict_to_span, span_of,
    FlatteningMatrix, Span,
};
pub use error::{Error, Result};
pub use exact_linalg::{kernel_basis, rref, span_dim, subspace_sum, MatrixQ, Rref, Subspace};
pub use forms::{
    monomial_basis, parse_dual_form, parse_form, Exponent, Form, LinearChange, Scalar,
};
pub use secant::{
    border_rank_lower_bound, expected_codim, in_degenerate_locus, in_sigma1, in_sigma2, in_sigma3,
    membership, MembershipVerdict,
};
pub use tangent::{
    canonical_form, classify_orbit, classify_orbit_seeded, conormal_space, hilbert_function,
    in_singular_locus, sample_linear_change, sample_rank_le, smoothness_at, ConormalFormula, ConormalSpace, OrbitClass,
    SmoothnessReport, Verdict,
};
