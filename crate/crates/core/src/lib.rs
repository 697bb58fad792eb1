//! Chromatic simplicial complexes, iterated shared-memory protocol complexes,
//! and bounded-register full-information simulation driven by star covers.
//!
//! ```
//! use itermem::{chromatic_subdivide, protocol_complex, is_isomorphic, standard_simplex, Pattern};
//!
//! let d2 = standard_simplex(2);
//! let ch = chromatic_subdivide(&d2);
//! let xi = protocol_complex(&d2, Pattern::IIS, 1, 1_000_000).unwrap();
//! assert_eq!(ch.f_vector().counts, vec![12, 24, 13]);
//! assert!(is_isomorphic(&ch, &xi));
//! ```

pub mod bounds;
pub mod complex;
pub mod encoding;
pub mod error;
pub mod generators;
pub mod greedy;
pub mod io;
pub mod iso;
pub mod protocol;
pub mod scalar;
pub mod setcover;
pub mod sim;
pub mod subdivision;

pub use bounds::{bounds_table, BoundsReport};
pub use complex::{
    build_complex, standard_simplex, two_triangles, ChromaticComplex, Color, ComplexBuilder,
    FVector, Simplex, Vertex, Vid,
};
pub use encoding::{
    distinguishable_subcomplex, is_subcomplex_distinguishable, is_vertex_distinguishable,
    lower_bound_rounds, EncodingFunction, EncodingSequence, EncodingValue,
};
pub use error::{Error, Result};
pub use greedy::{greedy_star, split_to_budget, upper_bound_rounds, verify_cover, StarCoverTrace};
pub use iso::{find_isomorphism, is_isomorphic, Isomorphism};
pub use protocol::{protocol_complex, round_views, schedule_oracle, GlobalView, Pattern, Schedule};
pub use scalar::Scalar;
pub use subdivision::{chromatic_subdivide, degree_growth_table, iterate_subdivide, GrowthRow};

/// Bound report evaluated in double precision.
pub type BoundsReportF64 = BoundsReport<f64>;
/// Bound report with exact rational closed forms.
pub type BoundsReportExact = BoundsReport<num_rational::BigRational>;
pub type GrowthRowF64 = GrowthRow<f64>;
pub type GrowthRowExact = GrowthRow<num_rational::BigRational>;
