//! Permutative realizations of real spectra.
//!
//! A spectrum with one positive entry and nonnegative sum is realized by a
//! nonnegative matrix whose rows are permutations of its first row; a
//! zero-trace variant gives a zero diagonal, and every realizable spectrum
//! of order at most four gets a permutative matrix or a direct sum of
//! permutative blocks. Results are certified without an eigensolver.
//!
//! ```
//! use permreal::{realize_suleimanova, Spectrum, TolProfile, certify};
//!
//! let s = Spectrum::new(vec![10.0, -1.0, -2.0, -3.0]).unwrap();
//! let r = realize_suleimanova(&s).unwrap();
//! assert_eq!(r.matrix.row(3), &[4.0, 2.0, 3.0, 1.0]);
//! assert!(certify(&r, &TolProfile::default()).passed);
//! ```

pub mod bench;
pub mod companion;
pub mod error;
pub mod exact;
pub mod explorer;
pub mod linalg;
pub mod realize;
pub mod small_order;
pub mod spectrum;
pub mod suleimanova;
pub mod verify;

pub use companion::{companion_matrix, realize_companion, CompanionRealization};
pub use error::{Error, Result};
pub use explorer::{explore, ExploreConfig, PermTuple, SearchResult, Strategy};
pub use linalg::{char_poly, poly_from_roots, DenseMatrix, Matrix, Polynomial};
pub use realize::{realize, MethodChoice, Outcome, RealizeOptions};
pub use small_order::{realize_2, realize_3, realize_4, realize_small, SmallOrderCase};
pub use spectrum::{Classification, ConditionReport, Spectrum, SpectrumKind};
pub use suleimanova::{mn_inverse, mn_matrix, realize_suleimanova, realize_zero_trace};
pub use verify::{certify, CheckStatus, Method, Realization, TolProfile, VerificationReport};
