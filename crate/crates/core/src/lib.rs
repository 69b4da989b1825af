//! Exact finite-stage algorithms for prefix-free codes and left-c.e. reals.
//!
//! - [`codespace`]: the Kraft-Chaitin allocator, which turns a stream of
//!   requested lengths into a prefix-free code online.
//! - [`kc_oracle`]: a small functional reference version of the allocator,
//!   used as a differential oracle.
//! - [`ce_real`]: rational approximations of c.e. reals and their dyadic
//!   decomposition into allocator requests.
//! - [`machines`]: finite machine tables, `ω_k`, complexity, universal
//!   combination and Chaitin's transform.
//! - [`solovay`]: interval tests, domination witnesses and Ω-representations.
//! - [`mltest`]: complexity tests and compression of Martin-Löf test stages.
//!
//! All arithmetic is exact. Dyadic quantities use [`Dyadic`], everything
//! else [`Rational`].

pub mod arith;
pub mod bits;
pub mod ce_real;
pub mod codespace;
pub mod format;
pub mod kc_oracle;
pub mod machines;
pub mod mltest;
pub mod solovay;
pub mod verify;

pub use arith::{ceil_neg_log2, measure_of_lengths, pow2_neg, ArithError, Dyadic, Interval, Rational};
pub use bits::{is_prefix_free, BitString, ParseBitsError};
pub use ce_real::{dyadic_decompose, to_machine, CeRealError, DyadicDecomposition, RationalSeq};
pub use codespace::{allocate_all, allocate_lengths, check_invariants, AllocError, AllocatorState, InvariantReport, Request};
pub use machines::{chaitin_transform, combine_universal, compose, MachineError, MachineTable};
pub use mltest::{MlTestError, PrefixSetStage};
pub use solovay::{build_test, check_domination, extract_witness, DominationWitness, SolovayError, TestStage};
