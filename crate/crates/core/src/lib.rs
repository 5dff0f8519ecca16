//! Proof checking and proof translation for the λΠ-calculus modulo
//! rewriting.
//!
//! * [`kernel`]: terms, reduction, convertibility and type checking.
//! * [`rewriting`]: first-order left-linear rewrite rules.
//! * [`signature`]: theories built entry by entry and then sealed.
//! * [`syntax`]: the `.lpm` text format.
//! * [`theories`]: the built-in encodings of simple type theory and the
//!   calculus of constructions.
//! * [`translate`]: lifting from STT to CoC, fragment analysis of CoC
//!   libraries, and lowering back to STT.

#![allow(clippy::result_large_err)]

pub mod kernel;
pub mod rewriting;
pub mod signature;
pub mod syntax;
pub mod theories;
pub mod translate;

pub use kernel::{Context, Kernel, KernelError, Name, Sort, Term};
pub use rewriting::{Pattern, RewriteRule, RuleVar};
pub use signature::{Entry, SealedTheory, SignatureError, Theory};
