//! Terms, reduction, convertibility and bidirectional type checking for the
//! λΠ-calculus modulo rewriting.
//!
//! The typing discipline is the functional pure type system with sorts
//! `Type : Kind`, products formed over `(Type, Type)` and `(Type, Kind)`,
//! and conversion modulo β, unfolding of definitions (δ) and the rewrite
//! rules of the theory. There is no η-conversion.

mod error;
mod reduce;
mod term;
mod typing;

pub(crate) use error::fmt_path;
pub use error::{KernelError, KernelResult, PathStep};
pub use reduce::{convertible, head_rewrite, normalize, whnf, Kernel, DEFAULT_STEP_BUDGET};
pub use term::{Name, Sort, Term};
pub use typing::{check, infer, Context};
