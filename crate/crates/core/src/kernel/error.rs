use std::fmt;

use super::term::{Name, Term};
use crate::syntax::print_term_in;

/// One step from a term to one of its immediate subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    AppFn,
    AppArg,
    LamDomain,
    LamBody,
    PiDomain,
    PiCodomain,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathStep::AppFn => "fn",
            PathStep::AppArg => "arg",
            PathStep::LamDomain => "lam.domain",
            PathStep::LamBody => "lam.body",
            PathStep::PiDomain => "pi.domain",
            PathStep::PiCodomain => "pi.codomain",
        })
    }
}

pub(crate) fn fmt_path(path: &[PathStep]) -> String {
    if path.is_empty() {
        return "<root>".to_string();
    }
    path.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("/")
}

/// Failures of the type checker and the reduction engine.
///
/// Terms are stored with the names of the context they live in, so they
/// can be printed with their original variable names.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("unbound variable #{index} in a context of {} entries", context.len())]
    UnboundVariable { index: usize, context: Vec<Name> },
    #[error("unknown constant `{name}`")]
    UnknownConstant { name: Name },
    #[error(
        "`{}` is applied but its type `{}` is not a product",
        print_term_in(context, term),
        print_term_in(context, ty)
    )]
    NotAFunction {
        term: Term,
        ty: Term,
        context: Vec<Name>,
    },
    /// `term` was required to be a type (or a kind) but has type `ty`.
    #[error(
        "`{}` is not a type: it has type `{}`",
        print_term_in(context, term),
        print_term_in(context, ty)
    )]
    SortError {
        term: Term,
        ty: Term,
        context: Vec<Name>,
    },
    #[error(
        "type mismatch at {}: `{}` has type `{}` but `{}` was expected",
        fmt_path(path),
        print_term_in(context, term),
        print_term_in(context, inferred),
        print_term_in(context, expected)
    )]
    TypeMismatch {
        term: Term,
        expected: Term,
        inferred: Term,
        context: Vec<Name>,
        path: Vec<PathStep>,
    },
    #[error(
        "reduction step budget of {budget} exceeded while reducing `{}`",
        print_term_in(&[], term)
    )]
    BudgetExceeded { term: Term, budget: u64 },
}

impl KernelError {
    /// Prefixes the location of a type mismatch with `step`.
    pub(crate) fn within(mut self, step: PathStep) -> Self {
        if let KernelError::TypeMismatch { path, .. } = &mut self {
            path.insert(0, step);
        }
        self
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self, KernelError::BudgetExceeded { .. })
    }
}

pub type KernelResult<T> = Result<T, KernelError>;
