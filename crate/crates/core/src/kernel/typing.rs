use super::error::{KernelError, KernelResult, PathStep};
use super::reduce::Kernel;
use super::term::{Name, Sort, Term};
use crate::signature::Theory;

/// Typing context, innermost binder last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds a binder whose type lives in the current context.
    pub fn push(&mut self, name: Name, ty: Term) {
        self.entries.push((name, ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    /// Type of variable `index`, shifted to be valid in the whole context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(self.entries[pos].1.shift(index as isize + 1, 0))
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }
}

impl FromIterator<(Name, Term)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        Context {
            entries: iter.into_iter().collect(),
        }
    }
}

impl Kernel<'_> {
    /// Infers the type of `t` in `ctx`.
    pub fn infer(&self, ctx: &mut Context, t: &Term) -> KernelResult<Term> {
        match t {
            Term::Sort(Sort::Type) => Ok(Term::KIND),
            Term::Sort(Sort::Kind) => Err(KernelError::SortError {
                term: t.clone(),
                ty: Term::KIND,
                context: ctx.names(),
            }),
            Term::Var(i, _) => ctx.lookup(*i).ok_or_else(|| KernelError::UnboundVariable {
                index: *i,
                context: ctx.names(),
            }),
            Term::Const(c) => self
                .theory
                .const_type(c)
                .cloned()
                .ok_or_else(|| KernelError::UnknownConstant { name: c.clone() }),
            Term::App(f, a) => {
                let fty = self.infer(ctx, f).map_err(|e| e.within(PathStep::AppFn))?;
                match self.whnf(&fty)? {
                    Term::Pi(_, dom, cod) => {
                        self.check(ctx, a, &dom)
                            .map_err(|e| e.within(PathStep::AppArg))?;
                        Ok(cod.instantiate(a))
                    }
                    _ => Err(KernelError::NotAFunction {
                        term: (**f).clone(),
                        ty: fty,
                        context: ctx.names(),
                    }),
                }
            }
            Term::Lam(x, dom, body) => {
                self.expect_type(ctx, dom)
                    .map_err(|e| e.within(PathStep::LamDomain))?;
                ctx.push(x.clone(), (**dom).clone());
                let body_ty = self.infer(ctx, body);
                let body_ty = match body_ty {
                    Ok(ty) if ty.is_sort(Sort::Kind) => Err(KernelError::SortError {
                        term: (**body).clone(),
                        ty,
                        context: ctx.names(),
                    }),
                    other => other.map_err(|e| e.within(PathStep::LamBody)),
                };
                ctx.pop();
                Ok(Term::Pi(x.clone(), dom.clone(), body_ty?.into()))
            }
            Term::Pi(x, dom, cod) => {
                self.expect_type(ctx, dom)
                    .map_err(|e| e.within(PathStep::PiDomain))?;
                ctx.push(x.clone(), (**dom).clone());
                let sort = self
                    .infer_sort(ctx, cod)
                    .map_err(|e| e.within(PathStep::PiCodomain));
                ctx.pop();
                Ok(Term::Sort(sort?))
            }
        }
    }

    /// Infers the sort of a type or kind.
    pub fn infer_sort(&self, ctx: &mut Context, t: &Term) -> KernelResult<Sort> {
        let ty = self.infer(ctx, t)?;
        self.whnf_sort(&ty)?.ok_or_else(|| KernelError::SortError {
            term: t.clone(),
            ty,
            context: ctx.names(),
        })
    }

    /// Requires `t : Type`, as for the domain of a binder.
    fn expect_type(&self, ctx: &mut Context, t: &Term) -> KernelResult<()> {
        match self.infer_sort(ctx, t)? {
            Sort::Type => Ok(()),
            Sort::Kind => Err(KernelError::SortError {
                term: t.clone(),
                ty: Term::KIND,
                context: ctx.names(),
            }),
        }
    }

    /// Checks `t` against `expected`, which must be a well-formed type or
    /// kind. Abstractions are checked against products binder by binder.
    pub fn check(&self, ctx: &mut Context, t: &Term, expected: &Term) -> KernelResult<()> {
        if let Term::Lam(x, dom, body) = t {
            if let Term::Pi(_, pdom, cod) = self.whnf(expected)? {
                self.expect_type(ctx, dom)
                    .map_err(|e| e.within(PathStep::LamDomain))?;
                if !self.convertible(dom, &pdom)? {
                    return Err(KernelError::TypeMismatch {
                        term: (**dom).clone(),
                        expected: (*pdom).clone(),
                        inferred: (**dom).clone(),
                        context: ctx.names(),
                        path: vec![PathStep::LamDomain],
                    });
                }
                ctx.push(x.clone(), (**dom).clone());
                let r = self
                    .check(ctx, body, &cod)
                    .map_err(|e| e.within(PathStep::LamBody));
                ctx.pop();
                return r;
            }
        }
        let inferred = self.infer(ctx, t)?;
        if self.convertible(&inferred, expected)? {
            Ok(())
        } else {
            Err(KernelError::TypeMismatch {
                term: t.clone(),
                expected: expected.clone(),
                inferred,
                context: ctx.names(),
                path: Vec::new(),
            })
        }
    }
}

pub fn infer(theory: &Theory, ctx: &Context, t: &Term) -> KernelResult<Term> {
    Kernel::new(theory).infer(&mut ctx.clone(), t)
}

pub fn check(theory: &Theory, ctx: &Context, t: &Term, expected: &Term) -> KernelResult<()> {
    Kernel::new(theory).check(&mut ctx.clone(), t, expected)
}
