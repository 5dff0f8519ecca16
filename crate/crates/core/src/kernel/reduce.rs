use std::cell::Cell;

use super::error::{KernelError, KernelResult};
use super::term::{Sort, Term};
use crate::rewriting::{match_args, SubstitutionMap};
use crate::signature::Theory;

/// Default bound on head reduction steps per kernel session.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// A checking session over a theory.
///
/// Every head step (β, δ or rewrite) counts against the step budget, which
/// is shared by all operations run through the same `Kernel`.
pub struct Kernel<'t> {
    pub(crate) theory: &'t Theory,
    budget: u64,
    used: Cell<u64>,
}

impl<'t> Kernel<'t> {
    pub fn new(theory: &'t Theory) -> Kernel<'t> {
        Kernel::with_budget(theory, theory.step_budget())
    }

    pub fn with_budget(theory: &'t Theory, budget: u64) -> Kernel<'t> {
        Kernel {
            theory,
            budget,
            used: Cell::new(0),
        }
    }

    pub fn theory(&self) -> &'t Theory {
        self.theory
    }

    /// Head steps consumed so far.
    pub fn steps_used(&self) -> u64 {
        self.used.get()
    }

    fn tick(&self, t: &Term) -> KernelResult<()> {
        let used = self.used.get() + 1;
        if used > self.budget {
            return Err(KernelError::BudgetExceeded {
                term: t.clone(),
                budget: self.budget,
            });
        }
        self.used.set(used);
        Ok(())
    }

    /// Performs one head reduction step, if any applies: β-contraction of a
    /// head redex, unfolding of a defined head constant, or a head rewrite.
    pub fn head_step(&self, t: &Term) -> KernelResult<Option<Term>> {
        let (head, args) = t.spine();
        match head {
            Term::Lam(_, _, body) if !args.is_empty() => {
                let reduced = body.instantiate(args[0]);
                Ok(Some(Term::apps(
                    reduced,
                    args[1..].iter().map(|a| (*a).clone()),
                )))
            }
            Term::Const(c) => {
                if let Some(body) = self.theory.const_body(c) {
                    return Ok(Some(Term::apps(
                        body.clone(),
                        args.iter().map(|a| (*a).clone()),
                    )));
                }
                self.head_rewrite(t)
            }
            _ => Ok(None),
        }
    }

    /// Tries the rules of `t`'s head constant in declaration order and
    /// returns the instantiated right-hand side of the first that matches.
    /// Arguments are reduced to weak head normal form only where a pattern
    /// needs to inspect their head.
    pub fn head_rewrite(&self, t: &Term) -> KernelResult<Option<Term>> {
        let (head, args) = t.spine();
        let Term::Const(c) = head else {
            return Ok(None);
        };
        for rule in self.theory.rules_for(c) {
            let arity = rule.arity();
            if args.len() < arity {
                continue;
            }
            let mut sigma = SubstitutionMap::new();
            let mut whnf = |u: &Term| self.whnf(u);
            let mut reducer: crate::rewriting::Reducer<'_, KernelError> = Some(&mut whnf);
            if match_args(rule.lhs().args(), &args[..arity], &mut sigma, &mut reducer)? {
                let rhs = rule.instantiate(&sigma);
                return Ok(Some(Term::apps(
                    rhs,
                    args[arity..].iter().map(|a| (*a).clone()),
                )));
            }
        }
        Ok(None)
    }

    /// Weak head normal form modulo β, δ and the theory's rewrite rules.
    /// Never reduces under binders.
    pub fn whnf(&self, t: &Term) -> KernelResult<Term> {
        let mut current = t.clone();
        while let Some(next) = self.head_step(&current)? {
            self.tick(&current)?;
            current = next;
        }
        Ok(current)
    }

    /// Full βδ-rewrite normal form, reducing under binders.
    pub fn normalize(&self, t: &Term) -> KernelResult<Term> {
        let w = self.whnf(t)?;
        Ok(match &w {
            Term::Lam(x, a, b) => Term::Lam(
                x.clone(),
                self.normalize(a)?.into(),
                self.normalize(b)?.into(),
            ),
            Term::Pi(x, a, b) => Term::Pi(
                x.clone(),
                self.normalize(a)?.into(),
                self.normalize(b)?.into(),
            ),
            Term::App(..) => {
                let (head, args) = w.spine();
                let head = match head {
                    Term::Lam(..) | Term::Pi(..) => self.normalize(head)?,
                    _ => head.clone(),
                };
                let args = args
                    .into_iter()
                    .map(|a| self.normalize(a))
                    .collect::<KernelResult<Vec<_>>>()?;
                Term::apps(head, args)
            }
            _ => w,
        })
    }

    /// β-normal form only: no definition unfolding and no rewriting.
    pub fn beta_normalize(&self, t: &Term) -> KernelResult<Term> {
        Ok(match t {
            Term::App(f, a) => {
                let f = self.beta_normalize(f)?;
                if let Term::Lam(_, _, body) = &f {
                    self.tick(t)?;
                    self.beta_normalize(&body.instantiate(a))?
                } else {
                    Term::app(f, self.beta_normalize(a)?)
                }
            }
            Term::Lam(x, a, b) => Term::Lam(
                x.clone(),
                self.beta_normalize(a)?.into(),
                self.beta_normalize(b)?.into(),
            ),
            Term::Pi(x, a, b) => Term::Pi(
                x.clone(),
                self.beta_normalize(a)?.into(),
                self.beta_normalize(b)?.into(),
            ),
            _ => t.clone(),
        })
    }

    /// A constant whose applications can never reduce at the head.
    fn is_rigid(&self, c: &str) -> bool {
        self.theory.const_body(c).is_none() && self.theory.rules_for(c).is_empty()
    }

    /// Equality modulo β, δ and rewriting: weak head normalize both sides,
    /// then compare structurally, recursing at every mismatch.
    pub fn convertible(&self, t: &Term, u: &Term) -> KernelResult<bool> {
        if t == u {
            return Ok(true);
        }
        {
            let (ht, at) = t.spine();
            let (hu, au) = u.spine();
            if let (Term::Const(c), Term::Const(d)) = (ht, hu) {
                if c == d && at.len() == au.len() && self.is_rigid(c) {
                    return self.all_convertible(&at, &au);
                }
            }
        }
        let t = self.whnf(t)?;
        let u = self.whnf(u)?;
        if t == u {
            return Ok(true);
        }
        match (&t, &u) {
            (Term::Sort(a), Term::Sort(b)) => Ok(a == b),
            (Term::Pi(_, a, b), Term::Pi(_, c, d)) | (Term::Lam(_, a, b), Term::Lam(_, c, d)) => {
                Ok(self.convertible(a, c)? && self.convertible(b, d)?)
            }
            (Term::App(..), Term::App(..)) => {
                let (ht, at) = t.spine();
                let (hu, au) = u.spine();
                if at.len() != au.len() || !self.convertible(ht, hu)? {
                    return Ok(false);
                }
                self.all_convertible(&at, &au)
            }
            _ => Ok(false),
        }
    }

    fn all_convertible(&self, ts: &[&Term], us: &[&Term]) -> KernelResult<bool> {
        for (a, b) in ts.iter().zip(us) {
            if !self.convertible(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn whnf_sort(&self, t: &Term) -> KernelResult<Option<Sort>> {
        Ok(match self.whnf(t)? {
            Term::Sort(s) => Some(s),
            _ => None,
        })
    }
}

/// Weak head normal form with a fresh session on `theory`.
pub fn whnf(theory: &Theory, t: &Term) -> KernelResult<Term> {
    Kernel::new(theory).whnf(t)
}

pub fn normalize(theory: &Theory, t: &Term) -> KernelResult<Term> {
    Kernel::new(theory).normalize(t)
}

pub fn convertible(theory: &Theory, t: &Term, u: &Term) -> KernelResult<bool> {
    Kernel::new(theory).convertible(t, u)
}

pub fn head_rewrite(theory: &Theory, t: &Term) -> KernelResult<Option<Term>> {
    Kernel::new(theory).head_rewrite(t)
}
