use std::fmt;
use std::sync::Arc;

/// Identifiers and binder hints are shared, immutable strings.
pub type Name = Arc<str>;

/// The two sorts of the framework. `Kind` never appears in parsed input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Type,
    Kind,
}

/// Terms of the λΠ-calculus modulo rewriting, with de Bruijn indices.
///
/// Binder names and variable names are display hints only: equality
/// ignores them, so α-equivalent terms compare equal.
#[derive(Clone, Debug)]
pub enum Term {
    Sort(Sort),
    Const(Name),
    Var(usize, Name),
    App(Arc<Term>, Arc<Term>),
    Lam(Name, Arc<Term>, Arc<Term>),
    Pi(Name, Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Sort(a), Sort(b)) => a == b,
            (Const(a), Const(b)) => a == b,
            (Var(i, _), Var(j, _)) => i == j,
            (App(f, a), App(g, b)) => {
                (Arc::ptr_eq(f, g) || f == g) && (Arc::ptr_eq(a, b) || a == b)
            }
            (Lam(_, a, t), Lam(_, b, u)) | (Pi(_, a, t), Pi(_, b, u)) => {
                (Arc::ptr_eq(a, b) || a == b) && (Arc::ptr_eq(t, u) || t == u)
            }
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub const TYPE: Term = Term::Sort(Sort::Type);
    pub const KIND: Term = Term::Sort(Sort::Kind);

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn var(index: usize) -> Term {
        Term::Var(index, "_".into())
    }

    pub fn named_var(index: usize, hint: &str) -> Term {
        Term::Var(index, hint.into())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// Left-nested application of `head` to every argument in order.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(hint: &str, domain: Term, body: Term) -> Term {
        Term::Lam(hint.into(), Arc::new(domain), Arc::new(body))
    }

    pub fn pi(hint: &str, domain: Term, codomain: Term) -> Term {
        Term::Pi(hint.into(), Arc::new(domain), Arc::new(codomain))
    }

    /// Non-dependent product: `codomain` is written in the outer scope and is
    /// shifted under the new binder.
    pub fn arrow(domain: Term, codomain: Term) -> Term {
        Term::Pi("_".into(), Arc::new(domain), Arc::new(codomain.shift(1, 0)))
    }

    pub fn is_sort(&self, sort: Sort) -> bool {
        matches!(self, Term::Sort(s) if *s == sort)
    }

    /// Splits an application spine into its head and arguments (outermost
    /// argument last).
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Name of the head constant of the application spine, if any.
    pub fn head_constant(&self) -> Option<&Name> {
        match self.spine().0 {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Displaces every free variable with index `>= cutoff` by `d`.
    ///
    /// Panics if an index would drop below zero.
    pub fn shift(&self, d: isize, cutoff: usize) -> Term {
        if d == 0 || !self.has_free_at_or_above(cutoff) {
            return self.clone();
        }
        self.shift_inner(d, cutoff)
    }

    fn shift_inner(&self, d: isize, cutoff: usize) -> Term {
        match self {
            Term::Var(i, hint) if *i >= cutoff => {
                let moved = *i as isize + d;
                assert!(
                    moved >= cutoff as isize,
                    "de Bruijn shift by {d} moves free index {i} below cutoff {cutoff}"
                );
                Term::Var(moved as usize, hint.clone())
            }
            Term::Sort(_) | Term::Const(_) | Term::Var(..) => self.clone(),
            Term::App(f, a) => Term::App(
                Arc::new(f.shift_inner(d, cutoff)),
                Arc::new(a.shift_inner(d, cutoff)),
            ),
            Term::Lam(x, a, b) => Term::Lam(
                x.clone(),
                Arc::new(a.shift_inner(d, cutoff)),
                Arc::new(b.shift_inner(d, cutoff + 1)),
            ),
            Term::Pi(x, a, b) => Term::Pi(
                x.clone(),
                Arc::new(a.shift_inner(d, cutoff)),
                Arc::new(b.shift_inner(d, cutoff + 1)),
            ),
        }
    }

    /// Replaces free index `j` by `u` and removes that slot: free indices
    /// above `j` drop by one. `u` is expressed in the resulting context and
    /// is shifted as it moves under binders.
    pub fn subst(&self, j: usize, u: &Term) -> Term {
        self.subst_inner(j, u, 0)
    }

    fn subst_inner(&self, j: usize, u: &Term, depth: usize) -> Term {
        if !self.has_free_at_or_above(j + depth) {
            return self.clone();
        }
        match self {
            Term::Var(i, hint) => {
                let target = j + depth;
                if *i == target {
                    u.shift(depth as isize, 0)
                } else if *i > target {
                    Term::Var(i - 1, hint.clone())
                } else {
                    self.clone()
                }
            }
            Term::Sort(_) | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::App(
                Arc::new(f.subst_inner(j, u, depth)),
                Arc::new(a.subst_inner(j, u, depth)),
            ),
            Term::Lam(x, a, b) => Term::Lam(
                x.clone(),
                Arc::new(a.subst_inner(j, u, depth)),
                Arc::new(b.subst_inner(j, u, depth + 1)),
            ),
            Term::Pi(x, a, b) => Term::Pi(
                x.clone(),
                Arc::new(a.subst_inner(j, u, depth)),
                Arc::new(b.subst_inner(j, u, depth + 1)),
            ),
        }
    }

    /// β-contracts a binder body with `arg`: `body[0 := arg]`.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst(0, arg)
    }

    /// Whether any free variable index `>= cutoff` occurs.
    pub fn has_free_at_or_above(&self, cutoff: usize) -> bool {
        match self {
            Term::Var(i, _) => *i >= cutoff,
            Term::Sort(_) | Term::Const(_) => false,
            Term::App(f, a) => f.has_free_at_or_above(cutoff) || a.has_free_at_or_above(cutoff),
            Term::Lam(_, a, b) | Term::Pi(_, a, b) => {
                a.has_free_at_or_above(cutoff) || b.has_free_at_or_above(cutoff + 1)
            }
        }
    }

    /// Whether free index `index` occurs.
    pub fn has_free(&self, index: usize) -> bool {
        match self {
            Term::Var(i, _) => *i == index,
            Term::Sort(_) | Term::Const(_) => false,
            Term::App(f, a) => f.has_free(index) || a.has_free(index),
            Term::Lam(_, a, b) | Term::Pi(_, a, b) => a.has_free(index) || b.has_free(index + 1),
        }
    }

    /// Calls `f` on every constant name occurring in the term.
    pub fn for_each_constant<'a>(&'a self, f: &mut impl FnMut(&'a Name)) {
        match self {
            Term::Const(c) => f(c),
            Term::Sort(_) | Term::Var(..) => {}
            Term::App(g, a) => {
                g.for_each_constant(f);
                a.for_each_constant(f);
            }
            Term::Lam(_, a, b) | Term::Pi(_, a, b) => {
                a.for_each_constant(f);
                b.for_each_constant(f);
            }
        }
    }

    pub fn mentions_constant(&self, name: &str) -> bool {
        let mut found = false;
        self.for_each_constant(&mut |c| found |= &**c == name);
        found
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Term::Sort(_) | Term::Const(_) | Term::Var(..) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, a, b) | Term::Pi(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Returns a copy with every binder and variable hint replaced by `f`'s
    /// output. Only used to check that hints carry no meaning.
    pub fn map_hints(&self, f: &mut impl FnMut(&str) -> String) -> Term {
        match self {
            Term::Sort(_) | Term::Const(_) => self.clone(),
            Term::Var(i, h) => Term::Var(*i, f(h).into()),
            Term::App(g, a) => Term::app(g.map_hints(f), a.map_hints(f)),
            Term::Lam(x, a, b) => {
                let x = f(x);
                Term::lam(&x, a.map_hints(f), b.map_hints(f))
            }
            Term::Pi(x, a, b) => {
                let x = f(x);
                Term::pi(&x, a.map_hints(f), b.map_hints(f))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}
