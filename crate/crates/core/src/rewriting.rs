//! First-order, left-linear rewrite rules extending definitional equality.
//!
//! A rule `[x₁ : A₁, …, xₙ : Aₙ] lhs --> rhs` binds its variables in a small
//! context. Inside `rhs` (a [`Term`]) the rule variables are de Bruijn
//! indices, `xₙ` being index 0. The left-hand side is a [`Pattern`] naming
//! the variables it binds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{Name, Term};

/// Left-hand sides of rewrite rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Var(Name),
    Const(Name),
    /// A constant applied to one or more argument patterns.
    App(Name, Vec<Pattern>),
}

/// Assignment of rule variables to terms produced by a successful match.
pub type SubstitutionMap = BTreeMap<Name, Term>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule left-hand side must be headed by a constant")]
    HeadNotConstant,
    #[error("pattern variable `{0}` occurs more than once (rules must be left-linear)")]
    NonLinear(Name),
    #[error("pattern variable `{0}` is applied to arguments (patterns must be first-order)")]
    VariableApplied(Name),
    #[error("rule left-hand side contains {0}, which is outside the first-order pattern fragment")]
    NotAPattern(&'static str),
    #[error("rule variable `{0}` is declared twice")]
    DuplicateVariable(Name),
    #[error("`{0}` is not a variable of this rule")]
    UnknownVariable(Name),
    #[error("rule variable `{0}` occurs in the right-hand side but not in the left-hand side")]
    UnboundInRhs(Name),
    #[error("right-hand side refers to a variable outside the rule context")]
    RhsNotClosed,
}

impl Pattern {
    pub fn head(&self) -> Option<&Name> {
        match self {
            Pattern::Var(_) => None,
            Pattern::Const(c) | Pattern::App(c, _) => Some(c),
        }
    }

    pub fn args(&self) -> &[Pattern] {
        match self {
            Pattern::App(_, args) => args,
            _ => &[],
        }
    }

    /// Converts a term over the rule variables `vars` (outermost first) into
    /// a pattern, rejecting anything outside the first-order fragment.
    /// Linearity is checked by [`RewriteRule::new`].
    pub fn from_term(t: &Term, vars: &[Name]) -> Result<Pattern, RuleError> {
        let (head, args) = t.spine();
        let head = match head {
            Term::Const(c) => c.clone(),
            Term::Var(i, _) => {
                let name = var_name(*i, vars)?;
                if !args.is_empty() {
                    return Err(RuleError::VariableApplied(name));
                }
                return Ok(Pattern::Var(name));
            }
            Term::Sort(_) => return Err(RuleError::NotAPattern("a sort")),
            Term::Lam(..) => return Err(RuleError::NotAPattern("an abstraction")),
            Term::Pi(..) => return Err(RuleError::NotAPattern("a product")),
            Term::App(..) => unreachable!("spine head is never an application"),
        };
        if args.is_empty() {
            return Ok(Pattern::Const(head));
        }
        let args = args
            .into_iter()
            .map(|a| Pattern::from_term(a, vars))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pattern::App(head, args))
    }

    /// Reads the pattern back as a term over `vars` (outermost first).
    pub fn to_term(&self, vars: &[Name]) -> Term {
        match self {
            Pattern::Var(x) => {
                let pos = vars
                    .iter()
                    .rposition(|v| v == x)
                    .expect("pattern variable belongs to the rule context");
                Term::Var(vars.len() - 1 - pos, x.clone())
            }
            Pattern::Const(c) => Term::Const(c.clone()),
            Pattern::App(c, args) => {
                Term::apps(Term::Const(c.clone()), args.iter().map(|a| a.to_term(vars)))
            }
        }
    }

    /// Every pattern variable, in left-to-right order (with repetitions).
    pub fn variables(&self) -> Vec<&Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a Name>) {
        match self {
            Pattern::Var(x) => out.push(x),
            Pattern::Const(_) => {}
            Pattern::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn constants(&self) -> Vec<&Name> {
        let mut out = Vec::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts<'a>(&'a self, out: &mut Vec<&'a Name>) {
        match self {
            Pattern::Var(_) => {}
            Pattern::Const(c) => out.push(c),
            Pattern::App(c, args) => {
                out.push(c);
                args.iter().for_each(|a| a.collect_consts(out));
            }
        }
    }
}

fn var_name(index: usize, vars: &[Name]) -> Result<Name, RuleError> {
    vars.len()
        .checked_sub(index + 1)
        .map(|pos| vars[pos].clone())
        .ok_or(RuleError::NotAPattern(
            "a variable bound outside the rule context",
        ))
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(x) | Pattern::Const(x) => write!(f, "{x}"),
            Pattern::App(c, args) => {
                write!(f, "{c}")?;
                for a in args {
                    match a {
                        Pattern::App(..) => write!(f, " ({a})")?,
                        _ => write!(f, " {a}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// A variable of a rule context with its (optional) type annotation, which
/// is a term over the preceding rule variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleVar {
    pub name: Name,
    pub ty: Option<Term>,
}

impl RuleVar {
    pub fn new(name: &str, ty: Term) -> RuleVar {
        RuleVar {
            name: name.into(),
            ty: Some(ty),
        }
    }

    pub fn untyped(name: &str) -> RuleVar {
        RuleVar {
            name: name.into(),
            ty: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    vars: Vec<RuleVar>,
    lhs: Pattern,
    rhs: Term,
}

impl RewriteRule {
    pub fn new(vars: Vec<RuleVar>, lhs: Pattern, rhs: Term) -> Result<RewriteRule, RuleError> {
        if lhs.head().is_none() {
            return Err(RuleError::HeadNotConstant);
        }
        let mut declared = BTreeSet::new();
        for v in &vars {
            if !declared.insert(&v.name) {
                return Err(RuleError::DuplicateVariable(v.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for x in lhs.variables() {
            if !declared.contains(x) {
                return Err(RuleError::UnknownVariable(x.clone()));
            }
            if !seen.insert(x) {
                return Err(RuleError::NonLinear(x.clone()));
            }
        }
        let n = vars.len();
        if rhs.has_free_at_or_above(n) {
            return Err(RuleError::RhsNotClosed);
        }
        for (pos, v) in vars.iter().enumerate() {
            if rhs.has_free(n - 1 - pos) && !seen.contains(&v.name) {
                return Err(RuleError::UnboundInRhs(v.name.clone()));
            }
        }
        Ok(RewriteRule { vars, lhs, rhs })
    }

    pub fn vars(&self) -> &[RuleVar] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<Name> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn lhs(&self) -> &Pattern {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn head(&self) -> &Name {
        self.lhs.head().expect("checked at construction")
    }

    /// Number of arguments the head symbol takes in the left-hand side.
    pub fn arity(&self) -> usize {
        self.lhs.args().len()
    }

    pub fn lhs_term(&self) -> Term {
        self.lhs.to_term(&self.var_names())
    }

    /// Instantiates the right-hand side with a match result. Matched terms
    /// live in the ambient context and are shifted under the binders of the
    /// right-hand side.
    pub fn instantiate(&self, sigma: &SubstitutionMap) -> Term {
        let values: Vec<Option<&Term>> = self.vars.iter().map(|v| sigma.get(&v.name)).collect();
        instantiate_at(&self.rhs, &values, 0)
    }

    /// Rebuilds the rule with new variable types and right-hand side,
    /// keeping the left-hand side.
    pub fn with_parts(
        &self,
        var_types: Vec<Option<Term>>,
        rhs: Term,
    ) -> Result<RewriteRule, RuleError> {
        let vars = self
            .vars
            .iter()
            .zip(var_types)
            .map(|(v, ty)| RuleVar {
                name: v.name.clone(),
                ty,
            })
            .collect();
        RewriteRule::new(vars, self.lhs.clone(), rhs)
    }
}

fn instantiate_at(t: &Term, values: &[Option<&Term>], depth: usize) -> Term {
    if !t.has_free_at_or_above(depth) {
        return t.clone();
    }
    let n = values.len();
    match t {
        Term::Var(i, _) => {
            let r = i - depth;
            let value = values[n - 1 - r].expect("rule invariant: rhs variables occur in lhs");
            value.shift(depth as isize, 0)
        }
        Term::Sort(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(
            instantiate_at(f, values, depth),
            instantiate_at(a, values, depth),
        ),
        Term::Lam(x, a, b) => Term::Lam(
            x.clone(),
            instantiate_at(a, values, depth).into(),
            instantiate_at(b, values, depth + 1).into(),
        ),
        Term::Pi(x, a, b) => Term::Pi(
            x.clone(),
            instantiate_at(a, values, depth).into(),
            instantiate_at(b, values, depth + 1).into(),
        ),
    }
}

/// Purely syntactic first-order matching.
pub fn match_pattern(p: &Pattern, t: &Term) -> Option<SubstitutionMap> {
    let mut sigma = SubstitutionMap::new();
    let ok = match_with::<std::convert::Infallible>(p, t, &mut sigma, &mut None)
        .unwrap_or_else(|e| match e {});
    ok.then_some(sigma)
}

pub(crate) type Reducer<'r, E> = Option<&'r mut dyn FnMut(&Term) -> Result<Term, E>>;

/// Matches `p` against `t`, binding into `sigma`. When a rigid position
/// fails to match syntactically and `reduce` is given, the subterm is
/// reduced (to weak head normal form) and matched again.
pub(crate) fn match_with<E>(
    p: &Pattern,
    t: &Term,
    sigma: &mut SubstitutionMap,
    reduce: &mut Reducer<'_, E>,
) -> Result<bool, E> {
    match p {
        Pattern::Var(x) => {
            sigma.insert(x.clone(), t.clone());
            Ok(true)
        }
        Pattern::Const(_) | Pattern::App(..) => {
            if match_rigid(p, t, sigma, reduce)? {
                return Ok(true);
            }
            if let Some(r) = reduce {
                let reduced = r(t)?;
                if reduced != *t {
                    return match_rigid(p, &reduced, sigma, reduce);
                }
            }
            Ok(false)
        }
    }
}

fn match_rigid<E>(
    p: &Pattern,
    t: &Term,
    sigma: &mut SubstitutionMap,
    reduce: &mut Reducer<'_, E>,
) -> Result<bool, E> {
    let (head, args) = t.spine();
    let Term::Const(c) = head else {
        return Ok(false);
    };
    if Some(c) != p.head() || args.len() != p.args().len() {
        return Ok(false);
    }
    match_args(p.args(), &args, sigma, reduce)
}

pub(crate) fn match_args<E>(
    pats: &[Pattern],
    args: &[&Term],
    sigma: &mut SubstitutionMap,
    reduce: &mut Reducer<'_, E>,
) -> Result<bool, E> {
    for (p, a) in pats.iter().zip(args) {
        if !match_with(p, a, sigma, reduce)? {
            return Ok(false);
        }
    }
    Ok(true)
}
