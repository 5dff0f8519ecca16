//! The built-in encodings: simple type theory (`D[HOLL]`, 8 declarations and
//! 3 rules) and the calculus of constructions (`D[Mat]`, 9 declarations and
//! 4 rules).
//!
//! Symbols: `type` is the universe of object types, `eta a` the terms of
//! object type `a`, `o` the type of propositions, `eps p` the proofs of `p`,
//! `arrow` the object function type, `imp` implication, `forall` the
//! quantifier over terms, and `pi` (CoC only) the type of functions from
//! proofs to terms. In CoC `arrow` and `imp` take a family over their first
//! argument instead of a plain second argument.

use std::fmt;
use std::sync::OnceLock;

use crate::kernel::Term;
use crate::rewriting::{Pattern, RewriteRule, RuleVar};
use crate::signature::{Entry, SealedTheory, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoryId {
    Stt,
    Coc,
}

impl TheoryId {
    pub fn display_name(self) -> &'static str {
        match self {
            TheoryId::Stt => "D[HOLL]",
            TheoryId::Coc => "D[Mat]",
        }
    }

    pub fn theory(self) -> SealedTheory {
        match self {
            TheoryId::Stt => stt_theory(),
            TheoryId::Coc => coc_theory(),
        }
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

fn c(name: &str) -> Term {
    Term::constant(name)
}

fn v(index: usize, hint: &str) -> Term {
    Term::named_var(index, hint)
}

fn app(f: &str, args: impl IntoIterator<Item = Term>) -> Term {
    Term::apps(c(f), args)
}

fn eta(a: Term) -> Term {
    app("eta", [a])
}

fn eps(p: Term) -> Term {
    app("eps", [p])
}

fn pv(name: &str) -> Pattern {
    Pattern::Var(name.into())
}

fn pat(head: &str, args: Vec<Pattern>) -> Pattern {
    Pattern::App(head.into(), args)
}

fn rule(vars: Vec<RuleVar>, lhs: Pattern, rhs: Term) -> Entry {
    Entry::Rule(RewriteRule::new(vars, lhs, rhs).expect("built-in rule is well formed"))
}

/// `type`, `iota` and `o`, identical in both encodings.
fn common_head() -> [Entry; 3] {
    [
        Entry::declaration("type", Term::TYPE),
        Entry::declaration("iota", c("type")),
        Entry::declaration("o", c("type")),
    ]
}

fn eta_eps_decls() -> [Entry; 2] {
    [
        Entry::declaration("eta", Term::arrow(c("type"), Term::TYPE)),
        Entry::declaration("eps", Term::arrow(eta(c("o")), Term::TYPE)),
    ]
}

/// `forall : (a : type) -> (eta a -> eta o) -> eta o`
fn forall_decl() -> Entry {
    Entry::declaration(
        "forall",
        Term::pi(
            "a",
            c("type"),
            Term::arrow(Term::arrow(eta(v(0, "a")), eta(c("o"))), eta(c("o"))),
        ),
    )
}

/// `[a : type, f : eta a -> eta o] eps (forall a f) --> (x : eta a) -> eps (f x)`
fn forall_rule() -> Entry {
    rule(
        vec![
            RuleVar::new("a", c("type")),
            RuleVar::new("f", Term::arrow(eta(v(0, "a")), eta(c("o")))),
        ],
        pat("eps", vec![pat("forall", vec![pv("a"), pv("f")])]),
        Term::pi("x", eta(v(1, "a")), eps(Term::app(v(1, "f"), v(0, "x")))),
    )
}

/// Entries of the simple type theory encoding, in order.
pub fn stt_entries() -> Vec<Entry> {
    let [ty, iota, o] = common_head();
    let [eta_d, eps_d] = eta_eps_decls();
    vec![
        ty,
        iota,
        o,
        Entry::declaration(
            "arrow",
            Term::arrow(c("type"), Term::arrow(c("type"), c("type"))),
        ),
        eta_d,
        eps_d,
        Entry::declaration(
            "imp",
            Term::arrow(eta(c("o")), Term::arrow(eta(c("o")), eta(c("o")))),
        ),
        forall_decl(),
        // eta (arrow a b) --> eta a -> eta b
        rule(
            vec![RuleVar::new("a", c("type")), RuleVar::new("b", c("type"))],
            pat("eta", vec![pat("arrow", vec![pv("a"), pv("b")])]),
            Term::arrow(eta(v(1, "a")), eta(v(0, "b"))),
        ),
        // eps (imp p q) --> eps p -> eps q
        rule(
            vec![
                RuleVar::new("p", eta(c("o"))),
                RuleVar::new("q", eta(c("o"))),
            ],
            pat("eps", vec![pat("imp", vec![pv("p"), pv("q")])]),
            Term::arrow(eps(v(1, "p")), eps(v(0, "q"))),
        ),
        forall_rule(),
    ]
}

/// Entries of the calculus of constructions encoding, in order.
pub fn coc_entries() -> Vec<Entry> {
    let [ty, iota, o] = common_head();
    let [eta_d, eps_d] = eta_eps_decls();
    vec![
        ty,
        iota,
        o,
        eta_d,
        // arrow : (a : type) -> (eta a -> type) -> type
        Entry::declaration(
            "arrow",
            Term::pi(
                "a",
                c("type"),
                Term::arrow(Term::arrow(eta(v(0, "a")), c("type")), c("type")),
            ),
        ),
        eps_d,
        // imp : (p : eta o) -> (eps p -> eta o) -> eta o
        Entry::declaration(
            "imp",
            Term::pi(
                "p",
                eta(c("o")),
                Term::arrow(Term::arrow(eps(v(0, "p")), eta(c("o"))), eta(c("o"))),
            ),
        ),
        forall_decl(),
        // pi : (p : eta o) -> (eps p -> type) -> type
        Entry::declaration(
            "pi",
            Term::pi(
                "p",
                eta(c("o")),
                Term::arrow(Term::arrow(eps(v(0, "p")), c("type")), c("type")),
            ),
        ),
        // eta (arrow a b) --> (x : eta a) -> eta (b x)
        rule(
            vec![
                RuleVar::new("a", c("type")),
                RuleVar::new("b", Term::arrow(eta(v(0, "a")), c("type"))),
            ],
            pat("eta", vec![pat("arrow", vec![pv("a"), pv("b")])]),
            Term::pi("x", eta(v(1, "a")), eta(Term::app(v(1, "b"), v(0, "x")))),
        ),
        // eps (imp p q) --> (h : eps p) -> eps (q h)
        rule(
            vec![
                RuleVar::new("p", eta(c("o"))),
                RuleVar::new("q", Term::arrow(eps(v(0, "p")), eta(c("o")))),
            ],
            pat("eps", vec![pat("imp", vec![pv("p"), pv("q")])]),
            Term::pi("h", eps(v(1, "p")), eps(Term::app(v(1, "q"), v(0, "h")))),
        ),
        forall_rule(),
        // eta (pi p f) --> (h : eps p) -> eta (f h)
        rule(
            vec![
                RuleVar::new("p", eta(c("o"))),
                RuleVar::new("f", Term::arrow(eps(v(0, "p")), c("type"))),
            ],
            pat("eta", vec![pat("pi", vec![pv("p"), pv("f")])]),
            Term::pi("h", eps(v(1, "p")), eta(Term::app(v(1, "f"), v(0, "h")))),
        ),
    ]
}

fn build(name: &str, entries: Vec<Entry>) -> SealedTheory {
    Theory::from_entries(name, entries)
        .unwrap_or_else(|e| panic!("built-in theory {name} fails validation: {e}"))
        .seal()
}

pub fn stt_theory() -> SealedTheory {
    static STT: OnceLock<SealedTheory> = OnceLock::new();
    STT.get_or_init(|| build(TheoryId::Stt.display_name(), stt_entries()))
        .clone()
}

pub fn coc_theory() -> SealedTheory {
    static COC: OnceLock<SealedTheory> = OnceLock::new();
    COC.get_or_init(|| build(TheoryId::Coc.display_name(), coc_entries()))
        .clone()
}

/// Whether `name` is one of the symbols of the built-in encodings.
pub fn is_theory_symbol(name: &str) -> bool {
    matches!(
        name,
        "type" | "iota" | "o" | "arrow" | "eta" | "eps" | "imp" | "forall" | "pi"
    )
}
