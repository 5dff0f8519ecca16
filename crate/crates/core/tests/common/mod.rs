#![allow(dead_code)]

use std::path::PathBuf;

use lpm_core::signature::{Entry, SealedTheory, Theory};
use lpm_core::syntax::parse_file;
use lpm_core::theories::{coc_theory, stt_theory};
use lpm_core::Term;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn repo_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(repo_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn load(rel: &str) -> Vec<Entry> {
    parse_file(&read(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn holl() -> Vec<Entry> {
    load("corpus/holl.lpm")
}

pub fn arith() -> Vec<Entry> {
    load("corpus/arith.lpm")
}

/// `base` extended with `entries`, all of which must check.
pub fn library(base: SealedTheory, entries: &[Entry]) -> Theory {
    let mut t = base.extend("library");
    for e in entries {
        t.add_entry(e.clone()).unwrap_or_else(|err| panic!("{err}"));
    }
    t
}

pub fn holl_library() -> Theory {
    library(stt_theory(), &holl())
}

pub fn arith_library() -> Theory {
    library(coc_theory(), &arith())
}

/// Every closed term of a library: types and bodies of declarations and
/// definitions.
pub fn entry_terms(entries: &[Entry]) -> Vec<Term> {
    let mut out = Vec::new();
    for e in entries {
        match e {
            Entry::Declaration { ty, .. } => out.push(ty.clone()),
            Entry::Definition { ty, body, .. } => {
                out.push(ty.clone());
                out.push(body.clone());
            }
            Entry::Rule(_) => {}
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(name: &str) -> Term {
    Term::constant(name)
}

pub fn app(f: &str, args: impl IntoIterator<Item = Term>) -> Term {
    Term::apps(c(f), args)
}

pub fn eta(a: Term) -> Term {
    app("eta", [a])
}

pub fn eps(p: Term) -> Term {
    app("eps", [p])
}

const HINTS: [&str; 7] = ["x", "y", "z", "p", "f", "a", "_"];
const CONSTS: [&str; 6] = ["c", "d", "f", "iota", "o", "x1"];

/// A random well-scoped term with free variables below `scope`, of roughly
/// `size` nodes. `Kind` never occurs.
pub fn raw_term(rng: &mut impl Rng, scope: usize, size: usize) -> Term {
    if size <= 1 {
        return match rng.gen_range(0..5) {
            0 => Term::TYPE,
            1 | 2 if scope > 0 => Term::var(rng.gen_range(0..scope)),
            _ => c(CONSTS.choose(rng).unwrap()),
        };
    }
    let hint = *HINTS.choose(rng).unwrap();
    match rng.gen_range(0..3) {
        0 => {
            let left = rng.gen_range(1..size);
            Term::app(
                raw_term(rng, scope, left),
                raw_term(rng, scope, size - left),
            )
        }
        1 => {
            let left = rng.gen_range(1..size);
            Term::lam(
                hint,
                raw_term(rng, scope, left),
                raw_term(rng, scope + 1, size - left),
            )
        }
        _ => {
            let left = rng.gen_range(1..size);
            Term::pi(
                hint,
                raw_term(rng, scope, left),
                raw_term(rng, scope + 1, size - left),
            )
        }
    }
}

/// Simple object types: `iota`, `o` and `arrow A B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Iota,
    O,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn code(&self) -> Term {
        match self {
            Ty::Iota => c("iota"),
            Ty::O => c("o"),
            Ty::Arrow(a, b) => app("arrow", [a.code(), b.code()]),
        }
    }

    pub fn random(rng: &mut impl Rng, depth: usize) -> Ty {
        match rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
            0 => Ty::Iota,
            1 => Ty::O,
            _ => Ty::Arrow(
                Box::new(Ty::random(rng, depth - 1)),
                Box::new(Ty::random(rng, depth - 1)),
            ),
        }
    }

    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }
}

/// Generator of terms well typed in the simple type theory encoding. Each
/// generated term has type `eta tau` in the context of [`SttGen::context`].
pub struct SttGen {
    /// Object types of the context variables, outermost first.
    pub vars: Vec<Ty>,
}

impl SttGen {
    pub fn new() -> SttGen {
        SttGen {
            vars: vec![
                Ty::Iota,
                Ty::O,
                Ty::arrow(Ty::Iota, Ty::Iota),
                Ty::arrow(Ty::Iota, Ty::O),
            ],
        }
    }

    pub fn context(&self) -> lpm_core::Context {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, ty)| (format!("v{i}").into(), eta(ty.code())))
            .collect()
    }

    /// A term of type `eta ty`, using at most `fuel` constructors.
    pub fn term(&mut self, rng: &mut impl Rng, ty: &Ty, fuel: usize) -> Term {
        let candidates: Vec<usize> = (0..self.vars.len())
            .filter(|&i| &self.vars[i] == ty)
            .collect();
        if fuel == 0 || (rng.gen_bool(0.2) && !candidates.is_empty()) {
            if let Some(&pos) = candidates.choose(rng) {
                return Term::var(self.vars.len() - 1 - pos);
            }
        }
        if fuel == 0 {
            // Base types always have a context variable.
            let Ty::Arrow(a, b) = ty else { unreachable!() };
            return self.lambda(rng, a, b, 0);
        }
        let fuel = fuel.saturating_sub(1);
        let choice = rng.gen_range(0..6);
        match (choice, ty) {
            (0, Ty::Arrow(a, b)) => self.lambda(rng, a, b, fuel),
            (1, Ty::O) => {
                let p = self.term(rng, &Ty::O, fuel / 2);
                let q = self.term(rng, &Ty::O, fuel / 2);
                app("imp", [p, q])
            }
            (2, Ty::O) => {
                let dom = Ty::random(rng, 1);
                let body = self.lambda(rng, &dom, &Ty::O, fuel);
                app("forall", [dom.code(), body])
            }
            (3, Ty::Arrow(a, b)) if **a == Ty::O && **b == Ty::O => {
                let p = self.term(rng, &Ty::O, fuel);
                app("imp", [p])
            }
            (4, _) => {
                // A β-redex.
                let dom = Ty::random(rng, 1);
                let f = self.lambda(rng, &dom, ty, fuel / 2);
                let a = self.term(rng, &dom, fuel / 2);
                Term::app(f, a)
            }
            _ => {
                let dom = Ty::random(rng, 1);
                let f = self.term(rng, &Ty::arrow(dom.clone(), ty.clone()), fuel / 2);
                let a = self.term(rng, &dom, fuel / 2);
                Term::app(f, a)
            }
        }
    }

    fn lambda(&mut self, rng: &mut impl Rng, a: &Ty, b: &Ty, fuel: usize) -> Term {
        self.vars.push(a.clone());
        let body = self.term(rng, b, fuel);
        self.vars.pop();
        let hint = *["x", "y", "p"].choose(rng).unwrap();
        Term::lam(hint, eta(a.code()), body)
    }
}

/// Twenty terms in six hand-assigned convertibility classes.
pub fn conversion_sample() -> Vec<(usize, Term)> {
    [
        (0, "eta (arrow iota iota)"),
        (0, "eta iota -> eta iota"),
        (0, "((a : type) => eta (arrow a a)) iota"),
        (0, "((a : type) => eta a -> eta a) iota"),
        (1, "eps (imp top top)"),
        (1, "eps top -> eps top"),
        (1, "eps (((p : eta o) => imp p p) top)"),
        (2, "eps (forall o ((p : eta o) => imp p p))"),
        (2, "(x : eta o) -> eps x -> eps x"),
        (2, "eps top"),
        (
            2,
            "eps (forall o ((q : eta o) => ((r : eta o) => imp r r) q))",
        ),
        (3, "iota"),
        (3, "((a : type) => a) iota"),
        (4, "o"),
        (4, "((a : type) => (b : type) => b) iota o"),
        (5, "eta (arrow iota o) -> eta o"),
        (5, "eta (arrow (arrow iota o) o)"),
        (5, "((a : type) => eta (arrow a o)) (arrow iota o)"),
        (5, "(f : eta (arrow iota o)) -> eta o"),
        (5, "((b : type) => eta (arrow b o) -> eta o) iota"),
    ]
    .iter()
    .map(|(k, s)| (*k, lpm_core::syntax::parse_term(s).unwrap()))
    .collect()
}

/// The simple type theory with the `top` definition the sample uses.
pub fn conversion_theory() -> Theory {
    let src = "def top : eta o := forall o ((p : eta o) => imp p p).";
    library(stt_theory(), &lpm_core::syntax::parse_file(src).unwrap())
}

/// `n` random well-typed terms with their object types.
pub fn random_stt_terms(n: usize, seed: u64) -> Vec<(Term, Ty)> {
    let mut r = rng(seed);
    let mut g = SttGen::new();
    (0..n)
        .map(|_| {
            let ty = Ty::random(&mut r, 2);
            (g.term(&mut r, &ty, 12), ty)
        })
        .collect()
}
