use super::lexer::{is_ident_char, is_ident_start};
use crate::kernel::{Name, Sort, Term};
use crate::rewriting::RewriteRule;
use crate::signature::Entry;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    /// Binders and arrows.
    Term,
    /// Applications.
    App,
    /// Constants, variables, sorts and parenthesized terms.
    Atom,
}

struct Printer {
    /// Names in scope, outermost first.
    scope: Vec<String>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start)
        && chars.all(is_ident_char)
        && s != "def"
        && s != "Type"
}

impl Printer {
    fn binder_name(&self, hint: &str, body: &Term) -> String {
        let used = body.has_free(0);
        let base = if hint == "_" || !valid_ident(hint) {
            if !used {
                return "_".to_string();
            }
            "x"
        } else {
            hint
        };
        let collides = |c: &str| self.scope.iter().any(|n| n == c) || body.mentions_constant(c);
        if !collides(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|c| !collides(c))
            .expect("some suffix is free")
    }

    fn print(&mut self, t: &Term, level: Level, out: &mut String) {
        match t {
            Term::Sort(Sort::Type) => out.push_str("Type"),
            Term::Sort(Sort::Kind) => out.push_str("Kind"),
            Term::Const(c) => out.push_str(c),
            Term::Var(i, _) => match self.scope.len().checked_sub(i + 1) {
                Some(pos) => out.push_str(&self.scope[pos]),
                None => out.push_str(&format!("#{i}")),
            },
            Term::App(f, a) => self.parens(level > Level::App, out, |p, out| {
                p.print(f, Level::App, out);
                out.push(' ');
                p.print(a, Level::Atom, out);
            }),
            Term::Pi(_, a, b) if !b.has_free(0) => {
                self.parens(level > Level::Term, out, |p, out| {
                    p.print(a, Level::App, out);
                    out.push_str(" -> ");
                    p.print(&b.shift(-1, 0), Level::Term, out);
                });
            }
            Term::Pi(x, a, b) | Term::Lam(x, a, b) => {
                let arrow = if matches!(t, Term::Pi(..)) {
                    " -> "
                } else {
                    " => "
                };
                self.parens(level > Level::Term, out, |p, out| {
                    let name = p.binder_name(x, b);
                    out.push('(');
                    out.push_str(&name);
                    out.push_str(" : ");
                    p.print(a, Level::Term, out);
                    out.push(')');
                    out.push_str(arrow);
                    p.scope.push(name);
                    p.print(b, Level::Term, out);
                    p.scope.pop();
                });
            }
        }
    }

    fn parens(&mut self, wrap: bool, out: &mut String, f: impl FnOnce(&mut Self, &mut String)) {
        if wrap {
            out.push('(');
        }
        f(self, out);
        if wrap {
            out.push(')');
        }
    }
}

/// Prints a term whose free variables are named by `scope` (outermost
/// first). Variables beyond the scope print as `#i`.
pub fn print_term_in(scope: &[Name], t: &Term) -> String {
    let mut p = Printer {
        scope: scope.iter().map(|n| n.to_string()).collect(),
    };
    let mut out = String::new();
    p.print(t, Level::Term, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    print_term_in(&[], t)
}

fn print_rule(rule: &RewriteRule) -> String {
    let vars = rule.vars();
    let names = rule.var_names();
    let mut groups: Vec<String> = Vec::new();
    let mut i = 0;
    while i < vars.len() {
        let mut j = i + 1;
        while j < vars.len() && same_group(vars[j - 1].ty.as_ref(), vars[j].ty.as_ref()) {
            j += 1;
        }
        let mut group = names[i..j]
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        if let Some(ty) = &vars[i].ty {
            group.push_str(" : ");
            group.push_str(&print_term_in(&names[..i], ty));
        }
        groups.push(group);
        i = j;
    }
    format!(
        "[{}] {} --> {}.",
        groups.join(", "),
        print_term_in(&names, &rule.lhs_term()),
        print_term_in(&names, rule.rhs())
    )
}

/// Consecutive rule variables share a group when the second's type is the
/// first's, seen one binder deeper.
fn same_group(prev: Option<&Term>, next: Option<&Term>) -> bool {
    match (prev, next) {
        (Some(a), Some(b)) => *b == a.shift(1, 0),
        (None, None) => true,
        _ => false,
    }
}

pub fn print_entry(entry: &Entry) -> String {
    match entry {
        Entry::Declaration { name, ty } => format!("{name} : {}.", print_term(ty)),
        Entry::Definition { name, ty, body } => {
            format!("def {name} : {} := {}.", print_term(ty), print_term(body))
        }
        Entry::Rule(rule) => print_rule(rule),
    }
}

/// One entry per line, each line terminated by a newline.
pub fn print_entries(entries: &[Entry]) -> String {
    entries.iter().map(|e| print_entry(e) + "\n").collect()
}
