use crate::kernel::Term;

fn c(name: &str) -> Term {
    Term::constant(name)
}

/// Binder hints and (closed) domains of the two parameters of the simple
/// `arrow` and `imp`.
fn simple_params(head: &str) -> [(&'static str, Term); 2] {
    if head == "arrow" {
        [("a", c("type")), ("b", c("type"))]
    } else {
        let prop = Term::app(c("eta"), c("o"));
        [("p", prop.clone()), ("q", prop)]
    }
}

/// η-expands `head args` (fewer than two arguments) to a full application.
fn eta_expand(head: &str, args: &[&Term]) -> Term {
    let params = simple_params(head);
    let given = args.len();
    let missing = 2 - given;
    let mut full: Vec<Term> = args.iter().map(|a| a.shift(missing as isize, 0)).collect();
    full.extend((0..missing).map(|j| Term::named_var(missing - 1 - j, params[given + j].0)));
    let mut t = Term::apps(c(head), full);
    for (hint, domain) in params[args.len()..].iter().rev() {
        t = Term::lam(hint, domain.clone(), t);
    }
    t
}

/// Translates a simple type theory term into the calculus of constructions
/// encoding. `arrow A B` becomes `arrow A ((_ : eta A) => B)` and `imp P Q`
/// becomes `imp P ((_ : eps P) => Q)`; everything else is unchanged.
/// Partial applications of `arrow` and `imp` are η-expanded first.
pub fn lift_term(t: &Term) -> Term {
    let (head, args) = t.spine();
    if let Term::Const(name) = head {
        if &**name == "arrow" || &**name == "imp" {
            if args.len() < 2 {
                return lift_term(&eta_expand(name, &args));
            }
            let a = lift_term(args[0]);
            let b = lift_term(args[1]);
            let wrap = if &**name == "arrow" { "eta" } else { "eps" };
            let family = Term::lam("_", Term::app(c(wrap), a.clone()), b.shift(1, 0));
            let rest = args[2..].iter().map(|x| lift_term(x));
            return Term::apps(head.clone(), [a, family].into_iter().chain(rest));
        }
    }
    let head = match head {
        Term::Lam(x, a, b) => Term::Lam(x.clone(), lift_term(a).into(), lift_term(b).into()),
        Term::Pi(x, a, b) => Term::Pi(x.clone(), lift_term(a).into(), lift_term(b).into()),
        other => other.clone(),
    };
    Term::apps(head, args.into_iter().map(lift_term))
}
