use super::features::constant_family_body;
use crate::kernel::Term;

/// Lowers a β-normal, feature-free CoC term to simple type theory:
/// `arrow A ((_ : eta A) => B)` becomes `arrow A B`, likewise for `imp`.
/// Abstractions of the shape produced by η-expanding a partial `arrow` or
/// `imp` are contracted again.
pub(crate) fn lower_feature_free(t: &Term) -> Term {
    let (head, args) = t.spine();
    if let Term::Const(name) = head {
        if (&**name == "arrow" || &**name == "imp") && args.len() >= 2 {
            let body =
                constant_family_body(args[1]).expect("caller checked that the family is constant");
            let a = lower_feature_free(args[0]);
            let b = lower_feature_free(&body.shift(-1, 0));
            let rest = args[2..].iter().map(|x| lower_feature_free(x));
            return Term::apps(head.clone(), [a, b].into_iter().chain(rest));
        }
    }
    let head = match head {
        Term::Lam(x, a, b) => eta_contract(Term::Lam(
            x.clone(),
            lower_feature_free(a).into(),
            lower_feature_free(b).into(),
        )),
        Term::Pi(x, a, b) => Term::Pi(
            x.clone(),
            lower_feature_free(a).into(),
            lower_feature_free(b).into(),
        ),
        other => other.clone(),
    };
    Term::apps(head, args.into_iter().map(lower_feature_free))
}

/// `(b : type) => arrow A b` to `arrow A`, and `(q : eta o) => imp P q` to
/// `imp P`, when the bound variable occurs only as the last argument.
fn eta_contract(t: Term) -> Term {
    let Term::Lam(_, domain, body) = &t else {
        return t;
    };
    let Term::App(f, last) = &**body else {
        return t;
    };
    if !matches!(**last, Term::Var(0, _)) || f.has_free(0) {
        return t;
    }
    let (head, args) = f.spine();
    let expected_domain = match head {
        Term::Const(c) if &**c == "arrow" => Term::constant("type"),
        Term::Const(c) if &**c == "imp" => Term::app(Term::constant("eta"), Term::constant("o")),
        _ => return t,
    };
    if args.len() >= 2 || **domain != expected_domain {
        return t;
    }
    f.shift(-1, 0)
}
