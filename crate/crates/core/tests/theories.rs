mod common;

use std::collections::BTreeSet;

use common::*;
use lpm_core::kernel::{convertible, infer, whnf};
use lpm_core::signature::Entry;
use lpm_core::syntax::{parse_term, print_entries};
use lpm_core::theories::{coc_entries, coc_theory, stt_entries, stt_theory, TheoryId};
use lpm_core::translate::lift_term;
use lpm_core::{Context, Term};

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn rules(es: &[Entry]) -> Vec<&lpm_core::RewriteRule> {
    es.iter()
        .filter_map(|e| match e {
            Entry::Rule(r) => Some(r),
            _ => None,
        })
        .collect()
}

#[test]
fn counts() {
    let stt = stt_theory();
    let coc = coc_theory();
    assert_eq!((stt.declaration_count(), stt.rule_count()), (8, 3));
    assert_eq!((coc.declaration_count(), coc.rule_count()), (9, 4));
    assert_eq!(stt.definition_count() + coc.definition_count(), 0);
}

#[test]
fn symmetric_difference_is_pi() {
    let names = |t: &lpm_core::signature::Theory| -> BTreeSet<String> {
        t.constant_names()
            .into_iter()
            .map(|n| n.to_string())
            .collect()
    };
    let s = names(&stt_theory());
    let c = names(&coc_theory());
    let diff: BTreeSet<_> = s.symmetric_difference(&c).cloned().collect();
    assert_eq!(diff, BTreeSet::from(["pi".to_string()]));
}

#[test]
fn display_names() {
    assert_eq!(TheoryId::Stt.to_string(), "D[HOLL]");
    assert_eq!(TheoryId::Coc.to_string(), "D[Mat]");
    assert_eq!(stt_theory().name(), "D[HOLL]");
    assert_eq!(TheoryId::Coc.theory().name(), "D[Mat]");
}

#[test]
fn declared_types() {
    let empty = Context::new();
    assert_eq!(
        infer(&stt_theory(), &empty, &c("eps")).unwrap(),
        p("eta o -> Type")
    );
    assert_eq!(
        infer(&coc_theory(), &empty, &c("arrow")).unwrap(),
        p("(a : type) -> (eta a -> type) -> type")
    );
}

/// `(x : A) -> B` with `x` occurring in `B`.
fn is_dependent_product(t: &Term) -> bool {
    matches!(t, Term::Pi(_, _, b) if b.has_free(0))
}

fn codomain(t: &Term) -> &Term {
    match t {
        Term::Pi(_, _, b) => b,
        _ => panic!("not a product: {t}"),
    }
}

#[test]
fn three_differences() {
    let stt = stt_theory();
    let coc = coc_theory();
    for sym in ["arrow", "imp"] {
        let s = stt.const_type(sym).unwrap();
        let c = coc.const_type(sym).unwrap();
        // Simple in STT: no product binds a variable that is used.
        assert!(!is_dependent_product(s) && !is_dependent_product(codomain(s)));
        // Dependent in CoC: the second argument is a family over the first.
        assert!(is_dependent_product(c), "{sym}: {c}");
        let Term::Pi(_, family, _) = codomain(c) else {
            panic!("{c}")
        };
        let Term::Pi(_, fam_dom, fam_cod) = &**family else {
            panic!("{family}")
        };
        let wrap = if sym == "arrow" { "eta" } else { "eps" };
        assert_eq!(**fam_dom, app(wrap, [Term::var(0)]));
        assert_eq!(fam_cod.shift(-1, 0), target(s));
    }
    assert!(stt.const_type("pi").is_none());
    assert_eq!(
        coc.const_type("pi").unwrap(),
        &p("(p : eta o) -> (eps p -> type) -> type")
    );
    for sym in ["type", "iota", "o", "eta", "eps", "forall"] {
        assert_eq!(stt.const_type(sym), coc.const_type(sym), "{sym}");
    }
}

/// The final target of a chain of products.
fn target(t: &Term) -> Term {
    let mut t = t.clone();
    while let Term::Pi(_, _, b) = t {
        t = b.shift(-1, 0);
    }
    t
}

#[test]
fn forall_rule_is_shared_and_pi_rule_is_coc_only() {
    let s = stt_entries();
    let c = coc_entries();
    let (sr, cr) = (rules(&s), rules(&c));
    assert_eq!(sr[2], cr[2]);
    let mentions_pi =
        |r: &&lpm_core::RewriteRule| r.lhs().constants().iter().any(|k| &***k == "pi");
    assert!(!sr.iter().any(mentions_pi));
    assert_eq!(cr.iter().filter(|r| mentions_pi(r)).count(), 1);
}

#[test]
fn coc_arrow_with_constant_family_recovers_the_stt_rule() {
    // eta (arrow a (_ => b)) in CoC is convertible to the lift of the STT
    // right-hand side eta a -> eta b.
    let coc = coc_theory();
    let stt = stt_theory();
    for (a, b) in [("iota", "o"), ("o", "iota"), ("iota", "iota")] {
        let stt_lhs = p(&format!("eta (arrow {a} {b})"));
        let stt_rhs = whnf(&stt, &stt_lhs).unwrap();
        let coc_lhs = lift_term(&stt_lhs);
        assert_eq!(
            coc_lhs,
            p(&format!("eta (arrow {a} ((x : eta {a}) => {b}))"))
        );
        assert!(convertible(&coc, &coc_lhs, &lift_term(&stt_rhs)).unwrap());
    }
}

#[test]
fn golden_files_match_the_printer() {
    assert_eq!(read("theories/stt.lpm"), print_entries(&stt_entries()));
    assert_eq!(read("theories/coc.lpm"), print_entries(&coc_entries()));
    assert_eq!(load("theories/stt.lpm"), stt_entries());
    assert_eq!(load("theories/coc.lpm"), coc_entries());
}
