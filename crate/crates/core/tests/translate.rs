mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use lpm_core::kernel::{check, Kernel, PathStep};
use lpm_core::signature::{entry_labels, Entry};
use lpm_core::syntax::{parse_file, parse_term};
use lpm_core::theories::{coc_theory, is_theory_symbol, stt_theory};
use lpm_core::translate::{
    classify_entry, classify_library, lift_library, lift_term, lower_library, lower_term, Feature,
    FeatureSet, LowerMode, TranslateError, Translator,
};
use lpm_core::{Context, Term};

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn names(entries: &[Entry]) -> Vec<String> {
    entry_labels(entries)
}

#[test]
fn lift_examples() {
    assert_eq!(
        lift_term(&p("arrow iota iota")),
        p("arrow iota ((_ : eta iota) => iota)")
    );
    let lifted = lift_term(&p("forall o ((p : eta o) => imp p p)"));
    assert_eq!(
        lifted,
        p("forall o ((p : eta o) => imp p ((_ : eps p) => p))")
    );
    let Term::App(_, family) = &lifted else {
        panic!()
    };
    let Term::Lam(_, _, body) = &**family else {
        panic!()
    };
    let (_, args) = body.spine();
    // Under the extra binder the second `p` is Var 1.
    assert_eq!(args[1], &Term::lam("_", eps(Term::var(0)), Term::var(1)));
    assert_eq!(lift_term(&Term::var(0)), Term::var(0));
    check(
        &coc_theory(),
        &Context::new(),
        &lift_term(&p("arrow iota iota")),
        &c("type"),
    )
    .unwrap();
}

#[test]
fn lift_library_examples() {
    assert!(lift_library(&[]).unwrap().is_empty());
    let holl = holl();
    let lifted = lift_library(&holl).unwrap();
    assert_eq!(names(&lifted), names(&holl));
    assert!(holl.len() >= 12);
    // Independent re-check in D[Mat].
    library(coc_theory(), &lifted);
}

#[test]
fn lifted_imp_refl_checks() {
    let holl = holl();
    let imp_refl = holl
        .iter()
        .find(|e| e.name().is_some_and(|n| &**n == "imp_refl"))
        .unwrap();
    let lifted = lift_library(std::slice::from_ref(imp_refl)).unwrap();
    library(coc_theory(), &lifted);
    let coc = coc_theory();
    assert!(classify_entry(&coc, &lifted[0]).unwrap().is_empty());
}

#[test]
fn lifting_is_sound_on_random_terms() {
    let coc = coc_theory();
    let gen = SttGen::new();
    let ctx: Context = gen
        .context()
        .entries()
        .iter()
        .map(|(n, ty)| (n.clone(), lift_term(ty)))
        .collect();
    let mut r = rng(21);
    let mut g = SttGen::new();
    for _ in 0..300 {
        let ty = Ty::random(&mut r, 2);
        let t = g.term(&mut r, &ty, 12);
        check(&coc, &ctx, &lift_term(&t), &lift_term(&eta(ty.code())))
            .unwrap_or_else(|e| panic!("{t}: {e}"));
        let beta_nf = Kernel::new(&coc).beta_normalize(&t).unwrap();
        assert_eq!(lower_term(&lift_term(&t)).unwrap(), beta_nf, "{t}");
    }
}

#[test]
fn round_trip_on_corpus_terms() {
    for t in entry_terms(&holl()) {
        assert_eq!(lower_term(&lift_term(&t)).unwrap(), t, "{t}");
    }
}

#[test]
fn round_trip_on_the_library() {
    let holl = holl();
    let lifted = lift_library(&holl).unwrap();
    let back = lower_library(&lifted, LowerMode::Strict).unwrap();
    assert!(back.complete);
    assert_eq!(back.entries, holl);
}

#[test]
fn lifted_library_is_translatable() {
    let report = classify_library(&lift_library(&holl()).unwrap()).unwrap();
    assert!(report
        .rows
        .iter()
        .all(|r| r.direct.is_empty() && r.translatable));
    assert!(report.all_translatable());
}

#[test]
fn classify_examples() {
    let coc = coc_theory();
    let pi_decl = Entry::declaration("k", p("eta (pi p f)"));
    let mut lib = coc.extend("t");
    for e in parse_file("p : eta o. f : eps p -> type.").unwrap() {
        lib.add_entry(e).unwrap();
    }
    assert_eq!(
        classify_entry(&lib, &pi_decl).unwrap(),
        FeatureSet::from_iter([Feature::UsesPi])
    );
    let dep = Entry::declaration(
        "d",
        p("eta (arrow iota ((x : eta iota) => arrow (F x) ((_ : eta (F x)) => iota)))"),
    );
    assert_eq!(
        classify_entry(&lib, &dep).unwrap(),
        FeatureSet::from_iter([Feature::DependentArrow])
    );
    let dep_imp = Entry::declaration("d", p("eps (imp p ((h : eps p) => Q h))"));
    assert_eq!(
        classify_entry(&lib, &dep_imp).unwrap(),
        FeatureSet::from_iter([Feature::DependentImp])
    );
    // A redex hiding a constant family is seen through by β-normalization.
    let redex = Entry::declaration(
        "r",
        p("eta (arrow iota (((y : eta o) => (x : eta iota) => iota) T))"),
    );
    assert!(classify_entry(&lib, &redex).unwrap().is_empty());
    // Under-applied arrow counts as dependent.
    let partial = Entry::declaration("u", p("X arrow"));
    assert_eq!(
        classify_entry(&lib, &partial).unwrap(),
        FeatureSet::from_iter([Feature::DependentArrow])
    );
}

#[test]
fn lower_examples() {
    assert_eq!(
        lower_term(&p("arrow iota ((_ : eta iota) => iota)")).unwrap(),
        p("arrow iota iota")
    );
    match lower_term(&p("eta (pi top ((_ : eps top) => iota))")) {
        Err(TranslateError::FeatureViolation { features, path }) => {
            assert_eq!(features, FeatureSet::from_iter([Feature::UsesPi]));
            assert_eq!(path, [PathStep::AppArg, PathStep::AppFn, PathStep::AppFn]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn closure_propagation() {
    let src = "\
def top : eta o := forall o ((p : eta o) => imp p ((_ : eps p) => p)).
def top_intro : eps top := (p : eta o) => (h : eps p) => h.
def L : eta (pi top ((_ : eps top) => iota)) -> eta iota := (f : eta (pi top ((_ : eps top) => iota))) => f top_intro.
def M : eta (pi top ((_ : eps top) => iota)) -> eta iota := L.
def N : eps top := top_intro.
";
    let es = parse_file(src).unwrap();
    let report = classify_library(&es).unwrap();
    let l = report.row("L").unwrap();
    let m = report.row("M").unwrap();
    assert_eq!(l.direct, FeatureSet::from_iter([Feature::UsesPi]));
    assert!(
        m.direct.contains(Feature::UsesPi),
        "M's own type mentions pi"
    );
    assert!(!report.row("N").unwrap().closure.contains(Feature::UsesPi));

    let src = "\
def top : eta o := forall o ((p : eta o) => imp p ((_ : eps p) => p)).
def L : type := pi top ((_ : eps top) => iota).
def M : eta L -> eta L := (x : eta L) => x.
";
    let report = classify_library(&parse_file(src).unwrap()).unwrap();
    let m = report.row("M").unwrap();
    assert!(m.direct.is_empty());
    assert_eq!(m.closure, FeatureSet::from_iter([Feature::UsesPi]));
    assert!(!m.translatable);
}

#[test]
fn empty_library_gives_empty_report() {
    assert!(classify_library(&[]).unwrap().rows.is_empty());
    let out = lower_library(&[], LowerMode::Strict).unwrap();
    assert!(out.complete && out.entries.is_empty());
}

const DEPENDENT: [&str; 4] = [
    "dep_vec",
    "dep_vec_id",
    "const_on_proofs",
    "const_on_proofs_at",
];

/// Closure computed directly from referenced constants, independently of
/// the library's own dependency tracking.
fn closure_oracle(
    entries: &[Entry],
    direct: &HashMap<String, FeatureSet>,
) -> HashMap<String, FeatureSet> {
    let mut closure: HashMap<String, FeatureSet> = HashMap::new();
    for (e, label) in entries.iter().zip(entry_labels(entries)) {
        let mut acc = direct[&label].clone();
        let mut stack: Vec<String> = e
            .referenced_constants()
            .iter()
            .map(|c| c.to_string())
            .collect();
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if is_theory_symbol(&c) || !seen.insert(c.clone()) {
                continue;
            }
            if let Some(fs) = closure.get(&c) {
                acc.union_with(fs);
            }
        }
        closure.insert(label, acc);
    }
    closure
}

#[test]
fn arith_report() {
    let arith = arith();
    let report = classify_library(&arith).unwrap();
    assert_eq!(report.rows.len(), arith.len());
    let mut direct = HashMap::new();
    for row in &report.rows {
        assert!(row.direct.is_subset(&row.closure), "{}", row.entry);
        assert_eq!(row.translatable, row.closure.is_empty());
        direct.insert(row.entry.clone(), row.direct.clone());
    }
    let oracle = closure_oracle(&arith, &direct);
    for row in &report.rows {
        assert_eq!(row.closure, oracle[&row.entry], "{}", row.entry);
    }
    let blocked = report.blockers();
    let blockers: Vec<&str> = blocked.rows.iter().map(|r| r.entry.as_str()).collect();
    assert_eq!(blockers, DEPENDENT);
    assert_eq!(
        report.row("dep_vec").unwrap().direct,
        FeatureSet::from_iter([Feature::DependentArrow])
    );
    assert!(report.row("dep_vec_id").unwrap().direct.is_empty());
    assert_eq!(
        report.row("const_on_proofs").unwrap().direct,
        FeatureSet::from_iter([Feature::UsesPi])
    );
    assert!(report.row("const_on_proofs_at").unwrap().direct.is_empty());
}

#[test]
fn strict_lowering_refuses_blocked_libraries() {
    let out = lower_library(&arith(), LowerMode::Strict).unwrap();
    assert!(!out.complete);
    assert!(out.entries.is_empty());
    assert_eq!(out.report.blockers().rows.len(), DEPENDENT.len());
}

#[test]
fn best_effort_lowers_exactly_the_translatable_entries() {
    let arith = arith();
    let out = lower_library(&arith, LowerMode::BestEffort).unwrap();
    let expected: Vec<String> = names(&arith)
        .into_iter()
        .filter(|n| !DEPENDENT.contains(&n.as_str()))
        .collect();
    assert_eq!(names(&out.entries), expected);
    let lowered = library(stt_theory(), &out.entries);
    assert_eq!(lowered.rule_count(), stt_theory().rule_count() + 2);
}

#[test]
fn entries_outside_the_fragment_fail_to_lower() {
    let arith = arith();
    let report = classify_library(&arith).unwrap();
    for (e, row) in arith.iter().zip(&report.rows) {
        let terms: Vec<Term> = entry_terms(std::slice::from_ref(e));
        let direct_ok = terms.iter().all(|t| lower_term(t).is_ok());
        assert_eq!(direct_ok, row.direct.is_empty(), "{}", row.entry);
    }
}

#[test]
fn libraries_with_rules_round_trip() {
    let src = "\
nat : type.
zero : eta nat.
succ : eta (arrow nat nat).
plus : eta nat -> eta nat -> eta nat.
[n : eta nat] plus zero n --> n.
[m : eta nat, n : eta nat] plus (succ m) n --> succ (plus m n).
def two : eta nat := succ (succ zero).
";
    let es = parse_file(src).unwrap();
    let lifted = lift_library(&es).unwrap();
    assert_eq!(names(&lifted)[4], "rule:plus#1");
    let back = lower_library(&lifted, LowerMode::Strict).unwrap();
    assert_eq!(back.entries, es);
}

#[test]
fn rules_on_arrow_cannot_be_lifted() {
    let src = "\
f : type -> type.
[a : type, b : type] f (arrow a b) --> a.
";
    let err = lift_library(&parse_file(src).unwrap()).unwrap_err();
    assert!(
        matches!(err, TranslateError::UnsupportedRule { .. }),
        "{err}"
    );
}

#[test]
fn source_errors_are_reported() {
    let err = lift_library(&arith()).unwrap_err();
    assert!(matches!(err, TranslateError::SourceCheck { .. }), "{err}");
    let err = classify_library(&parse_file("bad : iota.").unwrap()).unwrap_err();
    assert!(matches!(err, TranslateError::SourceCheck { .. }), "{err}");
}

#[test]
fn budget_errors_surface() {
    let src = "A : Type. a : A. f : A -> A. P : A -> Type.\n[x : A] f x --> f (f x).\ndef b : P (f a) -> P a := (x : P (f a)) => x.";
    let entries = parse_file(src).unwrap();
    let err = Translator::new(10_000)
        .classify_library(&entries)
        .unwrap_err();
    assert!(matches!(err, TranslateError::SourceCheck { .. }), "{err}");
    assert!(err.is_budget_exceeded());
    let err = Translator::new(10_000).lift_library(&entries).unwrap_err();
    assert!(err.is_budget_exceeded());
}

#[test]
fn translation_is_deterministic() {
    let a = lift_library(&holl()).unwrap();
    let b = lift_library(&holl()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        classify_library(&arith()).unwrap().to_tsv(),
        classify_library(&arith()).unwrap().to_tsv()
    );
}
