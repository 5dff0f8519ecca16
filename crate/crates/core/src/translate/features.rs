use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{PathStep, Term};

/// A construct available in the calculus of constructions encoding but not
/// in simple type theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    UsesPi,
    DependentArrow,
    DependentImp,
}

impl Feature {
    pub const ALL: [Feature; 3] = [
        Feature::UsesPi,
        Feature::DependentArrow,
        Feature::DependentImp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::UsesPi => "UsesPi",
            Feature::DependentArrow => "DependentArrow",
            Feature::DependentImp => "DependentImp",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of features; empty means the content fits simple type theory.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet(BTreeSet<Feature>);

impl FeatureSet {
    pub fn new() -> FeatureSet {
        FeatureSet::default()
    }

    pub fn insert(&mut self, f: Feature) {
        self.0.insert(f);
    }

    pub fn contains(&self, f: Feature) -> bool {
        self.0.contains(&f)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn union_with(&mut self, other: &FeatureSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Feature> + '_ {
        self.0.iter().copied()
    }

    /// Comma-separated feature names, `-` when empty.
    pub fn to_compact(&self) -> String {
        if self.is_empty() {
            return "-".to_string();
        }
        self.iter().map(Feature::name).collect::<Vec<_>>().join(",")
    }
}

impl FromIterator<Feature> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        FeatureSet(iter.into_iter().collect())
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.iter().map(Feature::name).collect::<Vec<_>>().join(",")
        )
    }
}

/// Features found in a term and the location of the first one.
#[derive(Clone, Debug, Default)]
pub struct Analysis {
    pub features: FeatureSet,
    pub first: Option<Vec<PathStep>>,
}

impl Analysis {
    fn record(&mut self, f: Feature, path: &[PathStep]) {
        self.features.insert(f);
        if self.first.is_none() {
            self.first = Some(path.to_vec());
        }
    }
}

/// A second argument of `arrow`/`imp` that is an abstraction not using its
/// bound variable.
pub(crate) fn constant_family_body(family: &Term) -> Option<&Term> {
    match family {
        Term::Lam(_, _, body) if !body.has_free(0) => Some(body),
        _ => None,
    }
}

/// Scans a β-normal term for CoC-only features. `pi` always counts; a
/// fully applied `arrow`/`imp` counts unless its family is a constant
/// abstraction; an under-applied one counts, since its η-expansion applies
/// it to a bound family variable.
pub fn analyze_term(t: &Term) -> Analysis {
    let mut acc = Analysis::default();
    let mut path = Vec::new();
    visit(t, &mut path, &mut acc);
    acc
}

fn visit(t: &Term, path: &mut Vec<PathStep>, acc: &mut Analysis) {
    let (head, args) = t.spine();
    let n = args.len();
    let depth = path.len();
    let arg_path = |path: &mut Vec<PathStep>, k: usize| {
        path.truncate(depth);
        path.extend(std::iter::repeat_n(PathStep::AppFn, n - 1 - k));
        path.push(PathStep::AppArg);
    };

    path.extend(std::iter::repeat_n(PathStep::AppFn, n));
    match head {
        Term::Const(c) if &**c == "pi" => acc.record(Feature::UsesPi, path),
        Term::Const(c) if &**c == "arrow" || &**c == "imp" => {
            let feature = if &**c == "arrow" {
                Feature::DependentArrow
            } else {
                Feature::DependentImp
            };
            if n < 2 {
                acc.record(feature, path);
            } else if constant_family_body(args[1]).is_none() {
                arg_path(path, 1);
                acc.record(feature, path);
            }
        }
        Term::Lam(_, a, b) | Term::Pi(_, a, b) => {
            let (dom, body) = if matches!(head, Term::Lam(..)) {
                (PathStep::LamDomain, PathStep::LamBody)
            } else {
                (PathStep::PiDomain, PathStep::PiCodomain)
            };
            let base = path.len();
            path.push(dom);
            visit(a, path, acc);
            path.truncate(base);
            path.push(body);
            visit(b, path, acc);
        }
        _ => {}
    }
    for (k, a) in args.iter().enumerate() {
        arg_path(path, k);
        visit(a, path, acc);
    }
    path.truncate(depth);
}
