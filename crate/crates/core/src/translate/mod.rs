//! Moving proof libraries between the two built-in encodings.
//!
//! Lifting from simple type theory to the calculus of constructions is
//! total. In the other direction only content that avoids `pi` and never
//! uses the dependency of `arrow` or `imp` can be lowered; [`classify_library`]
//! reports, for every entry, which of those features it uses directly and
//! through its dependencies.
//!
//! Feature detection is syntactic on β-normal forms: a family counts as
//! non-dependent when it is an abstraction whose body ignores the bound
//! variable. A dependency that only disappears through rewriting or
//! definition unfolding is still reported.

mod features;
mod lift;
mod lower;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{fmt_path, Kernel, KernelError, PathStep, Term, DEFAULT_STEP_BUDGET};
use crate::rewriting::RuleError;
use crate::signature::{entry_labels, Entry, SignatureError, Theory};
use crate::theories::{coc_theory, is_theory_symbol, stt_theory};

pub use features::{analyze_term, Analysis, Feature, FeatureSet};
pub use lift::lift_term;

#[derive(Debug, Error)]
pub enum TranslateError {
    /// The input does not check in the source theory.
    #[error("`{entry}` does not check in {theory}: {source}")]
    SourceCheck {
        theory: String,
        entry: String,
        source: SignatureError,
    },
    #[error("lifted `{entry}` fails to check in D[Mat]: {source}")]
    LiftCheckFailure {
        entry: String,
        source: SignatureError,
    },
    #[error("lowered `{entry}` fails to check in D[HOLL]: {source}")]
    LowerCheckFailure {
        entry: String,
        source: SignatureError,
    },
    #[error("term uses {features} (first at {})", fmt_path(path))]
    FeatureViolation {
        features: FeatureSet,
        path: Vec<PathStep>,
    },
    #[error("rule `{entry}` cannot be translated: {reason}")]
    UnsupportedRule { entry: String, reason: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl TranslateError {
    pub fn is_budget_exceeded(&self) -> bool {
        match self {
            TranslateError::Kernel(e) => e.is_budget_exceeded(),
            TranslateError::SourceCheck { source, .. }
            | TranslateError::LiftCheckFailure { source, .. }
            | TranslateError::LowerCheckFailure { source, .. } => source.is_budget_exceeded(),
            _ => false,
        }
    }

    /// Failures that indicate a translator bug rather than bad input.
    pub fn is_defect(&self) -> bool {
        matches!(
            self,
            TranslateError::LiftCheckFailure { .. } | TranslateError::LowerCheckFailure { .. }
        ) && !self.is_budget_exceeded()
    }
}

pub type TranslateResult<T> = Result<T, TranslateError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub entry: String,
    /// Features occurring in the entry itself.
    pub direct: FeatureSet,
    /// Features of the entry and everything it depends on.
    pub closure: FeatureSet,
    pub translatable: bool,
}

/// Per-entry fragment analysis of a CoC library, in library order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FragmentReport {
    pub rows: Vec<ReportRow>,
}

impl FragmentReport {
    pub fn row(&self, entry: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.entry == entry)
    }

    pub fn all_translatable(&self) -> bool {
        self.rows.iter().all(|r| r.translatable)
    }

    /// Rows that cannot be lowered.
    pub fn blockers(&self) -> FragmentReport {
        FragmentReport {
            rows: self
                .rows
                .iter()
                .filter(|r| !r.translatable)
                .cloned()
                .collect(),
        }
    }

    /// Tab-separated: a header line, then `entry direct closure translatable`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("entry\tdirect\tclosure\ttranslatable\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.entry,
                r.direct.to_compact(),
                r.closure.to_compact(),
                r.translatable
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}: direct={} closure={} translatable={}",
                r.entry, r.direct, r.closure, r.translatable
            );
        }
        out
    }

    /// Number of rows whose direct features include `f`.
    pub fn direct_tally(&self, f: Feature) -> usize {
        self.rows.iter().filter(|r| r.direct.contains(f)).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerMode {
    /// Lower nothing unless the whole library is translatable.
    Strict,
    /// Lower every translatable entry; their dependencies are translatable
    /// too, so the selection is closed.
    BestEffort,
}

#[derive(Clone, Debug)]
pub struct LowerOutcome {
    /// Lowered entries, re-checked in D[HOLL].
    pub entries: Vec<Entry>,
    pub report: FragmentReport,
    /// Whether every input entry was lowered.
    pub complete: bool,
}

/// Translation operations with a configurable reduction budget.
#[derive(Clone, Copy, Debug)]
pub struct Translator {
    pub step_budget: u64,
}

impl Default for Translator {
    fn default() -> Self {
        Translator {
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

/// Terms of an entry that feature analysis and dependency tracking look at.
fn entry_terms(entry: &Entry) -> Vec<Term> {
    match entry {
        Entry::Declaration { ty, .. } => vec![ty.clone()],
        Entry::Definition { ty, body, .. } => vec![ty.clone(), body.clone()],
        Entry::Rule(rule) => {
            let mut ts: Vec<Term> = rule.vars().iter().filter_map(|v| v.ty.clone()).collect();
            ts.push(rule.lhs_term());
            ts.push(rule.rhs().clone());
            ts
        }
    }
}

fn map_entry(
    entry: &Entry,
    label: &str,
    mut f: impl FnMut(&Term) -> TranslateResult<Term>,
) -> TranslateResult<Entry> {
    Ok(match entry {
        Entry::Declaration { name, ty } => Entry::Declaration {
            name: name.clone(),
            ty: f(ty)?,
        },
        Entry::Definition { name, ty, body } => Entry::Definition {
            name: name.clone(),
            ty: f(ty)?,
            body: f(body)?,
        },
        Entry::Rule(rule) => {
            let var_types = rule
                .vars()
                .iter()
                .map(|v| v.ty.as_ref().map(&mut f).transpose())
                .collect::<TranslateResult<Vec<_>>>()?;
            let rhs = f(rule.rhs())?;
            let rebuilt = rule.with_parts(var_types, rhs).map_err(|e: RuleError| {
                TranslateError::UnsupportedRule {
                    entry: label.to_string(),
                    reason: e.to_string(),
                }
            })?;
            Entry::Rule(rebuilt)
        }
    })
}

impl Translator {
    pub fn new(step_budget: u64) -> Translator {
        Translator { step_budget }
    }

    fn base(&self, theory: crate::signature::SealedTheory, name: &str) -> Theory {
        let mut t = theory.extend(name);
        t.set_step_budget(self.step_budget);
        t
    }

    /// Builds `entries` on top of `base`, reporting the first failure with
    /// `wrap`.
    fn build(
        mut base: Theory,
        entries: &[Entry],
        labels: &[String],
        wrap: impl Fn(String, SignatureError) -> TranslateError,
    ) -> TranslateResult<Theory> {
        for (entry, label) in entries.iter().zip(labels) {
            base.add_entry(entry.clone())
                .map_err(|e| wrap(label.clone(), e))?;
        }
        Ok(base)
    }

    fn source_check(
        &self,
        entries: &[Entry],
        labels: &[String],
        stt: bool,
    ) -> TranslateResult<Theory> {
        let (theory, name) = if stt {
            (stt_theory(), "D[HOLL]")
        } else {
            (coc_theory(), "D[Mat]")
        };
        Self::build(
            self.base(theory, "library"),
            entries,
            labels,
            |entry, source| TranslateError::SourceCheck {
                theory: name.to_string(),
                entry,
                source,
            },
        )
    }

    /// Lifts a D[HOLL] library into D[Mat]. The input is checked in D[HOLL]
    /// first and the output is re-checked in D[Mat] before returning.
    pub fn lift_library(&self, entries: &[Entry]) -> TranslateResult<Vec<Entry>> {
        let labels = entry_labels(entries);
        self.source_check(entries, &labels, true)?;
        let lifted = entries
            .iter()
            .zip(&labels)
            .map(|(e, label)| {
                if let Entry::Rule(rule) = e {
                    if rule
                        .lhs()
                        .constants()
                        .iter()
                        .any(|c| &***c == "arrow" || &***c == "imp")
                    {
                        return Err(TranslateError::UnsupportedRule {
                            entry: label.clone(),
                            reason: "left-hand side mentions arrow or imp".to_string(),
                        });
                    }
                }
                map_entry(e, label, |t| Ok(lift_term(t)))
            })
            .collect::<TranslateResult<Vec<_>>>()?;
        Self::build(
            self.base(coc_theory(), "lifted"),
            &lifted,
            &labels,
            |entry, source| TranslateError::LiftCheckFailure { entry, source },
        )?;
        Ok(lifted)
    }

    /// Direct features of one entry, found in the β-normal forms of its
    /// terms.
    pub fn classify_entry(&self, theory: &Theory, entry: &Entry) -> TranslateResult<FeatureSet> {
        let kernel = Kernel::with_budget(theory, self.step_budget);
        let mut features = FeatureSet::new();
        for t in entry_terms(entry) {
            let normal = kernel.beta_normalize(&t)?;
            features.union_with(&analyze_term(&normal).features);
        }
        Ok(features)
    }

    /// Checks `entries` in D[Mat] and reports the features each one uses,
    /// directly and through the library entries it depends on.
    pub fn classify_library(&self, entries: &[Entry]) -> TranslateResult<FragmentReport> {
        let labels = entry_labels(entries);
        let theory = self.source_check(entries, &labels, false)?;
        self.classify_checked(&theory, entries, &labels)
    }

    fn classify_checked(
        &self,
        theory: &Theory,
        entries: &[Entry],
        labels: &[String],
    ) -> TranslateResult<FragmentReport> {
        let deps = dependencies(entries);
        let mut rows: Vec<ReportRow> = Vec::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            let direct = self.classify_entry(theory, entry)?;
            let mut closure = direct.clone();
            for &d in &deps[i] {
                closure.union_with(&rows[d].closure);
            }
            let translatable = closure.is_empty();
            rows.push(ReportRow {
                entry: labels[i].clone(),
                direct,
                closure,
                translatable,
            });
        }
        Ok(FragmentReport { rows })
    }

    /// Lowers a D[Mat] library to D[HOLL]. In strict mode nothing is lowered
    /// unless every entry is translatable; the report names the blockers.
    pub fn lower_library(
        &self,
        entries: &[Entry],
        mode: LowerMode,
    ) -> TranslateResult<LowerOutcome> {
        let labels = entry_labels(entries);
        let theory = self.source_check(entries, &labels, false)?;
        let report = self.classify_checked(&theory, entries, &labels)?;
        let complete = report.all_translatable();
        if !complete && mode == LowerMode::Strict {
            return Ok(LowerOutcome {
                entries: Vec::new(),
                report,
                complete,
            });
        }
        let kernel = Kernel::with_budget(&theory, self.step_budget);
        let mut lowered = Vec::new();
        let mut lowered_labels = Vec::new();
        for ((entry, label), row) in entries.iter().zip(&labels).zip(&report.rows) {
            if !row.translatable {
                continue;
            }
            let out = map_entry(entry, label, |t| lower_with(&kernel, t))?;
            lowered.push(out);
            lowered_labels.push(label.clone());
        }
        Self::build(
            self.base(stt_theory(), "lowered"),
            &lowered,
            &lowered_labels,
            |entry, source| TranslateError::LowerCheckFailure { entry, source },
        )?;
        Ok(LowerOutcome {
            entries: lowered,
            report,
            complete,
        })
    }
}

fn lower_with(kernel: &Kernel<'_>, t: &Term) -> TranslateResult<Term> {
    let normal = kernel.beta_normalize(t)?;
    let analysis = analyze_term(&normal);
    if !analysis.features.is_empty() {
        return Err(TranslateError::FeatureViolation {
            features: analysis.features,
            path: analysis.first.unwrap_or_default(),
        });
    }
    Ok(lower::lower_feature_free(&normal))
}

/// For each entry, the indices of earlier library entries it depends on:
/// the entries introducing the library constants it mentions, and every
/// earlier rule rewriting one of those constants.
fn dependencies(entries: &[Entry]) -> Vec<BTreeSet<usize>> {
    let mut introduced: HashMap<&str, usize> = HashMap::new();
    let mut rules_on: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut out = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let mut deps = BTreeSet::new();
        for c in entry.referenced_constants() {
            if is_theory_symbol(&c) {
                continue;
            }
            if let Some(&j) = introduced.get(&*c) {
                deps.insert(j);
            }
            if let Some(rs) = rules_on.get(&*c) {
                deps.extend(rs.iter().copied());
            }
        }
        out.push(deps);
        match entry {
            Entry::Declaration { name, .. } | Entry::Definition { name, .. } => {
                introduced.insert(name, i);
            }
            Entry::Rule(rule) => rules_on.entry(rule.head()).or_default().push(i),
        }
    }
    out
}

/// Lowers a single D[Mat] term (β-normalizing it first), failing with the
/// features it uses when it is outside the translatable fragment.
pub fn lower_term(t: &Term) -> TranslateResult<Term> {
    let coc = coc_theory();
    lower_with(&coc.kernel(), t)
}

pub fn lift_library(entries: &[Entry]) -> TranslateResult<Vec<Entry>> {
    Translator::default().lift_library(entries)
}

pub fn classify_entry(theory: &Theory, entry: &Entry) -> TranslateResult<FeatureSet> {
    Translator::default().classify_entry(theory, entry)
}

pub fn classify_library(entries: &[Entry]) -> TranslateResult<FragmentReport> {
    Translator::default().classify_library(entries)
}

pub fn lower_library(entries: &[Entry], mode: LowerMode) -> TranslateResult<LowerOutcome> {
    Translator::default().lower_library(entries, mode)
}
