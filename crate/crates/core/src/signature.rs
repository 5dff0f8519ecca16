//! Theories: ordered declarations, definitions and rewrite rules, each
//! validated against the entries before it, then sealed for shared use.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::kernel::{Context, Kernel, KernelError, Name, Sort, Term, DEFAULT_STEP_BUDGET};
use crate::rewriting::RewriteRule;
use crate::syntax::print_term_in;

/// One unit of a theory or proof library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Declaration { name: Name, ty: Term },
    Definition { name: Name, ty: Term, body: Term },
    Rule(RewriteRule),
}

impl Entry {
    pub fn declaration(name: &str, ty: Term) -> Entry {
        Entry::Declaration {
            name: name.into(),
            ty,
        }
    }

    pub fn definition(name: &str, ty: Term, body: Term) -> Entry {
        Entry::Definition {
            name: name.into(),
            ty,
            body,
        }
    }

    /// The constant introduced by this entry, if any.
    pub fn name(&self) -> Option<&Name> {
        match self {
            Entry::Declaration { name, .. } | Entry::Definition { name, .. } => Some(name),
            Entry::Rule(_) => None,
        }
    }

    /// Every constant the entry mentions (excluding the one it introduces).
    pub fn referenced_constants(&self) -> Vec<Name> {
        let mut out = Vec::new();
        let mut push = |c: &Name| out.push(c.clone());
        match self {
            Entry::Declaration { ty, .. } => ty.for_each_constant(&mut push),
            Entry::Definition { ty, body, .. } => {
                ty.for_each_constant(&mut push);
                body.for_each_constant(&mut push);
            }
            Entry::Rule(rule) => {
                for v in rule.vars() {
                    if let Some(ty) = &v.ty {
                        ty.for_each_constant(&mut push);
                    }
                }
                rule.lhs().constants().into_iter().for_each(&mut push);
                rule.rhs().for_each_constant(&mut push);
            }
        }
        out
    }
}

/// Display labels for a list of entries: the constant name, or
/// `rule:<head>#<k>` for the k-th rule on a head within the list.
pub fn entry_labels(entries: &[Entry]) -> Vec<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    entries
        .iter()
        .map(|e| match e {
            Entry::Declaration { name, .. } | Entry::Definition { name, .. } => name.to_string(),
            Entry::Rule(rule) => {
                let k = counts.entry(rule.head()).or_default();
                *k += 1;
                format!("rule:{}#{}", rule.head(), k)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstInfo {
    pub ty: Term,
    pub body: Option<Term>,
}

#[derive(Clone, Debug, Error)]
pub enum SignatureError {
    #[error("theory `{0}` is sealed")]
    Sealed(String),
    #[error("`{0}` is already declared")]
    DuplicateName(Name),
    #[error("in `{entry}`: {source}")]
    InEntry { entry: String, source: KernelError },
    #[error("rule head `{0}` is not declared")]
    HeadNotDeclared(Name),
    #[error("rule head `{0}` is a definition; rules may only rewrite declared symbols")]
    HeadIsDefined(Name),
    #[error("rule variable `{var}` of a rule on `{head}` has no type annotation")]
    UnannotatedRuleVariable { head: Name, var: Name },
    #[error("{}", fmt_ill_typed(head, context, lhs_type.as_ref(), rhs_type.as_ref(), cause.as_ref()))]
    IllTypedRule {
        head: Name,
        context: Vec<Name>,
        lhs_type: Option<Term>,
        rhs_type: Option<Term>,
        cause: Option<KernelError>,
    },
}

fn fmt_ill_typed(
    head: &Name,
    context: &[Name],
    lhs: Option<&Term>,
    rhs: Option<&Term>,
    cause: Option<&KernelError>,
) -> String {
    let show = |t: Option<&Term>| t.map_or("?".to_string(), |t| print_term_in(context, t));
    let mut msg = format!(
        "ill-typed rule on `{head}`: left-hand side has type `{}`, right-hand side has type `{}`",
        show(lhs),
        show(rhs)
    );
    if let Some(cause) = cause {
        msg.push_str(&format!(" ({cause})"));
    }
    msg
}

impl SignatureError {
    /// The kernel error behind this failure, if any.
    pub fn kernel_error(&self) -> Option<&KernelError> {
        match self {
            SignatureError::InEntry { source, .. } => Some(source),
            SignatureError::IllTypedRule { cause, .. } => cause.as_ref(),
            _ => None,
        }
    }

    pub fn is_budget_exceeded(&self) -> bool {
        self.kernel_error()
            .is_some_and(KernelError::is_budget_exceeded)
    }
}

pub type SignatureResult<T> = Result<T, SignatureError>;

/// A theory under construction (or a sealed snapshot of one).
#[derive(Clone, Debug)]
pub struct Theory {
    name: String,
    entries: Vec<Entry>,
    consts: HashMap<Name, ConstInfo>,
    rules: HashMap<Name, Vec<RewriteRule>>,
    sealed: bool,
    step_budget: u64,
}

impl Theory {
    pub fn new(name: &str) -> Theory {
        Theory {
            name: name.to_string(),
            entries: Vec::new(),
            consts: HashMap::new(),
            rules: HashMap::new(),
            sealed: false,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }

    /// Validates `entries` in order on top of an empty theory.
    pub fn from_entries(
        name: &str,
        entries: impl IntoIterator<Item = Entry>,
    ) -> SignatureResult<Theory> {
        let mut theory = Theory::new(name);
        for e in entries {
            theory.add_entry(e)?;
        }
        Ok(theory)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_sealed(&self) -> bool {
        self.sealed
    }

    pub fn step_budget(&self) -> u64 {
        self.step_budget
    }

    pub fn set_step_budget(&mut self, budget: u64) {
        self.step_budget = budget;
    }

    pub fn kernel(&self) -> Kernel<'_> {
        Kernel::new(self)
    }

    pub fn const_type(&self, name: &str) -> Option<&Term> {
        self.consts.get(name).map(|i| &i.ty)
    }

    pub fn const_body(&self, name: &str) -> Option<&Term> {
        self.consts.get(name).and_then(|i| i.body.as_ref())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.consts.contains_key(name)
    }

    pub fn rules_for(&self, head: &str) -> &[RewriteRule] {
        self.rules.get(head).map_or(&[], Vec::as_slice)
    }

    /// Constant names in declaration order.
    pub fn constant_names(&self) -> Vec<&Name> {
        self.entries.iter().filter_map(Entry::name).collect()
    }

    pub fn declaration_count(&self) -> usize {
        count(&self.entries, |e| matches!(e, Entry::Declaration { .. }))
    }

    pub fn definition_count(&self) -> usize {
        count(&self.entries, |e| matches!(e, Entry::Definition { .. }))
    }

    pub fn rule_count(&self) -> usize {
        count(&self.entries, |e| matches!(e, Entry::Rule(_)))
    }

    pub fn add_declaration(&mut self, name: &str, ty: Term) -> SignatureResult<()> {
        self.add_entry(Entry::declaration(name, ty))
    }

    pub fn add_definition(&mut self, name: &str, ty: Term, body: Term) -> SignatureResult<()> {
        self.add_entry(Entry::definition(name, ty, body))
    }

    pub fn add_rule(&mut self, rule: RewriteRule) -> SignatureResult<()> {
        self.add_entry(Entry::Rule(rule))
    }

    pub fn add_entry(&mut self, entry: Entry) -> SignatureResult<()> {
        self.ensure_unsealed()?;
        self.check_entry(&entry)?;
        self.push_checked(entry);
        Ok(())
    }

    fn ensure_unsealed(&self) -> SignatureResult<()> {
        if self.sealed {
            return Err(SignatureError::Sealed(self.name.clone()));
        }
        Ok(())
    }

    /// Validates `entry` against the current entries without adding it.
    pub fn check_entry(&self, entry: &Entry) -> SignatureResult<()> {
        let kernel = self.kernel();
        match entry {
            Entry::Declaration { name, ty } => {
                self.ensure_fresh(name)?;
                kernel
                    .infer_sort(&mut Context::new(), ty)
                    .map_err(|source| in_entry(name, source))?;
                Ok(())
            }
            Entry::Definition { name, ty, body } => {
                self.ensure_fresh(name)?;
                let mut ctx = Context::new();
                kernel
                    .infer_sort(&mut ctx, ty)
                    .and_then(|_| kernel.check(&mut ctx, body, ty))
                    .map_err(|source| in_entry(name, source))
            }
            Entry::Rule(rule) => {
                let head = rule.head();
                if !self.contains(head) {
                    return Err(SignatureError::HeadNotDeclared(head.clone()));
                }
                if self.const_body(head).is_some() {
                    return Err(SignatureError::HeadIsDefined(head.clone()));
                }
                self.check_rule_typing(rule)
            }
        }
    }

    fn ensure_fresh(&self, name: &Name) -> SignatureResult<()> {
        if self.contains(name) {
            return Err(SignatureError::DuplicateName(name.clone()));
        }
        Ok(())
    }

    /// Under the rule's variable context, both sides must have convertible
    /// types.
    pub fn check_rule_typing(&self, rule: &RewriteRule) -> SignatureResult<()> {
        let kernel = self.kernel();
        let head = rule.head().clone();
        let mut ctx = Context::new();
        let ill_typed = |ctx: &Context, lhs_type, rhs_type, cause| SignatureError::IllTypedRule {
            head: head.clone(),
            context: ctx.names(),
            lhs_type,
            rhs_type,
            cause,
        };
        for v in rule.vars() {
            let Some(ty) = &v.ty else {
                return Err(SignatureError::UnannotatedRuleVariable {
                    head: head.clone(),
                    var: v.name.clone(),
                });
            };
            if let Err(e) = kernel.infer_sort(&mut ctx, ty) {
                return Err(ill_typed(&ctx, None, None, Some(e)));
            }
            ctx.push(v.name.clone(), ty.clone());
        }
        let lhs_type = match kernel.infer(&mut ctx, &rule.lhs_term()) {
            Ok(ty) => ty,
            Err(e) => return Err(ill_typed(&ctx, None, None, Some(e))),
        };
        let rhs_type = match kernel.infer(&mut ctx, rule.rhs()) {
            Ok(ty) => ty,
            Err(e) => return Err(ill_typed(&ctx, Some(lhs_type), None, Some(e))),
        };
        match kernel.convertible(&lhs_type, &rhs_type) {
            Ok(true) => Ok(()),
            Ok(false) => Err(ill_typed(&ctx, Some(lhs_type), Some(rhs_type), None)),
            Err(e) => Err(ill_typed(&ctx, Some(lhs_type), Some(rhs_type), Some(e))),
        }
    }

    fn push_checked(&mut self, entry: Entry) {
        match &entry {
            Entry::Declaration { name, ty } => {
                self.consts.insert(
                    name.clone(),
                    ConstInfo {
                        ty: ty.clone(),
                        body: None,
                    },
                );
            }
            Entry::Definition { name, ty, body } => {
                self.consts.insert(
                    name.clone(),
                    ConstInfo {
                        ty: ty.clone(),
                        body: Some(body.clone()),
                    },
                );
            }
            Entry::Rule(rule) => {
                self.rules
                    .entry(rule.head().clone())
                    .or_default()
                    .push(rule.clone());
            }
        }
        self.entries.push(entry);
    }

    /// Validates and appends `entries` in order, stopping at the first
    /// failure. Returns one result per attempted entry.
    ///
    /// With `parallel`, runs of consecutive declarations and definitions
    /// that do not refer to each other are checked concurrently against the
    /// prefix before them. Rules are checked on their own since they change
    /// conversion for everything after them. Results keep input order.
    pub fn extend_checked(
        &mut self,
        entries: &[Entry],
        parallel: bool,
    ) -> Vec<SignatureResult<()>> {
        if let Err(e) = self.ensure_unsealed() {
            return vec![Err(e)];
        }
        let mut results = Vec::with_capacity(entries.len());
        let mut start = 0;
        while start < entries.len() {
            let end = if parallel {
                batch_end(entries, start)
            } else {
                start + 1
            };
            let batch = &entries[start..end];
            let outcomes: Vec<SignatureResult<()>> = if batch.len() > 1 {
                batch.par_iter().map(|e| self.check_entry(e)).collect()
            } else {
                vec![self.check_entry(&batch[0])]
            };
            for (entry, outcome) in batch.iter().zip(outcomes) {
                let ok = outcome.is_ok();
                results.push(outcome);
                if !ok {
                    return results;
                }
                self.push_checked(entry.clone());
            }
            start = end;
        }
        results
    }

    /// Seals the theory. Later attempts to add entries fail; the returned
    /// handle is immutable and can be shared across threads.
    pub fn seal(&mut self) -> SealedTheory {
        self.sealed = true;
        SealedTheory(Arc::new(self.clone()))
    }

    /// Number of entries per kind, in a stable order for reporting.
    pub fn entry_counts(&self) -> BTreeMap<&'static str, usize> {
        BTreeMap::from([
            ("declarations", self.declaration_count()),
            ("definitions", self.definition_count()),
            ("rules", self.rule_count()),
        ])
    }
}

fn count(entries: &[Entry], pred: impl Fn(&Entry) -> bool) -> usize {
    entries.iter().filter(|e| pred(e)).count()
}

fn in_entry(name: &Name, source: KernelError) -> SignatureError {
    SignatureError::InEntry {
        entry: name.to_string(),
        source,
    }
}

/// End of the largest run starting at `start` whose members are
/// declarations or definitions not mentioning one another.
fn batch_end(entries: &[Entry], start: usize) -> usize {
    if matches!(entries[start], Entry::Rule(_)) {
        return start + 1;
    }
    let mut introduced: HashSet<&Name> = HashSet::new();
    let mut end = start;
    while end < entries.len() {
        let entry = &entries[end];
        let Some(name) = entry.name() else { break };
        let refs = entry.referenced_constants();
        if introduced.contains(name) || refs.iter().any(|c| introduced.contains(c)) {
            break;
        }
        introduced.insert(name);
        end += 1;
    }
    end
}

/// An immutable, shareable theory.
#[derive(Clone, Debug)]
pub struct SealedTheory(Arc<Theory>);

impl SealedTheory {
    /// An unsealed copy to build further entries on.
    pub fn extend(&self, name: &str) -> Theory {
        let mut theory = (*self.0).clone();
        theory.sealed = false;
        theory.name = name.to_string();
        theory
    }
}

impl Deref for SealedTheory {
    type Target = Theory;

    fn deref(&self) -> &Theory {
        &self.0
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_entries(&self.entries))
    }
}

/// Sort of a declared type: `Type` for object-level types, `Kind` for
/// type families.
pub fn sort_of_declaration(theory: &Theory, ty: &Term) -> Result<Sort, KernelError> {
    theory.kernel().infer_sort(&mut Context::new(), ty)
}
