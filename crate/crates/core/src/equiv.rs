//! Coinductive proofs of process equivalence.
//!
//! Judgements have the form `P == Q` for closed processes and are derived by
//! three rule schemata:
//!
//! ```text
//!   P1 == Q1  ...  Pn == Qn                E{X := mu X.E} == Q         P == E{X := mu X.E}
//! ---------------------------- (act)     ---------------------- (rec-l)  ---------------------- (rec-r)
//! a1.P1+...+an.Pn == a1.Q1+...+an.Qn          mu X.E == Q                   P == mu X.E
//! ```
//!
//! Read literally, `act` needs both sums to share one index family. That
//! reading does not equate `a.0 + a.0` with `a.0`, although the two are
//! bisimilar. [`MatchMode::Relaxed`] instead lets premises pair every summand
//! on either side with some same-action summand on the other, which makes the
//! relation coincide with strong bisimilarity. Both readings are available.
//!
//! [`Prover`] searches depth-first. The judgements on the current branch act
//! as coinduction hypotheses: meeting one again closes the branch with a
//! back-edge, so every returned certificate is a circular proof.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use thiserror::Error;

use crate::proofcert::{InstanceCheck, ProofCert};
use crate::syntax::{parse, render, ProcessExpr, Summand, SyntaxError};

pub const DEFAULT_MAX_PAIRS: usize = 10_000;

const SEPARATOR: &str = " == ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("pair budget exceeded: more than {0} distinct judgements")]
    PairBudgetExceeded(usize),
    #[error("malformed judgement `{0}`: expected `<process> == <process>`")]
    MalformedJudgement(String),
    #[error("non-canonical judgement `{found}`, expected `{canonical}`")]
    NonCanonical { found: String, canonical: String },
    #[error("unknown match mode `{0}` (expected literal or relaxed)")]
    UnknownMode(String),
}

/// `left == right` over closed processes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivJudgement {
    left: ProcessExpr,
    right: ProcessExpr,
}

impl EquivJudgement {
    pub fn new(left: ProcessExpr, right: ProcessExpr) -> Result<Self, EquivError> {
        left.require_process()?;
        right.require_process()?;
        Ok(EquivJudgement { left, right })
    }

    pub fn left(&self) -> &ProcessExpr {
        &self.left
    }

    pub fn right(&self) -> &ProcessExpr {
        &self.right
    }

    /// Canonical string form used as the certificate label.
    pub fn key(&self) -> String {
        format!("{}{SEPARATOR}{}", render(&self.left), render(&self.right))
    }

    /// Parses a certificate label, insisting on the canonical spelling.
    pub fn parse_key(key: &str) -> Result<Self, EquivError> {
        let (l, r) = key
            .split_once("==")
            .ok_or_else(|| EquivError::MalformedJudgement(key.to_string()))?;
        let j = EquivJudgement::new(parse(l)?, parse(r)?)?;
        let canonical = j.key();
        if canonical != key {
            return Err(EquivError::NonCanonical {
                found: key.to_string(),
                canonical,
            });
        }
        Ok(j)
    }

    fn unfold_left(&self) -> EquivJudgement {
        EquivJudgement {
            left: ProcessExpr::Sum(self.left.head_summands_unchecked()),
            right: self.right.clone(),
        }
    }

    fn unfold_right(&self) -> EquivJudgement {
        EquivJudgement {
            left: self.left.clone(),
            right: ProcessExpr::Sum(self.right.head_summands_unchecked()),
        }
    }
}

impl fmt::Display for EquivJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// How the `act` rule matches the summands of two sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchMode {
    /// Same length, positionally equal actions, positional premises.
    Literal,
    /// Every summand on each side meets a same-action partner on the other.
    #[default]
    Relaxed,
}

impl FromStr for MatchMode {
    type Err = EquivError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(MatchMode::Literal),
            "relaxed" => Ok(MatchMode::Relaxed),
            other => Err(EquivError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchMode::Literal => "literal",
            MatchMode::Relaxed => "relaxed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquivRule {
    Act,
    RecL,
    RecR,
}

impl EquivRule {
    pub fn name(self) -> &'static str {
        match self {
            EquivRule::Act => "act",
            EquivRule::RecL => "rec-l",
            EquivRule::RecR => "rec-r",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "act" => Some(EquivRule::Act),
            "rec-l" => Some(EquivRule::RecL),
            "rec-r" => Some(EquivRule::RecR),
            _ => None,
        }
    }
}

impl fmt::Display for EquivRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: EquivRule,
    pub premises: Vec<EquivJudgement>,
}

/// Rule instances concluding `j`, in the order rec-l, rec-r, act.
///
/// In relaxed mode the single `act` instance listed is the largest one: every
/// same-action pair of summands. Any sub-family that still covers both sides
/// is an instance too.
pub fn applicable_rules(j: &EquivJudgement, mode: MatchMode) -> Vec<RuleApplication> {
    let mut out = Vec::new();
    if matches!(j.left, ProcessExpr::Mu(..)) {
        out.push(RuleApplication {
            rule: EquivRule::RecL,
            premises: vec![j.unfold_left()],
        });
    }
    if matches!(j.right, ProcessExpr::Mu(..)) {
        out.push(RuleApplication {
            rule: EquivRule::RecR,
            premises: vec![j.unfold_right()],
        });
    }
    if let (ProcessExpr::Sum(ls), ProcessExpr::Sum(rs)) = (&j.left, &j.right) {
        let premises = match mode {
            MatchMode::Literal => literal_pairs(ls, rs),
            MatchMode::Relaxed => relaxed_pairs(ls, rs),
        };
        if let Some(premises) = premises {
            out.push(RuleApplication {
                rule: EquivRule::Act,
                premises,
            });
        }
    }
    out
}

fn pair(l: &Summand, r: &Summand) -> EquivJudgement {
    EquivJudgement {
        left: l.target.clone(),
        right: r.target.clone(),
    }
}

fn literal_pairs(ls: &[Summand], rs: &[Summand]) -> Option<Vec<EquivJudgement>> {
    let aligned = ls.len() == rs.len() && ls.iter().zip(rs).all(|(l, r)| l.action == r.action);
    aligned.then(|| ls.iter().zip(rs).map(|(l, r)| pair(l, r)).collect())
}

fn relaxed_pairs(ls: &[Summand], rs: &[Summand]) -> Option<Vec<EquivJudgement>> {
    let covered =
        |xs: &[Summand], ys: &[Summand]| xs.iter().all(|x| ys.iter().any(|y| y.action == x.action));
    if !covered(ls, rs) || !covered(rs, ls) {
        return None;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for l in ls {
        for r in rs.iter().filter(|r| r.action == l.action) {
            let p = pair(l, r);
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    Some(out)
}

/// Rule-instance validator for `==` certificates.
#[derive(Debug, Clone, Copy, Default)]
pub struct EquivSchemata {
    pub mode: MatchMode,
}

impl EquivSchemata {
    pub fn new(mode: MatchMode) -> Self {
        EquivSchemata { mode }
    }
}

impl InstanceCheck for EquivSchemata {
    fn check_instance(
        &self,
        rule: &str,
        premises: &[&str],
        conclusion: &str,
    ) -> Result<(), String> {
        let rule = EquivRule::from_name(rule).ok_or_else(|| format!("unknown rule `{rule}`"))?;
        let conclusion = EquivJudgement::parse_key(conclusion).map_err(|e| e.to_string())?;
        let given = premises
            .iter()
            .map(|p| EquivJudgement::parse_key(p))
            .collect::<Result<HashSet<_>, _>>()
            .map_err(|e| e.to_string())?;
        let sums = |j: &EquivJudgement| match (&j.left, &j.right) {
            (ProcessExpr::Sum(l), ProcessExpr::Sum(r)) => Some((l.clone(), r.clone())),
            _ => None,
        };

        let expected_exactly = |expected: HashSet<EquivJudgement>| {
            if expected == given {
                Ok(())
            } else {
                Err(format!(
                    "premises do not match the {rule} instance for `{conclusion}`"
                ))
            }
        };

        match rule {
            EquivRule::RecL => match conclusion.left {
                ProcessExpr::Mu(..) => expected_exactly(HashSet::from([conclusion.unfold_left()])),
                _ => Err(format!("rec-l needs a mu on the left of `{conclusion}`")),
            },
            EquivRule::RecR => match conclusion.right {
                ProcessExpr::Mu(..) => expected_exactly(HashSet::from([conclusion.unfold_right()])),
                _ => Err(format!("rec-r needs a mu on the right of `{conclusion}`")),
            },
            EquivRule::Act => {
                let (ls, rs) = sums(&conclusion)
                    .ok_or_else(|| format!("act needs two sums in `{conclusion}`"))?;
                match self.mode {
                    MatchMode::Literal => match literal_pairs(&ls, &rs) {
                        Some(pairs) => expected_exactly(pairs.into_iter().collect()),
                        None => Err(format!("summands of `{conclusion}` are not aligned")),
                    },
                    MatchMode::Relaxed => check_relaxed_cover(&ls, &rs, &given)
                        .map_err(|why| format!("act on `{conclusion}`: {why}")),
                }
            }
        }
    }
}

fn check_relaxed_cover(
    ls: &[Summand],
    rs: &[Summand],
    given: &HashSet<EquivJudgement>,
) -> Result<(), String> {
    let candidates: HashSet<EquivJudgement> = relaxed_pairs(ls, rs)
        .unwrap_or_default()
        .into_iter()
        .collect();
    if let Some(stray) = given.iter().find(|p| !candidates.contains(*p)) {
        return Err(format!("`{stray}` does not pair same-action summands"));
    }
    for (i, l) in ls.iter().enumerate() {
        if !rs
            .iter()
            .any(|r| r.action == l.action && given.contains(&pair(l, r)))
        {
            return Err(format!(
                "left summand {i} ({}.{}) is unmatched",
                l.action, l.target
            ));
        }
    }
    for (i, r) in rs.iter().enumerate() {
        if !ls
            .iter()
            .any(|l| l.action == r.action && given.contains(&pair(l, r)))
        {
            return Err(format!(
                "right summand {i} ({}.{}) is unmatched",
                r.action, r.target
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Proof search

/// Which unfolding rule the search tries first when both sides are `mu`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecOrder {
    #[default]
    LeftFirst,
    RightFirst,
}

#[derive(Debug, Clone, Copy)]
pub struct Prover {
    pub mode: MatchMode,
    pub max_pairs: usize,
    pub rec_order: RecOrder,
}

impl Default for Prover {
    fn default() -> Self {
        Prover {
            mode: MatchMode::default(),
            max_pairs: DEFAULT_MAX_PAIRS,
            rec_order: RecOrder::default(),
        }
    }
}

impl Prover {
    pub fn new(mode: MatchMode) -> Self {
        Prover {
            mode,
            ..Prover::default()
        }
    }

    pub fn with_max_pairs(mut self, max_pairs: usize) -> Self {
        self.max_pairs = max_pairs;
        self
    }

    pub fn with_rec_order(mut self, rec_order: RecOrder) -> Self {
        self.rec_order = rec_order;
        self
    }

    pub fn prove(&self, p: &ProcessExpr, q: &ProcessExpr) -> Result<Option<ProofCert>, EquivError> {
        self.prove_judgement(&EquivJudgement::new(p.clone(), q.clone())?)
    }

    /// Returns a circular certificate for `j`, or `None` if no rule path closes
    /// every branch.
    pub fn prove_judgement(&self, j: &EquivJudgement) -> Result<Option<ProofCert>, EquivError> {
        let mut search = Search {
            prover: self,
            seen: HashSet::new(),
            refuted: HashSet::new(),
            proven: HashMap::new(),
            on_path: HashSet::new(),
        };
        Ok(search
            .run(j)?
            .map(|found| to_cert(&found.tree, &mut Vec::new())))
    }
}

/// Searches with a fresh [`Prover`].
pub fn prove_equiv(
    p: &ProcessExpr,
    q: &ProcessExpr,
    mode: MatchMode,
    max_pairs: usize,
) -> Result<Option<ProofCert>, EquivError> {
    Prover::new(mode).with_max_pairs(max_pairs).prove(p, q)
}

/// Search tree; back-edges name their target and are resolved to depths at
/// the end, so subtrees can be reused under a different ancestor chain.
enum Tree {
    Rule {
        key: Rc<str>,
        rule: EquivRule,
        children: Vec<Rc<Tree>>,
    },
    Back {
        key: Rc<str>,
    },
}

#[derive(Clone)]
struct Found {
    tree: Rc<Tree>,
    /// Ancestors the subtree's back-edges escape to.
    deps: BTreeSet<Rc<str>>,
}

struct Search<'p> {
    prover: &'p Prover,
    seen: HashSet<Rc<str>>,
    // Only judgements outside the greatest fixpoint end up here: the search
    // never fails on a member, whatever the ancestor chain.
    refuted: HashSet<Rc<str>>,
    proven: HashMap<Rc<str>, Found>,
    on_path: HashSet<Rc<str>>,
}

impl Search<'_> {
    fn run(&mut self, j: &EquivJudgement) -> Result<Option<Found>, EquivError> {
        let key: Rc<str> = j.key().into();
        if self.seen.insert(key.clone()) && self.seen.len() > self.prover.max_pairs {
            return Err(EquivError::PairBudgetExceeded(self.prover.max_pairs));
        }
        if self.on_path.contains(&key) {
            return Ok(Some(Found {
                tree: Rc::new(Tree::Back { key: key.clone() }),
                deps: BTreeSet::from([key]),
            }));
        }
        if self.refuted.contains(&key) {
            return Ok(None);
        }
        if let Some(found) = self.proven.get(&key) {
            if found.deps.iter().all(|d| self.on_path.contains(d)) {
                return Ok(Some(found.clone()));
            }
        }

        self.on_path.insert(key.clone());
        let outcome = self.expand(j, &key);
        self.on_path.remove(&key);

        match outcome? {
            Some(mut found) => {
                found.deps.remove(&key);
                self.proven.insert(key, found.clone());
                Ok(Some(found))
            }
            None => {
                self.refuted.insert(key);
                Ok(None)
            }
        }
    }

    fn expand(&mut self, j: &EquivJudgement, key: &Rc<str>) -> Result<Option<Found>, EquivError> {
        let order = match self.prover.rec_order {
            RecOrder::LeftFirst => [EquivRule::RecL, EquivRule::RecR, EquivRule::Act],
            RecOrder::RightFirst => [EquivRule::RecR, EquivRule::RecL, EquivRule::Act],
        };
        for rule in order {
            let found = match rule {
                EquivRule::RecL if matches!(j.left, ProcessExpr::Mu(..)) => {
                    self.premises(key, rule, [j.unfold_left()])?
                }
                EquivRule::RecR if matches!(j.right, ProcessExpr::Mu(..)) => {
                    self.premises(key, rule, [j.unfold_right()])?
                }
                EquivRule::Act => match (&j.left, &j.right) {
                    (ProcessExpr::Sum(ls), ProcessExpr::Sum(rs)) => match self.prover.mode {
                        MatchMode::Literal => match literal_pairs(ls, rs) {
                            Some(pairs) => self.premises(key, rule, pairs)?,
                            None => None,
                        },
                        MatchMode::Relaxed => self.cover(key, ls, rs)?,
                    },
                    _ => None,
                },
                _ => None,
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// All premises must be proved.
    fn premises(
        &mut self,
        key: &Rc<str>,
        rule: EquivRule,
        premises: impl IntoIterator<Item = EquivJudgement>,
    ) -> Result<Option<Found>, EquivError> {
        let mut node = NodeBuilder::new(key, rule);
        for premise in premises {
            match self.run(&premise)? {
                Some(found) => node.push(found),
                None => return Ok(None),
            }
        }
        Ok(Some(node.finish()))
    }

    /// Relaxed `act`: proves same-action pairs until every summand on both
    /// sides has a proved partner. Pairs whose two summands are already
    /// matched are skipped.
    fn cover(
        &mut self,
        key: &Rc<str>,
        ls: &[Summand],
        rs: &[Summand],
    ) -> Result<Option<Found>, EquivError> {
        let mut node = NodeBuilder::new(key, EquivRule::Act);
        let mut right_matched = vec![false; rs.len()];
        for l in ls {
            let mut left_matched = false;
            for (k, r) in rs.iter().enumerate() {
                if r.action != l.action || (left_matched && right_matched[k]) {
                    continue;
                }
                if let Some(found) = self.run(&pair(l, r))? {
                    node.push(found);
                    left_matched = true;
                    right_matched[k] = true;
                }
            }
            if !left_matched {
                return Ok(None);
            }
        }
        Ok(right_matched.iter().all(|&m| m).then(|| node.finish()))
    }
}

struct NodeBuilder {
    key: Rc<str>,
    rule: EquivRule,
    children: Vec<Rc<Tree>>,
    labels: HashSet<Rc<str>>,
    deps: BTreeSet<Rc<str>>,
}

impl NodeBuilder {
    fn new(key: &Rc<str>, rule: EquivRule) -> Self {
        NodeBuilder {
            key: key.clone(),
            rule,
            children: Vec::new(),
            labels: HashSet::new(),
            deps: BTreeSet::new(),
        }
    }

    /// Premises form a set; a repeated label is dropped.
    fn push(&mut self, found: Found) {
        let label = match &*found.tree {
            Tree::Rule { key, .. } | Tree::Back { key } => key.clone(),
        };
        if self.labels.insert(label) {
            self.deps.extend(found.deps);
            self.children.push(found.tree);
        }
    }

    fn finish(self) -> Found {
        Found {
            tree: Rc::new(Tree::Rule {
                key: self.key,
                rule: self.rule,
                children: self.children,
            }),
            deps: self.deps,
        }
    }
}

fn to_cert(tree: &Tree, path: &mut Vec<Rc<str>>) -> ProofCert {
    match tree {
        Tree::Back { key } => {
            let at = path
                .iter()
                .rposition(|a| a == key)
                .expect("back-edge targets are always on the current branch");
            ProofCert::back_edge(&**key, path.len() - at)
        }
        Tree::Rule {
            key,
            rule,
            children,
        } if children.is_empty() => ProofCert::axiom(&**key, rule.name()),
        Tree::Rule {
            key,
            rule,
            children,
        } => {
            path.push(key.clone());
            let children = children.iter().map(|c| to_cert(c, path)).collect();
            path.pop();
            ProofCert::inner(&**key, rule.name(), children)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofcert::{check_circular, check_wellfounded, NodeKind};

    fn p(s: &str) -> ProcessExpr {
        parse(s).unwrap()
    }

    fn j(l: &str, r: &str) -> EquivJudgement {
        EquivJudgement::new(p(l), p(r)).unwrap()
    }

    #[test]
    fn judgement_keys() {
        let judgement = j("mu X. a.a.X", "mu Y. a.a.a.Y");
        assert_eq!(judgement.key(), "mu X. a.a.X == mu Y. a.a.a.Y");
        assert_eq!(
            EquivJudgement::parse_key(&judgement.key()).unwrap(),
            judgement
        );
        assert!(matches!(
            EquivJudgement::parse_key("mu X.a.a.X == mu Y. a.a.a.Y"),
            Err(EquivError::NonCanonical { .. })
        ));
        assert!(matches!(
            EquivJudgement::parse_key("a.0"),
            Err(EquivError::MalformedJudgement(_))
        ));
        assert!(EquivJudgement::new(p("a.X"), p("0")).is_err());
    }

    #[test]
    fn rules_for_two_binders() {
        let rules = applicable_rules(&j("mu X. a.a.X", "mu Y. a.a.a.Y"), MatchMode::Relaxed);
        assert_eq!(
            rules,
            vec![
                RuleApplication {
                    rule: EquivRule::RecL,
                    premises: vec![j("a.a.mu X. a.a.X", "mu Y. a.a.a.Y")],
                },
                RuleApplication {
                    rule: EquivRule::RecR,
                    premises: vec![j("mu X. a.a.X", "a.a.a.mu Y. a.a.a.Y")],
                },
            ]
        );
    }

    #[test]
    fn act_on_empty_sums() {
        for mode in [MatchMode::Literal, MatchMode::Relaxed] {
            let rules = applicable_rules(&j("0", "0"), mode);
            assert_eq!(
                rules,
                vec![RuleApplication {
                    rule: EquivRule::Act,
                    premises: vec![]
                }]
            );
        }
    }

    #[test]
    fn act_interpretations_differ_on_duplicates() {
        let judgement = j("a.0 + a.0", "a.0");
        assert!(applicable_rules(&judgement, MatchMode::Literal).is_empty());
        assert_eq!(
            applicable_rules(&judgement, MatchMode::Relaxed),
            vec![RuleApplication {
                rule: EquivRule::Act,
                premises: vec![j("0", "0")]
            }]
        );
        assert!(applicable_rules(&j("a.0", "b.0"), MatchMode::Relaxed).is_empty());
        assert!(applicable_rules(&j("a.0 + b.0", "b.0 + a.0"), MatchMode::Literal).is_empty());
    }

    #[test]
    fn instance_checks() {
        let schema = EquivSchemata::new(MatchMode::Relaxed);
        let literal = EquivSchemata::new(MatchMode::Literal);
        assert!(schema
            .check_instance("act", &["0 == 0"], "a.0 + a.0 == a.0")
            .is_ok());
        assert!(literal
            .check_instance("act", &["0 == 0"], "a.0 + a.0 == a.0")
            .is_err());
        assert!(schema
            .check_instance("act", &["0 == 0"], "a.0 == b.0")
            .is_err());
        assert!(schema.check_instance("act", &[], "0 == 0").is_ok());
        assert!(schema.check_instance("act", &[], "a.0 == 0").is_err());
        assert!(schema
            .check_instance("act", &["0 == 0", "b.0 == 0"], "a.0 + b.0 == a.0 + b.b.0")
            .is_err());
        assert!(schema
            .check_instance("rec-l", &["a.a.mu X. a.a.X == 0"], "mu X. a.a.X == 0")
            .is_ok());
        assert!(schema
            .check_instance("rec-l", &["0 == 0"], "mu X. a.a.X == 0")
            .is_err());
        assert!(schema
            .check_instance("rec-r", &["0 == 0"], "0 == 0")
            .is_err());
        assert!(schema.check_instance("trans", &[], "0 == 0").is_err());
    }

    #[test]
    fn proves_the_two_loop_example() {
        for mode in [MatchMode::Literal, MatchMode::Relaxed] {
            let cert = prove_equiv(
                &p("mu X. a.a.X"),
                &p("mu Y. a.a.a.Y"),
                mode,
                DEFAULT_MAX_PAIRS,
            )
            .unwrap()
            .expect("bisimilar loops are provable");
            assert_eq!(cert.judgements().len(), 11);
            assert_eq!(cert.back_edge_count(), 1);
            assert_eq!(check_circular(&cert, &EquivSchemata::new(mode)), Ok(()));
            let back = cert
                .nodes()
                .into_iter()
                .find(|n| matches!(n.kind, NodeKind::BackEdge { .. }))
                .unwrap();
            assert_eq!(back.judgement, cert.judgement);
            assert!(matches!(back.kind, NodeKind::BackEdge { up: 11 }));
        }
    }

    #[test]
    fn nil_is_an_axiom() {
        let cert = prove_equiv(&p("0"), &p("0"), MatchMode::Relaxed, 10)
            .unwrap()
            .unwrap();
        assert_eq!(cert, ProofCert::axiom("0 == 0", "act"));
        assert_eq!(check_wellfounded(&cert, &EquivSchemata::default()), Ok(()));
    }

    #[test]
    fn refutes_swapped_loop() {
        for mode in [MatchMode::Literal, MatchMode::Relaxed] {
            assert_eq!(
                prove_equiv(
                    &p("mu X. a.b.X"),
                    &p("mu X. b.a.X"),
                    mode,
                    DEFAULT_MAX_PAIRS
                )
                .unwrap(),
                None
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            prove_equiv(
                &p("mu X. a.a.X"),
                &p("mu Y. a.a.a.Y"),
                MatchMode::Relaxed,
                3
            ),
            Err(EquivError::PairBudgetExceeded(3))
        );
    }

    #[test]
    fn relaxed_matches_reordered_and_duplicated_summands() {
        let schema = EquivSchemata::new(MatchMode::Relaxed);
        for (l, r) in [
            ("a.0 + a.0", "a.0"),
            ("a.0 + b.0", "b.0 + a.0"),
            ("mu X. a.X + a.X", "mu Y. a.Y"),
            ("mu X. a.(b.X + c.0) + a.(c.0 + b.X)", "mu Y. a.(c.0 + b.Y)"),
        ] {
            let cert = Prover::new(MatchMode::Relaxed).prove(&p(l), &p(r)).unwrap();
            let cert = cert.unwrap_or_else(|| panic!("{l} == {r} should be provable"));
            assert_eq!(check_circular(&cert, &schema), Ok(()), "{l} == {r}");
        }
        assert!(Prover::new(MatchMode::Literal)
            .prove(&p("a.0 + b.0"), &p("b.0 + a.0"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn right_first_order_also_succeeds() {
        let prover = Prover::default().with_rec_order(RecOrder::RightFirst);
        let cert = prover
            .prove(&p("mu X. a.a.X"), &p("mu Y. a.a.a.Y"))
            .unwrap()
            .unwrap();
        assert_eq!(cert.rule(), Some("rec-r"));
        assert_eq!(check_circular(&cert, &EquivSchemata::default()), Ok(()));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("literal".parse::<MatchMode>().unwrap(), MatchMode::Literal);
        assert_eq!("relaxed".parse::<MatchMode>().unwrap(), MatchMode::Relaxed);
        assert!("fuzzy".parse::<MatchMode>().is_err());
        assert_eq!(MatchMode::default(), MatchMode::Relaxed);
    }
}
