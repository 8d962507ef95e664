//! Finite rule systems over an explicit universe of judgements.
//!
//! A set `V` of judgements may satisfy either half of the validity condition:
//!
//! * *closed* ("if"): whenever all premises of a rule are in `V`, so is its
//!   conclusion. The least closed set is the inductively valid set, [`lfp`].
//! * *consistent* ("only if"): every member of `V` is the conclusion of some
//!   rule whose premises all lie in `V`. The greatest consistent set is the
//!   coinductively valid set, [`gfp`].
//!
//! Proofs are extracted as [`ProofCert`]s: well-founded ones for members of
//! the least fixpoint, circular ones (finite trees with back-edges) for
//! members of the greatest.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::proofcert::{InstanceCheck, ProofCert};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `judgements:` line")]
    MissingUniverse,
    #[error("unknown judgement id `{0}`")]
    UnknownJudgement(String),
    #[error("duplicate judgement id `{0}`")]
    DuplicateJudgement(String),
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Judgement(String);

impl Judgement {
    pub fn new(id: impl Into<String>) -> Self {
        Judgement(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Judgement {
    fn from(s: &str) -> Self {
        Judgement(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub premises: BTreeSet<Judgement>,
    pub conclusion: Judgement,
}

impl Rule {
    pub fn new<I, J>(name: impl Into<String>, premises: I, conclusion: impl Into<Judgement>) -> Self
    where
        I: IntoIterator<Item = J>,
        J: Into<Judgement>,
    {
        Rule {
            name: name.into(),
            premises: premises.into_iter().map(Into::into).collect(),
            conclusion: conclusion.into(),
        }
    }
}

pub type JudgementSet = BTreeSet<Judgement>;

/// Rule in index form.
#[derive(Debug, Clone)]
struct Compiled {
    premises: Vec<usize>,
    conclusion: usize,
}

#[derive(Debug, Clone)]
pub struct RuleSystem {
    universe: Vec<Judgement>,
    rules: Vec<Rule>,
    index: HashMap<Judgement, usize>,
    compiled: Vec<Compiled>,
}

impl RuleSystem {
    /// Validates that ids are unique and every rule mentions only known ids.
    /// Rule names need not be unique here; the file parser enforces that.
    pub fn new(universe: Vec<Judgement>, rules: Vec<Rule>) -> Result<Self, RuleFileError> {
        let mut index = HashMap::with_capacity(universe.len());
        for (i, j) in universe.iter().enumerate() {
            if index.insert(j.clone(), i).is_some() {
                return Err(RuleFileError::DuplicateJudgement(j.0.clone()));
            }
        }
        let lookup = |j: &Judgement| {
            index
                .get(j)
                .copied()
                .ok_or_else(|| RuleFileError::UnknownJudgement(j.0.clone()))
        };
        let compiled = rules
            .iter()
            .map(|r| {
                Ok(Compiled {
                    premises: r.premises.iter().map(lookup).collect::<Result<_, _>>()?,
                    conclusion: lookup(&r.conclusion)?,
                })
            })
            .collect::<Result<Vec<_>, RuleFileError>>()?;
        Ok(RuleSystem {
            universe,
            rules,
            index,
            compiled,
        })
    }

    pub fn universe(&self) -> &[Judgement] {
        &self.universe
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn contains(&self, j: &Judgement) -> bool {
        self.index.contains_key(j)
    }

    /// Whether `set` satisfies the "if" direction: closed under every rule.
    pub fn is_closed(&self, set: &JudgementSet) -> bool {
        self.rules
            .iter()
            .all(|r| !r.premises.is_subset(set) || set.contains(&r.conclusion))
    }

    /// Whether `set` satisfies the "only if" direction: every member is
    /// supported by a rule with all premises in `set`.
    pub fn is_consistent(&self, set: &JudgementSet) -> bool {
        set.iter().all(|j| {
            self.rules
                .iter()
                .any(|r| r.conclusion == *j && r.premises.is_subset(set))
        })
    }

    /// Judgements derivable in one step from `set`.
    pub fn step(&self, set: &JudgementSet) -> JudgementSet {
        self.rules
            .iter()
            .filter(|r| r.premises.is_subset(set))
            .map(|r| r.conclusion.clone())
            .collect()
    }

    fn to_set(&self, members: &[bool]) -> JudgementSet {
        members
            .iter()
            .zip(&self.universe)
            .filter(|(m, _)| **m)
            .map(|(_, j)| j.clone())
            .collect()
    }

    /// Kleene round in which each judgement first became derivable.
    fn rounds(&self) -> Vec<Option<usize>> {
        let mut round = vec![None; self.universe.len()];
        for r in 0.. {
            let fresh: Vec<usize> = self
                .compiled
                .iter()
                .filter(|c| round[c.conclusion].is_none())
                .filter(|c| {
                    c.premises
                        .iter()
                        .all(|&p| matches!(round[p], Some(k) if k < r))
                })
                .map(|c| c.conclusion)
                .collect();
            if fresh.is_empty() {
                break;
            }
            for j in fresh {
                round[j] = Some(r);
            }
        }
        round
    }

    fn gfp_mask(&self) -> Vec<bool> {
        let mut alive = vec![true; self.universe.len()];
        loop {
            let supported: Vec<bool> = (0..self.universe.len())
                .map(|j| {
                    alive[j]
                        && self
                            .compiled
                            .iter()
                            .any(|c| c.conclusion == j && c.premises.iter().all(|&p| alive[p]))
                })
                .collect();
            if supported == alive {
                return alive;
            }
            alive = supported;
        }
    }
}

/// Parses the line-based rule format:
///
/// ```text
/// # comment
/// judgements: p q
/// rule ax: |- p
/// rule r: p |- q
/// ```
pub fn parse_rulesystem(text: &str) -> Result<RuleSystem, RuleFileError> {
    let mut universe: Option<Vec<Judgement>> = None;
    let mut rules = Vec::new();
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| RuleFileError::Syntax {
            line: line_no,
            message: message.to_string(),
        };
        let Some(known) = &universe else {
            let ids = line
                .strip_prefix("judgements:")
                .ok_or_else(|| syntax("expected `judgements: <id> ...`"))?;
            universe = Some(ids.split_whitespace().map(Judgement::from).collect());
            continue;
        };
        let body = line
            .strip_prefix("rule")
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .ok_or_else(|| syntax("expected `rule <name>: <id> ... |- <id>`"))?;
        let (name, sequent) = body
            .split_once(':')
            .ok_or_else(|| syntax("missing `:` after rule name"))?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(syntax("rule name must be a single word"));
        }
        let (premises, conclusion) = sequent
            .split_once("|-")
            .ok_or_else(|| syntax("missing `|-`"))?;
        let conclusion: Vec<&str> = conclusion.split_whitespace().collect();
        let [conclusion] = conclusion[..] else {
            return Err(syntax("a rule has exactly one conclusion"));
        };
        let rule = Rule::new(name, premises.split_whitespace(), conclusion);
        for j in rule.premises.iter().chain([&rule.conclusion]) {
            if !known.contains(j) {
                return Err(RuleFileError::UnknownJudgement(j.0.clone()));
            }
        }
        if !names.insert(name.to_string()) {
            return Err(RuleFileError::DuplicateRule(name.to_string()));
        }
        rules.push(rule);
    }
    RuleSystem::new(universe.ok_or(RuleFileError::MissingUniverse)?, rules)
}

impl fmt::Display for RuleSystem {
    /// Writes the system back in the rule-file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<&str> = self.universe.iter().map(Judgement::as_str).collect();
        writeln!(f, "judgements: {}", ids.join(" "))?;
        for r in &self.rules {
            let premises: Vec<&str> = r.premises.iter().map(Judgement::as_str).collect();
            let sep = if premises.is_empty() { "" } else { " " };
            writeln!(
                f,
                "rule {}: {}{sep}|- {}",
                r.name,
                premises.join(" "),
                r.conclusion
            )?;
        }
        Ok(())
    }
}

/// The inductively valid judgements: least set closed under the rules.
pub fn lfp(rs: &RuleSystem) -> JudgementSet {
    let round = rs.rounds();
    let members: Vec<bool> = round.iter().map(Option::is_some).collect();
    rs.to_set(&members)
}

/// The coinductively valid judgements: greatest self-supporting set.
pub fn gfp(rs: &RuleSystem) -> JudgementSet {
    rs.to_set(&rs.gfp_mask())
}

/// A back-edge-free proof of `j`, present exactly when `j` is in [`lfp`].
///
/// Every node is justified by the first rule (in file order) whose premises
/// entered the Kleene iteration strictly earlier than its conclusion.
pub fn extract_wf_proof(rs: &RuleSystem, j: &Judgement) -> Option<ProofCert> {
    let round = rs.rounds();
    let start = *rs.index.get(j)?;
    round[start]?;

    fn build(rs: &RuleSystem, round: &[Option<usize>], j: usize) -> ProofCert {
        let here = round[j].expect("only members of the least fixpoint are expanded");
        let (i, rule) = rs
            .compiled
            .iter()
            .enumerate()
            .find(|(_, c)| {
                c.conclusion == j
                    && c.premises
                        .iter()
                        .all(|&p| matches!(round[p], Some(k) if k < here))
            })
            .expect("a member entering in round k has a rule with premises from earlier rounds");
        let name = &rs.rules[i].name;
        let label = rs.universe[j].as_str();
        if rule.premises.is_empty() {
            ProofCert::axiom(label, name)
        } else {
            let children = rule.premises.iter().map(|&p| build(rs, round, p)).collect();
            ProofCert::inner(label, name, children)
        }
    }

    Some(build(rs, &round, start))
}

/// A circular proof of `j`, present exactly when `j` is in [`gfp`].
///
/// Expands depth-first with the first rule whose premises all lie in the
/// greatest fixpoint; a premise that repeats an ancestor becomes a back-edge.
pub fn extract_circular_proof(rs: &RuleSystem, j: &Judgement) -> Option<ProofCert> {
    let alive = rs.gfp_mask();
    let start = *rs.index.get(j)?;
    if !alive[start] {
        return None;
    }

    fn build(rs: &RuleSystem, alive: &[bool], j: usize, path: &mut Vec<usize>) -> ProofCert {
        let label = rs.universe[j].as_str();
        if let Some(pos) = path.iter().rposition(|&a| a == j) {
            return ProofCert::back_edge(label, path.len() - pos);
        }
        let (i, rule) = rs
            .compiled
            .iter()
            .enumerate()
            .find(|(_, c)| c.conclusion == j && c.premises.iter().all(|&p| alive[p]))
            .expect("every member of the greatest fixpoint is supported inside it");
        let name = &rs.rules[i].name;
        if rule.premises.is_empty() {
            return ProofCert::axiom(label, name);
        }
        path.push(j);
        let children = rule
            .premises
            .iter()
            .map(|&p| build(rs, alive, p, path))
            .collect();
        path.pop();
        ProofCert::inner(label, name, children)
    }

    Some(build(rs, &alive, start, &mut Vec::new()))
}

impl InstanceCheck for RuleSystem {
    fn check_instance(
        &self,
        rule: &str,
        premises: &[&str],
        conclusion: &str,
    ) -> Result<(), String> {
        let given: BTreeSet<&str> = premises.iter().copied().collect();
        let mut named = self.rules.iter().filter(|r| r.name == rule).peekable();
        if named.peek().is_none() {
            return Err(format!("no rule named `{rule}`"));
        }
        let matches = named.any(|r| {
            r.conclusion.as_str() == conclusion
                && r.premises
                    .iter()
                    .map(Judgement::as_str)
                    .eq(given.iter().copied())
        });
        if matches {
            Ok(())
        } else {
            let shown: Vec<&str> = given.into_iter().collect();
            Err(format!(
                "`{rule}` does not derive `{conclusion}` from {{{}}}",
                shown.join(", ")
            ))
        }
    }
}
