//! Proof certificates: finite trees of rule applications whose leaves are
//! axioms, back-edges to an ancestor with the same judgement, or named
//! coinduction hypotheses.
//!
//! A certificate with back-edges stands for the infinite proof obtained by
//! unrolling every back-edge into a copy of the subtree it points at.
//!
//! Judgements are opaque strings here. Whether a node is a legal rule
//! instance is decided by an [`InstanceCheck`] supplied by the caller: a
//! finite [`RuleSystem`](crate::ruleset::RuleSystem) or the process
//! equivalence schemata in [`crate::equiv`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofCert {
    pub judgement: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Inner {
        rule: String,
        children: Vec<ProofCert>,
    },
    /// Application of a rule with no premises.
    Axiom {
        rule: String,
    },
    /// Closes the branch by pointing `up` levels towards the root.
    BackEdge {
        up: usize,
    },
    Hypothesis {
        name: String,
    },
}

impl ProofCert {
    pub fn inner(
        judgement: impl Into<String>,
        rule: impl Into<String>,
        children: Vec<ProofCert>,
    ) -> Self {
        ProofCert {
            judgement: judgement.into(),
            kind: NodeKind::Inner {
                rule: rule.into(),
                children,
            },
        }
    }

    pub fn axiom(judgement: impl Into<String>, rule: impl Into<String>) -> Self {
        ProofCert {
            judgement: judgement.into(),
            kind: NodeKind::Axiom { rule: rule.into() },
        }
    }

    pub fn back_edge(judgement: impl Into<String>, up: usize) -> Self {
        ProofCert {
            judgement: judgement.into(),
            kind: NodeKind::BackEdge { up },
        }
    }

    pub fn hypothesis(judgement: impl Into<String>, name: impl Into<String>) -> Self {
        ProofCert {
            judgement: judgement.into(),
            kind: NodeKind::Hypothesis { name: name.into() },
        }
    }

    pub fn children(&self) -> &[ProofCert] {
        match &self.kind {
            NodeKind::Inner { children, .. } => children,
            _ => &[],
        }
    }

    pub fn rule(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Inner { rule, .. } | NodeKind::Axiom { rule } => Some(rule),
            _ => None,
        }
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&ProofCert> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children().iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }

    pub fn back_edge_count(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::BackEdge { .. }))
            .count()
    }

    pub fn has_back_edges(&self) -> bool {
        self.back_edge_count() > 0
    }

    pub fn has_hypotheses(&self) -> bool {
        self.nodes()
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Hypothesis { .. }))
    }

    /// Distinct judgements labelling the tree.
    pub fn judgements(&self) -> BTreeSet<&str> {
        self.nodes().iter().map(|n| n.judgement.as_str()).collect()
    }

    /// Distinct rule names used by inner and axiom nodes.
    pub fn rules_used(&self) -> BTreeSet<&str> {
        self.nodes().iter().filter_map(|n| n.rule()).collect()
    }

    /// Replaces every back-edge by a hypothesis leaf named `name` on the same
    /// judgement, turning a circular proof into a proof fragment.
    pub fn open_back_edges(&self, name: &str) -> ProofCert {
        let kind = match &self.kind {
            NodeKind::BackEdge { .. } => NodeKind::Hypothesis {
                name: name.to_string(),
            },
            NodeKind::Inner { rule, children } => NodeKind::Inner {
                rule: rule.clone(),
                children: children.iter().map(|c| c.open_back_edges(name)).collect(),
            },
            other => other.clone(),
        };
        ProofCert {
            judgement: self.judgement.clone(),
            kind,
        }
    }

    /// Replaces every hypothesis leaf whose judgement labels a proper ancestor
    /// by a back-edge to the nearest such ancestor. Other hypotheses are kept.
    pub fn close_hypotheses(&self) -> ProofCert {
        fn go(node: &ProofCert, path: &mut Vec<String>) -> ProofCert {
            let kind = match &node.kind {
                NodeKind::Hypothesis { name } => {
                    match path.iter().rposition(|j| *j == node.judgement) {
                        Some(i) => NodeKind::BackEdge { up: path.len() - i },
                        None => NodeKind::Hypothesis { name: name.clone() },
                    }
                }
                NodeKind::Inner { rule, children } => {
                    path.push(node.judgement.clone());
                    let children = children.iter().map(|c| go(c, path)).collect();
                    path.pop();
                    NodeKind::Inner {
                        rule: rule.clone(),
                        children,
                    }
                }
                other => other.clone(),
            };
            ProofCert {
                judgement: node.judgement.clone(),
                kind,
            }
        }
        go(self, &mut Vec::new())
    }
}

// ---------------------------------------------------------------------------
// Checking

/// Decides whether `premises / conclusion` is an instance of the rule `rule`.
///
/// `premises` are the judgements of the node's children in order; rule
/// systems that treat premises as a set should ignore order and repetition.
pub trait InstanceCheck {
    fn check_instance(&self, rule: &str, premises: &[&str], conclusion: &str)
        -> Result<(), String>;
}

impl<T: InstanceCheck + ?Sized> InstanceCheck for &T {
    fn check_instance(
        &self,
        rule: &str,
        premises: &[&str],
        conclusion: &str,
    ) -> Result<(), String> {
        (**self).check_instance(rule, premises, conclusion)
    }
}

/// Location of a node: child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("back-edge present at {0}")]
    BackEdgePresent(NodePath),
    #[error("hypothesis leaf present at {0}")]
    HypothesisPresent(NodePath),
    #[error("invalid rule instance at {path}: {reason}")]
    InvalidInstance { path: NodePath, reason: String },
    #[error("back-edge to self (empty fragment) at {0}")]
    BackEdgeToSelf(NodePath),
    #[error("back-edge at {path} points {up} levels up, past the root")]
    BackEdgeOutOfRange { path: NodePath, up: usize },
    #[error("back-edge judgement mismatch at {path}: `{found}` points to `{target}`")]
    BackEdgeMismatch {
        path: NodePath,
        found: String,
        target: String,
    },
    #[error("empty fragment: the root is a hypothesis")]
    EmptyFragment,
    #[error("unknown hypothesis at {path}: `{judgement}`")]
    UnknownHypothesis { path: NodePath, judgement: String },
    #[error("no fragment derives hypothesis `{0}`")]
    MissingFragment(String),
}

pub type Verdict = Result<(), Rejection>;

#[derive(Clone, Copy)]
enum Policy<'h> {
    WellFounded,
    Circular,
    Fragment(&'h BTreeSet<String>),
}

/// Accepts finite well-founded proofs: no back-edges, no hypotheses.
pub fn check_wellfounded(cert: &ProofCert, rules: &impl InstanceCheck) -> Verdict {
    check(cert, rules, Policy::WellFounded)
}

/// Accepts circular proofs: back-edges must point at a proper ancestor with
/// an identical judgement, and no hypotheses may remain.
pub fn check_circular(cert: &ProofCert, rules: &impl InstanceCheck) -> Verdict {
    check(cert, rules, Policy::Circular)
}

/// Accepts a nonempty proof fragment whose open leaves cite judgements from
/// `hypotheses`. Hypothesis leaves may occur at any depth except the root.
pub fn check_fragment(
    cert: &ProofCert,
    hypotheses: &BTreeSet<String>,
    rules: &impl InstanceCheck,
) -> Verdict {
    if matches!(cert.kind, NodeKind::Hypothesis { .. }) {
        return Err(Rejection::EmptyFragment);
    }
    check(cert, rules, Policy::Fragment(hypotheses))
}

/// Checks a coinductive proof of the whole set `hypotheses`: each member must
/// be the root of some accepted fragment.
pub fn check_coinductive_family(
    fragments: &[ProofCert],
    hypotheses: &BTreeSet<String>,
    rules: &impl InstanceCheck,
) -> Verdict {
    for fragment in fragments {
        check_fragment(fragment, hypotheses, rules)?;
    }
    let roots: HashSet<&str> = fragments.iter().map(|f| f.judgement.as_str()).collect();
    match hypotheses.iter().find(|h| !roots.contains(h.as_str())) {
        Some(missing) => Err(Rejection::MissingFragment(missing.clone())),
        None => Ok(()),
    }
}

fn check(cert: &ProofCert, rules: &impl InstanceCheck, policy: Policy<'_>) -> Verdict {
    let mut ancestors = Vec::new();
    let mut path = NodePath::default();
    check_node(cert, rules, policy, &mut ancestors, &mut path)
}

fn check_node<'c>(
    node: &'c ProofCert,
    rules: &impl InstanceCheck,
    policy: Policy<'_>,
    ancestors: &mut Vec<&'c str>,
    path: &mut NodePath,
) -> Verdict {
    match &node.kind {
        NodeKind::BackEdge { up } => {
            if !matches!(policy, Policy::Circular) {
                return Err(Rejection::BackEdgePresent(path.clone()));
            }
            if *up == 0 {
                return Err(Rejection::BackEdgeToSelf(path.clone()));
            }
            let Some(target) = ancestors.len().checked_sub(*up).map(|i| ancestors[i]) else {
                return Err(Rejection::BackEdgeOutOfRange {
                    path: path.clone(),
                    up: *up,
                });
            };
            if target != node.judgement {
                return Err(Rejection::BackEdgeMismatch {
                    path: path.clone(),
                    found: node.judgement.clone(),
                    target: target.to_string(),
                });
            }
            Ok(())
        }
        NodeKind::Hypothesis { .. } => match policy {
            Policy::Fragment(hyps) if hyps.contains(&node.judgement) => Ok(()),
            Policy::Fragment(_) => Err(Rejection::UnknownHypothesis {
                path: path.clone(),
                judgement: node.judgement.clone(),
            }),
            _ => Err(Rejection::HypothesisPresent(path.clone())),
        },
        NodeKind::Axiom { rule } => {
            rules
                .check_instance(rule, &[], &node.judgement)
                .map_err(|reason| Rejection::InvalidInstance {
                    path: path.clone(),
                    reason,
                })
        }
        NodeKind::Inner { rule, children } => {
            let premises: Vec<&str> = children.iter().map(|c| c.judgement.as_str()).collect();
            rules
                .check_instance(rule, &premises, &node.judgement)
                .map_err(|reason| Rejection::InvalidInstance {
                    path: path.clone(),
                    reason,
                })?;
            ancestors.push(&node.judgement);
            for (i, child) in children.iter().enumerate() {
                path.0.push(i);
                let verdict = check_node(child, rules, policy, ancestors, path);
                path.0.pop();
                verdict?;
            }
            ancestors.pop();
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Text format

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("empty certificate")]
    Empty,
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("undefined node id `{0}`")]
    UndefinedId(String),
    #[error("node `{0}` is referenced more than once")]
    SharedNode(String),
    #[error("node `{0}` is not reachable from the root")]
    Unreachable(String),
}

/// Serializes in pre-order with numeric ids; the first line is the root.
///
/// ```text
/// node 0: judgement "p" rule r children 1 2
/// axiom 1: judgement "q" rule ax
/// back 2: judgement "p" up 1
/// hyp 3: judgement "p" name ih
/// ```
pub fn serialize(cert: &ProofCert) -> String {
    let mut lines = Vec::new();
    emit(cert, &mut lines);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn emit(node: &ProofCert, lines: &mut Vec<String>) -> usize {
    let id = lines.len();
    lines.push(String::new());
    let judgement = quote(&node.judgement);
    lines[id] = match &node.kind {
        NodeKind::Inner { rule, children } => {
            let kids: Vec<String> = children
                .iter()
                .map(|c| emit(c, lines).to_string())
                .collect();
            format!(
                "node {id}: judgement {judgement} rule {rule} children {}",
                kids.join(" ")
            )
            .trim_end()
            .to_string()
        }
        NodeKind::Axiom { rule } => format!("axiom {id}: judgement {judgement} rule {rule}"),
        NodeKind::BackEdge { up } => format!("back {id}: judgement {judgement} up {up}"),
        NodeKind::Hypothesis { name } => format!("hyp {id}: judgement {judgement} name {name}"),
    };
    id
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

enum Entry {
    Node { rule: String, children: Vec<String> },
    Axiom { rule: String },
    Back { up: usize },
    Hyp { name: String },
}

struct Line<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Line<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, CertFormatError> {
        Err(CertFormatError::Syntax {
            line: self.line,
            message: message.into(),
        })
    }

    fn word(&mut self) -> Option<&'a str> {
        let trimmed = self.rest.trim_start();
        if trimmed.is_empty() {
            return None;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        self.rest = &trimmed[end..];
        Some(&trimmed[..end])
    }

    fn keyword(&mut self, expected: &str) -> Result<(), CertFormatError> {
        match self.word() {
            Some(w) if w == expected => Ok(()),
            Some(w) => self.err(format!("expected `{expected}`, found `{w}`")),
            None => self.err(format!("expected `{expected}`")),
        }
    }

    fn name(&mut self, what: &str) -> Result<String, CertFormatError> {
        match self.word() {
            Some(w) => Ok(w.to_string()),
            None => self.err(format!("missing {what}")),
        }
    }

    fn quoted(&mut self) -> Result<String, CertFormatError> {
        let trimmed = self.rest.trim_start();
        let mut chars = trimmed.char_indices();
        if !matches!(chars.next(), Some((_, '"'))) {
            return self.err("expected a quoted judgement");
        }
        let mut out = String::new();
        let mut escaped = false;
        for (i, c) in chars {
            if escaped {
                out.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                self.rest = &trimmed[i + 1..];
                return Ok(out);
            } else {
                out.push(c);
            }
        }
        self.err("unterminated judgement string")
    }

    fn finish(&mut self) -> Result<(), CertFormatError> {
        match self.word() {
            None => Ok(()),
            Some(w) => self.err(format!("unexpected `{w}`")),
        }
    }
}

/// Parses the format written by [`serialize`]. Blank lines and lines starting
/// with `#` are ignored; node ids are arbitrary tokens.
pub fn deserialize(text: &str) -> Result<ProofCert, CertFormatError> {
    let mut entries: HashMap<String, (String, Entry)> = HashMap::new();
    let mut order = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let mut line = Line {
            rest: raw,
            line: i + 1,
        };
        let kind = line.name("node kind")?;
        let id = match line.word() {
            Some(w) if w.len() > 1 && w.ends_with(':') => w[..w.len() - 1].to_string(),
            _ => return line.err("expected `<id>:`"),
        };
        line.keyword("judgement")?;
        let judgement = line.quoted()?;
        let entry = match kind.as_str() {
            "node" => {
                line.keyword("rule")?;
                let rule = line.name("rule name")?;
                line.keyword("children")?;
                let mut children = Vec::new();
                while let Some(w) = line.word() {
                    children.push(w.to_string());
                }
                Entry::Node { rule, children }
            }
            "axiom" => {
                line.keyword("rule")?;
                Entry::Axiom {
                    rule: line.name("rule name")?,
                }
            }
            "back" => {
                line.keyword("up")?;
                let up = line.name("ancestor depth")?;
                match up.parse() {
                    Ok(up) => Entry::Back { up },
                    Err(_) => return line.err(format!("invalid ancestor depth `{up}`")),
                }
            }
            "hyp" => {
                line.keyword("name")?;
                Entry::Hyp {
                    name: line.name("hypothesis name")?,
                }
            }
            other => return line.err(format!("unknown node kind `{other}`")),
        };
        line.finish()?;
        if entries.insert(id.clone(), (judgement, entry)).is_some() {
            return Err(CertFormatError::DuplicateId(id));
        }
        order.push(id);
    }

    let root = order.first().ok_or(CertFormatError::Empty)?;
    let mut used = HashSet::new();
    let cert = build(root, &entries, &mut used)?;
    if let Some(orphan) = order.iter().find(|id| !used.contains(id.as_str())) {
        return Err(CertFormatError::Unreachable(orphan.clone()));
    }
    Ok(cert)
}

/// Parses a hypothesis file: one judgement per line, either quoted as in
/// certificates or bare. Blank lines and `#` comments are skipped.
pub fn parse_hypotheses(text: &str) -> Result<BTreeSet<String>, CertFormatError> {
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('"') {
            let mut line = Line {
                rest: trimmed,
                line: i + 1,
            };
            out.insert(line.quoted()?);
            line.finish()?;
        } else {
            out.insert(trimmed.to_string());
        }
    }
    Ok(out)
}

fn build<'e>(
    id: &'e str,
    entries: &'e HashMap<String, (String, Entry)>,
    used: &mut HashSet<&'e str>,
) -> Result<ProofCert, CertFormatError> {
    let Some((key, (judgement, entry))) = entries.get_key_value(id) else {
        return Err(CertFormatError::UndefinedId(id.to_string()));
    };
    if !used.insert(key.as_str()) {
        return Err(CertFormatError::SharedNode(id.to_string()));
    }
    let kind = match entry {
        Entry::Node { rule, children } => NodeKind::Inner {
            rule: rule.clone(),
            children: children
                .iter()
                .map(|c| build(c, entries, used))
                .collect::<Result<_, _>>()?,
        },
        Entry::Axiom { rule } => NodeKind::Axiom { rule: rule.clone() },
        Entry::Back { up } => NodeKind::BackEdge { up: *up },
        Entry::Hyp { name } => NodeKind::Hypothesis { name: name.clone() },
    };
    Ok(ProofCert {
        judgement: judgement.clone(),
        kind,
    })
}

// ---------------------------------------------------------------------------
// Pretty printing

/// One numbered line per node, root first, indented by depth. Rule nodes end
/// with `(rule)`, back-edges with the line number of their target.
pub fn render_cert(cert: &ProofCert) -> String {
    let total = cert.node_count();
    let width = total.to_string().len();
    let mut lines = Vec::with_capacity(total);
    let mut ancestors: Vec<usize> = Vec::new();
    render_node(cert, 0, &mut ancestors, &mut lines, width);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn render_node(
    node: &ProofCert,
    depth: usize,
    ancestors: &mut Vec<usize>,
    lines: &mut Vec<String>,
    width: usize,
) {
    let number = lines.len() + 1;
    let annotation = match &node.kind {
        NodeKind::Inner { rule, .. } | NodeKind::Axiom { rule } => format!("({rule})"),
        NodeKind::BackEdge { up } => match ancestors.len().checked_sub(*up) {
            Some(i) if *up > 0 => format!("[back-edge to line {}]", ancestors[i]),
            _ => format!("[dangling back-edge, up {up}]"),
        },
        NodeKind::Hypothesis { name } => format!("[hypothesis {name}]"),
    };
    lines.push(format!(
        "{number:>width$}  {}{}  {annotation}",
        "  ".repeat(depth),
        node.judgement
    ));
    if let NodeKind::Inner { children, .. } = &node.kind {
        ancestors.push(number);
        for child in children {
            render_node(child, depth + 1, ancestors, lines, width);
        }
        ancestors.pop();
    }
}
