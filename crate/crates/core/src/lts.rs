//! Labelled transition semantics and a naive strong-bisimilarity check.
//!
//! The oracle here deliberately shares nothing with the prover in
//! [`crate::equiv`] beyond head unfolding: it builds the reachable state space
//! and computes the greatest bisimulation by pair-relation refinement.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::syntax::{render, Action, ProcessExpr, SyntaxError};

pub const DEFAULT_MAX_STATES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("state budget exceeded: more than {0} states")]
    StateBudgetExceeded(usize),
}

/// Outgoing transitions of a process.
pub fn transitions(p: &ProcessExpr) -> Result<BTreeSet<(Action, ProcessExpr)>, LtsError> {
    Ok(p.head_summands()?
        .into_iter()
        .map(|s| (s.action, s.target))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    states: Vec<ProcessExpr>,
    edges: Vec<BTreeSet<(Action, usize)>>,
    roots: Vec<usize>,
}

impl TransitionSystem {
    pub fn states(&self) -> &[ProcessExpr] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// State indices of the roots, in the order they were given to [`explore`].
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn successors(&self, state: usize) -> &BTreeSet<(Action, usize)> {
        &self.edges[state]
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }
}

/// Breadth-first closure of `roots` under [`transitions`]. States are
/// identified by their canonical rendering.
pub fn explore(roots: &[ProcessExpr], max_states: usize) -> Result<TransitionSystem, LtsError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |p: &ProcessExpr,
                      states: &mut Vec<ProcessExpr>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, LtsError> {
        let key = render(p);
        if let Some(&i) = index.get(&key) {
            return Ok(i);
        }
        if states.len() >= max_states {
            return Err(LtsError::StateBudgetExceeded(max_states));
        }
        let i = states.len();
        index.insert(key, i);
        states.push(p.clone());
        queue.push_back(i);
        Ok(i)
    };

    let mut root_ids = Vec::with_capacity(roots.len());
    for root in roots {
        root.require_process()?;
        root_ids.push(intern(root, &mut states, &mut queue)?);
    }

    let mut edges: Vec<BTreeSet<(Action, usize)>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let out = transitions(&states[i].clone())?;
        let mut targets = BTreeSet::new();
        for (a, target) in out {
            targets.insert((a, intern(&target, &mut states, &mut queue)?));
        }
        if edges.len() <= i {
            edges.resize_with(i + 1, BTreeSet::new);
        }
        edges[i] = targets;
    }
    edges.resize_with(states.len(), BTreeSet::new);

    Ok(TransitionSystem {
        states,
        edges,
        roots: root_ids,
    })
}

/// The largest strong bisimulation on `lts`, as a dense relation matrix.
pub fn bisimulation(lts: &TransitionSystem) -> Vec<Vec<bool>> {
    let n = lts.len();
    let mut related = vec![vec![true; n]; n];
    // `s` can answer every move of `t` into the current relation.
    let simulates = |related: &Vec<Vec<bool>>, s: usize, t: usize, forward: bool| {
        lts.successors(s).iter().all(|(a, s2)| {
            lts.successors(t).iter().any(|(b, t2)| {
                a == b
                    && if forward {
                        related[*s2][*t2]
                    } else {
                        related[*t2][*s2]
                    }
            })
        })
    };
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if related[s][t]
                    && !(simulates(&related, s, t, true) && simulates(&related, t, s, false))
                {
                    related[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return related;
        }
    }
}

pub fn bisimilar(p: &ProcessExpr, q: &ProcessExpr, max_states: usize) -> Result<bool, LtsError> {
    let lts = explore(&[p.clone(), q.clone()], max_states)?;
    let relation = bisimulation(&lts);
    Ok(relation[lts.roots[0]][lts.roots[1]])
}
