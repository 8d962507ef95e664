//! Random generators and brute-force oracles shared by the integration tests.
//! Nothing here calls the fixpoint or proof-search code under test.

#![allow(dead_code)]

use coind::ruleset::{Judgement, Rule, RuleSystem};
use coind::syntax::{Action, ProcessExpr, Summand, VarName};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Processes

pub struct ProcessShape {
    pub max_depth: usize,
    pub actions: Vec<Action>,
    pub max_summands: usize,
}

impl Default for ProcessShape {
    fn default() -> Self {
        ProcessShape {
            max_depth: 4,
            actions: vec![Action::new("a").unwrap(), Action::new("b").unwrap()],
            max_summands: 3,
        }
    }
}

fn binder_names() -> [VarName; 2] {
    [VarName::new("X").unwrap(), VarName::new("Y").unwrap()]
}

/// A closed process whose AST depth is at most `shape.max_depth`.
pub fn random_process(rng: &mut TestRng, shape: &ProcessShape) -> ProcessExpr {
    let mut bound = Vec::new();
    loop {
        let e = random_expr(rng, shape, shape.max_depth, &mut bound);
        if !matches!(e, ProcessExpr::Var(_)) {
            return e;
        }
    }
}

fn random_summands(
    rng: &mut TestRng,
    shape: &ProcessShape,
    depth: usize,
    bound: &mut Vec<VarName>,
    min: usize,
) -> Vec<Summand> {
    let n = rng.gen_range(min..=shape.max_summands);
    (0..n)
        .map(|_| {
            let action = shape.actions.choose(rng).unwrap().clone();
            Summand::new(action, random_expr(rng, shape, depth - 1, bound))
        })
        .collect()
}

fn random_expr(
    rng: &mut TestRng,
    shape: &ProcessShape,
    depth: usize,
    bound: &mut Vec<VarName>,
) -> ProcessExpr {
    let var = |rng: &mut TestRng, bound: &Vec<VarName>| {
        ProcessExpr::Var(bound.choose(rng).unwrap().clone())
    };
    if depth <= 1 {
        return if !bound.is_empty() && rng.gen_bool(0.6) {
            var(rng, bound)
        } else {
            ProcessExpr::nil()
        };
    }
    let roll = rng.gen_range(0..10);
    match roll {
        0..=2 if !bound.is_empty() => var(rng, bound),
        0..=5 => ProcessExpr::Sum(random_summands(rng, shape, depth, bound, 0)),
        _ => {
            let x = binder_names().choose(rng).unwrap().clone();
            bound.push(x.clone());
            let body = random_summands(rng, shape, depth - 1, bound, 1);
            bound.pop();
            ProcessExpr::Mu(x, body)
        }
    }
}

/// Renames the free occurrences of `from` to `to` (which must not occur in `e`).
fn rename_free(e: &ProcessExpr, from: &VarName, to: &VarName) -> ProcessExpr {
    let go = |s: &[Summand]| {
        s.iter()
            .map(|s| Summand::new(s.action.clone(), rename_free(&s.target, from, to)))
            .collect()
    };
    match e {
        ProcessExpr::Var(x) if x == from => ProcessExpr::Var(to.clone()),
        ProcessExpr::Var(_) => e.clone(),
        ProcessExpr::Sum(s) => ProcessExpr::Sum(go(s)),
        ProcessExpr::Mu(x, _) if x == from => e.clone(),
        ProcessExpr::Mu(x, body) => ProcessExpr::Mu(x.clone(), go(body)),
    }
}

/// Applies one random rewrite. Most rewrites preserve bisimilarity; changing
/// an action usually does not.
pub fn perturb(rng: &mut TestRng, p: &ProcessExpr, shape: &ProcessShape) -> ProcessExpr {
    match rng.gen_range(0..6) {
        0 => p.head_unfold().unwrap(),
        1 => match p {
            ProcessExpr::Mu(x, body) => {
                let fresh = VarName::new("Z").unwrap();
                let renamed = body
                    .iter()
                    .map(|s| Summand::new(s.action.clone(), rename_free(&s.target, x, &fresh)))
                    .collect();
                ProcessExpr::Mu(fresh, renamed)
            }
            _ => p.clone(),
        },
        2 => map_top_sum(p, |s| s.shuffle(rng)),
        3 => map_top_sum(p, |s| {
            if let Some(first) = s.first().cloned() {
                let at = rng.gen_range(0..=s.len());
                s.insert(at, first);
            }
        }),
        4 => map_top_sum(p, |s| {
            if let Some(x) = s.choose_mut(rng) {
                x.action = shape.actions.choose(rng).unwrap().clone();
            }
        }),
        _ => map_top_sum(p, |s| {
            for x in s.iter_mut() {
                if let ProcessExpr::Mu(..) = x.target {
                    if x.target.is_process() {
                        x.target = x.target.head_unfold().unwrap();
                        break;
                    }
                }
            }
        }),
    }
}

fn map_top_sum(p: &ProcessExpr, f: impl FnOnce(&mut Vec<Summand>)) -> ProcessExpr {
    match p {
        ProcessExpr::Sum(s) => {
            let mut s = s.clone();
            f(&mut s);
            ProcessExpr::Sum(s)
        }
        ProcessExpr::Mu(x, body) => {
            let mut body = body.clone();
            if body.is_empty() {
                return p.clone();
            }
            f(&mut body);
            if body.is_empty() {
                return p.clone();
            }
            ProcessExpr::Mu(x.clone(), body)
        }
        ProcessExpr::Var(_) => p.clone(),
    }
}

/// A pair that is bisimilar reasonably often: either independent processes or
/// a process and a few random rewrites of it.
pub fn random_pair(rng: &mut TestRng, shape: &ProcessShape) -> (ProcessExpr, ProcessExpr) {
    let p = random_process(rng, shape);
    if rng.gen_bool(0.35) {
        return (p, random_process(rng, shape));
    }
    let mut q = p.clone();
    for _ in 0..rng.gen_range(1..=3) {
        q = perturb(rng, &q, shape);
    }
    if rng.gen_bool(0.5) {
        (p, q)
    } else {
        (q, p)
    }
}

// ---------------------------------------------------------------------------
// Rule systems

/// A rule system over `j0 .. j{n-1}` with `1 <= n <= max_judgements`.
pub fn random_rulesystem(rng: &mut TestRng, max_judgements: usize, max_rules: usize) -> RuleSystem {
    let n = rng.gen_range(1..=max_judgements);
    let universe: Vec<Judgement> = (0..n).map(|i| Judgement::new(format!("j{i}"))).collect();
    let rule_count = rng.gen_range(0..=max_rules);
    let rules = (0..rule_count)
        .map(|k| {
            let arity = match rng.gen_range(0..100) {
                0..=14 => 0,
                15..=54 => 1,
                55..=84 => 2,
                _ => 3,
            };
            let premises: Vec<Judgement> = universe
                .choose_multiple(rng, arity.min(n))
                .cloned()
                .collect();
            let conclusion = universe.choose(rng).unwrap().clone();
            Rule::new(format!("r{k}"), premises, conclusion)
        })
        .collect();
    RuleSystem::new(universe, rules).unwrap()
}

/// Rules as bitmasks over the universe order: (premises, conclusion bit).
pub fn masks(rs: &RuleSystem) -> Vec<(u32, u32)> {
    let pos = |j: &Judgement| rs.universe().iter().position(|u| u == j).unwrap();
    rs.rules()
        .iter()
        .map(|r| {
            let premises = r.premises.iter().fold(0u32, |m, j| m | 1 << pos(j));
            (premises, 1 << pos(&r.conclusion))
        })
        .collect()
}

pub fn mask_to_set(rs: &RuleSystem, mask: u32) -> std::collections::BTreeSet<Judgement> {
    rs.universe()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, j)| j.clone())
        .collect()
}

/// "If" direction: every applicable rule's conclusion is in `v`.
pub fn satisfies_if(rules: &[(u32, u32)], v: u32) -> bool {
    rules.iter().all(|&(p, c)| p & !v != 0 || v & c != 0)
}

/// "Only if" direction: every member of `v` has a rule with premises in `v`.
pub fn satisfies_only_if(rules: &[(u32, u32)], n: usize, v: u32) -> bool {
    (0..n)
        .filter(|i| v & (1 << i) != 0)
        .all(|i| rules.iter().any(|&(p, c)| c == 1 << i && p & !v == 0))
}

/// Does some well-founded proof of height at most `height` exist?
/// Exhaustive over rules, memoized on (judgement, height).
pub fn wf_provable_bounded(rules: &[(u32, u32)], n: usize, j: usize, height: usize) -> bool {
    let mut memo = vec![vec![None; height + 1]; n];
    fn go(
        rules: &[(u32, u32)],
        n: usize,
        j: usize,
        h: usize,
        memo: &mut Vec<Vec<Option<bool>>>,
    ) -> bool {
        if h == 0 {
            return false;
        }
        if let Some(v) = memo[j][h] {
            return v;
        }
        let ok = rules.iter().any(|&(p, c)| {
            c == 1 << j
                && (0..n)
                    .filter(|i| p & (1 << i) != 0)
                    .all(|i| go(rules, n, i, h - 1, memo))
        });
        memo[j][h] = Some(ok);
        ok
    }
    go(rules, n, j, height, &mut memo)
}

/// Does some circular proof exist? Backtracking over every rule choice, with
/// branch ancestors usable as back-edge targets.
pub fn circular_provable(rules: &[(u32, u32)], n: usize, j: usize) -> bool {
    fn go(rules: &[(u32, u32)], n: usize, j: usize, path: u32) -> bool {
        if path & (1 << j) != 0 {
            return true;
        }
        rules.iter().any(|&(p, c)| {
            c == 1 << j
                && (0..n)
                    .filter(|i| p & (1 << i) != 0)
                    .all(|i| go(rules, n, i, path | 1 << j))
        })
    }
    go(rules, n, j, 0)
}
