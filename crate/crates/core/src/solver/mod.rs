//! Minimum-weight models of positive covering CNFs.
//!
//! The search is an exact branch and bound. Every solver in this module
//! ranks candidate models by the same key, so results are comparable
//! across them:
//!
//! 1. total weight,
//! 2. number of distinct labels,
//! 3. number of true variables,
//! 4. the sorted variable list, lexicographically.
//!
//! Ranking by size before the lexicographic order means the winner never
//! contains a variable it could drop, even when some weights are zero.

mod dump;
mod problem;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

pub use dump::{dump, parse_dump};
pub use problem::CoveringProblem;

/// Largest problem [`brute_force_min`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("clause #{index} is empty")]
    EmptyClause { index: usize },
    #[error("variable {var} out of range (problem has {num_vars} variables)")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("got {got} weights for {num_vars} variables")]
    WeightCount { got: usize, num_vars: usize },
    #[error("brute force is limited to {limit} variables, problem has {num_vars}")]
    TooLarge { num_vars: usize, limit: usize },
    #[error("no model satisfies the exclusion constraints")]
    Infeasible,
    #[error("line {line}: {reason}")]
    Dump { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Model {
    pub true_vars: BTreeSet<usize>,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Rank {
    cost: u64,
    labels: usize,
    size: usize,
    vars: Vec<usize>,
}

fn rank(problem: &CoveringProblem, vars: &BTreeSet<usize>) -> Rank {
    Rank {
        cost: problem.cost_of(vars),
        labels: problem.label_count(vars),
        size: vars.len(),
        vars: vars.iter().copied().collect(),
    }
}

/// True iff every clause contains a variable of `model`.
pub fn check(problem: &CoveringProblem, model: &Model) -> bool {
    problem
        .clauses()
        .iter()
        .all(|c| c.iter().any(|v| model.true_vars.contains(v)))
}

/// Unit propagation: singleton-clause variables become forced and every
/// clause they satisfy is dropped, until nothing changes.
pub fn preprocess(problem: &CoveringProblem) -> (CoveringProblem, BTreeSet<usize>) {
    let mut forced = BTreeSet::new();
    let mut clauses: Vec<Vec<usize>> = problem.clauses().to_vec();
    loop {
        let units: Vec<usize> = clauses
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect();
        if units.is_empty() {
            break;
        }
        forced.extend(units);
        clauses.retain(|c| !c.iter().any(|v| forced.contains(v)));
    }
    (problem.replace_clauses(clauses), forced)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub preprocess: bool,
    /// Prune with a lower bound from disjoint uncovered clauses.
    pub bound: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            preprocess: true,
            bound: true,
        }
    }
}

pub fn solve_min(problem: &CoveringProblem) -> Result<Model, SolverError> {
    solve_min_with(problem, SolveOptions::default())
}

pub fn solve_min_with(problem: &CoveringProblem, options: SolveOptions) -> Result<Model, SolverError> {
    let (reduced, forced) = if options.preprocess {
        preprocess(problem)
    } else {
        (problem.clone(), BTreeSet::new())
    };
    if !reduced.admits(&forced) {
        return Err(SolverError::Infeasible);
    }
    let mut search = Search {
        problem: &reduced,
        chosen: vec![false; reduced.num_vars()],
        banned: vec![0; reduced.num_vars()],
        set: BTreeSet::new(),
        best: None,
        bound: options.bound,
    };
    for &v in &forced {
        search.chosen[v] = true;
        search.set.insert(v);
    }
    search.run();
    let best = search.best.ok_or(SolverError::Infeasible)?;
    Ok(Model {
        true_vars: best.vars.into_iter().collect(),
        cost: best.cost,
    })
}

struct Search<'a> {
    problem: &'a CoveringProblem,
    chosen: Vec<bool>,
    banned: Vec<u32>,
    set: BTreeSet<usize>,
    best: Option<Rank>,
    bound: bool,
}

impl Search<'_> {
    fn allowed(&self, v: usize) -> bool {
        self.banned[v] == 0 && self.set.iter().all(|&c| self.problem.compatible(v, c))
    }

    /// Weight every cover must still add: clauses with no shared variable
    /// need one variable each.
    fn lower_bound(&self, open: &mut [Vec<usize>]) -> u64 {
        open.sort_by_key(Vec::len);
        let mut used = vec![false; self.problem.num_vars()];
        let mut total = 0;
        for clause in open.iter() {
            if clause.iter().any(|&v| used[v]) {
                continue;
            }
            total += clause.iter().map(|&v| self.problem.weight(v)).min().unwrap_or(0);
            for &v in clause {
                used[v] = true;
            }
        }
        total
    }

    fn run(&mut self) {
        let current = rank(self.problem, &self.set);
        if self.best.as_ref().is_some_and(|b| current >= *b) {
            // any extension ranks strictly higher
            return;
        }
        let mut open: Vec<Vec<usize>> = Vec::new();
        for clause in self.problem.clauses() {
            if clause.iter().any(|&v| self.chosen[v]) {
                continue;
            }
            let allowed: Vec<usize> = clause.iter().copied().filter(|&v| self.allowed(v)).collect();
            if allowed.is_empty() {
                return;
            }
            open.push(allowed);
        }
        if open.is_empty() {
            self.best = Some(current);
            return;
        }
        let branch = open
            .iter()
            .enumerate()
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(_, c)| c.clone())
            .expect("non-empty");
        if self.bound {
            if let Some(best) = &self.best {
                if current.cost + self.lower_bound(&mut open) > best.cost {
                    return;
                }
            }
        }
        // branch j takes branch[j] and bans branch[..j]
        for &v in &branch {
            self.chosen[v] = true;
            self.set.insert(v);
            self.run();
            self.set.remove(&v);
            self.chosen[v] = false;
            self.banned[v] += 1;
        }
        for &v in &branch {
            self.banned[v] -= 1;
        }
    }
}

/// Exhaustive oracle over all subsets, ranked like [`solve_min`].
pub fn brute_force_min(problem: &CoveringProblem) -> Result<Model, SolverError> {
    let n = problem.num_vars();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SolverError::TooLarge {
            num_vars: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let clause_masks: Vec<u32> = problem
        .clauses()
        .iter()
        .map(|c| c.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let mut best: Option<Rank> = None;
    for mask in 0u32..(1u32 << n) {
        if !clause_masks.iter().all(|&c| c & mask != 0) {
            continue;
        }
        let vars: BTreeSet<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if !problem.admits(&vars) {
            continue;
        }
        let r = rank(problem, &vars);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    let best = best.ok_or(SolverError::Infeasible)?;
    Ok(Model {
        true_vars: best.vars.into_iter().collect(),
        cost: best.cost,
    })
}
