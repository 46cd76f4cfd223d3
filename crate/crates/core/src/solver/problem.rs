use std::collections::BTreeSet;

use super::SolverError;

/// A positive CNF: every clause is a set of variables, at least one of
/// which must be true.
///
/// Besides clauses and weights, a variable may carry a label (used to count
/// distinct labels when breaking ties) and an exclusion key `(family,
/// member)`: two true variables in one family must agree on the member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringProblem {
    num_vars: usize,
    clauses: Vec<Vec<usize>>,
    weights: Vec<u64>,
    labels: Vec<Option<u32>>,
    exclusions: Vec<Option<(u32, u32)>>,
    keys: Vec<Option<String>>,
}

impl CoveringProblem {
    /// Builds a problem with unit weights. Clauses are sorted and
    /// deduplicated; an empty clause or an id out of range is rejected.
    pub fn new(num_vars: usize, clauses: Vec<Vec<usize>>) -> Result<Self, SolverError> {
        let mut normalized = Vec::with_capacity(clauses.len());
        for (index, clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(SolverError::EmptyClause { index });
            }
            if let Some(&var) = clause.iter().find(|&&v| v >= num_vars) {
                return Err(SolverError::VariableOutOfRange { var, num_vars });
            }
            let set: BTreeSet<usize> = clause.into_iter().collect();
            normalized.push(set.into_iter().collect());
        }
        Ok(CoveringProblem {
            num_vars,
            clauses: normalized,
            weights: vec![1; num_vars],
            labels: vec![None; num_vars],
            exclusions: vec![None; num_vars],
            keys: vec![None; num_vars],
        })
    }

    pub fn with_weights(mut self, weights: Vec<u64>) -> Result<Self, SolverError> {
        if weights.len() != self.num_vars {
            return Err(SolverError::WeightCount {
                got: weights.len(),
                num_vars: self.num_vars,
            });
        }
        self.weights = weights;
        Ok(self)
    }

    fn check_var(&self, var: usize) -> Result<(), SolverError> {
        if var < self.num_vars {
            Ok(())
        } else {
            Err(SolverError::VariableOutOfRange {
                var,
                num_vars: self.num_vars,
            })
        }
    }

    pub fn set_weight(&mut self, var: usize, weight: u64) -> Result<(), SolverError> {
        self.check_var(var)?;
        self.weights[var] = weight;
        Ok(())
    }

    pub fn set_label(&mut self, var: usize, label: u32) -> Result<(), SolverError> {
        self.check_var(var)?;
        self.labels[var] = Some(label);
        Ok(())
    }

    pub fn set_exclusion(&mut self, var: usize, family: u32, member: u32) -> Result<(), SolverError> {
        self.check_var(var)?;
        self.exclusions[var] = Some((family, member));
        Ok(())
    }

    /// Attaches a human-readable name, written as a comment in dumps.
    pub fn set_key(&mut self, var: usize, key: impl Into<String>) -> Result<(), SolverError> {
        self.check_var(var)?;
        self.keys[var] = Some(key.into());
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<usize>] {
        &self.clauses
    }

    pub fn weight(&self, var: usize) -> u64 {
        self.weights[var]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn label(&self, var: usize) -> Option<u32> {
        self.labels[var]
    }

    pub fn exclusion(&self, var: usize) -> Option<(u32, u32)> {
        self.exclusions[var]
    }

    pub fn key(&self, var: usize) -> Option<&str> {
        self.keys[var].as_deref()
    }

    pub(crate) fn replace_clauses(&self, clauses: Vec<Vec<usize>>) -> Self {
        CoveringProblem {
            clauses,
            ..self.clone()
        }
    }

    pub fn cost_of<'a>(&self, vars: impl IntoIterator<Item = &'a usize>) -> u64 {
        vars.into_iter().map(|&v| self.weights[v]).sum()
    }

    /// Number of distinct labels among `vars`.
    pub fn label_count<'a>(&self, vars: impl IntoIterator<Item = &'a usize>) -> usize {
        vars.into_iter()
            .filter_map(|&v| self.labels[v])
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Whether `a` and `b` may both be true.
    pub fn compatible(&self, a: usize, b: usize) -> bool {
        match (self.exclusions[a], self.exclusions[b]) {
            (Some((fa, ma)), Some((fb, mb))) => fa != fb || ma == mb,
            _ => true,
        }
    }

    /// Whether `vars` respects every exclusion.
    pub fn admits(&self, vars: &BTreeSet<usize>) -> bool {
        let vars: Vec<usize> = vars.iter().copied().collect();
        vars.iter()
            .enumerate()
            .all(|(i, &a)| vars[i + 1..].iter().all(|&b| self.compatible(a, b)))
    }

    pub fn has_exclusions(&self) -> bool {
        self.exclusions.iter().any(Option::is_some)
    }
}
