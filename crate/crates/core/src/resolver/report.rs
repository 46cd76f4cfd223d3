use serde::Serialize;

use crate::span::LineIndex;

use super::Resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SketchStatus {
    Bound,
    Unresolved,
    AssumedBuiltin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SketchReport {
    pub index: usize,
    pub render: String,
    pub resolved: bool,
    pub status: SketchStatus,
    pub occurrences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BindingReport {
    pub sketch: usize,
    pub render: String,
    pub fqn: String,
    pub dependency: String,
    pub variable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityReport {
    pub sketch: usize,
    pub render: String,
    pub chosen: String,
    pub alternatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnmatchedReport {
    pub sketch: usize,
    pub render: String,
}

/// Machine-readable summary of a resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub sketches: Vec<SketchReport>,
    pub bindings: Vec<BindingReport>,
    pub dependencies: Vec<String>,
    pub imports: Vec<String>,
    pub cost: u64,
    pub ambiguities: Vec<AmbiguityReport>,
    pub unresolved: Vec<UnmatchedReport>,
    pub assumed_builtin: Vec<UnmatchedReport>,
}

impl Resolution {
    pub fn status(&self, sketch: usize) -> SketchStatus {
        if self.bindings.contains_key(&sketch) {
            SketchStatus::Bound
        } else if self.unresolved.contains(&sketch) {
            SketchStatus::Unresolved
        } else {
            SketchStatus::AssumedBuiltin
        }
    }

    /// Builds the report; `source` is used to turn spans into `line:col`.
    pub fn report(&self, source: &str) -> Report {
        let index = LineIndex::new(source);
        let render = |s: usize| self.sketches[s].render();
        let unmatched = |list: &[usize]| {
            list.iter()
                .map(|&s| UnmatchedReport {
                    sketch: s,
                    render: render(s),
                })
                .collect()
        };
        Report {
            sketches: self
                .sketches
                .iter()
                .enumerate()
                .map(|(i, s)| SketchReport {
                    index: i,
                    render: s.render(),
                    resolved: !s.has_holes(),
                    status: self.status(i),
                    occurrences: s.occurrences.iter().map(|sp| index.render(*sp)).collect(),
                })
                .collect(),
            bindings: self
                .bindings
                .iter()
                .map(|(&s, b)| BindingReport {
                    sketch: s,
                    render: render(s),
                    fqn: b.entry.fqn(),
                    dependency: b.entry.dependency.render(),
                    variable: b.variable_key.clone(),
                })
                .collect(),
            dependencies: self.dependencies.iter().map(|d| d.render()).collect(),
            imports: self.imports.iter().cloned().collect(),
            cost: self.objective_cost,
            ambiguities: self
                .ambiguities
                .iter()
                .map(|a| AmbiguityReport {
                    sketch: a.sketch,
                    render: render(a.sketch),
                    chosen: a.variable_keys[0].clone(),
                    alternatives: a.variable_keys[1..].to_vec(),
                })
                .collect(),
            unresolved: unmatched(&self.unresolved),
            assumed_builtin: unmatched(&self.assumed_builtin),
        }
    }
}
