//! From sketches to bindings: candidate lookup, the covering problem, and
//! translation of the minimal model back into FQNs, imports and
//! dependencies.

mod patch;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::frontend::{self, FrontendError, Sketch, Slot};
use crate::kb::{DependencyCoordinate, KbEntry, KnowledgeBase};
use crate::signature::Kind;
use crate::solver::{self, CoveringProblem, Model, SolverError};

pub use patch::{emit_patch, needs_import};
pub use report::{AmbiguityReport, BindingReport, Report, SketchReport, SketchStatus, UnmatchedReport};

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error("no knowledge-base candidate for: {}", .0.join(", "))]
    Unmatched(Vec<String>),
    #[error("knowledge base cannot cover any sketch")]
    NothingCovered,
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
}

fn slot_matches(slot: &Slot, value: &str) -> bool {
    match slot {
        Slot::Hole => true,
        Slot::Known(s) => s == value,
    }
}

/// Whether `entry` is a possible FQN for `sketch`.
pub fn matches(sketch: &Sketch, entry: &KbEntry) -> bool {
    if sketch.kind != entry.kind || sketch.simple_name != entry.simple_name {
        return false;
    }
    if !slot_matches(&sketch.owner, &entry.owner) {
        return false;
    }
    match sketch.kind {
        Kind::Type => true,
        Kind::Method => {
            sketch.param_types.len() == entry.param_types.len()
                && sketch
                    .param_types
                    .iter()
                    .zip(&entry.param_types)
                    .all(|(s, e)| slot_matches(s, e))
                && sketch
                    .return_type
                    .as_ref()
                    .is_none_or(|r| slot_matches(r, &entry.return_type))
        }
        Kind::Field => sketch
            .field_type
            .as_ref()
            .is_none_or(|t| slot_matches(t, &entry.field_type)),
    }
}

/// One solver variable: a dependency together with the type it provides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub variable_id: usize,
    pub variable_key: String,
    pub dependency: DependencyCoordinate,
    pub sketch_ids: BTreeSet<usize>,
}

/// Everything [`build_problem`] learned besides the CNF itself.
#[derive(Debug, Clone, Default)]
pub struct CandidateTable {
    pub candidates: Vec<Candidate>,
    /// Per sketch: matching entries with their variable ids, ordered by
    /// `(variable key, FQN)`.
    pub matches: Vec<Vec<(usize, KbEntry)>>,
    /// Sketch index of each clause.
    pub clause_sketch: Vec<usize>,
    /// Sketches without any candidate.
    pub unmatched: Vec<usize>,
}

/// Builds one clause per matched sketch. Variable ids follow the sorted
/// order of variable keys; variables from `declared` weigh 0, the rest 1.
/// With `exclusive_versions`, two versions of one library cannot both be
/// chosen.
pub fn build_problem(
    sketches: &[Sketch],
    kb: &KnowledgeBase,
    declared: &BTreeSet<DependencyCoordinate>,
    exclusive_versions: bool,
) -> (CoveringProblem, CandidateTable) {
    let found: Vec<Vec<(&KbEntry, String)>> = sketches.iter().map(|s| kb.lookup(s)).collect();
    let mut deps_by_key: BTreeMap<&str, &DependencyCoordinate> = BTreeMap::new();
    for (entry, key) in found.iter().flatten() {
        deps_by_key.insert(key, &entry.dependency);
    }
    let ids: BTreeMap<&str, usize> = deps_by_key.keys().enumerate().map(|(i, k)| (*k, i)).collect();

    let mut table = CandidateTable::default();
    table.candidates = deps_by_key
        .iter()
        .enumerate()
        .map(|(i, (key, dep))| Candidate {
            variable_id: i,
            variable_key: key.to_string(),
            dependency: (*dep).clone(),
            sketch_ids: BTreeSet::new(),
        })
        .collect();

    let mut clauses = Vec::new();
    for (s, entries) in found.iter().enumerate() {
        let mut per_sketch = Vec::with_capacity(entries.len());
        let mut clause = BTreeSet::new();
        for (entry, key) in entries {
            let id = ids[key.as_str()];
            clause.insert(id);
            table.candidates[id].sketch_ids.insert(s);
            per_sketch.push((id, (*entry).clone()));
        }
        if clause.is_empty() {
            table.unmatched.push(s);
        } else {
            clauses.push(clause.into_iter().collect());
            table.clause_sketch.push(s);
        }
        table.matches.push(per_sketch);
    }

    let n = table.candidates.len();
    let mut problem = CoveringProblem::new(n, clauses).expect("clauses are non-empty and in range");
    let deps: BTreeSet<&DependencyCoordinate> = table.candidates.iter().map(|c| &c.dependency).collect();
    let dep_index: BTreeMap<&DependencyCoordinate, u32> =
        deps.iter().enumerate().map(|(i, d)| (*d, i as u32)).collect();
    let libraries: BTreeSet<(&str, &str)> = deps.iter().map(|d| d.library()).collect();
    let library_index: BTreeMap<(&str, &str), u32> =
        libraries.iter().enumerate().map(|(i, l)| (*l, i as u32)).collect();
    for c in &table.candidates {
        let v = c.variable_id;
        let weight = if declared.contains(&c.dependency) { 0 } else { 1 };
        problem.set_weight(v, weight).expect("in range");
        problem.set_label(v, dep_index[&c.dependency]).expect("in range");
        problem.set_key(v, c.variable_key.clone()).expect("in range");
        if exclusive_versions {
            let family = library_index[&c.dependency.library()];
            problem
                .set_exclusion(v, family, dep_index[&c.dependency])
                .expect("in range");
        }
    }
    (problem, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Fail when any sketch has no candidate.
    pub strict: bool,
    pub allow_wrapping: bool,
    /// At most one version per `(group, artifact)`.
    pub exclusive_versions: bool,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            strict: false,
            allow_wrapping: true,
            exclusive_versions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub variable_id: usize,
    pub variable_key: String,
    pub entry: KbEntry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub sketch: usize,
    /// Keys of all true variables covering the sketch, smallest (chosen)
    /// first.
    pub variable_keys: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub sketches: Vec<Sketch>,
    pub bindings: BTreeMap<usize, Binding>,
    pub dependencies: BTreeSet<DependencyCoordinate>,
    pub imports: BTreeSet<String>,
    /// Sketches with no candidate that still need one.
    pub unresolved: Vec<usize>,
    /// Hole-free sketches with no candidate, taken as provided by the JDK.
    pub assumed_builtin: Vec<usize>,
    pub ambiguities: Vec<Ambiguity>,
    pub objective_cost: u64,
    pub problem: CoveringProblem,
    pub table: CandidateTable,
    pub model: Model,
}

impl Resolution {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// The covering problem in dump format.
    pub fn cnf(&self) -> String {
        solver::dump(&self.problem)
    }
}

/// Runs the whole pipeline on one snippet.
pub fn resolve(
    source: &str,
    kb: &KnowledgeBase,
    declared: &BTreeSet<DependencyCoordinate>,
    options: ResolveOptions,
) -> Result<Resolution, ResolveError> {
    let sketches = frontend::analyze(source, options.allow_wrapping)?;
    resolve_sketches(sketches, kb, declared, options)
}

pub fn resolve_sketches(
    sketches: Vec<Sketch>,
    kb: &KnowledgeBase,
    declared: &BTreeSet<DependencyCoordinate>,
    options: ResolveOptions,
) -> Result<Resolution, ResolveError> {
    let (problem, table) = build_problem(&sketches, kb, declared, options.exclusive_versions);
    if options.strict && !table.unmatched.is_empty() {
        return Err(ResolveError::Unmatched(
            table.unmatched.iter().map(|&s| sketches[s].render()).collect(),
        ));
    }
    let (assumed_builtin, unresolved): (Vec<usize>, Vec<usize>) = table
        .unmatched
        .iter()
        .partition(|&&s| !sketches[s].has_holes());
    if !unresolved.is_empty() && table.clause_sketch.is_empty() {
        return Err(ResolveError::NothingCovered);
    }

    let model = solver::solve_min(&problem)?;
    let mut bindings = BTreeMap::new();
    let mut ambiguities = Vec::new();
    for &s in &table.clause_sketch {
        let covering: BTreeSet<usize> = table.matches[s]
            .iter()
            .map(|(v, _)| *v)
            .filter(|v| model.true_vars.contains(v))
            .collect();
        // ids follow key order, so the smallest id has the smallest key
        let chosen = *covering.iter().next().expect("model satisfies every clause");
        let (_, entry) = table.matches[s]
            .iter()
            .find(|(v, _)| *v == chosen)
            .expect("chosen variable matches");
        if covering.len() > 1 {
            ambiguities.push(Ambiguity {
                sketch: s,
                variable_keys: covering
                    .iter()
                    .map(|&v| table.candidates[v].variable_key.clone())
                    .collect(),
            });
        }
        bindings.insert(
            s,
            Binding {
                variable_id: chosen,
                variable_key: table.candidates[chosen].variable_key.clone(),
                entry: entry.clone(),
            },
        );
    }
    let dependencies = bindings.values().map(|b| b.entry.dependency.clone()).collect();
    let imports = bindings.values().map(|b| b.entry.import_type()).collect();
    Ok(Resolution {
        sketches,
        bindings,
        dependencies,
        imports,
        unresolved,
        assumed_builtin,
        ambiguities,
        objective_cost: model.cost,
        problem,
        table,
        model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(line: &str, dep: &str) -> KbEntry {
        KbEntry::parse_listing_line(line, &dep.parse().unwrap()).unwrap().unwrap()
    }

    fn sk(s: &str) -> Sketch {
        s.parse().unwrap()
    }

    const JDK: &str = "\
T java.util.regex.Pattern
T com.sun.org.apache.xalan.in.xsltc.compiler.Pattern
M java.util.regex.Pattern.compile(java.lang.String)java.util.regex.Pattern
T java.util.regex.Matcher
M java.util.regex.Pattern.matcher(java.lang.String)java.util.regex.Matcher
M java.util.regex.Matcher.find()boolean
T java.lang.String
";

    fn kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.ingest_class_listing_str(JDK, &"jdk:java8:8".parse().unwrap(), "jdk")
            .unwrap();
        kb.ingest_class_listing_str("T org.example.regex.Pattern\n", &"org.example:regexlite:1.0".parse().unwrap(), "lite")
            .unwrap();
        kb
    }

    #[test]
    fn matching_rules() {
        let pattern = entry("T java.util.regex.Pattern", "jdk:java8:8");
        let compile = entry(
            "M java.util.regex.Pattern.compile(java.lang.String)java.util.regex.Pattern",
            "jdk:java8:8",
        );
        let compile2 = entry(
            "M java.util.regex.Pattern.compile(java.lang.String,int)java.util.regex.Pattern",
            "jdk:java8:8",
        );
        assert!(matches(&sk("?.Pattern"), &pattern));
        assert!(matches(&sk("?.compile(java.lang.String)?"), &compile));
        assert!(!matches(&sk("?.compile(java.lang.String)?"), &compile2));
        assert!(!matches(&sk("?.compile(int)?"), &compile));
        assert!(!matches(&sk("java.util.Pattern"), &pattern));
        assert!(!matches(&sk("?.Pattern"), &compile));
    }

    #[test]
    fn shared_variable_across_sketches() {
        let kb = kb();
        let sketches = vec![sk("?.Pattern"), sk("?.compile(java.lang.String)?")];
        let (p, table) = build_problem(&sketches, &kb, &BTreeSet::new(), true);
        let v = table
            .candidates
            .iter()
            .find(|c| c.variable_key == "jdk:java8:8:java.util.regex.Pattern")
            .unwrap();
        assert!(p.clauses()[0].contains(&v.variable_id));
        assert_eq!(p.clauses()[1], vec![v.variable_id]);
        assert_eq!(v.sketch_ids, BTreeSet::from([0, 1]));
    }

    #[test]
    fn single_candidate_is_forced() {
        let (p, _) = build_problem(&[sk("java.lang.String")], &kb(), &BTreeSet::new(), true);
        assert_eq!(p.clauses(), &[vec![0]]);
        let (_, forced) = solver::preprocess(&p);
        assert_eq!(forced, BTreeSet::from([0]));
    }

    #[test]
    fn declared_dependencies_weigh_zero() {
        let declared = BTreeSet::from(["jdk:java8:8".parse().unwrap()]);
        let (p, table) = build_problem(&[sk("?.Pattern")], &kb(), &declared, true);
        for c in &table.candidates {
            let expected = if c.dependency.render() == "jdk:java8:8" { 0 } else { 1 };
            assert_eq!(p.weight(c.variable_id), expected);
        }
        assert!(solver::dump(&p).contains("w 1 0\n"));
    }

    #[test]
    fn resolves_builtins_at_zero_cost() {
        let declared = BTreeSet::from(["jdk:java8:8".parse().unwrap()]);
        let r = resolve("String s = \"x\";", &kb(), &declared, ResolveOptions::default()).unwrap();
        assert_eq!(r.objective_cost, 0);
        assert_eq!(r.imports, BTreeSet::from(["java.lang.String".to_string()]));
    }

    #[test]
    fn strict_mode_lists_unmatched() {
        let strict = ResolveOptions {
            strict: true,
            ..ResolveOptions::default()
        };
        let err = resolve("Widget w = null; Pattern p = null;", &kb(), &BTreeSet::new(), strict).unwrap_err();
        assert_eq!(err.to_string(), "no knowledge-base candidate for: ?.Widget");

        let r = resolve("Widget w = null; Pattern p = null;", &kb(), &BTreeSet::new(), ResolveOptions::default())
            .unwrap();
        assert_eq!(r.unresolved, vec![0]);
        assert!(!r.is_complete());

        let err = resolve("Widget w = null;", &kb(), &BTreeSet::new(), ResolveOptions::default()).unwrap_err();
        assert!(matches!(err, ResolveError::NothingCovered));
    }

    #[test]
    fn unknown_resolved_sketch_is_assumed_builtin() {
        let r = resolve("Object o = null; Pattern p = null;", &kb(), &BTreeSet::new(), ResolveOptions::default())
            .unwrap();
        assert_eq!(r.assumed_builtin, vec![0]);
        assert!(r.is_complete());
    }

    #[test]
    fn versions_are_exclusive() {
        let mut kb = KnowledgeBase::new();
        kb.ingest_class_listing_str("T a.Foo\n", &"g:lib:1.0".parse().unwrap(), "1").unwrap();
        kb.ingest_class_listing_str("T a.Bar\n", &"g:lib:2.0".parse().unwrap(), "2").unwrap();
        let err = resolve("Foo f = null; Bar b = null;", &kb, &BTreeSet::new(), ResolveOptions::default())
            .unwrap_err();
        assert!(matches!(err, ResolveError::Solver(SolverError::Infeasible)));
        let loose = ResolveOptions {
            exclusive_versions: false,
            ..ResolveOptions::default()
        };
        let r = resolve("Foo f = null; Bar b = null;", &kb, &BTreeSet::new(), loose).unwrap();
        assert_eq!(r.dependencies.len(), 2);
    }
}
