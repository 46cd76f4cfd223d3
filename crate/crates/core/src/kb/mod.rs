//! Knowledge base of FQNs annotated with the dependencies that implement
//! them.
//!
//! The base is built from three local inputs: class listings (one record per
//! type, method, or field of a library), POM itemsets, and Maven-style ground
//! truth relating coordinates to their declared dependencies. Once built or
//! loaded it is read-only and can be shared between resolutions.

mod coordinate;
mod entry;
mod pom;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::frontend::Sketch;
use crate::resolver::matches;
use crate::signature::Kind;

pub use coordinate::DependencyCoordinate;
pub use entry::{EntryKind, KbEntry};
pub use pom::parse_pom;
pub use store::DUMP_HEADER;

#[derive(Debug, Error)]
pub enum KbError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {reason}")]
    Listing {
        origin: String,
        line: usize,
        reason: String,
    },
    #[error("invalid coordinate `{text}`: {reason}")]
    Coordinate { text: String, reason: String },
    #[error("{origin}: malformed XML at byte {offset}: {message}")]
    Xml {
        origin: String,
        offset: usize,
        message: String,
    },
    #[error("{origin}: {message}")]
    Pom { origin: String, message: String },
    #[error("{origin}: project declares no dependencies")]
    EmptyItemset { origin: String },
    #[error("{origin}:{line}: {reason}")]
    GroundTruth {
        origin: String,
        line: usize,
        reason: String,
    },
    #[error("{origin}: {reason}")]
    Store { origin: String, reason: String },
}

fn read(path: &Path) -> Result<String, KbError> {
    fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Dependencies declared by one project build file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectItemset {
    pub project_id: String,
    pub dependencies: BTreeSet<DependencyCoordinate>,
}

/// Entry counts by kind, plus the other collections.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KbStats {
    pub types: usize,
    pub methods: usize,
    pub fields: usize,
    pub dependencies: usize,
    pub itemsets: usize,
    pub relations: usize,
}

#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    entries: Vec<KbEntry>,
    seen: HashSet<(DependencyCoordinate, String)>,
    by_simple_name: BTreeMap<String, Vec<usize>>,
    by_method_key: BTreeMap<(String, usize), Vec<usize>>,
    by_field_name: BTreeMap<String, Vec<usize>>,
    itemsets: BTreeMap<String, ProjectItemset>,
    ground_truth: BTreeMap<DependencyCoordinate, BTreeSet<DependencyCoordinate>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[KbEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn itemsets(&self) -> impl Iterator<Item = &ProjectItemset> {
        self.itemsets.values()
    }

    pub fn ground_truth(&self) -> &BTreeMap<DependencyCoordinate, BTreeSet<DependencyCoordinate>> {
        &self.ground_truth
    }

    pub fn stats(&self) -> KbStats {
        let count = |k: Kind| self.entries.iter().filter(|e| e.kind == k).count();
        let deps: BTreeSet<&DependencyCoordinate> =
            self.entries.iter().map(|e| &e.dependency).collect();
        KbStats {
            types: count(Kind::Type),
            methods: count(Kind::Method),
            fields: count(Kind::Field),
            dependencies: deps.len(),
            itemsets: self.itemsets.len(),
            relations: self.ground_truth.values().map(BTreeSet::len).sum(),
        }
    }

    /// Adds an entry unless an identical FQN from the same dependency exists.
    pub fn insert(&mut self, entry: KbEntry) -> bool {
        if !self.seen.insert((entry.dependency.clone(), entry.fqn())) {
            return false;
        }
        let id = self.entries.len();
        self.index(id, &entry);
        self.entries.push(entry);
        true
    }

    fn index(&mut self, id: usize, entry: &KbEntry) {
        let name = entry.simple_name.clone();
        match entry.kind {
            Kind::Type => self.by_simple_name.entry(name).or_default().push(id),
            Kind::Method => self
                .by_method_key
                .entry((name, entry.arity()))
                .or_default()
                .push(id),
            Kind::Field => self.by_field_name.entry(name).or_default().push(id),
        }
    }

    fn reindex(&mut self) {
        self.by_simple_name.clear();
        self.by_method_key.clear();
        self.by_field_name.clear();
        self.seen.clear();
        let entries = std::mem::take(&mut self.entries);
        for (id, entry) in entries.iter().enumerate() {
            self.index(id, entry);
            self.seen.insert((entry.dependency.clone(), entry.fqn()));
        }
        self.entries = entries;
    }

    pub fn ingest_class_listing(
        &mut self,
        path: &Path,
        dependency: &DependencyCoordinate,
    ) -> Result<usize, KbError> {
        let text = read(path)?;
        self.ingest_class_listing_str(&text, dependency, &path.display().to_string())
    }

    /// Ingests class-listing text. The whole input is validated before any
    /// entry is added, so a malformed file leaves the base untouched.
    pub fn ingest_class_listing_str(
        &mut self,
        text: &str,
        dependency: &DependencyCoordinate,
        origin: &str,
    ) -> Result<usize, KbError> {
        let mut parsed = Vec::new();
        for (i, line) in text.lines().enumerate() {
            match KbEntry::parse_listing_line(line, dependency) {
                Ok(Some(entry)) => parsed.push(entry),
                Ok(None) => {}
                Err(reason) => {
                    return Err(KbError::Listing {
                        origin: origin.to_string(),
                        line: i + 1,
                        reason,
                    })
                }
            }
        }
        Ok(parsed.into_iter().filter(|e| self.insert(e.clone())).count())
    }

    pub fn ingest_pom(&mut self, path: &Path) -> Result<ProjectItemset, KbError> {
        let text = read(path)?;
        self.ingest_pom_str(&text, &path.display().to_string())
    }

    /// Parses and stores a POM itemset; a project seen before is replaced.
    pub fn ingest_pom_str(&mut self, text: &str, origin: &str) -> Result<ProjectItemset, KbError> {
        let itemset = parse_pom(text, origin)?;
        self.itemsets
            .insert(itemset.project_id.clone(), itemset.clone());
        Ok(itemset)
    }

    pub(crate) fn insert_itemset(&mut self, itemset: ProjectItemset) {
        self.itemsets.insert(itemset.project_id.clone(), itemset);
    }

    pub fn ingest_ground_truth(&mut self, path: &Path) -> Result<usize, KbError> {
        let text = read(path)?;
        self.ingest_ground_truth_str(&text, &path.display().to_string())
    }

    /// Ingests `g:a:v -> g2:a2:v2` lines. A line with an empty right side
    /// registers the coordinate without relations. Returns the number of new
    /// relations.
    pub fn ingest_ground_truth_str(&mut self, text: &str, origin: &str) -> Result<usize, KbError> {
        let mut parsed = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| KbError::GroundTruth {
                origin: origin.to_string(),
                line: i + 1,
                reason,
            };
            parsed.push(parse_relation(line).map_err(|e| err(e.to_string()))?);
        }
        let mut added = 0;
        for (from, to) in parsed {
            let targets = self.ground_truth.entry(from).or_default();
            if let Some(to) = to {
                added += usize::from(targets.insert(to));
            }
        }
        Ok(added)
    }

    /// Removes entries whose library is governed by the ground truth (it is a
    /// key there) but whose version the ground truth never mentions for that
    /// library. Entries of ungoverned libraries are kept.
    pub fn filter_against_ground_truth(&mut self) -> usize {
        if self.ground_truth.is_empty() {
            return 0;
        }
        let governed: BTreeSet<(&str, &str)> =
            self.ground_truth.keys().map(|c| c.library()).collect();
        let known: BTreeSet<&DependencyCoordinate> = self
            .ground_truth
            .iter()
            .flat_map(|(k, vs)| std::iter::once(k).chain(vs))
            .collect();
        let violates = |dep: &DependencyCoordinate| {
            governed.contains(&dep.library()) && !known.contains(dep)
        };
        let keep: Vec<bool> = self.entries.iter().map(|e| !violates(&e.dependency)).collect();
        let removed = keep.iter().filter(|k| !**k).count();
        if removed > 0 {
            let mut flags = keep.into_iter();
            self.entries.retain(|_| flags.next().unwrap_or(true));
            self.reindex();
        }
        removed
    }

    /// All entries matching `sketch`, each with its solver variable key,
    /// sorted by `(variable key, FQN)`.
    pub fn lookup(&self, sketch: &Sketch) -> Vec<(&KbEntry, String)> {
        let ids: &[usize] = match sketch.kind {
            Kind::Type => self.by_simple_name.get(&sketch.simple_name),
            Kind::Method => self
                .by_method_key
                .get(&(sketch.simple_name.clone(), sketch.param_types.len())),
            Kind::Field => self.by_field_name.get(&sketch.simple_name),
        }
        .map_or(&[], Vec::as_slice);
        let mut found: Vec<(String, String, &KbEntry)> = ids
            .iter()
            .map(|&i| &self.entries[i])
            .filter(|e| matches(sketch, e))
            .map(|e| (e.variable_key(), e.fqn(), e))
            .collect();
        found.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        found.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        found.into_iter().map(|(key, _, e)| (e, key)).collect()
    }

    pub fn save(&self, path: &Path) -> Result<(), KbError> {
        fs::write(path, self.dump()).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, KbError> {
        let text = read(path)?;
        Self::from_dump(&text, &path.display().to_string())
    }
}

pub(crate) fn parse_relation(
    line: &str,
) -> Result<(DependencyCoordinate, Option<DependencyCoordinate>), KbError> {
    let (lhs, rhs) = line.split_once("->").ok_or_else(|| KbError::Coordinate {
        text: line.to_string(),
        reason: "expected `g:a:v -> g2:a2:v2`".into(),
    })?;
    let from: DependencyCoordinate = lhs.trim().parse()?;
    let rhs = rhs.trim();
    let to = if rhs.is_empty() {
        None
    } else {
        Some(rhs.parse()?)
    };
    Ok((from, to))
}
