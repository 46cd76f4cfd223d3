//! Line-oriented persistence.
//!
//! ```text
//! FQNKB v1
//! dep=<g:a:v> <class-listing record>     (sorted)
//! truth=<g:a:v> -> [<g:a:v>]              (sorted)
//! itemset=<g:a:v>,<g:a:v>... <project id> (sorted by project id)
//! end <record count>
//! ```

use std::collections::BTreeSet;

use super::{parse_relation, DependencyCoordinate, KbEntry, KbError, KnowledgeBase, ProjectItemset};

pub const DUMP_HEADER: &str = "FQNKB v1";
const MAGIC: &str = "FQNKB ";

impl KnowledgeBase {
    /// Deterministic text dump; equal bases produce byte-identical dumps.
    pub fn dump(&self) -> String {
        let mut entries: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("dep={} {}", e.dependency, e.listing_line()))
            .collect();
        entries.sort();

        let mut truth = Vec::new();
        for (from, targets) in &self.ground_truth {
            if targets.is_empty() {
                truth.push(format!("truth={from} ->"));
            }
            for to in targets {
                truth.push(format!("truth={from} -> {to}"));
            }
        }

        let itemsets: Vec<String> = self
            .itemsets
            .values()
            .map(|set| {
                let deps: Vec<String> = set.dependencies.iter().map(|d| d.to_string()).collect();
                format!("itemset={} {}", deps.join(","), set.project_id)
            })
            .collect();

        let mut out = String::new();
        out.push_str(DUMP_HEADER);
        out.push('\n');
        let records = entries.len() + truth.len() + itemsets.len();
        for line in entries.iter().chain(&truth).chain(&itemsets) {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("end {records}\n"));
        out
    }

    pub fn from_dump(text: &str, origin: &str) -> Result<Self, KbError> {
        let err = |reason: String| KbError::Store {
            origin: origin.to_string(),
            reason,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, DUMP_HEADER)) => {}
            Some((_, h)) if h.starts_with(MAGIC) => {
                return Err(err(format!(
                    "unsupported knowledge base version `{}` (expected `{DUMP_HEADER}`)",
                    &h[MAGIC.len()..]
                )))
            }
            _ => return Err(err("not a knowledge base dump (missing header)".into())),
        }

        let mut kb = KnowledgeBase::new();
        let mut records = 0usize;
        let mut end = None;
        for (i, line) in lines {
            let at = |reason: String| err(format!("line {}: {reason}", i + 1));
            if end.is_some() {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(at("content after end marker".into()));
            }
            if let Some(count) = line.strip_prefix("end ") {
                let count: usize = count.trim().parse().map_err(|_| at("bad record count".into()))?;
                end = Some(count);
                continue;
            }
            records += 1;
            if let Some(rest) = line.strip_prefix("dep=") {
                let (coord, record) = rest
                    .split_once(' ')
                    .ok_or_else(|| at("entry without record".into()))?;
                let coord: DependencyCoordinate = coord.parse().map_err(|e| at(format!("{e}")))?;
                let entry = KbEntry::parse_listing_line(record, &coord)
                    .map_err(at)?
                    .ok_or_else(|| at("empty entry record".into()))?;
                if !kb.insert(entry) {
                    return Err(at("duplicate entry".into()));
                }
            } else if let Some(rest) = line.strip_prefix("truth=") {
                let (from, to) = parse_relation(rest).map_err(|e| at(e.to_string()))?;
                let targets = kb.ground_truth.entry(from).or_default();
                targets.extend(to);
            } else if let Some(rest) = line.strip_prefix("itemset=") {
                let (deps, id) = rest
                    .split_once(' ')
                    .ok_or_else(|| at("itemset without project id".into()))?;
                let dependencies = deps
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<BTreeSet<DependencyCoordinate>, _>>()
                    .map_err(|e| at(e.to_string()))?;
                kb.insert_itemset(ProjectItemset {
                    project_id: id.to_string(),
                    dependencies,
                });
            } else {
                return Err(at(format!("unrecognised record `{line}`")));
            }
        }
        match end {
            None => Err(err("truncated file: missing end marker".into())),
            Some(n) if n != records => Err(err(format!(
                "truncated or corrupt file: end marker counts {n} records, found {records}"
            ))),
            Some(_) => Ok(kb),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        let jdk: DependencyCoordinate = "jdk:java8:8".parse().unwrap();
        kb.ingest_class_listing_str(
            "T java.util.regex.Pattern\nM java.util.regex.Pattern.compile(java.lang.String)java.util.regex.Pattern\nT java.util.regex.Matcher <: java.lang.Object\n",
            &jdk,
            "x",
        )
        .unwrap();
        kb.ingest_ground_truth_str("jdk:java8:8 ->\ng:a:1 -> g:b:2\n", "gt").unwrap();
        kb.ingest_pom_str(
            "<project><dependencies><dependency><groupId>g</groupId><artifactId>a</artifactId><version>1</version></dependency></dependencies></project>",
            "my project/pom.xml",
        )
        .unwrap();
        kb
    }

    #[test]
    fn round_trip_is_identical() {
        let kb = sample();
        let dump = kb.dump();
        let back = KnowledgeBase::from_dump(&dump, "kb").unwrap();
        assert_eq!(back.dump(), dump);
        assert_eq!(back.ground_truth(), kb.ground_truth());
        assert_eq!(back.itemsets().collect::<Vec<_>>(), kb.itemsets().collect::<Vec<_>>());
        let mut a: Vec<String> = kb.entries().iter().map(|e| e.listing_line()).collect();
        let mut b: Vec<String> = back.entries().iter().map(|e| e.listing_line()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_round_trip() {
        let kb = KnowledgeBase::new();
        assert_eq!(kb.dump(), "FQNKB v1\nend 0\n");
        assert!(KnowledgeBase::from_dump(&kb.dump(), "kb").unwrap().is_empty());
    }

    #[test]
    fn version_mismatch() {
        let err = KnowledgeBase::from_dump("FQNKB v2\nend 0\n", "kb").unwrap_err();
        assert!(err.to_string().contains("version"), "{err}");
        assert!(KnowledgeBase::from_dump("hello\n", "kb").is_err());
    }

    #[test]
    fn truncation_detected() {
        let dump = sample().dump();
        let cut = &dump[..dump.rfind("end").unwrap()];
        let err = KnowledgeBase::from_dump(cut, "kb").unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
        let lines: Vec<&str> = dump.lines().collect();
        let dropped = [&lines[..2], &lines[3..]].concat().join("\n");
        assert!(KnowledgeBase::from_dump(&dropped, "kb").is_err());
    }

    #[test]
    fn load_missing_path() {
        let err = KnowledgeBase::load(std::path::Path::new("/nonexistent/kb.db")).unwrap_err();
        assert!(matches!(err, KbError::Io { .. }));
    }
}
