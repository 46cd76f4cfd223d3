//! Resolution oracle that shares no code with the library: sketch matching
//! by regular expression, variable keys from rendered names, and an
//! exhaustive search over candidate variables.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use regex::Regex;

/// A knowledge-base record as text: dependency, tag, rendered FQN.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub dep: String,
    pub tag: char,
    pub fqn: String,
}

pub const JDK: &str = "jdk:java8:8";
pub const DISTRACTOR: &str = "org.example:regexlite:1.0";

pub const WALKTHROUGH_SKETCHES: &[&str] = &[
    "java.lang.String",
    "?.Pattern",
    "?.compile(java.lang.String)?",
    "?.Matcher",
    "?.matcher(java.lang.String)?",
    "?.find()?",
];

pub fn walkthrough_records() -> Vec<Record> {
    let jdk = [
        ('T', "java.lang.String"),
        ('T', "java.util.regex.Pattern"),
        ('T', "com.sun.org.apache.xalan.in.xsltc.compiler.Pattern"),
        ('M', "java.util.regex.Pattern.compile(java.lang.String)java.util.regex.Pattern"),
        ('T', "java.util.regex.Matcher"),
        ('M', "java.util.regex.Pattern.matcher(java.lang.String)java.util.regex.Matcher"),
        ('M', "java.util.regex.Matcher.find()boolean"),
    ];
    let mut out: Vec<Record> = jdk
        .iter()
        .map(|(t, f)| Record { dep: JDK.into(), tag: *t, fqn: f.to_string() })
        .collect();
    out.push(Record { dep: DISTRACTOR.into(), tag: 'T', fqn: "org.example.regex.Pattern".into() });
    out
}

/// Random extra libraries layered over the walkthrough records. Some
/// re-ship JDK names, some add look-alikes in other packages, some come in
/// two versions.
pub fn random_variant(rng: &mut impl Rng) -> Vec<Record> {
    let mut records = walkthrough_records();
    let packages = ["java.util.regex", "org.alt.regex", "com.fast.re", "java.lang"];
    let shapes: [(char, &str); 6] = [
        ('T', "{p}.Pattern"),
        ('T', "{p}.Matcher"),
        ('M', "{p}.Pattern.compile(java.lang.String){p}.Pattern"),
        ('M', "{p}.Pattern.matcher(java.lang.String){p}.Matcher"),
        ('M', "{p}.Matcher.find()boolean"),
        ('T', "{p}.String"),
    ];
    for lib in 0..rng.gen_range(0..=2) {
        let versions: &[&str] = if rng.gen_bool(0.3) { &["1.0", "2.0"] } else { &["1.0"] };
        for v in versions {
            let dep = format!("org.rand:lib{lib}:{v}");
            let pkg = *packages.choose(rng).unwrap();
            for (tag, shape) in shapes {
                if rng.gen_bool(0.4) {
                    records.push(Record { dep: dep.clone(), tag, fqn: shape.replace("{p}", pkg) });
                }
            }
        }
    }
    if rng.gen_bool(0.5) {
        records.retain(|r| !(r.dep == JDK && r.fqn.starts_with("com.sun") && rng.gen_bool(0.5)));
    }
    records.sort();
    records.dedup();
    records
}

/// Listing text per dependency.
pub fn listings(records: &[Record]) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    for r in records {
        let text = out.entry(r.dep.clone()).or_default();
        text.push_str(&format!("{} {}\n", r.tag, r.fqn));
    }
    out
}

fn kind_of_render(render: &str) -> char {
    if render.contains('(') {
        'M'
    } else if render.contains(':') {
        'F'
    } else {
        'T'
    }
}

pub fn sketch_regex(render: &str) -> Regex {
    let pattern = regex::escape(render).replace(r"\?", "[^(),:]+");
    Regex::new(&format!("^{pattern}$")).unwrap()
}

pub fn matches(render: &str, record: &Record) -> bool {
    kind_of_render(render) == record.tag && sketch_regex(render).is_match(&record.fqn)
}

/// `dep:Type` where `Type` is the record itself for types and the
/// declaring type for members.
pub fn variable_key(record: &Record) -> String {
    let head = match record.tag {
        'M' => &record.fqn[..record.fqn.find('(').unwrap()],
        'F' => &record.fqn[..record.fqn.find(':').unwrap()],
        _ => return format!("{}:{}", record.dep, record.fqn),
    };
    let owner = &head[..head.rfind('.').unwrap()];
    format!("{}:{owner}", record.dep)
}

fn library(dep: &str) -> &str {
    &dep[..dep.rfind(':').unwrap()]
}

pub struct Optimum {
    pub cost: u64,
    /// Some optimal choice uses declared dependencies only.
    pub declared_only: bool,
    pub variables: usize,
}

/// Minimum cost over all candidate subsets covering every matchable
/// sketch, with declared dependencies free and one version per library.
pub fn optimum(sketches: &[&str], records: &[Record], declared: &BTreeSet<String>) -> Option<Optimum> {
    let mut vars: BTreeMap<String, String> = BTreeMap::new();
    let mut clauses: Vec<BTreeSet<String>> = Vec::new();
    for s in sketches {
        let keys: BTreeSet<String> = records
            .iter()
            .filter(|r| matches(s, r))
            .map(|r| {
                let key = variable_key(r);
                vars.insert(key.clone(), r.dep.clone());
                key
            })
            .collect();
        if !keys.is_empty() {
            clauses.push(keys);
        }
    }
    let names: Vec<(&String, &String)> = vars.iter().collect();
    let n = names.len();
    assert!(n <= 20, "oracle variant too large: {n} variables");
    let mut best: Option<(u64, bool)> = None;
    for mask in 0u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let covers = clauses
            .iter()
            .all(|c| chosen.iter().any(|&i| c.contains(names[i].0)));
        if !covers {
            continue;
        }
        let mut versions: BTreeMap<&str, &str> = BTreeMap::new();
        let consistent = chosen.iter().all(|&i| {
            let dep = names[i].1.as_str();
            *versions.entry(library(dep)).or_insert(dep) == dep
        });
        if !consistent {
            continue;
        }
        let cost = chosen
            .iter()
            .filter(|&&i| !declared.contains(names[i].1))
            .count() as u64;
        let only_declared = chosen.iter().all(|&i| declared.contains(names[i].1));
        best = Some(match best {
            None => (cost, only_declared),
            Some((c, _)) if cost < c => (cost, only_declared),
            Some((c, d)) if cost == c => (c, d || only_declared),
            Some(b) => b,
        });
    }
    best.map(|(cost, declared_only)| Optimum { cost, declared_only, variables: n })
}
