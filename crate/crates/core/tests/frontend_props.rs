use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use fqnres::frontend::{self, analyze, infer, render_sketch_lines, FrontendError, Site, TypeRef};
use fqnres::span::Span;
use proptest::prelude::*;

const TYPES: &[&str] = &["Foo", "Bar", "Baz"];

fn methods_of(ty: &str) -> [String; 2] {
    let lower = ty.to_lowercase();
    [format!("{lower}One"), format!("{lower}Two")]
}

#[derive(Debug, Clone)]
enum Step {
    StaticCall { ty: usize, method: usize, args: Vec<u8> },
    New { ty: usize },
    InstanceCall { pick: usize, method: usize, args: Vec<u8> },
    Int,
    Str,
}

fn step() -> impl Strategy<Value = Step> {
    let args = prop::collection::vec(0u8..4, 0..3);
    prop_oneof![
        (0..TYPES.len(), 0..2usize, args.clone()).prop_map(|(ty, method, args)| Step::StaticCall { ty, method, args }),
        (0..TYPES.len()).prop_map(|ty| Step::New { ty }),
        (0..8usize, 0..2usize, args).prop_map(|(pick, method, args)| Step::InstanceCall { pick, method, args }),
        Just(Step::Int),
        Just(Step::Str),
    ]
}

/// Renders a method body from generated steps. Arguments are literals or
/// earlier `int`/`String` locals, so only receivers carry unknown types.
fn body(steps: &[Step]) -> String {
    let mut out = String::new();
    let mut objects: Vec<(String, usize)> = Vec::new();
    let mut ints: Vec<String> = Vec::new();
    let mut strings: Vec<String> = Vec::new();
    let arg_text = |a: u8, ints: &[String], strings: &[String]| match a {
        0 => "1".to_string(),
        1 => "\"s\"".to_string(),
        2 => ints.last().cloned().unwrap_or_else(|| "2L".into()),
        _ => strings.last().cloned().unwrap_or_else(|| "\"t\"".into()),
    };
    for (i, s) in steps.iter().enumerate() {
        let var = format!("v{i}");
        match s {
            Step::StaticCall { ty, method, args } => {
                let t = TYPES[*ty];
                let a: Vec<String> = args.iter().map(|&a| arg_text(a, &ints, &strings)).collect();
                out.push_str(&format!("    {t} {var} = {t}.{}({});\n", methods_of(t)[*method], a.join(", ")));
                objects.push((var, *ty));
            }
            Step::New { ty } => {
                let t = TYPES[*ty];
                out.push_str(&format!("    {t} {var} = new {t}();\n"));
                objects.push((var, *ty));
            }
            Step::InstanceCall { pick, method, args } => {
                if objects.is_empty() {
                    out.push_str(&format!("    int {var} = 0;\n"));
                    ints.push(var);
                    continue;
                }
                let (recv, ty) = objects[pick % objects.len()].clone();
                let a: Vec<String> = args.iter().map(|&a| arg_text(a, &ints, &strings)).collect();
                out.push_str(&format!("    {recv}.{}({});\n", methods_of(TYPES[ty])[*method], a.join(", ")));
            }
            Step::Int => {
                out.push_str(&format!("    int {var} = {} + 1;\n", ints.last().map_or("3", String::as_str)));
                ints.push(var);
            }
            Step::Str => {
                out.push_str(&format!("    String {var} = \"x\" + 1;\n"));
                strings.push(var);
            }
        }
    }
    out
}

fn unit(imports: &str, steps: &[Step]) -> String {
    format!("{imports}class Main {{\n  void run() {{\n{}  }}\n}}\n", body(steps))
}

/// Independent rendering of one inference site.
fn site_render(site: &Site, hole_name: &dyn Fn(u32) -> Option<String>) -> Option<(String, Span)> {
    let ty = |t: &TypeRef| match t {
        TypeRef::Resolved(f) => f.clone(),
        TypeRef::Hole(_) => "?".into(),
    };
    match site {
        Site::TypeName { ty: t, span } | Site::Variable { ty: t, span } => match t {
            TypeRef::Resolved(f) if f.contains('.') => Some((f.clone(), *span)),
            TypeRef::Resolved(_) => None,
            TypeRef::Hole(h) => hole_name(*h).map(|n| (format!("?.{n}"), *span)),
        },
        Site::Call { owner, name, args, span, .. } => {
            let args: Vec<String> = args.iter().map(ty).collect();
            Some((format!("{}.{name}({})?", ty(owner), args.join(",")), *span))
        }
        Site::FieldAccess { owner, name, span, .. } => Some((format!("{}.{name}:?", ty(owner)), *span)),
    }
}

fn site_has_hole(site: &Site) -> bool {
    match site {
        Site::TypeName { ty, .. } | Site::Variable { ty, .. } => ty.is_hole(),
        Site::Call { owner, args, result, .. } => owner.is_hole() || result.is_hole() || args.iter().any(TypeRef::is_hole),
        Site::FieldAccess { owner, result, .. } => owner.is_hole() || result.is_hole(),
    }
}

fn occurrences(src: &str) -> BTreeMap<String, Vec<Span>> {
    analyze(src, true)
        .unwrap()
        .into_iter()
        .map(|s| (s.render(), s.occurrences))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn token_soup_never_panics(toks in prop::collection::vec(prop::sample::select(vec![
        "class", "A", "{", "}", "(", ")", ";", "=", "int", "x", "Foo", ".", "bar", "new", "return",
        "if", "while", "for", ",", "\"s\"", "1", "+", "<", ">", "?", ":", "import", "void", "[", "]",
        "try", "catch", "null", "this", "!", "&&", "\n", "@", "->", "'c'", "else",
    ]), 0..40)) {
        let src = toks.join(" ");
        match analyze(&src, true) {
            Ok(sketches) => {
                for s in sketches {
                    prop_assert!(!s.occurrences.is_empty());
                    prop_assert!(s.occurrences.iter().all(|sp| sp.end <= src.len()));
                }
            }
            Err(FrontendError::Empty) => prop_assert!(src.trim().is_empty()),
            Err(FrontendError::Syntax { line, col, .. }) | Err(FrontendError::Analysis { line, col, .. }) => {
                let lines: Vec<&str> = src.split('\n').collect();
                prop_assert!(line >= 1 && line <= lines.len());
                prop_assert!(col >= 1 && col <= lines[line - 1].chars().count() + 1);
            }
        }
    }

    #[test]
    fn sketches_agree_with_sites(steps in prop::collection::vec(step(), 0..10)) {
        let src = unit("", &steps);
        let snippet = frontend::wrap(&src).unwrap();
        let ast = frontend::parse(&snippet).unwrap();
        let inference = infer(&ast).unwrap();
        let names = |h: u32| inference.hole_name(h).map(str::to_string);

        let mut expected: BTreeMap<String, BTreeSet<Span>> = BTreeMap::new();
        let mut holes: BTreeMap<String, bool> = BTreeMap::new();
        for site in &inference.sites {
            if let Some((render, span)) = site_render(site, &names) {
                expected.entry(render.clone()).or_default().insert(span);
                holes.insert(render, site_has_hole(site));
            }
        }
        let sketches = frontend::sketch(&inference);
        let got: BTreeMap<String, BTreeSet<Span>> = sketches
            .iter()
            .map(|s| (s.render(), s.occurrences.iter().copied().collect()))
            .collect();
        prop_assert_eq!(&got, &expected);
        for s in &sketches {
            prop_assert_eq!(s.has_holes(), holes[&s.render()]);
            prop_assert_eq!(s.has_holes(), s.render().contains('?'));
        }
        let total: usize = sketches.iter().map(|s| s.occurrences.len()).sum();
        prop_assert!(sketches.len() <= total);
        prop_assert_eq!(total, expected.values().map(BTreeSet::len).sum::<usize>());
        let firsts: Vec<usize> = sketches.iter().map(|s| s.occurrences[0].start).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        prop_assert_eq!(firsts, sorted);
    }

    #[test]
    fn analysis_is_deterministic(steps in prop::collection::vec(step(), 0..10)) {
        let src = unit("", &steps);
        let a = render_sketch_lines(&src, &analyze(&src, true).unwrap());
        let b = render_sketch_lines(&src, &analyze(&src, true).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn importing_a_type_only_resolves_that_type(steps in prop::collection::vec(step(), 0..10), which in 0..TYPES.len()) {
        let ty = TYPES[which];
        let import = format!("import p.q.{ty};\n");
        let before = occurrences(&unit("", &steps));
        let after = occurrences(&unit(&import, &steps));
        let shift = |sp: &Span| Span::new(sp.start + import.len(), sp.end + import.len());
        let own_methods = methods_of(ty);

        let mut expected: BTreeMap<String, Vec<Span>> = BTreeMap::new();
        for (render, spans) in &before {
            let spans: Vec<Span> = spans.iter().map(shift).collect();
            let converted = if *render == format!("?.{ty}") {
                format!("p.q.{ty}")
            } else if own_methods.iter().any(|m| render.starts_with(&format!("?.{m}("))) {
                format!("p.q.{ty}{}", &render[1..])
            } else {
                render.clone()
            };
            expected.entry(converted).or_default().extend(spans);
        }
        let import_span = Span::new(7, 7 + format!("p.q.{ty}").len());
        expected.entry(format!("p.q.{ty}")).or_default().push(import_span);
        for spans in expected.values_mut() {
            spans.sort();
        }
        prop_assert_eq!(after, expected);
    }
}

#[test]
fn fixture_sketches_follow_the_inference_rules() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/regex_matches.java");
    let src = std::fs::read_to_string(path).unwrap();
    // Rules applied by hand: String parameters resolve through java.lang;
    // Pattern and Matcher have no import and become holes; every call
    // result is a hole, and arguments carry their variables' types.
    let expected = [
        "R java.lang.String",
        "U ?.Pattern",
        "U ?.compile(java.lang.String)?",
        "U ?.Matcher",
        "U ?.matcher(java.lang.String)?",
        "U ?.find()?",
    ];
    let lines = render_sketch_lines(&src, &analyze(&src, true).unwrap());
    let heads: Vec<&str> = lines.iter().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(heads, expected);
    // `input` and `regex`: two declarations and one use each, plus the two
    // written `String` type names
    let string_line = &lines[0];
    assert_eq!(string_line.split('\t').nth(1).unwrap().split(' ').count(), 6);
}

#[test]
fn unsupported_syntax_is_reported() {
    for (src, needle) in [
        ("List<String> xs = null;", "generic"),
        ("int[] xs = null;", "array"),
        ("Runnable r = () -> {};", "lambda"),
        ("@Override void f() {}", "annotation"),
    ] {
        let err = analyze(src, true).unwrap_err().to_string();
        assert!(err.contains(needle), "{src}: {err}");
    }
}

#[test]
fn unwrapped_statement_is_a_syntax_error() {
    assert!(matches!(analyze("int x = 1;", false), Err(FrontendError::Syntax { .. })));
}
