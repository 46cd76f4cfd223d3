use std::collections::BTreeSet;

use super::Resolution;

/// Whether `fqn` must be imported explicitly: it is dotted and not a
/// direct member of `java.lang`.
pub fn needs_import(fqn: &str) -> bool {
    match fqn.strip_prefix("java.lang.") {
        Some(rest) => rest.contains('.'),
        None => fqn.contains('.'),
    }
}

fn import_target(line: &str) -> Option<&str> {
    let rest = line.trim().strip_prefix("import")?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("static ").map_or(rest, str::trim_start);
    Some(rest.trim_end().strip_suffix(';')?.trim())
}

fn is_header_line(line: &str) -> bool {
    let t = line.trim();
    t.is_empty()
        || t.starts_with("//")
        || import_target(t).is_some()
        || (t.starts_with("package") && t.ends_with(';'))
}

/// Inserts sorted `import` lines for the resolution's imports after the
/// leading package/import lines (or at the top). The rest of `source` is
/// copied unchanged. Imports already present are not repeated.
pub fn emit_patch(resolution: &Resolution, source: &str) -> String {
    let mut insert_at = 0;
    let mut existing = BTreeSet::new();
    let mut offset = 0;
    for line in source.split_inclusive('\n') {
        if !is_header_line(line) {
            break;
        }
        offset += line.len();
        let t = line.trim();
        if let Some(target) = import_target(t) {
            existing.insert(target.to_string());
            insert_at = offset;
        } else if t.starts_with("package") {
            insert_at = offset;
        }
    }
    let missing: Vec<&String> = resolution
        .imports
        .iter()
        .filter(|fqn| needs_import(fqn) && !existing.contains(fqn.as_str()))
        .collect();
    if missing.is_empty() {
        return source.to_string();
    }
    let mut block = String::new();
    if insert_at > 0 && !source[..insert_at].ends_with('\n') {
        block.push('\n');
    }
    for fqn in missing {
        block.push_str("import ");
        block.push_str(fqn);
        block.push_str(";\n");
    }
    if insert_at == 0 {
        block.push('\n');
    }
    let mut out = String::with_capacity(source.len() + block.len());
    out.push_str(&source[..insert_at]);
    out.push_str(&block);
    out.push_str(&source[insert_at..]);
    out
}
