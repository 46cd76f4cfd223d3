//! Extraction of dependency itemsets from the `project/dependencies` subset of
//! a Maven POM.

use std::collections::{BTreeMap, BTreeSet};

use roxmltree::{Document, Node};

use super::{DependencyCoordinate, KbError, ProjectItemset};

fn byte_offset(text: &str, row: u32, col: u32) -> usize {
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if i + 1 == row as usize {
            let col_bytes: usize = line
                .chars()
                .take(col.saturating_sub(1) as usize)
                .map(char::len_utf8)
                .sum();
            return offset + col_bytes;
        }
        offset += line.len();
    }
    text.len()
}

fn child<'a, 'input>(node: Node<'a, 'input>, name: &str) -> Option<Node<'a, 'input>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
}

fn child_text(node: Node, name: &str) -> Option<String> {
    child(node, name).map(|c| c.text().unwrap_or("").trim().to_string())
}

struct Properties(BTreeMap<String, String>);

impl Properties {
    fn collect(project: Node) -> Self {
        let mut map = BTreeMap::new();
        if let Some(props) = child(project, "properties") {
            for p in props.children().filter(|c| c.is_element()) {
                map.insert(
                    p.tag_name().name().to_string(),
                    p.text().unwrap_or("").trim().to_string(),
                );
            }
        }
        let parent = child(project, "parent");
        for key in ["groupId", "artifactId", "version"] {
            let value = child_text(project, key).or_else(|| parent.and_then(|p| child_text(p, key)));
            if let Some(v) = value {
                map.insert(format!("project.{key}"), v.clone());
                map.insert(format!("pom.{key}"), v);
            }
        }
        Properties(map)
    }

    fn expand(&self, value: &str) -> Result<String, String> {
        let mut out = value.to_string();
        // bounded so that self-referencing properties terminate
        for _ in 0..8 {
            let Some(start) = out.find("${") else {
                return Ok(out);
            };
            let Some(len) = out[start..].find('}') else {
                return Err(format!("unterminated property reference in `{value}`"));
            };
            let name = &out[start + 2..start + len];
            let replacement = self
                .0
                .get(name)
                .ok_or_else(|| format!("undefined property `${{{name}}}`"))?;
            out = format!("{}{}{}", &out[..start], replacement, &out[start + len + 1..]);
        }
        if out.contains("${") {
            Err(format!("property expansion of `{value}` does not terminate"))
        } else {
            Ok(out)
        }
    }
}

/// Parses a POM document. `origin` names the file in diagnostics.
pub fn parse_pom(text: &str, origin: &str) -> Result<ProjectItemset, KbError> {
    let doc = Document::parse(text).map_err(|e| {
        let pos = e.pos();
        KbError::Xml {
            origin: origin.to_string(),
            offset: byte_offset(text, pos.row, pos.col),
            message: e.to_string(),
        }
    })?;
    let project = doc.root_element();
    if project.tag_name().name() != "project" {
        return Err(KbError::Pom {
            origin: origin.to_string(),
            message: format!("root element is <{}>, expected <project>", project.tag_name().name()),
        });
    }
    let props = Properties::collect(project);
    let pom_err = |message: String| KbError::Pom {
        origin: origin.to_string(),
        message,
    };

    let mut dependencies = BTreeSet::new();
    if let Some(deps) = child(project, "dependencies") {
        let elements = deps
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "dependency");
        for (i, dep) in elements.enumerate() {
            let mut fields = Vec::with_capacity(3);
            for key in ["groupId", "artifactId", "version"] {
                let raw = child_text(dep, key).ok_or_else(|| {
                    pom_err(format!("dependency #{} is missing <{key}>", i + 1))
                })?;
                let value = props
                    .expand(&raw)
                    .map_err(|m| pom_err(format!("dependency #{}: {m}", i + 1)))?;
                fields.push(value);
            }
            let coord = DependencyCoordinate::new(&fields[0], &fields[1], &fields[2])
                .map_err(|e| pom_err(format!("dependency #{}: {e}", i + 1)))?;
            dependencies.insert(coord);
        }
    }
    if dependencies.is_empty() {
        return Err(KbError::EmptyItemset {
            origin: origin.to_string(),
        });
    }

    let id_part = |key: &str| props.0.get(&format!("project.{key}")).cloned();
    let project_id = match (id_part("groupId"), id_part("artifactId"), id_part("version")) {
        (Some(g), Some(a), Some(v)) => format!("{g}:{a}:{v}"),
        (Some(g), Some(a), None) => format!("{g}:{a}"),
        _ => origin.to_string(),
    };
    Ok(ProjectItemset {
        project_id,
        dependencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pom(deps: &str) -> String {
        format!(
            "<project xmlns=\"http://maven.apache.org/POM/4.0.0\">\n  <groupId>com.example</groupId>\n  <artifactId>demo</artifactId>\n  <version>1.0</version>\n  <dependencies>{deps}</dependencies>\n</project>\n"
        )
    }

    fn dep(g: &str, a: &str, v: &str) -> String {
        format!("<dependency><groupId>{g}</groupId><artifactId>{a}</artifactId><version>{v}</version></dependency>")
    }

    #[test]
    fn single_dependency() {
        let set = parse_pom(&pom(&dep("g", "a", "1.0")), "pom.xml").unwrap();
        assert_eq!(set.project_id, "com.example:demo:1.0");
        let got: Vec<String> = set.dependencies.iter().map(|d| d.render()).collect();
        assert_eq!(got, vec!["g:a:1.0"]);
    }

    #[test]
    fn zero_dependencies_is_an_error() {
        let err = parse_pom(&pom(""), "pom.xml").unwrap_err();
        assert!(matches!(err, KbError::EmptyItemset { .. }));
        let err = parse_pom("<project/>", "p").unwrap_err();
        assert!(matches!(err, KbError::EmptyItemset { .. }));
    }

    #[test]
    fn duplicates_collapse() {
        let elements = [dep("g", "a", "1.0"), dep("g", "b", "2.0"), dep("g", "a", "1.0")];
        let set = parse_pom(&pom(&elements.concat()), "pom.xml").unwrap();
        // oracle: distinct (g, a, v) triples among the written elements
        let mut distinct: Vec<&String> = elements.iter().collect();
        distinct.sort();
        distinct.dedup();
        assert_eq!(set.dependencies.len(), distinct.len());
        assert_eq!(set.dependencies.len(), 2);
    }

    #[test]
    fn missing_child_is_named() {
        let broken = "<dependency><groupId>g</groupId><version>1</version></dependency>";
        let err = parse_pom(&pom(broken), "pom.xml").unwrap_err();
        assert!(err.to_string().contains("<artifactId>"), "{err}");
    }

    #[test]
    fn malformed_xml_reports_offset() {
        let text = "<project>\n  <dependencies>\n</project>";
        match parse_pom(text, "broken.xml").unwrap_err() {
            KbError::Xml { offset, .. } => assert!(offset > 0 && offset <= text.len()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn properties_are_expanded() {
        let text = "<project><properties><junit.version>4.13.2</junit.version></properties><dependencies>\
            <dependency><groupId>junit</groupId><artifactId>junit</artifactId><version>${junit.version}</version></dependency>\
            </dependencies></project>";
        let set = parse_pom(text, "p.xml").unwrap();
        assert_eq!(set.dependencies.iter().next().unwrap().render(), "junit:junit:4.13.2");
        assert_eq!(set.project_id, "p.xml");
    }

    #[test]
    fn wrong_root() {
        assert!(matches!(parse_pom("<settings/>", "x").unwrap_err(), KbError::Pom { .. }));
    }
}
