use crate::signature::{self, Kind};

use super::DependencyCoordinate;

pub type EntryKind = Kind;

/// One type, method, or field annotated with the dependency that ships it.
///
/// `owner` is the package for a type entry and the declaring type for a
/// method or field entry, so `owner.simple_name` is always the prefix of the
/// rendered FQN.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KbEntry {
    pub kind: EntryKind,
    pub owner: String,
    pub simple_name: String,
    pub param_types: Vec<String>,
    pub return_type: String,
    pub field_type: String,
    pub supertype: Option<String>,
    pub dependency: DependencyCoordinate,
}

impl KbEntry {
    pub fn fqn(&self) -> String {
        signature::render(
            self.kind,
            &self.owner,
            &self.simple_name,
            &self.param_types,
            &self.return_type,
            &self.field_type,
        )
    }

    pub fn arity(&self) -> usize {
        self.param_types.len()
    }

    /// The type that has to be imported to use this entry: the entry itself
    /// for types, the declaring type for members.
    pub fn import_type(&self) -> String {
        match self.kind {
            Kind::Type => self.fqn(),
            Kind::Method | Kind::Field => self.owner.clone(),
        }
    }

    /// Solver variable identity, `group:artifact:version:TypeFqn`.
    ///
    /// Members share the variable of their declaring type, so selecting
    /// `java.util.regex.Pattern` from one dependency covers both `?.Pattern`
    /// and `?.compile(java.lang.String)?`.
    pub fn variable_key(&self) -> String {
        format!("{}:{}", self.dependency, self.import_type())
    }

    /// The class-listing record for this entry, without the dependency.
    pub fn listing_line(&self) -> String {
        let mut line = format!("{} {}", self.kind.tag(), self.fqn());
        if let Some(sup) = &self.supertype {
            line.push_str(" <: ");
            line.push_str(sup);
        }
        line
    }

    /// Parses one class-listing record. Blank and `#` lines yield `None`.
    pub fn parse_listing_line(
        line: &str,
        dependency: &DependencyCoordinate,
    ) -> Result<Option<KbEntry>, String> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(None);
        }
        let (tag, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("record `{line}` has no name"))?;
        let rest = rest.trim();
        let expected = match tag {
            "T" => Kind::Type,
            "M" => Kind::Method,
            "F" => Kind::Field,
            other => return Err(format!("unknown record tag `{other}` (expected T, M or F)")),
        };
        let (name_part, supertype) = match rest.split_once("<:") {
            Some((_, _)) if expected != Kind::Type => {
                return Err("only type records may declare a supertype".into())
            }
            Some((name, sup)) => {
                let sup = sup.trim();
                if !signature::is_dotted_name(sup) {
                    return Err(format!("invalid supertype `{sup}`"));
                }
                (name.trim(), Some(sup.to_string()))
            }
            None => (rest, None),
        };
        if name_part.contains(char::is_whitespace) {
            return Err(format!("unexpected whitespace in `{name_part}`"));
        }
        let raw = signature::parse(name_part, false)?;
        if raw.kind != expected {
            return Err(format!(
                "`{tag}` record does not hold a {} name: `{name_part}`",
                match expected {
                    Kind::Type => "type",
                    Kind::Method => "method",
                    Kind::Field => "field",
                }
            ));
        }
        Ok(Some(KbEntry {
            kind: raw.kind,
            owner: raw.owner,
            simple_name: raw.name,
            param_types: raw.params,
            return_type: raw.ret,
            field_type: raw.field_type,
            supertype,
            dependency: dependency.clone(),
        }))
    }
}
