use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::KbError;

/// Identity of a third-party library: `group:artifact:version`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyCoordinate {
    group: String,
    artifact: String,
    version: String,
}

fn is_name_part(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}

/// `digits(.digits)*([-+].+)?`, or a literal tag such as `java8`.
fn is_version(s: &str) -> bool {
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == ':') {
        return false;
    }
    let (core, suffix) = match s.find(['-', '+']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let numeric = !core.is_empty()
        && core
            .split('.')
            .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()));
    if numeric {
        return suffix.is_none_or(|rest| !rest.is_empty());
    }
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-' | '+'))
}

impl DependencyCoordinate {
    pub fn new(group: &str, artifact: &str, version: &str) -> Result<Self, KbError> {
        let bad = |reason: String| KbError::Coordinate {
            text: format!("{group}:{artifact}:{version}"),
            reason,
        };
        if !is_name_part(group) {
            return Err(bad(format!("invalid group `{group}`")));
        }
        if !is_name_part(artifact) {
            return Err(bad(format!("invalid artifact `{artifact}`")));
        }
        if !is_version(version) {
            return Err(bad(format!("invalid version `{version}`")));
        }
        Ok(DependencyCoordinate {
            group: group.to_string(),
            artifact: artifact.to_string(),
            version: version.to_string(),
        })
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn artifact(&self) -> &str {
        &self.artifact
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// `(group, artifact)`, the identity shared by all versions of a library.
    pub fn library(&self) -> (&str, &str) {
        (&self.group, &self.artifact)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DependencyCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group, self.artifact, self.version)
    }
}

impl FromStr for DependencyCoordinate {
    type Err = KbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            [g, a, v] => DependencyCoordinate::new(g, a, v),
            _ => Err(KbError::Coordinate {
                text: s.to_string(),
                reason: "expected `group:artifact:version`".into(),
            }),
        }
    }
}

impl Serialize for DependencyCoordinate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
