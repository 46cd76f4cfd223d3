use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::signature::{self, Kind, HOLE};
use crate::span::Span;

use super::infer::{Inference, Site, TypeRef};

/// One position of a sketch: a known name or a hole.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Known(String),
    Hole,
}

impl Slot {
    fn parse(text: &str) -> Slot {
        if text == HOLE {
            Slot::Hole
        } else {
            Slot::Known(text.to_string())
        }
    }

    pub fn is_hole(&self) -> bool {
        matches!(self, Slot::Hole)
    }

    pub fn as_str(&self) -> &str {
        match self {
            Slot::Known(s) => s,
            Slot::Hole => HOLE,
        }
    }

    fn of(ty: &TypeRef) -> Slot {
        match ty {
            TypeRef::Resolved(fqn) => Slot::Known(fqn.clone()),
            TypeRef::Hole(_) => Slot::Hole,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An FQN template; `?` marks every position inference could not fill.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    pub kind: Kind,
    pub owner: Slot,
    pub simple_name: String,
    pub param_types: Vec<Slot>,
    pub return_type: Option<Slot>,
    pub field_type: Option<Slot>,
    pub occurrences: Vec<Span>,
}

impl Sketch {
    pub fn render(&self) -> String {
        let params: Vec<String> = self.param_types.iter().map(|p| p.as_str().to_string()).collect();
        signature::render(
            self.kind,
            self.owner.as_str(),
            &self.simple_name,
            &params,
            self.return_type.as_ref().map_or(HOLE, Slot::as_str),
            self.field_type.as_ref().map_or(HOLE, Slot::as_str),
        )
    }

    pub fn has_holes(&self) -> bool {
        self.owner.is_hole()
            || self.param_types.iter().any(Slot::is_hole)
            || self.return_type.as_ref().is_some_and(Slot::is_hole)
            || self.field_type.as_ref().is_some_and(Slot::is_hole)
    }

    fn type_of(ty: &TypeRef, inference: &Inference) -> Option<Sketch> {
        let (owner, name) = match ty {
            TypeRef::Resolved(fqn) => {
                let (pkg, name) = fqn.rsplit_once('.')?;
                (Slot::Known(pkg.to_string()), name.to_string())
            }
            TypeRef::Hole(h) => (Slot::Hole, inference.hole_name(*h)?.to_string()),
        };
        Some(Sketch {
            kind: Kind::Type,
            owner,
            simple_name: name,
            param_types: Vec::new(),
            return_type: None,
            field_type: None,
            occurrences: Vec::new(),
        })
    }
}

impl fmt::Display for Sketch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Sketch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = signature::parse(s, true)?;
        Ok(Sketch {
            kind: raw.kind,
            owner: Slot::parse(&raw.owner),
            simple_name: raw.name,
            param_types: raw.params.iter().map(|p| Slot::parse(p)).collect(),
            return_type: (raw.kind == Kind::Method).then(|| Slot::parse(&raw.ret)),
            field_type: (raw.kind == Kind::Field).then(|| Slot::parse(&raw.field_type)),
            occurrences: Vec::new(),
        })
    }
}

/// Turns inference sites into sketches, merged by render and ordered by
/// first occurrence.
pub fn sketch(inference: &Inference) -> Vec<Sketch> {
    let mut out: Vec<Sketch> = Vec::new();
    let mut by_render: HashMap<String, usize> = HashMap::new();
    for site in &inference.sites {
        let (sketch, span) = match site {
            Site::TypeName { ty, span } | Site::Variable { ty, span } => {
                match Sketch::type_of(ty, inference) {
                    Some(s) => (s, *span),
                    None => continue,
                }
            }
            Site::Call {
                owner,
                name,
                args,
                span,
                ..
            } => (
                Sketch {
                    kind: Kind::Method,
                    owner: Slot::of(owner),
                    simple_name: name.clone(),
                    param_types: args.iter().map(Slot::of).collect(),
                    // return types of calls are never inferred
                    return_type: Some(Slot::Hole),
                    field_type: None,
                    occurrences: Vec::new(),
                },
                *span,
            ),
            Site::FieldAccess { owner, name, span, .. } => (
                Sketch {
                    kind: Kind::Field,
                    owner: Slot::of(owner),
                    simple_name: name.clone(),
                    param_types: Vec::new(),
                    return_type: None,
                    field_type: Some(Slot::Hole),
                    occurrences: Vec::new(),
                },
                *span,
            ),
        };
        let idx = *by_render.entry(sketch.render()).or_insert_with(|| {
            out.push(sketch);
            out.len() - 1
        });
        out[idx].occurrences.push(span);
    }
    for s in &mut out {
        s.occurrences.sort();
        s.occurrences.dedup();
    }
    out.sort_by_key(|s| s.occurrences[0].start);
    out
}
