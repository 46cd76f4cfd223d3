//! Shared textual grammar for rendered FQNs and sketches.
//!
//! Three shapes are recognised:
//!
//! * type: `qualifier.Simple`
//! * method: `qualifier.name(T1,...,Tn)Ret`
//! * field: `qualifier.name:Type`
//!
//! Knowledge-base entries use the grammar without holes; sketches may put a
//! `?` in any qualifier or type slot.

use serde::Serialize;

pub const HOLE: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Type,
    Method,
    Field,
}

impl Kind {
    pub fn tag(self) -> char {
        match self {
            Kind::Type => 'T',
            Kind::Method => 'M',
            Kind::Field => 'F',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawSignature {
    pub kind: Kind,
    pub owner: String,
    pub name: String,
    pub params: Vec<String>,
    pub ret: String,
    pub field_type: String,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

pub fn is_dotted_name(s: &str) -> bool {
    !s.is_empty() && s.split('.').all(is_identifier)
}

fn check_slot(slot: &str, what: &str, holes: bool) -> Result<(), String> {
    if holes && slot == HOLE {
        return Ok(());
    }
    if is_dotted_name(slot) {
        Ok(())
    } else if slot.is_empty() {
        Err(format!("empty {what}"))
    } else {
        Err(format!("invalid {what} `{slot}`"))
    }
}

fn split_member(head: &str, holes: bool) -> Result<(String, String), String> {
    let (owner, name) = head
        .rsplit_once('.')
        .ok_or_else(|| format!("`{head}` has no qualifier"))?;
    check_slot(owner, "qualifier", holes)?;
    if !is_identifier(name) {
        return Err(format!("invalid simple name `{name}`"));
    }
    Ok((owner.to_string(), name.to_string()))
}

pub(crate) fn parse(text: &str, holes: bool) -> Result<RawSignature, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty name".into());
    }
    let opens = text.matches('(').count();
    let closes = text.matches(')').count();
    if opens > 0 || closes > 0 {
        let open = text.find('(');
        let close = text.find(')');
        let (open, close) = match (open, close) {
            (Some(o), Some(c)) if opens == 1 && closes == 1 && o < c => (o, c),
            _ => return Err(format!("mismatched parentheses in `{text}`")),
        };
        let (owner, name) = split_member(&text[..open], holes)?;
        let inner = text[open + 1..close].trim();
        let params = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| {
                    let p = p.trim();
                    check_slot(p, "parameter type", holes).map(|_| p.to_string())
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        let ret = text[close + 1..].trim();
        if ret.is_empty() {
            return Err(format!("missing return type in `{text}`"));
        }
        check_slot(ret, "return type", holes)?;
        return Ok(RawSignature {
            kind: Kind::Method,
            owner,
            name,
            params,
            ret: ret.to_string(),
            field_type: String::new(),
        });
    }
    if let Some((head, ty)) = text.split_once(':') {
        let (owner, name) = split_member(head.trim(), holes)?;
        let ty = ty.trim();
        check_slot(ty, "field type", holes)?;
        return Ok(RawSignature {
            kind: Kind::Field,
            owner,
            name,
            params: Vec::new(),
            ret: String::new(),
            field_type: ty.to_string(),
        });
    }
    let (owner, name) = split_member(text, holes)?;
    Ok(RawSignature {
        kind: Kind::Type,
        owner,
        name,
        params: Vec::new(),
        ret: String::new(),
        field_type: String::new(),
    })
}

pub(crate) fn render(
    kind: Kind,
    owner: &str,
    name: &str,
    params: &[String],
    ret: &str,
    field_type: &str,
) -> String {
    match kind {
        Kind::Type => format!("{owner}.{name}"),
        Kind::Method => format!("{owner}.{name}({}){ret}", params.join(",")),
        Kind::Field => format!("{owner}.{name}:{field_type}"),
    }
}
