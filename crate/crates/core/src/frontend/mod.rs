//! Snippet front end: wrapping, parsing, local type inference and sketch
//! generation.
//!
//! A snippet may be a full compilation unit, a list of class members, or a
//! bare statement list. The latter two are wrapped in a synthetic class (and
//! method) at the token level, so every span still points into the text the
//! user supplied.

pub mod ast;
mod infer;
mod lexer;
mod parser;
mod sketch;

use std::fmt;

use thiserror::Error;

use crate::span::{LineIndex, Span};

pub use ast::CompilationUnit;
pub use infer::{infer, Inference, Site, SymbolTable, TypeRef, Variable};
pub use sketch::{sketch, Sketch, Slot};

use lexer::{Token, TokenKind};
use parser::Parser;

pub const SNIPPET_CLASS: &str = "__Snippet";
pub const SNIPPET_METHOD: &str = "__run";

/// Simple names resolved to `java.lang` without an import.
pub const JAVA_LANG_BUILTINS: &[&str] = &[
    "String", "Object", "Integer", "Boolean", "Character", "Double", "Long",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl SyntaxError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        SyntaxError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn expecting(mut self, expected: Vec<String>) -> Self {
        self.expected = expected;
        self
    }
}

fn expected_suffix(expected: &[String]) -> String {
    match expected {
        [] => String::new(),
        [one] => format!(", expected {one}"),
        many => format!(", expected one of {}", many.join(", ")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("empty snippet")]
    Empty,
    #[error("{line}:{col}: syntax error: {message}{}", expected_suffix(expected))]
    Syntax {
        line: usize,
        col: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("{line}:{col}: {message}")]
    Analysis {
        line: usize,
        col: usize,
        identifier: String,
        message: String,
    },
}

impl FrontendError {
    pub(crate) fn syntax(source: &str, err: SyntaxError) -> Self {
        let at = LineIndex::new(source).line_col(err.span.start);
        FrontendError::Syntax {
            line: at.line,
            col: at.col,
            message: err.message,
            expected: err.expected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnippetOrigin {
    /// Parsed as written.
    CompilationUnit,
    /// Class members wrapped in a synthetic class.
    WrappedMembers,
    /// Statements wrapped in a synthetic class and method.
    WrappedStatements,
}

impl SnippetOrigin {
    pub fn is_wrapped(self) -> bool {
        self != SnippetOrigin::CompilationUnit
    }
}

impl fmt::Display for SnippetOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnippetOrigin::CompilationUnit => "compilation unit",
            SnippetOrigin::WrappedMembers => "class members",
            SnippetOrigin::WrappedStatements => "statements",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snippet {
    pub source: String,
    pub origin: SnippetOrigin,
    /// Source text as the parser sees it, including any synthetic wrapper.
    pub wrapped_source: String,
}

fn synthetic(kind: TokenKind, at: usize) -> Token {
    Token {
        kind,
        span: Span::new(at, at),
    }
}

fn wrapped_tokens(mut tokens: Vec<Token>, origin: SnippetOrigin, end: usize) -> Vec<Token> {
    let eof = tokens.pop().expect("token stream ends with eof");
    let mut out = vec![
        synthetic(TokenKind::Keyword("class"), 0),
        synthetic(TokenKind::Ident(SNIPPET_CLASS.into()), 0),
        synthetic(TokenKind::Punct("{"), 0),
    ];
    if origin == SnippetOrigin::WrappedStatements {
        out.extend([
            synthetic(TokenKind::Keyword("void"), 0),
            synthetic(TokenKind::Ident(SNIPPET_METHOD.into()), 0),
            synthetic(TokenKind::Punct("("), 0),
            synthetic(TokenKind::Punct(")"), 0),
            synthetic(TokenKind::Punct("{"), 0),
        ]);
    }
    out.extend(tokens);
    if origin == SnippetOrigin::WrappedStatements {
        out.push(synthetic(TokenKind::Punct("}"), end));
    }
    out.push(synthetic(TokenKind::Punct("}"), end));
    out.push(eof);
    out
}

fn parse_as(source: &str, tokens: &[Token], origin: SnippetOrigin) -> Result<CompilationUnit, SyntaxError> {
    let tokens = match origin {
        SnippetOrigin::CompilationUnit => tokens.to_vec(),
        _ => wrapped_tokens(tokens.to_vec(), origin, source.len()),
    };
    Parser::new(tokens).parse_compilation_unit()
}

fn wrapped_text(source: &str, origin: SnippetOrigin) -> String {
    match origin {
        SnippetOrigin::CompilationUnit => source.to_string(),
        SnippetOrigin::WrappedMembers => format!("class {SNIPPET_CLASS} {{\n{source}\n}}\n"),
        SnippetOrigin::WrappedStatements => format!(
            "class {SNIPPET_CLASS} {{\n  void {SNIPPET_METHOD}() {{\n{source}\n  }}\n}}\n"
        ),
    }
}

/// Decides how `source` is parsed. With `allow_wrapping` false only the
/// compilation-unit form is attempted.
pub fn wrap_with(source: &str, allow_wrapping: bool) -> Result<Snippet, FrontendError> {
    let tokens = lexer::tokenize(source).map_err(|e| FrontendError::syntax(source, e))?;
    if tokens.len() == 1 {
        return Err(FrontendError::Empty);
    }
    let origins: &[SnippetOrigin] = if allow_wrapping {
        &[
            SnippetOrigin::CompilationUnit,
            SnippetOrigin::WrappedStatements,
            SnippetOrigin::WrappedMembers,
        ]
    } else {
        &[SnippetOrigin::CompilationUnit]
    };
    let mut furthest: Option<SyntaxError> = None;
    for &origin in origins {
        match parse_as(source, &tokens, origin) {
            Ok(_) => {
                return Ok(Snippet {
                    source: source.to_string(),
                    origin,
                    wrapped_source: wrapped_text(source, origin),
                })
            }
            Err(e) => {
                // report the attempt that got furthest into the input
                if furthest.as_ref().is_none_or(|f| e.span.start > f.span.start) {
                    furthest = Some(e);
                }
            }
        }
    }
    Err(FrontendError::syntax(source, furthest.expect("at least one attempt")))
}

pub fn wrap(source: &str) -> Result<Snippet, FrontendError> {
    wrap_with(source, true)
}

pub fn parse(snippet: &Snippet) -> Result<CompilationUnit, FrontendError> {
    let tokens =
        lexer::tokenize(&snippet.source).map_err(|e| FrontendError::syntax(&snippet.source, e))?;
    parse_as(&snippet.source, &tokens, snippet.origin)
        .map_err(|e| FrontendError::syntax(&snippet.source, e))
}

/// Runs wrap, parse, infer and sketch.
pub fn analyze(source: &str, allow_wrapping: bool) -> Result<Vec<Sketch>, FrontendError> {
    let snippet = wrap_with(source, allow_wrapping)?;
    let ast = parse(&snippet)?;
    let inference = infer(&ast).map_err(|e| e.into_frontend(source))?;
    Ok(sketch(&inference))
}

/// Debug listing: `R `/`U ` + render, a tab, then occurrence spans.
pub fn render_sketch_lines(source: &str, sketches: &[Sketch]) -> Vec<String> {
    let index = LineIndex::new(source);
    sketches
        .iter()
        .map(|s| {
            let spans: Vec<String> = s.occurrences.iter().map(|sp| index.render(*sp)).collect();
            format!(
                "{} {}\t{}",
                if s.has_holes() { 'U' } else { 'R' },
                s.render(),
                spans.join(" ")
            )
        })
        .collect()
}
