use crate::span::Span;

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Keyword(&'static str),
    Punct(&'static str),
    Int,
    Long,
    Float,
    Double,
    Char,
    Str,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Keyword(k) => format!("`{k}`"),
            TokenKind::Punct(p) => format!("`{p}`"),
            TokenKind::Int | TokenKind::Long => "integer literal".into(),
            TokenKind::Float | TokenKind::Double => "floating-point literal".into(),
            TokenKind::Char => "character literal".into(),
            TokenKind::Str => "string literal".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "boolean", "break", "byte", "case", "catch", "char", "class", "continue",
    "default", "do", "double", "else", "enum", "extends", "false", "final", "finally", "float",
    "for", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "null", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient",
    "true", "try", "void", "volatile", "while",
];

// longest first
const PUNCTS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "(", ")", "{", "}", "[",
    "]", ";", ",", ".", "@", "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&", "|",
    "^", "%",
];

pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer { src: source, pos: 0 }.run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, at: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(Span::new(at, at), message)
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia()?;
            let start = self.pos;
            let Some(c) = self.peek() else {
                tokens.push(Token {
                    kind: TokenKind::Eof,
                    span: Span::new(start, start),
                });
                return Ok(tokens);
            };
            let kind = if c.is_alphabetic() || c == '_' || c == '$' {
                self.word()
            } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
                self.number()?
            } else if c == '"' {
                self.quoted('"')?;
                TokenKind::Str
            } else if c == '\'' {
                self.quoted('\'')?;
                TokenKind::Char
            } else if let Some(p) = PUNCTS.iter().find(|p| self.rest().starts_with(**p)) {
                self.pos += p.len();
                TokenKind::Punct(p)
            } else {
                return Err(self.error(start, format!("unexpected character `{c}`")));
            };
            tokens.push(Token {
                kind,
                span: Span::new(start, self.pos),
            });
        }
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            let rest = self.rest();
            if rest.starts_with("//") {
                self.pos += rest.find('\n').unwrap_or(rest.len());
            } else if rest.starts_with("/*") {
                let close = rest[2..]
                    .find("*/")
                    .ok_or_else(|| self.error(self.pos, "unterminated block comment"))?;
                self.pos += close + 4;
            } else if self.peek().is_some_and(char::is_whitespace) {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn word(&mut self) -> TokenKind {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '$')
        {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        match KEYWORDS.iter().find(|k| **k == text) {
            Some(k) => TokenKind::Keyword(k),
            None => TokenKind::Ident(text.to_string()),
        }
    }

    fn digits(&mut self, radix: u32) -> usize {
        let mut n = 0;
        while let Some(c) = self.peek() {
            if c.is_digit(radix) {
                n += 1;
                self.bump();
            } else if c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        n
    }

    fn number(&mut self) -> Result<TokenKind, SyntaxError> {
        let start = self.pos;
        if self.rest().starts_with("0x") || self.rest().starts_with("0X") {
            self.pos += 2;
            if self.digits(16) == 0 {
                return Err(self.error(start, "hexadecimal literal has no digits"));
            }
            return Ok(self.integer_suffix());
        }
        if self.rest().starts_with("0b") || self.rest().starts_with("0B") {
            self.pos += 2;
            if self.digits(2) == 0 {
                return Err(self.error(start, "binary literal has no digits"));
            }
            return Ok(self.integer_suffix());
        }
        let mut floating = false;
        self.digits(10);
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            floating = true;
            self.bump();
            self.digits(10);
        } else if self.peek() == Some('.') && !self.peek_at(1).is_some_and(|c| c.is_alphabetic()) {
            // `1.` is a double; `1.foo` is not a number followed by a member
            floating = true;
            self.bump();
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            floating = true;
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.digits(10) == 0 {
                return Err(self.error(start, "malformed exponent"));
            }
        }
        Ok(match self.peek() {
            Some('f' | 'F') => {
                self.bump();
                TokenKind::Float
            }
            Some('d' | 'D') => {
                self.bump();
                TokenKind::Double
            }
            _ if floating => TokenKind::Double,
            _ => self.integer_suffix(),
        })
    }

    fn integer_suffix(&mut self) -> TokenKind {
        if matches!(self.peek(), Some('l' | 'L')) {
            self.bump();
            TokenKind::Long
        } else {
            TokenKind::Int
        }
    }

    fn quoted(&mut self, quote: char) -> Result<(), SyntaxError> {
        let start = self.pos;
        self.bump();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    let what = if quote == '"' { "string" } else { "character" };
                    return Err(self.error(start, format!("unterminated {what} literal")));
                }
                Some('\\') => {
                    self.bump();
                }
                Some(c) if c == quote => return Ok(()),
                Some(_) => {}
            }
        }
    }
}
