//! Recursive-descent parser for the supported Java subset.
//!
//! Generics, arrays, annotations, lambdas and a few other constructs are
//! rejected with a dedicated message rather than a generic syntax error.

use crate::span::Span;

use super::ast::*;
use super::lexer::{Token, TokenKind};
use super::SyntaxError;

const MAX_DEPTH: usize = 96;

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "synchronized", "native",
    "transient", "volatile", "strictfp", "default",
];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

// (operators, binding power), loosest first
const BINARY_LEVELS: &[&[&str]] = &[
    &["||"],
    &["&&"],
    &["|"],
    &["^"],
    &["&"],
    &["==", "!="],
    &["<", ">", "<=", ">=", "instanceof"],
    &["<<", ">>", ">>>"],
    &["+", "-"],
    &["*", "/", "%"],
];

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    /// `tokens` must end with an `Eof` token.
    pub fn new(tokens: Vec<Token>) -> Self {
        debug_assert!(matches!(tokens.last().map(|t| &t.kind), Some(TokenKind::Eof)));
        Parser {
            tokens,
            pos: 0,
            depth: 0,
        }
    }

    // ---- token helpers ----

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind_at(&self, n: usize) -> &TokenKind {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Punct(q) if *q == p)
    }

    fn at_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Keyword(q) if *q == k)
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().kind, TokenKind::Eof)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.at_keyword(k) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SyntaxError {
        let tok = self.peek();
        SyntaxError::new(tok.span, format!("unexpected {}", tok.describe()))
            .expecting(expected.iter().map(|s| s.to_string()).collect())
    }

    fn unsupported(&self, what: &str) -> SyntaxError {
        SyntaxError::new(self.peek().span, format!("{what} are not supported"))
    }

    fn expect_punct(&mut self, p: &'static str) -> PResult<Span> {
        if self.at_punct(p) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[&format!("`{p}`")]))
        }
    }

    fn expect_ident(&mut self) -> PResult<Ident> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let ident = Ident {
                    name: name.clone(),
                    span: self.peek().span,
                };
                self.advance();
                Ok(ident)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.peek().span, "nesting too deep"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn reject_unsupported_prefix(&self) -> PResult<()> {
        if self.at_punct("@") {
            return Err(self.unsupported("annotations"));
        }
        Ok(())
    }

    // ---- compilation unit ----

    pub fn parse_compilation_unit(&mut self) -> PResult<CompilationUnit> {
        self.reject_unsupported_prefix()?;
        let package = if self.eat_keyword("package") {
            let path = self.qualified_name()?;
            self.expect_punct(";")?;
            Some(path)
        } else {
            None
        };
        let mut imports = Vec::new();
        while self.at_keyword("import") {
            imports.push(self.import_decl()?);
        }
        let mut types = Vec::new();
        while !self.at_eof() {
            if self.eat_punct(";") {
                continue;
            }
            self.modifiers()?;
            types.push(self.class_decl()?);
        }
        Ok(CompilationUnit {
            package,
            imports,
            types,
        })
    }

    fn qualified_name(&mut self) -> PResult<Vec<Ident>> {
        let mut parts = vec![self.expect_ident()?];
        while self.at_punct(".") && matches!(self.peek_kind_at(1), TokenKind::Ident(_)) {
            self.advance();
            parts.push(self.expect_ident()?);
        }
        Ok(parts)
    }

    fn import_decl(&mut self) -> PResult<ImportDecl> {
        let start = self.advance().span;
        let is_static = self.eat_keyword("static");
        let path = self.qualified_name()?;
        let wildcard = if self.eat_punct(".") {
            self.expect_punct("*")?;
            true
        } else {
            false
        };
        let end = self.expect_punct(";")?;
        Ok(ImportDecl {
            path,
            wildcard,
            is_static,
            span: start.to(end),
        })
    }

    fn modifiers(&mut self) -> PResult<()> {
        loop {
            self.reject_unsupported_prefix()?;
            match &self.peek().kind {
                TokenKind::Keyword(k) if MODIFIERS.contains(k) => {
                    self.advance();
                }
                _ => return Ok(()),
            }
        }
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let is_interface = if self.eat_keyword("class") {
            false
        } else if self.eat_keyword("interface") {
            true
        } else if self.at_keyword("enum") {
            return Err(self.unsupported("enum declarations"));
        } else {
            return Err(self.unexpected(&["`class`", "`interface`"]));
        };
        let name = self.expect_ident()?;
        if self.at_punct("<") {
            return Err(self.unsupported("generic type parameters"));
        }
        let mut extends = Vec::new();
        let mut implements = Vec::new();
        if self.eat_keyword("extends") {
            extends = self.type_list()?;
        }
        if self.eat_keyword("implements") {
            implements = self.type_list()?;
        }
        let members = self.class_body(&name.name)?;
        Ok(ClassDecl {
            synthetic: name.span.is_empty(),
            name,
            is_interface,
            extends,
            implements,
            members,
        })
    }

    fn type_list(&mut self) -> PResult<Vec<TypeExpr>> {
        let mut list = vec![self.parse_type()?];
        while self.eat_punct(",") {
            list.push(self.parse_type()?);
        }
        Ok(list)
    }

    fn class_body(&mut self, class_name: &str) -> PResult<Vec<Member>> {
        self.expect_punct("{")?;
        let mut members = Vec::new();
        while !self.at_punct("}") {
            if self.at_eof() {
                return Err(self.unexpected(&["`}`"]));
            }
            if self.eat_punct(";") {
                continue;
            }
            members.push(self.member(class_name)?);
        }
        self.advance();
        Ok(members)
    }

    fn member(&mut self, class_name: &str) -> PResult<Member> {
        self.enter()?;
        let result = self.member_inner(class_name);
        self.leave();
        result
    }

    fn member_inner(&mut self, class_name: &str) -> PResult<Member> {
        if self.at_punct("{") {
            return Ok(Member::Initializer(self.block()?));
        }
        if self.at_keyword("static") && matches!(self.peek_kind_at(1), TokenKind::Punct("{")) {
            self.advance();
            return Ok(Member::Initializer(self.block()?));
        }
        self.modifiers()?;
        if self.at_keyword("class") || self.at_keyword("interface") || self.at_keyword("enum") {
            return Ok(Member::Class(self.class_decl()?));
        }
        if self.at_punct("<") {
            return Err(self.unsupported("generic methods"));
        }
        if let TokenKind::Ident(name) = &self.peek().kind {
            if name == class_name && matches!(self.peek_kind_at(1), TokenKind::Punct("(")) {
                let name = self.expect_ident()?;
                let params = self.params()?;
                let throws = self.throws()?;
                let body = self.block()?;
                return Ok(Member::Constructor {
                    name,
                    params,
                    throws,
                    body,
                });
            }
        }
        let ty = self.parse_type_or_void()?;
        let name = self.expect_ident()?;
        if self.at_punct("(") {
            let params = self.params()?;
            let throws = self.throws()?;
            let body = if self.eat_punct(";") {
                None
            } else {
                Some(self.block()?)
            };
            return Ok(Member::Method {
                ret: ty,
                name,
                params,
                throws,
                body,
            });
        }
        if let TypeExpr::Void(span) = ty {
            return Err(SyntaxError::new(span, "field cannot have type `void`"));
        }
        let vars = self.declarators_from(name)?;
        self.expect_punct(";")?;
        Ok(Member::Field { ty, vars })
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.at_punct(")") {
            loop {
                self.reject_unsupported_prefix()?;
                self.eat_keyword("final");
                let ty = self.parse_type()?;
                if self.at_punct("...") {
                    return Err(self.unsupported("varargs parameters"));
                }
                let name = self.expect_ident()?;
                if self.at_punct("[") {
                    return Err(self.unsupported("array types"));
                }
                params.push(Param { ty, name });
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        Ok(params)
    }

    fn throws(&mut self) -> PResult<Vec<TypeExpr>> {
        if self.eat_keyword("throws") {
            self.type_list()
        } else {
            Ok(Vec::new())
        }
    }

    // ---- types ----

    fn parse_type_or_void(&mut self) -> PResult<TypeExpr> {
        if self.at_keyword("void") {
            return Ok(TypeExpr::Void(self.advance().span));
        }
        self.parse_type()
    }

    fn parse_type(&mut self) -> PResult<TypeExpr> {
        let ty = match &self.peek().kind {
            TokenKind::Keyword(k) if PRIMITIVES.contains(k) => {
                let name = k.to_string();
                TypeExpr::Primitive(name, self.advance().span)
            }
            TokenKind::Ident(_) => TypeExpr::Named(self.qualified_name()?),
            _ => return Err(self.unexpected(&["type"])),
        };
        self.reject_type_suffix()?;
        Ok(ty)
    }

    fn reject_type_suffix(&self) -> PResult<()> {
        if self.at_punct("<") {
            Err(self.unsupported("generic type arguments"))
        } else if self.at_punct("[") {
            Err(self.unsupported("array types"))
        } else {
            Ok(())
        }
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Block> {
        let start = self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.at_punct("}") {
            if self.at_eof() {
                return Err(self.unexpected(&["`}`"]));
            }
            stmts.push(self.statement()?);
        }
        let end = self.advance().span;
        Ok(Block {
            stmts,
            span: start.to(end),
        })
    }

    /// Parses statements up to end of input.
    #[cfg(test)]
    pub fn parse_statements(&mut self) -> PResult<Vec<Stmt>> {
        let mut stmts = Vec::new();
        while !self.at_eof() {
            stmts.push(self.statement()?);
        }
        Ok(stmts)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        self.enter()?;
        let result = self.statement_inner();
        self.leave();
        result
    }

    fn statement_inner(&mut self) -> PResult<Stmt> {
        self.reject_unsupported_prefix()?;
        let tok = self.peek().clone();
        match &tok.kind {
            TokenKind::Punct("{") => return Ok(Stmt::Block(self.block()?)),
            TokenKind::Punct(";") => {
                self.advance();
                return Ok(Stmt::Empty(tok.span));
            }
            TokenKind::Keyword(k) => match *k {
                "if" => {
                    self.advance();
                    let cond = self.paren_expr()?;
                    let then = Box::new(self.statement()?);
                    let otherwise = if self.eat_keyword("else") {
                        Some(Box::new(self.statement()?))
                    } else {
                        None
                    };
                    return Ok(Stmt::If {
                        cond,
                        then,
                        otherwise,
                    });
                }
                "while" => {
                    self.advance();
                    let cond = self.paren_expr()?;
                    let body = Box::new(self.statement()?);
                    return Ok(Stmt::While { cond, body });
                }
                "do" => {
                    self.advance();
                    let body = Box::new(self.statement()?);
                    if !self.eat_keyword("while") {
                        return Err(self.unexpected(&["`while`"]));
                    }
                    let cond = self.paren_expr()?;
                    self.expect_punct(";")?;
                    return Ok(Stmt::DoWhile { body, cond });
                }
                "for" => return self.for_statement(),
                "return" => {
                    self.advance();
                    let value = if self.at_punct(";") {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    let end = self.expect_punct(";")?;
                    return Ok(Stmt::Return(value, tok.span.to(end)));
                }
                "throw" => {
                    self.advance();
                    let value = self.expr()?;
                    self.expect_punct(";")?;
                    return Ok(Stmt::Throw(value));
                }
                "try" => return self.try_statement(),
                "break" | "continue" => {
                    self.advance();
                    if matches!(self.peek().kind, TokenKind::Ident(_)) {
                        return Err(self.unsupported("labelled jumps"));
                    }
                    let end = self.expect_punct(";")?;
                    let span = tok.span.to(end);
                    return Ok(if *k == "break" {
                        Stmt::Break(span)
                    } else {
                        Stmt::Continue(span)
                    });
                }
                "switch" => return Err(self.unsupported("switch statements")),
                "synchronized" => return Err(self.unsupported("synchronized blocks")),
                "class" | "interface" | "enum" | "abstract" => {
                    self.modifiers()?;
                    return Ok(Stmt::LocalClass(self.class_decl()?));
                }
                "final" => {
                    self.advance();
                    if self.at_keyword("class") {
                        return Ok(Stmt::LocalClass(self.class_decl()?));
                    }
                    return self.local_var(tok.span);
                }
                _ => {}
            },
            _ => {}
        }
        if self.looks_like_local_var()? {
            return self.local_var(tok.span);
        }
        let expr = self.expr()?;
        match expr.kind {
            ExprKind::Assign { .. }
            | ExprKind::Call { .. }
            | ExprKind::New { .. }
            | ExprKind::Unary { op: "++" | "--", .. }
            | ExprKind::Postfix { .. } => {}
            _ => {
                return Err(SyntaxError::new(expr.span, "not a statement"));
            }
        }
        self.expect_punct(";")?;
        Ok(Stmt::Expr(expr))
    }

    /// Decides whether the upcoming tokens start a local variable
    /// declaration, reporting unsupported generic/array declarations.
    fn looks_like_local_var(&self) -> PResult<bool> {
        match self.peek_kind_at(0) {
            TokenKind::Keyword(k) if PRIMITIVES.contains(k) => {
                return Ok(!matches!(self.peek_kind_at(1), TokenKind::Punct(".")))
            }
            TokenKind::Ident(_) => {}
            _ => return Ok(false),
        }
        let mut i = 1;
        while matches!(self.peek_kind_at(i), TokenKind::Punct("."))
            && matches!(self.peek_kind_at(i + 1), TokenKind::Ident(_))
        {
            i += 2;
        }
        match self.peek_kind_at(i) {
            TokenKind::Ident(_) => Ok(true),
            TokenKind::Punct("[") if matches!(self.peek_kind_at(i + 1), TokenKind::Punct("]")) => {
                Err(SyntaxError::new(self.tokens[self.pos + i].span, "array types are not supported"))
            }
            TokenKind::Punct("<") if self.generic_declaration_at(i) => Err(SyntaxError::new(
                self.tokens[self.pos + i].span,
                "generic type arguments are not supported",
            )),
            _ => Ok(false),
        }
    }

    fn generic_declaration_at(&self, lt: usize) -> bool {
        let mut i = lt + 1;
        let mut closed = false;
        loop {
            match self.peek_kind_at(i) {
                TokenKind::Ident(_) => {}
                TokenKind::Keyword(k) if PRIMITIVES.contains(k) || *k == "extends" || *k == "super" => {}
                TokenKind::Punct("." | "," | "?" | "<" | "[" | "]") => {}
                TokenKind::Punct(">" | ">>" | ">>>") => closed = true,
                _ => return false,
            }
            i += 1;
            if closed {
                // `>` directly followed by the declared name
                if matches!(self.peek_kind_at(i), TokenKind::Ident(_)) {
                    return true;
                }
                if !matches!(self.peek_kind_at(i), TokenKind::Punct(">" | ">>" | ">>>" | "[" | "]")) {
                    return false;
                }
            }
            if i > lt + 64 {
                return false;
            }
        }
    }

    fn local_var(&mut self, start: Span) -> PResult<Stmt> {
        let ty = self.parse_type()?;
        let name = self.expect_ident()?;
        let vars = self.declarators_from(name)?;
        let end = self.expect_punct(";")?;
        Ok(Stmt::LocalVar {
            ty,
            vars,
            span: start.to(end),
        })
    }

    fn declarators_from(&mut self, first: Ident) -> PResult<Vec<VarDeclarator>> {
        let mut vars = Vec::new();
        let mut name = first;
        loop {
            if self.at_punct("[") {
                return Err(self.unsupported("array types"));
            }
            let init = if self.eat_punct("=") {
                if self.at_punct("{") {
                    return Err(self.unsupported("array initializers"));
                }
                Some(self.expr()?)
            } else {
                None
            };
            vars.push(VarDeclarator { name, init });
            if !self.eat_punct(",") {
                return Ok(vars);
            }
            name = self.expect_ident()?;
        }
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect_punct("(")?;
        let e = self.expr()?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn for_statement(&mut self) -> PResult<Stmt> {
        self.advance();
        self.expect_punct("(")?;
        let mut init = None;
        if !self.at_punct(";") {
            let is_final = self.eat_keyword("final");
            if is_final || self.looks_like_local_var()? {
                let ty = self.parse_type()?;
                let name = self.expect_ident()?;
                if self.eat_punct(":") {
                    let iterable = self.expr()?;
                    self.expect_punct(")")?;
                    let body = Box::new(self.statement()?);
                    return Ok(Stmt::ForEach {
                        ty,
                        name,
                        iterable,
                        body,
                    });
                }
                init = Some(ForInit::Decl(ty, self.declarators_from(name)?));
            } else {
                init = Some(ForInit::Exprs(self.expr_list()?));
            }
        }
        self.expect_punct(";")?;
        let cond = if self.at_punct(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect_punct(";")?;
        let update = if self.at_punct(")") {
            Vec::new()
        } else {
            self.expr_list()?
        };
        self.expect_punct(")")?;
        let body = Box::new(self.statement()?);
        Ok(Stmt::For {
            init,
            cond,
            update,
            body,
        })
    }

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut list = vec![self.expr()?];
        while self.eat_punct(",") {
            list.push(self.expr()?);
        }
        Ok(list)
    }

    fn try_statement(&mut self) -> PResult<Stmt> {
        self.advance();
        if self.at_punct("(") {
            return Err(self.unsupported("try-with-resources statements"));
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.eat_keyword("catch") {
            self.expect_punct("(")?;
            self.eat_keyword("final");
            let ty = self.parse_type()?;
            if self.at_punct("|") {
                return Err(self.unsupported("multi-catch clauses"));
            }
            let name = self.expect_ident()?;
            self.expect_punct(")")?;
            let body = self.block()?;
            catches.push(CatchClause { ty, name, body });
        }
        let finally = if self.eat_keyword("finally") {
            Some(self.block()?)
        } else {
            None
        };
        if catches.is_empty() && finally.is_none() {
            return Err(self.unexpected(&["`catch`", "`finally`"]));
        }
        Ok(Stmt::Try {
            body,
            catches,
            finally,
        })
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let result = self.assignment();
        self.leave();
        result
    }

    fn assignment(&mut self) -> PResult<Expr> {
        let lhs = self.conditional()?;
        let op = match &self.peek().kind {
            TokenKind::Punct(p) if ASSIGN_OPS.contains(p) => *p,
            _ => return Ok(lhs),
        };
        if !matches!(lhs.kind, ExprKind::Name(_) | ExprKind::FieldAccess { .. }) {
            return Err(SyntaxError::new(lhs.span, "invalid assignment target"));
        }
        self.advance();
        let value = self.expr()?;
        Ok(Expr {
            span: lhs.span.to(value.span),
            kind: ExprKind::Assign {
                op,
                target: Box::new(lhs),
                value: Box::new(value),
            },
        })
    }

    fn conditional(&mut self) -> PResult<Expr> {
        let cond = self.binary(0)?;
        if !self.eat_punct("?") {
            return Ok(cond);
        }
        let then = self.expr()?;
        self.expect_punct(":")?;
        self.enter()?;
        let otherwise = self.conditional();
        self.leave();
        let otherwise = otherwise?;
        Ok(Expr {
            span: cond.span.to(otherwise.span),
            kind: ExprKind::Conditional {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: Box::new(otherwise),
            },
        })
    }

    fn binary(&mut self, level: usize) -> PResult<Expr> {
        if level == BINARY_LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        loop {
            let op = match &self.peek().kind {
                TokenKind::Punct(p) if BINARY_LEVELS[level].contains(p) => *p,
                TokenKind::Keyword("instanceof") if BINARY_LEVELS[level].contains(&"instanceof") => {
                    "instanceof"
                }
                _ => return Ok(lhs),
            };
            self.advance();
            if op == "instanceof" {
                let ty = self.parse_type()?;
                lhs = Expr {
                    span: lhs.span.to(ty.span()),
                    kind: ExprKind::InstanceOf {
                        operand: Box::new(lhs),
                        ty,
                    },
                };
                continue;
            }
            let rhs = self.binary(level + 1)?;
            lhs = Expr {
                span: lhs.span.to(rhs.span),
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let result = self.unary_inner();
        self.leave();
        result
    }

    fn unary_inner(&mut self) -> PResult<Expr> {
        let tok = self.peek().clone();
        if let TokenKind::Punct(op @ ("+" | "-" | "!" | "~" | "++" | "--")) = tok.kind {
            self.advance();
            let operand = self.unary()?;
            return Ok(Expr {
                span: tok.span.to(operand.span),
                kind: ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
            });
        }
        if self.at_punct("(") {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        self.postfix()
    }

    /// `(primitive) expr` or `(Name) expr` where the next token cannot
    /// continue a parenthesised expression.
    fn try_cast(&mut self) -> PResult<Option<Expr>> {
        let open = self.peek().span;
        let mut i = 1;
        let primitive = match self.peek_kind_at(1) {
            TokenKind::Keyword(k) if PRIMITIVES.contains(k) => true,
            TokenKind::Ident(_) => false,
            _ => return Ok(None),
        };
        if !primitive {
            while matches!(self.peek_kind_at(i + 1), TokenKind::Punct("."))
                && matches!(self.peek_kind_at(i + 2), TokenKind::Ident(_))
            {
                i += 2;
            }
        }
        if !matches!(self.peek_kind_at(i + 1), TokenKind::Punct(")")) {
            return Ok(None);
        }
        let follows = self.peek_kind_at(i + 2);
        let starts_operand = match follows {
            TokenKind::Ident(_)
            | TokenKind::Int
            | TokenKind::Long
            | TokenKind::Float
            | TokenKind::Double
            | TokenKind::Char
            | TokenKind::Str => true,
            TokenKind::Keyword(k) => matches!(*k, "this" | "new" | "true" | "false" | "null" | "super"),
            TokenKind::Punct(p) => {
                matches!(*p, "(" | "!" | "~") || (primitive && matches!(*p, "+" | "-" | "++" | "--"))
            }
            TokenKind::Eof => false,
        };
        if !starts_operand {
            return Ok(None);
        }
        self.advance();
        let ty = self.parse_type()?;
        self.expect_punct(")")?;
        let operand = self.unary()?;
        Ok(Some(Expr {
            span: open.to(operand.span),
            kind: ExprKind::Cast {
                ty,
                operand: Box::new(operand),
            },
        }))
    }

    fn args(&mut self) -> PResult<(Vec<Expr>, Span)> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if !self.at_punct(")") {
            loop {
                args.push(self.expr()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        let close = self.expect_punct(")")?;
        Ok((args, close))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.primary()?;
        loop {
            if self.eat_punct(".") {
                match &self.peek().kind {
                    TokenKind::Keyword("class") => return Err(self.unsupported("class literals")),
                    TokenKind::Keyword("new") => return Err(self.unsupported("qualified instance creations")),
                    TokenKind::Punct("<") => return Err(self.unsupported("explicit generic invocations")),
                    _ => {}
                }
                let name = self.expect_ident()?;
                if self.at_punct("(") {
                    let (args, close) = self.args()?;
                    expr = Expr {
                        span: expr.span.to(close),
                        kind: ExprKind::Call {
                            receiver: Some(Box::new(expr)),
                            name,
                            args,
                        },
                    };
                } else {
                    expr = Expr {
                        span: expr.span.to(name.span),
                        kind: ExprKind::FieldAccess {
                            target: Box::new(expr),
                            name,
                        },
                    };
                }
            } else if self.at_punct("++") || self.at_punct("--") {
                let tok = self.advance();
                let TokenKind::Punct(op) = tok.kind else { unreachable!() };
                expr = Expr {
                    span: expr.span.to(tok.span),
                    kind: ExprKind::Postfix {
                        op,
                        operand: Box::new(expr),
                    },
                };
            } else if self.at_punct("[") {
                return Err(self.unsupported("array accesses"));
            } else if self.at_punct("::") {
                return Err(self.unsupported("method references"));
            } else {
                return Ok(expr);
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let tok = self.peek().clone();
        let literal = |lit| Expr {
            kind: ExprKind::Literal(lit),
            span: tok.span,
        };
        let expr = match &tok.kind {
            TokenKind::Int => literal(Literal::Int),
            TokenKind::Long => literal(Literal::Long),
            TokenKind::Float => literal(Literal::Float),
            TokenKind::Double => literal(Literal::Double),
            TokenKind::Char => literal(Literal::Char),
            TokenKind::Str => literal(Literal::Str),
            TokenKind::Keyword("true" | "false") => literal(Literal::Boolean),
            TokenKind::Keyword("null") => literal(Literal::Null),
            TokenKind::Keyword("this") => Expr {
                kind: ExprKind::This,
                span: tok.span,
            },
            TokenKind::Keyword("super") => return Err(self.unsupported("`super` expressions")),
            TokenKind::Keyword("new") => return self.new_expr(),
            TokenKind::Punct("(") => {
                self.advance();
                if self.lambda_ahead() {
                    return Err(SyntaxError::new(tok.span, "lambda expressions are not supported"));
                }
                let inner = self.expr()?;
                let close = self.expect_punct(")")?;
                if self.at_punct("->") {
                    return Err(SyntaxError::new(tok.span, "lambda expressions are not supported"));
                }
                return Ok(Expr {
                    span: tok.span.to(close),
                    kind: ExprKind::Paren(Box::new(inner)),
                });
            }
            TokenKind::Ident(name) => {
                let ident = Ident {
                    name: name.clone(),
                    span: tok.span,
                };
                self.advance();
                if self.at_punct("->") {
                    return Err(SyntaxError::new(tok.span, "lambda expressions are not supported"));
                }
                if self.at_punct("(") {
                    let (args, close) = self.args()?;
                    return Ok(Expr {
                        span: tok.span.to(close),
                        kind: ExprKind::Call {
                            receiver: None,
                            name: ident,
                            args,
                        },
                    });
                }
                return Ok(Expr {
                    kind: ExprKind::Name(ident),
                    span: tok.span,
                });
            }
            TokenKind::Punct("@") => return Err(self.unsupported("annotations")),
            _ => return Err(self.unexpected(&["expression"])),
        };
        self.advance();
        Ok(expr)
    }

    /// `()` `->` or `(a, b) ->` after an opening parenthesis.
    fn lambda_ahead(&self) -> bool {
        if matches!(self.peek_kind_at(0), TokenKind::Punct(")")) {
            return matches!(self.peek_kind_at(1), TokenKind::Punct("->"));
        }
        let mut i = 0;
        loop {
            if !matches!(self.peek_kind_at(i), TokenKind::Ident(_)) {
                return false;
            }
            match self.peek_kind_at(i + 1) {
                TokenKind::Punct(",") => i += 2,
                TokenKind::Punct(")") => return matches!(self.peek_kind_at(i + 2), TokenKind::Punct("->")),
                _ => return false,
            }
        }
    }

    fn new_expr(&mut self) -> PResult<Expr> {
        let start = self.advance().span;
        let ty = match &self.peek().kind {
            TokenKind::Keyword(k) if PRIMITIVES.contains(k) => {
                return Err(SyntaxError::new(self.peek().span, "array types are not supported"))
            }
            _ => self.parse_type()?,
        };
        let (args, close) = self.args()?;
        if self.at_punct("{") {
            return Err(self.unsupported("anonymous classes"));
        }
        Ok(Expr {
            span: start.to(close),
            kind: ExprKind::New { ty, args },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn stmts(src: &str) -> PResult<Vec<Stmt>> {
        Parser::new(tokenize(src)?).parse_statements()
    }

    #[test]
    fn var_decl_with_call() {
        let s = stmts("Pattern p = Pattern.compile(regex);").unwrap();
        let Stmt::LocalVar { ty, vars, .. } = &s[0] else { panic!() };
        assert!(matches!(ty, TypeExpr::Named(parts) if parts[0].name == "Pattern"));
        let Some(Expr { kind: ExprKind::Call { name, args, receiver }, .. }) = &vars[0].init else {
            panic!()
        };
        assert_eq!(name.name, "compile");
        assert_eq!(args.len(), 1);
        assert!(receiver.is_some());
    }

    #[test]
    fn zero_arity_call_statement() {
        let s = stmts("m.find();").unwrap();
        let Stmt::Expr(Expr { kind: ExprKind::Call { args, .. }, .. }) = &s[0] else { panic!() };
        assert!(args.is_empty());
    }

    #[test]
    fn unsupported_constructs() {
        let cases = [
            ("List<String> xs = null;", "generic"),
            ("String[] xs = null;", "array"),
            ("x = list.get(0)[1];", "array"),
            ("Runnable r = () -> go();", "lambda"),
            ("f(x -> x);", "lambda"),
            ("@Override void f() {}", "annotation"),
            ("Object o = new ArrayList<>();", "generic"),
            ("switch (x) {}", "switch"),
        ];
        for (src, needle) in cases {
            let err = stmts(src).unwrap_err();
            assert!(err.message.contains(needle), "{src}: {}", err.message);
        }
    }

    #[test]
    fn comparison_is_not_generic() {
        let s = stmts("boolean b = a < c;").unwrap();
        assert_eq!(s.len(), 1);
        assert!(stmts("if (a < b) { x = 1; }").is_ok());
    }

    #[test]
    fn casts() {
        let s = stmts("int x = (int) y; Object o = (Foo) bar; int z = (a) + b;").unwrap();
        assert_eq!(s.len(), 3);
        let Stmt::LocalVar { vars, .. } = &s[2] else { panic!() };
        assert!(matches!(vars[0].init.as_ref().unwrap().kind, ExprKind::Binary { .. }));
    }

    #[test]
    fn control_flow() {
        let src = "for (int i = 0; i < n; i++) { if (i > 2) break; else continue; }\n\
                   while (x) y();\n\
                   try { a(); } catch (Exception e) { b(); } finally { c(); }\n\
                   for (String s : items) { use(s); }\n\
                   do { x++; } while (x < 3);\n\
                   return;";
        assert_eq!(stmts(src).unwrap().len(), 6);
    }

    #[test]
    fn errors_report_expected_tokens() {
        let err = stmts("int x = ;").unwrap_err();
        assert_eq!(err.span.start, 8);
        assert!(err.expected.contains(&"expression".to_string()));
        let err = stmts("{ foo();").unwrap_err();
        assert!(err.expected.contains(&"`}`".to_string()));
        assert!(stmts("x;").is_err());
    }

    #[test]
    fn compilation_unit() {
        let src = "package a.b;\nimport java.util.regex.Pattern;\nimport java.util.*;\nimport static java.lang.Math.max;\n\
                   public class A extends B implements C, D {\n  private int x = 1, y;\n  A(int x) { this.x = x; }\n  \
                   static { init(); }\n  public abstract String name();\n  class Inner {}\n}\ninterface I { void f(); }";
        let cu = Parser::new(tokenize(src).unwrap()).parse_compilation_unit().unwrap();
        assert_eq!(cu.imports.len(), 3);
        assert!(cu.imports[1].wildcard);
        assert!(cu.imports[2].is_static);
        assert_eq!(cu.types.len(), 2);
        assert_eq!(cu.types[0].members.len(), 5);
        assert!(cu.types[1].is_interface);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("x = {}1{};", "(".repeat(5000), ")".repeat(5000));
        let err = stmts(&src).unwrap_err();
        assert!(err.message.contains("too deep"));
    }
}
