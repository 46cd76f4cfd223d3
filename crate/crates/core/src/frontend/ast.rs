use crate::span::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// A written type: a primitive, `void`, or a (possibly dotted) name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Primitive(String, Span),
    Void(Span),
    Named(Vec<Ident>),
}

impl TypeExpr {
    pub fn span(&self) -> Span {
        match self {
            TypeExpr::Primitive(_, s) | TypeExpr::Void(s) => *s,
            TypeExpr::Named(parts) => parts[0].span.to(parts[parts.len() - 1].span),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportDecl {
    pub path: Vec<Ident>,
    pub wildcard: bool,
    pub is_static: bool,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub package: Option<Vec<Ident>>,
    pub imports: Vec<ImportDecl>,
    pub types: Vec<ClassDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub name: Ident,
    pub is_interface: bool,
    pub extends: Vec<TypeExpr>,
    pub implements: Vec<TypeExpr>,
    pub members: Vec<Member>,
    /// Synthesised by snippet wrapping.
    pub synthetic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub ty: TypeExpr,
    pub name: Ident,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDeclarator {
    pub name: Ident,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Field {
        ty: TypeExpr,
        vars: Vec<VarDeclarator>,
    },
    Method {
        ret: TypeExpr,
        name: Ident,
        params: Vec<Param>,
        throws: Vec<TypeExpr>,
        body: Option<Block>,
    },
    Constructor {
        name: Ident,
        params: Vec<Param>,
        throws: Vec<TypeExpr>,
        body: Block,
    },
    Class(ClassDecl),
    Initializer(Block),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub ty: TypeExpr,
    pub name: Ident,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForInit {
    Decl(TypeExpr, Vec<VarDeclarator>),
    Exprs(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Block(Block),
    LocalVar {
        ty: TypeExpr,
        vars: Vec<VarDeclarator>,
        span: Span,
    },
    Expr(Expr),
    If {
        cond: Expr,
        then: Box<Stmt>,
        otherwise: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Expr,
    },
    For {
        init: Option<ForInit>,
        cond: Option<Expr>,
        update: Vec<Expr>,
        body: Box<Stmt>,
    },
    ForEach {
        ty: TypeExpr,
        name: Ident,
        iterable: Expr,
        body: Box<Stmt>,
    },
    Return(Option<Expr>, Span),
    Throw(Expr),
    Try {
        body: Block,
        catches: Vec<CatchClause>,
        finally: Option<Block>,
    },
    Break(Span),
    Continue(Span),
    Empty(Span),
    LocalClass(ClassDecl),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Literal {
    Int,
    Long,
    Float,
    Double,
    Boolean,
    Char,
    Str,
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Name(Ident),
    This,
    FieldAccess {
        target: Box<Expr>,
        name: Ident,
    },
    Call {
        receiver: Option<Box<Expr>>,
        name: Ident,
        args: Vec<Expr>,
    },
    New {
        ty: TypeExpr,
        args: Vec<Expr>,
    },
    Unary {
        op: &'static str,
        operand: Box<Expr>,
    },
    Postfix {
        op: &'static str,
        operand: Box<Expr>,
    },
    Binary {
        op: &'static str,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Assign {
        op: &'static str,
        target: Box<Expr>,
        value: Box<Expr>,
    },
    Conditional {
        cond: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    Cast {
        ty: TypeExpr,
        operand: Box<Expr>,
    },
    InstanceOf {
        operand: Box<Expr>,
        ty: TypeExpr,
    },
    Paren(Box<Expr>),
}
