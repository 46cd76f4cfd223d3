//! Single-pass local type inference.
//!
//! Every identifier occurrence that may need an import is recorded as a
//! [`Site`] carrying [`TypeRef`]s. A type is resolved when it is a literal
//! type, a primitive, written fully qualified, explicitly imported, or one of
//! the `java.lang` builtins; any other simple type name becomes a hole shared
//! by all occurrences of that name. Method and field results are always
//! holes.

use std::collections::BTreeMap;
use std::fmt;

use crate::span::{LineIndex, Span};

use super::ast::*;
use super::{FrontendError, JAVA_LANG_BUILTINS};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeRef {
    Resolved(String),
    Hole(u32),
}

impl TypeRef {
    pub fn is_hole(&self) -> bool {
        matches!(self, TypeRef::Hole(_))
    }

    pub fn fqn(&self) -> Option<&str> {
        match self {
            TypeRef::Resolved(f) => Some(f),
            TypeRef::Hole(_) => None,
        }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Resolved(fqn) => f.write_str(fqn),
            TypeRef::Hole(_) => f.write_str("?"),
        }
    }
}

/// An identifier occurrence relevant to resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Site {
    TypeName {
        ty: TypeRef,
        span: Span,
    },
    Variable {
        ty: TypeRef,
        span: Span,
    },
    Call {
        owner: TypeRef,
        name: String,
        args: Vec<TypeRef>,
        result: TypeRef,
        span: Span,
    },
    FieldAccess {
        owner: TypeRef,
        name: String,
        result: TypeRef,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub ty: TypeRef,
    pub span: Span,
    pub scope: usize,
}

#[derive(Debug, Clone, Default)]
struct Scope {
    parent: Option<usize>,
    vars: BTreeMap<String, usize>,
}

/// Lexical scopes mapping variable names to their declared types.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    scopes: Vec<Scope>,
    variables: Vec<Variable>,
}

impl SymbolTable {
    fn push(&mut self, parent: Option<usize>) -> usize {
        self.scopes.push(Scope {
            parent,
            vars: BTreeMap::new(),
        });
        self.scopes.len() - 1
    }

    fn declare(&mut self, scope: usize, name: &Ident, ty: TypeRef) {
        let id = self.variables.len();
        self.variables.push(Variable {
            name: name.name.clone(),
            ty,
            span: name.span,
            scope,
        });
        self.scopes[scope].vars.insert(name.name.clone(), id);
    }

    fn lookup(&self, mut scope: usize, name: &str) -> Option<&Variable> {
        loop {
            if let Some(&id) = self.scopes[scope].vars.get(name) {
                return Some(&self.variables[id]);
            }
            scope = self.scopes[scope].parent?;
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// The first declaration named `name`, in source order.
    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisError {
    pub span: Span,
    pub identifier: String,
    pub message: String,
}

impl AnalysisError {
    pub(crate) fn into_frontend(self, source: &str) -> FrontendError {
        let at = LineIndex::new(source).line_col(self.span.start);
        FrontendError::Analysis {
            line: at.line,
            col: at.col,
            identifier: self.identifier,
            message: self.message,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Inference {
    pub symbols: SymbolTable,
    pub sites: Vec<Site>,
    hole_names: Vec<Option<String>>,
}

impl Inference {
    /// Simple type name a hole stands for, if it came from a type name.
    pub fn hole_name(&self, hole: u32) -> Option<&str> {
        self.hole_names.get(hole as usize).and_then(|n| n.as_deref())
    }

    pub fn hole_count(&self) -> usize {
        self.hole_names.len()
    }
}

#[derive(Debug, Default)]
struct LocalClass {
    superclass: Option<TypeExpr>,
    methods: BTreeMap<String, TypeExpr>,
    fields: BTreeMap<String, TypeExpr>,
}

enum Receiver {
    Value(TypeRef),
    Type(TypeRef),
    Package(Vec<Ident>),
}

fn starts_upper(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

/// `Entry` in `Map.Entry` reads as a type; `RED` in `Color.RED` as a field.
fn looks_like_type(name: &str) -> bool {
    starts_upper(name) && name.chars().any(char::is_lowercase)
}

fn join(parts: &[Ident]) -> String {
    parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(".")
}

type IResult<T> = Result<T, AnalysisError>;

struct Infer {
    imports: BTreeMap<String, String>,
    classes: BTreeMap<String, LocalClass>,
    named_holes: BTreeMap<String, u32>,
    hole_names: Vec<Option<String>>,
    symbols: SymbolTable,
    sites: Vec<Site>,
    class_stack: Vec<String>,
}

pub fn infer(unit: &CompilationUnit) -> Result<Inference, AnalysisError> {
    let mut cx = Infer {
        imports: BTreeMap::new(),
        classes: BTreeMap::new(),
        named_holes: BTreeMap::new(),
        hole_names: Vec::new(),
        symbols: SymbolTable::default(),
        sites: Vec::new(),
        class_stack: Vec::new(),
    };
    for class in &unit.types {
        cx.collect_class(class);
    }
    let root = cx.symbols.push(None);
    for import in &unit.imports {
        if import.is_static || import.wildcard {
            continue;
        }
        let fqn = join(&import.path);
        let last = import.path.last().expect("non-empty import path");
        cx.imports.insert(last.name.clone(), fqn.clone());
        let span = import.path[0].span.to(last.span);
        cx.sites.push(Site::TypeName {
            ty: TypeRef::Resolved(fqn),
            span,
        });
    }
    for class in &unit.types {
        cx.class(class, root)?;
    }
    Ok(Inference {
        symbols: cx.symbols,
        sites: cx.sites,
        hole_names: cx.hole_names,
    })
}

impl Infer {
    fn collect_class(&mut self, class: &ClassDecl) {
        let mut info = LocalClass {
            superclass: if class.is_interface {
                None
            } else {
                class.extends.first().cloned()
            },
            ..LocalClass::default()
        };
        for member in &class.members {
            match member {
                Member::Field { ty, vars } => {
                    for v in vars {
                        info.fields.insert(v.name.name.clone(), ty.clone());
                    }
                }
                Member::Method { ret, name, .. } => {
                    info.methods.entry(name.name.clone()).or_insert_with(|| ret.clone());
                }
                Member::Class(inner) => self.collect_class(inner),
                Member::Constructor { .. } | Member::Initializer(_) => {}
            }
        }
        self.classes.insert(class.name.name.clone(), info);
    }

    fn fresh_hole(&mut self, name: Option<String>) -> TypeRef {
        let id = self.hole_names.len() as u32;
        self.hole_names.push(name);
        TypeRef::Hole(id)
    }

    fn named_hole(&mut self, key: &str, simple: &str) -> TypeRef {
        if let Some(&id) = self.named_holes.get(key) {
            return TypeRef::Hole(id);
        }
        let hole = self.fresh_hole(Some(simple.to_string()));
        if let TypeRef::Hole(id) = hole {
            self.named_holes.insert(key.to_string(), id);
        }
        hole
    }

    fn is_local(&self, ty: &TypeRef) -> Option<&LocalClass> {
        match ty {
            TypeRef::Resolved(name) => self.classes.get(name),
            TypeRef::Hole(_) => None,
        }
    }

    fn resolve_simple(&mut self, name: &str) -> TypeRef {
        if self.classes.contains_key(name) {
            TypeRef::Resolved(name.to_string())
        } else if let Some(fqn) = self.imports.get(name) {
            TypeRef::Resolved(fqn.clone())
        } else if JAVA_LANG_BUILTINS.contains(&name) {
            TypeRef::Resolved(format!("java.lang.{name}"))
        } else {
            self.named_hole(name, name)
        }
    }

    /// Resolves a written type. With `record`, the occurrence becomes a site.
    fn resolve_type(&mut self, ty: &TypeExpr, record: bool) -> TypeRef {
        let parts = match ty {
            TypeExpr::Primitive(p, _) => return TypeRef::Resolved(p.clone()),
            TypeExpr::Void(_) => return TypeRef::Resolved("void".into()),
            TypeExpr::Named(parts) => parts,
        };
        let first = &parts[0];
        let resolved = if parts.len() == 1 {
            self.resolve_simple(&first.name)
        } else if !starts_upper(&first.name) {
            TypeRef::Resolved(join(parts))
        } else {
            // Outer.Inner: resolve the outer type, then qualify
            let outer = self.resolve_simple(&first.name);
            if record {
                self.sites.push(Site::TypeName {
                    ty: outer.clone(),
                    span: first.span,
                });
            }
            let last = parts.last().expect("non-empty");
            match &outer {
                TypeRef::Resolved(_) if self.classes.contains_key(&last.name) => {
                    TypeRef::Resolved(last.name.clone())
                }
                TypeRef::Resolved(fqn) => {
                    let rest = join(&parts[1..]);
                    TypeRef::Resolved(format!("{fqn}.{rest}"))
                }
                TypeRef::Hole(_) => self.named_hole(&join(parts), &last.name),
            }
        };
        if record {
            let span = if parts.len() > 1 && starts_upper(&first.name) {
                parts.last().expect("non-empty").span
            } else {
                ty.span()
            };
            self.sites.push(Site::TypeName {
                ty: resolved.clone(),
                span,
            });
        }
        resolved
    }

    fn class(&mut self, class: &ClassDecl, parent: usize) -> IResult<()> {
        for ty in class.extends.iter().chain(&class.implements) {
            self.resolve_type(ty, true);
        }
        self.class_stack.push(class.name.name.clone());
        let scope = self.symbols.push(Some(parent));
        for member in &class.members {
            if let Member::Field { ty, vars } = member {
                let t = self.resolve_type(ty, true);
                for v in vars {
                    self.symbols.declare(scope, &v.name, t.clone());
                    self.sites.push(Site::Variable {
                        ty: t.clone(),
                        span: v.name.span,
                    });
                }
            }
        }
        for member in &class.members {
            match member {
                Member::Field { vars, .. } => {
                    for v in vars {
                        if let Some(init) = &v.init {
                            self.expr(init, scope)?;
                        }
                    }
                }
                Member::Method {
                    ret,
                    params,
                    throws,
                    body,
                    ..
                } => {
                    self.resolve_type(ret, true);
                    self.callable(params, throws, body.as_ref(), scope)?;
                }
                Member::Constructor {
                    params,
                    throws,
                    body,
                    ..
                } => self.callable(params, throws, Some(body), scope)?,
                Member::Class(inner) => self.class(inner, scope)?,
                Member::Initializer(block) => self.block(block, scope)?,
            }
        }
        self.class_stack.pop();
        Ok(())
    }

    fn callable(
        &mut self,
        params: &[Param],
        throws: &[TypeExpr],
        body: Option<&Block>,
        parent: usize,
    ) -> IResult<()> {
        let scope = self.symbols.push(Some(parent));
        for p in params {
            let t = self.resolve_type(&p.ty, true);
            self.symbols.declare(scope, &p.name, t.clone());
            self.sites.push(Site::Variable {
                ty: t,
                span: p.name.span,
            });
        }
        for t in throws {
            self.resolve_type(t, true);
        }
        if let Some(body) = body {
            self.block(body, scope)?;
        }
        Ok(())
    }

    fn block(&mut self, block: &Block, parent: usize) -> IResult<()> {
        let scope = self.symbols.push(Some(parent));
        for stmt in &block.stmts {
            self.stmt(stmt, scope)?;
        }
        Ok(())
    }

    fn declare_vars(&mut self, ty: &TypeExpr, vars: &[VarDeclarator], scope: usize) -> IResult<()> {
        let inferred = matches!(ty, TypeExpr::Named(p) if p.len() == 1 && p[0].name == "var")
            && vars.len() == 1
            && vars[0].init.is_some();
        let declared = if inferred {
            None
        } else {
            Some(self.resolve_type(ty, true))
        };
        for v in vars {
            let init = match &v.init {
                Some(e) => Some(self.expr(e, scope)?),
                None => None,
            };
            let t = match (&declared, init) {
                (Some(t), _) => t.clone(),
                (None, Some(t)) => t,
                (None, None) => unreachable!("`var` requires an initializer"),
            };
            self.symbols.declare(scope, &v.name, t.clone());
            self.sites.push(Site::Variable {
                ty: t,
                span: v.name.span,
            });
        }
        Ok(())
    }

    fn stmt(&mut self, stmt: &Stmt, scope: usize) -> IResult<()> {
        match stmt {
            Stmt::Block(b) => self.block(b, scope)?,
            Stmt::LocalVar { ty, vars, .. } => self.declare_vars(ty, vars, scope)?,
            Stmt::Expr(e) | Stmt::Throw(e) => {
                self.expr(e, scope)?;
            }
            Stmt::If {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond, scope)?;
                self.nested(then, scope)?;
                if let Some(o) = otherwise {
                    self.nested(o, scope)?;
                }
            }
            Stmt::While { cond, body } => {
                self.expr(cond, scope)?;
                self.nested(body, scope)?;
            }
            Stmt::DoWhile { body, cond } => {
                self.nested(body, scope)?;
                self.expr(cond, scope)?;
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                let inner = self.symbols.push(Some(scope));
                match init {
                    Some(ForInit::Decl(ty, vars)) => self.declare_vars(ty, vars, inner)?,
                    Some(ForInit::Exprs(es)) => {
                        for e in es {
                            self.expr(e, inner)?;
                        }
                    }
                    None => {}
                }
                if let Some(c) = cond {
                    self.expr(c, inner)?;
                }
                for u in update {
                    self.expr(u, inner)?;
                }
                self.nested(body, inner)?;
            }
            Stmt::ForEach {
                ty,
                name,
                iterable,
                body,
            } => {
                let t = self.resolve_type(ty, true);
                self.expr(iterable, scope)?;
                let inner = self.symbols.push(Some(scope));
                self.symbols.declare(inner, name, t.clone());
                self.sites.push(Site::Variable { ty: t, span: name.span });
                self.nested(body, inner)?;
            }
            Stmt::Return(value, _) => {
                if let Some(v) = value {
                    self.expr(v, scope)?;
                }
            }
            Stmt::Try {
                body,
                catches,
                finally,
            } => {
                self.block(body, scope)?;
                for c in catches {
                    let t = self.resolve_type(&c.ty, true);
                    let inner = self.symbols.push(Some(scope));
                    self.symbols.declare(inner, &c.name, t.clone());
                    self.sites.push(Site::Variable {
                        ty: t,
                        span: c.name.span,
                    });
                    self.block(&c.body, inner)?;
                }
                if let Some(f) = finally {
                    self.block(f, scope)?;
                }
            }
            Stmt::LocalClass(class) => {
                self.collect_class(class);
                self.class(class, scope)?;
            }
            Stmt::Break(_) | Stmt::Continue(_) | Stmt::Empty(_) => {}
        }
        Ok(())
    }

    /// A sub-statement gets its own scope so declarations do not leak.
    fn nested(&mut self, stmt: &Stmt, scope: usize) -> IResult<()> {
        let inner = self.symbols.push(Some(scope));
        self.stmt(stmt, inner)
    }

    fn current_class(&self) -> Option<&str> {
        self.class_stack.last().map(String::as_str)
    }

    fn expr(&mut self, e: &Expr, scope: usize) -> IResult<TypeRef> {
        match &e.kind {
            ExprKind::Literal(lit) => Ok(match lit {
                Literal::Str => TypeRef::Resolved("java.lang.String".into()),
                Literal::Int => TypeRef::Resolved("int".into()),
                Literal::Long => TypeRef::Resolved("long".into()),
                Literal::Float => TypeRef::Resolved("float".into()),
                Literal::Double => TypeRef::Resolved("double".into()),
                Literal::Boolean => TypeRef::Resolved("boolean".into()),
                Literal::Char => TypeRef::Resolved("char".into()),
                Literal::Null => self.fresh_hole(None),
            }),
            ExprKind::Name(_) | ExprKind::FieldAccess { .. } | ExprKind::Call { .. } | ExprKind::This => {
                match self.receiver(e, scope)? {
                    Receiver::Value(t) => Ok(t),
                    Receiver::Type(_) => Err(AnalysisError {
                        span: e.span,
                        identifier: String::new(),
                        message: "type name used as a value".into(),
                    }),
                    Receiver::Package(parts) => Err(undeclared(&parts[0])),
                }
            }
            ExprKind::New { ty, args } => {
                let t = self.resolve_type(ty, true);
                for a in args {
                    self.expr(a, scope)?;
                }
                Ok(t)
            }
            ExprKind::Unary { op, operand } => {
                let t = self.expr(operand, scope)?;
                Ok(if *op == "!" {
                    TypeRef::Resolved("boolean".into())
                } else {
                    t
                })
            }
            ExprKind::Postfix { operand, .. } => self.expr(operand, scope),
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.expr(lhs, scope)?;
                let r = self.expr(rhs, scope)?;
                Ok(self.binary_type(op, &l, &r))
            }
            ExprKind::Assign { target, value, .. } => {
                let t = self.expr(target, scope)?;
                self.expr(value, scope)?;
                Ok(t)
            }
            ExprKind::Conditional {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond, scope)?;
                let a = self.expr(then, scope)?;
                let b = self.expr(otherwise, scope)?;
                Ok(if a == b { a } else { self.fresh_hole(None) })
            }
            ExprKind::Cast { ty, operand } => {
                let t = self.resolve_type(ty, true);
                self.expr(operand, scope)?;
                Ok(t)
            }
            ExprKind::InstanceOf { operand, ty } => {
                self.expr(operand, scope)?;
                self.resolve_type(ty, true);
                Ok(TypeRef::Resolved("boolean".into()))
            }
            ExprKind::Paren(inner) => self.expr(inner, scope),
        }
    }

    fn binary_type(&mut self, op: &str, l: &TypeRef, r: &TypeRef) -> TypeRef {
        const NUMERIC: &[&str] = &["byte", "short", "char", "int", "long", "float", "double"];
        let boolean = TypeRef::Resolved("boolean".into());
        match op {
            "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" => return boolean,
            _ => {}
        }
        let string = "java.lang.String";
        if op == "+" && (l.fqn() == Some(string) || r.fqn() == Some(string)) {
            return TypeRef::Resolved(string.into());
        }
        match (l.fqn(), r.fqn()) {
            (Some("boolean"), Some("boolean")) if matches!(op, "&" | "|" | "^") => boolean,
            (Some(a), _) if matches!(op, "<<" | ">>" | ">>>") && NUMERIC.contains(&a) => {
                TypeRef::Resolved(if a == "long" { "long" } else { "int" }.into())
            }
            (Some(a), Some(b)) if NUMERIC.contains(&a) && NUMERIC.contains(&b) => {
                let rank = |t: &str| ["int", "long", "float", "double"].iter().position(|x| *x == t).unwrap_or(0);
                let widest = if rank(a) >= rank(b) { a } else { b };
                TypeRef::Resolved(if rank(widest) == 0 { "int" } else { widest }.into())
            }
            _ => self.fresh_hole(None),
        }
    }

    fn variable(&mut self, id: &Ident, scope: usize) -> Option<TypeRef> {
        let ty = self.symbols.lookup(scope, &id.name)?.ty.clone();
        self.sites.push(Site::Variable {
            ty: ty.clone(),
            span: id.span,
        });
        Some(ty)
    }

    fn receiver(&mut self, e: &Expr, scope: usize) -> IResult<Receiver> {
        match &e.kind {
            ExprKind::Name(id) => {
                if let Some(t) = self.variable(id, scope) {
                    Ok(Receiver::Value(t))
                } else if starts_upper(&id.name) {
                    let t = self.resolve_simple(&id.name);
                    self.sites.push(Site::TypeName {
                        ty: t.clone(),
                        span: id.span,
                    });
                    Ok(Receiver::Type(t))
                } else {
                    Ok(Receiver::Package(vec![id.clone()]))
                }
            }
            ExprKind::This => match self.current_class() {
                Some(c) => Ok(Receiver::Value(TypeRef::Resolved(c.to_string()))),
                None => Err(AnalysisError {
                    span: e.span,
                    identifier: "this".into(),
                    message: "`this` outside of a class".into(),
                }),
            },
            ExprKind::FieldAccess { target, name } => match self.receiver(target, scope)? {
                Receiver::Package(mut parts) => {
                    if starts_upper(&name.name) {
                        let fqn = format!("{}.{}", join(&parts), name.name);
                        let t = TypeRef::Resolved(fqn);
                        self.sites.push(Site::TypeName {
                            ty: t.clone(),
                            span: parts[0].span.to(name.span),
                        });
                        Ok(Receiver::Type(t))
                    } else {
                        parts.push(name.clone());
                        Ok(Receiver::Package(parts))
                    }
                }
                Receiver::Type(outer) if looks_like_type(&name.name) => {
                    let t = match &outer {
                        _ if self.classes.contains_key(&name.name) => TypeRef::Resolved(name.name.clone()),
                        TypeRef::Resolved(fqn) => TypeRef::Resolved(format!("{fqn}.{}", name.name)),
                        TypeRef::Hole(h) => {
                            let key = format!("#{h}.{}", name.name);
                            self.named_hole(&key, &name.name)
                        }
                    };
                    self.sites.push(Site::TypeName {
                        ty: t.clone(),
                        span: name.span,
                    });
                    Ok(Receiver::Type(t))
                }
                Receiver::Type(owner) | Receiver::Value(owner) => {
                    Ok(Receiver::Value(self.field_access(owner, name)))
                }
            },
            ExprKind::Call {
                receiver,
                name,
                args,
            } => Ok(Receiver::Value(self.call(receiver.as_deref(), name, args, scope)?)),
            _ => Ok(Receiver::Value(self.expr(e, scope)?)),
        }
    }

    /// Owner to use for a member missing from a local class: its superclass
    /// when it has one, otherwise an unknown owner.
    fn inherited_owner(&mut self, class: &str) -> TypeRef {
        let sup = self.classes.get(class).and_then(|c| c.superclass.clone());
        match sup {
            Some(ty) => self.resolve_type(&ty, false),
            None => self.fresh_hole(None),
        }
    }

    fn field_access(&mut self, owner: TypeRef, name: &Ident) -> TypeRef {
        let local = self.is_local(&owner).map(|c| c.fields.get(&name.name).cloned());
        let owner = match (local, &owner) {
            (Some(Some(ty)), _) => return self.resolve_type(&ty, false),
            (Some(None), TypeRef::Resolved(class)) => {
                let class = class.clone();
                self.inherited_owner(&class)
            }
            _ => owner,
        };
        let result = self.fresh_hole(None);
        self.sites.push(Site::FieldAccess {
            owner,
            name: name.name.clone(),
            result: result.clone(),
            span: name.span,
        });
        result
    }

    fn call(
        &mut self,
        receiver: Option<&Expr>,
        name: &Ident,
        args: &[Expr],
        scope: usize,
    ) -> IResult<TypeRef> {
        let owner = match receiver {
            None => TypeRef::Resolved(self.enclosing_method_owner(&name.name)),
            Some(r) => match self.receiver(r, scope)? {
                Receiver::Value(t) | Receiver::Type(t) => t,
                Receiver::Package(parts) => return Err(undeclared(&parts[0])),
            },
        };
        let mut arg_types = Vec::with_capacity(args.len());
        for a in args {
            arg_types.push(self.expr(a, scope)?);
        }
        let local = self.is_local(&owner).map(|c| c.methods.get(&name.name).cloned());
        let owner = match (local, &owner) {
            (Some(Some(ret)), _) => return Ok(self.resolve_type(&ret, false)),
            (Some(None), TypeRef::Resolved(class)) => {
                let class = class.clone();
                self.inherited_owner(&class)
            }
            _ => owner,
        };
        let result = self.fresh_hole(None);
        self.sites.push(Site::Call {
            owner,
            name: name.name.clone(),
            args: arg_types,
            result: result.clone(),
            span: name.span,
        });
        Ok(result)
    }

    /// The innermost enclosing class declaring `method`, or the innermost
    /// class when none does.
    fn enclosing_method_owner(&self, method: &str) -> String {
        self.class_stack
            .iter()
            .rev()
            .find(|c| self.classes.get(*c).is_some_and(|info| info.methods.contains_key(method)))
            .or(self.class_stack.last())
            .cloned()
            .unwrap_or_default()
    }
}

fn undeclared(id: &Ident) -> AnalysisError {
    AnalysisError {
        span: id.span,
        identifier: id.name.clone(),
        message: format!("cannot find variable `{}`", id.name),
    }
}
