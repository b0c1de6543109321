//! Syntax tree for the supported Java subset.
//!
//! Method bodies keep only what dependency extraction needs: declarations,
//! expressions, member-access chains, calls and the control-flow statements
//! that contain them. Constructs outside the subset (lambdas, anonymous
//! class bodies, nested types) are dropped by the parser with a warning.

use std::path::PathBuf;

use crate::model::AccessLevel;

#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub file: PathBuf,
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub classes: Vec<ClassNode>,
}

impl CompilationUnit {
    pub fn package_name(&self) -> &str {
        self.package.as_deref().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
}

impl Import {
    /// The simple name a single-type import brings into scope.
    pub fn simple_name(&self) -> Option<&str> {
        if self.wildcard {
            None
        } else {
            self.path.rsplit('.').next()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassNode {
    pub name: String,
    pub access: AccessLevel,
    pub superclass: Option<String>,
    pub fields: Vec<FieldNode>,
    pub methods: Vec<MethodNode>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldNode {
    pub name: String,
    pub access: AccessLevel,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodNode {
    pub name: String,
    pub access: AccessLevel,
    pub return_type: String,
    pub is_constructor: bool,
    pub params: Vec<Param>,
    /// `None` for abstract and native methods.
    pub body: Option<Block>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

pub type Block = Vec<Stmt>;

#[derive(Debug, Clone, PartialEq)]
pub struct Declarator {
    pub name: String,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchCase {
    pub labels: Vec<Expr>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub param: Param,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    LocalVar { ty: String, declarators: Vec<Declarator> },
    Expr(Expr),
    Block(Block),
    If { cond: Expr, then: Box<Stmt>, otherwise: Option<Box<Stmt>> },
    While { cond: Expr, body: Box<Stmt> },
    DoWhile { body: Box<Stmt>, cond: Expr },
    For { init: Vec<Stmt>, cond: Option<Expr>, update: Vec<Expr>, body: Box<Stmt> },
    ForEach { var: Param, iterable: Expr, body: Box<Stmt> },
    Return(Option<Expr>),
    Throw(Expr),
    Try { resources: Vec<Stmt>, body: Block, catches: Vec<CatchClause>, finally: Option<Block> },
    Switch { selector: Expr, cases: Vec<SwitchCase> },
    Synchronized { lock: Expr, body: Block },
    Labeled { label: String, body: Box<Stmt> },
    Assert { cond: Expr, message: Option<Expr> },
    Break,
    Continue,
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String),
    This,
    Super,
    Literal(String),
    FieldAccess { target: Box<Expr>, name: String },
    Call { target: Option<Box<Expr>>, name: String, args: Vec<Expr> },
    New { ty: String, args: Vec<Expr> },
    /// `this(...)` or `super(...)` at the start of a constructor.
    ConstructorCall(Vec<Expr>),
    NewArray { ty: String, dims: Vec<Expr>, init: Option<Vec<Expr>> },
    ArrayInit(Vec<Expr>),
    Index { target: Box<Expr>, index: Box<Expr> },
    Unary { op: String, operand: Box<Expr> },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr> },
    Assign { op: String, target: Box<Expr>, value: Box<Expr> },
    Conditional { cond: Box<Expr>, then: Box<Expr>, otherwise: Box<Expr> },
    Cast { ty: String, operand: Box<Expr> },
    InstanceOf { operand: Box<Expr>, ty: String },
    ClassLiteral(String),
    MethodRef { target: Box<Expr>, name: String },
    /// A skipped construct, such as a lambda.
    Unsupported,
}
