//! Dependency extraction over method bodies.
//!
//! For every member-access chain in a body:
//!
//! * a simple-name receiver of a call or field selection is an attribute
//!   access, unless it names a type;
//! * a selected field name that is not itself called is an attribute access;
//! * every called method name is an invocation, in source order, with
//!   duplicates kept.
//!
//! Bare reads and writes of the enclosing class's fields are accesses too.
//! Bare names that resolve to locals or parameters are not, unless they are
//! receivers. Accesses are deduplicated by name, keeping the first.

use std::collections::{HashMap, HashSet};

use crate::frontend::ast::{Block, Expr, Stmt};
use crate::frontend::parser::simple_type_name;
use crate::model::{AttributeAccess, LocalVariableDecl, MethodInvocation, EXTERNAL_RECEIVER, UNKNOWN_TYPE};

/// Member names and types of one class, used to resolve chained selections.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassShape {
    pub superclass: Option<String>,
    pub fields: Vec<(String, String)>,
    /// `(name, return type)` for non-constructor methods.
    pub methods: Vec<(String, String)>,
}

/// Shapes of every class in the project, keyed by simple class name.
#[derive(Debug, Clone, Default)]
pub struct TypeIndex {
    classes: HashMap<String, ClassShape>,
}

impl TypeIndex {
    /// Adds a class; the first class registered under a simple name wins.
    pub fn insert(&mut self, name: impl Into<String>, shape: ClassShape) {
        self.classes.entry(name.into()).or_insert(shape);
    }

    pub fn get(&self, name: &str) -> Option<&ClassShape> {
        self.classes.get(name)
    }

    /// Walks `class` and its in-project ancestors, nearest first.
    fn lineage<'s>(&'s self, class: &str) -> impl Iterator<Item = &'s ClassShape> + 's {
        let mut seen = HashSet::new();
        let mut next = Some(class.to_string());
        std::iter::from_fn(move || {
            let name = next.take()?;
            if !seen.insert(name.clone()) {
                return None;
            }
            let shape = self.classes.get(&name)?;
            next = shape.superclass.clone();
            Some(shape)
        })
    }

    pub fn field_type(&self, class: &str, field: &str) -> Option<&str> {
        self.lineage(class)
            .find_map(|s| s.fields.iter().find(|(n, _)| n == field))
            .map(|(_, t)| t.as_str())
    }

    pub fn return_type(&self, class: &str, method: &str) -> Option<&str> {
        self.lineage(class)
            .find_map(|s| s.methods.iter().find(|(n, _)| n == method))
            .map(|(_, t)| t.as_str())
    }

    /// Own fields followed by inherited ones; a subclass field hides an
    /// ancestor field of the same name.
    pub fn visible_fields(&self, class: &str) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        for shape in self.lineage(class) {
            for (name, ty) in &shape.fields {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), ty.clone()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    Local,
    Parameter,
    Field,
}

/// Names visible inside one method body. Lookup order is locals, then
/// parameters, then fields.
#[derive(Debug, Clone)]
pub struct ResolutionContext<'a> {
    class_name: String,
    superclass: Option<String>,
    fields: HashMap<String, String>,
    parameters: HashMap<String, String>,
    locals: HashMap<String, String>,
    known_types: HashSet<String>,
    index: Option<&'a TypeIndex>,
}

impl<'a> ResolutionContext<'a> {
    pub fn new(class_name: impl Into<String>) -> Self {
        ResolutionContext {
            class_name: class_name.into(),
            superclass: None,
            fields: HashMap::new(),
            parameters: HashMap::new(),
            locals: HashMap::new(),
            known_types: HashSet::new(),
            index: None,
        }
    }

    pub fn with_superclass(mut self, superclass: Option<String>) -> Self {
        self.superclass = superclass;
        self
    }

    pub fn with_index(mut self, index: &'a TypeIndex) -> Self {
        self.index = Some(index);
        self
    }

    pub fn add_field(&mut self, name: impl Into<String>, ty: impl Into<String>) {
        self.fields.entry(name.into()).or_insert_with(|| ty.into());
    }

    pub fn add_parameter(&mut self, name: impl Into<String>, ty: impl Into<String>) {
        self.parameters.insert(name.into(), ty.into());
    }

    pub fn add_local(&mut self, name: impl Into<String>, ty: impl Into<String>) {
        self.locals.insert(name.into(), ty.into());
    }

    pub fn add_known_type(&mut self, name: impl Into<String>) {
        self.known_types.insert(name.into());
    }

    pub fn is_known_type(&self, name: &str) -> bool {
        self.known_types.contains(name) || name == self.class_name
    }

    fn lookup(&self, name: &str) -> Option<(&str, Scope)> {
        if let Some(t) = self.locals.get(name) {
            return Some((t, Scope::Local));
        }
        if let Some(t) = self.parameters.get(name) {
            return Some((t, Scope::Parameter));
        }
        self.fields.get(name).map(|t| (t.as_str(), Scope::Field))
    }

    /// Type of `field` selected on a value of type `owner`.
    fn field_type(&self, owner: &str, field: &str) -> Option<String> {
        let owner = simple_type_name(owner);
        if owner == self.class_name {
            if let Some(t) = self.fields.get(field) {
                return Some(t.clone());
            }
        }
        self.index?.field_type(owner, field).map(str::to_string)
    }

    fn return_type(&self, owner: &str, method: &str) -> Option<String> {
        self.index?.return_type(simple_type_name(owner), method).map(str::to_string)
    }
}

/// What one method body depends on.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dependencies {
    pub local_variables: Vec<LocalVariableDecl>,
    pub attribute_accesses: Vec<AttributeAccess>,
    pub method_invocations: Vec<MethodInvocation>,
}

/// Extracts local declarations, attribute accesses and method invocations
/// from `body`. Locals declared in the body are added to `ctx` as the walk
/// reaches them.
pub fn extract_dependencies(body: &Block, ctx: &mut ResolutionContext<'_>) -> Dependencies {
    let mut walker = Walker { ctx, out: Dependencies::default(), accessed: HashSet::new() };
    walker.block(body);
    walker.out
}

struct Walker<'c, 'a> {
    ctx: &'c mut ResolutionContext<'a>,
    out: Dependencies,
    accessed: HashSet<String>,
}

impl Walker<'_, '_> {
    fn access(&mut self, name: &str, ty: Option<&str>) {
        if self.accessed.insert(name.to_string()) {
            self.out.attribute_accesses.push(AttributeAccess {
                name: name.to_string(),
                resolved_type: ty.unwrap_or(UNKNOWN_TYPE).to_string(),
            });
        }
    }

    fn invocation(&mut self, name: &str, receiver: Option<&str>) {
        self.out.method_invocations.push(MethodInvocation {
            name: name.to_string(),
            accessed_in: receiver.unwrap_or(EXTERNAL_RECEIVER).to_string(),
        });
    }

    fn declare(&mut self, name: &str, ty: &str) {
        self.ctx.add_local(name, ty);
        let decl = LocalVariableDecl { name: name.to_string(), declared_type: ty.to_string() };
        if !self.out.local_variables.contains(&decl) {
            self.out.local_variables.push(decl);
        }
    }

    fn block(&mut self, block: &Block) {
        for stmt in block {
            self.stmt(stmt);
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::LocalVar { ty, declarators } => {
                for d in declarators {
                    if let Some(init) = &d.init {
                        self.value(init);
                    }
                    self.declare(&d.name, ty);
                }
            }
            Stmt::Expr(e) | Stmt::Throw(e) => self.value(e),
            Stmt::Block(b) => self.block(b),
            Stmt::If { cond, then, otherwise } => {
                self.value(cond);
                self.stmt(then);
                if let Some(o) = otherwise {
                    self.stmt(o);
                }
            }
            Stmt::While { cond, body } => {
                self.value(cond);
                self.stmt(body);
            }
            Stmt::DoWhile { body, cond } => {
                self.stmt(body);
                self.value(cond);
            }
            Stmt::For { init, cond, update, body } => {
                for s in init {
                    self.stmt(s);
                }
                if let Some(c) = cond {
                    self.value(c);
                }
                for u in update {
                    self.value(u);
                }
                self.stmt(body);
            }
            Stmt::ForEach { var, iterable, body } => {
                self.value(iterable);
                self.declare(&var.name, &var.ty);
                self.stmt(body);
            }
            Stmt::Return(e) => {
                if let Some(e) = e {
                    self.value(e);
                }
            }
            Stmt::Try { resources, body, catches, finally } => {
                for r in resources {
                    self.stmt(r);
                }
                self.block(body);
                for c in catches {
                    // exception parameters shadow but are not recorded as locals
                    self.ctx.add_local(&c.param.name, &c.param.ty);
                    self.block(&c.body);
                }
                if let Some(f) = finally {
                    self.block(f);
                }
            }
            Stmt::Switch { selector, cases } => {
                self.value(selector);
                for case in cases {
                    for label in &case.labels {
                        self.value(label);
                    }
                    self.block(&case.body);
                }
            }
            Stmt::Synchronized { lock, body } => {
                self.value(lock);
                self.block(body);
            }
            Stmt::Labeled { body, .. } => self.stmt(body),
            Stmt::Assert { cond, message } => {
                self.value(cond);
                if let Some(m) = message {
                    self.value(m);
                }
            }
            Stmt::Break | Stmt::Continue | Stmt::Empty => {}
        }
    }

    fn value(&mut self, e: &Expr) {
        self.eval(e, false);
    }

    /// Walks `e`, recording dependencies, and returns its static type when
    /// it can be determined.
    fn eval(&mut self, e: &Expr, as_receiver: bool) -> Option<String> {
        match e {
            Expr::Name(n) => {
                if let Some((ty, scope)) = self.ctx.lookup(n) {
                    let ty = ty.to_string();
                    if as_receiver || scope == Scope::Field {
                        self.access(n, Some(&ty));
                    }
                    Some(ty)
                } else if self.ctx.is_known_type(n) {
                    Some(n.clone())
                } else {
                    if as_receiver {
                        self.access(n, None);
                    }
                    None
                }
            }
            Expr::This => Some(self.ctx.class_name.clone()),
            Expr::Super => self.ctx.superclass.clone(),
            Expr::Literal(text) => text.starts_with('"').then(|| "String".to_string()),
            Expr::FieldAccess { target, name } => {
                let owner = self.eval(target, true);
                let ty = owner.and_then(|o| self.ctx.field_type(&o, name));
                self.access(name, ty.as_deref());
                ty
            }
            Expr::Call { target, name, args } => {
                let receiver = match target {
                    Some(t) => self.eval(t, true),
                    None => Some(self.ctx.class_name.clone()),
                };
                self.invocation(name, receiver.as_deref());
                for a in args {
                    self.value(a);
                }
                receiver.and_then(|r| self.ctx.return_type(&r, name))
            }
            Expr::ConstructorCall(args) => {
                for a in args {
                    self.value(a);
                }
                None
            }
            Expr::New { ty, args } => {
                for a in args {
                    self.value(a);
                }
                Some(ty.clone())
            }
            Expr::NewArray { dims, init, .. } => {
                for d in dims {
                    self.value(d);
                }
                for i in init.iter().flatten() {
                    self.value(i);
                }
                None
            }
            Expr::ArrayInit(items) => {
                for i in items {
                    self.value(i);
                }
                None
            }
            Expr::Index { target, index } => {
                let array = self.eval(target, false);
                self.value(index);
                array.and_then(|t| t.strip_suffix("[]").map(str::to_string))
            }
            Expr::Unary { operand, .. } => {
                self.value(operand);
                None
            }
            Expr::Binary { op, lhs, rhs } => {
                let l = self.eval(lhs, false);
                let r = self.eval(rhs, false);
                let is_string = |t: &Option<String>| t.as_deref() == Some("String");
                (op == "+" && (is_string(&l) || is_string(&r))).then(|| "String".to_string())
            }
            Expr::Assign { target, value, .. } => {
                let ty = self.eval(target, false);
                self.value(value);
                ty
            }
            Expr::Conditional { cond, then, otherwise } => {
                self.value(cond);
                let ty = self.eval(then, false);
                self.value(otherwise);
                ty
            }
            Expr::Cast { ty, operand } => {
                self.value(operand);
                Some(ty.clone())
            }
            Expr::InstanceOf { operand, .. } => {
                self.value(operand);
                Some("boolean".to_string())
            }
            Expr::MethodRef { target, .. } => {
                self.value(target);
                None
            }
            Expr::ClassLiteral(_) | Expr::Unsupported => None,
        }
    }
}
