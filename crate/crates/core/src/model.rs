//! In-memory code model of an analyzed project.
//!
//! The tree has the same shape as the XML interchange document: a project
//! holds packages, packages hold classes, classes hold attributes and
//! methods, and each method records its parameters, local variables and the
//! attribute accesses and method invocations found in its body. Every list
//! keeps source order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::diagnostic::Diagnostic;

/// Value used for an access whose type could not be resolved.
pub const UNKNOWN_TYPE: &str = "unknown";

/// Value used for an invocation whose receiver type could not be resolved.
pub const EXTERNAL_RECEIVER: &str = "external";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessLevel {
    Public,
    Private,
    Protected,
    PackagePrivate,
}

impl AccessLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            AccessLevel::Public => "public",
            AccessLevel::Private => "private",
            AccessLevel::Protected => "protected",
            AccessLevel::PackagePrivate => "package-private",
        }
    }
}

impl fmt::Display for AccessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAccessLevel(pub String);

impl fmt::Display for UnknownAccessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown access level `{}`", self.0)
    }
}

impl std::error::Error for UnknownAccessLevel {}

impl FromStr for AccessLevel {
    type Err = UnknownAccessLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "public" => Ok(AccessLevel::Public),
            "private" => Ok(AccessLevel::Private),
            "protected" => Ok(AccessLevel::Protected),
            "package-private" => Ok(AccessLevel::PackagePrivate),
            other => Err(UnknownAccessLevel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeModel {
    pub project_name: String,
    pub packages: Vec<PackageDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageDecl {
    /// Dotted package path. Empty for the default package.
    pub name: String,
    pub classes: Vec<ClassDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub access_level: AccessLevel,
    /// Simple name of the extended class, if the class has an `extends` clause.
    pub superclass: Option<String>,
    pub declared_package: String,
    pub attributes: Vec<AttributeDecl>,
    pub methods: Vec<MethodDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDecl {
    pub name: String,
    pub access_level: AccessLevel,
    pub declared_type: String,
}

/// A method or constructor. Constructors carry the class name as both their
/// name and their return type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub access_level: AccessLevel,
    pub return_type: String,
    pub declared_class: String,
    pub parameters: Vec<ParameterDecl>,
    pub local_variables: Vec<LocalVariableDecl>,
    pub attribute_accesses: Vec<AttributeAccess>,
    pub method_invocations: Vec<MethodInvocation>,
}

impl MethodDecl {
    pub fn parameter_types(&self) -> impl Iterator<Item = &str> {
        self.parameters.iter().map(|p| p.declared_type.as_str())
    }

    /// `name(T1, T2)`; distinguishes overloads within a class.
    pub fn signature(&self) -> String {
        let types: Vec<&str> = self.parameter_types().collect();
        format!("{}({})", self.name, types.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterDecl {
    pub name: String,
    pub declared_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVariableDecl {
    pub name: String,
    pub declared_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeAccess {
    pub name: String,
    /// Declared type of the accessed value, or [`UNKNOWN_TYPE`].
    pub resolved_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodInvocation {
    pub name: String,
    /// Declared type of the receiver, or [`EXTERNAL_RECEIVER`].
    pub accessed_in: String,
}

impl CodeModel {
    pub fn new(project_name: impl Into<String>) -> Self {
        CodeModel { project_name: project_name.into(), packages: Vec::new() }
    }

    pub fn classes(&self) -> impl Iterator<Item = (&PackageDecl, &ClassDecl)> {
        self.packages.iter().flat_map(|p| p.classes.iter().map(move |c| (p, c)))
    }

    pub fn class_count(&self) -> usize {
        self.packages.iter().map(|p| p.classes.len()).sum()
    }

    pub fn method_count(&self) -> usize {
        self.classes().map(|(_, c)| c.methods.len()).sum()
    }
}

/// Finds `class_name` inside the package named exactly `package`.
pub fn lookup_class<'m>(model: &'m CodeModel, package: &str, class_name: &str) -> Option<&'m ClassDecl> {
    model
        .packages
        .iter()
        .find(|p| p.name == package)?
        .classes
        .iter()
        .find(|c| c.name == class_name)
}

/// Checks every structural invariant of the model and reports one
/// diagnostic per violation. An empty result means the model is valid.
pub fn validate_model(model: &CodeModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut report = |path: &str, what: String| out.push(Diagnostic::error(format!("{path}: {what}")));

    let mut package_names = HashSet::new();
    for package in &model.packages {
        let ppath = display_package(&package.name);
        if !package_names.insert(package.name.as_str()) {
            report(&ppath, "duplicate package name".into());
        }

        let mut class_names = HashSet::new();
        for class in &package.classes {
            let cpath = format!("{ppath}.{}", class.name);
            if class.name.is_empty() {
                report(&cpath, "class name is empty".into());
            }
            if !class_names.insert(class.name.as_str()) {
                report(&cpath, "duplicate class name in package".into());
            }
            if class.declared_package != package.name {
                report(
                    &cpath,
                    format!(
                        "declared package `{}` does not match enclosing package `{}`",
                        class.declared_package, package.name
                    ),
                );
            }
            match class.superclass.as_deref() {
                Some("") => report(&cpath, "superclass is empty".into()),
                Some(s) if s == class.name => report(&cpath, "class extends itself".into()),
                _ => {}
            }

            let mut attribute_names = HashSet::new();
            for attr in &class.attributes {
                let apath = format!("{cpath}.{}", attr.name);
                if attr.name.is_empty() {
                    report(&apath, "attribute name is empty".into());
                }
                if attr.declared_type.is_empty() {
                    report(&apath, "attribute type is empty".into());
                }
                if !attribute_names.insert(attr.name.as_str()) {
                    report(&apath, "duplicate attribute name in class".into());
                }
            }

            for method in &class.methods {
                let mpath = format!("{cpath}.{}", method.signature());
                if method.name.is_empty() {
                    report(&mpath, "method name is empty".into());
                }
                if method.return_type.is_empty() {
                    report(&mpath, "return type is empty".into());
                }
                if method.declared_class != class.name {
                    report(
                        &mpath,
                        format!(
                            "declared class `{}` does not match enclosing class `{}`",
                            method.declared_class, class.name
                        ),
                    );
                }
                for p in &method.parameters {
                    if p.name.is_empty() || p.declared_type.is_empty() {
                        report(&mpath, "parameter with empty name or type".into());
                    }
                }
                for v in &method.local_variables {
                    if v.name.is_empty() || v.declared_type.is_empty() {
                        report(&mpath, "local variable with empty name or type".into());
                    }
                }
                let mut accessed = HashSet::new();
                for a in &method.attribute_accesses {
                    if a.name.is_empty() {
                        report(&mpath, "attribute access with empty name".into());
                    } else if !accessed.insert(a.name.as_str()) {
                        report(&mpath, format!("duplicate attribute access `{}`", a.name));
                    }
                }
                for i in &method.method_invocations {
                    if i.name.is_empty() {
                        report(&mpath, "method invocation with empty name".into());
                    }
                }
            }
        }
    }
    out
}

fn display_package(name: &str) -> String {
    if name.is_empty() {
        "(default package)".to_string()
    } else {
        name.to_string()
    }
}
