//! Rapid summary messages: one templated sentence group per facet of a class
//! or method.
//!
//! Class messages come in this order: name, access level, package,
//! inheritance, attributes, methods. Method messages: name, access level,
//! return type, class, parameters, local variables, attribute accesses,
//! invocations. A message whose underlying list is empty is omitted, as is
//! the inheritance message for a class without a superclass.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{ClassDecl, MethodDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageKind {
    ClassName,
    ClassAccessLevel,
    ClassPackage,
    ClassInheritance,
    ClassAttributes,
    ClassMethods,
    MethodName,
    MethodAccessLevel,
    MethodReturnType,
    MethodClass,
    MethodParameters,
    MethodVariables,
    MethodAccesses,
    MethodInvocations,
}

impl MessageKind {
    pub const CLASS_ORDER: [MessageKind; 6] = [
        MessageKind::ClassName,
        MessageKind::ClassAccessLevel,
        MessageKind::ClassPackage,
        MessageKind::ClassInheritance,
        MessageKind::ClassAttributes,
        MessageKind::ClassMethods,
    ];

    pub const METHOD_ORDER: [MessageKind; 8] = [
        MessageKind::MethodName,
        MessageKind::MethodAccessLevel,
        MessageKind::MethodReturnType,
        MessageKind::MethodClass,
        MessageKind::MethodParameters,
        MessageKind::MethodVariables,
        MessageKind::MethodAccesses,
        MessageKind::MethodInvocations,
    ];

    pub fn is_class_kind(self) -> bool {
        Self::CLASS_ORDER.contains(&self)
    }

    pub fn label(self) -> &'static str {
        match self {
            MessageKind::ClassName | MessageKind::MethodName => "name",
            MessageKind::ClassAccessLevel | MessageKind::MethodAccessLevel => "access level",
            MessageKind::ClassPackage => "package",
            MessageKind::ClassInheritance => "inheritance",
            MessageKind::ClassAttributes => "attribute",
            MessageKind::ClassMethods => "method",
            MessageKind::MethodReturnType => "return type",
            MessageKind::MethodClass => "class",
            MessageKind::MethodParameters => "parameter",
            MessageKind::MethodVariables => "variable",
            MessageKind::MethodAccesses => "access",
            MessageKind::MethodInvocations => "invocation",
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RapidSummaryMessage {
    pub kind: MessageKind,
    pub text: String,
}

impl RapidSummaryMessage {
    fn new(kind: MessageKind, text: String) -> Self {
        RapidSummaryMessage { kind, text }
    }
}

/// Display normalization for type names and identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderingConfig {
    /// Type text → display text. Unmapped types render verbatim.
    pub type_display_map: BTreeMap<String, String>,
    /// Render `ALL_CAPS` identifiers in lower case.
    pub lowercase_constant_identifiers: bool,
}

impl Default for RenderingConfig {
    fn default() -> Self {
        let type_display_map = [("String", "string"), ("Object", "object"), ("char", "character")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        RenderingConfig { type_display_map, lowercase_constant_identifiers: true }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderConfigError {
    #[error("line {line}: expected `key = value`")]
    MissingEquals { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{value}` is not a boolean")]
    NotABoolean { line: usize, value: String },
}

impl RenderingConfig {
    /// Applies overrides from `key = value` text on top of the defaults.
    ///
    /// ```text
    /// # comment
    /// lowercase_constant_identifiers = false
    /// type.int = integer
    /// type.String =          # empty value removes a mapping
    /// ```
    pub fn with_overrides(mut self, text: &str) -> Result<Self, RenderConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(RenderConfigError::MissingEquals { line })?;
            let (key, value) = (key.trim(), value.trim());
            if key == "lowercase_constant_identifiers" {
                self.lowercase_constant_identifiers = match value {
                    "true" | "on" | "yes" => true,
                    "false" | "off" | "no" => false,
                    _ => return Err(RenderConfigError::NotABoolean { line, value: value.to_string() }),
                };
            } else if let Some(ty) = key.strip_prefix("type.").filter(|t| !t.is_empty()) {
                if value.is_empty() {
                    self.type_display_map.remove(ty);
                } else {
                    self.type_display_map.insert(ty.to_string(), value.to_string());
                }
            } else {
                return Err(RenderConfigError::UnknownKey { line, key: key.to_string() });
            }
        }
        Ok(self)
    }
}

/// Joins names as English: `a`, `a and b`, `a, b and c`.
///
/// # Panics
///
/// If `names` is empty; callers omit the message instead.
pub fn render_name_list<S: AsRef<str>>(names: &[S]) -> String {
    assert!(!names.is_empty(), "render_name_list requires at least one name");
    match names {
        [only] => only.as_ref().to_string(),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(AsRef::as_ref).collect();
            format!("{} and {}", head.join(", "), last.as_ref())
        }
        [] => unreachable!(),
    }
}

fn is_constant_style(name: &str) -> bool {
    name.chars().count() >= 2
        && name.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
        && name.chars().any(|c| c.is_ascii_uppercase())
}

pub fn render_identifier(name: &str, cfg: &RenderingConfig) -> String {
    if cfg.lowercase_constant_identifiers && is_constant_style(name) {
        name.to_ascii_lowercase()
    } else {
        name.to_string()
    }
}

pub fn render_type(type_text: &str, cfg: &RenderingConfig) -> String {
    cfg.type_display_map.get(type_text).cloned().unwrap_or_else(|| type_text.to_string())
}

fn package_display(package: &str) -> &str {
    if package.is_empty() {
        "the default package"
    } else {
        package
    }
}

/// `head` is `(singular, plural)`; the choice follows the list length.
fn list_sentence(prefix: &str, head: (&str, &str), items: &[String]) -> String {
    let noun = if items.len() == 1 { head.0 } else { head.1 };
    format!("{prefix} {noun}: {}.", render_name_list(items))
}

pub fn class_messages(class: &ClassDecl, cfg: &RenderingConfig) -> Vec<RapidSummaryMessage> {
    use MessageKind::*;
    let mut out = vec![
        RapidSummaryMessage::new(ClassName, format!("The name of this class is {}.", class.name)),
        RapidSummaryMessage::new(ClassAccessLevel, format!("The access level for this class is {}.", class.access_level)),
        RapidSummaryMessage::new(
            ClassPackage,
            format!("The package to which this class belongs is {}.", package_display(&class.declared_package)),
        ),
    ];
    if let Some(superclass) = &class.superclass {
        out.push(RapidSummaryMessage::new(ClassInheritance, format!("This class inherits from the {superclass} class.")));
    }
    if !class.attributes.is_empty() {
        let names: Vec<String> = class.attributes.iter().map(|a| render_identifier(&a.name, cfg)).collect();
        out.push(RapidSummaryMessage::new(
            ClassAttributes,
            list_sentence("This class contains the following", ("attribute", "attributes"), &names),
        ));
    }
    if !class.methods.is_empty() {
        let names: Vec<String> = class.methods.iter().map(|m| m.name.clone()).collect();
        out.push(RapidSummaryMessage::new(
            ClassMethods,
            list_sentence("This class contains the following", ("method", "methods"), &names),
        ));
    }
    out
}

pub fn method_messages(method: &MethodDecl, cfg: &RenderingConfig) -> Vec<RapidSummaryMessage> {
    use MessageKind::*;
    let typed_clause = |name: &str, ty: &str| {
        format!("{} and its data type is {}", render_identifier(name, cfg), render_type(ty, cfg))
    };

    let mut out = vec![
        RapidSummaryMessage::new(MethodName, format!("The name of this method is {}.", method.name)),
        RapidSummaryMessage::new(MethodAccessLevel, format!("The access level for this method is {}.", method.access_level)),
        RapidSummaryMessage::new(
            MethodReturnType,
            format!("The return data type for this method is {}.", render_type(&method.return_type, cfg)),
        ),
        RapidSummaryMessage::new(MethodClass, format!("The class to which this method belongs is {}.", method.declared_class)),
    ];

    let n = method.parameters.len();
    if n > 0 {
        let clauses: Vec<String> = method.parameters.iter().map(|p| typed_clause(&p.name, &p.declared_type)).collect();
        let count = format!("This method contains {n} {}.", if n == 1 { "parameter" } else { "parameters" });
        let listing = list_sentence("This method consists of the following", ("parameter", "parameters"), &clauses);
        out.push(RapidSummaryMessage::new(MethodParameters, format!("{count} {listing}")));
    }
    if !method.local_variables.is_empty() {
        let clauses: Vec<String> =
            method.local_variables.iter().map(|v| typed_clause(&v.name, &v.declared_type)).collect();
        out.push(RapidSummaryMessage::new(
            MethodVariables,
            list_sentence("This method contains the following", ("local variable", "local variables"), &clauses),
        ));
    }
    if !method.attribute_accesses.is_empty() {
        let names: Vec<String> = method.attribute_accesses.iter().map(|a| render_identifier(&a.name, cfg)).collect();
        out.push(RapidSummaryMessage::new(
            MethodAccesses,
            list_sentence("This method accesses the following", ("attribute", "attributes"), &names),
        ));
    }
    if !method.method_invocations.is_empty() {
        let names: Vec<String> = method.method_invocations.iter().map(|i| i.name.clone()).collect();
        out.push(RapidSummaryMessage::new(
            MethodInvocations,
            list_sentence("This method invokes the following", ("method", "methods"), &names),
        ));
    }
    out
}
