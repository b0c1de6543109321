//! Assembles parsed compilation units into a [`CodeModel`].

use std::collections::HashSet;

use crate::diagnostic::Diagnostic;
use crate::frontend::ast::{ClassNode, CompilationUnit, MethodNode};
use crate::frontend::extract::{extract_dependencies, ClassShape, ResolutionContext, TypeIndex};
use crate::model::{validate_model, AttributeDecl, ClassDecl, CodeModel, MethodDecl, PackageDecl, ParameterDecl};

/// `java.lang` types, which are in scope without an import.
pub const IMPLICIT_TYPES: &[&str] = &[
    "ArithmeticException", "ArrayIndexOutOfBoundsException", "AutoCloseable", "Boolean", "Byte",
    "CharSequence", "Character", "Class", "ClassCastException", "CloneNotSupportedException",
    "Comparable", "Double", "Enum", "Error", "Exception", "Float", "IllegalArgumentException",
    "IllegalStateException", "IndexOutOfBoundsException", "Integer", "InterruptedException",
    "Iterable", "Long", "Math", "NullPointerException", "Number", "NumberFormatException", "Object",
    "Runnable", "Runtime", "RuntimeException", "Short", "StrictMath", "String", "StringBuffer",
    "StringBuilder", "System", "Thread", "Throwable", "UnsupportedOperationException", "Void",
];

/// Groups classes under their packages and runs dependency extraction on
/// every method body. Units are merged in file-path order, so the result does
/// not depend on the order `units` were produced in.
pub fn build_model(units: &[CompilationUnit], project_name: &str) -> (CodeModel, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let mut ordered: Vec<&CompilationUnit> = units.iter().collect();
    ordered.sort_by(|a, b| a.file.cmp(&b.file));

    // Pass 1: accept classes, dropping duplicates within a package.
    let mut accepted: Vec<(&CompilationUnit, &ClassNode)> = Vec::new();
    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    for unit in &ordered {
        for class in &unit.classes {
            if seen.insert((unit.package_name(), class.name.as_str())) {
                accepted.push((unit, class));
            } else {
                diagnostics.push(
                    Diagnostic::error(format!(
                        "duplicate class `{}` in package `{}`; later declaration dropped",
                        class.name,
                        unit.package_name()
                    ))
                    .at(&unit.file, class.pos.line, class.pos.column),
                );
            }
        }
    }

    let mut index = TypeIndex::default();
    for (_, class) in &accepted {
        index.insert(
            class.name.clone(),
            ClassShape {
                superclass: class.superclass.clone().filter(|s| *s != class.name),
                fields: class.fields.iter().map(|f| (f.name.clone(), f.ty.clone())).collect(),
                methods: class
                    .methods
                    .iter()
                    .filter(|m| !m.is_constructor)
                    .map(|m| (m.name.clone(), m.return_type.clone()))
                    .collect(),
            },
        );
    }
    let project_types: Vec<&str> = accepted.iter().map(|(_, c)| c.name.as_str()).collect();

    // Pass 2: build declarations.
    let mut model = CodeModel::new(project_name);
    for (unit, class) in accepted {
        let decl = build_class(unit, class, &index, &project_types, &mut diagnostics);
        let package = unit.package_name();
        match model.packages.iter_mut().find(|p| p.name == package) {
            Some(p) => p.classes.push(decl),
            None => model.packages.push(PackageDecl { name: package.to_string(), classes: vec![decl] }),
        }
    }

    diagnostics.extend(validate_model(&model));
    (model, diagnostics)
}

fn build_class(
    unit: &CompilationUnit,
    class: &ClassNode,
    index: &TypeIndex,
    project_types: &[&str],
    diagnostics: &mut Vec<Diagnostic>,
) -> ClassDecl {
    let superclass = match &class.superclass {
        Some(s) if *s == class.name => {
            diagnostics.push(
                Diagnostic::warning(format!("class `{}` extends a class of the same name; superclass not recorded", class.name))
                    .at(&unit.file, class.pos.line, class.pos.column),
            );
            None
        }
        other => other.clone(),
    };

    let mut attributes: Vec<AttributeDecl> = Vec::new();
    for field in &class.fields {
        if attributes.iter().any(|a| a.name == field.name) {
            diagnostics.push(
                Diagnostic::error(format!("duplicate field `{}` in class `{}`", field.name, class.name))
                    .at(&unit.file, class.pos.line, class.pos.column),
            );
            continue;
        }
        attributes.push(AttributeDecl {
            name: field.name.clone(),
            access_level: field.access,
            declared_type: field.ty.clone(),
        });
    }

    let mut base_ctx = ResolutionContext::new(&class.name).with_superclass(superclass.clone()).with_index(index);
    for (name, ty) in index.visible_fields(&class.name) {
        base_ctx.add_field(name, ty);
    }
    for ty in IMPLICIT_TYPES.iter().chain(project_types) {
        base_ctx.add_known_type(*ty);
    }
    for import in unit.imports.iter().filter(|i| !i.is_static) {
        if let Some(name) = import.simple_name() {
            base_ctx.add_known_type(name);
        }
    }

    let methods = class.methods.iter().map(|m| build_method(m, &class.name, &base_ctx)).collect();

    ClassDecl {
        name: class.name.clone(),
        access_level: class.access,
        superclass,
        declared_package: unit.package_name().to_string(),
        attributes,
        methods,
    }
}

fn build_method(method: &MethodNode, class_name: &str, base_ctx: &ResolutionContext<'_>) -> MethodDecl {
    let mut ctx = base_ctx.clone();
    for p in &method.params {
        ctx.add_parameter(&p.name, &p.ty);
    }
    let deps = method.body.as_ref().map(|b| extract_dependencies(b, &mut ctx)).unwrap_or_default();
    MethodDecl {
        name: method.name.clone(),
        access_level: method.access,
        return_type: method.return_type.clone(),
        declared_class: class_name.to_string(),
        parameters: method
            .params
            .iter()
            .map(|p| ParameterDecl { name: p.name.clone(), declared_type: p.ty.clone() })
            .collect(),
        local_variables: deps.local_variables,
        attribute_accesses: deps.attribute_accesses,
        method_invocations: deps.method_invocations,
    }
}
