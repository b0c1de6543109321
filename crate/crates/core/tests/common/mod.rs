#![allow(dead_code)]

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use codesum::diagnostic::Diagnostic;
use codesum::frontend::{collect_source_files, extract_project, ParseMode, SourceFile};
use codesum::model::*;
use proptest::prelude::*;

pub fn fixtures_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read_project(dir: &Path) -> Vec<SourceFile> {
    collect_source_files(dir, "java")
        .unwrap()
        .into_iter()
        .map(|path| SourceFile {
            text: fs::read_to_string(&path).unwrap(),
            path: path.strip_prefix(dir).unwrap().to_path_buf(),
        })
        .collect()
}

pub fn fixture_model(name: &str) -> (CodeModel, Vec<Diagnostic>) {
    let files = read_project(&fixtures_root().join(name));
    extract_project(&files, name, ParseMode::Strict)
}

pub fn method<'a>(model: &'a CodeModel, package: &str, class: &str, name: &str) -> &'a MethodDecl {
    lookup_class(model, package, class)
        .unwrap_or_else(|| panic!("no class {package}.{class}"))
        .methods
        .iter()
        .find(|m| m.name == name)
        .unwrap_or_else(|| panic!("no method {class}.{name}"))
}

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_$][a-zA-Z0-9_$]{0,7}"
}

/// Type text, sometimes with characters XML has to escape.
fn type_text() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[A-Za-z][A-Za-z0-9]{0,5}(\\[\\])?",
        2 => "[A-Z][a-z]{0,4}<[A-Z][a-z]{0,3}(, [A-Z][a-z]{0,3})?>",
        1 => "[ -~]{1,8}",
        1 => "[a-zA-Z&\"'<>\u{e9}\u{4e2d}\t]{1,6}",
    ]
}

fn access() -> impl Strategy<Value = AccessLevel> {
    prop_oneof![
        Just(AccessLevel::Public),
        Just(AccessLevel::Private),
        Just(AccessLevel::Protected),
        Just(AccessLevel::PackagePrivate),
    ]
}

fn unique_by<T, K: std::hash::Hash + Eq>(items: Vec<T>, key: impl Fn(&T) -> K) -> Vec<T> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|x| seen.insert(key(x))).collect()
}

fn arb_method() -> impl Strategy<Value = MethodDecl> {
    (
        ident(),
        access(),
        type_text(),
        prop::collection::vec((ident(), type_text()), 0..3),
        prop::collection::vec((ident(), type_text()), 0..3),
        prop::collection::vec((ident(), type_text()), 0..3),
        prop::collection::vec((ident(), type_text()), 0..4),
    )
        .prop_map(|(name, access_level, return_type, params, locals, accesses, calls)| MethodDecl {
            name,
            access_level,
            return_type,
            declared_class: String::new(),
            parameters: params.into_iter().map(|(name, declared_type)| ParameterDecl { name, declared_type }).collect(),
            local_variables: locals
                .into_iter()
                .map(|(name, declared_type)| LocalVariableDecl { name, declared_type })
                .collect(),
            attribute_accesses: unique_by(accesses, |a| a.0.clone())
                .into_iter()
                .map(|(name, resolved_type)| AttributeAccess { name, resolved_type })
                .collect(),
            method_invocations: calls
                .into_iter()
                .map(|(name, accessed_in)| MethodInvocation { name, accessed_in })
                .collect(),
        })
}

fn arb_class() -> impl Strategy<Value = ClassDecl> {
    (
        ident(),
        access(),
        prop::option::of(ident()),
        prop::collection::vec((ident(), access(), type_text()), 0..4),
        prop::collection::vec(arb_method(), 0..4),
    )
        .prop_map(|(name, access_level, superclass, attrs, methods)| {
            let superclass = superclass.filter(|s| *s != name);
            let methods = methods.into_iter().map(|m| MethodDecl { declared_class: name.clone(), ..m }).collect();
            ClassDecl {
                access_level,
                superclass,
                declared_package: String::new(),
                attributes: unique_by(attrs, |a| a.0.clone())
                    .into_iter()
                    .map(|(name, access_level, declared_type)| AttributeDecl { name, access_level, declared_type })
                    .collect(),
                methods,
                name,
            }
        })
}

fn package_name() -> impl Strategy<Value = String> {
    prop_oneof![1 => Just(String::new()), 3 => "[a-z]{1,5}(\\.[a-z]{1,5}){0,2}"]
}

/// Valid models of bounded size: up to 3 packages × 4 classes × 4 methods.
pub fn arb_model() -> impl Strategy<Value = CodeModel> {
    (
        "[ -~]{0,10}",
        prop::collection::vec((package_name(), prop::collection::vec(arb_class(), 0..4)), 0..3),
    )
        .prop_map(|(project_name, packages)| {
            let packages = unique_by(packages, |p| p.0.clone())
                .into_iter()
                .map(|(name, classes)| PackageDecl {
                    classes: unique_by(classes, |c| c.name.clone())
                        .into_iter()
                        .map(|c| ClassDecl { declared_package: name.clone(), ..c })
                        .collect(),
                    name,
                })
                .collect();
            CodeModel { project_name, packages }
        })
}

/// Independent count of call sites: an identifier directly followed by `(`
/// that is not a keyword, a declaration or a constructor call. Comments and
/// string literals are stripped first.
pub fn count_call_sites(source: &str) -> usize {
    let cleaned = strip_comments_and_strings(source);
    let chars: Vec<char> = cleaned.chars().collect();
    let mut words: Vec<(String, usize)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_alphabetic() || chars[i] == '_' || chars[i] == '$' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                i += 1;
            }
            words.push((chars[start..i].iter().collect(), i));
        } else {
            i += 1;
        }
    }
    const NOT_CALLS: &[&str] = &["if", "while", "for", "switch", "catch", "synchronized", "return", "this", "super"];
    let mut count = 0;
    for (k, (word, end)) in words.iter().enumerate() {
        let mut j = *end;
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        if j >= chars.len() || chars[j] != '(' || NOT_CALLS.contains(&word.as_str()) {
            continue;
        }
        let prev = k.checked_sub(1).map(|p| words[p].0.as_str());
        // `new X(`, or a declaration `Type name(`: the previous word ended
        // right before this one with nothing but whitespace between.
        let prev_adjacent = k > 0 && {
            let (pw, pend) = &words[k - 1];
            let between: String = chars[*pend..end - word.chars().count()].iter().collect();
            !pw.is_empty() && between.trim().is_empty()
        };
        if prev == Some("new") || (prev_adjacent && prev != Some("return") && prev != Some("throw")) {
            continue;
        }
        count += 1;
    }
    count
}

fn strip_comments_and_strings(source: &str) -> String {
    let mut out = String::with_capacity(source.len());
    let mut it = source.chars().peekable();
    while let Some(c) = it.next() {
        match c {
            '/' if it.peek() == Some(&'/') => {
                for d in it.by_ref() {
                    if d == '\n' {
                        out.push('\n');
                        break;
                    }
                }
            }
            '/' if it.peek() == Some(&'*') => {
                it.next();
                let mut prev = ' ';
                for d in it.by_ref() {
                    if prev == '*' && d == '/' {
                        break;
                    }
                    prev = d;
                }
                out.push(' ');
            }
            '"' | '\'' => {
                let mut escaped = false;
                for d in it.by_ref() {
                    if escaped {
                        escaped = false;
                    } else if d == '\\' {
                        escaped = true;
                    } else if d == c {
                        break;
                    }
                }
                out.push_str("\"\"");
            }
            _ => out.push(c),
        }
    }
    out
}
