//! Summary documents: aggregation of rapid summary messages and output files.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{ClassDecl, CodeModel, MethodDecl};
use crate::summarize::{class_messages, method_messages, RapidSummaryMessage, RenderingConfig};

pub const COMBINED_FILE: &str = "summary.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubjectKind {
    Class,
    Method,
}

impl SubjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SubjectKind::Class => "class",
            SubjectKind::Method => "method",
        }
    }
}

impl fmt::Display for SubjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryDocument {
    pub subject_kind: SubjectKind,
    /// `pkg.Class` or `pkg.Class.method(T1, T2)`; no package prefix for the
    /// default package.
    pub subject_path: String,
    pub body: String,
    /// Base name used by the per-identifier layout, before sanitization.
    pub file_stem: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SummarySet {
    pub documents: Vec<SummaryDocument>,
}

impl SummarySet {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn bodies(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.body.as_str()).collect()
    }

    pub fn find(&self, kind: SubjectKind, subject_path: &str) -> Option<&SummaryDocument> {
        self.documents.iter().find(|d| d.subject_kind == kind && d.subject_path == subject_path)
    }
}

/// Joins message texts with single spaces.
///
/// # Panics
///
/// If `messages` is empty.
pub fn aggregate(messages: &[RapidSummaryMessage]) -> String {
    assert!(!messages.is_empty(), "aggregate requires at least one message");
    let texts: Vec<&str> = messages.iter().map(|m| m.text.trim()).collect();
    texts.join(" ")
}

fn class_path(class: &ClassDecl) -> String {
    if class.declared_package.is_empty() {
        class.name.clone()
    } else {
        format!("{}.{}", class.declared_package, class.name)
    }
}

fn method_stem(class_path: &str, method: &MethodDecl, overloaded: bool) -> String {
    let mut stem = format!("{class_path}.{}", method.name);
    if overloaded && !method.parameters.is_empty() {
        for ty in method.parameter_types() {
            stem.push('_');
            stem.push_str(ty);
        }
    }
    stem
}

/// Builds the documents for every class and method, each class followed by
/// its methods, in model order.
pub fn summarize_project(model: &CodeModel, cfg: &RenderingConfig) -> SummarySet {
    let mut documents = Vec::new();
    for (_, class) in model.classes() {
        let path = class_path(class);
        documents.push(SummaryDocument {
            subject_kind: SubjectKind::Class,
            subject_path: path.clone(),
            body: aggregate(&class_messages(class, cfg)),
            file_stem: path.clone(),
        });

        let mut name_counts: HashMap<&str, usize> = HashMap::new();
        for m in &class.methods {
            *name_counts.entry(m.name.as_str()).or_default() += 1;
        }
        for method in &class.methods {
            documents.push(SummaryDocument {
                subject_kind: SubjectKind::Method,
                subject_path: format!("{path}.{}", method.signature()),
                body: aggregate(&method_messages(method, cfg)),
                file_stem: method_stem(&path, method, name_counts[method.name.as_str()] > 1),
            });
        }
    }
    SummarySet { documents }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, clap::ValueEnum)]
pub enum Layout {
    /// One `summary.txt` with a header line before each document.
    #[default]
    Combined,
    /// One file per class under `classes/`, one per method under `methods/`.
    PerIdentifier,
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: two summaries map to the same file (`{first}` and `{second}`)", path.display())]
    Collision { path: PathBuf, first: String, second: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> EmitError + '_ {
    move |source| EmitError::Io { path: path.to_path_buf(), source }
}

/// Replaces characters that are awkward in file names.
pub fn sanitize_file_stem(stem: &str) -> String {
    stem.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '$' | '-') { c } else { '-' })
        .collect()
}

pub fn header_line(doc: &SummaryDocument) -> String {
    format!("== {} {} ==", doc.subject_kind, doc.subject_path)
}

pub fn render_combined(set: &SummarySet) -> String {
    let blocks: Vec<String> =
        set.documents.iter().map(|d| format!("{}\n{}\n", header_line(d), d.body)).collect();
    blocks.join("\n")
}

/// Relative output path of a document in the per-identifier layout.
pub fn per_identifier_path(doc: &SummaryDocument) -> PathBuf {
    let dir = match doc.subject_kind {
        SubjectKind::Class => "classes",
        SubjectKind::Method => "methods",
    };
    Path::new(dir).join(format!("{}.txt", sanitize_file_stem(&doc.file_stem)))
}

/// Writes the set under `out_dir` and returns the paths written.
pub fn emit(set: &SummarySet, layout: Layout, out_dir: &Path) -> Result<Vec<PathBuf>, EmitError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    match layout {
        Layout::Combined => {
            let path = out_dir.join(COMBINED_FILE);
            fs::write(&path, render_combined(set)).map_err(io_err(&path))?;
            Ok(vec![path])
        }
        Layout::PerIdentifier => {
            let mut owners: HashMap<PathBuf, &str> = HashMap::new();
            let mut planned = Vec::with_capacity(set.len());
            for doc in &set.documents {
                let rel = per_identifier_path(doc);
                if let Some(first) = owners.insert(rel.clone(), &doc.subject_path) {
                    return Err(EmitError::Collision {
                        path: out_dir.join(rel),
                        first: first.to_string(),
                        second: doc.subject_path.clone(),
                    });
                }
                planned.push((out_dir.join(rel), doc));
            }
            let mut made_dirs = HashSet::new();
            let mut written = Vec::with_capacity(planned.len());
            for (path, doc) in planned {
                if let Some(parent) = path.parent() {
                    if made_dirs.insert(parent.to_path_buf()) {
                        fs::create_dir_all(parent).map_err(io_err(parent))?;
                    }
                }
                fs::write(&path, format!("{}\n", doc.body)).map_err(io_err(&path))?;
                written.push(path);
            }
            Ok(written)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ReadBackError {
    pub line: usize,
    pub message: String,
}

/// Parses `summary.txt` content back into `(kind, subject_path, body)` triples.
pub fn parse_combined(text: &str) -> Result<Vec<(SubjectKind, String, String)>, ReadBackError> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| ReadBackError { line: i + 1, message: message.to_string() };
        let inner = line.strip_prefix("== ").and_then(|l| l.strip_suffix(" ==")).ok_or_else(|| err("expected a header"))?;
        let (kind, path) = inner.split_once(' ').ok_or_else(|| err("header without a subject"))?;
        let kind = match kind {
            "class" => SubjectKind::Class,
            "method" => SubjectKind::Method,
            _ => return Err(err("unknown subject kind")),
        };
        let (_, body) = lines.next().ok_or_else(|| err("header without a body"))?;
        out.push((kind, path.to_string(), body.to_string()));
    }
    Ok(out)
}
