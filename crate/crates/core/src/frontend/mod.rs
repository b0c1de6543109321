//! Source frontend: lexing, parsing and model construction for Java sources.

pub mod ast;
pub mod build;
pub mod extract;
pub mod lexer;
pub mod parser;

use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostic::Diagnostic;
use crate::model::CodeModel;

pub use build::build_model;
pub use extract::{extract_dependencies, ResolutionContext};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_compilation_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, clap::ValueEnum)]
pub enum ParseMode {
    /// The first error aborts the file.
    #[default]
    Strict,
    /// Errors become warnings; the broken declaration is skipped.
    Lenient,
}

/// A source file read into memory. `path` is what diagnostics report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
}

/// Tokenizes and parses one file.
pub fn parse_source(source: &str, file: &Path, mode: ParseMode) -> (Option<ast::CompilationUnit>, Vec<Diagnostic>) {
    let lex_diag = |e: &lexer::LexError, mode: ParseMode| {
        let message = format!("lexical error: {}", e.message);
        let d = match mode {
            ParseMode::Strict => Diagnostic::error(message),
            ParseMode::Lenient => Diagnostic::warning(message),
        };
        d.at(file, e.line, e.column)
    };

    let (tokens, mut diagnostics) = match mode {
        ParseMode::Strict => match lexer::tokenize(source) {
            Ok(tokens) => (tokens, Vec::new()),
            Err(e) => return (None, vec![lex_diag(&e, mode)]),
        },
        ParseMode::Lenient => {
            let (tokens, errors) = lexer::tokenize_lenient(source);
            (tokens, errors.iter().map(|e| lex_diag(e, mode)).collect())
        }
    };
    let (unit, parse_diags) = parse_compilation_unit(&tokens, file, mode);
    diagnostics.extend(parse_diags);
    (unit, diagnostics)
}

/// Lists files under `dir` whose extension is `extension` (without the dot),
/// sorted by path.
pub fn collect_source_files(dir: &Path, extension: &str) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(io::Error::other)?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == extension) {
            files.push(entry.into_path());
        }
    }
    files.sort();
    Ok(files)
}

/// Parses every file (in parallel) and builds the project model. Diagnostics
/// are reported in file-path order regardless of scheduling.
pub fn extract_project(files: &[SourceFile], project_name: &str, mode: ParseMode) -> (CodeModel, Vec<Diagnostic>) {
    let mut parsed: Vec<(&Path, Option<ast::CompilationUnit>, Vec<Diagnostic>)> = files
        .par_iter()
        .map(|f| {
            let (unit, diags) = parse_source(&f.text, &f.path, mode);
            (f.path.as_path(), unit, diags)
        })
        .collect();
    parsed.sort_by(|a, b| a.0.cmp(b.0));

    let mut diagnostics = Vec::new();
    let mut units = Vec::new();
    for (_, unit, diags) in parsed {
        diagnostics.extend(diags);
        units.extend(unit);
    }
    let (model, build_diags) = build_model(&units, project_name);
    diagnostics.extend(build_diags);
    (model, diagnostics)
}
