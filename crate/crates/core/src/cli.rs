//! Command-line driver: source → model → XML → summaries.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::diagnostic::{has_errors, Diagnostic, Severity};
use crate::emit::{emit, render_combined, summarize_project, Layout, SummarySet};
use crate::frontend::{collect_source_files, extract_project, ParseMode, SourceFile};
use crate::model::CodeModel;
use crate::summarize::RenderingConfig;
use crate::xml::{export_xml, import_xml};

pub const MODEL_FILE: &str = "model.xml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    /// Parse sources and write `model.xml` only.
    Extract,
    /// Read a model XML file and write summaries only.
    Summarize,
    /// Parse sources, write `model.xml` and summaries.
    Full,
}

/// Generate natural-language summaries of Java classes and methods.
#[derive(Debug, Parser)]
#[command(name = "codesum", version)]
pub struct Args {
    /// Source directory to analyze.
    #[arg(long = "in", value_name = "DIR")]
    pub input: Option<PathBuf>,
    /// Model XML file to summarize.
    #[arg(long, value_name = "FILE")]
    pub xml: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Project name recorded in the model (default: input directory name).
    #[arg(long)]
    pub project: Option<String>,
    #[arg(long, value_enum, default_value_t = Layout::Combined)]
    pub layout: Layout,
    #[arg(long, value_enum, default_value_t = ParseMode::Strict)]
    pub mode: ParseMode,
    /// Pipeline stage (default: full for --in, summarize for --xml).
    #[arg(long, value_enum)]
    pub stage: Option<Stage>,
    /// key=value file overriding type display names and identifier casing.
    #[arg(long, value_name = "FILE")]
    pub render_config: Option<PathBuf>,
    /// Source file extension to collect.
    #[arg(long, default_value = "java")]
    pub ext: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

enum Input<'a> {
    Sources(&'a Path),
    Model(&'a Path),
}

struct Outcome {
    model: Option<CodeModel>,
    source_len: Option<usize>,
    summary_len: Option<usize>,
}

/// Runs the tool with process arguments and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stderr().lock())
}

/// Like [`run`] but writes diagnostics and the report to `err`.
pub fn run_with<I, T>(args: I, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };

    let (input, stage) = match resolve_input(&args) {
        Ok(v) => v,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    let started = Instant::now();
    let mut diagnostics = Vec::new();
    let outcome = execute(&args, input, stage, &mut diagnostics);

    for d in &diagnostics {
        let _ = writeln!(err, "{d}");
    }
    report(err, &outcome, &diagnostics, started);
    if has_errors(&diagnostics) { EXIT_FAILURE } else { EXIT_OK }
}

fn resolve_input(args: &Args) -> Result<(Input<'_>, Stage), String> {
    match (&args.input, &args.xml) {
        (Some(_), Some(_)) => Err("give either --in or --xml, not both".into()),
        (None, None) => Err("an input is required (--in <DIR> or --xml <FILE>)".into()),
        (Some(dir), None) => match args.stage.unwrap_or(Stage::Full) {
            Stage::Summarize => Err("--stage summarize requires --xml".into()),
            stage => Ok((Input::Sources(dir), stage)),
        },
        (None, Some(file)) => match args.stage.unwrap_or(Stage::Summarize) {
            Stage::Summarize => Ok((Input::Model(file), Stage::Summarize)),
            _ => Err("--xml is only accepted with --stage summarize".into()),
        },
    }
}

fn load_render_config(path: Option<&Path>) -> Result<RenderingConfig, Diagnostic> {
    let Some(path) = path else {
        return Ok(RenderingConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Diagnostic::error(format!("cannot read rendering config: {e}")).in_file(path))?;
    RenderingConfig::default()
        .with_overrides(&text)
        .map_err(|e| Diagnostic::error(format!("rendering config: {e}")).in_file(path))
}

fn default_project_name(dir: &Path) -> String {
    let canonical = dir.canonicalize().unwrap_or_else(|_| dir.to_path_buf());
    canonical.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "project".to_string())
}

fn read_sources(dir: &Path, ext: &str, diagnostics: &mut Vec<Diagnostic>) -> Option<Vec<SourceFile>> {
    if !dir.is_dir() {
        diagnostics.push(Diagnostic::error("input is not a readable directory").in_file(dir));
        return None;
    }
    let paths = match collect_source_files(dir, ext) {
        Ok(p) => p,
        Err(e) => {
            diagnostics.push(Diagnostic::error(format!("cannot list sources: {e}")).in_file(dir));
            return None;
        }
    };
    let mut files = Vec::with_capacity(paths.len());
    for path in paths {
        match fs::read_to_string(&path) {
            Ok(text) => {
                let shown = path.strip_prefix(dir).map(Path::to_path_buf).unwrap_or_else(|_| path.clone());
                files.push(SourceFile { path: shown, text });
            }
            Err(e) => diagnostics.push(Diagnostic::error(format!("cannot read source: {e}")).in_file(&path)),
        }
    }
    Some(files)
}

fn execute(args: &Args, input: Input<'_>, stage: Stage, diagnostics: &mut Vec<Diagnostic>) -> Outcome {
    let mut outcome = Outcome { model: None, source_len: None, summary_len: None };
    let cfg = match load_render_config(args.render_config.as_deref()) {
        Ok(c) => c,
        Err(d) => {
            diagnostics.push(d);
            return outcome;
        }
    };

    let model = match input {
        Input::Sources(dir) => {
            let Some(files) = read_sources(dir, &args.ext, diagnostics) else {
                return outcome;
            };
            outcome.source_len = Some(files.iter().map(|f| f.text.chars().count()).sum());
            let project = args.project.clone().unwrap_or_else(|| default_project_name(dir));
            let (model, diags) = extract_project(&files, &project, args.mode);
            diagnostics.extend(diags);
            model
        }
        Input::Model(file) => {
            let text = match fs::read_to_string(file) {
                Ok(t) => t,
                Err(e) => {
                    diagnostics.push(Diagnostic::error(format!("cannot read model: {e}")).in_file(file));
                    return outcome;
                }
            };
            match import_xml(&text, file) {
                Ok((mut model, diags)) => {
                    diagnostics.extend(diags);
                    if let Some(p) = &args.project {
                        model.project_name = p.clone();
                    }
                    model
                }
                Err(d) => {
                    diagnostics.push(d);
                    return outcome;
                }
            }
        }
    };

    let xml = if stage == Stage::Summarize {
        None
    } else {
        match export_xml(&model) {
            Ok(x) => Some(x),
            Err(e) => {
                diagnostics.push(Diagnostic::error(e.to_string()));
                None
            }
        }
    };
    let summaries: Option<SummarySet> =
        (stage != Stage::Extract).then(|| summarize_project(&model, &cfg));
    if let Some(set) = &summaries {
        outcome.summary_len = Some(render_combined(set).chars().count());
    }
    outcome.model = Some(model);

    if has_errors(diagnostics) {
        return outcome;
    }

    if let Err(e) = fs::create_dir_all(&args.out) {
        diagnostics.push(Diagnostic::error(format!("cannot create output directory: {e}")).in_file(&args.out));
        return outcome;
    }
    if let Some(xml) = xml {
        let path = args.out.join(MODEL_FILE);
        if let Err(e) = fs::write(&path, xml) {
            diagnostics.push(Diagnostic::error(format!("cannot write model: {e}")).in_file(&path));
            return outcome;
        }
    }
    if let Some(set) = summaries {
        if let Err(e) = emit(&set, args.layout, &args.out) {
            diagnostics.push(Diagnostic::error(e.to_string()));
        }
    }
    outcome
}

fn count(n: usize, singular: &str, plural: &str) -> String {
    format!("{n} {}", if n == 1 { singular } else { plural })
}

fn report(err: &mut dyn Write, outcome: &Outcome, diagnostics: &[Diagnostic], started: Instant) {
    let warnings = diagnostics.iter().filter(|d| d.severity == Severity::Warning).count();
    let errors = diagnostics.len() - warnings;
    let (packages, classes, methods) = outcome
        .model
        .as_ref()
        .map_or((0, 0, 0), |m| (m.packages.len(), m.class_count(), m.method_count()));
    let ratio = match (outcome.summary_len, outcome.source_len) {
        (Some(s), Some(src)) if src > 0 => format!("{:.2}", s as f64 / src as f64),
        _ => "n/a".to_string(),
    };
    let _ = writeln!(
        err,
        "codesum: {}, {}, {}, {}, {}; summary/source length ratio {ratio}; {} ms",
        count(packages, "package", "packages"),
        count(classes, "class", "classes"),
        count(methods, "method", "methods"),
        count(warnings, "warning", "warnings"),
        count(errors, "error", "errors"),
        started.elapsed().as_millis(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with(std::iter::once("codesum").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["--out", "x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--in", "a", "--xml", "b", "--out", "x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--in", "a", "--stage", "summarize", "--out", "x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--xml", "a", "--stage", "full", "--out", "x"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--in", "a", "--out", "x", "--mode", "sloppy"]).0, EXIT_USAGE);
    }

    #[test]
    fn small_full_run() {
        let src = tempfile::tempdir().unwrap();
        fs::write(src.path().join("A.java"), "package p; public class A { int n; int get() { return n; } }").unwrap();
        let out = tempfile::tempdir().unwrap();
        let (code, stderr) = run_capture(&[
            "--in",
            src.path().to_str().unwrap(),
            "--out",
            out.path().to_str().unwrap(),
            "--project",
            "demo",
        ]);
        assert_eq!(code, EXIT_OK, "{stderr}");
        assert!(stderr.contains("1 package, 1 class, 1 method, 0 warnings, 0 errors"), "{stderr}");
        let xml = fs::read_to_string(out.path().join(MODEL_FILE)).unwrap();
        assert!(xml.contains("ProjectName=\"demo\""));
        let summary = fs::read_to_string(out.path().join("summary.txt")).unwrap();
        assert!(summary.contains("== method p.A.get() ==\n"));
    }

    #[test]
    fn missing_input_directory_is_an_error() {
        let out = tempfile::tempdir().unwrap();
        let target = out.path().join("o");
        let (code, stderr) = run_capture(&["--in", "/nonexistent/dir", "--out", target.to_str().unwrap()]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(stderr.contains("error"));
        assert!(!target.exists());
    }

    #[test]
    fn bad_render_config_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("r.cfg");
        fs::write(&cfg, "colour = blue\n").unwrap();
        fs::write(dir.path().join("A.java"), "class A {}").unwrap();
        let target = dir.path().join("o");
        let (code, stderr) = run_capture(&[
            "--in",
            dir.path().to_str().unwrap(),
            "--out",
            target.to_str().unwrap(),
            "--render-config",
            cfg.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(stderr.contains("unknown key `colour`"), "{stderr}");
        assert!(!target.exists());
    }
}
