mod common;

use codesum::frontend::{extract_project, parse_source, ParseMode};
use codesum::model::{lookup_class, validate_model};
use common::*;

#[test]
fn fixture_corpus_parses_cleanly_in_strict_mode() {
    for (name, classes, methods) in [("drawing-shapes", 4, 15), ("nanoxml", 2, 6), ("argouml", 2, 6)] {
        let (model, diags) = fixture_model(name);
        assert!(diags.iter().all(|d| !d.is_error()), "{name}: {diags:?}");
        assert!(validate_model(&model).is_empty());
        assert_eq!((model.class_count(), model.method_count()), (classes, methods), "{name}");
    }
}

#[test]
fn nested_class_is_reported_and_skipped() {
    let (model, diags) = fixture_model("nanoxml");
    assert_eq!(diags.len(), 1);
    assert!(diags[0].message.contains("nested class"), "{}", diags[0]);
    assert_eq!(diags[0].location.as_ref().unwrap().line, 10);
    assert!(lookup_class(&model, "net.n3.nanoxml", "StackedReader").is_none());
}

#[test]
fn invocation_counts_match_a_textual_oracle() {
    for name in ["drawing-shapes", "nanoxml", "argouml"] {
        for file in read_project(&fixtures_root().join(name)) {
            let (unit, diags) = parse_source(&file.text, &file.path, ParseMode::Strict);
            assert!(diags.iter().all(|d| !d.is_error()));
            let unit = unit.unwrap();
            let (model, _) = codesum::frontend::build_model(&[unit], name);
            let recorded: usize =
                model.classes().map(|(_, c)| c.methods.iter().map(|m| m.method_invocations.len()).sum::<usize>()).sum();
            assert_eq!(recorded, count_call_sites(&file.text), "{}", file.path.display());
        }
    }
}

#[test]
fn main_method_model() {
    let (model, _) = fixture_model("drawing-shapes");
    let main = method(&model, "gui", "drawingShapes", "main");
    assert_eq!(main.parameters[0].name, "args");
    assert_eq!(main.parameters[0].declared_type, "String");
    assert_eq!(main.local_variables[0].declared_type, "drawingShapes");
    let accesses: Vec<(&str, &str)> =
        main.attribute_accesses.iter().map(|a| (a.name.as_str(), a.resolved_type.as_str())).collect();
    assert_eq!(accesses, [("application", "drawingShapes"), ("EXIT_ON_CLOSE", "unknown")]);
    assert_eq!(main.method_invocations[0].accessed_in, "drawingShapes");
}

#[test]
fn draw_invocations_resolve_inherited_getters() {
    let (model, _) = fixture_model("drawing-shapes");
    let draw = method(&model, "coreElements", "MyLine", "draw");
    let targets: Vec<(&str, &str)> =
        draw.method_invocations.iter().map(|i| (i.name.as_str(), i.accessed_in.as_str())).collect();
    assert_eq!(targets, [
        ("setColor", "Graphics"),
        ("getColor", "MyLine"),
        ("drawLine", "Graphics"),
        ("getX1", "MyLine"),
        ("getY1", "MyLine"),
        ("getX2", "MyLine"),
        ("getY2", "MyLine"),
    ]);
}

#[test]
fn extraction_ignores_file_order() {
    let mut files = read_project(&fixtures_root().join("drawing-shapes"));
    let (a, da) = extract_project(&files, "d", ParseMode::Strict);
    files.reverse();
    let (b, db) = extract_project(&files, "d", ParseMode::Strict);
    assert_eq!(a, b);
    assert_eq!(da, db);
}

#[test]
fn lenient_mode_keeps_the_good_declarations() {
    let src = "package p;\nclass Good { void f() { g(); } }\nclass Bad { void f() { int = ; } }\nclass Also { int x; }\n";
    let (strict, sd) = parse_source(src, "x.java".as_ref(), ParseMode::Strict);
    assert!(strict.is_none() && sd.iter().any(|d| d.is_error()));
    let (lenient, ld) = parse_source(src, "x.java".as_ref(), ParseMode::Lenient);
    assert!(ld.iter().all(|d| !d.is_error()) && !ld.is_empty());
    let names: Vec<String> = lenient.unwrap().classes.iter().map(|c| c.name.clone()).collect();
    assert_eq!(names, ["Good", "Also"]);
}

#[test]
fn my_oval_tokens_and_shape() {
    let path = fixtures_root().join("drawing-shapes/coreElements/MyOval.java");
    let text = std::fs::read_to_string(&path).unwrap();
    let tokens = codesum::frontend::tokenize(&text).unwrap();
    let idents: Vec<&str> = tokens
        .iter()
        .filter(|t| t.kind == codesum::frontend::TokenKind::Identifier)
        .map(|t| t.text.as_str())
        .collect();
    for expected in ["MyOval", "MyShape", "draw"] {
        assert!(idents.contains(&expected), "{expected}");
    }

    let (unit, _) = parse_source(&text, &path, ParseMode::Strict);
    let class = &unit.unwrap().classes[0];
    assert_eq!(class.superclass.as_deref(), Some("MyShape"));
    assert_eq!(class.fields.len(), 1);
    let members: Vec<(&str, bool)> = class.methods.iter().map(|m| (m.name.as_str(), m.is_constructor)).collect();
    assert_eq!(members, [("MyOval", true), ("draw", false)]);
}

#[test]
fn lookup_respects_packages() {
    let (model, _) = fixture_model("drawing-shapes");
    assert!(lookup_class(&model, "coreElements", "MyOval").is_some());
    assert!(lookup_class(&model, "gui", "MyOval").is_none());
}
