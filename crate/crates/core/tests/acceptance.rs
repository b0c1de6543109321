//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use codesum::emit::aggregate;
use codesum::model::{lookup_class, CodeModel};
use codesum::summarize::{class_messages, method_messages, render_name_list, MessageKind, RenderingConfig};
use codesum::xml::{export_xml, import_xml};
use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const MY_OVAL_MESSAGES: [&str; 6] = [
    "The name of this class is MyOval.",
    "The access level for this class is public.",
    "The package to which this class belongs is coreElements.",
    "This class inherits from the MyShape class.",
    "This class contains the following attribute: example.",
    "This class contains the following methods: MyOval and draw.",
];

const MAIN_SUMMARY: &str = "The name of this method is main. The access level for this method is public. \
The return data type for this method is void. The class to which this method belongs is drawingShapes. \
This method contains 1 parameter. This method consists of the following parameter: args and its data type is string. \
This method contains the following local variable: application and its data type is drawingShapes. \
This method accesses the following attributes: application and exit_on_close. \
This method invokes the following method: setDefaultCloseOperation.";

const DRAW_SUMMARY: &str = "The name of this method is draw. The access level for this method is public. \
The return data type for this method is void. The class to which this method belongs is MyLine. \
This method contains 1 parameter. This method consists of the following parameter: g and its data type is Graphics. \
This method contains the following local variable: painterPaintJPanel and its data type is JPanel. \
This method accesses the following attribute: g. \
This method invokes the following methods: setColor, getColor, drawLine, getX1, getY1, getX2 and getY2.";

const GET_RESULT_SUMMARY: &str = "The name of this method is getResult. The access level for this method is public. \
The return data type for this method is object. The class to which this method belongs is StdXMLBuilder. \
This method accesses the following attribute: root.";

const ARGO_STATUS_EVENT_SUMMARY: &str = "The name of this class is ArgoStatusEvent. \
The access level for this class is public. \
The package to which this class belongs is org.argouml.application.events. \
This class inherits from the ArgoEvent class. This class contains the following attribute: text. \
This class contains the following methods: ArgoStatusEvent, getEventStartRange and getText.";

const READ_INVOCATIONS: &str = "This method invokes the following methods: read, empty, close, pop and read.";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn clean_fixture(name: &str) -> Result<CodeModel, String> {
    let (model, diags) = fixture_model(name);
    ensure(diags.iter().all(|d| !d.is_error()), || format!("{name} has errors: {diags:?}"))?;
    Ok(model)
}

fn method_summary(fixture: &str, package: &str, class: &str, name: &str) -> Result<String, String> {
    let model = clean_fixture(fixture)?;
    Ok(aggregate(&method_messages(method(&model, package, class, name), &RenderingConfig::default())))
}

fn exact(actual: &str, expected: &str) -> Result<(), String> {
    ensure(actual == expected, || format!("mismatch\n  expected: {expected}\n  actual:   {actual}"))
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let model = clean_fixture("drawing-shapes")?;
    let class = lookup_class(&model, "coreElements", "MyOval").ok_or("MyOval missing")?;
    let messages = class_messages(class, &RenderingConfig::default());
    let elapsed = started.elapsed();
    let texts: Vec<&str> = messages.iter().map(|m| m.text.as_str()).collect();
    ensure(texts == MY_OVAL_MESSAGES, || format!("got {texts:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("6/6 messages byte-identical, {elapsed:.1?} (limit 1 s)"))
}

fn criterion_2() -> Outcome {
    exact(&method_summary("drawing-shapes", "gui", "drawingShapes", "main")?, MAIN_SUMMARY)?;
    Ok("exact match".into())
}

fn criterion_3() -> Outcome {
    exact(&method_summary("drawing-shapes", "coreElements", "MyLine", "draw")?, DRAW_SUMMARY)?;
    Ok("exact match".into())
}

fn criterion_4() -> Outcome {
    let model = clean_fixture("nanoxml")?;
    let m = method(&model, "net.n3.nanoxml", "StdXMLBuilder", "getResult");
    let messages = method_messages(m, &RenderingConfig::default());
    use MessageKind::*;
    let kinds: Vec<MessageKind> = messages.iter().map(|m| m.kind).collect();
    ensure(kinds == [MethodName, MethodAccessLevel, MethodReturnType, MethodClass, MethodAccesses], || {
        format!("kinds {kinds:?}")
    })?;
    exact(&aggregate(&messages), GET_RESULT_SUMMARY)?;
    Ok("five sentences, exact match".into())
}

fn criterion_5() -> Outcome {
    let model = clean_fixture("argouml")?;
    let class = lookup_class(&model, "org.argouml.application.events", "ArgoStatusEvent").ok_or("class missing")?;
    exact(&aggregate(&class_messages(class, &RenderingConfig::default())), ARGO_STATUS_EVENT_SUMMARY)?;
    Ok("exact match".into())
}

fn criterion_6() -> Outcome {
    let model = fixture_model("nanoxml").0;
    let m = method(&model, "net.n3.nanoxml", "StdXMLReader", "read");
    let messages = method_messages(m, &RenderingConfig::default());
    let inv = messages.iter().find(|m| m.kind == MessageKind::MethodInvocations).ok_or("no invocation message")?;
    exact(&inv.text, READ_INVOCATIONS)?;
    Ok("invocation list exact, duplicate `read` kept in order".into())
}

fn deterministic_runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn criterion_7() -> Outcome {
    let mut runner = deterministic_runner(200);
    let checked = Cell::new(0u32);
    let largest = Cell::new(0usize);
    runner
        .run(&arb_model(), |model| {
            let first = export_xml(&model).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let second = export_xml(&model).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&first, &second);
            let (back, _) = import_xml(&first, Path::new("m.xml")).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&back, &model);
            checked.set(checked.get() + 1);
            largest.set(largest.get().max(model.class_count() + model.method_count()));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let (checked, largest) = (checked.get(), largest.get());
    ensure(checked == 200, || format!("only {checked} cases ran"))?;
    Ok(format!("{checked}/200 models round-trip, export byte-stable; largest had {largest} classes+methods"))
}

fn criterion_8() -> Outcome {
    let mut runner = deterministic_runner(500);
    let strategy = prop::collection::vec("[A-Za-z_][A-Za-z0-9_]{0,9}", 1..=10);
    let by_len = RefCell::new(BTreeMap::new());
    runner
        .run(&strategy, |names| {
            let n = names.len();
            let out = render_name_list(&names);
            prop_assert_eq!(out.matches(',').count(), n.saturating_sub(2));
            prop_assert_eq!(out.matches(" and ").count(), usize::from(n >= 2));
            *by_len.borrow_mut().entry(n).or_insert(0u32) += 1;
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let by_len = by_len.into_inner();
    ensure(by_len.len() == 10, || format!("lengths covered: {:?}", by_len.keys()))?;
    Ok("500 lists of length 1..=10: comma and \" and \" counts hold".into())
}

fn read_tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().strip_prefix(dir).unwrap().to_path_buf(), fs::read(e.path()).unwrap()))
        .collect()
}

fn cli(args: &[&str]) -> Result<(), String> {
    let mut stderr = Vec::new();
    let code = codesum::cli::run_with(std::iter::once("codesum").chain(args.iter().copied()), &mut stderr);
    ensure(code == 0, || format!("codesum {args:?} exited {code}: {}", String::from_utf8_lossy(&stderr)))
}

fn criterion_9() -> Outcome {
    let root = fixtures_root();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let mut compared = 0;
    for input in [root.clone(), root.join("drawing-shapes"), root.join("nanoxml"), root.join("argouml")] {
        for layout in ["combined", "per-identifier"] {
            let tag = format!("{}-{layout}", input.file_name().unwrap().to_string_lossy());
            let full = tmp.path().join(format!("{tag}-full"));
            let ext = tmp.path().join(format!("{tag}-ext"));
            let sum = tmp.path().join(format!("{tag}-sum"));
            let i = input.to_str().unwrap();
            cli(&["--in", i, "--out", full.to_str().unwrap(), "--layout", layout])?;
            cli(&["--in", i, "--out", ext.to_str().unwrap(), "--stage", "extract"])?;
            let xml = ext.join("model.xml");
            cli(&["--xml", xml.to_str().unwrap(), "--out", sum.to_str().unwrap(), "--layout", layout])?;

            let mut full_files = read_tree(&full);
            let model_xml = full_files.remove(Path::new("model.xml")).ok_or("full run wrote no model.xml")?;
            ensure(model_xml == fs::read(&xml).unwrap(), || format!("{tag}: model.xml differs"))?;
            let sum_files = read_tree(&sum);
            ensure(!sum_files.is_empty(), || format!("{tag}: no summaries"))?;
            ensure(full_files == sum_files, || format!("{tag}: summaries differ"))?;
            compared += sum_files.len();
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{compared} summary files byte-identical across 8 runs, {elapsed:.1?} total (limit 5 s)"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("MyOval class messages, exact", criterion_1),
        ("main method summary, exact", criterion_2),
        ("MyLine.draw method summary, exact", criterion_3),
        ("getResult five-sentence summary, exact", criterion_4),
        ("ArgoStatusEvent class summary, exact", criterion_5),
        ("read invocation list keeps duplicates and order", criterion_6),
        ("XML round trip on 200 random models", criterion_7),
        ("name-list comma and conjunction counts", criterion_8),
        ("full run equals extract then summarize", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS  criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
