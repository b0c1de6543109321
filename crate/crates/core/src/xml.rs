//! XML interchange format for [`CodeModel`].
//!
//! ```xml
//! <Project ProjectName="...">
//!   <Packages>
//!     <Package PackageName="...">
//!       <Classes>
//!         <Class Name="..." AccessLevel="..." Superclass="..." DeclaredPackage="...">
//!           <Attributes>
//!             <Attribute Name="..." AccessLevel="..." Type="..."/>
//!           </Attributes>
//!           <Methods>
//!             <Method Name="..." AccessLevel="..." ReturnType="..." DeclaredClass="...">
//!               <Parameters NumberOfParameters="...">
//!                 <Parameter ParameterName="..." ParameterType="..."/>
//!               </Parameters>
//!               <LocalVariables>
//!                 <LocalVariable LocalVariableName="..." LocalVariableType="..."/>
//!               </LocalVariables>
//!               <AttributeAccesses>
//!                 <AttributeAccess Name="..." Type="..."/>
//!               </AttributeAccesses>
//!               <MethodInvocations>
//!                 <MethodInvocation Name="..." AccessedIn="..."/>
//!               </MethodInvocations>
//!             </Method>
//!           </Methods>
//!         </Class>
//!       </Classes>
//!     </Package>
//!   </Packages>
//! </Project>
//! ```
//!
//! Container elements are always written, self-closing when empty. An empty
//! `Superclass` means the class has no `extends` clause. Output is
//! byte-stable: attribute order is fixed and indentation is two spaces.

use std::fmt::Write as _;
use std::path::Path;

use roxmltree::{Document, Node};
use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::model::*;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("model is invalid: {0}")]
    InvalidModel(Diagnostic),
}

/// Serializes a valid model. Invalid models are rejected with the first
/// validation diagnostic.
pub fn export_xml(model: &CodeModel) -> Result<String, ExportError> {
    if let Some(first) = validate_model(model).into_iter().next() {
        return Err(ExportError::InvalidModel(first));
    }
    let mut w = XmlWriter::default();
    w.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    w.open("Project", &[("ProjectName", &model.project_name)], false);
    w.container("Packages", &[], model.packages.is_empty(), |w| {
        for package in &model.packages {
            w.open("Package", &[("PackageName", &package.name)], false);
            w.container("Classes", &[], package.classes.is_empty(), |w| {
                for class in &package.classes {
                    write_class(w, class);
                }
            });
            w.close("Package");
        }
    });
    w.close("Project");
    Ok(w.out)
}

fn write_class(w: &mut XmlWriter, class: &ClassDecl) {
    w.open(
        "Class",
        &[
            ("Name", &class.name),
            ("AccessLevel", class.access_level.as_str()),
            ("Superclass", class.superclass.as_deref().unwrap_or("")),
            ("DeclaredPackage", &class.declared_package),
        ],
        false,
    );
    w.container("Attributes", &[], class.attributes.is_empty(), |w| {
        for a in &class.attributes {
            w.open(
                "Attribute",
                &[("Name", &a.name), ("AccessLevel", a.access_level.as_str()), ("Type", &a.declared_type)],
                true,
            );
        }
    });
    w.container("Methods", &[], class.methods.is_empty(), |w| {
        for m in &class.methods {
            write_method(w, m);
        }
    });
    w.close("Class");
}

fn write_method(w: &mut XmlWriter, m: &MethodDecl) {
    w.open(
        "Method",
        &[
            ("Name", &m.name),
            ("AccessLevel", m.access_level.as_str()),
            ("ReturnType", &m.return_type),
            ("DeclaredClass", &m.declared_class),
        ],
        false,
    );
    let count = m.parameters.len().to_string();
    w.container("Parameters", &[("NumberOfParameters", &count)], m.parameters.is_empty(), |w| {
        for p in &m.parameters {
            w.open("Parameter", &[("ParameterName", &p.name), ("ParameterType", &p.declared_type)], true);
        }
    });
    w.container("LocalVariables", &[], m.local_variables.is_empty(), |w| {
        for v in &m.local_variables {
            w.open("LocalVariable", &[("LocalVariableName", &v.name), ("LocalVariableType", &v.declared_type)], true);
        }
    });
    w.container("AttributeAccesses", &[], m.attribute_accesses.is_empty(), |w| {
        for a in &m.attribute_accesses {
            w.open("AttributeAccess", &[("Name", &a.name), ("Type", &a.resolved_type)], true);
        }
    });
    w.container("MethodInvocations", &[], m.method_invocations.is_empty(), |w| {
        for i in &m.method_invocations {
            w.open("MethodInvocation", &[("Name", &i.name), ("AccessedIn", &i.accessed_in)], true);
        }
    });
    w.close("Method");
}

#[derive(Default)]
struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn open(&mut self, name: &str, attrs: &[(&str, &str)], self_closing: bool) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            let _ = write!(self.out, " {k}=\"{}\"", escape_attr(v));
        }
        if self_closing {
            self.out.push_str("/>\n");
        } else {
            self.out.push_str(">\n");
            self.depth += 1;
        }
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        let _ = writeln!(self.out, "</{name}>");
    }

    fn container(&mut self, name: &str, attrs: &[(&str, &str)], empty: bool, body: impl FnOnce(&mut Self)) {
        if empty {
            self.open(name, attrs, true);
        } else {
            self.open(name, attrs, false);
            body(self);
            self.close(name);
        }
    }
}

fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

/// Parses an interchange document. `origin` is only used to locate
/// diagnostics. Recoverable problems (unknown attributes or elements, a
/// wrong `NumberOfParameters`) are returned as warnings alongside the model;
/// anything else is an error.
pub fn import_xml(document: &str, origin: &Path) -> Result<(CodeModel, Vec<Diagnostic>), Diagnostic> {
    let doc = Document::parse(document)
        .map_err(|e| Diagnostic::error(format!("malformed XML: {e}")).at(origin, e.pos().row, e.pos().col))?;
    let mut reader = Reader { doc: &doc, origin, warnings: Vec::new() };
    let model = reader.project(doc.root_element())?;
    Ok((model, reader.warnings))
}

struct Reader<'d, 'i> {
    doc: &'d Document<'i>,
    origin: &'d Path,
    warnings: Vec<Diagnostic>,
}

type ReadResult<T> = Result<T, Diagnostic>;

impl<'d, 'i> Reader<'d, 'i> {
    fn locate(&self, node: Node<'_, '_>, d: Diagnostic) -> Diagnostic {
        let pos = self.doc.text_pos_at(node.range().start);
        d.at(self.origin, pos.row, pos.col)
    }

    fn check_attributes(&mut self, node: Node<'_, '_>, allowed: &[&str]) {
        for attr in node.attributes() {
            if !allowed.contains(&attr.name()) {
                let d = Diagnostic::warning(format!(
                    "unknown attribute `{}` on `{}` ignored",
                    attr.name(),
                    node.tag_name().name()
                ));
                let d = self.locate(node, d);
                self.warnings.push(d);
            }
        }
    }

    fn required(&self, node: Node<'_, '_>, name: &str) -> ReadResult<String> {
        match node.attribute(name) {
            Some(v) => Ok(v.to_string()),
            None => Err(self.locate(
                node,
                Diagnostic::error(format!("`{}` is missing attribute `{name}`", node.tag_name().name())),
            )),
        }
    }

    fn access_level(&self, node: Node<'_, '_>) -> ReadResult<AccessLevel> {
        let raw = self.required(node, "AccessLevel")?;
        raw.parse().map_err(|e: UnknownAccessLevel| self.locate(node, Diagnostic::error(e.to_string())))
    }

    /// Element children named `expected`; any other element is warned about.
    fn children<'a>(&mut self, node: Node<'a, 'i>, expected: &str) -> Vec<Node<'a, 'i>> {
        let mut out = Vec::new();
        for child in node.children().filter(Node::is_element) {
            if child.tag_name().name() == expected {
                out.push(child);
            } else {
                let d = Diagnostic::warning(format!(
                    "unexpected element `{}` inside `{}` ignored",
                    child.tag_name().name(),
                    node.tag_name().name()
                ));
                let d = self.locate(child, d);
                self.warnings.push(d);
            }
        }
        out
    }

    /// Items inside the container children of `node`, given as
    /// `(container name, item name)`, with other children warned about.
    fn sections<'a>(&mut self, node: Node<'a, 'i>, layout: &[(&str, &str)]) -> Vec<Vec<Node<'a, 'i>>> {
        let mut out = vec![Vec::new(); layout.len()];
        for child in node.children().filter(Node::is_element) {
            let name = child.tag_name().name();
            match layout.iter().position(|(container, _)| *container == name) {
                Some(i) => {
                    let items = self.children(child, layout[i].1);
                    out[i].extend(items);
                }
                None => {
                    let d = Diagnostic::warning(format!(
                        "unexpected element `{name}` inside `{}` ignored",
                        node.tag_name().name()
                    ));
                    let d = self.locate(child, d);
                    self.warnings.push(d);
                }
            }
        }
        out
    }

    fn project(&mut self, root: Node<'_, 'i>) -> ReadResult<CodeModel> {
        if root.tag_name().name() != "Project" {
            return Err(self.locate(
                root,
                Diagnostic::error(format!("unknown root element `{}`; expected `Project`", root.tag_name().name())),
            ));
        }
        self.check_attributes(root, &["ProjectName"]);
        let project_name = self.required(root, "ProjectName")?;
        let [packages] = <[_; 1]>::try_from(self.sections(root, &[("Packages", "Package")])).expect("one section");
        let packages = packages.into_iter().map(|p| self.package(p)).collect::<ReadResult<_>>()?;
        Ok(CodeModel { project_name, packages })
    }

    fn package(&mut self, node: Node<'_, 'i>) -> ReadResult<PackageDecl> {
        self.check_attributes(node, &["PackageName"]);
        let name = self.required(node, "PackageName")?;
        let [classes] = <[_; 1]>::try_from(self.sections(node, &[("Classes", "Class")])).expect("one section");
        let classes = classes.into_iter().map(|c| self.class(c)).collect::<ReadResult<_>>()?;
        Ok(PackageDecl { name, classes })
    }

    fn class(&mut self, node: Node<'_, 'i>) -> ReadResult<ClassDecl> {
        self.check_attributes(node, &["Name", "AccessLevel", "Superclass", "DeclaredPackage"]);
        let name = self.required(node, "Name")?;
        let access_level = self.access_level(node)?;
        let superclass = node.attribute("Superclass").filter(|s| !s.is_empty()).map(str::to_string);
        let declared_package = self.required(node, "DeclaredPackage")?;
        let [attributes, methods] =
            <[_; 2]>::try_from(self.sections(node, &[("Attributes", "Attribute"), ("Methods", "Method")]))
                .expect("two sections");
        let attributes = attributes
            .into_iter()
            .map(|a| {
                self.check_attributes(a, &["Name", "AccessLevel", "Type"]);
                Ok(AttributeDecl {
                    name: self.required(a, "Name")?,
                    access_level: self.access_level(a)?,
                    declared_type: self.required(a, "Type")?,
                })
            })
            .collect::<ReadResult<_>>()?;
        let methods = methods.into_iter().map(|m| self.method(m)).collect::<ReadResult<_>>()?;
        Ok(ClassDecl { name, access_level, superclass, declared_package, attributes, methods })
    }

    fn method(&mut self, node: Node<'_, 'i>) -> ReadResult<MethodDecl> {
        self.check_attributes(node, &["Name", "AccessLevel", "ReturnType", "DeclaredClass"]);
        let name = self.required(node, "Name")?;
        let access_level = self.access_level(node)?;
        let return_type = self.required(node, "ReturnType")?;
        let declared_class = self.required(node, "DeclaredClass")?;

        let mut declared_counts = Vec::new();
        for container in node.children().filter(|c| c.is_element() && c.tag_name().name() == "Parameters") {
            self.check_attributes(container, &["NumberOfParameters"]);
            declared_counts.push((container, container.attribute("NumberOfParameters").map(str::to_string)));
        }

        let [params, locals, accesses, invocations] = <[_; 4]>::try_from(self.sections(
            node,
            &[
                ("Parameters", "Parameter"),
                ("LocalVariables", "LocalVariable"),
                ("AttributeAccesses", "AttributeAccess"),
                ("MethodInvocations", "MethodInvocation"),
            ],
        ))
        .expect("four sections");

        let parameters: Vec<ParameterDecl> = params
            .into_iter()
            .map(|p| {
                self.check_attributes(p, &["ParameterName", "ParameterType"]);
                Ok(ParameterDecl { name: self.required(p, "ParameterName")?, declared_type: self.required(p, "ParameterType")? })
            })
            .collect::<ReadResult<_>>()?;

        let declared_total = declared_counts.iter().try_fold(0usize, |acc, (_, raw)| {
            raw.as_deref().and_then(|r| r.trim().parse::<usize>().ok()).map(|n| acc + n)
        });
        if let Some((first, _)) = declared_counts.first() {
            if declared_total != Some(parameters.len()) {
                let shown = declared_counts
                    .iter()
                    .map(|(_, r)| r.clone().unwrap_or_else(|| "(missing)".into()))
                    .collect::<Vec<_>>()
                    .join(", ");
                let d = Diagnostic::warning(format!(
                    "method `{name}`: NumberOfParameters=\"{shown}\" but {} Parameter element(s) found; using the element count",
                    parameters.len()
                ));
                let d = self.locate(*first, d);
                self.warnings.push(d);
            }
        }

        let local_variables = locals
            .into_iter()
            .map(|v| {
                self.check_attributes(v, &["LocalVariableName", "LocalVariableType"]);
                Ok(LocalVariableDecl {
                    name: self.required(v, "LocalVariableName")?,
                    declared_type: self.required(v, "LocalVariableType")?,
                })
            })
            .collect::<ReadResult<_>>()?;
        let attribute_accesses = accesses
            .into_iter()
            .map(|a| {
                self.check_attributes(a, &["Name", "Type"]);
                Ok(AttributeAccess { name: self.required(a, "Name")?, resolved_type: self.required(a, "Type")? })
            })
            .collect::<ReadResult<_>>()?;
        let method_invocations = invocations
            .into_iter()
            .map(|i| {
                self.check_attributes(i, &["Name", "AccessedIn"]);
                Ok(MethodInvocation { name: self.required(i, "Name")?, accessed_in: self.required(i, "AccessedIn")? })
            })
            .collect::<ReadResult<_>>()?;

        Ok(MethodDecl {
            name,
            access_level,
            return_type,
            declared_class,
            parameters,
            local_variables,
            attribute_accesses,
            method_invocations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> &'static Path {
        Path::new("model.xml")
    }

    fn main_method() -> MethodDecl {
        MethodDecl {
            name: "main".into(),
            access_level: AccessLevel::Public,
            return_type: "void".into(),
            declared_class: "drawingShapes".into(),
            parameters: vec![ParameterDecl { name: "args".into(), declared_type: "String".into() }],
            local_variables: vec![LocalVariableDecl { name: "application".into(), declared_type: "drawingShapes".into() }],
            attribute_accesses: vec![
                AttributeAccess { name: "application".into(), resolved_type: "drawingShapes".into() },
                AttributeAccess { name: "EXIT_ON_CLOSE".into(), resolved_type: "unknown".into() },
            ],
            method_invocations: vec![MethodInvocation {
                name: "setDefaultCloseOperation".into(),
                accessed_in: "drawingShapes".into(),
            }],
        }
    }

    fn sample() -> CodeModel {
        CodeModel {
            project_name: "drawing-shapes".into(),
            packages: vec![
                PackageDecl {
                    name: "coreElements".into(),
                    classes: vec![ClassDecl {
                        name: "MyOval".into(),
                        access_level: AccessLevel::Public,
                        superclass: Some("MyShape".into()),
                        declared_package: "coreElements".into(),
                        attributes: vec![AttributeDecl {
                            name: "example".into(),
                            access_level: AccessLevel::Private,
                            declared_type: "boolean".into(),
                        }],
                        methods: vec![],
                    }],
                },
                PackageDecl {
                    name: "gui".into(),
                    classes: vec![ClassDecl {
                        name: "drawingShapes".into(),
                        access_level: AccessLevel::Public,
                        superclass: None,
                        declared_package: "gui".into(),
                        attributes: vec![],
                        methods: vec![main_method()],
                    }],
                },
            ],
        }
    }

    #[test]
    fn empty_model() {
        let xml = export_xml(&CodeModel::new("p")).unwrap();
        assert_eq!(xml, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<Project ProjectName=\"p\">\n  <Packages/>\n</Project>\n");
    }

    #[test]
    fn class_and_parameter_layout() {
        let xml = export_xml(&sample()).unwrap();
        assert!(xml.contains(
            "        <Class Name=\"MyOval\" AccessLevel=\"public\" Superclass=\"MyShape\" DeclaredPackage=\"coreElements\">\n          <Attributes>\n            <Attribute Name=\"example\" AccessLevel=\"private\" Type=\"boolean\"/>\n          </Attributes>\n          <Methods/>\n"
        ), "{xml}");
        assert!(xml.contains(
            "              <Parameters NumberOfParameters=\"1\">\n                <Parameter ParameterName=\"args\" ParameterType=\"String\"/>\n              </Parameters>\n"
        ), "{xml}");
        assert!(xml.contains("Superclass=\"\" DeclaredPackage=\"gui\""));
    }

    #[test]
    fn round_trip() {
        let m = sample();
        let xml = export_xml(&m).unwrap();
        let (back, warnings) = import_xml(&xml, origin()).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(back, m);
        assert_eq!(export_xml(&back).unwrap(), xml);
    }

    #[test]
    fn special_characters_round_trip() {
        let mut m = sample();
        m.project_name = "a<b & \"c\" 'd' >\te\nf".into();
        m.packages[0].classes[0].attributes[0].declared_type = "Map<K, V>".into();
        let xml = export_xml(&m).unwrap();
        assert!(xml.contains("Type=\"Map&lt;K, V&gt;\""));
        assert_eq!(import_xml(&xml, origin()).unwrap().0, m);
    }

    #[test]
    fn invalid_model_is_rejected() {
        let mut m = sample();
        m.packages[1].classes[0].methods[0].declared_class = "Other".into();
        let err = export_xml(&m).unwrap_err();
        assert!(err.to_string().contains("gui.drawingShapes.main(String)"), "{err}");
    }

    #[test]
    fn parameter_count_mismatch_warns() {
        let doc = r#"<Project ProjectName="p"><Packages><Package PackageName="q"><Classes>
            <Class Name="A" AccessLevel="public" Superclass="" DeclaredPackage="q"><Attributes/><Methods>
              <Method Name="f" AccessLevel="public" ReturnType="void" DeclaredClass="A">
                <Parameters NumberOfParameters="3">
                  <Parameter ParameterName="a" ParameterType="int"/>
                  <Parameter ParameterName="b" ParameterType="int"/>
                </Parameters>
                <LocalVariables/><AttributeAccesses/><MethodInvocations/>
              </Method></Methods></Class></Classes></Package></Packages></Project>"#;
        let (m, warnings) = import_xml(doc, origin()).unwrap();
        assert_eq!(m.packages[0].classes[0].methods[0].parameters.len(), 2);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].message.contains("NumberOfParameters"));
        assert_eq!(m.packages[0].classes[0].superclass, None);
    }

    #[test]
    fn unknown_attributes_and_elements_warn() {
        let doc = r#"<Project ProjectName="p" Version="2"><Packages><Extra/></Packages></Project>"#;
        let (m, warnings) = import_xml(doc, origin()).unwrap();
        assert!(m.packages.is_empty());
        assert_eq!(warnings.len(), 2);
        assert!(warnings.iter().all(|w| !w.is_error()));
        let loc = warnings[0].location.as_ref().unwrap();
        assert_eq!((loc.line, loc.column), (1, 1));
    }

    #[test]
    fn errors() {
        assert!(import_xml("this is not xml", origin()).unwrap_err().is_error());
        let e = import_xml("<Model/>", origin()).unwrap_err();
        assert!(e.message.contains("unknown root element"));
        let e = import_xml("<Project/>", origin()).unwrap_err();
        assert!(e.message.contains("ProjectName"));
        let e = import_xml(
            r#"<Project ProjectName="p"><Packages><Package PackageName="q"><Classes><Class Name="A" AccessLevel="friend" Superclass="" DeclaredPackage="q"/></Classes></Package></Packages></Project>"#,
            origin(),
        )
        .unwrap_err();
        assert!(e.message.contains("friend"));
    }

    #[test]
    fn missing_containers_are_empty() {
        let (m, w) = import_xml(r#"<Project ProjectName="p"/>"#, origin()).unwrap();
        assert!(m.packages.is_empty() && w.is_empty());
    }
}
