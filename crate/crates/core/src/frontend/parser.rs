//! Recursive-descent parser over the token stream produced by the lexer.
//!
//! Grammar subset:
//!
//! ```text
//! unit       → [ "package" qname ";" ] { import } { type_decl | ";" }
//! import     → "import" [ "static" ] qname [ "." "*" ] ";"
//! type_decl  → modifiers "class" IDENT [ type_params ] [ "extends" type ]
//!              [ "implements" type { "," type } ] class_body
//! member     → field | method | constructor | ";"
//! field      → modifiers type declarator { "," declarator } ";"
//! method     → modifiers [ type_params ] type IDENT params [ "throws" types ] ( block | ";" )
//! ctor       → modifiers [ type_params ] IDENT params [ "throws" types ] block
//! ```
//!
//! Statements cover blocks, local declarations, expression statements, `if`,
//! `for` (both forms), `while`, `do`, `try`, `switch`, `synchronized`,
//! `return`, `throw`, `break`, `continue`, `assert` and labels. Interfaces,
//! enums, annotation types, records, nested and local classes, initializer
//! blocks, lambdas, anonymous class bodies and switch expressions are skipped
//! with a warning.

use std::path::{Path, PathBuf};

use crate::diagnostic::Diagnostic;
use crate::frontend::ast::*;
use crate::frontend::lexer::{Token, TokenKind};
use crate::frontend::ParseMode;
use crate::model::AccessLevel;

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

#[derive(Debug, Clone, PartialEq, Eq)]
struct SyntaxError {
    message: String,
    pos: Pos,
}

type PResult<T> = Result<T, SyntaxError>;

#[derive(Debug, Default)]
struct Modifiers {
    access: Option<AccessLevel>,
    is_static: bool,
}

/// Parses one file. In strict mode the first syntax error aborts the file and
/// no tree is returned; in lenient mode the offending top-level declaration is
/// dropped with a warning and parsing resumes at the next one.
pub fn parse_compilation_unit(
    tokens: &[Token],
    file: &Path,
    mode: ParseMode,
) -> (Option<CompilationUnit>, Vec<Diagnostic>) {
    let mut p = Parser { tokens, pos: 0, file: file.to_path_buf(), diagnostics: Vec::new() };
    match p.unit(mode) {
        Ok(unit) => (Some(unit), p.diagnostics),
        Err(e) => {
            let diag = p.syntax_diagnostic(&e, mode);
            p.diagnostics.push(diag);
            (None, p.diagnostics)
        }
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    file: PathBuf,
    diagnostics: Vec<Diagnostic>,
}

impl<'t> Parser<'t> {
    // ---- token helpers ----

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + n)
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text))
    }

    fn at_n(&self, n: usize, text: &str) -> bool {
        self.peek_at(n).is_some_and(|t| t.is(text))
    }

    fn at_identifier(&self) -> bool {
        self.peek().is_some_and(Token::is_identifier)
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn current_pos(&self) -> Pos {
        match self.peek() {
            Some(t) => Pos { line: t.line, column: t.column },
            None => match self.tokens.last() {
                Some(t) => Pos { line: t.line, column: t.column + t.text.chars().count() as u32 },
                None => Pos { line: 1, column: 1 },
            },
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of file".to_string(),
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(SyntaxError { message: format!("expected {expected}, found {}", self.found()), pos: self.current_pos() })
    }

    fn expect(&mut self, text: &str) -> PResult<&'t Token> {
        if self.at(text) {
            Ok(self.bump().expect("checked"))
        } else {
            self.error(&format!("`{text}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        if self.at_identifier() {
            Ok(self.bump().expect("checked").text.clone())
        } else {
            self.error("identifier")
        }
    }

    /// Source text of tokens `start..end`, with a single space wherever the
    /// source had whitespace between tokens.
    fn text_between(&self, start: usize, end: usize) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens[start..end].iter().enumerate() {
            if i > 0 && !self.tokens[start + i - 1].touches(t) {
                out.push(' ');
            }
            out.push_str(&t.text);
        }
        out
    }

    fn warn_unsupported(&mut self, construct: &str, pos: Pos) {
        self.diagnostics.push(
            Diagnostic::warning(format!("unsupported construct: {construct}")).at(&self.file, pos.line, pos.column),
        );
    }

    fn syntax_diagnostic(&self, e: &SyntaxError, mode: ParseMode) -> Diagnostic {
        let d = match mode {
            ParseMode::Strict => Diagnostic::error(format!("syntax error: {}", e.message)),
            ParseMode::Lenient => {
                Diagnostic::warning(format!("syntax error: {}; skipping to next top-level declaration", e.message))
            }
        };
        d.at(&self.file, e.pos.line, e.pos.column)
    }

    /// Runs `f`, rewinding to the starting position if it fails.
    fn speculate<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> Option<T> {
        let start = self.pos;
        let mark = self.diagnostics.len();
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.pos = start;
                self.diagnostics.truncate(mark);
                None
            }
        }
    }

    /// Skips a balanced `open ... close` group starting at the current token.
    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        let start = self.current_pos();
        self.expect(open)?;
        let mut depth = 1usize;
        while depth > 0 {
            match self.bump() {
                Some(t) if t.is(open) => depth += 1,
                Some(t) if t.is(close) => depth -= 1,
                Some(_) => {}
                None => {
                    return Err(SyntaxError { message: format!("unclosed `{open}`"), pos: start });
                }
            }
        }
        Ok(())
    }

    /// Skips tokens up to and including the next balanced `{ ... }` body.
    fn skip_to_body(&mut self) -> PResult<()> {
        while !self.at("{") {
            if self.at_eof() || self.at(";") || self.at("}") {
                return self.error("`{`");
            }
            self.bump();
        }
        self.skip_balanced("{", "}")
    }

    // ---- compilation unit ----

    fn unit(&mut self, mode: ParseMode) -> PResult<CompilationUnit> {
        let mut unit = CompilationUnit { file: self.file.clone(), package: None, imports: Vec::new(), classes: Vec::new() };

        let header_start = self.pos;
        if let Err(e) = self.header(&mut unit) {
            if mode == ParseMode::Strict {
                return Err(e);
            }
            let diag = self.syntax_diagnostic(&e, mode);
            self.diagnostics.push(diag);
            self.recover(header_start);
        }

        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let start = self.pos;
            match self.type_decl() {
                Ok(Some(class)) => unit.classes.push(class),
                Ok(None) => {}
                Err(e) if mode == ParseMode::Lenient => {
                    let diag = self.syntax_diagnostic(&e, mode);
                    self.diagnostics.push(diag);
                    self.recover(start);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(unit)
    }

    fn header(&mut self, unit: &mut CompilationUnit) -> PResult<()> {
        if self.eat("package") {
            unit.package = Some(self.qualified_name()?);
            self.expect(";")?;
        }
        while self.eat("import") {
            let is_static = self.eat("static");
            let mut path = self.ident()?;
            let mut wildcard = false;
            while self.eat(".") {
                if self.eat("*") {
                    wildcard = true;
                    break;
                }
                path.push('.');
                path.push_str(&self.ident()?);
            }
            self.expect(";")?;
            unit.imports.push(Import { path, is_static, wildcard });
        }
        Ok(())
    }

    /// Lenient-mode recovery: skip past the declaration that began at `start`.
    fn recover(&mut self, start: usize) {
        self.pos = start;
        let mut depth = 0usize;
        let mut seen_brace = false;
        while let Some(t) = self.bump() {
            if t.is("{") {
                depth += 1;
                seen_brace = true;
            } else if t.is("}") {
                if depth <= 1 {
                    if seen_brace {
                        break;
                    }
                    depth = 0;
                } else {
                    depth -= 1;
                }
            } else if t.is(";") && !seen_brace {
                break;
            }
        }
        if self.pos == start {
            self.pos = (start + 1).min(self.tokens.len());
        }
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && self.peek_at(1).is_some_and(Token::is_identifier) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn annotation(&mut self) -> PResult<()> {
        self.expect("@")?;
        self.qualified_name()?;
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(())
    }

    fn at_annotation_use(&self) -> bool {
        self.at("@") && !self.at_n(1, "interface")
    }

    fn modifiers(&mut self) -> PResult<Modifiers> {
        let mut mods = Modifiers::default();
        loop {
            if self.at_annotation_use() {
                self.annotation()?;
                continue;
            }
            let Some(t) = self.peek() else { break };
            match t.text.as_str() {
                "public" if t.kind == TokenKind::Keyword => mods.access = Some(AccessLevel::Public),
                "private" if t.kind == TokenKind::Keyword => mods.access = Some(AccessLevel::Private),
                "protected" if t.kind == TokenKind::Keyword => mods.access = Some(AccessLevel::Protected),
                "static" if t.kind == TokenKind::Keyword && !self.at_n(1, "{") => mods.is_static = true,
                "final" | "abstract" | "strictfp" | "transient" | "volatile" | "native" | "default"
                    if t.kind == TokenKind::Keyword && !self.at_n(1, ":") =>
                {
                    // `default` doubles as a switch label; only treat it as a modifier here.
                }
                "synchronized" if t.kind == TokenKind::Keyword && !self.at_n(1, "(") => {}
                "sealed" | "non" if t.is_identifier() && self.is_contextual_modifier() => {
                    if t.text == "non" {
                        self.pos += 2;
                    }
                }
                _ => break,
            }
            self.bump();
        }
        Ok(mods)
    }

    fn is_contextual_modifier(&self) -> bool {
        match self.peek().map(|t| t.text.as_str()) {
            Some("sealed") => self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Keyword),
            Some("non") => self.at_n(1, "-") && self.peek_at(2).is_some_and(|t| t.text == "sealed"),
            _ => false,
        }
    }

    /// Returns the kind name of an unsupported type declaration starting here.
    fn unsupported_type_decl(&self) -> Option<&'static str> {
        if self.at("interface") {
            Some("interface")
        } else if self.at("enum") {
            Some("enum")
        } else if self.at("@") && self.at_n(1, "interface") {
            Some("annotation type")
        } else if self.peek().is_some_and(|t| t.is_identifier() && t.text == "record")
            && self.peek_at(1).is_some_and(Token::is_identifier)
        {
            Some("record")
        } else {
            None
        }
    }

    fn type_decl(&mut self) -> PResult<Option<ClassNode>> {
        let mods = self.modifiers()?;
        if let Some(kind) = self.unsupported_type_decl() {
            let pos = self.current_pos();
            self.warn_unsupported(kind, pos);
            self.skip_to_body()?;
            return Ok(None);
        }
        if !self.at("class") {
            return self.error("class declaration");
        }
        self.class_decl(mods).map(Some)
    }

    fn class_decl(&mut self, mods: Modifiers) -> PResult<ClassNode> {
        let pos = self.current_pos();
        self.expect("class")?;
        let name = self.ident()?;
        if self.at("<") {
            self.type_arguments()?;
        }
        let mut superclass = None;
        if self.eat("extends") {
            let ty = self.type_text()?;
            superclass = Some(simple_type_name(&ty).to_string());
        }
        if self.eat("implements") {
            self.type_list()?;
        }
        if self.peek().is_some_and(|t| t.is_identifier() && t.text == "permits") {
            self.bump();
            self.type_list()?;
        }

        let mut class = ClassNode {
            name,
            access: mods.access.unwrap_or(AccessLevel::PackagePrivate),
            superclass,
            fields: Vec::new(),
            methods: Vec::new(),
            pos,
        };
        self.expect("{")?;
        while !self.eat("}") {
            if self.at_eof() {
                return self.error("`}`");
            }
            self.member(&mut class)?;
        }
        Ok(class)
    }

    fn type_list(&mut self) -> PResult<Vec<String>> {
        let mut types = vec![self.type_text()?];
        while self.eat(",") {
            types.push(self.type_text()?);
        }
        Ok(types)
    }

    fn member(&mut self, class: &mut ClassNode) -> PResult<()> {
        if self.eat(";") {
            return Ok(());
        }
        let pos = self.current_pos();
        if self.at("{") {
            self.warn_unsupported("initializer block", pos);
            return self.skip_balanced("{", "}");
        }
        if self.at("static") && self.at_n(1, "{") {
            self.warn_unsupported("static initializer", pos);
            self.bump();
            return self.skip_balanced("{", "}");
        }

        let mods = self.modifiers()?;
        let access = mods.access.unwrap_or(AccessLevel::PackagePrivate);
        if self.at("class") || self.unsupported_type_decl().is_some() {
            let kind = self.unsupported_type_decl().unwrap_or("class");
            let pos = self.current_pos();
            self.warn_unsupported(&format!("nested {kind}"), pos);
            return self.skip_to_body();
        }
        if self.at("<") {
            self.type_arguments()?;
        }

        let pos = self.current_pos();
        let is_constructor =
            self.peek().is_some_and(|t| t.is_identifier() && t.text == class.name) && self.at_n(1, "(");
        if is_constructor {
            let name = self.ident()?;
            let method = self.method_rest(name, class.name.clone(), access, true, pos)?;
            class.methods.push(method);
            return Ok(());
        }

        let ty = self.type_text()?;
        let name = self.ident()?;
        if self.at("(") {
            let method = self.method_rest(name, ty, access, false, pos)?;
            class.methods.push(method);
            return Ok(());
        }

        let mut declarators = vec![self.declarator_rest(name)?];
        while self.eat(",") {
            let name = self.ident()?;
            declarators.push(self.declarator_rest(name)?);
        }
        self.expect(";")?;
        class.fields.extend(declarators.into_iter().map(|d| FieldNode { name: d.name, access, ty: ty.clone() }));
        Ok(())
    }

    fn method_rest(
        &mut self,
        name: String,
        return_type: String,
        access: AccessLevel,
        is_constructor: bool,
        pos: Pos,
    ) -> PResult<MethodNode> {
        let params = self.parameters()?;
        self.skip_dims();
        if self.eat("throws") {
            self.type_list()?;
        }
        let body = if self.eat(";") { None } else { Some(self.block()?) };
        Ok(MethodNode { name, access, return_type, is_constructor, params, body, pos })
    }

    fn parameters(&mut self) -> PResult<Vec<Param>> {
        self.expect("(")?;
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        loop {
            self.modifiers()?;
            let start = self.pos;
            self.type_text()?;
            if self.eat("...") {
                // varargs keep the ellipsis in the type text
            }
            let ty = self.text_between(start, self.pos);
            let name = if self.at("this") {
                // receiver parameter
                self.bump();
                "this".to_string()
            } else {
                self.ident()?
            };
            self.skip_dims();
            params.push(Param { name, ty });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    /// C-style array dimensions after a declarator name. They are not folded
    /// into the recorded type text.
    fn skip_dims(&mut self) {
        while self.at("[") && self.at_n(1, "]") {
            self.pos += 2;
        }
    }

    fn declarator_rest(&mut self, name: String) -> PResult<Declarator> {
        self.skip_dims();
        let init = if self.eat("=") { Some(self.var_initializer()?) } else { None };
        Ok(Declarator { name, init })
    }

    fn var_initializer(&mut self) -> PResult<Expr> {
        if self.at("{") {
            Ok(Expr::ArrayInit(self.array_initializer()?))
        } else {
            self.expr()
        }
    }

    fn array_initializer(&mut self) -> PResult<Vec<Expr>> {
        self.expect("{")?;
        let mut items = Vec::new();
        while !self.eat("}") {
            items.push(self.var_initializer()?);
            if !self.eat(",") {
                self.expect("}")?;
                break;
            }
        }
        Ok(items)
    }

    // ---- types ----

    /// Parses a type and returns its source text.
    fn type_text(&mut self) -> PResult<String> {
        while self.at_annotation_use() {
            self.annotation()?;
        }
        let type_start = self.pos;
        if self.peek().is_some_and(|t| t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str())) {
            self.bump();
        } else {
            self.ident()?;
            if self.at("<") {
                self.type_arguments()?;
            }
            while self.at(".") && self.peek_at(1).is_some_and(Token::is_identifier) {
                self.pos += 2;
                if self.at("<") {
                    self.type_arguments()?;
                }
            }
        }
        self.skip_dims();
        Ok(self.text_between(type_start, self.pos))
    }

    fn type_arguments(&mut self) -> PResult<()> {
        self.expect("<")?;
        if self.eat(">") {
            return Ok(());
        }
        loop {
            while self.at_annotation_use() {
                self.annotation()?;
            }
            if self.eat("?") {
                if self.eat("extends") || self.eat("super") {
                    self.bounded_type()?;
                }
            } else {
                self.type_text()?;
                if self.eat("extends") {
                    self.bounded_type()?;
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(())
    }

    fn bounded_type(&mut self) -> PResult<()> {
        self.type_text()?;
        while self.eat("&") {
            self.type_text()?;
        }
        Ok(())
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Block> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.eat("}") {
            if self.at_eof() {
                return self.error("`}`");
            }
            if let Some(stmt) = self.block_statement()? {
                stmts.push(stmt);
            }
        }
        Ok(stmts)
    }

    /// A statement inside a block; `None` for a skipped local type declaration.
    fn block_statement(&mut self) -> PResult<Option<Stmt>> {
        let has_mods = self.at("final") || self.at("abstract") || self.at_annotation_use();
        if has_mods {
            self.modifiers()?;
        }
        if self.at("class") || self.unsupported_type_decl().is_some() {
            let kind = self.unsupported_type_decl().unwrap_or("class");
            let pos = self.current_pos();
            self.warn_unsupported(&format!("local {kind}"), pos);
            self.skip_to_body()?;
            return Ok(None);
        }
        if has_mods || self.at_local_var_decl() {
            let stmt = self.local_var_decl()?;
            self.expect(";")?;
            return Ok(Some(stmt));
        }
        self.statement().map(Some)
    }

    /// Looks ahead for `Type IDENT` followed by `=`, `;`, `,`, `[` or `:`.
    fn at_local_var_decl(&mut self) -> bool {
        let start = self.pos;
        let mark = self.diagnostics.len();
        let result = (|| -> PResult<bool> {
            self.type_text()?;
            if !self.at_identifier() {
                return Ok(false);
            }
            self.bump();
            Ok(self.at("=") || self.at(";") || self.at(",") || self.at("[") || self.at(":"))
        })()
        .unwrap_or(false);
        self.pos = start;
        self.diagnostics.truncate(mark);
        result
    }

    fn local_var_decl(&mut self) -> PResult<Stmt> {
        let ty = self.type_text()?;
        let name = self.ident()?;
        let mut declarators = vec![self.declarator_rest(name)?];
        while self.eat(",") {
            let name = self.ident()?;
            declarators.push(self.declarator_rest(name)?);
        }
        Ok(Stmt::LocalVar { ty, declarators })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    fn boxed_statement(&mut self) -> PResult<Box<Stmt>> {
        Ok(Box::new(self.statement()?))
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let Some(tok) = self.peek() else { return self.error("statement") };
        if tok.kind == TokenKind::Keyword || tok.is("{") || tok.is(";") {
            match tok.text.as_str() {
                "{" => return Ok(Stmt::Block(self.block()?)),
                ";" => {
                    self.bump();
                    return Ok(Stmt::Empty);
                }
                "if" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let then = self.boxed_statement()?;
                    let otherwise = if self.eat("else") { Some(self.boxed_statement()?) } else { None };
                    return Ok(Stmt::If { cond, then, otherwise });
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let body = self.boxed_statement()?;
                    return Ok(Stmt::While { cond, body });
                }
                "do" => {
                    self.bump();
                    let body = self.boxed_statement()?;
                    self.expect("while")?;
                    let cond = self.paren_expr()?;
                    self.expect(";")?;
                    return Ok(Stmt::DoWhile { body, cond });
                }
                "for" => return self.for_statement(),
                "return" => {
                    self.bump();
                    let value = if self.at(";") { None } else { Some(self.expr()?) };
                    self.expect(";")?;
                    return Ok(Stmt::Return(value));
                }
                "throw" => {
                    self.bump();
                    let value = self.expr()?;
                    self.expect(";")?;
                    return Ok(Stmt::Throw(value));
                }
                "break" | "continue" => {
                    let is_break = tok.text == "break";
                    self.bump();
                    if self.at_identifier() {
                        self.bump();
                    }
                    self.expect(";")?;
                    return Ok(if is_break { Stmt::Break } else { Stmt::Continue });
                }
                "try" => return self.try_statement(),
                "switch" => {
                    self.bump();
                    let selector = self.paren_expr()?;
                    let cases = self.switch_body()?;
                    return Ok(Stmt::Switch { selector, cases });
                }
                "synchronized" => {
                    self.bump();
                    let lock = self.paren_expr()?;
                    let body = self.block()?;
                    return Ok(Stmt::Synchronized { lock, body });
                }
                "assert" => {
                    self.bump();
                    let cond = self.expr()?;
                    let message = if self.eat(":") { Some(self.expr()?) } else { None };
                    self.expect(";")?;
                    return Ok(Stmt::Assert { cond, message });
                }
                _ => {}
            }
        }
        if tok.is_identifier() && self.at_n(1, ":") {
            let label = self.ident()?;
            self.bump();
            let body = self.boxed_statement()?;
            return Ok(Stmt::Labeled { label, body });
        }
        let e = self.expr()?;
        self.expect(";")?;
        Ok(Stmt::Expr(e))
    }

    fn for_statement(&mut self) -> PResult<Stmt> {
        self.expect("for")?;
        self.expect("(")?;

        let foreach = self.speculate(|p| {
            p.modifiers()?;
            let ty = p.type_text()?;
            let name = p.ident()?;
            p.expect(":")?;
            Ok(Param { name, ty })
        });
        if let Some(var) = foreach {
            let iterable = self.expr()?;
            self.expect(")")?;
            let body = self.boxed_statement()?;
            return Ok(Stmt::ForEach { var, iterable, body });
        }

        let mut init = Vec::new();
        if !self.at(";") {
            let has_mods = self.at("final") || self.at_annotation_use();
            if has_mods {
                self.modifiers()?;
            }
            if has_mods || self.at_local_var_decl() {
                init.push(self.local_var_decl()?);
            } else {
                init.push(Stmt::Expr(self.expr()?));
                while self.eat(",") {
                    init.push(Stmt::Expr(self.expr()?));
                }
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") { None } else { Some(self.expr()?) };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            update.push(self.expr()?);
            while self.eat(",") {
                update.push(self.expr()?);
            }
        }
        self.expect(")")?;
        let body = self.boxed_statement()?;
        Ok(Stmt::For { init, cond, update, body })
    }

    fn try_statement(&mut self) -> PResult<Stmt> {
        self.expect("try")?;
        let mut resources = Vec::new();
        if self.eat("(") {
            while !self.eat(")") {
                let has_mods = self.at("final") || self.at_annotation_use();
                if has_mods {
                    self.modifiers()?;
                }
                if has_mods || self.at_local_var_decl() {
                    resources.push(self.local_var_decl()?);
                } else {
                    resources.push(Stmt::Expr(self.expr()?));
                }
                if !self.eat(";") {
                    self.expect(")")?;
                    break;
                }
            }
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.eat("catch") {
            self.expect("(")?;
            self.modifiers()?;
            let start = self.pos;
            self.type_text()?;
            while self.eat("|") {
                self.type_text()?;
            }
            let ty = self.text_between(start, self.pos);
            let name = self.ident()?;
            self.expect(")")?;
            let body = self.block()?;
            catches.push(CatchClause { param: Param { name, ty }, body });
        }
        let finally = if self.eat("finally") { Some(self.block()?) } else { None };
        if catches.is_empty() && finally.is_none() && resources.is_empty() {
            return self.error("`catch` or `finally`");
        }
        Ok(Stmt::Try { resources, body, catches, finally })
    }

    fn switch_body(&mut self) -> PResult<Vec<SwitchCase>> {
        self.expect("{")?;
        let mut cases = Vec::new();
        while !self.eat("}") {
            let mut labels = Vec::new();
            if self.eat("default") {
            } else if self.eat("case") {
                labels.push(self.ternary()?);
                while self.eat(",") {
                    labels.push(self.ternary()?);
                }
            } else {
                return self.error("`case`, `default` or `}`");
            }
            let mut body = Vec::new();
            if self.eat("->") {
                if self.at("{") {
                    body.push(Stmt::Block(self.block()?));
                } else if self.at("throw") {
                    body.push(self.statement()?);
                } else {
                    body.push(Stmt::Expr(self.expr()?));
                    self.expect(";")?;
                }
            } else {
                self.expect(":")?;
                while !(self.at("case") || self.at("default") && !self.at_n(1, ".") || self.at("}")) {
                    if self.at_eof() {
                        return self.error("`}`");
                    }
                    if let Some(stmt) = self.block_statement()? {
                        body.push(stmt);
                    }
                }
            }
            cases.push(SwitchCase { labels, body });
        }
        Ok(cases)
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        if self.at_lambda() {
            return self.skip_lambda();
        }
        let lhs = self.ternary()?;
        if let Some((op, width)) = self.assignment_op() {
            self.pos += width;
            let value = self.expr()?;
            return Ok(Expr::Assign { op, target: Box::new(lhs), value: Box::new(value) });
        }
        Ok(lhs)
    }

    fn at_lambda(&self) -> bool {
        if self.at_identifier() && self.at_n(1, "->") {
            return true;
        }
        if !self.at("(") {
            return false;
        }
        let mut depth = 0usize;
        for (i, t) in self.tokens[self.pos..].iter().enumerate() {
            if t.is("(") {
                depth += 1;
            } else if t.is(")") {
                depth -= 1;
                if depth == 0 {
                    return self.at_n(i + 1, "->");
                }
            }
        }
        false
    }

    fn skip_lambda(&mut self) -> PResult<Expr> {
        let pos = self.current_pos();
        self.warn_unsupported("lambda", pos);
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        } else {
            self.bump();
        }
        self.expect("->")?;
        if self.at("{") {
            self.skip_balanced("{", "}")?;
        } else {
            self.expr()?;
        }
        Ok(Expr::Unsupported)
    }

    /// Recognizes an assignment operator, rejoining split `>` tokens.
    fn assignment_op(&self) -> Option<(String, usize)> {
        let t = self.peek()?;
        if t.kind != TokenKind::Punctuation {
            return None;
        }
        match t.text.as_str() {
            "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" => Some((t.text.clone(), 1)),
            ">" => {
                let run = self.gt_run();
                match run.as_str() {
                    ">>=" => Some((run, 3)),
                    ">>>=" => Some((run, 4)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Rejoins a run of touching `>` tokens (at most three), optionally
    /// followed by a touching `=`.
    fn gt_run(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while let Some(t) = self.peek_at(i) {
            if i > 0 && !self.tokens[self.pos + i - 1].touches(t) {
                break;
            }
            if t.is(">") && out.len() < 3 {
                out.push('>');
                i += 1;
                continue;
            }
            if t.is("=") {
                out.push('=');
            }
            break;
        }
        out
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.eat("?") {
            let then = self.expr()?;
            self.expect(":")?;
            let otherwise = self.expr()?;
            return Ok(Expr::Conditional { cond: Box::new(cond), then: Box::new(then), otherwise: Box::new(otherwise) });
        }
        Ok(cond)
    }

    /// Returns the binary operator at the cursor with its precedence and width.
    fn binary_op(&self) -> Option<(String, u8, usize)> {
        let t = self.peek()?;
        if t.is("instanceof") {
            return Some(("instanceof".into(), 7, 1));
        }
        if t.kind != TokenKind::Punctuation {
            return None;
        }
        let prec = match t.text.as_str() {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" => 6,
            "<" | "<=" => 7,
            "<<" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            ">" => {
                let run = self.gt_run();
                return match run.as_str() {
                    ">" => Some((run, 7, 1)),
                    ">=" => Some((run, 7, 2)),
                    ">>" => Some((run, 8, 2)),
                    ">>>" => Some((run, 8, 3)),
                    _ => None,
                };
            }
            _ => return None,
        };
        Some((t.text.clone(), prec, 1))
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((op, prec, width)) = self.binary_op() {
            if prec < min_prec {
                break;
            }
            self.pos += width;
            if op == "instanceof" {
                self.eat("final");
                let ty = self.type_text()?;
                if self.at_identifier() {
                    // pattern binding
                    self.bump();
                }
                lhs = Expr::InstanceOf { operand: Box::new(lhs), ty };
                continue;
            }
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        for op in ["++", "--", "+", "-", "!", "~"] {
            if self.eat(op) {
                let operand = self.unary()?;
                return Ok(Expr::Unary { op: op.to_string(), operand: Box::new(operand) });
            }
        }
        if self.at("(") {
            if let Some(cast) = self.speculate(Self::cast) {
                return Ok(cast);
            }
        }
        let primary = self.primary()?;
        self.postfix(primary)
    }

    fn cast(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let primitive = self.peek().is_some_and(|t| PRIMITIVES.contains(&t.text.as_str()) && t.kind == TokenKind::Keyword);
        let start = self.pos;
        self.type_text()?;
        while self.eat("&") {
            self.type_text()?;
        }
        let ty = self.text_between(start, self.pos);
        self.expect(")")?;
        let operand_follows = match self.peek() {
            None => false,
            Some(t) => match t.kind {
                TokenKind::Identifier | TokenKind::Literal => true,
                TokenKind::Keyword => matches!(t.text.as_str(), "this" | "super" | "new" | "switch")
                    || PRIMITIVES.contains(&t.text.as_str()),
                TokenKind::Punctuation => {
                    matches!(t.text.as_str(), "(" | "!" | "~") || primitive && matches!(t.text.as_str(), "+" | "-" | "++" | "--")
                }
            },
        };
        if !operand_follows {
            return self.error("cast operand");
        }
        let operand = if self.at_lambda() { self.skip_lambda()? } else { self.unary()? };
        Ok(Expr::Cast { ty, operand: Box::new(operand) })
    }

    fn arguments(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let Some(t) = self.peek() else { return self.error("expression") };
        match t.kind {
            TokenKind::Literal => {
                self.bump();
                Ok(Expr::Literal(t.text.clone()))
            }
            TokenKind::Identifier => {
                self.bump();
                if self.at("(") {
                    let args = self.arguments()?;
                    Ok(Expr::Call { target: None, name: t.text.clone(), args })
                } else {
                    Ok(Expr::Name(t.text.clone()))
                }
            }
            TokenKind::Keyword => match t.text.as_str() {
                "this" | "super" => {
                    self.bump();
                    if self.at("(") {
                        return Ok(Expr::ConstructorCall(self.arguments()?));
                    }
                    Ok(if t.text == "this" { Expr::This } else { Expr::Super })
                }
                "new" => self.creator(),
                "switch" => {
                    let pos = self.current_pos();
                    self.warn_unsupported("switch expression", pos);
                    self.bump();
                    self.skip_balanced("(", ")")?;
                    self.skip_balanced("{", "}")?;
                    Ok(Expr::Unsupported)
                }
                kw if PRIMITIVES.contains(&kw) => {
                    let ty = self.type_text()?;
                    self.expect(".")?;
                    self.expect("class")?;
                    Ok(Expr::ClassLiteral(ty))
                }
                _ => self.error("expression"),
            },
            TokenKind::Punctuation => {
                if t.is("(") {
                    self.paren_expr()
                } else {
                    self.error("expression")
                }
            }
        }
    }

    fn creator(&mut self) -> PResult<Expr> {
        self.expect("new")?;
        if self.at("<") {
            self.type_arguments()?;
        }
        let start = self.pos;
        while self.at_annotation_use() {
            self.annotation()?;
        }
        let ty = self.type_text()?;
        let array_type = self.text_between(start, self.pos).ends_with("[]");
        if self.at("[") {
            let mut dims = Vec::new();
            while self.eat("[") {
                if !self.eat("]") {
                    dims.push(self.expr()?);
                    self.expect("]")?;
                }
            }
            let init = if self.at("{") { Some(self.array_initializer()?) } else { None };
            return Ok(Expr::NewArray { ty: strip_dims(&ty).to_string(), dims, init });
        }
        if array_type {
            let init = Some(self.array_initializer()?);
            return Ok(Expr::NewArray { ty: strip_dims(&ty).to_string(), dims: Vec::new(), init });
        }
        let args = self.arguments()?;
        if self.at("{") {
            let pos = self.current_pos();
            self.warn_unsupported("anonymous class", pos);
            self.skip_balanced("{", "}")?;
        }
        Ok(Expr::New { ty, args })
    }

    fn postfix(&mut self, mut expr: Expr) -> PResult<Expr> {
        loop {
            if self.eat(".") {
                if self.at("<") {
                    self.type_arguments()?;
                }
                if self.eat("class") {
                    expr = Expr::ClassLiteral(qualified_text(&expr).unwrap_or_default());
                } else if self.eat("this") {
                    expr = Expr::This;
                } else if self.eat("super") {
                    expr = Expr::Super;
                } else if self.at("new") {
                    expr = self.creator()?;
                } else {
                    let name = self.ident()?;
                    if self.at("(") {
                        let args = self.arguments()?;
                        expr = Expr::Call { target: Some(Box::new(expr)), name, args };
                    } else {
                        expr = Expr::FieldAccess { target: Box::new(expr), name };
                    }
                }
            } else if self.at("[") && self.at_n(1, "]") {
                // `Type[].class`
                let mut ty = qualified_text(&expr).unwrap_or_default();
                while self.at("[") && self.at_n(1, "]") {
                    self.pos += 2;
                    ty.push_str("[]");
                }
                self.expect(".")?;
                self.expect("class")?;
                expr = Expr::ClassLiteral(ty);
            } else if self.eat("[") {
                let index = self.expr()?;
                self.expect("]")?;
                expr = Expr::Index { target: Box::new(expr), index: Box::new(index) };
            } else if self.eat("::") {
                let name = if self.eat("new") { "new".to_string() } else { self.ident()? };
                expr = Expr::MethodRef { target: Box::new(expr), name };
            } else if self.at("++") || self.at("--") {
                let op = format!("post{}", self.bump().expect("checked").text);
                expr = Expr::Unary { op, operand: Box::new(expr) };
            } else {
                return Ok(expr);
            }
        }
    }
}

/// `a.b.C<T>[]` → `C`.
pub fn simple_type_name(ty: &str) -> &str {
    let base = ty.split('<').next().unwrap_or(ty);
    let base = strip_dims(base.trim_end_matches("...")).trim();
    base.rsplit('.').next().unwrap_or(base)
}

fn strip_dims(ty: &str) -> &str {
    let mut t = ty.trim_end();
    while let Some(stripped) = t.strip_suffix("[]") {
        t = stripped.trim_end();
    }
    t
}

fn qualified_text(expr: &Expr) -> Option<String> {
    match expr {
        Expr::Name(n) => Some(n.clone()),
        Expr::FieldAccess { target, name } => Some(format!("{}.{name}", qualified_text(target)?)),
        _ => None,
    }
}
