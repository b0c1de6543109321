//! Hand-written lexer for the supported Java subset.
//!
//! Comments and whitespace never reach the token stream. `>` is always a
//! single token, as in `List<List<String>>`; the expression parser rejoins
//! adjacent `>` / `=` tokens into shift and comparison operators.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Punctuation,
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub column: u32,
    /// Byte range in the source.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && self.kind != TokenKind::Literal
    }

    pub fn is_identifier(&self) -> bool {
        self.kind == TokenKind::Identifier
    }

    /// True when `next` starts right where this token ends.
    pub fn touches(&self, next: &Token) -> bool {
        self.end == next.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for LexError {}

pub const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while",
];

const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

// Longest first; `>` combinations are deliberately absent.
const PUNCTUATION: &[&str] = &[
    "...", "<<=", "::", "->", "<<", "<=", "==", "!=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", ">", "<", "!", "~",
    "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

/// Tokenizes `source`, stopping at the first lexical error.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer::new(source);
    let mut tokens = Vec::new();
    while let Some(step) = lexer.next_token() {
        tokens.push(step?);
    }
    Ok(tokens)
}

/// Tokenizes `source`, skipping over lexical errors and returning all of them.
pub fn tokenize_lenient(source: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut lexer = Lexer::new(source);
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    while let Some(step) = lexer.next_token() {
        match step {
            Ok(t) => tokens.push(t),
            Err(e) => errors.push(e),
        }
    }
    (tokens, errors)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, column: 1 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn bump_str(&mut self, s: &str) {
        for _ in s.chars() {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>, line: u32, column: u32) -> LexError {
        LexError { message: message.into(), line, column }
    }

    /// Skips whitespace and comments. An unterminated block comment is an error.
    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_nth(1) == Some('/') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('/') if self.peek_nth(1) == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump_str("/*");
                    loop {
                        if self.rest().starts_with("*/") {
                            self.bump_str("*/");
                            break;
                        }
                        if self.bump().is_none() {
                            return Err(self.error("unterminated comment", line, column));
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token(&mut self) -> Option<Result<Token, LexError>> {
        if let Err(e) = self.skip_trivia() {
            return Some(Err(e));
        }
        let c = self.peek()?;
        let (start, line, column) = (self.pos, self.line, self.column);
        let kind = if is_ident_start(c) {
            self.bump();
            while self.peek().is_some_and(is_ident_continue) {
                self.bump();
            }
            let word = &self.src[start..self.pos];
            if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else if LITERAL_WORDS.contains(&word) {
                TokenKind::Literal
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() || (c == '.' && self.peek_nth(1).is_some_and(|d| d.is_ascii_digit())) {
            self.number();
            TokenKind::Literal
        } else if c == '"' {
            if let Err(e) = self.string(line, column) {
                return Some(Err(e));
            }
            TokenKind::Literal
        } else if c == '\'' {
            if let Err(e) = self.char_literal(line, column) {
                return Some(Err(e));
            }
            TokenKind::Literal
        } else if let Some(p) = PUNCTUATION.iter().find(|p| self.rest().starts_with(**p)) {
            self.bump_str(p);
            TokenKind::Punctuation
        } else {
            self.bump();
            return Some(Err(self.error(format!("illegal character `{c}`"), line, column)));
        };
        Some(Ok(Token { kind, text: self.src[start..self.pos].to_string(), line, column, start, end: self.pos }))
    }

    fn number(&mut self) {
        let hex = self.peek() == Some('0') && matches!(self.peek_nth(1), Some('x' | 'X' | 'b' | 'B'));
        if hex {
            self.bump();
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_hexdigit() || c == '_') {
                self.bump();
            }
        } else {
            self.digits();
            if self.peek() == Some('.') && self.peek_nth(1) != Some('.') && !self.peek_nth(1).is_some_and(is_ident_start_not_exponent) {
                self.bump();
                self.digits();
            }
            if matches!(self.peek(), Some('e' | 'E')) {
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                self.digits();
            }
        }
        while self.peek().is_some_and(is_ident_continue) {
            self.bump();
        }
    }

    fn digits(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            self.bump();
        }
    }

    fn string(&mut self, line: u32, column: u32) -> Result<(), LexError> {
        if self.rest().starts_with("\"\"\"") {
            self.bump_str("\"\"\"");
            loop {
                if self.rest().starts_with("\"\"\"") {
                    self.bump_str("\"\"\"");
                    return Ok(());
                }
                match self.bump() {
                    Some('\\') => {
                        self.bump();
                    }
                    Some(_) => {}
                    None => return Err(self.error("unterminated text block", line, column)),
                }
            }
        }
        self.bump();
        self.quoted('"', "unterminated string literal", line, column)
    }

    fn char_literal(&mut self, line: u32, column: u32) -> Result<(), LexError> {
        self.bump();
        self.quoted('\'', "unterminated character literal", line, column)
    }

    fn quoted(&mut self, close: char, message: &str, line: u32, column: u32) -> Result<(), LexError> {
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.error(message, line, column)),
                Some('\\') => {
                    self.bump();
                    if self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some(c) => {
                    self.bump();
                    if c == close {
                        return Ok(());
                    }
                }
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_start_not_exponent(c: char) -> bool {
    is_ident_start(c) && !matches!(c, 'e' | 'E' | 'f' | 'F' | 'd' | 'D')
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}
