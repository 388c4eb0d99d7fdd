//! A C++ lexer that keeps just enough structure for cast extraction.
//!
//! Comments and whitespace are dropped. String, character and raw string
//! literals come out as single `literal` tokens. Tokens on preprocessor
//! directive lines carry the ordinal of their directive so macro bodies can
//! be scanned separately from ordinary code.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    Literal,
    Punctuator,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the first character.
    pub line: u32,
    /// 1-based column (in characters) of the first character.
    pub col: u32,
    directive: Option<u32>,
}

impl Token {
    pub fn new(kind: TokenKind, text: impl Into<String>, line: u32, col: u32) -> Self {
        Token {
            kind,
            text: text.into(),
            line,
            col,
            directive: None,
        }
    }

    /// Ordinal of the preprocessor directive this token belongs to, if any.
    pub fn directive(&self) -> Option<u32> {
        self.directive
    }

    pub fn in_directive(&self) -> bool {
        self.directive.is_some()
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.kind == TokenKind::Punctuator && self.text == text
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == text
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Identifier
    }

    /// Column one past the last character, assuming the token sits on one line.
    pub(crate) fn end_col(&self) -> u32 {
        self.col + self.text.chars().count() as u32
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TokenKind::Identifier => "ident",
            TokenKind::Keyword => "keyword",
            TokenKind::Literal => "literal",
            TokenKind::Punctuator => "punct",
            TokenKind::Other => "other",
        };
        write!(f, "{kind}:{}", self.text)
    }
}

/// C++17 reserved words. The four named-cast keywords are among them.
pub const KEYWORDS: &[&str] = &[
    "alignas",
    "alignof",
    "asm",
    "auto",
    "bool",
    "break",
    "case",
    "catch",
    "char",
    "char16_t",
    "char32_t",
    "class",
    "const",
    "const_cast",
    "constexpr",
    "continue",
    "decltype",
    "default",
    "delete",
    "do",
    "double",
    "dynamic_cast",
    "else",
    "enum",
    "explicit",
    "export",
    "extern",
    "false",
    "float",
    "for",
    "friend",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "mutable",
    "namespace",
    "new",
    "noexcept",
    "nullptr",
    "operator",
    "private",
    "protected",
    "public",
    "register",
    "reinterpret_cast",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "static_assert",
    "static_cast",
    "struct",
    "switch",
    "template",
    "this",
    "thread_local",
    "throw",
    "true",
    "try",
    "typedef",
    "typeid",
    "typename",
    "union",
    "unsigned",
    "using",
    "virtual",
    "void",
    "volatile",
    "wchar_t",
    "while",
];

pub fn is_keyword(text: &str) -> bool {
    KEYWORDS.binary_search(&text).is_ok()
}

// Longest first within each length class.
const PUNCTUATORS: &[&str] = &[
    "<<=", ">>=", "<=>", "...", "->*", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##", ".*",
];

const SINGLE_PUNCT: &str = "{}[]()<>;:,.?+-*/%^&|~!=#";

const STRING_PREFIXES: &[&str] = &["u8", "u", "U", "L"];
const RAW_PREFIXES: &[&str] = &["R", "u8R", "uR", "UR", "LR"];

/// Result of lexing one file.
#[derive(Debug, Default, Clone)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub warnings: Vec<Warning>,
}

/// Tokenize C++ source text.
pub fn tokenize(content: &str) -> Vec<Token> {
    lex(content).tokens
}

/// Tokenize and keep any warnings about truncated input.
pub fn lex(content: &str) -> Lexed {
    Lexer::new(content).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    // True until the first token of the current logical line.
    line_start: bool,
    directive: Option<u32>,
    next_directive: u32,
    out: Lexed,
}

impl Lexer {
    fn new(content: &str) -> Self {
        Lexer {
            chars: content.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            line_start: true,
            directive: None,
            next_directive: 0,
            out: Lexed::default(),
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn warn(&mut self, line: u32, col: u32, message: impl Into<String>) {
        self.out.warnings.push(Warning {
            line,
            col,
            message: message.into(),
        });
    }

    fn push(&mut self, kind: TokenKind, text: String, line: u32, col: u32) {
        self.out.tokens.push(Token {
            kind,
            text,
            line,
            col,
            directive: self.directive,
        });
        self.line_start = false;
    }

    fn run(mut self) -> Lexed {
        while let Some(c) = self.peek(0) {
            match c {
                '\n' => {
                    self.bump();
                    self.directive = None;
                    self.line_start = true;
                }
                '\\' if self.peek(1) == Some('\n') => {
                    self.bump();
                    self.bump();
                }
                '\\' if self.peek(1) == Some('\r') && self.peek(2) == Some('\n') => {
                    self.bump();
                    self.bump();
                    self.bump();
                }
                c if c.is_whitespace() => {
                    self.bump();
                }
                '/' if self.peek(1) == Some('/') => self.line_comment(),
                '/' if self.peek(1) == Some('*') => {
                    if !self.block_comment() {
                        break;
                    }
                }
                '#' if self.line_start && self.directive.is_none() => {
                    self.directive = Some(self.next_directive);
                    self.next_directive += 1;
                    self.punctuator();
                }
                '"' => {
                    if !self.quoted(String::new(), '"') {
                        break;
                    }
                }
                '\'' => {
                    if !self.quoted(String::new(), '\'') {
                        break;
                    }
                }
                c if c.is_ascii_digit() => self.number(),
                '.' if self.peek(1).is_some_and(|d| d.is_ascii_digit()) => self.number(),
                c if c == '_' || c.is_ascii_alphabetic() => {
                    if !self.word() {
                        break;
                    }
                }
                _ => self.punctuator(),
            }
        }
        self.out
    }

    fn line_comment(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            if c == '\\' && self.peek(1) == Some('\n') {
                self.bump();
            }
            self.bump();
        }
    }

    fn block_comment(&mut self) -> bool {
        let (line, col) = (self.line, self.col);
        self.bump();
        self.bump();
        loop {
            match self.peek(0) {
                None => {
                    self.warn(line, col, "unterminated block comment");
                    return false;
                }
                Some('*') if self.peek(1) == Some('/') => {
                    self.bump();
                    self.bump();
                    return true;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    /// Lex a quoted literal whose optional prefix has already been consumed.
    fn quoted(&mut self, mut text: String, quote: char) -> bool {
        let line = self.line;
        let col = self.col - text.chars().count() as u32;
        text.push(quote);
        self.bump();
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    let what = if quote == '"' { "string" } else { "character" };
                    self.warn(line, col, format!("unterminated {what} literal"));
                    return false;
                }
                Some('\\') => {
                    text.push('\\');
                    self.bump();
                    if let Some(c) = self.bump() {
                        text.push(c);
                    }
                }
                Some(c) if c == quote => {
                    text.push(c);
                    self.bump();
                    break;
                }
                Some(c) => {
                    text.push(c);
                    self.bump();
                }
            }
        }
        self.literal_suffix(&mut text);
        self.push(TokenKind::Literal, text, line, col);
        true
    }

    /// Raw string: the prefix (ending in `R`) has been consumed, `"` is next.
    fn raw_string(&mut self, mut text: String) -> bool {
        let line = self.line;
        let col = self.col - text.chars().count() as u32;
        text.push('"');
        self.bump();
        let mut delim = String::new();
        while let Some(c) = self.peek(0) {
            if c == '(' {
                break;
            }
            if c == '"' || c == '\n' || c.is_whitespace() || delim.len() > 16 {
                self.warn(line, col, "malformed raw string delimiter");
                return false;
            }
            delim.push(c);
            self.bump();
        }
        text.push_str(&delim);
        let closer = format!("){delim}\"");
        loop {
            if self.peek(0).is_none() {
                self.warn(line, col, "unterminated raw string literal");
                return false;
            }
            if self.starts_with(&closer) {
                for _ in 0..closer.chars().count() {
                    text.push(self.bump().unwrap_or_default());
                }
                break;
            }
            if let Some(c) = self.bump() {
                text.push(c);
            }
        }
        self.literal_suffix(&mut text);
        self.push(TokenKind::Literal, text, line, col);
        true
    }

    // User-defined literal suffixes like "abc"s or 'x'_c.
    fn literal_suffix(&mut self, text: &mut String) {
        while let Some(c) = self.peek(0) {
            if c == '_' || c.is_ascii_alphanumeric() {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
    }

    fn number(&mut self) {
        let (line, col) = (self.line, self.col);
        let mut text = String::new();
        while let Some(c) = self.peek(0) {
            let hex = text.starts_with("0x") || text.starts_with("0X");
            let exponent_sign = matches!(c, '+' | '-')
                && match text.chars().last() {
                    Some('e' | 'E') => !hex,
                    Some('p' | 'P') => hex,
                    _ => false,
                };
            let separator = c == '\'' && self.peek(1).is_some_and(|n| n.is_ascii_alphanumeric());
            if c.is_ascii_alphanumeric() || c == '.' || c == '_' || exponent_sign || separator {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        self.push(TokenKind::Literal, text, line, col);
    }

    fn word(&mut self) -> bool {
        let (line, col) = (self.line, self.col);
        let mut text = String::new();
        while let Some(c) = self.peek(0) {
            if c == '_' || c.is_ascii_alphanumeric() {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek(0) == Some('"') {
            if RAW_PREFIXES.contains(&text.as_str()) {
                return self.raw_string(text);
            }
            if STRING_PREFIXES.contains(&text.as_str()) {
                return self.quoted(text, '"');
            }
        }
        if self.peek(0) == Some('\'') && STRING_PREFIXES.contains(&text.as_str()) {
            return self.quoted(text, '\'');
        }
        let kind = if is_keyword(&text) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(kind, text, line, col);
        true
    }

    fn punctuator(&mut self) {
        let (line, col) = (self.line, self.col);
        for p in PUNCTUATORS {
            if self.starts_with(p) {
                for _ in 0..p.len() {
                    self.bump();
                }
                self.push(TokenKind::Punctuator, p.to_string(), line, col);
                return;
            }
        }
        let c = self.bump().unwrap_or_default();
        let kind = if SINGLE_PUNCT.contains(c) {
            TokenKind::Punctuator
        } else {
            TokenKind::Other
        };
        self.push(kind, c.to_string(), line, col);
    }
}
