//! Syntax-level extraction of named casts from C++ source.
//!
//! There is no parser here. Named casts are introduced by reserved keywords,
//! so a balanced-delimiter matcher over the token stream is enough to find
//! them, classify the statement they sit in, and bind call arguments to the
//! formal parameter names of matching function declarations.

mod context;
mod extract;
mod index;
mod lexer;
mod scan;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use context::classify_context;
pub use extract::{extract_corpus, extract_file, CorpusExtraction, ExtractOptions, FileExtraction};
pub use index::{index_functions, resolve_formal, FunctionIndex, FunctionSig, Unresolved};
pub use lexer::{is_keyword, lex, tokenize, Lexed, Token, TokenKind, KEYWORDS};
pub use scan::{scan_macro_bodies, scan_named_casts, CastOccurrence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CastKind {
    Static,
    Reinterpret,
    Dynamic,
    Const,
}

impl CastKind {
    pub const ALL: [CastKind; 4] = [
        CastKind::Static,
        CastKind::Reinterpret,
        CastKind::Dynamic,
        CastKind::Const,
    ];

    pub fn from_keyword(text: &str) -> Option<CastKind> {
        match text {
            "static_cast" => Some(CastKind::Static),
            "dynamic_cast" => Some(CastKind::Dynamic),
            "const_cast" => Some(CastKind::Const),
            "reinterpret_cast" => Some(CastKind::Reinterpret),
            _ => None,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            CastKind::Static => "static_cast",
            CastKind::Dynamic => "dynamic_cast",
            CastKind::Const => "const_cast",
            CastKind::Reinterpret => "reinterpret_cast",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CastKind::Static => "static",
            CastKind::Dynamic => "dynamic",
            CastKind::Const => "const",
            CastKind::Reinterpret => "reinterpret",
        }
    }

    /// Single-letter column label used in the statistics table.
    pub fn letter(self) -> char {
        match self {
            CastKind::Static => 'S',
            CastKind::Reinterpret => 'R',
            CastKind::Dynamic => 'D',
            CastKind::Const => 'C',
        }
    }
}

impl fmt::Display for CastKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CastKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" | "static_cast" => Ok(CastKind::Static),
            "dynamic" | "dynamic_cast" => Ok(CastKind::Dynamic),
            "const" | "const_cast" => Ok(CastKind::Const),
            "reinterpret" | "reinterpret_cast" => Ok(CastKind::Reinterpret),
            other => Err(format!("unknown cast kind `{other}`")),
        }
    }
}

/// Where the value produced by a cast ends up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CastContext {
    /// Right-hand side of an assignment or an initialized declaration.
    Assignment {
        dest_tokens: Vec<Token>,
    },
    /// A whole argument of a call expression.
    CallArg {
        callee: String,
        arg_index: usize,
        /// Number of arguments at the call site.
        arity: usize,
        /// The bound formal parameter name; empty until resolved.
        dest_tokens: Vec<Token>,
        unresolved: Option<Unresolved>,
    },
    Other,
}

impl CastContext {
    pub fn label(&self) -> &'static str {
        match self {
            CastContext::Assignment { .. } => "assignment",
            CastContext::CallArg { .. } => "call_arg",
            CastContext::Other => "other",
        }
    }

    pub fn dest_tokens(&self) -> &[Token] {
        match self {
            CastContext::Assignment { dest_tokens } | CastContext::CallArg { dest_tokens, .. } => dest_tokens,
            CastContext::Other => &[],
        }
    }
}

/// One extracted named cast.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCastRecord {
    pub file: String,
    pub component: String,
    pub line: u32,
    pub col: u32,
    pub kind: CastKind,
    pub target_type: String,
    pub source_tokens: Vec<Token>,
    pub context: CastContext,
    pub in_macro_body: bool,
}

impl NamedCastRecord {
    /// Stable join key: `file:line:col:kind`.
    pub fn id(&self) -> String {
        format!("{}:{}:{}:{}", self.file, self.line, self.col, self.kind)
    }

    pub fn source_text(&self) -> String {
        join_tokens(&self.source_tokens)
    }
}

/// A non-fatal problem found while reading a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// Re-join tokens into source-like text. A single space is kept wherever the
/// original had any whitespace between two tokens.
pub fn join_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, tok) in tokens.iter().enumerate() {
        if i > 0 {
            let prev = &tokens[i - 1];
            if prev.line != tok.line || prev.end_col() < tok.col {
                out.push(' ');
            }
        }
        out.push_str(&tok.text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cast_kind_round_trips_through_text() {
        for kind in CastKind::ALL {
            assert_eq!(kind.as_str().parse::<CastKind>().unwrap(), kind);
            assert_eq!(CastKind::from_keyword(kind.keyword()), Some(kind));
        }
        assert!("implicit".parse::<CastKind>().is_err());
    }

    #[test]
    fn join_preserves_spacing_shape() {
        let tokens = tokenize("std::shared_ptr <i::BackingStore>*");
        assert_eq!(join_tokens(&tokens), "std::shared_ptr <i::BackingStore>*");
        let tokens = tokenize("error +\n  1");
        assert_eq!(join_tokens(&tokens), "error + 1");
    }
}
