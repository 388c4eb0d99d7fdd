//! Identifier subtokens: the vocabulary that entropy is computed over.

use std::collections::BTreeMap;

use crate::syntax::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubtokenOptions {
    /// Split the contents of string and character literals into words.
    /// When off, each literal contributes its whole lexeme as one subtoken.
    pub split_string_literals: bool,
}

impl Default for SubtokenOptions {
    fn default() -> Self {
        SubtokenOptions {
            split_string_literals: true,
        }
    }
}

/// Keep identifiers, keywords and literals; drop punctuation.
pub fn filter_expression_tokens(tokens: &[Token]) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword | TokenKind::Literal))
        .cloned()
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Upper,
    Lower,
    Digit,
}

fn class(c: char) -> Class {
    if c.is_uppercase() {
        Class::Upper
    } else if c.is_numeric() {
        Class::Digit
    } else {
        Class::Lower
    }
}

/// Split a lexeme at underscores and camel-case boundaries, lowercased.
///
/// An uppercase run followed by a lowercase letter splits before its last
/// capital (`HTTPServer` gives `http`, `server`). Digits stay with the
/// preceding run. A lexeme without letters is returned unchanged.
pub fn split_identifier(text: &str) -> Vec<String> {
    if is_numeric_literal(text) && !text.chars().any(char::is_alphabetic) {
        return vec![text.to_string()];
    }
    let mut out = Vec::new();
    for segment in text.split(|c: char| !c.is_alphanumeric()) {
        let chars: Vec<char> = segment.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let cur = class(chars[i]);
            let prev = class(chars[i - 1]);
            let next = chars.get(i + 1).map(|&c| class(c));
            let boundary = cur == Class::Upper
                && (prev != Class::Upper || next == Some(Class::Lower) && chars[i + 1].is_alphabetic());
            if boundary {
                out.push(chars[start..i].iter().collect::<String>().to_lowercase());
                start = i;
            }
        }
        if start < chars.len() {
            out.push(chars[start..].iter().collect::<String>().to_lowercase());
        }
    }
    out.retain(|s| !s.is_empty());
    out
}

fn is_numeric_literal(text: &str) -> bool {
    text.starts_with(|c: char| c.is_ascii_digit() || c == '.')
}

/// Text between the quotes of a string or character literal, without
/// escape sequences. Raw strings lose their delimiters.
fn literal_contents(text: &str) -> &str {
    let Some(open) = text.find(['"', '\'']) else {
        return text;
    };
    let quote = &text[open..open + 1];
    let Some(close) = text.rfind(quote).filter(|&c| c > open) else {
        return &text[open + 1..];
    };
    let inner = &text[open + 1..close];
    if text[..open].ends_with('R') && quote == "\"" {
        if let (Some(l), Some(r)) = (inner.find('('), inner.rfind(')')) {
            if l < r {
                return &inner[l + 1..r];
            }
        }
    }
    inner
}

/// Subtokens contributed by a single kept token.
pub fn token_subtokens(token: &Token, options: SubtokenOptions) -> Vec<String> {
    match token.kind {
        TokenKind::Literal if is_numeric_literal(&token.text) => vec![token.text.to_lowercase()],
        TokenKind::Literal if options.split_string_literals => {
            let contents = literal_contents(&token.text);
            let mut cleaned = String::with_capacity(contents.len());
            let mut chars = contents.chars();
            while let Some(c) = chars.next() {
                if c == '\\' {
                    chars.next();
                    cleaned.push(' ');
                } else {
                    cleaned.push(c);
                }
            }
            cleaned
                .split(|c: char| !c.is_alphanumeric())
                .flat_map(split_identifier)
                .collect()
        }
        TokenKind::Literal => vec![token.text.to_lowercase()],
        TokenKind::Identifier | TokenKind::Keyword => split_identifier(&token.text),
        _ => Vec::new(),
    }
}

/// All subtokens of an expression, in token order, duplicates kept.
pub fn subtoken_list(tokens: &[Token], options: SubtokenOptions) -> Vec<String> {
    filter_expression_tokens(tokens)
        .iter()
        .flat_map(|t| token_subtokens(t, options))
        .collect()
}

/// Distinct subtokens of an expression with their multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubtokenSet {
    counts: BTreeMap<String, usize>,
}

impl SubtokenSet {
    pub fn from_subtokens<I, S>(subtokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut counts = BTreeMap::new();
        for s in subtokens {
            let s = s.into();
            if !s.is_empty() {
                *counts.entry(s).or_insert(0) += 1;
            }
        }
        SubtokenSet { counts }
    }

    /// Distinct subtokens in sorted order.
    pub fn items(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total subtokens before deduplication.
    pub fn raw_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn contains(&self, item: &str) -> bool {
        self.counts.contains_key(item)
    }

    pub fn is_subset(&self, other: &SubtokenSet) -> bool {
        self.counts.keys().all(|k| other.counts.contains_key(k))
    }

    /// Size of the union of distinct items.
    pub fn union_len(&self, other: &SubtokenSet) -> usize {
        self.len() + other.items().filter(|k| !self.contains(k)).count()
    }
}

/// Subtoken set of an expression's tokens.
pub fn subtoken_set(tokens: &[Token], options: SubtokenOptions) -> SubtokenSet {
    SubtokenSet::from_subtokens(subtoken_list(tokens, options))
}

/// The part of an assignment target that names the destination.
///
/// For a declaration with initializer (`const auto *nameArray`) this is the
/// declared name alone, so the declared type does not count as destination
/// vocabulary. Any other target (`entry->value`, `buf[i]`) is kept whole.
pub fn destination_tokens(dest: &[Token]) -> &[Token] {
    let mut end = dest.len();
    while end > 0 && dest[end - 1].is_punct("]") {
        let mut depth = 0usize;
        let mut open = None;
        for k in (0..end).rev() {
            if dest[k].is_punct("]") {
                depth += 1;
            } else if dest[k].is_punct("[") {
                depth -= 1;
                if depth == 0 {
                    open = Some(k);
                    break;
                }
            }
        }
        match open {
            Some(k) => end = k,
            None => return dest,
        }
    }
    if end < 2 || !dest[end - 1].is_ident() {
        return dest;
    }
    let prev = &dest[end - 2];
    let declaration = match prev.kind {
        TokenKind::Identifier => true,
        TokenKind::Keyword => !matches!(prev.text.as_str(), "this" | "return" | "delete" | "throw"),
        TokenKind::Punctuator => match prev.text.as_str() {
            // `*p = ...` dereferences; `T *p = ...` declares.
            "*" | "&" | "&&" => {
                end >= 3 && {
                    let before = &dest[end - 3];
                    before.is_ident()
                        || before.kind == TokenKind::Keyword
                        || matches!(before.text.as_str(), ">" | ">>" | "*" | "&")
                }
            }
            ">" | ">>" => true,
            _ => false,
        },
        _ => false,
    };
    if declaration {
        &dest[end - 1..end]
    } else {
        dest
    }
}
