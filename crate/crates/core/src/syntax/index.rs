use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Token, TokenKind};

/// A function declaration or definition found at namespace or class scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSig {
    pub name: String,
    pub arity: usize,
    /// One entry per parameter; empty for unnamed or variadic slots.
    pub param_names: Vec<String>,
    pub file: String,
    pub line: u32,
}

/// Corpus-wide map from `(name, arity)` to every matching signature.
#[derive(Debug, Clone, Default)]
pub struct FunctionIndex {
    sigs: BTreeMap<(String, usize), Vec<FunctionSig>>,
}

impl FunctionIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sig: FunctionSig) {
        self.sigs.entry((sig.name.clone(), sig.arity)).or_default().push(sig);
    }

    pub fn get(&self, name: &str, arity: usize) -> &[FunctionSig] {
        self.sigs.get(&(name.to_string(), arity)).map_or(&[], Vec::as_slice)
    }

    /// Number of distinct `(name, arity)` keys.
    pub fn len(&self) -> usize {
        self.sigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunctionSig> {
        self.sigs.values().flatten()
    }
}

impl Extend<FunctionSig> for FunctionIndex {
    fn extend<I: IntoIterator<Item = FunctionSig>>(&mut self, iter: I) {
        for sig in iter {
            self.insert(sig);
        }
    }
}

/// Why a call argument could not be bound to a formal parameter name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unresolved {
    /// No declaration with that name and arity.
    Unknown,
    /// Candidates disagree on the parameter name at that position.
    Ambiguous,
    /// Every candidate leaves that parameter unnamed.
    Unnamed,
}

impl fmt::Display for Unresolved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unresolved::Unknown => "unknown",
            Unresolved::Ambiguous => "ambiguous",
            Unresolved::Unnamed => "unnamed",
        })
    }
}

/// Bind argument `arg_index` of a call to `callee` with `arity` arguments.
///
/// Overloads are told apart by name and arity only. Unnamed slots (as in
/// a bare prototype) defer to named candidates.
pub fn resolve_formal(
    callee: &str,
    arity: usize,
    arg_index: usize,
    index: &FunctionIndex,
) -> Result<String, Unresolved> {
    let candidates = index.get(callee, arity);
    if candidates.is_empty() || arg_index >= arity {
        return Err(Unresolved::Unknown);
    }
    let names: BTreeSet<&str> = candidates
        .iter()
        .filter_map(|sig| sig.param_names.get(arg_index))
        .map(String::as_str)
        .filter(|n| !n.is_empty())
        .collect();
    let mut names = names.into_iter();
    match (names.next(), names.next()) {
        (Some(name), None) => Ok(name.to_string()),
        (Some(_), Some(_)) => Err(Unresolved::Ambiguous),
        (None, _) => Err(Unresolved::Unnamed),
    }
}

/// Index every function signature in a set of tokenized files.
pub fn index_functions<'a, I>(files: I) -> FunctionIndex
where
    I: IntoIterator<Item = (&'a str, &'a [Token])>,
{
    let mut index = FunctionIndex::new();
    for (path, tokens) in files {
        index.extend(index_file(path, tokens));
    }
    index
}

const NOT_A_RETURN_TYPE: &[&str] = &[
    "return",
    "new",
    "delete",
    "throw",
    "case",
    "goto",
    "sizeof",
    "else",
    "do",
    "typeid",
    "alignof",
    "decltype",
    "static_assert",
];

/// Signatures declared or defined in one file, outside function bodies.
pub(crate) fn index_file(path: &str, tokens: &[Token]) -> Vec<FunctionSig> {
    let toks: Vec<&Token> = tokens.iter().filter(|t| !t.in_directive()).collect();
    let n = toks.len();
    let mut sigs = Vec::new();
    let mut skip_depth = 0usize;
    let mut head_start = 0usize;
    let mut i = 0usize;

    while i < n {
        let t = toks[i];
        if skip_depth > 0 {
            if t.is_punct("{") {
                skip_depth += 1;
            } else if t.is_punct("}") {
                skip_depth -= 1;
                if skip_depth == 0 {
                    head_start = i + 1;
                }
            }
            i += 1;
            continue;
        }
        if t.kind == TokenKind::Punctuator {
            match t.text.as_str() {
                "{" => {
                    if !opens_scope(&toks[head_start..i]) {
                        skip_depth = 1;
                    }
                    head_start = i + 1;
                }
                "}" | ";" => head_start = i + 1,
                ":" if i > 0
                    && ["public", "private", "protected"]
                        .iter()
                        .any(|k| toks[i - 1].is_keyword(k)) =>
                {
                    head_start = i + 1
                }
                _ => {}
            }
            i += 1;
            continue;
        }
        if t.is_ident() && toks.get(i + 1).is_some_and(|p| p.is_punct("(")) {
            if let Some((sig, end, body)) = match_signature(path, &toks, head_start, i) {
                sigs.push(sig);
                i = end;
                if body {
                    skip_depth = 1;
                    i += 1;
                } else {
                    head_start = end + 1;
                    i += 1;
                }
                continue;
            }
        }
        i += 1;
    }
    sigs
}

fn opens_scope(head: &[&Token]) -> bool {
    if head.iter().any(|t| t.is_keyword("namespace")) {
        return true;
    }
    if head
        .windows(2)
        .any(|w| w[0].is_keyword("extern") && w[1].kind == TokenKind::Literal)
    {
        return true;
    }
    let record = head
        .iter()
        .any(|t| t.is_keyword("class") || t.is_keyword("struct") || t.is_keyword("union"));
    record && !head.iter().any(|t| t.is_punct("(") || t.is_punct("="))
}

/// Try to read `name ( params ) tail` where `tail` ends in `{`, `;`, a
/// constructor initializer list, or end of input. Returns the signature, the
/// index of the terminating token, and whether a body follows.
fn match_signature(
    path: &str,
    toks: &[&Token],
    head_start: usize,
    name_at: usize,
) -> Option<(FunctionSig, usize, bool)> {
    if !declarator_position(toks, head_start, name_at) {
        return None;
    }
    let open = name_at + 1;
    let close = matching(toks, open, "(", ")")?;
    let params = split_params(&toks[open + 1..close]);

    let mut j = close + 1;
    let body = loop {
        let Some(t) = toks.get(j) else {
            break false;
        };
        match t.text.as_str() {
            "{" if t.kind == TokenKind::Punctuator => break true,
            ";" if t.kind == TokenKind::Punctuator => break false,
            ":" if t.kind == TokenKind::Punctuator => {
                // Constructor initializer list: skip to the body.
                j = (j..toks.len()).find(|&k| toks[k].is_punct("{") && !in_init_call(toks, j, k))?;
                break true;
            }
            "const" | "volatile" | "&" | "&&" | "override" | "final" => j += 1,
            "noexcept" | "throw" => {
                j += 1;
                if toks.get(j).is_some_and(|p| p.is_punct("(")) {
                    j = matching(toks, j, "(", ")")? + 1;
                }
            }
            "->" => {
                j += 1;
                while toks
                    .get(j)
                    .is_some_and(|p| !(p.is_punct("{") || p.is_punct(";") || p.is_punct("=")))
                {
                    j += 1;
                }
            }
            "=" => {
                let spec = toks.get(j + 1)?;
                if !(spec.text == "0" || spec.is_keyword("default") || spec.is_keyword("delete")) {
                    return None;
                }
                j += 2;
            }
            _ => return None,
        }
    };
    let name = toks[name_at];
    let param_names: Vec<String> = params.iter().map(|p| param_name(p)).collect();
    Some((
        FunctionSig {
            name: name.text.clone(),
            arity: param_names.len(),
            param_names,
            file: path.to_string(),
            line: name.line,
        },
        j.min(toks.len().saturating_sub(1)),
        body,
    ))
}

// A `{` inside the initializer list belongs to a brace-initialized member,
// e.g. `: a_{1}, b_(2) {`. It is part of the list when preceded by an
// identifier or `>`.
fn in_init_call(toks: &[&Token], colon: usize, k: usize) -> bool {
    k > colon + 1 && (toks[k - 1].is_ident() || toks[k - 1].is_punct(">"))
}

/// The name must sit where a declarator can: after a return type, a
/// qualifier, or at the start of a declaration (constructors).
fn declarator_position(toks: &[&Token], head_start: usize, name_at: usize) -> bool {
    let mut j = name_at;
    // Walk back over `A::B::` and `~`.
    loop {
        if j >= 1 && toks[j - 1].is_punct("~") {
            j -= 1;
            continue;
        }
        if j >= 2 && toks[j - 1].is_punct("::") {
            if toks[j - 2].is_ident() {
                j -= 2;
                continue;
            }
            if toks[j - 2].is_punct(">") {
                // Skip `Foo<T>::`.
                let mut depth = 0i32;
                let mut k = j - 2;
                loop {
                    if toks[k].is_punct(">") {
                        depth += 1;
                    } else if toks[k].is_punct("<") {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    if k == 0 {
                        return false;
                    }
                    k -= 1;
                }
                if k >= 1 && toks[k - 1].is_ident() {
                    j = k - 1;
                    continue;
                }
                return false;
            }
            j -= 1;
            continue;
        }
        break;
    }
    if j <= head_start {
        return true;
    }
    let p = toks[j - 1];
    match p.kind {
        TokenKind::Identifier => true,
        TokenKind::Keyword => !NOT_A_RETURN_TYPE.contains(&p.text.as_str()),
        TokenKind::Punctuator => matches!(p.text.as_str(), "*" | "&" | "&&" | ">" | ">>"),
        _ => false,
    }
}

fn matching(toks: &[&Token], open: usize, opener: &str, closer: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (k, t) in toks.iter().enumerate().skip(open) {
        if t.is_punct(opener) {
            depth += 1;
        } else if t.is_punct(closer) {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        } else if t.is_punct("{") || t.is_punct("}") || t.is_punct(";") {
            return None;
        }
    }
    None
}

fn split_params<'a>(inner: &[&'a Token]) -> Vec<Vec<&'a Token>> {
    if inner.is_empty() || (inner.len() == 1 && inner[0].is_keyword("void")) {
        return Vec::new();
    }
    let mut params = vec![Vec::new()];
    let mut depth = 0i32;
    for &t in inner {
        if t.kind == TokenKind::Punctuator {
            match t.text.as_str() {
                "(" | "[" | "{" | "<" => depth += 1,
                ")" | "]" | "}" | ">" => depth -= 1,
                ">>" => depth -= 2,
                "," if depth <= 0 => {
                    params.push(Vec::new());
                    continue;
                }
                _ => {}
            }
        }
        params.last_mut().expect("non-empty").push(t);
    }
    params
}

/// Last identifier of a parameter declaration, ignoring default values and
/// array extents. A lone type is unnamed.
fn param_name(param: &[&Token]) -> String {
    let mut end = param.len();
    let mut depth = 0i32;
    for (k, t) in param.iter().enumerate() {
        if t.kind != TokenKind::Punctuator {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "<" => depth += 1,
            ")" | "]" | ">" => depth -= 1,
            ">>" => depth -= 2,
            "=" if depth == 0 => {
                end = k;
                break;
            }
            _ => {}
        }
    }
    let mut decl = &param[..end];
    while decl.last().is_some_and(|t| t.is_punct("]")) {
        match decl.iter().rposition(|t| t.is_punct("[")) {
            Some(open) => decl = &decl[..open],
            None => break,
        }
    }
    if let [.., prev, last] = decl {
        if last.is_ident() && !prev.is_punct("::") && !prev.is_punct(".") && !prev.is_punct("->") {
            return last.text.clone();
        }
    }
    // Function pointer: `void (*name)(int)`.
    if let Some(open) = decl.iter().position(|t| t.is_punct("(")) {
        let group = &decl[open + 1..];
        if let Some(w) = group
            .windows(2)
            .find(|w| matches!(w[0].text.as_str(), "*" | "&" | "^") && w[1].is_ident())
        {
            return w[1].text.clone();
        }
    }
    String::new()
}
