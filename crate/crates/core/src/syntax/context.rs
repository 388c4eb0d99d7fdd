use super::{CastContext, CastOccurrence, Token, TokenKind};

const ASSIGNMENT_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="];
const CONTROL_KEYWORDS: &[&str] = &["if", "while", "for", "switch", "catch"];

fn is_assignment_op(t: &Token) -> bool {
    t.kind == TokenKind::Punctuator && ASSIGNMENT_OPS.contains(&t.text.as_str())
}

/// Decide whether a cast is the right-hand side of an assignment, a whole
/// argument of a call, or something else.
///
/// The cast must be the entire right-hand side or the entire argument; a
/// cast that is only part of a larger expression is `Other`.
pub fn classify_context(tokens: &[Token], occ: &CastOccurrence) -> CastContext {
    let lo = occ.scope.start;
    let hi = occ.scope.end.min(tokens.len());
    let kw = occ.keyword_index;
    if kw <= lo || kw >= hi {
        return CastContext::Other;
    }
    let prev = &tokens[kw - 1];
    let after = tokens[occ.close_index + 1..hi].first();

    if is_assignment_op(prev) {
        let ends_rhs = after
            .is_none_or(|t| t.kind == TokenKind::Punctuator && matches!(t.text.as_str(), ";" | "," | ")" | "]" | "}"));
        if !ends_rhs {
            return CastContext::Other;
        }
        let eq = kw - 1;
        let start = statement_start(tokens, eq, lo);
        if start >= eq {
            return CastContext::Other;
        }
        return CastContext::Assignment {
            dest_tokens: tokens[start..eq].to_vec(),
        };
    }

    if prev.is_punct("(") || prev.is_punct(",") {
        let whole_arg = after.is_some_and(|t| t.is_punct(",") || t.is_punct(")"));
        if whole_arg {
            if let Some((callee, arg_index, arity)) = enclosing_call(tokens, kw, lo, hi) {
                return CastContext::CallArg {
                    callee,
                    arg_index,
                    arity,
                    dest_tokens: Vec::new(),
                    unresolved: None,
                };
            }
        }
    }

    CastContext::Other
}

/// Index of the first token of the assignment target ending just before `eq`.
fn statement_start(tokens: &[Token], eq: usize, lo: usize) -> usize {
    // Indices of closers whose openers have not been reached yet.
    let mut groups: Vec<usize> = Vec::new();
    let mut angle = 0usize;
    let mut i = eq;
    while i > lo {
        i -= 1;
        let t = &tokens[i];
        if t.kind != TokenKind::Punctuator {
            continue;
        }
        match t.text.as_str() {
            ")" | "]" => groups.push(i),
            "(" | "[" => {
                let Some(closer) = groups.pop() else {
                    return i + 1;
                };
                if groups.is_empty()
                    && t.text == "("
                    && i > lo
                    && CONTROL_KEYWORDS.iter().any(|k| tokens[i - 1].is_keyword(k))
                {
                    return closer + 1;
                }
            }
            _ if !groups.is_empty() => {}
            ">" => angle += 1,
            ">>" => angle += 2,
            "<" if angle > 0 => angle -= 1,
            "," if angle > 0 => {}
            ";" | "{" | "}" | "," | ":" | "?" | "<" => return i + 1,
            _ if is_assignment_op(t) => return i + 1,
            _ => {}
        }
    }
    lo
}

/// Callee name, 0-based argument position, and argument count of the call
/// whose argument list directly contains the token at `kw`.
fn enclosing_call(tokens: &[Token], kw: usize, lo: usize, hi: usize) -> Option<(String, usize, usize)> {
    let mut depth = 0usize;
    let mut commas = 0usize;
    let mut i = kw;
    let open = loop {
        if i <= lo {
            return None;
        }
        i -= 1;
        let t = &tokens[i];
        if t.kind != TokenKind::Punctuator {
            continue;
        }
        match t.text.as_str() {
            ")" | "]" | "}" => depth += 1,
            "(" | "[" | "{" => {
                if depth == 0 {
                    break i;
                }
                depth -= 1;
            }
            "," if depth == 0 => commas += 1,
            ";" if depth == 0 => return None,
            _ => {}
        }
    };
    if !tokens[open].is_punct("(") || open <= lo {
        return None;
    }
    let callee = callee_before(tokens, open, lo)?;

    let mut depth = 0usize;
    let mut args_commas = 0usize;
    for t in &tokens[open + 1..hi] {
        if t.kind != TokenKind::Punctuator {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" if depth == 0 => {
                return Some((callee, commas, args_commas + 1));
            }
            ")" | "]" | "}" => depth -= 1,
            "," if depth == 0 => args_commas += 1,
            _ => {}
        }
    }
    None
}

/// The identifier naming a call whose `(` is at `open`; handles explicit
/// template arguments such as `f<T>(...)`.
fn callee_before(tokens: &[Token], open: usize, lo: usize) -> Option<String> {
    let mut i = open - 1;
    if tokens[i].is_punct(">") || tokens[i].is_punct(">>") {
        let mut angle = 0i32;
        loop {
            let t = &tokens[i];
            if t.is_punct(">") {
                angle += 1;
            } else if t.is_punct(">>") {
                angle += 2;
            } else if t.is_punct("<") {
                angle -= 1;
                if angle == 0 {
                    break;
                }
            } else if t.is_punct(";") || t.is_punct("{") || t.is_punct("}") {
                return None;
            }
            if i <= lo {
                return None;
            }
            i -= 1;
        }
        if i <= lo {
            return None;
        }
        i -= 1;
    }
    let t = &tokens[i];
    t.is_ident().then(|| t.text.clone())
}
