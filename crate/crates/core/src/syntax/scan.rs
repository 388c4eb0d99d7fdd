use std::ops::Range;

use super::{join_tokens, CastKind, Token, TokenKind, Warning};

/// A `cast_kw < type > ( expr )` match in a token stream.
///
/// Indices refer to the token slice that was scanned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CastOccurrence {
    pub kind: CastKind,
    pub target_type: String,
    pub source_tokens: Vec<Token>,
    pub line: u32,
    pub col: u32,
    pub in_macro_body: bool,
    pub keyword_index: usize,
    pub close_index: usize,
    /// Token range that bounds context classification (the whole stream, or
    /// the replacement list of a `#define`).
    pub scope: Range<usize>,
}

/// Find every named cast in `tokens`, including casts nested in the
/// argument expression of another cast.
pub fn scan_named_casts(tokens: &[Token]) -> Vec<CastOccurrence> {
    scan_with_warnings(tokens, &mut Vec::new())
}

pub(crate) fn scan_with_warnings(tokens: &[Token], warnings: &mut Vec<Warning>) -> Vec<CastOccurrence> {
    let mut found = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Keyword {
            continue;
        }
        let Some(kind) = CastKind::from_keyword(&tok.text) else {
            continue;
        };
        if !tokens.get(i + 1).is_some_and(|t| t.is_punct("<")) {
            continue;
        }
        match match_cast(tokens, i, kind) {
            Ok(occ) => found.push(occ),
            Err(message) => warnings.push(Warning {
                line: tok.line,
                col: tok.col,
                message,
            }),
        }
    }
    found
}

fn match_cast(tokens: &[Token], kw: usize, kind: CastKind) -> Result<CastOccurrence, String> {
    let lt = kw + 1;
    let mut angle = 1usize;
    let mut paren = 0usize;
    let mut j = lt + 1;
    // Set when the closing token is `>>` whose first half closes a nested
    // template argument list.
    let mut split_closer = false;
    let gt = loop {
        let Some(t) = tokens.get(j) else {
            return Err(format!("unbalanced `<` after {}", kind.keyword()));
        };
        if t.kind == TokenKind::Punctuator {
            match t.text.as_str() {
                ";" | "{" | "}" => return Err(format!("unbalanced `<` after {}", kind.keyword())),
                "(" | "[" => paren += 1,
                ")" | "]" => {
                    if paren == 0 {
                        return Err(format!("unbalanced `<` after {}", kind.keyword()));
                    }
                    paren -= 1;
                }
                "<" if paren == 0 => angle += 1,
                ">" if paren == 0 => {
                    angle -= 1;
                    if angle == 0 {
                        break j;
                    }
                }
                ">>" if paren == 0 => {
                    if angle == 1 {
                        return Err(format!("stray `>>` closing {}", kind.keyword()));
                    }
                    angle -= 2;
                    if angle == 0 {
                        split_closer = true;
                        break j;
                    }
                }
                _ => {}
            }
        }
        j += 1;
    };

    let mut target_type = join_tokens(&tokens[lt + 1..gt]);
    if split_closer {
        target_type.push('>');
    }

    let open = gt + 1;
    if !tokens.get(open).is_some_and(|t| t.is_punct("(")) {
        return Err(format!("{} is not followed by `(`", kind.keyword()));
    }
    let mut depth = 0usize;
    let mut close = None;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth -= 1;
            if depth == 0 {
                close = Some(k);
                break;
            }
        }
    }
    let Some(close) = close else {
        return Err(format!("unbalanced `(` after {}", kind.keyword()));
    };
    if close == open + 1 {
        return Err(format!("{} has an empty argument", kind.keyword()));
    }

    let kw_tok = &tokens[kw];
    Ok(CastOccurrence {
        kind,
        target_type,
        source_tokens: tokens[open + 1..close].to_vec(),
        line: kw_tok.line,
        col: kw_tok.col,
        in_macro_body: false,
        keyword_index: kw,
        close_index: close,
        scope: 0..tokens.len(),
    })
}

/// Scan the replacement list of every `#define` for named casts. Macros are
/// not expanded; each cast is reported at its position inside the definition.
///
/// `tokens` is the full token stream including directive lines; indices in
/// the result refer to it.
pub fn scan_macro_bodies(tokens: &[Token]) -> Vec<CastOccurrence> {
    scan_macros_with_warnings(tokens, &mut Vec::new())
}

pub(crate) fn scan_macros_with_warnings(tokens: &[Token], warnings: &mut Vec<Warning>) -> Vec<CastOccurrence> {
    let mut found = Vec::new();
    for body in define_bodies(tokens) {
        for mut occ in scan_with_warnings(&tokens[body.clone()], warnings) {
            occ.keyword_index += body.start;
            occ.close_index += body.start;
            occ.scope = body.clone();
            occ.in_macro_body = true;
            found.push(occ);
        }
    }
    found
}

/// Token ranges of `#define` replacement lists.
fn define_bodies(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut bodies = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let Some(id) = tokens[i].directive() else {
            i += 1;
            continue;
        };
        let end = tokens[i..]
            .iter()
            .position(|t| t.directive() != Some(id))
            .map_or(tokens.len(), |n| i + n);
        let line = &tokens[i..end];
        if line.len() >= 3 && line[0].is_punct("#") && line[1].text == "define" {
            let name = &line[2];
            let mut start = 3;
            let function_like = line
                .get(3)
                .is_some_and(|t| t.is_punct("(") && t.line == name.line && t.col == name.end_col());
            if function_like {
                match line.iter().skip(3).position(|t| t.is_punct(")")) {
                    Some(p) => start = 3 + p + 1,
                    None => start = line.len(),
                }
            }
            if start < line.len() {
                bodies.push(i + start..end);
            }
        }
        i = end;
    }
    bodies
}
