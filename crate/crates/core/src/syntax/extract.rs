use super::context::classify_context;
use super::index::{index_file, resolve_formal, FunctionIndex};
use super::lexer::{lex, Lexed, Token, TokenKind};
use super::scan::{scan_macros_with_warnings, scan_with_warnings};
use super::{CastContext, NamedCastRecord, Warning};
use crate::corpus::SourceFile;

#[derive(Debug, Clone, Default)]
pub struct FileExtraction {
    pub records: Vec<NamedCastRecord>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusExtraction {
    /// Records in file order, then source position.
    pub records: Vec<NamedCastRecord>,
    /// Warnings keyed by file path.
    pub warnings: Vec<(String, Warning)>,
    pub files_scanned: usize,
    /// Number of distinct `(name, arity)` keys in the function index.
    pub functions_indexed: usize,
}

/// Tuning knobs for a corpus pass.
#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    /// Fan per-file work out over a thread pool when the `parallel` feature
    /// is enabled.
    pub parallel: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { parallel: true }
    }
}

/// Extract every named cast from one file, binding call arguments through
/// `index`, which should already cover the whole corpus.
pub fn extract_file(file: &SourceFile, index: &FunctionIndex) -> FileExtraction {
    extract_lexed(file, lex(&file.content), index)
}

fn extract_lexed(file: &SourceFile, lexed: Lexed, index: &FunctionIndex) -> FileExtraction {
    let Lexed { tokens, mut warnings } = lexed;
    let code: Vec<Token> = tokens.iter().filter(|t| !t.in_directive()).cloned().collect();

    let mut records = Vec::new();
    for occ in scan_with_warnings(&code, &mut warnings) {
        let context = classify_context(&code, &occ);
        records.push((occ, context));
    }
    for occ in scan_macros_with_warnings(&tokens, &mut warnings) {
        let context = classify_context(&tokens, &occ);
        records.push((occ, context));
    }
    records.sort_by_key(|(occ, _)| (occ.line, occ.col));

    let records = records
        .into_iter()
        .map(|(occ, context)| NamedCastRecord {
            file: file.path.clone(),
            component: file.component.clone(),
            line: occ.line,
            col: occ.col,
            kind: occ.kind,
            target_type: occ.target_type,
            source_tokens: occ.source_tokens,
            context: bind(context, index, occ.line, occ.col),
            in_macro_body: occ.in_macro_body,
        })
        .collect();
    warnings.sort_by_key(|w| (w.line, w.col));
    FileExtraction { records, warnings }
}

fn bind(context: CastContext, index: &FunctionIndex, line: u32, col: u32) -> CastContext {
    match context {
        CastContext::CallArg {
            callee,
            arg_index,
            arity,
            ..
        } => {
            let (dest_tokens, unresolved) = match resolve_formal(&callee, arity, arg_index, index) {
                // The formal is positioned at the call site it was bound from.
                Ok(name) => (vec![Token::new(TokenKind::Identifier, name, line, col)], None),
                Err(reason) => (Vec::new(), Some(reason)),
            };
            CastContext::CallArg {
                callee,
                arg_index,
                arity,
                dest_tokens,
                unresolved,
            }
        }
        other => other,
    }
}

/// Two-phase pass over a corpus: index every function signature, then
/// extract casts from each file against the finished index.
pub fn extract_corpus(files: &[SourceFile], options: ExtractOptions) -> CorpusExtraction {
    let lexed: Vec<Lexed> = map_files(files, options, |f| lex(&f.content));
    let mut index = FunctionIndex::new();
    for (file, lx) in files.iter().zip(&lexed) {
        index.extend(index_file(&file.path, &lx.tokens));
    }

    let pairs: Vec<(&SourceFile, Lexed)> = files.iter().zip(lexed).collect();
    let per_file: Vec<FileExtraction> = map_owned(pairs, options, |(f, lx)| extract_lexed(f, lx, &index));

    let mut out = CorpusExtraction {
        files_scanned: files.len(),
        functions_indexed: index.len(),
        ..Default::default()
    };
    for (file, extraction) in files.iter().zip(per_file) {
        out.records.extend(extraction.records);
        out.warnings
            .extend(extraction.warnings.into_iter().map(|w| (file.path.clone(), w)));
    }
    out
}

#[cfg(feature = "parallel")]
fn map_files<T: Send>(
    files: &[SourceFile],
    options: ExtractOptions,
    f: impl Fn(&SourceFile) -> T + Sync + Send,
) -> Vec<T> {
    use rayon::prelude::*;
    if options.parallel {
        files.par_iter().map(f).collect()
    } else {
        files.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_files<T>(files: &[SourceFile], _options: ExtractOptions, f: impl Fn(&SourceFile) -> T) -> Vec<T> {
    files.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn map_owned<I: Send, T: Send>(items: Vec<I>, options: ExtractOptions, f: impl Fn(I) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    if options.parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_owned<I, T>(items: Vec<I>, _options: ExtractOptions, f: impl Fn(I) -> T) -> Vec<T> {
    items.into_iter().map(f).collect()
}
