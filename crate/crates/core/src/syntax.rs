//! Source files, parsing, and the statement-level view of a parsed module.
//!
//! A [`SyntaxTree`] owns the parsed module; [`SyntaxTree::statements`]
//! flattens it into [`StatementNode`]s in source order, each carrying its
//! chain of enclosing scopes. Compound statements appear once (their
//! header); `elif` clauses fold into the `if` they continue, and
//! `except`/`finally`/`else` clauses are part of their `try`.

use std::fmt;

use rustpython_parser::ast::{self, Ranged};
use rustpython_parser::Parse;
use thiserror::Error;

/// A Python source file to analyze.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub content: String,
    pub revision: Option<String>,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, content: impl Into<String>) -> Self {
        let path = path.into();
        debug_assert!(!path.is_empty());
        SourceFile { path, content: content.into(), revision: None }
    }

    #[must_use]
    pub fn with_revision(mut self, revision: impl Into<String>) -> Self {
        self.revision = Some(revision.into());
        self
    }

    /// Decodes raw bytes, replacing invalid UTF-8 sequences. Content with NUL
    /// bytes is treated as binary and rejected.
    pub fn from_bytes(path: impl Into<String>, bytes: &[u8]) -> Result<Self, DecodeError> {
        let path = path.into();
        if bytes.contains(&0) {
            return Err(DecodeError { path });
        }
        let content = String::from_utf8_lossy(bytes).into_owned();
        Ok(SourceFile { path, content, revision: None })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{path}: binary content, not decodable as source text")]
pub struct DecodeError {
    pub path: String,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{path}:{line}:{column}: {message}")]
pub struct SyntaxError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A scope that encloses a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Module,
    ClassBody,
    FunctionBody,
    MethodBody,
    LoopBody,
}

impl Scope {
    fn is_callable(self) -> bool {
        matches!(self, Scope::FunctionBody | Scope::MethodBody)
    }
}

/// Enclosing scopes of a statement, outermost (always `Module`) first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScopeChain(Vec<Scope>);

impl ScopeChain {
    fn module() -> Self {
        ScopeChain(vec![Scope::Module])
    }

    fn push(&self, scope: Scope) -> Self {
        let mut chain = self.0.clone();
        chain.push(scope);
        ScopeChain(chain)
    }

    pub fn scopes(&self) -> &[Scope] {
        &self.0
    }

    /// The innermost enclosing scope.
    pub fn immediate(&self) -> Scope {
        *self.0.last().expect("scope chain always contains the module")
    }

    pub fn in_class(&self) -> bool {
        self.0.contains(&Scope::ClassBody)
    }

    /// The nearest enclosing function or method body, if any.
    pub fn nearest_callable(&self) -> Option<Scope> {
        self.0.iter().rev().copied().find(|s| s.is_callable())
    }
}

impl fmt::Debug for ScopeChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// One statement of a parsed file, as seen by the classifier.
#[derive(Debug, Clone)]
pub struct StatementNode<'a> {
    pub stmt: &'a ast::Stmt,
    pub scopes: ScopeChain,
    /// Conditions of `elif` clauses folded into this `if` statement.
    pub elif_tests: Vec<&'a ast::Expr>,
    /// 1-based line of the statement's first token.
    pub line: usize,
}

/// A parsed Python module.
#[derive(Debug, Clone)]
pub struct SyntaxTree {
    path: String,
    source: String,
    suite: ast::Suite,
}

impl SyntaxTree {
    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Top-level statements of the module.
    pub fn suite(&self) -> &[ast::Stmt] {
        &self.suite
    }

    /// All statements in source order, with their scope chains.
    pub fn statements(&self) -> Vec<StatementNode<'_>> {
        let mut out = Vec::new();
        let walker = Walker { source: &self.source, line_starts: line_starts(&self.source) };
        walker.block(&self.suite, &ScopeChain::module(), &mut out);
        out
    }

    pub fn statement_count(&self) -> usize {
        self.statements().len()
    }
}

/// Parses a file under the Python 3 grammar.
pub fn parse_source(file: &SourceFile) -> Result<SyntaxTree, SyntaxError> {
    match ast::Suite::parse(&file.content, &file.path) {
        Ok(suite) => Ok(SyntaxTree { path: file.path.clone(), source: file.content.clone(), suite }),
        Err(err) => {
            let offset = usize::from(err.offset).min(file.content.len());
            let (line, column) = line_column(&file.content, offset);
            Err(SyntaxError { path: file.path.clone(), line, column, message: err.error.to_string() })
        }
    }
}

fn line_starts(source: &str) -> Vec<usize> {
    std::iter::once(0).chain(source.match_indices('\n').map(|(i, _)| i + 1)).collect()
}

fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let starts = line_starts(source);
    let line = starts.partition_point(|&s| s <= offset);
    let column = offset - starts[line - 1] + 1;
    (line, column)
}

struct Walker<'s> {
    source: &'s str,
    line_starts: Vec<usize>,
}

impl<'s> Walker<'s> {
    fn line_of(&self, stmt: &ast::Stmt) -> usize {
        let offset = usize::from(stmt.range().start());
        self.line_starts.partition_point(|&s| s <= offset)
    }

    fn is_elif(&self, stmt: &ast::Stmt) -> bool {
        let start = usize::from(stmt.range().start());
        self.source.get(start..).is_some_and(|rest| rest.starts_with("elif"))
    }

    fn block<'a>(&self, body: &'a [ast::Stmt], scopes: &ScopeChain, out: &mut Vec<StatementNode<'a>>) {
        for stmt in body {
            self.statement(stmt, scopes, out);
        }
    }

    fn statement<'a>(&self, stmt: &'a ast::Stmt, scopes: &ScopeChain, out: &mut Vec<StatementNode<'a>>) {
        let index = out.len();
        out.push(StatementNode { stmt, scopes: scopes.clone(), elif_tests: Vec::new(), line: self.line_of(stmt) });
        use ast::Stmt::*;
        match stmt {
            FunctionDef(ast::StmtFunctionDef { body, .. })
            | AsyncFunctionDef(ast::StmtAsyncFunctionDef { body, .. }) => {
                let inner =
                    if scopes.immediate() == Scope::ClassBody { Scope::MethodBody } else { Scope::FunctionBody };
                self.block(body, &scopes.push(inner), out);
            }
            ClassDef(def) => self.block(&def.body, &scopes.push(Scope::ClassBody), out),
            For(ast::StmtFor { body, orelse, .. }) | AsyncFor(ast::StmtAsyncFor { body, orelse, .. }) => {
                self.block(body, &scopes.push(Scope::LoopBody), out);
                self.block(orelse, scopes, out);
            }
            While(w) => {
                self.block(&w.body, &scopes.push(Scope::LoopBody), out);
                self.block(&w.orelse, scopes, out);
            }
            If(node) => {
                self.block(&node.body, scopes, out);
                let mut orelse = &node.orelse;
                let mut elif_tests = Vec::new();
                loop {
                    match orelse.as_slice() {
                        [If(elif)] if self.is_elif(&orelse[0]) => {
                            elif_tests.push(elif.test.as_ref());
                            self.block(&elif.body, scopes, out);
                            orelse = &elif.orelse;
                        }
                        rest => {
                            self.block(rest, scopes, out);
                            break;
                        }
                    }
                }
                out[index].elif_tests = elif_tests;
            }
            With(ast::StmtWith { body, .. }) | AsyncWith(ast::StmtAsyncWith { body, .. }) => {
                self.block(body, scopes, out)
            }
            Try(ast::StmtTry { body, handlers, orelse, finalbody, .. })
            | TryStar(ast::StmtTryStar { body, handlers, orelse, finalbody, .. }) => {
                self.block(body, scopes, out);
                for handler in handlers {
                    let ast::ExceptHandler::ExceptHandler(h) = handler;
                    self.block(&h.body, scopes, out);
                }
                self.block(orelse, scopes, out);
                self.block(finalbody, scopes, out);
            }
            Match(m) => {
                for case in &m.cases {
                    self.block(&case.body, scopes, out);
                }
            }
            _ => {}
        }
    }
}
