//! Per-statement paradigm classification and per-file counting.
//!
//! Each statement is first examined in isolation: the features it uses
//! syntactically (header only, for compound statements) give its intrinsic
//! paradigm set. Statements anywhere inside a class body also inherit OO.
//! A statement counts as imperative only when its intrinsic set holds no
//! functional, OO or procedural feature. Every paradigm is counted at most
//! once per statement. Import statements count as statements and nothing
//! else.
//!
//! Without type information, calls are resolved against the file alone:
//!
//! * `expr.f()` is a procedural call when the root name of `expr` was bound
//!   by `import`, otherwise an OO method call;
//! * a bare `f()` is functional+procedural for the functional built-ins and
//!   for names imported from `itertools`/`functools`, OO object creation for
//!   classes declared in the file, and procedural for everything else
//!   (unresolved names are tallied in [`FileAnalysis::unresolved_calls`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign};

use rustpython_parser::ast::{self, CmpOp, Expr, Stmt};
use serde::{Deserialize, Serialize};

use crate::catalog::{FeatureKind, FunctionalModule, Paradigm, ParadigmSet, ITERATOR_DUNDERS};
use crate::syntax::{Scope, StatementNode, SyntaxTree};

/// Names bound by imports in one file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportContext {
    module_names: BTreeSet<String>,
    functional_imports: BTreeMap<String, FunctionalModule>,
    functional_modules: BTreeMap<String, FunctionalModule>,
}

impl ImportContext {
    /// Names bound to modules by `import X` / `import X as Y`.
    pub fn module_names(&self) -> impl Iterator<Item = &str> {
        self.module_names.iter().map(String::as_str)
    }

    /// Names bound by `from functools/itertools import ...`.
    pub fn functional_imports(&self) -> impl Iterator<Item = &str> {
        self.functional_imports.keys().map(String::as_str)
    }

    pub fn is_module(&self, name: &str) -> bool {
        self.module_names.contains(name)
    }

    /// The functional module `name` was imported from, if any.
    pub fn functional_source(&self, name: &str) -> Option<FunctionalModule> {
        self.functional_imports.get(name).copied()
    }

    /// The functional module bound to `name` by `import itertools [as name]`.
    pub fn functional_module(&self, name: &str) -> Option<FunctionalModule> {
        self.functional_modules.get(name).copied()
    }

    fn record(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Import(import) => {
                for alias in &import.names {
                    let dotted = alias.name.as_str();
                    let bound = match &alias.asname {
                        Some(asname) => asname.as_str(),
                        None => dotted.split('.').next().unwrap_or(dotted),
                    };
                    self.module_names.insert(bound.to_owned());
                    let target = if alias.asname.is_some() { dotted } else { bound };
                    if let Some(module) = FunctionalModule::from_module_name(target) {
                        self.functional_modules.insert(bound.to_owned(), module);
                    }
                }
            }
            Stmt::ImportFrom(import) => {
                let from = import.module.as_ref().map(|m| m.as_str());
                let level = import.level.as_ref().map_or(0, |l| l.to_u32());
                let Some(module) = from.filter(|_| level == 0).and_then(FunctionalModule::from_module_name) else {
                    return;
                };
                for alias in &import.names {
                    if alias.name.as_str() == "*" {
                        continue;
                    }
                    let bound = alias.asname.as_ref().unwrap_or(&alias.name);
                    self.functional_imports.insert(bound.to_string(), module);
                }
            }
            _ => {}
        }
    }
}

/// Records every import binding anywhere in the file.
pub fn collect_imports(tree: &SyntaxTree) -> ImportContext {
    let mut imports = ImportContext::default();
    for node in tree.statements() {
        imports.record(node.stmt);
    }
    imports
}

/// Everything the classifier knows about a file besides the statement at
/// hand: its imports and the names it binds with `def` and `class`.
#[derive(Debug, Clone, Default)]
pub struct FileContext {
    pub imports: ImportContext,
    procedures: BTreeSet<String>,
    classes: BTreeSet<String>,
}

impl FileContext {
    pub fn new(tree: &SyntaxTree) -> Self {
        Self::with_imports(tree, collect_imports(tree))
    }

    pub fn with_imports(tree: &SyntaxTree, imports: ImportContext) -> Self {
        let mut ctx = FileContext { imports, ..Default::default() };
        for node in tree.statements() {
            match node.stmt {
                Stmt::FunctionDef(ast::StmtFunctionDef { name, .. })
                | Stmt::AsyncFunctionDef(ast::StmtAsyncFunctionDef { name, .. }) => {
                    if node.scopes.immediate() != Scope::ClassBody {
                        ctx.procedures.insert(name.to_string());
                    }
                }
                Stmt::ClassDef(def) => {
                    ctx.classes.insert(def.name.to_string());
                }
                _ => {}
            }
        }
        ctx
    }

    pub fn is_procedure(&self, name: &str) -> bool {
        self.procedures.contains(name)
    }

    pub fn is_class(&self, name: &str) -> bool {
        self.classes.contains(name)
    }
}

/// Paradigm evidence that is not a row of the feature table but follows from
/// how names resolve in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Construct {
    /// `obj.m()` where `obj` is not a module.
    MethodCall,
    /// `module.f()` through an imported module.
    ModuleCall,
    /// `f()` where `f` is bound by a `def` in the file.
    FunctionCall,
    /// `f()` where `f` has no visible binding.
    UnresolvedCall,
    /// `obj.attr` outside a call, where `obj` is not a module.
    AttributeAccess,
    /// `C()` where `C` is a class declared in the file.
    ObjectCreation,
    /// A class declaring `__iter__` or `__next__` directly in its body.
    IteratorClass,
    /// `return` whose nearest enclosing callable is a method.
    MethodReturn,
}

impl Construct {
    pub fn paradigms(self) -> ParadigmSet {
        use Paradigm::*;
        match self {
            Construct::MethodCall
            | Construct::AttributeAccess
            | Construct::ObjectCreation
            | Construct::MethodReturn => ParadigmSet::of(&[ObjectOriented]),
            Construct::ModuleCall | Construct::FunctionCall | Construct::UnresolvedCall => {
                ParadigmSet::of(&[Procedural])
            }
            Construct::IteratorClass => ParadigmSet::of(&[Functional, ObjectOriented]),
        }
    }
}

/// Classification of one statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatementVerdict {
    /// Paradigms of the features the statement itself uses.
    pub intrinsic: ParadigmSet,
    /// Paradigms inherited from enclosing scopes.
    pub enclosure: ParadigmSet,
    /// What the statement counts toward.
    pub counted: ParadigmSet,
    pub is_import: bool,
}

/// A statement's verdict together with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementAnalysis {
    pub line: usize,
    pub verdict: StatementVerdict,
    pub features: Vec<FeatureKind>,
    pub constructs: Vec<Construct>,
    decorators: DecoratorUses,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct DecoratorUses {
    method: u64,
    class: u64,
    function: u64,
}

#[derive(Default)]
struct Evidence {
    intrinsic: ParadigmSet,
    features: Vec<FeatureKind>,
    constructs: Vec<Construct>,
    not_in: u64,
    decorators: DecoratorUses,
}

impl Evidence {
    fn feature(&mut self, kind: FeatureKind) {
        self.features.push(kind);
        self.intrinsic = self.intrinsic.union(kind.counted_paradigms());
    }

    fn construct(&mut self, construct: Construct) {
        self.constructs.push(construct);
        self.intrinsic = self.intrinsic.union(construct.paradigms());
    }
}

struct Scanner<'c> {
    ctx: &'c FileContext,
    ev: Evidence,
}

impl Scanner<'_> {
    fn exprs<'e>(&mut self, exprs: impl IntoIterator<Item = &'e Expr>) {
        for e in exprs {
            self.expr(e);
        }
    }

    fn opt(&mut self, e: &Option<Box<Expr>>) {
        if let Some(e) = e {
            self.expr(e);
        }
    }

    fn defaults(&mut self, args: &ast::Arguments) {
        for arg in args.posonlyargs.iter().chain(&args.args).chain(&args.kwonlyargs) {
            self.opt(&arg.default);
        }
    }

    fn comprehensions(&mut self, generators: &[ast::Comprehension]) {
        for g in generators {
            self.expr(&g.target);
            self.expr(&g.iter);
            self.exprs(&g.ifs);
        }
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::BoolOp(x) => self.exprs(&x.values),
            Expr::NamedExpr(x) => {
                self.expr(&x.target);
                self.expr(&x.value);
            }
            Expr::BinOp(x) => {
                self.expr(&x.left);
                self.expr(&x.right);
            }
            Expr::UnaryOp(x) => self.expr(&x.operand),
            Expr::Lambda(x) => {
                self.ev.feature(FeatureKind::Lambda);
                self.defaults(&x.args);
                self.expr(&x.body);
            }
            Expr::IfExp(x) => {
                self.ev.feature(FeatureKind::IfElse);
                self.expr(&x.test);
                self.expr(&x.body);
                self.expr(&x.orelse);
            }
            Expr::Dict(x) => {
                self.exprs(x.keys.iter().flatten());
                self.exprs(&x.values);
            }
            Expr::Set(x) => self.exprs(&x.elts),
            Expr::ListComp(x) => {
                self.ev.feature(FeatureKind::ListComprehension);
                self.expr(&x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::SetComp(x) => {
                self.ev.feature(FeatureKind::ListComprehension);
                self.expr(&x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::DictComp(x) => {
                self.ev.feature(FeatureKind::ListComprehension);
                self.expr(&x.key);
                self.expr(&x.value);
                self.comprehensions(&x.generators);
            }
            Expr::GeneratorExp(x) => {
                self.ev.feature(FeatureKind::GeneratorExpression);
                self.expr(&x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::Await(x) => self.expr(&x.value),
            Expr::Yield(x) => {
                self.ev.feature(FeatureKind::Yield);
                self.opt(&x.value);
            }
            Expr::YieldFrom(x) => {
                self.ev.feature(FeatureKind::Yield);
                self.expr(&x.value);
            }
            Expr::Compare(x) => {
                for op in &x.ops {
                    match op {
                        CmpOp::In => self.ev.feature(FeatureKind::InOperator),
                        CmpOp::NotIn => {
                            self.ev.feature(FeatureKind::InOperator);
                            self.ev.not_in += 1;
                        }
                        _ => {}
                    }
                }
                self.expr(&x.left);
                self.exprs(&x.comparators);
            }
            Expr::Call(call) => self.call(call),
            Expr::FormattedValue(x) => {
                self.expr(&x.value);
                self.opt(&x.format_spec);
            }
            Expr::JoinedStr(x) => self.exprs(&x.values),
            Expr::Constant(_) | Expr::Name(_) => {}
            Expr::Attribute(x) => {
                if !self.module_rooted(&x.value) {
                    self.ev.construct(Construct::AttributeAccess);
                }
                self.expr(&x.value);
            }
            Expr::Subscript(x) => {
                self.ev.feature(FeatureKind::ArrayIndexing);
                self.expr(&x.value);
                self.expr(&x.slice);
            }
            Expr::Starred(x) => self.expr(&x.value),
            Expr::List(x) => self.exprs(&x.elts),
            Expr::Tuple(x) => self.exprs(&x.elts),
            Expr::Slice(x) => {
                self.opt(&x.lower);
                self.opt(&x.upper);
                self.opt(&x.step);
            }
        }
    }

    /// Root name of an attribute chain `a.b.c`, if it is a plain name.
    fn root_name(e: &Expr) -> Option<&str> {
        match e {
            Expr::Name(n) => Some(n.id.as_str()),
            Expr::Attribute(a) => Self::root_name(&a.value),
            _ => None,
        }
    }

    fn module_rooted(&self, e: &Expr) -> bool {
        Self::root_name(e).is_some_and(|root| self.ctx.imports.is_module(root))
    }

    fn call(&mut self, call: &ast::ExprCall) {
        match call.func.as_ref() {
            Expr::Attribute(attr) => {
                let root = Self::root_name(&attr.value);
                match root.filter(|r| self.ctx.imports.is_module(r)) {
                    Some(module) => match self.ctx.imports.functional_module(module) {
                        Some(m) => self.ev.feature(m.call_feature()),
                        None => self.ev.construct(Construct::ModuleCall),
                    },
                    None if attr.attr.as_str() == "send" => self.ev.feature(FeatureKind::SendCall),
                    None => self.ev.construct(Construct::MethodCall),
                }
                self.expr(&attr.value);
            }
            Expr::Name(name) => {
                let id = name.id.as_str();
                if let Some(kind) = FeatureKind::for_builtin_call(id) {
                    self.ev.feature(kind);
                } else if let Some(m) = self.ctx.imports.functional_source(id) {
                    self.ev.feature(m.call_feature());
                } else if self.ctx.is_class(id) {
                    self.ev.construct(Construct::ObjectCreation);
                } else if self.ctx.is_procedure(id) {
                    self.ev.construct(Construct::FunctionCall);
                } else {
                    self.ev.construct(Construct::UnresolvedCall);
                }
            }
            other => {
                self.ev.construct(Construct::UnresolvedCall);
                self.expr(other);
            }
        }
        let values = call.args.iter().chain(call.keywords.iter().map(|k| &k.value));
        for arg in values {
            if self.is_function_value(arg) {
                self.ev.feature(FeatureKind::FunctionAsArg);
            }
            self.expr(arg);
        }
    }

    fn is_function_value(&self, e: &Expr) -> bool {
        match e {
            Expr::Lambda(_) => true,
            Expr::Name(n) => self.ctx.is_procedure(n.id.as_str()),
            _ => false,
        }
    }

    fn decorators(&mut self, decorators: &[Expr], slot: fn(&mut DecoratorUses) -> &mut u64) {
        for _ in decorators {
            self.ev.feature(FeatureKind::Decorator);
            *slot(&mut self.ev.decorators) += 1;
        }
    }

    fn function_def(&mut self, node: &StatementNode<'_>, name: &str, args: &ast::Arguments, decorators: &[Expr]) {
        if node.scopes.immediate() == Scope::ClassBody {
            self.ev.feature(FeatureKind::MethodDecl);
            if ITERATOR_DUNDERS.contains(&name) {
                self.ev.feature(FeatureKind::IteratorDunder);
            }
            self.decorators(decorators, |d| &mut d.method);
        } else {
            let kind = if node.scopes.nearest_callable().is_some() {
                FeatureKind::NestedFunctionDecl
            } else {
                FeatureKind::FunctionDecl
            };
            self.ev.feature(kind);
            self.decorators(decorators, |d| &mut d.function);
        }
        self.defaults(args);
    }

    fn statement(&mut self, node: &StatementNode<'_>) -> bool {
        match node.stmt {
            Stmt::FunctionDef(def) => self.function_def(node, def.name.as_str(), &def.args, &def.decorator_list),
            Stmt::AsyncFunctionDef(def) => self.function_def(node, def.name.as_str(), &def.args, &def.decorator_list),
            Stmt::ClassDef(def) => {
                self.ev.feature(FeatureKind::ClassDecl);
                if !def.bases.is_empty() {
                    self.ev.feature(FeatureKind::Inheritance);
                }
                self.decorators(&def.decorator_list, |d| &mut d.class);
                if def.body.iter().any(declares_iterator_dunder) {
                    self.ev.construct(Construct::IteratorClass);
                }
                self.exprs(&def.bases);
                self.exprs(def.keywords.iter().map(|k| &k.value));
            }
            Stmt::Return(ret) => {
                if node.scopes.nearest_callable() == Some(Scope::MethodBody) {
                    self.ev.features.push(FeatureKind::Return);
                    self.ev.construct(Construct::MethodReturn);
                } else {
                    self.ev.feature(FeatureKind::Return);
                }
                self.opt(&ret.value);
            }
            Stmt::Delete(del) => {
                self.ev.feature(FeatureKind::Del);
                self.exprs(&del.targets);
            }
            Stmt::Assign(assign) => {
                self.exprs(&assign.targets);
                self.expr(&assign.value);
            }
            Stmt::TypeAlias(_) | Stmt::Global(_) | Stmt::Nonlocal(_) => {}
            Stmt::AugAssign(assign) => {
                self.expr(&assign.target);
                self.expr(&assign.value);
            }
            Stmt::AnnAssign(assign) => {
                self.expr(&assign.target);
                self.opt(&assign.value);
            }
            Stmt::For(ast::StmtFor { target, iter, .. }) | Stmt::AsyncFor(ast::StmtAsyncFor { target, iter, .. }) => {
                self.ev.feature(FeatureKind::ForLoop);
                self.expr(target);
                self.expr(iter);
            }
            Stmt::While(w) => {
                self.ev.feature(FeatureKind::WhileLoop);
                self.expr(&w.test);
            }
            Stmt::If(node_if) => {
                self.ev.feature(FeatureKind::IfElse);
                self.expr(&node_if.test);
                for test in &node.elif_tests {
                    self.ev.feature(FeatureKind::IfElse);
                    self.expr(test);
                }
            }
            Stmt::With(ast::StmtWith { items, .. }) | Stmt::AsyncWith(ast::StmtAsyncWith { items, .. }) => {
                self.ev.feature(FeatureKind::With);
                for item in items {
                    self.expr(&item.context_expr);
                    self.opt(&item.optional_vars);
                }
            }
            Stmt::Match(m) => {
                self.expr(&m.subject);
                for case in &m.cases {
                    self.opt(&case.guard);
                }
            }
            Stmt::Raise(raise) => {
                self.ev.feature(FeatureKind::Raise);
                self.opt(&raise.exc);
                self.opt(&raise.cause);
            }
            Stmt::Try(ast::StmtTry { handlers, finalbody, .. })
            | Stmt::TryStar(ast::StmtTryStar { handlers, finalbody, .. }) => {
                self.ev.feature(FeatureKind::Try);
                for handler in handlers {
                    let ast::ExceptHandler::ExceptHandler(h) = handler;
                    self.ev.feature(FeatureKind::Except);
                    self.opt(&h.type_);
                }
                if !finalbody.is_empty() {
                    self.ev.feature(FeatureKind::Finally);
                }
            }
            Stmt::Assert(assert) => {
                self.ev.feature(FeatureKind::Assert);
                self.expr(&assert.test);
                self.opt(&assert.msg);
            }
            Stmt::Import(_) | Stmt::ImportFrom(_) => return true,
            Stmt::Expr(e) => self.expr(&e.value),
            Stmt::Pass(_) => match node.scopes.immediate() {
                Scope::LoopBody => self.ev.feature(FeatureKind::PassInLoop),
                Scope::ClassBody => self.ev.feature(FeatureKind::PassInClass),
                Scope::FunctionBody | Scope::MethodBody => self.ev.feature(FeatureKind::PassInDef),
                Scope::Module => {}
            },
            Stmt::Break(_) => self.ev.feature(FeatureKind::Break),
            Stmt::Continue(_) => self.ev.feature(FeatureKind::Continue),
        }
        false
    }
}

fn declares_iterator_dunder(stmt: &Stmt) -> bool {
    let name = match stmt {
        Stmt::FunctionDef(def) => def.name.as_str(),
        Stmt::AsyncFunctionDef(def) => def.name.as_str(),
        _ => return false,
    };
    ITERATOR_DUNDERS.contains(&name)
}

/// Applies enclosure and imperative suppression to an intrinsic set.
pub fn combine(intrinsic: ParadigmSet, in_class: bool) -> StatementVerdict {
    let enclosure = if in_class { ParadigmSet::of(&[Paradigm::ObjectOriented]) } else { ParadigmSet::EMPTY };
    let direct = intrinsic.intersection(ParadigmSet::non_imperative());
    let mut counted = direct.union(enclosure);
    if direct.is_empty() {
        counted = counted.with(Paradigm::Imperative);
    }
    StatementVerdict { intrinsic, enclosure, counted, is_import: false }
}

const IMPORT_VERDICT: StatementVerdict = StatementVerdict {
    intrinsic: ParadigmSet::EMPTY,
    enclosure: ParadigmSet::EMPTY,
    counted: ParadigmSet::EMPTY,
    is_import: true,
};

/// Full analysis of one statement: verdict plus the features and
/// constructs found in it.
pub fn analyze_statement(node: &StatementNode<'_>, ctx: &FileContext) -> StatementAnalysis {
    let mut scanner = Scanner { ctx, ev: Evidence::default() };
    let is_import = scanner.statement(node);
    let ev = scanner.ev;
    let verdict = if is_import { IMPORT_VERDICT } else { combine(ev.intrinsic, node.scopes.in_class()) };
    StatementAnalysis {
        line: node.line,
        verdict,
        features: ev.features,
        constructs: ev.constructs,
        decorators: ev.decorators,
    }
}

pub fn classify_statement(node: &StatementNode<'_>, ctx: &FileContext) -> StatementVerdict {
    analyze_statement(node, ctx).verdict
}

/// Per-file (or aggregated) paradigm tallies.
///
/// Serialized as `{ functional, oo, procedural, imperative, statements }`;
/// `Display` prints the same order, e.g. `{ 1, 1, 1, 0, 1 }`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParadigmCounts {
    pub functional: u64,
    pub oo: u64,
    pub procedural: u64,
    pub imperative: u64,
    pub statements: u64,
}

impl ParadigmCounts {
    pub const fn new(functional: u64, oo: u64, procedural: u64, imperative: u64, statements: u64) -> Self {
        ParadigmCounts { functional, oo, procedural, imperative, statements }
    }

    pub fn get(&self, paradigm: Paradigm) -> u64 {
        match paradigm {
            Paradigm::Functional => self.functional,
            Paradigm::ObjectOriented => self.oo,
            Paradigm::Procedural => self.procedural,
            Paradigm::Imperative => self.imperative,
        }
    }

    fn slot(&mut self, paradigm: Paradigm) -> &mut u64 {
        match paradigm {
            Paradigm::Functional => &mut self.functional,
            Paradigm::ObjectOriented => &mut self.oo,
            Paradigm::Procedural => &mut self.procedural,
            Paradigm::Imperative => &mut self.imperative,
        }
    }

    /// The four paradigm tallies in [`Paradigm::ALL`] order.
    pub fn tallies(&self) -> [u64; 4] {
        Paradigm::ALL.map(|p| self.get(p))
    }

    pub fn record(&mut self, verdict: &StatementVerdict) {
        self.statements += 1;
        for p in verdict.counted.iter() {
            *self.slot(p) += 1;
        }
    }

    /// Multiplies every field by `factor`.
    #[must_use]
    pub fn scaled(&self, factor: u64) -> Self {
        ParadigmCounts::new(
            self.functional * factor,
            self.oo * factor,
            self.procedural * factor,
            self.imperative * factor,
            self.statements * factor,
        )
    }
}

impl Add for ParadigmCounts {
    type Output = ParadigmCounts;

    fn add(self, rhs: Self) -> Self {
        ParadigmCounts::new(
            self.functional + rhs.functional,
            self.oo + rhs.oo,
            self.procedural + rhs.procedural,
            self.imperative + rhs.imperative,
            self.statements + rhs.statements,
        )
    }
}

impl AddAssign for ParadigmCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for ParadigmCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ParadigmCounts::default(), Add::add)
    }
}

impl fmt::Display for ParadigmCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{ {}, {}, {}, {}, {} }}",
            self.functional, self.oo, self.procedural, self.imperative, self.statements
        )
    }
}

/// Raw, unclamped feature occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureTally {
    kinds: BTreeMap<FeatureKind, u64>,
    not_in: u64,
    decorators: DecoratorUses,
}

impl FeatureTally {
    pub fn get(&self, kind: FeatureKind) -> u64 {
        self.kinds.get(&kind).copied().unwrap_or(0)
    }

    /// Non-zero entries in catalog order.
    pub fn iter(&self) -> impl Iterator<Item = (FeatureKind, u64)> + '_ {
        self.kinds.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// `not in` occurrences (a subset of [`FeatureKind::InOperator`]).
    pub fn not_in(&self) -> u64 {
        self.not_in
    }

    pub fn method_decorators(&self) -> u64 {
        self.decorators.method
    }

    pub fn class_decorators(&self) -> u64 {
        self.decorators.class
    }

    pub fn function_decorators(&self) -> u64 {
        self.decorators.function
    }

    fn add_statement(&mut self, analysis: &StatementAnalysis, not_in: u64) {
        for &kind in &analysis.features {
            *self.kinds.entry(kind).or_insert(0) += 1;
        }
        self.not_in += not_in;
        self.decorators.method += analysis.decorators.method;
        self.decorators.class += analysis.decorators.class;
        self.decorators.function += analysis.decorators.function;
    }

    pub fn merge(&mut self, other: &FeatureTally) {
        for (kind, n) in other.iter() {
            *self.kinds.entry(kind).or_insert(0) += n;
        }
        self.not_in += other.not_in;
        self.decorators.method += other.decorators.method;
        self.decorators.class += other.decorators.class;
        self.decorators.function += other.decorators.function;
    }

    /// Functional and OO feature uses grouped the way the usage report
    /// presents them, in a fixed order.
    pub fn usage_rows(&self) -> Vec<UsageRow> {
        use FeatureKind::*;
        let api_calls: u64 = FeatureKind::ALL
            .iter()
            .filter(|k| k.detection() == crate::catalog::Detection::Api)
            .map(|&k| self.get(k))
            .sum();
        let oo = Paradigm::ObjectOriented;
        let func = Paradigm::Functional;
        let rows: [(&'static str, Paradigm, u64); 21] = [
            ("method declarations", oo, self.get(MethodDecl)),
            ("class declarations", oo, self.get(ClassDecl)),
            ("class inheritance", oo, self.get(Inheritance)),
            ("for-each", func, self.get(ForLoop)),
            ("built-in functions (functools/itertools)", func, api_calls),
            ("array comprehensions", func, self.get(ListComprehension)),
            ("try", oo, self.get(Try)),
            ("except", oo, self.get(Except)),
            ("in", func, self.get(InOperator) - self.not_in),
            ("method decorators", func, self.decorators.method),
            ("raise", oo, self.get(Raise)),
            ("with", oo, self.get(With)),
            ("not in", func, self.not_in),
            ("lambda", func, self.get(Lambda)),
            ("higher-order functions", func, self.get(FunctionAsArg)),
            ("yield", func, self.get(Yield)),
            ("class decorators", func, self.decorators.class),
            ("finally", oo, self.get(Finally)),
            ("generators", func, self.get(GeneratorExpression)),
            ("iterable", func, self.get(IteratorDunder)),
            ("function decorators", func, self.decorators.function),
        ];
        rows.into_iter().map(|(feature, paradigm, count)| UsageRow { feature, paradigm, count }).collect()
    }
}

/// One line of the functional/OO feature usage report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UsageRow {
    pub feature: &'static str,
    pub paradigm: Paradigm,
    pub count: u64,
}

/// Counts, feature tallies and heuristic metadata for one file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileAnalysis {
    pub counts: ParadigmCounts,
    pub features: FeatureTally,
    /// Bare calls to names with no visible binding, counted as procedural.
    pub unresolved_calls: u64,
}

/// Per-statement analyses of a whole file, in source order.
pub fn analyze_statements(tree: &SyntaxTree) -> Vec<StatementAnalysis> {
    let ctx = FileContext::new(tree);
    tree.statements().iter().map(|node| analyze_statement(node, &ctx)).collect()
}

fn analyze_with(tree: &SyntaxTree, ctx: &FileContext) -> FileAnalysis {
    let mut out = FileAnalysis::default();
    for node in tree.statements() {
        let mut scanner = Scanner { ctx, ev: Evidence::default() };
        let is_import = scanner.statement(&node);
        let ev = scanner.ev;
        let not_in = ev.not_in;
        let verdict = if is_import { IMPORT_VERDICT } else { combine(ev.intrinsic, node.scopes.in_class()) };
        out.counts.record(&verdict);
        out.unresolved_calls += ev.constructs.iter().filter(|c| **c == Construct::UnresolvedCall).count() as u64;
        let analysis = StatementAnalysis {
            line: node.line,
            verdict,
            features: ev.features,
            constructs: ev.constructs,
            decorators: ev.decorators,
        };
        out.features.add_statement(&analysis, not_in);
    }
    out
}

/// Counts, feature tallies and metadata in a single pass.
pub fn analyze_tree(tree: &SyntaxTree) -> FileAnalysis {
    analyze_with(tree, &FileContext::new(tree))
}

/// Clamped per-statement paradigm counts for a file.
pub fn count_file(tree: &SyntaxTree) -> ParadigmCounts {
    analyze_tree(tree).counts
}

/// Unclamped occurrence counts of every feature in the file.
pub fn detect_feature_uses(tree: &SyntaxTree, imports: &ImportContext) -> FeatureTally {
    analyze_with(tree, &FileContext::with_imports(tree, imports.clone())).features
}
