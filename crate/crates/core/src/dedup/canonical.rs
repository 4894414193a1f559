//! Canonical JSON serialization of a parsed module.
//!
//! The layout is documented in `docs/canonical-ast.md`. In short: every node
//! is a JSON object whose first key is `"_type"` (the node's name in
//! Python's `ast` module) followed by its fields in `ast` order. Source
//! positions, type comments and `type_ignores` are dropped. No whitespace is
//! emitted. Strings are JSON-escaped; integers are decimal; floats are
//! shortest round-trip decimal strings.

use std::fmt::Write as _;

use rustpython_parser::ast::{self, Constant, Expr, Pattern, Stmt};

pub fn serialize_module(suite: &[Stmt]) -> String {
    let mut w = Writer { out: String::with_capacity(256) };
    w.out.push_str("{\"_type\":\"Module\",\"body\":");
    w.stmts(suite);
    w.out.push('}');
    w.out
}

struct Writer {
    out: String,
}

impl Writer {
    fn node(&mut self, ty: &str) {
        self.out.push_str("{\"_type\":\"");
        self.out.push_str(ty);
        self.out.push('"');
    }

    fn key(&mut self, name: &str) {
        self.out.push_str(",\"");
        self.out.push_str(name);
        self.out.push_str("\":");
    }

    fn end(&mut self) {
        self.out.push('}');
    }

    fn string(&mut self, s: &str) {
        self.out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
    }

    fn ident(&mut self, key: &str, id: &ast::Identifier) {
        self.key(key);
        self.string(id.as_str());
    }

    fn opt_ident(&mut self, key: &str, id: &Option<ast::Identifier>) {
        self.key(key);
        match id {
            Some(id) => self.string(id.as_str()),
            None => self.out.push_str("null"),
        }
    }

    fn idents(&mut self, key: &str, ids: &[ast::Identifier]) {
        self.key(key);
        self.list(ids, |w, id| w.string(id.as_str()));
    }

    fn list<T>(&mut self, items: &[T], mut f: impl FnMut(&mut Self, &T)) {
        self.out.push('[');
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            f(self, item);
        }
        self.out.push(']');
    }

    fn stmts(&mut self, body: &[Stmt]) {
        self.list(body, |w, s| w.stmt(s));
    }

    fn body(&mut self, key: &str, body: &[Stmt]) {
        self.key(key);
        self.stmts(body);
    }

    fn expr_field(&mut self, key: &str, e: &Expr) {
        self.key(key);
        self.expr(e);
    }

    fn opt_expr(&mut self, key: &str, e: &Option<Box<Expr>>) {
        self.key(key);
        match e {
            Some(e) => self.expr(e),
            None => self.out.push_str("null"),
        }
    }

    fn exprs(&mut self, key: &str, es: &[Expr]) {
        self.key(key);
        self.list(es, |w, e| w.expr(e));
    }

    fn flag(&mut self, key: &str, v: bool) {
        self.key(key);
        self.out.push_str(if v { "true" } else { "false" });
    }

    fn int(&mut self, key: &str, v: u32) {
        self.key(key);
        let _ = write!(self.out, "{v}");
    }

    fn tag(&mut self, key: &str, name: &str) {
        self.key(key);
        self.node(name);
        self.end();
    }

    fn decorators_and_defs(
        &mut self,
        decorators: &[Expr],
        returns: &Option<Box<Expr>>,
        type_params: &[ast::TypeParam],
    ) {
        self.exprs("decorator_list", decorators);
        self.opt_expr("returns", returns);
        self.type_params(type_params);
    }

    fn type_params(&mut self, params: &[ast::TypeParam]) {
        self.key("type_params");
        self.list(params, |w, p| match p {
            ast::TypeParam::TypeVar(t) => {
                w.node("TypeVar");
                w.ident("name", &t.name);
                w.opt_expr("bound", &t.bound);
                w.end();
            }
            ast::TypeParam::ParamSpec(t) => {
                w.node("ParamSpec");
                w.ident("name", &t.name);
                w.end();
            }
            ast::TypeParam::TypeVarTuple(t) => {
                w.node("TypeVarTuple");
                w.ident("name", &t.name);
                w.end();
            }
        });
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::FunctionDef(d) => {
                self.node("FunctionDef");
                self.ident("name", &d.name);
                self.key("args");
                self.arguments(&d.args);
                self.body("body", &d.body);
                self.decorators_and_defs(&d.decorator_list, &d.returns, &d.type_params);
            }
            Stmt::AsyncFunctionDef(d) => {
                self.node("AsyncFunctionDef");
                self.ident("name", &d.name);
                self.key("args");
                self.arguments(&d.args);
                self.body("body", &d.body);
                self.decorators_and_defs(&d.decorator_list, &d.returns, &d.type_params);
            }
            Stmt::ClassDef(d) => {
                self.node("ClassDef");
                self.ident("name", &d.name);
                self.exprs("bases", &d.bases);
                self.keywords(&d.keywords);
                self.body("body", &d.body);
                self.exprs("decorator_list", &d.decorator_list);
                self.type_params(&d.type_params);
            }
            Stmt::Return(r) => {
                self.node("Return");
                self.opt_expr("value", &r.value);
            }
            Stmt::Delete(d) => {
                self.node("Delete");
                self.exprs("targets", &d.targets);
            }
            Stmt::Assign(a) => {
                self.node("Assign");
                self.exprs("targets", &a.targets);
                self.expr_field("value", &a.value);
            }
            Stmt::TypeAlias(a) => {
                self.node("TypeAlias");
                self.expr_field("name", &a.name);
                self.type_params(&a.type_params);
                self.expr_field("value", &a.value);
            }
            Stmt::AugAssign(a) => {
                self.node("AugAssign");
                self.expr_field("target", &a.target);
                self.tag("op", operator(a.op));
                self.expr_field("value", &a.value);
            }
            Stmt::AnnAssign(a) => {
                self.node("AnnAssign");
                self.expr_field("target", &a.target);
                self.expr_field("annotation", &a.annotation);
                self.opt_expr("value", &a.value);
                self.flag("simple", a.simple);
            }
            Stmt::For(f) => {
                self.node("For");
                self.expr_field("target", &f.target);
                self.expr_field("iter", &f.iter);
                self.body("body", &f.body);
                self.body("orelse", &f.orelse);
            }
            Stmt::AsyncFor(f) => {
                self.node("AsyncFor");
                self.expr_field("target", &f.target);
                self.expr_field("iter", &f.iter);
                self.body("body", &f.body);
                self.body("orelse", &f.orelse);
            }
            Stmt::While(w) => {
                self.node("While");
                self.expr_field("test", &w.test);
                self.body("body", &w.body);
                self.body("orelse", &w.orelse);
            }
            Stmt::If(i) => {
                self.node("If");
                self.expr_field("test", &i.test);
                self.body("body", &i.body);
                self.body("orelse", &i.orelse);
            }
            Stmt::With(w) => {
                self.node("With");
                self.with_items(&w.items);
                self.body("body", &w.body);
            }
            Stmt::AsyncWith(w) => {
                self.node("AsyncWith");
                self.with_items(&w.items);
                self.body("body", &w.body);
            }
            Stmt::Match(m) => {
                self.node("Match");
                self.expr_field("subject", &m.subject);
                self.key("cases");
                self.list(&m.cases, |w, c| {
                    w.node("match_case");
                    w.key("pattern");
                    w.pattern(&c.pattern);
                    w.opt_expr("guard", &c.guard);
                    w.body("body", &c.body);
                    w.end();
                });
            }
            Stmt::Raise(r) => {
                self.node("Raise");
                self.opt_expr("exc", &r.exc);
                self.opt_expr("cause", &r.cause);
            }
            Stmt::Try(t) => {
                self.node("Try");
                self.try_parts(&t.body, &t.handlers, &t.orelse, &t.finalbody);
            }
            Stmt::TryStar(t) => {
                self.node("TryStar");
                self.try_parts(&t.body, &t.handlers, &t.orelse, &t.finalbody);
            }
            Stmt::Assert(a) => {
                self.node("Assert");
                self.expr_field("test", &a.test);
                self.opt_expr("msg", &a.msg);
            }
            Stmt::Import(i) => {
                self.node("Import");
                self.aliases(&i.names);
            }
            Stmt::ImportFrom(i) => {
                self.node("ImportFrom");
                self.opt_ident("module", &i.module);
                self.aliases(&i.names);
                self.int("level", i.level.as_ref().map_or(0, |l| l.to_u32()));
            }
            Stmt::Global(g) => {
                self.node("Global");
                self.idents("names", &g.names);
            }
            Stmt::Nonlocal(g) => {
                self.node("Nonlocal");
                self.idents("names", &g.names);
            }
            Stmt::Expr(e) => {
                self.node("Expr");
                self.expr_field("value", &e.value);
            }
            Stmt::Pass(_) => self.node("Pass"),
            Stmt::Break(_) => self.node("Break"),
            Stmt::Continue(_) => self.node("Continue"),
        }
        self.end();
    }

    fn try_parts(&mut self, body: &[Stmt], handlers: &[ast::ExceptHandler], orelse: &[Stmt], finalbody: &[Stmt]) {
        self.body("body", body);
        self.key("handlers");
        self.list(handlers, |w, h| {
            let ast::ExceptHandler::ExceptHandler(h) = h;
            w.node("ExceptHandler");
            w.opt_expr("type", &h.type_);
            w.opt_ident("name", &h.name);
            w.body("body", &h.body);
            w.end();
        });
        self.body("orelse", orelse);
        self.body("finalbody", finalbody);
    }

    fn with_items(&mut self, items: &[ast::WithItem]) {
        self.key("items");
        self.list(items, |w, item| {
            w.node("withitem");
            w.expr_field("context_expr", &item.context_expr);
            w.opt_expr("optional_vars", &item.optional_vars);
            w.end();
        });
    }

    fn aliases(&mut self, names: &[ast::Alias]) {
        self.key("names");
        self.list(names, |w, a| {
            w.node("alias");
            w.ident("name", &a.name);
            w.opt_ident("asname", &a.asname);
            w.end();
        });
    }

    fn keywords(&mut self, keywords: &[ast::Keyword]) {
        self.key("keywords");
        self.list(keywords, |w, k| {
            w.node("keyword");
            w.opt_ident("arg", &k.arg);
            w.expr_field("value", &k.value);
            w.end();
        });
    }

    fn arg(&mut self, a: &ast::Arg) {
        self.node("arg");
        self.ident("arg", &a.arg);
        self.opt_expr("annotation", &a.annotation);
        self.end();
    }

    fn opt_arg(&mut self, key: &str, a: &Option<Box<ast::Arg>>) {
        self.key(key);
        match a {
            Some(a) => self.arg(a),
            None => self.out.push_str("null"),
        }
    }

    /// Python's `ast.arguments` layout: defaults are listed separately from
    /// the parameters they belong to.
    fn arguments(&mut self, args: &ast::Arguments) {
        self.node("arguments");
        self.key("posonlyargs");
        self.list(&args.posonlyargs, |w, a| w.arg(&a.def));
        self.key("args");
        self.list(&args.args, |w, a| w.arg(&a.def));
        self.opt_arg("vararg", &args.vararg);
        self.key("kwonlyargs");
        self.list(&args.kwonlyargs, |w, a| w.arg(&a.def));
        self.key("kw_defaults");
        self.list(&args.kwonlyargs, |w, a| match &a.default {
            Some(d) => w.expr(d),
            None => w.out.push_str("null"),
        });
        self.opt_arg("kwarg", &args.kwarg);
        let defaults: Vec<&Expr> =
            args.posonlyargs.iter().chain(&args.args).filter_map(|a| a.default.as_deref()).collect();
        self.key("defaults");
        self.list(&defaults, |w, d| w.expr(d));
        self.end();
    }

    fn comprehensions(&mut self, generators: &[ast::Comprehension]) {
        self.key("generators");
        self.list(generators, |w, g| {
            w.node("comprehension");
            w.expr_field("target", &g.target);
            w.expr_field("iter", &g.iter);
            w.exprs("ifs", &g.ifs);
            w.int("is_async", g.is_async as u32);
            w.end();
        });
    }

    fn ctx(&mut self, ctx: &ast::ExprContext) {
        let name = match ctx {
            ast::ExprContext::Load => "Load",
            ast::ExprContext::Store => "Store",
            ast::ExprContext::Del => "Del",
        };
        self.tag("ctx", name);
    }

    fn constant(&mut self, c: &Constant) {
        match c {
            Constant::None => self.out.push_str("null"),
            Constant::Bool(b) => self.out.push_str(if *b { "true" } else { "false" }),
            Constant::Str(s) => self.string(s),
            Constant::Bytes(b) => {
                self.out.push_str("{\"bytes\":\"");
                self.out.push_str(&hex::encode(b));
                self.out.push_str("\"}");
            }
            Constant::Int(i) => {
                let _ = write!(self.out, "{i}");
            }
            Constant::Tuple(items) => self.list(items, |w, c| w.constant(c)),
            Constant::Float(f) => {
                self.out.push_str("{\"float\":");
                self.string(&float_repr(*f));
                self.out.push('}');
            }
            Constant::Complex { real, imag } => {
                self.out.push_str("{\"complex\":[");
                self.string(&float_repr(*real));
                self.out.push(',');
                self.string(&float_repr(*imag));
                self.out.push_str("]}");
            }
            Constant::Ellipsis => self.out.push_str("{\"ellipsis\":true}"),
        }
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::BoolOp(x) => {
                self.node("BoolOp");
                self.tag(
                    "op",
                    match x.op {
                        ast::BoolOp::And => "And",
                        ast::BoolOp::Or => "Or",
                    },
                );
                self.exprs("values", &x.values);
            }
            Expr::NamedExpr(x) => {
                self.node("NamedExpr");
                self.expr_field("target", &x.target);
                self.expr_field("value", &x.value);
            }
            Expr::BinOp(x) => {
                self.node("BinOp");
                self.expr_field("left", &x.left);
                self.tag("op", operator(x.op));
                self.expr_field("right", &x.right);
            }
            Expr::UnaryOp(x) => {
                self.node("UnaryOp");
                let op = match x.op {
                    ast::UnaryOp::Invert => "Invert",
                    ast::UnaryOp::Not => "Not",
                    ast::UnaryOp::UAdd => "UAdd",
                    ast::UnaryOp::USub => "USub",
                };
                self.tag("op", op);
                self.expr_field("operand", &x.operand);
            }
            Expr::Lambda(x) => {
                self.node("Lambda");
                self.key("args");
                self.arguments(&x.args);
                self.expr_field("body", &x.body);
            }
            Expr::IfExp(x) => {
                self.node("IfExp");
                self.expr_field("test", &x.test);
                self.expr_field("body", &x.body);
                self.expr_field("orelse", &x.orelse);
            }
            Expr::Dict(x) => {
                self.node("Dict");
                self.key("keys");
                self.list(&x.keys, |w, k| match k {
                    Some(k) => w.expr(k),
                    None => w.out.push_str("null"),
                });
                self.exprs("values", &x.values);
            }
            Expr::Set(x) => {
                self.node("Set");
                self.exprs("elts", &x.elts);
            }
            Expr::ListComp(x) => {
                self.node("ListComp");
                self.expr_field("elt", &x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::SetComp(x) => {
                self.node("SetComp");
                self.expr_field("elt", &x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::DictComp(x) => {
                self.node("DictComp");
                self.expr_field("key", &x.key);
                self.expr_field("value", &x.value);
                self.comprehensions(&x.generators);
            }
            Expr::GeneratorExp(x) => {
                self.node("GeneratorExp");
                self.expr_field("elt", &x.elt);
                self.comprehensions(&x.generators);
            }
            Expr::Await(x) => {
                self.node("Await");
                self.expr_field("value", &x.value);
            }
            Expr::Yield(x) => {
                self.node("Yield");
                self.opt_expr("value", &x.value);
            }
            Expr::YieldFrom(x) => {
                self.node("YieldFrom");
                self.expr_field("value", &x.value);
            }
            Expr::Compare(x) => {
                self.node("Compare");
                self.expr_field("left", &x.left);
                self.key("ops");
                self.list(&x.ops, |w, op| {
                    w.node(cmp_op(*op));
                    w.end();
                });
                self.exprs("comparators", &x.comparators);
            }
            Expr::Call(x) => {
                self.node("Call");
                self.expr_field("func", &x.func);
                self.exprs("args", &x.args);
                self.keywords(&x.keywords);
            }
            Expr::FormattedValue(x) => {
                self.node("FormattedValue");
                self.expr_field("value", &x.value);
                self.key("conversion");
                let _ = write!(self.out, "{}", x.conversion as i8);
                self.opt_expr("format_spec", &x.format_spec);
            }
            Expr::JoinedStr(x) => {
                self.node("JoinedStr");
                self.exprs("values", &x.values);
            }
            Expr::Constant(x) => {
                self.node("Constant");
                self.key("value");
                self.constant(&x.value);
                self.key("kind");
                match &x.kind {
                    Some(k) => self.string(k),
                    None => self.out.push_str("null"),
                }
            }
            Expr::Attribute(x) => {
                self.node("Attribute");
                self.expr_field("value", &x.value);
                self.ident("attr", &x.attr);
                self.ctx(&x.ctx);
            }
            Expr::Subscript(x) => {
                self.node("Subscript");
                self.expr_field("value", &x.value);
                self.expr_field("slice", &x.slice);
                self.ctx(&x.ctx);
            }
            Expr::Starred(x) => {
                self.node("Starred");
                self.expr_field("value", &x.value);
                self.ctx(&x.ctx);
            }
            Expr::Name(x) => {
                self.node("Name");
                self.ident("id", &x.id);
                self.ctx(&x.ctx);
            }
            Expr::List(x) => {
                self.node("List");
                self.exprs("elts", &x.elts);
                self.ctx(&x.ctx);
            }
            Expr::Tuple(x) => {
                self.node("Tuple");
                self.exprs("elts", &x.elts);
                self.ctx(&x.ctx);
            }
            Expr::Slice(x) => {
                self.node("Slice");
                self.opt_expr("lower", &x.lower);
                self.opt_expr("upper", &x.upper);
                self.opt_expr("step", &x.step);
            }
        }
        self.end();
    }

    fn patterns(&mut self, key: &str, ps: &[Pattern]) {
        self.key(key);
        self.list(ps, |w, p| w.pattern(p));
    }

    fn pattern(&mut self, p: &Pattern) {
        match p {
            Pattern::MatchValue(x) => {
                self.node("MatchValue");
                self.expr_field("value", &x.value);
            }
            Pattern::MatchSingleton(x) => {
                self.node("MatchSingleton");
                self.key("value");
                self.constant(&x.value);
            }
            Pattern::MatchSequence(x) => {
                self.node("MatchSequence");
                self.patterns("patterns", &x.patterns);
            }
            Pattern::MatchMapping(x) => {
                self.node("MatchMapping");
                self.exprs("keys", &x.keys);
                self.patterns("patterns", &x.patterns);
                self.opt_ident("rest", &x.rest);
            }
            Pattern::MatchClass(x) => {
                self.node("MatchClass");
                self.expr_field("cls", &x.cls);
                self.patterns("patterns", &x.patterns);
                self.idents("kwd_attrs", &x.kwd_attrs);
                self.patterns("kwd_patterns", &x.kwd_patterns);
            }
            Pattern::MatchStar(x) => {
                self.node("MatchStar");
                self.opt_ident("name", &x.name);
            }
            Pattern::MatchAs(x) => {
                self.node("MatchAs");
                self.key("pattern");
                match &x.pattern {
                    Some(p) => self.pattern(p),
                    None => self.out.push_str("null"),
                }
                self.opt_ident("name", &x.name);
            }
            Pattern::MatchOr(x) => {
                self.node("MatchOr");
                self.patterns("patterns", &x.patterns);
            }
        }
        self.end();
    }
}

fn float_repr(f: f64) -> String {
    if f.is_infinite() {
        if f > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else if f.is_nan() {
        "nan".to_owned()
    } else {
        format!("{f:?}")
    }
}

fn operator(op: ast::Operator) -> &'static str {
    use ast::Operator::*;
    match op {
        Add => "Add",
        Sub => "Sub",
        Mult => "Mult",
        MatMult => "MatMult",
        Div => "Div",
        Mod => "Mod",
        Pow => "Pow",
        LShift => "LShift",
        RShift => "RShift",
        BitOr => "BitOr",
        BitXor => "BitXor",
        BitAnd => "BitAnd",
        FloorDiv => "FloorDiv",
    }
}

fn cmp_op(op: ast::CmpOp) -> &'static str {
    use ast::CmpOp::*;
    match op {
        Eq => "Eq",
        NotEq => "NotEq",
        Lt => "Lt",
        LtE => "LtE",
        Gt => "Gt",
        GtE => "GtE",
        Is => "Is",
        IsNot => "IsNot",
        In => "In",
        NotIn => "NotIn",
    }
}
