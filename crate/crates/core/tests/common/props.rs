//! Generators and property bodies, shared by the property suite and the
//! acceptance run.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use paradigm_profiler::analyzer::{analyze_statements, combine};
use paradigm_profiler::corpus::agreement::{cohen_kappa, fleiss_kappa, RatingMatrix};
use paradigm_profiler::corpus::manifest::{parse_manifest, ManifestEntry};
use paradigm_profiler::corpus::output::to_json;
use paradigm_profiler::corpus::{evolution_report, run_corpus, CorpusConfig, DedupMode, EvolutionRecord};
use paradigm_profiler::dedup::HashedFile;
use paradigm_profiler::{
    canonical_hash, count_file, dedup_files, label_file, label_project, parse_source, Label, Paradigm, ParadigmCounts,
    ParadigmSet, ProjectLabelingConfig, SourceFile,
};

pub const CASES: u32 = 1000;

/// Placeholder for inter-token whitespace.
const S: &str = "\u{1}";

#[derive(Debug, Clone)]
pub enum Node {
    Line(String),
    Block(String, Vec<Node>),
    /// `if` with optional elif and else bodies.
    If(String, Vec<Node>, Option<(String, Vec<Node>)>, Option<Vec<Node>>),
    Try(Vec<Node>, Vec<Node>, Option<Vec<Node>>),
}

pub fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_owned()),
        Just("xs".to_owned()),
        Just("self.v".to_owned()),
        Just("os.sep".to_owned()),
        Just("Cls".to_owned()),
        Just("f".to_owned()),
        Just("1".to_owned()),
        Just("2.5".to_owned()),
        Just("'a'".to_owned()),
        Just("[1,{S}2]".replace("{S}", S)),
    ];
    let callee = prop::sample::select(vec![
        "map",
        "sorted",
        "print",
        "f",
        "g",
        "Cls",
        "reduce",
        "chain",
        "os.getcwd",
        "obj.send",
        "iter",
        "zip",
        "len",
        "obj.run",
        "functools.partial",
    ]);
    leaf.prop_recursive(3, 24, 3, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}{S}+{S}{b}")),
            (callee.clone(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(c, args)| format!("{c}({})", args.join(&format!(",{S}")))),
            (inner.clone(), prop::sample::select(vec!["run", "sorted", "send", "m"]))
                .prop_map(|(a, m)| format!("({a}).{m}()")),
            inner.clone().prop_map(|a| format!("(lambda{S}v:{S}{a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("[{a}{S}for{S}v{S}in{S}{b}]")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}{S}for{S}v{S}in{S}{b}{S}if{S}v)")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}{S}in{S}{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}{S}not{S}in{S}{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})[{b}]")),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| format!("({a}{S}if{S}{b}{S}else{S}{c})")),
        ]
    })
}

pub fn simple() -> impl Strategy<Value = String> {
    prop_oneof![
        expr().prop_map(|e| format!("x{S}={S}{e}")),
        expr(),
        expr().prop_map(|e| format!("return{S}{e}")),
        expr().prop_map(|e| format!("self.v{S}+={S}{e}")),
        expr().prop_map(|e| format!("yield{S}{e}")),
        expr().prop_map(|e| format!("assert{S}{e}")),
        expr().prop_map(|e| format!("raise{S}ValueError({e})")),
        Just("pass".to_owned()),
        Just("break".to_owned()),
        Just("del{S}x".replace("{S}", S)),
        Just("import{S}os".replace("{S}", S)),
        Just("from{S}itertools{S}import{S}chain".replace("{S}", S)),
        Just("from{S}functools{S}import{S}reduce{S}as{S}r".replace("{S}", S)),
    ]
}

pub fn header() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(format!("def{S}f(a,{S}b{S}={S}1):")),
        Just(format!("def{S}__iter__(self):")),
        Just(format!("def{S}m(self):")),
        Just(format!("@staticmethod\u{2}def{S}h():")),
        Just(format!("class{S}Cls:")),
        Just(format!("class{S}Sub(Base):")),
        Just(format!("@dataclass\u{2}class{S}D:")),
        expr().prop_map(|e| format!("for{S}v{S}in{S}{e}:")),
        expr().prop_map(|e| format!("while{S}{e}:")),
        expr().prop_map(|e| format!("with{S}{e}{S}as{S}h:")),
    ]
}

pub fn node() -> impl Strategy<Value = Node> {
    let leaf = simple().prop_map(Node::Line);
    leaf.prop_recursive(3, 32, 4, |inner| {
        let body = || prop::collection::vec(inner.clone(), 1..4);
        prop_oneof![
            3 => simple().prop_map(Node::Line),
            2 => (header(), body()).prop_map(|(h, b)| Node::Block(h, b)),
            1 => (
                expr(),
                body(),
                prop::option::of((expr(), body())),
                prop::option::of(body())
            )
                .prop_map(|(t, b, elif, els)| Node::If(format!("if{S}{t}:"), b, elif.map(|(e, eb)| (format!("elif{S}{e}:"), eb)), els)),
            1 => (body(), body(), prop::option::of(body())).prop_map(|(b, h, f)| Node::Try(b, h, f)),
        ]
    })
}

pub fn program() -> impl Strategy<Value = Vec<Node>> {
    prop::collection::vec(node(), 0..6)
}

/// Shorter programs, for properties that parse many of them per case.
pub fn small_program() -> impl Strategy<Value = Vec<Node>> {
    prop::collection::vec(node(), 0..3)
}

/// How to lay out a program: `None` is the plain form; otherwise the
/// choices drive extra spaces, comments and blank lines.
#[derive(Debug, Clone)]
pub struct Layout {
    pub indent: usize,
    pub noise: Vec<u8>,
}

struct Renderer<'a> {
    layout: Option<&'a Layout>,
    cursor: usize,
    out: String,
}

impl Renderer<'_> {
    fn choice(&mut self) -> u8 {
        match self.layout {
            None => 0,
            Some(l) if l.noise.is_empty() => 0,
            Some(l) => {
                self.cursor += 1;
                l.noise[self.cursor % l.noise.len()]
            }
        }
    }

    fn line(&mut self, depth: usize, text: &str) {
        let indent = self.layout.map_or(4, |l| l.indent) * depth;
        for (i, part) in text.split('\u{2}').enumerate() {
            if i > 0 || !part.is_empty() {
                let mut rendered = String::new();
                for (j, piece) in part.split(S).enumerate() {
                    if j > 0 {
                        let extra = self.choice() % 3;
                        rendered.push_str(&" ".repeat(1 + extra as usize));
                    }
                    rendered.push_str(piece);
                }
                let c = self.choice();
                if c % 5 == 1 {
                    self.out.push('\n');
                }
                if c % 7 == 2 {
                    self.out.push_str(&format!("{}# note\n", " ".repeat(indent)));
                }
                self.out.push_str(&" ".repeat(indent));
                self.out.push_str(&rendered);
                if c % 3 == 1 {
                    self.out.push_str("  # trailing");
                }
                self.out.push('\n');
            }
        }
    }

    fn nodes(&mut self, nodes: &[Node], depth: usize) {
        for n in nodes {
            match n {
                Node::Line(t) => self.line(depth, t),
                Node::Block(h, body) => {
                    self.line(depth, h);
                    self.nodes(body, depth + 1);
                }
                Node::If(h, body, elif, els) => {
                    self.line(depth, h);
                    self.nodes(body, depth + 1);
                    if let Some((eh, eb)) = elif {
                        self.line(depth, eh);
                        self.nodes(eb, depth + 1);
                    }
                    if let Some(eb) = els {
                        self.line(depth, "else:");
                        self.nodes(eb, depth + 1);
                    }
                }
                Node::Try(body, handler, finally) => {
                    self.line(depth, "try:");
                    self.nodes(body, depth + 1);
                    self.line(depth, &format!("except{S}ValueError:"));
                    self.nodes(handler, depth + 1);
                    if let Some(f) = finally {
                        self.line(depth, "finally:");
                        self.nodes(f, depth + 1);
                    }
                }
            }
        }
    }
}

pub fn render(program: &[Node], layout: Option<&Layout>) -> String {
    let mut r = Renderer { layout, cursor: 0, out: String::new() };
    r.nodes(program, 0);
    r.out
}

pub fn layout() -> impl Strategy<Value = Layout> {
    (prop::sample::select(vec![1usize, 2, 3, 4, 8]), prop::collection::vec(any::<u8>(), 1..16))
        .prop_map(|(indent, noise)| Layout { indent, noise })
}

pub fn parse(src: &str) -> paradigm_profiler::SyntaxTree {
    parse_source(&SourceFile::new("gen.py", src)).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

pub fn counts() -> impl Strategy<Value = ParadigmCounts> {
    (0u64..60).prop_flat_map(|n| {
        (0..=n, 0..=n, 0..=n, 0..=n).prop_map(move |(f, o, p, i)| ParadigmCounts::new(f, o, p, i, n))
    })
}

pub fn label() -> impl Strategy<Value = Label> {
    prop::sample::select(Label::ALL.to_vec())
}

pub fn paradigm_set() -> impl Strategy<Value = ParadigmSet> {
    (0u8..16).prop_map(|bits| Paradigm::ALL.iter().copied().filter(|p| bits & (1 << (*p as u8)) != 0).collect())
}

const NON_IMPERATIVE: [Paradigm; 3] = [Paradigm::Functional, Paradigm::ObjectOriented, Paradigm::Procedural];

fn has_non_imperative(s: ParadigmSet) -> bool {
    NON_IMPERATIVE.iter().any(|p| s.contains(*p))
}

type Outcome = Result<(), TestCaseError>;

pub fn clamping(program: &[Node]) -> Outcome {
    let counts = count_file(&parse(&render(program, None)));
    for t in counts.tallies() {
        prop_assert!(t <= counts.statements);
    }
    Ok(())
}

/// Imperative iff no other paradigm is intrinsic, and every statement in a
/// class body counts OO. Imports carry no paradigm at all.
pub fn suppression_and_enclosure(program: &[Node]) -> Outcome {
    let src = render(program, None);
    let tree = parse(&src);
    let nodes = tree.statements();
    let analyses = analyze_statements(&tree);
    prop_assert_eq!(nodes.len(), analyses.len());
    for (node, a) in nodes.iter().zip(&analyses) {
        let v = &a.verdict;
        if v.is_import {
            prop_assert!(v.counted.is_empty());
            continue;
        }
        prop_assert!(v.counted.is_superset(v.enclosure));
        prop_assert_eq!(
            v.counted.contains(Paradigm::Imperative),
            !has_non_imperative(v.intrinsic),
            "line {}\n{}",
            a.line,
            src
        );
        if node.scopes.in_class() {
            prop_assert!(v.counted.contains(Paradigm::ObjectOriented), "line {}\n{}", a.line, src);
        }
    }
    Ok(())
}

pub fn combine_rule(intrinsic: ParadigmSet, in_class: bool) -> Outcome {
    let v = combine(intrinsic, in_class);
    prop_assert!(v.counted.is_superset(v.enclosure));
    prop_assert_eq!(v.counted.contains(Paradigm::Imperative), !has_non_imperative(intrinsic));
    prop_assert_eq!(v.enclosure.contains(Paradigm::ObjectOriented), in_class);
    for p in NON_IMPERATIVE {
        prop_assert_eq!(v.counted.contains(p), intrinsic.contains(p) || v.enclosure.contains(p));
    }
    Ok(())
}

pub fn scale_free(c: &ParadigmCounts, k: u64) -> Outcome {
    prop_assert_eq!(label_file(c), label_file(&c.scaled(k)));
    let l = label_file(c);
    if l != Label::Mixed {
        let winner = Paradigm::ALL.into_iter().find(|p| Label::from(*p) == l).unwrap();
        for p in Paradigm::ALL {
            if p != winner {
                prop_assert!(c.get(winner) > c.get(p));
            }
        }
    }
    Ok(())
}

pub fn permutation_equivariant(c: &ParadigmCounts, perm: &[Paradigm]) -> Outcome {
    let config = ProjectLabelingConfig::default();
    let moved = |p: Paradigm| perm[Paradigm::ALL.iter().position(|q| *q == p).unwrap()];
    let mut tallies = [0u64; 4];
    for p in Paradigm::ALL {
        tallies[moved(p) as usize] = c.get(p);
    }
    let permuted = ParadigmCounts::new(tallies[0], tallies[1], tallies[2], tallies[3], c.statements);
    let expected = match label_project(c, &config) {
        Label::Mixed => Label::Mixed,
        l => Label::from(moved(Paradigm::ALL.into_iter().find(|p| Label::from(*p) == l).unwrap())),
    };
    prop_assert_eq!(label_project(&permuted, &config), expected);
    Ok(())
}

pub fn layout_insensitive(program: &[Node], layout: &Layout) -> Outcome {
    let plain = parse(&render(program, None));
    let noisy_src = render(program, Some(layout));
    let noisy = parse(&noisy_src);
    prop_assert_eq!(canonical_hash(&plain), canonical_hash(&noisy), "\n{}", noisy_src);
    prop_assert_eq!(count_file(&plain), count_file(&noisy));
    Ok(())
}

pub type DedupInput = (std::collections::BTreeMap<(u8, u8), usize>, Vec<Vec<Node>>, u64);

pub fn dedup_input() -> impl Strategy<Value = DedupInput> {
    (
        prop::collection::btree_map((0u8..3, 0u8..6), 0usize..4, 0..12),
        prop::collection::vec(small_program(), 4),
        any::<u64>(),
    )
}

pub fn dedup_idempotent((files, pool, seed): &DedupInput) -> Outcome {
    let sources: Vec<String> = pool.iter().map(|p| render(p, None)).collect();
    let digests: Vec<_> = sources.iter().map(|s| canonical_hash(&parse(s))).collect();
    let hashed: Vec<HashedFile> = files
        .iter()
        .map(|((project, path), idx)| {
            let file = SourceFile::new(format!("f{path}.py"), sources[*idx].clone());
            HashedFile { project: format!("p{project}"), file, digest: digests[*idx] }
        })
        .collect();
    let (once, report) = dedup_files(hashed.clone());
    let (twice, again) = dedup_files(once.clone());
    prop_assert_eq!(&once, &twice);
    prop_assert_eq!(again.removed, 0);
    prop_assert_eq!(report.retained + report.removed, hashed.len());
    let mut shuffled = hashed;
    let n = shuffled.len();
    if n > 1 {
        for i in 0..n {
            shuffled.swap(i, (*seed as usize).wrapping_add(i * 7) % n);
        }
    }
    let (reordered, r2) = dedup_files(shuffled);
    prop_assert_eq!(once, reordered);
    prop_assert_eq!(report, r2);
    Ok(())
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12 || (a.is_nan() && b.is_nan())
}

pub fn kappa_symmetry(pairs: &[(Label, Label)], perm: &[Label]) -> Outcome {
    let (a, b): (Vec<Label>, Vec<Label>) = pairs.iter().copied().unzip();
    let ab = cohen_kappa(&a, &b).unwrap();
    let ba = cohen_kappa(&b, &a).unwrap();
    prop_assert!(same(ab.value, ba.value));
    let relabel = |v: &[Label]| v.iter().map(|l| perm[l.index()]).collect::<Vec<_>>();
    let moved = cohen_kappa(&relabel(&a), &relabel(&b)).unwrap();
    prop_assert!(same(ab.value, moved.value));
    prop_assert!(ab.value.is_nan() || (-1.0..=1.0).contains(&ab.value));

    let rows: Vec<Vec<Label>> = a.iter().zip(&b).map(|(x, y)| vec![*x, *y, *x]).collect();
    let f1 = fleiss_kappa(&RatingMatrix::from_rows(rows.clone()).unwrap());
    let f2 = fleiss_kappa(&RatingMatrix::from_rows(rows.iter().map(|r| relabel(r)).collect()).unwrap());
    prop_assert!(same(f1.value, f2.value));
    Ok(())
}

pub fn evolution_totals(pairs: &[(Label, Label)]) -> Outcome {
    let records: Vec<EvolutionRecord> = pairs
        .iter()
        .enumerate()
        .map(|(i, (first, last))| EvolutionRecord {
            project: "p".into(),
            path: format!("{i}.py"),
            first: *first,
            last: *last,
            first_commit: String::new(),
            last_commit: String::new(),
        })
        .collect();
    let r = evolution_report(&records);
    prop_assert_eq!(r.first_labels.total(), r.files);
    prop_assert_eq!(r.last_labels.total(), r.files);
    prop_assert_eq!(r.changed, r.transitions.total());
    for l in Label::ALL {
        prop_assert_eq!(r.transitions.get(l, l), 0);
    }
    Ok(())
}

/// A fixed pool of generated repositories, built once per test binary.
struct RepoPool {
    _dir: tempfile::TempDir,
    entries: Vec<ManifestEntry>,
    clones: std::path::PathBuf,
    serial: Mutex<HashMap<(Vec<usize>, u8), String>>,
}

pub const POOL_SIZE: usize = 6;

fn repo_pool() -> &'static RepoPool {
    static POOL: OnceLock<RepoPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let mut runner = TestRunner::deterministic();
        let mut manifest = String::new();
        for i in 0..POOL_SIZE {
            let id = format!("p{i}");
            let mut repo = super::RepoBuilder::init(&dir.path().join(&id), "main", 1_700_000_000 + i as i64);
            for n in 0..3 {
                for path in 0..(i % 3 + 1) {
                    // Projects share some sources so dedup has work to do.
                    let p = small_program().new_tree(&mut runner).unwrap().current();
                    let src = if (i + path) % 4 == 0 {
                        "def shared(v):\n    return sorted(v)\n".to_owned()
                    } else {
                        render(&p, None)
                    };
                    repo.write(&format!("m{path}.py"), src);
                }
                repo.commit(&format!("dev{}", n % 2), "change");
            }
            manifest.push_str(&format!("{id}\t{id}\n"));
        }
        let entries = parse_manifest(&manifest, dir.path()).unwrap();
        let clones = dir.path().join("clones");
        RepoPool { _dir: dir, entries, clones, serial: Mutex::new(HashMap::new()) }
    })
}

pub type PipelineInput = (Vec<usize>, usize, usize, u8);

pub fn pipeline_input() -> impl Strategy<Value = PipelineInput> {
    (Just((0..POOL_SIZE).collect::<Vec<_>>()).prop_shuffle(), 1..=POOL_SIZE, 1usize..9, 0u8..3)
}

/// Reports over any selection and ordering of projects must not depend on
/// the worker count or the manifest order.
pub fn pipeline_deterministic((order, take, jobs, mode): &PipelineInput) -> Outcome {
    let pool = repo_pool();
    let mode = *mode;
    let dedup = [DedupMode::Global, DedupMode::PerProject, DedupMode::Off][mode as usize];
    let chosen = &order[..*take];
    let run = |ids: &[usize], jobs| {
        let entries: Vec<_> = ids.iter().map(|i| pool.entries[*i].clone()).collect();
        let config = CorpusConfig { jobs, dedup, clone_dir: pool.clones.clone(), ..CorpusConfig::default() };
        to_json(&run_corpus(&entries, &config).report())
    };
    let mut key = chosen.to_vec();
    key.sort_unstable();
    let cached = pool.serial.lock().unwrap().get(&(key.clone(), mode)).cloned();
    let serial = match cached {
        Some(s) => s,
        None => {
            let s = run(&key, 1);
            pool.serial.lock().unwrap().insert((key, mode), s.clone());
            s
        }
    };
    prop_assert_eq!(serial, run(chosen, *jobs));
    Ok(())
}

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub type Property = (&'static str, fn() -> Result<(), String>);

/// Every property, each over [`CASES`] generated inputs.
pub const SUITE: &[Property] = &[
    ("clamping", || check(program(), |p| clamping(&p))),
    ("imperative suppression and class enclosure", || check(program(), |p| suppression_and_enclosure(&p))),
    ("combination rule", || check((paradigm_set(), any::<bool>()), |(s, c)| combine_rule(s, c))),
    ("file label scale invariance", || check((counts(), 1u64..10_000), |(c, k)| scale_free(&c, k))),
    ("project label permutation equivariance", || {
        check((counts(), Just(Paradigm::ALL.to_vec()).prop_shuffle()), |(c, p)| permutation_equivariant(&c, &p))
    }),
    ("comment and whitespace insensitivity", || check((program(), layout()), |(p, l)| layout_insensitive(&p, &l))),
    ("dedup idempotence and order independence", || check(dedup_input(), |i| dedup_idempotent(&i))),
    ("kappa symmetry and relabeling", || {
        check(
            (prop::collection::vec((label(), label()), 1..30), Just(Label::ALL.to_vec()).prop_shuffle()),
            |(pairs, perm)| kappa_symmetry(&pairs, &perm),
        )
    }),
    ("evolution totals", || check(prop::collection::vec((label(), label()), 0..40), |p| evolution_totals(&p))),
    ("pipeline determinism across worker counts", || check(pipeline_input(), |i| pipeline_deterministic(&i))),
];

pub type SuiteResult = Vec<(&'static str, Result<(), String>)>;

/// Runs the whole suite, returning per-property outcomes and the total time.
pub fn run_suite() -> (SuiteResult, Duration) {
    let start = Instant::now();
    let results = SUITE.iter().map(|(name, run)| (*name, run())).collect();
    (results, start.elapsed())
}
