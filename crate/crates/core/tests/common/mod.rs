//! Deterministic git fixtures built in memory with libgit2.
#![allow(dead_code)]

pub mod cases;
pub mod props;
pub mod table;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use git2::{Oid, Repository, Signature, Time};
use paradigm_profiler::{Paradigm, ParadigmSet};

pub const MULTI_PARADIGM: &str = include_str!("../fixtures/multi_paradigm.py");
pub const MULTI_PARADIGM_ANNOTATED: &str = include_str!("../fixtures/multi_paradigm_annotated.py");

/// Per-line annotations, in source order, read from the trailing comments.
pub fn multi_paradigm_annotations() -> Vec<(usize, ParadigmSet)> {
    MULTI_PARADIGM_ANNOTATED
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let (_, comment) = line.split_once('#')?;
            let set = comment
                .split_whitespace()
                .map(|tag| match tag {
                    "func" => Paradigm::Functional,
                    "oo" => Paradigm::ObjectOriented,
                    "proc" => Paradigm::Procedural,
                    "imp" => Paradigm::Imperative,
                    other => panic!("unknown tag {other}"),
                })
                .collect();
            Some((i + 1, set))
        })
        .collect()
}

/// Tip and staged files of one branch.
type BranchState = (Option<Oid>, BTreeMap<String, Vec<u8>>);

/// Builds commits directly as tree objects, so several branches can be
/// grown without touching a working directory.
pub struct RepoBuilder {
    pub repo: Repository,
    pub path: PathBuf,
    clock: i64,
    branch: String,
    heads: BTreeMap<String, BranchState>,
}

impl RepoBuilder {
    pub fn init(path: &Path, default_branch: &str, start_time: i64) -> Self {
        let repo = Repository::init(path).expect("init repository");
        repo.set_head(&format!("refs/heads/{default_branch}")).expect("set HEAD");
        let mut heads = BTreeMap::new();
        heads.insert(default_branch.to_owned(), (None, BTreeMap::new()));
        RepoBuilder { repo, path: path.to_path_buf(), clock: start_time, branch: default_branch.to_owned(), heads }
    }

    fn state(&mut self) -> &mut BranchState {
        self.heads.get_mut(&self.branch).expect("current branch exists")
    }

    pub fn write(&mut self, path: &str, content: impl AsRef<[u8]>) -> &mut Self {
        self.state().1.insert(path.to_owned(), content.as_ref().to_vec());
        self
    }

    pub fn delete(&mut self, path: &str) -> &mut Self {
        self.state().1.remove(path);
        self
    }

    /// Commits the staged files on the current branch, one hour after the
    /// previous commit.
    pub fn commit(&mut self, author: &str, message: &str) -> Oid {
        let (parent, files) = self.state().clone();
        let oid = self.store_commit(author, message, &files, &parent.into_iter().collect::<Vec<_>>());
        self.state().0 = Some(oid);
        oid
    }

    fn store_commit(&mut self, author: &str, message: &str, files: &BTreeMap<String, Vec<u8>>, parents: &[Oid]) -> Oid {
        self.clock += 3600;
        let sig = Signature::new(author, &format!("{author}@example.org"), &Time::new(self.clock, 0)).unwrap();
        let tree = self.repo.find_tree(build_tree(&self.repo, files)).unwrap();
        let parents: Vec<git2::Commit<'_>> = parents.iter().map(|p| self.repo.find_commit(*p).unwrap()).collect();
        let parent_refs: Vec<&git2::Commit<'_>> = parents.iter().collect();
        let refname = format!("refs/heads/{}", self.branch);
        self.repo.commit(Some(&refname), &sig, &sig, message, &tree, &parent_refs).unwrap()
    }

    /// Commits `n` edits to a non-Python notes file.
    pub fn pad(&mut self, author: &str, n: usize) {
        for i in 0..n {
            self.write("NOTES.md", format!("note {i}\n"));
            self.commit(author, &format!("notes {i}"));
        }
    }

    /// Starts a branch at the current branch's tip and switches to it.
    pub fn branch(&mut self, name: &str) {
        let state = self.state().clone();
        if let Some(oid) = state.0 {
            let commit = self.repo.find_commit(oid).unwrap();
            self.repo.branch(name, &commit, false).unwrap();
        }
        self.heads.insert(name.to_owned(), state);
        self.branch = name.to_owned();
    }

    pub fn switch(&mut self, name: &str) {
        assert!(self.heads.contains_key(name));
        self.branch = name.to_owned();
    }

    /// Merges `other` into the current branch, taking `other`'s version of
    /// every file it has.
    pub fn merge(&mut self, other: &str, author: &str) -> Oid {
        self.merge_edited(other, author, &[])
    }

    /// A merge whose result also carries `edits` on top of both sides.
    pub fn merge_edited(&mut self, other: &str, author: &str, edits: &[(&str, &str)]) -> Oid {
        let (theirs, their_files) = self.heads[other].clone();
        let state = self.state();
        let ours = state.0;
        state.1.extend(their_files);
        state.1.extend(edits.iter().map(|(p, c)| (p.to_string(), c.as_bytes().to_vec())));
        let files = state.1.clone();
        let parents: Vec<Oid> = [ours, theirs].into_iter().flatten().collect();
        let oid = self.store_commit(author, "merge", &files, &parents);
        self.state().0 = Some(oid);
        oid
    }
}

fn build_tree(repo: &Repository, files: &BTreeMap<String, Vec<u8>>) -> Oid {
    let mut leaves = Vec::new();
    let mut dirs: BTreeMap<&str, BTreeMap<String, Vec<u8>>> = BTreeMap::new();
    for (path, content) in files {
        match path.split_once('/') {
            Some((dir, rest)) => {
                dirs.entry(dir).or_default().insert(rest.to_owned(), content.clone());
            }
            None => leaves.push((path.as_str(), content)),
        }
    }
    let mut builder = repo.treebuilder(None).unwrap();
    for (name, content) in leaves {
        let blob = repo.blob(content).unwrap();
        builder.insert(name, blob, 0o100644).unwrap();
    }
    for (name, sub) in dirs {
        let tree = build_tree(repo, &sub);
        builder.insert(name, tree, 0o040000).unwrap();
    }
    builder.write().unwrap()
}

/// What the fixture corpus was built to contain.
pub struct Planted {
    pub manifest: PathBuf,
    pub project_ids: Vec<&'static str>,
    pub toy: &'static str,
    pub single_file: &'static str,
    pub python_files: usize,
    pub unparseable: usize,
    pub duplicates_removed: usize,
    /// Project labels worked out by hand from the fixture sources.
    pub hand_labels: Vec<(&'static str, &'static str)>,
    /// (project, path, first label, last label)
    pub transitions: Vec<(&'static str, &'static str, &'static str, &'static str)>,
}

const UTILS: &str = r#"def slugify(text):
    return text.lower().replace(" ", "-")

def chunks(items, size):
    return [items[i:i + size] for i in range(0, len(items), size)]
"#;

const UTILS_REFORMATTED: &str = r#"# copied from vendor-a
def slugify( text ):   # lowercase and dash
    return text.lower().replace( ' ', '-' )


def chunks(items,size):
    return [ items[i:i+size] for i in range(0, len(items), size) ]
"#;

const UTILS_COPY: &str = r#"# third-party utilities, do not edit
def slugify(text):
    return text.lower().replace(" ", "-")
def chunks(items, size):
    return [items[i:i + size]   for i in range(0, len(items), size)]
"#;

const HELPERS: &str = "class Timer:\n    def __init__(self):\n        self.ticks = 0\n\n    def tick(self):\n        self.ticks += 1\n        return self.ticks\n";

const HELPERS_COPY: &str = "class Timer:\n\n    def __init__(self):\n        self.ticks = 0\n    def tick(self):\n        self.ticks += 1  # count\n        return self.ticks\n";

const WC_V1: &str = "import sys\n\ndef count_lines(text):\n    return len(text.splitlines())\n";

const WC_V2: &str = "import sys\n\ndef count_lines(text):\n    return len(text.splitlines())\n\ndef count_words(text):\n    return len(text.split())\n";

const WC_V3: &str = r#"import sys

def count_lines(text):
    return len(text.splitlines())

def count_words(text):
    return len(text.split())

def main(argv):
    text = open(argv[1]).read()
    print(count_lines(text), count_words(text))

if __name__ == "__main__":
    main(sys.argv)
"#;

const GEOMETRY_V1: &str = "def area(w, h):\n    return w * h\n\ndef perimeter(w, h):\n    return 2 * (w + h)\n";

const GEOMETRY_V2: &str = r#"class Rect:
    def __init__(self, w, h):
        self.w = w
        self.h = h

def area(r):
    return r.w * r.h
"#;

const GEOMETRY_V3: &str = r#"class Rect:
    def __init__(self, w, h):
        self.w = w
        self.h = h

    def area(self):
        return self.w * self.h

    def perimeter(self):
        return 2 * (self.w + self.h)
"#;

const REPORT_IMPERATIVE: &str =
    "total = 0\ncount = 10\nwhile count > 0:\n    total += count\n    count -= 1\nif total > 50:\n    total = 50\n";

const REPORT_FUNCTIONAL: &str = "values = [c for c in [10, 9, 8]]\nreset = lambda: 0\n";

const RUN_V1: &str = "name = \"world\"\ngreeting = \"hello \" + name\n";

const RUN_V2: &str = "def greet(name):\n    return \"hello \" + name\n";

const TRANSFORMS: &str = r#"numbers = [1, 2, 3, 4, 5, 6, 7, 8]
double = lambda x: x * 2
square = lambda x: x * x
evens = [n for n in numbers if n % 2 == 0]
squares = [x * x for x in evens]
lookup = {x: x * 2 for x in numbers}
lazy = (x + 1 for x in squares)
"#;

const REDUCE_OPS: &str = "from functools import reduce\n\ntotal = reduce(lambda a, b: a + b, [1, 2, 3])\n";

const ENGINE: &str = r#"class Countdown:
    def __init__(self, start):
        self.current = start

    def __iter__(self):
        return self

    def __next__(self):
        if self.current <= 0:
            raise StopIteration
        self.current -= 1
        return self.current
"#;

const REGISTRY: &str = r#"import functools

class Registry:
    handlers = {}

    @classmethod
    def register(cls, name):
        def wrap(fn):
            cls.handlers[name] = fn
            return fn
        return wrap

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def lookup(name):
        return Registry.handlers.get(name)
"#;

/// Builds the twelve-repository corpus under `root` and writes
/// `root/manifest.tsv`.
pub fn build_fixture_corpus(root: &Path) -> Planted {
    let repos = root.join("repos");
    let mut t = 1_600_000_000;
    let mut next = |name: &str, branch: &str| {
        t += 1_000_000;
        RepoBuilder::init(&repos.join(name), branch, t)
    };

    let mut r = next("cli-script", "main");
    r.write("wc.py", WC_V1).commit("ana", "count lines");
    r.write("wc.py", WC_V2).commit("ana", "count words");
    r.write("wc.py", WC_V3).commit("ana", "entry point");
    r.pad("ana", 7);

    let mut r = next("toy", "main");
    r.write(
        "models.py",
        "class User:\n    def __init__(self, name):\n        self.name = name\n\nclass Admin(User):\n    level = 1\n",
    )
    .commit("bo", "models");
    r.write("views.py", "class Page:\n    def render(self, user):\n        return \"<p>\" + user.name + \"</p>\"\n")
        .commit("bo", "views");
    r.pad("bo", 7);

    let mut r = next("shapes", "main");
    r.write(
        "shapes/base.py",
        "class Shape:\n    sides = 0\n\n    def describe(self):\n        return \"%s with %d sides\" % (type(self).__name__, self.sides)\n",
    )
    .commit("cy", "base");
    r.write(
        "shapes/circle.py",
        "from shapes.base import Shape\n\nclass Circle(Shape):\n    def __init__(self, radius):\n        self.radius = radius\n\n    def area(self):\n        return 3.14159 * self.radius ** 2\n",
    )
    .commit("dee", "circle");
    r.pad("cy", 10);

    let mut r = next("pipeline", "main");
    r.write("transforms.py", TRANSFORMS).commit("eli", "transforms");
    r.write("reduce_ops.py", REDUCE_OPS).commit("eli", "reduce");
    r.pad("eli", 8);

    let mut r = next("evolving", "main");
    r.write("geometry.py", GEOMETRY_V1).commit("fay", "functions");
    r.write("cli.py", "import geometry\n\ndef show(w, h):\n    print(geometry.Rect(w, h).area())\n")
        .commit("fay", "cli");
    r.write("geometry.py", GEOMETRY_V2).commit("gus", "introduce Rect");
    r.write("geometry.py", GEOMETRY_V3).commit("gus", "methods");
    r.pad("fay", 6);

    let mut r = next("branches", "main");
    r.write("report.py", REPORT_IMPERATIVE).commit("hal", "report");
    r.write("config.py", "DEBUG = False\nLEVEL = 3\n").commit("hal", "config");
    r.branch("dev");
    r.pad("ivy", 2);
    r.switch("main");
    r.pad("hal", 6);
    r.switch("dev");
    r.write("report.py", REPORT_FUNCTIONAL).commit("ivy", "rewrite report");

    let mut r = next("vendor-a", "main");
    r.write("utils.py", UTILS).commit("jo", "utils");
    r.write("helpers.py", HELPERS).commit("jo", "helpers");
    r.write("app.py", "from utils import slugify\nfrom helpers import Timer\n\nt = Timer()\nprint(slugify(\"Hello World\"), t.tick())\n")
        .commit("jo", "app");
    r.pad("jo", 7);

    let mut r = next("vendor-b", "main");
    r.write("lib/utils.py", UTILS_REFORMATTED).write("lib/helpers.py", HELPERS_COPY).commit("kim", "vendor");
    r.write("main.py", "import lib.utils\n\ntitle = lib.utils.slugify(\"A B\")\n").commit("kim", "main");
    r.pad("kim", 8);

    let mut r = next("broken", "main");
    r.write("ok.py", "def ping():\n    return \"pong\"\n")
        .write("bad.py", "def broken(:\n    pass\n")
        .write("blob.py", b"x = 1\x00\x00\x01".as_slice())
        .write("README.md", "# broken\n")
        .commit("lee", "files");
    r.pad("lee", 9);

    let mut r = next("mixed", "main");
    r.write("store.py", "class Store:\n    def get(self):\n        return 1\n\ndef load():\n    return 2\n")
        .commit("max", "store");
    r.write("extra.py", "def ping():\n    return 0\n\nclass Pong:\n    pass\n\nping()\n").commit("max", "extra");
    r.pad("max", 8);

    let mut r = next("scripts", "main");
    r.write("run.py", RUN_V1).commit("ned", "script");
    r.write("setup_env.py", "PATH = \"/usr/bin\"\nHOME = \"/home\"\n").commit("ned", "env");
    r.write("copy_utils.py", UTILS_COPY).commit("ned", "vendored utils");
    r.write("run.py", RUN_V2).commit("ned", "function");
    r.pad("ned", 6);

    let mut r = next("trunk-layout", "trunk");
    r.write("pkg/core/engine.py", ENGINE).write("docs/index.md", "# docs\n").commit("oz", "engine");
    r.write("pkg/core/registry.py", REGISTRY).commit("pia", "registry");
    r.pad("oz", 8);

    let ids = vec![
        "cli-script",
        "toy",
        "shapes",
        "pipeline",
        "evolving",
        "branches",
        "vendor-a",
        "vendor-b",
        "broken",
        "mixed",
        "scripts",
        "trunk-layout",
    ];
    let manifest = root.join("manifest.tsv");
    let mut text = String::from("# fixture corpus\n");
    for id in &ids {
        text.push_str(&format!("{id}\trepos/{id}\n"));
    }
    std::fs::write(&manifest, text).unwrap();

    Planted {
        manifest,
        project_ids: ids,
        toy: "toy",
        single_file: "cli-script",
        python_files: 27,
        unparseable: 2,
        duplicates_removed: 3,
        hand_labels: vec![
            // 8 of 10 statements procedural, 3 OO (method calls), 1 imperative.
            ("cli-script", "Procedural"),
            // Every statement sits in or declares a class.
            ("toy", "OO"),
            // 7 of 9 functional; the reduce line adds the only procedural.
            ("pipeline", "Functional"),
            // 9 of 11 OO after the conversion to a class.
            ("evolving", "OO"),
            // Only assignments, loops and conditionals at head.
            ("branches", "Imperative"),
            // 5 OO and 5 procedural statements: a tie.
            ("mixed", "Mixed"),
        ],
        transitions: vec![
            ("branches", "report.py", "Imperative", "Functional"),
            ("evolving", "geometry.py", "Procedural", "OO"),
            ("scripts", "run.py", "Imperative", "Procedural"),
        ],
    }
}
