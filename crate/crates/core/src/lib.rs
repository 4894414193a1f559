//! Paradigm profiling for Python code.
//!
//! Classifies every statement of a Python file by the programming paradigms
//! its features belong to (functional, object-oriented, procedural,
//! imperative), labels files and projects with a predominant paradigm, and
//! mines git repositories for corpus-level reports.
//!
//! ```
//! use paradigm_profiler::{count_file, label_file, parse_source, Label, SourceFile};
//!
//! let file = SourceFile::new("demo.py", "def f(xs):\n    return sorted(xs)\n");
//! let counts = count_file(&parse_source(&file).unwrap());
//! assert_eq!(counts.procedural, 2);
//! assert_eq!(label_file(&counts), Label::Procedural);
//! ```

pub mod analyzer;
pub mod catalog;
pub mod cli;
pub mod corpus;
pub mod dedup;
pub mod labeling;
pub mod syntax;

pub use analyzer::{
    classify_statement, collect_imports, count_file, detect_feature_uses, FeatureTally, ImportContext, ParadigmCounts,
    StatementVerdict,
};
pub use catalog::{is_functional_builtin, paradigms_of_feature, FeatureKind, Paradigm, ParadigmSet};
pub use dedup::{canonical_hash, dedup_files, AstDigest};
pub use labeling::{aggregate_project, label_file, label_project, percent_profile, Label, ProjectLabelingConfig};
pub use syntax::{parse_source, SourceFile, SyntaxError, SyntaxTree};
