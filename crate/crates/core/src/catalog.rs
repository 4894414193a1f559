//! The feature catalog: every recognized Python language feature and the
//! paradigms it maps to, plus the name lists used for API-based detection.

use std::fmt;

use serde::Serialize;

use crate::analyzer::ImportContext;

/// One of the four programming paradigms a statement can exhibit.
///
/// The derived ordering (`Functional < ObjectOriented < Procedural <
/// Imperative`) is the tie-reporting order used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Paradigm {
    #[serde(rename = "Functional")]
    Functional,
    #[serde(rename = "OO")]
    ObjectOriented,
    #[serde(rename = "Procedural")]
    Procedural,
    #[serde(rename = "Imperative")]
    Imperative,
}

impl Paradigm {
    pub const ALL: [Paradigm; 4] =
        [Paradigm::Functional, Paradigm::ObjectOriented, Paradigm::Procedural, Paradigm::Imperative];

    pub fn as_str(self) -> &'static str {
        match self {
            Paradigm::Functional => "Functional",
            Paradigm::ObjectOriented => "OO",
            Paradigm::Procedural => "Procedural",
            Paradigm::Imperative => "Imperative",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A subset of the four paradigms. The empty set is valid.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ParadigmSet(u8);

impl ParadigmSet {
    pub const EMPTY: ParadigmSet = ParadigmSet(0);

    pub fn of(paradigms: &[Paradigm]) -> Self {
        paradigms.iter().fold(Self::EMPTY, |set, &p| set.with(p))
    }

    #[must_use]
    pub fn with(self, paradigm: Paradigm) -> Self {
        ParadigmSet(self.0 | paradigm.bit())
    }

    #[must_use]
    pub fn without(self, paradigm: Paradigm) -> Self {
        ParadigmSet(self.0 & !paradigm.bit())
    }

    #[must_use]
    pub fn union(self, other: ParadigmSet) -> Self {
        ParadigmSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: ParadigmSet) -> Self {
        ParadigmSet(self.0 & other.0)
    }

    pub fn contains(self, paradigm: Paradigm) -> bool {
        self.0 & paradigm.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_superset(self, other: ParadigmSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Paradigm> {
        Paradigm::ALL.into_iter().filter(move |p| self.contains(*p))
    }

    /// The three paradigms that suppress an imperative count when a
    /// statement uses them directly.
    pub fn non_imperative() -> Self {
        Self::of(&[Paradigm::Functional, Paradigm::ObjectOriented, Paradigm::Procedural])
    }
}

impl fmt::Debug for ParadigmSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Paradigm names in canonical order, e.g. `{Functional, OO}`.
impl fmt::Display for ParadigmSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(Paradigm::as_str).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl FromIterator<Paradigm> for ParadigmSet {
    fn from_iter<I: IntoIterator<Item = Paradigm>>(iter: I) -> Self {
        iter.into_iter().fold(Self::EMPTY, |set, p| set.with(p))
    }
}

/// How a feature is recognized: from syntax alone, or from a call to a
/// known API name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Detection {
    Syntax,
    Api,
}

/// The module a functional import came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionalModule {
    Itertools,
    Functools,
}

impl FunctionalModule {
    pub fn from_module_name(name: &str) -> Option<Self> {
        match name {
            "itertools" => Some(FunctionalModule::Itertools),
            "functools" => Some(FunctionalModule::Functools),
            _ => None,
        }
    }

    pub fn call_feature(self) -> FeatureKind {
        match self {
            FunctionalModule::Itertools => FeatureKind::ItertoolsCall,
            FunctionalModule::Functools => FeatureKind::FunctoolsCall,
        }
    }
}

/// Bare call names that are functional built-ins.
pub const FUNCTIONAL_BUILTINS: [&str; 9] =
    ["map", "sorted", "filter", "any", "all", "enumerate", "zip", "iter", "send"];

/// Modules whose every function is classified as functional.
pub const FUNCTIONAL_MODULES: [&str; 2] = ["itertools", "functools"];

/// Dunder method names that make a class an iterator.
pub const ITERATOR_DUNDERS: [&str; 2] = ["__iter__", "__next__"];

macro_rules! feature_kinds {
    ($($kind:ident => $row:literal, $detect:ident, [$($p:ident),*];)*) => {
        /// One row of the feature classification table.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum FeatureKind {
            $($kind,)*
        }

        impl FeatureKind {
            /// Every catalog entry, in table order.
            pub const ALL: &'static [FeatureKind] = &[$(FeatureKind::$kind,)*];

            /// Identifier used in machine-readable output.
            pub fn name(self) -> &'static str {
                match self {
                    $(FeatureKind::$kind => stringify!($kind),)*
                }
            }

            /// Human-readable description of the table row.
            pub fn row_label(self) -> &'static str {
                match self {
                    $(FeatureKind::$kind => $row,)*
                }
            }

            pub fn detection(self) -> Detection {
                match self {
                    $(FeatureKind::$kind => Detection::$detect,)*
                }
            }

            /// The classification table row for this feature, unmodified.
            pub fn paradigms(self) -> ParadigmSet {
                match self {
                    $(FeatureKind::$kind => ParadigmSet::of(&[$(Paradigm::$p),*]),)*
                }
            }
        }
    };
}

feature_kinds! {
    IfElse => "if else elif", Syntax, [Imperative];
    WhileLoop => "while loop", Syntax, [Imperative];
    Break => "break", Syntax, [Imperative];
    Continue => "continue", Syntax, [Imperative];
    Assert => "assert", Syntax, [Imperative];
    Del => "del", Syntax, [Imperative];
    ArrayIndexing => "array indexing", Syntax, [Imperative];
    PassInLoop => "pass (inside loop)", Syntax, [Imperative];
    PassInClass => "pass (inside class)", Syntax, [Imperative, ObjectOriented];
    PassInDef => "pass (inside def)", Syntax, [Imperative, Procedural];
    Return => "return", Syntax, [Procedural];
    FunctionDecl => "function (def)", Syntax, [Procedural];
    NestedFunctionDecl => "nested function (def)", Syntax, [Procedural];
    ClassDecl => "class declaration", Syntax, [ObjectOriented];
    Inheritance => "inheritance", Syntax, [ObjectOriented];
    MethodDecl => "method (def)", Syntax, [ObjectOriented];
    With => "with", Syntax, [Imperative, ObjectOriented];
    Try => "try", Syntax, [Imperative, ObjectOriented];
    Except => "except", Syntax, [Imperative, ObjectOriented];
    Finally => "finally", Syntax, [Imperative, ObjectOriented];
    Raise => "raise", Syntax, [Imperative, ObjectOriented];
    ForLoop => "for loop", Syntax, [Imperative, Functional];
    InOperator => "(not) in operator", Syntax, [Imperative, Functional];
    Yield => "yield", Syntax, [Imperative, Functional];
    FunctionAsArg => "function-as-arg", Syntax, [Functional];
    Lambda => "lambda functions", Syntax, [Functional];
    ListComprehension => "list comprehension", Syntax, [Functional];
    Decorator => "decorators", Syntax, [Functional];
    GeneratorExpression => "generator expressions", Syntax, [Functional];
    IteratorDunder => "iterators (__next/iter__())", Syntax, [Imperative, Procedural, ObjectOriented, Functional];
    SendCall => "send() (into generator)", Api, [Procedural, Functional];
    IterCall => "iter()", Api, [Procedural, Functional];
    MapCall => "map()", Api, [Procedural, Functional];
    SortedCall => "sorted()", Api, [Procedural, Functional];
    FilterCall => "filter()", Api, [Procedural, Functional];
    AnyCall => "any()", Api, [Procedural, Functional];
    AllCall => "all()", Api, [Procedural, Functional];
    ItertoolsCall => "itertools.*()", Api, [Procedural, Functional];
    FunctoolsCall => "functools.*()", Api, [Procedural, Functional];
    EnumerateCall => "enumerate()", Api, [Procedural, Functional];
    ZipCall => "zip()", Api, [Procedural, Functional];
}

impl FeatureKind {
    /// Paradigms this feature contributes to a statement's intrinsic set
    /// when counting.
    ///
    /// Differs from [`FeatureKind::paradigms`] in two places: a feature that
    /// also names a non-imperative paradigm contributes only those (the
    /// imperative count is decided per statement), and iterator dunder
    /// declarations contribute `{Functional, OO}`.
    pub fn counted_paradigms(self) -> ParadigmSet {
        if self == FeatureKind::IteratorDunder {
            return ParadigmSet::of(&[Paradigm::Functional, Paradigm::ObjectOriented]);
        }
        let row = self.paradigms();
        let rest = row.intersection(ParadigmSet::non_imperative());
        if rest.is_empty() {
            row
        } else {
            rest
        }
    }

    /// Feature for a bare call to a functional built-in, if `name` is one.
    pub fn for_builtin_call(name: &str) -> Option<FeatureKind> {
        Some(match name {
            "map" => FeatureKind::MapCall,
            "sorted" => FeatureKind::SortedCall,
            "filter" => FeatureKind::FilterCall,
            "any" => FeatureKind::AnyCall,
            "all" => FeatureKind::AllCall,
            "enumerate" => FeatureKind::EnumerateCall,
            "zip" => FeatureKind::ZipCall,
            "iter" => FeatureKind::IterCall,
            "send" => FeatureKind::SendCall,
            _ => return None,
        })
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Returns the classification table row for `kind`.
pub fn paradigms_of_feature(kind: FeatureKind) -> ParadigmSet {
    kind.paradigms()
}

/// True iff a bare call to `call_name` is a functional API call: either a
/// functional built-in, or a name imported from `itertools`/`functools`.
pub fn is_functional_builtin(call_name: &str, imports: &ImportContext) -> bool {
    FUNCTIONAL_BUILTINS.contains(&call_name) || imports.functional_source(call_name).is_some()
}

/// One line of the catalog dump.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub name: &'static str,
    pub imperative: bool,
    pub procedural: bool,
    pub object_oriented: bool,
    pub functional: bool,
}

/// The whole table, one row per feature kind, in table order.
pub fn catalog_rows() -> Vec<CatalogRow> {
    FeatureKind::ALL
        .iter()
        .map(|&kind| {
            let set = kind.paradigms();
            CatalogRow {
                name: kind.name(),
                imperative: set.contains(Paradigm::Imperative),
                procedural: set.contains(Paradigm::Procedural),
                object_oriented: set.contains(Paradigm::ObjectOriented),
                functional: set.contains(Paradigm::Functional),
            }
        })
        .collect()
}
