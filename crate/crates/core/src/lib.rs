//! Knot diagrams as Wilson-loop words, normalized to a power of the braiding matrix.
//!
//! Diagrams come in as PD codes or braid words. [`encode`] turns a diagram into a
//! cyclic word of strand segments and [`normalize`] searches for `Tr R^e W(a,a)...`.
//! The Jones polynomial and the KZ monodromy serve as independent cross-checks.

pub mod braid;
pub mod catalog;
pub mod diagram;
pub mod fixtures;
pub mod jones;
pub mod kz;
pub mod laurent;
pub mod moves;
pub mod rewrite;
pub mod wilson;

pub use braid::{braid_closure, parse_braid, BraidWord};
pub use catalog::{
    load_table, lookup_by_m, prime_consistency_check, star, times, CatalogEntry, CatalogError,
    EntryKind, SumExpr, Summary, Table,
};
pub use diagram::{
    parse_pd, parse_pd_with_unknots, Diagram, DiagramError, DiagramJson, Face, PdCrossing, Slot,
};
pub use jones::{
    jones, kauffman_bracket, kauffman_bracket_recursive, skein_triple, verify_skein, JonesError,
    SkeinCheck, SkeinLabeling, SkeinTriple,
};
pub use kz::{
    build_system, central_charge, conformal_weight, cross_ratio, integrate, monodromy, r_matrix,
    skein_coefficients, CouplingMatrix, KzError, KzSystem, MonodromyMatrix, MonodromyResult,
    Singularity,
};
pub use laurent::{LaurentPoly, Variable};
pub use moves::{
    apply_reidemeister, reidemeister_sites, sites_of_kind, KinkTarget, MoveError, ReidemeisterMove,
};
pub use rewrite::{
    apply_rule, canonical_cyclic, normalize, normalize_with_stats, power_index, Direction,
    NormalForm, RewriteError, RewriteRule, SearchConfig, SearchOutcome, TraceLog, TraceStep,
};
pub use wilson::{
    encode, encode_knot, encode_link, parse_word, pattern_for_crossing, CrossingPattern,
    EncodeError, EncodeOptions, Label, PatternKind, Seg, Token, WilsonWord, WordToken,
};
