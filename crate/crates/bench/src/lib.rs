//! Fixtures shared by the criterion benchmarks under `benches/`.

use gauge_core::harness::{default_corpus, CorpusEntry};
use gauge_core::{LatticeFunction, Rational, Scalar};

/// A built-in corpus member by id.
pub fn corpus_function<S: Scalar>(id: &str) -> LatticeFunction<S> {
    default_corpus::<S>()
        .into_iter()
        .find(|e: &CorpusEntry<S>| e.id == id)
        .unwrap_or_else(|| panic!("no corpus function `{id}`"))
        .function
}

pub fn rational(id: &str) -> LatticeFunction<Rational> {
    corpus_function(id)
}
