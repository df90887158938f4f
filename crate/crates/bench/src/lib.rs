//! Shared fixtures for the kernel benchmarks.

use levelset_core::{Observable, Rational, SymbolicSystem};

pub struct Fixture {
    pub name: &'static str,
    pub sys: SymbolicSystem,
    pub ones: Observable,
    /// Indicator of the word `00`, admissible on every fixture.
    pub pair: Observable,
    pub zero: Observable,
}

impl Fixture {
    fn new(name: &'static str, sys: SymbolicSystem) -> Self {
        let ones = Observable::symbol_indicator(&sys, 1).expect("symbol 1 exists");
        let pair = Observable::word_indicator(&sys, &[0, 0]).expect("depth-2 indicator");
        let zero = Observable::zero(&sys).expect("zero observable");
        Self {
            name,
            sys,
            ones,
            pair,
            zero,
        }
    }
}

pub fn full2() -> Fixture {
    Fixture::new("full2", SymbolicSystem::full(2).expect("full shift"))
}

pub fn golden() -> Fixture {
    Fixture::new("golden", SymbolicSystem::golden_mean())
}

/// Three-symbol cycle with one self-loop.
pub fn cycle3() -> Fixture {
    let sys = SymbolicSystem::sft(3, &[(0, 1), (1, 2), (2, 0), (0, 0)]).expect("primitive sft");
    Fixture::new("cycle3", sys)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
