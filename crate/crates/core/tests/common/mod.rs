//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use levelset_core::{Observable, Rational, Symbol, SymbolicSystem};
use rand::Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Binary entropy in nats.
pub fn h(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

pub fn full2() -> SymbolicSystem {
    SymbolicSystem::full(2).unwrap()
}

/// Every simple cycle, listed once from its smallest vertex.
pub fn simple_cycles(n: usize, adj: &[bool]) -> Vec<Vec<usize>> {
    fn dfs(
        start: usize,
        v: usize,
        n: usize,
        adj: &[bool],
        path: &mut Vec<usize>,
        seen: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        for w in 0..n {
            if !adj[v * n + w] || w < start {
                continue;
            }
            if w == start {
                out.push(path.clone());
            } else if !seen[w] {
                seen[w] = true;
                path.push(w);
                dfs(start, w, n, adj, path, seen, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        dfs(s, s, n, adj, &mut vec![s], &mut seen, &mut out);
    }
    out
}

/// `[min, max]` cycle mean of a depth-2 edge weight by enumeration.
pub fn enumerated_range(n: usize, adj: &[bool], weight: impl Fn(usize, usize) -> Rational) -> (Rational, Rational) {
    let means: Vec<Rational> = simple_cycles(n, adj)
        .into_iter()
        .map(|c| {
            let total: Rational = (0..c.len()).map(|i| weight(c[i], c[(i + 1) % c.len()])).sum();
            total / Rational::from_integer(c.len() as i64)
        })
        .collect();
    (*means.iter().min().unwrap(), *means.iter().max().unwrap())
}

/// Random primitive SFT on at most `max_n` symbols with a random rational
/// depth-2 observable.
pub fn random_primitive<R: Rng>(rng: &mut R, max_n: usize) -> (SymbolicSystem, Observable) {
    loop {
        let n = rng.random_range(1..=max_n);
        let density = rng.random_range(0.25..0.9);
        let pairs: Vec<(Symbol, Symbol)> = (0..n * n)
            .filter(|_| rng.random_bool(density))
            .map(|e| ((e / n) as Symbol, (e % n) as Symbol))
            .collect();
        let Ok(sys) = SymbolicSystem::sft(n, &pairs) else {
            continue;
        };
        let entries: Vec<_> = sys
            .admissible_words(2)
            .into_iter()
            .map(|w| (w, Rational::new(rng.random_range(-20..=20), rng.random_range(1..=7))))
            .collect();
        let f = Observable::from_entries(&sys, 2, entries).unwrap();
        return (sys, f);
    }
}
