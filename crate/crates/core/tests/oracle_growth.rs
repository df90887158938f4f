use levelset_core::oracle::{
    count_level_words, growth_rate, log_count, pressure_of_set_estimate, LatticeConstraint, LatticeQuery,
};
use levelset_core::{constrained_value, Observable, Rational, SymbolicSystem};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn h(a: f64) -> f64 {
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

#[test]
fn binomial_window_growth() {
    let full = SymbolicSystem::full(2).unwrap();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let c = count_level_words(&full, &ones, r(38, 100), r(42, 100), 2000).unwrap();
    let g = growth_rate(&c, 2000);
    assert!((g - 0.673012).abs() < 0.02, "{g}");
}

#[test]
fn golden_half_is_flat() {
    let gm = SymbolicSystem::golden_mean();
    let ones = Observable::symbol_indicator(&gm, 1).unwrap();
    let c = count_level_words(&gm, &ones, r(1, 2), r(1, 2), 2000).unwrap();
    assert!(growth_rate(&c, 2000).abs() < 0.02);
    // The window [0.48, 0.52] is dominated by its lower edge, where the
    // entropy is still positive.
    let c = count_level_words(&gm, &ones, r(48, 100), r(52, 100), 2000).unwrap();
    let edge = constrained_value(&gm, &[(ones.clone(), r(48, 100))], &Observable::zero(&gm).unwrap())
        .unwrap()
        .value;
    let g = growth_rate(&c, 2000);
    assert!(edge > 0.1 && (g - edge).abs() < 0.02, "{g} vs {edge}");
}

#[test]
fn weighted_windows() {
    let full = SymbolicSystem::full(2).unwrap();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let p = pressure_of_set_estimate(&full, &ones, &ones, r(0, 1), r(1, 1), 2000).unwrap();
    assert!((p - (1.0 + 1f64.exp()).ln()).abs() < 0.01);
    let p = pressure_of_set_estimate(&full, &ones, &ones, r(48, 100), r(52, 100), 2000).unwrap();
    assert!((p - 1.193147).abs() < 0.02, "{p}");
}

/// Counting growth over `alpha +- 0.02` is sandwiched by the duality value
/// at `alpha` and its maximum over the window.
#[test]
fn growth_sandwich() {
    let full = SymbolicSystem::full(2).unwrap();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let zero = Observable::zero(&full).unwrap();
    for k in 1..=9 {
        let alpha = r(k, 10);
        let v = constrained_value(&full, &[(ones.clone(), alpha)], &zero).unwrap().value;
        let (lo, hi) = (alpha - r(1, 50), alpha + r(1, 50));
        let g = growth_rate(&count_level_words(&full, &ones, lo, hi, 2000).unwrap(), 2000);
        let a = k as f64 / 10.0;
        let top = if (a - 0.5).abs() <= 0.02 {
            h(0.5)
        } else {
            h(a - 0.02).max(h(a + 0.02))
        };
        assert!(g >= v - 0.02 && g <= top + 0.02, "alpha = {a}: {g} vs {v}");
        // At a single lattice point the estimate is within 0.02 outright.
        let exact = growth_rate(&count_level_words(&full, &ones, alpha, alpha, 2000).unwrap(), 2000);
        assert!((exact - v).abs() < 0.02, "alpha = {a}: {exact} vs {v}");
    }
}

#[test]
fn joint_pinned_growth() {
    let full = SymbolicSystem::full(2).unwrap();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let pair = Observable::word_indicator(&full, &[1, 1]).unwrap();
    let half = r(1, 2000);
    for (xi, expect) in [(r(0, 1), 0.381908), (r(4, 25), 0.673012)] {
        let q = LatticeQuery::new(
            2000,
            vec![
                LatticeConstraint::window(ones.clone(), r(2, 5) - half, r(2, 5) + half),
                LatticeConstraint::window(pair.clone(), xi - half, xi + half),
            ],
        );
        let g = log_count(&full, &q).unwrap() / 2000.0;
        assert!((g - expect).abs() < 0.02, "{g} vs {expect}");
    }
}
