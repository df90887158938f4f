//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use common::{enumerated_range, full2, h, r};
use levelset_core::oracle::{
    count_level_words, count_separated, count_words, growth_rate, log_count, LatticeConstraint, LatticeQuery,
    MeasureBall, SeparatedMode,
};
use levelset_core::rational::to_f64;
use levelset_core::spectra::concavity_violation;
use levelset_core::suspension::flow_root;
use levelset_core::{
    average_range, constrained_value, evaluate_pressure, glue_orbit, higher_block_recode, joint_level_value,
    level_set_value, pressure, pressure_of_set_estimate, reg_irreg_value, spectrum_curve, suspension_level_value,
    verify_oscillation, weakstar_distance, EmpiricalMeasure, GluingSchedule, LevelSetQuery, Observable, Rational,
    RoofFunction, SymbolicSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn closed_form_pressure() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let mut worst = 0f64;
    for k in -10..=10 {
        let q = r(k, 2);
        let p = pressure(&full, &ones.scale(q).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max((p - (1.0 + to_f64(q).exp()).ln()).abs());
    }
    check(worst <= 1e-10, format!("max error {worst:.3e}"))?;
    Ok(format!("max error {worst:.3e} over 21 q"))
}

fn closed_form_spectrum() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let zero = Observable::zero(&full).unwrap();
    let mut worst = 0f64;
    for k in 1..=19 {
        let v = constrained_value(&full, &[(ones.clone(), r(k, 20))], &zero).map_err(|e| e.to_string())?;
        worst = worst.max((v.value - h(k as f64 / 20.0)).abs());
    }
    check(worst <= 1e-8, format!("max error {worst:.3e}"))?;
    Ok(format!("max error {worst:.3e} over 19 alpha"))
}

fn min_formula_with_oracle() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let zero = Observable::zero(&full).unwrap();
    let res =
        level_set_value(&full, &LevelSetQuery::new(ones.clone(), r(1, 4), r(1, 2), zero)).map_err(|e| e.to_string())?;
    let v = res.value.ok_or("unexpectedly empty")?;
    check((v - 0.562335).abs() <= 1e-6, format!("value {v}"))?;
    let (vc, vd) = res.endpoint_values.unwrap();
    let mut gaps = Vec::new();
    for (xi, expect) in [(r(1, 4), vc), (r(1, 2), vd)] {
        let c = count_level_words(&full, &ones, xi - r(1, 50), xi + r(1, 50), 2000).map_err(|e| e.to_string())?;
        let g = growth_rate(&c, 2000);
        check((g - expect).abs() <= 0.02, format!("oracle {g} vs {expect} at {xi}"))?;
        gaps.push((g - expect).abs());
    }
    Ok(format!("value {v:.7}, oracle gaps {:.4} / {:.4}", gaps[0], gaps[1]))
}

fn joint_formula() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let pair = Observable::word_indicator(&full, &[1, 1]).unwrap();
    let zero = Observable::zero(&full).unwrap();
    let q = LevelSetQuery::new(pair.clone(), r(0, 1), r(4, 25), zero).with_pinned(vec![(ones.clone(), r(2, 5))]);
    let res = joint_level_value(&full, &q).map_err(|e| e.to_string())?;
    let v = res.value.ok_or("unexpectedly empty")?;
    check((v - 0.381908).abs() <= 1e-5, format!("value {v}"))?;
    let (vc, vd) = res.endpoint_values.unwrap();
    let half = r(1, 2000);
    let mut gaps = Vec::new();
    for (xi, expect) in [(r(0, 1), vc), (r(4, 25), vd)] {
        let lq = LatticeQuery::new(
            2000,
            vec![
                LatticeConstraint::window(ones.clone(), r(2, 5) - half, r(2, 5) + half),
                LatticeConstraint::window(pair.clone(), xi - half, xi + half),
            ],
        );
        let g = log_count(&full, &lq).map_err(|e| e.to_string())? / 2000.0;
        check((g - expect).abs() <= 0.02, format!("oracle {g} vs {expect} at {xi}"))?;
        gaps.push((g - expect).abs());
    }
    Ok(format!("value {v:.7}, oracle gaps {:.4} / {:.4}", gaps[0], gaps[1]))
}

fn dichotomy() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let pair = Observable::word_indicator(&full, &[1, 1]).unwrap();
    let zero = Observable::zero(&full).unwrap();
    let err = |e: levelset_core::Error| e.to_string();
    check(
        reg_irreg_value(&full, &ones, &ones, &zero, None).map_err(err)?.empty,
        "phi2 = phi1 not empty".into(),
    )?;
    check(
        reg_irreg_value(&full, &ones, &ones, &zero, Some(r(1, 2)))
            .map_err(err)?
            .empty,
        "phi2 = phi1 at a = 1/2 not empty".into(),
    )?;
    let free = reg_irreg_value(&full, &ones, &pair, &zero, None)
        .map_err(err)?
        .value
        .ok_or("empty")?;
    let at = reg_irreg_value(&full, &ones, &pair, &zero, Some(r(1, 2)))
        .map_err(err)?
        .value
        .ok_or("empty")?;
    check((free - 2f64.ln()).abs() <= 1e-9, format!("no-a value {free}"))?;
    check((at - 2f64.ln()).abs() <= 1e-8, format!("a = 1/2 value {at}"))?;
    Ok(format!("empty / {free:.9} / {at:.9}"))
}

fn pressure_forms() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let res = level_set_value(&full, &LevelSetQuery::new(ones.clone(), r(1, 2), r(1, 2), ones.clone()))
        .map_err(|e| e.to_string())?;
    let v = res.value.ok_or("empty")?;
    let expect = 2f64.ln() + 0.5;
    check((v - expect).abs() <= 1e-8, format!("level value {v}"))?;
    let p = pressure_of_set_estimate(&full, &ones, &ones, r(0, 1), r(1, 1), 2000).map_err(|e| e.to_string())?;
    let lp = (1.0 + 1f64.exp()).ln();
    check((p - lp).abs() <= 0.01, format!("weighted count {p}"))?;
    Ok(format!("value {v:.9}, weighted count {p:.6}"))
}

fn suspension() -> Outcome {
    let full = full2();
    let gm = SymbolicSystem::golden_mean();
    let unit = |s: &SymbolicSystem| RoofFunction::new(Observable::constant(s, r(1, 1)).unwrap()).unwrap();
    let battery = [
        (
            full.clone(),
            Observable::symbol_indicator(&full, 1).unwrap(),
            r(1, 4),
            r(1, 2),
        ),
        (
            full.clone(),
            Observable::symbol_indicator(&full, 1).unwrap(),
            r(1, 3),
            r(1, 3),
        ),
        (
            full.clone(),
            Observable::word_indicator(&full, &[1, 1]).unwrap(),
            r(0, 1),
            r(1, 5),
        ),
        (
            gm.clone(),
            Observable::symbol_indicator(&gm, 1).unwrap(),
            r(1, 10),
            r(3, 10),
        ),
        (
            gm.clone(),
            Observable::word_indicator(&gm, &[0, 0]).unwrap(),
            r(1, 2),
            r(1, 2),
        ),
    ];
    let mut worst = 0f64;
    for (sys, f, c, d) in &battery {
        let flow = suspension_level_value(sys, f, &unit(sys), *c, *d).map_err(|e| e.to_string())?;
        let zero = Observable::zero(sys).unwrap();
        let map = level_set_value(sys, &LevelSetQuery::new(f.clone(), *c, *d, zero)).map_err(|e| e.to_string())?;
        worst = worst.max((flow.value.unwrap() - map.value.unwrap()).abs());
    }
    check(worst <= 1e-9, format!("reduction gap {worst:.3e}"))?;
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let roof = RoofFunction::new(Observable::constant(&full, r(1, 1)).unwrap().add(&ones).unwrap()).unwrap();
    let v = suspension_level_value(&full, &ones, &roof, r(1, 3), r(1, 3)).map_err(|e| e.to_string())?;
    let value = v.value.ok_or("empty")?;
    check((value - 0.462098).abs() <= 1e-6, format!("roof value {value}"))?;
    let g = ones.sub(&roof.observable().scale(r(1, 3)).unwrap()).unwrap();
    let root = flow_root(&full, &g, &roof).map_err(|e| e.to_string())?;
    check(root.residual.abs() <= 1e-8, format!("residual {}", root.residual))?;
    Ok(format!(
        "reduction gap {worst:.2e}, value {value:.7}, residual {:.1e}",
        root.residual
    ))
}

fn gluing() -> Outcome {
    let mut notes = Vec::new();
    for (sys, c, d) in [
        (full2(), r(0, 1), r(1, 1)),
        (SymbolicSystem::golden_mean(), r(0, 1), r(1, 2)),
    ] {
        let start = Instant::now();
        let ones = Observable::symbol_indicator(&sys, 1).unwrap();
        let s =
            GluingSchedule::for_level_set(&sys, &ones, c, d, r(4, 1), 1_000_000, 2024).map_err(|e| e.to_string())?;
        let g = glue_orbit(&sys, &s, 1_000_000).map_err(|e| e.to_string())?;
        let rep = verify_oscillation(&g.word.0, &ones, c, d, 0.01, &g.block_ends).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        check(
            rep.pass,
            format!("({c}, {d}): liminf {} limsup {}", rep.liminf, rep.limsup),
        )?;
        check(sys.is_admissible(&g.word.0), "inadmissible glued word".into())?;
        check(t < Duration::from_secs(10), format!("run took {t:?}"))?;
        notes.push(format!(
            "[{:.4}, {:.4}] in {:.2}s",
            rep.liminf,
            rep.limsup,
            t.as_secs_f64()
        ));
    }
    Ok(notes.join(", "))
}

fn karp_vs_enumeration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    for i in 0..100 {
        let (sys, f) = common::random_primitive(&mut rng, 6);
        let range = average_range(&sys, &f).map_err(|e| e.to_string())?;
        let expect = enumerated_range(sys.alphabet_size(), sys.adjacency(), |a, b| {
            f.value(&[a as u16, b as u16]).unwrap()
        });
        check(
            (range.lo, range.hi) == expect,
            format!("graph {i}: {range:?} vs {expect:?}"),
        )?;
    }
    Ok("100 random digraphs exact".into())
}

fn separated_growth() -> Outcome {
    let full = full2();
    let ball = MeasureBall {
        center: EmpiricalMeasure::new(2, 1, vec![0.5, 0.5]).unwrap(),
        radius: 0.1,
    };
    let mut worst = f64::INFINITY;
    for n in 10..=18 {
        let delta = 1.0 / n as f64;
        let c = count_separated(&full, &ball, delta, n, 0.75, SeparatedMode::Exact).map_err(|e| e.to_string())?;
        let rate = (c.count as f64).log2() / n as f64;
        check(rate >= 1.0 - 0.25, format!("n = {n}: rate {rate}"))?;
        worst = worst.min(rate);
    }
    Ok(format!("min rate {worst:.4} bits"))
}

fn cross_model() -> Outcome {
    let beta = SymbolicSystem::beta((0..24).map(|i| ((i + 1) % 2) as u16).collect()).unwrap();
    let gm = SymbolicSystem::golden_mean();
    for n in 1..=20 {
        check(
            count_words(&beta, n).unwrap() == count_words(&gm, n).unwrap(),
            format!("beta count at n = {n}"),
        )?;
    }
    for sys in [full2(), gm] {
        for k in [2, 3] {
            let rec = higher_block_recode(&sys, k).map_err(|e| e.to_string())?;
            for n in k - 1..=18 {
                check(
                    count_words(&rec.system, n + 2 - k).unwrap() == count_words(&sys, n).unwrap(),
                    format!("recoding k = {k}, n = {n}"),
                )?;
            }
        }
    }
    Ok("n <= 20 beta counts, k in {2, 3} recodings".into())
}

fn numerical_hygiene() -> Outcome {
    let full = full2();
    let ones = Observable::symbol_indicator(&full, 1).unwrap();
    let pair = Observable::word_indicator(&full, &[1, 1]).unwrap();
    let zero = Observable::zero(&full).unwrap();
    let cons = [ones.clone(), pair];
    let mut grad_err = 0f64;
    let step = 1e-5;
    for i in -4..=4 {
        for j in -4..=4 {
            let q = [i as f64 * 0.75, j as f64 * 0.75];
            let ev = evaluate_pressure(&full, &zero, &cons, &q).map_err(|e| e.to_string())?;
            for k in 0..2 {
                let (mut up, mut dn) = (q, q);
                up[k] += step;
                dn[k] -= step;
                let pu = evaluate_pressure(&full, &zero, &cons, &up).unwrap().pressure;
                let pd = evaluate_pressure(&full, &zero, &cons, &dn).unwrap().pressure;
                grad_err = grad_err.max(((pu - pd) / (2.0 * step) - ev.gradient[k]).abs());
            }
        }
    }
    check(grad_err <= 1e-6, format!("gradient error {grad_err:.3e}"))?;
    let grid: Vec<Rational> = (1..=39).map(|k| r(k, 40)).collect();
    let pts = spectrum_curve(&full, &ones, &zero, &grid).map_err(|e| e.to_string())?;
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (to_f64(p.alpha), p.value)).collect();
    let viol = concavity_violation(&xy);
    check(viol <= 1e-9, format!("concavity violation {viol:.3e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random_measure = || {
        let raw: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        EmpiricalMeasure::new(2, 3, raw.iter().map(|x| x / s).collect()).unwrap()
    };
    let ms: Vec<EmpiricalMeasure> = (0..1000).map(|_| random_measure()).collect();
    for i in 0..ms.len() {
        let (p, q, s) = (&ms[i], &ms[(i + 1) % ms.len()], &ms[(i + 7) % ms.len()]);
        let d = |a: &EmpiricalMeasure, b: &EmpiricalMeasure| weakstar_distance(a, b).unwrap();
        check(d(p, p) == 0.0, "d(p, p) != 0".into())?;
        check(d(p, q) > 0.0 && d(p, q) <= 2.0, format!("d(p, q) = {}", d(p, q)))?;
        check(d(p, q) == d(q, p), "asymmetric".into())?;
        check(d(p, s) <= d(p, q) + d(q, s) + 1e-15, "triangle inequality".into())?;
    }
    Ok(format!(
        "gradient error {grad_err:.2e}, concavity {viol:.1e}, 1000 metric triples"
    ))
}

/// Name, check, and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form pressure", closed_form_pressure, Some(1)),
        ("closed-form spectrum", closed_form_spectrum, Some(5)),
        ("min formula and counting oracle", min_formula_with_oracle, Some(30)),
        ("joint level set and lattice oracle", joint_formula, Some(60)),
        ("regular/irregular dichotomy", dichotomy, None),
        ("pressure forms", pressure_forms, None),
        ("suspension flows", suspension, None),
        ("gluing realization", gluing, None),
        ("mean cycles vs enumeration", karp_vs_enumeration, None),
        ("separated-set growth", separated_growth, Some(60)),
        ("beta and recoding counts", cross_model, None),
        ("numerical hygiene", numerical_hygiene, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if secs >= *l as f64 => Err(format!("took {secs:.2}s, limit {l}s")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
