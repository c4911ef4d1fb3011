mod common;

use std::sync::Arc;

use common::*;
use punctured::benchmarks::Benchmark;
use punctured::functions::ClosedForm;
use punctured::harmonic::CellOperators;
use punctured::inner_products::{
    h1_semi, h1_semi_with, l2, l2_with, prepare, prepare_with, InnerProductOptions,
    LocalPoissonFunction, PrepareOptions, PreparedFunction,
};

fn prepare_closed(ops: &Arc<CellOperators<f64>>, f: &ClosedForm<f64>) -> PreparedFunction<f64> {
    prepare(ops, &LocalPoissonFunction::new(f.trace(ops.boundary()), f.laplacian())).unwrap()
}

fn benchmark_errors(b: Benchmark, n: usize) -> (f64, f64) {
    let ops = operators(&b.cell(), n);
    let (v, w) = b.functions();
    let (pv, pw) = (prepare_closed(&ops, &v), prepare_closed(&ops, &w));
    let r = b.references();
    (
        (h1_semi(&pv, &pw).unwrap() - r.h1).abs(),
        (l2(&pv, &pw).unwrap() - r.l2).abs(),
    )
}

#[test]
fn punctured_square_references() {
    let (h1, l2) = benchmark_errors(Benchmark::PuncturedSquare, 64);
    assert!(h1 <= 1e-10 && l2 <= 1e-11, "{h1:e} {l2:e}");
}

#[test]
fn pacman_references() {
    let (h1, l2) = benchmark_errors(Benchmark::PacMan, 64);
    assert!(h1 <= 1e-6 && l2 <= 1e-7, "{h1:e} {l2:e}");
}

#[test]
fn ghost_references() {
    let (h1, l2) = benchmark_errors(Benchmark::Ghost, 64);
    assert!(h1 <= 1e-9 && l2 <= 1e-9, "{h1:e} {l2:e}");
}

#[test]
fn ghost_is_underresolved_at_four() {
    let (h1, _) = benchmark_errors(Benchmark::Ghost, 4);
    assert!((0.1..10.0).contains(&h1), "{h1:e}");
}

#[test]
fn constants_give_zero_and_area() {
    let pi = std::f64::consts::PI;
    let areas = [1.0 - pi / 16.0, 5.0 * pi / 6.0 - pi / 16.0, 0.8 + pi / 8.0 - 0.06 * pi];
    for (b, area) in Benchmark::ALL.into_iter().zip(areas) {
        let ops = operators(&b.cell(), 64);
        let one = prepare_poly(&ops, &poly(&[(0, 0, 1.0)]));
        assert!(h1_semi(&one, &one).unwrap().abs() < 1e-12);
        let got = l2(&one, &one).unwrap();
        assert!((got - area).abs() < 1e-9 * area, "{b}: {got} vs {area}");
    }
}

#[test]
fn symmetry_and_bilinearity() {
    let ops = operators(&Benchmark::Ghost.cell(), 64);
    let (v, w) = Benchmark::Ghost.functions();
    let pv = prepare_closed(&ops, &v);
    let pw = prepare_closed(&ops, &w);
    let u = prepare_poly(&ops, &poly(&[(2, 1, 1.0), (0, 1, -0.5), (1, 0, 2.0)]));
    for f in [h1_semi::<f64>, l2::<f64>] {
        let vw = f(&pv, &pw).unwrap();
        let wv = f(&pw, &pv).unwrap();
        assert!((vw - wv).abs() <= 1e-10 * vw.abs(), "{vw} {wv}");
    }
    // (αv + βu, w) = α(v, w) + β(u, w)
    let (alpha, beta) = (0.6, -1.9);
    let mixed_trace: Vec<f64> = pv.trace.iter().zip(&u.trace).map(|(a, b)| alpha * a + beta * b).collect();
    let mixed_lap = v.laplacian().scale(alpha).add(&u.polynomial.laplacian().scale(beta));
    let mixed = prepare(&ops, &LocalPoissonFunction::new(mixed_trace, mixed_lap)).unwrap();
    for f in [h1_semi::<f64>, l2::<f64>] {
        let lhs = f(&mixed, &pw).unwrap();
        let rhs = alpha * f(&pv, &pw).unwrap() + beta * f(&u, &pw).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0), "{lhs} {rhs}");
    }
}

#[test]
fn positivity_on_low_degree_basis() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 32);
    for a1 in 0..=3u32 {
        for a2 in 0..=(3 - a1) {
            let p = prepare_poly(&ops, &poly(&[(a1, a2, 1.0)]));
            let h1 = h1_semi(&p, &p).unwrap();
            let l2v = l2(&p, &p).unwrap();
            assert!(l2v > 0.0);
            if a1 + a2 == 0 {
                assert!(h1.abs() < 1e-12);
            } else {
                assert!(h1 > 1e-3, "x1^{a1} x2^{a2}: {h1}");
            }
        }
    }
}

#[test]
fn polynomial_part_choice_does_not_matter() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 64);
    let (v, w) = Benchmark::PuncturedSquare.functions();
    let v_data = LocalPoissonFunction::new(v.trace(ops.boundary()), v.laplacian());
    let generated = prepare(&ops, &v_data).unwrap();
    let options = PrepareOptions {
        polynomial: Some(poly(&[(3, 1, 1.0), (1, 3, 1.0)])),
        ..Default::default()
    };
    let given = prepare_with(&ops, &v_data, &options).unwrap();
    let pw = prepare_closed(&ops, &w);
    for f in [h1_semi::<f64>, l2::<f64>] {
        let a = f(&generated, &pw).unwrap();
        let b = f(&given, &pw).unwrap();
        assert!((a - b).abs() <= 1e-10, "{a} {b}");
    }
    let wrong = PrepareOptions {
        polynomial: Some(poly(&[(2, 0, 1.0)])),
        ..Default::default()
    };
    assert!(prepare_with(&ops, &v_data, &wrong).is_err());
}

#[test]
fn linear_gauge_of_anti_laplacian() {
    let ops = operators(&Benchmark::Ghost.cell(), 64);
    let (v, w) = Benchmark::Ghost.functions();
    let pv = prepare_closed(&ops, &v);
    let pw = prepare_closed(&ops, &w);
    let reference = l2(&pv, &pw).unwrap();
    let (a, b) = (3.0, -1.25);
    let mut shifted = pv.clone();
    let sb = ops.boundary();
    for (i, (p, nu)) in sb.points().iter().zip(sb.weighted_normals()).enumerate() {
        shifted.anti_laplacian.values[i] += a * p[0] + b * p[1];
        shifted.anti_laplacian.weighted_normal_derivative[i] += a * nu[0] + b * nu[1];
    }
    let got = l2(&shifted, &pw).unwrap();
    assert!((got - reference).abs() <= 1e-10 * reference.abs(), "{got} {reference}");
}

#[test]
fn prepared_data_reconstructs_trace() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 32);
    let (v, _) = Benchmark::PuncturedSquare.functions();
    let pv = prepare_closed(&ops, &v);
    let p_trace = pv.polynomial.trace(ops.boundary());
    let rebuilt: Vec<f64> = pv.harmonic_trace().iter().zip(&p_trace).map(|(a, b)| a + b).collect();
    assert!(max_abs_diff(&rebuilt, &pv.trace) < 1e-12);
    // v = x1² has P = |x|²/2 and harmonic part (x1² − x2²)/2.
    let sq = prepare_poly(&ops, &poly(&[(2, 0, 1.0)]));
    assert_eq!(sq.polynomial, poly(&[(2, 0, 0.5), (0, 2, 0.5)]));
    let harmonic = prepare_poly(&ops, &poly(&[(1, 1, 1.0)]));
    assert!(harmonic.polynomial.is_zero());
}

#[test]
fn mismatched_cells_are_rejected() {
    let a = operators(&Benchmark::PuncturedSquare.cell(), 16);
    let b = operators(&Benchmark::PuncturedSquare.cell(), 16);
    let pa = prepare_poly(&a, &poly(&[(1, 0, 1.0)]));
    let pb = prepare_poly(&b, &poly(&[(1, 0, 1.0)]));
    assert!(h1_semi(&pa, &pb).is_err());
    assert!(l2(&pa, &pb).is_err());
}

#[test]
fn refinement_keeps_converged_values() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 32);
    let (v, w) = Benchmark::PuncturedSquare.functions();
    let pv = prepare_closed(&ops, &v);
    let pw = prepare_closed(&ops, &w);
    let opts = InnerProductOptions { refinement: 2 };
    let r = Benchmark::PuncturedSquare.references();
    assert!((h1_semi_with(&pv, &pw, opts).unwrap() - r.h1).abs() < 1e-7);
    assert!((l2_with(&pv, &pw, opts).unwrap() - r.l2).abs() < 1e-7);
}

#[test]
fn example_one_converges_superlinearly() {
    let errors: Vec<(f64, f64)> = [4, 8, 16, 32, 64]
        .iter()
        .map(|&n| benchmark_errors(Benchmark::PuncturedSquare, n))
        .collect();
    for select in [|e: &(f64, f64)| e.0, |e: &(f64, f64)| e.1] {
        let e: Vec<f64> = errors.iter().map(select).collect();
        let orders: Vec<f64> = e.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        assert!(orders.iter().all(|&p| p > 5.0), "{orders:?}");
        assert!(orders[3] > 10.0, "{orders:?}");
    }
}
