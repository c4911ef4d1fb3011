mod common;

use std::sync::Arc;

use common::*;
use punctured::benchmarks::Benchmark;
use punctured::functions::{ClosedForm, Term};
use punctured::harmonic::CellOperators;
use punctured::inner_products::{prepare, LocalPoissonFunction, PreparedFunction};
use punctured::interior::{bounding_box_grid, cauchy_eval, write_csv, InteriorQuery, PointStatus};

fn prepare_closed(ops: &Arc<CellOperators<f64>>, f: &ClosedForm<f64>) -> PreparedFunction<f64> {
    prepare(ops, &LocalPoissonFunction::new(f.trace(ops.boundary()), f.laplacian())).unwrap()
}

fn harmonic_on_ghost() -> ClosedForm<f64> {
    ClosedForm::new(vec![
        Term::ExpCos { scale: 1.0 },
        Term::Log {
            center: [0.25, 0.7],
            scale: 1.0,
        },
    ])
}

#[test]
fn quadratic_at_barycenter() {
    let ops = operators(&unit_square(), 32);
    let p = poly(&[(2, 0, 1.0), (0, 2, -1.0)]);
    let v = prepare_poly(&ops, &p);
    for refinement in [0, 3] {
        let mut q = InteriorQuery::new(&v, vec![[0.5, 0.5]]);
        q.refinement = refinement;
        let out = cauchy_eval(&q).unwrap();
        let value = out[0].value.unwrap();
        let g = out[0].gradient.unwrap();
        assert!(value.abs() < 1e-10, "{value}");
        assert!((g[0] - 1.0).abs() < 1e-10 && (g[1] + 1.0).abs() < 1e-10, "{g:?}");
    }
}

#[test]
fn points_are_classified() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 32);
    let v = prepare_poly(&ops, &poly(&[(1, 0, 1.0)]));
    let points = vec![[0.5, 0.5], [0.5, 0.76], [0.2, 0.2], [0.01, 0.5], [1.5, 0.5]];
    let out = cauchy_eval(&InteriorQuery::new(&v, points)).unwrap();
    let status: Vec<PointStatus> = out.iter().map(|o| o.status).collect();
    assert_eq!(
        status,
        [
            PointStatus::OutsideDomain,
            PointStatus::Skipped,
            PointStatus::Evaluated,
            PointStatus::Skipped,
            PointStatus::OutsideDomain
        ]
    );
    assert!((out[2].value.unwrap() - 0.2).abs() < 1e-10);
    assert!(out[1].value.is_none() && out[1].in_domain() && out[1].skipped());
    assert!(!out[0].in_domain());
}

#[test]
fn mean_value_property() {
    let ops = operators(&Benchmark::Ghost.cell(), 64);
    let v = prepare_closed(&ops, &harmonic_on_ghost());
    let (center, radius) = ([0.5, 0.35], 0.1);
    let m = 64;
    let mut points = vec![center];
    points.extend((0..m).map(|k| {
        let t = k as f64 * std::f64::consts::TAU / m as f64;
        [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
    }));
    let out = cauchy_eval(&InteriorQuery::new(&v, points)).unwrap();
    let mean = out[1..].iter().map(|o| o.value.unwrap()).sum::<f64>() / m as f64;
    assert!((out[0].value.unwrap() - mean).abs() < 1e-8);
}

#[test]
fn classification_is_stable_under_refinement() {
    for b in Benchmark::ALL {
        let coarse = operators(&b.cell(), 32);
        let fine = operators(&b.cell(), 64);
        let grid = bounding_box_grid(coarse.boundary().points(), 40).unwrap();
        let vc = prepare_poly(&coarse, &poly(&[(0, 0, 1.0)]));
        let vf = prepare_poly(&fine, &poly(&[(0, 0, 1.0)]));
        let a = cauchy_eval(&InteriorQuery::new(&vc, grid.clone())).unwrap();
        let b_ = cauchy_eval(&InteriorQuery::new(&vf, grid)).unwrap();
        for (x, y) in a.iter().zip(&b_) {
            assert_eq!(x.in_domain(), y.in_domain(), "{b} at {:?}", x.point);
        }
    }
}

#[test]
fn pointwise_error_decays_superlinearly() {
    let f = harmonic_on_ghost();
    let z = [0.5, 0.4];
    let errors: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&n| {
            let ops = operators(&Benchmark::Ghost.cell(), n);
            let v = prepare_closed(&ops, &f);
            let mut q = InteriorQuery::new(&v, vec![z]);
            q.refinement = 0;
            (cauchy_eval(&q).unwrap()[0].value.unwrap() - f.value(z)).abs()
        })
        .collect();
    assert!(errors[3] < 1e-10, "{errors:?}");
    assert!(errors[1] / errors[2] > 16.0 && errors[2] / errors[3] > 16.0, "{errors:?}");
}

#[test]
fn ghost_gradient_matches_closed_form() {
    let ops = operators(&Benchmark::Ghost.cell(), 64);
    let (v, _) = Benchmark::Ghost.functions();
    let pv = prepare_closed(&ops, &v);
    let points = vec![[0.5, 0.3], [0.25, 0.4], [0.8, 1.1], [0.5, 0.7]];
    for o in cauchy_eval(&InteriorQuery::new(&pv, points)).unwrap() {
        let g = o.gradient.unwrap();
        let e = v.gradient(o.point);
        assert!((o.value.unwrap() - v.value(o.point)).abs() < 1e-9);
        assert!((g[0] - e[0]).abs() < 1e-8 && (g[1] - e[1]).abs() < 1e-8, "{g:?} {e:?}");
    }
}

#[test]
fn csv_layout() {
    let ops = operators(&Benchmark::PuncturedSquare.cell(), 16);
    let v = prepare_poly(&ops, &poly(&[(1, 0, 1.0)]));
    let out = cauchy_eval(&InteriorQuery::new(&v, vec![[0.2, 0.2], [0.5, 0.5]])).unwrap();
    let mut buf = Vec::new();
    write_csv(&out, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,v,dv_dx1,dv_dx2,skipped,in_domain");
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "2.000000000000000e-1");
    assert_eq!(&first[5..], ["0", "1"]);
    assert_eq!(lines[2], "5.000000000000000e-1,5.000000000000000e-1,,,,0,0");
}
