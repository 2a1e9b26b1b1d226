//! Benchmarks comparing the rayon-parallel intersection-matrix fill and
//! batch curve analysis against their sequential baselines. Run with
//! `cargo bench -p singcurve`.

use criterion::{criterion_group, criterion_main, Criterion};
use singcurve::bipoly::BiPoly;
use singcurve::branch::Curve;
use singcurve::contact::{linking_matrix, linking_matrix_sequential, IntersectionValue};
use singcurve::newton::branches_of;
use singcurve::par;
use singcurve::tower::{resolve_splits, run_isolated, Elem, Session, Tower};
use std::hint::black_box;

fn poly(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Elem::from_int(c))))
}

/// A product of six cuspidal factors y^2 - x^(2k+1): six branches of
/// multiplicity 2, fifteen pairwise intersection cells.
fn many_branch_curve() -> BiPoly {
    let mut f = poly(&[(0, 0, 1)]);
    let t = Tower::base();
    for k in 1..=6u32 {
        let factor = poly(&[(0, 2, 1), (2 * k + 1, 0, -1)]);
        f = f.mul(&t, &factor);
    }
    f
}

fn decompose(f: &BiPoly) -> (Session, Curve) {
    let mut out = None;
    resolve_splits(|s| {
        let curve = branches_of(s, f, 40)?;
        out = Some((Session::with_tower(s.tower.clone()), curve));
        Ok(())
    })
    .expect("decomposition");
    out.expect("curve")
}

fn bench_matrix(c: &mut Criterion) {
    let f = many_branch_curve();
    let (session, curve) = decompose(&f);
    let mut group = c.benchmark_group("intersection_matrix");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let mut s = Session::with_tower(session.tower.clone());
            let m = linking_matrix_sequential(&mut s, black_box(&curve), 40).unwrap();
            assert_eq!(m.len(), curve.branches.len());
            black_box(m)
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let mut s = Session::with_tower(session.tower.clone());
            let m = linking_matrix(&mut s, black_box(&curve), 40).unwrap();
            assert_eq!(m.len(), curve.branches.len());
            black_box(m)
        })
    });
    group.finish();
}

/// Full per-input analysis used by the batch benchmark.
fn analyze(f: &BiPoly) -> usize {
    let mut count = 0;
    resolve_splits(|s| {
        let curve = branches_of(s, f, 32)?;
        let shared = s.tower.clone();
        let mut total = 0u64;
        for i in 0..curve.branches.len() {
            for j in i + 1..curve.branches.len() {
                let v = run_isolated(&shared, |cell| {
                    singcurve::contact::intersection(
                        cell,
                        &curve.branches[i],
                        &curve.branches[j],
                        32,
                    )
                })?;
                if let IntersectionValue::Finite(k) = v {
                    total += k;
                }
            }
        }
        count = curve.branches.len() + total as usize;
        Ok(())
    })
    .expect("analysis");
    count
}

fn bench_batch(c: &mut Criterion) {
    let inputs: Vec<BiPoly> = vec![
        poly(&[(2, 0, 1), (0, 3, -1)]),
        poly(&[(2, 0, 1), (0, 5, -1)]),
        poly(&[(0, 3, 1), (6, 0, 1)]),
        poly(&[(0, 3, 1), (4, 1, 1)]),
        poly(&[(4, 0, -4), (2, 2, -1), (2, 3, 4), (0, 5, 1)]),
        poly(&[(0, 2, 1), (3, 0, -1), (4, 0, -1)]),
        poly(&[(0, 4, 1), (6, 0, 1)]),
        poly(&[(5, 0, 1), (0, 2, -1)]),
    ];
    let mut group = c.benchmark_group("batch_analysis");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let out = par::map_slice_sequential(black_box(&inputs), analyze);
            black_box(out)
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let out = par::map_slice(black_box(&inputs), analyze);
            black_box(out)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_matrix, bench_batch);
criterion_main!(benches);
