//! Hot-path benchmarks: closed-form cohomology, the Čech oracle, graded
//! pieces, prime-field elimination, and the full certification pipeline.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use ulrich_core::cohomology::{cech_cohomology, line_bundle_cohomology, LatticeBox};
use ulrich_core::coxring::rank_and_kernel;
use ulrich_core::forge::{build_psi, certify, ConstructionKind};
use ulrich_core::fp::{FieldPrime, FpMatrix};
use ulrich_core::numerics::enumerate_admissible_c1;
use ulrich_core::picard::{Divisor, Polarization, SurfaceParams};

fn bench_closed_form_grid(c: &mut Criterion) {
    c.bench_function("cohomology/closed_form_grid_884", |bench| {
        bench.iter(|| {
            let mut acc = 0u64;
            for ee in 0..4u32 {
                let e = SurfaceParams::new(ee);
                for t in -6..=6 {
                    for s in -8..=8 {
                        acc += line_bundle_cohomology(e, Divisor::new(t, s)).h0;
                    }
                }
            }
            black_box(acc)
        })
    });
}

fn bench_cech_oracle(c: &mut Criterion) {
    let e = SurfaceParams::new(2);
    let d = Divisor::new(-4, 6);
    let bx = LatticeBox::with_margin(e, d);
    c.bench_function("cohomology/cech_oracle_e2", |bench| {
        bench.iter(|| black_box(cech_cohomology(e, d, bx).unwrap()))
    });
}

fn bench_graded_piece(c: &mut Criterion) {
    let e = SurfaceParams::new(1);
    let h = Polarization::new(3, 6);
    let field = FieldPrime::default();
    let psi = build_psi(e, h, 2, Divisor::new(6, 16), field, 7).unwrap();
    c.bench_function("coxring/graded_piece_60x60", |bench| {
        bench.iter(|| {
            let piece = psi.graded_piece(-h.divisor());
            black_box(rank_and_kernel(&piece))
        })
    });
}

fn bench_elimination(c: &mut Criterion) {
    let field = FieldPrime::default();
    let mut group = c.benchmark_group("fp/rank");
    for n in [60usize, 120, 240] {
        let mut rng = ChaCha12Rng::seed_from_u64(n as u64);
        let mut m = FpMatrix::zeros(field, n, n);
        for r in 0..n {
            for cidx in 0..n {
                m.set(r, cidx, rng.gen_range(0..field.p()));
            }
        }
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |bench, m| {
            bench.iter(|| black_box(m.rank()))
        });
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let e = SurfaceParams::new(1);
    let h = Polarization::new(3, 6);
    let field = FieldPrime::default();
    let c1 = Divisor::new(6, 16);
    let mut group = c.benchmark_group("forge/certify");
    group.sample_size(20);
    group.bench_function("kernel_session", |bench| {
        let mut seed = 0u64;
        bench.iter(|| {
            seed += 1;
            black_box(certify(e, h, 2, c1, ConstructionKind::Kernel, field, seed).unwrap())
        })
    });
    group.bench_function("cokernel_session", |bench| {
        let mut seed = 0u64;
        bench.iter(|| {
            seed += 1;
            black_box(certify(e, h, 2, c1, ConstructionKind::Cokernel, field, seed).unwrap())
        })
    });
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function("numerics/enumerate_grid", |bench| {
        bench.iter(|| {
            let mut count = 0usize;
            for ee in 0..4u32 {
                let e = SurfaceParams::new(ee);
                for a in 1..=8i64 {
                    for b in (a * e.e() + 1)..=(a * e.e() + 8) {
                        let h = Polarization::new(a, b);
                        for r in 1..=4 {
                            count += enumerate_admissible_c1(e, h, r).len();
                        }
                    }
                }
            }
            black_box(count)
        })
    });
}

criterion_group!(
    benches,
    bench_closed_form_grid,
    bench_cech_oracle,
    bench_graded_piece,
    bench_elimination,
    bench_certify,
    bench_enumeration
);
criterion_main!(benches);
