use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use conforma::cderiv::{solve_derivations, DerivationProblem};
use conforma::lca::checks::axiom_sweep;
use conforma::lca::{GcN, HvAb};
use conforma::poly::q;
use conforma::{ConformalAlgebra, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("axiom_sweep");
    g.sample_size(10);
    let hv = HvAb::symbolic();
    let hv_gens = hv.window(-1, 4);
    let gc = GcN::new(2).unwrap();
    let gc_gens = gc.window(0, 2);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("hv_ab_symbolic_w4", name), &exec, |b, &e| {
            b.iter(|| black_box(axiom_sweep(&hv, &hv_gens, e)))
        });
        g.bench_with_input(BenchmarkId::new("gc2_deg2", name), &exec, |b, &e| b.iter(|| black_box(axiom_sweep(&gc, &gc_gens, e))));
    }
    g.finish();
}

fn derivations(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_derivations");
    g.sample_size(10);
    let hv = HvAb::specialized(q(2), q(1));
    let p = DerivationProblem { shift: 1, window: 4, degree: 3 };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("shift1_w4_d3", name), &exec, |b, &e| {
            b.iter(|| black_box(solve_derivations(&hv, &p, e).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps, derivations);
criterion_main!(benches);
