use criterion::{black_box, criterion_group, criterion_main, Criterion};
use exitpath_bench::{complex_with_enumeration, metric_space, set_functor};
use exitpath_core::complex::{build_exhaustion, nerve_chain_simplex, validate_exit_simplex, StratifiedComplex};
use exitpath_core::devissage::{verify_devissage, DevissageConfig};
use exitpath_core::metric::{cone_triangle_scan, exp_distance, Configuration};
use exitpath_core::quasicat::{inner_horn_check, nerve};
use exitpath_core::rational::int;
use exitpath_core::sheaf::functor_round_trip;
use exitpath_core::{complex::SimplicialComplex, OmegaFiltration, Poset};

fn quasicat(c: &mut Criterion) {
    let p = Poset::chain(6);
    c.bench_function("nerve chain6 dim3", |b| b.iter(|| nerve(black_box(&p), 3).unwrap()));
    let s = nerve(&p, 3).unwrap();
    c.bench_function("inner horns chain6 dim3", |b| b.iter(|| inner_horn_check(black_box(&s), 3).unwrap()));
}

fn sheaves(c: &mut Criterion) {
    let f = set_functor(6, 3);
    c.bench_function("functor round trip |A|=6", |b| b.iter(|| functor_round_trip(black_box(&f)).unwrap()));
    let filtration = OmegaFiltration::omega_truncations(4);
    let config = DevissageConfig { samples: 8, ..Default::default() };
    c.bench_function("devissage 8 samples length 5", |b| b.iter(|| verify_devissage(black_box(&filtration), &config)));
}

fn complexes(c: &mut Criterion) {
    let (k, e) = complex_with_enumeration(12, 5);
    c.bench_function("exhaustion 12 vertices", |b| b.iter(|| build_exhaustion(black_box(&k), &e).unwrap()));
    let s = StratifiedComplex::by_dimension(SimplicialComplex::simplex(&["a", "b", "c", "d"]).unwrap());
    let mut m = nerve_chain_simplex(&s, &["a", "a,b", "a,b,c", "a,b,c,d"]).unwrap();
    for piece in 0..4 {
        m = m.stellar_subdivide(piece);
    }
    c.bench_function("exit validate subdivided 3-simplex", |b| b.iter(|| validate_exit_simplex(black_box(&m))));
}

fn metrics(c: &mut Criterion) {
    let sp = metric_space(8, 2);
    let (s, t) = (Configuration::new(&sp, vec![0, 2, 4, 6]), Configuration::new(&sp, vec![1, 3, 5]));
    c.bench_function("exp distance 8 points", |b| b.iter(|| exp_distance(black_box(&s), black_box(&t)).unwrap()));
    let grid = [int(1), int(2), int(3)];
    c.bench_function("cone scan 8 points 3 radii", |b| b.iter(|| cone_triangle_scan(black_box(&sp), &grid).unwrap()));
}

criterion_group!(benches, quasicat, sheaves, complexes, metrics);
criterion_main!(benches);
