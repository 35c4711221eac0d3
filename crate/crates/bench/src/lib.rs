//! Seeded inputs shared by the benchmarks.

use exitpath_core::complex::{EdgeEnumeration, SimplicialComplex};
use exitpath_core::metric::FiniteMetricSpace;
use exitpath_core::random;
use exitpath_core::sheaf::{SheafFunctor, ValueKind};
use exitpath_core::Poset;

pub fn poset(n: usize, seed: u64) -> Poset {
    random::random_poset(&mut random::rng(seed), n, 0.4)
}

pub fn set_functor(n: usize, seed: u64) -> SheafFunctor {
    let p = poset(n, seed);
    random::random_functor(&mut random::rng(seed + 1), &p, ValueKind::Set, 3)
}

pub fn complex_with_enumeration(vertices: usize, seed: u64) -> (SimplicialComplex, EdgeEnumeration) {
    let mut rng = random::rng(seed);
    let k = random::random_complex(&mut rng, vertices, vertices, 3);
    let e = random::random_edge_enumeration(&mut rng, &k);
    (k, e)
}

pub fn metric_space(n: usize, seed: u64) -> FiniteMetricSpace {
    random::random_metric_space(&mut random::rng(seed), n)
}
