//! Seeded generators for test instances. The same seed always yields the
//! same instance.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{EdgeEnumeration, SimplicialComplex, StratifiedComplex};
use crate::linalg::Matrix;
use crate::metric::FiniteMetricSpace;
use crate::poset::Poset;
use crate::rational;
use crate::sheaf::{colimit_over, Morphism, SheafFunctor, Value, ValueKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A poset on `n` elements named `e0, e1, ...`: a random acyclic relation
/// along a hidden linear order with edge probability `density`, closed
/// transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut hidden: Vec<usize> = (0..n).collect();
    hidden.shuffle(rng);
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel[hidden[i]][hidden[j]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                for j in 0..n {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
    let pos = |s: &str| s[1..].parse::<usize>().expect("generated name");
    Poset::from_order(names, |a, b| rel[pos(a)][pos(b)]).expect("transitive acyclic relation")
}

/// A random functor with value sizes (or dimensions) in `1..=max_size`,
/// built in topological order: at each element the colimit of what lies
/// strictly below is mapped by a random map into a fresh value, which makes
/// the transitions functorial by construction.
pub fn random_functor(rng: &mut impl Rng, base: &Poset, kind: ValueKind, max_size: usize) -> SheafFunctor {
    let n = base.len();
    let mut values: Vec<Option<Value>> = vec![None; n];
    let mut transitions: BTreeMap<(usize, usize), Morphism> = BTreeMap::new();
    let mut done: Vec<usize> = Vec::new();
    for &b in base.topological_order() {
        let below: Vec<usize> = base.lower_covers(b).to_vec();
        let size = rng.gen_range(1..=max_size.max(1));
        let value = match kind {
            ValueKind::Set => Value::set((0..size).map(|i| format!("x{i}"))),
            ValueKind::Vect => Value::Vect(size),
        };
        if !below.is_empty() {
            // partial functor on the elements already built (a down-set)
            let sub = base.induced(&done);
            let sub_idx = |a: usize| sub.index_of(base.name(a)).expect("processed");
            let sub_values: Vec<Value> =
                (0..sub.len()).map(|i| values[base.index_of(sub.name(i)).unwrap()].clone().unwrap()).collect();
            let sub_trans: BTreeMap<_, _> = sub
                .covers()
                .iter()
                .map(|&(x, y)| {
                    let (bx, by) = (base.index_of(sub.name(x)).unwrap(), base.index_of(sub.name(y)).unwrap());
                    ((x, y), transitions[&(bx, by)].clone())
                })
                .collect();
            let partial = SheafFunctor::with_kind(sub.clone(), kind, sub_values, sub_trans).expect("functorial");
            let strict: Vec<usize> =
                base.down_set(b).into_iter().filter(|&a| a != b).map(sub_idx).collect();
            let colim = colimit_over(&partial, &strict);
            let out = random_morphism(rng, colim.value(), &value);
            for &c in &below {
                let m = out.after(&colim.injection(&partial, sub_idx(c)));
                transitions.insert((c, b), m);
            }
        }
        values[b] = Some(value);
        done.push(b);
    }
    let values = values.into_iter().map(Option::unwrap).collect();
    SheafFunctor::with_kind(base.clone(), kind, values, transitions).expect("functorial by construction")
}

/// A uniformly random function, or a matrix with entries in `-2..=2`.
pub fn random_morphism(rng: &mut impl Rng, src: &Value, dst: &Value) -> Morphism {
    match (src, dst) {
        (Value::Set(s), Value::Set(d)) => Morphism::Function((0..s.len()).map(|_| rng.gen_range(0..d.len())).collect()),
        (Value::Vect(s), Value::Vect(d)) => {
            let mut m = Matrix::zeros(*d, *s);
            for r in 0..*d {
                for c in 0..*s {
                    m[(r, c)] = rational::int(rng.gen_range(-2..=2));
                }
            }
            Morphism::Linear(m)
        }
        _ => panic!("kind mismatch"),
    }
}

/// The down-closure of a random subset; every element is seeded with
/// probability `p`.
pub fn random_down_set(rng: &mut impl Rng, base: &Poset, p: f64) -> Vec<usize> {
    let seed: Vec<usize> = (0..base.len()).filter(|_| rng.gen_bool(p)).collect();
    base.down_closure_idx(&seed)
}

pub fn random_up_set(rng: &mut impl Rng, base: &Poset, p: f64) -> Vec<usize> {
    let seed: Vec<usize> = (0..base.len()).filter(|_| rng.gen_bool(p)).collect();
    base.up_closure_idx(&seed)
}

/// A complex on vertices `v0, v1, ...` generated by `faces` random faces of
/// dimension at most `max_dim`.
pub fn random_complex(rng: &mut impl Rng, n_vertices: usize, faces: usize, max_dim: usize) -> SimplicialComplex {
    let names: Vec<String> = (0..n_vertices).map(|i| format!("v{i}")).collect();
    let generators: Vec<Vec<String>> = (0..faces)
        .map(|_| {
            let size = rng.gen_range(1..=(max_dim + 1).min(n_vertices));
            names.choose_multiple(rng, size).cloned().collect()
        })
        .collect();
    SimplicialComplex::new(&names, &generators).expect("random faces over known vertices")
}

/// Each vertex lists its edges in a uniformly random order.
pub fn random_edge_enumeration(rng: &mut impl Rng, k: &SimplicialComplex) -> EdgeEnumeration {
    (0..k.vertices().len())
        .map(|v| {
            let mut edges: Vec<String> = k.edges_at(v).iter().map(|e| k.face_key(e)).collect();
            edges.shuffle(rng);
            (k.vertices()[v].clone(), edges)
        })
        .collect()
}

/// Stratified over the chain `0 < ... < levels - 1`: each vertex gets a
/// random label and a face goes to the largest label among its vertices.
pub fn random_stratification(rng: &mut impl Rng, k: SimplicialComplex, levels: usize) -> StratifiedComplex {
    let labels: Vec<usize> = (0..k.vertices().len()).map(|_| rng.gen_range(0..levels)).collect();
    let assignment: BTreeMap<String, String> = k
        .faces()
        .iter()
        .map(|f| (k.face_key(f), f.iter().map(|&v| labels[v]).max().unwrap().to_string()))
        .collect();
    StratifiedComplex::new(k, Poset::chain(levels), &assignment).expect("max of labels is monotone")
}

/// Shortest-path metric of a complete graph on `n` points `p0, p1, ...`
/// with random edge weights in `{1/2, 1, ..., 5}`.
pub fn random_metric_space(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rational::ratio(rng.gen_range(1..=10), 2);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new((0..n).map(|i| format!("p{i}")).collect(), d).expect("shortest paths form a metric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::check_functoriality;

    #[test]
    fn same_seed_same_instance() {
        let a = random_poset(&mut rng(7), 6, 0.4);
        let b = random_poset(&mut rng(7), 6, 0.4);
        assert_eq!(a, b);
        let fa = random_functor(&mut rng(3), &a, ValueKind::Set, 3);
        let fb = random_functor(&mut rng(3), &a, ValueKind::Set, 3);
        assert_eq!(fa, fb);
    }

    #[test]
    fn generated_functors_are_functorial() {
        for seed in 0..30 {
            let mut r = rng(seed);
            let p = random_poset(&mut r, 6, 0.5);
            for kind in [ValueKind::Set, ValueKind::Vect] {
                let f = random_functor(&mut r, &p, kind, 3);
                let values = f.values().to_vec();
                let report = check_functoriality(&p, &values, f.transitions()).unwrap();
                assert!(matches!(report, crate::sheaf::FunctorialityReport::Ok), "seed {seed}");
            }
        }
    }

    #[test]
    fn down_sets_are_closed() {
        let mut r = rng(11);
        let p = random_poset(&mut r, 8, 0.3);
        for _ in 0..20 {
            assert!(p.is_down_closed(&random_down_set(&mut r, &p, 0.3)));
            assert!(p.is_up_closed(&random_up_set(&mut r, &p, 0.3)));
        }
    }
}
