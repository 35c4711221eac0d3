use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Configuration, Distance, FiniteMetricSpace, MetricError};
use crate::random;

/// `max_{s ∈ S} min_{t ∈ T} d(s, t)`; `+∞` when `T` is empty and `S` is not.
fn directed(s: &Configuration<'_>, t: &Configuration<'_>) -> Distance {
    let sp = s.space();
    let mut worst = Distance::Finite(crate::rational::zero());
    for &x in s.members() {
        let nearest = t.members().iter().map(|&y| sp.d(x, y)).min();
        let d = nearest.map_or(Distance::Infinite, |r| Distance::Finite(r.clone()));
        worst = worst.max(d);
    }
    worst
}

/// The larger of the two directed max-min distances. `D(∅, ∅) = 0` and
/// `D(∅, S) = +∞` for nonempty `S`.
pub fn exp_distance(s: &Configuration<'_>, t: &Configuration<'_>) -> Result<Distance, MetricError> {
    if !s.same_space(t) {
        return Err(MetricError::SpaceMismatch);
    }
    Ok(directed(s, t).max(directed(t, s)))
}

/// The cardinality of `S`, an element of ω_* = {0} ⊔ {1 < 2 < ...}.
pub fn cardinality_stratum(s: &Configuration<'_>) -> usize {
    s.len()
}

/// Order of ω_*: 0 is isolated, the positive integers form a chain.
pub fn omega_star_leq(a: usize, b: usize) -> bool {
    a == b || (a >= 1 && a <= b)
}

/// The first index at which a discretized path leaves the order of ω_*,
/// i.e. where `stratum(S_k) ≤ stratum(S_{k+1})` fails. `None` when the
/// stratum sequence is monotone.
pub fn exit_discretization_check(path: &[Configuration<'_>]) -> Option<usize> {
    path.windows(2).position(|w| !omega_star_leq(cardinality_stratum(&w[0]), cardinality_stratum(&w[1])))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub trial: usize,
    pub axiom: String,
    pub configurations: Vec<Vec<String>>,
    pub distances: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    pub seed: u64,
    pub violations: Vec<AxiomViolation>,
    pub passed: bool,
}

fn random_nonempty<'a>(rng: &mut impl Rng, space: &'a FiniteMetricSpace) -> Configuration<'a> {
    let n = space.len();
    let k = rng.gen_range(1..=n);
    let members = rand::seq::index::sample(rng, n, k).into_vec();
    Configuration::new(space, members)
}

/// Symmetry, `D(S, T) = 0 ⟺ S = T`, and the triangle inequality on
/// `trials` random triples of nonempty configurations. Trial `i` draws from
/// seed `seed + i`.
pub fn metric_axiom_suite(space: &FiniteMetricSpace, trials: usize, seed: u64) -> AxiomReport {
    if space.is_empty() {
        return AxiomReport { trials: 0, seed, violations: Vec::new(), passed: true };
    }
    let violations: Vec<AxiomViolation> = (0..trials)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = random::rng(seed.wrapping_add(i as u64));
            let s = random_nonempty(&mut rng, space);
            // half the trials reuse S so the identity axiom is hit both ways
            let t = if rng.gen_bool(0.5) { random_nonempty(&mut rng, space) } else { s.clone() };
            let u = random_nonempty(&mut rng, space);
            let d = |a: &Configuration<'_>, b: &Configuration<'_>| exp_distance(a, b).expect("one space");
            let (st, ts, tu, su) = (d(&s, &t), d(&t, &s), d(&t, &u), d(&s, &u));
            let zero = Distance::Finite(crate::rational::zero());
            let confs = |cs: &[&Configuration<'_>]| cs.iter().map(|c| c.names()).collect::<Vec<_>>();
            let mut out = Vec::new();
            if st != ts {
                out.push(AxiomViolation {
                    trial: i,
                    axiom: "symmetry".into(),
                    configurations: confs(&[&s, &t]),
                    distances: vec![st.to_string(), ts.to_string()],
                });
            }
            if (st == zero) != (s == t) {
                out.push(AxiomViolation {
                    trial: i,
                    axiom: "identity".into(),
                    configurations: confs(&[&s, &t]),
                    distances: vec![st.to_string()],
                });
            }
            if su > st.add(&tu) {
                out.push(AxiomViolation {
                    trial: i,
                    axiom: "triangle".into(),
                    configurations: confs(&[&s, &t, &u]),
                    distances: vec![su.to_string(), st.to_string(), tu.to_string()],
                });
            }
            out
        })
        .collect();
    AxiomReport { trials, seed, passed: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::omega_star;
    use crate::rational::{int, ratio};
    use num_traits::Signed;
    use proptest::prelude::*;

    /// Hausdorff distance as `sup_x |d(x, S) - d(x, T)|` over every point of
    /// the space, with `d(x, ∅) = +∞`.
    fn hausdorff_oracle(space: &FiniteMetricSpace, s: &[usize], t: &[usize]) -> Distance {
        match (s.is_empty(), t.is_empty()) {
            (true, true) => return Distance::Finite(int(0)),
            (true, false) | (false, true) => return Distance::Infinite,
            _ => {}
        }
        let to_set = |x: usize, set: &[usize]| set.iter().map(|&y| space.d(x, y).clone()).min().unwrap();
        let best = (0..space.len()).map(|x| (to_set(x, s) - to_set(x, t)).abs()).max().unwrap();
        Distance::Finite(best)
    }

    fn line(xs: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::on_line(&xs.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn empty_configuration_is_infinitely_far() {
        let sp = line(&[0, 1]);
        let empty = Configuration::empty(&sp);
        let s = sp.configuration(&["1"]).unwrap();
        assert_eq!(exp_distance(&empty, &s).unwrap(), Distance::Infinite);
        assert_eq!(exp_distance(&s, &empty).unwrap(), Distance::Infinite);
        assert_eq!(exp_distance(&empty, &empty).unwrap(), Distance::Finite(int(0)));
    }

    #[test]
    fn collinear_example() {
        let sp = line(&[0, 5, 10]);
        let a = sp.configuration(&["0"]).unwrap();
        let b = sp.configuration(&["0", "10"]).unwrap();
        assert_eq!(exp_distance(&a, &b).unwrap(), Distance::Finite(int(10)));
        assert_eq!(hausdorff_oracle(&sp, a.members(), b.members()), Distance::Finite(int(10)));
        assert_eq!(exp_distance(&b, &b).unwrap(), Distance::Finite(int(0)));
    }

    #[test]
    fn singletons_recover_the_metric() {
        let sp = FiniteMetricSpace::on_line(&[int(0), ratio(7, 3), int(4)]).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let d = exp_distance(&Configuration::new(&sp, vec![x]), &Configuration::new(&sp, vec![y])).unwrap();
                assert_eq!(d, Distance::Finite(sp.d(x, y).clone()));
            }
        }
    }

    #[test]
    fn different_spaces_are_refused() {
        let a = line(&[0, 1]);
        let b = line(&[0, 2]);
        let e = exp_distance(&Configuration::new(&a, vec![0]), &Configuration::new(&b, vec![0]));
        assert_eq!(e, Err(MetricError::SpaceMismatch));
    }

    #[test]
    fn strata_in_omega_star() {
        let sp = line(&[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(cardinality_stratum(&Configuration::empty(&sp)), 0);
        assert_eq!(cardinality_stratum(&Configuration::new(&sp, vec![3])), 1);
        assert_eq!(cardinality_stratum(&Configuration::new(&sp, vec![0, 1, 2, 3, 4])), 5);
        let w = omega_star(7);
        for a in 0..=7 {
            for b in 0..=7 {
                let named = w.leq_named(&a.to_string(), &b.to_string()).unwrap();
                assert_eq!(omega_star_leq(a, b), named, "{a} {b}");
            }
        }
        assert!(omega_star_leq(5, 7) && !omega_star_leq(0, 5) && !omega_star_leq(5, 0));
    }

    #[test]
    fn discretized_paths_never_lose_points() {
        let sp = line(&[0, 1, 2, 3]);
        let c = |m: &[usize]| Configuration::new(&sp, m.to_vec());
        assert_eq!(exit_discretization_check(&[c(&[0]), c(&[0, 1]), c(&[0, 1, 3])]), None);
        assert_eq!(exit_discretization_check(&[c(&[0, 1]), c(&[2]), c(&[2, 3])]), Some(0));
        assert_eq!(exit_discretization_check(&[c(&[]), c(&[0])]), Some(0));
        assert_eq!(exit_discretization_check(&[c(&[]), c(&[])]), None);
    }

    #[test]
    fn axioms_hold_on_a_random_space() {
        let sp = random::random_metric_space(&mut random::rng(3), 8);
        let r = metric_axiom_suite(&sp, 300, 9);
        assert!(r.passed, "{:?}", r.violations);
        assert_eq!(r, metric_axiom_suite(&sp, 300, 9));
    }

    fn arb_space() -> impl Strategy<Value = FiniteMetricSpace> {
        (1usize..8, any::<u64>()).prop_map(|(n, seed)| random::random_metric_space(&mut random::rng(seed), n))
    }

    proptest! {
        #[test]
        fn matches_hausdorff_oracle(sp in arb_space(), masks in (any::<u8>(), any::<u8>())) {
            let pick = |mask: u8| (0..sp.len()).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
            let (s, t) = (pick(masks.0), pick(masks.1));
            let d = exp_distance(&Configuration::new(&sp, s.clone()), &Configuration::new(&sp, t.clone())).unwrap();
            prop_assert_eq!(d, hausdorff_oracle(&sp, &s, &t));
        }

        #[test]
        fn triangle_holds_with_infinity(sp in arb_space(), masks in (any::<u8>(), any::<u8>(), any::<u8>())) {
            let pick = |mask: u8| Configuration::new(&sp, (0..sp.len()).filter(|i| mask >> i & 1 == 1).collect());
            let (s, t, u) = (pick(masks.0), pick(masks.1), pick(masks.2));
            let d = |a: &Configuration<'_>, b: &Configuration<'_>| exp_distance(a, b).unwrap();
            prop_assert!(d(&s, &u) <= d(&s, &t).add(&d(&t, &u)));
            prop_assert_eq!(d(&s, &t), d(&t, &s));
        }
    }
}
