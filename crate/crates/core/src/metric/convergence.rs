use serde::Serialize;

use super::exp::{cardinality_stratum, exp_distance};
use super::{Configuration, Distance, MetricError};
use crate::rational::{self, Rational};

/// Convergence of a presented finite sequence, judged on its second half:
/// indices `k >= len / 2` form the tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub distances: Vec<Distance>,
    pub cardinalities: Vec<usize>,
    #[serde(with = "rational::serde_vec")]
    pub tolerances: Vec<Rational>,
    /// Per tolerance, the first index from which every distance is within it.
    pub settles_at: Vec<Option<usize>>,
    pub tail_start: usize,
    /// Every tolerance is met throughout the tail.
    pub converges: bool,
    /// The tail never exceeds the largest cardinality seen before it.
    pub bounded: bool,
    /// Metrically convergent but with cardinality still growing.
    pub flagged: bool,
}

pub fn colimit_convergence_check(
    sequence: &[Configuration<'_>],
    candidate: &Configuration<'_>,
    tolerances: &[Rational],
) -> Result<ConvergenceReport, MetricError> {
    let distances = sequence.iter().map(|s| exp_distance(s, candidate)).collect::<Result<Vec<_>, _>>()?;
    let cardinalities: Vec<usize> = sequence.iter().map(cardinality_stratum).collect();
    let n = sequence.len();
    let tail_start = n / 2;
    let settles_at: Vec<Option<usize>> = tolerances
        .iter()
        .map(|eps| {
            let within = |d: &Distance| d.finite().is_some_and(|r| r <= eps);
            let k = distances.iter().rposition(|d| !within(d)).map_or(0, |i| i + 1);
            (k < n).then_some(k)
        })
        .collect();
    let converges = n > 0 && settles_at.iter().all(|k| k.is_some_and(|k| k <= tail_start));
    let head_max = cardinalities[..tail_start].iter().max();
    let tail_max = cardinalities[tail_start..].iter().max();
    let bounded = match (head_max, tail_max) {
        (Some(h), Some(t)) => t <= h,
        _ => true,
    };
    Ok(ConvergenceReport {
        distances,
        cardinalities,
        tolerances: tolerances.to_vec(),
        settles_at,
        tail_start,
        converges,
        bounded,
        flagged: converges && !bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::rational::{int, ratio};

    /// `0` and `1/j` for `j = 1..=m`.
    fn harmonic(m: i64) -> FiniteMetricSpace {
        let mut xs = vec![int(0)];
        xs.extend((1..=m).map(|j| ratio(1, j)));
        FiniteMetricSpace::on_line(&xs).unwrap()
    }

    fn schedule() -> Vec<Rational> {
        vec![int(1), ratio(1, 2), ratio(1, 4), ratio(1, 8)]
    }

    #[test]
    fn growing_cluster_is_flagged() {
        let sp = harmonic(40);
        // S_k = {0} ∪ {1/j : k <= j < 2k}: k extra points within 1/k of 0
        let seq: Vec<Configuration<'_>> =
            (1..=20).map(|k| Configuration::new(&sp, std::iter::once(0).chain(k..2 * k).collect())).collect();
        let limit = Configuration::new(&sp, vec![0]);
        let r = colimit_convergence_check(&seq, &limit, &schedule()).unwrap();
        for (k, d) in r.distances.iter().enumerate() {
            assert_eq!(d, &Distance::Finite(ratio(1, k as i64 + 1)));
        }
        assert!(r.converges && !r.bounded && r.flagged);
        assert_eq!(r.settles_at, [Some(0), Some(1), Some(3), Some(7)]);
    }

    #[test]
    fn constant_sequence() {
        let sp = harmonic(3);
        let s = Configuration::new(&sp, vec![0, 2]);
        let r = colimit_convergence_check(&vec![s.clone(); 6], &s, &schedule()).unwrap();
        assert!(r.converges && r.bounded && !r.flagged);
    }

    #[test]
    fn alternating_sequence_does_not_converge() {
        let sp = harmonic(3);
        let (a, b) = (Configuration::new(&sp, vec![0]), Configuration::new(&sp, vec![1, 2]));
        let seq: Vec<_> = (0..10).map(|k| if k % 2 == 0 { a.clone() } else { b.clone() }).collect();
        let r = colimit_convergence_check(&seq, &a, &schedule()).unwrap();
        assert!(!r.converges && r.bounded && !r.flagged);
        assert_eq!(r.settles_at, [Some(0), None, None, None]);
    }

    #[test]
    fn empty_configurations_never_settle() {
        let sp = harmonic(2);
        let r = colimit_convergence_check(&[Configuration::empty(&sp)], &Configuration::new(&sp, vec![0]), &[int(1)]).unwrap();
        assert_eq!(r.distances, [Distance::Infinite]);
        assert!(!r.converges);
        let r = colimit_convergence_check(&[], &Configuration::new(&sp, vec![0]), &[int(1)]).unwrap();
        assert!(!r.converges && r.bounded);
    }

    #[test]
    fn mixed_spaces_are_refused() {
        let (a, b) = (harmonic(2), harmonic(3));
        let e = colimit_convergence_check(&[Configuration::new(&a, vec![0])], &Configuration::new(&b, vec![0]), &[]);
        assert_eq!(e, Err(MetricError::SpaceMismatch));
    }
}
