use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{FiniteMetricSpace, MetricError};
use crate::rational::{self, Rational};

/// A point of the open cone: the apex, or `(λ, x)` with `λ > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConePoint {
    Apex,
    At {
        #[serde(with = "rational::serde_str")]
        radius: Rational,
        point: String,
    },
}

impl ConePoint {
    pub fn at(radius: Rational, point: &str) -> Self {
        ConePoint::At { radius, point: point.to_string() }
    }
}

/// `d((λ, x), (μ, y)) = max(|λ - μ|, d(x, y))`, `d(apex, (λ, x)) = λ`.
pub fn cone_distance(space: &FiniteMetricSpace, p: &ConePoint, q: &ConePoint) -> Result<Rational, MetricError> {
    let resolve = |c: &ConePoint| -> Result<Option<(Rational, usize)>, MetricError> {
        match c {
            ConePoint::Apex => Ok(None),
            ConePoint::At { radius, point } => {
                if *radius <= rational::zero() {
                    return Err(MetricError::NonPositiveRadius(rational::format(radius)));
                }
                Ok(Some((radius.clone(), space.index_of(point)?)))
            }
        }
    };
    Ok(match (resolve(p)?, resolve(q)?) {
        (None, None) => rational::zero(),
        (None, Some((l, _))) | (Some((l, _)), None) => l,
        (Some((l, x)), Some((m, y))) => (&l - &m).abs().max(space.d(x, y).clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeViolation {
    pub x: ConePoint,
    pub y: ConePoint,
    pub z: ConePoint,
    #[serde(with = "rational::serde_str")]
    pub d_xz: Rational,
    #[serde(with = "rational::serde_str")]
    pub d_xy: Rational,
    #[serde(with = "rational::serde_str")]
    pub d_yz: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeScanReport {
    pub cone_points: usize,
    pub triples: usize,
    /// Triples with `d(x, z) > d(x, y) + d(y, z)`, one per unordered `{x, z}`.
    pub violations: Vec<ConeViolation>,
}

impl ConeScanReport {
    pub fn is_metric(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the triangle inequality on every triple of cone points built from
/// the apex and `radius_grid × points`.
pub fn cone_triangle_scan(space: &FiniteMetricSpace, radius_grid: &[Rational]) -> Result<ConeScanReport, MetricError> {
    let mut grid = radius_grid.to_vec();
    grid.sort();
    grid.dedup();
    if let Some(bad) = grid.iter().find(|r| **r <= rational::zero()) {
        return Err(MetricError::NonPositiveRadius(rational::format(bad)));
    }
    let mut pts = vec![ConePoint::Apex];
    for r in &grid {
        for p in space.points() {
            pts.push(ConePoint::at(r.clone(), p));
        }
    }
    let n = pts.len();
    let mut dist = vec![vec![rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = cone_distance(space, &pts[i], &pts[j])?;
        }
    }
    let violations: Vec<ConeViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            let (pts, dist) = (&pts, &dist);
            (x + 1..n).flat_map(move |z| {
                (0..n)
                    .filter(move |&y| y != x && y != z && dist[x][z] > &dist[x][y] + &dist[y][z])
                    .map(move |y| ConeViolation {
                        x: pts[x].clone(),
                        y: pts[y].clone(),
                        z: pts[z].clone(),
                        d_xz: dist[x][z].clone(),
                        d_xy: dist[x][y].clone(),
                        d_yz: dist[y][z].clone(),
                    })
            })
        })
        .collect();
    let triples = n * n.saturating_sub(1) * n.saturating_sub(2) / 2;
    Ok(ConeScanReport { cone_points: n, triples, violations })
}
