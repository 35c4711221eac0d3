//! Finite metric spaces, their exponential with the max-min distance, the
//! cardinality stratification over ω_*, and the open-cone distance.

mod cone;
mod convergence;
mod exp;

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Rational};

pub use cone::{cone_distance, cone_triangle_scan, ConePoint, ConeScanReport, ConeViolation};
pub use convergence::{colimit_convergence_check, ConvergenceReport};
pub use exp::{
    cardinality_stratum, exit_discretization_check, exp_distance, metric_axiom_suite, omega_star_leq, AxiomReport,
    AxiomViolation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("distance matrix must be {0}x{0}")]
    NotSquare(usize),
    #[error("d({0},{0}) must be 0")]
    NonZeroDiagonal(String),
    #[error("d({0},{1}) differs from d({1},{0})")]
    Asymmetric(String, String),
    #[error("d({0},{1}) must be positive")]
    NonPositive(String, String),
    #[error("d({x},{z}) exceeds d({x},{y}) + d({y},{z})")]
    Triangle { x: String, y: String, z: String },
    #[error("configurations live over different spaces")]
    SpaceMismatch,
    #[error("cone radius must be positive, got {0}")]
    NonPositiveRadius(String),
}

/// A distance in `[0, +∞]`. `Finite` sorts below `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    pub fn add(&self, other: &Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => f.write_str(&rational::format(r)),
            Distance::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricFile {
    pub points: Vec<String>,
    #[serde(with = "rational::serde_rows")]
    pub dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    /// Validates the metric axioms on every pair and triple.
    pub fn new(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(MetricError::DuplicatePoint(p.clone()));
            }
        }
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(MetricError::NotSquare(n));
        }
        for x in 0..n {
            if dist[x][x] != rational::zero() {
                return Err(MetricError::NonZeroDiagonal(points[x].clone()));
            }
            for y in 0..n {
                if dist[x][y] != dist[y][x] {
                    return Err(MetricError::Asymmetric(points[x].clone(), points[y].clone()));
                }
                if x != y && dist[x][y] <= rational::zero() {
                    return Err(MetricError::NonPositive(points[x].clone(), points[y].clone()));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][z] > &dist[x][y] + &dist[y][z] {
                        return Err(MetricError::Triangle {
                            x: points[x].clone(),
                            y: points[y].clone(),
                            z: points[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(Self { points, dist })
    }

    /// Points of the line at the given distinct coordinates, named by
    /// their coordinate.
    pub fn on_line(coords: &[Rational]) -> Result<Self, MetricError> {
        let points = coords.iter().map(ToString::to_string).collect();
        let dist = coords.iter().map(|a| coords.iter().map(|b| (a - b).abs()).collect()).collect();
        Self::new(points, dist)
    }

    pub fn from_file(file: MetricFile) -> Result<Self, MetricError> {
        Self::new(file.points, file.dist)
    }

    pub fn to_file(&self) -> MetricFile {
        MetricFile { points: self.points.clone(), dist: self.dist.clone() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Result<usize, MetricError> {
        self.points.iter().position(|p| p == name).ok_or_else(|| MetricError::UnknownPoint(name.to_string()))
    }

    pub fn d(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x][y]
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().flatten().max().cloned().unwrap_or_else(rational::zero)
    }

    pub fn configuration<S: AsRef<str>>(&self, members: &[S]) -> Result<Configuration<'_>, MetricError> {
        let idx = members.iter().map(|m| self.index_of(m.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(Configuration::new(self, idx))
    }
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Self::from_file(MetricFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A finite subset of a metric space, kept sorted and without repeats.
#[derive(Debug, Clone)]
pub struct Configuration<'a> {
    space: &'a FiniteMetricSpace,
    members: Vec<usize>,
}

impl<'a> Configuration<'a> {
    pub fn new(space: &'a FiniteMetricSpace, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        assert!(members.iter().all(|&m| m < space.len()), "member out of range");
        Self { space, members }
    }

    pub fn empty(space: &'a FiniteMetricSpace) -> Self {
        Self { space, members: Vec::new() }
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.members.iter().map(|&m| self.space.points[m].clone()).collect()
    }

    pub(crate) fn same_space(&self, other: &Configuration<'_>) -> bool {
        std::ptr::eq(self.space, other.space) || self.space == other.space
    }
}

impl PartialEq for Configuration<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.members == other.members
    }
}

impl Eq for Configuration<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn rejects_non_metrics() {
        assert_eq!(FiniteMetricSpace::new(names(2), m(&[&[0, 1]])), Err(MetricError::NotSquare(2)));
        assert!(matches!(FiniteMetricSpace::new(names(2), m(&[&[1, 1], &[1, 0]])), Err(MetricError::NonZeroDiagonal(_))));
        assert!(matches!(FiniteMetricSpace::new(names(2), m(&[&[0, 1], &[2, 0]])), Err(MetricError::Asymmetric(..))));
        assert!(matches!(FiniteMetricSpace::new(names(2), m(&[&[0, 0], &[0, 0]])), Err(MetricError::NonPositive(..))));
        let bad = m(&[&[0, 1, 5], &[1, 0, 1], &[5, 1, 0]]);
        assert!(matches!(FiniteMetricSpace::new(names(3), bad), Err(MetricError::Triangle { .. })));
        let dup = vec!["a".to_string(), "a".to_string()];
        assert_eq!(FiniteMetricSpace::new(dup, m(&[&[0, 1], &[1, 0]])), Err(MetricError::DuplicatePoint("a".into())));
    }

    #[test]
    fn line_and_configurations() {
        let s = FiniteMetricSpace::on_line(&[int(0), ratio(1, 2), int(10)]).unwrap();
        assert_eq!(s.points(), ["0", "1/2", "10"]);
        assert_eq!(s.d(0, 1), &ratio(1, 2));
        assert_eq!(s.diameter(), int(10));
        let c = s.configuration(&["10", "0", "10"]).unwrap();
        assert_eq!(c.members(), [0, 2]);
        assert_eq!(c.names(), ["0", "10"]);
        assert_eq!(s.configuration(&["7"]).unwrap_err(), MetricError::UnknownPoint("7".into()));
    }

    #[test]
    fn infinity_absorbs_and_sorts_last() {
        let one = Distance::Finite(int(1));
        assert_eq!(one.add(&one), Distance::Finite(int(2)));
        assert_eq!(one.add(&Distance::Infinite), Distance::Infinite);
        assert!(one < Distance::Infinite);
        assert_eq!(serde_json::to_string(&Distance::Infinite).unwrap(), "\"+inf\"");
        assert_eq!(serde_json::to_string(&Distance::Finite(ratio(3, 6))).unwrap(), "\"1/2\"");
    }

    #[test]
    fn file_round_trip() {
        let s = FiniteMetricSpace::on_line(&[int(0), int(3)]).unwrap();
        let json = serde_json::to_string(&s.to_file()).unwrap();
        assert_eq!(json, r#"{"points":["0","3"],"dist":[["0/1","3/1"],["3/1","0/1"]]}"#);
        let back: FiniteMetricSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"points":["a","b"],"dist":[["0","1"],["2","0"]]}"#;
        assert!(serde_json::from_str::<FiniteMetricSpace>(bad).unwrap_err().to_string().contains("differs"));
    }
}
