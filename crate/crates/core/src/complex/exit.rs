use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::stratified::{StratifiedComplex, StratifiedFile};
use super::ComplexError;
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// Largest source dimension accepted; validation enumerates the `2^(p+1)`
/// faces of every piece.
pub const MAX_EXIT_DIM: usize = 12;

/// A subdivision vertex: barycentric coordinates in `Δ^p` and its image,
/// given by barycentric weights on a face of the target complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlVertex {
    pub coords: Vec<Rational>,
    /// Sorted target vertex indices.
    pub face: Vec<usize>,
    pub weights: Vec<Rational>,
}

impl PlVertex {
    fn top(&self) -> usize {
        self.coords.iter().rposition(|t| !t.is_zero()).expect("coordinates sum to 1")
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.face.iter().zip(&self.weights).filter(|(_, w)| !w.is_zero()).map(|(&v, _)| v)
    }

    fn image(&self) -> BTreeMap<usize, Rational> {
        self.face.iter().copied().zip(self.weights.iter().cloned()).collect()
    }
}

/// Vertex indices of one linear piece, `p + 1` of them.
pub type PlPiece = Vec<usize>;

/// A map `|Δ^p| -> |K|` that is linear on each simplex of a subdivision of
/// `Δ^p`. Construction checks that the pieces triangulate `Δ^p` and that
/// each piece lands in a single face of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlSimplexMap {
    p: usize,
    target: StratifiedComplex,
    vertices: Vec<PlVertex>,
    pieces: Vec<PlPiece>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlVertexFile {
    #[serde(with = "rational::serde_vec")]
    pub coords: Vec<Rational>,
    pub face: Vec<String>,
    #[serde(with = "rational::serde_vec")]
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlSimplexFile {
    pub p: usize,
    pub target: StratifiedFile,
    pub vertices: Vec<PlVertexFile>,
    pub pieces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// The region meets a second stratum.
    Reentry,
    /// Each region has one stratum but the sequence is not increasing.
    NotMonotone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitWitness {
    pub kind: WitnessKind,
    /// Point of `Δ^p`, barycentric.
    #[serde(with = "rational::serde_vec")]
    pub point: Vec<Rational>,
    /// Index `i` of the region `{t_i != 0, t_j = 0 for j > i}` holding the point.
    pub region: usize,
    pub stratum: String,
    /// The stratum the rest of the region (or the previous region) lies in.
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ExitVerdict {
    Accepted { chain: Vec<String> },
    Rejected { witness: ExitWitness },
}

impl ExitVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ExitVerdict::Accepted { .. })
    }

    pub fn chain(&self) -> Option<&[String]> {
        match self {
            ExitVerdict::Accepted { chain } => Some(chain),
            ExitVerdict::Rejected { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&ExitWitness> {
        match self {
            ExitVerdict::Accepted { .. } => None,
            ExitVerdict::Rejected { witness } => Some(witness),
        }
    }
}

fn malformed(msg: impl Into<String>) -> ComplexError {
    ComplexError::MalformedSubdivision(msg.into())
}

fn sums_to_one(xs: &[Rational]) -> bool {
    xs.iter().all(rational::is_nonneg) && xs.iter().sum::<Rational>().is_one()
}

/// Determinant of the rows `w - base` over coordinates `1..=p`.
fn edge_det(base: &[Rational], others: &[&[Rational]]) -> Rational {
    let p = others.len();
    let rows: Vec<Vec<Rational>> = others.iter().map(|w| (1..=p).map(|j| &w[j] - &base[j]).collect()).collect();
    Matrix::from_rows(rows, p).determinant()
}

fn barycenter(points: &[&[Rational]]) -> Vec<Rational> {
    let n = Rational::from_integer(points.len().into());
    (0..points[0].len()).map(|j| points.iter().map(|x| &x[j]).sum::<Rational>() / &n).collect()
}

impl PlSimplexMap {
    pub fn new(
        p: usize,
        target: StratifiedComplex,
        vertices: Vec<PlVertex>,
        pieces: Vec<PlPiece>,
    ) -> Result<Self, ComplexError> {
        if p > MAX_EXIT_DIM {
            return Err(malformed(format!("dimension {p} exceeds {MAX_EXIT_DIM}")));
        }
        let k = target.complex();
        let mut seen = BTreeSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.coords.len() != p + 1 || !sums_to_one(&v.coords) {
                return Err(malformed(format!("vertex {i}: coordinates must be {} nonnegative values summing to 1", p + 1)));
            }
            if !seen.insert(&v.coords) {
                return Err(malformed(format!("vertex {i} repeats a point")));
            }
            if v.face.len() != v.weights.len() || !sums_to_one(&v.weights) {
                return Err(malformed(format!("vertex {i}: weights must match its face and sum to 1")));
            }
            if v.face.windows(2).any(|w| w[0] >= w[1]) || !k.contains_face(&v.face) {
                return Err(malformed(format!("vertex {i}: image face is not a sorted face of the target")));
            }
        }
        if pieces.is_empty() {
            return Err(malformed("no pieces"));
        }
        let mut total = Rational::zero();
        for (n, piece) in pieces.iter().enumerate() {
            let distinct: BTreeSet<&usize> = piece.iter().collect();
            if piece.len() != p + 1 || distinct.len() != p + 1 || piece.iter().any(|&i| i >= vertices.len()) {
                return Err(malformed(format!("piece {n} must list {} distinct vertices", p + 1)));
            }
            let others: Vec<&[Rational]> = piece[1..].iter().map(|&i| vertices[i].coords.as_slice()).collect();
            let det = edge_det(&vertices[piece[0]].coords, &others);
            if det.is_zero() {
                return Err(malformed(format!("piece {n} is degenerate")));
            }
            total += det.abs();
            let mut union: Vec<usize> = piece.iter().flat_map(|&i| vertices[i].face.iter().copied()).collect();
            union.sort_unstable();
            union.dedup();
            if !k.contains_face(&union) {
                return Err(malformed(format!("piece {n} does not map into a single face")));
            }
        }
        // |det| is p! times the volume, and Δ^p has volume 1/p!
        if !total.is_one() {
            return Err(malformed(format!("pieces cover volume {} of 1", rational::format(&total))));
        }
        if p > 0 {
            check_facets(p, &vertices, &pieces)?;
        }
        Ok(Self { p, target, vertices, pieces })
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn target(&self) -> &StratifiedComplex {
        &self.target
    }

    pub fn vertices(&self) -> &[PlVertex] {
        &self.vertices
    }

    pub fn pieces(&self) -> &[PlPiece] {
        &self.pieces
    }

    /// Image of a point of `Δ^p` as target vertex weights; `None` off `Δ^p`.
    pub fn evaluate(&self, point: &[Rational]) -> Option<BTreeMap<usize, Rational>> {
        if point.len() != self.p + 1 || !sums_to_one(point) {
            return None;
        }
        for piece in &self.pieces {
            if let Some(lambda) = self.local_coords(piece, point) {
                let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
                for (&i, l) in piece.iter().zip(&lambda) {
                    for (v, w) in self.vertices[i].image() {
                        *out.entry(v).or_insert_with(Rational::zero) += l * w;
                    }
                }
                out.retain(|_, w| !w.is_zero());
                return Some(out);
            }
        }
        None
    }

    /// Barycentric coordinates of `point` in `piece`, if it lies there.
    fn local_coords(&self, piece: &[usize], point: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.p + 1;
        let cols: Vec<Vec<Rational>> = piece.iter().map(|&i| self.vertices[i].coords.clone()).collect();
        let inv = Matrix::from_columns(&cols, n).inverse()?;
        let x = inv.mul(&Matrix::from_columns(&[point.to_vec()], n)).column(0);
        x.iter().all(rational::is_nonneg).then_some(x)
    }

    /// The restriction to the front face `{t_p = 0}`, a `(p-1)`-simplex.
    pub fn front_face(&self) -> Result<PlSimplexMap, ComplexError> {
        if self.p == 0 {
            return Err(malformed("a point has no front face"));
        }
        let on_face = |i: usize| self.vertices[i].coords[self.p].is_zero();
        let mut keep: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            let facet: Vec<usize> = piece.iter().copied().filter(|&i| on_face(i)).collect();
            if facet.len() == self.p {
                for &i in &facet {
                    let next = keep.len();
                    keep.entry(i).or_insert(next);
                }
                pieces.push(facet.iter().map(|i| keep[i]).collect());
            }
        }
        let mut vertices = vec![None; keep.len()];
        for (&old, &new) in &keep {
            let v = &self.vertices[old];
            vertices[new] = Some(PlVertex { coords: v.coords[..self.p].to_vec(), face: v.face.clone(), weights: v.weights.clone() });
        }
        PlSimplexMap::new(self.p - 1, self.target.clone(), vertices.into_iter().map(Option::unwrap).collect(), pieces)
    }

    /// Adds a vertex at the barycenter of `piece` (mapped linearly) and
    /// splits the piece into `p + 1`. The map itself is unchanged. A point
    /// has nothing to subdivide.
    pub fn stellar_subdivide(&self, piece: usize) -> PlSimplexMap {
        if self.p == 0 {
            return self.clone();
        }
        let old = &self.pieces[piece];
        let coords = barycenter(&old.iter().map(|&i| self.vertices[i].coords.as_slice()).collect::<Vec<_>>());
        let image = self.evaluate(&coords).expect("barycenter lies in Δ^p");
        let new = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.push(PlVertex { coords, face: image.keys().copied().collect(), weights: image.into_values().collect() });
        let mut pieces: Vec<PlPiece> = self.pieces.iter().enumerate().filter(|(n, _)| *n != piece).map(|(_, q)| q.clone()).collect();
        for k in 0..old.len() {
            let mut q = old.clone();
            q[k] = new;
            pieces.push(q);
        }
        PlSimplexMap::new(self.p, self.target.clone(), vertices, pieces).expect("stellar subdivision of a valid map")
    }

    pub fn to_file(&self) -> PlSimplexFile {
        let k = self.target.complex();
        PlSimplexFile {
            p: self.p,
            target: self.target.to_file(),
            vertices: self
                .vertices
                .iter()
                .map(|v| PlVertexFile {
                    coords: v.coords.clone(),
                    face: v.face.iter().map(|&i| k.vertices()[i].clone()).collect(),
                    weights: v.weights.clone(),
                })
                .collect(),
            pieces: self.pieces.clone(),
        }
    }
}

/// Every facet of a piece lies on `∂Δ^p` and bounds one piece, or lies inside
/// and bounds exactly two pieces from opposite sides. With the volume check
/// this rules out overlaps and gaps.
fn check_facets(p: usize, vertices: &[PlVertex], pieces: &[PlPiece]) -> Result<(), ComplexError> {
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for piece in pieces {
        for k in 0..piece.len() {
            let mut f: Vec<usize> = piece.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &i)| i).collect();
            f.sort_unstable();
            facets.entry(f).or_default().push(piece[k]);
        }
    }
    for (f, opposite) in &facets {
        let on_boundary = (0..=p).any(|j| f.iter().all(|&i| vertices[i].coords[j].is_zero()));
        if on_boundary {
            if opposite.len() != 1 {
                return Err(malformed(format!("boundary facet {f:?} bounds {} pieces", opposite.len())));
            }
            continue;
        }
        if opposite.len() != 2 {
            return Err(malformed(format!("interior facet {f:?} bounds {} pieces", opposite.len())));
        }
        let side = |x: usize| {
            let mut others: Vec<&[Rational]> = f[1..].iter().map(|&i| vertices[i].coords.as_slice()).collect();
            others.push(vertices[x].coords.as_slice());
            edge_det(&vertices[f[0]].coords, &others).signum()
        };
        if side(opposite[0]) == side(opposite[1]) {
            return Err(malformed(format!("pieces on facet {f:?} overlap")));
        }
    }
    Ok(())
}

/// One open face of one piece: the region it lies in, its stratum, and a
/// point of it.
struct Cell {
    region: usize,
    size: usize,
    stratum: usize,
    point: Vec<Rational>,
}

/// Every point of `Δ^p` lies in the relative interior of a face `T` of some
/// piece. On that open face the region index is the largest coordinate
/// nonzero at some vertex of `T`, and the image cell is the union of the
/// image supports over `T`, since all weights are nonnegative. So the
/// region/stratum incidences are read off the finitely many `T`.
pub fn validate_exit_simplex(m: &PlSimplexMap) -> ExitVerdict {
    let target = m.target();
    let names = target.target();
    let mut regions: Vec<Vec<Cell>> = (0..=m.p).map(|_| Vec::new()).collect();
    for piece in &m.pieces {
        for mask in 1u32..(1 << piece.len()) {
            let t: Vec<&PlVertex> =
                piece.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &i)| &m.vertices[i]).collect();
            let region = t.iter().map(|v| v.top()).max().unwrap();
            let cell: BTreeSet<usize> = t.iter().flat_map(|v| v.support()).collect();
            let cell: Vec<usize> = cell.into_iter().collect();
            let point = barycenter(&t.iter().map(|v| v.coords.as_slice()).collect::<Vec<_>>());
            regions[region].push(Cell { region, size: t.len(), stratum: target.stratum_of(&cell), point });
        }
    }
    let mut chain = Vec::with_capacity(m.p + 1);
    for cells in &regions {
        let max = cells.iter().map(|c| c.size).max().expect("each region meets a piece");
        let reference = cells.iter().find(|c| c.size == max).unwrap().stratum;
        if let Some(bad) = cells.iter().filter(|c| c.stratum != reference).min_by_key(|c| c.size) {
            return ExitVerdict::Rejected {
                witness: ExitWitness {
                    kind: WitnessKind::Reentry,
                    point: bad.point.clone(),
                    region: bad.region,
                    stratum: names.name(bad.stratum).to_string(),
                    expected: names.name(reference).to_string(),
                },
            };
        }
        chain.push(reference);
    }
    for i in 1..chain.len() {
        if !names.leq(chain[i - 1], chain[i]) {
            let at = regions[i].iter().min_by_key(|c| c.size).unwrap();
            return ExitVerdict::Rejected {
                witness: ExitWitness {
                    kind: WitnessKind::NotMonotone,
                    point: at.point.clone(),
                    region: i,
                    stratum: names.name(chain[i]).to_string(),
                    expected: names.name(chain[i - 1]).to_string(),
                },
            };
        }
    }
    ExitVerdict::Accepted { chain: chain.into_iter().map(|a| names.name(a).to_string()).collect() }
}

fn vertex_e(p: usize, i: usize) -> Vec<Rational> {
    (0..=p).map(|j| if j == i { Rational::one() } else { Rational::zero() }).collect()
}

fn at_barycenter(coords: Vec<Rational>, face: &[usize]) -> PlVertex {
    let w = rational::ratio(1, face.len() as i64);
    PlVertex { coords, face: face.to_vec(), weights: vec![w; face.len()] }
}

fn faces_of(target: &StratifiedComplex, keys: &[&str]) -> Result<Vec<Vec<usize>>, ComplexError> {
    keys.iter().map(|k| target.complex().face_from_key(k)).collect()
}

/// The linear simplex sending `e_i` to the barycenter of the `i`-th face of a
/// weakly increasing chain of faces.
pub fn nerve_chain_simplex(target: &StratifiedComplex, chain: &[&str]) -> Result<PlSimplexMap, ComplexError> {
    if chain.is_empty() {
        return Err(malformed("empty chain"));
    }
    let faces = faces_of(target, chain)?;
    if let Some(w) = faces.windows(2).find(|w| !w[0].iter().all(|v| w[1].contains(v))) {
        return Err(malformed(format!(
            "{} is not contained in {}",
            target.complex().face_key(&w[0]),
            target.complex().face_key(&w[1])
        )));
    }
    let p = faces.len() - 1;
    let vertices = faces.iter().enumerate().map(|(i, f)| at_barycenter(vertex_e(p, i), f)).collect();
    PlSimplexMap::new(p, target.clone(), vertices, vec![(0..=p).collect()])
}

/// A `p`-simplex that climbs from `lower` into `upper` and drops back to
/// `lower` at the last vertex `e_p`, together with the point where it drops
/// back. `lower` must be a proper face of `upper` in a different stratum.
///
/// For `p = 1` the path `[0,1]` is cut in thirds, the middle third staying in
/// the open cell of `upper`. For `p >= 2` a single piece sends `e_0` to
/// `lower`, `e_1..e_{p-1}` to `upper` and `e_p` back to `lower`.
pub fn reentering_path(
    target: &StratifiedComplex,
    lower: &str,
    upper: &str,
    p: usize,
) -> Result<(PlSimplexMap, Vec<Rational>), ComplexError> {
    let faces = faces_of(target, &[lower, upper])?;
    let (lo, up) = (&faces[0], &faces[1]);
    if lo.len() >= up.len() || !lo.iter().all(|v| up.contains(v)) {
        return Err(malformed(format!("{lower} is not a proper face of {upper}")));
    }
    if target.stratum_of(lo) == target.stratum_of(up) {
        return Err(malformed(format!("{lower} and {upper} share a stratum")));
    }
    let witness = vertex_e(p, p);
    let map = match p {
        0 => return Err(malformed("a point cannot leave its stratum")),
        1 => {
            let pt = |a: i64| vec![rational::ratio(3 - a, 3), rational::ratio(a, 3)];
            let vertices = vec![
                at_barycenter(pt(0), lo),
                at_barycenter(pt(1), up),
                at_barycenter(pt(2), up),
                at_barycenter(pt(3), lo),
            ];
            PlSimplexMap::new(1, target.clone(), vertices, vec![vec![0, 1], vec![1, 2], vec![2, 3]])?
        }
        _ => {
            let vertices = (0..=p)
                .map(|i| at_barycenter(vertex_e(p, i), if i == 0 || i == p { lo } else { up }))
                .collect();
            PlSimplexMap::new(p, target.clone(), vertices, vec![(0..=p).collect()])?
        }
    };
    Ok((map, witness))
}

impl TryFrom<PlSimplexFile> for PlSimplexMap {
    type Error = ComplexError;

    fn try_from(f: PlSimplexFile) -> Result<Self, ComplexError> {
        let target = StratifiedComplex::try_from(f.target)?;
        let vertices = f
            .vertices
            .into_iter()
            .map(|v| {
                if v.face.len() != v.weights.len() {
                    return Err(malformed("weights must match the image face"));
                }
                let mut pairs = v
                    .face
                    .iter()
                    .map(|id| target.complex().vertex_index(id).ok_or_else(|| ComplexError::UnknownVertex(id.clone())))
                    .zip(v.weights)
                    .map(|(i, w)| i.map(|i| (i, w)))
                    .collect::<Result<Vec<_>, _>>()?;
                pairs.sort_by_key(|(i, _)| *i);
                let (face, weights) = pairs.into_iter().unzip();
                Ok(PlVertex { coords: v.coords, face, weights })
            })
            .collect::<Result<Vec<_>, _>>()?;
        PlSimplexMap::new(f.p, target, vertices, f.pieces)
    }
}

impl Serialize for PlSimplexMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlSimplexMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PlSimplexMap::try_from(PlSimplexFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::random;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn r(p: i64, q: i64) -> Rational {
        rational::ratio(p, q)
    }

    fn edge_by_dim() -> StratifiedComplex {
        StratifiedComplex::by_dimension(SimplicialComplex::simplex(&["a", "b"]).unwrap())
    }

    fn vertex(coords: Vec<Rational>, face: Vec<usize>, weights: Vec<Rational>) -> PlVertex {
        PlVertex { coords, face, weights }
    }

    #[test]
    fn points_are_exit_simplices() {
        let s = edge_by_dim();
        for (face, w) in [(vec![0], vec![r(1, 1)]), (vec![0, 1], vec![r(1, 3), r(2, 3)])] {
            let m = PlSimplexMap::new(0, s.clone(), vec![vertex(vec![r(1, 1)], face.clone(), w)], vec![vec![0]]).unwrap();
            let want = if face.len() == 1 { "0" } else { "1" };
            assert_eq!(validate_exit_simplex(&m), ExitVerdict::Accepted { chain: vec![want.to_string()] });
        }
    }

    #[test]
    fn leaving_a_vertex_into_the_edge() {
        let s = edge_by_dim();
        let m = PlSimplexMap::new(
            1,
            s,
            vec![vertex(vec![r(1, 1), r(0, 1)], vec![0], vec![r(1, 1)]), vertex(vec![r(0, 1), r(1, 1)], vec![0, 1], vec![r(1, 2), r(1, 2)])],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert_eq!(validate_exit_simplex(&m).chain().unwrap(), ["0", "1"]);
    }

    #[test]
    fn returning_to_the_vertex_is_rejected_at_the_return_point() {
        let (m, expected) = reentering_path(&edge_by_dim(), "a", "a,b", 1).unwrap();
        assert_eq!(m.pieces().len(), 3);
        let w = validate_exit_simplex(&m).witness().cloned().unwrap();
        assert_eq!(w.point, vec![r(0, 1), r(1, 1)]);
        assert_eq!(w.point, expected);
        assert_eq!((w.kind, w.region, w.stratum.as_str(), w.expected.as_str()), (WitnessKind::Reentry, 1, "0", "1"));
    }

    #[test]
    fn reentry_in_higher_dimensions() {
        let s = StratifiedComplex::by_dimension(SimplicialComplex::simplex(&["a", "b", "c"]).unwrap());
        for p in 2..=4 {
            let (m, expected) = reentering_path(&s, "b", "a,b,c", p).unwrap();
            let w = validate_exit_simplex(&m).witness().cloned().unwrap();
            assert_eq!((w.point, w.region, w.stratum.as_str()), (expected, p, "0"));
        }
        assert!(reentering_path(&s, "a,b", "a", 1).is_err());
        assert!(reentering_path(&s, "a", "a,b", 0).is_err());
        let flat = StratifiedComplex::constant(SimplicialComplex::simplex(&["a", "b"]).unwrap(), "x");
        assert!(reentering_path(&flat, "a", "a,b", 1).is_err());
    }

    #[test]
    fn malformed_subdivisions() {
        let s = edge_by_dim();
        let v = |t: Rational| vertex(vec![r(1, 1) - &t, t], vec![0, 1], vec![r(1, 2), r(1, 2)]);
        let ok = |pieces: Vec<Vec<usize>>, ts: Vec<Rational>| PlSimplexMap::new(1, s.clone(), ts.into_iter().map(v).collect(), pieces);
        assert!(ok(vec![vec![0, 1], vec![1, 2]], vec![r(0, 1), r(1, 2), r(1, 1)]).is_ok());
        // gap
        assert!(ok(vec![vec![0, 1]], vec![r(0, 1), r(1, 2)]).is_err());
        // overlap with the right total volume
        assert!(ok(vec![vec![0, 1], vec![0, 2], vec![0, 3]], vec![r(0, 1), r(1, 2), r(1, 4), r(1, 4) + r(1, 1000)]).is_err());
        assert!(ok(vec![vec![0, 2], vec![1, 2]], vec![r(0, 1), r(1, 1), r(1, 2)]).is_ok());
        assert!(ok(vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![r(0, 1), r(1, 2), r(1, 1)]).is_err());
        // degenerate, repeated point, bad coordinates
        assert!(ok(vec![vec![0, 0]], vec![r(0, 1)]).is_err());
        assert!(ok(vec![vec![0, 1]], vec![r(0, 1), r(0, 1)]).is_err());
        assert!(ok(vec![vec![0, 1]], vec![r(-1, 1), r(1, 1)]).is_err());
        // a piece spanning two faces that share no simplex
        let two = StratifiedComplex::constant(SimplicialComplex::new(&["a", "b"], &[]).unwrap(), "x");
        let bad = PlSimplexMap::new(
            1,
            two,
            vec![vertex(vec![r(1, 1), r(0, 1)], vec![0], vec![r(1, 1)]), vertex(vec![r(0, 1), r(1, 1)], vec![1], vec![r(1, 1)])],
            vec![vec![0, 1]],
        );
        assert!(matches!(bad, Err(ComplexError::MalformedSubdivision(_))));
    }

    #[test]
    fn overlap_in_the_plane_is_caught() {
        let s = StratifiedComplex::constant(SimplicialComplex::simplex(&["a"]).unwrap(), "x");
        let pt = |a: i64, b: i64, c: i64, d: i64| vertex(vec![r(a, d), r(b, d), r(c, d)], vec![0], vec![r(1, 1)]);
        // two triangles through the center, each of area one half, folded onto
        // the same side of the shared edge
        let verts = vec![pt(1, 0, 0, 1), pt(0, 1, 0, 1), pt(0, 0, 1, 1), pt(1, 1, 1, 3)];
        let good = PlSimplexMap::new(2, s.clone(), verts.clone(), vec![vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]]);
        assert!(good.is_ok());
        let missing = PlSimplexMap::new(2, s, verts, vec![vec![0, 1, 3], vec![1, 2, 3]]);
        assert!(missing.is_err());
    }

    #[test]
    fn json_round_trip() {
        let (m, _) = reentering_path(&edge_by_dim(), "a", "a,b", 1).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains(r#"{"coords":["2/3","1/3"],"face":["a","b"],"weights":["1/2","1/2"]}"#), "{text}");
        let back: PlSimplexMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let verdict = serde_json::to_value(validate_exit_simplex(&m)).unwrap();
        assert_eq!(verdict["verdict"], "rejected");
        assert_eq!(verdict["witness"]["point"], serde_json::json!(["0/1", "1/1"]));
    }

    fn random_chain(rng: &mut impl Rng, s: &StratifiedComplex, p: usize) -> Vec<String> {
        let k = s.complex();
        let maximal = k.maximal_faces();
        let mut top = maximal.choose(rng).unwrap().clone();
        top.shuffle(rng);
        let mut sizes: Vec<usize> = (0..=p).map(|_| rng.gen_range(1..=top.len())).collect();
        sizes.sort_unstable();
        sizes.iter().map(|&n| k.face_key(&top[..n])).collect()
    }

    fn random_point(rng: &mut impl Rng, p: usize) -> Vec<Rational> {
        let region = rng.gen_range(0..=p);
        let raw: Vec<i64> = (0..=p).map(|j| if j == region { rng.gen_range(1..9) } else if j < region { rng.gen_range(0..9) } else { 0 }).collect();
        let total: i64 = raw.iter().sum();
        raw.iter().map(|&x| r(x, total)).collect()
    }

    fn stratum_at(m: &PlSimplexMap, point: &[Rational]) -> String {
        let img = m.evaluate(point).unwrap();
        let cell: Vec<usize> = img.keys().copied().collect();
        m.target().target().name(m.target().stratum_of(&cell)).to_string()
    }

    fn random_target(rng: &mut impl Rng) -> StratifiedComplex {
        let k = random::random_complex(rng, 6, 4, 3);
        if rng.gen_bool(0.5) {
            StratifiedComplex::face_stratification(k)
        } else {
            random::random_stratification(rng, k, 3)
        }
    }

    proptest! {
        #[test]
        fn nerve_chains_validate_with_their_strata(seed in 0u64..5_000) {
            let mut rng = random::rng(seed);
            let s = random_target(&mut rng);
            let p = rng.gen_range(0..=3);
            let chain = random_chain(&mut rng, &s, p);
            let keys: Vec<&str> = chain.iter().map(String::as_str).collect();
            let mut m = nerve_chain_simplex(&s, &keys).unwrap();
            let want: Vec<String> = keys
                .iter()
                .map(|k| s.target().name(s.stratum_of(&s.complex().face_from_key(k).unwrap())).to_string())
                .collect();
            prop_assert_eq!(validate_exit_simplex(&m).chain().map(<[String]>::to_vec), Some(want.clone()));
            // subdividing does not change the map
            for _ in 0..2 {
                let n = rng.gen_range(0..m.pieces().len());
                m = m.stellar_subdivide(n);
                prop_assert_eq!(validate_exit_simplex(&m).chain().map(<[String]>::to_vec), Some(want.clone()));
            }
            // sampled points land in the stratum of their region
            for _ in 0..8 {
                let x = random_point(&mut rng, p);
                let region = x.iter().rposition(|t| !t.is_zero()).unwrap();
                prop_assert_eq!(&stratum_at(&m, &x), &want[region]);
            }
        }

        #[test]
        fn reentering_paths_reject_at_the_return_point(seed in 0u64..5_000) {
            let mut rng = random::rng(seed);
            let s = StratifiedComplex::face_stratification(random::random_complex(&mut rng, 6, 4, 3));
            let Some(top) = s.complex().maximal_faces().into_iter().find(|f| f.len() > 1) else { return Ok(()) };
            let lower = s.complex().face_key(&top[..1]);
            let upper = s.complex().face_key(&top);
            let p = rng.gen_range(1..=4);
            let (mut m, expected) = reentering_path(&s, &lower, &upper, p).unwrap();
            if rng.gen_bool(0.5) {
                let n = rng.gen_range(0..m.pieces().len());
                m = m.stellar_subdivide(n);
            }
            let w = validate_exit_simplex(&m).witness().cloned().unwrap();
            prop_assert_eq!(w.kind, WitnessKind::Reentry);
            prop_assert_eq!(&w.point, &expected);
            prop_assert_eq!(&stratum_at(&m, &w.point), &w.stratum);
            prop_assert_eq!(w.stratum, lower);
        }

        #[test]
        fn verdict_splits_along_the_front_face(seed in 0u64..5_000) {
            let mut rng = random::rng(seed);
            let s = random_target(&mut rng);
            let p = rng.gen_range(1..=3);
            let chain = random_chain(&mut rng, &s, p);
            let keys: Vec<&str> = chain.iter().map(String::as_str).collect();
            let m = if rng.gen_bool(0.5) {
                nerve_chain_simplex(&s, &keys).unwrap()
            } else {
                match reentering_path(&s, keys[0], keys[p], p) {
                    Ok((m, _)) => m,
                    Err(_) => nerve_chain_simplex(&s, &keys).unwrap(),
                }
            };
            let m = m.stellar_subdivide(0);
            let whole = validate_exit_simplex(&m);
            let front = validate_exit_simplex(&m.front_face().unwrap());
            match (&whole, &front) {
                (ExitVerdict::Accepted { chain: c }, ExitVerdict::Accepted { chain: f }) => {
                    prop_assert_eq!(&c[..p], f.as_slice())
                }
                (ExitVerdict::Accepted { .. }, _) => prop_assert!(false, "front of an exit simplex rejected"),
                (ExitVerdict::Rejected { witness }, ExitVerdict::Accepted { .. }) => prop_assert_eq!(witness.region, p),
                _ => {}
            }
        }
    }
}
