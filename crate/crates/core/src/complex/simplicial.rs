use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ComplexError;
use std::fmt::Write;

use crate::poset::{dot_id, Poset};

/// Faces above this size are refused: their closure has `2^n - 1` faces.
pub const MAX_FACE_SIZE: usize = 16;

/// A finite abstract simplicial complex. Vertices are kept sorted by id and
/// faces are sorted vertex-index lists, listed by dimension then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    faces: Vec<Vec<usize>>,
    face_index: HashMap<Vec<usize>, usize>,
}

/// On-disk form; the closure under nonempty subsets is computed on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub maximal_faces: Vec<Vec<String>>,
}

impl SimplicialComplex {
    /// The closure of `faces` under nonempty subsets, plus every vertex.
    pub fn new<S: AsRef<str>>(vertices: &[S], faces: &[Vec<S>]) -> Result<Self, ComplexError> {
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(w[0].clone()));
        }
        if let Some(v) = names.iter().find(|v| v.is_empty() || v.contains(',')) {
            return Err(ComplexError::InvalidVertexId(v.clone()));
        }
        let vertex_index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut all: BTreeSet<Vec<usize>> = (0..names.len()).map(|i| vec![i]).collect();
        for face in faces {
            let mut idx = face
                .iter()
                .map(|v| vertex_index.get(v.as_ref()).copied().ok_or_else(|| ComplexError::UnknownVertex(v.as_ref().to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                return Err(ComplexError::EmptyFace);
            }
            if idx.len() > MAX_FACE_SIZE {
                return Err(ComplexError::FaceTooLarge(idx.len()));
            }
            if all.contains(&idx) {
                continue;
            }
            for mask in 1u32..(1 << idx.len()) {
                all.insert(idx.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let mut faces: Vec<Vec<usize>> = all.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let face_index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(Self { vertices: names, vertex_index, faces, face_index })
    }

    /// The full simplex on the given vertices.
    pub fn simplex<S: AsRef<str>>(vertices: &[S]) -> Result<Self, ComplexError> {
        let names: Vec<&str> = vertices.iter().map(|v| v.as_ref()).collect();
        Self::new(&names, std::slice::from_ref(&names))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_id(&self, face: &[usize]) -> Option<usize> {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        self.face_index.get(&f).copied()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.face_id(face).is_some()
    }

    /// Sorted vertex ids joined by `,`.
    pub fn face_key(&self, face: &[usize]) -> String {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.iter().map(|&v| self.vertices[v].as_str()).collect::<Vec<_>>().join(",")
    }

    /// Parses a face key or an id list into sorted vertex indices; the face
    /// must exist.
    pub fn parse_face<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>, ComplexError> {
        let mut idx = ids
            .iter()
            .map(|v| self.vertex_index(v.as_ref()).ok_or_else(|| ComplexError::UnknownVertex(v.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        if !self.contains_face(&idx) {
            return Err(ComplexError::UnknownFace(ids.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",")));
        }
        Ok(idx)
    }

    pub fn face_from_key(&self, key: &str) -> Result<Vec<usize>, ComplexError> {
        let ids: Vec<&str> = key.split(',').collect();
        self.parse_face(&ids)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.last().map(|f| f.len() - 1)
    }

    /// Edges containing vertex `v`.
    pub fn edges_at(&self, v: usize) -> Vec<Vec<usize>> {
        self.faces.iter().filter(|f| f.len() == 2 && f.contains(&v)).cloned().collect()
    }

    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        // closed under subsets, so maximal means no one-vertex extension exists
        self.faces
            .iter()
            .filter(|f| {
                (0..self.vertices.len()).filter(|w| !f.contains(w)).all(|w| {
                    let mut g = f.to_vec();
                    g.push(w);
                    !self.contains_face(&g)
                })
            })
            .cloned()
            .collect()
    }

    /// The subcomplex on the listed faces, which must be closed under
    /// nonempty subsets (checked). Vertices outside it are dropped.
    pub fn subcomplex(&self, faces: &[Vec<usize>]) -> Result<SimplicialComplex, ComplexError> {
        let set: BTreeSet<&Vec<usize>> = faces.iter().collect();
        for f in faces {
            if !self.contains_face(f) {
                return Err(ComplexError::UnknownFace(self.face_key(f)));
            }
            for k in 0..f.len() {
                if f.len() > 1 {
                    let mut g = f.clone();
                    g.remove(k);
                    if !set.contains(&g) {
                        return Err(ComplexError::NotClosed(self.face_key(f)));
                    }
                }
            }
        }
        let verts: Vec<&str> = faces.iter().filter(|f| f.len() == 1).map(|f| self.vertices[f[0]].as_str()).collect();
        let named: Vec<Vec<&str>> = faces.iter().map(|f| f.iter().map(|&v| self.vertices[v].as_str()).collect()).collect();
        SimplicialComplex::new(&verts, &named)
    }

    /// GraphViz drawing of the 1-skeleton.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {} {{", dot_id(name));
        for v in &self.vertices {
            let _ = writeln!(s, "  {};", dot_id(v));
        }
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            let _ = writeln!(s, "  {} -- {};", dot_id(&self.vertices[f[0]]), dot_id(&self.vertices[f[1]]));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertices.clone(),
            maximal_faces: self
                .maximal_faces()
                .iter()
                .map(|f| f.iter().map(|&v| self.vertices[v].clone()).collect())
                .collect(),
        }
    }
}

impl TryFrom<ComplexFile> for SimplicialComplex {
    type Error = ComplexError;

    fn try_from(f: ComplexFile) -> Result<Self, ComplexError> {
        SimplicialComplex::new(&f.vertices, &f.maximal_faces)
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SimplicialComplex::try_from(ComplexFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Faces ordered by inclusion, named by their face keys; covers are the
/// codimension-one inclusions.
pub fn face_poset(k: &SimplicialComplex) -> Poset {
    let names: Vec<String> = k.faces().iter().map(|f| k.face_key(f)).collect();
    let mut covers = Vec::new();
    for f in k.faces() {
        if f.len() < 2 {
            continue;
        }
        for i in 0..f.len() {
            let mut g = f.clone();
            g.remove(i);
            covers.push((k.face_key(&g), k.face_key(f)));
        }
    }
    Poset::new(names, covers).expect("inclusion of faces is a partial order")
}

/// The join with a fresh vertex `apex`: every face `σ` gains `σ ∪ {apex}`.
pub fn cone_complex(k: &SimplicialComplex, apex: &str) -> Result<SimplicialComplex, ComplexError> {
    if k.vertex_index(apex).is_some() {
        return Err(ComplexError::ApexCollision(apex.to_string()));
    }
    let mut vertices: Vec<String> = k.vertices().to_vec();
    vertices.push(apex.to_string());
    let mut faces: Vec<Vec<String>> = vec![vec![apex.to_string()]];
    for f in k.maximal_faces() {
        let mut named: Vec<String> = f.iter().map(|&v| k.vertices()[v].clone()).collect();
        named.push(apex.to_string());
        faces.push(named);
    }
    SimplicialComplex::new(&vertices, &faces)
}
