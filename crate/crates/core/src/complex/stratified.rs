use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::simplicial::{cone_complex, face_poset, ComplexFile, SimplicialComplex};
use super::ComplexError;
use crate::poset::{MonotoneMap, Poset, PosetFile};

/// A simplicial complex with a monotone map from its face poset to a target
/// poset; the open cell of `σ` lies in the stratum `strat(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedComplex {
    complex: SimplicialComplex,
    strat: MonotoneMap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratifiedFile {
    pub complex: ComplexFile,
    pub target: PosetFile,
    /// Face key (vertex ids joined by `,`, any order) to target element.
    pub strat: BTreeMap<String, String>,
}

impl StratifiedComplex {
    /// `assignment` maps face keys to target elements; every face needs one.
    pub fn new(
        complex: SimplicialComplex,
        target: Poset,
        assignment: &BTreeMap<String, String>,
    ) -> Result<Self, ComplexError> {
        let mut canonical: HashMap<String, String> = HashMap::new();
        for (key, a) in assignment {
            let face = complex.face_from_key(key)?;
            if canonical.insert(complex.face_key(&face), a.clone()).is_some() {
                return Err(ComplexError::DuplicateFace(key.clone()));
            }
        }
        let strat = MonotoneMap::from_names(face_poset(&complex), target, &canonical)?;
        Ok(Self { complex, strat })
    }

    fn from_map(complex: SimplicialComplex, target: Poset, f: impl Fn(&[usize]) -> String) -> Result<Self, ComplexError> {
        let assignment = complex.faces().iter().map(|s| (complex.face_key(s), f(s))).collect();
        Self::new(complex, target, &assignment)
    }

    /// Each face is its own stratum.
    pub fn face_stratification(complex: SimplicialComplex) -> Self {
        let target = face_poset(&complex);
        let strat = MonotoneMap::identity(&target);
        Self { complex, strat }
    }

    /// Stratified by dimension over the chain `0 < ... < dim`.
    pub fn by_dimension(complex: SimplicialComplex) -> Self {
        let d = complex.dimension().map_or(1, |d| d + 1);
        Self::from_map(complex, Poset::chain(d), |s| (s.len() - 1).to_string()).expect("dimension is monotone")
    }

    /// Everything in the single stratum `a` of a one-point target.
    pub fn constant(complex: SimplicialComplex, a: &str) -> Self {
        let target = Poset::new([a], Vec::<(&str, &str)>::new()).expect("one point");
        Self::from_map(complex, target, |_| a.to_string()).expect("constant map is monotone")
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn target(&self) -> &Poset {
        self.strat.target()
    }

    pub fn face_poset(&self) -> &Poset {
        self.strat.source()
    }

    pub fn strat(&self) -> &MonotoneMap {
        &self.strat
    }

    /// Target index of the stratum containing the open cell of `face`.
    pub fn stratum_of(&self, face: &[usize]) -> usize {
        let key = self.complex.face_key(face);
        let i = self.face_poset().index_of(&key).unwrap_or_else(|| panic!("{key} is not a face"));
        self.strat.apply(i)
    }

    /// Face keys of the faces in stratum `a`, in face order.
    pub fn strata_of(&self, a: &str) -> Result<Vec<String>, ComplexError> {
        let ai = self.target().require(a)?;
        Ok(self
            .complex
            .faces()
            .iter()
            .filter(|f| self.stratum_of(f) == ai)
            .map(|f| self.complex.face_key(f))
            .collect())
    }

    /// Join with a fresh apex, stratified over the target with a new bottom:
    /// the apex goes to the bottom and `σ ∪ {apex}` to the stratum of `σ`.
    pub fn cone(&self, apex: &str) -> Result<(StratifiedComplex, String), ComplexError> {
        let coned = cone_complex(&self.complex, apex)?;
        let (target, bottom) = self.target().cone();
        let apex_idx = coned.vertex_index(apex).unwrap();
        let assignment: BTreeMap<String, String> = coned
            .faces()
            .iter()
            .map(|f| {
                let rest: Vec<&str> =
                    f.iter().filter(|&&v| v != apex_idx).map(|&v| coned.vertices()[v].as_str()).collect();
                let a = if rest.is_empty() {
                    bottom.clone()
                } else {
                    let g = self.complex.parse_face(&rest).expect("link face lies in the base");
                    self.target().name(self.stratum_of(&g)).to_string()
                };
                (coned.face_key(f), a)
            })
            .collect();
        Ok((Self::new(coned, target, &assignment)?, bottom))
    }

    pub fn to_file(&self) -> StratifiedFile {
        StratifiedFile {
            complex: self.complex.to_file(),
            target: self.target().to_file(),
            strat: self
                .complex
                .faces()
                .iter()
                .map(|f| (self.complex.face_key(f), self.target().name(self.stratum_of(f)).to_string()))
                .collect(),
        }
    }
}

impl TryFrom<StratifiedFile> for StratifiedComplex {
    type Error = ComplexError;

    fn try_from(f: StratifiedFile) -> Result<Self, ComplexError> {
        let complex = SimplicialComplex::try_from(f.complex)?;
        let target = Poset::try_from(f.target)?;
        StratifiedComplex::new(complex, target, &f.strat)
    }
}

impl Serialize for StratifiedComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StratifiedComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        StratifiedComplex::try_from(StratifiedFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
