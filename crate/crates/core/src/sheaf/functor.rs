use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::value::{Morphism, Value, ValueKind};
use super::SheafError;
use crate::linalg::Matrix;
use crate::poset::{Poset, PosetFile};
use crate::rational;

/// A covariant functor from a finite poset into finite sets or finite
/// dimensional rational vector spaces, given by its values and its maps on
/// cover relations. Composites along all comparable pairs are cached at
/// construction, which is also where functoriality is enforced.
/// Maps on the covers `a < b` of the base, keyed by `(a, b)`.
pub type Transitions = BTreeMap<(usize, usize), Morphism>;

#[derive(Debug, Clone)]
pub struct SheafFunctor {
    base: Poset,
    kind: ValueKind,
    values: Vec<Value>,
    transitions: Transitions,
    maps: Vec<Vec<Option<Morphism>>>,
}

impl PartialEq for SheafFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.kind == other.kind
            && self.values == other.values
            && self.transitions == other.transitions
    }
}

/// Two different composites along paths from `from` to `to`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctorialityViolation {
    pub from: String,
    pub to: String,
    pub first: serde_json::Value,
    pub second: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FunctorialityReport {
    Ok,
    Violation(FunctorialityViolation),
}

type Composites = Vec<Vec<Option<Morphism>>>;

/// Checks that every pair `a <= b` has a single path composite. The
/// dynamic programme visits targets in topological order, so every path is
/// accounted for by its last cover.
pub fn check_functoriality(
    base: &Poset,
    values: &[Value],
    transitions: &Transitions,
) -> Result<FunctorialityReport, SheafError> {
    match composites(base, values, transitions)? {
        Ok(_) => Ok(FunctorialityReport::Ok),
        Err(v) => Ok(FunctorialityReport::Violation(*v)),
    }
}

fn composites(
    base: &Poset,
    values: &[Value],
    transitions: &Transitions,
) -> Result<Result<Composites, Box<FunctorialityViolation>>, SheafError> {
    let n = base.len();
    for &(a, b) in base.covers() {
        if !transitions.contains_key(&(a, b)) {
            return Err(SheafError::MissingTransition {
                from: base.name(a).to_string(),
                to: base.name(b).to_string(),
            });
        }
    }
    for (&(a, b), m) in transitions {
        if !base.covers().contains(&(a, b)) {
            return Err(SheafError::NotACover {
                from: base.name(a).to_string(),
                to: base.name(b).to_string(),
            });
        }
        if !m.fits(&values[a], &values[b]) {
            return Err(SheafError::ShapeMismatch {
                from: base.name(a).to_string(),
                to: base.name(b).to_string(),
            });
        }
    }
    let mut maps: Composites = vec![vec![None; n]; n];
    for a in 0..n {
        maps[a][a] = Some(Morphism::identity(&values[a]));
        for &b in base.topological_order() {
            if b == a || !base.leq(a, b) {
                continue;
            }
            let mut found: Option<Morphism> = None;
            for &c in base.lower_covers(b) {
                if !base.leq(a, c) {
                    continue;
                }
                let via = transitions[&(c, b)].after(maps[a][c].as_ref().expect("earlier in topo order"));
                match &found {
                    None => found = Some(via),
                    Some(prev) if *prev == via => {}
                    Some(prev) => {
                        return Ok(Err(Box::new(FunctorialityViolation {
                            from: base.name(a).to_string(),
                            to: base.name(b).to_string(),
                            first: prev.to_json(&values[a], &values[b]),
                            second: via.to_json(&values[a], &values[b]),
                        })));
                    }
                }
            }
            maps[a][b] = found;
        }
    }
    Ok(Ok(maps))
}

impl SheafFunctor {
    pub fn new(
        base: Poset,
        values: Vec<Value>,
        transitions: Transitions,
    ) -> Result<Self, SheafError> {
        assert_eq!(values.len(), base.len(), "one value per element");
        let kind = values.first().map(Value::kind).unwrap_or(ValueKind::Set);
        Self::with_kind(base, kind, values, transitions)
    }

    /// Like [`SheafFunctor::new`] but fixes the kind even on an empty base.
    pub fn with_kind(
        base: Poset,
        kind: ValueKind,
        values: Vec<Value>,
        transitions: Transitions,
    ) -> Result<Self, SheafError> {
        if let Some(i) = values.iter().position(|v| v.kind() != kind) {
            return Err(SheafError::KindMismatch(base.name(i).to_string()));
        }
        for (i, v) in values.iter().enumerate() {
            if let Value::Set(s) = v {
                let mut sorted = s.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(SheafError::DuplicateLabel(base.name(i).to_string()));
                }
            }
        }
        let maps = composites(&base, &values, &transitions)?.map_err(SheafError::Functoriality)?;
        Ok(Self { base, kind, values, transitions, maps })
    }

    /// Every element gets `value`, every cover the identity.
    pub fn constant(base: Poset, value: Value) -> Self {
        let kind = value.kind();
        let values = vec![value.clone(); base.len()];
        let transitions = base.covers().iter().map(|&c| (c, Morphism::identity(&value))).collect();
        Self::with_kind(base, kind, values, transitions).expect("constant functor")
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn value(&self, a: usize) -> &Value {
        &self.values[a]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value_named(&self, a: &str) -> Result<&Value, SheafError> {
        Ok(&self.values[self.base.require(a)?])
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    /// `F(a <= b)`. Panics unless `a <= b`.
    pub fn map(&self, a: usize, b: usize) -> &Morphism {
        self.maps[a][b].as_ref().unwrap_or_else(|| {
            panic!("{} is not below {}", self.base.name(a), self.base.name(b))
        })
    }

    pub fn to_file(&self) -> SheafFile {
        let values = (0..self.base.len())
            .map(|i| {
                let v = match &self.values[i] {
                    Value::Set(s) => ValueFile::Set { elems: s.clone() },
                    Value::Vect(d) => ValueFile::Vect { dim: *d },
                };
                (self.base.name(i).to_string(), v)
            })
            .collect();
        let transitions = self
            .transitions
            .iter()
            .map(|(&(a, b), m)| {
                let (map, matrix) = match m {
                    Morphism::Function(f) => {
                        let (s, t) = (self.values[a].labels().unwrap(), self.values[b].labels().unwrap());
                        (Some(f.iter().enumerate().map(|(x, &y)| (s[x].clone(), t[y].clone())).collect()), None)
                    }
                    Morphism::Linear(m) => (
                        None,
                        Some(m.to_rows().iter().map(|r| r.iter().map(rational::format).collect()).collect()),
                    ),
                };
                TransitionFile { from: self.base.name(a).to_string(), to: self.base.name(b).to_string(), map, matrix }
            })
            .collect();
        SheafFile { poset: self.base.to_file(), kind: Some(self.kind), values, transitions }
    }
}

/// On-disk form of a [`SheafFunctor`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SheafFile {
    pub poset: PosetFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ValueKind>,
    pub values: BTreeMap<String, ValueFile>,
    #[serde(default)]
    pub transitions: Vec<TransitionFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ValueFile {
    Set { elems: Vec<String> },
    Vect { dim: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

impl TryFrom<SheafFile> for SheafFunctor {
    type Error = SheafError;

    fn try_from(f: SheafFile) -> Result<Self, SheafError> {
        let base = Poset::try_from(f.poset)?;
        let mut b = SheafBuilder::new(base.clone());
        for (name, v) in f.values {
            let v = match v {
                ValueFile::Set { elems } => Value::Set(elems),
                ValueFile::Vect { dim } => Value::Vect(dim),
            };
            b = b.value(&name, v)?;
        }
        for t in f.transitions {
            b = match (t.map, t.matrix) {
                (Some(map), None) => {
                    let pairs: Vec<(String, String)> = map.into_iter().collect();
                    b.function(&t.from, &t.to, &pairs)?
                }
                (None, Some(rows)) => {
                    let parsed = rows
                        .iter()
                        .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| SheafError::Malformed(e.to_string()))?;
                    b.matrix_rows(&t.from, &t.to, parsed)?
                }
                _ => {
                    return Err(SheafError::Malformed(format!(
                        "transition {} -> {} needs exactly one of map/matrix",
                        t.from, t.to
                    )))
                }
            };
        }
        match f.kind {
            Some(k) => b.build_kind(k),
            None => b.build(),
        }
    }
}

impl Serialize for SheafFunctor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SheafFunctor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = SheafFile::deserialize(d)?;
        SheafFunctor::try_from(f).map_err(serde::de::Error::custom)
    }
}

/// Name-based construction of a [`SheafFunctor`].
#[derive(Debug, Clone)]
pub struct SheafBuilder {
    base: Poset,
    values: Vec<Option<Value>>,
    transitions: Transitions,
}

impl SheafBuilder {
    pub fn new(base: Poset) -> Self {
        let n = base.len();
        Self { base, values: vec![None; n], transitions: BTreeMap::new() }
    }

    pub fn value(mut self, element: &str, v: Value) -> Result<Self, SheafError> {
        let i = self.base.require(element)?;
        self.values[i] = Some(v);
        Ok(self)
    }

    pub fn set<S: AsRef<str>>(self, element: &str, elems: &[S]) -> Result<Self, SheafError> {
        self.value(element, Value::set(elems.iter().map(|s| s.as_ref().to_string())))
    }

    pub fn vect(self, element: &str, dim: usize) -> Result<Self, SheafError> {
        self.value(element, Value::Vect(dim))
    }

    fn endpoints(&self, from: &str, to: &str) -> Result<(usize, usize), SheafError> {
        let (a, b) = (self.base.require(from)?, self.base.require(to)?);
        if self.values[a].is_none() || self.values[b].is_none() {
            return Err(SheafError::Malformed(format!("values of {from} and {to} must precede their transition")));
        }
        Ok((a, b))
    }

    pub fn function<S: AsRef<str>>(mut self, from: &str, to: &str, pairs: &[(S, S)]) -> Result<Self, SheafError> {
        let (a, b) = self.endpoints(from, to)?;
        let (src, dst) = (self.values[a].clone().unwrap(), self.values[b].clone().unwrap());
        let mut f = vec![usize::MAX; src.size()];
        for (x, y) in pairs {
            let xi = src.label_index(x.as_ref()).ok_or_else(|| SheafError::UnknownLabel {
                element: from.to_string(),
                label: x.as_ref().to_string(),
            })?;
            let yi = dst.label_index(y.as_ref()).ok_or_else(|| SheafError::UnknownLabel {
                element: to.to_string(),
                label: y.as_ref().to_string(),
            })?;
            f[xi] = yi;
        }
        if let Some(x) = f.iter().position(|&y| y == usize::MAX) {
            return Err(SheafError::UnknownLabel {
                element: from.to_string(),
                label: format!("{} (unmapped)", src.labels().unwrap()[x]),
            });
        }
        self.transitions.insert((a, b), Morphism::Function(f));
        Ok(self)
    }

    pub fn matrix(mut self, from: &str, to: &str, m: Matrix) -> Result<Self, SheafError> {
        let (a, b) = self.endpoints(from, to)?;
        self.transitions.insert((a, b), Morphism::Linear(m));
        Ok(self)
    }

    fn matrix_rows(self, from: &str, to: &str, rows: Vec<Vec<rational::Rational>>) -> Result<Self, SheafError> {
        let (a, _) = self.endpoints(from, to)?;
        let cols = self.values[a].as_ref().unwrap().size();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(SheafError::ShapeMismatch { from: from.to_string(), to: to.to_string() });
        }
        self.matrix(from, to, Matrix::from_rows(rows, cols))
    }

    fn finish(self) -> Result<(Poset, Vec<Value>, Transitions), SheafError> {
        let mut values = Vec::with_capacity(self.values.len());
        for (i, v) in self.values.into_iter().enumerate() {
            values.push(v.ok_or_else(|| SheafError::MissingValue(self.base.name(i).to_string()))?);
        }
        Ok((self.base, values, self.transitions))
    }

    pub fn build(self) -> Result<SheafFunctor, SheafError> {
        let (base, values, transitions) = self.finish()?;
        SheafFunctor::new(base, values, transitions)
    }

    pub fn build_kind(self, kind: ValueKind) -> Result<SheafFunctor, SheafError> {
        let (base, values, transitions) = self.finish()?;
        SheafFunctor::with_kind(base, kind, values, transitions)
    }
}
