use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::linalg::Matrix;
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Set,
    Vect,
}

/// A stalk: a finite set with labelled elements, or `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Set(Vec<String>),
    Vect(usize),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Set(_) => ValueKind::Set,
            Value::Vect(_) => ValueKind::Vect,
        }
    }

    /// Cardinality or dimension.
    pub fn size(&self) -> usize {
        match self {
            Value::Set(s) => s.len(),
            Value::Vect(d) => *d,
        }
    }

    pub fn set<S: Into<String>>(elems: impl IntoIterator<Item = S>) -> Self {
        Value::Set(elems.into_iter().map(Into::into).collect())
    }

    /// One-point set, or the zero space.
    pub fn terminal(kind: ValueKind) -> Self {
        match kind {
            ValueKind::Set => Value::Set(vec!["*".into()]),
            ValueKind::Vect => Value::Vect(0),
        }
    }

    /// Empty set, or the zero space.
    pub fn initial(kind: ValueKind) -> Self {
        match kind {
            ValueKind::Set => Value::Set(vec![]),
            ValueKind::Vect => Value::Vect(0),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.size() == usize::from(self.kind() == ValueKind::Set)
    }

    pub fn is_initial(&self) -> bool {
        self.size() == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            Value::Set(s) => Some(s),
            Value::Vect(_) => None,
        }
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels()?.iter().position(|l| l == label)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Set(s) => json!({"kind": "set", "elems": s}),
            Value::Vect(d) => json!({"kind": "vect", "dim": d}),
        }
    }
}

/// A map between stalks of the same kind. Functions store the image index of
/// each source element; linear maps are `dim target x dim source` matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Morphism {
    Function(Vec<usize>),
    Linear(Matrix),
}

impl Morphism {
    pub fn identity(v: &Value) -> Self {
        match v {
            Value::Set(s) => Morphism::Function((0..s.len()).collect()),
            Value::Vect(d) => Morphism::Linear(Matrix::identity(*d)),
        }
    }

    /// The unique map into a terminal value.
    pub fn to_terminal(src: &Value) -> Self {
        match src {
            Value::Set(s) => Morphism::Function(vec![0; s.len()]),
            Value::Vect(d) => Morphism::Linear(Matrix::zeros(0, *d)),
        }
    }

    /// The unique map out of an initial value.
    pub fn from_initial(dst: &Value) -> Self {
        match dst {
            Value::Set(_) => Morphism::Function(vec![]),
            Value::Vect(d) => Morphism::Linear(Matrix::zeros(*d, 0)),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Morphism) -> Morphism {
        match (self, first) {
            (Morphism::Function(g), Morphism::Function(f)) => {
                Morphism::Function(f.iter().map(|&x| g[x]).collect())
            }
            (Morphism::Linear(g), Morphism::Linear(f)) => Morphism::Linear(g.mul(f)),
            _ => panic!("composing morphisms of different kinds"),
        }
    }

    pub fn fits(&self, src: &Value, dst: &Value) -> bool {
        match (self, src, dst) {
            (Morphism::Function(f), Value::Set(s), Value::Set(t)) => {
                f.len() == s.len() && f.iter().all(|&y| y < t.len())
            }
            (Morphism::Linear(m), Value::Vect(s), Value::Vect(t)) => m.rows() == *t && m.cols() == *s,
            _ => false,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Morphism::Function(f) => f.iter().enumerate().all(|(i, &y)| i == y),
            Morphism::Linear(m) => m.is_identity(),
        }
    }

    /// Bijection or invertible matrix, assuming the morphism fits `src -> dst`.
    pub fn is_iso(&self, dst: &Value) -> bool {
        self.inverse(dst).is_some()
    }

    pub fn inverse(&self, dst: &Value) -> Option<Morphism> {
        match self {
            Morphism::Function(f) => {
                if f.len() != dst.size() {
                    return None;
                }
                let mut inv = vec![usize::MAX; f.len()];
                for (x, &y) in f.iter().enumerate() {
                    if inv[y] != usize::MAX {
                        return None;
                    }
                    inv[y] = x;
                }
                Some(Morphism::Function(inv))
            }
            Morphism::Linear(m) => m.inverse().map(Morphism::Linear),
        }
    }

    pub fn to_json(&self, src: &Value, dst: &Value) -> serde_json::Value {
        match (self, src, dst) {
            (Morphism::Function(f), Value::Set(s), Value::Set(t)) => {
                let m: serde_json::Map<String, serde_json::Value> = f
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (s[x].clone(), json!(t.get(y).cloned().unwrap_or_default())))
                    .collect();
                serde_json::Value::Object(m)
            }
            (Morphism::Linear(m), _, _) => matrix_json(m),
            (Morphism::Function(f), _, _) => json!(f),
        }
    }
}

pub(crate) fn matrix_json(m: &Matrix) -> serde_json::Value {
    let rows: Vec<Vec<String>> =
        m.to_rows().iter().map(|r| r.iter().map(rational::format).collect()).collect();
    json!(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_and_initial() {
        assert!(Value::terminal(ValueKind::Set).is_terminal());
        assert!(!Value::initial(ValueKind::Set).is_terminal());
        assert!(Value::Vect(0).is_terminal() && Value::Vect(0).is_initial());
    }

    #[test]
    fn function_inverse() {
        let v = Value::set(["a", "b", "c"]);
        let f = Morphism::Function(vec![2, 0, 1]);
        let g = f.inverse(&v).unwrap();
        assert!(g.after(&f).is_identity());
        assert!(Morphism::Function(vec![0, 0, 1]).inverse(&v).is_none());
    }
}
