//! Finite limits and colimits of a functor restricted to a subset of its base.

use std::collections::HashMap;

use super::functor::SheafFunctor;
use super::value::{Morphism, Value, ValueKind};
use super::SheafError;
use crate::linalg::Matrix;

/// Pairs `(s, t)` of shape positions with `s < t` and nothing of the shape
/// strictly between them: the covers of the induced order on the shape.
fn induced_covers(f: &SheafFunctor, shape: &[usize]) -> Vec<(usize, usize)> {
    let p = f.base();
    let mut out = Vec::new();
    for (i, &s) in shape.iter().enumerate() {
        for (j, &t) in shape.iter().enumerate() {
            if p.lt(s, t) && !shape.iter().any(|&u| u != s && u != t && p.lt(s, u) && p.lt(u, t)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn normalize(shape: &[usize]) -> Vec<usize> {
    let mut s = shape.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

fn offsets(f: &SheafFunctor, shape: &[usize]) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(shape.len());
    let mut total = 0;
    for &s in shape {
        off.push(total);
        total += f.value(s).size();
    }
    (off, total)
}

/// A limit cone: the value plus enough data to project and to factor.
#[derive(Debug, Clone)]
pub struct Limit {
    shape: Vec<usize>,
    value: Value,
    repr: LimitRepr,
}

#[derive(Debug, Clone)]
enum LimitRepr {
    /// Compatible families, each listed in shape order.
    Families { families: Vec<Vec<usize>>, lookup: HashMap<Vec<usize>, usize> },
    /// Kernel of the difference map on the product.
    Kernel { basis: Matrix, free: Vec<usize>, constraints: Matrix, offsets: Vec<usize> },
}

/// The limit of `f` over `shape` (any subset of the base, not necessarily
/// convex or closed). Over the empty shape this is the terminal value.
///
/// In SET the elements are the compatible families `(x_a)` with
/// `f(a <= b)(x_a) = x_b`, ordered lexicographically; in VECT it is the
/// kernel of the difference map with the basis fixed by row reduction.
pub fn limit_over(f: &SheafFunctor, shape: &[usize]) -> Limit {
    let shape = normalize(shape);
    match f.kind() {
        ValueKind::Set => {
            let families = compatible_families(f, &shape);
            let labels = families.iter().map(|fam| family_label(f, &shape, fam)).collect();
            let lookup = families.iter().cloned().enumerate().map(|(i, fam)| (fam, i)).collect();
            Limit { shape, value: Value::Set(labels), repr: LimitRepr::Families { families, lookup } }
        }
        ValueKind::Vect => {
            let (off, total) = offsets(f, &shape);
            let mut blocks = Vec::new();
            for (i, j) in induced_covers(f, &shape) {
                let (s, t) = (shape[i], shape[j]);
                let Morphism::Linear(m) = f.map(s, t) else { unreachable!() };
                let mut block = Matrix::zeros(m.rows(), total);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        block[(r, off[i] + c)] = m[(r, c)].clone();
                    }
                    block[(r, off[j] + r)] -= crate::rational::one();
                }
                blocks.push(block);
            }
            let constraints = Matrix::vstack(&blocks, total);
            let k = constraints.kernel();
            Limit {
                shape,
                value: Value::Vect(k.basis.cols()),
                repr: LimitRepr::Kernel { basis: k.basis, free: k.free, constraints, offsets: off },
            }
        }
    }
}

fn compatible_families(f: &SheafFunctor, shape: &[usize]) -> Vec<Vec<usize>> {
    let p = f.base();
    // visit shape positions in topological order so lower elements are fixed first
    let mut order: Vec<usize> = (0..shape.len()).collect();
    let rank: HashMap<usize, usize> = p.topological_order().iter().enumerate().map(|(i, &a)| (a, i)).collect();
    order.sort_by_key(|&i| rank[&shape[i]]);

    let mut out = Vec::new();
    let mut current = vec![usize::MAX; shape.len()];
    fn go(
        f: &SheafFunctor,
        shape: &[usize],
        order: &[usize],
        k: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let i = order[k];
        let t = shape[i];
        let mut forced: Option<usize> = None;
        for &j in &order[..k] {
            let s = shape[j];
            if f.base().leq(s, t) {
                let Morphism::Function(m) = f.map(s, t) else { unreachable!() };
                let y = m[current[j]];
                match forced {
                    None => forced = Some(y),
                    Some(z) if z == y => {}
                    Some(_) => return,
                }
            }
        }
        let candidates: Vec<usize> = match forced {
            Some(y) => vec![y],
            None => (0..f.value(t).size()).collect(),
        };
        for x in candidates {
            current[i] = x;
            go(f, shape, order, k + 1, current, out);
        }
        current[i] = usize::MAX;
    }
    go(f, shape, &order, 0, &mut current, &mut out);
    out.sort();
    out
}

fn family_label(f: &SheafFunctor, shape: &[usize], fam: &[usize]) -> String {
    if shape.is_empty() {
        return "*".into();
    }
    let parts: Vec<String> = shape
        .iter()
        .zip(fam)
        .map(|(&a, &x)| format!("{}={}", f.base().name(a), f.value(a).labels().unwrap()[x]))
        .collect();
    format!("({})", parts.join(","))
}

impl Limit {
    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn position(&self, a: usize) -> usize {
        self.shape.binary_search(&a).unwrap_or_else(|_| panic!("element {a} is not in the shape"))
    }

    /// Projection onto `f(a)` for `a` in the shape.
    pub fn projection(&self, f: &SheafFunctor, a: usize) -> Morphism {
        let i = self.position(a);
        match &self.repr {
            LimitRepr::Families { families, .. } => Morphism::Function(families.iter().map(|fam| fam[i]).collect()),
            LimitRepr::Kernel { basis, offsets, .. } => {
                Morphism::Linear(basis.row_block(offsets[i], f.value(a).size()))
            }
        }
    }

    /// The unique map `source -> limit` whose composite with each projection
    /// is the corresponding leg; `legs` follow the shape order. Fails when the
    /// legs do not form a cone.
    pub fn factor(&self, source: &Value, legs: &[Morphism]) -> Result<Morphism, SheafError> {
        assert_eq!(legs.len(), self.shape.len());
        match &self.repr {
            LimitRepr::Families { lookup, .. } => {
                let mut out = Vec::with_capacity(source.size());
                for x in 0..source.size() {
                    let fam: Vec<usize> = legs
                        .iter()
                        .map(|l| match l {
                            Morphism::Function(m) => m[x],
                            Morphism::Linear(_) => unreachable!(),
                        })
                        .collect();
                    out.push(*lookup.get(&fam).ok_or(SheafError::NotACone)?);
                }
                Ok(Morphism::Function(out))
            }
            LimitRepr::Kernel { free, constraints, .. } => {
                let blocks: Vec<Matrix> = legs
                    .iter()
                    .map(|l| match l {
                        Morphism::Linear(m) => m.clone(),
                        Morphism::Function(_) => unreachable!(),
                    })
                    .collect();
                let stacked = Matrix::vstack(&blocks, source.size());
                if !constraints.mul(&stacked).is_zero() {
                    return Err(SheafError::NotACone);
                }
                Ok(Morphism::Linear(stacked.select_rows(free)))
            }
        }
    }

    /// The canonical map to the limit over a smaller shape.
    pub fn restriction_to(&self, f: &SheafFunctor, smaller: &Limit) -> Morphism {
        let legs: Vec<Morphism> = smaller.shape.iter().map(|&a| self.projection(f, a)).collect();
        smaller.factor(&self.value, &legs).expect("projections of a limit form a cone")
    }
}

/// A colimit cocone over a shape.
#[derive(Debug, Clone)]
pub struct Colimit {
    shape: Vec<usize>,
    value: Value,
    repr: ColimitRepr,
}

#[derive(Debug, Clone)]
enum ColimitRepr {
    /// Class index of every `(shape position, element)` and one representative per class.
    Classes { class_of: Vec<Vec<usize>>, reps: Vec<(usize, usize)> },
    /// Quotient map from the coproduct; rows span the complement of the relations.
    Quotient { quotient: Matrix, offsets: Vec<usize> },
}

/// The colimit of `f` over `shape`: in SET the disjoint union modulo
/// `x ~ f(a <= b)(x)`, in VECT the cokernel of the relation map, presented by
/// a surjection whose rows form a basis of the annihilator of the relations.
/// Over the empty shape this is the initial value.
pub fn colimit_over(f: &SheafFunctor, shape: &[usize]) -> Colimit {
    let shape = normalize(shape);
    let covers = induced_covers(f, &shape);
    match f.kind() {
        ValueKind::Set => {
            let (off, total) = offsets(f, &shape);
            let mut parent: Vec<usize> = (0..total).collect();
            fn find(parent: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while parent[r] != r {
                    r = parent[r];
                }
                let mut y = x;
                while parent[y] != r {
                    let next = parent[y];
                    parent[y] = r;
                    y = next;
                }
                r
            }
            for &(i, j) in &covers {
                let Morphism::Function(m) = f.map(shape[i], shape[j]) else { unreachable!() };
                for (x, &y) in m.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, off[i] + x), find(&mut parent, off[j] + y));
                    if rx != ry {
                        // keep the smaller index as root so the first occurrence names the class
                        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                        parent[hi] = lo;
                    }
                }
            }
            let mut class_id: HashMap<usize, usize> = HashMap::new();
            let mut reps = Vec::new();
            let mut class_of = Vec::with_capacity(shape.len());
            for (i, &s) in shape.iter().enumerate() {
                let mut row = Vec::with_capacity(f.value(s).size());
                for x in 0..f.value(s).size() {
                    let r = find(&mut parent, off[i] + x);
                    let next = class_id.len();
                    let id = *class_id.entry(r).or_insert_with(|| {
                        reps.push((i, x));
                        next
                    });
                    row.push(id);
                }
                class_of.push(row);
            }
            let labels = reps
                .iter()
                .map(|&(i, x)| format!("[{}={}]", f.base().name(shape[i]), f.value(shape[i]).labels().unwrap()[x]))
                .collect();
            Colimit { shape, value: Value::Set(labels), repr: ColimitRepr::Classes { class_of, reps } }
        }
        ValueKind::Vect => {
            let (off, total) = offsets(f, &shape);
            // columns: relation vectors ι_t f(s<=t) x - ι_s x
            let mut columns = Vec::new();
            for &(i, j) in &covers {
                let Morphism::Linear(m) = f.map(shape[i], shape[j]) else { unreachable!() };
                for c in 0..m.cols() {
                    let mut v = vec![crate::rational::zero(); total];
                    v[off[i] + c] = -crate::rational::one();
                    for r in 0..m.rows() {
                        v[off[j] + r] += m[(r, c)].clone();
                    }
                    columns.push(v);
                }
            }
            let relations = Matrix::from_columns(&columns, total);
            // left kernel of the relation matrix
            let left = transpose(&relations).kernel();
            let quotient = transpose(&left.basis);
            Colimit {
                shape,
                value: Value::Vect(quotient.rows()),
                repr: ColimitRepr::Quotient { quotient, offsets: off },
            }
        }
    }
}

pub(crate) fn transpose(m: &Matrix) -> Matrix {
    let mut t = Matrix::zeros(m.cols(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            t[(c, r)] = m[(r, c)].clone();
        }
    }
    t
}

impl Colimit {
    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn position(&self, a: usize) -> usize {
        self.shape.binary_search(&a).unwrap_or_else(|_| panic!("element {a} is not in the shape"))
    }

    /// Injection `f(a) -> colimit` for `a` in the shape.
    pub fn injection(&self, f: &SheafFunctor, a: usize) -> Morphism {
        let i = self.position(a);
        match &self.repr {
            ColimitRepr::Classes { class_of, .. } => Morphism::Function(class_of[i].clone()),
            ColimitRepr::Quotient { quotient, offsets } => {
                let d = f.value(a).size();
                let mut m = Matrix::zeros(quotient.rows(), d);
                for r in 0..quotient.rows() {
                    for c in 0..d {
                        m[(r, c)] = quotient[(r, offsets[i] + c)].clone();
                    }
                }
                Morphism::Linear(m)
            }
        }
    }

    /// The unique map `colimit -> target` restricting to each leg; fails when
    /// the legs do not form a cocone.
    pub fn factor(&self, f: &SheafFunctor, target: &Value, legs: &[Morphism]) -> Result<Morphism, SheafError> {
        assert_eq!(legs.len(), self.shape.len());
        match &self.repr {
            ColimitRepr::Classes { class_of, reps } => {
                let mut out: Vec<usize> = reps
                    .iter()
                    .map(|&(i, x)| match &legs[i] {
                        Morphism::Function(m) => m[x],
                        Morphism::Linear(_) => unreachable!(),
                    })
                    .collect();
                for (i, row) in class_of.iter().enumerate() {
                    let Morphism::Function(m) = &legs[i] else { unreachable!() };
                    for (x, &c) in row.iter().enumerate() {
                        if m[x] != out[c] {
                            return Err(SheafError::NotACone);
                        }
                    }
                }
                out.shrink_to_fit();
                Ok(Morphism::Function(out))
            }
            ColimitRepr::Quotient { quotient, .. } => {
                let mut joined = Matrix::zeros(target.size(), quotient.cols());
                let mut col = 0;
                for (k, leg) in legs.iter().enumerate() {
                    let Morphism::Linear(m) = leg else { unreachable!() };
                    debug_assert_eq!(m.cols(), f.value(self.shape[k]).size());
                    for c in 0..m.cols() {
                        for r in 0..m.rows() {
                            joined[(r, col + c)] = m[(r, c)].clone();
                        }
                    }
                    col += m.cols();
                }
                // M Q = L with Q of full row rank: M = L Qᵀ (Q Qᵀ)⁻¹
                let qt = transpose(quotient);
                let gram = quotient.mul(&qt).inverse().expect("quotient has full row rank");
                let m = joined.mul(&qt).mul(&gram);
                if m.mul(quotient) != joined {
                    return Err(SheafError::NotACone);
                }
                Ok(Morphism::Linear(m))
            }
        }
    }
}
