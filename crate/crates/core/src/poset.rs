//! Finite posets, monotone maps, Alexandrov opens and ω-filtrations.
//!
//! Elements are opaque string ids. They are kept sorted so that every
//! derived listing is deterministic; the sort order never enters the order
//! relation itself. Internally everything is indexed by position in the
//! sorted element list.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("cover relation has a cycle through {0:?}")]
    CycleDetected(Vec<String>),
    #[error("cover ({0:?}, {1:?}) is implied by a longer path")]
    RedundantCover(String, String),
    #[error("level {level} is not downward closed: {below:?} <= {above:?} but {below:?} is missing")]
    NotDownwardClosed { level: usize, above: String, below: String },
    #[error("level {level} disagrees with level {next} on the order of {a:?} and {b:?}", next = level + 1)]
    OrderMismatch { level: usize, a: String, b: String },
    #[error("subset is not upward closed: {member:?} <= {above:?} but {above:?} is missing")]
    NotUpwardClosed { member: String, above: String },
    #[error("map is not monotone: {a:?} <= {b:?} but their images are not ordered")]
    NotMonotone { a: String, b: String },
    #[error("map is not defined on {0:?}")]
    MissingAssignment(String),
    #[error("filtration has no levels")]
    EmptyFiltration,
}

/// On-disk form: `{"elements": [...], "covers": [["a","b"], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

/// A finite partial order presented by its Hasse diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PosetFile", into = "PosetFile")]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    topo: Vec<usize>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.covers == other.covers
    }
}

impl Eq for Poset {}

impl TryFrom<PosetFile> for Poset {
    type Error = PosetError;

    fn try_from(f: PosetFile) -> Result<Self, PosetError> {
        Poset::new(f.elements, f.covers)
    }
}

impl From<Poset> for PosetFile {
    fn from(p: Poset) -> Self {
        p.to_file()
    }
}

impl Poset {
    /// Validates a cover list. Rejects cycles and covers implied by longer
    /// paths instead of silently reducing them.
    pub fn new<S: Into<String>>(
        elements: impl IntoIterator<Item = S>,
        covers: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, PosetError> {
        let mut names: Vec<String> = elements.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(PosetError::DuplicateElement(w[0].clone()));
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut pairs = Vec::new();
        for (a, b) in covers {
            let (a, b) = (a.into(), b.into());
            let ia = *index.get(&a).ok_or_else(|| PosetError::UnknownElement(a.clone()))?;
            let ib = *index.get(&b).ok_or_else(|| PosetError::UnknownElement(b.clone()))?;
            if ia == ib {
                return Err(PosetError::CycleDetected(vec![a]));
            }
            pairs.push((ia, ib));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = w[0];
            return Err(PosetError::RedundantCover(names[a].clone(), names[b].clone()));
        }

        let n = names.len();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            upper[a].push(b);
            lower[b].push(a);
        }
        let topo = topological_order(&upper, &lower).map_err(|stuck| {
            PosetError::CycleDetected(stuck.into_iter().map(|i| names[i].clone()).collect())
        })?;
        let leq = reachability(&upper, &topo);
        for &(a, b) in &pairs {
            if upper[a].iter().any(|&c| c != b && leq[c][b]) {
                return Err(PosetError::RedundantCover(names[a].clone(), names[b].clone()));
            }
        }
        Ok(Self { elements: names, index, covers: pairs, upper, lower, leq, topo })
    }

    /// Builds a poset from a relation that is already a partial order on
    /// `elements` (reflexive, antisymmetric, transitive); covers are its
    /// transitive reduction.
    pub fn from_order(
        elements: Vec<String>,
        leq: impl Fn(&str, &str) -> bool,
    ) -> Result<Self, PosetError> {
        let mut sorted = elements.clone();
        sorted.sort();
        let n = sorted.len();
        let rel: Vec<Vec<bool>> =
            (0..n).map(|a| (0..n).map(|b| a == b || leq(&sorted[a], &sorted[b])).collect()).collect();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && rel[a][b]
                    && !(0..n).any(|c| c != a && c != b && rel[a][c] && rel[c][b])
                {
                    covers.push((sorted[a].clone(), sorted[b].clone()));
                }
            }
        }
        Self::new(sorted, covers)
    }

    pub fn empty() -> Self {
        Self::new(Vec::<String>::new(), Vec::new()).expect("empty poset")
    }

    /// The chain `0 < 1 < ... < n-1` with decimal ids.
    pub fn chain(n: usize) -> Self {
        let els: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| (els[i - 1].clone(), els[i].clone())).collect();
        Self::new(els, covers).expect("chain")
    }

    pub fn antichain<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Self {
        Self::new(ids.into_iter().map(Into::into).collect::<Vec<String>>(), Vec::new())
            .expect("antichain")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, PosetError> {
        self.index_of(name).ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower[a]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    pub fn leq_named(&self, a: &str, b: &str) -> Result<bool, PosetError> {
        Ok(self.leq(self.require(a)?, self.require(b)?))
    }

    /// A linear extension: every element appears after everything below it.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.lower[a].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.upper[a].is_empty()).collect()
    }

    /// `{b : a <= b}`, sorted.
    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq[a][b]).collect()
    }

    /// `{b : b <= a}`, sorted.
    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq[b][a]).collect()
    }

    pub fn is_up_closed(&self, members: &[usize]) -> bool {
        self.up_closure_violation(members).is_none()
    }

    pub fn is_down_closed(&self, members: &[usize]) -> bool {
        let mut mask = vec![false; self.len()];
        members.iter().for_each(|&m| mask[m] = true);
        members.iter().all(|&a| (0..self.len()).all(|b| !self.leq[b][a] || mask[b]))
    }

    fn up_closure_violation(&self, members: &[usize]) -> Option<(usize, usize)> {
        let mut mask = vec![false; self.len()];
        members.iter().for_each(|&m| mask[m] = true);
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        for a in sorted {
            if let Some(b) = (0..self.len()).find(|&b| self.leq[a][b] && !mask[b]) {
                return Some((a, b));
            }
        }
        None
    }

    /// Whether `subset` is open in the Alexandrov topology (upward closed).
    pub fn is_open<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, PosetError> {
        let idx = self.indices(subset)?;
        Ok(self.is_up_closed(&idx))
    }

    pub fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, PosetError> {
        names.iter().map(|n| self.require(n.as_ref())).collect()
    }

    pub fn names(&self, idx: &[usize]) -> BTreeSet<String> {
        idx.iter().map(|&i| self.elements[i].clone()).collect()
    }

    /// Smallest downward-closed set containing `seed`, sorted.
    pub fn down_closure_idx(&self, seed: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&b| seed.iter().any(|&a| self.leq[b][a])).collect()
    }

    /// Smallest upward-closed set containing `seed`, sorted.
    pub fn up_closure_idx(&self, seed: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&b| seed.iter().any(|&a| self.leq[a][b])).collect()
    }

    pub fn downward_closure<S: AsRef<str>>(&self, seed: &[S]) -> Result<BTreeSet<String>, PosetError> {
        let idx = self.indices(seed)?;
        Ok(self.names(&self.down_closure_idx(&idx)))
    }

    /// The cone `A^◁`: a fresh bottom element below everything. Returns the
    /// new poset and the id chosen for the bottom.
    pub fn cone(&self) -> (Poset, String) {
        let mut bottom = "⊥".to_string();
        while self.contains(&bottom) {
            bottom.push('\'');
        }
        let mut elements = self.elements.clone();
        elements.push(bottom.clone());
        let mut covers = self.named_covers();
        for m in self.minimal_elements() {
            covers.push((bottom.clone(), self.elements[m].clone()));
        }
        (Poset::new(elements, covers).expect("cone of a poset is a poset"), bottom)
    }

    /// Induced subposet on `members`.
    pub fn induced(&self, members: &[usize]) -> Poset {
        let names: Vec<String> = members.iter().map(|&i| self.elements[i].clone()).collect();
        Poset::from_order(names, |a, b| self.leq[self.index[a]][self.index[b]])
            .expect("induced order is a partial order")
    }

    pub fn induced_named<S: AsRef<str>>(&self, members: &[S]) -> Result<Poset, PosetError> {
        let idx = self.indices(members)?;
        Ok(self.induced(&idx))
    }

    pub fn named_covers(&self) -> Vec<(String, String)> {
        self.covers
            .iter()
            .map(|&(a, b)| (self.elements[a].clone(), self.elements[b].clone()))
            .collect()
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile { elements: self.elements.clone(), covers: self.named_covers() }
    }

    /// Every upward-closed subset, each sorted; the list itself is sorted by
    /// size and then lexicographically. Exponential in the width of the poset.
    pub fn open_sets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        // Choose membership in reverse topological order; an element may join
        // only if everything above it already has.
        let order: Vec<usize> = self.topo.iter().rev().copied().collect();
        let mut mask = vec![false; self.len()];
        fn go(p: &Poset, order: &[usize], k: usize, mask: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if k == order.len() {
                out.push((0..mask.len()).filter(|&i| mask[i]).collect());
                return;
            }
            let a = order[k];
            go(p, order, k + 1, mask, out);
            if p.upper[a].iter().all(|&b| mask[b]) {
                mask[a] = true;
                go(p, order, k + 1, mask, out);
                mask[a] = false;
            }
        }
        go(self, &order, 0, &mut mask, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// GraphViz Hasse diagram, drawn bottom to top.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {} {{", dot_id(name));
        let _ = writeln!(s, "  rankdir=BT;");
        for e in &self.elements {
            let _ = writeln!(s, "  {};", dot_id(e));
        }
        for (a, b) in self.named_covers() {
            let _ = writeln!(s, "  {} -> {};", dot_id(&a), dot_id(&b));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn topological_order(upper: &[Vec<usize>], lower: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = upper.len();
    let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for &b in &upper[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&i| indeg[i] > 0).collect())
    }
}

fn reachability(upper: &[Vec<usize>], topo: &[usize]) -> Vec<Vec<bool>> {
    let n = upper.len();
    let mut leq = vec![vec![false; n]; n];
    for &a in topo.iter().rev() {
        leq[a][a] = true;
        for &b in &upper[a] {
            let (row_a, row_b) = if a < b {
                let (lo, hi) = leq.split_at_mut(b);
                (&mut lo[a], &hi[0])
            } else {
                let (lo, hi) = leq.split_at_mut(a);
                (&mut hi[0], &lo[b])
            };
            for c in 0..n {
                row_a[c] |= row_b[c];
            }
        }
    }
    leq
}

/// A monotone map between finite posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Poset,
    target: Poset,
    assignment: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Poset, target: Poset, assignment: Vec<usize>) -> Result<Self, PosetError> {
        assert_eq!(assignment.len(), source.len());
        for &(a, b) in source.covers() {
            if !target.leq(assignment[a], assignment[b]) {
                return Err(PosetError::NotMonotone {
                    a: source.name(a).to_string(),
                    b: source.name(b).to_string(),
                });
            }
        }
        Ok(Self { source, target, assignment })
    }

    pub fn from_names(
        source: Poset,
        target: Poset,
        assignment: &HashMap<String, String>,
    ) -> Result<Self, PosetError> {
        let mut v = Vec::with_capacity(source.len());
        for e in source.elements() {
            let img = assignment.get(e).ok_or_else(|| PosetError::MissingAssignment(e.clone()))?;
            v.push(target.require(img)?);
        }
        Self::new(source, target, v)
    }

    pub fn identity(p: &Poset) -> Self {
        Self { source: p.clone(), target: p.clone(), assignment: (0..p.len()).collect() }
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.assignment[a]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// An order embedding of a poset into an ambient one, matched by element id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    sub: Poset,
    ambient: Poset,
    embed: Vec<usize>,
}

impl Inclusion {
    pub fn new(sub: Poset, ambient: Poset) -> Result<Self, PosetError> {
        let embed = sub.elements().iter().map(|e| ambient.require(e)).collect::<Result<Vec<_>, _>>()?;
        for a in 0..sub.len() {
            for b in 0..sub.len() {
                if sub.leq(a, b) != ambient.leq(embed[a], embed[b]) {
                    return Err(PosetError::OrderMismatch {
                        level: 0,
                        a: sub.name(a).to_string(),
                        b: sub.name(b).to_string(),
                    });
                }
            }
        }
        Ok(Self { sub, ambient, embed })
    }

    /// Inclusion of the induced subposet on `members`.
    pub fn of_subset(ambient: &Poset, members: &[usize]) -> Self {
        let sub = ambient.induced(members);
        Self::new(sub, ambient.clone()).expect("induced subposet embeds")
    }

    pub fn identity(p: &Poset) -> Self {
        Self { sub: p.clone(), ambient: p.clone(), embed: (0..p.len()).collect() }
    }

    pub fn sub(&self) -> &Poset {
        &self.sub
    }

    pub fn ambient(&self) -> &Poset {
        &self.ambient
    }

    pub fn embed(&self, a: usize) -> usize {
        self.embed[a]
    }

    /// Ambient index to sub index.
    pub fn preimage(&self, q: usize) -> Option<usize> {
        self.sub.index_of(self.ambient.name(q))
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.embed.clone();
        v.sort_unstable();
        v
    }

    pub fn is_downward_closed(&self) -> bool {
        self.ambient.is_down_closed(&self.image())
    }

    pub fn is_upward_closed(&self) -> bool {
        self.ambient.is_up_closed(&self.image())
    }

    pub fn as_map(&self) -> MonotoneMap {
        MonotoneMap { source: self.sub.clone(), target: self.ambient.clone(), assignment: self.embed.clone() }
    }
}

/// An open set of the Alexandrov topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpwardClosedSet {
    poset: Poset,
    members: Vec<usize>,
}

impl UpwardClosedSet {
    pub fn new<S: AsRef<str>>(poset: Poset, members: &[S]) -> Result<Self, PosetError> {
        let mut idx = poset.indices(members)?;
        idx.sort_unstable();
        idx.dedup();
        if let Some((a, b)) = poset.up_closure_violation(&idx) {
            return Err(PosetError::NotUpwardClosed {
                member: poset.name(a).to_string(),
                above: poset.name(b).to_string(),
            });
        }
        Ok(Self { poset, members: idx })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }
}

/// Finite presentation `A_0 ⊆ A_1 ⊆ ... ⊆ A_N` of an ω-stratified poset: each
/// level is finite and downward closed in the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiltrationFile", into = "FiltrationFile")]
pub struct OmegaFiltration {
    levels: Vec<Poset>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiltrationFile {
    pub levels: Vec<PosetFile>,
}

impl TryFrom<FiltrationFile> for OmegaFiltration {
    type Error = PosetError;

    fn try_from(f: FiltrationFile) -> Result<Self, PosetError> {
        let levels = f.levels.into_iter().map(Poset::try_from).collect::<Result<Vec<_>, _>>()?;
        Self::new(levels)
    }
}

impl From<OmegaFiltration> for FiltrationFile {
    fn from(f: OmegaFiltration) -> Self {
        FiltrationFile { levels: f.levels.iter().map(Poset::to_file).collect() }
    }
}

impl OmegaFiltration {
    /// Certifies that each level sits inside the next as a downward-closed
    /// subposet; reports the first violation in level/id order otherwise.
    pub fn new(levels: Vec<Poset>) -> Result<Self, PosetError> {
        if levels.is_empty() {
            return Err(PosetError::EmptyFiltration);
        }
        for (n, w) in levels.windows(2).enumerate() {
            let (small, big) = (&w[0], &w[1]);
            for a in small.elements() {
                if !big.contains(a) {
                    return Err(PosetError::UnknownElement(a.clone()));
                }
            }
            for (i, a) in small.elements().iter().enumerate() {
                let ia = big.index_of(a).unwrap();
                for (j, b) in small.elements().iter().enumerate() {
                    let ib = big.index_of(b).unwrap();
                    if small.leq(i, j) != big.leq(ia, ib) {
                        return Err(PosetError::OrderMismatch { level: n, a: a.clone(), b: b.clone() });
                    }
                }
            }
            for a in small.elements() {
                let ia = big.index_of(a).unwrap();
                for below in big.down_set(ia) {
                    let b = big.name(below);
                    if !small.contains(b) {
                        return Err(PosetError::NotDownwardClosed {
                            level: n,
                            above: a.clone(),
                            below: b.to_string(),
                        });
                    }
                }
            }
        }
        Ok(Self { levels })
    }

    /// Levels `{0}, {0<1}, ..., {0<...<n}` of ω.
    pub fn omega_truncations(n: usize) -> Self {
        Self::new((1..=n + 1).map(Poset::chain).collect()).expect("truncations of ω")
    }

    /// Levels of `ω_* = {0} ⊔ {1 < 2 < ...}`: level `k` is `{0} ⊔ {1 < ... < k}`.
    pub fn omega_star_truncations(n: usize) -> Self {
        Self::new((0..=n).map(omega_star).collect()).expect("truncations of ω_*")
    }

    pub fn single(p: Poset) -> Self {
        Self { levels: vec![p] }
    }

    /// Levels given as element subsets of a top poset, each inducing its order.
    pub fn from_members(top: &Poset, members: &[Vec<usize>]) -> Result<Self, PosetError> {
        let mut levels: Vec<Poset> = members.iter().map(|m| top.induced(m)).collect();
        levels.push(top.clone());
        Self::new(levels)
    }

    pub fn levels(&self) -> &[Poset] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> &Poset {
        self.levels.last().expect("nonempty")
    }

    /// Least level containing `name`.
    pub fn level_of(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.contains(name))
    }

    /// Inclusion of level `n` into the top level.
    pub fn inclusion(&self, n: usize) -> Inclusion {
        Inclusion::new(self.levels[n].clone(), self.top().clone()).expect("validated filtration")
    }

    /// Inclusion of level `n` into level `n + 1`.
    pub fn step(&self, n: usize) -> Inclusion {
        Inclusion::new(self.levels[n].clone(), self.levels[n + 1].clone()).expect("validated filtration")
    }
}

/// Every poset on `n` elements `0..n` whose order extends the natural order
/// of the ids. Each isomorphism class appears at least once.
pub fn naturally_labeled_posets(n: usize) -> Vec<Poset> {
    fn go(j: usize, n: usize, below: &mut Vec<Vec<bool>>, out: &mut Vec<Poset>) {
        if j == n {
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let leq = |a: &str, b: &str| {
                let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
                a == b || (a < b && below[b][a])
            };
            out.push(Poset::from_order(names, leq).expect("closed by construction"));
            return;
        }
        // the strict down-set of j: any down-closed subset of 0..j
        for mask in 0u64..(1 << j) {
            let set: Vec<bool> = (0..j).map(|i| mask >> i & 1 == 1).collect();
            let closed = (0..j).all(|a| !set[a] || (0..a).all(|b| !below[a][b] || set[b]));
            if closed {
                below.push(set);
                go(j + 1, n, below, out);
                below.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// The truncation `{0} ⊔ {1 < ... < k}` of ω_*, with 0 isolated.
pub fn omega_star(k: usize) -> Poset {
    let els: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
    let covers: Vec<(String, String)> = (2..=k).map(|i| ((i - 1).to_string(), i.to_string())).collect();
    Poset::new(els, covers).expect("ω_* truncation")
}
