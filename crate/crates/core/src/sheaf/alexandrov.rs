//! Sheaves on the Alexandrov topology of a finite poset (opens are the
//! upward-closed sets) and their comparison with functors on the poset.
//!
//! A presheaf is stored as a functor on the lattice of opens ordered by
//! reverse inclusion, so that restriction `U -> V` for `V ⊆ U` is the map
//! along `U <= V`. Only the lattice covers, `|U \ V| = 1`, carry data.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::functor::{SheafFile, SheafFunctor, TransitionFile, ValueFile};
use super::hom::{judge, NatTrans, RoundTripReport};
use super::limits::limit_over;
use super::value::{Morphism, Value, ValueKind};
use super::SheafError;
use crate::linalg::Matrix;
use crate::poset::{Poset, PosetFile};

#[derive(Debug, Clone, PartialEq)]
pub struct AlexandrovSheaf {
    base: Poset,
    /// Members of each open, indexed like the elements of `lattice.base()`.
    opens: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    lattice: SheafFunctor,
}

/// The members of an open as a JSON array in base order, e.g. `["a","b"]`;
/// unambiguous whatever the element names are.
pub fn open_name(base: &Poset, members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&a| base.name(a)).collect();
    serde_json::to_string(&names).expect("strings serialize")
}

/// The opens of `base` ordered by reverse inclusion, with members listed
/// per lattice element.
pub fn open_lattice(base: &Poset) -> (Poset, Vec<Vec<usize>>) {
    let opens = base.open_sets();
    let names: Vec<String> = opens.iter().map(|u| open_name(base, u)).collect();
    let index: HashMap<&[usize], usize> = opens.iter().enumerate().map(|(i, u)| (u.as_slice(), i)).collect();
    let mut covers = Vec::new();
    for (i, u) in opens.iter().enumerate() {
        for k in 0..u.len() {
            let mut v = u.clone();
            v.remove(k);
            if let Some(&j) = index.get(v.as_slice()) {
                covers.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let lattice = Poset::new(names.clone(), covers).expect("inclusion order on opens");
    let mut by_lattice = vec![Vec::new(); opens.len()];
    for (i, u) in opens.into_iter().enumerate() {
        by_lattice[lattice.index_of(&names[i]).unwrap()] = u;
    }
    (lattice, by_lattice)
}

impl AlexandrovSheaf {
    /// Wraps a functor on the open lattice of `base` (as built by
    /// [`open_lattice`]). Presheaf functoriality is checked by the functor.
    pub fn from_lattice_functor(base: Poset, lattice: SheafFunctor) -> Result<Self, SheafError> {
        let (expected, opens) = open_lattice(&base);
        if lattice.base() != &expected {
            return Err(SheafError::BaseMismatch);
        }
        let lookup = opens.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        Ok(Self { base, opens, lookup, lattice })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn kind(&self) -> ValueKind {
        self.lattice.kind()
    }

    /// The underlying functor on the lattice of opens.
    pub fn lattice(&self) -> &SheafFunctor {
        &self.lattice
    }

    pub fn opens(&self) -> &[Vec<usize>] {
        &self.opens
    }

    fn open_index(&self, members: &[usize]) -> usize {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        *self.lookup.get(&m).unwrap_or_else(|| panic!("{} is not open", open_name(&self.base, &m)))
    }

    /// Sections over an open given by its members. Panics on non-opens.
    pub fn sections(&self, members: &[usize]) -> &Value {
        self.lattice.value(self.open_index(members))
    }

    /// Restriction from `u` to an open `v ⊆ u`.
    pub fn restriction(&self, u: &[usize], v: &[usize]) -> &Morphism {
        self.lattice.map(self.open_index(u), self.open_index(v))
    }

    pub fn to_file(&self) -> AlexandrovFile {
        let lat = self.lattice.to_file();
        let members_of = |name: &str| -> Vec<String> {
            let i = self.lattice.base().index_of(name).unwrap();
            self.opens[i].iter().map(|&a| self.base.name(a).to_string()).collect()
        };
        let sections = lat.values.into_iter().map(|(name, value)| SectionFile { open: members_of(&name), value }).collect();
        let restrictions = lat
            .transitions
            .into_iter()
            .map(|t| RestrictionFile { from: members_of(&t.from), to: members_of(&t.to), map: t.map, matrix: t.matrix })
            .collect();
        AlexandrovFile { poset: self.base.to_file(), kind: Some(self.kind()), sections, restrictions }
    }
}

/// On-disk form of an [`AlexandrovSheaf`]: sections per open and the
/// restrictions that drop a single element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlexandrovFile {
    pub poset: PosetFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ValueKind>,
    pub sections: Vec<SectionFile>,
    #[serde(default)]
    pub restrictions: Vec<RestrictionFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionFile {
    pub open: Vec<String>,
    pub value: ValueFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionFile {
    pub from: Vec<String>,
    pub to: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

impl TryFrom<AlexandrovFile> for AlexandrovSheaf {
    type Error = SheafError;

    fn try_from(f: AlexandrovFile) -> Result<Self, SheafError> {
        let base = Poset::try_from(f.poset)?;
        let (lattice, _) = open_lattice(&base);
        let name_of = |members: &[String]| -> Result<String, SheafError> {
            let mut idx = base.indices(members)?;
            idx.sort_unstable();
            idx.dedup();
            if !base.is_up_closed(&idx) {
                return Err(SheafError::Malformed(format!("{} is not open", open_name(&base, &idx))));
            }
            Ok(open_name(&base, &idx))
        };
        let mut values = BTreeMap::new();
        for s in f.sections {
            if values.insert(name_of(&s.open)?, s.value).is_some() {
                return Err(SheafError::Malformed(format!("sections over {:?} given twice", s.open)));
            }
        }
        let transitions = f
            .restrictions
            .into_iter()
            .map(|r| {
                Ok(TransitionFile { from: name_of(&r.from)?, to: name_of(&r.to)?, map: r.map, matrix: r.matrix })
            })
            .collect::<Result<Vec<_>, SheafError>>()?;
        let functor =
            SheafFunctor::try_from(SheafFile { poset: lattice.to_file(), kind: f.kind, values, transitions })?;
        AlexandrovSheaf::from_lattice_functor(base, functor)
    }
}

impl Serialize for AlexandrovSheaf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlexandrovSheaf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = AlexandrovFile::deserialize(d)?;
        AlexandrovSheaf::try_from(f).map_err(serde::de::Error::custom)
    }
}

/// Sections over `U` are the limit of `f` over the members of `U`.
pub fn sheaf_from_functor(f: &SheafFunctor) -> AlexandrovSheaf {
    let base = f.base().clone();
    let (lattice, opens) = open_lattice(&base);
    let limits: Vec<_> = opens.iter().map(|u| limit_over(f, u)).collect();
    let values = limits.iter().map(|l| l.value().clone()).collect();
    let transitions =
        lattice.covers().iter().map(|&(u, v)| ((u, v), limits[u].restriction_to(f, &limits[v]))).collect();
    let functor = SheafFunctor::with_kind(lattice, f.kind(), values, transitions).expect("restrictions compose");
    AlexandrovSheaf::from_lattice_functor(base, functor).expect("lattice built from the same base")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SheafinessReport {
    Ok,
    Violation { open: Vec<String>, reason: String },
}

impl SheafinessReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, SheafinessReport::Ok)
    }
}

/// For every open `U`, restriction to the principal opens `U_a = {b >= a}`,
/// `a ∈ U`, must be a bijection onto the families that agree on the
/// pairwise intersections. Opens are visited smallest first.
pub fn sheafiness_check(s: &AlexandrovSheaf) -> SheafinessReport {
    let base = s.base();
    let mut order: Vec<usize> = (0..s.opens.len()).collect();
    order.sort_by(|&i, &j| s.opens[i].len().cmp(&s.opens[j].len()).then_with(|| s.opens[i].cmp(&s.opens[j])));
    for i in order {
        let u = &s.opens[i];
        if let Err(reason) = check_open(s, u) {
            return SheafinessReport::Violation {
                open: u.iter().map(|&a| base.name(a).to_string()).collect(),
                reason,
            };
        }
    }
    SheafinessReport::Ok
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn check_open(s: &AlexandrovSheaf, u: &[usize]) -> Result<(), String> {
    let base = s.base();
    let principal: Vec<Vec<usize>> = u.iter().map(|&a| base.up_set(a)).collect();
    let total = s.sections(u).size();
    match s.kind() {
        ValueKind::Set => {
            let res: Vec<Vec<usize>> = principal
                .iter()
                .map(|ua| match s.restriction(u, ua) {
                    Morphism::Function(m) => m.clone(),
                    Morphism::Linear(_) => unreachable!(),
                })
                .collect();
            let families = compatible_families(s, &principal);
            let mut hit = vec![false; families.len()];
            let index: HashMap<&[usize], usize> =
                families.iter().enumerate().map(|(k, fam)| (fam.as_slice(), k)).collect();
            for x in 0..total {
                let fam: Vec<usize> = res.iter().map(|m| m[x]).collect();
                match index.get(fam.as_slice()) {
                    None => return Err("a section restricts to an incompatible family".into()),
                    Some(&k) if hit[k] => {
                        return Err(format!("two sections restrict to the same family ({total} sections)"))
                    }
                    Some(&k) => hit[k] = true,
                }
            }
            if hit.iter().any(|h| !h) {
                return Err(format!("{} compatible families but only {total} sections", families.len()));
            }
            Ok(())
        }
        ValueKind::Vect => {
            let dims: Vec<usize> = principal.iter().map(|ua| s.sections(ua).size()).collect();
            let width: usize = dims.iter().sum();
            let blocks: Vec<Matrix> = principal
                .iter()
                .map(|ua| match s.restriction(u, ua) {
                    Morphism::Linear(m) => m.clone(),
                    Morphism::Function(_) => unreachable!(),
                })
                .collect();
            let r = Matrix::vstack(&blocks, total);
            let mut diff_blocks = Vec::new();
            let mut off = vec![0; principal.len()];
            for k in 1..principal.len() {
                off[k] = off[k - 1] + dims[k - 1];
            }
            for i in 0..principal.len() {
                for j in i + 1..principal.len() {
                    let w = intersect(&principal[i], &principal[j]);
                    let (Morphism::Linear(ri), Morphism::Linear(rj)) =
                        (s.restriction(&principal[i], &w), s.restriction(&principal[j], &w))
                    else {
                        unreachable!()
                    };
                    let mut d = Matrix::zeros(ri.rows(), width);
                    for row in 0..ri.rows() {
                        for c in 0..dims[i] {
                            d[(row, off[i] + c)] += ri[(row, c)].clone();
                        }
                        for c in 0..dims[j] {
                            d[(row, off[j] + c)] -= rj[(row, c)].clone();
                        }
                    }
                    diff_blocks.push(d);
                }
            }
            let d = Matrix::vstack(&diff_blocks, width);
            let families = width - d.rank();
            if !d.mul(&r).is_zero() {
                return Err("a section restricts to an incompatible family".into());
            }
            if r.rank() < total {
                return Err(format!("restriction to the principal cover has a kernel ({total} sections)"));
            }
            if families != total {
                return Err(format!("compatible families have dimension {families}, sections {total}"));
            }
            Ok(())
        }
    }
}

/// Families `(x_a ∈ S(U_a))` agreeing on pairwise intersections.
fn compatible_families(s: &AlexandrovSheaf, principal: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(principal.len());
    fn go(s: &AlexandrovSheaf, principal: &[Vec<usize>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = current.len();
        if k == principal.len() {
            out.push(current.clone());
            return;
        }
        'candidate: for x in 0..s.sections(&principal[k]).size() {
            for (j, &y) in current.iter().enumerate() {
                let w = intersect(&principal[j], &principal[k]);
                let (Morphism::Function(mj), Morphism::Function(mk)) =
                    (s.restriction(&principal[j], &w), s.restriction(&principal[k], &w))
                else {
                    unreachable!()
                };
                if mj[y] != mk[x] {
                    continue 'candidate;
                }
            }
            current.push(x);
            go(s, principal, current, out);
            current.pop();
        }
    }
    go(s, principal, &mut current, &mut out);
    out
}

/// Stalk at `a` is the sections over `U_a`; the map for `a <= b` is the
/// restriction `U_a ⊇ U_b`. Fails on presheaves that are not sheaves.
pub fn functor_from_sheaf(s: &AlexandrovSheaf) -> Result<SheafFunctor, SheafError> {
    if let SheafinessReport::Violation { open, reason } = sheafiness_check(s) {
        return Err(SheafError::SheafConditionViolated { open: serde_json::to_string(&open).expect("strings serialize"), reason });
    }
    let base = s.base();
    let ups: Vec<Vec<usize>> = (0..base.len()).map(|a| base.up_set(a)).collect();
    let values = ups.iter().map(|u| s.sections(u).clone()).collect();
    let transitions = base.covers().iter().map(|&(a, b)| ((a, b), s.restriction(&ups[a], &ups[b]).clone())).collect();
    SheafFunctor::with_kind(base.clone(), s.kind(), values, transitions)
}

/// `F -> functor_from_sheaf(sheaf_from_functor(F))`, componentwise the
/// cone `F(a) -> lim_{U_a} F` given by the maps of `F`.
pub fn functor_round_trip(f: &SheafFunctor) -> Result<RoundTripReport, SheafError> {
    let g = functor_from_sheaf(&sheaf_from_functor(f))?;
    let p = f.base();
    let comps = (0..p.len())
        .map(|a| {
            let lim = limit_over(f, &p.up_set(a));
            let legs: Vec<Morphism> = lim.shape().iter().map(|&s| f.map(a, s).clone()).collect();
            lim.factor(f.value(a), &legs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(judge(&NatTrans::new(comps), f, &g))
}

/// `S -> sheaf_from_functor(functor_from_sheaf(S))`, componentwise the
/// restrictions to the principal opens.
pub fn sheaf_round_trip(s: &AlexandrovSheaf) -> Result<RoundTripReport, SheafError> {
    let f = functor_from_sheaf(s)?;
    let t = sheaf_from_functor(&f);
    let base = s.base();
    let comps = s
        .opens
        .iter()
        .map(|u| {
            let lim = limit_over(&f, u);
            let legs: Vec<Morphism> = lim.shape().iter().map(|&a| s.restriction(u, &base.up_set(a)).clone()).collect();
            lim.factor(s.sections(u), &legs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(judge(&NatTrans::new(comps), s.lattice(), t.lattice()))
}
