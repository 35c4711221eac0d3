//! Category of elements of a SET functor and its inverse on discrete left
//! fibrations.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::functor::SheafFunctor;
use super::hom::{judge, NatTrans, RoundTripReport};
use super::value::{Morphism, Value, ValueKind};
use super::SheafError;
use crate::poset::{dot_id, MonotoneMap, Poset, PosetFile};

/// A monotone map `total -> base`. Validity as a discrete left fibration is
/// checked by [`ElementFibration::validate`], not on construction, so that
/// invalid inputs can be reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementFibration {
    projection: MonotoneMap,
}

impl ElementFibration {
    pub fn new(projection: MonotoneMap) -> Self {
        Self { projection }
    }

    pub fn total(&self) -> &Poset {
        self.projection.source()
    }

    pub fn base(&self) -> &Poset {
        self.projection.target()
    }

    pub fn projection(&self) -> &MonotoneMap {
        &self.projection
    }

    /// Total elements over `a`, in total order.
    pub fn fiber(&self, a: usize) -> Vec<usize> {
        (0..self.total().len()).filter(|&e| self.projection.apply(e) == a).collect()
    }

    /// The unique `e' >= e` over `b`, for `π(e) <= b`.
    fn lift(&self, e: usize, b: usize) -> Result<usize, SheafError> {
        let over: Vec<usize> = self.fiber(b).into_iter().filter(|&x| self.total().leq(e, x)).collect();
        match over.as_slice() {
            [x] => Ok(*x),
            _ => Err(SheafError::NotLeftFibration {
                element: self.total().name(e).to_string(),
                over: self.base().name(b).to_string(),
            }),
        }
    }

    /// Every `e` over `a` and every `b >= a` admit exactly one `e' >= e`
    /// over `b` (for `b = a` this says fibers are discrete).
    pub fn validate(&self) -> Result<(), SheafError> {
        for e in 0..self.total().len() {
            let a = self.projection.apply(e);
            for b in self.base().up_set(a) {
                self.lift(e, b)?;
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> FibrationFile {
        FibrationFile {
            total: self.total().to_file(),
            base: self.base().to_file(),
            projection: (0..self.total().len())
                .map(|e| (self.total().name(e).to_string(), self.base().name(self.projection.apply(e)).to_string()))
                .collect(),
        }
    }

    /// Hasse diagram of the total poset with one cluster per fiber.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {} {{", dot_id(name));
        let _ = writeln!(s, "  rankdir=BT;");
        for a in 0..self.base().len() {
            let _ = writeln!(s, "  subgraph {} {{", dot_id(&format!("cluster_{}", self.base().name(a))));
            let _ = writeln!(s, "    label={};", dot_id(&format!("fiber over {}", self.base().name(a))));
            for e in self.fiber(a) {
                let _ = writeln!(s, "    {};", dot_id(self.total().name(e)));
            }
            s.push_str("  }\n");
        }
        for (x, y) in self.total().named_covers() {
            let _ = writeln!(s, "  {} -> {};", dot_id(&x), dot_id(&y));
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk form: both posets and the projection as an element-to-element map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FibrationFile {
    pub total: PosetFile,
    pub base: PosetFile,
    pub projection: std::collections::BTreeMap<String, String>,
}

impl TryFrom<FibrationFile> for ElementFibration {
    type Error = SheafError;

    fn try_from(f: FibrationFile) -> Result<Self, SheafError> {
        let total = Poset::try_from(f.total)?;
        let base = Poset::try_from(f.base)?;
        let assignment: HashMap<String, String> = f.projection.into_iter().collect();
        Ok(Self::new(MonotoneMap::from_names(total, base, &assignment)?))
    }
}

impl Serialize for ElementFibration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ElementFibration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ElementFibration::try_from(FibrationFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `(a,x)` for `x ∈ F(a)`.
pub fn element_name(a: &str, x: &str) -> String {
    format!("({a},{x})")
}

/// Total poset of pairs `(a, x)`, with `(a,x) <= (b,y)` iff `a <= b` and
/// `F(a <= b)(x) = y`; its covers lie over the covers of the base.
pub fn grothendieck(f: &SheafFunctor) -> Result<ElementFibration, SheafError> {
    if f.kind() != ValueKind::Set {
        return Err(SheafError::WrongKind(ValueKind::Set));
    }
    let base = f.base();
    let label = |a: usize, x: usize| element_name(base.name(a), &f.value(a).labels().unwrap()[x]);
    let mut names = Vec::new();
    let mut over = HashMap::new();
    for a in 0..base.len() {
        for x in 0..f.value(a).size() {
            names.push(label(a, x));
            over.insert(label(a, x), a);
        }
    }
    let mut covers = Vec::new();
    for &(a, b) in base.covers() {
        let Morphism::Function(m) = f.map(a, b) else { unreachable!() };
        for (x, &y) in m.iter().enumerate() {
            covers.push((label(a, x), label(b, y)));
        }
    }
    let total = Poset::new(names, covers).map_err(|e| SheafError::Malformed(format!("element names: {e}")))?;
    let assignment = (0..total.len()).map(|e| over[total.name(e)]).collect();
    Ok(ElementFibration::new(MonotoneMap::new(total, base.clone(), assignment)?))
}

/// Fibers become values (labelled by total element names) and the unique
/// lifts become the maps.
pub fn straighten(e: &ElementFibration) -> Result<SheafFunctor, SheafError> {
    e.validate()?;
    let base = e.base();
    let fibers: Vec<Vec<usize>> = (0..base.len()).map(|a| e.fiber(a)).collect();
    let values = fibers.iter().map(|fib| Value::set(fib.iter().map(|&x| e.total().name(x).to_string()))).collect();
    let mut transitions = std::collections::BTreeMap::new();
    for &(a, b) in base.covers() {
        let m = fibers[a]
            .iter()
            .map(|&x| {
                let y = e.lift(x, b)?;
                Ok(fibers[b].binary_search(&y).expect("lift lies in the fiber"))
            })
            .collect::<Result<Vec<_>, SheafError>>()?;
        transitions.insert((a, b), Morphism::Function(m));
    }
    SheafFunctor::with_kind(base.clone(), ValueKind::Set, values, transitions)
}

/// `F -> straighten(grothendieck(F))`, `x ↦ (a,x)`.
pub fn functor_fibration_round_trip(f: &SheafFunctor) -> Result<RoundTripReport, SheafError> {
    let g = straighten(&grothendieck(f)?)?;
    let p = f.base();
    let comps = (0..p.len())
        .map(|a| {
            let labels = f.value(a).labels().unwrap();
            let m = labels
                .iter()
                .map(|x| {
                    g.value(a)
                        .label_index(&element_name(p.name(a), x))
                        .ok_or_else(|| SheafError::Malformed(format!("no element over {} for {x}", p.name(a))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Morphism::Function(m))
        })
        .collect::<Result<Vec<_>, SheafError>>()?;
    Ok(judge(&NatTrans::new(comps), f, &g))
}

/// `E -> grothendieck(straighten(E))` over the base, `e ↦ (π(e), e)`; an
/// isomorphism iff it is a bijection preserving and reflecting the order.
pub fn fibration_round_trip(e: &ElementFibration) -> Result<RoundTripReport, SheafError> {
    let g = grothendieck(&straighten(e)?)?;
    let (src, dst) = (e.total(), g.total());
    let mut image = Vec::with_capacity(src.len());
    for x in 0..src.len() {
        let name = element_name(e.base().name(e.projection().apply(x)), src.name(x));
        match dst.index_of(&name) {
            Some(y) if g.projection().apply(y) == e.projection().apply(x) => image.push(y),
            _ => return Ok(RoundTripReport::Failure { at: src.name(x).to_string(), reason: "no image over the same base element".into() }),
        }
    }
    let mut seen = image.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != dst.len() {
        return Ok(RoundTripReport::Failure { at: String::new(), reason: "comparison map is not a bijection".into() });
    }
    for x in 0..src.len() {
        for y in 0..src.len() {
            if src.leq(x, y) != dst.leq(image[x], image[y]) {
                return Ok(RoundTripReport::Failure {
                    at: format!("{} <= {}", src.name(x), src.name(y)),
                    reason: "comparison map does not preserve and reflect the order".into(),
                });
            }
        }
    }
    Ok(RoundTripReport::Iso)
}
