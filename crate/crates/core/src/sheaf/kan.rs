//! Pullback along monotone maps and Kan extensions along inclusions.
//!
//! For a full inclusion `j: P ⊆ Q` the right Kan extension has value
//! `lim { F(p) : q <= p }` at `q`, the left one `colim { F(p) : p <= q }`.
//! At points of `P` both comma sets have an extremal element, and the value
//! is taken to be `F(q)` itself so that restricting back gives `F` on the nose.

use std::collections::BTreeMap;

use super::functor::SheafFunctor;
use super::hom::NatTrans;
use super::limits::{colimit_over, limit_over, Colimit, Limit};
use super::value::{Morphism, Value};
use super::SheafError;
use crate::poset::{Inclusion, MonotoneMap};

/// Precomposition `F ∘ f`.
pub fn pullback(f: &SheafFunctor, map: &MonotoneMap) -> Result<SheafFunctor, SheafError> {
    if map.target() != f.base() {
        return Err(SheafError::BaseMismatch);
    }
    let src = map.source();
    let values: Vec<Value> = (0..src.len()).map(|p| f.value(map.apply(p)).clone()).collect();
    let transitions: BTreeMap<_, _> =
        src.covers().iter().map(|&(a, b)| ((a, b), f.map(map.apply(a), map.apply(b)).clone())).collect();
    SheafFunctor::with_kind(src.clone(), f.kind(), values, transitions)
}

/// Restriction along an inclusion, `j^*`.
pub fn restrict(f: &SheafFunctor, inc: &Inclusion) -> Result<SheafFunctor, SheafError> {
    pullback(f, &inc.as_map())
}

/// `j^*` on a natural transformation.
pub fn restrict_nat(eta: &NatTrans, inc: &Inclusion) -> NatTrans {
    NatTrans::new((0..inc.sub().len()).map(|p| eta.component(inc.embed(p)).clone()).collect())
}

#[derive(Debug, Clone)]
enum Node {
    Direct(usize),
    Lim(Limit),
    Colim(Colimit),
}

/// A Kan extension together with the cone data that produced it, so that
/// units, counits and the action on morphisms can be computed.
#[derive(Debug, Clone)]
pub struct KanExtension {
    inc: Inclusion,
    source: SheafFunctor,
    nodes: Vec<Node>,
    result: SheafFunctor,
}

impl KanExtension {
    pub fn functor(&self) -> &SheafFunctor {
        &self.result
    }

    pub fn into_functor(self) -> SheafFunctor {
        self.result
    }

    pub fn inclusion(&self) -> &Inclusion {
        &self.inc
    }

    /// Right extensions: the leg `value(q) -> F(s)` for `s` in the comma set of `q`.
    fn project(&self, q: usize, s: usize) -> Morphism {
        match &self.nodes[q] {
            Node::Direct(p) => self.source.map(*p, s).clone(),
            Node::Lim(l) => l.projection(&self.source, s),
            Node::Colim(_) => unreachable!("projection from a left extension"),
        }
    }

    /// Right extensions: factor a cone `src -> F(s)` through `value(q)`.
    fn cone_to(&self, q: usize, src: &Value, leg: impl Fn(usize) -> Morphism) -> Result<Morphism, SheafError> {
        match &self.nodes[q] {
            Node::Direct(p) => Ok(leg(*p)),
            Node::Lim(l) => {
                let legs: Vec<Morphism> = l.shape().iter().map(|&s| leg(s)).collect();
                l.factor(src, &legs)
            }
            Node::Colim(_) => unreachable!("cone into a left extension"),
        }
    }

    /// Left extensions: the leg `F(s) -> value(q)` for `s` in the comma set of `q`.
    fn inject(&self, q: usize, s: usize) -> Morphism {
        match &self.nodes[q] {
            Node::Direct(p) => self.source.map(s, *p).clone(),
            Node::Colim(c) => c.injection(&self.source, s),
            Node::Lim(_) => unreachable!("injection into a right extension"),
        }
    }

    /// Left extensions: factor a cocone `F(s) -> dst` through `value(q)`.
    fn cocone_from(&self, q: usize, dst: &Value, leg: impl Fn(usize) -> Morphism) -> Result<Morphism, SheafError> {
        match &self.nodes[q] {
            Node::Direct(p) => Ok(leg(*p)),
            Node::Colim(c) => {
                let legs: Vec<Morphism> = c.shape().iter().map(|&s| leg(s)).collect();
                c.factor(&self.source, dst, &legs)
            }
            Node::Lim(_) => unreachable!("cocone out of a right extension"),
        }
    }

    fn is_right(&self) -> bool {
        !self.nodes.iter().any(|n| matches!(n, Node::Colim(_)))
    }

    /// Unit of `j^* ⊣ j_*` at `g`: `g -> j_* j^* g`, where `self = j_* j^* g`.
    pub fn right_unit(&self, g: &SheafFunctor) -> Result<NatTrans, SheafError> {
        debug_assert!(self.is_right());
        let amb = self.inc.ambient();
        let comps = (0..amb.len())
            .map(|q| self.cone_to(q, g.value(q), |s| g.map(q, self.inc.embed(s)).clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NatTrans::new(comps))
    }

    /// Counit of `j^* ⊣ j_*`: `j^* j_* F -> F`.
    pub fn right_counit(&self) -> NatTrans {
        NatTrans::new((0..self.inc.sub().len()).map(|p| self.project(self.inc.embed(p), p)).collect())
    }

    /// `j_*` on `phi: F -> F'`, with `self = j_* F` and `other = j_* F'`.
    pub fn right_map(&self, other: &KanExtension, phi: &NatTrans) -> Result<NatTrans, SheafError> {
        let amb = self.inc.ambient();
        let comps = (0..amb.len())
            .map(|q| {
                other.cone_to(q, self.result.value(q), |s| phi.component(s).after(&self.project(q, s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NatTrans::new(comps))
    }

    /// Unit of `j_! ⊣ j^*`: `F -> j^* j_! F`.
    pub fn left_unit(&self) -> NatTrans {
        NatTrans::new((0..self.inc.sub().len()).map(|p| self.inject(self.inc.embed(p), p)).collect())
    }

    /// Counit of `j_! ⊣ j^*` at `g`: `j_! j^* g -> g`, where `self = j_! j^* g`.
    pub fn left_counit(&self, g: &SheafFunctor) -> Result<NatTrans, SheafError> {
        let amb = self.inc.ambient();
        let comps = (0..amb.len())
            .map(|q| self.cocone_from(q, g.value(q), |s| g.map(self.inc.embed(s), q).clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NatTrans::new(comps))
    }

    /// `j_!` on `phi: F -> F'`, with `self = j_! F` and `other = j_! F'`.
    pub fn left_map(&self, other: &KanExtension, phi: &NatTrans) -> Result<NatTrans, SheafError> {
        let amb = self.inc.ambient();
        let comps = (0..amb.len())
            .map(|q| {
                self.cocone_from(q, other.result.value(q), |s| other.inject(q, s).after(phi.component(s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NatTrans::new(comps))
    }
}

fn check_base(f: &SheafFunctor, inc: &Inclusion) -> Result<(), SheafError> {
    if f.base() != inc.sub() {
        return Err(SheafError::BaseMismatch);
    }
    Ok(())
}

/// Right Kan extension along a full inclusion, with no closedness requirement.
pub fn right_kan_extension(f: &SheafFunctor, inc: &Inclusion) -> Result<KanExtension, SheafError> {
    check_base(f, inc)?;
    let amb = inc.ambient();
    let sub = inc.sub();
    let nodes: Vec<Node> = (0..amb.len())
        .map(|q| match inc.preimage(q) {
            Some(p) => Node::Direct(p),
            None => {
                let comma: Vec<usize> = (0..sub.len()).filter(|&p| amb.leq(q, inc.embed(p))).collect();
                Node::Lim(limit_over(f, &comma))
            }
        })
        .collect();
    let mut ext = KanExtension {
        inc: inc.clone(),
        source: f.clone(),
        nodes,
        result: SheafFunctor::constant(crate::poset::Poset::empty(), Value::terminal(f.kind())),
    };
    let values: Vec<Value> = (0..amb.len())
        .map(|q| match &ext.nodes[q] {
            Node::Direct(p) => f.value(*p).clone(),
            Node::Lim(l) => l.value().clone(),
            Node::Colim(_) => unreachable!(),
        })
        .collect();
    let mut transitions = BTreeMap::new();
    for &(q, r) in amb.covers() {
        // comma(r) ⊆ comma(q), so the projections of q form a cone over comma(r)
        let m = ext.cone_to(r, &values[q], |s| ext.project(q, s))?;
        transitions.insert((q, r), m);
    }
    ext.result = SheafFunctor::with_kind(amb.clone(), f.kind(), values, transitions)?;
    Ok(ext)
}

/// Left Kan extension along a full inclusion, with no closedness requirement.
pub fn left_kan_extension(f: &SheafFunctor, inc: &Inclusion) -> Result<KanExtension, SheafError> {
    check_base(f, inc)?;
    let amb = inc.ambient();
    let sub = inc.sub();
    let nodes: Vec<Node> = (0..amb.len())
        .map(|q| match inc.preimage(q) {
            Some(p) => Node::Direct(p),
            None => {
                let comma: Vec<usize> = (0..sub.len()).filter(|&p| amb.leq(inc.embed(p), q)).collect();
                Node::Colim(colimit_over(f, &comma))
            }
        })
        .collect();
    let mut ext = KanExtension {
        inc: inc.clone(),
        source: f.clone(),
        nodes,
        result: SheafFunctor::constant(crate::poset::Poset::empty(), Value::initial(f.kind())),
    };
    let values: Vec<Value> = (0..amb.len())
        .map(|q| match &ext.nodes[q] {
            Node::Direct(p) => f.value(*p).clone(),
            Node::Colim(c) => c.value().clone(),
            Node::Lim(_) => unreachable!(),
        })
        .collect();
    let mut transitions = BTreeMap::new();
    for &(q, r) in amb.covers() {
        // comma(q) ⊆ comma(r)
        let m = ext.cocone_from(q, &values[r], |s| ext.inject(r, s))?;
        transitions.insert((q, r), m);
    }
    ext.result = SheafFunctor::with_kind(amb.clone(), f.kind(), values, transitions)?;
    Ok(ext)
}

/// `j_*` along a downward-closed inclusion. Outside the subposet the comma
/// set is empty and the value is terminal.
pub fn pushforward_closed(f: &SheafFunctor, inc: &Inclusion) -> Result<SheafFunctor, SheafError> {
    Ok(pushforward_closed_ext(f, inc)?.into_functor())
}

pub fn pushforward_closed_ext(f: &SheafFunctor, inc: &Inclusion) -> Result<KanExtension, SheafError> {
    if !inc.is_downward_closed() {
        return Err(SheafError::NotDownwardClosed);
    }
    right_kan_extension(f, inc)
}

/// `j_!` along an upward-closed inclusion: extension by the initial value.
pub fn extension_open(f: &SheafFunctor, inc: &Inclusion) -> Result<SheafFunctor, SheafError> {
    Ok(extension_open_ext(f, inc)?.into_functor())
}

pub fn extension_open_ext(f: &SheafFunctor, inc: &Inclusion) -> Result<KanExtension, SheafError> {
    if !inc.is_upward_closed() {
        return Err(SheafError::NotUpwardClosed);
    }
    left_kan_extension(f, inc)
}
