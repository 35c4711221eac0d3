//! Natural transformations between functors on the same base.

use serde::Serialize;

use super::functor::SheafFunctor;
use super::value::{Morphism, ValueKind};
use super::SheafError;
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// Default bound on the number of morphisms [`enumerate_homs`] will list.
pub const DEFAULT_HOM_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTrans {
    components: Vec<Morphism>,
}

impl NatTrans {
    pub fn new(components: Vec<Morphism>) -> Self {
        Self { components }
    }

    pub fn identity(f: &SheafFunctor) -> Self {
        Self::new(f.values().iter().map(Morphism::identity).collect())
    }

    pub fn component(&self, a: usize) -> &Morphism {
        &self.components[a]
    }

    pub fn components(&self) -> &[Morphism] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NatTrans) -> NatTrans {
        NatTrans::new(self.components.iter().zip(&first.components).map(|(g, f)| g.after(f)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Morphism::is_identity)
    }

    /// First cover `(a, b)` where the naturality square fails, if any.
    pub fn naturality_failure(&self, f: &SheafFunctor, g: &SheafFunctor) -> Option<(usize, usize)> {
        if self.components.len() != f.base().len() {
            return Some((0, 0));
        }
        for a in 0..f.base().len() {
            if !self.components[a].fits(f.value(a), g.value(a)) {
                return Some((a, a));
            }
        }
        f.base().covers().iter().copied().find(|&(a, b)| {
            g.map(a, b).after(&self.components[a]) != self.components[b].after(f.map(a, b))
        })
    }

    pub fn is_natural(&self, f: &SheafFunctor, g: &SheafFunctor) -> bool {
        self.naturality_failure(f, g).is_none()
    }

    /// Componentwise bijective / invertible; `g` is the codomain.
    pub fn is_iso(&self, g: &SheafFunctor) -> bool {
        self.components.iter().enumerate().all(|(a, m)| m.is_iso(g.value(a)))
    }

    pub fn inverse(&self, g: &SheafFunctor) -> Option<NatTrans> {
        self.components
            .iter()
            .enumerate()
            .map(|(a, m)| m.inverse(g.value(a)))
            .collect::<Option<Vec<_>>>()
            .map(NatTrans::new)
    }

    /// Concatenated matrix entries, for linear independence checks.
    pub(crate) fn flatten(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for m in &self.components {
            if let Morphism::Linear(m) = m {
                for r in m.to_rows() {
                    out.extend(r);
                }
            }
        }
        out
    }
}

/// All natural transformations `f -> g` between SET functors, listed in a
/// deterministic order. Elements are visited in topological order and each
/// component is constrained by the squares over its lower covers.
pub fn enumerate_homs(f: &SheafFunctor, g: &SheafFunctor, cap: usize) -> Result<Vec<NatTrans>, SheafError> {
    if f.kind() != ValueKind::Set || g.kind() != ValueKind::Set {
        return Err(SheafError::WrongKind(ValueKind::Set));
    }
    if f.base() != g.base() {
        return Err(SheafError::BaseMismatch);
    }
    let p = f.base();
    let order = p.topological_order().to_vec();
    let mut current: Vec<Option<Vec<usize>>> = vec![None; p.len()];
    let mut out = Vec::new();

    struct Ctx<'a> {
        f: &'a SheafFunctor,
        g: &'a SheafFunctor,
        order: Vec<usize>,
        cap: usize,
    }

    fn go(
        ctx: &Ctx<'_>,
        k: usize,
        current: &mut Vec<Option<Vec<usize>>>,
        out: &mut Vec<NatTrans>,
    ) -> Result<(), SheafError> {
        if k == ctx.order.len() {
            if out.len() >= ctx.cap {
                return Err(SheafError::TooManyMorphisms(ctx.cap));
            }
            out.push(NatTrans::new(
                current.iter().map(|c| Morphism::Function(c.clone().unwrap())).collect(),
            ));
            return Ok(());
        }
        let b = ctx.order[k];
        let src = ctx.f.value(b).size();
        let dst = ctx.g.value(b).size();
        // η_b(F(c→b)(x)) = G(c→b)(η_c(x)) for every lower cover c
        let mut forced: Vec<Option<usize>> = vec![None; src];
        for &c in ctx.f.base().lower_covers(b) {
            let (Morphism::Function(fm), Morphism::Function(gm)) = (ctx.f.map(c, b), ctx.g.map(c, b)) else {
                unreachable!()
            };
            let eta_c = current[c].as_ref().expect("lower cover assigned first");
            for (x, &fx) in fm.iter().enumerate() {
                let want = gm[eta_c[x]];
                match forced[fx] {
                    None => forced[fx] = Some(want),
                    Some(w) if w == want => {}
                    Some(_) => return Ok(()),
                }
            }
        }
        let free: Vec<usize> = (0..src).filter(|&x| forced[x].is_none()).collect();
        if dst == 0 && !free.is_empty() {
            return Ok(());
        }
        let mut choice = vec![0usize; free.len()];
        loop {
            let mut comp: Vec<usize> = forced.iter().map(|v| v.unwrap_or(0)).collect();
            for (i, &x) in free.iter().enumerate() {
                comp[x] = choice[i];
            }
            current[b] = Some(comp);
            go(ctx, k + 1, current, out)?;
            // odometer over the free positions
            let mut i = free.len();
            loop {
                if i == 0 {
                    current[b] = None;
                    return Ok(());
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < dst {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    let ctx = Ctx { f, g, order, cap };
    go(&ctx, 0, &mut current, &mut out)?;
    Ok(out)
}

/// A basis of the space of natural transformations between VECT functors,
/// found as the kernel of the linear naturality system in the unknown
/// matrix entries.
pub fn hom_space(f: &SheafFunctor, g: &SheafFunctor) -> Result<Vec<NatTrans>, SheafError> {
    if f.kind() != ValueKind::Vect || g.kind() != ValueKind::Vect {
        return Err(SheafError::WrongKind(ValueKind::Vect));
    }
    if f.base() != g.base() {
        return Err(SheafError::BaseMismatch);
    }
    let p = f.base();
    let n = p.len();
    let (fd, gd): (Vec<usize>, Vec<usize>) = (0..n).map(|a| (f.value(a).size(), g.value(a).size())).unzip();
    let mut off = Vec::with_capacity(n);
    let mut unknowns = 0;
    for a in 0..n {
        off.push(unknowns);
        unknowns += gd[a] * fd[a];
    }
    // entry (r, c) of η_a is unknown off[a] + r * fd[a] + c
    let var = |a: usize, r: usize, c: usize| off[a] + r * fd[a] + c;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &(a, b) in p.covers() {
        let (Morphism::Linear(fm), Morphism::Linear(gm)) = (f.map(a, b), g.map(a, b)) else { unreachable!() };
        // (G η_a - η_b F)[r][c] = 0 for r < gd[b], c < fd[a]
        for r in 0..gd[b] {
            for c in 0..fd[a] {
                let mut row = vec![rational::zero(); unknowns];
                for k in 0..gd[a] {
                    row[var(a, k, c)] += gm[(r, k)].clone();
                }
                for k in 0..fd[b] {
                    row[var(b, r, k)] -= fm[(k, c)].clone();
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(rows, unknowns);
    let kernel = system.kernel();
    let basis = (0..kernel.basis.cols())
        .map(|j| {
            let v = kernel.basis.column(j);
            NatTrans::new(
                (0..n)
                    .map(|a| {
                        let mut m = Matrix::zeros(gd[a], fd[a]);
                        for r in 0..gd[a] {
                            for c in 0..fd[a] {
                                m[(r, c)] = v[var(a, r, c)].clone();
                            }
                        }
                        Morphism::Linear(m)
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(basis)
}

/// Rank of a family of VECT natural transformations viewed as vectors.
pub fn span_rank(family: &[NatTrans]) -> usize {
    if family.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = family.iter().map(NatTrans::flatten).collect();
    let cols = rows[0].len();
    Matrix::from_rows(rows, cols).rank()
}

/// Outcome of a round trip: the comparison map exists, is natural and is
/// an isomorphism, or the first element (or open) where it is not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RoundTripReport {
    Iso,
    Failure { at: String, reason: String },
}

impl RoundTripReport {
    pub fn is_iso(&self) -> bool {
        matches!(self, RoundTripReport::Iso)
    }
}

pub(crate) fn judge(eta: &NatTrans, src: &SheafFunctor, dst: &SheafFunctor) -> RoundTripReport {
    if let Some((a, b)) = eta.naturality_failure(src, dst) {
        let p = src.base();
        return RoundTripReport::Failure {
            at: format!("{} <= {}", p.name(a), p.name(b)),
            reason: "comparison map is not natural".into(),
        };
    }
    match (0..src.base().len()).find(|&a| !eta.component(a).is_iso(dst.value(a))) {
        Some(a) => RoundTripReport::Failure {
            at: src.base().name(a).to_string(),
            reason: "comparison map is not invertible".into(),
        },
        None => RoundTripReport::Iso,
    }
}
