use super::DevissageError;
use crate::poset::OmegaFiltration;
use crate::sheaf::{restrict, restrict_nat, Morphism, NatTrans, SheafFunctor};

/// Functors over each level of a filtration, with isomorphisms from stage
/// `n` to the restriction of stage `n + 1` to level `n`.
#[derive(Debug, Clone)]
pub struct SheafTower {
    filtration: OmegaFiltration,
    stages: Vec<SheafFunctor>,
    comparisons: Vec<NatTrans>,
}

/// A morphism of towers: one natural transformation per level, commuting
/// with the comparisons.
pub type TowerHom = Vec<NatTrans>;

impl SheafTower {
    pub fn new(
        filtration: OmegaFiltration,
        stages: Vec<SheafFunctor>,
        comparisons: Vec<NatTrans>,
    ) -> Result<Self, DevissageError> {
        let t = Self::new_unchecked(filtration, stages, comparisons)?;
        t.validate()?;
        Ok(t)
    }

    /// Checks only that stages sit over their levels; used to build faulty
    /// towers on purpose.
    pub(crate) fn new_unchecked(
        filtration: OmegaFiltration,
        stages: Vec<SheafFunctor>,
        comparisons: Vec<NatTrans>,
    ) -> Result<Self, DevissageError> {
        if stages.len() != filtration.len() || comparisons.len() + 1 != filtration.len() {
            return Err(DevissageError::StageMismatch { level: stages.len().min(filtration.len()) });
        }
        for (n, (s, l)) in stages.iter().zip(filtration.levels()).enumerate() {
            if s.base() != l {
                return Err(DevissageError::StageMismatch { level: n });
            }
        }
        Ok(Self { filtration, stages, comparisons })
    }

    /// Comparisons must be natural isomorphisms onto the restricted stages.
    pub fn validate(&self) -> Result<(), DevissageError> {
        for n in 0..self.comparisons.len() {
            let c = &self.comparisons[n];
            let (src, dst) = (&self.stages[n], self.restricted_next(n)?);
            let level = src.base();
            let bad = |a: usize, reason: &str| DevissageError::InvalidComparison {
                level: n,
                element: level.name(a).to_string(),
                reason: reason.into(),
            };
            if c.components().len() != level.len() {
                return Err(bad(0, "wrong number of components"));
            }
            for a in 0..level.len() {
                if !c.component(a).fits(src.value(a), dst.value(a)) {
                    return Err(bad(a, "component has the wrong shape"));
                }
                if !c.component(a).is_iso(dst.value(a)) {
                    return Err(bad(a, "component is not invertible"));
                }
            }
            if let Some((a, b)) = c.naturality_failure(src, &dst) {
                return Err(DevissageError::InvalidComparison {
                    level: n,
                    element: format!("{} <= {}", level.name(a), level.name(b)),
                    reason: "not natural".into(),
                });
            }
        }
        Ok(())
    }

    fn restricted_next(&self, n: usize) -> Result<SheafFunctor, DevissageError> {
        Ok(restrict(&self.stages[n + 1], &self.filtration.step(n))?)
    }

    pub fn filtration(&self) -> &OmegaFiltration {
        &self.filtration
    }

    pub fn stages(&self) -> &[SheafFunctor] {
        &self.stages
    }

    pub fn comparisons(&self) -> &[NatTrans] {
        &self.comparisons
    }

    /// Transport of stage `from`'s value at `a` to stage `to >= from` along
    /// the comparisons.
    pub fn transport(&self, a: &str, from: usize, to: usize) -> Morphism {
        let levels = self.filtration.levels();
        let start = levels[from].index_of(a).expect("element in the starting level");
        let mut m = Morphism::identity(self.stages[from].value(start));
        for n in from..to {
            let i = levels[n].index_of(a).unwrap();
            m = self.comparisons[n].component(i).after(&m);
        }
        m
    }

    /// Whether `fam` is a morphism of towers `self -> other`.
    pub fn is_hom(&self, other: &SheafTower, fam: &TowerHom) -> bool {
        if fam.len() != self.stages.len() {
            return false;
        }
        for n in 0..fam.len() {
            if !fam[n].is_natural(&self.stages[n], &other.stages[n]) {
                return false;
            }
        }
        (0..self.comparisons.len()).all(|n| {
            let step = self.filtration.step(n);
            restrict_nat(&fam[n + 1], &step).after(&self.comparisons[n]) == other.comparisons[n].after(&fam[n])
        })
    }
}

/// Stage `n` is the restriction of `f` to level `n`; comparisons are
/// identities.
pub fn restrict_tower(f: &SheafFunctor, filtration: &OmegaFiltration) -> Result<SheafTower, DevissageError> {
    if f.base() != filtration.top() {
        return Err(DevissageError::BaseMismatch);
    }
    let stages = (0..filtration.len())
        .map(|n| restrict(f, &filtration.inclusion(n)))
        .collect::<Result<Vec<_>, _>>()?;
    let comparisons = stages[..stages.len() - 1].iter().map(NatTrans::identity).collect();
    SheafTower::new(filtration.clone(), stages, comparisons)
}

/// The value at `a` is read at the least level containing `a`; the map for
/// `a <= b` transports `a` up to the level of `b` and applies that stage.
/// Levels are down-closed, so the level of `a` is at most that of `b`.
pub fn glue_tower(t: &SheafTower) -> Result<SheafFunctor, DevissageError> {
    t.validate()?;
    let f = &t.filtration;
    let top = f.top();
    let least: Vec<usize> = top.elements().iter().map(|a| f.level_of(a).expect("top contains all")).collect();
    let local = |a: usize| f.levels()[least[a]].index_of(top.name(a)).unwrap();
    let values = (0..top.len()).map(|a| t.stages[least[a]].value(local(a)).clone()).collect();
    let transitions = top
        .covers()
        .iter()
        .map(|&(a, b)| {
            let nb = least[b];
            let level = &f.levels()[nb];
            let (ia, ib) = (level.index_of(top.name(a)).unwrap(), level.index_of(top.name(b)).unwrap());
            let m = t.stages[nb].map(ia, ib).after(&t.transport(top.name(a), least[a], nb));
            ((a, b), m)
        })
        .collect();
    let kind = t.stages.last().map(|s| s.kind()).expect("nonempty tower");
    Ok(SheafFunctor::with_kind(top.clone(), kind, values, transitions)?)
}

/// `φ` restricted to every level.
pub fn restrict_hom(phi: &NatTrans, filtration: &OmegaFiltration) -> TowerHom {
    (0..filtration.len()).map(|n| restrict_nat(phi, &filtration.inclusion(n))).collect()
}

/// The morphism of glued functors: at `a`, the component of `fam` at the
/// least level containing `a`.
pub fn glue_hom(t: &SheafTower, fam: &TowerHom) -> NatTrans {
    let f = &t.filtration;
    let top = f.top();
    NatTrans::new(
        top.elements()
            .iter()
            .map(|a| {
                let n = f.level_of(a).unwrap();
                fam[n].component(f.levels()[n].index_of(a).unwrap()).clone()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use crate::random;
    use crate::sheaf::{SheafBuilder, Value, ValueKind};
    use crate::Matrix;

    fn dims_123() -> SheafFunctor {
        SheafBuilder::new(Poset::chain(3))
            .vect("0", 1)
            .unwrap()
            .vect("1", 2)
            .unwrap()
            .vect("2", 3)
            .unwrap()
            .matrix("0", "1", Matrix::from_i64(&[&[1], &[0]], 1))
            .unwrap()
            .matrix("1", "2", Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]], 2))
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn restriction_of_a_chain() {
        let t = restrict_tower(&dims_123(), &OmegaFiltration::omega_truncations(2)).unwrap();
        let dims: Vec<Vec<usize>> = t.stages().iter().map(|s| s.values().iter().map(Value::size).collect()).collect();
        assert_eq!(dims, vec![vec![1], vec![1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn one_level_is_the_functor() {
        let f = dims_123();
        let t = restrict_tower(&f, &OmegaFiltration::single(Poset::chain(3))).unwrap();
        assert_eq!(t.stages(), std::slice::from_ref(&f));
        assert_eq!(glue_tower(&t).unwrap(), f);
    }

    #[test]
    fn constant_stages() {
        let p = Poset::chain(3);
        let f = SheafFunctor::constant(p, Value::set(["x", "y"]));
        let t = restrict_tower(&f, &OmegaFiltration::omega_truncations(2)).unwrap();
        for s in t.stages() {
            assert!(s.values().iter().all(|v| v == &Value::set(["x", "y"])));
        }
    }

    #[test]
    fn base_mismatch() {
        let f = random::random_functor(&mut random::rng(0), &Poset::chain(2), ValueKind::Set, 2);
        assert!(matches!(
            restrict_tower(&f, &OmegaFiltration::omega_truncations(2)),
            Err(DevissageError::BaseMismatch)
        ));
    }

    #[test]
    fn twisted_comparisons_glue_through_transport() {
        // stage 0 is {x,y} at 0; stage 1 swaps the labels via its comparison
        let f = OmegaFiltration::omega_truncations(1);
        let s0 = SheafFunctor::constant(f.levels()[0].clone(), Value::set(["x", "y"]));
        let s1 = SheafBuilder::new(f.levels()[1].clone())
            .set("0", &["x", "y"])
            .unwrap()
            .set("1", &["u", "v"])
            .unwrap()
            .function("0", "1", &[("x", "u"), ("y", "v")])
            .unwrap()
            .build()
            .unwrap();
        let swap = NatTrans::new(vec![Morphism::Function(vec![1, 0])]);
        let t = SheafTower::new(f.clone(), vec![s0, s1], vec![swap]).unwrap();
        let g = glue_tower(&t).unwrap();
        // x at level 0 goes to y at level 1, then to v
        assert_eq!(g.map(0, 1), &Morphism::Function(vec![1, 0]));
    }

    #[test]
    fn non_invertible_comparison_is_refused() {
        let f = OmegaFiltration::omega_truncations(1);
        let s0 = SheafFunctor::constant(f.levels()[0].clone(), Value::set(["x", "y"]));
        let s1 = SheafFunctor::constant(f.levels()[1].clone(), Value::set(["x", "y"]));
        let collapse = NatTrans::new(vec![Morphism::Function(vec![0, 0])]);
        assert!(matches!(
            SheafTower::new(f, vec![s0, s1], vec![collapse]),
            Err(DevissageError::InvalidComparison { level: 0, .. })
        ));
    }
}
