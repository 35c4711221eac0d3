use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::tower::{glue_hom, glue_tower, restrict_hom, restrict_tower, SheafTower, TowerHom};
use crate::linalg::Matrix;
use crate::poset::OmegaFiltration;
use crate::random;
use crate::rational::{self, Rational};
use crate::sheaf::{
    enumerate_homs, hom_space, restrict_nat, Morphism, NatTrans, RoundTripReport, SheafFunctor, Value,
    ValueKind, DEFAULT_HOM_CAP,
};

#[derive(Debug, Clone, Serialize)]
pub struct DevissageConfig {
    pub samples: usize,
    pub seed: u64,
    pub kind: ValueKind,
    /// Largest set size or dimension of a random value.
    pub max_size: usize,
    /// Replace one comparison component per sample by a non-invertible map.
    pub corrupt: bool,
}

impl Default for DevissageConfig {
    fn default() -> Self {
        Self { samples: 100, seed: 0, kind: ValueKind::Set, max_size: 3, corrupt: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub sample: usize,
    /// Seed regenerating this sample alone.
    pub seed: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DevissageReport {
    pub config: DevissageConfig,
    pub levels: usize,
    pub top_size: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<SampleFailure>,
    /// Samples where a comparison could be corrupted (values of size >= 2).
    pub corrupted: usize,
    pub passed: bool,
}

const CHECKS: [&str; 4] = ["glue_after_restrict", "restrict_after_glue", "hom_bijection_restrict", "hom_bijection_glue"];

/// Runs every check on `config.samples` seeded instances in parallel.
/// Sample `i` uses seed `config.seed + i`, so results do not depend on
/// scheduling.
pub fn verify_devissage(filtration: &OmegaFiltration, config: &DevissageConfig) -> DevissageReport {
    let outcomes: Vec<(Vec<Result<(), String>>, bool)> = (0..config.samples)
        .into_par_iter()
        .map(|i| run_sample(filtration, config, config.seed.wrapping_add(i as u64)))
        .collect();
    let mut checks: Vec<CheckSummary> =
        CHECKS.iter().map(|c| CheckSummary { name: c.to_string(), passed: 0, failed: 0 }).collect();
    let mut failures = Vec::new();
    let mut corrupted = 0;
    for (i, (results, was_corrupted)) in outcomes.into_iter().enumerate() {
        corrupted += usize::from(was_corrupted);
        for (c, r) in results.into_iter().enumerate() {
            match r {
                Ok(()) => checks[c].passed += 1,
                Err(detail) => {
                    checks[c].failed += 1;
                    failures.push(SampleFailure {
                        sample: i,
                        seed: config.seed.wrapping_add(i as u64),
                        check: CHECKS[c].to_string(),
                        detail,
                    });
                }
            }
        }
    }
    DevissageReport {
        config: config.clone(),
        levels: filtration.len(),
        top_size: filtration.top().len(),
        checks,
        passed: failures.is_empty(),
        failures,
        corrupted,
    }
}

fn run_sample(filtration: &OmegaFiltration, config: &DevissageConfig, seed: u64) -> (Vec<Result<(), String>>, bool) {
    let mut rng = random::rng(seed);
    let top = filtration.top();
    let f = random::random_functor(&mut rng, top, config.kind, config.max_size);
    let g = random::random_functor(&mut rng, top, config.kind, config.max_size);
    let mut tower = random_tower(&mut rng, filtration, config.kind, config.max_size);
    let mut was_corrupted = false;
    if config.corrupt {
        if let Some(t) = corrupt(&tower) {
            tower = t;
            was_corrupted = true;
        }
    }
    let tf = twist(&mut rng, &restrict_tower(&f, filtration).expect("f lives over the top"));
    let tg = twist(&mut rng, &restrict_tower(&g, filtration).expect("g lives over the top"));
    let results = vec![
        glue_after_restrict(&f, filtration),
        restrict_after_glue(&tower),
        hom_bijection_restrict(&f, &g, filtration),
        hom_bijection_glue(&tf, &tg),
    ];
    (results, was_corrupted)
}

fn describe(r: RoundTripReport) -> Result<(), String> {
    match r {
        RoundTripReport::Iso => Ok(()),
        RoundTripReport::Failure { at, reason } => Err(format!("{reason} at {at}")),
    }
}

fn judge(eta: &NatTrans, src: &SheafFunctor, dst: &SheafFunctor) -> Result<(), String> {
    describe(crate::sheaf::hom::judge(eta, src, dst))
}

/// `glue(restrict F)` has the values of `F`; the identity components must
/// form a natural isomorphism to `F`.
fn glue_after_restrict(f: &SheafFunctor, filtration: &OmegaFiltration) -> Result<(), String> {
    let t = restrict_tower(f, filtration).map_err(|e| e.to_string())?;
    let glued = glue_tower(&t).map_err(|e| e.to_string())?;
    if glued.values() != f.values() {
        return Err("glued values differ from the original".into());
    }
    judge(&NatTrans::identity(f), &glued, f)
}

/// Stage `n` maps to level `n` of the glued functor by the inverse of the
/// transport from the least level of each element; this must be a natural
/// isomorphism at every level and a morphism of towers.
fn restrict_after_glue(t: &SheafTower) -> Result<(), String> {
    let glued = glue_tower(t).map_err(|e| e.to_string())?;
    let f = t.filtration();
    let back = restrict_tower(&glued, f).map_err(|e| e.to_string())?;
    let mut theta: TowerHom = Vec::with_capacity(f.len());
    for (n, level) in f.levels().iter().enumerate() {
        let comps = level
            .elements()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let m = t.transport(a, f.level_of(a).unwrap(), n);
                let from_least = &back.stages()[n];
                m.inverse(from_least.value(i)).ok_or_else(|| format!("transport of {a} to level {n} is not invertible"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let th = NatTrans::new(comps);
        judge(&th, &t.stages()[n], &back.stages()[n]).map_err(|e| format!("level {n}: {e}"))?;
        theta.push(th);
    }
    if !t.is_hom(&back, &theta) {
        return Err("level isomorphisms do not commute with the comparisons".into());
    }
    Ok(())
}

fn hom_bijection_restrict(f: &SheafFunctor, g: &SheafFunctor, filtration: &OmegaFiltration) -> Result<(), String> {
    let tf = restrict_tower(f, filtration).map_err(|e| e.to_string())?;
    let tg = restrict_tower(g, filtration).map_err(|e| e.to_string())?;
    match f.kind() {
        ValueKind::Set => {
            let homs = enumerate_homs(f, g, DEFAULT_HOM_CAP).map_err(|e| e.to_string())?;
            let families = tower_homs(&tf, &tg)?;
            let images: Vec<TowerHom> = homs.iter().map(|phi| restrict_hom(phi, filtration)).collect();
            if let Some(bad) = images.iter().position(|fam| !tf.is_hom(&tg, fam)) {
                return Err(format!("restriction of morphism {bad} is not a tower morphism"));
            }
            let distinct: HashSet<&TowerHom> = images.iter().collect();
            if distinct.len() != images.len() {
                return Err("restriction is not injective on morphisms".into());
            }
            if families.len() != homs.len() {
                return Err(format!("{} morphisms but {} tower morphisms", homs.len(), families.len()));
            }
            let all: HashSet<&TowerHom> = families.iter().collect();
            if !images.iter().all(|im| all.contains(im)) {
                return Err("an image is missing from the enumerated tower morphisms".into());
            }
            Ok(())
        }
        ValueKind::Vect => {
            let basis = hom_space(f, g).map_err(|e| e.to_string())?;
            let tower_basis = tower_hom_basis(&tf, &tg)?;
            let images: Vec<TowerHom> = basis.iter().map(|phi| restrict_hom(phi, filtration)).collect();
            if let Some(bad) = images.iter().position(|fam| !tf.is_hom(&tg, fam)) {
                return Err(format!("restriction of basis morphism {bad} is not a tower morphism"));
            }
            if tower_basis.len() != basis.len() {
                return Err(format!("dimension {} but tower dimension {}", basis.len(), tower_basis.len()));
            }
            if family_rank(&images) != basis.len() {
                return Err("restriction is not injective on morphisms".into());
            }
            Ok(())
        }
    }
}

fn hom_bijection_glue(tf: &SheafTower, tg: &SheafTower) -> Result<(), String> {
    let gf = glue_tower(tf).map_err(|e| e.to_string())?;
    let gg = glue_tower(tg).map_err(|e| e.to_string())?;
    match gf.kind() {
        ValueKind::Set => {
            let families = tower_homs(tf, tg)?;
            let homs = enumerate_homs(&gf, &gg, DEFAULT_HOM_CAP).map_err(|e| e.to_string())?;
            let glued: Vec<NatTrans> = families.iter().map(|fam| glue_hom(tf, fam)).collect();
            if let Some(bad) = glued.iter().position(|h| !h.is_natural(&gf, &gg)) {
                return Err(format!("glued tower morphism {bad} is not natural"));
            }
            let distinct: HashSet<&NatTrans> = glued.iter().collect();
            if distinct.len() != glued.len() || glued.len() != homs.len() {
                return Err(format!("{} tower morphisms glue to {} of {} morphisms", glued.len(), distinct.len(), homs.len()));
            }
            Ok(())
        }
        ValueKind::Vect => {
            let basis = tower_hom_basis(tf, tg)?;
            let glued: Vec<NatTrans> = basis.iter().map(|fam| glue_hom(tf, fam)).collect();
            if let Some(bad) = glued.iter().position(|h| !h.is_natural(&gf, &gg)) {
                return Err(format!("glued basis morphism {bad} is not natural"));
            }
            let dim = hom_space(&gf, &gg).map_err(|e| e.to_string())?.len();
            let rank = crate::sheaf::span_rank(&glued);
            if rank != basis.len() || dim != basis.len() {
                return Err(format!("tower dimension {} glues to rank {rank} in dimension {dim}", basis.len()));
            }
            Ok(())
        }
    }
}

/// All SET tower morphisms, built level by level: `ψ` at level `n + 1`
/// extends `φ` at level `n` when `ψ|_n ∘ c^F_n = c^G_n ∘ φ`.
fn tower_homs(tf: &SheafTower, tg: &SheafTower) -> Result<Vec<TowerHom>, String> {
    let f = tf.filtration();
    let levels: Vec<Vec<NatTrans>> = (0..f.len())
        .map(|n| enumerate_homs(&tf.stages()[n], &tg.stages()[n], DEFAULT_HOM_CAP).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut families: Vec<TowerHom> = levels[0].iter().map(|phi| vec![phi.clone()]).collect();
    for n in 0..f.len() - 1 {
        let step = f.step(n);
        let mut by_key: HashMap<NatTrans, Vec<&NatTrans>> = HashMap::new();
        for psi in &levels[n + 1] {
            by_key.entry(restrict_nat(psi, &step).after(&tf.comparisons()[n])).or_default().push(psi);
        }
        families = families
            .into_iter()
            .flat_map(|fam| {
                let key = tg.comparisons()[n].after(&fam[n]);
                by_key.get(&key).cloned().unwrap_or_default().into_iter().map(move |psi| {
                    let mut next = fam.clone();
                    next.push(psi.clone());
                    next
                })
            })
            .collect();
    }
    Ok(families)
}

fn neg(m: &NatTrans) -> NatTrans {
    NatTrans::new(
        m.components()
            .iter()
            .map(|c| match c {
                Morphism::Linear(x) => Morphism::Linear(x.scale(&rational::int(-1))),
                Morphism::Function(_) => unreachable!("linear"),
            })
            .collect(),
    )
}

fn combine(basis: &[NatTrans], coeffs: &[Rational], like: &NatTrans) -> NatTrans {
    let mut acc: Vec<Matrix> = like
        .components()
        .iter()
        .map(|c| match c {
            Morphism::Linear(x) => Matrix::zeros(x.rows(), x.cols()),
            Morphism::Function(_) => unreachable!("linear"),
        })
        .collect();
    for (b, k) in basis.iter().zip(coeffs) {
        for (a, c) in b.components().iter().enumerate() {
            if let Morphism::Linear(x) = c {
                acc[a] = acc[a].sub(&x.scale(&-k));
            }
        }
    }
    NatTrans::new(acc.into_iter().map(Morphism::Linear).collect())
}

/// A basis of the VECT tower morphisms: the kernel of the compatibility
/// equations in the coordinates of the levelwise hom bases.
fn tower_hom_basis(tf: &SheafTower, tg: &SheafTower) -> Result<Vec<TowerHom>, String> {
    let f = tf.filtration();
    let bases: Vec<Vec<NatTrans>> = (0..f.len())
        .map(|n| hom_space(&tf.stages()[n], &tg.stages()[n]).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let offsets: Vec<usize> = bases.iter().scan(0, |acc, b| {
        let o = *acc;
        *acc += b.len();
        Some(o)
    }).collect();
    let unknowns: usize = bases.iter().map(Vec::len).sum();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for n in 0..f.len() - 1 {
        let step = f.step(n);
        // column vectors of the constraint ψ|_n ∘ c^F_n - c^G_n ∘ φ = 0
        let mut cols: Vec<(usize, Vec<Rational>)> = Vec::new();
        for (k, psi) in bases[n + 1].iter().enumerate() {
            cols.push((offsets[n + 1] + k, restrict_nat(psi, &step).after(&tf.comparisons()[n]).flatten()));
        }
        for (k, phi) in bases[n].iter().enumerate() {
            cols.push((offsets[n] + k, neg(&tg.comparisons()[n].after(phi)).flatten()));
        }
        let height = cols.first().map_or(0, |c| c.1.len());
        for r in 0..height {
            let mut row = vec![rational::zero(); unknowns];
            for (j, v) in &cols {
                row[*j] = v[r].clone();
            }
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows(rows, unknowns).kernel();
    let zero_like: Vec<NatTrans> = (0..f.len())
        .map(|n| {
            NatTrans::new(
                (0..f.levels()[n].len())
                    .map(|a| {
                        let (s, t) = (tf.stages()[n].value(a).size(), tg.stages()[n].value(a).size());
                        Morphism::Linear(Matrix::zeros(t, s))
                    })
                    .collect(),
            )
        })
        .collect();
    Ok((0..kernel.basis.cols())
        .map(|j| {
            let v = kernel.basis.column(j);
            (0..f.len())
                .map(|n| combine(&bases[n], &v[offsets[n]..offsets[n] + bases[n].len()], &zero_like[n]))
                .collect()
        })
        .collect())
}

fn family_rank(families: &[TowerHom]) -> usize {
    if families.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = families.iter().map(|fam| fam.iter().flat_map(NatTrans::flatten).collect()).collect();
    let cols = rows[0].len();
    Matrix::from_rows(rows, cols).rank()
}

fn random_iso(rng: &mut impl Rng, v: &Value) -> Morphism {
    match v {
        Value::Set(s) => {
            let mut perm: Vec<usize> = (0..s.len()).collect();
            perm.shuffle(rng);
            Morphism::Function(perm)
        }
        Value::Vect(d) => {
            for _ in 0..32 {
                let mut m = Matrix::zeros(*d, *d);
                for r in 0..*d {
                    for c in 0..*d {
                        m[(r, c)] = rational::int(rng.gen_range(-2..=2));
                    }
                }
                if m.is_invertible() {
                    return Morphism::Linear(m);
                }
            }
            Morphism::Linear(Matrix::identity(*d))
        }
    }
}

/// Conjugates every stage by random automorphisms of its values, so the
/// comparisons stop being identities.
fn twist(rng: &mut impl Rng, t: &SheafTower) -> SheafTower {
    let f = t.filtration();
    let pis: Vec<Vec<Morphism>> = t.stages().iter().map(|s| s.values().iter().map(|v| random_iso(rng, v)).collect()).collect();
    let stages: Vec<SheafFunctor> = t
        .stages()
        .iter()
        .zip(&pis)
        .map(|(s, pi)| {
            let transitions = s
                .base()
                .covers()
                .iter()
                .map(|&(a, b)| {
                    let inv = pi[a].inverse(s.value(a)).unwrap();
                    ((a, b), pi[b].after(s.map(a, b)).after(&inv))
                })
                .collect();
            SheafFunctor::with_kind(s.base().clone(), s.kind(), s.values().to_vec(), transitions).expect("conjugate")
        })
        .collect();
    let comparisons = (0..t.comparisons().len())
        .map(|n| {
            let step = f.step(n);
            let next = NatTrans::new(pis[n + 1].clone());
            let inv = NatTrans::new(
                pis[n].iter().enumerate().map(|(a, m)| m.inverse(t.stages()[n].value(a)).unwrap()).collect(),
            );
            restrict_nat(&next, &step).after(&t.comparisons()[n]).after(&inv)
        })
        .collect();
    SheafTower::new(f.clone(), stages, comparisons).expect("conjugated tower is a tower")
}

/// The restriction of a random functor over the top level, conjugated
/// levelwise by random automorphisms.
pub fn random_tower(rng: &mut impl Rng, filtration: &OmegaFiltration, kind: ValueKind, max_size: usize) -> SheafTower {
    let f = random::random_functor(rng, filtration.top(), kind, max_size);
    twist(rng, &restrict_tower(&f, filtration).expect("random functor over the top"))
}

/// Replaces the first comparison component on a value of size at least 2
/// by a constant (SET) or zero (VECT) map.
fn corrupt(t: &SheafTower) -> Option<SheafTower> {
    for n in 0..t.comparisons().len() {
        for (a, v) in t.stages()[n].values().iter().enumerate() {
            if v.size() >= 2 {
                let mut comps = t.comparisons()[n].components().to_vec();
                comps[a] = match v {
                    Value::Set(s) => Morphism::Function(vec![0; s.len()]),
                    Value::Vect(d) => Morphism::Linear(Matrix::zeros(*d, *d)),
                };
                let mut cs = t.comparisons().to_vec();
                cs[n] = NatTrans::new(comps);
                return SheafTower::new_unchecked(t.filtration().clone(), t.stages().to_vec(), cs).ok();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    #[test]
    fn truncations_pass_for_sets() {
        for n in 0..=4 {
            let f = OmegaFiltration::omega_truncations(n);
            let r = verify_devissage(&f, &DevissageConfig { samples: 10, seed: 7, ..Default::default() });
            assert!(r.passed, "{:?}", r.failures);
            assert_eq!(r.checks.iter().map(|c| c.passed).sum::<usize>(), 40);
        }
    }

    #[test]
    fn truncations_pass_for_vector_spaces() {
        let f = OmegaFiltration::omega_truncations(3);
        let cfg = DevissageConfig { samples: 10, seed: 1, kind: ValueKind::Vect, max_size: 2, corrupt: false };
        let r = verify_devissage(&f, &cfg);
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn omega_star_and_random_down_sets() {
        let f = OmegaFiltration::omega_star_truncations(3);
        assert!(verify_devissage(&f, &DevissageConfig { samples: 8, ..Default::default() }).passed);
        let mut rng = random::rng(5);
        let top = random::random_poset(&mut rng, 6, 0.3);
        let lower = random::random_down_set(&mut rng, &top, 0.3);
        let f = OmegaFiltration::from_members(&top, &[lower]).unwrap();
        assert!(verify_devissage(&f, &DevissageConfig { samples: 8, ..Default::default() }).passed);
    }

    #[test]
    fn corrupted_comparisons_are_reported() {
        let f = OmegaFiltration::omega_truncations(2);
        let cfg = DevissageConfig { samples: 12, seed: 3, corrupt: true, ..Default::default() };
        let r = verify_devissage(&f, &cfg);
        assert!(r.corrupted > 0);
        assert!(!r.passed);
        let bad: Vec<&SampleFailure> = r.failures.iter().collect();
        assert_eq!(bad.len(), r.corrupted);
        assert!(bad.iter().all(|b| b.check == "restrict_after_glue" && b.detail.contains("not invertible")));
    }

    #[test]
    fn empty_filtration_is_vacuous() {
        let f = OmegaFiltration::single(Poset::empty());
        let r = verify_devissage(&f, &DevissageConfig { samples: 5, ..Default::default() });
        assert!(r.passed);
    }

    #[test]
    fn same_seed_same_report() {
        let f = OmegaFiltration::omega_truncations(2);
        let cfg = DevissageConfig { samples: 6, seed: 11, corrupt: true, ..Default::default() };
        let a = serde_json::to_string(&verify_devissage(&f, &cfg)).unwrap();
        let b = serde_json::to_string(&verify_devissage(&f, &cfg)).unwrap();
        assert_eq!(a, b);
    }
}
