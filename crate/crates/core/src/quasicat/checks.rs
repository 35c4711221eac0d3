use std::collections::HashMap;

use serde::Serialize;

use super::fragment::SimplicialSetFragment;
use super::nerve::nerve;
use super::QuasiError;
use crate::poset::OmegaFiltration;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornFailure {
    /// The missing face `i` of `Λ^n_i`.
    pub missing: usize,
    /// Faces `d_0 .. d_n` of the would-be filler; `None` at `missing`.
    pub faces: Vec<Option<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornReport {
    pub n: usize,
    pub horns: usize,
    /// Horns with more than one filler; zero for nerves of posets.
    pub multiple_fillers: usize,
    pub unfillable: Vec<HornFailure>,
}

impl HornReport {
    pub fn passed(&self) -> bool {
        self.unfillable.is_empty()
    }
}

/// Every inner horn `Λ^n_i -> S` (`0 < i < n`) built from stored
/// `(n-1)`-simplices, checked for a stored `n`-simplex filling it.
pub fn inner_horn_check(s: &SimplicialSetFragment, n: usize) -> Result<HornReport, QuasiError> {
    if n < 2 {
        return Err(QuasiError::Malformed(format!("inner horns need n >= 2, got {n}")));
    }
    if s.bound() < n {
        return Err(QuasiError::BoundTooLow { need: n, bound: s.bound() });
    }
    let m = n - 1;
    // (n-1)-simplices by the value of each face
    let mut by_face: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
    for y in 0..s.count(m) {
        for (k, &f) in s.faces_of(m, y).iter().enumerate() {
            by_face[k].entry(f).or_default().push(y);
        }
    }
    let mut report = HornReport { n, horns: 0, multiple_fillers: 0, unfillable: Vec::new() };
    for i in 1..n {
        let mut fillers: HashMap<Vec<usize>, usize> = HashMap::new();
        for x in 0..s.count(n) {
            let key: Vec<usize> = (0..=n).filter(|&j| j != i).map(|j| s.d(n, j, x)).collect();
            *fillers.entry(key).or_default() += 1;
        }
        let slots: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        horns(s, m, &slots, &by_face, &mut chosen, &mut |horn| {
            report.horns += 1;
            match fillers.get(horn).copied().unwrap_or(0) {
                0 => {
                    let mut faces: Vec<Option<String>> = horn.iter().map(|&y| Some(s.name(m, y).to_string())).collect();
                    faces.insert(i, None);
                    report.unfillable.push(HornFailure { missing: i, faces });
                }
                1 => {}
                _ => report.multiple_fillers += 1,
            }
        });
    }
    Ok(report)
}

/// Enumerates tuples `(y_j)` over `slots` with `d_j y_k = d_{k-1} y_j` for
/// `j < k`, extending one slot at a time.
fn horns(
    s: &SimplicialSetFragment,
    m: usize,
    slots: &[usize],
    by_face: &[HashMap<usize, Vec<usize>>],
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let t = chosen.len();
    if t == slots.len() {
        visit(chosen);
        return;
    }
    let k = slots[t];
    let fits = |y: usize, chosen: &[usize]| {
        chosen.iter().zip(slots).all(|(&yj, &j)| m == 0 || s.d(m, j, y) == s.d(m, k - 1, yj))
    };
    let candidates: Vec<usize> = if t == 0 || m == 0 {
        (0..s.count(m)).collect()
    } else {
        let (j, yj) = (slots[0], chosen[0]);
        by_face[j].get(&s.d(m, k - 1, yj)).cloned().unwrap_or_default()
    };
    for y in candidates {
        if fits(y, chosen) {
            chosen.push(y);
            horns(s, m, slots, by_face, chosen, visit);
            chosen.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    /// 1-simplices `e` with a 2-simplex whose three faces are all `e`.
    pub idempotents: Vec<String>,
    pub nondegenerate: Vec<String>,
}

impl IdempotentReport {
    pub fn only_degenerate(&self) -> bool {
        self.nondegenerate.is_empty()
    }
}

pub fn idempotent_check(s: &SimplicialSetFragment) -> Result<IdempotentReport, QuasiError> {
    if s.bound() < 2 {
        return Err(QuasiError::BoundTooLow { need: 2, bound: s.bound() });
    }
    let mut found = vec![false; s.count(1)];
    for x in 0..s.count(2) {
        let f = s.faces_of(2, x);
        if f[0] == f[1] && f[1] == f[2] {
            found[f[0]] = true;
        }
    }
    let degenerate = s.degenerate(1);
    let pick = |want_nondegenerate: bool| {
        (0..s.count(1))
            .filter(|&e| found[e] && (!want_nondegenerate || !degenerate[e]))
            .map(|e| s.name(1, e).to_string())
            .collect()
    };
    Ok(IdempotentReport { idempotents: pick(false), nondegenerate: pick(true) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelAssignment {
    pub dim: usize,
    pub simplex: String,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionReport {
    pub levels: usize,
    pub simplices: usize,
    /// Least level whose nerve contains each simplex of the top nerve.
    pub assignments: Vec<LevelAssignment>,
    /// Number of simplices first appearing at each level.
    pub new_per_level: Vec<usize>,
    pub unassigned: Vec<String>,
}

impl UnionReport {
    pub fn passed(&self) -> bool {
        self.unassigned.is_empty()
    }

    pub fn level_of(&self, simplex: &str) -> Option<usize> {
        self.assignments.iter().find(|a| a.simplex == simplex).map(|a| a.level)
    }
}

/// Finds, for every simplex of the top nerve, the least level whose own
/// nerve contains it, by lookup in the nerves of the levels.
pub fn union_colimit(filtration: &OmegaFiltration, bound: usize) -> Result<UnionReport, QuasiError> {
    let top = filtration.top();
    let whole = nerve(top, bound)?;
    let level_nerves =
        filtration.levels().iter().map(|l| nerve(l, bound)).collect::<Result<Vec<_>, _>>()?;
    let mut report = UnionReport {
        levels: filtration.len(),
        simplices: 0,
        assignments: Vec::new(),
        new_per_level: vec![0; filtration.len()],
        unassigned: Vec::new(),
    };
    for n in 0..=bound {
        for x in 0..whole.count(n) {
            report.simplices += 1;
            let name = whole.name(n, x);
            // simplex names are chains of element names, so they agree
            // between a level and the top whenever the chain is present
            match level_nerves.iter().position(|ln| ln.find(n, name).is_some()) {
                Some(level) => {
                    report.new_per_level[level] += 1;
                    report.assignments.push(LevelAssignment { dim: n, simplex: name.to_string(), level });
                }
                None => report.unassigned.push(name.to_string()),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use crate::quasicat::Generator;
    use crate::random;
    use proptest::prelude::*;

    fn gen(name: &str, dim: usize, faces: &[&str]) -> Generator {
        Generator { name: name.into(), dim, faces: faces.iter().map(|s| s.to_string()).collect() }
    }

    fn path_gens() -> Vec<Generator> {
        vec![gen("a", 0, &[]), gen("b", 0, &[]), gen("c", 0, &[]), gen("f", 1, &["b", "a"]), gen("g", 1, &["c", "b"])]
    }

    #[test]
    fn missing_composite_is_reported() {
        let s = SimplicialSetFragment::generated(2, &path_gens()).unwrap();
        let r = inner_horn_check(&s, 2).unwrap();
        assert_eq!(
            r.unfillable,
            vec![HornFailure { missing: 1, faces: vec![Some("g".into()), None, Some("f".into())] }]
        );
    }

    #[test]
    fn filled_triangle_passes() {
        let mut gens = path_gens();
        gens.push(gen("h", 1, &["c", "a"]));
        gens.push(gen("t", 2, &["g", "h", "f"]));
        let s = SimplicialSetFragment::generated(2, &gens).unwrap();
        let r = inner_horn_check(&s, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.multiple_fillers, 0);
    }

    #[test]
    fn bounds_are_enforced() {
        let s = SimplicialSetFragment::generated(1, &path_gens()).unwrap();
        assert!(matches!(inner_horn_check(&s, 2), Err(QuasiError::BoundTooLow { need: 2, bound: 1 })));
        assert!(matches!(idempotent_check(&s), Err(QuasiError::BoundTooLow { .. })));
    }

    #[test]
    fn nerve_horns_fill_uniquely() {
        let p = Poset::new(["⊥", "a", "b", "⊤"], [("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")]).unwrap();
        let s = nerve(&p, 3).unwrap();
        for n in [2, 3] {
            let r = inner_horn_check(&s, n).unwrap();
            assert!(r.passed() && r.multiple_fillers == 0);
            assert!(r.horns > 0);
        }
    }

    #[test]
    fn nerve_idempotents_are_identities() {
        let s = nerve(&Poset::chain(3), 2).unwrap();
        let r = idempotent_check(&s).unwrap();
        assert_eq!(r.idempotents, [r#"["0","0"]"#, r#"["1","1"]"#, r#"["2","2"]"#]);
        assert!(r.only_degenerate());
    }

    #[test]
    fn hand_built_idempotent_is_reported() {
        let gens = [gen("x", 0, &[]), gen("e", 1, &["x", "x"]), gen("w", 2, &["e", "e", "e"])];
        let s = SimplicialSetFragment::generated(2, &gens).unwrap();
        let r = idempotent_check(&s).unwrap();
        assert_eq!(r.nondegenerate, ["e"]);
        assert_eq!(r.idempotents, ["x[0,0]", "e"]);
    }

    #[test]
    fn empty_fragment_is_vacuous() {
        let s = SimplicialSetFragment::generated(2, &[]).unwrap();
        let r = idempotent_check(&s).unwrap();
        assert!(r.idempotents.is_empty() && r.only_degenerate());
        assert_eq!(inner_horn_check(&s, 2).unwrap().horns, 0);
    }

    #[test]
    fn omega_truncation_levels() {
        let f = OmegaFiltration::omega_truncations(5);
        let r = union_colimit(&f, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.level_of(r#"["1","3"]"#), Some(3));
        assert_eq!(r.level_of(r#"["0","0","5"]"#), Some(5));
        assert_eq!(r.new_per_level.iter().sum::<usize>(), r.simplices);
    }

    #[test]
    fn single_level_is_level_zero() {
        let f = OmegaFiltration::single(Poset::chain(3));
        let r = union_colimit(&f, 2).unwrap();
        assert!(r.assignments.iter().all(|a| a.level == 0));
    }

    #[test]
    fn omega_star_keeps_the_isolated_point_at_zero() {
        let f = OmegaFiltration::omega_star_truncations(4);
        let r = union_colimit(&f, 2).unwrap();
        for chain in [r#"["0"]"#, r#"["0","0"]"#, r#"["0","0","0"]"#] {
            assert_eq!(r.level_of(chain), Some(0));
        }
        assert_eq!(r.level_of(r#"["2","4"]"#), Some(4));
    }

    proptest! {
        #[test]
        fn nerves_of_random_posets_are_quasi_categories(seed in 0u64..2_000) {
            let p = random::random_poset(&mut random::rng(seed), 5, 0.4);
            let s = nerve(&p, 3).unwrap();
            for n in [2, 3] {
                let r = inner_horn_check(&s, n).unwrap();
                prop_assert!(r.passed());
                prop_assert_eq!(r.multiple_fillers, 0);
            }
        }
    }
}
