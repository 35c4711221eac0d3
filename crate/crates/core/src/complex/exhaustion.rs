use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::simplicial::{face_poset, SimplicialComplex};
use super::ComplexError;
use crate::poset::OmegaFiltration;

/// Vertex id to the ordered list of its incident edges, each given as a face
/// key (`"a,b"` in either order).
pub type EdgeEnumeration = BTreeMap<String, Vec<String>>;

/// Finite subcomplexes `X_{<=0} ⊆ X_{<=1} ⊆ ...` together with the induced
/// filtration of face posets.
#[derive(Debug, Clone)]
pub struct Exhaustion {
    /// Faces of the ambient complex in each level, as ambient face ids.
    pub levels: Vec<Vec<usize>>,
    pub subcomplexes: Vec<SimplicialComplex>,
    pub filtration: OmegaFiltration,
    /// Least level containing each ambient face.
    pub face_level: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustionReport {
    pub levels: usize,
    pub subcomplexes: bool,
    pub nested: bool,
    pub downward_closed: bool,
    pub exhaustive: bool,
    /// Each level is exactly the set of faces whose edges are all admitted.
    pub maximal: bool,
    pub failure: Option<String>,
}

impl ExhaustionReport {
    pub fn passed(&self) -> bool {
        self.subcomplexes && self.nested && self.downward_closed && self.exhaustive && self.maximal
    }
}

/// Position of every edge in each endpoint's enumeration, keyed by
/// `(vertex, edge)` with the edge as a sorted pair.
fn positions(k: &SimplicialComplex, enumeration: &EdgeEnumeration) -> Result<HashMap<(usize, [usize; 2]), usize>, ComplexError> {
    let mut pos = HashMap::new();
    for (v, edges) in enumeration {
        let vi = k.vertex_index(v).ok_or_else(|| ComplexError::UnknownVertex(v.clone()))?;
        for (n, key) in edges.iter().enumerate() {
            let bad = || ComplexError::UnknownEdge { vertex: v.clone(), edge: key.clone() };
            let e = k.face_from_key(key).map_err(|_| bad())?;
            if e.len() != 2 || !e.contains(&vi) {
                return Err(bad());
            }
            // a repeated entry keeps its first position
            pos.entry((vi, [e[0], e[1]])).or_insert(n);
        }
    }
    for v in 0..k.vertices().len() {
        for e in k.edges_at(v) {
            if !pos.contains_key(&(v, [e[0], e[1]])) {
                return Err(ComplexError::IncompleteEnumeration {
                    vertex: k.vertices()[v].clone(),
                    edge: k.face_key(&e),
                });
            }
        }
    }
    Ok(pos)
}

fn edges_of(face: &[usize]) -> impl Iterator<Item = [usize; 2]> + '_ {
    (0..face.len()).flat_map(move |i| (i + 1..face.len()).map(move |j| [face[i], face[j]]))
}

/// `X_{<=n}` is the largest subcomplex all of whose edges sit within the
/// first `n + 1` entries of the enumeration at both endpoints. Such faces
/// form a subcomplex since the condition only involves edges, so a face
/// enters at the largest level of its edges (vertices at level 0).
pub fn build_exhaustion(k: &SimplicialComplex, enumeration: &EdgeEnumeration) -> Result<Exhaustion, ComplexError> {
    let pos = positions(k, enumeration)?;
    let edge_level = |e: [usize; 2]| pos[&(e[0], e)].max(pos[&(e[1], e)]);
    let face_level: Vec<usize> = k.faces().iter().map(|f| edges_of(f).map(edge_level).max().unwrap_or(0)).collect();
    let count = face_level.iter().max().map_or(1, |m| m + 1);
    let levels: Vec<Vec<usize>> =
        (0..count).map(|n| (0..k.faces().len()).filter(|&i| face_level[i] <= n).collect()).collect();
    let subcomplexes = levels
        .iter()
        .map(|ids| {
            let faces: Vec<Vec<usize>> = ids.iter().map(|&i| k.faces()[i].clone()).collect();
            k.subcomplex(&faces)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let filtration = OmegaFiltration::new(subcomplexes.iter().map(face_poset).collect())?;
    Ok(Exhaustion { levels, subcomplexes, filtration, face_level })
}

/// Rechecks the output of [`build_exhaustion`] from the level face sets
/// alone, without trusting the filtration it built.
pub fn verify_exhaustion(k: &SimplicialComplex, enumeration: &EdgeEnumeration, ex: &Exhaustion) -> ExhaustionReport {
    let mut failure: Option<String> = None;
    let mut note = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };
    let sets: Vec<BTreeSet<&Vec<usize>>> =
        ex.levels.iter().map(|ids| ids.iter().map(|&i| &k.faces()[i]).collect()).collect();

    let mut subcomplexes = true;
    for (n, set) in sets.iter().enumerate() {
        for f in set.iter().filter(|f| f.len() > 1) {
            for i in 0..f.len() {
                let mut g = (*f).clone();
                g.remove(i);
                if !set.contains(&g) {
                    subcomplexes = false;
                    note(format!("level {n}: {} lacks its facet {}", k.face_key(f), k.face_key(&g)));
                }
            }
        }
    }

    let mut nested = true;
    for n in 1..sets.len() {
        if let Some(f) = sets[n - 1].iter().find(|f| !sets[n].contains(*f)) {
            nested = false;
            note(format!("{} is in level {} but not {n}", k.face_key(f), n - 1));
        }
    }

    let top = face_poset(k);
    let mut downward_closed = true;
    for (n, sub) in ex.subcomplexes.iter().enumerate() {
        let members: Option<Vec<usize>> = face_poset(sub).elements().iter().map(|a| top.index_of(a)).collect();
        match members {
            Some(m) if top.is_down_closed(&m) => {}
            _ => {
                downward_closed = false;
                note(format!("face poset of level {n} is not downward closed"));
            }
        }
    }

    let union: BTreeSet<&Vec<usize>> = sets.iter().flatten().copied().collect();
    let exhaustive = union.len() == k.faces().len();
    if !exhaustive {
        note(format!("{} of {} faces are never reached", k.faces().len() - union.len(), k.faces().len()));
    }

    // the defining rule, read straight off the enumeration lists
    let admitted = |v: usize, e: [usize; 2], n: usize| {
        let key = k.face_key(&e);
        enumeration
            .get(&k.vertices()[v])
            .and_then(|list| list.iter().take(n + 1).find(|s| k.face_from_key(s).map(|f| k.face_key(&f)) == Ok(key.clone())))
            .is_some()
    };
    let mut maximal = true;
    for (n, set) in sets.iter().enumerate() {
        for f in k.faces() {
            let want = edges_of(f).all(|e| admitted(e[0], e, n) && admitted(e[1], e, n));
            if want != set.contains(f) {
                maximal = false;
                note(format!("level {n}: membership of {} disagrees with the edge rule", k.face_key(f)));
            }
        }
    }

    ExhaustionReport { levels: sets.len(), subcomplexes, nested, downward_closed, exhaustive, maximal, failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use proptest::prelude::*;

    fn names(k: &SimplicialComplex, ids: &[usize]) -> BTreeSet<String> {
        ids.iter().map(|&i| k.face_key(&k.faces()[i])).collect()
    }

    fn enumeration(pairs: &[(&str, &[&str])]) -> EdgeEnumeration {
        pairs.iter().map(|(v, es)| (v.to_string(), es.iter().map(|s| s.to_string()).collect())).collect()
    }

    #[test]
    fn single_edge_is_level_zero() {
        let k = SimplicialComplex::simplex(&["a", "b"]).unwrap();
        let ex = build_exhaustion(&k, &enumeration(&[("a", &["a,b"]), ("b", &["b,a"])])).unwrap();
        assert_eq!(ex.levels.len(), 1);
        assert_eq!(ex.levels[0].len(), 3);
        assert!(verify_exhaustion(&k, &enumeration(&[("a", &["a,b"]), ("b", &["a,b"])]), &ex).passed());
    }

    #[test]
    fn star_admits_edges_in_enumeration_order() {
        let k = SimplicialComplex::new(&["c", "x0", "x1", "x2"], &[vec!["c", "x0"], vec!["c", "x1"], vec!["c", "x2"]])
            .unwrap();
        let en = enumeration(&[
            ("c", &["c,x0", "c,x1", "c,x2"]),
            ("x0", &["c,x0"]),
            ("x1", &["c,x1"]),
            ("x2", &["c,x2"]),
        ]);
        let ex = build_exhaustion(&k, &en).unwrap();
        assert_eq!(ex.levels.len(), 3);
        let l1 = names(&k, &ex.levels[1]);
        assert!(l1.contains("c,x0") && l1.contains("c,x1") && l1.contains("c") && l1.contains("x1"));
        assert!(!l1.contains("c,x2"));
        // vertices are always present; only the edge waits
        assert!(l1.contains("x2"));
        assert_eq!(names(&k, &ex.levels[0]), ["c", "x0", "x1", "x2", "c,x0"].iter().map(|s| s.to_string()).collect());
        assert!(verify_exhaustion(&k, &en, &ex).passed());
    }

    #[test]
    fn triangle_enters_with_its_last_edge() {
        // a vertex of a triangle has two edges, so one of them sits at index 1
        // in some list; every edge is in by level 1 and the 2-face with it
        let k = SimplicialComplex::simplex(&["a", "b", "c"]).unwrap();
        let en = enumeration(&[("a", &["a,b", "a,c"]), ("b", &["b,a", "b,c"]), ("c", &["c,a", "c,b"])]);
        let ex = build_exhaustion(&k, &en).unwrap();
        assert_eq!(ex.levels.len(), 2);
        assert_eq!(ex.face_level[k.face_id(&[0, 1]).unwrap()], 0);
        assert_eq!(ex.face_level[k.face_id(&[0, 2]).unwrap()], 1);
        assert_eq!(ex.face_level[k.face_id(&[0, 1, 2]).unwrap()], 1);
        assert_eq!(ex.levels[1].len(), k.faces().len());
        assert!(verify_exhaustion(&k, &en, &ex).passed());
    }

    #[test]
    fn all_edges_first_admits_the_whole_complex_at_level_zero() {
        // an edge heading both endpoint lists, plus an isolated vertex
        let k = SimplicialComplex::new(&["a", "b", "c"], &[vec!["a", "b"]]).unwrap();
        let ex = build_exhaustion(&k, &enumeration(&[("a", &["a,b"]), ("b", &["a,b"])])).unwrap();
        assert_eq!(ex.levels.len(), 1);
        assert_eq!(ex.levels[0].len(), 4);
    }

    #[test]
    fn enumeration_errors() {
        let k = SimplicialComplex::simplex(&["a", "b"]).unwrap();
        assert!(matches!(
            build_exhaustion(&k, &enumeration(&[("a", &["a,b"])])),
            Err(ComplexError::IncompleteEnumeration { .. })
        ));
        assert!(matches!(
            build_exhaustion(&k, &enumeration(&[("a", &["a"]), ("b", &["a,b"])])),
            Err(ComplexError::UnknownEdge { .. })
        ));
        let k3 = SimplicialComplex::new(&["a", "b", "c"], &[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        assert!(matches!(
            build_exhaustion(&k3, &enumeration(&[("a", &["b,c"]), ("b", &["a,b", "b,c"]), ("c", &["b,c"])])),
            Err(ComplexError::UnknownEdge { .. })
        ));
    }

    #[test]
    fn edgeless_complex_has_one_level() {
        let k = SimplicialComplex::new(&["p", "q"], &[]).unwrap();
        let ex = build_exhaustion(&k, &EdgeEnumeration::new()).unwrap();
        assert_eq!(ex.levels.len(), 1);
        assert!(verify_exhaustion(&k, &EdgeEnumeration::new(), &ex).passed());
    }

    #[test]
    fn tampered_levels_are_caught() {
        let k = SimplicialComplex::simplex(&["a", "b", "c"]).unwrap();
        let en = random::random_edge_enumeration(&mut random::rng(3), &k);
        let mut ex = build_exhaustion(&k, &en).unwrap();
        let tri = k.face_id(&[0, 1, 2]).unwrap();
        ex.levels[0].push(tri);
        let r = verify_exhaustion(&k, &en, &ex);
        assert!(!r.maximal || !r.subcomplexes);
        assert!(r.failure.is_some());
    }

    proptest! {
        #[test]
        fn four_conclusions_hold(seed in 0u64..10_000) {
            let mut rng = random::rng(seed);
            let k = random::random_complex(&mut rng, 7, 6, 3);
            let en = random::random_edge_enumeration(&mut rng, &k);
            let ex = build_exhaustion(&k, &en).unwrap();
            let r = verify_exhaustion(&k, &en, &ex);
            prop_assert!(r.passed(), "{:?}", r);
            prop_assert_eq!(ex.filtration.len(), ex.levels.len());
            prop_assert_eq!(ex.filtration.top(), &face_poset(&k));
        }
    }
}
