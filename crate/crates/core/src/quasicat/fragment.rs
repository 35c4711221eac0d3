use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::QuasiError;
use crate::poset::dot_id;

/// Fragments holding more simplices than this are refused.
pub const MAX_SIMPLICES: usize = 500_000;

/// The simplices of a simplicial set in dimensions `0..=bound`, with every
/// face map and every degeneracy that stays within the bound tabulated. The
/// simplicial identities are checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialSetFragment {
    bound: usize,
    names: Vec<Vec<String>>,
    index: Vec<HashMap<String, usize>>,
    /// `faces[n][x][i]` is `d_i x`, for `n >= 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][x][i]` is `s_i x`, for `n < bound`.
    degens: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexEntry {
    pub name: String,
    /// Names of `d_0, ..., d_n` one dimension down.
    #[serde(default)]
    pub faces: Vec<String>,
    /// Names of `s_0, ..., s_n` one dimension up; empty at the bound.
    #[serde(default)]
    pub degeneracies: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FragmentFile {
    pub bound: usize,
    /// `simplices[n]` lists the `n`-simplices.
    pub simplices: Vec<Vec<SimplexEntry>>,
}

/// A nondegenerate simplex for [`SimplicialSetFragment::generated`]. Faces
/// name generators, or degenerate simplices written `x[0,0,1]` (generator
/// `x` pulled back along the listed surjection).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<String>,
}

/// Components of a map of fragments, dimension by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub components: Vec<Vec<usize>>,
}

fn malformed(msg: impl Into<String>) -> QuasiError {
    QuasiError::Malformed(msg.into())
}

impl SimplicialSetFragment {
    pub fn from_tables(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, QuasiError> {
        if names.len() != bound + 1 || faces.len() != bound + 1 || degens.len() != bound + 1 {
            return Err(malformed(format!("expected tables for dimensions 0..={bound}")));
        }
        let total: usize = names.iter().map(Vec::len).sum();
        if total > MAX_SIMPLICES {
            return Err(QuasiError::TooLarge(MAX_SIMPLICES));
        }
        let mut index = Vec::with_capacity(bound + 1);
        for (n, level) in names.iter().enumerate() {
            let map: HashMap<String, usize> = level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
            if map.len() != level.len() {
                return Err(malformed(format!("repeated name among the {n}-simplices")));
            }
            index.push(map);
        }
        for n in 0..=bound {
            let count = names[n].len();
            let nf = if n == 0 { 0 } else { n + 1 };
            let nd = if n == bound { 0 } else { n + 1 };
            if faces[n].len() != count || degens[n].len() != count {
                return Err(malformed(format!("tables in dimension {n} do not match the simplex count")));
            }
            for x in 0..count {
                if faces[n][x].len() != nf || faces[n][x].iter().any(|&y| y >= names[n - 1].len()) {
                    return Err(malformed(format!("{}: needs {nf} faces among the {}-simplices", names[n][x], n.saturating_sub(1))));
                }
                if degens[n][x].len() != nd || degens[n][x].iter().any(|&y| y >= names[n + 1].len()) {
                    return Err(malformed(format!("{}: needs {nd} degeneracies", names[n][x])));
                }
            }
        }
        let s = Self { bound, names, index, faces, degens };
        s.check_identities()?;
        Ok(s)
    }

    fn check_identities(&self) -> Result<(), QuasiError> {
        let fail = |n: usize, x: usize, what: String| {
            Err(QuasiError::IdentityViolated(format!("{} in dimension {n}: {what}", self.names[n][x])))
        };
        for n in 0..=self.bound {
            for x in 0..self.count(n) {
                for j in 0..=n {
                    for i in 0..j {
                        if n >= 2 && self.d(n - 1, i, self.d(n, j, x)) != self.d(n - 1, j - 1, self.d(n, i, x)) {
                            return fail(n, x, format!("d{i} d{j} != d{} d{i}", j - 1));
                        }
                    }
                }
                if n == self.bound {
                    continue;
                }
                for j in 0..=n {
                    let sx = self.s(n, j, x);
                    for i in 0..=n + 1 {
                        let lhs = self.d(n + 1, i, sx);
                        let rhs = if i < j {
                            self.s(n - 1, j - 1, self.d(n, i, x))
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.s(n - 1, j, self.d(n, i - 1, x))
                        };
                        if lhs != rhs {
                            return fail(n, x, format!("d{i} s{j} is wrong"));
                        }
                    }
                    if n + 2 <= self.bound {
                        for i in 0..=j {
                            if self.s(n + 1, i, sx) != self.s(n + 1, j + 1, self.s(n, i, x)) {
                                return fail(n, x, format!("s{i} s{j} != s{} s{i}", j + 1));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The fragment freely generated by nondegenerate simplices: every
    /// simplex is uniquely a generator pulled back along a surjection.
    pub fn generated(bound: usize, generators: &[Generator]) -> Result<Self, QuasiError> {
        let gen_index: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        if gen_index.len() != generators.len() {
            return Err(malformed("repeated generator name"));
        }
        // faces of generators, resolved to (generator, surjection)
        let mut gen_faces: Vec<Vec<(usize, Vec<usize>)>> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim > bound {
                return Err(QuasiError::BoundTooLow { need: g.dim, bound });
            }
            if g.name.contains('[') {
                return Err(malformed(format!("generator name {} may not contain '['", g.name)));
            }
            let want = if g.dim == 0 { 0 } else { g.dim + 1 };
            if g.faces.len() != want {
                return Err(malformed(format!("{} needs {want} faces", g.name)));
            }
            let mut resolved = Vec::with_capacity(want);
            for f in &g.faces {
                let (h, sigma) = parse_degenerate(f, &gen_index, generators)?;
                if sigma.len() != g.dim {
                    return Err(malformed(format!("face {f} of {} has the wrong dimension", g.name)));
                }
                resolved.push((h, sigma));
            }
            gen_faces.push(resolved);
        }

        let mut simplices: Vec<Vec<(usize, Vec<usize>)>> = Vec::with_capacity(bound + 1);
        let mut total = 0usize;
        for n in 0..=bound {
            let mut level = Vec::new();
            for (gi, g) in generators.iter().enumerate() {
                if g.dim <= n {
                    for sigma in surjections(n, g.dim) {
                        level.push((gi, sigma));
                    }
                }
            }
            total += level.len();
            if total > MAX_SIMPLICES {
                return Err(QuasiError::TooLarge(MAX_SIMPLICES));
            }
            simplices.push(level);
        }
        let lookup: Vec<HashMap<(usize, Vec<usize>), usize>> =
            simplices.iter().map(|l| l.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();

        let face_of = |gi: usize, sigma: &[usize], i: usize| -> (usize, Vec<usize>) {
            let mut rest: Vec<usize> = sigma.to_vec();
            let k = rest.remove(i);
            let m = generators[gi].dim;
            if (0..=m).all(|v| rest.contains(&v)) {
                return (gi, rest);
            }
            let squeezed: Vec<usize> = rest.iter().map(|&v| if v > k { v - 1 } else { v }).collect();
            let (h, tau) = &gen_faces[gi][k];
            (*h, squeezed.iter().map(|&t| tau[t]).collect())
        };

        let mut names = Vec::with_capacity(bound + 1);
        let mut faces = Vec::with_capacity(bound + 1);
        let mut degens = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            names.push(simplices[n].iter().map(|(gi, s)| simplex_name(&generators[*gi].name, s)).collect());
            faces.push(
                simplices[n]
                    .iter()
                    .map(|(gi, s)| if n == 0 { vec![] } else { (0..=n).map(|i| lookup[n - 1][&face_of(*gi, s, i)]).collect() })
                    .collect(),
            );
            degens.push(
                simplices[n]
                    .iter()
                    .map(|(gi, s)| {
                        if n == bound {
                            return vec![];
                        }
                        (0..=n)
                            .map(|j| {
                                let mut t = s.clone();
                                t.insert(j, s[j]);
                                lookup[n + 1][&(*gi, t)]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        Self::from_tables(bound, names, faces, degens)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn count(&self, n: usize) -> usize {
        self.names[n].len()
    }

    pub fn name(&self, n: usize, x: usize) -> &str {
        &self.names[n][x]
    }

    pub fn names(&self, n: usize) -> &[String] {
        &self.names[n]
    }

    pub fn find(&self, n: usize, name: &str) -> Option<usize> {
        self.index.get(n)?.get(name).copied()
    }

    /// `d_i x` for an `n`-simplex `x`, `n >= 1`.
    pub fn d(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][x][i]
    }

    /// `s_i x` for an `n`-simplex `x`, `n < bound`.
    pub fn s(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][x][i]
    }

    pub fn faces_of(&self, n: usize, x: usize) -> &[usize] {
        &self.faces[n][x]
    }

    /// Whether each `n`-simplex is in the image of a degeneracy.
    pub fn degenerate(&self, n: usize) -> Vec<bool> {
        let mut out = vec![false; self.count(n)];
        if n > 0 {
            for x in 0..self.count(n - 1) {
                for &y in &self.degens[n - 1][x] {
                    out[y] = true;
                }
            }
        }
        out
    }

    /// Checks that `map` commutes with every tabulated face and degeneracy.
    pub fn check_map(&self, target: &SimplicialSetFragment, map: &SimplicialMap) -> Result<(), String> {
        if target.bound < self.bound || map.components.len() != self.bound + 1 {
            return Err("map does not cover every dimension".into());
        }
        for n in 0..=self.bound {
            if map.components[n].len() != self.count(n) || map.components[n].iter().any(|&y| y >= target.count(n)) {
                return Err(format!("component {n} has the wrong shape"));
            }
        }
        let f = |n: usize, x: usize| map.components[n][x];
        for n in 0..=self.bound {
            for x in 0..self.count(n) {
                if n > 0 {
                    for i in 0..=n {
                        if f(n - 1, self.d(n, i, x)) != target.d(n, i, f(n, x)) {
                            return Err(format!("d{i} fails at {}", self.name(n, x)));
                        }
                    }
                }
                if n < self.bound {
                    for i in 0..=n {
                        if f(n + 1, self.s(n, i, x)) != target.s(n, i, f(n, x)) {
                            return Err(format!("s{i} fails at {}", self.name(n, x)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> FragmentFile {
        FragmentFile {
            bound: self.bound,
            simplices: (0..=self.bound)
                .map(|n| {
                    (0..self.count(n))
                        .map(|x| SimplexEntry {
                            name: self.names[n][x].clone(),
                            faces: self.faces[n][x].iter().map(|&y| self.names[n - 1][y].clone()).collect(),
                            degeneracies: self.degens[n][x].iter().map(|&y| self.names[n + 1][y].clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Vertices and nondegenerate edges `d_1 e -> d_0 e`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph {} {{", dot_id(name));
        for v in &self.names[0] {
            let _ = writeln!(s, "  {};", dot_id(v));
        }
        if self.bound >= 1 {
            let degenerate = self.degenerate(1);
            for e in (0..self.count(1)).filter(|&e| !degenerate[e]) {
                let (src, dst) = (self.d(1, 1, e), self.d(1, 0, e));
                let _ = writeln!(
                    s,
                    "  {} -> {} [label={}];",
                    dot_id(&self.names[0][src]),
                    dot_id(&self.names[0][dst]),
                    dot_id(&self.names[1][e])
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

impl TryFrom<FragmentFile> for SimplicialSetFragment {
    type Error = QuasiError;

    fn try_from(f: FragmentFile) -> Result<Self, QuasiError> {
        if f.simplices.len() != f.bound + 1 {
            return Err(malformed(format!("expected simplex lists for dimensions 0..={}", f.bound)));
        }
        let names: Vec<Vec<String>> = f.simplices.iter().map(|l| l.iter().map(|e| e.name.clone()).collect()).collect();
        let index: Vec<HashMap<&str, usize>> =
            names.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
        let resolve = |n: usize, name: &str| -> Result<usize, QuasiError> {
            index.get(n).and_then(|m| m.get(name)).copied().ok_or_else(|| QuasiError::UnknownSimplex(name.to_string()))
        };
        let mut faces = Vec::with_capacity(f.bound + 1);
        let mut degens = Vec::with_capacity(f.bound + 1);
        for (n, level) in f.simplices.iter().enumerate() {
            let mut fl = Vec::with_capacity(level.len());
            let mut dl = Vec::with_capacity(level.len());
            for e in level {
                let fs = if n == 0 && !e.faces.is_empty() {
                    return Err(malformed(format!("vertex {} has faces", e.name)));
                } else {
                    e.faces.iter().map(|y| resolve(n.wrapping_sub(1), y)).collect::<Result<Vec<_>, _>>()?
                };
                fl.push(fs);
                dl.push(e.degeneracies.iter().map(|y| resolve(n + 1, y)).collect::<Result<Vec<_>, _>>()?);
            }
            faces.push(fl);
            degens.push(dl);
        }
        SimplicialSetFragment::from_tables(f.bound, names, faces, degens)
    }
}

impl Serialize for SimplicialSetFragment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialSetFragment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SimplicialSetFragment::try_from(FragmentFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn simplex_name(generator: &str, sigma: &[usize]) -> String {
    if sigma.iter().enumerate().all(|(i, &v)| i == v) {
        generator.to_string()
    } else {
        let s: Vec<String> = sigma.iter().map(usize::to_string).collect();
        format!("{generator}[{}]", s.join(","))
    }
}

/// Reads `x` or `x[0,0,1]`; the surjection must end at the dimension of `x`.
fn parse_degenerate(
    s: &str,
    gen_index: &HashMap<&str, usize>,
    generators: &[Generator],
) -> Result<(usize, Vec<usize>), QuasiError> {
    let unknown = || QuasiError::UnknownSimplex(s.to_string());
    let (name, sigma) = match s.split_once('[') {
        None => {
            let g = *gen_index.get(s).ok_or_else(unknown)?;
            return Ok((g, (0..=generators[g].dim).collect()));
        }
        Some((name, rest)) => {
            let body = rest.strip_suffix(']').ok_or_else(unknown)?;
            let sigma = body.split(',').map(|t| t.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| unknown())?;
            (name, sigma)
        }
    };
    let g = *gen_index.get(name).ok_or_else(unknown)?;
    let m = generators[g].dim;
    let surjective = sigma.first() == Some(&0)
        && sigma.last() == Some(&m)
        && sigma.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
    if !surjective {
        return Err(unknown());
    }
    Ok((g, sigma))
}

/// Monotone surjections `[n] -> [m]` as value lists, in lexicographic order.
fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > n {
            if cur.last() == Some(&m) {
                out.push(cur.clone());
            }
            return;
        }
        let last = cur[pos - 1];
        // stay, or step up while enough positions remain to reach m
        for v in [last, last + 1] {
            if v <= m && m - v <= n - pos {
                cur.push(v);
                go(pos + 1, n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(1, n, m, &mut vec![0], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, dim: usize, faces: &[&str]) -> Generator {
        Generator { name: name.into(), dim, faces: faces.iter().map(|s| s.to_string()).collect() }
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn surjection_counts() {
        for n in 0..6 {
            for m in 0..=n {
                assert_eq!(surjections(n, m).len(), binomial(n, m));
            }
        }
    }

    #[test]
    fn free_on_a_point() {
        let s = SimplicialSetFragment::generated(3, &[gen("x", 0, &[])]).unwrap();
        for n in 0..=3 {
            assert_eq!(s.count(n), 1);
        }
        assert_eq!(s.name(2, 0), "x[0,0,0]");
        assert_eq!(s.degenerate(2), vec![true]);
    }

    #[test]
    fn free_on_a_triangle() {
        let gens = [
            gen("a", 0, &[]),
            gen("b", 0, &[]),
            gen("c", 0, &[]),
            gen("f", 1, &["b", "a"]),
            gen("g", 1, &["c", "b"]),
            gen("h", 1, &["c", "a"]),
            gen("t", 2, &["g", "h", "f"]),
        ];
        let s = SimplicialSetFragment::generated(3, &gens).unwrap();
        // n-simplices of Δ² are the monotone maps [n] -> [2]
        for n in 0..=3 {
            assert_eq!(s.count(n), binomial(n + 3, 2));
        }
        assert_eq!(s.degenerate(2).iter().filter(|d| !**d).count(), 1);
        let f = s.find(1, "f").unwrap();
        assert_eq!(s.name(0, s.d(1, 1, f)), "a");
        let sf = s.s(1, 0, f);
        assert_eq!(s.name(2, sf), "f[0,0,1]");
    }

    #[test]
    fn inconsistent_generator_faces_are_rejected() {
        let gens = [
            gen("a", 0, &[]),
            gen("b", 0, &[]),
            gen("f", 1, &["b", "a"]),
            gen("g", 1, &["b", "a"]),
            // the outer edges do not meet at a vertex
            gen("t", 2, &["f", "g", "f"]),
        ];
        assert!(matches!(SimplicialSetFragment::generated(2, &gens), Err(QuasiError::IdentityViolated(_))));
        assert!(matches!(
            SimplicialSetFragment::generated(1, &[gen("a", 0, &[]), gen("f", 1, &["a", "zz"])]),
            Err(QuasiError::UnknownSimplex(_))
        ));
        assert!(matches!(
            SimplicialSetFragment::generated(0, &[gen("a", 0, &[]), gen("f", 1, &["a", "a"])]),
            Err(QuasiError::BoundTooLow { .. })
        ));
    }

    #[test]
    fn degenerate_face_references() {
        // a 2-simplex whose last edge is the identity of a
        let gens = [gen("a", 0, &[]), gen("b", 0, &[]), gen("f", 1, &["b", "a"]), gen("t", 2, &["f", "f", "a[0,0]"])];
        let s = SimplicialSetFragment::generated(2, &gens).unwrap();
        let t = s.find(2, "t").unwrap();
        assert_eq!(s.name(1, s.d(2, 2, t)), "a[0,0]");
    }

    #[test]
    fn file_round_trip_and_tampering() {
        let gens = [gen("a", 0, &[]), gen("b", 0, &[]), gen("f", 1, &["b", "a"])];
        let s = SimplicialSetFragment::generated(2, &gens).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: SimplicialSetFragment = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let mut file = s.to_file();
        // make d_0 of s_0 f point at the wrong edge
        let bad = file.simplices[2].iter_mut().find(|e| e.name == "f[0,0,1]").unwrap();
        bad.faces[0] = "a[0,0]".into();
        assert!(matches!(SimplicialSetFragment::try_from(file), Err(QuasiError::IdentityViolated(_))));
    }

    #[test]
    fn dot_draws_nondegenerate_edges() {
        let gens = [gen("a", 0, &[]), gen("b", 0, &[]), gen("f", 1, &["b", "a"])];
        let dot = SimplicialSetFragment::generated(1, &gens).unwrap().to_dot("s");
        assert!(dot.contains("\"a\" -> \"b\" [label=\"f\"];"));
        assert!(!dot.contains("a[0,0]"));
    }
}
