use std::collections::HashMap;

use super::fragment::{SimplicialMap, SimplicialSetFragment, MAX_SIMPLICES};
use super::QuasiError;
use crate::poset::{MonotoneMap, Poset};

/// Name of the simplex `a_0 <= ... <= a_n`: the JSON array of element names.
pub fn chain_name(p: &Poset, chain: &[usize]) -> String {
    let names: Vec<&str> = chain.iter().map(|&a| p.name(a)).collect();
    serde_json::to_string(&names).expect("strings serialize")
}

/// Weakly increasing chains of each length, lexicographic in element ids.
fn chains(p: &Poset, bound: usize) -> Result<Vec<Vec<Vec<usize>>>, QuasiError> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![(0..p.len()).map(|a| vec![a]).collect()];
    let mut total = p.len();
    for n in 1..=bound {
        let mut level = Vec::new();
        for c in &out[n - 1] {
            let last = *c.last().unwrap();
            for b in 0..p.len() {
                if p.leq(last, b) {
                    let mut d = c.clone();
                    d.push(b);
                    level.push(d);
                }
            }
        }
        total += level.len();
        if total > MAX_SIMPLICES {
            return Err(QuasiError::TooLarge(MAX_SIMPLICES));
        }
        out.push(level);
    }
    Ok(out)
}

/// The nerve up to dimension `bound`: `n`-simplices are the chains
/// `a_0 <= ... <= a_n`, `d_i` drops `a_i` and `s_i` repeats it.
pub fn nerve(p: &Poset, bound: usize) -> Result<SimplicialSetFragment, QuasiError> {
    let levels = chains(p, bound)?;
    let lookup: Vec<HashMap<&[usize], usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect()).collect();
    let mut names = Vec::with_capacity(bound + 1);
    let mut faces = Vec::with_capacity(bound + 1);
    let mut degens = Vec::with_capacity(bound + 1);
    for (n, level) in levels.iter().enumerate() {
        names.push(level.iter().map(|c| chain_name(p, c)).collect());
        faces.push(
            level
                .iter()
                .map(|c| {
                    if n == 0 {
                        return vec![];
                    }
                    (0..=n)
                        .map(|i| {
                            let mut d = c.clone();
                            d.remove(i);
                            lookup[n - 1][d.as_slice()]
                        })
                        .collect()
                })
                .collect(),
        );
        degens.push(
            level
                .iter()
                .map(|c| {
                    if n == bound {
                        return vec![];
                    }
                    (0..=n)
                        .map(|i| {
                            let mut d = c.clone();
                            d.insert(i, c[i]);
                            lookup[n + 1][d.as_slice()]
                        })
                        .collect()
                })
                .collect(),
        );
    }
    SimplicialSetFragment::from_tables(bound, names, faces, degens)
}

/// The nerves of source and target together with the induced map, which
/// applies `f` entrywise.
pub fn nerve_map(
    f: &MonotoneMap,
    bound: usize,
) -> Result<(SimplicialSetFragment, SimplicialSetFragment, SimplicialMap), QuasiError> {
    let (src, dst) = (f.source(), f.target());
    let ns = nerve(src, bound)?;
    let nt = nerve(dst, bound)?;
    let chains_src = chains(src, bound)?;
    let components = chains_src
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|c| {
                    let image: Vec<usize> = c.iter().map(|&a| f.apply(a)).collect();
                    nt.find(n, &chain_name(dst, &image)).expect("monotone maps send chains to chains")
                })
                .collect()
        })
        .collect();
    Ok((ns, nt, SimplicialMap { components }))
}
