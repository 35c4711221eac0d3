//! Fixture files and a runner shared by the CLI test targets.

#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::Command;

use exitpath_core::complex::{reentering_path, SimplicialComplex, StratifiedComplex};
use exitpath_core::metric::FiniteMetricSpace;
use exitpath_core::quasicat::nerve;
use exitpath_core::random;
use exitpath_core::rational::{int, ratio};
use exitpath_core::sheaf::{grothendieck, ValueKind};
use exitpath_core::{OmegaFiltration, Poset};
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn exitpath(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_exitpath")).current_dir(dir).args(args).output().unwrap();
    Run { code: out.status.code().unwrap(), stdout: out.stdout, stderr: String::from_utf8_lossy(&out.stderr).into() }
}

pub fn report(r: &Run) -> Value {
    serde_json::from_slice(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&r.stdout)))
}

pub fn write(dir: &Path, name: &str, v: impl serde::Serialize) {
    fs::write(dir.join(name), serde_json::to_vec(&v).unwrap()).unwrap();
}

pub fn diamond() -> Poset {
    Poset::new(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")]).unwrap()
}

/// Input files for every verb, built with the library.
pub fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let amb = diamond();
    let sub = amb.induced_named(&["bot", "a"]).unwrap();
    write(d, "diamond.json", &amb);
    write(d, "sub.json", &sub);
    write(d, "singleton.json", Poset::chain(1));
    write(d, "chain3.json", Poset::chain(3));
    write(d, "nerve3.json", nerve(&Poset::chain(3), 2).unwrap());
    write(d, "omega5.json", OmegaFiltration::omega_truncations(5));
    let tri = SimplicialComplex::simplex(&["a", "b", "c"]).unwrap();
    write(d, "triangle.json", &tri);
    let edge = StratifiedComplex::by_dimension(SimplicialComplex::simplex(&["a", "b"]).unwrap());
    write(d, "reentering.json", reentering_path(&edge, "a", "a,b", 1).unwrap().0);
    let f = random::random_functor(&mut random::rng(1), &amb, ValueKind::Set, 3);
    write(d, "sheaf.json", &f);
    write(d, "fibration.json", grothendieck(&f).unwrap());
    write(d, "sheaf_sub.json", random::random_functor(&mut random::rng(2), &sub, ValueKind::Set, 3));
    write(d, "line.json", FiniteMetricSpace::on_line(&[int(0), int(5), int(10)]).unwrap());
    write(d, "pair10.json", FiniteMetricSpace::on_line(&[int(0), int(10)]).unwrap());
    write(d, "random8.json", random::random_metric_space(&mut random::rng(8), 8));
    let mut xs = vec![int(0)];
    xs.extend((1..=40).map(|j| ratio(1, j)));
    write(d, "harmonic.json", FiniteMetricSpace::on_line(&xs).unwrap());
    let seq: Vec<Vec<String>> = (1..=20)
        .map(|k: i64| std::iter::once("0".to_string()).chain((k..2 * k).map(|j| ratio(1, j).to_string())).collect())
        .collect();
    write(d, "sequence.json", seq);
    dir
}

/// One invocation per verb with its expected exit status.
pub fn invocations() -> Vec<(Vec<&'static str>, i32)> {
    vec![
        (vec!["poset-validate", "--poset", "diamond.json"], 0),
        (vec!["nerve", "--poset", "chain3.json", "--dim", "2", "--out", "n.json"], 0),
        (vec!["horn-check", "--poset", "chain3.json", "--dim", "3"], 0),
        (vec!["idempotent-check", "--fragment", "nerve3.json"], 0),
        (vec!["union-colimit", "--filtration", "omega5.json", "--dim", "2"], 0),
        (vec!["face-poset", "--complex", "triangle.json", "--out", "fp.json"], 0),
        (vec!["cone", "--complex", "triangle.json"], 0),
        (vec!["exhaust", "--complex", "triangle.json", "--seed", "3"], 0),
        (vec!["exit-validate", "--simplex", "reentering.json"], 1),
        (vec!["sheaf-check", "--sheaf", "sheaf.json"], 0),
        (vec!["push", "--sheaf", "sheaf_sub.json", "--poset", "diamond.json"], 0),
        (vec!["pull", "--sheaf", "sheaf.json", "--sub", "sub.json", "--out", "pulled.json"], 0),
        (vec!["adjunction-verify", "--poset", "diamond.json", "--samples", "10", "--seed", "1"], 0),
        (vec!["sheaf-roundtrip", "--sheaf", "sheaf.json"], 0),
        (vec!["grothendieck", "--sheaf", "sheaf.json"], 0),
        (vec!["straighten", "--fibration", "fibration.json"], 0),
        (vec!["base-change", "--sheaf", "sheaf_sub.json", "--poset", "diamond.json"], 0),
        (vec!["devissage-verify", "--filtration", "omega5.json", "--samples", "50", "--seed", "7"], 0),
        (vec!["exp-dist", "--space", "line.json", "--left", "0", "--right", "0,10"], 0),
        (vec!["exp-axioms", "--space", "random8.json", "--samples", "200", "--seed", "2"], 0),
        (vec!["cone-scan", "--space", "pair10.json", "--radii", "1/10"], 0),
        (vec!["colimit-check", "--space", "harmonic.json", "--sequence", "sequence.json", "--limit", "0"], 0),
        (vec!["export-dot", "--poset", "diamond.json"], 0),
    ]
}

