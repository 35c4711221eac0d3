use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use exitpath_core::complex::{
    build_exhaustion, cone_complex, face_poset, validate_exit_simplex, verify_exhaustion, EdgeEnumeration,
    PlSimplexMap, SimplicialComplex,
};
use exitpath_core::devissage::{verify_devissage, DevissageConfig};
use exitpath_core::metric::{
    colimit_convergence_check, cone_triangle_scan, exp_distance, metric_axiom_suite, Configuration, FiniteMetricSpace,
};
use exitpath_core::quasicat::{idempotent_check, inner_horn_check, nerve, union_colimit, SimplicialSetFragment};
use exitpath_core::random;
use exitpath_core::rational::{self, Rational};
use exitpath_core::sheaf::{
    extension_open, functor_from_sheaf, functor_round_trip, grothendieck, proper_base_change_check, pushforward_closed,
    restrict, sheaf_from_functor, sheaf_round_trip, sheafiness_check, straighten, verify_adjunction, AlexandrovSheaf,
    ElementFibration, SheafFunctor, Side, ValueKind,
};
use exitpath_core::{Inclusion, OmegaFiltration, Poset};
use serde_json::json;

use crate::report::{emit, to_value, Artifact, CliError, Outcome, Verdict, Workspace};
use crate::{Command, DotSource, FragmentSource, Kind, SheafSource, SideArg};

impl From<Kind> for ValueKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Set => ValueKind::Set,
            Kind::Vect => ValueKind::Vect,
        }
    }
}

fn ids(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn rationals(list: &str) -> Result<Vec<Rational>, CliError> {
    ids(list).into_iter().map(|s| rational::parse(s).map_err(|e| CliError::Usage(e.0))).collect()
}

fn fragment(ws: &mut Workspace, source: &FragmentSource, bound: usize) -> Result<SimplicialSetFragment, CliError> {
    match (&source.fragment, &source.poset) {
        (Some(path), _) => ws.load("fragment", path),
        (None, Some(path)) => {
            let p: Poset = ws.load("poset", path)?;
            nerve(&p, bound).map_err(|e| CliError::invalid("poset", e))
        }
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn json_artifact(v: impl serde::Serialize) -> Artifact {
    Artifact::Json(to_value(v))
}

pub fn run(command: Command) -> Result<Verdict, CliError> {
    let mut ws = Workspace::default();
    let (verb, outcome, out) = dispatch(&mut ws, command)?;
    emit(verb, ws, outcome, out.as_ref())
}

fn dispatch(ws: &mut Workspace, command: Command) -> Result<(&'static str, Outcome, Option<PathBuf>), CliError> {
    Ok(match command {
        Command::PosetValidate { poset, out } => {
            let p: Poset = ws.load("poset", &poset)?;
            let names = |idx: Vec<usize>| idx.into_iter().map(|i| p.name(i).to_string()).collect::<Vec<_>>();
            let result = json!({
                "elements": p.len(),
                "covers": p.covers().len(),
                "minimal": names(p.minimal_elements()),
                "maximal": names(p.maximal_elements()),
            });
            ("poset-validate", Outcome::pass("poset-order", result), out.out)
        }
        Command::Nerve { poset, dim, out } => {
            let p: Poset = ws.load("poset", &poset)?;
            let n = nerve(&p, dim).map_err(|e| CliError::invalid("poset", e))?;
            let counts: Vec<usize> = (0..=dim).map(|k| n.count(k)).collect();
            let nondegenerate: Vec<usize> =
                (0..=dim).map(|k| n.degenerate(k).iter().filter(|d| !**d).count()).collect();
            let result = json!({ "bound": dim, "simplices": counts, "nondegenerate": nondegenerate });
            ("nerve", Outcome::pass("nerve", result).with_artifact(json_artifact(&n)), out.out)
        }
        Command::HornCheck { source, dim, out } => {
            let s = fragment(ws, &source, dim)?;
            let r = inner_horn_check(&s, dim).map_err(|e| CliError::Usage(e.to_string()))?;
            let witness = r.unfillable.first().cloned();
            ("horn-check", Outcome::judged(r.passed(), Verdict::Fail, "inner-horn-filling", &r, || to_value(witness)), out.out)
        }
        Command::IdempotentCheck { source, out } => {
            let s = fragment(ws, &source, 2)?;
            let r = idempotent_check(&s).map_err(|e| CliError::Usage(e.to_string()))?;
            let witness = json!({ "nondegenerate_idempotents": r.nondegenerate });
            ("idempotent-check", Outcome::judged(r.only_degenerate(), Verdict::Fail, "idempotent-completeness", &r, || witness), out.out)
        }
        Command::UnionColimit { filtration, dim, out } => {
            let f: OmegaFiltration = ws.load("filtration", &filtration)?;
            let r = union_colimit(&f, dim).map_err(|e| CliError::Usage(e.to_string()))?;
            let witness = json!({ "unassigned": r.unassigned });
            ("union-colimit", Outcome::judged(r.passed(), Verdict::Fail, "filtered-colimit", &r, || witness), out.out)
        }
        Command::FacePoset { complex, out } => {
            let k: SimplicialComplex = ws.load("complex", &complex)?;
            let p = face_poset(&k);
            let result = json!({ "elements": p.len(), "covers": p.covers().len() });
            ("face-poset", Outcome::pass("face-poset", result).with_artifact(json_artifact(&p)), out.out)
        }
        Command::Cone { complex, apex, out } => {
            let k: SimplicialComplex = ws.load("complex", &complex)?;
            let c = cone_complex(&k, &apex).map_err(|e| CliError::invalid("complex", e))?;
            let result = json!({ "apex": apex, "faces": c.faces().len() });
            ("cone", Outcome::pass("open-cone", result).with_artifact(json_artifact(&c)), out.out)
        }
        Command::Exhaust { complex, edges, seed, out } => {
            let k: SimplicialComplex = ws.load("complex", &complex)?;
            let (enumeration, seeded) = match &edges {
                Some(path) => (ws.load::<EdgeEnumeration>("edges", path)?, false),
                None => (random::random_edge_enumeration(&mut random::rng(seed), &k), true),
            };
            let ex = build_exhaustion(&k, &enumeration).map_err(|e| CliError::invalid("edges", e))?;
            let r = verify_exhaustion(&k, &enumeration, &ex);
            let face_level: BTreeMap<String, usize> =
                k.faces().iter().zip(&ex.face_level).map(|(f, &l)| (k.face_key(f), l)).collect();
            let result = json!({ "report": r, "face_level": face_level });
            let witness = json!({ "failure": r.failure });
            let o = Outcome::judged(r.passed(), Verdict::Fail, "exhaustion", result, || witness);
            ("exhaust", if seeded { o.with_seed(seed) } else { o }, out.out)
        }
        Command::ExitValidate { simplex, out } => {
            let m: PlSimplexMap = ws.load("simplex", &simplex)?;
            let v = validate_exit_simplex(&m);
            let witness = v.witness().cloned();
            ("exit-validate", Outcome::judged(v.is_accepted(), Verdict::Fail, "exit-simplex", &v, || to_value(witness)), out.out)
        }
        Command::SheafCheck { source, out } => {
            let (r, functorial) = match load_sheaf(ws, &source)? {
                Loaded::Functor(f) => (sheafiness_check(&sheaf_from_functor(&f)), true),
                Loaded::Sheaf(s) => (sheafiness_check(&s), false),
            };
            let result = json!({ "functorial": functorial, "sheafiness": r });
            ("sheaf-check", Outcome::judged(r.is_ok(), Verdict::Fail, "alexandrov-sheaf", result, || to_value(&r)), out.out)
        }
        Command::Push { sheaf, poset, out } => {
            let f: SheafFunctor = ws.load("sheaf", &sheaf)?;
            let amb: Poset = ws.load("poset", &poset)?;
            let inc = Inclusion::new(f.base().clone(), amb).map_err(|e| CliError::invalid("poset", e))?;
            let (pushed, along) = if inc.is_downward_closed() {
                (pushforward_closed(&f, &inc), "closed")
            } else if inc.is_upward_closed() {
                (extension_open(&f, &inc), "open")
            } else {
                return Err(CliError::invalid("poset", "the base of the sheaf is neither downward nor upward closed"));
            };
            let pushed = pushed.map_err(|e| CliError::invalid("sheaf", e))?;
            let result = json!({ "inclusion": along, "elements": pushed.base().len() });
            ("push", Outcome::pass("kan-extension", result).with_artifact(json_artifact(&pushed)), out.out)
        }
        Command::Pull { sheaf, sub, out } => {
            let f: SheafFunctor = ws.load("sheaf", &sheaf)?;
            let s: Poset = ws.load("sub", &sub)?;
            let inc = Inclusion::new(s, f.base().clone()).map_err(|e| CliError::invalid("sub", e))?;
            let pulled = restrict(&f, &inc).map_err(|e| CliError::invalid("sheaf", e))?;
            let result = json!({ "elements": pulled.base().len() });
            ("pull", Outcome::pass("kan-extension", result).with_artifact(json_artifact(&pulled)), out.out)
        }
        Command::AdjunctionVerify { poset, side, kind, sampling, out } => {
            let amb: Poset = ws.load("poset", &poset)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let mut failures = Vec::new();
            let mut all_iso = true;
            for i in 0..sampling.samples {
                let s = sampling.seed.wrapping_add(i as u64);
                let mut rng = random::rng(s);
                let members = match side {
                    Side::Right => random::random_down_set(&mut rng, &amb, 0.4),
                    Side::Left => random::random_up_set(&mut rng, &amb, 0.4),
                };
                let inc = Inclusion::of_subset(&amb, &members);
                let f = random::random_functor(&mut rng, inc.sub(), kind.into(), 3);
                let g = random::random_functor(&mut rng, &amb, kind.into(), 3);
                let r = verify_adjunction(&inc, side, &f, &g).map_err(|e| CliError::Usage(e.to_string()))?;
                all_iso &= r.fully_faithful_iso;
                if !r.passed() {
                    failures.push(json!({ "sample": i, "seed": s, "report": r }));
                }
            }
            let result = json!({
                "side": side,
                "samples": sampling.samples,
                "failed": failures.len(),
                "fully_faithful_iso_everywhere": all_iso,
            });
            let witness = failures.first().cloned();
            let o = Outcome::judged(failures.is_empty(), Verdict::Fail, "adjunction", result, || to_value(witness));
            ("adjunction-verify", o.with_seed(sampling.seed), out.out)
        }
        Command::SheafRoundtrip { source, out } => {
            let (first, second) = match load_sheaf(ws, &source)? {
                Loaded::Functor(f) => {
                    let a = functor_round_trip(&f).map_err(|e| CliError::invalid("sheaf", e))?;
                    let b = sheaf_round_trip(&sheaf_from_functor(&f)).map_err(|e| CliError::invalid("sheaf", e))?;
                    (a, b)
                }
                Loaded::Sheaf(s) => {
                    let b = sheaf_round_trip(&s).map_err(|e| CliError::invalid("alexandrov", e))?;
                    let f = functor_from_sheaf(&s).map_err(|e| CliError::invalid("alexandrov", e))?;
                    let a = functor_round_trip(&f).map_err(|e| CliError::invalid("alexandrov", e))?;
                    (a, b)
                }
            };
            let ok = first.is_iso() && second.is_iso();
            let result = json!({ "functor_round_trip": first, "sheaf_round_trip": second });
            let witness = result.clone();
            ("sheaf-roundtrip", Outcome::judged(ok, Verdict::Fail, "representation", result, || witness), out.out)
        }
        Command::Grothendieck { sheaf, out } => {
            let f: SheafFunctor = ws.load("sheaf", &sheaf)?;
            let e = grothendieck(&f).map_err(|e| CliError::invalid("sheaf", e))?;
            let result = json!({ "total": e.total().len(), "base": e.base().len() });
            ("grothendieck", Outcome::pass("straightening", result).with_artifact(json_artifact(&e)), out.out)
        }
        Command::Straighten { fibration, out } => {
            let e: ElementFibration = ws.load("fibration", &fibration)?;
            let f = straighten(&e).map_err(|e| CliError::invalid("fibration", e))?;
            let result = json!({ "elements": f.base().len() });
            ("straighten", Outcome::pass("straightening", result).with_artifact(json_artifact(&f)), out.out)
        }
        Command::BaseChange { sheaf, poset, element, out } => {
            let f: SheafFunctor = ws.load("sheaf", &sheaf)?;
            let amb: Poset = ws.load("poset", &poset)?;
            let inc = Inclusion::new(f.base().clone(), amb.clone()).map_err(|e| CliError::invalid("poset", e))?;
            let elements: Vec<String> = match element {
                Some(a) => vec![a],
                None => amb.elements().to_vec(),
            };
            let reports = elements
                .iter()
                .map(|a| proper_base_change_check(&f, &inc, a).map_err(|e| CliError::invalid("poset", e)))
                .collect::<Result<Vec<_>, _>>()?;
            let mismatch = reports.iter().find(|r| !r.matches).cloned();
            let finding = reports.iter().find(|r| r.terminal_not_initial).cloned();
            let o = match (mismatch, finding) {
                (Some(m), _) => Outcome::judged(false, Verdict::Fail, "proper-base-change", &reports, || to_value(m)),
                (None, Some(t)) => Outcome::judged(false, Verdict::Finding, "proper-base-change", &reports, || to_value(t)),
                (None, None) => Outcome::pass("proper-base-change", &reports),
            };
            ("base-change", o, out.out)
        }
        Command::DevissageVerify { filtration, kind, max_size, corrupt, sampling, out } => {
            let f: OmegaFiltration = ws.load("filtration", &filtration)?;
            let config =
                DevissageConfig { samples: sampling.samples, seed: sampling.seed, kind: kind.into(), max_size, corrupt };
            let r = verify_devissage(&f, &config);
            let witness = r.failures.first().cloned();
            let o = Outcome::judged(r.passed, Verdict::Fail, "devissage", &r, || to_value(witness));
            ("devissage-verify", o.with_seed(sampling.seed), out.out)
        }
        Command::ExpDist { space, left, right, out } => {
            let sp: FiniteMetricSpace = ws.load("space", &space)?;
            let s = configuration(&sp, &left)?;
            let t = configuration(&sp, &right)?;
            let d = exp_distance(&s, &t).map_err(|e| CliError::Usage(e.to_string()))?;
            let result = json!({ "left": s.names(), "right": t.names(), "distance": d });
            ("exp-dist", Outcome::pass("exponential-metric", result), out.out)
        }
        Command::ExpAxioms { space, seed, samples, out } => {
            let sp: FiniteMetricSpace = ws.load("space", &space)?;
            let r = metric_axiom_suite(&sp, samples, seed);
            let witness = r.violations.first().cloned();
            let o = Outcome::judged(r.passed, Verdict::Fail, "exponential-metric", &r, || to_value(witness));
            ("exp-axioms", o.with_seed(seed), out.out)
        }
        Command::ConeScan { space, radii, out } => {
            let sp: FiniteMetricSpace = ws.load("space", &space)?;
            let grid = rationals(&radii)?;
            let r = cone_triangle_scan(&sp, &grid).map_err(|e| CliError::Usage(e.to_string()))?;
            let witness = r.violations.first().cloned();
            ("cone-scan", Outcome::judged(r.is_metric(), Verdict::Finding, "cone-metric", &r, || to_value(witness)), out.out)
        }
        Command::ColimitCheck { space, sequence, limit, tolerances, out } => {
            let sp: FiniteMetricSpace = ws.load("space", &space)?;
            let raw: Vec<Vec<String>> = ws.load("sequence", &sequence)?;
            let seq = raw
                .iter()
                .map(|c| sp.configuration(c).map_err(|e| CliError::invalid("sequence", e)))
                .collect::<Result<Vec<_>, _>>()?;
            let candidate = configuration(&sp, &limit)?;
            let tol = rationals(&tolerances)?;
            let r = colimit_convergence_check(&seq, &candidate, &tol).map_err(|e| CliError::Usage(e.to_string()))?;
            let witness = json!({ "settles_at": r.settles_at, "cardinalities": r.cardinalities });
            ("colimit-check", Outcome::judged(!r.flagged, Verdict::Finding, "impossibility", &r, || witness), out.out)
        }
        Command::ExportDot { source, out } => {
            let (kind, dot) = export_dot(ws, &source)?;
            let result = json!({ "kind": kind, "lines": dot.lines().count() });
            ("export-dot", Outcome::pass("graphviz-export", result).with_artifact(Artifact::Text(dot)), out.out)
        }
    })
}

#[allow(clippy::large_enum_variant)] // one value per command run
enum Loaded {
    Functor(SheafFunctor),
    Sheaf(AlexandrovSheaf),
}

fn load_sheaf(ws: &mut Workspace, source: &SheafSource) -> Result<Loaded, CliError> {
    match (&source.sheaf, &source.alexandrov) {
        (Some(p), _) => Ok(Loaded::Functor(ws.load("sheaf", p)?)),
        (None, Some(p)) => Ok(Loaded::Sheaf(ws.load("alexandrov", p)?)),
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn configuration<'a>(sp: &'a FiniteMetricSpace, list: &str) -> Result<Configuration<'a>, CliError> {
    sp.configuration(&ids(list)).map_err(|e| CliError::invalid("configuration", e))
}

fn stem(p: &Path) -> String {
    p.file_stem().map_or_else(|| "g".to_string(), |s| s.to_string_lossy().into_owned())
}

fn export_dot(ws: &mut Workspace, source: &DotSource) -> Result<(&'static str, String), CliError> {
    if let Some(p) = &source.poset {
        let x: Poset = ws.load("poset", p)?;
        return Ok(("poset", x.to_dot(&stem(p))));
    }
    if let Some(p) = &source.fibration {
        let x: ElementFibration = ws.load("fibration", p)?;
        return Ok(("fibration", x.to_dot(&stem(p))));
    }
    if let Some(p) = &source.fragment {
        let x: SimplicialSetFragment = ws.load("fragment", p)?;
        return Ok(("fragment", x.to_dot(&stem(p))));
    }
    if let Some(p) = &source.complex {
        let x: SimplicialComplex = ws.load("complex", p)?;
        return Ok(("complex", x.to_dot(&stem(p))));
    }
    unreachable!("clap requires one source")
}

