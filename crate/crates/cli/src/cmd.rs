use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use num_traits::ToPrimitive;
use qmet_core::align::{align_score, dna_pm, prefix_pm, AlignError, ScoreScheme, StringSet, DNA};
use qmet_core::entropy::experiment::representative_dependence;
use qmet_core::entropy::{
    entropy_point, gennorm_entropy, inert_by_trajectory, CoordinateShift,
    EntropyError, FiniteEndo, GenNorm, SemilatticeEndo, SetShift, Subgroup, SupKind,
};
use qmet_core::graphs::{path_qmetric, ww_iff_undirected, Digraph};
use qmet_core::io::{
    parse_set_seeds, parse_strings, parse_structure, parse_subgroup_seeds, partition_from_blocks, write_structure,
    Structure,
};
use qmet_core::partial::{d_from_p, p_from_dw, validate_wpm};
use qmet_core::semilattice::correspondence::{check_invariant, dist_from_covaluation};
use qmet_core::semilattice::generate::{all_endomorphisms, random_congruence, random_covaluation, random_family_sl};
use qmet_core::semilattice::valuation::check_valuation;
use qmet_core::semilattice::{check_congruence, semilattice_from_order, MeetSL};
use qmet_core::value::{format_rational, int};
use qmet_core::weights::{
    classify_bounds, fading_per_component, synth_cweak_weight, synth_weak_weight, verify_weight, WeightMode,
};
use qmet_core::{validate_gqm, DistVal, GQSpace, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{rational_json, Report};
use crate::{Direction, Family, GenKind, ModeArg};

pub struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

type Outcome = Result<(Report, u8), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Structure, CliError> {
    parse_structure(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn exit_for(r: Report) -> Outcome {
    let code = if r.all_pass() { 0 } else { 1 };
    Ok((r, code))
}

fn load_space(path: &Path) -> Result<Result<GQSpace, String>, CliError> {
    match load(path)? {
        Structure::Qmetric { entries, labels } => Ok(validate_gqm(entries)
            .and_then(|s| match labels {
                Some(l) => s.with_labels(l),
                None => Ok(s),
            })
            .map_err(|e| e.to_string())),
        other => Err(CliError(format!("{}: expected a qmetric file, found {}", path.display(), other.kind()))),
    }
}

fn load_meet(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    match load(path)? {
        Structure::MeetSl { meet } => Ok(meet),
        other => Err(CliError(format!("{}: expected a meetsl file, found {}", path.display(), other.kind()))),
    }
}

pub fn validate(path: &Path, semilattice: Option<PathBuf>, space: Option<PathBuf>, mode: ModeArg) -> Outcome {
    let mut r = Report::new("validate");
    match load(path)? {
        Structure::Qmetric { entries, labels } => {
            let res = validate_gqm(entries).and_then(|s| match labels {
                Some(l) => s.with_labels(l),
                None => Ok(s),
            });
            r.check("quasi-metric", res.map(|_| ()).map_err(|e| e.to_string()));
        }
        Structure::Wpm { entries } => {
            if let Ok(p) = r_check_wpm(&mut r, entries) {
                r.field("strong", p.is_strong().to_string(), json!(p.is_strong()));
                r.field("nonnegative", p.is_nonneg().to_string(), json!(p.is_nonneg()));
            }
        }
        Structure::Weight { values } => {
            let sp = space.ok_or_else(|| CliError("a weight file needs --space".into()))?;
            match load_space(&sp)? {
                Err(e) => {
                    r.check("quasi-metric", Err(e));
                }
                Ok(d) => {
                    let m = match mode {
                        ModeArg::Weak => WeightMode::Weak,
                        ModeArg::Componentwise => WeightMode::Componentwise,
                        ModeArg::Weight => WeightMode::Weight,
                        ModeArg::Coweight => WeightMode::Coweight,
                    };
                    r.check("weight", verify_weight(&d, &values, m).map_err(|e| e.to_string()));
                }
            }
        }
        Structure::MeetSl { meet } => {
            r.check("meet-semilattice", MeetSL::from_meet_table(meet).map(|_| ()).map_err(|e| e.to_string()));
        }
        Structure::Valuation { flavour, values, congruence, meet } => {
            let meet = match (meet, semilattice) {
                (Some(m), _) => m,
                (None, Some(p)) => load_meet(&p)?,
                (None, None) => return Err(CliError("a valuation file needs `meet` or --semilattice".into())),
            };
            let s = match MeetSL::from_meet_table(meet) {
                Ok(s) => s,
                Err(e) => {
                    r.check("meet-semilattice", Err(e.to_string()));
                    return exit_for(r);
                }
            };
            let cong = congruence.map(|b| partition_from_blocks(s.size(), b)).transpose();
            let cong = cong.map_err(|e| CliError(format!("{}: {e}", path.display())))?;
            if let Some(c) = &cong {
                if !r.check("congruence", check_congruence(&s, c).map_err(|e| e.to_string())) {
                    return exit_for(r);
                }
            }
            match check_valuation(&s, &values, flavour, cong.as_ref()) {
                Ok(m) => {
                    r.check(&flavour.to_string(), Ok(()));
                    r.field(
                        "monotonicity",
                        format!(
                            "non-decreasing={} strictly-increasing={} non-increasing={} strictly-decreasing={}",
                            m.non_decreasing, m.strictly_increasing, m.non_increasing, m.strictly_decreasing
                        ),
                        json!({
                            "non_decreasing": m.non_decreasing,
                            "strictly_increasing": m.strictly_increasing,
                            "non_increasing": m.non_increasing,
                            "strictly_decreasing": m.strictly_decreasing,
                        }),
                    );
                }
                Err(e) => {
                    r.check(&flavour.to_string(), Err(e.to_string()));
                }
            }
        }
        Structure::Digraph { nv, edges } => {
            r.check("digraph", Digraph::new(nv, edges).map(|_| ()).map_err(|e| e.to_string()));
        }
    }
    exit_for(r)
}

fn r_check_wpm(r: &mut Report, entries: Vec<Vec<DistVal>>) -> Result<qmet_core::WpmSpace, ()> {
    match validate_wpm(entries, false, false) {
        Ok(p) => {
            r.check("weak partial metric", Ok(()));
            Ok(p)
        }
        Err(e) => {
            r.check("weak partial metric", Err(e.to_string()));
            Err(())
        }
    }
}

/// `with_cww` is off when the general pipeline reports weights itself.
fn graph_section(r: &mut Report, g: &Digraph, with_cww: bool) -> Result<GQSpace, u8> {
    let d = path_qmetric(g);
    r.matrix("path distances", d.matrix());
    match ww_iff_undirected(g) {
        Ok(v) => {
            r.blocks("strong components", v.strong_components.blocks());
            r.check(
                "strong components undirected",
                v.one_way_edge.map_or(Ok(()), |(a, b)| Err(format!("edge {a}->{b} has no reverse"))),
            );
            if with_cww {
                r.check("componentwise weakly weighted", v.cww.map(|_| ()).map_err(|e| e.to_string()));
            }
            Ok(d)
        }
        Err(e) => {
            r.check("criterion agreement", Err(e.to_string()));
            Err(1)
        }
    }
}

fn pipeline(r: &mut Report, d: &GQSpace) {
    r.blocks("components", d.components().blocks());
    let order = d.specialisation_order();
    r.pairs("hasse edges", &order.hasse_edges());
    match semilattice_from_order(&order) {
        Ok(s) => {
            r.check("meet-semilattice", Ok(()));
            let inv = check_invariant(d, &s).map_err(|e| e.to_string()).and_then(|rep| {
                rep.identity.map_or(Ok(()), |(x, y)| Err(format!("d({x},{y}) differs from d({x},{x}∧{y})")))
            });
            r.check("invariant", inv);
        }
        Err(e) => {
            r.check("meet-semilattice", Err(e.to_string()));
        }
    }
    r.check(
        "dpc",
        d.check_dpc().map_err(|w| format!("d({x},{z}) ≠ d({x},{y}) + d({y},{z})", x = w.x, y = w.y, z = w.z)),
    );
    let ww = synth_weak_weight(d);
    r.check("weakly weighted", ww.as_ref().map(|_| ()).map_err(|e| e.to_string()));
    let cww = synth_cweak_weight(d);
    r.check("componentwise weakly weighted", cww.as_ref().map(|_| ()).map_err(|e| e.to_string()));
    if let Ok(w) = &ww {
        r.vector("weight", &w.values);
        let c = classify_bounds(w);
        if let Some(f) = c.fading_weight {
            r.vector("fading weight", &f.values);
        }
        if let Some(f) = c.fading_coweight {
            r.vector("fading co-weight", &f.values);
        }
    }
    if let Ok(w) = &cww {
        let fading = fading_per_component(w);
        if ww.is_err() {
            r.vector("componentwise fading weight", &fading.values);
        }
        r.matrix("partial metric", p_from_dw(d, &fading.values).matrix());
    }
}

pub fn analyze(path: &Path, as_graph: bool) -> Outcome {
    let mut r = Report::new("analyze");
    let d = if as_graph {
        let Structure::Digraph { nv, edges } = load(path)? else {
            return Err(CliError(format!("{}: expected a digraph file", path.display())));
        };
        let g = match Digraph::new(nv, edges) {
            Ok(g) => g,
            Err(e) => {
                r.check("digraph", Err(e.to_string()));
                return Ok((r, 1));
            }
        };
        match graph_section(&mut r, &g, false) {
            Ok(d) => d,
            Err(code) => return Ok((r, code)),
        }
    } else {
        match load_space(path)? {
            Ok(d) => d,
            Err(e) => {
                r.check("quasi-metric", Err(e));
                return Ok((r, 1));
            }
        }
    };
    pipeline(&mut r, &d);
    Ok((r, 0))
}

fn emit(text: &str, output: Option<PathBuf>) -> ExitCode {
    match output {
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Some(p) => match fs::write(&p, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                ExitCode::from(2)
            }
        },
    }
}

pub fn convert(path: &Path, direction: Direction, output: Option<PathBuf>) -> ExitCode {
    let fail = |msg: String, code: u8| {
        eprintln!("error: {msg}");
        ExitCode::from(code)
    };
    let s = match load(path) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string(), 2),
    };
    match (direction, s) {
        (Direction::D2p, Structure::Qmetric { entries, .. }) => {
            let d = match validate_gqm(entries) {
                Ok(d) => d,
                Err(e) => return fail(e.to_string(), 1),
            };
            let w = match synth_cweak_weight(&d) {
                Ok(w) => fading_per_component(&w),
                Err(e) => return fail(format!("not weakly weighted: {e}"), 1),
            };
            let p = p_from_dw(&d, &w.values);
            emit(&write_structure(&Structure::Wpm { entries: p.matrix().to_vec() }), output)
        }
        (Direction::P2d, Structure::Wpm { entries }) => {
            let p = match validate_wpm(entries, false, false) {
                Ok(p) => p,
                Err(e) => return fail(e.to_string(), 1),
            };
            let (d, _) = d_from_p(&p);
            emit(&write_structure(&Structure::Qmetric { entries: d.matrix().to_vec(), labels: None }), output)
        }
        (Direction::D2p, other) => fail(format!("d2p expects a qmetric file, found {}", other.kind()), 2),
        (Direction::P2d, other) => fail(format!("p2d expects a wpm file, found {}", other.kind()), 2),
    }
}

pub fn graph(path: &Path) -> Outcome {
    let mut r = Report::new("graph");
    let Structure::Digraph { nv, edges } = load(path)? else {
        return Err(CliError(format!("{}: expected a digraph file", path.display())));
    };
    match Digraph::new(nv, edges) {
        Ok(g) => {
            let code = graph_section(&mut r, &g, true).err().unwrap_or(0);
            Ok((r, code))
        }
        Err(e) => {
            r.check("digraph", Err(e.to_string()));
            Ok((r, 1))
        }
    }
}

pub fn align(
    path: &Path,
    alpha: Option<Rational>,
    beta: Option<Rational>,
    gamma: Option<Rational>,
    prefix: bool,
) -> Outcome {
    let mut r = Report::new("align");
    let (alphabet, strings) = parse_strings(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let set = match StringSet::new(alphabet.as_deref().unwrap_or(DNA), strings) {
        Ok(s) => s,
        Err(e) => {
            r.check("string set", Err(e.to_string()));
            return Ok((r, 1));
        }
    };
    let pm = if prefix {
        Ok(prefix_pm(&set))
    } else {
        let sch = ScoreScheme::new(alpha.unwrap_or(int(1)), beta.unwrap_or(int(-1)), gamma.unwrap_or(int(-2)));
        if !r.check("score scheme", if sch.is_valid() { Ok(()) } else { Err(AlignError::InvalidScheme.to_string()) }) {
            return Ok((r, 1));
        }
        let ss = set.strings();
        let scores: Vec<Vec<DistVal>> = ss
            .iter()
            .map(|a| ss.iter().map(|b| DistVal::Finite(align_score(a, b, &sch))).collect())
            .collect();
        r.matrix("scores", &scores);
        dna_pm(&set, &sch)
    };
    match pm {
        Ok(p) => {
            r.check("weak partial metric", Ok(()));
            r.field("strong", p.is_strong().to_string(), json!(p.is_strong()));
            r.matrix("partial metric", p.matrix());
            let (d, w) = d_from_p(&p);
            r.vector("self distances", &w.values);
            r.matrix("quasi-metric", d.matrix());
            Ok((r, 0))
        }
        Err(e) => {
            r.check("weak partial metric", Err(e.to_string()));
            Ok((r, 1))
        }
    }
}

fn fmt_opt(v: &Option<Rational>) -> String {
    v.as_ref().map_or("-".into(), format_rational)
}

#[allow(clippy::too_many_arguments)]
fn entropy_table<E: SemilatticeEndo>(
    e: &E,
    seeds: &[E::Elem],
    labels: &[String],
    v: &GenNorm<'_, E::Elem>,
    dist: impl Fn(&E::Elem, &E::Elem) -> Result<DistVal, EntropyError>,
    horizon: usize,
    window: usize,
    log_unit: Option<f64>,
) -> Result<Report, EntropyError> {
    let mut r = Report::new("entropy");
    let norm = gennorm_entropy(e, v, seeds, horizon, window, false)?;
    let mut rows = Vec::new();
    r.note("seed\tinert\tnorm\tdistance\tconverged");
    for ((s, label), row) in seeds.iter().zip(labels).zip(&norm.rows) {
        // d(x, φ(x)) < ∞
        let by_dist = dist(s, &e.apply(s)?)?.is_finite();
        let related = |a: &E::Elem, b: &E::Elem| {
            dist(a, b).is_ok_and(|x| x.is_finite()) && dist(b, a).is_ok_and(|x| x.is_finite())
        };
        let by_traj = inert_by_trajectory(e, s, related, horizon)?;
        if by_dist != by_traj {
            return Err(EntropyError::Invalid(format!("inertness criteria disagree at {label}")));
        }
        let de = if by_dist {
            Some(entropy_point(
                e,
                s,
                |t| Ok(dist(s, t)?.finite().cloned().unwrap_or_default()),
                horizon,
                window,
            )?)
        } else {
            None
        };
        let ne = row.estimate.as_ref().expect("norm seeds are inert");
        let converged = ne.converged && de.as_ref().is_none_or(|x| x.converged);
        let dv = de.map(|x| x.value);
        r.note(&format!(
            "{label}\t{by_dist}\t{}\t{}\t{converged}",
            format_rational(&ne.value),
            fmt_opt(&dv)
        ));
        rows.push(json!({
            "seed": label,
            "inert": by_dist,
            "norm": rational_json(&ne.value),
            "distance": dv.as_ref().map(rational_json),
            "converged": converged,
        }));
    }
    r.derived.insert("rows".into(), json!(rows));
    let kind = match norm.kind {
        SupKind::Exact => "exact",
        SupKind::LowerBound => "lower bound",
    };
    let sup = norm.value.clone();
    r.field("sup", format!("{} ({kind})", fmt_opt(&sup)), sup.as_ref().map_or(json!(null), rational_json));
    r.field("sup kind", kind.into(), json!(kind));
    r.check(
        "converged",
        if norm.converged { Ok(()) } else { Err(format!("no constant increment over the last {window} steps")) },
    );
    if let (Some(unit), Some(s)) = (log_unit, &sup) {
        let nats = s.to_f64().unwrap_or(f64::NAN) * unit;
        r.field("sup in nats", format!("{nats:.6}"), json!(nats));
    }
    Ok(r)
}

fn set_label(s: &BTreeSet<i64>) -> String {
    format!("{{{}}}", s.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
}

fn subgroup_label(gens: &[Vec<u32>]) -> String {
    if gens.is_empty() {
        return "0".into();
    }
    gens.iter()
        .map(|g| {
            let terms: Vec<String> =
                g.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| format!("{i}:{x}")).collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(",")
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[allow(clippy::too_many_arguments)]
pub fn entropy(
    family: Family,
    p: u32,
    k: u32,
    shift: i64,
    seeds: &Path,
    horizon: Option<usize>,
    window: usize,
    budget: usize,
) -> Outcome {
    let text = read(seeds)?;
    let bad = |e: qmet_core::io::FormatError| CliError(format!("{}: {e}", seeds.display()));
    let res = match family {
        Family::PsetShift => {
            let sets: Vec<BTreeSet<i64>> =
                parse_set_seeds(&text).map_err(bad)?.into_iter().map(|v| v.into_iter().collect()).collect();
            let labels: Vec<String> = sets.iter().map(set_label).collect();
            let e = SetShift::new(shift);
            let v = GenNorm::new(SetShift::cardinality);
            entropy_table(&e, &sets, &labels, &v, |a, b| Ok(SetShift::distance(a, b)), horizon.unwrap_or(128), window, None)
        }
        Family::Bernoulli => {
            let gens = parse_subgroup_seeds(&text).map_err(bad)?;
            let labels: Vec<String> = gens.iter().map(|g| subgroup_label(g)).collect();
            let shift = usize::try_from(shift).map_err(|_| CliError("the coordinate shift must be non-negative".into()))?;
            let e = CoordinateShift::with_budget(p, k, shift, budget).map_err(|x| CliError(x.to_string()))?;
            let groups: Result<Vec<Subgroup>, EntropyError> = gens.iter().map(|g| e.generated(g)).collect();
            match groups {
                Ok(groups) => {
                    let v = GenNorm::new(|h: &Subgroup| DistVal::from_int(i64::from(e.log_order(h))));
                    entropy_table(
                        &e,
                        &groups,
                        &labels,
                        &v,
                        |a, b| e.distance(a, b),
                        horizon.unwrap_or(16),
                        window,
                        Some(f64::from(p).ln()),
                    )
                }
                Err(x) => Err(x),
            }
        }
    };
    match res {
        Ok(r) => exit_for(r),
        Err(EntropyError::BadWindow { horizon, window }) => {
            Err(CliError(format!("horizon {horizon} must exceed window {window}")))
        }
        Err(x) => {
            let mut r = Report::new("entropy");
            r.check("computation", Err(x.to_string()));
            Ok((r, 1))
        }
    }
}

pub fn generate(kind: GenKind, size: usize, ground: u32, merges: usize, seed: Option<u64>) -> ExitCode {
    let seed = seed.or_else(|| std::env::var("QMET_SEED").ok().and_then(|s| s.parse().ok())).unwrap_or(0);
    if ground > 16 || size > 1 << ground {
        eprintln!("error: cannot reach {size} elements on a ground set of {ground}");
        return ExitCode::from(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_family_sl(&mut rng, ground, size);
    let meet = s.meet_table().to_vec();
    let structure = match kind {
        GenKind::Semilattice => Structure::MeetSl { meet },
        GenKind::Covaluation | GenKind::Space => {
            let cong = (merges > 0).then(|| random_congruence(&s, &mut rng, merges));
            let f = random_covaluation(&s, cong.as_ref(), &mut rng);
            if let GenKind::Covaluation = kind {
                Structure::Valuation {
                    flavour: qmet_core::semilattice::valuation::Flavour::MeetCoval,
                    values: f,
                    congruence: cong.map(|c| c.blocks().to_vec()),
                    meet: Some(meet),
                }
            } else {
                let d = dist_from_covaluation(&s, &f, cong.as_ref()).expect("generated co-valuations are accepted");
                Structure::Qmetric { entries: d.matrix().to_vec(), labels: None }
            }
        }
    };
    print!("{}", write_structure(&structure));
    ExitCode::SUCCESS
}

fn parse_map(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError(format!("bad map entry `{}`", t.trim()))))
        .collect()
}

pub fn experiment(path: &Path, map: Option<String>, horizon: usize, window: usize) -> Outcome {
    let mut r = Report::new("experiment");
    let d = match load_space(path)? {
        Ok(d) => d,
        Err(e) => {
            r.check("quasi-metric", Err(e));
            return Ok((r, 1));
        }
    };
    let s = match semilattice_from_order(&d.specialisation_order()) {
        Ok(s) => s,
        Err(e) => {
            r.check("meet-semilattice", Err(e.to_string()));
            return Ok((r, 1));
        }
    };
    r.field(
        "dpc",
        d.check_dpc().is_ok().to_string(),
        json!(d.check_dpc().is_ok()),
    );
    let maps = match map {
        Some(m) => vec![parse_map(&m)?],
        None => all_endomorphisms(&s),
    };
    let mut out = Vec::new();
    for m in maps {
        let label = m.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let e = match FiniteEndo::new(s.clone(), m) {
            Ok(e) => e,
            Err(x) => {
                r.check("endomorphism", Err(format!("{label}: {x}")));
                return Ok((r, 1));
            }
        };
        let rows = representative_dependence(&d, &e, horizon, window).map_err(|x| CliError(x.to_string()))?;
        let sups: Vec<String> = rows.iter().map(|row| fmt_opt(&row.sup)).collect();
        let distinct: BTreeSet<&String> = sups.iter().collect();
        r.note(&format!("map {label}: sup per representative family [{}]", sups.join(", ")));
        out.push(json!({
            "map": label,
            "families": rows.iter().map(|row| json!({
                "reps": row.reps,
                "weight": row.weight.iter().map(rational_json).collect::<Vec<_>>(),
                "sup": row.sup.as_ref().map(rational_json),
            })).collect::<Vec<_>>(),
            "distinct_sups": distinct.len(),
        }));
    }
    r.derived.insert("maps".into(), json!(out));
    Ok((r, 0))
}
