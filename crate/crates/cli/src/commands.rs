use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::Path;

use evalexpr::{ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use loewner_core::surgery::GeodesicSpec;
use loewner_core::verify::{self, CheckResult, Relation};
use loewner_core::{
    chord_energy, chord_from_driving, compute_driving, dirichlet_energy, reverse_chord, trace_curve, zip_chord, Chord,
    CurveSegment, DrivingFunction, EnergyOptions, Point, ReversalLedger, ReversalOptions, TraceOptions, ZipOptions,
};
use rayon::prelude::*;

use crate::files::{self, chord_json, driving_json, fmt_f64, ChordFile};
use crate::{CliError, Command, GenKind, Global, ToleranceProfile};

/// Seed of `verify` when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 1;

pub fn dispatch(global: &Global, command: &Command) -> Result<(), CliError> {
    let out = global.out.as_deref();
    match command {
        Command::Drive { chord, chordal } => drive(chord, *chordal, out),
        Command::Trace { driving, steps_per_sample } => trace(driving, *steps_per_sample, out),
        Command::Energy { chord } => energy(chord, out),
        Command::Reverse { chord, k, n_samples, cara_points } => {
            reverse(chord, k, *n_samples, *cara_points, global.tolerance_profile, out)
        }
        Command::Verify { suite, only } => verify_cmd(suite, only.as_deref(), global.seed.unwrap_or(DEFAULT_SEED), out),
        Command::Gen { kind, n, a, b, name, driving, formula, total, offset } => {
            let seed = global.seed.ok_or_else(|| CliError::Input("gen needs --seed".into()))?;
            let chord = match kind {
                GenKind::Geodesic => verify::geodesic_chord(*a, *b, n.unwrap_or(200))?,
                GenKind::Named => {
                    let name = name.as_deref().ok_or_else(|| CliError::Input("--kind named needs --name".into()))?;
                    verify::named_chord(name, n.unwrap_or(800))?
                }
                GenKind::Random => verify::random_chords(seed, 1, n.unwrap_or(400))?.remove(0).1,
                GenKind::FromDriving => from_driving(driving.as_deref(), formula.as_deref(), *total, *n, *offset)?,
            };
            emit(out, &chord_json(&chord)?, &chord_summary(&chord))
        }
        Command::Resample { chord, n } => resample(chord, *n, out),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Artifact to `out` and summary to stdout, or artifact to stdout and summary to stderr.
fn emit(out: Option<&Path>, artifact: &str, summary: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_file(path, artifact)?;
            print!("{summary}");
        }
        None => {
            print!("{artifact}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn line(s: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(s, "{key}: {value}");
}

fn chord_summary(chord: &Chord) -> String {
    let mut s = String::new();
    line(&mut s, "start", fmt_f64(chord.start));
    line(&mut s, "end", fmt_f64(chord.end));
    line(&mut s, "vertices", chord.len());
    s
}

fn drive(path: &Path, chordal: bool, out: Option<&Path>) -> Result<(), CliError> {
    let file = files::read_chord(path)?;
    let zipped = match &file {
        ChordFile::Chord(c) => zip_chord(c, &ZipOptions::default())?,
        ChordFile::Segment(s) => compute_driving(s, &ZipOptions::default())?,
    };
    let mut s = String::new();
    line(&mut s, "vertices", file.vertices().len());
    line(&mut s, "consumed", zipped.consumed);
    line(&mut s, "total_t", fmt_f64(zipped.total_t));
    line(&mut s, "total_hcap", fmt_f64(zipped.total_hcap));
    line(&mut s, "tail_hcap_bound", fmt_f64(zipped.tail_hcap_bound));
    line(&mut s, "low_resolution", zipped.low_resolution);
    line(&mut s, "energy_to_infinity", fmt_f64(dirichlet_energy(&zipped.driving)));
    if chordal {
        let chord = file.into_chord(path)?;
        line(&mut s, "energy", fmt_f64(chord_energy(&chord, &EnergyOptions::default())?.energy));
    }
    emit(out, &driving_json(&zipped.driving)?, &s)
}

fn trace(path: &Path, steps_per_sample: usize, out: Option<&Path>) -> Result<(), CliError> {
    let driving = files::read_driving(path)?;
    let opts = TraceOptions { steps_per_sample, max_step_t: Some(f64::INFINITY) };
    let traced = trace_curve(&driving, &opts)?;
    let segment = traced.into_segment();
    let recovered = compute_driving(&segment, &ZipOptions::default())?.driving;
    let round_trip = recovered
        .samples()
        .iter()
        .map(|&(t, l)| (l - driving.value_at(t)).abs())
        .fold(0.0, f64::max);
    let mut s = String::new();
    line(&mut s, "vertices", segment.len());
    line(&mut s, "total_t", fmt_f64(driving.total_time()));
    if let Some(tip) = segment.tip() {
        line(&mut s, "tip", format!("{} {}", fmt_f64(tip.re), fmt_f64(tip.im)));
    }
    line(&mut s, "round_trip_sup", fmt_f64(round_trip));
    emit(out, &files::write_chord_json(segment.base, None, &segment.vertices)?, &s)
}

fn energy(path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let chord = files::read_chord(path)?.into_chord(path)?;
    let r = chord_energy(&chord, &EnergyOptions::default())?;
    let mut s = String::new();
    line(&mut s, "energy", fmt_f64(r.energy));
    line(&mut s, "t_used", fmt_f64(r.t_used));
    line(&mut s, "tail_hcap_bound", fmt_f64(r.tail_hcap_bound));
    line(&mut s, "resolution", r.resolution);
    line(&mut s, "low_resolution", r.low_resolution);
    match out {
        Some(p) => write_file(p, &s),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

struct ReverseRun {
    k: usize,
    ledger: ReversalLedger,
    result: Result<(Chord, f64), CliError>,
}

pub const LEDGER_COLUMNS: [&str; 11] = [
    "k",
    "step",
    "t_cursor",
    "x",
    "y",
    "geodesic_hcap",
    "joint_hcap",
    "energy_prefix",
    "energy_eta",
    "energy_total",
    "cara_distance",
];

pub const SUMMARY_COLUMNS: [&str; 8] = [
    "k",
    "energy_forward",
    "energy_reversed",
    "defect",
    "cara_distance_final",
    "max_energy_increase",
    "status",
    "message",
];

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numeric(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numeric(format!("csv: {e}")))
}

fn reverse(
    path: &Path,
    ks: &[usize],
    n_samples: usize,
    cara_points: usize,
    profile: ToleranceProfile,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if ks.contains(&0) {
        return Err(CliError::Input("--k: entries must be at least 1".into()));
    }
    if cara_points == 0 {
        return Err(CliError::Input("--cara-points must be at least 1".into()));
    }
    let chord = files::read_chord(path)?.into_chord(path)?;
    let options = ReversalOptions { geodesic: GeodesicSpec::new(n_samples)?, cara_points, ..Default::default() };
    let energy_opts = EnergyOptions::default();
    let forward = chord_energy(&chord, &energy_opts)?.energy;

    let runs: Vec<ReverseRun> = ks
        .par_iter()
        .map(|&k| match reverse_chord(&chord, k, &options) {
            Ok((reversed, ledger)) => {
                let result = chord_energy(&reversed, &energy_opts).map(|r| (reversed, r.energy)).map_err(CliError::from);
                ReverseRun { k, ledger, result }
            }
            Err(f) => ReverseRun { k, ledger: f.ledger, result: Err(f.error.into()) },
        })
        .collect();

    let mut ledger_rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut first_error = None;
    let mut failures = Vec::new();
    for run in &runs {
        for r in &run.ledger.records {
            let mut row = vec![run.k.to_string(), r.step.to_string()];
            row.extend(
                [r.t_cursor, r.x, r.y, r.geodesic_hcap, r.joint_hcap, r.energy_prefix, r.energy_eta, r.energy_total, r.cara_distance]
                    .map(fmt_f64),
            );
            ledger_rows.push(row);
        }
        let cara = run.ledger.records.last().map_or(String::new(), |r| fmt_f64(r.cara_distance));
        let increase = if run.ledger.records.is_empty() { String::new() } else { fmt_f64(run.ledger.max_energy_increase()) };
        let row = match &run.result {
            Ok((_, reversed)) => {
                let defect = (forward - reversed).abs();
                let mut problems = Vec::new();
                if defect > profile.defect(forward) {
                    problems.push(format!("defect above {}", profile.defect(forward)));
                }
                if run.ledger.max_energy_increase() > profile.step_slack() {
                    problems.push(format!("energy_total rises by more than {} in a step", profile.step_slack()));
                }
                let status = if problems.is_empty() { "pass" } else { "fail" };
                if !problems.is_empty() {
                    failures.push(format!("k={}: {}", run.k, problems.join("; ")));
                }
                vec![
                    run.k.to_string(),
                    fmt_f64(forward),
                    fmt_f64(*reversed),
                    fmt_f64(defect),
                    cara,
                    increase,
                    status.into(),
                    problems.join("; "),
                ]
            }
            Err(e) => {
                first_error.get_or_insert_with(|| e.clone());
                vec![run.k.to_string(), fmt_f64(forward), String::new(), String::new(), cara, increase, "error".into(), e.to_string()]
            }
        };
        summary_rows.push(row);
    }

    let ledger_csv = csv_text(&LEDGER_COLUMNS, &ledger_rows)?;
    let summary_csv = csv_text(&SUMMARY_COLUMNS, &summary_rows)?;
    let table = summary_table(&summary_rows);
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            for run in &runs {
                if let Ok((reversed, _)) = &run.result {
                    write_file(&dir.join(format!("reversed_k{}.json", run.k)), &chord_json(reversed)?)?;
                }
            }
            write_file(&dir.join("ledger.csv"), &ledger_csv)?;
            write_file(&dir.join("summary.csv"), &summary_csv)?;
            print!("{table}");
        }
        None => {
            print!("{ledger_csv}");
            eprint!("{table}");
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    if !failures.is_empty() {
        return Err(CliError::Check(failures.join(", ")));
    }
    Ok(())
}

fn summary_table(rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>5} {:>24} {:>24} {:>24} {:>24} {:>24}  status", "k", "energy_forward", "energy_reversed", "defect", "cara_distance_final", "max_energy_increase");
    for r in rows {
        let _ = writeln!(s, "{:>5} {:>24} {:>24} {:>24} {:>24} {:>24}  {}", r[0], r[1], r[2], r[3], r[4], r[5], r[6]);
    }
    s
}

pub const CHECK_COLUMNS: [&str; 6] = ["name", "passed", "observed", "relation", "bound", "witness"];

fn verify_cmd(suite: &str, only: Option<&str>, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let results = if suite == "default" {
        verify::run_suite(seed, only)?
    } else {
        let chords = files::read_suite(Path::new(suite))?;
        verify::run_checks(seed, &chords, only)?
    };
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|c| {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            vec![c.name.clone(), c.passed.to_string(), fmt_f64(c.observed), rel.into(), fmt_f64(c.bound), c.witness.clone()]
        })
        .collect();
    let csv = csv_text(&CHECK_COLUMNS, &rows)?;
    let report = verify_report(&results);
    emit(out, &csv, &report)?;
    let failed = results.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Check(format!("{failed} of {} checks failed", results.len())));
    }
    Ok(())
}

fn verify_report(results: &[CheckResult]) -> String {
    let mut groups: Vec<(&str, usize, usize)> = Vec::new();
    for c in results {
        match groups.iter_mut().find(|g| g.0 == c.group()) {
            Some(g) => {
                g.1 += 1;
                g.2 += usize::from(c.passed);
            }
            None => groups.push((c.group(), 1, usize::from(c.passed))),
        }
    }
    let mut s = String::new();
    for (g, total, passed) in &groups {
        let _ = writeln!(s, "{g:<12} {passed}/{total} passed");
    }
    for c in results.iter().filter(|c| !c.passed) {
        let _ = writeln!(s, "FAIL {} observed {} bound {} ({})", c.name, fmt_f64(c.observed), fmt_f64(c.bound), c.witness);
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    let _ = writeln!(s, "{} checks, {failed} failed", results.len());
    s
}

fn formula_driving(formula: &str, total: f64, steps: usize) -> Result<DrivingFunction, CliError> {
    let tree: Node<DefaultNumericTypes> =
        evalexpr::build_operator_tree(formula).map_err(|e| CliError::Input(format!("--formula: {e}")))?;
    let failure = RefCell::new(None);
    let eval = |t: f64| {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let value = ctx
            .set_value("t".into(), Value::Float(t))
            .and_then(|_| tree.eval_number_with_context(&ctx));
        value.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(format!("--formula at t = {t}: {e}"));
            f64::NAN
        })
    };
    let driving = DrivingFunction::from_fn(total, steps, eval);
    if let Some(m) = failure.into_inner() {
        return Err(CliError::Input(m));
    }
    Ok(driving?)
}

/// Three quarters of the vertices trace the driving, the rest close the chord.
fn from_driving(
    driving: Option<&Path>,
    formula: Option<&str>,
    total: f64,
    n: Option<usize>,
    offset: f64,
) -> Result<Chord, CliError> {
    let (driving, closing) = match (driving, formula) {
        (Some(path), None) => {
            let d = files::read_driving(path)?;
            let steps = d.len() - 1;
            (d, n.map_or(steps.div_ceil(3), |n| n.saturating_sub(steps)))
        }
        (None, Some(f)) => {
            let n = n.unwrap_or(800);
            let traced = 3 * n / 4;
            if traced == 0 {
                return Err(CliError::Input(format!("--n {n} is too small")));
            }
            (formula_driving(f, total, traced)?, n - traced)
        }
        _ => return Err(CliError::Input("--kind from-driving needs exactly one of --driving and --formula".into())),
    };
    let steps = driving.len() - 1;
    if steps == 0 {
        return Err(CliError::Input("the driving function has a single sample".into()));
    }
    Ok(chord_from_driving(&driving, steps, offset, &GeodesicSpec::new(closing.max(3))?)?)
}

/// Points at equal arc-length spacing along `path`, ending at its last point.
fn equal_arc_length(path: &[Point], n: usize) -> Vec<Point> {
    let mut cumulative = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    cumulative.push(0.0);
    for w in path.windows(2) {
        acc += (w[1] - w[0]).norm();
        cumulative.push(acc);
    }
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for j in 1..=n {
        if j == n {
            out.push(path[path.len() - 1]);
            break;
        }
        let s = acc * j as f64 / n as f64;
        while cumulative[seg + 1] < s {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let f = if len > 0.0 { (s - cumulative[seg]) / len } else { 0.0 };
        out.push(path[seg] + (path[seg + 1] - path[seg]) * f);
    }
    out
}

fn resample(path: &Path, n: usize, out: Option<&Path>) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let file = files::read_chord(path)?;
    let mut poly = vec![Point::new(file.start(), 0.0)];
    poly.extend_from_slice(file.vertices());
    let vertices = equal_arc_length(&poly, n);
    let text = match file.end() {
        Some(end) => chord_json(&Chord::new(file.start(), end, vertices)?)?,
        None => {
            let seg = CurveSegment::new(file.start(), vertices)?;
            files::write_chord_json(seg.base, None, &seg.vertices)?
        }
    };
    let mut s = String::new();
    line(&mut s, "vertices_in", file.vertices().len());
    line(&mut s, "vertices_out", n);
    emit(out, &text, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_arc_length_on_a_bent_line() {
        let path = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 1.0)];
        let pts = equal_arc_length(&path, 4);
        let expect = [Point::new(0.0, 0.5), Point::new(0.0, 1.0), Point::new(0.5, 1.0), Point::new(1.0, 1.0)];
        for (p, q) in pts.iter().zip(&expect) {
            assert!((p - q).norm() < 1e-15, "{pts:?}");
        }
    }

    #[test]
    fn formula_matches_the_closure() {
        let d = formula_driving("3*t^2 - 2*t", 1.0, 20).unwrap();
        let e = DrivingFunction::from_fn(1.0, 20, |t| 3.0 * t * t - 2.0 * t).unwrap();
        for (a, b) in d.samples().iter().zip(e.samples()) {
            assert!((a.1 - b.1).abs() < 1e-15);
        }
        assert!(matches!(formula_driving("3*t +", 1.0, 4), Err(CliError::Input(_))));
        assert!(matches!(formula_driving("u", 1.0, 4), Err(CliError::Input(_))));
    }

    #[test]
    fn tolerance_profiles_scale() {
        assert_eq!(ToleranceProfile::Desk.defect(10.0), 0.3);
        assert_eq!(ToleranceProfile::Desk.defect(0.1), 0.02);
        assert!((ToleranceProfile::Strict.step_slack() - 1e-4).abs() < 1e-18);
    }
}
