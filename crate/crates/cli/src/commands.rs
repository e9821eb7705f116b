use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};
use tropline::ensembles::{
    count_planar, count_planar_marked, count_planar_marked_ab, default_height_range,
    enumerate_planar_trees, expected_pi_monte_carlo, sample_generic_pair, worst_case_pair,
    ExperimentReport, PLANAR_ENUMERATION_MAX_LEAVES,
};
use tropline::segment::{check_moves, tropical_interchange_number, SegmentReport};
use tropline::tree::{nni_distance_exact, write_newick, NNI_BFS_MAX_LEAVES};
use tropline::{tropical_segment, EquidistantTree, SeededStream, TurningPointClass};

use crate::input::{load, load_ultrametric};
use crate::{Cli, Command, Failure, Format};

type Outcome = Result<ExitCode, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { path } => validate(cli, path),
        Command::Segment { u, v } => segment(cli, u, v),
        Command::Classify { u, v } => classify(cli, u, v),
        Command::Tnni { u, v } => tnni(cli, u, v),
        Command::WorstCase { n } => worst_case(cli, *n),
        Command::Count { nmax } => count(cli, *nmax),
        Command::RandomPair { n, height_range } => random_pair(cli, *n, *height_range),
        Command::Experiment {
            n,
            trials,
            height_range,
        } => experiment(cli, n, *trials, *height_range),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn joined(xs: &[tropline::ExactScalar]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn validate(cli: &Cli, path: &Path) -> Outcome {
    let input = load(path)?;
    let u = input.ultrametric();
    let three = (u.n() >= 3).then(|| u.three_point_violation());
    let four = (u.n() >= 4).then(|| u.four_point_violation());
    let ok = u.n() < 3 || matches!(three, Some(None));
    let text = if cli.format == Some(Format::Json) {
        pretty(&json!({
            "format": input.kind(),
            "n": u.n(),
            "ultrametric": ok,
            "three_point_violation": three.flatten().map(|(i, j, k)| [i, j, k]),
            "four_point_violation": four.flatten().map(|(i, j, k, l)| [i, j, k, l]),
            "four_point_checked": four.is_some(),
        }))
    } else {
        let mut s = String::new();
        writeln!(s, "format: {}", input.kind()).unwrap();
        writeln!(s, "n: {}", u.n()).unwrap();
        match four {
            None => writeln!(s, "four-point: n/a").unwrap(),
            Some(None) => writeln!(s, "four-point: yes").unwrap(),
            Some(Some((i, j, k, l))) => writeln!(s, "four-point: no; quadruple ({i},{j},{k},{l})").unwrap(),
        }
        match three.flatten() {
            None => writeln!(s, "ultrametric: yes").unwrap(),
            Some((i, j, k)) => writeln!(s, "ultrametric: no; triple ({i},{j},{k})").unwrap(),
        }
        s
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn segment(cli: &Cli, u: &Path, v: &Path) -> Outcome {
    let seg = tropical_segment(&load_ultrametric(u)?, &load_ultrametric(v)?)?;
    let report = SegmentReport::new(&seg, cli.decimal);
    let text = match cli.format {
        Some(Format::Csv) => {
            let mut s = String::from("index,lambda,class,point,newick");
            if cli.decimal {
                s.push_str(",lambda_decimal");
            }
            s.push('\n');
            for (k, p) in report.turning_points.iter().enumerate() {
                let class = p.class.map_or("", TurningPointClass::as_str);
                write!(s, "{k},{},{class},{},{}", p.lambda, joined(&p.point), csv_field(&p.newick)).unwrap();
                if let Some(d) = p.lambda_decimal {
                    write!(s, ",{d}").unwrap();
                }
                s.push('\n');
            }
            s
        }
        _ => pretty(&report),
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn clade_lists(t: &tropline::Topology) -> Vec<Vec<usize>> {
    t.to_label_lists()
}

fn classify(cli: &Cli, u: &Path, v: &Path) -> Outcome {
    let seg = tropical_segment(&load_ultrametric(u)?, &load_ultrametric(v)?)?;
    let checks = check_moves(&seg)?;
    let count = |c| seg.count(c);
    let unclassified = seg.points().iter().filter(|p| p.class.is_none()).count();
    let inconsistent = checks.iter().filter(|c| !c.consistent).count();
    let text = match cli.format {
        Some(Format::Csv) => {
            let mut s = String::from("index,lambda,class,children,consistent,before,after\n");
            for (p, c) in seg.points().iter().zip(&checks) {
                let wide = p.tree.branching_profile().into_iter().max().unwrap_or(2);
                writeln!(
                    s,
                    "{},{},{},{wide},{},{},{}",
                    c.index,
                    p.lambda,
                    p.class.map_or("", TurningPointClass::as_str),
                    c.consistent,
                    csv_field(&format!("{:?}", clade_lists(&c.before))),
                    csv_field(&format!("{:?}", clade_lists(&c.after))),
                )
                .unwrap();
            }
            s
        }
        _ => {
            let points: Vec<Value> = seg
                .points()
                .iter()
                .zip(&checks)
                .map(|(p, c)| {
                    let mut entry = json!({
                        "index": c.index,
                        "lambda": p.lambda,
                        "class": p.class,
                        "child_counts": p.tree.branching_profile(),
                        "before": clade_lists(&c.before),
                        "after": clade_lists(&c.after),
                        "consistent": c.consistent,
                    });
                    if let Some(detail) = &c.detail {
                        entry["detail"] = json!(detail);
                    }
                    if cli.decimal {
                        entry["lambda_decimal"] = json!(p.lambda.to_f64());
                    }
                    entry
                })
                .collect();
            pretty(&json!({
                "n": seg.n(),
                "generic_pair": seg.is_generic_pair(),
                "counts": {
                    "NoChange": count(TurningPointClass::NoChange),
                    "SingleNNI": count(TurningPointClass::SingleNni),
                    "FourClade": count(TurningPointClass::FourClade),
                    "unclassified": unclassified,
                },
                "tropical_nni_number": seg.tropical_nni_number().ok(),
                "inconsistent_moves": inconsistent,
                "turning_points": points,
            }))
        }
    };
    emit(cli.out.as_deref(), &text)?;
    if seg.is_generic_pair() && inconsistent > 0 {
        return Err(Failure::Theorem(format!("{inconsistent} turning points disagree with their class")));
    }
    Ok(ExitCode::SUCCESS)
}

fn tnni(cli: &Cli, u: &Path, v: &Path) -> Outcome {
    let seg = tropical_segment(&load_ultrametric(u)?, &load_ultrametric(v)?)?;
    let (t1, t2) = (seg.start_tree(), seg.end_tree());
    let interchange = tropical_interchange_number(t1, t2).ok();
    let distance = (seg.n() <= NNI_BFS_MAX_LEAVES)
        .then(|| nni_distance_exact(&t1.topology(), &t2.topology()).ok())
        .flatten();
    let tnni = seg.tropical_nni_number().ok();
    let text = match cli.format {
        Some(Format::Csv) => {
            let opt = |x: Option<usize>| x.map_or(String::new(), |x| x.to_string());
            format!(
                "n,generic_pair,turning_points,tropical_nni_number,tropical_interchange_number,nni_distance\n{},{},{},{},{},{}\n",
                seg.n(),
                seg.is_generic_pair(),
                seg.len(),
                opt(tnni),
                opt(interchange),
                opt(distance)
            )
        }
        _ => pretty(&json!({
            "n": seg.n(),
            "generic_pair": seg.is_generic_pair(),
            "turning_points": seg.len(),
            "tropical_nni_number": tnni,
            "tropical_interchange_number": interchange,
            "nni_distance": distance,
        })),
    };
    emit(cli.out.as_deref(), &text)?;
    if seg.is_generic_pair() && tnni.is_none() {
        return Err(Failure::Theorem("unclassified turning point on a generic pair".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn write_pair(dir: &Path, files: [(&str, String); 2]) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

fn worst_case(cli: &Cli, n: usize) -> Outcome {
    let (u, v) = worst_case_pair(n)?;
    match &cli.out {
        Some(dir) => {
            let files = write_pair(dir, [("u.txt", u.to_text()), ("v.txt", v.to_text())])?;
            for f in files {
                println!("{}", f.display());
            }
        }
        None => print!("{}", pretty(&json!({ "n": n, "u": u.entries(), "v": v.entries() }))),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    planar_formula: String,
    planar_enumerated: Option<u64>,
    marked_formula: String,
    marked_enumerated: Option<u64>,
    ab_cells: usize,
    ab_mismatches: Option<usize>,
}

fn count(cli: &Cli, nmax: usize) -> Outcome {
    if nmax < 1 {
        return Err(Failure::Usage("NMAX must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let census = (n <= PLANAR_ENUMERATION_MAX_LEAVES).then(|| enumerate_planar_trees(n)).transpose()?;
        let mut cells = 0;
        let mut mismatches = 0;
        for a in 1..n {
            for b in 1..=n - a {
                cells += 1;
                if let Some(c) = &census {
                    let enumerated = c.by_ab.get(&(a, b)).copied().unwrap_or(0);
                    if count_planar_marked_ab(n, a, b)? != enumerated.into() {
                        mismatches += 1;
                    }
                }
            }
        }
        rows.push(CountRow {
            n,
            planar_formula: count_planar(n)?.to_string(),
            planar_enumerated: census.as_ref().map(|c| c.trees),
            marked_formula: count_planar_marked(n)?.to_string(),
            marked_enumerated: census.as_ref().map(|c| c.marked),
            ab_cells: cells,
            ab_mismatches: census.as_ref().map(|_| mismatches),
        });
    }
    let text = match cli.format {
        Some(Format::Json) => pretty(&rows),
        _ => {
            let opt = |x: Option<u64>| x.map_or(String::new(), |x| x.to_string());
            let mut s = String::from(
                "n,planar_formula,planar_enumerated,marked_formula,marked_enumerated,ab_cells,ab_mismatches\n",
            );
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.planar_formula,
                    opt(r.planar_enumerated),
                    r.marked_formula,
                    opt(r.marked_enumerated),
                    r.ab_cells,
                    opt(r.ab_mismatches.map(|m| m as u64)),
                )
                .unwrap();
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn random_pair(cli: &Cli, n: usize, height_range: Option<u64>) -> Outcome {
    let m = height_range.unwrap_or_else(|| default_height_range(n));
    let pair = sample_generic_pair(n, &mut SeededStream::new(cli.seed).rng(), m)?;
    let newick = |t: &EquidistantTree| format!("{}\n", write_newick(t));
    match &cli.out {
        Some(dir) => {
            let files = write_pair(dir, [("t1.nwk", newick(&pair.t1)), ("t2.nwk", newick(&pair.t2))])?;
            for f in files {
                println!("{}", f.display());
            }
        }
        None => {
            let vector = |t: &EquidistantTree| -> Vec<tropline::ExactScalar> { t.to_ultrametric().into_entries() };
            print!(
                "{}",
                pretty(&json!({
                    "n": n,
                    "seed": cli.seed,
                    "height_range": m,
                    "attempts": pair.attempts,
                    "t1": write_newick(&pair.t1),
                    "t2": write_newick(&pair.t2),
                    "u": vector(&pair.t1),
                    "v": vector(&pair.t2),
                }))
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("sidecar.json")
    } else {
        out.with_extension("json")
    }
}

fn experiment(cli: &Cli, ns: &[usize], trials: usize, height_range: Option<u64>) -> Outcome {
    let stream = SeededStream::new(cli.seed);
    let mut reports = Vec::new();
    for &n in ns {
        let m = height_range.unwrap_or_else(|| default_height_range(n));
        let report = expected_pi_monte_carlo(n, trials, &stream, m)?;
        if report.mean_pi > report.bound {
            eprintln!("warning: n = {n}: mean {} exceeds bound {}", report.mean_pi, report.bound);
        }
        reports.push(report);
    }
    let sidecar = json!({
        "seed": cli.seed,
        "trials": trials,
        "rows": reports.iter().map(|r: &ExperimentReport| json!({
            "n": r.n,
            "height_range": r.height_range,
            "pi_sum": r.pi_sum,
            "mean_exact": r.mean_exact(),
            "bound_exact": r.bound_exact,
            "bound_decimal": r.bound,
            "max_pi": r.max_pi,
            "mean_attempts": r.mean_attempts,
        })).collect::<Vec<_>>(),
    });
    match cli.format {
        Some(Format::Json) => {
            emit(cli.out.as_deref(), &pretty(&json!({ "reports": reports, "sidecar": sidecar })))?;
        }
        _ => {
            let mut s = format!("{}\n", ExperimentReport::CSV_HEADER);
            for r in &reports {
                writeln!(s, "{}", r.csv_row()).unwrap();
            }
            emit(cli.out.as_deref(), &s)?;
            if let Some(out) = &cli.out {
                fs::write(sidecar_path(out), pretty(&sidecar))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
