use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use qradius_core::means::{self, MeanKind, MonotoneFn, QuadCfg};
use qradius_core::qnr::{self, QParam, SolverCfg};
use qradius_core::sectorial::{self, GenKind, GenSpec, Generated};
use qradius_core::semi::SemiSpace;
use qradius_core::{CMatrix, C64};
use qradius_verify::registry;
use qradius_verify::{RunConfig, Status, StressOpts};

use crate::error::{CliError, Result};
use crate::{AngleArgs, Format, FuncalcArgs, GenArgs, MeansArgs, RadiusArgs, RangeArgs, RunArgs, StressArgs};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn read_matrix(path: &Path) -> Result<CMatrix> {
    let s = fs::read_to_string(path).map_err(io_err(path))?;
    CMatrix::from_json_str(&s).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes through a sibling temp file so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_file_name(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    ));
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Prints to stdout; a closed pipe downstream is not an error.
fn print_out(bytes: &[u8]) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(bytes).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

fn emit(v: &Value) -> Result<u8> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    print_out(s.as_bytes())?;
    Ok(0)
}

fn config<T: Serialize>(command: &str, args: &T) -> Value {
    json!({ "command": command, "args": args })
}

/// Parses `q` and reduces it to its modulus; the radius depends on `|q|` only.
pub(crate) fn parse_q(s: &str) -> Result<(QParam, Option<String>)> {
    let z: C64 = s.trim().parse().map_err(|_| CliError::Input(format!("cannot parse q = '{s}'")))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(CliError::Input(format!("q must be finite, got '{s}'")));
    }
    let m = z.norm();
    let note = (z.im != 0.0 || z.re < 0.0).then(|| format!("q = {s} replaced by |q| = {m}; the radius is phase invariant"));
    Ok((QParam::real(m)?, note))
}

fn space(metric: &Option<std::path::PathBuf>) -> Result<Option<SemiSpace>> {
    match metric {
        Some(p) => Ok(Some(SemiSpace::with_default_tol(&read_matrix(p)?)?)),
        None => Ok(None),
    }
}

pub fn mat_gen(a: &GenArgs) -> Result<u8> {
    let kind = GenKind::parse(&a.kind)?;
    let mut spec = GenSpec::new(kind, a.n, a.seed).alpha(a.alpha);
    if let Some(r) = a.rank {
        spec = spec.rank(r);
    }
    let g = sectorial::gen(&spec)?;
    write_atomic(&a.out, g.to_json_string().as_bytes())?;
    let angles: Vec<f64> = match (&g, kind) {
        (Generated::Single(m), GenKind::Sectorial) => vec![sectorial::sector_angle(m)?.alpha_min],
        (Generated::Quadruple(q), _) => q.iter().map(|m| sectorial::sector_angle(m).map(|c| c.alpha_min)).collect::<std::result::Result<_, _>>()?,
        _ => vec![],
    };
    emit(&json!({
        "config": config("mat gen", a),
        "spec": spec,
        "output": a.out,
        "matrices": if matches!(g, Generated::Single(_)) { 1 } else { 4 },
        "sector_angles": angles,
    }))
}

pub fn qnr_radius(a: &RadiusArgs) -> Result<u8> {
    let t = read_matrix(&a.matrix)?;
    let sp = space(&a.metric)?;
    let (q, note) = parse_q(&a.q)?;
    let cfg = SolverCfg { starts: a.starts, oracle_samples: a.oracle_samples, seed: a.seed, ..SolverCfg::default() };
    let r = qnr::q_radius(sp.as_ref(), &t, q, &cfg)?;
    emit(&json!({
        "config": config("qnr radius", a),
        "solver": cfg,
        "q": q.modulus(),
        "note": note,
        "value": r.value,
        "oracle_lower": r.oracle_lower,
        "oracle_gap": r.oracle_gap(),
        "converged": r.converged,
        "starts": r.starts,
        "best_start": r.best_start,
        "iterations": r.iterations,
    }))
}

pub fn qnr_range(a: &RangeArgs) -> Result<u8> {
    let t = read_matrix(&a.matrix)?;
    let sp = space(&a.metric)?;
    let (q, note) = parse_q(&a.q)?;
    let cloud = qnr::q_range_sample(sp.as_ref(), &t, q, a.samples, a.seed)?;
    let mut buf = Vec::new();
    cloud.write_csv(&mut buf)?;
    write_atomic(&a.out, &buf)?;
    emit(&json!({
        "config": config("qnr range", a),
        "q": q.modulus(),
        "note": note,
        "output": a.out,
        "points": cloud.points.len(),
        "hull_points": cloud.hull.len(),
        "max_modulus": cloud.max_modulus(),
    }))
}

pub fn sector_angle(a: &AngleArgs) -> Result<u8> {
    let m = read_matrix(&a.matrix)?;
    let c = sectorial::sector_angle(&m)?;
    emit(&json!({
        "config": config("sector angle", a),
        "alpha_min": c.alpha_min,
        "re_min_eig": c.re_min_eig,
        "rho": c.rho,
    }))
}

fn quad(nodes: usize) -> Result<QuadCfg> {
    let q = QuadCfg::default().with_nodes(nodes);
    q.validate()?;
    Ok(q)
}

pub fn means_compute(a: &MeansArgs) -> Result<u8> {
    let kind = MeanKind::parse(&a.op)?;
    let (x, y) = (read_matrix(&a.a)?, read_matrix(&a.b)?);
    let cfg = quad(a.nodes)?;
    let m = means::matrix_mean(kind, &x, &y, a.t, &cfg)?;
    if let Some(p) = &a.out {
        write_atomic(p, m.to_json_string().as_bytes())?;
    }
    emit(&json!({
        "config": config("means compute", a),
        "quadrature": cfg,
        "op": kind.name(),
        "result": m.to_json_value(),
    }))
}

pub fn funcalc(a: &FuncalcArgs) -> Result<u8> {
    let f = MonotoneFn::parse(&a.f)?;
    let m = read_matrix(&a.matrix)?;
    let cfg = quad(a.nodes)?;
    let out = means::monotone_apply(&f, &m, &cfg)?;
    if let Some(p) = &a.out {
        write_atomic(p, out.to_json_string().as_bytes())?;
    }
    emit(&json!({
        "config": config("funcalc", a),
        "quadrature": cfg,
        "f": f.id,
        "result": out.to_json_value(),
    }))
}

pub fn verify_run(a: &RunArgs) -> Result<u8> {
    let cfg = RunConfig { trials: a.trials, dims: a.dims.clone(), seed: a.seed, ..RunConfig::default() };
    let report = qradius_verify::run_suite(&a.suite, &cfg)?;
    let code = if report.has_failures() { 2 } else { 0 };
    let mut body = match a.format {
        Format::Json => report.to_json()?.into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            buf
        }
    };
    let Some(path) = &a.report else {
        if matches!(a.format, Format::Json) {
            body.push(b'\n');
        }
        print_out(&body)?;
        return Ok(code);
    };
    write_atomic(path, &body)?;
    let (trials, passes, fails, inconclusives) = report.total();
    let failing: Vec<&str> = report.predicates.iter().filter(|p| p.is_failing() || p.demo_missed()).map(|p| p.id.as_str()).collect();
    emit(&json!({
        "config": config("verify run", a),
        "run": cfg,
        "report": path,
        "predicates": report.predicates.len(),
        "trials": trials,
        "passes": passes,
        "fails": fails,
        "inconclusives": inconclusives,
        "failing": failing,
    }))?;
    Ok(code)
}

pub fn verify_list() -> Result<u8> {
    let suites = ["section2", "section3", "means-axioms"];
    let entry = |d: &registry::PredicateDef| {
        let member: Vec<&str> = suites
            .iter()
            .copied()
            .filter(|s| registry::suite(s).is_some_and(|v| v.iter().any(|x| x.id == d.id)))
            .collect();
        json!({
            "id": d.id,
            "statement": d.statement,
            "kind": d.kind,
            "domain": d.domain,
            "params": d.params,
            "suites": member,
        })
    };
    let all: Vec<Value> = registry::predicates().iter().chain(registry::axioms()).map(entry).collect();
    emit(&json!({ "config": { "command": "verify list" }, "predicates": all }))
}

pub fn verify_stress(a: &StressArgs) -> Result<u8> {
    let mut opts = StressOpts::new(a.iterations, a.seed);
    opts.n = a.n;
    opts.alpha = a.alpha;
    opts.target = a.target.clone();
    let r = qradius_verify::stress_with(&a.id, &opts)?;
    let code = if r.worst.status == Status::Fail { 2 } else { 0 };
    emit(&json!({ "config": config("verify stress", a), "options": opts, "result": r }))?;
    Ok(code)
}
