use std::path::{Path, PathBuf};

use pslet::oracle::cross_check;
use pslet::pslet::{Precision, MAX_ORDER};
use pslet::qdot::{scan_spectrum, RadialSystem, ScanAxis, ScanResult};
use pslet::tables::{self, CellResult};
use pslet::{DotParams, DotSolver, Level, SpectrumRecord, StateLabel, TwoElectronState};

use crate::args::{EngineArgs, FigureArgs, OutputArgs, ScanArgs, SolveArgs, System, TableArgs};
use crate::output::{self, failed_fields, fixed, header, record_fields, sci};
use crate::Failure;

fn solver(e: &EngineArgs, coulomb: bool) -> Result<DotSolver, Failure> {
    if e.order > MAX_ORDER {
        return Err(Failure::Usage(format!("--order {} exceeds {MAX_ORDER}", e.order)));
    }
    let (m, n) = e.pade;
    if m + n > e.order {
        return Err(Failure::Usage(format!(
            "--pade {m},{n} needs --order >= {}, got {}",
            m + n,
            e.order
        )));
    }
    let mut s = DotSolver::default();
    s.engine.order = e.order;
    s.engine.pade = e.pade;
    s.engine.precision = if e.double_double {
        Precision::DoubleDouble
    } else {
        Precision::Double
    };
    s.coulomb = coulomb && !e.no_coulomb;
    Ok(s)
}

fn check_dot(d: DotParams) -> Result<(), Failure> {
    if !(d.gamma_d > 0.0) || !d.gamma.is_finite() || d.gamma < 0.0 {
        return Err(Failure::Usage(format!(
            "need --gamma-d > 0 and --gamma >= 0, got gamma_d = {}, gamma = {}",
            d.gamma_d, d.gamma
        )));
    }
    Ok(())
}

/// Radial problem the oracle can check for a level.
fn oracle_target(level: &Level) -> (RadialSystem, StateLabel) {
    match *level {
        Level::Ion(s) => (RadialSystem::Ion, s),
        Level::Interaction(s) => (RadialSystem::Relative, s),
        Level::TwoElectron(s) => (RadialSystem::Relative, s.rm),
    }
}

fn evaluate(
    solver: &DotSolver,
    level: &Level,
    d: DotParams,
    oracle: bool,
) -> pslet::Result<SpectrumRecord> {
    let mut r = level.evaluate(solver, d)?;
    if oracle {
        let (sys, st) = oracle_target(level);
        r.oracle_delta = Some(cross_check(solver, st, d, sys)?);
    }
    Ok(r)
}

pub fn solve(a: SolveArgs) -> Result<(), Failure> {
    let d = DotParams::new(a.gamma, a.gamma_d);
    check_dot(d)?;
    let solver = solver(&a.engine, true)?;
    let level = match a.system {
        System::Ion => Level::Ion(StateLabel::new(a.k, a.m)),
        System::Interaction => Level::Interaction(StateLabel::new(a.k, a.m)),
        System::TwoElectron => Level::TwoElectron(TwoElectronState::new(a.k, a.m, a.cm_k, a.cm_m)),
    };
    let r = evaluate(&solver, &level, d, a.engine.oracle)
        .map_err(|e| Failure::Solver(format!("{}: {e}", level.label())))?;
    let mut w = output::writer(output::open(a.out.output.as_deref())?, a.out.format);
    w.write_record(record_fields(&r, a.engine.oracle))?;
    w.flush()?;
    if !r.converged {
        return Err(Failure::Check(format!(
            "{}: Pade spread {} above {}",
            r.label,
            sci(r.pade_spread),
            sci(pslet::qdot::SPREAD_THRESHOLD)
        )));
    }
    Ok(())
}

pub fn table(a: TableArgs) -> Result<(), Failure> {
    let solver = solver(&a.engine, true)?;
    let cells = tables::golden(a.id).ok_or_else(|| Failure::Usage(format!("unknown table {}", a.id)))?;
    let oracle = a.engine.oracle;
    let results: Vec<CellResult> = {
        use rayon::prelude::*;
        cells
            .into_par_iter()
            .map(|cell| {
                let outcome = evaluate(&solver, &cell.level, cell.dot, oracle);
                CellResult { cell, outcome }
            })
            .collect()
    };

    let mut w = output::writer(output::open(a.out.output.as_deref())?, a.out.format);
    let mut extra = vec!["expected", "delta"];
    if a.id == 4 {
        extra.insert(0, "rank");
        extra.insert(0, "tag");
    }
    w.write_record(header(oracle, &extra))?;
    for r in &results {
        let mut row = match &r.outcome {
            Ok(rec) => {
                let mut f = record_fields(rec, oracle);
                f[0] = r.cell.label();
                f
            }
            Err(_) => failed_fields(&r.cell.label(), r.cell.dot, oracle),
        };
        if a.id == 4 {
            row.push(r.cell.tag.map(String::from).unwrap_or_default());
            row.push(r.cell.rank.map(|x| x.to_string()).unwrap_or_default());
        }
        row.push(fixed(r.cell.expected));
        row.push(r.delta().map(sci).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;

    report(&a, &results)
}

/// Diff report on standard error; decides the exit status.
fn report(a: &TableArgs, results: &[CellResult]) -> Result<(), Failure> {
    for line in tables::provenance(a.id) {
        eprintln!("# {line}");
    }
    let mut failed = 0;
    let mut over = 0;
    let mut worst: Option<(f64, String)> = None;
    for r in results {
        match (&r.outcome, r.delta()) {
            (Err(e), _) => {
                failed += 1;
                eprintln!("FAILED   {}: {e}", r.cell.label());
            }
            (Ok(rec), Some(delta)) => {
                if delta > a.tolerance {
                    over += 1;
                    eprintln!(
                        "DIFF     {}: |{} - {}| = {}",
                        r.cell.label(),
                        fixed(rec.energy),
                        fixed(r.cell.expected),
                        sci(delta)
                    );
                }
                if worst.as_ref().map_or(true, |(w, _)| delta > *w) {
                    worst = Some((delta, r.cell.label()));
                }
            }
            (Ok(_), None) => unreachable!(),
        }
    }
    let flagged = results
        .iter()
        .filter(|r| r.outcome.as_ref().is_ok_and(|x| !x.converged))
        .count();
    if a.id == 4 {
        ordering_report(results);
    }
    let (max, at) = worst.unwrap_or((0.0, "-".into()));
    eprintln!(
        "table {}: {} cells, max |delta| = {} at {at}, {over} above {}, {failed} failed, {flagged} flagged non-converged (flagged rows are included in the diff)",
        a.id,
        results.len(),
        sci(max),
        sci(a.tolerance)
    );
    if failed > 0 || over > 0 {
        return Err(Failure::Check(format!(
            "table {}: {} of {} cells outside tolerance",
            a.id,
            failed + over,
            results.len()
        )));
    }
    Ok(())
}

/// Compare the computed energy ranking with the printed one, per confinement.
fn ordering_report(results: &[CellResult]) {
    let mut gammas: Vec<f64> = results.iter().map(|r| r.cell.dot.gamma_d).collect();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    for gd in gammas {
        let mut rows: Vec<(&CellResult, f64)> = results
            .iter()
            .filter(|r| r.cell.dot.gamma_d == gd)
            .filter_map(|r| r.outcome.as_ref().ok().map(|x| (r, x.energy)))
            .collect();
        rows.sort_by(|a, b| a.1.total_cmp(&b.1));
        let ours: String = rows.iter().filter_map(|(r, _)| r.cell.tag).collect();
        rows.sort_by_key(|(r, _)| r.cell.rank);
        let printed: String = rows.iter().filter_map(|(r, _)| r.cell.tag).collect();
        let verdict = if ours == printed { "same" } else { "differs" };
        eprintln!("order    gamma_d = {gd}: computed {ours}, printed {printed} ({verdict})");
    }
}

pub fn figure(a: FigureArgs) -> Result<(), Failure> {
    let spec = tables::figure(a.id).ok_or_else(|| Failure::Usage(format!("unknown figure {}", a.id)))?;
    let solver = solver(&a.engine, spec.coulomb)?;
    let range = match (spec.axis, a.gamma, a.big_gamma) {
        (ScanAxis::BigGamma, Some(_), _) => {
            return Err(Failure::Usage(format!("figure {} is plotted against --Gamma", a.id)))
        }
        (ScanAxis::Gamma { .. }, _, Some(_)) => {
            return Err(Failure::Usage(format!("figure {} is plotted against --gamma", a.id)))
        }
        (_, Some(r), _) | (_, _, Some(r)) => r,
        _ => spec.grid,
    };
    run_scan(&solver, &spec.levels, spec.axis, range, &a.engine, &a.out, a.crossings)
}

pub fn scan(a: ScanArgs) -> Result<(), Failure> {
    if a.states.0.is_empty() {
        return Err(Failure::Usage("--states is empty".into()));
    }
    let levels = a
        .states
        .0
        .iter()
        .map(|q| level_of(a.system, q))
        .collect::<Result<Vec<_>, _>>()?;
    let (axis, range) = match (a.gamma, a.big_gamma) {
        (Some(r), _) => (ScanAxis::Gamma { gamma_d: a.gamma_d }, r),
        (_, Some(r)) => (ScanAxis::BigGamma, r),
        _ => return Err(Failure::Usage("one of --gamma or --Gamma is required".into())),
    };
    if matches!(axis, ScanAxis::Gamma { .. }) {
        check_dot(DotParams::new(range.0, a.gamma_d))?;
    }
    let solver = solver(&a.engine, true)?;
    run_scan(&solver, &levels, axis, range, &a.engine, &a.out, a.crossings)
}

fn level_of(system: System, q: &[i64]) -> Result<Level, Failure> {
    let bad = || Failure::Usage(format!("--states: bad state {q:?} for {system:?}"));
    let idx = |x: i64| usize::try_from(x).map_err(|_| bad());
    Ok(match (system, q) {
        (System::Ion, &[k, m]) => Level::Ion(StateLabel::new(idx(k)?, m)),
        (System::Interaction, &[k, m]) => Level::Interaction(StateLabel::new(idx(k)?, m)),
        (System::TwoElectron, &[k, m, kk, mm]) => {
            Level::TwoElectron(TwoElectronState::new(idx(k)?, m, idx(kk)?, mm))
        }
        _ => return Err(bad()),
    })
}

fn run_scan(
    solver: &DotSolver,
    levels: &[Level],
    axis: ScanAxis,
    (start, stop, step): (f64, f64, f64),
    engine: &EngineArgs,
    out: &OutputArgs,
    crossings: Option<PathBuf>,
) -> Result<(), Failure> {
    let grid = tables::grid(start, stop, step);
    if matches!(axis, ScanAxis::BigGamma) && grid.first().is_some_and(|&x| x <= 0.0) {
        return Err(Failure::Usage("--Gamma grid must start above zero".into()));
    }
    let result = scan_spectrum(solver, levels, axis, &grid);
    let oracle_deltas: Vec<Option<f64>> = if engine.oracle {
        use rayon::prelude::*;
        result
            .points
            .par_iter()
            .map(|p| {
                let (sys, st) = oracle_target(&levels[p.level]);
                cross_check(solver, st, axis.dot(p.x), sys).ok()
            })
            .collect()
    } else {
        vec![None; result.points.len()]
    };

    let mut w = output::writer(output::open(out.output.as_deref())?, out.format);
    w.write_record(header(engine.oracle, &[]))?;
    let mut failures = 0;
    for (p, delta) in result.points.iter().zip(oracle_deltas) {
        let row = match &p.outcome {
            Ok(r) => {
                let mut r = r.clone();
                r.oracle_delta = delta;
                record_fields(&r, engine.oracle)
            }
            Err(e) => {
                failures += 1;
                eprintln!("FAILED   {} at {}: {e}", levels[p.level].label(), p.x);
                failed_fields(&levels[p.level].label(), axis.dot(p.x), engine.oracle)
            }
        };
        w.write_record(&row)?;
    }
    w.flush()?;

    let sidecar = crossings.or_else(|| out.output.as_deref().map(crossings_path));
    write_crossings(&result, levels, sidecar.as_deref(), out)?;
    if failures > 0 {
        return Err(Failure::Solver(format!("{failures} scan points failed")));
    }
    Ok(())
}

fn crossings_path(p: &Path) -> PathBuf {
    let stem = p.file_stem().unwrap_or_default().to_string_lossy();
    p.with_file_name(format!("{stem}.crossings.csv"))
}

fn write_crossings(
    result: &ScanResult,
    levels: &[Level],
    path: Option<&Path>,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let Some(path) = path else {
        for c in &result.crossings {
            eprintln!(
                "crossing {} / {} in [{}, {}]",
                levels[c.a].label(),
                levels[c.b].label(),
                fixed(c.lo),
                fixed(c.hi)
            );
        }
        return Ok(());
    };
    let mut w = output::writer(output::open(Some(path))?, out.format);
    w.write_record(["state_a", "state_b", "gamma_lo", "gamma_hi"])?;
    for c in &result.crossings {
        w.write_record([levels[c.a].label(), levels[c.b].label(), fixed(c.lo), fixed(c.hi)])?;
    }
    w.flush()?;
    Ok(())
}
