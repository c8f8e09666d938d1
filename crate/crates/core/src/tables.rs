//! Published tables and figures, with golden values embedded as CSV.

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Result;
use crate::qdot::{DotParams, DotSolver, Level, ScanAxis, SpectrumRecord, StateLabel, TwoElectronState};

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");
const TABLE4: &str = include_str!("../data/table4.csv");
const TABLE5: &str = include_str!("../data/table5.csv");

pub const TABLE_IDS: [u8; 5] = [1, 2, 3, 4, 5];
pub const FIGURE_IDS: [u8; 7] = [1, 2, 3, 4, 5, 6, 7];

/// One printed table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCell {
    pub level: Level,
    pub dot: DotParams,
    pub expected: f64,
    /// Literature value printed alongside, when there is one.
    pub reference: Option<f64>,
    /// Row tag (`a`..`p` in table 4, `A`..`K` in table 5).
    pub tag: Option<char>,
    /// Position in its printed column, for tables that are ordered by energy.
    pub rank: Option<usize>,
}

impl GoldenCell {
    pub fn label(&self) -> String {
        match self.tag {
            Some(t) => format!("{t}:{}", self.level.label()),
            None => self.level.label(),
        }
    }
}

#[derive(Debug)]
pub struct CellResult {
    pub cell: GoldenCell,
    pub outcome: Result<SpectrumRecord>,
}

impl CellResult {
    pub fn delta(&self) -> Option<f64> {
        self.outcome
            .as_ref()
            .ok()
            .map(|r| (r.energy - self.cell.expected).abs())
    }
}

/// Comment lines at the top of a golden file.
pub fn provenance(id: u8) -> Vec<&'static str> {
    source(id)
        .map(|s| {
            s.lines()
                .take_while(|l| l.starts_with('#'))
                .map(|l| l.trim_start_matches('#').trim())
                .collect()
        })
        .unwrap_or_default()
}

fn source(id: u8) -> Option<&'static str> {
    match id {
        1 => Some(TABLE1),
        2 => Some(TABLE2),
        3 => Some(TABLE3),
        4 => Some(TABLE4),
        5 => Some(TABLE5),
        _ => None,
    }
}

fn reader(src: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(src.as_bytes())
}

#[derive(Deserialize)]
struct IonRow {
    k: usize,
    m: i64,
    gamma: f64,
    energy: f64,
}

#[derive(Deserialize)]
#[allow(non_snake_case)]
struct InteractionRow {
    k: usize,
    m: i64,
    Gamma: f64,
    energy: f64,
    reference: Option<f64>,
}

#[derive(Deserialize)]
#[allow(non_snake_case)]
struct LevelRow {
    gamma_d: Option<f64>,
    gamma: Option<f64>,
    rank: Option<usize>,
    tag: char,
    k: usize,
    m: i64,
    K: usize,
    M: i64,
    s: u8,
    energy: f64,
    reference: Option<f64>,
}

/// Golden cells of table `id` in file order; `None` for an unknown table.
pub fn golden(id: u8) -> Option<Vec<GoldenCell>> {
    let src = source(id)?;
    let mut rd = reader(src);
    let cells = match id {
        1 => rd
            .deserialize::<IonRow>()
            .map(|r| {
                let r = r.expect("table 1 golden data");
                GoldenCell {
                    level: Level::Ion(StateLabel::new(r.k, r.m)),
                    dot: DotParams::new(r.gamma, 0.2),
                    expected: r.energy,
                    reference: None,
                    tag: None,
                    rank: None,
                }
            })
            .collect(),
        2 | 3 => rd
            .deserialize::<InteractionRow>()
            .map(|r| {
                let r = r.expect("interaction golden data");
                GoldenCell {
                    level: Level::Interaction(StateLabel::new(r.k, r.m)),
                    dot: DotParams::new(0.0, r.Gamma),
                    expected: r.energy,
                    reference: r.reference,
                    tag: None,
                    rank: None,
                }
            })
            .collect(),
        _ => rd
            .deserialize::<LevelRow>()
            .map(|r| {
                let r = r.expect("two-electron golden data");
                let state = TwoElectronState::new(r.k, r.m, r.K, r.M);
                debug_assert_eq!(state.spin(), r.s);
                GoldenCell {
                    level: Level::TwoElectron(state),
                    dot: DotParams::new(r.gamma.unwrap_or(0.0), r.gamma_d.unwrap_or(0.2)),
                    expected: r.energy,
                    reference: r.reference,
                    tag: Some(r.tag),
                    rank: r.rank,
                }
            })
            .collect(),
    };
    Some(cells)
}

/// Evaluate every cell of table `id`, in file order.
pub fn evaluate_table(solver: &DotSolver, id: u8) -> Option<Vec<CellResult>> {
    let cells = golden(id)?;
    Some(
        cells
            .into_par_iter()
            .map(|cell| {
                let outcome = cell.level.evaluate(solver, cell.dot);
                CellResult { cell, outcome }
            })
            .collect(),
    )
}

/// The curves behind one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub levels: Vec<Level>,
    pub axis: ScanAxis,
    pub coulomb: bool,
    /// `(start, stop, step)` of the default grid.
    pub grid: (f64, f64, f64),
}

fn ions(states: &[(usize, i64)]) -> Vec<Level> {
    states.iter().map(|&(k, m)| Level::Ion(StateLabel::new(k, m))).collect()
}

/// Definition of figure `id`; `None` for an unknown figure.
pub fn figure(id: u8) -> Option<FigureSpec> {
    let field = ScanAxis::Gamma { gamma_d: 0.2 };
    let small_gamma = (0.0, 0.4, 0.01);
    let two_electron: Vec<Level> = [
        (0, 0, 0, 0),
        (0, -1, 0, 0),
        (0, 0, 0, -1),
        (0, -2, 0, 0),
        (0, -1, 0, -1),
        (0, -3, 0, 0),
        (1, 0, 0, 0),
        (1, -1, 0, 0),
        (1, 0, 0, -1),
        (1, -2, 0, 0),
        (1, -1, 0, -1),
    ]
    .iter()
    .map(|&(k, m, kk, mm)| Level::TwoElectron(TwoElectronState::new(k, m, kk, mm)))
    .collect();
    let spec = |levels, axis, coulomb, grid| FigureSpec {
        id,
        levels,
        axis,
        coulomb,
        grid,
    };
    Some(match id {
        1 => spec(
            ions(&[
                (0, 0),
                (0, -1),
                (0, -2),
                (0, -3),
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 0),
                (1, -1),
                (1, -2),
                (1, 1),
                (2, 0),
                (2, -1),
                (2, -2),
                (2, -3),
            ]),
            field,
            false,
            small_gamma,
        ),
        2 => spec(ions(&[(0, 0), (0, -1), (0, -2), (0, -3)]), field, true, small_gamma),
        3 => spec(
            ions(&[(1, 0), (0, 2), (0, 3), (1, -1), (0, 1), (1, -2)]),
            field,
            true,
            small_gamma,
        ),
        4 => spec(
            ions(&[(2, 0), (1, 1), (2, -1), (2, -2), (2, -3)]),
            field,
            true,
            small_gamma,
        ),
        5 => spec(
            [
                (0, 0),
                (1, 0),
                (2, 0),
                (3, 0),
                (0, 1),
                (1, 1),
                (2, 1),
                (0, 2),
                (1, 2),
                (2, 2),
                (0, 3),
                (0, 4),
            ]
            .iter()
            .map(|&(k, m)| Level::Interaction(StateLabel::new(k, m)))
            .collect(),
            ScanAxis::BigGamma,
            true,
            (0.05, 5.0, 0.05),
        ),
        6 => spec(two_electron, field, false, small_gamma),
        7 => spec(two_electron, field, true, small_gamma),
        _ => return None,
    })
}

/// Points `start, start + step, ...` up to `stop` inclusive (within rounding).
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
