use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "pslet-cli", version, about = "Quantum-dot spectra from the shifted-l expansion")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one state and print a single record.
    Solve(SolveArgs),
    /// Recompute a published table and diff it against the embedded values.
    Table(TableArgs),
    /// Emit the curves behind a published figure.
    Figure(FigureArgs),
    /// Scan arbitrary states over a field or confinement range.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Last energy correction E^(n) to build.
    #[arg(long, default_value_t = 19)]
    pub order: usize,
    /// Pade degrees `M,N` (numerator, denominator).
    #[arg(long, default_value = "9,10", value_parser = parse_pade)]
    pub pade: (usize, usize),
    /// Switch off the Coulomb term (ion-electron or electron-electron).
    #[arg(long)]
    pub no_coulomb: bool,
    /// Run the hierarchy in double-double arithmetic.
    #[arg(long)]
    pub double_double: bool,
    /// Append the finite-difference oracle's |delta E| to every record.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write records here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    /// Electron bound to a charged impurity.
    Ion,
    /// Two electrons: relative motion plus centre of mass.
    #[value(name = "two_electron", alias = "two-electron")]
    TwoElectron,
    /// Electron-electron interaction energy E_ee(k,m).
    Interaction,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub system: System,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    /// Centre-of-mass radial number (two_electron only).
    #[arg(long = "K", default_value_t = 0)]
    pub cm_k: usize,
    /// Centre-of-mass azimuthal number (two_electron only).
    #[arg(long = "M", default_value_t = 0, allow_hyphen_values = true)]
    pub cm_m: i64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long)]
    pub gamma_d: f64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub id: u8,
    /// Largest accepted |computed - printed| in Ry*.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
    pub id: u8,
    /// Field grid `start:stop:step` (figures 1-4, 6, 7).
    #[arg(long, value_parser = parse_range, conflicts_with = "big_gamma")]
    pub gamma: Option<(f64, f64, f64)>,
    /// Confinement grid `start:stop:step` (figure 5).
    #[arg(long = "Gamma", value_parser = parse_range)]
    pub big_gamma: Option<(f64, f64, f64)>,
    /// Crossings sidecar; defaults to `<output>.crossings.csv` when `--output` is set.
    #[arg(long)]
    pub crossings: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub system: System,
    /// States as `k,m` (or `k,m,K,M` for two_electron), separated by `;`.
    #[arg(long, value_parser = parse_states, allow_hyphen_values = true)]
    pub states: StateList,
    /// Field grid `start:stop:step`.
    #[arg(long, value_parser = parse_range)]
    pub gamma: Option<(f64, f64, f64)>,
    /// Scan Gamma at zero field instead of gamma.
    #[arg(long = "Gamma", value_parser = parse_range, conflicts_with = "gamma")]
    pub big_gamma: Option<(f64, f64, f64)>,
    #[arg(long, default_value_t = 0.2)]
    pub gamma_d: f64,
    #[arg(long)]
    pub crossings: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_pade(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `M,N`, got `{s}`"))?;
    let m = m.trim().parse().map_err(|e| format!("numerator degree: {e}"))?;
    let n = n.trim().parse().map_err(|e| format!("denominator degree: {e}"))?;
    Ok((m, n))
}

pub fn parse_range(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected `start:stop:step`, got `{s}`"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let (a, b, c) = (num(a)?, num(b)?, num(c)?);
    if !(c > 0.0) || b < a {
        return Err(format!("need stop >= start and step > 0, got `{s}`"));
    }
    Ok((a, b, c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateList(pub Vec<Vec<i64>>);

fn parse_states(s: &str) -> Result<StateList, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
                .collect()
        })
        .collect::<Result<_, _>>()
        .map(StateList)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_pade("9,10").unwrap(), (9, 10));
        assert!(parse_pade("9").is_err());
        assert_eq!(parse_range("0:0.4:0.01").unwrap(), (0.0, 0.4, 0.01));
        assert!(parse_range("0:0.4").is_err());
        assert!(parse_range("0.4:0:0.1").is_err());
        assert_eq!(parse_states("0,0;0,-1").unwrap().0, vec![vec![0, 0], vec![0, -1]]);
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
