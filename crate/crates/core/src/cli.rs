//! The `darboux` command line.
//!
//! Every flag can also come from a JSON file given with `--config`; flags
//! win over the file. Series are written as CSV with 12 significant digits
//! and finalized by rename only after the written bytes re-parse cleanly.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::factorize::{alpha_numeric, partner_coefficients};
use crate::families::{self, FamilyKind, FamilyParams, SuperpositionConstants};
use crate::funcs::{c, make_grid, TimeGrid};
use crate::verify::{crosscheck_family, run_suite, Suite};
use crate::{Error, Result, C64};

/// Process exit status for success.
pub const EXIT_OK: i32 = 0;
/// Bad flags, bad values, unreadable config, unwritable output.
pub const EXIT_USAGE: i32 = 1;
/// Singular window, non-finite state or a failed tolerance.
pub const EXIT_NUMERICAL: i32 = 2;

/// Relative tolerance of the `abs² = re² + im²` check on re-parsed output.
///
/// Rounding each of three values to 12 significant digits already costs up
/// to 5e-12 relative apiece.
pub const ABS_CHECK_TOL: f64 = 3e-11;

/// Default sample count for emitted series.
pub const DEFAULT_SAMPLES: usize = 2001;

#[derive(Debug, Parser)]
#[command(
    name = "darboux",
    version,
    about = "Darboux-partner parametric oscillators"
)]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the closed-form solution of a family as a CSV series.
    Family(Flags),
    /// Emit the data series behind one of the nine figures.
    Figure(Flags),
    /// List the singular times of a family on a window.
    Scan(Flags),
    /// Run the built-in verification suites.
    Verify(Flags),
    /// Run the numeric factorization pipeline and compare with the closed forms.
    Factorize(Flags),
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Flags {
    /// Family: trig or hyp.
    #[arg(long)]
    pub kind: Option<FamilyKind>,
    /// Frequency of the trigonometric family.
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    /// Rate of the hyperbolic family.
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,
    /// Deformation parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// First trigonometric constant, "re[,im]".
    #[arg(long, value_parser = parse_constant, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_constant")]
    pub c1: Option<C64>,
    /// Second trigonometric constant, "re[,im]".
    #[arg(long, value_parser = parse_constant, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_constant")]
    pub c2: Option<C64>,
    /// First hyperbolic constant, "re[,im]".
    #[arg(long, value_parser = parse_constant, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_constant")]
    pub c3: Option<C64>,
    /// Second hyperbolic constant, "re[,im]".
    #[arg(long, value_parser = parse_constant, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_constant")]
    pub c4: Option<C64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// Number of samples, endpoints included.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output file. Series go to stdout when absent (figures default to figure_<id>.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Figure number, 1 to 9.
    #[arg(long)]
    pub id: Option<u8>,
    /// all, factorize, families or verify.
    #[arg(long)]
    pub suite: Option<String>,
}

impl Flags {
    /// Fills every unset field from `base`.
    pub fn or(self, base: Flags) -> Flags {
        Flags {
            kind: self.kind.or(base.kind),
            omega0: self.omega0.or(base.omega0),
            k0: self.k0.or(base.k0),
            lambda: self.lambda.or(base.lambda),
            c1: self.c1.or(base.c1),
            c2: self.c2.or(base.c2),
            c3: self.c3.or(base.c3),
            c4: self.c4.or(base.c4),
            t0: self.t0.or(base.t0),
            t1: self.t1.or(base.t1),
            n: self.n.or(base.n),
            out: self.out.or(base.out),
            id: self.id.or(base.id),
            suite: self.suite.or(base.suite),
        }
    }

    /// Reads a JSON config. Constants may be numbers, `[re, im]` or `"re,im"`.
    pub fn from_json_file(path: &Path) -> Result<Flags> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }
}

/// Parses `"re"` or `"re,im"` into a complex constant.
pub fn parse_constant(s: &str) -> std::result::Result<C64, String> {
    let mut parts = s.split(',').map(str::trim);
    let num = |p: Option<&str>| -> std::result::Result<f64, String> {
        let p = p.ok_or_else(|| format!("empty constant `{s}`"))?;
        let v: f64 = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{p}` is not finite"))
        }
    };
    let re = num(parts.next())?;
    let im = match parts.next() {
        Some(p) => num(Some(p))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("constant `{s}` has more than two parts"));
    }
    Ok(C64::new(re, im))
}

fn de_constant<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<C64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Pair([f64; 2]),
        Text(String),
    }
    Ok(match Option::<Raw>::deserialize(d)? {
        None => None,
        Some(Raw::Num(x)) => Some(c(x)),
        Some(Raw::Pair([re, im])) => Some(C64::new(re, im)),
        Some(Raw::Text(s)) => Some(parse_constant(&s).map_err(serde::de::Error::custom)?),
    })
}

/// Fully resolved parameters for one family evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub params: FamilyParams,
    pub constants: SuperpositionConstants,
    pub grid: TimeGrid,
}

impl RunConfig {
    /// Figure parameters of the kind, overridden by `flags`.
    pub fn resolve(flags: &Flags, kind: FamilyKind) -> Result<RunConfig> {
        let (rate, lambda, c_a, c_b, t1) = match kind {
            FamilyKind::Trig => {
                if flags.k0.is_some() || flags.c3.is_some() || flags.c4.is_some() {
                    return Err(Error::InvalidArgument(
                        "--k0, --c3, --c4 belong to the hyp family".into(),
                    ));
                }
                (
                    flags.omega0.unwrap_or(3.5),
                    flags.lambda.unwrap_or(2.0),
                    flags.c1.unwrap_or(c(2.0 / 7.0)),
                    flags.c2.unwrap_or(c(7.0 / 4.0)),
                    4.0,
                )
            }
            FamilyKind::Hyp => {
                if flags.omega0.is_some() || flags.c1.is_some() || flags.c2.is_some() {
                    return Err(Error::InvalidArgument(
                        "--omega0, --c1, --c2 belong to the trig family".into(),
                    ));
                }
                (
                    flags.k0.unwrap_or(1.0),
                    flags.lambda.unwrap_or(0.5),
                    flags.c3.unwrap_or(c(2.0)),
                    flags.c4.unwrap_or(c(-1.0)),
                    6.0,
                )
            }
        };
        let params = FamilyParams::new(kind, rate, lambda)?;
        let grid = make_grid(
            flags.t0.unwrap_or(0.0),
            flags.t1.unwrap_or(t1),
            flags.n.unwrap_or(DEFAULT_SAMPLES),
        )?;
        Ok(RunConfig {
            params,
            constants: SuperpositionConstants::new(c_a, c_b),
            grid,
        })
    }

    /// Rejects windows that contain a zero of the family denominator.
    pub fn check_window(&self) -> Result<()> {
        let roots = families::singularity_scan(&self.params, &self.grid);
        if roots.is_empty() {
            Ok(())
        } else {
            Err(Error::SingularDenominator { times: roots })
        }
    }
}

/// A table of real columns ready to be written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    fn complex(grid: &TimeGrid, f: impl Fn(f64) -> Result<C64>) -> Result<Series> {
        let rows = grid
            .times()
            .map(|t| f(t).map(|y| vec![t, y.re, y.im, y.norm()]))
            .collect::<Result<_>>()?;
        Ok(Series {
            header: vec!["t", "re", "im", "abs"],
            rows,
        })
    }

    fn real(grid: &TimeGrid, f: impl Fn(f64) -> Result<f64>) -> Result<Series> {
        let rows = grid
            .times()
            .map(|t| f(t).map(|v| vec![t, v]))
            .collect::<Result<_>>()?;
        Ok(Series {
            header: vec!["t", "value"],
            rows,
        })
    }

    /// CSV text: header row, LF endings, `{:.11e}` cells.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    t: if bad == 0 { f64::NAN } else { row[0] },
                });
            }
            let cells: Vec<String> = row.iter().map(|v| format_cell(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_cell(v: f64) -> String {
    format!("{v:.11e}")
}

/// Parses CSV text written by [`Series::to_csv`] back into a header and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|line| {
            let row: Vec<f64> = line
                .split(',')
                .map(|cell| {
                    cell.parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad cell `{cell}`")))
                })
                .collect::<Result<_>>()?;
            if row.len() == header.len() {
                Ok(row)
            } else {
                Err(Error::InvalidArgument(format!(
                    "row `{line}` has {} cells",
                    row.len()
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

/// Largest relative violation of `abs² = re² + im²` in parsed CSV rows,
/// or zero when there is no `re,im,abs` triple.
pub fn abs_consistency(header: &[String], rows: &[Vec<f64>]) -> f64 {
    let col = |name: &str| header.iter().position(|h| h == name);
    let (Some(re), Some(im), Some(ab)) = (col("re"), col("im"), col("abs")) else {
        return 0.0;
    };
    rows.iter()
        .map(|r| {
            let lhs = r[ab] * r[ab];
            let rhs = r[re] * r[re] + r[im] * r[im];
            if lhs == rhs {
                0.0
            } else {
                (lhs - rhs).abs() / lhs.max(rhs)
            }
        })
        .fold(0.0, f64::max)
}

/// Writes `series` to a sibling temp file, re-parses it, checks the abs
/// column, then renames into place.
pub fn write_series_atomic(series: &Series, path: &Path) -> Result<()> {
    let text = series.to_csv()?;
    let name = path.file_name().ok_or_else(|| {
        Error::InvalidArgument(format!("`{}` is not a file path", path.display()))
    })?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));

    let result = (|| {
        let mut file = fs::File::create(&tmp).map_err(io)?;
        file.write_all(text.as_bytes()).map_err(io)?;
        file.sync_all().map_err(io)?;
        drop(file);
        let written = fs::read_to_string(&tmp).map_err(io)?;
        let (header, rows) = parse_csv(&written)?;
        let worst = abs_consistency(&header, &rows);
        if worst > ABS_CHECK_TOL || rows.len() != series.rows.len() {
            return Err(Error::CheckFailed(format!(
                "{}: abs column off by {worst:e} after re-parsing",
                path.display()
            )));
        }
        fs::rename(&tmp, path).map_err(io)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Which quantity a figure shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureSeries {
    /// `t,re,im,abs` plus the first v-mode.
    SolutionWithMode,
    Solution,
    Zeta,
    Frequency,
}

/// Family and series of figure `id`.
pub fn figure_layout(id: u8) -> Result<(FamilyKind, FigureSeries)> {
    Ok(match id {
        1 => (FamilyKind::Trig, FigureSeries::SolutionWithMode),
        2 => (FamilyKind::Trig, FigureSeries::Solution),
        3 => (FamilyKind::Trig, FigureSeries::Zeta),
        4 => (FamilyKind::Trig, FigureSeries::Frequency),
        5..=7 => (FamilyKind::Hyp, FigureSeries::Solution),
        8 => (FamilyKind::Hyp, FigureSeries::Zeta),
        9 => (FamilyKind::Hyp, FigureSeries::Frequency),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "figure id {id} is not in 1..=9"
            )))
        }
    })
}

/// Builds the series of figure `id` at the figure parameters, with any
/// overrides from `flags`.
pub fn figure_series(id: u8, flags: &Flags) -> Result<(RunConfig, Series)> {
    let (kind, what) = figure_layout(id)?;
    if flags.kind.is_some_and(|k| k != kind) {
        return Err(Error::InvalidArgument(format!(
            "figure {id} shows the {kind} family"
        )));
    }
    let cfg = RunConfig::resolve(flags, kind)?;
    cfg.check_window()?;
    let (p, k) = (cfg.params, cfg.constants);
    let solution = |t: f64| families::solution_jet(&p, &k, t).map(|j| j.value);
    let series = match what {
        FigureSeries::Solution => Series::complex(&cfg.grid, solution)?,
        FigureSeries::SolutionWithMode => {
            let mut s = Series::complex(&cfg.grid, solution)?;
            s.header.push("v1");
            for row in &mut s.rows {
                row.push(families::trig_v_modes(p.rate, row[0])?.0.re);
            }
            s
        }
        FigureSeries::Zeta => Series::real(&cfg.grid, |t| Ok(families::snapshot(&p, t)?.zeta.re))?,
        FigureSeries::Frequency => {
            Series::real(&cfg.grid, |t| Ok(families::snapshot(&p, t)?.frequency.re))?
        }
    };
    Ok((cfg, series))
}

/// Writes figure `id` and returns the path written.
pub fn emit_figure(id: u8, overrides: &Flags) -> Result<PathBuf> {
    let (_, series) = figure_series(id, overrides)?;
    let path = overrides
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("figure_{id}.csv")));
    write_series_atomic(&series, &path)?;
    Ok(path)
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let base = match &cli.config {
        Some(path) => Flags::from_json_file(path)?,
        None => Flags::default(),
    };
    let merge = |f: Flags| f.or(base.clone());
    match cli.command {
        Command::Family(f) => cmd_family(&merge(f)),
        Command::Figure(f) => cmd_figure(&merge(f)),
        Command::Scan(f) => cmd_scan(&merge(f)),
        Command::Verify(f) => cmd_verify(&merge(f)),
        Command::Factorize(f) => cmd_factorize(&merge(f)),
    }
}

fn warn_if_singular_domain(p: &FamilyParams) {
    if !families::nonsingular_domain(p) {
        eprintln!(
            "warning: lambda = {} is outside the nonsingular domain of the {} family",
            p.lambda, p.kind
        );
    }
}

fn emit(series: &Series, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_series_atomic(series, path),
        None => {
            std::io::stdout().write_all(series.to_csv()?.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_family(flags: &Flags) -> Result<i32> {
    let cfg = RunConfig::resolve(flags, flags.kind.unwrap_or(FamilyKind::Trig))?;
    warn_if_singular_domain(&cfg.params);
    cfg.check_window()?;
    let (p, k) = (cfg.params, cfg.constants);
    let series = Series::complex(&cfg.grid, |t| {
        families::solution_jet(&p, &k, t).map(|j| j.value)
    })?;
    emit(&series, flags.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_figure(flags: &Flags) -> Result<i32> {
    let id = flags
        .id
        .ok_or_else(|| Error::InvalidArgument("figure needs --id".into()))?;
    let (kind, _) = figure_layout(id)?;
    warn_if_singular_domain(&RunConfig::resolve(flags, kind)?.params);
    let path = emit_figure(id, flags)?;
    println!("{}", path.display());
    Ok(EXIT_OK)
}

fn cmd_scan(flags: &Flags) -> Result<i32> {
    let mut flags = flags.clone();
    flags.n = flags.n.or(Some(4001));
    let cfg = RunConfig::resolve(&flags, flags.kind.unwrap_or(FamilyKind::Trig))?;
    let roots = families::singularity_scan(&cfg.params, &cfg.grid);
    for r in &roots {
        println!("{r:.12}");
    }
    if roots.is_empty() {
        eprintln!(
            "no singular times in [{}, {}]",
            cfg.grid.t0(),
            cfg.grid.t1()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_verify(flags: &Flags) -> Result<i32> {
    let suite: Suite = flags.suite.as_deref().unwrap_or("all").parse()?;
    let outcomes = run_suite(suite);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} checks, {failed} failed", outcomes.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_NUMERICAL })
}

fn cmd_factorize(flags: &Flags) -> Result<i32> {
    let kind = flags.kind.unwrap_or(FamilyKind::Trig);
    let mut flags = flags.clone();
    // the pipeline needs a pole-free window: default to the checked windows
    if flags.t1.is_none() {
        flags.t1 = Some(match kind {
            FamilyKind::Trig => 0.4,
            FamilyKind::Hyp => 2.0,
        });
    }
    let cfg = RunConfig::resolve(&flags, kind)?;
    let report = crosscheck_family(&cfg.params, &cfg.grid)?;
    let p = cfg.params;
    let sol = alpha_numeric(
        &p.coefficients(),
        &p.seed(),
        c(p.numeric_lambda(cfg.grid.t0())),
        &cfg.grid,
    )?;
    let partner = partner_coefficients(&p.coefficients(), &sol)?;
    eprintln!(
        "closed form vs pipeline: {:.3e}, round trip: {:.3e} (tol {:.0e})",
        report.max_deviation, report.max_residual, report.tolerance
    );
    let rows = (0..cfg.grid.len())
        .map(|k| {
            let (a, f, g) = (sol.alpha[k], partner.damping[k], partner.frequency[k]);
            vec![cfg.grid.time(k), a.re, a.im, f.re, f.im, g.re, g.im]
        })
        .collect();
    let series = Series {
        header: vec!["t", "alpha_re", "alpha_im", "F_re", "F_im", "G_re", "G_im"],
        rows,
    };
    emit(&series, flags.out.as_deref())?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    })
}
