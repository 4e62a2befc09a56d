//! Command-line front end.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeffs::{
    coeff_map, edge_map_with, write_edge_csv, write_map_csv, write_pgm16, write_sidecar,
    ShearSelection,
};
use crate::error::{Error, Result};
use crate::symbols::{EllipseRegion, FourierProvider, FourierTable};
use crate::system::{sample_symbol, Orientation, ShearletIndex, SparseSymbol, SymbolCache};
use crate::verify::{
    check_ab_lemma, check_decay_scales, check_fftfold, check_fresnel_lemma, check_lower_bound,
    check_p_lemma, check_support_with, check_upper_bound, check_windows, far_field_profile,
    far_translate, BoundsConfig, PGrid, QuadratureSpec, VerificationReport, FRESNEL_SPEC,
};
use crate::window::{make_exp_window, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "trigshear",
    version,
    about = "Trigonometric polynomial shearlets on the 2-torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Coefficients of one shearlet over the 2^s x 2^s translate grid.
    CoeffMap,
    /// Sum of coefficient magnitudes over shears and orientations.
    EdgeMap,
    /// Run a verification suite and write its JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Far-field coefficient decay across scales, as a CSV table.
    Decay,
    /// Indicator of the region with the coefficient magnitudes on top.
    Render,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Windows,
    Support,
    Fresnel,
    Ab,
    P12,
    Decay,
    Upper,
    Lower,
    Fftfold,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientArg {
    H,
    V,
    Both,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    /// Window rate b of g_b.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Scale j (even).
    #[arg(long, global = true)]
    pub j: Option<u32>,
    /// Single shear.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub l: Option<i64>,
    /// Shear range `lo:hi` (inclusive).
    #[arg(long = "l-range", global = true, allow_hyphen_values = true)]
    pub l_range: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub orient: Option<OrientArg>,
    /// Grid exponent: 2^s x 2^s translates.
    #[arg(long, global = true)]
    pub s: Option<u32>,
    /// Ellipse `a,b,gamma` (gamma in radians) or `a,b` with --gamma-deg.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ellipse: Option<String>,
    /// Ellipse rotation in degrees.
    #[arg(long = "gamma-deg", global = true, allow_hyphen_values = true)]
    pub gamma_deg: Option<f64>,
    /// Fourier coefficients `k1,k2,re,im` instead of an ellipse.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for sampled symbols.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Tolerance of the quadrature or oracle comparison.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

/// Shears requested on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum ShearSpec {
    Default,
    Single(i64),
    Range(RangeInclusive<i64>),
}

/// Validated run parameters.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub window: Window,
    pub scale: Option<u32>,
    pub shears: ShearSpec,
    pub orientations: Option<Vec<Orientation>>,
    pub grid: Option<u32>,
    pub ellipse: EllipseRegion,
    pub provider: FourierProvider,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
    pub tol: Option<f64>,
}

const DEFAULT_SCALE: u32 = 8;

fn default_ellipse() -> EllipseRegion {
    EllipseRegion::new(1.0, 3.0, PI / 6.0).expect("valid default ellipse")
}

fn parse_range(text: &str) -> Result<RangeInclusive<i64>> {
    let (lo, hi) = text
        .split_once(':')
        .or_else(|| text.split_once(','))
        .ok_or_else(|| Error::invalid(format!("shear range must be lo:hi, got {text:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::invalid(format!("bad shear {t:?} in range {text:?}")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(Error::invalid(format!("empty shear range {lo}:{hi}")));
    }
    Ok(lo..=hi)
}

fn parse_ellipse(text: Option<&str>, gamma_deg: Option<f64>) -> Result<EllipseRegion> {
    let Some(text) = text else {
        return match gamma_deg {
            Some(d) => EllipseRegion::new(1.0, 3.0, d.to_radians()),
            None => Ok(default_ellipse()),
        };
    };
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number {t:?} in --ellipse")))
        })
        .collect::<Result<_>>()?;
    match (parts.as_slice(), gamma_deg) {
        ([a, b], Some(d)) => EllipseRegion::new(*a, *b, d.to_radians()),
        ([a, b], None) => EllipseRegion::new(*a, *b, 0.0),
        ([a, b, g], None) => EllipseRegion::new(*a, *b, *g),
        ([_, _, _], Some(_)) => Err(Error::invalid(
            "give the rotation either in --ellipse or in --gamma-deg, not both",
        )),
        _ => Err(Error::invalid("--ellipse takes a,b,gamma or a,b")),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let o = cli.options;
        let window = make_exp_window(o.b.unwrap_or(0.025))?;
        if let Some(j) = o.j {
            if j < 2 || j % 2 != 0 {
                return Err(Error::invalid(format!(
                    "--j must be even and at least 2, got {j}"
                )));
            }
        }
        let shears = match (o.l, o.l_range.as_deref()) {
            (Some(_), Some(_)) => return Err(Error::invalid("use either --l or --l-range")),
            (Some(l), None) => ShearSpec::Single(l),
            (None, Some(r)) => ShearSpec::Range(parse_range(r)?),
            (None, None) => ShearSpec::Default,
        };
        let orientations = o.orient.map(|a| match a {
            OrientArg::H => vec![Orientation::Horizontal],
            OrientArg::V => vec![Orientation::Vertical],
            OrientArg::Both => Orientation::BOTH.to_vec(),
        });
        if let Some(s) = o.s {
            if s < 2 {
                return Err(Error::invalid(format!("--s must be at least 2, got {s}")));
            }
        }
        if let Some(t) = o.threads {
            if t == 0 {
                return Err(Error::invalid("--threads must be positive"));
            }
        }
        if let Some(t) = o.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("--tol must be positive, got {t}")));
            }
        }
        let ellipse = parse_ellipse(o.ellipse.as_deref(), o.gamma_deg)?;
        let provider = match &o.table {
            Some(path) => {
                if o.ellipse.is_some() {
                    return Err(Error::invalid("use either --ellipse or --table"));
                }
                FourierProvider::Table(FourierTable::from_csv(path)?)
            }
            None => FourierProvider::RotatedEllipse(ellipse),
        };
        Ok(Self {
            command: cli.command,
            window,
            scale: o.j,
            shears,
            orientations,
            grid: o.s,
            ellipse,
            provider,
            out: o.out,
            threads: o.threads,
            cache: o.cache,
            tol: o.tol,
        })
    }

    fn scale(&self) -> u32 {
        self.scale.unwrap_or(DEFAULT_SCALE)
    }

    fn grid(&self) -> u32 {
        self.grid.unwrap_or_else(|| self.scale())
    }

    fn single_index(&self) -> Result<ShearletIndex> {
        let o = match self.orientations.as_deref() {
            None => Orientation::Horizontal,
            Some([o]) => *o,
            Some(_) => return Err(Error::invalid("this command needs --orient h or v")),
        };
        let l = match self.shears {
            ShearSpec::Default => 0,
            ShearSpec::Single(l) => l,
            ShearSpec::Range(_) => {
                return Err(Error::invalid("this command takes --l, not --l-range"))
            }
        };
        ShearletIndex::new(o, self.scale(), l)
    }

    fn selection(&self) -> ShearSelection {
        ShearSelection {
            orientations: self
                .orientations
                .clone()
                .unwrap_or_else(|| Orientation::BOTH.to_vec()),
            shears: match &self.shears {
                ShearSpec::Default => None,
                ShearSpec::Single(l) => Some(*l..=*l),
                ShearSpec::Range(r) => Some(r.clone()),
            },
        }
    }

    fn symbols(&self) -> Result<Symbols> {
        Ok(Symbols {
            window: self.window,
            cache: self.cache.as_ref().map(SymbolCache::new).transpose()?,
        })
    }

    fn prepare_out(&self) -> Result<()> {
        fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))
    }
}

struct Symbols {
    window: Window,
    cache: Option<SymbolCache>,
}

impl Symbols {
    fn get(&self, idx: &ShearletIndex) -> Result<SparseSymbol> {
        match &self.cache {
            Some(c) => c.load_or_sample(&self.window, idx),
            None => sample_symbol(&self.window, idx),
        }
    }
}

fn orient_tag(o: Orientation) -> char {
    match o {
        Orientation::Horizontal => 'h',
        Orientation::Vertical => 'v',
    }
}

/// Files written by a command and, for `verify`, whether it passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: Option<bool>,
    pub summary: Vec<String>,
}

pub fn cmd_coeff_map(config: &RunConfig) -> Result<Outcome> {
    let idx = config.single_index()?;
    let s = config.grid();
    config.prepare_out()?;
    let symbol = config.symbols()?.get(&idx)?;
    let map = coeff_map(&symbol, &config.provider, s)?;
    let n = map.size();
    let stem = format!(
        "coeff-{}-j{}-l{}-s{s}",
        orient_tag(idx.orientation()),
        idx.scale(),
        idx.shear()
    );
    let pgm = config.out.join(format!("{stem}.pgm"));
    let csv = config.out.join(format!("{stem}.csv"));
    let json = config.out.join(format!("{stem}.json"));
    let scale = write_pgm16(&pgm, &map.magnitudes(), n)?;
    write_map_csv(&csv, map.values(), n)?;
    write_sidecar(&json, &idx.to_string(), s, &scale)?;
    Ok(Outcome {
        summary: vec![format!(
            "{idx} on 2^{s} grid: max |coeff| = {:.6e}",
            scale.max
        )],
        files: vec![pgm, csv, json],
        passed: None,
    })
}

pub fn cmd_edge_map(config: &RunConfig) -> Result<Outcome> {
    let j = config.scale();
    let s = config.grid();
    let selection = config.selection();
    config.prepare_out()?;
    let symbols = config.symbols()?;
    let map = edge_map_with(j, s, &config.provider, &selection, |idx| symbols.get(idx))?;
    let n = map.size();
    let stem = format!("edge-j{j}-s{s}");
    let pgm = config.out.join(format!("{stem}.pgm"));
    let csv = config.out.join(format!("{stem}.csv"));
    let json = config.out.join(format!("{stem}.json"));
    let sorted = config.out.join(format!("{stem}-sorted.csv"));
    let scale = write_pgm16(&pgm, map.values(), n)?;
    write_edge_csv(&csv, map.values(), n)?;
    let label = format!(
        "edge j={j} orientations={} shears={}",
        selection
            .orientations
            .iter()
            .map(|o| orient_tag(*o).to_string())
            .collect::<Vec<_>>()
            .join(","),
        match &selection.shears {
            Some(r) => format!("{}..={}", r.start(), r.end()),
            None => "all interior".to_string(),
        }
    );
    write_sidecar(&json, &label, s, &scale)?;
    write_sorted(&sorted, map.values())?;
    Ok(Outcome {
        summary: vec![format!(
            "{} maps summed on 2^{s} grid: max = {:.6e}",
            map.indices().len(),
            scale.max
        )],
        files: vec![pgm, csv, json, sorted],
        passed: None,
    })
}

/// `rank,value` with values in descending order, rank from 1.
fn write_sorted(path: &Path, values: &[f64]) -> Result<()> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["rank", "value"])
        .map_err(|e| csv_error(path, e))?;
    for (i, x) in v.iter().enumerate() {
        w.serialize((i + 1, x)).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

fn decay_scales(config: &RunConfig) -> Vec<u32> {
    let top = config.scale.unwrap_or(10);
    (6..=top.max(6)).step_by(2).collect()
}

pub fn cmd_decay(config: &RunConfig) -> Result<Outcome> {
    let scales = decay_scales(config);
    config.prepare_out()?;
    let far = far_translate(&config.ellipse, 6)?;
    let profile = far_field_profile(&config.ellipse, &config.window, &far, &scales)?;
    let path = config.out.join("decay.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    w.write_record([
        "j",
        "index",
        "aligned",
        "max_over_shears",
        "log2_drop_aligned",
        "log2_drop_max",
    ])
    .map_err(|e| csv_error(&path, e))?;
    let mut summary = vec![format!(
        "far translate y = ({:.6}, {:.6}), distance {:.4}",
        far.y[0], far.y[1], far.distance
    )];
    let mut prev: Option<(f64, f64)> = None;
    for f in &profile {
        let drops = prev.map(|(a, m)| {
            (
                a.log2() - f.aligned.log2(),
                m.log2() - f.max_over_shears.log2(),
            )
        });
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
        w.write_record([
            f.scale.to_string(),
            f.index.clone(),
            format!("{:.6e}", f.aligned),
            format!("{:.6e}", f.max_over_shears),
            fmt(drops.map(|d| d.0)),
            fmt(drops.map(|d| d.1)),
        ])
        .map_err(|e| csv_error(&path, e))?;
        summary.push(format!(
            "j={:>2} {:<18} aligned {:.3e}  max over shears {:.3e}",
            f.scale, f.index, f.aligned, f.max_over_shears
        ));
        prev = Some((f.aligned, f.max_over_shears));
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(Outcome {
        files: vec![path],
        passed: None,
        summary,
    })
}

/// Background level of the region in rendered images.
const RENDER_BACKGROUND: f64 = 0.2;

pub fn cmd_render(config: &RunConfig) -> Result<Outcome> {
    let s = config.grid();
    config.prepare_out()?;
    let symbols = config.symbols()?;
    let (values, label) = match (&config.shears, config.orientations.as_deref()) {
        (ShearSpec::Range(_), _) | (_, Some([_, _, ..])) => {
            let m = edge_map_with(
                config.scale(),
                s,
                &config.provider,
                &config.selection(),
                |i| symbols.get(i),
            )?;
            (m.values().to_vec(), format!("edge-j{}", config.scale()))
        }
        _ => {
            let idx = config.single_index()?;
            let m = coeff_map(&symbols.get(&idx)?, &config.provider, s)?;
            let tag = format!(
                "{}-j{}-l{}",
                orient_tag(idx.orientation()),
                idx.scale(),
                idx.shear()
            );
            (m.magnitudes(), tag)
        }
    };
    let n = 1usize << s;
    let peak = values.iter().copied().fold(0.0, f64::max);
    let with_region = matches!(config.provider, FourierProvider::RotatedEllipse(_));
    let composite: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let y = crate::coeffs::grid_translate(s, [i % n, i / n]);
            let x = [2.0 * PI * y[0], 2.0 * PI * y[1]];
            let bg = if with_region && config.ellipse.contains(x) {
                RENDER_BACKGROUND
            } else {
                0.0
            };
            let fg = if peak > 0.0 { v / peak } else { 0.0 };
            bg.max(fg)
        })
        .collect();
    let path = config.out.join(format!("render-{label}-s{s}.pgm"));
    write_pgm16(&path, &composite, n)?;
    Ok(Outcome {
        summary: vec![format!("rendered {label} on 2^{s} grid, peak {peak:.6e}")],
        files: vec![path],
        passed: None,
    })
}

pub fn run_suite(config: &RunConfig, suite: Suite) -> Result<VerificationReport> {
    let g = &config.window;
    let e = &config.ellipse;
    match suite {
        Suite::Windows => {
            let mut rates = vec![0.025, 0.1, 1.0];
            if !rates.contains(&g.rate()) {
                rates.push(g.rate());
            }
            check_windows(&rates, 10_000)
        }
        Suite::Support => {
            let symbols = config.symbols()?;
            check_support_with(config.scale.unwrap_or(10), |i| symbols.get(i))
        }
        Suite::Fresnel => {
            let spec = config.tol.map_or(FRESNEL_SPEC, QuadratureSpec::new);
            check_fresnel_lemma(1e-2, 20.0, &spec)
        }
        Suite::Ab => check_ab_lemma(g, 100, 0x7a5e_ed01),
        Suite::P12 => check_p_lemma(g, &PGrid::default()),
        Suite::Decay => {
            let scales: Vec<u32> = match config.scale {
                Some(j) => vec![j],
                None => vec![6, 8],
            };
            let o = match config.orientations.as_deref() {
                Some([o]) => *o,
                _ => Orientation::Horizontal,
            };
            let l = match config.shears {
                ShearSpec::Single(l) => l,
                _ => 0,
            };
            check_decay_scales(
                g,
                |j| ShearletIndex::new(o, j, l),
                &scales,
                config.grid.unwrap_or(7),
                2.0,
            )
        }
        Suite::Upper => check_upper_bound(e, g, &[6, 8, 10], 2.0, &BoundsConfig::default()),
        Suite::Lower => check_lower_bound(e, g, &[6, 8, 10], &BoundsConfig::default()),
        Suite::Fftfold => {
            let cases = match (config.scale, config.grid) {
                (Some(j), Some(s)) => vec![(j, s)],
                (Some(j), None) => vec![(j, 6)],
                _ => vec![(6, 5), (6, 6), (8, 6)],
            };
            check_fftfold(g, &config.provider, &cases, config.tol.unwrap_or(1e-10))
        }
    }
}

pub fn cmd_verify(config: &RunConfig, suite: Suite) -> Result<Outcome> {
    config.prepare_out()?;
    let report = run_suite(config, suite)?;
    let name = suite
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let path = config.out.join(format!("verify-{name}.json"));
    report.write(&path)?;
    let failures = report.failures().count();
    let mut summary = vec![format!(
        "{name}: {} ({} points, {failures} failed, min margin {:.3e})",
        if report.passed() { "PASS" } else { "FAIL" },
        report.points.len(),
        report.min_margin
    )];
    summary.extend(report.failures().take(5).map(|p| {
        format!(
            "  failed: {} value {:.6e} bound {:.6e}",
            p.input, p.value, p.bound
        )
    }));
    summary.extend(report.notes.iter().map(|n| format!("  note: {n}")));
    Ok(Outcome {
        files: vec![path],
        passed: Some(report.passed()),
        summary,
    })
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::CoeffMap => cmd_coeff_map(config),
        Command::EdgeMap => cmd_edge_map(config),
        Command::Verify { suite } => cmd_verify(config, *suite),
        Command::Decay => cmd_decay(config),
        Command::Render => cmd_render(config),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::InvalidIndex(_) | Error::UndefinedAngle => EXIT_USAGE,
        Error::Resource { .. }
        | Error::Io { .. }
        | Error::Format { .. }
        | Error::Quadrature { .. } => EXIT_RESOURCE,
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let result = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&config)),
            Err(e) => {
                eprintln!("error: cannot start {n} worker threads: {e}");
                return EXIT_RESOURCE;
            }
        },
        None => execute(&config),
    };
    match result {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            for line in &outcome.summary {
                let _ = writeln!(out, "{line}");
            }
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            match outcome.passed {
                Some(false) => EXIT_VERIFY_FAILED,
                _ => EXIT_OK,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
