//! Command-line front end. [`run`] returns the exit code and the text for
//! stdout so the whole surface can be driven from tests.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, AlphaSource};
use crate::error::{Error, Result};
use crate::filling::{self, BoundaryLift, BranchedCoverSpec, FillingEntry, FillingSpec};
use crate::io::{load_catalog, ReportEnvelope, ReportVerdict};
use crate::lattice::{CuspLattice, EuclideanVector, Slope};
use crate::metric::{self, AlphaOptions, GridOptions};
use crate::surface::{self, SurfaceData, TradeoffQuery};
use crate::tolerance::{self, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "cuspgauge", version, about = "Cusp geometry, filling certificates and filling metrics")]
struct Cli {
    /// Tolerance override, e.g. `1e-8` or `geometry=1e-8,ode=1e-6`
    /// (defaults to $CUSPGAUGE_TOL).
    #[arg(long, global = true)]
    tol: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cusp cross-section geometry.
    #[command(subcommand)]
    Cusp(CuspCmd),
    /// Filling certificates.
    #[command(subcommand)]
    Fill(FillCmd),
    /// Branched covers.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Solid-torus metrics.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Volume and Gromov-norm bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Essential-surface inequalities.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Catalog validation.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Debug, Args, Serialize)]
struct LatticeArgs {
    /// First basis vector `x,y`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    v1: Option<[f64; 2]>,
    /// Second basis vector `x,y`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    v2: Option<[f64; 2]>,
    /// The lattice is claimed to come from a maximal cusp.
    #[arg(long)]
    maximal: bool,
    /// Read the lattice from a catalog instead.
    #[arg(long, conflicts_with_all = ["v1", "v2"])]
    catalog: Option<PathBuf>,
    /// Catalog record name (defaults to the first record).
    #[arg(long, requires = "catalog")]
    record: Option<String>,
    /// Cusp index within the record.
    #[arg(long, default_value_t = 0, requires = "catalog")]
    cusp: usize,
}

#[derive(Debug, Subcommand)]
enum CuspCmd {
    /// Area, shortest translation, minimal slope and admissibility.
    Analyze(LatticeArgs),
    /// All slopes up to a length.
    Slopes {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        max_length: f64,
        #[arg(long)]
        csv: bool,
    },
    /// Slopes of length at most 2π on an admissible cusp.
    ShortCensus {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Subcommand)]
enum FillCmd {
    /// Certify that every filling slope is longer than 2π + ε.
    Certify {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Filling slope `p/q` (single cusp, or one per cusp of a catalog record).
        #[arg(long = "slope", allow_hyphen_values = true, value_parser = parse_slope, required = true)]
        slopes: Vec<Slope>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Length bound implied by the distance to a short or minimal slope.
    AuditDistance {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        slope: Slope,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        reference: Slope,
    },
    /// Knot-exterior surgery coefficient `p/q` against the `|q| > 22` criterion.
    Fraction {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
}

#[derive(Debug, Subcommand)]
enum CoverCmd {
    /// Branched cover whose lifted boundary meridians must reach length 7.
    Certify {
        #[arg(long)]
        degree: u32,
        /// Boundary lift `index:meridian_length`, repeatable.
        #[arg(long = "lift", value_parser = parse_lift, required = true)]
        lifts: Vec<BoundaryLift>,
        #[arg(long)]
        base_volume: Option<f64>,
    },
}

#[derive(Debug, Args, Serialize)]
struct GridArgs {
    #[arg(long, default_value_t = GridOptions::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = GridOptions::default().ramp_width)]
    ramp_width: f64,
}

impl GridArgs {
    fn options(&self) -> GridOptions {
        GridOptions { samples: self.samples, ramp_width: self.ramp_width, ..GridOptions::default() }
    }
}

#[derive(Debug, Subcommand)]
enum MetricCmd {
    /// Build and certify a profile. Without `--t` the best pinching is searched.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        l1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        l2: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Attach a hyperbolic collar of this width.
        #[arg(long)]
        collar: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        /// Emit the sampled profile as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Best certified pinching constant over a grid of meridian lengths.
    AlphaCurve {
        /// Comma separated meridian lengths.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        grid: Vec<f64>,
        #[command(flatten)]
        grid_opts: GridArgs,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    /// Volume lower bound and curvature window after filling.
    Propagate {
        #[arg(long, allow_hyphen_values = true)]
        volume: f64,
        /// Shortest filling slope length.
        #[arg(long, allow_hyphen_values = true)]
        length: f64,
        /// Use this pinching constant instead of estimating it.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Gromov-norm interval of the unfilled manifold.
    Gromov {
        #[arg(long, allow_hyphen_values = true)]
        norm: f64,
        #[arg(long, allow_hyphen_values = true)]
        length: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum SurfaceCmd {
    /// Check `l(s) · curves < -2π χ(F)`.
    Audit {
        #[arg(long, allow_hyphen_values = true)]
        length: f64,
        #[arg(long)]
        curves: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 1)]
        boundary: u32,
        #[arg(long)]
        non_orientable: bool,
    },
    /// Genus against surgery denominator.
    Tradeoff {
        #[arg(long, conflicts_with = "q", required_unless_present = "q")]
        genus: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCmd {
    /// Load a catalog and report per-record diagnostics.
    Check {
        path: PathBuf,
        #[arg(long)]
        strict: bool,
    },
}

fn parse_vector(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([x, y])
}

fn parse_pq(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once('/').ok_or_else(|| Error::InvalidSlope(format!("expected `p/q`, got `{s}`")))?;
    let p = a.trim().parse().map_err(|_| Error::InvalidSlope(format!("bad numerator `{a}`")))?;
    let q = b.trim().parse().map_err(|_| Error::InvalidSlope(format!("bad denominator `{b}`")))?;
    Ok((p, q))
}

fn parse_slope(s: &str) -> std::result::Result<Slope, String> {
    let (p, q) = parse_pq(s).map_err(|e| e.to_string())?;
    Slope::primitive(p, q).map_err(|e| e.to_string())
}

fn parse_lift(s: &str) -> std::result::Result<BoundaryLift, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `index:length`, got `{s}`"))?;
    Ok(BoundaryLift {
        branching_index: a.trim().parse().map_err(|e| format!("bad index `{a}`: {e}"))?,
        meridian_length: b.trim().parse().map_err(|e| format!("bad length `{b}`: {e}"))?,
    })
}

impl LatticeArgs {
    fn lattices(&self) -> Result<Vec<CuspLattice>> {
        if let Some(path) = &self.catalog {
            let load = load_catalog(path, false)?;
            let record = match &self.record {
                Some(name) => load.records.iter().find(|r| &r.name == name),
                None => load.records.first(),
            }
            .ok_or_else(|| Error::Catalog("no matching valid record".into()))?;
            return Ok(record.cusps.clone());
        }
        match (self.v1, self.v2) {
            (Some(a), Some(b)) => Ok(vec![CuspLattice::new(
                EuclideanVector::new(a[0], a[1]),
                EuclideanVector::new(b[0], b[1]),
                self.maximal,
            )?]),
            _ => Err(Error::InvalidArgument("give --v1 and --v2, or --catalog".into())),
        }
    }

    fn lattice(&self) -> Result<CuspLattice> {
        let all = self.lattices()?;
        if self.catalog.is_some() {
            all.get(self.cusp)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("record has no cusp {}", self.cusp)))
        } else {
            Ok(all[0])
        }
    }
}

/// Command output: a JSON report, or a CSV table when requested.
struct Outcome {
    report: ReportEnvelope,
    csv: Option<String>,
}

fn report(command: &str, inputs: serde_json::Value, results: impl Serialize, verdict: ReportVerdict) -> Outcome {
    Outcome { report: ReportEnvelope::new(command, inputs, results, verdict), csv: None }
}

fn slopes_csv(rows: &[crate::lattice::SlopeMeasurement]) -> String {
    let mut out = String::from("p,q,length\n");
    for m in rows {
        out.push_str(&format!("{},{},{}\n", m.slope.p(), m.slope.q(), crate::io::fmt_sig(m.length)));
    }
    out
}

fn cusp(cmd: &CuspCmd) -> Result<Outcome> {
    match cmd {
        CuspCmd::Analyze(args) => {
            let l = args.lattice()?;
            let adm = l.admissibility();
            let min = l.minimal_slope();
            let results = json!({
                "lattice": l,
                "area": l.area(),
                "shortest_translation": l.shortest_length(),
                "minimal_slope": min,
                "admissibility": adm,
                "cusp_volume": bounds::cusp_volume(&l),
            });
            Ok(report("cusp analyze", json!({ "lattice": args }), results, ReportVerdict::from_bool(adm.admissible())))
        }
        CuspCmd::Slopes { lattice, max_length, csv } => {
            let l = lattice.lattice()?;
            let slopes = l.enumerate_slopes(*max_length)?;
            let table = csv.then(|| slopes_csv(&slopes));
            let results = json!({ "count": slopes.len(), "slopes": slopes });
            let mut out = report(
                "cusp slopes",
                json!({ "lattice": lattice, "max_length": max_length }),
                results,
                ReportVerdict::Certified,
            );
            out.csv = table;
            Ok(out)
        }
        CuspCmd::ShortCensus { lattice, csv } => {
            let l = lattice.lattice()?;
            let census = filling::short_slope_census(&l)?;
            let table = csv.then(|| slopes_csv(&census.slopes));
            let verdict = ReportVerdict::from_bool(census.within_bound);
            let mut out = report("cusp short-census", json!({ "lattice": lattice }), census, verdict);
            out.csv = table;
            Ok(out)
        }
    }
}

fn fill(cmd: &FillCmd) -> Result<Outcome> {
    match cmd {
        FillCmd::Certify { lattice, slopes, epsilon } => {
            let lattices = lattice.lattices()?;
            let lattices =
                if lattice.catalog.is_some() && slopes.len() == 1 { vec![lattice.lattice()?] } else { lattices };
            if lattices.len() != slopes.len() {
                return Err(Error::InvalidArgument(format!("{} cusps but {} slopes", lattices.len(), slopes.len())));
            }
            let entries = lattices
                .into_iter()
                .zip(slopes)
                .enumerate()
                .map(|(i, (lattice, &slope))| FillingEntry { cusp_id: format!("cusp{i}"), lattice, slope })
                .collect();
            let spec = FillingSpec::new(entries, *epsilon)?;
            let cert = filling::certify_two_pi(&spec);
            let verdict = ReportVerdict::from_bool(cert.verdict.is_certified());
            Ok(report(
                "fill certify",
                json!({ "lattice": lattice, "slopes": slopes, "epsilon": epsilon }),
                cert,
                verdict,
            ))
        }
        FillCmd::AuditDistance { lattice, slope, reference } => {
            let l = lattice.lattice()?;
            let audit = filling::distance_criterion_audit(&l, *slope, *reference)?;
            let verdict = ReportVerdict::from_bool(audit.bound_consistent);
            Ok(report(
                "fill audit-distance",
                json!({ "lattice": lattice, "slope": slope, "reference": reference }),
                audit,
                verdict,
            ))
        }
        FillCmd::Fraction { fraction } => {
            let (p, q) = parse_pq(fraction)?;
            let check = filling::surgery_fraction_check(p, q)?;
            let mut results = serde_json::to_value(&check).expect("serializable");
            let class = if check.satisfied { "certified-threshold" } else { "below-threshold" };
            results["classification"] = json!(class);
            Ok(report(
                "fill fraction",
                json!({ "fraction": fraction }),
                results,
                ReportVerdict::from_bool(check.satisfied),
            ))
        }
    }
}

fn cover(cmd: &CoverCmd) -> Result<Outcome> {
    let CoverCmd::Certify { degree, lifts, base_volume } = cmd;
    let spec = BranchedCoverSpec::new(*degree, lifts.clone(), *base_volume)?;
    let cert = filling::certify_branched_cover(&spec);
    let verdict = ReportVerdict::from_bool(cert.verdict.is_certified());
    Ok(report("cover certify", json!({ "degree": degree, "lifts": lifts, "base_volume": base_volume }), cert, verdict))
}

fn metric(cmd: &MetricCmd) -> Result<Outcome> {
    match cmd {
        MetricCmd::Build { l1, l2, t, collar, grid, csv } => {
            // Out of domain regardless of t, so this is an input error
            // rather than an infeasible search.
            if !(l1.is_finite() && *l1 > std::f64::consts::TAU) {
                return Err(Error::InvalidArgument(format!("meridian length {l1} must exceed 2π")));
            }
            let opts = grid.options();
            let (t, source) = match t {
                Some(t) => (*t, "supplied"),
                None => {
                    let alpha_opts = AlphaOptions { grid: opts, ..AlphaOptions::default() };
                    (metric::alpha_estimate(*l1, &alpha_opts)?.t, "searched")
                }
            };
            let mut profile = metric::build_profile(*l1, *l2, t, &opts)?;
            if let Some(c) = collar {
                profile = metric::attach_collar(&profile, *c)?;
            }
            let cert = metric::pinch_certificate(&profile)?;
            let results = json!({
                "construction": profile.construction(),
                "t_source": source,
                "core_gradient": profile.core_gradient(),
                "outer_meridian": profile.outer_meridian(),
                "outer_longitude": profile.outer_longitude(),
                "volume": metric::profile_volume(&profile),
                "samples": profile.len(),
                "certificate": cert,
            });
            let verdict = ReportVerdict::from_bool(cert.valid);
            let inputs = json!({ "l1": l1, "l2": l2, "t": t, "collar": collar, "grid": grid });
            let mut out = report("metric build", inputs, results, verdict);
            out.csv = csv.then(|| profile.to_csv());
            Ok(out)
        }
        MetricCmd::AlphaCurve { grid, grid_opts, csv } => {
            let opts = AlphaOptions { grid: grid_opts.options(), ..AlphaOptions::default() };
            let rows = metric::alpha_curve(grid, &opts);
            let all_ok = rows.iter().all(|r| r.outcome.is_ok());
            let table: Vec<_> = rows
                .iter()
                .map(|r| match &r.outcome {
                    Ok(e) => json!({
                        "l1": r.l1, "t_star": e.t, "alpha": e.alpha,
                        "kappa_inf": e.certificate.kappa_inf, "kappa_sup": e.certificate.kappa_sup,
                        "volume_ratio": e.certificate.volume_ratio, "status": r.status(),
                    }),
                    Err(err) => json!({ "l1": r.l1, "status": r.status(), "error": err.to_string() }),
                })
                .collect();
            let mut out = report(
                "metric alpha-curve",
                json!({ "grid": grid, "grid_options": grid_opts }),
                json!({ "rows": table }),
                ReportVerdict::from_bool(all_ok),
            );
            out.csv = csv.then(|| metric::alpha_curve_csv(&rows));
            Ok(out)
        }
    }
}

fn alpha_source(alpha: Option<f64>) -> AlphaSource {
    match alpha {
        Some(a) => AlphaSource::Supplied(a),
        None => AlphaSource::Estimate(AlphaOptions::default()),
    }
}

fn bounds_cmd(cmd: &BoundsCmd) -> Result<Outcome> {
    match cmd {
        BoundsCmd::Propagate { volume, length, alpha } => {
            let r = bounds::propagate_filling_bounds(*volume, *length, &alpha_source(*alpha))?;
            Ok(report(
                "bounds propagate",
                json!({ "volume": volume, "length": length, "alpha": alpha }),
                r,
                ReportVerdict::Certified,
            ))
        }
        BoundsCmd::Gromov { norm, length, alpha } => {
            let r = bounds::gromov_interval(*norm, *length, &alpha_source(*alpha))?;
            Ok(report(
                "bounds gromov",
                json!({ "norm": norm, "length": length, "alpha": alpha }),
                r,
                ReportVerdict::Certified,
            ))
        }
    }
}

fn surface_cmd(cmd: &SurfaceCmd) -> Result<Outcome> {
    match cmd {
        SurfaceCmd::Audit { length, curves, genus, boundary, non_orientable } => {
            let s = SurfaceData::new(*genus, *boundary, !non_orientable)?;
            let audit = surface::boundary_length_audit(*length, *curves, &s)?;
            let verdict = ReportVerdict::from_bool(audit.consistent);
            Ok(report("surface audit", json!({ "length": length, "curves": curves, "surface": s }), audit, verdict))
        }
        SurfaceCmd::Tradeoff { genus, q } => {
            let query = match (genus, q) {
                (Some(g), _) => TradeoffQuery::Genus(*g),
                (None, Some(q)) => TradeoffQuery::Denominator(*q),
                (None, None) => return Err(Error::InvalidArgument("give --genus or --q".into())),
            };
            let t = surface::genus_slope_tradeoff(query)?;
            Ok(report("surface tradeoff", json!({ "genus": genus, "q": q }), t, ReportVerdict::Certified))
        }
    }
}

fn catalog_cmd(cmd: &CatalogCmd) -> Result<Outcome> {
    let CatalogCmd::Check { path, strict } = cmd;
    let load = load_catalog(path, *strict)?;
    let verdict = ReportVerdict::from_bool(load.diagnostics.is_empty());
    Ok(report("catalog check", json!({ "path": path, "strict": strict }), load, verdict))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cusp(CuspCmd::Analyze(_)) => "cusp analyze",
        Command::Cusp(CuspCmd::Slopes { .. }) => "cusp slopes",
        Command::Cusp(CuspCmd::ShortCensus { .. }) => "cusp short-census",
        Command::Fill(FillCmd::Certify { .. }) => "fill certify",
        Command::Fill(FillCmd::AuditDistance { .. }) => "fill audit-distance",
        Command::Fill(FillCmd::Fraction { .. }) => "fill fraction",
        Command::Cover(_) => "cover certify",
        Command::Metric(MetricCmd::Build { .. }) => "metric build",
        Command::Metric(MetricCmd::AlphaCurve { .. }) => "metric alpha-curve",
        Command::Bounds(BoundsCmd::Propagate { .. }) => "bounds propagate",
        Command::Bounds(BoundsCmd::Gromov { .. }) => "bounds gromov",
        Command::Surface(SurfaceCmd::Audit { .. }) => "surface audit",
        Command::Surface(SurfaceCmd::Tradeoff { .. }) => "surface tradeoff",
        Command::Catalog(_) => "catalog check",
    }
}

fn install_tolerances(flag: Option<&str>) -> Result<()> {
    let spec = match flag {
        Some(s) => s.to_owned(),
        None => match std::env::var(tolerance::ENV_VAR) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        },
    };
    let tol = Tolerances::parse(&spec)?;
    if tol != tolerance::current() {
        tolerance::install(tol)?;
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs one command.
/// Returns the exit code and everything meant for stdout.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let name = command_name(&cli.command);
    if let Err(e) = install_tolerances(cli.tol.as_deref()) {
        let r = ReportEnvelope::from_error(name, json!({ "tol": cli.tol }), &e);
        return (r.verdict.exit_code(), r.to_json());
    }
    let outcome = match &cli.command {
        Command::Cusp(c) => cusp(c),
        Command::Fill(c) => fill(c),
        Command::Cover(c) => cover(c),
        Command::Metric(c) => metric(c),
        Command::Bounds(c) => bounds_cmd(c),
        Command::Surface(c) => surface_cmd(c),
        Command::Catalog(c) => catalog_cmd(c),
    };
    match outcome {
        Ok(Outcome { report, csv }) => (report.verdict.exit_code(), csv.unwrap_or_else(|| report.to_json())),
        Err(e) => {
            let r = ReportEnvelope::from_error(name, json!({}), &e);
            (r.verdict.exit_code(), r.to_json())
        }
    }
}
