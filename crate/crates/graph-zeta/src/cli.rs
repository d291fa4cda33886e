//! Command-line surface: build fixtures, compute series and values, run the
//! verification suites, emit region and spectrum data.
//!
//! Every run is deterministic given its inputs: sample grids derive from
//! fixed seeds, quadrature orders are pinned, and JSON output carries a
//! provenance block with everything needed to reproduce a number. Exit
//! codes: 0 ok, 2 domain error, 3 budget exceeded, 1 otherwise.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::builders::{
    finite_family, gasket_exhaustion, periodic_lattice, FamilyKind, PeriodicSpec,
};
use crate::cycles::{Budget, DEFAULT_BUDGET};
use crate::error::{Result, ZetaError};
use crate::funceq;
use crate::graph::Graph;
use crate::numerics::{format_complex, parse_complex, SplitMix64};
use crate::operators::{tn_sequence, TraceContext};
use crate::spectral::spectral_cdf;
use crate::zeta::{log_zeta_series, verify_det_formula, zeta_eval};

#[derive(Parser, Debug)]
#[command(
    name = "graph-zeta",
    version,
    about = "Ihara and Bartholdi zeta functions of finite, periodic and self-similar graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients N_m, t_m and c_m = N_m/m of log Z at a fixed u
    Series(SeriesArgs),
    /// Evaluate Z(z, u) with a truncation error bound
    Eval(EvalArgs),
    /// Residuals of the determinant formula over a z-grid
    VerifyDet(VerifyDetArgs),
    /// |xi(z,u) - xi(psi(z,u))| over deterministic sample points
    VerifyFunceq(VerifyFunceqArgs),
    /// Point clouds of the singularity regions Omega_q, Omega_w, Omega~_q
    Region(RegionArgs),
    /// Spectral distribution table (lambda, F(lambda))
    Spectrum(SpectrumArgs),
    /// List built-in fixtures
    Fixtures(OutputArgs),
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Built-in fixture: c4, c5, k4, petersen, cycle-N, complete-N, path-N,
    /// z-lattice, ladder, z2-lattice, gasket
    #[arg(long)]
    fixture: Option<String>,
    /// Edge-list file: one "u v" pair per line, '#' comments
    #[arg(long, conflicts_with = "fixture")]
    edges: Option<PathBuf>,
    /// Periodic lattice spec (JSON: domain, edges with offsets, rank)
    #[arg(long, conflicts_with_all = ["fixture", "edges"])]
    periodic: Option<PathBuf>,
    /// Window radius for periodic lattices
    #[arg(long, default_value_t = 12)]
    window_radius: usize,
    /// Exhaustion level for the gasket fixture
    #[arg(long, default_value_t = 5)]
    level: usize,
}

impl SourceArgs {
    fn resolve(&self) -> Result<TraceContext> {
        if let Some(path) = &self.edges {
            let text = std::fs::read_to_string(path)?;
            return Ok(TraceContext::finite(Graph::from_edge_list_text(&text)?));
        }
        if let Some(path) = &self.periodic {
            let text = std::fs::read_to_string(path)?;
            let spec = PeriodicSpec::from_json(&text)?;
            return periodic_lattice(&spec, self.window_radius);
        }
        let name = self
            .fixture
            .as_deref()
            .ok_or_else(|| ZetaError::BadParameter("no graph source given".into()))?;
        resolve_fixture(name, self.window_radius, self.level)
    }
}

fn resolve_fixture(name: &str, window_radius: usize, level: usize) -> Result<TraceContext> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "c4" => Ok(TraceContext::finite(finite_family(FamilyKind::Cycle, 4)?)),
        "c5" => Ok(TraceContext::finite(finite_family(FamilyKind::Cycle, 5)?)),
        "k4" => Ok(TraceContext::finite(finite_family(FamilyKind::Complete, 4)?)),
        "petersen" => Ok(TraceContext::finite(finite_family(FamilyKind::Petersen, 10)?)),
        "z-lattice" | "z" => periodic_lattice(&PeriodicSpec::z_lattice(), window_radius),
        "ladder" => periodic_lattice(&PeriodicSpec::ladder(), window_radius),
        "z2-lattice" | "z2" => periodic_lattice(&PeriodicSpec::z2_lattice(), window_radius),
        "gasket" => gasket_exhaustion(level, 1e-6),
        other => {
            if let Some(n) = other.strip_prefix("cycle-") {
                let n = parse_count(n)?;
                return Ok(TraceContext::finite(finite_family(FamilyKind::Cycle, n)?));
            }
            if let Some(n) = other.strip_prefix("complete-") {
                let n = parse_count(n)?;
                return Ok(TraceContext::finite(finite_family(FamilyKind::Complete, n)?));
            }
            if let Some(n) = other.strip_prefix("path-") {
                let n = parse_count(n)?;
                return Ok(TraceContext::finite(finite_family(FamilyKind::Path, n)?));
            }
            Err(ZetaError::BadParameter(format!("unknown fixture `{other}`")))
        }
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| ZetaError::BadParameter(format!("bad count `{s}`")))
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
}

impl OutputArgs {
    fn emit(&self, json_doc: serde_json::Value, csv: String) -> Result<()> {
        let content = if self.format == "json" {
            format!("{}\n", serde_json::to_string_pretty(&json_doc)?)
        } else {
            csv
        };
        match &self.out {
            Some(path) => std::fs::write(path, content)?,
            None => {
                std::io::stdout().write_all(content.as_bytes())?;
            }
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Bartholdi parameter u
    #[arg(long, default_value = "0")]
    u: String,
    /// Truncation order M
    #[arg(long = "m-max", alias = "M", default_value_t = 20)]
    m_max: usize,
    /// Cross-check N_m and t_m against brute-force cycle enumeration
    /// (finite graphs, m <= 10; honors ZETA_BUDGET)
    #[arg(long)]
    oracle_check: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "0")]
    u: String,
    /// Evaluation point z
    #[arg(long)]
    z: String,
    #[arg(long = "m-max", alias = "M", default_value_t = 30)]
    m_max: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyDetArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "0")]
    u: String,
    #[arg(long = "m-max", alias = "M", default_value_t = 30)]
    m_max: usize,
    /// Number of z samples inside |z| < 1/(2 alpha)
    #[arg(long, default_value_t = 20)]
    zgrid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyFunceqArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Regularity parameter q (degree q+1)
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value = "0.2")]
    u: String,
    /// Number of sample points
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// Region kind
    #[arg(long, value_parser = ["omega_q", "omega_w", "omega_tilde_q"])]
    kind: String,
    /// Parameter w for omega_w (complex)
    #[arg(long, default_value = "1")]
    w: String,
    /// Degree bound d
    #[arg(long, default_value_t = 2.0)]
    d: f64,
    /// Regularity parameter q (omega_q, omega_tilde_q)
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Semicircle radius for omega_tilde_q
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Side (+1 upper, -1 lower) for omega_tilde_q
    #[arg(long, default_value_t = 1)]
    side: i8,
    /// Corner (+1 right, -1 left) for omega_tilde_q
    #[arg(long, default_value_t = 1)]
    corner: i8,
    /// Flood-fill grid resolution
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Curve sample density
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Quadrature / report grid size
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn budget_from_env() -> Budget {
    match std::env::var("ZETA_BUDGET") {
        Ok(v) => v.parse().map(Budget::new).unwrap_or_default(),
        Err(_) => Budget::new(DEFAULT_BUDGET),
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            let doc = json!({
                "error": e.to_string(),
                "exit": e.exit_code(),
            });
            eprintln!("{doc}");
            e.exit_code()
        }
    }
}

/// Same as [`run`] but with explicit arguments (used by tests).
pub fn run_from<I, T>(args: I) -> std::result::Result<(), ZetaError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)
        .map_err(|e| ZetaError::BadParameter(e.to_string()))?;
    dispatch(cli)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Series(a) => cmd_series(a),
        Command::Eval(a) => cmd_eval(a),
        Command::VerifyDet(a) => cmd_verify_det(a),
        Command::VerifyFunceq(a) => cmd_verify_funceq(a),
        Command::Region(a) => cmd_region(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Fixtures(a) => cmd_fixtures(a),
    }
}

fn cmd_series(a: SeriesArgs) -> Result<()> {
    let ctx = a.source.resolve()?;
    let u = parse_complex(&a.u)?;
    let seq = tn_sequence(&ctx, u, a.m_max)?;
    let series = log_zeta_series(&ctx, u, a.m_max)?;
    let oracle_deviation = if a.oracle_check {
        let TraceContext::Finite(f) = &ctx else {
            return Err(ZetaError::BadParameter(
                "--oracle-check enumerates cycles and needs a finite graph".into(),
            ));
        };
        let budget = budget_from_env();
        let mut worst = 0.0f64;
        for m in 1..=a.m_max.min(10) {
            let (nm, tm) = crate::cycles::brute_counts(&f.graph, m, u, budget)?;
            worst = worst.max((seq.n[m] - nm).norm()).max((seq.t[m] - tm).norm());
        }
        Some(worst)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut csv = String::from("m,re_N,im_N,re_t,im_t,re_c,im_c\n");
    for m in 1..=a.m_max {
        let c = series.coefficients[m];
        rows.push(json!({
            "m": m,
            "N": complex_json(seq.n[m]),
            "t": complex_json(seq.t[m]),
            "c": complex_json(c),
        }));
        csv.push_str(&format!(
            "{m},{},{},{},{},{},{}\n",
            seq.n[m].re, seq.n[m].im, seq.t[m].re, seq.t[m].im, c.re, c.im
        ));
    }
    let doc = json!({
        "schema_version": 1,
        "command": "series",
        "provenance": {
            "context": ctx.description(),
            "u": format_complex(u),
            "m_max": a.m_max,
            "radius": series.radius,
            "branch_policy": "radial path continuation",
        },
        "oracle_deviation": oracle_deviation,
        "coefficients": rows,
    });
    a.output.emit(doc, csv)
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let u = parse_complex(&a.u)?;
    let z = parse_complex(&a.z)?;
    // the clair fixture is the closed-form lattice zeta, valid outside the
    // singular set even where the series diverges
    if a.source.fixture.as_deref() == Some("clair") {
        let v = funceq::clair_zeta(z, u)?;
        let doc = json!({
            "schema_version": 1,
            "command": "eval",
            "provenance": {
                "context": "integer lattice, closed form",
                "u": format_complex(u),
                "z": format_complex(z),
                "branch_policy": "sqrt branch +1 at z = 0, principal continuation",
            },
            "zeta": complex_json(v.zeta),
            "inv_zeta": complex_json(v.inv_zeta),
        });
        let csv = format!(
            "re_zeta,im_zeta,re_inv,im_inv\n{},{},{},{}\n",
            v.zeta.re, v.zeta.im, v.inv_zeta.re, v.inv_zeta.im
        );
        return a.output.emit(doc, csv);
    }
    let ctx = a.source.resolve()?;
    let series = log_zeta_series(&ctx, u, a.m_max)?;
    let val = zeta_eval(&series, z)?;
    let doc = json!({
        "schema_version": 1,
        "command": "eval",
        "provenance": {
            "context": ctx.description(),
            "u": format_complex(u),
            "z": format_complex(z),
            "m_max": a.m_max,
            "radius": series.radius,
        },
        "zeta": complex_json(val.value),
        "log_tail_bound": val.log_tail_bound,
        "value_rel_bound": val.value_rel_bound,
    });
    let csv = format!(
        "re_zeta,im_zeta,log_tail_bound,value_rel_bound\n{},{},{},{}\n",
        val.value.re, val.value.im, val.log_tail_bound, val.value_rel_bound
    );
    a.output.emit(doc, csv)
}

fn cmd_verify_det(a: VerifyDetArgs) -> Result<()> {
    let ctx = a.source.resolve()?;
    let u = parse_complex(&a.u)?;
    let alpha = ctx.alpha(u).alpha;
    let mut rows = Vec::new();
    let mut csv = String::from("re_z,im_z,residual\n");
    let mut max_residual = 0.0f64;
    for k in 0..a.zgrid {
        let r = 0.45 / alpha * (k + 1) as f64 / a.zgrid as f64;
        let th = 2.399963229728653 * k as f64; // golden angle sweep
        let z = Complex64::from_polar(r, th);
        let residual = verify_det_formula(&ctx, u, z, a.m_max)?;
        max_residual = max_residual.max(residual);
        rows.push(json!({"z": complex_json(z), "residual": residual}));
        csv.push_str(&format!("{},{},{residual}\n", z.re, z.im));
    }
    let doc = json!({
        "schema_version": 1,
        "command": "verify-det",
        "provenance": {
            "context": ctx.description(),
            "u": format_complex(u),
            "m_max": a.m_max,
            "zgrid": a.zgrid,
            "torus_quadrature": crate::zeta::DEFAULT_TORUS_GRID,
            "branch_policy": "radial path continuation",
        },
        "max_residual": max_residual,
        "rows": rows,
    });
    a.output.emit(doc, csv)
}

fn cmd_verify_funceq(a: VerifyFunceqArgs) -> Result<()> {
    let ctx = a.source.resolve()?;
    let u = parse_complex(&a.u)?;
    let alpha = ctx.alpha(u).alpha;
    let params = funceq::RegionParams::regular(a.q);
    let mut rng = SplitMix64::new(0x5eed_1234_abcd_0001);
    let mut rows = Vec::new();
    let mut csv = String::from("re_z,im_z,difference\n");
    let mut max_diff = 0.0f64;
    let mut found = 0usize;
    while found < a.samples {
        let z = rng.complex_in_annulus(0.02 / alpha, 0.45 / alpha);
        if funceq::omega_membership(z, u, &params) {
            continue;
        }
        let (_, pz) = funceq::g_and_psi(z, u, a.q)?;
        if funceq::omega_membership(pz, u, &params) {
            continue;
        }
        let xi_a = funceq::xi_bartholdi(&ctx, z, u, a.q)?;
        let xi_b = funceq::xi_bartholdi(&ctx, pz, u, a.q)?;
        let diff = (xi_a - xi_b).norm();
        max_diff = max_diff.max(diff);
        rows.push(json!({
            "z": complex_json(z),
            "psi_z": complex_json(pz),
            "difference": diff,
        }));
        csv.push_str(&format!("{},{},{diff}\n", z.re, z.im));
        found += 1;
    }
    let doc = json!({
        "schema_version": 1,
        "command": "verify-funceq",
        "provenance": {
            "context": ctx.description(),
            "u": format_complex(u),
            "q": a.q,
            "samples": a.samples,
            "seed": "0x5eed1234abcd0001",
        },
        "max_difference": max_diff,
        "rows": rows,
    });
    a.output.emit(doc, csv)
}

fn cmd_region(a: RegionArgs) -> Result<()> {
    let (points, disconnect_info): (Vec<Complex64>, Option<(bool, bool)>) = match a.kind.as_str() {
        "omega_w" => {
            let w = parse_complex(&a.w)?;
            let spacing = 6.0 * a.d / a.samples as f64;
            let clip = 3.0 * (1.0 / a.d + 1.0);
            let pts = funceq::omega_w_curve(w, a.d, spacing, clip)
                .into_iter()
                .flatten()
                .collect();
            let analytic = funceq::omega_w_disconnects(w, a.d)?;
            let flood = funceq::omega_disconnection_oracle(w, a.d, a.grid)?;
            (pts, Some((analytic, flood)))
        }
        "omega_q" => {
            let w = Complex64::new(a.q as f64, 0.0);
            let d = if a.d > 0.0 { a.d } else { a.q as f64 + 1.0 };
            let spacing = 6.0 * d / a.samples as f64;
            let pts = funceq::omega_w_curve(w, d, spacing, 10.0 * d)
                .into_iter()
                .flatten()
                .collect();
            (pts, None)
        }
        "omega_tilde_q" => {
            let pts = funceq::omega_tilde_curve(a.q, a.eps, a.d, a.side, a.corner, a.samples / 3);
            (pts, None)
        }
        _ => unreachable!("constrained by the parser"),
    };
    let mut csv = String::from("re,im\n");
    for p in &points {
        csv.push_str(&format!("{},{}\n", p.re, p.im));
    }
    if let Some((analytic, flood)) = disconnect_info {
        csv.push_str(&format!("# disconnects: {flood}\n"));
        if analytic != flood {
            return Err(ZetaError::Inconsistent(format!(
                "analytic classifier ({analytic}) disagrees with flood fill ({flood})"
            )));
        }
    }
    let doc = json!({
        "schema_version": 1,
        "command": "region",
        "provenance": {
            "kind": a.kind,
            "w": a.w,
            "d": a.d,
            "q": a.q,
            "eps": a.eps,
            "grid": a.grid,
            "samples": a.samples,
        },
        "disconnects": disconnect_info.map(|(_, flood)| flood),
        "points": points.iter().map(|p| complex_json(*p)).collect::<Vec<_>>(),
    });
    a.output.emit(doc, csv)
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<()> {
    let ctx = a.source.resolve()?;
    let cdf = spectral_cdf(&ctx, a.grid)?;
    let csv = cdf.to_csv(a.grid.min(4096));
    let doc = json!({
        "schema_version": 1,
        "command": "spectrum",
        "provenance": {
            "context": ctx.description(),
            "grid": a.grid,
        },
        "support_bound": cdf.support_bound(),
        "level_delta": cdf.level_delta,
        "table": cdf
            .grid(a.grid.min(4096))
            .iter()
            .map(|&(l, f)| json!([l, f]))
            .collect::<Vec<_>>(),
    });
    a.output.emit(doc, csv)
}

fn cmd_fixtures(a: OutputArgs) -> Result<()> {
    let fixtures = [
        ("c4", "cycle on 4 vertices (q = 1)"),
        ("c5", "cycle on 5 vertices (q = 1)"),
        ("k4", "complete graph on 4 vertices (q = 2)"),
        ("petersen", "Petersen graph (q = 2)"),
        ("cycle-N / complete-N / path-N", "parametrized families"),
        ("z-lattice", "integer lattice, |F| = 1"),
        ("ladder", "ladder Z x {0,1}, |F| = 2"),
        ("z2-lattice", "square lattice, |F| = 1"),
        ("gasket", "Sierpinski gasket exhaustion (use --level)"),
        ("clair", "integer lattice closed form (eval only)"),
    ];
    let mut csv = String::from("name,description\n");
    for (n, d) in &fixtures {
        csv.push_str(&format!("{n},{d}\n"));
    }
    let doc = json!({
        "schema_version": 1,
        "command": "fixtures",
        "fixtures": fixtures
            .iter()
            .map(|(n, d)| json!({"name": n, "description": d}))
            .collect::<Vec<_>>(),
    });
    a.emit(doc, csv)
}
