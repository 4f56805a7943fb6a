//! Command-line front end: every analysis of the library with reproducible,
//! file-based outputs.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error.
//! `ROTOR_BANDS_THREADS` caps the worker count of parallel sweeps.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Csv, CsvField, Format, Json};
use rotor_bands::{
    admissible_nu, flatness_test, gamma_bound, gauss_partial_sum, gd_determinant,
    path_sum_coefficient, scaling_fit, sweep_bands, validate_resonance, verify_direct_integral,
    GaussCase, ResonanceParams, RotorError,
};

#[derive(Parser)]
#[command(
    name = "rotor-bands",
    version,
    about = "Quasi-energy band structure of the kicked rotor at resonance",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Track all bands over the Bloch angle and report widths
    Bands(BandsArgs),
    /// Flatness flags per band at a width threshold
    Flatness(FlatnessArgs),
    /// |det G^(d)| for the leading block of G
    Detgd(DetgdArgs),
    /// Perturbative coefficients s_j with exponents and oracle gaps
    Coeffs(CoeffsArgs),
    /// Fit the bandwidth exponent from eigenphase derivatives
    Scaling(ScalingArgs),
    /// Partial power sums of the unperturbed eigenvalues with their bounds
    Gauss(GaussArgs),
    /// Optimize -2(x-l)^2 + F(x); the decay-rate constant
    Gamma(GammaArgs),
    /// Least-squares decay rate of log10|s_j| across prime orders
    Decay(DecayArgs),
    /// Split-step grid propagator vs blockwise Bloch action
    DecompCheck(DecompArgs),
    /// Run the full acceptance checklist
    Verify(VerifyArgs),
}

/// Resonance parameters: give (--P, --Q) or the reduced pair (--p, --q);
/// the latter implies Q = q.
#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long = "P", value_name = "INT")]
    big_p: Option<u64>,
    #[arg(long = "Q", value_name = "INT")]
    big_q: Option<u64>,
    #[arg(long = "p", value_name = "INT")]
    small_p: Option<u64>,
    #[arg(long = "q", value_name = "INT")]
    small_q: Option<u64>,
    /// Quasi-momentum in [0, 1)
    #[arg(long)]
    beta: Option<f64>,
    /// Integer of the resonance condition; searched in [0, P) when omitted
    #[arg(long)]
    nu: Option<i64>,
}

#[derive(Args, Clone, Default)]
struct IoArgs {
    /// Output file; stdout when omitted
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "json")]
    format: String,
    /// JSON file whose keys mirror the flags; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BandsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct FlatnessArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// Width below which a band counts as flat
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct DetgdArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Band index; all bands 1..=(q+1)/2 when omitted
    #[arg(long)]
    j: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    j: Option<usize>,
    /// Comma-separated kick strengths, e.g. 1e-4,2e-4,5e-4,1e-3
    #[arg(long, value_name = "LIST")]
    mu_list: Option<String>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long = "p")]
    small_p: Option<u64>,
    #[arg(long = "q")]
    small_q: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Power N of the eigenvalues
    #[arg(long = "N")]
    n_pow: Option<i64>,
    /// Window start (1-based)
    #[arg(long)]
    j: Option<u64>,
    /// Window length T <= q
    #[arg(long = "T")]
    t_len: Option<u64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct GammaArgs {
    /// Quadrature panels for the F(x) table
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct DecayArgs {
    /// Comma-separated prime orders
    #[arg(long, value_name = "LIST")]
    q_list: Option<String>,
    #[arg(long = "p")]
    small_p: Option<u64>,
    #[arg(long)]
    j: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct DecompArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    mu: Option<f64>,
    /// Angle grid points; must be a multiple of Q
    #[arg(long)]
    grid: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Append criterion-adjacent diagnostics (decay tables, ratios)
    #[arg(long)]
    report: bool,
    /// Run a single criterion by number
    #[arg(long)]
    only: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

enum CliError {
    Usage(String),
    Computation(String),
}

impl From<RotorError> for CliError {
    fn from(e: RotorError) -> CliError {
        match e {
            RotorError::NotUnitary { .. }
            | RotorError::ConvergenceFailure { .. }
            | RotorError::TrackingAmbiguity { .. } => CliError::Computation(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Computation(format!("io error: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

/// Values from --config, consulted when a flag is absent.
struct ConfigMap(serde_json::Map<String, serde_json::Value>);

impl ConfigMap {
    fn load(path: &Option<PathBuf>) -> CliResult<ConfigMap> {
        let Some(path) = path else {
            return Ok(ConfigMap(serde_json::Map::new()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        match serde_json::from_str::<serde_json::Value>(&text) {
            Ok(serde_json::Value::Object(map)) => Ok(ConfigMap(map)),
            Ok(_) => Err(CliError::Usage("config must be a JSON object".into())),
            Err(e) => Err(CliError::Usage(format!("config parse error: {e}"))),
        }
    }

    fn u64(&self, key: &str) -> Option<u64> {
        self.0.get(key).and_then(|v| v.as_u64())
    }

    fn i64(&self, key: &str) -> Option<i64> {
        self.0.get(key).and_then(|v| v.as_i64())
    }

    fn f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(|v| v.as_f64())
    }

    fn usize(&self, key: &str) -> Option<usize> {
        self.u64(key).map(|v| v as usize)
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).and_then(|v| v.as_str()).map(String::from)
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bands(a) => cmd_bands(a),
        Command::Flatness(a) => cmd_flatness(a),
        Command::Detgd(a) => cmd_detgd(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Gauss(a) => cmd_gauss(a),
        Command::Gamma(a) => cmd_gamma(a),
        Command::Decay(a) => cmd_decay(a),
        Command::DecompCheck(a) => cmd_decomp(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("ROTOR_BANDS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn parse_format(io: &IoArgs) -> CliResult<Format> {
    match io.format.as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Usage(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

fn resolve_params(pa: &ParamArgs, cfg: &ConfigMap, mu: Option<f64>) -> CliResult<ResonanceParams> {
    let big_p = pa.big_p.or_else(|| cfg.u64("P"));
    let big_q = pa.big_q.or_else(|| cfg.u64("Q"));
    let small_p = pa.small_p.or_else(|| cfg.u64("p"));
    let small_q = pa.small_q.or_else(|| cfg.u64("q"));
    let (p_num, q_len) = match (big_p, big_q, small_p, small_q) {
        (Some(bp), Some(bq), None, None) => (bp, bq),
        (None, None, Some(p), Some(q)) => (p, q),
        (None, None, None, None) => {
            return Err(CliError::Usage(
                "give the resonance as --P/--Q or --p/--q".into(),
            ))
        }
        _ => {
            return Err(CliError::Usage(
                "give either --P/--Q or --p/--q, not a mixture".into(),
            ))
        }
    };
    let beta = pa
        .beta
        .or_else(|| cfg.f64("beta"))
        .ok_or_else(|| CliError::Usage("--beta is required".into()))?;
    let nu = pa.nu.or_else(|| cfg.i64("nu"));
    let params = match nu {
        Some(nu) => validate_resonance(p_num, q_len, beta, nu)?,
        None => {
            let candidates = admissible_nu(p_num, q_len, beta);
            let Some(&nu) = candidates.first() else {
                return Err(CliError::Usage(format!(
                    "beta = {beta} is not a resonance for P = {p_num}, Q = {q_len} \
                     (no admissible nu in [0, P))"
                )));
            };
            validate_resonance(p_num, q_len, beta, nu)?
        }
    };
    let mu = mu.or_else(|| cfg.f64("mu")).unwrap_or(0.0);
    Ok(params.with_mu(mu)?)
}

fn meta_object(command: &str, params: Option<&ResonanceParams>, io: &IoArgs) -> Json {
    let mut meta = Json::object();
    meta.push("command", Json::Str(command.into()));
    meta.push("version", Json::Str(env!("CARGO_PKG_VERSION").into()));
    if let Some(p) = params {
        meta.push("P", Json::UInt(p.big_p));
        meta.push("Q", Json::UInt(p.big_q));
        meta.push("p", Json::UInt(p.p));
        meta.push("q", Json::UInt(p.q));
        meta.push("nu", Json::Int(p.nu));
        meta.push("beta", Json::Float(p.beta));
        meta.push("mu", Json::Float(p.mu));
        meta.push("tau", Json::Float(p.tau));
        meta.push("primitive", Json::Bool(p.primitive));
    }
    meta.push("format", Json::Str(io.format.clone()));
    meta.push("seed", Json::UInt(io.seed));
    meta
}

/// Writes machine output to the file (or stdout) and the one-line human
/// summary to stdout (or stderr when stdout carries the payload).
fn emit(io: &IoArgs, payload: String, summary: &str) -> CliResult<()> {
    match &io.output {
        Some(path) => {
            std::fs::write(path, payload)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{payload}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| CliError::Usage(format!("cannot parse '{t}' in {what}")))
        })
        .collect()
}

fn cmd_bands(a: BandsArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, a.mu)?;
    let grid = a
        .grid
        .or_else(|| cfg.usize("grid"))
        .unwrap_or(rotor_bands::DEFAULT_GRID);
    let bands = sweep_bands(&params, grid)?;
    let nb = bands.labels.len();
    let payload = match fmt {
        Format::Csv => {
            let mut header: Vec<String> = vec!["theta".into()];
            header.extend((1..=nb).map(|j| format!("phase_{j}")));
            let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
            let mut csv = Csv::new(&header_refs);
            for (k, &vt) in bands.grid.iter().enumerate() {
                let mut row = vec![CsvField::Float(vt)];
                row.extend((0..nb).map(|b| CsvField::Float(bands.phases[b][k])));
                csv.row(&row);
            }
            let mut footer = vec![CsvField::Str("widths")];
            footer.extend(bands.widths.iter().map(|&w| CsvField::Float(w)));
            csv.row(&footer);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("grid", Json::floats(bands.grid.iter().cloned()));
            data.push(
                "labels",
                Json::Array(bands.labels.iter().map(|&l| Json::UInt(l)).collect()),
            );
            data.push(
                "phases",
                Json::Array(
                    bands
                        .phases
                        .iter()
                        .map(|ph| Json::floats(ph.iter().cloned()))
                        .collect(),
                ),
            );
            data.push("widths", Json::floats(bands.widths.iter().cloned()));
            let mut root = Json::object();
            let mut meta = meta_object("bands", Some(&params), &a.io);
            meta.push("grid_size", Json::UInt(grid as u64));
            root.push("meta", meta);
            root.push("data", data);
            root.render()
        }
    };
    let wmin = bands.widths.iter().cloned().fold(f64::INFINITY, f64::min);
    let wmax = bands.widths.iter().cloned().fold(0.0, f64::max);
    let summary = format!(
        "{nb} bands over {} fiber angles; widths in [{wmin:.3e}, {wmax:.3e}]",
        bands.grid.len()
    );
    emit(&a.io, payload, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_flatness(a: FlatnessArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, a.mu)?;
    let grid = a
        .grid
        .or_else(|| cfg.usize("grid"))
        .unwrap_or(rotor_bands::DEFAULT_GRID);
    let threshold = a
        .threshold
        .or_else(|| cfg.f64("threshold"))
        .unwrap_or(rotor_bands::DEFAULT_FLATNESS_THRESHOLD);
    if threshold <= 0.0 {
        return Err(CliError::Usage("--threshold must be positive".into()));
    }
    let bands = sweep_bands(&params, grid)?;
    let flags = flatness_test(&bands, threshold);
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["band", "width", "flat"]);
            for (i, (&w, &f)) in bands.widths.iter().zip(&flags).enumerate() {
                csv.row(&[
                    CsvField::UInt(i as u64 + 1),
                    CsvField::Float(w),
                    CsvField::Str(if f { "true" } else { "false" }),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("threshold", Json::Float(threshold));
            data.push("widths", Json::floats(bands.widths.iter().cloned()));
            data.push(
                "flat",
                Json::Array(flags.iter().map(|&f| Json::Bool(f)).collect()),
            );
            data.push("all_flat", Json::Bool(flags.iter().all(|&f| f)));
            let mut root = Json::object();
            let mut meta = meta_object("flatness", Some(&params), &a.io);
            meta.push("grid_size", Json::UInt(grid as u64));
            root.push("meta", meta);
            root.push("data", data);
            root.render()
        }
    };
    let nflat = flags.iter().filter(|&&f| f).count();
    let summary = if nflat == flags.len() {
        "all bands flat".to_string()
    } else if nflat == 0 {
        "no flat bands".to_string()
    } else {
        format!("{nflat} of {} bands flat", flags.len())
    };
    emit(&a.io, payload, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_detgd(a: DetgdArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, None)?;
    let d = (params.big_q + 1) / 2;
    let det = gd_determinant(&params);
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["d", "abs_det"]);
            csv.row(&[CsvField::UInt(d), CsvField::Float(det)]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("d", Json::UInt(d));
            data.push("abs_det", Json::Float(det));
            let mut root = Json::object();
            root.push("meta", meta_object("detgd", Some(&params), &a.io));
            root.push("data", data);
            root.render()
        }
    };
    emit(&a.io, payload, &format!("|det G^({d})| = {det:.6e}"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_coeffs(a: CoeffsArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, None)?;
    let js: Vec<usize> = match a.j.or_else(|| cfg.usize("j")) {
        Some(j) => vec![j],
        None => (1..=((params.q + 1) / 2) as usize).collect(),
    };
    let mut rows = Vec::new();
    for j in js {
        rows.push(path_sum_coefficient(&params, j)?);
    }
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "j",
                "alpha",
                "s_re",
                "s_im",
                "s_abs",
                "oracle_abs",
                "relative_gap",
                "dp_vs_enum_gap",
            ]);
            for c in &rows {
                csv.row(&[
                    CsvField::UInt(c.j as u64),
                    CsvField::UInt(c.alpha as u64),
                    CsvField::Float(c.s.re),
                    CsvField::Float(c.s.im),
                    CsvField::Float(c.s.norm()),
                    match c.oracle_estimate {
                        Some(o) => CsvField::Float(o.norm()),
                        None => CsvField::Str(""),
                    },
                    match c.relative_gap {
                        Some(g) => CsvField::Float(g),
                        None => CsvField::Str(""),
                    },
                    CsvField::Float(c.dp_vs_enum_gap),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let items: Vec<Json> = rows
                .iter()
                .map(|c| {
                    let mut o = Json::object();
                    o.push("j", Json::UInt(c.j as u64));
                    o.push("alpha", Json::UInt(c.alpha as u64));
                    o.push("s_re", Json::Float(c.s.re));
                    o.push("s_im", Json::Float(c.s.im));
                    o.push("s_abs", Json::Float(c.s.norm()));
                    o.push(
                        "oracle_abs",
                        c.oracle_estimate
                            .map_or(Json::Null, |v| Json::Float(v.norm())),
                    );
                    o.push(
                        "relative_gap",
                        c.relative_gap.map_or(Json::Null, Json::Float),
                    );
                    o.push("dp_vs_enum_gap", Json::Float(c.dp_vs_enum_gap));
                    o
                })
                .collect();
            let mut root = Json::object();
            root.push("meta", meta_object("coeffs", Some(&params), &a.io));
            root.push("data", Json::Array(items));
            root.render()
        }
    };
    let summary = rows
        .iter()
        .map(|c| format!("s_{}: |s|={:.4e} (alpha={})", c.j, c.s.norm(), c.alpha))
        .collect::<Vec<_>>()
        .join("; ");
    emit(&a.io, payload, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scaling(a: ScalingArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, None)?;
    let j = a
        .j
        .or_else(|| cfg.usize("j"))
        .ok_or_else(|| CliError::Usage("--j is required".into()))?;
    let list = a
        .mu_list
        .or_else(|| cfg.string("mu_list"))
        .unwrap_or_else(|| "1e-4,2e-4,5e-4,1e-3".into());
    let mus: Vec<f64> = parse_list(&list, "--mu-list")?;
    let slope = scaling_fit(&params, j, &mus)?;
    let alpha = rotor_bands::alpha_exponent(j, params.q).ok();
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["j", "alpha", "slope"]);
            csv.row(&[
                CsvField::UInt(j as u64),
                match alpha {
                    Some(al) => CsvField::UInt(al as u64),
                    None => CsvField::Str(""),
                },
                CsvField::Float(slope),
            ]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("j", Json::UInt(j as u64));
            data.push(
                "alpha",
                alpha.map_or(Json::Null, |al| Json::UInt(al as u64)),
            );
            data.push("mu_values", Json::floats(mus.iter().cloned()));
            data.push("slope", Json::Float(slope));
            let mut root = Json::object();
            root.push("meta", meta_object("scaling", Some(&params), &a.io));
            root.push("data", data);
            root.render()
        }
    };
    let summary = match alpha {
        Some(al) => format!("fitted slope {slope:.4} (alpha_{j} = {al})"),
        None => format!("fitted slope {slope:.4}"),
    };
    emit(&a.io, payload, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gauss(a: GaussArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let p = a
        .small_p
        .or_else(|| cfg.u64("p"))
        .ok_or_else(|| CliError::Usage("--p is required".into()))?;
    let q = a
        .small_q
        .or_else(|| cfg.u64("q"))
        .ok_or_else(|| CliError::Usage("--q is required".into()))?;
    let beta = a.beta.or_else(|| cfg.f64("beta")).unwrap_or(0.5);
    let n_pow = a
        .n_pow
        .or_else(|| cfg.i64("N"))
        .ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let j = a.j.or_else(|| cfg.u64("j")).unwrap_or(1);
    let t_len = a
        .t_len
        .or_else(|| cfg.u64("T"))
        .ok_or_else(|| CliError::Usage("--T is required".into()))?;
    let r = gauss_partial_sum(p, q, beta, n_pow, j, t_len)?;
    let case = match r.case {
        GaussCase::MultipleOfQ => "multiple-of-q",
        GaussCase::FullPeriod => "full-period",
        GaussCase::Partial => "partial",
    };
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "value_re",
                "value_im",
                "magnitude_squared",
                "case",
                "bound",
                "satisfied",
            ]);
            csv.row(&[
                CsvField::Float(r.value.re),
                CsvField::Float(r.value.im),
                CsvField::Float(r.magnitude_squared),
                CsvField::Text(case.into()),
                CsvField::Float(r.bound),
                CsvField::Str(if r.satisfied { "true" } else { "false" }),
            ]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("value_re", Json::Float(r.value.re));
            data.push("value_im", Json::Float(r.value.im));
            data.push("magnitude_squared", Json::Float(r.magnitude_squared));
            data.push("case", Json::Str(case.into()));
            data.push("bound", Json::Float(r.bound));
            data.push("satisfied", Json::Bool(r.satisfied));
            let mut root = Json::object();
            let mut meta = meta_object("gauss", None, &a.io);
            meta.push("p", Json::UInt(p));
            meta.push("q", Json::UInt(q));
            meta.push("beta", Json::Float(beta));
            meta.push("N", Json::Int(n_pow));
            meta.push("j", Json::UInt(j));
            meta.push("T", Json::UInt(t_len));
            root.push("meta", meta);
            root.push("data", data);
            root.render()
        }
    };
    let summary = format!(
        "|sum|^2 = {:.6e} ({case} case, bound {:.6e}, {})",
        r.magnitude_squared,
        r.bound,
        if r.satisfied { "satisfied" } else { "violated" }
    );
    emit(&a.io, payload, &summary)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gamma(a: GammaArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let points = a.points.or_else(|| cfg.usize("points")).unwrap_or(4000);
    let g = gamma_bound(points);
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["x_star", "lambda_star", "value", "quadrature_error"]);
            csv.row(&[
                CsvField::Float(g.x_star),
                CsvField::Float(g.lambda_star),
                CsvField::Float(g.value),
                CsvField::Float(g.quadrature_error),
            ]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("x_star", Json::Float(g.x_star));
            data.push("lambda_star", Json::Float(g.lambda_star));
            data.push("value", Json::Float(g.value));
            data.push("quadrature_error", Json::Float(g.quadrature_error));
            let mut root = Json::object();
            let mut meta = meta_object("gamma", None, &a.io);
            meta.push("points", Json::UInt(points as u64));
            root.push("meta", meta);
            root.push("data", data);
            root.render()
        }
    };
    emit(
        &a.io,
        payload,
        &format!("-gamma = {:.6} at x* = {:.4}", g.value, g.x_star),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decay(a: DecayArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let list = a
        .q_list
        .or_else(|| cfg.string("q_list"))
        .unwrap_or_else(|| "3,5,7,11,13".into());
    let qs: Vec<u64> = parse_list(&list, "--q-list")?;
    let p = a.small_p.or_else(|| cfg.u64("p")).unwrap_or(1);
    let j = a.j.or_else(|| cfg.usize("j")).unwrap_or(1);
    let rate = rotor_bands::decay_fit(|_| p, &qs, |_| j)?;
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["p", "j", "rate"]);
            csv.row(&[
                CsvField::UInt(p),
                CsvField::UInt(j as u64),
                CsvField::Float(rate),
            ]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push(
                "q_list",
                Json::Array(qs.iter().map(|&q| Json::UInt(q)).collect()),
            );
            data.push("p", Json::UInt(p));
            data.push("j", Json::UInt(j as u64));
            data.push("rate", Json::Float(rate));
            let mut root = Json::object();
            root.push("meta", meta_object("decay", None, &a.io));
            root.push("data", data);
            root.render()
        }
    };
    emit(
        &a.io,
        payload,
        &format!("log10|s_{j}| decays at rate {rate:.4} per unit q"),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decomp(a: DecompArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let cfg = ConfigMap::load(&a.io.config)?;
    let params = resolve_params(&a.params, &cfg, a.mu)?;
    let grid = a
        .grid
        .or_else(|| cfg.usize("grid"))
        .unwrap_or(64 * params.big_q as usize);
    let err = verify_direct_integral(&params, grid, None, a.io.seed)?;
    let payload = match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["grid_points", "seed", "max_error"]);
            csv.row(&[
                CsvField::UInt(grid as u64),
                CsvField::UInt(a.io.seed),
                CsvField::Float(err),
            ]);
            csv.finish()
        }
        Format::Json => {
            let mut data = Json::object();
            data.push("grid_points", Json::UInt(grid as u64));
            data.push("max_error", Json::Float(err));
            let mut root = Json::object();
            root.push("meta", meta_object("decomp-check", Some(&params), &a.io));
            root.push("data", data);
            root.render()
        }
    };
    emit(
        &a.io,
        payload,
        &format!("decomposition max pointwise error {err:.3e} on {grid} grid points"),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> CliResult<ExitCode> {
    let fmt = parse_format(&a.io)?;
    let reports = match a.only {
        Some(id) => {
            if id < 1 || id > rotor_bands::verify::CRITERION_COUNT {
                return Err(CliError::Usage(format!(
                    "criterion number must lie in 1..={}",
                    rotor_bands::verify::CRITERION_COUNT
                )));
            }
            vec![rotor_bands::verify::run_criterion(id)]
        }
        None => rotor_bands::verify::run_all(),
    };
    for r in &reports {
        println!("{}", r.summary_line());
    }
    let all = reports.iter().all(|r| r.passed);
    if a.report {
        println!("{}", rotor_bands::verify::diagnostics_report());
    }
    if let Some(path) = &a.io.output {
        let payload = match fmt {
            Format::Csv => {
                let mut csv = Csv::new(&["id", "name", "passed"]);
                for r in &reports {
                    csv.row(&[
                        CsvField::UInt(r.id as u64),
                        CsvField::Text(r.name.into()),
                        CsvField::Str(if r.passed { "true" } else { "false" }),
                    ]);
                }
                csv.finish()
            }
            Format::Json => {
                let items: Vec<Json> = reports
                    .iter()
                    .map(|r| {
                        let mut o = Json::object();
                        o.push("id", Json::UInt(r.id as u64));
                        o.push("name", Json::Str(r.name.into()));
                        o.push("passed", Json::Bool(r.passed));
                        o.push("details", Json::Str(r.details.clone()));
                        o
                    })
                    .collect();
                let mut root = Json::object();
                root.push("meta", meta_object("verify", None, &a.io));
                let mut data = Json::object();
                data.push("criteria", Json::Array(items));
                data.push("all_passed", Json::Bool(all));
                root.push("data", data);
                root.render()
            }
        };
        std::fs::write(path, payload)?;
    }
    println!(
        "{} of {} criteria passed",
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    );
    Ok(if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
