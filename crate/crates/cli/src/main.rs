//! `ffdist`: distance sets, counting chains, certificates and threshold
//! sweeps over finite fields.
//!
//! Exit codes: 0 success, 1 usage/parse/io error, 2 capacity error,
//! 3 internal-consistency failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::json;

use ffdist::counting::{chain_report, spectrum_fft, spectrum_naive, ChainReport};
use ffdist::experiment::{
    emit, generate, run_sweep, threshold, ExperimentConfig, Generator, OutputFormat, Sample,
    Theorem,
};
use ffdist::format::{self, write_pairs, write_points};
use ffdist::geometry::{distance_set, two_param_distance_set, two_param_occupancy};
use ffdist::proof::{certify_with, coverage_ratio, default_tau, heavy_fibers, verify, WitnessMode};
use ffdist::{Error, FieldSpec, NormSpec, PairSet, PointSet, Result, Space};

#[derive(Parser, Debug)]
#[command(
    name = "ffdist",
    version,
    about = "Distance-set experiments over finite fields"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Field: `p` for a prime field, `p^k/c0:c1:..:ck` for an extension
    /// with the given little-endian monic modulus.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Dimension d.
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Norm exponent s.
    #[arg(long, global = true)]
    s: Option<u32>,

    /// Norm coefficients a_1,...,a_d in element encoding.
    #[arg(long, global = true)]
    coeffs: Option<String>,

    /// Experiment seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format: text or json for queries; csv, json-lines or
    /// plot-data for sweeps; text (ffdist-v1) for generate.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance set Δ^s(X, Y); Y defaults to X.
    Distset { x: PathBuf, y: Option<PathBuf> },
    /// Two-parameter distance set Δ_{d,d}^s(E) of a pair-set file.
    Twoparam {
        e: PathBuf,
        /// Print the q×q occupancy grid instead of the pair list.
        #[arg(long)]
        grid: bool,
    },
    /// Distance spectrum and the Q, T, T′ counting chain.
    Count {
        x: PathBuf,
        y: Option<PathBuf>,
        /// Spectrum method: naive or fft.
        #[arg(long, default_value = "naive")]
        method: String,
    },
    /// Fiber sizes |E_y| and, with --tau, the heavy-fiber split.
    Fibers {
        e: PathBuf,
        #[arg(long)]
        tau: Option<u64>,
    },
    /// Heavy-fiber certificate for part of Δ_{d,d}^s(E).
    Certify {
        e: PathBuf,
        /// Fiber threshold; defaults to the value derived from --c.
        #[arg(long, conflicts_with = "c")]
        tau: Option<u64>,
        /// Constant C in tau = ⌊(C/2) q^{(d+1)/2}⌋, as `a` or `a/b`.
        #[arg(long, default_value = "2")]
        c: String,
        /// Record every heavy pair instead of one witness per u.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Seeded sweep over sizes and trials.
    Sweep {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value = "uniform-random")]
        generator: String,
        /// Comma-separated target sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        /// Append elapsed milliseconds (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Size threshold of a statement for the current field and dimension.
    Threshold {
        #[arg(long)]
        theorem: String,
        /// Field order to evaluate at (default: the order of --field).
        #[arg(long)]
        q: Option<u64>,
    },
    /// Write one generated sample as an ffdist-v1 file.
    Generate {
        /// `points` writes X, `pairs` writes E.
        #[arg(long, default_value = "pairs")]
        kind: String,
        #[arg(long, default_value = "uniform-random")]
        generator: String,
        #[arg(long)]
        size: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::usage(format!("bad constant {s:?}; expected a or a/b"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?),
        None => (s.parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

impl Global {
    fn any_norm_flag(&self) -> bool {
        self.field.is_some() || self.dim.is_some() || self.s.is_some() || self.coeffs.is_some()
    }

    /// The norm described by the flags, with defaults F_3, d = 2, s = 2, a = 1.
    fn norm(&self) -> Result<NormSpec> {
        let field = self.field.as_deref().unwrap_or("3").parse::<FieldSpec>()?;
        let space = Space::new(&field, self.dim.unwrap_or(2))?;
        let s = self.s.unwrap_or(2);
        let coeffs = match &self.coeffs {
            Some(list) => list
                .split(',')
                .map(|t| field.parse(t.trim()))
                .collect::<Result<Vec<_>>>()?,
            None => vec![field.one(); space.dim()],
        };
        NormSpec::new(&space, s, &coeffs)
    }

    /// Files carry their own norm; explicit flags must agree with it.
    fn check_file_norm(&self, file_norm: &NormSpec, path: &Path) -> Result<()> {
        if !self.any_norm_flag() {
            return Ok(());
        }
        let f = file_norm.space().field();
        let flags_field = match &self.field {
            Some(spec) => Some(spec.parse::<FieldSpec>()?),
            None => None,
        };
        let mismatch = flags_field.as_ref().is_some_and(|g| g != f)
            || self.dim.is_some_and(|d| d != file_norm.space().dim())
            || self.s.is_some_and(|s| s != file_norm.exponent())
            || match &self.coeffs {
                Some(list) => {
                    let given = list
                        .split(',')
                        .map(|t| f.parse(t.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    given != file_norm.coeffs()
                }
                None => false,
            };
        if mismatch {
            return Err(Error::usage(format!(
                "norm flags disagree with the header of {}",
                path.display()
            )));
        }
        Ok(())
    }

    fn output_format(&self, allowed: &[&str], default: &str) -> Result<String> {
        let f = self.format.as_deref().unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f.to_string())
        } else {
            Err(Error::usage(format!(
                "--format {f:?} not available here; use one of {}",
                allowed.join(", ")
            )))
        }
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => format::write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn load_points(g: &Global, path: &Path) -> Result<(NormSpec, PointSet)> {
    let (norm, set) = format::read_file(path)?.into_points()?;
    g.check_file_norm(&norm, path)?;
    Ok((norm, set))
}

fn load_pairs(g: &Global, path: &Path) -> Result<(NormSpec, PairSet)> {
    let (norm, set) = format::read_file(path)?.into_pairs()?;
    g.check_file_norm(&norm, path)?;
    Ok((norm, set))
}

fn load_xy(g: &Global, x: &Path, y: Option<&Path>) -> Result<(NormSpec, PointSet, PointSet)> {
    let (norm, xs) = load_points(g, x)?;
    let ys = match y {
        Some(path) => {
            let (ny, ys) = load_points(g, path)?;
            if ny != norm {
                return Err(Error::usage(format!(
                    "{} and {} use different fields or norms",
                    x.display(),
                    path.display()
                )));
            }
            ys
        }
        None => xs.clone(),
    };
    Ok((norm, xs, ys))
}

fn chain_json(r: &ChainReport) -> serde_json::Value {
    json!({
        "x_size": r.n_x,
        "y_size": r.n_y,
        "z_size": r.n_z,
        "delta": r.delta,
        "quadruples": r.quadruples.to_string(),
        "triples": r.triples.to_string(),
        "union_triples": r.union_triples.to_string(),
        "cs_lower": r.cs_lower.map(|v| v.to_string()),
        "triple_bound": r.triple_bound,
        "triple_bound_ratio": r.triple_bound_ratio,
    })
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Distset { x, y } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let (norm, xs, ys) = load_xy(g, &x, y.as_deref())?;
            let f = norm.space().field();
            let values: Vec<String> = distance_set(&xs, &ys, &norm)?
                .into_iter()
                .map(|v| f.encode(v))
                .collect();
            let text = if fmt == "json" {
                format!("{}\n", json!({ "size": values.len(), "values": values }))
            } else {
                format!("size {}\nvalues {}\n", values.len(), values.join(" "))
            };
            g.write(&text)
        }
        Command::Twoparam { e, grid } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let (norm, es) = load_pairs(g, &e)?;
            let f = norm.space().field();
            let q = f.order() as usize;
            let mut text = String::new();
            if grid {
                let occ = two_param_occupancy(&es, &norm)?;
                if fmt == "json" {
                    let rows: Vec<Vec<u8>> = occ
                        .chunks(q)
                        .map(|r| r.iter().map(|&b| b as u8).collect())
                        .collect();
                    let size = occ.iter().filter(|&&b| b).count();
                    let _ = writeln!(text, "{}", json!({ "size": size, "q": q, "grid": rows }));
                } else {
                    let _ = writeln!(text, "size {}", occ.iter().filter(|&&b| b).count());
                    for row in occ.chunks(q) {
                        let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
                        let _ = writeln!(text, "{line}");
                    }
                }
            } else {
                let set = two_param_distance_set(&es, &norm)?;
                let pairs: Vec<[String; 2]> = set
                    .iter()
                    .map(|&(a, b)| [f.encode(a), f.encode(b)])
                    .collect();
                if fmt == "json" {
                    let _ = writeln!(text, "{}", json!({ "size": pairs.len(), "pairs": pairs }));
                } else {
                    let _ = writeln!(text, "size {}", pairs.len());
                    for [a, b] in pairs {
                        let _ = writeln!(text, "{a} {b}");
                    }
                }
            }
            g.write(&text)
        }
        Command::Count { x, y, method } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let (norm, xs, ys) = load_xy(g, &x, y.as_deref())?;
            let spec = match method.as_str() {
                "naive" => spectrum_naive(&xs, &ys, &norm)?,
                "fft" => spectrum_fft(&xs, &ys, &norm)?,
                other => return Err(Error::usage(format!("unknown method {other:?}"))),
            };
            let report = chain_report(&xs, &ys, &norm)?;
            if spec.support_size() != report.delta {
                return Err(Error::consistency("spectrum methods disagree on |Δ|"));
            }
            let f = norm.space().field();
            let spectrum: Vec<(String, u64)> = f
                .elements()
                .map(|u| (f.encode(u), spec.count(u)))
                .filter(|&(_, c)| c > 0)
                .collect();
            let text = if fmt == "json" {
                let mut v = chain_json(&report);
                v["spectrum"] = json!(spectrum);
                format!("{v}\n")
            } else {
                let mut t = String::new();
                let _ = writeln!(
                    t,
                    "|X| {}  |Y| {}  |Z| {}",
                    report.n_x, report.n_y, report.n_z
                );
                let _ = writeln!(t, "|Δ| {}", report.delta);
                let _ = writeln!(t, "Q {}", report.quadruples);
                let _ = writeln!(t, "T {}", report.triples);
                let _ = writeln!(t, "T' {}", report.union_triples);
                if let Some(cs) = report.cs_lower {
                    let _ = writeln!(t, "|X|^2|Y|^2/Q {cs}");
                }
                if let (Some(rhs), Some(ratio)) = (report.triple_bound, report.triple_bound_ratio) {
                    let _ = writeln!(t, "T'/bound {ratio:.6}  (bound {rhs:.3})");
                }
                let _ = writeln!(t, "spectrum");
                for (u, c) in spectrum {
                    let _ = writeln!(t, "{u} {c}");
                }
                t
            };
            g.write(&text)
        }
        Command::Fibers { e, tau } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let (norm, es) = load_pairs(g, &e)?;
            let space = norm.space();
            let dec = heavy_fibers(&es, tau.unwrap_or(0))?;
            let fibers: Vec<(String, u64)> = dec
                .fiber_sizes
                .iter()
                .map(|(&y, &c)| (space.encode_vector(&space.vector(y)), c))
                .collect();
            let text = if fmt == "json" {
                let mut v = json!({ "total": dec.total, "fibers": fibers });
                if tau.is_some() {
                    v["tau"] = json!(dec.tau);
                    v["heavy"] = json!(dec.heavy.len());
                    v["pigeonhole_bound"] = json!(dec.pigeonhole_bound);
                }
                format!("{v}\n")
            } else {
                let mut t = String::new();
                let _ = writeln!(t, "|E| {}  nonempty fibers {}", dec.total, fibers.len());
                if tau.is_some() {
                    let _ = writeln!(
                        t,
                        "tau {}  heavy {}  pigeonhole bound {}",
                        dec.tau,
                        dec.heavy.len(),
                        dec.pigeonhole_bound
                    );
                }
                for (y, c) in fibers {
                    let _ = writeln!(t, "{y}\t{c}");
                }
                t
            };
            g.write(&text)
        }
        Command::Certify {
            e,
            tau,
            c,
            exhaustive,
        } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let (norm, es) = load_pairs(g, &e)?;
            let space = norm.space();
            let q = space.field().order() as u64;
            let tau = match tau {
                Some(t) => t,
                None => default_tau(q, space.dim() as u32, parse_ratio(&c)?)?,
            };
            let mode = if exhaustive {
                WitnessMode::Exhaustive
            } else {
                WitnessMode::Single
            };
            let cert = certify_with(&es, &norm, tau, mode)?;
            verify(&cert, &es, &norm)?;
            let coverage = coverage_ratio(&cert, &es, &norm)?;
            let text = if fmt == "json" {
                format!(
                    "{}\n",
                    json!({
                        "tau": tau,
                        "heavy": cert.heavy_len(),
                        "entries": cert.entries().len(),
                        "certified": cert.certified_pairs().len(),
                        "distinct_u": cert.distinct_u(),
                        "min_width": cert.min_width(),
                        "coverage": coverage.to_string(),
                    })
                )
            } else {
                let mut t = cert.to_text();
                let _ = writeln!(
                    t,
                    "# verified; coverage {} = {:.6}",
                    coverage,
                    *coverage.numer() as f64 / *coverage.denom() as f64
                );
                t
            };
            g.write(&text)
        }
        Command::Sweep {
            theorem,
            generator,
            sizes,
            trials,
            timing,
        } => {
            let fmt: OutputFormat = g
                .output_format(&["csv", "json-lines", "plot-data"], "csv")?
                .parse()?;
            let sizes = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::usage(format!("bad size {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let config = ExperimentConfig {
                norm: g.norm()?,
                generator: generator.parse::<Generator>()?,
                sizes,
                trials,
                seed: g.seed,
                theorem: theorem.parse::<Theorem>()?,
            };
            let rows = run_sweep(&config)?;
            g.write(&emit(&rows, fmt, timing)?)
        }
        Command::Threshold { theorem, q } => {
            let fmt = g.output_format(&["text", "json"], "text")?;
            let theorem: Theorem = theorem.parse()?;
            let norm = g.norm()?;
            let d = norm.space().dim();
            let q = q.unwrap_or(norm.space().field().order() as u64);
            let value = threshold(theorem, q, d)?;
            let text = if fmt == "json" {
                format!(
                    "{}\n",
                    json!({ "theorem": theorem.name(), "q": q, "d": d, "threshold": value })
                )
            } else {
                format!("{value:.6}\n")
            };
            g.write(&text)
        }
        Command::Generate {
            kind,
            generator,
            size,
            trial,
        } => {
            g.output_format(&["text"], "text")?;
            let norm = g.norm()?;
            let theorem = match kind.as_str() {
                "pairs" => Theorem::NormPairs,
                "points" => Theorem::ProductSets,
                other => return Err(Error::usage(format!("unknown kind {other:?}"))),
            };
            let config = ExperimentConfig {
                norm: norm.clone(),
                generator: generator.parse()?,
                sizes: vec![size],
                trials: 1,
                seed: g.seed,
                theorem,
            };
            config.validate()?;
            let text = match generate(&config, size, trial)? {
                Sample::Pairs(e) => write_pairs(&norm, &e),
                Sample::Sets(x, _) => write_points(&norm, &x),
            };
            g.write(&text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ffdist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
