//! `chen` — bar-complex cohomology of finite CDGA presentations and numeric
//! loop-space functionals on spheres.
//!
//! One subcommand per experiment: `validate`, `bar`, `detect` on the symbolic
//! side; `degree`, `hopf`, `bound-check`, `sharpness` on the numeric side.
//! Numeric commands write a CSV and a run manifest next to their outputs;
//! re-running a command with the same manifest reproduces identical bytes.
//!
//! Exit codes: 0 success, 1 domain failure (invalid algebra, no detecting
//! class, violated bound), 2 usage or I/O error.

mod manifest;

use anyhow::{anyhow, Context, Result};
use chen_core::bar::{self, BarError};
use chen_core::cdga::AlgebraError;
use chen_core::geometry::{pontryagin_product, sweepout, MapSpec};
use chen_core::itint::{
    check_length_bound, degree_via_loops, great_circle_parameter, hopf_via_loops, sharpness_scan,
    FormSpec, ItintError, NumericConfig, ScanMode,
};
use chen_core::FiniteCdga;
use clap::{Parser, Subcommand};
use manifest::RunManifest;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "chen", version, about = "loop-space cohomology: bar complexes and iterated-integral functionals")]
struct Cli {
    /// TOML file of numeric settings; values here override flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra spec file (axioms checked exactly)
    Validate { algebra: PathBuf },
    /// Bar cohomology in one degree: ranks, representatives, filtration
    Bar {
        algebra: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Length cap; defaults to degree + 1 for simply connected models
        #[arg(long)]
        max_length: Option<usize>,
        /// Also write the machine-readable report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Minimal detecting length and distortion exponent
    Detect {
        algebra: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Homotopy degree for the exponent; defaults to degree + 1
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Degree of a self-map of S^n via the loop-space pairing
    Degree {
        /// Map expression, e.g. `identity`, `zpow:3`, `reflection*zpow:2`
        #[arg(long)]
        map: String,
        /// Source sphere dimension
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        time_refine: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Hopf invariant of a map S^3 -> S^2 via the length-2 pairing
    Hopf {
        #[arg(long)]
        map: String,
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        time_refine: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Verify the length-power norm bound on great-circle concat powers
    BoundCheck {
        /// Number of forms in the iterated integral (1 or 2)
        #[arg(long)]
        r: usize,
        /// Base loop catalog name (only `greatcircle`)
        #[arg(long = "loop", default_value = "greatcircle")]
        loop_name: String,
        /// Concatenation power of the base loop
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        time_refine: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Scaling of pairings under concatenation powers of the sweepout
    Sharpness {
        /// `degree` (linear) or `hopf` (quadratic)
        #[arg(long)]
        mode: String,
        /// Comma-separated powers, e.g. 1,2,4,8
        #[arg(long = "L", value_delimiter = ',')]
        l_values: Vec<u32>,
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        time_refine: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// Optional overrides loaded from a TOML config file. Per the tool contract
/// the file wins over command-line flags.
#[derive(Debug, Default, Deserialize)]
struct PartialConfig {
    domain_res: Option<usize>,
    time_refine: Option<usize>,
    slice_samples: Option<usize>,
    lattice_res: Option<usize>,
    fd_domain: Option<f64>,
    fd_time: Option<f64>,
    bound_slack: Option<f64>,
    pairing_tol: Option<f64>,
    seed: Option<u64>,
}

impl PartialConfig {
    fn apply(&self, cfg: &mut NumericConfig) {
        macro_rules! take {
            ($f:ident) => {
                if let Some(v) = self.$f {
                    cfg.$f = v;
                }
            };
        }
        take!(domain_res);
        take!(time_refine);
        take!(slice_samples);
        take!(lattice_res);
        take!(fd_domain);
        take!(fd_time);
        take!(bound_slack);
        take!(pairing_tol);
        take!(seed);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("CHEN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(1)
        .max(1);
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    match run(cli, threads) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_config(
    cli_config: &Option<PathBuf>,
    mesh: Option<usize>,
    time_refine: Option<usize>,
    seed: Option<u64>,
) -> Result<NumericConfig> {
    let mut cfg = NumericConfig::default();
    if let Some(m) = mesh {
        cfg.domain_res = m;
    }
    if let Some(t) = time_refine {
        cfg.time_refine = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(path) = cli_config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let partial: PartialConfig = toml::from_str(&text).context("malformed config file")?;
        partial.apply(&mut cfg);
    }
    Ok(cfg)
}

fn load_algebra(path: &Path) -> Result<FiniteCdga, ExitCode> {
    if !path.exists() {
        eprintln!("error: no such file: {}", path.display());
        return Err(ExitCode::from(2));
    }
    match FiniteCdga::from_spec_file(path) {
        Ok(a) => Ok(a),
        Err(AlgebraError::Parse(e)) => {
            eprintln!("parse error in {}: {e}", path.display());
            Err(ExitCode::from(2))
        }
        Err(AlgebraError::AlgebraInvalid(msg)) => {
            eprintln!("invalid algebra: {msg}");
            Err(ExitCode::from(1))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(1))
        }
    }
}

fn cap_for(alg: &FiniteCdga, degree: usize, requested: Option<usize>) -> Result<usize, ExitCode> {
    match requested {
        Some(r) => Ok(r),
        None => match bar::default_max_length(alg, degree) {
            Ok(c) => Ok(c),
            Err(e) => {
                eprintln!("error: {e}");
                Err(ExitCode::from(2))
            }
        },
    }
}

fn run(cli: Cli, threads: usize) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { algebra } => {
            match load_algebra(&algebra) {
                Ok(alg) => {
                    println!(
                        "valid: {} generators, degree cap {}",
                        alg.generator_count(),
                        alg.degree_cap()
                    );
                    for d in 0..=alg.degree_cap() {
                        let basis = alg.basis_of_degree(d).expect("degree within cap");
                        if !basis.is_empty() {
                            println!("  degree {d}: {}", basis.join(" "));
                        }
                    }
                    println!("axioms hold: unit, graded commutativity, associativity, d\u{b2}=0, Leibniz");
                    Ok(ExitCode::SUCCESS)
                }
                Err(code) => Ok(code),
            }
        }
        Command::Bar {
            algebra,
            degree,
            max_length,
            json,
        } => {
            let alg = match load_algebra(&algebra) {
                Ok(a) => a,
                Err(code) => return Ok(code),
            };
            let cap = match cap_for(&alg, degree, max_length) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            let report = bar::cohomology(&alg, degree, cap);
            print!("{}", report.render_text(&alg));
            if report.rank >= 1 {
                let found = bar::min_length_detector(&alg, degree, cap, None)
                    .expect("rank >= 1 has a detecting class");
                let n = degree + 1;
                println!(
                    "min length {}; distortion exponent {} (homotopy degree {})",
                    found.min_length,
                    bar::distortion_exponent(n, found.min_length.max(1)),
                    n
                );
            }
            if let Some(path) = json {
                let doc = report.document(&alg);
                std::fs::write(&path, serde_json::to_string_pretty(&doc)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Detect {
            algebra,
            degree,
            n,
            max_length,
        } => {
            let alg = match load_algebra(&algebra) {
                Ok(a) => a,
                Err(code) => return Ok(code),
            };
            let cap = match cap_for(&alg, degree, max_length) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            match bar::min_length_detector(&alg, degree, cap, None) {
                Ok(found) => {
                    let n = n.unwrap_or(degree + 1);
                    println!(
                        "degree {degree}: min length {}; representative {}; distortion exponent {}",
                        found.min_length,
                        found.representative.render(&alg),
                        bar::distortion_exponent(n, found.min_length.max(1))
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ BarError::NoClassFound { .. }) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Degree {
            map,
            dim,
            mesh,
            time_refine,
            seed,
            out,
        } => {
            let cfg = resolve_config(&cli.config, mesh, time_refine, seed)?;
            let spec = MapSpec::parse(&map, dim).map_err(|e| anyhow!("{e}"))?;
            let result = degree_via_loops(&spec, &cfg).map_err(|e| anyhow!("{e}"))?;
            let family = chen_core::geometry::desuspend(spec, sweepout(dim))
                .map_err(|e| anyhow!("{e}"))?
                .with_samples_per_piece(cfg.slice_samples);
            let suplength = family.suplength(cfg.lattice_res).map_err(|e| anyhow!("{e}"))?;
            let volume = family
                .volume_estimate(cfg.lattice_res)
                .map_err(|e| anyhow!("{e}"))?;
            println!(
                "degree({map}) = {:.6} (error estimate {:.2e})",
                result.value, result.error_estimate
            );
            let rows = vec![CsvRow {
                experiment: format!("degree {map}"),
                l: 1,
                value: result.value,
                error_estimate: result.error_estimate,
                suplength,
                volume_estimate: volume,
            }];
            write_outputs(
                &out,
                "degree",
                &rows,
                with_config_hash(
                    RunManifest::new("degree", &cfg, threads)
                        .arg("map", &map)
                        .arg("dim", dim),
                    &cli.config,
                )?,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hopf {
            map,
            mesh,
            time_refine,
            seed,
            out,
        } => {
            let cfg = resolve_config(&cli.config, mesh, time_refine, seed)?;
            let spec = MapSpec::parse(&map, 3).map_err(|e| anyhow!("{e}"))?;
            let result = hopf_via_loops(&spec, &cfg).map_err(|e| anyhow!("{e}"))?;
            let family = chen_core::geometry::desuspend(spec, sweepout(3))
                .map_err(|e| anyhow!("{e}"))?
                .with_samples_per_piece(cfg.slice_samples);
            let suplength = family.suplength(cfg.lattice_res).map_err(|e| anyhow!("{e}"))?;
            let volume = family
                .volume_estimate(cfg.lattice_res)
                .map_err(|e| anyhow!("{e}"))?;
            println!(
                "hopf({map}) = {:.6} (error estimate {:.2e})",
                result.value, result.error_estimate
            );
            let rows = vec![CsvRow {
                experiment: format!("hopf {map}"),
                l: 1,
                value: result.value,
                error_estimate: result.error_estimate,
                suplength,
                volume_estimate: volume,
            }];
            write_outputs(
                &out,
                "hopf",
                &rows,
                with_config_hash(
                    RunManifest::new("hopf", &cfg, threads).arg("map", &map),
                    &cli.config,
                )?,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BoundCheck {
            r,
            loop_name,
            power,
            samples,
            mesh,
            time_refine,
            seed,
            out,
        } => {
            let mut cfg = resolve_config(&cli.config, mesh, time_refine, seed)?;
            if time_refine.is_none() {
                // the r = 2 grid scales with the power; a modest refinement
                // per piece keeps the check exact and fast
                cfg.time_refine = 8;
            }
            if loop_name != "greatcircle" {
                return Err(anyhow!("unknown loop `{loop_name}`; catalog: greatcircle"));
            }
            let form = FormSpec::normalized_volume(2);
            let (family, u, forms) = match r {
                1 => (
                    sweepout(2)
                        .with_samples_per_piece(cfg.slice_samples)
                        .concat_power(power),
                    great_circle_parameter(2),
                    vec![form],
                ),
                2 => {
                    let base = sweepout(2)
                        .with_samples_per_piece(cfg.slice_samples)
                        .concat_power(power);
                    let fam =
                        pontryagin_product(base.clone(), base).map_err(|e| anyhow!("{e}"))?;
                    let u1 = great_circle_parameter(2);
                    let mut coords = u1.0.clone();
                    coords.extend_from_slice(&u1.0);
                    (fam, chen_core::DomainPoint(coords), vec![form.clone(), form])
                }
                other => return Err(anyhow!("--r must be 1 or 2, got {other}")),
            };
            match check_length_bound(&forms, &family, &u, samples, &cfg) {
                Ok(report) => {
                    println!(
                        "bound-check r={r} loop={loop_name} power={power}: PASS (max ratio {:.3e}, {} samples)",
                        report.max_ratio, report.samples
                    );
                    let rows = vec![CsvRow {
                        experiment: format!("bound-check r={r} {loop_name}"),
                        l: power,
                        value: report.max_ratio,
                        error_estimate: cfg.bound_slack,
                        suplength: report.length,
                        volume_estimate: report.dilation_bound,
                    }];
                    write_outputs(
                        &out,
                        "bound-check",
                        &rows,
                        with_config_hash(
                            RunManifest::new("bound-check", &cfg, threads)
                                .arg("r", r)
                                .arg("loop", &loop_name)
                                .arg("power", power)
                                .arg("samples", samples),
                            &cli.config,
                        )?,
                    )?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ ItintError::BoundViolated { .. }) => {
                    println!("bound-check r={r} loop={loop_name} power={power}: FAIL ({e})");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Command::Sharpness {
            mode,
            l_values,
            mesh,
            time_refine,
            seed,
            out,
        } => {
            // the scaling assertions are exact on aligned grids at any
            // resolution; the quadratic-mode grid grows with L, so default to
            // a modest mesh unless overridden
            let mut cfg = resolve_config(&cli.config, mesh, time_refine, seed)?;
            if mesh.is_none() {
                cfg.domain_res = 16;
            }
            if time_refine.is_none() {
                cfg.time_refine = 8;
            }
            if let Some(path) = &cli.config {
                let text = std::fs::read_to_string(path)?;
                let partial: PartialConfig = toml::from_str(&text)?;
                partial.apply(&mut cfg);
            }
            let (scan_mode, default_l): (ScanMode, &[u32]) = match mode.as_str() {
                "degree" => (ScanMode::Degree, &[1, 2, 4, 8]),
                "hopf" => (ScanMode::Hopf, &[1, 2, 3]),
                other => return Err(anyhow!("--mode must be degree or hopf, got {other}")),
            };
            let l_values = if l_values.is_empty() {
                default_l.to_vec()
            } else {
                l_values
            };
            let table =
                sharpness_scan(scan_mode, &l_values, &cfg).map_err(|e| anyhow!("{e}"))?;
            let base = table.rows[0].value / f64::from(match scan_mode {
                ScanMode::Degree => table.rows[0].l,
                ScanMode::Hopf => table.rows[0].l * table.rows[0].l,
            });
            println!("sharpness mode={mode}: base pairing {base:.6}");
            let mut rows = Vec::new();
            for row in &table.rows {
                println!(
                    "  L={} value={:.6} suplength={:.4} volume={:.4}",
                    row.l, row.value, row.suplength, row.volume_estimate
                );
                rows.push(CsvRow {
                    experiment: format!("sharpness {mode}"),
                    l: row.l,
                    value: row.value,
                    error_estimate: row.error_estimate,
                    suplength: row.suplength,
                    volume_estimate: row.volume_estimate,
                });
            }
            let l_list = l_values
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write_outputs(
                &out,
                "sharpness",
                &rows,
                with_config_hash(
                    RunManifest::new("sharpness", &cfg, threads)
                        .arg("mode", &mode)
                        .arg("L", l_list),
                    &cli.config,
                )?,
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn with_config_hash(
    manifest: RunManifest,
    config: &Option<PathBuf>,
) -> Result<RunManifest> {
    match config {
        Some(path) => manifest.input(path),
        None => Ok(manifest),
    }
}

struct CsvRow {
    experiment: String,
    l: u32,
    value: f64,
    error_estimate: f64,
    suplength: f64,
    volume_estimate: f64,
}

fn write_outputs(out: &Path, stem: &str, rows: &[CsvRow], manifest: RunManifest) -> Result<()> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create output directory {}", out.display()))?;
    let mut csv = String::from("experiment,L,value,error_estimate,suplength,volume_estimate\n");
    for row in rows {
        csv.push_str(&format!(
            "{},{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            row.experiment, row.l, row.value, row.error_estimate, row.suplength, row.volume_estimate
        ));
    }
    std::fs::write(out.join(format!("{stem}.csv")), csv)?;
    manifest.write(&out.join(format!("{stem}.manifest.json")))?;
    Ok(())
}
