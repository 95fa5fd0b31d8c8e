//! Command-line driver: pressure values and curves, orbit spectra, coding
//! summaries, measure-coordinate diagnostics, and the equal-pressure
//! counterexample pipeline. Exit codes: 0 = success (counterexample verdict
//! reproduced), 2 = pipeline ran but the verdict failed, 1 = error.

mod reports;
mod spec;

use anosov_core::*;
use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::ExitCode;

/// Cross-check partners mirroring the library's curve defaults.
const CROSS_DEPTH: usize = 8;
const CROSS_ORDER: usize = 14;

#[derive(Parser)]
#[command(
    name = "anosov",
    version,
    about = "Thermodynamic formalism for hyperbolic toral automorphisms: pressure, Gibbs measures, orbit spectra, and the equal-pressure counterexample"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// 2x2 integer matrix "a,b,c,d", row-major.
    #[arg(long, global = true, default_value = "1,1,1,0", allow_hyphen_values = true)]
    matrix: String,

    /// Potential: '+'-joined terms `zero`, `const:<c>`, `cos:<m1>,<m2>:<amp>`,
    /// `sin:<m1>,<m2>:<amp>`.
    #[arg(long, global = true, default_value = "cos:1,0:0.3")]
    potential: String,

    /// Cylinder depth for transfer-operator computations.
    #[arg(long, global = true, default_value_t = 10)]
    depth: usize,

    /// Periodic-orbit truncation order for the orbit methods.
    #[arg(long, global = true, default_value_t = 14)]
    order: usize,

    /// Evaluation grid "min:max:step".
    #[arg(long, global = true, default_value = "-2:2:0.05", allow_hyphen_values = true)]
    t_grid: String,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for sampling-based certificates.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Transfer-operator leading eigenvalue at --depth.
    Eigen,
    /// Spectral-determinant zero from periodic-orbit sums at --order.
    Ratio,
    /// Plain periodic-orbit sum at --order.
    Sum,
}

impl From<MethodArg> for PressureMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Eigen => PressureMethod::TransferOperator,
            MethodArg::Ratio => PressureMethod::OrbitRatio,
            MethodArg::Sum => PressureMethod::OrbitSum,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pressure P(φ) by one method, cross-checked against the other family.
    Pressure {
        #[arg(long, value_enum, default_value_t = MethodArg::Eigen)]
        method: MethodArg,
    },
    /// Pressure curve t ↦ P(tφ) over --t-grid.
    Curve {
        #[arg(long, value_enum, default_value_t = MethodArg::Eigen)]
        method: MethodArg,
        /// Skip the cross-method residual computation.
        #[arg(long)]
        no_cross: bool,
    },
    /// Unmarked periodic-orbit spectrum of φ.
    Spectrum {
        /// Collect Birkhoff sums for all periods up to this.
        #[arg(long, default_value_t = 6)]
        max_period: usize,
    },
    /// Markov partition summary for the matrix.
    Coding,
    /// Measure-coordinate diagnostics: Livšic bound, cohomology residuals
    /// across depths, Lebesgue chart calibration, and a seeded cocycle
    /// truncation sample.
    Realize {
        /// Largest return-word order in the Livšic scan.
        #[arg(long, default_value_t = 6)]
        livsic_orders: usize,
    },
    /// Equal-pressure, distinct-spectrum pipeline for φ versus φ∘M_k.
    /// CSV output holds the transfer-operator curves of the pair.
    Counterexample {
        /// Composition factor k of the multiplication map.
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Compare spectra for all periods up to this.
        #[arg(long, default_value_t = 6)]
        max_period: usize,
        /// Truncation order for the spectral-determinant curves.
        #[arg(long, default_value_t = 18)]
        ratio_order: usize,
        /// Largest allowed pressure-curve gap for a reproduced verdict.
        #[arg(long, default_value_t = DEFAULT_CURVE_TOL)]
        curve_tol: f64,
        /// Smallest spectrum gap that counts as a separation.
        #[arg(long, default_value_t = DEFAULT_SPEC_TOL)]
        spec_tol: f64,
    },
}

fn main() -> ExitCode {
    // Usage problems exit 1: code 2 is reserved for a failed verdict.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let matrix = spec::parse_matrix(&cli.matrix)?;
    let phi = spec::parse_potential(&cli.potential)?;
    let aut = eigen_data(matrix)?;

    match &cli.command {
        Command::Pressure { method } => {
            let coding = build_partition(&aut)?;
            let method = PressureMethod::from(*method);
            let report = pressure_report(&coding, &aut, &phi, matrix, method, &cli)?;
            let body = match cli.format {
                Format::Json => json(&report)?,
                Format::Csv => reports::pressure_csv(&report),
            };
            emit(&cli.out, &body)?;
        }
        Command::Curve { method, no_cross } => {
            let coding = build_partition(&aut)?;
            let method = PressureMethod::from(*method);
            let order = match method {
                PressureMethod::TransferOperator => cli.depth,
                _ => cli.order,
            };
            let cross = if *no_cross { None } else { Some(cross_of(method)) };
            let (min, max, step) = spec::parse_grid(&cli.t_grid)?;
            let grid = uniform_grid(min, max, step)?;
            let curve = pressure_curve_on(&coding, &phi, &grid, method, order, cross)?;
            let body = match cli.format {
                Format::Json => json(&curve)?,
                Format::Csv => reports::curve_csv(&curve),
            };
            emit(&cli.out, &body)?;
        }
        Command::Spectrum { max_period } => {
            let spectrum = unmarked_spectrum(&phi, &aut, *max_period)?;
            let body = match cli.format {
                Format::Json => json(&spectrum)?,
                Format::Csv => reports::spectrum_csv(&spectrum),
            };
            emit(&cli.out, &body)?;
        }
        Command::Coding => {
            require_json(cli.format, "coding")?;
            let coding = build_partition(&aut)?;
            let transition = coding
                .sft
                .transition
                .iter()
                .map(|row| row.iter().map(|&b| b as u8).collect())
                .collect();
            let report = reports::CodingReport {
                matrix,
                alphabet_size: coding.alphabet_size(),
                zero_symbol: coding.zero_symbol,
                mixing_power: coding.sft.mixing_power,
                max_diameter: coding.max_diameter(),
                rectangles: coding.rectangles.clone(),
                transition,
            };
            emit(&cli.out, &json(&report)?)?;
        }
        Command::Realize { livsic_orders } => {
            require_json(cli.format, "realize")?;
            let coding = build_partition(&aut)?;
            let report = realize_report(&coding, &aut, &phi, matrix, *livsic_orders, &cli)?;
            emit(&cli.out, &json(&report)?)?;
        }
        Command::Counterexample {
            k,
            max_period,
            ratio_order,
            curve_tol,
            spec_tol,
        } => {
            let (t_min, t_max, t_step) = spec::parse_grid(&cli.t_grid)?;
            let config = CounterexampleConfig {
                matrix,
                base: phi,
                k: *k,
                max_period: *max_period,
                depth: cli.depth,
                ratio_order: *ratio_order,
                t_min,
                t_max,
                t_step,
                curve_tol: *curve_tol,
                spec_tol: *spec_tol,
            };
            let report = run_counterexample(&config)?;
            let body = match cli.format {
                Format::Json => json(&report)?,
                Format::Csv => reports::counterexample_csv(&report),
            };
            emit(&cli.out, &body)?;
            if !matches!(report.verdict, Verdict::Reproduced) {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cross_of(method: PressureMethod) -> (PressureMethod, usize) {
    match method {
        PressureMethod::TransferOperator => (PressureMethod::OrbitRatio, CROSS_ORDER),
        _ => (PressureMethod::TransferOperator, CROSS_DEPTH),
    }
}

fn pressure_at(
    coding: &MarkovCoding,
    aut: &ToralAutomorphism,
    phi: &Potential,
    method: PressureMethod,
    order: usize,
) -> Result<f64> {
    Ok(match method {
        PressureMethod::TransferOperator => pressure_transfer(phi, coding, order)?,
        PressureMethod::OrbitRatio => pressure_orbit_ratio(phi, aut, order)?,
        PressureMethod::OrbitSum => pressure_orbit_sum(phi, aut, order)?,
    })
}

fn pressure_report(
    coding: &MarkovCoding,
    aut: &ToralAutomorphism,
    phi: &Potential,
    matrix: [[i64; 2]; 2],
    method: PressureMethod,
    cli: &Cli,
) -> Result<reports::PressureReport> {
    let order = match method {
        PressureMethod::TransferOperator => cli.depth,
        _ => cli.order,
    };
    let value = pressure_at(coding, aut, phi, method, order)?;
    let (cross_method, cross_order) = cross_of(method);
    let cross_value = pressure_at(coding, aut, phi, cross_method, cross_order)?;
    Ok(reports::PressureReport {
        matrix,
        potential: phi.to_string(),
        method,
        order,
        value,
        cross_method,
        cross_order,
        cross_value,
        residual: (value - cross_value).abs(),
    })
}

fn realize_report(
    coding: &MarkovCoding,
    aut: &ToralAutomorphism,
    phi: &Potential,
    matrix: [[i64; 2]; 2],
    livsic_orders: usize,
    cli: &Cli,
) -> Result<reports::RealizeReport> {
    let depth = cli.depth;
    if livsic_orders + 2 > depth {
        bail!("--livsic-orders must be at most --depth minus 2");
    }
    // Livšic bounds and cohomology residuals are statements about the
    // zero-pressure representative; a pressure constant is never a
    // coboundary and would drown both diagnostics.
    let normalization = pressure_transfer(phi, coding, depth)?;
    let phi = &phi.shifted(-normalization);
    let psi = cylinder_potential(phi, coding);
    let g = equilibrium(&psi, &coding.sft, depth)?;
    let livsic = livsic_bound_report(&g, coding, phi, livsic_orders)?;

    let mut cohomology = Vec::new();
    for d in [depth.saturating_sub(2).max(4), depth, depth + 2] {
        let gd = equilibrium(&psi, &coding.sft, d)?;
        let gf = g_function(&gd)?;
        let rep = cohomology_residual(coding, &gf, phi, 6)?;
        cohomology.push(reports::CohomologyByDepth {
            depth: d,
            residual: rep.residual,
            points_checked: rep.points_checked,
            skipped_boundary_points: rep.skipped_boundary_points,
        });
    }

    let lebesgue = lebesgue_calibration(coding, aut, depth, livsic_orders)?;
    let theta = theta_sample(aut, phi, cli.seed)?;

    Ok(reports::RealizeReport {
        matrix,
        potential: phi.to_string(),
        depth,
        normalization,
        livsic,
        cohomology,
        lebesgue,
        theta,
    })
}

/// Every calibration number has a closed form in the Lebesgue model: the
/// chart is affine, n-cycle products of 1/g are λⁿ, and the Livšic bound
/// is one.
fn lebesgue_calibration(
    coding: &MarkovCoding,
    aut: &ToralAutomorphism,
    depth: usize,
    livsic_orders: usize,
) -> Result<reports::LebesgueCalibration> {
    let leb = Potential::constant(-aut.lambda.ln());
    let psi = cylinder_potential(&leb, coding);
    let g = equilibrium(&psi, &coding.sft, depth)?;

    let chart = XiChart::new(&g, coding)?;
    let total = chart.total_mass();
    let r = &coding.rectangles[coding.zero_symbol];
    let mut max_dev: f64 = 0.0;
    let mut max_radius: f64 = 0.0;
    for k in 1..9 {
        let f = k as f64 / 9.0;
        let u = f * r.unstable_extent;
        let s = 0.4 * r.stable_extent;
        let p = [
            util::mod1(r.corner[0] + u * aut.e_u[0] + s * aut.e_s[0]),
            util::mod1(r.corner[1] + u * aut.e_u[1] + s * aut.e_s[1]),
        ];
        let img = chart.eval(coding, p.into())?;
        max_dev = max_dev.max((img.xi1 - f * total).abs());
        max_radius = max_radius.max(img.error_radius);
    }

    let gf = g_function(&g)?;
    let m = gf.depth;
    let mut cycle_dev: f64 = 0.0;
    for n in 1..=4 {
        for p in periodic_points(aut, n)? {
            let words = coding.encode_window(TorusPoint::Exact(p), 0, n + m - 2);
            if words.len() != 1 {
                continue;
            }
            let syms = &words[0].symbols;
            let mut log_prod = 0.0;
            for j in 0..n {
                log_prod -= gf.eval(&syms[j..j + m]).unwrap().ln();
            }
            cycle_dev = cycle_dev.max(((log_prod / n as f64).exp() - aut.lambda).abs());
        }
    }

    let bound = livsic_bound_report(&g, coding, &leb, livsic_orders)?.bound;

    Ok(reports::LebesgueCalibration {
        livsic_bound: bound,
        xi_affine_max_dev: max_dev,
        xi_max_error_radius: max_radius,
        inverse_g_cycle_max_dev: cycle_dev,
    })
}

fn theta_sample(
    aut: &ToralAutomorphism,
    phi: &Potential,
    seed: u64,
) -> Result<reports::ThetaSample> {
    const SAMPLES: usize = 50;
    const SHORT: usize = 15;
    const LONG: usize = 30;
    let vectors: Vec<HomoclinicVector> = homoclinic_points(aut, 2)?
        .into_iter()
        .filter(|h| h.lattice_index != [0, 0])
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let x = [rng.gen::<f64>(), rng.gen::<f64>()];
        let v = vectors[i % vectors.len()];
        let (th_short, tail_short) = rn_cocycle(phi, aut, &v, x, SHORT);
        let (th_long, tail_long) = rn_cocycle(phi, aut, &v, x, LONG);
        let moved = (th_short.ln() - th_long.ln()).abs();
        worst = worst.max(moved / (tail_short + tail_long));
    }
    Ok(reports::ThetaSample {
        samples: SAMPLES,
        seed,
        short_truncation: SHORT,
        long_truncation: LONG,
        worst_tail_utilization: worst,
    })
}

fn require_json(format: Format, name: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("{name} has no tabular form; use --format json");
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}
