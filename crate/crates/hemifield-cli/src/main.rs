//! Command-line driver for the hemifield model: single-wing probes, joint
//! pair distributions along independent derivation routes, separation sweeps,
//! CHSH combinations (model and factorisable baseline, analytic and Monte
//! Carlo), seeded sampling runs, and a deterministic self-check suite.
//!
//! All angles on the interface are degrees. Every command emits one table,
//! CSV by default or JSON with `--format json`, to stdout or to `--out`.
//! Exit codes: 0 on success, 1 when `check` finds a failing line, 2 for
//! invalid invocations.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use hemifield::field::{
    alpha_field, average_full_dot, enumerate_sequential, rebasis, FieldSuperposition,
};
use hemifield::geometry::{hemisphere_grid, Axis, Hemisphere};
use hemifield::sampler::{
    baseline_correlation, chsh_analytic, chsh_baseline_analytic, chsh_baseline_monte_carlo,
    chsh_monte_carlo, run_experiment, ChshReport, UPolicy,
};
use hemifield::subquantum::{consistency_check, ConditionalReading};
use hemifield::two_party::{
    f0_noncontribution_check, joint_distribution, joint_via_conditional_with, JointDistribution,
    JointSetting, Wing,
};
use hemifield::Sign;
use report::{Cell, Format, Table};

/// Degrees-to-radians conversion factor.
const DEG: f64 = std::f64::consts::PI / 180.0;

// ─────────────────────────────────────────────────────────────────────────────
// Invocation grammar
// ─────────────────────────────────────────────────────────────────────────────

/// Hemispherical field-particle model of correlated spin-1/2 pairs:
/// probabilities, correlations, and Monte Carlo experiments.
#[derive(Parser)]
#[command(name = "hemifield", version, about)]
struct Cli {
    /// Construction-axis angle in degrees (pair preparation axis; also the
    /// fixed-policy baseline axis).
    #[arg(long, global = true, default_value_t = 0.0)]
    u_deg: f64,

    /// Seed for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the table to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Use the literal-shift branch-conditional table instead of the
    /// corrected one. Conditional-route results then disagree with the
    /// direct route, and `check` reports the failing lines.
    #[arg(long, global = true)]
    eq42_literal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure a single-wing field along one axis; cross-check the
    /// amplitudes against explicit hemisphere quadrature.
    Probe {
        /// Preparation-axis angle in degrees.
        #[arg(long, default_value_t = 0.0)]
        a_deg: f64,
        /// Measurement-axis angle in degrees.
        #[arg(long, default_value_t = 60.0)]
        b_deg: f64,
        /// Which field to prepare on the preparation axis.
        #[arg(long, value_enum, default_value_t = FieldKind::Hemisphere)]
        field: FieldKind,
    },
    /// Joint outcome distribution of a correlated pair at one setting.
    Joint {
        /// Wing-1 axis angle in degrees.
        #[arg(long, default_value_t = 0.0)]
        a_deg: f64,
        /// Wing-2 axis angle in degrees.
        #[arg(long, default_value_t = 60.0)]
        b_deg: f64,
        /// Which derivation route(s) to tabulate.
        #[arg(long, value_enum, default_value_t = Route::All)]
        route: Route,
    },
    /// Tabulate the joint law against the axis separation.
    Sweep {
        /// Smallest separation in degrees.
        #[arg(long, default_value_t = 0.0)]
        delta_min_deg: f64,
        /// Largest separation in degrees.
        #[arg(long, default_value_t = 360.0)]
        delta_max_deg: f64,
        /// Number of evenly spaced separations (at least 2).
        #[arg(long, default_value_t = 73)]
        steps: u64,
    },
    /// CHSH combination of four correlations.
    Chsh {
        /// First wing-1 axis in degrees.
        #[arg(long, default_value_t = 0.0)]
        a_deg: f64,
        /// Second wing-1 axis in degrees.
        #[arg(long, default_value_t = 90.0)]
        a2_deg: f64,
        /// First wing-2 axis in degrees.
        #[arg(long, default_value_t = 45.0)]
        b_deg: f64,
        /// Second wing-2 axis in degrees.
        #[arg(long, default_value_t = 135.0)]
        b2_deg: f64,
        /// Closed-form or sampled correlations.
        #[arg(long, value_enum, default_value_t = Mode::Analytic)]
        mode: Mode,
        /// Trials per correlation in Monte Carlo mode.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Evaluate the factorisable baseline instead of the model.
        #[arg(long)]
        baseline: bool,
        /// Baseline construction-axis policy (`fixed` uses --u-deg).
        #[arg(long, value_enum, default_value_t = BaselineU::Uniform)]
        baseline_u: BaselineU,
    },
    /// Seeded Monte Carlo run at one setting: tallies, frequencies, and the
    /// closed-form reference. Identical seeds give byte-identical output.
    Sample {
        /// Wing-1 axis angle in degrees.
        #[arg(long, default_value_t = 0.0)]
        a_deg: f64,
        /// Wing-2 axis angle in degrees.
        #[arg(long, default_value_t = 60.0)]
        b_deg: f64,
        /// Number of trials.
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Deterministic self-check suite on fixed grids (no randomness; --seed
    /// and --u-deg have no effect). Exits 1 if any line fails.
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    /// Single basis field on the preparation axis.
    Hemisphere,
    /// Isotropic two-term construction, `+` variant.
    AlphaPlus,
    /// Isotropic two-term construction, `-` variant.
    AlphaMinus,
}

impl FieldKind {
    fn label(self) -> &'static str {
        match self {
            FieldKind::Hemisphere => "hemisphere",
            FieldKind::AlphaPlus => "alpha-plus",
            FieldKind::AlphaMinus => "alpha-minus",
        }
    }

    fn build(self, a: Axis) -> FieldSuperposition {
        match self {
            FieldKind::Hemisphere => FieldSuperposition::hemisphere(a),
            FieldKind::AlphaPlus => alpha_field(a, Sign::Plus),
            FieldKind::AlphaMinus => alpha_field(a, Sign::Minus),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Antisymmetric-part amplitudes on the construction axis.
    Aleph,
    /// Conditional route anchored on wing 1.
    Cond1,
    /// Conditional route anchored on wing 2.
    Cond2,
    /// All three routes plus their largest disagreement.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Closed-form correlations.
    Analytic,
    /// Seeded sampling runs.
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineU {
    /// Fresh uniform construction angle every trial.
    Uniform,
    /// The --u-deg axis every trial.
    Fixed,
}

// ─────────────────────────────────────────────────────────────────────────────
// Entry point
// ─────────────────────────────────────────────────────────────────────────────

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = validate(&cli) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let (table, all_pass) = match run(&cli) {
        Ok(output) => output,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(2);
        }
    };
    let rendered = table.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(error) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {error}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Reject invocations whose numbers cannot drive a computation. Returns the
/// message for stderr; the caller exits 2.
fn validate(cli: &Cli) -> Result<(), String> {
    let mut angles: Vec<(&str, f64)> = vec![("--u-deg", cli.u_deg)];
    match &cli.command {
        Command::Probe { a_deg, b_deg, .. } | Command::Joint { a_deg, b_deg, .. } => {
            angles.push(("--a-deg", *a_deg));
            angles.push(("--b-deg", *b_deg));
        }
        Command::Sweep {
            delta_min_deg,
            delta_max_deg,
            steps,
        } => {
            angles.push(("--delta-min-deg", *delta_min_deg));
            angles.push(("--delta-max-deg", *delta_max_deg));
            if *steps < 2 {
                return Err("--steps must be at least 2".to_string());
            }
            if delta_min_deg > delta_max_deg {
                return Err("--delta-min-deg must not exceed --delta-max-deg".to_string());
            }
        }
        Command::Chsh {
            a_deg,
            a2_deg,
            b_deg,
            b2_deg,
            mode,
            n,
            ..
        } => {
            angles.push(("--a-deg", *a_deg));
            angles.push(("--a2-deg", *a2_deg));
            angles.push(("--b-deg", *b_deg));
            angles.push(("--b2-deg", *b2_deg));
            if *mode == Mode::Montecarlo && *n == 0 {
                return Err("--n must be positive in Monte Carlo mode".to_string());
            }
        }
        Command::Sample { a_deg, b_deg, n } => {
            angles.push(("--a-deg", *a_deg));
            angles.push(("--b-deg", *b_deg));
            if *n == 0 {
                return Err("--n must be positive".to_string());
            }
        }
        Command::Check => {}
    }
    for (name, value) in angles {
        if !value.is_finite() {
            return Err(format!("{name} must be a finite angle in degrees"));
        }
    }
    Ok(())
}

/// Dispatch to the command builders. The boolean is false only when `check`
/// finds a failing line.
fn run(cli: &Cli) -> hemifield::Result<(Table, bool)> {
    let u = Axis::new(cli.u_deg * DEG);
    let reading = if cli.eq42_literal {
        ConditionalReading::Literal
    } else {
        ConditionalReading::Corrected
    };
    match &cli.command {
        Command::Probe {
            a_deg,
            b_deg,
            field,
        } => Ok((cmd_probe(*a_deg, *b_deg, *field)?, true)),
        Command::Joint {
            a_deg,
            b_deg,
            route,
        } => Ok((cmd_joint(cli.u_deg, *a_deg, *b_deg, *route, reading), true)),
        Command::Sweep {
            delta_min_deg,
            delta_max_deg,
            steps,
        } => Ok((cmd_sweep(u, *delta_min_deg, *delta_max_deg, *steps), true)),
        Command::Chsh {
            a_deg,
            a2_deg,
            b_deg,
            b2_deg,
            mode,
            n,
            baseline,
            baseline_u,
        } => Ok((
            cmd_chsh(
                cli,
                [*a_deg, *a2_deg, *b_deg, *b2_deg],
                *mode,
                *n,
                *baseline,
                *baseline_u,
            )?,
            true,
        )),
        Command::Sample { a_deg, b_deg, n } => Ok((cmd_sample(cli, *a_deg, *b_deg, *n)?, true)),
        Command::Check => cmd_check(reading),
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// probe
// ─────────────────────────────────────────────────────────────────────────────

/// Per-term quadrature counterpart of the closed-form amplitude: integrate
/// the outcome direction's dot-product profile over each term's half-rotated
/// hemisphere on an explicit grid instead of using the closed-form average.
fn quadrature_amplitude(
    field: &FieldSuperposition,
    outcome: Axis,
    n_polar: usize,
    n_azimuth: usize,
) -> hemifield::Result<Complex64> {
    let mut amplitude = Complex64::new(0.0, 0.0);
    for (coefficient, basis) in field.terms() {
        let region = Hemisphere::positive(basis.support().center().midpoint(outcome));
        let grid = hemisphere_grid(region, n_polar, n_azimuth)?;
        let average = grid.integrate(|p| p.dot_axis(outcome) / std::f64::consts::PI);
        amplitude += coefficient * Complex64::from_polar(1.0, basis.phase()) * average;
    }
    Ok(amplitude)
}

fn cmd_probe(a_deg: f64, b_deg: f64, kind: FieldKind) -> hemifield::Result<Table> {
    let a = Axis::new(a_deg * DEG);
    let b = Axis::new(b_deg * DEG);
    let field = kind.build(a);
    let measured = field.measure(b)?;
    let amp_plus = field.measurement_amplitude(b);
    let amp_minus = field.measurement_amplitude(b.antipode());
    let residual_plus = (amp_plus - quadrature_amplitude(&field, b, 32, 64)?).norm();
    let residual_minus = (amp_minus - quadrature_amplitude(&field, b.antipode(), 32, 64)?).norm();

    let mut table = Table::new(&["quantity", "value"])
        .with_param("command", Cell::text("probe"))
        .with_param("a_deg", Cell::Num(a_deg))
        .with_param("b_deg", Cell::Num(b_deg))
        .with_param("field", Cell::text(kind.label()));
    table.push_row(vec![
        Cell::text("prob_plus"),
        Cell::Num(measured.probability(Sign::Plus)),
    ]);
    table.push_row(vec![
        Cell::text("prob_minus"),
        Cell::Num(measured.probability(Sign::Minus)),
    ]);
    table.push_row(vec![Cell::text("weight"), Cell::Num(field.weight())]);
    table.push_row(vec![Cell::text("amp_plus_abs"), Cell::Num(amp_plus.norm())]);
    table.push_row(vec![
        Cell::text("amp_minus_abs"),
        Cell::Num(amp_minus.norm()),
    ]);
    table.push_row(vec![
        Cell::text("quadrature_residual"),
        Cell::Num(residual_plus.max(residual_minus)),
    ]);
    Ok(table)
}

// ─────────────────────────────────────────────────────────────────────────────
// joint
// ─────────────────────────────────────────────────────────────────────────────

fn distribution_row(name: &str, d: &JointDistribution, reference: &JointDistribution) -> Vec<Cell> {
    vec![
        Cell::text(name),
        Cell::Num(d.probability(Sign::Plus, Sign::Plus)),
        Cell::Num(d.probability(Sign::Plus, Sign::Minus)),
        Cell::Num(d.probability(Sign::Minus, Sign::Plus)),
        Cell::Num(d.probability(Sign::Minus, Sign::Minus)),
        Cell::Num(d.correlation()),
        Cell::Num(d.max_abs_difference(reference)),
    ]
}

fn cmd_joint(
    u_deg: f64,
    a_deg: f64,
    b_deg: f64,
    route: Route,
    reading: ConditionalReading,
) -> Table {
    let u = Axis::new(u_deg * DEG);
    let s = JointSetting {
        a: Axis::new(a_deg * DEG),
        b: Axis::new(b_deg * DEG),
    };
    let reference = joint_distribution(s, u);
    let cond = |wing| joint_via_conditional_with(s, wing, reading);
    let routes: Vec<(&str, JointDistribution)> = match route {
        Route::Aleph => vec![("aleph", reference)],
        Route::Cond1 => vec![("cond1", cond(Wing::One))],
        Route::Cond2 => vec![("cond2", cond(Wing::Two))],
        Route::All => vec![
            ("aleph", reference),
            ("cond1", cond(Wing::One)),
            ("cond2", cond(Wing::Two)),
        ],
    };

    let mut table = Table::new(&[
        "route",
        "p_pp",
        "p_pm",
        "p_mp",
        "p_mm",
        "correlation",
        "max_abs_discrepancy",
    ])
    .with_param("command", Cell::text("joint"))
    .with_param("a_deg", Cell::Num(a_deg))
    .with_param("b_deg", Cell::Num(b_deg))
    .with_param("u_deg", Cell::Num(u_deg))
    .with_param("conditional_reading", Cell::text(reading_label(reading)));
    for (name, d) in &routes {
        table.push_row(distribution_row(name, d, &reference));
    }
    table
}

fn reading_label(reading: ConditionalReading) -> &'static str {
    match reading {
        ConditionalReading::Corrected => "corrected",
        ConditionalReading::Literal => "literal",
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// sweep
// ─────────────────────────────────────────────────────────────────────────────

fn cmd_sweep(u: Axis, delta_min_deg: f64, delta_max_deg: f64, steps: u64) -> Table {
    let mut table = Table::new(&[
        "delta_deg",
        "p_pp",
        "p_pm",
        "e_model",
        "e_naive",
        "e_quantum",
    ])
    .with_param("command", Cell::text("sweep"))
    .with_param("delta_min_deg", Cell::Num(delta_min_deg))
    .with_param("delta_max_deg", Cell::Num(delta_max_deg))
    .with_param("steps", Cell::Count(steps))
    .with_param("u_deg", Cell::Num(u.theta() / DEG));
    for i in 0..steps {
        let fraction = i as f64 / (steps - 1) as f64;
        let delta_deg = delta_min_deg + fraction * (delta_max_deg - delta_min_deg);
        let delta = delta_deg * DEG;
        let s = JointSetting {
            a: Axis::new(0.0),
            b: Axis::new(delta),
        };
        let d = joint_distribution(s, u);
        table.push_row(vec![
            Cell::Num(delta_deg),
            Cell::Num(d.probability(Sign::Plus, Sign::Plus)),
            Cell::Num(d.probability(Sign::Plus, Sign::Minus)),
            Cell::Num(d.correlation()),
            Cell::Num(baseline_correlation(s, UPolicy::Uniform)),
            Cell::Num(-delta.cos()),
        ]);
    }
    table
}

// ─────────────────────────────────────────────────────────────────────────────
// chsh
// ─────────────────────────────────────────────────────────────────────────────

fn cmd_chsh(
    cli: &Cli,
    angles_deg: [f64; 4],
    mode: Mode,
    n: u64,
    baseline: bool,
    baseline_u: BaselineU,
) -> hemifield::Result<Table> {
    let [a, a2, b, b2] = angles_deg.map(|deg| Axis::new(deg * DEG));
    let u = Axis::new(cli.u_deg * DEG);
    let policy = match baseline_u {
        BaselineU::Uniform => UPolicy::Uniform,
        BaselineU::Fixed => UPolicy::Fixed(u),
    };
    let report: ChshReport = match (baseline, mode) {
        (false, Mode::Analytic) => chsh_analytic(a, a2, b, b2),
        (false, Mode::Montecarlo) => chsh_monte_carlo(a, a2, b, b2, u, n, cli.seed)?,
        (true, Mode::Analytic) => chsh_baseline_analytic(a, a2, b, b2, policy),
        (true, Mode::Montecarlo) => chsh_baseline_monte_carlo(a, a2, b, b2, policy, n, cli.seed)?,
    };

    let mut table = Table::new(&[
        "e_ab",
        "e_ab2",
        "e_a2b",
        "e_a2b2",
        "s_value",
        "s_std_error",
        "classical_bound",
        "quantum_bound",
    ])
    .with_param("command", Cell::text("chsh"))
    .with_param("a_deg", Cell::Num(angles_deg[0]))
    .with_param("a2_deg", Cell::Num(angles_deg[1]))
    .with_param("b_deg", Cell::Num(angles_deg[2]))
    .with_param("b2_deg", Cell::Num(angles_deg[3]))
    .with_param(
        "mode",
        Cell::text(match mode {
            Mode::Analytic => "analytic",
            Mode::Montecarlo => "montecarlo",
        }),
    )
    .with_param(
        "baseline",
        Cell::text(if baseline { "true" } else { "false" }),
    )
    .with_param(
        "baseline_u",
        Cell::text(match baseline_u {
            BaselineU::Uniform => "uniform",
            BaselineU::Fixed => "fixed",
        }),
    )
    .with_param("n", Cell::Count(n))
    .with_param("seed", Cell::Count(cli.seed))
    .with_param("u_deg", Cell::Num(cli.u_deg));
    table.push_row(vec![
        Cell::Num(report.e[0]),
        Cell::Num(report.e[1]),
        Cell::Num(report.e[2]),
        Cell::Num(report.e[3]),
        Cell::Num(report.s),
        Cell::Num(report.std_error),
        Cell::Num(2.0),
        Cell::Num(2.0 * 2.0f64.sqrt()),
    ]);
    Ok(table)
}

// ─────────────────────────────────────────────────────────────────────────────
// sample
// ─────────────────────────────────────────────────────────────────────────────

fn cmd_sample(cli: &Cli, a_deg: f64, b_deg: f64, n: u64) -> hemifield::Result<Table> {
    let u = Axis::new(cli.u_deg * DEG);
    let s = JointSetting {
        a: Axis::new(a_deg * DEG),
        b: Axis::new(b_deg * DEG),
    };
    let stats = run_experiment(s, u, n, cli.seed)?;
    let model = joint_distribution(s, u);

    let outcome_label = |e: Sign| if e == Sign::Plus { "p" } else { "m" };
    let mut table = Table::new(&["quantity", "value"])
        .with_param("command", Cell::text("sample"))
        .with_param("a_deg", Cell::Num(a_deg))
        .with_param("b_deg", Cell::Num(b_deg))
        .with_param("u_deg", Cell::Num(cli.u_deg))
        .with_param("n", Cell::Count(n))
        .with_param("seed", Cell::Count(cli.seed));
    table.push_row(vec![Cell::text("n"), Cell::Count(stats.n())]);
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            table.push_row(vec![
                Cell::text(format!("count_{}{}", outcome_label(e1), outcome_label(e2))),
                Cell::Count(stats.count(e1, e2)),
            ]);
        }
    }
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            table.push_row(vec![
                Cell::text(format!("freq_{}{}", outcome_label(e1), outcome_label(e2))),
                Cell::Num(stats.frequency(e1, e2)),
            ]);
        }
    }
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            table.push_row(vec![
                Cell::text(format!("se_{}{}", outcome_label(e1), outcome_label(e2))),
                Cell::Num(stats.std_error(e1, e2)),
            ]);
        }
    }
    let empirical = stats.empirical_joint();
    table.push_row(vec![
        Cell::text("marginal1_plus"),
        Cell::Num(empirical.marginal(Wing::One).0),
    ]);
    table.push_row(vec![
        Cell::text("marginal2_plus"),
        Cell::Num(empirical.marginal(Wing::Two).0),
    ]);
    table.push_row(vec![
        Cell::text("correlation"),
        Cell::Num(stats.correlation()),
    ]);
    table.push_row(vec![
        Cell::text("correlation_se"),
        Cell::Num(stats.correlation_std_error()),
    ]);
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            table.push_row(vec![
                Cell::text(format!(
                    "model_p_{}{}",
                    outcome_label(e1),
                    outcome_label(e2)
                )),
                Cell::Num(model.probability(e1, e2)),
            ]);
        }
    }
    table.push_row(vec![
        Cell::text("model_correlation"),
        Cell::Num(model.correlation()),
    ]);
    Ok(table)
}

// ─────────────────────────────────────────────────────────────────────────────
// check
// ─────────────────────────────────────────────────────────────────────────────

/// Pass condition for one check line.
#[derive(Debug, Clone, Copy)]
enum Requirement {
    AtMost(f64),
    AtLeast(f64),
}

impl Requirement {
    fn pass(self, value: f64) -> bool {
        match self {
            Requirement::AtMost(bound) => value <= bound,
            Requirement::AtLeast(bound) => value >= bound,
        }
    }

    fn label(self) -> String {
        match self {
            Requirement::AtMost(bound) => format!("<= {bound:e}"),
            Requirement::AtLeast(bound) => format!(">= {bound:e}"),
        }
    }
}

/// Evenly spaced angles over a full turn (endpoint excluded).
fn angle_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| 2.0 * std::f64::consts::PI * k as f64 / n as f64 - std::f64::consts::PI)
}

fn cmd_check(reading: ConditionalReading) -> hemifield::Result<(Table, bool)> {
    use std::f64::consts::PI;
    const TAU: f64 = 2.0 * PI;
    let mut checks: Vec<(&str, f64, Requirement)> = Vec::new();

    // Quadrature reproduces the hemisphere area.
    let grid = hemisphere_grid(Hemisphere::positive(Axis::new(0.7)), 32, 64)?;
    checks.push((
        "hemisphere_area",
        (grid.total_weight() - TAU).abs(),
        Requirement::AtMost(1e-9),
    ));

    // Quadrature reproduces the closed-form hemisphere integral of the
    // dot-product profile.
    let mut worst = 0.0f64;
    for (a, c) in [
        (0.0, 0.0),
        (0.5, 1.3),
        (-1.2, 0.4),
        (2.0, -2.5),
        (3.0, 0.25),
    ] {
        let region = Hemisphere::positive(Axis::new(c));
        let g = hemisphere_grid(region, 32, 64)?;
        let quadrature = g.integrate(|p| p.dot_axis(Axis::new(a)) / PI);
        worst = worst.max((quadrature - average_full_dot(Axis::new(a), region)).abs());
    }
    checks.push(("first_moment_quadrature", worst, Requirement::AtMost(1e-9)));

    // Single-axis measurement law.
    let mut worst = 0.0f64;
    for a in angle_grid(24) {
        let field = FieldSuperposition::hemisphere(Axis::new(a));
        for b in angle_grid(24) {
            let m = field.measure(Axis::new(b))?;
            let expected = (0.5 * (b - a)).cos().powi(2);
            worst = worst.max((m.probability(Sign::Plus) - expected).abs());
            worst = worst.max((m.probability(Sign::Plus) + m.probability(Sign::Minus) - 1.0).abs());
        }
    }
    checks.push(("measurement_law", worst, Requirement::AtMost(1e-12)));

    // Rebasing a preparation onto any axis preserves every probability.
    let mut worst = 0.0f64;
    for a in angle_grid(8) {
        let direct = FieldSuperposition::hemisphere(Axis::new(a));
        for u2 in angle_grid(12) {
            let rebased = rebasis(Axis::new(a), Axis::new(u2));
            for b in angle_grid(36) {
                let p_direct = direct.measure(Axis::new(b))?.probability(Sign::Plus);
                let p_rebased = rebased.measure(Axis::new(b))?.probability(Sign::Plus);
                worst = worst.max((p_direct - p_rebased).abs());
            }
        }
    }
    checks.push(("rebasis_equivalence", worst, Requirement::AtMost(1e-12)));

    // The isotropic constructions measure 1/2 everywhere.
    let mut worst = 0.0f64;
    for sign in Sign::BOTH {
        let field = alpha_field(Axis::new(0.9), sign);
        for b in angle_grid(360) {
            let m = field.measure(Axis::new(b))?;
            worst = worst.max((m.probability(Sign::Plus) - 0.5).abs());
        }
    }
    checks.push(("alpha_isotropy", worst, Requirement::AtMost(1e-12)));

    // Branch conditionals average to the unconditional 1/2.
    let mut worst = 0.0f64;
    for u2 in angle_grid(60) {
        for b in angle_grid(60) {
            worst = worst.max(consistency_check(Axis::new(u2), Axis::new(b), reading));
        }
    }
    checks.push(("conditional_consistency", worst, Requirement::AtMost(1e-12)));

    // The three joint-distribution routes agree.
    let mut worst = 0.0f64;
    for a in angle_grid(12) {
        for b in angle_grid(12) {
            let s = JointSetting {
                a: Axis::new(a),
                b: Axis::new(b),
            };
            for u2 in angle_grid(6) {
                let direct = joint_distribution(s, Axis::new(u2));
                for wing in [Wing::One, Wing::Two] {
                    let conditional = joint_via_conditional_with(s, wing, reading);
                    worst = worst.max(direct.max_abs_difference(&conditional));
                }
            }
        }
    }
    checks.push(("route_agreement", worst, Requirement::AtMost(1e-12)));

    // The construction axis drops out of the joint distribution.
    let mut worst = 0.0f64;
    for a in angle_grid(6) {
        for b in angle_grid(6) {
            let s = JointSetting {
                a: Axis::new(a),
                b: Axis::new(b),
            };
            let reference = joint_distribution(s, Axis::new(0.0));
            for u2 in angle_grid(12) {
                worst =
                    worst.max(joint_distribution(s, Axis::new(u2)).max_abs_difference(&reference));
            }
        }
    }
    checks.push((
        "construction_axis_independence",
        worst,
        Requirement::AtMost(1e-12),
    ));

    // Local marginals ignore the remote axis.
    let mut worst = 0.0f64;
    for wing in [Wing::One, Wing::Two] {
        for local in angle_grid(12) {
            for remote in angle_grid(36) {
                let s = match wing {
                    Wing::One => JointSetting {
                        a: Axis::new(local),
                        b: Axis::new(remote),
                    },
                    Wing::Two => JointSetting {
                        a: Axis::new(remote),
                        b: Axis::new(local),
                    },
                };
                let (p_plus, p_minus) = joint_distribution(s, Axis::new(0.3)).marginal(wing);
                worst = worst.max((p_plus - 0.5).abs()).max((p_minus - 0.5).abs());
            }
        }
    }
    checks.push(("no_signaling", worst, Requirement::AtMost(1e-12)));

    // Including the symmetric part would shift the forbidden equal-outcome
    // weight at equal settings by exactly 1/4.
    let s_equal = JointSetting {
        a: Axis::new(0.9),
        b: Axis::new(0.9),
    };
    let report = f0_noncontribution_check(s_equal, Axis::new(0.2))?;
    checks.push((
        "symmetric_part_exclusion",
        (report.f0_included_discrepancy - 0.25).abs(),
        Requirement::AtMost(1e-12),
    ));

    // Sequential probes do not commute.
    let field = FieldSuperposition::hemisphere(Axis::new(0.0));
    let b = Axis::new(PI / 4.0);
    let c = Axis::new(PI / 2.0);
    let p_bc = enumerate_sequential(&field, &[b, c])?[0].1;
    let p_cb = enumerate_sequential(&field, &[c, b])?[0].1;
    checks.push((
        "order_dependence",
        (p_bc - p_cb).abs(),
        Requirement::AtLeast(0.1),
    ));

    // Pair correlation follows the negative cosine of the separation.
    let mut worst = 0.0f64;
    for delta in angle_grid(360) {
        let s = JointSetting {
            a: Axis::new(0.4),
            b: Axis::new(0.4 + delta),
        };
        let e = joint_distribution(s, Axis::new(1.0)).correlation();
        worst = worst.max((e - (-delta.cos())).abs());
    }
    checks.push(("correlation_law", worst, Requirement::AtMost(1e-12)));

    let mut table = Table::new(&["check", "value", "requirement", "pass"])
        .with_param("command", Cell::text("check"))
        .with_param("conditional_reading", Cell::text(reading_label(reading)));
    let mut all_pass = true;
    for (name, value, requirement) in checks {
        let pass = requirement.pass(value);
        all_pass &= pass;
        table.push_row(vec![
            Cell::text(name),
            Cell::Num(value),
            Cell::text(requirement.label()),
            Cell::text(if pass { "true" } else { "false" }),
        ]);
    }
    Ok((table, all_pass))
}
