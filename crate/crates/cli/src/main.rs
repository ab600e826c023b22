mod decide;
mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_spaces::algebra::DirichletPolynomial;
use dirichlet_spaces::norms::{
    h2_norm, hp_norm, mixed_norm, Exponent, InnerNorm, QuadratureScheme, QuadratureSpec,
    SpaceParams,
};
use dirichlet_spaces::randomization::{
    partial_sum_experiment, randomize, symbol_membership, ExperimentOptions, Generator, ModelKind,
    RandomModel, Schedule, Verdict,
};
use dirichlet_spaces::regions::{
    lacunary_proxy_levels, parse_rational, region_grid, witness_for, write_csv, GridDecider,
    GridSpec, Preset, WitnessFamily, DEFAULT_GRID, MAX_LACUNARY_LEVEL,
};
use num_complex::Complex64;
use serde_json::json;

use decide::DecideKind;
use output::{emit, float, to_json, CliError, CliResult, EXIT_INCONCLUSIVE, EXIT_SELFTEST};

#[derive(Parser)]
#[command(
    name = "dirichlet-spaces",
    version,
    about = "Norms, random series and inclusion regions for Dirichlet series spaces"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "DIRICHLET_THREADS")]
    threads: Option<usize>,

    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Norm of a series in H^p, A^p_alpha or H^{p,q}_alpha.
    Norm(NormArgs),
    /// Decide an inclusion, random embedding or superposition question.
    Decide {
        kind: DecideKind,
        /// Parameters, positional or as key=value; exact rationals such as 7/3 or 0.25.
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Witness family for a failing inclusion H^{p,q}_alpha ⊂ H^{u,v}_beta.
    Witness(WitnessArgs),
    /// Multiply the coefficients of a series by random signs or phases.
    Randomize {
        series: PathBuf,
        #[arg(long, default_value = "bernoulli")]
        model: ModelKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Track a membership statistic along a schedule of truncations.
    Experiment(ExperimentArgs),
    /// Decide every point of a (p, q) grid and write CSV.
    Region(RegionArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long)]
    p: f64,
    /// Outer exponent; `inf` for the Hardy space.
    #[arg(long, default_value = "inf")]
    q: Exponent,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
}

impl SpaceArgs {
    fn space(&self) -> CliResult<SpaceParams> {
        Ok(SpaceParams::new(self.p, self.q, self.alpha)?)
    }
}

#[derive(Args)]
struct QuadratureArgs {
    /// Gauss-Laguerre nodes.
    #[arg(long, default_value_t = dirichlet_spaces::norms::DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, default_value_t = dirichlet_spaces::norms::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Use adaptive Gauss-Kronrod instead of Gauss-Laguerre.
    #[arg(long)]
    adaptive: bool,
}

impl QuadratureArgs {
    fn spec(&self) -> CliResult<QuadratureSpec> {
        let spec = QuadratureSpec {
            nodes: self.nodes,
            scheme: if self.adaptive {
                QuadratureScheme::AdaptiveComposite
            } else {
                QuadratureScheme::GaussLaguerre
            },
            tolerance: self.tolerance,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct NormArgs {
    /// Series JSON file, or `-` for stdin.
    series: PathBuf,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    quadrature: QuadratureArgs,
    /// Torus samples when p is not an even integer.
    #[arg(long, default_value_t = 100_000)]
    mc_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(allow_hyphen_values = true)]
    p: f64,
    q: f64,
    #[arg(allow_hyphen_values = true)]
    alpha: f64,
    u: f64,
    v: f64,
    #[arg(allow_hyphen_values = true)]
    beta: f64,
    /// Truncation level for lacunary families, index bound for the smooth-number family.
    #[arg(long)]
    level: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symbol,
    PartialSum,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Series JSON file; otherwise `--generator` builds one.
    #[arg(long, conflicts_with = "generator")]
    series: Option<PathBuf>,
    #[arg(long, required_unless_present = "series")]
    generator: Option<Generator>,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    quadrature: QuadratureArgs,
    #[arg(long, value_enum, default_value = "partial-sum")]
    mode: Mode,
    #[arg(long, default_value = "bernoulli")]
    model: ModelKind,
    /// `start:factor:count` or a comma-separated list of levels.
    #[arg(long, default_value = "10:10:4")]
    schedule: Schedule,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Torus samples per inner norm when p is not an even integer.
    #[arg(long, default_value_t = 4000)]
    inner_trials: usize,
    /// Report quantiles of the final-level norms.
    #[arg(long)]
    tail: bool,
    /// Also write the trajectory as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Exit with status 4 when the verdict is inconclusive.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum DeciderKind {
    RandomHardy,
    Disk,
    RandomBergman,
    Inclusion,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long, conflicts_with = "decider")]
    preset: Option<Preset>,
    #[arg(long, value_enum, required_unless_present = "preset")]
    decider: Option<DeciderKind>,
    /// `pmin:pmax:steps,qmin:qmax:steps`.
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: GridSpec,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value = "2")]
    u: String,
    #[arg(long, default_value = "2")]
    v: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_series(path: &Path) -> CliResult<DirichletPolynomial<Complex64>> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
    };
    Ok(DirichletPolynomial::from_json(&text)?)
}

fn cmd_norm(a: &NormArgs) -> CliResult<serde_json::Value> {
    let f = read_series(&a.series)?;
    let space = a.space.space()?;
    let spec = a.quadrature.spec()?;
    let inner = InnerNorm::auto(space.p, a.mc_trials, a.seed);
    let estimate = match space.q {
        Exponent::Infinite if space.p == 2.0 => dirichlet_spaces::norms::NormEstimate {
            value: h2_norm(&f),
            method: dirichlet_spaces::norms::NormMethod::Exact,
            error: 0.0,
            n: 0,
        },
        Exponent::Infinite => hp_norm(&f, space.p, inner)?,
        Exponent::Finite(_) => mixed_norm(&f, &space, &spec, inner)?,
    };
    Ok(json!({
        "config": {
            "command": "norm",
            "series": a.series,
            "space": space,
            "quadrature": spec,
            "inner": inner,
            "seed": a.seed,
        },
        "estimate": estimate,
    }))
}

fn cmd_decide(kind: DecideKind, params: &[String]) -> CliResult<serde_json::Value> {
    let values = decide::resolve(kind, params)?;
    let verdict = decide::decide(kind, &values)?;
    Ok(json!({
        "config": { "command": "decide", "kind": kind, "params": values },
        "verdict": verdict,
    }))
}

fn cmd_witness(a: &WitnessArgs) -> CliResult<serde_json::Value> {
    let family = witness_for(a.p, a.q, a.alpha, a.u, a.v, a.beta)?;
    let mut proxies = Vec::new();
    let mut series = None;
    let mut level = a.level;
    match &family {
        Some(WitnessFamily::F3 { .. }) => {
            let bound = *level.get_or_insert(1000);
            series = Some(family.as_ref().unwrap().truncation(bound)?);
        }
        Some(fam) => {
            let top = *level.get_or_insert(4);
            let top = u32::try_from(top)
                .map_err(|_| CliError::input(format!("level {top} is too large")))?;
            for l in 0..=top {
                let levels = fam.levels(l)?;
                proxies.push(json!({
                    "level": l,
                    "source": lacunary_proxy_levels(levels.iter().copied(), a.q, a.alpha)?,
                    "target": lacunary_proxy_levels(levels.iter().copied(), a.v, a.beta)?,
                }));
            }
            if top <= MAX_LACUNARY_LEVEL {
                series = Some(fam.truncation(top as u64)?);
            }
        }
        None => {}
    }
    Ok(json!({
        "config": {
            "command": "witness",
            "p": a.p, "q": a.q, "alpha": a.alpha, "u": a.u, "v": a.v, "beta": a.beta,
            "level": level,
        },
        "included": family.is_none(),
        "family": family,
        "proxies": proxies,
        "series": series,
    }))
}

fn cmd_randomize(series: &Path, model: ModelKind, seed: u64) -> CliResult<serde_json::Value> {
    let f = read_series(series)?;
    let rf = randomize(&f, &RandomModel::new(model, seed));
    Ok(json!({
        "config": { "command": "randomize", "series": series, "model": model, "seed": seed },
        "series": rf,
    }))
}

fn cmd_experiment(a: &ExperimentArgs) -> CliResult<(serde_json::Value, Verdict)> {
    let f = match (&a.series, a.generator) {
        (Some(path), _) => read_series(path)?,
        (None, Some(g)) => g.polynomial(a.schedule.max()),
        (None, None) => {
            return Err(CliError::input(
                "either --series or --generator is required",
            ))
        }
    };
    let space = a.space.space()?;
    let opts = ExperimentOptions {
        quadrature: a.quadrature.spec()?,
        inner_trials: a.inner_trials,
        tail: a.tail,
    };
    let report = match a.mode {
        Mode::Symbol => symbol_membership(&f, &space, &a.schedule, &opts.quadrature)?,
        Mode::PartialSum => {
            partial_sum_experiment(&f, &space, a.model, &a.schedule, a.trials, a.seed, &opts)?
        }
    };
    if let Some(path) = &a.csv {
        let mut text = String::from("level,value,scale\n");
        for ((level, value), scale) in a
            .schedule
            .levels()
            .iter()
            .zip(&report.values)
            .zip(&report.scale)
        {
            text.push_str(&format!("{level},{},{}\n", float(*value), float(*scale)));
        }
        emit(&text, Some(path))?;
    }
    let verdict = report.verdict;
    let value = json!({
        "config": {
            "command": "experiment",
            "series": a.series,
            "generator": a.generator,
            "mode": match a.mode { Mode::Symbol => "symbol", Mode::PartialSum => "partial-sum" },
            "space": space,
            "model": a.model,
            "schedule": a.schedule,
            "trials": a.trials,
            "seed": a.seed,
            "options": opts,
        },
        "report": report,
    });
    Ok((value, verdict))
}

fn rational(name: &str, text: &str) -> CliResult<num_rational::BigRational> {
    parse_rational(text).map_err(|e| CliError::input(format!("{name}: {e}")))
}

fn cmd_region(a: &RegionArgs) -> CliResult<Option<serde_json::Value>> {
    let (decider, label) = match (a.preset, a.decider) {
        (Some(p), _) => (p.decider(), json!({ "preset": p })),
        (None, Some(kind)) => {
            let d = match kind {
                DeciderKind::RandomHardy => GridDecider::RandomHardy,
                DeciderKind::Disk => GridDecider::Disk,
                DeciderKind::RandomBergman => GridDecider::RandomBergman {
                    alpha: rational("alpha", &a.alpha)?,
                    beta: rational("beta", &a.beta)?,
                },
                DeciderKind::Inclusion => GridDecider::Inclusion {
                    alpha: rational("alpha", &a.alpha)?,
                    u: rational("u", &a.u)?,
                    v: rational("v", &a.v)?,
                    beta: rational("beta", &a.beta)?,
                },
            };
            let label = match kind {
                DeciderKind::RandomHardy | DeciderKind::Disk => json!({ "decider": kind }),
                DeciderKind::RandomBergman => {
                    json!({ "decider": kind, "alpha": a.alpha, "beta": a.beta })
                }
                DeciderKind::Inclusion => json!({
                    "decider": kind, "alpha": a.alpha, "u": a.u, "v": a.v, "beta": a.beta,
                }),
            };
            (d, label)
        }
        (None, None) => return Err(CliError::input("either --preset or --decider is required")),
    };
    let rows = region_grid(&decider, &a.grid)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    let csv = String::from_utf8(csv).expect("CSV is ASCII");
    match &a.out {
        Some(path) => {
            emit(&csv, Some(path))?;
            Ok(Some(json!({
                "config": {
                    "command": "region",
                    "decider": label,
                    "grid": {
                        "p": [a.grid.p.min.to_string(), a.grid.p.max.to_string(), a.grid.p.steps],
                        "q": [a.grid.q.min.to_string(), a.grid.q.max.to_string(), a.grid.q.steps],
                    },
                    "out": path,
                },
                "rows": rows.len(),
                "included": rows.iter().filter(|r| r.included).count(),
            })))
        }
        None => {
            emit(&csv, None)?;
            Ok(None)
        }
    }
}

fn cmd_selftest() -> CliResult<(serde_json::Value, bool)> {
    use dirichlet_spaces::norms::{hp_norm_exact_even, hp_norm_mc, mu_alpha_integral};
    use dirichlet_spaces::randomization::khintchine_ratio;
    use dirichlet_spaces::regions::inclusion_decide;
    use dirichlet_spaces::superposition::{prop_nn_check, superposition_bergman_decide};

    let spec = QuadratureSpec::default();
    let f = DirichletPolynomial::from_real([(1, 1.0), (2, 1.0), (3, 1.0)])?;
    let g = DirichletPolynomial::from_real([(1, 1.0), (2, 1.0)])?;
    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool| checks.push(json!({ "name": name, "pass": pass }));

    let mut mass = true;
    for alpha in [-0.5, 0.0, 1.0, 2.5] {
        mass &= (mu_alpha_integral(|_| 1.0, alpha, &spec)?.value - 1.0).abs() <= 1e-12;
    }
    check("quadrature-mass", mass);
    check(
        "exact-h4",
        (hp_norm_exact_even(&f, 2)? - 15f64.powf(0.25)).abs() <= 1e-14,
    );
    let k = khintchine_ratio(
        &g,
        4.0,
        ModelKind::Bernoulli,
        16,
        1,
        &ExperimentOptions::default(),
    )?;
    check(
        "khintchine-h4",
        (k.value - 1.5f64.powf(0.25)).abs() <= 1e-12,
    );
    check(
        "power-identity",
        prop_nn_check(&f, 3, 2)?.deviation <= 1e-10,
    );
    let a = hp_norm_mc(&f, 3.0, 4096, 9)?;
    let b = hp_norm_mc(&f, 3.0, 4096, 9)?;
    check("mc-determinism", a.value.to_bits() == b.value.to_bits());
    check(
        "inclusion",
        inclusion_decide(4.0, 4.0, 0.0, 2.0, 4.0, 1.0)?.included,
    );
    check(
        "superposition",
        !superposition_bergman_decide(3, 4.0, 0.0, 2.0, 0.0)?.included,
    );

    let passed = checks.iter().all(|c| c["pass"] == true);
    Ok((
        json!({ "config": { "command": "selftest" }, "checks": checks, "passed": passed }),
        passed,
    ))
}

fn run(cli: &Cli) -> CliResult<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::input(e.to_string()))?;
    }
    let out = cli.output.as_deref();
    let value = match &cli.command {
        Command::Norm(a) => cmd_norm(a)?,
        Command::Decide { kind, params } => cmd_decide(*kind, params)?,
        Command::Witness(a) => cmd_witness(a)?,
        Command::Randomize {
            series,
            model,
            seed,
        } => cmd_randomize(series, *model, *seed)?,
        Command::Experiment(a) => {
            let (value, verdict) = cmd_experiment(a)?;
            emit(&to_json(&value)?, out)?;
            return Ok(if a.strict && verdict == Verdict::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                0
            });
        }
        Command::Region(a) => match cmd_region(a)? {
            Some(v) => v,
            None => return Ok(0),
        },
        Command::Selftest => {
            let (value, passed) = cmd_selftest()?;
            emit(&to_json(&value)?, out)?;
            return Ok(if passed { 0 } else { EXIT_SELFTEST });
        }
    };
    emit(&to_json(&value)?, out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
