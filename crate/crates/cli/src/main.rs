//! Unified command-line entry point for the nine-cubes toolkit.
//!
//! One command per process, single-threaded throughout; all sampling
//! flows from the `--seed` flag, so identical invocations produce
//! byte-identical output. Data goes to standard output (or `--output`),
//! diagnostics to standard error. Exit codes: 0 success, 1 usage,
//! 2 domain/unsupported, 3 budget, 4 serialization.

mod emit;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_integer::Roots;

use emit::{internal, vbig, vbool, vf, vopt, vstr, vu128, vu64, CliError, Format, Record};
use wpslab_core::circle::{compare_window, rep_count, singular_series, weighted_t};
use wpslab_core::exponent::{parse_rational, rational_f64, rational_str};
use wpslab_core::exponents::{budget, case_partition, delta_vector, threshold};
use wpslab_core::expsum::{
    bilinear_probe, build_series_with, hua_moment_with, script_s_probe, sup_diff_scan_with,
    BilinearKind, BilinearParams, CoeffSpec, Phase, RationalPhase, ScriptSParams, SeriesKind,
};
use wpslab_core::identities::{
    count_spacings, mangoldt_residual, psi_truncation, srinivasan_min, vdc_probe, ArithmeticTables,
    DerivOrder, MonomialObjective, SpacingParams, VdcParams,
};
use wpslab_core::ps::{pi_gamma, ps_primes_with, ps_sequence_with, PsPrimeTable};
use wpslab_core::{Budgets, Error, Exponent, Rational};

#[derive(Parser)]
#[command(
    name = "wpslab",
    version,
    about = "Desk-scale experiments on sums of nine cubes of shifted-power primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every sampled probe; identical seeds reproduce output
    /// byte for byte.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format: JSON lines with sorted keys, or CSV with a header.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write data to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Ceiling on elementary enumeration steps.
    #[arg(long, global = true)]
    max_terms: Option<u64>,

    /// Ceiling on big-integer widths in bits.
    #[arg(long, global = true)]
    max_bits: Option<u64>,

    /// Memory ceiling in MiB (the WPSLAB_BUDGET_MB variable overrides
    /// the built-in default; this flag overrides both).
    #[arg(long, global = true)]
    max_mem_mb: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Shifted-power sequences and the primes inside them.
    Ps {
        #[command(subcommand)]
        cmd: PsCmd,
    },
    /// Cubic exponential sums: evaluation, moments, and model probes.
    Expsum {
        #[command(subcommand)]
        cmd: ExpsumCmd,
    },
    /// Exact nine-cube representation counts over a window.
    Reps {
        #[command(subcommand)]
        cmd: RepsCmd,
    },
    /// Truncated singular series at one target.
    Sseries {
        /// Target integer.
        #[arg(long)]
        n: u64,
        /// Truncation level: sum moduli up to this bound.
        #[arg(long)]
        q: u64,
    },
    /// Weighted counts against truncated main terms over a window.
    Compare {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Shared exponent "a/b" for all nine factors.
        #[arg(long)]
        gamma: Exponent,
        /// Series truncation level.
        #[arg(long, default_value_t = 200)]
        q: u64,
    },
    /// Arithmetic identities: residual checks and sawtooth truncation.
    Identity {
        #[command(subcommand)]
        cmd: IdentityCmd,
    },
    /// Counts near-coincidences among differences of fractional powers.
    Spacing {
        /// h ranges over (H, 2H].
        #[arg(long = "H")]
        h: u64,
        /// k ranges over (K, 2K].
        #[arg(long = "K")]
        k: u64,
        /// Fractional exponent "a/b" in (1/2, 1).
        #[arg(long)]
        alpha: Exponent,
        /// Closeness threshold, a nonnegative rational "c/d".
        #[arg(long)]
        delta: String,
    },
    /// Minimizes a two-sided monomial sum and reports the splitting bound.
    Srinivasan {
        /// Objective as JSON: {"ascending":[[A,u],...],
        /// "descending":[[B,v],...],"q1":...,"q2":...}.
        #[arg(long)]
        terms: String,
    },
    /// Derivative-test envelope check for a cubic-plus-fractional phase.
    Vdc {
        /// Derivative order to test (2 for the square-root envelope,
        /// r >= 3 for the 2^(r-2)-th power envelope).
        #[arg(long)]
        order: u32,
        /// Cubic coefficient as a reduced fraction "a/q".
        #[arg(long)]
        alpha: String,
        /// Coefficient of the fractional-power term.
        #[arg(long = "h", allow_hyphen_values = true)]
        h: f64,
        /// Fractional exponent "a/b".
        #[arg(long)]
        gamma: Exponent,
        /// Shift inside the fractional power.
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        /// Sum over integers in (from, to].
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Exponent bookkeeping: admissibility, thresholds, range budgets.
    Exponents {
        #[command(subcommand)]
        cmd: ExponentsCmd,
    },
}

#[derive(Subcommand)]
enum PsCmd {
    /// List the sequence members up to a limit.
    Seq {
        #[arg(long)]
        gamma: Exponent,
        #[arg(long)]
        limit: u64,
    },
    /// List the primes in the sequence up to a limit.
    Primes {
        #[arg(long)]
        gamma: Exponent,
        #[arg(long)]
        limit: u64,
        /// Include the log and normalized weights per prime.
        #[arg(long)]
        weights: bool,
    },
    /// Count the primes in the sequence and the heuristic expectation.
    Pi {
        #[arg(long)]
        gamma: Exponent,
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Args)]
struct SeriesArgs {
    /// Series kind: G (log weights), F (normalized weights), f (indicator).
    #[arg(long)]
    kind: String,
    /// Exponent "a/b" selecting the sequence (omit for plain primes).
    #[arg(long)]
    gamma: Option<Exponent>,
    /// Frequencies run over the primes up to this bound.
    #[arg(long)]
    limit: u64,
}

#[derive(Subcommand)]
enum ExpsumCmd {
    /// Evaluate one series at a rational phase.
    Eval {
        #[command(flatten)]
        series: SeriesArgs,
        /// Phase "a/q".
        #[arg(long)]
        alpha: String,
    },
    /// Exact 2t-th moment as a Diophantine count.
    Moment {
        #[command(flatten)]
        series: SeriesArgs,
        /// Half-order t in {1, 2, 4}.
        #[arg(long)]
        t: u32,
    },
    /// Count equal sums of k-th powers (j-fold on each side) up to Y.
    Hua {
        #[arg(long = "Y")]
        y: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
    },
    /// Scan the gap between the weighted series and its log-weight model.
    Scan {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        gamma: Exponent,
        /// Uniform grid size on [0, 1).
        #[arg(long, default_value_t = 10_000)]
        grid: u64,
        /// Extra uniform random phases drawn from the seed.
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Direct-summation probes for the bilinear range estimates.
    Probe {
        #[command(subcommand)]
        cmd: ProbeCmd,
    },
}

#[derive(Args)]
struct BilinearArgs {
    /// Coefficient range scale: m runs over (M, 2M].
    #[arg(long = "m")]
    m: u64,
    /// Grouped range scale: k runs over (K, 2K].
    #[arg(long = "k")]
    k: u64,
    /// Harmonic range scale: h runs over (H, 2H].
    #[arg(long = "H")]
    h: u64,
    /// Cubic phase "a/q".
    #[arg(long)]
    alpha: String,
    /// Fractional exponent "a/b".
    #[arg(long)]
    gamma: Exponent,
    /// Shift inside the fractional power, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    u: f64,
    /// Coefficient family: one, moebius, liouville, random.
    #[arg(long, default_value = "one")]
    coeffs: String,
    /// Damping cutoff exponent: the prefactor is min(1, X^e / H).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    h1_exp: f64,
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// One-sided coefficients (Type I).
    #[command(name = "I")]
    TypeI {
        #[command(flatten)]
        args: BilinearArgs,
    },
    /// Coefficients on both ranges (Type II).
    #[command(name = "II")]
    TypeIi {
        #[command(flatten)]
        args: BilinearArgs,
    },
    /// Von Mangoldt-weighted harmonic average against its target power.
    #[command(name = "script-s")]
    ScriptS {
        /// Inner range scale: n runs over (X, 2X].
        #[arg(long = "x")]
        x: u64,
        /// Cubic phase "a/q".
        #[arg(long)]
        alpha: String,
        /// Harmonic range scale: h runs over (H, 2H].
        #[arg(long = "H")]
        h: u64,
        /// Fractional exponent "a/b".
        #[arg(long)]
        gamma: Exponent,
        /// Shift inside the fractional power.
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        /// Saving exponent "a/b" (window and target are powers of X).
        #[arg(long)]
        delta: String,
    },
}

#[derive(Args)]
struct RepsArgs {
    /// Top of the window; counts cover every target up to this bound.
    #[arg(long)]
    nmax: u64,
    /// One exponent "a/b" shared by all nine factors, or nine
    /// comma-separated exponents.
    #[arg(long)]
    gamma: String,
}

#[derive(Subcommand)]
enum RepsCmd {
    /// Exact ordered-tuple counts.
    Count {
        #[command(flatten)]
        args: RepsArgs,
    },
    /// Counts plus prime-weighted sums.
    Weighted {
        #[command(flatten)]
        args: RepsArgs,
    },
}

#[derive(Subcommand)]
enum IdentityCmd {
    /// Residual of the divisor-sum decomposition of the von Mangoldt
    /// function below 2 z^k.
    Hb {
        #[arg(long)]
        z: u64,
        #[arg(long)]
        k: u32,
        /// Check a single argument (default: every valid argument).
        #[arg(long = "n")]
        n: Option<u64>,
    },
    /// Sawtooth truncation error against the smoothing envelope on a grid.
    Psi {
        /// Truncation depth.
        #[arg(long = "H")]
        h: u64,
        /// Number of equally spaced sample points in [0, 1).
        #[arg(long, default_value_t = 1009)]
        grid: u64,
    },
}

#[derive(Subcommand)]
enum ExponentsCmd {
    /// Cascade increments for a nine-exponent vector.
    Delta {
        /// Nine comma-separated exponents "a/b" (or one, shared).
        #[arg(long)]
        gammas: String,
    },
    /// Admissibility constraints for a nine-exponent vector.
    Admissible {
        #[arg(long)]
        gammas: String,
    },
    /// Largest shared exponent at which a pattern stays admissible.
    Threshold {
        /// Pin the first FIXED exponents at 1 and share the rest.
        #[arg(long, default_value_t = 0)]
        fixed: usize,
    },
    /// Range budget derived from (gamma, Delta, epsilon).
    Budget {
        /// Shared exponent as a rational in (1/2, 1].
        #[arg(long)]
        gamma: String,
        /// Cascade increment, a rational in [0, 1/2).
        #[arg(long, default_value = "0")]
        delta: String,
        /// Slack, a nonnegative rational.
        #[arg(long, default_value = "0")]
        eps: String,
    },
    /// Classify a six-way factorization against a budget.
    Partition {
        /// Six comma-separated nonnegative rationals summing to 1.
        #[arg(long)]
        evec: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value = "0")]
        delta: String,
        #[arg(long, default_value = "0")]
        eps: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        if !matches!(e, CliError::PipeClosed) {
            eprintln!("error: {}", e.message());
        }
        std::process::exit(e.exit_code());
    }
}

fn budgets_from(cli: &Cli) -> Result<Budgets, CliError> {
    let defaults = Budgets::default();
    let env_mem = match std::env::var("WPSLAB_BUDGET_MB") {
        Ok(s) => Some(s.trim().parse::<u64>().map_err(|_| {
            CliError::Core(Error::Domain(format!(
                "WPSLAB_BUDGET_MB must be a positive integer, got {s:?}"
            )))
        })?),
        Err(_) => None,
    };
    let b = Budgets {
        max_terms: cli.max_terms.unwrap_or(defaults.max_terms),
        max_bits: cli.max_bits.unwrap_or(defaults.max_bits),
        max_mem_mb: cli.max_mem_mb.or(env_mem).unwrap_or(defaults.max_mem_mb),
    };
    if b.max_terms == 0 || b.max_bits == 0 || b.max_mem_mb == 0 {
        return Err(CliError::Core(Error::domain("budgets must be positive")));
    }
    Ok(b)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let budgets = budgets_from(&cli)?;
    let seed = cli.seed;
    let records = dispatch(&cli.command, seed, &budgets, cli.format)?;
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    emit::emit(&mut sink, cli.format, &records)?;
    sink.flush()?;
    Ok(())
}

fn dispatch(
    cmd: &Command,
    seed: u64,
    budgets: &Budgets,
    format: Format,
) -> Result<Vec<Record>, CliError> {
    match cmd {
        Command::Ps { cmd } => run_ps(cmd, budgets),
        Command::Expsum { cmd } => run_expsum(cmd, seed, budgets),
        Command::Reps { cmd } => run_reps(cmd, budgets),
        Command::Sseries { n, q } => {
            let v = singular_series(*n, *q, budgets)?;
            Ok(vec![vec![
                ("n", vu64(v.n)),
                ("q", vu64(v.q)),
                ("partial", vf(v.partial)?),
            ]])
        }
        Command::Compare { from, to, gamma, q } => {
            run_compare(*from, *to, *gamma, *q, budgets, format)
        }
        Command::Identity { cmd } => run_identity(cmd, budgets),
        Command::Spacing { h, k, alpha, delta } => {
            let params = SpacingParams {
                h_scale: *h,
                k_scale: *k,
                alpha: *alpha,
                delta: parse_rational(delta).map_err(CliError::Core)?,
            };
            let report = count_spacings(&params, budgets)?;
            Ok(vec![vec![
                ("H", vu64(*h)),
                ("K", vu64(*k)),
                ("alpha", vstr(alpha.to_string())),
                ("delta", vstr(rational_str(&params.delta))),
                ("count", vu64(report.count)),
                ("bound", vf(report.bound)?),
                ("ratio", vf(report.ratio)?),
            ]])
        }
        Command::Srinivasan { terms } => run_srinivasan(terms),
        Command::Vdc {
            order,
            alpha,
            h,
            gamma,
            u,
            from,
            to,
        } => {
            let order = match *order {
                0 | 1 => {
                    return Err(CliError::Core(Error::domain(
                        "derivative order must be at least 2",
                    )))
                }
                2 => DerivOrder::Second,
                r => DerivOrder::Higher { q: r - 2 },
            };
            let params = VdcParams {
                order,
                alpha: RationalPhase::parse(alpha).map_err(CliError::Core)?,
                h: *h,
                gamma: *gamma,
                u: *u,
                range_start: *from,
                range_end: *to,
            };
            let report = vdc_probe(&params, budgets)?;
            Ok(vec![vec![
                ("order", vu64(report.derivative_order as u64)),
                ("lambda", vf(report.lambda)?),
                ("coeff_ratio", vf(report.ratio_coeff)?),
                ("terms", vu64(report.term_count)),
                ("modulus", vf(report.sum_modulus)?),
                ("bound", vf(report.bound)?),
                ("ratio", vf(report.ratio)?),
            ]])
        }
        Command::Exponents { cmd } => run_exponents(cmd, budgets),
    }
}

fn run_ps(cmd: &PsCmd, budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    match cmd {
        PsCmd::Seq { gamma, limit } => {
            let members = ps_sequence_with(*limit, *gamma, budgets)?;
            Ok(members.into_iter().map(|m| vec![("m", vu64(m))]).collect())
        }
        PsCmd::Primes {
            gamma,
            limit,
            weights,
        } => {
            let table = ps_primes_with(*limit, *gamma, budgets)?;
            let mut records = Vec::with_capacity(table.primes.len());
            for (i, &p) in table.primes.iter().enumerate() {
                let mut rec: Record = vec![("p", vu64(p))];
                if *weights {
                    rec.push(("log_weight", vf(table.log_weights[i])?));
                    rec.push(("ps_weight", vf(table.ps_weights[i])?));
                }
                records.push(rec);
            }
            Ok(records)
        }
        PsCmd::Pi { gamma, limit } => {
            let (count, expected) = pi_gamma(*limit, *gamma)?;
            Ok(vec![vec![
                ("limit", vu64(*limit)),
                ("gamma", vstr(gamma.to_string())),
                ("count", vu64(count)),
                ("expected", vf(expected)?),
            ]])
        }
    }
}

fn build_series_from(
    args: &SeriesArgs,
    budgets: &Budgets,
) -> Result<wpslab_core::expsum::CubicExpSum, CliError> {
    let kind = SeriesKind::parse(&args.kind).map_err(CliError::Core)?;
    Ok(build_series_with(kind, args.limit, args.gamma, budgets)?)
}

fn run_expsum(cmd: &ExpsumCmd, seed: u64, budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    match cmd {
        ExpsumCmd::Eval { series, alpha } => {
            let s = build_series_from(series, budgets)?;
            let phase = RationalPhase::parse(alpha).map_err(CliError::Core)?;
            let value = s.eval(Phase::Rational(phase));
            Ok(vec![vec![
                ("kind", vstr(s.kind.letter())),
                ("limit", vu64(series.limit)),
                ("alpha", vstr(alpha.clone())),
                ("terms", vu64(s.frequencies.len() as u64)),
                ("real", vf(value.re)?),
                ("imag", vf(value.im)?),
                ("modulus", vf(value.norm())?),
            ]])
        }
        ExpsumCmd::Moment { series, t } => {
            let s = build_series_from(series, budgets)?;
            let m = s.moment(*t)?;
            Ok(vec![vec![
                ("kind", vstr(s.kind.letter())),
                ("limit", vu64(series.limit)),
                ("t", vu64(m.half_order as u64)),
                ("size", vu64(m.set_size as u64)),
                ("count", vu128(m.count)),
            ]])
        }
        ExpsumCmd::Hua { y, k, j } => {
            let count = hua_moment_with(*y, *k, *j, budgets)?;
            Ok(vec![vec![
                ("Y", vu64(*y)),
                ("k", vu64(*k as u64)),
                ("j", vu64(*j as u64)),
                ("count", vu128(count)),
            ]])
        }
        ExpsumCmd::Scan {
            n,
            gamma,
            grid,
            samples,
        } => {
            let report = sup_diff_scan_with(*n, *gamma, *grid, *samples, seed, budgets)?;
            Ok(vec![vec![
                ("N", vu64(*n)),
                ("gamma", vstr(gamma.to_string())),
                ("grid", vu64(*grid)),
                ("samples", vu64(*samples)),
                ("prime_bound", vu64(report.cube_root_bound)),
                ("max_abs_diff", vf(report.max_abs_diff)?),
                ("argmax", vf(report.argmax)?),
                ("f_zero", vf(report.f_zero)?),
                ("g_zero", vf(report.g_zero)?),
            ]])
        }
        ExpsumCmd::Probe { cmd } => run_probe(cmd, seed, budgets),
    }
}

fn run_bilinear(
    kind: BilinearKind,
    args: &BilinearArgs,
    seed: u64,
    budgets: &Budgets,
) -> Result<Vec<Record>, CliError> {
    let params = BilinearParams {
        kind,
        m_scale: args.m,
        k_scale: args.k,
        h_scale: args.h,
        alpha: RationalPhase::parse(&args.alpha).map_err(CliError::Core)?,
        gamma: args.gamma,
        u: args.u,
        coeffs: CoeffSpec::parse(&args.coeffs).map_err(CliError::Core)?,
        h1_exponent: args.h1_exp,
        seed,
    };
    let report = bilinear_probe(&params, budgets)?;
    Ok(vec![vec![
        (
            "kind",
            vstr(match kind {
                BilinearKind::TypeI => "I",
                BilinearKind::TypeII => "II",
            }),
        ),
        ("X", vu64(report.x_scale)),
        ("terms", vu64(report.term_count)),
        ("raw_sum", vf(report.raw_sum)?),
        ("prefactor", vf(report.prefactor)?),
        ("value", vf(report.value)?),
        ("trivial_bound", vf(report.trivial_bound)?),
        ("ratio", vf(report.ratio)?),
    ]])
}

fn run_probe(cmd: &ProbeCmd, seed: u64, budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    match cmd {
        ProbeCmd::TypeI { args } => run_bilinear(BilinearKind::TypeI, args, seed, budgets),
        ProbeCmd::TypeIi { args } => run_bilinear(BilinearKind::TypeII, args, seed, budgets),
        ProbeCmd::ScriptS {
            x,
            alpha,
            h,
            gamma,
            u,
            delta,
        } => {
            let params = ScriptSParams {
                x_scale: *x,
                alpha: RationalPhase::parse(alpha).map_err(CliError::Core)?,
                h_scale: *h,
                gamma: *gamma,
                u: *u,
                delta: parse_rational(delta).map_err(CliError::Core)?,
            };
            let report = script_s_probe(&params, budgets)?;
            Ok(vec![vec![
                ("X", vu64(*x)),
                ("H", vu64(*h)),
                ("delta", vstr(rational_str(&params.delta))),
                ("value", vf(report.value)?),
                ("target", vf(report.target)?),
                ("h_ceiling", vf(report.h_zero)?),
                ("h_unit", vf(report.h_one)?),
                ("prefactor", vf(report.prefactor)?),
            ]])
        }
    }
}

/// Parses one shared exponent or an exact count of comma-separated ones.
fn parse_gamma_list(s: &str, want: usize) -> Result<Vec<Exponent>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let parsed: Vec<Exponent> = parts
        .iter()
        .map(|p| p.trim().parse::<Exponent>())
        .collect::<Result<_, _>>()
        .map_err(CliError::Core)?;
    if parsed.len() == 1 {
        Ok(vec![parsed[0]; want])
    } else if parsed.len() == want {
        Ok(parsed)
    } else {
        Err(CliError::Core(Error::Domain(format!(
            "need 1 or {want} exponents, got {}",
            parsed.len()
        ))))
    }
}

fn build_tables(
    nmax: u64,
    gammas: &[Exponent],
    budgets: &Budgets,
) -> Result<Vec<PsPrimeTable>, CliError> {
    let limit = nmax.cbrt().max(1);
    let mut distinct: BTreeMap<Exponent, PsPrimeTable> = BTreeMap::new();
    for &g in gammas {
        if !distinct.contains_key(&g) {
            distinct.insert(g, ps_primes_with(limit, g, budgets)?);
        }
    }
    Ok(gammas
        .iter()
        .map(|g| distinct.get(g).expect("just inserted").clone())
        .collect())
}

fn run_reps(cmd: &RepsCmd, budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    let (args, with_weights) = match cmd {
        RepsCmd::Count { args } => (args, false),
        RepsCmd::Weighted { args } => (args, true),
    };
    let gammas = parse_gamma_list(&args.gamma, 9)?;
    let tables = build_tables(args.nmax, &gammas, budgets)?;
    let refs: Vec<&PsPrimeTable> = tables.iter().collect();
    let reps = if with_weights {
        weighted_t(args.nmax, &refs, budgets)?
    } else {
        rep_count(args.nmax, &refs, budgets)?
    };
    let mut records = Vec::with_capacity(reps.counts.len());
    for (n, count) in reps.counts.iter().enumerate() {
        let mut rec: Record = vec![("N", vu64(n as u64)), ("count", vbig(count))];
        if with_weights {
            rec.push(("weighted", vf(reps.weighted[n])?));
        }
        records.push(rec);
    }
    Ok(records)
}

fn run_compare(
    from: u64,
    to: u64,
    gamma: Exponent,
    q: u64,
    budgets: &Budgets,
    format: Format,
) -> Result<Vec<Record>, CliError> {
    let gammas = vec![gamma; 9];
    let report = compare_window(from, to, &gammas, q, budgets)?;
    let mut records = Vec::with_capacity(report.rows.len() + 1);
    for row in &report.rows {
        records.push(vec![
            ("N", vu64(row.n)),
            ("count", vbig(&row.count)),
            ("weighted", vf(row.weighted)?),
            ("mainterm", vf(row.main_term)?),
            ("ratio", vopt(row.ratio)?),
        ]);
    }
    // The summary is a differently shaped record; CSV keeps the table
    // homogeneous and reports the average on the diagnostic stream.
    match format {
        Format::Json => match report.window_ratio {
            Some(r) => records.push(vec![("window_ratio", vf(r)?)]),
            None => records.push(vec![("window_ratio", serde_json::Value::Null)]),
        },
        Format::Csv => match report.window_ratio {
            Some(r) => eprintln!("window ratio over odd targets: {r}"),
            None => eprintln!("window ratio over odd targets: undefined"),
        },
    }
    Ok(records)
}

fn run_identity(cmd: &IdentityCmd, budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    match cmd {
        IdentityCmd::Hb { z, k, n } => {
            let reach = z
                .checked_pow(*k)
                .and_then(|zk| zk.checked_mul(2))
                .ok_or_else(|| CliError::Core(Error::domain("2 z^k overflows")))?;
            let tables = ArithmeticTables::with_budgets(reach, budgets)?;
            let targets: Vec<u64> = match n {
                Some(n) => vec![*n],
                None => (1..=reach).collect(),
            };
            let mut records = Vec::with_capacity(targets.len());
            for t in targets {
                let residual = mangoldt_residual(t, *z, *k, &tables)?;
                records.push(vec![("n", vu64(t)), ("residual", vf(residual)?)]);
            }
            Ok(records)
        }
        IdentityCmd::Psi { h, grid } => {
            if *grid == 0 {
                return Err(CliError::Core(Error::domain("grid must be positive")));
            }
            let mut max_ratio = 0.0f64;
            let mut argmax = 0.0f64;
            for i in 0..*grid {
                let theta = i as f64 / *grid as f64;
                let r = psi_truncation(theta, *h)?;
                if r.ratio > max_ratio {
                    max_ratio = r.ratio;
                    argmax = theta;
                }
            }
            Ok(vec![vec![
                ("H", vu64(*h)),
                ("grid", vu64(*grid)),
                ("max_ratio", vf(max_ratio)?),
                ("argmax", vf(argmax)?),
            ]])
        }
    }
}

#[derive(serde::Deserialize)]
struct TermsSpec {
    #[serde(default)]
    ascending: Vec<(f64, f64)>,
    #[serde(default)]
    descending: Vec<(f64, f64)>,
    q1: f64,
    q2: f64,
}

fn run_srinivasan(terms: &str) -> Result<Vec<Record>, CliError> {
    let spec: TermsSpec = serde_json::from_str(terms)
        .map_err(|e| CliError::Core(Error::Domain(format!("objective JSON did not parse: {e}"))))?;
    let obj = MonomialObjective {
        ascending: spec.ascending,
        descending: spec.descending,
        q1: spec.q1,
        q2: spec.q2,
    };
    let result = srinivasan_min(&obj)?;
    Ok(vec![vec![
        ("minimizer", vf(result.minimizer)?),
        ("minimum", vf(result.minimum)?),
        ("cross_terms", vf(result.cross_terms)?),
        ("factor", vf(result.factor)?),
        ("bound", vf(result.bound)?),
    ]])
}

fn parse_rational_list(s: &str, want: usize) -> Result<Vec<Rational>, CliError> {
    let parts: Vec<Rational> = s
        .split(',')
        .map(|p| parse_rational(p.trim()))
        .collect::<Result<_, _>>()
        .map_err(CliError::Core)?;
    if parts.len() != want {
        return Err(CliError::Core(Error::Domain(format!(
            "need {want} rationals, got {}",
            parts.len()
        ))));
    }
    Ok(parts)
}

fn rational_pair(
    name: &'static str,
    r: &Rational,
) -> Result<[(&'static str, serde_json::Value); 2], CliError> {
    // Pairs "x" (exact) with "x_decimal" (approximate) for readability.
    let decimal_key: &'static str = match name {
        "gamma" => "gamma_decimal",
        "delta" => "delta_decimal",
        "epsilon" => "epsilon_decimal",
        "a" => "a_decimal",
        "b" => "b_decimal",
        "c" => "c_decimal",
        "h0" => "h0_decimal",
        "h1" => "h1_decimal",
        "threshold" => "threshold_decimal",
        "constraint" => "constraint_decimal",
        "m_exp" => "m_exp_decimal",
        "k_exp" => "k_exp_decimal",
        _ => return Err(internal(format!("no decimal key for {name}"))),
    };
    Ok([
        (name, vstr(rational_str(r))),
        (decimal_key, vf(rational_f64(r))?),
    ])
}

fn run_exponents(cmd: &ExponentsCmd, _budgets: &Budgets) -> Result<Vec<Record>, CliError> {
    match cmd {
        ExponentsCmd::Delta { gammas } => {
            let gs = parse_gamma_list(gammas, 9)?;
            let vector = delta_vector(&gs)?;
            let mut records = Vec::with_capacity(9);
            for (i, (g, d)) in vector.gammas.iter().zip(&vector.deltas).enumerate() {
                let mut rec: Record = vec![("i", vu64(i as u64)), ("gamma", vstr(g.to_string()))];
                rec.extend(rational_pair("delta", d)?);
                records.push(rec);
            }
            Ok(records)
        }
        ExponentsCmd::Admissible { gammas } => {
            let gs = parse_gamma_list(gammas, 9)?;
            let vector = delta_vector(&gs)?;
            let constraints = vector.constraints();
            let one = Rational::new(1.into(), 1.into());
            let mut records = Vec::with_capacity(9);
            for (i, (g, c)) in vector.gammas.iter().zip(&constraints).enumerate() {
                let mut rec: Record = vec![("i", vu64(i as u64)), ("gamma", vstr(g.to_string()))];
                rec.extend(rational_pair("constraint", c)?);
                rec.push(("ok", vbool(*c < one)));
                records.push(rec);
            }
            Ok(records)
        }
        ExponentsCmd::Threshold { fixed } => {
            if *fixed > 9 {
                return Err(CliError::Core(Error::domain(
                    "at most nine positions can be fixed",
                )));
            }
            let pattern: Vec<bool> = (0..9).map(|i| i < *fixed).collect();
            let t = threshold(&pattern)?;
            let mut rec: Record = vec![("fixed", vu64(*fixed as u64))];
            rec.extend(rational_pair("threshold", &t)?);
            Ok(vec![rec])
        }
        ExponentsCmd::Budget { gamma, delta, eps } => {
            let g = parse_rational(gamma).map_err(CliError::Core)?;
            let d = parse_rational(delta).map_err(CliError::Core)?;
            let e = parse_rational(eps).map_err(CliError::Core)?;
            let b = budget(&g, &d, &e)?;
            let mut rec: Record = Vec::new();
            rec.extend(rational_pair("gamma", &b.gamma)?);
            rec.extend(rational_pair("delta", &b.delta)?);
            rec.extend(rational_pair("epsilon", &b.epsilon)?);
            rec.extend(rational_pair("a", &b.a_frak)?);
            rec.extend(rational_pair("b", &b.b_frak)?);
            rec.extend(rational_pair("c", &b.c_frak)?);
            rec.extend(rational_pair("h0", &b.h0_exp)?);
            rec.extend(rational_pair("h1", &b.h1_exp)?);
            rec.push(("flag_b_small", vbool(b.flags.b_lt_two_thirds)));
            rec.push(("flag_gap", vbool(b.flags.gap_ok)));
            rec.push(("flag_b_below_a", vbool(b.flags.b_lt_a)));
            rec.push(("flag_admissible", vbool(b.flags.admissible)));
            rec.push(("flags_all", vbool(b.flags.all())));
            Ok(vec![rec])
        }
        ExponentsCmd::Partition {
            evec,
            gamma,
            delta,
            eps,
        } => {
            let entries = parse_rational_list(evec, 6)?;
            let g = parse_rational(gamma).map_err(CliError::Core)?;
            let d = parse_rational(delta).map_err(CliError::Core)?;
            let e = parse_rational(eps).map_err(CliError::Core)?;
            let b = budget(&g, &d, &e)?;
            let part = case_partition(&entries, &b)?;
            let mut rec: Record = vec![
                ("case", vu64(part.case_label as u64)),
                (
                    "kind",
                    vstr(match part.kind {
                        BilinearKind::TypeI => "I",
                        BilinearKind::TypeII => "II",
                    }),
                ),
            ];
            rec.extend(rational_pair("m_exp", &part.m_exp)?);
            rec.extend(rational_pair("k_exp", &part.k_exp)?);
            rec.push((
                "ell",
                match part.ell {
                    Some(l) => vu64(l as u64),
                    None => serde_json::Value::Null,
                },
            ));
            rec.push((
                "order",
                match &part.order {
                    Some(order) => vstr(
                        order
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    ),
                    None => serde_json::Value::Null,
                },
            ));
            Ok(vec![rec])
        }
    }
}
