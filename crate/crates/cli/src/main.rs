//! Command-line front end: exact thresholds, formula-level statistics,
//! exact series, Monte Carlo runs and reference-table reproduction.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;

use stoprule::{
    asymptotic_stats, asymptotic_value, exact_stats, simulate, value_at_checkpoints,
    value_sequence, DistributionSpec, Error, SimulationConfig,
};

#[derive(Parser)]
#[command(
    name = "stoprule",
    version,
    about = "Exact and asymptotic statistics of optimal stopping times for full-information sequential selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact thresholds v_n next to their large-n approximation
    Values {
        /// Distribution spec string, e.g. `exponential:beta=1`
        #[arg(long)]
        dist: String,
        /// Emit rows for every n up to this horizon
        #[arg(long = "N")]
        n: Option<u64>,
        /// Emit rows only at these n (streaming; no dense storage cap)
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Formula-level stopping statistics from the tail class alone
    Asymptotics {
        #[arg(long)]
        dist: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Exact series statistics merged with the asymptotic formulas
    Stats {
        #[arg(long)]
        dist: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Seeded Monte Carlo estimate of the stopping-time statistics
    Simulate {
        #[arg(long)]
        dist: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        replicas: u64,
        /// Defaults to STOPRULE_SEED from the environment, then 0
        #[arg(long)]
        seed: Option<u64>,
        /// Defaults to the number of available CPUs
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Recompute a built-in reference table (1-4) at a configurable horizon
    Reproduce {
        /// 1: unbounded-support v_n rows; 2: unbounded-support statistics;
        /// 3: bounded-support v_n rows; 4: bounded-support statistics
        #[arg(long)]
        table: u8,
        /// Horizon (and n for the v_n tables); default 2^14
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Numeric { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

// CSV floats carry 12 significant digits.
fn csv_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

// JSON has no NaN/inf; map non-finite values to null.
fn json_f(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn params_json(spec: &DistributionSpec) -> Value {
    Value::Object(
        spec.params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), json_f(v)))
            .collect(),
    )
}

fn params_compact(spec: &DistributionSpec) -> String {
    spec.params()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Values {
            dist,
            n,
            checkpoints,
            format,
        } => cmd_values(&dist, n, &checkpoints, format),
        Command::Asymptotics { dist, n, format } => cmd_asymptotics(&dist, n, format),
        Command::Stats { dist, n, format } => cmd_stats(&dist, n, format),
        Command::Simulate {
            dist,
            n,
            replicas,
            seed,
            workers,
            format,
        } => cmd_simulate(&dist, n, replicas, seed, workers, format),
        Command::Reproduce { table, n, format } => cmd_reproduce(table, n, format),
    }
}

fn cmd_values(
    dist: &str,
    n: Option<u64>,
    checkpoints: &[u64],
    format: OutputFormat,
) -> Result<(), Error> {
    let spec: DistributionSpec = dist.parse()?;
    let rows: Vec<(u64, f64)> = if !checkpoints.is_empty() {
        value_at_checkpoints(&spec, checkpoints)?
    } else {
        let horizon = n.ok_or_else(|| Error::Usage("pass --N or --checkpoints".into()))? as usize;
        let vs = value_sequence(&spec, horizon)?;
        vs.values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, v))
            .collect()
    };

    match format {
        OutputFormat::Csv => {
            println!("n,v_n,v_asymptotic,ratio");
            for (idx, v) in rows {
                let approx = asymptotic_value(&spec, idx);
                println!("{idx},{},{},{}", csv_f(v), csv_f(approx), csv_f(v / approx));
            }
        }
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|&(idx, v)| {
                    let approx = asymptotic_value(&spec, idx);
                    json!({
                        "n": idx,
                        "v_n": json_f(v),
                        "v_asymptotic": json_f(approx),
                        "ratio": json_f(v / approx),
                    })
                })
                .collect();
            println!("{}", Value::Array(items));
        }
    }
    Ok(())
}

fn cmd_asymptotics(dist: &str, n: u64, format: OutputFormat) -> Result<(), Error> {
    let spec: DistributionSpec = dist.parse()?;
    let stats = asymptotic_stats(&spec, n);
    match format {
        OutputFormat::Json => {
            let out = json!({
                "family": spec.family_name(),
                "params": params_json(&spec),
                "lambda": json_f(stats.lambda),
                "E_formula_value": json_f(stats.expectation),
                "Var_formula_value": json_f(stats.variance),
            });
            println!("{out}");
        }
        OutputFormat::Csv => {
            println!("family,params,lambda,E_formula_value,Var_formula_value");
            println!(
                "{},{},{},{},{}",
                spec.family_name(),
                params_compact(&spec),
                csv_f(stats.lambda),
                csv_f(stats.expectation),
                csv_f(stats.variance)
            );
        }
    }
    Ok(())
}

fn cmd_stats(dist: &str, n: u64, format: OutputFormat) -> Result<(), Error> {
    let spec: DistributionSpec = dist.parse()?;
    let exact = exact_stats(&spec, n)?;
    let asym = asymptotic_stats(&spec, n);
    let relerr_e = (exact.expectation / asym.expectation - 1.0).abs();
    let relerr_var = (exact.variance / asym.variance - 1.0).abs();
    match format {
        OutputFormat::Csv => {
            println!("N,E_exact,E_asym,Var_exact,Var_asym,relerr_E,relerr_Var");
            println!(
                "{n},{},{},{},{},{},{}",
                csv_f(exact.expectation),
                csv_f(asym.expectation),
                csv_f(exact.variance),
                csv_f(asym.variance),
                csv_f(relerr_e),
                csv_f(relerr_var)
            );
        }
        OutputFormat::Json => {
            let out = json!({
                "N": n,
                "E_exact": json_f(exact.expectation),
                "E_asym": json_f(asym.expectation),
                "Var_exact": json_f(exact.variance),
                "Var_asym": json_f(asym.variance),
                "relerr_E": json_f(relerr_e),
                "relerr_Var": json_f(relerr_var),
            });
            println!("{out}");
        }
    }
    Ok(())
}

fn cmd_simulate(
    dist: &str,
    n: usize,
    replicas: u64,
    seed: Option<u64>,
    workers: Option<usize>,
    format: OutputFormat,
) -> Result<(), Error> {
    let spec: DistributionSpec = dist.parse()?;
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("STOPRULE_SEED") {
            Ok(raw) => raw
                .parse()
                .map_err(|_| Error::Parse(format!("STOPRULE_SEED=`{raw}` is not a u64")))?,
            Err(_) => 0,
        },
    };
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|x| x.get())
            .unwrap_or(1)
    });
    let estimate = simulate(&SimulationConfig {
        spec,
        horizon: n,
        replicas,
        seed,
        workers,
    })?;
    match format {
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string(&estimate).expect("estimate serializes")
            );
        }
        OutputFormat::Csv => {
            println!("mean_tau,var_tau,stderr_mean,stderr_var,replicas,seed");
            println!(
                "{},{},{},{},{},{}",
                csv_f(estimate.mean_tau),
                csv_f(estimate.var_tau),
                csv_f(estimate.stderr_mean),
                csv_f(estimate.stderr_var),
                estimate.replicas,
                estimate.seed
            );
        }
    }
    Ok(())
}

fn unbounded_rows() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::exponential(1.0).expect("valid"),
        DistributionSpec::normal(0.0, 1.0).expect("valid"),
        DistributionSpec::gamma(2.0, 1.0).expect("valid"),
        DistributionSpec::weibull(1.0, 2.0).expect("valid"),
        DistributionSpec::pareto(1.0, 2.0).expect("valid"),
    ]
}

fn bounded_rows() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::uniform(0.0, 1.0).expect("valid"),
        DistributionSpec::triangular(0.0, 0.5, 1.0).expect("valid"),
        DistributionSpec::wigner(1.0).expect("valid"),
        DistributionSpec::beta(2.0, 1.0).expect("valid"),
    ]
}

fn cmd_reproduce(table: u8, n: Option<u64>, format: OutputFormat) -> Result<(), Error> {
    let n = n.unwrap_or(1 << 14);
    let (rows, values_table) = match table {
        1 => (unbounded_rows(), true),
        2 => (unbounded_rows(), false),
        3 => (bounded_rows(), true),
        4 => (bounded_rows(), false),
        other => {
            return Err(Error::Usage(format!(
                "unknown table id {other}; expected 1, 2, 3 or 4"
            )))
        }
    };

    if values_table {
        let mut out: Vec<(DistributionSpec, f64, f64)> = Vec::new();
        for spec in rows {
            let exact = value_at_checkpoints(&spec, &[n])?[0].1;
            let formula = asymptotic_value(&spec, n);
            out.push((spec, formula, exact));
        }
        match format {
            OutputFormat::Csv => {
                println!("family,params,n,v_formula,v_exact,rel_deviation");
                for (spec, formula, exact) in out {
                    println!(
                        "{},{},{n},{},{},{}",
                        spec.family_name(),
                        params_compact(&spec),
                        csv_f(formula),
                        csv_f(exact),
                        csv_f((exact / formula - 1.0).abs())
                    );
                }
            }
            OutputFormat::Json => {
                let items: Vec<Value> = out
                    .iter()
                    .map(|(spec, formula, exact)| {
                        json!({
                            "family": spec.family_name(),
                            "params": params_json(spec),
                            "n": n,
                            "v_formula": json_f(*formula),
                            "v_exact": json_f(*exact),
                            "rel_deviation": json_f((exact / formula - 1.0).abs()),
                        })
                    })
                    .collect();
                println!("{}", Value::Array(items));
            }
        }
    } else {
        struct StatRow {
            spec: DistributionSpec,
            lambda: f64,
            e_formula: f64,
            e_exact: f64,
            var_formula: f64,
            var_exact: f64,
        }
        let mut out = Vec::new();
        for spec in rows {
            let asym = asymptotic_stats(&spec, n);
            let exact = exact_stats(&spec, n)?;
            out.push(StatRow {
                spec,
                lambda: asym.lambda,
                e_formula: asym.expectation,
                e_exact: exact.expectation,
                var_formula: asym.variance,
                var_exact: exact.variance,
            });
        }
        match format {
            OutputFormat::Csv => {
                println!(
                    "family,params,lambda,E_formula,E_exact,relerr_E,Var_formula,Var_exact,relerr_Var"
                );
                for r in out {
                    println!(
                        "{},{},{},{},{},{},{},{},{}",
                        r.spec.family_name(),
                        params_compact(&r.spec),
                        csv_f(r.lambda),
                        csv_f(r.e_formula),
                        csv_f(r.e_exact),
                        csv_f((r.e_exact / r.e_formula - 1.0).abs()),
                        csv_f(r.var_formula),
                        csv_f(r.var_exact),
                        csv_f((r.var_exact / r.var_formula - 1.0).abs())
                    );
                }
            }
            OutputFormat::Json => {
                let items: Vec<Value> = out
                    .iter()
                    .map(|r| {
                        json!({
                            "family": r.spec.family_name(),
                            "params": params_json(&r.spec),
                            "lambda": json_f(r.lambda),
                            "E_formula": json_f(r.e_formula),
                            "E_exact": json_f(r.e_exact),
                            "relerr_E": json_f((r.e_exact / r.e_formula - 1.0).abs()),
                            "Var_formula": json_f(r.var_formula),
                            "Var_exact": json_f(r.var_exact),
                            "relerr_Var": json_f((r.var_exact / r.var_formula - 1.0).abs()),
                        })
                    })
                    .collect();
                println!("{}", Value::Array(items));
            }
        }
    }
    Ok(())
}
