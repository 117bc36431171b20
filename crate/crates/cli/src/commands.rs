//! Subcommand implementations. Each returns the text to emit.

use anyhow::Context;
use qstatfn::estimation::{run_config, EstimationConfig};
use qstatfn::geo::{
    chernoff, fidelity, geo_mean_trace_bound, geo_mgf, geo_mgf_derivatives, geometric_mean,
    golden_thompson_gap, relative_entropy, relative_entropy_variance, PositiveOperator,
};
use qstatfn::io::{format_number, matrix_to_json, round_output};
use qstatfn::ordering::BoundOrdering;
use qstatfn::quasiprob::{
    bochner_check, kd_distribution, mh_distribution, product_grid, BochnerThresholds,
};
use qstatfn::statfuncs::{bound_expectation, qcf, qcgf, qmgf, qscf, ThetaPath};
use qstatfn::wigner::{reconstruct_state, wigner_function};
use qstatfn::{Error, HermitianOperator, OrderingSpec, Preset, WignerTable, C64};
use serde_json::{json, Value};

use crate::input::{self, Grid};
use crate::{
    Cli, Command, EstimateArgs, Function, GeoArgs, GeoOp, OrderingKind, QuasiprobArgs, StatefnArgs,
    TableKind, WignerArgs,
};

const DEFAULT_THETA_GRID: Grid = Grid {
    lo: -1.0,
    hi: 1.0,
    n: 11,
};
const DEFAULT_BOCHNER_GRID: Grid = Grid {
    lo: -2.0,
    hi: 2.0,
    n: 7,
};
const DEFAULT_CHERNOFF_GRID: Grid = Grid {
    lo: 0.0,
    hi: 1.0,
    n: 11,
};

/// Main output plus an optional trailer printed to stdout after it.
pub struct Output {
    pub primary: String,
    pub secondary: Option<String>,
}

impl Output {
    fn only(primary: String) -> Self {
        Self {
            primary,
            secondary: None,
        }
    }
}

pub fn dispatch(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Statefn(args) => statefn(cli, args).map(Output::only),
        Command::Quasiprob(args) => quasiprob(cli, args),
        Command::Wigner(args) => wigner(cli, args).map(Output::only),
        Command::Geo(args) => geo(cli, args),
        Command::Estimate(args) => estimate(cli, args).map(Output::only),
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_row(values: impl IntoIterator<Item = f64>) -> String {
    let mut row = values
        .into_iter()
        .map(format_number)
        .collect::<Vec<_>>()
        .join(",");
    row.push('\n');
    row
}

fn theta_header(n_vars: usize) -> String {
    if n_vars == 1 {
        "theta".into()
    } else {
        (1..=n_vars)
            .map(|k| format!("theta_{k}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn preset(kind: OrderingKind) -> Preset {
    match kind {
        OrderingKind::Kd => Preset::KirkwoodDirac,
        OrderingKind::Mh => Preset::MargenauHill,
        OrderingKind::Wigner => Preset::Wigner,
    }
}

/// Explicit `--theta` points, else the grid (a product grid for several variables).
fn parameter_points(
    cli: &Cli,
    explicit: &[String],
    n_vars: usize,
    default: Grid,
) -> anyhow::Result<Vec<Vec<f64>>> {
    if !explicit.is_empty() {
        return explicit
            .iter()
            .map(|s| {
                let p = input::parse_point(s)?;
                if p.len() != n_vars {
                    return Err(Error::ArityMismatch {
                        expected: n_vars,
                        found: p.len(),
                    }
                    .into());
                }
                Ok(p)
            })
            .collect();
    }
    let grid = cli.grid.unwrap_or(default);
    Ok(product_grid(&grid.points(), n_vars))
}

fn statefn(cli: &Cli, args: &StatefnArgs) -> anyhow::Result<String> {
    let rho = input::load_state(&args.state, cli.tol)?;
    let obs = args
        .observables
        .iter()
        .map(|p| input::load_hermitian(p, cli.tol))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let multivariable = matches!(args.function, Function::Mqmgf | Function::Mqcf);
    if !multivariable && obs.len() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: obs.len(),
        }
        .into());
    }
    let n_vars = obs.len();
    let points = parameter_points(cli, &args.theta, n_vars, DEFAULT_THETA_GRID)?;
    let mut out = format!("{},re,im\n", theta_header(n_vars));
    let mut emit = |theta: &[f64], v: C64| {
        out.push_str(&csv_row(theta.iter().copied().chain([v.re, v.im])));
    };
    match args.function {
        Function::Qmgf | Function::Qcf | Function::Qcgf => {
            for p in &points {
                let t = p[0];
                let v = match args.function {
                    Function::Qmgf => C64::new(qmgf(&rho, &obs[0], t)?, 0.0),
                    Function::Qcf => qcf(&rho, &obs[0], t)?,
                    _ => C64::new(qcgf(&rho, &obs[0], t)?, 0.0),
                };
                emit(p, v);
            }
        }
        Function::Qscf => {
            let mut ts: Vec<f64> = points.iter().map(|p| p[0]).collect();
            ts.push(0.0);
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let path = ThetaPath::new(ts)?;
            for (t, v) in path.points().iter().zip(qscf(&rho, &obs[0], &path)?) {
                emit(&[*t], v);
            }
        }
        Function::Mqmgf | Function::Mqcf => {
            let spec = OrderingSpec::preset(preset(args.ordering), n_vars)?;
            let bound = BoundOrdering::new(&spec, &obs)?;
            let scale = if args.function == Function::Mqcf {
                C64::new(0.0, 1.0)
            } else {
                C64::new(1.0, 0.0)
            };
            for p in &points {
                emit(p, bound_expectation(&rho, &bound, p, scale)?);
            }
        }
    }
    Ok(out)
}

fn quasiprob(cli: &Cli, args: &QuasiprobArgs) -> anyhow::Result<Output> {
    let rho = input::load_state(&args.state, cli.tol)?;
    let obs = args
        .observables
        .iter()
        .map(|p| input::load_hermitian(p, cli.tol))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let table = match args.kind {
        TableKind::Kd => kd_distribution(&rho, &obs, args.cluster_tol)?,
        TableKind::Mh => mh_distribution(&rho, &obs, args.cluster_tol)?,
    };
    let mut out = Output::only(table.to_csv());
    if args.bochner {
        let kind = match args.kind {
            TableKind::Kd => Preset::KirkwoodDirac,
            TableKind::Mh => Preset::MargenauHill,
        };
        // The table puts the first-measured observable next to the state,
        // which is the last factor of the ordered product.
        let reversed: Vec<HermitianOperator> = obs.iter().rev().cloned().collect();
        let spec = OrderingSpec::preset(kind, obs.len())?;
        let bound = BoundOrdering::new(&spec, &reversed)?;
        let axis = cli.grid.unwrap_or(DEFAULT_BOCHNER_GRID).points();
        let grid = product_grid(&axis, obs.len());
        let report = bochner_check(
            |t| {
                let rev: Vec<f64> = t.iter().rev().copied().collect();
                bound_expectation(&rho, &bound, &rev, C64::new(0.0, 1.0))
            },
            &grid,
            BochnerThresholds::default(),
        )?;
        let v = json!({
            "verdict": report.verdict.as_str(),
            "hermitian_symmetry_violation": round_output(report.hermitian_symmetry_violation),
            "min_gram_eigenvalue": round_output(report.min_gram_eigenvalue),
            "grid_points": report.grid.len(),
        });
        match &args.report {
            Some(path) => input::write_file(path, &json_line(&v))?,
            None => out.secondary = Some(json_line(&v)),
        }
    }
    Ok(out)
}

fn wigner(cli: &Cli, args: &WignerArgs) -> anyhow::Result<String> {
    if let Some(path) = &args.state {
        let rho = input::load_state(path, cli.tol)?;
        return Ok(wigner_function(&rho)?.to_csv());
    }
    let path = args.reconstruct.as_ref().expect("clap enforces one input");
    let table = WignerTable::from_csv(&input::read_file(path)?)
        .with_context(|| format!("{}", path.display()))?;
    let mut s = matrix_to_json(reconstruct_state(&table)?.matrix());
    s.push('\n');
    Ok(s)
}

fn geo(cli: &Cli, args: &GeoArgs) -> anyhow::Result<Output> {
    let out = match args.op {
        GeoOp::Mean => {
            let a = PositiveOperator::new(input::load_hermitian(&args.a, cli.tol)?)?;
            let b = PositiveOperator::new(input::load_hermitian(&args.b, cli.tol)?)?;
            let mut s = matrix_to_json(geometric_mean(&a, &b, args.weight)?.matrix());
            s.push('\n');
            Output::only(s)
        }
        GeoOp::Fidelity => {
            let rho = input::load_state(&args.a, cli.tol)?;
            let sigma = input::load_state(&args.b, cli.tol)?;
            let fid = fidelity(&rho, &sigma)?;
            let tr_geo = match geo_mean_trace_bound(&rho, &sigma) {
                Ok(b) => json!(round_output(b.tr_geo)),
                Err(Error::NotPositiveDefinite { .. }) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Output::only(json_line(
                &json!({"fidelity": round_output(fid), "tr_geo": tr_geo}),
            ))
        }
        GeoOp::Chernoff => {
            let rho = input::load_state(&args.a, cli.tol)?;
            let sigma = input::load_state(&args.b, cli.tol)?;
            let mut s = String::from("theta,psi\n");
            for t in cli.grid.unwrap_or(DEFAULT_CHERNOFF_GRID).points() {
                s.push_str(&csv_row([t, chernoff(&rho, &sigma, t)?]));
            }
            Output::only(s)
        }
        GeoOp::Relent => {
            let rho = input::load_state(&args.a, cli.tol)?;
            let sigma = input::load_state(&args.b, cli.tol)?;
            Output::only(json_line(&json!({
                "relative_entropy": round_output(relative_entropy(&rho, &sigma)?),
                "variance": round_output(relative_entropy_variance(&rho, &sigma)?),
            })))
        }
        GeoOp::Gt => {
            let a = input::load_hermitian(&args.a, cli.tol)?;
            let b = input::load_hermitian(&args.b, cli.tol)?;
            let gt = golden_thompson_gap(&a, &b)?;
            Output::only(json_line(
                &json!({"lhs": round_output(gt.lhs), "rhs": round_output(gt.rhs)}),
            ))
        }
        GeoOp::Geomgf => {
            let rho = input::load_state(&args.a, cli.tol)?;
            let v = input::load_hermitian(&args.b, cli.tol)?;
            let mut s = String::from("theta,value\n");
            for t in cli.grid.unwrap_or(DEFAULT_THETA_GRID).points() {
                s.push_str(&csv_row([t, geo_mgf(&rho, &v, t)?]));
            }
            let d = geo_mgf_derivatives(&rho, &v)?;
            Output {
                primary: s,
                secondary: Some(json_line(&json!({
                    "first": round_output(d.first),
                    "second": round_output(d.second),
                }))),
            }
        }
    };
    Ok(out)
}

fn estimate(cli: &Cli, args: &EstimateArgs) -> anyhow::Result<String> {
    let text = input::read_file(&args.config)?;
    let mut config =
        EstimationConfig::from_json(&text).with_context(|| format!("{}", args.config.display()))?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let report = run_config(&config)?;
    let mut s = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
    s.push('\n');
    Ok(s)
}
