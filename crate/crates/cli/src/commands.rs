use fvpg::analysis::{
    convergence_study_with_order, error_norms, infsup_sweep, loglog_slope, ConvergenceTable, SchemeChoice,
    DEFAULT_ERROR_ORDER,
};
use fvpg::solver::DiscreteSolution;
use fvpg::weighting::{WeightingFunction, INTERP_SAMPLES};
use serde_json::json;

use crate::args::{Condition, ConvergeArgs, InfSupArgs, PsiCheckArgs, SchemeName, SolveArgs};
use crate::config::{self, check_ns, MeshConfig, RunConfig, MAX_INFSUP_N, MAX_SOLVE_N};
use crate::error::CliError;
use crate::output::{gnuplot_script, num, Csv, Metadata, Quadrature, Sink};

/// Errors below this are treated as exact, and their fitted order is not asserted.
pub const MACHINE_LEVEL: f64 = 1e-10;

const EXACT_MOMENTS: &str = "exact polynomial algebra";

fn moments_note(psi: &WeightingFunction) -> &'static str {
    if psi.as_polynomial().is_some() {
        EXACT_MOMENTS
    } else {
        "gauss-legendre order 16"
    }
}

fn metadata<C: serde::Serialize>(
    subcommand: &'static str,
    config: C,
    mesh: Option<&MeshConfig>,
    quadrature: Quadrature,
    results: serde_json::Value,
) -> Metadata<C> {
    Metadata {
        tool: "fvpg",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config,
        seed: mesh.and_then(|m| m.seed),
        mesh_sampler: mesh.and_then(MeshConfig::sampler),
        quadrature,
        results,
    }
}

pub fn psi_check(args: &PsiCheckArgs, sink: &mut Sink) -> Result<String, CliError> {
    let (psi, coeffs) = config::weighting(&args.psi)?;
    let report = psi.conditions();
    let k = psi.default_moments().stability_constants();

    let mut csv = Csv::new(&["quantity", "value"]);
    let flags = [
        (Condition::Localization, "localization", report.localization),
        (Condition::Orthogonality, "orthogonality", report.orthogonality),
        (Condition::FvCompat, "fv_compat", report.fv_compat),
        (Condition::InterpCompat, "interp_compat", report.interp_compat),
    ];
    for (_, name, ok) in &flags {
        csv.row([name.to_string(), ok.to_string()]);
    }
    for (name, v) in [("delta", k.delta), ("delta_tilde", k.delta_tilde), ("epsilon", k.epsilon), ("K", k.k)]
    {
        csv.row([name.to_string(), num(v)]);
    }
    sink.write(&format!("{}.csv", args.stem), csv.as_str())?;

    let required: Vec<Condition> =
        if args.require.is_empty() { flags.iter().map(|f| f.0).collect() } else { args.require.clone() };
    let failed: Vec<&str> =
        flags.iter().filter(|(c, _, ok)| required.contains(c) && !ok).map(|(_, name, _)| *name).collect();

    let cfg = RunConfig {
        subcommand: "psi-check",
        psi: psi.name().to_string(),
        psi_coeffs: coeffs,
        scheme: None,
        problem: None,
        mesh: None,
        ns: vec![],
    };
    let results = json!({
        "localization": report.localization,
        "orthogonality": report.orthogonality,
        "fv_compat": report.fv_compat,
        "interp_compat": report.interp_compat,
        "condition_tolerance": report.tolerance,
        "interp_samples": INTERP_SAMPLES,
        "delta": k.delta, "delta_tilde": k.delta_tilde, "epsilon": k.epsilon, "K": k.k,
        "required": required,
        "failed": failed,
    });
    let quad = Quadrature { rhs_order: None, error_order: None, moments: moments_note(&psi) };
    sink.sidecar(&args.stem, &metadata("psi-check", cfg, None, quad, results))?;

    let out = csv.as_str().to_string();
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Assertion(format!("{} does not satisfy: {}", psi.name(), failed.join(", "))))
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn solution_tables(sol: &DiscreteSolution) -> (Csv, Csv) {
    let mut cells = Csv::new(&["x_left", "x_right", "u_cell"]);
    for ((a, b), u) in sol.mesh.cells().zip(&sol.u_cells) {
        cells.row([num(a), num(b), num(*u)]);
    }
    let mut nodes = Csv::new(&["x_node", "p_node"]);
    for (x, p) in sol.mesh.vertices().iter().zip(&sol.p_nodes) {
        nodes.row([num(*x), num(*p)]);
    }
    (cells, nodes)
}

pub fn solve(args: &SolveArgs, sink: &mut Sink) -> Result<String, CliError> {
    check_ns(&[args.n], 1, MAX_SOLVE_N)?;
    let (psi, coeffs) = config::weighting(&args.psi)?;
    let problem = config::problem(&args.problem)?;
    let mesh_cfg = MeshConfig::from_args(&args.mesh)?;
    let mesh = mesh_cfg.build(args.n)?;
    let scheme = config::scheme(args.scheme, &psi);
    let sol = scheme.solve_with_order(&mesh, &problem, args.quad_order)?;
    let err = error_norms(&sol, &problem, DEFAULT_ERROR_ORDER)?;

    let (cells, nodes) = solution_tables(&sol);
    sink.write(&format!("{}-cells.csv", args.stem), cells.as_str())?;
    sink.write(&format!("{}-nodes.csv", args.stem), nodes.as_str())?;

    let mut summary = format!(
        "scheme {} on {} ({} cells), problem {}\nerr_u_l2 {}\nerr_p_l2 {}\nerr_p_h1 {}\n",
        sol.scheme,
        mesh_cfg.label(args.n),
        args.n,
        problem.name,
        num(err.err_u_l2),
        num(err.err_p_l2),
        num(err.err_p_h1)
    );
    let mut results = json!({
        "scheme": sol.scheme.to_string(),
        "h_max": mesh.h_max(),
        "err_u_l2": err.err_u_l2,
        "err_p_l2": err.err_p_l2,
        "err_p_h1": err.err_p_h1,
    });

    let mut mismatch = None;
    if args.compare {
        // PG/mixed against FV, or FV against PG with the given ψ.
        let other = match args.scheme {
            SchemeName::Fv => SchemeChoice::PetrovGalerkin(psi.clone()),
            _ => SchemeChoice::Fv,
        };
        let ref_sol = other.solve_with_order(&mesh, &problem, args.quad_order)?;
        let du = max_diff(&sol.u_cells, &ref_sol.u_cells);
        let dp = max_diff(&sol.p_nodes, &ref_sol.p_nodes);
        summary += &format!(
            "compare {} vs {}: max|du| {}, max|dp| {} (tol {})\n",
            sol.scheme,
            ref_sol.scheme,
            num(du),
            num(dp),
            num(args.compare_tol)
        );
        results["compare"] = json!({
            "against": ref_sol.scheme.to_string(),
            "max_abs_du": du,
            "max_abs_dp": dp,
            "tolerance": args.compare_tol,
        });
        if du.max(dp) > args.compare_tol || du.is_nan() || dp.is_nan() {
            mismatch = Some(format!("{} and {} differ by {:e}", sol.scheme, ref_sol.scheme, du.max(dp)));
        }
    }

    let cfg = RunConfig {
        subcommand: "solve",
        psi: psi.name().to_string(),
        psi_coeffs: coeffs,
        scheme: Some(args.scheme),
        problem: Some(problem.name.clone()),
        mesh: Some(mesh_cfg.clone()),
        ns: vec![args.n],
    };
    let quad = Quadrature {
        rhs_order: Some(args.quad_order),
        error_order: Some(DEFAULT_ERROR_ORDER),
        moments: moments_note(&psi),
    };
    sink.sidecar(&args.stem, &metadata("solve", cfg, Some(&mesh_cfg), quad, results))?;

    match mismatch {
        None => Ok(summary),
        Some(msg) => {
            print!("{summary}");
            Err(CliError::Assertion(msg))
        }
    }
}

fn convergence_csv(table: &ConvergenceTable, slopes: [f64; 3]) -> Csv {
    let mut csv = Csv::new(&["n", "h_max", "err_u_l2", "err_p_l2", "err_p_h1"]);
    for r in &table.rows {
        csv.row([r.n.to_string(), num(r.h_max), num(r.err_u_l2), num(r.err_p_l2), num(r.err_p_h1)]);
    }
    csv.row(["slope".to_string(), String::new(), num(slopes[0]), num(slopes[1]), num(slopes[2])]);
    csv
}

pub fn converge(args: &ConvergeArgs, sink: &mut Sink) -> Result<String, CliError> {
    check_ns(&args.ns, 3, MAX_SOLVE_N)?;
    let (psi, coeffs) = config::weighting(&args.psi)?;
    let problem = config::problem(&args.problem)?;
    let mesh_cfg = MeshConfig::from_args(&args.mesh)?;
    let meshes = args.ns.iter().map(|&n| mesh_cfg.build(n)).collect::<Result<Vec<_>, _>>()?;
    let table =
        convergence_study_with_order(&meshes, &config::scheme(args.scheme, &psi), &problem, args.quad_order)?;
    let s = table.fit_rate()?;
    let slopes = [s.err_u_l2, s.err_p_l2, s.err_p_h1];
    let csv = convergence_csv(&table, slopes);
    let csv_name = format!("{}.csv", args.stem);
    sink.write(&csv_name, csv.as_str())?;
    if args.gnuplot {
        let title = format!("{} / {} / {}", args.stem, problem.name, psi.name());
        let gp = gnuplot_script(&csv_name, &title, 2, "h_max", &[3, 4, 5], "error");
        sink.write(&format!("{}.gp", args.stem), &gp)?;
    }

    let names = ["err_u_l2", "err_p_l2", "err_p_h1"];
    let mut failures = Vec::new();
    if let Some(floor) = args.assert_rate {
        for (i, name) in names.iter().enumerate() {
            let worst =
                table.rows.iter().map(|r| [r.err_u_l2, r.err_p_l2, r.err_p_h1][i]).fold(0.0, f64::max);
            let exact = worst <= MACHINE_LEVEL;
            if !exact && (slopes[i].is_nan() || slopes[i] < floor) {
                failures.push(format!("{name} order {:.4} < {floor}", slopes[i]));
            }
        }
    }

    let cfg = RunConfig {
        subcommand: "converge",
        psi: psi.name().to_string(),
        psi_coeffs: coeffs,
        scheme: Some(args.scheme),
        problem: Some(problem.name.clone()),
        mesh: Some(mesh_cfg.clone()),
        ns: args.ns.clone(),
    };
    let results = json!({
        "slopes": {
            "err_u_l2": s.err_u_l2, "err_p_l2": s.err_p_l2, "err_p_h1": s.err_p_h1,
            "energy": s.energy, "l2_pair": s.l2_pair,
        },
        "assert_rate": args.assert_rate,
        "machine_level": MACHINE_LEVEL,
        "failures": failures,
    });
    let quad = Quadrature {
        rhs_order: Some(args.quad_order),
        error_order: Some(DEFAULT_ERROR_ORDER),
        moments: moments_note(&psi),
    };
    sink.sidecar(&args.stem, &metadata("converge", cfg, Some(&mesh_cfg), quad, results))?;

    let out = csv.as_str().to_string();
    if failures.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Assertion(failures.join("; ")))
    }
}

pub fn infsup(args: &InfSupArgs, sink: &mut Sink) -> Result<String, CliError> {
    check_ns(&args.ns, 2, MAX_INFSUP_N)?;
    let (psi, coeffs) = config::weighting(&args.psi)?;
    let mesh_cfg = MeshConfig::from_args(&args.mesh)?;
    let meshes = args
        .ns
        .iter()
        .map(|&n| Ok((mesh_cfg.label(n), mesh_cfg.build(n)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let reports = infsup_sweep(&meshes, &psi)?;

    let ns: Vec<f64> = reports.iter().map(|r| r.n as f64).collect();
    let deltas: Vec<f64> = reports.iter().map(|r| r.delta_t).collect();
    let first = deltas[0];
    let last = deltas[deltas.len() - 1];
    let ratio = last / first;
    let slope = loglog_slope(&ns, &deltas)?;
    let min = deltas.iter().copied().fold(f64::INFINITY, f64::min);

    let mut csv = Csv::new(&["n", "delta_T"]);
    for r in &reports {
        csv.row([r.n.to_string(), num(r.delta_t)]);
    }
    csv.row(["ratio".to_string(), num(ratio)]);
    csv.row(["slope".to_string(), num(slope)]);
    let csv_name = format!("{}.csv", args.stem);
    sink.write(&csv_name, csv.as_str())?;
    if args.gnuplot {
        let title = format!("discrete inf-sup constant, {}", psi.name());
        let gp = gnuplot_script(&csv_name, &title, 1, "n", &[2], "delta_T");
        sink.write(&format!("{}.gp", args.stem), &gp)?;
    }

    let failure = if args.assert_stable && (min.is_nan() || min < 0.5 * first) {
        Some(format!("min delta_T {min:e} below half of delta_T(n={}) = {first:e}", reports[0].n))
    } else if args.assert_unstable && (ratio.is_nan() || ratio >= 0.5) {
        Some(format!("delta_T ratio {ratio:e} is not below 0.5"))
    } else {
        None
    };

    let cfg = RunConfig {
        subcommand: "infsup",
        psi: psi.name().to_string(),
        psi_coeffs: coeffs,
        scheme: None,
        problem: None,
        mesh: Some(mesh_cfg.clone()),
        ns: args.ns.clone(),
    };
    let results = json!({
        "delta_t": deltas,
        "ratio": ratio,
        "slope": slope,
        "min": min,
        "assert_stable": args.assert_stable,
        "assert_unstable": args.assert_unstable,
        "failure": failure,
    });
    let quad = Quadrature { rhs_order: None, error_order: None, moments: moments_note(&psi) };
    sink.sidecar(&args.stem, &metadata("infsup", cfg, Some(&mesh_cfg), quad, results))?;

    let out = csv.as_str().to_string();
    match failure {
        None => Ok(out),
        Some(msg) => {
            print!("{out}");
            Err(CliError::Assertion(msg))
        }
    }
}
