//! Command implementations over the core engine.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use fidgeo::classify::{fd_existence_verdict, Tolerances};
use fidgeo::coverage::one_sided_coverage;
use fidgeo::export::{csv_number, write_table};
use fidgeo::families::ParametricFamily;
use fidgeo::fiducial::{
    composite_distribution_of_phi, composite_envelope, composite_reduce_with,
    confidence_limit_set, even_odd_decompose, extract_fd, jordan_decompose, ConfidenceLimitSet,
    SignedFiducialMeasure,
};
use fidgeo::multiobs::{combine, combined_quantile};
use fidgeo::real::linspace;
use fidgeo::spec::FamilySpec;
use fidgeo::surface::{FiducialSurface, Grid};
use fidgeo::{Family64, Surface64};

use crate::{Cli, Cmd};

pub fn run(cli: Cli) -> Result<ExitCode> {
    fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    let tol = Tolerances {
        eps_mono: cli.tol_mono,
        eps_plateau: cli.tol_plateau,
        delta_complete: cli.tol_complete,
    };
    match &cli.cmd {
        Cmd::Analyze => cmd_analyze(&cli, &tol),
        Cmd::Fd { x0 } => cmd_fd(&cli, &tol, *x0),
        Cmd::Limits { x0, beta } => cmd_limits(&cli, &tol, *x0, *beta),
        Cmd::Combine { obs } => cmd_combine(&cli, obs),
        Cmd::Composite { y } => cmd_composite(&cli, &tol, *y),
        Cmd::Figure { id } => crate::figures::cmd_figure(&cli.out, id),
        Cmd::Coverage { beta, trials, true_phi } => {
            cmd_coverage(&cli, *beta, *trials, *true_phi)
        }
    }
}

fn load_spec(cli: &Cli) -> Result<FamilySpec> {
    let path = cli
        .family
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs --family <spec.json>"))?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading family spec {}", path.display()))?;
    FamilySpec::from_json(&text)
        .with_context(|| format!("parsing family spec {}", path.display()))
}

fn build_family(cli: &Cli) -> Result<Family64> {
    Ok(load_spec(cli)?.build::<f64>()?)
}

fn build_grid(cli: &Cli, family: &Family64) -> Result<Grid<f64>> {
    if cli.grid == "auto" {
        if cli.nodes < 3 {
            bail!("--nodes must be at least 3");
        }
        return Ok(Grid::auto(family, cli.nodes));
    }
    let mut x = None;
    let mut theta = None;
    for part in cli.grid.split(',') {
        let (axis, rest) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("grid part {part:?} is not axis=min:max:n"))?;
        let fields: Vec<&str> = rest.split(':').collect();
        if fields.len() != 3 {
            bail!("grid part {part:?} must be axis=min:max:n");
        }
        let lo: f64 = fields[0].parse().context("grid min")?;
        let hi: f64 = fields[1].parse().context("grid max")?;
        let n: usize = fields[2].parse().context("grid node count")?;
        match axis {
            "x" => x = Some((lo, hi, n)),
            "theta" => theta = Some((lo, hi, n)),
            other => bail!("unknown grid axis {other:?}"),
        }
    }
    let (xl, xh, xn) = x.ok_or_else(|| anyhow!("grid spec misses x=min:max:n"))?;
    let (tl, th, tn) = theta.ok_or_else(|| anyhow!("grid spec misses theta=min:max:n"))?;
    Ok(Grid::uniform(xl, xh, xn, tl, th, tn)?)
}

fn build_surface(cli: &Cli, tol: &Tolerances<f64>) -> Result<Surface64> {
    let _ = tol;
    let family = build_family(cli)?;
    let grid = build_grid(cli, &family)?;
    Ok(FiducialSurface::build(family, grid)?)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn cmd_analyze(cli: &Cli, tol: &Tolerances<f64>) -> Result<ExitCode> {
    let surface = build_surface(cli, tol)?;
    let verdict = fd_existence_verdict(&surface, tol)?;
    let body = serde_json::to_vec_pretty(&verdict)?;
    let path = write_file(&cli.out, "verdict.json", &body)?;
    println!(
        "fd_exists={} non_intersecting={} complete={} -> {}",
        verdict.fd_exists,
        verdict.non_intersecting,
        verdict.complete,
        path.display()
    );
    Ok(if verdict.fd_exists {
        ExitCode::from(0)
    } else {
        ExitCode::from(2)
    })
}

fn cmd_fd(cli: &Cli, tol: &Tolerances<f64>, x0: f64) -> Result<ExitCode> {
    let surface = build_surface(cli, tol)?;
    let fd = extract_fd(&surface, x0, tol)?;
    let mut buf = Vec::new();
    write_table(&mut buf, &["theta", "cdf"], &[fd.theta_nodes(), fd.cdf_values()])?;
    let path = write_file(&cli.out, "fd.csv", &buf)?;
    println!("fd at x0={x0} ({:?}) -> {}", fd.direction(), path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_limits(cli: &Cli, tol: &Tolerances<f64>, x0: f64, beta: f64) -> Result<ExitCode> {
    let surface = build_surface(cli, tol)?;
    let set = confidence_limit_set(&surface, x0, beta, tol)?;
    let mut buf = Vec::new();
    buf.extend_from_slice(b"beta,case_kind,index,theta\n");
    let case = set.case_name();
    for (k, theta) in set.thetas().iter().enumerate() {
        writeln!(
            &mut buf,
            "{},{case},{k},{}",
            csv_number(beta),
            csv_number(*theta)
        )?;
    }
    let path = write_file(&cli.out, "limits.csv", &buf)?;
    match &set {
        ConfidenceLimitSet::Unique { theta, .. } => println!("unique limit {theta}"),
        ConfidenceLimitSet::Interval { lo, hi, .. } => println!("limit interval [{lo}, {hi}]"),
        ConfidenceLimitSet::Multiple { thetas, .. } => {
            println!("{} limits {thetas:?}", thetas.len())
        }
    }
    println!("-> {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_combine(cli: &Cli, obs: &[f64]) -> Result<ExitCode> {
    let family = build_family(cli)?;
    let theta_nodes = if cli.grid == "auto" {
        let w = family.theta_window();
        linspace(w.lo, w.hi, cli.nodes.max(3))
    } else {
        build_grid(cli, &family)?.theta().to_vec()
    };
    let combined = combine(&family, obs, &theta_nodes)?;
    let cum = combined.cumulative();
    let mut buf = Vec::new();
    write_table(
        &mut buf,
        &["theta", "density", "cdf"],
        &[combined.theta_nodes(), combined.density_values(), &cum],
    )?;
    let csv_path = write_file(&cli.out, "combined.csv", &buf)?;
    let meta = json!({
        "observations": combined.observations(),
        "Z": combined.z(),
        "refinement_levels": combined.refinement_levels(),
    });
    write_file(&cli.out, "combined_meta.json", &serde_json::to_vec_pretty(&meta)?)?;
    let median = combined_quantile(&combined, 0.5)?;
    println!(
        "combined {} observations, median {median}, Z = {} -> {}",
        obs.len(),
        combined.z(),
        csv_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_composite(cli: &Cli, tol: &Tolerances<f64>, y: f64) -> Result<ExitCode> {
    let spec = load_spec(cli)?;
    if !spec.is_abs_x() {
        bail!("composite analysis needs an |x| composite family (kind \"abs_x\")");
    }
    let family = spec.build::<f64>()?;
    let grid = build_grid(cli, &family)?;
    let surface = FiducialSurface::build(family, grid)?;

    let measure = SignedFiducialMeasure::from_surface(&surface, y)?;
    let parts = even_odd_decompose(&measure)?;
    let jd = jordan_decompose(&measure);
    let mut buf = Vec::new();
    write_table(
        &mut buf,
        &["theta", "m", "m_E", "m_O", "M1", "M2"],
        &[
            measure.theta_nodes(),
            measure.values(),
            &parts.even,
            &parts.odd,
            &jd.m1,
            &jd.m2,
        ],
    )?;
    write_file(&cli.out, "composite_fm.csv", &buf)?;

    let hat = composite_distribution_of_phi(&measure)?;
    let mut buf = Vec::new();
    write_table(&mut buf, &["phi", "hat_m"], &[&hat.phi, &hat.values])?;
    write_file(&cli.out, "composite_phi.csv", &buf)?;

    let env = composite_envelope(&surface);
    let mut buf = Vec::new();
    write_table(
        &mut buf,
        &["y", "theta_M", "F_star_M"],
        &[&env.y, &env.theta_m, &env.f_star_m],
    )?;
    write_file(&cli.out, "composite_envelope.csv", &buf)?;

    match composite_reduce_with(&surface, tol.eps_mono.max(1e-9), spec.build::<f64>()?) {
        Ok(reduced) => {
            let phis: Vec<f64> = surface
                .theta_nodes()
                .iter()
                .copied()
                .filter(|&t| t >= 0.0)
                .collect();
            let m_bar: Vec<f64> = phis.iter().map(|&p| reduced.cdf(y, p)).collect();
            let mu_bar: Vec<f64> = phis
                .iter()
                .map(|&p| reduced.truncated_star_fm(p, y))
                .collect();
            let mut buf = Vec::new();
            write_table(
                &mut buf,
                &["phi", "m_bar", "mu_bar"],
                &[&phis, &m_bar, &mu_bar],
            )?;
            write_file(&cli.out, "truncated_star.csv", &buf)?;
            println!("composite at y={y}: reducible; wrote truncated_star.csv");
        }
        Err(err) => {
            println!("composite at y={y}: not reducible ({err})");
        }
    }
    println!("-> {}", cli.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_coverage(cli: &Cli, beta: f64, trials: u64, true_phi: f64) -> Result<ExitCode> {
    if let Some(path) = &cli.family {
        // the harness is specific to the |x| composite of the standard normal
        let text = fs::read_to_string(path)?;
        let spec = FamilySpec::from_json(&text)?;
        let expected = FamilySpec::from_json(
            r#"{"kind":"abs_x","of":{"kind":"translation","base":"normal"}}"#,
        )?;
        if spec != expected {
            bail!("coverage supports only the |x| composite of the standard normal");
        }
    }
    let report = one_sided_coverage(beta, trials, true_phi, cli.seed)?;
    let body = serde_json::to_vec_pretty(&report)?;
    let path = write_file(&cli.out, "coverage.json", &body)?;
    println!(
        "dual coverage {} (se {}), reciprocal coverage {} (se {}) -> {}",
        report.dual_coverage,
        report.dual_se,
        report.reciprocal_coverage,
        report.reciprocal_se,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}
