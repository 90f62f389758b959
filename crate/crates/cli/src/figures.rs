//! Built-in figure-data bundles: fixed family configurations sampled onto
//! CSV files, one column per plotted curve.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};

use fidgeo::export::write_table;
use fidgeo::families::{AbsComposite, JoinedUniform, ParametricFamily, Translation};
use fidgeo::fiducial::{
    composite_distribution_of_phi, composite_envelope, composite_reduce, even_odd_decompose,
    SignedFiducialMeasure,
};
use fidgeo::real::linspace;
use fidgeo::surface::{FiducialSurface, Grid};

pub fn cmd_figure(out: &Path, id: &str) -> Result<ExitCode> {
    let written = match id {
        "1" => figure_1(out)?,
        "2a" => figure_2a(out)?,
        "2b" => figure_2b(out)?,
        "4a" => figure_4a(out)?,
        "4b" => figure_4b(out)?,
        "5a" => figure_5a(out)?,
        "5b" => figure_5b(out)?,
        other => bail!("unknown figure id {other:?} (expected 1, 2a, 2b, 4a, 4b, 5a or 5b)"),
    };
    for w in &written {
        println!("wrote {}", out.join(w).display());
    }
    Ok(ExitCode::SUCCESS)
}

fn save(out: &Path, name: &str, header: &[&str], cols: &[&[f64]]) -> Result<()> {
    let mut buf = Vec::new();
    write_table(&mut buf, header, cols)?;
    fs::write(out.join(name), buf).with_context(|| format!("writing {name}"))?;
    Ok(())
}

/// Member distributions of the normal translation family plus the fiducial
/// distribution they induce at x0 = 0.
fn figure_1(out: &Path) -> Result<Vec<&'static str>> {
    let fam = Translation::<f64>::normal();
    let xs = linspace(-6.0, 6.0, 601);
    let thetas = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut cols: Vec<Vec<f64>> = vec![xs.clone()];
    let mut names = vec!["x".to_string()];
    for t in thetas {
        cols.push(xs.iter().map(|&x| fam.cdf(x, t)).collect());
        names.push(format!("F_theta_{t:.2}"));
    }
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig1_members.csv", &hdr, &refs)?;

    let grid = linspace(-6.0, 6.0, 601);
    let fd: Vec<f64> = grid.iter().map(|&t| fam.cdf(0.0, t)).collect();
    save(out, "fig1_fd.csv", &["theta", "F_f"], &[&grid, &fd])?;
    Ok(vec!["fig1_members.csv", "fig1_fd.csv"])
}

/// Joined uniform members (a = 1, b = 4, transition half-width 0.5).
fn figure_2a(out: &Path) -> Result<Vec<&'static str>> {
    let fam = JoinedUniform::new(1.0, 4.0, 0.5).unwrap();
    let xs = linspace(-3.0, 3.0, 601);
    let thetas = [
        -4.0, -3.0, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0,
    ];
    let mut cols: Vec<Vec<f64>> = vec![xs.clone()];
    let mut names = vec!["x".to_string()];
    for t in thetas {
        cols.push(xs.iter().map(|&x| fam.cdf(x, t)).collect());
        names.push(format!("F_theta_{t:.2}"));
    }
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig2a.csv", &hdr, &refs)?;
    Ok(vec!["fig2a.csv"])
}

/// Fiducial measures of the joined uniform at x = 1.25 and x = 0.5 for
/// transition half-widths 0.5, 0.3 and 0.15 (plotted, as in the source
/// figure, on the member-probability ordinate).
fn figure_2b(out: &Path) -> Result<Vec<&'static str>> {
    let thetas = linspace(-4.0, 4.0, 801);
    let mut cols: Vec<Vec<f64>> = vec![thetas.clone()];
    let mut names = vec!["theta".to_string()];
    for theta_t in [0.5, 0.3, 0.15] {
        let fam = JoinedUniform::new(1.0, 4.0, theta_t).unwrap();
        for x0 in [1.25, 0.5] {
            cols.push(thetas.iter().map(|&t| fam.cdf(x0, t)).collect());
            names.push(format!("Fr_x{x0:.2}_tT{theta_t:.2}"));
        }
    }
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig2b.csv", &hdr, &refs)?;
    Ok(vec!["fig2b.csv"])
}

/// |x| composite of the extreme-value family: member curves over y plus the
/// probability envelope with its peak locations.
fn figure_4a(out: &Path) -> Result<Vec<&'static str>> {
    let fam = AbsComposite::new::<f64>(Translation::evd()).unwrap();
    let ys = linspace(0.0, 4.0, 401);
    let thetas = [-2.0, -1.0, -0.5, -0.35, 0.0, 0.5, 1.0];
    let mut cols: Vec<Vec<f64>> = vec![ys.clone()];
    let mut names = vec!["y".to_string()];
    for t in thetas {
        cols.push(ys.iter().map(|&y| fam.cdf(y, t)).collect());
        names.push(format!("F_theta_{t:.2}"));
    }
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig4a.csv", &hdr, &refs)?;

    let grid = Grid::new(ys, linspace(-6.0, 4.0, 801)).unwrap();
    let surface = FiducialSurface::build(fam, grid).unwrap();
    let env = composite_envelope(&surface);
    save(
        out,
        "fig4a_envelope.csv",
        &["y", "theta_M", "F_star_M"],
        &[&env.y, &env.theta_m, &env.f_star_m],
    )?;
    Ok(vec!["fig4a.csv", "fig4a_envelope.csv"])
}

/// Fiducial measures of the extreme-value composite for three observations,
/// with the even/odd split and the folded distribution at y = 1.5.
fn figure_4b(out: &Path) -> Result<Vec<&'static str>> {
    let fam = AbsComposite::new::<f64>(Translation::evd()).unwrap();
    let thetas = linspace(-4.0, 4.0, 801);
    let grid = Grid::new(vec![0.5, 1.25, 1.5], thetas.clone()).unwrap();
    let surface = FiducialSurface::build(fam, grid).unwrap();
    let mut cols: Vec<Vec<f64>> = vec![thetas.clone()];
    let mut names = vec!["theta".to_string()];
    for y in [0.5, 1.25, 1.5] {
        let m = surface.x_section(y).unwrap();
        cols.push(m.values().to_vec());
        names.push(format!("m_y{y:.2}"));
    }
    let m15 = SignedFiducialMeasure::from_surface(&surface, 1.5).unwrap();
    let parts = even_odd_decompose(&m15).unwrap();
    cols.push(parts.even.clone());
    names.push("mE_y1.50".into());
    cols.push(parts.odd.clone());
    names.push("mO_y1.50".into());
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig4b.csv", &hdr, &refs)?;

    let hat = composite_distribution_of_phi(&m15).unwrap();
    save(out, "fig4b_phi.csv", &["phi", "hat_m"], &[&hat.phi, &hat.values])?;
    Ok(vec!["fig4b.csv", "fig4b_phi.csv"])
}

/// Normal composite members, coincident in +/- parameter and re-indexed by
/// phi; the phi = 0 column is the envelope.
fn figure_5a(out: &Path) -> Result<Vec<&'static str>> {
    let fam = AbsComposite::new::<f64>(Translation::normal()).unwrap();
    let ys = linspace(0.0, 4.0, 401);
    let mut cols: Vec<Vec<f64>> = vec![ys.clone()];
    let mut names = vec!["y".to_string()];
    for phi in [0.0, 0.5, 1.0, 1.5, 2.0] {
        cols.push(ys.iter().map(|&y| fam.cdf(y, phi)).collect());
        names.push(format!("Fbar_phi_{phi:.2}"));
    }
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let hdr: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    save(out, "fig5a.csv", &hdr, &refs)?;
    Ok(vec!["fig5a.csv"])
}

/// Normal composite measure at y = 1.5 plus its reduced half and the
/// truncated* form.
fn figure_5b(out: &Path) -> Result<Vec<&'static str>> {
    let fam = AbsComposite::new::<f64>(Translation::normal()).unwrap();
    let thetas = linspace(-4.0, 4.0, 801);
    let grid = Grid::new(vec![0.5, 1.25, 1.5], thetas.clone()).unwrap();
    let surface = FiducialSurface::build(fam, grid).unwrap();
    let m = surface.x_section(1.5).unwrap();
    save(out, "fig5b.csv", &["theta", "m"], &[&thetas, m.values()])?;

    let reduced = composite_reduce(&surface, 1e-9).unwrap();
    let phis: Vec<f64> = thetas.iter().copied().filter(|&t| t >= 0.0).collect();
    let m_bar: Vec<f64> = phis.iter().map(|&p| reduced.cdf(1.5, p)).collect();
    let mu_bar: Vec<f64> = phis
        .iter()
        .map(|&p| reduced.truncated_star_fm(p, 1.5))
        .collect();
    save(
        out,
        "fig5b_reduced.csv",
        &["phi", "m_bar", "mu_bar"],
        &[&phis, &m_bar, &mu_bar],
    )?;
    Ok(vec!["fig5b.csv", "fig5b_reduced.csv"])
}
