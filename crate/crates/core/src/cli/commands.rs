use log::warn;
use serde_json::{Map, Value};

use super::config::{GeometryConfig, LineConfig, PotentialConfig, RunConfig, SeedConfig};
use super::output::{PlotSpec, Table};
use super::CliError;
use crate::geometry::{embedding_profile, potential_from_geometry, radius_from_superpotential, GeometryProfile};
use crate::riccati::{
    closed_form_coulomb_3d, closed_form_coulomb_plus_const, flat_seed, residual_profile,
    solve_modified_riccati_with, ModelParams, PotentialSpec, RiccatiOptions,
};
use crate::scattering::{
    line_potential_from_geometry, phase_shift_sweep, solve_scattering, LinePotential,
};

/// The subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    P2g,
    G2p,
    Embed,
    WormholePotential,
    Scatter,
    Sweep,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::P2g => "p2g",
            Self::G2p => "g2p",
            Self::Embed => "embed",
            Self::WormholePotential => "wormhole-potential",
            Self::Scatter => "scatter",
            Self::Sweep => "sweep",
        }
    }

    pub fn file_stem(self) -> String {
        self.name().replace('-', "_")
    }
}

/// A command's result before it is written out.
#[derive(Debug, Clone)]
pub struct Product {
    pub table: Table,
    /// Command-specific metadata merged into the header.
    pub extra: Map<String, Value>,
    pub plot: Option<PlotSpec>,
}

pub fn execute(cmd: CommandKind, cfg: &RunConfig, jobs: Option<usize>) -> Result<Product, CliError> {
    match cmd {
        CommandKind::P2g => run_p2g(cfg),
        CommandKind::G2p => run_g2p(cfg),
        CommandKind::Embed => run_embed(cfg),
        CommandKind::WormholePotential => run_wormhole_potential(cfg),
        CommandKind::Scatter => run_scatter(cfg),
        CommandKind::Sweep => run_sweep(cfg, jobs),
    }
}

fn require<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Config(format!("missing `{what}` section")))
}

fn build_potential(cfg: &PotentialConfig, p: &ModelParams) -> Result<PotentialSpec, CliError> {
    Ok(match cfg {
        PotentialConfig::CoulombPlusConst => PotentialSpec::coulomb_plus_const(p.kappa, p.dims),
        PotentialConfig::PureCoulomb => PotentialSpec::PureCoulomb { kappa: p.kappa },
        PotentialConfig::Zero => PotentialSpec::zero(),
        PotentialConfig::Tabulated { r, u } => PotentialSpec::tabulated(r.clone(), u.clone())?,
    })
}

fn seed_value(seed: &SeedConfig, pot: &PotentialConfig, p: &ModelParams, r: f64) -> Result<f64, CliError> {
    match (seed, pot) {
        (SeedConfig::Value { w_start }, _) => Ok(*w_start),
        (SeedConfig::Flat, _) => Ok(flat_seed(r, p.dims)),
        (SeedConfig::ClosedForm, PotentialConfig::CoulombPlusConst) => Ok(closed_form_coulomb_plus_const(r, p)?),
        (SeedConfig::ClosedForm, PotentialConfig::PureCoulomb) if p.dims == 3 => {
            Ok(closed_form_coulomb_3d(r, p.kappa)?)
        }
        (SeedConfig::ClosedForm, PotentialConfig::Zero) => Ok(flat_seed(r, p.dims)),
        (SeedConfig::ClosedForm, _) => Err(CliError::Config(
            "no closed-form seed for this potential; use `flat` or `value`".into(),
        )),
    }
}

fn run_p2g(cfg: &RunConfig) -> Result<Product, CliError> {
    let p = cfg.model()?;
    let pot_cfg = cfg.potential.clone().unwrap_or(PotentialConfig::CoulombPlusConst);
    let grid = require(&cfg.grid, "grid")?;
    if grid.count < 2 {
        return Err(CliError::Config("p2g needs a grid with at least two points".into()));
    }
    let (a, b) = (grid.start, grid.end);
    let potential = build_potential(&pot_cfg, &p)?;
    let seed = cfg.seed.clone().unwrap_or(match pot_cfg {
        PotentialConfig::Tabulated { .. } => SeedConfig::Flat,
        _ => SeedConfig::ClosedForm,
    });
    let w_start = seed_value(&seed, &pot_cfg, &p, a)?;
    let opts = RiccatiOptions {
        max_step: Some((b - a) / (grid.count - 1) as f64),
        ..RiccatiOptions::with_tolerance(cfg.tolerance())
    };
    let sol = solve_modified_riccati_with(&potential, &p, (a, b), w_start, &opts)?;
    let geometry = radius_from_superpotential(&sol)?;
    let residual = residual_profile(&sol, &potential);
    let mut table = Table::new(&["r", "W", "S", "R", "residual"]);
    for i in 0..sol.len() {
        let radius = geometry.radius(sol.r[i])?;
        table.push(vec![sol.r[i], sol.w[i], sol.s[i], radius, residual[i]]);
    }
    let mut extra = Map::new();
    extra.insert("max_residual".into(), number(sol.max_residual));
    extra.insert("potential".into(), Value::String(potential.describe()));
    if let Some(tol) = cfg.residual_tol {
        let ok = sol.max_residual <= tol;
        if !ok {
            warn!("max residual {:.3e} exceeds residual_tol {tol:.3e}", sol.max_residual);
        }
        extra.insert("residual_within_tol".into(), Value::Bool(ok));
    }
    Ok(Product {
        table,
        extra,
        plot: Some(PlotSpec {
            title: "metric radius R(r)".into(),
            x: 0,
            ys: vec![3],
            group: None,
        }),
    })
}

fn build_geometry(g: &GeometryConfig, model: Option<&ModelParams>) -> Result<GeometryProfile, CliError> {
    let geometry = match g {
        GeometryConfig::Flat => GeometryProfile::flat(),
        GeometryConfig::Coulomb => {
            let p = model.ok_or_else(|| CliError::Config("Coulomb geometry needs the `model` anchor".into()))?;
            GeometryProfile::coulomb_from_anchor(p.r_anchor, p.radius_anchor, p.kappa, p.dims)
        }
        GeometryConfig::Ellis { throat } => GeometryProfile::Ellis { throat: *throat },
        GeometryConfig::Tabulated { r, radius } => GeometryProfile::tabulated(r.clone(), radius.clone())?,
    };
    geometry.validate()?;
    Ok(geometry)
}

fn sample_points(cfg: &RunConfig, geometry: Option<&GeometryProfile>) -> Result<Vec<f64>, CliError> {
    match (&cfg.grid, geometry) {
        (Some(g), _) => g.points("grid"),
        (None, Some(GeometryProfile::Tabulated(t))) => Ok(t.grid().to_vec()),
        (None, _) => Err(CliError::Config("missing `grid` section".into())),
    }
}

fn series_columns(first: &[&str], ells: &[u32]) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain(ells.iter().map(|l| format!("U_l{l}")))
        .collect()
}

fn run_g2p(cfg: &RunConfig) -> Result<Product, CliError> {
    let p = cfg.model()?;
    let geometry = build_geometry(require(&cfg.geometry, "geometry")?, Some(&p))?;
    let ells = cfg.ells()?;
    let points = sample_points(cfg, Some(&geometry))?;
    let potentials = ells
        .iter()
        .map(|&l| potential_from_geometry(&geometry, p.dims, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table {
        columns: series_columns(&["r", "R"], &ells),
        rows: Vec::with_capacity(points.len()),
    };
    for &r in &points {
        let mut row = vec![r, geometry.radius(r)?];
        row.extend(potentials.iter().map(|u| u.value(r)));
        table.push(row);
    }
    Ok(Product {
        table,
        extra: Map::new(),
        plot: Some(PlotSpec {
            title: "effective potential U(r)".into(),
            x: 0,
            ys: (2..2 + ells.len()).collect(),
            group: None,
        }),
    })
}

fn run_embed(cfg: &RunConfig) -> Result<Product, CliError> {
    let e = require(&cfg.embed, "embed")?;
    let prof = embedding_profile(e.k, e.kappa, e.dims, (e.rho_start, e.rho_end), e.count, cfg.tolerance())?;
    let mut table = Table::new(&["rho", "r", "dr_drho", "cdt_drho"]);
    for i in 0..prof.rho.len() {
        table.push(vec![prof.rho[i], prof.r[i], prof.dr_drho[i], prof.cdt_drho[i]]);
    }
    let mut extra = Map::new();
    if let Some(m) = prof.rho_min {
        extra.insert("rho_min".into(), number(m));
    }
    Ok(Product {
        table,
        extra,
        plot: Some(PlotSpec {
            title: "embedding".into(),
            x: 0,
            ys: vec![1, 3],
            group: None,
        }),
    })
}

fn build_line(line: &LineConfig, dims: u32, ell: u32) -> Result<LinePotential, CliError> {
    Ok(match line {
        LineConfig::Ellis { throat } => LinePotential::ellis(dims, ell, *throat)?,
        LineConfig::Tabulated { w, radius } => {
            line_potential_from_geometry(&GeometryProfile::tabulated(w.clone(), radius.clone())?, dims, ell)?
        }
        LineConfig::SquareBarrier { height, halfwidth } => LinePotential::square_barrier(*height, *halfwidth)?,
        LineConfig::Zero => LinePotential::zero(),
    })
}

fn line_dims(cfg: &RunConfig, line: &LineConfig) -> Result<u32, CliError> {
    match line {
        LineConfig::Ellis { .. } | LineConfig::Tabulated { .. } => Ok(cfg.model()?.dims),
        _ => Ok(cfg.model.map_or(3, |m| m.dims)),
    }
}

fn run_wormhole_potential(cfg: &RunConfig) -> Result<Product, CliError> {
    let line = require(&cfg.line, "line")?;
    let dims = line_dims(cfg, line)?;
    let ells = cfg.ells()?;
    let points = require(&cfg.grid, "grid")?.points("grid")?;
    let potentials = ells
        .iter()
        .map(|&l| build_line(line, dims, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table {
        columns: series_columns(&["w"], &ells),
        rows: Vec::with_capacity(points.len()),
    };
    for &w in &points {
        let (lo, hi) = potentials[0].domain();
        if w < lo || w > hi {
            return Err(CliError::Config(format!("grid point {w} lies outside [{lo}, {hi}]")));
        }
        let mut row = vec![w];
        row.extend(potentials.iter().map(|u| u.value(w)));
        table.push(row);
    }
    Ok(Product {
        table,
        extra: Map::new(),
        plot: Some(PlotSpec {
            title: "line potential U(w)".into(),
            x: 0,
            ys: (1..1 + ells.len()).collect(),
            group: None,
        }),
    })
}

fn run_scatter(cfg: &RunConfig) -> Result<Product, CliError> {
    let line = require(&cfg.line, "line")?;
    let dims = line_dims(cfg, line)?;
    let ell = cfg.model.map_or(0, |m| m.ell);
    let eps = *require(&cfg.energy, "energy")?;
    let u = build_line(line, dims, ell)?;
    let a = solve_scattering(&u, eps, &cfg.numerics)?;
    let mut table = Table::new(&[
        "epsilon", "k", "re_t", "im_t", "re_r", "im_r", "abs_t2", "abs_r2", "flux_defect",
    ]);
    table.push(vec![
        a.epsilon,
        a.k,
        a.t.re,
        a.t.im,
        a.r.re,
        a.r.im,
        a.transmission(),
        a.reflection(),
        a.flux_defect,
    ]);
    let mut extra = Map::new();
    extra.insert("step".into(), number(a.step));
    extra.insert("window".into(), number(a.window));
    Ok(Product {
        table,
        extra,
        plot: None,
    })
}

fn run_sweep(cfg: &RunConfig, jobs: Option<usize>) -> Result<Product, CliError> {
    let line = require(&cfg.line, "line")?;
    let dims = line_dims(cfg, line)?;
    let ells = cfg.ells()?;
    let energies = require(&cfg.energies, "energies")?.points("energies")?;
    let mut table = Table::new(&[
        "ell", "epsilon", "eta", "delta", "argand_x", "argand_y", "abs_t2", "flux_defect",
    ]);
    for &ell in &ells {
        let u = build_line(line, dims, ell)?;
        let rec = phase_shift_sweep(&u, &energies, &cfg.numerics, jobs)?;
        for i in 0..rec.len() {
            table.push(vec![
                f64::from(ell),
                rec.epsilon[i],
                rec.eta[i],
                rec.delta[i],
                rec.argand[i].re,
                rec.argand[i].im,
                rec.amplitudes[i].transmission(),
                rec.amplitudes[i].flux_defect,
            ]);
        }
    }
    Ok(Product {
        table,
        extra: Map::new(),
        plot: Some(PlotSpec {
            title: "Argand trace".into(),
            x: 4,
            ys: vec![5],
            group: Some(0),
        }),
    })
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
