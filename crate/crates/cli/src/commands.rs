//! Pipelines behind each subcommand.

use mps_core::linalg::DEFAULT_RANK_TOL;
use mps_core::special::{green_plus, green_plus_2d_small_argument, green_regular_part};
use mps_core::tev_interior::{
    d1_sine_witness, gram_independence, BoundaryProbe, Lemma1Report, DEFAULT_BOUNDARY_SAMPLES,
    DEFAULT_FD_STEP, FD_RATIO_SLACK, SITE_TOL,
};
use mps_core::tev_strong::DEFAULT_SAMPLE_COUNT;
use mps_core::{
    build_s_matrix, d1_single_point_eigenvector, interior_eigenfunctions, lemma1_verify,
    plane_wave_family, strong_eigenfunctions, Ball, Dimension, Error as CoreError, Rule, Scatterer,
    Wavenumber,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{cjson, cmatrix, cvec, finite, Check, Section};

/// Finite-difference step for the Green-function Helmholtz check.
const GREEN_FD_STEP: f64 = 1e-3;
/// Bound on the relative FD residual of `G⁺` in units of its truncation
/// scale `h²·(max(1, |E|)² + r⁻⁴)`.
const GREEN_FD_TOL: f64 = 10.0;
/// Radius at which the d = 2 small-argument expansion is compared.
const SMALL_ARGUMENT_RADIUS: f64 = 1e-4;
const SMALL_ARGUMENT_TOL: f64 = 1e-6;
const RECIPROCITY_TOL: f64 = 1e-10;
const LOCAL_CONDITION_TOL: f64 = 1e-10;
const SPECTRAL_GAP_TOL: f64 = 1e-12;
const FIXED_POINT_TOL: f64 = 1e-11;
const CHARGE_TOL: f64 = 1e-12;
const FIELD_TOL: f64 = 1e-10;
const CLOSED_FORM_TOL: f64 = 1e-14;
const ANALYTIC_TOL: f64 = 1e-12;
/// Eigenvectors are listed without `--emit-matrices` up to this many entries.
const INLINE_VECTOR_LIMIT: usize = 1024;

/// Command selector shared by the binary and the tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Green,
    Amplitude,
    Smatrix,
    StrongTev,
    InteriorTev,
    ReportAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Green => "green",
            Command::Amplitude => "amplitude",
            Command::Smatrix => "smatrix",
            Command::StrongTev => "strong-tev",
            Command::InteriorTev => "interior-tev",
            Command::ReportAll => "report-all",
        }
    }

    pub const PIPELINES: [Command; 5] = [
        Command::Green,
        Command::Amplitude,
        Command::Smatrix,
        Command::StrongTev,
        Command::InteriorTev,
    ];
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub emit_matrices: bool,
}

/// Quadrature rule for the configured node count. In d = 3 the polar
/// resolution `p` is chosen so that `2p²` is closest to the request.
pub fn rule_for(cfg: &RunConfig) -> Result<Rule, CoreError> {
    let d = cfg.dim();
    let resolution = match d {
        Dimension::One => 1,
        Dimension::Two => cfg.nodes,
        Dimension::Three => ((cfg.nodes as f64 / 2.0).sqrt().round() as usize).max(1),
    };
    Rule::new(d, resolution)
}

fn real_energy(cfg: &RunConfig) -> Result<f64, CoreError> {
    let e = cfg.energy;
    if e.im != 0.0 || !(e.re > 0.0) {
        return Err(CoreError::NonPositiveEnergy { re: e.re, im: e.im });
    }
    Ok(e.re)
}

pub fn run_pipeline(cmd: Command, cfg: &RunConfig, opts: Options) -> Result<Section, CoreError> {
    let s = cfg.scatterer();
    let (results, checks) = match cmd {
        Command::Green => green(cfg)?,
        Command::Amplitude => amplitude(cfg, &s, opts)?,
        Command::Smatrix => smatrix(cfg, &s, opts)?,
        Command::StrongTev => strong_tev(cfg, &s, opts)?,
        Command::InteriorTev => interior_tev(cfg, &s, opts)?,
        Command::ReportAll => unreachable!("report-all dispatches per pipeline"),
    };
    Ok(Section {
        command: cmd.name().into(),
        results,
        checks,
    })
}

type Output = Result<(Value, Vec<Check>), CoreError>;

fn green(cfg: &RunConfig) -> Output {
    let d = cfg.dim();
    let k = Wavenumber::from_energy(cfg.energy);
    if cfg.energy == Complex64::new(0.0, 0.0) {
        return Err(CoreError::ZeroWavenumber);
    }
    let dn = d.get();
    let mut points: Vec<Vec<f64>> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| {
            let mut x = vec![0.0; dn];
            x[0] = r;
            x
        })
        .collect();
    let sites = &cfg.scatterers;
    for a in 0..sites.len() {
        for b in a + 1..sites.len() {
            points.push(
                sites[b]
                    .position
                    .iter()
                    .zip(&sites[a].position)
                    .map(|(p, q)| p - q)
                    .collect(),
            );
        }
    }

    let mut samples = Vec::with_capacity(points.len());
    let mut worst_fd: f64 = 0.0;
    for x in &points {
        let g = green_plus(d, x, &k)?;
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let fd = if r > 10.0 * GREEN_FD_STEP {
            let h = GREEN_FD_STEP;
            let mut lap = Complex64::new(0.0, 0.0);
            let mut p = x.clone();
            for i in 0..dn {
                p[i] = x[i] + h;
                let fwd = green_plus(d, &p, &k)?;
                p[i] = x[i] - h;
                let bwd = green_plus(d, &p, &k)?;
                p[i] = x[i];
                lap += (fwd + bwd - g * 2.0) / (h * h);
            }
            let rel = (-lap - cfg.energy * g).norm() / (cfg.energy * g).norm();
            let truncation =
                GREEN_FD_STEP.powi(2) * (cfg.energy.norm().max(1.0).powi(2) + r.powi(-4));
            worst_fd = worst_fd.max(rel / truncation);
            finite(rel)
        } else {
            Value::Null
        };
        samples.push(json!({ "x": x, "value": cjson(g), "fd_relative_residual": fd }));
    }

    let mut checks = vec![Check::le("helmholtz_fd_scaled", worst_fd, GREEN_FD_TOL)];
    let regular = if d == Dimension::Two {
        let modulus = k.real_modulus()?;
        let r = SMALL_ARGUMENT_RADIUS;
        let mut x = vec![0.0; 2];
        x[0] = r;
        let defect = (green_plus(d, &x, &k)? - green_plus_2d_small_argument(r, modulus)).norm();
        checks.push(Check::le(
            "small_argument_expansion",
            defect,
            SMALL_ARGUMENT_TOL * cfg.energy.norm().max(1.0),
        ));
        Some(green_regular_part(d, &k)?)
    } else if k.is_real_positive() {
        Some(green_regular_part(d, &k)?)
    } else {
        None
    };
    Ok((
        json!({
            "wavenumber": cjson(k.value()),
            "regular_part": regular.map(cjson),
            "samples": samples,
        }),
        checks,
    ))
}

fn amplitude(cfg: &RunConfig, s: &Scatterer, opts: Options) -> Output {
    let energy = real_energy(cfg)?;
    let rule = rule_for(cfg)?;
    let k = Wavenumber::from_real_energy(energy)?;
    let modulus = k.value().re;
    let system = s.charge_system(&k)?;
    let dirs: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .map(|t| t.iter().map(|c| c * modulus).collect())
        .collect();
    let neg = |v: &[f64]| v.iter().map(|c| -c).collect::<Vec<_>>();

    let m = dirs.len();
    let mut table = mps_core::Matrix::zeros(m, m);
    let (mut fmax, mut recip, mut formulas): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (a, ka) in dirs.iter().enumerate() {
        for (b, lb) in dirs.iter().enumerate() {
            let f = system.amplitude(ka, lb)?;
            let swapped = system.amplitude(&neg(lb), &neg(ka))?;
            let alt = system.amplitude_reciprocal(ka, lb)?;
            table[(a, b)] = f;
            fmax = fmax.max(f.norm());
            recip = recip.max((f - swapped).norm());
            formulas = formulas.max((f - alt).norm());
        }
    }
    let rel = |x: f64| if fmax > 0.0 { x / fmax } else { x };

    let mut local: f64 = 0.0;
    for kv in &dirs {
        for j in s.active_indices() {
            local = local.max(s.local_coefficients(kv, j)?.residual);
        }
    }
    let checks = vec![
        Check::le("reciprocity_relative", rel(recip), RECIPROCITY_TOL),
        Check::le(
            "amplitude_formulas_relative",
            rel(formulas),
            RECIPROCITY_TOL,
        ),
        Check::le("local_boundary_conditions", local, LOCAL_CONDITION_TOL),
    ];
    let back = neg(&dirs[0]);
    let mut results = json!({
        "energy": energy,
        "modulus": modulus,
        "nodes": m,
        "condition_estimate": finite(system.condition()),
        "far_field_constant": cjson(mps_core::scatterer::far_field_constant(cfg.dim(), modulus)),
        "forward": cjson(system.amplitude(&dirs[0], &dirs[0])?),
        "backward": cjson(system.amplitude(&dirs[0], &back)?),
        "max_abs_amplitude": fmax,
    });
    if opts.emit_matrices {
        results["directions"] = json!(rule.nodes());
        results["amplitude_table"] = cmatrix(&table);
    }
    Ok((results, checks))
}

fn smatrix(cfg: &RunConfig, s: &Scatterer, opts: Options) -> Output {
    let energy = real_energy(cfg)?;
    let rule = rule_for(cfg)?;
    let smat = build_s_matrix(s, energy, &rule)?;
    let n = s.n_active();
    let m = rule.len();
    let (rank, sv) = smat.defect_rank(cfg.tol);
    let mut checks = vec![Check::le("defect_rank", rank as f64, n as f64)];
    if n < m && sv[0] > 0.0 {
        checks.push(Check::le("defect_gap", sv[n] / sv[0], SPECTRAL_GAP_TOL));
    }
    let mut results = json!({
        "energy": energy,
        "modulus": smat.modulus(),
        "nodes": m,
        "n_active": n,
        "defect_rank": rank,
        "defect_singular_values": sv.iter().take(n + 2).copied().collect::<Vec<_>>(),
        "nontrivial_eigenvalues": cvec(&smat.nontrivial_eigenvalues()?),
    });
    if opts.emit_matrices {
        results["directions"] = json!(rule.nodes());
        results["weights"] = json!(rule.weights());
        results["s_matrix"] = cmatrix(smat.entries());
    }
    Ok((results, checks))
}

fn strong_tev(cfg: &RunConfig, s: &Scatterer, opts: Options) -> Output {
    let energy = real_energy(cfg)?;
    let rule = rule_for(cfg)?;
    let rep = strong_eigenfunctions(s, energy, &rule, cfg.tol, cfg.seed)?;
    let n = s.n_active();
    let m = rule.len();
    let ball = Ball::enclosing(s);
    let (mut bval, mut bnorm): (f64, f64) = (0.0, 0.0);
    let probe = BoundaryProbe::new(s, energy, &rule, &ball, DEFAULT_BOUNDARY_SAMPLES)?;
    for u in &rep.basis {
        let b = probe.check(u)?;
        bval = bval.max(b.value / b.u_norm1);
        bnorm = bnorm.max(b.normal / b.u_norm1);
    }
    let mut checks = vec![
        Check::ge(
            "multiplicity",
            rep.multiplicity() as f64,
            m.saturating_sub(n) as f64,
        ),
        Check::le("defect_rank", rep.defect_rank as f64, n as f64),
        Check::le(
            "fixed_point_residual",
            rep.max_fixed_point_residual(),
            FIXED_POINT_TOL,
        ),
        Check::le("induced_charge", rep.max_charge_defect(), CHARGE_TOL),
        Check::le("field_defect", rep.max_field_defect(), FIELD_TOL),
        Check::le("boundary_value_defect", bval, FIELD_TOL),
        Check::le("boundary_normal_defect", bnorm, FIELD_TOL),
    ];
    let mut results = json!({
        "energy": energy,
        "nodes": m,
        "n_active": n,
        "multiplicity": rep.multiplicity(),
        "moment_rank": rep.moment_rank,
        "moment_singular_values": rep.moment_singular_values,
        "defect_rank": rep.defect_rank,
        "sample_points": DEFAULT_SAMPLE_COUNT,
        "seed": rep.seed,
        "domain": { "center": ball.center, "radius": ball.radius },
        "boundary_samples": DEFAULT_BOUNDARY_SAMPLES,
    });
    if cfg.dim() == Dimension::One && s.sites().len() == 1 {
        let u = d1_single_point_eigenvector(s, energy)?;
        let smat = build_s_matrix(s, energy, &rule)?;
        let res = smat.fixed_point_residual(&u.in_node_order())?;
        checks.push(Check::le("closed_form_fixed_point", res, CLOSED_FORM_TOL));
        results["closed_form_eigenvector"] =
            json!({ "minus": cjson(u.minus), "plus": cjson(u.plus) });
    }
    if opts.emit_matrices || rep.multiplicity() * m <= INLINE_VECTOR_LIMIT {
        results["directions"] = json!(rule.nodes());
        results["eigenvectors"] =
            Value::from(rep.basis.iter().map(|u| cvec(u)).collect::<Vec<_>>());
    }
    Ok((results, checks))
}

/// Plane-wave count actually used: at most two in d = 1.
pub fn effective_waves(cfg: &RunConfig) -> usize {
    if cfg.dim() == Dimension::One {
        cfg.waves.min(2)
    } else {
        cfg.waves
    }
}

fn lemma_summary(r: &Lemma1Report<f64>) -> Value {
    json!({
        "max_site_value": r.max_site_value,
        "z_norm1": r.z_norm1,
        "fd_residual": r.fd_residual,
        "fd_residual_double": r.fd_residual_double,
        "fd_ratio": finite(r.fd_ratio),
        "fd_roundoff_floor": r.fd_roundoff_floor,
        "analytic_residual": r.analytic_residual,
        "passed": r.passed,
    })
}

fn interior_tev(cfg: &RunConfig, s: &Scatterer, opts: Options) -> Output {
    let d = cfg.dim();
    let waves = effective_waves(cfg);
    let family = plane_wave_family(cfg.energy, waves, d)?;
    let basis = interior_eigenfunctions(s, &family, cfg.tol.min(DEFAULT_RANK_TOL))?;
    let n = s.n_active();
    let mut reports = Vec::with_capacity(basis.len());
    for phi in &basis {
        reports.push(lemma1_verify(s, phi, DEFAULT_FD_STEP)?);
    }
    let worst = |f: &dyn Fn(&Lemma1Report<f64>) -> f64| reports.iter().map(f).fold(0.0, f64::max);
    let site_rel = worst(&|r| r.max_site_value / r.z_norm1);
    let analytic_rel = worst(&|r| r.analytic_residual / r.scale.max(f64::MIN_POSITIVE));
    let resolved: Vec<f64> = reports
        .iter()
        .filter(|r| r.fd_residual > 10.0 * r.fd_roundoff_floor)
        .map(|r| (r.fd_ratio - 4.0).abs() / 4.0)
        .collect();
    let failures = reports.iter().filter(|r| !r.passed).count();
    let mut checks = vec![
        Check::ge(
            "basis_size",
            basis.len() as f64,
            waves.saturating_sub(n) as f64,
        ),
        Check::le("site_value_relative", site_rel, SITE_TOL),
        Check::le(
            "analytic_residual_relative",
            analytic_rel,
            ANALYTIC_TOL * (1.0 + cfg.energy.norm()),
        ),
        Check::le("interior_check_failures", failures as f64, 0.0),
    ];
    if !resolved.is_empty() {
        checks.push(Check::le(
            "fd_ratio_deviation",
            resolved.iter().copied().fold(0.0, f64::max),
            FD_RATIO_SLACK,
        ));
    }
    let domain = Ball::enclosing(s);
    let gram = gram_independence(
        &family,
        &domain,
        4 * waves.max(1),
        cfg.seed,
        DEFAULT_RANK_TOL,
    )?;
    let mut results = json!({
        "energy": cjson(cfg.energy),
        "kappa": cjson(family.kappa().value()),
        "waves": waves,
        "n_active": n,
        "basis_size": basis.len(),
        "fd_step": DEFAULT_FD_STEP,
        "domain": { "center": domain.center, "radius": domain.radius },
        "gram": { "points": gram.points, "rank": gram.rank, "sigma_ratio": gram.ratio },
        "interior_check": reports.iter().map(lemma_summary).collect::<Vec<_>>(),
    });
    if d == Dimension::One && s.sites().len() == 1 {
        let witness = d1_sine_witness(s, cfg.energy)?;
        let r = lemma1_verify(s, &witness, DEFAULT_FD_STEP)?;
        checks.push(Check::le(
            "sine_witness_failures",
            if r.passed { 0.0 } else { 1.0 },
            0.0,
        ));
        results["sine_witness"] = json!({ "coefficients": cvec(&witness.coefficients), "interior_check": lemma_summary(&r) });
    }
    if opts.emit_matrices {
        results["coefficients"] = Value::from(
            basis
                .iter()
                .map(|p| cvec(&p.coefficients))
                .collect::<Vec<_>>(),
        );
    }
    Ok((results, checks))
}
