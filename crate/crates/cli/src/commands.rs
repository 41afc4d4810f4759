use crate::args::*;
use crate::config::{sidecar, to_json, write_text, Envelope, RunConfig};
use kakeya_core::besicovitch::{f_curve, keich_family, optimize_family, CurveMode};
use kakeya_core::bounds::{
    integrability_test, modulus_bound_euclidean, modulus_bound_spherical, wn_bound_euclidean,
    wn_bound_spherical, FModel, Weight,
};
use kakeya_core::filterbank::{build_filterbank, classify_b0, lp_coefficients, zygmund_modulus, zygmund_modulus_periodic, GridSpec};
use kakeya_core::geometry::{compression_ratio, relaxed_score};
use kakeya_core::io::{certifier_sweep_spec, emit_plotdata, wn_sweep_spec};
use kakeya_core::multiplier::{
    certify_lower_bound, change_of_variable_check, conjugate, default_inputs, relaxed_gain_check,
    CertifySettings,
};
use kakeya_core::spherical::{msp_lower_bound, psi_distortion_check, spherical_lp, theta_grid, ReflectedPoleConfig, SphereSample};
use kakeya_core::{BoundReport, LabError, Profile, Result, SampledFunction, TubeFamily};
use std::path::{Path, PathBuf};

pub struct Globals {
    pub seed: u64,
    pub grid: usize,
    pub out: Option<PathBuf>,
}

pub fn dispatch(cmd: Command, g: Globals) -> Result<()> {
    match cmd {
        Command::Tubes(TubesCmd::Keich(a)) => tubes_keich(a, &g),
        Command::Tubes(TubesCmd::Optimize(a)) => tubes_optimize(a, &g),
        Command::Tubes(TubesCmd::Fcurve(a)) => tubes_fcurve(a, &g),
        Command::Tubes(TubesCmd::Ratio(a)) => tubes_ratio(a, &g),
        Command::Lp(LpCmd::Coeffs(a)) => lp_coeffs(a, &g),
        Command::Lp(LpCmd::Classify(a)) => lp_classify(a, &g),
        Command::Lp(LpCmd::Zygmund(a)) => lp_zygmund(a, &g),
        Command::Bounds(BoundsCmd::Wn(a)) => bounds_wn(a, &g),
        Command::Bounds(BoundsCmd::Modulus(a)) => bounds_modulus(a, &g),
        Command::Bounds(BoundsCmd::Integrable(a)) => bounds_integrable(a, &g),
        Command::Multiplier(MultiplierCmd::Certify(a)) => multiplier_certify(a, &g),
        Command::Multiplier(MultiplierCmd::CovCheck(a)) => multiplier_cov(a, &g),
        Command::Multiplier(MultiplierCmd::Relaxed(a)) => multiplier_relaxed(a, &g),
        Command::Sphere(SphereCmd::Distortion(a)) => sphere_distortion(a, &g),
        Command::Sphere(SphereCmd::Msp(a)) => sphere_msp(a, &g),
        Command::Sphere(SphereCmd::Lp(a)) => sphere_lp(a, &g),
    }
}

/// `a..b` (inclusive) or `a,b,c`.
pub fn parse_list(s: &str) -> Result<Vec<u32>> {
    let bad = || LabError::invalid(format!("expected a range a..b or a list a,b,c, got {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || LabError::invalid(format!("window must be a,b, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn emit_reports(mut cfg: RunConfig, reports: Vec<BoundReport>, g: &Globals) -> Result<()> {
    if let Some(p) = &g.out {
        cfg.output(p);
    }
    let env = Envelope { run_config: cfg, reports };
    write_text(g.out.as_ref(), to_json(&env)?.as_bytes())
}

/// CSV body to `--out` (or stdout) plus a sidecar with the configuration.
fn emit_csv(mut cfg: RunConfig, body: Vec<u8>, g: &Globals) -> Result<()> {
    write_text(g.out.as_ref(), &body)?;
    if let Some(p) = &g.out {
        cfg.output(p);
        std::fs::write(sidecar(p), to_json(&cfg)?)?;
    }
    Ok(())
}

fn read_sampled(p: &Path) -> Result<SampledFunction> {
    let f = std::fs::File::open(p).map_err(|e| LabError::Io(format!("{}: {e}", p.display())))?;
    SampledFunction::read_csv(f)
}

fn read_family(p: &Path) -> Result<TubeFamily> {
    let s = std::fs::read_to_string(p).map_err(|e| LabError::Io(format!("{}: {e}", p.display())))?;
    TubeFamily::from_json(&s)
}

fn write_family(mut fam: TubeFamily, cfg: RunConfig, g: &Globals) -> Result<()> {
    let mut cfg = cfg;
    if let Some(p) = &g.out {
        cfg.output(p);
    }
    fam.meta_mut().params.insert("run_config".into(), serde_json::to_value(&cfg)?);
    let mut s = fam.to_json()?;
    s.push('\n');
    write_text(g.out.as_ref(), s.as_bytes())
}

fn tubes_keich(a: KeichArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("tubes keich", &a, g.seed, g.grid);
    let fam = keich_family(a.k, parse_window(&a.window)?)?;
    write_family(fam, cfg, g)
}

fn tubes_optimize(a: OptimizeArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("tubes optimize", &a, g.seed, g.grid);
    let fam = optimize_family(a.n, a.delta, g.seed, a.iters)?;
    write_family(fam, cfg, g)
}

fn tubes_fcurve(a: FcurveArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("tubes fcurve", &a, g.seed, g.grid);
    let mode = match a.mode {
        CurveModeArg::Keich => CurveMode::Keich,
        CurveModeArg::Optimized => CurveMode::Optimized { iters: 200, seed: g.seed },
        CurveModeArg::Separated => CurveMode::Separated,
    };
    let curve = f_curve(&parse_list(&a.ks)?, mode, a.resolution)?;
    let mut buf = Vec::new();
    curve.write_csv(&mut buf)?;
    emit_csv(cfg, buf, g)
}

fn tubes_ratio(a: RatioArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("tubes ratio", &a, g.seed, g.grid);
    let fam = read_family(&a.family)?;
    let h = fam.delta() / a.resolution;
    let reports = vec![compression_ratio(&fam, h, !a.no_enforce)?, relaxed_score(&fam, h)?];
    emit_reports(cfg, reports, g)
}

fn lp_coeffs(a: CoeffsArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("lp coeffs", &a, g.seed, g.grid);
    let f = read_sampled(&a.input)?;
    let bank = build_filterbank(a.levels, GridSpec::of(&f, a.periodic))?;
    let levels = lp_coefficients(&f, &bank)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["level", "x", "re", "im"]).map_err(LabError::from)?;
    for (n, lv) in levels.iter().enumerate() {
        for (i, z) in lv.values().iter().enumerate() {
            w.write_record([n.to_string(), lv.x(i).to_string(), z.re.to_string(), z.im.to_string()])
                .map_err(LabError::from)?;
        }
    }
    let body = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
    emit_csv(cfg, body, g)
}

fn lp_classify(a: ClassifyArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("lp classify", &a, g.seed, g.grid);
    let f = read_sampled(&a.input)?;
    let bank = build_filterbank(a.levels, GridSpec::of(&f, a.periodic))?;
    emit_reports(cfg, vec![classify_b0(&f, &bank)?], g)
}

fn lp_zygmund(a: ZygmundArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("lp zygmund", &a, g.seed, g.grid);
    let f = read_sampled(&a.input)?;
    let v = if a.periodic { zygmund_modulus_periodic(&f, a.h)? } else { zygmund_modulus(&f, a.h)? };
    let r = BoundReport::new("zygmund_modulus", v, &["sup |F(x+h) + F(x-h) - 2F(x)| / h"])
        .param("h", a.h)
        .param("periodic", a.periodic);
    emit_reports(cfg, vec![r], g)
}

fn bounds_wn(a: WnArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("bounds wn", &a, g.seed, g.grid);
    let ns = parse_list(&a.n)?;
    let mut reports = Vec::new();
    for spec in &a.fd {
        let fd = FModel::parse(spec)?;
        for &n in &ns {
            reports.push(match a.domain {
                Domain::Euclid => wn_bound_euclidean(&fd, a.p, n, a.norm, a.cd)?,
                Domain::Sphere => wn_bound_spherical(&fd, a.p, n, a.theta, a.norm, a.cd)?,
            });
        }
    }
    if let Some(p) = &a.plot {
        let f = std::fs::File::create(p).map_err(|e| LabError::Io(format!("{}: {e}", p.display())))?;
        emit_plotdata(&reports, &wn_sweep_spec(), f)?;
    }
    emit_reports(cfg, reports, g)
}

fn bounds_modulus(a: ModulusArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("bounds modulus", &a, g.seed, g.grid);
    let fd = FModel::parse(&a.fd)?;
    let r = match a.domain {
        Domain::Euclid => {
            let gap = a.gap.ok_or_else(|| LabError::invalid("--gap is required"))?;
            modulus_bound_euclidean(&fd, a.p, gap, a.norm)?
        }
        Domain::Sphere => {
            let (s, t) = a.s.zip(a.t).ok_or_else(|| LabError::invalid("--s and --t are required"))?;
            modulus_bound_spherical(&fd, a.p, s, t)?
        }
    };
    emit_reports(cfg, vec![r], g)
}

fn bounds_integrable(a: IntegrableArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("bounds integrable", &a, g.seed, g.grid);
    let fd = FModel::parse(&a.fd)?;
    let w = match a.weight {
        WeightArg::None => Weight::None,
        WeightArg::Loglog => Weight::LogLog,
    };
    emit_reports(cfg, vec![integrability_test(&fd, a.p, w)?], g)
}

fn families(src: &FamilySource) -> Result<Vec<TubeFamily>> {
    match &src.keich {
        Some(ks) => parse_list(ks)?
            .into_iter()
            .map(|k| keich_family(k, kakeya_core::geometry::DEFAULT_WINDOW))
            .collect(),
        None if src.family.is_empty() => Err(LabError::invalid("give --family or --keich")),
        None => src.family.iter().map(|p| read_family(p)).collect(),
    }
}

/// Copies `k` from the family metadata so sweeps can be plotted against it.
fn tag_k(r: BoundReport, fam: &TubeFamily) -> BoundReport {
    match fam.meta().params.get("k") {
        Some(k) => r.param("k", k),
        None => r,
    }
}

fn multiplier_certify(a: CertifyArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("multiplier certify", &a, g.seed, g.grid);
    let m = Profile::parse(&a.symbol)?;
    let p = if a.p > 2.0 { conjugate(a.p) } else { a.p };
    let settings = CertifySettings { grid: g.grid, raster_fraction: a.raster_fraction };
    let mut reports = Vec::new();
    for fam in families(&a.source)? {
        let r = certify_lower_bound(&fam, &m, p, a.r, &settings)?.param("p_input", a.p);
        reports.push(tag_k(r, &fam));
    }
    if let Some(path) = &a.plot {
        let f = std::fs::File::create(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        emit_plotdata(&reports, &certifier_sweep_spec(), f)?;
    }
    emit_reports(cfg, reports, g)
}

fn multiplier_cov(a: CovArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("multiplier cov-check", &a, g.seed, g.grid);
    let m = Profile::parse(&a.m)?;
    let (f, gg) = default_inputs(a.spacing)?;
    emit_reports(cfg, vec![change_of_variable_check(&f, &gg, &m, a.r1, a.r2)?], g)
}

fn multiplier_relaxed(a: RelaxedArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("multiplier relaxed", &a, g.seed, g.grid);
    let mut reports = Vec::new();
    for fam in families(&a.source)? {
        reports.push(tag_k(relaxed_gain_check(&fam, a.p, a.raster_fraction)?, &fam));
    }
    emit_reports(cfg, reports, g)
}

fn sphere_distortion(a: DistortionArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("sphere distortion", &a, g.seed, g.grid);
    let pole = ReflectedPoleConfig::new(a.theta, a.r, a.d)?;
    emit_reports(cfg, vec![psi_distortion_check(&pole, a.samples, a.radius, g.seed)?], g)
}

fn sphere_msp(a: MspArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("sphere msp", &a, g.seed, g.grid);
    let m = Profile::parse(&a.m)?;
    let pts = match a.sampling {
        Sampling::Fibonacci => SphereSample::fibonacci(a.points)?,
        Sampling::Random => SphereSample::random(a.d, a.points, g.seed)?,
    };
    let res = msp_lower_bound(&m, &pts, a.p, a.trials, g.seed, a.diag, None)?;
    emit_reports(cfg, vec![res.report], g)
}

/// Smallest power of two whose circle grid resolves frequency `2^levels`.
pub fn circle_len(levels: u32) -> usize {
    let top = 2f64.powi(levels as i32);
    ((4.0 * std::f64::consts::PI * top).ceil() as usize).next_power_of_two().max(64)
}

fn sphere_lp(a: SphereLpArgs, g: &Globals) -> Result<()> {
    let cfg = RunConfig::new("sphere lp", &a, g.seed, g.grid);
    let m = Profile::parse(&a.m)?;
    let len = a.len.unwrap_or_else(|| circle_len(a.levels));
    let bank = build_filterbank(a.levels, theta_grid(len))?;
    let levels = spherical_lp(&m, &bank)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["level", "theta", "re", "im"]).map_err(LabError::from)?;
    for (n, lv) in levels.iter().enumerate() {
        for (i, z) in lv.values().iter().enumerate() {
            w.write_record([n.to_string(), lv.x(i).to_string(), z.re.to_string(), z.im.to_string()])
                .map_err(LabError::from)?;
        }
    }
    let body = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
    emit_csv(cfg, body, g)
}
