use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use nalgebra::{Vector2, Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use neutral_geom::compactification::*;
use neutral_geom::exec::Exec;
use neutral_geom::intersection::*;
use neutral_geom::io::{read_knot_csv, write_knot_csv, write_point_cloud_csv, write_trajectory_csv};
use neutral_geom::line_space::flow::{geodesic_flow, reeb_contract, reeb_flow};
use neutral_geom::line_space::hypersurface::{
    hypersurface_map, hypersurface_map_exact, null_direction_scan, omega_minus_field, omega_plus_field,
};
use neutral_geom::line_space::legendrian::{build_knot, LineChoice};
use neutral_geom::line_space::*;
use neutral_geom::spaceform::*;
use neutral_geom::tensor::*;
use neutral_geom::GeomError;

use crate::report::RunReport;
use crate::{Command, Common, FlatPoint};

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

type CmdResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceArg {
    Ellipsoid(f64, f64, f64),
    Sphere(f64, [f64; 3]),
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

impl FromStr for SurfaceArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or("expected ellipsoid:a,b,c or sphere:rho[,cx,cy,cz]")?;
        let v = parse_list(rest)?;
        match (kind, v.as_slice()) {
            ("ellipsoid", &[a, b, c]) if a > 0.0 && b > 0.0 && c > 0.0 => Ok(Self::Ellipsoid(a, b, c)),
            ("sphere", &[r]) if r > 0.0 => Ok(Self::Sphere(r, [0.0; 3])),
            ("sphere", &[r, x, y, z]) if r > 0.0 => Ok(Self::Sphere(r, [x, y, z])),
            _ => Err(format!("bad surface {s:?}")),
        }
    }
}

impl SurfaceArg {
    fn build(&self) -> SupportSurface {
        match *self {
            Self::Ellipsoid(a, b, c) => SupportSurface::ellipsoid(a, b, c),
            Self::Sphere(r, c) => SupportSurface::round_sphere(r, Vector3::from(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveArg {
    PrincipalX,
    PrincipalY,
    Circle(f64, f64, f64),
}

impl FromStr for CurveArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "principal-x" => Ok(Self::PrincipalX),
            "principal-y" => Ok(Self::PrincipalY),
            _ => match s.split_once(':') {
                Some(("circle", rest)) => match parse_list(rest)?.as_slice() {
                    &[x, y, r] if r > 0.0 => Ok(Self::Circle(x, y, r)),
                    _ => Err(format!("bad circle {rest:?}")),
                },
                _ => Err(format!("unknown curve {s:?}")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceSurfaceArg {
    Latitude,
    Clifford,
}

impl FromStr for SpaceSurfaceArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "latitude" => Ok(Self::Latitude),
            "clifford" => Ok(Self::Clifford),
            _ => Err(format!("unknown surface {s:?}")),
        }
    }
}

fn parse_choice(s: &str) -> CmdResult<LineChoice> {
    Ok(match s {
        "tangent" => LineChoice::Tangent,
        "normal" => LineChoice::Normal,
        "beta" => LineChoice::BetaLegendrian,
        _ => match s.strip_prefix("rotated:").map(str::parse::<f64>) {
            Some(Ok(a)) => LineChoice::Rotated(a),
            _ => return Err(usage(format!("unknown line choice {s:?}"))),
        },
    })
}

struct Ctx<'a> {
    common: &'a Common,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.common.tol.unwrap_or(default)
    }

    fn grid(&self, default: usize) -> usize {
        self.common.grid.unwrap_or(default)
    }

    fn inputs(&self, specific: serde_json::Value) -> serde_json::Value {
        json!({
            "tol": self.common.tol,
            "seed": self.common.seed,
            "grid": self.common.grid,
            "out": self.common.out.as_ref().map(|p| p.display().to_string()),
            "args": specific,
        })
    }

    fn artifact<F>(&self, report: &mut RunReport, write: F) -> CmdResult<()>
    where
        F: FnOnce(BufWriter<File>) -> neutral_geom::Result<()>,
    {
        if let Some(path) = &self.common.out {
            write(BufWriter::new(File::create(path)?))?;
            report.artifacts.push(path.display().to_string());
        }
        Ok(())
    }
}

pub fn run(command: &Command, common: &Common) -> CmdResult<RunReport> {
    if let Some(t) = common.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(usage("--tol must be a finite non-negative number"));
        }
    }
    let mut cx = Ctx { common, rng: ChaCha8Rng::seed_from_u64(common.seed) };
    let mut report = match command {
        Command::Compactify { radius } => compactify(&mut cx, *radius),
        Command::Curvature { at } => curvature(&mut cx, at.as_deref()),
        Command::Linespace(p) => linespace(&mut cx, p),
        Command::Contact(p) => contact(&mut cx, p),
        Command::Legendrian { surface, curve, choice, input, closed } => {
            legendrian(&mut cx, surface, curve, choice, input.as_deref(), *closed)
        }
        Command::Reeb { point, dt, steps } => reeb(&mut cx, point, *dt, *steps),
        Command::Spaceform { sign, surface, rho, at, theta } => spaceform(&mut cx, sign, *surface, *rho, at.as_deref(), *theta),
        Command::Intersect { r1, r2, l } => intersect(&mut cx, *r1, *r2, *l),
        Command::Parity { chi, tau } => Ok(parity(&mut cx, *chi, *tau)),
    }?;
    if !common.no_timestamp {
        report.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    Ok(report)
}

fn compactify(cx: &mut Ctx, radius: f64) -> CmdResult<RunReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(usage("--radius must be positive"));
    }
    let n = cx.grid(1000);
    let mut report = RunReport::new("compactify", cx.inputs(json!({ "radius": radius })));
    let pts: Vec<Vector4<f64>> = (0..n).map(|_| Vector4::from_fn(|_, _| cx.rng.random_range(-radius..=radius))).collect();
    report.check_result("conformality_max_rel_error", 0.0, conformality_sweep(&pts, 1e-4, Exec::default()), cx.tol(1e-7));
    let (mut round_trip, mut max_r) = (0.0f64, 0.0f64);
    for x in &pts {
        let c = to_compact(x);
        max_r = max_r.max(to_ball(&c).radius());
        round_trip = round_trip.max(from_compact(&c).map_or(f64::NAN, |y| (y - x).norm() / (1.0 + x.norm())));
    }
    report.check("round_trip_max_rel_error", 0.0, round_trip, cx.tol(1e-10));
    report.check("ball_radius_excess", 0.0, (max_r - FRAC_PI_2).max(0.0), cx.tol(0.0));
    let g = einstein_static_metric();
    let mut bad = 0;
    for k in 1..100 {
        let q = -FRAC_PI_2 + PI * k as f64 / 100.0;
        let m = pullback_metric(&boundary_inclusion(), &g, &Vector3::new(q, 0.3, 1.1), 1e-6)?;
        let s = signature(&m, SIGNATURE_BAND);
        if rank(&m, 1e-10) != 2 || (s.zero, s.positive, s.negative) != (1, 1, 1) {
            bad += 1;
        }
    }
    report.check("boundary_signature_violations", 0.0, bad as f64, cx.tol(0.0));
    report.check("hopf_linking_number", 1.0, hopf_linking_number(512), cx.tol(1e-3));
    report.result("points", n);
    report.result("max_ball_radius", max_r);
    Ok(report)
}

fn curvature(cx: &mut Ctx, at: Option<&[f64]>) -> CmdResult<RunReport> {
    let x = match at {
        Some(&[p, q, t1, t2]) => Vector4::new(p, q, t1, t2),
        Some(_) => return Err(usage("--at takes four values p,q,theta1,theta2")),
        None => {
            let p = cx.rng.random_range(0.2..1.4);
            let q = cx.rng.random_range(-p + 0.1..p - 0.1);
            Vector4::new(p, q, cx.rng.random_range(0.0..TAU), cx.rng.random_range(0.0..TAU))
        }
    };
    let mut report = RunReport::new("curvature", cx.inputs(json!({ "at": [x[0], x[1], x[2], x[3]] })));
    let g = einstein_static_metric();
    let ric = ricci(&g, &x, CURVATURE_STEP)?;
    let (p, q) = (x[0], x[1]);
    let tol = cx.tol(1e-4);
    let want = [2.0, 2.0, (p + q).sin().powi(2), (p - q).sin().powi(2)];
    for (i, name) in ["R_pp", "R_qq", "R_t1t1", "R_t2t2"].iter().enumerate() {
        report.check(name, want[i], ric[(i, i)], tol);
    }
    let off = (0..4).flat_map(|i| (0..4).filter(move |&k| k != i).map(move |k| (i, k))).map(|(i, k)| ric[(i, k)].abs()).fold(0.0, f64::max);
    report.check("ricci_offdiag_max", 0.0, off, tol);
    report.check_result("scalar_curvature", 0.0, scalar_curvature(&g, &x, CURVATURE_STEP), tol);
    report.result("ricci_diagonal", [ric[(0, 0)], ric[(1, 1)], ric[(2, 2)], ric[(3, 3)]]);
    Ok(report)
}

fn flat_state(cx: &mut Ctx, p: &FlatPoint, radius: f64) -> CmdResult<(Complex64, f64)> {
    let nu = match p.nu.as_deref() {
        Some(&[re, im]) => Complex64::new(re, im),
        Some(_) => return Err(usage("--nu takes two values re,im")),
        None => Complex64::from_polar(cx.rng.random_range(0.0..radius), cx.rng.random_range(0.0..TAU)),
    };
    let a = match p.a {
        Some(a) => a,
        None => cx.rng.random_range(0.0..TAU),
    };
    Ok((nu, a))
}

fn flat_inputs(p: &FlatPoint, nu: Complex64, a: f64) -> serde_json::Value {
    json!({ "surface": p.surface.build().label(), "nu": [nu.re, nu.im], "a": a })
}

fn linespace(cx: &mut Ctx, p: &FlatPoint) -> CmdResult<RunReport> {
    let (nu, a) = flat_state(cx, p, 1.5)?;
    let s = p.surface.build();
    let jet = s.jet(nu)?;
    let line = tangent_hypersurface_point(&jet, a, None)?;
    let mut report = RunReport::new("linespace", cx.inputs(flat_inputs(p, nu, a)));
    let d = direction(line.xi);
    let foot = line_to_points(&line, 0.0);
    report.check("line_through_surface_point", 0.0, (jet.surface_point() - foot).cross(&d).norm(), cx.tol(1e-10));
    report.check("line_tangent_to_surface", 0.0, d.dot(&jet.normal()).abs(), cx.tol(1e-10));
    let closed = induced_metric_h(&jet, a);
    let num = pullback_metric(&hypersurface_map(&s, None), &metric_field_l(), &Vector3::new(nu.re, nu.im, a), 1e-4)?;
    report.check("induced_metric_max_error", 0.0, (num - closed).abs().max(), cx.tol(1e-7));
    let chain = pullback_metric(&hypersurface_map_exact(&s), &metric_field_l(), &Vector3::new(nu.re, nu.im, a), 1e-4)?;
    report.check("induced_metric_det", 0.0, chain.determinant(), cx.tol(1e-10));
    let grid = cx.grid(1440);
    if grid < 8 {
        return Err(usage("--grid must be at least 8"));
    }
    let roots = null_direction_scan(&jet, a, grid);
    let na = null_direction_angles(&jet, a);
    report.check("null_direction_count", 4.0, roots.len() as f64, cx.tol(0.0));
    let closest = |w: f64| {
        roots
            .iter()
            .map(|r| {
                let dd = (r - w).rem_euclid(TAU);
                dd.min(TAU - dd)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let err = [na.alpha, na.alpha + PI, na.beta, na.beta + PI].into_iter().map(closest).fold(0.0, f64::max);
    report.check("null_direction_scan_error", 0.0, err, cx.tol(TAU / grid as f64));
    report.result("line", line);
    report.result("null_angles", na);
    report.result("induced_metric", closed.row_iter().map(|r| [r[0], r[1], r[2]]).collect::<Vec<_>>());
    Ok(report)
}

fn contact(cx: &mut Ctx, p: &FlatPoint) -> CmdResult<RunReport> {
    let (nu, a) = flat_state(cx, p, 1.5)?;
    let s = p.surface.build();
    let jet = s.jet(nu)?;
    let forms = contact_forms_h(&jet, a);
    let mut report = RunReport::new("contact", cx.inputs(flat_inputs(p, nu, a)));
    let q = Vector3::new(nu.re, nu.im, a);
    let tol = cx.tol(1e-6);
    report.check_result("defect_plus", forms.defect_plus, frobenius_defect(&omega_plus_field(&s), &q, 1e-3).map(|d| d / 2.0), tol);
    report.check_result("defect_minus", forms.defect_minus, frobenius_defect(&omega_minus_field(), &q, 1e-3).map(|d| d / 2.0), tol);
    report.result("contact_forms", forms);
    Ok(report)
}

fn legendrian(
    cx: &mut Ctx,
    surface: &SurfaceArg,
    curve: &CurveArg,
    choice: &str,
    input: Option<&Path>,
    closed: bool,
) -> CmdResult<RunReport> {
    let s = surface.build();
    let n = cx.grid(400);
    let knot = match input {
        Some(path) => read_knot_csv(File::open(path)?, closed)?,
        None => {
            let c = parse_choice(choice)?;
            match *curve {
                CurveArg::PrincipalX => build_knot(&s, |u| Complex64::new(u, 0.0), -0.8, 0.8, n, false, c)?,
                CurveArg::PrincipalY => build_knot(&s, |u| Complex64::new(0.0, u), -0.8, 0.8, n, false, c)?,
                CurveArg::Circle(x, y, r) => build_knot(&s, |u| Complex64::new(x, y) + Complex64::from_polar(r, u), 0.0, TAU, n, true, c)?,
            }
        }
    };
    let args = json!({
        "surface": s.label(),
        "curve": input.is_none().then(|| format!("{curve:?}")),
        "choice": input.is_none().then_some(choice),
        "input": input.map(|p| p.display().to_string()),
        "closed": knot.is_closed(),
        "samples": knot.samples().len(),
    });
    let mut report = RunReport::new("legendrian", cx.inputs(args));
    let flags = legendrian_classify(&knot, &s, 1e-4)?;
    let row = [flags.beta, flags.normal_to_c, flags.curvature_line_or_umbilic];
    let violations = (row.iter().filter(|b| **b).count() == 2) as u8;
    report.check("triangle_violations", 0.0, violations as f64, cx.tol(0.0));
    report.result("flags", flags);
    cx.artifact(&mut report, |w| write_knot_csv(w, &knot))?;
    Ok(report)
}

fn reeb(cx: &mut Ctx, p: &FlatPoint, dt: f64, steps: usize) -> CmdResult<RunReport> {
    if !(dt > 0.0 && dt.is_finite()) || steps == 0 {
        return Err(usage("--dt must be positive and --steps at least 1"));
    }
    let (nu, a) = flat_state(cx, p, 0.5)?;
    let s = p.surface.build();
    let mut args = flat_inputs(p, nu, a);
    args["dt"] = json!(dt);
    args["steps"] = json!(steps);
    let mut report = RunReport::new("reeb", cx.inputs(args));
    let (w, iota) = reeb_contract(&s, FlowState::new(nu, a), 1e-3)?;
    report.check("omega_plus_of_x", 1.0, w, cx.tol(1e-8));
    report.check("contraction_d_omega_plus", 0.0, iota, cx.tol(1e-8));
    let r = reeb_flow(&s, FlowState::new(nu, a), dt, steps)?;
    let g = geodesic_flow(&s, FlowState::new(nu, a - FRAC_PI_2), dt, steps)?;
    let err = r.iter().zip(&g).fold(0.0f64, |m, (x, y)| {
        let da = (x.a - y.a - FRAC_PI_2).rem_euclid(TAU);
        m.max((x.nu - y.nu).norm()).max(da.min(TAU - da))
    });
    report.check("reeb_vs_shifted_geodesic", 0.0, err, cx.tol(1e-6));
    let last = r.last().expect("steps ≥ 1");
    report.result("final_state", json!({ "t": last.t, "nu": [last.nu.re, last.nu.im], "a": last.a }));
    cx.artifact(&mut report, |w| write_trajectory_csv(w, &r))?;
    Ok(report)
}

fn spaceform(cx: &mut Ctx, sign: &str, surface: SpaceSurfaceArg, rho: f64, at: Option<&[f64]>, theta: Option<f64>) -> CmdResult<RunReport> {
    let sign = match sign {
        "sphere" => SpaceFormSign::SPHERE,
        "hyperbolic" => SpaceFormSign::HYPERBOLIC,
        _ => return Err(usage(format!("unknown sign {sign:?}; use sphere or hyperbolic"))),
    };
    let s = match at {
        Some(&[a, b]) => Vector2::new(a, b),
        Some(_) => return Err(usage("--at takes two values s1,s2")),
        None => match surface {
            SpaceSurfaceArg::Latitude => Vector2::new(cx.rng.random_range(0.4..2.7), cx.rng.random_range(0.0..TAU)),
            SpaceSurfaceArg::Clifford => Vector2::new(cx.rng.random_range(0.0..TAU), cx.rng.random_range(0.0..TAU)),
        },
    };
    let theta = theta.unwrap_or_else(|| cx.rng.random_range(0.0..TAU));
    let args =
        json!({ "sign": sign.eps(), "surface": format!("{surface:?}").to_lowercase(), "rho": rho, "at": [s[0], s[1]], "theta": theta });
    let mut report = RunReport::new("spaceform", cx.inputs(args));
    match surface {
        SpaceSurfaceArg::Latitude => spaceform_checks(cx, &mut report, &LatitudeSphere::new(sign, rho)?, &s, theta)?,
        SpaceSurfaceArg::Clifford => {
            if sign != SpaceFormSign::SPHERE {
                return Err(usage("the Clifford torus lives in S³; use --sign sphere"));
            }
            spaceform_checks(cx, &mut report, &CliffordTorus::new(rho)?, &s, theta)?
        }
    }
    Ok(report)
}

fn spaceform_checks<P: SurfacePatch + Clone + 'static>(
    cx: &Ctx,
    report: &mut RunReport,
    patch: &P,
    s: &Vector2<f64>,
    theta: f64,
) -> CmdResult<()> {
    let fr = patch.frame(s)?;
    let flag = fr.flag(theta)?;
    let eps = patch.sign().eps();
    let basis = flag.tangent_basis()?;
    let jj = basis.iter().try_fold(0.0f64, |m, u| -> CmdResult<f64> { Ok(m.max((flag.j(&flag.j(u)?)? + *u * eps).norm())) })?;
    report.check("j_squared_residual", 0.0, jj, cx.tol(1e-10));
    let sig = signature(&flag.gram(&basis)?, SIGNATURE_BAND);
    report.check("g_eps_positive", 2.0, sig.positive as f64, cx.tol(0.0));
    report.check("g_eps_negative", 2.0, sig.negative as f64, cx.tol(0.0));
    let (pp, pm) = null_planes_spaceform(&fr, theta);
    let mut null = 0.0f64;
    for plane in [pp, pm] {
        for a in &plane {
            for b in &plane {
                null = null.max(flag.g_eps(a, b)?.abs());
            }
        }
    }
    report.check("null_planes_max_g", 0.0, null, cx.tol(1e-10));
    let convex = contact_defects_closed(&fr);
    report.result("convex", convex.is_ok());
    if let Ok((c3, c2)) = convex {
        let (d3, d2) = contact_defects_spaceform(patch, s, theta, 1e-4)?;
        report.check("defect3", c3, d3, cx.tol(1e-6));
        report.check("defect2", c2, d2, cx.tol(1e-6));
        let x = reeb_field_spaceform(&fr, theta)?;
        let (w, iota) = reeb_contract_spaceform(patch, s, theta, &x, 1e-3)?;
        report.check("eta3_of_reeb", 1.0, w, cx.tol(1e-8));
        report.check("contraction_d_eta3", 0.0, iota, cx.tol(1e-8));
    }
    report.result("flag", flag);
    report.result("principal_curvatures", [fr.k1, fr.k2]);
    Ok(())
}

fn intersect(cx: &mut Ctx, r1: f64, r2: f64, l: f64) -> CmdResult<RunReport> {
    let cfg = IntersectionConfig::new(r1, r2, l)?;
    let grid = cx.grid(64);
    let mut report = RunReport::new("intersect", cx.inputs(json!({ "r1": r1, "r2": r2, "l": l })));
    let case = classify(&cfg);
    let bf = brute_force_intersection(&cfg, grid, Exec::default())?;
    report.check("brute_force_agrees", 1.0, (bf.case == Some(case)) as u8 as f64, cx.tol(0.0));
    let tangency = bf.points.iter().fold(0.0f64, |m, p| {
        let (a, b) = tangency_residuals(&cfg, &p.line);
        m.max(a.abs()).max(b.abs())
    });
    report.check("brute_force_tangency_max_residual", 0.0, tangency, cx.tol(ROOT_TOL * (r1 + r2)));
    let closed_tangency = |tan: &mut f64, phi: f64, theta: f64, br: Branch| -> CmdResult<()> {
        let (a, b) = tangency_residuals(&cfg, &torus_point(&cfg, phi, theta, br)?.line);
        *tan = tan.max(a.abs()).max(b.abs());
        Ok(())
    };
    let mut tan = 0.0f64;
    match case {
        IntersectionCase::Torus | IntersectionCase::TwoTori => {
            let lo = ((r1 - r2) / l).min(1.0);
            let hi = ((r1 + r2) / l).min(1.0);
            let mut err = 0.0f64;
            for i in 0..8 {
                let phi = (lo + (hi - lo) * (i as f64 + 0.5) / 8.0).asin();
                for phi in [phi, PI - phi] {
                    for k in 0..4 {
                        let theta = TAU * k as f64 / 4.0;
                        for br in [Branch::Plus, Branch::Minus] {
                            let m = torus_metric_check(&cfg, phi, theta, br)?;
                            err = err.max((m.det_numeric - m.det_closed).abs() / m.det_closed.abs());
                            closed_tangency(&mut tan, phi, theta, br)?;
                        }
                    }
                }
            }
            report.check("det_formula_max_rel_error", 0.0, err, cx.tol(1e-6));
            report.check("tangency_max_residual", 0.0, tan, cx.tol(1e-10));
        }
        IntersectionCase::Circle => {
            let off = bf.points.iter().fold(0.0f64, |m, p| m.max((p.phi - FRAC_PI_2).abs()));
            report.check("circle_phi_offset", 0.0, off, cx.tol(1e-6));
            for k in 0..16 {
                closed_tangency(&mut tan, FRAC_PI_2, TAU * k as f64 / 16.0, Branch::Plus)?;
            }
            report.check("tangency_max_residual", 0.0, tan, cx.tol(1e-10));
        }
        IntersectionCase::Empty => {}
    }
    report.result("case", case);
    report.result("components", bf.components);
    report.result("points", bf.points.len());
    report.result("k_range", k_range(&cfg, &bf.rows));
    cx.artifact(&mut report, |w| write_point_cloud_csv(w, &bf.points))?;
    Ok(report)
}

fn parity(cx: &mut Ctx, chi: i64, tau: i64) -> RunReport {
    let mut report = RunReport::new("parity", cx.inputs(json!({ "chi": chi, "tau": tau })));
    report.result("verdict", neutral_existence_parity(chi, tau));
    report
}
