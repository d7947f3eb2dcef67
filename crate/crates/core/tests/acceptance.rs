//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::time::Instant;

use nalgebra::{Matrix2, Vector2, Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use neutral_geom::compactification::*;
use neutral_geom::exec::Exec;
use neutral_geom::intersection::*;
use neutral_geom::line_space::flow::{geodesic_flow, reeb_contract, reeb_flow};
use neutral_geom::line_space::hypersurface::{
    hypersurface_map, hypersurface_map_exact, null_direction_scan, omega_minus_field, omega_plus_field,
};
use neutral_geom::line_space::legendrian::{build_knot, LineChoice};
use neutral_geom::line_space::*;
use neutral_geom::spaceform::*;
use neutral_geom::tensor::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ellipsoid() -> SupportSurface {
    SupportSurface::ellipsoid(2.0, 1.5, 1.0)
}

fn random_state(r: &mut ChaCha8Rng) -> (Complex64, f64) {
    (Complex64::from_polar(r.random_range(0.0..1.5), r.random_range(0.0..TAU)), r.random_range(0.0..TAU))
}

fn c1_conformality() -> Outcome {
    let mut r = rng(1);
    let g = einstein_static_metric();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = Vector4::from_fn(|_, _| r.random_range(-10.0..10.0));
        let want = flat_neutral().at(&x).unwrap() * conformal_factor(&to_compact(&x)).powi(2);
        let got = pullback_metric(&compact_chart_map_near(x), &g, &x, 1e-4).unwrap();
        worst = worst.max((got - want).norm() / want.norm());
    }
    outcome(worst <= 1e-7, format!("max relative error {worst:.2e} over 1000 points (tol 1e-7)"))
}

fn c2_ricci() -> Outcome {
    let mut r = rng(2);
    let g = einstein_static_metric();
    let (mut worst, mut worst_s, mut worst_off) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = r.random_range(0.2..1.4);
        let q = r.random_range(-p + 0.1..p - 0.1);
        let x = Vector4::new(p, q, r.random_range(0.0..TAU), r.random_range(0.0..TAU));
        let ric = ricci(&g, &x, CURVATURE_STEP).unwrap();
        let want = [2.0, 2.0, (p + q).sin().powi(2), (p - q).sin().powi(2)];
        for i in 0..4 {
            worst = worst.max((ric[(i, i)] - want[i]).abs());
            for k in 0..4 {
                if k != i {
                    worst_off = worst_off.max(ric[(i, k)].abs());
                }
            }
        }
        worst_s = worst_s.max(scalar_curvature(&g, &x, CURVATURE_STEP).unwrap().abs());
    }
    outcome(
        worst <= 1e-4 && worst_off <= 1e-4 && worst_s <= 1e-4,
        format!("max component error {worst:.2e}, off-diagonal {worst_off:.2e}, |R| {worst_s:.2e} at 100 points (tol 1e-4)"),
    )
}

fn c3_boundary() -> Outcome {
    let mut r = rng(3);
    let g = einstein_static_metric();
    let mut sig_ok = true;
    for k in 1..200 {
        let q = -FRAC_PI_2 + PI * k as f64 / 200.0;
        let m =
            pullback_metric(&boundary_inclusion(), &g, &Vector3::new(q, r.random_range(0.0..TAU), r.random_range(0.0..TAU)), 1e-6).unwrap();
        let s = signature(&m, SIGNATURE_BAND);
        sig_ok &= rank(&m, 1e-10) == 2 && (s.zero, s.positive, s.negative) == (1, 1, 1);
    }
    let mut frob = 0.0f64;
    for _ in 0..100 {
        let (q, t1, t2) = (r.random_range(-1.5..1.5), r.random_range(0.0..TAU), r.random_range(0.0..TAU));
        for bp in boundary_null_planes(q, t1, t2).unwrap() {
            frob = frob.max(frobenius_defect(&bp.form, &Vector3::new(q, t1, t2), 1e-4).unwrap().abs());
        }
    }
    let n = 180;
    let zeros: Vec<usize> = (0..=n)
        .filter(|&k| {
            let q = if k == n { FRAC_PI_2 } else { -FRAC_PI_2 + PI * k as f64 / n as f64 };
            grad_omega_boundary_locus(&CompactChartPoint { p: FRAC_PI_2, q, theta1: 0.3, theta2: 1.1 }).unwrap() <= 1e-12
        })
        .collect();
    let locus_ok = zeros == vec![0, n];
    // Each locus is one circle: |z₁| = 0 on q = π/2 and |z₂| = 0 on q = −π/2, radius π/2.
    let mut circles_ok = true;
    for k in 0..16 {
        let t = TAU * k as f64 / 16.0;
        let a = to_ball(&CompactChartPoint { p: FRAC_PI_2, q: FRAC_PI_2, theta1: 0.7, theta2: t });
        let b = to_ball(&CompactChartPoint { p: FRAC_PI_2, q: -FRAC_PI_2, theta1: t, theta2: 0.7 });
        circles_ok &=
            a.z1.norm() < 1e-15 && b.z2.norm() < 1e-15 && (a.radius() - FRAC_PI_2).abs() < 1e-15 && (b.radius() - FRAC_PI_2).abs() < 1e-15;
    }
    let lk = hopf_linking_number(512);
    outcome(
        sig_ok && frob <= 1e-12 && locus_ok && circles_ok && (lk - 1.0).abs() <= 1e-3,
        format!(
            "rank 2 / (0,+,-): {sig_ok}; Frobenius {frob:.1e} (tol 1e-12); dΩ zeros at grid {zeros:?} of 0..={n}; two circles: {circles_ok}; linking {lk:.6}"
        ),
    )
}

fn c4_null_cone() -> Outcome {
    let mut r = rng(4);
    let flat = flat_neutral();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let f = null_cone_point(r.random_range(-10.0..10.0), r.random_range(0.0..TAU), r.random_range(0.0..TAU));
        worst = worst.max(metric_value(&flat, &Vector4::zeros(), &f, &f).unwrap().abs());
    }
    let mut flips = 0;
    let mut planes = 0;
    for _ in 0..20 {
        let (t1, t2) = (r.random_range(0.0..TAU), r.random_range(0.0..TAU));
        let base = Vector4::from_fn(|_, _| r.random_range(-1.0..1.0));
        for s in [1.0, -1.0] {
            let pl =
                TangentPlane::new(base, null_cone_point(1.0, t1, t2), null_cone_point(1.0, t1 + FRAC_PI_2, t2 + s * FRAC_PI_2)).unwrap();
            let k0 = classify_null_plane(&pl, &flat, &jplus_flat(), &jminus_flat(), 1e-9).unwrap();
            planes += 1;
            for _ in 0..100 {
                let m = loop {
                    let m = Matrix2::<f64>::from_fn(|_, _| r.random_range(-2.0..2.0));
                    if m.determinant().abs() > 0.05 {
                        break m;
                    }
                };
                let k = classify_null_plane(&pl.recombine(&m).unwrap(), &flat, &jplus_flat(), &jminus_flat(), 1e-9);
                if k != Ok(k0) || k0 == NullPlaneKind::NotTotallyNull {
                    flips += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-12 && flips == 0,
        format!("max |G(f,f)| {worst:.1e} over 10^4 (tol 1e-12); {flips} label changes over {planes} planes x 100 recombinations"),
    )
}

fn c5_flat_hypersurface() -> Outcome {
    let mut r = rng(5);
    let s = ellipsoid();
    let map = hypersurface_map(&s, None);
    let exact = hypersurface_map_exact(&s);
    let (mut worst, mut worst_det, mut worst_num_det, mut n) = (0.0f64, 0.0f64, 0.0f64, 0);
    while n < 1000 {
        let (nu, a) = random_state(&mut r);
        let jet = s.jet(nu).unwrap();
        if tangent_hypersurface_point(&jet, a, None).is_err() {
            continue;
        }
        let p = Vector3::new(nu.re, nu.im, a);
        let num = pullback_metric(&map, &metric_field_l(), &p, 1e-4).unwrap();
        let closed = induced_metric_h(&jet, a);
        worst = worst.max((num - closed).abs().max());
        let chain = pullback_metric(&exact, &metric_field_l(), &p, 1e-4).unwrap();
        worst_det = worst_det.max(chain.determinant().abs());
        worst_num_det = worst_num_det.max(num.determinant().abs());
        n += 1;
    }
    let mut scan_bad = 0;
    let grid = 1440;
    let tol = TAU / grid as f64;
    for _ in 0..100 {
        let (nu, a) = random_state(&mut r);
        let jet = s.jet(nu).unwrap();
        let na = null_direction_angles(&jet, a);
        let roots = null_direction_scan(&jet, a, grid);
        let want = [na.alpha, na.alpha + PI, na.beta, na.beta + PI];
        let close = |x: f64, y: f64| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d) <= tol
        };
        let matched = roots.len() == 4
            && want.iter().all(|w| roots.iter().any(|r| close(*r, *w)))
            && roots.iter().all(|r| want.iter().any(|w| close(*r, *w)));
        if !matched {
            scan_bad += 1;
        }
    }
    outcome(
        worst <= 1e-7 && worst_det <= 1e-10 && scan_bad == 0,
        format!("max |pullback - closed| {worst:.1e} (tol 1e-7); max |det| chain-rule pullback {worst_det:.1e} (tol 1e-10), differenced {worst_num_det:.1e}; B-scan mismatches {scan_bad}/100"),
    )
}

fn c6_contact() -> Outcome {
    let mut r = rng(6);
    let s = ellipsoid();
    let wp = omega_plus_field(&s);
    let wm = omega_minus_field();
    let (mut dp_err, mut dm_min, mut dm_max) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..200 {
        let (nu, a) = random_state(&mut r);
        let jet = s.jet(nu).unwrap();
        let p = Vector3::new(nu.re, nu.im, a);
        let closed = -2.0 * (jet.psi0 * jet.psi0 - jet.sigma0.norm_sqr()) / (1.0 + nu.norm_sqr()).powi(2);
        let dp = frobenius_defect(&wp, &p, 1e-3).unwrap() / 2.0;
        dp_err = dp_err.max((dp - closed).abs());
        let dm = frobenius_defect(&wm, &p, 1e-3).unwrap() / 2.0;
        dm_min = dm_min.min(dm);
        dm_max = dm_max.max(dm);
    }
    let (mut d3_err, mut d2_err) = (0.0f64, 0.0f64);
    let mut d3_seen = Vec::new();
    for k in 0..10 {
        let rho = 0.15 + 0.13 * k as f64;
        let sph = LatitudeSphere::new(SpaceFormSign::SPHERE, rho).unwrap();
        let q = Vector2::new(r.random_range(0.4..2.7), r.random_range(0.0..TAU));
        let th = r.random_range(0.0..TAU);
        let fr = sph.frame(&q).unwrap();
        let (d3, d2) = contact_defects_spaceform(&sph, &q, th, 1e-4).unwrap();
        d3_err = d3_err.max((d3 - 1.0).abs());
        d2_err = d2_err.max((d2 + fr.k1 * fr.k2).abs());
        d3_seen.push(d3);
    }
    let d3_mean = d3_seen.iter().sum::<f64>() / d3_seen.len() as f64;
    outcome(
        dp_err <= 1e-6 && dm_max - dm_min <= 1e-6 && d3_err <= 1e-6 && d2_err <= 1e-6,
        format!(
            "flat defect_plus error {dp_err:.1e}; defect_minus in [{dm_min:.9}, {dm_max:.9}]; space-form |defect3 - 1| {d3_err:.2e} (measured mean {d3_mean:.9}), |defect2 + k1k2| {d2_err:.1e} on 10 radii (tol 1e-6)"
        ),
    )
}

#[derive(Default)]
struct Triangle {
    cases: usize,
    violations: usize,
    rows: std::collections::BTreeSet<(bool, bool, bool)>,
}

impl Triangle {
    fn record(&mut self, beta: bool, normal: bool, curv: bool) {
        self.cases += 1;
        let n = [beta, normal, curv].iter().filter(|b| **b).count();
        if n == 2 {
            self.violations += 1;
        }
        self.rows.insert((beta, normal, curv));
    }
}

fn c7_legendrian() -> Outcome {
    let mut t = Triangle::default();
    let mut errors = 0;
    let e = ellipsoid();
    let sections: [fn(f64) -> Complex64; 2] = [|u| Complex64::new(u, 0.0), |u| Complex64::new(0.0, u)];
    let choices = [LineChoice::Tangent, LineChoice::Normal, LineChoice::Rotated(FRAC_PI_4), LineChoice::BetaLegendrian];
    let mut flat =
        |surface: &SupportSurface, k: neutral_geom::Result<LineKnot>| match k.and_then(|k| legendrian_classify(&k, surface, 1e-4)) {
            Ok(f) => t.record(f.beta, f.normal_to_c, f.curvature_line_or_umbilic),
            Err(_) => errors += 1,
        };
    for curve in sections {
        for choice in choices {
            flat(&e, build_knot(&e, curve, -0.8, 0.8, 400, false, choice));
        }
    }
    let generic = |u: f64| Complex64::new(0.3, 0.0) + Complex64::from_polar(0.2, u);
    for choice in [LineChoice::Tangent, LineChoice::Normal, LineChoice::BetaLegendrian, LineChoice::Rotated(1.0)] {
        flat(&e, build_knot(&e, generic, 0.0, TAU, 400, true, choice));
    }
    let sphere = SupportSurface::round_sphere(1.3, Vector3::new(0.2, 0.0, -0.1));
    for choice in [LineChoice::Tangent, LineChoice::Normal, LineChoice::Rotated(0.7)] {
        flat(&sphere, build_knot(&sphere, |u| Complex64::from_polar(0.6, u), 0.0, TAU, 300, true, choice));
    }

    let mut space = |k: neutral_geom::Result<Vec<SpaceFormKnotSample>>| match k.and_then(|k| legendrian_classify_spaceform(&k, 1e-4)) {
        Ok(f) => t.record(f.beta, f.normal_to_c, f.curvature_line_or_umbilic),
        Err(_) => errors += 1,
    };
    let sph = LatitudeSphere::new(SpaceFormSign::SPHERE, 0.9).unwrap();
    let radius = 0.9f64.sin();
    let offsets = [SpaceLineChoice::Offset(0.0), SpaceLineChoice::Offset(FRAC_PI_2), SpaceLineChoice::Offset(FRAC_PI_4)];
    for choice in offsets {
        space(patch_knot(&sph, |t| Vector2::new(1.0, t / (radius * 1.0f64.sin())), 0.0, 2.0, 1000, choice));
        space(patch_knot(&sph, |t| Vector2::new(FRAC_PI_2, t / radius), 0.0, 2.0, 1000, choice));
    }
    let torus = CliffordTorus::new(0.6).unwrap();
    let rr = 0.6f64;
    let c1 = 1.0 / (rr.cos().powi(2) + 4.0 * rr.sin().powi(2)).sqrt();
    for choice in [offsets[0], offsets[1]] {
        space(patch_knot(&torus, |t| Vector2::new(t / rr.cos(), 0.4), 0.0, TAU / 4.0, 1000, choice));
    }
    for choice in [offsets[0], offsets[1], offsets[2], SpaceLineChoice::Conjugate] {
        space(patch_knot(&torus, |t| Vector2::new(c1 * t, 2.0 * c1 * t), 0.0, TAU / 4.0, 1000, choice));
    }
    let all_rows = [(false, false, false), (true, false, false), (false, true, false), (false, false, true), (true, true, true)];
    let covered = all_rows.iter().all(|row| t.rows.contains(row));
    outcome(
        t.cases >= 12 && t.violations == 0 && errors == 0 && covered,
        format!(
            "{} knots, {} violations, {} classifier alarms, rows (beta, normal, curvature) seen {:?}",
            t.cases, t.violations, errors, t.rows
        ),
    )
}

fn c8_reeb() -> Outcome {
    let mut r = rng(8);
    let s = ellipsoid();
    let (mut w_err, mut d_err) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (nu, a) = random_state(&mut r);
        let (w, d) = reeb_contract(&s, FlowState::new(nu, a), 1e-3).unwrap();
        w_err = w_err.max((w - 1.0).abs());
        d_err = d_err.max(d);
    }
    let (mut ws_err, mut ds_err) = (0.0f64, 0.0f64);
    for k in 0..1000 {
        let sign = if k % 2 == 0 { SpaceFormSign::SPHERE } else { SpaceFormSign::HYPERBOLIC };
        let sph = LatitudeSphere::new(sign, r.random_range(0.3..1.3)).unwrap();
        let q = Vector2::new(r.random_range(0.4..2.7), r.random_range(0.0..TAU));
        let th = r.random_range(0.0..TAU);
        let x = reeb_field_spaceform(&sph.frame(&q).unwrap(), th).unwrap();
        let (w, d) = reeb_contract_spaceform(&sph, &q, th, &x, 1e-3).unwrap();
        ws_err = ws_err.max((w - 1.0).abs());
        ds_err = ds_err.max(d);
    }
    let (nu0, a0) = (Complex64::new(0.3, -0.2), 0.9);
    let reeb = reeb_flow(&s, FlowState::new(nu0, a0), 0.05, 200).unwrap();
    let geo = geodesic_flow(&s, FlowState::new(nu0, a0 - FRAC_PI_2), 0.05, 200).unwrap();
    let mut flow_err = 0.0f64;
    for (a, b) in reeb.iter().zip(&geo) {
        let da = (a.a - b.a - FRAC_PI_2).rem_euclid(TAU);
        flow_err = flow_err.max((a.nu - b.nu).norm()).max(da.min(TAU - da));
    }
    let horizon = reeb.last().unwrap().t;
    let mut geod = 0.0f64;
    for sign in [SpaceFormSign::SPHERE, SpaceFormSign::HYPERBOLIC] {
        for rho in [0.5, 0.9, 1.2] {
            let sph = LatitudeSphere::new(sign, rho).unwrap();
            let fr = sph.frame(&Vector2::new(1.0, 0.5)).unwrap();
            for smp in sph.reeb_flow(fr.phi, fr.v(0.6), 0.01, 300).unwrap().iter().step_by(10) {
                geod = geod.max(sph.reeb_geodesic_defect(&smp.phi, &smp.v, 1e-3));
            }
        }
    }
    outcome(
        w_err <= 1e-8 && d_err <= 1e-8 && ws_err <= 1e-8 && ds_err <= 1e-8 && flow_err <= 1e-6 && geod <= 1e-6,
        format!(
            "flat |w(X)-1| {w_err:.1e}, |dw(X,.)| {d_err:.1e}; space-form {ws_err:.1e}, {ds_err:.1e} (1000 states each); Reeb vs shifted geodesic {flow_err:.1e} over t = {horizon}; |nabla phi' phi'| {geod:.1e}"
        ),
    )
}

fn c9_classification() -> Outcome {
    let mut r = rng(9);
    let mut configs = Vec::new();
    let draw = |r: &mut ChaCha8Rng| {
        let r1: f64 = r.random_range(0.5..3.0);
        (r1, r1 * r.random_range(0.1..0.95))
    };
    for case in 0..4 {
        for _ in 0..40 {
            let (r1, r2) = draw(&mut r);
            let l = match case {
                0 => (r1 - r2) * r.random_range(0.0..0.99),
                1 => r1 - r2,
                2 => r.random_range(r1 - r2..r1 + r2) + 1e-6,
                _ => (r1 + r2) * r.random_range(1.01..2.5),
            };
            configs.push((r1, r2, l, false));
        }
    }
    for boundary in 0..2 {
        for k in 0..20 {
            let (r1, r2) = draw(&mut r);
            let delta = 10f64.powf(r.random_range(-11.0..-9.0)) * if k % 2 == 0 { 1.0 } else { -1.0 };
            let l = if boundary == 0 { r1 - r2 } else { r1 + r2 } + delta;
            configs.push((r1, r2, l, true));
        }
    }
    let mut disagree = Vec::new();
    let mut counts = std::collections::BTreeMap::new();
    let mut circle_ok = true;
    for &(r1, r2, l, near) in &configs {
        let c = IntersectionConfig::new(r1, r2, l).unwrap();
        let want = classify(&c);
        *counts.entry(format!("{want:?}")).or_insert(0) += 1;
        let bf = brute_force_intersection(&c, 64, Exec::default()).unwrap();
        if bf.case != Some(want) {
            disagree.push(format!("({r1:.4},{r2:.4},{l:.12}) near={near}: {want:?} vs {:?}", bf.case));
        }
        if want == IntersectionCase::Circle {
            circle_ok &= !bf.points.is_empty() && bf.points.iter().all(|p| (p.phi - FRAC_PI_2).abs() <= 1e-6);
            let thetas: std::collections::BTreeSet<u64> = bf.points.iter().map(|p| p.theta.to_bits()).collect();
            circle_ok &= thetas.len() == 64;
        }
    }
    outcome(
        disagree.is_empty() && circle_ok && counts.len() == 4,
        format!(
            "{} configs {:?}; disagreements {:?}; circle localized at phi = pi/2 over all theta: {circle_ok}",
            configs.len(),
            counts,
            disagree
        ),
    )
}

fn c10_torus_metric() -> Outcome {
    let mut r = rng(10);
    let mut closed_err = 0.0f64;
    for _ in 0..1000 {
        let r1: f64 = r.random_range(0.5..3.0);
        let r2 = r1 * r.random_range(0.1..0.95);
        let c = IntersectionConfig::new(r1, r2, r.random_range(0.05..8.0)).unwrap();
        let lo = ((r1 - r2) / c.l).min(1.0);
        let hi = ((r1 + r2) / c.l).min(1.0);
        if hi - lo < 1e-6 {
            continue;
        }
        let phi = (lo + (hi - lo) * r.random_range(0.01..0.99)).asin();
        for phi in [phi, PI - phi] {
            let (s2, lam) = sigma_lambda(&c, phi).unwrap();
            closed_err = closed_err.max((lam * lam - s2 - torus_det_closed(&c, phi)).abs());
        }
    }
    let configs = [(2.0, 1.0, 4.0), (1.5, 0.5, 3.0), (3.0, 2.0, 6.0), (1.0, 0.3, 2.5), (2.5, 2.0, 5.0)];
    let (mut num_err, mut lorentz_real) = (0.0f64, true);
    for (r1, r2, l) in configs {
        let c = IntersectionConfig::new(r1, r2, l).unwrap();
        let (lo, hi) = ((r1 - r2) / l, (r1 + r2) / l);
        for i in 0..20 {
            let phi = (lo + (hi - lo) * (i as f64 + 0.5) / 20.0).asin();
            for k in 0..20 {
                let th = TAU * k as f64 / 20.0;
                for br in [Branch::Plus, Branch::Minus] {
                    let m = torus_metric_check(&c, phi, th, br).unwrap();
                    num_err = num_err.max((m.det_numeric - m.det_closed).abs() / m.det_closed.abs());
                    lorentz_real &= !m.complex_point && m.det_numeric < 0.0 && m.det_closed < 0.0;
                }
            }
        }
    }
    let (s2, _) = sigma_lambda(&IntersectionConfig::new(2.0, 1.0, 2.0).unwrap(), FRAC_PI_2).unwrap();
    let m = torus_metric_check(&IntersectionConfig::new(2.0, 1.0, 2.0).unwrap(), FRAC_PI_2, 0.3, Branch::Plus).unwrap();
    outcome(
        closed_err <= 1e-10 && num_err <= 1e-6 && s2 == 0.0 && m.complex_point && lorentz_real,
        format!(
            "closed-form identity error {closed_err:.1e} (tol 1e-10); numeric det relative error {num_err:.1e} on 5 configs x 20x20 (tol 1e-6); |sigma|^2 at pi/2 = {s2}; totally real and Lorentz: {lorentz_real}"
        ),
    )
}

fn c11_parity() -> Outcome {
    let k3 = neutral_existence_parity(24, -16);
    let s4 = neutral_existence_parity(2, 0);
    let cp2 = neutral_existence_parity(3, 1);
    outcome(
        k3 == Parity::Admits && s4 == Parity::Obstructed && cp2 == Parity::Obstructed,
        format!("(24,-16) {k3:?}, (2,0) {s4:?}, (3,1) {cp2:?}"),
    )
}

/// Id, name, check, runtime limit in seconds.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<f64>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        (1, "conformality", c1_conformality, Some(5.0)),
        (2, "ricci", c2_ricci, Some(10.0)),
        (3, "boundary structure", c3_boundary, Some(5.0)),
        (4, "null-cone algebra", c4_null_cone, None),
        (5, "flat tangent hypersurface", c5_flat_hypersurface, None),
        (6, "contact", c6_contact, None),
        (7, "legendrian triangle", c7_legendrian, None),
        (8, "reeb contract", c8_reeb, None),
        (9, "intersection classification", c9_classification, Some(60.0)),
        (10, "torus metric", c10_torus_metric, None),
        (11, "parity", c11_parity, None),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (id, name, run, budget) in criteria {
        let t0 = Instant::now();
        let o = run();
        let secs = t0.elapsed().as_secs_f64();
        let in_time = budget.is_none_or(|b| secs <= b);
        let pass = o.pass && in_time;
        let limit = budget.map(|b| format!(", limit {b} s")).unwrap_or_default();
        println!("criterion {id:>2} {}: {name}: {} ({secs:.2} s{limit})", if pass { "PASS" } else { "FAIL" }, o.detail);
        if !pass {
            failed.push(id);
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!("suite time {total:.1} s (limit 180 s)");
    assert!(total <= 180.0, "acceptance suite exceeded 3 minutes");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
