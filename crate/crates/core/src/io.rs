//! CSV artifacts: knots, flow trajectories and torus point clouds.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::intersection::{Branch, TorusSample};
use crate::line_space::{FlowSample, KnotSample, LineKnot};

#[derive(Serialize, Deserialize)]
struct KnotRow {
    u: f64,
    re_nu: f64,
    im_nu: f64,
    a: f64,
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    re_nu: f64,
    im_nu: f64,
    a: f64,
}

#[derive(Serialize)]
struct CloudRow {
    phi: f64,
    theta: f64,
    branch: Branch,
    re_xi: f64,
    im_xi: f64,
    re_eta: f64,
    im_eta: f64,
}

fn flush<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner().map_err(|e| GeomError::Csv(e.to_string()))?.flush().map_err(|e| GeomError::Csv(e.to_string()))
}

/// Columns u, re_nu, im_nu, a.
pub fn write_knot_csv<W: Write>(out: W, knot: &LineKnot) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in knot.samples() {
        w.serialize(KnotRow { u: s.u, re_nu: s.nu.re, im_nu: s.nu.im, a: s.a })?;
    }
    flush(w)
}

pub fn read_knot_csv<R: Read>(input: R, closed: bool) -> Result<LineKnot> {
    let mut r = csv::Reader::from_reader(input);
    let samples = r
        .deserialize::<KnotRow>()
        .map(|row| row.map(|k| KnotSample { u: k.u, nu: Complex64::new(k.re_nu, k.im_nu), a: k.a }))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    LineKnot::new(samples, closed)
}

/// Columns t, re_nu, im_nu, a.
pub fn write_trajectory_csv<W: Write>(out: W, traj: &[FlowSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in traj {
        w.serialize(TrajectoryRow { t: s.t, re_nu: s.nu.re, im_nu: s.nu.im, a: s.a })?;
    }
    flush(w)
}

/// Columns phi, theta, branch, re_xi, im_xi, re_eta, im_eta.
pub fn write_point_cloud_csv<W: Write>(out: W, points: &[TorusSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(CloudRow {
            phi: p.phi,
            theta: p.theta,
            branch: p.branch,
            re_xi: p.line.xi.re,
            im_xi: p.line.xi.im,
            re_eta: p.line.eta.re,
            im_eta: p.line.eta.im,
        })?;
    }
    flush(w)
}
