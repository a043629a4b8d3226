use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use biflab::curves::{curve_m1, h0_mu1, nontwist_m2_roots, pullback_curve, CurveId};
use biflab::orbit::{
    find_orbits_in_box, find_reversible_orbits, scan_bifurcations, PeriodicOrbit, ScanConfig, SeedBox, SymmetryLine,
};
use biflab::portrait::{sample, write_csv, PortraitSpec, Seeds};
use biflab::resonance::{
    classify_resonant_point, flow_equilibria, flow_l3_locator, resonance_coefficients, FlowNF,
};
use biflab::return_map::{conjugated_return, unfold_params};
use biflab::{CubicHenonMap, PlanePoint};
use serde::Serialize;

use crate::model::ModelConfig;
use crate::range::{parse_point, Range};
use crate::{CliError, CurvesArgs, FlowArgs, OrbitsArgs, PortraitArgs, RescaleArgs, ResonanceArgs, ScanArgs, Variant};

type Out = csv::Writer<Box<dyn Write>>;

fn open(path: Option<&Path>) -> Result<Out, CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Failure(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Failure(e.to_string())
}

fn row(out: &mut Out, fields: &[String]) -> Result<(), CliError> {
    out.write_record(fields).map_err(csv_err)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn branch(v: f64) -> String {
    if v < 0.0 { "-" } else { "+" }.to_string()
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn curves(a: &CurvesArgs) -> Result<(), CliError> {
    let nu = a.nu.or(a.sign);
    let mut ids = Vec::new();
    for tag in &a.curves {
        let id = if tag.eq_ignore_ascii_case("h0") {
            let id = CurveId::H0 { d: a.d };
            id.validate().map_err(|e| usage(format!("--d: {e}")))?;
            id
        } else {
            CurveId::parse(tag, nu, a.index, a.phi).map_err(|e| usage(format!("--curve {tag}: {e}")))?
        };
        ids.push(id);
    }
    let is_h0 = |id: &CurveId| matches!(id, CurveId::H0 { .. });
    let mu_plane = a.model.is_some() || ids.iter().all(is_h0);
    if ids.iter().any(is_h0) && !ids.iter().all(is_h0) {
        return Err(usage("--curve H0 cannot be mixed with (M1, M2) curves"));
    }
    let mut out = open(a.output.as_deref())?;
    let coords = if mu_plane { ["mu1", "mu2"] } else { ["m1", "m2"] };
    row(&mut out, &["curve_tag".into(), "nu".into(), "branch".into(), coords[0].into(), coords[1].into()])?;

    let model = match &a.model {
        Some(p) => Some(ModelConfig::load(p)?.build()?),
        None => None,
    };
    for id in ids {
        let nu_col = id.nu().map(|s| s.to_string()).unwrap_or_default();
        if let CurveId::H0 { d } = id {
            let mu2 = a.mu2.ok_or_else(|| usage("--curve H0 needs --mu2"))?;
            for m in mu2.values() {
                for v in h0_mu1(m, d)? {
                    row(&mut out, &[id.tag(), nu_col.clone(), branch(v), num(v), num(m)])?;
                }
            }
            continue;
        }
        if let (CurveId::NonTwist { nu }, Some(m1)) = (id, a.m1) {
            for (i, m2) in nontwist_m2_roots(nu, m1).into_iter().enumerate() {
                row(&mut out, &[id.tag(), nu_col.clone(), (i + 1).to_string(), num(m1), num(m2)])?;
            }
            continue;
        }
        let m2s = a.m2.ok_or_else(|| usage(format!("--curve {}: --m2 is required", id.tag())))?.values();
        if let Some(model) = &model {
            let k = a.k.ok_or_else(|| usage("--model needs --k"))?;
            pullback_curve(id, model, k, &[]).map_err(|e| usage(format!("--k {k}: {e}")))?;
            for &m2 in &m2s {
                for m1 in curve_m1(id, m2)? {
                    let (mu1, mu2) = unfold_params(model, k, m1, m2);
                    row(&mut out, &[id.tag(), nu_col.clone(), branch(m1), num(mu1), num(mu2)])?;
                }
            }
        } else {
            for &m2 in &m2s {
                for m1 in curve_m1(id, m2)? {
                    row(&mut out, &[id.tag(), nu_col.clone(), branch(m1), num(m1), num(m2)])?;
                }
            }
        }
    }
    out.flush().map_err(|e| CliError::Failure(e.to_string()))
}

pub fn scan(a: &ScanArgs) -> Result<(), CliError> {
    let (name, scanned, fixed) = match (a.m1.is_single(), a.m2.is_single()) {
        (true, false) => ("m2", a.m2, a.m1.start),
        (false, true) => ("m1", a.m1, a.m2.start),
        (true, true) => return Err(usage("one of --m1/--m2 must be a range start:end:count")),
        (false, false) => return Err(usage("only one of --m1/--m2 may be a range")),
    };
    let nu = a.nu;
    let steps = scanned.count.max(2);
    let mut cfg = ScanConfig::new(a.period, (scanned.start, scanned.end), steps);
    if a.symmetric {
        cfg = cfg.symmetric();
    }
    if let Some(r) = a.seed_radius {
        if !(r > 0.0) {
            return Err(usage("--seed-radius must be positive"));
        }
        cfg = cfg.with_seed_box(SeedBox::square(r, a.seed_grid));
    }
    cfg.validate()?;
    let mut out = open(a.output.as_deref())?;
    let header = ["parameter", "value", "kind", "period", "x", "y", "trace_before", "trace_after"];
    row(&mut out, &header.map(String::from))?;
    if scanned.count == 0 {
        return out.flush().map_err(|e| CliError::Failure(e.to_string()));
    }
    let report = if name == "m1" {
        scan_bifurcations(move |m1| CubicHenonMap::new(nu, m1, fixed), &cfg)?
    } else {
        scan_bifurcations(move |m2| CubicHenonMap::new(nu, fixed, m2), &cfg)?
    };
    let trace = |o: &Option<PeriodicOrbit>| o.as_ref().map(|o| num(o.trace)).unwrap_or_default();
    for e in &report.events {
        let anchor = e
            .orbit_before
            .as_ref()
            .or(e.orbit_after.as_ref())
            .map(|o| o.anchor())
            .unwrap_or(PlanePoint::new(f64::NAN, f64::NAN));
        row(
            &mut out,
            &[
                name.into(),
                num(e.parameter_value),
                e.kind.name().into(),
                e.period.to_string(),
                num(anchor.x),
                num(anchor.y),
                trace(&e.orbit_before),
                trace(&e.orbit_after),
            ],
        )?;
    }
    out.flush().map_err(|e| CliError::Failure(e.to_string()))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.warnings.is_empty() {
        return Err(CliError::Failure(format!("{} branch(es) lost during the scan", report.warnings.len())));
    }
    Ok(())
}

pub fn rescale(a: &RescaleArgs) -> Result<(), CliError> {
    let cfg = ModelConfig::load(&a.model)?;
    let base = cfg.build()?;
    if a.k.start == 0 {
        return Err(usage("--k must start at 1 or later"));
    }
    if !(a.half_width > 0.0) || a.grid == 0 {
        return Err(usage("--box must be positive and --grid at least 1"));
    }
    let hold = match (a.m1, a.m2) {
        (Some(m1), Some(m2)) => Some((m1, m2)),
        _ if cfg.has_mu() => None,
        _ => return Err(usage("the model has no mu1/mu2; pass --m1 and --m2")),
    };
    let mut out = open(a.output.as_deref())?;
    row(&mut out, &["k", "sup_error", "m1", "m2", "nu"].map(String::from))?;
    for k in a.k.start..=a.k.end {
        let model = match hold {
            Some((m1, m2)) => base.with_rescaled(k, m1, m2),
            None => base,
        };
        let r = conjugated_return(&model, k)?;
        let err = r.sup_error(a.half_width, a.grid)?;
        row(&mut out, &[k.to_string(), num(err), num(r.m1), num(r.m2), r.nu.to_string()])?;
    }
    out.flush().map_err(|e| CliError::Failure(e.to_string()))
}

#[derive(Serialize)]
struct ResonanceReport {
    nu: i32,
    m2: f64,
    b1: f64,
    b03: f64,
    a_ratio: Option<f64>,
    degeneracy: String,
    classification: String,
    m1_on_curve: Vec<f64>,
}

pub fn resonance(a: &ResonanceArgs) -> Result<(), CliError> {
    if !a.m2.is_finite() {
        return Err(usage("--m2 must be finite"));
    }
    let d = resonance_coefficients(a.nu, a.m2);
    let r = ResonanceReport {
        nu: a.nu.as_i32(),
        m2: a.m2,
        b1: d.b1,
        b03: d.b03,
        a_ratio: d.a_ratio.is_finite().then_some(d.a_ratio),
        degeneracy: format!("{:?}", d.degeneracy),
        classification: format!("{:?}", classify_resonant_point(a.nu, a.m2)),
        m1_on_curve: curve_m1(CurveId::LPiHalf { nu: a.nu }, a.m2)?,
    };
    let mut stdout = io::stdout().lock();
    let text = if a.json {
        serde_json::to_string_pretty(&r).map_err(|e| CliError::Failure(e.to_string()))? + "\n"
    } else {
        let m1s: Vec<String> = r.m1_on_curve.iter().map(|v| num(*v)).collect();
        format!(
            "nu = {}\nm2 = {}\nb1 = {}\nb03 = {}\na_ratio = {}\ndegeneracy = {}\nclassification = {}\nm1_on_curve = {}\n",
            a.nu,
            num(r.m2),
            num(r.b1),
            num(r.b03),
            r.a_ratio.map(num).unwrap_or_else(|| "inf".into()),
            r.degeneracy,
            r.classification,
            m1s.join(" ")
        )
    };
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()))
}

pub fn flow(a: &FlowArgs) -> Result<(), CliError> {
    let nf = match a.variant {
        Variant::Eq11 => FlowNF::eq11(a.beta, a.mu, a.b1, a.b2, a.c.unwrap_or(0.0))?,
        Variant::Eq12 => FlowNF::eq12(a.beta, a.mu, a.b2, a.c.unwrap_or(0.5))?,
    };
    let mut out = open(a.output.as_deref())?;
    if let Some(spec) = &a.parabolic_mu {
        let (lo, hi) = spec
            .split_once(':')
            .and_then(|(l, h)| Some((l.parse::<f64>().ok()?, h.parse::<f64>().ok()?)))
            .ok_or_else(|| usage(format!("--parabolic-mu '{spec}' is not of the form lo:hi")))?;
        row(&mut out, &["mu".to_string()])?;
        for mu in flow_l3_locator(&nf, a.beta, (lo, hi))? {
            row(&mut out, &[num(mu)])?;
        }
    } else {
        row(&mut out, &["x", "y", "kind", "symmetry_line"].map(String::from))?;
        for e in flow_equilibria(&nf, a.radius)? {
            let line = e.on_symmetry_line.map(|l| format!("{l:?}").to_lowercase()).unwrap_or_default();
            let kind = format!("{:?}", e.kind).to_lowercase();
            row(&mut out, &[num(e.position.x), num(e.position.y), kind, line])?;
        }
    }
    out.flush().map_err(|e| CliError::Failure(e.to_string()))
}

fn grid_seeds(gx: Range, gy: Range) -> Seeds {
    Seeds::Grid { x: (gx.start, gx.end), y: (gy.start, gy.end), nx: gx.count, ny: gy.count }
}

pub fn portrait(a: &PortraitArgs) -> Result<(), CliError> {
    let map = CubicHenonMap::new(a.nu, a.m1, a.m2);
    let seeds = match (a.grid_x, a.grid_y) {
        (Some(gx), Some(gy)) if a.seeds.is_empty() => grid_seeds(gx, gy),
        (None, None) if !a.seeds.is_empty() => {
            let pts = a
                .seeds
                .iter()
                .map(|s| parse_point(s).map(|(x, y)| PlanePoint::new(x, y)).map_err(|e| usage(format!("--seed: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Seeds::List(pts)
        }
        (None, None) => return Err(usage("give --seed x,y or --grid-x/--grid-y")),
        _ => return Err(usage("--seed cannot be combined with a seed grid")),
    };
    let spec = PortraitSpec { map, seeds, iterations: a.iterations, escape_radius: a.escape_radius };
    let port = sample(&spec)?;
    if let Some(p) = &a.csv {
        biflab::portrait::export_csv(&port, p)?;
    }
    if let Some(p) = &a.svg {
        biflab::portrait::export_svg(&port, p)?;
    }
    if a.csv.is_none() && a.svg.is_none() {
        write_csv(&port, io::stdout().lock()).map_err(csv_err)?;
    }
    let escaped = port.orbits.iter().filter(|o| o.escaped).count();
    if escaped > 0 {
        eprintln!("{escaped} of {} seeds escaped", port.orbits.len());
    }
    Ok(())
}

pub fn orbits(a: &OrbitsArgs) -> Result<(), CliError> {
    if a.period == 0 {
        return Err(usage("--period must be at least 1"));
    }
    if !(a.radius > 0.0) || a.grid == 0 {
        return Err(usage("--radius must be positive and --grid at least 1"));
    }
    let map = CubicHenonMap::new(a.nu, a.m1, a.m2);
    let found: Vec<PeriodicOrbit> = if a.symmetric {
        let mut all: Vec<PeriodicOrbit> = Vec::new();
        for line in SymmetryLine::ALL {
            for o in find_reversible_orbits(&map, a.period, (-a.radius, a.radius), line)? {
                if o.period() == a.period && !all.iter().any(|u| u.same_as(&o, 1e-8 * (1.0 + o.anchor().norm()))) {
                    all.push(o);
                }
            }
        }
        all.sort_by(|p, q| p.anchor().x.total_cmp(&q.anchor().x).then(p.anchor().y.total_cmp(&q.anchor().y)));
        all
    } else {
        find_orbits_in_box(&map, a.period, &SeedBox::square(a.radius, a.grid))
    };
    let mut out = open(a.output.as_deref())?;
    let header = ["orbit", "period", "stability", "trace", "rotation_angle", "symmetric", "reversible", "index", "x", "y"];
    row(&mut out, &header.map(String::from))?;
    for (i, o) in found.iter().enumerate() {
        for (j, p) in o.points.iter().enumerate() {
            row(
                &mut out,
                &[
                    i.to_string(),
                    o.period().to_string(),
                    o.stability.name().into(),
                    num(o.trace),
                    o.rotation_angle.map(num).unwrap_or_default(),
                    o.symmetric.to_string(),
                    o.reversible.to_string(),
                    j.to_string(),
                    num(p.x),
                    num(p.y),
                ],
            )?;
        }
    }
    out.flush().map_err(|e| CliError::Failure(e.to_string()))
}
