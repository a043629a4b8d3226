use rayon::prelude::*;
use serde::Serialize;

use super::newton::newton_point;
use super::symmetric::{closes, newton_on_line};
use super::{
    find_orbits_in_box, find_reversible_orbits, fixed_points, minimal_period, PeriodicOrbit, SeedBox, SymmetryLine,
};
use crate::error::{Error, Result};
use crate::maps::{CubicHenonMap, PlanarMap, PlanePoint};

/// Parameter resolution of event localization.
const PARAM_TOL: f64 = 1e-11;
/// Largest state displacement accepted between neighbouring continuation steps.
const JUMP_GUARD: f64 = 0.5;
/// Smallest step, relative to the nominal one, still retried after landing on another branch.
const MIN_RETRY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EventKind {
    Fold,
    PeriodDoubling,
    Pitchfork,
    ResonanceOneThree,
    ResonanceOneFour,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Fold => "fold",
            EventKind::PeriodDoubling => "period-doubling",
            EventKind::Pitchfork => "pitchfork",
            EventKind::ResonanceOneThree => "resonance-1:3",
            EventKind::ResonanceOneFour => "resonance-1:4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationEvent {
    pub parameter_value: f64,
    pub kind: EventKind,
    /// Period of the tracked orbit that undergoes the event.
    pub period: usize,
    /// Orbit just below the event parameter, when it exists there.
    pub orbit_before: Option<PeriodicOrbit>,
    /// Orbit just above the event parameter, when it exists there.
    pub orbit_after: Option<PeriodicOrbit>,
}

impl BifurcationEvent {
    fn orbit(&self) -> &PeriodicOrbit {
        self.orbit_before.as_ref().or(self.orbit_after.as_ref()).expect("event carries an orbit")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tracking {
    /// Every orbit of the requested period, continued by two-dimensional Newton.
    General,
    /// Only reversible orbits, continued along the symmetry lines of the reversors.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub period: usize,
    pub range: (f64, f64),
    /// Sample points across the range, endpoints included (at least 2); sets the nominal step.
    pub steps: usize,
    pub tracking: Tracking,
    /// Newton seeds for the initial orbits; defaults to a box sized from the map parameters.
    pub seed_box: Option<SeedBox>,
}

impl ScanConfig {
    pub fn new(period: usize, range: (f64, f64), steps: usize) -> Self {
        Self { period, range, steps, tracking: Tracking::General, seed_box: None }
    }

    pub fn symmetric(mut self) -> Self {
        self.tracking = Tracking::Symmetric;
        self
    }

    pub fn with_seed_box(mut self, seeds: SeedBox) -> Self {
        self.seed_box = Some(seeds);
        self
    }

    /// Checks the settings without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::domain(format!("a scan needs at least 2 steps, got {}", self.steps)));
        }
        if self.period == 0 || self.period > super::newton::MAX_PERIOD {
            return Err(Error::domain(format!("period must be in 1..=64, got {}", self.period)));
        }
        let (a, b) = self.range;
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("scan range must be finite"));
        }
        if self.tracking == Tracking::Symmetric && !self.period.is_multiple_of(2) {
            return Err(Error::domain("symmetric tracking needs an even period"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanReport {
    /// Events in ascending parameter order.
    pub events: Vec<BifurcationEvent>,
    /// Branches that could not be continued and ended without a recognised bifurcation.
    pub warnings: Vec<String>,
}

/// Solves for one tracked orbit at a parameter, from the state of a nearby solution.
trait BranchSolver: Sync {
    type State: Copy + Send + Sync;
    fn solve(&self, s: f64, seed: Self::State) -> Option<(Self::State, PeriodicOrbit)>;
    fn distance(&self, a: Self::State, b: Self::State) -> f64;
    /// Any orbit of exact period `period` near `seed`, used to pin down where a branch collapses.
    fn solve_period(&self, s: f64, period: usize, seed: PlanePoint) -> Option<PeriodicOrbit>;
}

fn orbit_of_period<M: PlanarMap>(map: &M, period: usize, seed: PlanePoint) -> Option<PeriodicOrbit> {
    let p = newton_point(map, period, seed)?;
    (minimal_period(map, p, period) == period).then(|| PeriodicOrbit::from_start(map, p, period))
}

struct PointSolver<F> {
    family: F,
    period: usize,
}

impl<M: PlanarMap, F: Fn(f64) -> M + Sync> BranchSolver for PointSolver<F> {
    type State = PlanePoint;

    fn solve(&self, s: f64, seed: PlanePoint) -> Option<(PlanePoint, PeriodicOrbit)> {
        let map = (self.family)(s);
        let p = newton_point(&map, self.period, seed)?;
        if minimal_period(&map, p, self.period) != self.period {
            return None;
        }
        Some((p, PeriodicOrbit::from_start(&map, p, self.period)))
    }

    fn distance(&self, a: PlanePoint, b: PlanePoint) -> f64 {
        a.dist(&b)
    }

    fn solve_period(&self, s: f64, period: usize, seed: PlanePoint) -> Option<PeriodicOrbit> {
        orbit_of_period(&(self.family)(s), period, seed)
    }
}

struct LineSolver<F> {
    family: F,
    period: usize,
    line: SymmetryLine,
}

impl<F: Fn(f64) -> CubicHenonMap + Sync> BranchSolver for LineSolver<F> {
    type State = f64;

    fn solve(&self, s: f64, seed: f64) -> Option<(f64, PeriodicOrbit)> {
        let map = (self.family)(s);
        let t = newton_on_line(&map, self.line, self.period / 2, seed)?;
        let p = self.line.point(&map, t);
        if !closes(&map, p, self.period) || minimal_period(&map, p, self.period) != self.period {
            return None;
        }
        let mut orbit = PeriodicOrbit::from_start(&map, p, self.period);
        orbit.reversible = true;
        Some((t, orbit))
    }

    fn distance(&self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }

    fn solve_period(&self, s: f64, period: usize, seed: PlanePoint) -> Option<PeriodicOrbit> {
        orbit_of_period(&(self.family)(s), period, seed)
    }
}

/// The multiplier conditions watched along a branch, as functions of trace and determinant.
const THRESHOLDS: [EventKind; 4] =
    [EventKind::Pitchfork, EventKind::PeriodDoubling, EventKind::ResonanceOneThree, EventKind::ResonanceOneFour];

fn indicator(kind: EventKind, orbit: &PeriodicOrbit) -> f64 {
    let (tr, det) = (orbit.trace, orbit.determinant);
    match kind {
        EventKind::Pitchfork | EventKind::Fold => 1.0 - tr + det,
        EventKind::PeriodDoubling => 1.0 + tr + det,
        EventKind::ResonanceOneThree => tr + det.abs().sqrt(),
        EventKind::ResonanceOneFour => tr,
    }
}

struct Sample<S> {
    s: f64,
    state: S,
    orbit: PeriodicOrbit,
}

struct BranchResult {
    events: Vec<BifurcationEvent>,
    warning: Option<String>,
    last: Option<PeriodicOrbit>,
}

fn make_event(kind: EventKind, period: usize, a: (f64, Option<PeriodicOrbit>), b: (f64, Option<PeriodicOrbit>)) -> BifurcationEvent {
    let (lo, hi) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    BifurcationEvent {
        parameter_value: 0.5 * (lo.0 + hi.0),
        kind,
        period,
        orbit_before: lo.1,
        orbit_after: hi.1,
    }
}

/// Bisects the parameter between two solutions on opposite sides of `kind`'s threshold.
///
/// Returns `None` when the two sides do not join up continuously, which happens when a
/// continuation step jumped onto a partner branch near a fold rather than crossing a threshold.
fn localize_crossing<B: BranchSolver>(
    solver: &B,
    kind: EventKind,
    period: usize,
    a: &Sample<B::State>,
    b: &Sample<B::State>,
) -> Option<BifurcationEvent> {
    let side = |o: &PeriodicOrbit| indicator(kind, o) >= 0.0;
    let mut lo = (a.s, a.state, a.orbit.clone());
    let mut hi = (b.s, b.state, b.orbit.clone());
    let lo_side = side(&lo.2);
    while (hi.0 - lo.0).abs() > PARAM_TOL {
        let mid = 0.5 * (lo.0 + hi.0);
        if mid == lo.0 || mid == hi.0 {
            break;
        }
        let Some((st, orbit)) = solver.solve(mid, lo.1).or_else(|| solver.solve(mid, hi.1)) else {
            break;
        };
        if side(&orbit) == lo_side {
            lo = (mid, st, orbit);
        } else {
            hi = (mid, st, orbit);
        }
    }
    let tol = 1e-5 * (1.0 + lo.2.anchor().norm());
    if !lo.2.same_as(&hi.2, tol) {
        return None;
    }
    Some(make_event(kind, period, (lo.0, Some(lo.2)), (hi.0, Some(hi.2))))
}

/// The smallest proper divisor period the orbit has nearly shrunk onto.
fn collapsing_onto(orbit: &PeriodicOrbit) -> Option<usize> {
    let n = orbit.period();
    let p0 = orbit.points[0];
    (1..n).find(|&d| n.is_multiple_of(d) && orbit.points[d].dist(&p0) <= 1e-3 * (1.0 + p0.norm()))
}

/// What the last solution on a dying branch looks like: collapse onto a lower period, or a
/// parabolic multiplier `+1` (fold).
///
/// For a collapse the divisor period is returned too.
fn classify_termination(orbit: &PeriodicOrbit) -> Option<(EventKind, Option<usize>)> {
    if let Some(d) = collapsing_onto(orbit) {
        let kind = match orbit.period() / d {
            2 => EventKind::PeriodDoubling,
            3 => EventKind::ResonanceOneThree,
            4 => EventKind::ResonanceOneFour,
            _ => return None,
        };
        return Some((kind, Some(d)));
    }
    (indicator(EventKind::Fold, orbit).abs() < 1e-3 * (1.0 + orbit.determinant.abs()))
        .then_some((EventKind::Fold, None))
}

/// Locates a collapse precisely: the multiplier condition of `kind` on the period-`d` orbit the
/// branch shrank onto, bracketed by stepping away from `s0` and then bisected.
fn refine_collapse<B: BranchSolver>(solver: &B, kind: EventKind, d: usize, s0: f64, p0: PlanePoint, dir: f64, reach: f64) -> Option<f64> {
    let base = solver.solve_period(s0, d, p0)?;
    let side0 = indicator(kind, &base) >= 0.0;
    for sgn in [dir, -dir] {
        let mut prev = (s0, base.points[0]);
        let mut delta = 1e-9 * (1.0 + s0.abs());
        while delta <= reach {
            let s = s0 + sgn * delta;
            let Some(o) = solver.solve_period(s, d, prev.1) else { break };
            if (indicator(kind, &o) >= 0.0) != side0 {
                let (mut lo, mut hi) = (prev, (s, o.points[0]));
                while (hi.0 - lo.0).abs() > PARAM_TOL {
                    let mid = 0.5 * (lo.0 + hi.0);
                    let Some(m) = solver.solve_period(mid, d, lo.1) else { break };
                    if (indicator(kind, &m) >= 0.0) == side0 {
                        lo = (mid, m.points[0]);
                    } else {
                        hi = (mid, m.points[0]);
                    }
                }
                return Some(0.5 * (lo.0 + hi.0));
            }
            prev = (s, o.points[0]);
            delta *= 2.0;
        }
    }
    None
}

fn track<B: BranchSolver>(solver: &B, period: usize, start: Sample<B::State>, end: f64, h0: f64) -> BranchResult {
    let dir = if end >= start.s { 1.0 } else { -1.0 };
    let mut cur = start;
    let mut h = h0.abs();
    let mut events = Vec::new();
    loop {
        let remaining = (end - cur.s) * dir;
        if remaining <= 0.0 {
            return BranchResult { events, warning: None, last: Some(cur.orbit) };
        }
        let step = h.min(remaining);
        let s_next = if step == remaining { end } else { cur.s + dir * step };
        let accepted = solver
            .solve(s_next, cur.state)
            .filter(|(st, _)| solver.distance(*st, cur.state) <= JUMP_GUARD);
        match accepted {
            Some((state, orbit)) => {
                let next = Sample { s: s_next, state, orbit };
                let mut found = Vec::new();
                let mut disjoint = false;
                // a branch shrinking onto a lower period has a multiplier tending to +1 anyway
                let collapsing = collapsing_onto(&cur.orbit).is_some() || collapsing_onto(&next.orbit).is_some();
                for kind in THRESHOLDS {
                    if kind == EventKind::Pitchfork && collapsing {
                        continue;
                    }
                    if (indicator(kind, &cur.orbit) >= 0.0) != (indicator(kind, &next.orbit) >= 0.0) {
                        match localize_crossing(solver, kind, period, &cur, &next) {
                            Some(e) => found.push(e),
                            None => disjoint = true,
                        }
                    }
                }
                // a crossing that does not join up means the step landed on another branch
                if disjoint && step > MIN_RETRY * h0.abs() {
                    h = 0.5 * step;
                    continue;
                }
                events.extend(found);
                cur = next;
                h = (2.0 * h).min(h0.abs());
            }
            None => {
                h *= 0.5;
                if h < PARAM_TOL {
                    let s_dead = cur.s + dir * 2.0 * h;
                    return match classify_termination(&cur.orbit) {
                        Some((kind, divisor)) => {
                            let at = divisor
                                .and_then(|d| refine_collapse(solver, kind, d, cur.s, cur.orbit.points[0], dir, 4.0 * h0.abs()))
                                .unwrap_or(0.5 * (cur.s + s_dead));
                            let mut event = make_event(kind, period, (cur.s, Some(cur.orbit)), (s_dead, None));
                            event.parameter_value = at;
                            events.push(event);
                            BranchResult { events, warning: None, last: None }
                        }
                        None => BranchResult {
                            events,
                            warning: Some(format!(
                                "branch of period {period} lost at parameter {:.12e} (trace {:.6})",
                                cur.s, cur.orbit.trace
                            )),
                            last: None,
                        },
                    };
                }
            }
        }
    }
}

/// Continuation steps between two re-seedings of the branch set.
const SEGMENT_STEPS: usize = 16;

fn run_scan<B: BranchSolver>(
    solver: &B,
    period: usize,
    range: (f64, f64),
    steps: usize,
    initial: impl Fn(f64) -> Vec<(B::State, PeriodicOrbit)> + Sync,
) -> ScanReport {
    let (a, b) = range;
    if a == b {
        return ScanReport::default();
    }
    let h0 = (b - a).abs() / (steps - 1) as f64;
    // Orbits are seeded afresh at every knot so that branches born and dying between the ends of
    // the range are still found; each segment is swept forward, then backward for the orbits at
    // its right knot that the forward sweep did not reach.
    let segments = ((steps - 1) / SEGMENT_STEPS).max(1);
    let knots: Vec<f64> = (0..=segments)
        .map(|j| if j == segments { b } else { a + (b - a) * j as f64 / segments as f64 })
        .collect();
    let seeded: Vec<Vec<(B::State, PeriodicOrbit)>> = knots.par_iter().map(|&s| initial(s)).collect();

    let mut events = Vec::new();
    let mut warnings = Vec::new();
    for j in 0..segments {
        let (lo, hi) = (knots[j], knots[j + 1]);
        let forward: Vec<BranchResult> = seeded[j]
            .par_iter()
            .map(|(state, orbit)| track(solver, period, Sample { s: lo, state: *state, orbit: orbit.clone() }, hi, h0))
            .collect();
        let reached: Vec<PeriodicOrbit> = forward.iter().filter_map(|r| r.last.clone()).collect();
        let backward: Vec<BranchResult> = seeded[j + 1]
            .par_iter()
            .filter(|(_, o)| !reached.iter().any(|r| r.same_as(o, 1e-6 * (1.0 + o.anchor().norm()))))
            .map(|(state, orbit)| track(solver, period, Sample { s: hi, state: *state, orbit: orbit.clone() }, lo, h0))
            .collect();
        for r in forward.into_iter().chain(backward) {
            events.extend(r.events);
            warnings.extend(r.warning);
        }
    }
    ScanReport { events: merge_events(events), warnings }
}

/// Sorts events by parameter and drops repeats of the same event seen from two branches or two
/// directions (same kind, same parameter, nearby orbit).
fn merge_events(mut events: Vec<BifurcationEvent>) -> Vec<BifurcationEvent> {
    events.sort_by(|x, y| {
        x.parameter_value
            .total_cmp(&y.parameter_value)
            .then(x.kind.cmp(&y.kind))
            .then_with(|| {
                let (p, q) = (x.orbit().anchor(), y.orbit().anchor());
                p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
            })
    });
    let mut out: Vec<BifurcationEvent> = Vec::new();
    for e in events {
        let dup = out.iter().rev().take_while(|k| (e.parameter_value - k.parameter_value).abs() <= 1e-8).any(|k| {
            k.kind == e.kind && k.period == e.period && {
                let (o, p) = (k.orbit(), e.orbit());
                let tol = 1e-3 * (1.0 + o.anchor().norm());
                o.period() == p.period() && o.points.iter().any(|a| p.points.iter().any(|b| a.dist(b) <= tol))
            }
        });
        if !dup {
            out.push(e);
        }
    }
    out
}

/// Default seed box: large enough for the bounded orbits of cubic Hénon maps with these parameters.
fn default_seed_box(map: &CubicHenonMap) -> SeedBox {
    let r = 1.5 + (map.m2().abs() + 2.0).sqrt() + map.m1().abs().cbrt();
    SeedBox::square(r, 48)
}

fn default_line_interval(map: &CubicHenonMap) -> (f64, f64) {
    let r = default_seed_box(map).x.1;
    (-r, r)
}

/// One-parameter bifurcation scan of a cubic Hénon family.
///
/// Orbits of the requested minimal period are seeded at both ends of the range and at interior
/// knots every few steps, then continued across it. Crossings of the multiplier conditions
/// (trace `+2`, `-2`, `-1`, `0` for unit determinant) by a persisting orbit are reported as pitchfork, period doubling and the 1:3 and 1:4
/// resonances. A branch that ends inside the range is a fold when its last orbit is parabolic and
/// a period doubling (or resonance) when it collapses onto an orbit of lower period.
pub fn scan_bifurcations<F>(family: F, cfg: &ScanConfig) -> Result<ScanReport>
where
    F: Fn(f64) -> CubicHenonMap + Sync,
{
    cfg.validate()?;
    let n = cfg.period;
    match cfg.tracking {
        Tracking::General => {
            let solver = PointSolver { family: &family, period: n };
            let initial = |s: f64| -> Vec<(PlanePoint, PeriodicOrbit)> {
                let map = family(s);
                let orbits = if n == 1 {
                    fixed_points(&map)
                } else {
                    let seeds = cfg.seed_box.unwrap_or_else(|| default_seed_box(&map));
                    find_orbits_in_box(&map, n, &seeds)
                };
                orbits.into_iter().map(|o| (o.points[0], o)).collect()
            };
            Ok(run_scan(&solver, n, cfg.range, cfg.steps, initial))
        }
        Tracking::Symmetric => {
            if !family(cfg.range.0).is_conservative() {
                return Err(Error::domain("symmetric tracking needs Jacobian 1"));
            }
            let mut report = ScanReport::default();
            for line in SymmetryLine::ALL {
                let solver = LineSolver { family: &family, period: n, line };
                let initial = |s: f64| -> Vec<(f64, PeriodicOrbit)> {
                    let map = family(s);
                    let interval = cfg.seed_box.map(|b| b.x).unwrap_or_else(|| default_line_interval(&map));
                    find_reversible_orbits(&map, n, interval, line)
                        .unwrap_or_default()
                        .into_iter()
                        .filter(|o| o.period() == n)
                        .map(|o| (o.points[0].x, o))
                        .collect()
                };
                let r = run_scan(&solver, n, cfg.range, cfg.steps, initial);
                report.events.extend(r.events);
                report.warnings.extend(r.warnings);
            }
            report.events = merge_events(report.events);
            Ok(report)
        }
    }
}

/// General-tracking scan for any planar map family, with initial orbits from a seed grid.
pub fn scan_map_family<M, F>(family: F, period: usize, range: (f64, f64), steps: usize, seeds: &SeedBox) -> Result<ScanReport>
where
    M: PlanarMap + Sync,
    F: Fn(f64) -> M + Sync,
{
    ScanConfig::new(period, range, steps).validate()?;
    let solver = PointSolver { family: &family, period };
    let initial = |s: f64| -> Vec<(PlanePoint, PeriodicOrbit)> {
        find_orbits_in_box(&family(s), period, seeds).into_iter().map(|o| (o.points[0], o)).collect()
    };
    Ok(run_scan(&solver, period, range, steps, initial))
}
