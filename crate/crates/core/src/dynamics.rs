//! Event-driven classical motion of the four hard-core particles in the box `(-1, 0)`.
//!
//! Lengths are in units of `L`, masses in units of `m`.

use std::fmt;
use std::io::{self, Write};

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::invariants::classical_integrals;
use crate::jacobi::{FrameTransforms, PARTICLE_MASSES};

/// Contacts closer than this (in units of `L`) are treated as simultaneous.
pub const TIE_GAP: f64 = 1e-13;

/// How far a particle may sit from the contact it is said to be in.
const CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Particles `i` and `i + 1` (zero-based) touch.
    Pair(usize),
    LeftWall,
    RightWall,
}

impl EventKind {
    /// Candidates in left-to-right order, which is also the tie-break order.
    pub const ALL: [EventKind; 5] = [
        EventKind::LeftWall,
        EventKind::Pair(0),
        EventKind::Pair(1),
        EventKind::Pair(2),
        EventKind::RightWall,
    ];
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::Pair(i) => write!(f, "pair{}{}", i + 1, i + 2),
            EventKind::LeftWall => f.write_str("left_wall"),
            EventKind::RightWall => f.write_str("right_wall"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    /// Absolute time of the contact.
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub x: [f64; 4],
    pub p: [f64; 4],
    pub t: f64,
}

pub fn masses() -> [f64; 4] {
    PARTICLE_MASSES
}

impl ParticleState {
    pub fn new(x: [f64; 4], p: [f64; 4]) -> Result<Self> {
        let inside = x[0] > -1.0 && x.windows(2).all(|w| w[0] < w[1]) && x[3] < 0.0;
        if !inside || x.iter().chain(&p).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "positions {x:?} not strictly ordered inside (-1, 0)"
            )));
        }
        Ok(Self { x, p, t: 0.0 })
    }

    /// Uniform ordered positions, momenta uniform in `[-1, 1]`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>());
        x.sort_by(f64::total_cmp);
        let p = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        Self { x, p, t: 0.0 }
    }

    pub fn velocities(&self) -> [f64; 4] {
        let m = masses();
        std::array::from_fn(|i| self.p[i] / m[i])
    }

    pub fn kinetic_energy(&self) -> f64 {
        let m = masses();
        (0..4).map(|i| self.p[i] * self.p[i] / (2.0 * m[i])).sum()
    }

    /// Largest amount by which the ordering `-1 <= x1 <= .. <= x4 <= 0` fails.
    pub fn ordering_violation(&self) -> f64 {
        let x = &self.x;
        let mut worst = (-1.0 - x[0]).max(x[3]);
        for w in x.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
        worst.max(0.0)
    }

    /// Free flight by `dt`.
    pub fn advanced(&self, dt: f64) -> Self {
        let v = self.velocities();
        Self {
            x: std::array::from_fn(|i| self.x[i] + v[i] * dt),
            p: self.p,
            t: self.t + dt,
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            p: self.p.map(|c| -c),
            ..*self
        }
    }

    /// Time until `kind` would occur under free flight, if it ever does.
    fn time_to(&self, kind: EventKind, v: &[f64; 4]) -> Option<f64> {
        let (gap, speed) = match kind {
            EventKind::Pair(i) => (self.x[i + 1] - self.x[i], v[i] - v[i + 1]),
            EventKind::LeftWall => (self.x[0] + 1.0, -v[0]),
            EventKind::RightWall => (-self.x[3], v[3]),
        };
        (speed > 0.0).then(|| gap.max(0.0) / speed)
    }
}

/// The earliest contact under free flight. Near-simultaneous contacts go leftmost first.
pub fn next_event(state: &ParticleState) -> Result<Event> {
    let v = state.velocities();
    let candidates: Vec<(EventKind, f64, f64)> = EventKind::ALL
        .iter()
        .filter_map(|&k| {
            let speed = match k {
                EventKind::Pair(i) => v[i] - v[i + 1],
                EventKind::LeftWall => -v[0],
                EventKind::RightWall => v[3],
            };
            state.time_to(k, &v).map(|t| (k, t, speed))
        })
        .collect();
    let t_min = candidates
        .iter()
        .map(|c| c.1)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Domain(format!("no future contact from {state:?}")))?;
    let (kind, dt, _) = candidates
        .into_iter()
        .find(|&(_, t, speed)| (t - t_min) * speed <= TIE_GAP)
        .expect("the minimum is a candidate");
    Ok(Event {
        time: state.t + dt,
        kind,
    })
}

/// Moves to the event time and places the touching particles exactly in contact.
pub fn advance_to(state: &ParticleState, event: &Event) -> ParticleState {
    let mut s = state.advanced(event.time - state.t);
    s.t = event.time;
    match event.kind {
        EventKind::Pair(i) => {
            let mid = 0.5 * (s.x[i] + s.x[i + 1]);
            s.x[i] = mid;
            s.x[i + 1] = mid;
        }
        EventKind::LeftWall => s.x[0] = -1.0,
        EventKind::RightWall => s.x[3] = 0.0,
    }
    s
}

/// Momentum update for `kind`, as a matrix acting on particle momenta.
pub fn collision_matrix(kind: EventKind) -> Matrix4<f64> {
    let m = masses();
    let mut c = Matrix4::identity();
    match kind {
        EventKind::Pair(i) => {
            let j = i + 1;
            let total = m[i] + m[j];
            c[(i, i)] = (m[i] - m[j]) / total;
            c[(i, j)] = 2.0 * m[i] / total;
            c[(j, i)] = 2.0 * m[j] / total;
            c[(j, j)] = (m[j] - m[i]) / total;
        }
        EventKind::LeftWall => c[(0, 0)] = -1.0,
        EventKind::RightWall => c[(3, 3)] = -1.0,
    }
    c
}

/// The collision map carried to natural-frame momenta.
pub fn collision_matrix_z(kind: EventKind, transforms: &FrameTransforms) -> Matrix4<f64> {
    let inv = transforms
        .momentum_map
        .try_inverse()
        .expect("momentum map is invertible");
    transforms.momentum_map * collision_matrix(kind) * inv
}

/// Elastic update for a state already in contact.
pub fn collide(state: &ParticleState, kind: EventKind) -> Result<ParticleState> {
    let x = &state.x;
    let gap = match kind {
        EventKind::Pair(i) => (x[i + 1] - x[i]).abs(),
        EventKind::LeftWall => (x[0] + 1.0).abs(),
        EventKind::RightWall => x[3].abs(),
    };
    if gap > CONTACT_TOL {
        return Err(Error::Internal(format!(
            "{kind} requested at {x:?}, contact gap {gap:e}"
        )));
    }
    let m = masses();
    let v = state.velocities();
    let mut p = state.p;
    match kind {
        EventKind::Pair(i) => {
            let j = i + 1;
            let total = m[i] + m[j];
            let vi = ((m[i] - m[j]) * v[i] + 2.0 * m[j] * v[j]) / total;
            let vj = ((m[j] - m[i]) * v[j] + 2.0 * m[i] * v[i]) / total;
            p[i] = m[i] * vi;
            p[j] = m[j] * vj;
        }
        EventKind::LeftWall => p[0] = -p[0],
        EventKind::RightWall => p[3] = -p[3],
    }
    Ok(ParticleState { p, ..*state })
}

/// Advances to the next event and applies it.
pub fn step(state: &ParticleState) -> Result<(ParticleState, Event)> {
    let event = next_event(state)?;
    let touching = advance_to(state, &event);
    Ok((collide(&touching, event.kind)?, event))
}

/// Conserved quantities `I_1 .. I_4` and the kinetic energy.
pub fn conserved(state: &ParticleState, transforms: &FrameTransforms) -> [f64; 5] {
    let i = classical_integrals(&state.p, transforms);
    [i[0], i[1], i[2], i[3], state.kinetic_energy()]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub n_events: usize,
    pub final_state: ParticleState,
    /// Initial `I_1 .. I_4, KE`.
    pub initial: [f64; 5],
    /// Largest relative deviation from the initial values over the run.
    pub max_drift: [f64; 5],
    /// Largest relative change across a single event.
    pub max_event_drift: [f64; 5],
    pub max_ordering_violation: f64,
}

impl RunSummary {
    pub fn worst_drift(&self) -> f64 {
        self.max_drift.iter().copied().fold(0.0, f64::max)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Runs `n_events` events, calling `observer` with each event and the state just after it.
pub fn run_with<F>(state: &ParticleState, n_events: usize, mut observer: F) -> Result<RunSummary>
where
    F: FnMut(&Event, &ParticleState),
{
    if n_events == 0 {
        return Err(Error::InvalidArgument("need at least one event".into()));
    }
    let tf = FrameTransforms::canonical();
    let initial = conserved(state, &tf);
    let mut summary = RunSummary {
        n_events,
        final_state: *state,
        initial,
        max_drift: [0.0; 5],
        max_event_drift: [0.0; 5],
        max_ordering_violation: state.ordering_violation(),
    };
    let mut previous = initial;
    let mut current = *state;
    for _ in 0..n_events {
        let (next, event) = step(&current)?;
        let values = conserved(&next, &tf);
        for q in 0..5 {
            summary.max_drift[q] = summary.max_drift[q].max(rel(values[q], initial[q]));
            summary.max_event_drift[q] =
                summary.max_event_drift[q].max(rel(values[q], previous[q]));
        }
        summary.max_ordering_violation = summary
            .max_ordering_violation
            .max(next.ordering_violation());
        observer(&event, &next);
        previous = values;
        current = next;
    }
    summary.final_state = current;
    Ok(summary)
}

pub fn run(state: &ParticleState, n_events: usize) -> Result<RunSummary> {
    run_with(state, n_events, |_, _| {})
}

pub const TRACE_CSV_HEADER: &str = "t,event_kind,x1,x2,x3,x4,p1,p2,p3,p4,I1,I2,I3,I4";

/// Writes one trace row per event; the first row is the initial state with kind `start`.
pub fn write_trace_csv<W: Write>(
    state: &ParticleState,
    n_events: usize,
    mut out: W,
) -> Result<RunSummary> {
    let tf = FrameTransforms::canonical();
    let row = |out: &mut W, kind: &str, s: &ParticleState| -> io::Result<()> {
        let i = classical_integrals(&s.p, &tf);
        let nums: Vec<String> =
            s.x.iter()
                .chain(&s.p)
                .chain(&i)
                .map(|&c| sig15(c))
                .collect();
        writeln!(out, "{},{},{}", sig15(s.t), kind, nums.join(","))
    };
    let io_err = |e: io::Error| Error::Internal(format!("trace output: {e}"));
    writeln!(out, "{TRACE_CSV_HEADER}").map_err(io_err)?;
    row(&mut out, "start", state).map_err(io_err)?;
    let mut failure = None;
    let summary = run_with(state, n_events, |event, s| {
        if failure.is_none() {
            failure = row(&mut out, &event.kind.to_string(), s).err();
        }
    })?;
    match failure {
        Some(e) => Err(io_err(e)),
        None => Ok(summary),
    }
}
