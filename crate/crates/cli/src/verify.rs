//! Property suites behind `octacube verify`.

use std::collections::HashSet;

use clap::ValueEnum;
use num::complex::Complex64;
use octacube_core::dynamics::{collision_matrix_z, run, EventKind};
use octacube_core::format::sig15;
use octacube_core::invariants::{
    check_invariance, hamiltonian_identity_sides, independence_check, GENERIC_POINT,
};
use octacube_core::jacobi::{
    build_transforms, contact_angles, reference_t_zx, solve_mass_chain, F4_TARGET_ANGLES,
};
use octacube_core::root_system::ALPHA_0;
use octacube_core::spectrum::enumerate_levels;
use octacube_core::wavefunction::{mc_normalization, mc_overlap, Eigenstate, CELL_VOLUME};
use octacube_core::{FrameTransforms, HalfIntVec4, MassChain, ParticleState, RootSystem, Tiling};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Group,
    Masses,
    Tiling,
    Norm,
    Invariants,
    Dynamics,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Masses => "masses",
            Suite::Tiling => "tiling",
            Suite::Norm => "norm",
            Suite::Invariants => "invariants",
            Suite::Dynamics => "dynamics",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    pub seed: u64,
    pub mc_samples: usize,
    pub tiling_samples: usize,
    pub events: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Checks {
    prefix: &'static str,
    out: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.out.push(Check {
            name: format!("{}.{name}", self.prefix),
            pass,
            detail,
        });
    }
}

fn group_suite(c: &mut Checks) {
    let roots = RootSystem::f4();
    let group = match roots.group() {
        Ok(g) => g,
        Err(e) => return c.push("generate", false, e.to_string()),
    };
    c.push(
        "order",
        group.order() == 1152,
        format!("order={}", group.order()),
    );
    let orthogonal = group.elements().iter().all(|g| g.matrix.is_orthogonal());
    c.push(
        "orthogonal",
        orthogonal,
        format!("all exact orthogonal={orthogonal}"),
    );
    let even = group.elements().iter().filter(|g| g.parity == 1).count();
    c.push(
        "parity_split",
        even == 576,
        format!("even={even}, odd={}", group.order() - even),
    );
    let set: HashSet<HalfIntVec4> = roots.all_roots.iter().copied().collect();
    let stable = group.elements().iter().all(|g| {
        roots
            .all_roots
            .iter()
            .all(|r| g.apply(r).is_some_and(|v| set.contains(&v)))
    });
    c.push(
        "roots_stable",
        stable && set.len() == 48,
        format!("roots={}, stable={stable}", set.len()),
    );
    let orbit = group.orbit(&ALPHA_0).map(|o| o.len()).unwrap_or(0);
    c.push("orbit_alpha0", orbit == 24, format!("size={orbit}"));
    let mut marks = Vec::new();
    let mut others_ok = true;
    for i in 0..5 {
        for j in i + 1..5 {
            let n = roots.coxeter_order_check(i, j).unwrap_or(0);
            if j == i + 1 {
                marks.push(n);
            } else {
                others_ok &= n == 2;
            }
        }
    }
    c.push(
        "coxeter",
        marks == [3, 3, 4, 3] && others_ok,
        format!("consecutive={marks:?}, non-adjacent all 2={others_ok}"),
    );
}

fn masses_suite(c: &mut Checks) {
    match contact_angles(&MassChain::canonical()) {
        Ok(a) => {
            let err = a
                .iter()
                .zip(F4_TARGET_ANGLES)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            c.push(
                "contact_angles",
                err < 1e-12,
                format!(
                    "angles/pi=[{}], max error {}",
                    a.map(|x| sig15(x / std::f64::consts::PI)).join(","),
                    sig15(err)
                ),
            );
        }
        Err(e) => c.push("contact_angles", false, e.to_string()),
    }
    match solve_mass_chain(F4_TARGET_ANGLES) {
        Ok(s) => {
            let err = s
                .ratios
                .iter()
                .zip([6.0, 2.0, 3.0])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            c.push(
                "inverse_solve",
                err < 1e-10,
                format!(
                    "m1:m2:m4 = [{}] m3, max error {}",
                    s.ratios.map(sig15).join(","),
                    sig15(err)
                ),
            );
        }
        Err(e) => c.push("inverse_solve", false, e.to_string()),
    }
    match build_transforms(&MassChain::canonical()) {
        Ok(tf) => {
            let dev = (tf.t_zx - reference_t_zx()).amax();
            let det = (tf.det_zx.abs() - 1.0 / 24.0).abs();
            c.push(
                "transforms",
                dev < 1e-14 && det < 1e-14,
                format!("T_zx deviation {}, |det| error {}", sig15(dev), sig15(det)),
            );
        }
        Err(e) => c.push("transforms", false, e.to_string()),
    }
}

fn tiling_suite(c: &mut Checks, b: &Budgets) {
    let t = match Tiling::new() {
        Ok(t) => t,
        Err(e) => return c.push("build", false, e.to_string()),
    };
    let r = t.verify(b.tiling_samples, b.seed);
    c.push(
        "fold",
        r.fold_failures == 0 && r.max_reconstruction_error < 1e-12 && r.parity_mismatches == 0,
        format!(
            "points={}, failures={}, max reconstruction error {}, parity mismatches={}",
            r.n_samples,
            r.fold_failures,
            sig15(r.max_reconstruction_error),
            r.parity_mismatches
        ),
    );
    c.push(
        "even_translations",
        r.odd_translations == 0,
        format!("odd={}", r.odd_translations),
    );
    let sig = (r.cell_volume - CELL_VOLUME).abs() / r.cell_volume_std_error;
    c.push(
        "cell_volume",
        sig < 3.0,
        format!(
            "{} +- {} ({} sigma)",
            sig15(r.cell_volume),
            sig15(r.cell_volume_std_error),
            sig15(sig)
        ),
    );
    c.push(
        "no_holes_or_overlaps",
        r.holes == 0 && r.overlaps == 0,
        format!(
            "checked={}, holes={}, overlaps={}",
            r.coverage_checked, r.holes, r.overlaps
        ),
    );
}

fn norm_suite(c: &mut Checks, b: &Budgets) {
    let t = match Tiling::new() {
        Ok(t) => t,
        Err(e) => return c.push("build", false, e.to_string()),
    };
    let levels = enumerate_levels(80);
    let states: Vec<Eigenstate> = levels
        .iter()
        .take(3)
        .filter_map(|l| Eigenstate::new(*l, &t.group).ok())
        .collect();
    for (i, s) in states.iter().enumerate() {
        match mc_normalization(s, b.mc_samples, b.seed.wrapping_add(i as u64)) {
            Ok(est) => {
                let sig = est.sigmas_from(Complex64::new(1.0, 0.0));
                c.push(
                    &format!("normalization_{}", s.level.qn),
                    sig < 3.0,
                    format!(
                        "{} +- {} ({} sigma)",
                        sig15(est.value_re),
                        sig15(est.std_error),
                        sig15(sig)
                    ),
                );
            }
            Err(e) => c.push("normalization", false, e.to_string()),
        }
    }
    if states.len() >= 2 {
        match mc_overlap(
            &states[0],
            &states[1],
            b.mc_samples,
            b.seed.wrapping_add(100),
        ) {
            Ok(est) => {
                let sig = est.sigmas_from(Complex64::new(0.0, 0.0));
                c.push(
                    &format!("overlap_{}_{}", states[0].level.qn, states[1].level.qn),
                    sig < 3.0,
                    format!(
                        "{} + {}i +- {} ({} sigma)",
                        sig15(est.value_re),
                        sig15(est.value_im),
                        sig15(est.std_error),
                        sig15(sig)
                    ),
                );
            }
            Err(e) => c.push("overlap", false, e.to_string()),
        }
    }
}

fn invariants_suite(c: &mut Checks, b: &Budgets) {
    let group = match RootSystem::f4().group() {
        Ok(g) => g,
        Err(e) => return c.push("group", false, e.to_string()),
    };
    for m in 1..=4 {
        let ok = check_invariance(m, &group, 5, b.seed).unwrap_or(false);
        c.push(
            &format!("invariance_w{m}"),
            ok,
            format!("5 rational points, 1152 elements, exact={ok}"),
        );
    }
    let levels = enumerate_levels(2000);
    let bad = levels
        .iter()
        .filter(|l| {
            let (lhs, rhs) = hamiltonian_identity_sides(l);
            lhs != rhs
        })
        .count();
    c.push(
        "first_integral_is_144_h",
        bad == 0,
        format!("levels={}, mismatches={bad}", levels.len()),
    );
    let rank = independence_check(&GENERIC_POINT);
    c.push("jacobian_rank", rank == 4, format!("rank={rank}"));
}

fn dynamics_suite(c: &mut Checks, b: &Budgets) {
    let group = match RootSystem::f4().group() {
        Ok(g) => g,
        Err(e) => return c.push("group", false, e.to_string()),
    };
    let tf = FrameTransforms::canonical();
    let worst = EventKind::ALL
        .iter()
        .map(|&k| {
            let m = collision_matrix_z(k, &tf);
            group
                .nearest(&std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
                .1
        })
        .fold(0.0, f64::max);
    c.push(
        "collision_maps_in_group",
        worst < 1e-10,
        format!("max deviation {}", sig15(worst)),
    );
    match run(&ParticleState::random(b.seed), b.events.max(1)) {
        Ok(s) => {
            c.push(
                "drift",
                s.worst_drift() < 1e-9,
                format!(
                    "events={}, relative drift I1..I4,KE=[{}]",
                    s.n_events,
                    s.max_drift.map(sig15).join(",")
                ),
            );
            c.push(
                "ordering",
                s.max_ordering_violation < 1e-9,
                format!("max violation {}", sig15(s.max_ordering_violation)),
            );
        }
        Err(e) => c.push("drift", false, e.to_string()),
    }
}

pub fn run_suite(suite: Suite, budgets: &Budgets) -> VerifyReport {
    let selected: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::Group,
            Suite::Masses,
            Suite::Tiling,
            Suite::Norm,
            Suite::Invariants,
            Suite::Dynamics,
        ],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in selected {
        let mut c = Checks {
            prefix: s.name(),
            out: Vec::new(),
        };
        match s {
            Suite::Group => group_suite(&mut c),
            Suite::Masses => masses_suite(&mut c),
            Suite::Tiling => tiling_suite(&mut c, budgets),
            Suite::Norm => norm_suite(&mut c, budgets),
            Suite::Invariants => invariants_suite(&mut c, budgets),
            Suite::Dynamics => dynamics_suite(&mut c, budgets),
            Suite::All => unreachable!("expanded above"),
        }
        checks.extend(c.out);
    }
    VerifyReport {
        suite: suite.name().to_string(),
        checks,
    }
}
