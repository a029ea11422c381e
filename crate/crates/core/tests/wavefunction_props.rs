use std::collections::HashSet;
use std::f64::consts::PI;

use num::complex::Complex64;
use octacube_core::jacobi::FrameTransforms;
use octacube_core::root_system::{HalfIntVec4, Lattice, RootSystem};
use octacube_core::spectrum::enumerate_levels;
use octacube_core::wavefunction::{
    density_section, mc_normalization, mc_overlap, Eigenstate, SliceSpec,
};
use octacube_core::{Level, QuantumNumbers, ReflectionGroup, Tiling};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tiling() -> Tiling {
    Tiling::new().unwrap()
}

fn state(t: &Tiling, qn: QuantumNumbers) -> Eigenstate {
    Eigenstate::new(Level::new(qn), &t.group).unwrap()
}

fn random_z(rng: &mut ChaCha8Rng, half_width: f64) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(-half_width..half_width))
}

/// Relative residual with a floor so that points near nodes are not over-weighted.
fn rel(a: Complex64, b: Complex64, s: &Eigenstate) -> f64 {
    (a - b).norm() / b.norm().max(1e-3 * s.term_scale())
}

/// The 1152 orthogonal maps permuting the 48 roots, found by brute force over
/// orthonormal frames of short roots (written as twice their value).
fn automorphisms_of_roots() -> Vec<[[i64; 4]; 4]> {
    let roots: Vec<[i64; 4]> = RootSystem::f4()
        .all_roots
        .iter()
        .map(|r| r.twice())
        .collect();
    let root_set: HashSet<[i64; 4]> = roots.iter().copied().collect();
    let short: Vec<[i64; 4]> = roots
        .iter()
        .copied()
        .filter(|r| r.iter().map(|c| c * c).sum::<i64>() == 4)
        .collect();
    let dot = |a: &[i64; 4], b: &[i64; 4]| -> i64 { (0..4).map(|i| a[i] * b[i]).sum() };
    let mut out = Vec::new();
    for c0 in &short {
        for c1 in short.iter().filter(|c| dot(c, c0) == 0) {
            for c2 in short.iter().filter(|c| dot(c, c0) == 0 && dot(c, c1) == 0) {
                for c3 in short
                    .iter()
                    .filter(|c| dot(c, c0) == 0 && dot(c, c1) == 0 && dot(c, c2) == 0)
                {
                    let cols = [c0, c1, c2, c3];
                    // m holds twice the matrix; m v / 2 keeps twice-values
                    let m: [[i64; 4]; 4] =
                        std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
                    let permutes = roots.iter().all(|r| {
                        let img: [i64; 4] =
                            std::array::from_fn(|i| (0..4).map(|j| m[i][j] * r[j]).sum::<i64>());
                        img.iter().all(|c| c % 2 == 0) && root_set.contains(&img.map(|c| c / 2))
                    });
                    if permutes {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn det_sign(m: &[[i64; 4]; 4]) -> i64 {
    let f: [[f64; 4]; 4] = m.map(|r| r.map(|c| c as f64));
    let mat = nalgebra::Matrix4::from_fn(|i, j| f[i][j]);
    mat.determinant().signum() as i64
}

/// Error-free sum of two doubles.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[derive(Default, Clone, Copy)]
struct DoubleDouble(f64, f64);

impl DoubleDouble {
    fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.0, x);
        let (hi, lo) = two_sum(s, e + self.1);
        *self = DoubleDouble(hi, lo);
    }
}

#[test]
fn centroid_value_matches_independent_sum() {
    let t = tiling();
    let s = state(&t, QuantumNumbers::ground_state());
    let group = automorphisms_of_roots();
    assert_eq!(group.len(), 1152);

    // centroid (35, 13, 7, 3) / 60, so every phase is pi * n / 60 with integer n
    let num = [35i64, 13, 7, 3];
    let k = HalfIntVec4::from_ints(Level::new(QuantumNumbers::ground_state()).k).twice();
    let (mut re, mut im) = (DoubleDouble::default(), DoubleDouble::default());
    for g in &group {
        // g holds twice the matrix, k twice the wavevector
        let gk: [i64; 4] = std::array::from_fn(|i| (0..4).map(|j| g[i][j] * k[j]).sum::<i64>() / 4);
        let n = (0..4).map(|i| gk[i] * num[i]).sum::<i64>().rem_euclid(120);
        let phase = PI * n as f64 / 60.0;
        let sign = det_sign(g) as f64;
        re.add(sign * phase.cos());
        im.add(sign * phase.sin());
    }
    let oracle = Complex64::new(re.0 + re.1, im.0 + im.1) / 2f64.sqrt();

    let centroid = num.map(|c| c as f64 / 60.0);
    let value = s.psi_z(&centroid);
    assert!(
        oracle.norm() > 1.0,
        "centroid value {oracle} unexpectedly small"
    );
    assert!(oracle.im.abs() < 1e-12 * s.term_scale());
    assert!(
        (value - oracle).norm() < 1e-12 * s.term_scale(),
        "{value} vs {oracle}"
    );
}

#[test]
fn antisymmetry_under_generators() {
    let t = tiling();
    let roots = RootSystem::f4();
    let group: &ReflectionGroup = &t.group;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for qn in [
        QuantumNumbers::ground_state(),
        QuantumNumbers::new(5, 2, 1, 3).unwrap(),
    ] {
        let s = state(&t, qn);
        for j in 1..=4 {
            let r =
                octacube_core::root_system::reflection_matrix(&roots.mirror(j).unwrap()).unwrap();
            assert!(group.get(&r.matrix).is_some());
            for _ in 0..200 {
                let z = random_z(&mut rng, 1.0);
                let a = s.psi_z(&r.apply_f64(&z));
                let b = s.psi_z(&z);
                assert!(rel(a, -b, &s) < 1e-12, "j={j}, z={z:?}");
            }
        }
    }
}

#[test]
fn lattice_periodicity() {
    let t = tiling();
    let lattice = Lattice::d4();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let s = state(&t, QuantumNumbers::new(4, 1, 1, 2).unwrap());
    for a in &lattice.generators {
        let af = a.to_f64();
        for _ in 0..200 {
            let z = random_z(&mut rng, 1.0);
            let shifted: [f64; 4] = std::array::from_fn(|i| z[i] + af[i]);
            assert!(rel(s.psi_z(&shifted), s.psi_z(&z), &s) < 1e-12);
        }
    }
}

#[test]
fn parity_identity_for_random_elements() {
    let t = tiling();
    let s = state(&t, QuantumNumbers::ground_state());
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let g = t.group.element(rng.random_range(0..t.group.order()));
        let z = random_z(&mut rng, 1.0);
        let lhs = s.psi_z(&g.apply_f64(&z));
        let rhs = s.psi_z(&z) * f64::from(g.parity);
        assert!(rel(lhs, rhs, &s) < 1e-12);
    }
}

#[test]
fn real_valued() {
    let t = tiling();
    let s = state(&t, QuantumNumbers::new(6, 1, 2, 3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let z = random_z(&mut rng, 1.0);
        assert!(s.psi_z(&z).im.abs() < 1e-12 * s.term_scale());
    }
}

/// Random points of one contact or wall face of the ordered domain.
fn face_point(rng: &mut ChaCha8Rng, face: usize) -> [f64; 4] {
    let mut x: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>());
    x.sort_by(f64::total_cmp);
    match face {
        0 => x[0] = -1.0,
        1..=3 => x[face] = x[face - 1],
        _ => x[3] = 0.0,
    }
    x
}

#[test]
fn boundary_nodes_on_all_faces() {
    let t = tiling();
    let tf = FrameTransforms::canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for qn in [
        QuantumNumbers::ground_state(),
        QuantumNumbers::new(7, 3, 2, 5).unwrap(),
    ] {
        let s = state(&t, qn);
        let scale = tf.det_zx.abs().sqrt() * s.term_scale();
        for face in 0..5 {
            for _ in 0..1000 {
                let x = face_point(&mut rng, face);
                let v = s.psi_x(&x).unwrap();
                assert!(v.norm() < 1e-10 * scale, "face {face}: {x:?} -> {v}");
            }
        }
    }
}

#[test]
fn monte_carlo_normalization_of_three_states() {
    let t = tiling();
    let levels = enumerate_levels(80);
    assert_eq!(levels[1].qn, QuantumNumbers::new(4, 1, 1, 2).unwrap());
    for (i, level) in levels.iter().take(3).enumerate() {
        let s = Eigenstate::new(*level, &t.group).unwrap();
        let est = mc_normalization(&s, 200_000, 100 + i as u64).unwrap();
        assert!(est.std_error < 0.02);
        assert!(
            est.sigmas_from(Complex64::new(1.0, 0.0)) < 3.0,
            "{:?}: {est:?}",
            level.qn
        );
    }
}

#[test]
fn overlaps() {
    let t = tiling();
    let g = state(&t, QuantumNumbers::ground_state());
    let e = state(&t, QuantumNumbers::new(4, 1, 1, 2).unwrap());
    let ab = mc_overlap(&g, &e, 200_000, 31).unwrap();
    assert!(ab.sigmas_from(Complex64::new(0.0, 0.0)) < 3.0, "{ab:?}");
    let ba = mc_overlap(&e, &g, 200_000, 31).unwrap();
    assert_eq!(ab.value(), ba.value().conj());
    let aa = mc_overlap(&g, &g, 200_000, 32).unwrap();
    assert!(aa.sigmas_from(Complex64::new(1.0, 0.0)) < 3.0);
}

fn slice() -> SliceSpec {
    SliceSpec {
        normal: [0.3, -0.2, 1.0, 0.5],
        offset: 0.1,
        center: [0.5, 0.2, 0.1, 0.05],
        radius: 0.6,
        pole: Some([0.0, 0.0, 0.0, 1.0]),
        reference: Some([1.0, 0.0, 0.0, 0.0]),
        resolution: 24,
    }
}

#[test]
fn density_section_is_nonnegative_and_symmetric() {
    let t = tiling();
    let s = state(&t, QuantumNumbers::ground_state());
    let base = density_section(&s, &t, &slice()).unwrap();
    assert_eq!(base.len(), 24 * 24);
    assert!(base.iter().all(|d| d.density >= 0.0));
    let peak = base.iter().map(|d| d.density).fold(0.0, f64::max);
    assert!(peak > 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..5 {
        let idx = rng.random_range(0..t.group.order());
        let moved =
            density_section(&s, &t, &slice().transformed(t.group.float_matrix(idx))).unwrap();
        // odd elements reverse the orientation of the slice, so compare as multisets
        let sorted = |v: &[octacube_core::wavefunction::DensitySample]| {
            let mut d: Vec<f64> = v.iter().map(|x| x.density).collect();
            d.sort_by(f64::total_cmp);
            d
        };
        for (a, b) in sorted(&base).iter().zip(sorted(&moved)) {
            assert!((a - b).abs() < 1e-9 * peak);
        }
    }
}
