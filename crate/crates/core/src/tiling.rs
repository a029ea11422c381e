//! The octacube (24-cell) and the octacubical tiling of 4-space.
//!
//! The fundamental simplex `D_e` is bounded by the four simple-root mirrors
//! through the origin and the affine mirror `alpha_0 . z = -1`. Reflecting
//! through all five mirrors tiles space; folding runs that backwards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::{
    reflection_matrix, GroupElement, HalfIntMat4, HalfIntVec4, ReflectionGroup, RootSystem,
};

/// Closure tolerance for the simplex mirrors.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Upper bound on reflections in a single fold.
pub const FOLD_STEP_LIMIT: u32 = 10_000;

/// Mirror visiting order inside [`Tiling::fold`].
const FOLD_ORDER: [usize; 5] = [1, 2, 3, 4, 0];

/// The 24-cell centred at the origin.
#[derive(Debug, Clone)]
pub struct Octacube {
    /// Orbit of `alpha_0`; facet `n` is `n . z > -1`.
    pub facet_normals: Vec<HalfIntVec4>,
    pub vertices: Vec<HalfIntVec4>,
}

impl Octacube {
    pub fn new(roots: &RootSystem, group: &ReflectionGroup) -> Result<Self> {
        let facet_normals = group.orbit(&roots.minimal_root)?;
        // the short roots; (1/2, 1/2, 1/2, 1/2) lies in the same orbit
        let vertices = group.orbit(&HalfIntVec4::from_ints([1, 0, 0, 0]))?;
        Ok(Self {
            facet_normals,
            vertices,
        })
    }

    /// Strictly inside all 24 facets.
    pub fn contains(&self, z: &[f64; 4]) -> bool {
        self.facet_normals.iter().all(|n| n.dot_f64(z) > -1.0)
    }

    /// Facet centres, `n / 2` for each facet normal.
    pub fn facet_centers(&self) -> Vec<[f64; 4]> {
        self.facet_normals
            .iter()
            .map(|n| n.to_f64().map(|c| c * 0.5))
            .collect()
    }
}

/// A point folded into the closed fundamental simplex.
///
/// The input equals `element . z + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldResult {
    pub z: [f64; 4],
    pub element: GroupElement,
    pub element_index: usize,
    pub translation: [i64; 4],
    pub parity: i8,
    pub steps: u32,
    /// The folded point lies within [`BOUNDARY_TOL`] of some mirror.
    pub on_boundary: bool,
}

impl FoldResult {
    /// `element . z + translation`.
    pub fn reconstruct(&self) -> [f64; 4] {
        let gz = self.element.apply_f64(&self.z);
        std::array::from_fn(|i| gz[i] + self.translation[i] as f64)
    }
}

/// Root data, the finite group and the cell, bundled for the geometric queries.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub roots: RootSystem,
    pub group: ReflectionGroup,
    pub octacube: Octacube,
    mirrors: [HalfIntVec4; 5],
    reflections: [HalfIntMat4; 5],
}

impl Tiling {
    pub fn new() -> Result<Self> {
        let roots = RootSystem::f4();
        let group = roots.group()?;
        let octacube = Octacube::new(&roots, &group)?;
        let mirrors = [
            roots.minimal_root,
            roots.simple_roots[0],
            roots.simple_roots[1],
            roots.simple_roots[2],
            roots.simple_roots[3],
        ];
        let mut reflections = [HalfIntMat4::IDENTITY; 5];
        for (r, m) in reflections.iter_mut().zip(&mirrors) {
            *r = reflection_matrix(m)?.matrix;
        }
        Ok(Self {
            roots,
            group,
            octacube,
            mirrors,
            reflections,
        })
    }

    pub fn cell_contains(&self, z: &[f64; 4]) -> bool {
        self.octacube.contains(z)
    }

    /// Signed distances-like margins of `z` to the five mirrors (positive inside).
    pub fn margins(&self, z: &[f64; 4]) -> [f64; 5] {
        std::array::from_fn(|j| {
            let d = self.mirrors[j].dot_f64(z);
            if j == 0 {
                d + 1.0
            } else {
                d
            }
        })
    }

    /// In the open simplex, with every margin above `tol`.
    pub fn in_simplex(&self, z: &[f64; 4], tol: f64) -> bool {
        self.margins(z).iter().all(|&m| m > tol)
    }

    /// Reflects `z` into the closed fundamental simplex.
    pub fn fold(&self, z: &[f64; 4]) -> Result<FoldResult> {
        if !z.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cannot fold non-finite point {z:?}"
            )));
        }
        let mut cur = *z;
        let mut g = HalfIntMat4::IDENTITY;
        let mut translation = HalfIntVec4::ZERO;
        let mut steps = 0u32;

        loop {
            let mut changed = false;
            for j in FOLD_ORDER {
                let a = self.mirrors[j];
                let af = a.to_f64();
                let d = a.dot_f64(&cur);
                let n2 = a.norm2_4() as f64 / 4.0;
                if j == 0 {
                    if d >= -1.0 - BOUNDARY_TOL {
                        continue;
                    }
                    // affine mirror alpha_0 . z = -1; |alpha_0|^2 = 2
                    let shift = 2.0 * (d + 1.0) / n2;
                    for (c, a) in cur.iter_mut().zip(af) {
                        *c -= shift * a;
                    }
                    let ga = g.apply(&a).ok_or_else(|| {
                        Error::Internal("translation left the root lattice".into())
                    })?;
                    translation = translation - ga;
                } else {
                    if d >= -BOUNDARY_TOL {
                        continue;
                    }
                    let shift = 2.0 * d / n2;
                    for (c, a) in cur.iter_mut().zip(af) {
                        *c -= shift * a;
                    }
                }
                g = g
                    .checked_mul(&self.reflections[j])
                    .ok_or_else(|| Error::Internal("fold left the group".into()))?;
                steps += 1;
                changed = true;
                if steps > FOLD_STEP_LIMIT {
                    return Err(Error::Internal(format!(
                        "fold of {z:?} did not terminate in {FOLD_STEP_LIMIT} steps"
                    )));
                }
            }
            if !changed {
                break;
            }
        }

        let element_index = self
            .group
            .index_of(&g)
            .ok_or_else(|| Error::Internal("folded element missing from group table".into()))?;
        let element = *self.group.element(element_index);
        let parity = if steps.is_multiple_of(2) { 1 } else { -1 };
        if parity != element.parity {
            return Err(Error::Internal(format!(
                "fold parity {parity} disagrees with element parity {}",
                element.parity
            )));
        }
        let translation = translation
            .to_ints()
            .ok_or_else(|| Error::Internal("fractional lattice translation".into()))?;
        let on_boundary = self.margins(&cur).iter().any(|m| m.abs() <= BOUNDARY_TOL);
        Ok(FoldResult {
            z: cur,
            element,
            element_index,
            translation,
            parity,
            steps,
            on_boundary,
        })
    }

    /// Exact fold of a lattice vector into the closed Weyl chamber (linear mirrors only).
    pub fn fold_to_chamber(&self, v: &HalfIntVec4) -> Result<(HalfIntVec4, GroupElement)> {
        let mut cur = *v;
        let mut g = HalfIntMat4::IDENTITY;
        for _ in 0..FOLD_STEP_LIMIT {
            let Some(j) = (1..5).find(|&j| self.mirrors[j].dot4(&cur) < 0) else {
                let idx = self
                    .group
                    .index_of(&g)
                    .ok_or_else(|| Error::Internal("chamber fold left the group".into()))?;
                return Ok((cur, *self.group.element(idx)));
            };
            cur = self.reflections[j]
                .apply(&cur)
                .ok_or_else(|| Error::InvalidArgument(format!("{v} is not a lattice vector")))?;
            g = g
                .checked_mul(&self.reflections[j])
                .ok_or_else(|| Error::Internal("chamber fold left the group".into()))?;
        }
        Err(Error::Internal(format!(
            "chamber fold of {v} did not terminate"
        )))
    }

    /// Number of simplices `D_g` (g in F4) whose interior, shrunk by `shell`,
    /// contains `z`; `shell < 0` grows them instead.
    pub fn covering_count(&self, z: &[f64; 4], shell: f64) -> usize {
        (0..self.group.order())
            .filter(|&i| {
                let m = self.group.float_matrix(i);
                // g^-1 = g^T
                let pre: [f64; 4] = std::array::from_fn(|r| (0..4).map(|c| m[c][r] * z[c]).sum());
                self.in_simplex(&pre, shell)
            })
            .count()
    }

    /// Randomised check of the tiling: folding, lattice translations, cell
    /// volume, and absence of holes and overlaps inside the cell.
    pub fn verify(&self, n_samples: usize, seed: u64) -> TilingReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = TilingReport {
            n_samples,
            seed,
            ..TilingReport::default()
        };

        for _ in 0..n_samples {
            let z: [f64; 4] = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
            match self.fold(&z) {
                Ok(f) => {
                    let back = f.reconstruct();
                    let err = back
                        .iter()
                        .zip(&z)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    report.max_reconstruction_error = report.max_reconstruction_error.max(err);
                    if f.translation.iter().sum::<i64>().rem_euclid(2) != 0 {
                        report.odd_translations += 1;
                    }
                    if f.parity != f.element.parity || i64::from(f.parity) != f.element.det() {
                        report.parity_mismatches += 1;
                    }
                }
                Err(_) => report.fold_failures += 1,
            }
        }

        let mut hits = 0usize;
        for _ in 0..n_samples {
            let z: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            if self.cell_contains(&z) {
                hits += 1;
            }
        }
        let n = n_samples.max(1) as f64;
        let p = hits as f64 / n;
        report.cell_volume = 16.0 * p;
        report.cell_volume_std_error = 16.0 * (p * (1.0 - p) / n).sqrt();

        let n_cover = n_samples.min(2_000);
        for _ in 0..n_cover {
            let z: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            if !self.cell_contains(&z) {
                continue;
            }
            report.coverage_checked += 1;
            if self.covering_count(&z, 1e-9) > 1 {
                report.overlaps += 1;
            }
            if self.covering_count(&z, -1e-9) == 0 {
                report.holes += 1;
            }
        }
        report
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TilingReport {
    pub n_samples: usize,
    pub seed: u64,
    pub fold_failures: usize,
    pub max_reconstruction_error: f64,
    pub odd_translations: usize,
    pub parity_mismatches: usize,
    pub cell_volume: f64,
    pub cell_volume_std_error: f64,
    pub coverage_checked: usize,
    pub overlaps: usize,
    pub holes: usize,
}
