//! Eigenfunctions as alternating plane-wave sums over F4, and Monte Carlo
//! checks of their normalization and orthogonality.

use std::f64::consts::PI;
use std::io::{self, Write};

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::jacobi::FrameTransforms;
use crate::root_system::{HalfIntVec4, ReflectionGroup};
use crate::spectrum::Level;
use crate::tiling::Tiling;

/// Volume of the fundamental simplex in natural coordinates.
pub const SIMPLEX_VOLUME: f64 = 1.0 / 576.0;

/// Volume of the octacube, `V_D |G|`.
pub const CELL_VOLUME: f64 = 2.0;

/// Volume of `-1 < x1 < x2 < x3 < x4 < 0`.
pub const ORDERED_SIMPLEX_VOLUME: f64 = 1.0 / 24.0;

/// Slack allowed when checking that particle coordinates are ordered.
const DOMAIN_TOL: f64 = 1e-12;

/// Samples per Monte Carlo chunk; each chunk owns one RNG stream.
const MC_CHUNK: usize = 4096;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A normalized eigenstate with its 1152 rotated wavevectors precomputed.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub level: Level,
    /// `(g k, parity(g))`, with `g k` in units of `pi / L`.
    terms: Vec<([f64; 4], f64)>,
    /// `1 / sqrt(V_D |G|)`.
    pub prefactor_z: f64,
    transforms: FrameTransforms,
}

impl Eigenstate {
    pub fn new(level: Level, group: &ReflectionGroup) -> Result<Self> {
        let k = HalfIntVec4::from_ints(level.k);
        let terms = group
            .elements()
            .iter()
            .map(|g| {
                let gk = g.apply(&k).and_then(|v| v.to_ints()).ok_or_else(|| {
                    Error::Internal(format!(
                        "g k left the reciprocal lattice for {:?}",
                        level.qn
                    ))
                })?;
                Ok((gk.map(|c| c as f64), f64::from(g.parity)))
            })
            .collect::<Result<Vec<_>>>()?;
        let prefactor_z = 1.0 / (SIMPLEX_VOLUME * group.order() as f64).sqrt();
        Ok(Self {
            level,
            terms,
            prefactor_z,
            transforms: FrameTransforms::canonical(),
        })
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// `sqrt|det T_zx| / sqrt(V_D |G|)`, equal to `1 / sqrt(48)` for `L = 1`.
    pub fn prefactor_x(&self) -> f64 {
        self.transforms.det_zx.abs().sqrt() * self.prefactor_z
    }

    /// Sum of the moduli of all plane-wave terms; the natural scale for residuals.
    pub fn term_scale(&self) -> f64 {
        self.prefactor_z * self.terms.len() as f64
    }

    /// The rotated wavevectors and parities.
    pub fn terms(&self) -> &[([f64; 4], f64)] {
        &self.terms
    }

    /// `psi(z)` in natural coordinates.
    pub fn psi_z(&self, z: &[f64; 4]) -> Complex64 {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (gk, parity) in &self.terms {
            let t = gk[0] * z[0] + gk[1] * z[1] + gk[2] * z[2] + gk[3] * z[3];
            // exp(i pi t) is 2-periodic in t
            let reduced = t - 2.0 * (t * 0.5).round();
            let (s, c) = (PI * reduced).sin_cos();
            re.add(parity * c);
            im.add(parity * s);
        }
        Complex64::new(re.value(), im.value()) * self.prefactor_z
    }

    /// `Psi(x)` for particle positions in units of `L`, with `L = 1`.
    ///
    /// Points outside the closed ordered domain are rejected; fold them first.
    pub fn psi_x(&self, x: &[f64; 4]) -> Result<Complex64> {
        let ordered = x[0] >= -1.0 - DOMAIN_TOL
            && x.windows(2).all(|w| w[0] <= w[1] + DOMAIN_TOL)
            && x[3] <= DOMAIN_TOL;
        if !ordered {
            return Err(Error::Domain(format!(
                "{x:?} is not in -L <= x1 <= x2 <= x3 <= x4 <= 0"
            )));
        }
        Ok(self.psi_x_unchecked(x))
    }

    /// `Psi(x)` for positions given in physical length units.
    pub fn psi_x_physical(&self, x: &[f64; 4], length: f64) -> Result<Complex64> {
        let scaled = x.map(|c| c / length);
        Ok(self.psi_x(&scaled)? / (length * length))
    }

    fn psi_x_unchecked(&self, x: &[f64; 4]) -> Complex64 {
        let z = self.transforms.z_from_x(x);
        self.psi_z(&z) * self.transforms.det_zx.abs().sqrt()
    }
}

/// A Monte Carlo estimate of an integral over the ordered particle domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value_re: f64,
    pub value_im: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// `|value - expected|` in units of the standard error.
    pub fn sigmas_from(&self, expected: Complex64) -> f64 {
        (self.value() - expected).norm() / self.std_error
    }
}

/// One uniform point of `-1 < x1 < x2 < x3 < x4 < 0`.
pub fn sample_ordered_simplex<R: Rng>(rng: &mut R) -> [f64; 4] {
    let mut x: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>());
    x.sort_by(f64::total_cmp);
    x
}

/// Integrates `f` over the ordered particle domain (`L = 1`) by uniform sampling.
///
/// Samples are drawn in chunks of fixed size, chunk `c` from ChaCha8 stream
/// `c` of `seed`, and chunk sums are merged in chunk order, so the result
/// does not depend on the number of worker threads.
pub fn mc_integrate<F>(f: F, n_samples: usize, seed: u64) -> McEstimate
where
    F: Fn(&[f64; 4]) -> Complex64 + Sync,
{
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let partials: Vec<[f64; 3]> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(n_samples - c * MC_CHUNK);
            let (mut re, mut im, mut sq) = (0.0, 0.0, 0.0);
            for _ in 0..len {
                let v = f(&sample_ordered_simplex(&mut rng));
                re += v.re;
                im += v.im;
                sq += v.norm_sqr();
            }
            [re, im, sq]
        })
        .collect();

    let [re, im, sq] = partials.iter().fold([0.0; 3], |acc, p| {
        [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]
    });
    let n = n_samples as f64;
    let mean = Complex64::new(re / n, im / n);
    let var = if n_samples > 1 {
        ((sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    McEstimate {
        value_re: ORDERED_SIMPLEX_VOLUME * mean.re,
        value_im: ORDERED_SIMPLEX_VOLUME * mean.im,
        std_error: ORDERED_SIMPLEX_VOLUME * (var / n).sqrt(),
        n_samples,
        seed,
    }
}

fn check_budget(n_samples: usize) -> Result<()> {
    if n_samples < 1000 {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least 1000 samples, got {n_samples}"
        )));
    }
    Ok(())
}

/// `int |Psi|^2` over the particle domain; should be 1.
pub fn mc_normalization(state: &Eigenstate, n_samples: usize, seed: u64) -> Result<McEstimate> {
    check_budget(n_samples)?;
    Ok(mc_integrate(
        |x| Complex64::new(state.psi_x_unchecked(x).norm_sqr(), 0.0),
        n_samples,
        seed,
    ))
}

/// `int conj(Psi_a) Psi_b` over the particle domain; should be 0 for distinct states.
pub fn mc_overlap(
    a: &Eigenstate,
    b: &Eigenstate,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_budget(n_samples)?;
    Ok(mc_integrate(
        |x| a.psi_x_unchecked(x).conj() * b.psi_x_unchecked(x),
        n_samples,
        seed,
    ))
}

/// A 2-sphere cut from 4-space by a 3-plane and a 3-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    /// Plane `normal . z = offset`.
    pub normal: [f64; 4],
    pub offset: f64,
    pub center: [f64; 4],
    pub radius: f64,
    /// Direction of the viewer; the hemisphere facing it is sampled. Projected into the plane.
    pub pole: Option<[f64; 4]>,
    /// Direction of zero longitude. Projected into the plane.
    pub reference: Option<[f64; 4]>,
    pub resolution: usize,
}

impl SliceSpec {
    /// The same slice moved by an orthogonal map.
    pub fn transformed(&self, m: &[[f64; 4]; 4]) -> Self {
        let apply = |v: &[f64; 4]| -> [f64; 4] {
            std::array::from_fn(|i| (0..4).map(|k| m[i][k] * v[k]).sum())
        };
        Self {
            normal: apply(&self.normal),
            center: apply(&self.center),
            pole: Some(apply(&self.pole.unwrap_or(self.default_axes().0))),
            reference: Some(apply(&self.reference.unwrap_or(self.default_axes().1))),
            ..*self
        }
    }

    fn default_axes(&self) -> ([f64; 4], [f64; 4]) {
        let n = normalize(&self.normal).unwrap_or([1.0, 0.0, 0.0, 0.0]);
        let mut axes = unit_vectors();
        // standard axes least aligned with the normal first
        axes.sort_by(|a, b| dot(a, &n).abs().total_cmp(&dot(b, &n).abs()));
        (axes[0], axes[1])
    }
}

fn unit_vectors() -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &[f64; 4]) -> Option<[f64; 4]> {
    let n = dot(v, v).sqrt();
    (n > 1e-12).then(|| v.map(|c| c / n))
}

fn reject(v: &[f64; 4], basis: &[[f64; 4]]) -> [f64; 4] {
    let mut out = *v;
    for b in basis {
        let d = dot(&out, b);
        for (o, bc) in out.iter_mut().zip(b) {
            *o -= d * bc;
        }
    }
    out
}

/// The vector orthogonal to `a, b, c` with components given by signed 3x3 minors.
fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let det3 = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)]
}

/// One sample of a density section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub lon: f64,
    pub lat: f64,
    pub density: f64,
    pub z: [f64; 4],
    /// Orthographic projection onto the viewing plane.
    pub projected: [f64; 2],
}

/// Sample points of a slice: `(lon, lat, z)`, without densities.
pub fn section_points(spec: &SliceSpec) -> Result<Vec<(f64, f64, [f64; 4])>> {
    let n_hat = normalize(&spec.normal)
        .ok_or_else(|| Error::InvalidArgument("plane normal is zero".into()))?;
    if !(spec.radius.is_finite() && spec.radius >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad sphere radius {}",
            spec.radius
        )));
    }
    let plane_offset = spec.offset / dot(&spec.normal, &spec.normal).sqrt();
    let dist = dot(&n_hat, &spec.center) - plane_offset;
    let rho2 = spec.radius * spec.radius - dist * dist;
    let scale_tol = 1e-12 * spec.radius.max(1.0);
    if rho2 < -scale_tol {
        return Err(Error::InvalidArgument(format!(
            "plane lies {} from the sphere centre, beyond radius {}",
            dist.abs(),
            spec.radius
        )));
    }
    let rho = rho2.max(0.0).sqrt();
    let c: [f64; 4] = std::array::from_fn(|i| spec.center[i] - dist * n_hat[i]);
    if rho <= scale_tol {
        return Ok(vec![(0.0, PI / 2.0, c)]);
    }
    if spec.resolution < 16 {
        return Err(Error::InvalidArgument(format!(
            "resolution {} below the minimum of 16",
            spec.resolution
        )));
    }

    let (def_pole, def_ref) = spec.default_axes();
    let pole = spec.pole.unwrap_or(def_pole);
    let reference = spec.reference.unwrap_or(def_ref);
    let e3 = normalize(&reject(&pole, &[n_hat]))
        .ok_or_else(|| Error::InvalidArgument("pole is parallel to the plane normal".into()))?;
    let e1 = normalize(&reject(&reference, &[n_hat, e3])).ok_or_else(|| {
        Error::InvalidArgument("reference direction degenerate within the plane".into())
    })?;
    let e2 = cross4(&n_hat, &e3, &e1);

    let r = spec.resolution;
    let mut out = Vec::with_capacity(r * r);
    for i in 0..r {
        let lat = (PI / 2.0) * (i as f64 + 0.5) / r as f64;
        let (sl, cl) = lat.sin_cos();
        for j in 0..r {
            let lon = 2.0 * PI * j as f64 / r as f64;
            let (so, co) = lon.sin_cos();
            let z = std::array::from_fn(|k| {
                c[k] + rho * (cl * co * e1[k] + cl * so * e2[k] + sl * e3[k])
            });
            out.push((lon, lat, z));
        }
    }
    Ok(out)
}

/// `|psi|^2` on the hemisphere of a slice facing the viewer.
///
/// Each point is folded into the fundamental simplex before evaluation;
/// `|psi|` is invariant under the affine group so this only shortens phases.
pub fn density_section(
    state: &Eigenstate,
    tiling: &Tiling,
    spec: &SliceSpec,
) -> Result<Vec<DensitySample>> {
    let points = section_points(spec)?;
    let rho_proj = |lat: f64| lat.cos();
    points
        .into_par_iter()
        .map(|(lon, lat, z)| {
            let folded = tiling.fold(&z)?;
            let density = state.psi_z(&folded.z).norm_sqr();
            let r = rho_proj(lat);
            Ok(DensitySample {
                lon,
                lat,
                density,
                z,
                projected: [r * lon.cos(), r * lon.sin()],
            })
        })
        .collect()
}

pub const DENSITY_CSV_HEADER: &str = "lon,lat,density";

pub fn write_density_csv<W: Write>(samples: &[DensitySample], mut out: W) -> io::Result<()> {
    writeln!(out, "{DENSITY_CSV_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{}",
            sig15(s.lon),
            sig15(s.lat),
            sig15(s.density)
        )?;
    }
    Ok(())
}
