//! Mass chain bookkeeping and the particle (x), mass-scaled (y) and natural (z)
//! coordinate frames.
//!
//! Six particles on a line, the outer two infinitely heavy, become a single
//! point in a 4-simplex once coordinates are scaled by `sqrt(m_i / M)`. The
//! dihedral angles of that simplex depend on mass ratios only.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::root_system::{HalfIntVec4, ALPHA_0, ALPHA_1, ALPHA_2, ALPHA_3, ALPHA_4};

/// A particle mass in units of `m`. Walls are infinitely heavy particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mass {
    Finite(f64),
    Infinite,
}

impl Mass {
    fn finite(self) -> Option<f64> {
        match self {
            Mass::Finite(m) => Some(m),
            Mass::Infinite => None,
        }
    }
}

/// Masses `m0 .. m5` of the six-particle chain, in units of `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassChain {
    pub masses: [Mass; 6],
}

impl MassChain {
    /// The solvable chain: wall, 6m, 2m, m, 3m, wall.
    pub fn canonical() -> Self {
        use Mass::*;
        Self {
            masses: [
                Infinite,
                Finite(6.0),
                Finite(2.0),
                Finite(1.0),
                Finite(3.0),
                Infinite,
            ],
        }
    }

    pub fn new(masses: [Mass; 6]) -> Result<Self> {
        for m in masses.iter().filter_map(|m| m.finite()) {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "mass {m} must be nonnegative"
                )));
            }
        }
        Ok(Self { masses })
    }

    /// Finite masses multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            masses: self.masses.map(|m| match m {
                Mass::Finite(v) => Mass::Finite(v * c),
                Mass::Infinite => Mass::Infinite,
            }),
        }
    }

    /// Masses of the four mobile particles, if both ends are walls and the rest finite.
    pub fn particle_masses(&self) -> Option<[f64; 4]> {
        if self.masses[0] != Mass::Infinite || self.masses[5] != Mass::Infinite {
            return None;
        }
        let mut out = [0.0; 4];
        for (o, m) in out.iter_mut().zip(&self.masses[1..5]) {
            *o = m.finite()?;
        }
        Some(out)
    }

    /// Whether this is the canonical chain up to an overall scale.
    pub fn is_canonical(&self) -> bool {
        match self.particle_masses() {
            Some(m) if m[2] > 0.0 => {
                let expected = [6.0, 2.0, 1.0, 3.0];
                m.iter()
                    .zip(expected)
                    .all(|(a, e)| (a / m[2] - e).abs() <= 1e-12 * e)
            }
            _ => false,
        }
    }
}

/// Masses of the canonical chain's four particles in units of `m3`.
pub const PARTICLE_MASSES: [f64; 4] = [6.0, 2.0, 1.0, 3.0];

/// Mass of the equivalent single 4D particle, `M = 2 m1 = 12 m3`.
pub const REDUCED_MASS: f64 = 12.0;

/// Angle between the contact hyperplanes of particles `(i, i+1)` and `(i+1, i+2)`.
pub fn contact_angle(chain: &MassChain, i: usize) -> Result<f64> {
    if i > 3 {
        return Err(Error::InvalidArgument(format!(
            "triplet index {i} not in 0..=3"
        )));
    }
    let [left, mid, right] = [chain.masses[i], chain.masses[i + 1], chain.masses[i + 2]];
    let mid = mid
        .finite()
        .ok_or_else(|| Error::InvalidArgument(format!("middle mass of triplet {i} is infinite")))?;
    // tan^2 = m1 (m0 + m1 + m2) / (m0 m2), with infinite neighbours taken as limits
    let tan2 = match (left.finite(), right.finite()) {
        (Some(a), Some(b)) => mid * (a + mid + b) / (a * b),
        (None, Some(b)) => mid / b,
        (Some(a), None) => mid / a,
        (None, None) => {
            return Err(Error::InvalidArgument(format!(
                "triplet {i} has two infinite masses"
            )))
        }
    };
    if tan2.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "triplet {i} angle is undefined"
        )));
    }
    Ok(tan2.sqrt().atan())
}

/// All four contact angles of a chain.
pub fn contact_angles(chain: &MassChain) -> Result<[f64; 4]> {
    Ok([
        contact_angle(chain, 0)?,
        contact_angle(chain, 1)?,
        contact_angle(chain, 2)?,
        contact_angle(chain, 3)?,
    ])
}

/// The Coxeter angles of the affine F4 diagram, left to right.
pub const F4_TARGET_ANGLES: [f64; 4] = [PI / 3.0, PI / 3.0, PI / 4.0, PI / 3.0];

/// Mass ratios `(m1, m2, m4) / m3` reproducing a set of contact angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSolution {
    pub ratios: [f64; 3],
    /// Euclidean norm of the log-residuals of the four angle equations.
    pub residual: f64,
}

impl MassSolution {
    pub fn chain(&self) -> MassChain {
        let [m1, m2, m4] = self.ratios;
        MassChain {
            masses: [
                Mass::Infinite,
                Mass::Finite(m1),
                Mass::Finite(m2),
                Mass::Finite(1.0),
                Mass::Finite(m4),
                Mass::Infinite,
            ],
        }
    }
}

const SOLVE_TOL: f64 = 1e-13;
const SOLVE_MAX_ITER: usize = 200;

/// Recovers the mass ratios of a wall-bounded chain from its four contact angles.
///
/// With `m0 = m5 = inf` and `m3 = 1` the angles give four equations in the
/// three unknowns `u = ln(m1, m2, m4)`; they are solved in the least-squares
/// sense by Gauss-Newton from a grid of starting points. Only an exact
/// (zero-residual) positive solution is accepted.
pub fn solve_mass_chain(targets: [f64; 4]) -> Result<MassSolution> {
    let mut log_targets = [0.0; 4];
    for (lt, &theta) in log_targets.iter_mut().zip(&targets) {
        if !(theta > 0.0 && theta < PI / 2.0) || (PI / 2.0 - theta) < 1e-12 {
            return Err(Error::NoSolution(format!(
                "angle {theta} has no finite positive tangent; ratio equations degenerate"
            )));
        }
        *lt = 2.0 * theta.tan().ln();
    }

    let residuals = |u: &Vector3<f64>| -> ([f64; 4], [[f64; 3]; 4]) {
        let (m1, m2, m4) = (u[0].exp(), u[1].exp(), u[2].exp());
        let s1 = m1 + m2 + 1.0;
        let s2 = m2 + 1.0 + m4;
        let f = [
            u[0] - u[1],
            u[1] + s1.ln() - u[0],
            s2.ln() - u[1] - u[2],
            u[2],
        ];
        let jac = [
            [1.0, -1.0, 0.0],
            [m1 / s1 - 1.0, 1.0 + m2 / s1, 0.0],
            [0.0, m2 / s2 - 1.0, m4 / s2 - 1.0],
            [0.0, 0.0, 1.0],
        ];
        let r = std::array::from_fn(|j| f[j] - log_targets[j]);
        (r, jac)
    };
    let norm = |r: &[f64; 4]| r.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut found: Vec<MassSolution> = Vec::new();
    let starts = [-2.0, 0.0, 2.0];
    for &a in &starts {
        for &b in &starts {
            for &c in &starts {
                let mut u = Vector3::new(a, b, c);
                for _ in 0..SOLVE_MAX_ITER {
                    let (r, jac) = residuals(&u);
                    if norm(&r) < SOLVE_TOL {
                        break;
                    }
                    let j = nalgebra::Matrix4x3::from_fn(|row, col| jac[row][col]);
                    let rv = nalgebra::Vector4::from_column_slice(&r);
                    let jtj: Matrix3<f64> = j.transpose() * j;
                    let Some(step) = jtj.lu().solve(&(-(j.transpose() * rv))) else {
                        break;
                    };
                    // keep log-masses from running off during early iterations
                    let scale = (2.0 / step.amax()).min(1.0);
                    u += step * scale;
                    if !u.iter().all(|x| x.is_finite() && x.abs() < 50.0) {
                        break;
                    }
                }
                let (r, _) = residuals(&u);
                let res = norm(&r);
                if res < 1e-11 {
                    let ratios = [u[0].exp(), u[1].exp(), u[2].exp()];
                    if !found.iter().any(|s| {
                        s.ratios
                            .iter()
                            .zip(&ratios)
                            .all(|(x, y)| (x - y).abs() < 1e-8 * y)
                    }) {
                        found.push(MassSolution {
                            ratios,
                            residual: res,
                        });
                    }
                }
            }
        }
    }

    match found.len() {
        0 => Err(Error::NoSolution(
            "no positive mass ratios reproduce the requested angles".into(),
        )),
        1 => Ok(found[0]),
        n => Err(Error::Internal(format!(
            "{n} distinct mass solutions; the angle equations should have one"
        ))),
    }
}

/// Fixed rotation-inversion taking mass-scaled coordinates to natural ones.
pub fn t_zy() -> Matrix4<f64> {
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    #[rustfmt::skip]
    let m = Matrix4::new(
        -s6, -s2,        -1.0, -s3,
        -s6,  s2,         1.0,  s3,
        0.0, -2.0 * s2,   1.0,  s3,
        0.0,  0.0,       -3.0,  s3,
    );
    m / (2.0 * s3)
}

/// Reference particle-to-natural matrix with integer entries over 12.
pub fn reference_t_zx() -> Matrix4<f64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        -6.0, -2.0, -1.0, -3.0,
        -6.0,  2.0,  1.0,  3.0,
         0.0, -4.0,  1.0,  3.0,
         0.0,  0.0, -3.0,  3.0,
    );
    m / 12.0
}

/// Coordinate maps between the three frames of the canonical chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTransforms {
    pub t_zy: Matrix4<f64>,
    pub t_zx: Matrix4<f64>,
    /// Determinant of `t_zx` for `L = 1`; scales as `L^-4` otherwise.
    pub det_zx: f64,
    /// `((T_zx)^-1)^T`, taking particle momenta to natural-frame momenta.
    pub momentum_map: Matrix4<f64>,
    pub masses: [f64; 4],
}

/// Composes the mass scaling with `T_zy` and checks the result against the
/// reference integer matrix.
pub fn build_transforms(chain: &MassChain) -> Result<FrameTransforms> {
    if !chain.is_canonical() {
        return Err(Error::Unsupported(
            "only the 6:2:1:3 wall-bounded chain is supported".into(),
        ));
    }
    let masses = PARTICLE_MASSES;
    let scale = Matrix4::from_diagonal(&masses.map(|m| (m / REDUCED_MASS).sqrt()).into());
    let inv_scale = Matrix4::from_diagonal(&masses.map(|m| (REDUCED_MASS / m).sqrt()).into());
    let t_zy = t_zy();
    let t_zx = t_zy * scale;
    let max_dev = (t_zx - reference_t_zx()).amax();
    if max_dev > 1e-14 {
        return Err(Error::Internal(format!(
            "T_zx deviates from reference matrix by {max_dev:e}"
        )));
    }
    Ok(FrameTransforms {
        t_zy,
        det_zx: t_zx.determinant(),
        // T_zy is orthogonal, so (T_zy S)^-T = T_zy S^-1
        momentum_map: t_zy * inv_scale,
        t_zx,
        masses,
    })
}

impl FrameTransforms {
    pub fn canonical() -> Self {
        build_transforms(&MassChain::canonical()).expect("canonical chain is supported")
    }

    /// Natural coordinates of particle positions given in units of `L`.
    pub fn z_from_x(&self, x: &[f64; 4]) -> [f64; 4] {
        let v = self.t_zx * nalgebra::Vector4::from_column_slice(x);
        [v[0], v[1], v[2], v[3]]
    }

    pub fn x_from_z(&self, z: &[f64; 4]) -> Option<[f64; 4]> {
        let inv = self.t_zx.try_inverse()?;
        let v = inv * nalgebra::Vector4::from_column_slice(z);
        Some([v[0], v[1], v[2], v[3]])
    }

    /// Natural-frame momentum of particle momenta.
    pub fn pz_from_px(&self, p: &[f64; 4]) -> [f64; 4] {
        let v = self.momentum_map * nalgebra::Vector4::from_column_slice(p);
        [v[0], v[1], v[2], v[3]]
    }
}

/// An open half-space `normal . v > offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: [f64; 4],
    pub offset: f64,
}

impl Halfspace {
    pub fn margin(&self, v: &[f64; 4]) -> f64 {
        self.normal.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }

    pub fn holds(&self, v: &[f64; 4]) -> bool {
        self.margin(v) > 0.0
    }
}

/// The open fundamental simplex, in natural and in particle coordinates.
///
/// Entry `j` of both arrays is the same mirror: 0 is the left wall
/// (`alpha_0`), 1..=3 are the contacts `x_j = x_{j+1}`, and 4 the right wall.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexInequalities {
    pub z: [Halfspace; 5],
    pub exact_z: [(HalfIntVec4, i64); 5],
    pub x: [Halfspace; 5],
}

impl SimplexInequalities {
    pub fn contains_z(&self, z: &[f64; 4]) -> bool {
        self.z.iter().all(|h| h.holds(z))
    }

    pub fn contains_x(&self, x: &[f64; 4]) -> bool {
        self.x.iter().all(|h| h.holds(x))
    }
}

/// Five affine conditions cutting out `D_e`, plus `-L < x1 < x2 < x3 < x4 < 0` with `L = 1`.
pub fn simplex_inequalities() -> SimplexInequalities {
    let exact_z = [
        (ALPHA_0, -1),
        (ALPHA_1, 0),
        (ALPHA_2, 0),
        (ALPHA_3, 0),
        (ALPHA_4, 0),
    ];
    let z = exact_z.map(|(n, o)| Halfspace {
        normal: n.to_f64(),
        offset: o as f64,
    });
    let h = |normal: [f64; 4], offset: f64| Halfspace { normal, offset };
    let x = [
        h([1.0, 0.0, 0.0, 0.0], -1.0),
        h([-1.0, 1.0, 0.0, 0.0], 0.0),
        h([0.0, -1.0, 1.0, 0.0], 0.0),
        h([0.0, 0.0, -1.0, 1.0], 0.0),
        h([0.0, 0.0, 0.0, -1.0], 0.0),
    ];
    SimplexInequalities { z, exact_z, x }
}
