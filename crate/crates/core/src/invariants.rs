//! The four basic F4-invariant polynomials and the conserved quantities built from them.

use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix4;
use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobi::FrameTransforms;
use crate::root_system::{GroupElement, ReflectionGroup};
use crate::spectrum::Level;

/// Degrees of `w_1 .. w_4`.
pub const DEGREES: [u32; 4] = [2, 6, 8, 12];

/// Central-difference step for the Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// A point where all four gradients are independent.
pub const GENERIC_POINT: [f64; 4] = [1.0, 0.9, 0.7, 0.3];

/// One of `w_1 .. w_4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InvariantPolynomial {
    index: usize,
}

impl InvariantPolynomial {
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=4).contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "invariant index {m} not in 1..=4"
            )));
        }
        Ok(Self { index: m })
    }

    pub fn all() -> [Self; 4] {
        std::array::from_fn(|i| Self { index: i + 1 })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn degree(&self) -> u32 {
        DEGREES[self.index - 1]
    }

    pub fn eval<T>(&self, v: &[T; 4]) -> T
    where
        T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
    {
        power_sum(v, self.degree())
    }
}

fn pow<T>(x: T, mut e: u32) -> T
where
    T: Clone + One + Mul<Output = T>,
{
    let mut base = x;
    let mut acc = T::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `sum_{i<j} (v_i - v_j)^l + (v_i + v_j)^l`.
pub fn power_sum<T>(v: &[T; 4], degree: u32) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut total = T::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            total = total
                + pow(v[i].clone() - v[j].clone(), degree)
                + pow(v[i].clone() + v[j].clone(), degree);
        }
    }
    total
}

/// `w_M(v)`.
pub fn eval_w<T>(m: usize, v: &[T; 4]) -> Result<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    Ok(InvariantPolynomial::new(m)?.eval(v))
}

/// `g v` in exact rational arithmetic.
pub fn apply_exact(g: &GroupElement, v: &[BigRational; 4]) -> [BigRational; 4] {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let m = g.matrix.twice();
    std::array::from_fn(|i| {
        let mut acc = BigRational::zero();
        for (k, vk) in v.iter().enumerate() {
            if m[i][k] != 0 {
                acc += vk * BigRational::from_integer(BigInt::from(m[i][k]));
            }
        }
        acc * &half
    })
}

/// A random rational 4-vector with small numerators and denominators.
pub fn random_rational_point<R: Rng>(rng: &mut R) -> [BigRational; 4] {
    std::array::from_fn(|_| {
        let num: i64 = rng.random_range(-60..=60);
        let den: i64 = rng.random_range(1..=12);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    })
}

/// Whether `f(g v) == f(v)` exactly for every group element at `n_points` random rational `v`.
pub fn check_invariance_of<F>(f: F, group: &ReflectionGroup, n_points: usize, seed: u64) -> bool
where
    F: Fn(&[BigRational; 4]) -> BigRational + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..n_points)
        .map(|_| random_rational_point(&mut rng))
        .collect();
    points.iter().all(|v| {
        let reference = f(v);
        group
            .elements()
            .par_iter()
            .all(|g| f(&apply_exact(g, v)) == reference)
    })
}

/// Exact invariance of `w_M` under the whole group.
pub fn check_invariance(
    m: usize,
    group: &ReflectionGroup,
    n_points: usize,
    seed: u64,
) -> Result<bool> {
    let w = InvariantPolynomial::new(m)?;
    Ok(check_invariance_of(|v| w.eval(v), group, n_points, seed))
}

/// `w_M(k)` for an eigenstate, in units of `(pi hbar / L)^l_M`.
pub fn operator_eigenvalue(m: usize, level: &Level) -> Result<BigInt> {
    let k = level.k.map(BigInt::from);
    eval_w(m, &k)
}

/// `hbar^2 w_1(k) / (144 m)` and `E` in units `pi^2 hbar^2 / (m L^2)`, with `m = m3`.
pub fn hamiltonian_identity_sides(level: &Level) -> (BigRational, BigRational) {
    let w1 = operator_eigenvalue(1, level).expect("index 1 is valid");
    let lhs = BigRational::new(w1, BigInt::from(144));
    let rhs = BigRational::new(BigInt::from(level.e_int), BigInt::from(6));
    (lhs, rhs)
}

/// `I_M = w_M(((T_zx)^-1)^T p_x)`.
pub fn classical_i(m: usize, p_x: &[f64; 4], transforms: &FrameTransforms) -> Result<f64> {
    eval_w(m, &transforms.pz_from_px(p_x))
}

/// All four `I_M` at once.
pub fn classical_integrals(p_x: &[f64; 4], transforms: &FrameTransforms) -> [f64; 4] {
    let pz = transforms.pz_from_px(p_x);
    InvariantPolynomial::all().map(|w| w.eval(&pz))
}

/// Jacobian of `(w_1, .., w_4)` by central differences; row `M-1` is `grad w_M`.
pub fn jacobian(point: &[f64; 4]) -> Matrix4<f64> {
    let h = JACOBIAN_STEP;
    let mut jac = Matrix4::zeros();
    for (row, w) in InvariantPolynomial::all().iter().enumerate() {
        for col in 0..4 {
            let mut plus = *point;
            let mut minus = *point;
            plus[col] += h;
            minus[col] -= h;
            jac[(row, col)] = (w.eval(&plus) - w.eval(&minus)) / (2.0 * h);
        }
    }
    jac
}

/// Numerical rank of the Jacobian at `point`.
pub fn independence_check(point: &[f64; 4]) -> usize {
    let sv = jacobian(point).singular_values();
    let largest = sv.max();
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * largest).count()
}
