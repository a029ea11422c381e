//! Exact F4 root data, the 1152-element reflection group and the D4 lattice.
//!
//! Every coordinate in this module is a half-integer, stored as an integer
//! numerator over the fixed denominator 2. That keeps equality and hashing
//! exact, which the breadth-first group closure depends on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the size of a generated group before we give up.
pub const GROUP_SIZE_LIMIT: usize = 10_000;

/// Order of the finite reflection group F4.
pub const F4_ORDER: usize = 1152;

/// A vector of four half-integers, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct HalfIntVec4 {
    twice: [i64; 4],
}

impl HalfIntVec4 {
    pub const ZERO: Self = Self { twice: [0; 4] };

    /// Builds the vector whose coordinates are `twice[i] / 2`.
    pub const fn from_twice(twice: [i64; 4]) -> Self {
        Self { twice }
    }

    pub const fn from_ints(v: [i64; 4]) -> Self {
        Self {
            twice: [2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]],
        }
    }

    pub fn twice(&self) -> [i64; 4] {
        self.twice
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.twice.map(|c| c as f64 * 0.5)
    }

    /// Integer coordinates, if every coordinate is whole.
    pub fn to_ints(&self) -> Option<[i64; 4]> {
        if self.twice.iter().all(|c| c % 2 == 0) {
            Some(self.twice.map(|c| c / 2))
        } else {
            None
        }
    }

    /// Four times the Euclidean inner product; always an integer.
    pub fn dot4(&self, other: &Self) -> i64 {
        self.twice
            .iter()
            .zip(other.twice.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Four times the squared length.
    pub fn norm2_4(&self) -> i64 {
        self.dot4(self)
    }

    pub fn dot_f64(&self, z: &[f64; 4]) -> f64 {
        self.twice
            .iter()
            .zip(z.iter())
            .map(|(&a, &b)| a as f64 * 0.5 * b)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.twice == [0; 4]
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            twice: self.twice.map(|c| c * k),
        }
    }
}

impl Add for HalfIntVec4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            twice: std::array::from_fn(|i| self.twice[i] + rhs.twice[i]),
        }
    }
}

impl Sub for HalfIntVec4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            twice: std::array::from_fn(|i| self.twice[i] - rhs.twice[i]),
        }
    }
}

impl Neg for HalfIntVec4 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            twice: self.twice.map(|c| -c),
        }
    }
}

impl fmt::Debug for HalfIntVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HalfIntVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.twice.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if c % 2 == 0 {
                write!(f, "{}", c / 2)?;
            } else {
                write!(f, "{c}/2")?;
            }
        }
        write!(f, ")")
    }
}

/// A 4x4 matrix of half-integers, stored as twice its entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfIntMat4 {
    twice: [[i32; 4]; 4],
}

impl HalfIntMat4 {
    pub const IDENTITY: Self = Self {
        twice: [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
    };

    pub const fn from_twice(twice: [[i32; 4]; 4]) -> Self {
        Self { twice }
    }

    pub fn twice(&self) -> [[i32; 4]; 4] {
        self.twice
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        self.twice.map(|row| row.map(|c| c as f64 * 0.5))
    }

    pub fn transpose(&self) -> Self {
        Self {
            twice: std::array::from_fn(|i| std::array::from_fn(|j| self.twice[j][i])),
        }
    }

    /// Exact product, or `None` if an entry of the result is not a half-integer.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let mut out = [[0i32; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // (A/2)(B/2) = AB/4, whose doubled numerator is AB/2
                let s: i32 = (0..4).map(|k| self.twice[i][k] * rhs.twice[k][j]).sum();
                if s % 2 != 0 {
                    return None;
                }
                *entry = s / 2;
            }
        }
        Some(Self { twice: out })
    }

    /// Exact image of a half-integer vector, if representable.
    pub fn apply(&self, v: &HalfIntVec4) -> Option<HalfIntVec4> {
        let vt = v.twice();
        let mut out = [0i64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let s: i64 = (0..4).map(|k| self.twice[i][k] as i64 * vt[k]).sum();
            if s % 2 != 0 {
                return None;
            }
            *o = s / 2;
        }
        Some(HalfIntVec4::from_twice(out))
    }

    pub fn apply_f64(&self, z: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|k| self.twice[i][k] as f64 * 0.5 * z[k]).sum())
    }

    /// `M^T M == I`, checked exactly.
    pub fn is_orthogonal(&self) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                let s: i32 = (0..4).map(|k| self.twice[k][i] * self.twice[k][j]).sum();
                s == if i == j { 4 } else { 0 }
            })
        })
    }

    /// Exact determinant.
    ///
    /// Returned as sixteen times the determinant, which is always an integer.
    pub fn det16(&self) -> i64 {
        let m = self.twice.map(|r| r.map(i64::from));
        let minor3 = |r: [usize; 3], c: [usize; 3]| -> i64 {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        let mut det = 0;
        for j in 0..4 {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            det += sign * m[0][j] * minor3([1, 2, 3], [cols[0], cols[1], cols[2]]);
        }
        det
    }

    /// Every entry lies in {0, +-1/2, +-1}.
    pub fn entries_in_f4_range(&self) -> bool {
        self.twice.iter().flatten().all(|c| c.abs() <= 2)
    }
}

impl fmt::Debug for HalfIntMat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.twice
                    .iter()
                    .map(|r| HalfIntVec4::from_twice(r.map(i64::from))),
            )
            .finish()
    }
}

/// An element of a finite reflection group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: HalfIntMat4,
    /// +1 or -1; the sign of the element in the alternating sum.
    pub parity: i8,
    /// Length of the shortest generator word found for this element.
    pub word_length: u32,
}

impl GroupElement {
    pub const IDENTITY: Self = Self {
        matrix: HalfIntMat4::IDENTITY,
        parity: 1,
        word_length: 0,
    };

    pub fn apply(&self, v: &HalfIntVec4) -> Option<HalfIntVec4> {
        self.matrix.apply(v)
    }

    pub fn apply_f64(&self, z: &[f64; 4]) -> [f64; 4] {
        self.matrix.apply_f64(z)
    }

    pub fn det(&self) -> i64 {
        self.matrix.det16() / 16
    }
}

/// Reflection `I - 2 a a^T / |a|^2` through the hyperplane orthogonal to `root`.
pub fn reflection_matrix(root: &HalfIntVec4) -> Result<GroupElement> {
    if root.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot reflect about a zero root".into(),
        ));
    }
    let a = root.twice();
    let n = root.norm2_4();
    let mut twice = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            // doubled entry: 2 delta_ij - 4 a_i a_j / (a.a), with a doubled
            let num = 4 * a[i] * a[j];
            if num % n != 0 {
                return Err(Error::InvalidArgument(format!(
                    "reflection about {root} is not a half-integer matrix"
                )));
            }
            let e = if i == j { 2 } else { 0 } - num / n;
            twice[i][j] = i32::try_from(e)
                .map_err(|_| Error::InvalidArgument(format!("root {root} too large")))?;
        }
    }
    Ok(GroupElement {
        matrix: HalfIntMat4::from_twice(twice),
        parity: -1,
        word_length: 1,
    })
}

/// A finite group generated by reflections, stored as a flat table.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    elements: Vec<GroupElement>,
    float_matrices: Vec<[[f64; 4]; 4]>,
    lookup: HashMap<HalfIntMat4, usize>,
}

/// Breadth-first closure of the reflections about `roots`.
///
/// Elements are stored in discovery order, so the identity is at index 0 and
/// word lengths are shortest.
pub fn generate_group(roots: &[HalfIntVec4]) -> Result<ReflectionGroup> {
    let generators = roots
        .iter()
        .map(reflection_matrix)
        .collect::<Result<Vec<_>>>()?;

    let mut elements = vec![GroupElement::IDENTITY];
    let mut lookup = HashMap::from([(HalfIntMat4::IDENTITY, 0usize)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(idx) = queue.pop_front() {
        let current = elements[idx];
        for r in &generators {
            let product = current.matrix.checked_mul(&r.matrix).ok_or_else(|| {
                Error::Internal("group product left the half-integer matrices".into())
            })?;
            if lookup.contains_key(&product) {
                continue;
            }
            if elements.len() >= GROUP_SIZE_LIMIT {
                return Err(Error::Internal(format!(
                    "group closure exceeded {GROUP_SIZE_LIMIT} elements; roots do not generate a finite reflection group"
                )));
            }
            let word_length = current.word_length + 1;
            let parity = if word_length % 2 == 0 { 1 } else { -1 };
            let det16 = product.det16();
            if det16 != 16 * i64::from(parity) {
                return Err(Error::Internal(format!(
                    "parity {parity} disagrees with determinant {}/16",
                    det16
                )));
            }
            lookup.insert(product, elements.len());
            queue.push_back(elements.len());
            elements.push(GroupElement {
                matrix: product,
                parity,
                word_length,
            });
        }
    }

    let float_matrices = elements.iter().map(|g| g.matrix.to_f64()).collect();
    Ok(ReflectionGroup {
        elements,
        float_matrices,
        lookup,
    })
}

impl ReflectionGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &GroupElement {
        &self.elements[idx]
    }

    pub fn float_matrix(&self, idx: usize) -> &[[f64; 4]; 4] {
        &self.float_matrices[idx]
    }

    pub fn index_of(&self, m: &HalfIntMat4) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn get(&self, m: &HalfIntMat4) -> Option<&GroupElement> {
        self.index_of(m).map(|i| &self.elements[i])
    }

    /// `{g v : g in G}` in sorted order.
    pub fn orbit(&self, v: &HalfIntVec4) -> Result<Vec<HalfIntVec4>> {
        let mut set = BTreeSet::new();
        for g in &self.elements {
            let image = g.apply(v).ok_or_else(|| {
                Error::InvalidArgument(format!("orbit of {v} leaves the half-integer lattice"))
            })?;
            set.insert(image);
        }
        Ok(set.into_iter().collect())
    }

    /// Index of the group element closest to `m` in max-norm, with that distance.
    pub fn nearest(&self, m: &[[f64; 4]; 4]) -> (usize, f64) {
        self.float_matrices
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let d = (0..4)
                    .flat_map(|r| (0..4).map(move |c| (r, c)))
                    .map(|(r, c)| (g[r][c] - m[r][c]).abs())
                    .fold(0.0, f64::max);
                (i, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("group is never empty")
    }

    /// Serializable dump of the whole table.
    pub fn dump(&self) -> GroupDump {
        GroupDump {
            order: self.order(),
            elements: self
                .elements
                .iter()
                .map(|g| GroupDumpEntry {
                    matrix_twice: g.matrix.twice(),
                    parity: g.parity,
                    word_length: g.word_length,
                })
                .collect(),
        }
    }
}

/// JSON layout of a group table: entries are integers equal to twice the matrix entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDump {
    pub order: usize,
    pub elements: Vec<GroupDumpEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDumpEntry {
    pub matrix_twice: [[i32; 4]; 4],
    pub parity: i8,
    pub word_length: u32,
}

/// The F4 root data: simple roots, the minimal root, and all 48 roots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    /// alpha_1 .. alpha_4.
    pub simple_roots: [HalfIntVec4; 4],
    /// alpha_0, the negative of the highest root.
    pub minimal_root: HalfIntVec4,
    pub all_roots: Vec<HalfIntVec4>,
}

pub const ALPHA_0: HalfIntVec4 = HalfIntVec4::from_ints([-1, -1, 0, 0]);
pub const ALPHA_1: HalfIntVec4 = HalfIntVec4::from_ints([0, 1, -1, 0]);
pub const ALPHA_2: HalfIntVec4 = HalfIntVec4::from_ints([0, 0, 1, -1]);
pub const ALPHA_3: HalfIntVec4 = HalfIntVec4::from_ints([0, 0, 0, 1]);
pub const ALPHA_4: HalfIntVec4 = HalfIntVec4::from_twice([1, -1, -1, -1]);

impl RootSystem {
    pub fn f4() -> Self {
        let mut all = BTreeSet::new();
        // long roots: permutations and signs of (1, 1, 0, 0)
        for i in 0..4 {
            for j in (i + 1)..4 {
                for si in [-2, 2] {
                    for sj in [-2, 2] {
                        let mut t = [0; 4];
                        t[i] = si;
                        t[j] = sj;
                        all.insert(HalfIntVec4::from_twice(t));
                    }
                }
            }
        }
        // short roots: (+-1, 0, 0, 0) and (+-1/2, +-1/2, +-1/2, +-1/2)
        for i in 0..4 {
            for s in [-2, 2] {
                let mut t = [0; 4];
                t[i] = s;
                all.insert(HalfIntVec4::from_twice(t));
            }
        }
        for mask in 0..16 {
            let t = std::array::from_fn(|i| if mask & (1 << i) != 0 { -1 } else { 1 });
            all.insert(HalfIntVec4::from_twice(t));
        }

        Self {
            simple_roots: [ALPHA_1, ALPHA_2, ALPHA_3, ALPHA_4],
            minimal_root: ALPHA_0,
            all_roots: all.into_iter().collect(),
        }
    }

    /// Mirror normal `j` of the affine simplex: 0 is the minimal root, 1..=4 the simple roots.
    pub fn mirror(&self, j: usize) -> Result<HalfIntVec4> {
        match j {
            0 => Ok(self.minimal_root),
            1..=4 => Ok(self.simple_roots[j - 1]),
            _ => Err(Error::InvalidArgument(format!(
                "mirror index {j} not in 0..=4"
            ))),
        }
    }

    /// The finite group generated by the four simple reflections.
    pub fn group(&self) -> Result<ReflectionGroup> {
        generate_group(&self.simple_roots)
    }

    /// Order of `R_i R_j` for mirrors `i, j` in 0..=4.
    pub fn coxeter_order_check(&self, i: usize, j: usize) -> Result<u32> {
        let ri = reflection_matrix(&self.mirror(i)?)?.matrix;
        let rj = reflection_matrix(&self.mirror(j)?)?.matrix;
        let prod = ri
            .checked_mul(&rj)
            .ok_or_else(|| Error::Internal("mirror product not half-integral".into()))?;
        let mut power = prod;
        for n in 1..=12 {
            if power == HalfIntMat4::IDENTITY {
                return Ok(n);
            }
            power = power
                .checked_mul(&prod)
                .ok_or_else(|| Error::Internal("mirror power not half-integral".into()))?;
        }
        Err(Error::Internal(format!("R_{i} R_{j} has order above 12")))
    }
}

/// The D4 lattice of octacube centres and its reciprocal.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub generators: [HalfIntVec4; 4],
    /// Reciprocal vectors in units of `pi / L`.
    pub reciprocal: [[i64; 4]; 4],
}

impl Lattice {
    pub fn d4() -> Self {
        Self {
            generators: [
                HalfIntVec4::from_ints([1, -1, 0, 0]),
                HalfIntVec4::from_ints([0, 1, -1, 0]),
                HalfIntVec4::from_ints([0, 0, 1, -1]),
                HalfIntVec4::from_ints([0, 0, 1, 1]),
            ],
            reciprocal: [[2, 0, 0, 0], [2, 2, 0, 0], [1, 1, 1, -1], [1, 1, 1, 1]],
        }
    }

    /// `kappa_i . a_j` in units of `pi`; equals `2 delta_ij`.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        let a = self.generators[j].twice();
        let k = self.reciprocal[i];
        let s: i64 = (0..4).map(|c| k[c] * a[c]).sum();
        s / 2
    }

    /// `|det(a_1 .. a_4)|`.
    pub fn cell_volume(&self) -> i64 {
        let m = HalfIntMat4::from_twice(std::array::from_fn(|i| {
            self.generators[i].twice().map(|c| c as i32)
        }));
        (m.det16() / 16).abs()
    }

    /// Integer lattice vector `sum_i c_i a_i`.
    pub fn combine(&self, coeffs: [i64; 4]) -> HalfIntVec4 {
        self.generators
            .iter()
            .zip(coeffs)
            .fold(HalfIntVec4::ZERO, |acc, (a, c)| acc + a.scale(c))
    }

    /// Whether an integer point belongs to the lattice (even coordinate sum).
    pub fn contains(v: &[i64; 4]) -> bool {
        v.iter().sum::<i64>().rem_euclid(2) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_group() -> ReflectionGroup {
        RootSystem::f4().group().unwrap()
    }

    #[test]
    fn reflection_negates_its_root() {
        let r3 = reflection_matrix(&ALPHA_3).unwrap();
        assert_eq!(r3.apply(&ALPHA_3), Some(-ALPHA_3));
        let r4 = reflection_matrix(&ALPHA_4).unwrap();
        assert_eq!(r4.apply(&ALPHA_4), Some(-ALPHA_4));
        assert_eq!(r4.parity, -1);
        assert_eq!(r4.word_length, 1);
        assert_eq!(r4.det(), -1);
    }

    #[test]
    fn reflection_alpha1_swaps_coordinates_two_and_three() {
        let r1 = reflection_matrix(&ALPHA_1).unwrap();
        let e3 = HalfIntVec4::from_ints([0, 0, 1, 0]);
        assert_eq!(r1.apply(&e3), Some(HalfIntVec4::from_ints([0, 1, 0, 0])));
    }

    #[test]
    fn zero_root_is_rejected() {
        assert!(matches!(
            reflection_matrix(&HalfIntVec4::ZERO),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn f4_has_order_1152_with_even_parity_split() {
        let g = f4_group();
        assert_eq!(g.order(), F4_ORDER);
        let even = g.elements().iter().filter(|e| e.parity == 1).count();
        assert_eq!(even, 576);
        let id = g.element(0);
        assert_eq!(id.matrix, HalfIntMat4::IDENTITY);
        assert_eq!((id.word_length, id.parity), (0, 1));
    }

    #[test]
    fn every_element_is_orthogonal_with_matching_parity() {
        for e in f4_group().elements() {
            assert!(e.matrix.is_orthogonal());
            assert_eq!(e.det(), i64::from(e.parity));
            assert!(e.matrix.entries_in_f4_range());
            let expected = if e.word_length % 2 == 0 { 1 } else { -1 };
            assert_eq!(e.parity, expected);
        }
    }

    #[test]
    fn single_reflection_generates_z2() {
        let g = generate_group(&[ALPHA_1]).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn roots_are_stable_and_split_into_two_orbits() {
        let rs = RootSystem::f4();
        assert_eq!(rs.all_roots.len(), 48);
        let g = f4_group();
        let roots: BTreeSet<_> = rs.all_roots.iter().copied().collect();
        for r in &rs.all_roots {
            assert!(roots.contains(&-*r));
        }
        for e in g.elements() {
            for r in &rs.all_roots {
                assert!(roots.contains(&e.apply(r).unwrap()));
            }
        }
        let long = g.orbit(&ALPHA_1).unwrap();
        let short = g.orbit(&ALPHA_3).unwrap();
        assert_eq!(long.len(), 24);
        assert_eq!(short.len(), 24);
        assert!(long.iter().all(|r| r.norm2_4() == 8));
        assert!(short.iter().all(|r| r.norm2_4() == 4));
        // any root of the same length class sweeps out the whole class
        for r in &rs.all_roots {
            let orbit = g.orbit(r).unwrap();
            assert_eq!(
                orbit,
                if r.norm2_4() == 8 {
                    long.clone()
                } else {
                    short.clone()
                }
            );
        }
    }

    #[test]
    fn orbit_of_minimal_root_is_long_roots() {
        let g = f4_group();
        let orbit = g.orbit(&ALPHA_0).unwrap();
        assert_eq!(orbit.len(), 24);
        for v in &orbit {
            let t = v.twice();
            assert_eq!(t.iter().filter(|c| c.abs() == 2).count(), 2);
            assert_eq!(t.iter().filter(|&&c| c == 0).count(), 2);
        }
        assert_eq!(
            g.orbit(&HalfIntVec4::ZERO).unwrap(),
            vec![HalfIntVec4::ZERO]
        );
    }

    #[test]
    fn coxeter_orders_reproduce_affine_f4_diagram() {
        let rs = RootSystem::f4();
        let consecutive = [(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)];
        for (i, j, m) in consecutive {
            assert_eq!(rs.coxeter_order_check(i, j).unwrap(), m, "({i},{j})");
        }
        for i in 0..5 {
            assert_eq!(rs.coxeter_order_check(i, i).unwrap(), 1);
            for j in (i + 2)..5 {
                assert_eq!(rs.coxeter_order_check(i, j).unwrap(), 2, "({i},{j})");
            }
        }
        assert!(rs.coxeter_order_check(0, 5).is_err());
    }

    #[test]
    fn lattice_and_reciprocal_are_dual() {
        let l = Lattice::d4();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l.pairing(i, j), if i == j { 2 } else { 0 });
            }
        }
        assert_eq!(l.cell_volume(), 2);
    }

    #[test]
    fn nearest_finds_exact_members() {
        let g = f4_group();
        for idx in [0, 17, 600, 1151] {
            let (found, d) = g.nearest(g.float_matrix(idx));
            assert_eq!(found, idx);
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn display_uses_fractions() {
        assert_eq!(ALPHA_4.to_string(), "(1/2, -1/2, -1/2, -1/2)");
    }
}
