//! The exact spectrum.
//!
//! Wavevectors are `k = sum_j n_j kappa_j` over the reciprocal D4 lattice,
//! restricted to the open Weyl chamber of F4. In units of `pi / L` they have
//! integer components, and `E = hbar^2 k^2 / 2M` with `M = 12 m3` becomes the
//! integer `E_int = |k|^2 / 4` in units of `pi^2 hbar^2 / (6 m3 L^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::units::PhysicalUnits;

/// Integer energy of the ground state `(3, 1, 1, 2)`.
pub const GROUND_STATE_E_INT: u64 = 39;

/// Quantum numbers `(n1, n2, n3, n4)` with `n2 >= 1` and `n1 > n4 > n3 >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers([i64; 4]);

impl QuantumNumbers {
    pub fn new(n1: i64, n2: i64, n3: i64, n4: i64) -> Result<Self> {
        if n2 >= 1 && n3 >= 1 && n4 > n3 && n1 > n4 {
            Ok(Self([n1, n2, n3, n4]))
        } else {
            Err(Error::InvalidArgument(format!(
                "quantum numbers ({n1}, {n2}, {n3}, {n4}) violate n2 >= 1, n1 > n4 > n3 >= 1"
            )))
        }
    }

    pub fn from_array(n: [i64; 4]) -> Result<Self> {
        Self::new(n[0], n[1], n[2], n[3])
    }

    pub fn ground_state() -> Self {
        Self([3, 1, 1, 2])
    }

    /// Inverts [`Self::wavevector`] for a reciprocal-lattice vector in the open chamber.
    pub fn from_wavevector(k: [i64; 4]) -> Result<Self> {
        let halves = [k[0] - k[1], k[1] - k[2], k[2] - k[3], k[2] + k[3]];
        if halves.iter().any(|h| h.rem_euclid(2) != 0) {
            return Err(Error::InvalidArgument(format!(
                "{k:?} is not on the reciprocal lattice"
            )));
        }
        let [n1, n2, n3, n4] = halves.map(|h| h / 2);
        Self::new(n1, n2, n3, n4)
    }

    pub fn as_array(&self) -> [i64; 4] {
        self.0
    }

    /// `k` in units of `pi / L`.
    pub fn wavevector(&self) -> [i64; 4] {
        let [n1, n2, n3, n4] = self.0;
        [
            2 * n1 + 2 * n2 + n3 + n4,
            2 * n2 + n3 + n4,
            n3 + n4,
            n4 - n3,
        ]
    }

    /// Exact energy in units of `pi^2 hbar^2 / (6 m3 L^2)`.
    pub fn energy_int(&self) -> u64 {
        let [n1, n2, n3, n4] = self.0;
        let e = 2 * n2 * (n1 + n2 + n3 + n4)
            + n1 * n1
            + n3 * n3
            + n4 * n4
            + n1 * n3
            + n1 * n4
            + n3 * n4;
        e as u64
    }
}

impl fmt::Debug for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl std::str::FromStr for QuantumNumbers {
    type Err = Error;

    /// Parses `n1,n2,n3,n4`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad quantum numbers {s:?}: {e}")))?;
        let arr: [i64; 4] = parts.try_into().map_err(|_| {
            Error::InvalidArgument(format!("expected four quantum numbers, got {s:?}"))
        })?;
        Self::from_array(arr)
    }
}

/// `k` for raw quantum numbers, rejecting inadmissible ones.
pub fn wavevector(n: [i64; 4]) -> Result<[i64; 4]> {
    Ok(QuantumNumbers::from_array(n)?.wavevector())
}

/// `E_int` for raw quantum numbers, rejecting inadmissible ones.
pub fn energy(n: [i64; 4]) -> Result<u64> {
    Ok(QuantumNumbers::from_array(n)?.energy_int())
}

/// One eigenvalue with its quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub qn: QuantumNumbers,
    /// Wavevector in units of `pi / L`.
    pub k: [i64; 4],
    /// Energy in units of `pi^2 hbar^2 / (6 m3 L^2)`.
    pub e_int: u64,
}

impl Level {
    pub fn new(qn: QuantumNumbers) -> Self {
        Self {
            qn,
            k: qn.wavevector(),
            e_int: qn.energy_int(),
        }
    }

    pub fn k_norm2(&self) -> i64 {
        self.k.iter().map(|c| c * c).sum()
    }

    /// Energy in the given units.
    pub fn energy(&self, units: &PhysicalUnits) -> f64 {
        units.energy_from_int(self.e_int)
    }

    /// Energy over `hbar^2 / (m3 L^2)`, independent of the unit choice.
    pub fn energy_natural(&self) -> f64 {
        self.e_int as f64 * PI * PI / 6.0
    }
}

fn energy_raw(n1: i64, n2: i64, n3: i64, n4: i64) -> i64 {
    2 * n2 * (n1 + n2 + n3 + n4) + n1 * n1 + n3 * n3 + n4 * n4 + n1 * n3 + n1 * n4 + n3 * n4
}

/// All levels with `E_int <= e_max`, sorted by energy then quantum numbers.
///
/// The energy is strictly increasing in every quantum number, so each loop
/// can stop at the first value whose smallest completion already exceeds
/// `e_max`. Stripes of fixed `n3` run in parallel.
pub fn enumerate_levels(e_max: u64) -> Vec<Level> {
    let e_max = e_max as i64;
    let mut n3_max = 0;
    while energy_raw(n3_max + 3, 1, n3_max + 1, n3_max + 2) <= e_max {
        n3_max += 1;
    }

    let mut levels: Vec<Level> = (1..=n3_max)
        .into_par_iter()
        .flat_map_iter(|n3| {
            let mut stripe = Vec::new();
            let mut n4 = n3 + 1;
            while energy_raw(n4 + 1, 1, n3, n4) <= e_max {
                let mut n1 = n4 + 1;
                while energy_raw(n1, 1, n3, n4) <= e_max {
                    let mut n2 = 1;
                    while energy_raw(n1, n2, n3, n4) <= e_max {
                        stripe.push(Level::new(QuantumNumbers([n1, n2, n3, n4])));
                        n2 += 1;
                    }
                    n1 += 1;
                }
                n4 += 1;
            }
            stripe
        })
        .collect();
    levels.par_sort_unstable_by_key(|l| (l.e_int, l.qn));
    levels
}

/// Weyl-law estimate of the number of states below `energy`:
/// `m3^2 L^4 E^2 / (32 pi^2 hbar^4)`.
pub fn weyl_count(energy: f64, units: &PhysicalUnits) -> f64 {
    let e = energy / units.energy_scale();
    e * e / (32.0 * PI * PI)
}

/// Exact cumulative count of levels with energy at most `energy`.
pub fn exact_count(levels: &[Level], energy: f64, units: &PhysicalUnits) -> usize {
    levels.partition_point(|l| l.energy(units) <= energy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaircaseRow {
    pub energy: f64,
    pub n_exact: usize,
    pub n_weyl: f64,
}

/// Exact counting function against the Weyl law on `n_points` equal steps up to `E_int = e_max`.
pub fn staircase(e_max: u64, n_points: usize, units: &PhysicalUnits) -> Result<Vec<StaircaseRow>> {
    if n_points == 0 {
        return Err(Error::InvalidArgument(
            "staircase needs at least one point".into(),
        ));
    }
    let levels = enumerate_levels(e_max);
    let top = units.energy_from_int(e_max);
    Ok((0..=n_points)
        .map(|j| {
            let energy = top * j as f64 / n_points as f64;
            StaircaseRow {
                energy,
                n_exact: exact_count(&levels, energy, units),
                n_weyl: weyl_count(energy, units),
            }
        })
        .collect())
}

pub const LEVELS_CSV_HEADER: &str = "n1,n2,n3,n4,k1,k2,k3,k4,E_int,E_over_hbar2_m3L2";

pub fn write_levels_csv<W: Write>(levels: &[Level], mut out: W) -> io::Result<()> {
    writeln!(out, "{LEVELS_CSV_HEADER}")?;
    for l in levels {
        let [n1, n2, n3, n4] = l.qn.as_array();
        let [k1, k2, k3, k4] = l.k;
        writeln!(
            out,
            "{n1},{n2},{n3},{n4},{k1},{k2},{k3},{k4},{},{}",
            l.e_int,
            sig15(l.energy_natural())
        )?;
    }
    Ok(())
}

pub const STAIRCASE_CSV_HEADER: &str = "E,N_exact,N_weyl";

pub fn write_staircase_csv<W: Write>(rows: &[StaircaseRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{STAIRCASE_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{}", sig15(r.energy), r.n_exact, sig15(r.n_weyl))?;
    }
    Ok(())
}
