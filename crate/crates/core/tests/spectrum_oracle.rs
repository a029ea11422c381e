use std::collections::BTreeSet;

use octacube_core::root_system::HalfIntVec4;
use octacube_core::spectrum::enumerate_levels;
use octacube_core::{Lattice, QuantumNumbers, Tiling};

/// Reciprocal-lattice vectors strictly inside the Weyl chamber with `|k|^2 <= 4 e_max`,
/// found by scanning integer vectors directly.
fn chamber_points(e_max: i64) -> BTreeSet<[i64; 4]> {
    let bound = 4 * e_max;
    let mut out = BTreeSet::new();
    // chamber: k2 > k3 > k4 > 0 and k1 > k2 + k3 + k4
    for k4 in 1.. {
        if k4 * k4 > bound {
            break;
        }
        for k3 in k4 + 1.. {
            if k3 * k3 + k4 * k4 > bound {
                break;
            }
            for k2 in k3 + 1.. {
                if k2 * k2 + k3 * k3 + k4 * k4 > bound {
                    break;
                }
                for k1 in (k2 + k3 + k4 + 1).. {
                    let k = [k1, k2, k3, k4];
                    if k.iter().map(|c| c * c).sum::<i64>() > bound {
                        break;
                    }
                    if in_reciprocal_lattice(&k) {
                        out.insert(k);
                    }
                }
            }
        }
    }
    out
}

/// `k . a` even for every generator `a` of the position lattice (`dot4` is four times the dot product).
fn in_reciprocal_lattice(k: &[i64; 4]) -> bool {
    let kv = HalfIntVec4::from_ints(*k);
    Lattice::d4()
        .generators
        .iter()
        .all(|a| kv.dot4(a).rem_euclid(8) == 0)
}

#[test]
fn enumeration_matches_lattice_scan() {
    let e_max = 2000;
    let oracle = chamber_points(e_max);
    let levels = enumerate_levels(e_max as u64);
    let got: BTreeSet<[i64; 4]> = levels.iter().map(|l| l.k).collect();
    assert_eq!(got.len(), levels.len(), "duplicate wavevectors");
    assert_eq!(got, oracle);
    for l in &levels {
        assert_eq!(4 * l.e_int as i64, l.k_norm2());
        assert_eq!(QuantumNumbers::from_wavevector(l.k).unwrap(), l.qn);
    }
}

#[test]
fn lattice_ball_splits_into_free_orbits() {
    // every lattice vector off the mirrors folds to exactly one admissible level,
    // and each admissible level has a free orbit of size 1152
    let e_max = 120i64;
    let bound = 4 * e_max;
    let r = (bound as f64).sqrt() as i64;
    let t = Tiling::new().unwrap();
    let roots = &t.roots.all_roots;
    let levels: BTreeSet<[i64; 4]> = enumerate_levels(e_max as u64).iter().map(|l| l.k).collect();
    let mut hits = std::collections::BTreeMap::<[i64; 4], usize>::new();
    let range = -r..=r;
    for k1 in range.clone() {
        for k2 in range.clone() {
            for k3 in range.clone() {
                for k4 in range.clone() {
                    let k = [k1, k2, k3, k4];
                    if k.iter().map(|c| c * c).sum::<i64>() > bound || !in_reciprocal_lattice(&k) {
                        continue;
                    }
                    let kv = HalfIntVec4::from_ints(k);
                    if roots.iter().any(|a| a.dot4(&kv) == 0) {
                        continue;
                    }
                    let (folded, _) = t.fold_to_chamber(&kv).unwrap();
                    *hits.entry(folded.to_ints().unwrap()).or_default() += 1;
                }
            }
        }
    }
    assert_eq!(hits.keys().copied().collect::<BTreeSet<_>>(), levels);
    assert!(hits.values().all(|&n| n == 1152));
}
