//! Exhaustive catalogues of all matroids of a given rank on a small ground set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::idyll::{Elem, Idyll};
use crate::matroid::{gp2_witness, Matroid};
use crate::subset::Subset;

type Family = Vec<Subset>;

type FamilyCache = Mutex<HashMap<(usize, usize), Arc<Vec<Family>>>>;

fn family_cache() -> &'static FamilyCache {
    static CACHE: OnceLock<FamilyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

type ValueMap = BTreeMap<Subset, Elem>;

type ValueCache = Mutex<HashMap<(Idyll, usize, usize), Arc<Vec<ValueMap>>>>;

fn value_cache() -> &'static ValueCache {
    static CACHE: OnceLock<ValueCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Whether a family of equal-size sets satisfies basis exchange.
pub fn satisfies_exchange(bases: &[Subset]) -> bool {
    let set: HashSet<u64> = bases.iter().map(|b| b.bits()).collect();
    bases.iter().all(|&b1| {
        bases.iter().all(|&b2| {
            b1.difference(b2)
                .iter()
                .all(|x| b2.difference(b1).iter().any(|y| set.contains(&b1.without(x).with(y).bits())))
        })
    })
}

/// Basis families of all rank-`r` matroids on `0..n`, each sorted, in a canonical order.
///
/// A family splits into the bases avoiding the last element (a rank-`r` matroid on `n-1`
/// elements, or nothing when it is a coloop) and those containing it (a rank-`r-1` matroid, or
/// nothing when it is a loop); every pair is tried and kept when exchange holds.
pub fn k_basis_families(n: usize, r: usize) -> Arc<Vec<Family>> {
    if let Some(f) = family_cache().lock().unwrap().get(&(n, r)) {
        return f.clone();
    }
    let out = if r > n {
        vec![]
    } else if n == 0 {
        vec![vec![Subset::EMPTY]]
    } else {
        let last = n - 1;
        let without = k_basis_families(n - 1, r);
        let with = if r > 0 { k_basis_families(n - 1, r - 1) } else { Arc::new(vec![]) };
        let empty: Family = vec![];
        let mut out = vec![];
        for d in without.iter().chain(std::iter::once(&empty)) {
            for c in with.iter().chain(std::iter::once(&empty)) {
                if d.is_empty() && c.is_empty() {
                    continue;
                }
                let mut fam: Family = d.clone();
                fam.extend(c.iter().map(|b| b.with(last)));
                if d.is_empty() || c.is_empty() || satisfies_exchange(&fam) {
                    fam.sort();
                    out.push(fam);
                }
            }
        }
        out.sort();
        out
    };
    let out = Arc::new(out);
    family_cache().lock().unwrap().insert((n, r), out.clone());
    out
}

/// Number of candidate coefficient assignments needed to catalogue over `idyll`.
pub fn catalogue_cost(idyll: Idyll, n: usize, r: usize) -> Result<u128> {
    let units = idyll.units().ok_or_else(|| Error::InfiniteCarrier(idyll.to_string()))?.len() as u128;
    Ok(k_basis_families(n, r)
        .iter()
        .map(|f| units.checked_pow(f.len() as u32 - 1).unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b)))
}

fn value_maps(idyll: Idyll, n: usize, r: usize, budget: u64) -> Result<Arc<Vec<ValueMap>>> {
    if let Some(v) = value_cache().lock().unwrap().get(&(idyll, n, r)) {
        return Ok(v.clone());
    }
    let families = k_basis_families(n, r);
    let out: Vec<ValueMap> = if idyll == Idyll::Krasner {
        families.iter().map(|f| f.iter().map(|&b| (b, Elem::Fin(1))).collect()).collect()
    } else {
        let needed = catalogue_cost(idyll, n, r)?;
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let units = idyll.units().expect("finite");
        let mut out = vec![];
        for fam in families.iter() {
            let free = fam.len() - 1;
            let mut digits = vec![0usize; free];
            loop {
                let vals: ValueMap = fam
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| (b, if j == 0 { idyll.one() } else { units[digits[j - 1]].clone() }))
                    .collect();
                if gp2_witness(idyll, n, r, &vals).is_none() {
                    out.push(vals);
                }
                let mut i = 0;
                while i < free {
                    digits[i] += 1;
                    if digits[i] < units.len() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == free {
                    break;
                }
            }
        }
        out.sort();
        out
    };
    let out = Arc::new(out);
    value_cache().lock().unwrap().insert((idyll, n, r), out.clone());
    Ok(out)
}

/// All rank-`r` matroids over `idyll` on `ground`, in canonical order.
///
/// Over the Krasner hyperfield this is the basis-family catalogue; over other finite idylls
/// every assignment of units to the bases of each Krasner matroid (first basis fixed to 1) is
/// checked against the Plücker relations. `budget` caps the number of assignments.
pub fn matroids(idyll: Idyll, ground: &GroundSet, r: usize, budget: u64) -> Result<Vec<Matroid>> {
    let n = ground.len();
    if r > n {
        return Ok(vec![]);
    }
    let maps = value_maps(idyll, n, r, budget)?;
    Ok(maps.iter().map(|v| Matroid::from_parts(ground.clone(), r, idyll, v.clone())).collect())
}

/// All matroids of every rank on `ground`.
pub fn all_matroids(idyll: Idyll, ground: &GroundSet, budget: u64) -> Result<Vec<Matroid>> {
    let mut out = vec![];
    for r in 0..=ground.len() {
        out.extend(matroids(idyll, ground, r, budget)?);
    }
    Ok(out)
}
