//! Finite subsets of `0..64` as bitmasks, ordered lexicographically by their sorted elements.

use std::cmp::Ordering;
use std::fmt;

/// A subset of ground-set positions `0..64`.
///
/// `Ord` compares the ascending element lists lexicographically, so a prefix sorts first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u64);

pub const MAX_GROUND: usize = 64;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Subset {
        Subset(it.into_iter().fold(0u64, |m, i| m | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersection(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn difference(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    /// Complement inside `0..n`.
    pub fn complement(self, n: usize) -> Subset {
        Subset::full(n).difference(self)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn rank_below(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            return Ordering::Equal;
        }
        let p = d.trailing_zeros();
        let above = if p == 63 { 0 } else { u64::MAX << (p + 1) };
        // The set holding p has p where the other has either a larger element or nothing.
        let (holder_smaller, other_tail) = if self.0 >> p & 1 == 1 {
            (true, other.0 & above)
        } else {
            (false, self.0 & above)
        };
        let holder_first = other_tail != 0;
        match (holder_smaller, holder_first) {
            (true, true) | (false, false) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter {}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        idx: if k <= n { Some((0..k).collect()) } else { None },
    }
}

pub struct Combinations {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let idx = self.idx.as_mut()?;
        let out = Subset::from_indices(idx.iter().copied());
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < self.n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// `k`-subsets of `within` in lexicographic order.
pub fn sub_combinations(within: Subset, k: usize) -> impl Iterator<Item = Subset> {
    let elems = within.to_vec();
    combinations(elems.len(), k).map(move |c| Subset::from_indices(c.iter().map(|i| elems[i])))
}

/// All subsets of `within`, by increasing bitmask.
pub fn power_set(within: Subset) -> impl Iterator<Item = Subset> {
    let m = within.0;
    let mut cur = Some(0u64);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == m { None } else { Some((c.wrapping_sub(m)) & m) };
        Some(Subset(c))
    })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Sorts a tuple of distinct positions; `None` on a repeat, else the set and whether the
/// sorting permutation is odd.
pub fn sort_sign(tuple: &[usize]) -> Option<(Subset, bool)> {
    let mut mask = 0u64;
    let mut odd = false;
    for &t in tuple {
        let bit = 1u64 << t;
        if mask & bit != 0 {
            return None;
        }
        // Each earlier element larger than t is one inversion.
        odd ^= (mask >> t).count_ones() & 1 == 1;
        mask |= bit;
    }
    Some((Subset(mask), odd))
}

/// Sign of the permutation listing `a` (ascending) followed by `b` (ascending); the sets must be
/// disjoint. Returns true when odd.
pub fn concat_sign(a: Subset, b: Subset) -> bool {
    // Inversions: pairs (x in a, y in b) with x > y.
    let mut odd = false;
    for y in b.iter() {
        odd ^= (a.0 >> y).count_ones() & 1 == 1;
    }
    odd
}
