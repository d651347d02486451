//! Integer gradings of F1-representations, nice gradings and nice distinguishing sequences.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quiver::{CoefficientQuiver, F1Rep};

const SEED: u64 = 0x5e_ed0f_9ad1;
const COMPONENT_SPREAD: i64 = 1_000_000_000;
const MAX_OFFSET: i64 = 1_000_000;
const RETRIES: usize = 16;

/// An integer value on every element of `⊔ E_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    values: Vec<Vec<i64>>,
}

impl Grading {
    pub fn new(rep: &F1Rep, values: Vec<Vec<i64>>) -> Result<Self> {
        if values.len() != rep.sets().len() || values.iter().zip(rep.sets()).any(|(v, s)| v.len() != s.len()) {
            return Err(Error::ShapeMismatch("grading does not cover every element".into()));
        }
        Ok(Grading { values })
    }

    pub fn constant(rep: &F1Rep, c: i64) -> Self {
        Grading { values: rep.sets().iter().map(|s| vec![c; s.len()]).collect() }
    }

    /// Values in coefficient-quiver node order.
    pub fn from_flat(rep: &F1Rep, flat: &[i64]) -> Result<Self> {
        let mut it = flat.iter().copied();
        let values: Vec<Vec<i64>> = rep.sets().iter().map(|s| it.by_ref().take(s.len()).collect()).collect();
        if it.next().is_some() {
            return Err(Error::ShapeMismatch("too many grading values".into()));
        }
        Grading::new(rep, values)
    }

    /// Builds from a map keyed by [`node_keys`].
    pub fn from_keyed(rep: &F1Rep, map: &BTreeMap<String, i64>) -> Result<Self> {
        let keys = node_keys(rep);
        if let Some(k) = map.keys().find(|k| !keys.contains(k)) {
            return Err(Error::InvalidInput(format!("grading key {k:?} names no element")));
        }
        let flat = keys
            .iter()
            .map(|k| map.get(k).copied().ok_or_else(|| Error::InvalidInput(format!("grading misses element {k:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Grading::from_flat(rep, &flat)
    }

    pub fn keyed(&self, rep: &F1Rep) -> BTreeMap<String, i64> {
        node_keys(rep).into_iter().zip(self.flat()).collect()
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn vertex(&self, v: usize) -> &[i64] {
        &self.values[v]
    }

    pub fn value(&self, v: usize, e: usize) -> i64 {
        self.values[v][e]
    }

    pub fn flat(&self) -> Vec<i64> {
        self.values.iter().flatten().copied().collect()
    }
}

/// Element keys: the label if it is unique across vertices, else `vertex:label`.
pub fn node_keys(rep: &F1Rep) -> Vec<String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for s in rep.sets() {
        for l in s.labels() {
            *count.entry(l.as_str()).or_default() += 1;
        }
    }
    let mut out = vec![];
    for (v, s) in rep.sets().iter().enumerate() {
        for (e, l) in s.labels().iter().enumerate() {
            out.push(if count[l.as_str()] == 1 { l.clone() } else { rep.node_label(v, e) });
        }
    }
    out
}

/// `∂(a) - ∂(Λ_α a)` is constant over the elements `a` with nonzero image, for every arrow.
pub fn is_nice_grading(rep: &F1Rep, g: &Grading) -> bool {
    is_nice_relative(rep, g, &[])
}

/// `∂(Λ_α a) - ∂(Λ_α b) = ∂(a) - ∂(b)` whenever every prior ties `a, b` and ties `Λ_α a, Λ_α b`.
pub fn is_nice_relative(rep: &F1Rep, g: &Grading, priors: &[Grading]) -> bool {
    let gamma = rep.coefficient_quiver();
    let x = g.flat();
    tie_constraints(&gamma, &prior_keys(&gamma, priors))
        .iter()
        .all(|&(a, ia, b, ib)| x[ia] - x[ib] == x[a] - x[b])
}

/// Every pair of distinct elements differs under some grading of the sequence.
pub fn distinguishes(rep: &F1Rep, seq: &[Grading]) -> bool {
    let gamma = rep.coefficient_quiver();
    let keys = prior_keys(&gamma, seq);
    let mut seen = std::collections::HashSet::new();
    keys.into_iter().all(|k| seen.insert(k))
}

/// Checks that `seq[0]` is nice, each later grading is nice relative to its predecessors,
/// and the sequence distinguishes elements.
pub fn verify_sequence(rep: &F1Rep, seq: &[Grading]) -> Result<()> {
    let dims = rep.dims();
    for g in seq {
        if g.values.len() != dims.len() || g.values.iter().zip(&dims).any(|(v, &n)| v.len() != n) {
            return Err(Error::InvalidSequence("grading does not match the representation".into()));
        }
    }
    for (i, g) in seq.iter().enumerate() {
        if !is_nice_relative(rep, g, &seq[..i]) {
            return Err(Error::InvalidSequence(format!("grading {i} is not nice relative to its predecessors")));
        }
    }
    if !distinguishes(rep, seq) {
        return Err(Error::InvalidSequence("sequence does not distinguish elements".into()));
    }
    Ok(())
}

fn prior_keys(gamma: &CoefficientQuiver, priors: &[Grading]) -> Vec<Vec<i64>> {
    let flats: Vec<Vec<i64>> = priors.iter().map(Grading::flat).collect();
    (0..gamma.num_nodes()).map(|x| flats.iter().map(|f| f[x]).collect()).collect()
}

/// Tuples `(a, Λa, b, Λb)` generating the relative niceness conditions: edges of one arrow
/// grouped by prior keys at source and target, chained consecutively.
fn tie_constraints(gamma: &CoefficientQuiver, keys: &[Vec<i64>]) -> Vec<(usize, usize, usize, usize)> {
    type GroupKey<'a> = (usize, &'a [i64], &'a [i64]);
    let mut groups: BTreeMap<GroupKey, Vec<(usize, usize)>> = BTreeMap::new();
    for e in &gamma.edges {
        groups.entry((e.arrow, &keys[e.from], &keys[e.to])).or_default().push((e.from, e.to));
    }
    let mut out = vec![];
    for edges in groups.values() {
        for w in edges.windows(2) {
            out.push((w[0].0, w[0].1, w[1].0, w[1].1));
        }
    }
    out
}

/// Builds a nice sequence of at most `max_len` gradings that distinguishes elements.
///
/// Forest coefficient quivers get a first grading by propagating generic arrow offsets
/// along each component; remaining ties are split by generic elements of the solution
/// space of the relative niceness conditions. Every output is re-verified.
pub fn find_nice_sequence(rep: &F1Rep, max_len: usize) -> Result<Vec<Grading>> {
    let gamma = rep.coefficient_quiver();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut seq: Vec<Grading> = vec![];
    while !distinguishes(rep, &seq) {
        if seq.len() >= max_len {
            return Err(Error::NotFound(format!("no distinguishing sequence within {max_len} gradings")));
        }
        let keys = prior_keys(&gamma, &seq);
        let tied = tied_pairs(&keys);
        let next = if seq.is_empty() && gamma.is_forest() {
            Some(propagate(&gamma, &mut rng))
        } else {
            generic_solution(&gamma, &keys, &tied, &mut rng)
        };
        let Some(flat) = next else {
            return Err(Error::NotFound("remaining ties cannot be separated by a nice refinement".into()));
        };
        if !tied.iter().any(|&(a, b)| flat[a] != flat[b]) {
            return Err(Error::NotFound("no nice refinement separates a remaining tie".into()));
        }
        seq.push(Grading::from_flat(rep, &flat)?);
    }
    if seq.is_empty() {
        seq.push(Grading::constant(rep, 0));
    }
    verify_sequence(rep, &seq).map_err(|e| Error::NotFound(format!("constructed sequence failed verification: {e}")))?;
    Ok(seq)
}

fn tied_pairs(keys: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let mut classes: BTreeMap<&[i64], Vec<usize>> = BTreeMap::new();
    for (x, k) in keys.iter().enumerate() {
        classes.entry(k).or_default().push(x);
    }
    let mut out = vec![];
    for c in classes.values() {
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                out.push((c[i], c[j]));
            }
        }
    }
    out
}

/// `∂(Λ_α j) = ∂(j) - c_α` along every coefficient arrow; components sit far apart.
fn propagate(gamma: &CoefficientQuiver, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let n = gamma.num_nodes();
    let arrows = gamma.edges.iter().map(|e| e.arrow).max().map_or(0, |m| m + 1);
    let offsets: Vec<i64> = (0..arrows).map(|_| rng.gen_range(1..=MAX_OFFSET)).collect();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![vec![]; n];
    for e in &gamma.edges {
        let c = offsets[e.arrow];
        adj[e.from].push((e.to, -c));
        adj[e.to].push((e.from, c));
    }
    let mut value = vec![0i64; n];
    for (ci, comp) in gamma.components().iter().enumerate() {
        let root = comp[0];
        value[root] = ci as i64 * COMPONENT_SPREAD;
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            for &(y, d) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    value[y] = value[x] + d;
                    stack.push(y);
                }
            }
        }
    }
    value
}

/// A random integer point of the solution space of the relative niceness conditions,
/// chosen to separate as many tied pairs as possible.
fn generic_solution(
    gamma: &CoefficientQuiver,
    keys: &[Vec<i64>],
    tied: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<i64>> {
    let n = gamma.num_nodes();
    let rows: Vec<Vec<i64>> = tie_constraints(gamma, keys)
        .into_iter()
        .map(|(a, ia, b, ib)| {
            let mut r = vec![0i64; n];
            r[a] += 1;
            r[ia] -= 1;
            r[b] -= 1;
            r[ib] += 1;
            r
        })
        .collect();
    let basis = integer_nullspace(&rows, n)?;
    let separable = |v: &[i64]| tied.iter().filter(|&&(a, b)| v[a] != v[b]).count();
    let mut best: Option<(usize, Vec<i64>)> = None;
    for _ in 0..RETRIES {
        let mut acc = vec![0i128; n];
        for b in &basis {
            let lambda = rng.gen_range(1..=1000i128);
            for (x, &bx) in acc.iter_mut().zip(b) {
                *x += lambda * bx as i128;
            }
        }
        let Ok(v) = acc.into_iter().map(i64::try_from).collect::<std::result::Result<Vec<_>, _>>() else {
            continue;
        };
        let s = separable(&v);
        if best.as_ref().is_none_or(|(bs, _)| s > *bs) {
            best = Some((s, v));
        }
        if s == tied.len() {
            break;
        }
    }
    best.map(|(_, v)| v)
}

/// Integer basis of `{x : rows · x = 0}`; `None` if an entry overflows `i64`.
fn integer_nullspace(rows: &[Vec<i64>], n: usize) -> Option<Vec<Vec<i64>>> {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut pivots: Vec<usize> = vec![];
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = vec![];
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Option<Vec<i64>> = v.iter().map(|x| (x.numer() * (&lcm / x.denom())).to_i64()).collect();
        let ints = ints?;
        let g = ints.iter().fold(0i64, |g, &x| g.gcd(&x.abs()));
        basis.push(ints.into_iter().map(|x| if g > 1 { x / g } else { x }).collect());
    }
    Some(basis)
}
