//! Matroids over idylls as normalized Grassmann-Plücker functions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ground::{compress, GroundSet};
use crate::idyll::{orthogonal, Elem, Idyll, IdyllMorphism};
use crate::subset::{combinations, concat_sign, sort_sign, Subset};

/// Default cap on the number of candidate vectors `|F|^n` enumerated by [`Matroid::vectors`].
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// A nonzero alternating function on `r`-tuples, stored on sorted `r`-subsets and normalized so
/// the lexicographically first nonzero subset has value 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlueckerVector {
    ground: GroundSet,
    rank: usize,
    idyll: Idyll,
    values: BTreeMap<Subset, Elem>,
}

impl PlueckerVector {
    pub fn new<I>(ground: GroundSet, rank: usize, idyll: Idyll, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, Elem)>,
    {
        let full = ground.full();
        let mut map = BTreeMap::new();
        for (s, v) in values {
            if s.len() != rank || !s.is_subset(full) {
                return Err(Error::InvalidInput(format!("subset {s:?} is not an {rank}-subset of the ground set")));
            }
            if !idyll.contains(&v) {
                return Err(Error::InvalidInput(format!("{v:?} is not an element of {idyll}")));
            }
            if !v.is_zero() {
                map.insert(s, v);
            }
        }
        if rank > ground.len() {
            return Err(Error::InvalidInput(format!("rank {rank} exceeds ground size {}", ground.len())));
        }
        if map.is_empty() {
            return Err(Error::AllZero);
        }
        Ok(PlueckerVector { ground, rank, idyll, values: normalize(idyll, map) })
    }

    /// Builds from label-keyed literals such as `[("1,2", "1"), ("1,3", "-1")]`.
    pub fn from_literals(ground: GroundSet, rank: usize, idyll: Idyll, entries: &[(&str, &str)]) -> Result<Self> {
        let mut vals = Vec::with_capacity(entries.len());
        for (key, lit) in entries {
            let labels: Vec<&str> = key.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let s = ground.subset_of(&labels)?;
            if s.len() != labels.len() {
                return Err(Error::InvalidInput(format!("repeated label in {key:?}")));
            }
            vals.push((s, idyll.parse_elem(lit)?));
        }
        PlueckerVector::new(ground, rank, idyll, vals)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn idyll(&self) -> Idyll {
        self.idyll
    }

    pub fn values(&self) -> &BTreeMap<Subset, Elem> {
        &self.values
    }

    /// Value on a sorted subset.
    pub fn value(&self, s: Subset) -> Elem {
        self.values.get(&s).cloned().unwrap_or_else(|| self.idyll.zero())
    }

    /// Value on an arbitrary tuple of positions.
    pub fn eval(&self, tuple: &[usize]) -> Elem {
        if tuple.len() != self.rank {
            return self.idyll.zero();
        }
        match sort_sign(tuple) {
            None => self.idyll.zero(),
            Some((s, odd)) => self.idyll.signed(self.value(s), odd),
        }
    }
}

fn normalize(idyll: Idyll, mut map: BTreeMap<Subset, Elem>) -> BTreeMap<Subset, Elem> {
    let first = map.values().next().expect("nonempty").clone();
    if first != idyll.one() {
        let inv = idyll.inv(&first).expect("nonzero");
        for v in map.values_mut() {
            *v = idyll.mul(&inv, v);
        }
    }
    map
}

/// Returns a violated Plücker relation `(Y, X)` with `|Y| = r+1`, `|X| = r-1`, if any.
pub(crate) fn gp2_witness(idyll: Idyll, n: usize, r: usize, vals: &BTreeMap<Subset, Elem>) -> Option<(Subset, Subset)> {
    if r == 0 {
        return None;
    }
    let full = Subset::full(n);
    let mut ys = BTreeSet::new();
    let mut xs = BTreeSet::new();
    for &b in vals.keys() {
        for e in full.difference(b).iter() {
            ys.insert(b.with(e));
        }
        for e in b.iter() {
            xs.insert(b.without(e));
        }
    }
    for y in ys {
        let left: Vec<(usize, bool, &Elem)> = y
            .iter()
            .enumerate()
            .filter_map(|(k, yk)| vals.get(&y.without(yk)).map(|v| (yk, k % 2 == 1, v)))
            .collect();
        for &x in &xs {
            let mut acc = idyll.null_acc();
            for &(yk, odd, v) in &left {
                if x.contains(yk) {
                    continue;
                }
                if let Some(w) = vals.get(&x.with(yk)) {
                    let s = odd ^ (x.rank_below(yk) % 2 == 1);
                    acc.push(&idyll.signed(idyll.mul(v, w), s));
                }
            }
            if !acc.is_null() {
                return Some((y, x));
            }
        }
    }
    None
}

/// A vector over an idyll indexed by a ground set; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorF {
    pub ground: GroundSet,
    pub idyll: Idyll,
    pub entries: Vec<Elem>,
}

impl VectorF {
    pub fn new(ground: GroundSet, idyll: Idyll, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != ground.len() {
            return Err(Error::ShapeMismatch(format!("{} entries for {} labels", entries.len(), ground.len())));
        }
        if let Some(e) = entries.iter().find(|e| !idyll.contains(e)) {
            return Err(Error::InvalidInput(format!("{e:?} is not an element of {idyll}")));
        }
        Ok(VectorF { ground, idyll, entries })
    }

    pub fn zero(ground: GroundSet, idyll: Idyll) -> Self {
        let entries = vec![idyll.zero(); ground.len()];
        VectorF { ground, idyll, entries }
    }

    pub fn from_literals(ground: GroundSet, idyll: Idyll, lits: &[&str]) -> Result<Self> {
        let entries = lits.iter().map(|l| idyll.parse_elem(l)).collect::<Result<Vec<_>>>()?;
        VectorF::new(ground, idyll, entries)
    }

    pub fn support(&self) -> Subset {
        Subset::from_indices(self.entries.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, _)| i))
    }

    pub fn get(&self, label: &str) -> Option<&Elem> {
        self.ground.index_of(label).map(|i| &self.entries[i])
    }

    /// Scales so the first nonzero entry is 1.
    pub fn normalized(mut self) -> Self {
        normalize_entries(self.idyll, &mut self.entries);
        self
    }

    pub fn literals(&self) -> Vec<String> {
        self.entries.iter().map(|e| self.idyll.format_elem(e)).collect()
    }
}

impl PartialOrd for VectorF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VectorF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

pub(crate) fn normalize_entries(idyll: Idyll, entries: &mut [Elem]) {
    if let Some(first) = entries.iter().find(|e| !e.is_zero()).cloned() {
        if first != idyll.one() {
            let inv = idyll.inv(&first).expect("nonzero");
            for e in entries.iter_mut() {
                *e = idyll.mul(&inv, e);
            }
        }
    }
}

/// All vectors in `F^n` in odometer order, guarded by `budget`.
pub fn all_vectors(idyll: Idyll, n: usize, budget: u64) -> Result<impl Iterator<Item = Vec<Elem>>> {
    let carrier = idyll.elements().ok_or_else(|| Error::InfiniteCarrier(idyll.to_string()))?;
    let needed = (carrier.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let q = carrier.len();
    let mut digits = Some(vec![0usize; n]);
    Ok(std::iter::from_fn(move || {
        let d = digits.as_mut()?;
        let out = d.iter().map(|&i| carrier[i].clone()).collect();
        let mut i = 0;
        loop {
            if i == n {
                digits = None;
                break;
            }
            d[i] += 1;
            if d[i] < q {
                break;
            }
            d[i] = 0;
            i += 1;
        }
        Some(out)
    }))
}

/// A Grassmann-Plücker function that satisfies the Plücker relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matroid {
    pv: PlueckerVector,
}

impl PartialOrd for Matroid {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matroid {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.pv.rank, &self.pv.values).cmp(&(other.pv.rank, &other.pv.values))
    }
}

/// Checks the Plücker relations.
pub fn gp_validate(pv: PlueckerVector) -> Result<Matroid> {
    if let Some((y, x)) = gp2_witness(pv.idyll, pv.ground.len(), pv.rank, &pv.values) {
        return Err(Error::Gp2Violation { y: pv.ground.labels_of(y), x: pv.ground.labels_of(x) });
    }
    Ok(Matroid { pv })
}

impl Matroid {
    /// Wraps a Plücker vector known to be valid; re-checked in debug builds.
    pub(crate) fn trusted(pv: PlueckerVector) -> Matroid {
        debug_assert!(
            gp2_witness(pv.idyll, pv.ground.len(), pv.rank, &pv.values).is_none(),
            "trusted construction violates the Plücker relations"
        );
        Matroid { pv }
    }

    pub(crate) fn from_parts(ground: GroundSet, rank: usize, idyll: Idyll, values: BTreeMap<Subset, Elem>) -> Matroid {
        Matroid::trusted(PlueckerVector { ground, rank, idyll, values: normalize(idyll, values) })
    }

    /// The Krasner matroid with the given bases.
    pub fn from_bases_k(ground: GroundSet, rank: usize, bases: &[Subset]) -> Result<Matroid> {
        if bases.is_empty() {
            return Err(Error::AllZero);
        }
        let pv = PlueckerVector::new(ground, rank, Idyll::Krasner, bases.iter().map(|&b| (b, Elem::Fin(1))))?;
        gp_validate(pv)
    }

    /// Labels-based variant of [`Matroid::from_bases_k`].
    pub fn from_bases_k_labels(ground: GroundSet, rank: usize, bases: &[&[&str]]) -> Result<Matroid> {
        let bs = bases.iter().map(|b| ground.subset_of(b)).collect::<Result<Vec<_>>>()?;
        Matroid::from_bases_k(ground, rank, &bs)
    }

    /// The uniform Krasner matroid of rank `r` on `1..=n`.
    pub fn uniform(r: usize, n: usize) -> Matroid {
        let ground = GroundSet::numbered(n);
        let vals = combinations(n, r).map(|s| (s, Elem::Fin(1))).collect();
        Matroid::from_parts(ground, r, Idyll::Krasner, vals)
    }

    /// The unique matroid of rank 0 on `ground`.
    pub fn rank_zero(ground: GroundSet, idyll: Idyll) -> Matroid {
        let vals = BTreeMap::from([(Subset::EMPTY, idyll.one())]);
        Matroid::from_parts(ground, 0, idyll, vals)
    }

    /// The unique matroid of full rank on `ground`.
    pub fn full_rank(ground: GroundSet, idyll: Idyll) -> Matroid {
        let vals = BTreeMap::from([(ground.full(), idyll.one())]);
        let n = ground.len();
        Matroid::from_parts(ground, n, idyll, vals)
    }

    pub fn pluecker(&self) -> &PlueckerVector {
        &self.pv
    }

    pub fn ground(&self) -> &GroundSet {
        &self.pv.ground
    }

    pub fn rank(&self) -> usize {
        self.pv.rank
    }

    pub fn idyll(&self) -> Idyll {
        self.pv.idyll
    }

    pub fn len(&self) -> usize {
        self.pv.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pv.ground.is_empty()
    }

    pub fn values(&self) -> &BTreeMap<Subset, Elem> {
        &self.pv.values
    }

    pub fn value(&self, s: Subset) -> Elem {
        self.pv.value(s)
    }

    pub fn eval(&self, tuple: &[usize]) -> Elem {
        self.pv.eval(tuple)
    }

    pub fn bases(&self) -> impl Iterator<Item = Subset> + '_ {
        self.pv.values.keys().copied()
    }

    pub fn num_bases(&self) -> usize {
        self.pv.values.len()
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.pv.values.contains_key(&s)
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        self.bases().any(|b| s.is_subset(b))
    }

    /// Rank of `s` in the underlying matroid.
    pub fn rank_of(&self, s: Subset) -> usize {
        self.bases().map(|b| b.intersection(s).len()).max().unwrap_or(0)
    }

    /// Greedy maximal independent subset of `s`, scanning in ground order.
    pub fn max_independent_in(&self, s: Subset) -> Subset {
        self.extend_independent(Subset::EMPTY, s)
    }

    /// Greedily extends the independent set `start` by elements of `by`.
    pub fn extend_independent(&self, start: Subset, by: Subset) -> Subset {
        let mut cur = start;
        for e in by.iter() {
            if !cur.contains(e) && self.is_independent(cur.with(e)) {
                cur = cur.with(e);
            }
        }
        cur
    }

    /// Push-forward along the unique morphism to the Krasner hyperfield.
    pub fn underlying(&self) -> Matroid {
        let vals = self.pv.values.keys().map(|&b| (b, Elem::Fin(1))).collect();
        Matroid::from_parts(self.pv.ground.clone(), self.pv.rank, Idyll::Krasner, vals)
    }

    pub fn push_forward(&self, f: &IdyllMorphism) -> Result<Matroid> {
        if f.source != self.idyll() {
            return Err(Error::DescriptorMismatch(f.source.to_string(), self.idyll().to_string()));
        }
        let vals: BTreeMap<Subset, Elem> = self.pv.values.iter().map(|(&s, v)| (s, f.apply(v))).collect();
        Ok(Matroid::from_parts(self.pv.ground.clone(), self.pv.rank, f.target, vals))
    }

    pub fn dual(&self) -> Matroid {
        let n = self.len();
        let idyll = self.idyll();
        let vals = self
            .pv
            .values
            .iter()
            .map(|(&b, v)| {
                let x = b.complement(n);
                (x, idyll.signed(v.clone(), concat_sign(x, b)))
            })
            .collect();
        Matroid::from_parts(self.pv.ground.clone(), n - self.rank(), idyll, vals)
    }

    /// Contraction by `a`, choosing the greedy maximal independent subset of `a`.
    pub fn contract(&self, a: Subset) -> Matroid {
        let i = self.max_independent_in(a);
        self.contract_with(a, i).expect("greedy choice is maximal independent")
    }

    /// Contraction by `a` via the maximal independent set `i ⊆ a`.
    pub fn contract_with(&self, a: Subset, i: Subset) -> Result<Matroid> {
        let a = a.intersection(self.ground().full());
        if !i.is_subset(a) || !self.is_independent(i) || i.len() != self.rank_of(a) {
            return Err(Error::InvalidInput(format!("{i:?} is not a maximal independent subset of {a:?}")));
        }
        let rest = a.complement(self.len());
        let idyll = self.idyll();
        let vals = self
            .pv
            .values
            .iter()
            .filter(|(b, _)| b.intersection(a) == i)
            .map(|(&b, v)| {
                let x = b.difference(i);
                (compress(x, rest), idyll.signed(v.clone(), concat_sign(x, i)))
            })
            .collect();
        Ok(Matroid::from_parts(self.ground().sub(rest), self.rank() - i.len(), idyll, vals))
    }

    /// Deletion of `a`, extending a greedy basis of `E - a` greedily inside `a`.
    pub fn delete(&self, a: Subset) -> Matroid {
        let a = a.intersection(self.ground().full());
        let rest = a.complement(self.len());
        let base = self.max_independent_in(rest);
        let j = self.extend_independent(base, a).difference(base);
        self.delete_with(a, j).expect("greedy choice extends a basis")
    }

    /// Deletion of `a` via `j ⊆ a` extending some basis of `E - a` to a basis of the matroid.
    pub fn delete_with(&self, a: Subset, j: Subset) -> Result<Matroid> {
        let a = a.intersection(self.ground().full());
        let rest = a.complement(self.len());
        let k = self.rank_of(rest);
        if !j.is_subset(a) || j.len() + k != self.rank() || !self.bases().any(|b| b.intersection(a) == j) {
            return Err(Error::InvalidInput(format!("{j:?} does not extend a basis of the complement of {a:?}")));
        }
        let idyll = self.idyll();
        let vals = self
            .pv
            .values
            .iter()
            .filter(|(b, _)| b.intersection(a) == j)
            .map(|(&b, v)| {
                let y = b.difference(j);
                (compress(y, rest), idyll.signed(v.clone(), concat_sign(y, j)))
            })
            .collect();
        Ok(Matroid::from_parts(self.ground().sub(rest), k, idyll, vals))
    }

    pub fn restrict(&self, a: Subset) -> Matroid {
        self.delete(a.complement(self.len()))
    }

    /// Fundamental circuits, one normalized representative per circuit, sorted.
    pub fn circuits(&self) -> Vec<VectorF> {
        let n = self.len();
        let idyll = self.idyll();
        let full = Subset::full(n);
        let ys: BTreeSet<Subset> =
            self.bases().flat_map(|b| full.difference(b).iter().map(move |e| b.with(e))).collect();
        let mut out = BTreeSet::new();
        for y in ys {
            let mut x = vec![idyll.zero(); n];
            for (k, yk) in y.iter().enumerate() {
                if let Some(v) = self.pv.values.get(&y.without(yk)) {
                    x[yk] = idyll.signed(v.clone(), k % 2 == 1);
                }
            }
            normalize_entries(idyll, &mut x);
            out.insert(x);
        }
        out.into_iter().map(|entries| VectorF { ground: self.ground().clone(), idyll, entries }).collect()
    }

    pub fn cocircuits(&self) -> Vec<VectorF> {
        self.dual().circuits()
    }

    /// Vectors orthogonal to every cocircuit, by enumeration of `F^n`.
    pub fn vectors(&self, budget: u64) -> Result<Vec<VectorF>> {
        orthogonal_complement(self.ground(), self.idyll(), &self.cocircuits(), budget)
    }

    /// Vectors orthogonal to every circuit.
    pub fn covectors(&self, budget: u64) -> Result<Vec<VectorF>> {
        orthogonal_complement(self.ground(), self.idyll(), &self.circuits(), budget)
    }

    pub fn is_vector(&self, x: &VectorF) -> bool {
        x.entries.len() == self.len()
            && x.idyll == self.idyll()
            && self.cocircuits().iter().all(|z| orthogonal(self.idyll(), &x.entries, &z.entries))
    }

    /// Adds a loop labelled `label` at the end of the ground set.
    pub fn extend_with_loop(&self, label: &str) -> Result<Matroid> {
        let ground = self.ground().with_label(label)?;
        Ok(Matroid::from_parts(ground, self.rank(), self.idyll(), self.pv.values.clone()))
    }

    /// Same function on a relabelled ground set of equal size.
    pub fn relabel(&self, ground: GroundSet) -> Result<Matroid> {
        if ground.len() != self.len() {
            return Err(Error::ShapeMismatch("relabelling must keep the ground size".into()));
        }
        Ok(Matroid { pv: PlueckerVector { ground, ..self.pv.clone() } })
    }
}

/// Vectors of `F^n` orthogonal to each vector in `against`.
pub fn orthogonal_complement(ground: &GroundSet, idyll: Idyll, against: &[VectorF], budget: u64) -> Result<Vec<VectorF>> {
    let mut out: Vec<VectorF> = all_vectors(idyll, ground.len(), budget)?
        .filter(|x| against.iter().all(|z| orthogonal(idyll, x, &z.entries)))
        .map(|entries| VectorF { ground: ground.clone(), idyll, entries })
        .collect();
    out.sort();
    Ok(out)
}
