//! Submonomial matrices as morphisms of matroids over an idyll.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::f1::{F1LinearMap, PointedMap};
use crate::ground::GroundSet;
use crate::idyll::{orthogonal, Elem, Idyll, IdyllMorphism};
use crate::matroid::{all_vectors, Matroid, VectorF};
use crate::subset::Subset;

/// A `T × S` matrix with at most one nonzero entry per row and column, stored column-wise as
/// a partial injection `S → T` with coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubmonomialMatrix {
    source: GroundSet,
    target: GroundSet,
    idyll: Idyll,
    entries: Vec<Option<(usize, Elem)>>,
}

impl SubmonomialMatrix {
    pub fn new(source: GroundSet, target: GroundSet, idyll: Idyll, entries: Vec<Option<(usize, Elem)>>) -> Result<Self> {
        if entries.len() != source.len() {
            return Err(Error::ShapeMismatch(format!("{} columns for {} source labels", entries.len(), source.len())));
        }
        let mut rows = Subset::EMPTY;
        let mut clean = Vec::with_capacity(entries.len());
        for e in entries {
            match e {
                Some((t, c)) if !c.is_zero() => {
                    if t >= target.len() {
                        return Err(Error::ShapeMismatch(format!("row {t} out of range")));
                    }
                    if !idyll.contains(&c) {
                        return Err(Error::InvalidInput(format!("{c:?} is not an element of {idyll}")));
                    }
                    if rows.contains(t) {
                        return Err(Error::NotSubmonomial(format!("row {} has two nonzero entries", target.label(t))));
                    }
                    rows = rows.with(t);
                    clean.push(Some((t, c)));
                }
                _ => clean.push(None),
            }
        }
        Ok(SubmonomialMatrix { source, target, idyll, entries: clean })
    }

    /// Builds from `(source label, target label, coefficient)` triples.
    pub fn from_triples(source: GroundSet, target: GroundSet, idyll: Idyll, triples: &[(&str, &str, &str)]) -> Result<Self> {
        let mut entries = vec![None; source.len()];
        for (s, t, c) in triples {
            let si = source.index(s)?;
            if entries[si].is_some() {
                return Err(Error::NotSubmonomial(format!("column {s} has two nonzero entries")));
            }
            entries[si] = Some((target.index(t)?, idyll.parse_elem(c)?));
        }
        SubmonomialMatrix::new(source, target, idyll, entries)
    }

    /// Builds from a dense `T × S` matrix of literals.
    pub fn from_dense(source: GroundSet, target: GroundSet, idyll: Idyll, rows: &[&[&str]]) -> Result<Self> {
        if rows.len() != target.len() || rows.iter().any(|r| r.len() != source.len()) {
            return Err(Error::ShapeMismatch("dense matrix does not match the ground sets".into()));
        }
        let mut entries = vec![None; source.len()];
        for (t, row) in rows.iter().enumerate() {
            for (s, lit) in row.iter().enumerate() {
                let c = idyll.parse_elem(lit)?;
                if c.is_zero() {
                    continue;
                }
                if entries[s].is_some() {
                    return Err(Error::NotSubmonomial(format!("column {} has two nonzero entries", source.label(s))));
                }
                entries[s] = Some((t, c));
            }
        }
        SubmonomialMatrix::new(source, target, idyll, entries)
    }

    pub fn identity(ground: GroundSet, idyll: Idyll) -> Self {
        let entries = (0..ground.len()).map(|i| Some((i, idyll.one()))).collect();
        SubmonomialMatrix { source: ground.clone(), target: ground, idyll, entries }
    }

    pub fn zero(source: GroundSet, target: GroundSet, idyll: Idyll) -> Self {
        let entries = vec![None; source.len()];
        SubmonomialMatrix { source, target, idyll, entries }
    }

    /// The matrix with entry 1 at `(f(s), s)` for every `s` with `f(s) ≠ 0`.
    pub fn induced(f: &F1LinearMap, idyll: Idyll) -> Self {
        let entries = f.as_slice().iter().map(|t| t.map(|t| (t, idyll.one()))).collect();
        SubmonomialMatrix { source: f.source().clone(), target: f.target().clone(), idyll, entries }
    }

    pub fn source(&self) -> &GroundSet {
        &self.source
    }

    pub fn target(&self) -> &GroundSet {
        &self.target
    }

    pub fn idyll(&self) -> Idyll {
        self.idyll
    }

    /// Column `s`: its row and coefficient.
    pub fn entry(&self, s: usize) -> Option<(usize, &Elem)> {
        self.entries[s].as_ref().map(|(t, c)| (*t, c))
    }

    pub fn entries(&self) -> &[Option<(usize, Elem)>] {
        &self.entries
    }

    pub fn underlying_map(&self) -> F1LinearMap {
        let map = self.entries.iter().map(|e| e.as_ref().map(|(t, _)| *t)).collect();
        F1LinearMap::new(PointedMap::new(self.source.clone(), self.target.clone(), map).expect("in range"))
            .expect("submonomial matrices have injective supports")
    }

    /// Rows of the dense `T × S` matrix.
    pub fn dense(&self) -> Vec<Vec<Elem>> {
        let mut rows = vec![vec![self.idyll.zero(); self.source.len()]; self.target.len()];
        for (s, e) in self.entries.iter().enumerate() {
            if let Some((t, c)) = e {
                rows[*t][s] = c.clone();
            }
        }
        rows
    }

    pub fn apply(&self, x: &VectorF) -> Result<VectorF> {
        if x.ground != self.source || x.idyll != self.idyll {
            return Err(Error::ShapeMismatch("vector does not live on the source".into()));
        }
        let mut out = vec![self.idyll.zero(); self.target.len()];
        for (s, e) in self.entries.iter().enumerate() {
            if let Some((t, c)) = e {
                out[*t] = self.idyll.mul(c, &x.entries[s]);
            }
        }
        Ok(VectorF { ground: self.target.clone(), idyll: self.idyll, entries: out })
    }

    /// `psi · self`.
    pub fn then(&self, psi: &SubmonomialMatrix) -> Result<SubmonomialMatrix> {
        compose(psi, self)
    }

    pub fn transpose(&self) -> SubmonomialMatrix {
        let mut entries = vec![None; self.target.len()];
        for (s, e) in self.entries.iter().enumerate() {
            if let Some((t, c)) = e {
                entries[*t] = Some((s, c.clone()));
            }
        }
        SubmonomialMatrix { source: self.target.clone(), target: self.source.clone(), idyll: self.idyll, entries }
    }

    pub fn push_forward(&self, f: &IdyllMorphism) -> Result<SubmonomialMatrix> {
        if f.source != self.idyll {
            return Err(Error::DescriptorMismatch(f.source.to_string(), self.idyll.to_string()));
        }
        let entries = self.entries.iter().map(|e| e.as_ref().map(|(t, c)| (*t, f.apply(c)))).collect();
        SubmonomialMatrix::new(self.source.clone(), self.target.clone(), f.target, entries)
    }

    /// Submatrix with columns `cols ⊆ S` and rows `rows ⊆ T`; entries leaving `rows` are dropped.
    fn submatrix(&self, cols: Subset, rows: Subset) -> SubmonomialMatrix {
        let entries = cols
            .iter()
            .map(|s| match &self.entries[s] {
                Some((t, c)) if rows.contains(*t) => Some((rows.rank_below(*t), c.clone())),
                _ => None,
            })
            .collect();
        SubmonomialMatrix { source: self.source.sub(cols), target: self.target.sub(rows), idyll: self.idyll, entries }
    }

    fn check_minor_condition(&self, a: Subset, b: Subset) -> Result<()> {
        for s in a.iter() {
            if let Some((t, _)) = &self.entries[s] {
                if !b.contains(*t) {
                    return Err(Error::ConditionViolated(format!(
                        "{} maps to {} outside B",
                        self.source.label(s),
                        self.target.label(*t)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Ψ · Φ`; requires `target(Φ) = source(Ψ)`.
pub fn compose(psi: &SubmonomialMatrix, phi: &SubmonomialMatrix) -> Result<SubmonomialMatrix> {
    if phi.target != psi.source || phi.idyll != psi.idyll {
        return Err(Error::ShapeMismatch("target of the first factor is not the source of the second".into()));
    }
    let entries = phi
        .entries
        .iter()
        .map(|e| {
            let (t, c) = e.as_ref()?;
            let (u, d) = psi.entries[*t].as_ref()?;
            Some((*u, phi.idyll.mul(d, c)))
        })
        .collect();
    SubmonomialMatrix::new(phi.source.clone(), psi.target.clone(), phi.idyll, entries)
}

fn check_shapes(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<()> {
    if n.ground() != phi.source() || m.ground() != phi.target() {
        return Err(Error::ShapeMismatch("matrix does not match the matroids' ground sets".into()));
    }
    if n.idyll() != phi.idyll() || m.idyll() != phi.idyll() {
        return Err(Error::DescriptorMismatch(phi.idyll().to_string(), format!("{}/{}", n.idyll(), m.idyll())));
    }
    Ok(())
}

/// A violated relation of the Plücker criterion: `(Y ⊆ S, X ⊆ T)` as label lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismWitness {
    pub y: Vec<String>,
    pub x: Vec<String>,
}

/// First violated relation `Σ_k (-1)^k ν(Y - y_k)·Φ_{y_k}·μ(Φ(y_k), X)`, or `None`.
pub fn pluecker_witness(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<Option<MorphismWitness>> {
    check_shapes(phi, n, m)?;
    let (w, r) = (n.rank(), m.rank());
    if r == 0 || w == n.len() {
        return Ok(None);
    }
    let idyll = phi.idyll();
    let full_s = n.ground().full();
    let ys: BTreeSet<Subset> = n.bases().flat_map(|b| full_s.difference(b).iter().map(move |e| b.with(e))).collect();
    let xs: BTreeSet<Subset> = m.bases().flat_map(|b| b.iter().map(move |e| b.without(e))).collect();
    let mvals = m.values();
    for y in ys {
        let left: Vec<(bool, usize, Elem)> = y
            .iter()
            .enumerate()
            .filter_map(|(k, yk)| {
                let nu = n.values().get(&y.without(yk))?;
                let (t, c) = phi.entry(yk)?;
                Some((k % 2 == 1, t, idyll.mul(nu, c)))
            })
            .collect();
        if left.is_empty() {
            continue;
        }
        for &x in &xs {
            let mut acc = idyll.null_acc();
            for (odd, t, coef) in &left {
                if x.contains(*t) {
                    continue;
                }
                if let Some(mu) = mvals.get(&x.with(*t)) {
                    let s = *odd ^ (x.rank_below(*t) % 2 == 1);
                    acc.push(&idyll.signed(idyll.mul(coef, mu), s));
                }
            }
            if !acc.is_null() {
                return Ok(Some(MorphismWitness { y: n.ground().labels_of(y), x: m.ground().labels_of(x) }));
            }
        }
    }
    Ok(None)
}

/// Plücker-sum criterion; the default morphism test.
pub fn is_morphism_pluecker(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<bool> {
    Ok(pluecker_witness(phi, n, m)?.is_none())
}

/// `Φ·C ⊥ D` for every circuit `C` of `N` and cocircuit `D` of `M`.
pub fn is_morphism_circuits(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<bool> {
    check_shapes(phi, n, m)?;
    let idyll = phi.idyll();
    let cocircuits = m.cocircuits();
    for c in n.circuits() {
        let img = phi.apply(&c)?;
        if !cocircuits.iter().all(|d| orthogonal(idyll, &img.entries, &d.entries)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Φ·V_N ⊆ V_M` by enumerating the vectors of `N`.
pub fn is_morphism_vectors(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid, budget: u64) -> Result<bool> {
    check_shapes(phi, n, m)?;
    let idyll = phi.idyll();
    let cocircuits = m.cocircuits();
    for x in n.vectors(budget)? {
        let img = phi.apply(&x)?;
        if !cocircuits.iter().all(|d| orthogonal(idyll, &img.entries, &d.entries)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pre-image matroid `Φ⁻¹(M)` on the source of `Φ`.
pub fn preimage(phi: &SubmonomialMatrix, m: &Matroid) -> Result<Matroid> {
    if m.ground() != phi.target() || m.idyll() != phi.idyll() {
        return Err(Error::ShapeMismatch("matroid does not live on the target".into()));
    }
    let idyll = phi.idyll();
    let f = phi.underlying_map();
    let image = f.image(phi.source().full());
    let d = m.rank_of(image);
    if d == 0 {
        return Ok(Matroid::rank_zero(phi.source().clone(), idyll));
    }
    let base = m.max_independent_in(image);
    let extra = m.extend_independent(base, image.complement(m.len())).difference(base);
    let extra: Vec<usize> = extra.to_vec();
    let domain = f.preimage(image);
    let mut vals = BTreeMap::new();
    for z in crate::subset::sub_combinations(domain, d) {
        let mut tuple: Vec<usize> = Vec::with_capacity(m.rank());
        let mut coef = idyll.one();
        for s in z.iter() {
            let (t, c) = phi.entry(s).expect("in domain");
            tuple.push(t);
            coef = idyll.mul(&coef, c);
        }
        tuple.extend(&extra);
        let v = idyll.mul(&coef, &m.eval(&tuple));
        if !v.is_zero() {
            vals.insert(z, v);
        }
    }
    Ok(Matroid::from_parts(phi.source().clone(), d, idyll, vals))
}

/// Whether `M` is a quotient of `N`: the identity is a morphism `N → M`.
pub fn is_quotient(n: &Matroid, m: &Matroid) -> Result<bool> {
    if n.ground() != m.ground() {
        return Err(Error::ShapeMismatch("quotients need equal ground sets".into()));
    }
    is_morphism_pluecker(&SubmonomialMatrix::identity(n.ground().clone(), n.idyll()), n, m)
}

/// `Φ⁻¹(M)` is a quotient of `N`.
pub fn factorization_check(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<bool> {
    check_shapes(phi, n, m)?;
    is_quotient(n, &preimage(phi, m)?)
}

/// `Φ/(A → B)`: columns `S - A`, rows `T - B`; requires `Φ(A) ⊆ B ∪ {0}`.
pub fn contract_morphism(phi: &SubmonomialMatrix, a: Subset, b: Subset) -> Result<SubmonomialMatrix> {
    phi.check_minor_condition(a, b)?;
    Ok(phi.submatrix(a.complement(phi.source.len()), b.complement(phi.target.len())))
}

/// `Φ|(A → B)`: columns `A`, rows `B`; requires `Φ(A) ⊆ B ∪ {0}`.
pub fn restrict_morphism(phi: &SubmonomialMatrix, a: Subset, b: Subset) -> Result<SubmonomialMatrix> {
    phi.check_minor_condition(a, b)?;
    Ok(phi.submatrix(a, b))
}

/// `Φᵗ∖(A → B) := Φᵗ|(T - B → S - A)`, a morphism `M*∖B → N*∖A`.
pub fn delete_morphism_dual(phi: &SubmonomialMatrix, a: Subset, b: Subset) -> Result<SubmonomialMatrix> {
    phi.check_minor_condition(a, b)?;
    restrict_morphism(&phi.transpose(), b.complement(phi.target.len()), a.complement(phi.source.len()))
}

/// Push-forward of a morphism along an idyll morphism, with revalidation.
pub fn push_forward_morphism(
    f: &IdyllMorphism,
    phi: &SubmonomialMatrix,
    n: &Matroid,
    m: &Matroid,
) -> Result<(SubmonomialMatrix, bool)> {
    let fphi = phi.push_forward(f)?;
    let ok = is_morphism_pluecker(&fphi, &n.push_forward(f)?, &m.push_forward(f)?)?;
    Ok((fphi, ok))
}

/// `{X : Φ·X ∈ V}` over `F^S`, for a finite idyll.
pub fn pull_back_vectors(phi: &SubmonomialMatrix, vectors: &[VectorF], budget: u64) -> Result<Vec<VectorF>> {
    let set: BTreeSet<&Vec<Elem>> = vectors.iter().map(|v| &v.entries).collect();
    let mut out = vec![];
    for entries in all_vectors(phi.idyll(), phi.source().len(), budget)? {
        let x = VectorF { ground: phi.source().clone(), idyll: phi.idyll(), entries };
        if set.contains(&phi.apply(&x)?.entries) {
            out.push(x);
        }
    }
    out.sort();
    Ok(out)
}

/// Every submonomial matrix `S → T` over `idyll`, in a fixed order.
pub fn all_submonomial(source: &GroundSet, target: &GroundSet, idyll: Idyll) -> Result<Vec<SubmonomialMatrix>> {
    let units = idyll.units().ok_or_else(|| Error::InfiniteCarrier(idyll.to_string()))?;
    let mut out = vec![];
    let mut cur: Vec<Option<(usize, Elem)>> = Vec::with_capacity(source.len());
    #[allow(clippy::too_many_arguments)]
    fn rec(
        s: usize,
        used: Subset,
        cur: &mut Vec<Option<(usize, Elem)>>,
        units: &[Elem],
        source: &GroundSet,
        target: &GroundSet,
        idyll: Idyll,
        out: &mut Vec<SubmonomialMatrix>,
    ) {
        if s == source.len() {
            out.push(SubmonomialMatrix { source: source.clone(), target: target.clone(), idyll, entries: cur.clone() });
            return;
        }
        cur.push(None);
        rec(s + 1, used, cur, units, source, target, idyll, out);
        cur.pop();
        for t in 0..target.len() {
            if used.contains(t) {
                continue;
            }
            for u in units {
                cur.push(Some((t, u.clone())));
                rec(s + 1, used.with(t), cur, units, source, target, idyll, out);
                cur.pop();
            }
        }
    }
    rec(0, Subset::EMPTY, &mut cur, &units, source, target, idyll, &mut out);
    Ok(out)
}
