//! Classical matroids and strong maps between them.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::catalogue::satisfies_exchange;
use crate::error::{Error, Result};
use crate::f1::{F1LinearMap, PointedMap};
use crate::ground::GroundSet;
use crate::idyll::Idyll;
use crate::matroid::Matroid;
use crate::morphism::{pluecker_witness, SubmonomialMatrix};
use crate::subset::{combinations, power_set, Subset};

/// Largest ground set for which rank and closure tables are built.
pub const MAX_CLASSICAL_GROUND: usize = 20;

/// Precomputed rank calculus over all subsets.
#[derive(Debug)]
struct Calculus {
    rank: Vec<u8>,
    closure: Vec<Subset>,
    flats: Vec<Subset>,
    circuits: Vec<Subset>,
    cocircuits: Vec<Subset>,
}

/// A matroid given by its bases.
#[derive(Debug)]
pub struct ClassicalMatroid {
    ground: GroundSet,
    rank: usize,
    bases: Vec<Subset>,
    calc: OnceLock<Calculus>,
}

impl Clone for ClassicalMatroid {
    fn clone(&self) -> Self {
        ClassicalMatroid { ground: self.ground.clone(), rank: self.rank, bases: self.bases.clone(), calc: OnceLock::new() }
    }
}

impl PartialEq for ClassicalMatroid {
    fn eq(&self, o: &Self) -> bool {
        self.ground == o.ground && self.rank == o.rank && self.bases == o.bases
    }
}

impl Eq for ClassicalMatroid {}

impl ClassicalMatroid {
    pub fn new(ground: GroundSet, bases: Vec<Subset>) -> Result<Self> {
        if ground.len() > MAX_CLASSICAL_GROUND {
            return Err(Error::InvalidInput(format!("ground set larger than {MAX_CLASSICAL_GROUND}")));
        }
        let mut bases: Vec<Subset> = bases.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        bases.sort();
        let rank = bases.first().ok_or(Error::AllZero)?.len();
        if bases.iter().any(|b| b.len() != rank || !b.is_subset(ground.full())) {
            return Err(Error::InvalidInput("bases must be equal-size subsets of the ground set".into()));
        }
        if !satisfies_exchange(&bases) {
            return Err(Error::InvalidInput("bases violate the exchange axiom".into()));
        }
        Ok(ClassicalMatroid { ground, rank, bases, calc: OnceLock::new() })
    }

    pub fn from_labels(ground: GroundSet, bases: &[&[&str]]) -> Result<Self> {
        let bs = bases.iter().map(|b| ground.subset_of(b)).collect::<Result<Vec<_>>>()?;
        ClassicalMatroid::new(ground, bs)
    }

    /// Bases of the underlying matroid.
    pub fn from_matroid(m: &Matroid) -> Self {
        ClassicalMatroid::new(m.ground().clone(), m.bases().collect()).expect("matroid bases satisfy exchange")
    }

    pub fn to_k(&self) -> Matroid {
        Matroid::from_bases_k(self.ground.clone(), self.rank, &self.bases).expect("exchange checked")
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    fn calc(&self) -> &Calculus {
        self.calc.get_or_init(|| {
            let n = self.ground.len();
            let size = 1usize << n;
            let rank: Vec<u8> = (0..size as u64)
                .map(|a| self.bases.iter().map(|b| b.intersection(Subset(a)).len()).max().unwrap_or(0) as u8)
                .collect();
            let closure: Vec<Subset> = (0..size)
                .map(|a| Subset::from_indices((0..n).filter(|&e| rank[a | 1 << e] == rank[a])))
                .collect();
            let flats = (0..size).filter(|&a| closure[a].bits() == a as u64).map(|a| Subset(a as u64)).collect::<Vec<_>>();
            let circuits = (0..size)
                .filter(|&a| {
                    let s = Subset(a as u64);
                    (rank[a] as usize) < s.len() && s.iter().all(|e| rank[a & !(1 << e)] as usize == s.len() - 1)
                })
                .map(|a| Subset(a as u64))
                .collect();
            let full = Subset::full(n);
            let cocircuits = flats
                .iter()
                .filter(|f| self.rank > 0 && rank[f.bits() as usize] as usize == self.rank - 1)
                .map(|f| full.difference(*f))
                .collect();
            Calculus { rank, closure, flats, circuits, cocircuits }
        })
    }

    pub fn rank_of(&self, a: Subset) -> usize {
        self.calc().rank[a.bits() as usize] as usize
    }

    pub fn closure_of(&self, a: Subset) -> Subset {
        self.calc().closure[a.bits() as usize]
    }

    pub fn is_flat(&self, a: Subset) -> bool {
        self.closure_of(a) == a
    }

    pub fn flats(&self) -> &[Subset] {
        &self.calc().flats
    }

    pub fn circuits(&self) -> &[Subset] {
        &self.calc().circuits
    }

    pub fn cocircuits(&self) -> &[Subset] {
        &self.calc().cocircuits
    }

    pub fn dual(&self) -> ClassicalMatroid {
        let n = self.ground.len();
        ClassicalMatroid::new(self.ground.clone(), self.bases.iter().map(|b| b.complement(n)).collect()).expect("dual")
    }

    /// Whether `a` is a union of cocircuits.
    fn is_union_of_cocircuits(&self, a: Subset) -> bool {
        let covered = self.cocircuits().iter().filter(|z| z.is_subset(a)).fold(Subset::EMPTY, |u, z| u.union(*z));
        covered == a
    }
}

fn check(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<()> {
    if sigma.source() != n.ground() || sigma.target() != m.ground() {
        return Err(Error::ShapeMismatch("map does not match the matroids' ground sets".into()));
    }
    Ok(())
}

/// `{s : σ(s) = 0 or σ(s) ∈ f}`, the pull-back of a flat of the augmented target.
fn pull_flat(sigma: &PointedMap, f: Subset) -> Subset {
    sigma.kernel().union(sigma.preimage(f))
}

/// Cocircuit criterion: `σ⁻¹(Z)` is a union of cocircuits of `N` for each cocircuit `Z` of `M`.
pub fn is_strong_map(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<bool> {
    check(sigma, n, m)?;
    Ok(m.cocircuits().iter().all(|&z| n.is_union_of_cocircuits(sigma.preimage(z))))
}

/// Flat criterion: pull-backs of flats of `M̃` are flats of `Ñ`.
pub fn is_strong_map_flats(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<bool> {
    check(sigma, n, m)?;
    Ok(m.flats().iter().all(|&f| n.is_flat(pull_flat(sigma, f))))
}

/// Closure criterion: `σ(cl_N(A)) ⊆ cl_M(σ(A)) ∪ {0}` for every `A`.
pub fn is_strong_map_closure(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<bool> {
    check(sigma, n, m)?;
    Ok(power_set(n.ground().full()).all(|a| sigma.image(n.closure_of(a)).is_subset(m.closure_of(sigma.image(a)))))
}

/// Orthogonality criterion `σ(C_N) ⊥ C*_M`: no image of a circuit meets a cocircuit once.
pub fn is_strong_map_orthogonality(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<bool> {
    check(sigma, n, m)?;
    Ok(n.circuits().iter().all(|&c| {
        let img = sigma.image(c);
        m.cocircuits().iter().all(|z| img.intersection(*z).len() != 1)
    }))
}

/// The pre-image matroid with rank function `A ↦ rk_M(σ(A))`.
pub fn preimage_classical(sigma: &PointedMap, m: &ClassicalMatroid) -> Result<ClassicalMatroid> {
    if sigma.target() != m.ground() {
        return Err(Error::ShapeMismatch("matroid does not live on the target".into()));
    }
    let src = sigma.source();
    let r = m.rank_of(sigma.image(src.full()));
    let bases = combinations(src.len(), r).filter(|&a| m.rank_of(sigma.image(a)) == r && sigma.image(a).len() == r).collect();
    ClassicalMatroid::new(src.clone(), bases)
}

/// Whether `q` is a quotient of `n`, via the flag Plücker relations over the Krasner hyperfield.
pub fn is_quotient_classical(n: &ClassicalMatroid, q: &ClassicalMatroid) -> Result<bool> {
    crate::morphism::is_quotient(&n.to_k(), &q.to_k())
}

pub fn is_f1_linear(sigma: &PointedMap) -> bool {
    sigma.is_f1_linear()
}

/// Underlying map of a Krasner morphism `Φ: N → M`.
pub fn k_morphism_to_strong(phi: &SubmonomialMatrix, n: &Matroid, m: &Matroid) -> Result<F1LinearMap> {
    if phi.idyll() != Idyll::Krasner {
        return Err(Error::DescriptorMismatch(phi.idyll().to_string(), Idyll::Krasner.to_string()));
    }
    if let Some(w) = pluecker_witness(phi, n, m)? {
        return Err(Error::NotMorphism { y: w.y, x: w.x });
    }
    Ok(phi.underlying_map())
}

/// The Krasner morphism induced by an F1-linear strong map.
pub fn strong_to_k_morphism(sigma: &PointedMap, n: &ClassicalMatroid, m: &ClassicalMatroid) -> Result<SubmonomialMatrix> {
    let f = F1LinearMap::new(sigma.clone())?;
    if !is_strong_map(sigma, n, m)? {
        return Err(Error::NotStrong);
    }
    Ok(SubmonomialMatrix::induced(&f, Idyll::Krasner))
}

/// Every pointed map `S̲ → T̲`.
pub fn all_pointed_maps(source: &GroundSet, target: &GroundSet) -> Vec<PointedMap> {
    let (s, t) = (source.len(), target.len());
    let total = (t + 1).pow(s as u32);
    (0..total)
        .map(|mut code| {
            let map = (0..s)
                .map(|_| {
                    let d = code % (t + 1);
                    code /= t + 1;
                    (d > 0).then(|| d - 1)
                })
                .collect();
            PointedMap::new(source.clone(), target.clone(), map).expect("in range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::k_basis_families;
    use crate::morphism::is_morphism_pluecker;

    fn g(n: usize) -> GroundSet {
        GroundSet::numbered(n)
    }

    fn catalogue(n: usize) -> Vec<ClassicalMatroid> {
        (0..=n)
            .flat_map(|r| k_basis_families(n, r).iter().map(|f| ClassicalMatroid::new(g(n), f.clone()).unwrap()).collect::<Vec<_>>())
            .collect()
    }

    fn u(r: usize, n: usize) -> ClassicalMatroid {
        ClassicalMatroid::from_matroid(&Matroid::uniform(r, n))
    }

    #[test]
    fn rank_and_closure_examples() {
        let u23 = u(2, 3);
        assert_eq!(u23.rank_of(Subset::EMPTY), 0);
        assert_eq!(u23.closure_of(Subset::singleton(0)), Subset::singleton(0));
        assert_eq!(u(1, 3).closure_of(Subset::singleton(0)), Subset::full(3));
    }

    #[test]
    fn strong_map_examples() {
        let m = u(2, 4);
        let id = PointedMap::identity(g(4));
        assert!(is_strong_map(&id, &m, &m).unwrap());
        // S̲ → (S - A)̲ sending A to 0 is strong M → M/A.
        let a = Subset::from_indices([1]);
        let rest = g(4).sub(a.complement(4));
        let contr = PointedMap::from_pairs(g(4), rest.clone(), &[("1", "1"), ("3", "3"), ("4", "4")]).unwrap();
        let ma = ClassicalMatroid::from_matroid(&Matroid::uniform(2, 4).contract(a));
        assert!(is_strong_map(&contr, &m, &ma).unwrap());
        let n = u(1, 2);
        let m1 = u(1, 1);
        let sigma = PointedMap::from_pairs(g(2), g(1), &[("1", "1")]).unwrap();
        assert!(!is_strong_map(&sigma, &n, &m1).unwrap());
    }

    #[test]
    fn preimage_examples() {
        let m = u(2, 3);
        assert_eq!(preimage_classical(&PointedMap::identity(g(3)), &m).unwrap(), m);
        let collapse = PointedMap::from_pairs(g(3), g(3), &[("1", "1"), ("2", "1"), ("3", "2")]).unwrap();
        let p = preimage_classical(&collapse, &m).unwrap();
        assert!(p.circuits().contains(&Subset::from_indices([0, 1])));
        assert_eq!(p.rank(), 2);
        let zero = PointedMap::new(g(3), g(3), vec![None; 3]).unwrap();
        assert_eq!(preimage_classical(&zero, &m).unwrap().rank(), 0);
    }

    #[test]
    fn preimage_rank_function() {
        for m in catalogue(3) {
            for sigma in all_pointed_maps(&g(3), &g(3)) {
                let p = preimage_classical(&sigma, &m).unwrap();
                for a in power_set(g(3).full()) {
                    assert_eq!(p.rank_of(a), m.rank_of(sigma.image(a)));
                }
            }
        }
    }

    #[test]
    fn f1_linearity_examples() {
        assert!(is_f1_linear(&PointedMap::identity(g(3))));
        let two_to_one = PointedMap::from_pairs(g(2), g(1), &[("1", "1"), ("2", "1")]).unwrap();
        assert!(!is_f1_linear(&two_to_one));
        let contr = PointedMap::from_pairs(g(3), g(2), &[("1", "1"), ("3", "2")]).unwrap();
        assert!(is_f1_linear(&contr));
    }

    #[test]
    fn criteria_agree_and_factor_through_quotients() {
        for ns in 0..=3 {
            for nt in 0..=3 {
                let (cn, cm) = (catalogue(ns), catalogue(nt));
                for sigma in all_pointed_maps(&g(ns), &g(nt)) {
                    for n in &cn {
                        for m in &cm {
                            let a = is_strong_map(&sigma, n, m).unwrap();
                            assert_eq!(a, is_strong_map_flats(&sigma, n, m).unwrap());
                            assert_eq!(a, is_strong_map_closure(&sigma, n, m).unwrap());
                            let q = preimage_classical(&sigma, m).unwrap();
                            assert_eq!(a, is_quotient_classical(n, &q).unwrap());
                            if sigma.is_f1_linear() {
                                assert_eq!(a, is_strong_map_orthogonality(&sigma, n, m).unwrap());
                                let t = F1LinearMap::new(sigma.clone()).unwrap().adjoint();
                                assert_eq!(a, is_strong_map(&t, &m.dual(), &n.dual()).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k_morphisms_are_strong_maps() {
        let ms = catalogue(3);
        for phi in crate::morphism::all_submonomial(&g(3), &g(3), Idyll::Krasner).unwrap() {
            for n in &ms {
                for m in &ms {
                    let (kn, km) = (n.to_k(), m.to_k());
                    if is_morphism_pluecker(&phi, &kn, &km).unwrap() {
                        let sigma = k_morphism_to_strong(&phi, &kn, &km).unwrap();
                        assert!(is_strong_map(&sigma, n, m).unwrap());
                        assert_eq!(strong_to_k_morphism(&sigma, n, m).unwrap(), phi);
                    } else {
                        assert!(k_morphism_to_strong(&phi, &kn, &km).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_examples() {
        let s = GroundSet::new(["1", "4", "6"]).unwrap();
        let t = GroundSet::new(["2", "5"]).unwrap();
        let phi1 = SubmonomialMatrix::from_dense(s.clone(), t.clone(), Idyll::Krasner, &[&["1", "0", "0"], &["0", "1", "0"]]).unwrap();
        let n = Matroid::uniform(2, 3).relabel(s).unwrap();
        let m = Matroid::uniform(1, 2).relabel(t).unwrap();
        let sigma = k_morphism_to_strong(&phi1, &n, &m).unwrap();
        let back = strong_to_k_morphism(&sigma, &ClassicalMatroid::from_matroid(&n), &ClassicalMatroid::from_matroid(&m)).unwrap();
        assert_eq!(back, phi1);
        let id = PointedMap::identity(g(2));
        let u12 = u(1, 2);
        assert_eq!(strong_to_k_morphism(&id, &u12, &u12).unwrap(), SubmonomialMatrix::identity(g(2), Idyll::Krasner));
        let par = PointedMap::from_pairs(g(2), g(1), &[("1", "1"), ("2", "1")]).unwrap();
        assert!(matches!(strong_to_k_morphism(&par, &u12, &u(1, 1)), Err(Error::NotF1Linear(_))));
    }

    #[test]
    fn pointed_map_count() {
        assert_eq!(all_pointed_maps(&g(3), &g(2)).len(), 27);
        assert_eq!(all_pointed_maps(&g(0), &g(2)).len(), 1);
    }
}
