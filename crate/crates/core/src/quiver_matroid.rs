//! Quiver matroids: a matroid per vertex and a morphism per arrow.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::catalogue::matroids;
use crate::error::{Error, Result};
use crate::f1::F1LinearMap;
use crate::ground::GroundSet;
use crate::idyll::Idyll;
use crate::matroid::Matroid;
use crate::morphism::{contract_morphism, pluecker_witness, restrict_morphism, SubmonomialMatrix};
use crate::quiver::{F1Rep, Quiver};
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverMatroid {
    quiver: Quiver,
    matroids: Vec<Matroid>,
    arrows: Vec<SubmonomialMatrix>,
}

impl PartialOrd for QuiverMatroid {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by the vertex matroids; meaningful among points of one representation.
impl Ord for QuiverMatroid {
    fn cmp(&self, other: &Self) -> Ordering {
        self.matroids.cmp(&other.matroids).then_with(|| self.arrows.len().cmp(&other.arrows.len()))
    }
}

/// Checks shapes, the shared idyll and the morphism condition on every arrow.
pub fn validate_qm(quiver: Quiver, matroids: Vec<Matroid>, arrows: Vec<SubmonomialMatrix>) -> Result<QuiverMatroid> {
    if matroids.len() != quiver.vertices().len() || arrows.len() != quiver.arrows().len() {
        return Err(Error::ShapeMismatch("quiver matroid does not match the quiver".into()));
    }
    if let Some(m) = matroids.iter().find(|m| m.idyll() != matroids[0].idyll()) {
        return Err(Error::DescriptorMismatch(matroids[0].idyll().to_string(), m.idyll().to_string()));
    }
    for (a, phi) in quiver.arrows().iter().zip(&arrows) {
        let (n, m) = (&matroids[a.source], &matroids[a.target]);
        if phi.source() != n.ground() || phi.target() != m.ground() {
            return Err(Error::ShapeMismatch(format!("matrix of arrow {} does not match its vertices", a.name)));
        }
        if let Some(w) = pluecker_witness(phi, n, m)? {
            return Err(Error::MorphismViolation { arrow: a.name.clone(), y: w.y, x: w.x });
        }
    }
    Ok(QuiverMatroid { quiver, matroids, arrows })
}

impl QuiverMatroid {
    /// Vertex matroids over `rep` with the induced arrow matrices.
    pub fn from_rep(rep: &F1Rep, matroids: Vec<Matroid>) -> Result<Self> {
        let idyll = matroids.first().map_or(Idyll::Krasner, Matroid::idyll);
        let arrows = rep.maps().iter().map(|f| induced_arrow_matrix(f, idyll)).collect();
        validate_qm(rep.quiver().clone(), matroids, arrows)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn matroids(&self) -> &[Matroid] {
        &self.matroids
    }

    pub fn matroid(&self, v: usize) -> &Matroid {
        &self.matroids[v]
    }

    pub fn arrows(&self) -> &[SubmonomialMatrix] {
        &self.arrows
    }

    pub fn idyll(&self) -> Idyll {
        self.matroids.first().map_or(Idyll::Krasner, Matroid::idyll)
    }

    pub fn rank_vector(&self) -> Vec<usize> {
        self.matroids.iter().map(Matroid::rank).collect()
    }

    /// Every vertex matroid has a single basis.
    pub fn is_coordinate(&self) -> bool {
        self.matroids.iter().all(|m| m.num_bases() == 1)
    }

    /// `U(M)`: ground sets and the supports of the arrow matrices.
    pub fn underlying_rep(&self) -> F1Rep {
        let sets = self.matroids.iter().map(|m| m.ground().clone()).collect();
        let maps = self.arrows.iter().map(SubmonomialMatrix::underlying_map).collect();
        F1Rep::new(self.quiver.clone(), sets, maps).expect("validated shapes")
    }

    /// Push-forward to the Krasner hyperfield.
    pub fn underlying(&self) -> QuiverMatroid {
        let matroids = self.matroids.iter().map(Matroid::underlying).collect();
        let arrows = self.arrows.iter().map(|a| induced_arrow_matrix(&a.underlying_map(), Idyll::Krasner)).collect();
        validate_qm(self.quiver.clone(), matroids, arrows).expect("morphisms push forward to K")
    }

    fn check_subrep(&self, omega: &[Subset]) -> Result<()> {
        if !self.underlying_rep().is_subrepresentation(omega) {
            return Err(Error::NotSubrepresentation("tuple is not closed under the arrow maps".into()));
        }
        Ok(())
    }

    /// `M|Ω`: vertex restrictions with the restricted arrow matrices.
    pub fn restrict(&self, omega: &[Subset]) -> Result<QuiverMatroid> {
        self.check_subrep(omega)?;
        let matroids = self.matroids.iter().zip(omega).map(|(m, &o)| m.restrict(o)).collect();
        let arrows = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.arrows)
            .map(|(a, phi)| restrict_morphism(phi, omega[a.source], omega[a.target]))
            .collect::<Result<Vec<_>>>()?;
        validate_qm(self.quiver.clone(), matroids, arrows)
    }

    /// `M/Ω`: vertex contractions with the arrow matrices on the complements.
    pub fn contract(&self, omega: &[Subset]) -> Result<QuiverMatroid> {
        self.check_subrep(omega)?;
        let matroids = self.matroids.iter().zip(omega).map(|(m, &o)| m.contract(o)).collect();
        let arrows = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.arrows)
            .map(|(a, phi)| contract_morphism(phi, omega[a.source], omega[a.target]))
            .collect::<Result<Vec<_>>>()?;
        validate_qm(self.quiver.clone(), matroids, arrows)
    }
}

/// `M* = ((M_v*), (M_α^t))` over the opposite quiver.
pub fn dual_qm(m: &QuiverMatroid) -> QuiverMatroid {
    let matroids = m.matroids.iter().map(Matroid::dual).collect();
    let arrows = m.arrows.iter().map(SubmonomialMatrix::transpose).collect();
    validate_qm(m.quiver.dual(), matroids, arrows).expect("transposes are morphisms of duals")
}

pub fn restrict_qm(m: &QuiverMatroid, omega: &[Subset]) -> Result<QuiverMatroid> {
    m.restrict(omega)
}

pub fn contract_qm(m: &QuiverMatroid, omega: &[Subset]) -> Result<QuiverMatroid> {
    m.contract(omega)
}

/// The matrix with a 1 at `(Λ(j), j)` whenever `Λ(j) ≠ 0`.
pub fn induced_arrow_matrix(f: &F1LinearMap, idyll: Idyll) -> SubmonomialMatrix {
    SubmonomialMatrix::induced(f, idyll)
}

/// The Krasner matroid of full rank on `v`.
pub fn full_rank_matroid_functor(v: &GroundSet) -> Matroid {
    Matroid::full_rank(v.clone(), Idyll::Krasner)
}

/// Number of candidate tuples `Π_v #catalogue(v)`, saturating.
pub fn enumeration_cost(rep: &F1Rep, r: &[usize], idyll: Idyll, budget: u64) -> Result<u128> {
    let cats = catalogues(rep, r, idyll, budget)?;
    Ok(cats.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128)))
}

fn catalogues(rep: &F1Rep, r: &[usize], idyll: Idyll, budget: u64) -> Result<Vec<Vec<Matroid>>> {
    if r.len() != rep.sets().len() {
        return Err(Error::ShapeMismatch(format!("rank vector has {} entries for {} vertices", r.len(), rep.sets().len())));
    }
    if let Some(v) = (0..r.len()).find(|&v| r[v] > rep.set(v).len()) {
        return Err(Error::InvalidInput(format!("rank {} exceeds #E at vertex {}", r[v], rep.quiver().vertices()[v])));
    }
    rep.sets().iter().zip(r).map(|(s, &rv)| matroids(idyll, s, rv, budget)).collect()
}

/// All quiver matroids over `idyll` with rank vector `r`, underlying representation `rep`
/// and the induced arrow matrices, in canonical order.
///
/// `budget` caps both the per-vertex catalogue searches and the number of candidate tuples.
pub fn enumerate_points(rep: &F1Rep, r: &[usize], idyll: Idyll, budget: u64) -> Result<Vec<QuiverMatroid>> {
    let cats = catalogues(rep, r, idyll, budget)?;
    let needed = cats.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128));
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let nv = cats.len();
    if nv == 0 {
        return Ok(vec![validate_qm(rep.quiver().clone(), vec![], vec![])?]);
    }
    let mats: Vec<SubmonomialMatrix> = rep.maps().iter().map(|f| induced_arrow_matrix(f, idyll)).collect();
    // Compatibility tables per arrow: compat[a][i][j] iff catalogue entry i at the source
    // maps to entry j at the target.
    let compat: Vec<Vec<Vec<bool>>> = rep
        .quiver()
        .arrows()
        .iter()
        .zip(&mats)
        .map(|(a, phi)| {
            let (cs, ct) = (&cats[a.source], &cats[a.target]);
            cs.par_iter()
                .map(|n| ct.iter().map(|m| pluecker_witness(phi, n, m).map(|w| w.is_none())).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    // Arrows to check when vertex k is assigned, cheapest tables first.
    let mut checks: Vec<Vec<usize>> = vec![vec![]; nv];
    let mut order: Vec<usize> = (0..rep.quiver().arrows().len()).collect();
    let size = |ai: usize| {
        let a = &rep.quiver().arrows()[ai];
        cats[a.source].len() * cats[a.target].len()
    };
    order.sort_by_key(|&ai| (size(ai), ai));
    for ai in order {
        let a = &rep.quiver().arrows()[ai];
        checks[a.source.max(a.target)].push(ai);
    }
    let search = Search { rep, cats: &cats, compat: &compat, checks: &checks };
    let tuples: Vec<Vec<usize>> = (0..cats[0].len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = vec![];
            let mut cur = vec![i];
            if search.consistent(&cur) {
                search.extend(&mut cur, &mut out);
            }
            out
        })
        .collect();
    let mut points: Vec<QuiverMatroid> = tuples
        .into_iter()
        .map(|t| QuiverMatroid {
            quiver: rep.quiver().clone(),
            matroids: t.iter().enumerate().map(|(v, &i)| cats[v][i].clone()).collect(),
            arrows: mats.clone(),
        })
        .collect();
    points.sort();
    Ok(points)
}

struct Search<'a> {
    rep: &'a F1Rep,
    cats: &'a [Vec<Matroid>],
    compat: &'a [Vec<Vec<bool>>],
    checks: &'a [Vec<usize>],
}

impl Search<'_> {
    fn consistent(&self, cur: &[usize]) -> bool {
        let k = cur.len() - 1;
        self.checks[k].iter().all(|&ai| {
            let a = &self.rep.quiver().arrows()[ai];
            self.compat[ai][cur[a.source]][cur[a.target]]
        })
    }

    fn extend(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = cur.len();
        if v == self.cats.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..self.cats[v].len() {
            cur.push(i);
            if self.consistent(cur) {
                self.extend(cur, out);
            }
            cur.pop();
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::catalogue::satisfies_exchange;
    use crate::morphism::{all_submonomial, is_morphism_pluecker};
    use crate::quiver::tests::d4;
    use crate::subset::{combinations, power_set};
    use crate::DEFAULT_BUDGET;

    pub fn d4_points() -> Vec<QuiverMatroid> {
        enumerate_points(&d4(), &[2, 1, 1, 1], Idyll::Krasner, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn d4_has_thirteen_points() {
        let pts = d4_points();
        assert_eq!(pts.len(), 13);
        for p in &pts {
            assert_eq!(p.rank_vector(), vec![2, 1, 1, 1]);
            assert_eq!(p.underlying_rep(), d4());
            let again = validate_qm(p.quiver().clone(), p.matroids().to_vec(), p.arrows().to_vec()).unwrap();
            assert_eq!(&again, p);
        }
    }

    #[test]
    fn d4_induced_first_arrow() {
        let rep = d4();
        let phi = induced_arrow_matrix(rep.map(0), Idyll::Krasner);
        let one = Idyll::Krasner.one();
        let zero = Idyll::Krasner.zero();
        assert_eq!(phi.dense(), vec![vec![one.clone(), zero.clone(), zero.clone()], vec![zero.clone(), one, zero]]);
    }

    #[test]
    fn induced_zero_and_bijection() {
        let g = GroundSet::numbered(3);
        let z = induced_arrow_matrix(&F1LinearMap::zero(g.clone(), g.clone()), Idyll::Sign);
        assert!(z.entries().iter().all(Option::is_none));
        let p = F1LinearMap::from_pairs(g.clone(), g.clone(), &[("1", "2"), ("2", "3"), ("3", "1")]).unwrap();
        let m = induced_arrow_matrix(&p, Idyll::Sign);
        assert!(m.entries().iter().all(|e| e.as_ref().is_some_and(|(_, c)| *c == Idyll::Sign.one())));
        assert_eq!(m.underlying_map(), p);
    }

    #[test]
    fn d4_incompatible_vertex_matroid() {
        let rep = d4();
        let cat1 = matroids(Idyll::Krasner, rep.set(1), 1, DEFAULT_BUDGET).unwrap();
        let (pt, bad) = d4_points()
            .into_iter()
            .find_map(|pt| {
                let bad = cat1.iter().find(|m1| {
                    let mut ms = pt.matroids().to_vec();
                    ms[1] = (*m1).clone();
                    QuiverMatroid::from_rep(&rep, ms).is_err()
                })?;
                Some((pt, bad.clone()))
            })
            .unwrap();
        let mut ms = pt.matroids().to_vec();
        ms[1] = bad;
        assert!(matches!(QuiverMatroid::from_rep(&rep, ms), Err(Error::MorphismViolation { ref arrow, .. }) if arrow == "a1"));
    }

    #[test]
    fn single_vertex_counts_match_exchange_oracle() {
        for n in 0..=4 {
            let g = GroundSet::numbered(n);
            let rep = F1Rep::new(Quiver::single_vertex("v"), vec![g.clone()], vec![]).unwrap();
            for r in 0..=n {
                let pts = enumerate_points(&rep, &[r], Idyll::Krasner, DEFAULT_BUDGET).unwrap();
                let bases: Vec<Subset> = combinations(n, r).collect();
                let oracle = power_set(Subset::full(bases.len()))
                    .filter(|s| !s.is_empty())
                    .filter(|s| satisfies_exchange(&s.iter().map(|i| bases[i]).collect::<Vec<_>>()))
                    .count();
                assert_eq!(pts.len(), oracle, "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn rank_zero_gives_one_point() {
        let rep = d4();
        assert_eq!(enumerate_points(&rep, &[0, 0, 0, 0], Idyll::Krasner, DEFAULT_BUDGET).unwrap().len(), 1);
        assert_eq!(enumerate_points(&rep, &[0, 0, 0, 0], Idyll::Sign, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_points(&d4(), &[2, 1, 1, 1], Idyll::Krasner, 10).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn flag_chain_is_valid() {
        let g = GroundSet::numbered(3);
        let q = Quiver::new(&["v2", "v1"], &[("a", "v2", "v1")]).unwrap();
        let u23 = Matroid::uniform(2, 3);
        let u13 = Matroid::uniform(1, 3);
        let id = SubmonomialMatrix::identity(g.clone(), Idyll::Krasner);
        let m = validate_qm(q.clone(), vec![u23.clone(), u13.clone()], vec![id.clone()]).unwrap();
        let d = dual_qm(&m);
        assert_eq!(d.matroids(), &[u23.dual(), u13.dual()]);
        assert_eq!(dual_qm(&d), m);
        // U¹₃ → U²₃ is not a quotient in that direction.
        let rev = validate_qm(q, vec![u13, u23], vec![id]);
        assert!(matches!(rev, Err(Error::MorphismViolation { .. })));
    }

    #[test]
    fn flag_points_match_quotient_enumeration() {
        let g = GroundSet::numbered(3);
        let q = Quiver::new(&["v2", "v1"], &[("a", "v2", "v1")]).unwrap();
        let rep = F1Rep::new(q, vec![g.clone(), g.clone()], vec![F1LinearMap::identity(g.clone())]).unwrap();
        for idyll in [Idyll::Krasner, Idyll::Sign] {
            let pts = enumerate_points(&rep, &[2, 1], idyll, DEFAULT_BUDGET).unwrap();
            let id = SubmonomialMatrix::identity(g.clone(), idyll);
            let mut oracle = 0;
            for n in matroids(idyll, &g, 2, DEFAULT_BUDGET).unwrap() {
                for m in matroids(idyll, &g, 1, DEFAULT_BUDGET).unwrap() {
                    if is_morphism_pluecker(&id, &n, &m).unwrap() {
                        oracle += 1;
                    }
                }
            }
            assert_eq!(pts.len(), oracle);
        }
    }

    #[test]
    fn d4_duals_biject_with_dual_points() {
        let pts = d4_points();
        let rep = d4();
        let dual_pts = enumerate_points(&rep.dual(), &[1, 1, 1, 1], Idyll::Krasner, DEFAULT_BUDGET).unwrap();
        let mut mapped: Vec<QuiverMatroid> = pts.iter().map(dual_qm).collect();
        mapped.sort();
        assert_eq!(mapped, dual_pts);
        for d in &mapped {
            assert_eq!(d.rank_vector(), vec![1, 1, 1, 1]);
        }
    }

    #[test]
    fn d4_minors_by_subrepresentations() {
        let rep = d4();
        let subs = rep.subrepresentations(&[1, 1, 1, 1]).unwrap();
        for p in d4_points() {
            let zero = vec![Subset::EMPTY; 4];
            assert_eq!(p.contract(&zero).unwrap(), p);
            let full: Vec<Subset> = rep.sets().iter().map(GroundSet::full).collect();
            assert_eq!(p.restrict(&full).unwrap(), p);
            for o in &subs {
                p.restrict(o).unwrap();
                p.contract(o).unwrap();
            }
            let not_sub = vec![Subset::singleton(0), Subset::EMPTY, Subset::EMPTY, Subset::EMPTY];
            assert!(matches!(p.restrict(&not_sub), Err(Error::NotSubrepresentation(_))));
        }
    }

    #[test]
    fn relabelling_and_reordering_keep_counts() {
        let q = Quiver::new(&["v3", "v2", "v1", "v0"], &[("a1", "v0", "v1"), ("a2", "v0", "v2"), ("a3", "v0", "v3")]).unwrap();
        let rep = F1Rep::from_pairs(
            q,
            &[&["y", "z"], &["c", "h"], &["b", "e"], &["f", "a", "d"]],
            &[&[("f", "b"), ("a", "e")], &[("f", "c"), ("d", "h")], &[("a", "y"), ("d", "z")]],
        )
        .unwrap();
        assert_eq!(enumerate_points(&rep, &[1, 1, 1, 2], Idyll::Krasner, DEFAULT_BUDGET).unwrap().len(), 13);
    }

    #[test]
    fn adjunction_hom_set_counts() {
        for nv in 0..=3 {
            let v = GroundSet::new((0..nv).map(|i| format!("v{i}"))).unwrap();
            let free = full_rank_matroid_functor(&v);
            assert_eq!(free.rank(), nv);
            for nw in 0..=3 {
                let w = GroundSet::numbered(nw);
                let maps = all_submonomial(&v, &w, Idyll::Krasner).unwrap();
                for target in crate::catalogue::all_matroids(Idyll::Krasner, &w, DEFAULT_BUDGET).unwrap() {
                    let homs = maps.iter().filter(|phi| is_morphism_pluecker(phi, &free, &target).unwrap()).count();
                    assert_eq!(homs, maps.len());
                }
            }
        }
    }

    #[test]
    fn full_rank_functor_values() {
        assert_eq!(full_rank_matroid_functor(&GroundSet::numbered(2)), Matroid::uniform(2, 2));
        let e = full_rank_matroid_functor(&GroundSet::empty());
        assert_eq!((e.rank(), e.len()), (0, 0));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(d4_points);
        assert_eq!(single, d4_points());
    }
}
