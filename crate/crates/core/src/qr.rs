//! The quiver Plücker relations qr1-qr4 on raw per-vertex coordinates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::idyll::{Elem, Idyll};
use crate::matroid::gp2_witness;
use crate::quiver::F1Rep;
use crate::subset::{combinations, sort_sign, Subset};

/// Coordinates `T_x` of one vertex, keyed by sorted index sets; missing keys are zero.
pub type Coordinates = BTreeMap<Subset, Elem>;

/// `T(tuple)` by alternation; zero on repeated indices.
fn eval(idyll: Idyll, coords: &Coordinates, tuple: &[usize]) -> Elem {
    match sort_sign(tuple) {
        Some((s, odd)) => coords.get(&s).map_or_else(|| idyll.zero(), |v| idyll.signed(v.clone(), odd)),
        None => idyll.zero(),
    }
}

fn check_shape(rep: &F1Rep, r: &[usize]) -> Result<()> {
    if r.len() != rep.sets().len() {
        return Err(Error::ShapeMismatch(format!("rank vector has {} entries for {} vertices", r.len(), rep.sets().len())));
    }
    if (0..r.len()).any(|v| r[v] > rep.set(v).len()) {
        return Err(Error::InvalidInput("rank exceeds the vertex set".into()));
    }
    Ok(())
}

/// Whether per-vertex coordinates satisfy qr1 (nonzero), qr2 (supported on `r_v`-sets),
/// qr3 (Plücker relations per vertex) and qr4 (one relation family per arrow).
pub fn check_qr_relations(rep: &F1Rep, r: &[usize], idyll: Idyll, coords: &[Coordinates]) -> Result<bool> {
    check_shape(rep, r)?;
    if coords.len() != r.len() {
        return Err(Error::ShapeMismatch("one coordinate map per vertex is required".into()));
    }
    for (v, c) in coords.iter().enumerate() {
        let n = rep.set(v).len();
        if c.iter().all(|(_, x)| x.is_zero()) {
            return Ok(false);
        }
        if c.iter().any(|(s, x)| !x.is_zero() && (s.len() != r[v] || !s.is_subset(Subset::full(n)) || !idyll.contains(x))) {
            return Ok(false);
        }
        let nonzero: Coordinates = c.iter().filter(|(_, x)| !x.is_zero()).map(|(s, x)| (*s, x.clone())).collect();
        if gp2_witness(idyll, n, r[v], &nonzero).is_some() {
            return Ok(false);
        }
    }
    Ok(qr4_holds(rep, r, idyll, coords))
}

/// `Σ_k (-1)^k T_{y - y_k} · T_{(Λ_α(y_k), x)}` is null for all `y`, `x`, with `T_{(0, x)} = 0`.
fn qr4_holds(rep: &F1Rep, r: &[usize], idyll: Idyll, coords: &[Coordinates]) -> bool {
    for (ai, a) in rep.quiver().arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ns, nt) = (rep.set(s).len(), rep.set(t).len());
        if r[t] == 0 || r[s] + 1 > ns {
            continue;
        }
        let f = rep.map(ai);
        for y in combinations(ns, r[s] + 1) {
            let ys = y.to_vec();
            for x in combinations(nt, r[t] - 1) {
                let xs = x.to_vec();
                let mut acc = idyll.null_acc();
                for (k, &yk) in ys.iter().enumerate() {
                    let Some(img) = f.apply(yk) else { continue };
                    let left = coords[s].get(&y.without(yk)).cloned().unwrap_or_else(|| idyll.zero());
                    let mut tuple = vec![img];
                    tuple.extend(&xs);
                    let right = eval(idyll, &coords[t], &tuple);
                    let term = idyll.signed(idyll.mul(&left, &right), k % 2 == 1);
                    acc.push(&term);
                }
                if !acc.is_null() {
                    return false;
                }
            }
        }
    }
    true
}

/// A qr4 relation as a signed sum of monomials `T_target · T_source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QrRelation {
    /// `(negative, target coordinate, source coordinate)`.
    pub terms: Vec<(bool, Subset, Subset)>,
}

impl QrRelation {
    /// The same relation with the first term made positive.
    pub fn normalized(&self) -> QrRelation {
        let flip = self.terms.first().is_some_and(|t| t.0);
        QrRelation { terms: self.terms.iter().map(|&(neg, t, s)| (neg ^ flip, t, s)).collect() }
    }

    /// Renders as `T2T46 - T5T16`, concatenating element labels.
    pub fn format(&self, rep: &F1Rep, arrow: usize) -> String {
        let a = &rep.quiver().arrows()[arrow];
        let name = |v: usize, s: Subset| rep.set(v).labels_of(s).concat();
        let mut out = String::new();
        for (i, &(neg, t, s)) in self.terms.iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let _ = write!(out, "T{}T{}", name(a.target, t), name(a.source, s));
        }
        out
    }
}

/// The symbolic qr4 relations of one arrow, dropping empty and repeated ones (up to sign).
pub fn qr4_relations(rep: &F1Rep, r: &[usize], arrow: usize) -> Result<Vec<QrRelation>> {
    check_shape(rep, r)?;
    let a = rep.quiver().arrows().get(arrow).ok_or_else(|| Error::InvalidInput(format!("no arrow {arrow}")))?;
    let (s, t) = (a.source, a.target);
    let (ns, nt) = (rep.set(s).len(), rep.set(t).len());
    let mut out: Vec<QrRelation> = vec![];
    if r[t] == 0 || r[s] + 1 > ns {
        return Ok(out);
    }
    let f = rep.map(arrow);
    for y in combinations(ns, r[s] + 1) {
        for x in combinations(nt, r[t] - 1) {
            let mut terms = vec![];
            for (k, yk) in y.iter().enumerate() {
                let Some(img) = f.apply(yk) else { continue };
                let mut tuple = vec![img];
                tuple.extend(x.iter());
                let Some((tset, odd)) = sort_sign(&tuple) else { continue };
                terms.push(((k % 2 == 1) ^ odd, tset, y.without(yk)));
            }
            if terms.is_empty() {
                continue;
            }
            let rel = QrRelation { terms }.normalized();
            if !out.contains(&rel) {
                out.push(rel);
            }
        }
    }
    Ok(out)
}

/// All coordinate tuples over a finite idyll passing qr1-qr4, by brute force over
/// every per-vertex coordinate assignment (first nonzero coordinate fixed to 1).
pub fn qr_points(rep: &F1Rep, r: &[usize], idyll: Idyll, budget: u64) -> Result<Vec<Vec<Coordinates>>> {
    check_shape(rep, r)?;
    let units = idyll.units().ok_or_else(|| Error::InfiniteCarrier(idyll.to_string()))?;
    let mut per_vertex: Vec<Vec<Coordinates>> = vec![];
    for (v, &rv) in r.iter().enumerate() {
        let n = rep.set(v).len();
        let keys: Vec<Subset> = combinations(n, rv).collect();
        let base = units.len() as u128 + 1;
        let needed = base.checked_pow(keys.len() as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut found = vec![];
        let mut digits = vec![0usize; keys.len()];
        loop {
            let first = digits.iter().position(|&d| d != 0);
            if first.is_some_and(|i| digits[i] == 1) {
                let c: Coordinates =
                    keys.iter().zip(&digits).filter(|(_, &d)| d != 0).map(|(&k, &d)| (k, units[d - 1].clone())).collect();
                if gp2_witness(idyll, n, rv, &c).is_none() {
                    found.push(c);
                }
            }
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] <= units.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        per_vertex.push(found);
    }
    let needed = per_vertex.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128));
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut tuples: Vec<Vec<Coordinates>> = vec![vec![]];
    for cands in &per_vertex {
        tuples = tuples.into_iter().flat_map(|t| cands.iter().map(move |c| [t.clone(), vec![c.clone()]].concat())).collect();
    }
    tuples.retain(|t| qr4_holds(rep, r, idyll, t));
    tuples.sort();
    Ok(tuples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f1::F1LinearMap;
    use crate::ground::GroundSet;
    use crate::quiver::tests::d4;
    use crate::quiver::Quiver;
    use crate::quiver_matroid::enumerate_points;
    use crate::DEFAULT_BUDGET;

    pub(crate) fn flag_rep() -> F1Rep {
        let g = GroundSet::numbered(3);
        let q = Quiver::new(&["v2", "v1"], &[("a", "v2", "v1")]).unwrap();
        F1Rep::new(q, vec![g.clone(), g.clone()], vec![F1LinearMap::identity(g)]).unwrap()
    }

    pub(crate) fn degenerate_flag() -> F1Rep {
        let q = Quiver::new(&["v1", "v2"], &[("a", "v1", "v2")]).unwrap();
        F1Rep::from_pairs(q, &[&["1", "2"], &["3", "4"]], &[&[("1", "3")]]).unwrap()
    }

    fn formatted(rep: &F1Rep, r: &[usize], arrow: usize) -> Vec<String> {
        qr4_relations(rep, r, arrow).unwrap().iter().map(|q| q.format(rep, arrow)).collect()
    }

    #[test]
    fn flag_relation() {
        assert_eq!(formatted(&flag_rep(), &[2, 1], 0), vec!["T1T23 - T2T13 + T3T12"]);
    }

    #[test]
    fn d4_final_example_relations() {
        let rep = d4();
        let r = [2, 1, 1, 1];
        assert_eq!(formatted(&rep, &r, 0), vec!["T2T46 - T5T16"]);
        assert_eq!(formatted(&rep, &r, 1), vec!["T3T46 + T8T14"]);
        assert_eq!(formatted(&rep, &r, 2), vec!["T7T16 - T9T14"]);
    }

    #[test]
    fn degenerate_flag_relation() {
        assert_eq!(formatted(&degenerate_flag(), &[1, 1], 0), vec!["T3T2"]);
    }

    #[test]
    fn all_zero_candidate_fails() {
        let rep = degenerate_flag();
        assert!(!check_qr_relations(&rep, &[1, 1], Idyll::Krasner, &[Coordinates::new(), Coordinates::new()]).unwrap());
        let one = Idyll::Krasner.one();
        let c = |i: usize| Coordinates::from([(Subset::singleton(i), one.clone())]);
        assert!(check_qr_relations(&rep, &[1, 1], Idyll::Krasner, &[c(0), c(0)]).unwrap());
        // T2·T3 ≠ 0.
        assert!(!check_qr_relations(&rep, &[1, 1], Idyll::Krasner, &[c(1), c(0)]).unwrap());
    }

    fn enumerated(rep: &F1Rep, r: &[usize], idyll: Idyll) -> Vec<Vec<Coordinates>> {
        let mut v: Vec<Vec<Coordinates>> = enumerate_points(rep, r, idyll, DEFAULT_BUDGET)
            .unwrap()
            .iter()
            .map(|p| p.matroids().iter().map(|m| m.values().clone()).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn qr_points_match_enumeration() {
        for (rep, r) in [(d4(), vec![2, 1, 1, 1]), (degenerate_flag(), vec![1, 1]), (flag_rep(), vec![2, 1])] {
            for idyll in [Idyll::Krasner, Idyll::Sign] {
                let qr = qr_points(&rep, &r, idyll, DEFAULT_BUDGET).unwrap();
                assert_eq!(qr, enumerated(&rep, &r, idyll));
                for t in &qr {
                    assert!(check_qr_relations(&rep, &r, idyll, t).unwrap());
                }
            }
        }
        assert_eq!(qr_points(&degenerate_flag(), &[1, 1], Idyll::Krasner, DEFAULT_BUDGET).unwrap().len(), 5);
    }
}
