//! The fine topology on Krasner points, Tits spaces, initial matroids and Euler characteristics.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grading::{find_nice_sequence, is_nice_grading, is_nice_relative, verify_sequence, Grading};
use crate::idyll::Idyll;
use crate::matroid::Matroid;
use crate::quiver::F1Rep;
use crate::quiver_matroid::{enumerate_points, validate_qm, QuiverMatroid};
use crate::subset::Subset;

/// Points with `x ⪯ y` iff every vertex basis set of `x` lies in that of `y`.
#[derive(Clone, Debug)]
pub struct SpecializationPoset {
    pub points: Vec<QuiverMatroid>,
    leq: Vec<Vec<bool>>,
}

fn bases_within(x: &QuiverMatroid, y: &QuiverMatroid) -> bool {
    x.matroids().iter().zip(y.matroids()).all(|(a, b)| a.values().keys().all(|k| b.values().contains_key(k)))
}

impl SpecializationPoset {
    /// `x` lies in the closure of `y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of the minimal (closed) points.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| y == x || !self.leq[y][x])).collect()
    }

    /// Reflexivity, antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| self.leq[x][x])
            && (0..n).all(|x| (0..n).all(|y| x == y || !(self.leq[x][y] && self.leq[y][x])))
            && (0..n).all(|x| (0..n).all(|y| !self.leq[x][y] || (0..n).all(|z| !self.leq[y][z] || self.leq[x][z])))
    }
}

pub fn specialization_order(points: Vec<QuiverMatroid>) -> SpecializationPoset {
    let leq = points.par_iter().map(|x| points.iter().map(|y| bases_within(x, y)).collect()).collect();
    SpecializationPoset { points, leq }
}

/// The closed points among the Krasner points of the quiver Grassmannian.
pub fn tits_space(rep: &F1Rep, r: &[usize], budget: u64) -> Result<Vec<QuiverMatroid>> {
    let poset = specialization_order(enumerate_points(rep, r, Idyll::Krasner, budget)?);
    let keep = poset.minimal();
    Ok(keep.into_iter().map(|i| poset.points[i].clone()).collect())
}

/// Bases of minimal `∂`-weight.
pub fn initial_matroid(m: &Matroid, weights: &[i64]) -> Result<Matroid> {
    if m.idyll() != Idyll::Krasner {
        return Err(Error::DescriptorMismatch(Idyll::Krasner.to_string(), m.idyll().to_string()));
    }
    if weights.len() != m.len() {
        return Err(Error::ShapeMismatch(format!("{} weights for {} elements", weights.len(), m.len())));
    }
    let weight = |b: Subset| b.iter().map(|i| weights[i]).sum::<i64>();
    let min = m.bases().map(weight).min().expect("a matroid has a basis");
    let bases: Vec<Subset> = m.bases().filter(|&b| weight(b) == min).collect();
    Matroid::from_bases_k(m.ground().clone(), m.rank(), &bases)
}

fn apply_grading(m: &QuiverMatroid, g: &Grading) -> Result<QuiverMatroid> {
    let matroids =
        m.matroids().iter().enumerate().map(|(v, mv)| initial_matroid(mv, g.vertex(v))).collect::<Result<Vec<_>>>()?;
    validate_qm(m.quiver().clone(), matroids, m.arrows().to_vec())
}

/// `min_∂(M)` for a nice grading `∂` of the underlying representation.
pub fn initial_qm(m: &QuiverMatroid, g: &Grading) -> Result<QuiverMatroid> {
    let rep = m.underlying_rep();
    Grading::new(&rep, g.values().to_vec())?;
    if !is_nice_grading(&rep, g) {
        return Err(Error::NotNiceGrading);
    }
    apply_grading(m, g)
}

/// `min_{∂n, ..., ∂0}(M)` for a nice sequence.
pub fn initial_qm_sequence(m: &QuiverMatroid, seq: &[Grading]) -> Result<QuiverMatroid> {
    let rep = m.underlying_rep();
    let mut cur = m.clone();
    for (i, g) in seq.iter().enumerate() {
        Grading::new(&rep, g.values().to_vec()).map_err(|e| Error::InvalidSequence(e.to_string()))?;
        if !is_nice_relative(&rep, g, &seq[..i]) {
            return Err(Error::InvalidSequence(format!("grading {i} is not nice relative to its predecessors")));
        }
        cur = apply_grading(&cur, g)?;
    }
    Ok(cur)
}

/// The coordinate quiver matroid with vertex bases `E_v - Ω_v`.
pub fn coordinate_point(rep: &F1Rep, omega: &[Subset]) -> Result<QuiverMatroid> {
    if !rep.is_subrepresentation(omega) {
        return Err(Error::NotSubrepresentation("tuple is not closed under the arrow maps".into()));
    }
    let matroids = rep
        .sets()
        .iter()
        .zip(omega)
        .map(|(s, o)| {
            let b = o.complement(s.len());
            Matroid::from_bases_k(s.clone(), b.len(), &[b])
        })
        .collect::<Result<Vec<_>>>()?;
    QuiverMatroid::from_rep(rep, matroids)
}

/// The subrepresentation `Ω_v = E_v - B_v` of a coordinate quiver matroid.
pub fn subrep_of_coordinate(m: &QuiverMatroid) -> Result<Vec<Subset>> {
    if !m.is_coordinate() {
        return Err(Error::InvalidInput("quiver matroid is not a coordinate point".into()));
    }
    Ok(m.matroids().iter().map(|mv| mv.bases().next().expect("one basis").complement(mv.len())).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Tree,
    PrimitiveCycle,
    VerifiedSequence,
    None,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Tree => "Tree",
            Certificate::PrimitiveCycle => "PrimitiveCycle",
            Certificate::VerifiedSequence => "VerifiedSequence",
            Certificate::None => "None",
        })
    }
}

impl std::str::FromStr for Certificate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Tree" => Ok(Certificate::Tree),
            "PrimitiveCycle" => Ok(Certificate::PrimitiveCycle),
            "VerifiedSequence" => Ok(Certificate::VerifiedSequence),
            "None" => Ok(Certificate::None),
            _ => Err(Error::InvalidInput(format!("unknown certificate {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub tits_count: usize,
    pub subrep_count: usize,
    pub coordinate_count: usize,
    pub certificate: Certificate,
    /// Present only under a certificate.
    pub euler: Option<usize>,
}

/// Counts the Tits points of `Gr_r(Λ)` and the subrepresentations of dimension `r*`, and
/// reports their common value as the Euler characteristic when a certificate applies.
///
/// Strict trees and primitive cycles certify directly. Forests are certified as trees once
/// a nice distinguishing sequence is constructed and verified. A supplied sequence must pass
/// verification and certifies otherwise; without one a sequence search is attempted.
pub fn euler_via_tits(rep: &F1Rep, r: &[usize], sequence: Option<&[Grading]>, budget: u64) -> Result<EulerReport> {
    if let Some(seq) = sequence {
        verify_sequence(rep, seq)?;
    }
    let points = enumerate_points(rep, r, Idyll::Krasner, budget)?;
    let coordinate_count = points.iter().filter(|p| p.is_coordinate()).count();
    let poset = specialization_order(points);
    let minimal = poset.minimal();
    let tits_count = minimal.len();
    let subrep_count = rep.subrepresentations(&rep.codim(r)?)?.len();
    let gamma = rep.coefficient_quiver();
    let found = || find_nice_sequence(rep, gamma.num_nodes().max(1)).ok();
    let (certificate, seq): (Certificate, Option<Vec<Grading>>) = if gamma.is_tree() {
        (Certificate::Tree, sequence.map(<[Grading]>::to_vec))
    } else if gamma.is_primitive_cycle(rep) {
        (Certificate::PrimitiveCycle, sequence.map(<[Grading]>::to_vec))
    } else if gamma.is_forest() {
        match sequence.map(<[Grading]>::to_vec).or_else(found) {
            Some(s) => (Certificate::Tree, Some(s)),
            None => (Certificate::None, None),
        }
    } else {
        match sequence.map(<[Grading]>::to_vec).or_else(found) {
            Some(s) => (Certificate::VerifiedSequence, Some(s)),
            None => (Certificate::None, None),
        }
    };
    if certificate == Certificate::None {
        return Ok(EulerReport { tits_count, subrep_count, coordinate_count, certificate, euler: None });
    }
    if let Some(seq) = &seq {
        for p in &poset.points {
            if !initial_qm_sequence(p, seq)?.is_coordinate() {
                return Err(Error::ConditionViolated("a distinguishing sequence did not reach a coordinate point".into()));
            }
        }
    }
    if !minimal.iter().all(|&i| poset.points[i].is_coordinate())
        || tits_count != subrep_count
        || tits_count != coordinate_count
    {
        return Err(Error::ConditionViolated(format!(
            "certified counts disagree: tits {tits_count}, subrepresentations {subrep_count}, coordinate {coordinate_count}"
        )));
    }
    Ok(EulerReport { tits_count, subrep_count, coordinate_count, certificate, euler: Some(tits_count) })
}
