//! JSON schemas for matroids, morphisms, representations, gradings and reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classical::ClassicalMatroid;
use crate::error::{Error, Result};
use crate::f1::{PointedMap, BASE_POINT};
use crate::grading::Grading;
use crate::ground::GroundSet;
use crate::idyll::{Elem, Idyll};
use crate::matroid::{Matroid, PlueckerVector, VectorF};
use crate::morphism::SubmonomialMatrix;
use crate::quiver::{F1Rep, Quiver};
use crate::quiver_matroid::QuiverMatroid;
use crate::subset::Subset;
use crate::tits::{Certificate, EulerReport};

fn key_of(ground: &GroundSet, s: Subset) -> String {
    ground.labels_of(s).join(",")
}

fn subset_of_key(ground: &GroundSet, key: &str) -> Result<Subset> {
    let labels: Vec<&str> = if key.is_empty() { vec![] } else { key.split(',').map(str::trim).collect() };
    let s = ground.subset_of(&labels)?;
    if s.len() != labels.len() {
        return Err(Error::InvalidInput(format!("repeated label in {key:?}")));
    }
    Ok(s)
}

/// `{"idyll", "ground", "rank", "values": {"1,2": "1"}}`; keys list labels in ground order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub idyll: String,
    pub ground: Vec<String>,
    pub rank: usize,
    pub values: BTreeMap<String, String>,
}

impl From<&Matroid> for MatroidJson {
    fn from(m: &Matroid) -> Self {
        let idyll = m.idyll();
        MatroidJson {
            idyll: idyll.to_string(),
            ground: m.ground().labels().to_vec(),
            rank: m.rank(),
            values: m.values().iter().map(|(&s, v)| (key_of(m.ground(), s), idyll.format_elem(v))).collect(),
        }
    }
}

impl MatroidJson {
    /// Parses without checking the Plücker relations.
    pub fn to_pluecker(&self) -> Result<PlueckerVector> {
        let idyll: Idyll = self.idyll.parse()?;
        let ground = GroundSet::new(self.ground.iter())?;
        let values = self
            .values
            .iter()
            .map(|(k, v)| {
                let s = subset_of_key(&ground, k)?;
                if s.len() != self.rank {
                    return Err(Error::InvalidInput(format!("key {k:?} does not have {} elements", self.rank)));
                }
                Ok((s, idyll.parse_elem(v)?))
            })
            .collect::<Result<Vec<(Subset, Elem)>>>()?;
        PlueckerVector::new(ground, self.rank, idyll, values)
    }

    pub fn to_matroid(&self) -> Result<Matroid> {
        crate::matroid::gp_validate(self.to_pluecker()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

/// `{"source", "target", "idyll", "entries": [{"from", "to", "coeff"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub idyll: String,
    pub entries: Vec<EntryJson>,
}

impl From<&SubmonomialMatrix> for MorphismJson {
    fn from(phi: &SubmonomialMatrix) -> Self {
        let idyll = phi.idyll();
        let entries = (0..phi.source().len())
            .filter_map(|s| {
                phi.entry(s).map(|(t, c)| EntryJson {
                    from: phi.source().label(s).to_string(),
                    to: phi.target().label(t).to_string(),
                    coeff: idyll.format_elem(c),
                })
            })
            .collect();
        MorphismJson {
            source: phi.source().labels().to_vec(),
            target: phi.target().labels().to_vec(),
            idyll: idyll.to_string(),
            entries,
        }
    }
}

impl MorphismJson {
    pub fn to_matrix(&self) -> Result<SubmonomialMatrix> {
        let idyll: Idyll = self.idyll.parse()?;
        let source = GroundSet::new(self.source.iter())?;
        let target = GroundSet::new(self.target.iter())?;
        let triples: Vec<(&str, &str, &str)> =
            self.entries.iter().map(|e| (e.from.as_str(), e.to.as_str(), e.coeff.as_str())).collect();
        SubmonomialMatrix::from_triples(source, target, idyll, &triples)
    }
}

/// `{"ground", "bases": [["1", "2"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalJson {
    pub ground: Vec<String>,
    pub bases: Vec<Vec<String>>,
}

impl From<&ClassicalMatroid> for ClassicalJson {
    fn from(m: &ClassicalMatroid) -> Self {
        ClassicalJson {
            ground: m.ground().labels().to_vec(),
            bases: m.bases().iter().map(|&b| m.ground().labels_of(b)).collect(),
        }
    }
}

impl ClassicalJson {
    pub fn to_classical(&self) -> Result<ClassicalMatroid> {
        let ground = GroundSet::new(self.ground.iter())?;
        let bases = self.bases.iter().map(|b| ground.subset_of(b)).collect::<Result<Vec<_>>>()?;
        ClassicalMatroid::new(ground, bases)
    }
}

/// `{"map": {"1": "2", "3": "0"}}`; `"0"` and omitted labels denote the base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedMapJson {
    pub map: BTreeMap<String, String>,
}

impl From<&PointedMap> for PointedMapJson {
    fn from(f: &PointedMap) -> Self {
        let map = (0..f.source().len())
            .map(|s| {
                let t = f.apply(s).map_or(BASE_POINT.to_string(), |t| f.target().label(t).to_string());
                (f.source().label(s).to_string(), t)
            })
            .collect();
        PointedMapJson { map }
    }
}

impl PointedMapJson {
    pub fn to_map(&self, source: &GroundSet, target: &GroundSet) -> Result<PointedMap> {
        let pairs: Vec<(&str, &str)> = self.map.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect();
        PointedMap::from_pairs(source.clone(), target.clone(), &pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// `{"vertices", "arrows": [{"name", "from", "to"}], "sets": {"v0": [...]}, "maps": {"a1": {"1": "2"}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub sets: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl From<&F1Rep> for RepJson {
    fn from(rep: &F1Rep) -> Self {
        let q = rep.quiver();
        let arrows = q
            .arrows()
            .iter()
            .map(|a| ArrowJson { name: a.name.clone(), from: q.vertices()[a.source].clone(), to: q.vertices()[a.target].clone() })
            .collect();
        let sets = q.vertices().iter().zip(rep.sets()).map(|(v, s)| (v.clone(), s.labels().to_vec())).collect();
        let maps = q.arrows().iter().zip(rep.maps()).map(|(a, f)| (a.name.clone(), PointedMapJson::from(f.pointed()).map)).collect();
        RepJson { vertices: q.vertices().to_vec(), arrows, sets, maps }
    }
}

impl RepJson {
    pub fn to_rep(&self) -> Result<F1Rep> {
        let arrows: Vec<(&str, &str, &str)> =
            self.arrows.iter().map(|a| (a.name.as_str(), a.from.as_str(), a.to.as_str())).collect();
        let quiver = Quiver::new(&self.vertices.iter().map(String::as_str).collect::<Vec<_>>(), &arrows)?;
        if let Some(k) = self.sets.keys().find(|k| !self.vertices.contains(k)) {
            return Err(Error::InvalidInput(format!("set given for unknown vertex {k:?}")));
        }
        if let Some(k) = self.maps.keys().find(|k| !self.arrows.iter().any(|a| &a.name == *k)) {
            return Err(Error::InvalidInput(format!("map given for unknown arrow {k:?}")));
        }
        let sets: Vec<GroundSet> = self
            .vertices
            .iter()
            .map(|v| GroundSet::new(self.sets.get(v).map(Vec::as_slice).unwrap_or_default().iter()))
            .collect::<Result<_>>()?;
        let empty = BTreeMap::new();
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                let pm = PointedMapJson { map: self.maps.get(&a.name).unwrap_or(&empty).clone() };
                crate::f1::F1LinearMap::new(pm.to_map(&sets[a.source], &sets[a.target])?)
            })
            .collect::<Result<Vec<_>>>()?;
        F1Rep::new(quiver, sets, maps)
    }
}

/// `{"values": {"1": 1, ...}}`, keyed as in [`crate::grading::node_keys`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingJson {
    pub values: BTreeMap<String, i64>,
}

impl GradingJson {
    pub fn from_grading(g: &Grading, rep: &F1Rep) -> Self {
        GradingJson { values: g.keyed(rep) }
    }

    pub fn to_grading(&self, rep: &F1Rep) -> Result<Grading> {
        Grading::from_keyed(rep, &self.values)
    }
}

/// A single grading object or a list of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GradingsJson {
    One(GradingJson),
    Many(Vec<GradingJson>),
}

impl GradingsJson {
    pub fn to_sequence(&self, rep: &F1Rep) -> Result<Vec<Grading>> {
        match self {
            GradingsJson::One(g) => Ok(vec![g.to_grading(rep)?]),
            GradingsJson::Many(gs) => gs.iter().map(|g| g.to_grading(rep)).collect(),
        }
    }
}

/// Per-vertex value maps of one point: `{"v0": {"1,4": "1", ...}, ...}`.
pub type PointJson = BTreeMap<String, BTreeMap<String, String>>;

pub fn point_json(p: &QuiverMatroid) -> PointJson {
    p.quiver().vertices().iter().zip(p.matroids()).map(|(v, m)| (v.clone(), MatroidJson::from(m).values)).collect()
}

/// Rebuilds a point over `rep` from per-vertex value maps.
pub fn point_from_json(rep: &F1Rep, r: &[usize], idyll: Idyll, pj: &PointJson) -> Result<QuiverMatroid> {
    let matroids = rep
        .quiver()
        .vertices()
        .iter()
        .zip(rep.sets())
        .zip(r)
        .map(|((v, s), &rv)| {
            let values = pj.get(v).cloned().ok_or_else(|| Error::InvalidInput(format!("point misses vertex {v:?}")))?;
            MatroidJson { idyll: idyll.to_string(), ground: s.labels().to_vec(), rank: rv, values }.to_matroid()
        })
        .collect::<Result<Vec<_>>>()?;
    QuiverMatroid::from_rep(rep, matroids)
}

/// `{"tits_count", "subrep_count", "coordinate_count", "certificate", "euler"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReportJson {
    pub tits_count: usize,
    pub subrep_count: usize,
    pub coordinate_count: usize,
    pub certificate: String,
    pub euler: Option<usize>,
}

impl From<&EulerReport> for EulerReportJson {
    fn from(r: &EulerReport) -> Self {
        EulerReportJson {
            tits_count: r.tits_count,
            subrep_count: r.subrep_count,
            coordinate_count: r.coordinate_count,
            certificate: r.certificate.to_string(),
            euler: r.euler,
        }
    }
}

impl EulerReportJson {
    pub fn to_report(&self) -> Result<EulerReport> {
        Ok(EulerReport {
            tits_count: self.tits_count,
            subrep_count: self.subrep_count,
            coordinate_count: self.coordinate_count,
            certificate: self.certificate.parse::<Certificate>()?,
            euler: self.euler,
        })
    }
}

/// Vectors as lists of element literals.
pub fn vectors_json(vs: &[VectorF]) -> Vec<Vec<String>> {
    vs.iter().map(VectorF::literals).collect()
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("line {}, column {}: {e}", e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::all_matroids;
    use crate::quiver::tests::d4;
    use crate::quiver_matroid::tests::d4_points;
    use crate::DEFAULT_BUDGET;

    fn round_trip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(x: &T) {
        let text = serde_json::to_string_pretty(x).unwrap();
        assert_eq!(&parse::<T>(&text).unwrap(), x);
    }

    #[test]
    fn matroids_round_trip() {
        for idyll in [Idyll::Krasner, Idyll::Sign, Idyll::finite_field(3).unwrap(), Idyll::RegularPartialField] {
            for m in all_matroids(idyll, &GroundSet::numbered(3), DEFAULT_BUDGET).unwrap() {
                let j = MatroidJson::from(&m);
                round_trip(&j);
                assert_eq!(j.to_matroid().unwrap(), m);
            }
        }
        let t = PlueckerVector::from_literals(GroundSet::numbered(2), 1, Idyll::Tropical, &[("1", "1/2"), ("2", "3")]).unwrap();
        let m = crate::matroid::gp_validate(t).unwrap();
        assert_eq!(MatroidJson::from(&m).to_matroid().unwrap(), m);
    }

    #[test]
    fn matroid_schema() {
        let text = r#"{"idyll": "K", "ground": ["1", "2", "3", "4"], "rank": 2,
            "values": {"1,2": "1", "1,3": "1", "1,4": "1", "2,3": "1", "2,4": "1", "3,4": "1"}}"#;
        assert_eq!(parse::<MatroidJson>(text).unwrap().to_matroid().unwrap(), Matroid::uniform(2, 4));
        let bad = r#"{"idyll": "K", "ground": ["1", "2"], "rank": 1, "values": {"1,2": "1"}}"#;
        assert!(parse::<MatroidJson>(bad).unwrap().to_matroid().is_err());
        assert!(parse::<MatroidJson>("{").is_err());
    }

    #[test]
    fn morphisms_round_trip() {
        let g = GroundSet::numbered(2);
        let phi = SubmonomialMatrix::from_dense(g.clone(), g, Idyll::Sign, &[&["0", "1"], &["-1", "0"]]).unwrap();
        let j = MorphismJson::from(&phi);
        round_trip(&j);
        assert_eq!(j.to_matrix().unwrap(), phi);
    }

    #[test]
    fn classical_and_maps_round_trip() {
        let m = ClassicalMatroid::from_matroid(&Matroid::uniform(2, 3));
        let j = ClassicalJson::from(&m);
        round_trip(&j);
        assert_eq!(j.to_classical().unwrap(), m);
        let g = GroundSet::numbered(3);
        let f = PointedMap::from_pairs(g.clone(), g.clone(), &[("1", "2"), ("2", "2")]).unwrap();
        let j = PointedMapJson::from(&f);
        round_trip(&j);
        assert_eq!(j.map["3"], "0");
        assert_eq!(j.to_map(&g, &g).unwrap(), f);
    }

    #[test]
    fn reps_and_points_round_trip() {
        let rep = d4();
        let j = RepJson::from(&rep);
        round_trip(&j);
        assert_eq!(j.to_rep().unwrap(), rep);
        for p in d4_points() {
            let pj = point_json(&p);
            round_trip(&pj);
            assert_eq!(point_from_json(&rep, &[2, 1, 1, 1], Idyll::Krasner, &pj).unwrap(), p);
        }
    }

    #[test]
    fn gradings_and_reports_round_trip() {
        let rep = d4();
        let g = crate::grading::find_nice_sequence(&rep, 9).unwrap().remove(0);
        let j = GradingJson::from_grading(&g, &rep);
        round_trip(&j);
        assert_eq!(j.to_grading(&rep).unwrap(), g);
        let many: GradingsJson = parse(&serde_json::to_string(&vec![j.clone(), j.clone()]).unwrap()).unwrap();
        assert_eq!(many.to_sequence(&rep).unwrap().len(), 2);
        let one: GradingsJson = parse(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(one.to_sequence(&rep).unwrap(), vec![g]);
        let report = EulerReport { tits_count: 6, subrep_count: 6, coordinate_count: 6, certificate: Certificate::Tree, euler: Some(6) };
        let rj = EulerReportJson::from(&report);
        round_trip(&rj);
        assert_eq!(rj.to_report().unwrap(), report);
    }
}
