//! Pointed maps between augmented sets and F1-linear maps.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::subset::Subset;

/// Label denoting the base point in label-based constructors.
pub const BASE_POINT: &str = "0";

/// A base-point preserving map `S ∪ {0} → T ∪ {0}`; `None` stands for the base point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedMap {
    source: GroundSet,
    target: GroundSet,
    map: Vec<Option<usize>>,
}

impl PointedMap {
    pub fn new(source: GroundSet, target: GroundSet, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::ShapeMismatch(format!("map has {} entries for {} source labels", map.len(), source.len())));
        }
        if let Some(t) = map.iter().flatten().find(|&&t| t >= target.len()) {
            return Err(Error::ShapeMismatch(format!("target index {t} out of range")));
        }
        Ok(PointedMap { source, target, map })
    }

    /// Builds from `(source label, target label)` pairs; unlisted sources and the target
    /// [`BASE_POINT`] map to the base point.
    pub fn from_pairs(source: GroundSet, target: GroundSet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![None; source.len()];
        for (s, t) in pairs {
            let si = source.index(s)?;
            map[si] = if *t == BASE_POINT { None } else { Some(target.index(t)?) };
        }
        PointedMap::new(source, target, map)
    }

    pub fn identity(ground: GroundSet) -> Self {
        let map = (0..ground.len()).map(Some).collect();
        PointedMap { source: ground.clone(), target: ground, map }
    }

    pub fn source(&self) -> &GroundSet {
        &self.source
    }

    pub fn target(&self) -> &GroundSet {
        &self.target
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn apply(&self, s: usize) -> Option<usize> {
        self.map[s]
    }

    /// Image of a subset, without the base point.
    pub fn image(&self, a: Subset) -> Subset {
        Subset::from_indices(a.iter().filter_map(|s| self.map[s]))
    }

    /// Elements of the source landing in `b` (the base point is never in `b`).
    pub fn preimage(&self, b: Subset) -> Subset {
        Subset::from_indices((0..self.map.len()).filter(|&s| self.map[s].is_some_and(|t| b.contains(t))))
    }

    /// Elements sent to the base point.
    pub fn kernel(&self) -> Subset {
        Subset::from_indices((0..self.map.len()).filter(|&s| self.map[s].is_none()))
    }

    /// Each nonzero target has at most one preimage.
    pub fn is_f1_linear(&self) -> bool {
        let mut seen = Subset::EMPTY;
        for t in self.map.iter().flatten() {
            if seen.contains(*t) {
                return false;
            }
            seen = seen.with(*t);
        }
        true
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PointedMap) -> Result<PointedMap> {
        if self.target != g.source {
            return Err(Error::ShapeMismatch("composition of maps with mismatched sets".into()));
        }
        let map = self.map.iter().map(|t| t.and_then(|t| g.map[t])).collect();
        Ok(PointedMap { source: self.source.clone(), target: g.target.clone(), map })
    }
}

/// A pointed map whose nonzero fibres have at most one element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F1LinearMap(PointedMap);

impl F1LinearMap {
    pub fn new(map: PointedMap) -> Result<Self> {
        if map.is_f1_linear() {
            Ok(F1LinearMap(map))
        } else {
            Err(Error::NotF1Linear("two elements share a nonzero image".into()))
        }
    }

    pub fn from_pairs(source: GroundSet, target: GroundSet, pairs: &[(&str, &str)]) -> Result<Self> {
        F1LinearMap::new(PointedMap::from_pairs(source, target, pairs)?)
    }

    pub fn identity(ground: GroundSet) -> Self {
        F1LinearMap(PointedMap::identity(ground))
    }

    pub fn zero(source: GroundSet, target: GroundSet) -> Self {
        let map = vec![None; source.len()];
        F1LinearMap(PointedMap { source, target, map })
    }

    pub fn pointed(&self) -> &PointedMap {
        &self.0
    }

    pub fn into_pointed(self) -> PointedMap {
        self.0
    }

    /// The adjoint `t ↦ s` if `self(s) = t`, else the base point.
    pub fn adjoint(&self) -> F1LinearMap {
        let mut map = vec![None; self.0.target.len()];
        for (s, t) in self.0.map.iter().enumerate() {
            if let Some(t) = t {
                map[*t] = Some(s);
            }
        }
        F1LinearMap(PointedMap { source: self.0.target.clone(), target: self.0.source.clone(), map })
    }

    pub fn then(&self, g: &F1LinearMap) -> Result<F1LinearMap> {
        Ok(F1LinearMap(self.0.then(&g.0)?))
    }
}

impl Deref for F1LinearMap {
    type Target = PointedMap;

    fn deref(&self) -> &PointedMap {
        &self.0
    }
}
