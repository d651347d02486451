//! Quivers, F1-representations, coefficient quivers and subrepresentations.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f1::F1LinearMap;
use crate::ground::GroundSet;
use crate::subset::{power_set, sub_combinations, Subset};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver; loops and multiple arrows are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds from vertex labels and `(name, source, target)` triples of labels.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate vertex {v:?}")));
            }
        }
        let find = |l: &str| {
            vertices.iter().position(|v| v == l).ok_or_else(|| Error::InvalidInput(format!("unknown vertex {l:?}")))
        };
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if out.iter().any(|a: &Arrow| a.name == name) {
                return Err(Error::InvalidInput(format!("duplicate arrow {name:?}")));
            }
            out.push(Arrow { name, source: find(s.as_ref())?, target: find(t.as_ref())? });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    pub fn single_vertex(label: &str) -> Self {
        Quiver { vertices: vec![label.to_string()], arrows: vec![] }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| Error::InvalidInput(format!("unknown vertex {label:?}")))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows.iter().position(|a| a.name == name).ok_or_else(|| Error::InvalidInput(format!("unknown arrow {name:?}")))
    }

    /// The opposite quiver.
    pub fn dual(&self) -> Quiver {
        let arrows =
            self.arrows.iter().map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source }).collect();
        Quiver { vertices: self.vertices.clone(), arrows }
    }
}

pub type DimVector = Vec<usize>;

/// Per-vertex subsets `Ω_v ⊆ E_v` (nonzero parts).
pub type SubRep = Vec<Subset>;

/// An F1-representation: a pointed set per vertex and an F1-linear map per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F1Rep {
    quiver: Quiver,
    sets: Vec<GroundSet>,
    maps: Vec<F1LinearMap>,
}

impl F1Rep {
    pub fn new(quiver: Quiver, sets: Vec<GroundSet>, maps: Vec<F1LinearMap>) -> Result<Self> {
        if sets.len() != quiver.vertices.len() || maps.len() != quiver.arrows.len() {
            return Err(Error::ShapeMismatch("representation does not match the quiver".into()));
        }
        for (a, f) in quiver.arrows.iter().zip(&maps) {
            if f.source() != &sets[a.source] || f.target() != &sets[a.target] {
                return Err(Error::ShapeMismatch(format!("map of arrow {} does not match its vertex sets", a.name)));
            }
        }
        Ok(F1Rep { quiver, sets, maps })
    }

    /// Builds from per-vertex labels and per-arrow `(source label, target label)` pairs;
    /// unlisted elements map to the base point.
    pub fn from_pairs(quiver: Quiver, sets: &[&[&str]], maps: &[&[(&str, &str)]]) -> Result<Self> {
        let sets: Vec<GroundSet> = sets.iter().map(|s| GroundSet::new(s.iter().copied())).collect::<Result<_>>()?;
        if maps.len() != quiver.arrows.len() || sets.len() != quiver.vertices.len() {
            return Err(Error::ShapeMismatch("representation does not match the quiver".into()));
        }
        let maps = quiver
            .arrows
            .iter()
            .zip(maps)
            .map(|(a, pairs)| F1LinearMap::from_pairs(sets[a.source].clone(), sets[a.target].clone(), pairs))
            .collect::<Result<Vec<_>>>()?;
        F1Rep::new(quiver, sets, maps)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn sets(&self) -> &[GroundSet] {
        &self.sets
    }

    pub fn set(&self, v: usize) -> &GroundSet {
        &self.sets[v]
    }

    pub fn maps(&self) -> &[F1LinearMap] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &F1LinearMap {
        &self.maps[a]
    }

    pub fn dims(&self) -> DimVector {
        self.sets.iter().map(GroundSet::len).collect()
    }

    /// `r* = (n_v - r_v)`.
    pub fn codim(&self, r: &[usize]) -> Result<DimVector> {
        self.check_dims(r)?;
        Ok(self.sets.iter().zip(r).map(|(s, &rv)| s.len() - rv).collect())
    }

    fn check_dims(&self, d: &[usize]) -> Result<()> {
        if d.len() != self.sets.len() {
            return Err(Error::ShapeMismatch(format!("dimension vector has {} entries for {} vertices", d.len(), self.sets.len())));
        }
        if let Some(v) = (0..d.len()).find(|&v| d[v] > self.sets[v].len()) {
            return Err(Error::InvalidInput(format!("entry {} exceeds #E at vertex {}", d[v], self.quiver.vertices[v])));
        }
        Ok(())
    }

    /// The dual representation over the opposite quiver, with adjoint maps.
    pub fn dual(&self) -> F1Rep {
        F1Rep { quiver: self.quiver.dual(), sets: self.sets.clone(), maps: self.maps.iter().map(F1LinearMap::adjoint).collect() }
    }

    pub fn is_subrepresentation(&self, omega: &[Subset]) -> bool {
        omega.len() == self.sets.len()
            && omega.iter().zip(&self.sets).all(|(o, s)| o.is_subset(s.full()))
            && self.quiver.arrows.iter().zip(&self.maps).all(|(a, f)| f.image(omega[a.source]).is_subset(omega[a.target]))
    }

    /// Subrepresentations of dimension `d`, in lexicographic order of per-vertex subsets.
    pub fn subrepresentations(&self, d: &[usize]) -> Result<Vec<SubRep>> {
        self.check_dims(d)?;
        let nv = self.sets.len();
        if nv == 0 {
            return Ok(vec![vec![]]);
        }
        let firsts: Vec<Subset> = sub_combinations(self.sets[0].full(), d[0]).collect();
        let out: Vec<Vec<SubRep>> = firsts
            .par_iter()
            .map(|&first| {
                let mut found = vec![];
                let mut cur = vec![first];
                if self.consistent(&cur) {
                    self.extend_subreps(d, &mut cur, &mut found);
                }
                found
            })
            .collect();
        Ok(out.into_iter().flatten().collect())
    }

    /// Arrow closure among the vertices assigned so far.
    fn consistent(&self, cur: &[Subset]) -> bool {
        let k = cur.len() - 1;
        self.quiver.arrows.iter().zip(&self.maps).all(|(a, f)| {
            if (a.source == k && a.target <= k) || (a.target == k && a.source <= k) {
                f.image(cur[a.source]).is_subset(cur[a.target])
            } else {
                true
            }
        })
    }

    fn extend_subreps(&self, d: &[usize], cur: &mut Vec<Subset>, out: &mut Vec<SubRep>) {
        let v = cur.len();
        if v == self.sets.len() {
            out.push(cur.clone());
            return;
        }
        for s in sub_combinations(self.sets[v].full(), d[v]) {
            cur.push(s);
            if self.consistent(cur) {
                self.extend_subreps(d, cur, out);
            }
            cur.pop();
        }
    }

    /// Every subrepresentation, by direct closure filtering of all tuples of subsets.
    pub fn all_subrepresentations(&self) -> Vec<SubRep> {
        let mut out: Vec<SubRep> = vec![vec![]];
        for s in &self.sets {
            out = out.into_iter().flat_map(|t| power_set(s.full()).map(move |x| [t.clone(), vec![x]].concat())).collect();
        }
        out.retain(|o| self.is_subrepresentation(o));
        out
    }

    pub fn coefficient_quiver(&self) -> CoefficientQuiver {
        let mut nodes = vec![];
        let mut offsets = vec![];
        for (v, s) in self.sets.iter().enumerate() {
            offsets.push(nodes.len());
            nodes.extend((0..s.len()).map(|e| (v, e)));
        }
        let mut edges = vec![];
        for (ai, (a, f)) in self.quiver.arrows.iter().zip(&self.maps).enumerate() {
            for j in 0..f.as_slice().len() {
                if let Some(i) = f.apply(j) {
                    edges.push(CoeffArrow { arrow: ai, from: offsets[a.source] + j, to: offsets[a.target] + i });
                }
            }
        }
        CoefficientQuiver { nodes, offsets, edges }
    }

    pub fn node_label(&self, v: usize, e: usize) -> String {
        format!("{}:{}", self.quiver.vertices[v], self.sets[v].label(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffArrow {
    pub arrow: usize,
    pub from: usize,
    pub to: usize,
}

/// Vertices `⊔ E_v` and arrows `(α, Λ_α(j), j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientQuiver {
    pub nodes: Vec<(usize, usize)>,
    pub offsets: Vec<usize>,
    pub edges: Vec<CoeffArrow>,
}

impl CoefficientQuiver {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, v: usize, e: usize) -> usize {
        self.offsets[v] + e
    }

    /// Connected components of the underlying graph, as node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            parent[a] = b;
        }
        let mut comps: Vec<Vec<usize>> = vec![];
        let mut index = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(vec![]);
            }
            comps[index[r]].push(x);
        }
        comps
    }

    /// The underlying graph has no cycles (loops and parallel edges count as cycles).
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.nodes.len()
    }

    /// The underlying graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.nodes.len() == self.edges.len() + 1 && self.components().len() == 1
    }

    /// A single cycle, with `#E_v ≤ 1` at every vertex of the quiver.
    pub fn is_primitive_cycle(&self, rep: &F1Rep) -> bool {
        if rep.dims().iter().any(|&n| n > 1) || self.nodes.is_empty() || self.components().len() != 1 {
            return false;
        }
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg.iter().all(|&d| d == 2)
    }

    /// The coefficient quiver with every arrow reversed.
    pub fn reversed(&self) -> CoefficientQuiver {
        let edges = self.edges.iter().map(|e| CoeffArrow { arrow: e.arrow, from: e.to, to: e.from }).collect();
        CoefficientQuiver { nodes: self.nodes.clone(), offsets: self.offsets.clone(), edges }
    }
}
