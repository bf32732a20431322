//! Textile systems: two homomorphisms `top, bottom : F -> E`.
//!
//! Each edge `f` of `F` is drawn as a unit square. Its left and right sides
//! are the `F`-vertices `r(f)` and `s(f)`; its top and bottom are the
//! `E`-edges `top(f)` and `bottom(f)`, all drawn pointing right to left.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{insplit_graph, DirectedGraph, GraphHom, HomError, InsplitPartition, PartitionError, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextileError {
    #[error("top map: {0}")]
    Top(HomError),
    #[error("bottom map: {0}")]
    Bottom(HomError),
    #[error("edges `{0}` and `{1}` have identical squares")]
    NotInjective(String, String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// The boundary of the square drawn for one edge of `F`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SquareView {
    pub label: String,
    pub left: String,
    pub top: String,
    pub right: String,
    pub bottom: String,
}

impl fmt::Display for SquareView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: left={} top={} right={} bottom={}",
            self.label, self.left, self.top, self.right, self.bottom
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextileSystem {
    tiles: DirectedGraph,
    base: DirectedGraph,
    top: GraphHom,
    bottom: GraphHom,
}

impl TextileSystem {
    /// `tiles` is `F`, `base` is `E`.
    pub fn new(tiles: DirectedGraph, base: DirectedGraph, top: GraphHom, bottom: GraphHom) -> Result<Self, TextileError> {
        top.validate(&tiles, &base).map_err(TextileError::Top)?;
        bottom.validate(&tiles, &base).map_err(TextileError::Bottom)?;
        let t = TextileSystem { tiles, base, top, bottom };
        let mut seen: BTreeMap<(String, String, String, String), String> = BTreeMap::new();
        for sq in t.squares() {
            let key = (sq.left, sq.top, sq.right, sq.bottom);
            if let Some(prev) = seen.insert(key, sq.label.clone()) {
                return Err(TextileError::NotInjective(prev, sq.label));
            }
        }
        Ok(t)
    }

    pub fn tiles(&self) -> &DirectedGraph {
        &self.tiles
    }

    pub fn base(&self) -> &DirectedGraph {
        &self.base
    }

    pub fn top(&self) -> &GraphHom {
        &self.top
    }

    pub fn bottom(&self) -> &GraphHom {
        &self.bottom
    }

    pub fn square(&self, f: &str) -> Option<SquareView> {
        let ends = self.tiles.ends(f)?;
        Some(SquareView {
            label: f.to_string(),
            left: ends.range.clone(),
            top: self.top.edge(f).to_string(),
            right: ends.source.clone(),
            bottom: self.bottom.edge(f).to_string(),
        })
    }

    /// All squares, sorted by label.
    pub fn squares(&self) -> Vec<SquareView> {
        self.tiles.edge_ids().map(|f| self.square(f).unwrap()).collect()
    }

    /// Exhaustive lifting flags over all (F-vertex, E-edge) pairs.
    pub fn lifting_report(&self) -> LiftingReport {
        let mut report = LiftingReport::all_true();
        let squares = self.squares();
        for map in [Map::Top, Map::Bottom] {
            let hom = match map {
                Map::Top => &self.top,
                Map::Bottom => &self.bottom,
            };
            for side in [Side::Range, Side::Source] {
                for v in self.tiles.vertices() {
                    for (e, ends) in self.base.edges() {
                        let end = match side {
                            Side::Range => &ends.range,
                            Side::Source => &ends.source,
                        };
                        if hom.vertex(v) != end {
                            continue;
                        }
                        let lifts: Vec<String> = squares
                            .iter()
                            .filter(|sq| {
                                let at = match side {
                                    Side::Range => &sq.left,
                                    Side::Source => &sq.right,
                                };
                                let img = match map {
                                    Map::Top => &sq.top,
                                    Map::Bottom => &sq.bottom,
                                };
                                at == v && img == e
                            })
                            .map(|sq| sq.label.clone())
                            .collect();
                        if lifts.len() == 1 {
                            continue;
                        }
                        let (exists, unique) = report.flags_mut(map, side);
                        *unique = false;
                        if lifts.is_empty() {
                            *exists = false;
                        }
                        report.failures.push(LiftingFailure {
                            map,
                            side,
                            vertex: v.to_string(),
                            edge: e.to_string(),
                            lifts,
                        });
                    }
                }
            }
        }
        report
    }

    pub fn is_lr(&self) -> bool {
        self.lifting_report().is_lr()
    }

    /// `F` essential and both maps onto.
    pub fn is_essential(&self) -> bool {
        self.tiles.is_essential() && self.top.is_onto(&self.base) && self.bottom.is_onto(&self.base)
    }

    /// The inverted system: vertical and horizontal roles swap.
    ///
    /// New base: vertices `E⁰`, edges `F⁰` with range `bottom` and source `top`.
    /// New tiles: vertices `E¹`, edges `F¹` with range `bottom` and source `top`.
    /// New top map is the source map of `E` and `F`; new bottom map is the range map.
    pub fn inverted(&self) -> TextileSystem {
        let mut base = DirectedGraph::new();
        for v in self.base.vertices() {
            base.add_vertex(v).unwrap();
        }
        for w in self.tiles.vertices() {
            base.add_edge(w, self.top.vertex(w), self.bottom.vertex(w)).unwrap();
        }
        let mut tiles = DirectedGraph::new();
        for e in self.base.edge_ids() {
            tiles.add_vertex(e).unwrap();
        }
        for f in self.tiles.edge_ids() {
            tiles.add_edge(f, self.top.edge(f), self.bottom.edge(f)).unwrap();
        }
        let mut top = GraphHom::default();
        let mut bottom = GraphHom::default();
        for (e, ends) in self.base.edges() {
            top.vertex_map.insert(e.into(), ends.source.clone());
            bottom.vertex_map.insert(e.into(), ends.range.clone());
        }
        for (f, ends) in self.tiles.edges() {
            top.edge_map.insert(f.into(), ends.source.clone());
            bottom.edge_map.insert(f.into(), ends.range.clone());
        }
        TextileSystem::new(tiles, base, top, bottom).expect("inversion preserves validity")
    }

    /// Insplits `F` and keeps `E`; copies map where their parents did.
    pub fn insplit(&self, part: &InsplitPartition) -> Result<TextileInsplit, TextileError> {
        let split = insplit_graph(&self.tiles, part)?;
        let lift = |h: &GraphHom| GraphHom {
            vertex_map: split
                .provenance
                .vertices
                .iter()
                .map(|(c, (v, _))| (c.clone(), h.vertex(v).to_string()))
                .collect(),
            edge_map: split
                .provenance
                .edges
                .iter()
                .map(|(c, (f, _))| (c.clone(), h.edge(f).to_string()))
                .collect(),
        };
        let (top, bottom) = (lift(&self.top), lift(&self.bottom));
        let system = TextileSystem::new(split.graph, self.base.clone(), top, bottom)?;
        Ok(TextileInsplit { system, provenance: split.provenance })
    }

    /// Renames `F`-edges; labels missing from `map` are kept.
    pub fn relabel_tiles(&self, map: &BTreeMap<String, String>) -> Result<TextileSystem, TextileError> {
        let name = |f: &str| map.get(f).cloned().unwrap_or_else(|| f.to_string());
        let mut tiles = DirectedGraph::new();
        for v in self.tiles.vertices() {
            tiles.add_vertex(v).unwrap();
        }
        for (f, ends) in self.tiles.edges() {
            tiles
                .add_edge(name(f), ends.source.clone(), ends.range.clone())
                .map_err(|_| TextileError::NotInjective(f.into(), name(f)))?;
        }
        let rename = |h: &GraphHom| GraphHom {
            vertex_map: h.vertex_map.clone(),
            edge_map: h.edge_map.iter().map(|(f, e)| (name(f), e.clone())).collect(),
        };
        TextileSystem::new(tiles, self.base.clone(), rename(&self.top), rename(&self.bottom))
    }

    /// Keeps only the listed `F`-edges.
    pub fn restrict_tiles(&self, keep: impl Fn(&str) -> bool) -> TextileSystem {
        let mut tiles = DirectedGraph::new();
        for v in self.tiles.vertices() {
            tiles.add_vertex(v).unwrap();
        }
        for (f, ends) in self.tiles.edges().filter(|(f, _)| keep(f)) {
            tiles.add_edge(f, ends.source.clone(), ends.range.clone()).unwrap();
        }
        let cut = |h: &GraphHom| GraphHom {
            vertex_map: h.vertex_map.clone(),
            edge_map: h.edge_map.iter().filter(|(f, _)| keep(f)).map(|(a, b)| (a.clone(), b.clone())).collect(),
        };
        TextileSystem::new(tiles, self.base.clone(), cut(&self.top), cut(&self.bottom))
            .expect("restriction preserves validity")
    }
}

/// Output of a textile insplit, with the parent of every copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextileInsplit {
    pub system: TextileSystem,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Map {
    Top,
    Bottom,
}

/// Which end of the lifted edge is pinned to the given vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Range,
    Source,
}

/// One (vertex, edge) pair where lifting is missing or ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingFailure {
    pub map: Map,
    pub side: Side,
    pub vertex: String,
    pub edge: String,
    pub lifts: Vec<String>,
}

impl fmt::Display for LiftingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map = match self.map {
            Map::Top => "top",
            Map::Bottom => "bottom",
        };
        let side = match self.side {
            Side::Range => "range",
            Side::Source => "source",
        };
        write!(f, "{map} map, {side} lifting at vertex {} of edge {}: ", self.vertex, self.edge)?;
        if self.lifts.is_empty() {
            write!(f, "no lift")
        } else {
            write!(f, "lifts {}", self.lifts.join(", "))
        }
    }
}

/// Path-lifting flags for both maps and both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingReport {
    pub top_range_lifting: bool,
    pub top_unique_range_lifting: bool,
    pub top_source_lifting: bool,
    pub top_unique_source_lifting: bool,
    pub bottom_range_lifting: bool,
    pub bottom_unique_range_lifting: bool,
    pub bottom_source_lifting: bool,
    pub bottom_unique_source_lifting: bool,
    /// Every pair with zero or several lifts, in scan order.
    pub failures: Vec<LiftingFailure>,
}

impl LiftingReport {
    fn all_true() -> Self {
        LiftingReport {
            top_range_lifting: true,
            top_unique_range_lifting: true,
            top_source_lifting: true,
            top_unique_source_lifting: true,
            bottom_range_lifting: true,
            bottom_unique_range_lifting: true,
            bottom_source_lifting: true,
            bottom_unique_source_lifting: true,
            failures: Vec::new(),
        }
    }

    fn flags_mut(&mut self, map: Map, side: Side) -> (&mut bool, &mut bool) {
        match (map, side) {
            (Map::Top, Side::Range) => (&mut self.top_range_lifting, &mut self.top_unique_range_lifting),
            (Map::Top, Side::Source) => (&mut self.top_source_lifting, &mut self.top_unique_source_lifting),
            (Map::Bottom, Side::Range) => (&mut self.bottom_range_lifting, &mut self.bottom_unique_range_lifting),
            (Map::Bottom, Side::Source) => (&mut self.bottom_source_lifting, &mut self.bottom_unique_source_lifting),
        }
    }

    /// Top map has unique range lifting and bottom map unique source lifting.
    pub fn is_lr(&self) -> bool {
        self.top_unique_range_lifting && self.bottom_unique_source_lifting
    }

    /// First failure that breaks the LR condition.
    pub fn lr_witness(&self) -> Option<&LiftingFailure> {
        self.failures
            .iter()
            .find(|f| matches!((f.map, f.side), (Map::Top, Side::Range) | (Map::Bottom, Side::Source)))
    }

    /// The eight flags in a fixed order, with names.
    pub fn flags(&self) -> [(&'static str, bool); 8] {
        [
            ("top_range_lifting", self.top_range_lifting),
            ("top_unique_range_lifting", self.top_unique_range_lifting),
            ("top_source_lifting", self.top_source_lifting),
            ("top_unique_source_lifting", self.top_unique_source_lifting),
            ("bottom_range_lifting", self.bottom_range_lifting),
            ("bottom_unique_range_lifting", self.bottom_unique_range_lifting),
            ("bottom_source_lifting", self.bottom_source_lifting),
            ("bottom_unique_source_lifting", self.bottom_unique_source_lifting),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bouquet_system(dup: bool) -> Result<TextileSystem, TextileError> {
        let e = DirectedGraph::from_parts(["o"], [("a", "o", "o")]).unwrap();
        let mut edges = vec![("x".to_string(), "u".to_string(), "u".to_string())];
        if dup {
            edges.push(("y".into(), "u".into(), "u".into()));
        }
        let f = DirectedGraph::from_parts(["u"], edges).unwrap();
        let h = GraphHom {
            vertex_map: [("u".into(), "o".into())].into(),
            edge_map: f.edge_ids().map(|x| (x.to_string(), "a".to_string())).collect(),
        };
        TextileSystem::new(f, e, h.clone(), h)
    }

    #[test]
    fn duplicate_square_rejected() {
        assert!(bouquet_system(false).is_ok());
        assert_eq!(bouquet_system(true).unwrap_err(), TextileError::NotInjective("x".into(), "y".into()));
    }

    #[test]
    fn full_shift_is_lr_and_self_dual() {
        let t = bouquet_system(false).unwrap();
        assert!(t.is_lr());
        assert!(t.is_essential());
        assert_eq!(t.inverted().inverted(), t);
    }
}
