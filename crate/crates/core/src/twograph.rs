//! Rank-2 graphs presented by a 2-colored skeleton and commuting squares.
//!
//! Horizontal edges play the role of base edges of a textile system and
//! vertical edges the role of its tile vertices. A square with boundary
//! `left·top = bottom·right` lives over a horizontal top and bottom and a
//! vertical left and right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{child_label, DirectedGraph, GraphHom, InsplitPartition, PartitionError, Provenance};
use crate::setpart::set_partitions;
use crate::textile::{LiftingFailure, Map, Side, TextileSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Horizontal,
    Vertical,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Horizontal => "horizontal",
            Color::Vertical => "vertical",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoColoredGraph {
    pub graph: DirectedGraph,
    pub colors: BTreeMap<String, Color>,
}

impl TwoColoredGraph {
    pub fn color(&self, e: &str) -> Option<Color> {
        self.colors.get(e).copied()
    }

    pub fn edges_of(&self, c: Color) -> impl Iterator<Item = &str> + '_ {
        self.graph.edge_ids().filter(move |e| self.colors.get(*e) == Some(&c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CommutingSquare {
    pub label: String,
    pub left: String,
    pub top: String,
    pub right: String,
    pub bottom: String,
}

impl fmt::Display for CommutingSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: left={} top={} right={} bottom={}",
            self.label, self.left, self.top, self.right, self.bottom
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UncoloredEdge(String),
    DuplicateSquare(String),
    UnknownEdge { square: String, edge: String },
    WrongColor { square: String, edge: String, expected: Color },
    Boundary { square: String },
    SameBoundary { first: String, second: String },
    MissingLeftTop { left: String, top: String },
    AmbiguousLeftTop { left: String, top: String, squares: Vec<String> },
    MissingBottomRight { bottom: String, right: String },
    AmbiguousBottomRight { bottom: String, right: String, squares: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UncoloredEdge(e) => write!(f, "edge {e} has no color"),
            Violation::DuplicateSquare(s) => write!(f, "square {s} declared twice"),
            Violation::UnknownEdge { square, edge } => write!(f, "square {square} uses unknown edge {edge}"),
            Violation::WrongColor { square, edge, expected } => {
                write!(f, "square {square}: edge {edge} should be {expected}")
            }
            Violation::Boundary { square } => write!(f, "square {square}: boundary paths do not share endpoints"),
            Violation::SameBoundary { first, second } => {
                write!(f, "squares {first} and {second} have the same boundary")
            }
            Violation::MissingLeftTop { left, top } => write!(f, "no square with left {left} and top {top}"),
            Violation::AmbiguousLeftTop { left, top, squares } => {
                write!(f, "squares {} all have left {left} and top {top}", squares.join(", "))
            }
            Violation::MissingBottomRight { bottom, right } => {
                write!(f, "no square with bottom {bottom} and right {right}")
            }
            Violation::AmbiguousBottomRight { bottom, right, squares } => {
                write!(f, "squares {} all have bottom {bottom} and right {right}", squares.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoGraphError {
    #[error("not a 2-graph: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("textile system is not LR: {0}")]
    NotLr(LiftingFailure),
    #[error("label `{0}` is both a base edge and a tile vertex")]
    LabelClash(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("pairing condition fails: {}", join(.0))]
    Pairing(Vec<PairingViolation>),
    #[error("vertex `{vertex}` has {count} incoming edges; enumeration is capped at {cap}")]
    TooManyEdges { vertex: String, count: usize, cap: usize },
    #[error("more than {0} pairing partitions")]
    TooManyPartitions(usize),
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A validated 2-graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGraph {
    skeleton: TwoColoredGraph,
    squares: BTreeMap<String, CommutingSquare>,
    by_left_top: BTreeMap<(String, String), String>,
    by_bottom_right: BTreeMap<(String, String), String>,
}

impl TwoGraph {
    /// Checks colors, square boundaries and the unique completion of every
    /// 2-colored path. Lists every violation found.
    pub fn new(skeleton: TwoColoredGraph, squares: Vec<CommutingSquare>) -> Result<Self, TwoGraphError> {
        let g = &skeleton.graph;
        let mut bad = Vec::new();
        for e in g.edge_ids() {
            if skeleton.color(e).is_none() {
                bad.push(Violation::UncoloredEdge(e.into()));
            }
        }
        let mut map = BTreeMap::new();
        for sq in squares {
            let mut ok = true;
            for (edge, expected) in [
                (&sq.left, Color::Vertical),
                (&sq.top, Color::Horizontal),
                (&sq.right, Color::Vertical),
                (&sq.bottom, Color::Horizontal),
            ] {
                match skeleton.color(edge) {
                    _ if !g.has_edge(edge) => {
                        ok = false;
                        bad.push(Violation::UnknownEdge { square: sq.label.clone(), edge: edge.clone() });
                    }
                    Some(c) if c == expected => {}
                    _ => {
                        ok = false;
                        bad.push(Violation::WrongColor { square: sq.label.clone(), edge: edge.clone(), expected });
                    }
                }
            }
            if ok {
                let (l, t, r, b) = (g.ends(&sq.left).unwrap(), g.ends(&sq.top).unwrap(), g.ends(&sq.right).unwrap(), g.ends(&sq.bottom).unwrap());
                if l.source != t.range || l.range != b.range || r.source != t.source || r.range != b.source {
                    bad.push(Violation::Boundary { square: sq.label.clone() });
                }
            }
            if map.contains_key(&sq.label) {
                bad.push(Violation::DuplicateSquare(sq.label.clone()));
            } else {
                map.insert(sq.label.clone(), sq);
            }
        }
        if !bad.is_empty() {
            return Err(TwoGraphError::Invalid(bad));
        }

        let mut boundaries: BTreeMap<(&str, &str, &str, &str), &str> = BTreeMap::new();
        let mut left_top: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        let mut bottom_right: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for sq in map.values() {
            let key = (sq.left.as_str(), sq.top.as_str(), sq.right.as_str(), sq.bottom.as_str());
            if let Some(first) = boundaries.insert(key, &sq.label) {
                bad.push(Violation::SameBoundary { first: first.into(), second: sq.label.clone() });
            }
            left_top.entry((sq.left.clone(), sq.top.clone())).or_default().push(sq.label.clone());
            bottom_right.entry((sq.bottom.clone(), sq.right.clone())).or_default().push(sq.label.clone());
        }
        let verticals: Vec<&str> = skeleton.edges_of(Color::Vertical).collect();
        let horizontals: Vec<&str> = skeleton.edges_of(Color::Horizontal).collect();
        for &w in &verticals {
            for &e in &horizontals {
                if g.source(w) == g.range(e) {
                    match left_top.get(&(w.to_string(), e.to_string())) {
                        None => bad.push(Violation::MissingLeftTop { left: w.into(), top: e.into() }),
                        Some(v) if v.len() > 1 => bad.push(Violation::AmbiguousLeftTop {
                            left: w.into(),
                            top: e.into(),
                            squares: v.clone(),
                        }),
                        _ => {}
                    }
                }
            }
        }
        for &e in &horizontals {
            for &w in &verticals {
                if g.source(e) == g.range(w) {
                    match bottom_right.get(&(e.to_string(), w.to_string())) {
                        None => bad.push(Violation::MissingBottomRight { bottom: e.into(), right: w.into() }),
                        Some(v) if v.len() > 1 => bad.push(Violation::AmbiguousBottomRight {
                            bottom: e.into(),
                            right: w.into(),
                            squares: v.clone(),
                        }),
                        _ => {}
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Err(TwoGraphError::Invalid(bad));
        }
        let first = |m: BTreeMap<(String, String), Vec<String>>| m.into_iter().map(|(k, mut v)| (k, v.remove(0))).collect();
        Ok(TwoGraph { by_left_top: first(left_top), by_bottom_right: first(bottom_right), skeleton, squares: map })
    }

    pub fn skeleton(&self) -> &TwoColoredGraph {
        &self.skeleton
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.skeleton.graph
    }

    pub fn squares(&self) -> impl Iterator<Item = &CommutingSquare> + '_ {
        self.squares.values()
    }

    pub fn square(&self, label: &str) -> Option<&CommutingSquare> {
        self.squares.get(label)
    }

    pub fn num_squares(&self) -> usize {
        self.squares.len()
    }

    pub fn square_with_left_top(&self, left: &str, top: &str) -> Option<&CommutingSquare> {
        let id = self.by_left_top.get(&(left.to_string(), top.to_string()))?;
        self.squares.get(id)
    }

    pub fn square_with_bottom_right(&self, bottom: &str, right: &str) -> Option<&CommutingSquare> {
        let id = self.by_bottom_right.get(&(bottom.to_string(), right.to_string()))?;
        self.squares.get(id)
    }

    /// The 2-graph of an LR textile system. Square labels are the tile labels.
    ///
    /// Fails exactly when the system is not LR; the failing 2-colored path is
    /// reported as a lifting failure.
    pub fn from_textile(t: &TextileSystem) -> Result<TwoGraph, TwoGraphError> {
        let mut skeleton = TwoColoredGraph::default();
        for z in t.base().vertices() {
            skeleton.graph.add_vertex(z).unwrap();
        }
        for (e, ends) in t.base().edges() {
            skeleton.graph.add_edge(e, ends.source.clone(), ends.range.clone()).unwrap();
            skeleton.colors.insert(e.into(), Color::Horizontal);
        }
        for w in t.tiles().vertices() {
            skeleton
                .graph
                .add_edge(w, t.top().vertex(w), t.bottom().vertex(w))
                .map_err(|_| TwoGraphError::LabelClash(w.into()))?;
            skeleton.colors.insert(w.into(), Color::Vertical);
        }
        let squares = t
            .squares()
            .into_iter()
            .map(|s| CommutingSquare { label: s.label, left: s.left, top: s.top, right: s.right, bottom: s.bottom })
            .collect();
        TwoGraph::new(skeleton, squares).map_err(|err| match err {
            TwoGraphError::Invalid(v) => TwoGraphError::NotLr(as_lifting_failure(&v[0])),
            other => other,
        })
    }

    /// Base graph: vertices and horizontal edges. Tile graph: vertical edges
    /// as vertices and squares as edges from right side to left side.
    pub fn to_textile(&self) -> TextileSystem {
        let g = &self.skeleton.graph;
        let mut base = DirectedGraph::new();
        for z in g.vertices() {
            base.add_vertex(z).unwrap();
        }
        for e in self.skeleton.edges_of(Color::Horizontal) {
            base.add_edge(e, g.source(e).unwrap(), g.range(e).unwrap()).unwrap();
        }
        let mut tiles = DirectedGraph::new();
        let mut top = GraphHom::default();
        let mut bottom = GraphHom::default();
        for w in self.skeleton.edges_of(Color::Vertical) {
            tiles.add_vertex(w).unwrap();
            top.vertex_map.insert(w.into(), g.source(w).unwrap().into());
            bottom.vertex_map.insert(w.into(), g.range(w).unwrap().into());
        }
        for sq in self.squares.values() {
            tiles.add_edge(sq.label.clone(), sq.right.clone(), sq.left.clone()).unwrap();
            top.edge_map.insert(sq.label.clone(), sq.top.clone());
            bottom.edge_map.insert(sq.label.clone(), sq.bottom.clone());
        }
        TextileSystem::new(tiles, base, top, bottom).expect("a 2-graph yields a textile system")
    }

    /// Every vertex emits and receives edges of both colors.
    pub fn is_essential(&self) -> bool {
        let g = &self.skeleton.graph;
        g.vertices().all(|z| {
            [Color::Horizontal, Color::Vertical].iter().all(|&c| {
                let has = |f: &dyn Fn(&str) -> bool| self.skeleton.edges_of(c).any(f);
                has(&|e| g.range(e) == Some(z)) && has(&|e| g.source(e) == Some(z))
            })
        })
    }

    /// Squares whose left and bottom edges fall in different classes.
    pub fn check_pairing(&self, part: &InsplitPartition) -> Result<Vec<PairingViolation>, PartitionError> {
        part.validate(&self.skeleton.graph)?;
        let g = &self.skeleton.graph;
        let mut out = Vec::new();
        for sq in self.squares.values() {
            let z = g.range(&sq.left).unwrap();
            let lc = part.class_of(z, &sq.left).unwrap();
            let bc = part.class_of(z, &sq.bottom).unwrap();
            if lc != bc {
                out.push(PairingViolation {
                    square: sq.label.clone(),
                    vertex: z.into(),
                    left: sq.left.clone(),
                    left_class: lc,
                    bottom: sq.bottom.clone(),
                    bottom_class: bc,
                });
            }
        }
        Ok(out)
    }

    /// Splits every vertex `z` into `m(z)` copies. A parent square with
    /// source vertex `u` has `m(u)` children, named by the copy of `u` they
    /// start from.
    pub fn insplit(&self, part: &InsplitPartition) -> Result<TwoGraphInsplit, TwoGraphError> {
        let violations = self.check_pairing(part)?;
        if !violations.is_empty() {
            return Err(TwoGraphError::Pairing(violations));
        }
        let g = &self.skeleton.graph;
        let split = crate::graph::insplit_graph(g, part)?;
        let mut colors = BTreeMap::new();
        for (c, (f, _)) in &split.provenance.edges {
            colors.insert(c.clone(), self.skeleton.colors[f]);
        }
        let class = |e: &str| part.class_of(g.range(e).unwrap(), e).unwrap();
        let mut squares = Vec::new();
        let mut square_parent = BTreeMap::new();
        for sq in self.squares.values() {
            let u = g.source(&sq.top).unwrap();
            for i in 1..=part.count(u) {
                let label = child_label(&sq.label, i);
                square_parent.insert(label.clone(), (sq.label.clone(), i));
                squares.push(CommutingSquare {
                    label,
                    left: child_label(&sq.left, class(&sq.top)),
                    top: child_label(&sq.top, i),
                    right: child_label(&sq.right, i),
                    bottom: child_label(&sq.bottom, class(&sq.right)),
                });
            }
        }
        let skeleton = TwoColoredGraph { graph: split.graph, colors };
        let twograph = TwoGraph::new(skeleton, squares)?;
        Ok(TwoGraphInsplit { twograph, provenance: split.provenance, square_parent })
    }

    /// Lazily enumerates every partition satisfying the pairing condition,
    /// one restricted-growth string per vertex, vertices in label order.
    pub fn pairing_partitions(&self) -> Result<PairingPartitions, TwoGraphError> {
        let g = &self.skeleton.graph;
        let mut per_vertex = Vec::new();
        for z in g.vertices() {
            let edges: Vec<String> = g.edges_into(z).into_iter().map(String::from).collect();
            if edges.len() > PAIRING_EDGE_CAP {
                return Err(TwoGraphError::TooManyEdges { vertex: z.into(), count: edges.len(), cap: PAIRING_EDGE_CAP });
            }
            let pos: BTreeMap<&str, usize> = edges.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
            let links: Vec<(usize, usize)> = self
                .squares
                .values()
                .filter(|sq| g.range(&sq.left) == Some(z))
                .map(|sq| (pos[sq.left.as_str()], pos[sq.bottom.as_str()]))
                .collect();
            let options: Vec<Vec<BTreeSet<String>>> = set_partitions(edges.len())
                .filter(|rgs| links.iter().all(|&(a, b)| rgs[a] == rgs[b]))
                .map(|rgs| {
                    let m = rgs.iter().max().map_or(1, |x| x + 1);
                    let mut classes = vec![BTreeSet::new(); m];
                    for (i, &c) in rgs.iter().enumerate() {
                        classes[c].insert(edges[i].clone());
                    }
                    classes
                })
                .collect();
            per_vertex.push((z.to_string(), options));
        }
        Ok(PairingPartitions { cursor: vec![0; per_vertex.len()], per_vertex, done: false })
    }

    /// All pairing partitions, refusing when there are more than `limit`.
    pub fn enumerate_pairing_partitions(&self, limit: usize) -> Result<Vec<InsplitPartition>, TwoGraphError> {
        let it = self.pairing_partitions()?;
        if it.total() > limit as u128 {
            return Err(TwoGraphError::TooManyPartitions(limit));
        }
        Ok(it.collect())
    }
}

/// Largest `|zG¹|` accepted by pairing-partition enumeration.
pub const PAIRING_EDGE_CAP: usize = 10;

fn as_lifting_failure(v: &Violation) -> LiftingFailure {
    let (map, side, vertex, edge, lifts) = match v {
        Violation::MissingLeftTop { left, top } => (Map::Top, Side::Range, left, top, vec![]),
        Violation::AmbiguousLeftTop { left, top, squares } => (Map::Top, Side::Range, left, top, squares.clone()),
        Violation::MissingBottomRight { bottom, right } => (Map::Bottom, Side::Source, right, bottom, vec![]),
        Violation::AmbiguousBottomRight { bottom, right, squares } => {
            (Map::Bottom, Side::Source, right, bottom, squares.clone())
        }
        other => unreachable!("textile squares are always well formed: {other}"),
    };
    LiftingFailure { map, side, vertex: vertex.clone(), edge: edge.clone(), lifts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingViolation {
    pub square: String,
    pub vertex: String,
    pub left: String,
    pub left_class: usize,
    pub bottom: String,
    pub bottom_class: usize,
}

impl fmt::Display for PairingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "square {} at {}: left {} in class {}, bottom {} in class {}",
            self.square, self.vertex, self.left, self.left_class, self.bottom, self.bottom_class
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGraphInsplit {
    pub twograph: TwoGraph,
    pub provenance: Provenance,
    pub square_parent: BTreeMap<String, (String, usize)>,
}

/// Iterator over pairing partitions: a mixed-radix counter over the
/// admissible per-vertex choices.
pub struct PairingPartitions {
    per_vertex: Vec<(String, Vec<Vec<BTreeSet<String>>>)>,
    cursor: Vec<usize>,
    done: bool,
}

impl PairingPartitions {
    pub fn total(&self) -> u128 {
        self.per_vertex.iter().map(|(_, o)| o.len() as u128).product()
    }
}

impl Iterator for PairingPartitions {
    type Item = InsplitPartition;

    fn next(&mut self) -> Option<InsplitPartition> {
        if self.done {
            return None;
        }
        let mut p = InsplitPartition::new();
        for ((z, options), &c) in self.per_vertex.iter().zip(&self.cursor) {
            p.set(z.clone(), options[c].clone());
        }
        // advance the last vertex fastest
        let mut k = self.per_vertex.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.cursor[k] += 1;
            if self.cursor[k] < self.per_vertex[k].1.len() {
                break;
            }
            self.cursor[k] = 0;
        }
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_square() -> TwoGraph {
        let mut sk = TwoColoredGraph::default();
        sk.graph.add_vertex("o").unwrap();
        sk.graph.add_edge("e", "o", "o").unwrap();
        sk.graph.add_edge("w", "o", "o").unwrap();
        sk.colors.insert("e".into(), Color::Horizontal);
        sk.colors.insert("w".into(), Color::Vertical);
        let sq = CommutingSquare { label: "x".into(), left: "w".into(), top: "e".into(), right: "w".into(), bottom: "e".into() };
        TwoGraph::new(sk, vec![sq]).unwrap()
    }

    #[test]
    fn one_square_has_only_trivial_pairing() {
        let l = single_square();
        let all = l.enumerate_pairing_partitions(100).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_trivial());
        assert!(l.is_essential());
    }

    #[test]
    fn round_trip_through_textile() {
        let l = single_square();
        let t = l.to_textile();
        assert!(t.is_lr());
        assert_eq!(TwoGraph::from_textile(&t).unwrap(), l);
    }

    #[test]
    fn wrong_color_reported() {
        let mut sk = single_square().skeleton().clone();
        sk.colors.insert("w".into(), Color::Horizontal);
        let sq = CommutingSquare { label: "x".into(), left: "w".into(), top: "e".into(), right: "w".into(), bottom: "e".into() };
        let Err(TwoGraphError::Invalid(v)) = TwoGraph::new(sk, vec![sq]) else { panic!() };
        assert!(v.iter().any(|x| matches!(x, Violation::WrongColor { .. })));
    }
}
