//! Finite directed graphs, homomorphisms and insplitting.
//!
//! Edges point from their source to their range. Paths compose right to
//! left: `e f` is a path when `s(e) = r(f)`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownEndpoint { edge: String, vertex: String },
}

/// Endpoints of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnds {
    pub source: String,
    pub range: String,
}

/// A finite directed graph with string labels.
///
/// Vertex and edge labels live in separate namespaces. Iteration order is
/// always lexicographic by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, EdgeEnds>,
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) -> Result<(), GraphError> {
        let v = v.into();
        if !self.vertices.insert(v.clone()) {
            return Err(GraphError::DuplicateVertex(v));
        }
        Ok(())
    }

    /// Adds an edge pointing from `source` to `range`.
    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        range: impl Into<String>,
    ) -> Result<(), GraphError> {
        let (id, source, range) = (id.into(), source.into(), range.into());
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        for v in [&source, &range] {
            if !self.vertices.contains(v) {
                return Err(GraphError::UnknownEndpoint { edge: id, vertex: v.clone() });
            }
        }
        self.edges.insert(id, EdgeEnds { source, range });
        Ok(())
    }

    /// Builds a graph from vertex labels and `(id, source, range)` triples.
    pub fn from_parts<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for (id, s, r) in edges {
            g.add_edge(id.into(), s.into(), r.into())?;
        }
        Ok(g)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> + '_ {
        self.vertices.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &EdgeEnds)> + '_ {
        self.edges.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.edges.keys().map(String::as_str)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, e: &str) -> bool {
        self.edges.contains_key(e)
    }

    pub fn ends(&self, e: &str) -> Option<&EdgeEnds> {
        self.edges.get(e)
    }

    pub fn range(&self, e: &str) -> Option<&str> {
        self.edges.get(e).map(|x| x.range.as_str())
    }

    pub fn source(&self, e: &str) -> Option<&str> {
        self.edges.get(e).map(|x| x.source.as_str())
    }

    /// `r⁻¹(v)`: edges whose range is `v`, sorted.
    pub fn edges_into(&self, v: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(_, x)| x.range == v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// `s⁻¹(v)`: edges whose source is `v`, sorted.
    pub fn edges_out_of(&self, v: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(_, x)| x.source == v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Both `r` and `s` are onto.
    pub fn is_essential(&self) -> bool {
        let ranges: BTreeSet<&str> = self.edges.values().map(|x| x.range.as_str()).collect();
        let sources: BTreeSet<&str> = self.edges.values().map(|x| x.source.as_str()).collect();
        self.vertices
            .iter()
            .all(|v| ranges.contains(v.as_str()) && sources.contains(v.as_str()))
    }

    /// Every vertex receives an edge.
    pub fn is_source_free(&self) -> bool {
        let ranges: BTreeSet<&str> = self.edges.values().map(|x| x.range.as_str()).collect();
        self.vertices.iter().all(|v| ranges.contains(v.as_str()))
    }

    /// Number of paths of length `n`; length 0 counts vertices.
    pub fn count_paths(&self, n: usize) -> u128 {
        if n == 0 {
            return self.vertices.len() as u128;
        }
        // paths ending (by source) at each vertex
        let mut by_source: BTreeMap<&str, u128> =
            self.vertices.iter().map(|v| (v.as_str(), 1)).collect();
        for _ in 0..n {
            let mut next: BTreeMap<&str, u128> =
                self.vertices.iter().map(|v| (v.as_str(), 0)).collect();
            for x in self.edges.values() {
                *next.get_mut(x.source.as_str()).unwrap() += by_source[x.range.as_str()];
            }
            by_source = next;
        }
        by_source.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("vertex `{0}` has no image")]
    UnmappedVertex(String),
    #[error("edge `{0}` has no image")]
    UnmappedEdge(String),
    #[error("vertex `{vertex}` maps to `{image}`, which is not a codomain vertex")]
    BadVertexImage { vertex: String, image: String },
    #[error("edge `{edge}` maps to `{image}`, which is not a codomain edge")]
    BadEdgeImage { edge: String, image: String },
    #[error("map is defined on `{0}`, which is not in the domain")]
    ExtraneousLabel(String),
    #[error("edge `{0}`: image of its range is not the range of its image")]
    RangeMismatch(String),
    #[error("edge `{0}`: image of its source is not the source of its image")]
    SourceMismatch(String),
}

/// A graph homomorphism, stored as two label maps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphHom {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

impl GraphHom {
    pub fn identity(g: &DirectedGraph) -> Self {
        GraphHom {
            vertex_map: g.vertices().map(|v| (v.to_string(), v.to_string())).collect(),
            edge_map: g.edge_ids().map(|e| (e.to_string(), e.to_string())).collect(),
        }
    }

    /// Image of a vertex. Panics on a label outside the domain.
    pub fn vertex(&self, v: &str) -> &str {
        &self.vertex_map[v]
    }

    /// Image of an edge. Panics on a label outside the domain.
    pub fn edge(&self, e: &str) -> &str {
        &self.edge_map[e]
    }

    /// Checks totality and the equations `h(r(f)) = r(h(f))`, `h(s(f)) = s(h(f))`.
    /// Reports the first offending label in sorted order.
    pub fn validate(&self, domain: &DirectedGraph, codomain: &DirectedGraph) -> Result<(), HomError> {
        for v in domain.vertices() {
            match self.vertex_map.get(v) {
                None => return Err(HomError::UnmappedVertex(v.into())),
                Some(w) if !codomain.has_vertex(w) => {
                    return Err(HomError::BadVertexImage { vertex: v.into(), image: w.clone() })
                }
                _ => {}
            }
        }
        if let Some(v) = self.vertex_map.keys().find(|v| !domain.has_vertex(v)) {
            return Err(HomError::ExtraneousLabel(v.clone()));
        }
        if let Some(e) = self.edge_map.keys().find(|e| !domain.has_edge(e)) {
            return Err(HomError::ExtraneousLabel(e.clone()));
        }
        for (f, ends) in domain.edges() {
            let Some(img) = self.edge_map.get(f) else {
                return Err(HomError::UnmappedEdge(f.into()));
            };
            let Some(img_ends) = codomain.ends(img) else {
                return Err(HomError::BadEdgeImage { edge: f.into(), image: img.clone() });
            };
            if self.vertex_map[&ends.range] != img_ends.range {
                return Err(HomError::RangeMismatch(f.into()));
            }
            if self.vertex_map[&ends.source] != img_ends.source {
                return Err(HomError::SourceMismatch(f.into()));
            }
        }
        Ok(())
    }

    /// Onto both vertices and edges of `codomain`.
    pub fn is_onto(&self, codomain: &DirectedGraph) -> bool {
        self.is_onto_vertices(codomain) && {
            let hit: BTreeSet<&str> = self.edge_map.values().map(String::as_str).collect();
            codomain.edge_ids().all(|e| hit.contains(e))
        }
    }

    pub fn is_onto_vertices(&self, codomain: &DirectedGraph) -> bool {
        let hit: BTreeSet<&str> = self.vertex_map.values().map(String::as_str).collect();
        codomain.vertices().all(|v| hit.contains(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("no classes given for vertex `{0}`")]
    MissingVertex(String),
    #[error("classes given for unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` has zero classes")]
    NoClasses(String),
    #[error("class {index} at vertex `{vertex}` is empty")]
    EmptyClass { vertex: String, index: usize },
    #[error("`{edge}` appears in more than one class at vertex `{vertex}`")]
    Overlap { vertex: String, edge: String },
    #[error("`{edge}` is not an incoming edge of vertex `{vertex}`")]
    Foreign { vertex: String, edge: String },
    #[error("incoming edge `{edge}` of vertex `{vertex}` is in no class")]
    Gap { vertex: String, edge: String },
}

/// Ordered partitions of the incoming edges at each vertex.
///
/// Class indices are 1-based and name the split children. A vertex with no
/// incoming edges carries exactly one empty class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InsplitPartition {
    classes: BTreeMap<String, Vec<BTreeSet<String>>>,
}

impl InsplitPartition {
    pub fn new() -> Self {
        Self::default()
    }

    /// One class per vertex.
    pub fn trivial(g: &DirectedGraph) -> Self {
        let mut p = Self::new();
        for v in g.vertices() {
            p.set(v, vec![g.edges_into(v).into_iter().map(String::from).collect()]);
        }
        p
    }

    pub fn set(&mut self, v: impl Into<String>, classes: Vec<BTreeSet<String>>) {
        self.classes.insert(v.into(), classes);
    }

    /// Convenience for tests and fixtures.
    pub fn with(mut self, v: &str, classes: &[&[&str]]) -> Self {
        self.set(
            v,
            classes.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect(),
        );
        self
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> + '_ {
        self.classes.keys().map(String::as_str)
    }

    pub fn classes(&self, v: &str) -> &[BTreeSet<String>] {
        self.classes.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `m(v)`.
    pub fn count(&self, v: &str) -> usize {
        self.classes.get(v).map_or(0, Vec::len)
    }

    /// 1-based index of the class at `v` containing `edge`.
    pub fn class_of(&self, v: &str, edge: &str) -> Option<usize> {
        self.classes
            .get(v)?
            .iter()
            .position(|c| c.contains(edge))
            .map(|i| i + 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.values().all(|c| c.len() == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[BTreeSet<String>])> + '_ {
        self.classes.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Checks that the classes at each vertex partition `r⁻¹(v)`.
    pub fn validate(&self, g: &DirectedGraph) -> Result<(), PartitionError> {
        if let Some(v) = self.classes.keys().find(|v| !g.has_vertex(v)) {
            return Err(PartitionError::UnknownVertex(v.clone()));
        }
        for v in g.vertices() {
            let Some(classes) = self.classes.get(v) else {
                return Err(PartitionError::MissingVertex(v.into()));
            };
            if classes.is_empty() {
                return Err(PartitionError::NoClasses(v.into()));
            }
            let incoming: BTreeSet<&str> = g.edges_into(v).into_iter().collect();
            let degenerate = incoming.is_empty() && classes.len() == 1;
            let mut seen = BTreeSet::new();
            for (i, class) in classes.iter().enumerate() {
                if class.is_empty() && !degenerate {
                    return Err(PartitionError::EmptyClass { vertex: v.into(), index: i + 1 });
                }
                for e in class {
                    if !incoming.contains(e.as_str()) {
                        return Err(PartitionError::Foreign { vertex: v.into(), edge: e.clone() });
                    }
                    if !seen.insert(e.as_str()) {
                        return Err(PartitionError::Overlap { vertex: v.into(), edge: e.clone() });
                    }
                }
            }
            if let Some(e) = incoming.iter().find(|e| !seen.contains(*e)) {
                return Err(PartitionError::Gap { vertex: v.into(), edge: e.to_string() });
            }
        }
        Ok(())
    }
}

/// Name of the `index`-th split copy of `parent`.
///
/// Children are always suffixed, even when there is a single copy. Since the
/// index is all digits, `x^i` determines both `x` and `i`, so children of
/// distinct parents never collide.
pub fn child_label(parent: &str, index: usize) -> String {
    format!("{parent}^{index}")
}

/// Parent label and 1-based copy index of every vertex and edge of a split graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub vertices: BTreeMap<String, (String, usize)>,
    pub edges: BTreeMap<String, (String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsplitGraph {
    pub graph: DirectedGraph,
    pub provenance: Provenance,
}

/// Splits each vertex `v` into `m(v)` copies; an edge `f` gets one copy per
/// copy of its source, and every copy of `f` lands in the copy of `r(f)`
/// indexed by the class containing `f`.
pub fn insplit_graph(g: &DirectedGraph, part: &InsplitPartition) -> Result<InsplitGraph, PartitionError> {
    part.validate(g)?;
    let mut out = DirectedGraph::new();
    let mut prov = Provenance::default();
    for v in g.vertices() {
        for i in 1..=part.count(v) {
            let c = child_label(v, i);
            out.add_vertex(c.clone()).expect("child labels are distinct");
            prov.vertices.insert(c, (v.to_string(), i));
        }
    }
    for (f, ends) in g.edges() {
        let k = part.class_of(&ends.range, f).expect("validated partition covers r^-1(v)");
        let range = child_label(&ends.range, k);
        for j in 1..=part.count(&ends.source) {
            let c = child_label(f, j);
            out.add_edge(c.clone(), child_label(&ends.source, j), range.clone())
                .expect("child labels are distinct");
            prov.edges.insert(c, (f.to_string(), j));
        }
    }
    Ok(InsplitGraph { graph: out, provenance: prov })
}

/// A vertex and edge bijection commuting with range and source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

/// Backtracking isomorphism search over degree-compatible vertex assignments.
///
/// Exponential in the worst case; intended for graphs with a few dozen vertices.
pub fn graphs_isomorphic(g1: &DirectedGraph, g2: &DirectedGraph) -> Option<GraphIsomorphism> {
    if g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return None;
    }
    let v1: Vec<&str> = g1.vertices().collect();
    let v2: Vec<&str> = g2.vertices().collect();
    let mult = |g: &DirectedGraph, vs: &[&str]| {
        let idx: BTreeMap<&str, usize> = vs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut m = vec![vec![0usize; vs.len()]; vs.len()];
        for (_, x) in g.edges() {
            m[idx[x.source.as_str()]][idx[x.range.as_str()]] += 1;
        }
        m
    };
    let m1 = mult(g1, &v1);
    let m2 = mult(g2, &v2);
    let sig = |m: &[Vec<usize>], i: usize| {
        let out: usize = m[i].iter().sum();
        let inc: usize = m.iter().map(|row| row[i]).sum();
        (out, inc, m[i][i])
    };
    let n = v1.len();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn search(
        k: usize,
        n: usize,
        m1: &[Vec<usize>],
        m2: &[Vec<usize>],
        sig_ok: &dyn Fn(usize, usize) -> bool,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] || !sig_ok(k, c) {
                continue;
            }
            let consistent = (0..k).all(|j| {
                m1[k][j] == m2[c][assign[j]] && m1[j][k] == m2[assign[j]][c]
            }) && m1[k][k] == m2[c][c];
            if !consistent {
                continue;
            }
            assign[k] = c;
            used[c] = true;
            if search(k + 1, n, m1, m2, sig_ok, assign, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }

    let sig_ok = |a: usize, b: usize| sig(&m1, a) == sig(&m2, b);
    if !search(0, n, &m1, &m2, &sig_ok, &mut assign, &mut used) {
        return None;
    }
    let vertex_map: BTreeMap<String, String> =
        (0..n).map(|i| (v1[i].to_string(), v2[assign[i]].to_string())).collect();
    // Parallel edges are interchangeable; match them in sorted order.
    let mut pools: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for (e, x) in g2.edges() {
        pools.entry((x.source.as_str(), x.range.as_str())).or_default().push(e);
    }
    for pool in pools.values_mut() {
        pool.reverse();
    }
    let mut edge_map = BTreeMap::new();
    for (e, x) in g1.edges() {
        let key = (vertex_map[&x.source].as_str(), vertex_map[&x.range].as_str());
        let img = pools.get_mut(&key)?.pop()?;
        edge_map.insert(e.to_string(), img.to_string());
    }
    Some(GraphIsomorphism { vertex_map, edge_map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(id: &str, s: &str, r: &str) -> (String, String, String) {
        (id.into(), s.into(), r.into())
    }

    fn bouquet() -> DirectedGraph {
        DirectedGraph::from_parts(["o"], [edge("a", "o", "o"), edge("b", "o", "o")]).unwrap()
    }

    #[test]
    fn essential_examples() {
        assert!(bouquet().is_essential());
        let lone = DirectedGraph::from_parts(["v"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(!lone.is_essential());
    }

    #[test]
    fn rejects_dangling_edge() {
        let err = DirectedGraph::from_parts(["v"], [edge("e", "v", "w")]).unwrap_err();
        assert_eq!(err, GraphError::UnknownEndpoint { edge: "e".into(), vertex: "w".into() });
    }

    #[test]
    fn hom_loop_to_non_loop_fails() {
        let dom = DirectedGraph::from_parts(["x"], [edge("l", "x", "x")]).unwrap();
        let cod = DirectedGraph::from_parts(["a", "b"], [edge("e", "a", "b")]).unwrap();
        let h = GraphHom {
            vertex_map: [("x".into(), "a".into())].into(),
            edge_map: [("l".into(), "e".into())].into(),
        };
        assert_eq!(h.validate(&dom, &cod), Err(HomError::RangeMismatch("l".into())));
        assert!(GraphHom::identity(&cod).validate(&cod, &cod).is_ok());
    }

    #[test]
    fn partition_rejects_gap_and_overlap() {
        let g = bouquet();
        let gap = InsplitPartition::new().with("o", &[&["a"]]);
        assert!(matches!(gap.validate(&g), Err(PartitionError::Gap { .. })));
        let overlap = InsplitPartition::new().with("o", &[&["a", "b"], &["a"]]);
        assert!(matches!(overlap.validate(&g), Err(PartitionError::Overlap { .. })));
        let empty = InsplitPartition::new().with("o", &[&["a", "b"], &[]]);
        assert!(matches!(empty.validate(&g), Err(PartitionError::EmptyClass { .. })));
    }

    #[test]
    fn degenerate_vertex_copied_once() {
        let g = DirectedGraph::from_parts(["x", "y"], [edge("e", "x", "y")]).unwrap();
        let p = InsplitPartition::trivial(&g);
        assert_eq!(p.classes("x"), &[BTreeSet::new()]);
        let split = insplit_graph(&g, &p).unwrap();
        assert_eq!(split.graph.vertices().collect::<Vec<_>>(), ["x^1", "y^1"]);
    }

    #[test]
    fn bouquet_split_counts() {
        let g = bouquet();
        let p = InsplitPartition::new().with("o", &[&["a"], &["b"]]);
        let split = insplit_graph(&g, &p).unwrap();
        assert_eq!(split.graph.num_vertices(), 2);
        assert_eq!(split.graph.num_edges(), 4);
        assert_eq!(split.graph.range("b^2"), Some("o^2"));
        assert_eq!(split.graph.source("b^2"), Some("o^2"));
        assert_eq!(split.provenance.edges["a^2"], ("a".to_string(), 2));
    }

    #[test]
    fn path_counts() {
        assert_eq!(bouquet().count_paths(3), 8);
        let chain = DirectedGraph::from_parts(["x", "y"], [edge("e", "x", "y")]).unwrap();
        assert_eq!(chain.count_paths(1), 1);
        assert_eq!(chain.count_paths(2), 0);
    }

    #[test]
    fn isomorphism_detects_shape() {
        let g = bouquet();
        let split = insplit_graph(&g, &InsplitPartition::trivial(&g)).unwrap();
        let iso = graphs_isomorphic(&split.graph, &g).unwrap();
        assert_eq!(iso.vertex_map["o^1"], "o");
        let two = DirectedGraph::from_parts(["x", "y"], [edge("a", "x", "y"), edge("b", "y", "x")]).unwrap();
        assert!(graphs_isomorphic(&g, &two).is_none());
    }
}
