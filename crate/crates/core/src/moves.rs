//! Reconstructing a 2-graph insplit from textile moves.
//!
//! Three kinds of partition describe the same split of an LR textile system:
//!
//! * a *skeleton* partition of the incoming skeleton edges of the associated
//!   2-graph, subject to the pairing condition;
//! * a *tiles* partition of the incoming edges of each tile vertex;
//! * a *base* partition of the incoming edges of each base vertex.
//!
//! This module converts between them, builds the split system from each,
//! and runs the insplit / invert / insplit / invert pipeline whose pruned
//! result tiles exactly like the 2-graph insplit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{child_label, insplit_graph, GraphHom, InsplitPartition, PartitionError};
use crate::shift::{compare_block_sets, BlockComparison, ShiftError, SizeGuard};
use crate::textile::{LiftingFailure, TextileError, TextileSystem};
use crate::twograph::{PairingViolation, TwoGraph, TwoGraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MovesError {
    #[error("textile system is not LR: {0}")]
    NotLr(LiftingFailure),
    #[error("pairing condition fails: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Pairing(Vec<PairingViolation>),
    #[error("{what} partition: {source}")]
    Partition { what: &'static str, source: PartitionError },
    #[error("hypothesis fails at {witness}: {reason}")]
    Hypothesis { witness: String, reason: String },
    #[error(transparent)]
    TwoGraph(#[from] TwoGraphError),
    #[error(transparent)]
    Textile(#[from] TextileError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

fn hypothesis(witness: impl Into<String>, reason: impl Into<String>) -> MovesError {
    MovesError::Hypothesis { witness: witness.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    Skeleton,
    Tiles,
    Base,
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionKind::Skeleton => "skeleton",
            PartitionKind::Tiles => "tiles",
            PartitionKind::Base => "base",
        })
    }
}

/// The three mutually determined partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPartitions {
    pub skeleton: InsplitPartition,
    pub tiles: InsplitPartition,
    pub base: InsplitPartition,
    /// Which of the three was supplied.
    pub input: PartitionKind,
}

fn require_lr(t: &TextileSystem) -> Result<(), MovesError> {
    let report = t.lifting_report();
    match report.lr_witness() {
        Some(w) => Err(MovesError::NotLr(w.clone())),
        None => Ok(()),
    }
}

fn require_onto_and_source_free(t: &TextileSystem) -> Result<(), MovesError> {
    if let Some(z) = t.base().vertices().find(|z| !t.top().vertex_map.values().any(|x| x == z)) {
        return Err(hypothesis(z, "base vertex not in the image of the top map"));
    }
    if let Some(e) = t.base().edge_ids().find(|e| !t.top().edge_map.values().any(|x| x == e)) {
        return Err(hypothesis(e, "base edge not in the image of the top map"));
    }
    if let Some(v) = t.tiles().vertices().find(|v| t.tiles().edges_into(v).is_empty()) {
        return Err(hypothesis(v, "tile vertex receives no edge"));
    }
    Ok(())
}

fn checked(what: &'static str, p: InsplitPartition, g: &crate::graph::DirectedGraph) -> Result<InsplitPartition, MovesError> {
    p.validate(g).map_err(|source| MovesError::Partition { what, source })?;
    Ok(p)
}

/// Tile classes at `v`: edges into `v` whose top lies in the matching
/// skeleton class at the image of `v`.
pub fn tiles_from_skeleton(t: &TextileSystem, g: &InsplitPartition) -> Result<InsplitPartition, MovesError> {
    let mut out = InsplitPartition::new();
    for v in t.tiles().vertices() {
        let z = t.top().vertex(v);
        let into = t.tiles().edges_into(v);
        let classes = g
            .classes(z)
            .iter()
            .map(|c| into.iter().filter(|l| c.contains(t.top().edge(l))).map(|l| l.to_string()).collect())
            .collect();
        out.set(v, classes);
    }
    checked("derived tiles", out, t.tiles())
}

/// Horizontal part of each skeleton class.
pub fn base_from_skeleton(t: &TextileSystem, g: &InsplitPartition) -> Result<InsplitPartition, MovesError> {
    let mut out = InsplitPartition::new();
    for z in t.base().vertices() {
        let classes = g.classes(z).iter().map(|c| c.iter().filter(|e| t.base().has_edge(e)).cloned().collect()).collect();
        out.set(z, classes);
    }
    checked("derived base", out, t.base())
}

/// Each base class together with the left sides of the squares whose
/// bottom is in it.
pub fn skeleton_from_base(t: &TextileSystem, e: &InsplitPartition) -> Result<InsplitPartition, MovesError> {
    let mut out = InsplitPartition::new();
    for z in t.base().vertices() {
        let classes = e
            .classes(z)
            .iter()
            .map(|c| {
                let mut class = c.clone();
                for (l, ends) in t.tiles().edges() {
                    if c.contains(t.bottom().edge(l)) {
                        class.insert(ends.range.clone());
                    }
                }
                class
            })
            .collect();
        out.set(z, classes);
    }
    let skeleton = TwoGraph::from_textile(t)?;
    checked("derived skeleton", out, skeleton.graph())
}

/// Tile classes at `v`: edges into `v` whose top lies in the matching base
/// class at the image of `v`. Requires every `bottom(uF¹)` to sit inside
/// one base class.
pub fn tiles_from_base(t: &TextileSystem, e: &InsplitPartition) -> Result<InsplitPartition, MovesError> {
    e.validate(t.base()).map_err(|source| MovesError::Partition { what: "base", source })?;
    for u in t.tiles().vertices() {
        let images = bottom_images(t, u);
        if base_class_containing(t, e, u, &images).is_none() {
            return Err(hypothesis(u, format!("bottom images {{{}}} straddle base classes", join(&images))));
        }
    }
    let mut out = InsplitPartition::new();
    for v in t.tiles().vertices() {
        let z = t.top().vertex(v);
        let into = t.tiles().edges_into(v);
        let classes = e
            .classes(z)
            .iter()
            .map(|c| into.iter().filter(|l| c.contains(t.top().edge(l))).map(|l| l.to_string()).collect())
            .collect();
        out.set(v, classes);
    }
    checked("derived tiles", out, t.tiles())
}

fn bottom_images(t: &TextileSystem, u: &str) -> BTreeSet<String> {
    t.tiles().edges_into(u).into_iter().map(|l| t.bottom().edge(l).to_string()).collect()
}

fn base_class_containing(t: &TextileSystem, e: &InsplitPartition, u: &str, images: &BTreeSet<String>) -> Option<usize> {
    let z = t.bottom().vertex(u);
    e.classes(z).iter().position(|c| images.is_subset(c)).map(|i| i + 1)
}

fn join(xs: &BTreeSet<String>) -> String {
    xs.iter().cloned().collect::<Vec<_>>().join(", ")
}

/// Reorders tile classes so that vertices over the same base vertex use the
/// same index for classes with the same top image, then reads off the base
/// partition from those images.
///
/// The least tile vertex over each base vertex is the anchor whose order is
/// kept. Fails when images of two classes overlap without being equal, or
/// when some `bottom(vF¹)` is not inside a single image.
pub fn base_from_tiles(t: &TextileSystem, f: &InsplitPartition) -> Result<(InsplitPartition, InsplitPartition), MovesError> {
    f.validate(t.tiles()).map_err(|source| MovesError::Partition { what: "tiles", source })?;
    let image = |c: &BTreeSet<String>| -> BTreeSet<String> { c.iter().map(|l| t.top().edge(l).to_string()).collect() };
    let mut all: Vec<(String, usize, BTreeSet<String>)> = Vec::new();
    for v in t.tiles().vertices() {
        for (i, c) in f.classes(v).iter().enumerate() {
            all.push((v.to_string(), i + 1, image(c)));
        }
    }
    for (a, (v, i, x)) in all.iter().enumerate() {
        for (w, j, y) in &all[a + 1..] {
            if x != y && !x.is_disjoint(y) {
                return Err(hypothesis(
                    format!("{v} class {i} and {w} class {j}"),
                    "top images overlap without being equal",
                ));
            }
        }
    }
    for v in t.tiles().vertices() {
        let images = bottom_images(t, v);
        if !all.iter().any(|(_, _, x)| images.is_subset(x)) {
            return Err(hypothesis(v, format!("bottom images {{{}}} lie in no single top image", join(&images))));
        }
    }

    let mut normalized = InsplitPartition::new();
    let mut base = InsplitPartition::new();
    for z in t.base().vertices() {
        let over: Vec<&str> = t.tiles().vertices().filter(|v| t.top().vertex(v) == z).collect();
        let Some(&anchor) = over.first() else {
            return Err(hypothesis(z, "base vertex not in the image of the top map"));
        };
        let anchor_images: Vec<BTreeSet<String>> = f.classes(anchor).iter().map(image).collect();
        for &v in &over {
            let classes = f.classes(v);
            let mut reordered = vec![None; anchor_images.len()];
            if classes.len() != anchor_images.len() {
                return Err(hypothesis(v, format!("has {} classes but {anchor} has {}", classes.len(), anchor_images.len())));
            }
            for c in classes {
                let img = image(c);
                let Some(k) = anchor_images.iter().position(|a| *a == img) else {
                    return Err(hypothesis(v, format!("class with top images {{{}}} matches no class at {anchor}", join(&img))));
                };
                reordered[k] = Some(c.clone());
            }
            normalized.set(v, reordered.into_iter().map(|c| c.expect("bijective match")).collect());
        }
        base.set(z, anchor_images);
    }
    Ok((checked("normalized tiles", normalized, t.tiles())?, checked("derived base", base, t.base())?))
}

/// Fills in the two partitions not supplied.
pub fn derive_partitions(t: &TextileSystem, kind: PartitionKind, input: &InsplitPartition) -> Result<DerivedPartitions, MovesError> {
    require_lr(t)?;
    match kind {
        PartitionKind::Skeleton => {
            let l = TwoGraph::from_textile(t)?;
            let bad = l.check_pairing(input).map_err(|source| MovesError::Partition { what: "skeleton", source })?;
            if !bad.is_empty() {
                return Err(MovesError::Pairing(bad));
            }
            Ok(DerivedPartitions {
                skeleton: input.clone(),
                tiles: tiles_from_skeleton(t, input)?,
                base: base_from_skeleton(t, input)?,
                input: kind,
            })
        }
        PartitionKind::Tiles => {
            let (tiles, base) = base_from_tiles(t, input)?;
            Ok(DerivedPartitions { skeleton: skeleton_from_base(t, &base)?, tiles, base, input: kind })
        }
        PartitionKind::Base => {
            let tiles = tiles_from_base(t, input)?;
            Ok(DerivedPartitions { skeleton: skeleton_from_base(t, input)?, tiles, base: input.clone(), input: kind })
        }
    }
}

/// Splits tiles by `tiles` and base by `base`. Copy `i` of a tile or tile
/// vertex has top the copy `i` of its old top; its bottom copy index comes
/// from `bottom_index` applied to the right side (tile) or to itself (vertex).
fn build_split_system(
    t: &TextileSystem,
    tiles: &InsplitPartition,
    base: &InsplitPartition,
    bottom_index: impl Fn(&str) -> Result<usize, MovesError>,
) -> Result<TextileSystem, MovesError> {
    let ft = insplit_graph(t.tiles(), tiles).map_err(|source| MovesError::Partition { what: "tiles", source })?;
    let et = insplit_graph(t.base(), base).map_err(|source| MovesError::Partition { what: "base", source })?;
    let mut top = GraphHom::default();
    let mut bottom = GraphHom::default();
    for (c, (v, i)) in &ft.provenance.vertices {
        top.vertex_map.insert(c.clone(), child_label(t.top().vertex(v), *i));
        bottom.vertex_map.insert(c.clone(), child_label(t.bottom().vertex(v), bottom_index(v)?));
    }
    for (c, (l, i)) in &ft.provenance.edges {
        let right = t.tiles().source(l).unwrap();
        top.edge_map.insert(c.clone(), child_label(t.top().edge(l), *i));
        bottom.edge_map.insert(c.clone(), child_label(t.bottom().edge(l), bottom_index(right)?));
    }
    Ok(TextileSystem::new(ft.graph, et.graph, top, bottom)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSystem {
    pub system: TextileSystem,
    pub partitions: DerivedPartitions,
    pub warnings: Vec<String>,
}

/// Split system from a skeleton partition; bottom copies are indexed by the
/// skeleton class of the right side.
pub fn split_from_skeleton(t: &TextileSystem, g: &InsplitPartition) -> Result<SplitSystem, MovesError> {
    let parts = derive_partitions(t, PartitionKind::Skeleton, g)?;
    let mut warnings = Vec::new();
    if !t.top().is_onto(t.base()) {
        warnings.push("top map is not onto; the split system may not be essential".to_string());
    }
    let system = build_split_system(t, &parts.tiles, &parts.base, |u| skeleton_class(t, g, u))?;
    Ok(SplitSystem { system, partitions: parts, warnings })
}

fn skeleton_class(t: &TextileSystem, g: &InsplitPartition, u: &str) -> Result<usize, MovesError> {
    g.class_of(t.bottom().vertex(u), u).ok_or_else(|| hypothesis(u, "not covered by the skeleton partition"))
}

/// Split system from a tiles partition; bottom copies are indexed by the
/// base class containing all bottoms of edges into the right side.
pub fn split_from_tiles(t: &TextileSystem, f: &InsplitPartition) -> Result<SplitSystem, MovesError> {
    require_lr(t)?;
    require_onto_and_source_free(t)?;
    let parts = derive_partitions(t, PartitionKind::Tiles, f)?;
    let system = build_split_system(t, &parts.tiles, &parts.base, |u| {
        base_class_containing(t, &parts.base, u, &bottom_images(t, u))
            .ok_or_else(|| hypothesis(u, "bottom images straddle base classes"))
    })?;
    Ok(SplitSystem { system, partitions: parts, warnings: vec![] })
}

/// Split system from a base partition; built like [`split_from_skeleton`]
/// with the derived skeleton partition.
pub fn split_from_base(t: &TextileSystem, e: &InsplitPartition) -> Result<SplitSystem, MovesError> {
    require_lr(t)?;
    require_onto_and_source_free(t)?;
    let parts = derive_partitions(t, PartitionKind::Base, e)?;
    let system = build_split_system(t, &parts.tiles, &parts.base, |u| skeleton_class(t, &parts.skeleton, u))?;
    Ok(SplitSystem { system, partitions: parts, warnings: vec![] })
}

/// Stages of the insplit, invert, insplit, invert pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub partitions: DerivedPartitions,
    /// Partition of the inverted first split, used for the second split.
    pub second: InsplitPartition,
    /// Insplit, inverted, insplit again, inverted again.
    pub stages: [TextileSystem; 4],
    /// Last stage restricted to diagonal copies and renamed.
    pub pruned: TextileSystem,
    /// Diagonal copy label to its new name.
    pub relabel: BTreeMap<String, String>,
    /// Off-diagonal copies dropped by pruning.
    pub excluded: Vec<String>,
    /// Textile system of the 2-graph insplit.
    pub target: TextileSystem,
    /// Every pruned square has the same boundary as the target square of the same name.
    pub squares_match: bool,
}

impl PipelineResult {
    pub fn compare_blocks(&self, max: (usize, usize), guard: &SizeGuard) -> Result<BlockComparison, ShiftError> {
        compare_block_sets(&self.pruned, &self.target, &BTreeMap::new(), max, guard)
    }
}

pub fn pipeline(t: &TextileSystem, g: &InsplitPartition) -> Result<PipelineResult, MovesError> {
    let parts = derive_partitions(t, PartitionKind::Skeleton, g)?;
    let a = t.insplit(&parts.tiles)?;
    let b = a.system.inverted();

    // second split: tiles of `b` into base edge e, classed by where the
    // right side of the parent tile falls in the skeleton partition
    let mut second = InsplitPartition::new();
    for e in b.tiles().vertices() {
        let z = t.base().source(e).unwrap();
        let into = b.tiles().edges_into(e);
        let classes = g
            .classes(z)
            .iter()
            .map(|c| {
                into.iter()
                    .filter(|x| {
                        let parent = &a.provenance.edges[**x].0;
                        c.contains(t.tiles().source(parent).unwrap())
                    })
                    .map(|x| x.to_string())
                    .collect()
            })
            .collect();
        second.set(e, classes);
    }
    let second = checked("second split", second, b.tiles())?;
    let c = b.insplit(&second)?;
    let d = c.system.inverted();

    let mut relabel = BTreeMap::new();
    let mut excluded = Vec::new();
    for (x, (parent, j)) in &c.provenance.edges {
        let (_, i) = &a.provenance.edges[parent];
        if i == j {
            relabel.insert(x.clone(), parent.clone());
        } else {
            excluded.push(x.clone());
        }
    }
    let pruned = d.restrict_tiles(|x| relabel.contains_key(x)).relabel_tiles(&relabel)?;
    let target = TwoGraph::from_textile(t)?.insplit(g)?.twograph.to_textile();
    let squares_match = pruned.squares() == target.squares();
    Ok(PipelineResult {
        partitions: parts,
        second,
        stages: [a.system, b, c.system, d],
        pruned,
        relabel,
        excluded,
        target,
        squares_match,
    })
}

/// One named check of a round trip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub start: PartitionKind,
    pub checks: Vec<Check>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_class_difference(a: &InsplitPartition, b: &InsplitPartition) -> Option<String> {
    let vs: BTreeSet<&str> = a.vertices().chain(b.vertices()).collect();
    for v in vs {
        let (x, y) = (a.classes(v), b.classes(v));
        for i in 0..x.len().max(y.len()) {
            if x.get(i) != y.get(i) {
                let show = |c: Option<&BTreeSet<String>>| c.map_or("missing".to_string(), |c| format!("{{{}}}", join(c)));
                return Some(format!("vertex {v} class {}: {} vs {}", i + 1, show(x.get(i)), show(y.get(i))));
            }
        }
    }
    None
}

/// Goes once around skeleton → tiles → base → skeleton starting at `start`,
/// then builds the split system three ways and compares them with each
/// other and with the 2-graph insplit.
pub fn roundtrip_equivalences(t: &TextileSystem, start: PartitionKind, input: &InsplitPartition) -> Result<RoundTripReport, MovesError> {
    require_lr(t)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, a: &InsplitPartition, b: &InsplitPartition| {
        let detail = first_class_difference(a, b);
        checks.push(Check { name: name.into(), passed: detail.is_none(), detail });
    };
    let (g, f, e) = match start {
        PartitionKind::Skeleton => {
            let f = tiles_from_skeleton(t, input)?;
            let (f_norm, e) = base_from_tiles(t, &f)?;
            let g = skeleton_from_base(t, &e)?;
            push("tiles already normalized", &f_norm, &f);
            push("skeleton recovered", &g, input);
            push("base read directly from skeleton", &base_from_skeleton(t, input)?, &e);
            push("tiles read directly from base", &tiles_from_base(t, &e)?, &f);
            (g, f, e)
        }
        PartitionKind::Tiles => {
            let (f0, e) = base_from_tiles(t, input)?;
            let g = skeleton_from_base(t, &e)?;
            let f = tiles_from_skeleton(t, &g)?;
            push("tiles recovered", &f, &f0);
            push("tiles read directly from base", &tiles_from_base(t, &e)?, &f0);
            push("base read directly from skeleton", &base_from_skeleton(t, &g)?, &e);
            (g, f, e)
        }
        PartitionKind::Base => {
            let g = skeleton_from_base(t, input)?;
            let f = tiles_from_skeleton(t, &g)?;
            let (_, e) = base_from_tiles(t, &f)?;
            push("base recovered", &e, input);
            push("base read directly from skeleton", &base_from_skeleton(t, &g)?, input);
            push("tiles read directly from base", &tiles_from_base(t, input)?, &f);
            (g, f, e)
        }
    };
    let a = split_from_skeleton(t, &g)?.system;
    let b = split_from_tiles(t, &f)?.system;
    let c = split_from_base(t, &e)?.system;
    let twograph = TwoGraph::from_textile(t)?.insplit(&g)?.twograph;
    let mut same = |name: &str, ok: bool| checks.push(Check { name: name.into(), passed: ok, detail: None });
    same("split from skeleton equals split from tiles", a == b);
    same("split from skeleton equals split from base", a == c);
    same("split system is LR", a.is_lr());
    same("2-graph of split system equals 2-graph insplit", TwoGraph::from_textile(&a).ok().as_ref() == Some(&twograph));
    Ok(RoundTripReport { start, checks })
}
