//! Finite rectangular blocks of the tiling space of a textile system.
//!
//! A block of width `w` and height `h` is a grid of tile labels. Column 0
//! is on the left, row 0 at the bottom. Horizontal neighbours satisfy
//! `s(left cell) = r(right cell)`; vertical neighbours satisfy
//! `top(lower cell) = bottom(upper cell)`. Only local admissibility is
//! checked: a block need not extend to an infinite tiling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::InsplitPartition;
use crate::textile::{TextileError, TextileInsplit, TextileSystem};
use crate::twograph::TwoGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("a {width}x{height} block has more than {max} cells")]
    TooManyCells { width: usize, height: usize, max: usize },
    #[error("more than {0} blocks; raise the size guard to continue")]
    TooManyBlocks(usize),
    #[error("block of size {width}x{height} is too small for window {window:?}")]
    TooSmall { width: usize, height: usize, window: (usize, usize) },
    #[error("window [{}] is not in the block map table", .0.join(" "))]
    TableMiss(Vec<String>),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("block is not admissible")]
    NotAdmissible,
    #[error("zero-sized block")]
    Empty,
}

/// Limits on block enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuard {
    pub max_cells: usize,
    pub max_blocks: usize,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard { max_cells: 36, max_blocks: 1_000_000 }
    }
}

impl SizeGuard {
    /// Defaults overridden by `TEXTILES_MAX_CELLS` and `TEXTILES_MAX_BLOCKS`.
    pub fn from_env() -> Self {
        let mut g = Self::default();
        let read = |k: &str| std::env::var(k).ok().and_then(|v| v.trim().parse().ok());
        if let Some(v) = read("TEXTILES_MAX_CELLS") {
            g.max_cells = v;
        }
        if let Some(v) = read("TEXTILES_MAX_BLOCKS") {
            g.max_blocks = v;
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RectBlock {
    width: usize,
    height: usize,
    /// Row-major, bottom row first.
    cells: Vec<String>,
}

impl RectBlock {
    pub fn new(width: usize, height: usize, cells: Vec<String>) -> Result<Self, ShiftError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(ShiftError::Empty);
        }
        Ok(RectBlock { width, height, cells })
    }

    /// Rows listed bottom to top.
    pub fn from_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, ShiftError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(ShiftError::Empty);
        }
        let cells = rows.iter().flatten().map(|s| s.as_ref().to_string()).collect();
        Self::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    pub fn get(&self, col: usize, row: usize) -> &str {
        &self.cells[row * self.width + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[String]> + '_ {
        self.cells.chunks(self.width)
    }

    pub fn crop(&self, col: usize, row: usize, width: usize, height: usize) -> RectBlock {
        assert!(col + width <= self.width && row + height <= self.height, "crop out of range");
        let mut cells = Vec::with_capacity(width * height);
        for r in row..row + height {
            for c in col..col + width {
                cells.push(self.get(c, r).to_string());
            }
        }
        RectBlock { width, height, cells }
    }

    /// Swaps the two axes; a block of the system becomes a block of its inversion.
    pub fn transpose(&self) -> RectBlock {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in 0..self.width {
            for r in 0..self.height {
                cells.push(self.get(c, r).to_string());
            }
        }
        RectBlock { width: self.height, height: self.width, cells }
    }

    pub fn map_cells(&self, f: impl Fn(&str) -> String) -> RectBlock {
        RectBlock { width: self.width, height: self.height, cells: self.cells.iter().map(|c| f(c)).collect() }
    }

    pub fn is_admissible(&self, t: &TextileSystem) -> bool {
        let tiles = t.tiles();
        if self.cells.iter().any(|c| !tiles.has_edge(c)) {
            return false;
        }
        for r in 0..self.height {
            for c in 0..self.width {
                let x = self.get(c, r);
                if c + 1 < self.width && tiles.source(x) != tiles.range(self.get(c + 1, r)) {
                    return false;
                }
                if r + 1 < self.height && t.top().edge(x) != t.bottom().edge(self.get(c, r + 1)) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for RectBlock {
    /// Rows bottom to top separated by ` / `, cells separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().map(|r| r.join(" ")).collect();
        f.write_str(&rows.join(" / "))
    }
}

/// Integer tables for fast enumeration.
pub(crate) struct TileIndex {
    labels: Vec<String>,
    pos: HashMap<String, u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    top: Vec<u32>,
    bottom: Vec<u32>,
    all: Vec<u32>,
    by_left: Vec<Vec<u32>>,
    by_bottom: Vec<Vec<u32>>,
    by_left_bottom: HashMap<(u32, u32), Vec<u32>>,
}

impl TileIndex {
    pub(crate) fn new(t: &TextileSystem) -> Self {
        let vpos: HashMap<&str, u32> = t.tiles().vertices().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let epos: HashMap<&str, u32> = t.base().edge_ids().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let labels: Vec<String> = t.tiles().edge_ids().map(String::from).collect();
        let pos = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        let mut ix = TileIndex {
            pos,
            left: vec![],
            right: vec![],
            top: vec![],
            bottom: vec![],
            all: (0..labels.len() as u32).collect(),
            by_left: vec![vec![]; vpos.len()],
            by_bottom: vec![vec![]; epos.len()],
            by_left_bottom: HashMap::new(),
            labels,
        };
        for (i, f) in ix.labels.iter().enumerate() {
            let i = i as u32;
            let ends = t.tiles().ends(f).unwrap();
            let (l, b) = (vpos[ends.range.as_str()], epos[t.bottom().edge(f)]);
            ix.left.push(l);
            ix.right.push(vpos[ends.source.as_str()]);
            ix.top.push(epos[t.top().edge(f)]);
            ix.bottom.push(b);
            ix.by_left[l as usize].push(i);
            ix.by_bottom[b as usize].push(i);
            ix.by_left_bottom.entry((l, b)).or_default().push(i);
        }
        ix
    }

    fn candidates(&self, cells: &[u32], width: usize, k: usize) -> &[u32] {
        let (c, r) = (k % width, k / width);
        match (c > 0, r > 0) {
            (false, false) => &self.all,
            (true, false) => &self.by_left[self.right[cells[k - 1] as usize] as usize],
            (false, true) => &self.by_bottom[self.top[cells[k - width] as usize] as usize],
            (true, true) => {
                let key = (self.right[cells[k - 1] as usize], self.top[cells[k - width] as usize]);
                self.by_left_bottom.get(&key).map_or(&[], Vec::as_slice)
            }
        }
    }

    /// All admissible blocks in lexicographic order; stops after `limit`.
    pub(crate) fn blocks(&self, width: usize, height: usize, guard: &SizeGuard, limit: Option<usize>) -> Result<Vec<Vec<u32>>, ShiftError> {
        if width == 0 || height == 0 {
            return Err(ShiftError::Empty);
        }
        if width * height > guard.max_cells {
            return Err(ShiftError::TooManyCells { width, height, max: guard.max_cells });
        }
        let n = width * height;
        let mut out = Vec::new();
        let mut cells = vec![0u32; n];
        let mut choice = vec![0usize; n];
        let mut k = 0usize;
        // iterative backtracking; choice[k] is the next candidate to try at k
        loop {
            let cands = self.candidates(&cells, width, k);
            if choice[k] < cands.len() {
                cells[k] = cands[choice[k]];
                choice[k] += 1;
                if k + 1 == n {
                    out.push(cells.clone());
                    if out.len() > guard.max_blocks {
                        return Err(ShiftError::TooManyBlocks(guard.max_blocks));
                    }
                    if limit.is_some_and(|l| out.len() >= l) {
                        return Ok(out);
                    }
                } else {
                    k += 1;
                    choice[k] = 0;
                }
            } else if k == 0 {
                return Ok(out);
            } else {
                k -= 1;
            }
        }
    }

    fn admissible(&self, cells: &[u32], width: usize) -> bool {
        let height = cells.len() / width;
        for r in 0..height {
            for c in 0..width {
                let x = cells[r * width + c] as usize;
                if c + 1 < width && self.right[x] != self.left[cells[r * width + c + 1] as usize] {
                    return false;
                }
                if r + 1 < height && self.top[x] != self.bottom[cells[(r + 1) * width + c] as usize] {
                    return false;
                }
            }
        }
        true
    }

    fn to_block(&self, cells: &[u32], width: usize) -> RectBlock {
        RectBlock {
            width,
            height: cells.len() / width,
            cells: cells.iter().map(|&i| self.labels[i as usize].clone()).collect(),
        }
    }
}

/// Every admissible `width × height` block, in lexicographic order of the
/// row-major cell sequence.
pub fn enumerate_blocks(t: &TextileSystem, width: usize, height: usize) -> Result<Vec<RectBlock>, ShiftError> {
    enumerate_blocks_with(t, width, height, &SizeGuard::default())
}

pub fn enumerate_blocks_with(t: &TextileSystem, width: usize, height: usize, guard: &SizeGuard) -> Result<Vec<RectBlock>, ShiftError> {
    let ix = TileIndex::new(t);
    Ok(ix.blocks(width, height, guard, None)?.iter().map(|b| ix.to_block(b, width)).collect())
}

/// The lexicographically least admissible block, if any.
pub fn first_block(t: &TextileSystem, width: usize, height: usize) -> Result<Option<RectBlock>, ShiftError> {
    let ix = TileIndex::new(t);
    let found = ix.blocks(width, height, &SizeGuard::default(), Some(1))?;
    Ok(found.first().map(|b| ix.to_block(b, width)))
}

/// Builds a row to sit on top of `row`, taking the least label at each step.
///
/// Needs the bottom map to be onto the base vertices and to have range
/// lifting (the row is built left to right) or source lifting (built right
/// to left). These are checked before any search.
pub fn lift_row(t: &TextileSystem, row: &[String]) -> Result<Vec<String>, ShiftError> {
    let report = t.lifting_report();
    if !report.bottom_range_lifting && !report.bottom_source_lifting {
        let w = report.failures.iter().find(|f| f.lifts.is_empty() && f.map == crate::textile::Map::Bottom);
        return Err(ShiftError::Hypothesis(format!(
            "bottom map has neither range nor source lifting ({})",
            w.map_or(String::new(), ToString::to_string)
        )));
    }
    if !t.bottom().is_onto_vertices(t.base()) {
        return Err(ShiftError::Hypothesis("bottom map is not onto the base vertices".into()));
    }
    let strip = RectBlock::new(row.len(), 1, row.to_vec())?;
    if !strip.is_admissible(t) {
        return Err(ShiftError::NotAdmissible);
    }
    let tiles = t.tiles();
    let rightward = report.bottom_range_lifting;
    let mut out: Vec<String> = Vec::with_capacity(row.len());
    let order: Vec<&String> = if rightward { row.iter().collect() } else { row.iter().rev().collect() };
    for x in order {
        let want = t.top().edge(x);
        let pick = tiles.edge_ids().find(|f| {
            t.bottom().edge(f) == want
                && match out.last() {
                    Some(prev) if rightward => tiles.range(f) == tiles.source(prev),
                    Some(prev) => tiles.source(f) == tiles.range(prev),
                    None => true,
                }
        });
        // guaranteed by the lifting hypothesis
        out.push(pick.expect("path lifting of the bottom map").to_string());
    }
    if !rightward {
        out.reverse();
    }
    Ok(out)
}

/// Stacks `height - 1` lifts on top of `base`.
pub fn lift_block(t: &TextileSystem, base: &[String], height: usize) -> Result<RectBlock, ShiftError> {
    let mut rows = vec![base.to_vec()];
    while rows.len() < height {
        let next = lift_row(t, rows.last().unwrap())?;
        rows.push(next);
    }
    RectBlock::from_rows(&rows)
}

/// A sliding block code with a `window.0 + 1` by `window.1 + 1` window.
///
/// Keys are windows in row-major order, bottom row first. The image of a
/// block has one cell per window position, anchored at the window's
/// bottom-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub window: (usize, usize),
    pub table: BTreeMap<Vec<String>, String>,
}

impl BlockMap {
    /// Cellwise identity on the tiles of `t`.
    pub fn identity(t: &TextileSystem) -> Self {
        BlockMap { window: (0, 0), table: t.tiles().edge_ids().map(|f| (vec![f.to_string()], f.to_string())).collect() }
    }

    pub fn apply(&self, b: &RectBlock) -> Result<RectBlock, ShiftError> {
        let (lw, lh) = self.window;
        if b.width <= lw || b.height <= lh {
            return Err(ShiftError::TooSmall { width: b.width, height: b.height, window: self.window });
        }
        let (w, h) = (b.width - lw, b.height - lh);
        let mut cells = Vec::with_capacity(w * h);
        for r in 0..h {
            for c in 0..w {
                let key = b.crop(c, r, lw + 1, lh + 1).cells;
                match self.table.get(&key) {
                    Some(v) => cells.push(v.clone()),
                    None => return Err(ShiftError::TableMiss(key)),
                }
            }
        }
        Ok(RectBlock { width: w, height: h, cells })
    }

    /// Checks that images of horizontally and vertically overlapping windows
    /// are adjacent in `target`. Returns the first source block whose image
    /// is not admissible.
    pub fn check_consistency(&self, source: &TextileSystem, target: &TextileSystem) -> Result<Option<RectBlock>, ShiftError> {
        let (lw, lh) = self.window;
        for (w, h) in [(lw + 2, lh + 1), (lw + 1, lh + 2)] {
            for b in enumerate_blocks(source, w, h)? {
                if !self.apply(&b)?.is_admissible(target) {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    fn compile(&self, src: &TileIndex, tgt: &TileIndex) -> CompiledMap {
        let mut table = HashMap::new();
        for (k, v) in &self.table {
            let key: Option<Vec<u32>> = k.iter().map(|x| src.pos.get(x).copied()).collect();
            if let Some(key) = key {
                table.insert(key, tgt.pos.get(v).copied().unwrap_or(u32::MAX));
            }
        }
        CompiledMap { window: self.window, table }
    }
}

struct CompiledMap {
    window: (usize, usize),
    table: HashMap<Vec<u32>, u32>,
}

enum Applied {
    Ok(Vec<u32>, usize),
    Miss(Vec<u32>),
    Foreign,
}

impl CompiledMap {
    fn apply(&self, cells: &[u32], width: usize) -> Option<Applied> {
        let height = cells.len() / width;
        let (lw, lh) = self.window;
        if width <= lw || height <= lh {
            return None;
        }
        let (w, h) = (width - lw, height - lh);
        let mut out = Vec::with_capacity(w * h);
        let mut key = Vec::with_capacity((lw + 1) * (lh + 1));
        for r in 0..h {
            for c in 0..w {
                key.clear();
                for rr in r..=r + lh {
                    key.extend_from_slice(&cells[rr * width + c..rr * width + c + lw + 1]);
                }
                match self.table.get(&key) {
                    Some(&u32::MAX) => return Some(Applied::Foreign),
                    Some(&v) => out.push(v),
                    None => return Some(Applied::Miss(key.clone())),
                }
            }
        }
        Some(Applied::Ok(out, w))
    }
}

/// The two block maps witnessing that a textile insplit is conjugate to the
/// original system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsplitConjugacy {
    pub insplit: TextileInsplit,
    /// Split system to original: each copy goes to its parent.
    pub collapse: BlockMap,
    /// Original to split system: a tile followed by its right neighbour `g`
    /// goes to the copy indexed by the class of `g`.
    pub expand: BlockMap,
}

pub fn insplit_conjugacy_block_maps(t: &TextileSystem, part: &InsplitPartition) -> Result<InsplitConjugacy, TextileError> {
    let insplit = t.insplit(part)?;
    let collapse = BlockMap {
        window: (0, 0),
        table: insplit.provenance.edges.iter().map(|(c, (f, _))| (vec![c.clone()], f.clone())).collect(),
    };
    let tiles = t.tiles();
    let mut table = BTreeMap::new();
    for b in enumerate_blocks(t, 2, 1).expect("2x1 is within any guard") {
        let (f, g) = (b.get(0, 0), b.get(1, 0));
        let v = tiles.source(f).unwrap();
        let j = part.class_of(v, g).expect("validated partition");
        table.insert(vec![f.to_string(), g.to_string()], crate::graph::child_label(f, j));
    }
    let expand = BlockMap { window: (1, 0), table };
    Ok(InsplitConjugacy { insplit, collapse, expand })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Blocks of the first system pushed through `phi`, then `psi`.
    Forward,
    /// Blocks of the second system pushed through `psi`, then `phi`.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    TableMiss(Vec<String>),
    /// The image uses a label that is not a tile of the target.
    ForeignLabel,
    NotAdmissible(RectBlock),
    NotIdentity(RectBlock),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub direction: Direction,
    pub block: RectBlock,
    pub failure: Failure,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} block [{}]: ", self.direction, self.block)?;
        match &self.failure {
            Failure::TableMiss(k) => write!(f, "window [{}] not in table", k.join(" ")),
            Failure::ForeignLabel => write!(f, "image uses an unknown tile"),
            Failure::NotAdmissible(b) => write!(f, "image [{b}] is not admissible"),
            Failure::NotIdentity(b) => write!(f, "round trip gives [{b}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub blocks_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Exhaustive finite check that `phi: t1 -> t2` and `psi: t2 -> t1` are
/// mutually inverse on all blocks up to `max` (width, height).
///
/// For each block of `t1` large enough for `phi`, its image must be
/// admissible in `t2`; when the image is large enough for `psi`, the round
/// trip must equal the block cropped to the result. Symmetrically for `t2`.
pub fn verify_conjugacy_on_blocks(
    t1: &TextileSystem,
    t2: &TextileSystem,
    phi: &BlockMap,
    psi: &BlockMap,
    max: (usize, usize),
    guard: &SizeGuard,
) -> Result<ConjugacyReport, ShiftError> {
    let (i1, i2) = (TileIndex::new(t1), TileIndex::new(t2));
    let (phi_c, psi_c) = (phi.compile(&i1, &i2), psi.compile(&i2, &i1));
    let mut checked = 0;
    for (dir, src, tgt, there, back) in [
        (Direction::Forward, &i1, &i2, &phi_c, &psi_c),
        (Direction::Backward, &i2, &i1, &psi_c, &phi_c),
    ] {
        for h in 1..=max.1 {
            for w in 1..=max.0 {
                for cells in src.blocks(w, h, guard, None)? {
                    checked += 1;
                    let fail = |failure| {
                        Ok(ConjugacyReport {
                            blocks_checked: checked,
                            counterexample: Some(Counterexample { direction: dir, block: src.to_block(&cells, w), failure }),
                        })
                    };
                    let (img, iw) = match there.apply(&cells, w) {
                        None => continue,
                        Some(Applied::Miss(k)) => return fail(Failure::TableMiss(src.to_block(&k, k.len()).cells)),
                        Some(Applied::Foreign) => return fail(Failure::ForeignLabel),
                        Some(Applied::Ok(img, iw)) => (img, iw),
                    };
                    if !tgt.admissible(&img, iw) {
                        return fail(Failure::NotAdmissible(tgt.to_block(&img, iw)));
                    }
                    let (round, rw) = match back.apply(&img, iw) {
                        None => continue,
                        Some(Applied::Miss(k)) => return fail(Failure::TableMiss(tgt.to_block(&k, k.len()).cells)),
                        Some(Applied::Foreign) => return fail(Failure::ForeignLabel),
                        Some(Applied::Ok(r, rw)) => (r, rw),
                    };
                    let rh = round.len() / rw;
                    let same = (0..rh).all(|r| round[r * rw..(r + 1) * rw] == cells[r * w..r * w + rw]);
                    if !same {
                        return fail(Failure::NotIdentity(src.to_block(&round, rw)));
                    }
                }
            }
        }
    }
    Ok(ConjugacyReport { blocks_checked: checked, counterexample: None })
}

/// Block counts of one size on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeComparison {
    pub width: usize,
    pub height: usize,
    pub left: usize,
    pub right: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockComparison {
    pub sizes: Vec<SizeComparison>,
    /// A block present on one side only; `true` when it came from the left.
    pub first_difference: Option<(RectBlock, bool)>,
}

impl BlockComparison {
    pub fn equal(&self) -> bool {
        self.sizes.iter().all(|s| s.equal)
    }
}

/// Compares block sets of every size up to `max`, renaming the tiles of
/// `left` through `relabel` first (labels absent from the map are kept).
pub fn compare_block_sets(
    left: &TextileSystem,
    right: &TextileSystem,
    relabel: &BTreeMap<String, String>,
    max: (usize, usize),
    guard: &SizeGuard,
) -> Result<BlockComparison, ShiftError> {
    let (il, ir) = (TileIndex::new(left), TileIndex::new(right));
    let rename: Vec<String> = il.labels.iter().map(|l| relabel.get(l).unwrap_or(l).clone()).collect();
    let mut out = BlockComparison { sizes: vec![], first_difference: None };
    for h in 1..=max.1 {
        for w in 1..=max.0 {
            let mut a: Vec<Vec<&str>> = il
                .blocks(w, h, guard, None)?
                .iter()
                .map(|b| b.iter().map(|&i| rename[i as usize].as_str()).collect())
                .collect();
            a.sort();
            let b: Vec<Vec<&str>> = ir
                .blocks(w, h, guard, None)?
                .iter()
                .map(|b| b.iter().map(|&i| ir.labels[i as usize].as_str()).collect())
                .collect();
            let equal = a == b;
            if !equal && out.first_difference.is_none() {
                let to_block = |cells: &Vec<&str>| RectBlock { width: w, height: h, cells: cells.iter().map(|s| s.to_string()).collect() };
                out.first_difference = a
                    .iter()
                    .find(|x| b.binary_search(x).is_err())
                    .map(|x| (to_block(x), true))
                    .or_else(|| b.iter().find(|x| a.binary_search(x).is_err()).map(|x| (to_block(x), false)));
            }
            out.sizes.push(SizeComparison { width: w, height: h, left: a.len(), right: b.len(), equal });
        }
    }
    Ok(out)
}

/// Rebuilds a block of an LR system from its left column of vertical sides
/// (bottom to top) and its top row of horizontal sides (left to right), by
/// completing one square at a time from the top-left corner.
pub fn fill_from_left_top(l: &TwoGraph, left: &[String], top: &[String]) -> Option<RectBlock> {
    let (w, h) = (top.len(), left.len());
    let mut cells = vec![String::new(); w * h];
    for r in (0..h).rev() {
        for c in 0..w {
            let side = if c == 0 { left[r].clone() } else { l.square(&cells[r * w + c - 1])?.right.clone() };
            let over = if r + 1 == h { top[c].clone() } else { l.square(&cells[(r + 1) * w + c])?.bottom.clone() };
            cells[r * w + c] = l.square_with_left_top(&side, &over)?.label.clone();
        }
    }
    RectBlock::new(w, h, cells).ok()
}

/// Same as [`fill_from_left_top`] from the bottom row of horizontal sides
/// and the right column of vertical sides, starting at the bottom-right corner.
pub fn fill_from_bottom_right(l: &TwoGraph, bottom: &[String], right: &[String]) -> Option<RectBlock> {
    let (w, h) = (bottom.len(), right.len());
    let mut cells = vec![String::new(); w * h];
    for r in 0..h {
        for c in (0..w).rev() {
            let side = if c + 1 == w { right[r].clone() } else { l.square(&cells[r * w + c + 1])?.left.clone() };
            let under = if r == 0 { bottom[c].clone() } else { l.square(&cells[(r - 1) * w + c])?.top.clone() };
            cells[r * w + c] = l.square_with_bottom_right(&under, &side)?.label.clone();
        }
    }
    RectBlock::new(w, h, cells).ok()
}

/// Boundary sides of a block: left column and right column (bottom to top),
/// top row and bottom row (left to right).
pub struct Boundary {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
}

pub fn boundary(t: &TextileSystem, b: &RectBlock) -> Boundary {
    let tiles = t.tiles();
    Boundary {
        left: (0..b.height).map(|r| tiles.range(b.get(0, r)).unwrap().to_string()).collect(),
        right: (0..b.height).map(|r| tiles.source(b.get(b.width - 1, r)).unwrap().to_string()).collect(),
        top: (0..b.width).map(|c| t.top().edge(b.get(c, b.height - 1)).to_string()).collect(),
        bottom: (0..b.width).map(|c| t.bottom().edge(b.get(c, 0)).to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_twice_is_identity() {
        let b = RectBlock::from_rows(&[vec!["a", "b", "c"], vec!["d", "e", "f"]]).unwrap();
        assert_eq!(b.transpose().transpose(), b);
        assert_eq!(b.transpose().get(1, 2), "f");
        assert_eq!(b.to_string(), "a b c / d e f");
    }

    #[test]
    fn crop_picks_window() {
        let b = RectBlock::from_rows(&[vec!["a", "b", "c"], vec!["d", "e", "f"]]).unwrap();
        assert_eq!(b.crop(1, 1, 2, 1).cells(), ["e", "f"]);
    }
}
