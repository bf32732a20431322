//! The `.spec` text format.
//!
//! A document is a sequence of sections. Blank lines and text after `#` are
//! ignored. Every name and label is a run of characters other than
//! whitespace and `[ ] { } , : = #`.
//!
//! ```text
//! format 1
//!
//! [graph NAME]
//! vertex LABEL...
//! edge LABEL : SOURCE -> RANGE
//!
//! [hom NAME : DOMAIN -> CODOMAIN]
//! vertex LABEL -> IMAGE
//! edge LABEL -> IMAGE
//!
//! [textile NAME]
//! top = HOM
//! bottom = HOM
//!
//! [twograph NAME]
//! vertex LABEL...
//! horizontal LABEL : SOURCE -> RANGE
//! vertical LABEL : SOURCE -> RANGE
//! square LABEL : left=EDGE top=EDGE right=EDGE bottom=EDGE
//!
//! [partition NAME : graph GRAPH]        # incoming edges of a graph
//! [partition NAME : twograph TWOGRAPH]  # incoming skeleton edges
//! [partition NAME : skeleton TEXTILE]   # skeleton of an LR textile system
//! class VERTEX INDEX = {LABEL, ...}
//!
//! [blocks NAME : TEXTILE WIDTHxHEIGHT]
//! block CELL... / CELL... / ...         # rows bottom to top
//! ```
//!
//! Section names share one namespace. Both maps of a textile must have the
//! same domain and codomain, and no tile vertex may share its label with a
//! base edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use crate::graph::{DirectedGraph, GraphHom, InsplitPartition};
use crate::shift::RectBlock;
use crate::textile::TextileSystem;
use crate::twograph::{Color, CommutingSquare, TwoColoredGraph, TwoGraph};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomEntry {
    pub domain: String,
    pub codomain: String,
    pub hom: GraphHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextileEntry {
    pub top: String,
    pub bottom: String,
    pub system: TextileSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionTarget {
    Graph(String),
    TwoGraph(String),
    Skeleton(String),
}

impl fmt::Display for PartitionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionTarget::Graph(n) => write!(f, "graph {n}"),
            PartitionTarget::TwoGraph(n) => write!(f, "twograph {n}"),
            PartitionTarget::Skeleton(n) => write!(f, "skeleton {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEntry {
    pub target: PartitionTarget,
    pub partition: InsplitPartition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlocksEntry {
    pub system: String,
    pub width: usize,
    pub height: usize,
    pub blocks: Vec<RectBlock>,
}

/// A parsed and fully resolved document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecDocument {
    pub format_version: u32,
    pub graphs: BTreeMap<String, DirectedGraph>,
    pub homs: BTreeMap<String, HomEntry>,
    pub textiles: BTreeMap<String, TextileEntry>,
    pub twographs: BTreeMap<String, TwoGraph>,
    pub partitions: BTreeMap<String, PartitionEntry>,
    pub blocks: BTreeMap<String, BlocksEntry>,
}

impl Default for SpecDocument {
    fn default() -> Self {
        SpecDocument {
            format_version: FORMAT_VERSION,
            graphs: BTreeMap::new(),
            homs: BTreeMap::new(),
            textiles: BTreeMap::new(),
            twographs: BTreeMap::new(),
            partitions: BTreeMap::new(),
            blocks: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Graph,
    Hom { domain: String, codomain: String },
    Textile,
    TwoGraph,
    Partition(PartitionTarget),
    Blocks { system: String, width: usize, height: usize },
}

struct RawSection {
    line: usize,
    name: String,
    kind: Kind,
    body: Vec<(usize, Vec<String>)>,
}

const SPECIAL: &[char] = &['[', ']', '{', '}', ',', ':', '=', '#'];

/// Splits a line into tokens; punctuation becomes its own token and `->`
/// is one token.
fn tokenize(line: &str) -> Vec<String> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() || SPECIAL.contains(&c) || (c == '-' && chars.peek() == Some(&'>')) {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if c == '-' {
                chars.next();
                out.push("->".into());
            } else if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn is_label(tok: &str) -> bool {
    !tok.is_empty() && tok != "->" && !tok.contains(SPECIAL)
}

struct Errors(Vec<ParseError>);

impl Errors {
    fn at(&mut self, line: usize, message: impl Into<String>) {
        self.0.push(ParseError { line, message: message.into() });
    }
}

fn parse_size(tok: &str) -> Option<(usize, usize)> {
    let (w, h) = tok.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

fn parse_header(toks: &[String]) -> Result<(String, Kind), String> {
    let t: Vec<&str> = toks.iter().map(String::as_str).collect();
    let name_ok = |n: &str| if is_label(n) { Ok(n.to_string()) } else { Err(format!("bad section name `{n}`")) };
    match t.as_slice() {
        ["graph", n] => Ok((name_ok(n)?, Kind::Graph)),
        ["hom", n, ":", d, "->", c] => Ok((name_ok(n)?, Kind::Hom { domain: d.to_string(), codomain: c.to_string() })),
        ["textile", n] => Ok((name_ok(n)?, Kind::Textile)),
        ["twograph", n] => Ok((name_ok(n)?, Kind::TwoGraph)),
        ["partition", n, ":", kind, target] => {
            let target = match *kind {
                "graph" => PartitionTarget::Graph(target.to_string()),
                "twograph" => PartitionTarget::TwoGraph(target.to_string()),
                "skeleton" => PartitionTarget::Skeleton(target.to_string()),
                other => return Err(format!("unknown partition target kind `{other}`")),
            };
            Ok((name_ok(n)?, Kind::Partition(target)))
        }
        ["blocks", n, ":", system, size] => {
            let (width, height) = parse_size(size).ok_or_else(|| format!("bad block size `{size}`, expected WxH"))?;
            Ok((name_ok(n)?, Kind::Blocks { system: system.to_string(), width, height }))
        }
        _ => Err(format!("unrecognized section header `[{}]`", t.join(" "))),
    }
}

/// Parses and resolves a document, collecting every error.
pub fn parse_spec(text: &str) -> Result<SpecDocument, Vec<ParseError>> {
    let mut errs = Errors(Vec::new());
    let mut doc = SpecDocument::default();
    let mut sections: Vec<RawSection> = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        if toks[0] == "format" {
            if seen_content {
                errs.at(line, "`format` must come before any section");
            }
            match toks.get(1).and_then(|v| v.parse::<u32>().ok()) {
                Some(v) if v == FORMAT_VERSION && toks.len() == 2 => doc.format_version = v,
                _ => errs.at(line, format!("unsupported format line; expected `format {FORMAT_VERSION}`")),
            }
            seen_content = true;
            continue;
        }
        seen_content = true;
        if toks[0] == "[" {
            if toks.last().map(String::as_str) != Some("]") {
                errs.at(line, "section header must end with `]`");
                continue;
            }
            match parse_header(&toks[1..toks.len() - 1]) {
                Ok((name, kind)) => sections.push(RawSection { line, name, kind, body: vec![] }),
                Err(m) => errs.at(line, m),
            }
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.body.push((line, toks)),
            None => errs.at(line, "content before the first section"),
        }
    }

    let mut names = BTreeSet::new();
    for s in &sections {
        if !names.insert(s.name.clone()) {
            errs.at(s.line, format!("section name `{}` already used", s.name));
        }
    }

    let of = |k: fn(&Kind) -> bool| sections.iter().filter(move |s| k(&s.kind));
    for s in of(|k| matches!(k, Kind::Graph)) {
        if let Some(g) = parse_graph(s, &mut errs) {
            doc.graphs.insert(s.name.clone(), g);
        }
    }
    for s in of(|k| matches!(k, Kind::Hom { .. })) {
        if let Some(h) = parse_hom(s, &doc, &mut errs) {
            doc.homs.insert(s.name.clone(), h);
        }
    }
    for s in of(|k| matches!(k, Kind::Textile)) {
        if let Some(t) = parse_textile(s, &doc, &mut errs) {
            doc.textiles.insert(s.name.clone(), t);
        }
    }
    for s in of(|k| matches!(k, Kind::TwoGraph)) {
        if let Some(t) = parse_twograph(s, &mut errs) {
            doc.twographs.insert(s.name.clone(), t);
        }
    }
    for s in of(|k| matches!(k, Kind::Partition(_))) {
        if let Some(p) = parse_partition(s, &doc, &mut errs) {
            doc.partitions.insert(s.name.clone(), p);
        }
    }
    for s in of(|k| matches!(k, Kind::Blocks { .. })) {
        if let Some(b) = parse_blocks(s, &doc, &mut errs) {
            doc.blocks.insert(s.name.clone(), b);
        }
    }

    if errs.0.is_empty() {
        Ok(doc)
    } else {
        errs.0.sort_by_key(|e| e.line);
        Err(errs.0)
    }
}

/// `LABEL : SOURCE -> RANGE` after the keyword.
fn arrow(toks: &[String]) -> Option<(String, String, String)> {
    match toks {
        [id, c, s, a, r] if c == ":" && a == "->" && is_label(id) && is_label(s) && is_label(r) => {
            Some((id.clone(), s.clone(), r.clone()))
        }
        _ => None,
    }
}

fn parse_graph(s: &RawSection, errs: &mut Errors) -> Option<DirectedGraph> {
    let mut g = DirectedGraph::new();
    let before = errs.0.len();
    let mut edges = Vec::new();
    for (line, toks) in &s.body {
        match toks[0].as_str() {
            "vertex" if toks.len() > 1 && toks[1..].iter().all(|t| is_label(t)) => {
                for v in &toks[1..] {
                    if let Err(e) = g.add_vertex(v.clone()) {
                        errs.at(*line, e.to_string());
                    }
                }
            }
            "edge" => match arrow(&toks[1..]) {
                Some(e) => edges.push((*line, e)),
                None => errs.at(*line, "expected `edge LABEL : SOURCE -> RANGE`"),
            },
            _ => errs.at(*line, format!("unexpected `{}` in graph section", toks.join(" "))),
        }
    }
    for (line, (id, src, rng)) in edges {
        if let Err(e) = g.add_edge(id, src, rng) {
            errs.at(line, e.to_string());
        }
    }
    (errs.0.len() == before).then_some(g)
}

fn parse_hom(s: &RawSection, doc: &SpecDocument, errs: &mut Errors) -> Option<HomEntry> {
    let Kind::Hom { domain, codomain } = &s.kind else { unreachable!() };
    let before = errs.0.len();
    let (dom, cod) = (doc.graphs.get(domain), doc.graphs.get(codomain));
    for (n, g) in [(domain, dom), (codomain, cod)] {
        if g.is_none() {
            errs.at(s.line, format!("unknown graph `{n}`"));
        }
    }
    let mut hom = GraphHom::default();
    for (line, toks) in &s.body {
        let map = match toks[0].as_str() {
            "vertex" => &mut hom.vertex_map,
            "edge" => &mut hom.edge_map,
            _ => {
                errs.at(*line, format!("unexpected `{}` in hom section", toks.join(" ")));
                continue;
            }
        };
        match &toks[1..] {
            [x, a, y] if a == "->" && is_label(x) && is_label(y) => {
                if map.insert(x.clone(), y.clone()).is_some() {
                    errs.at(*line, format!("`{x}` mapped twice"));
                }
            }
            _ => errs.at(*line, format!("expected `{} LABEL -> IMAGE`", toks[0])),
        }
    }
    if let (Some(d), Some(c)) = (dom, cod) {
        if let Err(e) = hom.validate(d, c) {
            errs.at(s.line, format!("hom `{}`: {e}", s.name));
        }
    }
    (errs.0.len() == before).then(|| HomEntry { domain: domain.clone(), codomain: codomain.clone(), hom })
}

fn parse_textile(s: &RawSection, doc: &SpecDocument, errs: &mut Errors) -> Option<TextileEntry> {
    let before = errs.0.len();
    let (mut top, mut bottom) = (None, None);
    for (line, toks) in &s.body {
        match toks.as_slice() {
            [k, eq, h] if eq == "=" && (k == "top" || k == "bottom") => {
                let slot = if k == "top" { &mut top } else { &mut bottom };
                if slot.replace(h.clone()).is_some() {
                    errs.at(*line, format!("`{k}` given twice"));
                }
            }
            _ => errs.at(*line, "expected `top = HOM` or `bottom = HOM`"),
        }
    }
    let (Some(top), Some(bottom)) = (top, bottom) else {
        errs.at(s.line, format!("textile `{}` needs both `top` and `bottom`", s.name));
        return None;
    };
    let (Some(p), Some(q)) = (doc.homs.get(&top), doc.homs.get(&bottom)) else {
        for h in [&top, &bottom] {
            if !doc.homs.contains_key(h) {
                errs.at(s.line, format!("unknown hom `{h}`"));
            }
        }
        return None;
    };
    if p.domain != q.domain || p.codomain != q.codomain {
        errs.at(s.line, format!("homs `{top}` and `{bottom}` have different domain or codomain"));
        return None;
    }
    let (tiles, base) = (&doc.graphs[&p.domain], &doc.graphs[&p.codomain]);
    if let Some(clash) = tiles.vertices().find(|v| base.has_edge(v)) {
        errs.at(s.line, format!("label `{clash}` is both a tile vertex and a base edge"));
    }
    match TextileSystem::new(tiles.clone(), base.clone(), p.hom.clone(), q.hom.clone()) {
        Ok(system) if errs.0.len() == before => Some(TextileEntry { top, bottom, system }),
        Ok(_) => None,
        Err(e) => {
            errs.at(s.line, format!("textile `{}`: {e}", s.name));
            None
        }
    }
}

fn parse_twograph(s: &RawSection, errs: &mut Errors) -> Option<TwoGraph> {
    let before = errs.0.len();
    let mut sk = TwoColoredGraph::default();
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for (line, toks) in &s.body {
        match toks[0].as_str() {
            "vertex" if toks.len() > 1 && toks[1..].iter().all(|t| is_label(t)) => {
                for v in &toks[1..] {
                    if let Err(e) = sk.graph.add_vertex(v.clone()) {
                        errs.at(*line, e.to_string());
                    }
                }
            }
            kw @ ("horizontal" | "vertical") => match arrow(&toks[1..]) {
                Some(e) => edges.push((*line, kw == "horizontal", e)),
                None => errs.at(*line, format!("expected `{kw} LABEL : SOURCE -> RANGE`")),
            },
            "square" => match parse_square(&toks[1..]) {
                Ok(sq) => squares.push((*line, sq)),
                Err(m) => errs.at(*line, m),
            },
            _ => errs.at(*line, format!("unexpected `{}` in twograph section", toks.join(" "))),
        }
    }
    for (line, horizontal, (id, src, rng)) in edges {
        match sk.graph.add_edge(id.clone(), src, rng) {
            Ok(()) => {
                sk.colors.insert(id, if horizontal { Color::Horizontal } else { Color::Vertical });
            }
            Err(e) => errs.at(line, e.to_string()),
        }
    }
    for (line, sq) in &squares {
        for e in [&sq.left, &sq.top, &sq.right, &sq.bottom] {
            if !sk.graph.has_edge(e) {
                errs.at(*line, format!("square `{}` refers to undefined edge `{e}`", sq.label));
            }
        }
    }
    if errs.0.len() != before {
        return None;
    }
    match TwoGraph::new(sk, squares.into_iter().map(|(_, s)| s).collect()) {
        Ok(t) => Some(t),
        Err(e) => {
            errs.at(s.line, format!("twograph `{}`: {e}", s.name));
            None
        }
    }
}

fn parse_square(toks: &[String]) -> Result<CommutingSquare, String> {
    let usage = "expected `square LABEL : left=EDGE top=EDGE right=EDGE bottom=EDGE`";
    let [id, colon, rest @ ..] = toks else { return Err(usage.into()) };
    if colon != ":" || !is_label(id) || rest.len() != 12 {
        return Err(usage.into());
    }
    let mut sides: BTreeMap<&str, String> = BTreeMap::new();
    for kv in rest.chunks(3) {
        let [k, eq, v] = kv else { unreachable!() };
        if eq != "=" || !is_label(v) || !["left", "top", "right", "bottom"].contains(&k.as_str()) {
            return Err(usage.into());
        }
        if sides.insert(k.as_str(), v.clone()).is_some() {
            return Err(format!("side `{k}` given twice"));
        }
    }
    Ok(CommutingSquare {
        label: id.clone(),
        left: sides["left"].clone(),
        top: sides["top"].clone(),
        right: sides["right"].clone(),
        bottom: sides["bottom"].clone(),
    })
}

fn parse_partition(s: &RawSection, doc: &SpecDocument, errs: &mut Errors) -> Option<PartitionEntry> {
    let Kind::Partition(target) = &s.kind else { unreachable!() };
    let before = errs.0.len();
    let mut classes: BTreeMap<String, BTreeMap<usize, (usize, BTreeSet<String>)>> = BTreeMap::new();
    for (line, toks) in &s.body {
        let ok = toks.len() >= 5 && toks[0] == "class" && toks[3] == "=" && toks[4] == "{" && toks.last().is_some_and(|t| t == "}");
        let index = toks.get(2).and_then(|t| t.parse::<usize>().ok()).filter(|&i| i >= 1);
        let (true, Some(index)) = (ok && is_label(&toks[1]), index) else {
            errs.at(*line, "expected `class VERTEX INDEX = {LABEL, ...}` with INDEX >= 1");
            continue;
        };
        let inner = &toks[5..toks.len() - 1];
        let mut members = BTreeSet::new();
        let mut good = true;
        for (k, t) in inner.iter().enumerate() {
            let want_label = k % 2 == 0;
            if want_label != is_label(t) || (!want_label && t != ",") {
                good = false;
            } else if want_label && !members.insert(t.clone()) {
                errs.at(*line, format!("`{t}` listed twice"));
            }
        }
        if !good || inner.len() % 2 == 0 && !inner.is_empty() {
            errs.at(*line, "class members must be a comma-separated list");
            continue;
        }
        if classes.entry(toks[1].clone()).or_default().insert(index, (*line, members)).is_some() {
            errs.at(*line, format!("class {index} of `{}` given twice", toks[1]));
        }
    }
    let mut p = InsplitPartition::new();
    for (v, by_index) in classes {
        if by_index.keys().copied().ne(1..=by_index.len()) {
            errs.at(by_index.values().next().unwrap().0, format!("class indices at `{v}` must be 1..m"));
            continue;
        }
        p.set(v, by_index.into_values().map(|(_, c)| c).collect());
    }
    let graph = match target {
        PartitionTarget::Graph(n) => doc.graphs.get(n).cloned(),
        PartitionTarget::TwoGraph(n) => doc.twographs.get(n).map(|t| t.graph().clone()),
        PartitionTarget::Skeleton(n) => match doc.textiles.get(n).map(|t| TwoGraph::from_textile(&t.system)) {
            Some(Ok(l)) => Some(l.graph().clone()),
            Some(Err(e)) => {
                errs.at(s.line, format!("textile `{n}` has no skeleton: {e}"));
                return None;
            }
            None => None,
        },
    };
    let Some(graph) = graph else {
        errs.at(s.line, format!("unknown partition target `{target}`"));
        return None;
    };
    if let Err(e) = p.validate(&graph) {
        errs.at(s.line, format!("partition `{}`: {e}", s.name));
    }
    (errs.0.len() == before).then(|| PartitionEntry { target: target.clone(), partition: p })
}

fn parse_blocks(s: &RawSection, doc: &SpecDocument, errs: &mut Errors) -> Option<BlocksEntry> {
    let Kind::Blocks { system, width, height } = &s.kind else { unreachable!() };
    let before = errs.0.len();
    let t = doc.textiles.get(system);
    if t.is_none() {
        errs.at(s.line, format!("unknown textile `{system}`"));
    }
    let mut blocks = Vec::new();
    for (line, toks) in &s.body {
        if toks[0] != "block" {
            errs.at(*line, "expected `block CELL... / CELL...`");
            continue;
        }
        let rows: Vec<Vec<String>> = toks[1..].split(|t| t == "/").map(|r| r.to_vec()).collect();
        match RectBlock::from_rows(&rows) {
            Ok(b) if b.width() == *width && b.height() == *height => {
                if t.is_some_and(|t| !b.is_admissible(&t.system)) {
                    errs.at(*line, "block is not admissible");
                }
                blocks.push(b);
            }
            _ => errs.at(*line, format!("block must have {height} rows of {width} cells")),
        }
    }
    blocks.sort();
    (errs.0.len() == before).then(|| BlocksEntry { system: system.clone(), width: *width, height: *height, blocks })
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, Vec<ParseError>> {
        parse_spec(text)
    }

    pub fn textile(&self, name: &str) -> Option<&TextileSystem> {
        self.textiles.get(name).map(|t| &t.system)
    }

    pub fn partition(&self, name: &str) -> Option<&InsplitPartition> {
        self.partitions.get(name).map(|p| &p.partition)
    }

    /// Adds a textile system under `name`, with its graphs and maps named
    /// `name.tiles`, `name.base`, `name.top` and `name.bottom`.
    pub fn add_textile(&mut self, name: &str, t: &TextileSystem) {
        let (tiles, base, top, bottom) =
            (format!("{name}.tiles"), format!("{name}.base"), format!("{name}.top"), format!("{name}.bottom"));
        self.graphs.insert(tiles.clone(), t.tiles().clone());
        self.graphs.insert(base.clone(), t.base().clone());
        for (h, hom) in [(&top, t.top()), (&bottom, t.bottom())] {
            self.homs.insert(h.clone(), HomEntry { domain: tiles.clone(), codomain: base.clone(), hom: hom.clone() });
        }
        self.textiles.insert(name.into(), TextileEntry { top, bottom, system: t.clone() });
    }

    pub fn add_twograph(&mut self, name: &str, l: &TwoGraph) {
        self.twographs.insert(name.into(), l.clone());
    }

    pub fn add_partition(&mut self, name: &str, target: PartitionTarget, p: &InsplitPartition) {
        self.partitions.insert(name.into(), PartitionEntry { target, partition: p.clone() });
    }

    pub fn add_blocks(&mut self, name: &str, system: &str, width: usize, height: usize, mut blocks: Vec<RectBlock>) {
        blocks.sort();
        self.blocks.insert(name.into(), BlocksEntry { system: system.into(), width, height, blocks });
    }

    /// Normalized text: sections grouped by kind, everything sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "format {}", self.format_version).unwrap();
        for (n, g) in &self.graphs {
            writeln!(w, "\n[graph {n}]").unwrap();
            for v in g.vertices() {
                writeln!(w, "vertex {v}").unwrap();
            }
            for (e, x) in g.edges() {
                writeln!(w, "edge {e} : {} -> {}", x.source, x.range).unwrap();
            }
        }
        for (n, h) in &self.homs {
            writeln!(w, "\n[hom {n} : {} -> {}]", h.domain, h.codomain).unwrap();
            for (a, b) in &h.hom.vertex_map {
                writeln!(w, "vertex {a} -> {b}").unwrap();
            }
            for (a, b) in &h.hom.edge_map {
                writeln!(w, "edge {a} -> {b}").unwrap();
            }
        }
        for (n, t) in &self.textiles {
            writeln!(w, "\n[textile {n}]\ntop = {}\nbottom = {}", t.top, t.bottom).unwrap();
        }
        for (n, l) in &self.twographs {
            writeln!(w, "\n[twograph {n}]").unwrap();
            let g = l.graph();
            for v in g.vertices() {
                writeln!(w, "vertex {v}").unwrap();
            }
            for c in [Color::Horizontal, Color::Vertical] {
                for e in l.skeleton().edges_of(c) {
                    writeln!(w, "{c} {e} : {} -> {}", g.source(e).unwrap(), g.range(e).unwrap()).unwrap();
                }
            }
            for s in l.squares() {
                writeln!(w, "square {} : left={} top={} right={} bottom={}", s.label, s.left, s.top, s.right, s.bottom).unwrap();
            }
        }
        for (n, p) in &self.partitions {
            writeln!(w, "\n[partition {n} : {}]", p.target).unwrap();
            for (v, classes) in p.partition.iter() {
                for (i, c) in classes.iter().enumerate() {
                    let members: Vec<&str> = c.iter().map(String::as_str).collect();
                    writeln!(w, "class {v} {} = {{{}}}", i + 1, members.join(", ")).unwrap();
                }
            }
        }
        for (n, b) in &self.blocks {
            writeln!(w, "\n[blocks {n} : {} {}x{}]", b.system, b.width, b.height).unwrap();
            for x in &b.blocks {
                writeln!(w, "block {x}").unwrap();
            }
        }
        out
    }
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
# one tile over a loop
[graph F]
vertex u
edge x : u -> u
[graph E]
vertex o
edge a : o -> o
[hom p : F -> E]
vertex u -> o
edge x -> a
[textile T]
top = p
bottom = p
[partition P : graph F]
class u 1 = {x}
";

    #[test]
    fn tokenizer_splits_punctuation() {
        assert_eq!(tokenize("edge e1 : v -> w # c"), ["edge", "e1", ":", "v", "->", "w"]);
        assert_eq!(tokenize("class z 1 = {f1,e1}"), ["class", "z", "1", "=", "{", "f1", ",", "e1", "}"]);
        assert_eq!(tokenize("vertex v^1 a-b"), ["vertex", "v^1", "a-b"]);
    }

    #[test]
    fn parses_and_round_trips() {
        let doc = parse_spec(SMALL).unwrap();
        assert!(doc.textile("T").unwrap().is_lr());
        let text = doc.to_text();
        let again = parse_spec(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn dangling_references_reported_with_lines() {
        let bad = SMALL.replace("top = p", "top = nope");
        let errs = parse_spec(&bad).unwrap_err();
        assert!(errs.iter().any(|e| e.message.contains("unknown hom `nope`")));
        let bad = SMALL.replace("edge x : u -> u", "edge x : u -> w");
        let errs = parse_spec(&bad).unwrap_err();
        assert_eq!(errs[0].line, 5);
    }

    #[test]
    fn empty_class_syntax() {
        let text = "[graph G]\nvertex a b\nedge e : a -> b\n[partition P : graph G]\nclass a 1 = {}\nclass b 1 = {e}\n";
        let doc = parse_spec(text).unwrap();
        assert_eq!(doc.partition("P").unwrap().classes("a"), &[BTreeSet::new()]);
    }
}
