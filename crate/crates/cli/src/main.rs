use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use textiles::format::{PartitionTarget, SpecDocument};
use textiles::moves::{self, PartitionKind, SplitSystem};
use textiles::shift::{self, RectBlock, SizeGuard};
use textiles::textile::LiftingReport;
use textiles::twograph::Color;
use textiles::{DirectedGraph, GraphHom, InsplitPartition, TextileSystem, TwoGraph};

#[derive(Parser)]
#[command(name = "textiles", version, about = "Textile systems, 2-graphs and their splitting moves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input .spec file, or `-` for stdin
    #[arg(long, short)]
    input: PathBuf,
    /// Print a JSON tree instead of summary comments and spec text
    #[arg(long)]
    machine: bool,
    /// Write the result to a file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Textile system to work on
    #[arg(long, conflicts_with = "twograph", required_unless_present = "twograph")]
    system: Option<String>,
    /// 2-graph to work on, through its textile system
    #[arg(long)]
    twograph: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Skeleton,
    Tiles,
    Base,
}

#[derive(Subcommand)]
enum Command {
    /// Check every object, or one system or 2-graph, and report its properties
    Validate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        system: Option<String>,
        #[arg(long, conflicts_with = "system")]
        twograph: Option<String>,
    },
    /// Swap the horizontal and vertical roles of a textile system
    Invert {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        system: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Split the tile graph of a textile system by a partition of its edges
    InsplitTextile {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        system: String,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Split a 2-graph by a partition satisfying the pairing condition
    #[command(name = "insplit-2g")]
    Insplit2g {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        twograph: String,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Build the 2-graph of an LR textile system
    #[command(name = "to-2graph")]
    To2graph {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        system: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Build the textile system of a 2-graph
    ToTextile {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        twograph: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Enumerate the admissible blocks of one size
    Blocks {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        /// Block size as WIDTHxHEIGHT
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long)]
        name: Option<String>,
    },
    /// Insplit, invert, insplit, invert, prune, and compare with the 2-graph insplit
    Pipeline {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        /// Skeleton partition
        #[arg(long)]
        partition: String,
        /// Compare block sets of every size up to NxN
        #[arg(long, default_value_t = 3)]
        max_block: usize,
    },
    /// Split system from a skeleton partition
    SplitSkeleton {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Split system from a partition of the tiles
    SplitTiles {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Split system from a partition of the base
    SplitBase {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Go around skeleton, tiles and base partitions and compare the three split systems
    EquivCheck {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        partition: String,
        /// Kind of the given partition; read from its target when omitted
        #[arg(long, value_enum)]
        start: Option<Start>,
    },
    /// Compare the block sets of two textile systems
    CompareBlocks {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Largest size as WIDTHxHEIGHT
        #[arg(long, value_parser = parse_size, default_value = "3x3")]
        max: (usize, usize),
    },
    /// List the partitions of a 2-graph satisfying the pairing condition
    EnumPartitions {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        twograph: String,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once('x').ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s}"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width in {s}"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height in {s}"))?;
    if w == 0 || h == 0 {
        return Err("sizes start at 1".into());
    }
    Ok((w, h))
}

enum Failure {
    /// Bad names, unreadable files.
    Usage(String),
    /// The input is fine but the operation fails on it.
    Domain(String),
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string())
}

/// What a command produces: summary lines, a spec fragment, and a JSON tree.
struct Output {
    summary: Vec<String>,
    doc: SpecDocument,
    json: serde_json::Map<String, Value>,
    ok: bool,
}

impl Output {
    fn new() -> Self {
        Output { summary: vec![], doc: SpecDocument::default(), json: serde_json::Map::new(), ok: true }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    fn put(&mut self, key: &str, v: Value) {
        self.json.insert(key.into(), v);
    }

    fn render(self, command: &str, machine: bool) -> String {
        if machine {
            let v = json!({
                "command": command,
                "ok": self.ok,
                "summary": self.summary,
                "result": Value::Object(self.json),
            });
            return serde_json::to_string_pretty(&v).unwrap() + "\n";
        }
        let mut out: String = self.summary.iter().map(|l| format!("# {l}\n")).collect();
        let d = &self.doc;
        let has_content = !d.graphs.is_empty()
            || !d.textiles.is_empty()
            || !d.twographs.is_empty()
            || !d.partitions.is_empty()
            || !d.blocks.is_empty();
        if has_content {
            out.push_str(&d.to_text());
        }
        out
    }
}

struct Input {
    doc: SpecDocument,
}

impl Input {
    fn read(path: &PathBuf) -> Result<Self, Failure> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        };
        let doc = SpecDocument::parse(&text).map_err(|errs| {
            Failure::Domain(errs.iter().map(|e| format!("{}: {e}", path.display())).collect::<Vec<_>>().join("\n"))
        })?;
        Ok(Input { doc })
    }

    fn textile(&self, name: &str) -> Result<&TextileSystem, Failure> {
        self.doc.textile(name).ok_or_else(|| Failure::Usage(format!("no textile system named {name}")))
    }

    fn twograph(&self, name: &str) -> Result<&TwoGraph, Failure> {
        self.doc.twographs.get(name).ok_or_else(|| Failure::Usage(format!("no 2-graph named {name}")))
    }

    fn partition(&self, name: &str) -> Result<&InsplitPartition, Failure> {
        self.doc.partition(name).ok_or_else(|| Failure::Usage(format!("no partition named {name}")))
    }

    /// A textile system given directly or through a 2-graph, with its name.
    fn source(&self, s: &Source) -> Result<(String, TextileSystem), Failure> {
        match (&s.system, &s.twograph) {
            (Some(n), _) => Ok((n.clone(), self.textile(n)?.clone())),
            (None, Some(n)) => Ok((n.clone(), self.twograph(n)?.to_textile())),
            (None, None) => Err(Failure::Usage("give --system or --twograph".into())),
        }
    }
}

fn graph_json(g: &DirectedGraph) -> Value {
    json!({
        "vertices": g.vertices().collect::<Vec<_>>(),
        "edges": g.edges().map(|(e, x)| json!({"label": e, "source": x.source, "range": x.range})).collect::<Vec<_>>(),
    })
}

fn hom_json(h: &GraphHom) -> Value {
    json!({"vertices": h.vertex_map, "edges": h.edge_map})
}

fn textile_json(t: &TextileSystem) -> Value {
    json!({
        "tiles": graph_json(t.tiles()),
        "base": graph_json(t.base()),
        "top": hom_json(t.top()),
        "bottom": hom_json(t.bottom()),
        "squares": t.squares().iter().map(|q| json!({
            "label": q.label, "left": q.left, "top": q.top, "right": q.right, "bottom": q.bottom,
        })).collect::<Vec<_>>(),
    })
}

fn twograph_json(l: &TwoGraph) -> Value {
    let sk = l.skeleton();
    json!({
        "vertices": sk.graph.vertices().collect::<Vec<_>>(),
        "horizontal": sk.edges_of(Color::Horizontal).collect::<Vec<_>>(),
        "vertical": sk.edges_of(Color::Vertical).collect::<Vec<_>>(),
        "edges": graph_json(&sk.graph)["edges"],
        "squares": l.squares().map(|q| json!({
            "label": q.label, "left": q.left, "top": q.top, "right": q.right, "bottom": q.bottom,
        })).collect::<Vec<_>>(),
    })
}

fn partition_json(p: &InsplitPartition) -> Value {
    let m: serde_json::Map<String, Value> = p.iter().map(|(v, cs)| (v.to_string(), json!(cs))).collect();
    Value::Object(m)
}

fn block_json(b: &RectBlock) -> Value {
    json!(b.rows().collect::<Vec<_>>())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn report_lifting(out: &mut Output, name: &str, t: &TextileSystem) -> LiftingReport {
    let r = t.lifting_report();
    out.say(format!("textile {name}: valid; LR {}; essential {}", yes(r.is_lr()), yes(t.is_essential())));
    for (flag, v) in r.flags() {
        out.say(format!("  {flag}: {}", yes(v)));
    }
    for f in &r.failures {
        out.say(format!("  {f}"));
    }
    r
}

fn lifting_json(t: &TextileSystem, r: &LiftingReport) -> Value {
    let flags: serde_json::Map<String, Value> = r.flags().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "lr": r.is_lr(),
        "essential": t.is_essential(),
        "flags": flags,
        "failures": r.failures.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn validate(input: &Input, system: Option<&str>, twograph: Option<&str>) -> Result<Output, Failure> {
    let mut out = Output::new();
    let doc = &input.doc;
    let textiles: Vec<&str> = match (system, twograph) {
        (Some(s), _) => vec![input.textile(s).map(|_| s)?],
        (None, Some(_)) => vec![],
        (None, None) => doc.textiles.keys().map(String::as_str).collect(),
    };
    let twographs: Vec<&str> = match (system, twograph) {
        (_, Some(l)) => vec![input.twograph(l).map(|_| l)?],
        (Some(_), None) => vec![],
        (None, None) => doc.twographs.keys().map(String::as_str).collect(),
    };
    let mut systems = serde_json::Map::new();
    for n in textiles {
        let t = doc.textile(n).unwrap();
        let r = report_lifting(&mut out, n, t);
        systems.insert(n.into(), lifting_json(t, &r));
    }
    out.put("textiles", Value::Object(systems));
    let mut graphs = serde_json::Map::new();
    for n in twographs {
        let l = &doc.twographs[n];
        out.say(format!("twograph {n}: valid; {} squares; essential {}", l.num_squares(), yes(l.is_essential())));
        graphs.insert(n.into(), json!({"squares": l.num_squares(), "essential": l.is_essential()}));
    }
    out.put("twographs", Value::Object(graphs));
    if system.is_none() && twograph.is_none() {
        let mut parts = serde_json::Map::new();
        for (n, p) in &doc.partitions {
            let bad = match &p.target {
                PartitionTarget::TwoGraph(l) => pairing_problem(&doc.twographs[l], &p.partition),
                PartitionTarget::Skeleton(t) => match TwoGraph::from_textile(doc.textile(t).unwrap()) {
                    Ok(l) => pairing_problem(&l, &p.partition),
                    Err(e) => Some(e.to_string()),
                },
                PartitionTarget::Graph(_) => None,
            };
            out.say(format!("partition {n} on {}: {}", p.target, bad.as_deref().unwrap_or("valid")));
            out.ok &= bad.is_none();
            parts.insert(n.clone(), json!({"valid": bad.is_none(), "problem": bad}));
        }
        out.put("partitions", Value::Object(parts));
        let mut blocks = serde_json::Map::new();
        for (n, b) in &doc.blocks {
            let t = doc.textile(&b.system).unwrap();
            let bad = b.blocks.iter().filter(|x| !x.is_admissible(t)).count();
            out.say(format!("blocks {n}: {} blocks, {bad} not admissible in {}", b.blocks.len(), b.system));
            out.ok &= bad == 0;
            blocks.insert(n.clone(), json!({"count": b.blocks.len(), "not_admissible": bad}));
        }
        out.put("blocks", Value::Object(blocks));
    }
    Ok(out)
}

fn pairing_problem(l: &TwoGraph, p: &InsplitPartition) -> Option<String> {
    match l.check_pairing(p) {
        Err(e) => Some(e.to_string()),
        Ok(v) if v.is_empty() => None,
        Ok(v) => Some(format!("pairing condition fails: {}", v[0])),
    }
}

fn add_partitions(out: &mut Output, name: &str, split: &SplitSystem, t_name: &str) {
    let p = &split.partitions;
    out.doc.add_partition(&format!("{name}.skeleton_classes"), PartitionTarget::Skeleton(t_name.into()), &p.skeleton);
    out.doc.add_partition(&format!("{name}.tile_classes"), PartitionTarget::Graph(format!("{t_name}.tiles")), &p.tiles);
    out.doc.add_partition(&format!("{name}.base_classes"), PartitionTarget::Graph(format!("{t_name}.base")), &p.base);
}

fn split_output(t_name: &str, t: &TextileSystem, split: SplitSystem, name: &str) -> Output {
    let mut out = Output::new();
    let r = split.system.lifting_report();
    out.say(format!(
        "split {name}: {} tile vertices, {} tiles, {} base vertices, {} base edges; LR {}",
        split.system.tiles().num_vertices(),
        split.system.tiles().num_edges(),
        split.system.base().num_vertices(),
        split.system.base().num_edges(),
        yes(r.is_lr())
    ));
    for w in &split.warnings {
        out.say(format!("warning: {w}"));
    }
    out.doc.add_textile(t_name, t);
    out.doc.add_textile(name, &split.system);
    add_partitions(&mut out, name, &split, t_name);
    out.put("system", textile_json(&split.system));
    out.put("lr", json!(r.is_lr()));
    out.put("warnings", json!(split.warnings));
    out.put(
        "partitions",
        json!({
            "skeleton": partition_json(&split.partitions.skeleton),
            "tiles": partition_json(&split.partitions.tiles),
            "base": partition_json(&split.partitions.base),
        }),
    );
    out
}

fn run(command: Command) -> Result<(Output, bool, &'static str, Option<PathBuf>), Failure> {
    let guard = SizeGuard::from_env();
    let (out, io, cmd) = match command {
        Command::Validate { io, system, twograph } => {
            let input = Input::read(&io.input)?;
            (validate(&input, system.as_deref(), twograph.as_deref())?, io, "validate")
        }
        Command::Invert { io, system, name } => {
            let input = Input::read(&io.input)?;
            let t = input.textile(&system)?;
            let name = name.unwrap_or_else(|| format!("{system}_inv"));
            let inv = t.inverted();
            let mut out = Output::new();
            out.say(format!("{name}: inverse of {system}, {} tiles", inv.tiles().num_edges()));
            out.doc.add_textile(&name, &inv);
            out.put("system", textile_json(&inv));
            (out, io, "invert")
        }
        Command::InsplitTextile { io, system, partition, name } => {
            let input = Input::read(&io.input)?;
            let t = input.textile(&system)?;
            let p = input.partition(&partition)?;
            let split = t.insplit(p).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{system}_split"));
            let mut out = Output::new();
            out.say(format!("{name}: textile insplit of {system} by {partition}, {} tiles", split.system.tiles().num_edges()));
            let r = report_lifting(&mut out, &name, &split.system);
            out.doc.add_textile(&name, &split.system);
            out.put("system", textile_json(&split.system));
            out.put("lifting", lifting_json(&split.system, &r));
            (out, io, "insplit-textile")
        }
        Command::Insplit2g { io, twograph, partition, name } => {
            let input = Input::read(&io.input)?;
            let l = input.twograph(&twograph)?;
            let p = input.partition(&partition)?;
            let split = l.insplit(p).map_err(domain)?.twograph;
            let name = name.unwrap_or_else(|| format!("{twograph}_split"));
            let mut out = Output::new();
            out.say(format!(
                "{name}: 2-graph insplit of {twograph} by {partition}, {} vertices, {} edges, {} squares",
                split.graph().num_vertices(),
                split.graph().num_edges(),
                split.num_squares()
            ));
            out.doc.add_twograph(&name, &split);
            out.put("twograph", twograph_json(&split));
            (out, io, "insplit-2g")
        }
        Command::To2graph { io, system, name } => {
            let input = Input::read(&io.input)?;
            let t = input.textile(&system)?;
            let l = TwoGraph::from_textile(t).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{system}_2g"));
            let mut out = Output::new();
            out.say(format!("{name}: 2-graph of {system}, {} squares", l.num_squares()));
            out.doc.add_twograph(&name, &l);
            out.put("twograph", twograph_json(&l));
            (out, io, "to-2graph")
        }
        Command::ToTextile { io, twograph, name } => {
            let input = Input::read(&io.input)?;
            let t = input.twograph(&twograph)?.to_textile();
            let name = name.unwrap_or_else(|| format!("{twograph}_textile"));
            let mut out = Output::new();
            out.say(format!("{name}: textile system of {twograph}, {} tiles", t.tiles().num_edges()));
            out.doc.add_textile(&name, &t);
            out.put("system", textile_json(&t));
            (out, io, "to-textile")
        }
        Command::Blocks { io, source, size, name } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let blocks = shift::enumerate_blocks_with(&t, size.0, size.1, &guard).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{sys}_{}x{}", size.0, size.1));
            let mut out = Output::new();
            out.say(format!("{} admissible {}x{} blocks of {sys}", blocks.len(), size.0, size.1));
            out.put("width", json!(size.0));
            out.put("height", json!(size.1));
            out.put("blocks", json!(blocks.iter().map(block_json).collect::<Vec<_>>()));
            out.doc.add_textile(&sys, &t);
            out.doc.add_blocks(&name, &sys, size.0, size.1, blocks);
            (out, io, "blocks")
        }
        Command::Pipeline { io, source, partition, max_block } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let g = input.partition(&partition)?;
            let r = moves::pipeline(&t, g).map_err(domain)?;
            let mut out = Output::new();
            let names = ["first_split", "first_inverse", "second_split", "second_inverse"];
            for (n, s) in names.iter().zip(&r.stages) {
                out.say(format!(
                    "{n}: {} tile vertices, {} tiles, {} base vertices, {} base edges",
                    s.tiles().num_vertices(),
                    s.tiles().num_edges(),
                    s.base().num_vertices(),
                    s.base().num_edges()
                ));
            }
            out.say(format!("pruned: {} tiles kept, {} dropped ({})", r.pruned.tiles().num_edges(), r.excluded.len(), r.excluded.join(", ")));
            out.say(format!("pruned squares match the 2-graph insplit: {}", yes(r.squares_match)));
            let cmp = r.compare_blocks((max_block, max_block), &guard).map_err(domain)?;
            if cmp.equal() {
                out.say(format!("block sets EQUAL up to {max_block}x{max_block}"));
            } else {
                let (b, left) = cmp.first_difference.clone().unwrap();
                out.say(format!(
                    "block sets DIFFER: [{b}] only in the {}",
                    if left { "pruned system" } else { "2-graph insplit" }
                ));
                out.ok = false;
            }
            out.ok &= r.squares_match;
            let iso = textiles::graph::graphs_isomorphic(r.stages[3].base(), r.target.base()).is_some();
            out.say(format!("last stage base isomorphic to the 2-graph insplit base: {}", yes(iso)));
            for (n, s) in names.iter().zip(&r.stages) {
                out.doc.add_textile(&format!("{sys}.{n}"), s);
            }
            out.doc.add_textile(&format!("{sys}.pruned"), &r.pruned);
            out.doc.add_textile(&format!("{sys}.target"), &r.target);
            let stage_json: Vec<Value> = r.stages.iter().map(textile_json).collect();
            out.put("stages", json!(stage_json));
            out.put("pruned", textile_json(&r.pruned));
            out.put("target", textile_json(&r.target));
            out.put("relabel", json!(r.relabel));
            out.put("excluded", json!(r.excluded));
            out.put("squares_match", json!(r.squares_match));
            out.put("blocks_equal", json!(cmp.equal()));
            out.put("max_block", json!(max_block));
            out.put("bases_isomorphic", json!(iso));
            (out, io, "pipeline")
        }
        Command::SplitSkeleton { io, source, partition, name } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let split = moves::split_from_skeleton(&t, input.partition(&partition)?).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{sys}_split"));
            (split_output(&sys, &t, split, &name), io, "split-skeleton")
        }
        Command::SplitTiles { io, source, partition, name } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let split = moves::split_from_tiles(&t, input.partition(&partition)?).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{sys}_split"));
            (split_output(&sys, &t, split, &name), io, "split-tiles")
        }
        Command::SplitBase { io, source, partition, name } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let split = moves::split_from_base(&t, input.partition(&partition)?).map_err(domain)?;
            let name = name.unwrap_or_else(|| format!("{sys}_split"));
            (split_output(&sys, &t, split, &name), io, "split-base")
        }
        Command::EquivCheck { io, source, partition, start } => {
            let input = Input::read(&io.input)?;
            let (sys, t) = input.source(&source)?;
            let entry = input.doc.partitions.get(&partition).ok_or_else(|| Failure::Usage(format!("no partition named {partition}")))?;
            let kind = match start {
                Some(Start::Skeleton) => PartitionKind::Skeleton,
                Some(Start::Tiles) => PartitionKind::Tiles,
                Some(Start::Base) => PartitionKind::Base,
                None => match &entry.target {
                    PartitionTarget::TwoGraph(_) | PartitionTarget::Skeleton(_) => PartitionKind::Skeleton,
                    PartitionTarget::Graph(g) if &input.doc.graphs[g] == t.tiles() => PartitionKind::Tiles,
                    PartitionTarget::Graph(g) if &input.doc.graphs[g] == t.base() => PartitionKind::Base,
                    PartitionTarget::Graph(g) => {
                        return Err(Failure::Usage(format!("graph {g} is neither the tiles nor the base of {sys}; give --start")))
                    }
                },
            };
            let rep = moves::roundtrip_equivalences(&t, kind, &entry.partition).map_err(domain)?;
            let mut out = Output::new();
            out.say(format!("round trip from the {kind} partition {partition} of {sys}"));
            for c in &rep.checks {
                let status = if c.passed { "ok" } else { "FAILED" };
                match &c.detail {
                    Some(d) => out.say(format!("  {}: {status} ({d})", c.name)),
                    None => out.say(format!("  {}: {status}", c.name)),
                }
            }
            out.say(if rep.passed() { "all checks passed" } else { "some checks failed" });
            out.ok = rep.passed();
            out.put("start", json!(kind.to_string()));
            out.put(
                "checks",
                json!(rep.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>()),
            );
            (out, io, "equiv-check")
        }
        Command::CompareBlocks { io, left, right, max } => {
            let input = Input::read(&io.input)?;
            let (a, b) = (input.textile(&left)?, input.textile(&right)?);
            let cmp = shift::compare_block_sets(a, b, &Default::default(), max, &guard).map_err(domain)?;
            let mut out = Output::new();
            for s in &cmp.sizes {
                out.say(format!("{}x{}: {} vs {} {}", s.width, s.height, s.left, s.right, if s.equal { "equal" } else { "DIFFER" }));
            }
            if let Some((b, from_left)) = &cmp.first_difference {
                out.say(format!("first difference: [{b}] only in {}", if *from_left { &left } else { &right }));
            }
            out.say(format!("block sets {} up to {}x{}", if cmp.equal() { "EQUAL" } else { "DIFFER" }, max.0, max.1));
            out.ok = cmp.equal();
            out.put(
                "sizes",
                json!(cmp.sizes.iter().map(|s| json!({"width": s.width, "height": s.height, "left": s.left, "right": s.right, "equal": s.equal})).collect::<Vec<_>>()),
            );
            out.put("equal", json!(cmp.equal()));
            (out, io, "compare-blocks")
        }
        Command::EnumPartitions { io, twograph, limit } => {
            let input = Input::read(&io.input)?;
            let l = input.twograph(&twograph)?;
            let all = l.enumerate_pairing_partitions(limit).map_err(domain)?;
            let mut out = Output::new();
            let nontrivial = all.iter().filter(|p| !p.is_trivial()).count();
            out.say(format!("{} pairing partitions of {twograph} ({nontrivial} nontrivial), limit {limit}", all.len()));
            out.doc.add_twograph(&twograph, l);
            for (i, p) in all.iter().enumerate() {
                out.doc.add_partition(&format!("{twograph}.pairing{:03}", i + 1), PartitionTarget::TwoGraph(twograph.clone()), p);
            }
            out.put("partitions", json!(all.iter().map(partition_json).collect::<Vec<_>>()));
            (out, io, "enum-partitions")
        }
    };
    Ok((out, io.machine, cmd, io.output))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, machine, cmd, path)) => {
            let ok = out.ok;
            let text = out.render(cmd, machine);
            let written = match path {
                Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
