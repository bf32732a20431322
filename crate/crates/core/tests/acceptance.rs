//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p textiles --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{corpus, fixture, Instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use textiles::graph::graphs_isomorphic;
use textiles::moves::{
    pipeline, roundtrip_equivalences, split_from_base, split_from_skeleton, split_from_tiles, PartitionKind,
};
use textiles::random::perturb;
use textiles::shift::{
    enumerate_blocks, enumerate_blocks_with, insplit_conjugacy_block_maps, lift_block, verify_conjugacy_on_blocks, RectBlock,
    SizeGuard,
};
use textiles::textile::{Map, Side};
use textiles::twograph::Color;
use textiles::TwoGraph;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const CORPUS: usize = 200;
const BROKEN: usize = 50;
const PAIRINGS_PER_INSTANCE: usize = 20;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn squares_of(t: &textiles::TextileSystem) -> Vec<String> {
    t.squares().iter().map(ToString::to_string).collect()
}

fn bouquet_split() -> Outcome {
    let doc = fixture("split_demo.spec");
    let t = doc.textile("T").unwrap();
    let split = t.insplit(doc.partition("P").unwrap()).map_err(|e| e.to_string())?;
    let want = [
        "e^1: left=u^1 top=a right=u^1 bottom=a",
        "f^1: left=v^2 top=b right=u^1 bottom=b",
        "g^1: left=v^1 top=a right=v^1 bottom=a",
        "g^2: left=v^1 top=a right=v^2 bottom=a",
        "h^1: left=u^1 top=b right=v^1 bottom=b",
        "h^2: left=u^1 top=b right=v^2 bottom=b",
    ];
    ensure!(squares_of(&split.system) == want, "squares {:?}", squares_of(&split.system));
    let r = split.system.lifting_report();
    ensure!(!r.is_lr(), "split system reported LR");
    let witness = r.failures.iter().find(|f| f.map == Map::Top && f.side == Side::Range && f.lifts == ["g^1", "g^2"]);
    ensure!(witness.is_some(), "no witness with lifts g^1, g^2");
    Ok(format!("6 squares exact; witness {}", witness.unwrap()))
}

fn four_move_example() -> Outcome {
    let doc = fixture("split_pipeline.spec");
    let t = doc.textile("T").unwrap();
    let l = &doc.twographs["L"];
    let g = doc.partition("G").unwrap();
    let built = TwoGraph::from_textile(t).map_err(|e| e.to_string())?;
    ensure!(&built == l, "2-graph of the system differs from the fixture");
    ensure!(built.num_squares() == 4, "expected 4 squares");

    let li = l.insplit(g).map_err(|e| e.to_string())?.twograph;
    let sk = li.skeleton();
    let nh = sk.edges_of(Color::Horizontal).count();
    let nv = sk.edges_of(Color::Vertical).count();
    ensure!((sk.graph.num_vertices(), nh, nv, li.num_squares()) == (3, 4, 4, 5), "insplit sizes off");
    let boundaries: Vec<String> = li.squares().map(|q| format!("{} {} {} {}", q.left, q.top, q.right, q.bottom)).collect();
    let want = [
        "f1^1 e1^1 f1^1 e1^1",
        "f2^1 e1^1 f1^1 e2^1",
        "f3^1 e2^1 f2^1 e3^1",
        "f3^2 e3^1 f3^1 e3^2",
        "f3^2 e3^2 f3^2 e3^2",
    ];
    ensure!(boundaries == want, "insplit squares {boundaries:?}");

    let r = pipeline(t, g).map_err(|e| e.to_string())?;
    let sizes = [
        r.stages[0].tiles().num_edges(),
        r.stages[1].tiles().num_vertices(),
        r.stages[2].tiles().num_edges(),
        r.stages[3].tiles().num_edges(),
        r.pruned.tiles().num_edges(),
    ];
    ensure!(sizes == [5, 3, 7, 7, 5], "stage sizes {sizes:?}");
    let cmp = r.compare_blocks((3, 3), &SizeGuard::default()).map_err(|e| e.to_string())?;
    ensure!(cmp.equal(), "block sets differ: {:?}", cmp.first_difference);
    ensure!(graphs_isomorphic(r.stages[3].base(), r.target.base()).is_none(), "base graphs unexpectedly isomorphic");
    Ok(format!("sizes {sizes:?}; block sets equal up to 3x3; base graphs not isomorphic"))
}

fn rigid_pairings() -> Outcome {
    let doc = fixture("rigid_pairs.spec");
    let all = doc.twographs["L"].enumerate_pairing_partitions(PAIRINGS_PER_INSTANCE).map_err(|e| e.to_string())?;
    ensure!(all.iter().all(|p| p.is_trivial()), "nontrivial pairing partition found");
    Ok(format!("{} partition(s), all trivial", all.len()))
}

fn insplit_removes_lr(c: &[Instance]) -> Outcome {
    for i in c {
        let split = i.system.insplit(&i.partition).map_err(|e| format!("seed {}: {e}", i.seed))?;
        ensure!(!split.system.is_lr(), "seed {}: insplit is still LR", i.seed);
    }
    Ok(format!("{} instances, 0 counterexamples", c.len()))
}

fn insplit_conjugacy(c: &[Instance]) -> Outcome {
    let guard = SizeGuard::from_env();
    let mut blocks = 0;
    for i in c {
        let m = insplit_conjugacy_block_maps(&i.system, &i.partition).map_err(|e| format!("seed {}: {e}", i.seed))?;
        let rep = verify_conjugacy_on_blocks(&m.insplit.system, &i.system, &m.collapse, &m.expand, (4, 4), &guard)
            .map_err(|e| format!("seed {}: {e}", i.seed))?;
        ensure!(rep.passed(), "seed {}: {}", i.seed, rep.counterexample.unwrap());
        blocks += rep.blocks_checked;
    }
    Ok(format!("{} instances, {blocks} blocks checked up to 4x4, 0 counterexamples", c.len()))
}

fn lr_iff_twograph(c: &[Instance]) -> Outcome {
    let mut broken = 0;
    let mut broken_lr = 0;
    let mut seed = 10_000;
    for i in c {
        let built = TwoGraph::from_textile(&i.system).map_err(|e| format!("seed {}: {e}", i.seed))?;
        ensure!(built == i.twograph, "seed {}: 2-graph round trip differs", i.seed);
        ensure!(built.to_textile() == i.system, "seed {}: textile round trip differs", i.seed);
    }
    while broken < BROKEN {
        let i = &c[broken % c.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let Some(t) = perturb(&mut rng, &i.system) else { continue };
        broken += 1;
        let lr = t.is_lr();
        broken_lr += usize::from(lr);
        ensure!(TwoGraph::from_textile(&t).is_ok() == lr, "perturbed seed {seed}: LR {lr} disagrees with 2-graph build");
        if lr {
            ensure!(TwoGraph::from_textile(&t).unwrap().to_textile() == t, "perturbed seed {seed}: round trip differs");
        }
    }
    Ok(format!("{} corpus + {broken} perturbed ({broken_lr} still LR), 0 counterexamples", c.len()))
}

fn essential_agrees(c: &[Instance]) -> Outcome {
    let mut essential = 0;
    let mut checked = 0;
    for i in c {
        // the same 2-graph with one extra isolated vertex is not essential
        let mut sk = i.twograph.skeleton().clone();
        sk.graph.add_vertex("isolated").map_err(|e| e.to_string())?;
        let padded = TwoGraph::new(sk, i.twograph.squares().cloned().collect()).map_err(|e| e.to_string())?;
        for l in [&i.twograph, &padded] {
            let t = l.to_textile();
            ensure!(t.is_essential() == l.is_essential(), "seed {}: essentiality differs", i.seed);
            essential += usize::from(t.is_essential());
            checked += 1;
        }
    }
    Ok(format!("{checked} systems ({essential} essential), all agree"))
}

fn split_constructions(c: &[Instance]) -> Outcome {
    let mut runs = 0;
    let mut nontrivial = 0;
    for i in c {
        let t = &i.system;
        let parts = i.twograph.enumerate_pairing_partitions(PAIRINGS_PER_INSTANCE).map_err(|e| format!("seed {}: {e}", i.seed))?;
        for g in &parts {
            let fail = |e: textiles::moves::MovesError| format!("seed {}: {e}", i.seed);
            let a = split_from_skeleton(t, g).map_err(fail)?;
            let b = split_from_tiles(t, &a.partitions.tiles).map_err(fail)?;
            let d = split_from_base(t, &a.partitions.base).map_err(fail)?;
            ensure!(a.system == b.system && a.system == d.system, "seed {}: constructions differ", i.seed);
            for s in [&a.system, &b.system, &d.system] {
                ensure!(s.is_lr(), "seed {}: split system not LR", i.seed);
            }
            let target = i.twograph.insplit(g).map_err(|e| format!("seed {}: {e}", i.seed))?.twograph;
            ensure!(TwoGraph::from_textile(&a.system).ok() == Some(target), "seed {}: 2-graph differs from insplit", i.seed);
            for (kind, input) in [
                (PartitionKind::Skeleton, g),
                (PartitionKind::Tiles, &a.partitions.tiles),
                (PartitionKind::Base, &a.partitions.base),
            ] {
                let rep = roundtrip_equivalences(t, kind, input).map_err(fail)?;
                let bad = rep.checks.iter().find(|x| !x.passed);
                ensure!(bad.is_none(), "seed {}: {kind} round trip: {:?}", i.seed, bad.unwrap());
            }
            runs += 1;
            nontrivial += usize::from(!g.is_trivial());
        }
    }
    Ok(format!("{} instances, {runs} pairing partitions ({nontrivial} nontrivial), 0 counterexamples", c.len()))
}

fn blocks_nonempty(c: &[Instance]) -> Outcome {
    let guard = SizeGuard::from_env();
    let mut eligible = 0;
    let mut lifted = 0;
    for i in c {
        let t = &i.system;
        let r = t.lifting_report();
        if !r.bottom_range_lifting || !t.bottom().is_onto_vertices(t.base()) {
            continue;
        }
        eligible += 1;
        for w in 1..=4 {
            let rows = enumerate_blocks_with(t, w, 1, &guard).map_err(|e| e.to_string())?;
            ensure!(!rows.is_empty(), "seed {}: no {w}x1 blocks", i.seed);
            for h in 1..=4 {
                let all = enumerate_blocks_with(t, w, h, &guard).map_err(|e| e.to_string())?;
                ensure!(!all.is_empty(), "seed {}: no {w}x{h} blocks", i.seed);
                for row in rows.iter().take(3) {
                    let b = lift_block(t, row.cells(), h).map_err(|e| format!("seed {}: {e}", i.seed))?;
                    ensure!(all.binary_search_by(|x| x.cells().cmp(b.cells())).is_ok(), "seed {}: lifted block [{b}] not enumerated", i.seed);
                    lifted += 1;
                }
            }
        }
    }
    ensure!(eligible > 0, "no corpus instance meets the hypotheses");
    Ok(format!("{eligible} eligible instances, all sizes up to 4x4 nonempty, {lifted} lifted blocks found"))
}

fn inversion(c: &[Instance]) -> Outcome {
    for i in c {
        let t = &i.system;
        let inv = t.inverted();
        ensure!(inv.inverted() == *t, "seed {}: double inversion differs", i.seed);
        for w in 1..=3 {
            for h in 1..=4 {
                let mut flipped: Vec<RectBlock> = enumerate_blocks(t, w, h).map_err(|e| e.to_string())?.iter().map(RectBlock::transpose).collect();
                flipped.sort_by(|a, b| a.cells().cmp(b.cells()));
                ensure!(enumerate_blocks(&inv, h, w).map_err(|e| e.to_string())? == flipped, "seed {}: {w}x{h} blocks not transposed", i.seed);
            }
        }
    }
    Ok(format!("{} instances, sizes up to 3x4", c.len()))
}

fn main() {
    let start = Instant::now();
    let c = corpus(CORPUS);
    let criteria: Vec<Criterion> = vec![
        ("bouquet textile insplit: six squares and LR witness", Box::new(bouquet_split)),
        ("four-move pipeline example end to end", Box::new(four_move_example)),
        ("rigid 2-graph has only trivial pairing partitions", Box::new(rigid_pairings)),
        ("nontrivial textile insplit is never LR", Box::new(|| insplit_removes_lr(&c))),
        ("insplit block maps are mutually inverse up to 4x4", Box::new(|| insplit_conjugacy(&c))),
        ("2-graph exists exactly for LR systems; round trips", Box::new(|| lr_iff_twograph(&c))),
        ("essentiality of system and 2-graph agree", Box::new(|| essential_agrees(&c))),
        ("three split constructions coincide", Box::new(|| split_constructions(&c))),
        ("blocks nonempty and lifted blocks enumerated", Box::new(|| blocks_nonempty(&c))),
        ("inversion is an involution and transposes blocks", Box::new(|| inversion(&c))),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{secs:.2}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
