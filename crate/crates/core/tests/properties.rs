mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use textiles::format::{PartitionTarget, SpecDocument};
use textiles::graph::insplit_graph;
use textiles::moves::{base_from_tiles, derive_partitions, tiles_from_base, PartitionKind};
use textiles::random::{random_nontrivial_partition, random_partition, random_twograph, Params};
use textiles::shift::{
    boundary, enumerate_blocks, fill_from_bottom_right, fill_from_left_top, insplit_conjugacy_block_maps, lift_block,
    RectBlock,
};
use textiles::{TextileSystem, TwoGraph};

fn instance(seed: u64) -> (ChaCha8Rng, TwoGraph, TextileSystem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = random_twograph(&mut rng, &Params::default());
    let t = l.to_textile();
    (rng, l, t)
}

// re-check of admissibility straight from the adjacency rules
fn admissible(t: &TextileSystem, b: &RectBlock) -> bool {
    let f = t.tiles();
    (0..b.height()).all(|r| {
        (0..b.width()).all(|c| {
            let x = b.get(c, r);
            let h = c + 1 == b.width() || f.source(x) == f.range(b.get(c + 1, r));
            let v = r + 1 == b.height() || t.top().edge(x) == t.bottom().edge(b.get(c, r + 1));
            f.has_edge(x) && h && v
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverting_twice_is_identity(seed in any::<u64>()) {
        let (_, _, t) = instance(seed);
        prop_assert_eq!(t.inverted().inverted(), t);
    }

    #[test]
    fn textile_and_twograph_round_trip(seed in any::<u64>()) {
        let (_, l, t) = instance(seed);
        prop_assert!(t.is_lr());
        prop_assert_eq!(TwoGraph::from_textile(&t).unwrap(), l);
        prop_assert_eq!(TwoGraph::from_textile(&t).unwrap().to_textile(), t);
    }

    #[test]
    fn blocks_are_admissible_sorted_and_monotone(seed in any::<u64>(), w in 1usize..4, h in 1usize..4) {
        let (_, _, t) = instance(seed);
        let big = enumerate_blocks(&t, w + 1, h).unwrap();
        let small = enumerate_blocks(&t, w, h).unwrap();
        prop_assert!(small.windows(2).all(|p| p[0].cells() < p[1].cells()));
        for b in &big {
            prop_assert!(admissible(&t, b));
            prop_assert!(small.binary_search_by(|x| x.cells().cmp(b.crop(0, 0, w, h).cells())).is_ok());
            prop_assert!(small.binary_search_by(|x| x.cells().cmp(b.crop(1, 0, w, h).cells())).is_ok());
        }
    }

    #[test]
    fn inverse_system_has_transposed_blocks(seed in any::<u64>(), w in 1usize..4, h in 1usize..4) {
        let (_, _, t) = instance(seed);
        let mut flipped: Vec<RectBlock> = enumerate_blocks(&t, w, h).unwrap().iter().map(RectBlock::transpose).collect();
        flipped.sort_by(|a, b| a.cells().cmp(b.cells()));
        prop_assert_eq!(enumerate_blocks(&t.inverted(), h, w).unwrap(), flipped);
    }

    #[test]
    fn expand_map_commutes_with_shifts(seed in any::<u64>()) {
        let (mut rng, _, t) = instance(seed);
        let p = random_partition(&mut rng, t.tiles());
        let c = insplit_conjugacy_block_maps(&t, &p).unwrap();
        for b in enumerate_blocks(&t, 4, 2).unwrap() {
            let img = c.expand.apply(&b).unwrap();
            prop_assert_eq!(img.width(), 3);
            for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
                let shifted = c.expand.apply(&b.crop(dx, dy, 4 - dx, 2 - dy)).unwrap();
                prop_assert_eq!(shifted, img.crop(dx, dy, 3 - dx, 2 - dy));
            }
        }
    }

    #[test]
    fn lifted_blocks_are_enumerated(seed in any::<u64>(), w in 1usize..4, h in 1usize..4) {
        let (_, _, t) = instance(seed);
        let all = enumerate_blocks(&t, w, h).unwrap();
        for row in enumerate_blocks(&t, w, 1).unwrap().iter().take(5) {
            match lift_block(&t, row.cells(), h) {
                Ok(b) => prop_assert!(all.contains(&b)),
                Err(e) => {
                    let r = t.lifting_report();
                    prop_assert!(!(r.bottom_range_lifting || r.bottom_source_lifting) || !t.bottom().is_onto_vertices(t.base()), "{}", e);
                }
            }
        }
    }

    #[test]
    fn blocks_are_rebuilt_from_two_sides(seed in any::<u64>(), w in 1usize..4, h in 1usize..4) {
        let (_, l, t) = instance(seed);
        for b in enumerate_blocks(&t, w, h).unwrap() {
            let side = boundary(&t, &b);
            prop_assert_eq!(fill_from_left_top(&l, &side.left, &side.top), Some(b.clone()));
            prop_assert_eq!(fill_from_bottom_right(&l, &side.bottom, &side.right), Some(b.clone()));
        }
    }

    #[test]
    fn nontrivial_textile_insplit_is_never_lr(seed in any::<u64>()) {
        let (mut rng, _, t) = instance(seed);
        if let Some(p) = random_nontrivial_partition(&mut rng, t.tiles()) {
            prop_assert!(!t.insplit(&p).unwrap().system.is_lr());
        }
    }

    #[test]
    fn graph_insplit_sizes(seed in any::<u64>()) {
        let (mut rng, _, t) = instance(seed);
        let g = t.tiles();
        let p = random_partition(&mut rng, g);
        let split = insplit_graph(g, &p).unwrap();
        let vertices: usize = g.vertices().map(|v| p.count(v)).sum();
        let edges: usize = g.edges().map(|(_, e)| p.count(&e.source)).sum();
        prop_assert_eq!(split.graph.num_vertices(), vertices);
        prop_assert_eq!(split.graph.num_edges(), edges);
    }

    #[test]
    fn derived_partitions_meet_the_other_hypotheses(seed in any::<u64>()) {
        let (_, l, t) = instance(seed);
        for g in l.enumerate_pairing_partitions(8).unwrap() {
            let d = derive_partitions(&t, PartitionKind::Skeleton, &g).unwrap();
            prop_assert!(base_from_tiles(&t, &d.tiles).is_ok());
            prop_assert!(tiles_from_base(&t, &d.base).is_ok());
            // classes at one vertex have disjoint top images; equal tops give equal counts
            for v in t.tiles().vertices() {
                let imgs: Vec<Vec<&str>> = d.tiles.classes(v).iter().map(|c| c.iter().map(|x| t.top().edge(x)).collect()).collect();
                for i in 0..imgs.len() {
                    for j in i + 1..imgs.len() {
                        prop_assert!(imgs[i].iter().all(|x| !imgs[j].contains(x)));
                    }
                }
                for w in t.tiles().vertices() {
                    if t.top().vertex(v) == t.top().vertex(w) {
                        prop_assert_eq!(d.tiles.count(v), d.tiles.count(w));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_partitions_pass_the_pairing_check(seed in any::<u64>()) {
        let (_, l, _) = instance(seed);
        let iter = l.pairing_partitions().unwrap();
        let all = l.enumerate_pairing_partitions(1000).unwrap();
        prop_assert!(all.iter().any(|p| p.is_trivial()));
        prop_assert!((all.len() as u128) <= iter.total());
        for p in &all {
            prop_assert!(l.check_pairing(p).unwrap().is_empty());
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let (mut rng, l, t) = instance(seed);
        let mut doc = SpecDocument::default();
        doc.add_textile("T", &t);
        doc.add_twograph("L", &l);
        doc.add_partition("P", PartitionTarget::Graph("T.tiles".into()), &random_partition(&mut rng, t.tiles()));
        doc.add_blocks("B", "T", 2, 2, enumerate_blocks(&t, 2, 2).unwrap());
        let text = doc.to_text();
        let back = SpecDocument::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text.clone());
        prop_assert_eq!(back.textile("T").unwrap(), &t);
        prop_assert_eq!(&back.twographs["L"], &l);
    }
}
