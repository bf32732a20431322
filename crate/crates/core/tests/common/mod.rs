#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use textiles::format::SpecDocument;
use textiles::random::{random_nontrivial_partition, random_twograph, Params};
use textiles::{InsplitPartition, TextileSystem, TwoGraph};

pub fn fixture(name: &str) -> SpecDocument {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    SpecDocument::parse(&text).unwrap_or_else(|e| panic!("{path}: {e:?}"))
}

pub fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// One random instance: a 2-graph, its textile system and a nontrivial
/// partition of the tiles.
pub struct Instance {
    pub seed: u64,
    pub twograph: TwoGraph,
    pub system: TextileSystem,
    pub partition: InsplitPartition,
}

/// `n` instances drawn from consecutive seeds, skipping systems with no
/// vertex to split.
pub fn corpus(n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let twograph = random_twograph(&mut rng, &Params::default());
        let system = twograph.to_textile();
        if let Some(partition) = random_nontrivial_partition(&mut rng, system.tiles()) {
            out.push(Instance { seed, twograph, system, partition });
        }
        seed += 1;
    }
    out
}
