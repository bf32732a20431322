//! Seeded generators for small 2-graphs, partitions and broken textile systems.
//!
//! A 2-graph is drawn by picking commuting adjacency matrices for the two
//! colors and then pairing the 2-colored paths of each shape at random.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DirectedGraph, InsplitPartition};
use crate::textile::TextileSystem;
use crate::twograph::{Color, CommutingSquare, TwoColoredGraph, TwoGraph};

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub max_vertices: usize,
    pub max_entry: usize,
    pub max_squares: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { max_vertices: 3, max_entry: 2, max_squares: 12 }
    }
}

type Matrix = Vec<Vec<usize>>;

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn essential(a: &Matrix) -> bool {
    let n = a.len();
    (0..n).all(|i| a[i].iter().any(|&x| x > 0) && (0..n).any(|j| a[j][i] > 0))
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| usize::from(i == j)).collect()).collect()
}

fn lin(a: usize, x: &Matrix, b: usize, y: &Matrix) -> Matrix {
    x.iter().zip(y).map(|(r, s)| r.iter().zip(s).map(|(p, q)| a * p + b * q).collect()).collect()
}

/// A commuting pair of essential matrices indexed `[range][source]`.
fn commuting_pair<R: Rng>(rng: &mut R, p: &Params) -> (Matrix, Matrix) {
    loop {
        let n = rng.gen_range(1..=p.max_vertices);
        let id = identity(n);
        let (a, b) = match rng.gen_range(0..4) {
            0 => {
                let a = vec![vec![rng.gen_range(1..=p.max_entry)]];
                let b = vec![vec![rng.gen_range(1..=p.max_entry)]];
                (a, b)
            }
            1 => {
                // both polynomials in one random matrix
                let c: Matrix = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=1)).collect()).collect();
                let a = lin(rng.gen_range(0..=1), &id, rng.gen_range(1..=p.max_entry), &c);
                let b = lin(rng.gen_range(0..=1), &id, 1, &c);
                (a, b)
            }
            2 => {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let pm: Matrix = (0..n).map(|i| (0..n).map(|j| usize::from(perm[i] == j)).collect()).collect();
                let k = rng.gen_range(0..=1);
                let b = if k == 0 { lin(1, &id, 1, &pm) } else { mul(&pm, &pm) };
                (lin(0, &id, rng.gen_range(1..=p.max_entry), &pm), b)
            }
            _ => {
                let mut found = None;
                for _ in 0..200 {
                    let r = |rng: &mut R| -> Matrix {
                        (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=p.max_entry)).collect()).collect()
                    };
                    let (a, b) = (r(rng), r(rng));
                    if mul(&a, &b) == mul(&b, &a) && essential(&a) && essential(&b) {
                        found = Some((a, b));
                        break;
                    }
                }
                match found {
                    Some(x) => x,
                    None => continue,
                }
            }
        };
        let squares: usize = mul(&b, &a).iter().flatten().sum();
        if essential(&a) && essential(&b) && mul(&a, &b) == mul(&b, &a) && squares <= p.max_squares && squares > 0 {
            return (a, b);
        }
    }
}

/// A random essential 2-graph. Vertices are `v1…`, horizontal edges `e1…`,
/// vertical edges `f1…`, squares `s1…`.
pub fn random_twograph<R: Rng>(rng: &mut R, p: &Params) -> TwoGraph {
    let (a, b) = commuting_pair(rng, p);
    let n = a.len();
    let v = |i: usize| format!("v{}", i + 1);
    let mut sk = TwoColoredGraph::default();
    for i in 0..n {
        sk.graph.add_vertex(v(i)).unwrap();
    }
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for (m, color, prefix, list) in [(&a, Color::Horizontal, "e", &mut horizontal), (&b, Color::Vertical, "f", &mut vertical)] {
        for (r, row) in m.iter().enumerate() {
            for (s, &count) in row.iter().enumerate() {
                for _ in 0..count {
                    let id = format!("{prefix}{}", list.len() + 1);
                    sk.graph.add_edge(id.clone(), v(s), v(r)).unwrap();
                    sk.colors.insert(id.clone(), color);
                    list.push((id, s, r));
                }
            }
        }
    }
    let mut squares = Vec::new();
    for u in 0..n {
        for x in 0..n {
            // left·top paths from x to u, and bottom·right paths
            let mut lefts: Vec<(&str, &str)> = Vec::new();
            for (w, ws, wr) in &vertical {
                for (e, es, er) in &horizontal {
                    if *wr == u && ws == er && *es == x {
                        lefts.push((w, e));
                    }
                }
            }
            let mut rights: Vec<(&str, &str)> = Vec::new();
            for (e, es, er) in &horizontal {
                for (w, ws, wr) in &vertical {
                    if *er == u && es == wr && *ws == x {
                        rights.push((e, w));
                    }
                }
            }
            assert_eq!(lefts.len(), rights.len(), "commuting matrices give equal path counts");
            rights.shuffle(rng);
            for ((left, top), (bottom, right)) in lefts.into_iter().zip(rights) {
                squares.push(CommutingSquare {
                    label: format!("s{}", squares.len() + 1),
                    left: left.into(),
                    top: top.into(),
                    right: right.into(),
                    bottom: bottom.into(),
                });
            }
        }
    }
    TwoGraph::new(sk, squares).expect("random pairing completes every path exactly once")
}

/// A random partition of the incoming edges at each vertex.
pub fn random_partition<R: Rng>(rng: &mut R, g: &DirectedGraph) -> InsplitPartition {
    let mut p = InsplitPartition::new();
    for v in g.vertices() {
        let into = g.edges_into(v);
        if into.is_empty() {
            p.set(v, vec![BTreeSet::new()]);
            continue;
        }
        let k = rng.gen_range(1..=into.len().min(3));
        let mut classes = vec![BTreeSet::new(); k];
        for e in into {
            classes[rng.gen_range(0..k)].insert(e.to_string());
        }
        classes.retain(|c| !c.is_empty());
        p.set(v, classes);
    }
    p
}

/// A random partition with at least two classes somewhere, if the graph
/// has a vertex with two incoming edges.
pub fn random_nontrivial_partition<R: Rng>(rng: &mut R, g: &DirectedGraph) -> Option<InsplitPartition> {
    let splittable: Vec<&str> = g.vertices().filter(|v| g.edges_into(v).len() >= 2).collect();
    let &v = splittable.choose(rng)?;
    let mut p = random_partition(rng, g);
    if p.is_trivial() {
        let into = g.edges_into(v);
        let cut = rng.gen_range(1..into.len());
        let first: BTreeSet<String> = into[..cut].iter().map(|s| s.to_string()).collect();
        let second: BTreeSet<String> = into[cut..].iter().map(|s| s.to_string()).collect();
        p.set(v, vec![first, second]);
    }
    Some(p)
}

/// A perturbed copy of a textile system that is still a valid textile
/// system: one tile dropped, one tile's bottom moved to a parallel edge,
/// or one extra tile differing from an existing one only in its bottom.
pub fn perturb<R: Rng>(rng: &mut R, t: &TextileSystem) -> Option<TextileSystem> {
    let tiles: Vec<String> = t.tiles().edge_ids().map(String::from).collect();
    let parallel = |e: &str| -> Vec<String> {
        let ends = t.base().ends(e).unwrap();
        t.base().edges().filter(|(x, y)| *x != e && *y == ends).map(|(x, _)| x.to_string()).collect()
    };
    for _ in 0..20 {
        let f = tiles.choose(rng)?.clone();
        let (mut g, mut top, mut bottom) = (t.tiles().clone(), t.top().clone(), t.bottom().clone());
        match rng.gen_range(0..3) {
            0 => {
                let mut h = DirectedGraph::new();
                for v in g.vertices() {
                    h.add_vertex(v).unwrap();
                }
                for (x, ends) in g.edges().filter(|(x, _)| *x != f) {
                    h.add_edge(x, ends.source.clone(), ends.range.clone()).unwrap();
                }
                g = h;
                top.edge_map.remove(&f);
                bottom.edge_map.remove(&f);
            }
            k => {
                let alt = parallel(bottom.edge(&f));
                let Some(e) = alt.choose(rng) else { continue };
                let target = if k == 1 {
                    f.clone()
                } else {
                    let ends = g.ends(&f).unwrap().clone();
                    let extra = format!("{f}x");
                    g.add_edge(extra.clone(), ends.source, ends.range).ok()?;
                    top.edge_map.insert(extra.clone(), top.edge(&f).to_string());
                    extra
                };
                bottom.edge_map.insert(target, e.clone());
            }
        }
        if let Ok(s) = TextileSystem::new(g, t.base().clone(), top, bottom) {
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_twographs_are_essential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let l = random_twograph(&mut rng, &Params::default());
            assert!(l.is_essential());
            assert!(l.num_squares() <= 12);
        }
    }

    #[test]
    fn perturbed_systems_stay_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut made = 0;
        for _ in 0..30 {
            let t = random_twograph(&mut rng, &Params::default()).to_textile();
            if perturb(&mut rng, &t).is_some() {
                made += 1;
            }
        }
        assert!(made > 20);
    }
}
