use std::collections::HashMap;

use rayon::prelude::*;

use super::{commutation_theorem_check, SolutionPair, SpectralError};
use crate::morphism::{TameGen, TameWord};
use crate::scalars::Rational;

/// Two words producing the same pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub first: TameWord,
    pub second: TameWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub distinct_pairs: usize,
    /// First word reaching each distinct pair, in breadth-first order.
    pub words: Vec<TameWord>,
    pub collisions: Vec<Collision>,
    /// Deepest level fully expanded.
    pub explored_depth: u32,
    /// False when the pair budget stopped the search early.
    pub complete: bool,
}

struct Node {
    word: TameWord,
    pair: SolutionPair<Rational>,
}

/// Breadth-first search over words in `gens` up to length `depth`.
///
/// Every visited pair is re-verified: its relation must still vanish and the
/// operators must commute. Children of one level are computed in parallel
/// but merged in word order, so reports do not depend on scheduling.
pub fn orbit_search(
    start: &SolutionPair<Rational>,
    gens: &[TameGen],
    depth: u32,
    max_pairs: usize,
) -> Result<OrbitReport, SpectralError> {
    let mut seen: HashMap<String, TameWord> = HashMap::new();
    seen.insert(start.canonical_key(), TameWord::default());
    let mut words = vec![TameWord::default()];
    let mut collisions = Vec::new();
    let mut frontier = vec![Node { word: TameWord::default(), pair: start.clone() }];
    let mut explored_depth = 0;
    for level in 1..=depth {
        let children: Vec<Result<(String, Node), SpectralError>> = frontier
            .par_iter()
            .flat_map_iter(|node| gens.iter().map(move |g| (node, g)))
            .map(|(node, g)| {
                let p = g.apply(node.pair.p());
                let q = g.apply(node.pair.q());
                let pair = SolutionPair::new(p, q, node.pair.relation().clone())?;
                commutation_theorem_check(&pair)?;
                let mut word = node.word.clone();
                word.0.push(g.clone());
                Ok((pair.canonical_key(), Node { word, pair }))
            })
            .collect();
        let mut next = Vec::new();
        for child in children {
            let (key, node) = child?;
            match seen.get(&key) {
                Some(first) => collisions.push(Collision { first: first.clone(), second: node.word }),
                None => {
                    if seen.len() >= max_pairs {
                        return Ok(OrbitReport {
                            distinct_pairs: seen.len(),
                            words,
                            collisions,
                            explored_depth,
                            complete: false,
                        });
                    }
                    seen.insert(key, node.word.clone());
                    words.push(node.word.clone());
                    next.push(node);
                }
            }
        }
        frontier = next;
        explored_depth = level;
    }
    Ok(OrbitReport { distinct_pairs: seen.len(), words, collisions, explored_depth, complete: true })
}
