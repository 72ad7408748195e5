use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{chain_length, require_positive, PathSeq};
use crate::error::{Error, Result};
use crate::exact::{int, round_nearest, Rational};
use crate::witness::{LoopWitness, Provenance, QValue, WeightSquared};

/// Bounds for [`search_nonunit_loop`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest last index `k` of a generated sequence.
    pub max_depth: usize,
    /// Half-width of the candidate range around `round(−1/(q·c))`.
    pub window: u64,
    /// Maximum number of generated nodes.
    pub node_budget: usize,
    /// Cut branches that cannot fit the alternating ±1 chain (only for 2 < q < 4).
    pub use_chain_pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_depth: 6, window: 4, node_budget: 1_000_000, use_chain_pruning: true }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || self.window == 0 || self.node_budget == 0 {
            return Err(Error::InvalidInput(
                "max_depth, window and node_budget must all be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub witness: Option<LoopWitness>,
    /// Nodes generated before returning.
    pub nodes: usize,
    pub budget_exhausted: bool,
}

struct Node {
    parent: Option<usize>,
    m: BigInt,
    c: Rational,
    w2: Rational,
}

/// Breadth-first search over prefix values for a loop of non-unit weight.
///
/// Nodes are prefix values `c`; a node expands to `m + 1/(q·c)` for non-zero
/// integers `m` within `window` of `round(−1/(q·c))`, which steers the value
/// back towards zero. First entries run over `1..=window` only, since negating
/// a whole sequence preserves its weight.
///
/// Two certificates are recognised:
/// * reaching `c = 0` with `w² ≠ 1` (provenance `search`);
/// * reaching one prefix value along two paths with different `w²`
///   (provenance `duplicate-c`). The pair `A`, `B` is turned into the loop
///   `A ++ (0) ++ reverse(−B)`, which walks back from the common value.
///
/// Every witness is re-verified from scratch before it is returned. An empty
/// result says nothing about whether q is forbidden.
pub fn search_nonunit_loop(q: &Rational, cfg: &SearchConfig) -> Result<SearchOutcome> {
    require_positive(q)?;
    cfg.validate()?;
    let chain = if cfg.use_chain_pruning && *q > int(2) && *q < int(4) {
        Some(chain_length(q)?)
    } else {
        None
    };
    let window = BigInt::from(cfg.window);
    let mut arena: Vec<Node> = Vec::new();
    // prefix value -> (w², first node that reached it)
    let mut seen: HashMap<Rational, (Rational, usize)> = HashMap::new();
    let mut frontier = Vec::new();
    let mut nodes = 0usize;
    let exhausted = |nodes| SearchOutcome { witness: None, nodes, budget_exhausted: true };

    for m0 in 1..=cfg.window {
        nodes += 1;
        if nodes > cfg.node_budget {
            return Ok(exhausted(nodes - 1));
        }
        let c = Rational::from_integer(BigInt::from(m0));
        let id = arena.len();
        arena.push(Node { parent: None, m: BigInt::from(m0), c: c.clone(), w2: Rational::one() });
        seen.insert(c, (Rational::one(), id));
        frontier.push(id);
    }

    for depth in 0..cfg.max_depth {
        let mut next_frontier = Vec::new();
        for &id in &frontier {
            let (c, w2) = (arena[id].c.clone(), arena[id].w2.clone());
            if let Some(chain) = chain {
                // a proper loop through a node with |c| > 1 still needs the full chain after it
                if c.abs() > int(1) && depth + 1 + chain > cfg.max_depth {
                    continue;
                }
            }
            let inv = (q * &c).recip();
            let step_w2 = &w2 * q * &c * &c;
            let center = round_nearest(&-&inv);
            let mut m = &center - &window;
            while m <= &center + &window {
                if m.is_zero() {
                    m += 1;
                    continue;
                }
                nodes += 1;
                if nodes > cfg.node_budget {
                    return Ok(exhausted(nodes - 1));
                }
                let next = &inv + Rational::from_integer(m.clone());
                if next.is_zero() {
                    if !step_w2.is_one() {
                        let mut seq = path_to(&arena, id);
                        seq.push(m.clone());
                        if let Some(w) = verified(q, seq, Provenance::Search) {
                            return Ok(SearchOutcome { witness: Some(w), nodes, budget_exhausted: false });
                        }
                    }
                    m += 1;
                    continue;
                }
                match seen.get(&next) {
                    Some((other_w2, other)) if *other_w2 != step_w2 => {
                        let mut seq = path_to(&arena, id);
                        seq.push(m.clone());
                        let back = path_to(&arena, *other);
                        seq.push(BigInt::zero());
                        seq.extend(back.iter().rev().map(|x| -x));
                        if let Some(w) = verified(q, seq, Provenance::DuplicateC) {
                            return Ok(SearchOutcome { witness: Some(w), nodes, budget_exhausted: false });
                        }
                    }
                    Some(_) => {}
                    None => {
                        let nid = arena.len();
                        arena.push(Node { parent: Some(id), m: m.clone(), c: next.clone(), w2: step_w2.clone() });
                        seen.insert(next, (step_w2.clone(), nid));
                        next_frontier.push(nid);
                    }
                }
                m += 1;
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(SearchOutcome { witness: None, nodes, budget_exhausted: false })
}

fn path_to(arena: &[Node], mut id: usize) -> Vec<BigInt> {
    let mut out = vec![arena[id].m.clone()];
    while let Some(p) = arena[id].parent {
        out.push(arena[p].m.clone());
        id = p;
    }
    out.reverse();
    out
}

fn verified(q: &Rational, seq: Vec<BigInt>, provenance: Provenance) -> Option<LoopWitness> {
    let loop_seq = PathSeq::new(seq).ok()?;
    let w2 = super::weight_squared(q, &loop_seq).ok()?;
    let w = LoopWitness {
        q: QValue::Rational(q.clone()),
        loop_seq,
        weight_squared: WeightSquared::Exact(w2),
        provenance,
        verified: false,
    };
    w.verify().then_some(LoopWitness { verified: true, ..w })
}
