//! Deterministic instance generators: seeded committees, outcome tables,
//! partitions, quota-game inputs, and small well-formed arenas.
//!
//! Everything here is driven by a [`ChaCha8Rng`] so that a `(seed, index)`
//! pair pins an instance exactly, across platforms and releases; the
//! test-suite and the reproduction commands rely on that stability.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::committee::{Committee, ScfTable};
use crate::game::{Arena, ChoiceLabel, InfoSetSpec, NodeId, NodeSpec};
use crate::model::{
    AgentId, Alternative, Coalition, OrderedPartition, Partition, Preference, QuotaVector,
};

/// The reproducible generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random committee over `n` agents (`1 ≤ n ≤ 20`): a handful of random
/// non-empty coalitions reduced to their minimal antichain.
pub fn random_committee(rng: &mut ChaCha8Rng, n: u32) -> Committee {
    let count = rng.gen_range(1..=(2 * n as usize));
    let family: Vec<Coalition> = (0..count)
        .map(|_| Coalition::from_bits(rng.gen_range(1..(1u64 << n))))
        .collect();
    Committee::minimalize(n, family).expect("non-empty coalitions form a committee")
}

/// A uniformly random outcome table over `n` agents.
pub fn random_table(rng: &mut ChaCha8Rng, n: u32) -> ScfTable {
    let outcomes: Vec<Alternative> = (0..(1u64 << n))
        .map(|_| {
            if rng.gen_bool(0.5) {
                Alternative::x()
            } else {
                Alternative::y()
            }
        })
        .collect();
    ScfTable::new(n, outcomes).expect("one outcome per supporter set")
}

/// A random partition of `{1, …, n}`, drawn via a uniform restricted
/// growth string (deterministic coverage, not uniform over partitions).
pub fn random_partition(rng: &mut ChaCha8Rng, n: u32) -> Partition {
    let mut assignment = vec![0usize; n as usize];
    let mut max_block = 0usize;
    for slot in assignment.iter_mut().skip(1) {
        let b = rng.gen_range(0..=max_block + 1);
        *slot = b;
        max_block = max_block.max(b);
    }
    let mut lists: Vec<Vec<AgentId>> = vec![Vec::new(); max_block + 1];
    for (ix, &b) in assignment.iter().enumerate() {
        lists[b].push(ix as u32 + 1);
    }
    Partition::from_lists(n, lists).expect("growth string covers every agent")
}

/// A random quota-game input: a random partition in shuffled block order
/// with quotas drawn from the compatible ranges.
pub fn random_quota_instance(
    rng: &mut ChaCha8Rng,
    n: u32,
) -> (OrderedPartition, QuotaVector) {
    let p = random_partition(rng, n);
    let mut blocks: Vec<Coalition> = p.blocks().to_vec();
    blocks.shuffle(rng);
    let s_o = OrderedPartition::new(n, blocks).expect("same blocks, new order");
    let k = s_o.k();
    let quotas: Vec<u32> = s_o
        .blocks()
        .iter()
        .enumerate()
        .map(|(ix, b)| {
            if ix + 1 == k {
                rng.gen_range(0..b.size())
            } else {
                rng.gen_range(0..=b.size())
            }
        })
        .collect();
    (s_o, QuotaVector::new(quotas))
}

/// The three preferences over `{x, y}`: the two strict orders and full
/// indifference.
pub fn all_weak_orders() -> Vec<Preference> {
    vec![
        Preference::p_x(),
        Preference::p_y(),
        Preference::new(vec![vec![Alternative::x(), Alternative::y()]])
            .expect("a single full tier"),
    ]
}

/// A random well-formed arena over `n` agents with at most `max_nodes`
/// nodes (`max_nodes ≥ 3`): a random tree of 2- and 3-way token choices,
/// random owners, terminal outcomes in `{x, y}`, and information sets
/// pooled at random among same-owner, same-arity nodes without ever
/// pooling a node with its own ancestor.
pub fn random_small_arena(rng: &mut ChaCha8Rng, n: u32, max_nodes: usize) -> Arena {
    assert!(max_nodes >= 3, "need room for a root and two children");

    // Grow the tree: each placed decision node opens `arity` child slots,
    // each slot is filled by a decision node while the budget allows it
    // (every open slot still needs at least a terminal).
    struct Draft {
        owner: Option<AgentId>,
        parent: Option<(NodeId, usize)>,
        arity: usize,
    }
    let root_arity = rng.gen_range(2..=3usize.min(max_nodes - 1));
    let mut drafts = vec![Draft {
        owner: Some(rng.gen_range(1..=n)),
        parent: None,
        arity: root_arity,
    }];
    let mut slots: Vec<(NodeId, usize)> = (0..root_arity).map(|c| (0, c)).collect();
    while !slots.is_empty() {
        let slot = slots.swap_remove(rng.gen_range(0..slots.len()));
        let open = slots.len();
        let placed = drafts.len();
        let arity = rng.gen_range(2..=3usize);
        let can_branch = placed + 1 + open + arity <= max_nodes;
        if can_branch && rng.gen_bool(0.5) {
            let id = drafts.len();
            drafts.push(Draft {
                owner: Some(rng.gen_range(1..=n)),
                parent: Some(slot),
                arity,
            });
            for c in 0..arity {
                slots.push((id, c));
            }
        } else {
            drafts.push(Draft { owner: None, parent: Some(slot), arity: 0 });
        }
    }

    // Pool decision nodes into information sets: same owner and arity, and
    // never together with an ancestor or descendant.
    let parent_of: Vec<Option<NodeId>> =
        drafts.iter().map(|d| d.parent.map(|(p, _)| p)).collect();
    let related = |a: NodeId, b: NodeId| -> bool {
        let on_path = |mut z: NodeId, target: NodeId| -> bool {
            loop {
                if z == target {
                    return true;
                }
                match parent_of[z] {
                    Some(p) => z = p,
                    None => return false,
                }
            }
        };
        on_path(a, b) || on_path(b, a)
    };
    let mut decision_ids: Vec<NodeId> = (0..drafts.len())
        .filter(|&ix| drafts[ix].owner.is_some())
        .collect();
    decision_ids.shuffle(rng);
    let mut pools: Vec<(AgentId, usize, Vec<NodeId>)> = Vec::new();
    let mut pool_of = vec![usize::MAX; drafts.len()];
    for &z in &decision_ids {
        let owner = drafts[z].owner.expect("decision node");
        let arity = drafts[z].arity;
        let candidates: Vec<usize> = pools
            .iter()
            .enumerate()
            .filter(|(_, (o, a, members))| {
                *o == owner && *a == arity && members.iter().all(|&m| !related(m, z))
            })
            .map(|(ix, _)| ix)
            .collect();
        let joined = if !candidates.is_empty() && rng.gen_bool(0.5) {
            candidates[rng.gen_range(0..candidates.len())]
        } else {
            pools.push((owner, arity, Vec::new()));
            pools.len() - 1
        };
        pools[joined].2.push(z);
        pool_of[z] = joined;
    }

    let specs: Vec<NodeSpec> = drafts
        .iter()
        .enumerate()
        .map(|(ix, d)| NodeSpec {
            owner: d.owner,
            parent: d
                .parent
                .map(|(p, c)| (p, ChoiceLabel::token(&format!("c{c}")))),
            info_set: if d.owner.is_some() { Some(pool_of[ix]) } else { None },
            outcome: if d.owner.is_none() {
                Some(if rng.gen_bool(0.5) {
                    Alternative::x()
                } else {
                    Alternative::y()
                })
            } else {
                None
            },
        })
        .collect();
    let iset_specs: Vec<InfoSetSpec> = pools
        .into_iter()
        .map(|(owner, arity, nodes)| InfoSetSpec {
            owner,
            nodes,
            choices: (0..arity)
                .map(|c| ChoiceLabel::token(&format!("c{c}")))
                .collect(),
        })
        .collect();
    let arena = Arena::from_parts(
        n,
        vec![Alternative::x(), Alternative::y()],
        specs,
        iset_specs,
    )
    .expect("construction is referentially sound");
    debug_assert!(
        arena.validate().is_empty(),
        "sampled arena violates an invariant: {:?}",
        arena.validate()
    );
    arena
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut a = rng(7);
        let mut b = rng(7);
        assert_eq!(random_committee(&mut a, 5), random_committee(&mut b, 5));
        assert_eq!(random_partition(&mut a, 6), random_partition(&mut b, 6));
        assert_eq!(random_quota_instance(&mut a, 6), random_quota_instance(&mut b, 6));
        let t1 = random_table(&mut a, 4);
        let t2 = random_table(&mut b, 4);
        assert_eq!(t1, t2);
        assert_eq!(random_small_arena(&mut a, 3, 12), random_small_arena(&mut b, 3, 12));
    }

    #[test]
    fn sampled_arenas_always_validate() {
        let mut r = rng(0);
        for _ in 0..200 {
            let n = r.gen_range(1..=4);
            let max_nodes = r.gen_range(3..=12);
            let arena = random_small_arena(&mut r, n, max_nodes);
            assert!(arena.validate().is_empty());
            assert!(arena.nodes().len() <= max_nodes);
        }
    }

    #[test]
    fn sampled_quota_instances_are_compatible() {
        let mut r = rng(1);
        for _ in 0..200 {
            let n = r.gen_range(1..=8);
            let (s_o, q) = random_quota_instance(&mut r, n);
            assert!(q.is_compatible_with(&s_o));
        }
    }

    #[test]
    fn weak_orders_cover_the_two_alternative_domain() {
        let orders = all_weak_orders();
        assert_eq!(orders.len(), 3);
        assert_eq!(orders.iter().filter(|p| p.is_strict()).count(), 2);
    }
}
