//! Builder for staged quota games.
//!
//! Given an ordered partition `(S_1, …, S_K)` and compatible quotas
//! `(q_1, …, q_K)`, the game runs in steps. In step `k` every member of
//! `S_k` chooses between the labels `{P^x}` and `{P^y}` without observing
//! the other same-step choices; earlier steps are public. Writing `c` for
//! the number of `{P^x}` choices in the step:
//!
//! * `c > q_k` — the game ends electing `x`;
//! * `c < q_k` — the game ends electing `y`;
//! * `c = q_k` — play continues with step `k + 1`, except in the last step,
//!   where the game ends electing `y`.
//!
//! Quotas are compatible when `q_k ≤ |S_k|` for `k < K` and `q_K < |S_K|`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Alternative, OrderedPartition, Preference, QuotaVector};

use super::{Arena, ChoiceLabel, InfoSetSpec, NodeSpec};

/// Builds the staged quota game for `(s_o, q)`.
///
/// Node ids are assigned in breadth-first construction order (the root is
/// node 0, each step's positions appear level by level), so equal inputs
/// rebuild byte-identical arenas. Each member's information set at step `k`
/// pools all nodes that share the same public history — the same entry node
/// into the step.
///
/// ```
/// use ospcheck::game::build_quota_game;
/// use ospcheck::model::{OrderedPartition, QuotaVector};
///
/// let s_o = OrderedPartition::from_lists(3, vec![vec![1, 2], vec![3]]).unwrap();
/// let q = QuotaVector::new(vec![1, 0]);
/// let arena = build_quota_game(&s_o, &q).unwrap();
/// assert!(arena.validate().is_empty());
/// ```
pub fn build_quota_game(s_o: &OrderedPartition, q: &QuotaVector) -> Result<Arena> {
    Ok(build_quota_game_stats(s_o, q)?.0)
}

/// As [`build_quota_game`], and also reports how many distinct public
/// histories enter each step (index 0 is the root's step, always 1).
pub fn build_quota_game_stats(
    s_o: &OrderedPartition,
    q: &QuotaVector,
) -> Result<(Arena, Vec<u64>)> {
    if !q.is_compatible_with(s_o) {
        return Err(Error::IncompatibleQuotas(format!(
            "quotas {q} are not compatible with the ordered partition {s_o}"
        )));
    }
    let blocks: Vec<Vec<u32>> = s_o.blocks().iter().map(|b| b.members()).collect();
    let quotas = q.quotas();
    let last_step = blocks.len() - 1;
    let label_x = ChoiceLabel::prefs(vec![Preference::p_x()]);
    let label_y = ChoiceLabel::prefs(vec![Preference::p_y()]);

    let mut nodes: Vec<NodeSpec> = Vec::new();
    let mut iset_specs: Vec<InfoSetSpec> = Vec::new();
    // (step, position within block, entry node) -> information set id.
    let mut iset_ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut entries_per_step = vec![0u64; blocks.len()];

    // Breadth-first frontier: (node id, step, position, entry node, x-count).
    let mut queue: std::collections::VecDeque<(usize, usize, usize, usize, u32)> =
        std::collections::VecDeque::new();

    let make_decision =
        |nodes: &mut Vec<NodeSpec>,
         iset_specs: &mut Vec<InfoSetSpec>,
         iset_ids: &mut HashMap<(usize, usize, usize), usize>,
         parent: Option<(usize, ChoiceLabel)>,
         step: usize,
         pos: usize,
         entry: usize| {
            let id = nodes.len();
            let key = (step, pos, entry);
            let iset = *iset_ids.entry(key).or_insert_with(|| {
                iset_specs.push(InfoSetSpec {
                    owner: blocks[step][pos],
                    nodes: Vec::new(),
                    choices: vec![label_x.clone(), label_y.clone()],
                });
                iset_specs.len() - 1
            });
            iset_specs[iset].nodes.push(id);
            nodes.push(NodeSpec {
                owner: Some(blocks[step][pos]),
                parent,
                info_set: Some(iset),
                outcome: None,
            });
            id
        };

    let root = make_decision(&mut nodes, &mut iset_specs, &mut iset_ids, None, 0, 0, 0);
    entries_per_step[0] = 1;
    queue.push_back((root, 0, 0, root, 0));

    while let Some((id, step, pos, entry, count)) = queue.pop_front() {
        for label in [&label_x, &label_y] {
            let count2 = count + u32::from(*label == label_x);
            let pos2 = pos + 1;
            let parent = Some((id, label.clone()));
            if pos2 < blocks[step].len() {
                let child = make_decision(
                    &mut nodes,
                    &mut iset_specs,
                    &mut iset_ids,
                    parent,
                    step,
                    pos2,
                    entry,
                );
                queue.push_back((child, step, pos2, entry, count2));
                continue;
            }
            // The block has finished; apply the count rule.
            if count2 > quotas[step] {
                nodes.push(NodeSpec {
                    owner: None,
                    parent,
                    info_set: None,
                    outcome: Some(Alternative::x()),
                });
            } else if count2 < quotas[step] || step == last_step {
                nodes.push(NodeSpec {
                    owner: None,
                    parent,
                    info_set: None,
                    outcome: Some(Alternative::y()),
                });
            } else {
                let child = make_decision(
                    &mut nodes,
                    &mut iset_specs,
                    &mut iset_ids,
                    parent,
                    step + 1,
                    0,
                    usize::MAX, // placeholder, fixed below
                );
                // The new node is its own entry: fix the information-set key.
                let iset = nodes[child].info_set.unwrap();
                iset_ids.remove(&(step + 1, 0, usize::MAX));
                iset_ids.insert((step + 1, 0, child), iset);
                entries_per_step[step + 1] += 1;
                queue.push_back((child, step + 1, 0, child, 0));
            }
        }
    }

    let arena = Arena::from_parts(
        s_o.n(),
        vec![Alternative::x(), Alternative::y()],
        nodes,
        iset_specs,
    )?;
    Ok((arena, entries_per_step))
}
