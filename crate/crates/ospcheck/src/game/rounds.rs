//! Pruning, relabelling, and membership in the round-table game class.
//!
//! Verification of a game against a type-strategy profile only depends on
//! the parts of the tree that some type profile actually plays. [`prune`]
//! cuts everything else; [`relabel`] then renames every remaining choice by
//! the set of types selecting it, after which choices *are* statements about
//! preferences. [`is_in_game_class`] checks the structural shape shared by
//! all games interpretable as a round table for a partition `s`: play
//! proceeds in steps, one block per step and commonly-known history, block
//! members move without observing one another, and choice sets refine
//! preference sets step by step.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AgentId, Partition, Preference};

use super::{
    play_from, type_profiles, Arena, ChoiceLabel, InfoSetId, InfoSetSpec, NodeId, NodeSpec,
    Strategy, TypeStrategyProfile,
};

/// Restricts the arena to nodes played by at least one type profile.
///
/// A node is retained iff it lies on the play path of `σ^R` for some type
/// profile `R` in the product of the declared domains. The output is
/// rebuilt in breadth-first id order (children visited in sorted label
/// order); terminal outcomes are preserved. When member nodes of one
/// information set retain different choice sets, the set is split so the
/// output still offers uniform choices — on games whose reached parts are
/// already uniform this never triggers.
pub fn prune(arena: &Arena, tsp: &TypeStrategyProfile) -> Result<Arena> {
    let root = arena.root()?;
    let domains = tsp.domains();
    let mut retained = vec![false; arena.nodes().len()];
    for profile in type_profiles(&domains) {
        let strategies = tsp.profile_for(&profile)?;
        let leaf = play_from(arena, root, &strategies)?;
        for node in arena.path_from_root(leaf) {
            retained[node] = true;
        }
    }

    // Breadth-first renumbering over retained nodes.
    let mut new_id: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut order: Vec<NodeId> = Vec::new();
    let mut queue = VecDeque::from([root]);
    new_id.insert(root, 0);
    order.push(root);
    while let Some(v) = queue.pop_front() {
        for (_, c) in &arena.node(v).children {
            if retained[*c] && !new_id.contains_key(c) {
                new_id.insert(*c, order.len());
                order.push(*c);
                queue.push_back(*c);
            }
        }
    }

    // Information sets keyed by (old set, surviving choice signature).
    let mut iset_map: BTreeMap<(InfoSetId, Vec<ChoiceLabel>), usize> = BTreeMap::new();
    let mut iset_specs: Vec<InfoSetSpec> = Vec::new();
    let mut specs: Vec<NodeSpec> = Vec::with_capacity(order.len());
    for &old in &order {
        let node = arena.node(old);
        let parent = node
            .parent
            .as_ref()
            .filter(|(p, _)| retained[*p])
            .map(|(p, label)| (new_id[p], label.clone()));
        let info_set = match (node.owner, node.info_set) {
            (Some(owner), Some(old_iid)) => {
                let mut signature: Vec<ChoiceLabel> = node
                    .children
                    .iter()
                    .filter(|(_, c)| retained[*c])
                    .map(|(l, _)| l.clone())
                    .collect();
                signature.sort();
                let next = iset_specs.len();
                let iid = *iset_map
                    .entry((old_iid, signature.clone()))
                    .or_insert_with(|| {
                        iset_specs.push(InfoSetSpec {
                            owner,
                            nodes: Vec::new(),
                            choices: signature,
                        });
                        next
                    });
                iset_specs[iid].nodes.push(new_id[&old]);
                Some(iid)
            }
            _ => None,
        };
        specs.push(NodeSpec {
            owner: node.owner,
            parent,
            info_set,
            outcome: node.outcome.clone(),
        });
    }
    Arena::from_parts(
        arena.n(),
        arena.alternatives().to_vec(),
        specs,
        iset_specs,
    )
}

/// Whether the agent's own past moves on the path to `node` all follow
/// `strategy`.
fn own_moves_match(arena: &Arena, strategy: &Strategy, node: NodeId) -> bool {
    let path = arena.path_from_root(node);
    for window in path.windows(2) {
        let (u, v) = (window[0], window[1]);
        let owned = arena.node(u).owner == Some(strategy.owner);
        if owned {
            let iset = arena.node(u).info_set.expect("decision node has a set");
            let taken = arena
                .node(u)
                .children
                .iter()
                .find(|(_, c)| *c == v)
                .map(|(l, _)| l);
            if strategy.choice_at(iset) != taken {
                return false;
            }
        }
    }
    true
}

/// Renames every choice by the set of types selecting it.
///
/// At an information set `I` of agent `i`, choice `c` becomes the set of
/// preferences `R` in `i`'s domain whose strategy both selects `c` at `I`
/// and is consistent with reaching `I` (the agent's own earlier moves
/// follow `σ_i^R` on the path to some node of `I`). The arena should be
/// pruned against `tsp` first; a choice selected by no type fails with
/// [`Error::EmptyChoiceLabel`], naming the set and the index of the choice
/// in its sorted choice list.
///
/// Node and information-set ids are preserved. Distinct choices receive
/// disjoint non-empty preference sets, so the choice/child bijection
/// survives, and at an agent's first information sets the new labels
/// partition the agent's whole domain.
pub fn relabel(arena: &Arena, tsp: &TypeStrategyProfile) -> Result<Arena> {
    let mut edge_rename: BTreeMap<(NodeId, ChoiceLabel), ChoiceLabel> = BTreeMap::new();
    let mut iset_specs: Vec<InfoSetSpec> = Vec::with_capacity(arena.info_sets().len());

    for (iid, iset) in arena.info_sets().iter().enumerate() {
        let owner = iset.owner;
        let domain = tsp.domain(owner);
        let mut new_choices = Vec::with_capacity(iset.choices.len());
        for (choice_ix, choice) in iset.choices.iter().enumerate() {
            let mut types: Vec<Preference> = Vec::new();
            for r in &domain {
                let strategy = tsp.strategy_for(owner, r).expect("domain key");
                if strategy.choice_at(iid) != Some(choice) {
                    continue;
                }
                let reachable = iset
                    .nodes
                    .iter()
                    .any(|&z| own_moves_match(arena, strategy, z));
                if reachable {
                    types.push(r.clone());
                }
            }
            if types.is_empty() {
                return Err(Error::EmptyChoiceLabel {
                    info_set: iid,
                    choice: choice_ix,
                });
            }
            let new_label = ChoiceLabel::prefs(types);
            for &z in &iset.nodes {
                edge_rename.insert((z, choice.clone()), new_label.clone());
            }
            new_choices.push(new_label);
        }
        iset_specs.push(InfoSetSpec {
            owner,
            nodes: iset.nodes.clone(),
            choices: new_choices,
        });
    }

    let specs: Vec<NodeSpec> = arena
        .nodes()
        .iter()
        .map(|node| NodeSpec {
            owner: node.owner,
            parent: node.parent.as_ref().map(|(p, label)| {
                let renamed = edge_rename
                    .get(&(*p, label.clone()))
                    .cloned()
                    .unwrap_or_else(|| label.clone());
                (*p, renamed)
            }),
            info_set: node.info_set,
            outcome: node.outcome.clone(),
        })
        .collect();
    Arena::from_parts(
        arena.n(),
        arena.alternatives().to_vec(),
        specs,
        iset_specs,
    )
}

/// One reason an arena is not a round-table game for the partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameClassViolation {
    /// The arena fails structural validation (or its agent count differs
    /// from the partition's).
    ArenaInvalid { detail: String },
    /// A choice label is still an opaque token, not a preference set.
    TokenLabel { info_set: InfoSetId },
    /// A node in a step is owned by the wrong agent: outside the step's
    /// block, or a member moving twice within one step.
    StepOwnership {
        entry: NodeId,
        node: NodeId,
        detail: String,
    },
    /// A step level is not one whole information set (members observe each
    /// other, or the game ends for some members mid-step).
    BrokenSimultaneity { entry: NodeId, detail: String },
    /// Choice sets fail to partition what they must: an agent's full domain
    /// at first play, or the previously chosen set later.
    ChoicePartition {
        entry: NodeId,
        info_set: InfoSetId,
        detail: String,
    },
    /// An agent whose previous play offered exactly one choice is later
    /// offered anything other than that same single choice.
    SingletonPersistence {
        entry: NodeId,
        info_set: InfoSetId,
        agent: AgentId,
    },
}

impl fmt::Display for GameClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameClassViolation::ArenaInvalid { detail } => {
                write!(f, "arena invalid: {detail}")
            }
            GameClassViolation::TokenLabel { info_set } => {
                write!(f, "information set {info_set} has a token choice label")
            }
            GameClassViolation::StepOwnership { entry, node, detail } => {
                write!(f, "step at entry {entry}, node {node}: {detail}")
            }
            GameClassViolation::BrokenSimultaneity { entry, detail } => {
                write!(f, "step at entry {entry}: {detail}")
            }
            GameClassViolation::ChoicePartition {
                entry,
                info_set,
                detail,
            } => write!(
                f,
                "step at entry {entry}, information set {info_set}: {detail}"
            ),
            GameClassViolation::SingletonPersistence {
                entry,
                info_set,
                agent,
            } => write!(
                f,
                "step at entry {entry}, information set {info_set}: agent {agent} was down to a single choice but is offered a different choice set"
            ),
        }
    }
}

type AgentState = BTreeMap<AgentId, (BTreeSet<Preference>, bool)>;

/// Whether the arena has the round-table shape for partition `s`: play
/// decomposes into steps, each step (per commonly-known history) is played
/// by exactly one block of `s`, every block member moves exactly once per
/// step without observing same-step moves, first-play choice sets partition
/// the mover's domain, later choice sets partition the previously chosen
/// set, and an agent left with a single choice keeps exactly that choice.
///
/// Expects preference-subset labels (run [`relabel`] after [`prune`]
/// first). Any violation means non-membership; see
/// [`game_class_diagnostics`] for the reasons, with the single-choice
/// persistence clause flagged by its own variant.
pub fn is_in_game_class(arena: &Arena, s: &Partition, domains: &[Vec<Preference>]) -> bool {
    game_class_diagnostics(arena, s, domains).is_empty()
}

/// All round-table violations found; empty iff [`is_in_game_class`].
pub fn game_class_diagnostics(
    arena: &Arena,
    s: &Partition,
    domains: &[Vec<Preference>],
) -> Vec<GameClassViolation> {
    let mut out = Vec::new();
    if s.n() != arena.n() {
        out.push(GameClassViolation::ArenaInvalid {
            detail: format!(
                "partition is over {} agents, arena over {}",
                s.n(),
                arena.n()
            ),
        });
        return out;
    }
    if domains.len() != arena.n() as usize {
        out.push(GameClassViolation::ArenaInvalid {
            detail: format!(
                "expected {} preference domains, got {}",
                arena.n(),
                domains.len()
            ),
        });
        return out;
    }
    let structural = arena.validate();
    if !structural.is_empty() {
        out.push(GameClassViolation::ArenaInvalid {
            detail: format!("{} structural violations, e.g. {}", structural.len(), structural[0]),
        });
        return out;
    }
    let root = arena.root().expect("validated arena has a root");
    check_entry(arena, s, domains, root, &AgentState::new(), &mut out);
    out
}

fn label_set(label: &ChoiceLabel) -> Option<BTreeSet<Preference>> {
    label.as_prefs().map(|ps| ps.iter().cloned().collect())
}

fn check_entry(
    arena: &Arena,
    s: &Partition,
    domains: &[Vec<Preference>],
    entry: NodeId,
    state: &AgentState,
    out: &mut Vec<GameClassViolation>,
) {
    if arena.is_terminal(entry) {
        return;
    }
    let block = s.block_of(arena.node(entry).owner.expect("non-terminal"));
    let mut frontier = vec![entry];
    let mut played: BTreeSet<AgentId> = BTreeSet::new();
    let mut forced_at_level: BTreeMap<InfoSetId, bool> = BTreeMap::new();

    for _ in 0..block.size() {
        if let Some(&t) = frontier.iter().find(|&&z| arena.is_terminal(z)) {
            out.push(GameClassViolation::BrokenSimultaneity {
                entry,
                detail: format!(
                    "node {t} is terminal before every member of block {block} has moved"
                ),
            });
            return;
        }
        let owner = arena.node(frontier[0]).owner.expect("non-terminal");
        if !block.contains(owner) {
            out.push(GameClassViolation::StepOwnership {
                entry,
                node: frontier[0],
                detail: format!("agent {owner} is outside the step's block {block}"),
            });
            return;
        }
        if !played.insert(owner) {
            out.push(GameClassViolation::StepOwnership {
                entry,
                node: frontier[0],
                detail: format!("agent {owner} moves twice within one step"),
            });
            return;
        }
        if let Some(&bad) = frontier
            .iter()
            .find(|&&z| arena.node(z).owner != Some(owner))
        {
            out.push(GameClassViolation::StepOwnership {
                entry,
                node: bad,
                detail: format!(
                    "level mixes owners: expected agent {owner}, node {bad} differs"
                ),
            });
            return;
        }

        // All level nodes must make up exactly one information set.
        let iid = arena.node(frontier[0]).info_set.expect("decision node");
        let mut level_sorted = frontier.clone();
        level_sorted.sort_unstable();
        if frontier.iter().any(|&z| arena.node(z).info_set != Some(iid))
            || arena.info_set(iid).nodes != level_sorted
        {
            out.push(GameClassViolation::BrokenSimultaneity {
                entry,
                detail: format!(
                    "the {} level nodes of agent {owner} do not form exactly one information set",
                    frontier.len()
                ),
            });
            return;
        }

        // Choice sets: preference labels, pairwise disjoint, with the
        // required union; single-choice persistence.
        let choices = &arena.info_set(iid).choices;
        let mut parts: Vec<BTreeSet<Preference>> = Vec::with_capacity(choices.len());
        for label in choices {
            match label_set(label) {
                Some(set) => parts.push(set),
                None => {
                    out.push(GameClassViolation::TokenLabel { info_set: iid });
                    return;
                }
            }
        }
        let mut union: BTreeSet<Preference> = BTreeSet::new();
        let mut total = 0usize;
        for part in &parts {
            total += part.len();
            union.extend(part.iter().cloned());
        }
        if union.len() != total {
            out.push(GameClassViolation::ChoicePartition {
                entry,
                info_set: iid,
                detail: "choice sets overlap".to_owned(),
            });
        }
        match state.get(&owner) {
            Some((last, was_forced)) => {
                if *was_forced && (parts.len() != 1 || &parts[0] != last) {
                    out.push(GameClassViolation::SingletonPersistence {
                        entry,
                        info_set: iid,
                        agent: owner,
                    });
                }
                if &union != last {
                    out.push(GameClassViolation::ChoicePartition {
                        entry,
                        info_set: iid,
                        detail: format!(
                            "choice sets do not repartition agent {owner}'s previously chosen set"
                        ),
                    });
                }
            }
            None => {
                let domain: BTreeSet<Preference> =
                    domains[(owner - 1) as usize].iter().cloned().collect();
                if union != domain {
                    out.push(GameClassViolation::ChoicePartition {
                        entry,
                        info_set: iid,
                        detail: format!(
                            "first-play choice sets do not partition agent {owner}'s domain"
                        ),
                    });
                }
            }
        }
        forced_at_level.insert(iid, choices.len() == 1);

        frontier = frontier
            .iter()
            .flat_map(|&z| arena.node(z).children.iter().map(|(_, c)| *c))
            .collect();
    }

    // Each node after the block's final level opens the next step under its
    // own commonly-known history.
    for &next in &frontier {
        let mut new_state = state.clone();
        let mut cur = next;
        while cur != entry {
            let (parent, label) = arena
                .node(cur)
                .parent
                .as_ref()
                .map(|(p, l)| (*p, l.clone()))
                .expect("path stays inside the step");
            let owner = arena.node(parent).owner.expect("decision node");
            let iid = arena.node(parent).info_set.expect("decision node");
            if let Some(set) = label_set(&label) {
                new_state.insert(owner, (set, forced_at_level.get(&iid).copied().unwrap_or(false)));
            }
            cur = parent;
        }
        check_entry(arena, s, domains, next, &new_state, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_quota_game, figure1_game, outcome_from, truth_telling_profile};
    use crate::model::{Alternative, OrderedPartition, Profile, QuotaVector};

    fn two_types() -> Vec<Preference> {
        vec![Preference::p_x(), Preference::p_y()]
    }

    fn star_partition() -> Partition {
        Partition::from_lists(5, vec![vec![1, 2], vec![3], vec![4, 5]]).unwrap()
    }

    #[test]
    fn prune_keeps_fully_played_games_and_normalizes() {
        let (arena, tsp) = figure1_game();
        let pruned = prune(&arena, &tsp).unwrap();
        assert!(pruned.validate().is_empty());
        assert_eq!(pruned.nodes().len(), arena.nodes().len());
        assert_eq!(pruned.info_sets().len(), arena.info_sets().len());
        // Idempotent once in breadth-first normal form.
        let again = prune(&pruned, &tsp).unwrap();
        assert_eq!(again, pruned);
        // Outcomes under truth-telling are unchanged.
        let root = pruned.root().unwrap();
        for profile in type_profiles(&tsp.domains()) {
            let s = tsp.profile_for(&profile).unwrap();
            assert_eq!(
                outcome_from(&pruned, root, &s).unwrap(),
                outcome_from(&arena, 0, &s).unwrap()
            );
        }
    }

    /// Agent 1 picks a side, agent 2 then picks the outcome; agent 1's
    /// domain is only `P^x`, so the `y` branch is never played.
    fn half_played() -> (Arena, TypeStrategyProfile) {
        use crate::game::{InfoSetSpec, NodeSpec};
        let cx = ChoiceLabel::token("x");
        let cy = ChoiceLabel::token("y");
        let dec = |owner, parent, iset| NodeSpec {
            owner: Some(owner),
            parent,
            info_set: Some(iset),
            outcome: None,
        };
        let leaf = |parent, alt: &str| NodeSpec {
            owner: None,
            parent: Some(parent),
            info_set: None,
            outcome: Some(Alternative::from(alt)),
        };
        let arena = Arena::from_parts(
            2,
            vec![Alternative::x(), Alternative::y()],
            vec![
                dec(1, None, 0),
                dec(2, Some((0, cx.clone())), 1),
                dec(2, Some((0, cy.clone())), 2),
                leaf((1, cx.clone()), "x"),
                leaf((1, cy.clone()), "y"),
                leaf((2, cx.clone()), "x"),
                leaf((2, cy.clone()), "y"),
            ],
            vec![
                InfoSetSpec { owner: 1, nodes: vec![0], choices: vec![cx.clone(), cy.clone()] },
                InfoSetSpec { owner: 2, nodes: vec![1], choices: vec![cx.clone(), cy.clone()] },
                InfoSetSpec { owner: 2, nodes: vec![2], choices: vec![cx, cy] },
            ],
        )
        .unwrap();
        let domains = vec![vec![Preference::p_x()], two_types()];
        let tsp = crate::game::default_truth_telling(&arena, &domains);
        (arena, tsp)
    }

    #[test]
    fn prune_drops_unplayed_branches() {
        let (arena, tsp) = half_played();
        let pruned = prune(&arena, &tsp).unwrap();
        assert!(pruned.validate().is_empty());
        // Kept: root, agent 2's x-branch node, its two leaves.
        assert_eq!(pruned.nodes().len(), 4);
        // The root now offers a single choice.
        let root = pruned.root().unwrap();
        let iid = pruned.node(root).info_set.unwrap();
        assert_eq!(pruned.info_set(iid).choices.len(), 1);
    }

    #[test]
    fn relabel_requires_pruning_first() {
        let (arena, tsp) = half_played();
        // Unpruned: the root's y-choice is selected by no type.
        assert_eq!(
            relabel(&arena, &tsp),
            Err(Error::EmptyChoiceLabel { info_set: 0, choice: 1 })
        );
        let pruned = prune(&arena, &tsp).unwrap();
        let relabelled = relabel(&pruned, &tsp).unwrap();
        assert!(relabelled.validate().is_empty());
        let root = relabelled.root().unwrap();
        let iid = relabelled.node(root).info_set.unwrap();
        assert_eq!(
            relabelled.info_set(iid).choices,
            vec![ChoiceLabel::prefs(vec![Preference::p_x()])]
        );
    }

    #[test]
    fn relabelled_fixture_partitions_domains() {
        let (arena, tsp) = figure1_game();
        let pruned = prune(&arena, &tsp).unwrap();
        let relabelled = relabel(&pruned, &tsp).unwrap();
        assert!(relabelled.validate().is_empty());
        for iset in relabelled.info_sets() {
            assert_eq!(
                iset.choices,
                vec![
                    ChoiceLabel::prefs(vec![Preference::p_x()]),
                    ChoiceLabel::prefs(vec![Preference::p_y()]),
                ]
            );
        }
        // Outcomes survive the transform.
        let committee = crate::game::fixtures::figure1_committee();
        let tsp2 = truth_telling_profile(&relabelled, &tsp.domains()).unwrap();
        let root = relabelled.root().unwrap();
        for profile in type_profiles(&tsp.domains()) {
            let s = tsp2.profile_for(&profile).unwrap();
            assert_eq!(
                outcome_from(&relabelled, root, &s).unwrap(),
                committee.emvr_evaluate(&profile).unwrap()
            );
        }
    }

    #[test]
    fn fixture_is_in_its_class() {
        let (arena, tsp) = figure1_game();
        let pruned = prune(&arena, &tsp).unwrap();
        let relabelled = relabel(&pruned, &tsp).unwrap();
        let domains = tsp.domains();
        assert!(is_in_game_class(&relabelled, &star_partition(), &domains));
        // Token labels are flagged before any structural analysis.
        let diags = game_class_diagnostics(&arena, &star_partition(), &domains);
        assert!(diags
            .iter()
            .any(|d| matches!(d, GameClassViolation::TokenLabel { .. })));
    }

    #[test]
    fn observing_a_block_mate_breaks_membership() {
        // Same tree as `half_played` but both types for agent 1, relabelled:
        // agent 2 sees agent 1's move, yet they share a block.
        use crate::game::{InfoSetSpec, NodeSpec};
        let cx = ChoiceLabel::token("x");
        let cy = ChoiceLabel::token("y");
        let dec = |owner, parent, iset| NodeSpec {
            owner: Some(owner),
            parent,
            info_set: Some(iset),
            outcome: None,
        };
        let leaf = |parent, alt: &str| NodeSpec {
            owner: None,
            parent: Some(parent),
            info_set: None,
            outcome: Some(Alternative::from(alt)),
        };
        let arena = Arena::from_parts(
            2,
            vec![Alternative::x(), Alternative::y()],
            vec![
                dec(1, None, 0),
                dec(2, Some((0, cx.clone())), 1),
                dec(2, Some((0, cy.clone())), 2),
                leaf((1, cx.clone()), "x"),
                leaf((1, cy.clone()), "y"),
                leaf((2, cx.clone()), "x"),
                leaf((2, cy.clone()), "y"),
            ],
            vec![
                InfoSetSpec { owner: 1, nodes: vec![0], choices: vec![cx.clone(), cy.clone()] },
                InfoSetSpec { owner: 2, nodes: vec![1], choices: vec![cx.clone(), cy.clone()] },
                InfoSetSpec { owner: 2, nodes: vec![2], choices: vec![cx, cy] },
            ],
        )
        .unwrap();
        let domains = vec![two_types(), two_types()];
        let tsp = crate::game::default_truth_telling(&arena, &domains);
        let relabelled = relabel(&prune(&arena, &tsp).unwrap(), &tsp).unwrap();

        let together = Partition::from_lists(2, vec![vec![1, 2]]).unwrap();
        let diags = game_class_diagnostics(&relabelled, &together, &domains);
        assert!(diags
            .iter()
            .any(|d| matches!(d, GameClassViolation::BrokenSimultaneity { .. })));
        // With each agent in their own block, the alternating game is fine.
        let apart = Partition::finest(2).unwrap();
        assert!(is_in_game_class(&relabelled, &apart, &domains));
    }

    #[test]
    fn single_choice_must_persist() {
        // Agent 1 first has one merged choice {P^x, P^y}, then two choices:
        // forbidden — after being down to one choice it must stay so.
        use crate::game::{InfoSetSpec, NodeSpec};
        let all = ChoiceLabel::prefs(two_types());
        let px = ChoiceLabel::prefs(vec![Preference::p_x()]);
        let py = ChoiceLabel::prefs(vec![Preference::p_y()]);
        let arena = Arena::from_parts(
            1,
            vec![Alternative::x(), Alternative::y()],
            vec![
                NodeSpec { owner: Some(1), parent: None, info_set: Some(0), outcome: None },
                NodeSpec {
                    owner: Some(1),
                    parent: Some((0, all.clone())),
                    info_set: Some(1),
                    outcome: None,
                },
                NodeSpec {
                    owner: None,
                    parent: Some((1, px.clone())),
                    info_set: None,
                    outcome: Some(Alternative::x()),
                },
                NodeSpec {
                    owner: None,
                    parent: Some((1, py.clone())),
                    info_set: None,
                    outcome: Some(Alternative::y()),
                },
            ],
            vec![
                InfoSetSpec { owner: 1, nodes: vec![0], choices: vec![all] },
                InfoSetSpec { owner: 1, nodes: vec![1], choices: vec![px, py] },
            ],
        )
        .unwrap();
        let domains = vec![two_types()];
        let s = Partition::coarsest(1).unwrap();
        let diags = game_class_diagnostics(&arena, &s, &domains);
        assert!(
            diags.iter().any(|d| matches!(
                d,
                GameClassViolation::SingletonPersistence { agent: 1, .. }
            )),
            "got {diags:?}"
        );
    }

    #[test]
    fn quota_games_are_in_their_class() {
        let s_o = OrderedPartition::from_lists(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let q = QuotaVector::new(vec![1, 0]);
        let arena = build_quota_game(&s_o, &q).unwrap();
        let domains: Vec<Vec<Preference>> = (0..4).map(|_| two_types()).collect();
        assert!(is_in_game_class(&arena, &s_o.as_partition(), &domains));
        // Against the coarsest partition the first step would need all four
        // agents to move before any branch ends, which the count rule breaks.
        let coarse = Partition::coarsest(4).unwrap();
        assert!(!is_in_game_class(&arena, &coarse, &domains));
    }

    #[test]
    fn truth_profile_round_trip_after_prune() {
        // Pruning to a profile and relabelling, the truth-telling profile on
        // the output plays to the same outcomes.
        let s_o = OrderedPartition::from_lists(3, vec![vec![1, 2], vec![3]]).unwrap();
        let q = QuotaVector::new(vec![1, 0]);
        let arena = build_quota_game(&s_o, &q).unwrap();
        let domains: Vec<Vec<Preference>> = (0..3).map(|_| two_types()).collect();
        let tsp = truth_telling_profile(&arena, &domains).unwrap();
        let pruned = prune(&arena, &tsp).unwrap();
        assert_eq!(pruned.nodes().len(), arena.nodes().len());
        let relabelled = relabel(&pruned, &tsp).unwrap();
        assert_eq!(relabelled, pruned, "quota games are already relabelled");
        let tsp2 = truth_telling_profile(&relabelled, &domains).unwrap();
        let root = relabelled.root().unwrap();
        for bits in 0u64..8 {
            let profile =
                Profile::from_x_supporters(3, crate::model::Coalition::from_bits(bits)).unwrap();
            assert_eq!(
                outcome_from(&relabelled, root, &tsp2.profile_for(&profile).unwrap()).unwrap(),
                outcome_from(&arena, 0, &tsp.profile_for(&profile).unwrap()).unwrap(),
            );
        }
    }
}
