//! Deciding obvious dominance with respect to a partition of the agents.
//!
//! Fix a partition `s` and an agent `i` with block `S`. Agent `i` plays a
//! strategy `σ_i` while the rest of the block plays `σ_{S∖{i}}`; agents
//! outside the block are unmodelled and may do anything. A deviation `σ'_i`
//! is compared against `σ_i` at its *earliest points of departure*: the
//! information sets where the two strategies first disagree, restricted to
//! nodes the block's own play can actually reach. At such a point the
//! *option set* `o` collects every outcome that following `σ_i` can still
//! produce as outside agents vary, and `o′` the same for `σ'_i`. The
//! strategy `σ_i` is obviously dominant when, for every block completion and
//! every deviation, each outcome in `o` is weakly preferred to each outcome
//! in `o′` — the worst case of staying the course beats the best case of
//! departing, judged at the moment of departure.
//!
//! A game *OSP-implements* a rule for `s` when truth-telling induces the
//! rule and every truth-telling strategy is obviously dominant in this
//! sense. With the coarsest partition the notion collapses to ordinary weak
//! dominance; with the finest partition it is the classical
//! obvious-strategy-proofness of single-agent deviations. Failures carry
//! replayable witnesses.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::committee::{Committee, ScfTable};
use crate::error::{Error, Result};
use crate::game::{
    enumerate_strategies, is_in_game_class, outcome_from, strategy_count, truth_telling_profile,
    type_profiles, Arena, InfoSetId, NodeId, Strategy, TypeStrategyProfile,
};
use crate::model::{AgentId, Alternative, Coalition, Partition, Preference, Profile};

/// Default bound on evaluated strategy combinations per check: `2^22`.
pub const DEFAULT_CAP: u64 = 1 << 22;

/// A voting rule to verify a game against: a committee evaluated by
/// extended majority voting, or an explicit outcome table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rule {
    /// Elect `x` iff the `x`-supporters contain a winning coalition.
    Committee(Committee),
    /// Outcomes listed per supporter set.
    Table(ScfTable),
}

impl Rule {
    /// Number of agents the rule is over.
    pub fn n(&self) -> u32 {
        match self {
            Rule::Committee(c) => c.n(),
            Rule::Table(t) => t.n(),
        }
    }

    /// The alternative elected at a (strict, two-alternative) profile.
    pub fn evaluate(&self, profile: &Profile) -> Result<Alternative> {
        match self {
            Rule::Committee(c) => c.emvr_evaluate(profile),
            Rule::Table(t) => {
                if profile.n() != t.n() {
                    return Err(Error::InvalidTable(format!(
                        "profile has {} agents but the table has {}",
                        profile.n(),
                        t.n()
                    )));
                }
                let mut supporters = Coalition::empty();
                for i in 1..=t.n() {
                    let top = profile.get(i).top()?;
                    if top == Alternative::x() {
                        supporters = supporters.insert(i);
                    } else if top != Alternative::y() {
                        return Err(Error::UnknownAlternative {
                            label: top.as_str().to_owned(),
                        });
                    }
                }
                Ok(t.outcome(&supporters).clone())
            }
        }
    }
}

/// An earliest point of departure between a strategy and a deviation:
/// an information set where they first differ, restricted to the member
/// nodes the block's own strategies can reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeparturePoint {
    /// The information set where the strategies diverge.
    pub info_set: InfoSetId,
    /// Member nodes compatible with the block's play, ascending; never empty.
    pub compatible_nodes: Vec<NodeId>,
}

/// A replayable refutation of obvious dominance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceWitness {
    /// The agent whose strategy fails to be obviously dominant.
    pub agent: AgentId,
    /// The preference the strategy was tested for.
    pub preference: Preference,
    /// The strategy under test.
    pub strategy: Strategy,
    /// The fixed strategies of the agent's block peers, ascending by owner.
    pub block_strategies: Vec<Strategy>,
    /// The deviation that beats it.
    pub deviation: Strategy,
    /// Where the comparison happens.
    pub departure: DeparturePoint,
    /// An outcome still possible under the strategy — `x ∈ o`.
    pub following_outcome: Alternative,
    /// An outcome possible under the deviation that the agent strictly
    /// prefers to `following_outcome` — `y ∈ o′`.
    pub deviating_outcome: Alternative,
}

/// A type profile where the game's truth-telling play disagrees with the
/// rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducesWitness {
    /// The offending preference profile.
    pub profile: Profile,
    /// What the rule elects there.
    pub expected: Alternative,
    /// What the game plays to.
    pub actual: Alternative,
}

/// Why a verification verdict failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Witness {
    /// Obvious dominance fails for some agent, type, and deviation.
    Dominance(DominanceWitness),
    /// The game does not even induce the rule under truth-telling.
    Induces(InducesWitness),
}

/// Outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Whether the property holds.
    pub pass: bool,
    /// A replayable counterexample when it does not.
    pub witness: Option<Witness>,
}

impl Verdict {
    fn passing() -> Self {
        Verdict { pass: true, witness: None }
    }

    fn failing(witness: Witness) -> Self {
        Verdict { pass: false, witness: Some(witness) }
    }
}

/// Whether `node` is compatible with the strategies in `sigma_block`: along
/// the path from the root, whenever an agent with a strategy in the slice
/// moves, that strategy selects the edge toward `node`.
pub fn compatible(arena: &Arena, node: NodeId, sigma_block: &[Strategy]) -> bool {
    let by_owner: BTreeMap<AgentId, &Strategy> =
        sigma_block.iter().map(|s| (s.owner, s)).collect();
    let path = arena.path_from_root(node);
    for window in path.windows(2) {
        let (u, v) = (window[0], window[1]);
        let Some(owner) = arena.node(u).owner else { return false };
        if let Some(strategy) = by_owner.get(&owner) {
            let iset = arena.node(u).info_set.expect("decision node");
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

/// The information sets of `i` where `sigma_i` and `sigma_prime` differ and
/// no earlier differing set precedes them.
fn earliest_differing_sets(
    arena: &Arena,
    sigma_i: &Strategy,
    sigma_prime: &Strategy,
) -> Vec<InfoSetId> {
    let differ: Vec<InfoSetId> = arena
        .agent_info_sets(sigma_i.owner)
        .into_iter()
        .filter(|&iid| sigma_i.choice_at(iid) != sigma_prime.choice_at(iid))
        .collect();
    differ
        .iter()
        .copied()
        .filter(|&iid| {
            !differ
                .iter()
                .any(|&other| other != iid && crate::game::info_precedes(arena, other, iid))
        })
        .collect()
}

fn departure_points(
    arena: &Arena,
    sigma_block: &[Strategy],
    earliest: &[InfoSetId],
) -> Vec<DeparturePoint> {
    earliest
        .iter()
        .filter_map(|&iid| {
            let nodes: Vec<NodeId> = arena
                .info_set(iid)
                .nodes
                .iter()
                .copied()
                .filter(|&z| compatible(arena, z, sigma_block))
                .collect();
            if nodes.is_empty() {
                None
            } else {
                Some(DeparturePoint { info_set: iid, compatible_nodes: nodes })
            }
        })
        .collect()
}

/// The earliest points of departure of `sigma_prime` from `i`'s strategy in
/// `sigma_block`: information sets where the two differ with no differing
/// predecessor, restricted to nodes compatible with the whole block's play;
/// sets whose restriction is empty are omitted.
///
/// `sigma_block` must contain a strategy owned by `i`. Fails with
/// [`Error::IdenticalStrategies`] when there is no disagreement at all.
pub fn earliest_departures(
    arena: &Arena,
    sigma_block: &[Strategy],
    i: AgentId,
    sigma_prime: &Strategy,
) -> Result<Vec<DeparturePoint>> {
    let sigma_i = sigma_block
        .iter()
        .find(|s| s.owner == i)
        .ok_or_else(|| {
            Error::PreconditionViolated(format!("no strategy for agent {i} in the block slice"))
        })?;
    if sigma_prime.owner != i {
        return Err(Error::PreconditionViolated(format!(
            "deviation belongs to agent {}, expected {i}",
            sigma_prime.owner
        )));
    }
    let earliest = earliest_differing_sets(arena, sigma_i, sigma_prime);
    if earliest.is_empty() {
        return Err(Error::IdenticalStrategies);
    }
    Ok(departure_points(arena, sigma_block, &earliest))
}

/// The agents without a strategy in `sigma_block`, ascending.
fn outside_agents(arena: &Arena, sigma_block: &[Strategy]) -> Vec<AgentId> {
    let covered: BTreeSet<AgentId> = sigma_block.iter().map(|s| s.owner).collect();
    (1..=arena.n()).filter(|a| !covered.contains(a)).collect()
}

fn outside_product(arena: &Arena, sigma_block: &[Strategy]) -> u128 {
    outside_agents(arena, sigma_block)
        .iter()
        .map(|&a| strategy_count(arena, a))
        .product()
}

/// Collects every outcome reachable from `start` when mapped agents follow
/// their strategies and unmapped agents branch freely.
fn free_outcomes(
    arena: &Arena,
    start: NodeId,
    by_owner: &BTreeMap<AgentId, &Strategy>,
    out: &mut BTreeSet<Alternative>,
) -> Result<()> {
    let node = arena.node(start);
    let Some(owner) = node.owner else {
        out.insert(node.outcome.clone().expect("terminal has outcome"));
        return Ok(());
    };
    let iset = node.info_set.expect("decision node");
    match by_owner.get(&owner) {
        Some(strategy) => {
            let label = strategy
                .choice_at(iset)
                .ok_or(Error::IncompleteStrategy { agent: owner, info_set: iset })?;
            let child = arena
                .child_via(start, label)
                .ok_or(Error::IncompleteStrategy { agent: owner, info_set: iset })?;
            free_outcomes(arena, child, by_owner, out)
        }
        None => {
            for (_, child) in &node.children {
                free_outcomes(arena, *child, by_owner, out)?;
            }
            Ok(())
        }
    }
}

fn option_side(
    arena: &Arena,
    sigma_block: &[Strategy],
    replace_i_with: &Strategy,
    dp: &DeparturePoint,
) -> Result<BTreeSet<Alternative>> {
    let mut by_owner: BTreeMap<AgentId, &Strategy> =
        sigma_block.iter().map(|s| (s.owner, s)).collect();
    by_owner.insert(replace_i_with.owner, replace_i_with);
    let mut out = BTreeSet::new();
    for &z in &dp.compatible_nodes {
        free_outcomes(arena, z, &by_owner, &mut out)?;
    }
    Ok(out)
}

/// The option sets `(o, o′)` at a departure point: the outcomes reachable
/// from its compatible nodes when the block follows `sigma_block` (with
/// `i` playing their block strategy for `o`, the deviation `sigma_prime`
/// for `o′`) and the agents outside the block vary over all their
/// strategies.
///
/// The variation over outside strategy profiles is exact but evaluated by
/// free branching at outside-owned nodes, which is equivalent on validated
/// arenas; [`option_sets_by_enumeration`] is the literal reference route and
/// the two are tested against each other. The size of the outside strategy
/// space still counts against `cap`.
pub fn option_sets(
    arena: &Arena,
    sigma_block: &[Strategy],
    sigma_prime: &Strategy,
    dp: &DeparturePoint,
    cap: u64,
) -> Result<(BTreeSet<Alternative>, BTreeSet<Alternative>)> {
    let required = outside_product(arena, sigma_block);
    if required > cap as u128 {
        return Err(Error::SearchSpaceExceeded { required, cap });
    }
    let i = sigma_prime.owner;
    let sigma_i = sigma_block
        .iter()
        .find(|s| s.owner == i)
        .ok_or_else(|| {
            Error::PreconditionViolated(format!("no strategy for agent {i} in the block slice"))
        })?;
    let o = option_side(arena, sigma_block, sigma_i, dp)?;
    let o_prime = option_side(arena, sigma_block, sigma_prime, dp)?;
    Ok((o, o_prime))
}

/// Literal-enumeration reference for [`option_sets`]: materializes every
/// strategy profile of the outside agents and plays each compatible node to
/// its terminal. Slower, kept as the independent second route.
pub fn option_sets_by_enumeration(
    arena: &Arena,
    sigma_block: &[Strategy],
    sigma_prime: &Strategy,
    dp: &DeparturePoint,
    cap: u64,
) -> Result<(BTreeSet<Alternative>, BTreeSet<Alternative>)> {
    let required = outside_product(arena, sigma_block);
    if required > cap as u128 {
        return Err(Error::SearchSpaceExceeded { required, cap });
    }
    let i = sigma_prime.owner;
    sigma_block
        .iter()
        .find(|s| s.owner == i)
        .ok_or_else(|| {
            Error::PreconditionViolated(format!("no strategy for agent {i} in the block slice"))
        })?;
    let outside = outside_agents(arena, sigma_block);
    let lists: Vec<Vec<Strategy>> = outside
        .iter()
        .map(|&a| enumerate_strategies(arena, a, cap))
        .collect::<Result<_>>()?;

    let mut o = BTreeSet::new();
    let mut o_prime = BTreeSet::new();
    let mut digits = vec![0usize; lists.len()];
    loop {
        // Assemble the full profile for this outside combination.
        let mut profile: Vec<Strategy> = (1..=arena.n()).map(Strategy::new).collect();
        for s in sigma_block {
            profile[(s.owner - 1) as usize] = s.clone();
        }
        for (pos, &a) in outside.iter().enumerate() {
            profile[(a - 1) as usize] = lists[pos][digits[pos]].clone();
        }
        for &z in &dp.compatible_nodes {
            o.insert(outcome_from(arena, z, &profile)?);
            let mut deviated = profile.clone();
            deviated[(i - 1) as usize] = sigma_prime.clone();
            o_prime.insert(outcome_from(arena, z, &deviated)?);
        }
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok((o, o_prime));
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < lists[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Decides whether `sigma_i` is obviously dominant for agent `i` with
/// preference `r_i`, with respect to the partition `s`.
///
/// Quantifies over every strategy combination of `i`'s block peers and every
/// deviation of `i`; at each earliest departure point the whole option set
/// under `sigma_i` must be weakly preferred to the whole option set under
/// the deviation. The total number of strategy combinations (peers ×
/// deviations × outside agents) is bounded by `cap`; combinations are
/// examined in a fixed order and the reported witness is the first failure
/// in that order (evaluation is parallel, the reduction keeps the smallest
/// index).
pub fn is_obviously_dominant(
    arena: &Arena,
    s: &Partition,
    i: AgentId,
    r_i: &Preference,
    sigma_i: &Strategy,
    cap: u64,
) -> Result<Verdict> {
    if s.n() != arena.n() {
        return Err(Error::PreconditionViolated(format!(
            "partition is over {} agents, arena over {}",
            s.n(),
            arena.n()
        )));
    }
    if sigma_i.owner != i {
        return Err(Error::PreconditionViolated(format!(
            "strategy belongs to agent {}, expected {i}",
            sigma_i.owner
        )));
    }
    if i == 0 || i > s.n() {
        return Err(Error::PreconditionViolated(format!(
            "agent {i} outside 1..={}",
            s.n()
        )));
    }
    let block = s.block_of(i);
    let peers: Vec<AgentId> = block.members().into_iter().filter(|&j| j != i).collect();

    let peer_product: u128 = peers.iter().map(|&j| strategy_count(arena, j)).product();
    let own_count = strategy_count(arena, i);
    let outside: Vec<AgentId> = (1..=arena.n()).filter(|a| !block.contains(*a)).collect();
    let outside_prod: u128 = outside.iter().map(|&a| strategy_count(arena, a)).product();
    let required = peer_product
        .saturating_mul(own_count)
        .saturating_mul(outside_prod);
    if required > cap as u128 {
        return Err(Error::SearchSpaceExceeded { required, cap });
    }

    let peer_lists: Vec<Vec<Strategy>> = peers
        .iter()
        .map(|&j| enumerate_strategies(arena, j, cap))
        .collect::<Result<_>>()?;
    let deviations: Vec<Strategy> = enumerate_strategies(arena, i, cap)?
        .into_iter()
        .filter(|d| d != sigma_i)
        .collect();
    // Precompute each deviation's earliest differing sets; they do not
    // depend on the peers.
    let earliest: Vec<Vec<InfoSetId>> = deviations
        .iter()
        .map(|d| earliest_differing_sets(arena, sigma_i, d))
        .collect();

    let combos: u64 = peer_lists.iter().map(|l| l.len() as u64).product();
    let hit = (0..combos)
        .into_par_iter()
        .map(|ix| -> Result<Option<(u64, DominanceWitness)>> {
            // Decode the combo index, last peer varying fastest.
            let mut rem = ix;
            let mut pick = vec![0usize; peer_lists.len()];
            for pos in (0..peer_lists.len()).rev() {
                let len = peer_lists[pos].len() as u64;
                pick[pos] = (rem % len) as usize;
                rem /= len;
            }
            let mut sigma_block: Vec<Strategy> = Vec::with_capacity(peers.len() + 1);
            for (pos, &ix_j) in pick.iter().enumerate() {
                sigma_block.push(peer_lists[pos][ix_j].clone());
            }
            sigma_block.push(sigma_i.clone());
            sigma_block.sort_by_key(|s| s.owner);

            for (d_ix, deviation) in deviations.iter().enumerate() {
                for dp in departure_points(arena, &sigma_block, &earliest[d_ix]) {
                    let (o, o_prime) =
                        option_sets(arena, &sigma_block, deviation, &dp, cap)?;
                    for x in &o {
                        for y in &o_prime {
                            if !r_i.prefers(x, y)? {
                                let block_strategies: Vec<Strategy> = sigma_block
                                    .iter()
                                    .filter(|b| b.owner != i)
                                    .cloned()
                                    .collect();
                                return Ok(Some((
                                    ix,
                                    DominanceWitness {
                                        agent: i,
                                        preference: r_i.clone(),
                                        strategy: sigma_i.clone(),
                                        block_strategies,
                                        deviation: deviation.clone(),
                                        departure: dp.clone(),
                                        following_outcome: x.clone(),
                                        deviating_outcome: y.clone(),
                                    },
                                )));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => None,
                })
            },
        )?;

    Ok(match hit {
        Some((_, w)) => Verdict::failing(Witness::Dominance(w)),
        None => Verdict::passing(),
    })
}

/// Re-establishes a dominance witness from scratch: recomputes the earliest
/// departure points for the witness's strategies, finds the recorded one,
/// recomputes its option sets, and confirms the recorded outcome pair is a
/// strict preference violation. Returns `true` iff every step reproduces.
pub fn replay_dominance_witness(
    arena: &Arena,
    s: &Partition,
    w: &DominanceWitness,
    cap: u64,
) -> Result<bool> {
    if w.agent == 0 || w.agent > s.n() {
        return Err(Error::PreconditionViolated(format!(
            "agent {} outside 1..={}",
            w.agent,
            s.n()
        )));
    }
    let block = s.block_of(w.agent);
    let expected_peers: Vec<AgentId> =
        block.members().into_iter().filter(|&j| j != w.agent).collect();
    let peers_ok = w.block_strategies.iter().map(|b| b.owner).collect::<Vec<_>>() == expected_peers;
    if !peers_ok {
        return Ok(false);
    }
    let mut sigma_block = w.block_strategies.clone();
    sigma_block.push(w.strategy.clone());
    sigma_block.sort_by_key(|b| b.owner);
    let dps = earliest_departures(arena, &sigma_block, w.agent, &w.deviation)?;
    let Some(dp) = dps.iter().find(|dp| **dp == w.departure) else {
        return Ok(false);
    };
    let (o, o_prime) = option_sets(arena, &sigma_block, &w.deviation, dp, cap)?;
    Ok(o.contains(&w.following_outcome)
        && o_prime.contains(&w.deviating_outcome)
        && !w.preference.prefers(&w.following_outcome, &w.deviating_outcome)?)
}

/// Whether the game, played truthfully, decides exactly the rule: for every
/// type profile over the declared domains, playing each agent's
/// type-strategy from the root elects what the rule elects.
pub fn induces(arena: &Arena, tsp: &TypeStrategyProfile, rule: &Rule) -> Result<Verdict> {
    if tsp.n() != arena.n() || rule.n() != arena.n() {
        return Err(Error::PreconditionViolated(format!(
            "agent counts disagree: arena {}, profile {}, rule {}",
            arena.n(),
            tsp.n(),
            rule.n()
        )));
    }
    let root = arena.root()?;
    for profile in type_profiles(&tsp.domains()) {
        let strategies = tsp.profile_for(&profile)?;
        let actual = outcome_from(arena, root, &strategies)?;
        let expected = rule.evaluate(&profile)?;
        if actual != expected {
            return Ok(Verdict::failing(Witness::Induces(InducesWitness {
                profile,
                expected,
                actual,
            })));
        }
    }
    Ok(Verdict::passing())
}

/// Whether the game OSP-implements the rule for partition `s`: truth-telling
/// induces the rule, and every agent's every type-strategy is obviously
/// dominant with respect to `s`. Agents and types are checked in ascending
/// order and the first failure is returned.
pub fn osp_implements(
    arena: &Arena,
    tsp: &TypeStrategyProfile,
    rule: &Rule,
    s: &Partition,
    cap: u64,
) -> Result<Verdict> {
    let induced = induces(arena, tsp, rule)?;
    if !induced.pass {
        return Ok(induced);
    }
    for i in 1..=arena.n() {
        for r_i in tsp.domain(i) {
            let sigma_i = tsp
                .strategy_for(i, &r_i)
                .expect("domain listed by the profile");
            let verdict = is_obviously_dominant(arena, s, i, &r_i, sigma_i, cap)?;
            if !verdict.pass {
                return Ok(verdict);
            }
        }
    }
    Ok(Verdict::passing())
}

/// Whether `sigma_i` is weakly dominant for agent `i` with preference
/// `r_i`: against every strategy combination of all other agents, its
/// outcome is weakly preferred to every deviation's outcome.
pub fn is_weakly_dominant(
    arena: &Arena,
    i: AgentId,
    r_i: &Preference,
    sigma_i: &Strategy,
    cap: u64,
) -> Result<bool> {
    if sigma_i.owner != i {
        return Err(Error::PreconditionViolated(format!(
            "strategy belongs to agent {}, expected {i}",
            sigma_i.owner
        )));
    }
    let others: Vec<AgentId> = (1..=arena.n()).filter(|&a| a != i).collect();
    let others_product: u128 = others.iter().map(|&a| strategy_count(arena, a)).product();
    let required = others_product.saturating_mul(strategy_count(arena, i));
    if required > cap as u128 {
        return Err(Error::SearchSpaceExceeded { required, cap });
    }
    let lists: Vec<Vec<Strategy>> = others
        .iter()
        .map(|&a| enumerate_strategies(arena, a, cap))
        .collect::<Result<_>>()?;
    let deviations = enumerate_strategies(arena, i, cap)?;
    let root = arena.root()?;

    let mut digits = vec![0usize; lists.len()];
    loop {
        let mut profile: Vec<Strategy> = (1..=arena.n()).map(Strategy::new).collect();
        profile[(i - 1) as usize] = sigma_i.clone();
        for (pos, &a) in others.iter().enumerate() {
            profile[(a - 1) as usize] = lists[pos][digits[pos]].clone();
        }
        let honest = outcome_from(arena, root, &profile)?;
        for deviation in &deviations {
            let mut deviated = profile.clone();
            deviated[(i - 1) as usize] = deviation.clone();
            let tempted = outcome_from(arena, root, &deviated)?;
            if !r_i.prefers(&honest, &tempted)? {
                return Ok(false);
            }
        }
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < lists[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Runs [`osp_implements`] for every coarsening of `s_star` (including
/// `s_star` itself and the coarsest partition); passes iff all pass, and
/// returns the first failing coarsening's verdict otherwise.
///
/// Obvious dominance is preserved under coarsening, so on correct inputs a
/// pass at `s_star` makes this a pass — the sweep is the checked form of
/// that monotonicity.
pub fn coarsening_check(
    arena: &Arena,
    tsp: &TypeStrategyProfile,
    rule: &Rule,
    s_star: &Partition,
    cap: u64,
) -> Result<Verdict> {
    for s in s_star.coarsenings() {
        let verdict = osp_implements(arena, tsp, rule, &s, cap)?;
        if !verdict.pass {
            return Ok(verdict);
        }
    }
    Ok(Verdict::passing())
}

/// For a game in the round-table class for `s` whose truth-telling profile
/// implements the rule in weakly dominant strategies, obvious
/// strategy-proofness w.r.t. `s` comes for free; this op checks the
/// hypotheses and then verifies the conclusion outright.
///
/// Fails with [`Error::HypothesisNotMet`] when the game is outside the
/// class, the profile is not truth-telling, the game does not induce the
/// rule, or some type-strategy is not weakly dominant. Otherwise returns
/// the full [`osp_implements`] verdict — which on a sound implementation
/// passes.
pub fn theorem1_property(
    arena: &Arena,
    s: &Partition,
    tsp: &TypeStrategyProfile,
    rule: &Rule,
    cap: u64,
) -> Result<Verdict> {
    let domains = tsp.domains();
    if !is_in_game_class(arena, s, &domains) {
        return Err(Error::HypothesisNotMet(
            "the arena is not a round-table game for the partition".to_owned(),
        ));
    }
    let truthful = truth_telling_profile(arena, &domains)?;
    if truthful != *tsp {
        return Err(Error::HypothesisNotMet(
            "the profile is not the truth-telling profile".to_owned(),
        ));
    }
    let induced = induces(arena, tsp, rule)?;
    if !induced.pass {
        return Err(Error::HypothesisNotMet(
            "truth-telling does not induce the rule".to_owned(),
        ));
    }
    for i in 1..=arena.n() {
        for r_i in tsp.domain(i) {
            let sigma_i = tsp.strategy_for(i, &r_i).expect("domain listed");
            if !is_weakly_dominant(arena, i, &r_i, sigma_i, cap)? {
                return Err(Error::HypothesisNotMet(format!(
                    "agent {i}'s truth-telling strategy is not weakly dominant"
                )));
            }
        }
    }
    osp_implements(arena, tsp, rule, s, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{figure1_game, fixtures::figure1_committee, info_precedes, prune, relabel};
    use crate::model::Coalition;

    fn star() -> Partition {
        Partition::from_lists(5, vec![vec![1, 2], vec![3], vec![4, 5]]).unwrap()
    }

    fn fixture_rule() -> Rule {
        Rule::Committee(figure1_committee())
    }

    /// Strategy of `agent` playing token `t` at every owned set.
    fn token_everywhere(arena: &Arena, agent: AgentId, t: &str) -> Strategy {
        let mut s = Strategy::new(agent);
        for iid in arena.agent_info_sets(agent) {
            s.assign(iid, crate::game::ChoiceLabel::token(t));
        }
        s
    }

    #[test]
    fn departure_restriction_follows_the_block() {
        let (arena, _) = figure1_game();
        let sigma_1 = token_everywhere(&arena, 1, "y");
        let sigma_2 = token_everywhere(&arena, 2, "y");
        let sigma_2_dev = token_everywhere(&arena, 2, "x");

        // Block {1,2}: agent 1's play y makes only z1 (node 1) reachable.
        let dps =
            earliest_departures(&arena, &[sigma_1, sigma_2.clone()], 2, &sigma_2_dev).unwrap();
        assert_eq!(
            dps,
            vec![DeparturePoint { info_set: 1, compatible_nodes: vec![1] }]
        );

        // Block {2} alone: agent 1 is outside, both member nodes compatible.
        let dps = earliest_departures(&arena, &[sigma_2.clone()], 2, &sigma_2_dev).unwrap();
        assert_eq!(
            dps,
            vec![DeparturePoint { info_set: 1, compatible_nodes: vec![1, 2] }]
        );

        // No disagreement at all is an error.
        assert_eq!(
            earliest_departures(&arena, &[sigma_2.clone()], 2, &sigma_2),
            Err(Error::IdenticalStrategies)
        );
    }

    #[test]
    fn precedence_between_information_sets() {
        let (arena, _) = figure1_game();
        // Agent 1's set precedes agent 2's pooled set.
        assert!(info_precedes(&arena, 0, 1));
        // Agent 2's set does not precede agent 5's: the x-branch member
        // never reaches that part of the tree.
        assert!(!info_precedes(&arena, 1, 4));
        // Irreflexive.
        assert!(!info_precedes(&arena, 1, 1));
    }

    #[test]
    fn option_sets_match_the_worked_examples() {
        let (arena, tsp) = figure1_game();
        let cap = DEFAULT_CAP;

        // Agent 1 with P^x, peer 2 plays x; deviation to y.
        let sigma_1 = tsp.strategy_for(1, &Preference::p_x()).unwrap().clone();
        let sigma_2x = token_everywhere(&arena, 2, "x");
        let dev_1 = token_everywhere(&arena, 1, "y");
        let block = vec![sigma_1.clone(), sigma_2x.clone()];
        let dps = earliest_departures(&arena, &block, 1, &dev_1).unwrap();
        assert_eq!(dps.len(), 1);
        let (o, o2) = option_sets(&arena, &block, &dev_1, &dps[0], cap).unwrap();
        assert_eq!(o, BTreeSet::from([Alternative::x()]));
        assert_eq!(o2, BTreeSet::from([Alternative::x(), Alternative::y()]));

        // Same but peer 2 plays y.
        let sigma_2y = token_everywhere(&arena, 2, "y");
        let block = vec![sigma_1.clone(), sigma_2y];
        let dps = earliest_departures(&arena, &block, 1, &dev_1).unwrap();
        let (o, o2) = option_sets(&arena, &block, &dev_1, &dps[0], cap).unwrap();
        assert_eq!(o, BTreeSet::from([Alternative::x(), Alternative::y()]));
        assert_eq!(o2, BTreeSet::from([Alternative::y()]));

        // Agent 4 with P^x in block {4,5}, peer 5 plays x; deviation to y.
        let sigma_4 = tsp.strategy_for(4, &Preference::p_x()).unwrap().clone();
        let sigma_5x = token_everywhere(&arena, 5, "x");
        let dev_4 = token_everywhere(&arena, 4, "y");
        let block = vec![sigma_4, sigma_5x];
        let dps = earliest_departures(&arena, &block, 4, &dev_4).unwrap();
        let (o, o2) = option_sets(&arena, &block, &dev_4, &dps[0], cap).unwrap();
        assert_eq!(o, BTreeSet::from([Alternative::x()]));
        assert_eq!(o2, BTreeSet::from([Alternative::y()]));
    }

    #[test]
    fn both_option_set_routes_agree_on_the_fixture() {
        let (arena, tsp) = figure1_game();
        let cap = DEFAULT_CAP;
        let cases: [(AgentId, Vec<AgentId>); 5] =
            [(1, vec![2]), (2, vec![1]), (4, vec![5]), (5, vec![4]), (3, vec![])];
        for (i, peers) in cases {
            for r in [Preference::p_x(), Preference::p_y()] {
                let sigma_i = tsp.strategy_for(i, &r).unwrap().clone();
                let opposite = if r == Preference::p_x() { "y" } else { "x" };
                let dev = token_everywhere(&arena, i, opposite);
                for peer_token in ["x", "y"] {
                    let mut block = vec![sigma_i.clone()];
                    for &p in &peers {
                        block.push(token_everywhere(&arena, p, peer_token));
                    }
                    block.sort_by_key(|s| s.owner);
                    for dp in earliest_departures(&arena, &block, i, &dev).unwrap() {
                        let fast = option_sets(&arena, &block, &dev, &dp, cap).unwrap();
                        let slow =
                            option_sets_by_enumeration(&arena, &block, &dev, &dp, cap).unwrap();
                        assert_eq!(fast, slow);
                    }
                }
            }
        }
    }

    #[test]
    fn fixture_is_osp_for_its_partition_but_not_finest() {
        let (arena, tsp) = figure1_game();
        let rule = fixture_rule();
        let verdict = osp_implements(&arena, &tsp, &rule, &star(), DEFAULT_CAP).unwrap();
        assert!(verdict.pass, "witness: {:?}", verdict.witness);

        let finest = Partition::finest(5).unwrap();
        let verdict = osp_implements(&arena, &tsp, &rule, &finest, DEFAULT_CAP).unwrap();
        assert!(!verdict.pass);
        let Some(Witness::Dominance(w)) = verdict.witness else {
            panic!("expected a dominance witness");
        };
        assert!(replay_dominance_witness(&arena, &finest, &w, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn induces_failure_names_the_profile() {
        let (arena, tsp) = figure1_game();
        // Majority of five disagrees with the fixture's committee somewhere.
        let mut three_subsets = Vec::new();
        for a in 1u32..=5 {
            for b in (a + 1)..=5 {
                for c in (b + 1)..=5 {
                    three_subsets.push(Coalition::from_members(&[a, b, c]));
                }
            }
        }
        let majority = Committee::new(5, three_subsets).unwrap();
        let verdict = induces(&arena, &tsp, &Rule::Committee(majority)).unwrap();
        assert!(!verdict.pass);
        let Some(Witness::Induces(w)) = verdict.witness else {
            panic!("expected an induces witness");
        };
        assert_ne!(w.expected, w.actual);
    }

    #[test]
    fn truth_is_weakly_dominant_in_the_fixture() {
        let (arena, tsp) = figure1_game();
        for i in 1..=5 {
            for r in [Preference::p_x(), Preference::p_y()] {
                let sigma = tsp.strategy_for(i, &r).unwrap();
                assert!(
                    is_weakly_dominant(&arena, i, &r, sigma, DEFAULT_CAP).unwrap(),
                    "agent {i} at {r:?}"
                );
            }
        }
    }

    #[test]
    fn coarsenings_of_the_fixture_partition_all_pass() {
        let (arena, tsp) = figure1_game();
        let verdict =
            coarsening_check(&arena, &tsp, &fixture_rule(), &star(), DEFAULT_CAP).unwrap();
        assert!(verdict.pass);
    }

    #[test]
    fn class_theorem_on_the_relabelled_fixture() {
        let (arena, tsp) = figure1_game();
        let pruned = prune(&arena, &tsp).unwrap();
        let relabelled = relabel(&pruned, &tsp).unwrap();
        let tsp2 = truth_telling_profile(&relabelled, &tsp.domains()).unwrap();
        let verdict =
            theorem1_property(&relabelled, &star(), &tsp2, &fixture_rule(), DEFAULT_CAP).unwrap();
        assert!(verdict.pass);

        // The same game is not a round table for the finest partition.
        let finest = Partition::finest(5).unwrap();
        assert!(matches!(
            theorem1_property(&relabelled, &finest, &tsp2, &fixture_rule(), DEFAULT_CAP),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn caps_are_enforced() {
        let (arena, tsp) = figure1_game();
        let sigma_1 = tsp.strategy_for(1, &Preference::p_x()).unwrap();
        assert!(matches!(
            is_obviously_dominant(&arena, &star(), 1, &Preference::p_x(), sigma_1, 1),
            Err(Error::SearchSpaceExceeded { .. })
        ));
        let block = vec![sigma_1.clone(), tsp.strategy_for(2, &Preference::p_x()).unwrap().clone()];
        let dev = token_everywhere(&arena, 1, "y");
        let dp = DeparturePoint { info_set: 0, compatible_nodes: vec![0] };
        assert!(matches!(
            option_sets(&arena, &block, &dev, &dp, 1),
            Err(Error::SearchSpaceExceeded { required: 8, cap: 1 })
        ));
    }

    #[test]
    fn table_and_committee_rules_agree() {
        let committee = figure1_committee();
        let table = ScfTable::from_committee(&committee).unwrap();
        let as_table = Rule::Table(table);
        let as_committee = Rule::Committee(committee);
        for bits in 0u64..32 {
            let profile =
                Profile::from_x_supporters(5, Coalition::from_bits(bits)).unwrap();
            assert_eq!(
                as_table.evaluate(&profile).unwrap(),
                as_committee.evaluate(&profile).unwrap()
            );
        }
    }
}
