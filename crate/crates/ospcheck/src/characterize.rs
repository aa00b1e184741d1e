//! Characterizing the committees whose voting rules admit obviously
//! strategy-proof implementations, for committees anonymous relative to a
//! partition.
//!
//! The positive half is constructive: an ordering `Sᵒ = (S_1, …, S_K)` of
//! the blocks and a compatible quota vector `Q` generate a committee whose
//! minimal winning coalitions are, level by level, a full quota of earlier
//! blocks plus one member over quota in the current block
//! ([`generate_quota_committee`]); the corresponding quota game then
//! OSP-implements the rule. The decision procedure
//! ([`decide_osp_anonymous`]) searches the block orderings for quotas that
//! reproduce a given committee, and [`certify`] packages a successful
//! search into a checked, replayable [`Certificate`]. A strongly anonymous
//! committee (a pure quota rule) admits a closed-form answer
//! ([`decide_osp_strong`]), and [`lemma2_conditions`] exposes the two
//! structural conditions that make the search's failures principled.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::committee::Committee;
use crate::error::{Error, Result};
use crate::game::{build_quota_game, truth_telling_profile, Arena};
use crate::model::{Coalition, OrderedPartition, Partition, Preference, QuotaVector};
use crate::verify::{osp_implements, Rule, Verdict};

/// Hard cap on the number of blocks the ordering search will take on
/// (`K!` orderings are enumerated).
pub const MAX_DECIDE_BLOCKS: usize = 10;

/// The committee generated by an ordered partition and compatible quotas.
///
/// Level `k` contributes every coalition assembled from exactly `q_t`
/// members of each earlier block `S_t` (`t < k`) plus exactly `q_k + 1`
/// members of `S_k`; a level with `q_k = |S_k|` contributes nothing (there
/// is no room for the member over quota). The union over levels is returned
/// as a committee and is asserted to be an antichain along the way.
///
/// ```
/// use ospcheck::characterize::generate_quota_committee;
/// use ospcheck::model::{OrderedPartition, QuotaVector};
///
/// let s_o = OrderedPartition::from_lists(3, vec![vec![1, 2], vec![3]]).unwrap();
/// let c = generate_quota_committee(&s_o, &QuotaVector::new(vec![1, 0])).unwrap();
/// assert_eq!(
///     c.minimal().iter().map(|m| m.members()).collect::<Vec<_>>(),
///     vec![vec![1, 2], vec![1, 3], vec![2, 3]],
/// );
/// ```
pub fn generate_quota_committee(
    s_o: &OrderedPartition,
    q: &QuotaVector,
) -> Result<Committee> {
    if !q.is_compatible_with(s_o) {
        return Err(Error::IncompatibleQuotas(format!(
            "quotas {q} are not compatible with {s_o}"
        )));
    }
    let blocks = s_o.blocks();
    let quotas = q.quotas();
    let mut family: Vec<Coalition> = Vec::new();
    for k in 0..blocks.len() {
        if quotas[k] == blocks[k].size() {
            continue;
        }
        // Exact quotas from every earlier block...
        let mut prefixes = vec![Coalition::empty()];
        for t in 0..k {
            let members = blocks[t].members();
            let mut next = Vec::new();
            for combo in members.into_iter().combinations(quotas[t] as usize) {
                let picked = Coalition::from_members(&combo);
                for p in &prefixes {
                    next.push(p.union(&picked));
                }
            }
            prefixes = next;
        }
        // ...plus one member over quota in the current block.
        for combo in blocks[k]
            .members()
            .into_iter()
            .combinations(quotas[k] as usize + 1)
        {
            let level_part = Coalition::from_members(&combo);
            for p in &prefixes {
                family.push(p.union(&level_part));
            }
        }
    }
    for (a_ix, a) in family.iter().enumerate() {
        for b in &family[a_ix + 1..] {
            if a.is_subset_of(b) || b.is_subset_of(a) {
                return Err(Error::NotAntichain { a: a.members(), b: b.members() });
            }
        }
    }
    Committee::new(s_o.n(), family)
}

fn check_decide_preconditions(c: &Committee, s: &Partition) -> Result<()> {
    if c.n() != s.n() {
        return Err(Error::PreconditionViolated(format!(
            "committee is over {} agents, partition over {}",
            c.n(),
            s.n()
        )));
    }
    if !c.is_anonymous_rel(s) {
        return Err(Error::PreconditionViolated(
            "the committee is not anonymous relative to the partition".to_owned(),
        ));
    }
    if s.k() > MAX_DECIDE_BLOCKS {
        return Err(Error::PreconditionViolated(format!(
            "the ordering search enumerates K! orderings and stops at K = {MAX_DECIDE_BLOCKS}; \
             got K = {}",
            s.k()
        )));
    }
    Ok(())
}

/// The quotas forced by a witness coalition under a candidate ordering:
/// `q_t = |M* ∩ S_t|` for earlier blocks and one less in the last block.
fn derived_quotas(s_o: &OrderedPartition, m_star: &Coalition) -> QuotaVector {
    let last = s_o.k() - 1;
    QuotaVector::new(
        s_o.blocks()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let inter = m_star.intersect(b).size();
                if k == last {
                    inter - 1
                } else {
                    inter
                }
            })
            .collect(),
    )
}

fn decide_impl(
    c: &Committee,
    s: &Partition,
    use_fast_path: bool,
) -> Result<Option<(OrderedPartition, QuotaVector)>> {
    check_decide_preconditions(c, s)?;
    let k = s.k();
    let target = c.minimal();
    for perm in (0..k).permutations(k) {
        let ordered: Vec<Coalition> = perm.iter().map(|&ix| s.blocks()[ix]).collect();
        let s_o = OrderedPartition::new(s.n(), ordered).expect("blocks form a partition");
        let last_block = s_o.blocks()[k - 1];

        // Fast path: any minimal coalition meeting the last block pins the
        // only quota vector this ordering could use.
        let mut tried: Option<QuotaVector> = None;
        if use_fast_path {
            if let Some(m_star) = target.iter().find(|m| !m.intersect(&last_block).is_empty()) {
                let q = derived_quotas(&s_o, m_star);
                if q.is_compatible_with(&s_o) {
                    let generated = generate_quota_committee(&s_o, &q)?;
                    if generated.minimal() == target {
                        return Ok(Some((s_o, q)));
                    }
                    tried = Some(q);
                }
            }
        }

        // Grid: every compatible quota vector, ascending lexicographically.
        let dims: Vec<u32> = s_o.blocks().iter().map(|b| b.size()).collect();
        let mut digits = vec![0u32; k];
        loop {
            let q = QuotaVector::new(digits.clone());
            if Some(&q) != tried.as_ref() {
                let generated = generate_quota_committee(&s_o, &q)?;
                if generated.minimal() == target {
                    return Ok(Some((s_o, q)));
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                let bound = if pos + 1 == k { dims[pos] - 1 } else { dims[pos] };
                if digits[pos] <= bound {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(None)
}

/// Decides whether the rule of a committee anonymous relative to `s` has an
/// obviously strategy-proof implementation with respect to `s`; on success
/// returns a block ordering and compatible quotas that generate exactly the
/// committee.
///
/// All `K!` orderings are searched in lexicographic order of the canonical
/// blocks. For each ordering the quota vector forced by a witness coalition
/// is tried first, then the full compatible grid; the first match wins, and
/// since an ordering admits at most one matching quota vector the answer is
/// the lexicographically first `(ordering, quotas)` pair.
///
/// Requires the committee to be anonymous relative to `s` — outside that
/// hypothesis the search would prove nothing, so it is a hard precondition.
pub fn decide_osp_anonymous(
    c: &Committee,
    s: &Partition,
) -> Result<Option<(OrderedPartition, QuotaVector)>> {
    decide_impl(c, s, true)
}

/// Grid-only form of [`decide_osp_anonymous`]: identical contract, but every
/// ordering scans its full compatible-quota grid with no derived-quota
/// shortcut. Kept public as the independent second route; the two must
/// agree everywhere.
pub fn decide_osp_anonymous_grid(
    c: &Committee,
    s: &Partition,
) -> Result<Option<(OrderedPartition, QuotaVector)>> {
    decide_impl(c, s, false)
}

/// Closed-form decision for strongly anonymous committees (pure quota
/// rules, winning = any `q` agents): obviously strategy-proof
/// implementability with respect to `s` holds iff `q ∈ {1, n}`, or `s` has
/// a single block, or `s` has two blocks one of which is a singleton.
///
/// The three conditions overlap; the predicate is their plain disjunction.
/// Requires [`Committee::strong_anonymity_quota`] to be present.
pub fn decide_osp_strong(c: &Committee, s: &Partition) -> Result<bool> {
    if c.n() != s.n() {
        return Err(Error::PreconditionViolated(format!(
            "committee is over {} agents, partition over {}",
            c.n(),
            s.n()
        )));
    }
    let q = c.strong_anonymity_quota().ok_or_else(|| {
        Error::PreconditionViolated("the committee is not strongly anonymous".to_owned())
    })?;
    let n = c.n();
    let k = s.k();
    Ok(q == 1
        || q == n
        || k == 1
        || (k == 2 && s.blocks().iter().any(|b| b.size() == 1)))
}

/// Evaluates the two structural conditions a block prefix `(S_1, …, S_k)`
/// must satisfy wherever an obviously strategy-proof implementation exists,
/// returning one boolean per condition.
///
/// Writing `U = S_1 ∪ … ∪ S_k`, call a minimal winning coalition `M`
/// *unsettled* when `M ∩ U` is not itself winning. Condition (i): all
/// unsettled coalitions draw the same number of members from `S_k`.
/// Condition (ii): for every unsettled `M` and every `i ∈ S_k ∖ M`, adding
/// `i` to `M ∩ U` yields a winning coalition. Both hold vacuously when no
/// coalition is unsettled.
///
/// The blocks must be pairwise disjoint subsets of the committee's agents;
/// this is the caller's responsibility.
pub fn lemma2_conditions(c: &Committee, prefix: &[Coalition]) -> (bool, bool) {
    let union = prefix
        .iter()
        .fold(Coalition::empty(), |acc, b| acc.union(b));
    let last = prefix.last().copied().unwrap_or_else(Coalition::empty);
    let unsettled: Vec<&Coalition> = c
        .minimal()
        .iter()
        .filter(|m| !c.is_winning(&m.intersect(&union)))
        .collect();

    let sizes: BTreeSet<u32> = unsettled.iter().map(|m| m.intersect(&last).size()).collect();
    let cond_i = sizes.len() <= 1;

    let mut cond_ii = true;
    for m in &unsettled {
        let stub = m.intersect(&union);
        for i in last.minus(m).iter() {
            if !c.is_winning(&stub.insert(i)) {
                cond_ii = false;
            }
        }
    }
    (cond_i, cond_ii)
}

/// A checked witness that a committee's rule is obviously strategy-proof
/// with respect to a partition: the ordering and quotas found by the
/// decision procedure, the quota game they build, and the full
/// verification report of that game against the rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// The block ordering the decision procedure found.
    pub ordering: OrderedPartition,
    /// The compatible quotas generating the committee.
    pub quotas: QuotaVector,
    /// The quota game for `(ordering, quotas)`.
    pub arena: Arena,
    /// The [`osp_implements`] report of the arena against the committee's
    /// rule; passes whenever the pipeline is sound.
    pub report: Verdict,
}

/// Runs the decision procedure and, on success, independently re-verifies
/// the answer: builds the quota game, forms its truth-telling profile, and
/// checks with [`osp_implements`] that it induces the committee's rule with
/// every type-strategy obviously dominant for `s`. The embedded report is
/// returned as evidence rather than trusted.
///
/// Fails with [`Error::NotOsp`] when the decision procedure finds no
/// ordering and quotas.
pub fn certify(c: &Committee, s: &Partition, cap: u64) -> Result<Certificate> {
    let Some((ordering, quotas)) = decide_osp_anonymous(c, s)? else {
        return Err(Error::NotOsp);
    };
    let arena = build_quota_game(&ordering, &quotas)?;
    let domains: Vec<Vec<Preference>> = (0..arena.n())
        .map(|_| vec![Preference::p_x(), Preference::p_y()])
        .collect();
    let tsp = truth_telling_profile(&arena, &domains)?;
    let report = osp_implements(&arena, &tsp, &Rule::Committee(c.clone()), s, cap)?;
    Ok(Certificate { ordering, quotas, arena, report })
}

/// Enumerates every committee anonymous relative to `s`, in a fixed
/// deterministic order.
///
/// Membership of a coalition in such a committee depends only on how many
/// members it draws from each block, so the committees correspond to the
/// nonconstant monotone 0/1-labelings of the count-vector grid
/// `∏_k {0, …, |S_k|}` whose minimal winning points leave no block
/// everywhere at zero (no dummy block). Intended for small grids — the
/// count grows like a Dedekind number in the number of grid cells.
pub fn enumerate_anonymous_committees(s: &Partition) -> Vec<Committee> {
    enumerate_grid_upsets(s, true)
}

/// Enumerates every committee over `n` agents: the finest partition's grid
/// is the Boolean lattice, every committee is anonymous relative to it, and
/// no dummy filter is applied. Intended for `n ≤ 5`.
pub fn enumerate_committees(n: u32) -> Result<Vec<Committee>> {
    Ok(enumerate_grid_upsets(&Partition::finest(n)?, false))
}

fn enumerate_grid_upsets(s: &Partition, require_no_dummies: bool) -> Vec<Committee> {
    let blocks = s.blocks();
    let dims: Vec<u32> = blocks.iter().map(|b| b.size()).collect();

    // All grid points, ordered so that every `p + e_k` precedes `p`.
    let mut points: Vec<Vec<u32>> = vec![vec![]];
    for &d in &dims {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=d).map(move |coord| {
                    let mut q = p.clone();
                    q.push(coord);
                    q
                })
            })
            .collect();
    }
    points.sort_by_key(|p| std::cmp::Reverse(p.iter().sum::<u32>()));
    let index: HashMap<Vec<u32>, usize> =
        points.iter().enumerate().map(|(ix, p)| (p.clone(), ix)).collect();

    let mut out = Vec::new();
    let mut winning = vec![false; points.len()];
    descend(
        s,
        &dims,
        &points,
        &index,
        &mut winning,
        0,
        require_no_dummies,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    s: &Partition,
    dims: &[u32],
    points: &[Vec<u32>],
    index: &HashMap<Vec<u32>, usize>,
    winning: &mut Vec<bool>,
    at: usize,
    require_no_dummies: bool,
    out: &mut Vec<Committee>,
) {
    if at == points.len() {
        if let Some(c) = committee_of_labeling(s, dims, points, index, winning, require_no_dummies)
        {
            out.push(c);
        }
        return;
    }
    // Winning only if every coordinate step up is winning (monotonicity).
    let p = &points[at];
    let can_win = (0..dims.len()).all(|k| {
        if p[k] == dims[k] {
            return true;
        }
        let mut up = p.clone();
        up[k] += 1;
        winning[index[&up]]
    });
    if can_win {
        winning[at] = true;
        descend(s, dims, points, index, winning, at + 1, require_no_dummies, out);
    }
    winning[at] = false;
    descend(s, dims, points, index, winning, at + 1, require_no_dummies, out);
}

fn committee_of_labeling(
    s: &Partition,
    dims: &[u32],
    points: &[Vec<u32>],
    index: &HashMap<Vec<u32>, usize>,
    winning: &[bool],
    require_no_dummies: bool,
) -> Option<Committee> {
    // Nonconstant: some winning point, and the all-zero vector losing.
    if !winning.iter().any(|&w| w) {
        return None;
    }
    let zero = vec![0u32; dims.len()];
    if winning[index[&zero]] {
        return None;
    }
    // Minimal winning points: winning with every coordinate step down losing.
    let minimal_points: Vec<&Vec<u32>> = points
        .iter()
        .enumerate()
        .filter(|&(ix, p)| {
            winning[ix]
                && (0..dims.len()).all(|k| {
                    if p[k] == 0 {
                        return true;
                    }
                    let mut down = p.clone();
                    down[k] -= 1;
                    !winning[index[&down]]
                })
        })
        .map(|(_, p)| p)
        .collect();
    if require_no_dummies {
        let covered =
            (0..dims.len()).all(|k| minimal_points.iter().any(|p| p[k] > 0));
        if !covered {
            return None;
        }
    }
    // Expand each minimal point into the coalitions with those block counts.
    let mut family = Vec::new();
    for p in minimal_points {
        let mut partial = vec![Coalition::empty()];
        for (k, block) in s.blocks().iter().enumerate() {
            let members = block.members();
            let mut next = Vec::new();
            for combo in members.into_iter().combinations(p[k] as usize) {
                let picked = Coalition::from_members(&combo);
                for acc in &partial {
                    next.push(acc.union(&picked));
                }
            }
            partial = next;
        }
        family.extend(partial);
    }
    Some(Committee::new(s.n(), family).expect("count-grid expansion is an antichain"))
}
