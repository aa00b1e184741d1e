//! Ground types: agents, alternatives, preferences, profiles, coalitions,
//! partitions, ordered partitions and quota vectors.
//!
//! Agents are numbered `1..=n` with `n <= 64`, so a coalition fits in one
//! `u64` bitmask. Preferences are weak orders given as tiers from best to
//! worst. Partitions are kept in a canonical order (blocks sorted by their
//! smallest member) so that structural equality is semantic equality;
//! ordered partitions preserve the order they were given in, because for
//! quota games the order is part of the data.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Agents are identified by `1..=n`.
pub type AgentId = u32;

/// The set of agents `{1, …, n}` with `1 <= n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct AgentSet {
    n: u32,
}

impl AgentSet {
    /// Creates the agent set `{1, …, n}`; `n` must lie in `1..=64`.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::AgentCount { n: n as u64 });
        }
        Ok(AgentSet { n })
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Iterates over `1..=n`.
    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        1..=self.n
    }

    /// The coalition containing every agent.
    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.n)
    }
}

impl TryFrom<u64> for AgentSet {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::AgentCount { n });
        }
        AgentSet::new(n as u32)
    }
}

impl From<AgentSet> for u64 {
    fn from(s: AgentSet) -> u64 {
        s.n as u64
    }
}

/// An alternative, identified by a short label.
///
/// The two-alternative theory uses `"x"` and `"y"`, but arenas may carry any
/// labels. Ordering is lexicographic on the label, which gives deterministic
/// tie-breaking everywhere a "first" alternative is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alternative(pub String);

impl Alternative {
    /// The alternative labelled `"x"`.
    pub fn x() -> Self {
        Alternative("x".to_owned())
    }

    /// The alternative labelled `"y"`.
    pub fn y() -> Self {
        Alternative("y".to_owned())
    }

    /// The label as a string slice.
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Alternative {
    fn from(s: &str) -> Self {
        Alternative(s.to_owned())
    }
}

impl From<String> for Alternative {
    fn from(s: String) -> Self {
        Alternative(s)
    }
}

/// A weak order over a finite set of alternatives, as tiers from best to
/// worst: everything in tier 0 is strictly preferred to everything in tier 1,
/// and alternatives within one tier are indifferent.
///
/// Tiers are sorted internally at construction, so equal preferences compare
/// equal and the derived `Ord` is canonical.
///
/// ```
/// use ospcheck::model::Preference;
///
/// let p = Preference::new(vec![vec!["x".into()], vec!["y".into(), "z".into()]]).unwrap();
/// assert_eq!(p.top().unwrap().as_str(), "x");
/// assert!(p.prefers(&"y".into(), &"z".into()).unwrap());
/// assert!(!p.strictly_prefers(&"y".into(), &"z".into()).unwrap());
/// ```
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Alternative>>", into = "Vec<Vec<Alternative>>")]
pub struct Preference {
    tiers: Vec<Vec<Alternative>>,
}

impl Preference {
    /// Builds a preference from tiers listed best-first.
    ///
    /// Every tier must be non-empty and no label may appear twice.
    pub fn new(tiers: Vec<Vec<Alternative>>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::InvalidPreference("no tiers".to_owned()));
        }
        let mut seen = BTreeSet::new();
        for tier in &tiers {
            if tier.is_empty() {
                return Err(Error::InvalidPreference("empty tier".to_owned()));
            }
            for a in tier {
                if !seen.insert(a.clone()) {
                    return Err(Error::InvalidPreference(format!(
                        "alternative {:?} appears twice",
                        a.as_str()
                    )));
                }
            }
        }
        let mut tiers = tiers;
        for tier in &mut tiers {
            tier.sort();
        }
        Ok(Preference { tiers })
    }

    /// A strict preference: one alternative per tier, best first.
    pub fn strict<I, A>(order: I) -> Result<Self>
    where
        I: IntoIterator<Item = A>,
        A: Into<Alternative>,
    {
        Preference::new(order.into_iter().map(|a| vec![a.into()]).collect())
    }

    /// The strict two-alternative preference `x ≻ y` (written `Pˣ`).
    pub fn p_x() -> Self {
        Preference::strict(["x", "y"]).expect("fixed strict order is valid")
    }

    /// The strict two-alternative preference `y ≻ x` (written `Pʸ`).
    pub fn p_y() -> Self {
        Preference::strict(["y", "x"]).expect("fixed strict order is valid")
    }

    /// The tiers, best first; each tier is sorted by label.
    pub fn tiers(&self) -> &[Vec<Alternative>] {
        &self.tiers
    }

    /// All ranked alternatives, sorted by label.
    pub fn alternatives(&self) -> Vec<Alternative> {
        let mut all: Vec<Alternative> = self.tiers.iter().flatten().cloned().collect();
        all.sort();
        all
    }

    /// The index of the tier containing `a` (0 = best).
    pub fn tier_of(&self, a: &Alternative) -> Result<usize> {
        self.tiers
            .iter()
            .position(|tier| tier.contains(a))
            .ok_or_else(|| Error::UnknownAlternative {
                label: a.as_str().to_owned(),
            })
    }

    /// The unique best alternative, if the top tier is a singleton.
    pub fn top(&self) -> Result<Alternative> {
        match self.tiers[0].as_slice() {
            [unique] => Ok(unique.clone()),
            tied => Err(Error::AmbiguousTop { size: tied.len() }),
        }
    }

    /// Weak preference `a R b`: the tier of `a` is at least as good.
    pub fn prefers(&self, a: &Alternative, b: &Alternative) -> Result<bool> {
        Ok(self.tier_of(a)? <= self.tier_of(b)?)
    }

    /// Strict preference `a P b`: the tier of `a` is strictly better.
    pub fn strictly_prefers(&self, a: &Alternative, b: &Alternative) -> Result<bool> {
        Ok(self.tier_of(a)? < self.tier_of(b)?)
    }

    /// Whether every tier is a singleton.
    pub fn is_strict(&self) -> bool {
        self.tiers.iter().all(|tier| tier.len() == 1)
    }
}

impl TryFrom<Vec<Vec<Alternative>>> for Preference {
    type Error = Error;
    fn try_from(tiers: Vec<Vec<Alternative>>) -> Result<Self> {
        Preference::new(tiers)
    }
}

impl From<Preference> for Vec<Vec<Alternative>> {
    fn from(p: Preference) -> Self {
        p.tiers
    }
}

/// One preference per agent; agent `i` sits at index `i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile {
    prefs: Vec<Preference>,
}

impl Profile {
    /// Wraps a list of preferences, one per agent in order `1..=n`.
    pub fn new(prefs: Vec<Preference>) -> Result<Self> {
        if prefs.is_empty() || prefs.len() > 64 {
            return Err(Error::AgentCount {
                n: prefs.len() as u64,
            });
        }
        Ok(Profile { prefs })
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.prefs.len() as u32
    }

    /// Agent `i`'s preference.
    pub fn get(&self, agent: AgentId) -> &Preference {
        &self.prefs[(agent - 1) as usize]
    }

    /// All preferences in agent order.
    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    /// Replaces agent `i`'s preference, returning the modified profile.
    pub fn with(&self, agent: AgentId, pref: Preference) -> Profile {
        let mut prefs = self.prefs.clone();
        prefs[(agent - 1) as usize] = pref;
        Profile { prefs }
    }

    /// The strict two-alternative profile in which exactly the members of
    /// `x_supporters` hold `Pˣ` and everyone else holds `Pʸ`.
    pub fn from_x_supporters(n: u32, x_supporters: Coalition) -> Result<Profile> {
        let set = AgentSet::new(n)?;
        Profile::new(
            set.agents()
                .map(|i| {
                    if x_supporters.contains(i) {
                        Preference::p_x()
                    } else {
                        Preference::p_y()
                    }
                })
                .collect(),
        )
    }

    /// The coalition of agents whose unique top is `a`.
    pub fn supporters_of(&self, a: &Alternative) -> Result<Coalition> {
        let mut c = Coalition::empty();
        for (idx, p) in self.prefs.iter().enumerate() {
            if &p.top()? == a {
                c = c.insert(idx as u32 + 1);
            }
        }
        Ok(c)
    }
}

/// A set of agents, packed into a `u64` bitmask (bit `i - 1` stands for
/// agent `i`).
///
/// Coalitions are ordered lexicographically by their ascending member lists,
/// which is the order used for canonical listings and deterministic
/// tie-breaking.
///
/// ```
/// use ospcheck::model::Coalition;
///
/// let c = Coalition::from_members(&[2, 5, 1]);
/// assert_eq!(c.members(), vec![1, 2, 5]);
/// assert!(c.is_subset_of(&Coalition::full(5)));
/// assert_eq!(c.to_string(), "{1,2,5}");
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<AgentId>", into = "Vec<AgentId>")]
pub struct Coalition(u64);

impl Coalition {
    /// The empty coalition.
    pub fn empty() -> Self {
        Coalition(0)
    }

    /// The grand coalition `{1, …, n}`.
    pub fn full(n: u32) -> Self {
        debug_assert!(n >= 1 && n <= 64);
        if n == 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    /// The coalition with exactly the given members.
    pub fn from_members(members: &[AgentId]) -> Self {
        let mut bits = 0u64;
        for &i in members {
            debug_assert!(i >= 1 && i <= 64);
            bits |= 1u64 << (i - 1);
        }
        Coalition(bits)
    }

    /// The singleton `{i}`.
    pub fn singleton(i: AgentId) -> Self {
        Coalition::from_members(&[i])
    }

    /// The raw bitmask.
    pub fn bits(&self) -> u64 {
        self.0
    }

    /// Reconstructs a coalition from a raw bitmask.
    pub fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    /// Whether agent `i` is a member.
    pub fn contains(&self, i: AgentId) -> bool {
        debug_assert!(i >= 1 && i <= 64);
        self.0 & (1u64 << (i - 1)) != 0
    }

    /// This coalition with agent `i` added.
    pub fn insert(&self, i: AgentId) -> Self {
        Coalition(self.0 | (1u64 << (i - 1)))
    }

    /// This coalition with agent `i` removed.
    pub fn remove(&self, i: AgentId) -> Self {
        Coalition(self.0 & !(1u64 << (i - 1)))
    }

    /// Set union.
    pub fn union(&self, other: &Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    /// Set intersection.
    pub fn intersect(&self, other: &Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    /// Set difference `self ∖ other`.
    pub fn minus(&self, other: &Coalition) -> Self {
        Coalition(self.0 & !other.0)
    }

    /// Number of members.
    pub fn size(&self) -> u32 {
        self.0.count_ones()
    }

    /// Whether the coalition has no members.
    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Whether `self ⊂ other` strictly.
    pub fn is_proper_subset_of(&self, other: &Coalition) -> bool {
        self.0 != other.0 && self.is_subset_of(other)
    }

    /// The members in ascending order.
    pub fn members(&self) -> Vec<AgentId> {
        self.iter().collect()
    }

    /// Iterates over the members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = AgentId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() + 1;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// The smallest member, if any.
    pub fn min_member(&self) -> Option<AgentId> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() + 1)
        }
    }

    /// All `2^|self|` subsets of this coalition, in ascending bit order.
    pub fn subsets(&self) -> impl Iterator<Item = Coalition> {
        let mask = self.0;
        let mut sub: u64 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let current = Coalition(sub);
            if sub == mask {
                done = true;
            } else {
                sub = (sub.wrapping_sub(mask)) & mask;
            }
            Some(current)
        })
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coalition {
    /// Lexicographic order on ascending member lists, so `{1,3}` sorts
    /// before `{2}` and listings read like hand-written enumerations.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, i) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl TryFrom<Vec<AgentId>> for Coalition {
    type Error = Error;
    fn try_from(members: Vec<AgentId>) -> Result<Self> {
        for &i in &members {
            if i == 0 || i > 64 {
                return Err(Error::InvalidPartition(format!(
                    "agent id {i} is outside 1..=64"
                )));
            }
        }
        Ok(Coalition::from_members(&members))
    }
}

impl From<Coalition> for Vec<AgentId> {
    fn from(c: Coalition) -> Self {
        c.members()
    }
}

/// A partition of `{1, …, n}` into non-empty, pairwise-disjoint blocks.
///
/// Blocks are stored sorted by smallest member, which makes the
/// representation canonical: two partitions are equal as values exactly when
/// they are equal as set systems.
///
/// ```
/// use ospcheck::model::{Coalition, Partition};
///
/// let s = Partition::new(5, vec![
///     Coalition::from_members(&[3]),
///     Coalition::from_members(&[1, 2]),
///     Coalition::from_members(&[4, 5]),
/// ]).unwrap();
/// assert_eq!(s.k(), 3);
/// assert_eq!(s.blocks()[0].members(), vec![1, 2]); // canonical order
/// assert!(Partition::coarsest(5).is_coarser_than(&s));
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    n: u32,
    blocks: Vec<Coalition>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct PartitionRepr(Vec<Vec<AgentId>>);

fn validate_blocks(n: u32, blocks: &[Coalition]) -> Result<()> {
    AgentSet::new(n)?;
    let mut seen = Coalition::empty();
    for b in blocks {
        if b.is_empty() {
            return Err(Error::InvalidPartition("empty block".to_owned()));
        }
        if !seen.intersect(b).is_empty() {
            return Err(Error::InvalidPartition(format!(
                "blocks overlap at {}",
                seen.intersect(b)
            )));
        }
        seen = seen.union(b);
    }
    if seen != Coalition::full(n) {
        return Err(Error::InvalidPartition(format!(
            "blocks cover {} but the agent set is {}",
            seen,
            Coalition::full(n)
        )));
    }
    Ok(())
}

impl Partition {
    /// Builds a partition of `{1, …, n}`; blocks are sorted into canonical
    /// order (by smallest member).
    pub fn new(n: u32, mut blocks: Vec<Coalition>) -> Result<Self> {
        validate_blocks(n, &blocks)?;
        blocks.sort();
        Ok(Partition { n, blocks })
    }

    /// [`Partition::new`] from plain member lists.
    pub fn from_lists(n: u32, lists: Vec<Vec<AgentId>>) -> Result<Self> {
        let blocks = lists
            .into_iter()
            .map(Coalition::try_from)
            .collect::<Result<Vec<_>>>()?;
        Partition::new(n, blocks)
    }

    /// The finest partition: every agent alone.
    pub fn finest(n: u32) -> Result<Self> {
        let set = AgentSet::new(n)?;
        Partition::new(n, set.agents().map(Coalition::singleton).collect())
    }

    /// The coarsest partition: one block containing everyone.
    pub fn coarsest(n: u32) -> Result<Self> {
        Partition::new(n, vec![Coalition::full(n)])
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// The blocks in canonical order.
    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// The block containing agent `i` (written `Sⁱ`).
    pub fn block_of(&self, i: AgentId) -> &Coalition {
        self.blocks
            .iter()
            .find(|b| b.contains(i))
            .expect("partition covers every agent")
    }

    /// Whether `self` is coarser than (or equal to) `finer`: every block of
    /// `finer` is contained in some block of `self`.
    pub fn is_coarser_than(&self, finer: &Partition) -> bool {
        self.n == finer.n
            && finer
                .blocks
                .iter()
                .all(|b| self.blocks.iter().any(|big| b.is_subset_of(big)))
    }

    /// All partitions coarser than (or equal to) `self`, lazily, in a
    /// deterministic order; the stream has Bell(K) elements for K blocks and
    /// includes both `self` and the coarsest partition.
    pub fn coarsenings(&self) -> Coarsenings {
        Coarsenings {
            base: self.clone(),
            next_rgs: Some(vec![0; self.blocks.len()]),
        }
    }
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;
    fn try_from(repr: PartitionRepr) -> Result<Self> {
        let mut n = 0u32;
        let mut blocks = Vec::new();
        for raw in repr.0 {
            let c = Coalition::try_from(raw)?;
            if let Some(m) = c.members().last() {
                n = n.max(*m);
            }
            blocks.push(c);
        }
        Partition::new(n, blocks)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr(p.blocks.iter().map(|b| b.members()).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, b) in self.blocks.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Lazy stream over the coarsenings of a base partition.
///
/// Internally enumerates restricted-growth strings over the base blocks in
/// lexicographic order, so the coarsest partition comes first and the base
/// partition comes last.
pub struct Coarsenings {
    base: Partition,
    next_rgs: Option<Vec<u32>>,
}

impl Iterator for Coarsenings {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let rgs = self.next_rgs.take()?;

        // Merge base blocks that share a group label.
        let groups = rgs.iter().copied().max().map_or(0, |m| m + 1) as usize;
        let mut merged = vec![Coalition::empty(); groups];
        for (block, &g) in self.base.blocks.iter().zip(&rgs) {
            merged[g as usize] = merged[g as usize].union(block);
        }
        let out = Partition::new(self.base.n, merged).expect("merging blocks keeps a partition");

        // Advance to the lexicographically next restricted-growth string:
        // a[0] = 0 and a[i] <= 1 + max(a[..i]).
        let mut rgs = rgs;
        let mut idx = rgs.len();
        let advanced = loop {
            if idx <= 1 {
                break false;
            }
            idx -= 1;
            let cap = rgs[..idx].iter().copied().max().unwrap_or(0) + 1;
            if rgs[idx] < cap {
                rgs[idx] += 1;
                for later in rgs.iter_mut().skip(idx + 1) {
                    *later = 0;
                }
                break true;
            }
        };
        self.next_rgs = if advanced { Some(rgs) } else { None };

        Some(out)
    }
}

/// A partition whose block order matters, written `Sᵒ = (S_1, …, S_K)`.
///
/// Quota games consult blocks in this order, so unlike [`Partition`] the
/// blocks are kept exactly as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct OrderedPartition {
    n: u32,
    blocks: Vec<Coalition>,
}

impl OrderedPartition {
    /// Builds an ordered partition of `{1, …, n}`, preserving block order.
    pub fn new(n: u32, blocks: Vec<Coalition>) -> Result<Self> {
        validate_blocks(n, &blocks)?;
        Ok(OrderedPartition { n, blocks })
    }

    /// [`OrderedPartition::new`] from plain member lists.
    pub fn from_lists(n: u32, lists: Vec<Vec<AgentId>>) -> Result<Self> {
        let blocks = lists
            .into_iter()
            .map(Coalition::try_from)
            .collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(n, blocks)
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of blocks `K`.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// The blocks in their given order.
    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// The index (0-based) of the block containing agent `i`.
    pub fn block_index_of(&self, i: AgentId) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(i))
            .expect("partition covers every agent")
    }

    /// Forgets the order, yielding the underlying canonical partition.
    pub fn as_partition(&self) -> Partition {
        Partition::new(self.n, self.blocks.clone()).expect("blocks already form a partition")
    }
}

impl TryFrom<PartitionRepr> for OrderedPartition {
    type Error = Error;
    fn try_from(repr: PartitionRepr) -> Result<Self> {
        let mut n = 0u32;
        let mut blocks = Vec::new();
        for raw in repr.0 {
            let c = Coalition::try_from(raw)?;
            if let Some(m) = c.members().last() {
                n = n.max(*m);
            }
            blocks.push(c);
        }
        OrderedPartition::new(n, blocks)
    }
}

impl From<OrderedPartition> for PartitionRepr {
    fn from(p: OrderedPartition) -> Self {
        PartitionRepr(p.blocks.iter().map(|b| b.members()).collect())
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, b) in self.blocks.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Per-block quotas `Q = (q_1, …, q_K)` for a quota game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuotaVector(pub Vec<u32>);

impl QuotaVector {
    /// Wraps a quota list, one entry per block.
    pub fn new(quotas: Vec<u32>) -> Self {
        QuotaVector(quotas)
    }

    /// The quotas in block order.
    pub fn quotas(&self) -> &[u32] {
        &self.0
    }

    /// Whether the quotas are compatible with the ordered partition:
    /// one quota per block, `q_k <= |S_k|` for every non-final block and
    /// `q_K < |S_K|` for the final one.
    pub fn is_compatible_with(&self, s: &OrderedPartition) -> bool {
        let k = s.k();
        if self.0.len() != k {
            return false;
        }
        self.0.iter().enumerate().all(|(idx, &q)| {
            let size = s.blocks()[idx].size();
            if idx + 1 == k {
                q < size
            } else {
                q <= size
            }
        })
    }
}

impl fmt::Display for QuotaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, q) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

/// Whether `s` is coarser than (or equal to) `s_star`; free-function form of
/// [`Partition::is_coarser_than`].
pub fn is_coarser(s: &Partition, s_star: &Partition) -> bool {
    s.is_coarser_than(s_star)
}

/// Bell number `B(k)`: how many partitions a `k`-element set has, and hence
/// how many coarsenings a `k`-block partition streams.
pub fn bell_number(k: usize) -> u128 {
    // Bell triangle.
    let mut row: Vec<u128> = vec![1];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("row is non-empty"));
        for &v in &row {
            let last = *next.last().expect("next starts non-empty");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preference_tops_and_comparisons() {
        let p = Preference::new(vec![
            vec!["b".into(), "a".into()],
            vec!["c".into()],
        ])
        .unwrap();
        assert!(matches!(p.top(), Err(Error::AmbiguousTop { size: 2 })));
        assert!(p.prefers(&"a".into(), &"b".into()).unwrap());
        assert!(p.prefers(&"b".into(), &"a".into()).unwrap());
        assert!(!p.strictly_prefers(&"a".into(), &"b".into()).unwrap());
        assert!(p.strictly_prefers(&"a".into(), &"c".into()).unwrap());
        assert!(matches!(
            p.prefers(&"z".into(), &"a".into()),
            Err(Error::UnknownAlternative { .. })
        ));
        assert_eq!(Preference::p_x().top().unwrap(), Alternative::x());
    }

    #[test]
    fn preference_is_canonical() {
        let a = Preference::new(vec![vec!["b".into(), "a".into()], vec!["c".into()]]).unwrap();
        let b = Preference::new(vec![vec!["a".into(), "b".into()], vec!["c".into()]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn preference_rejects_duplicates_and_empty_tiers() {
        assert!(Preference::new(vec![]).is_err());
        assert!(Preference::new(vec![vec![]]).is_err());
        assert!(Preference::new(vec![vec!["a".into()], vec!["a".into()]]).is_err());
    }

    #[test]
    fn coalition_basics() {
        let c = Coalition::from_members(&[5, 1, 2]);
        assert_eq!(c.size(), 3);
        assert_eq!(c.members(), vec![1, 2, 5]);
        assert!(c.contains(5) && !c.contains(3));
        assert_eq!(c.min_member(), Some(1));
        assert_eq!(c.to_string(), "{1,2,5}");
        assert_eq!(
            c.intersect(&Coalition::from_members(&[2, 3])).members(),
            vec![2]
        );
        assert_eq!(Coalition::full(64).size(), 64);
    }

    #[test]
    fn coalition_order_is_member_lexicographic() {
        let a = Coalition::from_members(&[1, 3]);
        let b = Coalition::from_members(&[2]);
        let c = Coalition::from_members(&[1]);
        assert!(c < a);
        assert!(a < b);
    }

    #[test]
    fn coalition_subsets_enumerate_all() {
        let c = Coalition::from_members(&[1, 3, 4]);
        let subs: Vec<_> = c.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.contains(&Coalition::empty()));
        assert!(subs.contains(&c));
        assert!(subs.iter().all(|s| s.is_subset_of(&c)));
    }

    #[test]
    fn partition_canonicalizes_and_validates() {
        let s = Partition::new(
            4,
            vec![
                Coalition::from_members(&[4]),
                Coalition::from_members(&[1, 3]),
                Coalition::from_members(&[2]),
            ],
        )
        .unwrap();
        assert_eq!(
            s.blocks()
                .iter()
                .map(|b| b.members())
                .collect::<Vec<_>>(),
            vec![vec![1, 3], vec![2], vec![4]]
        );
        assert_eq!(s.block_of(3).members(), vec![1, 3]);

        assert!(Partition::new(3, vec![Coalition::from_members(&[1, 2])]).is_err());
        assert!(Partition::new(
            3,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[2, 3])
            ]
        )
        .is_err());
        assert!(Partition::new(2, vec![Coalition::full(2), Coalition::empty()]).is_err());
    }

    #[test]
    fn coarser_relation() {
        let fine = Partition::finest(4).unwrap();
        let mid = Partition::new(
            4,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[3]),
                Coalition::from_members(&[4]),
            ],
        )
        .unwrap();
        let coarse = Partition::coarsest(4).unwrap();
        assert!(mid.is_coarser_than(&fine));
        assert!(coarse.is_coarser_than(&mid));
        assert!(coarse.is_coarser_than(&fine));
        assert!(!fine.is_coarser_than(&mid));
        assert!(mid.is_coarser_than(&mid));
    }

    #[test]
    fn coarsenings_count_matches_bell_numbers() {
        for k in 1..=5u32 {
            let base = Partition::finest(k).unwrap();
            let count = base.coarsenings().count() as u128;
            assert_eq!(count, bell_number(k as usize), "K = {k}");
        }
        assert_eq!(bell_number(3), 5);
        assert_eq!(bell_number(5), 52);
    }

    #[test]
    fn coarsenings_include_base_and_coarsest_and_are_coarser() {
        let base = Partition::new(
            5,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[3]),
                Coalition::from_members(&[4, 5]),
            ],
        )
        .unwrap();
        let all: Vec<_> = base.coarsenings().collect();
        assert_eq!(all.len(), 5);
        assert!(all.contains(&base));
        assert!(all.contains(&Partition::coarsest(5).unwrap()));
        assert!(all.iter().all(|c| c.is_coarser_than(&base)));
        // Deterministic: first is the coarsest (all blocks merged), last is the base.
        assert_eq!(all[0], Partition::coarsest(5).unwrap());
        assert_eq!(*all.last().unwrap(), base);
    }

    #[test]
    fn quota_compatibility() {
        let s = OrderedPartition::new(
            5,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[3, 4, 5]),
            ],
        )
        .unwrap();
        assert!(QuotaVector::new(vec![2, 2]).is_compatible_with(&s));
        assert!(QuotaVector::new(vec![0, 0]).is_compatible_with(&s));
        // Final block must keep q_K strictly below the block size.
        assert!(!QuotaVector::new(vec![2, 3]).is_compatible_with(&s));
        assert!(!QuotaVector::new(vec![3, 2]).is_compatible_with(&s));
        assert!(!QuotaVector::new(vec![2]).is_compatible_with(&s));
    }

    #[test]
    fn ordered_partition_preserves_order() {
        let s = OrderedPartition::new(
            3,
            vec![Coalition::from_members(&[3]), Coalition::from_members(&[1, 2])],
        )
        .unwrap();
        assert_eq!(s.blocks()[0].members(), vec![3]);
        assert_eq!(s.block_index_of(2), 1);
        assert_eq!(s.as_partition().blocks()[0].members(), vec![1, 2]);
    }

    #[test]
    fn json_round_trips() {
        let s = Partition::new(
            4,
            vec![Coalition::from_members(&[1, 4]), Coalition::from_members(&[2, 3])],
        )
        .unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, "[[1,4],[2,3]]");
        assert_eq!(serde_json::from_str::<Partition>(&js).unwrap(), s);

        let p = Preference::new(vec![vec!["x".into()], vec!["y".into()]]).unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"[["x"],["y"]]"#);
        assert_eq!(serde_json::from_str::<Preference>(&js).unwrap(), p);

        assert!(serde_json::from_str::<Partition>("[[1,2],[2,3]]").is_err());
        assert!(serde_json::from_str::<Preference>(r#"[["x"],["x"]]"#).is_err());
    }

    #[test]
    fn profile_supporters() {
        let profile = Profile::from_x_supporters(4, Coalition::from_members(&[2, 4])).unwrap();
        assert_eq!(
            profile.supporters_of(&Alternative::x()).unwrap().members(),
            vec![2, 4]
        );
        assert_eq!(profile.get(1), &Preference::p_y());
        let swapped = profile.with(1, Preference::p_x());
        assert_eq!(
            swapped.supporters_of(&Alternative::x()).unwrap().members(),
            vec![1, 2, 4]
        );
    }
}
