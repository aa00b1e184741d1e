//! Committees, extended majority voting rules, and direct-revelation checks.
//!
//! A committee is an antichain of "minimal winning" coalitions. It induces a
//! two-alternative social choice function: `x` is elected exactly when the
//! coalition of agents whose top alternative is `x` contains some minimal
//! winning coalition. This module also handles the reverse direction —
//! recovering the committee from a tabulated rule — plus duals, dummies,
//! anonymity relative to a partition, and a strategy-proofness check that
//! works straight off the table.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, AgentSet, Alternative, Coalition, Partition, Preference, Profile};

/// Enumerating all coalitions is exponential in `n`; dual computation and
/// table construction refuse to go past this.
pub const ENUMERATION_CAP_N: u32 = 20;

/// An antichain of minimal winning coalitions over agents `1..=n`.
///
/// The family is stored sorted (lexicographically by member list) and must be
/// non-empty, contain no empty coalition, and contain no pair ordered by
/// inclusion. Constant rules — "always `x`" and "always `y`" — are not
/// representable here on purpose; [`Committee::minimalize`] reports them
/// through [`Error::ConstantRule`].
///
/// ```
/// use ospcheck::committee::Committee;
/// use ospcheck::model::Coalition;
///
/// let c = Committee::new(5, vec![
///     Coalition::from_members(&[1, 2]),
///     Coalition::from_members(&[1, 3]),
///     Coalition::from_members(&[2, 4, 5]),
/// ]).unwrap();
/// assert!(c.is_winning(&Coalition::from_members(&[1, 3, 4])));
/// assert!(!c.is_winning(&Coalition::from_members(&[3, 4, 5])));
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CommitteeRepr", into = "CommitteeRepr")]
pub struct Committee {
    n: u32,
    minimal: Vec<Coalition>,
}

#[derive(Serialize, Deserialize)]
struct CommitteeRepr {
    n: u32,
    minimal: Vec<Vec<AgentId>>,
}

impl Committee {
    /// Builds a committee from an already-minimal family.
    ///
    /// The family must be a non-empty antichain of non-empty coalitions
    /// within `{1, …, n}`; use [`Committee::minimalize`] for families that
    /// may still contain supersets.
    pub fn new(n: u32, mut minimal: Vec<Coalition>) -> Result<Self> {
        let set = AgentSet::new(n)?;
        if minimal.is_empty() {
            return Err(Error::InvalidCommittee(
                "the family of minimal winning coalitions is empty".to_owned(),
            ));
        }
        minimal.sort();
        minimal.dedup();
        for m in &minimal {
            if m.is_empty() {
                return Err(Error::InvalidCommittee("empty winning coalition".to_owned()));
            }
            if !m.is_subset_of(&set.grand_coalition()) {
                return Err(Error::InvalidCommittee(format!(
                    "coalition {m} has members outside {{1,…,{n}}}"
                )));
            }
        }
        for (i, a) in minimal.iter().enumerate() {
            for b in minimal.iter().skip(i + 1) {
                if a.is_subset_of(b) || b.is_subset_of(a) {
                    return Err(Error::InvalidCommittee(format!(
                        "{a} and {b} are ordered by inclusion; not an antichain"
                    )));
                }
            }
        }
        Ok(Committee { n, minimal })
    }

    /// Builds a committee from an arbitrary family of winning coalitions by
    /// discarding supersets.
    ///
    /// Degenerate families are reported as [`Error::ConstantRule`]: an empty
    /// family means nothing ever wins (the rule always elects `y`), and a
    /// family containing the empty coalition means everything wins (the rule
    /// always elects `x`).
    pub fn minimalize(n: u32, family: Vec<Coalition>) -> Result<Self> {
        AgentSet::new(n)?;
        if family.is_empty() {
            return Err(Error::ConstantRule {
                always: "y".to_owned(),
            });
        }
        if family.iter().any(|c| c.is_empty()) {
            return Err(Error::ConstantRule {
                always: "x".to_owned(),
            });
        }
        let mut sorted = family;
        sorted.sort_by_key(|c| (c.size(), *c));
        sorted.dedup();
        let mut minimal: Vec<Coalition> = Vec::new();
        for c in sorted {
            if !minimal.iter().any(|kept| kept.is_subset_of(&c)) {
                minimal.push(c);
            }
        }
        Committee::new(n, minimal)
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The minimal winning coalitions, sorted.
    pub fn minimal(&self) -> &[Coalition] {
        &self.minimal
    }

    /// Whether `t` is winning: some minimal winning coalition is contained
    /// in `t`.
    pub fn is_winning(&self, t: &Coalition) -> bool {
        self.minimal.iter().any(|m| m.is_subset_of(t))
    }

    /// The dual committee: its winning coalitions are exactly those that
    /// intersect every winning coalition of `self`.
    ///
    /// Computed by enumerating all `2^n` coalitions, so it refuses to run
    /// beyond [`ENUMERATION_CAP_N`] agents.
    pub fn dual(&self) -> Result<Committee> {
        if self.n > ENUMERATION_CAP_N {
            return Err(Error::PreconditionViolated(format!(
                "dual computation enumerates 2^n coalitions and is capped at n = {ENUMERATION_CAP_N}, got n = {}",
                self.n
            )));
        }
        let full = Coalition::full(self.n);
        let transversals: Vec<Coalition> = full
            .subsets()
            .filter(|t| self.minimal.iter().all(|m| !t.intersect(m).is_empty()))
            .collect();
        // A non-empty antichain of non-empty coalitions always has a
        // transversal (the grand coalition), and the empty coalition is never
        // one, so minimalize cannot hit a constant-rule case here.
        Committee::minimalize(self.n, transversals)
    }

    /// The dummy agents: members of no minimal winning coalition. Adding or
    /// removing a dummy never changes whether a coalition wins.
    pub fn dummies(&self) -> Coalition {
        let mut used = Coalition::empty();
        for m in &self.minimal {
            used = used.union(m);
        }
        Coalition::full(self.n).minus(&used)
    }

    /// Evaluates the extended majority voting rule induced by this committee:
    /// `x` is elected exactly when the coalition of agents whose unique top
    /// is `x` is winning; otherwise `y` is elected.
    ///
    /// Every agent must rank a unique top, and each top must be `x` or `y`.
    pub fn emvr_evaluate(&self, profile: &Profile) -> Result<Alternative> {
        if profile.n() != self.n {
            return Err(Error::InvalidTable(format!(
                "profile has {} agents but the committee has {}",
                profile.n(),
                self.n
            )));
        }
        let mut supporters = Coalition::empty();
        for i in 1..=self.n {
            let top = profile.get(i).top()?;
            if top == Alternative::x() {
                supporters = supporters.insert(i);
            } else if top != Alternative::y() {
                return Err(Error::UnknownAlternative {
                    label: top.as_str().to_owned(),
                });
            }
        }
        if self.is_winning(&supporters) {
            Ok(Alternative::x())
        } else {
            Ok(Alternative::y())
        }
    }

    /// Whether the committee is anonymous relative to the partition `s`:
    /// it has no dummies, and whether a coalition wins depends only on how
    /// many members it draws from each block of `s`.
    ///
    /// Equivalently, the winning family is invariant under every permutation
    /// of agents that maps each block of `s` onto itself; the count-based
    /// formulation checked here avoids quantifying over permutations.
    /// Runs in `O(2^n · n)`.
    pub fn is_anonymous_rel(&self, s: &Partition) -> bool {
        if s.n() != self.n || !self.dummies().is_empty() {
            return false;
        }
        let mut status: HashMap<Vec<u32>, bool> = HashMap::new();
        for t in Coalition::full(self.n).subsets() {
            let cv = count_vector(&t, s.blocks());
            let w = self.is_winning(&t);
            match status.entry(cv) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != w {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(w);
                }
            }
        }
        true
    }

    /// If the committee is a quota rule — the minimal winning coalitions are
    /// exactly all coalitions of one common size `q` — returns that quota.
    pub fn strong_anonymity_quota(&self) -> Option<u32> {
        let q = self.minimal[0].size();
        if self.minimal.iter().any(|m| m.size() != q) {
            return None;
        }
        let expected = binomial(self.n as u64, q as u64);
        if self.minimal.len() as u64 == expected {
            Some(q)
        } else {
            None
        }
    }
}

impl TryFrom<CommitteeRepr> for Committee {
    type Error = Error;
    fn try_from(repr: CommitteeRepr) -> Result<Self> {
        let minimal = repr
            .minimal
            .into_iter()
            .map(Coalition::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidCommittee(e.to_string()))?;
        Committee::new(repr.n, minimal)
    }
}

impl From<Committee> for CommitteeRepr {
    fn from(c: Committee) -> Self {
        CommitteeRepr {
            n: c.n,
            minimal: c.minimal.iter().map(|m| m.members()).collect(),
        }
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, m) in self.minimal.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// How many members `t` draws from each block, in block order.
pub fn count_vector(t: &Coalition, blocks: &[Coalition]) -> Vec<u32> {
    blocks.iter().map(|b| t.intersect(b).size()).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A fully tabulated two-alternative social choice function on strict
/// preference profiles.
///
/// A strict two-alternative profile is identified with its coalition of
/// `x`-supporters, so the table has one entry per coalition. The JSON form is
/// a map from bit-strings to `"x"`/`"y"`, where the leftmost character of a
/// key is agent 1 and `'1'` marks an `x`-supporter.
///
/// ```
/// use ospcheck::committee::{Committee, ScfTable};
/// use ospcheck::model::Coalition;
///
/// let c = Committee::new(2, vec![Coalition::from_members(&[1])]).unwrap();
/// let table = ScfTable::from_committee(&c).unwrap();
/// assert!(table.is_sp().pass);
/// let json = serde_json::to_string(&table).unwrap();
/// assert!(json.contains(r#""10":"x""#));
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct ScfTable {
    n: u32,
    /// Outcome at the profile whose `x`-supporter bitmask is the index.
    outcomes: Vec<Alternative>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct TableRepr(std::collections::BTreeMap<String, Alternative>);

impl ScfTable {
    /// Builds a table from outcomes indexed by `x`-supporter bitmask
    /// (agent `i` is bit `i − 1`); the vector must have `2^n` entries.
    pub fn new(n: u32, outcomes: Vec<Alternative>) -> Result<Self> {
        if n == 0 || n > ENUMERATION_CAP_N {
            return Err(Error::InvalidTable(format!(
                "tables are supported for 1..={ENUMERATION_CAP_N} agents, got n = {n}"
            )));
        }
        if outcomes.len() != 1usize << n {
            return Err(Error::InvalidTable(format!(
                "expected {} outcomes for n = {n}, got {}",
                1usize << n,
                outcomes.len()
            )));
        }
        for a in &outcomes {
            if *a != Alternative::x() && *a != Alternative::y() {
                return Err(Error::InvalidTable(format!(
                    "outcome {:?} is neither \"x\" nor \"y\"",
                    a.as_str()
                )));
            }
        }
        Ok(ScfTable { n, outcomes })
    }

    /// Tabulates the rule induced by a committee.
    pub fn from_committee(c: &Committee) -> Result<Self> {
        if c.n() > ENUMERATION_CAP_N {
            return Err(Error::InvalidTable(format!(
                "tables are supported for 1..={ENUMERATION_CAP_N} agents, got n = {}",
                c.n()
            )));
        }
        let outcomes = (0..1u64 << c.n())
            .map(|bits| {
                if c.is_winning(&Coalition::from_bits(bits)) {
                    Alternative::x()
                } else {
                    Alternative::y()
                }
            })
            .collect();
        ScfTable::new(c.n(), outcomes)
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The outcome when exactly the members of `supporters` rank `x` on top.
    pub fn outcome(&self, supporters: &Coalition) -> &Alternative {
        &self.outcomes[supporters.bits() as usize]
    }

    /// Checks strategy-proofness directly on the table: no agent may ever
    /// gain by reporting the opposite preference. Returns the first
    /// violation (smallest supporter bitmask, then smallest agent) if any.
    pub fn is_sp(&self) -> SpVerdict {
        for bits in 0..1u64 << self.n {
            let t = Coalition::from_bits(bits);
            for i in 1..=self.n {
                let truth = if t.contains(i) {
                    Alternative::x()
                } else {
                    Alternative::y()
                };
                let honest = self.outcome(&t);
                if *honest == truth {
                    continue;
                }
                let flipped = if t.contains(i) { t.remove(i) } else { t.insert(i) };
                if *self.outcome(&flipped) == truth {
                    let profile = Profile::from_x_supporters(self.n, t)
                        .expect("n was validated at construction");
                    let deviation = if t.contains(i) {
                        Preference::p_y()
                    } else {
                        Preference::p_x()
                    };
                    return SpVerdict {
                        pass: false,
                        witness: Some(SpWitness {
                            agent: i,
                            profile,
                            deviation,
                        }),
                    };
                }
            }
        }
        SpVerdict {
            pass: true,
            witness: None,
        }
    }

    /// Recovers the committee whose rule this table is.
    ///
    /// Fails with [`Error::ConstantRule`] when the table always elects the
    /// same alternative, and with [`Error::NotEmvr`] when the family of
    /// `x`-electing coalitions is not monotone — in which case no committee
    /// induces the table, and (equivalently) the table is not
    /// strategy-proof.
    pub fn extract_committee(&self) -> Result<Committee> {
        let x = Alternative::x();
        let electing: Vec<Coalition> = (0..1u64 << self.n)
            .filter(|&bits| self.outcomes[bits as usize] == x)
            .map(Coalition::from_bits)
            .collect();
        if electing.is_empty() {
            return Err(Error::ConstantRule {
                always: "y".to_owned(),
            });
        }
        if electing.len() == 1usize << self.n {
            return Err(Error::ConstantRule {
                always: "x".to_owned(),
            });
        }
        // Monotonicity: adding a supporter never flips the outcome to y.
        for &t in &electing {
            for i in 1..=self.n {
                if !t.contains(i) && self.outcomes[t.insert(i).bits() as usize] != x {
                    return Err(Error::NotEmvr);
                }
            }
        }
        Committee::minimalize(self.n, electing)
    }
}

impl TryFrom<TableRepr> for ScfTable {
    type Error = Error;
    fn try_from(repr: TableRepr) -> Result<Self> {
        let entries = repr.0;
        let n = entries
            .keys()
            .next()
            .map(|k| k.len() as u32)
            .ok_or_else(|| Error::InvalidTable("empty table".to_owned()))?;
        if n == 0 || n > ENUMERATION_CAP_N {
            return Err(Error::InvalidTable(format!(
                "tables are supported for 1..={ENUMERATION_CAP_N} agents, got keys of length {n}"
            )));
        }
        let size = 1usize << n;
        if entries.len() != size {
            return Err(Error::InvalidTable(format!(
                "expected {size} profiles for n = {n}, got {}",
                entries.len()
            )));
        }
        let mut outcomes = vec![Alternative::y(); size];
        for (key, value) in entries {
            if key.len() as u32 != n {
                return Err(Error::InvalidTable(format!(
                    "key {key:?} does not have length {n}"
                )));
            }
            let mut bits = 0u64;
            for (pos, ch) in key.chars().enumerate() {
                match ch {
                    '1' => bits |= 1u64 << pos,
                    '0' => {}
                    other => {
                        return Err(Error::InvalidTable(format!(
                            "key {key:?} contains {other:?}; keys are bit-strings"
                        )))
                    }
                }
            }
            outcomes[bits as usize] = value;
        }
        ScfTable::new(n, outcomes)
    }
}

impl From<ScfTable> for TableRepr {
    fn from(t: ScfTable) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for bits in 0..1u64 << t.n {
            let key: String = (0..t.n)
                .map(|pos| if bits & (1u64 << pos) != 0 { '1' } else { '0' })
                .collect();
            map.insert(key, t.outcomes[bits as usize].clone());
        }
        TableRepr(map)
    }
}

/// Outcome of a direct strategy-proofness check on a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpVerdict {
    /// Whether the table is strategy-proof.
    pub pass: bool,
    /// A manipulation, present exactly when `pass` is false.
    pub witness: Option<SpWitness>,
}

/// A profitable misreport: under `profile`, `agent` gains by reporting
/// `deviation` instead of their true preference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpWitness {
    /// The manipulating agent.
    pub agent: AgentId,
    /// The true profile at which the manipulation succeeds.
    pub profile: Profile,
    /// The misreport that improves the outcome for `agent`.
    pub deviation: Preference,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_committee() -> Committee {
        Committee::new(
            5,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1, 3]),
                Coalition::from_members(&[2, 4, 5]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn winning_closure() {
        let c = example_committee();
        assert!(c.is_winning(&Coalition::from_members(&[1, 2])));
        assert!(c.is_winning(&Coalition::from_members(&[1, 2, 5])));
        assert!(c.is_winning(&Coalition::from_members(&[2, 4, 5])));
        assert!(!c.is_winning(&Coalition::from_members(&[2, 3])));
        assert!(!c.is_winning(&Coalition::from_members(&[3, 4, 5])));
        assert!(!c.is_winning(&Coalition::empty()));
    }

    #[test]
    fn constructor_rejects_non_antichains() {
        let bad = Committee::new(
            3,
            vec![Coalition::from_members(&[1]), Coalition::from_members(&[1, 2])],
        );
        assert!(matches!(bad, Err(Error::InvalidCommittee(_))));
        assert!(Committee::new(3, vec![]).is_err());
        assert!(Committee::new(3, vec![Coalition::empty()]).is_err());
        assert!(Committee::new(3, vec![Coalition::from_members(&[4])]).is_err());
    }

    #[test]
    fn minimalize_discards_supersets_and_flags_constants() {
        let c = Committee::minimalize(
            3,
            vec![
                Coalition::from_members(&[1, 2, 3]),
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1]),
                Coalition::from_members(&[2, 3]),
            ],
        )
        .unwrap();
        assert_eq!(
            c.minimal(),
            &[Coalition::from_members(&[1]), Coalition::from_members(&[2, 3])]
        );

        assert_eq!(
            Committee::minimalize(3, vec![]),
            Err(Error::ConstantRule {
                always: "y".to_owned()
            })
        );
        assert_eq!(
            Committee::minimalize(3, vec![Coalition::empty(), Coalition::from_members(&[1])]),
            Err(Error::ConstantRule {
                always: "x".to_owned()
            })
        );
    }

    #[test]
    fn dual_of_the_running_example() {
        let dual = example_committee().dual().unwrap();
        assert_eq!(
            dual.minimal(),
            &[
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1, 4]),
                Coalition::from_members(&[1, 5]),
                Coalition::from_members(&[2, 3]),
            ]
        );
    }

    #[test]
    fn dual_of_majority_is_majority() {
        // With n = 3 and quota 2, a coalition meets every 2-coalition
        // exactly when it has 2 members itself.
        let majority = Committee::new(
            3,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1, 3]),
                Coalition::from_members(&[2, 3]),
            ],
        )
        .unwrap();
        assert_eq!(majority.dual().unwrap(), majority);
    }

    #[test]
    fn dummies_are_agents_in_no_minimal_coalition() {
        let c = Committee::new(4, vec![Coalition::from_members(&[1, 2])]).unwrap();
        assert_eq!(c.dummies().members(), vec![3, 4]);
        assert!(example_committee().dummies().is_empty());
    }

    #[test]
    fn emvr_evaluation() {
        let c = example_committee();
        let all_x = Profile::from_x_supporters(5, Coalition::full(5)).unwrap();
        assert_eq!(c.emvr_evaluate(&all_x).unwrap(), Alternative::x());
        let p = Profile::from_x_supporters(5, Coalition::from_members(&[3, 4, 5])).unwrap();
        assert_eq!(c.emvr_evaluate(&p).unwrap(), Alternative::y());
        let p = Profile::from_x_supporters(5, Coalition::from_members(&[2, 4, 5])).unwrap();
        assert_eq!(c.emvr_evaluate(&p).unwrap(), Alternative::x());

        let weird = all_x.with(1, Preference::strict(["z", "x", "y"]).unwrap());
        assert!(matches!(
            c.emvr_evaluate(&weird),
            Err(Error::UnknownAlternative { .. })
        ));
    }

    #[test]
    fn anonymity_relative_to_partitions() {
        let majority = Committee::new(
            3,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1, 3]),
                Coalition::from_members(&[2, 3]),
            ],
        )
        .unwrap();
        assert!(majority.is_anonymous_rel(&Partition::coarsest(3).unwrap()));
        assert!(majority.is_anonymous_rel(&Partition::finest(3).unwrap()));

        // A dummy breaks anonymity relative to every partition.
        let with_dummy = Committee::new(3, vec![Coalition::from_members(&[1, 2])]).unwrap();
        assert!(!with_dummy.is_anonymous_rel(&Partition::finest(3).unwrap()));

        // 1 is a vetoer here; winning depends on which members, not how many.
        let vetoer = Committee::new(
            3,
            vec![Coalition::from_members(&[1, 2]), Coalition::from_members(&[1, 3])],
        )
        .unwrap();
        assert!(!vetoer.is_anonymous_rel(&Partition::coarsest(3).unwrap()));
        let split = Partition::new(
            3,
            vec![Coalition::from_members(&[1]), Coalition::from_members(&[2, 3])],
        )
        .unwrap();
        assert!(vetoer.is_anonymous_rel(&split));
    }

    #[test]
    fn strong_anonymity_quotas() {
        let majority = Committee::new(
            3,
            vec![
                Coalition::from_members(&[1, 2]),
                Coalition::from_members(&[1, 3]),
                Coalition::from_members(&[2, 3]),
            ],
        )
        .unwrap();
        assert_eq!(majority.strong_anonymity_quota(), Some(2));

        let unanimity = Committee::new(3, vec![Coalition::full(3)]).unwrap();
        assert_eq!(unanimity.strong_anonymity_quota(), Some(3));

        let any_one = Committee::new(
            3,
            vec![
                Coalition::from_members(&[1]),
                Coalition::from_members(&[2]),
                Coalition::from_members(&[3]),
            ],
        )
        .unwrap();
        assert_eq!(any_one.strong_anonymity_quota(), Some(1));

        let partial = Committee::new(3, vec![Coalition::from_members(&[1, 2])]).unwrap();
        assert_eq!(partial.strong_anonymity_quota(), None);
        assert_eq!(example_committee().strong_anonymity_quota(), None);
    }

    #[test]
    fn sp_check_and_extraction_on_a_dictatorship() {
        let dictator = Committee::new(3, vec![Coalition::from_members(&[1])]).unwrap();
        let table = ScfTable::from_committee(&dictator).unwrap();
        assert!(table.is_sp().pass);
        assert_eq!(table.extract_committee().unwrap(), dictator);
    }

    #[test]
    fn non_monotone_table_is_manipulable_and_not_extractable() {
        // Elect x exactly when agent 1 alone supports x: adding supporter 2
        // flips the outcome back to y, so 2 can manipulate.
        let mut outcomes = vec![Alternative::y(); 4];
        outcomes[0b01] = Alternative::x();
        let table = ScfTable::new(2, outcomes).unwrap();
        assert_eq!(table.extract_committee(), Err(Error::NotEmvr));
        let verdict = table.is_sp();
        assert!(!verdict.pass);
        let w = verdict.witness.unwrap();
        // First violation in scan order: supporters {1} elect x; agent 2
        // (truly for y) reports Pˣ, moving to supporters {1,2} where y wins.
        assert_eq!(w.agent, 2);
        assert_eq!(w.deviation, Preference::p_x());
        assert_eq!(
            w.profile.supporters_of(&Alternative::x()).unwrap(),
            Coalition::from_members(&[1])
        );
    }

    #[test]
    fn constant_tables_are_flagged() {
        let table = ScfTable::new(2, vec![Alternative::y(); 4]).unwrap();
        assert_eq!(
            table.extract_committee(),
            Err(Error::ConstantRule {
                always: "y".to_owned()
            })
        );
        let table = ScfTable::new(2, vec![Alternative::x(); 4]).unwrap();
        assert_eq!(
            table.extract_committee(),
            Err(Error::ConstantRule {
                always: "x".to_owned()
            })
        );
        // Constant tables are nonetheless strategy-proof.
        assert!(table.is_sp().pass);
    }

    #[test]
    fn committee_json_round_trip() {
        let c = example_committee();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"n":5,"minimal":[[1,2],[1,3],[2,4,5]]}"#);
        assert_eq!(serde_json::from_str::<Committee>(&js).unwrap(), c);
        assert!(serde_json::from_str::<Committee>(r#"{"n":3,"minimal":[[1],[1,2]]}"#).is_err());
    }

    #[test]
    fn table_json_uses_agent_one_leftmost() {
        let dictator = Committee::new(3, vec![Coalition::from_members(&[3])]).unwrap();
        let table = ScfTable::from_committee(&dictator).unwrap();
        let js = serde_json::to_string(&table).unwrap();
        // Keys read agent 1 → agent 3 left to right.
        assert!(js.contains(r#""001":"x""#));
        assert!(js.contains(r#""100":"y""#));
        assert_eq!(serde_json::from_str::<ScfTable>(&js).unwrap(), table);
    }

    #[test]
    fn table_round_trip_through_committee() {
        let c = example_committee();
        let table = ScfTable::from_committee(&c).unwrap();
        assert_eq!(table.extract_committee().unwrap(), c);
    }
}
