//! Error type shared across the library.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or checking instances.
///
/// Structural misuse (malformed partitions, arenas, tables) is reported
/// through the `Invalid*` variants; the remaining variants are the
/// domain-level outcomes that callers are expected to match on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The agent count is outside the supported range `1..=64`.
    #[error("agent count {n} is outside the supported range 1..=64")]
    AgentCount {
        /// The offending count.
        n: u64,
    },

    /// A preference whose top tier is not a singleton has no unique top.
    #[error("preference has {size} alternatives tied at the top; no unique top")]
    AmbiguousTop {
        /// How many alternatives share the top tier.
        size: usize,
    },

    /// An alternative label that the preference does not rank.
    #[error("alternative {label:?} is not ranked by this preference")]
    UnknownAlternative {
        /// The unranked label.
        label: String,
    },

    /// A malformed preference (empty tier, duplicate label, …).
    #[error("invalid preference: {0}")]
    InvalidPreference(String),

    /// A malformed partition (overlap, gap, empty block, …).
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A malformed committee (not an antichain at construction, bad agent ids, …).
    #[error("invalid committee: {0}")]
    InvalidCommittee(String),

    /// A malformed SCF table (missing profiles, bad keys, …).
    #[error("invalid SCF table: {0}")]
    InvalidTable(String),

    /// A malformed arena (broken tree, mixed info-set owners, …).
    #[error("invalid arena: {0}")]
    InvalidArena(String),

    /// The rule is constant: it elects the same alternative at every profile.
    ///
    /// Constant rules sit outside the committee machinery proper (the empty
    /// coalition would have to be winning, or nothing would be); they are
    /// reported through this tagged variant instead of being represented.
    #[error("constant rule: always elects {always:?}")]
    ConstantRule {
        /// The alternative the rule always elects.
        always: String,
    },

    /// The SCF is not an extended majority voting rule (its coalition family
    /// is not monotone), hence by the equivalence in the guide not SP either.
    #[error("the table is not induced by any committee (non-monotone supporter family)")]
    NotEmvr,

    /// A strategy lacks a choice at an information set that play reached.
    #[error("agent {agent}'s strategy assigns no choice at information set {info_set}")]
    IncompleteStrategy {
        /// The strategy's owner.
        agent: u32,
        /// The information set lacking a choice.
        info_set: usize,
    },

    /// An exhaustive enumeration would exceed the configured cap.
    #[error("search space of {required} combinations exceeds the cap of {cap}")]
    SearchSpaceExceeded {
        /// How many combinations the enumeration would visit.
        required: u128,
        /// The configured bound.
        cap: u64,
    },

    /// Quotas that do not satisfy `q_k <= |S_k|` for `k < K` and `q_K < |S_K|`.
    #[error("incompatible quotas: {0}")]
    IncompatibleQuotas(String),

    /// Relabelling produced an empty preference set for a retained choice,
    /// which indicates a mismatch between the type-strategy profile and the
    /// pruned arena.
    #[error("relabelling produced an empty label at information set {info_set}, choice {choice}")]
    EmptyChoiceLabel {
        /// The information set being relabelled.
        info_set: usize,
        /// Index of the choice in its sorted choice list.
        choice: usize,
    },

    /// The deviation equals the strategy it is supposed to depart from.
    #[error("the deviation coincides with the strategy; no point of departure exists")]
    IdenticalStrategies,

    /// A decision procedure was invoked outside its hypotheses.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The quota-committee generator produced a non-antichain.
    ///
    /// This is asserted and never expected (a counting argument on per-block
    /// intersection sizes rules it out); if it ever fires, the offending pair
    /// is evidence worth reporting, not a crash.
    #[error("generated family is not an antichain: {a:?} ⊆ {b:?}")]
    NotAntichain {
        /// Members of the contained coalition.
        a: Vec<u32>,
        /// Members of the containing coalition.
        b: Vec<u32>,
    },

    /// The decision procedure found no ordering/quota witness.
    #[error("the committee is not obviously strategy-proof with respect to the partition")]
    NotOsp,

    /// The hypotheses of the implication under test do not hold, so the
    /// implication itself is not being tested.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}
