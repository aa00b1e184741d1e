//! Extensive game forms with imperfect information.
//!
//! An [`Arena`] is a finite rooted tree of decision nodes and terminal nodes.
//! Each non-terminal node belongs to exactly one information set of its
//! owner; all nodes of an information set offer the same choice labels, and a
//! node's children correspond one-to-one to those labels. Terminal nodes
//! carry the elected alternative.
//!
//! Strategies are measurable by construction — they map information sets
//! (not nodes) to choice labels. A [`TypeStrategyProfile`] records one
//! strategy per agent per preference in that agent's domain, which is the
//! object verification quantifies over.
//!
//! Submodules provide the staged quota-game builder ([`quota`]), pruning,
//! relabelling and the game-class membership check ([`rounds`]), the
//! five-agent worked fixture ([`fixtures`]), and the JSON wire format
//! ([`json`]).

pub mod fixtures;
pub mod json;
pub mod quota;
pub mod rounds;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, AgentSet, Alternative, Preference, Profile};

pub use fixtures::figure1_game;
pub use quota::build_quota_game;
pub use rounds::{is_in_game_class, prune, relabel, GameClassViolation};

/// Nodes are identified by their index in the arena's node list.
pub type NodeId = usize;

/// Information sets are identified by their index in the arena's list.
pub type InfoSetId = usize;

/// A label on a choice edge: either an opaque token, or — after relabelling —
/// a non-empty set of preferences.
///
/// The derived order (tokens before preference sets, then lexicographic) is
/// the tie-break order used whenever a "first" choice is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChoiceLabelRepr", into = "ChoiceLabelRepr")]
pub enum ChoiceLabel {
    /// An uninterpreted label such as `"x"` or `"vote-yes"`.
    Token(String),
    /// A sorted, non-empty set of preferences (a relabelled choice).
    Prefs(Vec<Preference>),
}

impl ChoiceLabel {
    /// A token label.
    pub fn token(s: &str) -> Self {
        ChoiceLabel::Token(s.to_owned())
    }

    /// A preference-set label; the set is sorted and deduplicated.
    pub fn prefs(mut ps: Vec<Preference>) -> Self {
        ps.sort();
        ps.dedup();
        ChoiceLabel::Prefs(ps)
    }

    /// The preference set, if this is a relabelled choice.
    pub fn as_prefs(&self) -> Option<&[Preference]> {
        match self {
            ChoiceLabel::Prefs(ps) => Some(ps),
            ChoiceLabel::Token(_) => None,
        }
    }

    /// Whether this label is a preference set containing `r`.
    pub fn contains_pref(&self, r: &Preference) -> bool {
        matches!(self, ChoiceLabel::Prefs(ps) if ps.contains(r))
    }
}

impl fmt::Display for ChoiceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoiceLabel::Token(s) => f.write_str(s),
            ChoiceLabel::Prefs(ps) => {
                write!(f, "{{")?;
                for (idx, p) in ps.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ", ")?;
                    }
                    let tiers: Vec<String> = p
                        .tiers()
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(Alternative::as_str)
                                .collect::<Vec<_>>()
                                .join("~")
                        })
                        .collect();
                    write!(f, "{}", tiers.join(">"))?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ChoiceLabelRepr {
    Token(String),
    Prefs(Vec<Preference>),
}

impl TryFrom<ChoiceLabelRepr> for ChoiceLabel {
    type Error = Error;
    fn try_from(repr: ChoiceLabelRepr) -> Result<Self> {
        match repr {
            ChoiceLabelRepr::Token(s) => Ok(ChoiceLabel::Token(s)),
            ChoiceLabelRepr::Prefs(ps) => {
                if ps.is_empty() {
                    return Err(Error::InvalidArena(
                        "a preference-set choice label is empty".to_owned(),
                    ));
                }
                Ok(ChoiceLabel::prefs(ps))
            }
        }
    }
}

impl From<ChoiceLabel> for ChoiceLabelRepr {
    fn from(label: ChoiceLabel) -> Self {
        match label {
            ChoiceLabel::Token(s) => ChoiceLabelRepr::Token(s),
            ChoiceLabel::Prefs(ps) => ChoiceLabelRepr::Prefs(ps),
        }
    }
}

/// Construction description of one node; terminal nodes have `owner: None`
/// and an outcome, decision nodes have an owner and an information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    /// Owning agent, or `None` for a terminal node.
    pub owner: Option<AgentId>,
    /// Parent node and the choice label on the incoming edge; `None` at the root.
    pub parent: Option<(NodeId, ChoiceLabel)>,
    /// The information set this node belongs to (decision nodes).
    pub info_set: Option<InfoSetId>,
    /// The elected alternative (terminal nodes).
    pub outcome: Option<Alternative>,
}

/// Construction description of one information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoSetSpec {
    /// The agent who moves at every node of this set.
    pub owner: AgentId,
    /// Member nodes.
    pub nodes: Vec<NodeId>,
    /// The common choice labels.
    pub choices: Vec<ChoiceLabel>,
}

/// A node of a built arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Owning agent, or `None` for a terminal node.
    pub owner: Option<AgentId>,
    /// Parent and incoming choice label; `None` at the root.
    pub parent: Option<(NodeId, ChoiceLabel)>,
    /// Information set membership (decision nodes).
    pub info_set: Option<InfoSetId>,
    /// Elected alternative (terminal nodes).
    pub outcome: Option<Alternative>,
    /// Outgoing edges, sorted by choice label.
    pub children: Vec<(ChoiceLabel, NodeId)>,
}

/// An information set of a built arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoSet {
    /// The agent who moves here.
    pub owner: AgentId,
    /// Member nodes, ascending.
    pub nodes: Vec<NodeId>,
    /// The common choice labels, sorted.
    pub choices: Vec<ChoiceLabel>,
}

/// An extensive game form: a rooted tree with information sets and
/// alternative-labelled terminal nodes.
///
/// Construction via [`Arena::from_parts`] checks referential integrity only;
/// the structural invariants — rooted tree, owner-consistent information
/// sets, uniform choice sets, choice/child bijection, and no information set
/// repeating along a path — are reported by [`Arena::validate`], so that
/// deliberately broken instances can be built and diagnosed.
///
/// ```
/// use ospcheck::game::figure1_game;
///
/// let (arena, _tsp) = figure1_game();
/// assert!(arena.validate().is_empty());
/// assert_eq!(arena.n(), 5);
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "json::ArenaRepr", into = "json::ArenaRepr")]
pub struct Arena {
    n: u32,
    alternatives: Vec<Alternative>,
    nodes: Vec<Node>,
    info_sets: Vec<InfoSet>,
}

impl Arena {
    /// Assembles an arena from node and information-set descriptions.
    ///
    /// Checks referential integrity (indices in range, owners in `1..=n`,
    /// outcomes drawn from the declared alternatives, terminals carrying an
    /// outcome and no information set, decision nodes carrying both an owner
    /// and an information set). Structural game-form invariants are *not*
    /// enforced here — see [`Arena::validate`].
    pub fn from_parts(
        n: u32,
        alternatives: Vec<Alternative>,
        specs: Vec<NodeSpec>,
        iset_specs: Vec<InfoSetSpec>,
    ) -> Result<Self> {
        AgentSet::new(n)?;
        if alternatives.is_empty() {
            return Err(Error::InvalidArena("no alternatives declared".to_owned()));
        }
        let mut sorted_alts = alternatives.clone();
        sorted_alts.sort();
        sorted_alts.dedup();
        if sorted_alts.len() != alternatives.len() {
            return Err(Error::InvalidArena("duplicate alternative label".to_owned()));
        }
        if specs.is_empty() {
            return Err(Error::InvalidArena("no nodes".to_owned()));
        }

        let mut nodes: Vec<Node> = Vec::with_capacity(specs.len());
        for (id, spec) in specs.iter().enumerate() {
            if let Some((p, _)) = &spec.parent {
                if *p >= specs.len() {
                    return Err(Error::InvalidArena(format!(
                        "node {id} has out-of-range parent {p}"
                    )));
                }
                if *p == id {
                    return Err(Error::InvalidArena(format!("node {id} is its own parent")));
                }
            }
            match spec.owner {
                Some(agent) => {
                    if agent == 0 || agent > n {
                        return Err(Error::InvalidArena(format!(
                            "node {id} is owned by agent {agent}, outside 1..={n}"
                        )));
                    }
                    let iset = spec.info_set.ok_or_else(|| {
                        Error::InvalidArena(format!("decision node {id} has no information set"))
                    })?;
                    if iset >= iset_specs.len() {
                        return Err(Error::InvalidArena(format!(
                            "node {id} references unknown information set {iset}"
                        )));
                    }
                    if spec.outcome.is_some() {
                        return Err(Error::InvalidArena(format!(
                            "decision node {id} carries an outcome"
                        )));
                    }
                }
                None => {
                    let outcome = spec.outcome.as_ref().ok_or_else(|| {
                        Error::InvalidArena(format!("terminal node {id} has no outcome"))
                    })?;
                    if !alternatives.contains(outcome) {
                        return Err(Error::InvalidArena(format!(
                            "terminal node {id} elects undeclared alternative {:?}",
                            outcome.as_str()
                        )));
                    }
                    if spec.info_set.is_some() {
                        return Err(Error::InvalidArena(format!(
                            "terminal node {id} belongs to an information set"
                        )));
                    }
                }
            }
            nodes.push(Node {
                owner: spec.owner,
                parent: spec.parent.clone(),
                info_set: spec.info_set,
                outcome: spec.outcome.clone(),
                children: Vec::new(),
            });
        }

        // Derive children, sorted by choice label for determinism.
        for id in 0..nodes.len() {
            if let Some((p, label)) = nodes[id].parent.clone() {
                nodes[p].children.push((label, id));
            }
        }
        for node in &mut nodes {
            node.children.sort();
        }

        let mut info_sets = Vec::with_capacity(iset_specs.len());
        for (iid, spec) in iset_specs.into_iter().enumerate() {
            if spec.owner == 0 || spec.owner > n {
                return Err(Error::InvalidArena(format!(
                    "information set {iid} is owned by agent {}, outside 1..={n}",
                    spec.owner
                )));
            }
            for &m in &spec.nodes {
                if m >= nodes.len() {
                    return Err(Error::InvalidArena(format!(
                        "information set {iid} lists unknown node {m}"
                    )));
                }
            }
            let mut members = spec.nodes;
            members.sort_unstable();
            let mut choices = spec.choices;
            choices.sort();
            info_sets.push(InfoSet {
                owner: spec.owner,
                nodes: members,
                choices,
            });
        }

        Ok(Arena {
            n,
            alternatives: {
                let mut a = alternatives;
                a.sort();
                a
            },
            nodes,
            info_sets,
        })
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The declared alternatives, sorted.
    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    /// All nodes, indexed by id.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// The node with the given id.
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// All information sets, indexed by id.
    pub fn info_sets(&self) -> &[InfoSet] {
        &self.info_sets
    }

    /// The information set with the given id.
    pub fn info_set(&self, id: InfoSetId) -> &InfoSet {
        &self.info_sets[id]
    }

    /// The unique root (the node without a parent).
    pub fn root(&self) -> Result<NodeId> {
        let mut roots = self.nodes.iter().enumerate().filter(|(_, n)| n.parent.is_none());
        match (roots.next(), roots.next()) {
            (Some((id, _)), None) => Ok(id),
            (None, _) => Err(Error::InvalidArena("no root node".to_owned())),
            (Some(_), Some(_)) => Err(Error::InvalidArena("multiple root nodes".to_owned())),
        }
    }

    /// Whether the node is terminal.
    pub fn is_terminal(&self, id: NodeId) -> bool {
        self.nodes[id].owner.is_none()
    }

    /// The alternative elected at a terminal node.
    pub fn outcome_at(&self, id: NodeId) -> Result<&Alternative> {
        self.nodes[id]
            .outcome
            .as_ref()
            .ok_or_else(|| Error::InvalidArena(format!("node {id} is not terminal")))
    }

    /// The child reached from `id` by the given choice label.
    pub fn child_via(&self, id: NodeId, label: &ChoiceLabel) -> Option<NodeId> {
        self.nodes[id]
            .children
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| *c)
    }

    /// The path of node ids from the root to `id`, inclusive.
    pub fn path_from_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some((p, _)) = &self.nodes[cur].parent {
            cur = *p;
            path.push(cur);
            if path.len() > self.nodes.len() {
                break; // defensive against parent cycles in unvalidated arenas
            }
        }
        path.reverse();
        path
    }

    /// Whether node `a` strictly precedes node `b` (`a` is a proper ancestor).
    pub fn strictly_precedes(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.path_from_root(b).contains(&a)
    }

    /// The information-set ids owned by agent `i`, ascending.
    pub fn agent_info_sets(&self, i: AgentId) -> Vec<InfoSetId> {
        self.info_sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.owner == i)
            .map(|(id, _)| id)
            .collect()
    }

    /// Checks the structural game-form invariants and reports every
    /// violation found:
    ///
    /// (a) parent links form one rooted tree; (b) every decision node lies in
    /// exactly one information set, owned by the node's owner; (c) all nodes
    /// of an information set offer identical choice-label sets; (d) each
    /// decision node's children are in bijection with its information set's
    /// choice labels, and terminals have no children; (e) no information set
    /// occurs twice along a root-to-leaf path.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        // (a) rooted tree: one root, no cycles, all reachable.
        let roots: Vec<NodeId> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.parent.is_none())
            .map(|(id, _)| id)
            .collect();
        let mut tree_ok = roots.len() == 1;
        if roots.len() != 1 {
            out.push(Diagnostic::new(
                Invariant::RootedTree,
                format!("expected exactly one root, found {:?}", roots),
            ));
        }
        if let [root] = roots[..] {
            let mut seen = vec![false; self.nodes.len()];
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(v) = stack.pop() {
                for (_, c) in &self.nodes[v].children {
                    if !seen[*c] {
                        seen[*c] = true;
                        stack.push(*c);
                    }
                }
            }
            let unreachable: Vec<NodeId> =
                (0..self.nodes.len()).filter(|&id| !seen[id]).collect();
            if !unreachable.is_empty() {
                tree_ok = false;
                out.push(Diagnostic::new(
                    Invariant::RootedTree,
                    format!("nodes {unreachable:?} are not reachable from root {root}"),
                ));
            }
        }

        // (b) decision nodes in exactly one information set, owner-consistent.
        let mut membership: Vec<Vec<InfoSetId>> = vec![Vec::new(); self.nodes.len()];
        for (iid, iset) in self.info_sets.iter().enumerate() {
            for &m in &iset.nodes {
                membership[m].push(iid);
            }
        }
        for (id, node) in self.nodes.iter().enumerate() {
            match node.owner {
                Some(agent) => {
                    let declared = node.info_set;
                    if membership[id].len() != 1 {
                        out.push(Diagnostic::new(
                            Invariant::OwnerMembership,
                            format!(
                                "decision node {id} is listed by information sets {:?}, expected exactly one",
                                membership[id]
                            ),
                        ));
                    }
                    if let Some(iid) = declared {
                        if !membership[id].contains(&iid) {
                            out.push(Diagnostic::new(
                                Invariant::OwnerMembership,
                                format!(
                                    "decision node {id} declares information set {iid} but is not listed in it"
                                ),
                            ));
                        }
                        if self.info_sets[iid].owner != agent {
                            out.push(Diagnostic::new(
                                Invariant::OwnerMembership,
                                format!(
                                    "node {id} is owned by agent {agent} but its information set {iid} is owned by agent {}",
                                    self.info_sets[iid].owner
                                ),
                            ));
                        }
                    }
                }
                None => {
                    if !membership[id].is_empty() {
                        out.push(Diagnostic::new(
                            Invariant::OwnerMembership,
                            format!(
                                "terminal node {id} is listed by information sets {:?}",
                                membership[id]
                            ),
                        ));
                    }
                }
            }
        }

        // (c) uniform choice sets within an information set.
        for (iid, iset) in self.info_sets.iter().enumerate() {
            let mut declared = iset.choices.clone();
            declared.sort();
            let had = declared.len();
            declared.dedup();
            if declared.len() != had {
                out.push(Diagnostic::new(
                    Invariant::UniformChoices,
                    format!("information set {iid} declares duplicate choice labels"),
                ));
            }
            let mut label_sets: Vec<(NodeId, Vec<ChoiceLabel>)> = Vec::new();
            for &m in &iset.nodes {
                let mut labels: Vec<ChoiceLabel> =
                    self.nodes[m].children.iter().map(|(l, _)| l.clone()).collect();
                labels.sort();
                label_sets.push((m, labels));
            }
            if let Some((first, first_labels)) = label_sets.first() {
                for (m, labels) in &label_sets[1..] {
                    if labels != first_labels {
                        out.push(Diagnostic::new(
                            Invariant::UniformChoices,
                            format!(
                                "information set {iid}: nodes {first} and {m} offer different choice sets"
                            ),
                        ));
                    }
                }
            }
        }

        // (d) children ↔ declared choices, per node.
        for (id, node) in self.nodes.iter().enumerate() {
            let mut labels: Vec<ChoiceLabel> =
                node.children.iter().map(|(l, _)| l.clone()).collect();
            labels.sort();
            let had = labels.len();
            labels.dedup();
            if labels.len() != had {
                out.push(Diagnostic::new(
                    Invariant::ChildBijection,
                    format!("node {id} has two children sharing one choice label"),
                ));
            }
            match node.owner {
                Some(_) => {
                    if let Some(iid) = node.info_set {
                        let mut declared = self.info_sets[iid].choices.clone();
                        declared.sort();
                        declared.dedup();
                        if labels != declared {
                            out.push(Diagnostic::new(
                                Invariant::ChildBijection,
                                format!(
                                    "node {id}: children labels {:?} do not match information set {iid}'s choices {:?}",
                                    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                                    declared.iter().map(|l| l.to_string()).collect::<Vec<_>>()
                                ),
                            ));
                        }
                        if declared.is_empty() {
                            out.push(Diagnostic::new(
                                Invariant::ChildBijection,
                                format!("information set {iid} of node {id} declares no choices"),
                            ));
                        }
                    }
                }
                None => {
                    if !node.children.is_empty() {
                        out.push(Diagnostic::new(
                            Invariant::ChildBijection,
                            format!("terminal node {id} has children"),
                        ));
                    }
                }
            }
        }

        // (e) no information set repeats along any root-to-leaf path.
        if tree_ok {
            if let Ok(root) = self.root() {
                let mut on_path: BTreeSet<InfoSetId> = BTreeSet::new();
                self.check_no_repeat(root, &mut on_path, &mut out);
            }
        }

        out
    }

    fn check_no_repeat(
        &self,
        id: NodeId,
        on_path: &mut BTreeSet<InfoSetId>,
        out: &mut Vec<Diagnostic>,
    ) {
        let iset = self.nodes[id].info_set;
        if let Some(iid) = iset {
            if !on_path.insert(iid) {
                out.push(Diagnostic::new(
                    Invariant::NoRepeatOnPath,
                    format!("information set {iid} occurs twice on the path to node {id}"),
                ));
                return;
            }
        }
        for (_, c) in &self.nodes[id].children {
            self.check_no_repeat(*c, on_path, out);
        }
        if let Some(iid) = iset {
            on_path.remove(&iid);
        }
    }
}

/// The five structural invariants an arena is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invariant {
    /// (a) parent links form a single rooted tree.
    RootedTree,
    /// (b) decision nodes sit in exactly one information set of their owner.
    OwnerMembership,
    /// (c) one information set, one choice-label set.
    UniformChoices,
    /// (d) children correspond one-to-one to choice labels.
    ChildBijection,
    /// (e) no information set occurs twice along a path.
    NoRepeatOnPath,
}

impl Invariant {
    /// The conventional letter for this invariant.
    pub fn letter(&self) -> char {
        match self {
            Invariant::RootedTree => 'a',
            Invariant::OwnerMembership => 'b',
            Invariant::UniformChoices => 'c',
            Invariant::ChildBijection => 'd',
            Invariant::NoRepeatOnPath => 'e',
        }
    }
}

/// One structural violation found by [`Arena::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Which invariant is violated.
    pub invariant: Invariant,
    /// Human-readable detail naming the offending node/information-set ids.
    pub message: String,
}

impl Diagnostic {
    fn new(invariant: Invariant, message: String) -> Self {
        Diagnostic { invariant, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant ({}): {}", self.invariant.letter(), self.message)
    }
}

/// A pure strategy: one choice label per information set of the owner.
///
/// Measurability is structural — the map is keyed by information set, so the
/// same choice is made at every node the owner cannot distinguish.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Strategy {
    /// The agent this strategy belongs to.
    pub owner: AgentId,
    choices: BTreeMap<InfoSetId, ChoiceLabel>,
}

impl Strategy {
    /// A strategy with no assignments yet.
    pub fn new(owner: AgentId) -> Self {
        Strategy {
            owner,
            choices: BTreeMap::new(),
        }
    }

    /// Builds a strategy from explicit assignments.
    pub fn from_choices(owner: AgentId, choices: BTreeMap<InfoSetId, ChoiceLabel>) -> Self {
        Strategy { owner, choices }
    }

    /// The choice at an information set, if assigned.
    pub fn choice_at(&self, info_set: InfoSetId) -> Option<&ChoiceLabel> {
        self.choices.get(&info_set)
    }

    /// Assigns (or replaces) the choice at an information set.
    pub fn assign(&mut self, info_set: InfoSetId, label: ChoiceLabel) {
        self.choices.insert(info_set, label);
    }

    /// The full assignment map.
    pub fn choices(&self) -> &BTreeMap<InfoSetId, ChoiceLabel> {
        &self.choices
    }
}

/// Follows each owner's strategy from `start` until a terminal node is
/// reached, and returns that terminal node.
///
/// `profile` holds one strategy per agent, indexed so that agent `i`'s
/// strategy is `profile[i - 1]`. Fails with [`Error::IncompleteStrategy`]
/// when an encountered information set has no assigned choice (or the
/// assigned label does not name a child).
pub fn play_from(arena: &Arena, start: NodeId, profile: &[Strategy]) -> Result<NodeId> {
    let mut cur = start;
    for _ in 0..=arena.nodes().len() {
        let node = arena.node(cur);
        let Some(owner) = node.owner else {
            return Ok(cur);
        };
        let iset = node
            .info_set
            .ok_or_else(|| Error::InvalidArena(format!("decision node {cur} has no information set")))?;
        let strategy = profile
            .get((owner - 1) as usize)
            .filter(|s| s.owner == owner)
            .ok_or_else(|| Error::IncompleteStrategy {
                agent: owner,
                info_set: iset,
            })?;
        let label = strategy
            .choice_at(iset)
            .ok_or(Error::IncompleteStrategy {
                agent: owner,
                info_set: iset,
            })?;
        cur = arena
            .child_via(cur, label)
            .ok_or(Error::IncompleteStrategy {
                agent: owner,
                info_set: iset,
            })?;
    }
    Err(Error::InvalidArena(
        "play exceeded the node count; the arena has a parent cycle".to_owned(),
    ))
}

/// Convenience: play from `start` and return the elected alternative.
pub fn outcome_from(arena: &Arena, start: NodeId, profile: &[Strategy]) -> Result<Alternative> {
    let leaf = play_from(arena, start, profile)?;
    Ok(arena.outcome_at(leaf)?.clone())
}

/// How many pure strategies agent `i` has, as a product over their
/// information sets.
pub fn strategy_count(arena: &Arena, i: AgentId) -> u128 {
    arena
        .agent_info_sets(i)
        .iter()
        .map(|&iid| arena.info_set(iid).choices.len() as u128)
        .product()
}

/// Materializes all pure strategies of agent `i`, in a deterministic order
/// (mixed-radix over the agent's information sets, lowest id most
/// significant, choices in sorted label order).
///
/// Fails with [`Error::SearchSpaceExceeded`] when the count exceeds `cap`.
pub fn enumerate_strategies(arena: &Arena, i: AgentId, cap: u64) -> Result<Vec<Strategy>> {
    let isets = arena.agent_info_sets(i);
    let count = strategy_count(arena, i);
    if count > cap as u128 {
        return Err(Error::SearchSpaceExceeded {
            required: count,
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let radices: Vec<usize> = isets
        .iter()
        .map(|&iid| arena.info_set(iid).choices.len())
        .collect();
    let mut digits = vec![0usize; isets.len()];
    loop {
        let mut s = Strategy::new(i);
        for (pos, &iid) in isets.iter().enumerate() {
            s.assign(iid, arena.info_set(iid).choices[digits[pos]].clone());
        }
        out.push(s);
        // Increment the mixed-radix counter, least significant digit last.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < radices[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// One strategy per agent per preference in that agent's domain.
///
/// This is the object obvious-dominance verification quantifies over: for a
/// type profile `R`, the induced strategy profile plays `σ_1^{R_1}, …,
/// σ_n^{R_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeStrategyProfile {
    by_agent: Vec<BTreeMap<Preference, Strategy>>,
}

impl TypeStrategyProfile {
    /// An empty profile over `n` agents.
    pub fn new(n: u32) -> Self {
        TypeStrategyProfile {
            by_agent: vec![BTreeMap::new(); n as usize],
        }
    }

    /// Number of agents.
    pub fn n(&self) -> u32 {
        self.by_agent.len() as u32
    }

    /// Records agent `i`'s strategy for type `r`.
    pub fn insert(&mut self, i: AgentId, r: Preference, strategy: Strategy) {
        self.by_agent[(i - 1) as usize].insert(r, strategy);
    }

    /// Agent `i`'s strategy when their preference is `r`.
    pub fn strategy_for(&self, i: AgentId, r: &Preference) -> Option<&Strategy> {
        self.by_agent[(i - 1) as usize].get(r)
    }

    /// Agent `i`'s declared domain, sorted.
    pub fn domain(&self, i: AgentId) -> Vec<Preference> {
        self.by_agent[(i - 1) as usize].keys().cloned().collect()
    }

    /// All domains in agent order.
    pub fn domains(&self) -> Vec<Vec<Preference>> {
        (1..=self.n()).map(|i| self.domain(i)).collect()
    }

    /// The strategy profile played at type profile `r`.
    pub fn profile_for(&self, r: &Profile) -> Result<Vec<Strategy>> {
        (1..=self.n())
            .map(|i| {
                self.strategy_for(i, r.get(i)).cloned().ok_or_else(|| {
                    Error::PreconditionViolated(format!(
                        "no strategy recorded for agent {i} at preference {:?}",
                        r.get(i)
                    ))
                })
            })
            .collect()
    }
}

/// All type profiles over the given per-agent domains, in lexicographic
/// order (agent 1's preference varies slowest).
pub fn type_profiles(domains: &[Vec<Preference>]) -> Vec<Profile> {
    let mut out = Vec::new();
    let mut digits = vec![0usize; domains.len()];
    if domains.iter().any(|d| d.is_empty()) {
        return out;
    }
    loop {
        let prefs: Vec<Preference> = domains
            .iter()
            .zip(&digits)
            .map(|(d, &ix)| d[ix].clone())
            .collect();
        out.push(Profile::new(prefs).expect("domains cover 1..=n agents"));
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < domains[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Whether every node of `i_prime` strictly precedes some node of `i` in the
/// tree order. This is the precedence relation between information sets used
/// to find earliest points of departure; it is normally applied to two sets
/// of the same owner.
pub fn info_precedes(arena: &Arena, i_prime: InfoSetId, i: InfoSetId) -> bool {
    let target = &arena.info_set(i).nodes;
    arena
        .info_set(i_prime)
        .nodes
        .iter()
        .all(|&zp| target.iter().any(|&z| arena.strictly_precedes(zp, z)))
}

/// The truth-telling type-strategy profile on an arena whose choices are
/// preference subsets: at each information set, a type `R_i` selects the
/// label containing `R_i`; if no label contains it (the agent's earlier
/// choice already excluded this branch), the first label in sorted order is
/// selected, which keeps the profile total without affecting reachable play.
///
/// Fails with a precondition error if any choice label is still an opaque
/// token; see [`default_truth_telling`] for the lenient variant.
pub fn truth_telling_profile(
    arena: &Arena,
    domains: &[Vec<Preference>],
) -> Result<TypeStrategyProfile> {
    for iset in arena.info_sets() {
        for label in &iset.choices {
            if label.as_prefs().is_none() {
                return Err(Error::PreconditionViolated(
                    "truth-telling needs preference-subset choice labels; relabel the arena first"
                        .to_owned(),
                ));
            }
        }
    }
    Ok(default_truth_telling(arena, domains))
}

/// Truth-telling on arenas with arbitrary labels: a type `R_i` selects, at
/// each information set, the preference-subset label containing `R_i` if one
/// exists, else the token label equal to `R_i`'s unique top alternative if
/// one exists, else the first label in sorted order.
///
/// On fully relabelled arenas this coincides with [`truth_telling_profile`];
/// on token-labelled two-alternative arenas (where tokens name alternatives)
/// it selects the top alternative everywhere.
pub fn default_truth_telling(arena: &Arena, domains: &[Vec<Preference>]) -> TypeStrategyProfile {
    let mut tsp = TypeStrategyProfile::new(arena.n());
    for i in 1..=arena.n() {
        let isets = arena.agent_info_sets(i);
        for r in &domains[(i - 1) as usize] {
            let mut s = Strategy::new(i);
            for &iid in &isets {
                let choices = &arena.info_set(iid).choices;
                let by_pref = choices.iter().find(|l| l.contains_pref(r));
                let by_top = r.top().ok().and_then(|top| {
                    choices
                        .iter()
                        .find(|l| matches!(l, ChoiceLabel::Token(t) if *t == top.as_str()))
                });
                let label = by_pref
                    .or(by_top)
                    .or_else(|| choices.first())
                    .cloned()
                    .expect("validated information sets declare at least one choice");
                s.assign(iid, label);
            }
            tsp.insert(i, r.clone(), s);
        }
    }
    tsp
}
