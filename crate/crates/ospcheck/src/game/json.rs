//! JSON wire format for arenas.
//!
//! ```json
//! {
//!   "n": 2,
//!   "alternatives": ["x", "y"],
//!   "nodes": [
//!     {"id": 0, "owner": 1, "infoSet": 0},
//!     {"id": 1, "owner": "terminal", "parent": 0, "choice": "x", "outcome": "x"},
//!     {"id": 2, "owner": "terminal", "parent": 0, "choice": "y", "outcome": "y"}
//!   ],
//!   "infoSets": [
//!     {"id": 0, "owner": 1, "nodes": [0], "choices": ["x", "y"]}
//!   ]
//! }
//! ```
//!
//! Choice labels are either strings (tokens) or arrays of preferences
//! (preference-subset labels; a preference is an array of indifference tiers,
//! best first). Serialization is canonical: nodes and information sets are
//! emitted in id order with stable field order, so equal arenas serialize to
//! identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, Alternative};

use super::{Arena, ChoiceLabel, InfoSetId, InfoSetSpec, NodeId, NodeSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum OwnerRepr {
    Agent(AgentId),
    Tag(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct NodeRepr {
    pub id: NodeId,
    pub owner: OwnerRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceLabel>,
    #[serde(rename = "infoSet", default, skip_serializing_if = "Option::is_none")]
    pub info_set: Option<InfoSetId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Alternative>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct InfoSetRepr {
    pub id: InfoSetId,
    pub owner: AgentId,
    pub nodes: Vec<NodeId>,
    pub choices: Vec<ChoiceLabel>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ArenaRepr {
    pub n: u32,
    pub alternatives: Vec<Alternative>,
    pub nodes: Vec<NodeRepr>,
    #[serde(rename = "infoSets")]
    pub info_sets: Vec<InfoSetRepr>,
}

impl TryFrom<ArenaRepr> for Arena {
    type Error = Error;

    fn try_from(mut repr: ArenaRepr) -> Result<Self> {
        repr.nodes.sort_by_key(|n| n.id);
        for (ix, node) in repr.nodes.iter().enumerate() {
            if node.id != ix {
                return Err(Error::InvalidArena(format!(
                    "node ids must be 0..{} without gaps; missing or duplicate id near {}",
                    repr.nodes.len(),
                    node.id
                )));
            }
        }
        repr.info_sets.sort_by_key(|s| s.id);
        for (ix, iset) in repr.info_sets.iter().enumerate() {
            if iset.id != ix {
                return Err(Error::InvalidArena(format!(
                    "information-set ids must be 0..{} without gaps; missing or duplicate id near {}",
                    repr.info_sets.len(),
                    iset.id
                )));
            }
        }

        let mut specs = Vec::with_capacity(repr.nodes.len());
        for node in repr.nodes {
            let owner = match node.owner {
                OwnerRepr::Agent(a) => Some(a),
                OwnerRepr::Tag(t) if t == "terminal" => None,
                OwnerRepr::Tag(t) => {
                    return Err(Error::InvalidArena(format!(
                        "node {}: owner must be an agent id or \"terminal\", got {t:?}",
                        node.id
                    )))
                }
            };
            let parent = match (node.parent, node.choice) {
                (Some(p), Some(c)) => Some((p, c)),
                (None, None) => None,
                (Some(_), None) => {
                    return Err(Error::InvalidArena(format!(
                        "node {}: has a parent but no incoming choice label",
                        node.id
                    )))
                }
                (None, Some(_)) => {
                    return Err(Error::InvalidArena(format!(
                        "node {}: has an incoming choice label but no parent",
                        node.id
                    )))
                }
            };
            specs.push(NodeSpec {
                owner,
                parent,
                info_set: node.info_set,
                outcome: node.outcome,
            });
        }
        let iset_specs = repr
            .info_sets
            .into_iter()
            .map(|s| InfoSetSpec {
                owner: s.owner,
                nodes: s.nodes,
                choices: s.choices,
            })
            .collect();
        Arena::from_parts(repr.n, repr.alternatives, specs, iset_specs)
    }
}

impl From<Arena> for ArenaRepr {
    fn from(arena: Arena) -> Self {
        let nodes = arena
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, node)| NodeRepr {
                id,
                owner: match node.owner {
                    Some(a) => OwnerRepr::Agent(a),
                    None => OwnerRepr::Tag("terminal".to_owned()),
                },
                parent: node.parent.as_ref().map(|(p, _)| *p),
                choice: node.parent.as_ref().map(|(_, c)| c.clone()),
                info_set: node.info_set,
                outcome: node.outcome.clone(),
            })
            .collect();
        let info_sets = arena
            .info_sets()
            .iter()
            .enumerate()
            .map(|(id, iset)| InfoSetRepr {
                id,
                owner: iset.owner,
                nodes: iset.nodes.clone(),
                choices: iset.choices.clone(),
            })
            .collect();
        ArenaRepr {
            n: arena.n(),
            alternatives: arena.alternatives().to_vec(),
            nodes,
            info_sets,
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::game::{fixtures, Arena, ChoiceLabel};
    use crate::model::Preference;

    #[test]
    fn arena_round_trips_through_json() {
        let (arena, _) = fixtures::figure1_game();
        let text = serde_json::to_string_pretty(&arena).unwrap();
        let back: Arena = serde_json::from_str(&text).unwrap();
        assert_eq!(arena, back);
    }

    #[test]
    fn serialization_is_canonical() {
        let (arena, _) = fixtures::figure1_game();
        let a = serde_json::to_string(&arena).unwrap();
        let b = serde_json::to_string(&serde_json::from_str::<Arena>(&a).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn token_and_preference_labels_parse() {
        let token: ChoiceLabel = serde_json::from_str("\"x\"").unwrap();
        assert_eq!(token, ChoiceLabel::token("x"));
        let prefs: ChoiceLabel = serde_json::from_str("[[[\"x\"],[\"y\"]]]").unwrap();
        assert_eq!(prefs, ChoiceLabel::prefs(vec![Preference::p_x()]));
        assert!(serde_json::from_str::<ChoiceLabel>("[]").is_err());
    }

    #[test]
    fn small_arena_parses_from_literal_json() {
        let text = r#"{
            "n": 1,
            "alternatives": ["x", "y"],
            "nodes": [
                {"id": 0, "owner": 1, "infoSet": 0},
                {"id": 1, "owner": "terminal", "parent": 0, "choice": "x", "outcome": "x"},
                {"id": 2, "owner": "terminal", "parent": 0, "choice": "y", "outcome": "y"}
            ],
            "infoSets": [
                {"id": 0, "owner": 1, "nodes": [0], "choices": ["x", "y"]}
            ]
        }"#;
        let arena: Arena = serde_json::from_str(text).unwrap();
        assert!(arena.validate().is_empty());
        assert_eq!(arena.n(), 1);
        assert_eq!(arena.nodes().len(), 3);
    }

    #[test]
    fn gapped_node_ids_are_rejected() {
        let text = r#"{
            "n": 1,
            "alternatives": ["x"],
            "nodes": [
                {"id": 0, "owner": 1, "infoSet": 0},
                {"id": 2, "owner": "terminal", "parent": 0, "choice": "x", "outcome": "x"}
            ],
            "infoSets": [
                {"id": 0, "owner": 1, "nodes": [0], "choices": ["x"]}
            ]
        }"#;
        assert!(serde_json::from_str::<Arena>(text).is_err());
    }
}
