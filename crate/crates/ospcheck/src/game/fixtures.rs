//! Hand-built worked examples.

use crate::committee::Committee;
use crate::model::{Alternative, Coalition, Preference};

use super::{
    default_truth_telling, Arena, ChoiceLabel, InfoSetSpec, NodeSpec, TypeStrategyProfile,
};

/// The five-agent worked game from the guide (chapter on game forms).
///
/// Agent 1 opens; agent 2 answers without observing agent 1 (one information
/// set pooling both of agent 1's moves). After (1: x, 2: y), agent 3 decides
/// alone. After (1: y, 2: x), agents 4 and 5 move in turn, with agent 5 not
/// observing agent 4. The other two openings end immediately: (x, x) elects
/// `x`, (y, y) elects `y`.
///
/// Node ids: `0..=6` are the decision nodes `z0..=z6` (z1 = agent 2 after
/// `y`, z2 = agent 2 after `x`, z3 = agent 3, z4 = agent 4, z5/z6 = agent 5
/// after agent 4 played `y`/`x`); `7..=14` are the leaves. Information-set
/// ids: 0..4 for agents 1..5 in order, with set 1 = {z1, z2} and set
/// 4 = {z5, z6}.
///
/// Returned together with the truth-telling type-strategy profile over the
/// two strict preferences per agent (choose your top alternative's token at
/// every information set). Under it the game decides by the committee of
/// [`figure1_committee`], is obviously strategy-proof with respect to the
/// partition `{{1,2},{3},{4,5}}`, and fails obvious strategy-proofness at
/// the finest partition.
///
/// ```
/// use ospcheck::game::figure1_game;
///
/// let (arena, tsp) = figure1_game();
/// assert!(arena.validate().is_empty());
/// assert_eq!(arena.nodes().len(), 15);
/// assert_eq!(tsp.domains().len(), 5);
/// ```
pub fn figure1_game() -> (Arena, TypeStrategyProfile) {
    let x = || Alternative::x();
    let y = || Alternative::y();
    let cx = || ChoiceLabel::token("x");
    let cy = || ChoiceLabel::token("y");
    let decision = |owner, parent, info_set| NodeSpec {
        owner: Some(owner),
        parent,
        info_set: Some(info_set),
        outcome: None,
    };
    let leaf = |parent, outcome| NodeSpec {
        owner: None,
        parent: Some(parent),
        info_set: None,
        outcome: Some(outcome),
    };

    let nodes = vec![
        decision(1, None, 0),               // 0: z0
        decision(2, Some((0, cy())), 1),    // 1: z1, after 1 plays y
        decision(2, Some((0, cx())), 1),    // 2: z2, after 1 plays x
        decision(3, Some((2, cy())), 2),    // 3: z3, after (x, y)
        decision(4, Some((1, cx())), 3),    // 4: z4, after (y, x)
        decision(5, Some((4, cy())), 4),    // 5: z5, after 4 plays y
        decision(5, Some((4, cx())), 4),    // 6: z6, after 4 plays x
        leaf((1, cy()), y()),               // 7: (y, y) elects y
        leaf((2, cx()), x()),               // 8: (x, x) elects x
        leaf((3, cy()), y()),               // 9: 3 plays y
        leaf((3, cx()), x()),               // 10: 3 plays x
        leaf((5, cy()), y()),               // 11: z5, 5 plays y
        leaf((5, cx()), y()),               // 12: z5, 5 plays x — still y
        leaf((6, cy()), y()),               // 13: z6, 5 plays y
        leaf((6, cx()), x()),               // 14: z6, 5 plays x
    ];
    let both = || vec![cx(), cy()];
    let info_sets = vec![
        InfoSetSpec { owner: 1, nodes: vec![0], choices: both() },
        InfoSetSpec { owner: 2, nodes: vec![1, 2], choices: both() },
        InfoSetSpec { owner: 3, nodes: vec![3], choices: both() },
        InfoSetSpec { owner: 4, nodes: vec![4], choices: both() },
        InfoSetSpec { owner: 5, nodes: vec![5, 6], choices: both() },
    ];

    let arena = Arena::from_parts(5, vec![x(), y()], nodes, info_sets)
        .expect("the fixture is well-formed");
    debug_assert!(arena.validate().is_empty());

    let domains: Vec<Vec<Preference>> =
        (0..5).map(|_| vec![Preference::p_x(), Preference::p_y()]).collect();
    let tsp = default_truth_telling(&arena, &domains);
    (arena, tsp)
}

/// The committee decided by [`figure1_game`] under truth-telling: minimal
/// winning coalitions `{1,2}`, `{1,3}`, `{2,4,5}` over five agents.
pub fn figure1_committee() -> Committee {
    Committee::new(
        5,
        vec![
            Coalition::from_members(&[1, 2]),
            Coalition::from_members(&[1, 3]),
            Coalition::from_members(&[2, 4, 5]),
        ],
    )
    .expect("the fixture committee is a valid antichain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{outcome_from, play_from};
    use crate::model::Profile;

    #[test]
    fn fixture_validates_and_has_the_drawn_shape() {
        let (arena, _) = figure1_game();
        assert!(arena.validate().is_empty());
        assert_eq!(arena.nodes().len(), 15);
        assert_eq!(arena.info_sets().len(), 5);
        assert_eq!(arena.root().unwrap(), 0);
        assert_eq!(arena.info_set(1).nodes, vec![1, 2]);
        assert_eq!(arena.info_set(4).nodes, vec![5, 6]);
        // Terminal outcomes, left to right as drawn.
        let outcomes: Vec<&str> = (7..=14)
            .map(|id| arena.outcome_at(id).unwrap().as_str())
            .collect();
        assert_eq!(outcomes, vec!["y", "x", "y", "x", "y", "y", "y", "x"]);
    }

    #[test]
    fn truth_telling_play_matches_the_committee() {
        let (arena, tsp) = figure1_game();
        let committee = figure1_committee();
        for bits in 0u64..32 {
            let supporters = Coalition::from_bits(bits);
            let profile = Profile::from_x_supporters(5, supporters).unwrap();
            let strategies = tsp.profile_for(&profile).unwrap();
            let played = outcome_from(&arena, 0, &strategies).unwrap();
            let expected = committee.emvr_evaluate(&profile).unwrap();
            assert_eq!(played, expected, "supporters {supporters}");
        }
    }

    #[test]
    fn sample_paths_land_where_drawn() {
        let (arena, tsp) = figure1_game();
        // All five favour x: 1 plays x, 2 plays x — leaf 8.
        let all_x = Profile::from_x_supporters(5, Coalition::full(5).unwrap()).unwrap();
        let s = tsp.profile_for(&all_x).unwrap();
        assert_eq!(play_from(&arena, 0, &s).unwrap(), 8);
        // Only agents 2, 4, 5 favour x: path z0 -y-> z1 -x-> z4 -x-> z6 -x-> leaf 14.
        let partial =
            Profile::from_x_supporters(5, Coalition::from_members(&[2, 4, 5])).unwrap();
        let s = tsp.profile_for(&partial).unwrap();
        assert_eq!(play_from(&arena, 0, &s).unwrap(), 14);
    }
}
