mod common;

use common::{random_game_checked, random_midgame};
use hanabi_evo::agents::{AgentPolicy, Chromosome, PresetName};
use hanabi_evo::engine::replay;
use hanabi_evo::knowledge::PlayerView;
use hanabi_evo::rng::{rng_for, DECISION_STREAM};
use hanabi_evo::rules::Edition;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_games_keep_invariants(size in 2usize..=5, seed in any::<u64>()) {
        let g = random_game_checked(size, seed).map_err(TestCaseError::fail)?;
        prop_assert!(g.is_terminal());
        prop_assert!(g.score() <= 25);
    }

    #[test]
    fn replay_reproduces_history(size in 2usize..=5, seed in any::<u64>()) {
        let g = random_game_checked(size, seed).map_err(TestCaseError::fail)?;
        let again = replay(size, seed, &g.action_log()).unwrap();
        prop_assert_eq!(again.history(), g.history());
        prop_assert_eq!(again.export_history(), g.export_history());
    }

    // Swapping one of the acting player's own cards with a deck card changes
    // nothing that player can see, so no agent may act differently.
    #[test]
    fn agents_ignore_hidden_cards(
        size in 2usize..=5,
        seed in any::<u64>(),
        steps in 0usize..50,
        slot_pick in any::<usize>(),
        deck_pick in any::<usize>(),
        chrom_seed in any::<u64>(),
    ) {
        let g = random_midgame(size, seed, steps);
        prop_assume!(g.deck_len() > 0);
        let me = g.current_player();
        let mut other = g.clone();
        other.swap_hidden(me, slot_pick % g.hand(me).len(), deck_pick % g.deck_len());

        let a = PlayerView::new(&g, me);
        let b = PlayerView::new(&other, me);
        prop_assert_eq!(a.unseen(), b.unseen());
        for s in 0..a.my_hand_len() {
            prop_assert_eq!(a.prob_playable(s), b.prob_playable(s));
            prop_assert_eq!(a.prob_useless(s), b.prob_useless(s));
            prop_assert_eq!(a.prob_necessary(s), b.prob_necessary(s));
        }

        let mut policies: Vec<AgentPolicy> = PresetName::POOL.iter().map(|&n| AgentPolicy::preset(n)).collect();
        for edition in [Edition::Old, Edition::New] {
            let c = Chromosome::random(edition, &mut rng_for(chrom_seed, 0));
            policies.push(AgentPolicy::RuleSequence(c));
        }
        for p in &policies {
            let agent = p.compile(size);
            let x = agent.act(&g, me, &mut rng_for(seed, DECISION_STREAM));
            let y = agent.act(&other, me, &mut rng_for(seed, DECISION_STREAM));
            prop_assert_eq!(x, y, "{} changed its move", p.label());
        }
    }
}

#[test]
fn illegal_actions_leave_state_untouched() {
    let mut g = random_midgame(3, 5, 10);
    let before = g.clone();
    let me = g.current_player();
    for bad in [
        hanabi_evo::Action::Play(9),
        hanabi_evo::Action::Discard(7),
        hanabi_evo::Action::tell_value(me, 1),
        hanabi_evo::Action::tell_value(9, 1),
    ] {
        assert!(g.apply(bad).is_err());
        assert_eq!(g, before);
    }
}
