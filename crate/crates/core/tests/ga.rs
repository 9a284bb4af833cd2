use hanabi_evo::agents::Chromosome;
use hanabi_evo::evolve::{
    evolve, ordered_crossover, ordered_crossover_at, ranking, swap_mutation, tournament_index, EvolveConfig,
};
use hanabi_evo::rng::rng_for;
use hanabi_evo::rules::{catalog, Edition};
use proptest::prelude::*;

fn edition() -> impl Strategy<Value = Edition> {
    prop_oneof![Just(Edition::Old), Just(Edition::New)]
}

proptest! {
    #[test]
    fn crossover_and_mutation_keep_permutations(ed in edition(), seed in any::<u64>(), m in 0.0f64..=1.0) {
        let mut rng = rng_for(seed, 0);
        let a = Chromosome::random(ed, &mut rng);
        let b = Chromosome::random(ed, &mut rng);
        let child = ordered_crossover(&a, &b, &mut rng).unwrap();
        prop_assert!(child.is_valid_permutation());
        prop_assert_eq!(child.len(), catalog(ed).len());
        let mutated = swap_mutation(&child, &mut rng, m);
        prop_assert!(mutated.is_valid_permutation());
        let moved = child.genes().iter().zip(mutated.genes()).filter(|(x, y)| x != y).count();
        prop_assert!(moved == 0 || moved == 2);
    }

    #[test]
    fn crossover_keeps_segment_and_fill_order(len in 2usize..30, seed in any::<u64>(), i in any::<usize>(), j in any::<usize>()) {
        use rand::seq::SliceRandom;
        let mut rng = rng_for(seed, 0);
        let mut a: Vec<usize> = (0..len).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (i, j) = { let (x, y) = (i % len, j % len); (x.min(y), x.max(y)) };
        let child = ordered_crossover_at(&a, &b, i, j);
        prop_assert_eq!(&child[i..=j], &a[i..=j]);
        let rest: Vec<usize> = child.iter().enumerate().filter(|(p, _)| *p < i || *p > j).map(|(_, &g)| g).collect();
        let want: Vec<usize> = b.iter().copied().filter(|g| !a[i..=j].contains(g)).collect();
        prop_assert_eq!(rest, want);
    }

    #[test]
    fn tournament_of_whole_population_picks_the_best(fit in prop::collection::vec(0.0f64..25.0, 1..40), seed in any::<u64>()) {
        let winner = tournament_index(&fit, fit.len(), &mut rng_for(seed, 0));
        prop_assert_eq!(winner, ranking(&fit)[0]);
    }
}

#[test]
fn crossover_rejects_mixed_catalogs() {
    let mut rng = rng_for(0, 0);
    let a = Chromosome::identity(Edition::Old);
    let b = Chromosome::identity(Edition::New);
    assert!(ordered_crossover(&a, &b, &mut rng).is_err());
}

#[test]
fn evolution_is_reproducible() {
    let cfg = EvolveConfig {
        p: 8,
        e: 2,
        t: 3,
        g: 3,
        n: 1,
        sizes: vec![2, 3],
        seed: 77,
        ..EvolveConfig::default()
    };
    let a = evolve(&cfg).unwrap();
    let b = evolve(&cfg).unwrap();
    assert_eq!(a.history, b.history);
    let other = evolve(&EvolveConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(a.history[0].population, other.history[0].population);
}
