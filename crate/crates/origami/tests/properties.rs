//! Property tests: canonical form is relabeling-invariant, the generator
//! action satisfies the defining relations, and types are preserved.

use exactnum::SL2Word;
use origami::Origami;
use proptest::prelude::*;

/// Random permutation pair on `n` squares (not necessarily a valid surface).
fn perm_pair(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    let idx: Vec<usize> = (0..n).collect();
    (Just(idx.clone()).prop_shuffle(), Just(idx).prop_shuffle())
}

fn relabel(o: &Origami, pi: &[usize]) -> Origami {
    let n = o.n_squares();
    let mut h = vec![0; n];
    let mut v = vec![0; n];
    for i in 0..n {
        h[pi[i]] = pi[o.h()[i]];
        v[pi[i]] = pi[o.v()[i]];
    }
    Origami::new(h, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_is_relabeling_invariant(
        (h, v) in (2usize..7).prop_flat_map(perm_pair),
        seed in any::<u64>(),
    ) {
        let o = Origami::new(h, v).unwrap();
        prop_assume!(o.validate().is_ok());
        // Derive a permutation from the seed.
        let n = o.n_squares();
        let mut pi: Vec<usize> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            pi.swap(i, (state >> 33) as usize % (i + 1));
        }
        let o2 = relabel(&o, &pi);
        prop_assert_eq!(o.canonical(), o2.canonical());
    }

    #[test]
    fn action_relations_hold(
        (h, v) in (2usize..7).prop_flat_map(perm_pair),
    ) {
        let o = Origami::new(h, v).unwrap();
        prop_assume!(o.validate().is_ok());
        let c = o.canonical();
        prop_assert_eq!(c.act(&SL2Word::parse("RRRR").unwrap()), c.clone());
        prop_assert_eq!(c.act(&SL2Word::parse("Ss").unwrap()), c.clone());
        prop_assert_eq!(c.act(&SL2Word::parse("sS").unwrap()), c.clone());
        prop_assert_eq!(c.act(&SL2Word::parse("RR").unwrap()), c.clone());
        // (RS)^3 = -I acts trivially after relabeling.
        prop_assert_eq!(c.act(&SL2Word::parse("RSRSRS").unwrap()), c.clone());
        // Type signature is invariant.
        let sig = c.validate().unwrap();
        prop_assert_eq!(c.act(&SL2Word::parse("SSR").unwrap()).validate().unwrap(), sig);
    }

    #[test]
    fn acting_then_inverting_returns(
        (h, v) in (2usize..7).prop_flat_map(perm_pair),
        word in "[SsRr]{1,6}",
    ) {
        let o = Origami::new(h, v).unwrap();
        prop_assume!(o.validate().is_ok());
        let c = o.canonical();
        let w = SL2Word::parse(&word).unwrap();
        let back = c.act(&w).act(&w.inverse());
        prop_assert_eq!(back, c);
    }
}
