use blockdim::addition::{add_prefixes, carry_joint, window_sum, CarryEntropies};
use blockdim::bitseq::{block_counts, extend_counts, Block, BlockCounter, Word};
use blockdim::bounds::{convergence_table, verify_sandwich, SANDWICH_SLACK};
use blockdim::entropy::{
    block_entropy_h, conditional_entropy_at, conditional_entropy_last, conditional_entropy_window, empirical_distribution,
    joint_entropy, max_shift_gap, shift_bound,
};
use blockdim::exact::{rat, Rational};
use blockdim::markov::{
    cylinder_measure, exact_beta, exact_gamma, snake_chain, stationary_distribution, word_frequencies, LabeledMarkovChain,
};
use blockdim::rauzy::{beta_ell, brute_force_rauzy, gamma_ell, ContextSide};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..=1, min..=max).prop_map(|v| Word::from_symbols(&v).unwrap())
}

/// Biased words so that low-entropy cases show up as often as uniform ones.
fn biased_word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    (1u32..16, prop::collection::vec(0u32..16, min..=max))
        .prop_map(|(t, v)| v.into_iter().map(|r| u8::from(r < t)).collect::<Word>())
}

fn any_word(min: usize, max: usize) -> BoxedStrategy<Word> {
    prop_oneof![word(min, max), biased_word(min, max)].boxed()
}

/// Irreducible chains with up to 4 states: a cycle edge keeps every state
/// reachable, other weights are random small integers.
fn chain() -> impl Strategy<Value = LabeledMarkovChain> {
    (1usize..=4)
        .prop_flat_map(|m| (Just(m), prop::collection::vec(0u32..4, 2 * m * m)))
        .prop_map(|(m, weights)| {
            let mut w = [vec![vec![0u32; m]; m], vec![vec![0u32; m]; m]];
            for i in 0..m {
                for j in 0..m {
                    for b in 0..2 {
                        w[b][i][j] = weights[(b * m + i) * m + j];
                    }
                }
                w[i % 2][i][(i + 1) % m] += 1;
            }
            let mats: Vec<Vec<Vec<Rational>>> = (0..2)
                .map(|b| {
                    (0..m)
                        .map(|i| {
                            let total: u32 = (0..m).map(|j| w[0][i][j] + w[1][i][j]).sum();
                            (0..m).map(|j| rat(w[b][i][j] as i64, total as i64)).collect()
                        })
                        .collect()
                })
                .collect();
            let mut it = mats.into_iter();
            LabeledMarkovChain::new(it.next().unwrap(), it.next().unwrap()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn block_counts_sum_to_window_count(w in any_word(1, 300), ell in 1usize..8) {
        prop_assume!(ell <= w.len());
        let c = block_counts(&w, ell).unwrap();
        prop_assert_eq!(c.total(), (w.len() + 1 - ell) as u64);
        prop_assert_eq!(c.iter_nonzero().map(|(_, n)| n).sum::<u64>(), c.total());
    }

    #[test]
    fn counts_are_consistent_across_lengths(w in any_word(2, 300), ell in 1usize..8) {
        prop_assume!(ell < w.len());
        // Summing out the last symbol of the (ℓ+1)-blocks gives the ℓ-blocks
        // of w minus its final window.
        let long = block_counts(&w, ell + 1).unwrap();
        let short = block_counts(&w.slice(0, w.len() - 1), ell).unwrap();
        for u in 0..1u64 << ell {
            prop_assert_eq!(long.get(u) + long.get(u | 1 << ell), short.get(u));
        }
    }

    #[test]
    fn streaming_extension_matches_rescan(w in any_word(8, 200), ell in 1usize..7, extra in 0u8..=1) {
        prop_assume!(ell <= w.len());
        let counts = block_counts(&w, ell).unwrap();
        let suffix = w.slice(w.len() + 1 - ell, w.len());
        let extended = extend_counts(&counts, extra, &suffix).unwrap();
        let mut longer = w.clone();
        longer.push(extra);
        prop_assert_eq!(&extended, &block_counts(&longer, ell).unwrap());

        let mut counter = BlockCounter::new(ell).unwrap();
        for s in longer.iter() {
            counter.push(s);
        }
        prop_assert_eq!(counter.counts(), &extended);
    }

    #[test]
    fn block_roundtrip(w in word(1, 63)) {
        prop_assert_eq!(Block::encode(&w).unwrap().decode(), w);
    }

    #[test]
    fn rauzy_values_in_range_and_reversal_dual(w in any_word(2, 400), ell in 1usize..7) {
        prop_assume!(ell < w.len());
        let g = gamma_ell(&w, ell).unwrap();
        let b = beta_ell(&w, ell).unwrap();
        prop_assert!(g.value() <= rat(1, 2) && b.value() <= rat(1, 2));
        prop_assert_eq!(b, gamma_ell(&w.reversed(), ell).unwrap());
    }

    #[test]
    fn rauzy_matches_oracle(w in any_word(4, 48), ell in 1usize..=3) {
        prop_assume!(ell < w.len());
        prop_assert_eq!(gamma_ell(&w, ell).unwrap(), brute_force_rauzy(&w, ell, ContextSide::Before).unwrap());
        prop_assert_eq!(beta_ell(&w, ell).unwrap(), brute_force_rauzy(&w, ell, ContextSide::After).unwrap());
    }

    #[test]
    fn longer_context_never_hurts_on_common_windows(w in any_word(10, 400), ell in 1usize..6) {
        prop_assume!(ell + 1 < w.len());
        // Compare mismatch counts over the same positions: drop the first
        // prediction of the ℓ-table so both tables predict w[ℓ+1..].
        let short = gamma_ell(&w.slice(1, w.len()), ell).unwrap();
        let long = gamma_ell(&w, ell + 1).unwrap();
        prop_assert!(long.mismatches <= short.mismatches);
    }

    #[test]
    fn entropy_chain_rule(w in any_word(8, 500), ell in 1usize..7) {
        prop_assume!(ell < w.len());
        let d = empirical_distribution(&w, ell).unwrap();
        let joint = joint_entropy(&d);
        let sum: f64 = (0..=ell).map(|i| conditional_entropy_at(&d, i).unwrap()).sum();
        prop_assert!((joint - sum).abs() <= 1e-10);
        prop_assert!(((ell + 1) as f64 * block_entropy_h(&w, ell + 1).unwrap() - joint).abs() <= 1e-12);
    }

    #[test]
    fn conditioning_reduces_entropy(w in any_word(8, 500), ell in 2usize..7) {
        prop_assume!(ell < w.len());
        let d = empirical_distribution(&w, ell).unwrap();
        for from in 1..=ell {
            let wide = conditional_entropy_window(&d, ell, from - 1).unwrap();
            let narrow = conditional_entropy_window(&d, ell, from).unwrap();
            prop_assert!(wide <= narrow + 1e-12);
        }
        prop_assert!(conditional_entropy_last(&d) <= 1.0 + 1e-12);
    }

    #[test]
    fn sub_block_laws_nearly_shift_invariant(w in any_word(8, 500), ell in 1usize..7) {
        prop_assume!(ell < w.len());
        let d = empirical_distribution(&w, ell).unwrap();
        for width in 1..=ell {
            prop_assert!(max_shift_gap(&d, width).unwrap() <= shift_bound(&d));
        }
    }

    #[test]
    fn sandwich_holds(w in any_word(8, 800), ell in 1usize..7) {
        prop_assume!(ell < w.len());
        let r = verify_sandwich(&w, ell).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        prop_assert!(r.hc <= r.eta_gamma + SANDWICH_SLACK);
    }

    #[test]
    fn convergence_table_matches_direct(w in any_word(40, 300)) {
        let ns = [20, w.len()];
        let rows = convergence_table(&w, &[1, 3], &ns).unwrap();
        for r in rows {
            let p = w.slice(0, r.n);
            prop_assert_eq!(r.gamma, gamma_ell(&p, r.ell).unwrap());
            prop_assert_eq!(r.beta, beta_ell(&p, r.ell).unwrap());
            prop_assert!((r.h - block_entropy_h(&p, r.ell).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn addition_carry_identities(pair in (8usize..300).prop_flat_map(|n| (any_word(n, n), any_word(n, n))), ell in 1usize..6) {
        let (x, y) = pair;
        prop_assume!(ell < x.len());
        let d = carry_joint(&x, &y, ell).unwrap();
        prop_assert!(d.is_consistent());
        let e = CarryEntropies::of(&d);
        prop_assert!((e.zxyc - e.xyc).abs() <= 1e-9);
        prop_assert!(e.carry <= 1.0 + 1e-12);
        let s = add_prefixes(&x, &y).unwrap();
        prop_assert_eq!(window_sum(x.block(0, x.len().min(63)), y.block(0, x.len().min(63)), s.carry_into(x.len().min(63) - 1), x.len().min(63)),
            s.sum.block(0, x.len().min(63)));
    }

    #[test]
    fn addition_commutes(pair in (1usize..200).prop_flat_map(|n| (word(n, n), word(n, n)))) {
        let (x, y) = pair;
        prop_assert_eq!(add_prefixes(&x, &y).unwrap(), add_prefixes(&y, &x).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stationary_is_fixed_point(c in chain()) {
        let pi = stationary_distribution(&c).unwrap();
        let p = c.combined();
        let m = c.states();
        let total: Rational = pi.as_slice().iter().sum();
        prop_assert!(total.is_one());
        for j in 0..m {
            let col: Rational = (0..m).map(|i| &pi[i] * &p[i][j]).sum();
            prop_assert_eq!(&col, &pi[j]);
        }
    }

    #[test]
    fn word_measures_are_consistent(c in chain(), k in 1usize..7) {
        let pi = stationary_distribution(&c).unwrap();
        let f = word_frequencies(&c, &pi, k + 1).unwrap();
        let total: Rational = f.iter().sum();
        prop_assert!(total.is_one());
        let short = word_frequencies(&c, &pi, k).unwrap();
        for u in 0..1usize << k {
            // Extending on the right (bit k) or on the left (shift) both
            // marginalize to μ([u]).
            prop_assert_eq!(&(&f[u] + &f[u | 1 << k]), &short[u]);
            prop_assert_eq!(&(&f[u << 1] + &f[(u << 1) | 1]), &short[u]);
            let w: Word = (0..k).map(|j| ((u >> j) & 1) as u8).collect();
            prop_assert_eq!(&cylinder_measure(&c, &pi, &w), &short[u]);
        }
    }

    #[test]
    fn exact_rauzy_non_increasing(c in chain()) {
        let pi = stationary_distribution(&c).unwrap();
        let mut prev = (rat(1, 1), rat(1, 1));
        for ell in 1..=8 {
            let cur = (exact_beta(&c, &pi, ell).unwrap(), exact_gamma(&c, &pi, ell).unwrap());
            prop_assert!(cur.0 <= prev.0 && cur.1 <= prev.1);
            prop_assert!(cur.0 >= Rational::zero() && cur.1 <= rat(1, 2));
            prev = cur;
        }
    }

    #[test]
    fn snake_stationary_closed_form(c in chain(), k in 1usize..4) {
        let pi = stationary_distribution(&c).unwrap();
        let s = snake_chain(&c, k).unwrap();
        prop_assert_eq!(stationary_distribution(&s.chain).unwrap().into_vec(), s.stationary_closed_form(&c, &pi));
        let ps = stationary_distribution(&s.chain).unwrap();
        prop_assert_eq!(word_frequencies(&s.chain, &ps, 5).unwrap(), word_frequencies(&c, &pi, 5).unwrap());
    }
}
