use num_traits::{One, Zero};
use proptest::prelude::*;

use omegakit::format::{parse_table, write_table};
use omegakit::kc_oracle::{kc_ref, kraft_holds_ref};
use omegakit::machines::chaitin_table;
use omegakit::{
    allocate_lengths, build_test, check_invariants, combine_universal, dyadic_decompose, is_prefix_free,
    measure_of_lengths, AllocError, AllocatorState, BitString, MachineTable, Rational, RationalSeq,
};

/// Lengths drawn freely, then truncated at the first Kraft overflow.
fn kraft_lengths() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=12, 0..40).prop_map(|v| {
        let mut out = Vec::new();
        for n in v {
            out.push(n);
            if !kraft_holds_ref(&out) {
                out.pop();
            }
        }
        out
    })
}

fn increasing() -> impl Strategy<Value = RationalSeq> {
    prop::collection::vec((1i64..50, 2i64..50), 1..30).prop_map(|steps| {
        let mut seq = RationalSeq::default();
        let mut prev = Rational::zero();
        for (p, d) in steps {
            let frac = Rational::new((p % (d - 1) + 1).into(), d.into());
            prev = &prev + (Rational::one() - &prev) * frac;
            seq.push(prev.clone()).unwrap();
        }
        seq
    })
}

fn bits() -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 0..6).prop_map(BitString::from_bits)
}

fn table() -> impl Strategy<Value = MachineTable> {
    prop::collection::vec((prop::collection::vec(any::<bool>(), 1..7), bits()), 0..12).prop_map(|raw| {
        let mut entries: Vec<(BitString, BitString)> = Vec::new();
        for (p, y) in raw {
            let p = BitString::from_bits(p);
            if entries.iter().all(|(q, _)| !q.is_comparable(&p)) {
                entries.push((p, y));
            }
        }
        MachineTable::new(entries).unwrap()
    })
}

proptest! {
    #[test]
    fn allocator_agrees_with_oracle(lengths in kraft_lengths()) {
        let got = allocate_lengths(&lengths).unwrap();
        let mut rev = lengths.clone();
        rev.reverse();
        let mut want = kc_ref(&rev);
        want.reverse();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn invariants_hold_at_every_step(lengths in kraft_lengths()) {
        let mut st = AllocatorState::new();
        for (i, &n) in lengths.iter().enumerate() {
            st.allocate(n).unwrap();
            let rep = check_invariants(&st, Some(&lengths[i + 1..]));
            prop_assert!(rep.all_pass(), "{}", rep);
            prop_assert!(st.free().windows(2).all(|w| w[0].len() > w[1].len()));
        }
        prop_assert_eq!(st.mass_allocated(), &measure_of_lengths(&lengths));
    }

    #[test]
    fn overflow_is_rejected_without_side_effects(lengths in kraft_lengths(), extra in 0usize..12) {
        let mut all = lengths.clone();
        all.push(extra);
        prop_assume!(!kraft_holds_ref(&all));
        let mut st = AllocatorState::new();
        for &n in &lengths {
            st.allocate(n).unwrap();
        }
        let before = st.clone();
        let is_mass_error = matches!(st.allocate(extra), Err(AllocError::InsufficientMass { .. }));
        prop_assert!(is_mass_error);
        prop_assert_eq!(st, before);
    }

    #[test]
    fn decomposition_is_sandwiched(seq in increasing()) {
        let d = dyadic_decompose(&seq, seq.len()).unwrap();
        let two = Rational::from_integer(2.into());
        for i in 1..=seq.len() {
            let (a, r, prev) = (seq.term(i), d.partial(i).to_rational(), d.partial(i - 1).to_rational());
            prop_assert!((&a + &prev) / &two <= r && r <= a);
        }
    }

    #[test]
    fn interval_tests_are_valid(a in increasing(), b in increasing(), n in 0usize..6) {
        let depth = a.len().min(b.len());
        let t = build_test(&a, &b, n, depth).unwrap();
        prop_assert!(t.is_valid());
    }

    #[test]
    fn tables_survive_text_round_trip(t in table()) {
        prop_assert_eq!(parse_table(&write_table(&t)).unwrap(), t);
    }

    #[test]
    fn derived_tables_stay_prefix_free(ts in prop::collection::vec(table(), 0..5)) {
        let u = combine_universal(&ts);
        prop_assert!(u.is_prefix_free());
        prop_assert_eq!(u.len(), ts.iter().map(MachineTable::len).sum::<usize>());
        for t in &ts {
            prop_assert!(chaitin_table(t).is_prefix_free());
        }
    }

    #[test]
    fn omega_partials_bounded_by_one(t in table()) {
        let p = t.omega_partials();
        prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(p.last().is_none_or(|w| w.to_rational() <= Rational::one()));
        prop_assert!(is_prefix_free(t.programs()));
    }
}
