use fibrep::automata::format::{from_text, to_text};
use fibrep::automata::{combine, encode_tracks, equivalent, pad_normalize, BoolOp, DigitAlphabet, Dfa};
use fibrep::fib::{build_normalizer, eval_rep, zeckendorf_encode, Anchor, ConverterSpec};
use proptest::prelude::*;

fn arb_dfa() -> impl Strategy<Value = Dfa> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n as u32, 2 * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(delta, acc)| Dfa::new(DigitAlphabet::binary(), delta, acc, 0).unwrap())
    })
}

fn words(max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..2 {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

proptest! {
    #[test]
    fn minimize_keeps_language_and_is_idempotent(d in arb_dfa()) {
        let m = d.minimize();
        prop_assert!(m.num_states() <= d.num_states());
        prop_assert_eq!(m.minimize(), m.clone());
        for w in words(7) {
            prop_assert_eq!(d.accepts(&w), m.accepts(&w));
        }
    }

    #[test]
    fn boolean_operations_follow_de_morgan(a in arb_dfa(), b in arb_dfa()) {
        let or = combine(BoolOp::Or, &a, &b).unwrap();
        let and_c = combine(BoolOp::And, &a.complement(), &b.complement()).unwrap();
        prop_assert_eq!(or.minimize(), and_c.complement().minimize());
        prop_assert_eq!(a.complement().complement().minimize(), a.minimize());
        let x = combine(BoolOp::Xor, &a, &b).unwrap();
        for w in words(6) {
            prop_assert_eq!(x.accepts(&w), a.accepts(&w) != b.accepts(&w));
        }
    }

    #[test]
    fn pad_normalize_closes_under_leading_zeros(d in arb_dfa()) {
        let p = pad_normalize(&d);
        prop_assert_eq!(pad_normalize(&p), p.clone());
        for w in words(6) {
            let mut z = vec![0];
            z.extend_from_slice(&w);
            prop_assert_eq!(p.accepts(&w), p.accepts(&z));
            if d.accepts(&w) {
                prop_assert!(p.accepts(&w));
            }
        }
        prop_assert!(equivalent(&d, &p).unwrap());
    }

    #[test]
    fn text_format_round_trips(d in arb_dfa()) {
        let back = from_text(&to_text(&d)).unwrap();
        prop_assert_eq!(back.minimize(), d.minimize());
    }

    #[test]
    fn zeckendorf_encoding_round_trips(n in 0u64..1_000_000_000_000) {
        let z = zeckendorf_encode(n);
        prop_assert_eq!(eval_rep(z.digits(), Anchor::F2), n as i64);
        prop_assert!(!z.digits().windows(2).any(|w| w == [1, 1]));
    }

    #[test]
    fn signed_normalizer_on_long_pairs(
        x in proptest::collection::vec(-1i8..=1, 0..24),
        sign in prop_oneof![Just(1i8), Just(-1i8)],
        f1 in any::<bool>(),
        offset in -1i64..=1,
    ) {
        let anchor = if f1 { Anchor::F1 } else { Anchor::F2 };
        let spec = ConverterSpec::signed().with_sign(sign).with_anchor(anchor);
        let n = build_normalizer(&spec, offset).unwrap();
        let target = (eval_rep(&x, anchor) - offset) * sign as i64;
        // the matching Zeckendorf string, when there is one, is accepted
        if target >= 0 {
            let y = zeckendorf_encode(target as u64);
            let w = encode_tracks(n.alphabet(), &[&x, y.digits()]).unwrap();
            prop_assert!(n.accepts(&w));
            // and a different value is rejected
            let y2 = zeckendorf_encode(target as u64 + 1);
            let w2 = encode_tracks(n.alphabet(), &[&x, y2.digits()]).unwrap();
            prop_assert!(!n.accepts(&w2));
        }
    }
}
