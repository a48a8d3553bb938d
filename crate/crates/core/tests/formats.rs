use proptest::prelude::*;
use synchro::{encode_binary, BinaryCodec, Dfa, Error, SetCoverInstance, Word};

fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (1usize..12, 1usize..4).prop_flat_map(|(n, k)| {
        proptest::collection::vec(proptest::collection::vec(0..n, n), k)
            .prop_map(move |rows| Dfa::from_rows(n, &rows).unwrap())
    })
}

fn set_cover_strategy() -> impl Strategy<Value = SetCoverInstance> {
    (1usize..10, 1usize..6).prop_flat_map(|(n, m)| {
        proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=n), m).prop_map(
            move |sets| {
                let mut subsets: Vec<Vec<usize>> =
                    sets.into_iter().map(|s| s.into_iter().collect()).collect();
                subsets.push((0..n).collect());
                SetCoverInstance::new(n, subsets).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn dfa_text_round_trips(d in dfa_strategy()) {
        let text = d.serialize();
        let back = Dfa::parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn set_cover_text_round_trips(inst in set_cover_strategy()) {
        let text = inst.serialize();
        let back = SetCoverInstance::parse(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn word_text_round_trips(letters in proptest::collection::vec(0usize..9, 0..30)) {
        let w = Word::from(letters.clone());
        let text = w.to_text();
        prop_assert_eq!(Word::parse(&text).unwrap(), w);
        let expected: Vec<String> = letters.iter().map(|x| (x + 1).to_string()).collect();
        prop_assert_eq!(text, expected.join(" "));
    }

    #[test]
    fn codec_text_round_trips(n in 1usize..5, m in 2usize..6) {
        let codec = BinaryCodec::new(n, m).unwrap();
        let text = codec.serialize();
        let back = BinaryCodec::parse(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back, codec);
    }
}

#[test]
fn identity_text_form() {
    let d = Dfa::identity(2, 2).unwrap();
    assert_eq!(d.serialize(), "DFA 2 2\n1 2\n1 2\n");
    assert_eq!(Dfa::parse("DFA 2 2\n1 2\n1 2\n").unwrap(), d);
}

#[test]
fn malformed_dfa_text_reports_a_line() {
    let err = Dfa::parse("DFA 2 1\n3 1\n").unwrap_err();
    assert!(err.to_string().contains("entry out of range"), "{err}");
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    for bad in [
        "",
        "DFA 2\n",
        "DFA 2 1\n1\n",
        "DFA 2 1\n1 2\n1 2\n",
        "DFA 2 1\n1 x\n",
        "NFA 1 1\n1\n",
    ] {
        assert!(
            matches!(Dfa::parse(bad), Err(Error::Parse { .. })),
            "{bad:?}"
        );
    }
}

#[test]
fn malformed_set_cover_text_reports_a_line() {
    let sc1 = "SC 3 2\n2 1 2\n2 2 3\n";
    let inst = SetCoverInstance::parse(sc1).unwrap();
    assert_eq!(inst.subsets(), &[vec![0, 1], vec![1, 2]]);
    assert!(matches!(
        SetCoverInstance::parse("SC 3 2\n2 1 4\n2 2 3\n"),
        Err(Error::Parse { line: 2, .. })
    ));
    assert!(matches!(
        SetCoverInstance::parse("SC 3 2\n3 1 2\n2 2 3\n"),
        Err(Error::Parse { line: 2, .. })
    ));
    assert!(SetCoverInstance::parse("SC 3 1\n2 1 2\n").is_err());
    assert!(SetCoverInstance::parse("SC 3 2\n2 1 2\n2 2 3\n2 1 3\n").is_err());
}

#[test]
fn codec_of_an_encoding_matches_its_sizes() {
    let d = synchro::gen_cerny(3).unwrap();
    let (b, codec) = encode_binary(&d).unwrap();
    let text = codec.serialize();
    assert!(text.starts_with("CODEC 1\nbase_states 3\nletters 2 padded 2\nbits 1\n"));
    assert!(text.contains(&format!("states {}\n", b.states())));
    assert_eq!(
        text.lines().filter(|l| l.starts_with("state ")).count(),
        b.states()
    );
    assert_eq!(text.lines().filter(|l| l.starts_with("block ")).count(), 2);
}
