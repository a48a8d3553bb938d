use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use synchro::{
    approx_rt_via_encoding, cover_from_word, decode_and_verify, encode_binary, encode_reset_word,
    exact_set_cover, gen_cerny, greedy_reset, greedy_set_cover, performance_ratio,
    reduce_to_automaton, sample_dfa, sample_set_cover, shortest_reset, Dfa, Method,
    SetCoverInstance, Word,
};

/// Reset threshold by forward search over subsets as bitmasks.
fn rt_oracle(d: &Dfa) -> Option<usize> {
    let n = d.states();
    let full = (1u32 << n) - 1;
    let image = |s: u32, x: usize| {
        (0..n)
            .filter(|&q| s >> q & 1 == 1)
            .fold(0u32, |a, q| a | 1 << d.step(q, x))
    };
    let mut dist = HashMap::from([(full, 0usize)]);
    let mut queue = VecDeque::from([full]);
    while let Some(s) = queue.pop_front() {
        if s.count_ones() == 1 {
            return Some(dist[&s]);
        }
        let ds = dist[&s];
        for x in 0..d.letters() {
            let t = image(s, x);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                e.insert(ds + 1);
                queue.push_back(t);
            }
        }
    }
    None
}

fn opt_oracle(inst: &SetCoverInstance) -> usize {
    let m = inst.subsets().len();
    (1u32..1 << m)
        .filter(|f| {
            let chosen: Vec<usize> = (0..m).filter(|i| f >> i & 1 == 1).collect();
            (0..inst.universe()).all(|e| chosen.iter().any(|&i| inst.subsets()[i].contains(&e)))
        })
        .map(|f| f.count_ones() as usize)
        .min()
        .unwrap()
}

fn sc1() -> SetCoverInstance {
    SetCoverInstance::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap()
}

fn word(letters: &[usize]) -> Word {
    letters.iter().map(|&x| x - 1).collect()
}

#[test]
fn cerny_thresholds() {
    for n in 2..=9 {
        let d = gen_cerny(n).unwrap();
        let r = shortest_reset(&d).unwrap().unwrap();
        assert_eq!(r.length, (n - 1) * (n - 1));
        assert_eq!(Some(r.length), rt_oracle(&d));
        assert_eq!(r.method, Method::Exact);
        assert!(d.is_reset_word(&r.word).unwrap());
    }
}

#[test]
fn greedy_words_reset_and_are_no_shorter_than_optimal() {
    for seed in 0..300 {
        let d = sample_dfa(2 + seed as usize % 14, 2, 40_000 + seed);
        match (greedy_reset(&d), rt_oracle(&d)) {
            (Some(g), Some(rt)) => {
                assert!(d.is_reset_word(&g.word).unwrap());
                assert_eq!(g.length, g.word.len());
                assert!(g.length >= rt);
                let exact = shortest_reset(&d).unwrap().unwrap();
                if rt > 0 {
                    assert!(performance_ratio(&g, &exact).unwrap() >= Ratio::from_integer(1));
                }
            }
            (None, None) => {}
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

#[test]
fn sc1_reduction() {
    let inst = sc1();
    let d = reduce_to_automaton(&inst);
    assert_eq!((d.states(), d.letters()), (4, 2));
    assert_eq!(shortest_reset(&d).unwrap().unwrap().length, 2);
    assert_eq!(exact_set_cover(&inst).unwrap().len(), 2);
    assert_eq!(greedy_set_cover(&inst).len(), 2);
    assert_eq!(cover_from_word(&inst, &word(&[1, 2])), Some(vec![0, 1]));
    assert_eq!(cover_from_word(&inst, &word(&[1])), None);
    assert_eq!(cover_from_word(&inst, &word(&[1, 1, 2])), Some(vec![0, 1]));
}

#[test]
fn reduction_threshold_equals_cover_size() {
    for i in 0..60u64 {
        let inst = sample_set_cover(1 + (i % 12) as usize, 1 + (i % 8) as usize, 0.25, 900 + i);
        let d = reduce_to_automaton(&inst);
        let opt = opt_oracle(&inst);
        let r = shortest_reset(&d).unwrap().unwrap();
        assert_eq!(r.length, opt, "instance {i}");
        assert_eq!(exact_set_cover(&inst).unwrap().len(), opt);
        let cover = cover_from_word(&inst, &r.word).unwrap();
        assert!(inst.is_cover(&cover));
        let greedy = greedy_set_cover(&inst);
        assert!(inst.is_cover(&greedy) && greedy.len() >= opt);
    }
}

#[test]
fn encoded_thresholds_are_sandwiched() {
    let cases = [
        gen_cerny(3).unwrap(),
        gen_cerny(4).unwrap(),
        reduce_to_automaton(&sc1()),
    ];
    for a in &cases {
        let (b, codec) = encode_binary(a).unwrap();
        let k = codec.bits();
        let ra = rt_oracle(a).unwrap();
        let rb = rt_oracle(&b).unwrap();
        assert!(ra * (k + 1) <= rb && rb <= (k + 1) * (ra + 1), "{ra} {rb}");

        let exact = shortest_reset(a).unwrap().unwrap();
        let bw = encode_reset_word(&codec, &exact.word).unwrap();
        assert_eq!(bw.len(), (k + 1) * (ra + 1));
        assert!(b.is_reset_word(&bw).unwrap());
        assert!(decode_and_verify(a, &codec, &bw).is_some());

        let est = approx_rt_via_encoding(a, shortest_reset).unwrap().unwrap();
        assert!(est.estimate >= ra && est.estimate <= ra + 1);
        let witness = est.witness.unwrap();
        assert!(a.is_reset_word(&witness).unwrap());
    }
    assert_eq!(
        encode_binary(&reduce_to_automaton(&sc1()))
            .unwrap()
            .0
            .states(),
        12
    );
}

#[test]
fn greedy_through_the_encoding_decodes_to_reset_words() {
    for i in 0..30u64 {
        let inst = sample_set_cover(3 + (i % 5) as usize, 2 + (i % 3) as usize, 0.4, 77 + i);
        let a = reduce_to_automaton(&inst);
        let est = approx_rt_via_encoding(&a, |b| Ok(greedy_reset(b)))
            .unwrap()
            .unwrap();
        let witness = est.witness.expect("decoded witness");
        assert!(a.is_reset_word(&witness).unwrap());
        assert!(witness.len() >= opt_oracle(&inst));
    }
}
