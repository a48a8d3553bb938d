//! Encoding of an automaton over `m` letters into a 2-letter automaton, and decoding
//! of binary reset words back into words over the original alphabet.
//!
//! Letters are padded with identity letters to `m' = 2^k`. A state of the encoded
//! automaton is a pair `(q, w)` of an original state and a buffer of at most `k` bits.
//! Bit `x` appends to a short buffer; at a full buffer, bit `1` applies the letter
//! numbered by the buffer and empties it, bit `0` does nothing. Internally bit 0 is
//! letter 0 and bit 1 is letter 1.
//!
//! Codec text format, all indices 1-based:
//!
//! ```text
//! CODEC 1
//! base_states <n>
//! letters <m> padded <m'>
//! bits <k>
//! block <bits> -> letter <i>     (m' lines, in block order)
//! states <count>
//! state <id> = <q> <bits>        (`-` for the empty buffer)
//! ```

use std::fmt::Write as _;

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::reset::ResetResult;

/// Correspondence between the encoded automaton and the original one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCodec {
    base_states: usize,
    letters: usize,
    padded: usize,
    bits: usize,
}

impl BinaryCodec {
    pub fn new(base_states: usize, letters: usize) -> Result<Self> {
        if letters < 2 {
            return Err(Error::InvalidInput(format!(
                "binary encoding needs at least 2 letters, got {letters}"
            )));
        }
        if base_states == 0 {
            return Err(Error::InvalidInput("automaton has no states".into()));
        }
        let padded = letters.next_power_of_two();
        let bits = padded.trailing_zeros() as usize;
        let codec = BinaryCodec {
            base_states,
            letters,
            padded,
            bits,
        };
        if base_states
            .checked_mul(codec.buffers())
            .is_none_or(|s| s > u32::MAX as usize)
        {
            return Err(Error::Capacity("encoded automaton is too large".into()));
        }
        Ok(codec)
    }

    pub fn base_states(&self) -> usize {
        self.base_states
    }

    /// Letters of the original automaton.
    pub fn letters(&self) -> usize {
        self.letters
    }

    /// Letter count after padding, a power of two.
    pub fn padded_letters(&self) -> usize {
        self.padded
    }

    /// Bits per block.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Buffers per original state: `2^(k+1) - 1`.
    pub fn buffers(&self) -> usize {
        (1 << (self.bits + 1)) - 1
    }

    pub fn encoded_states(&self) -> usize {
        self.base_states * self.buffers()
    }

    /// Letter (0-based, possibly padding) named by a full block given as a number.
    pub fn letter_of_block(&self, value: usize) -> usize {
        debug_assert!(value < self.padded);
        value
    }

    pub fn is_padding(&self, letter: usize) -> bool {
        letter >= self.letters
    }

    /// Id of `(q, w)` where `w` is the buffer of `len` bits reading `value` in binary.
    pub fn state_id(&self, q: usize, len: usize, value: usize) -> usize {
        debug_assert!(len <= self.bits && value < 1 << len);
        q * self.buffers() + (1 << len) - 1 + value
    }

    /// Inverse of [`BinaryCodec::state_id`]: `(q, len, value)`.
    pub fn state_of(&self, id: usize) -> (usize, usize, usize) {
        let (q, buf) = (id / self.buffers(), id % self.buffers());
        let len = (usize::BITS - 1 - (buf + 1).leading_zeros()) as usize;
        (q, len, buf + 1 - (1 << len))
    }

    fn block_text(&self, len: usize, value: usize) -> String {
        if len == 0 {
            return "-".into();
        }
        (0..len)
            .rev()
            .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "CODEC 1");
        let _ = writeln!(out, "base_states {}", self.base_states);
        let _ = writeln!(out, "letters {} padded {}", self.letters, self.padded);
        let _ = writeln!(out, "bits {}", self.bits);
        for v in 0..self.padded {
            let _ = writeln!(
                out,
                "block {} -> letter {}",
                self.block_text(self.bits, v),
                self.letter_of_block(v) + 1
            );
        }
        let _ = writeln!(out, "states {}", self.encoded_states());
        for id in 0..self.encoded_states() {
            let (q, len, value) = self.state_of(id);
            let _ = writeln!(
                out,
                "state {} = {} {}",
                id + 1,
                q + 1,
                self.block_text(len, value)
            );
        }
        out
    }

    /// Parses a codec file; the tables must be exactly those implied by the header.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let mut expect = |want: &str| -> Result<(usize, Vec<String>)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing `{want}` line")))?;
            let fields: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
            if fields.first().map(String::as_str) != Some(want) {
                return Err(Error::parse(no, format!("expected `{want}`")));
            }
            Ok((no, fields))
        };
        let number = |no: usize, s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(no, format!("not an integer: `{s}`")))
        };
        let (no, f) = expect("CODEC")?;
        if f.len() != 2 || f[1] != "1" {
            return Err(Error::parse(no, "unsupported codec version"));
        }
        let (no, f) = expect("base_states")?;
        let n = number(no, f.get(1).map_or("", String::as_str))?;
        let (no, f) = expect("letters")?;
        if f.len() != 4 || f[2] != "padded" {
            return Err(Error::parse(no, "expected `letters <m> padded <m'>`"));
        }
        let m = number(no, &f[1])?;
        let padded = number(no, &f[3])?;
        let (no, f) = expect("bits")?;
        let bits = number(no, f.get(1).map_or("", String::as_str))?;
        let codec = BinaryCodec::new(n, m).map_err(|e| Error::parse(2, e.to_string()))?;
        if codec.padded != padded || codec.bits != bits {
            return Err(Error::parse(
                no,
                "bit width does not match the letter count",
            ));
        }
        let mut rest = text
            .lines()
            .map(str::trim_end)
            .skip(4)
            .enumerate()
            .map(|(i, l)| (i + 5, l));
        let reference = codec.serialize();
        for (want, (no, got)) in reference.lines().skip(4).zip(&mut rest) {
            if want.split_whitespace().ne(got.split_whitespace()) {
                return Err(Error::parse(no, format!("expected `{want}`")));
            }
        }
        let body = reference.lines().count() - 4;
        if text.lines().skip(4).count() < body {
            return Err(Error::parse(body + 5, "codec table is truncated"));
        }
        if let Some((no, _)) = rest.find(|(_, l)| !l.is_empty()) {
            return Err(Error::parse(no, "unexpected trailing content"));
        }
        Ok(codec)
    }
}

/// The encoded 2-letter automaton and its codec.
pub fn encode_binary(dfa: &Dfa) -> Result<(Dfa, BinaryCodec)> {
    let codec = BinaryCodec::new(dfa.states(), dfa.letters())?;
    let total = codec.encoded_states();
    let k = codec.bits;
    let mut delta = vec![0u32; 2 * total];
    for id in 0..total {
        let (q, len, value) = codec.state_of(id);
        let (zero, one) = if len < k {
            (
                codec.state_id(q, len + 1, value << 1),
                codec.state_id(q, len + 1, value << 1 | 1),
            )
        } else {
            let x = codec.letter_of_block(value);
            let target = if codec.is_padding(x) {
                q
            } else {
                dfa.step(q, x)
            };
            (id, codec.state_id(target, 0, 0))
        };
        delta[id] = zero as u32;
        delta[total + id] = one as u32;
    }
    Ok((Dfa::from_table_unchecked(total, 2, delta), codec))
}

/// The flush prefix `0^k 1`: from any buffer it fills up, idles, then empties.
pub fn flush_word(codec: &BinaryCodec) -> Word {
    let mut w: Word = std::iter::repeat_n(0, codec.bits).collect();
    w.push(1);
    w
}

/// `0^k 1` followed by `block(x) 1` for every letter `x` of `u`; a reset word of the
/// encoding of length `(k+1)(|u|+1)` when `u` resets the original automaton.
pub fn encode_reset_word(codec: &BinaryCodec, u: &Word) -> Result<Word> {
    let mut w = flush_word(codec);
    for x in u.iter() {
        if x >= codec.letters {
            return Err(Error::LetterOutOfRange {
                letter: x,
                k: codec.letters,
            });
        }
        for i in (0..codec.bits).rev() {
            w.push(x >> i & 1);
        }
        w.push(1);
    }
    Ok(w)
}

/// Letters emitted by running `bits` from the empty buffer, padding letters dropped,
/// plus whether a partial block remained at the end.
fn simulate(codec: &BinaryCodec, bits: impl Iterator<Item = usize>) -> (Word, bool) {
    let mut out = Word::empty();
    let (mut len, mut value) = (0usize, 0usize);
    for b in bits {
        if len < codec.bits {
            len += 1;
            value = value << 1 | b;
        } else if b == 1 {
            let x = codec.letter_of_block(value);
            if !codec.is_padding(x) {
                out.push(x);
            }
            len = 0;
            value = 0;
        }
    }
    (out, len > 0)
}

/// Decodes a binary word read as flush prefix and blocks. A leading `0^k 1` or
/// `1^(k+1)` is stripped, zeros at a full buffer are skipped, and a trailing partial
/// block is dropped. Absent when nothing but a dangling partial block is left.
pub fn decode_word(codec: &BinaryCodec, bw: &Word) -> Option<Word> {
    if bw.iter().any(|b| b > 1) {
        return None;
    }
    let k = codec.bits;
    let bits: Vec<usize> = bw.iter().collect();
    let zero_flush = bits.len() > k && bits[..k].iter().all(|&b| b == 0) && bits[k] == 1;
    let one_flush = bits.len() > k && bits[..=k].iter().all(|&b| b == 1);
    let body = if zero_flush || one_flush {
        &bits[k + 1..]
    } else {
        &bits[..]
    };
    let (word, dangling) = simulate(codec, body.iter().copied());
    if dangling && word.is_empty() {
        return None;
    }
    Some(word)
}

/// Letters applied to the original states when `bw` runs from the empty buffer. If
/// `bw` resets the encoding, the result resets the original automaton.
pub fn decode_blocks(codec: &BinaryCodec, bw: &Word) -> Option<Word> {
    if bw.iter().any(|b| b > 1) {
        return None;
    }
    Some(simulate(codec, bw.iter()).0)
}

/// The first of [`decode_word`] and [`decode_blocks`] that resets `dfa`.
pub fn decode_and_verify(dfa: &Dfa, codec: &BinaryCodec, bw: &Word) -> Option<Word> {
    if dfa.states() != codec.base_states || dfa.letters() != codec.letters {
        return None;
    }
    [decode_word(codec, bw), decode_blocks(codec, bw)]
        .into_iter()
        .flatten()
        .find(|u| dfa.is_reset_word(u).unwrap_or(false))
}

/// Reset-threshold estimate obtained through the binary encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedEstimate {
    /// `⌈f2 / (k+1)⌉` for the estimator's length `f2` on the encoding.
    pub estimate: usize,
    pub binary_length: usize,
    pub block_width: usize,
    /// A verified reset word of the original automaton decoded from the binary word.
    pub witness: Option<Word>,
}

/// Runs `estimator` on the encoding of `dfa`. `None` when the estimator reports the
/// encoding as not synchronizing.
pub fn approx_rt_via_encoding<F>(dfa: &Dfa, estimator: F) -> Result<Option<EncodedEstimate>>
where
    F: FnOnce(&Dfa) -> Result<Option<ResetResult>>,
{
    let (encoded, codec) = encode_binary(dfa)?;
    let Some(r) = estimator(&encoded)? else {
        return Ok(None);
    };
    let width = codec.bits + 1;
    Ok(Some(EncodedEstimate {
        estimate: r.length.div_ceil(width),
        binary_length: r.length,
        block_width: width,
        witness: decode_and_verify(dfa, &codec, &r.word),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures::*;
    use crate::reset::{greedy_reset, shortest_reset};
    use crate::setcover::{reduce_to_automaton, tests::sc1};

    fn rt(d: &Dfa) -> Option<usize> {
        shortest_reset(d).unwrap().map(|r| r.length)
    }

    fn bits(s: &str) -> Word {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| (c == '1') as usize)
            .collect()
    }

    /// Transition of the encoding computed from the definition on labelled states.
    fn reference_step(d: &Dfa, k: usize, q: usize, buf: &str, bit: char) -> (usize, String) {
        if buf.len() < k {
            return (q, format!("{buf}{bit}"));
        }
        if bit == '0' {
            return (q, buf.to_owned());
        }
        let x = usize::from_str_radix(buf, 2).unwrap();
        let q2 = if x < d.letters() { d.step(q, x) } else { q };
        (q2, String::new())
    }

    #[test]
    fn transitions_follow_the_definition() {
        for (d, seed) in [
            (c3(), 0),
            (crate::random::sample_dfa(3, 3, 7), 1),
            (crate::random::sample_dfa(2, 5, 8), 2),
        ] {
            let (b, codec) = encode_binary(&d).unwrap();
            let k = codec.bits();
            assert_eq!(b.states(), d.states() * ((1 << (k + 1)) - 1), "case {seed}");
            assert!(b.states() <= 2 * codec.padded_letters() * d.states());
            for id in 0..b.states() {
                let (q, len, value) = codec.state_of(id);
                assert_eq!(codec.state_id(q, len, value), id);
                let buf = if len == 0 {
                    String::new()
                } else {
                    format!("{value:0len$b}")
                };
                for (letter, bit) in [(0, '0'), (1, '1')] {
                    let (q2, buf2) = reference_step(&d, k, q, &buf, bit);
                    let v2 = if buf2.is_empty() {
                        0
                    } else {
                        usize::from_str_radix(&buf2, 2).unwrap()
                    };
                    assert_eq!(b.step(id, letter), codec.state_id(q2, buf2.len(), v2));
                }
            }
        }
    }

    #[test]
    fn sizes_and_errors() {
        let (b, codec) = encode_binary(&c3()).unwrap();
        assert_eq!((codec.bits(), b.states(), b.letters()), (1, 9, 2));
        let three = crate::random::sample_dfa(4, 3, 0);
        let (b, codec) = encode_binary(&three).unwrap();
        assert_eq!(
            (codec.bits(), codec.padded_letters(), b.states()),
            (2, 4, 28)
        );
        assert!(codec.is_padding(3));
        let single = Dfa::identity(3, 1).unwrap();
        assert!(matches!(
            encode_binary(&single),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn all_ones_prefix_does_not_flush_full_buffers() {
        let (b, codec) = encode_binary(&c3()).unwrap();
        let ones = bits("11");
        let from_full = b.apply(codec.state_id(0, 1, 0), &ones).unwrap();
        let from_empty = b.apply(codec.state_id(0, 0, 0), &ones).unwrap();
        assert_eq!(codec.state_of(from_full).1, 1);
        assert_eq!(codec.state_of(from_empty).1, 0);
        let flush = flush_word(&codec);
        for id in 0..b.states() {
            assert_eq!(codec.state_of(b.apply(id, &flush).unwrap()).1, 0);
        }
    }

    #[test]
    fn sandwich_bounds() {
        let mut cases: Vec<Dfa> = vec![c3(), reduce_to_automaton(&sc1())];
        for seed in 0..40u64 {
            let n = 2 + seed as usize % 3;
            let m = if seed % 2 == 0 { 2 } else { 4 };
            cases.push(crate::random::sample_dfa(n, m, 900 + seed));
        }
        let mut checked = 0;
        for d in &cases {
            let Some(ra) = rt(d) else { continue };
            let (b, codec) = encode_binary(d).unwrap();
            let rb = rt(&b).expect("encoding of a synchronizing automaton synchronizes");
            let w = codec.bits() + 1;
            assert!(
                ra * w <= rb && rb <= w * (ra + 1),
                "rt(A)={ra} rt(B)={rb} width {w}"
            );
            checked += 1;
        }
        assert!(checked >= 20);
    }

    #[test]
    fn non_synchronizing_stays_so() {
        let (b, _) = encode_binary(&identity2()).unwrap();
        assert_eq!(rt(&b), None);
    }

    #[test]
    fn round_trip_of_reset_words() {
        for seed in 0..60u64 {
            let m = 2 + seed as usize % 4;
            let d = crate::random::sample_dfa(5, m, 300 + seed);
            let Some(r) = greedy_reset(&d) else { continue };
            let (b, codec) = encode_binary(&d).unwrap();
            let bw = encode_reset_word(&codec, &r.word).unwrap();
            assert_eq!(bw.len(), (codec.bits() + 1) * (r.length + 1));
            assert!(b.is_reset_word(&bw).unwrap());
            assert_eq!(decode_word(&codec, &bw), Some(r.word.clone()));
            assert_eq!(decode_and_verify(&d, &codec, &bw), Some(r.word));
        }
    }

    #[test]
    fn decoding_examples() {
        let d = crate::random::sample_dfa(3, 4, 5);
        let (_, codec) = encode_binary(&d).unwrap();
        assert_eq!(
            decode_word(&codec, &bits("10 1")),
            Some(Word::from(vec![2]))
        );
        assert_eq!(
            decode_word(&codec, &bits("111 01 1 11 1")),
            Some(Word::from(vec![1, 3]))
        );
        assert_eq!(
            decode_word(&codec, &bits("001 10 000 1 0")),
            Some(Word::from(vec![2]))
        );
        assert_eq!(decode_word(&codec, &bits("001 1")), None);
        assert_eq!(
            decode_blocks(&codec, &bits("001 10 1")),
            Some(Word::from(vec![0, 2]))
        );
        let three = crate::random::sample_dfa(3, 3, 5);
        let (_, codec) = encode_binary(&three).unwrap();
        assert_eq!(
            decode_word(&codec, &bits("11 1 01 1")),
            Some(Word::from(vec![1]))
        );
    }

    #[test]
    fn greedy_words_on_encodings_decode_to_reset_words() {
        let mut decoded = 0;
        for seed in 0..30u64 {
            let inst = crate::random::sample_set_cover(
                4 + seed as usize % 4,
                2 + seed as usize % 3,
                0.4,
                seed,
            );
            let a = reduce_to_automaton(&inst);
            let (b, codec) = encode_binary(&a).unwrap();
            let g = greedy_reset(&b).expect("encoding synchronizes");
            let u = decode_and_verify(&a, &codec, &g.word).expect("decoded word resets A");
            assert!(a.is_reset_word(&u).unwrap());
            decoded += 1;
        }
        assert_eq!(decoded, 30);
    }

    #[test]
    fn estimates_through_the_encoding() {
        let ra = rt(&c3()).unwrap();
        let e = approx_rt_via_encoding(&c3(), shortest_reset)
            .unwrap()
            .unwrap();
        assert!(ra <= e.estimate && e.estimate <= ra + 1);
        assert!(c3().is_reset_word(e.witness.as_ref().unwrap()).unwrap());
        let e = approx_rt_via_encoding(&reduce_to_automaton(&sc1()), shortest_reset)
            .unwrap()
            .unwrap();
        assert!(e.estimate >= 2);
        let g = approx_rt_via_encoding(&c3(), |b| Ok(greedy_reset(b)))
            .unwrap()
            .unwrap();
        assert!(g.witness.is_some());
        assert_eq!(
            approx_rt_via_encoding(&identity2(), |b| Ok(greedy_reset(b))).unwrap(),
            None
        );
    }

    #[test]
    fn codec_text_round_trip() {
        let (_, codec) = encode_binary(&crate::random::sample_dfa(2, 3, 1)).unwrap();
        let text = codec.serialize();
        assert!(text.starts_with(
            "CODEC 1\nbase_states 2\nletters 3 padded 4\nbits 2\nblock 00 -> letter 1\n"
        ));
        assert!(text.contains("state 1 = 1 -\nstate 2 = 1 0\n"));
        assert!(text.contains("state 14 = 2 11\n"));
        assert_eq!(BinaryCodec::parse(&text).unwrap(), codec);
        let broken = text.replace("state 2 = 1 0", "state 2 = 1 1");
        assert!(matches!(
            BinaryCodec::parse(&broken),
            Err(Error::Parse { line: 11, .. })
        ));
        let truncated: String = text.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(BinaryCodec::parse(&truncated).is_err());
    }
}
