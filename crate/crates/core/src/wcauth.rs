//! The Wegman-Carter protocol: tag t = h_{k1}(x) xor k2 where k1 selects the
//! hash function and is recycled, while k2 is a one-time pad consumed per
//! message.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::hashfam::HashFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuthKey {
    /// Index into the family's key space; reused across rounds.
    pub k1: u64,
    /// One-time pad XORed onto the tag.
    pub k2: FieldElem,
}

impl AuthKey {
    pub fn new(fam: &HashFamily, k1: u64, k2: u64) -> Result<Self> {
        fam.check_key(k1)?;
        Ok(AuthKey { k1, k2: fam.field().elem(k2)? })
    }
}

/// A message together with its (encrypted) tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TaggedMessage {
    pub x: u64,
    pub t: FieldElem,
}

impl TaggedMessage {
    pub fn new(x: u64, t: FieldElem) -> Self {
        TaggedMessage { x, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Accept(u64),
    Reject,
}

impl Verdict {
    pub fn accepted(self) -> Option<u64> {
        match self {
            Verdict::Accept(x) => Some(x),
            Verdict::Reject => None,
        }
    }
}

pub fn authenticate(fam: &HashFamily, key: AuthKey, x: u64) -> Result<TaggedMessage> {
    let h = fam.eval(key.k1, x)?;
    Ok(TaggedMessage { x, t: h ^ key.k2 })
}

/// Accepts iff the tag matches. The hash is always evaluated before the
/// comparison, even for malformed messages.
pub fn verify(fam: &HashFamily, key: AuthKey, y: &TaggedMessage) -> Verdict {
    let in_range = y.x < fam.message_count() && key.k1 < fam.key_count();
    let expected = if in_range {
        fam.eval_raw(key.k1, y.x) ^ key.k2
    } else {
        fam.eval_raw(0, 0) ^ key.k2
    };
    if in_range && expected == y.t {
        Verdict::Accept(y.x)
    } else {
        Verdict::Reject
    }
}

/// Standard authentication: tag is h_k(x) with no pad.
pub fn authenticate_standard(fam: &HashFamily, k: u64, x: u64) -> Result<TaggedMessage> {
    Ok(TaggedMessage { x, t: fam.eval(k, x)? })
}

pub fn verify_standard(fam: &HashFamily, k: u64, y: &TaggedMessage) -> Verdict {
    verify(fam, AuthKey { k1: k, k2: FieldElem::ZERO }, y)
}

/// A recycled hash key plus a supply of pads, each handed out once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyStream {
    k1: u64,
    pads: Vec<FieldElem>,
    cursor: usize,
    tag_bits: u32,
}

impl KeyStream {
    pub fn new(fam: &HashFamily, k1: u64, pads: impl IntoIterator<Item = u64>) -> Result<Self> {
        fam.check_key(k1)?;
        let pads = pads
            .into_iter()
            .map(|p| fam.field().elem(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(KeyStream { k1, pads, cursor: 0, tag_bits: fam.tag_bits() })
    }

    pub fn k1(&self) -> u64 {
        self.k1
    }

    pub fn remaining(&self) -> usize {
        self.pads.len() - self.cursor
    }

    pub fn rounds_consumed(&self) -> usize {
        self.cursor
    }

    /// Pad bits consumed so far; the recycled k1 is not counted.
    pub fn consumed_bits(&self) -> u64 {
        self.cursor as u64 * self.tag_bits as u64
    }

    pub fn next_key(&mut self) -> Result<AuthKey> {
        let pad = *self.pads.get(self.cursor).ok_or(Error::PadsExhausted(self.pads.len()))?;
        self.cursor += 1;
        Ok(AuthKey { k1: self.k1, k2: pad })
    }
}

pub fn stream_next(ks: &mut KeyStream) -> Result<AuthKey> {
    ks.next_key()
}

fn byte_len(bits: u32) -> usize {
    bits.div_ceil(8) as usize
}

/// Wire form: the message index big-endian in ceil(message_bits / 8) bytes,
/// then the tag big-endian in ceil(m / 8) bytes.
pub fn encode_wire(fam: &HashFamily, y: &TaggedMessage) -> Result<Vec<u8>> {
    fam.check_message(y.x)?;
    let mut out = Vec::new();
    let xb = y.x.to_be_bytes();
    out.extend_from_slice(&xb[8 - byte_len(fam.message_bits())..]);
    let tb = (y.t.value() as u64).to_be_bytes();
    out.extend_from_slice(&tb[8 - byte_len(fam.tag_bits())..]);
    Ok(out)
}

pub fn decode_wire(fam: &HashFamily, bytes: &[u8]) -> Result<TaggedMessage> {
    let xl = byte_len(fam.message_bits());
    let tl = byte_len(fam.tag_bits());
    if bytes.len() != xl + tl {
        return Err(Error::InvalidArgument(format!(
            "wire form must be {} bytes, got {}",
            xl + tl,
            bytes.len()
        )));
    }
    let be = |b: &[u8]| b.iter().fold(0u64, |acc, &v| (acc << 8) | v as u64);
    let x = be(&bytes[..xl]);
    fam.check_message(x)?;
    let t = fam.field().elem(be(&bytes[xl..]))?;
    Ok(TaggedMessage { x, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul2() -> HashFamily {
        HashFamily::mul(2).unwrap()
    }

    #[test]
    fn authenticate_example() {
        let fam = mul2();
        let key = AuthKey::new(&fam, 0b11, 0b01).unwrap();
        let y = authenticate(&fam, key, 0b10).unwrap();
        assert_eq!(y, TaggedMessage::new(0b10, FieldElem::from_raw(0b00)));
    }

    #[test]
    fn zero_pad_is_standard_tag() {
        let fam = HashFamily::poly(3, 2).unwrap();
        for k in 0..fam.key_count() {
            for x in 0..fam.message_count() {
                let key = AuthKey { k1: k, k2: FieldElem::ZERO };
                assert_eq!(authenticate(&fam, key, x).unwrap(), authenticate_standard(&fam, k, x).unwrap());
            }
        }
    }

    #[test]
    fn verify_examples() {
        let fam = mul2();
        let key = AuthKey::new(&fam, 0b11, 0b01).unwrap();
        assert_eq!(verify(&fam, key, &TaggedMessage::new(0b10, FieldElem::from_raw(0b01))), Verdict::Reject);
        assert_eq!(verify(&fam, key, &TaggedMessage::new(0b10, FieldElem::ZERO)), Verdict::Accept(0b10));
        assert_eq!(verify(&fam, key, &TaggedMessage::new(9, FieldElem::ZERO)), Verdict::Reject);
    }

    #[test]
    fn bit_flips_reject() {
        let fam = HashFamily::toeplitz(4, 3).unwrap();
        for k1 in 0..fam.key_count() {
            for x in 0..fam.message_count() {
                let key = AuthKey { k1, k2: FieldElem::from_raw(5) };
                let y = authenticate(&fam, key, x).unwrap();
                for bit in 0..3 {
                    let bad = TaggedMessage::new(x, y.t ^ FieldElem::from_raw(1 << bit));
                    assert_eq!(verify(&fam, key, &bad), Verdict::Reject);
                }
            }
        }
    }

    #[test]
    fn invalid_message_is_domain_error() {
        let fam = mul2();
        let key = AuthKey::new(&fam, 1, 0).unwrap();
        assert!(matches!(authenticate(&fam, key, 4), Err(Error::MessageOutOfRange { .. })));
        assert!(AuthKey::new(&fam, 4, 0).is_err());
        assert!(AuthKey::new(&fam, 0, 4).is_err());
    }

    #[test]
    fn key_stream_accounting() {
        let fam = mul2();
        let mut ks = KeyStream::new(&fam, 2, [1, 2, 3]).unwrap();
        let keys: Vec<_> = (0..3).map(|_| stream_next(&mut ks).unwrap()).collect();
        assert!(keys.iter().all(|k| k.k1 == 2));
        assert_eq!(keys[0].k2.value(), 1);
        assert_ne!(keys[0], keys[1]);
        assert_ne!(keys[1], keys[2]);
        assert_eq!(ks.consumed_bits(), 3 * 2);
        assert_eq!(stream_next(&mut ks), Err(Error::PadsExhausted(3)));
        assert_eq!(ks.rounds_consumed(), 3);
    }

    #[test]
    fn tag_uniform_given_k1() {
        for fam in [mul2(), HashFamily::toeplitz(3, 2).unwrap(), HashFamily::poly(2, 2).unwrap()] {
            let t = fam.tag_count();
            for x in 0..fam.message_count() {
                let mut total = vec![0u64; t as usize];
                for k1 in 0..fam.key_count() {
                    let mut given = vec![0u64; t as usize];
                    for k2 in 0..t {
                        let y = authenticate(&fam, AuthKey { k1, k2: FieldElem::from_raw(k2 as u32) }, x).unwrap();
                        given[y.t.value() as usize] += 1;
                        total[y.t.value() as usize] += 1;
                    }
                    assert!(given.iter().all(|&c| c == 1));
                }
                assert!(total.iter().all(|&c| c == fam.key_count()));
            }
        }
    }

    #[test]
    fn substitution_ceiling() {
        // Pr[(x', t') accepted | tag of x was t] <= measured AXU2 epsilon.
        for fam in [mul2(), HashFamily::poly(2, 2).unwrap(), HashFamily::toeplitz(3, 2).unwrap()] {
            let eps = crate::hashfam::measure_axu2(&fam).unwrap().epsilon;
            let t = fam.tag_count();
            let n = fam.message_count();
            for x in 0..n {
                for tag in 0..t {
                    let mut given = Vec::new();
                    for k1 in 0..fam.key_count() {
                        for k2 in 0..t {
                            let key = AuthKey { k1, k2: FieldElem::from_raw(k2 as u32) };
                            if authenticate(&fam, key, x).unwrap().t.value() as u64 == tag {
                                given.push(key);
                            }
                        }
                    }
                    for xp in (0..n).filter(|&xp| xp != x) {
                        for tp in 0..t {
                            let y = TaggedMessage::new(xp, FieldElem::from_raw(tp as u32));
                            let acc = given.iter().filter(|k| verify(&fam, **k, &y) != Verdict::Reject).count();
                            let p = crate::ratio::ratio(acc as u128, given.len() as u128);
                            assert!(p <= eps);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wire_layout() {
        let fam = HashFamily::toeplitz(12, 3).unwrap();
        let y = TaggedMessage::new(0xABC, FieldElem::from_raw(5));
        assert_eq!(encode_wire(&fam, &y).unwrap(), vec![0x0A, 0xBC, 0x05]);
        assert!(decode_wire(&fam, &[0x0A, 0xBC]).is_err());
        assert!(decode_wire(&fam, &[0x0A, 0xBC, 0x08]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(m in 1u32..=8, k1 in any::<u64>(), k2 in any::<u32>(), x in any::<u64>()) {
            let fam = HashFamily::mul(m).unwrap();
            let key = AuthKey { k1: k1 % fam.key_count(), k2: FieldElem::from_raw(k2 & fam.field().mask()) };
            let x = x % fam.message_count();
            let y = authenticate(&fam, key, x).unwrap();
            prop_assert_eq!(verify(&fam, key, &y), Verdict::Accept(x));
            let wire = encode_wire(&fam, &y).unwrap();
            prop_assert_eq!(decode_wire(&fam, &wire).unwrap(), y);
        }
    }
}
