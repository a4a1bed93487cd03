use keyrecycle::attack::simulate_attack;
use keyrecycle::hashfam::HashFamily;
use keyrecycle::wcauth::{authenticate, decode_wire, encode_wire, verify, KeyStream, TaggedMessage, Verdict};
use keyrecycle::{Error, FieldElem};

#[test]
fn stream_of_messages_over_the_wire() {
    let fam = HashFamily::poly(8, 4).unwrap();
    let pads = [0x3a, 0x00, 0xff, 0x81, 0x42];
    let mut sender = KeyStream::new(&fam, 0x5b, pads).unwrap();
    let mut receiver = KeyStream::new(&fam, 0x5b, pads).unwrap();
    for x in [0u64, 1, 0xdead_beef, 0xffff_ffff, 7] {
        let y = authenticate(&fam, sender.next_key().unwrap(), x).unwrap();
        let wire = encode_wire(&fam, &y).unwrap();
        assert_eq!(wire.len(), 5);
        let got = decode_wire(&fam, &wire).unwrap();
        assert_eq!(verify(&fam, receiver.next_key().unwrap(), &got), Verdict::Accept(x));
    }
    assert_eq!(sender.consumed_bits(), 40);
    assert!(matches!(sender.next_key(), Err(Error::PadsExhausted(5))));
}

#[test]
fn replay_under_the_next_pad_fails() {
    let fam = HashFamily::toeplitz(16, 8).unwrap();
    let mut ks = KeyStream::new(&fam, 777, [5, 6]).unwrap();
    let first = ks.next_key().unwrap();
    let second = ks.next_key().unwrap();
    let y = authenticate(&fam, first, 0xabcd).unwrap();
    assert_eq!(verify(&fam, first, &y), Verdict::Accept(0xabcd));
    assert_eq!(verify(&fam, second, &y), Verdict::Reject);
}

#[test]
fn forger_learns_nothing_useful_from_one_message() {
    let fam = HashFamily::mul(3).unwrap();
    let mut successes = 0;
    for k1 in 0..fam.key_count() {
        for pad in 0..fam.tag_count() {
            if simulate_attack(&fam, k1, &[pad], 1).unwrap().succeeded() {
                successes += 1;
            }
        }
    }
    assert_eq!(successes, fam.tag_count());
}

#[test]
fn tag_with_wrong_width_is_rejected_on_decode() {
    let fam = HashFamily::mul(4).unwrap();
    assert!(decode_wire(&fam, &[0x01, 0x10]).is_err());
    let y = TaggedMessage::new(3, FieldElem::from_raw(9));
    assert_eq!(decode_wire(&fam, &encode_wire(&fam, &y).unwrap()).unwrap(), y);
}
