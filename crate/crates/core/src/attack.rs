//! Multi-round forgery against a recycled hash key.
//!
//! The adversary always sees the same message x and substitutes the same
//! x' != x. A forgery (x', t xor c) is accepted exactly when
//! c = h_{k1}(x) xor h_{k1}(x'), which does not depend on the pad, so the
//! adversary walks through the candidate values of c in order and crosses
//! one off after every rejection. With a 1/|T|-almost XOR universal family
//! each candidate is right for exactly |K|/|T| keys, giving success
//! probability l/|T| after l rounds and a steadily shrinking posterior
//! over k1.
//!
//! The exact engine integrates the pads out: acceptance in round i depends
//! only on whether the i-th guess equals the true difference, so it suffices
//! to enumerate k1. [`simulate_attack`] instead plays the real protocol
//! round by round and backs the Monte Carlo estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::entropy::{shannon_entropy, Log2Sum};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::hashfam::{measure_axu2_with_budget, Budget, EvalTable, HashFamily};
use crate::ratio::{format_ratio, ratio, Ratio};
use crate::wcauth::{authenticate, verify, KeyStream, TaggedMessage, Verdict};

/// The environment's state during the attack.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ListElimination {
    pub x: u64,
    pub x_prime: u64,
    /// Next candidate difference; candidates are tried in increasing order.
    pub next_guess: u64,
    pub tag_count: u64,
    pub succeeded: bool,
}

impl ListElimination {
    pub fn new(fam: &HashFamily) -> Self {
        ListElimination { x: 0, x_prime: 1, next_guess: 0, tag_count: fam.tag_count(), succeeded: false }
    }

    pub fn message(&self) -> u64 {
        self.x
    }

    /// Forgery for this round, or `None` once the attack has succeeded or
    /// the candidate list is empty (the wire value is then forwarded).
    pub fn respond(&self, y: &TaggedMessage) -> Option<TaggedMessage> {
        if self.succeeded || self.next_guess >= self.tag_count {
            return None;
        }
        Some(TaggedMessage::new(self.x_prime, y.t ^ FieldElem::from_raw(self.next_guess as u32)))
    }

    pub fn observe(&mut self, forged: bool, accepted: bool) {
        if !forged {
            return;
        }
        if accepted {
            self.succeeded = true;
        } else {
            self.next_guess += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundOutcome {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub x: u64,
    pub t: FieldElem,
    pub x_prime: u64,
    pub t_prime: FieldElem,
    pub outcome: RoundOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
    /// Candidate differences crossed off, in order.
    pub guesses_eliminated: Vec<FieldElem>,
}

impl Transcript {
    pub fn succeeded(&self) -> bool {
        self.rounds.iter().any(|r| r.outcome == RoundOutcome::Accept)
    }
}

/// Runs the attack against the real protocol for `rounds` rounds using the
/// given recycled key and pads. Rounds after a success are not recorded.
pub fn simulate_attack(fam: &HashFamily, k1: u64, pads: &[u64], rounds: usize) -> Result<Transcript> {
    if fam.message_count() < 2 {
        return Err(Error::InvalidArgument("attack needs at least two messages".into()));
    }
    let mut stream = KeyStream::new(fam, k1, pads.iter().copied())?;
    let mut env = ListElimination::new(fam);
    let mut transcript = Transcript::default();
    for _ in 0..rounds {
        let key = stream.next_key()?;
        let y = authenticate(fam, key, env.message())?;
        let Some(forged) = env.respond(&y) else { break };
        let accepted = verify(fam, key, &forged) != Verdict::Reject;
        transcript.rounds.push(RoundRecord {
            x: y.x,
            t: y.t,
            x_prime: forged.x,
            t_prime: forged.t,
            outcome: if accepted { RoundOutcome::Accept } else { RoundOutcome::Reject },
        });
        if !accepted {
            transcript.guesses_eliminated.push(FieldElem::from_raw(env.next_guess as u32));
        }
        env.observe(true, accepted);
        if accepted {
            break;
        }
    }
    Ok(transcript)
}

/// Refuses families whose measured AXU2 epsilon is not exactly 1/|T|.
pub fn require_tight_axu(fam: &HashFamily, budget: Budget) -> Result<()> {
    let eps = measure_axu2_with_budget(fam, budget)?.epsilon;
    let need = ratio(1, fam.tag_count() as u128);
    if eps != need {
        return Err(Error::NotTightAxu { measured: format_ratio(&eps), required: format_ratio(&need) });
    }
    Ok(())
}

/// For each candidate difference c, the recycled keys k1 with
/// h_{k1}(0) xor h_{k1}(1) = c.
fn keys_by_difference(fam: &HashFamily, budget: Budget) -> Result<Vec<Vec<u64>>> {
    let table = EvalTable::build(fam, budget)?;
    let mut classes = vec![Vec::new(); fam.tag_count() as usize];
    for k in 0..table.keys() {
        classes[(table.get(k, 0) ^ table.get(k, 1)) as usize].push(k as u64);
    }
    Ok(classes)
}

fn check_rounds(fam: &HashFamily, rounds: u64, allow_zero: bool) -> Result<()> {
    let lo = if allow_zero { 0 } else { 1 };
    if rounds < lo || rounds > fam.tag_count() {
        return Err(Error::InvalidArgument(format!(
            "round count must be in {lo}..={} (got {rounds})",
            fam.tag_count()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyReport {
    /// H(K1 | Z) from the exact posteriors of every transcript class.
    pub computed: Log2Sum,
    /// log(|K|/|T|) + (1 - l/|T|) log(|T| - l).
    pub formula: Log2Sum,
}

impl EntropyReport {
    pub fn matches(&self) -> bool {
        self.computed == self.formula
    }

    pub fn gap_bits(&self) -> f64 {
        self.formula.to_f64() - self.computed.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub rounds: u64,
    pub success_prob: Ratio,
    /// Pr[success in round i | all earlier rounds failed], i = 1..=rounds.
    pub per_round_conditional: Vec<Ratio>,
    pub entropy: EntropyReport,
    pub entropy_bits: f64,
    pub entropy_formula_bits: f64,
}

impl AttackReport {
    pub fn success_formula(&self, tag_count: u64) -> Ratio {
        ratio(self.rounds as u128, tag_count as u128)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rounds": self.rounds,
            "success_prob": format_ratio(&self.success_prob),
            "per_round_conditional": self.per_round_conditional.iter().map(format_ratio).collect::<Vec<_>>(),
            "entropy_bits": self.entropy_bits,
            "entropy_formula_bits": self.entropy_formula_bits,
            "entropy_exact": self.entropy.computed.to_string(),
            "entropy_formula_exact": self.entropy.formula.to_string(),
            "entropy_matches_formula": self.entropy.matches(),
        })
    }
}

pub fn entropy_formula(key_count: u64, tag_count: u64, rounds: u64) -> Log2Sum {
    let base = Log2Sum::log2_ratio(key_count, tag_count);
    if rounds >= tag_count {
        return base;
    }
    base + Log2Sum::log2(tag_count - rounds).scale(&ratio((tag_count - rounds) as u128, tag_count as u128))
}

fn posterior_entropy_from_classes(classes: &[Vec<u64>], key_count: u64, rounds: u64) -> Log2Sum {
    let mut h = Log2Sum::zero();
    let mut alive: Vec<u64> = Vec::new();
    // success in round i pins k1 to the keys of class i
    for (i, class) in classes.iter().enumerate() {
        if (i as u64) < rounds {
            if !class.is_empty() {
                let p = ratio(class.len() as u128, key_count as u128);
                let post = Dist::uniform(class.iter().copied()).expect("nonempty class");
                h = h + shannon_entropy(&post).scale(&p);
            }
        } else {
            alive.extend(class);
        }
    }
    if !alive.is_empty() {
        let p = ratio(alive.len() as u128, key_count as u128);
        let post = Dist::uniform(alive).expect("nonempty");
        h = h + shannon_entropy(&post).scale(&p);
    }
    h
}

pub fn run_attack_exact(fam: &HashFamily, rounds: u64) -> Result<AttackReport> {
    run_attack_exact_with_budget(fam, rounds, Budget::default())
}

pub fn run_attack_exact_with_budget(fam: &HashFamily, rounds: u64, budget: Budget) -> Result<AttackReport> {
    check_rounds(fam, rounds, false)?;
    require_tight_axu(fam, budget)?;
    let classes = keys_by_difference(fam, budget)?;
    let key_count = fam.key_count();
    let mut remaining = key_count;
    let mut succeeded = 0u64;
    let mut per_round_conditional = Vec::new();
    for class in classes.iter().take(rounds as usize) {
        let hit = class.len() as u64;
        per_round_conditional.push(ratio(hit as u128, remaining as u128));
        succeeded += hit;
        remaining -= hit;
    }
    let entropy = EntropyReport {
        computed: posterior_entropy_from_classes(&classes, key_count, rounds),
        formula: entropy_formula(key_count, fam.tag_count(), rounds),
    };
    Ok(AttackReport {
        rounds,
        success_prob: ratio(succeeded as u128, key_count as u128),
        per_round_conditional,
        entropy_bits: entropy.computed.to_f64(),
        entropy_formula_bits: entropy.formula.to_f64(),
        entropy,
    })
}

/// H(K1 | Z_l) under the attack, with l = 0 meaning no rounds observed.
pub fn posterior_entropy(fam: &HashFamily, rounds: u64) -> Result<EntropyReport> {
    check_rounds(fam, rounds, true)?;
    let budget = Budget::default();
    require_tight_axu(fam, budget)?;
    let classes = keys_by_difference(fam, budget)?;
    Ok(EntropyReport {
        computed: posterior_entropy_from_classes(&classes, fam.key_count(), rounds),
        formula: entropy_formula(fam.key_count(), fam.tag_count(), rounds),
    })
}

/// Measured Pr[F_{l+1} = 1 | F_l = 0] for l = 0..=max_rounds.
pub fn success_recurrence_check(fam: &HashFamily, max_rounds: u64) -> Result<Vec<Ratio>> {
    if max_rounds + 1 > fam.tag_count() {
        return Err(Error::InvalidArgument(format!(
            "max rounds must be at most 1/eps - 1 = {}",
            fam.tag_count() - 1
        )));
    }
    Ok(run_attack_exact(fam, max_rounds + 1)?.per_round_conditional)
}

/// eps / (1 - l * eps).
pub fn recurrence_formula(eps: &Ratio, rounds: u64) -> Ratio {
    let one = Ratio::from_integer(1.into());
    eps / (one - Ratio::from_integer(rounds.into()) * eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub rounds: u64,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub expected: f64,
    pub sigma: f64,
    /// expected +- 3 sigma (binomial).
    pub interval: (f64, f64),
    pub within_interval: bool,
    pub seed: u64,
}

const TRIALS_PER_CHUNK: u64 = 4096;

/// Plays the attack against the real protocol with random keys. Trials are
/// split into fixed chunks, each with its own ChaCha stream, so the result
/// depends only on the seed.
pub fn run_attack_montecarlo(fam: &HashFamily, rounds: u64, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    check_rounds(fam, rounds, false)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    let successes = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<u64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let n = TRIALS_PER_CHUNK.min(trials - chunk * TRIALS_PER_CHUNK);
            let mut hits = 0;
            let mut pads = vec![0u64; rounds as usize];
            for _ in 0..n {
                let k1 = rng.random_range(0..fam.key_count());
                for p in pads.iter_mut() {
                    *p = rng.random_range(0..fam.tag_count());
                }
                if simulate_attack(fam, k1, &pads, rounds as usize)?.succeeded() {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<u64>();
    let expected = rounds as f64 / fam.tag_count() as f64;
    let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
    let rate = successes as f64 / trials as f64;
    let interval = (expected - 3.0 * sigma, expected + 3.0 * sigma);
    Ok(MonteCarloReport {
        rounds,
        trials,
        successes,
        rate,
        expected,
        sigma,
        interval,
        within_interval: rate >= interval.0 && rate <= interval.1,
        seed,
    })
}

/// Posterior of k1 given only the (x, t_i) pairs the receiver was sent,
/// ignoring accept/reject. Enumerates k1 and every pad sequence; returns
/// true when the posterior is uniform for every observed tag sequence.
pub fn tag_pairs_posterior_uniform(fam: &HashFamily, rounds: u32, budget: Budget) -> Result<bool> {
    let t = fam.tag_count();
    let paths = (fam.key_count() as u128) * (t as u128).pow(rounds);
    budget.check(paths)?;
    let mut counts: std::collections::BTreeMap<Vec<u32>, Vec<u64>> = Default::default();
    for k1 in 0..fam.key_count() {
        let h = fam.eval(k1, 0)?;
        for code in 0..t.pow(rounds) {
            let seq: Vec<u32> = (0..rounds)
                .map(|i| (h ^ FieldElem::from_raw(((code / t.pow(i)) % t) as u32)).value())
                .collect();
            counts.entry(seq).or_insert_with(|| vec![0; fam.key_count() as usize])[k1 as usize] += 1;
        }
    }
    Ok(counts.values().all(|per_key| per_key.iter().all(|&c| c == per_key[0])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul2() -> HashFamily {
        HashFamily::mul(2).unwrap()
    }

    /// Oracle: enumerate k1 and every pad sequence, play the real protocol.
    fn brute_success(fam: &HashFamily, rounds: usize) -> Ratio {
        let t = fam.tag_count();
        let mut hits = 0u128;
        let mut total = 0u128;
        for k1 in 0..fam.key_count() {
            for code in 0..t.pow(rounds as u32) {
                let pads: Vec<u64> = (0..rounds).map(|i| (code / t.pow(i as u32)) % t).collect();
                total += 1;
                if simulate_attack(fam, k1, &pads, rounds).unwrap().succeeded() {
                    hits += 1;
                }
            }
        }
        ratio(hits, total)
    }

    #[test]
    fn success_examples() {
        let fam = mul2();
        assert_eq!(run_attack_exact(&fam, 1).unwrap().success_prob, ratio(1, 4));
        let two = run_attack_exact(&fam, 2).unwrap();
        assert_eq!(two.success_prob, ratio(2, 4));
        assert_eq!(two.per_round_conditional, vec![ratio(1, 4), ratio(1, 3)]);
        assert_eq!(run_attack_exact(&fam, 4).unwrap().success_prob, ratio(1, 1));
    }

    #[test]
    fn exact_engine_matches_protocol_enumeration() {
        for fam in [mul2(), HashFamily::toeplitz(2, 2).unwrap(), HashFamily::mul(3).unwrap()] {
            let max = fam.tag_count().min(4);
            for l in 1..=max {
                assert_eq!(run_attack_exact(&fam, l).unwrap().success_prob, brute_success(&fam, l as usize), "{fam} l={l}");
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let seq = success_recurrence_check(&mul2(), 3).unwrap();
        assert_eq!(seq, vec![ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(1, 1)]);
        let eps = ratio(1, 4);
        for (l, p) in seq.iter().enumerate() {
            assert_eq!(*p, recurrence_formula(&eps, l as u64));
        }
        assert!(success_recurrence_check(&mul2(), 4).is_err());
    }

    #[test]
    fn entropy_examples() {
        let fam = mul2();
        let h = posterior_entropy(&fam, 2).unwrap();
        assert!(h.matches());
        assert_eq!(h.computed.to_f64(), 0.5);
        assert_eq!(posterior_entropy(&fam, 0).unwrap().computed, Log2Sum::log2(4));
    }

    #[test]
    fn entropy_non_increasing() {
        for fam in [mul2(), HashFamily::mul(3).unwrap(), HashFamily::toeplitz(3, 2).unwrap()] {
            let hs: Vec<f64> = (0..=fam.tag_count()).map(|l| posterior_entropy(&fam, l).unwrap().computed.to_f64()).collect();
            assert!(hs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{fam}: {hs:?}");
            for l in 0..=fam.tag_count() {
                assert!(posterior_entropy(&fam, l).unwrap().matches(), "{fam} l={l}");
            }
        }
    }

    #[test]
    fn refuses_loose_families() {
        let poly = HashFamily::poly(2, 2).unwrap();
        assert!(matches!(run_attack_exact(&poly, 1), Err(Error::NotTightAxu { .. })));
        assert!(run_attack_exact(&mul2(), 0).is_err());
        assert!(run_attack_exact(&mul2(), 5).is_err());
    }

    #[test]
    fn transcripts() {
        let fam = mul2();
        // k1 = 3: c = h(0) ^ h(1) = 3, found in round 4
        let tr = simulate_attack(&fam, 3, &[0, 1, 2, 3], 4).unwrap();
        assert_eq!(tr.rounds.len(), 4);
        assert_eq!(tr.guesses_eliminated.len(), 3);
        assert_eq!(tr.rounds.iter().filter(|r| r.outcome == RoundOutcome::Accept).count(), 1);
        // k1 = 0: c = 0, first guess lands and the attack stops
        let tr = simulate_attack(&fam, 0, &[2, 2], 2).unwrap();
        assert_eq!(tr.rounds.len(), 1);
        assert!(tr.succeeded());
        assert!(simulate_attack(&fam, 1, &[0], 2).is_err());
    }

    #[test]
    fn monte_carlo_full_list_always_succeeds() {
        let r = run_attack_montecarlo(&mul2(), 4, 1000, 3).unwrap();
        assert_eq!(r.successes, 1000);
    }

    #[test]
    fn monte_carlo_replay() {
        let fam = HashFamily::mul(4).unwrap();
        let a = run_attack_montecarlo(&fam, 3, 10_000, 11).unwrap();
        let b = run_attack_montecarlo(&fam, 3, 10_000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.within_interval);
    }

    #[test]
    fn tags_alone_leak_nothing() {
        for l in 1..=4 {
            assert!(tag_pairs_posterior_uniform(&mul2(), l, Budget::default()).unwrap());
        }
    }
}
