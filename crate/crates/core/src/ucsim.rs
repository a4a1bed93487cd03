//! Exact real-world / ideal-world executions of one authentication round.
//!
//! The environment picks a message distribution and a deterministic
//! substitution map (or, for impersonation, a forged wire value before any
//! message is sent). The real world runs the protocol under uniform keys;
//! the ideal world delivers the original message only when the wire value
//! was left untouched and, with recycling, hands out a fresh uniform key.
//! Both worlds are enumerated exhaustively into [`Dist`]s and compared by
//! total-variation distance.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dist::{total_variation, Dist, DistBuilder};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::hashfam::{Budget, HashFamily};
use crate::ratio::{format_ratio, ratio, Ratio};
use crate::wcauth::{authenticate, verify, AuthKey, TaggedMessage};

/// A one-round authentication scheme with an enumerable uniform key space.
pub trait Scheme: Sync {
    fn label(&self) -> String;
    fn message_count(&self) -> u64;
    fn key_count(&self) -> u64;
    /// Size of the recycled key space, `None` when nothing is recycled.
    fn recycled_key_count(&self) -> Option<u64>;
    fn recycled_part(&self, key: u64) -> Option<u64>;
    fn encode(&self, key: u64, x: u64) -> TaggedMessage;
    /// `None` is the error output.
    fn decode(&self, key: u64, y: &TaggedMessage) -> Option<u64>;
    /// Range of the first wire component.
    fn head_count(&self) -> u64;
    fn tag_count(&self) -> u64;
    /// True when the wire value is (x, t) with x the message in the clear.
    fn is_xt_form(&self) -> bool;

    fn wire_space(&self) -> Vec<TaggedMessage> {
        let tags = self.tag_count();
        (0..self.head_count())
            .flat_map(|h| (0..tags).map(move |t| TaggedMessage::new(h, FieldElem::from_raw(t as u32))))
            .collect()
    }
}

/// Wegman-Carter with recycled k1 (`recycle = true`) or standard
/// authentication with tag h_k(x) (`recycle = false`).
#[derive(Debug, Clone)]
pub struct WcScheme {
    fam: HashFamily,
    recycle: bool,
}

impl WcScheme {
    pub fn new(fam: &HashFamily, recycle: bool) -> Self {
        WcScheme { fam: fam.clone(), recycle }
    }

    pub fn family(&self) -> &HashFamily {
        &self.fam
    }

    fn auth_key(&self, key: u64) -> AuthKey {
        if self.recycle {
            let t = self.fam.tag_count();
            AuthKey { k1: key / t, k2: FieldElem::from_raw((key % t) as u32) }
        } else {
            AuthKey { k1: key, k2: FieldElem::ZERO }
        }
    }
}

impl Scheme for WcScheme {
    fn label(&self) -> String {
        let mode = if self.recycle { "recycling" } else { "standard" };
        format!("wc-{mode}({})", self.fam.descriptor())
    }

    fn message_count(&self) -> u64 {
        self.fam.message_count()
    }

    fn key_count(&self) -> u64 {
        if self.recycle {
            self.fam.key_count() * self.fam.tag_count()
        } else {
            self.fam.key_count()
        }
    }

    fn recycled_key_count(&self) -> Option<u64> {
        self.recycle.then(|| self.fam.key_count())
    }

    fn recycled_part(&self, key: u64) -> Option<u64> {
        self.recycle.then(|| key / self.fam.tag_count())
    }

    fn encode(&self, key: u64, x: u64) -> TaggedMessage {
        authenticate(&self.fam, self.auth_key(key), x).expect("message in range")
    }

    fn decode(&self, key: u64, y: &TaggedMessage) -> Option<u64> {
        verify(&self.fam, self.auth_key(key), y).accepted()
    }

    fn head_count(&self) -> u64 {
        self.fam.message_count()
    }

    fn tag_count(&self) -> u64 {
        self.fam.tag_count()
    }

    fn is_xt_form(&self) -> bool {
        true
    }
}

/// Two-message protocol sending (x xor b, h_j(x xor b)) under key (b, j),
/// with h the counterexample family (h_j(0) = 0). Its impersonation error
/// exceeds its substitution error, so it is not of (x, t) form.
#[derive(Debug, Clone)]
pub struct CounterexampleScheme {
    fam: HashFamily,
}

pub fn counterexample_protocol(m: u32) -> Result<CounterexampleScheme> {
    Ok(CounterexampleScheme { fam: HashFamily::counterexample(m)? })
}

impl CounterexampleScheme {
    fn split(&self, key: u64) -> (u64, u64) {
        let n = self.fam.key_count();
        (key / n, key % n)
    }
}

impl Scheme for CounterexampleScheme {
    fn label(&self) -> String {
        format!("counterexample-protocol(m={})", self.fam.tag_bits())
    }

    fn message_count(&self) -> u64 {
        2
    }

    fn key_count(&self) -> u64 {
        2 * self.fam.key_count()
    }

    fn recycled_key_count(&self) -> Option<u64> {
        None
    }

    fn recycled_part(&self, _key: u64) -> Option<u64> {
        None
    }

    fn encode(&self, key: u64, x: u64) -> TaggedMessage {
        let (b, j) = self.split(key);
        let u = x ^ b;
        TaggedMessage::new(u, self.fam.eval_raw(j, u))
    }

    fn decode(&self, key: u64, y: &TaggedMessage) -> Option<u64> {
        let (b, j) = self.split(key);
        (y.x < 2 && self.fam.eval_raw(j, y.x) == y.t).then_some(y.x ^ b)
    }

    fn head_count(&self) -> u64 {
        2
    }

    fn tag_count(&self) -> u64 {
        self.fam.tag_count()
    }

    fn is_xt_form(&self) -> bool {
        false
    }
}

/// The environment's deterministic response y' to the wire value y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitution {
    Identity,
    /// (x, t) -> (x', t xor c).
    ReplaceMessage { x_prime: u64, tag_xor: FieldElem },
    /// Explicit map; wire values not listed are forwarded unchanged.
    Table(BTreeMap<TaggedMessage, TaggedMessage>),
}

impl Substitution {
    pub fn apply(&self, y: &TaggedMessage) -> TaggedMessage {
        match self {
            Substitution::Identity => *y,
            Substitution::ReplaceMessage { x_prime, tag_xor } => TaggedMessage::new(*x_prime, y.t ^ *tag_xor),
            Substitution::Table(map) => map.get(y).copied().unwrap_or(*y),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Substitution::Identity => json!("identity"),
            Substitution::ReplaceMessage { x_prime, tag_xor } => {
                json!({"replace_message": {"x_prime": x_prime, "tag_xor": tag_xor.value()}})
            }
            Substitution::Table(map) => json!({
                "table": map
                    .iter()
                    .map(|(a, b)| json!([[a.x, a.t.value()], [b.x, b.t.value()]]))
                    .collect::<Vec<_>>()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvStrategy {
    Substitution { msg_dist: Dist<u64>, subst: Substitution },
    /// Forged wire value injected before any message is sent.
    Impersonation { y_prime: TaggedMessage },
}

impl EnvStrategy {
    pub fn substitution(msg_dist: Dist<u64>, subst: Substitution) -> Self {
        EnvStrategy::Substitution { msg_dist, subst }
    }

    pub fn impersonation(y_prime: TaggedMessage) -> Self {
        EnvStrategy::Impersonation { y_prime }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EnvStrategy::Substitution { msg_dist, subst } => {
                let dist: serde_json::Map<String, Value> = msg_dist
                    .iter()
                    .map(|(x, w)| (x.to_string(), Value::String(format_ratio(w))))
                    .collect();
                json!({"mode": "substitution", "msg_dist": dist, "subst": subst.to_json()})
            }
            EnvStrategy::Impersonation { y_prime } => {
                json!({"mode": "impersonation", "y_prime": [y_prime.x, y_prime.t.value()]})
            }
        }
    }
}

/// Everything the environment sees after one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldOutcome {
    /// `None` under impersonation.
    pub x: Option<u64>,
    pub y: Option<TaggedMessage>,
    pub y_prime: TaggedMessage,
    /// `None` is the error output.
    pub output: Option<u64>,
    /// Recycled key, `None` for schemes without recycling.
    pub k1: Option<u64>,
}

impl WorldOutcome {
    fn schema(&self) -> (bool, bool, bool) {
        (self.x.is_some(), self.y.is_some(), self.k1.is_some())
    }
}

fn run_budget(scheme: &dyn Scheme, budget: Budget) -> Result<()> {
    budget.check(scheme.message_count() as u128 * scheme.key_count() as u128 * scheme.tag_count() as u128)
}

fn check_env(scheme: &dyn Scheme, env: &EnvStrategy) -> Result<()> {
    if let EnvStrategy::Substitution { msg_dist, .. } = env {
        if let Some(x) = msg_dist.support().find(|&&x| x >= scheme.message_count()) {
            return Err(Error::MessageOutOfRange { msg: *x, size: scheme.message_count() });
        }
    }
    Ok(())
}

pub fn run_real_scheme(scheme: &dyn Scheme, env: &EnvStrategy, budget: Budget) -> Result<Dist<WorldOutcome>> {
    run_budget(scheme, budget)?;
    check_env(scheme, env)?;
    let key_w = ratio(1, scheme.key_count() as u128);
    let mut b = DistBuilder::new();
    match env {
        EnvStrategy::Substitution { msg_dist, subst } => {
            for (&x, px) in msg_dist.iter() {
                let w = px * &key_w;
                for key in 0..scheme.key_count() {
                    let y = scheme.encode(key, x);
                    let y_prime = subst.apply(&y);
                    let outcome = WorldOutcome {
                        x: Some(x),
                        y: Some(y),
                        y_prime,
                        output: scheme.decode(key, &y_prime),
                        k1: scheme.recycled_part(key),
                    };
                    b.add(outcome, w.clone());
                }
            }
        }
        EnvStrategy::Impersonation { y_prime } => {
            for key in 0..scheme.key_count() {
                let outcome = WorldOutcome {
                    x: None,
                    y: None,
                    y_prime: *y_prime,
                    output: scheme.decode(key, y_prime),
                    k1: scheme.recycled_part(key),
                };
                b.add(outcome, key_w.clone());
            }
        }
    }
    b.finish()
}

/// The simulator encodes with its own uniform key and lets the message
/// through iff the wire value came back unchanged; the recycled key is
/// fresh and uniform.
pub fn run_ideal_scheme(scheme: &dyn Scheme, env: &EnvStrategy, budget: Budget) -> Result<Dist<WorldOutcome>> {
    run_budget(scheme, budget)?;
    check_env(scheme, env)?;
    let fresh: Vec<Option<u64>> = match scheme.recycled_key_count() {
        Some(n) => (0..n).map(Some).collect(),
        None => vec![None],
    };
    let fresh_w = ratio(1, fresh.len() as u128);
    let mut b = DistBuilder::new();
    match env {
        EnvStrategy::Substitution { msg_dist, subst } => {
            let key_w = ratio(1, scheme.key_count() as u128);
            for (&x, px) in msg_dist.iter() {
                let w = px * &key_w * &fresh_w;
                for key in 0..scheme.key_count() {
                    let y = scheme.encode(key, x);
                    let y_prime = subst.apply(&y);
                    let output = (y_prime == y).then_some(x);
                    for &k1 in &fresh {
                        b.add(WorldOutcome { x: Some(x), y: Some(y), y_prime, output, k1 }, w.clone());
                    }
                }
            }
        }
        EnvStrategy::Impersonation { y_prime } => {
            for &k1 in &fresh {
                b.add(WorldOutcome { x: None, y: None, y_prime: *y_prime, output: None, k1 }, fresh_w.clone());
            }
        }
    }
    b.finish()
}

pub fn run_real(fam: &HashFamily, env: &EnvStrategy, recycle: bool) -> Result<Dist<WorldOutcome>> {
    run_real_scheme(&WcScheme::new(fam, recycle), env, Budget::default())
}

pub fn run_ideal(fam: &HashFamily, env: &EnvStrategy, recycle: bool) -> Result<Dist<WorldOutcome>> {
    run_ideal_scheme(&WcScheme::new(fam, recycle), env, Budget::default())
}

/// Drops the recycled key from every outcome.
pub fn forget_recycled_key(d: &Dist<WorldOutcome>) -> Dist<WorldOutcome> {
    d.project(|o| WorldOutcome { k1: None, ..*o })
}

/// Total-variation distance between two outcome distributions. Both must
/// carry the same fields (message, wire value, recycled key).
pub fn statistical_distance(p: &Dist<WorldOutcome>, q: &Dist<WorldOutcome>) -> Result<Ratio> {
    let mut schemas = p.support().chain(q.support()).map(WorldOutcome::schema);
    if let Some(first) = schemas.next() {
        if let Some(other) = schemas.find(|s| *s != first) {
            return Err(Error::SchemaMismatch(format!(
                "(x, y, k1) present = {first:?} vs {other:?}"
            )));
        }
    }
    Ok(total_variation(p, q))
}

pub fn distance_for(scheme: &dyn Scheme, env: &EnvStrategy, budget: Budget) -> Result<Ratio> {
    let real = run_real_scheme(scheme, env, budget)?;
    let ideal = run_ideal_scheme(scheme, env, budget)?;
    statistical_distance(&real, &ideal)
}

/// Checks that the recycled key is exactly uniform given every (x, y) of
/// positive probability in a real-world run.
pub fn recycled_key_uniform(real: &Dist<WorldOutcome>, recycled_keys: u64) -> bool {
    let joint = real.project(|o| (o.x, o.y, o.k1));
    let marginal = real.project(|o| (o.x, o.y));
    let target = ratio(1, recycled_keys as u128);
    let uniform = marginal.iter().all(|((x, y), pxy)| {
        (0..recycled_keys).all(|k| joint.weight(&(*x, *y, Some(k))) / pxy == target)
    });
    uniform
}

pub fn impersonation_distance_scheme(scheme: &dyn Scheme, y_prime: TaggedMessage, budget: Budget) -> Result<Ratio> {
    distance_for(scheme, &EnvStrategy::impersonation(y_prime), budget)
}

pub fn impersonation_distance(fam: &HashFamily, y_prime: TaggedMessage, recycle: bool) -> Result<Ratio> {
    impersonation_distance_scheme(&WcScheme::new(fam, recycle), y_prime, Budget::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCase {
    pub distance: Ratio,
    pub witness: EnvStrategy,
    pub substitution_distance: Ratio,
    pub substitution_witness: EnvStrategy,
    pub impersonation_distance: Ratio,
    pub impersonation_witness: TaggedMessage,
}

/// Integer tallies over a common denominator D = |K| * |K1| (|K1| = 1 when
/// nothing is recycled). Returns sum |real - ideal| in units of 1/D.
fn tally_gap(real: &HashMap<(Option<u64>, Option<u64>), i128>, ideal: &HashMap<(Option<u64>, Option<u64>), i128>) -> i128 {
    let mut gap = 0i128;
    for (k, r) in real {
        gap += (r - ideal.get(k).copied().unwrap_or(0)).abs();
    }
    for (k, i) in ideal {
        if !real.contains_key(k) {
            gap += i.abs();
        }
    }
    gap
}

/// Best substitution against a point mass on `x`. The distance splits into
/// one term per wire value y, each depending only on the response to y, so
/// the maximum over all maps is the per-y maximum. Returns (gap, map).
fn best_substitution_for(scheme: &dyn Scheme, x: u64, candidates: &[TaggedMessage]) -> (i128, BTreeMap<TaggedMessage, TaggedMessage>) {
    let k1_count = scheme.recycled_key_count();
    let fresh_mult = k1_count.unwrap_or(1) as i128;
    let mut groups: BTreeMap<TaggedMessage, Vec<u64>> = BTreeMap::new();
    for key in 0..scheme.key_count() {
        groups.entry(scheme.encode(key, x)).or_default().push(key);
    }
    let mut total = 0i128;
    let mut map = BTreeMap::new();
    let mut real = HashMap::new();
    let mut ideal = HashMap::new();
    for (y, keys) in &groups {
        let mut best: Option<(i128, TaggedMessage)> = None;
        for y_prime in candidates {
            real.clear();
            ideal.clear();
            for &key in keys {
                *real.entry((scheme.decode(key, y_prime), scheme.recycled_part(key))).or_insert(0) += fresh_mult;
            }
            let out = (y_prime == y).then_some(x);
            let n_y = keys.len() as i128;
            match k1_count {
                Some(n) => {
                    for k in 0..n {
                        *ideal.entry((out, Some(k))).or_insert(0) += n_y;
                    }
                }
                None => *ideal.entry((out, None)).or_insert(0) += n_y,
            }
            let gap = tally_gap(&real, &ideal);
            if best.is_none_or(|(g, _)| gap > g) {
                best = Some((gap, *y_prime));
            }
        }
        let (gap, choice) = best.expect("wire space is nonempty");
        total += gap;
        map.insert(*y, choice);
    }
    (total, map)
}

fn impersonation_gap(scheme: &dyn Scheme, y_prime: &TaggedMessage) -> i128 {
    let k = scheme.key_count() as i128;
    let k1_count = scheme.recycled_key_count();
    let fresh_mult = k1_count.unwrap_or(1) as i128;
    let mut real = HashMap::new();
    let mut ideal = HashMap::new();
    for key in 0..scheme.key_count() {
        *real.entry((scheme.decode(key, y_prime), scheme.recycled_part(key))).or_insert(0) += fresh_mult;
    }
    match k1_count {
        Some(n) => {
            for k1 in 0..n {
                ideal.insert((None, Some(k1)), k);
            }
        }
        None => {
            ideal.insert((None, None), k);
        }
    }
    tally_gap(&real, &ideal)
}

/// Largest distance any environment achieves, over point-mass message
/// distributions with deterministic substitution maps, and over
/// impersonation. Ties go to the smallest message, then the smallest map;
/// substitution wins a tie with impersonation.
pub fn worst_case_distance_scheme(scheme: &dyn Scheme, budget: Budget) -> Result<WorstCase> {
    let candidates = scheme.wire_space();
    budget.check(scheme.message_count() as u128 * scheme.key_count() as u128 * candidates.len() as u128)?;
    let denom = 2 * scheme.key_count() as u128 * scheme.recycled_key_count().unwrap_or(1) as u128;

    let per_x: Vec<(i128, BTreeMap<TaggedMessage, TaggedMessage>)> = (0..scheme.message_count())
        .into_par_iter()
        .map(|x| best_substitution_for(scheme, x, &candidates))
        .collect();
    let (best_x, (sub_gap, sub_map)) = per_x
        .into_iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, (i128, _))>, (x, cur)| match acc {
            Some((bx, best)) if best.0 >= cur.0 => Some((bx, best)),
            _ => Some((x, cur)),
        })
        .expect("message space is nonempty");
    let substitution_distance = ratio(sub_gap as u128, denom);
    let substitution_witness =
        EnvStrategy::substitution(Dist::point(best_x as u64), Substitution::Table(sub_map));

    let imp: Vec<i128> = candidates.par_iter().map(|y| impersonation_gap(scheme, y)).collect();
    let (imp_idx, imp_gap) = imp
        .iter()
        .enumerate()
        .fold((0, i128::MIN), |(bi, bg), (i, &g)| if g > bg { (i, g) } else { (bi, bg) });
    let impersonation_distance = ratio(imp_gap as u128, denom);
    let impersonation_witness = candidates[imp_idx];

    let (distance, witness) = if impersonation_distance > substitution_distance {
        (impersonation_distance.clone(), EnvStrategy::impersonation(impersonation_witness))
    } else {
        (substitution_distance.clone(), substitution_witness.clone())
    };
    Ok(WorstCase {
        distance,
        witness,
        substitution_distance,
        substitution_witness,
        impersonation_distance,
        impersonation_witness,
    })
}

pub fn worst_case_distance(fam: &HashFamily, recycle: bool) -> Result<WorstCase> {
    worst_case_distance_scheme(&WcScheme::new(fam, recycle), Budget::default())
}

/// Machine-readable record of a distance measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub family: String,
    pub mode: String,
    pub epsilon_measured: String,
    pub distance: String,
    pub witness_strategy: Value,
}

impl DistanceRecord {
    pub fn new(family: &str, mode: &str, epsilon: &Ratio, distance: &Ratio, witness: &EnvStrategy) -> Self {
        DistanceRecord {
            family: family.to_string(),
            mode: mode.to_string(),
            epsilon_measured: format_ratio(epsilon),
            distance: format_ratio(distance),
            witness_strategy: witness.to_json(),
        }
    }
}

/// Probability that the real receiver outputs something other than the
/// sent message or the error symbol.
pub fn forgery_probability(real: &Dist<WorldOutcome>) -> Ratio {
    real.prob(|o| matches!(o.output, Some(out) if Some(out) != o.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashfam::measure_axu2;
    use crate::ratio::one;

    fn mul2() -> HashFamily {
        HashFamily::mul(2).unwrap()
    }

    fn fixed(x: u64, x_prime: u64, c: u32) -> EnvStrategy {
        EnvStrategy::substitution(
            Dist::point(x),
            Substitution::ReplaceMessage { x_prime, tag_xor: FieldElem::from_raw(c) },
        )
    }

    #[test]
    fn identity_is_perfectly_robust() {
        let env = EnvStrategy::substitution(Dist::uniform(0..4).unwrap(), Substitution::Identity);
        for recycle in [false, true] {
            let real = run_real(&mul2(), &env, recycle).unwrap();
            let ideal = run_ideal(&mul2(), &env, recycle).unwrap();
            assert_eq!(real.prob(|o| o.output == o.x), one());
            assert_eq!(ideal.prob(|o| o.output == o.x), one());
            assert_eq!(statistical_distance(&real, &ideal).unwrap(), ratio(0, 1));
        }
    }

    #[test]
    fn fixed_substitution_mul2() {
        let env = fixed(1, 2, 0);
        let real = run_real(&mul2(), &env, true).unwrap();
        assert_eq!(real.prob(|o| o.output == Some(2)), ratio(1, 4));
        let ideal = run_ideal(&mul2(), &env, true).unwrap();
        assert_eq!(ideal.prob(|o| o.output.is_none()), one());
        assert_eq!(statistical_distance(&real, &ideal).unwrap(), ratio(1, 4));
    }

    #[test]
    fn ideal_key_is_uniform() {
        let ideal = run_ideal(&mul2(), &fixed(0, 3, 2), true).unwrap();
        let k = ideal.project(|o| o.k1);
        for k1 in 0..4 {
            assert_eq!(k.weight(&Some(k1)), ratio(1, 4));
        }
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let env = fixed(0, 1, 0);
        let rec = run_real(&mul2(), &env, true).unwrap();
        let std = run_real(&mul2(), &env, false).unwrap();
        assert!(matches!(statistical_distance(&rec, &std), Err(Error::SchemaMismatch(_))));
        let projected = forget_recycled_key(&rec);
        assert!(statistical_distance(&projected, &std).is_ok());
    }

    #[test]
    fn distance_of_point_masses() {
        let y = TaggedMessage::new(0, FieldElem::ZERO);
        let a = WorldOutcome { x: Some(0), y: Some(y), y_prime: y, output: Some(0), k1: None };
        let b = WorldOutcome { output: None, ..a };
        assert_eq!(statistical_distance(&Dist::point(a), &Dist::point(a)).unwrap(), ratio(0, 1));
        assert_eq!(statistical_distance(&Dist::point(a), &Dist::point(b)).unwrap(), one());
    }

    #[test]
    fn worst_case_mul2_recycling() {
        let wc = worst_case_distance(&mul2(), true).unwrap();
        assert_eq!(wc.distance, ratio(1, 4));
        assert_eq!(wc.impersonation_distance, ratio(1, 4));
        let real = run_real(&mul2(), &wc.witness, true).unwrap();
        let ideal = run_ideal(&mul2(), &wc.witness, true).unwrap();
        assert_eq!(statistical_distance(&real, &ideal).unwrap(), wc.distance);
    }

    #[test]
    fn deterministic_hash_is_fully_forgeable() {
        let single = HashFamily::table(2, (0..4).map(|i| i.to_string()).collect(), vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(worst_case_distance(&single.lift(), false).unwrap().distance, one());
        assert_eq!(worst_case_distance(&single, true).unwrap().distance, one());
    }

    #[test]
    fn worst_case_is_deterministic() {
        let fam = HashFamily::toeplitz(3, 2).unwrap();
        let a = worst_case_distance(&fam, true).unwrap();
        let b = worst_case_distance(&fam, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impersonation_wc_is_one_over_t() {
        for m in [2, 3] {
            let fam = HashFamily::mul(m).unwrap();
            for x in 0..fam.message_count() {
                for t in 0..fam.tag_count() {
                    let y = TaggedMessage::new(x, FieldElem::from_raw(t as u32));
                    assert_eq!(impersonation_distance(&fam, y, true).unwrap(), ratio(1, 1u128 << m));
                }
            }
        }
    }

    #[test]
    fn counterexample_protocol_values() {
        let proto = counterexample_protocol(2).unwrap();
        let y0 = TaggedMessage::new(0, FieldElem::ZERO);
        assert_eq!(impersonation_distance_scheme(&proto, y0, Budget::default()).unwrap(), one());
        let real = run_real_scheme(&proto, &EnvStrategy::impersonation(y0), Budget::default()).unwrap();
        assert_eq!(real.prob(|o| o.output.is_some()), one());
        let wc = worst_case_distance_scheme(&proto, Budget::default()).unwrap();
        // (0,0) on the y=(1,*) branch always lands; on y=(0,0) the best
        // forgery lands with probability 1/3.
        assert_eq!(wc.substitution_distance, ratio(2, 3));
        assert_eq!(wc.impersonation_distance, one());
        assert!(wc.impersonation_distance > wc.substitution_distance);
    }

    #[test]
    fn counterexample_m1_enumerated() {
        let proto = counterexample_protocol(1).unwrap();
        assert_eq!(proto.key_count(), 2);
        let wc = worst_case_distance_scheme(&proto, Budget::default()).unwrap();
        assert_eq!(wc.substitution_distance, one());
        assert_eq!(wc.impersonation_distance, one());
    }

    #[test]
    fn recycled_key_independent_of_xy() {
        let fam = HashFamily::mul(3).unwrap();
        for x in 0..8 {
            for env in [fixed(x, (x + 1) % 8, 0), fixed(x, x, 1), fixed(x, 0, 5)] {
                let real = run_real(&fam, &env, true).unwrap();
                assert!(recycled_key_uniform(&real, 8));
            }
        }
    }

    #[test]
    fn thm_bound_for_fixed_strategies() {
        for fam in [mul2(), HashFamily::poly(2, 2).unwrap(), HashFamily::toeplitz(3, 2).unwrap()] {
            let eps = measure_axu2(&fam).unwrap().epsilon;
            let n = fam.message_count();
            for x in 0..n {
                for xp in 0..n {
                    for c in 0..fam.tag_count() as u32 {
                        let d = distance_for(&WcScheme::new(&fam, true), &fixed(x, xp, c), Budget::default()).unwrap();
                        assert!(d <= eps, "{fam} x={x} x'={xp} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let fam = HashFamily::mul(8).unwrap();
        let err = worst_case_distance_scheme(&WcScheme::new(&fam, true), Budget(1 << 10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let env = fixed(0, 1, 0);
        assert!(run_real_scheme(&WcScheme::new(&fam, true), &env, Budget(10)).is_err());
    }

    #[test]
    fn out_of_range_message_rejected() {
        assert!(matches!(run_real(&mul2(), &fixed(9, 0, 0), true), Err(Error::MessageOutOfRange { .. })));
    }

    #[test]
    fn witness_json_shape() {
        let wc = worst_case_distance(&mul2(), true).unwrap();
        let eps = measure_axu2(&mul2()).unwrap().epsilon;
        let rec = DistanceRecord::new("mul:m=2", "recycling", &eps, &wc.distance, &wc.witness);
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["distance"], "1/4");
        assert_eq!(v["witness_strategy"]["mode"], "substitution");
        assert_eq!(v["witness_strategy"]["msg_dist"]["0"], "1/1");
    }
}
