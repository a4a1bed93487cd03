//! Composition of recycled-key authentication with an ideal key source.
//!
//! Each of r rounds draws fresh pads from a key-distribution stand-in with a
//! declared error and authenticates l messages under one hash key k1 that
//! is never refreshed. The ledger adds up the per-use errors; the exact
//! simulator measures the actual distance for small families.

use num::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::ListElimination;
use crate::dist::{total_variation, DistBuilder};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::hashfam::{measure_axu2_with_budget, Budget, HashFamily};
use crate::ratio::{format_ratio, one, ratio, serde_ratio, zero, Ratio};
use crate::wcauth::{authenticate, verify, AuthKey, TaggedMessage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Auth,
    Qkd,
}

impl Component {
    pub fn label(self) -> &'static str {
        match self {
            Component::Auth => "auth",
            Component::Qkd => "qkd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub round: u64,
    pub component: Component,
    #[serde(with = "serde_ratio")]
    pub epsilon: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorLedger {
    entries: Vec<LedgerEntry>,
    #[serde(with = "serde_ratio")]
    total: Ratio,
}

impl ErrorLedger {
    pub fn new() -> Self {
        ErrorLedger { entries: Vec::new(), total: zero() }
    }

    pub fn push(&mut self, round: u64, component: Component, epsilon: Ratio) -> Result<()> {
        if epsilon.is_negative() {
            return Err(Error::InvalidArgument(format!("negative ledger entry {}", format_ratio(&epsilon))));
        }
        self.total += &epsilon;
        self.entries.push(LedgerEntry { round, component, epsilon });
        Ok(())
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total(&self) -> &Ratio {
        &self.total
    }

    /// `round,component,epsilon,cumulative` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,component,epsilon,cumulative\n");
        let mut running = zero();
        for e in &self.entries {
            running += &e.epsilon;
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.round,
                e.component.label(),
                format_ratio(&e.epsilon),
                format_ratio(&running)
            ));
        }
        out
    }
}

/// Ideal key-distribution stand-in: delivers uniform keys of `out_bits`
/// bits with a declared distinguishing error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyQkdFunctionality {
    pub out_bits: u32,
    #[serde(with = "serde_ratio")]
    pub eps_prime: Ratio,
}

impl ToyQkdFunctionality {
    pub fn new(out_bits: u32, eps_prime: Ratio) -> Result<Self> {
        if eps_prime.is_negative() || eps_prime > one() {
            return Err(Error::InvalidArgument(format!(
                "qkd error must lie in [0, 1], got {}",
                format_ratio(&eps_prime)
            )));
        }
        Ok(ToyQkdFunctionality { out_bits, eps_prime })
    }

    pub fn ideal(out_bits: u32) -> Self {
        ToyQkdFunctionality { out_bits, eps_prime: zero() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposeReport {
    pub ledger: ErrorLedger,
    pub epsilon: Ratio,
    pub bound: Ratio,
}

fn check_rounds(r: u64, l: u64) -> Result<()> {
    if r == 0 || l == 0 {
        return Err(Error::InvalidArgument("r and l must both be at least 1".into()));
    }
    Ok(())
}

/// Ledger for r rounds of l authentications with per-use error `eps`.
pub fn compose_ledger(eps: &Ratio, r: u64, l: u64, qkd: &ToyQkdFunctionality) -> Result<ComposeReport> {
    check_rounds(r, l)?;
    let mut ledger = ErrorLedger::new();
    for round in 1..=r {
        for _ in 0..l {
            ledger.push(round, Component::Auth, eps.clone())?;
        }
        ledger.push(round, Component::Qkd, qkd.eps_prime.clone())?;
    }
    let bound = ledger.total().clone();
    Ok(ComposeReport { ledger, epsilon: eps.clone(), bound })
}

pub fn compose_run(fam: &HashFamily, r: u64, l: u64, qkd: &ToyQkdFunctionality) -> Result<ComposeReport> {
    compose_run_with_budget(fam, r, l, qkd, Budget::default())
}

pub fn compose_run_with_budget(
    fam: &HashFamily,
    r: u64,
    l: u64,
    qkd: &ToyQkdFunctionality,
    budget: Budget,
) -> Result<ComposeReport> {
    check_rounds(r, l)?;
    let eps = measure_axu2_with_budget(fam, budget)?.epsilon;
    compose_ledger(&eps, r, l, qkd)
}

/// r(l * eps + eps').
pub fn composed_bound(eps: &Ratio, r: u64, l: u64, eps_prime: &Ratio) -> Ratio {
    Ratio::from_integer(r.into()) * (Ratio::from_integer(l.into()) * eps + eps_prime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposeEnv {
    /// Forwards every tagged message untouched.
    Identity,
    /// The adaptive forger, carrying its candidate list across rounds.
    ListElimination,
}

impl std::str::FromStr for ComposeEnv {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(ComposeEnv::Identity),
            "list-elimination" => Ok(ComposeEnv::ListElimination),
            _ => Err(Error::InvalidArgument(format!(
                "unknown environment {s:?}; expected identity or list-elimination"
            ))),
        }
    }
}

/// What the environment sees in one authentication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RoundView {
    sent: TaggedMessage,
    forged: Option<TaggedMessage>,
    output: Option<u64>,
}

/// Full view: every round plus the recycled key handed out at the end.
type View = (Vec<RoundView>, u64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub env: ComposeEnv,
    pub r: u64,
    pub l: u64,
    #[serde(with = "serde_ratio")]
    pub distance: Ratio,
    /// r * l * eps.
    #[serde(with = "serde_ratio")]
    pub bound: Ratio,
}

fn pad_sequence(code: u64, t: u64, n: usize) -> impl Iterator<Item = u64> {
    (0..n as u32).map(move |i| (code / t.pow(i)) % t)
}

/// Plays `n` authentications. `tag_source` yields the i-th tag shown to
/// the environment and `receiver` decides the output for a forgery.
fn play(
    fam: &HashFamily,
    env: ComposeEnv,
    n: usize,
    mut tag_source: impl FnMut(usize, u64) -> Result<TaggedMessage>,
    mut receiver: impl FnMut(usize, &TaggedMessage) -> Option<u64>,
) -> Result<Vec<RoundView>> {
    let mut state = ListElimination::new(fam);
    let mut views = Vec::with_capacity(n);
    for i in 0..n {
        let sent = tag_source(i, state.message())?;
        let forged = match env {
            ComposeEnv::Identity => None,
            ComposeEnv::ListElimination => state.respond(&sent),
        };
        let output = match &forged {
            None => Some(sent.x),
            Some(f) => receiver(i, f),
        };
        state.observe(forged.is_some(), output.is_some());
        views.push(RoundView { sent, forged, output });
    }
    Ok(views)
}

/// Exact distance between r rounds of l recycled-key authentications and
/// the ideal channel, against the given environment. The real world uses
/// one k1 throughout with fresh pads per use; the ideal world shows the
/// environment uniform tags, rejects every altered message and hands out a
/// fresh uniform key at the end.
pub fn compose_simulate_exact(fam: &HashFamily, r: u64, l: u64, env: ComposeEnv) -> Result<SimulationReport> {
    compose_simulate_exact_with_budget(fam, r, l, env, Budget::default())
}

pub fn compose_simulate_exact_with_budget(
    fam: &HashFamily,
    r: u64,
    l: u64,
    env: ComposeEnv,
    budget: Budget,
) -> Result<SimulationReport> {
    check_rounds(r, l)?;
    if env == ComposeEnv::ListElimination && fam.message_count() < 2 {
        return Err(Error::InvalidArgument("the forger needs at least two messages".into()));
    }
    let n = (r * l) as usize;
    let t = fam.tag_count();
    let keys = fam.key_count();
    let paths = (t as u128)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(keys as u128))
        .unwrap_or(u128::MAX);
    budget.check(paths)?;
    let pad_codes = t.pow(n as u32);
    let w = ratio(1, keys as u128 * pad_codes as u128);

    let real: Vec<View> = (0..keys)
        .into_par_iter()
        .map(|k1| -> Result<Vec<View>> {
            let mut out = Vec::with_capacity(pad_codes as usize);
            for code in 0..pad_codes {
                let pads: Vec<u64> = pad_sequence(code, t, n).collect();
                let key = |i: usize| AuthKey { k1, k2: FieldElem::from_raw(pads[i] as u32) };
                let views = play(
                    fam,
                    env,
                    n,
                    |i, x| authenticate(fam, key(i), x),
                    |i, f| verify(fam, key(i), f).accepted(),
                )?;
                out.push((views, k1));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut ideal = Vec::with_capacity(real.len());
    for fresh in 0..keys {
        for code in 0..pad_codes {
            let tags: Vec<u64> = pad_sequence(code, t, n).collect();
            let views = play(
                fam,
                env,
                n,
                |i, x| Ok(TaggedMessage::new(x, FieldElem::from_raw(tags[i] as u32))),
                |_, _| None,
            )?;
            ideal.push((views, fresh));
        }
    }

    let to_dist = |views: Vec<View>| {
        let mut b = DistBuilder::new();
        for v in views {
            b.add(v, w.clone());
        }
        b.finish()
    };
    let distance = total_variation(&to_dist(real)?, &to_dist(ideal)?);
    let eps = measure_axu2_with_budget(fam, budget)?.epsilon;
    Ok(SimulationReport { env, r, l, distance, bound: Ratio::from_integer((r * l).into()) * eps })
}
