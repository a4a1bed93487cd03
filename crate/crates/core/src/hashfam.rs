//! Keyed hash families over GF(2^m) and exact measurement of their
//! almost-XOR-universal and almost-strongly-universal parameters.
//!
//! Keys and messages are plain indices (`0..key_count()` and
//! `0..message_count()`); tags are [`FieldElem`]s of the family's field.
//! Every measurement here is a brute-force enumeration over an evaluation
//! table, so the results are exact rationals.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::ratio::{ratio, Ratio};

/// Default cap on evaluation-table cells (keys x messages) for exact mode.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded { needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

/// An explicit key-by-message tag table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFamily {
    messages: Vec<String>,
    /// `rows[k][x]` is the tag of message `x` under key `k`.
    rows: Vec<Vec<u32>>,
    source: Option<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct TableFile {
    keys: usize,
    messages: Vec<serde_json::Value>,
    table: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
}

impl TableFamily {
    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// h_k(x) = k * x in GF(2^m).
    Mul,
    /// h_k(x_1..x_L) = sum_i x_i k^i, no constant term.
    Poly { blocks: u32 },
    /// h_k(x) = T_k x over GF(2), T_k the m x n Toeplitz matrix of an
    /// (n + m - 1)-bit key.
    Toeplitz { n: u32 },
    Table(TableFamily),
    /// Two messages: h_k(0) = 0, h_k(1) = k + 1 ranges over the nonzero tags.
    Counterexample,
    /// g_{k1,k2}(x) = h_{k1}(x) xor k2, key index k1 * |T| + k2.
    Lifted(Box<HashFamily>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    kind: FamilyKind,
    field: FieldCtx,
}

impl HashFamily {
    pub fn mul(m: u32) -> Result<Self> {
        Ok(HashFamily { kind: FamilyKind::Mul, field: FieldCtx::new(m)? })
    }

    pub fn poly(m: u32, blocks: u32) -> Result<Self> {
        if blocks == 0 || m * blocks > 32 {
            return Err(Error::InvalidArgument(format!(
                "poly family needs 1 <= L and m*L <= 32 (got m={m}, L={blocks})"
            )));
        }
        Ok(HashFamily { kind: FamilyKind::Poly { blocks }, field: FieldCtx::new(m)? })
    }

    pub fn toeplitz(n: u32, m: u32) -> Result<Self> {
        if n == 0 || n > 32 || n + m - 1 > 48 {
            return Err(Error::InvalidArgument(format!(
                "toeplitz family needs 1 <= n <= 32 and n+m-1 <= 48 (got n={n}, m={m})"
            )));
        }
        Ok(HashFamily { kind: FamilyKind::Toeplitz { n }, field: FieldCtx::new(m)? })
    }

    pub fn counterexample(m: u32) -> Result<Self> {
        Ok(HashFamily { kind: FamilyKind::Counterexample, field: FieldCtx::new(m)? })
    }

    /// Builds a table family. `rows[k][x]` must be an m-bit tag.
    pub fn table(m: u32, messages: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Self> {
        Self::table_with_source(m, messages, rows, None)
    }

    fn table_with_source(
        m: u32,
        messages: Vec<String>,
        rows: Vec<Vec<u32>>,
        source: Option<String>,
    ) -> Result<Self> {
        let field = FieldCtx::new(m)?;
        if rows.is_empty() {
            return Err(Error::Table("at least one key is required".into()));
        }
        if messages.is_empty() {
            return Err(Error::Table("at least one message is required".into()));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != messages.len() {
                return Err(Error::Table(format!(
                    "row {k} has {} tags, expected {}",
                    row.len(),
                    messages.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t > field.mask()) {
                return Err(Error::Table(format!("tag {t} in row {k} exceeds {m} bits")));
            }
        }
        Ok(HashFamily {
            kind: FamilyKind::Table(TableFamily { messages, rows, source }),
            field,
        })
    }

    /// Parses the JSON table format `{keys, messages, table, m?}`. Without
    /// `m` the tag width is the smallest that fits every tag.
    pub fn table_from_json(json: &str) -> Result<Self> {
        Self::table_from_json_src(json, None)
    }

    pub fn table_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::table_from_json_src(&json, Some(path.display().to_string()))
    }

    fn table_from_json_src(json: &str, source: Option<String>) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(json).map_err(|e| Error::Table(e.to_string()))?;
        if file.table.len() != file.keys {
            return Err(Error::Table(format!(
                "`keys` is {} but the table has {} rows",
                file.keys,
                file.table.len()
            )));
        }
        let max_tag = file.table.iter().flatten().copied().max().unwrap_or(0);
        let m = match file.m {
            Some(m) => m,
            None => (64 - max_tag.leading_zeros()).max(1),
        };
        if max_tag >= 1u64 << m.min(63) {
            return Err(Error::Table(format!("tag {max_tag} exceeds {m} bits")));
        }
        let messages = file
            .messages
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        let rows = file
            .table
            .into_iter()
            .map(|r| r.into_iter().map(|t| t as u32).collect())
            .collect();
        Self::table_with_source(m, messages, rows, source)
    }

    /// Serializes any family's evaluation table in the JSON table format.
    pub fn to_table_json(&self) -> String {
        let messages = (0..self.message_count())
            .map(|x| serde_json::Value::String(self.message_label(x)))
            .collect();
        let table = (0..self.key_count())
            .map(|k| (0..self.message_count()).map(|x| self.eval_raw(k, x).value() as u64).collect())
            .collect();
        let file = TableFile {
            keys: self.key_count() as usize,
            messages,
            table,
            m: Some(self.field.width()),
        };
        serde_json::to_string_pretty(&file).expect("table serialization")
    }

    /// The family g_{k1,k2}(x) = h_{k1}(x) xor k2.
    pub fn lift(&self) -> HashFamily {
        HashFamily { kind: FamilyKind::Lifted(Box::new(self.clone())), field: self.field }
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn tag_bits(&self) -> u32 {
        self.field.width()
    }

    pub fn tag_count(&self) -> u64 {
        self.field.order()
    }

    pub fn key_count(&self) -> u64 {
        let m = self.field.width();
        match &self.kind {
            FamilyKind::Mul | FamilyKind::Poly { .. } => self.field.order(),
            FamilyKind::Toeplitz { n } => 1u64 << (n + m - 1),
            FamilyKind::Table(t) => t.rows.len() as u64,
            FamilyKind::Counterexample => self.field.order() - 1,
            FamilyKind::Lifted(inner) => inner.key_count() * self.field.order(),
        }
    }

    pub fn message_count(&self) -> u64 {
        match self.message_bits_exact() {
            Some(bits) => 1u64 << bits,
            None => self.table_message_count(),
        }
    }

    fn table_message_count(&self) -> u64 {
        match &self.kind {
            FamilyKind::Table(t) => t.messages.len() as u64,
            FamilyKind::Lifted(inner) => inner.table_message_count(),
            _ => 0,
        }
    }

    /// Bit width of the message space when it is a full {0,1}^b.
    fn message_bits_exact(&self) -> Option<u32> {
        let m = self.field.width();
        match &self.kind {
            FamilyKind::Mul => Some(m),
            FamilyKind::Poly { blocks } => Some(m * blocks),
            FamilyKind::Toeplitz { n } => Some(*n),
            FamilyKind::Counterexample => Some(1),
            FamilyKind::Table(_) => None,
            FamilyKind::Lifted(inner) => inner.message_bits_exact(),
        }
    }

    /// Bits needed to write any message index.
    pub fn message_bits(&self) -> u32 {
        self.message_bits_exact().unwrap_or_else(|| {
            let n = self.message_count();
            (64 - (n - 1).leading_zeros()).max(1)
        })
    }

    pub fn message_label(&self, x: u64) -> String {
        match &self.kind {
            FamilyKind::Table(t) => t.messages[x as usize].clone(),
            FamilyKind::Lifted(inner) => inner.message_label(x),
            _ => x.to_string(),
        }
    }

    /// Splits a lifted key index into (k1, k2).
    pub fn split_lifted_key(&self, k: u64) -> Option<(u64, FieldElem)> {
        match &self.kind {
            FamilyKind::Lifted(_) => {
                let t = self.tag_count();
                Some((k / t, FieldElem::from_raw((k % t) as u32)))
            }
            _ => None,
        }
    }

    pub fn check_key(&self, k: u64) -> Result<()> {
        if k >= self.key_count() {
            return Err(Error::KeyOutOfRange { key: k, size: self.key_count() });
        }
        Ok(())
    }

    pub fn check_message(&self, x: u64) -> Result<()> {
        if x >= self.message_count() {
            return Err(Error::MessageOutOfRange { msg: x, size: self.message_count() });
        }
        Ok(())
    }

    /// h_k(x), with range checks on both indices.
    pub fn eval(&self, k: u64, x: u64) -> Result<FieldElem> {
        self.check_key(k)?;
        self.check_message(x)?;
        Ok(self.eval_raw(k, x))
    }

    /// h_k(x) for indices already known to be in range.
    pub(crate) fn eval_raw(&self, k: u64, x: u64) -> FieldElem {
        let f = &self.field;
        let m = f.width();
        match &self.kind {
            FamilyKind::Mul => f.mul(FieldElem::from_raw(k as u32), FieldElem::from_raw(x as u32)),
            FamilyKind::Poly { blocks } => {
                let key = FieldElem::from_raw(k as u32);
                let mask = f.mask() as u64;
                let mut acc = FieldElem::ZERO;
                let mut power = key;
                for i in 0..*blocks {
                    let block = FieldElem::from_raw(((x >> (m * i)) & mask) as u32);
                    acc ^= f.mul(block, power);
                    power = f.mul(power, key);
                }
                acc
            }
            FamilyKind::Toeplitz { n } => {
                // T[i][j] = key bit (i + n - 1 - j)
                let mut out = 0u32;
                for i in 0..m {
                    let mut bit = 0u64;
                    for j in 0..*n {
                        bit ^= ((k >> (i + n - 1 - j)) & 1) & ((x >> j) & 1);
                    }
                    out |= (bit as u32) << i;
                }
                FieldElem::from_raw(out)
            }
            FamilyKind::Table(t) => FieldElem::from_raw(t.rows[k as usize][x as usize]),
            FamilyKind::Counterexample => {
                if x == 0 {
                    FieldElem::ZERO
                } else {
                    FieldElem::from_raw(k as u32 + 1)
                }
            }
            FamilyKind::Lifted(inner) => {
                let t = self.tag_count();
                inner.eval_raw(k / t, x) ^ FieldElem::from_raw((k % t) as u32)
            }
        }
    }

    /// Canonical descriptor string, e.g. `poly:m=4,L=2`.
    pub fn descriptor(&self) -> String {
        let m = self.field.width();
        match &self.kind {
            FamilyKind::Mul => format!("mul:m={m}"),
            FamilyKind::Poly { blocks } => format!("poly:m={m},L={blocks}"),
            FamilyKind::Toeplitz { n } => format!("toeplitz:n={n},m={m}"),
            FamilyKind::Table(t) => match &t.source {
                Some(path) => format!("table:@{path}"),
                None => "table:inline".to_string(),
            },
            FamilyKind::Counterexample => format!("counterexample:m={m}"),
            FamilyKind::Lifted(inner) => format!("lift:{}", inner.descriptor()),
        }
    }

    /// Parses a descriptor: `mul:m=2`, `poly:m=4,L=2`, `toeplitz:n=4,m=3`,
    /// `table:@file.json`, `counterexample:m=3`, or `lift:<descriptor>`.
    pub fn parse(desc: &str) -> Result<Self> {
        let err = |reason: &str| Error::Descriptor { desc: desc.to_string(), reason: reason.into() };
        let desc = desc.trim();
        let (kind, rest) = desc.split_once(':').ok_or_else(|| err("expected `<kind>:<params>`"))?;
        match kind {
            "lift" => Ok(Self::parse(rest)?.lift()),
            "table" => {
                let path = rest.strip_prefix('@').ok_or_else(|| err("table needs `@<path>`"))?;
                Self::table_from_file(path)
            }
            "mul" | "poly" | "toeplitz" | "counterexample" => {
                let mut m = None;
                let mut blocks = None;
                let mut n = None;
                for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
                    let (key, val) =
                        part.split_once('=').ok_or_else(|| err("parameters are `name=value`"))?;
                    let val: u32 =
                        val.trim().parse().map_err(|_| err("parameter values are integers"))?;
                    match (kind, key.trim()) {
                        (_, "m") => m = Some(val),
                        ("poly", "L") => blocks = Some(val),
                        ("toeplitz", "n") => n = Some(val),
                        (_, other) => {
                            return Err(err(&format!("unknown parameter `{other}` for {kind}")))
                        }
                    }
                }
                let m = m.ok_or_else(|| err("missing `m`"))?;
                match kind {
                    "mul" => Self::mul(m),
                    "poly" => Self::poly(m, blocks.ok_or_else(|| err("missing `L`"))?),
                    "toeplitz" => Self::toeplitz(n.ok_or_else(|| err("missing `n`"))?, m),
                    _ => Self::counterexample(m),
                }
            }
            other => Err(err(&format!("unknown family kind `{other}`"))),
        }
    }
}

impl fmt::Display for HashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for HashFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HashFamily::parse(s)
    }
}

/// Free-function form of [`HashFamily::eval`].
pub fn hash_eval(fam: &HashFamily, k: u64, x: u64) -> Result<FieldElem> {
    fam.eval(k, x)
}

pub fn lift_to_asu2(fam: &HashFamily) -> HashFamily {
    fam.lift()
}

/// Precomputed tags, stored message-major: `tags[x * keys + k]`.
#[derive(Debug, Clone)]
pub struct EvalTable {
    keys: usize,
    messages: usize,
    tag_count: usize,
    tags: Vec<u32>,
}

impl EvalTable {
    pub fn build(fam: &HashFamily, budget: Budget) -> Result<Self> {
        let keys = fam.key_count();
        let messages = fam.message_count();
        budget.check(keys as u128 * messages as u128)?;
        let (keys, messages) = (keys as usize, messages as usize);
        let mut tags = vec![0u32; keys * messages];
        tags.par_chunks_mut(keys).enumerate().for_each(|(x, col)| {
            for (k, slot) in col.iter_mut().enumerate() {
                *slot = fam.eval_raw(k as u64, x as u64).value();
            }
        });
        Ok(EvalTable { keys, messages, tag_count: fam.tag_count() as usize, tags })
    }

    pub fn keys(&self) -> usize {
        self.keys
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn column(&self, x: usize) -> &[u32] {
        &self.tags[x * self.keys..(x + 1) * self.keys]
    }

    pub fn get(&self, k: usize, x: usize) -> u32 {
        self.tags[x * self.keys + k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniversalKind {
    Axu2,
    Asu2,
}

impl FromStr for UniversalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "axu2" => Ok(UniversalKind::Axu2),
            "asu2" => Ok(UniversalKind::Asu2),
            other => Err(Error::InvalidArgument(format!("unknown kind `{other}` (axu2|asu2)"))),
        }
    }
}

/// The pair of messages (and target tags) at which the maximum is attained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Xor { x1: u64, x2: u64, t: u32 },
    Strong { x1: u64, x2: u64, t1: u32, t2: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub kind: UniversalKind,
    #[serde(with = "crate::ratio::serde_ratio")]
    pub epsilon: Ratio,
    /// `None` when the message space has a single element.
    pub witness: Option<Witness>,
}

/// Best (count, x1, x2, tag-cell) for a pair scan; ties resolve to the
/// lexicographically smallest (x1, x2, cell).
type PairBest = (u64, usize, usize, usize);

fn better(a: PairBest, b: PairBest) -> PairBest {
    if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2, b.3) < (a.1, a.2, a.3)) {
        b
    } else {
        a
    }
}

/// For each pair x1 < x2, count keys per cell `cell(t1, t2)` and keep the
/// largest count.
fn scan_pairs(
    table: &EvalTable,
    cells: usize,
    cell: impl Fn(u32, u32) -> usize + Sync,
) -> Option<PairBest> {
    let n = table.messages();
    (0..n)
        .into_par_iter()
        .map_init(
            || vec![0u64; cells],
            |counts, x1| {
                let mut best: Option<PairBest> = None;
                let c1 = table.column(x1);
                for x2 in x1 + 1..n {
                    let c2 = table.column(x2);
                    for (a, b) in c1.iter().zip(c2) {
                        counts[cell(*a, *b)] += 1;
                    }
                    for (a, b) in c1.iter().zip(c2) {
                        let idx = cell(*a, *b);
                        let c = counts[idx];
                        if c != 0 {
                            let cand = (c, x1, x2, idx);
                            best = Some(best.map_or(cand, |cur| better(cur, cand)));
                            counts[idx] = 0;
                        }
                    }
                }
                best
            },
        )
        .reduce(|| None, |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(better(a, b)),
            (a, None) => a,
            (None, b) => b,
        })
}

pub fn measure_axu2(fam: &HashFamily) -> Result<EpsilonReport> {
    measure_axu2_with_budget(fam, Budget::default())
}

/// max over x1 != x2 and t of Pr_k[h_k(x1) xor h_k(x2) = t].
pub fn measure_axu2_with_budget(fam: &HashFamily, budget: Budget) -> Result<EpsilonReport> {
    let table = EvalTable::build(fam, budget)?;
    Ok(axu2_from_table(&table))
}

pub fn axu2_from_table(table: &EvalTable) -> EpsilonReport {
    let best = scan_pairs(table, table.tag_count, |a, b| (a ^ b) as usize);
    let keys = table.keys() as u128;
    match best {
        None => EpsilonReport { kind: UniversalKind::Axu2, epsilon: ratio(0, 1), witness: None },
        Some((count, x1, x2, t)) => EpsilonReport {
            kind: UniversalKind::Axu2,
            epsilon: ratio(count as u128, keys),
            witness: Some(Witness::Xor { x1: x1 as u64, x2: x2 as u64, t: t as u32 }),
        },
    }
}

pub fn measure_asu2(fam: &HashFamily) -> Result<EpsilonReport> {
    measure_asu2_with_budget(fam, Budget::default())
}

/// max over x1 != x2, t1, t2 of |T| * Pr_k[h_k(x1) = t1 and h_k(x2) = t2].
pub fn measure_asu2_with_budget(fam: &HashFamily, budget: Budget) -> Result<EpsilonReport> {
    let t = fam.tag_count() as usize;
    let cells = t.checked_mul(t).filter(|&c| c <= 1 << 24).ok_or_else(|| {
        Error::BudgetExceeded { needed: (t as u128) * (t as u128), budget: 1 << 24 }
    })?;
    let table = EvalTable::build(fam, budget)?;
    let best = scan_pairs(&table, cells, |a, b| a as usize * t + b as usize);
    let keys = table.keys() as u128;
    Ok(match best {
        None => EpsilonReport { kind: UniversalKind::Asu2, epsilon: ratio(0, 1), witness: None },
        Some((count, x1, x2, idx)) => EpsilonReport {
            kind: UniversalKind::Asu2,
            epsilon: ratio(count as u128 * t as u128, keys),
            witness: Some(Witness::Strong {
                x1: x1 as u64,
                x2: x2 as u64,
                t1: (idx / t) as u32,
                t2: (idx % t) as u32,
            }),
        },
    })
}

/// Pr_k[h_k(x) = t] for every message and tag, as counts over keys.
pub fn tag_marginals(fam: &HashFamily, budget: Budget) -> Result<Vec<Vec<u64>>> {
    let table = EvalTable::build(fam, budget)?;
    Ok((0..table.messages())
        .map(|x| {
            let mut counts = vec![0u64; fam.tag_count() as usize];
            for &t in table.column(x) {
                counts[t as usize] += 1;
            }
            counts
        })
        .collect())
}

/// Result of the explicitly requested sampling estimator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledEpsilon {
    pub kind: UniversalKind,
    /// Largest empirical collision frequency over the sampled pairs.
    pub estimate: f64,
    /// 3-sigma binomial interval around `estimate`.
    pub interval: (f64, f64),
    pub pairs: usize,
    pub keys_per_pair: usize,
    pub seed: u64,
}

/// Monte Carlo estimate of the AXU2 parameter for families too large to
/// enumerate. Only sampled pairs are inspected, so the estimate is a lower
/// bound on the true maximum up to sampling noise.
pub fn sample_axu2(fam: &HashFamily, pairs: usize, keys_per_pair: usize, seed: u64) -> Result<SampledEpsilon> {
    let n = fam.message_count();
    if n < 2 || pairs == 0 || keys_per_pair == 0 {
        return Err(Error::InvalidArgument(
            "sampling needs at least two messages, one pair and one key".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0u64;
    let mut counts = std::collections::HashMap::new();
    for _ in 0..pairs {
        let x1 = rng.random_range(0..n);
        let mut x2 = rng.random_range(0..n - 1);
        if x2 >= x1 {
            x2 += 1;
        }
        counts.clear();
        for _ in 0..keys_per_pair {
            let k = rng.random_range(0..fam.key_count());
            let d = fam.eval_raw(k, x1) ^ fam.eval_raw(k, x2);
            *counts.entry(d).or_insert(0u64) += 1;
        }
        best = best.max(counts.values().copied().max().unwrap_or(0));
    }
    let p = best as f64 / keys_per_pair as f64;
    let half = 3.0 * (p * (1.0 - p) / keys_per_pair as f64).sqrt();
    Ok(SampledEpsilon {
        kind: UniversalKind::Axu2,
        estimate: p,
        interval: ((p - half).max(0.0), (p + half).min(1.0)),
        pairs,
        keys_per_pair,
        seed,
    })
}
