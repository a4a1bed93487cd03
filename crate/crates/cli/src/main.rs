use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use keyrecycle::attack::{run_attack_exact_with_budget, run_attack_montecarlo};
use keyrecycle::compose::{compose_run_with_budget, compose_simulate_exact_with_budget, ComposeEnv, ToyQkdFunctionality};
use keyrecycle::hashfam::{measure_asu2_with_budget, measure_axu2_with_budget, sample_axu2, UniversalKind, DEFAULT_BUDGET};
use keyrecycle::ratio::{format_ratio, parse_ratio};
use keyrecycle::ucsim::{
    counterexample_protocol, distance_for, impersonation_distance_scheme, worst_case_distance_scheme,
    DistanceRecord, EnvStrategy, Scheme, Substitution, WcScheme,
};
use keyrecycle::wcauth::{authenticate, encode_wire, verify, KeyStream, TaggedMessage, Verdict};
use keyrecycle::dist::Dist;
use keyrecycle::{Budget, Error, FieldCtx, FieldElem, HashFamily};

const FAMILY_GRAMMAR: &str = "family grammar: mul:m=<m> | poly:m=<m>,L=<L> | toeplitz:n=<n>,m=<m> | \
counterexample:m=<m> | table:@<path> | lift:<family>";

#[derive(Parser)]
#[command(name = "keyrecycle", version, about = "Exact measurements for Wegman-Carter authentication with a recycled hash key")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Protocol {
    Wc,
    Counterexample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Env {
    Identity,
    ListElimination,
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of enumerated cells.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_family(s: &str) -> Result<HashFamily, String> {
    HashFamily::parse(s).map_err(|e| format!("{e}\n{FAMILY_GRAMMAR}"))
}

fn parse_nonneg_ratio(s: &str) -> Result<keyrecycle::Ratio, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Measure the XOR-universal or strongly-universal parameter of a family.
    Epsilon {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        #[arg(long, default_value = "axu2")]
        kind: String,
        /// Estimate from this many random message pairs instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 256)]
        keys_per_pair: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Distance between the real protocol and the ideal channel.
    UcDistance {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        /// Hand the hash key to the environment at the end.
        #[arg(long)]
        recycle: bool,
        /// Search every environment instead of the fixed substitution.
        #[arg(long)]
        worst_case: bool,
        #[arg(long, value_enum, default_value_t = Protocol::Wc)]
        protocol: Protocol,
        #[arg(long, default_value_t = 0)]
        x: u64,
        #[arg(long, default_value_t = 1)]
        x_prime: u64,
        #[arg(long, default_value_t = 0)]
        tag_xor: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Distance achieved by injecting a forged message before anything is sent.
    Impersonate {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        #[arg(long)]
        recycle: bool,
        #[arg(long, value_enum, default_value_t = Protocol::Wc)]
        protocol: Protocol,
        /// Forged message; with --t, measures this one value instead of the maximum.
        #[arg(long, requires = "t")]
        x: Option<u64>,
        #[arg(long, requires = "x")]
        t: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// List-elimination forgery: success and key leakage per round.
    Attack {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        #[arg(long)]
        rounds: u64,
        /// Also run this many Monte Carlo trials per round count.
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Error ledger for r key-distribution rounds of l authentications each.
    Compose {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        rounds: u64,
        #[arg(long, default_value = "0", value_parser = parse_nonneg_ratio)]
        qkd_eps: keyrecycle::Ratio,
        /// Also measure the exact distance against this environment.
        #[arg(long, value_enum)]
        simulate: Option<Env>,
        #[command(flatten)]
        common: Common,
    },
    /// Authenticate, encode, verify and tamper with a few messages.
    Roundtrip {
        #[arg(long, value_parser = parse_family, help = FAMILY_GRAMMAR)]
        family: HashFamily,
        #[arg(long)]
        k1: Option<u64>,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long, default_value_t = 1)]
        rounds: u64,
        #[command(flatten)]
        common: Common,
    },
    /// GF(2^m) multiplication table.
    Fieldtab {
        #[arg(long)]
        m: u32,
        /// Reduction polynomial, decimal or 0x-prefixed hex.
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

struct Output {
    json: Value,
    csv: String,
    default: Format,
}

fn kv_csv(pairs: &[(&str, String)]) -> String {
    let head: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
    let row: Vec<&str> = pairs.iter().map(|(_, v)| v.as_str()).collect();
    format!("{}\n{}\n", head.join(","), row.join(","))
}

fn bits(x: f64) -> String {
    format!("{x:.12}")
}

fn scheme_for(fam: &HashFamily, protocol: Protocol, recycle: bool) -> keyrecycle::Result<Box<dyn Scheme>> {
    match protocol {
        Protocol::Wc => Ok(Box::new(WcScheme::new(fam, recycle))),
        Protocol::Counterexample => {
            if !matches!(fam.kind(), keyrecycle::hashfam::FamilyKind::Counterexample) {
                return Err(Error::InvalidArgument(
                    "--protocol counterexample needs a counterexample:m=<m> family".into(),
                ));
            }
            Ok(Box::new(counterexample_protocol(fam.tag_bits())?))
        }
    }
}

fn relevant_epsilon(fam: &HashFamily, recycle: bool, protocol: Protocol, budget: Budget) -> keyrecycle::Result<keyrecycle::Ratio> {
    if recycle || protocol == Protocol::Counterexample {
        Ok(measure_axu2_with_budget(fam, budget)?.epsilon)
    } else {
        Ok(measure_asu2_with_budget(fam, budget)?.epsilon)
    }
}

fn mode_label(recycle: bool, worst_case: bool) -> String {
    let base = if recycle { "recycling" } else { "standard" };
    if worst_case {
        format!("{base}/worst-case")
    } else {
        base.to_string()
    }
}

fn epsilon(fam: &HashFamily, kind: &str, sample: Option<usize>, keys_per_pair: usize, c: &Common) -> keyrecycle::Result<Output> {
    let kind: UniversalKind = kind.parse()?;
    if let Some(pairs) = sample {
        if kind != UniversalKind::Axu2 {
            return Err(Error::InvalidArgument("sampling is only available for axu2".into()));
        }
        let s = sample_axu2(fam, pairs, keys_per_pair, c.seed)?;
        let json = json!({
            "family": fam.descriptor(),
            "kind": "axu2",
            "estimate": s.estimate,
            "interval": [s.interval.0, s.interval.1],
            "pairs": s.pairs,
            "keys_per_pair": s.keys_per_pair,
            "seed": s.seed,
        });
        let csv = kv_csv(&[
            ("family", fam.descriptor()),
            ("kind", "axu2".into()),
            ("estimate", bits(s.estimate)),
            ("lower", bits(s.interval.0)),
            ("upper", bits(s.interval.1)),
        ]);
        return Ok(Output { json, csv, default: Format::Json });
    }
    let budget = Budget(c.budget);
    let report = match kind {
        UniversalKind::Axu2 => measure_axu2_with_budget(fam, budget)?,
        UniversalKind::Asu2 => measure_asu2_with_budget(fam, budget)?,
    };
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["family"] = json!(fam.descriptor());
    json["keys"] = json!(fam.key_count());
    json["messages"] = json!(fam.message_count());
    json["tags"] = json!(fam.tag_count());
    let witness = report.witness.as_ref().map(|w| serde_json::to_string(w).expect("witness serializes"));
    let csv = kv_csv(&[
        ("family", fam.descriptor()),
        ("kind", json["kind"].as_str().unwrap_or_default().to_string()),
        ("epsilon", format_ratio(&report.epsilon)),
        ("witness", witness.map(|w| format!("\"{}\"", w.replace('"', "\"\""))).unwrap_or_default()),
    ]);
    Ok(Output { json, csv, default: Format::Json })
}

#[allow(clippy::too_many_arguments)]
fn uc_distance(
    fam: &HashFamily,
    recycle: bool,
    worst_case: bool,
    protocol: Protocol,
    x: u64,
    x_prime: u64,
    tag_xor: u32,
    c: &Common,
) -> keyrecycle::Result<Output> {
    let budget = Budget(c.budget);
    let scheme = scheme_for(fam, protocol, recycle)?;
    let eps = relevant_epsilon(fam, recycle, protocol, budget)?;
    let mode = mode_label(recycle, worst_case);
    let (record, extra) = if worst_case {
        let wc = worst_case_distance_scheme(scheme.as_ref(), budget)?;
        let record = DistanceRecord::new(&scheme.label(), &mode, &eps, &wc.distance, &wc.witness);
        let extra = json!({
            "substitution_distance": format_ratio(&wc.substitution_distance),
            "impersonation_distance": format_ratio(&wc.impersonation_distance),
        });
        (record, Some(extra))
    } else {
        fam.check_message(x)?;
        let tag_xor = fam.field().elem(tag_xor as u64)?;
        let env = EnvStrategy::substitution(Dist::point(x), Substitution::ReplaceMessage { x_prime, tag_xor });
        let d = distance_for(scheme.as_ref(), &env, budget)?;
        (DistanceRecord::new(&scheme.label(), &mode, &eps, &d, &env), None)
    };
    let csv = kv_csv(&[
        ("family", record.family.clone()),
        ("mode", record.mode.clone()),
        ("epsilon_measured", record.epsilon_measured.clone()),
        ("distance", record.distance.clone()),
    ]);
    let mut json = serde_json::to_value(&record).expect("record serializes");
    if let Some(Value::Object(extra)) = extra {
        for (k, v) in extra {
            json[k] = v;
        }
    }
    Ok(Output { json, csv, default: Format::Json })
}

fn impersonate(fam: &HashFamily, recycle: bool, protocol: Protocol, forged: Option<(u64, u64)>, c: &Common) -> keyrecycle::Result<Output> {
    let budget = Budget(c.budget);
    let scheme = scheme_for(fam, protocol, recycle)?;
    let (json, csv) = match forged {
        Some((x, t)) => {
            let y = TaggedMessage::new(x, fam.field().elem(t)?);
            let d = impersonation_distance_scheme(scheme.as_ref(), y, budget)?;
            let json = json!({
                "scheme": scheme.label(),
                "y_prime": [x, t],
                "impersonation_distance": format_ratio(&d),
            });
            let csv = kv_csv(&[
                ("scheme", scheme.label()),
                ("x", x.to_string()),
                ("t", t.to_string()),
                ("impersonation_distance", format_ratio(&d)),
            ]);
            (json, csv)
        }
        None => {
            let wc = worst_case_distance_scheme(scheme.as_ref(), budget)?;
            let w = wc.impersonation_witness;
            let json = json!({
                "scheme": scheme.label(),
                "impersonation_distance": format_ratio(&wc.impersonation_distance),
                "witness": [w.x, w.t.value()],
                "substitution_distance": format_ratio(&wc.substitution_distance),
                "impersonation_le_substitution": wc.impersonation_distance <= wc.substitution_distance,
            });
            let csv = kv_csv(&[
                ("scheme", scheme.label()),
                ("impersonation_distance", format_ratio(&wc.impersonation_distance)),
                ("witness_x", w.x.to_string()),
                ("witness_t", w.t.value().to_string()),
                ("substitution_distance", format_ratio(&wc.substitution_distance)),
            ]);
            (json, csv)
        }
    };
    Ok(Output { json, csv, default: Format::Json })
}

fn attack(fam: &HashFamily, rounds: u64, trials: Option<u64>, c: &Common) -> keyrecycle::Result<Output> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("--rounds must be at least 1".into()));
    }
    let budget = Budget(c.budget);
    let mut header = String::from("l,success_exact,success_formula,entropy_exact,entropy_formula");
    if trials.is_some() {
        header.push_str(",mc_successes,mc_trials,mc_within_3sigma");
    }
    let mut csv = header + "\n";
    let mut rows = Vec::new();
    for l in 1..=rounds {
        let rep = run_attack_exact_with_budget(fam, l, budget)?;
        let formula = rep.success_formula(fam.tag_count());
        let mut row = json!({
            "l": l,
            "success_exact": format_ratio(&rep.success_prob),
            "success_formula": format_ratio(&formula),
            "per_round_conditional": format_ratio(rep.per_round_conditional.last().expect("l >= 1")),
            "entropy_exact": rep.entropy_bits,
            "entropy_formula": rep.entropy_formula_bits,
            "entropy_exact_expr": rep.entropy.computed.to_string(),
            "entropy_formula_expr": rep.entropy.formula.to_string(),
            "entropy_matches_formula": rep.entropy.matches(),
        });
        csv.push_str(&format!(
            "{l},{},{},{},{}",
            format_ratio(&rep.success_prob),
            format_ratio(&formula),
            bits(rep.entropy_bits),
            bits(rep.entropy_formula_bits)
        ));
        if let Some(n) = trials {
            let mc = run_attack_montecarlo(fam, l, n, c.seed)?;
            csv.push_str(&format!(",{},{},{}", mc.successes, mc.trials, mc.within_interval));
            row["monte_carlo"] = serde_json::to_value(&mc).expect("report serializes");
        }
        csv.push('\n');
        rows.push(row);
    }
    let json = json!({ "family": fam.descriptor(), "rounds": rows });
    Ok(Output { json, csv, default: Format::Csv })
}

fn compose(fam: &HashFamily, r: u64, rounds: u64, qkd_eps: keyrecycle::Ratio, simulate: Option<Env>, c: &Common) -> keyrecycle::Result<Output> {
    let budget = Budget(c.budget);
    let out_bits = u32::try_from(rounds.saturating_mul(fam.tag_bits() as u64)).unwrap_or(u32::MAX);
    let qkd = ToyQkdFunctionality::new(out_bits, qkd_eps)?;
    let rep = compose_run_with_budget(fam, r, rounds, &qkd, budget)?;
    let bound = format_ratio(&rep.bound);
    let mut csv = rep.ledger.to_csv();
    csv.push_str(&format!("total,bound,{bound},{bound}\n"));
    let mut json = json!({
        "family": fam.descriptor(),
        "r": r,
        "l": rounds,
        "epsilon": format_ratio(&rep.epsilon),
        "qkd_eps": format_ratio(&qkd.eps_prime),
        "ledger": serde_json::to_value(&rep.ledger).expect("ledger serializes"),
        "bound": bound,
    });
    if let Some(env) = simulate {
        let env = match env {
            Env::Identity => ComposeEnv::Identity,
            Env::ListElimination => ComposeEnv::ListElimination,
        };
        let sim = compose_simulate_exact_with_budget(fam, r, rounds, env, budget)?;
        let label = serde_json::to_value(env).expect("env serializes");
        let label = label.as_str().unwrap_or_default();
        csv.push_str(&format!("total,measured-{label},{},{}\n", format_ratio(&sim.distance), format_ratio(&sim.bound)));
        json["simulation"] = serde_json::to_value(&sim).expect("report serializes");
    }
    Ok(Output { json, csv, default: Format::Csv })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn roundtrip(fam: &HashFamily, k1: Option<u64>, x: Option<u64>, rounds: u64, c: &Common) -> keyrecycle::Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let k1 = match k1 {
        Some(k) => k,
        None => rng.random_range(0..fam.key_count()),
    };
    let pads: Vec<u64> = (0..rounds).map(|_| rng.random_range(0..fam.tag_count())).collect();
    let mut stream = KeyStream::new(fam, k1, pads.iter().copied())?;
    let mut csv = String::from("round,x,pad,tag,wire,accepted,tamper_rejected\n");
    let mut rows = Vec::new();
    let mut ok = true;
    for i in 0..rounds {
        let msg = match x {
            Some(m) => m,
            None => rng.random_range(0..fam.message_count()),
        };
        let key = stream.next_key()?;
        let y = authenticate(fam, key, msg)?;
        let wire = hex(&encode_wire(fam, &y)?);
        let accepted = verify(fam, key, &y) == Verdict::Accept(msg);
        let tampered = TaggedMessage::new(msg, y.t ^ FieldElem::ONE);
        let tamper_rejected = verify(fam, key, &tampered) == Verdict::Reject;
        ok &= accepted && tamper_rejected;
        csv.push_str(&format!(
            "{},{msg},{},{},{wire},{accepted},{tamper_rejected}\n",
            i + 1,
            key.k2.value(),
            y.t.value()
        ));
        rows.push(json!({
            "round": i + 1,
            "x": msg,
            "pad": key.k2.value(),
            "tag": y.t.value(),
            "wire": wire,
            "accepted": accepted,
            "tamper_rejected": tamper_rejected,
        }));
    }
    let json = json!({
        "family": fam.descriptor(),
        "k1": k1,
        "seed": c.seed,
        "rounds": rows,
        "pad_bits_consumed": stream.consumed_bits(),
        "ok": ok,
    });
    Ok(Output { json, csv, default: Format::Json })
}

fn parse_modulus(s: &str) -> keyrecycle::Result<u32> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::InvalidArgument(format!("bad modulus `{s}`")))
}

fn fieldtab(m: u32, modulus: Option<&str>, c: &Common) -> keyrecycle::Result<Output> {
    let field = match modulus {
        Some(s) => FieldCtx::with_modulus(m, parse_modulus(s)?)?,
        None => FieldCtx::new(m)?,
    };
    let order = field.order() as u128;
    Budget(c.budget).check(order * order)?;
    let mut csv = String::from("a,b,product\n");
    let mut table = Vec::new();
    for a in field.elements() {
        let mut row = Vec::new();
        for b in field.elements() {
            let p = field.mul(a, b);
            csv.push_str(&format!("{},{},{}\n", a.value(), b.value(), p.value()));
            row.push(p.value());
        }
        table.push(row);
    }
    let json = json!({
        "m": m,
        "modulus": format!("{:#x}", field.modulus()),
        "product": table,
    });
    Ok(Output { json, csv, default: Format::Csv })
}

fn run(cli: Cli) -> keyrecycle::Result<(Output, Common)> {
    Ok(match cli.command {
        Command::Epsilon { family, kind, sample, keys_per_pair, common } => {
            (epsilon(&family, &kind, sample, keys_per_pair, &common)?, common)
        }
        Command::UcDistance { family, recycle, worst_case, protocol, x, x_prime, tag_xor, common } => {
            (uc_distance(&family, recycle, worst_case, protocol, x, x_prime, tag_xor, &common)?, common)
        }
        Command::Impersonate { family, recycle, protocol, x, t, common } => {
            (impersonate(&family, recycle, protocol, x.zip(t), &common)?, common)
        }
        Command::Attack { family, rounds, trials, common } => (attack(&family, rounds, trials, &common)?, common),
        Command::Compose { family, r, rounds, qkd_eps, simulate, common } => {
            (compose(&family, r, rounds, qkd_eps, simulate, &common)?, common)
        }
        Command::Roundtrip { family, k1, x, rounds, common } => (roundtrip(&family, k1, x, rounds, &common)?, common),
        Command::Fieldtab { m, modulus, common } => (fieldtab(m, modulus.as_deref(), &common)?, common),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, common) = match run(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::BudgetExceeded { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            };
        }
    };
    let text = match common.format.unwrap_or(output.default) {
        Format::Json => serde_json::to_string_pretty(&output.json).expect("json serializes") + "\n",
        Format::Csv => output.csv,
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
