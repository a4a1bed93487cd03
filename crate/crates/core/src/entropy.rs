//! Exact base-2 logarithms.
//!
//! A [`Log2Sum`] is a finite sum of rational multiples of log2(p) over
//! primes p. Since the logs of distinct primes are linearly independent over
//! the rationals, two such sums are equal as reals iff their coefficient maps
//! are equal, so entropies of rational distributions compare exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Signed, ToPrimitive, Zero};

use crate::dist::Dist;
use crate::ratio::Ratio;

#[derive(Debug, Clone, Default)]
pub struct Log2Sum {
    coeffs: BTreeMap<u64, Ratio>,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Log2Sum {
    pub fn zero() -> Self {
        Log2Sum::default()
    }

    /// log2(n) for n >= 1.
    pub fn log2(n: u64) -> Self {
        assert!(n >= 1, "log2 of zero");
        let mut s = Log2Sum::zero();
        for (p, e) in factor(n) {
            s.add_term(p, Ratio::from_integer(BigInt::from(e)));
        }
        s
    }

    /// log2(num / den).
    pub fn log2_ratio(num: u64, den: u64) -> Self {
        Self::log2(num) - Self::log2(den)
    }

    /// log2 of a positive rational with 64-bit numerator and denominator.
    pub fn log2_of(r: &Ratio) -> Self {
        let num = r.numer().to_u64().expect("numerator fits u64");
        let den = r.denom().to_u64().expect("denominator fits u64");
        Self::log2_ratio(num, den)
    }

    fn add_term(&mut self, p: u64, c: Ratio) {
        let slot = self.coeffs.entry(p).or_insert_with(Ratio::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn scale(&self, c: &Ratio) -> Self {
        let mut s = Log2Sum::zero();
        for (p, v) in &self.coeffs {
            s.add_term(*p, v * c);
        }
        s
    }

    pub fn to_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, (p, c)| acc + c.to_f64().unwrap_or(f64::NAN) * (*p as f64).log2())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        // Only used on entropies; the float check is a sanity bound.
        self.is_zero() || self.to_f64() >= -1e-12
    }
}

impl PartialEq for Log2Sum {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Log2Sum {}

impl std::ops::Add for Log2Sum {
    type Output = Log2Sum;

    fn add(mut self, rhs: Log2Sum) -> Log2Sum {
        for (p, c) in rhs.coeffs {
            self.add_term(p, c);
        }
        self
    }
}

impl std::ops::Sub for Log2Sum {
    type Output = Log2Sum;

    fn sub(mut self, rhs: Log2Sum) -> Log2Sum {
        for (p, c) in rhs.coeffs {
            self.add_term(p, -c);
        }
        self
    }
}

impl fmt::Display for Log2Sum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| if *p == 2 { format!("{c}") } else { format!("{c}*log2({p})") })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Shannon entropy in bits, exactly: sum p * (log2 den(p) - log2 num(p)).
pub fn shannon_entropy<T: Ord + Clone>(d: &Dist<T>) -> Log2Sum {
    d.iter()
        .filter(|(_, w)| w.is_positive())
        .fold(Log2Sum::zero(), |acc, (_, w)| acc - Log2Sum::log2_of(w).scale(w))
}
