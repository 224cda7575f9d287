use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Primes just below 2^61, largest first.
const PRIME_TABLE: [u64; 16] = [
    0x1fffffffffffffff,
    0x1fffffffffffffe1,
    0x1fffffffffffffd3,
    0x1fffffffffffff1b,
    0x1ffffffffffffefd,
    0x1ffffffffffffee5,
    0x1ffffffffffffead,
    0x1ffffffffffffe79,
    0x1ffffffffffffe6d,
    0x1ffffffffffffe2f,
    0x1ffffffffffffded,
    0x1ffffffffffffdbd,
    0x1ffffffffffffd5d,
    0x1ffffffffffffd09,
    0x1ffffffffffffce1,
    0x1ffffffffffffccd,
];

#[inline]
pub fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // Deterministic witness set for all 64-bit integers.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The modular prime sequence: the fixed table, then further primes below
/// its last entry found by Miller-Rabin. Deterministic.
pub fn modular_primes() -> impl Iterator<Item = u64> {
    static EXTRA: OnceLock<Vec<u64>> = OnceLock::new();
    let extra = EXTRA.get_or_init(|| {
        let mut out = Vec::with_capacity(240);
        let mut candidate = PRIME_TABLE[PRIME_TABLE.len() - 1] - 2;
        while out.len() < 240 {
            if is_prime_u64(candidate) {
                out.push(candidate);
            }
            candidate -= 2;
        }
        out
    });
    PRIME_TABLE.iter().copied().chain(extra.iter().copied())
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Image of `n/d` modulo `p`; `None` when `p` divides the denominator.
pub fn rational_mod(c: &Rational, p: u64) -> Option<u64> {
    let den = bigint_mod(c.denom(), p);
    let inv = mod_inverse(den, p)?;
    Some(mod_mul(bigint_mod(c.numer(), p), inv, p))
}

/// A polynomial with coefficients reduced modulo a prime, ready for repeated
/// evaluation.
#[derive(Clone, Debug)]
pub struct ModularImage {
    prime: u64,
    nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
    max_exp: Vec<u32>,
}

impl ModularImage {
    pub fn new(f: &Polynomial, p: u64) -> Result<ModularImage> {
        let nvars = f.nvars();
        let mut max_exp = vec![0u32; nvars];
        let mut terms = Vec::with_capacity(f.num_terms());
        for (m, c) in f.terms() {
            let r = rational_mod(c, p).ok_or(Error::BadPrime(p))?;
            if r.is_zero() {
                continue;
            }
            for (mx, &e) in max_exp.iter_mut().zip(m.exponents()) {
                *mx = (*mx).max(e);
            }
            terms.push((m.exponents().to_vec(), r));
        }
        Ok(ModularImage {
            prime: p,
            nvars,
            terms,
            max_exp,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.nvars {
            return Err(Error::Context("point arity does not match ring".into()));
        }
        let powers = power_table(point, &self.max_exp, self.prime);
        Ok(self.evaluate_with(&powers))
    }

    /// Evaluation with precomputed `powers[var][e] = point[var]^e mod p`.
    pub fn evaluate_with(&self, powers: &[Vec<u64>]) -> u64 {
        let p = self.prime;
        let mut acc: u64 = 0;
        for (exps, c) in &self.terms {
            let mut v = *c;
            for (var, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v = mod_mul(v, powers[var][e as usize], p);
                }
            }
            acc += v;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    /// Coefficients in the last variable after substituting the other
    /// variables from `powers`; index `e` holds the coefficient of `x_last^e`.
    pub fn univariate_last(&self, powers: &[Vec<u64>]) -> Vec<u64> {
        let p = self.prime;
        let Some(last) = self.nvars.checked_sub(1) else {
            return vec![self.terms.first().map_or(0, |t| t.1)];
        };
        let mut coeffs = vec![0u64; self.max_exp[last] as usize + 1];
        for (exps, c) in &self.terms {
            let mut v = *c;
            for (var, &e) in exps[..last].iter().enumerate() {
                if e > 0 {
                    v = mod_mul(v, powers[var][e as usize], p);
                }
            }
            let slot = &mut coeffs[exps[last] as usize];
            *slot += v;
            if *slot >= p {
                *slot -= p;
            }
        }
        coeffs
    }

    pub fn max_exponents(&self) -> &[u32] {
        &self.max_exp
    }
}

pub(crate) fn power_table(point: &[u64], max_exp: &[u32], p: u64) -> Vec<Vec<u64>> {
    point
        .iter()
        .zip(max_exp)
        .map(|(&x, &m)| {
            let x = x % p;
            let mut row = Vec::with_capacity(m as usize + 1);
            let mut v = 1 % p;
            row.push(v);
            for _ in 0..m {
                v = mod_mul(v, x, p);
                row.push(v);
            }
            row
        })
        .collect()
}
