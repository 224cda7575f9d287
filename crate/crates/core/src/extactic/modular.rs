//! Determinants of polynomial matrices by evaluation and interpolation
//! modulo word-size primes, lifted back to the rationals by Chinese
//! remaindering.
//!
//! Each row is first scaled by the lcm of its denominators so the scaled
//! determinant has integer coefficients. Per-variable degree bounds come
//! from row and column maxima; the coefficient bound is the smaller of the
//! row-wise and column-wise products of summed coefficient 1-norms, which
//! bounds the 1-norm of every term of the Leibniz expansion. Enough primes
//! are used for their product to exceed twice that bound, so the symmetric
//! CRT lift is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::matrix::PolyMatrix;
use crate::error::{Error, Result};
use crate::polyring::{
    mod_inverse, mod_mul, modular_primes, ModularImage, Monomial, Polynomial, Rational,
};

/// Upper limit on (prime, point) work items for one determinant.
const MAX_WORK_ITEMS: usize = 200_000_000;

/// Determinant of a square `u64` matrix modulo `p` (destroys the input).
pub(crate) fn det_mod_p(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                a.swap(piv * n + j, k * n + j);
            }
            det = (p - det) % p;
        }
        let pv = a[k * n + k];
        det = mod_mul(det, pv, p);
        let inv = mod_inverse(pv, p).expect("nonzero pivot");
        for i in k + 1..n {
            let f = mod_mul(a[i * n + k], inv, p);
            if f == 0 {
                continue;
            }
            for j in k + 1..n {
                let sub = mod_mul(f, a[k * n + j], p);
                let v = a[i * n + j];
                a[i * n + j] = if v >= sub { v - sub } else { v + p - sub };
            }
        }
    }
    det
}

struct Prepared {
    n: usize,
    nvars: usize,
    /// Integer-coefficient entries (rows scaled by their denominator lcm).
    scaled: Vec<Polynomial>,
    /// Product of the row scales.
    scale: BigInt,
    var_bounds: Vec<u32>,
    total_bound: u32,
    height: BigInt,
}

fn prepare(m: &PolyMatrix) -> Option<Prepared> {
    let n = m.rows();
    let nvars = m.ring().nvars();
    let mut scaled = Vec::with_capacity(n * n);
    let mut scale = BigInt::one();
    for i in 0..n {
        let l = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator_lcm()));
        let lr = Rational::from_integer(l.clone());
        scaled.extend(m.row(i).iter().map(|e| e.scale(&lr)));
        scale *= l;
    }
    let entry = |i: usize, j: usize| &scaled[i * n + j];

    // Zero row or column: determinant vanishes.
    for i in 0..n {
        if (0..n).all(|j| entry(i, j).is_zero()) || (0..n).all(|j| entry(j, i).is_zero()) {
            return None;
        }
    }

    let line_bound = |f: &dyn Fn(&Polynomial) -> u32, by_rows: bool| -> u32 {
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if by_rows { entry(a, b) } else { entry(b, a) })
                    .filter(|e| !e.is_zero())
                    .map(f)
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    };
    let var_bounds: Vec<u32> = (0..nvars)
        .map(|v| {
            let f = |e: &Polynomial| e.degree_in(v).unwrap_or(0);
            line_bound(&f, true).min(line_bound(&f, false))
        })
        .collect();
    let tdeg = |e: &Polynomial| e.total_degree().finite().unwrap_or(0);
    let total_bound = line_bound(&tdeg, true).min(line_bound(&tdeg, false));

    let norm = |e: &Polynomial| e.coefficient_norm().to_integer();
    let row_height = (0..n).fold(BigInt::one(), |acc, i| {
        acc * (0..n).map(|j| norm(entry(i, j))).sum::<BigInt>()
    });
    let col_height = (0..n).fold(BigInt::one(), |acc, j| {
        acc * (0..n).map(|i| norm(entry(i, j))).sum::<BigInt>()
    });
    let height = row_height.min(col_height);

    Some(Prepared {
        n,
        nvars,
        scaled,
        scale,
        var_bounds,
        total_bound,
        height,
    })
}

pub(crate) fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::from(residues[0]);
    let mut modulus = BigInt::from(primes[0]);
    for (&r, &p) in residues.iter().zip(primes).skip(1) {
        let pb = BigInt::from(p);
        let x_mod = x.mod_floor(&pb).to_u64().unwrap();
        let m_mod = modulus.mod_floor(&pb).to_u64().unwrap();
        let delta = mod_mul(
            (r + p - x_mod) % p,
            mod_inverse(m_mod, p).expect("distinct primes"),
            p,
        );
        x += &modulus * BigInt::from(delta);
        modulus *= pb;
    }
    if &x * 2 > modulus {
        x -= modulus;
    }
    x
}

pub(crate) fn build_pool(jobs: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    match jobs {
        None => Ok(None),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(Some)
            .map_err(|e| Error::InternalConsistency(format!("thread pool: {e}"))),
    }
}

/// Degree of the determinant when every nonzero entry `(i, j)` is
/// homogeneous of degree `r_i + c_j`; `None` when no such grading exists.
fn graded_degree(m: &PolyMatrix) -> Option<u32> {
    let n = m.rows();
    let mut degs = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let e = m.get(i, j);
            if !e.is_zero() {
                if !e.is_homogeneous() {
                    return None;
                }
                degs[i * n + j] = e.total_degree().finite().map(i64::from);
            }
        }
    }
    let mut r: Vec<Option<i64>> = vec![None; n];
    let mut c: Vec<Option<i64>> = vec![None; n];
    while let Some(start) = r.iter().position(Option::is_none) {
        r[start] = Some(0);
        let mut changed = true;
        while changed {
            changed = false;
            for (idx, d) in degs.iter().enumerate() {
                let (i, j) = (idx / n, idx % n);
                let Some(d) = *d else { continue };
                match (r[i], c[j]) {
                    (Some(a), None) => {
                        c[j] = Some(d - a);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        r[i] = Some(d - b);
                        changed = true;
                    }
                    (Some(a), Some(b)) if a + b != d => return None,
                    _ => {}
                }
            }
        }
    }
    let total = r
        .iter()
        .chain(&c)
        .try_fold(0i64, |acc, v| v.map(|v| acc + v))?;
    u32::try_from(total).ok()
}

/// Exact determinant by modular evaluation/interpolation. `jobs` caps the
/// worker count; the result does not depend on it.
///
/// Graded matrices have a homogeneous determinant, so the last variable is
/// set to 1 before interpolation and restored afterwards.
pub fn det_modular(m: &PolyMatrix, jobs: Option<usize>) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::Precondition(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let ring = m.ring().clone();
    let nvars = ring.nvars();
    let Some(total) = graded_degree(m).filter(|_| nvars >= 2 && m.rows() > 0) else {
        return det_modular_grid(m, jobs);
    };
    let last = nvars - 1;
    let flatten = |p: &Polynomial| {
        Polynomial::from_terms(
            &ring,
            p.terms().iter().map(|(mono, c)| {
                let mut e = mono.exponents().to_vec();
                e[last] = 0;
                (Monomial::new(e), c.clone())
            }),
        )
    };
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(flatten).collect())
        .collect();
    let flat = det_modular_grid(&PolyMatrix::from_rows(&ring, rows)?, jobs)?;
    let mut terms = Vec::with_capacity(flat.terms().len());
    for (mono, c) in flat.terms() {
        let mut e = mono.exponents().to_vec();
        let deg = mono.degree();
        if deg > total {
            return Err(Error::InternalConsistency(
                "graded determinant exceeds its degree".into(),
            ));
        }
        e[last] = total - deg;
        terms.push((Monomial::new(e), c.clone()));
    }
    Ok(Polynomial::from_terms(&ring, terms))
}

fn det_modular_grid(m: &PolyMatrix, jobs: Option<usize>) -> Result<Polynomial> {
    let ring = m.ring().clone();
    if m.rows() == 0 {
        return Ok(ring.one());
    }
    let Some(prep) = prepare(m) else {
        return Ok(ring.zero());
    };
    let Prepared {
        n,
        nvars,
        ref scaled,
        ref scale,
        ref var_bounds,
        total_bound,
        ref height,
    } = prep;

    let target = height * 2 + 1;
    let mut primes = Vec::new();
    let mut product = BigInt::one();
    let mut prime_iter = modular_primes();
    while product <= target {
        let p = prime_iter.next().ok_or_else(|| {
            Error::ResourceGuard("coefficient bound exceeds the available modular primes".into())
        })?;
        product *= p;
        primes.push(p);
    }
    let check_prime = prime_iter
        .next()
        .ok_or_else(|| Error::ResourceGuard("no verification prime left".into()))?;

    let lens: Vec<usize> = var_bounds.iter().map(|&d| d as usize + 1).collect();
    let npoints: usize = lens
        .iter()
        .try_fold(1usize, |acc, &l| acc.checked_mul(l))
        .unwrap_or(usize::MAX);
    if npoints.saturating_mul(primes.len()) > MAX_WORK_ITEMS {
        return Err(Error::ResourceGuard(format!(
            "modular determinant would need {} evaluations",
            npoints as u128 * primes.len() as u128
        )));
    }
    let mut strides = vec![1usize; nvars];
    for v in (0..nvars.saturating_sub(1)).rev() {
        strides[v] = strides[v + 1] * lens[v + 1];
    }

    let images: Vec<Vec<ModularImage>> = primes
        .iter()
        .map(|&p| {
            scaled
                .iter()
                .map(|e| ModularImage::new(e, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // Work items are lines along the last variable: substitute the other
    // coordinates once per line, then evaluate each entry by Horner.
    let nlast = lens.last().copied().unwrap_or(1);
    let nprefix = npoints / nlast;
    let work = |w: usize| -> Vec<u64> {
        let (pi, prefix) = (w / nprefix, w % nprefix);
        let p = primes[pi];
        let base = prefix * nlast;
        let point: Vec<u64> = (0..nvars)
            .map(|v| ((base / strides[v]) % lens[v]) as u64)
            .collect();
        let powers = crate::polyring::power_table(&point, var_bounds, p);
        let lines: Vec<Vec<u64>> = images[pi]
            .iter()
            .map(|img| img.univariate_last(&powers))
            .collect();
        let mut a = vec![0u64; n * n];
        (0..nlast as u64)
            .map(|t| {
                for (slot, c) in a.iter_mut().zip(&lines) {
                    *slot = horner(c, t, p);
                }
                det_mod_p(&mut a, n, p)
            })
            .collect()
    };
    let total = nprefix * primes.len();
    let values: Vec<u64> = match build_pool(jobs)? {
        Some(pool) => pool.install(|| (0..total).into_par_iter().flat_map_iter(work).collect()),
        None => (0..total).into_par_iter().flat_map_iter(work).collect(),
    };

    // Tensor-product interpolation, one axis at a time, per prime.
    let max_len = lens.iter().copied().max().unwrap_or(1);
    let mut per_prime: Vec<Vec<u64>> = values.chunks(npoints).map(|c| c.to_vec()).collect();
    per_prime
        .par_iter_mut()
        .zip(primes.par_iter())
        .for_each(|(vals, &p)| {
            let inverses: Vec<u64> = (0..max_len as u64)
                .map(|i| mod_inverse(i, p).unwrap_or(0))
                .collect();
            let mut line = vec![0u64; max_len];
            for v in 0..nvars {
                let (len, stride) = (lens[v], strides[v]);
                if len == 1 {
                    continue;
                }
                for base in 0..npoints {
                    if (base / stride) % len != 0 {
                        continue;
                    }
                    for t in 0..len {
                        line[t] = vals[base + t * stride];
                    }
                    interpolate(&mut line[..len], p, &inverses);
                    for t in 0..len {
                        vals[base + t * stride] = line[t];
                    }
                }
            }
        });

    let scale_r = Rational::from_integer(scale.clone());
    let mut terms = Vec::new();
    let mut residues = vec![0u64; primes.len()];
    for idx in 0..npoints {
        for (r, vals) in residues.iter_mut().zip(&per_prime) {
            *r = vals[idx];
        }
        if residues.iter().all(|&r| r == 0) {
            continue;
        }
        let c = crt_symmetric(&residues, &primes);
        if c.is_zero() {
            continue;
        }
        let exps = Monomial::new((0..nvars).map(|v| ((idx / strides[v]) % lens[v]) as u32));
        if exps.degree() > total_bound {
            return Err(Error::InternalConsistency(format!(
                "interpolated term of degree {} exceeds the bound {total_bound}",
                exps.degree()
            )));
        }
        if c.abs() > *height {
            return Err(Error::InternalConsistency(
                "reconstructed coefficient exceeds the height bound".into(),
            ));
        }
        terms.push((exps, Rational::from_integer(c) / &scale_r));
    }
    let det = Polynomial::from_terms(&ring, terms);

    // Independent spot check with a prime not used above.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f_6475_6c61_7221);
    let point: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..check_prime)).collect();
    let mut a: Vec<u64> = scaled
        .iter()
        .map(|e| ModularImage::new(e, check_prime).and_then(|img| img.evaluate(&point)))
        .collect::<Result<_>>()?;
    let expected = det_mod_p(&mut a, n, check_prime);
    let got = det.scale(&scale_r).evaluate_mod(&point, check_prime)?;
    if expected != got {
        return Err(Error::InternalConsistency(
            "modular determinant failed its verification point".into(),
        ));
    }
    Ok(det)
}

fn horner(coeffs: &[u64], t: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| {
        let v = mod_mul(acc, t, p) + c;
        if v >= p {
            v - p
        } else {
            v
        }
    })
}

/// Converts values at the nodes `0..len` into monomial coefficients.
fn interpolate(values: &mut [u64], p: u64, inverses: &[u64]) {
    let len = values.len();
    for i in 1..len {
        for j in (i..len).rev() {
            let diff = if values[j] >= values[j - 1] {
                values[j] - values[j - 1]
            } else {
                values[j] + p - values[j - 1]
            };
            values[j] = mod_mul(diff, inverses[i], p);
        }
    }
    // Newton form sum_i c_i prod_{t<i} (x - t), expanded by Horner.
    let mut poly = vec![0u64; len];
    for i in (0..len).rev() {
        // poly <- poly * (x - i) + c_i
        let node = i as u64;
        let mut prev = 0u64;
        for e in 0..len {
            let cur = poly[e];
            let term = mod_mul(cur, node, p);
            let v = if prev >= term {
                prev - term
            } else {
                prev + p - term
            };
            poly[e] = v;
            prev = cur;
        }
        poly[0] = (poly[0] + values[i]) % p;
    }
    values.copy_from_slice(&poly);
}
