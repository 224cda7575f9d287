//! Rational first integrals from a vanishing extactic.
//!
//! When the jet matrix has rank `r < m`, its first `r` columns are
//! independent and column `r` depends on them. Pick rows `I` with a nonzero
//! `r x r` minor on those columns and one extra row `i0`. The signed `r x r`
//! minors `c_i` of the `(r+1) x r` block give a relation
//! `sum_i c_i X^j(s_i) = 0` for `j = 0..=r`; differentiating shows every
//! ratio `c_i / c_i0` is annihilated by `X`. Because the basis is linearly
//! independent over the constants, at least one ratio is non-constant.
//!
//! The ratios are first sampled exactly at integer points and rewritten as
//! `A/B` with `A, B` in the system, which avoids expanding the large minors.
//! Only if that fails are the minors computed symbolically. Either way the
//! returned pair is checked exactly: `X(A) B - A X(B) = 0` and `A/B` is not
//! constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::{One, Zero};

use super::{
    det_mod_p, determinant, jet_matrix, ExtacticOptions, JetMatrix, LinearSystem, SystemKind,
};
use crate::error::{Error, Result};
use crate::foliation::VectorField;
use crate::polyring::{modular_primes, rat, Degree, ModularImage, Monomial, Polynomial, Rational};

const PROBE_POINTS: usize = 3;
const PROBE_RANGE: i64 = 10_000;
const PROBE_SEED: u64 = 0x6669_7273_745f_696e;
const REDUCE_SEED: u64 = 0x7265_6475_6365;
const REDUCE_EXTRA_POINTS: usize = 8;
const REDUCE_RANGE: i64 = 50;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FirstIntegral {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    /// Generic rank of the jet matrix.
    pub rank: usize,
    /// Basis indices of the nonsingular `rank x rank` block.
    pub rows: Vec<usize>,
    pub extra_row: usize,
}

/// Jet matrix evaluated at a few random integer points modulo one prime.
struct Probe {
    prime: u64,
    points: Vec<Vec<u64>>,
    m: usize,
}

impl Probe {
    fn new(jet: &JetMatrix) -> Result<Probe> {
        let m = jet.dimension();
        let nvars = jet.matrix().ring().nvars();
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        'primes: for prime in modular_primes().take(8) {
            let images: Vec<ModularImage> = match jet
                .matrix()
                .entries()
                .iter()
                .map(|e| ModularImage::new(e, prime))
                .collect::<Result<_>>()
            {
                Ok(v) => v,
                Err(Error::BadPrime(_)) => continue 'primes,
                Err(e) => return Err(e),
            };
            let mut points = Vec::with_capacity(PROBE_POINTS);
            for _ in 0..PROBE_POINTS {
                let point: Vec<u64> = (0..nvars)
                    .map(|_| {
                        rng.gen_range(-PROBE_RANGE..=PROBE_RANGE)
                            .rem_euclid(prime as i64) as u64
                    })
                    .collect();
                let values = images
                    .iter()
                    .map(|img| img.evaluate(&point))
                    .collect::<Result<Vec<_>>>()?;
                points.push(values);
            }
            return Ok(Probe { prime, points, m });
        }
        Err(Error::FirstIntegral(
            "no usable prime for rank probing".into(),
        ))
    }

    /// True when some probe point proves the minor nonzero.
    fn minor_nonzero(&self, rows: &[usize], ncols: usize) -> bool {
        self.points.iter().any(|vals| {
            let mut a: Vec<u64> = rows
                .iter()
                .flat_map(|&i| (0..ncols).map(move |j| vals[i * self.m + j]))
                .collect();
            det_mod_p(&mut a, rows.len(), self.prime) != 0
        })
    }
}

fn sorted_with(rows: &[usize], extra: usize) -> Vec<usize> {
    let mut v = rows.to_vec();
    v.push(extra);
    v.sort_unstable();
    v
}

/// Strips the common monomial factor and makes the denominator monic.
fn normalize(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
    let nvars = a.nvars();
    let mut common = vec![u32::MAX; nvars];
    for (m, _) in a.terms().iter().chain(b.terms()) {
        for (c, &e) in common.iter_mut().zip(m.exponents()) {
            *c = (*c).min(e);
        }
    }
    let common = Monomial::new(
        common
            .into_iter()
            .map(|c| if c == u32::MAX { 0 } else { c }),
    );
    let strip = |p: &Polynomial| {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| (m.div(&common).expect("common factor"), c.clone()));
        Polynomial::from_terms(p.ring(), terms)
    };
    let (a, b) = (strip(a), strip(b));
    let lc = b
        .leading_coefficient()
        .expect("nonzero denominator")
        .recip();
    (a.scale(&lc), b.scale(&lc))
}

/// Extracts a rational first integral `A/B` from a system whose extactic
/// vanishes identically. The relation `X(A) B - A X(B) = 0` is verified
/// exactly before returning.
pub fn extract_first_integral(
    field: &VectorField,
    system: &LinearSystem,
    options: &ExtacticOptions,
) -> Result<FirstIntegral> {
    let m = system.dimension();
    if m < 2 {
        return Err(Error::Precondition(
            "first integral extraction needs at least two basis elements".into(),
        ));
    }
    options.guard(m)?;
    let jet = jet_matrix(field, system)?;
    let probe = Probe::new(&jet)?;

    let mut rows: Vec<usize> = Vec::new();
    let mut profile: Vec<String> = Vec::new();
    let mut rank = m;
    for j in 0..m {
        let ncols = j + 1;
        let cols: Vec<usize> = (0..ncols).collect();
        let mut accepted = None;
        for i in (0..m).filter(|i| !rows.contains(i)) {
            let candidate = sorted_with(&rows, i);
            if probe.minor_nonzero(&candidate, ncols) {
                accepted = Some(i);
                break;
            }
            // All probes vanished: settle it exactly.
            let minor = determinant(
                &jet.matrix().submatrix(&candidate, &cols),
                options.engine,
                options.jobs,
            )?;
            if !minor.is_zero() {
                accepted = Some(i);
                break;
            }
        }
        match accepted {
            Some(i) => {
                rows.push(i);
                rows.sort_unstable();
                profile.push(format!("col{j}:+row{i}"));
            }
            None => {
                rank = j;
                profile.push(format!("col{j}:dependent"));
                break;
            }
        }
    }
    if rank == m {
        return Err(Error::ExtacticNonzero);
    }
    if rank == 0 {
        return Err(Error::FirstIntegral(format!(
            "degenerate rank profile [{}]",
            profile.join(", ")
        )));
    }

    let extra = (0..m)
        .find(|i| !rows.contains(i))
        .expect("rank < m leaves a free row");
    let all = sorted_with(&rows, extra);
    let extra_pos = all
        .iter()
        .position(|&i| i == extra)
        .expect("extra row present");
    let verified = |a: Polynomial, b: Polynomial| -> Result<FirstIntegral> {
        let (a, b) = normalize(&a, &b);
        let wronskian = &(&field.apply(&a)? * &b) - &(&a * &field.apply(&b)?);
        if !wronskian.is_zero() || proportional(&a, &b) {
            return Err(Error::FirstIntegral(format!(
                "candidate failed exact verification; profile [{}]",
                profile.join(", ")
            )));
        }
        Ok(FirstIntegral {
            numerator: a,
            denominator: b,
            rank,
            rows: rows.clone(),
            extra_row: extra,
        })
    };

    let mut rng = ChaCha8Rng::seed_from_u64(REDUCE_SEED);
    if let Some((a, b)) = sampled_ratio(&jet, system, &all, rank, extra_pos, &mut rng)? {
        if let Ok(fi) = verified(a, b) {
            return Ok(fi);
        }
    }

    // Exact Cramer minors.
    let cols: Vec<usize> = (0..rank).collect();
    let cofactor = |pos: usize| -> Result<Polynomial> {
        let keep: Vec<usize> = all
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &i)| i)
            .collect();
        let minor = determinant(
            &jet.matrix().submatrix(&keep, &cols),
            options.engine,
            options.jobs,
        )?;
        Ok(if (pos + rank) % 2 == 1 { -minor } else { minor })
    };
    let denominator = cofactor(extra_pos)?;
    if denominator.is_zero() {
        return Err(Error::FirstIntegral(format!(
            "selected minor vanished on recomputation; profile [{}]",
            profile.join(", ")
        )));
    }
    for pos in (0..all.len()).filter(|&p| p != extra_pos) {
        let numerator = cofactor(pos)?;
        if numerator.is_zero() || proportional(&numerator, &denominator) {
            continue;
        }
        return verified(numerator, denominator);
    }
    Err(Error::FirstIntegral(format!(
        "every Cramer ratio is constant; profile [{}]",
        profile.join(", ")
    )))
}

fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    match (a.leading_coefficient(), b.leading_coefficient()) {
        (Some(la), Some(lb)) => a.scale(lb) == b.scale(la),
        _ => true,
    }
}

/// Cramer ratios `c_pos / c_extra` sampled at integer points: at a point
/// where the `(r+1) x r` block has rank `r`, the signed minors span its left
/// kernel.
struct RatioSamples {
    basis_values: Vec<Vec<Rational>>,
    ratios: Vec<Vec<Rational>>,
}

fn sample_ratios(
    jet: &JetMatrix,
    system: &LinearSystem,
    all: &[usize],
    rank: usize,
    extra_pos: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<RatioSamples>> {
    let nvars = system.ring().nvars();
    let mut out = RatioSamples {
        basis_values: Vec::new(),
        ratios: Vec::new(),
    };
    let mut attempts = 0;
    while out.ratios.len() < count {
        attempts += 1;
        if attempts > 4 * count {
            return Ok(None);
        }
        let point: Vec<Rational> = (0..nvars)
            .map(|_| rat(rng.gen_range(-REDUCE_RANGE..=REDUCE_RANGE)))
            .collect();
        // Transposed block: r equations in r+1 unknowns.
        let mut eqs = Vec::with_capacity(rank);
        for j in 0..rank {
            eqs.push(
                all.iter()
                    .map(|&i| jet.entry(i, j).evaluate(&point))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let kernel = rational_kernel(eqs, all.len());
        if kernel.len() != 1 || kernel[0][extra_pos].is_zero() {
            continue;
        }
        let scale = kernel[0][extra_pos].recip();
        out.ratios
            .push(kernel[0].iter().map(|c| c * &scale).collect());
        out.basis_values.push(
            system
                .basis()
                .iter()
                .map(|s| s.evaluate(&point))
                .collect::<Result<_>>()?,
        );
    }
    Ok(Some(out))
}

/// Finds `A, B` in the span of the shortest basis prefix with
/// `A = B c_pos / c_extra` at every sample.
fn sampled_ratio(
    jet: &JetMatrix,
    system: &LinearSystem,
    all: &[usize],
    rank: usize,
    extra_pos: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Polynomial, Polynomial)>> {
    let basis = system.basis();
    let ring = system.ring();
    let count = 2 * basis.len() + REDUCE_EXTRA_POINTS;
    let Some(samples) = sample_ratios(jet, system, all, rank, extra_pos, count, rng)? else {
        return Ok(None);
    };
    let mut prefixes: Vec<usize> = match system.kind() {
        SystemKind::Affine => (1..=system.degree())
            .map(|d| {
                basis
                    .iter()
                    .take_while(|s| s.total_degree() <= Degree::Finite(d))
                    .count()
            })
            .collect(),
        _ => vec![basis.len()],
    };
    prefixes.dedup();
    for pos in (0..all.len()).filter(|&p| p != extra_pos) {
        let first = &samples.ratios[0][pos];
        if samples.ratios.iter().all(|r| &r[pos] == first) {
            continue;
        }
        for &len in &prefixes {
            let n = 2 * len;
            let eqs: Vec<Vec<Rational>> = samples
                .basis_values
                .iter()
                .zip(&samples.ratios)
                .take(n + REDUCE_EXTRA_POINTS)
                .map(|(vals, ratio)| {
                    vals[..len]
                        .iter()
                        .cloned()
                        .chain(vals[..len].iter().map(|s| -(s * &ratio[pos])))
                        .collect()
                })
                .collect();
            let Some(v) = rational_kernel(eqs, n).into_iter().next() else {
                continue;
            };
            let combine = |coeffs: &[Rational]| {
                basis[..len]
                    .iter()
                    .zip(coeffs)
                    .fold(ring.zero(), |acc, (s, c)| &acc + &s.scale(c))
            };
            let (a, b) = (combine(&v[..len]), combine(&v[len..]));
            if !a.is_zero() && !b.is_zero() && !proportional(&a, &b) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Basis of the right kernel of a rational matrix, one vector per free column.
fn rational_kernel(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let r = pivots.len();
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        let pivot: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for j in c..ncols {
                    row[j] -= &pivot[j] * &f;
                }
            }
        }
        rows[r] = pivot;
        pivots.push(c);
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[ri][free].clone();
            }
            v
        })
        .collect()
}
