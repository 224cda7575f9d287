//! Degree and genus bounds for invariant divisors of foliations without a
//! rational first integral.
//!
//! Every bound is an inequality `lhs <= rhs` that must hold when the
//! foliation has no rational first integral. Inputs violating it therefore
//! force one; that is the verdict reported. Cohomological data (h^1,
//! h^0(K - D), intersection numbers, Euler characteristics) are caller
//! inputs, except on P^n and P^2 where their standard values are built in.
//!
//! The invariant count `N` is the number of invariant divisors in the
//! linear system, taken as given.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::{rat, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Formula {
    Theorem1,
    Poincare,
    ProjectiveSpace,
    Genus,
    Surface,
    Abelian,
}

impl Formula {
    pub fn id(self) -> &'static str {
        match self {
            Formula::Theorem1 => "theorem1",
            Formula::Poincare => "poin",
            Formula::ProjectiveSpace => "pn",
            Formula::Genus => "gen",
            Formula::Surface => "cor",
            Formula::Abelian => "abelian",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Verdict {
    ConsistentWithNoFirstIntegral,
    ForcesFirstIntegral,
}

impl Verdict {
    fn from_holds(holds: bool) -> Verdict {
        if holds {
            Verdict::ConsistentWithNoFirstIntegral
        } else {
            Verdict::ForcesFirstIntegral
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConsistentWithNoFirstIntegral => "consistent-with-no-first-integral",
            Verdict::ForcesFirstIntegral => "forces-first-integral",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Intersection-theoretic data of a surface and a divisor on it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SurfaceData {
    pub h1: i64,
    pub h0_k_minus_d: i64,
    /// `K . K`
    pub k_dot_k: i64,
    /// `K . D`
    pub k_dot_d: i64,
    /// Topological Euler characteristic of the surface.
    pub chi_top: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundInput {
    pub deg_d: i64,
    pub h0: i64,
    /// Number of invariant divisors in the linear system.
    pub n_invariant: i64,
    pub deg_f: i64,
    pub deg_x: i64,
    pub surface: Option<SurfaceData>,
    /// Virtual genus of the divisor.
    pub genus: Option<i64>,
}

impl BoundInput {
    pub fn new(deg_d: i64, h0: i64, n_invariant: i64, deg_f: i64, deg_x: i64) -> BoundInput {
        BoundInput {
            deg_d,
            h0,
            n_invariant,
            deg_f,
            deg_x,
            surface: None,
            genus: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.deg_d < 0 || self.n_invariant < 0 {
            return Err(Error::InvalidInput(
                "degrees and counts must be non-negative".into(),
            ));
        }
        if self.h0 < 1 {
            return Err(Error::InvalidInput("h0 must be at least 1".into()));
        }
        if self.deg_x < 1 {
            return Err(Error::InvalidInput("deg(X) must be at least 1".into()));
        }
        if let Some(s) = &self.surface {
            if s.h1 < 0 || s.h0_k_minus_d < 0 {
                return Err(Error::InvalidInput(
                    "cohomology dimensions must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    /// Standard data of a degree-`k` curve on P^2 for a degree-`d` foliation.
    pub fn plane_curve(d: i64, k: i64, n_invariant: i64, genus: Option<i64>) -> BoundInput {
        BoundInput {
            deg_d: k,
            h0: (k + 1) * (k + 2) / 2,
            n_invariant,
            deg_f: d,
            deg_x: 1,
            surface: Some(SurfaceData {
                h1: 0,
                h0_k_minus_d: 0,
                k_dot_k: 9,
                k_dot_d: -3 * k,
                chi_top: 3,
            }),
            genus,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundReport {
    pub formula: Formula,
    pub lhs: Rational,
    pub rhs: Rational,
    /// The critical value of the bounded quantity, when it is defined.
    pub threshold: Option<Rational>,
    pub holds: bool,
    pub verdict: Verdict,
}

impl BoundReport {
    fn new(
        formula: Formula,
        lhs: Rational,
        rhs: Rational,
        threshold: Option<Rational>,
    ) -> BoundReport {
        let holds = lhs <= rhs;
        BoundReport {
            formula,
            lhs,
            rhs,
            threshold,
            holds,
            verdict: Verdict::from_holds(holds),
        }
    }
}

pub fn binomial2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `deg(D) (N - h0) <= (deg F - deg X) C(h0, 2)`.
pub fn theorem1_check(input: &BoundInput) -> Result<BoundReport> {
    input.validate()?;
    let lhs = rat(input.deg_d * (input.n_invariant - input.h0));
    let rhs = rat((input.deg_f - input.deg_x) * binomial2(input.h0));
    let threshold = poincare_degree_bound(input).ok();
    Ok(BoundReport::new(Formula::Theorem1, lhs, rhs, threshold))
}

/// `(deg F - deg X) C(h0, 2) / (N - h0)`, defined when `N > h0`.
pub fn poincare_degree_bound(input: &BoundInput) -> Result<Rational> {
    input.validate()?;
    if input.n_invariant <= input.h0 {
        return Err(Error::HypothesisNotMet(format!(
            "needs N > h0, got N = {} and h0 = {}",
            input.n_invariant, input.h0
        )));
    }
    Ok(rat((input.deg_f - input.deg_x) * binomial2(input.h0)) / rat(input.n_invariant - input.h0))
}

/// Compares `deg(D)` against [`poincare_degree_bound`].
pub fn poincare_check(input: &BoundInput) -> Result<BoundReport> {
    let bound = poincare_degree_bound(input)?;
    Ok(BoundReport::new(
        Formula::Poincare,
        rat(input.deg_d),
        bound.clone(),
        Some(bound),
    ))
}

/// The threshold `M(d, k)` for degree-`k` hypersurfaces on P^n.
pub fn pn_threshold(d: i64, k: i64, n: i64, count: i64) -> Result<Rational> {
    if d < 2 || k < 1 || n < 1 {
        return Err(Error::InvalidInput("needs d >= 2, k >= 1, n >= 1".into()));
    }
    let h0 = binomial(n + k, k);
    if BigInt::from(count) <= h0 {
        return Err(Error::HypothesisNotMet(format!(
            "needs N > C(n+k, k) = {h0}, got N = {count}"
        )));
    }
    let pairs = &h0 * (&h0 - 1) / 2;
    Ok(rat(d - 1) * big(&pairs) / (rat(count) - big(&h0)))
}

/// A first integral is forced when `k > M(d, k)`.
pub fn pn_check(d: i64, k: i64, n: i64, count: i64) -> Result<BoundReport> {
    let m = pn_threshold(d, k, n, count)?;
    Ok(BoundReport::new(
        Formula::ProjectiveSpace,
        rat(k),
        m.clone(),
        Some(m),
    ))
}

fn check_genus_inputs(d: i64, k: i64, count: i64) -> Result<()> {
    if d < 2 || k < 1 || count < 1 {
        return Err(Error::InvalidInput("needs d >= 2, k >= 1, N >= 1".into()));
    }
    Ok(())
}

/// `[d(k^3 + 6k^2 + 11k + 6) - k^3 - 6k^2 + 13k + 2] / 4 - 2N`.
pub fn genus_rhs(d: i64, k: i64, count: i64) -> Result<Rational> {
    check_genus_inputs(d, k, count)?;
    let (k, d) = (BigInt::from(k), BigInt::from(d));
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let numerator = &d * (&k3 + 6 * &k2 + 11 * &k + 6) - &k3 - 6 * &k2 + 13 * &k + 2;
    Ok(big(&numerator) / rat(4) - rat(2 * count))
}

/// `G(d, k) = (2 - genus_rhs) / 2`: an invariant degree-`k` curve of genus
/// below this forces a first integral of degree at most `k`.
pub fn genus_threshold(d: i64, k: i64, count: i64) -> Result<Rational> {
    Ok((rat(2) - genus_rhs(d, k, count)?) / rat(2))
}

/// `2 - 2g <= genus_rhs(d, k, N)`; `g` defaults to the plane-curve genus.
pub fn genus_check(d: i64, k: i64, count: i64, genus: Option<i64>) -> Result<BoundReport> {
    let rhs = genus_rhs(d, k, count)?;
    let g = match genus {
        Some(g) => g,
        None => virtual_genus_plane(k)?,
    };
    Ok(BoundReport::new(
        Formula::Genus,
        rat(2 - 2 * g),
        rhs,
        Some(genus_threshold(d, k, count)?),
    ))
}

/// `(K.K - 12 K.D + chi) / 6`.
pub fn canonical_term(s: &SurfaceData) -> Rational {
    rat(s.k_dot_k - 12 * s.k_dot_d + s.chi_top) / rat(6)
}

fn surface_data(input: &BoundInput) -> Result<SurfaceData> {
    input.validate()?;
    let s = input
        .surface
        .ok_or_else(|| Error::InvalidInput("missing surface data".into()))?;
    if input.deg_d <= 0 {
        return Err(Error::InvalidInput("deg(D) must be positive".into()));
    }
    Ok(s)
}

/// Right-hand side of the surface inequality.
pub fn surface_rhs(input: &BoundInput) -> Result<Rational> {
    let s = surface_data(input)?;
    let foliation_term =
        rat(2 * (input.deg_f - input.deg_x)) * rat(binomial2(input.h0)) / rat(input.deg_d);
    Ok(
        rat(2 * s.h1 - 2 * s.h0_k_minus_d) + foliation_term + canonical_term(&s)
            - rat(2 * input.n_invariant),
    )
}

/// `2 - 2g(X, D) <= 2h^1 - 2h^0(K-D) + 2 (deg F - deg X)/deg D C(h0, 2) + (K.(K - 12D) + chi)/6 - 2N`.
pub fn surface_bound(input: &BoundInput) -> Result<BoundReport> {
    let rhs = surface_rhs(input)?;
    let g = input
        .genus
        .ok_or_else(|| Error::InvalidInput("missing virtual genus".into()))?;
    let threshold = (rat(2) - &rhs) / rat(2);
    Ok(BoundReport::new(
        Formula::Surface,
        rat(2 - 2 * g),
        rhs,
        Some(threshold),
    ))
}

/// `(k - 1)(k - 2) / 2`.
pub fn virtual_genus_plane(k: i64) -> Result<i64> {
    if k < 1 {
        return Err(Error::InvalidInput(
            "curve degree must be at least 1".into(),
        ));
    }
    Ok((k - 1) * (k - 2) / 2)
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Bound for abelian varieties, where `h0 = D^n / n!`.
pub fn abelian_bound(
    self_intersection: i64,
    n: i64,
    count: i64,
    deg_f: i64,
    deg_x: i64,
) -> Result<Rational> {
    if n < 1 || self_intersection < 0 {
        return Err(Error::InvalidInput("needs n >= 1 and D^n >= 0".into()));
    }
    let nf = factorial(n);
    let si = BigInt::from(self_intersection);
    if !(&si % &nf).is_zero() {
        return Err(Error::InvalidInput(format!(
            "D^n = {self_intersection} is not divisible by {n}!"
        )));
    }
    let h0 = si / nf;
    if BigInt::from(count) <= h0 {
        return Err(Error::HypothesisNotMet(format!(
            "needs N > D^n/n! = {h0}, got N = {count}"
        )));
    }
    let pairs = &h0 * (&h0 - 1) / 2;
    Ok(rat(deg_f - deg_x) * big(&pairs) / (rat(count) - big(&h0)))
}

/// Compares `deg(D)` against [`abelian_bound`].
pub fn abelian_check(
    self_intersection: i64,
    n: i64,
    count: i64,
    deg_f: i64,
    deg_x: i64,
    deg_d: i64,
) -> Result<BoundReport> {
    let bound = abelian_bound(self_intersection, n, count, deg_f, deg_x)?;
    Ok(BoundReport::new(
        Formula::Abelian,
        rat(deg_d),
        bound.clone(),
        Some(bound),
    ))
}
