//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in canonical form: no zero coefficients, sorted in
//! descending graded-lexicographic order (total degree first, then the
//! exponent of the first declared variable, and so on). Equal polynomials
//! therefore have identical term vectors and identical text forms.

mod modular;
mod text;

pub(crate) use modular::power_table;
pub use modular::{mod_inverse, mod_mul, mod_pow, modular_primes, rational_mod, ModularImage};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Variable names shared by every polynomial of one ring.
#[derive(Clone)]
pub struct Ring {
    names: Arc<[String]>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring{:?}", &*self.names)
    }
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring> {
        let names: Vec<String> = names
            .iter()
            .map(|s| s.as_ref().trim().to_string())
            .collect();
        for (i, name) in names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(Error::InvalidInput(format!(
                    "`{name}` is not a valid variable name"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidInput(format!(
                    "variable `{name}` declared twice"
                )));
            }
        }
        Ok(Ring {
            names: names.into(),
        })
    }

    /// `x, y, z` for up to three variables, `x1, ..., xn` beyond.
    pub fn standard(n: usize) -> Ring {
        let names: Vec<String> = if n <= 3 {
            ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        Ring {
            names: names.into(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The ring with one more variable appended.
    pub fn with_var(&self, name: &str) -> Result<Ring> {
        let mut names = self.names.to_vec();
        names.push(name.to_string());
        Ring::new(&names)
    }

    pub fn without_var(&self, var: usize) -> Ring {
        let mut names = self.names.to_vec();
        names.remove(var);
        Ring {
            names: names.into(),
        }
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        let mut terms = Vec::new();
        if !c.is_zero() {
            terms.push((Monomial::one(self.nvars()), c));
        }
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    /// The coordinate polynomial of variable `var`; panics when out of range.
    pub fn var(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars(), "variable index {var} out of range");
        self.term(Rational::one(), Monomial::variable(self.nvars(), var))
    }

    pub fn term(&self, c: Rational, m: Monomial) -> Polynomial {
        assert_eq!(m.nvars(), self.nvars());
        let mut terms = Vec::new();
        if !c.is_zero() {
            terms.push((m, c));
        }
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    /// All monomials of total degree exactly `degree`, in descending graded-lex order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.nvars()];
        fill_monomials(&mut exps, 0, degree, &mut out);
        out
    }
}

fn fill_monomials(exps: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    let n = exps.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial::one(0));
        }
        return;
    }
    if pos == n - 1 {
        exps[pos] = remaining;
        out.push(Monomial::new(exps.iter().copied()));
        exps[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        fill_monomials(exps, pos + 1, remaining - e, out);
    }
    exps[pos] = 0;
}

/// An exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn new<I: IntoIterator<Item = u32>>(exps: I) -> Monomial {
        Monomial(exps.into_iter().collect())
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn variable(nvars: usize, var: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[var] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    /// Descending graded-lex order, nonzero coefficients only.
    terms: Vec<(Monomial, Rational)>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                ring.nvars(),
                "monomial arity does not match ring"
            );
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_accumulator(ring, acc)
    }

    fn from_accumulator(ring: &Ring, acc: HashMap<Monomial, Rational>) -> Polynomial {
        let mut terms: Vec<(Monomial, Rational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Constant term, as a rational.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(
                self.terms
                    .first()
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Degree {
        // Graded order puts the highest degree first.
        self.terms
            .first()
            .map_or(Degree::NegInfinity, |(m, _)| Degree::Finite(m.degree()))
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(t, _)| t.degree() == d)
            }
        }
    }

    pub fn degree_info(&self) -> (Degree, bool) {
        (self.total_degree(), self.is_homogeneous())
    }

    /// Largest exponent of `var`, `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.0[var]).max()
    }

    /// The homogeneous component of total degree `degree`.
    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == degree)
            .cloned()
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "polynomials over {:?} and {:?}",
                self.ring.names(),
                other.ring.names()
            )))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some((a, _)), Some((b, _))) => a.cmp(b),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    terms.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_accumulator(&self.ring, acc)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        // Multiplying by a monomial preserves the order.
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars() {
            return Err(Error::Context(format!(
                "variable index {var} out of range for {} variables",
                self.nvars()
            )));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut dm = m.clone();
                let e = dm.0[var];
                dm.0[var] -= 1;
                (dm, c * rat(e as i64))
            });
        Ok(Self::from_terms(&self.ring, terms))
    }

    /// Exact division: `Ok(Some(q))` with `self = q * divisor`, or `Ok(None)`
    /// when the divisor does not divide `self`.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_ring(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Some(self.ring.zero()));
        }
        if self.total_degree() < divisor.total_degree() {
            return Ok(None);
        }
        let mut remainder: BTreeMap<Monomial, Rational> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        // If divisor | self then every intermediate remainder is a multiple of the
        // divisor, so its leading monomial is a multiple of the divisor's.
        while let Some((m, c)) = remainder.pop_last() {
            let Some(qm) = m.div(lead_m) else {
                return Ok(None);
            };
            let qc = &c / lead_c;
            for (dm, dc) in divisor.terms.iter().skip(1) {
                let target = dm.mul(&qm);
                let delta = &qc * dc;
                match remainder.entry(target) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        // Quotient monomials were produced in strictly descending order.
        Ok(Some(Polynomial {
            ring: self.ring.clone(),
            terms: quotient,
        }))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::Context(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Evaluation modulo the prime `p`, reducing each coefficient `n/d` to `n * d^-1`.
    pub fn evaluate_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        if point.len() != self.nvars() {
            return Err(Error::Context(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        ModularImage::new(self, p)?.evaluate(point)
    }

    /// Substitutes polynomials (over `target`) for every variable.
    pub fn compose(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::Context("wrong number of substitution images".into()));
        }
        for img in images {
            if img.ring() != target {
                return Err(Error::Context(
                    "substitution images live in different rings".into(),
                ));
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![target.one(), p.clone()])
            .collect();
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                while powers[v].len() <= e as usize {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                if e > 0 {
                    t = &t * &powers[v][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Homogenizes to `target_degree` with a new variable appended to the ring.
    pub fn homogenize(&self, new_var: &str, target_degree: u32) -> Result<Polynomial> {
        let ring = self.ring.with_var(new_var)?;
        if let Degree::Finite(d) = self.total_degree() {
            if d > target_degree {
                return Err(Error::Degree(format!(
                    "target degree {target_degree} is below the polynomial degree {d}"
                )));
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.0.clone();
            exps.push(target_degree - m.degree());
            (Monomial(exps), c.clone())
        });
        Ok(Self::from_terms(&ring, terms))
    }

    /// Sets variable `var` to `value` and drops it from the ring.
    pub fn dehomogenize(&self, var: usize, value: &Rational) -> Result<Polynomial> {
        if var >= self.nvars() {
            return Err(Error::Context(format!("variable index {var} out of range")));
        }
        let ring = self.ring.without_var(var);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.0.clone();
            let e = exps.remove(var);
            (
                Monomial(exps),
                c * num_traits::pow(value.clone(), e as usize),
            )
        });
        Ok(Self::from_terms(&ring, terms))
    }

    /// Moves the polynomial into `target`, whose variable names must include
    /// every variable actually used here.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial> {
        let map: Vec<Option<usize>> = self
            .ring
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = Monomial::one(target.nvars());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let t =
                    map[v].ok_or_else(|| Error::UnknownVariable(self.ring.name(v).to_string()))?;
                exps.0[t] = e;
            }
            terms.push((exps, c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    /// Sum of absolute values of the coefficients.
    pub fn coefficient_norm(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (_, c)| acc + c.abs())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on mismatched rings; use [`Polynomial::checked_add`] to get an error instead.
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs)
            .expect("ring mismatch in polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs)
            .expect("ring mismatch in polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
