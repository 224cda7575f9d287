//! Independent reference implementations used as test oracles. Nothing here
//! calls the library's arithmetic, determinant or extactic code.

#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use extatica::polyring::{Monomial, Polynomial, Ring};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Dense map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dense {
    pub nvars: usize,
    pub coeffs: BTreeMap<Vec<u32>, Q>,
}

impl Dense {
    pub fn zero(nvars: usize) -> Dense {
        Dense {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Dense {
        let mut d = Dense::zero(nvars);
        d.add_term(vec![0; nvars], c);
        d
    }

    pub fn var(nvars: usize, i: usize) -> Dense {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut d = Dense::zero(nvars);
        d.add_term(e, q(1));
        d
    }

    pub fn from_poly(p: &Polynomial) -> Dense {
        let mut d = Dense::zero(p.nvars());
        for (m, c) in p.terms() {
            d.add_term(m.exponents().to_vec(), c.clone());
        }
        d
    }

    pub fn to_poly(&self, ring: &Ring) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.coeffs
                .iter()
                .map(|(e, c)| (Monomial::new(e.iter().copied()), c.clone())),
        )
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        let slot = self.coeffs.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let mut r = self.clone();
        for (e, c) in &o.coeffs {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Q) -> Dense {
        let mut r = Dense::zero(self.nvars);
        for (e, v) in &self.coeffs {
            r.add_term(e.clone(), v * c);
        }
        r
    }

    pub fn sub(&self, o: &Dense) -> Dense {
        self.add(&o.scale(&q(-1)))
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let mut r = Dense::zero(self.nvars);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Dense {
        (0..k).fold(Dense::constant(self.nvars, q(1)), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self, i: usize) -> Dense {
        let mut r = Dense::zero(self.nvars);
        for (e, c) in &self.coeffs {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * q(e[i] as i64));
            }
        }
        r
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.coeffs {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|e| e.iter().sum()).max()
    }
}

/// `X(f) = sum_i P_i df/dx_i`.
pub fn apply_field(field: &[Dense], f: &Dense) -> Dense {
    field
        .iter()
        .enumerate()
        .fold(Dense::zero(f.nvars), |acc, (i, p)| {
            acc.add(&p.mul(&f.deriv(i)))
        })
}

/// Determinant by Laplace expansion along the first row.
pub fn laplace_det(m: &[Vec<Dense>], nvars: usize) -> Dense {
    let n = m.len();
    if n == 0 {
        return Dense::constant(nvars, q(1));
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Dense::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Dense>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&laplace_det(&minor, nvars));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Rows `s_i, X(s_i), X^2(s_i), ...`.
pub fn jet_oracle(field: &[Dense], basis: &[Dense]) -> Vec<Vec<Dense>> {
    let m = basis.len();
    basis
        .iter()
        .map(|s| {
            let mut row = vec![s.clone()];
            for _ in 1..m {
                let next = apply_field(field, row.last().unwrap());
                row.push(next);
            }
            row
        })
        .collect()
}

pub fn extactic_oracle(field: &[Dense], basis: &[Dense]) -> Dense {
    laplace_det(&jet_oracle(field, basis), field[0].nvars)
}

/// Exponent vectors of total degree exactly `d`, descending lex.
pub fn exponents_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents_of_degree(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn monomial_basis(nvars: usize, degrees: impl IntoIterator<Item = u32>) -> Vec<Dense> {
    degrees
        .into_iter()
        .flat_map(|d| exponents_of_degree(nvars, d))
        .map(|e| {
            let mut p = Dense::zero(nvars);
            p.add_term(e, q(1));
            p
        })
        .collect()
}

/// Right kernel of a rational matrix by Gauss-Jordan elimination.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= pv * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = q(1);
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[ri][free].clone();
            }
            v
        })
        .collect()
}

/// Brute-force search for invariant curves of degree `deg` with linear
/// cofactors `a x + b y + c z`, `a, b, c` ranging over `grid`. For each
/// cofactor the conditions `X(F) = K F` are linear in the coefficients of
/// `F`; their kernel is computed exactly. Single-term solutions are dropped.
/// Returns `(F, K)` pairs with `F` scaled to leading coefficient 1.
pub fn invariant_search(field: &[Dense], deg: u32, grid: &[Q]) -> Vec<(Dense, Dense)> {
    let nvars = field.len();
    assert_eq!(nvars, 3);
    let unknowns = exponents_of_degree(nvars, deg);
    let field_deg = field.iter().filter_map(Dense::degree).max().unwrap();
    let target = exponents_of_degree(nvars, deg + field_deg - 1);
    // X applied to each unknown monomial, computed once.
    let images: Vec<Dense> = unknowns
        .iter()
        .map(|e| {
            let mut m = Dense::zero(nvars);
            m.add_term(e.clone(), q(1));
            apply_field(field, &m)
        })
        .collect();
    let mut found = Vec::new();
    for a in grid {
        for b in grid {
            for c in grid {
                let k = Dense::var(3, 0)
                    .scale(a)
                    .add(&Dense::var(3, 1).scale(b))
                    .add(&Dense::var(3, 2).scale(c));
                let columns: Vec<Dense> = unknowns
                    .iter()
                    .zip(&images)
                    .map(|(e, img)| {
                        let mut m = Dense::zero(nvars);
                        m.add_term(e.clone(), q(1));
                        img.sub(&k.mul(&m))
                    })
                    .collect();
                let rows: Vec<Vec<Q>> = target
                    .iter()
                    .map(|t| {
                        columns
                            .iter()
                            .map(|col| col.coeffs.get(t).cloned().unwrap_or_else(Q::zero))
                            .collect()
                    })
                    .collect();
                for v in kernel(&rows, unknowns.len()) {
                    let mut f = Dense::zero(nvars);
                    for (e, c) in unknowns.iter().zip(&v) {
                        f.add_term(e.clone(), c.clone());
                    }
                    if f.coeffs.len() > 1 {
                        let lead = f.coeffs.iter().next_back().map(|(_, c)| c.clone()).unwrap();
                        found.push((f.scale(&lead.recip()), k.clone()));
                    }
                }
            }
        }
    }
    found
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}
