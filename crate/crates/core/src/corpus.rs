//! Built-in vector fields with known behavior.
//!
//! Every entry carries a list of facts. Checkable facts (cofactors, first
//! integrals, degrees) are verified when the entry is built and construction
//! fails if any does not hold. Facts that cannot be checked mechanically are
//! recorded with a citation.
//!
//! All randomness comes from [`seeded_rng`], a ChaCha8 stream keyed by one
//! 64-bit seed, so fixtures are reproducible across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::foliation::{Mode, VectorField};
use crate::polyring::{rat, ratio, Monomial, Polynomial, Rational, Ring};

/// The generator behind every seeded fixture.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Claim {
    Invariant {
        curve: Polynomial,
        cofactor: Polynomial,
    },
    FirstIntegral {
        numerator: Polynomial,
        denominator: Polynomial,
    },
    NoRationalFirstIntegral,
    /// Degree of an irreducible invariant hypersurface.
    AlgebraicSolution {
        degree: u32,
    },
    FoliationDegree(i64),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Source {
    /// Taken from the literature; `location` says where.
    Cited { location: &'static str },
    /// Checked by the named procedure at construction.
    Checked { oracle: &'static str },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fact {
    pub claim: Claim,
    pub source: Source,
}

impl Fact {
    fn checked(claim: Claim, oracle: &'static str) -> Fact {
        Fact {
            claim,
            source: Source::Checked { oracle },
        }
    }

    fn cited(claim: Claim, location: &'static str) -> Fact {
        Fact {
            claim,
            source: Source::Cited { location },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = match &self.claim {
            Claim::Invariant { curve, cofactor } => {
                json!({"claim": "invariant", "curve": curve.to_string(), "cofactor": cofactor.to_string()})
            }
            Claim::FirstIntegral {
                numerator,
                denominator,
            } => json!({
                "claim": "first-integral",
                "numerator": numerator.to_string(),
                "denominator": denominator.to_string(),
            }),
            Claim::NoRationalFirstIntegral => json!({"claim": "no-rational-first-integral"}),
            Claim::AlgebraicSolution { degree } => {
                json!({"claim": "algebraic-solution", "degree": degree})
            }
            Claim::FoliationDegree(d) => json!({"claim": "foliation-degree", "degree": d}),
        };
        let (kind, detail) = match &self.source {
            Source::Cited { location } => ("cited", *location),
            Source::Checked { oracle } => ("checked", *oracle),
        };
        v["source"] = json!(kind);
        v["detail"] = json!(detail);
        v
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub field: VectorField,
    pub facts: Vec<Fact>,
    pub note: String,
}

impl CorpusEntry {
    fn build(
        name: String,
        field: VectorField,
        facts: Vec<Fact>,
        note: &str,
    ) -> Result<CorpusEntry> {
        for fact in &facts {
            if let Source::Checked { .. } = fact.source {
                verify(&field, &fact.claim).map_err(|e| match e {
                    Error::InternalConsistency(msg) => {
                        Error::InternalConsistency(format!("{name}: {msg}"))
                    }
                    other => other,
                })?;
            }
        }
        Ok(CorpusEntry {
            name,
            field,
            facts,
            note: note.to_string(),
        })
    }

    /// Invariant hypersurfaces recorded for this entry.
    pub fn invariants(&self) -> impl Iterator<Item = (&Polynomial, &Polynomial)> {
        self.facts.iter().filter_map(|f| match &f.claim {
            Claim::Invariant { curve, cofactor } => Some((curve, cofactor)),
            _ => None,
        })
    }

    pub fn first_integral(&self) -> Option<(&Polynomial, &Polynomial)> {
        self.facts.iter().find_map(|f| match &f.claim {
            Claim::FirstIntegral {
                numerator,
                denominator,
            } => Some((numerator, denominator)),
            _ => None,
        })
    }

    pub fn facts_json(&self) -> Value {
        Value::Array(self.facts.iter().map(Fact::to_json).collect())
    }
}

fn verify(field: &VectorField, claim: &Claim) -> Result<()> {
    let fail = |what: String| Err(Error::InternalConsistency(what));
    match claim {
        Claim::Invariant { curve, cofactor } => match field.check_invariance(curve)? {
            Some(k) if &k.polynomial == cofactor => Ok(()),
            Some(k) => fail(format!(
                "{curve} has cofactor {}, expected {cofactor}",
                k.polynomial
            )),
            None => fail(format!("{curve} is not invariant")),
        },
        Claim::FirstIntegral {
            numerator,
            denominator,
        } => {
            let cross = &(&field.apply(numerator)? * denominator)
                - &(numerator * &field.apply(denominator)?);
            if cross.is_zero() {
                Ok(())
            } else {
                fail(format!(
                    "{numerator} / {denominator} is not a first integral"
                ))
            }
        }
        Claim::FoliationDegree(d) => {
            let got = field.foliation_degree()?.degree;
            if got == *d {
                Ok(())
            } else {
                fail(format!("foliation degree {got}, expected {d}"))
            }
        }
        Claim::NoRationalFirstIntegral | Claim::AlgebraicSolution { .. } => Ok(()),
    }
}

fn poly(ring: &Ring, terms: &[(Rational, [u32; 3])]) -> Polynomial {
    Polynomial::from_terms(
        ring,
        terms
            .iter()
            .map(|(c, e)| (Monomial::new(e.iter().copied()), c.clone())),
    )
}

/// The Lotka-Volterra family
/// `(x(y/2 + z), y(2z + x), z(y - (2l+1)/(2l-1) x))` on P^2.
pub fn slv(ell: i64) -> Result<CorpusEntry> {
    if ell < 1 {
        return Err(Error::InvalidInput(format!("slv needs l >= 1, got {ell}")));
    }
    let r = Ring::standard(3);
    let (x, y, z) = (r.var(0), r.var(1), r.var(2));
    let c = ratio(2 * ell + 1, 2 * ell - 1);
    let k1 = &y.scale(&ratio(1, 2)) + &z;
    let k2 = &z.scale(&rat(2)) + &x;
    let k3 = &y - &x.scale(&c);
    let field = VectorField::new(vec![&x * &k1, &y * &k2, &z * &k3], Mode::Homogeneous)?;
    let mut facts = vec![
        Fact::checked(Claim::FoliationDegree(2), "foliation_degree"),
        Fact::cited(
            Claim::NoRationalFirstIntegral,
            "stated for the whole family",
        ),
        Fact::cited(
            Claim::AlgebraicSolution {
                degree: 2 * ell as u32,
            },
            "irreducible solution of degree 2l, stated for the whole family",
        ),
        Fact::checked(
            Claim::Invariant {
                curve: x,
                cofactor: k1,
            },
            "check_invariance",
        ),
        Fact::checked(
            Claim::Invariant {
                curve: y,
                cofactor: k2,
            },
            "check_invariance",
        ),
        Fact::checked(
            Claim::Invariant {
                curve: z,
                cofactor: k3,
            },
            "check_invariance",
        ),
    ];
    match ell {
        1 => facts.push(Fact::checked(
            Claim::Invariant {
                curve: poly(
                    &r,
                    &[
                        (rat(4), [2, 0, 0]),
                        (rat(-4), [1, 1, 0]),
                        (rat(1), [0, 2, 0]),
                        (rat(-2), [0, 1, 1]),
                    ],
                ),
                cofactor: r.var(2).scale(&rat(2)),
            },
            "conic search over linear cofactors, then check_invariance",
        )),
        2 => facts.push(Fact::checked(
            Claim::Invariant {
                curve: poly(
                    &r,
                    &[
                        (rat(8), [4, 0, 0]),
                        (rat(-8), [3, 1, 0]),
                        (rat(2), [2, 2, 0]),
                        (rat(-12), [2, 1, 1]),
                        (rat(24), [1, 2, 1]),
                        (rat(-9), [0, 3, 1]),
                        (rat(18), [0, 2, 2]),
                    ],
                ),
                cofactor: &r.var(1) + &r.var(2).scale(&rat(4)),
            },
            "quartic search over linear cofactors, then check_invariance",
        )),
        _ => {}
    }
    CorpusEntry::build(
        format!("slv:{ell}"),
        field,
        facts,
        "Lotka-Volterra family without rational first integrals",
    )
}

/// The Hamiltonian field `(-H_y, H_x)` of a plane polynomial.
pub fn hamiltonian(h: &Polynomial) -> Result<CorpusEntry> {
    if h.nvars() != 2 {
        return Err(Error::InvalidInput(
            "hamiltonian needs a polynomial in 2 variables".into(),
        ));
    }
    if h.is_constant() {
        return Err(Error::InvalidInput(
            "hamiltonian needs a non-constant polynomial".into(),
        ));
    }
    let field = VectorField::new(
        vec![-&h.partial_derivative(1)?, h.partial_derivative(0)?],
        Mode::Affine,
    )?;
    let facts = vec![Fact::checked(
        Claim::FirstIntegral {
            numerator: h.clone(),
            denominator: h.ring().one(),
        },
        "X(H) = 0",
    )];
    CorpusEntry::build(
        format!("hamiltonian:{h}"),
        field,
        facts,
        "polynomial first integral H",
    )
}

fn proportional(f: &Polynomial, g: &Polynomial) -> bool {
    match (f.leading_coefficient(), g.leading_coefficient()) {
        (Some(a), Some(b)) => f.scale(b) == g.scale(a),
        _ => true,
    }
}

/// The plane field tangent to the pencil `f/g`:
/// `(g_y f - f_y g, f_x g - g_x f)`.
pub fn pencil_field(f: &Polynomial, g: &Polynomial) -> Result<CorpusEntry> {
    if f.nvars() != 2 || f.ring() != g.ring() {
        return Err(Error::InvalidInput(
            "pencil needs two polynomials in the same 2-variable ring".into(),
        ));
    }
    if proportional(f, g) {
        return Err(Error::InvalidInput(format!(
            "pencil members {f} and {g} are proportional"
        )));
    }
    let (fx, fy) = (f.partial_derivative(0)?, f.partial_derivative(1)?);
    let (gx, gy) = (g.partial_derivative(0)?, g.partial_derivative(1)?);
    let p = &(&gy * f) - &(&fy * g);
    let q = &(&fx * g) - &(&gx * f);
    let field = VectorField::new(vec![p, q], Mode::Affine)?;
    let facts = vec![Fact::checked(
        Claim::FirstIntegral {
            numerator: f.clone(),
            denominator: g.clone(),
        },
        "X(f) g - f X(g) = 0",
    )];
    CorpusEntry::build(
        format!("pencil:{f};{g}"),
        field,
        facts,
        "rational first integral f/g",
    )
}

fn random_homogeneous(ring: &Ring, degree: u32, bound: i64, rng: &mut ChaCha8Rng) -> Polynomial {
    let monomials = ring.monomials_of_degree(degree);
    loop {
        let p = Polynomial::from_terms(
            ring,
            monomials
                .iter()
                .map(|m| (m.clone(), rat(rng.gen_range(-bound..=bound)))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_dense(ring: &Ring, degree: u32, bound: i64, rng: &mut ChaCha8Rng) -> Polynomial {
    let monomials: Vec<Monomial> = (0..=degree)
        .flat_map(|d| ring.monomials_of_degree(d))
        .collect();
    loop {
        let p = Polynomial::from_terms(
            ring,
            monomials
                .iter()
                .map(|m| (m.clone(), rat(rng.gen_range(-bound..=bound)))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// Components `x_i q_i` with `q_i` homogeneous of degree `d - 1`, so every
/// coordinate hyperplane is invariant with cofactor `q_i`.
///
/// Three or more variables give a homogeneous field; two give an affine one.
pub fn planted_lines_field(n: usize, d: u32, seed: u64) -> Result<CorpusEntry> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidInput(format!(
            "planted field needs n >= 2 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    let ring = Ring::standard(n);
    let mut rng = seeded_rng(seed);
    let qs: Vec<Polynomial> = (0..n)
        .map(|_| random_homogeneous(&ring, d - 1, 5, &mut rng))
        .collect();
    let components = qs
        .iter()
        .enumerate()
        .map(|(i, q)| &ring.var(i) * q)
        .collect();
    let mode = if n >= 3 {
        Mode::Homogeneous
    } else {
        Mode::Affine
    };
    let field = VectorField::new(components, mode)?;
    let facts = qs
        .into_iter()
        .enumerate()
        .map(|(i, q)| {
            Fact::checked(
                Claim::Invariant {
                    curve: ring.var(i),
                    cofactor: q,
                },
                "check_invariance",
            )
        })
        .collect();
    CorpusEntry::build(
        format!("planted:{n},{d},{seed}"),
        field,
        facts,
        "coordinate hyperplanes planted invariant",
    )
}

/// Dense random field with integer coefficients uniform in `[-9, 9]`.
/// Homogeneous mode uses every monomial of degree exactly `d`; affine mode
/// every monomial of degree at most `d`. All-zero components are redrawn.
pub fn random_field(n: usize, d: u32, seed: u64, mode: Mode) -> Result<VectorField> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "random field needs n >= 2, got {n}"
        )));
    }
    let ring = Ring::standard(n);
    let mut rng = seeded_rng(seed);
    let components = (0..n)
        .map(|_| match mode {
            Mode::Homogeneous => random_homogeneous(&ring, d, 9, &mut rng),
            Mode::Affine => random_dense(&ring, d, 9, &mut rng),
        })
        .collect();
    VectorField::new(components, mode)
}
