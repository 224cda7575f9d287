//! Polynomial vector fields acting as derivations, with the degree
//! conventions used for foliations on affine and projective space.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::polyring::{rat, Degree, Polynomial, Ring};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Mode {
    /// A field on affine n-space.
    Affine,
    /// A homogeneous field on C^n presenting a foliation of P^(n-1).
    Homogeneous,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Affine => "affine",
            Mode::Homogeneous => "homogeneous",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "affine" => Ok(Mode::Affine),
            "homogeneous" => Ok(Mode::Homogeneous),
            other => Err(Error::InvalidInput(format!("unknown mode `{other}`"))),
        }
    }
}

/// The derivation `sum_i P_i d/dx_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    ring: Ring,
    components: Vec<Polynomial>,
    mode: Mode,
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>, mode: Mode) -> Result<VectorField> {
        let ring = components
            .first()
            .map(|p| p.ring().clone())
            .ok_or_else(|| {
                Error::InvalidInput("a vector field needs at least one component".into())
            })?;
        if components.len() != ring.nvars() {
            return Err(Error::Context(format!(
                "{} components for {} variables",
                components.len(),
                ring.nvars()
            )));
        }
        if components.iter().any(|c| c.ring() != &ring) {
            return Err(Error::Context("components live in different rings".into()));
        }
        if mode == Mode::Homogeneous {
            let mut common = None;
            for c in components.iter().filter(|c| !c.is_zero()) {
                if !c.is_homogeneous() {
                    return Err(Error::InvalidInput(format!(
                        "component `{c}` is not homogeneous"
                    )));
                }
                let d = c.total_degree();
                match common {
                    None => common = Some(d),
                    Some(e) if e != d => {
                        return Err(Error::InvalidInput(
                            "homogeneous components must share one degree".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(VectorField {
            ring,
            components,
            mode,
        })
    }

    /// Homogeneous when there are at least three variables and all nonzero
    /// components are homogeneous of one degree; affine otherwise.
    pub fn with_default_mode(components: Vec<Polynomial>) -> Result<VectorField> {
        let nvars = components.first().map_or(0, |c| c.nvars());
        let mut degrees = components
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| (c.is_homogeneous(), c.total_degree()));
        let first = degrees.next();
        let uniform = match first {
            Some((true, d)) => degrees.all(|(h, e)| h && e == d),
            _ => false,
        };
        let mode = if uniform && nvars >= 3 {
            Mode::Homogeneous
        } else {
            Mode::Affine
        };
        VectorField::new(components, mode)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn with_mode(&self, mode: Mode) -> Result<VectorField> {
        VectorField::new(self.components.clone(), mode)
    }

    /// `X(f) = sum_i P_i * df/dx_i`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring() != &self.ring {
            return Err(Error::Context(
                "polynomial and field live in different rings".into(),
            ));
        }
        let mut acc = self.ring.zero();
        for (var, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let df = f.partial_derivative(var)?;
            if !df.is_zero() {
                acc = &acc + &(p * &df);
            }
        }
        Ok(acc)
    }

    pub fn max_component_degree(&self) -> Degree {
        self.components
            .iter()
            .map(Polynomial::total_degree)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// `Some(g)` when the components equal `g * x_i` for every `i`.
    fn radial_multiplier(parts: &[Polynomial]) -> Option<Polynomial> {
        let ring = parts.first()?.ring().clone();
        let (j, pj) = parts.iter().enumerate().find(|(_, p)| !p.is_zero())?;
        let g = pj.divide_exact(&ring.var(j)).ok()??;
        for (i, p) in parts.iter().enumerate() {
            if p != &(&g * &ring.var(i)) {
                return None;
            }
        }
        Some(g)
    }

    /// Projective degree of the foliation presented by this field.
    ///
    /// Homogeneous mode: the common component degree. Affine mode: the
    /// largest component degree `D`, lowered to `D - 1` when the degree-`D`
    /// part is a multiple of the radial field (then the line at infinity is
    /// not invariant).
    pub fn foliation_degree(&self) -> Result<FoliationDegree> {
        let max = self
            .max_component_degree()
            .finite()
            .filter(|_| !self.is_zero())
            .ok_or_else(|| Error::DegenerateField("the zero field defines no foliation".into()))?;
        match self.mode {
            Mode::Homogeneous => Ok(FoliationDegree {
                degree: max as i64,
                max_component_degree: max,
                radial_top: Self::radial_multiplier(&self.components).is_some(),
            }),
            Mode::Affine => {
                let top: Vec<Polynomial> = self
                    .components
                    .iter()
                    .map(|c| c.homogeneous_part(max))
                    .collect();
                let radial_top = max > 0 && Self::radial_multiplier(&top).is_some();
                let degree = if radial_top {
                    max as i64 - 1
                } else {
                    max as i64
                };
                Ok(FoliationDegree {
                    degree,
                    max_component_degree: max,
                    radial_top,
                })
            }
        }
    }

    /// Darboux test: `Some(K)` with `X(f) = K f`, checked by re-multiplication.
    pub fn check_invariance(&self, f: &Polynomial) -> Result<Option<Cofactor>> {
        if f.ring() != &self.ring {
            return Err(Error::Context(
                "curve and field live in different rings".into(),
            ));
        }
        if f.is_constant() {
            return Err(Error::InvalidDivisor(
                "an invariant divisor must be non-constant".into(),
            ));
        }
        if self.mode == Mode::Homogeneous && !f.is_homogeneous() {
            return Err(Error::InvalidDivisor(format!("`{f}` is not homogeneous")));
        }
        let xf = self.apply(f)?;
        let Some(k) = xf.divide_exact(f)? else {
            return Ok(None);
        };
        if &xf - &(&k * f) != self.ring.zero() {
            return Err(Error::InternalConsistency(
                "cofactor failed re-verification".into(),
            ));
        }
        if self.mode == Mode::Homogeneous && !k.is_zero() {
            let d = self.max_component_degree().finite().unwrap_or(0);
            debug_assert!(
                k.is_homogeneous() && k.total_degree() == Degree::Finite(d.saturating_sub(1))
            );
        }
        Ok(Some(Cofactor { polynomial: k }))
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField> {
        if other.ring != self.ring {
            return Err(Error::Context("fields live in different rings".into()));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a + b)
            .collect();
        VectorField::new(comps, self.mode)
    }

    /// `h * X`.
    pub fn multiply(&self, h: &Polynomial) -> Result<VectorField> {
        if h.ring() != &self.ring {
            return Err(Error::Context(
                "multiplier lives in a different ring".into(),
            ));
        }
        VectorField::new(self.components.iter().map(|c| c * h).collect(), self.mode)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FoliationDegree {
    pub degree: i64,
    pub max_component_degree: u32,
    /// The top-degree part is a polynomial multiple of the radial field.
    pub radial_top: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cofactor {
    pub polynomial: Polynomial,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CotangentDegree {
    pub value: i64,
    /// Set when the value is not positive.
    pub non_positive: bool,
}

/// `deg(T_F^*) = deg(F) - deg(X)`.
pub fn cotangent_degree(foliation_degree: i64, variety_degree: i64) -> CotangentDegree {
    let value = foliation_degree - variety_degree;
    CotangentDegree {
        value,
        non_positive: value <= 0,
    }
}

/// `R = sum_i x_i d/dx_i` on `ring`, homogeneous of degree 1.
pub fn radial_field(ring: &Ring) -> Result<VectorField> {
    if ring.nvars() < 2 {
        return Err(Error::InvalidInput(
            "the radial field needs at least two variables".into(),
        ));
    }
    VectorField::new(
        (0..ring.nvars()).map(|i| ring.var(i)).collect(),
        Mode::Homogeneous,
    )
}

/// Euler's identity `R(f) = deg(f) f` for homogeneous `f`.
pub fn euler_check(f: &Polynomial) -> Result<bool> {
    let r = radial_field(f.ring())?;
    let d = f.total_degree().finite().unwrap_or(0);
    Ok(r.apply(f)? == f.scale(&rat(d as i64)))
}

impl Cofactor {
    pub fn is_constant_one(&self) -> bool {
        self.polynomial.constant_value().is_some_and(|c| c.is_one())
    }
}
