//! Extactic polynomials of vector fields with respect to linear systems.
//!
//! For a field `X` and a basis `s_1, ..., s_m` of a linear system `V`, the
//! jet matrix has entries `X^j(s_i)` for `j = 0..m`. Its determinant is the
//! extactic polynomial `E(X, V)`. It vanishes identically exactly when `X`
//! has a first integral built from `V`, and otherwise every invariant curve
//! cut out by an element of `V` divides it.
//!
//! Jet columns are plain iterates `X^j`; the `1/j!` normalisation only
//! rescales `E` by a nonzero constant.

mod first_integral;
mod matrix;
mod modular;

pub use first_integral::{extract_first_integral, FirstIntegral};
pub use matrix::{det_fraction_free, PolyMatrix};
pub use modular::det_modular;

pub(crate) use modular::det_mod_p;

use std::fmt;

use crate::error::{Error, Result};
use crate::foliation::{Mode, VectorField};
use crate::polyring::{Degree, Polynomial, Rational, Ring};

/// Largest system dimension accepted without an explicit override.
pub const DEFAULT_MAX_DIM: usize = 21;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum SystemKind {
    /// All monomials of degree at most `k`.
    Affine,
    /// All monomials of degree exactly `k`.
    Homogeneous,
    /// A user-supplied basis.
    Custom,
}

/// An ordered basis of a finite-dimensional space of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSystem {
    ring: Ring,
    basis: Vec<Polynomial>,
    kind: SystemKind,
    degree: u32,
}

impl LinearSystem {
    /// The complete monomial system, ordered by degree and then descending lex.
    pub fn monomial(ring: &Ring, k: u32, kind: SystemKind) -> Result<LinearSystem> {
        if ring.nvars() == 0 {
            return Err(Error::InvalidInput(
                "a linear system needs at least one variable".into(),
            ));
        }
        if k == 0 {
            return Err(Error::InvalidInput(
                "system degree must be at least 1".into(),
            ));
        }
        let degrees: Vec<u32> = match kind {
            SystemKind::Affine => (0..=k).collect(),
            SystemKind::Homogeneous => vec![k],
            SystemKind::Custom => {
                return Err(Error::InvalidInput(
                    "use LinearSystem::from_basis for custom systems".into(),
                ))
            }
        };
        let basis = degrees
            .into_iter()
            .flat_map(|d| ring.monomials_of_degree(d))
            .map(|m| ring.term(Rational::from_integer(1.into()), m))
            .collect();
        Ok(LinearSystem {
            ring: ring.clone(),
            basis,
            kind,
            degree: k,
        })
    }

    /// A custom basis; the elements must be linearly independent over the rationals.
    pub fn from_basis(basis: Vec<Polynomial>) -> Result<LinearSystem> {
        let ring = basis
            .first()
            .map(|p| p.ring().clone())
            .ok_or_else(|| Error::InvalidInput("empty basis".into()))?;
        if basis.iter().any(|b| b.ring() != &ring) {
            return Err(Error::Context(
                "basis elements live in different rings".into(),
            ));
        }
        if coefficient_rank(&basis) != basis.len() {
            return Err(Error::InvalidInput(
                "basis elements are linearly dependent".into(),
            ));
        }
        let degree = basis
            .iter()
            .filter_map(|b| b.total_degree().finite())
            .max()
            .unwrap_or(0);
        Ok(LinearSystem {
            ring,
            basis,
            kind: SystemKind::Custom,
            degree,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    /// The system degree `k`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// True when every basis element is homogeneous of degree `k`.
    pub fn is_homogeneous(&self) -> bool {
        match self.kind {
            SystemKind::Homogeneous => true,
            SystemKind::Affine => false,
            SystemKind::Custom => self
                .basis
                .iter()
                .all(|b| b.is_homogeneous() && b.total_degree() == Degree::Finite(self.degree)),
        }
    }
}

/// Rank of the coefficient vectors, by exact Gaussian elimination.
fn coefficient_rank(polys: &[Polynomial]) -> usize {
    use num_traits::Zero;
    let mut monomials: Vec<_> = polys
        .iter()
        .flat_map(|p| p.terms().iter().map(|(m, _)| m.clone()))
        .collect();
    monomials.sort();
    monomials.dedup();
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| monomials.iter().map(|m| p.coefficient(m)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..monomials.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                for c in col..monomials.len() {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The `m x m` matrix `X^j(s_i)`.
#[derive(Clone, Debug)]
pub struct JetMatrix {
    matrix: PolyMatrix,
}

impl JetMatrix {
    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        self.matrix.get(i, j)
    }
}

fn check_compatible(field: &VectorField, system: &LinearSystem) -> Result<()> {
    if field.ring() != system.ring() {
        return Err(Error::Context(
            "field and linear system live in different rings".into(),
        ));
    }
    if field.mode() == Mode::Homogeneous && !system.is_homogeneous() {
        return Err(Error::Precondition(
            "a homogeneous field needs a homogeneous linear system".into(),
        ));
    }
    Ok(())
}

/// Builds the jet matrix column by column: column `j + 1` is `X` applied to column `j`.
pub fn jet_matrix(field: &VectorField, system: &LinearSystem) -> Result<JetMatrix> {
    check_compatible(field, system)?;
    let m = system.dimension();
    let mut rows: Vec<Vec<Polynomial>> = system.basis().iter().map(|s| vec![s.clone()]).collect();
    for _ in 1..m {
        for row in rows.iter_mut() {
            let next = field.apply(row.last().expect("nonempty row"))?;
            row.push(next);
        }
    }
    Ok(JetMatrix {
        matrix: PolyMatrix::from_rows(system.ring(), rows)?,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Engine {
    FractionFree,
    Modular,
    /// Fraction-free up to dimension 4, modular beyond.
    Auto,
}

impl Engine {
    pub fn resolve(self, dimension: usize) -> Engine {
        match self {
            Engine::Auto if dimension <= 4 => Engine::FractionFree,
            Engine::Auto => Engine::Modular,
            e => e,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::FractionFree => "fraction-free",
            Engine::Modular => "modular",
            Engine::Auto => "auto",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "fraction-free" => Ok(Engine::FractionFree),
            "modular" => Ok(Engine::Modular),
            "auto" => Ok(Engine::Auto),
            other => Err(Error::InvalidInput(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExtacticOptions {
    pub engine: Engine,
    pub max_dim: usize,
    /// Worker cap for the modular engine; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for ExtacticOptions {
    fn default() -> Self {
        ExtacticOptions {
            engine: Engine::Auto,
            max_dim: DEFAULT_MAX_DIM,
            jobs: None,
        }
    }
}

impl ExtacticOptions {
    pub fn with_engine(engine: Engine) -> Self {
        ExtacticOptions {
            engine,
            ..Default::default()
        }
    }

    fn guard(&self, m: usize) -> Result<()> {
        if m > self.max_dim {
            Err(Error::ResourceGuard(format!(
                "system dimension {m} exceeds the limit {} (raise it explicitly to proceed)",
                self.max_dim
            )))
        } else {
            Ok(())
        }
    }
}

/// Determinant with the requested engine.
pub fn determinant(m: &PolyMatrix, engine: Engine, jobs: Option<usize>) -> Result<Polynomial> {
    match engine.resolve(m.rows()) {
        Engine::FractionFree => det_fraction_free(m),
        _ => det_modular(m, jobs),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtacticReport {
    pub extactic: Polynomial,
    pub identically_zero: bool,
    pub degree: Degree,
    pub degree_bound: i64,
    pub field_degree: i64,
    pub dimension: usize,
    pub system_degree: u32,
    /// The engine actually used (never `Auto`).
    pub engine: Engine,
}

/// `m k + (d - deg X) C(m, 2)`: the degree of the extactic divisor.
pub fn extactic_degree_bound(m: usize, k: u32, field_degree: i64, variety_degree: i64) -> i64 {
    let m = m as i64;
    m * k as i64 + (field_degree - variety_degree) * (m * (m - 1) / 2)
}

pub fn extactic(
    field: &VectorField,
    system: &LinearSystem,
    options: &ExtacticOptions,
) -> Result<ExtacticReport> {
    check_compatible(field, system)?;
    let m = system.dimension();
    options.guard(m)?;
    let field_degree = field.foliation_degree()?.degree;
    let jet = jet_matrix(field, system)?;
    let engine = options.engine.resolve(m);
    let e = determinant(jet.matrix(), engine, options.jobs)?;
    Ok(ExtacticReport {
        identically_zero: e.is_zero(),
        degree: e.total_degree(),
        degree_bound: extactic_degree_bound(m, system.degree(), field_degree, 1),
        field_degree,
        dimension: m,
        system_degree: system.degree(),
        engine,
        extactic: e,
    })
}

/// Whether `curve` divides the extactic polynomial exactly.
pub fn divides_extactic(curve: &Polynomial, report: &ExtacticReport) -> Result<bool> {
    if report.identically_zero {
        return Err(Error::VacuousQuery(
            "the extactic vanishes identically; every curve is contained in it".into(),
        ));
    }
    if curve.is_constant() {
        return Err(Error::InvalidDivisor("curve must be non-constant".into()));
    }
    Ok(report.extactic.divide_exact(curve)?.is_some())
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Affine => "affine",
            SystemKind::Homogeneous => "homogeneous",
            SystemKind::Custom => "custom",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn diag() -> (Ring, VectorField) {
        let r = Ring::standard(2);
        let f = VectorField::new(vec![r.var(0), r.var(1).scale(&rat(2))], Mode::Affine).unwrap();
        (r, f)
    }

    #[test]
    fn monomial_systems() {
        let r2 = Ring::standard(2);
        let v = LinearSystem::monomial(&r2, 1, SystemKind::Affine).unwrap();
        let names: Vec<String> = v.basis().iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["1", "x", "y"]);
        assert_eq!(
            LinearSystem::monomial(&r2, 2, SystemKind::Affine)
                .unwrap()
                .dimension(),
            6
        );
        let r3 = Ring::standard(3);
        let h = LinearSystem::monomial(&r3, 2, SystemKind::Homogeneous).unwrap();
        let names: Vec<String> = h.basis().iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        assert!(LinearSystem::monomial(&r2, 0, SystemKind::Affine).is_err());
    }

    #[test]
    fn jet_of_diagonal_field() {
        let (r, f) = diag();
        let v = LinearSystem::monomial(&r, 1, SystemKind::Affine).unwrap();
        let jet = jet_matrix(&f, &v).unwrap();
        let (x, y) = (r.var(0), r.var(1));
        let expect = [
            [r.one(), r.zero(), r.zero()],
            [x.clone(), x.clone(), x.clone()],
            [y.clone(), y.scale(&rat(2)), y.scale(&rat(4))],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(jet.entry(i, j), &expect[i][j]);
            }
        }
    }

    #[test]
    fn radial_jet_has_equal_columns() {
        let r = Ring::standard(2);
        let f = VectorField::new(vec![r.var(0), r.var(1)], Mode::Affine).unwrap();
        let v = LinearSystem::monomial(&r, 1, SystemKind::Affine).unwrap();
        let jet = jet_matrix(&f, &v).unwrap();
        for i in 0..3 {
            assert_eq!(jet.entry(i, 1), jet.entry(i, 2));
        }
        assert!(jet.entry(0, 1).is_zero());
    }

    #[test]
    fn extactic_examples() {
        let (r, f) = diag();
        let v = LinearSystem::monomial(&r, 1, SystemKind::Affine).unwrap();
        for engine in [Engine::FractionFree, Engine::Modular, Engine::Auto] {
            let rep = extactic(&f, &v, &ExtacticOptions::with_engine(engine)).unwrap();
            assert_eq!(rep.extactic.to_string(), "2*x*y");
            assert!(!rep.identically_zero);
            assert!(rep.degree <= Degree::Finite(rep.degree_bound as u32));
        }
        let radial = VectorField::new(vec![r.var(0), r.var(1)], Mode::Affine).unwrap();
        let rep = extactic(&radial, &v, &ExtacticOptions::default()).unwrap();
        assert!(rep.identically_zero);
        assert_eq!(rep.degree, Degree::NegInfinity);
    }

    #[test]
    fn degree_bound_formula() {
        for d in 1..6 {
            assert_eq!(extactic_degree_bound(3, 1, d, 1), 3 * d);
        }
        assert_eq!(extactic_degree_bound(6, 2, 2, 1), 27);
        assert_eq!(extactic_degree_bound(1, 7, 4, 1), 7);
    }

    #[test]
    fn divisibility_queries() {
        let (r, f) = diag();
        let v = LinearSystem::monomial(&r, 1, SystemKind::Affine).unwrap();
        let rep = extactic(&f, &v, &ExtacticOptions::default()).unwrap();
        assert!(divides_extactic(&r.var(0), &rep).unwrap());
        assert!(!divides_extactic(&(&r.var(0) + &r.var(1)), &rep).unwrap());
        let radial = VectorField::new(vec![r.var(0), r.var(1)], Mode::Affine).unwrap();
        let zero = extactic(&radial, &v, &ExtacticOptions::default()).unwrap();
        assert!(matches!(
            divides_extactic(&r.var(0), &zero),
            Err(Error::VacuousQuery(_))
        ));
    }

    #[test]
    fn dimension_guard() {
        let r = Ring::standard(2);
        let f = VectorField::new(vec![r.var(1), r.var(0)], Mode::Affine).unwrap();
        let v = LinearSystem::monomial(&r, 6, SystemKind::Affine).unwrap();
        assert_eq!(v.dimension(), 28);
        assert!(matches!(
            extactic(&f, &v, &ExtacticOptions::default()),
            Err(Error::ResourceGuard(_))
        ));
    }

    #[test]
    fn homogeneous_field_rejects_affine_system() {
        let r = Ring::standard(3);
        let f = VectorField::new(vec![r.var(0), r.var(1), r.var(2)], Mode::Homogeneous).unwrap();
        let v = LinearSystem::monomial(&r, 1, SystemKind::Affine).unwrap();
        assert!(matches!(jet_matrix(&f, &v), Err(Error::Precondition(_))));
    }

    #[test]
    fn custom_basis_independence() {
        let r = Ring::standard(2);
        let (x, y) = (r.var(0), r.var(1));
        assert!(LinearSystem::from_basis(vec![x.clone(), y.clone(), &x + &y]).is_err());
        let v = LinearSystem::from_basis(vec![&x + &y, &x - &y]).unwrap();
        assert!(v.is_homogeneous());
        assert_eq!(v.kind(), SystemKind::Custom);
    }
}
