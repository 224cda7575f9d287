use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Ring};

/// A dense matrix of polynomials over one ring, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(Error::Context(
                        "matrix entry lives in a different ring".into(),
                    ));
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn identity(ring: &Ring, n: usize) -> PolyMatrix {
        let entries = (0..n * n)
            .map(|i| {
                if i / n == i % n {
                    ring.one()
                } else {
                    ring.zero()
                }
            })
            .collect();
        PolyMatrix {
            ring: ring.clone(),
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<Polynomial>> {
        let cols = self.cols;
        let mut it = self.entries.into_iter();
        (0..self.rows)
            .map(|_| it.by_ref().take(cols).collect())
            .collect()
    }

    pub(crate) fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )))
        }
    }
}

/// Determinant by fraction-free (Bareiss) elimination; every division is exact.
pub fn det_fraction_free(m: &PolyMatrix) -> Result<Polynomial> {
    m.require_square()?;
    let n = m.rows();
    let ring = m.ring().clone();
    if n == 0 {
        return Ok(ring.one());
    }
    let mut a = m.clone().into_rows();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        // Sparsest nonzero pivot keeps intermediate products small.
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].num_terms());
        let Some(p) = pivot else {
            return Ok(ring.zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let cross = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if k == 0 {
                    cross
                } else {
                    cross.divide_exact(&prev)?.ok_or_else(|| {
                        Error::InternalConsistency(
                            "inexact division in fraction-free elimination".into(),
                        )
                    })?
                };
            }
            a[i][k] = ring.zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
