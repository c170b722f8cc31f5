//! Small exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.data[r * cols + c] = v.clone();
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.get(i, k) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon form in place; returns pivot columns and the determinant factor.
    fn eliminate(&mut self) -> (Vec<usize>, Rational) {
        let mut pivots = Vec::new();
        let mut factor = Rational::one();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
                factor = -factor;
            }
            let pivot = self.get(row, col).clone();
            factor *= &pivot;
            for r in row + 1..self.rows {
                let lead = self.get(r, col).clone();
                if lead.is_zero() {
                    continue;
                }
                let ratio = lead / &pivot;
                for c in col..self.cols {
                    let sub = self.get(row, c) * &ratio;
                    if !sub.is_zero() {
                        self.data[r * self.cols + c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, factor)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0.len()
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let mut m = self.clone();
        let (pivots, factor) = m.eliminate();
        Ok(if pivots.len() < self.rows { Rational::zero() } else { factor })
    }

    /// Solve `self · x = b`; errors when inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (pivots, _) = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::invalid("inconsistent linear system"));
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate().rev() {
            let mut acc = aug.get(r, self.cols).clone();
            for k in c + 1..self.cols {
                if !x[k].is_zero() {
                    acc -= aug.get(r, k) * &x[k];
                }
            }
            x[c] = acc / aug.get(r, c);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        if self.rank() < n {
            return Err(Error::invalid("singular matrix"));
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            cols.push(self.solve(&e)?);
        }
        Ok(QMatrix::from_columns(n, &cols))
    }
}

/// Rank of a sparse matrix given by its rows.
pub fn sparse_rank(rows: Vec<BTreeMap<usize, Rational>>) -> usize {
    // Pivot rows keyed by their leading column.
    let mut basis: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for mut row in rows {
        loop {
            let Some((&lead, _)) = row.iter().next() else { break };
            match basis.get(&lead) {
                None => {
                    basis.insert(lead, row);
                    break;
                }
                Some(pivot) => {
                    let ratio = &row[&lead] / &pivot[&lead];
                    for (c, v) in pivot {
                        let e = row.entry(*c).or_insert_with(Rational::zero);
                        *e -= v * &ratio;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::qi;

    fn m(rows: usize, v: &[i64]) -> QMatrix {
        let cols = v.len() / rows;
        QMatrix { rows, cols, data: v.iter().map(|&x| qi(x)).collect() }
    }

    #[test]
    fn det_and_inverse() {
        let a = m(3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(a.det().unwrap(), qi(6));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(3));
    }

    #[test]
    fn singular_rank() {
        let a = m(3, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.det().unwrap(), qi(0));
        assert!(a.inverse().is_err());
        assert!(a.solve(&[qi(1), qi(0), qi(0)]).is_err());
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(3, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        let rows = (0..3)
            .map(|r| {
                (0..3)
                    .filter(|&c| !a.get(r, c).is_zero())
                    .map(|c| (c, a.get(r, c).clone()))
                    .collect()
            })
            .collect();
        assert_eq!(sparse_rank(rows), 2);
    }
}
