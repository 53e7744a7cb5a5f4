//! Prime fields and dense matrices over them.

use std::fmt;

use super::GeometryError;

/// `𝔽_p` for the small primes the brute-force sweeps support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub const SUPPORTED: [u8; 3] = [2, 3, 5];

    pub fn new(p: u8) -> Result<Self, GeometryError> {
        if Self::SUPPORTED.contains(&p) {
            Ok(PrimeField { p })
        } else {
            Err(GeometryError::UnsupportedField(p))
        }
    }

    pub fn p(self) -> u8 {
        self.p
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn neg(self, a: u8) -> u8 {
        self.sub(0, a)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(!a.is_multiple_of(self.p));
        (1..self.p).find(|&b| self.mul(a, b) == 1).expect("nonzero element")
    }

    /// The nonzero residues `1..p`.
    pub fn units(self) -> impl Iterator<Item = u8> + Clone {
        1..self.p
    }

    pub fn elements(self) -> impl Iterator<Item = u8> + Clone {
        0..self.p
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixGF {
    p: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl MatrixGF {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixGF { p: field.p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u8>]) -> Result<Self, GeometryError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GeometryError::InvalidMatrix("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&x| x >= field.p) {
            return Err(GeometryError::InvalidMatrix(format!("entry out of range mod {}", field.p)));
        }
        Ok(MatrixGF { p: field.p, rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn diagonal(field: PrimeField, entries: &[u8]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.data[i * n + i] = d % field.p;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row `i` as a `1 × cols` matrix.
    pub fn row_matrix(&self, i: usize) -> MatrixGF {
        MatrixGF { p: self.p, rows: 1, cols: self.cols, data: self.row(i).to_vec() }
    }

    /// The first `k` rows.
    pub fn top(&self, k: usize) -> MatrixGF {
        MatrixGF {
            p: self.p,
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    pub fn vstack(&self, other: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixGF { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut t = MatrixGF::zeros(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, other.rows);
        let f = self.field();
        let mut out = MatrixGF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = f.add(*cell, f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> MatrixGF {
        let f = self.field();
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(r, pivot_row);
            let scale = f.inv(m.get(pivot_row, col));
            for j in 0..m.cols {
                let v = f.mul(m.get(pivot_row, j), scale);
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == pivot_row || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(pivot_row, j)));
                    m.set(r, j, v);
                }
            }
            pivot_row += 1;
        }
        m.rows = pivot_row;
        m.data.truncate(pivot_row * m.cols);
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<MatrixGF> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field();
        let mut aug = MatrixGF::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let r = aug.rref();
        if r.rows < n || (0..n).any(|i| (0..n).any(|j| r.get(i, j) != u8::from(i == j))) {
            return None;
        }
        let mut inv = MatrixGF::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

impl fmt::Display for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
