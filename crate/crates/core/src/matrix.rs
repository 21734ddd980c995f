//! Dense matrices and vectors over cyclotomic numbers.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::cyclotomic::{CycField, Cyclotomic};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A dense row-major matrix of cyclotomic numbers.
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

/// Smallest field order containing every entry.
pub fn common_order<'a>(entries: impl IntoIterator<Item = &'a Cyclotomic>) -> u32 {
    entries.into_iter().fold(1u32, |acc, c| acc.lcm(&c.order()))
}

/// `Σ conj(x_i) y_i`.
pub fn inner(x: &[Cyclotomic], y: &[Cyclotomic]) -> Result<Cyclotomic> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("vectors of length {} and {}", x.len(), y.len())));
    }
    let mut acc = Cyclotomic::zero();
    for (a, b) in x.iter().zip(y) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc += &(&a.conj() * b);
    }
    Ok(acc)
}

pub fn int_vector(v: &[i64]) -> Vec<Cyclotomic> {
    v.iter().map(|&x| Cyclotomic::from_int(x)).collect()
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(CycMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CycMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        CycMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        CycMatrix::from_rows(rows.iter().map(|r| int_vector(r)).collect())
    }

    pub fn from_columns(cols: &[Vec<Cyclotomic>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        if c == 0 || r == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        Ok(CycMatrix::from_fn(r, c, |i, j| cols[j][i].clone()))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycMatrix::from_fn(rows, cols, |_, _| Cyclotomic::zero())
    }

    pub fn identity(n: usize) -> Self {
        CycMatrix::from_fn(n, n, |i, j| Cyclotomic::from_int((i == j) as i64))
    }

    /// Diagonal matrix from its entries.
    pub fn diagonal(d: &[Cyclotomic]) -> Self {
        let n = d.len();
        CycMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { Cyclotomic::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Cyclotomic> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Smallest field order containing every entry.
    pub fn order(&self) -> u32 {
        common_order(&self.data)
    }

    /// Re-expresses every entry in `Q(ζ_m)`.
    pub fn promote(&self, m: u32) -> Result<Self> {
        let field = CycField::new(m)?;
        self.promote_in(&field)
    }

    pub fn promote_in(&self, field: &Arc<CycField>) -> Result<Self> {
        let data = self.data.iter().map(|c| c.promote_in(field)).collect::<Result<_>>()?;
        Ok(CycMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_mul(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            let zero = Cyclotomic::zero_in(self.get(i, 0).field());
            for j in 0..rhs.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc += &(a * b);
                }
                data.push(acc);
            }
        }
        Ok(CycMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Cyclotomic::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc += &(a * x);
                }
                acc
            })
            .collect())
    }

    fn zip_with(&self, rhs: &CycMatrix, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<CycMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} and {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(CycMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_add(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: &Cyclotomic) -> CycMatrix {
        self.map(|c| c * s)
    }

    pub fn scale_rational(&self, r: &Rational) -> CycMatrix {
        self.map(|c| c.scale(r))
    }

    pub fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> CycMatrix {
        CycMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CycMatrix {
        CycMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// `M†M = I`.
    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.adjoint().checked_mul(self).is_ok_and(|p| p.is_identity())
    }

    /// `M = cI` for some `c`, returned when it holds.
    pub fn scalar_value(&self) -> Option<Cyclotomic> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    /// Kronecker product `(a⊗b)[(i,k),(j,l)] = a[i,j]·b[k,l]`; `self` is the high-order factor.
    pub fn kron(&self, rhs: &CycMatrix) -> CycMatrix {
        let (br, bc) = (rhs.rows, rhs.cols);
        CycMatrix::from_fn(self.rows * br, self.cols * bc, |r, c| {
            let a = self.get(r / br, c / bc);
            let b = rhs.get(r % br, c % bc);
            if a.is_zero() || b.is_zero() {
                Cyclotomic::zero_in(a.field()) + Cyclotomic::zero_in(b.field())
            } else {
                a * b
            }
        })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{v : Mv = 0}`, one vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(); self.cols];
                v[f] = Cyclotomic::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = CycMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                Cyclotomic::from_int((j - n == i) as i64)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::InvalidArgument("matrix is singular".into()));
        }
        Ok(CycMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Order, dimensions and entries in row-major canonical form.
    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for c in &self.data {
            c.write_canonical(out);
        }
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_canonical(&mut out);
        out
    }

    pub fn read_canonical(bytes: &[u8], field: Option<&Arc<CycField>>) -> Result<CycMatrix> {
        let header = |k: usize| -> Result<usize> {
            let b =
                bytes.get(4 * k..4 * k + 4).ok_or_else(|| Error::InvalidArgument("truncated matrix bytes".into()))?;
            Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
        };
        let (rows, cols) = (header(0)?, header(1)?);
        let mut pos = 8;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(Cyclotomic::read_canonical(bytes, &mut pos, field)?);
        }
        CycMatrix::new(rows, cols, data)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }
}

impl std::ops::Mul for &CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &CycMatrix) -> CycMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
