//! Dense exact matrices over the rationals or over a fixed cyclotomic field,
//! with determinants, left solving, Smith normal form over Z, and
//! elementary-divisor valuations over the discrete valuation ring
//! Z_(p)[zeta_{p^n}] by valuation-pivot elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cyclotomic::{CycElement, Valuation};
use crate::error::Error;
use crate::rational::{format_rat, parse_rat, Rat};

/// Ring/field operations needed by the generic matrix code. The `s_zero` /
/// `s_one` constructors carry the coefficient domain (e.g. the conductor of
/// a cyclotomic field) from an existing element.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn s_zero(&self) -> Self;
    fn s_one(&self) -> Self;
    fn s_add(&self, rhs: &Self) -> Self;
    fn s_sub(&self, rhs: &Self) -> Self;
    fn s_mul(&self, rhs: &Self) -> Self;
    fn s_neg(&self) -> Self;
    fn s_is_zero(&self) -> bool;
    fn s_inv(&self) -> Option<Self>;
}

impl Scalar for Rat {
    fn s_zero(&self) -> Self {
        Rat::zero()
    }
    fn s_one(&self) -> Self {
        Rat::one()
    }
    fn s_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn s_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn s_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn s_neg(&self) -> Self {
        -self
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rat::one() / self.clone())
        }
    }
}

impl Scalar for CycElement {
    fn s_zero(&self) -> Self {
        CycElement::zero(self.conductor())
    }
    fn s_one(&self) -> Self {
        CycElement::one(self.conductor())
    }
    fn s_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn s_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn s_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn s_neg(&self) -> Self {
        -self
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// A dense row-major matrix over an exact coefficient domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Clone> ExactMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.entries.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.entries.swap(k * self.cols + i, k * self.cols + j);
        }
    }
}

impl<T: Scalar> ExactMatrix<T> {
    /// Identity of size n; `one` supplies the coefficient domain.
    pub fn identity(n: usize, one: T) -> Self {
        let zero = one.s_zero();
        ExactMatrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        assert!(self.rows * rhs.cols > 0 && self.cols > 0, "empty product");
        let zero = self.entries[0].s_zero();
        ExactMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                acc = acc.s_add(&self.at(i, k).s_mul(rhs.at(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch");
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).s_add(rhs.at(i, j)))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch");
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).s_sub(rhs.at(i, j)))
    }

    pub fn scale(&self, s: &T) -> Self {
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).s_mul(s))
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let e = self.at(i, j);
                if i == j {
                    *e == e.s_one()
                } else {
                    e.s_is_zero()
                }
            })
        })
    }

    /// Exact determinant by Gaussian elimination over the fraction field.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        assert!(self.rows > 0, "determinant of an empty matrix");
        let mut a = self.clone();
        let n = a.rows;
        let mut det = a.entries[0].s_one();
        let mut negate = false;
        for k in 0..n {
            let pivot_row = match (k..n).find(|&i| !a.at(i, k).s_is_zero()) {
                Some(i) => i,
                None => return a.entries[0].s_zero(),
            };
            if pivot_row != k {
                a.swap_rows(k, pivot_row);
                negate = !negate;
            }
            let pivot = a.at(k, k).clone();
            det = det.s_mul(&pivot);
            let pinv = pivot.s_inv().expect("pivot is nonzero");
            for i in (k + 1)..n {
                if a.at(i, k).s_is_zero() {
                    continue;
                }
                let factor = a.at(i, k).s_mul(&pinv);
                for j in k..n {
                    let v = a.at(i, j).s_sub(&factor.s_mul(a.at(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        if negate {
            det.s_neg()
        } else {
            det
        }
    }

    /// Solves x * A = y for the row vector x over the fraction field.
    pub fn solve_left(&self, y: &[T]) -> Result<Vec<T>, Error> {
        assert_eq!(self.rows, self.cols, "solve_left needs a square matrix");
        assert_eq!(y.len(), self.cols, "dimension mismatch in solve_left");
        // x A = y  <=>  A^T x^T = y^T
        let n = self.rows;
        let mut a = self.transpose();
        let mut b: Vec<T> = y.to_vec();
        for k in 0..n {
            let pivot_row = (k..n)
                .find(|&i| !a.at(i, k).s_is_zero())
                .ok_or(Error::Singular)?;
            if pivot_row != k {
                a.swap_rows(k, pivot_row);
                b.swap(k, pivot_row);
            }
            let pinv = a.at(k, k).s_inv().expect("pivot is nonzero");
            for i in 0..n {
                if i == k || a.at(i, k).s_is_zero() {
                    continue;
                }
                let factor = a.at(i, k).s_mul(&pinv);
                for j in k..n {
                    let v = a.at(i, j).s_sub(&factor.s_mul(a.at(k, j)));
                    a.set(i, j, v);
                }
                let v = b[i].s_sub(&factor.s_mul(&b[k]));
                b[i] = v;
            }
        }
        Ok((0..n)
            .map(|k| {
                let pinv = a.at(k, k).s_inv().expect("pivot is nonzero");
                b[k].s_mul(&pinv)
            })
            .collect())
    }

}

// ---------------------------------------------------------------------------
// Smith normal form over Z
// ---------------------------------------------------------------------------

/// Smith normal form divisors d_1 | d_2 | ... | d_n of a square nonsingular
/// integer matrix, all positive.
pub fn smith_divisors_z(a: &ExactMatrix<BigInt>) -> Result<Vec<BigInt>, Error> {
    if a.rows != a.cols {
        return Err(Error::InvalidParams(
            "smith_divisors_z: matrix must be square".into(),
        ));
    }
    let n = a.rows;
    let mut b = a.clone();
    for k in 0..n {
        loop {
            // minimal absolute value in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if !b.at(i, j).is_zero()
                        && best.is_none_or(|(bi, bj)| b.at(i, j).abs() < b.at(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.ok_or(Error::Singular)?;
            b.swap_rows(k, pi);
            b.swap_cols(k, pj);
            let mut changed = false;
            for i in (k + 1)..n {
                if b.at(i, k).is_zero() {
                    continue;
                }
                let q = b.at(i, k).div_rem(b.at(k, k)).0;
                if !q.is_zero() {
                    for j in k..n {
                        let v = b.at(i, j) - &q * b.at(k, j);
                        b.set(i, j, v);
                    }
                }
                if !b.at(i, k).is_zero() {
                    changed = true;
                }
            }
            for j in (k + 1)..n {
                if b.at(k, j).is_zero() {
                    continue;
                }
                let q = b.at(k, j).div_rem(b.at(k, k)).0;
                if !q.is_zero() {
                    for i in k..n {
                        let v = b.at(i, j) - &q * b.at(i, k);
                        b.set(i, j, v);
                    }
                }
                if !b.at(k, j).is_zero() {
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // pivot must divide every remaining entry
            let offender = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !b.at(i, j).is_multiple_of(b.at(k, k)));
            match offender {
                Some((i, _)) => {
                    for j in k..n {
                        let v = b.at(k, j) + b.at(i, j);
                        b.set(k, j, v);
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..n).map(|k| b.at(k, k).abs()).collect())
}

// ---------------------------------------------------------------------------
// elementary divisors over the DVR Z_(p)[zeta_{p^n}]
// ---------------------------------------------------------------------------

fn entry_valuation(e: &CycElement, p: u64, n: u32) -> Valuation {
    e.t_valuation(p, n).expect("conductor matches p^n")
}

/// Valuations of the elementary divisors over Z_(p)[zeta_{p^n}], ascending.
///
/// Pivoting picks the entry of minimal t-valuation (ties: smallest row, then
/// smallest column); in a DVR the minimal-valuation entry divides every other
/// entry, so one exact-division elimination round clears its row and column.
pub fn smith_valuations_dvr(
    a: &ExactMatrix<CycElement>,
    p: u64,
    n: u32,
) -> Result<Vec<Valuation>, Error> {
    if a.rows != a.cols {
        return Err(Error::InvalidParams(
            "smith_valuations_dvr: matrix must be square".into(),
        ));
    }
    for e in &a.entries {
        match entry_valuation(e, p, n) {
            Valuation::Finite(v) if v < 0 => return Err(Error::NegativeValuation),
            _ => {}
        }
    }
    let (vals, _, _) = dvr_eliminate(a.clone(), p, n, false)?;
    Ok(vals.into_iter().map(Valuation::Finite).collect())
}

/// Full decomposition L * A * R = diag(t^{e_i}) with L, R invertible over the
/// localization (valuation-zero determinants). Entries of A may have negative
/// valuation; the e_i are then negative as well.
#[allow(clippy::type_complexity)]
pub fn smith_decompose_dvr(
    a: &ExactMatrix<CycElement>,
    p: u64,
    n: u32,
) -> Result<(ExactMatrix<CycElement>, Vec<i64>, ExactMatrix<CycElement>), Error> {
    if a.rows != a.cols {
        return Err(Error::InvalidParams(
            "smith_decompose_dvr: matrix must be square".into(),
        ));
    }
    let (vals, l, r) = dvr_eliminate(a.clone(), p, n, true)?;
    Ok((l.unwrap(), vals, r.unwrap()))
}

#[allow(clippy::type_complexity)]
fn dvr_eliminate(
    mut b: ExactMatrix<CycElement>,
    p: u64,
    n: u32,
    transforms: bool,
) -> Result<(Vec<i64>, Option<ExactMatrix<CycElement>>, Option<ExactMatrix<CycElement>>), Error> {
    let size = b.rows;
    assert!(size > 0, "empty matrix");
    let one = CycElement::one(p.pow(n));
    let mut l = transforms.then(|| ExactMatrix::identity(size, one.clone()));
    let mut r = transforms.then(|| ExactMatrix::identity(size, one.clone()));
    let mut vals = Vec::with_capacity(size);
    for k in 0..size {
        // entry of minimal valuation, ties by smallest row then column
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..size {
            for j in k..size {
                if let Valuation::Finite(v) = entry_valuation(b.at(i, j), p, n) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (pv, pi, pj) = best.ok_or(Error::Singular)?;
        b.swap_rows(k, pi);
        b.swap_cols(k, pj);
        if let Some(l) = l.as_mut() {
            l.swap_rows(k, pi);
        }
        if let Some(r) = r.as_mut() {
            r.swap_cols(k, pj);
        }
        vals.push(pv);
        let pinv = b.at(k, k).inv().expect("pivot is nonzero");
        for i in (k + 1)..size {
            if b.at(i, k).is_zero() {
                continue;
            }
            let factor = b.at(i, k) * &pinv;
            for j in k..size {
                let v = b.at(i, j) - &(&factor * b.at(k, j));
                b.set(i, j, v);
            }
            if let Some(l) = l.as_mut() {
                for j in 0..size {
                    let v = l.at(i, j) - &(&factor * l.at(k, j));
                    l.set(i, j, v);
                }
            }
        }
        for j in (k + 1)..size {
            if b.at(k, j).is_zero() {
                continue;
            }
            let factor = b.at(k, j) * &pinv;
            for i in k..size {
                let v = b.at(i, j) - &(&factor * b.at(i, k));
                b.set(i, j, v);
            }
            if let Some(r) = r.as_mut() {
                for i in 0..size {
                    let v = r.at(i, j) - &(&factor * r.at(i, k));
                    r.set(i, j, v);
                }
            }
        }
    }
    // scale rows so the diagonal becomes exactly t^{e_i}
    if let Some(l) = l.as_mut() {
        let t = CycElement::t_element(p.pow(n));
        for k in 0..size {
            let e = vals[k];
            let t_pow = if e >= 0 {
                t.pow(e as u64)
            } else {
                t.inv().unwrap().pow((-e) as u64)
            };
            let unit_inv = &(b.at(k, k).inv().unwrap()) * &t_pow;
            for j in 0..size {
                let v = l.at(k, j) * &unit_inv;
                l.set(k, j, v);
            }
            let v = b.at(k, k) * &unit_inv;
            b.set(k, k, v);
        }
    }
    Ok((vals, l, r))
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

pub fn rational_matrix_to_json(a: &ExactMatrix<Rat>) -> Value {
    json!({
        "rows": a.rows,
        "cols": a.cols,
        "domain": "Q",
        "entries": a.to_rows().iter().map(|row| {
            row.iter().map(|e| Value::String(format_rat(e))).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

pub fn cyclotomic_matrix_to_json(a: &ExactMatrix<CycElement>) -> Value {
    assert!(a.rows * a.cols > 0, "empty matrix has no coefficient domain");
    let m = a.at(0, 0).conductor();
    json!({
        "rows": a.rows,
        "cols": a.cols,
        "domain": {"cyclotomic": m},
        "entries": a.to_rows().iter().map(|row| {
            row.iter().map(|e| {
                Value::Array(e.coeffs().iter().map(|c| Value::String(format_rat(c))).collect())
            }).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

/// A parsed matrix in either coefficient domain.
pub enum MatrixJson {
    Q(ExactMatrix<Rat>),
    Cyclotomic(ExactMatrix<CycElement>),
}

pub fn matrix_from_json(v: &Value) -> Result<MatrixJson, Error> {
    let rows = v
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadInput("matrix: missing \"rows\"".into()))? as usize;
    let cols = v
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadInput("matrix: missing \"cols\"".into()))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInput("matrix: missing \"entries\"".into()))?;
    if entries.len() != rows {
        return Err(Error::BadInput("matrix: row count mismatch".into()));
    }
    let domain = v
        .get("domain")
        .ok_or_else(|| Error::BadInput("matrix: missing \"domain\"".into()))?;
    if domain == &Value::String("Q".into()) {
        let mut out = Vec::with_capacity(rows);
        for row in entries {
            let row = row
                .as_array()
                .ok_or_else(|| Error::BadInput("matrix: rows must be arrays".into()))?;
            if row.len() != cols {
                return Err(Error::BadInput("matrix: column count mismatch".into()));
            }
            let mut r = Vec::with_capacity(cols);
            for e in row {
                let s = e.as_str().ok_or_else(|| {
                    Error::BadInput("matrix: rational entries must be strings".into())
                })?;
                r.push(parse_rat(s).ok_or_else(|| Error::BadInput(format!("bad rational {:?}", s)))?);
            }
            out.push(r);
        }
        Ok(MatrixJson::Q(ExactMatrix::from_rows(out)))
    } else if let Some(m) = domain.get("cyclotomic").and_then(Value::as_u64) {
        let mut out = Vec::with_capacity(rows);
        for row in entries {
            let row = row
                .as_array()
                .ok_or_else(|| Error::BadInput("matrix: rows must be arrays".into()))?;
            if row.len() != cols {
                return Err(Error::BadInput("matrix: column count mismatch".into()));
            }
            let mut r = Vec::with_capacity(cols);
            for e in row {
                let coeffs = e.as_array().ok_or_else(|| {
                    Error::BadInput("matrix: cyclotomic entries must be arrays".into())
                })?;
                let elem = CycElement::from_json(&json!({"m": m, "coeffs": coeffs}))?;
                r.push(elem);
            }
            out.push(r);
        }
        Ok(MatrixJson::Cyclotomic(ExactMatrix::from_rows(out)))
    } else {
        Err(Error::BadInput("matrix: unknown domain".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn rat_matrix(rows: &[&[i64]]) -> ExactMatrix<Rat> {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix<BigInt> {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn basic_algebra() {
        let a = rat_matrix(&[&[1, 2], &[3, 4]]);
        let id = ExactMatrix::identity(2, Rat::one());
        assert_eq!(id.mul(&a), a);
        assert_eq!(a.transpose().transpose(), a);
        let b = rat_matrix(&[&[0, 1], &[1, 0]]);
        let c = rat_matrix(&[&[2, 0], &[0, 5]]);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn determinants() {
        assert_eq!(ExactMatrix::identity(5, Rat::one()).determinant(), Rat::one());
        let a = rat_matrix(&[&[3, 7], &[2, 5]]);
        assert_eq!(a.determinant(), rat_int(3 * 5 - 7 * 2));
        let sing = rat_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant(), Rat::zero());
        // needs a row swap
        let swapped = rat_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(swapped.determinant(), rat_int(-1));
    }

    #[test]
    fn solve_left_round_trip() {
        let a = rat_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // y = second row  =>  x = e_1
        let y = a.row_vec(1);
        let x = a.solve_left(&y).unwrap();
        assert_eq!(x, vec![rat_int(0), rat_int(1), rat_int(0)]);
        // arbitrary y: verify x * a = y
        let y = vec![rat(1, 2), rat_int(-3), rat(7, 5)];
        let x = a.solve_left(&y).unwrap();
        for j in 0..3 {
            let mut acc = Rat::zero();
            for i in 0..3 {
                acc += &x[i] * a.at(i, j);
            }
            assert_eq!(acc, y[j]);
        }
        let sing = rat_matrix(&[&[1, 1], &[1, 1]]);
        assert_eq!(sing.solve_left(&[rat_int(1), rat_int(0)]), Err(Error::Singular));
    }

    fn det_abs(a: &ExactMatrix<BigInt>) -> BigInt {
        let rat_a = ExactMatrix::from_fn(a.rows(), a.cols(), |i, j| {
            Rat::from_integer(a.at(i, j).clone())
        });
        rat_a.determinant().numer().abs()
    }

    #[test]
    fn smith_over_z() {
        assert_eq!(
            smith_divisors_z(&int_matrix(&[&[1, 0], &[0, 1]])).unwrap(),
            vec![BigInt::one(), BigInt::one()]
        );
        // already a divisor chain
        assert_eq!(
            smith_divisors_z(&int_matrix(&[&[2, 0], &[0, 6]])).unwrap(),
            vec![BigInt::from(2), BigInt::from(6)]
        );
        // needs the divisibility fix: diag(2, 3) ~ diag(1, 6)
        assert_eq!(
            smith_divisors_z(&int_matrix(&[&[2, 0], &[0, 3]])).unwrap(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let a = int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let d = smith_divisors_z(&a).unwrap();
        // product of divisors = |det|, chain condition holds
        let prod: BigInt = d.iter().product();
        assert_eq!(prod, det_abs(&a));
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(
            smith_divisors_z(&int_matrix(&[&[1, 1], &[1, 1]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn dvr_valuations_on_diagonal() {
        let t = CycElement::t_element(9);
        let zero = CycElement::zero(9);
        let a = ExactMatrix::from_rows(vec![
            vec![CycElement::one(9), zero.clone(), zero.clone()],
            vec![zero.clone(), t.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), t.pow(4)],
        ]);
        assert_eq!(
            smith_valuations_dvr(&a, 3, 2).unwrap(),
            vec![Valuation::Finite(0), Valuation::Finite(1), Valuation::Finite(4)]
        );
        let id = ExactMatrix::identity(4, CycElement::one(9));
        assert_eq!(
            smith_valuations_dvr(&id, 3, 2).unwrap(),
            vec![Valuation::Finite(0); 4]
        );
        // negative valuation rejected
        let bad = ExactMatrix::from_rows(vec![vec![CycElement::from_rational(9, rat(1, 3))]]);
        assert_eq!(smith_valuations_dvr(&bad, 3, 2), Err(Error::NegativeValuation));
        // singular input rejected
        let z = CycElement::zeta(9);
        let sing = ExactMatrix::from_rows(vec![
            vec![z.clone(), z.clone()],
            vec![z.clone(), z.clone()],
        ]);
        assert_eq!(smith_valuations_dvr(&sing, 3, 2), Err(Error::Singular));
    }

    #[test]
    fn dvr_decompose_is_exact() {
        // a small non-diagonal example over Q(zeta_9), p = 3
        let z = CycElement::zeta(9);
        let t = CycElement::t_element(9);
        let a = ExactMatrix::from_rows(vec![
            vec![t.pow(2), CycElement::one(9)],
            vec![z.clone(), &t * &z],
        ]);
        let (l, vals, r) = smith_decompose_dvr(&a, 3, 2).unwrap();
        // L * A * R equals diag(t^{e_i}) exactly
        let product = l.mul(&a).mul(&r);
        let mut expect = ExactMatrix::identity(2, CycElement::one(9));
        for (k, &e) in vals.iter().enumerate() {
            expect.set(k, k, t.pow(e as u64));
        }
        assert_eq!(product, expect);
        // transforms are invertible over the localization
        for m in [&l, &r] {
            let d = m.determinant();
            assert_eq!(d.t_valuation(3, 2).unwrap(), Valuation::Finite(0));
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = rat_matrix(&[&[1, 2], &[3, 4]]);
        let v = rational_matrix_to_json(&a);
        match matrix_from_json(&v).unwrap() {
            MatrixJson::Q(b) => assert_eq!(a, b),
            _ => panic!("wrong domain"),
        }
        let c = ExactMatrix::from_rows(vec![vec![CycElement::zeta(5), CycElement::one(5)]]);
        let v = cyclotomic_matrix_to_json(&c);
        match matrix_from_json(&v).unwrap() {
            MatrixJson::Cyclotomic(b) => assert_eq!(c, b),
            _ => panic!("wrong domain"),
        }
    }
}
