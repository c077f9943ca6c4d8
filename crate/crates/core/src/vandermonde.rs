//! Vandermonde diagonalization machinery at concrete points.
//!
//! For a tuple x = (x_0, ..., x_{m-1}) of pairwise distinct field elements
//! the matrices V, L, M, E, P, Y satisfy
//!
//!   E P = I,   M (I - L) = I,   E V = Y M,   E V (I - L) = Y,   V = P Y M,
//!
//! where E and P collect signed elementary and complete homogeneous symmetric
//! polynomials of prefixes, L and M Lagrange-type interpolation quotients, and
//! Y the diagonal y_i = prod_{k<i} (x_i - x_k). Over a discrete valuation
//! ring, a minimally ordered tuple turns V into elementary divisor form with
//! valuations sum_{j<i} v_t(x_i - x_j).

use crate::cyclotomic::{CycElement, Valuation};
use crate::error::Error;
use crate::linalg::{ExactMatrix, Scalar};

/// A tuple of pairwise distinct coefficient-domain elements.
#[derive(Clone, Debug)]
pub struct PointTuple<T: Scalar> {
    values: Vec<T>,
}

impl<T: Scalar> PointTuple<T> {
    pub fn new(values: Vec<T>) -> Result<Self, Error> {
        assert!(!values.is_empty(), "point tuple must be nonempty");
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                if values[i] == values[j] {
                    return Err(Error::DuplicatePoints);
                }
            }
        }
        Ok(PointTuple { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn permuted(&self, perm: &[usize]) -> PointTuple<T> {
        assert_eq!(perm.len(), self.values.len());
        PointTuple {
            values: perm.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    fn zero(&self) -> T {
        self.values[0].s_zero()
    }

    fn one(&self) -> T {
        self.values[0].s_one()
    }

    /// Prefix elementary symmetric polynomials: table[b][d] = E_{d,[0,b[},
    /// by E_{d,[0,b[} = E_{d,[0,b-1[} + x_{b-1} E_{d-1,[0,b-1[}.
    fn elementary_table(&self) -> Vec<Vec<T>> {
        let m = self.len();
        let mut table = vec![vec![self.zero(); m + 1]; m + 1];
        table[0][0] = self.one();
        for b in 1..=m {
            table[b][0] = self.one();
            for d in 1..=b {
                let prev = table[b - 1][d].clone();
                let lower = table[b - 1][d - 1].clone();
                table[b][d] = prev.s_add(&self.values[b - 1].s_mul(&lower));
            }
        }
        table
    }

    /// Prefix complete homogeneous polynomials: table[b][d] = P_{d,[0,b-1]},
    /// by P_{d,[0,b]} = P_{d,[0,b-1]} + x_b P_{d-1,[0,b]}.
    fn homogeneous_table(&self, max_d: usize) -> Vec<Vec<T>> {
        let m = self.len();
        let mut table = vec![vec![self.zero(); max_d + 1]; m + 1];
        table[0][0] = self.one();
        for b in 1..=m {
            table[b][0] = self.one();
            for d in 1..=max_d {
                let prev = table[b - 1][d].clone();
                let same = table[b][d - 1].clone();
                table[b][d] = prev.s_add(&self.values[b - 1].s_mul(&same));
            }
        }
        table
    }
}

/// V[i][j] = x_j^i.
pub fn build_v<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let mut powers: Vec<T> = vec![pts.one(); m];
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        rows.push(powers.clone());
        for (j, p) in powers.iter_mut().enumerate() {
            *p = p.s_mul(&pts.values[j]);
        }
    }
    ExactMatrix::from_rows(rows)
}

/// L[i][j] = prod_{k in [0,j[ \ {i}} (x_j - x_k) / (x_i - x_k) for i < j, else 0.
pub fn build_l<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let x = &pts.values;
    ExactMatrix::from_fn(m, m, |i, j| {
        if i >= j {
            return pts.zero();
        }
        let mut num = pts.one();
        let mut den = pts.one();
        for k in 0..j {
            if k == i {
                continue;
            }
            num = num.s_mul(&x[j].s_sub(&x[k]));
            den = den.s_mul(&x[i].s_sub(&x[k]));
        }
        num.s_mul(&den.s_inv().expect("points are pairwise distinct"))
    })
}

/// M[i][j] = prod_{k < i} (x_j - x_k) / (x_i - x_k).
pub fn build_m<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let x = &pts.values;
    ExactMatrix::from_fn(m, m, |i, j| {
        let mut num = pts.one();
        let mut den = pts.one();
        for k in 0..i {
            num = num.s_mul(&x[j].s_sub(&x[k]));
            den = den.s_mul(&x[i].s_sub(&x[k]));
        }
        num.s_mul(&den.s_inv().expect("points are pairwise distinct"))
    })
}

/// E[i][j] = (-1)^{i-j} E_{i-j,[0,i[}, signed elementary symmetric polynomials.
pub fn build_e<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let table = pts.elementary_table();
    ExactMatrix::from_fn(m, m, |i, j| {
        if j > i {
            return pts.zero();
        }
        let e = table[i][i - j].clone();
        if (i - j) % 2 == 1 {
            e.s_neg()
        } else {
            e
        }
    })
}

/// P[i][j] = P_{i-j,[0,j]}, complete homogeneous symmetric polynomials.
pub fn build_p<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let table = pts.homogeneous_table(m);
    ExactMatrix::from_fn(m, m, |i, j| {
        if j > i {
            pts.zero()
        } else {
            table[j + 1][i - j].clone()
        }
    })
}

/// Y = diag(y_i), y_i = prod_{k<i} (x_i - x_k); y_0 = 1 as the empty product.
pub fn build_y<T: Scalar>(pts: &PointTuple<T>) -> ExactMatrix<T> {
    let m = pts.len();
    let x = &pts.values;
    ExactMatrix::from_fn(m, m, |i, j| {
        if i != j {
            return pts.zero();
        }
        let mut y = pts.one();
        for k in 0..i {
            y = y.s_mul(&x[i].s_sub(&x[k]));
        }
        y
    })
}

/// Pass/fail record for the five defining identities evaluated at the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// E P = I
    pub ep_is_identity: bool,
    /// M (I - L) = I
    pub m_iml_is_identity: bool,
    /// E V = Y M
    pub ev_equals_ym: bool,
    /// E V (I - L) = Y
    pub evl_equals_y: bool,
    /// V = P Y M
    pub v_equals_pym: bool,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.ep_is_identity
            && self.m_iml_is_identity
            && self.ev_equals_ym
            && self.evl_equals_y
            && self.v_equals_pym
    }
}

/// Evaluates all five matrix identities exactly at the given points.
pub fn verify_identities<T: Scalar>(pts: &PointTuple<T>) -> IdentityReport {
    let m = pts.len();
    let v = build_v(pts);
    let l = build_l(pts);
    let mm = build_m(pts);
    let e = build_e(pts);
    let p = build_p(pts);
    let y = build_y(pts);
    let id = ExactMatrix::identity(m, pts.one());
    let iml = id.sub(&l);
    let ev = e.mul(&v);
    IdentityReport {
        ep_is_identity: e.mul(&p).is_identity(),
        m_iml_is_identity: mm.mul(&iml).is_identity(),
        ev_equals_ym: ev == y.mul(&mm),
        evl_equals_y: ev.mul(&iml) == y,
        v_equals_pym: v == p.mul(&y).mul(&mm),
    }
}

fn difference_valuations(
    pts: &PointTuple<CycElement>,
    p: u64,
    n: u32,
) -> Result<Vec<Vec<i64>>, Error> {
    let m = pts.len();
    let mut vd = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = &pts.values[i] - &pts.values[j];
            let v = d
                .t_valuation(p, n)?
                .as_finite()
                .expect("difference of distinct points is nonzero");
            vd[i][j] = v;
            vd[j][i] = v;
        }
    }
    Ok(vd)
}

/// Greedy reordering to a minimally ordered tuple: having fixed the first j
/// entries, append a remaining element minimizing the sum of valuations of
/// differences against them, ties broken by original index. Returns the
/// permutation (original indices in their new order). The minimal-ordering
/// inequality is asserted post-hoc and a failure is reported as an error.
pub fn minimal_order(pts: &PointTuple<CycElement>, p: u64, n: u32) -> Result<Vec<usize>, Error> {
    let m = pts.len();
    let vd = difference_valuations(pts, p, n)?;
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut perm: Vec<usize> = Vec::with_capacity(m);
    while !remaining.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None; // (score, orig index, pos)
        for (pos, &cand) in remaining.iter().enumerate() {
            let score: i64 = perm.iter().map(|&c| vd[cand][c]).sum();
            if best.is_none_or(|(bs, bi, _)| score < bs || (score == bs && cand < bi)) {
                best = Some((score, cand, pos));
            }
        }
        let (_, _, pos) = best.unwrap();
        perm.push(remaining.remove(pos));
    }
    // post-hoc check of the defining inequality for all j < k
    let prefix_sum = |upto: usize, idx: usize| -> i64 { (0..upto).map(|i| vd[perm[i]][idx]).sum() };
    for j in 0..m {
        let own = prefix_sum(j, perm[j]);
        for k in (j + 1)..m {
            if own > prefix_sum(j, perm[k]) {
                return Err(Error::NotMinimallyOrdered);
            }
        }
    }
    Ok(perm)
}

/// Elementary divisor valuations of V at a minimally ordered tuple:
/// the i-th entry is sum_{j<i} v_t(x_i - x_j), ascending by construction.
pub fn eldiv_valuations_by_ordering(
    pts: &PointTuple<CycElement>,
    p: u64,
    n: u32,
) -> Result<Vec<Valuation>, Error> {
    let vd = difference_valuations(pts, p, n)?;
    Ok((0..pts.len())
        .map(|i| Valuation::Finite((0..i).map(|j| vd[i][j]).sum()))
        .collect())
}
