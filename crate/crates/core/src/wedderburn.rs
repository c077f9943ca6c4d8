//! The cyclic Wedderburn embedding omega_m: Z[zeta_m] C_m -> prod_j Z[zeta_m],
//! c_m -> (zeta_m^j)_j, diagonalized through the q-Pascal matrix, its tie
//! system and image basis, the first and second order Pascal tie rings
//! W^(1) and W^(2), and the radical series of W^(1).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{binomial, is_prime, p_part, CycElement, Valuation};
use crate::dedekind::validate_pn;
use crate::error::Error;
use crate::linalg::ExactMatrix;
use crate::rational::{rat, Rat};
use crate::ties::{Congruence, TieCoeff, TieModulus, TieSystem};

/// An element of (Q or Z)C_m as a coefficient vector over group powers
/// c_m^0 .. c_m^{m-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    m: u64,
    coeffs: Vec<Rat>,
}

impl GroupRingElement {
    pub fn new(m: u64, coeffs: Vec<Rat>) -> Self {
        assert_eq!(coeffs.len() as u64, m, "need one coefficient per group element");
        GroupRingElement { m, coeffs }
    }

    pub fn from_ints(m: u64, coeffs: &[i64]) -> Self {
        GroupRingElement::new(m, coeffs.iter().map(|&c| crate::rational::rat_int(c)).collect())
    }

    /// c_m^k.
    pub fn generator_power(m: u64, k: i64) -> Self {
        let mut coeffs = vec![Rat::zero(); m as usize];
        coeffs[k.rem_euclid(m as i64) as usize] = Rat::one();
        GroupRingElement { m, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(crate::rational::is_integral)
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| crate::rational::is_p_integral(c, p))
    }
}

/// Evaluates a group-ring element at every character c_m -> zeta_m^j.
pub fn wedderburn_apply(x: &GroupRingElement) -> Vec<CycElement> {
    let m = x.m;
    (0..m)
        .map(|j| {
            let mut poly = vec![Rat::zero(); m as usize];
            for (i, c) in x.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    poly[(i as u64 * j % m) as usize] += c;
                }
            }
            CycElement::from_poly(m, poly)
        })
        .collect()
}

/// V_{zeta_m^sign} with entries zeta^{sign * i * j}.
pub fn v_matrix(m: u64, sign: i64) -> ExactMatrix<CycElement> {
    ExactMatrix::from_fn(m as usize, m as usize, |i, j| {
        CycElement::zeta_pow(m, sign * (i as i64) * (j as i64))
    })
}

/// The q-Pascal matrix G_q of size m x m, entries [i choose j]_q.
///
/// Built by the q-Pascal recursion evaluated at q, which agrees entrywise
/// with `gauss_eval` of the Gaussian polynomials.
pub fn q_pascal(m: u64, q: &CycElement) -> ExactMatrix<CycElement> {
    let size = m as usize;
    let cm = q.conductor();
    let zero = CycElement::zero(cm);
    let one = CycElement::one(cm);
    // powers q^0 .. q^{m-1}
    let mut q_pows = Vec::with_capacity(size);
    let mut acc = one.clone();
    for _ in 0..size {
        q_pows.push(acc.clone());
        acc = &acc * q;
    }
    // column 0 and the diagonal are 1; fill the interior by the recursion
    let mut g = ExactMatrix::from_fn(size, size, |i, j| {
        if j == 0 || i == j {
            one.clone()
        } else {
            zero.clone()
        }
    });
    for i in 1..size {
        for j in 1..=i {
            // [i,j] = [i-1,j-1] + q^j [i-1,j]
            let a = g.at(i - 1, j - 1).clone();
            let b = if j <= i - 1 { g.at(i - 1, j).clone() } else { zero.clone() };
            g.set(i, j, &a + &(&q_pows[j] * &b));
        }
    }
    g
}

/// The closed-form inverse of the q-Pascal matrix:
/// entries (-1)^{j+k} q^{C(j-k,2)} [j choose k]_q.
pub fn q_pascal_inverse(m: u64, q: &CycElement) -> ExactMatrix<CycElement> {
    let g = q_pascal(m, q);
    let cm = q.conductor();
    ExactMatrix::from_fn(m as usize, m as usize, |j, k| {
        if k > j {
            return CycElement::zero(cm);
        }
        let d = (j - k) as u64;
        let c2 = d * d.saturating_sub(1) / 2;
        let mut e = &q.pow(c2) * g.at(j, k);
        if (j + k) % 2 == 1 {
            e = -&e;
        }
        e
    })
}

/// Closed-form diagonal entries m zeta^{i^2} / prod_{j in [1,i]} (1 - zeta^j).
pub fn wedderburn_diagonal(m: u64) -> Vec<CycElement> {
    let m_scalar = CycElement::from_int(m, m as i64);
    let one = CycElement::one(m);
    let mut denom = one.clone();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        if i > 0 {
            denom = &denom * &(&one - &CycElement::zeta_pow(m, i as i64));
        }
        let num = &m_scalar * &CycElement::zeta_pow(m, (i * i) as i64);
        out.push(&num * &denom.inv().expect("1 - zeta^j is nonzero for j in [1,m-1]"));
    }
    out
}

/// Computes the diagonalization G^T V G = m D^{-1} with G = G_{zeta^{-1}} and
/// V = V_{zeta}, asserts it against the closed-form diagonal, checks the
/// diagonal is integral, and returns (G^T, G, diagonal).
#[allow(clippy::type_complexity)]
pub fn wedderburn_diagonalize(
    m: u64,
) -> Result<(ExactMatrix<CycElement>, ExactMatrix<CycElement>, Vec<CycElement>), Error> {
    assert!(m >= 1);
    let qinv = CycElement::zeta_pow(m, -1);
    let g = q_pascal(m, &qinv);
    let gt = g.transpose();
    let v = v_matrix(m, 1);
    let product = gt.mul(&v).mul(&g);
    let diag = wedderburn_diagonal(m);
    for i in 0..m as usize {
        for j in 0..m as usize {
            let expect = if i == j {
                diag[i].clone()
            } else {
                CycElement::zero(m)
            };
            if product.at(i, j) != &expect {
                return Err(Error::InternalAssertion(format!(
                    "q-Pascal diagonalization failed at m = {}, entry ({}, {})",
                    m, i, j
                )));
            }
        }
    }
    for (i, d) in diag.iter().enumerate() {
        if !d.is_integral() {
            return Err(Error::InternalAssertion(format!(
                "diagonal entry {} at m = {} is not integral",
                i, m
            )));
        }
    }
    Ok((gt, g, diag))
}

/// The tie moduli m / prod_{j in [1,i]} (1 - zeta^j), i in [0, m-1].
pub fn wedderburn_tie_moduli(m: u64) -> Vec<CycElement> {
    let m_scalar = CycElement::from_int(m, m as i64);
    let one = CycElement::one(m);
    let mut denom = one.clone();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        if i > 0 {
            denom = &denom * &(&one - &CycElement::zeta_pow(m, i as i64));
        }
        out.push(&m_scalar * &denom.inv().expect("nonzero"));
    }
    out
}

/// The congruence system: sum_{j in [i,m-1]} y_j [j choose i]_{zeta^{-1}}
/// lies in Z[zeta_m] * (m / prod_{j in [1,i]} (1 - zeta^j)) for each i.
/// Coordinates are declared in reversed order so the system is triangular.
pub fn wedderburn_ties(m: u64) -> TieSystem {
    let qinv = CycElement::zeta_pow(m, -1);
    let g = q_pascal(m, &qinv);
    let moduli = wedderburn_tie_moduli(m);
    let name = |i: u64| format!("y_{}", i);
    let order: Vec<String> = (0..m).rev().map(name).collect();
    let congruences = (0..m as usize)
        .rev()
        .map(|i| Congruence {
            target: name(i as u64),
            modulus: TieModulus::Element(moduli[i].clone()),
            form: ((i + 1)..m as usize)
                .filter(|&j| !g.at(j, i).is_zero())
                .map(|j| (name(j as u64), TieCoeff::Cyc(-g.at(j, i))))
                .collect(),
        })
        .collect();
    TieSystem { order, congruences }
}

/// Indices i of violated Wedderburn ties for a candidate tuple.
pub fn check_wedderburn_ties(m: u64, y: &[CycElement]) -> Vec<usize> {
    assert_eq!(y.len() as u64, m);
    let qinv = CycElement::zeta_pow(m, -1);
    let g = q_pascal(m, &qinv);
    let moduli = wedderburn_tie_moduli(m);
    let mut violated = Vec::new();
    for i in 0..m as usize {
        let mut s = CycElement::zero(m);
        for (j, yj) in y.iter().enumerate().skip(i) {
            s = &s + &(yj * g.at(j, i));
        }
        let quotient = &s * &moduli[i].inv().expect("modulus is nonzero");
        if !quotient.is_integral() {
            violated.push(i);
        }
    }
    violated
}

/// The q-Pascal image basis: row j has entries
/// (-1)^k zeta^{C(k,2)} (m / prod_{l in [1,j]} (1 - zeta^l)) [j choose k]_zeta.
pub fn wedderburn_image_basis(m: u64) -> ExactMatrix<CycElement> {
    let z = CycElement::zeta(m);
    let g = q_pascal(m, &z);
    let moduli = wedderburn_tie_moduli(m);
    ExactMatrix::from_fn(m as usize, m as usize, |j, k| {
        if k > j {
            return CycElement::zero(m);
        }
        let c2 = (k * k.saturating_sub(1) / 2) as i64;
        let mut e = &(&CycElement::zeta_pow(m, c2) * &moduli[j]) * g.at(j, k);
        if k % 2 == 1 {
            e = -&e;
        }
        e
    })
}

/// Membership by rational-preimage integrality: solves x V = y against the
/// matrix of images of c^i and tests the preimage for integral coefficients.
pub fn wedderburn_membership_preimage(
    m: u64,
    y: &[CycElement],
) -> Result<(bool, Vec<CycElement>), Error> {
    let v = v_matrix(m, 1);
    if y.len() != v.rows() {
        return Err(Error::BadInput(format!(
            "expected a tuple of length {}, got {}",
            v.rows(),
            y.len()
        )));
    }
    let x = v.solve_left(y)?;
    let member = x.iter().all(|c| c.is_integral());
    Ok((member, x))
}

/// Closed-form valuation of the (j+1)st elementary divisor of the localized
/// embedding omega_{p^n}: sum_k (a_k - a_{k+1})(k+1) p^k for the p-adic
/// digits a_k of j. Equals sum_{i in [1,j]} i[p].
pub fn wedderburn_eldiv_closed_form(p: u64, n: u32, j: u64) -> Result<Valuation, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    if j >= m {
        return Err(Error::IndexOutOfRange(format!("j = {} must lie in [0, {}]", j, m - 1)));
    }
    let mut digits = vec![0i64; n as usize + 1];
    let mut jj = j;
    for d in digits.iter_mut() {
        *d = (jj % p) as i64;
        jj /= p;
    }
    let mut total = 0i64;
    let mut p_pow = 1i64;
    for k in 0..n as usize {
        total += (digits[k] - digits[k + 1]) * (k as i64 + 1) * p_pow;
        p_pow *= p as i64;
    }
    Ok(Valuation::Finite(total))
}

/// sum_{i in [1,j]} i[p], the p-part partial sums the closed form must match.
pub fn sum_p_parts(j: u64, p: u64) -> i64 {
    (1..=j).map(|i| p_part(i as i64, p) as i64).sum()
}

// ---------------------------------------------------------------------------
// first order Pascal ties: W^(1)
// ---------------------------------------------------------------------------

/// The xi basis matrix of W^(1)_m: row i is
/// xi_{m,i} = ((-1)^i t^i C(j, i))_{j in [0, m-1]}.
pub fn xi_matrix(m: u64) -> ExactMatrix<CycElement> {
    let t = CycElement::t_element(m);
    let mut t_pows = Vec::with_capacity(m as usize);
    let mut acc = CycElement::one(m);
    for _ in 0..m {
        t_pows.push(acc.clone());
        acc = &acc * &t;
    }
    ExactMatrix::from_fn(m as usize, m as usize, |i, j| {
        let b = binomial(j as u64, i as i64);
        if b.is_zero() {
            return CycElement::zero(m);
        }
        let mut e = t_pows[i].scale(&Rat::from_integer(b));
        if i % 2 == 1 {
            e = -&e;
        }
        e
    })
}

/// An element of W^(1)_m in coordinates over the xi basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiVector {
    m: u64,
    coords: Vec<CycElement>,
}

impl XiVector {
    pub fn new(m: u64, coords: Vec<CycElement>) -> Self {
        assert_eq!(coords.len() as u64, m);
        XiVector { m, coords }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coords(&self) -> &[CycElement] {
        &self.coords
    }

    /// The underlying tuple in W^(0): y = coords * xi matrix.
    pub fn to_w0(&self) -> Vec<CycElement> {
        let xi = xi_matrix(self.m);
        (0..self.m as usize)
            .map(|j| {
                let mut acc = CycElement::zero(self.m);
                for (i, z) in self.coords.iter().enumerate() {
                    if !z.is_zero() {
                        acc = &acc + &(z * xi.at(i, j));
                    }
                }
                acc
            })
            .collect()
    }

    /// Coordinates of a W^(0) tuple over the xi basis, by the inverse
    /// binomial transform z_k = t^{-k} sum_i (-1)^i C(k, i) y_i. The result
    /// has integral entries exactly when y lies in W^(1).
    pub fn from_w0(m: u64, y: &[CycElement]) -> Self {
        assert_eq!(y.len() as u64, m);
        let t_inv = CycElement::t_element(m).inv().expect("t is nonzero");
        let mut t_inv_pow = CycElement::one(m);
        let mut coords = Vec::with_capacity(m as usize);
        for k in 0..m {
            let mut acc = CycElement::zero(m);
            for (i, yi) in y.iter().enumerate().take(k as usize + 1) {
                let b = binomial(k, i as i64);
                if b.is_zero() {
                    continue;
                }
                let mut term = yi.scale(&Rat::from_integer(b));
                if i % 2 == 1 {
                    term = -&term;
                }
                acc = &acc + &term;
            }
            coords.push(&acc * &t_inv_pow);
            t_inv_pow = &t_inv_pow * &t_inv;
        }
        XiVector { m, coords }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integral())
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coords.iter().all(|c| c.is_p_integral(p))
    }
}

/// Membership in W^(1): the binomial transforms must be divisible by t^k.
pub fn w1_membership(m: u64, y: &[CycElement]) -> bool {
    XiVector::from_w0(m, y).is_integral()
}

/// The xi coordinates of the image of c_m^h: coords_k = ((1 - zeta^h)/t)^k,
/// with 0^0 = 1.
pub fn group_element_xi_coords(m: u64, h: i64) -> XiVector {
    let t_inv = CycElement::t_element(m).inv().expect("t is nonzero");
    let u = &(&CycElement::one(m) - &CycElement::zeta_pow(m, h)) * &t_inv;
    let mut coords = Vec::with_capacity(m as usize);
    let mut acc = CycElement::one(m);
    for _ in 0..m {
        coords.push(acc.clone());
        acc = &acc * &u;
    }
    XiVector { m, coords }
}

/// The structure constants of W^(1):
/// xi_j xi_i = sum_{k in [0,j]} C(j,k) C(i+k,j) (-1)^{j-k} t^{j-k} xi_{i+k},
/// with xi_l = 0 for l >= m; requires 0 <= j <= i.
pub fn xi_product(m: u64, j: u64, i: u64) -> Result<XiVector, Error> {
    if j > i || i >= m {
        return Err(Error::IndexOutOfRange(format!(
            "xi_product needs 0 <= j <= i < m, got j = {}, i = {}, m = {}",
            j, i, m
        )));
    }
    let t = CycElement::t_element(m);
    let mut coords = vec![CycElement::zero(m); m as usize];
    for k in 0..=j {
        let pos = i + k;
        if pos >= m {
            continue;
        }
        let c = binomial(j, k as i64) * binomial(i + k, j as i64);
        let mut term = t.pow(j - k).scale(&Rat::from_integer(c));
        if (j - k) % 2 == 1 {
            term = -&term;
        }
        coords[pos as usize] = &coords[pos as usize] + &term;
    }
    Ok(XiVector { m, coords })
}

/// Coefficient criterion for m = p prime: an integral tuple lies in W^(1)_p
/// iff sum_{i,j} (-1)^i C(u,i) C(j,v) y_{i,j} = 0 mod p for all
/// 0 <= v < u <= p-1, where y_i = sum_j y_{i,j} zeta^j.
pub fn coefficient_criterion_membership(p: u64, y: &[CycElement]) -> Result<bool, Error> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{} is not prime", p)));
    }
    if y.len() as u64 != p {
        return Err(Error::BadInput(format!("expected {} tuple entries", p)));
    }
    if !y.iter().all(|e| e.is_integral()) {
        return Err(Error::BadInput("coefficient criterion needs integral entries".into()));
    }
    let pb = BigInt::from(p);
    for u in 1..p {
        for v in 0..u {
            let mut acc = BigInt::zero();
            for (i, yi) in y.iter().enumerate() {
                let sign_c = {
                    let c = binomial(u, i as i64);
                    if i % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                };
                if sign_c.is_zero() {
                    continue;
                }
                for (j, coeff) in yi.coeffs().iter().enumerate() {
                    let cj = binomial(j as u64, v as i64);
                    if cj.is_zero() || coeff.is_zero() {
                        continue;
                    }
                    acc += &sign_c * cj * coeff.numer();
                }
            }
            if !(acc % &pb).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// second order Pascal ties: W^(2)
// ---------------------------------------------------------------------------

/// gamma = sum_{k in [1,p-1]} t^{k-1}/k.
pub fn w2_gamma(p: u64, n: u32) -> Result<CycElement, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    let t = CycElement::t_element(m);
    let mut acc = CycElement::zero(m);
    for k in 1..p {
        acc = &acc + &t.pow(k - 1).scale(&rat(1, k as i64));
    }
    Ok(acc)
}

/// Coefficients of f_{p^n}(X) = gamma X^p - sum_{k in [1,p-1]} (t^{k-1}/k) X^k,
/// ascending, length p+1.
pub fn w2_f_poly(p: u64, n: u32) -> Result<Vec<CycElement>, Error> {
    let m = p.pow(n);
    let t = CycElement::t_element(m);
    let mut coeffs = vec![CycElement::zero(m); p as usize + 1];
    for k in 1..p {
        coeffs[k as usize] = -&t.pow(k - 1).scale(&rat(1, k as i64));
    }
    coeffs[p as usize] = w2_gamma(p, n)?;
    Ok(coeffs)
}

fn cyc_poly_mul(a: &[CycElement], b: &[CycElement], m: u64) -> Vec<CycElement> {
    let mut out = vec![CycElement::zero(m); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// The violated second-order conditions (i, j) for xi coordinates z:
/// (X^i f^j)[(z_k)] must vanish modulo t^{j(p-1)} for i in [0,p-1] and
/// j in [0, p^{n-1}-1]. Polynomial powers are taken in the polynomial ring
/// and the evaluation is linear in the coefficients.
pub fn w2_violations(p: u64, n: u32, z: &[CycElement]) -> Result<Vec<(u64, u64)>, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    if z.len() as u64 != m {
        return Err(Error::BadInput(format!("expected {} xi coordinates", m)));
    }
    let f = w2_f_poly(p, n)?;
    let mut violations = Vec::new();
    let mut f_power = vec![CycElement::one(m)]; // f^0
    for j in 0..p.pow(n - 1) {
        let required = (j * (p - 1)) as i64;
        for i in 0..p {
            // evaluate X^i f^j linearly: sum_l (f^j)_l z_{l+i}
            let mut acc = CycElement::zero(m);
            for (l, c) in f_power.iter().enumerate() {
                let pos = l as u64 + i;
                if pos < m && !c.is_zero() {
                    acc = &acc + &(c * &z[pos as usize]);
                }
            }
            let v = acc.t_valuation(p, n)?;
            if v < Valuation::Finite(required) {
                violations.push((i, j));
            }
        }
        if j + 1 < p.pow(n - 1) {
            f_power = cyc_poly_mul(&f_power, &f, m);
        }
    }
    Ok(violations)
}

/// Membership in W^(2)_{p^n} for xi coordinates z (p-integral entries).
pub fn w2_membership(p: u64, n: u32, z: &[CycElement]) -> Result<bool, Error> {
    Ok(w2_violations(p, n, z)?.is_empty())
}

/// A Z_(p)[zeta]-basis of (W^(2)_{p^n})_(p) in xi coordinates, as matrix rows.
///
/// The membership conditions say z * M has entries in T = Z_(p)[zeta] for the
/// matrix M with column (i,j) equal to the coefficient vector of X^i f^j
/// scaled by t^{-j(p-1)}. Decomposing L M R = diag(t^{e_r}) with L, R
/// invertible over T turns the lattice into
/// { u L : u_r in t^{max(0,-e_r)} T }, whence the basis rows
/// t^{max(0,-e_r)} * (row r of L).
pub fn w2_basis(p: u64, n: u32) -> Result<ExactMatrix<CycElement>, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    let size = m as usize;
    let f = w2_f_poly(p, n)?;
    let t_inv = CycElement::t_element(m).inv().expect("t is nonzero");
    let mut cond = ExactMatrix::identity(size, CycElement::one(m));
    let mut f_power = vec![CycElement::one(m)];
    let mut col = 0usize;
    for j in 0..p.pow(n - 1) {
        let scale = t_inv.pow((j * (p - 1)) as u64);
        for i in 0..p {
            for k in 0..size {
                let l = k as i64 - i as i64;
                let c = if l >= 0 && (l as usize) < f_power.len() {
                    &f_power[l as usize] * &scale
                } else {
                    CycElement::zero(m)
                };
                cond.set(k, col, c);
            }
            col += 1;
        }
        if j + 1 < p.pow(n - 1) {
            f_power = cyc_poly_mul(&f_power, &f, m);
        }
    }
    let (l, vals, _) = crate::linalg::smith_decompose_dvr(&cond, p, n)?;
    let t = CycElement::t_element(m);
    Ok(ExactMatrix::from_fn(size, size, |r, c| {
        let e = vals[r];
        let exp = if e < 0 { (-e) as u64 } else { 0 };
        &t.pow(exp) * l.at(r, c)
    }))
}

/// Evidence report for the question whether W^(2)_{p^n} is closed under
/// multiplication inside W^(1)_{p^n}.
#[derive(Clone, Debug)]
pub struct W2SubringExperiment {
    pub p: u64,
    pub n: u32,
    /// t-exponents of the elementary divisors of W^(2) inside W^(1), sorted.
    pub lattice_exponents: Vec<u64>,
    pub pairs_tested: u64,
    /// basis index pairs whose product fell outside W^(2)
    pub failures: Vec<(usize, usize)>,
}

impl W2SubringExperiment {
    pub fn closed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Multiplies all pairs of W^(2) basis vectors inside W^(1) (pointwise in
/// W^(0), converted back to xi coordinates) and tests the products for
/// membership in W^(2). Evidence only; no claim is derived from it.
pub fn w2_subring_experiment(p: u64, n: u32) -> Result<W2SubringExperiment, Error> {
    let m = p.pow(n);
    let size = m as usize;
    let basis = w2_basis(p, n)?;
    let mut exponents: Vec<u64> = (0..size)
        .map(|r| {
            let z = basis.row_vec(r);
            // the diagonal scaling exponent is the row's minimal valuation
            z.iter()
                .map(|e| match e.t_valuation(p, n).expect("conductor matches") {
                    Valuation::Finite(v) => v.max(0) as u64,
                    Valuation::Infinity => u64::MAX,
                })
                .min()
                .unwrap()
        })
        .collect();
    exponents.sort_unstable();
    // sanity: every basis row must itself be a member
    for r in 0..size {
        if !w2_membership(p, n, &basis.row_vec(r))? {
            return Err(Error::InternalAssertion(format!(
                "w2 basis row {} is not a member at ({}, {})",
                r, p, n
            )));
        }
    }
    let xi = xi_matrix(m);
    let to_w0 = |z: &[CycElement]| -> Vec<CycElement> {
        (0..size)
            .map(|c| {
                let mut acc = CycElement::zero(m);
                for (i, zi) in z.iter().enumerate() {
                    if !zi.is_zero() {
                        acc = &acc + &(zi * xi.at(i, c));
                    }
                }
                acc
            })
            .collect()
    };
    let w0_rows: Vec<Vec<CycElement>> = (0..size).map(|r| to_w0(&basis.row_vec(r))).collect();
    let mut failures = Vec::new();
    let mut pairs = 0u64;
    for a in 0..size {
        for b in a..size {
            pairs += 1;
            let prod: Vec<CycElement> = (0..size)
                .map(|c| &w0_rows[a][c] * &w0_rows[b][c])
                .collect();
            let z = XiVector::from_w0(m, &prod);
            if !w2_membership(p, n, z.coords())? {
                failures.push((a, b));
            }
        }
    }
    Ok(W2SubringExperiment {
        p,
        n,
        lattice_exponents: exponents,
        pairs_tested: pairs,
        failures,
    })
}

// ---------------------------------------------------------------------------
// radical series of (W^(1))_(p)
// ---------------------------------------------------------------------------

/// Generalized binomial C(a, b)_m: the coefficient of T^b in
/// (1 + T + ... + T^m)^a.
pub fn generalized_binomial(a: u64, b: u64, m: u64) -> BigInt {
    let mut coeffs = vec![BigInt::one()]; // (..)^0 = 1
    for _ in 0..a {
        let mut next = vec![BigInt::zero(); coeffs.len() + m as usize];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..=m as usize {
                next[d + k] += c;
            }
        }
        coeffs = next;
    }
    coeffs.get(b as usize).cloned().unwrap_or_else(BigInt::zero)
}

/// Sum of base-p digits of j.
pub fn digit_sum(mut j: u64, p: u64) -> u64 {
    let mut s = 0;
    while j > 0 {
        s += j % p;
        j /= p;
    }
    s
}

/// l_{p^n,i} = dim of the i-th radical layer of (W^(1)_{p^n})_(p):
/// sum_{j in [0,i]} C(n, j)_{p-1}.
pub fn w1_radical_layer_dim(p: u64, n: u32, i: u64) -> Result<u64, Error> {
    validate_pn(p, n)?;
    let mut total = BigInt::zero();
    for j in 0..=i {
        total += generalized_binomial(n as u64, j, p - 1);
    }
    Ok(u64::try_from(total).expect("layer dimension fits in u64"))
}

/// The scaling exponents max(i - q_p(j), 0) of the radical power basis.
pub fn w1_radical_exponents(p: u64, n: u32, i: u64) -> Result<Vec<u64>, Error> {
    validate_pn(p, n)?;
    Ok((0..p.pow(n))
        .map(|j| i.saturating_sub(digit_sum(j, p)))
        .collect())
}

/// Generators of r^i (W^(1))_(p) as W^(0) tuples: t^{max(i - q_p(j), 0)} xi_j.
pub fn w1_radical_power_basis(p: u64, n: u32, i: u64) -> Result<ExactMatrix<CycElement>, Error> {
    let m = p.pow(n);
    let exps = w1_radical_exponents(p, n, i)?;
    let xi = xi_matrix(m);
    let t = CycElement::t_element(m);
    Ok(ExactMatrix::from_fn(m as usize, m as usize, |r, c| {
        &t.pow(exps[r]) * xi.at(r, c)
    }))
}
