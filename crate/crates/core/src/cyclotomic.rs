//! Exact arithmetic in Q(zeta_m) and Z[zeta_m].
//!
//! Elements are stored on the power basis zeta^0 .. zeta^{phi(m)-1}, reduced
//! modulo the m-th cyclotomic polynomial Phi_m, so equality is coefficient
//! equality. The t-adic valuation at t = 1 - zeta_{p^n} is computed through
//! the binomial change of basis zeta = 1 - t, using v_t(p) = phi(p^n).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::rational::{
    format_rat, int_p_valuation, is_integral, is_p_integral, parse_rat, rat_p_valuation, Rat,
};

/// Euler's totient by trial-division factorization.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi: m must be positive");
    let mut phi = m;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            phi = phi / p * (p - 1);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        phi = phi / rest * (rest - 1);
    }
    phi
}

pub fn divisors(m: u64) -> Vec<u64> {
    assert!(m >= 1);
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m % i == 0 {
            divs.push(i);
            if i != m / i {
                divs.push(m / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (p, v_p(m)) pairs, ascending.
pub fn factorize(m: u64) -> Vec<(u64, u32)> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    out
}

/// The p-part m[p] = p^{v_p(k)} of a nonzero integer.
pub fn p_part(k: i64, p: u64) -> u64 {
    assert!(k != 0, "p_part: k must be nonzero");
    assert!(is_prime(p), "p_part: p must be prime");
    let mut k = k.unsigned_abs();
    let mut part = 1u64;
    while k % p == 0 {
        part *= p;
        k /= p;
    }
    part
}

// ---------------------------------------------------------------------------
// integer polynomials (dense, ascending coefficients)
// ---------------------------------------------------------------------------

fn int_poly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Exact division of integer polynomials; the divisor must be monic.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + i] -= t;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Phi_m, ascending; monic of degree phi(m).
///
/// Computed by dividing X^m - 1 by the product of Phi_d over proper
/// divisors d of m.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    cyclotomic_polynomial_arc(m).as_ref().clone()
}

pub(crate) fn cyclotomic_polynomial_arc(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic_polynomial: m must be positive");
    if let Some(hit) = cyclotomic_cache().lock().unwrap().get(&m) {
        return hit.clone();
    }
    let phi = if m == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // X^m - 1
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut num = int_poly_trim(num);
        for d in divisors(m) {
            if d == m {
                continue;
            }
            let pd = cyclotomic_polynomial_arc(d);
            num = int_poly_div_exact(&num, &pd);
        }
        num
    };
    debug_assert_eq!(phi.len() as u64 - 1, euler_phi(m));
    let arc = Arc::new(phi);
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(m, arc.clone());
    arc
}

/// Remainder of a rational polynomial modulo the monic integer polynomial.
fn rat_poly_rem(mut poly: Vec<Rat>, modulus: &[BigInt]) -> Vec<Rat> {
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let c = poly.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let k = poly.len() - deg;
        for (i, d) in modulus.iter().take(deg).enumerate() {
            let sub = &c * Rat::from_integer(d.clone());
            poly[k + i] -= sub;
        }
    }
    poly
}

// ---------------------------------------------------------------------------
// valuations
// ---------------------------------------------------------------------------

/// A t-adic (or p-adic) valuation; `Infinity` exactly for the zero element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(v: i64) -> Self {
        Valuation::Finite(v)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn as_finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinity => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// cyclotomic field elements
// ---------------------------------------------------------------------------

/// An element of Q(zeta_m) on the power basis zeta^0 .. zeta^{phi(m)-1}.
#[derive(Clone, PartialEq, Eq)]
pub struct CycElement {
    m: u64,
    coeffs: Vec<Rat>,
}

impl CycElement {
    /// Builds an element from an arbitrary-length polynomial in zeta,
    /// reducing modulo Phi_m.
    pub fn from_poly(m: u64, poly: Vec<Rat>) -> Self {
        let modulus = cyclotomic_polynomial_arc(m);
        let mut coeffs = rat_poly_rem(poly, &modulus);
        coeffs.resize(modulus.len() - 1, Rat::zero());
        CycElement { m, coeffs }
    }

    /// Builds an element from exactly phi(m) power-basis coefficients.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Self {
        assert_eq!(
            coeffs.len() as u64,
            euler_phi(m),
            "from_coeffs: expected phi(m) coefficients"
        );
        CycElement { m, coeffs }
    }

    pub fn zero(m: u64) -> Self {
        CycElement::from_coeffs(m, vec![Rat::zero(); euler_phi(m) as usize])
    }

    pub fn one(m: u64) -> Self {
        CycElement::from_rational(m, Rat::one())
    }

    pub fn from_rational(m: u64, r: Rat) -> Self {
        let mut coeffs = vec![Rat::zero(); euler_phi(m) as usize];
        coeffs[0] = r;
        CycElement { m, coeffs }
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        CycElement::from_rational(m, Rat::from_integer(BigInt::from(n)))
    }

    /// zeta_m.
    pub fn zeta(m: u64) -> Self {
        CycElement::zeta_pow(m, 1)
    }

    /// zeta_m^e for any integer exponent.
    pub fn zeta_pow(m: u64, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut poly = vec![Rat::zero(); e + 1];
        poly[e] = Rat::one();
        CycElement::from_poly(m, poly)
    }

    /// t = 1 - zeta_m.
    pub fn t_element(m: u64) -> Self {
        &CycElement::one(m) - &CycElement::zeta(m)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational part if the element is rational, i.e. supported on zeta^0.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// True when all power-basis coefficients are integers, i.e. the element
    /// lies in Z[zeta_m].
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(is_integral)
    }

    /// True when all coefficients are p-integral, i.e. the element lies in
    /// Z_(p)[zeta_m].
    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    pub fn scale(&self, r: &Rat) -> CycElement {
        CycElement {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn assert_same_conductor(&self, other: &CycElement) {
        assert_eq!(
            self.m, other.m,
            "conductor mismatch: {} vs {}",
            self.m, other.m
        );
    }

    /// Multiplicative inverse via the extended euclidean algorithm against
    /// Phi_m over the rationals.
    pub fn inv(&self) -> Result<CycElement, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = cyclotomic_polynomial_arc(self.m);
        // r0 = Phi_m, r1 = self; track u with u * self = r (mod Phi_m)
        let mut r0: Vec<Rat> = modulus
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let mut r1: Vec<Rat> = trim_rat(self.coeffs.clone());
        let mut u0: Vec<Rat> = vec![];
        let mut u1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            let (q, r) = rat_poly_div_rem(&r0, &r1);
            let u_next = rat_poly_sub(&u0, &rat_poly_mul(&q, &u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u_next;
        }
        // r0 is the gcd; Phi_m irreducible and self nonzero force deg r0 = 0
        assert_eq!(r0.len(), 1, "gcd with the irreducible Phi_m must be constant");
        let g_inv = Rat::one() / r0[0].clone();
        let inv_poly: Vec<Rat> = u0.iter().map(|c| c * &g_inv).collect();
        Ok(CycElement::from_poly(self.m, inv_poly))
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, e: u64) -> CycElement {
        let mut base = self.clone();
        let mut e = e;
        let mut acc = CycElement::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Applies the Galois substitution zeta -> zeta^i, gcd(i, m) = 1.
    pub fn galois_apply(&self, i: i64) -> Result<CycElement, Error> {
        let im = i.rem_euclid(self.m as i64) as u64;
        if num_integer::gcd(im, self.m) != 1 {
            return Err(Error::NotCoprime { i, m: self.m });
        }
        let mut poly = vec![Rat::zero(); self.m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (j as u64 * im % self.m) as usize;
                poly[e] += c;
            }
        }
        Ok(CycElement::from_poly(self.m, poly))
    }

    /// The t-adic valuation at t = 1 - zeta_{p^n}; requires conductor p^n.
    ///
    /// The element is rewritten on the t-power basis via zeta^j = (1-t)^j,
    /// giving coefficients b_i; the valuation is min_i phi(p^n)*v_p(b_i) + i
    /// over nonzero b_i, which is attained uniquely because the candidates
    /// are pairwise distinct modulo phi(p^n).
    pub fn t_valuation(&self, p: u64, n: u32) -> Result<Valuation, Error> {
        if !is_prime(p) || n == 0 || self.m != p.pow(n) {
            return Err(Error::NotPrimePower { m: self.m, p, n });
        }
        if self.is_zero() {
            return Ok(Valuation::Infinity);
        }
        let phi = self.coeffs.len();
        // b_i = (-1)^i * sum_j c_j * C(j, i)
        let binom = binomial_table(phi);
        let mut best: Option<i64> = None;
        for i in 0..phi {
            let mut b = Rat::zero();
            for (j, c) in self.coeffs.iter().enumerate().skip(i) {
                if !c.is_zero() {
                    b += c * Rat::from_integer(binom[j][i].clone());
                }
            }
            if let Some(vp) = rat_p_valuation(&b, p) {
                let cand = phi as i64 * vp + i as i64;
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        Ok(Valuation::Finite(best.expect("nonzero element has a nonzero t-coefficient")))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "coeffs": self.coeffs.iter().map(|c| Value::String(format_rat(c))).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CycElement, Error> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("element: missing integer field \"m\"".into()))?;
        if m == 0 {
            return Err(Error::BadInput("element: m must be positive".into()));
        }
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("element: missing array field \"coeffs\"".into()))?;
        if arr.len() as u64 != euler_phi(m) {
            return Err(Error::BadInput(format!(
                "element: expected {} coefficients for m = {}, got {}",
                euler_phi(m),
                m,
                arr.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let s = c
                .as_str()
                .ok_or_else(|| Error::BadInput("element: coefficients must be strings".into()))?;
            coeffs.push(
                parse_rat(s)
                    .ok_or_else(|| Error::BadInput(format!("element: bad rational {:?}", s)))?,
            );
        }
        Ok(CycElement::from_coeffs(m, coeffs))
    }
}

fn trim_rat(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rat_poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim_rat(out)
}

fn rat_poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim_rat(out)
}

/// Quotient and remainder of rational polynomials, divisor nonzero.
fn rat_poly_div_rem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty());
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = Rat::one() / den[dd].clone();
    if rem.len() <= dd {
        return (vec![], trim_rat(rem));
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + i] -= t;
        }
        quot[k] = c;
    }
    rem.truncate(dd);
    (trim_rat(quot), trim_rat(rem))
}

/// Pascal triangle C(j, i) for j, i < n.
pub(crate) fn binomial_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        t[j][0] = BigInt::one();
        for i in 1..=j {
            t[j][i] = &t[j - 1][i - 1] + &t[j - 1][i];
        }
    }
    t
}

/// Binomial coefficient C(a, b) with C(a, b) = 0 outside 0 <= b <= a.
pub fn binomial(a: u64, b: i64) -> BigInt {
    if b < 0 || b as u64 > a {
        return BigInt::zero();
    }
    let b = b as u64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..b.min(a - b) {
        num *= BigInt::from(a - k);
        den *= BigInt::from(k + 1);
    }
    num / den
}

/// v_p of an integer binomial coefficient, for radical-series exponents.
pub fn binomial_p_valuation(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    int_p_valuation(&binomial(a, b as i64), p).unwrap_or(0)
}

impl Add for &CycElement {
    type Output = CycElement;
    fn add(self, rhs: &CycElement) -> CycElement {
        self.assert_same_conductor(rhs);
        CycElement {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycElement {
    type Output = CycElement;
    fn sub(self, rhs: &CycElement) -> CycElement {
        self.assert_same_conductor(rhs);
        CycElement {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycElement {
    type Output = CycElement;
    fn neg(self) -> CycElement {
        CycElement {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycElement {
    type Output = CycElement;
    fn mul(self, rhs: &CycElement) -> CycElement {
        self.assert_same_conductor(rhs);
        CycElement::from_poly(self.m, rat_poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Display for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_str = format_rat(&mag);
            if k == 0 {
                write!(f, "{}", coeff_str)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", coeff_str)?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", k)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElement(m={}, {})", self.m, self)
    }
}
