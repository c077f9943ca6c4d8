//! The absolute cyclic Wedderburn embedding Z C_{p^n} -> prod_{i in [0,n]}
//! Z[zeta_{p^i}], c -> (zeta_{p^i})_i, and its composite-m variant
//! Z C_m -> prod_{d|m} Z[zeta_d].
//!
//! The image is described by a triangular system of congruences built from
//! Z-linear operators T^{m,s}_i on finitely supported integer sequences; an
//! independent membership oracle inverts the embedding by the explicit
//! inversion formula and tests the preimage for integrality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cyclotomic::{
    cyclotomic_polynomial, divisors, euler_phi, factorize, CycElement,
};
use crate::dedekind::validate_pn;
use crate::error::Error;
use crate::linalg::ExactMatrix;
use crate::rational::Rat;
use crate::ties::{Congruence, TieCoeff, TieModulus, TieSystem};
use crate::wedderburn::GroupRingElement;

/// A finitely supported integer-indexed integer sequence.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinSuppSeq {
    support: BTreeMap<i64, BigInt>,
}

impl FinSuppSeq {
    pub fn new() -> Self {
        FinSuppSeq::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut s = FinSuppSeq::new();
        for (i, v) in pairs {
            s.add_at(i, &BigInt::from(v));
        }
        s
    }

    /// Coefficient vector with entry j at index j, indices 0..len.
    pub fn from_slice(values: &[i64]) -> Self {
        FinSuppSeq::from_pairs(values.iter().enumerate().map(|(i, &v)| (i as i64, v)))
    }

    pub fn get(&self, i: i64) -> BigInt {
        self.support.get(&i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: i64, v: BigInt) {
        if v.is_zero() {
            self.support.remove(&i);
        } else {
            self.support.insert(i, v);
        }
    }

    pub fn add_at(&mut self, i: i64, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let next = self.get(i) + v;
        self.set(i, next);
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.support.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, rhs: &FinSuppSeq) -> FinSuppSeq {
        let mut out = self.clone();
        for (&i, v) in rhs.support.iter() {
            out.add_at(i, v);
        }
        out
    }

    pub fn sub(&self, rhs: &FinSuppSeq) -> FinSuppSeq {
        self.add(&rhs.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> FinSuppSeq {
        if s.is_zero() {
            return FinSuppSeq::new();
        }
        FinSuppSeq {
            support: self.support.iter().map(|(&i, v)| (i, v * s)).collect(),
        }
    }

    /// True when every entry is divisible by the modulus.
    pub fn divisible_by(&self, modulus: &BigInt) -> bool {
        self.support.values().all(|v| v.is_multiple_of(modulus))
    }

    /// The evaluation x * zeta_{p^l} = sum_j x_j zeta^j in Q(zeta_{p^l}).
    pub fn star_zeta(&self, p_pow_l: u64) -> CycElement {
        let mut poly = vec![Rat::zero(); p_pow_l as usize];
        for (&i, v) in self.support.iter() {
            let e = i.rem_euclid(p_pow_l as i64) as usize;
            poly[e] += Rat::from_integer(v.clone());
        }
        CycElement::from_poly(p_pow_l, poly)
    }
}

/// The Z-linear operator T^{m,s}_i on finitely supported sequences:
/// (T^{m,s}_i x)_j = chi_{[0,p^i-1]}(j) * sum_k x_{[j]_{p^{i-m}} - p^{i-m} + k p^{i+s}}
/// for i >= m, and zero for i < m.
pub fn t_operator(m_shift: u32, s: u32, i: u32, p: u64, x: &FinSuppSeq) -> FinSuppSeq {
    let mut out = FinSuppSeq::new();
    if i < m_shift {
        return out;
    }
    let window = p.pow(i) as i64;
    let block = p.pow(i - m_shift) as i64;
    let period = p
        .checked_pow(i + s)
        .expect("p^{i+s} fits in u64") as i64;
    for j in 0..window {
        let base = j.rem_euclid(block) - block;
        let mut acc = BigInt::zero();
        for (&idx, v) in x.support.iter() {
            if (idx - base).rem_euclid(period) == 0 {
                acc += v;
            }
        }
        if !acc.is_zero() {
            out.set(j, acc);
        }
    }
    out
}

/// A tuple in prod_{i in [0,n]} Z[zeta_{p^i}], stored as one coefficient
/// sequence per component with support inside [0, phi(p^i) - 1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteTuple {
    p: u64,
    n: u32,
    components: Vec<FinSuppSeq>,
}

impl AbsoluteTuple {
    pub fn new(p: u64, n: u32, components: Vec<FinSuppSeq>) -> Result<Self, Error> {
        validate_pn(p, n)?;
        if components.len() != n as usize + 1 {
            return Err(Error::BadInput(format!(
                "expected {} components, got {}",
                n + 1,
                components.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            let bound = euler_phi(p.pow(i as u32)) as i64;
            if c.support.keys().any(|&k| k < 0 || k >= bound) {
                return Err(Error::BadInput(format!(
                    "component {} has support outside [0, {}]",
                    i,
                    bound - 1
                )));
            }
        }
        Ok(AbsoluteTuple { p, n, components })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn component(&self, i: usize) -> &FinSuppSeq {
        &self.components[i]
    }

    /// The image of c_{p^n}^h: component i is the coefficient vector of
    /// zeta_{p^i}^h, i.e. X^{h mod p^i} reduced modulo Phi_{p^i}.
    pub fn generator_image(p: u64, n: u32, h: i64) -> Result<Self, Error> {
        validate_pn(p, n)?;
        let components = (0..=n)
            .map(|i| {
                let m_i = p.pow(i);
                let coeffs = zeta_power_int_coeffs(m_i, h);
                FinSuppSeq {
                    support: coeffs
                        .into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(j, v)| (j as i64, v))
                        .collect(),
                }
            })
            .collect();
        AbsoluteTuple::new(p, n, components)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "components": self.components.iter().enumerate().map(|(i, c)| {
                json!({
                    "i": i,
                    "coeffs": c.support.iter()
                        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                        .collect::<serde_json::Map<String, Value>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("tuple: missing \"p\"".into()))?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("tuple: missing \"n\"".into()))? as u32;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("tuple: missing \"components\"".into()))?;
        let mut components = vec![FinSuppSeq::new(); n as usize + 1];
        for c in comps {
            let i = c
                .get("i")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::BadInput("component: missing \"i\"".into()))?
                as usize;
            if i > n as usize {
                return Err(Error::BadInput(format!("component index {} exceeds n", i)));
            }
            let coeffs = c
                .get("coeffs")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::BadInput("component: missing \"coeffs\"".into()))?;
            let mut seq = FinSuppSeq::new();
            for (k, val) in coeffs {
                let idx: i64 = k
                    .parse()
                    .map_err(|_| Error::BadInput(format!("bad index {:?}", k)))?;
                let num = match val {
                    Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| Error::BadInput(format!("bad integer {:?}", s)))?,
                    Value::Number(x) if x.is_i64() => BigInt::from(x.as_i64().unwrap()),
                    _ => return Err(Error::BadInput("coefficients must be integers".into())),
                };
                seq.add_at(idx, &num);
            }
            components[i] = seq;
        }
        AbsoluteTuple::new(p, n, components)
    }
}

/// Integer power-basis coefficients of zeta_m^h, i.e. X^{h mod m} mod Phi_m.
pub(crate) fn zeta_power_int_coeffs(m: u64, h: i64) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let e = h.rem_euclid(m as i64) as usize;
    let mut poly = vec![BigInt::zero(); (e + 1).max(deg)];
    poly[e] = BigInt::one();
    // reduce modulo the monic Phi_m
    while poly.len() > deg {
        let c = poly.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let k = poly.len() - deg;
        for (i, d) in phi.iter().take(deg).enumerate() {
            let t = &c * d;
            poly[k + i] -= t;
        }
    }
    poly.resize(deg, BigInt::zero());
    poly
}

/// One violated Kervaire-Murthy congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmViolation {
    pub l: u32,
    pub j: i64,
    pub modulus: BigInt,
    pub lhs_residue: BigInt,
    pub rhs_residue: BigInt,
}

/// Checks the triangular tie system
/// x_{n-l} = sum_{i in [0,l-1]} p^{l-1-i} (T^{0,l-1-i}_{n-l} - T^{1,l-1-i}_{n-l}) x_{n-i}
/// modulo p^l, coordinatewise on [0, phi(p^{n-l}) - 1], for l in [1, n].
pub fn km_ties_check(t: &AbsoluteTuple) -> (bool, Vec<KmViolation>) {
    let p = t.p;
    let n = t.n;
    let mut violations = Vec::new();
    for l in 1..=n {
        let level = n - l;
        let mut rhs = FinSuppSeq::new();
        for i in 0..l {
            let s = l - 1 - i;
            let x_ni = &t.components[(n - i) as usize];
            let diff = t_operator(0, s, level, p, x_ni).sub(&t_operator(1, s, level, p, x_ni));
            rhs = rhs.add(&diff.scale(&BigInt::from(p).pow(s)));
        }
        let modulus = BigInt::from(p).pow(l);
        let lhs = &t.components[level as usize];
        for j in 0..euler_phi(p.pow(level)) as i64 {
            let a = lhs.get(j);
            let b = rhs.get(j);
            if !(&a - &b).is_multiple_of(&modulus) {
                violations.push(KmViolation {
                    l,
                    j,
                    modulus: modulus.clone(),
                    lhs_residue: a.mod_floor(&modulus),
                    rhs_residue: b.mod_floor(&modulus),
                });
            }
        }
    }
    (violations.is_empty(), violations)
}

/// The same system rendered coordinatewise as a triangular `TieSystem` with
/// coordinates x_{i,j}: for l in [1,n], j in [0, phi(p^{n-l}) - 1],
///
///   x_{n-l,j} =_{p^l} sum_{i in [0,l-1]} p^{l-1-i} sum_{k in [1,p-1]}
///     ( x_{n-i, j - p^{n-l} + k p^{n-1-i}}
///     - (1 - delta_{l,n}) x_{n-i, [j]_{p^{n-l-1}} - p^{n-l-1} + k p^{n-1-i}} ).
pub fn km_tie_system(p: u64, n: u32) -> Result<TieSystem, Error> {
    validate_pn(p, n)?;
    let name = |i: u32, j: i64| format!("x_{{{},{}}}", i, j);
    // declared order: level n first, then descending
    let mut order = Vec::new();
    for i in (0..=n).rev() {
        for j in 0..euler_phi(p.pow(i)) as i64 {
            order.push(name(i, j));
        }
    }
    let mut congruences = Vec::new();
    for l in 1..=n {
        let level = n - l;
        for j in 0..euler_phi(p.pow(level)) as i64 {
            let mut terms: BTreeMap<(u32, i64), BigInt> = BTreeMap::new();
            for i in 0..l {
                let weight = BigInt::from(p).pow(l - 1 - i);
                let src = n - i;
                for k in 1..p as i64 {
                    let idx1 = j - (p.pow(n - l) as i64) + k * p.pow(n - 1 - i) as i64;
                    *terms.entry((src, idx1)).or_default() += &weight;
                    if l != n {
                        let block = p.pow(n - l - 1) as i64;
                        let idx2 = j.rem_euclid(block) - block + k * p.pow(n - 1 - i) as i64;
                        *terms.entry((src, idx2)).or_default() -= &weight;
                    }
                }
            }
            let form = terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((i, idx), c)| (name(i, idx), TieCoeff::Int(c)))
                .collect();
            congruences.push(Congruence {
                target: name(level, j),
                modulus: TieModulus::Integer(BigInt::from(p).pow(l)),
                form,
            });
        }
    }
    Ok(TieSystem { order, congruences })
}

/// Preimage of a product tuple under the absolute Wedderburn isomorphism of
/// Q C_{p^n}: the coefficient of c^i is
/// p^{-n} sum_{k in [0,n]} p^k sum_{j in [1,p^{n-k}]} (y_{k,i-jp^k} - y_{k+1,i-jp^k}),
/// where y_{n+1} = 0 and exponents are taken modulo p^n. Components may be
/// non-reduced, i.e. supported anywhere on Z.
pub fn inversion_formula_pn(p: u64, n: u32, components: &[FinSuppSeq]) -> GroupRingElement {
    let m = p.pow(n);
    let mut acc = vec![BigInt::zero(); m as usize];
    for k in 0..=n {
        let pk = BigInt::from(p).pow(k);
        let step = p.pow(k) as i64;
        for j in 1..=p.pow(n - k) as i64 {
            let shift = j * step;
            // + p^k y_{k, i - j p^k}
            for (&idx, v) in components[k as usize].support.iter() {
                let e = (idx + shift).rem_euclid(m as i64) as usize;
                acc[e] += &pk * v;
            }
            // - p^k y_{k+1, i - j p^k}
            if k < n {
                for (&idx, v) in components[k as usize + 1].support.iter() {
                    let e = (idx + shift).rem_euclid(m as i64) as usize;
                    acc[e] -= &pk * v;
                }
            }
        }
    }
    let denom = BigInt::from(p).pow(n);
    GroupRingElement::new(
        m,
        acc.into_iter().map(|v| Rat::new(v, denom.clone())).collect(),
    )
}

/// Membership oracle: the tuple lies in the image of Z C_{p^n} exactly when
/// the preimage has integer coefficients; the preimage is returned.
pub fn absolute_image_membership_oracle(t: &AbsoluteTuple) -> (bool, GroupRingElement) {
    let preimage = inversion_formula_pn(t.p, t.n, &t.components);
    (preimage.is_integral(), preimage)
}

/// Index of the absolute embedding: p^{(p^n - 1)/(p - 1)}.
pub fn absolute_index(p: u64, n: u32) -> Result<BigInt, Error> {
    validate_pn(p, n)?;
    let e = (p.pow(n) - 1) / (p - 1);
    Ok(BigInt::from(p).pow(e as u32))
}

/// Index for general m: prod_{p|m} p^{((m[p]-1)/(p-1)) * m[p']}.
pub fn absolute_index_m(m: u64) -> BigInt {
    assert!(m >= 1);
    let mut out = BigInt::one();
    for (p, e) in factorize(m) {
        let mp = p.pow(e);
        let exp = (mp - 1) / (p - 1) * (m / mp);
        out *= BigInt::from(p).pow(exp as u32);
    }
    out
}

/// Closed-form elementary divisors of omega_{Z,p^n} over Z: p^i with
/// multiplicity phi(p^{n-i}), ascending.
pub fn absolute_eldiv_z(p: u64, n: u32) -> Result<Vec<BigInt>, Error> {
    validate_pn(p, n)?;
    let mut out = Vec::new();
    for i in 0..=n {
        let mult = euler_phi(p.pow(n - i));
        let val = BigInt::from(p).pow(i);
        for _ in 0..mult {
            out.push(val.clone());
        }
    }
    Ok(out)
}

/// The p^n x p^n integer matrix of the images of c^h over the concatenated
/// Z-bases of prod_i Z[zeta_{p^i}]; its Smith normal form is the oracle for
/// `absolute_eldiv_z`.
pub fn absolute_generator_matrix(p: u64, n: u32) -> Result<ExactMatrix<BigInt>, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    let rows = (0..m as i64)
        .map(|h| {
            let mut row = Vec::with_capacity(m as usize);
            for i in 0..=n {
                row.extend(zeta_power_int_coeffs(p.pow(i), h));
            }
            row
        })
        .collect();
    Ok(ExactMatrix::from_rows(rows))
}

/// |discriminant| of Z[zeta_m] over Z:
/// prod_{p|m} p^{(m[p]/p)(v_p(m)(p-1) - 1) phi(m[p'])}.
pub fn discriminant_magnitude(m: u64) -> BigInt {
    assert!(m >= 1);
    let mut out = BigInt::one();
    for (p, e) in factorize(m) {
        let mp = p.pow(e);
        let exp = (mp / p) as i64 * ((e as i64) * (p as i64 - 1) - 1) * euler_phi(m / mp) as i64;
        out *= BigInt::from(p).pow(u32::try_from(exp).expect("nonnegative exponent"));
    }
    out
}

// ---------------------------------------------------------------------------
// composite m
// ---------------------------------------------------------------------------

/// Least nonnegative representative of the inverse of k[p'] modulo k[p].
pub fn s_value(k: u64, p: u64) -> u64 {
    let kp = {
        let mut kp = 1u64;
        let mut k = k;
        while k % p == 0 {
            kp *= p;
            k /= p;
        }
        kp
    };
    if kp == 1 {
        return 0;
    }
    let kp_prime = k / kp;
    // brute-force inverse; moduli are desk scale
    (0..kp)
        .find(|s| (s * (kp_prime % kp)) % kp == 1 % kp)
        .expect("k[p'] is a unit modulo k[p]")
}

/// A tuple in prod_{d|m} Z[zeta_d] with each component written in the tensor
/// digit convention: a_{d,(j_p)_{p|d}} is the coefficient of
/// zeta_d^{sum_p s_{d,p} j_p d[p']}, digit j_p in [0, phi(d[p]) - 1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeTuple {
    m: u64,
    /// coefficients per divisor, keyed by the digit tuple over the primes of
    /// d in ascending order; absent keys are zero
    coeffs: BTreeMap<u64, BTreeMap<Vec<u64>, BigInt>>,
}

impl CompositeTuple {
    pub fn new(m: u64, coeffs: BTreeMap<u64, BTreeMap<Vec<u64>, BigInt>>) -> Result<Self, Error> {
        assert!(m >= 1);
        for (&d, entry) in &coeffs {
            if d == 0 || m % d != 0 {
                return Err(Error::BadInput(format!("{} does not divide {}", d, m)));
            }
            let primes: Vec<(u64, u32)> = factorize(d);
            for digits in entry.keys() {
                if digits.len() != primes.len() {
                    return Err(Error::BadInput(format!(
                        "divisor {} needs {} digits, got {:?}",
                        d,
                        primes.len(),
                        digits
                    )));
                }
                for (&(p, e), &j) in primes.iter().zip(digits.iter()) {
                    if j >= euler_phi(p.pow(e)) {
                        return Err(Error::BadInput(format!(
                            "digit {} out of range for prime {} in divisor {}",
                            j, p, d
                        )));
                    }
                }
            }
        }
        Ok(CompositeTuple { m, coeffs })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn coeff(&self, d: u64, digits: &[u64]) -> BigInt {
        self.coeffs
            .get(&d)
            .and_then(|e| e.get(digits))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// The image of c_m^h: component d represents zeta_d^h, whose tensor
    /// digit coefficients are the products of the per-prime power-basis
    /// coefficient vectors of zeta_{d[p]}^h.
    pub fn generator_image(m: u64, h: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        for d in divisors(m) {
            let primes = factorize(d);
            let vectors: Vec<Vec<BigInt>> = primes
                .iter()
                .map(|&(p, e)| zeta_power_int_coeffs(p.pow(e), h))
                .collect();
            let mut entry = BTreeMap::new();
            let mut digits = vec![0u64; primes.len()];
            loop {
                let prod: BigInt = digits
                    .iter()
                    .zip(&vectors)
                    .map(|(&j, v)| v[j as usize].clone())
                    .product();
                if !prod.is_zero() {
                    entry.insert(digits.clone(), prod);
                }
                // advance the mixed-radix counter
                let mut pos = 0;
                loop {
                    if pos == digits.len() {
                        break;
                    }
                    digits[pos] += 1;
                    if digits[pos] < vectors[pos].len() as u64 {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
            coeffs.insert(d, entry);
        }
        CompositeTuple { m, coeffs }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "components": self.coeffs.iter().map(|(d, entry)| {
                json!({
                    "d": d,
                    "coeffs": entry.iter().map(|(digits, v)| {
                        let key = digits.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                        (key, Value::String(v.to_string()))
                    }).collect::<serde_json::Map<String, Value>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("composite tuple: missing \"m\"".into()))?;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("composite tuple: missing \"components\"".into()))?;
        let mut coeffs = BTreeMap::new();
        for c in comps {
            let d = c
                .get("d")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::BadInput("component: missing \"d\"".into()))?;
            let entry_json = c
                .get("coeffs")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::BadInput("component: missing \"coeffs\"".into()))?;
            let mut entry = BTreeMap::new();
            for (key, val) in entry_json {
                let digits: Vec<u64> = if key.trim().is_empty() {
                    vec![]
                } else {
                    key.split(',')
                        .map(|s| {
                            s.trim()
                                .parse()
                                .map_err(|_| Error::BadInput(format!("bad digit key {:?}", key)))
                        })
                        .collect::<Result<_, _>>()?
                };
                let num = match val {
                    Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| Error::BadInput(format!("bad integer {:?}", s)))?,
                    Value::Number(x) if x.is_i64() => BigInt::from(x.as_i64().unwrap()),
                    _ => return Err(Error::BadInput("coefficients must be integers".into())),
                };
                if !num.is_zero() {
                    entry.insert(digits, num);
                }
            }
            coeffs.insert(d, entry);
        }
        CompositeTuple::new(m, coeffs)
    }
}

/// One delegated prime-power check of the composite decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeCheck {
    pub p: u64,
    pub f: u64,
    /// fixed digits (q, j_q) over the primes q of f, ascending
    pub digits: Vec<(u64, u64)>,
    pub passed: bool,
}

/// Composite membership: for each p | m, each f | m[p'] and each digit tuple
/// over the primes of f, the extracted slice over e | m[p] must lie in the
/// image of Z C_{m[p]}; each slice is delegated to `km_ties_check`.
pub fn composite_membership(t: &CompositeTuple) -> Result<(bool, Vec<CompositeCheck>), Error> {
    let m = t.m;
    let mut checks = Vec::new();
    for (p, np) in factorize(m) {
        let mp = p.pow(np);
        let m_p_prime = m / mp;
        for f in divisors(m_p_prime) {
            let f_primes: Vec<(u64, u32)> = factorize(f);
            let radices: Vec<u64> = f_primes.iter().map(|&(q, e)| euler_phi(q.pow(e))).collect();
            let mut fixed = vec![0u64; f_primes.len()];
            loop {
                // build the AbsoluteTuple over e = p^i | m[p]
                let mut components = Vec::with_capacity(np as usize + 1);
                for i in 0..=np {
                    let e = p.pow(i);
                    let d = e * f;
                    // digit tuple for d: insert j_p at p's position among primes of d
                    let d_primes: Vec<u64> = factorize(d).into_iter().map(|(q, _)| q).collect();
                    let mut seq = FinSuppSeq::new();
                    for jp in 0..euler_phi(e) {
                        let mut digits = Vec::with_capacity(d_primes.len());
                        for &q in &d_primes {
                            if q == p {
                                digits.push(jp);
                            } else {
                                let pos = f_primes.iter().position(|&(fq, _)| fq == q).unwrap();
                                digits.push(fixed[pos]);
                            }
                        }
                        seq.add_at(jp as i64, &t.coeff(d, &digits));
                    }
                    components.push(seq);
                }
                let slice = AbsoluteTuple::new(p, np, components)?;
                let (passed, _) = km_ties_check(&slice);
                checks.push(CompositeCheck {
                    p,
                    f,
                    digits: f_primes.iter().map(|&(q, _)| q).zip(fixed.iter().copied()).collect(),
                    passed,
                });
                // advance mixed-radix counter over the fixed digits
                let mut pos = 0;
                loop {
                    if pos == fixed.len() {
                        break;
                    }
                    fixed[pos] += 1;
                    if fixed[pos] < radices[pos] {
                        break;
                    }
                    fixed[pos] = 0;
                    pos += 1;
                }
                if pos == fixed.len() {
                    break;
                }
            }
        }
    }
    Ok((checks.iter().all(|c| c.passed), checks))
}

/// The inversion formula for Q C_m: given representatives
/// a_d(c_m) = sum_i a_{d,i} c^i of the components a_d(zeta_d), the preimage is
///
///   (1/m) sum_l c^l [ sum_{d|m} d sum_{k in Z/(m/d')} a_{d, l - k d'}
///       (prod_{p|d, p not| k} (-1/p)) (prod_{p|d, p|k} (1 - 1/p)) ],
///
/// where v_p(d') = max(v_p(d) - 1, 0).
pub fn inversion_formula_m(m: u64, reps: &BTreeMap<u64, Vec<Rat>>) -> Result<GroupRingElement, Error> {
    assert!(m >= 1);
    for (&d, rep) in reps {
        if d == 0 || m % d != 0 {
            return Err(Error::BadInput(format!("{} does not divide {}", d, m)));
        }
        if rep.len() as u64 != m {
            return Err(Error::BadInput(format!(
                "representative for divisor {} must have {} coefficients",
                d, m
            )));
        }
    }
    let mut coeffs = vec![Rat::zero(); m as usize];
    for (&d, rep) in reps {
        let d_primes: Vec<u64> = factorize(d).into_iter().map(|(q, _)| q).collect();
        // d' with v_p(d') = max(v_p(d)-1, 0)
        let mut d_prime = d;
        for &q in &d_primes {
            d_prime /= q;
        }
        let range = m / d_prime;
        for l in 0..m as i64 {
            let mut total = Rat::zero();
            for k in 0..range {
                let idx = (l - (k * d_prime) as i64).rem_euclid(m as i64) as usize;
                let a = &rep[idx];
                if a.is_zero() {
                    continue;
                }
                let mut factor = Rat::from_integer(BigInt::from(d));
                for &q in &d_primes {
                    if k % q == 0 {
                        factor *= Rat::new(BigInt::from(q as i64 - 1), BigInt::from(q));
                    } else {
                        factor *= Rat::new(BigInt::from(-1), BigInt::from(q));
                    }
                }
                total += a * factor;
            }
            coeffs[l as usize] += total / Rat::from_integer(BigInt::from(m));
        }
    }
    Ok(GroupRingElement::new(m, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::smith_divisors_z;
    use crate::wedderburn::wedderburn_apply;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_seq(rng: &mut StdRng, lo: i64, hi: i64) -> FinSuppSeq {
        let count = rng.gen_range(0..6);
        FinSuppSeq::from_pairs((0..count).map(|_| (rng.gen_range(lo..hi), rng.gen_range(-9..=9))))
    }

    #[test]
    fn t_operator_identity_case() {
        // T^{0,0}_i restricted to sequences supported on [0, p^i - 1]
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let x = rand_seq(&mut rng, 0, 9);
            assert_eq!(t_operator(0, 0, 2, 3, &x), x);
        }
        // i < m gives zero
        let x = FinSuppSeq::from_slice(&[1, 2, 3]);
        assert!(t_operator(2, 0, 1, 3, &x).is_zero());
    }

    #[test]
    fn t_operator_composition_laws() {
        let mut rng = StdRng::seed_from_u64(5);
        for p in [2u64, 3] {
            for _ in 0..25 {
                let x = rand_seq(&mut rng, -30, 60);
                // (i): T^{a,s}_b T^{c,t}_d = p^{d-b-s} T^{a,d-b+t}_b
                //      under b-a <= d-c <= b+s <= d
                for a in 0..=2u32 {
                    for b in a..=3 {
                        for s in 0..=2u32 {
                            for d in (b + s).max(1)..=4 {
                                for tt in 0..=1u32 {
                                    let c_lo = d.saturating_sub(b + s);
                                    let c_hi = d - (b - a);
                                    for c in c_lo..=c_hi.min(d) {
                                        if !(b - a <= d - c && d - c <= b + s && b + s <= d) {
                                            continue;
                                        }
                                        let lhs = t_operator(a, s, b, p, &t_operator(c, tt, d, p, &x));
                                        let scale = BigInt::from(p).pow(d - b - s);
                                        let rhs =
                                            t_operator(a, d - b + tt, b, p, &x).scale(&scale);
                                        assert_eq!(lhs, rhs, "p={} a={} s={} b={} c={} t={} d={}", p, a, s, b, c, tt, d);
                                    }
                                }
                            }
                        }
                    }
                }
                // (ii): T^{a,s}_b T^{0,0}_d = T^{a,s}_b for b + s <= d
                for a in 0..=1u32 {
                    for b in a..=2 {
                        for s in 0..=2u32 {
                            for d in (b + s)..=4 {
                                let lhs = t_operator(a, s, b, p, &t_operator(0, 0, d, p, &x));
                                let rhs = t_operator(a, s, b, p, &x);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn t_operator_telescoping() {
        // sum_{i in [0,l-1]} p^{l-1-i} T^{a,l-1-i}_{m-l} (T^{0,0}_{m-i} - T^{1,0}_{m-i})
        //   = T^{a,0}_{m-l} - p^l T^{a,l}_{m-l}
        let mut rng = StdRng::seed_from_u64(9);
        for p in [2u64, 3] {
            for _ in 0..20 {
                let x = rand_seq(&mut rng, -20, 40);
                for m in 1..=4u32 {
                    for l in 1..=m {
                        for a in 0..=(m - l) {
                            let mut lhs = FinSuppSeq::new();
                            for i in 0..l {
                                let inner = t_operator(0, 0, m - i, p, &x)
                                    .sub(&t_operator(1, 0, m - i, p, &x));
                                let outer = t_operator(a, l - 1 - i, m - l, p, &inner);
                                lhs = lhs.add(&outer.scale(&BigInt::from(p).pow(l - 1 - i)));
                            }
                            let rhs = t_operator(a, 0, m - l, p, &x).sub(
                                &t_operator(a, l, m - l, p, &x).scale(&BigInt::from(p).pow(l)),
                            );
                            assert_eq!(lhs, rhs, "p={} m={} l={} a={}", p, m, l, a);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn t_operator_difference_vanishes_outside_window() {
        let mut rng = StdRng::seed_from_u64(13);
        for p in [2u64, 3] {
            for _ in 0..15 {
                let x = rand_seq(&mut rng, -20, 40);
                for l in 1..=3u32 {
                    for s in 0..=2u32 {
                        let diff = t_operator(0, s, l, p, &x).sub(&t_operator(1, s, l, p, &x));
                        let bound = euler_phi(p.pow(l)) as i64;
                        for (&j, v) in diff.support.iter() {
                            assert!(
                                (0..bound).contains(&j) || v.is_zero(),
                                "p={} l={} s={} leaked at {}",
                                p,
                                l,
                                s,
                                j
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_zeta_identity() {
        // x * zeta_{p^l} = ((T^{0,0}_l - T^{1,0}_l) x) * zeta_{p^l}
        let mut rng = StdRng::seed_from_u64(17);
        for p in [2u64, 3] {
            for l in 1..=3u32 {
                for _ in 0..15 {
                    let x = rand_seq(&mut rng, -15, 30);
                    let y = t_operator(0, 0, l, p, &x).sub(&t_operator(1, 0, l, p, &x));
                    assert_eq!(x.star_zeta(p.pow(l)), y.star_zeta(p.pow(l)));
                }
            }
        }
    }

    #[test]
    fn km_single_tie_for_zc3() {
        // x_{0,0} = x_{1,0} + x_{1,1} mod 3
        let sys = km_tie_system(3, 1).unwrap();
        assert_eq!(sys.congruences.len(), 1);
        let c = &sys.congruences[0];
        assert_eq!(c.target, "x_{0,0}");
        assert_eq!(c.modulus, TieModulus::Integer(BigInt::from(3)));
        assert_eq!(
            c.form,
            vec![
                ("x_{1,0}".to_string(), TieCoeff::Int(BigInt::one())),
                ("x_{1,1}".to_string(), TieCoeff::Int(BigInt::one())),
            ]
        );
        assert!(sys.is_triangular());
    }

    fn tie_map(c: &Congruence) -> BTreeMap<String, i64> {
        c.form
            .iter()
            .map(|(name, coeff)| {
                let TieCoeff::Int(k) = coeff else { panic!() };
                (name.clone(), i64::try_from(k).unwrap())
            })
            .collect()
    }

    #[test]
    fn km_system_for_zc9_matches_worked_example() {
        let sys = km_tie_system(3, 2).unwrap();
        assert_eq!(sys.congruences.len(), 3);
        // x_{1,0} =_3 x_{2,0} + x_{2,3} - x_{2,2} - x_{2,5}
        let c = &sys.congruences[0];
        assert_eq!(c.target, "x_{1,0}");
        assert_eq!(c.modulus, TieModulus::Integer(BigInt::from(3)));
        let expect: BTreeMap<String, i64> = [
            ("x_{2,0}", 1),
            ("x_{2,3}", 1),
            ("x_{2,2}", -1),
            ("x_{2,5}", -1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(tie_map(c), expect);
        // x_{1,1} =_3 x_{2,1} + x_{2,4} - x_{2,2} - x_{2,5}
        let c = &sys.congruences[1];
        assert_eq!(c.target, "x_{1,1}");
        let expect: BTreeMap<String, i64> = [
            ("x_{2,1}", 1),
            ("x_{2,4}", 1),
            ("x_{2,2}", -1),
            ("x_{2,5}", -1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(tie_map(c), expect);
        // x_{0,0} =_9 3(x_{2,2} + x_{2,5}) + (x_{1,0} + x_{1,1})
        let c = &sys.congruences[2];
        assert_eq!(c.target, "x_{0,0}");
        assert_eq!(c.modulus, TieModulus::Integer(BigInt::from(9)));
        let expect: BTreeMap<String, i64> = [
            ("x_{2,2}", 3),
            ("x_{2,5}", 3),
            ("x_{1,0}", 1),
            ("x_{1,1}", 1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(tie_map(c), expect);
        assert!(sys.is_triangular());
    }

    #[test]
    fn km_system_for_zc27_matches_worked_example() {
        let sys = km_tie_system(3, 3).unwrap();
        assert_eq!(sys.congruences.len(), 9);
        // first line: x_{2,0} =_3 x_{3,0} + x_{3,9} - x_{3,6} - x_{3,15}
        let expect: BTreeMap<String, i64> = [
            ("x_{3,0}", 1),
            ("x_{3,9}", 1),
            ("x_{3,6}", -1),
            ("x_{3,15}", -1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(sys.congruences[0].target, "x_{2,0}");
        assert_eq!(tie_map(&sys.congruences[0]), expect);
        // seventh line: x_{1,0} =_9 3(x_{3,6}+x_{3,15}-x_{3,8}-x_{3,17})
        //                         + (x_{2,0}+x_{2,3}-x_{2,2}-x_{2,5})
        let c = &sys.congruences[6];
        assert_eq!(c.target, "x_{1,0}");
        assert_eq!(c.modulus, TieModulus::Integer(BigInt::from(9)));
        let expect: BTreeMap<String, i64> = [
            ("x_{3,6}", 3),
            ("x_{3,15}", 3),
            ("x_{3,8}", -3),
            ("x_{3,17}", -3),
            ("x_{2,0}", 1),
            ("x_{2,3}", 1),
            ("x_{2,2}", -1),
            ("x_{2,5}", -1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(tie_map(c), expect);
        // last line: x_{0,0} =_27 9(x_{3,8}+x_{3,17}) + 3(x_{2,2}+x_{2,5})
        //                         + (x_{1,0}+x_{1,1})
        let c = &sys.congruences[8];
        assert_eq!(c.target, "x_{0,0}");
        assert_eq!(c.modulus, TieModulus::Integer(BigInt::from(27)));
        let expect: BTreeMap<String, i64> = [
            ("x_{3,8}", 9),
            ("x_{3,17}", 9),
            ("x_{2,2}", 3),
            ("x_{2,5}", 3),
            ("x_{1,0}", 1),
            ("x_{1,1}", 1),
        ]
        .iter()
        .map(|&(s, v)| (s.to_string(), v))
        .collect();
        assert_eq!(tie_map(c), expect);
    }

    #[test]
    fn generator_images_pass_km_ties() {
        for (p, n) in [(2u64, 3u32), (3, 2), (3, 3), (5, 1)] {
            for h in 0..p.pow(n) as i64 {
                let t = AbsoluteTuple::generator_image(p, n, h).unwrap();
                let (ok, violations) = km_ties_check(&t);
                assert!(ok, "c^{} at ({},{}): {:?}", h, p, n, violations);
                // and the oracle agrees with preimage c^h
                let (member, preimage) = absolute_image_membership_oracle(&t);
                assert!(member);
                assert_eq!(preimage, GroupRingElement::generator_power(p.pow(n), h));
            }
        }
    }

    #[test]
    fn ties_and_oracle_agree_on_random_tuples() {
        let mut rng = StdRng::seed_from_u64(21);
        for (p, n) in [(2u64, 2u32), (3, 2)] {
            for _ in 0..120 {
                let components = (0..=n)
                    .map(|i| rand_seq(&mut rng, 0, euler_phi(p.pow(i)).max(1) as i64))
                    .collect();
                let t = AbsoluteTuple::new(p, n, components).unwrap();
                let (by_ties, _) = km_ties_check(&t);
                let (by_oracle, _) = absolute_image_membership_oracle(&t);
                assert_eq!(by_ties, by_oracle, "{:?}", t);
            }
        }
    }

    #[test]
    fn scaled_basis_tuple_is_member() {
        // (1, 0, ..., 0) scaled by p^n becomes integral under the inversion
        let p = 3u64;
        let n = 2u32;
        let mut components = vec![FinSuppSeq::new(); 3];
        components[0] = FinSuppSeq::from_slice(&[1]);
        let t = AbsoluteTuple::new(p, n, components.clone()).unwrap();
        let (member, _) = absolute_image_membership_oracle(&t);
        assert!(!member);
        components[0] = FinSuppSeq::from_slice(&[9]);
        let t = AbsoluteTuple::new(p, n, components).unwrap();
        let (member, _) = absolute_image_membership_oracle(&t);
        assert!(member);
        let (by_ties, _) = km_ties_check(&t);
        assert!(by_ties);
    }

    #[test]
    fn index_and_eldivs() {
        assert_eq!(absolute_index(3, 3).unwrap(), BigInt::from(3).pow(13));
        assert_eq!(absolute_index(2, 1).unwrap(), BigInt::from(2));
        assert_eq!(absolute_index_m(1), BigInt::one());
        assert_eq!(
            absolute_index_m(12),
            BigInt::from(2).pow(9) * BigInt::from(3).pow(4)
        );
        // (3,1): {1,1,3}
        assert_eq!(
            absolute_eldiv_z(3, 1).unwrap(),
            vec![BigInt::one(), BigInt::one(), BigInt::from(3)]
        );
        // (2,2): {1,1,2,4}
        assert_eq!(
            absolute_eldiv_z(2, 2).unwrap(),
            vec![BigInt::one(), BigInt::one(), BigInt::from(2), BigInt::from(4)]
        );
        // SNF oracle and product = index
        for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let closed = absolute_eldiv_z(p, n).unwrap();
            let snf = smith_divisors_z(&absolute_generator_matrix(p, n).unwrap()).unwrap();
            assert_eq!(closed, snf, "p={} n={}", p, n);
            let prod: BigInt = closed.iter().product();
            assert_eq!(prod, absolute_index(p, n).unwrap());
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant_magnitude(1), BigInt::one());
        assert_eq!(discriminant_magnitude(9), BigInt::from(3).pow(9));
        // index^2 * prod_{d|m} Delta_d = m^m
        for m in 1..=12u64 {
            let idx = absolute_index_m(m);
            let mut prod = BigInt::one();
            for d in divisors(m) {
                prod *= discriminant_magnitude(d);
            }
            assert_eq!(&idx * &idx * prod, BigInt::from(m).pow(m as u32), "m = {}", m);
        }
    }

    #[test]
    fn s_values_of_worked_example() {
        assert_eq!(s_value(6, 2), 1);
        assert_eq!(s_value(6, 3), 2);
        assert_eq!(s_value(12, 2), 3);
        assert_eq!(s_value(12, 3), 1);
    }

    #[test]
    fn composite_membership_structure_at_12() {
        let t = CompositeTuple::generator_image(12, 1);
        let (ok, checks) = composite_membership(&t).unwrap();
        assert!(ok);
        // three ZC_4 checks and four ZC_3 checks, in the worked layout
        let summary: Vec<(u64, u64, Vec<(u64, u64)>)> = checks
            .iter()
            .map(|c| (c.p, c.f, c.digits.clone()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (2, 1, vec![]),
                (2, 3, vec![(3, 0)]),
                (2, 3, vec![(3, 1)]),
                (3, 1, vec![]),
                (3, 2, vec![(2, 0)]),
                (3, 4, vec![(2, 0)]),
                (3, 4, vec![(2, 1)]),
            ]
        );
        // all generator powers pass
        for h in 0..12 {
            let t = CompositeTuple::generator_image(12, h);
            let (ok, _) = composite_membership(&t).unwrap();
            assert!(ok, "c^{}", h);
        }
    }

    #[test]
    fn composite_detects_non_members() {
        // perturb one coefficient of the image of c_12
        let t = CompositeTuple::generator_image(12, 1);
        let mut coeffs = t.coeffs.clone();
        coeffs
            .entry(12)
            .or_default()
            .insert(vec![0, 0], BigInt::from(5));
        let bad = CompositeTuple::new(12, coeffs).unwrap();
        let (ok, _) = composite_membership(&bad).unwrap();
        assert!(!ok);
        // but scaling everything by 12 gives a member
        let mut coeffs = BTreeMap::new();
        for (d, entry) in &bad.coeffs {
            let scaled: BTreeMap<Vec<u64>, BigInt> = entry
                .iter()
                .map(|(k, v)| (k.clone(), v * BigInt::from(12)))
                .collect();
            coeffs.insert(*d, scaled);
        }
        let scaled = CompositeTuple::new(12, coeffs).unwrap();
        let (ok, _) = composite_membership(&scaled).unwrap();
        assert!(ok);
    }

    #[test]
    fn inversion_formula_m_round_trips() {
        let mut rng = StdRng::seed_from_u64(29);
        for m in [1u64, 6, 12] {
            for _ in 0..25 {
                let x = GroupRingElement::new(
                    m,
                    (0..m)
                        .map(|_| crate::rational::rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect(),
                );
                // representatives: the coefficient vector of x works for every divisor
                let reps: BTreeMap<u64, Vec<Rat>> = divisors(m)
                    .into_iter()
                    .map(|d| (d, x.coeffs().to_vec()))
                    .collect();
                let back = inversion_formula_m(m, &reps).unwrap();
                assert_eq!(back, x, "m = {}", m);
            }
        }
    }

    #[test]
    fn inversion_formula_m_agrees_with_p_power_formula() {
        let mut rng = StdRng::seed_from_u64(33);
        for (p, n) in [(3u64, 1u32), (2, 2)] {
            let m = p.pow(n);
            for _ in 0..25 {
                // integer representatives per level
                let comps: Vec<FinSuppSeq> = (0..=n)
                    .map(|_| rand_seq(&mut rng, 0, m as i64))
                    .collect();
                let by_pn = inversion_formula_pn(p, n, &comps);
                let reps: BTreeMap<u64, Vec<Rat>> = (0..=n)
                    .map(|i| {
                        let mut vec = vec![Rat::zero(); m as usize];
                        for (&idx, v) in comps[i as usize].support() {
                            vec[idx as usize] += Rat::from_integer(v.clone());
                        }
                        (p.pow(i), vec)
                    })
                    .collect();
                let by_m = inversion_formula_m(m, &reps).unwrap();
                assert_eq!(by_pn, by_m, "p={} n={}", p, n);
            }
        }
    }

    #[test]
    fn absolute_tuple_json_round_trip() {
        let t = AbsoluteTuple::generator_image(3, 2, 5).unwrap();
        let v = t.to_json();
        assert_eq!(AbsoluteTuple::from_json(&v).unwrap(), t);
        let c = CompositeTuple::generator_image(12, 7);
        let v = c.to_json();
        assert_eq!(CompositeTuple::from_json(&v).unwrap(), c);
    }

    #[test]
    fn components_embed_consistently() {
        // each component of a generator image evaluates to zeta_{p^i}^h
        let t = AbsoluteTuple::generator_image(3, 2, 4).unwrap();
        for i in 0..=2u32 {
            let m_i = 3u64.pow(i);
            assert_eq!(
                t.component(i as usize).star_zeta(m_i),
                CycElement::zeta_pow(m_i, 4)
            );
        }
        // consistency with the one-prime Wedderburn picture: component n of
        // c^h equals coordinate h of omega applied to... the generator image
        // of c at level n is zeta^h itself
        let w = wedderburn_apply(&GroupRingElement::generator_power(9, 1));
        assert_eq!(t.component(2).star_zeta(9), w[4].clone());
    }
}
