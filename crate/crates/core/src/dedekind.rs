//! The cyclotomic Dedekind embedding
//! Z_(p)[zeta] (x) Z_(p)[zeta] -> prod_{j in (Z/p^n)^*} Z_(p)[zeta],
//! zeta^k (x) zeta^l -> (zeta^{k+jl})_j, together with its closed-form
//! elementary divisors, tie system, triangular image basis, membership
//! oracle, Hochschild (co)homology descriptors and the radical series of the
//! local ring it is isomorphic to.

use crate::cyclotomic::{euler_phi, is_prime, p_part, CycElement, Valuation};
use crate::error::Error;
use crate::linalg::ExactMatrix;
use crate::ties::{Congruence, TieCoeff, TieModulus, TieSystem};
use crate::vandermonde::{build_l, build_v, PointTuple};

pub(crate) fn validate_pn(p: u64, n: u32) -> Result<(), Error> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{} is not prime", p)));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    Ok(())
}

/// Unit exponents j in [1, p^n - 1] with gcd(j, p) = 1, ascending.
pub fn unit_indices(p: u64, n: u32) -> Vec<u64> {
    let m = p.pow(n);
    (1..m).filter(|j| j % p != 0).collect()
}

/// The tuple tau = (1 - zeta^j) over unit exponents j, in natural order
/// (which is minimally ordered).
pub fn dedekind_tuple(p: u64, n: u32) -> Result<PointTuple<CycElement>, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    let one = CycElement::one(m);
    let values = unit_indices(p, n)
        .into_iter()
        .map(|j| &one - &CycElement::zeta_pow(m, j as i64))
        .collect();
    PointTuple::new(values)
}

/// The Vandermonde matrix V_tau of the embedding with respect to the basis
/// (1 (x) t^i) and the product coordinates; size phi(p^n) x phi(p^n).
pub fn dedekind_matrix(p: u64, n: u32) -> Result<ExactMatrix<CycElement>, Error> {
    Ok(build_v(&dedekind_tuple(p, n)?))
}

fn p_adic_digits(mut j: u64, p: u64, len: usize) -> Vec<i64> {
    let mut digits = vec![0i64; len];
    for d in digits.iter_mut() {
        *d = (j % p) as i64;
        j /= p;
    }
    debug_assert_eq!(j, 0);
    digits
}

/// Closed-form valuation of the N(j)-th elementary divisor, where
/// N(j) = #([0,j] \ (p)) and j = sum a_s p^s runs over unit exponents:
///
///   -1 + sum_s (a_s (s+1) - a_{s+1} (s+2)) p^s.
pub fn dedekind_eldiv_closed_form(p: u64, n: u32, j: u64) -> Result<Valuation, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    if j >= m || j % p == 0 {
        return Err(Error::IndexOutOfRange(format!(
            "j = {} must lie in [0, {}] and be coprime to {}",
            j,
            m - 1,
            p
        )));
    }
    let digits = p_adic_digits(j, p, n as usize + 1);
    let mut total: i64 = -1;
    let mut p_pow: i64 = 1;
    for s in 0..n as usize {
        total += (digits[s] * (s as i64 + 1) - digits[s + 1] * (s as i64 + 2)) * p_pow;
        p_pow *= p as i64;
    }
    Ok(Valuation::Finite(total))
}

/// All elementary divisor valuations, ascending (unit exponents in natural
/// order).
pub fn dedekind_eldivs(p: u64, n: u32) -> Result<Vec<Valuation>, Error> {
    unit_indices(p, n)
        .into_iter()
        .map(|j| dedekind_eldiv_closed_form(p, n, j))
        .collect()
}

/// Closed-form t-valuation of the determinant of the embedding:
/// (p-1)(p-2)/2 for n = 1 and p^{2n-2}(p-1)((p-1)n - 1)/2 for n >= 2.
/// This equals the sum of the elementary divisor valuations.
pub fn dedekind_det_valuation(p: u64, n: u32) -> Result<i64, Error> {
    validate_pn(p, n)?;
    let p = p as i64;
    let n = n as i64;
    Ok(if n == 1 {
        (p - 1) * (p - 2) / 2
    } else {
        p.pow(2 * n as u32 - 2) * (p - 1) * ((p - 1) * n - 1) / 2
    })
}

/// v_p of the discriminant of Z_(p)[zeta_{p^n}] over Z_(p)]:
/// p^{n-1}((p-1)n - 1).
pub fn discriminant_p_exponent(p: u64, n: u32) -> i64 {
    (p as i64).pow(n - 1) * ((p as i64 - 1) * n as i64 - 1)
}

/// The image of zeta^k (x) zeta^l: the tuple (zeta^{k + jl})_j over units j.
pub fn dedekind_apply(p: u64, n: u32, k: i64, l: i64) -> Result<Vec<CycElement>, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    Ok(unit_indices(p, n)
        .into_iter()
        .map(|j| CycElement::zeta_pow(m, k + j as i64 * l))
        .collect())
}

/// The boxed congruence system: for each i,
/// eta_i - sum_{j<i} eta_j L_{j,i}(tau) in T t^{phi_i}.
pub fn dedekind_ties(p: u64, n: u32) -> Result<TieSystem, Error> {
    let tuple = dedekind_tuple(p, n)?;
    let l = build_l(&tuple);
    let phis = dedekind_eldivs(p, n)?;
    let size = tuple.len();
    let name = |i: usize| format!("eta_{}", i);
    let order: Vec<String> = (0..size).map(name).collect();
    let congruences = (0..size)
        .map(|i| Congruence {
            target: name(i),
            modulus: TieModulus::TPower(phis[i].as_finite().unwrap() as u64),
            form: (0..i)
                .filter(|&j| !l.at(j, i).is_zero())
                .map(|j| (name(j), TieCoeff::Cyc(l.at(j, i).clone())))
                .collect(),
        })
        .collect();
    Ok(TieSystem { order, congruences })
}

/// Checks a tuple against the tie system; empty result means member.
pub fn dedekind_ties_check(
    p: u64,
    n: u32,
    tuple: &[CycElement],
) -> Result<Vec<crate::ties::TieViolation>, Error> {
    let ties = dedekind_ties(p, n)?;
    let assignment = tuple
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("eta_{}", i), e.clone()))
        .collect();
    ties.check_cyclotomic(&assignment, p, n)
}

/// Triangular T-linear basis of the image: row i has entries
/// prod_{k<i} (tau_j - tau_k) over the product coordinates j.
pub fn dedekind_image_basis(p: u64, n: u32) -> Result<ExactMatrix<CycElement>, Error> {
    let tuple = dedekind_tuple(p, n)?;
    let size = tuple.len();
    let tau = tuple.values();
    let one = CycElement::one(p.pow(n));
    Ok(ExactMatrix::from_fn(size, size, |i, j| {
        let mut acc = one.clone();
        for k in 0..i {
            acc = &acc * &(&tau[j] - &tau[k]);
        }
        acc
    }))
}

/// Membership in the image: solves eta = x V_tau and tests whether every
/// coordinate of the preimage is p-integral; the preimage (over the basis
/// 1 (x) t^i) is returned as a witness for members.
pub fn dedekind_membership(
    p: u64,
    n: u32,
    tuple: &[CycElement],
) -> Result<(bool, Option<Vec<CycElement>>), Error> {
    let v = dedekind_matrix(p, n)?;
    if tuple.len() != v.rows() {
        return Err(Error::BadInput(format!(
            "expected a tuple of length {}, got {}",
            v.rows(),
            tuple.len()
        )));
    }
    let x = v.solve_left(tuple)?;
    let member = x.iter().all(|c| c.is_p_integral(p));
    Ok((member, member.then_some(x)))
}

// ---------------------------------------------------------------------------
// Hochschild (co)homology and the radical of Lambda
// ---------------------------------------------------------------------------

/// Descriptor of one Hochschild (co)homology group of T over S with
/// twisted coefficients: T itself, zero, or the torsion quotient T/t^k T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HochschildDescriptor {
    FreeRankOne,
    Zero,
    TModTPower(u64),
}

impl HochschildDescriptor {
    /// Normalizes T/t^0 T to the zero descriptor.
    pub fn quotient(k: u64) -> Self {
        if k == 0 {
            HochschildDescriptor::Zero
        } else {
            HochschildDescriptor::TModTPower(k)
        }
    }
}

impl std::fmt::Display for HochschildDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HochschildDescriptor::FreeRankOne => write!(f, "T"),
            HochschildDescriptor::Zero => write!(f, "0"),
            HochschildDescriptor::TModTPower(k) => write!(f, "T/t^{}T", k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HochschildVariant {
    Homology,
    Cohomology,
}

/// phi = sum_{k != 1} v_t(theta - theta^{sigma_k}) over unit exponents k;
/// this is the valuation of the different.
pub fn hochschild_phi(p: u64, n: u32) -> Result<u64, Error> {
    validate_pn(p, n)?;
    Ok(unit_indices(p, n)
        .into_iter()
        .filter(|&u| u != 1)
        .map(|u| p_part(u as i64 - 1, p))
        .sum())
}

/// The Hochschild (co)homology descriptor of T = Z_(p)[zeta_{p^n}] over
/// S = Z_(p) with coefficients twisted by sigma_twist: zeta -> zeta^twist.
///
/// For the untwisted case (twist = 1): homology is T at degree 0, T/t^phi T
/// in odd degrees, zero in positive even degrees; cohomology swaps the odd
/// and even roles. For twist != 1 the nonzero groups are
/// T/(theta^sigma - theta) T = T/t^{v} T with v = v_t(zeta - zeta^twist),
/// in even degrees for homology and odd degrees for cohomology.
pub fn hochschild(
    p: u64,
    n: u32,
    twist: u64,
    degree: u64,
    variant: HochschildVariant,
) -> Result<HochschildDescriptor, Error> {
    validate_pn(p, n)?;
    let m = p.pow(n);
    let twist = twist % m;
    if twist == 0 || twist % p == 0 {
        return Err(Error::InvalidTwist { twist, modulus: m });
    }
    let even = degree % 2 == 0;
    if twist == 1 {
        let phi = hochschild_phi(p, n)?;
        return Ok(match (variant, degree, even) {
            (_, 0, _) => HochschildDescriptor::FreeRankOne,
            (HochschildVariant::Homology, _, false) => HochschildDescriptor::quotient(phi),
            (HochschildVariant::Homology, _, true) => HochschildDescriptor::Zero,
            (HochschildVariant::Cohomology, _, false) => HochschildDescriptor::Zero,
            (HochschildVariant::Cohomology, _, true) => HochschildDescriptor::quotient(phi),
        });
    }
    // twisted: v_t(theta^sigma - theta) = v_t(zeta - zeta^twist) = (twist-1)[p]
    let v = p_part(twist as i64 - 1, p);
    Ok(match (variant, even) {
        (HochschildVariant::Homology, true) => HochschildDescriptor::quotient(v),
        (HochschildVariant::Homology, false) => HochschildDescriptor::Zero,
        (HochschildVariant::Cohomology, true) => HochschildDescriptor::Zero,
        (HochschildVariant::Cohomology, false) => HochschildDescriptor::quotient(v),
    })
}

/// dim_{T/tT} of the i-th radical layer of Lambda = (T (x)_S T) delta:
/// min(i+1, phi(p^n)).
pub fn lambda_radical_layers(p: u64, n: u32, i: u64) -> Result<u64, Error> {
    validate_pn(p, n)?;
    Ok((i + 1).min(euler_phi(p.pow(n))))
}

/// Scales a product tuple by t^k (helper for membership experiments).
pub fn scale_tuple_by_t_power(tuple: &[CycElement], k: u64) -> Vec<CycElement> {
    if tuple.is_empty() {
        return vec![];
    }
    let t = CycElement::t_element(tuple[0].conductor()).pow(k);
    tuple.iter().map(|e| e * &t).collect()
}

/// Sum of a list of finite elementary divisor valuations.
pub fn eldiv_valuation_sum(vals: &[Valuation]) -> i64 {
    vals.iter().map(|v| v.as_finite().unwrap()).sum()
}
