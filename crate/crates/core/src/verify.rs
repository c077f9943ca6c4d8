//! Seeded property suites shared by the test batteries and the CLI
//! `verify` subcommand. Every suite is deterministic for a fixed seed.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::absolute::{t_operator, FinSuppSeq};
use crate::cyclotomic::CycElement;
use crate::gauss::{gauss_binomial, GaussPoly};
use crate::linalg::ExactMatrix;
use crate::rational::{Rat, rat};
use crate::vandermonde::{verify_identities, PointTuple};
use crate::wedderburn::{v_matrix, wedderburn_diagonalize};

/// Outcome of one property suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub details: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.details.push(detail());
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn random_distinct_rationals(rng: &mut StdRng, size: usize) -> PointTuple<Rat> {
    loop {
        let values: Vec<Rat> = (0..size)
            .map(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=4)))
            .collect();
        if let Ok(pts) = PointTuple::new(values) {
            return pts;
        }
    }
}

/// Vandermonde identity suite: `trials` random rational tuples per size
/// m in [1, 7]; every tuple must satisfy all five identities.
pub fn suite_vandermonde(trials: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("vandermonde");
    let mut rng = StdRng::seed_from_u64(seed);
    for size in 1..=7usize {
        for trial in 0..trials {
            let pts = random_distinct_rationals(&mut rng, size);
            let r = verify_identities(&pts);
            report.record(r.all_pass(), || {
                format!("size {} trial {}: {:?} on {:?}", size, trial, r, pts.values())
            });
        }
    }
    report
}

/// q-Pascal suite: the closed-form inverse as an exact polynomial identity
/// for m <= 8, the diagonalization and Fourier inversion for m in [1, 16],
/// and the determinant sign identity for m in [1, 12].
pub fn suite_qpascal(_trials: u64, _seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("qpascal");
    // G_q G_q^{-1} = I in Z[q]
    for m in 1..=8u64 {
        let mut ok = true;
        for i in 0..m {
            for k in 0..m {
                let mut acc = GaussPoly::zero();
                for j in k..=i.min(m - 1) {
                    let d = j - k;
                    let c2 = d * d.saturating_sub(1) / 2;
                    let sign = if (j + k) % 2 == 0 { 1 } else { -1 };
                    let term = gauss_binomial(i, j as i64)
                        .mul(&gauss_binomial(j, k as i64).shift(c2))
                        .scale(&BigInt::from(sign));
                    acc = acc.add(&term);
                }
                let expect = if i == k { GaussPoly::one() } else { GaussPoly::zero() };
                if acc != expect {
                    ok = false;
                }
            }
        }
        report.record(ok, || format!("polynomial inverse identity failed at m = {}", m));
    }
    // diagonalization (with integral diagonal and last entry zeta_m)
    for m in 1..=16u64 {
        let outcome = wedderburn_diagonalize(m);
        let ok = match &outcome {
            Ok((_, _, diag)) => diag[m as usize - 1] == CycElement::zeta(m),
            Err(_) => false,
        };
        report.record(ok, || format!("diagonalization failed at m = {}: {:?}", m, outcome.err()));
    }
    // Fourier inversion V_zeta V_{zeta^{-1}} = m I
    for m in 1..=16u64 {
        let prod = v_matrix(m, 1).mul(&v_matrix(m, -1));
        let expect = ExactMatrix::identity(m as usize, CycElement::one(m))
            .scale(&CycElement::from_int(m, m as i64));
        report.record(prod == expect, || format!("Fourier inversion failed at m = {}", m));
    }
    // det(V)^2 = +- m^m with the parity-dependent sign
    for m in 1..=12u64 {
        let det = v_matrix(m, 1).determinant();
        let square = &det * &det;
        let sign = if m % 2 == 1 {
            if (m - 1) / 2 % 2 == 0 { 1 } else { -1 }
        } else if (m - 2) / 2 % 2 == 0 {
            1
        } else {
            -1
        };
        let expect = CycElement::from_rational(
            m,
            Rat::from_integer(BigInt::from(sign) * BigInt::from(m).pow(m as u32)),
        );
        report.record(square == expect, || format!("determinant sign failed at m = {}", m));
    }
    report
}

fn random_sequence(rng: &mut StdRng) -> FinSuppSeq {
    let count = rng.gen_range(0..8);
    FinSuppSeq::from_pairs((0..count).map(|_| (rng.gen_range(-30..60), rng.gen_range(-9..=9))))
}

/// T-operator suite: both composition laws and the telescoping identity on
/// `trials` random finitely supported sequences, p in {2, 3}, exponents <= 4.
pub fn suite_toperators(trials: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("toperators");
    let mut rng = StdRng::seed_from_u64(seed);
    for p in [2u64, 3] {
        for trial in 0..trials {
            let x = random_sequence(&mut rng);
            // composition law (i) on the admissible grid
            let mut ok = true;
            for a in 0..=2u32 {
                for b in a..=3 {
                    for s in 0..=2u32 {
                        for d in (b + s).max(1)..=4 {
                            for t in 0..=1u32 {
                                for c in 0..=d {
                                    if !(b - a <= d - c && d - c <= b + s && b + s <= d) {
                                        continue;
                                    }
                                    let lhs =
                                        t_operator(a, s, b, p, &t_operator(c, t, d, p, &x));
                                    let rhs = t_operator(a, d - b + t, b, p, &x)
                                        .scale(&BigInt::from(p).pow(d - b - s));
                                    if lhs != rhs {
                                        ok = false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            report.record(ok, || format!("composition law (i) failed, p = {} trial {}", p, trial));
            // composition law (ii)
            let mut ok = true;
            for a in 0..=2u32 {
                for b in a..=3 {
                    for s in 0..=2u32 {
                        for d in (b + s)..=4 {
                            if t_operator(a, s, b, p, &t_operator(0, 0, d, p, &x))
                                != t_operator(a, s, b, p, &x)
                            {
                                ok = false;
                            }
                        }
                    }
                }
            }
            report.record(ok, || format!("composition law (ii) failed, p = {} trial {}", p, trial));
            // telescoping identity
            let mut ok = true;
            for m in 1..=4u32 {
                for l in 1..=m {
                    for a in 0..=(m - l) {
                        let mut lhs = FinSuppSeq::new();
                        for i in 0..l {
                            let inner =
                                t_operator(0, 0, m - i, p, &x).sub(&t_operator(1, 0, m - i, p, &x));
                            let outer = t_operator(a, l - 1 - i, m - l, p, &inner);
                            lhs = lhs.add(&outer.scale(&BigInt::from(p).pow(l - 1 - i)));
                        }
                        let rhs = t_operator(a, 0, m - l, p, &x)
                            .sub(&t_operator(a, l, m - l, p, &x).scale(&BigInt::from(p).pow(l)));
                        if lhs != rhs {
                            ok = false;
                        }
                    }
                }
            }
            report.record(ok, || format!("telescoping failed, p = {} trial {}", p, trial));
        }
    }
    report
}

/// Runs the named suite, or all of them for `"all"`.
pub fn run_suites(which: &str, trials: u64, seed: u64) -> Result<Vec<SuiteReport>, crate::Error> {
    match which {
        "vandermonde" => Ok(vec![suite_vandermonde(trials, seed)]),
        "qpascal" => Ok(vec![suite_qpascal(trials, seed)]),
        "toperators" => Ok(vec![suite_toperators(trials, seed)]),
        "all" => Ok(vec![
            suite_vandermonde(trials, seed),
            suite_qpascal(trials, seed),
            suite_toperators(trials, seed),
        ]),
        other => Err(crate::Error::BadInput(format!("unknown suite {:?}", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_reproducible() {
        let a = suite_vandermonde(3, 42);
        let b = suite_vandermonde(3, 42);
        assert!(a.all_passed(), "{:?}", a.details);
        assert_eq!(a.passed, b.passed);
        assert_eq!(a.passed, 21); // 3 trials x 7 sizes

        let q = suite_qpascal(1, 0);
        assert!(q.all_passed(), "{:?}", q.details);

        let t = suite_toperators(2, 7);
        assert!(t.all_passed(), "{:?}", t.details);
        assert_eq!(t.passed, 12); // 2 primes x 2 trials x 3 law groups
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suites("nope", 1, 0).is_err());
        assert_eq!(run_suites("all", 1, 0).unwrap().len(), 3);
    }
}
