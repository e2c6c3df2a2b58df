//! Generalized Pell equations `p^2 - d q^2 = N`.
//!
//! Solutions are enumerated by scanning `|q|` and testing `N + d q^2` for a
//! perfect square, which makes completeness within the bound obvious. The
//! fundamental unit comes from the continued fraction of `sqrt(d)` and is
//! only used to walk the infinite solution orbits.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::exact_sqrt;
use crate::error::{Error, Result};

/// Below this many `q` values the scan stays on the calling thread.
const PARALLEL_THRESHOLD: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
    pub rhs: BigInt,
}

impl PellSolution {
    /// Checks `p^2 - d q^2 = rhs` before building the value.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, rhs: BigInt) -> Result<Self> {
        if &p * &p - &d * &q * &q != rhs {
            return Err(Error::InvalidPairing(format!(
                "{p}^2 - {d}*{q}^2 != {rhs}"
            )));
        }
        Ok(PellSolution { p, q, d, rhs })
    }

    pub fn is_valid(&self) -> bool {
        &self.p * &self.p - &self.d * &self.q * &self.q == self.rhs
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Minimal `(u, v)`, `v >= 1`, with `u^2 - d v^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub u: BigInt,
    pub v: BigInt,
    pub d: BigInt,
}

/// Continued-fraction expansion of `sqrt(d)`; the first convergent of norm 1
/// is the fundamental unit.
pub fn fundamental_unit(d: &BigInt) -> Result<FundamentalUnit> {
    if !d.is_positive() {
        return Err(Error::InvalidInput(format!("d must be positive, got {d}")));
    }
    let a0 = d.sqrt();
    if &a0 * &a0 == *d {
        return Err(Error::SquareDiscriminant(d.to_string()));
    }
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents h/k, seeded with h_{-1}/k_{-1} = 1/0
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        if &h * &h - d * &k * &k == BigInt::one() {
            return Ok(FundamentalUnit { u: h, v: k, d: d.clone() });
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// All solutions with `|q| <= q_bound`, both signs, sorted by
/// `(|q|, |p|, sign of p, sign of q)` with non-negative signs first.
pub fn solve_bounded(d: &BigInt, n: &BigInt, q_bound: u64) -> Vec<PellSolution> {
    if let Some(e) = exact_sqrt(d) {
        if !n.is_zero() {
            let mut out: Vec<_> = solve_square(&e, n)
                .into_iter()
                .filter(|s| s.q.abs() <= BigInt::from(q_bound))
                .collect();
            sort_solutions(&mut out);
            return out;
        }
    }
    let scan = |q: u64| -> Option<(BigInt, BigInt)> {
        let q = BigInt::from(q);
        let t = n + d * &q * &q;
        exact_sqrt(&t).map(|p| (p, q))
    };
    let hits: Vec<(BigInt, BigInt)> = if q_bound < PARALLEL_THRESHOLD {
        (0..=q_bound).filter_map(scan).collect()
    } else {
        (0..=q_bound).into_par_iter().filter_map(scan).collect()
    };
    let mut out = Vec::with_capacity(hits.len() * 4);
    for (p, q) in hits {
        for sp in signs_of(&p) {
            for sq in signs_of(&q) {
                out.push(PellSolution {
                    p: sp.clone(),
                    q: sq.clone(),
                    d: d.clone(),
                    rhs: n.clone(),
                });
            }
        }
    }
    sort_solutions(&mut out);
    out
}

fn signs_of(v: &BigInt) -> Vec<BigInt> {
    if v.is_zero() {
        vec![v.clone()]
    } else {
        vec![v.clone(), -v]
    }
}

fn sort_solutions(v: &mut [PellSolution]) {
    v.sort_by(|x, y| {
        (x.q.abs(), x.p.abs(), x.p.is_negative(), x.q.is_negative()).cmp(&(
            y.q.abs(),
            y.p.abs(),
            y.p.is_negative(),
            y.q.is_negative(),
        ))
    });
}

/// Every solution of `p^2 - e^2 q^2 = n` (`n != 0`), via
/// `(p - eq)(p + eq) = n` over divisor pairs of `n`.
pub fn solve_square(e: &BigInt, n: &BigInt) -> Vec<PellSolution> {
    let d = e * e;
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let n_abs = n.abs();
    let mut f = BigInt::one();
    while &f * &f <= n_abs {
        if (&n_abs % &f).is_zero() {
            let g = &n_abs / &f;
            for (u, w) in [(f.clone(), g.clone()), (g.clone(), f.clone())] {
                for sign in [1, -1] {
                    // u = p - eq, w = p + eq with u w = n
                    let u: BigInt = &u * sign;
                    let w: BigInt = &w * sign * n.signum();
                    let (p2, rem_p) = (&u + &w).div_rem(&BigInt::from(2));
                    if !rem_p.is_zero() {
                        continue;
                    }
                    let diff = &w - &u;
                    if e.is_zero() {
                        continue;
                    }
                    let two_e: BigInt = e * 2;
                    if !(&diff % &two_e).is_zero() {
                        continue;
                    }
                    let q = diff / two_e;
                    out.push(PellSolution {
                        p: p2,
                        q,
                        d: d.clone(),
                        rhs: n.clone(),
                    });
                }
            }
        }
        f += 1;
    }
    out.sort_by(|x, y| (&x.q, &x.p).cmp(&(&y.q, &y.p)));
    out.dedup();
    out
}

fn check_pairing(sol: &PellSolution, unit: &FundamentalUnit) -> Result<()> {
    if sol.d != unit.d {
        return Err(Error::InvalidPairing(format!(
            "solution is for d={}, unit is for d={}",
            sol.d, unit.d
        )));
    }
    if !sol.is_valid() {
        return Err(Error::InvalidPairing(format!("{sol} does not solve its equation")));
    }
    if &unit.u * &unit.u - &unit.d * &unit.v * &unit.v != BigInt::one() {
        return Err(Error::InvalidPairing("unit does not have norm 1".into()));
    }
    Ok(())
}

/// `(p, q) -> (u p + d v q, v p + u q)`.
pub fn step(sol: &PellSolution, unit: &FundamentalUnit) -> PellSolution {
    PellSolution {
        p: &unit.u * &sol.p + &unit.d * &unit.v * &sol.q,
        q: &unit.v * &sol.p + &unit.u * &sol.q,
        d: sol.d.clone(),
        rhs: sol.rhs.clone(),
    }
}

/// The inverse of [`step`], i.e. multiplication by the conjugate `(u, -v)`.
pub fn step_back(sol: &PellSolution, unit: &FundamentalUnit) -> PellSolution {
    PellSolution {
        p: &unit.u * &sol.p - &unit.d * &unit.v * &sol.q,
        q: -&unit.v * &sol.p + &unit.u * &sol.q,
        d: sol.d.clone(),
        rhs: sol.rhs.clone(),
    }
}

/// `sol` followed by its first `count` images under the unit. The last entry
/// is the solution after `count` steps, so `count = 0` gives back `[sol]`.
pub fn orbit(sol: &PellSolution, unit: &FundamentalUnit, count: usize) -> Result<Vec<PellSolution>> {
    check_pairing(sol, unit)?;
    let mut out = Vec::with_capacity(count + 1);
    out.push(sol.clone());
    for _ in 0..count {
        let next = step(out.last().expect("non-empty"), unit);
        if !next.is_valid() {
            return Err(Error::Internal(format!("orbit left the solution set at {next}")));
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn units() {
        let u = fundamental_unit(&big(2)).unwrap();
        assert_eq!((u.u, u.v), (big(3), big(2)));
        let u = fundamental_unit(&big(17)).unwrap();
        assert_eq!((u.u, u.v), (big(33), big(8)));
        let u = fundamental_unit(&big(61)).unwrap();
        assert_eq!((u.u, u.v), (big(1766319049), big(226153980)));
        assert!(matches!(
            fundamental_unit(&big(16)),
            Err(Error::SquareDiscriminant(_))
        ));
        assert!(matches!(fundamental_unit(&bi(0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn bounded_examples() {
        let s = solve_bounded(&big(17), &big(8), 1);
        let pairs: Vec<_> = s.iter().map(|s| (s.p.clone(), s.q.clone())).collect();
        assert_eq!(
            pairs,
            vec![(bi(5), bi(1)), (bi(5), bi(-1)), (bi(-5), bi(1)), (bi(-5), bi(-1))]
        );
        assert!(solve_bounded(&big(17), &big(3), 10).is_empty());
        let s = solve_bounded(&big(7), &big(9), 0);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|s| s.q.is_zero() && s.p.abs() == big(3)));
    }

    #[test]
    fn square_discriminant() {
        // p^2 - 4 q^2 = 5: (p-2q)(p+2q) = 5 -> p = +-3, q = +-1
        let s = solve_bounded(&big(4), &big(5), 100);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|s| s.p.abs() == big(3) && s.q.abs() == big(1)));
        // p^2 - 9 q^2 = -8: (1, 1) and sign variants
        let s = solve_square(&big(3), &bi(-8));
        assert!(s.iter().all(|s| s.is_valid()));
        assert!(s.iter().any(|s| s.p == bi(1) && s.q == bi(1)));
    }

    #[test]
    fn orbit_examples() {
        let unit = fundamental_unit(&big(17)).unwrap();
        let sol = PellSolution::new(bi(5), bi(1), big(17), big(8)).unwrap();
        let o = orbit(&sol, &unit, 1).unwrap();
        assert_eq!((o[1].p.clone(), o[1].q.clone()), (bi(301), bi(73)));
        assert_eq!(orbit(&sol, &unit, 0).unwrap(), vec![sol.clone()]);
        assert_eq!(step_back(&o[1], &unit), sol);
        let other = fundamental_unit(&big(2)).unwrap();
        assert!(matches!(orbit(&sol, &other, 1), Err(Error::InvalidPairing(_))));
    }

    proptest! {
        #[test]
        fn bounded_scan_is_complete(d in 2u64..300, n in -200i64..200, qb in 0u64..40) {
            prop_assume!(n != 0);
            let got = solve_bounded(&big(d), &bi(n), qb);
            let mut expect = Vec::new();
            for q in -(qb as i64)..=(qb as i64) {
                let t = n + (d as i64) * q * q;
                if t < 0 { continue; }
                let p = (t as f64).sqrt().round() as i64;
                for p in [p - 1, p, p + 1] {
                    if p >= 0 && p * p == t {
                        expect.push((p, q));
                        if p != 0 { expect.push((-p, q)); }
                    }
                }
            }
            let mut got: Vec<_> = got.iter().map(|s| {
                prop_assert!(s.is_valid());
                Ok((i64::try_from(&s.p).unwrap(), i64::try_from(&s.q).unwrap()))
            }).collect::<std::result::Result<_, _>>()?;
            got.sort();
            expect.sort();
            expect.dedup();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn orbit_grows_and_preserves_rhs(d in 2u64..400, q in 1u64..30, n_off in 0u64..50) {
            prop_assume!(exact_sqrt(&big(d)).is_none());
            // pick any p and read off the rhs it solves
            let p = BigInt::from(n_off + d * q);
            let q = big(q);
            let rhs = &p * &p - big(d) * &q * &q;
            prop_assume!(!rhs.is_zero());
            let sol = PellSolution::new(p.abs(), q, big(d), rhs).unwrap();
            let unit = fundamental_unit(&big(d)).unwrap();
            let o = orbit(&sol, &unit, 6).unwrap();
            for w in o.windows(2) {
                prop_assert!(w[1].is_valid());
                prop_assert!(w[1].q.abs() > w[0].q.abs());
            }
        }
    }
}
