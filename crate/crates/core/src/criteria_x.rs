//! X-side decision procedures.
//!
//! A vector `h~ = (x, y)` of square `2ab` in `N(X)` makes the moduli space
//! isomorphic to `X` iff it satisfies conditions (i)-(iv) below. Those
//! vectors are exactly the associated vectors of solutions `(p, q)` to one of
//! four Pell-type systems, indexed by series and `alpha = +-1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{big, congruent, divides, gcd3, prime_divisors_u64, square_prime_divisors};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Series, Sign, XLattice};
use crate::pell::solve_bounded;
use crate::Verdict;

/// The unique `mu' = mu (mod 2rs)` with `mu'^2 = d (mod 4rs e)`.
pub fn lift_mu(l: &XLattice, e: u64) -> Result<BigInt> {
    let ab = l.shape().a() * l.shape().b();
    if e == 0 || ab % e != 0 {
        return Err(Error::InvalidInput(format!("lift degree {e} must divide ab = {ab}")));
    }
    lift_residue(l.mu(), l.two_rs(), e, l.d())
}

/// Shared by both sides: lifts a root of `d` modulo `2m` (`m` the residue
/// modulus) to a root modulo `2 m e`, scanning the `e` candidates.
pub(crate) fn lift_residue(root: &BigInt, modulus: &BigInt, e: u64, d: &BigInt) -> Result<BigInt> {
    let target = modulus * big(2) * big(e);
    let hits: Vec<BigInt> = (0..e)
        .map(|k| root + modulus * big(k))
        .filter(|cand| divides(&target, &(cand * cand - d)))
        .collect();
    match hits.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(Error::InvariantViolation(format!(
            "expected one lift of {root} mod {modulus} to mod {}, found {}",
            modulus * big(e),
            hits.len()
        ))),
    }
}

/// Outcome of condition (iii) for one series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCondition {
    pub holds: bool,
    /// The lifted root the congruence was evaluated with.
    pub lifted: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub cond_i: bool,
    /// Signs `e` with `x = e 2abc (mod d)`; (ii) holds iff non-empty.
    pub cond_ii: Vec<Sign>,
    pub cond_iii_a: SeriesCondition,
    pub cond_iii_b: SeriesCondition,
    pub cond_iv: bool,
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.cond_i
            && !self.cond_ii.is_empty()
            && (self.cond_iii_a.holds || self.cond_iii_b.holds)
            && self.cond_iv
    }

    /// The series satisfied by condition (iii), a-series first.
    pub fn series(&self) -> Vec<Series> {
        let mut out = Vec::new();
        if self.cond_iii_a.holds {
            out.push(Series::A);
        }
        if self.cond_iii_b.holds {
            out.push(Series::B);
        }
        out
    }
}

/// Evaluates (i)-(iv) on a solution of `x^2 - d y^2 = 4a^2b^2c^2`.
pub fn check_conditions(l: &XLattice, v: &LatticeVector) -> Result<ConditionReport> {
    let shape = l.shape();
    let two_abc = shape.two_abc();
    if &v.x * &v.x - l.d() * &v.y * &v.y != &two_abc * &two_abc {
        return Err(Error::InvalidVector(format!(
            "{v} does not solve x^2 - {}y^2 = {}",
            l.d(),
            &two_abc * &two_abc
        )));
    }
    let mut diagnostics = Vec::new();
    let two_rs = l.two_rs();

    let cond_i = congruent(&v.x, &(l.mu() * &v.y), two_rs);
    if !cond_i {
        diagnostics.push(format!("(i) x - mu y = {} not divisible by 2rs", &v.x - l.mu() * &v.y));
    }

    let cond_ii: Vec<Sign> = Sign::BOTH
        .into_iter()
        .filter(|s| congruent(&v.x, &s.apply(two_abc.clone()), l.d()))
        .collect();
    if cond_ii.is_empty() {
        diagnostics.push(format!("(ii) x mod d = {} is not +-2abc", v.x.mod_floor(l.d())));
    }

    let series_cond = |series: Series| -> Result<SeriesCondition> {
        let (main, other) = shape.series_factors(series);
        let lifted = lift_mu(l, main)?;
        let o = big(other);
        let holds = divides(&o, &v.x)
            && divides(&o, &v.y)
            && divides(&(two_rs * big(main)), &(&v.x - &lifted * &v.y));
        Ok(SeriesCondition { holds, lifted })
    };
    let cond_iii_a = series_cond(Series::A)?;
    let cond_iii_b = series_cond(Series::B)?;
    if !cond_iii_a.holds && !cond_iii_b.holds {
        diagnostics.push("(iii) neither series".into());
    }

    let cond_iv = if cond_i {
        l.mu_primitivity(v)?.is_primitive()
    } else {
        false
    };
    if cond_i && !cond_iv {
        diagnostics.push("(iv) not mu-primitive".into());
    }

    Ok(ConditionReport {
        cond_i,
        cond_ii,
        cond_iii_a,
        cond_iii_b,
        cond_iv,
        diagnostics,
    })
}

/// A series solution `(p, q)` together with everything derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesWitness {
    pub series: Series,
    pub alpha: Sign,
    pub p: BigInt,
    pub q: BigInt,
    /// The `+` representative of the associated vector.
    pub associated: LatticeVector,
    /// Outer sign of the representative stored in `associated`.
    pub sign_choice: Sign,
    /// The sign in `x = +-2abc (mod d)` verified for `associated`.
    pub ii_sign: Sign,
    pub h1: LatticeVector,
}

/// `(x, y) = (2abc + alpha o d q^2, alpha o p q)` with `o` the other factor.
pub fn associate(l: &XLattice, series: Series, alpha: Sign, p: &BigInt, q: &BigInt) -> Result<LatticeVector> {
    let shape = l.shape();
    let (main, other) = shape.series_factors(series);
    let rhs = alpha.apply(big(4 * main) * big(shape.c()));
    if p * p - l.d() * q * q != rhs {
        return Err(Error::InvalidWitness(format!(
            "({p}, {q}) does not solve p^2 - {}q^2 = {rhs}",
            l.d()
        )));
    }
    Ok(associated_vector(&shape.two_abc(), other, l.d(), alpha, p, q))
}

pub(crate) fn associated_vector(
    two_abc: &BigInt,
    other: u64,
    d: &BigInt,
    alpha: Sign,
    p: &BigInt,
    q: &BigInt,
) -> LatticeVector {
    let o = big(other);
    LatticeVector {
        x: two_abc + alpha.apply(&o * d * q * q),
        y: alpha.apply(&o * p * q),
    }
}

/// Conditions on `(p, q)` beyond the norm equation, a-series wording with
/// `main`/`other` standing for `a`/`b`.
fn series_constraints(l: &XLattice, main: u64, other: u64, p: &BigInt, q: &BigInt) -> bool {
    let c = big(l.shape().c());
    let base = big(2 * main) * &c;
    let diff = p - l.mu() * q;
    if !divides(&base, &diff) {
        return false;
    }
    if !gcd3(&big(main), p, q).is_one() {
        return false;
    }
    prime_divisors_u64(other)
        .into_iter()
        .all(|pr| !divides(&(&base * big(pr)), &diff))
}

/// Canonical solutions `(q > 0, or q = 0 and p > 0)` of one series system
/// with `|q| <= q_bound`.
pub fn solve_series(l: &XLattice, series: Series, alpha: Sign, q_bound: u64) -> Vec<SeriesWitness> {
    let shape = l.shape();
    let (main, other) = shape.series_factors(series);
    let rhs = alpha.apply(big(4 * main) * big(shape.c()));
    let two_abc = shape.two_abc();
    solve_bounded(l.d(), &rhs, q_bound)
        .into_iter()
        .filter(|s| s.q.is_positive() || (s.q.is_zero() && s.p.is_positive()))
        .filter(|s| series_constraints(l, main, other, &s.p, &s.q))
        .map(|s| {
            let associated = associated_vector(&two_abc, other, l.d(), alpha, &s.p, &s.q);
            SeriesWitness {
                series,
                alpha,
                h1: h1_from_pq(shape.c(), other, &s.p, &s.q),
                p: s.p,
                q: s.q,
                associated,
                sign_choice: Sign::Plus,
                ii_sign: Sign::Plus,
            }
        })
        .collect()
}

/// All four searches, merged in `(series, alpha, q, p)` order.
pub fn decide_iso_general_x(l: &XLattice, q_bound: u64) -> Verdict<SeriesWitness> {
    let combos: Vec<(Series, Sign)> = Series::BOTH
        .into_iter()
        .flat_map(|s| Sign::BOTH.into_iter().map(move |a| (s, a)))
        .collect();
    let mut all: Vec<SeriesWitness> = combos
        .into_par_iter()
        .flat_map_iter(|(s, a)| solve_series(l, s, a, q_bound))
        .collect();
    if all.is_empty() {
        return Verdict::NoWithinBound { q_bound };
    }
    all.sort_by(|x, y| (x.series, x.alpha, &x.q, &x.p).cmp(&(y.series, y.alpha, &y.q, &y.p)));
    Verdict::Yes(all)
}

fn h1_from_pq(c: u64, other: u64, p: &BigInt, q: &BigInt) -> LatticeVector {
    let t = big(other) * big(c);
    LatticeVector {
        x: &t * p,
        y: &t * q,
    }
}

/// `h1 = t (p H + q delta) / 2abc^2` with `t = oc`, in numerator form.
pub fn h1_of(l: &XLattice, w: &SeriesWitness) -> LatticeVector {
    let (_, other) = l.shape().series_factors(w.series);
    h1_from_pq(l.shape().c(), other, &w.p, &w.q)
}

/// Individual clauses of the `h1` criterion for one series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Report {
    pub square: BigInt,
    /// `Some(alpha)` when `h1^2 = alpha 2oc`.
    pub square_sign: Option<Sign>,
    /// `H . h1 = 0 (mod oc)`.
    pub divisible: bool,
    /// Primes `l1` with `l1^2 | main` and `H . h1 = 0 (mod oc l1)`.
    pub l1_failures: Vec<u64>,
    /// Primes `l2` with `l2^2 | other` and `h1 / l2` in `N(X)`.
    pub l2_failures: Vec<u64>,
}

impl H1Report {
    pub fn passes(&self) -> bool {
        self.square_sign.is_some() && self.divisible && self.l1_failures.is_empty() && self.l2_failures.is_empty()
    }
}

pub fn h1_check(l: &XLattice, h1: &LatticeVector, series: Series) -> Result<H1Report> {
    let shape = l.shape();
    let (main, other) = shape.series_factors(series);
    let square = l.norm(h1)?;
    let h_dot = l.inner_product(&l.h(), h1)?;
    let oc = big(other) * big(shape.c());
    let target = big(2) * &oc;
    let square_sign = Sign::BOTH.into_iter().find(|s| s.apply(target.clone()) == square);
    let divisible = divides(&oc, &h_dot);
    let l1_failures = square_prime_divisors(main)
        .into_iter()
        .filter(|&p| divides(&(&oc * big(p)), &h_dot))
        .collect();
    let l2_failures = square_prime_divisors(other)
        .into_iter()
        .filter(|&p| {
            let pb = big(p);
            divides(&pb, &h1.x) && divides(&pb, &h1.y) && l.contains(&LatticeVector::new(&h1.x / &pb, &h1.y / &pb))
        })
        .collect();
    Ok(H1Report {
        square,
        square_sign,
        divisible,
        l1_failures,
        l2_failures,
    })
}

/// A vector returned by the `h1` formulas. The isomorphism it describes holds
/// only up to an unspecified reflection `w` in `W^(-2)`, which is not computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectedVector {
    pub vector: LatticeVector,
    pub up_to_reflection: bool,
}

/// `-H/c + alpha (H . h1) h1 / (o c^2)`.
pub fn htilde_from_h1(l: &XLattice, h1: &LatticeVector, series: Series, alpha: Sign) -> Result<ReflectedVector> {
    let shape = l.shape();
    let (_, other) = shape.series_factors(series);
    let h_dot = l.inner_product(&l.h(), h1)?;
    let den = big(other) * big(shape.c()) * big(shape.c());
    let nx = alpha.apply(&h_dot * &h1.x);
    let ny = alpha.apply(&h_dot * &h1.y);
    if !divides(&den, &nx) || !divides(&den, &ny) {
        return Err(Error::InconsistentH1(format!(
            "(H.h1) h1 = ({nx}, {ny}) is not divisible by {den}"
        )));
    }
    let v = LatticeVector {
        x: nx / &den - shape.two_abc(),
        y: ny / &den,
    };
    if !l.contains(&v) || l.norm(&v)? != shape.two_ab() {
        return Err(Error::InconsistentH1(format!(
            "{v} is not a lattice vector of square 2ab; h1 does not match alpha={alpha}"
        )));
    }
    Ok(ReflectedVector {
        vector: v,
        up_to_reflection: true,
    })
}

/// Search results restricted to the canonical representatives and `|y|`.
pub fn associated_orbits(witnesses: &[SeriesWitness], y_bound: &BigInt) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = witnesses
        .iter()
        .filter(|w| w.associated.y.abs() <= *y_bound)
        .map(|w| w.associated.sign_normalized())
        .collect();
    out.sort();
    out.dedup();
    out
}
