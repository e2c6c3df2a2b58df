//! The mirror problem on `Y`: given `(N(Y), h)` with `h^2 = 2ab`, decide
//! whether `Y` is a moduli space of sheaves on itself with Mukai vector
//! `(r, H~, s)`, `H~^2 = 2abc^2`.
//!
//! Vectors are `(x, y)` standing for `(x h + y delta_1) / 2ab` with
//! `delta_1^2 = -2abd`; membership is `x = nu y (mod 2ab)`. The series
//! systems differ from the X side: the congruence is taken mod `2a` rather
//! than `2ac`, and the gcd clause runs over primes of `ac` not dividing `b`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{big, congruent, divides, gcd3, prime_divisors, prime_divisors_u64};
use crate::criteria_x::{associated_vector, lift_residue, ConditionReport, H1Report, ReflectedVector, SeriesCondition, SeriesWitness};
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, MukaiShape, Series, Sign};
use crate::pell::solve_bounded;
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YLattice {
    shape: MukaiShape,
    d: BigInt,
    nu: BigInt,
    two_ab: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuPrimitivity {
    pub content: BigInt,
    pub divisors: Vec<BigInt>,
    /// Whether every listed prime `l` has `l^2 | abc^2`.
    pub square_divides_abc2: bool,
}

impl NuPrimitivity {
    pub fn is_primitive(&self) -> bool {
        self.divisors.is_empty()
    }
}

impl YLattice {
    /// Validates `(a, b, c, d, nu)`. A `d` sharing a factor with `c` is
    /// accepted but the theorem routines refuse it; see [`Self::theorems_apply`].
    pub fn new(a: i64, b: i64, c: i64, d: impl Into<BigInt>, nu: impl Into<BigInt>) -> Result<Self> {
        let shape = MukaiShape::from_abc(a, b, c)?;
        let d = d.into();
        if !d.is_positive() {
            return Err(Error::InvalidD(format!("d must be positive, got {d}")));
        }
        let two_ab = shape.two_ab();
        let nu = nu.into().mod_floor(&two_ab);
        if !nu.gcd(&two_ab).is_one() {
            return Err(Error::InvalidNu(format!("gcd(nu, 2ab) = gcd({nu}, {two_ab}) != 1")));
        }
        if !d.gcd(&two_ab).is_one() {
            return Err(Error::InvalidD(format!("gcd(d, 2ab) = gcd({d}, {two_ab}) != 1")));
        }
        if !congruent(&(&nu * &nu), &d, &(big(2) * &two_ab)) {
            return Err(Error::IncompatibleInvariants(format!(
                "nu^2 != d mod 4ab (nu={nu}, d={d}, 4ab={})",
                big(2) * &two_ab
            )));
        }
        Ok(YLattice { shape, d, nu, two_ab })
    }

    pub fn shape(&self) -> &MukaiShape {
        &self.shape
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn nu(&self) -> &BigInt {
        &self.nu
    }
    pub fn two_ab(&self) -> &BigInt {
        &self.two_ab
    }

    /// `gcd(c, d) = 1`, the standing hypothesis of the theorems.
    pub fn theorems_apply(&self) -> bool {
        self.d.gcd(&big(self.shape.c())).is_one()
    }

    pub fn h(&self) -> LatticeVector {
        LatticeVector::new(self.two_ab.clone(), 0)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        congruent(&v.x, &(&self.nu * &v.y), &self.two_ab)
    }

    pub fn inner_product(&self, v: &LatticeVector, w: &LatticeVector) -> Result<BigInt> {
        for u in [v, w] {
            if !self.contains(u) {
                return Err(Error::InvalidVector(format!("{u} is not in N(Y): x != nu y mod 2ab")));
            }
        }
        let num = &v.x * &w.x - &self.d * &v.y * &w.y;
        let (q, rem) = num.div_rem(&self.two_ab);
        if !rem.is_zero() {
            return Err(Error::Internal(format!("non-integral product {num}/{}", self.two_ab)));
        }
        Ok(q)
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<BigInt> {
        self.inner_product(v, v)
    }

    pub fn nu_primitivity(&self, v: &LatticeVector) -> Result<NuPrimitivity> {
        if !self.contains(v) {
            return Err(Error::InvalidVector(format!("{v} is not in N(Y)")));
        }
        let content = gcd3(&v.x, &v.y, &((&v.x - &self.nu * &v.y) / &self.two_ab));
        let mut divisors = Vec::new();
        if !content.is_one() {
            for l in prime_divisors(&content) {
                if congruent(&v.x, &(&self.nu * &v.y), &(&self.two_ab * &l)) {
                    divisors.push(l);
                }
            }
        }
        let c = big(self.shape.c());
        let abc2 = big(self.shape.a()) * big(self.shape.b()) * &c * &c;
        let square_divides_abc2 = divisors.iter().all(|l| divides(&(l * l), &abc2));
        Ok(NuPrimitivity { content, divisors, square_divides_abc2 })
    }
}

impl fmt::Display for YLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N(Y) a={} b={} c={} d={} nu=+-{} (mod {})",
            self.shape.a(),
            self.shape.b(),
            self.shape.c(),
            self.d,
            self.nu.clone().min(&self.two_ab - &self.nu),
            self.two_ab
        )
    }
}

pub fn make_y_lattice(a: i64, b: i64, c: i64, d: impl Into<BigInt>, nu: impl Into<BigInt>) -> Result<YLattice> {
    YLattice::new(a, b, c, d, nu)
}

/// The unique lift of `nu` to a root of `d` modulo `2ab e`, `e in {a, b}`.
pub fn lift_nu(l: &YLattice, e: u64) -> Result<BigInt> {
    lift_residue(&l.nu, &l.two_ab, e, &l.d)
}

/// Conditions (i)-(iv) for `H~ = (x, y)` solving `x^2 - d y^2 = 4a^2b^2c^2`.
pub fn check_conditions_y(l: &YLattice, v: &LatticeVector) -> Result<ConditionReport> {
    let shape = &l.shape;
    let two_abc = shape.two_abc();
    if &v.x * &v.x - &l.d * &v.y * &v.y != &two_abc * &two_abc {
        return Err(Error::InvalidVector(format!("{v} does not solve x^2 - {}y^2 = (2abc)^2", l.d)));
    }
    let mut diagnostics = Vec::new();
    let cond_i = l.contains(v);
    if !cond_i {
        diagnostics.push("(i) x != nu y mod 2ab".to_string());
    }
    let cond_ii: Vec<Sign> = Sign::BOTH
        .into_iter()
        .filter(|s| congruent(&v.x, &s.apply(two_abc.clone()), &l.d))
        .collect();
    if cond_ii.is_empty() {
        diagnostics.push("(ii) x is not +-2abc mod d".to_string());
    }
    let series_cond = |series: Series| -> Result<SeriesCondition> {
        let (main, other) = shape.series_factors(series);
        let lifted = lift_nu(l, main)?;
        let o = big(other);
        let holds = divides(&o, &v.x)
            && divides(&o, &v.y)
            && divides(&(&l.two_ab * big(main)), &(&v.x - &lifted * &v.y));
        Ok(SeriesCondition { holds, lifted })
    };
    let cond_iii_a = series_cond(Series::A)?;
    let cond_iii_b = series_cond(Series::B)?;
    if !cond_iii_a.holds && !cond_iii_b.holds {
        diagnostics.push("(iii) neither series".into());
    }
    let cond_iv = cond_i && l.nu_primitivity(v)?.is_primitive();
    if cond_i && !cond_iv {
        diagnostics.push("(iv) not nu-primitive".into());
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

fn require_applicable(l: &YLattice) -> Result<()> {
    if l.theorems_apply() {
        Ok(())
    } else {
        Err(Error::TheoremInapplicable(format!(
            "gcd(c, d) = gcd({}, {}) > 1",
            l.shape.c(),
            l.d
        )))
    }
}

fn series_constraints_y(l: &YLattice, main: u64, other: u64, p: &BigInt, q: &BigInt) -> bool {
    let base = big(2 * main);
    let diff = p - &l.nu * q;
    if !divides(&base, &diff) {
        return false;
    }
    let mc = main * l.shape.c();
    let gcd_ok = prime_divisors_u64(mc)
        .into_iter()
        .filter(|l1| other % l1 != 0)
        .all(|l1| !(divides(&big(l1), p) && divides(&big(l1), q)));
    gcd_ok
        && prime_divisors_u64(other)
            .into_iter()
            .all(|l2| !divides(&(&base * big(l2)), &diff))
}

/// Canonical (`q > 0`, or `q = 0` and `p > 0`) solutions of one series system.
pub fn solve_series_y(l: &YLattice, series: Series, alpha: Sign, q_bound: u64) -> Result<Vec<SeriesWitness>> {
    require_applicable(l)?;
    let shape = &l.shape;
    let (main, other) = shape.series_factors(series);
    let rhs = alpha.apply(big(4 * main) * big(shape.c()));
    let two_abc = shape.two_abc();
    Ok(solve_bounded(&l.d, &rhs, q_bound)
        .into_iter()
        .filter(|s| s.q.is_positive() || (s.q.is_zero() && s.p.is_positive()))
        .filter(|s| series_constraints_y(l, main, other, &s.p, &s.q))
        .map(|s| SeriesWitness {
            series,
            alpha,
            associated: associated_vector(&two_abc, other, &l.d, alpha, &s.p, &s.q),
            sign_choice: Sign::Plus,
            ii_sign: Sign::Plus,
            h1: LatticeVector::new(big(other) * &s.p, big(other) * &s.q),
            p: s.p,
            q: s.q,
        })
        .collect())
}

pub fn associate_y(l: &YLattice, series: Series, alpha: Sign, p: &BigInt, q: &BigInt) -> Result<LatticeVector> {
    let shape = &l.shape;
    let (main, other) = shape.series_factors(series);
    let rhs = alpha.apply(big(4 * main) * big(shape.c()));
    if p * p - &l.d * q * q != rhs {
        return Err(Error::InvalidWitness(format!("({p}, {q}) does not solve p^2 - {}q^2 = {rhs}", l.d)));
    }
    let v = associated_vector(&shape.two_abc(), other, &l.d, alpha, p, q);
    let two_abc = shape.two_abc();
    debug_assert_eq!(&v.x * &v.x - &l.d * &v.y * &v.y, &two_abc * &two_abc);
    Ok(v)
}

/// `h1 = o (p h + q delta_1) / 2ab`, numerator `(o p, o q)`.
pub fn h1_of_y(l: &YLattice, w: &SeriesWitness) -> LatticeVector {
    let (_, other) = l.shape.series_factors(w.series);
    LatticeVector::new(big(other) * &w.p, big(other) * &w.q)
}

pub fn h1_check_y(l: &YLattice, h1: &LatticeVector, series: Series) -> Result<H1Report> {
    let shape = &l.shape;
    let (main, other) = shape.series_factors(series);
    let square = l.norm(h1)?;
    let h_dot = l.inner_product(&l.h(), h1)?;
    let o = big(other);
    let target = big(2) * &o * big(shape.c());
    let square_sign = Sign::BOTH.into_iter().find(|s| s.apply(target.clone()) == square);
    let divisible = divides(&o, &h_dot);
    let l1_failures = prime_divisors_u64(main * shape.c())
        .into_iter()
        .filter(|l1| other % l1 != 0)
        .filter(|&l1| divides(&(&o * big(l1)), &h_dot))
        .collect();
    let l2_failures = prime_divisors_u64(other)
        .into_iter()
        .filter(|&l2| {
            let lb = big(l2);
            divides(&lb, &h1.x) && divides(&lb, &h1.y) && l.contains(&LatticeVector::new(&h1.x / &lb, &h1.y / &lb))
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

/// `-c h + alpha (h . h1) h1 / o`, equal to `+-w(H~)` for an uncomputed
/// reflection `w`.
pub fn wh_from_h1(l: &YLattice, h1: &LatticeVector, series: Series, alpha: Sign) -> Result<ReflectedVector> {
    let shape = &l.shape;
    let (_, other) = shape.series_factors(series);
    let h_dot = l.inner_product(&l.h(), h1)?;
    let o = big(other);
    let nx = alpha.apply(&h_dot * &h1.x);
    let ny = alpha.apply(&h_dot * &h1.y);
    if !divides(&o, &nx) || !divides(&o, &ny) {
        return Err(Error::InconsistentH1(format!("(h.h1) h1 = ({nx}, {ny}) is not divisible by {o}")));
    }
    let v = LatticeVector {
        x: nx / &o - shape.two_abc(),
        y: ny / &o,
    };
    let expected = shape.two_rs();
    if !l.contains(&v) || l.norm(&v)? != expected {
        return Err(Error::InconsistentH1(format!("{v} is not a vector of square 2abc^2 = {expected}")));
    }
    Ok(ReflectedVector {
        vector: v,
        up_to_reflection: true,
    })
}

/// `No` outright when `gcd(c, d) > 1`; otherwise the four bounded searches.
pub fn decide_moduli_self(l: &YLattice, q_bound: u64) -> Verdict<SeriesWitness> {
    if !l.theorems_apply() {
        return Verdict::No {
            reason: format!("gcd(c,d)>1 (c={}, d={})", l.shape.c(), l.d),
        };
    }
    let combos: Vec<(Series, Sign)> = Series::BOTH
        .into_iter()
        .flat_map(|s| Sign::BOTH.into_iter().map(move |a| (s, a)))
        .collect();
    let mut all: Vec<SeriesWitness> = combos
        .into_par_iter()
        .flat_map_iter(|(s, a)| solve_series_y(l, s, a, q_bound).expect("gcd(c, d) = 1 checked"))
        .collect();
    if all.is_empty() {
        return Verdict::NoWithinBound { q_bound };
    }
    all.sort_by(|x, y| (x.series, x.alpha, &x.q, &x.p).cmp(&(y.series, y.alpha, &y.q, &y.p)));
    Verdict::Yes(all)
}
