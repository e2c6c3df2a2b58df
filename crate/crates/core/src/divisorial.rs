//! Divisorial conditions on moduli.
//!
//! For a shape `(r, s)`, a residue `mu` and `alpha = +-1`, the a-series set
//! `D(r,s;a)^mu_alpha` collects the `d = mu^2 (mod 4abc^2)` for which
//! `p^2 - d q^2 = 4ac alpha` has a solution with `p = mu q (mod 2ac)`,
//! `gcd(a, p, q) = 1` and `p != mu q (mod 2acl)` for primes `l` with
//! `l^2 | b`. The b-series set is the same with `a` and `b` exchanged.
//!
//! Every such set with a witness at fixed `q > 0` is an arithmetic family in
//! one parameter `m`, which is what [`generate`] walks.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{big, congruent, divides, gcd3, mod_inverse, modulo, prime_divisors_u64, square_prime_divisors};
use crate::error::{Error, Result};
use crate::lattice::{mu_bar, MukaiShape, Series, Sign};
use crate::pell::solve_bounded;
use crate::Verdict;

/// One of the sets `D(r,s;a)^mu_alpha`, `D(r,s;b)^mu_alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSet {
    shape: MukaiShape,
    series: Series,
    mu: BigInt,
    alpha: Sign,
}

impl DSet {
    pub fn new(shape: MukaiShape, series: Series, mu: impl Into<BigInt>, alpha: Sign) -> Result<Self> {
        let two_rs = shape.two_rs();
        let mu = modulo(&mu.into(), &two_rs);
        if !mu.gcd(&two_rs).is_one() {
            return Err(Error::InvalidMu(format!("gcd({mu}, 2rs = {two_rs}) != 1")));
        }
        Ok(DSet { shape, series, mu, alpha })
    }

    pub fn shape(&self) -> &MukaiShape {
        &self.shape
    }
    pub fn series(&self) -> Series {
        self.series
    }
    pub fn mu(&self) -> &BigInt {
        &self.mu
    }
    pub fn alpha(&self) -> Sign {
        self.alpha
    }

    fn factors(&self) -> (u64, u64) {
        self.shape.series_factors(self.series)
    }

    /// `4 main c alpha`, the right-hand side of the Pell equation.
    pub fn rhs(&self) -> BigInt {
        let (main, _) = self.factors();
        self.alpha.apply(big(4 * main) * big(self.shape.c()))
    }

    /// `d = mu^2 (mod 4abc^2)`.
    pub fn congruence_ok(&self, d: &BigInt) -> bool {
        congruent(d, &(&self.mu * &self.mu), &(big(2) * self.shape.two_rs()))
    }

    /// The membership conditions on a candidate `(p, q)` for a given `d`.
    pub fn is_witness(&self, d: &BigInt, p: &BigInt, q: &BigInt) -> bool {
        let (main, other) = self.factors();
        if p * p - d * q * q != self.rhs() {
            return false;
        }
        let base = big(2 * main) * big(self.shape.c());
        let diff = p - &self.mu * q;
        divides(&base, &diff)
            && gcd3(&big(main), p, q).is_one()
            && square_prime_divisors(other)
                .into_iter()
                .all(|l| !divides(&(&base * big(l)), &diff))
    }

    /// Whether the `q = 0` family is present: it needs `main = c = 1` and
    /// `alpha = +1`, and then every admissible `d` is a member via `(2, 0)`.
    pub fn has_q0_family(&self) -> bool {
        let (main, _) = self.factors();
        main == 1 && self.shape.c() == 1 && self.alpha == Sign::Plus
    }
}

/// A member `d` with the `(p, q)` that certifies it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DMember {
    pub d: BigInt,
    pub p: BigInt,
    pub q: BigInt,
}

/// All `t mod o c q^2` with `mu q t + main c t^2 = alpha (mod o c q^2)`.
/// Empty when `gcd(main, q) > 1`.
pub fn generator_residues(set: &DSet, q: u64) -> Vec<BigInt> {
    let (main, other) = set.factors();
    if q == 0 || main.gcd(&q) != 1 {
        return Vec::new();
    }
    let c = set.shape.c();
    let modulus = big(other) * big(c) * big(q) * big(q);
    let mc = big(main) * big(c);
    let mq = &set.mu * big(q);
    let alpha = set.alpha.to_bigint();
    let n = modulus.to_u64().expect("generator modulus fits u64");
    (0..n)
        .map(big)
        .filter(|t| divides(&modulus, &(&mq * t + &mc * t * t - &alpha)))
        .collect()
}

/// `p(m) = mu q + 2 main c (t + o c q^2 m)` and `d(m) = (p^2 - 4 main c alpha) / q^2`.
fn p_of(set: &DSet, q: u64, t: &BigInt, m: &BigInt) -> BigInt {
    let (main, other) = set.factors();
    let c = big(set.shape.c());
    let q = big(q);
    &set.mu * &q + big(2 * main) * &c * (t + big(other) * &c * &q * &q * m)
}

fn check_t(set: &DSet, q: u64, t: &BigInt) -> Result<()> {
    let (main, other) = set.factors();
    let c = set.shape.c();
    let modulus = big(other) * big(c) * big(q) * big(q);
    let lhs = &set.mu * big(q) * t + big(main) * big(c) * t * t;
    if q == 0 || !congruent(&lhs, &set.alpha.to_bigint(), &modulus) {
        return Err(Error::InvalidT(format!(
            "t = {t} does not solve the generator congruence mod {modulus} for q = {q}"
        )));
    }
    Ok(())
}

fn d_of(set: &DSet, q: u64, p: &BigInt) -> Result<BigInt> {
    let num = p * p - set.rhs();
    let q2 = big(q * q);
    let (d, rem) = num.div_rem(&q2);
    if !rem.is_zero() {
        return Err(Error::Internal(format!("p = {p}: q^2 = {q2} does not divide {num}")));
    }
    Ok(d)
}

/// The generated `d > 0` for `m` in the given range, each re-verified.
pub fn generate(set: &DSet, q: u64, t: &BigInt, m_range: RangeInclusive<i64>) -> Result<Vec<DMember>> {
    check_t(set, q, t)?;
    let mut out = Vec::new();
    for m in m_range {
        let p = p_of(set, q, t, &BigInt::from(m));
        let d = d_of(set, q, &p)?;
        if d.is_positive() {
            out.push(verified(set, d, p, q)?);
        }
    }
    Ok(out)
}

/// Every generated `d` in `(0, d_max]` for this `(q, t)`.
pub fn generate_up_to(set: &DSet, q: u64, t: &BigInt, d_max: &BigInt) -> Result<Vec<DMember>> {
    check_t(set, q, t)?;
    let (main, other) = set.factors();
    let c = set.shape.c();
    let q_b = big(q);
    // |p| <= sqrt(d_max q^2 + 4 main c) bounds every candidate
    let p_max: BigInt = (d_max * &q_b * &q_b + big(4 * main * c)).sqrt() + 1;
    let step = big(2 * main * other) * big(c) * big(c) * &q_b * &q_b;
    let p0: BigInt = p_of(set, q, t, &BigInt::zero());
    let lo: BigInt = Integer::div_floor(&(-&p_max - &p0), &step) - 1;
    let hi: BigInt = Integer::div_floor(&(&p_max - &p0), &step) + 1;
    let mut out = Vec::new();
    let mut m = lo;
    while m <= hi {
        let p = p_of(set, q, t, &m);
        let d = d_of(set, q, &p)?;
        if d.is_positive() && d <= *d_max {
            out.push(verified(set, d, p, q)?);
        }
        m += 1;
    }
    out.sort();
    Ok(out)
}

/// `n` strictly increasing members from one `(q, t)` family.
pub fn generate_increasing(set: &DSet, q: u64, t: &BigInt, n: usize) -> Result<Vec<DMember>> {
    check_t(set, q, t)?;
    // p(m) is increasing in m, and so is d once p > 0
    let mut out: Vec<DMember> = Vec::with_capacity(n);
    let mut m = BigInt::zero();
    while p_of(set, q, t, &m).is_positive() {
        m -= 1;
    }
    while out.len() < n {
        m += 1;
        let p = p_of(set, q, t, &m);
        if !p.is_positive() {
            continue;
        }
        let d = d_of(set, q, &p)?;
        if d.is_positive() {
            if let Some(last) = out.last() {
                if d <= last.d {
                    return Err(Error::InvariantViolation(format!("generated d not increasing at m = {m}")));
                }
            }
            out.push(verified(set, d, p, q)?);
        }
    }
    Ok(out)
}

fn verified(set: &DSet, d: BigInt, p: BigInt, q: u64) -> Result<DMember> {
    let qb = big(q);
    if !set.congruence_ok(&d) || !set.is_witness(&d, &p, &qb) {
        return Err(Error::InvariantViolation(format!(
            "generated d = {d} with (p, q) = ({p}, {q}) is not a member"
        )));
    }
    match membership(set, &d, q) {
        Verdict::Yes(_) => Ok(DMember { d, p, q: qb }),
        _ => Err(Error::InvariantViolation(format!("membership rejects generated d = {d}"))),
    }
}

/// Membership of `d`, searching `|q| <= q_bound` (including `q = 0`).
pub fn membership(set: &DSet, d: &BigInt, q_bound: u64) -> Verdict<DMember> {
    if !d.is_positive() {
        return Verdict::No { reason: format!("d = {d} is not positive") };
    }
    if !set.congruence_ok(d) {
        return Verdict::No {
            reason: format!("d != mu^2 mod 4abc^2 (d = {d}, mu = {})", set.mu),
        };
    }
    let hit = solve_bounded(d, &set.rhs(), q_bound)
        .into_iter()
        .find(|s| set.is_witness(d, &s.p, &s.q));
    match hit {
        Some(s) => {
            // report with q >= 0
            let (p, q) = if s.q.is_negative() { (-s.p, -s.q) } else { (s.p, s.q) };
            Verdict::Yes(vec![DMember { d: d.clone(), p, q }])
        }
        None => Verdict::NoWithinBound { q_bound },
    }
}

/// Smallest `k in [0, b)` solving `k^2 ac^2 + k (mu + 2 alpha ac mu^-1) + a mu^-2 = 0 (mod b)`,
/// with `mu^-1` taken mod `bc`. Stated for the a-series.
pub fn quadratic_root(shape: &MukaiShape, mu: &BigInt, alpha: Sign) -> Option<u64> {
    let (a, b, c) = (shape.a(), shape.b(), shape.c());
    if b == 1 {
        return Some(0);
    }
    let bc = big(b * c);
    let inv = mod_inverse(mu, &bc)?;
    let (ab, ac) = (big(a), big(a * c));
    let lin = mu + alpha.apply(big(2) * &ac * &inv);
    let konst = &ab * &inv * &inv;
    let bb = big(b);
    (0..b).find(|&k| {
        let k = big(k);
        divides(&bb, &(&k * &k * &ac * big(c) + &k * &lin + &konst))
    })
}

/// The same root through the completed square
/// `(2ac^2 k + mu + 2 alpha ac mu^-1)^2 = mu^2 + 4 alpha ac (mod 4abc^2)`.
pub fn quadratic_root_completed(shape: &MukaiShape, mu: &BigInt, alpha: Sign) -> Option<u64> {
    let (a, b, c) = (shape.a(), shape.b(), shape.c());
    let bc = big(b * c);
    let inv = if b * c == 1 { BigInt::zero() } else { mod_inverse(mu, &bc)? };
    let ac = big(a * c);
    let shift = mu + alpha.apply(big(2) * &ac * &inv);
    let modulus = big(4 * a * b) * big(c) * big(c);
    let target = mu * mu + alpha.apply(big(4) * &ac);
    (0..b).find(|&k| {
        let lhs = big(2 * a * c * c) * big(k) + &shift;
        congruent(&(&lhs * &lhs), &target, &modulus)
    })
}

/// A constructed non-emptiness witness for one D-set at `q = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaWitness {
    pub series: Series,
    pub alpha: Sign,
    pub theta: BigInt,
    pub mu: BigInt,
    pub k: u64,
    /// `t = mu^-1 alpha + k c (mod o c)`, a root of the `q = 1` congruence.
    pub t: BigInt,
}

/// Scans `theta` in `(Z/2abc^2)^*` for the a-series with the given `alpha`,
/// taking the first `theta` with `gcd(2b, theta^-1 ac - theta alpha) = 1`.
pub fn theta_witness_even(shape: &MukaiShape, alpha: Sign) -> Result<Option<ThetaWitness>> {
    let modulus = shape.two_rs();
    let n = modulus.to_u64().expect("2rs fits u64");
    let two_b = big(2 * shape.b());
    let ac = big(shape.a() * shape.c());
    for th in 1..n.max(2) {
        let theta = big(th);
        let Some(inv) = mod_inverse(&theta, &modulus) else { continue };
        let mu = modulo(&(&inv * &ac - alpha.apply(theta.clone())), &modulus);
        if !mu.gcd(&two_b).is_one() {
            continue;
        }
        return finish_witness(shape, Series::A, alpha, theta, mu).map(Some);
    }
    Ok(None)
}

fn finish_witness(shape: &MukaiShape, series: Series, alpha: Sign, theta: BigInt, mu: BigInt) -> Result<ThetaWitness> {
    let oriented = shape.oriented(series);
    if !mu.gcd(&oriented.two_rs()).is_one() {
        return Err(Error::InvariantViolation(format!("constructed mu = {mu} is not a unit mod 2rs")));
    }
    let k = quadratic_root(&oriented, &mu, alpha).ok_or_else(|| {
        Error::InvariantViolation(format!(
            "no root of the q = 1 quadratic for {oriented}, mu = {mu}, alpha = {alpha}"
        ))
    })?;
    let oc = big(oriented.b() * oriented.c());
    let t = if oc.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&mu, &oc).expect("mu is a unit");
        modulo(&(alpha.apply(inv) + big(k * oriented.c())), &oc)
    };
    Ok(ThetaWitness { series, alpha, theta, mu, k, t })
}

/// Choice of `alpha` and of `x_i != 0 mod p_i` with `-alpha x_i^2 + ac != 0`
/// for each prime `p_i | base`, combined by CRT into `x mod base`.
fn theta_residue(base: u64, ac: u64) -> (Sign, u64) {
    let primes = prime_divisors_u64(base);
    let alpha = if primes.contains(&3) && ac % 3 == 1 { Sign::Minus } else { Sign::Plus };
    let al = alpha.to_i64();
    let xs: Vec<(u64, u64)> = primes
        .iter()
        .map(|&p| {
            let x = (1..p.max(2))
                .find(|&x| {
                    let v = -al * (x * x) as i64 + ac as i64;
                    v.rem_euclid(p as i64) != 0
                })
                .expect("each prime admits such x_i");
            (p, x % p)
        })
        .collect();
    let x = (0..base.max(1))
        .find(|x| xs.iter().all(|&(p, xi)| x % p == xi))
        .unwrap_or(0);
    (alpha, x)
}

fn first_unit_lift(x: u64, base: u64, modulus: &BigInt) -> BigInt {
    if modulus.is_one() {
        return BigInt::zero();
    }
    let base = big(base.max(1));
    let mut th = big(x);
    while !th.gcd(modulus).is_one() {
        th += &base;
    }
    th
}

/// The proof construction for `ac` even, a-series: `alpha` is chosen,
/// `theta = x (mod 2b)` is lifted to a unit mod `2abc^2` and
/// `mu = theta^-1 ac - theta alpha (mod 2abc^2)`.
pub fn construct_theta_even(shape: &MukaiShape) -> Result<ThetaWitness> {
    let ac = shape.a() * shape.c();
    if ac % 2 != 0 {
        return Err(Error::PreconditionViolation(format!("ac = {ac} is odd")));
    }
    let base = 2 * shape.b();
    let (alpha, x) = theta_residue(base, ac);
    let modulus = shape.two_rs();
    let theta = first_unit_lift(x, base, &modulus);
    let inv = mod_inverse(&theta, &modulus).expect("unit");
    let mu = modulo(&(inv * big(ac) - alpha.apply(theta.clone())), &modulus);
    finish_witness(shape, Series::A, alpha, theta, mu)
}

/// The construction for `abc` odd: everything modulo `abc^2`, then `mu` is
/// lifted to the odd residue modulo `2abc^2`.
pub fn construct_theta_odd(shape: &MukaiShape) -> Result<ThetaWitness> {
    let (a, b, c) = (shape.a(), shape.b(), shape.c());
    if (a * b * c) % 2 == 0 {
        return Err(Error::PreconditionViolation(format!("abc = {} is even", a * b * c)));
    }
    let ac = a * c;
    let (alpha, x) = theta_residue(b, ac);
    let half = big(a * b) * big(c) * big(c);
    let theta = first_unit_lift(x, b, &half);
    let mut mu = if half.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&theta, &half).expect("unit");
        modulo(&(inv * big(ac) - alpha.apply(theta.clone())), &half)
    };
    if mu.is_even() {
        mu += &half;
    }
    finish_witness(shape, Series::A, alpha, theta, mu)
}

/// Non-emptiness certificate for `Div(r, s)`: a constructed witness and a
/// concrete member `d` it produces, re-verified by [`membership`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub route: Route,
    pub witness: ThetaWitness,
    pub member: DMember,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// `ac` even, a-series.
    EvenA,
    /// `bc` even, b-series via the mirrored construction.
    EvenB,
    /// `abc` odd.
    Odd,
}

pub fn certificate(shape: &MukaiShape) -> Result<Certificate> {
    let (a, b, c) = (shape.a(), shape.b(), shape.c());
    let (route, witness) = if (a * c) % 2 == 0 {
        (Route::EvenA, construct_theta_even(shape)?)
    } else if (b * c) % 2 == 0 {
        let mut w = construct_theta_even(&shape.swapped())?;
        w.series = Series::B;
        (Route::EvenB, w)
    } else {
        (Route::Odd, construct_theta_odd(shape)?)
    };
    let set = DSet::new(*shape, witness.series, witness.mu.clone(), witness.alpha)?;
    let member = generate_increasing(&set, 1, &witness.t, 1)?
        .pop()
        .expect("one member requested");
    Ok(Certificate { route, witness, member })
}

/// Where a catalogue entry came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Provenance {
    pub series: Series,
    pub alpha: Sign,
    /// Generator slot; 0 for the degenerate `(2, 0)` family.
    pub q: u64,
    /// Generator residue; absent for the `q = 0` family.
    pub t: Option<BigInt>,
    pub p: BigInt,
    pub qwit: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivRecord {
    pub d: BigInt,
    pub mu_bar: (BigInt, BigInt),
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone)]
pub struct Catalogue {
    pub shape: MukaiShape,
    pub q_max: u64,
    pub d_max: BigInt,
    pub records: Vec<DivRecord>,
    pub certificate: Certificate,
}

/// Representatives `mu <= 2rs - mu` of the units modulo `2rs`.
pub fn mu_bar_classes(shape: &MukaiShape) -> Vec<BigInt> {
    let m = shape.two_rs();
    let n = m.to_u64().expect("2rs fits u64");
    (1..n.max(2))
        .map(big)
        .filter(|mu| mu.gcd(&m).is_one() && *mu <= &m - mu)
        .collect()
}

/// Enumerates `Div(r, s)` over all classes, both series and signs,
/// `q <= q_max` and `d <= d_max`.
pub fn div_catalogue(shape: &MukaiShape, q_max: u64, d_max: &BigInt) -> Result<Catalogue> {
    let certificate = certificate(shape)?;
    let mut jobs = Vec::new();
    for mu in mu_bar_classes(shape) {
        for series in Series::BOTH {
            for alpha in Sign::BOTH {
                let set = DSet::new(*shape, series, mu.clone(), alpha)?;
                for q in 0..=q_max {
                    jobs.push((set.clone(), q));
                }
            }
        }
    }
    let found: Vec<(BigInt, BigInt, Provenance)> = jobs
        .into_par_iter()
        .map(|(set, q)| catalogue_slot(&set, q, d_max))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let two_rs = shape.two_rs();
    let mut map: BTreeMap<(BigInt, (BigInt, BigInt)), Vec<Provenance>> = BTreeMap::new();
    for (d, mu, prov) in found {
        map.entry((d, mu_bar(&mu, &two_rs))).or_default().push(prov);
    }
    let records = map
        .into_iter()
        .map(|((d, mu_bar), mut provenance)| {
            provenance.sort();
            provenance.dedup();
            DivRecord { d, mu_bar, provenance }
        })
        .collect();
    Ok(Catalogue {
        shape: *shape,
        q_max,
        d_max: d_max.clone(),
        records,
        certificate,
    })
}

fn catalogue_slot(set: &DSet, q: u64, d_max: &BigInt) -> Result<Vec<(BigInt, BigInt, Provenance)>> {
    let mut out = Vec::new();
    if q == 0 {
        if !set.has_q0_family() {
            return Ok(out);
        }
        let modulus = big(2) * set.shape.two_rs();
        let mut d = modulo(&(&set.mu * &set.mu), &modulus);
        if d.is_zero() {
            d += &modulus;
        }
        while d <= *d_max {
            out.push((
                d.clone(),
                set.mu.clone(),
                Provenance {
                    series: set.series,
                    alpha: set.alpha,
                    q: 0,
                    t: None,
                    p: big(2),
                    qwit: BigInt::zero(),
                },
            ));
            d += &modulus;
        }
        return Ok(out);
    }
    for t in generator_residues(set, q) {
        for member in generate_up_to(set, q, &t, d_max)? {
            out.push((
                member.d,
                set.mu.clone(),
                Provenance {
                    series: set.series,
                    alpha: set.alpha,
                    q,
                    t: Some(t.clone()),
                    p: member.p,
                    qwit: member.q,
                },
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r: i64, s: i64) -> MukaiShape {
        MukaiShape::split(r, s).unwrap()
    }

    fn set22() -> DSet {
        DSet::new(shape(2, 2), Series::A, 1, Sign::Plus).unwrap()
    }

    #[test]
    fn residues() {
        assert_eq!(generator_residues(&set22(), 1), vec![big(1)]);
        // a = 2 and q = 2 share a factor
        let s = DSet::new(shape(4, 2), Series::A, 1, Sign::Plus).unwrap();
        assert!(generator_residues(&s, 2).is_empty());
        // b = c = 1: modulus q^2
        let s = DSet::new(shape(3, 1), Series::A, 1, Sign::Plus).unwrap();
        for q in 1..6u64 {
            let brute: Vec<BigInt> = (0..q * q)
                .filter(|t| {
                    let v = (q * t + 3 * t * t) as i64 - 1;
                    q % 3 != 0 && v.rem_euclid((q * q) as i64) == 0
                })
                .map(big)
                .collect();
            assert_eq!(generator_residues(&s, q), brute, "q={q}");
        }
    }

    #[test]
    fn generate_examples() {
        let s = set22();
        let g = generate(&s, 1, &big(1), 0..=1).unwrap();
        let ds: Vec<BigInt> = g.iter().map(|m| m.d.clone()).collect();
        assert_eq!(ds, vec![big(17), big(161)]);
        assert_eq!(g[0].p, big(5));
        // r = s = 1: p = 1 + 2m, so m in {-1, 0} gives p^2 - 4 < 0
        let small = DSet::new(shape(1, 1), Series::A, 1, Sign::Plus).unwrap();
        assert!(generate(&small, 1, &big(0), -1..=0).unwrap().is_empty());
        assert_eq!(generate(&small, 1, &big(0), 1..=1).unwrap()[0].d, big(5));
        assert!(matches!(generate(&s, 1, &big(0), 0..=0), Err(Error::InvalidT(_))));
    }

    #[test]
    fn membership_examples() {
        let s = set22();
        let v = membership(&s, &big(17), 10);
        assert_eq!(v.witnesses()[0], DMember { d: big(17), p: big(5), q: big(1) });
        assert!(s.congruence_ok(&big(17)));
        assert!(matches!(membership(&s, &big(21), 10), Verdict::No { .. }));
    }

    #[test]
    fn quadratic_forms_agree() {
        for r in 1..=12 {
            for s in 1..=12 {
                let sh = shape(r, s);
                for mu in mu_bar_classes(&sh) {
                    for alpha in Sign::BOTH {
                        assert_eq!(
                            quadratic_root(&sh, &mu, alpha),
                            quadratic_root_completed(&sh, &mu, alpha),
                            "r={r} s={s} mu={mu}"
                        );
                    }
                }
            }
        }
        assert_eq!(quadratic_root(&shape(3, 1), &big(1), Sign::Plus), Some(0));
    }

    #[test]
    fn quadratic_solvable_when_b_divides_c2() {
        // b | c^2 with b > 1: (r, s) = (c a, c b)
        for (a, b, c) in [(1, 2, 2), (1, 3, 3), (3, 2, 4), (5, 4, 2), (1, 9, 3)] {
            let sh = MukaiShape::from_abc(a, b, c).unwrap();
            for mu in mu_bar_classes(&sh) {
                for alpha in Sign::BOTH {
                    assert!(quadratic_root(&sh, &mu, alpha).is_some(), "{sh} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn theta_constructions() {
        let w = construct_theta_even(&shape(2, 2)).unwrap();
        assert_eq!(w.series, Series::A);
        // 2b = 2 only: x = 1
        assert!(w.theta.is_odd());
        // p_i = 3 with ac = 1 mod 3 forces alpha = -1: a = 4, b = 3, c = 1
        let w = construct_theta_even(&MukaiShape::from_abc(4, 3, 1).unwrap()).unwrap();
        assert_eq!(w.alpha, Sign::Minus);
        assert!(theta_witness_even(&shape(2, 2), Sign::Plus).unwrap().is_some());
        assert!(construct_theta_odd(&shape(1, 1)).is_ok());
        let w = construct_theta_odd(&shape(3, 5)).unwrap();
        let set = DSet::new(shape(3, 5), w.series, w.mu.clone(), w.alpha).unwrap();
        assert!(!generator_residues(&set, 1).is_empty());
        assert!(matches!(construct_theta_odd(&shape(2, 3)), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn certificates_small() {
        for r in 1..=8 {
            for s in 1..=8 {
                let c = certificate(&shape(r, s)).unwrap();
                let set = DSet::new(shape(r, s), c.witness.series, c.witness.mu.clone(), c.witness.alpha).unwrap();
                assert!(membership(&set, &c.member.d, 1).is_yes());
            }
        }
    }

    #[test]
    fn catalogue_22() {
        let cat = div_catalogue(&shape(2, 2), 4, &big(200)).unwrap();
        let r17 = cat.records.iter().find(|r| r.d == big(17)).unwrap();
        assert_eq!(r17.mu_bar, (big(1), big(7)));
        assert!(r17.provenance.iter().any(|p| p.series == Series::A && p.alpha == Sign::Plus));
        assert!(cat.records.iter().any(|r| r.d == big(161)));
    }
}
