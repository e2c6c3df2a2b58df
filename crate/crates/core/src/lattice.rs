//! Rank-2 polarized lattices `(N(X), H)` with `H^2 = 2rs` and `H . N(X) = Z`.
//!
//! A lattice is fixed by the shape `(r, s)`, the discriminant `d = -det N(X)`
//! and the glue residue `mu mod 2rs`. Vectors are kept in numerator form:
//! the pair `(x, y)` stands for `z = (x H + y delta) / 2rs`, where `delta`
//! spans the orthogonal complement of `H` and `delta^2 = -2rsd`. A pair is a
//! lattice member exactly when `x = mu y (mod 2rs)`, and then
//! `z^2 = (x^2 - d y^2) / 2rs`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{big, congruent, divides, gcd3, modulo, prime_divisors};
use crate::error::{Error, Result};

/// A choice of sign, used for `alpha = +-1` and for the `+-` of the
/// discriminant congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.to_i64())
    }

    /// Applies the sign to `value`.
    pub fn apply(self, value: BigInt) -> BigInt {
        match self {
            Sign::Plus => value,
            Sign::Minus => -value,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Which factor of the Mukai splitting carries the divisibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    A,
    B,
}

impl Series {
    pub const BOTH: [Series; 2] = [Series::A, Series::B];

    pub fn other(self) -> Series {
        match self {
            Series::A => Series::B,
            Series::B => Series::A,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::A => "a",
            Series::B => "b",
        })
    }
}

/// The numeric skeleton of an isotropic Mukai vector `(r, H, s)`:
/// `c = gcd(r, s)`, `a = r / c`, `b = s / c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MukaiShape {
    r: u64,
    s: u64,
    c: u64,
    a: u64,
    b: u64,
}

impl MukaiShape {
    /// Splits `(r, s)` into `(c, a, b)`.
    pub fn split(r: i64, s: i64) -> Result<Self> {
        if r < 1 || s < 1 {
            return Err(Error::InvalidInput(format!(
                "r and s must be positive, got r={r}, s={s}"
            )));
        }
        let (r, s) = (r as u64, s as u64);
        let c = r.gcd(&s);
        Ok(MukaiShape {
            r,
            s,
            c,
            a: r / c,
            b: s / c,
        })
    }

    /// Builds the shape with `r = ac`, `s = bc`. Requires `gcd(a, b) = 1`.
    pub fn from_abc(a: i64, b: i64, c: i64) -> Result<Self> {
        if a < 1 || b < 1 || c < 1 {
            return Err(Error::InvalidInput(format!(
                "a, b, c must be positive, got a={a}, b={b}, c={c}"
            )));
        }
        let (a, b, c) = (a as u64, b as u64, c as u64);
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidInput(format!("gcd(a, b) = {} != 1", a.gcd(&b))));
        }
        let r = a.checked_mul(c);
        let s = b.checked_mul(c);
        match (r, s) {
            (Some(r), Some(s)) => Ok(MukaiShape { r, s, c, a, b }),
            _ => Err(Error::InvalidInput("r = ac or s = bc overflows u64".into())),
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }

    /// The shape with `r` and `s` exchanged, i.e. `a` and `b` exchanged.
    /// Every b-series statement is the a-series statement of the swapped shape.
    pub fn swapped(&self) -> Self {
        MukaiShape {
            r: self.s,
            s: self.r,
            c: self.c,
            a: self.b,
            b: self.a,
        }
    }

    /// The shape in which `series` plays the role of the a-series.
    pub fn oriented(&self, series: Series) -> Self {
        match series {
            Series::A => *self,
            Series::B => self.swapped(),
        }
    }

    /// `(main, other)` factors for a series: `(a, b)` for the a-series.
    pub fn series_factors(&self, series: Series) -> (u64, u64) {
        match series {
            Series::A => (self.a, self.b),
            Series::B => (self.b, self.a),
        }
    }

    /// `2rs = 2abc^2`, the polarization degree.
    pub fn two_rs(&self) -> BigInt {
        big(2) * big(self.r) * big(self.s)
    }

    /// `2ab`, the degree of the canonical nef class on the moduli space.
    pub fn two_ab(&self) -> BigInt {
        big(2) * big(self.a) * big(self.b)
    }

    /// `2abc`.
    pub fn two_abc(&self) -> BigInt {
        self.two_ab() * big(self.c)
    }
}

impl fmt::Display for MukaiShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r={}, s={}; c={}, a={}, b={})",
            self.r, self.s, self.c, self.a, self.b
        )
    }
}

/// Free-function form of [`MukaiShape::split`].
pub fn mukai_split(r: i64, s: i64) -> Result<MukaiShape> {
    MukaiShape::split(r, s)
}

/// The residue `m(a, b) mod 2ab` with `m = -1 (mod 2a)` and `m = 1 (mod 2b)`.
///
/// Returned in `[0, 2ab)`.
pub fn mukai_m(a: u64, b: u64) -> Result<BigInt> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("a and b must be positive".into()));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::InvalidInput(format!("gcd({a}, {b}) != 1")));
    }
    let (a, b) = (big(a), big(b));
    // m = 1 + 2b k with b k = -1 (mod a)
    let k = match crate::arith::mod_inverse(&b, &a) {
        Some(inv) => -inv,
        None => unreachable!("coprime"),
    };
    let modulus = big(2) * &a * &b;
    Ok(modulo(&(BigInt::one() + big(2) * &b * k), &modulus))
}

/// An integer pair `(x, y)` in numerator form, `z = (x H + y delta) / 2rs`
/// (or `(x h + y delta_1) / 2ab` on the moduli side).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticeVector {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticeVector {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        LatticeVector::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    /// The representative of `{v, -v}` that is lexicographically largest.
    pub fn sign_normalized(&self) -> Self {
        let neg = -self.clone();
        if neg > *self {
            neg
        } else {
            self.clone()
        }
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector {
            x: -self.x,
            y: -self.y,
        }
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Result of a `mu`-primitivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityReport {
    /// `gcd(x, y, (x - mu y) / 2rs)`; the vector is primitive iff this is 1.
    pub content: BigInt,
    /// Every prime `k` with `k | (x, y)` and `x = mu y (mod 2rs k)`.
    pub divisors: Vec<BigInt>,
    /// For vectors of square `2ab`: whether every listed `k` has `k^2 | ab`.
    pub square_divides_ab: Option<bool>,
}

impl PrimitivityReport {
    pub fn is_primitive(&self) -> bool {
        self.divisors.is_empty()
    }
}

/// Rank-2 polarized lattice `(N(X), H)` with invariants `(d, +-mu)`.
#[derive(Debug, Clone)]
pub struct XLattice {
    shape: MukaiShape,
    d: BigInt,
    mu: BigInt,
    two_rs: BigInt,
}

impl XLattice {
    /// Validates `(r, s, d, mu)`; `mu` may be any integer representative.
    pub fn new(r: i64, s: i64, d: impl Into<BigInt>, mu: impl Into<BigInt>) -> Result<Self> {
        XLattice::with_shape(MukaiShape::split(r, s)?, d.into(), mu.into())
    }

    pub fn with_shape(shape: MukaiShape, d: BigInt, mu: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidD(format!("d must be positive, got {d}")));
        }
        let two_rs = shape.two_rs();
        let mu = modulo(&mu, &two_rs);
        if !mu.gcd(&two_rs).is_one() {
            return Err(Error::InvalidMu(format!(
                "gcd(mu, 2rs) = gcd({mu}, {two_rs}) != 1"
            )));
        }
        if !d.gcd(&two_rs).is_one() {
            return Err(Error::InvalidD(format!(
                "gcd(d, 2rs) = gcd({d}, {two_rs}) != 1"
            )));
        }
        let four_rs = big(2) * &two_rs;
        if !congruent(&(&mu * &mu), &d, &four_rs) {
            return Err(Error::IncompatibleInvariants(format!(
                "mu^2 != d mod 4rs (mu={mu}, d={d}, 4rs={four_rs})"
            )));
        }
        Ok(XLattice {
            shape,
            d,
            mu,
            two_rs,
        })
    }

    pub fn shape(&self) -> &MukaiShape {
        &self.shape
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    /// The stored representative of `mu`, in `[0, 2rs)`.
    pub fn mu(&self) -> &BigInt {
        &self.mu
    }
    pub fn two_rs(&self) -> &BigInt {
        &self.two_rs
    }

    /// `{mu, -mu}` as `(smaller, larger)` residues in `[0, 2rs)`.
    pub fn mu_bar(&self) -> (BigInt, BigInt) {
        mu_bar(&self.mu, &self.two_rs)
    }

    /// The same lattice presented with `-delta`, i.e. invariant `-mu`.
    pub fn with_negated_mu(&self) -> XLattice {
        XLattice {
            shape: self.shape,
            d: self.d.clone(),
            mu: modulo(&-&self.mu, &self.two_rs),
            two_rs: self.two_rs.clone(),
        }
    }

    /// The polarization `H = (2rs, 0)`.
    pub fn h(&self) -> LatticeVector {
        LatticeVector::new(self.two_rs.clone(), 0)
    }

    /// `delta = (0, 2rs)`, spanning `H^perp`.
    pub fn delta(&self) -> LatticeVector {
        LatticeVector::new(0, self.two_rs.clone())
    }

    /// The glue vector `(mu H + delta) / 2rs = (mu, 1)`.
    pub fn glue(&self) -> LatticeVector {
        LatticeVector::new(self.mu.clone(), 1)
    }

    /// The three generators `H`, `delta`, `(mu H + delta)/2rs`.
    pub fn generators(&self) -> [LatticeVector; 3] {
        [self.h(), self.delta(), self.glue()]
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        congruent(&v.x, &(&self.mu * &v.y), &self.two_rs)
    }

    fn require_member(&self, v: &LatticeVector) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidVector(format!(
                "{v} is not in N(X): x != mu y mod 2rs (mu={}, 2rs={})",
                self.mu, self.two_rs
            )))
        }
    }

    /// `v . w = (x_v x_w - d y_v y_w) / 2rs`.
    pub fn inner_product(&self, v: &LatticeVector, w: &LatticeVector) -> Result<BigInt> {
        self.require_member(v)?;
        self.require_member(w)?;
        let num = &v.x * &w.x - &self.d * &v.y * &w.y;
        let (q, rem) = num.div_rem(&self.two_rs);
        if !rem.is_zero() {
            return Err(Error::Internal(format!(
                "non-integral product {num}/{} for members {v}, {w}",
                self.two_rs
            )));
        }
        Ok(q)
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<BigInt> {
        self.inner_product(v, v)
    }

    /// `gamma(v)`: the positive generator of `v . N(X)`.
    pub fn gamma_invariant(&self, v: &LatticeVector) -> Result<BigInt> {
        if v.is_zero() {
            return Err(Error::InvalidVector("gamma of the zero vector".into()));
        }
        self.require_member(v)?;
        let mut g = BigInt::zero();
        for gen in self.generators() {
            g = g.gcd(&self.inner_product(v, &gen)?);
        }
        Ok(g)
    }

    /// Lists the primes `k` for which `v / k` is still a lattice vector.
    pub fn mu_primitivity(&self, v: &LatticeVector) -> Result<PrimitivityReport> {
        self.require_member(v)?;
        let shift = (&v.x - &self.mu * &v.y) / &self.two_rs;
        let content = gcd3(&v.x, &v.y, &shift);
        let mut divisors = Vec::new();
        if !content.is_one() {
            for k in prime_divisors(&content) {
                let deeper = &self.two_rs * &k;
                if divides(&k, &v.x)
                    && divides(&k, &v.y)
                    && congruent(&v.x, &(&self.mu * &v.y), &deeper)
                {
                    divisors.push(k);
                }
            }
        }
        let ab = big(self.shape.a()) * big(self.shape.b());
        let square_divides_ab = if self.norm(v)? == self.shape.two_ab() {
            Some(divisors.iter().all(|k| divides(&(k * k), &ab)))
        } else {
            None
        };
        Ok(PrimitivityReport {
            content,
            divisors,
            square_divides_ab,
        })
    }
}

impl PartialEq for XLattice {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.d == other.d && self.mu_bar() == other.mu_bar()
    }
}

impl Eq for XLattice {}

impl fmt::Display for XLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m1, _) = self.mu_bar();
        write!(
            f,
            "N(X) r={} s={} d={} mu=+-{} (mod {})",
            self.shape.r(),
            self.shape.s(),
            self.d,
            m1,
            self.two_rs
        )
    }
}

/// `{mu, -mu} mod m` as `(smaller, larger)`.
pub fn mu_bar(mu: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let p = modulo(mu, m);
    let n = modulo(&-mu, m);
    if p <= n {
        (p, n)
    } else {
        (n, p)
    }
}

/// Free-function forms mirroring the operation names.
pub fn make_x_lattice(r: i64, s: i64, d: impl Into<BigInt>, mu: impl Into<BigInt>) -> Result<XLattice> {
    XLattice::new(r, s, d, mu)
}

pub fn inner_product(l: &XLattice, v: &LatticeVector, w: &LatticeVector) -> Result<BigInt> {
    l.inner_product(v, w)
}

pub fn gamma_invariant(l: &XLattice, v: &LatticeVector) -> Result<BigInt> {
    l.gamma_invariant(v)
}

pub fn mu_primitivity(l: &XLattice, v: &LatticeVector) -> Result<PrimitivityReport> {
    l.mu_primitivity(v)
}
