//! Brute-force references for the decision engines.
//!
//! Nothing here calls into the rest of the crate: congruences, lifts and
//! primitivity are written out again on `i128`, straight from the
//! definitions, so that a misreading shared by the engines shows up as a
//! disagreement. Intended for desk-scale inputs only.

use num_integer::{Integer, Roots};

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

fn primes_of(mut n: i128) -> Vec<i128> {
    n = n.abs();
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The `k in [0, e)` scan for `root + modulus k` squaring to `d` mod `2 modulus e`.
fn lift(root: i128, modulus: i128, e: i128, d: i128) -> i128 {
    let hits: Vec<i128> = (0..e)
        .map(|k| root + modulus * k)
        .filter(|m| (m * m - d).rem_euclid(2 * modulus * e) == 0)
        .collect();
    assert_eq!(hits.len(), 1, "lift of {root} mod {modulus} by {e}");
    hits[0]
}

/// `(x, y)` with `|y| <= y_bound` solving `x^2 - d y^2 = 4a^2b^2c^2` and the
/// four conditions of the X-side criterion, read literally.
pub fn brute_solutions_x(r: i128, s: i128, d: i128, mu: i128, y_bound: i128) -> Vec<(i128, i128)> {
    let c = r.gcd(&s);
    let (a, b) = (r / c, s / c);
    let two_rs = 2 * r * s;
    let mu_a = lift(mu, two_rs, a, d);
    let mu_b = lift(mu, two_rs, b, d);
    let n = 4 * a * a * b * b * c * c;
    let mut out = Vec::new();
    for y in -y_bound..=y_bound {
        let Some(x0) = isqrt_exact(n + d * y * y) else { continue };
        let xs: Vec<i128> = if x0 == 0 { vec![0] } else { vec![x0, -x0] };
        for x in xs {
            // (i)
            if (x - mu * y).rem_euclid(two_rs) != 0 {
                continue;
            }
            // (ii)
            let e = 2 * a * b * c;
            if (x - e).rem_euclid(d) != 0 && (x + e).rem_euclid(d) != 0 {
                continue;
            }
            // (iii)
            let series_a = x % b == 0 && y % b == 0 && (x - mu_a * y).rem_euclid(two_rs * a) == 0;
            let series_b = x % a == 0 && y % a == 0 && (x - mu_b * y).rem_euclid(two_rs * b) == 0;
            if !series_a && !series_b {
                continue;
            }
            // (iv)
            if x.gcd(&y).gcd(&((x - mu * y) / two_rs)) != 1 {
                continue;
            }
            out.push((x, y));
        }
    }
    out
}

/// The Y-side version with `nu mod 2ab` and the lifts to `2a^2b`, `2ab^2`.
pub fn brute_solutions_y(a: i128, b: i128, c: i128, d: i128, nu: i128, y_bound: i128) -> Vec<(i128, i128)> {
    let two_ab = 2 * a * b;
    let nu_a = lift(nu, two_ab, a, d);
    let nu_b = lift(nu, two_ab, b, d);
    let n = 4 * a * a * b * b * c * c;
    let mut out = Vec::new();
    for y in -y_bound..=y_bound {
        let Some(x0) = isqrt_exact(n + d * y * y) else { continue };
        let xs: Vec<i128> = if x0 == 0 { vec![0] } else { vec![x0, -x0] };
        for x in xs {
            if (x - nu * y).rem_euclid(two_ab) != 0 {
                continue;
            }
            let e = 2 * a * b * c;
            if (x - e).rem_euclid(d) != 0 && (x + e).rem_euclid(d) != 0 {
                continue;
            }
            let series_a = x % b == 0 && y % b == 0 && (x - nu_a * y).rem_euclid(2 * a * a * b) == 0;
            let series_b = x % a == 0 && y % a == 0 && (x - nu_b * y).rem_euclid(2 * a * b * b) == 0;
            if !series_a && !series_b {
                continue;
            }
            if x.gcd(&y).gcd(&((x - nu * y) / two_ab)) != 1 {
                continue;
            }
            out.push((x, y));
        }
    }
    out
}

/// Whether `(p, q)` certifies `d` for the a-series set with parameters
/// `(a, b, c, mu, alpha)`; the b-series is the call with `a`, `b` swapped.
fn dset_witness(a: i128, b: i128, c: i128, mu: i128, alpha: i128, d: i128, p: i128, q: i128) -> bool {
    if p * p - d * q * q != 4 * a * c * alpha {
        return false;
    }
    let diff = p - mu * q;
    if diff.rem_euclid(2 * a * c) != 0 {
        return false;
    }
    if a.gcd(&p).gcd(&q) != 1 {
        return false;
    }
    primes_of(b)
        .into_iter()
        .filter(|l| b % (l * l) == 0)
        .all(|l| diff.rem_euclid(2 * a * c * l) != 0)
}

/// The `d <= d_max` in the set, found by trying every `1 <= |q| <= q_bound`.
/// `series_b` selects the b-series.
pub fn brute_dset(r: i128, s: i128, series_b: bool, mu: i128, alpha: i128, d_max: i128, q_bound: i128) -> Vec<i128> {
    let c = r.gcd(&s);
    let (mut a, mut b) = (r / c, s / c);
    if series_b {
        std::mem::swap(&mut a, &mut b);
    }
    let m = 4 * a * b * c * c;
    let mut out = Vec::new();
    for d in 1..=d_max {
        if (d - mu * mu).rem_euclid(m) != 0 {
            continue;
        }
        let found = (1..=q_bound).any(|q| {
            [q, -q].into_iter().any(|q| {
                isqrt_exact(4 * a * c * alpha + d * q * q)
                    .map(|p| dset_witness(a, b, c, mu, alpha, d, p, q) || dset_witness(a, b, c, mu, alpha, d, -p, q))
                    .unwrap_or(false)
            })
        });
        if found {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_examples() {
        let v = brute_solutions_x(2, 2, 17, 1, 10);
        assert!(v.contains(&(21, 5)) && v.contains(&(-21, -5)));
        // y = 0 slice: only (+-2abc, 0)
        for (x, y) in brute_solutions_x(2, 2, 17, 1, 0) {
            assert_eq!((x.abs(), y), (4, 0));
        }
        assert_eq!(brute_solutions_x(1, 1, 5, 1, 0), vec![(2, 0), (-2, 0)]);
    }

    #[test]
    fn y_examples() {
        let v = brute_solutions_y(1, 1, 2, 17, 1, 10);
        assert!(v.contains(&(21, 5)) && v.contains(&(-21, -5)));
    }

    #[test]
    fn dset_examples() {
        let t = brute_dset(2, 2, false, 1, 1, 200, 6);
        assert!(t.contains(&17) && t.contains(&161));
        assert!(t.iter().all(|d| (d - 1) % 16 == 0));
    }
}
