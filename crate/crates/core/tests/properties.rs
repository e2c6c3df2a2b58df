use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use k3corr::charmap::{kappa_h, kappa_image, nu_of_series};
use k3corr::criteria_x::solve_series;
use k3corr::divisorial::{div_catalogue, generate_up_to, generator_residues, mu_bar_classes, DSet};
use k3corr::{LatticeVector, MukaiShape, Series, Sign, XLattice};

/// A valid lattice from a shape, a unit index and a multiplier for `d`.
fn lattice() -> impl Strategy<Value = XLattice> {
    (1i64..=6, 1i64..=6, 0usize..64, 0i64..200).prop_map(|(r, s, i, k)| {
        let two_rs = 2 * r * s;
        let units: Vec<i64> = (1..two_rs).filter(|u| u.gcd(&two_rs) == 1).collect();
        let mu = units[i % units.len()];
        let d = mu * mu + 2 * two_rs * k;
        XLattice::new(r, s, d, mu).expect("valid by construction")
    })
}

/// A member `t H + y g`.
fn member(l: &XLattice, t: i64, y: i64) -> LatticeVector {
    LatticeVector::new(l.two_rs() * t + l.mu() * y, y)
}

fn ip(l: &XLattice, v: &LatticeVector, w: &LatticeVector) -> BigInt {
    l.inner_product(v, w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn form_is_even_symmetric_and_bilinear(
        l in lattice(),
        (t1, y1, t2, y2, t3, y3) in (-50i64..50, -50i64..50, -50i64..50, -50i64..50, -50i64..50, -50i64..50),
        (m, n) in (-9i64..9, -9i64..9),
    ) {
        let (u, v, w) = (member(&l, t1, y1), member(&l, t2, y2), member(&l, t3, y3));
        prop_assert_eq!(ip(&l, &u, &v), ip(&l, &v, &u));
        prop_assert!(ip(&l, &u, &u).is_even());
        let combo = &u.scale(&BigInt::from(m)) + &v.scale(&BigInt::from(n));
        prop_assert!(l.contains(&combo));
        prop_assert_eq!(ip(&l, &combo, &w), ip(&l, &u, &w) * m + ip(&l, &v, &w) * n);
        prop_assert!(l.contains(&-u.clone()));
    }

    #[test]
    fn generators_and_determinant(l in lattice(), (t1, y1, t2, y2) in (-30i64..30, -30i64..30, -30i64..30, -30i64..30)) {
        for g in l.generators() {
            prop_assert!(l.contains(&g));
        }
        let (h, g) = (l.h(), l.glue());
        let det = ip(&l, &h, &h) * ip(&l, &g, &g) - ip(&l, &h, &g).pow(2);
        prop_assert_eq!(&det, &-l.d());
        // any two members: -d times the squared index
        let (v, w) = (member(&l, t1, y1), member(&l, t2, y2));
        let index = BigInt::from(t1 * y2 - t2 * y1);
        let det = ip(&l, &v, &v) * ip(&l, &w, &w) - ip(&l, &v, &w).pow(2);
        prop_assert_eq!(det, -l.d() * &index * &index);
    }

    #[test]
    fn primitivity_matches_gcd(l in lattice(), (t, y) in (-60i64..60, -60i64..60), k in 1i64..6) {
        let v = member(&l, t * k, y * k);
        let expected = BigInt::from(t * k).gcd(&BigInt::from(y * k)).gcd(&(l.mu() * y * k + l.two_rs() * t * k));
        let rep = l.mu_primitivity(&v).unwrap();
        prop_assert_eq!(rep.is_primitive(), expected == BigInt::from(1));
        prop_assert_eq!(rep.content, expected);
    }

    #[test]
    fn negating_mu_reflects_y(l in lattice(), (t, y, t2, y2) in (-40i64..40, -40i64..40, -40i64..40, -40i64..40)) {
        let flip = |v: &LatticeVector| LatticeVector::new(v.x.clone(), -v.y.clone());
        let m = l.with_negated_mu();
        let (v, w) = (member(&l, t, y), member(&l, t2, y2));
        prop_assert!(m.contains(&flip(&v)));
        prop_assert_eq!(ip(&m, &flip(&v), &flip(&w)), ip(&l, &v, &w));
        let back = m.with_negated_mu();
        prop_assert_eq!(back.mu(), l.mu());
    }

    #[test]
    fn witnesses_pass_the_character_map(l in lattice()) {
        for series in Series::BOTH {
            for alpha in Sign::BOTH {
                for w in solve_series(&l, series, alpha, 30) {
                    let e = kappa_image(&l, &w.associated, series).unwrap();
                    prop_assert!(e.condition_ii_signs(l.shape().c()).contains(&w.ii_sign));
                }
            }
        }
        let two_ab = l.shape().two_ab();
        let (na, nb) = (nu_of_series(&l, Series::A), nu_of_series(&l, Series::B));
        prop_assert!(((na + nb) % &two_ab) == BigInt::from(0));
    }
}

#[test]
fn kappa_h_is_onto_z_mod_d() {
    for (r, s, d, mu) in [(2, 2, 17, 1), (1, 3, 13, 1), (3, 5, 109, 7)] {
        let l = XLattice::new(r, s, d, mu).unwrap();
        let mut seen: Vec<BigInt> = (0..d).map(|k| kappa_h(&l, &BigInt::from(k)).residue).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len() as i64, d);
        assert!(kappa_h(&l, &BigInt::from(d)).is_zero());
    }
}

#[test]
fn catalogue_is_union_of_per_q_generators() {
    let d_max = BigInt::from(3000);
    for (r, s) in [(2, 2), (1, 3), (2, 3), (3, 4)] {
        let shape = MukaiShape::split(r, s).unwrap();
        let q_max = 4;
        let cat = div_catalogue(&shape, q_max, &d_max).unwrap();
        let mut from_cat: Vec<(BigInt, BigInt)> = cat.records.iter().map(|r| (r.d.clone(), r.mu_bar.0.clone())).collect();
        from_cat.sort();
        let mut union = Vec::new();
        for mu in mu_bar_classes(&shape) {
            for series in Series::BOTH {
                for alpha in Sign::BOTH {
                    let set = DSet::new(shape, series, mu.clone(), alpha).unwrap();
                    let key = k3corr::lattice::mu_bar(&mu, &shape.two_rs()).0;
                    if set.has_q0_family() {
                        // q = 0 with p = 2: the whole congruence class
                        let modulus = shape.two_rs() * 2;
                        let first = (&mu * &mu).mod_floor(&modulus);
                        let mut d = if first == BigInt::from(0) { modulus.clone() } else { first };
                        while d <= d_max {
                            union.push((d.clone(), key.clone()));
                            d += &modulus;
                        }
                    }
                    for q in 1..=q_max {
                        for t in generator_residues(&set, q) {
                            for m in generate_up_to(&set, q, &t, &d_max).unwrap() {
                                union.push((m.d, key.clone()));
                            }
                        }
                    }
                }
            }
        }
        union.sort();
        union.dedup();
        assert_eq!(from_cat, union, "({r}, {s})");
    }
}

#[test]
fn x_side_yes_carries_over_to_y_side() {
    let o = k3corr::selftest::duality(3, 200, 200);
    assert!(o.passed, "{}", o.detail);
    assert!(o.checked > 0);
}
