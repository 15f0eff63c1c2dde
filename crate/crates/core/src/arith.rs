//! Integer helpers: gcd/lcm and the Chinese-remainder meet of two arithmetic
//! progressions.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `None` on overflow.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// The common part of two progressions `{a + i*s}` and `{b + j*t}` (i, j ≥ 0).
///
/// Returns the least common element together with the period `lcm(s, t)` of
/// the common part, or `None` when the progressions are incompatible modulo
/// `gcd(s, t)`.
pub fn progression_meet(a: u64, s: u64, b: u64, t: u64) -> Option<(u64, u64)> {
    assert!(s >= 1 && t >= 1, "strides must be positive");
    let g = gcd(s, t);
    let (ai, bi, si, ti) = (a as i128, b as i128, s as i128, t as i128);
    if (bi - ai).rem_euclid(g as i128) != 0 {
        return None;
    }
    let l = (si / g as i128) * ti;
    // a + s*k ≡ b (mod t)  =>  k ≡ ((b-a)/g) * inv(s/g) (mod t/g)
    let (_, inv, _) = ext_gcd(si / g as i128, ti / g as i128);
    let tg = ti / g as i128;
    let k = ((((bi - ai) / g as i128) % tg) * (inv % tg)).rem_euclid(tg);
    let mut c = ai + si * k;
    let floor = ai.max(bi);
    if c < floor {
        let steps = (floor - c + l - 1) / l;
        c += steps * l;
    }
    Some((u64::try_from(c).ok()?, u64::try_from(l).ok()?))
}

/// Smallest `i ≥ 0` with `start + i*stride ≥ bound`.
pub fn first_index_at_least(start: u64, stride: u64, bound: u64) -> u64 {
    if bound <= start {
        0
    } else {
        (bound - start).div_ceil(stride)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_meet(a: u64, s: u64, b: u64, t: u64, limit: u64) -> Vec<u64> {
        (1..=limit)
            .filter(|&x| x >= a && (x - a).is_multiple_of(s) && x >= b && (x - b).is_multiple_of(t))
            .collect()
    }

    #[test]
    fn meet_of_odd_and_one_mod_three() {
        assert_eq!(progression_meet(1, 2, 1, 3), Some((1, 6)));
        let brute = brute_meet(1, 2, 1, 3, 1000);
        assert!(brute.iter().all(|x| x % 6 == 1));
        assert_eq!(brute.len(), 167);
    }

    #[test]
    fn even_and_odd_never_meet() {
        assert_eq!(progression_meet(2, 2, 1, 2), None);
        assert!(brute_meet(2, 2, 1, 2, 1000).is_empty());
    }

    #[test]
    fn meet_respects_both_starts() {
        // 7 + 5i and 3 + 2j: common residue 7 mod 10, but start must reach 7.
        assert_eq!(progression_meet(7, 5, 3, 2), Some((7, 10)));
        assert_eq!(progression_meet(2, 5, 40, 3), Some((52, 15)));
    }

    #[test]
    fn meet_agrees_with_brute_force() {
        for a in 1..12 {
            for s in 1..7 {
                for b in 1..12 {
                    for t in 1..7 {
                        let brute = brute_meet(a, s, b, t, 400);
                        match progression_meet(a, s, b, t) {
                            None => assert!(brute.is_empty(), "{a} {s} {b} {t}"),
                            Some((c, l)) => {
                                assert_eq!(brute[0], c);
                                assert_eq!(l, lcm(s, t).unwrap());
                                assert!(brute.windows(2).all(|w| w[1] - w[0] == l));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn first_index() {
        assert_eq!(first_index_at_least(3, 2, 1), 0);
        assert_eq!(first_index_at_least(3, 2, 4), 1);
        assert_eq!(first_index_at_least(3, 2, 5), 1);
        assert_eq!(first_index_at_least(3, 2, 6), 2);
    }
}
