use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Moduli up to this size are searched exhaustively alongside the gcd test.
pub(crate) const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Whether `b ≡ z·b' (mod m)` for some unit `z`, with the first such `z ∈ [0, m)`.
///
/// `m = 0` is the integers themselves, whose units are `±1`. The answer is the gcd
/// criterion `gcd(b, m) = gcd(b', m)`; for moduli within the enumeration limit the
/// units are also enumerated and the two answers are required to agree.
pub fn unit_orbit_eq(b: &BigInt, b_prime: &BigInt, m: &BigInt) -> (bool, Option<BigInt>) {
    assert!(!m.is_negative(), "modulus must be nonnegative");
    if m.is_zero() {
        return if b == b_prime {
            (true, Some(BigInt::one()))
        } else if *b == -b_prime {
            (true, Some(BigInt::from(-1)))
        } else {
            (false, None)
        };
    }
    let holds = b.gcd(m) == b_prime.gcd(m);
    if m.to_u64().is_some_and(|x| x <= ENUMERATION_LIMIT) {
        let found = enumerate_unit(b, b_prime, m);
        assert_eq!(found.is_some(), holds, "unit search disagrees with the gcd test");
        return (holds, found);
    }
    if !holds {
        return (false, None);
    }
    let z = constructive_unit(b, b_prime, m);
    debug_assert!((b - &z * b_prime).mod_floor(m).is_zero());
    (true, Some(z))
}

fn enumerate_unit(b: &BigInt, b_prime: &BigInt, m: &BigInt) -> Option<BigInt> {
    let mut z = BigInt::zero();
    while &z < m {
        if z.gcd(m).is_one() && (b - &z * b_prime).mod_floor(m).is_zero() {
            return Some(z);
        }
        z += 1;
    }
    None
}

/// Solves `b = z·b'` modulo `m / g` (both sides are units there) and lifts to a unit mod `m`.
fn constructive_unit(b: &BigInt, b_prime: &BigInt, m: &BigInt) -> BigInt {
    let g = b.gcd(m);
    let m1 = m / &g;
    if m1.is_one() {
        return lift_unit(&BigInt::zero(), &m1, m);
    }
    let (b1, bp1) = ((b / &g).mod_floor(&m1), (b_prime / &g).mod_floor(&m1));
    let inv = bp1.extended_gcd(&m1).x.mod_floor(&m1);
    lift_unit(&(b1 * inv).mod_floor(&m1), &m1, m)
}

/// A unit modulo `m` congruent to the unit `u` modulo `step`, where `step | m`.
pub(crate) fn lift_unit(u: &BigInt, step: &BigInt, m: &BigInt) -> BigInt {
    let mut z = u.clone();
    while !z.gcd(m).is_one() {
        z += step;
    }
    z.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(unit_orbit_eq(&b(1), &b(2), &b(3)), (true, Some(b(2))));
        assert_eq!(unit_orbit_eq(&b(1), &b(3), &b(3)), (false, None));
        assert_eq!(unit_orbit_eq(&b(0), &b(0), &b(7)), (true, Some(b(1))));
    }

    #[test]
    fn infinite_cyclic_and_trivial_moduli() {
        assert_eq!(unit_orbit_eq(&b(5), &b(-5), &b(0)), (true, Some(b(-1))));
        assert_eq!(unit_orbit_eq(&b(5), &b(4), &b(0)), (false, None));
        assert!(unit_orbit_eq(&b(5), &b(4), &b(1)).0);
    }

    #[test]
    fn large_modulus_uses_construction() {
        let m = BigInt::from(10u64.pow(12) + 39);
        let (ok, z) = unit_orbit_eq(&b(6), &b(10), &(&m * 2));
        assert!(ok);
        let z = z.unwrap();
        assert!(z.gcd(&(&m * 2)).is_one());
        assert!((b(6) - &z * b(10)).mod_floor(&(&m * 2)).is_zero());
        assert!(!unit_orbit_eq(&b(2), &b(3), &(&m * 2)).0);
    }
}
