//! Scalar aliases and the handful of exact-arithmetic helpers the rest of the crate leans on.

use std::cmp::Ordering;

use dashu_base::{Gcd, Sign};

pub use dashu_int::IBig as Int;
pub use dashu_ratio::RBig as Rational;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_parts_signed(Int::from(num), Int::from(den))
}

pub fn sign(x: &Int) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.sign() == Sign::Negative {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

pub fn rational_sign(x: &Rational) -> Ordering {
    sign(x.numerator())
}

/// Non-negative gcd; zero when every entry is zero.
pub fn gcd(a: &Int, b: &Int) -> Int {
    if a.is_zero() {
        return abs(b);
    }
    if b.is_zero() {
        return abs(a);
    }
    Int::from(a.gcd(b))
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    let mut g = Int::ZERO;
    for x in xs {
        if !x.is_zero() {
            g = gcd(&g, x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

pub fn abs(x: &Int) -> Int {
    if x.sign() == Sign::Negative { -x } else { x.clone() }
}

/// Floor division, `b != 0`.
pub fn div_floor(a: &Int, b: &Int) -> Int {
    let q = a / b;
    let r = a - &q * b;
    if !r.is_zero() && (sign(&r) != sign(b)) { q - 1 } else { q }
}

/// `RBig` has no `Sum` impl.
pub fn rsum(xs: impl IntoIterator<Item = Rational>) -> Rational {
    xs.into_iter().fold(Rational::ZERO, |a, b| a + b)
}

pub fn to_i64(x: &Int) -> Option<i64> {
    i64::try_from(x).ok()
}

pub fn to_rationals(xs: &[Int]) -> Vec<Rational> {
    xs.iter().map(|x| Rational::from(x.clone())).collect()
}

/// Clears denominators and returns the primitive integer vector on the same ray (or the zero vector).
pub fn primitive_from_rationals(xs: &[Rational]) -> Vec<Int> {
    let mut lcm = Int::ONE;
    for x in xs {
        let d = Int::from(x.denominator().clone());
        let g = gcd(&lcm, &d);
        lcm = &lcm * &d / g;
    }
    let scaled: Vec<Int> = xs
        .iter()
        .map(|x| x.numerator() * (&lcm / Int::from(x.denominator().clone())))
        .collect();
    let g = gcd_all(&scaled);
    if g.is_zero() { scaled } else { scaled.into_iter().map(|x| x / &g).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_zero_list_is_zero() {
        assert_eq!(gcd_all(&ints(&[0, 0])), int(0));
        assert_eq!(gcd_all(&ints(&[0, -4, 6])), int(2));
    }

    #[test]
    fn floor_division_rounds_down() {
        assert_eq!(div_floor(&int(-7), &int(2)), int(-4));
        assert_eq!(div_floor(&int(7), &int(2)), int(3));
        assert_eq!(div_floor(&int(7), &int(-2)), int(-4));
        assert_eq!(div_floor(&int(-6), &int(3)), int(-2));
    }

    #[test]
    fn primitive_from_rationals_clears_denominators() {
        let v = [rational(1, 2), rational(-3, 4), rational(0, 1)];
        assert_eq!(primitive_from_rationals(&v), ints(&[2, -3, 0]));
    }
}
