//! Scalar types and exact helpers on arbitrary-precision rationals.
//!
//! `Rat` values are kept reduced with positive denominator by construction
//! (`Ratio::new` normalizes), so equality and ordering are the mathematical
//! ones. Floating point enters only through the `*_approx` functions, whose
//! results are advisory.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

/// `Int` from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// `Rat` from a machine integer.
pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// `Rat` p/q from machine integers. Panics if `q == 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// Parses "p/q" or "p" with optional sign; rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: Int = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {num_str:?}")))?;
    let den: Int = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid integer {d:?}")))?,
        None => Int::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Exact floor of a rational as an integer.
pub fn floor_rat(x: &Rat) -> Int {
    x.floor().to_integer()
}

/// Exact ceiling of a rational as an integer.
pub fn ceil_rat(x: &Rat) -> Int {
    x.ceil().to_integer()
}

/// x^k for rationals, exact.
pub fn pow_rat(x: &Rat, k: usize) -> Rat {
    num_traits::pow(x.clone(), k)
}

/// x^k for integers, exact.
pub fn pow_int(x: &Int, k: usize) -> Int {
    num_traits::pow(x.clone(), k)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(x: &Int) -> Int {
    debug_assert!(!x.is_negative());
    x.sqrt()
}

/// Floor of the square root of a nonnegative rational.
///
/// floor(sqrt(x)) = isqrt(floor(x)): isqrt(floor x) <= sqrt(x) is clear, and
/// (isqrt(floor x) + 1)^2 >= floor(x) + 1 > x.
pub fn floor_sqrt_rat(x: &Rat) -> Int {
    debug_assert!(!x.is_negative());
    isqrt(&floor_rat(x))
}

/// floor(alpha + sqrt(rho)) for rational alpha and rational rho >= 0,
/// computed exactly (no rounding of the irrational square root).
pub fn floor_add_sqrt(alpha: &Rat, rho: &Rat) -> Int {
    debug_assert!(!rho.is_negative());
    let s0 = floor_sqrt_rat(rho);
    // The answer is floor(alpha) + s0 or one more.
    let k = floor_rat(alpha) + &s0;
    let t = Rat::from_integer(&k + 1i32) - alpha;
    if t.is_positive() && &t * &t > *rho {
        k
    } else {
        k + 1i32
    }
}

/// ceil(alpha - sqrt(rho)) for rational alpha and rational rho >= 0.
pub fn ceil_sub_sqrt(alpha: &Rat, rho: &Rat) -> Int {
    -floor_add_sqrt(&-alpha, rho)
}

/// Smallest dyadic `m / 2^10` with `(m / 2^10)^n >= x`, for positive `x`;
/// a near-tight rational upper bound for `x^(1/n)`, computed exactly.
pub fn dyadic_root_upper(x: &Rat, n: usize) -> Rat {
    assert!(x.is_positive() && n > 0);
    let scale: Int = Int::one() << 10;
    // m = ceil(u^(1/n)) for u = x * 2^(10 n): the integer root of ceil(u)
    // is either m - 1 or m, and one exact power comparison settles it.
    let u = x * Rat::from_integer(pow_int(&scale, n));
    let r = ceil_rat(&u).nth_root(n as u32);
    let m = if Rat::from_integer(pow_int(&r, n)) >= u { r } else { r + 1 };
    debug_assert!(Rat::from_integer(pow_int(&m, n)) >= u);
    debug_assert!(Rat::from_integer(pow_int(&(&m - 1), n)) < u);
    Rat::new(m, scale)
}

/// gcd of a slice of integers (nonnegative; 0 for the empty/zero slice).
pub fn gcd_all(xs: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in xs {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn ln_int_approx(x: &Int) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 512 {
        x.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top: Int = x >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn big_ratio_to_f64(num: &Int, den: &Int) -> f64 {
    debug_assert!(den.is_positive());
    if num.is_zero() {
        return 0.0;
    }
    let sign = if num.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let a = num.abs();
    let na = a.bits();
    let nb = den.bits();
    let top = na.max(nb);
    let (a, b) = if top > 512 {
        let s = top - 512;
        (&a >> s, den >> s)
    } else {
        (a, den.clone())
    };
    if b.is_zero() {
        // den underflowed the shift, so |num/den| is astronomically large.
        return sign * f64::INFINITY;
    }
    let fa = a.to_f64().unwrap_or(f64::INFINITY);
    let fb = b.to_f64().unwrap_or(f64::INFINITY);
    sign * fa / fb
}

/// Advisory natural log of a positive rational. Accurate to well over 12
/// significant digits, including near 1 where the difference is computed
/// before the log.
pub fn ln_rat_approx(x: &Rat) -> f64 {
    debug_assert!(x.is_positive());
    let p = x.numer();
    let q = x.denom();
    let two_q: Int = q * 2i32;
    let two_p: Int = p * 2i32;
    if *p < two_q && *q < two_p {
        // 1/2 < x < 2: guard against cancellation.
        let diff: Int = p - q;
        let t = big_ratio_to_f64(&diff, q);
        t.ln_1p()
    } else {
        ln_int_approx(p) - ln_int_approx(q)
    }
}

/// Advisory float value of a rational, saturating to infinity when the
/// magnitude leaves f64 range.
pub fn rat_approx(x: &Rat) -> f64 {
    big_ratio_to_f64(x.numer(), x.denom())
}

/// Formats an advisory float with 12 significant digits, deterministically.
pub fn format_approx(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rat("3/4").unwrap(), rat_frac(3, 4));
        assert_eq!(parse_rat("-6/8").unwrap(), rat_frac(-3, 4));
        assert_eq!(parse_rat(" 5 ").unwrap(), rat_i(5));
        assert_eq!(parse_rat("4/-6").unwrap(), rat_frac(-2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1/2/3").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3/4", "-3/4", "5", "0", "-17"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(parse_rat(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn dyadic_root_upper_is_tight() {
        for (p, q, n) in [(2i64, 1i64, 2usize), (17, 3, 3), (1, 100, 4), (1000, 1, 5), (1, 1, 7)] {
            let x = rat_frac(p, q);
            let b = dyadic_root_upper(&x, n);
            assert!(pow_rat(&b, n) >= x, "{p}/{q} ^ 1/{n}");
            let below = &b - rat_frac(1, 1024);
            assert!(pow_rat(&below, n) < x, "{p}/{q} ^ 1/{n} not tight");
        }
        // Exact powers are returned exactly.
        assert_eq!(dyadic_root_upper(&rat_i(16), 2), rat_i(4));
        assert_eq!(dyadic_root_upper(&rat_frac(1, 8), 3), rat_frac(1, 2));
    }

    #[test]
    fn rational_to_float_is_exact_on_dyadics_and_saturates() {
        assert_eq!(rat_approx(&rat_frac(1, 4)), 0.25);
        assert_eq!(rat_approx(&rat_frac(-1, 2)), -0.5);
        assert_eq!(rat_approx(&rat_i(0)), 0.0);
        let huge = Rat::new(int(1) << 8000u32, int(1));
        assert_eq!(rat_approx(&huge), f64::INFINITY);
        assert!((rat_approx(&rat_frac(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn floor_sqrt_matches_hand_values() {
        assert_eq!(floor_sqrt_rat(&rat_frac(7, 2)), int(1));
        assert_eq!(floor_sqrt_rat(&rat_frac(9, 2)), int(2));
        assert_eq!(floor_sqrt_rat(&rat_i(16)), int(4));
        assert_eq!(floor_sqrt_rat(&rat_i(0)), int(0));
        assert_eq!(floor_sqrt_rat(&rat_frac(35, 36)), int(0));
    }

    #[test]
    fn floor_add_sqrt_exact_boundaries() {
        // floor(0 + sqrt(4)) = 2 and floor(-1/2 + sqrt(4)) = 1.
        assert_eq!(floor_add_sqrt(&rat_i(0), &rat_i(4)), int(2));
        assert_eq!(floor_add_sqrt(&rat_frac(-1, 2), &rat_i(4)), int(1));
        // sqrt(2) = 1.414...: floor(1/2 + sqrt(2)) = 1, ceil(1/2 - sqrt(2)) = 0.
        assert_eq!(floor_add_sqrt(&rat_frac(1, 2), &rat_i(2)), int(1));
        assert_eq!(ceil_sub_sqrt(&rat_frac(1, 2), &rat_i(2)), int(0));
        // Perfect-square boundary from below: floor(1/3 + sqrt(9)) = 3.
        assert_eq!(floor_add_sqrt(&rat_frac(1, 3), &rat_i(9)), int(3));
    }

    #[test]
    fn floor_add_sqrt_brute_force() {
        // Cross-check on a grid against f64 with a safety margin.
        for a_num in -20i64..=20 {
            for rho_num in 0i64..=40 {
                let alpha = rat_frac(a_num, 3);
                let rho = rat_frac(rho_num, 7);
                let exact = floor_add_sqrt(&alpha, &rho);
                let approx = a_num as f64 / 3.0 + (rho_num as f64 / 7.0).sqrt();
                let lo = (approx - 1e-9).floor() as i64;
                let hi = (approx + 1e-9).floor() as i64;
                let e = exact.to_i64().unwrap();
                assert!(e == lo || e == hi, "alpha={alpha} rho={rho} exact={e} approx={approx}");
            }
        }
    }

    #[test]
    fn ln_approx_is_close() {
        let x = rat_frac(10, 3);
        assert!((ln_rat_approx(&x) - (10f64 / 3.0).ln()).abs() < 1e-13);
        // Near 1: 1000001/1000000.
        let y = Rat::new(int(1000001), int(1000000));
        assert!((ln_rat_approx(&y) - 1e-6f64.ln_1p()).abs() < 1e-18);
        // Huge value: ln(2^1000) = 1000 ln 2.
        let big = Rat::from_integer(pow_int(&int(2), 1000));
        let expect = 1000.0 * std::f64::consts::LN_2;
        assert!((ln_rat_approx(&big) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn format_approx_is_deterministic() {
        assert_eq!(format_approx(0.0), "0.00000000000e0");
        assert_eq!(format_approx(1.5), "1.50000000000e0");
        assert_eq!(format_approx(-0.25), "-2.50000000000e-1");
    }
}
