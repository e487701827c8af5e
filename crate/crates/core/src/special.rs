//! Small exact special-function helpers: binomials, half-integer gamma, and
//! trigonometric evaluation at rational multiples of the full turn.

/// Binomial coefficient as f64; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Gamma function at positive half-integer arguments, `gamma_half(x2)` with
/// `x2 = 2x`. Exact products: `Γ(m) = (m-1)!` and
/// `Γ(m + 1/2) = (2m)! √π / (4^m m!)`.
pub fn gamma_half(x2: u32) -> f64 {
    assert!(x2 > 0, "gamma_half requires a positive argument");
    if x2.is_multiple_of(2) {
        let m = x2 / 2;
        let mut acc = 1.0f64;
        for j in 2..m {
            acc *= j as f64;
        }
        acc
    } else {
        // Γ(1/2) = √π, then Γ(x+1) = x Γ(x).
        let mut acc = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while 2.0 * x < x2 as f64 {
            acc *= x;
            x += 1.0;
        }
        acc
    }
}

/// cos(2π num/den), exact at quarter-turn multiples.
///
/// The argument is folded with the symmetry cos(2π - t) = cos(t) before
/// evaluation, so `cos_2pi(z, n) == cos_2pi(n - z, n)` bit for bit. Group
/// kernels rely on this to produce exactly symmetric Gram matrices.
pub fn cos_2pi(num: u64, den: u64) -> f64 {
    debug_assert!(den > 0);
    let mut n = num % den;
    if 2 * n > den {
        n = den - n;
    }
    if (4 * n).is_multiple_of(den) {
        match 4 * n / den {
            0 => 1.0,
            1 => 0.0,
            _ => -1.0,
        }
    } else {
        (2.0 * std::f64::consts::PI * n as f64 / den as f64).cos()
    }
}

/// sin(2π num/den), exact at quarter-turn multiples; folded like [`cos_2pi`].
pub fn sin_2pi(num: u64, den: u64) -> f64 {
    debug_assert!(den > 0);
    let mut n = num % den;
    let mut sign = 1.0;
    if 2 * n > den {
        n = den - n;
        sign = -1.0;
    }
    let value = if (4 * n).is_multiple_of(den) {
        match 4 * n / den {
            1 => 1.0,
            _ => 0.0,
        }
    } else {
        (2.0 * std::f64::consts::PI * n as f64 / den as f64).sin()
    };
    sign * value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(4, 3), 4.0);
        assert_eq!(binomial(2, 1), 2.0);
        assert_eq!(binomial(1, 3), 0.0);
        assert_eq!(binomial(10, 0), 1.0);
    }

    #[test]
    fn gamma_half_integer_points() {
        assert_eq!(gamma_half(2), 1.0); // Γ(1)
        assert_eq!(gamma_half(4), 1.0); // Γ(2)
        assert_eq!(gamma_half(8), 6.0); // Γ(4) = 3!
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma_half(1) - sqrt_pi).abs() < 1e-15); // Γ(1/2)
        assert!((gamma_half(3) - 0.5 * sqrt_pi).abs() < 1e-15); // Γ(3/2)
        assert!((gamma_half(5) - 0.75 * sqrt_pi).abs() < 1e-15); // Γ(5/2)
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(cos_2pi(0, 4), 1.0);
        assert_eq!(cos_2pi(1, 4), 0.0);
        assert_eq!(cos_2pi(2, 4), -1.0);
        assert_eq!(cos_2pi(3, 4), 0.0);
        assert_eq!(sin_2pi(0, 4), 0.0);
        assert_eq!(sin_2pi(1, 4), 1.0);
        assert_eq!(sin_2pi(2, 4), 0.0);
        assert_eq!(sin_2pi(3, 4), -1.0);
        assert_eq!(cos_2pi(1, 2), -1.0);
    }

    #[test]
    fn folding_makes_negation_exact() {
        for den in [3u64, 5, 6, 7, 12, 16, 97] {
            for num in 0..den {
                assert_eq!(cos_2pi(num, den), cos_2pi(den - num, den));
                assert_eq!(sin_2pi(num, den), -sin_2pi((den - num) % den, den));
            }
        }
    }

    #[test]
    fn matches_libm_away_from_quarter_turns() {
        for den in [7u64, 9, 13] {
            for num in 0..den {
                let t = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
                assert!((cos_2pi(num, den) - t.cos()).abs() < 1e-12);
                assert!((sin_2pi(num, den) - t.sin()).abs() < 1e-12);
            }
        }
    }
}
