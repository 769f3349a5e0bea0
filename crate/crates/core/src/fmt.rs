//! Locale-independent numeric formatting for CSV artifacts.

/// Formats `v` with `sig` significant digits, `%g` style, trailing zeros
/// trimmed. Negative zero prints as `0`.
pub fn sig(v: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // Round first so that the exponent reflects the printed mantissa.
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -5 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        let s = trim_zeros(&s);
        if s == "-0" {
            "0".into()
        } else {
            s.to_string()
        }
    }
}

/// Fixed decimals, with negative zero normalised.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, v);
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.0, 9), "0");
        assert_eq!(sig(-0.0, 9), "0");
        assert_eq!(sig(1.0, 9), "1");
        assert_eq!(sig(137.0 / 99.0, 9), "1.38383838");
        assert_eq!(sig(0.25, 9), "0.25");
        assert_eq!(sig(-0.125, 9), "-0.125");
        assert_eq!(sig(1.0 / 3.0 * 1e-7, 9), "3.33333333e-8");
        assert_eq!(sig(123456789012.0, 9), "1.23456789e11");
        assert_eq!(sig(99.99999999999, 9), "100");
    }

    #[test]
    fn fixed_decimals() {
        assert_eq!(fixed(-0.00001, 4), "0.0000");
        assert_eq!(fixed(-0.04, 4), "-0.0400");
        assert_eq!(fixed(0.15, 4), "0.1500");
    }
}
