//! Deterministic float formatting for reports and CSV output.

/// Significant digits used by every CLI report.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros removed, exponent form when the decimal exponent is below -4 or at
/// least `digits`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let digits = digits.max(1);
    // Rounding to `digits` significant places may bump the exponent
    // (9.9999 -> 1.000e1), so read it back from the rounded form.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_owned()
    }
}

/// `%.12g`.
pub fn g12(x: f64) -> String {
    format_g(x, SIGNIFICANT_DIGITS)
}

fn strip_zeros(s: &str) -> &str {
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
    fn matches_c_printf() {
        // Reference strings produced by printf("%.12g") in C.
        assert_eq!(g12(2.0 / 3.0), "0.666666666667");
        assert_eq!(g12(1.75), "1.75");
        assert_eq!(g12(3.0), "3");
        assert_eq!(g12(-0.5), "-0.5");
        assert_eq!(g12(1e-5), "1e-05");
        assert_eq!(g12(1.5e-4), "0.00015");
        assert_eq!(g12(123456789012.0), "123456789012");
        assert_eq!(g12(1234567890123.0), "1.23456789012e+12");
        assert_eq!(g12(0.99999999999999), "1");
        assert_eq!(g12(-0.0), "0");
        assert_eq!(g12(f64::NAN), "nan");
        assert_eq!(format_g(std::f64::consts::PI, 3), "3.14");
    }
}
