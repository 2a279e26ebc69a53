//! Number rendering for reports and CSV: 12 significant digits for reals,
//! bare integers for integer-flagged values.

/// Round to 12 significant digits and print the shortest decimal that
/// round-trips to the rounded value. Deterministic for a given f64.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("own rendering parses");
    format!("{rounded}")
}

/// Integer when the flag says the value is one; 12-digit real otherwise.
pub fn fmt_value(v: f64, integer: bool) -> String {
    if integer {
        format!("{}", v as i64)
    } else {
        fmt_sig(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-277.53125), "-277.53125");
        assert_eq!(fmt_sig(0.25), "0.25");
        // 13+ significant digits get rounded to 12
        assert_eq!(fmt_sig(0.3742515243321519), "0.374251524332");
        assert_eq!(fmt_sig(1234567890123456.0), "1234567890120000");
    }

    #[test]
    fn integer_flagged_values_print_bare() {
        assert_eq!(fmt_value(42.0, true), "42");
        assert_eq!(fmt_value(-7.0, true), "-7");
        assert_eq!(fmt_value(0.5, false), "0.5");
    }
}
