//! Command-line complex literals of the form `RE{+|-}IMi`, e.g. `-2+0i` or `1.5e0-0.25i`.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("'{text}': expected RE+IMi or RE-IMi"))?;
    // The separating sign is the last '+' or '-' that is neither leading nor part of an exponent.
    let split = body
        .char_indices()
        .filter(|&(i, ch)| {
            (ch == '+' || ch == '-') && i > 0 && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i)
        .next_back()
        .ok_or_else(|| format!("'{text}': missing imaginary part"))?;
    let (re_part, im_part) = body.split_at(split);
    let parse = |p: &str| -> Result<f64, String> {
        let v: f64 = p.parse().map_err(|_| format!("'{text}': '{p}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{text}': non-finite component"))
        }
    };
    if im_part.len() == 1 {
        return Err(format!("'{text}': missing imaginary magnitude"));
    }
    Ok(Complex64::new(parse(re_part)?, parse(im_part)?))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
