//! Tiny parser for defining polynomials written as products of powered
//! linear factors, e.g. "x^3 y^3 (x-y)^3" or "x^2 z^2 (x - 2z)(x + 2z)".
//! Variables x, y, z, w.

use arrh::arrangement::MultiArrangement;
use arrh::field::Field;

#[derive(Debug, thiserror::Error)]
pub enum DefPolyError {
    #[error("unexpected character `{0}` at position {1}")]
    Unexpected(char, usize),
    #[error("bad factor near position {0}")]
    BadFactor(usize),
    #[error("{0}")]
    Arrangement(#[from] arrh::arrangement::ArrangementError),
}

const VARS: [char; 4] = ['x', 'y', 'z', 'w'];

pub fn parse_defining_polynomial(
    field: Field,
    text: &str,
) -> Result<MultiArrangement, DefPolyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let mut factors: Vec<(Vec<i64>, u32)> = Vec::new();
    let mut max_var = 0usize;

    let skip_ws = |pos: &mut usize, chars: &[char]| {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || chars[*pos] == '*') {
            *pos += 1;
        }
    };

    while {
        skip_ws(&mut pos, &chars);
        pos < chars.len()
    } {
        let start = pos;
        let mut coeffs = vec![0i64; 4];
        if let Some(vi) = VARS.iter().position(|&v| v == chars[pos]) {
            coeffs[vi] = 1;
            max_var = max_var.max(vi + 1);
            pos += 1;
        } else if chars[pos] == '(' {
            pos += 1;
            // signed integer-coefficient linear combination of variables
            let mut sign = 1i64;
            let mut expecting_term = true;
            loop {
                skip_ws(&mut pos, &chars);
                if pos >= chars.len() {
                    return Err(DefPolyError::BadFactor(start));
                }
                match chars[pos] {
                    ')' => {
                        if expecting_term {
                            return Err(DefPolyError::BadFactor(start));
                        }
                        pos += 1;
                        break;
                    }
                    '+' => {
                        sign = 1;
                        expecting_term = true;
                        pos += 1;
                    }
                    '-' => {
                        sign = -1;
                        expecting_term = true;
                        pos += 1;
                    }
                    c if c.is_ascii_digit() => {
                        let mut num = 0i64;
                        while pos < chars.len() && chars[pos].is_ascii_digit() {
                            num = num * 10 + (chars[pos] as i64 - '0' as i64);
                            pos += 1;
                        }
                        skip_ws(&mut pos, &chars);
                        let Some(vi) = (pos < chars.len())
                            .then(|| VARS.iter().position(|&v| v == chars[pos]))
                            .flatten()
                        else {
                            return Err(DefPolyError::BadFactor(start));
                        };
                        coeffs[vi] += sign * num;
                        max_var = max_var.max(vi + 1);
                        pos += 1;
                        sign = 1;
                        expecting_term = false;
                    }
                    c => {
                        let Some(vi) = VARS.iter().position(|&v| v == c) else {
                            return Err(DefPolyError::Unexpected(c, pos));
                        };
                        coeffs[vi] += sign;
                        max_var = max_var.max(vi + 1);
                        pos += 1;
                        sign = 1;
                        expecting_term = false;
                    }
                }
            }
        } else {
            return Err(DefPolyError::Unexpected(chars[pos], pos));
        }
        // optional power
        skip_ws(&mut pos, &chars);
        let mut mult = 1u32;
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            skip_ws(&mut pos, &chars);
            let d0 = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if d0 == pos {
                return Err(DefPolyError::BadFactor(start));
            }
            mult = chars[d0..pos].iter().collect::<String>().parse().unwrap();
        }
        factors.push((coeffs, mult));
    }
    // merge repeated factors (proportional forms add multiplicities)
    let nv = max_var.max(1);
    let mut forms: Vec<Vec<i64>> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    for (c, m) in factors {
        let trimmed: Vec<i64> = c[..nv].to_vec();
        let prim = primitive(&trimmed);
        if let Some(k) = forms.iter().position(|f| *f == prim) {
            mults[k] += m;
        } else {
            forms.push(prim);
            mults.push(m);
        }
    }
    Ok(MultiArrangement::from_int_forms(field, &forms, &mults)?)
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let mut g = 0i64;
    for &x in v {
        g = gcd(g, x.abs());
    }
    if g == 0 {
        return v.to_vec();
    }
    let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(1);
    let s = if lead < 0 { -1 } else { 1 };
    v.iter().map(|&x| s * x / g).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
