use std::str::FromStr;

use num_bigint::BigInt;

use super::{Monomial, MultiPoly};
use crate::error::Error;

// Accepts the canonical output form: `term ((+|-) term)*` where a term is a
// `*`-separated product of an optional integer and `var` / `var^exp` factors.
impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MultiPoly::zero();
        let mut sign = 1i32;
        let mut buf = String::new();
        let mut prev_caret = false;
        let flush = |buf: &mut String, sign: i32, out: &mut MultiPoly| -> Result<(), Error> {
            let t = buf.trim();
            if t.is_empty() {
                return Err(Error::Parse("dangling sign".into()));
            }
            let (m, c) = parse_term(t)?;
            out.add_term(m, c * sign);
            buf.clear();
            Ok(())
        };
        for ch in s.chars() {
            match ch {
                '+' | '-' if !prev_caret => {
                    if buf.trim().is_empty() {
                        if ch == '-' {
                            sign = -sign;
                        }
                    } else {
                        flush(&mut buf, sign, &mut out)?;
                        sign = if ch == '-' { -1 } else { 1 };
                    }
                }
                _ => {
                    buf.push(ch);
                }
            }
            if !ch.is_whitespace() {
                prev_caret = ch == '^';
            }
        }
        flush(&mut buf, sign, &mut out)?;
        Ok(out)
    }
}

fn parse_term(t: &str) -> Result<(Monomial, BigInt), Error> {
    let mut coeff = BigInt::from(1);
    let mut mono = Monomial::one();
    for factor in t.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{t}`")));
        }
        if factor.chars().all(|c| c.is_ascii_digit()) {
            coeff *= factor
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(e.to_string()))?;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i32 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic())
            && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.');
        if !valid {
            return Err(Error::Parse(format!("bad variable name `{name}`")));
        }
        mono = mono.mul(&Monomial::var(name, exp));
    }
    Ok((mono, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signs_and_exponents() {
        let p: MultiPoly = "-A^4 - A^-4".parse().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "-A^4 - A^-4");
        let q: MultiPoly = "2*a*b + 3 - b".parse().unwrap();
        assert_eq!(q.to_string(), "2*a*b - b + 3");
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<MultiPoly>().is_err());
        assert!("a +".parse::<MultiPoly>().is_err());
        assert!("a^x".parse::<MultiPoly>().is_err());
        assert!("2a".parse::<MultiPoly>().is_err());
    }
}
