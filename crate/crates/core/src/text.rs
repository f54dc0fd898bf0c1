//! Shared tokenizer for the `c*X^i*Y^j + ...` polynomial text formats.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// One signed monomial: integer coefficient and `(variable, exponent)` factors.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RawTerm {
    pub coeff: BigInt,
    pub powers: Vec<(char, i64)>,
}

/// Splits a whitespace-insensitive sum of monomials over the given variables.
///
/// Accepted monomial forms: `3`, `t`, `-t^2`, `2*t^-3`, `2t^{-3}`, `M^2*L`, `-M^6 L`.
/// Repeated variables within one monomial multiply (`t*t` is `t^2`).
pub(crate) fn parse_terms(input: &str, vars: &[char]) -> Result<Vec<RawTerm>> {
    let s: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }

    let mut pieces: Vec<(bool, Vec<char>)> = Vec::new();
    let mut negative = false;
    let mut current: Vec<char> = Vec::new();
    for (i, &c) in s.iter().enumerate() {
        let after_caret = i > 0 && matches!(s[i - 1], '^' | '{' | '(');
        if (c == '+' || c == '-') && !after_caret {
            if !current.is_empty() {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = c == '-';
            } else if i == 0 {
                negative = c == '-';
            } else {
                return Err(Error::Parse(format!("dangling sign at position {i}")));
            }
        } else {
            current.push(c);
        }
    }
    if current.is_empty() {
        return Err(Error::Parse("trailing sign".into()));
    }
    pieces.push((negative, current));

    pieces
        .into_iter()
        .map(|(neg, body)| parse_monomial(&body, neg, vars))
        .collect()
}

fn parse_monomial(body: &[char], negative: bool, vars: &[char]) -> Result<RawTerm> {
    let text: String = body.iter().collect();
    let mut coeff = BigInt::one();
    let mut powers: Vec<(char, i64)> = Vec::new();
    let mut i = 0;
    let mut saw_factor = false;

    while i < body.len() {
        let c = body[i];
        if c == '*' {
            if !saw_factor || i + 1 == body.len() {
                return Err(Error::Parse(format!("misplaced '*' in `{text}`")));
            }
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < body.len() && body[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = body[start..i].iter().collect();
            let value: BigInt = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{digits}`")))?;
            coeff *= value;
        } else if vars.contains(&c) {
            i += 1;
            let mut exp = 1i64;
            if i < body.len() && body[i] == '^' {
                i += 1;
                let (e, next) = parse_exponent(body, i, &text)?;
                exp = e;
                i = next;
            }
            match powers.iter_mut().find(|(v, _)| *v == c) {
                Some(entry) => entry.1 += exp,
                None => powers.push((c, exp)),
            }
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` in `{text}`")));
        }
        saw_factor = true;
    }
    if !saw_factor {
        return Err(Error::Parse(format!("empty monomial in `{text}`")));
    }
    if negative {
        coeff = -coeff;
    }
    Ok(RawTerm { coeff, powers })
}

fn parse_exponent(body: &[char], mut i: usize, text: &str) -> Result<(i64, usize)> {
    let close = match body.get(i) {
        Some('{') => Some('}'),
        Some('(') => Some(')'),
        _ => None,
    };
    if close.is_some() {
        i += 1;
    }
    let start = i;
    if matches!(body.get(i), Some('-') | Some('+')) {
        i += 1;
    }
    while i < body.len() && body[i].is_ascii_digit() {
        i += 1;
    }
    let digits: String = body[start..i].iter().collect();
    let exp: i64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?;
    if let Some(cl) = close {
        if body.get(i) != Some(&cl) {
            return Err(Error::Parse(format!("unclosed exponent in `{text}`")));
        }
        i += 1;
    }
    Ok((exp, i))
}

/// Serializes integers as JSON numbers when they fit in `i64`, else as strings.
pub(crate) mod bigint_json {
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(small) => s.serialize_i64(small),
            Err(_) => s.collect_str(v),
        }
    }

    struct Wrapped<'a>(&'a BigInt);

    impl serde::Serialize for Wrapped<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(self.0, s)
        }
    }

    pub fn serialize_pairs<S: Serializer>(v: &[(i64, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (e, c) in v {
            seq.serialize_element(&(e, Wrapped(c)))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(s: &str) -> Vec<(i64, Vec<(char, i64)>)> {
        parse_terms(s, &['M', 'L'])
            .unwrap()
            .into_iter()
            .map(|t| (i64::try_from(t.coeff).unwrap(), t.powers))
            .collect()
    }

    #[test]
    fn splits_signs_but_not_negative_exponents() {
        assert_eq!(
            terms("-1 + M^-24*L^2"),
            vec![(-1, vec![]), (1, vec![('M', -24), ('L', 2)])]
        );
        assert_eq!(terms("3M^{-2}L"), vec![(3, vec![('M', -2), ('L', 1)])]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("", &['t']).is_err());
        assert!(parse_terms("t +", &['t']).is_err());
        assert!(parse_terms("t + + 1", &['t']).is_err());
        assert!(parse_terms("x^2", &['t']).is_err());
        assert!(parse_terms("t^", &['t']).is_err());
        assert!(parse_terms("*t", &['t']).is_err());
    }
}
