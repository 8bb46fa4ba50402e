// SPDX-License-Identifier: Apache-2.0

//! Token normalization and small parsing helpers shared by the file formats.

use crate::Support;
use std::cmp::Ordering;

/// Lowercases, trims and joins whitespace runs with `_`.
pub fn normalize_token(raw: &str) -> String {
    raw.split_whitespace().map(|part| part.to_lowercase()).collect::<Vec<_>>().join("_")
}

/// Inverse of [`normalize_token`] for display: underscores become spaces.
pub fn surface_form(token: &str) -> String {
    token.replace('_', " ")
}

/// Parses `a/b`, an integer, or a decimal such as `0.25` into an exact fraction.
pub fn parse_fraction(s: &str) -> Option<Support> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().ok()?;
        let den: u64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Support::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return None;
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let scale = 10u64.checked_pow(frac.len() as u32)?;
        let frac: u64 = frac.parse().ok()?;
        let num = int.checked_mul(scale)?.checked_add(frac)?;
        return Some(Support::new(num, scale));
    }
    s.parse::<u64>().ok().map(Support::from_integer)
}

/// Orders strings so that embedded digit runs compare numerically (`U2 < U10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut xs = a.chars().peekable();
    let mut ys = b.chars().peekable();
    loop {
        match (xs.peek().copied(), ys.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut dx = String::new();
                while let Some(c) = xs.peek().copied().filter(char::is_ascii_digit) {
                    dx.push(c);
                    xs.next();
                }
                let mut dy = String::new();
                while let Some(c) = ys.peek().copied().filter(char::is_ascii_digit) {
                    dy.push(c);
                    ys.next();
                }
                let tx = dx.trim_start_matches('0');
                let ty = dy.trim_start_matches('0');
                let ord = tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                xs.next();
                ys.next();
            }
        }
    }
}
