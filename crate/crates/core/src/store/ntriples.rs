// SPDX-License-Identifier: Apache-2.0

//! A strict N-Triples subset.
//!
//! Accepted statements are `<s> <p> <o> .` and `<s> <p> "literal"[@lang] .`.
//! Literal escapes are limited to `\"`, `\\`, `\n` and `\t`. Blank nodes,
//! datatyped literals and any other escape are rejected with the offending
//! line number; a single bad line fails the whole document.

use super::{Iri, StoreError, Term, Triple};

pub fn parse_ntriples(text: &str) -> Result<Vec<Triple>, StoreError> {
    let mut triples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let triple =
            LineParser { rest: trimmed }.statement().map_err(|reason| StoreError::Parse { line: idx + 1, reason })?;
        triples.push(triple);
    }
    Ok(triples)
}

pub fn serialize_ntriples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

pub(crate) fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

struct LineParser<'a> {
    rest: &'a str,
}

impl<'a> LineParser<'a> {
    fn statement(mut self) -> Result<Triple, String> {
        let subject = self.iri("subject")?;
        self.whitespace()?;
        let predicate = self.iri("predicate")?;
        self.whitespace()?;
        let object = self.object()?;
        self.rest = self.rest.trim_start();
        let Some(after) = self.rest.strip_prefix('.') else {
            return Err("missing terminating `.`".into());
        };
        let after = after.trim_start();
        if !after.is_empty() && !after.starts_with('#') {
            return Err(format!("unexpected trailing content {after:?}"));
        }
        Ok(Triple { subject, predicate, object })
    }

    fn whitespace(&mut self) -> Result<(), String> {
        let trimmed = self.rest.trim_start_matches([' ', '\t']);
        if trimmed.len() == self.rest.len() {
            return Err("expected whitespace between terms".into());
        }
        self.rest = trimmed;
        Ok(())
    }

    fn iri(&mut self, role: &str) -> Result<Iri, String> {
        if self.rest.starts_with("_:") {
            return Err(format!("blank node {role} is not supported"));
        }
        let Some(body) = self.rest.strip_prefix('<') else {
            return Err(format!("expected <IRI> as {role}"));
        };
        let end = body.find('>').ok_or_else(|| format!("unterminated IRI in {role}"))?;
        let iri = Iri::new(&body[..end]).map_err(|e| e.to_string())?;
        self.rest = &body[end + 1..];
        Ok(iri)
    }

    fn object(&mut self) -> Result<Term, String> {
        if self.rest.starts_with('"') {
            self.literal()
        } else {
            self.iri("object").map(Term::Iri)
        }
    }

    fn literal(&mut self) -> Result<Term, String> {
        let mut value = String::new();
        let mut chars = self.rest[1..].char_indices();
        let close = loop {
            match chars.next() {
                None => return Err("unterminated literal".into()),
                Some((i, '"')) => break i + 1,
                Some((_, '\\')) => match chars.next() {
                    Some((_, '"')) => value.push('"'),
                    Some((_, '\\')) => value.push('\\'),
                    Some((_, 'n')) => value.push('\n'),
                    Some((_, 't')) => value.push('\t'),
                    Some((_, c)) => return Err(format!("unsupported escape \\{c}")),
                    None => return Err("unterminated literal".into()),
                },
                Some((_, c)) => value.push(c),
            }
        };
        self.rest = &self.rest[close + 1..];
        if self.rest.starts_with("^^") {
            return Err("datatyped literals are not supported".into());
        }
        let lang = match self.rest.strip_prefix('@') {
            Some(tagged) => {
                let end = tagged.find(|c: char| c.is_whitespace() || c == '.').unwrap_or(tagged.len());
                let tag = &tagged[..end];
                let valid = !tag.is_empty()
                    && tag.split('-').enumerate().all(|(k, part)| {
                        !part.is_empty()
                            && if k == 0 {
                                part.chars().all(|c| c.is_ascii_alphabetic())
                            } else {
                                part.chars().all(|c| c.is_ascii_alphanumeric())
                            }
                    });
                if !valid {
                    return Err(format!("invalid language tag {tag:?}"));
                }
                self.rest = &tagged[end..];
                Some(tag.to_ascii_lowercase())
            }
            None => None,
        };
        Ok(Term::Literal { value, lang })
    }
}
