//! Group presentations in a small text language, with relator-parity
//! checking for the odd-even construction.
//!
//! Syntax: `gens | relators`, generators are single letters separated by
//! commas, relators are comma-separated words. A word is a sequence of
//! letters, each optionally raised to an integer power (`a^-1`, `a^2`),
//! and parenthesized subwords with powers (`(ab)^3`). A relation `u=v`
//! is normalized to the relator `u v^-1`. Offsets in errors are 1-based.

use crate::error::{Error, Result};

/// A letter of a relator: generator index plus inversion flag.
pub type Letter = (usize, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// True iff every relator has even length, so that word-length parity
    /// descends to the group.
    pub fn parity_well_defined(&self) -> bool {
        self.relators.iter().all(|r| r.len() % 2 == 0)
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(g, inv)| {
                        let name = &self.generators[g];
                        if inv {
                            format!("{name}^-1")
                        } else {
                            name.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect()
    }
}

/// The triangle group `a^2 = b^2 = c^2 = (ab)^l = (bc)^n = (ca)^m = 1`.
pub fn triangle_presentation(l: usize, m: usize, n: usize) -> GroupPresentation {
    parse_presentation(&format!(
        "a,b,c | a^2, b^2, c^2, (ab)^{l}, (bc)^{n}, (ca)^{m}"
    ))
    .expect("triangle presentation is well formed")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    generators: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: pos + 1,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn gen_index(&self, ch: u8) -> Option<usize> {
        let s = (ch as char).to_string();
        self.generators.iter().position(|g| *g == s)
    }

    /// An optional `^` exponent; 1 when absent.
    fn parse_power(&mut self) -> Result<i64> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            sign = -1;
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err(start, "expected integer exponent after '^'");
        }
        let v: i64 = std::str::from_utf8(&self.src[digits_start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start + 1,
                msg: "exponent out of range".into(),
            })?;
        Ok(sign * v)
    }

    /// A word: sequence of powered letters and powered groups, fully
    /// expanded. Stops at `,`, `=`, `)` or end of input.
    fn parse_word(&mut self) -> Result<Vec<Letter>> {
        let mut word = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b',') | Some(b'=') | Some(b')') => return Ok(word),
                Some(b'(') => {
                    let open = self.pos;
                    self.pos += 1;
                    let inner = self.parse_word()?;
                    self.skip_ws();
                    if self.peek() != Some(b')') {
                        return self.err(open, "unbalanced parenthesis");
                    }
                    self.pos += 1;
                    let p = self.parse_power()?;
                    append_power(&mut word, &inner, p);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = self.pos;
                    let Some(g) = self.gen_index(c) else {
                        return self.err(at, format!("undeclared generator '{}'", c as char));
                    };
                    self.pos += 1;
                    let p = self.parse_power()?;
                    append_power(&mut word, &[(g, false)], p);
                }
                Some(c) => {
                    return self.err(self.pos, format!("unexpected character '{}'", c as char))
                }
            }
        }
    }
}

fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

fn append_power(out: &mut Vec<Letter>, base: &[Letter], power: i64) {
    if power >= 0 {
        for _ in 0..power {
            out.extend_from_slice(base);
        }
    } else {
        let inv = invert(base);
        for _ in 0..(-power) {
            out.extend_from_slice(&inv);
        }
    }
}

pub fn parse_presentation(text: &str) -> Result<GroupPresentation> {
    let bar = text.find('|').ok_or_else(|| Error::Syntax {
        pos: text.len() + 1,
        msg: "missing '|' between generators and relators".into(),
    })?;
    let mut generators = Vec::new();
    for (i, part) in text[..bar].split(',').enumerate() {
        let name = part.trim();
        if name.len() != 1 || !name.chars().next().unwrap().is_ascii_alphabetic() {
            return Err(Error::Syntax {
                pos: i + 1,
                msg: format!("generator '{name}' is not a single letter"),
            });
        }
        if generators.contains(&name.to_string()) {
            return Err(Error::Syntax {
                pos: i + 1,
                msg: format!("duplicate generator '{name}'"),
            });
        }
        generators.push(name.to_string());
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: bar + 1,
        generators,
    };
    let mut relators = Vec::new();
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            break;
        }
        let mut word = p.parse_word()?;
        p.skip_ws();
        match p.peek() {
            Some(b'=') => {
                p.pos += 1;
                let rhs = p.parse_word()?;
                word.extend(invert(&rhs));
                p.skip_ws();
                match p.peek() {
                    None => {}
                    Some(b',') => {
                        p.pos += 1;
                    }
                    _ => return p.err(p.pos, "expected ',' or end after relation"),
                }
            }
            Some(b',') => {
                p.pos += 1;
            }
            None => {}
            Some(c) => return p.err(p.pos, format!("unexpected character '{}'", c as char)),
        }
        relators.push(word);
        if p.peek().is_none() && p.pos >= p.src.len() {
            // allow trailing relator without comma
        }
    }
    Ok(GroupPresentation {
        generators: p.generators,
        relators,
    })
}
