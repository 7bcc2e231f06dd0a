//! Braid words in the bracketed integer notation, e.g. `[1,-2,3]` for
//! σ1 σ2⁻¹ σ3, plus the built-in table of knots whose region-coloring
//! counts are used as regression values.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    /// Signed generator indices, |i| in 1..strands.
    pub letters: Vec<i32>,
    pub name: Option<String>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Malformed("braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(Error::Malformed("braid letter 0 is not a generator".into()));
            }
            if l.unsigned_abs() as usize >= strands {
                return Err(Error::Malformed(format!(
                    "letter {l} needs at least {} strands, braid has {strands}",
                    l.unsigned_abs() + 1
                )));
            }
        }
        Ok(BraidWord {
            strands,
            letters,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Mirror image: every crossing sign flipped.
    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|&l| -l).collect(),
            name: self.name.as_ref().map(|n| format!("{n}-mirror")),
        }
    }

    /// Number of gap regions per horizontal level: strands + 1.
    pub fn gaps(&self) -> usize {
        self.strands + 1
    }
}

/// Parses `[1,-2,3]`. When `strands` is absent it defaults to
/// max |letter| + 1 (and to 1 for the empty braid).
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Syntax {
            pos: 1,
            msg: "braid word must be bracketed, like [1,-2]".into(),
        })?;
    let mut letters = Vec::new();
    for part in inner.split(',') {
        let p = part.trim();
        if p.is_empty() {
            if inner.trim().is_empty() && letters.is_empty() {
                break;
            }
            return Err(Error::Syntax {
                pos: 1,
                msg: "empty braid letter".into(),
            });
        }
        let l: i32 = p.parse().map_err(|_| Error::Syntax {
            pos: 1,
            msg: format!("'{p}' is not an integer braid letter"),
        })?;
        letters.push(l);
    }
    let needed = letters
        .iter()
        .map(|l| l.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(1);
    BraidWord::new(strands.unwrap_or(needed), letters)
}

/// The 25 knots with nontrivial homological colorings over the order-6
/// triangle-group cube, with their expected (total colorings, order-3
/// classes) counts.
pub const KNOT_TABLE: &[(&str, &[i32], usize, usize)] = &[
    ("3_1", &[1, 1, 1], 72, 36),
    ("7_4", &[1, 1, 2, -1, 2, 2, 3, -2, 3], 72, 36),
    ("7_7", &[1, -2, 1, -2, 3, -2, 3], 72, 36),
    ("8_5", &[1, 1, 1, -2, 1, 1, 1, -2], 72, 36),
    ("8_15", &[1, 1, -2, 1, 3, 2, 2, 2, 3], 72, 36),
    ("8_18", &[1, -2, 1, -2, 1, -2, 1, -2], 180, 144),
    ("8_19", &[1, 1, 1, 2, 1, 1, 1, 2], 72, 36),
    ("8_21", &[1, 1, 1, 2, -1, -1, 2, 2], 72, 36),
    ("9_2", &[1, 1, 1, 2, -1, 2, 3, -2, 3, 4, -3, 4], 72, 36),
    ("9_4", &[1, 1, 1, 1, 1, 2, -1, 2, 3, -2, 3], 72, 36),
    ("9_10", &[1, 1, 2, -1, 2, 2, 2, 2, 3, -2, 3], 72, 36),
    ("9_11", &[1, 1, 1, 1, -2, 1, 3, -2, 3], 72, 36),
    ("9_15", &[1, 1, 1, 2, -1, -3, 2, 4, -3, 4], 72, 36),
    ("9_16", &[1, 1, 1, 1, 2, 2, -1, 2, 2, 2], 72, 36),
    ("9_17", &[1, -2, 1, -2, -2, -2, 3, -2, 3], 72, 36),
    ("9_28", &[1, 1, -2, 1, 3, -2, -2, 3, 3], 72, 36),
    ("9_29", &[1, -2, -2, 3, -2, 1, -2, 3, -2], 72, 36),
    ("9_34", &[1, -2, 1, -2, 3, -2, 1, -2, 3], 72, 36),
    ("9_35", &[1, 1, 2, -1, 2, 2, 3, -2, -2, 4, -3, 2, 4, 3], 180, 108),
    ("9_37", &[1, 1, -2, 1, 3, -2, -1, -4, 3, -2, 3, -4], 180, 72),
    ("9_38", &[1, 1, 2, 2, -3, 2, -1, 2, 3, 3, 2], 72, 36),
    ("9_40", &[1, -2, 1, 3, -2, 1, 3, -2, 3], 72, 36),
    ("9_46", &[1, -2, 1, -2, 3, 2, -1, 2, 3], 180, 72),
    ("9_47", &[1, -2, 1, -2, -3, -2, 1, -2, -3], 180, 108),
    ("9_48", &[1, 1, 2, -1, 2, 1, -3, 2, -1, 2, -3], 180, 108),
];

pub fn knot_by_name(name: &str) -> Option<BraidWord> {
    KNOT_TABLE.iter().find(|(n, _, _, _)| *n == name).map(|(n, letters, _, _)| {
        parse_braid(
            &format!(
                "[{}]",
                letters
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            None,
        )
        .unwrap()
        .with_name(*n)
    })
}
