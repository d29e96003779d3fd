//! Words over an initial-segment alphabet {1, .., d}.

use std::fmt;

use crate::error::{Error, Result};

/// A finite word over the alphabet [d] = {1, .., d}.
///
/// The alphabet size is part of the value: `12` over [2] and `12` over [4]
/// compare unequal even though the letters agree. Text form is contiguous
/// digits when d <= 9 (`3213213`) and comma-separated otherwise (`10,2,11`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    d: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, d: u8) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("alphabet size d must be >= 1".into()));
        }
        for &l in &letters {
            if l == 0 || l > d {
                return Err(Error::LetterOutOfRange { letter: l as u32, d: d as u32 });
            }
        }
        Ok(Word { letters, d })
    }

    pub fn empty(d: u8) -> Result<Self> {
        Word::new(Vec::new(), d)
    }

    /// Parses the text form. Accepts comma-separated letters for any d and
    /// contiguous digits when every letter fits in one digit.
    pub fn parse(text: &str, d: u8) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let letters = if text.contains(',') {
            text.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad letter {part:?}")))
                })
                .collect::<Result<Vec<u8>>>()?
        } else {
            text.chars()
                .map(|c| match c.to_digit(10) {
                    Some(v) if v >= 1 => Ok(v as u8),
                    _ => Err(Error::Parse(format!("bad digit {c:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?
        };
        Word::new(letters, d)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of distinct letters actually present.
    pub fn distinct_count(&self) -> usize {
        let mut seen = [false; 256];
        let mut n = 0;
        for &l in &self.letters {
            if !seen[l as usize] {
                seen[l as usize] = true;
                n += 1;
            }
        }
        n
    }

    /// True when every letter of [d] appears at least once.
    pub fn uses_full_alphabet(&self) -> bool {
        self.distinct_count() == self.d as usize
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters, self.d)
    }
}

pub(crate) fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8], d: u8) -> fmt::Result {
    if d <= 9 {
        for &l in letters {
            write!(f, "{l}")?;
        }
    } else {
        let mut first = true;
        for &l in letters {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
    }
    Ok(())
}
