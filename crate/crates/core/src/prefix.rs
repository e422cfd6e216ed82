use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite prefix of a ternary coding sequence. Entries are 1, 2 or 3:
/// 1 masks the northern area, 2 the northeastern, 3 the eastern.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CodingPrefix(Vec<u8>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefixError {
    #[error("invalid trit {found:?} at position {pos} (expected 1, 2 or 3)")]
    BadTrit { pos: usize, found: char },
    #[error("trit value {0} out of range")]
    OutOfRange(u8),
}

impl CodingPrefix {
    pub fn new(trits: Vec<u8>) -> Result<Self, PrefixError> {
        if let Some(&t) = trits.iter().find(|&&t| !(1..=3).contains(&t)) {
            return Err(PrefixError::OutOfRange(t));
        }
        Ok(CodingPrefix(trits))
    }

    pub fn empty() -> Self {
        CodingPrefix(Vec::new())
    }

    /// n copies of the same trit, e.g. the classic Sierpinski prefix for 2.
    pub fn constant(trit: u8, n: usize) -> Self {
        assert!((1..=3).contains(&trit));
        CodingPrefix(vec![trit; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trits(&self) -> &[u8] {
        &self.0
    }

    /// 1-based access, matching the stage numbering of decisions.
    pub fn get(&self, k: usize) -> Option<u8> {
        k.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn truncated(&self, n: usize) -> Self {
        CodingPrefix(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn push(&mut self, trit: u8) -> Result<(), PrefixError> {
        if !(1..=3).contains(&trit) {
            return Err(PrefixError::OutOfRange(trit));
        }
        self.0.push(trit);
        Ok(())
    }

    /// Every prefix of length n in lexicographic order (3^n of them).
    pub fn all(n: usize) -> Vec<CodingPrefix> {
        let mut out = vec![CodingPrefix::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (1..=3).map(move |t| {
                        let mut q = p.clone();
                        q.0.push(t);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Dense rank in 0..3^n, used to tally realized prefixes.
    pub fn rank(&self) -> usize {
        self.0.iter().fold(0, |acc, &t| acc * 3 + (t as usize - 1))
    }
}

impl FromStr for CodingPrefix {
    type Err = PrefixError;

    /// Accepts plain digit strings ("1231"); commas, spaces and angle brackets
    /// are ignored so "<1,2,3>" parses too.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut trits = Vec::new();
        for (pos, c) in s.chars().enumerate() {
            match c {
                '1' | '2' | '3' => trits.push(c as u8 - b'0'),
                ',' | ' ' | '<' | '>' | '⟨' | '⟩' => {}
                _ => return Err(PrefixError::BadTrit { pos, found: c }),
            }
        }
        Ok(CodingPrefix(trits))
    }
}

impl fmt::Display for CodingPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for CodingPrefix {
    type Error = PrefixError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CodingPrefix> for String {
    fn from(p: CodingPrefix) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_bracketed() {
        assert_eq!("123".parse::<CodingPrefix>().unwrap().trits(), &[1, 2, 3]);
        assert_eq!("<1, 2,3>".parse::<CodingPrefix>().unwrap().trits(), &[1, 2, 3]);
        assert!("".parse::<CodingPrefix>().unwrap().is_empty());
    }

    #[test]
    fn rejects_other_digits() {
        assert_eq!(
            "1203".parse::<CodingPrefix>(),
            Err(PrefixError::BadTrit { pos: 2, found: '0' })
        );
        assert!(CodingPrefix::new(vec![4]).is_err());
    }

    #[test]
    fn enumeration_and_rank_agree() {
        let all = CodingPrefix::all(3);
        assert_eq!(all.len(), 27);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), i);
        }
    }

    #[test]
    fn one_based_access() {
        let p: CodingPrefix = "231".parse().unwrap();
        assert_eq!(p.get(1), Some(2));
        assert_eq!(p.get(3), Some(1));
        assert_eq!(p.get(0), None);
        assert_eq!(p.get(4), None);
    }
}
