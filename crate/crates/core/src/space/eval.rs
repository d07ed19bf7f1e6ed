use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_ISSUES: usize = 64;

/// Mask with the low `len` bits set.
#[inline]
pub(crate) fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Bit that stores issue `j` (0-based) of a length-`len` evaluation.
/// Issue 0 is the most significant bit so that numeric order on masks is
/// lexicographic order on the 0/1 strings.
#[inline]
pub(crate) fn issue_bit(len: usize, j: usize) -> u64 {
    1u64 << (len - 1 - j)
}

pub(crate) fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_ISSUES {
        Err(Error::IssueCount(len))
    } else {
        Ok(())
    }
}

pub(crate) fn mask_to_string(bits: u64, len: usize) -> String {
    (0..len)
        .map(|j| if bits & issue_bit(len, j) != 0 { '1' } else { '0' })
        .collect()
}

/// A point of `{0,1}^m`, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Evaluation {
    bits: u64,
    len: u8,
}

impl Evaluation {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        check_len(len)?;
        if bits & !full_mask(len) != 0 {
            return Err(Error::BitsOutOfRange { bits, len });
        }
        Ok(Evaluation {
            bits,
            len: len as u8,
        })
    }

    #[inline]
    pub(crate) fn from_mask(bits: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_ISSUES).contains(&len) && bits & !full_mask(len) == 0);
        Evaluation {
            bits,
            len: len as u8,
        }
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn from_bools(values: &[bool]) -> Result<Self> {
        check_len(values.len())?;
        let bits = values.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Self::from_mask(bits, values.len()))
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false; evaluations have at least one issue.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position on issue `j` (0-based).
    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len(), "issue {j} out of range");
        self.bits & issue_bit(self.len(), j) != 0
    }

    pub fn with(self, j: usize, value: bool) -> Self {
        assert!(j < self.len(), "issue {j} out of range");
        let bit = issue_bit(self.len(), j);
        let bits = if value { self.bits | bit } else { self.bits & !bit };
        Evaluation { bits, ..self }
    }

    pub fn flip(self, j: usize) -> Self {
        let v = self.get(j);
        self.with(j, !v)
    }

    pub fn ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Plain (unweighted) Hamming distance.
    pub fn hamming(&self, other: &Evaluation) -> Result<u32> {
        self.same_len(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    pub(crate) fn same_len(&self, other: &Evaluation) -> Result<()> {
        if self.len != other.len {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len()).map(|j| self.get(j)).collect()
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mask_to_string(self.bits, self.len()))
    }
}

impl fmt::Debug for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Evaluation({self})")
    }
}

impl FromStr for Evaluation {
    type Err = Error;

    /// Parses an `m`-character 0/1 string; issue 1 is the leftmost character.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        check_len(s.len()).map_err(|_| Error::parse(0, format!("bad evaluation length in '{s}'")))?;
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::parse(0, format!("'{s}' is not a 0/1 string"))),
            }
        }
        Ok(Evaluation::from_mask(bits, s.len()))
    }
}

/// A set of issues (0-based indices internally, printed 1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IssueSet {
    mask: u64,
    len: u8,
}

impl IssueSet {
    pub fn from_issues(len: usize, issues: &[usize]) -> Result<Self> {
        check_len(len)?;
        let mut mask = 0;
        for &j in issues {
            if j >= len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: j + 1,
                });
            }
            mask |= issue_bit(len, j);
        }
        Ok(IssueSet {
            mask,
            len: len as u8,
        })
    }

    pub fn all(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(IssueSet {
            mask: full_mask(len),
            len: len as u8,
        })
    }

    pub(crate) fn from_mask(mask: u64, len: usize) -> Self {
        IssueSet {
            mask,
            len: len as u8,
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn ambient(&self) -> usize {
        self.len as usize
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.ambient() && self.mask & issue_bit(self.ambient(), j) != 0
    }

    /// Issues in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ambient()).filter(move |&j| self.contains(j))
    }
}

impl fmt::Display for IssueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for IssueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IssueSet{self}")
    }
}

/// A K-evaluation: positions on the issues of a non-empty support K.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialEvaluation {
    support: u64,
    bits: u64,
    len: u8,
}

impl PartialEvaluation {
    /// `values` lists the positions on the issues of `support` in ascending issue order.
    pub fn new(support: IssueSet, values: &[bool]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyIssueSet);
        }
        if values.len() != support.size() {
            return Err(Error::LengthMismatch {
                expected: support.size(),
                found: values.len(),
            });
        }
        let len = support.ambient();
        let bits = support
            .iter()
            .zip(values)
            .filter(|(_, &v)| v)
            .fold(0u64, |acc, (j, _)| acc | issue_bit(len, j));
        Ok(PartialEvaluation {
            support: support.mask(),
            bits,
            len: len as u8,
        })
    }

    /// Restriction of a full evaluation to `support`.
    pub fn restrict(x: &Evaluation, support: IssueSet) -> Result<Self> {
        if support.ambient() != x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: support.ambient(),
            });
        }
        if support.is_empty() {
            return Err(Error::EmptyIssueSet);
        }
        Ok(Self::from_masks(support.mask(), x.bits() & support.mask(), x.len()))
    }

    pub(crate) fn from_masks(support: u64, bits: u64, len: usize) -> Self {
        debug_assert_eq!(bits & !support, 0);
        PartialEvaluation {
            support,
            bits,
            len: len as u8,
        }
    }

    pub fn support(&self) -> IssueSet {
        IssueSet::from_mask(self.support, self.ambient())
    }

    pub fn support_mask(&self) -> u64 {
        self.support
    }

    pub fn bits_mask(&self) -> u64 {
        self.bits
    }

    pub fn ambient(&self) -> usize {
        self.len as usize
    }

    pub fn size(&self) -> usize {
        self.support.count_ones() as usize
    }

    /// Positions on the support, in ascending issue order.
    pub fn values(&self) -> Vec<bool> {
        self.support()
            .iter()
            .map(|j| self.bits & issue_bit(self.ambient(), j) != 0)
            .collect()
    }

    pub fn value(&self, j: usize) -> Option<bool> {
        self.support()
            .contains(j)
            .then(|| self.bits & issue_bit(self.ambient(), j) != 0)
    }

    /// True if `x` agrees with this partial evaluation on its support.
    pub fn matches(&self, x: &Evaluation) -> bool {
        x.len() == self.ambient() && x.bits() & self.support == self.bits
    }

    /// Canonical order: support size, then support as an ascending issue
    /// list (lexicographic), then positions as a 0/1 string.
    pub(crate) fn canonical_key(&self) -> (u32, std::cmp::Reverse<u64>, u64) {
        (
            self.support.count_ones(),
            std::cmp::Reverse(self.support),
            self.bits,
        )
    }
}

impl Ord for PartialEvaluation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len, self.canonical_key()).cmp(&(other.len, other.canonical_key()))
    }
}

impl PartialOrd for PartialEvaluation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self
            .values()
            .into_iter()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        write!(f, "K:{} bits:{}", self.support(), bits)
    }
}

impl fmt::Debug for PartialEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialEvaluation({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let x: Evaluation = "0110".parse().unwrap();
        assert_eq!(x.bits(), 0b0110);
        assert_eq!(x.len(), 4);
        assert!(!x.get(0));
        assert!(x.get(1));
        assert_eq!(x.to_string(), "0110");
        assert_eq!(x.flip(0).to_string(), "1110");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("01a".parse::<Evaluation>().is_err());
        assert!("".parse::<Evaluation>().is_err());
        assert!("0".repeat(65).parse::<Evaluation>().is_err());
    }

    #[test]
    fn mask_order_is_string_order() {
        let mut v: Vec<Evaluation> = ["101", "011", "110", "001"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        assert_eq!(s, ["001", "011", "101", "110"]);
    }

    #[test]
    fn partial_evaluation_display() {
        let k = IssueSet::from_issues(3, &[0, 2]).unwrap();
        let a = PartialEvaluation::new(k, &[false, true]).unwrap();
        assert_eq!(a.to_string(), "K:{1,3} bits:01");
        assert!(a.matches(&"001".parse().unwrap()));
        assert!(a.matches(&"011".parse().unwrap()));
        assert!(!a.matches(&"101".parse().unwrap()));
        assert!(PartialEvaluation::new(IssueSet::from_issues(3, &[]).unwrap(), &[]).is_err());
    }

    #[test]
    fn sixty_four_issues() {
        let x = Evaluation::new(u64::MAX, 64).unwrap();
        assert_eq!(x.ones(), 64);
        assert!(Evaluation::new(0b100, 2).is_err());
    }
}
