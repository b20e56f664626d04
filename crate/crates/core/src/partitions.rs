//! Set-partition terms of the general n-party disentangled state.
//!
//! Each summation family of the disentangled form is a set partition of the
//! parties `{0, …, n−1}` into at least two blocks. Blocks of size one carry a
//! single-party state, larger blocks carry a state entangled inside the block.
//! Partitions are encoded as restricted growth strings (RGS): position `i`
//! holds the block label of party `i`, labels appear in first-use order.
//!
//! Counting is exact (`BigUint`); enumeration is bounded by
//! [`MAX_ENUMERATE_PARTIES`].

use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest party count whose term list is materialized or streamed.
pub const MAX_ENUMERATE_PARTIES: usize = 12;
/// Largest party count accepted by the counting and growth queries.
pub const MAX_COUNT_PARTIES: usize = 64;
/// Largest party count accepted by the brute-force oracle.
pub const MAX_BRUTE_FORCE_PARTIES: usize = 10;

/// One summation family: a set partition of the parties with at least two
/// blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionTerm {
    rgs: Vec<u8>,
}

impl PartitionTerm {
    /// Builds a term from its restricted growth string.
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::Domain("empty restricted growth string".into()));
        }
        if rgs.len() > u8::MAX as usize {
            return Err(Error::Capacity(format!("{} parties", rgs.len())));
        }
        let mut max = 0u8;
        for (i, &label) in rgs.iter().enumerate() {
            let allowed = if i == 0 { 0 } else { max + 1 };
            if label > allowed {
                return Err(Error::Domain(format!(
                    "not a restricted growth string: label {label} at position {i} exceeds {allowed}"
                )));
            }
            max = max.max(label);
        }
        if max == 0 {
            return Err(Error::Domain(
                "single-block partition is not a disentangled term".into(),
            ));
        }
        Ok(Self { rgs })
    }

    /// Builds a term from a list of blocks covering `0..n` exactly.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        const UNSET: u8 = u8::MAX;
        if n == 0 || n > u8::MAX as usize - 1 {
            return Err(Error::Domain(format!("party count {n} out of range")));
        }
        let mut labels = vec![UNSET; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Domain("empty block".into()));
            }
            for &p in block {
                if p >= n {
                    return Err(Error::Domain(format!("party {p} outside 0..{n}")));
                }
                if labels[p] != UNSET {
                    return Err(Error::Domain(format!("party {p} appears twice")));
                }
                labels[p] = b as u8;
            }
        }
        if let Some(p) = labels.iter().position(|&l| l == UNSET) {
            return Err(Error::Domain(format!("party {p} is not covered")));
        }
        // Relabel in first-use order.
        let mut map = vec![UNSET; blocks.len()];
        let mut next = 0u8;
        let rgs = labels
            .into_iter()
            .map(|l| {
                if map[l as usize] == UNSET {
                    map[l as usize] = next;
                    next += 1;
                }
                map[l as usize]
            })
            .collect();
        Self::from_rgs(rgs)
    }

    /// Number of parties.
    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Blocks as ascending party lists, ordered by their minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (party, &label) in self.rgs.iter().enumerate() {
            blocks[label as usize].push(party);
        }
        blocks
    }

    /// True if `cut` separates two parties of some block of size ≥ 2.
    pub fn splits(&self, cut: &[usize]) -> bool {
        self.blocks().iter().filter(|b| b.len() >= 2).any(|b| {
            let inside = b.iter().filter(|p| cut.contains(p)).count();
            inside != 0 && inside != b.len()
        })
    }
}

impl fmt::Display for PartitionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            write!(f, "{{")?;
            for (i, p) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    n: usize,
    rgs: Vec<u8>,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for PartitionTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TermJson {
            n: self.n(),
            rgs: self.rgs.clone(),
            blocks: self.blocks(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartitionTerm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TermJson::deserialize(deserializer)?;
        if raw.rgs.len() != raw.n {
            return Err(D::Error::custom(format!(
                "rgs has length {} but n = {}",
                raw.rgs.len(),
                raw.n
            )));
        }
        let term = PartitionTerm::from_rgs(raw.rgs).map_err(D::Error::custom)?;
        if term.blocks() != raw.blocks {
            return Err(D::Error::custom("blocks do not match rgs"));
        }
        Ok(term)
    }
}

/// All terms of the general disentangled state of `n` parties, in
/// lexicographic RGS order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisentangledForm {
    n: usize,
    terms: Vec<PartitionTerm>,
}

impl DisentangledForm {
    /// Wraps a term list after checking it is the complete canonical form.
    pub fn from_terms(n: usize, terms: Vec<PartitionTerm>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("disentangled form needs n >= 2, got {n}")));
        }
        if let Some(t) = terms.iter().find(|t| t.n() != n) {
            return Err(Error::Domain(format!("term {t} does not have {n} parties")));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("terms are not strictly increasing".into()));
        }
        if BigUint::from(terms.len()) != term_count(n)? {
            return Err(Error::Domain(format!(
                "{} terms, expected Bell({n}) - 1",
                terms.len()
            )));
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PartitionTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Streams the terms for `n` parties in lexicographic RGS order without
/// materializing them.
#[derive(Debug, Clone)]
pub struct TermIter {
    rgs: Vec<u8>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<u8>,
    done: bool,
}

impl TermIter {
    pub fn new(n: usize) -> Result<Self> {
        check_enumerable(n)?;
        Ok(Self {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        })
    }

    /// Advances to the lexicographic successor; false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for TermIter {
    type Item = PartitionTerm;

    fn next(&mut self) -> Option<PartitionTerm> {
        // The all-zeros start state is the excluded single-block partition.
        if self.done || !self.advance() {
            self.done = true;
            return None;
        }
        Some(PartitionTerm {
            rgs: self.rgs.clone(),
        })
    }
}

fn check_enumerable(n: usize) -> Result<()> {
    if !(2..=MAX_ENUMERATE_PARTIES).contains(&n) {
        return Err(Error::Capacity(format!(
            "enumeration supports 2 <= n <= {MAX_ENUMERATE_PARTIES}, got {n}"
        )));
    }
    Ok(())
}

/// The n-th Bell number, computed exactly with the Bell triangle.
pub fn bell_number(n: usize) -> BigUint {
    // Row k of the triangle starts with the last entry of row k−1; each next
    // entry adds the entry above-left. Row k starts with Bell(k).
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigUint::one));
        for above in &row {
            let v = next.last().unwrap() + above;
            next.push(v);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Number of terms of the general disentangled state: `Bell(n) − 1`.
pub fn term_count(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "no disentangled form below two parties (n = {n})"
        )));
    }
    Ok(bell_number(n) - 1u32)
}

/// Materializes every term for `n` parties.
pub fn enumerate_terms(n: usize) -> Result<DisentangledForm> {
    let terms = TermIter::new(n)?.collect();
    Ok(DisentangledForm { n, terms })
}

/// All set partitions of `{0..n}` by recursive element-to-block assignment.
///
/// Independent of the RGS machinery; meant as a test oracle. Includes the
/// single-block partition.
pub fn brute_force_partitions(n: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    if n > MAX_BRUTE_FORCE_PARTIES {
        return Err(Error::Capacity(format!(
            "brute force supports n <= {MAX_BRUTE_FORCE_PARTIES}, got {n}"
        )));
    }
    fn assign(next: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(next);
            assign(next + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![next]);
        assign(next + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    assign(0, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// One line of the growth table comparing the term count against `2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    pub bell: BigUint,
    pub term_count: BigUint,
    pub two_pow_n: BigUint,
    pub exceeds: bool,
}

impl GrowthRow {
    pub fn new(n: usize) -> Result<Self> {
        let term_count = term_count(n)?;
        let bell = &term_count + 1u32;
        let two_pow_n = BigUint::one() << n;
        let exceeds = term_count > two_pow_n;
        Ok(Self {
            n,
            bell,
            term_count,
            two_pow_n,
            exceeds,
        })
    }
}

/// One row per `n` in `2..=n_max`.
pub fn growth_report(n_max: usize) -> Result<Vec<GrowthRow>> {
    if !(2..=MAX_COUNT_PARTIES).contains(&n_max) {
        return Err(Error::Domain(format!(
            "growth report supports 2 <= n_max <= {MAX_COUNT_PARTIES}, got {n_max}"
        )));
    }
    (2..=n_max).map(GrowthRow::new).collect()
}

pub const GROWTH_CSV_HEADER: &str = "n,bell,term_count,two_pow_n,exceeds";

/// Writes the growth table as CSV with a header row; integers in decimal.
pub fn write_growth_csv<W: Write>(rows: &[GrowthRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{GROWTH_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n, r.bell, r.term_count, r.two_pow_n, r.exceeds
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rgs_strings(n: usize) -> Vec<String> {
        TermIter::new(n)
            .unwrap()
            .map(|t| t.rgs().iter().map(|d| d.to_string()).collect())
            .collect()
    }

    #[test]
    fn bell_small_values() {
        assert_eq!(bell_number(0), BigUint::from(1u32));
        assert_eq!(bell_number(1), BigUint::from(1u32));
        assert_eq!(bell_number(3), BigUint::from(5u32));
        assert_eq!(bell_number(5), BigUint::from(52u32));
    }

    #[test]
    fn term_count_rejects_fewer_than_two_parties() {
        assert!(matches!(term_count(0), Err(Error::Domain(_))));
        assert!(matches!(term_count(1), Err(Error::Domain(_))));
        assert_eq!(term_count(2).unwrap(), BigUint::from(1u32));
        assert_eq!(term_count(3).unwrap(), BigUint::from(4u32));
        assert_eq!(term_count(5).unwrap(), BigUint::from(51u32));
    }

    #[test]
    fn two_party_form_is_the_product_term() {
        let form = enumerate_terms(2).unwrap();
        assert_eq!(form.terms().len(), 1);
        assert_eq!(form.terms()[0].blocks(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn three_party_form_has_four_families() {
        assert_eq!(rgs_strings(3), ["001", "010", "011", "012"]);
        let blocks: Vec<_> = enumerate_terms(3)
            .unwrap()
            .terms()
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(blocks, ["{0,1}{2}", "{0,2}{1}", "{0}{1,2}", "{0}{1}{2}"]);
    }

    #[test]
    fn four_party_first_term_and_count() {
        let form = enumerate_terms(4).unwrap();
        assert_eq!(form.len(), 14);
        assert_eq!(form.terms()[0].rgs(), &[0, 0, 0, 1]);
    }

    #[test]
    fn enumeration_bounds() {
        assert!(matches!(enumerate_terms(1), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_terms(13), Err(Error::Capacity(_))));
        assert!(TermIter::new(12).is_ok());
    }

    #[test]
    fn brute_force_small_cases() {
        assert_eq!(brute_force_partitions(1).unwrap(), vec![vec![vec![0]]]);
        assert_eq!(
            brute_force_partitions(2).unwrap(),
            vec![vec![vec![0, 1]], vec![vec![0], vec![1]]]
        );
        assert_eq!(brute_force_partitions(4).unwrap().len(), 15);
        assert!(matches!(brute_force_partitions(11), Err(Error::Capacity(_))));
    }

    #[test]
    fn rgs_validation() {
        assert!(PartitionTerm::from_rgs(vec![0, 0, 0]).is_err());
        assert!(PartitionTerm::from_rgs(vec![1, 0]).is_err());
        assert!(PartitionTerm::from_rgs(vec![0, 2]).is_err());
        assert!(PartitionTerm::from_rgs(vec![]).is_err());
        let t = PartitionTerm::from_rgs(vec![0, 1, 0]).unwrap();
        assert_eq!(t.blocks(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn from_blocks_canonicalizes_labels() {
        let t = PartitionTerm::from_blocks(3, &[vec![2], vec![1, 0]]).unwrap();
        assert_eq!(t.rgs(), &[0, 0, 1]);
        assert!(PartitionTerm::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(PartitionTerm::from_blocks(3, &[vec![0, 1, 2]]).is_err());
        assert!(PartitionTerm::from_blocks(2, &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn splits_only_entangled_blocks() {
        let t = PartitionTerm::from_rgs(vec![0, 0, 1]).unwrap();
        assert!(t.splits(&[0]));
        assert!(t.splits(&[1, 2]));
        assert!(!t.splits(&[2]));
        assert!(!t.splits(&[0, 1]));
    }

    #[test]
    fn term_json_shape() {
        let t = PartitionTerm::from_rgs(vec![0, 0, 1]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"n":3,"rgs":[0,0,1],"blocks":[[0,1],[2]]}"#);
        let back: PartitionTerm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<PartitionTerm>(r#"{"n":3,"rgs":[0,0,1],"blocks":[[0],[1,2]]}"#).is_err());
        assert!(serde_json::from_str::<PartitionTerm>(r#"{"n":2,"rgs":[0,0,1],"blocks":[[0,1],[2]]}"#).is_err());
    }

    #[test]
    fn growth_rows() {
        let rows = growth_report(6).unwrap();
        assert_eq!(rows.len(), 5);
        let flags: Vec<bool> = rows.iter().map(|r| r.exceeds).collect();
        assert_eq!(flags, [false, false, false, true, true]);
        assert_eq!(rows[2].term_count, BigUint::from(14u32));
        assert_eq!(rows[2].two_pow_n, BigUint::from(16u32));
        assert_eq!(rows[3].term_count, BigUint::from(51u32));
        assert_eq!(rows[3].two_pow_n, BigUint::from(32u32));
        assert!(growth_report(1).is_err());
        assert!(growth_report(65).is_err());
        assert_eq!(growth_report(2).unwrap().len(), 1);
    }

    #[test]
    fn growth_csv_format() {
        let mut buf = Vec::new();
        write_growth_csv(&growth_report(3).unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,bell,term_count,two_pow_n,exceeds\n2,2,1,4,false\n3,5,4,8,false\n"
        );
    }

    #[test]
    fn from_terms_rejects_incomplete_or_unordered() {
        let form = enumerate_terms(3).unwrap();
        let mut terms = form.terms().to_vec();
        assert!(DisentangledForm::from_terms(3, terms.clone()).is_ok());
        terms.swap(0, 1);
        assert!(DisentangledForm::from_terms(3, terms.clone()).is_err());
        terms.pop();
        assert!(DisentangledForm::from_terms(3, terms).is_err());
    }
}
