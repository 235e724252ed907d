//! Ordered partitions of `{0,1}^n` (the colour classes of a total preorder),
//! instance families, validation, and case classification.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{check_n, BitString, PosSet, StringSet};
use crate::error::{check_dim, Error, Result};
use crate::partition::{coarsest_supporting_partition, Partition};

/// Colour classes `(C_1, …, C_m)` partitioning `{0,1}^n`; order matters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrderedPartition {
    n: usize,
    classes: Vec<StringSet>,
}

impl OrderedPartition {
    /// Requires non-empty, pairwise disjoint classes covering `{0,1}^n`.
    pub fn new(n: usize, classes: Vec<StringSet>) -> Result<Self> {
        check_n(n)?;
        let report = validate_classes(n, &classes, None)?;
        if let Some(msg) = report.structural_failure() {
            return Err(Error::InvalidOrderedPartition(msg));
        }
        Ok(OrderedPartition { n, classes })
    }

    pub fn parse_classes<S: AsRef<str>>(classes: &[Vec<S>]) -> Result<Self> {
        let sets = classes
            .iter()
            .map(|c| StringSet::parse(c))
            .collect::<Result<Vec<_>>>()?;
        let n = sets
            .first()
            .ok_or(Error::Empty("ordered partition"))?
            .dim();
        OrderedPartition::new(n, sets)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[StringSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(StringSet::len).max().unwrap_or(0)
    }

    /// `table[packed(v)]` = index of the class holding `v`.
    pub fn class_table(&self) -> Vec<u16> {
        let mut t = vec![0u16; 1 << self.n];
        for (i, c) in self.classes.iter().enumerate() {
            for v in c {
                t[v.packed() as usize] = i as u16;
            }
        }
        t
    }

    pub fn validate(&self, c: u64) -> ValidationReport {
        validate_classes(self.n, &self.classes, Some(c)).expect("dimensions already checked")
    }

    pub fn to_json(&self) -> OrderedPartitionJson {
        OrderedPartitionJson {
            n: self.n,
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }
}

impl fmt::Display for OrderedPartition {
    /// One class per line, strings separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.classes {
            let mut first = true;
            for v in c {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderedPartitionJson {
    pub n: usize,
    pub classes: Vec<Vec<String>>,
}

/// Parses the text format into raw classes without enforcing cover or
/// disjointness, so that [`validate_classes`] can report on them.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_classes_text(text: &str) -> Result<(usize, Vec<StringSet>)> {
    let mut n = None;
    let mut classes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = Vec::new();
        for w in line.split_whitespace() {
            let b: BitString = w.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid bit string {w:?}"),
            })?;
            match n {
                None => n = Some(b.len()),
                Some(d) if d != b.len() => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("string {w} has length {}, expected {d}", b.len()),
                    })
                }
                _ => {}
            }
            words.push(b);
        }
        let dim = n.expect("non-empty line sets n");
        let before = words.len();
        let set = StringSet::new(dim, words).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        if set.len() != before {
            return Err(Error::Parse {
                line: line_no,
                msg: "class lists a string more than once".into(),
            });
        }
        classes.push(set);
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "no colour classes".into(),
    })?;
    Ok((n, classes))
}

/// Parses the JSON format (`{"n", "classes"}` or a bare array of classes).
pub fn parse_classes_json(text: &str) -> Result<(usize, Vec<StringSet>)> {
    let parse_err = |msg: String| Error::Parse { line: 0, msg };
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
    let (declared, raw) = match value {
        serde_json::Value::Array(_) => (
            None,
            serde_json::from_value::<Vec<Vec<String>>>(value)
                .map_err(|e| parse_err(e.to_string()))?,
        ),
        _ => {
            let j: OrderedPartitionJson =
                serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?;
            (Some(j.n), j.classes)
        }
    };
    let mut n = declared;
    let mut classes = Vec::new();
    for (i, c) in raw.iter().enumerate() {
        let words = c
            .iter()
            .map(|w| {
                w.parse::<BitString>()
                    .map_err(|_| parse_err(format!("class {}: invalid bit string {w:?}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        for w in &words {
            match n {
                None => n = Some(w.len()),
                Some(d) if d != w.len() => {
                    return Err(parse_err(format!(
                        "class {}: string {w} has length {}, expected {d}",
                        i + 1,
                        w.len()
                    )))
                }
                _ => {}
            }
        }
        let before = words.len();
        let dim = n.ok_or_else(|| parse_err(format!("class {} is empty", i + 1)))?;
        let set = StringSet::new(dim, words).map_err(|e| parse_err(e.to_string()))?;
        if set.len() != before {
            return Err(parse_err(format!("class {} lists a string twice", i + 1)));
        }
        classes.push(set);
    }
    let n = n.ok_or_else(|| parse_err("no colour classes".into()))?;
    Ok((n, classes))
}

/// Outcome of checking cover, disjointness, non-emptiness, and the size bound.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub n: usize,
    pub classes: usize,
    pub nonempty_ok: bool,
    pub disjoint_ok: bool,
    pub cover_ok: bool,
    /// `None` when no size bound was requested.
    pub size_ok: Option<bool>,
    pub c: Option<u64>,
    pub max_class_size: usize,
    pub empty_classes: Vec<usize>,
    pub duplicated: Vec<BitString>,
    pub missing: Vec<BitString>,
    /// 1-based indices of classes larger than `c·n`.
    pub oversized: Vec<usize>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.nonempty_ok && self.disjoint_ok && self.cover_ok && self.size_ok.unwrap_or(true)
    }

    /// Description of the first partition-invariant failure, if any.
    pub fn structural_failure(&self) -> Option<String> {
        if !self.nonempty_ok {
            return Some(format!("empty classes at {:?}", self.empty_classes));
        }
        if !self.disjoint_ok {
            return Some(format!("strings in several classes: {:?}", self.duplicated));
        }
        if !self.cover_ok {
            let shown: Vec<_> = self.missing.iter().take(8).collect();
            return Some(format!(
                "{} strings missing from every class, e.g. {shown:?}",
                self.missing.len()
            ));
        }
        None
    }
}

/// Checks the colour-class hypotheses: every string occurs, classes are
/// disjoint and non-empty, and (when `c` is given) `|C| ≤ c·n`.
pub fn validate_classes(n: usize, classes: &[StringSet], c: Option<u64>) -> Result<ValidationReport> {
    check_n(n)?;
    let mut count = vec![0u32; 1 << n];
    for cls in classes {
        check_dim(n, cls.dim())?;
        for v in cls {
            count[v.packed() as usize] += 1;
        }
    }
    let empty_classes: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_empty())
        .map(|(i, _)| i + 1)
        .collect();
    let mut duplicated = Vec::new();
    let mut missing = Vec::new();
    for v in BitString::all(n)? {
        match count[v.packed() as usize] {
            0 => missing.push(v),
            1 => {}
            _ => duplicated.push(v),
        }
    }
    let max_class_size = classes.iter().map(StringSet::len).max().unwrap_or(0);
    let oversized: Vec<usize> = match c {
        Some(c) => classes
            .iter()
            .enumerate()
            .filter(|(_, cls)| cls.len() as u64 > c * n as u64)
            .map(|(i, _)| i + 1)
            .collect(),
        None => vec![],
    };
    Ok(ValidationReport {
        n,
        classes: classes.len(),
        nonempty_ok: empty_classes.is_empty() && !classes.is_empty(),
        disjoint_ok: duplicated.is_empty(),
        cover_ok: missing.is_empty(),
        size_ok: c.map(|_| oversized.is_empty()),
        c,
        max_class_size,
        empty_classes,
        duplicated,
        missing,
        oversized,
    })
}

pub fn validate(p: &OrderedPartition, c: u64) -> ValidationReport {
    p.validate(c)
}

/// Classes by Hamming weight, `0..=n`.
pub fn hamming_preorder(n: usize) -> Result<OrderedPartition> {
    check_n(n)?;
    let mut classes = vec![Vec::new(); n + 1];
    for v in BitString::all(n)? {
        classes[v.weight()].push(v);
    }
    let classes = classes
        .into_iter()
        .map(|c| StringSet::new(n, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderedPartition { n, classes })
}

fn block_size(n: usize, c: u64) -> Result<usize> {
    check_n(n)?;
    let size = c
        .checked_mul(n as u64)
        .filter(|&s| s >= 1 && s <= 1 << n)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("block size c·n = {c}·{n} must lie in 1..=2^n"))
        })?;
    Ok(size as usize)
}

fn chunked(n: usize, strings: Vec<BitString>, size: usize) -> Result<OrderedPartition> {
    let classes = strings
        .chunks(size)
        .map(|ch| StringSet::new(n, ch.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderedPartition { n, classes })
}

/// Consecutive lexicographic blocks of size `c·n` (the last may be smaller).
pub fn lex_block_preorder(n: usize, c: u64) -> Result<OrderedPartition> {
    let size = block_size(n, c)?;
    chunked(n, BitString::all(n)?.collect(), size)
}

/// A seeded uniform shuffle of `{0,1}^n` cut into blocks of size `c·n`.
pub fn random_block_preorder(n: usize, c: u64, seed: u64) -> Result<OrderedPartition> {
    let size = block_size(n, c)?;
    let mut strings: Vec<BitString> = BitString::all(n)?.collect();
    strings.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    chunked(n, strings, size)
}

/// Every string in its own class, lexicographic order.
pub fn singleton_preorder(n: usize) -> Result<OrderedPartition> {
    lex_block_preorder(n, 0).or_else(|_| chunked(n, BitString::all(n)?.collect(), 1))
}

/// A seeded shuffle cut at random points into classes of random sizes.
pub fn random_cut_preorder(n: usize, seed: u64) -> Result<OrderedPartition> {
    use rand::Rng;
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strings: Vec<BitString> = BitString::all(n)?.collect();
    strings.shuffle(&mut rng);
    let mut classes = Vec::new();
    let mut rest = &strings[..];
    while !rest.is_empty() {
        let take = rng.random_range(1..=rest.len().min(2 * n));
        let (head, tail) = rest.split_at(take);
        classes.push(StringSet::new(n, head.iter().copied())?);
        rest = tail;
    }
    Ok(OrderedPartition { n, classes })
}

/// Named instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Hamming,
    LexBlock,
    RandomBlock,
    Singletons,
}

impl Family {
    pub fn generate(self, n: usize, c: u64, seed: u64) -> Result<OrderedPartition> {
        match self {
            Family::Hamming => hamming_preorder(n),
            Family::LexBlock => lex_block_preorder(n, c),
            Family::RandomBlock => random_block_preorder(n, c, seed),
            Family::Singletons => singleton_preorder(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Hamming => "hamming",
            Family::LexBlock => "lex-block",
            Family::RandomBlock => "random-block",
            Family::Singletons => "singletons",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hamming" => Family::Hamming,
            "lex-block" => Family::LexBlock,
            "random-block" => Family::RandomBlock,
            "singletons" => Family::Singletons,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family {s:?} (expected hamming, lex-block, random-block, singletons)"
                )))
            }
        })
    }
}

/// Finite-n stand-ins for the asymptotic case split. A quantity counts as
/// "small" when `quantity ≤ fraction · n`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct CaseThresholds {
    pub support_fraction: f64,
    pub singleton_fraction: f64,
}

impl Default for CaseThresholds {
    fn default() -> Self {
        CaseThresholds {
            support_fraction: 0.5,
            singleton_fraction: 0.5,
        }
    }
}

impl CaseThresholds {
    pub fn support_is_sublinear(&self, sp_size: usize, n: usize) -> bool {
        sp_size as f64 <= self.support_fraction * n as f64
    }

    pub fn singletons_are_few(&self, singletons: usize, n: usize) -> bool {
        singletons as f64 <= self.singleton_fraction * n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    SublinearSupport,
    LinearSupportFewSingletons,
    LinearSupportManySingletons,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CaseReport {
    pub n: usize,
    /// 0-based index of `B_n`, the class whose coarsest support has the most parts.
    pub b_class_index: usize,
    pub sp_size: usize,
    /// `|S_n|` for the intersection of all class supports.
    pub singleton_count_global: usize,
    /// `|S_n|` for `SP(B_n)`.
    pub singleton_count_b: usize,
    pub max_class_size: usize,
    pub case_tag: CaseTag,
    pub thresholds: CaseThresholds,
    pub class_supports: Vec<Partition>,
    pub global_meet: Partition,
    pub global_singletons: PosSet,
}

/// Coarsest supports of every class, `B_n` (lowest index on ties), both
/// singleton sets, and the proxy case tag.
pub fn classify(p: &OrderedPartition, thresholds: CaseThresholds) -> Result<CaseReport> {
    let n = p.dim();
    let class_supports = p
        .classes()
        .iter()
        .map(coarsest_supporting_partition)
        .collect::<Result<Vec<_>>>()?;
    let mut b = 0;
    for (i, sp) in class_supports.iter().enumerate() {
        if sp.len() > class_supports[b].len() {
            b = i;
        }
    }
    let mut meet = Partition::single_part(n)?;
    for sp in &class_supports {
        meet = meet.intersect(sp)?;
    }
    let sp_b = &class_supports[b];
    let sp_size = sp_b.len();
    let singleton_count_b = sp_b.singleton_positions().len();
    let case_tag = if thresholds.support_is_sublinear(sp_size, n) {
        CaseTag::SublinearSupport
    } else if thresholds.singletons_are_few(singleton_count_b, n) {
        CaseTag::LinearSupportFewSingletons
    } else {
        CaseTag::LinearSupportManySingletons
    };
    let global_singletons = meet.singleton_positions();
    Ok(CaseReport {
        n,
        b_class_index: b,
        sp_size,
        singleton_count_global: global_singletons.len(),
        singleton_count_b,
        max_class_size: p.max_class_size(),
        case_tag,
        thresholds,
        class_supports,
        global_meet: meet,
        global_singletons,
    })
}
