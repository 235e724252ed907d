//! Hereditarily finite objects over bit-string atoms.
//!
//! Objects are kept canonical: children sorted and deduplicated, atoms
//! before sets, atoms in lexicographic order, sets compared child by child.
//! The derived `Ord` on [`HfObject`] is exactly that order, so structural
//! equality is set equality.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{check_dim, Error, Result};
use crate::group::{PermGroup, SymEngine};
use crate::perm::{AutPair, PositionPerm};
use crate::preorder::OrderedPartition;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HfObject {
    Atom(BitString),
    Set(Vec<HfObject>),
}

impl HfObject {
    pub fn empty() -> Self {
        HfObject::Set(Vec::new())
    }

    pub fn atom(a: BitString) -> Self {
        HfObject::Atom(a)
    }

    /// Canonical set of the given children.
    pub fn set<I: IntoIterator<Item = HfObject>>(children: I) -> Self {
        let mut v: Vec<HfObject> = children.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        HfObject::Set(v)
    }

    pub fn atoms_of<'a, I: IntoIterator<Item = &'a BitString>>(atoms: I) -> Self {
        HfObject::set(atoms.into_iter().copied().map(HfObject::Atom))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, HfObject::Atom(_))
    }

    pub fn children(&self) -> &[HfObject] {
        match self {
            HfObject::Atom(_) => &[],
            HfObject::Set(c) => c,
        }
    }

    /// Rebuilds bottom-up; a no-op on anything built through this API.
    pub fn canonical(&self) -> Self {
        match self {
            HfObject::Atom(a) => HfObject::Atom(*a),
            HfObject::Set(c) => HfObject::set(c.iter().map(HfObject::canonical)),
        }
    }

    /// Common atom length, `None` when the object has no atoms.
    pub fn atom_dim(&self) -> Result<Option<usize>> {
        fn walk(x: &HfObject, dim: &mut Option<usize>) -> Result<()> {
            match x {
                HfObject::Atom(a) => match *dim {
                    None => *dim = Some(a.len()),
                    Some(d) => check_dim(d, a.len())?,
                },
                HfObject::Set(c) => {
                    for y in c {
                        walk(y, dim)?;
                    }
                }
            }
            Ok(())
        }
        let mut dim = None;
        walk(self, &mut dim)?;
        Ok(dim)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        match self.atom_dim()? {
            Some(d) => check_dim(n, d),
            None => Ok(()),
        }
    }

    /// Replaces every atom by `f(atom)` and re-canonicalizes.
    pub fn map_atoms<F: Fn(BitString) -> BitString + Copy>(&self, f: F) -> Self {
        match self {
            HfObject::Atom(a) => HfObject::Atom(f(*a)),
            HfObject::Set(c) => HfObject::set(c.iter().map(|y| y.map_atoms(f))),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            HfObject::Atom(_) => 0,
            HfObject::Set(c) => 1 + c.iter().map(HfObject::depth).max().unwrap_or(0),
        }
    }
}

/// `|tc(x)|`: distinct members of the least transitive set containing `x`,
/// counting `x` itself.
pub fn transitive_closure_size(x: &HfObject) -> usize {
    fn walk<'a>(x: &'a HfObject, seen: &mut HashSet<&'a HfObject>) {
        if seen.insert(x) {
            for y in x.children() {
                walk(y, seen);
            }
        }
    }
    let mut seen = HashSet::new();
    walk(x, &mut seen);
    seen.len()
}

pub fn apply_perm_hf(pi: &PositionPerm, x: &HfObject) -> Result<HfObject> {
    x.check_degree(pi.degree())?;
    Ok(x.map_atoms(|a| pi.apply_unchecked(a)))
}

pub fn apply_aut_hf(sigma: &AutPair, x: &HfObject) -> Result<HfObject> {
    x.check_degree(sigma.degree())?;
    Ok(x.map_atoms(|a| sigma.apply_unchecked(a)))
}

/// `{C_1, {C_2, … {C_m, ∅}}}` with each class as a set of atoms.
pub fn encode_ordered_partition(p: &OrderedPartition) -> Result<HfObject> {
    if p.is_empty() {
        return Err(Error::Empty("ordered partition"));
    }
    Ok(p
        .classes()
        .iter()
        .rev()
        .fold(HfObject::empty(), |tail, c| {
            HfObject::set([HfObject::atoms_of(c), tail])
        }))
}

/// Which automorphisms act on atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Action {
    /// `Sym_n` permuting positions.
    #[default]
    Positions,
    /// All of `Aut(H_n)`: `v ↦ π(v) ⊕ w`.
    Full,
}

/// True iff every element of the acting group fixes `x`. Checking a
/// generating set suffices.
pub fn is_symmetric(x: &HfObject, n: usize, action: Action) -> Result<bool> {
    x.check_degree(n)?;
    let sym = PermGroup::symmetric(n)?;
    for g in sym.generators() {
        if apply_perm_hf(&g, x)? != *x {
            return Ok(false);
        }
    }
    if action == Action::Full {
        let flip = AutPair::new(
            PositionPerm::identity(n)?,
            BitString::zeros(n)?.with_bit(0, true),
        )?;
        if apply_aut_hf(&flip, x)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomial with non-negative integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = 1;
        Polynomial { coeffs }
    }

    pub fn eval(&self, m: &BigUint) -> BigUint {
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &c| acc * m + BigUint::from(c))
    }
}

/// `|tc(x)| ≤ p(universe_size)`.
pub fn is_p_bounded(x: &HfObject, p: &Polynomial, universe_size: u64) -> bool {
    BigUint::from(transitive_closure_size(x)) <= p.eval(&BigUint::from(universe_size))
}

/// Number of distinct images of `x` under the acting group.
pub fn orbit_hf(engine: &SymEngine, x: &HfObject, n: usize, action: Action) -> Result<u64> {
    x.check_degree(n)?;
    let words: Vec<BitString> = match action {
        Action::Positions => vec![BitString::zeros(n)?],
        Action::Full => BitString::all(n)?.collect(),
    };
    let shards = engine.map_shards(n, |it| {
        let mut seen = HashSet::new();
        for pi in it {
            for &w in &words {
                let sigma = AutPair::new(pi, w).expect("dimensions match");
                seen.insert(x.map_atoms(|a| sigma.apply_unchecked(a)));
            }
        }
        seen
    })?;
    let mut all = HashSet::new();
    for s in shards {
        all.extend(s);
    }
    Ok(all.len() as u64)
}

/// Position permutations fixing `x`.
pub fn stabilizer_hf(engine: &SymEngine, x: &HfObject, n: usize) -> Result<PermGroup> {
    x.check_degree(n)?;
    engine.subgroup(n, |pi| x.map_atoms(|a| pi.apply_unchecked(a)) == *x)
}

impl fmt::Display for HfObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HfObject::Atom(a) => write!(f, "{a}"),
            HfObject::Set(c) => {
                f.write_str("{")?;
                for (i, y) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{y}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for HfObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: Option<usize>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            msg: format!("{msg} at byte {}", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn object(&mut self) -> Result<HfObject> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                let mut children = Vec::new();
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(HfObject::empty());
                }
                loop {
                    children.push(self.object()?);
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(HfObject::set(children));
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
            }
            Some(b'0' | b'1') => {
                let start = self.pos;
                while matches!(self.src.get(self.pos), Some(b'0' | b'1')) {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let a: BitString = word.parse()?;
                match self.dim {
                    None => self.dim = Some(a.len()),
                    Some(d) if d != a.len() => {
                        return Err(self.err(&format!("atom {word} has length {}, expected {d}", a.len())))
                    }
                    _ => {}
                }
                Ok(HfObject::Atom(a))
            }
            _ => Err(self.err("expected '{' or an atom")),
        }
    }
}

impl FromStr for HfObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            dim: None,
        };
        let x = p.object()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(x)
    }
}

impl Serialize for HfObject {
    /// Atoms as strings, sets as arrays.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HfObject::Atom(a) => a.serialize(s),
            HfObject::Set(c) => s.collect_seq(c),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HfRepr {
    Atom(BitString),
    Set(Vec<HfRepr>),
}

impl From<HfRepr> for HfObject {
    fn from(r: HfRepr) -> Self {
        match r {
            HfRepr::Atom(a) => HfObject::Atom(a),
            HfRepr::Set(c) => HfObject::set(c.into_iter().map(HfObject::from)),
        }
    }
}

impl<'de> Deserialize<'de> for HfObject {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = HfObject::from(HfRepr::deserialize(d)?);
        x.atom_dim().map_err(serde::de::Error::custom)?;
        Ok(x)
    }
}
