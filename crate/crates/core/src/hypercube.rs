//! The hypercube graph `H_n` and checks on its automorphisms.

use crate::bits::{check_n, BitString};
use crate::error::{check_dim, Error, Result};
use crate::perm::AutPair;

pub fn hamming_distance(u: BitString, v: BitString) -> Result<usize> {
    check_dim(u.len(), v.len())?;
    Ok((u.packed() ^ v.packed()).count_ones() as usize)
}

#[derive(Clone, Debug)]
pub struct Hypercube {
    n: usize,
    vertices: Vec<BitString>,
    edges: Vec<(BitString, BitString)>,
}

impl Hypercube {
    /// Builds `H_n`; vertices in lexicographic order, edges as `(u, v)` with `u < v`.
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let vertices: Vec<BitString> = BitString::all(n)?.collect();
        let mut edges = Vec::with_capacity(n << (n - 1));
        for &u in &vertices {
            for k in 0..n {
                if !u.bit(k) {
                    let v = u.with_bit(k, true);
                    let (a, b) = if u < v { (u, v) } else { (v, u) };
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        Ok(Hypercube { n, vertices, edges })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[BitString] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(BitString, BitString)] {
        &self.edges
    }

    pub fn degree(&self, v: BitString) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }
}

/// True iff `σ` maps the edge set of `H_n` onto itself.
pub fn is_hypercube_automorphism(sigma: &AutPair, n: usize) -> Result<bool> {
    check_dim(n, sigma.degree())?;
    let image: Vec<BitString> = BitString::all(n)?.map(|v| sigma.apply_unchecked(v)).collect();
    preserves_hypercube_edges(n, &image)
}

/// Checks an arbitrary vertex map given as images of `{0,1}^n` in lexicographic order:
/// true iff it is a bijection that maps `E_n` onto `E_n`.
pub fn preserves_hypercube_edges(n: usize, image: &[BitString]) -> Result<bool> {
    check_n(n)?;
    if image.len() != 1 << n {
        return Err(Error::InvalidParameter(format!(
            "vertex map has {} entries, expected {}",
            image.len(),
            1usize << n
        )));
    }
    let mut seen = vec![false; 1 << n];
    for v in image {
        check_dim(n, v.len())?;
        let slot = &mut seen[v.packed() as usize];
        if *slot {
            return Ok(false);
        }
        *slot = true;
    }
    // A bijection on a finite graph sending edges to edges maps E onto E.
    for (rank, u) in BitString::all(n)?.enumerate() {
        for k in 0..n {
            if u.bit(k) {
                continue;
            }
            let v = u.with_bit(k, true);
            let (iu, iv) = (image[rank], image[v.lex_rank() as usize]);
            if (iu.packed() ^ iv.packed()).count_ones() != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(bs("000"), bs("000")).unwrap(), 0);
        assert_eq!(hamming_distance(bs("01"), bs("10")).unwrap(), 2);
        assert_eq!(hamming_distance(bs("0011"), bs("0111")).unwrap(), 1);
        assert!(hamming_distance(bs("01"), bs("011")).is_err());
    }

    #[test]
    fn hypercube_sizes() {
        for (n, v, e) in [(1, 2, 1), (3, 8, 12), (5, 32, 80)] {
            let h = Hypercube::new(n).unwrap();
            assert_eq!(h.vertices().len(), v);
            assert_eq!(h.edges().len(), e);
            assert!(h.vertices().iter().all(|&x| h.degree(x) == n));
        }
        assert!(Hypercube::new(0).is_err());
        assert!(Hypercube::new(17).is_err());
    }

    #[test]
    fn non_automorphism_bijection() {
        // swap 00 <-> 01 only
        let image = [bs("01"), bs("00"), bs("10"), bs("11")];
        assert!(!preserves_hypercube_edges(2, &image).unwrap());
        let id = [bs("00"), bs("01"), bs("10"), bs("11")];
        assert!(preserves_hypercube_edges(2, &id).unwrap());
        assert!(is_hypercube_automorphism(&AutPair::identity(4).unwrap(), 4).unwrap());
    }
}
