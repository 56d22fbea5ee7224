//! Total orderings on assignments with rank and unrank.
//!
//! Every ordering here is "simple": the position of an assignment and the
//! assignment at a position are both cheap to compute. Ranks are 0-indexed,
//! so the first assignment of an ordering has rank 0 and the last has rank
//! `size - 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{space_size, Assignment, Shape, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Lex,
    RevLex,
    Gray,
    SnakeLex,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 4] =
        [OrderingKind::Lex, OrderingKind::RevLex, OrderingKind::Gray, OrderingKind::SnakeLex];

    pub fn name(self) -> &'static str {
        match self {
            OrderingKind::Lex => "lex",
            OrderingKind::RevLex => "revlex",
            OrderingKind::Gray => "gray",
            OrderingKind::SnakeLex => "snakelex",
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(OrderingKind::Lex),
            "revlex" => Ok(OrderingKind::RevLex),
            "gray" => Ok(OrderingKind::Gray),
            "snakelex" => Ok(OrderingKind::SnakeLex),
            other => Err(Error::UnsupportedOrdering(other.to_string())),
        }
    }
}

/// Column-wise serpentine order of cell indices: columns left to right,
/// odd-indexed columns read bottom to top.
pub fn snake_order(shape: Shape) -> Vec<usize> {
    let mut order = Vec::with_capacity(shape.cells());
    for col in 0..shape.cols {
        if col % 2 == 0 {
            order.extend((0..shape.rows).map(|row| shape.index(row, col)));
        } else {
            order.extend((0..shape.rows).rev().map(|row| shape.index(row, col)));
        }
    }
    order
}

pub fn snake_vectorize(a: &Assignment, shape: Shape) -> Result<Vec<Value>> {
    if a.len() != shape.cells() {
        return Err(Error::ArityMismatch { expected: shape.cells(), actual: a.len() });
    }
    Ok(snake_order(shape).into_iter().map(|i| a.get(i)).collect())
}

/// Reflected binary Gray codeword of `k`.
pub fn gray_encode(k: u128) -> u128 {
    k ^ (k >> 1)
}

/// Inverse of [`gray_encode`] (prefix XOR).
pub fn gray_decode(mut code: u128) -> u128 {
    let mut shift = 1;
    while shift < 128 {
        code ^= code >> shift;
        shift <<= 1;
    }
    code
}

/// A total order on the assignments of a fixed domain list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleOrdering {
    kind: OrderingKind,
    domains: Vec<Vec<Value>>,
    shape: Option<Shape>,
    /// Variable read order; `None` means natural order.
    order: Option<Vec<usize>>,
    size: u128,
}

impl SimpleOrdering {
    pub fn new(kind: OrderingKind, domains: Vec<Vec<Value>>, shape: Option<Shape>) -> Result<Self> {
        let size = space_size(&domains).ok_or(Error::RankOverflow)?;
        if domains.iter().any(Vec::is_empty) {
            return Err(Error::InvalidProblem("empty domain".into()));
        }
        let order = match kind {
            OrderingKind::SnakeLex => {
                let shape = shape.ok_or(Error::MissingShape)?;
                if shape.cells() != domains.len() {
                    return Err(Error::InvalidProblem(format!(
                        "shape {shape} does not match {} variables",
                        domains.len()
                    )));
                }
                Some(snake_order(shape))
            }
            OrderingKind::Gray => {
                if let Some(var) = domains.iter().position(|d| d.len() != 2) {
                    return Err(Error::UnsupportedOrdering(format!(
                        "gray ordering needs binary domains; variable {var} has {} values",
                        domains[var].len()
                    )));
                }
                None
            }
            OrderingKind::Lex | OrderingKind::RevLex => None,
        };
        Ok(SimpleOrdering { kind, domains, shape, order, size })
    }

    pub fn lex(domains: Vec<Vec<Value>>) -> Result<Self> {
        Self::new(OrderingKind::Lex, domains, None)
    }

    /// `n` variables over `{0, 1}`.
    pub fn binary(kind: OrderingKind, n: usize, shape: Option<Shape>) -> Result<Self> {
        Self::new(kind, vec![vec![0, 1]; n], shape)
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn shape(&self) -> Option<Shape> {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.domains.len()
    }

    /// Number of assignments in the space.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// Same ordering kind over another domain list.
    pub fn rebind(&self, domains: Vec<Vec<Value>>) -> Result<Self> {
        Self::new(self.kind, domains, self.shape)
    }

    fn positions(&self, a: &Assignment) -> Result<Vec<usize>> {
        if a.len() != self.domains.len() {
            return Err(Error::ArityMismatch { expected: self.domains.len(), actual: a.len() });
        }
        a.values()
            .iter()
            .zip(&self.domains)
            .enumerate()
            .map(|(var, (v, d))| {
                d.iter().position(|x| x == v).ok_or(Error::ValueOutOfDomain { var, value: *v })
            })
            .collect()
    }

    fn read_order(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match &self.order {
            Some(order) => Box::new(order.iter().copied()),
            None => Box::new(0..self.domains.len()),
        }
    }

    pub fn compare(&self, a: &Assignment, b: &Assignment) -> Result<Ordering> {
        let pa = self.positions(a)?;
        let pb = self.positions(b)?;
        Ok(match self.kind {
            OrderingKind::Lex | OrderingKind::SnakeLex => {
                self.read_order().map(|i| pa[i].cmp(&pb[i])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            }
            OrderingKind::RevLex => pa.cmp(&pb).reverse(),
            OrderingKind::Gray => {
                // parity of the shared prefix decides which bit comes first
                let mut odd = false;
                for (x, y) in pa.iter().zip(&pb) {
                    if x != y {
                        let ord = x.cmp(y);
                        return Ok(if odd { ord.reverse() } else { ord });
                    }
                    odd ^= *x == 1;
                }
                Ordering::Equal
            }
        })
    }

    /// Lexicographic mixed-radix rank of `a` in natural variable order.
    pub fn lex_rank(&self, a: &Assignment) -> Result<u128> {
        let pos = self.positions(a)?;
        Ok(mixed_radix(&self.domains, 0..self.domains.len(), &pos))
    }

    pub fn lex_unrank(&self, k: u128) -> Result<Assignment> {
        self.check_rank(k)?;
        Ok(self.assignment_at(&mixed_radix_digits(&self.domains, 0..self.domains.len(), k)))
    }

    pub fn rank(&self, a: &Assignment) -> Result<u128> {
        let pos = self.positions(a)?;
        Ok(match self.kind {
            OrderingKind::Lex => mixed_radix(&self.domains, 0..self.domains.len(), &pos),
            OrderingKind::RevLex => self.size - 1 - mixed_radix(&self.domains, 0..self.domains.len(), &pos),
            OrderingKind::SnakeLex => mixed_radix(&self.domains, self.read_order(), &pos),
            OrderingKind::Gray => {
                let code = pos.iter().fold(0u128, |acc, &bit| (acc << 1) | bit as u128);
                gray_decode(code)
            }
        })
    }

    pub fn unrank(&self, k: u128) -> Result<Assignment> {
        self.check_rank(k)?;
        let n = self.domains.len();
        let pos = match self.kind {
            OrderingKind::Lex => mixed_radix_digits(&self.domains, 0..n, k),
            OrderingKind::RevLex => mixed_radix_digits(&self.domains, 0..n, self.size - 1 - k),
            OrderingKind::SnakeLex => mixed_radix_digits(&self.domains, self.read_order(), k),
            OrderingKind::Gray => {
                let code = gray_encode(k);
                (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as usize).collect()
            }
        };
        Ok(self.assignment_at(&pos))
    }

    fn check_rank(&self, k: u128) -> Result<()> {
        if k >= self.size {
            Err(Error::RankOutOfRange { rank: k, size: self.size })
        } else {
            Ok(())
        }
    }

    fn assignment_at(&self, pos: &[usize]) -> Assignment {
        Assignment::new(pos.iter().zip(&self.domains).map(|(&p, d)| d[p]).collect())
    }
}

fn mixed_radix(domains: &[Vec<Value>], order: impl Iterator<Item = usize>, pos: &[usize]) -> u128 {
    order.fold(0u128, |acc, i| acc * domains[i].len() as u128 + pos[i] as u128)
}

/// Positions indexed by variable, with digits laid out along `order`.
fn mixed_radix_digits(domains: &[Vec<Value>], order: impl Iterator<Item = usize>, mut k: u128) -> Vec<usize> {
    let order: Vec<usize> = order.collect();
    let mut pos = vec![0usize; domains.len()];
    for &i in order.iter().rev() {
        let radix = domains[i].len() as u128;
        pos[i] = (k % radix) as usize;
        k /= radix;
    }
    pos
}

/// Bijection on the assignment space that carries one ordering onto another
/// position for position: `forward(a) = to.unrank(from.rank(a))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentPermutation {
    from: SimpleOrdering,
    to: SimpleOrdering,
}

impl AssignmentPermutation {
    pub fn between(from: SimpleOrdering, to: SimpleOrdering) -> Result<Self> {
        if from.domains != to.domains {
            return Err(Error::InvalidProblem("orderings must share the same domains".into()));
        }
        Ok(AssignmentPermutation { from, to })
    }

    pub fn identity(domains: Vec<Vec<Value>>) -> Result<Self> {
        let lex = SimpleOrdering::lex(domains)?;
        Ok(AssignmentPermutation { from: lex.clone(), to: lex })
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.from.domains
    }

    pub fn source(&self) -> &SimpleOrdering {
        &self.from
    }

    pub fn target(&self) -> &SimpleOrdering {
        &self.to
    }

    pub fn forward(&self, a: &Assignment) -> Result<Assignment> {
        self.to.unrank(self.from.rank(a)?)
    }

    pub fn inverse(&self, a: &Assignment) -> Result<Assignment> {
        self.from.unrank(self.to.rank(a)?)
    }

    pub fn inverted(&self) -> Self {
        AssignmentPermutation { from: self.to.clone(), to: self.from.clone() }
    }
}

/// The permutation mapping lex order onto `o`'s order.
pub fn build_pi(o: &SimpleOrdering) -> Result<AssignmentPermutation> {
    let lex = SimpleOrdering::lex(o.domains.clone())?;
    AssignmentPermutation::between(lex, o.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    const GRAY4: [&str; 16] = [
        "0000", "0001", "0011", "0010", "0110", "0111", "0101", "0100", "1100", "1101", "1111", "1110",
        "1010", "1011", "1001", "1000",
    ];

    #[test]
    fn lex_positions() {
        let o = SimpleOrdering::binary(OrderingKind::Lex, 5, None).unwrap();
        assert_eq!(o.rank(&bits("00000")).unwrap(), 0);
        assert_eq!(o.rank(&bits("00001")).unwrap(), 1);
        assert_eq!(o.rank(&bits("00010")).unwrap(), 2);
        assert_eq!(o.rank(&bits("11111")).unwrap(), 31);
        assert_eq!(o.unrank(1).unwrap(), bits("00001"));
        assert!(matches!(o.unrank(32), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn gray_listing_matches_four_bit_sequence() {
        let o = SimpleOrdering::binary(OrderingKind::Gray, 4, None).unwrap();
        for (k, code) in GRAY4.iter().enumerate() {
            assert_eq!(o.unrank(k as u128).unwrap().to_string(), *code);
            assert_eq!(o.rank(&bits(code)).unwrap(), k as u128);
        }
        assert_eq!(o.rank(&bits("0011")).unwrap(), 2);
        assert_eq!(o.unrank(7).unwrap(), bits("0100"));
    }

    #[test]
    fn gray_last_position_is_leading_one() {
        for n in 1..=12 {
            let o = SimpleOrdering::binary(OrderingKind::Gray, n, None).unwrap();
            let mut v = vec![0; n];
            v[0] = 1;
            assert_eq!(o.rank(&Assignment::new(v)).unwrap(), (1u128 << n) - 1);
        }
    }

    #[test]
    fn gray_rejects_non_binary() {
        let err = SimpleOrdering::new(OrderingKind::Gray, vec![vec![0, 1, 2]], None).unwrap_err();
        assert!(matches!(err, Error::UnsupportedOrdering(_)));
    }

    #[test]
    fn gray_compare_follows_listing() {
        let o = SimpleOrdering::binary(OrderingKind::Gray, 4, None).unwrap();
        assert_eq!(o.compare(&bits("0010"), &bits("0110")).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&bits("1000"), &bits("0000")).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(&bits("1011"), &bits("1011")).unwrap(), Ordering::Equal);
    }

    #[test]
    fn revlex_puts_zero_last() {
        let o = SimpleOrdering::binary(OrderingKind::RevLex, 3, None).unwrap();
        let zero = Assignment::zeros(3);
        for k in 0..7 {
            let other = o.unrank(k).unwrap();
            assert_eq!(o.compare(&zero, &other).unwrap(), Ordering::Greater);
        }
        assert_eq!(o.unrank(7).unwrap(), zero);
        assert_eq!(o.unrank(0).unwrap(), bits("111"));
    }

    #[test]
    fn snake_vectorization() {
        // [[a,b],[d,e]] -> (a,d,e,b)
        let m = Assignment::new(vec![1, 2, 4, 5]);
        assert_eq!(snake_vectorize(&m, Shape::new(2, 2)).unwrap(), [1, 4, 5, 2]);
        // [[a,b],[c,d],[e,f]] -> (a,c,e,f,d,b)
        let m = Assignment::new(vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(snake_vectorize(&m, Shape::new(3, 2)).unwrap(), [1, 3, 5, 6, 4, 2]);
        let row = Assignment::new(vec![7, 8, 9]);
        assert_eq!(snake_vectorize(&row, Shape::new(1, 3)).unwrap(), [7, 8, 9]);
        assert!(snake_vectorize(&row, Shape::new(2, 2)).is_err());
    }

    #[test]
    fn snakelex_needs_shape() {
        assert_eq!(SimpleOrdering::binary(OrderingKind::SnakeLex, 4, None), Err(Error::MissingShape));
    }

    #[test]
    fn snakelex_rank_reads_serpentine_vector() {
        let shape = Shape::new(2, 2);
        let o = SimpleOrdering::binary(OrderingKind::SnakeLex, 4, Some(shape)).unwrap();
        // matrix [[0,1],[0,0]] vectorizes to 0001
        assert_eq!(o.rank(&bits("0100")).unwrap(), 1);
        assert_eq!(o.unrank(2).unwrap(), bits("0001"));
    }

    #[test]
    fn non_binary_lex_uses_domain_positions() {
        let o = SimpleOrdering::lex(vec![vec![5, 3], vec![2, 0, 1]]).unwrap();
        assert_eq!(o.size(), 6);
        assert_eq!(o.unrank(0).unwrap().values(), [5, 2]);
        assert_eq!(o.unrank(4).unwrap().values(), [3, 0]);
        assert_eq!(
            o.compare(&Assignment::new(vec![3, 2]), &Assignment::new(vec![5, 1])).unwrap(),
            Ordering::Greater
        );
        assert!(o.rank(&Assignment::new(vec![4, 2])).is_err());
    }

    #[test]
    fn counter_width_is_enforced() {
        assert_eq!(SimpleOrdering::binary(OrderingKind::Lex, 129, None), Err(Error::RankOverflow));
        let o = SimpleOrdering::binary(OrderingKind::Gray, 127, None).unwrap();
        let top = o.size() - 1;
        assert_eq!(o.rank(&o.unrank(top).unwrap()).unwrap(), top);
    }

    #[test]
    fn pi_for_gray() {
        let o = SimpleOrdering::binary(OrderingKind::Gray, 4, None).unwrap();
        let pi = build_pi(&o).unwrap();
        assert_eq!(pi.forward(&bits("0010")).unwrap(), bits("0011"));
        assert_eq!(pi.inverse(&bits("0011")).unwrap(), bits("0010"));
        for k in 0..16u128 {
            let a = SimpleOrdering::binary(OrderingKind::Lex, 4, None).unwrap().unrank(k).unwrap();
            assert_eq!(pi.inverse(&pi.forward(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn pi_for_lex_is_identity() {
        let o = SimpleOrdering::binary(OrderingKind::Lex, 3, None).unwrap();
        let pi = build_pi(&o).unwrap();
        for k in 0..8 {
            let a = o.unrank(k).unwrap();
            assert_eq!(pi.forward(&a).unwrap(), a);
        }
    }

    #[test]
    fn gray_codec() {
        for k in 0..4096u128 {
            assert_eq!(gray_decode(gray_encode(k)), k);
        }
        assert_eq!(gray_encode(u128::MAX), u128::MAX ^ (u128::MAX >> 1));
    }
}
