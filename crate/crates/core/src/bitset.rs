//! Fixed-width vertex sets.
//!
//! Every host in this crate has at most [`MAX_VERTICES`] vertices, so a vertex
//! set is a plain array of words that lives on the stack and copies cheaply.
//! All candidate filtering in the counting engine and the isomorphism search
//! is expressed as word-wise intersections of these sets.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, Not, Sub};

/// Compile-time vertex limit for every triple system.
pub const MAX_VERTICES: usize = 512;

const WORDS: usize = MAX_VERTICES.div_ceil(64);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    words: [u64; WORDS],
}

impl Default for VertexSet {
    fn default() -> Self {
        Self::EMPTY
    }
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet { words: [0; WORDS] };

    /// The set `{0, 1, ..., n - 1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex set of size {n} exceeds limit");
        let mut s = Self::EMPTY;
        let whole = n / 64;
        for w in &mut s.words[..whole] {
            *w = u64::MAX;
        }
        if !n.is_multiple_of(64) {
            s.words[whole] = (1u64 << (n % 64)) - 1;
        }
        s
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(v);
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.words[v >> 6] & (1u64 << (v & 63)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.words,
            index: 0,
        }
    }
}

pub struct Iter {
    words: [u64; WORDS],
    index: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.index < WORDS {
            let w = &mut self.words[self.index];
            if *w != 0 {
                let bit = w.trailing_zeros() as usize;
                *w &= *w - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
        }
        None
    }
}

impl IntoIterator for &VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

macro_rules! word_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for VertexSet {
            type Output = VertexSet;
            #[inline]
            fn $method(mut self, rhs: VertexSet) -> VertexSet {
                for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
                    #[allow(clippy::assign_op_pattern)]
                    {
                        *a = *a $op *b;
                    }
                }
                self
            }
        }
    };
}

word_op!(BitAnd, bitand, &);
word_op!(BitOr, bitor, |);
word_op!(BitXor, bitxor, ^);

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(mut self, rhs: VertexSet) -> VertexSet {
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a &= !*b;
        }
        self
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    /// Complement within the full `MAX_VERTICES` universe; intersect with
    /// [`VertexSet::full`] to restrict to a host.
    #[inline]
    fn not(mut self) -> VertexSet {
        for a in self.words.iter_mut() {
            *a = !*a;
        }
        self
    }
}

impl BitAndAssign for VertexSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: VertexSet) {
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a &= *b;
        }
    }
}

impl BitOrAssign for VertexSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: VertexSet) {
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a |= *b;
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
