use std::fmt;

use crate::coxeter::{CoxeterSystem, Element, Word};

use super::GeometryError;

/// A permutation of `{1, …, n}` in one-line notation, stored 0-based.
///
/// Composition is `(a ∘ b)(k) = a(b(k))`; the simple transposition
/// `(i, i+1)` corresponds to the Coxeter generator `s_i` of `A_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    /// From 1-based images `w(1), …, w(n)`.
    pub fn from_images(images: &[usize]) -> Result<Self, GeometryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(GeometryError::InvalidPermutation(format!("{images:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(images.iter().map(|&v| (v - 1) as u8).collect()))
    }

    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        Permutation(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// `w₀ : k ↦ n + 1 - k`.
    pub fn longest(n: usize) -> Self {
        Permutation((0..n as u8).rev().collect())
    }

    /// The transposition of `i + 1` and `i + 2` (0-based generator `i`).
    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, i + 1);
        p
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// 0-based image of the 0-based point `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.0[k] as usize
    }

    /// 1-based one-line notation.
    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&k| self.0[k as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len())
            .map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count())
            .sum()
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn extend(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v as u8);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    /// Position of `self` in [`Permutation::all`] (Lehmer code).
    pub fn rank(&self) -> usize {
        let w = &self.0;
        let n = w.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = (i + 1..n).filter(|&j| w[j] < w[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// A reduced word, peeling right descents `w(i) > w(i+1)`.
    pub fn reduced_word(&self) -> Word {
        let mut w = self.0.clone();
        let mut letters = Vec::new();
        while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            letters.push(i as u8);
        }
        letters.reverse();
        Word::new(letters)
    }

    /// The element of the type-`A_{n-1}` system `sys` with this permutation.
    pub fn to_element(&self, sys: &CoxeterSystem) -> Result<Element, GeometryError> {
        check_type_a(sys, self.n())?;
        Ok(sys.normal_form(&self.reduced_word())?)
    }

    /// Composes the simple transpositions along the normal form of `e`.
    pub fn from_element(sys: &CoxeterSystem, e: &Element) -> Result<Permutation, GeometryError> {
        let n = sys.rank() + 1;
        check_type_a(sys, n)?;
        let mut w = Permutation::identity(n);
        for &l in e.normal_form().letters() {
            w.0.swap(l as usize, l as usize + 1);
        }
        Ok(w)
    }
}

fn check_type_a(sys: &CoxeterSystem, n: usize) -> Result<(), GeometryError> {
    if sys.matrix().is_type_a() && sys.rank() + 1 == n {
        Ok(())
    } else {
        Err(GeometryError::NotTypeA { n })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.images().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", images.join(","))
    }
}
