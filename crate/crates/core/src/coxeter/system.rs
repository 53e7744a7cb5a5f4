use std::collections::hash_map::DefaultHasher;
use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::backend::{cartan_matrix, Backend, State};
use super::bruhat::ArrowGraph;
use super::classify::finite_order;
use super::element::{Element, ElementSet, SystemId, Word};
use super::matrix::{CoxeterMatrix, SystemSpec};
use super::CoxeterError;

/// Largest group that [`CoxeterSystem::enumerate`] builds without an explicit cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 500_000;

/// Which exact representation backs the arithmetic of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    /// Symmetric group `S_{n+1}` acting on one-line notation (type `A_n`).
    Permutation,
    /// Rank-2 alternating words.
    Dihedral,
    /// Integer generalized Cartan matrix acting on simple-root coordinates.
    Cartan,
}

/// A Coxeter system `(W, S)` with generators `0..rank`.
///
/// Cheap to clone; the enumerated group of a finite system is memoized.
#[derive(Clone)]
pub struct CoxeterSystem {
    inner: Arc<Inner>,
}

struct Inner {
    matrix: CoxeterMatrix,
    backend: Backend,
    realization: Realization,
    order: Option<u128>,
    id: SystemId,
    elements: OnceLock<Result<Arc<Vec<Element>>, CoxeterError>>,
    arrows: OnceLock<Result<Arc<ArrowGraph>, CoxeterError>>,
}

impl std::fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("matrix", &self.inner.matrix.to_string())
            .field("realization", &self.inner.realization)
            .field("order", &self.inner.order)
            .finish()
    }
}

/// Exact data identifying a reflection, depending on the backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootWitness {
    /// The transposition of the (1-based) points `i < j`, i.e. the root `e_i - e_j`.
    Transposition { i: usize, j: usize },
    /// The positive root on simple-root coordinates.
    Coordinates(Vec<i64>),
    /// The palindromic reduced word of length `2 * half + 1` starting with
    /// the 1-based generator `first`.
    Palindrome { first: usize, half: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Reflection {
    pub element: Element,
    pub root: RootWitness,
}

impl CoxeterSystem {
    /// Picks the permutation backend for type `A`, the dihedral backend for
    /// rank 2 and the integer Cartan realization otherwise.
    pub fn new(matrix: CoxeterMatrix) -> Result<Self, CoxeterError> {
        let rank = matrix.rank();
        let (backend, realization) = if matrix.is_type_a() {
            (Backend::Permutation { n: rank + 1 }, Realization::Permutation)
        } else if rank == 2 {
            (Backend::Dihedral { m: matrix.get(0, 1) }, Realization::Dihedral)
        } else {
            let cartan = cartan_matrix(&matrix).ok_or_else(|| {
                CoxeterError::UnsupportedMatrix(format!(
                    "no exact realization for {matrix}: entries must lie in {{2,3,4,6,inf}} \
                     for rank at least 3"
                ))
            })?;
            (Backend::Cartan { rank, cartan }, Realization::Cartan)
        };
        let mut hasher = DefaultHasher::new();
        matrix.hash(&mut hasher);
        let id = SystemId(hasher.finish());
        let order = finite_order(&matrix);
        Ok(CoxeterSystem {
            inner: Arc::new(Inner {
                matrix,
                backend,
                realization,
                order,
                id,
                elements: OnceLock::new(),
                arrows: OnceLock::new(),
            }),
        })
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self, CoxeterError> {
        Self::new(spec.to_matrix()?)
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.inner.matrix
    }

    pub fn rank(&self) -> usize {
        self.inner.matrix.rank()
    }

    pub fn realization(&self) -> Realization {
        self.inner.realization
    }

    pub fn id(&self) -> SystemId {
        self.inner.id
    }

    /// `|W|`, or `None` for an infinite group.
    pub fn order(&self) -> Option<u128> {
        self.inner.order
    }

    pub fn is_finite(&self) -> bool {
        self.inner.order.is_some()
    }

    pub(crate) fn backend(&self) -> &Backend {
        &self.inner.backend
    }

    pub(crate) fn arrow_graph_cell(&self) -> &OnceLock<Result<Arc<ArrowGraph>, CoxeterError>> {
        &self.inner.arrows
    }

    pub(crate) fn element_from_state(&self, state: State) -> Element {
        let backend = &self.inner.backend;
        let rank = self.rank();
        let mut rest = state.clone();
        let mut letters = Vec::new();
        // The lexicographically least reduced word starts with the smallest
        // left descent, and so on recursively.
        while let Some(s) = (0..rank).find(|&s| backend.left_descent(&rest, s)) {
            letters.push(s as u8);
            backend.mul_left(&mut rest, s);
        }
        Element { system: self.inner.id, word: Word::new(letters), state }
    }

    pub(crate) fn check(&self, e: &Element) -> Result<(), CoxeterError> {
        if e.system == self.inner.id {
            Ok(())
        } else {
            Err(CoxeterError::SystemMismatch)
        }
    }

    pub(crate) fn check_generator(&self, s: usize) -> Result<(), CoxeterError> {
        if s < self.rank() {
            Ok(())
        } else {
            Err(CoxeterError::InvalidGenerator { index: s + 1, rank: self.rank() })
        }
    }

    pub fn identity(&self) -> Element {
        Element {
            system: self.inner.id,
            word: Word::empty(),
            state: self.inner.backend.identity(),
        }
    }

    /// The simple reflection with 0-based index `s`.
    pub fn generator(&self, s: usize) -> Result<Element, CoxeterError> {
        self.normal_form(&Word::new(vec![s as u8]))
    }

    pub(crate) fn state_of_word(&self, word: &Word) -> Result<State, CoxeterError> {
        let backend = &self.inner.backend;
        let mut st = backend.identity();
        for &l in word.letters() {
            self.check_generator(l as usize)?;
            backend.mul_right(&mut st, l as usize);
        }
        Ok(st)
    }

    /// The element represented by `word`, in canonical form.
    pub fn normal_form(&self, word: &Word) -> Result<Element, CoxeterError> {
        Ok(self.element_from_state(self.state_of_word(word)?))
    }

    /// Parses a 1-based word such as `"1 2 1"` and normalizes it.
    pub fn parse_element(&self, text: &str) -> Result<Element, CoxeterError> {
        self.normal_form(&Word::parse(text)?)
    }

    pub fn length(&self, e: &Element) -> usize {
        e.length()
    }

    pub fn is_reduced(&self, word: &Word) -> Result<bool, CoxeterError> {
        Ok(self.normal_form(word)?.length() == word.len())
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, CoxeterError> {
        self.check(a)?;
        self.check(b)?;
        let backend = &self.inner.backend;
        let mut st = a.state.clone();
        for &l in b.word.letters() {
            backend.mul_right(&mut st, l as usize);
        }
        Ok(self.element_from_state(st))
    }

    pub fn inverse(&self, e: &Element) -> Result<Element, CoxeterError> {
        self.check(e)?;
        self.normal_form(&e.word.reversed())
    }

    /// `es`.
    pub fn mul_generator(&self, e: &Element, s: usize) -> Result<Element, CoxeterError> {
        self.check(e)?;
        self.check_generator(s)?;
        let mut st = e.state.clone();
        self.inner.backend.mul_right(&mut st, s);
        Ok(self.element_from_state(st))
    }

    /// `se`.
    pub fn generator_mul(&self, s: usize, e: &Element) -> Result<Element, CoxeterError> {
        self.check(e)?;
        self.check_generator(s)?;
        let mut st = e.state.clone();
        self.inner.backend.mul_left(&mut st, s);
        Ok(self.element_from_state(st))
    }

    pub fn is_right_descent(&self, e: &Element, s: usize) -> Result<bool, CoxeterError> {
        self.check(e)?;
        self.check_generator(s)?;
        Ok(self.inner.backend.right_descent(&e.state, s))
    }

    pub fn is_left_descent(&self, e: &Element, s: usize) -> Result<bool, CoxeterError> {
        self.check(e)?;
        self.check_generator(s)?;
        Ok(self.inner.backend.left_descent(&e.state, s))
    }

    /// 0-based generators `s` with `ℓ(es) < ℓ(e)`.
    pub fn right_descents(&self, e: &Element) -> Result<Vec<usize>, CoxeterError> {
        self.check(e)?;
        Ok((0..self.rank())
            .filter(|&s| self.inner.backend.right_descent(&e.state, s))
            .collect())
    }

    /// 0-based generators `s` with `ℓ(se) < ℓ(e)`.
    pub fn left_descents(&self, e: &Element) -> Result<Vec<usize>, CoxeterError> {
        self.check(e)?;
        Ok((0..self.rank())
            .filter(|&s| self.inner.backend.left_descent(&e.state, s))
            .collect())
    }

    /// Every reduced word of `e`, in lexicographic order.
    pub fn reduced_words(&self, e: &Element) -> Result<Vec<Word>, CoxeterError> {
        self.reduced_words_capped(e, usize::MAX)
    }

    /// The lexicographically first `cap` reduced words of `e`.
    pub fn reduced_words_capped(&self, e: &Element, cap: usize) -> Result<Vec<Word>, CoxeterError> {
        self.check(e)?;
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(e.length());
        self.collect_reduced_words(&e.state, &mut prefix, &mut out, cap);
        Ok(out)
    }

    // Peeling left descents in increasing order visits words lexicographically.
    fn collect_reduced_words(&self, st: &State, prefix: &mut Vec<u8>, out: &mut Vec<Word>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        let backend = &self.inner.backend;
        let descents: Vec<usize> =
            (0..self.rank()).filter(|&s| backend.left_descent(st, s)).collect();
        if descents.is_empty() {
            out.push(Word::new(prefix.clone()));
            return;
        }
        for s in descents {
            let mut rest = st.clone();
            backend.mul_left(&mut rest, s);
            prefix.push(s as u8);
            self.collect_reduced_words(&rest, prefix, out, cap);
            prefix.pop();
        }
    }

    /// Conjugates `t` down by left descents. Returns the conjugating letters
    /// and the final generator when `t` is a reflection.
    pub(crate) fn reflection_chain(&self, t: &State) -> Option<(Vec<usize>, usize)> {
        let backend = &self.inner.backend;
        let rank = self.rank();
        let mut cur = t.clone();
        let mut len = self.element_from_state(t.clone()).length();
        let mut conj = Vec::new();
        loop {
            if len.is_multiple_of(2) {
                return None;
            }
            if len == 1 {
                let s = (0..rank).find(|&s| backend.left_descent(&cur, s))?;
                return Some((conj, s));
            }
            let s = (0..rank).find(|&s| backend.left_descent(&cur, s))?;
            // For a reflection t and s ∈ D_L(t), sts is a reflection of
            // length ℓ(t) - 2; otherwise the conjugate is not shorter by two.
            backend.mul_left(&mut cur, s);
            if !backend.right_descent(&cur, s) {
                return None;
            }
            backend.mul_right(&mut cur, s);
            len -= 2;
            conj.push(s);
        }
    }

    pub fn is_reflection(&self, t: &Element) -> Result<bool, CoxeterError> {
        self.check(t)?;
        Ok(self.reflection_chain(&t.state).is_some())
    }

    /// Root data for a reflection, `None` when `t` is not one.
    pub fn reflection(&self, t: &Element) -> Result<Option<Reflection>, CoxeterError> {
        self.check(t)?;
        let Some((conj, s)) = self.reflection_chain(&t.state) else {
            return Ok(None);
        };
        let root = match (&t.state, self.backend()) {
            (State::Perm(images), _) => {
                let moved: Vec<usize> = images
                    .iter()
                    .enumerate()
                    .filter(|(i, &v)| *i != v as usize)
                    .map(|(i, _)| i + 1)
                    .collect();
                RootWitness::Transposition { i: moved[0], j: moved[1] }
            }
            (State::Dihedral { start, len }, _) => {
                RootWitness::Palindrome { first: *start as usize + 1, half: (*len as usize) / 2 }
            }
            (State::Linear { .. }, backend) => {
                let mut u = backend.identity();
                for &c in &conj {
                    backend.mul_right(&mut u, c);
                }
                let mut root = backend.root_image(&u, s).expect("linear backend");
                if root.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                    root.iter_mut().for_each(|c| *c = -*c);
                }
                RootWitness::Coordinates(root)
            }
        };
        Ok(Some(Reflection { element: t.clone(), root }))
    }

    /// All reflections `wsw⁻¹`, each once, in canonical element order.
    pub fn reflections(&self) -> Result<Vec<Reflection>, CoxeterError> {
        let elements = self.elements()?;
        let backend = &self.inner.backend;
        let mut seen = HashSet::new();
        for w in elements.iter() {
            let inv = self.inverse(w)?;
            for s in 0..self.rank() {
                let mut st = w.state.clone();
                backend.mul_right(&mut st, s);
                for &l in inv.word.letters() {
                    backend.mul_right(&mut st, l as usize);
                }
                seen.insert(st);
            }
        }
        let set: ElementSet = seen.into_iter().map(|st| self.element_from_state(st)).collect();
        set.iter()
            .map(|t| Ok(self.reflection(t)?.expect("conjugate of a generator")))
            .collect()
    }

    /// All elements of a finite group, in canonical order.
    pub fn enumerate(&self) -> Result<ElementSet, CoxeterError> {
        Ok(self.elements()?.iter().cloned().collect())
    }

    /// Breadth-first closure under right multiplication by generators,
    /// failing with `CapExceeded` once more than `cap` elements are found.
    pub fn enumerate_capped(&self, cap: usize) -> Result<ElementSet, CoxeterError> {
        let backend = &self.inner.backend;
        let identity = backend.identity();
        let mut seen: HashSet<State> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(st) = queue.pop_front() {
            for s in 0..self.rank() {
                let mut next = st.clone();
                backend.mul_right(&mut next, s);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(CoxeterError::CapExceeded { cap });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().map(|st| self.element_from_state(st)).collect())
    }

    /// Memoized canonical list of all elements of a finite group.
    pub fn elements(&self) -> Result<Arc<Vec<Element>>, CoxeterError> {
        self.inner
            .elements
            .get_or_init(|| {
                let order = self.inner.order.ok_or(CoxeterError::InfiniteGroup)?;
                if order > DEFAULT_ENUMERATION_CAP as u128 {
                    return Err(CoxeterError::CapExceeded { cap: DEFAULT_ENUMERATION_CAP });
                }
                let set = self.enumerate_capped(DEFAULT_ENUMERATION_CAP)?;
                debug_assert_eq!(set.len() as u128, order);
                Ok(Arc::new(set.into_iter().collect()))
            })
            .clone()
    }
}
