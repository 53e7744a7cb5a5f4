//! Bruhat order: the lifting recursion and an independent reflection-chain
//! oracle for finite groups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::backend::State;
use super::element::{Element, ElementSet};
use super::system::CoxeterSystem;
use super::CoxeterError;

/// Largest group order the reflection-chain oracle will handle by default.
pub const DEFAULT_ORACLE_CAP: usize = 10_000;

/// The arrow relation `v → vt` on a finite group, as an index graph.
pub(crate) struct ArrowGraph {
    elements: Arc<Vec<Element>>,
    index: HashMap<State, usize>,
    /// `up[v]`: indices of `vt` over reflections `t` with `ℓ(vt) > ℓ(v)`.
    up: Vec<Vec<usize>>,
}

impl ArrowGraph {
    fn build(sys: &CoxeterSystem) -> Result<Self, CoxeterError> {
        let elements = sys.elements()?;
        let reflections = sys.reflections()?;
        let index: HashMap<State, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.state.clone(), i)).collect();
        let backend = sys.backend();
        let up = elements
            .iter()
            .map(|v| {
                let mut targets: Vec<usize> = reflections
                    .iter()
                    .map(|t| {
                        let mut st = v.state.clone();
                        for &l in t.element.word.letters() {
                            backend.mul_right(&mut st, l as usize);
                        }
                        index[&st]
                    })
                    .filter(|&j| elements[j].length() > v.length())
                    .collect();
                targets.sort_unstable();
                targets.dedup();
                targets
            })
            .collect();
        Ok(ArrowGraph { elements, index, up })
    }

    fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.elements.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.up[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

impl CoxeterSystem {
    /// `u ≤ w` by the lifting recursion: strip the smallest right descent
    /// `s` of `w`, and strip it from `u` too when it is a descent of `u`.
    pub fn bruhat_leq(&self, u: &Element, w: &Element) -> Result<bool, CoxeterError> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.bruhat_leq_unchecked(u, w))
    }

    pub(crate) fn bruhat_leq_unchecked(&self, u: &Element, w: &Element) -> bool {
        let backend = self.backend();
        let rank = self.rank();
        let (mut lu, mut lw) = (u.length(), w.length());
        if lu > lw {
            return false;
        }
        if lu == lw {
            return u.word == w.word;
        }
        let mut us = u.state.clone();
        let mut ws = w.state.clone();
        loop {
            if lu == 0 {
                return true;
            }
            if lu > lw {
                return false;
            }
            if lu == lw {
                return us == ws;
            }
            let s = (0..rank)
                .find(|&s| backend.right_descent(&ws, s))
                .expect("non-identity element has a descent");
            if backend.right_descent(&us, s) {
                backend.mul_right(&mut us, s);
                lu -= 1;
            }
            backend.mul_right(&mut ws, s);
            lw -= 1;
        }
    }

    pub(crate) fn arrow_graph(&self, cap: usize) -> Result<Arc<ArrowGraph>, CoxeterError> {
        let order = self.order().ok_or(CoxeterError::InfiniteGroup)?;
        if order > cap as u128 {
            return Err(CoxeterError::CapExceeded { cap });
        }
        self.arrow_graph_cell()
            .get_or_init(|| ArrowGraph::build(self).map(Arc::new))
            .clone()
    }

    /// `u ≤ w` as the existence of a chain `u → w₁ → ⋯ → w`, with
    /// `v → vt` for a reflection `t` and `ℓ(v) < ℓ(vt)`.
    pub fn bruhat_leq_oracle(&self, u: &Element, w: &Element) -> Result<bool, CoxeterError> {
        self.bruhat_leq_oracle_capped(u, w, DEFAULT_ORACLE_CAP)
    }

    pub fn bruhat_leq_oracle_capped(
        &self,
        u: &Element,
        w: &Element,
        cap: usize,
    ) -> Result<bool, CoxeterError> {
        self.check(u)?;
        self.check(w)?;
        let graph = self.arrow_graph(cap)?;
        let (iu, iw) = (graph.index[&u.state], graph.index[&w.state]);
        Ok(graph.reachable(iu)[iw])
    }

    /// `{ w : u ≤ w }` computed with the reflection-chain oracle.
    pub fn bruhat_upset_oracle(&self, u: &Element, cap: usize) -> Result<ElementSet, CoxeterError> {
        self.check(u)?;
        let graph = self.arrow_graph(cap)?;
        let reach = graph.reachable(graph.index[&u.state]);
        Ok(graph
            .elements
            .iter()
            .zip(reach)
            .filter_map(|(e, r)| r.then_some(e.clone()))
            .collect())
    }

    /// `{ x : u ≤ x ≤ w }`; empty when `u ≰ w`.
    ///
    /// Built from the subword property, so it is finite and computable in
    /// infinite groups as well.
    pub fn bruhat_interval(&self, u: &Element, w: &Element) -> Result<ElementSet, CoxeterError> {
        self.check(u)?;
        self.check(w)?;
        if !self.bruhat_leq_unchecked(u, w) {
            return Ok(ElementSet::new());
        }
        Ok(self
            .lower_set(w)
            .into_iter()
            .map(|st| self.element_from_state(st))
            .filter(|x| x.length() >= u.length() && self.bruhat_leq_unchecked(u, x))
            .collect())
    }

    /// `{ x : x ≤ w }` as the products of subwords of a reduced word of `w`.
    fn lower_set(&self, w: &Element) -> HashSet<State> {
        let backend = self.backend();
        let mut below = HashSet::from([backend.identity()]);
        for &l in w.word.letters() {
            let extended: Vec<State> = below
                .iter()
                .map(|st| {
                    let mut st = st.clone();
                    backend.mul_right(&mut st, l as usize);
                    st
                })
                .collect();
            below.extend(extended);
        }
        below
    }
}

#[cfg(test)]
mod tests {
    use crate::coxeter::{CoxeterMatrix, CoxeterSystem, ElementSet};

    fn a(rank: usize) -> CoxeterSystem {
        CoxeterSystem::new(CoxeterMatrix::type_a(rank).unwrap()).unwrap()
    }

    #[test]
    fn a2_examples() {
        let sys = a(2);
        let e = |w: &str| sys.parse_element(w).unwrap();
        for w in sys.enumerate().unwrap() {
            assert!(sys.bruhat_leq(&sys.identity(), &w).unwrap());
        }
        assert!(sys.bruhat_leq(&e("2"), &e("1 2 1")).unwrap());
        assert!(!sys.bruhat_leq(&e("1 2"), &e("2 1")).unwrap());
        assert!(sys.bruhat_leq_oracle(&sys.identity(), &e("1")).unwrap());
        assert!(sys.bruhat_leq_oracle(&e("2"), &e("1 2")).unwrap());
        assert!(!sys.bruhat_leq_oracle(&e("1 2"), &e("2 1")).unwrap());
    }

    #[test]
    fn intervals() {
        let sys = a(2);
        let e = |w: &str| sys.parse_element(w).unwrap();
        assert_eq!(sys.bruhat_interval(&sys.identity(), &e("1")).unwrap().words(), vec!["", "1"]);
        assert_eq!(sys.bruhat_interval(&sys.identity(), &e("1 2 1")).unwrap().len(), 6);
        assert_eq!(sys.bruhat_interval(&e("1"), &e("1 2")).unwrap().words(), vec!["1", "1 2"]);
        assert!(sys.bruhat_interval(&e("1 2"), &e("2 1")).unwrap().is_empty());

        // Subword construction against filtering the whole group.
        let a3 = a(3);
        let all = a3.elements().unwrap();
        for u in all.iter() {
            for w in all.iter() {
                let filtered: ElementSet = all
                    .iter()
                    .filter(|x| a3.bruhat_leq(u, x).unwrap() && a3.bruhat_leq(x, w).unwrap())
                    .cloned()
                    .collect();
                assert_eq!(a3.bruhat_interval(u, w).unwrap(), filtered);
            }
        }

        // Lengths 0..=5 below s1s2s1s2s1 in the infinite dihedral group.
        let inf = CoxeterSystem::new(CoxeterMatrix::dihedral(None).unwrap()).unwrap();
        let w = inf.parse_element("1 2 1 2 1").unwrap();
        assert_eq!(inf.bruhat_interval(&inf.identity(), &w).unwrap().len(), 10);
    }

    #[test]
    fn oracle_cap() {
        let sys = a(3);
        let x = sys.identity();
        assert!(sys.bruhat_leq_oracle_capped(&x, &x, 10).is_err());
        let inf = CoxeterSystem::new(CoxeterMatrix::dihedral(None).unwrap()).unwrap();
        let y = inf.identity();
        assert!(inf.bruhat_leq_oracle(&y, &y).is_err());
        // the lifting recursion itself works in infinite groups
        let w = inf.parse_element("1 2 1 2 1").unwrap();
        assert!(inf.bruhat_leq(&inf.parse_element("2 1 2").unwrap(), &w).unwrap());
        assert!(inf.bruhat_leq(&inf.parse_element("1 1").unwrap(), &w).unwrap());
        assert!(!inf.bruhat_leq(&inf.parse_element("1 2 1 2 1 2").unwrap(), &w).unwrap());
    }
}
