//! Convolution sets `x₁ * x₂`, the Demazure product, and executable
//! versions of the arrow lemmas used to locate the minimum of a convolution.
//!
//! `x₁ * 1 = {x₁}` and, for `x₂ = x₂'s` with `ℓ(x₂') < ℓ(x₂)`,
//!
//! ```text
//! x₁ * x₂ = (x₁ * x₂')s ∪ { w ∈ x₁ * x₂' : ws < w }
//! ```
//!
//! The recursion runs along the stored normal form of `x₂`;
//! [`convolve_via_word`] runs it along any other reduced word.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterError, CoxeterSystem, Element, ElementSet, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ConvolutionError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("empty element set")]
    EmptySet,
    #[error("no element of {set} lies below all others")]
    NoUniqueMin { set: String },
    #[error("no element of {set} lies above all others")]
    NoUniqueMax { set: String },
    #[error("minimum {min:?} of the convolution differs from the product {product:?}")]
    MinNotProduct { min: String, product: String },
    #[error("maximum {max:?} of the convolution differs from the Demazure product {demazure:?}")]
    MaxNotDemazure { max: String, demazure: String },
    #[error("{element:?} lies outside the interval [{lower:?}, {upper:?}]")]
    OutsideInterval { element: String, lower: String, upper: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(String),
}

impl ConvolutionError {
    /// Errors that contradict the characterization of the convolution
    /// minimum/maximum rather than signalling bad input.
    pub fn is_theorem_violation(&self) -> bool {
        matches!(
            self,
            ConvolutionError::NoUniqueMin { .. }
                | ConvolutionError::NoUniqueMax { .. }
                | ConvolutionError::MinNotProduct { .. }
                | ConvolutionError::MaxNotDemazure { .. }
                | ConvolutionError::OutsideInterval { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, ConvolutionError>;

/// `u * s`: `{us}` if `us > u`, `{u, us}` if `us < u`.
pub fn convolve_step(sys: &CoxeterSystem, u: &Element, s: usize) -> Result<ElementSet> {
    let us = sys.mul_generator(u, s)?;
    let mut out = ElementSet::new();
    if us.length() < u.length() {
        out.insert(u.clone());
    }
    out.insert(us);
    Ok(out)
}

fn convolve_letters(sys: &CoxeterSystem, x1: &Element, letters: &[u8]) -> ElementSet {
    let backend = sys.backend();
    let mut current: HashSet<_> = HashSet::from([x1.state.clone()]);
    for &l in letters {
        let s = l as usize;
        let mut next = HashSet::with_capacity(current.len() * 2);
        for w in current {
            let mut ws = w.clone();
            backend.mul_right(&mut ws, s);
            next.insert(ws);
            if backend.right_descent(&w, s) {
                next.insert(w);
            }
        }
        current = next;
    }
    current.into_iter().map(|st| sys.element_from_state(st)).collect()
}

/// The convolution set `x₁ * x₂`.
pub fn convolve(sys: &CoxeterSystem, x1: &Element, x2: &Element) -> Result<ElementSet> {
    sys.check(x1)?;
    sys.check(x2)?;
    Ok(convolve_letters(sys, x1, x2.normal_form().letters()))
}

/// `x₁ * (s₁⋯s_n)` along an explicitly supplied reduced word.
pub fn convolve_via_word(sys: &CoxeterSystem, x1: &Element, word: &Word) -> Result<ElementSet> {
    if !sys.is_reduced(word)? {
        return Err(ConvolutionError::NotReduced(word.to_string()));
    }
    sys.check(x1)?;
    Ok(convolve_letters(sys, x1, word.letters()))
}

/// `x₁ ⋆ x₂` via `x ⋆ s = xs` if `xs > x`, else `x`.
pub fn demazure(sys: &CoxeterSystem, x1: &Element, x2: &Element) -> Result<Element> {
    sys.check(x1)?;
    sys.check(x2)?;
    let backend = sys.backend();
    let mut st = x1.state.clone();
    for &l in x2.normal_form().letters() {
        if !backend.right_descent(&st, l as usize) {
            backend.mul_right(&mut st, l as usize);
        }
    }
    Ok(sys.element_from_state(st))
}

/// The element below every member of `set`; an error if there is none.
pub fn min_of(sys: &CoxeterSystem, set: &ElementSet) -> Result<Element> {
    // A minimum is strictly shorter than everything else it lies below, so
    // it must be the only shortest member.
    let first = set.iter().next().ok_or(ConvolutionError::EmptySet)?;
    let shortest: Vec<_> = set.iter().take_while(|e| e.length() == first.length()).collect();
    let no_min = || ConvolutionError::NoUniqueMin { set: set.to_string() };
    if shortest.len() != 1 {
        return Err(no_min());
    }
    for y in set {
        if !sys.bruhat_leq(first, y)? {
            return Err(no_min());
        }
    }
    Ok(first.clone())
}

/// The element above every member of `set`; an error if there is none.
pub fn max_of(sys: &CoxeterSystem, set: &ElementSet) -> Result<Element> {
    let last = set.iter().next_back().ok_or(ConvolutionError::EmptySet)?;
    let longest: Vec<_> = set.iter().rev().take_while(|e| e.length() == last.length()).collect();
    let no_max = || ConvolutionError::NoUniqueMax { set: set.to_string() };
    if longest.len() != 1 {
        return Err(no_max());
    }
    for y in set {
        if !sys.bruhat_leq(y, last)? {
            return Err(no_max());
        }
    }
    Ok(last.clone())
}

/// `u → w`: `u⁻¹w` is a reflection and `ℓ(u) < ℓ(w)`.
pub fn arrow(sys: &CoxeterSystem, u: &Element, w: &Element) -> Result<bool> {
    sys.check(u)?;
    sys.check(w)?;
    if u.length() >= w.length() {
        return Ok(false);
    }
    let t = sys.multiply(&sys.inverse(u)?, w)?;
    Ok(sys.is_reflection(&t)?)
}

/// Given `w' → w` and `w's ≠ w`, returns whether `w's → ws`.
pub fn check_lemma3(sys: &CoxeterSystem, w_prime: &Element, w: &Element, s: usize) -> Result<bool> {
    if !arrow(sys, w_prime, w)? {
        return Err(ConvolutionError::PreconditionFailed(format!(
            "no arrow from {:?} to {:?}",
            w_prime.to_string(),
            w.to_string()
        )));
    }
    let w_prime_s = sys.mul_generator(w_prime, s)?;
    if &w_prime_s == w {
        return Err(ConvolutionError::PreconditionFailed(format!(
            "w's equals w = {:?}",
            w.to_string()
        )));
    }
    arrow(sys, &w_prime_s, &sys.mul_generator(w, s)?)
}

/// Given `us < u` and `sx > x`, returns whether `usx → ux`.
pub fn check_cor1(sys: &CoxeterSystem, u: &Element, s: usize, x: &Element) -> Result<bool> {
    if !sys.is_right_descent(u, s)? {
        return Err(ConvolutionError::PreconditionFailed(format!(
            "generator {} is not a right descent of {:?}",
            s + 1,
            u.to_string()
        )));
    }
    if sys.is_left_descent(x, s)? {
        return Err(ConvolutionError::PreconditionFailed(format!(
            "generator {} is a left descent of {:?}",
            s + 1,
            x.to_string()
        )));
    }
    let us = sys.mul_generator(u, s)?;
    arrow(sys, &sys.multiply(&us, x)?, &sys.multiply(u, x)?)
}

/// Everything known about one convolution set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionReport {
    pub x1: Element,
    pub x2: Element,
    pub set: ElementSet,
    pub min: Element,
    pub max: Element,
    /// `[x₁x₂, x₁ ⋆ x₂]`.
    pub interval: ElementSet,
    /// `interval ∖ set`.
    pub missing: ElementSet,
}

/// Computes `x₁ * x₂` and assembles its report.
pub fn exhaustion_report(sys: &CoxeterSystem, x1: &Element, x2: &Element) -> Result<ConvolutionReport> {
    let set = convolve(sys, x1, x2)?;
    report_from_set(sys, x1, x2, set)
}

/// Assembles a report for a given candidate set of `x₁ * x₂`, checking that
/// its minimum is `x₁x₂`, its maximum is `x₁ ⋆ x₂` and that it lies in the
/// interval between them.
pub fn report_from_set(
    sys: &CoxeterSystem,
    x1: &Element,
    x2: &Element,
    set: ElementSet,
) -> Result<ConvolutionReport> {
    let min = min_of(sys, &set)?;
    let max = max_of(sys, &set)?;
    let product = sys.multiply(x1, x2)?;
    let star = demazure(sys, x1, x2)?;
    if min != product {
        return Err(ConvolutionError::MinNotProduct {
            min: min.to_string(),
            product: product.to_string(),
        });
    }
    if max != star {
        return Err(ConvolutionError::MaxNotDemazure {
            max: max.to_string(),
            demazure: star.to_string(),
        });
    }
    let interval = sys.bruhat_interval(&product, &star)?;
    if let Some(outside) = set.iter().find(|y| !interval.contains(y)) {
        return Err(ConvolutionError::OutsideInterval {
            element: outside.to_string(),
            lower: product.to_string(),
            upper: star.to_string(),
        });
    }
    let missing = interval.difference(&set);
    Ok(ConvolutionReport { x1: x1.clone(), x2: x2.clone(), set, min, max, interval, missing })
}

/// Wire form of a [`ConvolutionReport`]: elements as 1-based normal-form
/// words, identity as `""`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub x1: String,
    pub x2: String,
    pub set: Vec<String>,
    pub min: String,
    pub max: String,
    pub interval: Vec<String>,
    pub missing: Vec<String>,
}

impl From<&ConvolutionReport> for ReportJson {
    fn from(r: &ConvolutionReport) -> Self {
        ReportJson {
            x1: r.x1.to_string(),
            x2: r.x2.to_string(),
            set: r.set.words(),
            min: r.min.to_string(),
            max: r.max.to_string(),
            interval: r.interval.words(),
            missing: r.missing.words(),
        }
    }
}

impl Serialize for ConvolutionReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson::from(self).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    fn a(rank: usize) -> CoxeterSystem {
        CoxeterSystem::new(CoxeterMatrix::type_a(rank).unwrap()).unwrap()
    }

    fn set_of(sys: &CoxeterSystem, words: &[&str]) -> ElementSet {
        words.iter().map(|w| sys.parse_element(w).unwrap()).collect()
    }

    #[test]
    fn steps() {
        let sys = a(2);
        let s1 = sys.parse_element("1").unwrap();
        assert_eq!(convolve_step(&sys, &s1, 1).unwrap().words(), vec!["1 2"]);
        assert_eq!(convolve_step(&sys, &s1, 0).unwrap().words(), vec!["", "1"]);
        assert_eq!(convolve_step(&sys, &sys.identity(), 0).unwrap().words(), vec!["1"]);
        assert!(convolve_step(&sys, &s1, 2).is_err());
    }

    #[test]
    fn worked_example() {
        let sys = a(2);
        let x1 = sys.parse_element("1 2").unwrap();
        let x2 = sys.parse_element("2 1").unwrap();
        let set = convolve(&sys, &x1, &x2).unwrap();
        assert_eq!(set.words(), vec!["", "1", "1 2 1"]);
        assert_eq!(demazure(&sys, &x1, &x2).unwrap().to_string(), "1 2 1");
        let s1 = sys.parse_element("1").unwrap();
        assert_eq!(convolve(&sys, &s1, &s1).unwrap().words(), vec!["", "1"]);
        assert_eq!(demazure(&sys, &s1, &s1).unwrap(), s1);
        let report = exhaustion_report(&sys, &x1, &x2).unwrap();
        // [1, s1 s2 s1] is all of S3, so s2 is not the only element missed.
        assert_eq!(report.missing.words(), vec!["2", "1 2", "2 1"]);
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"x1":"1 2","x2":"2 1","set":["","1","1 2 1"],"min":"","max":"1 2 1","interval":["","1","2","1 2","2 1","1 2 1"],"missing":["2","1 2","2 1"]}"#
        );
    }

    #[test]
    fn additive_report() {
        let sys = a(2);
        let s1 = sys.parse_element("1").unwrap();
        let s2 = sys.parse_element("2").unwrap();
        let r = exhaustion_report(&sys, &s1, &s2).unwrap();
        assert_eq!(r.set.words(), vec!["1 2"]);
        assert_eq!(r.interval, r.set);
        assert!(r.missing.is_empty());
        let r = exhaustion_report(&sys, &s1, &sys.identity()).unwrap();
        assert_eq!(r.set.words(), vec!["1"]);
        assert!(r.missing.is_empty());
    }

    #[test]
    fn extremes() {
        let sys = a(2);
        let set = set_of(&sys, &["", "1", "1 2 1"]);
        assert!(min_of(&sys, &set).unwrap().is_identity());
        assert_eq!(max_of(&sys, &set).unwrap().to_string(), "1 2 1");
        let single = set_of(&sys, &["1 2"]);
        assert_eq!(min_of(&sys, &single).unwrap().to_string(), "1 2");
        assert_eq!(max_of(&sys, &single).unwrap().to_string(), "1 2");
        let pair = set_of(&sys, &["1", "2"]);
        assert!(matches!(min_of(&sys, &pair), Err(ConvolutionError::NoUniqueMin { .. })));
        assert!(matches!(max_of(&sys, &pair), Err(ConvolutionError::NoUniqueMax { .. })));
        assert!(matches!(min_of(&sys, &ElementSet::new()), Err(ConvolutionError::EmptySet)));
        // unique shortest element that is not below everything
        let a3 = a(3);
        let bad = set_of(&a3, &["1", "2 3"]);
        assert!(matches!(min_of(&a3, &bad), Err(ConvolutionError::NoUniqueMin { .. })));
        let bad = set_of(&a3, &["1", "1 2", "3"]);
        assert!(matches!(max_of(&a3, &bad), Err(ConvolutionError::NoUniqueMax { .. })));
    }

    #[test]
    fn arrows() {
        let sys = a(2);
        let e = |w: &str| sys.parse_element(w).unwrap();
        assert!(arrow(&sys, &sys.identity(), &e("1")).unwrap());
        assert!(arrow(&sys, &e("2"), &e("1 2")).unwrap());
        assert!(!arrow(&sys, &e("1"), &e("1 2 1")).unwrap());
        assert!(!arrow(&sys, &e("1 2"), &e("1")).unwrap());
    }

    #[test]
    fn lemma_checks() {
        let sys = a(2);
        let e = |w: &str| sys.parse_element(w).unwrap();
        assert!(check_lemma3(&sys, &sys.identity(), &e("1"), 1).unwrap());
        // w' = 1, w = s2 s1 s2, s = s1: arrow(s1, s2 s1 s2 s1) = arrow(s1, s1 s2).
        let expected = arrow(&sys, &e("1"), &e("2 1 2 1")).unwrap();
        assert_eq!(check_lemma3(&sys, &sys.identity(), &e("2 1 2"), 0).unwrap(), expected);
        assert!(expected);
        assert!(matches!(
            check_lemma3(&sys, &e("1"), &e("2"), 0),
            Err(ConvolutionError::PreconditionFailed(_))
        ));
        assert!(matches!(
            check_lemma3(&sys, &sys.identity(), &e("1"), 0),
            Err(ConvolutionError::PreconditionFailed(_))
        ));
        assert!(check_cor1(&sys, &e("1"), 0, &sys.identity()).unwrap());
        assert!(check_cor1(&sys, &e("1"), 0, &e("2")).unwrap());
        assert!(check_cor1(&sys, &e("2"), 0, &sys.identity()).is_err());
        assert!(check_cor1(&sys, &e("1"), 0, &e("1")).is_err());
    }

    #[test]
    fn via_word() {
        let sys = a(2);
        let x1 = sys.parse_element("1 2").unwrap();
        let set = convolve_via_word(&sys, &x1, &Word::parse("2 1").unwrap()).unwrap();
        assert_eq!(set.words(), vec!["", "1", "1 2 1"]);
        assert_eq!(
            convolve_via_word(&sys, &x1, &Word::empty()).unwrap().words(),
            vec!["1 2"]
        );
        let s1 = sys.parse_element("1").unwrap();
        assert_eq!(
            convolve_via_word(&sys, &s1, &Word::parse("1 2 1").unwrap()).unwrap(),
            convolve_via_word(&sys, &s1, &Word::parse("2 1 2").unwrap()).unwrap()
        );
        assert!(matches!(
            convolve_via_word(&sys, &s1, &Word::parse("1 1").unwrap()),
            Err(ConvolutionError::NotReduced(_))
        ));
    }

    #[test]
    fn injected_violation_is_reported() {
        let sys = a(2);
        let x1 = sys.parse_element("1 2").unwrap();
        let x2 = sys.parse_element("2 1").unwrap();
        let mut set = convolve(&sys, &x1, &x2).unwrap();
        set.remove(&sys.identity());
        set.insert(sys.parse_element("2").unwrap());
        let err = report_from_set(&sys, &x1, &x2, set).unwrap_err();
        assert!(err.is_theorem_violation(), "{err}");
    }
}
