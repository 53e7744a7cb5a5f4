//! Invariant sweeps over a finite Coxeter group and over a flag variety,
//! summarized per property with counters and the first failing witness.
//!
//! Work runs on the current rayon pool. Partial results are merged in
//! canonical order, so a summary depends only on the system and the
//! [`SweepConfig`], never on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::{self, ConvolutionError, ReportJson};
use crate::coxeter::{CoxeterError, CoxeterMatrix, CoxeterSystem, Element, ElementSet, Word, DEFAULT_ORACLE_CAP};
use crate::geometry::{
    self, FlagVariety, GeometryError, MatrixGF, Permutation, PrimeField, TransportStats,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Convolution(#[from] ConvolutionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Sweep sizes. Everything random is drawn from one ChaCha8 stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    /// Groups up to this order are swept over all ordered pairs; larger
    /// ones over `samples` random pairs.
    pub full_sweep_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Reduced words of `x₂` tried per pair (lexicographically first ones).
    pub max_reduced_words: usize,
    /// Exhaustive triple sweeps up to this many triples, sampled beyond.
    pub triple_max: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            full_sweep_max: 200,
            samples: 2000,
            seed: 1,
            max_reduced_words: 64,
            triple_max: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub status: Status,
    pub checked: u64,
    pub passed: u64,
    pub first_failure: Option<String>,
    pub note: Option<String>,
}

impl PropertyResult {
    fn skipped(name: &str, note: impl Into<String>) -> Self {
        PropertyResult {
            name: name.to_string(),
            status: Status::Skipped,
            checked: 0,
            passed: 0,
            first_failure: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checked: u64,
    passed: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(witness());
        }
    }

    /// Appends `later`, which covers cases after all of `self`'s.
    fn absorb(&mut self, later: Tally) {
        self.checked += later.checked;
        self.passed += later.passed;
        if self.first_failure.is_none() {
            self.first_failure = later.first_failure;
        }
    }

    fn finish(self, name: &str, note: Option<String>) -> PropertyResult {
        let status = if self.checked == 0 {
            Status::Skipped
        } else if self.passed == self.checked {
            Status::Pass
        } else {
            Status::Fail
        };
        PropertyResult {
            name: name.to_string(),
            status,
            checked: self.checked,
            passed: self.passed,
            first_failure: self.first_failure,
            note,
        }
    }
}

/// Runs `f` on every item in parallel and merges the per-item tallies in
/// item order.
fn sweep<T, F>(items: &[T], width: usize, f: F) -> Result<Vec<Tally>>
where
    T: Sync,
    F: Fn(&T, &mut [Tally]) -> Result<()> + Sync,
{
    let chunks: Vec<Vec<Tally>> = items
        .par_chunks(64)
        .map(|chunk| {
            let mut t = vec![Tally::default(); width];
            for item in chunk {
                f(item, &mut t)?;
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![Tally::default(); width];
    for chunk in chunks {
        for (acc, t) in total.iter_mut().zip(chunk) {
            acc.absorb(t);
        }
    }
    Ok(total)
}

fn all_ok(properties: &[PropertyResult]) -> bool {
    properties.iter().all(|p| p.status != Status::Fail)
}

// ---------------------------------------------------------------------------
// Coxeter sweeps

const PAIR_PROPERTIES: [&str; 10] = [
    "min_is_product",
    "max_is_demazure",
    "interval_containment",
    "length_additive",
    "reversal_symmetry",
    "reduced_word_independence",
    "lifting_property",
    "arrow_translation",
    "arrow_descent_shift",
    "bruhat_respects_length",
];
const MIN: usize = 0;
const MAX: usize = 1;
const INTERVAL: usize = 2;
const ADDITIVE: usize = 3;
const REVERSAL: usize = 4;
const WORDS: usize = 5;
const LIFTING: usize = 6;
const TRANSLATION: usize = 7;
const DESCENT_SHIFT: usize = 8;
const RESPECTS_LENGTH: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterSummary {
    /// Coxeter matrix, `inf` for ∞.
    pub system: String,
    pub rank: usize,
    pub order: u128,
    /// Ordered pairs `(x₁, x₂)` visited.
    pub pairs: usize,
    pub sampled: bool,
    pub seed: Option<u64>,
    pub properties: Vec<PropertyResult>,
    pub ok: bool,
}

fn quoted(e: &Element) -> String {
    format!("\"{e}\"")
}

/// Checks every pair-level property on `(x₁, x₂) = (a, b)`.
fn check_pair(
    sys: &CoxeterSystem,
    a: &Element,
    b: &Element,
    words: &[Word],
    t: &mut [Tally],
) -> Result<()> {
    let pair = || format!("x1={} x2={}", quoted(a), quoted(b));
    let set = convolution::convolve(sys, a, b)?;
    let product = sys.multiply(a, b)?;
    let star = convolution::demazure(sys, a, b)?;

    match convolution::min_of(sys, &set) {
        Ok(m) => t[MIN].record(m == product, || {
            format!("{}: min {} but product {}", pair(), quoted(&m), quoted(&product))
        }),
        Err(e) => t[MIN].record(false, || format!("{}: {e}", pair())),
    }
    match convolution::max_of(sys, &set) {
        Ok(m) => t[MAX].record(m == star, || {
            format!("{}: max {} but Demazure product {}", pair(), quoted(&m), quoted(&star))
        }),
        Err(e) => t[MAX].record(false, || format!("{}: {e}", pair())),
    }
    let interval = sys.bruhat_interval(&product, &star)?;
    t[INTERVAL].record(set.is_subset(&interval), || {
        format!("{}: {} not inside [{}, {}]", pair(), set.difference(&interval), quoted(&product), quoted(&star))
    });
    if product.length() == a.length() + b.length() {
        t[ADDITIVE].record(set.len() == 1 && set.contains(&product) && star == product, || {
            format!("{}: set {set}, Demazure product {}", pair(), quoted(&star))
        });
    }

    let reversed = convolution::convolve(sys, &sys.inverse(b)?, &sys.inverse(a)?)?;
    let inverted = set
        .iter()
        .map(|y| sys.inverse(y))
        .collect::<std::result::Result<ElementSet, _>>()?;
    t[REVERSAL].record(reversed == inverted, || {
        format!("{}: inverses {inverted} but reversed convolution {reversed}", pair())
    });

    for word in words {
        let via = convolution::convolve_via_word(sys, a, word)?;
        t[WORDS].record(via == set, || {
            format!("{}: word \"{word}\" gives {via}, normal form gives {set}", pair())
        });
    }

    let a_le_b = sys.bruhat_leq(a, b)?;
    if a_le_b {
        for s in 0..sys.rank() {
            let a_s = sys.mul_generator(a, s)?;
            let b_s = sys.mul_generator(b, s)?;
            let ok = sys.bruhat_leq(&a_s, b)? || sys.bruhat_leq(&a_s, &b_s)?;
            t[LIFTING].record(ok, || format!("w'={} w={} s={}", quoted(a), quoted(b), s + 1));
        }
        if a != b {
            t[RESPECTS_LENGTH].record(a.length() < b.length(), || {
                format!("{} < {} but lengths {} >= {}", quoted(a), quoted(b), a.length(), b.length())
            });
        }
    }

    if convolution::arrow(sys, a, b)? {
        for s in 0..sys.rank() {
            if &sys.mul_generator(a, s)? != b {
                let ok = convolution::check_lemma3(sys, a, b, s)?;
                t[TRANSLATION].record(ok, || format!("w'={} w={} s={}", quoted(a), quoted(b), s + 1));
            }
        }
    }
    for s in 0..sys.rank() {
        if sys.is_right_descent(a, s)? && !sys.is_left_descent(b, s)? {
            let ok = convolution::check_cor1(sys, a, s, b)?;
            t[DESCENT_SHIFT].record(ok, || format!("u={} s={} x={}", quoted(a), s + 1, quoted(b)));
        }
    }
    Ok(())
}

/// Runs the whole invariant suite on a finite Coxeter system.
pub fn verify_coxeter(sys: &CoxeterSystem, cfg: &SweepConfig) -> Result<CoxeterSummary> {
    let order = sys.order().ok_or(CoxeterError::InfiniteGroup)?;
    let elements = sys.elements()?;
    let n = elements.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let sampled = n > cfg.full_sweep_max;
    let pairs: Vec<(usize, usize)> = if sampled {
        (0..cfg.samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    } else {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    };

    // Reduced words of every x₂ in use, one past the cap to spot truncation.
    let mut used = vec![false; n];
    for &(_, j) in &pairs {
        used[j] = true;
    }
    let words: Vec<Vec<Word>> = (0..n)
        .into_par_iter()
        .map(|j| {
            if used[j] {
                sys.reduced_words_capped(&elements[j], cfg.max_reduced_words.saturating_add(1))
            } else {
                Ok(Vec::new())
            }
        })
        .collect::<std::result::Result<_, _>>()?;
    let truncated = words.iter().filter(|w| w.len() > cfg.max_reduced_words).count();

    let tallies = sweep(&pairs, PAIR_PROPERTIES.len(), |&(i, j), t| {
        let w = &words[j];
        check_pair(sys, &elements[i], &elements[j], &w[..w.len().min(cfg.max_reduced_words)], t)
    })?;
    let mut properties: Vec<PropertyResult> = tallies
        .into_iter()
        .zip(PAIR_PROPERTIES)
        .map(|(t, name)| {
            let note = (name == "reduced_word_independence" && truncated > 0).then(|| {
                format!(
                    "{truncated} elements have more than {} reduced words; the first {} were used",
                    cfg.max_reduced_words, cfg.max_reduced_words
                )
            });
            t.finish(name, note)
        })
        .collect();

    properties.push(bruhat_oracle(sys, &elements, &pairs, sampled)?);
    properties.extend(element_properties(sys, &elements)?);
    properties.extend(reflection_properties(sys, &elements, cfg)?);
    properties.push(demazure_associativity(sys, &elements, cfg, &mut rng)?);

    let ok = all_ok(&properties);
    Ok(CoxeterSummary {
        system: sys.matrix().to_string(),
        rank: sys.rank(),
        order,
        pairs: pairs.len(),
        sampled,
        seed: sampled.then_some(cfg.seed),
        properties,
        ok,
    })
}

/// `bruhat_leq` against the reflection-chain oracle, comparing whole upper
/// sets for every `u` that occurs as a first component.
fn bruhat_oracle(
    sys: &CoxeterSystem,
    elements: &[Element],
    pairs: &[(usize, usize)],
    sampled: bool,
) -> Result<PropertyResult> {
    const NAME: &str = "bruhat_oracle_equivalence";
    if elements.len() > DEFAULT_ORACLE_CAP {
        return Ok(PropertyResult::skipped(
            NAME,
            format!("group order exceeds the oracle cap {DEFAULT_ORACLE_CAP}"),
        ));
    }
    let us: Vec<usize> = if sampled {
        let set: std::collections::BTreeSet<usize> = pairs.iter().map(|&(i, _)| i).collect();
        set.into_iter().collect()
    } else {
        (0..elements.len()).collect()
    };
    let t = sweep(&us, 1, |&i, t| {
        let u = &elements[i];
        let upset = sys.bruhat_upset_oracle(u, DEFAULT_ORACLE_CAP)?;
        for w in elements {
            let fast = sys.bruhat_leq(u, w)?;
            t[0].record(fast == upset.contains(w), || {
                format!("u={} w={}: bruhat_leq says {fast}", quoted(u), quoted(w))
            });
        }
        Ok(())
    })?;
    Ok(t.into_iter().next().expect("one tally").finish(NAME, None))
}

fn element_properties(sys: &CoxeterSystem, elements: &[Element]) -> Result<Vec<PropertyResult>> {
    const NAMES: [&str; 3] = ["exchange", "normal_form_soundness", "inverse"];
    let rank = sys.rank();
    let tallies = sweep(elements, NAMES.len(), |e, t| {
        for s in 0..rank {
            let es = sys.mul_generator(e, s)?;
            let up = es.length() == e.length() + 1;
            let down = es.length() + 1 == e.length();
            let descent = sys.is_right_descent(e, s)?;
            t[0].record(up != down && descent == down, || {
                format!("e={} s={}: length {} -> {}", quoted(e), s + 1, e.length(), es.length())
            });

            // e·s·e as a raw, usually unreduced, word.
            let mut letters = e.normal_form().letters().to_vec();
            letters.push(s as u8);
            letters.extend_from_slice(e.normal_form().letters());
            let raw = Word::new(letters);
            let nf = sys.normal_form(&raw)?;
            let mut folded = sys.identity();
            for &l in raw.letters() {
                folded = sys.mul_generator(&folded, l as usize)?;
            }
            let ok = nf.length() <= raw.len() && nf == folded && sys.is_reduced(nf.normal_form())?;
            t[1].record(ok, || format!("word \"{raw}\": normal form {}, product {}", quoted(&nf), quoted(&folded)));
        }
        let inv = sys.inverse(e)?;
        let ok = sys.multiply(e, &inv)?.is_identity() && inv.length() == e.length();
        t[2].record(ok, || format!("e={} inverse {}", quoted(e), quoted(&inv)));
        Ok(())
    })?;
    Ok(tallies.into_iter().zip(NAMES).map(|(t, name)| t.finish(name, None)).collect())
}

fn reflection_properties(
    sys: &CoxeterSystem,
    elements: &[Element],
    cfg: &SweepConfig,
) -> Result<Vec<PropertyResult>> {
    let reflections: Vec<Element> = sys.reflections()?.into_iter().map(|r| r.element).collect();
    let mut odd = Tally::default();
    for t in &reflections {
        odd.record(t.length() % 2 == 1, || format!("t={} has length {}", quoted(t), t.length()));
    }
    // Conjugating by generators already closes up; all of W when affordable.
    let everything = reflections.len().saturating_mul(elements.len()) <= cfg.triple_max;
    let conjugators: Vec<Element> = if everything {
        elements.to_vec()
    } else {
        (0..sys.rank()).map(|s| sys.generator(s)).collect::<std::result::Result<_, _>>()?
    };
    let conj = sweep(&reflections, 1, |t, tally| {
        for x in &conjugators {
            let c = sys.multiply(&sys.multiply(x, t)?, &sys.inverse(x)?)?;
            let ok = sys.is_reflection(&c)?;
            tally[0].record(ok, || format!("t={} x={}: x t x^-1 = {}", quoted(t), quoted(x), quoted(&c)));
        }
        Ok(())
    })?;
    let note = (!everything).then(|| "conjugated by the generators only".to_string());
    Ok(vec![
        odd.finish("reflection_odd_length", None),
        conj.into_iter().next().expect("one tally").finish("reflection_conjugation", note),
    ])
}

fn demazure_associativity(
    sys: &CoxeterSystem,
    elements: &[Element],
    cfg: &SweepConfig,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyResult> {
    let n = elements.len();
    let exhaustive = n.checked_pow(3).is_some_and(|c| c <= cfg.triple_max);
    let triples: Vec<(usize, usize, usize)> = if exhaustive {
        (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect()
    } else {
        (0..cfg.samples)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    let t = sweep(&triples, 1, |&(i, j, k), t| {
        let (x, y, z) = (&elements[i], &elements[j], &elements[k]);
        let left = convolution::demazure(sys, &convolution::demazure(sys, x, y)?, z)?;
        let right = convolution::demazure(sys, x, &convolution::demazure(sys, y, z)?)?;
        t[0].record(left == right, || {
            format!("x={} y={} z={}: {} vs {}", quoted(x), quoted(y), quoted(z), quoted(&left), quoted(&right))
        });
        Ok(())
    })?;
    let note = (!exhaustive).then(|| format!("{} random triples", cfg.samples));
    Ok(t.into_iter().next().expect("one tally").finish("demazure_associativity", note))
}

// ---------------------------------------------------------------------------
// Geometry sweeps

/// Random invertible matrices drawn for the `GL_n`-invariance check.
const G_SAMPLES: usize = 16;
/// Flag pairs per random `g` whose relative position is recomputed directly.
const DIRECT_PAIRS_PER_G: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometrySummary {
    pub n: usize,
    pub p: u8,
    pub flags: usize,
    /// Ordered pairs `(w₁, w₂)` of permutations compared.
    pub pairs: usize,
    pub properties: Vec<PropertyResult>,
    /// Exhaustion reports built from the geometric convolution sets.
    pub convolutions: Vec<ReportJson>,
    pub ok: bool,
}

fn q_pow(q: usize, k: usize) -> usize {
    q.pow(k as u32)
}

fn random_invertible(field: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> MatrixGF {
    loop {
        let rows: Vec<Vec<u8>> =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..field.p())).collect()).collect();
        let g = MatrixGF::from_rows(field, &rows).expect("entries reduced mod p");
        if g.is_invertible() {
            return g;
        }
    }
}

/// Runs the flag-variety checks at `(n, p)`.
pub fn verify_geometry(n: usize, field: PrimeField, cfg: &SweepConfig) -> Result<GeometrySummary> {
    if n < 2 {
        return Err(VerifyError::Usage(format!("n must be at least 2, got {n}")));
    }
    geometry::check_caps(n, field)?;
    let q = field.p() as usize;
    let variety = FlagVariety::new(n, field)?;
    let total = variety.len();
    let perms = Permutation::all(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut properties = Vec::new();

    let expected: usize = (1..=n).map(|k| (q_pow(q, k) - 1) / (q - 1)).product();
    let mut count = Tally::default();
    count.record(total == expected, || format!("{total} flags, expected {expected}"));
    properties.push(count.finish("flag_count", None));

    let mut schubert = Tally::default();
    let mut sum = 0;
    for w in &perms {
        let c = variety.schubert_count(w)?;
        sum += c;
        let want = q_pow(q, w.length());
        schubert.record(c == want, || format!("w={w}: {c} flags, expected {want}"));
    }
    properties.push(schubert.finish("schubert_count", None));
    let mut partition = Tally::default();
    partition.record(sum == total, || format!("cells sum to {sum}, total {total}"));
    properties.push(partition.finish("orbit_partition", None));

    let indices: Vec<usize> = (0..total).collect();
    let symmetry = sweep(&indices, 1, |&i, t| {
        for j in 0..total {
            let ok = *variety.relpos(i, j) == variety.relpos(j, i).inverse();
            t[0].record(ok, || format!("flags {i}, {j}: {} vs {}", variety.relpos(i, j), variety.relpos(j, i)));
        }
        Ok(())
    })?;
    properties.push(symmetry.into_iter().next().expect("one tally").finish("relpos_inverse_symmetry", None));

    let mut invariance = Tally::default();
    let flags = variety.flags();
    for _ in 0..G_SAMPLES {
        let g = random_invertible(field, n, &mut rng);
        let moved: Vec<usize> = flags
            .iter()
            .map(|f| variety.index_of(&f.transform(&g)).expect("g permutes the flags"))
            .collect();
        for i in 0..total {
            for j in 0..total {
                invariance.record(variety.relpos(moved[i], moved[j]) == variety.relpos(i, j), || {
                    format!("g={g} flags {i}, {j}")
                });
            }
        }
        for _ in 0..DIRECT_PAIRS_PER_G {
            let (i, j) = (rng.gen_range(0..total), rng.gen_range(0..total));
            let before = geometry::relpos(&flags[i], &flags[j])?;
            let after = geometry::relpos(&flags[i].transform(&g), &flags[j].transform(&g))?;
            invariance.record(before == after, || format!("g={g} flags {i}, {j}: {before} vs {after}"));
        }
    }
    properties.push(invariance.finish(
        "relpos_g_invariance",
        Some(format!("{G_SAMPLES} random g, all flag pairs")),
    ));

    let (conv_props, convolutions) = convolution_properties(&variety, &perms)?;
    properties.extend(conv_props);
    properties.extend(transport_properties(&variety, &perms));

    let ok = all_ok(&properties);
    Ok(GeometrySummary {
        n,
        p: field.p(),
        flags: total,
        pairs: perms.len() * perms.len(),
        properties,
        convolutions,
        ok,
    })
}

fn convolution_properties(
    variety: &FlagVariety,
    perms: &[Permutation],
) -> Result<(Vec<PropertyResult>, Vec<ReportJson>)> {
    let n = variety.n();
    let sys = CoxeterSystem::new(CoxeterMatrix::type_a(n - 1)?)?;
    let pairs: Vec<(usize, usize)> =
        (0..perms.len()).flat_map(|i| (0..perms.len()).map(move |j| (i, j))).collect();
    let outcomes: Vec<(bool, Option<String>, std::result::Result<ReportJson, ConvolutionError>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (w1, w2) = (&perms[i], &perms[j]);
            let x1 = w1.to_element(&sys)?;
            let x2 = w2.to_element(&sys)?;
            let geometric: ElementSet = variety
                .geometric_convolve(w1, w2)?
                .iter()
                .map(|w| w.to_element(&sys))
                .collect::<std::result::Result<_, _>>()?;
            let combinatorial = convolution::convolve(&sys, &x1, &x2)?;
            let equal = geometric == combinatorial;
            let witness = (!equal).then(|| {
                format!("w1={w1} w2={w2}: geometric {geometric}, combinatorial {combinatorial}")
            });
            let report = convolution::report_from_set(&sys, &x1, &x2, geometric)
                .map(|r| ReportJson::from(&r));
            Ok((equal, witness, report))
        })
        .collect::<Result<_>>()?;

    let mut equality = Tally::default();
    let mut extremes = Tally::default();
    let mut reports = Vec::new();
    for (equal, witness, report) in outcomes {
        equality.record(equal, || witness.unwrap_or_default());
        match report {
            Ok(r) => {
                extremes.record(true, String::new);
                reports.push(r);
            }
            Err(e) => extremes.record(false, || e.to_string()),
        }
    }
    Ok((
        vec![
            equality.finish("geometric_convolution", None),
            extremes.finish("geometric_min_max", None),
        ],
        reports,
    ))
}

fn transport_properties(variety: &FlagVariety, perms: &[Permutation]) -> Vec<PropertyResult> {
    const NAMES: [&str; 3] = ["cartan_equivariance", "transport_surjective", "transport_well_defined"];
    if variety.field().p() < 3 {
        let note = GeometryError::FieldTooSmall.to_string();
        return NAMES.iter().map(|name| PropertyResult::skipped(name, note.clone())).collect();
    }
    let outcomes: Vec<std::result::Result<TransportStats, GeometryError>> =
        perms.par_iter().map(|w| geometry::transport_stats(variety, w)).collect();
    let mut tallies = [Tally::default(), Tally::default(), Tally::default()];
    let mut over_budget = Vec::new();
    for (w, outcome) in perms.iter().zip(outcomes) {
        let stats = match outcome {
            Ok(stats) => stats,
            Err(GeometryError::CapExceeded(_)) => {
                over_budget.push(w.to_string());
                continue;
            }
            Err(e) => {
                for t in &mut tallies {
                    t.record(false, || format!("w={w}: {e}"));
                }
                continue;
            }
        };
        let failures = [
            stats.equivariance_failures,
            stats.surjectivity_failures,
            stats.factorization_failures,
        ];
        for (t, failed) in tallies.iter_mut().zip(failures) {
            let witness = stats.witness;
            t.checked += stats.pairs as u64;
            t.passed += (stats.pairs - failed) as u64;
            if failed > 0 && t.first_failure.is_none() {
                let (i, j) = witness.expect("failing pair recorded");
                t.first_failure = Some(format!("w={w}, flags {i} and {j}"));
            }
        }
    }
    let note = (!over_budget.is_empty()).then(|| {
        format!(
            "positions {} skipped: over the budget of {} pair-element checks",
            over_budget.join(" "),
            geometry::CARTAN_BUDGET
        )
    });
    tallies
        .into_iter()
        .zip(NAMES)
        .map(|(t, name)| t.finish(name, note.clone()))
        .collect()
}
