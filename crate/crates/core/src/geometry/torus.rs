//! Borel subgroups as flag stabilizers and the transport of torus
//! coordinates between two Borels through their intersection.
//!
//! For `b ∈ B₁ ∩ B₂` the image in `𝐓_{B_k}` is the diagonal of `b` in a
//! basis adapted to `F_k`. It does not depend on the adapted basis and kills
//! the unipotent radical, so it is the quotient map `B_k → B_k/U_k`.

use std::collections::HashSet;

use serde::Serialize;

use super::flag::{Flag, FlagVariety};
use super::linalg::{MatrixGF, PrimeField};
use super::permutation::Permutation;
use super::GeometryError;

/// Work budget (pairs × Borel size) for the exhaustive equivariance sweep.
pub const CARTAN_BUDGET: usize = 20_000_000;

/// Bound on `b·u` products tried per flag pair in the well-definedness
/// check; beyond it `b` runs over an evenly strided subset of `B₁ ∩ B₂`.
pub const FACTOR_CHECKS_PER_PAIR: usize = 8192;

/// A point of the diagonal torus: nonzero residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusElement(Vec<u8>);

impl TorusElement {
    pub fn new(diagonal: Vec<u8>) -> Result<Self, GeometryError> {
        if diagonal.contains(&0) {
            return Err(GeometryError::InvalidMatrix("torus entries must be nonzero".into()));
        }
        Ok(TorusElement(diagonal))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&d| d == 1)
    }

    /// `j ↦ t[w(j)]`.
    pub fn permuted_by(&self, w: &Permutation) -> TorusElement {
        TorusElement((0..self.0.len()).map(|j| self.0[w.apply(j)]).collect())
    }
}

/// An adapted basis of a flag (as columns) together with its inverse.
struct Adapted {
    a: MatrixGF,
    a_inv: MatrixGF,
}

impl Adapted {
    fn of(flag: &Flag) -> Self {
        let a = flag.adapted_basis().transpose();
        let a_inv = a.inverse().expect("adapted basis is invertible");
        Adapted { a, a_inv }
    }

    /// Diagonal of `b` in this basis; `b` must stabilize the flag.
    fn diagonal(&self, b: &MatrixGF) -> TorusElement {
        let m = self.a_inv.mul(b).mul(&self.a);
        TorusElement((0..m.rows()).map(|i| m.get(i, i)).collect())
    }
}

fn check_field(field: PrimeField) -> Result<(), GeometryError> {
    if field.p() < 3 {
        Err(GeometryError::FieldTooSmall)
    } else {
        Ok(())
    }
}

/// Images of `b ∈ B₁ ∩ B₂` in `𝐓_{B₁}` and `𝐓_{B₂}`.
pub fn torus_transport(
    f1: &Flag,
    f2: &Flag,
    b: &MatrixGF,
) -> Result<(TorusElement, TorusElement), GeometryError> {
    check_field(f1.field())?;
    if f1.n() != f2.n() || f1.field() != f2.field() || b.rows() != f1.n() {
        return Err(GeometryError::DimensionMismatch);
    }
    if !b.is_invertible() || !f1.is_stabilized_by(b) || !f2.is_stabilized_by(b) {
        return Err(GeometryError::NotInIntersection);
    }
    Ok((Adapted::of(f1).diagonal(b), Adapted::of(f2).diagonal(b)))
}

/// The stabilizer of `flag` in `GL_n(𝔽_p)`: `A U A⁻¹` over invertible
/// upper-triangular `U`, with `A` an adapted basis.
pub fn borel(flag: &Flag) -> Vec<MatrixGF> {
    let field = flag.field();
    let n = flag.n();
    let Adapted { a, a_inv } = Adapted::of(flag);
    upper_triangular(field, n)
        .into_iter()
        .map(|u| a.mul(&u).mul(&a_inv))
        .collect()
}

fn upper_triangular(field: PrimeField, n: usize) -> Vec<MatrixGF> {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = vec![MatrixGF::zeros(field, n, n)];
    for &(i, j) in &slots {
        let values: Vec<u8> = if i == j {
            field.units().collect()
        } else {
            field.elements().collect()
        };
        out = out
            .into_iter()
            .flat_map(|m| {
                values.iter().map(move |&v| {
                    let mut m = m.clone();
                    m.set(i, j, v);
                    m
                })
            })
            .collect();
    }
    out
}

/// `B₁ ∩ B₂`.
pub fn intersection(f1: &Flag, f2: &Flag) -> Vec<MatrixGF> {
    borel(f1).into_iter().filter(|b| f2.is_stabilized_by(b)).collect()
}

/// Outcome of the transport sweep over all pairs in one relative position.
/// Failure counts are numbers of flag pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransportStats {
    pub pairs: usize,
    /// Total size of the intersections `B₁ ∩ B₂` visited.
    pub elements: usize,
    /// Pairs with some `b` where `t₂ ≠ t₁ ∘ w`.
    pub equivariance_failures: usize,
    /// Pairs where `B₁ ∩ B₂ → 𝐓_{B₁}` misses a torus point.
    pub surjectivity_failures: usize,
    /// Pairs where `transport(bu) ≠ transport(b)` for some unipotent `u`.
    pub factorization_failures: usize,
    /// First offending pair, as flag indices.
    pub witness: Option<(usize, usize)>,
}

impl TransportStats {
    pub fn is_equivariant(&self) -> bool {
        self.equivariance_failures == 0
    }

    pub fn is_surjective(&self) -> bool {
        self.surjectivity_failures == 0
    }

    pub fn factors_through_unipotent(&self) -> bool {
        self.factorization_failures == 0
    }
}

/// Runs the transport checks for every pair of flags in position `w` and
/// every element of their Borel intersection.
pub fn transport_stats(variety: &FlagVariety, w: &Permutation) -> Result<TransportStats, GeometryError> {
    let field = variety.field();
    check_field(field)?;
    let pairs = variety.pairs_in_position(w)?;
    let borel_size = (field.p() as usize - 1).pow(variety.n() as u32)
        * (field.p() as usize).pow((variety.n() * (variety.n() - 1) / 2) as u32);
    if pairs.len().saturating_mul(borel_size) > CARTAN_BUDGET {
        return Err(GeometryError::CapExceeded(format!(
            "{} pairs x {borel_size} Borel elements exceeds the budget {CARTAN_BUDGET}",
            pairs.len()
        )));
    }
    let torus_size = (field.p() as usize - 1).pow(variety.n() as u32);
    let flags = variety.flags();
    let mut stats = TransportStats::default();
    let adapted: Vec<Adapted> = flags.iter().map(Adapted::of).collect();
    let mut borels: Vec<Option<Vec<MatrixGF>>> = vec![None; flags.len()];
    for (i, j) in pairs {
        let (a1, a2) = (&adapted[i], &adapted[j]);
        let b1 = borels[i].get_or_insert_with(|| borel(&flags[i]));
        let both: Vec<&MatrixGF> = b1.iter().filter(|b| flags[j].is_stabilized_by(b)).collect();
        let images: Vec<(TorusElement, TorusElement)> =
            both.iter().map(|b| (a1.diagonal(b), a2.diagonal(b))).collect();
        let equivariant = images.iter().all(|(t1, t2)| *t2 == t1.permuted_by(w));
        let hit: HashSet<&TorusElement> = images.iter().map(|(t1, _)| t1).collect();
        let onto = hit.len() == torus_size;

        // The kernel on the F₁ side must be unipotent for F₂ as well, and
        // right-multiplying by it must not move either image.
        let unipotent: Vec<&MatrixGF> = both
            .iter()
            .zip(&images)
            .filter(|(_, (t1, _))| t1.is_trivial())
            .map(|(b, _)| *b)
            .collect();
        let stride = (both.len() * unipotent.len()).div_ceil(FACTOR_CHECKS_PER_PAIR).max(1);
        let factors = unipotent.iter().all(|u| a2.diagonal(u).is_trivial())
            && both.iter().zip(&images).step_by(stride).all(|(b, img)| {
                unipotent.iter().all(|u| {
                    let bu = b.mul(u);
                    (a1.diagonal(&bu), a2.diagonal(&bu)) == *img
                })
            });
        stats.equivariance_failures += usize::from(!equivariant);
        stats.surjectivity_failures += usize::from(!onto);
        stats.factorization_failures += usize::from(!factors);
        if !(equivariant && onto && factors) && stats.witness.is_none() {
            stats.witness = Some((i, j));
        }
        stats.pairs += 1;
        stats.elements += both.len();
    }
    Ok(stats)
}

/// True iff for every pair in position `w` and every `b ∈ B₁ ∩ B₂` the two
/// transported torus points satisfy `t₂(j) = t₁(w(j))`.
pub fn cartan_equivariance_check(
    w: &Permutation,
    n: usize,
    field: PrimeField,
) -> Result<bool, GeometryError> {
    check_field(field)?;
    let variety = FlagVariety::new(n, field)?;
    Ok(transport_stats(&variety, w)?.is_equivariant())
}
