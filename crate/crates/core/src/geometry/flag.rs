use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{MatrixGF, PrimeField};
use super::permutation::Permutation;
use super::GeometryError;

/// A full flag `V₁ ⊂ ⋯ ⊂ V_{n-1}` in `𝔽_pⁿ`, each subspace kept as its
/// reduced echelon basis so equal flags compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    n: usize,
    field_p: u8,
    subspaces: Vec<MatrixGF>,
}

impl Flag {
    /// The flag whose `i`-th subspace is spanned by the first `i` rows of
    /// the invertible matrix `basis`.
    pub fn from_basis(basis: &MatrixGF) -> Result<Self, GeometryError> {
        if !basis.is_invertible() {
            return Err(GeometryError::InvalidMatrix("basis matrix is singular".into()));
        }
        let n = basis.rows();
        Ok(Flag {
            n,
            field_p: basis.field().p(),
            subspaces: (1..n).map(|i| basis.top(i).rref()).collect(),
        })
    }

    /// `E`: `V_i = ⟨e₁, …, e_i⟩`.
    pub fn standard(n: usize, field: PrimeField) -> Self {
        Self::from_basis(&MatrixGF::identity(field, n)).expect("identity is invertible")
    }

    /// `w·E`: `V_i = ⟨e_{w(1)}, …, e_{w(i)}⟩`.
    pub fn permuted(w: &Permutation, field: PrimeField) -> Self {
        let n = w.n();
        let mut basis = MatrixGF::zeros(field, n, n);
        for i in 0..n {
            basis.set(i, w.apply(i), 1);
        }
        Self::from_basis(&basis).expect("permutation matrix is invertible")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.field_p).expect("flag built over a supported field")
    }

    /// `V_i` for `0 ≤ i ≤ n`, with `V₀ = 0` and `V_n = 𝔽_pⁿ`.
    pub fn subspace(&self, i: usize) -> MatrixGF {
        match i {
            0 => MatrixGF::zeros(self.field(), 0, self.n),
            i if i == self.n => MatrixGF::identity(self.field(), self.n),
            i => self.subspaces[i - 1].clone(),
        }
    }

    /// Rows `v₁, …, v_n` with `V_i = ⟨v₁, …, v_i⟩`.
    pub fn adapted_basis(&self) -> MatrixGF {
        let mut basis = MatrixGF::zeros(self.field(), 0, self.n);
        for i in 1..=self.n {
            let vi = self.subspace(i);
            let next = (0..vi.rows())
                .map(|r| basis.vstack(&vi.row_matrix(r)))
                .find(|cand| cand.rank() == i)
                .expect("V_{i-1} is a proper subspace of V_i");
            basis = next;
        }
        basis
    }

    /// `g·F` for an invertible `g` acting on column vectors.
    pub fn transform(&self, g: &MatrixGF) -> Flag {
        let gt = g.transpose();
        Flag {
            n: self.n,
            field_p: self.field_p,
            subspaces: self.subspaces.iter().map(|v| v.mul(&gt).rref()).collect(),
        }
    }

    /// Whether `g` maps every `V_i` into itself.
    pub fn is_stabilized_by(&self, g: &MatrixGF) -> bool {
        let gt = g.transpose();
        self.subspaces
            .iter()
            .all(|v| v.vstack(&v.mul(&gt)).rank() == v.rows())
    }

    fn check_compatible(&self, other: &Flag) -> Result<(), GeometryError> {
        if self.n == other.n && self.field_p == other.field_p {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch)
        }
    }
}

#[derive(Serialize)]
struct FlagJson {
    n: usize,
    p: u8,
    subspaces: Vec<Vec<Vec<u8>>>,
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FlagJson {
            n: self.n,
            p: self.field_p,
            subspaces: self.subspaces.iter().map(|v| v.to_rows()).collect(),
        }
        .serialize(serializer)
    }
}

/// Desk-scale limits: `n ≤ 4` over `𝔽₂`, `n ≤ 3` over `𝔽₃` and `𝔽₅`.
pub fn check_caps(n: usize, field: PrimeField) -> Result<(), GeometryError> {
    let max_n = if field.p() == 2 { 4 } else { 3 };
    if (1..=max_n).contains(&n) {
        Ok(())
    } else {
        Err(GeometryError::CapExceeded(format!(
            "flag enumeration supports 1 <= n <= {max_n} over F_{}, got n = {n}",
            field.p()
        )))
    }
}

/// Every full flag in `𝔽_pⁿ`, each once, in a fixed order.
pub fn enumerate_flags(n: usize, field: PrimeField) -> Result<Vec<Flag>, GeometryError> {
    check_caps(n, field)?;
    let vectors: Vec<MatrixGF> = (0..(field.p() as usize).pow(n as u32))
        .map(|mut code| {
            let row: Vec<u8> = (0..n)
                .map(|_| {
                    let d = (code % field.p() as usize) as u8;
                    code /= field.p() as usize;
                    d
                })
                .collect();
            MatrixGF::from_rows(field, &[row]).expect("residues in range")
        })
        .collect();
    let mut partial: BTreeSet<Vec<MatrixGF>> = BTreeSet::from([Vec::new()]);
    for dim in 1..n {
        let mut next = BTreeSet::new();
        for chain in &partial {
            let current = chain.last().cloned().unwrap_or_else(|| MatrixGF::zeros(field, 0, n));
            for v in &vectors {
                let bigger = current.vstack(v).rref();
                if bigger.rows() == dim {
                    let mut extended = chain.clone();
                    extended.push(bigger);
                    next.insert(extended);
                }
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|subspaces| Flag { n, field_p: field.p(), subspaces })
        .collect())
}

fn intersection_dim(a: &MatrixGF, b: &MatrixGF) -> usize {
    a.rows() + b.rows() - a.vstack(b).rank()
}

/// `r_ij = dim(V_i(F₁) ∩ V_j(F₂))` for `0 ≤ i, j ≤ n`.
pub fn rank_table(f1: &Flag, f2: &Flag) -> Result<Vec<Vec<usize>>, GeometryError> {
    f1.check_compatible(f2)?;
    let n = f1.n;
    let left: Vec<_> = (0..=n).map(|i| f1.subspace(i)).collect();
    let right: Vec<_> = (0..=n).map(|j| f2.subspace(j)).collect();
    Ok(left
        .iter()
        .map(|a| right.iter().map(|b| intersection_dim(a, b)).collect())
        .collect())
}

/// Relative position of two flags, read off the jumps of the rank table.
/// Normalized so that `relpos(E, w·E) = w`.
pub fn relpos(f1: &Flag, f2: &Flag) -> Result<Permutation, GeometryError> {
    let r = rank_table(f1, f2)?;
    let n = f1.n;
    let mut images = vec![u8::MAX; n];
    for i in 1..=n {
        for j in 1..=n {
            let jump = (r[i][j] + r[i - 1][j - 1]) as isize
                - r[i - 1][j] as isize
                - r[i][j - 1] as isize;
            if jump == 1 {
                images[j - 1] = (i - 1) as u8;
            }
        }
    }
    debug_assert!(images.iter().all(|&v| v != u8::MAX));
    Ok(Permutation::from_zero_based(images))
}

/// All flags of `𝔽_pⁿ` with their pairwise relative positions.
pub struct FlagVariety {
    n: usize,
    field: PrimeField,
    flags: Vec<Flag>,
    index: HashMap<Flag, usize>,
    perms: Vec<Permutation>,
    /// `relpos[i * N + j]` is the rank of `relpos(F_i, F_j)` in `perms`.
    relpos: Vec<u16>,
    /// `cells[i][w]`: indices `j` with `relpos(F_i, F_j) = w`.
    cells: Vec<Vec<Vec<u32>>>,
}

impl FlagVariety {
    pub fn new(n: usize, field: PrimeField) -> Result<Self, GeometryError> {
        let flags = enumerate_flags(n, field)?;
        let count = flags.len();
        let perms = Permutation::all(n);
        let relpos: Vec<u16> = (0..count)
            .into_par_iter()
            .flat_map_iter(|i| {
                let flags = &flags;
                (0..count).map(move |j| {
                    relpos(&flags[i], &flags[j]).expect("same n and field").rank() as u16
                })
            })
            .collect();
        let cells = (0..count)
            .map(|i| {
                let mut by_perm = vec![Vec::new(); perms.len()];
                for j in 0..count {
                    by_perm[relpos[i * count + j] as usize].push(j as u32);
                }
                by_perm
            })
            .collect();
        let index = flags.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(FlagVariety { n, field, flags, index, perms, relpos, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn index_of(&self, flag: &Flag) -> Option<usize> {
        self.index.get(flag).copied()
    }

    pub fn relpos(&self, i: usize, j: usize) -> &Permutation {
        &self.perms[self.relpos[i * self.flags.len() + j] as usize]
    }

    fn check_perm(&self, w: &Permutation) -> Result<(), GeometryError> {
        if w.n() == self.n {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch)
        }
    }

    /// Indices `j` with `relpos(F_i, F_j) = w`.
    pub fn cell(&self, i: usize, w: &Permutation) -> Result<&[u32], GeometryError> {
        self.check_perm(w)?;
        Ok(&self.cells[i][w.rank()])
    }

    /// Pairs `(i, j)` with `relpos(F_i, F_j) = w`.
    pub fn pairs_in_position(&self, w: &Permutation) -> Result<Vec<(usize, usize)>, GeometryError> {
        self.check_perm(w)?;
        let r = w.rank();
        Ok((0..self.len())
            .flat_map(|i| self.cells[i][r].iter().map(move |&j| (i, j as usize)))
            .collect())
    }

    /// `{ relpos(F₁, F₂) : ∃F, relpos(F₁, F) = w₁, relpos(F, F₂) = w₂ }`
    /// over every admissible triple of flags.
    pub fn geometric_convolve(
        &self,
        w1: &Permutation,
        w2: &Permutation,
    ) -> Result<BTreeSet<Permutation>, GeometryError> {
        self.check_perm(w1)?;
        self.check_perm(w2)?;
        let (r1, r2) = (w1.rank(), w2.rank());
        let found: BTreeSet<u16> = (0..self.len())
            .into_par_iter()
            .map(|a| {
                let mut local = BTreeSet::new();
                for &mid in &self.cells[a][r1] {
                    for &b in &self.cells[mid as usize][r2] {
                        local.insert(self.relpos[a * self.len() + b as usize]);
                    }
                }
                local
            })
            .reduce(BTreeSet::new, |mut x, y| {
                x.extend(y);
                x
            });
        Ok(found.into_iter().map(|r| self.perms[r as usize].clone()).collect())
    }

    /// Number of flags in position `w` relative to the standard flag.
    pub fn schubert_count(&self, w: &Permutation) -> Result<usize, GeometryError> {
        let e = self
            .index_of(&Flag::standard(self.n, self.field))
            .expect("standard flag is enumerated");
        Ok(self.cell(e, w)?.len())
    }
}

/// [`FlagVariety::geometric_convolve`] on a freshly enumerated variety.
pub fn geometric_convolve(
    w1: &Permutation,
    w2: &Permutation,
    n: usize,
    field: PrimeField,
) -> Result<BTreeSet<Permutation>, GeometryError> {
    FlagVariety::new(n, field)?.geometric_convolve(w1, w2)
}

/// [`FlagVariety::schubert_count`] on a freshly enumerated variety.
pub fn schubert_count(w: &Permutation, n: usize, field: PrimeField) -> Result<usize, GeometryError> {
    FlagVariety::new(n, field)?.schubert_count(w)
}
