//! Exact faithful representations used to compute in `W`.
//!
//! Each backend stores a group element as a hashable [`State`] and supports
//! multiplication by a generator on either side together with the two
//! descent tests. Everything else (normal forms, lengths, Bruhat order) is
//! built on top of these four primitives.

use super::matrix::CoxeterMatrix;

/// Backend-specific encoding of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum State {
    /// One-line notation `w(0), …, w(n-1)` of a permutation of `0..n`.
    Perm(Vec<u8>),
    /// Alternating word `start, other, start, …` of length `len`.
    Dihedral { start: u8, len: u32 },
    /// Matrices of `w` and `w⁻¹` on simple-root coordinates, row-major.
    Linear { fwd: Vec<i64>, inv: Vec<i64> },
}

#[derive(Clone, Debug)]
pub(crate) enum Backend {
    Permutation { n: usize },
    Dihedral { m: Option<u32> },
    Cartan { rank: usize, cartan: Vec<i64> },
}

impl Backend {
    pub(crate) fn identity(&self) -> State {
        match self {
            Backend::Permutation { n } => State::Perm((0..*n as u8).collect()),
            Backend::Dihedral { .. } => State::Dihedral { start: 0, len: 0 },
            Backend::Cartan { rank, .. } => {
                let id = identity_matrix(*rank);
                State::Linear { fwd: id.clone(), inv: id }
            }
        }
    }

    pub(crate) fn mul_right(&self, state: &mut State, s: usize) {
        match (self, state) {
            (Backend::Permutation { .. }, State::Perm(w)) => w.swap(s, s + 1),
            (Backend::Dihedral { m }, State::Dihedral { start, len }) => {
                let s = s as u8;
                if Some(*len) == *m {
                    // w₀ has both letters as descents; drop the trailing `s`.
                    *start = if last_letter(0, *len) == s { 0 } else { 1 };
                    *len -= 1;
                } else if *len > 0 && last_letter(*start, *len) == s {
                    *len -= 1;
                } else {
                    if *len == 0 {
                        *start = s;
                    }
                    *len += 1;
                }
                normalize_dihedral(*m, start, len);
            }
            (Backend::Cartan { rank, cartan }, State::Linear { fwd, inv }) => {
                column_reflect(fwd, *rank, cartan, s);
                row_reflect(inv, *rank, cartan, s);
            }
            _ => unreachable!("state does not belong to this backend"),
        }
    }

    pub(crate) fn mul_left(&self, state: &mut State, s: usize) {
        match (self, state) {
            (Backend::Permutation { .. }, State::Perm(w)) => {
                let (a, b) = (s as u8, s as u8 + 1);
                for v in w.iter_mut() {
                    if *v == a {
                        *v = b;
                    } else if *v == b {
                        *v = a;
                    }
                }
            }
            (Backend::Dihedral { m }, State::Dihedral { start, len }) => {
                let s = s as u8;
                if Some(*len) == *m || (*len > 0 && *start == s) {
                    *start = 1 - s;
                    *len -= 1;
                } else {
                    *start = s;
                    *len += 1;
                }
                normalize_dihedral(*m, start, len);
            }
            (Backend::Cartan { rank, cartan }, State::Linear { fwd, inv }) => {
                row_reflect(fwd, *rank, cartan, s);
                column_reflect(inv, *rank, cartan, s);
            }
            _ => unreachable!("state does not belong to this backend"),
        }
    }

    /// `ℓ(ws) < ℓ(w)`.
    pub(crate) fn right_descent(&self, state: &State, s: usize) -> bool {
        match (self, state) {
            (Backend::Permutation { .. }, State::Perm(w)) => w[s] > w[s + 1],
            (Backend::Dihedral { m }, State::Dihedral { start, len }) => {
                Some(*len) == *m || (*len > 0 && last_letter(*start, *len) == s as u8)
            }
            (Backend::Cartan { rank, .. }, State::Linear { fwd, .. }) => {
                column_is_negative(fwd, *rank, s)
            }
            _ => unreachable!("state does not belong to this backend"),
        }
    }

    /// `ℓ(sw) < ℓ(w)`.
    pub(crate) fn left_descent(&self, state: &State, s: usize) -> bool {
        match (self, state) {
            (Backend::Permutation { .. }, State::Perm(w)) => {
                let pos = |v: u8| w.iter().position(|&x| x == v).unwrap();
                pos(s as u8) > pos(s as u8 + 1)
            }
            (Backend::Dihedral { m }, State::Dihedral { start, len }) => {
                Some(*len) == *m || (*len > 0 && *start == s as u8)
            }
            (Backend::Cartan { rank, .. }, State::Linear { inv, .. }) => {
                column_is_negative(inv, *rank, s)
            }
            _ => unreachable!("state does not belong to this backend"),
        }
    }

    /// Column `s` of `w` on root coordinates, i.e. the root `w(α_s)`.
    pub(crate) fn root_image(&self, state: &State, s: usize) -> Option<Vec<i64>> {
        match (self, state) {
            (Backend::Cartan { rank, .. }, State::Linear { fwd, .. }) => {
                Some((0..*rank).map(|i| fwd[i * rank + s]).collect())
            }
            _ => None,
        }
    }
}

fn last_letter(start: u8, len: u32) -> u8 {
    if len % 2 == 1 {
        start
    } else {
        1 - start
    }
}

fn normalize_dihedral(m: Option<u32>, start: &mut u8, len: &mut u32) {
    if *len == 0 || Some(*len) == m {
        *start = 0;
    }
}

fn identity_matrix(rank: usize) -> Vec<i64> {
    let mut id = vec![0; rank * rank];
    for i in 0..rank {
        id[i * rank + i] = 1;
    }
    id
}

// s(α_j) = α_j - a_{sj} α_s, so right multiplication by s is the column
// operation col_j -= a_{sj} col_s (for j = s this negates the column).
fn column_reflect(mat: &mut [i64], rank: usize, cartan: &[i64], s: usize) {
    for i in 0..rank {
        let pivot = mat[i * rank + s];
        if pivot == 0 {
            continue;
        }
        for j in 0..rank {
            let a = cartan[s * rank + j];
            if a != 0 {
                mat[i * rank + j] -= a * pivot;
            }
        }
    }
}

// s(v) = v - (Σ_i a_{si} v_i) α_s applied to every column: only row s changes.
fn row_reflect(mat: &mut [i64], rank: usize, cartan: &[i64], s: usize) {
    for j in 0..rank {
        let pairing: i64 = (0..rank).map(|i| cartan[s * rank + i] * mat[i * rank + j]).sum();
        mat[s * rank + j] -= pairing;
    }
}

fn column_is_negative(mat: &[i64], rank: usize, s: usize) -> bool {
    (0..rank)
        .map(|i| mat[i * rank + s])
        .find(|&c| c != 0)
        .is_some_and(|c| c < 0)
}

/// Integer generalized Cartan matrix whose Weyl group is the Coxeter group of
/// `matrix`. Returns `None` when some entry is outside `{2, 3, 4, 6, ∞}`.
pub(crate) fn cartan_matrix(matrix: &CoxeterMatrix) -> Option<Vec<i64>> {
    let rank = matrix.rank();
    let mut a = vec![0i64; rank * rank];
    for i in 0..rank {
        a[i * rank + i] = 2;
        for j in i + 1..rank {
            // a_ij · a_ji = 4cos²(π/m)
            let (upper, lower) = match matrix.get(i, j) {
                Some(2) => (0, 0),
                Some(3) => (-1, -1),
                Some(4) => (-1, -2),
                Some(6) => (-1, -3),
                None => (-2, -2),
                _ => return None,
            };
            a[i * rank + j] = upper;
            a[j * rank + i] = lower;
        }
    }
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3_backend() -> Backend {
        let m = CoxeterMatrix::type_b(3).unwrap();
        Backend::Cartan { rank: 3, cartan: cartan_matrix(&m).unwrap() }
    }

    #[test]
    fn generators_are_involutions() {
        let backends = [
            Backend::Permutation { n: 4 },
            Backend::Dihedral { m: Some(5) },
            Backend::Dihedral { m: None },
            b3_backend(),
        ];
        for b in &backends {
            let rank = match b {
                Backend::Permutation { n } => n - 1,
                Backend::Dihedral { .. } => 2,
                Backend::Cartan { rank, .. } => *rank,
            };
            for s in 0..rank {
                let mut st = b.identity();
                b.mul_right(&mut st, s);
                assert!(b.right_descent(&st, s));
                assert!(b.left_descent(&st, s));
                b.mul_right(&mut st, s);
                assert_eq!(st, b.identity());
                b.mul_left(&mut st, s);
                b.mul_left(&mut st, s);
                assert_eq!(st, b.identity());
            }
        }
    }

    #[test]
    fn braid_relation_in_cartan_backend() {
        let b = b3_backend();
        // (s1 s2)^4 = 1, (s2 s3)^3 = 1, (s1 s3)^2 = 1.
        for (i, j, m) in [(0, 1, 4), (1, 2, 3), (0, 2, 2)] {
            let mut st = b.identity();
            for _ in 0..m {
                b.mul_right(&mut st, i);
                b.mul_right(&mut st, j);
            }
            assert_eq!(st, b.identity(), "({i},{j})^{m}");
            let mut st = b.identity();
            for _ in 0..m - 1 {
                b.mul_right(&mut st, i);
                b.mul_right(&mut st, j);
            }
            assert_ne!(st, b.identity());
        }
    }

    #[test]
    fn dihedral_longest_element() {
        let b = Backend::Dihedral { m: Some(3) };
        let mut x = b.identity();
        for s in [0, 1, 0] {
            b.mul_right(&mut x, s);
        }
        let mut y = b.identity();
        for s in [1, 0, 1] {
            b.mul_right(&mut y, s);
        }
        assert_eq!(x, y);
        assert!(b.right_descent(&x, 0) && b.right_descent(&x, 1));
        b.mul_right(&mut x, 1);
        // s1 s2 s1 · s2 = s1 s2 s1 s2 = s2 s1 as alternating word starting at 1.
        assert_eq!(x, State::Dihedral { start: 1, len: 2 });
    }

    #[test]
    fn cartan_entries() {
        let g2 = CoxeterMatrix::dihedral(Some(6)).unwrap();
        assert_eq!(cartan_matrix(&g2).unwrap(), vec![2, -1, -3, 2]);
        let h = CoxeterMatrix::dihedral(Some(5)).unwrap();
        assert!(cartan_matrix(&h).is_none());
    }
}
