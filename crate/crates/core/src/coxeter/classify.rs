//! Finite-type detection and group orders from the Coxeter graph.

use super::matrix::CoxeterMatrix;

/// Order of `W` if it is finite, computed from the classification of the
/// connected components of the Coxeter graph. `None` means infinite.
pub(crate) fn finite_order(matrix: &CoxeterMatrix) -> Option<u128> {
    components(matrix)
        .iter()
        .map(|comp| component_order(matrix, comp))
        .try_fold(1u128, |acc, order| order.and_then(|o| acc.checked_mul(o)))
}

fn components(matrix: &CoxeterMatrix) -> Vec<Vec<usize>> {
    let rank = matrix.rank();
    let mut seen = vec![false; rank];
    let mut out = Vec::new();
    for root in 0..rank {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for (u, seen_u) in seen.iter_mut().enumerate() {
                if !*seen_u && matrix.get(u, v) != Some(2) && u != v {
                    *seen_u = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

fn component_order(matrix: &CoxeterMatrix, comp: &[usize]) -> Option<u128> {
    let n = comp.len();
    if n == 1 {
        return Some(2);
    }
    let mut edges = Vec::new();
    for (a, &i) in comp.iter().enumerate() {
        for &j in &comp[a + 1..] {
            match matrix.get(i, j) {
                Some(2) => {}
                label => edges.push((i, j, label?)),
            }
        }
    }
    if n == 2 {
        return Some(2 * u128::from(edges[0].2));
    }
    // A finite connected graph of rank ≥ 3 is a tree.
    if edges.len() != n - 1 {
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let heavy: Vec<_> = edges.iter().filter(|e| e.2 != 3).collect();
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) >= 3).collect();
    let n128 = n as u128;
    match (heavy.as_slice(), branch.as_slice()) {
        ([], []) => Some(factorial(n128 + 1)),
        ([e], []) if e.2 == 4 => {
            let at_end = degree(e.0) == 1 || degree(e.1) == 1;
            if at_end {
                Some((1u128 << n) * factorial(n128))
            } else if n == 4 {
                Some(1152)
            } else {
                None
            }
        }
        ([e], []) if e.2 == 5 => match n {
            3 if degree(e.0) == 1 || degree(e.1) == 1 => Some(120),
            4 if degree(e.0) == 1 || degree(e.1) == 1 => Some(14400),
            _ => None,
        },
        ([], [b]) if degree(*b) == 3 => {
            let mut arms: Vec<usize> = edges
                .iter()
                .filter_map(|e| match (e.0 == *b, e.1 == *b) {
                    (true, _) => Some(e.1),
                    (_, true) => Some(e.0),
                    _ => None,
                })
                .map(|start| arm_length(&edges, *b, start, degree))
                .collect::<Option<_>>()?;
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Some((1u128 << (n - 1)) * factorial(n128)),
                [1, 2, 2] => Some(51_840),
                [1, 2, 3] => Some(2_903_040),
                [1, 2, 4] => Some(696_729_600),
                _ => None,
            }
        }
        _ => None,
    }
}

fn arm_length(
    edges: &[(usize, usize, u32)],
    branch: usize,
    start: usize,
    degree: impl Fn(usize) -> usize,
) -> Option<usize> {
    let (mut prev, mut cur, mut len) = (branch, start, 1);
    loop {
        match degree(cur) {
            1 => return Some(len),
            2 => {
                let next = edges.iter().find_map(|e| {
                    if e.0 == cur && e.1 != prev {
                        Some(e.1)
                    } else if e.1 == cur && e.0 != prev {
                        Some(e.0)
                    } else {
                        None
                    }
                })?;
                prev = cur;
                cur = next;
                len += 1;
            }
            _ => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u32]]) -> CoxeterMatrix {
        CoxeterMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&k| if k == 0 { None } else { Some(k) }).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn classical_orders() {
        assert_eq!(finite_order(&CoxeterMatrix::type_a(1).unwrap()), Some(2));
        assert_eq!(finite_order(&CoxeterMatrix::type_a(3).unwrap()), Some(24));
        assert_eq!(finite_order(&CoxeterMatrix::type_a(4).unwrap()), Some(120));
        assert_eq!(finite_order(&CoxeterMatrix::type_b(3).unwrap()), Some(48));
        assert_eq!(finite_order(&CoxeterMatrix::type_b(4).unwrap()), Some(384));
        assert_eq!(finite_order(&CoxeterMatrix::type_d(4).unwrap()), Some(192));
        assert_eq!(finite_order(&CoxeterMatrix::type_d(5).unwrap()), Some(1920));
        assert_eq!(finite_order(&CoxeterMatrix::dihedral(Some(7)).unwrap()), Some(14));
        assert_eq!(finite_order(&CoxeterMatrix::dihedral(None).unwrap()), None);
    }

    #[test]
    fn exceptional_and_reducible() {
        let f4 = m(&[&[1, 3, 2, 2], &[3, 1, 4, 2], &[2, 4, 1, 3], &[2, 2, 3, 1]]);
        assert_eq!(finite_order(&f4), Some(1152));
        let e6 = m(&[
            &[1, 3, 2, 2, 2, 2],
            &[3, 1, 3, 2, 2, 2],
            &[2, 3, 1, 3, 2, 3],
            &[2, 2, 3, 1, 3, 2],
            &[2, 2, 2, 3, 1, 2],
            &[2, 2, 3, 2, 2, 1],
        ]);
        assert_eq!(finite_order(&e6), Some(51_840));
        // A1 × A2
        let red = m(&[&[1, 2, 2], &[2, 1, 3], &[2, 3, 1]]);
        assert_eq!(finite_order(&red), Some(12));
        // affine A2 (triangle)
        let affine = m(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]);
        assert_eq!(finite_order(&affine), None);
        // affine C2: 4 - 4
        let c2 = m(&[&[1, 4, 2], &[4, 1, 4], &[2, 4, 1]]);
        assert_eq!(finite_order(&c2), None);
        // affine D4 star
        let d4aff = m(&[
            &[1, 3, 3, 3, 3],
            &[3, 1, 2, 2, 2],
            &[3, 2, 1, 2, 2],
            &[3, 2, 2, 1, 2],
            &[3, 2, 2, 2, 1],
        ]);
        assert_eq!(finite_order(&d4aff), None);
    }
}
