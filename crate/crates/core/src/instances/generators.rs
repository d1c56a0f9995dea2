use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GeneralInstance, NormalizedInstance, SparseNonNegMatrix};
use crate::error::{InstanceError, ParseError};

/// Random k-row-sparse normalized instance.
///
/// Every row gets between 1 and `k` distinct columns (count uniform), with
/// values uniform in `[1, a_max_target]`. Pure function of its arguments.
pub fn gen_random_rs(
    n: usize,
    m: usize,
    k: usize,
    a_max_target: f64,
    seed: u64,
) -> Result<NormalizedInstance, InstanceError> {
    if n == 0 || m == 0 {
        return Err(InstanceError::InvalidParameter(format!("n = {n} and m = {m} must be >= 1")));
    }
    if k == 0 || k > m {
        return Err(InstanceError::InvalidParameter(format!("k = {k} must lie in [1, m = {m}]")));
    }
    if !a_max_target.is_finite() || a_max_target < 1.0 {
        return Err(InstanceError::InvalidParameter(format!("a_max = {a_max_target} must be >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        let count = rng.gen_range(1..=k);
        let mut cols = sample(&mut rng, m, count).into_vec();
        cols.sort_unstable();
        for j in cols {
            let v = if a_max_target > 1.0 { rng.gen_range(1.0..=a_max_target) } else { 1.0 };
            entries.push((i, j, v));
        }
    }
    NormalizedInstance::from_entries(n, m, entries)
}

/// Fractional vertex cover LP: one row per edge, one column per vertex.
///
/// The vertex count is one more than the largest endpoint.
pub fn gen_vertex_cover_lp(edges: &[(usize, usize)]) -> Result<NormalizedInstance, InstanceError> {
    let n_vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(2 * edges.len());
    for (row, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            return Err(InstanceError::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(InstanceError::DuplicateEdge(u, v));
        }
        entries.push((row, u, 1.0));
        entries.push((row, v, 1.0));
    }
    NormalizedInstance::from_entries(edges.len(), n_vertices, entries)
}

/// Binary set cover instance: `A[e][S] = 1` iff `e` is in `S`.
pub fn gen_set_cover(element_count: usize, sets: &[Vec<usize>]) -> Result<NormalizedInstance, InstanceError> {
    let mut entries = Vec::new();
    let mut covered = vec![false; element_count];
    for (s, members) in sets.iter().enumerate() {
        for &e in members {
            if e >= element_count {
                return Err(InstanceError::IndexOutOfRange {
                    row: e,
                    col: s,
                    n_rows: element_count,
                    n_cols: sets.len(),
                });
            }
            covered[e] = true;
            entries.push((e, s, 1.0));
        }
    }
    if let Some(e) = covered.iter().position(|c| !c) {
        return Err(InstanceError::UncoveredElement(e));
    }
    NormalizedInstance::from_entries(element_count, sets.len(), entries)
}

/// Random general (non-normalized) instance for exercising the reduction.
///
/// Entries are uniform in `[0.1, 10]`; about one in ten `b` and `c` values
/// is zero, the rest uniform in `[0.5, 5]`. Every row has at least one entry.
pub fn gen_random_general(n: usize, m: usize, k: usize, seed: u64) -> Result<GeneralInstance, InstanceError> {
    if n == 0 || m == 0 || k == 0 || k > m {
        return Err(InstanceError::InvalidParameter(format!("n = {n}, m = {m}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        let count = rng.gen_range(1..=k);
        for j in sample(&mut rng, m, count).into_vec() {
            entries.push((i, j, rng.gen_range(0.1..=10.0)));
        }
    }
    let weight = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.5..=5.0) };
    let b = (0..n).map(|_| weight(&mut rng)).collect();
    let c = (0..m).map(|_| weight(&mut rng)).collect();
    GeneralInstance::new(SparseNonNegMatrix::from_entries(n, m, entries)?, b, c)
}

/// Reads `<u> <v>` edge lines; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    content_lines(text)
        .map(|(line, content)| {
            let parsed: Vec<usize> = content
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| ParseError::new(line, format!("malformed vertex '{f}'"))))
                .collect::<Result<_, _>>()?;
            match parsed.as_slice() {
                [u, v] => Ok((*u, *v)),
                _ => Err(ParseError::new(line, "expected '<u> <v>'")),
            }
        })
        .collect()
}

/// Reads a set system: the first line is the element count, every further
/// line lists the (0-based) elements of one set.
pub fn parse_set_system(text: &str) -> Result<(usize, Vec<Vec<usize>>), ParseError> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| ParseError::new(1, "missing element count"))?;
    let count = first
        .parse()
        .map_err(|_| ParseError::new(line, format!("malformed element count '{first}'")))?;
    let sets = lines
        .map(|(line, content)| {
            content
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| ParseError::new(line, format!("malformed element '{f}'"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((count, sets))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_shape() {
        let inst = gen_random_rs(1, 1, 1, 1.0, 12345).unwrap();
        assert_eq!(inst.matrix().entries().collect::<Vec<_>>(), vec![(0, 0, 1.0)]);
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(gen_random_rs(30, 20, 3, 4.0, 9).unwrap(), gen_random_rs(30, 20, 3, 4.0, 9).unwrap());
        assert_ne!(gen_random_rs(30, 20, 3, 4.0, 9).unwrap(), gen_random_rs(30, 20, 3, 4.0, 10).unwrap());
        assert_eq!(gen_random_general(10, 10, 3, 1).unwrap(), gen_random_general(10, 10, 3, 1).unwrap());
    }

    #[test]
    fn row_sparsity_and_range() {
        let inst = gen_random_rs(50, 50, 3, 4.0, 7).unwrap();
        for i in 0..50 {
            let row = inst.matrix().row(i);
            assert!((1..=3).contains(&row.len()));
            assert!(row.iter().all(|&(_, v)| (1.0..=4.0).contains(&v)));
        }
        let s = inst.stats();
        assert!(s.gamma_p >= s.a_max && s.gamma_d >= s.a_max);
        assert!(s.gamma_d <= 3.0 * s.a_max);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_random_rs(0, 1, 1, 1.0, 0).is_err());
        assert!(gen_random_rs(1, 1, 2, 1.0, 0).is_err());
        assert!(gen_random_rs(1, 1, 0, 1.0, 0).is_err());
        assert!(gen_random_rs(1, 1, 1, 0.5, 0).is_err());
        assert!(gen_random_rs(1, 1, 1, f64::NAN, 0).is_err());
    }

    #[test]
    fn vertex_cover_lp() {
        let single = gen_vertex_cover_lp(&[(0, 1)]).unwrap();
        assert_eq!(single.n_rows(), 1);
        assert_eq!(single.n_cols(), 2);
        assert_eq!(single.matrix().row(0), &[(0, 1.0), (1, 1.0)]);

        let triangle = gen_vertex_cover_lp(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!((triangle.n_rows(), triangle.n_cols()), (3, 3));
        assert!((0..3).all(|i| triangle.matrix().row(i).len() == 2));
        assert_eq!(triangle.stats().row_sparsity, 2);
        assert_eq!(triangle.stats().a_max, 1.0);

        assert_eq!(gen_vertex_cover_lp(&[(1, 1)]), Err(InstanceError::SelfLoop(1)));
        assert_eq!(gen_vertex_cover_lp(&[(0, 1), (1, 0)]), Err(InstanceError::DuplicateEdge(1, 0)));
    }

    #[test]
    fn set_cover() {
        let one = gen_set_cover(1, &[vec![0]]).unwrap();
        assert_eq!(one.matrix().entries().collect::<Vec<_>>(), vec![(0, 0, 1.0)]);

        let two = gen_set_cover(2, &[vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!((two.n_rows(), two.n_cols()), (2, 3));
        assert_eq!(two.matrix().row(0), &[(0, 1.0), (2, 1.0)]);
        assert_eq!(two.matrix().row(1), &[(1, 1.0), (2, 1.0)]);

        assert_eq!(gen_set_cover(2, &[vec![0]]), Err(InstanceError::UncoveredElement(1)));
    }

    #[test]
    fn text_inputs() {
        assert_eq!(parse_edge_list("0 1\n# c\n1 2 # tail\n").unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(parse_edge_list("0 1 2\n").unwrap_err().line, 1);
        let (n, sets) = parse_set_system("3\n0 1\n2\n").unwrap();
        assert_eq!(n, 3);
        assert_eq!(sets, vec![vec![0, 1], vec![2]]);
        assert!(parse_set_system("x\n").is_err());
    }
}
