//! Dense Smith normal form over the integers and rank over F2.

use super::int::Int;

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive) of an integer matrix.
pub fn invariant_factors(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                        if a[i][j].is_unit() {
                            break;
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_mod_floor(&a[t][t]);
                for j in t..n {
                    let s = &q * &a[t][j];
                    a[i][j] -= &s;
                }
                if !r.is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_mod_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let s = &q * &row[t];
                    row[j] -= &s;
                }
                if !r.is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                let clean_col = (t + 1..m).all(|i| a[i][t].is_zero());
                let clean_row = (t + 1..n).all(|j| a[t][j].is_zero());
                if clean_col && clean_row {
                    break;
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    normalize_divisibility(diag)
}

/// Turn an arbitrary positive diagonal into a divisibility chain.
fn normalize_divisibility(mut d: Vec<Int>) -> Vec<Int> {
    let r = d.len();
    for i in 0..r {
        for j in i + 1..r {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank over F2 of a dense 0/1 matrix given as rows of bit words.
pub fn f2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, |r| r.len());
    let mut row_start = 0;
    for w in 0..words {
        for b in 0..64 {
            let bit = 1u64 << b;
            let Some(p) = (row_start..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(row_start, p);
            let pivot = rows[row_start].clone();
            for i in 0..rows.len() {
                if i != row_start && rows[i][w] & bit != 0 {
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x ^= *y;
                    }
                }
            }
            row_start += 1;
            rank += 1;
        }
    }
    rank
}

/// Pack a list of sparse rows (column indices) into bit words.
pub fn pack_rows(rows: &[Vec<usize>], ncols: usize) -> Vec<Vec<u64>> {
    let words = ncols.div_ceil(64).max(1);
    rows.iter()
        .map(|cols| {
            let mut r = vec![0u64; words];
            for &c in cols {
                r[c / 64] ^= 1u64 << (c % 64);
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| Int::new(x)).collect()).collect()
    }

    fn v(xs: &[Int]) -> Vec<i64> {
        xs.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn classic_examples() {
        assert_eq!(v(&invariant_factors(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]))), vec![2, 6, 12]);
        assert_eq!(v(&invariant_factors(m(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
        assert_eq!(v(&invariant_factors(m(&[&[0, 0], &[0, 0]]))), Vec::<i64>::new());
        assert_eq!(v(&invariant_factors(m(&[&[2, 2]]))), vec![2]);
    }

    #[test]
    fn determinant_is_preserved() {
        // det = 2*5 - 3*4 = -2 so the product of invariant factors is 2.
        let f = invariant_factors(m(&[&[2, 3], &[4, 5]]));
        assert_eq!(v(&f), vec![1, 2]);
    }

    #[test]
    fn f2_ranks() {
        let rows = pack_rows(&[vec![0, 1], vec![1, 2], vec![0, 2]], 3);
        assert_eq!(f2_rank(rows), 2);
        let rows = pack_rows(&[vec![70], vec![0, 70]], 71);
        assert_eq!(f2_rank(rows), 2);
    }
}
