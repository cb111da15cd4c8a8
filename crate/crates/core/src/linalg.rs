//! Small exact helpers on matrices of polynomials and rationals.

use num_traits::{One, Zero};

use crate::poly::{Polynomial, Rational, VarList};

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 && cur[0] == n - k {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant by cofactor expansion; matrices here are at most 4x4 or so.
pub fn determinant(m: &[Vec<Polynomial>], vars: &VarList) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::one(vars),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = Polynomial::zero(vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor, vars);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// The nonzero `k x k` minors of `m`, deduplicated up to scalar multiples.
pub fn minors(m: &[Vec<Polynomial>], k: usize, vars: &VarList) -> Vec<Polynomial> {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    if k == 0 {
        return vec![Polynomial::one(vars)];
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<Polynomial>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            let d = determinant(&sub, vars);
            if d.is_zero() {
                continue;
            }
            let p = d.primitive();
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Rank of a rational matrix by Gaussian elimination.
/// Clears column `c` outside row `r` using row `r` as pivot.
fn clear_column(a: &mut [Vec<Rational>], r: usize, c: usize) {
    let pivot = std::mem::take(&mut a[r]);
    let inv = Rational::one() / &pivot[c];
    for row in a.iter_mut() {
        if row.is_empty() || row[c].is_zero() {
            continue;
        }
        let f = &row[c] * &inv;
        for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
            *x -= p * &f;
        }
    }
    a[r] = pivot;
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        clear_column(&mut a, r, c);
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// A nonzero rational vector `c` with `Σ c_i rows_i = 0`, if the rows are
/// linearly dependent.
pub fn left_kernel_vector(rows_in: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = rows_in.len();
    if n == 0 {
        return None;
    }
    let cols = rows_in[0].len();
    // Row-reduce the augmented matrix [rows | I].
    let mut a: Vec<Vec<Rational>> = rows_in
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            v
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        clear_column(&mut a, r, c);
        r += 1;
    }
    (r < n).then(|| a[r][cols..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn combinations_enumerate_subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn minors_of_symbolic_matrix() {
        let vars = VarList::of(&["x", "y"]);
        let p = |s: &str| Polynomial::parse(s, &vars).unwrap();
        let m = vec![vec![p("x"), p("y"), p("0")], vec![p("1"), p("x"), p("y")]];
        let mut got: Vec<String> = minors(&m, 2, &vars).iter().map(|q| q.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2 - y", "y^2"]);
        let three = vec![
            vec![p("1"), p("2"), p("3")],
            vec![p("0"), p("x"), p("1")],
            vec![p("y"), p("0"), p("1")],
        ];
        assert_eq!(determinant(&three, &vars).to_string(), "-3*x*y + x + 2*y");
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(&m), 2);
        let k = left_kernel_vector(&m).unwrap();
        for c in 0..3 {
            let s: Rational = k.iter().zip(&m).map(|(x, row)| x * &row[c]).sum();
            assert!(s.is_zero());
        }
        assert!(left_kernel_vector(&[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).is_none());
    }
}
