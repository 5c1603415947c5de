//! Smith normal form over the integers with unimodular transforms.

pub type IntMatrix = Vec<Vec<i128>>;

/// `diag = U * A * V` with `U`, `V` unimodular and the diagonal entries
/// `d_1 | d_2 | ...` non-negative. `v_inv` is the inverse of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x += c * y;
            }
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row[i] += c * row[j];
            }
        }
        let src = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(src) {
            *x -= c * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -*x;
            }
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut w = Work {
        a: a.clone(),
        u: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = w.a[i][j];
                    if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let p = w.a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a[i][t].div_euclid(p);
                if q != 0 {
                    w.add_row(i, t, -q);
                }
                if w.a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = w.a[t][j].div_euclid(p);
                if q != 0 {
                    w.add_col(j, t, -q);
                }
                if w.a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| w.a[i][j] % p != 0);
            match bad {
                Some((i, _)) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
    }
    let diagonal = (0..n).map(|i| w.a[i][i]).collect();
    SmithForm {
        diagonal,
        u: w.u,
        v: w.v,
        v_inv: w.v_inv,
        rows,
        cols,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: IntMatrix, expected: &[i128]) {
        let f = smith_normal_form(&a);
        assert_eq!(f.diagonal, expected);
        let d = mat_mul(&mat_mul(&f.u, &a), &f.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { f.diagonal[i] } else { 0 };
                assert_eq!(x, want, "entry ({i},{j})");
            }
        }
        let id = mat_mul(&f.v, &f.v_inv);
        assert_eq!(id, identity(f.cols));
    }

    #[test]
    fn small_cases() {
        check(vec![vec![2, 0], vec![0, 4]], &[2, 4]);
        check(vec![vec![1]], &[1]);
        check(vec![vec![4, 2], vec![2, 4]], &[2, 6]);
        check(vec![vec![6, 0], vec![0, 4]], &[2, 12]);
        check(vec![vec![0, 0], vec![0, 0]], &[0, 0]);
        check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], &[2, 6, 12]);
    }

    #[test]
    fn empty_matrix() {
        let f = smith_normal_form(&Vec::new());
        assert!(f.diagonal.is_empty());
    }
}
