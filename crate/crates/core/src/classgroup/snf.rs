//! Smith normal form of small integer relation matrices.

/// Diagonal of the Smith form (each entry divides the next) together with
/// the inverse of the column transform: if `R V = U^-1 D`, `v_inv = V^-1`.
/// Row `j` of `v_inv` expresses the `j`-th new generator in the old ones.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub v_inv: Vec<Vec<i128>>,
    #[cfg(test)]
    pub v: Vec<Vec<i128>>,
}

/// Reduce the relation matrix `rows` (each row a relation, `cols` columns).
pub fn smith_normal_form(mut m: Vec<Vec<i128>>, cols: usize) -> SmithForm {
    let rows = m.len();
    let mut v_inv: Vec<Vec<i128>> = identity(cols);
    #[cfg(test)]
    let mut v: Vec<Vec<i128>> = identity(cols);

    // column operations, mirrored on V (columns) and V^-1 (rows)
    macro_rules! swap_cols {
        ($i:expr, $j:expr) => {{
            let (i, j) = ($i, $j);
            if i != j {
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
                v_inv.swap(i, j);
                #[cfg(test)]
                for row in v.iter_mut() {
                    row.swap(i, j);
                }
            }
        }};
    }
    // col_i += k * col_j
    macro_rules! add_col {
        ($i:expr, $j:expr, $k:expr) => {{
            let (i, j, k): (usize, usize, i128) = ($i, $j, $k);
            for row in m.iter_mut() {
                row[i] += k * row[j];
            }
            let src = v_inv[i].clone();
            for (dst, s) in v_inv[j].iter_mut().zip(src) {
                *dst -= k * s;
            }
            #[cfg(test)]
            for row in v.iter_mut() {
                row[i] += k * row[j];
            }
        }};
    }

    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && pivot.is_none_or(|(pi, pj)| x.abs() < m[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap(t, pi);
            swap_cols!(t, pj);

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    let pivot_row = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row) {
                        *x -= q * y;
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    add_col!(j, t, -q);
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let offender = (t + 1..rows).find(|&i| m[i][t + 1..].iter().any(|&x| x % p != 0));
            match offender {
                Some(i) => {
                    let src = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
        }
    }

    let diagonal = (0..cols)
        .map(|i| if i < rows { m[i][i] } else { 0 })
        .collect();
    SmithForm {
        diagonal,
        v_inv,
        #[cfg(test)]
        v,
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}
