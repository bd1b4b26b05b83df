use super::Field;

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
///
/// Pivot choice is deterministic: columns left to right, and within a column
/// the first row (from the current one down) holding a nonzero entry.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = F::one() / m[row][col].clone();
        for c in col..ncols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                let t = m[row][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row.max(pivots.len()));
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>], ncols: usize) -> usize {
    let mut m = m.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the right kernel `{v : M v = 0}` of an `nrows x ncols` matrix.
///
/// The basis is returned in canonical form: the vectors, stacked as rows,
/// are in reduced row echelon form, so each starts with a leading 1 and the
/// leading positions ascend.
pub fn nullspace<F: Field>(m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    rref(&mut basis, ncols);
    basis
}
