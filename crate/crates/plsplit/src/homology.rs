//! Small exact integer linear algebra: column echelon forms, Smith normal
//! form, kernels, and first-homology coordinates of cell complexes. Sizes
//! here are a few hundred at most, so plain i128 with overflow checks is
//! enough.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinAlgError {
    #[error("integer overflow in exact linear algebra")]
    Overflow,
    #[error("vector is not a cycle")]
    NotACycle,
}

pub type Mat = Vec<Vec<i128>>;

fn checked_addmul(a: i128, b: i128, c: i128) -> Result<i128, LinAlgError> {
    b.checked_mul(c)
        .and_then(|x| a.checked_add(x))
        .ok_or(LinAlgError::Overflow)
}

/// rows x cols zero matrix.
pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![0; cols]; rows]
}

pub fn mat_vec(m: &Mat, v: &[i128]) -> Result<Vec<i128>, LinAlgError> {
    let mut out = vec![0i128; m.len()];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 && v[j] != 0 {
                out[i] = checked_addmul(out[i], x, v[j])?;
            }
        }
    }
    Ok(out)
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(m: &Mat) -> Result<usize, LinAlgError> {
    let mut a = m.clone();
    let rows = a.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = a[0].len();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| a[i][c] != 0);
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        for i in (r + 1)..rows {
            if a[i][c] == 0 {
                continue;
            }
            let (num, den) = (a[i][c], a[r][c]);
            let g = gcd(num, den);
            let (num, den) = (num / g, den / g);
            for j in 0..cols {
                let scaled = a[i][j].checked_mul(den).ok_or(LinAlgError::Overflow)?;
                let sub = a[r][j].checked_mul(num).ok_or(LinAlgError::Overflow)?;
                a[i][j] = scaled.checked_sub(sub).ok_or(LinAlgError::Overflow)?;
            }
            // Keep entries small.
            let mut g2 = 0i128;
            for j in 0..cols {
                g2 = gcd(g2, a[i][j]);
            }
            if g2 > 1 {
                for j in 0..cols {
                    a[i][j] /= g2;
                }
            }
        }
        r += 1;
    }
    Ok(r)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer kernel basis of `m` (columns of the result span ker over Z).
///
/// Column reduction: tracks a unimodular V with M V = H; kernel columns are
/// those of V where H is zero.
pub fn kernel_basis(m: &Mat) -> Result<Vec<Vec<i128>>, LinAlgError> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    if cols == 0 {
        return Ok(Vec::new());
    }
    let mut h = if rows == 0 { zeros(1, cols) } else { m.clone() };
    let hrows = h.len();
    let mut v: Mat = (0..cols)
        .map(|j| {
            let mut col = vec![0i128; cols];
            col[j] = 1;
            col
        })
        .collect();
    // v is stored column-major: v[j] is the j-th column.
    let mut lead = 0usize;
    for r in 0..hrows {
        if lead == cols {
            break;
        }
        loop {
            // Euclidean column reduction on row r, columns lead..
            let mut nonzero: Vec<usize> = (lead..cols).filter(|&j| h[r][j] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let j = nonzero[0];
                h_col_swap(&mut h, &mut v, lead, j);
                lead += 1;
                break;
            }
            // Pick the column with the smallest nonzero |entry| and reduce
            // the others by it.
            nonzero.sort_by_key(|&j| h[r][j].abs());
            let jmin = nonzero[0];
            for &j in &nonzero[1..] {
                let q = h[r][j] / h[r][jmin];
                if q != 0 {
                    for i in 0..hrows {
                        let sub = h[i][jmin].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        h[i][j] = h[i][j].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                    for i in 0..cols {
                        let sub = v[jmin][i].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        v[j][i] = v[j][i].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                }
            }
        }
    }
    let mut kernel = Vec::new();
    for j in 0..cols {
        if h.iter().all(|row| row[j] == 0) {
            kernel.push(v[j].clone());
        }
    }
    Ok(kernel)
}

fn h_col_swap(h: &mut Mat, v: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    v.swap(a, b);
}

/// Smith normal form: returns (p, d, q_unused_len) where p * m * q = diag(d),
/// with p unimodular of size rows x rows. Only p and the diagonal are
/// returned; q is not needed by callers here.
pub fn smith_p_and_diag(m: &Mat) -> Result<(Mat, Vec<i128>), LinAlgError> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut p: Mat = (0..rows)
        .map(|i| {
            let mut row = vec![0i128; rows];
            row[i] = 1;
            row
        })
        .collect();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // Find a pivot.
        let mut pivot: Option<(usize, usize)> = None;
        let mut best = i128::MAX;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && a[i][j].abs() < best {
                    best = a[i][j].abs();
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        p.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            // Clear column t.
            for i in (t + 1)..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    for j in 0..cols {
                        let sub = a[t][j].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        a[i][j] = a[i][j].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                    for j in 0..rows {
                        let sub = p[t][j].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        p[i][j] = p[i][j].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        p.swap(t, i);
                        clean = false;
                    }
                }
            }
            // Clear row t.
            for j in (t + 1)..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    for i in 0..rows {
                        let sub = a[i][t].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        a[i][j] = a[i][j].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..rows.min(cols)).map(|i| a[i][i].abs()).collect();
    Ok((p, diag))
}

/// First homology coordinates of a 2-complex, specified by its boundary
/// maps. Returns a `CycleClasses` that maps integer 1-cycles to coordinates
/// in H1 = Z^betti (+ torsion, reported separately).
pub struct CycleClasses {
    /// Kernel lattice basis of d1 (columns, each of length n_edges).
    kernel: Vec<Vec<i128>>,
    /// Unimodular p with p * (d2 in kernel coords) = smith.
    p: Mat,
    diag: Vec<i128>,
    pub betti: usize,
    pub torsion: Vec<i128>,
}

impl CycleClasses {
    /// d1: vertices x edges boundary; d2: edges x faces boundary.
    pub fn new(d1: &Mat, d2: &Mat) -> Result<CycleClasses, LinAlgError> {
        let kernel = kernel_basis(d1)?;
        let k = kernel.len();
        let n_faces = if d2.is_empty() { 0 } else { d2[0].len() };
        // Express each face boundary in kernel coordinates.
        let mut b = zeros(k, n_faces);
        for j in 0..n_faces {
            let col: Vec<i128> = d2.iter().map(|row| row[j]).collect();
            let coords = solve_in_lattice(&kernel, &col)?;
            for i in 0..k {
                b[i][j] = coords[i];
            }
        }
        let (p, diag) = smith_p_and_diag(&b)?;
        let rankb = diag.iter().filter(|&&d| d != 0).count();
        let betti = k - rankb;
        let torsion = diag
            .iter()
            .copied()
            .filter(|&d| d > 1)
            .collect();
        Ok(CycleClasses { kernel, p, diag, betti, torsion })
    }

    /// Coordinates of a cycle in the free part of H1 (length = betti).
    pub fn class_of(&self, cycle: &[i128]) -> Result<Vec<i128>, LinAlgError> {
        let y = solve_in_lattice(&self.kernel, cycle)?;
        let py = mat_vec(&self.p, &y)?;
        // Rows with zero diagonal are the free coordinates.
        let mut out = Vec::with_capacity(self.betti);
        for (i, v) in py.iter().enumerate() {
            let d = self.diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                out.push(*v);
            }
        }
        Ok(out)
    }
}

/// Solves `basis * x = target` where basis columns form a lattice basis and
/// the target lies in the lattice.
fn solve_in_lattice(basis: &[Vec<i128>], target: &[i128]) -> Result<Vec<i128>, LinAlgError> {
    let k = basis.len();
    if k == 0 {
        return if target.iter().all(|&x| x == 0) {
            Ok(Vec::new())
        } else {
            Err(LinAlgError::NotACycle)
        };
    }
    let n = basis[0].len();
    // Gaussian elimination with rational-free bookkeeping over an augmented
    // integer system; sizes are small, use i128 rationals via scaling.
    // Approach: reduce [basis | target] by integer row ops to echelon.
    let mut a = zeros(n, k + 1);
    for (j, col) in basis.iter().enumerate() {
        for i in 0..n {
            a[i][j] = col[i];
        }
    }
    for i in 0..n {
        a[i][k] = target[i];
    }
    let mut row = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..k {
        // Euclidean row reduction within column.
        loop {
            let mut nz: Vec<usize> = (row..n).filter(|&i| a[i][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            if nz.len() == 1 {
                a.swap(row, nz[0]);
                break;
            }
            nz.sort_by_key(|&i| a[i][col].abs());
            let imin = nz[0];
            for &i in &nz[1..] {
                let q = a[i][col] / a[imin][col];
                if q != 0 {
                    for j in 0..=k {
                        let sub = a[imin][j].checked_mul(q).ok_or(LinAlgError::Overflow)?;
                        a[i][j] = a[i][j].checked_sub(sub).ok_or(LinAlgError::Overflow)?;
                    }
                }
            }
        }
        if a[row][col] != 0 {
            pivots.push((row, col));
            row += 1;
            if row == n {
                break;
            }
        }
    }
    // Back substitution.
    let mut x = vec![0i128; k];
    for &(r, c) in pivots.iter().rev() {
        let mut rhs = a[r][k];
        for j in (c + 1)..k {
            if a[r][j] != 0 && x[j] != 0 {
                let sub = a[r][j].checked_mul(x[j]).ok_or(LinAlgError::Overflow)?;
                rhs = rhs.checked_sub(sub).ok_or(LinAlgError::Overflow)?;
            }
        }
        if rhs % a[r][c] != 0 {
            return Err(LinAlgError::NotACycle);
        }
        x[c] = rhs / a[r][c];
    }
    // Verify (also catches inconsistent rows below the pivots).
    for i in 0..n {
        let mut acc = 0i128;
        for j in 0..k {
            acc = checked_addmul(acc, basis[j][i], x[j])?;
        }
        if acc != target[i] {
            return Err(LinAlgError::NotACycle);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(&m).unwrap(), 2);
        assert_eq!(rank(&zeros(3, 3)).unwrap(), 0);
    }

    #[test]
    fn kernel_of_sum_map() {
        // x + y + z = 0 over Z: kernel rank 2.
        let m = vec![vec![1, 1, 1]];
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i128>(), 0);
        }
    }

    #[test]
    fn torus_graph_homology() {
        // One vertex, two loop edges, one square face with boundary
        // a b a^-1 b^-1: H1 = Z^2.
        let d1 = vec![vec![0i128, 0]];
        let d2 = vec![vec![0i128], vec![0]];
        let cc = CycleClasses::new(&d1, &d2).unwrap();
        assert_eq!(cc.betti, 2);
        assert!(cc.torsion.is_empty());
        let a = cc.class_of(&[1, 0]).unwrap();
        let b = cc.class_of(&[0, 1]).unwrap();
        assert_ne!(a, b);
        let z = cc.class_of(&[2, 3]).unwrap();
        assert_eq!(z[0], 2 * a[0] + 3 * b[0]);
        assert_eq!(z[1], 2 * a[1] + 3 * b[1]);
    }

    #[test]
    fn rp2_has_torsion() {
        // One vertex, one edge a, one face with boundary a^2.
        let d1 = vec![vec![0i128]];
        let d2 = vec![vec![2i128]];
        let cc = CycleClasses::new(&d1, &d2).unwrap();
        assert_eq!(cc.betti, 0);
        assert_eq!(cc.torsion, vec![2]);
    }
}
