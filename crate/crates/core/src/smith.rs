//! Smith normal form of integer matrices.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i128>>;

/// `D = U·M·V` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: Matrix,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    /// Diagonal entries `d_i` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i128> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i]).collect()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("Smith normal form"))
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i128; cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = ck(out[i][j].checked_add(ck(row[k].checked_mul(b[k][j]))?))?;
            }
        }
    }
    Ok(out)
}

struct State {
    m: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl State {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.m.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row i += k · row j
    fn add_row(&mut self, i: usize, j: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for mat in [&mut self.m, &mut self.u] {
            for c in 0..mat[0].len() {
                mat[i][c] = ck(mat[i][c].checked_add(ck(k.checked_mul(mat[j][c]))?))?;
            }
        }
        for row in &mut self.u_inv {
            row[j] = ck(row[j].checked_sub(ck(k.checked_mul(row[i]))?))?;
        }
        Ok(())
    }

    /// col i += k · col j
    fn add_col(&mut self, i: usize, j: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for row in self.m.iter_mut().chain(self.v.iter_mut()) {
            row[i] = ck(row[i].checked_add(ck(k.checked_mul(row[j]))?))?;
        }
        let n = self.v_inv[0].len();
        for c in 0..n {
            self.v_inv[j][c] =
                ck(self.v_inv[j][c].checked_sub(ck(k.checked_mul(self.v_inv[i][c]))?))?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.m[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }
}

/// Computes the Smith normal form and checks `U·M·V = D`, `U·U⁻¹ = I`, `V·V⁻¹ = I`.
pub fn smith_normal_form(m: &Matrix) -> Result<Smith> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let mut s = State {
        m: m.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };
    if rows == 0 || cols == 0 {
        return Ok(Smith {
            d: s.m,
            u: s.u,
            u_inv: s.u_inv,
            v: s.v,
            v_inv: s.v_inv,
        });
    }
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.m[i][j];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < s.m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            let p = s.m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = s.m[i][t].div_euclid(p);
                s.add_row(i, t, -q)?;
                clean &= s.m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = s.m[t][j].div_euclid(p);
                s.add_col(j, t, -q)?;
                clean &= s.m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s.m[i][j] % p != 0));
            match bad {
                Some(i) => s.add_row(t, i, 1)?,
                None => break,
            }
        }
        if s.m[t][t] < 0 {
            s.negate_row(t);
        }
    }
    let smith = Smith {
        d: s.m,
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
    };
    self_check(m, &smith)?;
    Ok(smith)
}

fn self_check(m: &Matrix, s: &Smith) -> Result<()> {
    let fail = |what: &str| {
        Err(Error::InvalidInput(format!(
            "Smith normal form self-check failed: {what}"
        )))
    };
    if mat_mul(&mat_mul(&s.u, m)?, &s.v)? != s.d {
        return fail("U·M·V != D");
    }
    if mat_mul(&s.u, &s.u_inv)? != identity(s.u.len())
        || mat_mul(&s.v, &s.v_inv)? != identity(s.v.len())
    {
        return fail("transform not inverted");
    }
    let diag = s.diagonal();
    for (i, row) in s.d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != 0 {
                return fail("off-diagonal entry");
            }
        }
    }
    for w in diag.windows(2) {
        let ok = if w[0] == 0 {
            w[1] == 0
        } else {
            w[1] % w[0] == 0
        };
        if !ok || w[0] < 0 {
            return fail("divisibility chain");
        }
    }
    Ok(())
}

/// `D ≡ U·M·V (mod N)` with `U`, `V` invertible over `Z/N` and diagonal
/// entries `d_i | N` forming a divisibility chain (`d_i = N` stands for 0).
#[derive(Clone, Debug)]
pub struct SmithMod {
    pub modulus: i128,
    pub d: Matrix,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl SmithMod {
    pub fn diagonal(&self) -> Vec<i128> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n)
            .map(|i| {
                if self.d[i][i] == 0 {
                    self.modulus
                } else {
                    self.d[i][i]
                }
            })
            .collect()
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

fn inverse_mod(a: i128, n: i128) -> i128 {
    let (g, s, _) = ext_gcd(a.rem_euclid(n), n);
    debug_assert_eq!(g, 1);
    s.rem_euclid(n)
}

struct ModState {
    n: i128,
    m: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl ModState {
    fn r(&self, x: i128) -> i128 {
        x.rem_euclid(self.n)
    }

    /// rows (i, j) ← (s·r_i + t·r_j, p·r_i + q·r_j), with s·q − t·p = 1
    fn rows(&mut self, i: usize, j: usize, s: i128, t: i128, p: i128, q: i128) {
        let n = self.n;
        for mat in [&mut self.m, &mut self.u] {
            for c in 0..mat[0].len() {
                let (a, b) = (mat[i][c], mat[j][c]);
                mat[i][c] = (s * a + t * b).rem_euclid(n);
                mat[j][c] = (p * a + q * b).rem_euclid(n);
            }
        }
        for row in &mut self.u_inv {
            let (a, b) = (row[i], row[j]);
            row[i] = (q * a - p * b).rem_euclid(n);
            row[j] = (-t * a + s * b).rem_euclid(n);
        }
    }

    /// cols (i, j) ← (s·c_i + t·c_j, p·c_i + q·c_j), with s·q − t·p = 1
    fn cols(&mut self, i: usize, j: usize, s: i128, t: i128, p: i128, q: i128) {
        let n = self.n;
        for row in self.m.iter_mut().chain(self.v.iter_mut()) {
            let (a, b) = (row[i], row[j]);
            row[i] = (s * a + t * b).rem_euclid(n);
            row[j] = (p * a + q * b).rem_euclid(n);
        }
        for c in 0..self.v_inv[0].len() {
            let (a, b) = (self.v_inv[i][c], self.v_inv[j][c]);
            self.v_inv[i][c] = (q * a - p * b).rem_euclid(n);
            self.v_inv[j][c] = (-t * a + s * b).rem_euclid(n);
        }
    }

    fn scale_row(&mut self, i: usize, unit: i128) {
        let inv = inverse_mod(unit, self.n);
        for c in 0..self.m[0].len() {
            self.m[i][c] = self.r(self.m[i][c] * unit);
        }
        for c in 0..self.u[0].len() {
            self.u[i][c] = self.r(self.u[i][c] * unit);
        }
        for row in 0..self.u_inv.len() {
            self.u_inv[row][i] = self.r(self.u_inv[row][i] * inv);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.rows(i, j, 0, 1, -1, 0);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            self.cols(i, j, 0, 1, -1, 0);
        }
    }

    /// Scales row `t` so that the pivot becomes `gcd(pivot, N)`.
    fn normalize(&mut self, t: usize) {
        let a = self.m[t][t];
        let g = gcd(a, self.n);
        let (a1, n1) = (a / g, self.n / g);
        let mut unit = a1;
        while gcd(unit, self.n) != 1 {
            unit += n1;
        }
        self.scale_row(t, inverse_mod(unit, self.n));
    }
}

/// Smith normal form over `Z/N`, with the same self-checks as the integer version.
pub fn smith_normal_form_mod(m: &Matrix, modulus: i128) -> Result<SmithMod> {
    if modulus < 1 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let reduced: Matrix = m
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(modulus)).collect())
        .collect();
    let mut s = ModState {
        n: modulus,
        m: reduced.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };
    if modulus == 1 {
        for mat in [&mut s.u, &mut s.u_inv, &mut s.v, &mut s.v_inv] {
            for row in mat.iter_mut() {
                row.iter_mut().for_each(|x| *x = 0);
            }
        }
    }
    for t in 0..rows.min(cols) {
        if modulus == 1 {
            break;
        }
        'pivot: loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.m[i][j];
                    if x != 0 {
                        let g = gcd(x, modulus);
                        if best.is_none_or(|(_, _, bg)| g < bg) {
                            best = Some((i, j, g));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            s.normalize(t);
            let g = s.m[t][t];
            for i in t + 1..rows {
                let b = s.m[i][t];
                if b == 0 {
                    continue;
                }
                if b % g == 0 {
                    s.rows(t, i, 1, 0, -(b / g), 1);
                } else {
                    let (h, x, y) = ext_gcd(g, b);
                    s.rows(t, i, x, y, -(b / h), g / h);
                    continue 'pivot;
                }
            }
            for j in t + 1..cols {
                let b = s.m[t][j];
                if b == 0 {
                    continue;
                }
                if b % g == 0 {
                    s.cols(t, j, 1, 0, -(b / g), 1);
                } else {
                    let (h, x, y) = ext_gcd(g, b);
                    s.cols(t, j, x, y, -(b / h), g / h);
                    continue 'pivot;
                }
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s.m[i][j] % g != 0));
            match bad {
                Some(i) => s.rows(t, i, 1, 1, 0, 1),
                None => break,
            }
        }
    }
    let out = SmithMod {
        modulus,
        d: s.m,
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
    };
    self_check_mod(&reduced, &out)?;
    Ok(out)
}

fn mat_mul_mod(a: &Matrix, b: &Matrix, n: i128) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i128; cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            let x = row[k];
            if x == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = (out[i][j] + x * b[k][j]) % n;
            }
        }
    }
    out
}

fn self_check_mod(m: &Matrix, s: &SmithMod) -> Result<()> {
    let n = s.modulus;
    let fail = |what: &str| {
        Err(Error::InvalidInput(format!(
            "modular Smith normal form self-check failed: {what}"
        )))
    };
    if n == 1 {
        return Ok(());
    }
    if mat_mul_mod(&mat_mul_mod(&s.u, m, n), &s.v, n) != s.d {
        return fail("U·M·V != D");
    }
    if mat_mul_mod(&s.u, &s.u_inv, n) != identity(s.u.len())
        || mat_mul_mod(&s.v, &s.v_inv, n) != identity(s.v.len())
    {
        return fail("transform not inverted");
    }
    for (i, row) in s.d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != 0 {
                return fail("off-diagonal entry");
            }
        }
    }
    let diag = s.diagonal();
    if diag.iter().any(|&d| n % d != 0) || diag.windows(2).any(|w| w[1] % w[0] != 0) {
        return fail("divisibility chain");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let s =
            smith_normal_form(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
        let s = smith_normal_form(&vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(s.diagonal(), vec![1, 6]);
        let s = smith_normal_form(&vec![vec![0, 0, 0]]).unwrap();
        assert_eq!(s.diagonal(), vec![0]);
    }

    #[test]
    fn random_matrices_pass_self_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let m: Matrix = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-9..10)).collect())
                .collect();
            let s = smith_normal_form(&m).unwrap();
            // determinantal divisor d₁ = gcd of all entries
            let g = m.iter().flatten().fold(0i128, |a, &b| gcd(a, b));
            assert_eq!(s.diagonal()[0], g);
        }
    }

    #[test]
    fn modular_examples() {
        // Z/12 modulo the columns [4, 6]: cokernel Z/2
        let s = smith_normal_form_mod(&vec![vec![4, 6]], 12).unwrap();
        assert_eq!(s.diagonal(), vec![2]);
        let s = smith_normal_form_mod(&vec![vec![0, 0], vec![0, 3]], 6).unwrap();
        assert_eq!(s.diagonal(), vec![3, 6]);
    }

    #[test]
    fn modular_agrees_with_integer_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..40);
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..6);
            let m: Matrix = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-50..50)).collect())
                .collect();
            let modular = smith_normal_form_mod(&m, n).unwrap().diagonal();
            let integer = smith_normal_form(&m).unwrap().diagonal();
            let expected: Vec<i128> = integer.iter().map(|&d| gcd(d, n)).collect();
            assert_eq!(modular, expected);
        }
    }
}
