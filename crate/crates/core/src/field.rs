//! Finite field towers `F_(p^dn) / F_(p^d)` with table arithmetic, matrices
//! over the top field, and linear algebra over the prime field.
//!
//! An element of `K = F_p[x]/(f)` is encoded as the integer `Σ a_i p^i`
//! for the residue `Σ a_i x^i`. The modulus `f` is the monic irreducible of
//! degree `dn` whose lower coefficients, read as such an integer, are least.

use std::sync::Arc;

use crate::error::{size_check, Error, Result};
use crate::limits::limits;

pub type Elem = u32;

#[derive(Debug)]
struct TowerData {
    p: u64,
    d: usize,
    n: usize,
    size: usize,
    modulus: Vec<u64>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    frob: Vec<Elem>,
    digits: usize,
}

/// `K = F_(p^(dn))` over `k = F_(p^d)` with `Gal(K/k)` generated by `x ↦ x^(p^d)`.
#[derive(Clone, Debug)]
pub struct FqTower(Arc<TowerData>);

impl PartialEq for FqTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p, self.0.d, self.0.n) == (other.0.p, other.0.d, other.0.n)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for i in 0..=dm {
            let idx = top - dm + i;
            r[idx] = (r[idx] + (p - c) * m[i]) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn x_pow_p_k(k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u64];
        let mut base = r.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        r = acc;
    }
    r
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree `N`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let xq = x_pow_p_k(deg, f, p);
    let mut diff = xq.clone();
    diff.resize(diff.len().max(2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for r in prime_factors(deg) {
        let mut h = x_pow_p_k(deg / r, f, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        poly_trim(&mut h);
        if poly_gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The least monic irreducible of degree `deg` over `F_p`.
pub fn least_irreducible(p: u64, deg: usize) -> Result<Vec<u64>> {
    let count = p.checked_pow(deg as u32).ok_or(Error::NoIrreducible(deg))?;
    for code in 0..count {
        let mut f = Vec::with_capacity(deg + 1);
        let mut c = code;
        for _ in 0..deg {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    Err(Error::NoIrreducible(deg))
}

impl FqTower {
    /// `K = F_(p^(dn))`, `k = F_(p^d)`.
    pub fn new(p: u64, d: usize, n: usize) -> Result<FqTower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 || n == 0 {
            return Err(Error::InvalidInput("degrees must be positive".into()));
        }
        let deg = d * n;
        let size = (p as u128).checked_pow(deg as u32).unwrap_or(u128::MAX);
        size_check("field size", size, limits().max_field as u128)?;
        let size = size as usize;
        let modulus = least_irreducible(p, deg)?;
        let digits = deg;
        // multiplication by a polynomial g on encoded residues, used to find a primitive element
        let mul_poly = |a: Elem, g: &[u64]| -> Elem {
            let mut av = Vec::with_capacity(digits);
            let mut x = a as u64;
            for _ in 0..digits {
                av.push(x % p);
                x /= p;
            }
            poly_trim(&mut av);
            let prod = poly_mulmod(&av, g, &modulus, p);
            prod.iter().rev().fold(0u64, |acc, &c| acc * p + c) as Elem
        };
        let mut exp = Vec::with_capacity(size - 1);
        let mut found = false;
        for cand in 2..size as u64 {
            let mut g = Vec::new();
            let mut c = cand;
            while c > 0 {
                g.push(c % p);
                c /= p;
            }
            exp.clear();
            let mut x: Elem = 1;
            loop {
                exp.push(x);
                x = mul_poly(x, &g);
                if x == 1 || exp.len() >= size {
                    break;
                }
            }
            if exp.len() == size - 1 && x == 1 {
                found = true;
                break;
            }
        }
        if size == 2 {
            exp = vec![1];
            found = true;
        }
        if !found {
            return Err(Error::NoIrreducible(deg));
        }
        let mut log = vec![u32::MAX; size];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut data = TowerData {
            p,
            d,
            n,
            size,
            modulus,
            exp,
            log,
            frob: Vec::new(),
            digits,
        };
        let q_small = (p as u128).pow(d as u32);
        let order = (size - 1) as u128;
        data.frob = (0..size)
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    let l = (data.log[x] as u128 * q_small) % order;
                    data.exp[l as usize]
                }
            })
            .collect();
        let tower = FqTower(Arc::new(data));
        tower.self_check()?;
        Ok(tower)
    }

    fn self_check(&self) -> Result<()> {
        let fixed = self.elements().filter(|&x| self.frob(x) == x).count();
        if fixed as u128 != (self.0.p as u128).pow(self.0.d as u32) {
            return Err(Error::DimensionFailure {
                expected: self.base_size(),
                found: fixed,
            });
        }
        let mut x = self.primitive();
        for i in 1..=self.0.n {
            x = self.frob(x);
            if (x == self.primitive()) != (i == self.0.n) {
                return Err(Error::InvalidInput("Frobenius has the wrong order".into()));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn d(&self) -> usize {
        self.0.d
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    /// `|K|`.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// `|k|`.
    pub fn base_size(&self) -> usize {
        (self.0.p as usize).pow(self.0.d as u32)
    }

    /// Degree of `K` over `F_p`.
    pub fn degree(&self) -> usize {
        self.0.digits
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.size as Elem
    }

    pub fn base_elements(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.frob(x) == x).collect()
    }

    pub fn primitive(&self) -> Elem {
        self.0.exp[1 % self.0.exp.len()]
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn digits(&self, x: Elem) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.0.digits);
        let mut x = x as u64;
        for _ in 0..self.0.digits {
            v.push(x % self.0.p);
            x /= self.0.p;
        }
        v
    }

    pub fn from_digits(&self, v: &[u64]) -> Elem {
        v.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.0.p + c % self.0.p) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p as u32;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p as u32;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.exp.len() as u32;
        let l = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[(l % n) as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.0.exp.len() as u32;
        Some(self.0.exp[((n - self.0.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.0.exp.len() as u128;
        self.0.exp[((self.0.log[a as usize] as u128 * e as u128) % n) as usize]
    }

    /// Discrete logarithm to the fixed primitive element.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    pub fn exp(&self, i: u64) -> Elem {
        self.0.exp[(i % self.0.exp.len() as u64) as usize]
    }

    /// `x ↦ x^(p^d)`.
    pub fn frob(&self, a: Elem) -> Elem {
        self.0.frob[a as usize]
    }

    /// `φ^i(x)`.
    pub fn frob_pow(&self, a: Elem, i: usize) -> Elem {
        let mut x = a;
        for _ in 0..i % self.0.n {
            x = self.frob(x);
        }
        x
    }

    pub fn is_base(&self, a: Elem) -> bool {
        self.frob(a) == a
    }

    /// `N_(K/k)(x) = x·x^φ⋯x^(φ^(n−1))`.
    pub fn norm(&self, a: Elem) -> Elem {
        let mut acc = 1;
        let mut x = a;
        for _ in 0..self.0.n {
            acc = self.mul(acc, x);
            x = self.frob(x);
        }
        acc
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.0.p == 2 || self.0.log[a as usize] % 2 == 0
    }

    /// Whether an element of `k` is a square in `k` (not merely in `K`).
    pub fn is_base_square(&self, a: Elem) -> bool {
        a == 0 || self.base_elements().iter().any(|&x| self.mul(x, x) == a)
    }
}

/// A square matrix over `K`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub m: usize,
    pub e: Vec<Elem>,
}

impl Mat {
    pub fn identity(m: usize) -> Mat {
        let mut e = vec![0; m * m];
        for i in 0..m {
            e[i * m + i] = 1;
        }
        Mat { m, e }
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.m + j]
    }

    pub fn mul(&self, f: &FqTower, other: &Mat) -> Mat {
        let m = self.m;
        let mut e = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0;
                for k in 0..m {
                    acc = f.add(acc, f.mul(self.e[i * m + k], other.e[k * m + j]));
                }
                e[i * m + j] = acc;
            }
        }
        Mat { m, e }
    }

    pub fn apply(&self, f: &FqTower, v: &[Elem]) -> Vec<Elem> {
        (0..self.m)
            .map(|i| (0..self.m).fold(0, |acc, k| f.add(acc, f.mul(self.e[i * self.m + k], v[k]))))
            .collect()
    }

    /// Entrywise `φ^i`.
    pub fn frob(&self, f: &FqTower, i: usize) -> Mat {
        Mat {
            m: self.m,
            e: self.e.iter().map(|&x| f.frob_pow(x, i)).collect(),
        }
    }

    pub fn det(&self, f: &FqTower) -> Elem {
        let m = self.m;
        let mut a = self.e.clone();
        let mut det = 1;
        for c in 0..m {
            let Some(piv) = (c..m).find(|&r| a[r * m + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..m {
                    a.swap(piv * m + j, c * m + j);
                }
                det = f.neg(det);
            }
            let pv = a[c * m + c];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for r in c + 1..m {
                let factor = f.mul(a[r * m + c], pinv);
                if factor == 0 {
                    continue;
                }
                for j in c..m {
                    a[r * m + j] = f.sub(a[r * m + j], f.mul(factor, a[c * m + j]));
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FqTower) -> Option<Mat> {
        let m = self.m;
        let mut a = self.e.clone();
        let mut b = Mat::identity(m).e;
        for c in 0..m {
            let piv = (c..m).find(|&r| a[r * m + c] != 0)?;
            for j in 0..m {
                a.swap(piv * m + j, c * m + j);
                b.swap(piv * m + j, c * m + j);
            }
            let pinv = f.inv(a[c * m + c]).expect("nonzero pivot");
            for j in 0..m {
                a[c * m + j] = f.mul(a[c * m + j], pinv);
                b[c * m + j] = f.mul(b[c * m + j], pinv);
            }
            for r in 0..m {
                if r == c || a[r * m + c] == 0 {
                    continue;
                }
                let factor = a[r * m + c];
                for j in 0..m {
                    a[r * m + j] = f.sub(a[r * m + j], f.mul(factor, a[c * m + j]));
                    b[r * m + j] = f.sub(b[r * m + j], f.mul(factor, b[c * m + j]));
                }
            }
        }
        Some(Mat { m, e: b })
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.m)
    }

    pub fn is_over_base(&self, f: &FqTower) -> bool {
        self.e.iter().all(|&x| f.is_base(x))
    }
}

/// All `m×m` matrices with entries from `entries` (row-major odometer order).
pub fn all_matrices(entries: &[Elem], m: usize) -> Result<impl Iterator<Item = Mat> + '_> {
    let total = (entries.len() as u128)
        .checked_pow((m * m) as u32)
        .unwrap_or(u128::MAX);
    size_check("matrix enumeration", total, limits().max_enumeration)?;
    let q = entries.len();
    Ok((0..total as usize).map(move |mut code| {
        let mut e = vec![0; m * m];
        for slot in e.iter_mut().rev() {
            *slot = entries[code % q];
            code /= q;
        }
        Mat { m, e }
    }))
}

/// `GL_m` over the given entry set (which must be a field inside `K`).
pub fn general_linear(f: &FqTower, entries: &[Elem], m: usize) -> Result<Vec<Mat>> {
    Ok(all_matrices(entries, m)?
        .filter(|a| a.det(f) != 0)
        .collect())
}

/// Basis of the kernel of a matrix over `F_p` (rows are equations).
pub fn fp_kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod_p(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let factor = a[i][c];
                for j in 0..ncols {
                    a[i][j] = (a[i][j] + (p - factor) * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][fc]) % p;
            }
            v
        })
        .collect()
}

/// Rank over `K` of a list of vectors in `K^m`.
pub fn k_rank(f: &FqTower, vectors: &[Vec<Elem>]) -> usize {
    let mut rows: Vec<Vec<Elem>> = vectors.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][c]).expect("nonzero");
        let pivot_row: Vec<Elem> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for i in rank + 1..rows.len() {
            let factor = rows[i][c];
            if factor != 0 {
                for j in 0..ncols {
                    rows[i][j] = f.sub(rows[i][j], f.mul(factor, pivot_row[j]));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_towers() {
        let f4 = FqTower::new(2, 1, 2).unwrap();
        assert_eq!(f4.size(), 4);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.base_elements(), vec![0, 1]);
        let f9 = FqTower::new(3, 1, 2).unwrap();
        assert_eq!(f9.base_elements().len(), 3);
        for x in f9.elements() {
            assert_eq!(f9.frob(x), f9.pow(x, 3));
        }
        let f8 = FqTower::new(2, 1, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        assert!(matches!(FqTower::new(4, 1, 2), Err(Error::NotPrime(4))));
        let f16 = FqTower::new(2, 2, 2).unwrap();
        assert_eq!(f16.base_elements().len(), 4);
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, d, n) in [
            (2, 1, 2),
            (3, 1, 2),
            (5, 1, 2),
            (2, 1, 3),
            (3, 2, 2),
            (7, 1, 2),
        ] {
            let f = FqTower::new(p, d, n).unwrap();
            for _ in 0..500 {
                let (a, b, c) = (
                    rng.gen_range(0..f.size() as u32),
                    rng.gen_range(0..f.size() as u32),
                    rng.gen_range(0..f.size() as u32),
                );
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.frob(f.mul(a, b)), f.mul(f.frob(a), f.frob(b)));
                assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn matrix_self_test() {
        let f = FqTower::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let a = Mat {
                m: 2,
                e: (0..4).map(|_| rng.gen_range(0..9)).collect(),
            };
            let b = Mat {
                m: 2,
                e: (0..4).map(|_| rng.gen_range(0..9)).collect(),
            };
            assert_eq!(a.mul(&f, &b).det(&f), f.mul(a.det(&f), b.det(&f)));
            if let Some(ai) = a.inverse(&f) {
                assert!(a.mul(&f, &ai).is_identity());
            } else {
                assert_eq!(a.det(&f), 0);
            }
        }
        let gl = general_linear(&f, &f.elements().collect::<Vec<_>>(), 2).unwrap();
        assert_eq!(gl.len(), 5760);
    }

    #[test]
    fn prime_field_kernel() {
        // x + y + z = 0 over F_2
        let k = fp_kernel(&[vec![1, 1, 1]], 3, 2);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(v.iter().sum::<u64>() % 2, 0);
        }
    }
}
