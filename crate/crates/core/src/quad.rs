//! Imaginary quadratic fields `K = Q(√−d)`, their ideals, and
//! `H^1(Γ, U_K) ≅ P_K^Γ/α(P_Q)` for `Γ = Gal(K/Q)`.
//!
//! Elements of `O_K = Z[ω]` are pairs `(x, y)` for `x + yω`, with
//! `ω² = tω − n`: `ω = √−d` (`t = 0`, `n = d`) unless `d ≡ 3 mod 4`, when
//! `ω = (1 + √−d)/2` (`t = 1`, `n = (1 + d)/4`).
//!
//! Computing the quotient. A `Γ`-invariant ideal has equal exponents at
//! the primes over each rational prime `p`, so it is `∏_p (∏_(𝔓|p) 𝔓)^β(p)`.
//! For unramified `p` the inner product is `(p)`; for ramified `p` it is
//! `𝔓_p` with `𝔓_p² = (p)`. Since `Z` is a principal ideal domain,
//! `α(P_Q)` is the group of all ideals `(r)`, `r ∈ Q^*`. Hence an invariant
//! ideal is congruent modulo `α(P_Q)` to `∏_(p∈S) 𝔓_p` for the set `S` of
//! ramified `p` with `β(p)` odd, and it is principal exactly when that
//! product is. The quotient is the subgroup of `(Z/2)^#ramified` formed by
//! the sets `S` whose product is principal.

use std::collections::HashMap;

use crate::cohomology::{GammaGroup, H1Set};
use crate::error::{size_check, Error, Result};
use crate::group::{cyclic_group, FiniteGroup};
use crate::limits::limits;

/// `x + yω`.
pub type QuadElem = (i128, i128);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadRing {
    d: u64,
    t: i128,
    n: i128,
}

pub fn is_squarefree(d: u64) -> bool {
    d >= 1 && (2..).take_while(|k| k * k <= d).all(|k| d % (k * k) != 0)
}

impl QuadRing {
    pub fn new(d: u64) -> Result<QuadRing> {
        if d == 0 || !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        size_check("d", d as u128, limits().max_ring_d as u128)?;
        let (t, n) = if d % 4 == 3 {
            (1, (1 + d as i128) / 4)
        } else {
            (0, d as i128)
        };
        Ok(QuadRing { d, t, n })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// `ω² = trace·ω − norm`.
    pub fn omega_trace(&self) -> i128 {
        self.t
    }

    pub fn omega_norm(&self) -> i128 {
        self.n
    }

    pub fn discriminant(&self) -> i128 {
        if self.t == 1 {
            -(self.d as i128)
        } else {
            -4 * self.d as i128
        }
    }

    pub fn mul(&self, a: QuadElem, b: QuadElem) -> QuadElem {
        let (x, y) = a;
        let (u, v) = b;
        // (x + yω)(u + vω) = xu + (xv + yu)ω + yv(tω − n)
        (x * u - y * v * self.n, x * v + y * u + y * v * self.t)
    }

    pub fn conj(&self, a: QuadElem) -> QuadElem {
        (a.0 + self.t * a.1, -a.1)
    }

    pub fn norm(&self, a: QuadElem) -> i128 {
        a.0 * a.0 + self.t * a.0 * a.1 + self.n * a.1 * a.1
    }

    /// `a/b` when it lies in `O_K`.
    pub fn div(&self, a: QuadElem, b: QuadElem) -> Option<QuadElem> {
        let nb = self.norm(b);
        if nb == 0 {
            return None;
        }
        let p = self.mul(a, self.conj(b));
        (p.0 % nb == 0 && p.1 % nb == 0).then_some((p.0 / nb, p.1 / nb))
    }

    /// Every element of norm `norm`, found by exact lattice enumeration.
    pub fn elements_of_norm(&self, norm: i128) -> Result<Vec<QuadElem>> {
        if norm < 0 {
            return Ok(Vec::new());
        }
        size_check("norm", norm as u128, limits().max_norm as u128)?;
        let d = self.d as i128;
        // t = 0: x² + d·y² = N.  t = 1: (2x + y)² + d·y² = 4N.
        let target = if self.t == 1 { 4 * norm } else { norm };
        let ymax = isqrt(target / d);
        size_check(
            "lattice points",
            (2 * ymax + 1) as u128,
            limits().max_enumeration,
        )?;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let rest = target - d * y * y;
            let s = isqrt(rest);
            if s * s != rest {
                continue;
            }
            for s in if s == 0 { vec![0] } else { vec![s, -s] } {
                if self.t == 1 {
                    if (s - y) % 2 == 0 {
                        out.push(((s - y) / 2, y));
                    }
                } else {
                    out.push((s, y));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn units(&self) -> Vec<QuadElem> {
        self.elements_of_norm(1).expect("norm 1 is in range")
    }

    pub fn ideal(&self, gens: &[QuadElem]) -> QuadIdeal {
        QuadIdeal::generated(self, gens)
    }

    pub fn principal(&self, a: QuadElem) -> QuadIdeal {
        QuadIdeal::generated(self, &[a])
    }

    pub fn unit_ideal(&self) -> QuadIdeal {
        self.principal((1, 0))
    }
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, s, t) = ext_gcd(b, a % b);
    (g, t, s - (a / b) * t)
}

/// A nonzero ideal with `Z`-basis `{a, b + cω}`, `0 ≤ b < a`, `c | a`, `c | b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    ring: QuadRing,
    a: i128,
    b: i128,
    c: i128,
}

impl QuadIdeal {
    /// The ideal generated by `gens` (not all zero).
    pub fn generated(ring: &QuadRing, gens: &[QuadElem]) -> QuadIdeal {
        let mut vecs: Vec<QuadElem> = Vec::new();
        for &g in gens {
            vecs.push(g);
            vecs.push(ring.mul(g, (0, 1)));
        }
        QuadIdeal::from_lattice(ring, &vecs)
    }

    /// Hermite normal form of the `Z`-span of `vecs`, which must be an ideal
    /// of full rank.
    fn from_lattice(ring: &QuadRing, vecs: &[QuadElem]) -> QuadIdeal {
        // combine into one vector carrying gcd of the ω-coordinates
        let mut pivot: QuadElem = (0, 0);
        let mut xs: Vec<i128> = Vec::new();
        for &(x, y) in vecs {
            if y == 0 {
                xs.push(x);
                continue;
            }
            if pivot.1 == 0 {
                pivot = (x, y);
                continue;
            }
            let (g, s, t) = ext_gcd(pivot.1, y);
            let (p1, p2) = (pivot.1 / g, y / g);
            let new_pivot = (s * pivot.0 + t * x, g);
            // the complementary combination has ω-coordinate zero
            xs.push(p2 * pivot.0 - p1 * x);
            pivot = new_pivot;
        }
        if pivot.1 < 0 {
            pivot = (-pivot.0, -pivot.1);
        }
        let a = xs.iter().fold(0, |acc, &x| gcd(acc, x));
        assert!(a > 0 && pivot.1 > 0, "ideal must have full rank");
        let b = pivot.0.rem_euclid(a);
        let ideal = QuadIdeal {
            ring: *ring,
            a,
            b,
            c: pivot.1,
        };
        debug_assert!(ideal.is_ideal());
        ideal
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    /// `(a, b, c)`.
    pub fn normal_form(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    pub fn basis(&self) -> [QuadElem; 2] {
        [(self.a, 0), (self.b, self.c)]
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn contains(&self, e: QuadElem) -> bool {
        if e.1 % self.c != 0 {
            return false;
        }
        let k = e.1 / self.c;
        (e.0 - k * self.b) % self.a == 0
    }

    /// The lattice is closed under multiplication by `ω`.
    pub fn is_ideal(&self) -> bool {
        self.a % self.c == 0
            && self.b % self.c == 0
            && self
                .basis()
                .iter()
                .all(|&v| self.contains(self.ring.mul(v, (0, 1))))
    }

    pub fn multiply(&self, other: &QuadIdeal) -> QuadIdeal {
        let mut gens = Vec::new();
        for x in self.basis() {
            for y in other.basis() {
                gens.push(self.ring.mul(x, y));
            }
        }
        let out = QuadIdeal::generated(&self.ring, &gens);
        assert_eq!(
            out.norm(),
            self.norm() * other.norm(),
            "norm is multiplicative"
        );
        out
    }

    pub fn conjugate(&self) -> QuadIdeal {
        let gens: Vec<QuadElem> = self.basis().iter().map(|&v| self.ring.conj(v)).collect();
        QuadIdeal::generated(&self.ring, &gens)
    }

    /// A generator, if the ideal is principal.
    pub fn is_principal(&self) -> Result<Option<QuadElem>> {
        for e in self.ring.elements_of_norm(self.norm())? {
            if self.contains(e) && self.ring.principal(e) == *self {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

/// `(p, 𝔓)` for each prime `p` dividing the discriminant, with `𝔓 = (p, ω − r)`
/// for the double root `r` of `X² − tX + n` modulo `p`.
pub fn ramified_primes(ring: &QuadRing) -> Result<Vec<(u64, QuadIdeal)>> {
    let disc = ring.discriminant().unsigned_abs() as u64;
    let mut out = Vec::new();
    for p in 2..=disc {
        if disc % p != 0 || !(2..p).take_while(|k| k * k <= p).all(|k| p % k != 0) {
            continue;
        }
        let pi = p as i128;
        let r = (0..pi)
            .find(|&r| {
                (r * r - ring.t * r + ring.n).rem_euclid(pi) == 0
                    && (2 * r - ring.t).rem_euclid(pi) == 0
            })
            .ok_or_else(|| Error::CounterexampleFound(format!("no double root modulo {p}")))?;
        let big_p = ring.ideal(&[(pi, 0), (-r, 1)]);
        if big_p.multiply(&big_p) != ring.principal((pi, 0)) || big_p.conjugate() != big_p {
            return Err(Error::CounterexampleFound(format!(
                "prime over {p} is not ramified"
            )));
        }
        out.push((p, big_p));
    }
    Ok(out)
}

/// `P_K^Γ/α(P_Q)` as the sets of ramified primes (bit masks over
/// [`ramified_primes`]) whose product is principal.
#[derive(Clone, Debug)]
pub struct PrincipalQuotient {
    pub ramified: Vec<(u64, QuadIdeal)>,
    /// `(mask, generator)` for every principal subset, in increasing mask order.
    pub principal: Vec<(u32, QuadElem)>,
}

impl PrincipalQuotient {
    pub fn order(&self) -> usize {
        self.principal.len()
    }
}

pub fn invariant_principal_quotient(ring: &QuadRing) -> Result<PrincipalQuotient> {
    let ramified = ramified_primes(ring)?;
    size_check(
        "ramified subsets",
        1u128 << ramified.len(),
        limits().max_enumeration,
    )?;
    let mut principal = Vec::new();
    for mask in 0..1u32 << ramified.len() {
        let ideal = ramified
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(ring.unit_ideal(), |acc, (_, (_, q))| acc.multiply(q));
        if let Some(g) = ideal.is_principal()? {
            principal.push((mask, g));
        }
    }
    let masks: Vec<u32> = principal.iter().map(|&(m, _)| m).collect();
    if masks
        .iter()
        .any(|x| masks.iter().any(|y| !masks.contains(&(x ^ y))))
    {
        return Err(Error::CounterexampleFound(
            "principal subsets are not a subgroup".into(),
        ));
    }
    Ok(PrincipalQuotient {
        ramified,
        principal,
    })
}

/// `U_K` with complex conjugation as a `Z/2`-group.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    ring: QuadRing,
    units: Vec<QuadElem>,
    index: HashMap<QuadElem, usize>,
    gamma_group: GammaGroup,
}

impl UnitGroup {
    pub fn new(ring: &QuadRing) -> Result<UnitGroup> {
        let units = ring.units();
        let r = *ring;
        let group = FiniteGroup::from_elements(
            units.clone(),
            &(1, 0),
            move |a: &QuadElem, b: &QuadElem| r.mul(*a, *b),
            |a: &QuadElem| format!("{}+{}w", a.0, a.1),
        )?;
        let index: HashMap<QuadElem, usize> =
            units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let gamma_group = GammaGroup::from_fn(&cyclic_group(2), &group, |s, a| {
            if s == 0 {
                a
            } else {
                index[&ring.conj(units[a])]
            }
        })?;
        Ok(UnitGroup {
            ring: *ring,
            units,
            index,
            gamma_group,
        })
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    pub fn elements(&self) -> &[QuadElem] {
        &self.units
    }

    pub fn index_of(&self, u: QuadElem) -> Option<usize> {
        self.index.get(&u).copied()
    }

    pub fn gamma_group(&self) -> &GammaGroup {
        &self.gamma_group
    }
}

pub fn unit_h1(ring: &QuadRing) -> Result<H1Set> {
    UnitGroup::new(ring)?.gamma_group.h1()
}

/// The units isomorphism for one ring.
#[derive(Clone, Debug)]
pub struct UnitsReport {
    pub d: u64,
    pub ramified: Vec<(u64, QuadIdeal)>,
    pub quotient_order: usize,
    pub h1_order: usize,
    pub matched: bool,
    /// `(mask, λ, λ^σ/λ, class)` for each principal subset.
    pub witnesses: Vec<(u32, QuadElem, QuadElem, usize)>,
}

/// Sends the class of `(λ)` to the class of the cocycle `σ ↦ λ^σ/λ` and
/// checks that this is a bijection onto `H^1(Γ, U_K)`.
pub fn verify_units_iso(ring: &QuadRing) -> Result<UnitsReport> {
    let quotient = invariant_principal_quotient(ring)?;
    let units = UnitGroup::new(ring)?;
    let h1 = units.gamma_group.h1()?;
    let mut witnesses = Vec::new();
    for &(mask, lambda) in &quotient.principal {
        let value = ring.div(ring.conj(lambda), lambda).ok_or_else(|| {
            Error::BijectionFailure(format!("{lambda:?} is not invariant up to a unit"))
        })?;
        let u = units
            .index_of(value)
            .ok_or_else(|| Error::BijectionFailure(format!("{value:?} is not a unit")))?;
        let class = h1
            .class_of(&[units.gamma_group.base().identity(), u])
            .ok_or_else(|| Error::BijectionFailure("λ^σ/λ is not a cocycle".into()))?;
        witnesses.push((mask, lambda, value, class));
    }
    let mut classes: Vec<usize> = witnesses.iter().map(|w| w.3).collect();
    classes.sort_unstable();
    classes.dedup();
    let matched = classes.len() == witnesses.len() && classes.len() == h1.len();
    if !matched {
        return Err(Error::BijectionFailure(format!(
            "{} principal classes map onto {} of {} cohomology classes",
            witnesses.len(),
            classes.len(),
            h1.len()
        )));
    }
    Ok(UnitsReport {
        d: ring.d(),
        ramified: quotient.ramified,
        quotient_order: quotient.principal.len(),
        h1_order: h1.len(),
        matched,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rings() {
        let z_i = QuadRing::new(1).unwrap();
        assert_eq!(
            (z_i.omega_trace(), z_i.omega_norm(), z_i.discriminant()),
            (0, 1, -4)
        );
        let eis = QuadRing::new(3).unwrap();
        assert_eq!(
            (eis.omega_trace(), eis.omega_norm(), eis.discriminant()),
            (1, 1, -3)
        );
        assert_eq!(eis.mul((0, 1), (0, 1)), (-1, 1));
        assert_eq!(QuadRing::new(5).unwrap().discriminant(), -20);
        assert!(matches!(QuadRing::new(4), Err(Error::NotSquarefree(4))));
        assert_eq!(z_i.units().len(), 4);
        assert_eq!(eis.units().len(), 6);
        assert_eq!(QuadRing::new(7).unwrap().units().len(), 2);
    }

    #[test]
    fn ideal_arithmetic() {
        let z_i = QuadRing::new(1).unwrap();
        let p = z_i.principal((1, 1));
        assert_eq!(p.multiply(&p), z_i.principal((2, 0)));
        assert_eq!(p.conjugate(), p);
        assert_eq!(z_i.principal((1, -1)), p);
        assert_eq!(p.multiply(&z_i.unit_ideal()), p);
        let r5 = QuadRing::new(5).unwrap();
        let q = r5.ideal(&[(2, 0), (1, 1)]);
        assert_eq!(q.norm(), 2);
        assert_eq!(q.is_principal().unwrap(), None);
        let s5 = r5.principal((0, 1));
        assert_eq!(
            s5.is_principal().unwrap().map(|g| r5.principal(g)),
            Some(s5)
        );
        assert_eq!(
            r5.principal((6, 0))
                .is_principal()
                .unwrap()
                .map(|g| r5.norm(g)),
            Some(36)
        );
    }

    #[test]
    fn ramification() {
        let nf = |d| -> Vec<(u64, (i128, i128, i128))> {
            ramified_primes(&QuadRing::new(d).unwrap())
                .unwrap()
                .into_iter()
                .map(|(p, q)| (p, q.normal_form()))
                .collect()
        };
        let z_i = QuadRing::new(1).unwrap();
        assert_eq!(nf(1), vec![(2, z_i.principal((1, 1)).normal_form())]);
        let r5 = QuadRing::new(5).unwrap();
        assert_eq!(
            nf(5),
            vec![
                (2, r5.ideal(&[(2, 0), (1, 1)]).normal_form()),
                (5, r5.principal((0, 1)).normal_form())
            ]
        );
        let eis = QuadRing::new(3).unwrap();
        // √−3 = 2ω − 1
        assert_eq!(nf(3), vec![(3, eis.principal((-1, 2)).normal_form())]);
    }

    #[test]
    fn units_iso() {
        for d in [1, 2, 3, 5, 6, 7, 10, 13, 15] {
            let ring = QuadRing::new(d).unwrap();
            let r = verify_units_iso(&ring).unwrap();
            assert_eq!(r.quotient_order, 2, "d = {d}");
            assert_eq!(r.h1_order, 2, "d = {d}");
        }
        let z_i = QuadRing::new(1).unwrap();
        let r = verify_units_iso(&z_i).unwrap();
        let w = r.witnesses.iter().find(|w| w.0 == 1).unwrap();
        assert_eq!(z_i.div(z_i.conj((1, 1)), (1, 1)), Some((0, -1)));
        assert_ne!(w.3, unit_h1(&z_i).unwrap().distinguished());
        let r5 = QuadRing::new(5).unwrap();
        let r = verify_units_iso(&r5).unwrap();
        let w = r.witnesses.iter().find(|w| w.0 == 2).unwrap();
        assert_eq!(w.2, (-1, 0));
    }

    #[test]
    fn norms_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1, 2, 3, 5, 15] {
            let ring = QuadRing::new(d).unwrap();
            let mut random_ideal = || {
                let mut g = || (rng.gen_range(-9..10), rng.gen_range(-9..10));
                let (x, y) = (g(), g());
                ring.ideal(&[if x == (0, 0) { (1, 0) } else { x }, y])
            };
            for _ in 0..300 {
                let (a, b) = (random_ideal(), random_ideal());
                let ab = a.multiply(&b);
                assert_eq!(ab.norm(), a.norm() * b.norm());
                assert_eq!(ab, b.multiply(&a));
                assert_eq!(a.conjugate().conjugate(), a);
                assert!(ab.is_ideal());
            }
        }
    }
}
