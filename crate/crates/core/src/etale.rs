//! Étale algebras of dimension `m` classified by `Hom(Γ, S_m)/S_m`, and
//! their realization over finite fields.
//!
//! A class `ψ` is realized as `L = {l ∈ K^m : P_(ψ(σ))·l^σ = l for all σ}`
//! with `(P_π v)_j = v_(π⁻¹(j))`. So `σ` sends the coordinate at position
//! `i` to position `ψ(σ)(i)`, and the orbits of `ψ(Γ)` on positions are the
//! field factors of `L`.

use std::collections::HashSet;

use crate::error::{size_check, Error, Result};
use crate::field::{Elem, FqTower, Mat};
use crate::galois_linear::{invariant_basis, SemilinearAction};
use crate::group::{
    cyclic_group, homs_up_to_conjugacy, symmetric_group, FiniteGroup, GroupHom, Subgroup,
};
use crate::limits::limits;

/// One conjugacy class of homomorphisms `ψ: Γ → S_m`.
#[derive(Clone, Debug)]
pub struct EtaleClass {
    gamma: FiniteGroup,
    m: usize,
    psi: GroupHom,
    image: Subgroup,
    orbits: Vec<Vec<usize>>,
}

/// One class per `S_m`-conjugacy class of `Hom(Γ, S_m)`, each represented
/// by its lexicographically least homomorphism.
pub fn classify_etale(gamma: &FiniteGroup, m: usize) -> Result<Vec<EtaleClass>> {
    let sm = symmetric_group(m)?;
    let homs = homs_up_to_conjugacy(gamma, &sm)?;
    Ok(homs
        .into_iter()
        .map(|psi| EtaleClass::new(gamma, m, psi))
        .collect())
}

impl EtaleClass {
    fn new(gamma: &FiniteGroup, m: usize, psi: GroupHom) -> EtaleClass {
        let image = psi.image_subgroup();
        let sm = psi.target();
        let mut seen = vec![false; m];
        let mut orbits = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < orbit.len() {
                for &g in image.members() {
                    let next = sm.perm(g).expect("permutation")[orbit[i]] as usize;
                    if !seen[next] {
                        seen[next] = true;
                        orbit.push(next);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        EtaleClass {
            gamma: gamma.clone(),
            m,
            psi,
            image,
            orbits,
        }
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn psi(&self) -> &GroupHom {
        &self.psi
    }

    /// `ψ(γ)` in one-line notation.
    pub fn permutation(&self, gamma: usize) -> Vec<usize> {
        let p = self
            .psi
            .target()
            .perm(self.psi.apply(gamma))
            .expect("permutation");
        p.iter().map(|&x| x as usize).collect()
    }

    pub fn image(&self) -> &Subgroup {
        &self.image
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// `ψ(Γ)` is transitive on `{0..m−1}`.
    pub fn is_field(&self) -> bool {
        self.orbits.len() == 1
    }

    /// Orbit sizes in decreasing order.
    pub fn factor_structure(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// `ker ψ`. For a field class this is also checked to equal the
    /// intersection of the conjugates of the stabilizer of the point `0`.
    pub fn fixing_kernel(&self) -> Result<Subgroup> {
        let kernel = self.psi.kernel();
        if self.is_field() {
            let stab: Vec<usize> = self
                .gamma
                .elements()
                .filter(|&g| self.permutation(g)[0] == 0)
                .collect();
            let stab = Subgroup::new(&self.gamma, stab)?;
            let core = self
                .gamma
                .elements()
                .fold(stab.clone(), |acc, g| acc.intersect(&stab.conjugate(g)));
            if core.members() != kernel.members() {
                return Err(Error::CounterexampleFound(
                    "kernel differs from the core of the stabilizer".into(),
                ));
            }
        }
        Ok(kernel)
    }

    /// `Some(Ψ)` when `Ψ` acts regularly, `None` when transitive but not
    /// regular.
    pub fn is_galois(&self) -> Result<Option<Subgroup>> {
        if !self.is_field() {
            return Err(Error::NotAField);
        }
        Ok((self.image.len() == self.m).then(|| self.image.clone()))
    }

    /// `Ψ` is generated by an `m`-cycle.
    pub fn is_cyclic_field(&self) -> bool {
        let sm = self.psi.target();
        self.image.members().iter().any(|&g| {
            sm.cycle_type(g).expect("permutation") == vec![self.m]
                && sm.generated_by(&[g]).len() == self.image.len()
        })
    }

    /// `sign ∘ ψ: Γ → Z/2`. A Galois class of odd degree must give the
    /// trivial homomorphism.
    pub fn discriminant(&self) -> Result<GroupHom> {
        let z2 = cyclic_group(2);
        let sm = self.psi.target();
        let image = self
            .gamma
            .elements()
            .map(|g| usize::from(sm.sign(self.psi.apply(g)).expect("permutation") < 0))
            .collect();
        let disc = GroupHom::new(&self.gamma, &z2, image)?;
        if self.m % 2 == 1
            && self.is_field()
            && self.is_galois()?.is_some()
            && disc.image().contains(&1)
        {
            return Err(Error::CounterexampleFound(
                "odd Galois class with nontrivial discriminant".into(),
            ));
        }
        Ok(disc)
    }

    pub fn discriminant_trivial(&self) -> Result<bool> {
        Ok(!self.discriminant()?.image().contains(&1))
    }
}

/// A commutative `k`-algebra given by structure constants on a basis.
#[derive(Clone, Debug)]
pub struct EtaleAlgebra {
    tower: FqTower,
    m: usize,
    /// Basis vectors of `L ⊂ K^m`.
    basis: Vec<Vec<Elem>>,
    /// `b_i·b_j = Σ_k c[(i·m + j)·m + k]·b_k`.
    constants: Vec<Elem>,
    factor_degrees: Vec<usize>,
}

impl EtaleAlgebra {
    pub fn tower(&self) -> &FqTower {
        &self.tower
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn constants(&self) -> &[Elem] {
        &self.constants
    }

    /// Degrees of the field factors, decreasing.
    pub fn factor_degrees(&self) -> &[usize] {
        &self.factor_degrees
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let (f, m) = (&self.tower, self.m);
        let mut out = vec![0; m];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                let s = f.mul(x[i], y[j]);
                if s == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.add(*o, f.mul(s, self.constants[(i * m + j) * m + k]));
                }
            }
        }
        out
    }

    /// Every element as a coordinate vector over `k`.
    pub fn elements(&self) -> Result<Vec<Vec<Elem>>> {
        let base = self.tower.base_elements();
        let q = base.len();
        let total = (q as u128).checked_pow(self.m as u32).unwrap_or(u128::MAX);
        size_check("algebra elements", total, limits().max_enumeration)?;
        Ok((0..total as usize)
            .map(|mut code| {
                (0..self.m)
                    .map(|_| {
                        let c = base[code % q];
                        code /= q;
                        c
                    })
                    .collect()
            })
            .collect())
    }

    fn unit_vector(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![0; self.m];
        v[i] = 1;
        v
    }

    /// Trace of multiplication by `x`.
    pub fn trace(&self, x: &[Elem]) -> Elem {
        let f = &self.tower;
        (0..self.m).fold(0, |acc, k| f.add(acc, self.mul(x, &self.unit_vector(k))[k]))
    }

    /// `det(Tr(b_i·b_j))`.
    pub fn trace_form_discriminant(&self) -> Elem {
        let m = self.m;
        let e = (0..m * m)
            .map(|ij| self.trace(&self.mul(&self.unit_vector(ij / m), &self.unit_vector(ij % m))))
            .collect();
        Mat { m, e }.det(&self.tower)
    }

    /// Commutative, associative, unital and reduced, checked on the basis
    /// and, for reducedness, on every element.
    pub fn check_axioms(&self) -> Result<()> {
        let m = self.m;
        let units: Vec<Vec<Elem>> = (0..m).map(|i| self.unit_vector(i)).collect();
        for a in &units {
            for b in &units {
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::CounterexampleFound(
                        "algebra is not commutative".into(),
                    ));
                }
                for c in &units {
                    if self.mul(&self.mul(a, b), c) != self.mul(a, &self.mul(b, c)) {
                        return Err(Error::CounterexampleFound(
                            "algebra is not associative".into(),
                        ));
                    }
                }
            }
        }
        let elements = self.elements()?;
        if !elements
            .iter()
            .any(|u| units.iter().all(|b| self.mul(u, b) == *b))
        {
            return Err(Error::CounterexampleFound("algebra has no unit".into()));
        }
        let zero = vec![0; m];
        if elements
            .iter()
            .any(|x| *x != zero && self.mul(x, x) == zero)
        {
            return Err(Error::CounterexampleFound(
                "algebra has a nonzero nilpotent".into(),
            ));
        }
        Ok(())
    }
}

/// Degrees of the factors `eL` for the primitive idempotents `e`, found by
/// enumerating the algebra.
fn idempotent_degrees(alg: &EtaleAlgebra) -> Result<Vec<usize>> {
    let elements = alg.elements()?;
    let zero = vec![0; alg.m];
    let idempotents: Vec<&Vec<Elem>> = elements
        .iter()
        .filter(|x| **x != zero && alg.mul(x, x) == **x)
        .collect();
    let q = alg.tower.base_size();
    let mut degrees = Vec::new();
    for e in &idempotents {
        let primitive = idempotents.iter().all(|f| f == e || alg.mul(e, f) != **f);
        if primitive {
            let ideal: HashSet<Vec<Elem>> = elements.iter().map(|x| alg.mul(e, x)).collect();
            let mut deg = 0;
            let mut size = 1;
            while size < ideal.len() {
                size *= q;
                deg += 1;
            }
            if size != ideal.len() {
                return Err(Error::CounterexampleFound(
                    "ideal size is not a power of q".into(),
                ));
            }
            degrees.push(deg);
        }
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(degrees)
}

/// `L` for a class of `Z/n` where `n` is the degree of `K/k` and `1 ↦ φ`.
pub fn realize_over_fq(tower: &FqTower, class: &EtaleClass) -> Result<EtaleAlgebra> {
    let n = tower.n();
    let gamma = class.gamma();
    if gamma.order() != n || gamma.element_order(1 % n) != n || gamma.mul(1 % n, 1 % n) != 2 % n {
        return Err(Error::InvalidInput(format!(
            "class must be over Z/{n} matching the tower"
        )));
    }
    let m = class.dim();
    let mats: Vec<Mat> = (0..n)
        .map(|i| {
            let pi = class.permutation(i);
            let mut e = vec![0; m * m];
            for (j, &pj) in pi.iter().enumerate() {
                e[pj * m + j] = 1;
            }
            Mat { m, e }
        })
        .collect();
    let action = SemilinearAction::new(tower, mats)?;
    let basis = invariant_basis(&action)?;
    let columns = Mat {
        m,
        e: (0..m * m).map(|k| basis[k % m][k / m]).collect(),
    };
    let to_coords = columns.inverse(tower).ok_or(Error::DimensionFailure {
        expected: m,
        found: m - 1,
    })?;
    let mut constants = Vec::with_capacity(m * m * m);
    for bi in &basis {
        for bj in &basis {
            let prod: Vec<Elem> = bi.iter().zip(bj).map(|(&x, &y)| tower.mul(x, y)).collect();
            let coords = to_coords.apply(tower, &prod);
            if coords.iter().any(|&c| !tower.is_base(c)) {
                return Err(Error::CounterexampleFound(
                    "fixed points are not closed under product".into(),
                ));
            }
            constants.extend(coords);
        }
    }
    let mut alg = EtaleAlgebra {
        tower: tower.clone(),
        m,
        basis,
        constants,
        factor_degrees: Vec::new(),
    };
    alg.check_axioms()?;
    alg.factor_degrees = idempotent_degrees(&alg)?;
    if alg.factor_degrees != class.factor_structure() {
        return Err(Error::DimensionFailure {
            expected: class.factor_structure().len(),
            found: alg.factor_degrees.len(),
        });
    }
    Ok(alg)
}

/// Number of conjugacy classes of `S_m` whose elements have order dividing `n`,
/// from cycle types alone.
pub fn conjugacy_classes_of_order_dividing(m: usize, n: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    fn count(rest: usize, max: usize, lcm: usize, n: usize) -> usize {
        if rest == 0 {
            return usize::from(n % lcm == 0);
        }
        (1..=rest.min(max))
            .map(|part| count(rest - part, part, lcm / gcd(lcm, part) * part, n))
            .sum()
    }
    count(m, m, 1, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::trivial_group;

    /// The class of `Z/n` whose generator maps to a conjugate of `perm`.
    fn class_with(classes: &[EtaleClass], perm: &[usize]) -> EtaleClass {
        let sm = symmetric_group(perm.len()).unwrap();
        let target: Vec<u8> = perm.iter().map(|&x| x as u8).collect();
        let p = sm
            .elements()
            .find(|&g| sm.perm(g).unwrap() == target.as_slice())
            .unwrap();
        let shape = sm.cycle_type(p);
        classes
            .iter()
            .find(|c| sm.cycle_type(c.psi().apply(1)) == shape)
            .expect("class")
            .clone()
    }

    #[test]
    fn small_classifications() {
        assert_eq!(classify_etale(&trivial_group(), 3).unwrap().len(), 1);
        let z2 = classify_etale(&cyclic_group(2), 2).unwrap();
        assert_eq!(z2.len(), 2);
        assert!(!z2[0].is_field() && z2[1].is_field());
        // elements of order dividing 4 in S_4 miss the 3-cycles
        assert_eq!(classify_etale(&cyclic_group(4), 4).unwrap().len(), 4);
        for m in 1..=5 {
            for n in 1..=6 {
                assert_eq!(
                    classify_etale(&cyclic_group(n), m).unwrap().len(),
                    conjugacy_classes_of_order_dividing(m, n)
                );
            }
        }
    }

    #[test]
    fn predicates() {
        let z2 = classify_etale(&cyclic_group(2), 4).unwrap();
        let c = class_with(&z2, &[1, 0, 3, 2]);
        assert!(!c.is_field() && !c.is_cyclic_field());
        assert_eq!(c.factor_structure(), vec![2, 2]);
        let z3 = classify_etale(&cyclic_group(3), 3).unwrap();
        let cyc = z3.iter().find(|c| c.is_field()).unwrap();
        assert!(cyc.is_cyclic_field());
        assert!(cyc.is_galois().unwrap().is_some());
        assert!(cyc.discriminant_trivial().unwrap());
        assert!(cyc.fixing_kernel().unwrap().len() == 1);
        assert!(matches!(z3[0].is_galois(), Err(Error::NotAField)));
        assert_eq!(z3[0].fixing_kernel().unwrap().len(), 3);
        let triv = classify_etale(&cyclic_group(2), 3).unwrap();
        assert_eq!(triv[0].factor_structure(), vec![1, 1, 1]);
        assert_eq!(class_with(&triv, &[1, 0, 2]).factor_structure(), vec![2, 1]);
        let s3 = symmetric_group(3).unwrap();
        let full = classify_etale(&s3, 3).unwrap();
        let faithful = full.iter().find(|c| c.image().len() == 6).unwrap();
        assert!(faithful.is_field() && faithful.is_galois().unwrap().is_none());
        let sign = classify_etale(&s3, 2).unwrap();
        let nontrivial = sign.iter().find(|c| c.is_field()).unwrap();
        assert_eq!(nontrivial.fixing_kernel().unwrap().len(), 3);
        assert!(!nontrivial.discriminant_trivial().unwrap());
        let one = classify_etale(&cyclic_group(2), 1).unwrap();
        assert_eq!(one[0].is_galois().unwrap().map(|s| s.len()), Some(1));
    }

    #[test]
    fn realizations() {
        let f9 = FqTower::new(3, 1, 2).unwrap();
        let split = &classify_etale(&cyclic_group(2), 2).unwrap();
        let alg = realize_over_fq(&f9, &split[0]).unwrap();
        assert_eq!(alg.factor_degrees(), &[1, 1]);
        let alg = realize_over_fq(&f9, &split[1]).unwrap();
        assert_eq!(alg.factor_degrees(), &[2]);
        assert!(!f9.is_base_square(alg.trace_form_discriminant()));
        let f4 = FqTower::new(2, 1, 2).unwrap();
        let three = classify_etale(&cyclic_group(2), 3).unwrap();
        let alg = realize_over_fq(&f4, &class_with(&three, &[1, 0, 2])).unwrap();
        assert_eq!(alg.factor_degrees(), &[2, 1]);
    }

    #[test]
    fn order_dividing_counts() {
        assert_eq!(conjugacy_classes_of_order_dividing(4, 12), 5);
        assert_eq!(conjugacy_classes_of_order_dividing(5, 60), 7);
        assert_eq!(conjugacy_classes_of_order_dividing(3, 2), 2);
    }
}
