//! Γ-groups, 1-cocycles and the pointed sets `H^0`, `H^1`.
//!
//! # Conventions
//!
//! `a^γ` denotes the action of `γ ∈ Γ` on `a ∈ A`, stored as
//! `action[γ][a]`. The cocycle law is `α(hg) = α(h)·α(g)^h` and two cocycles
//! are cohomologous when `α(g) = a⁻¹·β(g)·a^g` for some `a ∈ A`. For these
//! two rules to be compatible (coboundaries must satisfy the cocycle law)
//! the action has to compose as `(a^g)^h = a^(hg)`: exponent notation for an
//! action by automorphisms in which `γ ↦ (a ↦ a^γ)` is a homomorphism
//! `Γ → Aut(A)`. Galois groups acting on field elements compose this way.
//! Both rules live in exactly one place each: [`GammaGroup::cocycle_law_holds`]
//! and [`GammaGroup::twist`].

use std::collections::HashMap;

use crate::error::{size_check, Error, Result};
use crate::group::{
    enumerate_homs, hom_conjugacy_orbits, homs_up_to_conjugacy, FiniteGroup, GroupHom, Subgroup,
};
use crate::limits::limits;

/// A finite group `A` with an action of a finite group `Γ` by automorphisms.
#[derive(Clone, Debug)]
pub struct GammaGroup {
    gamma: FiniteGroup,
    base: FiniteGroup,
    action: Vec<u32>,
}

impl PartialEq for GammaGroup {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.base == other.base && self.action == other.action
    }
}

impl GammaGroup {
    /// Validates `action[γ][a] = a^γ`.
    pub fn new(
        gamma: &FiniteGroup,
        base: &FiniteGroup,
        action: Vec<Vec<usize>>,
    ) -> Result<GammaGroup> {
        if action.len() != gamma.order() || action.iter().any(|row| row.len() != base.order()) {
            return Err(Error::InvalidAction("action array has wrong shape".into()));
        }
        if action.iter().flatten().any(|&x| x >= base.order()) {
            return Err(Error::InvalidAction("action entry out of range".into()));
        }
        let flat = action.into_iter().flatten().map(|x| x as u32).collect();
        let g = GammaGroup {
            gamma: gamma.clone(),
            base: base.clone(),
            action: flat,
        };
        g.validate_action()?;
        Ok(g)
    }

    pub(crate) fn from_flat_unchecked(
        gamma: &FiniteGroup,
        base: &FiniteGroup,
        action: Vec<u32>,
    ) -> GammaGroup {
        GammaGroup {
            gamma: gamma.clone(),
            base: base.clone(),
            action,
        }
    }

    /// Builds the action from a function `(γ, a) ↦ a^γ` and validates it.
    pub fn from_fn(
        gamma: &FiniteGroup,
        base: &FiniteGroup,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<GammaGroup> {
        let mut flat = Vec::with_capacity(gamma.order() * base.order());
        for g in gamma.elements() {
            for a in base.elements() {
                flat.push(f(g, a) as u32);
            }
        }
        let g = GammaGroup {
            gamma: gamma.clone(),
            base: base.clone(),
            action: flat,
        };
        g.validate_action()?;
        Ok(g)
    }

    pub fn trivial(gamma: &FiniteGroup, base: &FiniteGroup) -> GammaGroup {
        let mut flat = Vec::with_capacity(gamma.order() * base.order());
        for _ in gamma.elements() {
            flat.extend(base.elements().map(|a| a as u32));
        }
        GammaGroup {
            gamma: gamma.clone(),
            base: base.clone(),
            action: flat,
        }
    }

    /// Action through a homomorphism `φ: Γ → A` by conjugation, `a^γ = φ(γ)·a·φ(γ)⁻¹`.
    pub fn conjugation(
        gamma: &FiniteGroup,
        base: &FiniteGroup,
        phi: &GroupHom,
    ) -> Result<GammaGroup> {
        GammaGroup::from_fn(gamma, base, |g, a| base.conj(phi.apply(g), a))
    }

    /// Extends automorphisms given on generators of `Γ` to the whole group.
    /// `autos[i]` is the permutation `a ↦ a^(gens[i])`.
    pub fn from_generators(
        gamma: &FiniteGroup,
        base: &FiniteGroup,
        gens: &[usize],
        autos: &[Vec<usize>],
    ) -> Result<GammaGroup> {
        if gens.len() != autos.len() || gamma.generated_by(gens).len() != gamma.order() {
            return Err(Error::InvalidAction(
                "generator images do not describe Γ".into(),
            ));
        }
        let (parent, bfs) = gamma.words(gens);
        let n = base.order();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); gamma.order()];
        rows[gamma.identity()] = base.elements().collect();
        for &x in bfs.iter().skip(1) {
            let (i, y) = parent[x].expect("parent");
            // a^(s y) = (a^y)^s
            rows[x] = (0..n).map(|a| autos[i][rows[y][a]]).collect();
        }
        GammaGroup::new(gamma, base, rows)
    }

    /// Re-runs the construction checks: bijective, homomorphic, and composing as `(a^g)^h = a^(hg)`.
    pub fn validate_action(&self) -> Result<()> {
        let (gamma, base) = (&self.gamma, &self.base);
        let gens = base.generators();
        for g in gamma.elements() {
            let mut hit = vec![false; base.order()];
            for a in base.elements() {
                hit[self.act(g, a)] = true;
            }
            if hit.iter().any(|h| !h) {
                return Err(Error::InvalidAction(format!(
                    "element {g} of Γ does not act bijectively"
                )));
            }
            for &s in &gens {
                for a in base.elements() {
                    if self.act(g, base.mul(s, a)) != base.mul(self.act(g, s), self.act(g, a)) {
                        return Err(Error::InvalidAction(format!(
                            "element {g} of Γ does not act by a homomorphism"
                        )));
                    }
                }
            }
        }
        for a in base.elements() {
            if self.act(gamma.identity(), a) != a {
                return Err(Error::InvalidAction(
                    "identity of Γ acts nontrivially".into(),
                ));
            }
        }
        for h in gamma.elements() {
            for g in gamma.elements() {
                let hg = gamma.mul(h, g);
                for a in base.elements() {
                    if self.act(hg, a) != self.act(h, self.act(g, a)) {
                        return Err(Error::InvalidAction(format!(
                            "(a^{g})^{h} != a^({h}{g}) at a = {a}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    /// `a^γ`.
    #[inline]
    pub fn act(&self, gamma: usize, a: usize) -> usize {
        self.action[gamma * self.base.order() + a] as usize
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        self.gamma
            .elements()
            .map(|g| self.base.elements().map(|a| self.act(g, a)).collect())
            .collect()
    }

    pub fn is_trivial_action(&self) -> bool {
        self.gamma
            .elements()
            .all(|g| self.base.elements().all(|a| self.act(g, a) == a))
    }

    /// The cocycle law at one pair: `α(hg) = α(h)·α(g)^h`.
    #[inline]
    pub fn cocycle_law_holds(&self, values: &[usize], h: usize, g: usize) -> bool {
        values[self.gamma.mul(h, g)] == self.base.mul(values[h], self.act(h, values[g]))
    }

    /// `(a·α)(g) = a⁻¹·α(g)·a^g`.
    pub fn twist(&self, a: usize, values: &[usize]) -> Vec<usize> {
        let ainv = self.base.inv(a);
        self.gamma
            .elements()
            .map(|g| {
                self.base
                    .mul(self.base.mul(ainv, values[g]), self.act(g, a))
            })
            .collect()
    }

    /// Checks the cocycle law on all pairs and returns the first violation.
    pub fn is_cocycle(&self, values: &[usize]) -> (bool, Option<(usize, usize)>) {
        if values.len() != self.gamma.order() || values.iter().any(|&v| v >= self.base.order()) {
            return (false, None);
        }
        for h in self.gamma.elements() {
            for g in self.gamma.elements() {
                if !self.cocycle_law_holds(values, h, g) {
                    return (false, Some((h, g)));
                }
            }
        }
        (true, None)
    }

    /// Some `a` with `α(g) = a⁻¹·β(g)·a^g` for all `g`, by exhaustive search.
    pub fn cohomologous(&self, alpha: &[usize], beta: &[usize]) -> Option<usize> {
        self.base.elements().find(|&a| self.twist(a, beta) == alpha)
    }

    pub fn trivial_cocycle(&self) -> Vec<usize> {
        vec![self.base.identity(); self.gamma.order()]
    }

    /// Fixed points `A^Γ`.
    pub fn h0(&self) -> Subgroup {
        let fixed = self
            .base
            .elements()
            .filter(|&a| self.gamma.elements().all(|g| self.act(g, a) == a))
            .collect();
        Subgroup::new(&self.base, fixed).expect("fixed points form a subgroup")
    }

    /// Whether `sub` is mapped into itself by every `γ`; the witness otherwise.
    pub fn stability_witness(&self, sub: &Subgroup) -> Option<(usize, usize)> {
        for &a in sub.members() {
            for g in self.gamma.elements() {
                if !sub.contains(self.act(g, a)) {
                    return Some((a, g));
                }
            }
        }
        None
    }

    /// The Γ-group structure on a stable subgroup, and its inclusion.
    pub fn restrict(&self, sub: &Subgroup) -> Result<(GammaGroup, EquivariantHom)> {
        if let Some((element, gamma)) = self.stability_witness(sub) {
            return Err(Error::NotStable { element, gamma });
        }
        let (group, incl) = sub.to_group();
        let mut flat = Vec::with_capacity(self.gamma.order() * group.order());
        for g in self.gamma.elements() {
            for &a in sub.members() {
                flat.push(sub.index_of(self.act(g, a)).expect("stable") as u32);
            }
        }
        let restricted = GammaGroup::from_flat_unchecked(&self.gamma, &group, flat);
        let hom = EquivariantHom {
            source: restricted.clone(),
            target: self.clone(),
            hom: incl,
        };
        Ok((restricted, hom))
    }

    /// The induced Γ-group on `A/N` for a normal, stable `N`, and the projection.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(GammaGroup, EquivariantHom)> {
        if let Some((element, gamma)) = self.stability_witness(normal) {
            return Err(Error::NotStable { element, gamma });
        }
        let (q, proj) = crate::group::quotient_group(&self.base, normal)?;
        let mut rep = vec![usize::MAX; q.order()];
        for a in self.base.elements() {
            let c = proj.apply(a);
            if rep[c] == usize::MAX {
                rep[c] = a;
            }
        }
        let mut flat = Vec::with_capacity(self.gamma.order() * q.order());
        for g in self.gamma.elements() {
            for &r in &rep {
                flat.push(proj.apply(self.act(g, r)) as u32);
            }
        }
        let quotient = GammaGroup::from_flat_unchecked(&self.gamma, &q, flat);
        let hom = EquivariantHom {
            source: self.clone(),
            target: quotient.clone(),
            hom: proj,
        };
        Ok((quotient, hom))
    }

    /// All 1-cocycles, in lexicographic order of their value arrays.
    ///
    /// Values are chosen on the greedy generators of `Γ` (only those `a`
    /// satisfying the cyclic norm condition `α(s^k) = e`), extended along
    /// the word decomposition by the cocycle law, then validated on every pair.
    pub fn cocycles(&self) -> Result<Vec<Vec<usize>>> {
        let (gamma, base) = (&self.gamma, &self.base);
        if gamma.order() == 1 {
            return Ok(vec![self.trivial_cocycle()]);
        }
        let gens = gamma.generators();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&s| {
                let k = gamma.element_order(s);
                base.elements()
                    .filter(|&a| {
                        let mut v = base.identity();
                        for _ in 0..k {
                            v = base.mul(a, self.act(s, v));
                        }
                        v == base.identity()
                    })
                    .collect()
            })
            .collect();
        let total = candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
        size_check("cocycle candidates", total, limits().max_enumeration)?;
        if candidates.iter().any(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let (parent, bfs) = gamma.words(&gens);
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        let mut values = vec![base.identity(); gamma.order()];
        let pairs: Vec<(usize, usize)> = gamma
            .elements()
            .flat_map(|h| gamma.elements().map(move |g| (h, g)))
            .collect();
        'outer: loop {
            for &x in bfs.iter().skip(1) {
                let (i, y) = parent[x].expect("parent");
                values[x] = base.mul(candidates[i][choice[i]], self.act(gens[i], values[y]));
            }
            if pairs
                .iter()
                .all(|&(h, g)| self.cocycle_law_holds(&values, h, g))
            {
                out.push(values.clone());
            }
            for pos in (0..gens.len()).rev() {
                choice[pos] += 1;
                if choice[pos] < candidates[pos].len() {
                    continue 'outer;
                }
                choice[pos] = 0;
            }
            break;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `H^1(Γ, A)`.
    pub fn h1(&self) -> Result<H1Set> {
        let cocycles = self.cocycles()?;
        let index: HashMap<&[usize], usize> = cocycles
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        let mut class = vec![usize::MAX; cocycles.len()];
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for i in 0..cocycles.len() {
            if class[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            for a in self.base.elements() {
                let t = self.twist(a, &cocycles[i]);
                let j = *index
                    .get(t.as_slice())
                    .expect("twist of a cocycle is a cocycle");
                class[j] = c;
            }
            reps.push(cocycles[i].clone());
        }
        let class_of: HashMap<Vec<usize>, usize> = cocycles.into_iter().zip(class).collect();
        let distinguished = class_of[&self.trivial_cocycle()];
        Ok(H1Set {
            parent: self.clone(),
            classes: reps,
            class_of,
            distinguished,
        })
    }
}

/// `H^1(Γ, A)` as a pointed set with its complete cocycle-to-class map.
#[derive(Clone, Debug)]
pub struct H1Set {
    parent: GammaGroup,
    classes: Vec<Vec<usize>>,
    class_of: HashMap<Vec<usize>, usize>,
    distinguished: usize,
}

impl H1Set {
    pub fn parent(&self) -> &GammaGroup {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Lexicographically least cocycle of each class; classes are sorted by it.
    pub fn representatives(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, class: usize) -> &[usize] {
        &self.classes[class]
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn cocycle_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, cocycle: &[usize]) -> Option<usize> {
        self.class_of.get(cocycle).copied()
    }

    /// Every cocycle with its class index, sorted by cocycle.
    pub fn cocycles(&self) -> Vec<(&[usize], usize)> {
        let mut all: Vec<(&[usize], usize)> = self
            .class_of
            .iter()
            .map(|(k, &v)| (k.as_slice(), v))
            .collect();
        all.sort_unstable();
        all
    }

    pub fn class_members(&self, class: usize) -> Vec<&[usize]> {
        let mut m: Vec<&[usize]> = self
            .class_of
            .iter()
            .filter(|(_, &c)| c == class)
            .map(|(k, _)| k.as_slice())
            .collect();
        m.sort_unstable();
        m
    }
}

/// `H^1(Γ, A)` for a trivial action, computed as `Hom(Γ, A)` up to conjugacy.
pub fn h1_trivial_action(gamma: &FiniteGroup, base: &FiniteGroup) -> Result<H1Set> {
    let homs = enumerate_homs(gamma, base)?;
    let orbits = hom_conjugacy_orbits(&homs);
    let mut class_of = HashMap::new();
    let mut classes = Vec::new();
    for (c, orbit) in orbits.iter().enumerate() {
        classes.push(homs[orbit[0]].image().to_vec());
        for &i in orbit {
            class_of.insert(homs[i].image().to_vec(), c);
        }
    }
    let parent = GammaGroup::trivial(gamma, base);
    let distinguished = class_of[&parent.trivial_cocycle()];
    Ok(H1Set {
        parent,
        classes,
        class_of,
        distinguished,
    })
}

/// Representatives only; see [`h1_trivial_action`].
pub fn trivial_action_representatives(
    gamma: &FiniteGroup,
    base: &FiniteGroup,
) -> Result<Vec<GroupHom>> {
    homs_up_to_conjugacy(gamma, base)
}

/// A homomorphism of Γ-groups commuting with the actions.
#[derive(Clone, Debug)]
pub struct EquivariantHom {
    source: GammaGroup,
    target: GammaGroup,
    hom: GroupHom,
}

impl EquivariantHom {
    pub fn new(source: &GammaGroup, target: &GammaGroup, hom: GroupHom) -> Result<EquivariantHom> {
        if source.gamma != target.gamma {
            return Err(Error::InvalidAction(
                "source and target are acted on by different groups".into(),
            ));
        }
        if hom.source() != source.base() || hom.target() != target.base() {
            return Err(Error::InvalidInput(
                "homomorphism does not match the Γ-groups".into(),
            ));
        }
        for g in source.gamma.elements() {
            for a in source.base.elements() {
                if hom.apply(source.act(g, a)) != target.act(g, hom.apply(a)) {
                    return Err(Error::InvalidAction(format!(
                        "f(a^γ) != f(a)^γ at γ = {g}, a = {a}"
                    )));
                }
            }
        }
        Ok(EquivariantHom {
            source: source.clone(),
            target: target.clone(),
            hom,
        })
    }

    pub fn identity(g: &GammaGroup) -> EquivariantHom {
        EquivariantHom {
            source: g.clone(),
            target: g.clone(),
            hom: GroupHom::identity(g.base()),
        }
    }

    pub fn source(&self) -> &GammaGroup {
        &self.source
    }

    pub fn target(&self) -> &GammaGroup {
        &self.target
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn apply_cocycle(&self, values: &[usize]) -> Vec<usize> {
        values.iter().map(|&v| self.hom.apply(v)).collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &EquivariantHom) -> EquivariantHom {
        EquivariantHom {
            source: self.source.clone(),
            target: next.target.clone(),
            hom: self.hom.then(&next.hom),
        }
    }
}

/// Induced map on `H^1` as an array of target class indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMap {
    pub images: Vec<usize>,
    pub target_distinguished: usize,
}

impl ClassMap {
    /// Source classes sent to the distinguished class.
    pub fn kernel(&self) -> Vec<usize> {
        kernel_of(self)
    }

    pub fn compose(&self, next: &ClassMap) -> ClassMap {
        ClassMap {
            images: self.images.iter().map(|&c| next.images[c]).collect(),
            target_distinguished: next.target_distinguished,
        }
    }
}

/// `[α] ↦ [f∘α]`, checked on every cocycle of every source class.
pub fn induced_map(f: &EquivariantHom, source: &H1Set, target: &H1Set) -> Result<ClassMap> {
    let mut images = vec![usize::MAX; source.len()];
    for (cocycle, class) in source.cocycles() {
        let image = f.apply_cocycle(cocycle);
        let t = target.class_of(&image).ok_or_else(|| {
            Error::InvalidInput("image of a cocycle is not a cocycle of the target".into())
        })?;
        if images[class] == usize::MAX {
            images[class] = t;
        } else if images[class] != t {
            return Err(Error::BijectionFailure(format!(
                "induced map not well defined on class {class}"
            )));
        }
    }
    Ok(ClassMap {
        images,
        target_distinguished: target.distinguished(),
    })
}

pub fn kernel_of(map: &ClassMap) -> Vec<usize> {
    map.images
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == map.target_distinguished)
        .map(|(i, _)| i)
        .collect()
}
