//! Fixed cosets, the orbit–kernel bijection, exact sequences of pointed sets,
//! and `H^2` with the connecting map for central abelian kernels.
//!
//! # `H^2` convention
//!
//! Written additively, the cocycle law `α(hg) = α(h)·α(g)^h` reads
//! `h·α(g) − α(hg) + α(h) = 0`, so the 1-cochain differential is
//!
//! ```text
//! (d¹f)(g, h) = g·f(h) − f(gh) + f(g)
//! ```
//!
//! and `(d⁰a)(g) = g·a − a` matches `α(g) = a⁻¹·β(g)·a^g`. The only
//! differential making `d²∘d¹ = 0` with this `d¹` is the standard one for
//! left modules:
//!
//! ```text
//! (d²c)(g, h, k) = g·c(h, k) − c(gh, k) + c(g, hk) − c(g, h)
//! ```
//!
//! The connecting map lifts a cocycle `γ` of the quotient to `β` and sets
//! `c(h, g) = β(hg)⁻¹·β(h)·β(g)^h`, which is `d¹β` in additive notation
//! and therefore lies in `ker d²`. Cochains are normalized
//! (`c(e, g) = c(g, e) = 0`); the lift sends the identity to the identity,
//! so `c` is normalized as well.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{induced_map, EquivariantHom, GammaGroup};
use crate::error::{size_check, Error, Result};
use crate::group::{cyclic_group, direct_product, FiniteGroup, Subgroup};
use crate::limits::limits;
use crate::smith::{smith_normal_form, smith_normal_form_mod, Matrix};

/// Left cosets `bA` of a Γ-stable subgroup with the induced action `(bA)^γ = b^γA`.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    parent: GammaGroup,
    sub: Subgroup,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
    gamma_action: Vec<Vec<usize>>,
}

/// The Γ-fixed cosets and their orbits under left translation by `B^Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedCosets {
    pub fixed: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

impl CosetSpace {
    pub fn new(parent: &GammaGroup, sub: &Subgroup) -> Result<CosetSpace> {
        if sub.parent() != parent.base() {
            return Err(Error::InvalidInput("subgroup of a different group".into()));
        }
        if let Some((element, gamma)) = parent.stability_witness(sub) {
            return Err(Error::NotStable { element, gamma });
        }
        let cosets = sub.left_cosets();
        let mut coset_of = vec![0; parent.base().order()];
        for (i, c) in cosets.iter().enumerate() {
            for &b in c {
                coset_of[b] = i;
            }
        }
        let gamma_action = parent
            .gamma()
            .elements()
            .map(|g| {
                cosets
                    .iter()
                    .map(|c| coset_of[parent.act(g, c[0])])
                    .collect()
            })
            .collect();
        Ok(CosetSpace {
            parent: parent.clone(),
            sub: sub.clone(),
            cosets,
            coset_of,
            gamma_action,
        })
    }

    pub fn parent(&self) -> &GammaGroup {
        &self.parent
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    /// Cosets ordered by least element; each is sorted.
    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn coset_of(&self, b: usize) -> usize {
        self.coset_of[b]
    }

    pub fn act(&self, gamma: usize, coset: usize) -> usize {
        self.gamma_action[gamma][coset]
    }

    pub fn is_fixed(&self, coset: usize) -> bool {
        self.parent
            .gamma()
            .elements()
            .all(|g| self.act(g, coset) == coset)
    }

    pub fn fixed_cosets(&self) -> FixedCosets {
        let fixed: Vec<usize> = (0..self.cosets.len())
            .filter(|&c| self.is_fixed(c))
            .collect();
        let invariants = self.parent.h0();
        let base = self.parent.base();
        let mut seen = vec![false; self.cosets.len()];
        let mut orbits = Vec::new();
        for &c in &fixed {
            if seen[c] {
                continue;
            }
            let rep = self.cosets[c][0];
            let mut orbit: Vec<usize> = invariants
                .members()
                .iter()
                .map(|&b| self.coset_of[base.mul(b, rep)])
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &o in &orbit {
                seen[o] = true;
            }
            orbits.push(orbit);
        }
        FixedCosets { fixed, orbits }
    }

    /// `α_γ = b⁻¹·b^γ` for the least element `b` of a fixed coset, as values
    /// indexed by the position of each element in the subgroup.
    pub fn coset_to_cocycle(&self, coset: usize) -> Result<Vec<usize>> {
        if !self.is_fixed(coset) {
            return Err(Error::InvalidInput(format!(
                "coset {coset} is not fixed by Γ"
            )));
        }
        let base = self.parent.base();
        let b = self.cosets[coset][0];
        let binv = base.inv(b);
        self.parent
            .gamma()
            .elements()
            .map(|g| {
                let v = base.mul(binv, self.parent.act(g, b));
                self.sub.index_of(v).ok_or(Error::NotStable {
                    element: b,
                    gamma: g,
                })
            })
            .collect()
    }
}

/// Matched pairs `(orbit of fixed cosets, kernel class)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub orbit_count: usize,
    pub kernel_size: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// Checks that `b ↦ (γ ↦ b⁻¹b^γ)` induces a bijection
/// `(B/A)^Γ / B^Γ → ker(H¹(Γ,A) → H¹(Γ,B))`.
pub fn orbit_kernel_bijection(parent: &GammaGroup, sub: &Subgroup) -> Result<BijectionReport> {
    let space = CosetSpace::new(parent, sub)?;
    let fixed = space.fixed_cosets();
    let (restricted, incl) = parent.restrict(sub)?;
    let h_a = restricted.h1()?;
    let h_b = parent.h1()?;
    let kernel = induced_map(&incl, &h_a, &h_b)?.kernel();
    let mut pairs = Vec::new();
    let mut used = vec![false; h_a.len()];
    for (i, orbit) in fixed.orbits.iter().enumerate() {
        let mut class = None;
        for &c in orbit {
            let cocycle = space.coset_to_cocycle(c)?;
            if !restricted.is_cocycle(&cocycle).0 {
                return Err(Error::BijectionFailure(format!(
                    "coset {c} gives a non-cocycle"
                )));
            }
            let k = h_a.class_of(&cocycle).expect("cocycle is enumerated");
            match class {
                None => class = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::BijectionFailure(format!(
                        "orbit {i} meets classes {prev} and {k}"
                    )));
                }
                _ => {}
            }
        }
        let k = class.expect("orbits are nonempty");
        if !kernel.contains(&k) {
            return Err(Error::BijectionFailure(format!(
                "orbit {i} maps to class {k} outside the kernel"
            )));
        }
        if used[k] {
            return Err(Error::BijectionFailure(format!(
                "class {k} is hit by two orbits"
            )));
        }
        used[k] = true;
        pairs.push((i, k));
    }
    if let Some(&k) = kernel.iter().find(|&&k| !used[k]) {
        return Err(Error::BijectionFailure(format!(
            "kernel class {k} is not hit"
        )));
    }
    Ok(BijectionReport {
        orbit_count: fixed.orbits.len(),
        kernel_size: kernel.len(),
        pairs,
    })
}

/// Image and kernel sizes at one node of an exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeReport {
    pub node: &'static str,
    pub image: usize,
    pub kernel: usize,
}

/// Checks exactness of
/// `1 → A^Γ → B^Γ → (B/A)^Γ → H¹(Γ,A) → H¹(Γ,B) → H¹(Γ,B/A)`
/// at the four interior nodes; fails with the first node that is not exact.
pub fn six_term_check(parent: &GammaGroup, normal: &Subgroup) -> Result<Vec<NodeReport>> {
    if let Some((g, n)) = normal.normality_witness() {
        return Err(Error::NotNormal { g, n });
    }
    let space = CosetSpace::new(parent, normal)?;
    let base = parent.base();
    let (restricted, incl) = parent.restrict(normal)?;
    let (quot, proj) = parent.quotient(normal)?;
    let h_a = restricted.h1()?;
    let h_b = parent.h1()?;
    let h_c = quot.h1()?;
    let i_map = induced_map(&incl, &h_a, &h_b)?;
    let p_map = induced_map(&proj, &h_b, &h_c)?;
    let b_inv = parent.h0();
    let a_inv = restricted.h0();
    let identity_coset = space.coset_of(base.identity());
    let mut out = Vec::new();
    let mut node =
        |name: &'static str, mut image: Vec<usize>, mut kernel: Vec<usize>| -> Result<()> {
            image.sort_unstable();
            image.dedup();
            kernel.sort_unstable();
            kernel.dedup();
            if image != kernel {
                return Err(Error::ExactnessFailure {
                    node: name.into(),
                    detail: format!("image {image:?} != kernel {kernel:?}"),
                });
            }
            out.push(NodeReport {
                node: name,
                image: image.len(),
                kernel: kernel.len(),
            });
            Ok(())
        };

    let image: Vec<usize> = a_inv
        .members()
        .iter()
        .map(|&a| normal.members()[a])
        .collect();
    let kernel: Vec<usize> = b_inv
        .members()
        .iter()
        .copied()
        .filter(|&b| space.coset_of(b) == identity_coset)
        .collect();
    node("B^Γ", image, kernel)?;

    let fixed = space.fixed_cosets();
    let image: Vec<usize> = b_inv.members().iter().map(|&b| space.coset_of(b)).collect();
    let mut to_h1a = HashMap::new();
    for &c in &fixed.fixed {
        let cocycle = space.coset_to_cocycle(c)?;
        to_h1a.insert(c, h_a.class_of(&cocycle).expect("cocycle is enumerated"));
    }
    let kernel: Vec<usize> = fixed
        .fixed
        .iter()
        .copied()
        .filter(|c| to_h1a[c] == h_a.distinguished())
        .collect();
    node("(B/A)^Γ", image, kernel)?;

    let image: Vec<usize> = to_h1a.values().copied().collect();
    node("H¹(A)", image, i_map.kernel())?;

    node("H¹(B)", i_map.images.clone(), p_map.kernel())?;
    Ok(out)
}

/// A finite abelian group `⊕ Z/n_i` with Γ acting by integer matrices, and
/// optionally the coordinates of the elements of a concrete group.
#[derive(Clone, Debug)]
pub struct AbelianPresentation {
    gamma: FiniteGroup,
    factors: Vec<i128>,
    matrices: Vec<Matrix>,
    embedding: Option<Embedding>,
}

#[derive(Clone, Debug)]
struct Embedding {
    coords: Vec<Vec<i128>>,
    element_of: HashMap<Vec<i128>, usize>,
}

fn reduce(x: i128, n: i128) -> i128 {
    x.rem_euclid(n)
}

impl AbelianPresentation {
    /// `matrices[γ]` acts on column vectors of coordinates: `γ·x = M_γ x`.
    pub fn new(
        gamma: &FiniteGroup,
        factors: Vec<i128>,
        matrices: Vec<Matrix>,
    ) -> Result<AbelianPresentation> {
        let k = factors.len();
        if factors.iter().any(|&n| n < 2) {
            return Err(Error::InvalidInput(
                "invariant factors must be at least 2".into(),
            ));
        }
        if matrices.len() != gamma.order()
            || matrices
                .iter()
                .any(|m| m.len() != k || m.iter().any(|r| r.len() != k))
        {
            return Err(Error::InvalidAction(
                "action matrices have wrong shape".into(),
            ));
        }
        let mut matrices = matrices;
        for m in &mut matrices {
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = reduce(*x, factors[i]);
                    if (*x * factors[j]) % factors[i] != 0 {
                        return Err(Error::InvalidAction(format!(
                            "entry ({i},{j}) is not a map Z/{} → Z/{}",
                            factors[j], factors[i]
                        )));
                    }
                }
            }
        }
        let p = AbelianPresentation {
            gamma: gamma.clone(),
            factors,
            matrices,
            embedding: None,
        };
        for j in 0..k {
            let e: Vec<i128> = (0..k).map(|i| i128::from(i == j)).collect();
            if p.apply(gamma.identity(), &e) != e {
                return Err(Error::InvalidAction(
                    "identity of Γ acts nontrivially".into(),
                ));
            }
            for h in gamma.elements() {
                for g in gamma.elements() {
                    if p.apply(gamma.mul(h, g), &e) != p.apply(h, &p.apply(g, &e)) {
                        return Err(Error::InvalidAction(format!(
                            "matrices do not compose at ({h},{g})"
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Presents an abelian Γ-group by invariant factors. Coordinates of each
    /// element are kept so that cochains can be translated back and forth.
    pub fn from_gamma_group(g: &GammaGroup) -> Result<AbelianPresentation> {
        let base = g.base();
        if !base.is_abelian() {
            return Err(Error::InvalidInput("base group is not abelian".into()));
        }
        let gens = base.generators();
        let orders: Vec<usize> = gens.iter().map(|&s| base.element_order(s)).collect();
        let boxsize = orders
            .iter()
            .fold(1u128, |a, &o| a.saturating_mul(o as u128));
        size_check(
            "abelian presentation box",
            boxsize,
            limits().max_enumeration,
        )?;
        let r = gens.len();
        let mut first: Vec<Option<Vec<i128>>> = vec![None; base.order()];
        let mut relations: Vec<Vec<i128>> = Vec::new();
        for (i, &o) in orders.iter().enumerate() {
            relations.push((0..r).map(|j| if i == j { o as i128 } else { 0 }).collect());
        }
        let mut c = vec![0usize; r];
        loop {
            let mut x = base.identity();
            for (i, &ci) in c.iter().enumerate() {
                x = base.mul(x, base.pow(gens[i], ci));
            }
            let v: Vec<i128> = c.iter().map(|&ci| ci as i128).collect();
            match &first[x] {
                None => first[x] = Some(v),
                Some(w) => relations.push(v.iter().zip(w).map(|(a, b)| a - b).collect()),
            }
            let mut pos = 0;
            while pos < r {
                c[pos] += 1;
                if c[pos] < orders[pos] {
                    break;
                }
                c[pos] = 0;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
        let m: Matrix = (0..r)
            .map(|i| relations.iter().map(|rel| rel[i]).collect())
            .collect();
        let snf = smith_normal_form(&m)?;
        let diag = snf.diagonal();
        let keep: Vec<usize> = (0..r).filter(|&i| diag[i] != 1).collect();
        let factors: Vec<i128> = keep.iter().map(|&i| diag[i]).collect();
        let to_new = |old: &[i128]| -> Vec<i128> {
            keep.iter()
                .map(|&i| reduce((0..r).map(|j| snf.u[i][j] * old[j]).sum(), diag[i]))
                .collect()
        };
        let coords: Vec<Vec<i128>> = first
            .iter()
            .map(|v| to_new(v.as_ref().expect("generators generate")))
            .collect();
        let element_of: HashMap<Vec<i128>, usize> = coords
            .iter()
            .enumerate()
            .map(|(x, v)| (v.clone(), x))
            .collect();
        if element_of.len() != base.order() {
            return Err(Error::InvalidInput(
                "abelian presentation is not injective".into(),
            ));
        }
        // the new generator i is Σ_j U⁻¹[j][i] · gens[j]
        let new_gens: Vec<usize> = keep
            .iter()
            .map(|&i| {
                let mut x = base.identity();
                for (j, &s) in gens.iter().enumerate() {
                    let e = reduce(snf.u_inv[j][i], orders[j] as i128) as usize;
                    x = base.mul(x, base.pow(s, e));
                }
                x
            })
            .collect();
        let k = keep.len();
        let matrices: Vec<Matrix> = g
            .gamma()
            .elements()
            .map(|gm| {
                let cols: Vec<&Vec<i128>> =
                    new_gens.iter().map(|&s| &coords[g.act(gm, s)]).collect();
                (0..k)
                    .map(|i| (0..k).map(|j| cols[j][i]).collect())
                    .collect()
            })
            .collect();
        let mut p = AbelianPresentation::new(g.gamma(), factors, matrices)?;
        for a in base.elements() {
            for gm in g.gamma().elements() {
                if p.apply(gm, &coords[a]) != coords[g.act(gm, a)] {
                    return Err(Error::InvalidAction(
                        "presentation does not match the action".into(),
                    ));
                }
            }
        }
        p.embedding = Some(Embedding { coords, element_of });
        Ok(p)
    }

    /// The concrete Γ-group `⊕ Z/n_i` (elements in little-endian mixed radix).
    pub fn to_gamma_group(&self) -> Result<GammaGroup> {
        let mut group = crate::group::trivial_group();
        for &n in &self.factors {
            group = direct_product(&group, &cyclic_group(n as usize));
        }
        let coords = |mut x: usize| -> Vec<i128> {
            let mut v = vec![0; self.factors.len()];
            for (i, &n) in self.factors.iter().enumerate().rev() {
                v[i] = (x % n as usize) as i128;
                x /= n as usize;
            }
            v
        };
        let index = |v: &[i128]| -> usize {
            v.iter()
                .zip(&self.factors)
                .fold(0usize, |a, (&x, &n)| a * n as usize + x as usize)
        };
        GammaGroup::from_fn(&self.gamma, &group, |g, x| {
            index(&self.apply(g, &coords(x)))
        })
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn order(&self) -> i128 {
        self.factors.iter().product()
    }

    pub fn matrix(&self, gamma: usize) -> &Matrix {
        &self.matrices[gamma]
    }

    pub fn apply(&self, gamma: usize, x: &[i128]) -> Vec<i128> {
        let m = &self.matrices[gamma];
        (0..self.factors.len())
            .map(|i| reduce((0..x.len()).map(|j| m[i][j] * x[j]).sum(), self.factors[i]))
            .collect()
    }

    /// Coordinates of an element of the presented group.
    pub fn coords(&self, element: usize) -> Option<&[i128]> {
        self.embedding
            .as_ref()
            .and_then(|e| e.coords.get(element))
            .map(Vec::as_slice)
    }

    pub fn element(&self, coords: &[i128]) -> Option<usize> {
        self.embedding
            .as_ref()
            .and_then(|e| e.element_of.get(coords).copied())
    }
}

/// A normalized 2-cochain: `values[g·|Γ| + h]` are the coordinates of `c(g, h)`.
pub type Cochain2 = Vec<Vec<i128>>;

/// Checks the 2-cocycle identity on all triples.
pub fn is_2cocycle(a: &AbelianPresentation, c: &Cochain2) -> bool {
    let gamma = &a.gamma;
    let n = gamma.order();
    let k = a.factors.len();
    if c.len() != n * n || c.iter().any(|v| v.len() != k) {
        return false;
    }
    for g in gamma.elements() {
        for h in gamma.elements() {
            let gh = gamma.mul(g, h);
            for l in gamma.elements() {
                let hl = gamma.mul(h, l);
                let gc = a.apply(g, &c[h * n + l]);
                for i in 0..k {
                    let v = gc[i] - c[gh * n + l][i] + c[g * n + hl][i] - c[g * n + h][i];
                    if reduce(v, a.factors[i]) != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `H²(Γ, A) ≅ ⊕ Z/d_i`, with generators and a class map.
#[derive(Clone, Debug)]
pub struct H2Group {
    module: AbelianPresentation,
    pos: Vec<Option<usize>>,
    modulus: i128,
    v_inv: Matrix,
    steps: Vec<i128>,
    u: Matrix,
    keep: Vec<usize>,
    factors: Vec<i128>,
    generators: Vec<Cochain2>,
}

impl H2Group {
    pub fn module(&self) -> &AbelianPresentation {
        &self.module
    }

    /// Invariant factors, all different from 1.
    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn order(&self) -> i128 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Normalized 2-cocycles whose classes are the standard generators.
    pub fn generators(&self) -> &[Cochain2] {
        &self.generators
    }

    fn flatten(&self, c: &Cochain2) -> Result<Vec<i128>> {
        let n = self.module.gamma.order();
        let k = self.module.factors.len();
        if c.len() != n * n || c.iter().any(|v| v.len() != k) {
            return Err(Error::InvalidInput("cochain has wrong shape".into()));
        }
        let m = n - 1;
        let mut x = vec![0i128; m * m * k];
        for g in 0..n {
            for h in 0..n {
                let v = &c[g * n + h];
                match (self.pos[g], self.pos[h]) {
                    (Some(pg), Some(ph)) => {
                        for i in 0..k {
                            x[(pg * m + ph) * k + i] = reduce(v[i], self.module.factors[i]);
                        }
                    }
                    _ => {
                        if (0..k).any(|i| reduce(v[i], self.module.factors[i]) != 0) {
                            return Err(Error::InvalidInput(format!(
                                "cochain is not normalized at ({g},{h})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(x)
    }

    /// Coordinates in `ker d² ≅ ⊕ Z/g_i`; `None` when `x` is not a cocycle.
    fn kernel_coords(&self, x: &[i128]) -> Option<Vec<i128>> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, &step)| {
                let z = reduce(
                    (0..x.len()).map(|j| self.v_inv[i][j] * x[j]).sum(),
                    self.modulus,
                );
                (z % step == 0).then_some(z / step)
            })
            .collect()
    }

    /// Class of a normalized 2-cocycle as a vector in `⊕ Z/d_i`.
    pub fn class_of(&self, c: &Cochain2) -> Result<Vec<i128>> {
        let x = self.flatten(c)?;
        let y = self
            .kernel_coords(&x)
            .ok_or_else(|| Error::InvalidInput("cochain is not a 2-cocycle".into()))?;
        Ok(self
            .keep
            .iter()
            .zip(&self.factors)
            .map(|(&i, &d)| reduce((0..y.len()).map(|j| self.u[i][j] * y[j]).sum(), d))
            .collect())
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Computes `H²(Γ, A)` from normalized cochains.
///
/// Cochains are lifted to `(Z/N)^c` with `N` the exponent of `A`, so every
/// subgroup in sight is a `Z/N`-module. `ker d²` is read off a Smith form of
/// `d²` (row `r` scaled by `N/n_r`), and `H²` is the cokernel of the
/// coboundaries and the coordinate moduli inside it.
pub fn h2_central(a: &AbelianPresentation) -> Result<H2Group> {
    let gamma = &a.gamma;
    let k = a.factors.len();
    let nonid: Vec<usize> = gamma
        .elements()
        .filter(|&g| g != gamma.identity())
        .collect();
    let mut pos = vec![None; gamma.order()];
    for (i, &g) in nonid.iter().enumerate() {
        pos[g] = Some(i);
    }
    let m = nonid.len();
    let c2 = m * m * k;
    let c3 = m * m * m * k;
    size_check(
        "2-cochain differential",
        (c3 as u128) * (c3.max(c2) as u128),
        limits().max_enumeration,
    )?;
    let modulus = a.factors.iter().fold(1i128, |l, &n| l / gcd(l, n) * n);
    let coord_mod = |idx: usize| a.factors[idx % k];
    if c2 == 0 {
        return Ok(H2Group {
            module: a.clone(),
            pos,
            modulus,
            v_inv: Vec::new(),
            steps: Vec::new(),
            u: Vec::new(),
            keep: Vec::new(),
            factors: Vec::new(),
            generators: Vec::new(),
        });
    }

    // d², row (g,h,l,i) scaled by N/n_i; column (h,l,j)
    let mut d2 = vec![vec![0i128; c2]; c3];
    for (pg, &g) in nonid.iter().enumerate() {
        for (ph, &h) in nonid.iter().enumerate() {
            let gh = gamma.mul(g, h);
            for (pl, &l) in nonid.iter().enumerate() {
                let hl = gamma.mul(h, l);
                for i in 0..k {
                    let row = &mut d2[((pg * m + ph) * m + pl) * k + i];
                    for j in 0..k {
                        row[(ph * m + pl) * k + j] += a.matrices[g][i][j];
                    }
                    if let Some(p) = pos[gh] {
                        row[(p * m + pl) * k + i] -= 1;
                    }
                    if let Some(p) = pos[hl] {
                        row[(pg * m + p) * k + i] += 1;
                    }
                    row[(pg * m + ph) * k + i] -= 1;
                    let scale = modulus / a.factors[i];
                    row.iter_mut()
                        .for_each(|x| *x = reduce(*x * scale, modulus));
                }
            }
        }
    }
    let kernel_snf = smith_normal_form_mod(&d2, modulus)?;
    let diag = kernel_snf.diagonal();
    // z = V⁻¹x is a cocycle iff d_i·z_i = 0, i.e. z_i ∈ (N/gcd(d_i,N))·Z/N
    let steps: Vec<i128> = (0..c2)
        .map(|i| if i < diag.len() { modulus / diag[i] } else { 1 })
        .collect();
    let mut h = H2Group {
        module: a.clone(),
        pos,
        modulus,
        v_inv: kernel_snf.v_inv,
        steps,
        u: Vec::new(),
        keep: Vec::new(),
        factors: Vec::new(),
        generators: Vec::new(),
    };

    // relations: coboundaries of e_j at each argument, and the coordinate moduli
    let mut relations: Vec<Vec<i128>> = Vec::new();
    for &f in &nonid {
        for j in 0..k {
            // d¹f(g,h) = g·f(h) − f(gh) + f(g)
            let mut x = vec![0i128; c2];
            for (pg, &g) in nonid.iter().enumerate() {
                for (ph, &hh) in nonid.iter().enumerate() {
                    let base = (pg * m + ph) * k;
                    if hh == f {
                        for i in 0..k {
                            x[base + i] += a.matrices[g][i][j];
                        }
                    }
                    if gamma.mul(g, hh) == f {
                        x[base + j] -= 1;
                    }
                    if g == f {
                        x[base + j] += 1;
                    }
                }
            }
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = reduce(*xi, coord_mod(i));
            }
            relations.push(x);
        }
    }
    for i in 0..c2 {
        let mut x = vec![0i128; c2];
        x[i] = coord_mod(i);
        relations.push(x);
    }
    let mut columns: Vec<Vec<i128>> = relations
        .iter()
        .map(|x| {
            h.kernel_coords(x)
                .ok_or_else(|| Error::InvalidInput("coboundary outside ker d² (internal)".into()))
        })
        .collect::<Result<_>>()?;
    for i in 0..c2 {
        let mut y = vec![0i128; c2];
        y[i] = modulus / h.steps[i];
        columns.push(y);
    }
    let rel: Matrix = (0..c2)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let snf = smith_normal_form_mod(&rel, modulus)?;
    let diag = snf.diagonal();
    h.keep = (0..c2).filter(|&i| diag[i] != 1).collect();
    h.factors = h.keep.iter().map(|&i| diag[i]).collect();
    h.u = snf.u;
    let n = gamma.order();
    for &i in &h.keep {
        let z: Vec<i128> = (0..c2)
            .map(|j| reduce(snf.u_inv[j][i] * h.steps[j], modulus))
            .collect();
        let x: Vec<i128> = (0..c2)
            .map(|l| {
                reduce(
                    (0..c2).map(|j| kernel_snf.v[l][j] * z[j]).sum(),
                    coord_mod(l),
                )
            })
            .collect();
        let mut c: Cochain2 = vec![vec![0; k]; n * n];
        for (pg, &g) in nonid.iter().enumerate() {
            for (ph, &hh) in nonid.iter().enumerate() {
                for l in 0..k {
                    c[g * n + hh][l] = x[(pg * m + ph) * k + l];
                }
            }
        }
        if !is_2cocycle(a, &c) {
            return Err(Error::InvalidInput(
                "H² generator fails the cocycle identity (internal)".into(),
            ));
        }
        h.generators.push(c);
    }
    Ok(h)
}

/// `1 → A → B → C → 1` with `A` central in `B` and Γ-stable.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    b: GammaGroup,
    a_sub: Subgroup,
    a: GammaGroup,
    c: GammaGroup,
    incl: EquivariantHom,
    proj: EquivariantHom,
    presentation: AbelianPresentation,
    h2: H2Group,
    cosets: Vec<Vec<usize>>,
}

/// Which preimage of each coset a lift uses (the identity coset always lifts to `e`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Least,
    Greatest,
}

/// Per-class results of the connecting-map checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub h1_quotient: usize,
    pub h2_factors: Vec<i128>,
    pub delta: Vec<Vec<i128>>,
    pub lifts: Vec<bool>,
}

impl CentralExtension {
    pub fn new(b: &GammaGroup, a: &Subgroup) -> Result<CentralExtension> {
        let base = b.base();
        for &x in a.members() {
            for y in base.elements() {
                if base.mul(x, y) != base.mul(y, x) {
                    return Err(Error::InvalidInput(format!("element {x} is not central")));
                }
            }
        }
        let (a_gg, incl) = b.restrict(a)?;
        let (c, proj) = b.quotient(a)?;
        let presentation = AbelianPresentation::from_gamma_group(&a_gg)?;
        let h2 = h2_central(&presentation)?;
        let mut cosets = vec![Vec::new(); c.base().order()];
        for x in base.elements() {
            cosets[proj.hom().apply(x)].push(x);
        }
        Ok(CentralExtension {
            b: b.clone(),
            a_sub: a.clone(),
            a: a_gg,
            c,
            incl,
            proj,
            presentation,
            h2,
            cosets,
        })
    }

    pub fn kernel(&self) -> &GammaGroup {
        &self.a
    }

    pub fn middle(&self) -> &GammaGroup {
        &self.b
    }

    pub fn quotient(&self) -> &GammaGroup {
        &self.c
    }

    pub fn inclusion(&self) -> &EquivariantHom {
        &self.incl
    }

    pub fn projection(&self) -> &EquivariantHom {
        &self.proj
    }

    pub fn h2(&self) -> &H2Group {
        &self.h2
    }

    fn lift(&self, x: usize, section: Section) -> usize {
        if x == self.c.base().identity() {
            return self.b.base().identity();
        }
        match section {
            Section::Least => self.cosets[x][0],
            Section::Greatest => *self.cosets[x].last().expect("nonempty coset"),
        }
    }

    /// The 2-cocycle `c(h,g) = β(hg)⁻¹·β(h)·β(g)^h` of a lift `β` of `γ`.
    pub fn delta_cochain(&self, gamma_cocycle: &[usize], section: Section) -> Result<Cochain2> {
        let (ok, _) = self.c.is_cocycle(gamma_cocycle);
        if !ok {
            return Err(Error::InvalidInput("not a cocycle of the quotient".into()));
        }
        let beta: Vec<usize> = gamma_cocycle
            .iter()
            .map(|&x| self.lift(x, section))
            .collect();
        let g = self.b.gamma();
        let base = self.b.base();
        let n = g.order();
        let mut c = vec![Vec::new(); n * n];
        for h in g.elements() {
            for k in g.elements() {
                let v = base.mul(
                    base.mul(base.inv(beta[g.mul(h, k)]), beta[h]),
                    self.b.act(h, beta[k]),
                );
                let idx = self.a_sub.index_of(v).ok_or_else(|| {
                    Error::InvalidInput("lift defect leaves the kernel (internal)".into())
                })?;
                c[h * n + k] = self.presentation.coords(idx).expect("embedded").to_vec();
            }
        }
        Ok(c)
    }

    pub fn delta(&self, gamma_cocycle: &[usize]) -> Result<Vec<i128>> {
        let c = self.delta_cochain(gamma_cocycle, Section::Least)?;
        self.h2.class_of(&c)
    }

    /// Checks, for every class of `H¹(Γ, C)`: `δ` agrees on both sections,
    /// on every cocycle of the class and on a seeded random representative;
    /// and `δ[γ] = 0` exactly when `[γ]` comes from `H¹(Γ, B)`.
    pub fn exactness_check(&self, seed: u64) -> Result<DeltaReport> {
        let h_b = self.b.h1()?;
        let h_c = self.c.h1()?;
        let image = induced_map(&self.proj, &h_b, &h_c)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut delta = Vec::new();
        let mut lifts = Vec::new();
        let zero = vec![0i128; self.h2.factors().len()];
        for class in 0..h_c.len() {
            let rep = h_c.representative(class);
            let d = self.delta(rep)?;
            let other = self
                .h2
                .class_of(&self.delta_cochain(rep, Section::Greatest)?)?;
            if other != d {
                return Err(Error::ExactnessFailure {
                    node: "H²(A)".into(),
                    detail: format!("δ depends on the lift for class {class}"),
                });
            }
            for member in h_c.class_members(class) {
                if self.delta(member)? != d {
                    return Err(Error::ExactnessFailure {
                        node: "H²(A)".into(),
                        detail: format!("δ is not constant on class {class}"),
                    });
                }
            }
            let a = rng.gen_range(0..self.c.base().order());
            let twisted = self.c.twist(a, rep);
            if self.delta(&twisted)? != d {
                return Err(Error::ExactnessFailure {
                    node: "H²(A)".into(),
                    detail: format!("δ differs on a cohomologous representative of class {class}"),
                });
            }
            let lifted = image.images.contains(&class);
            if lifted != (d == zero) {
                return Err(Error::ExactnessFailure {
                    node: "H¹(C)".into(),
                    detail: format!("class {class}: lifts = {lifted}, δ = {d:?}"),
                });
            }
            delta.push(d);
            lifts.push(lifted);
        }
        Ok(DeltaReport {
            h1_quotient: h_c.len(),
            h2_factors: self.h2.factors().to_vec(),
            delta,
            lifts,
        })
    }
}
