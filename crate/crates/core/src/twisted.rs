//! Twisted semiactions, principal homogeneous spaces and induced Γ-groups.
//!
//! A twisted semiaction satisfies `ρ(hg, σ) = h^σ·ρ(g, σ)`, so it is fixed by
//! its offsets `c_σ = ρ(1, σ)` through `ρ(g, σ) = g^σ·c_σ`. With actions
//! composing as `(g^σ)^λ = g^(λσ)` (see [`crate::cohomology`]), `ρ` is an
//! action exactly when `ρ(ρ(g, σ), λ) = ρ(g, λσ)`, which unwinds to
//! `c_(λσ) = c_σ^λ·c_λ`. That is the cocycle law for `α = c⁻¹` taken
//! pointwise, and isomorphisms `x ↦ x·b` of the resulting spaces replace
//! `α` by `b⁻¹·α(σ)·b^σ`.
//!
//! The induced group of an `H`-group `G` consists of the maps `φ: Γ → G`
//! with `φ(σλ) = φ(σ)^(λ⁻¹)` for `λ ∈ H`, and `Γ` acts by
//! `(τ·φ)(σ) = φ(τ⁻¹σ)`. Both choices are the ones compatible with the
//! composition rule above; evaluation at the identity then carries
//! `H¹(Γ, G')` onto `H¹(H, G)`.

use std::collections::{HashMap, HashSet};

use crate::cohomology::{GammaGroup, H1Set};
use crate::error::{size_check, Error, Result};
use crate::group::{power_group, trivial_group, FiniteGroup, Subgroup};
use crate::limits::limits;

/// A twisted semiaction stored by its offsets `σ ↦ ρ(1, σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSemiaction {
    parent: GammaGroup,
    offsets: Vec<usize>,
}

impl TwistedSemiaction {
    /// The untwisted action `ρ₀(g, σ) = g^σ`.
    pub fn standard(parent: &GammaGroup) -> TwistedSemiaction {
        TwistedSemiaction {
            parent: parent.clone(),
            offsets: parent.trivial_cocycle(),
        }
    }

    pub fn from_offsets(parent: &GammaGroup, offsets: Vec<usize>) -> Result<TwistedSemiaction> {
        if offsets.len() != parent.gamma().order()
            || offsets.iter().any(|&c| c >= parent.base().order())
        {
            return Err(Error::InvalidInput(
                "offset array does not match the Γ-group".into(),
            ));
        }
        if offsets[parent.gamma().identity()] != parent.base().identity() {
            return Err(Error::InvalidInput("ρ(1, 1) must be 1".into()));
        }
        Ok(TwistedSemiaction {
            parent: parent.clone(),
            offsets,
        })
    }

    /// Validates a full table `rho[g][σ]` against the semiaction law.
    pub fn from_table(parent: &GammaGroup, rho: &[Vec<usize>]) -> Result<TwistedSemiaction> {
        let (gamma, base) = (parent.gamma(), parent.base());
        if rho.len() != base.order() || rho.iter().any(|r| r.len() != gamma.order()) {
            return Err(Error::InvalidInput("ρ table has wrong shape".into()));
        }
        for h in base.elements() {
            for g in base.elements() {
                for s in gamma.elements() {
                    if rho[base.mul(h, g)][s] != base.mul(parent.act(s, h), rho[g][s]) {
                        return Err(Error::InvalidInput(format!(
                            "ρ(hg,σ) != h^σ·ρ(g,σ) at h={h}, g={g}, σ={s}"
                        )));
                    }
                }
            }
        }
        let offsets = gamma.elements().map(|s| rho[base.identity()][s]).collect();
        TwistedSemiaction::from_offsets(parent, offsets)
    }

    /// The semiaction attached to a cocycle: `ρ(g, σ) = g^σ·α(σ)⁻¹`.
    pub fn from_cocycle(parent: &GammaGroup, alpha: &[usize]) -> Result<TwistedSemiaction> {
        let offsets = alpha.iter().map(|&a| parent.base().inv(a)).collect();
        TwistedSemiaction::from_offsets(parent, offsets)
    }

    /// `α(σ) = ρ(1, σ)⁻¹`.
    pub fn to_cocycle(&self) -> Vec<usize> {
        self.offsets
            .iter()
            .map(|&c| self.parent.base().inv(c))
            .collect()
    }

    pub fn parent(&self) -> &GammaGroup {
        &self.parent
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    #[inline]
    pub fn rho(&self, g: usize, sigma: usize) -> usize {
        self.parent
            .base()
            .mul(self.parent.act(sigma, g), self.offsets[sigma])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.parent
            .base()
            .elements()
            .map(|g| {
                self.parent
                    .gamma()
                    .elements()
                    .map(|s| self.rho(g, s))
                    .collect()
            })
            .collect()
    }

    /// Checks `ρ(ρ(g, σ), λ) = ρ(g, λσ)` everywhere; returns the first failing `(g, σ, λ)`.
    pub fn is_twisted_action(&self) -> (bool, Option<(usize, usize, usize)>) {
        let gamma = self.parent.gamma();
        for g in self.parent.base().elements() {
            for s in gamma.elements() {
                for l in gamma.elements() {
                    if self.rho(self.rho(g, s), l) != self.rho(g, gamma.mul(l, s)) {
                        return (false, Some((g, s, l)));
                    }
                }
            }
        }
        (true, None)
    }

    /// `G` with left multiplication and the Γ-action `x ↦ ρ(x, σ)`.
    pub fn space(&self) -> Result<GSpace> {
        let base = self.parent.base();
        let g_action = base
            .elements()
            .map(|g| base.elements().map(|x| base.mul(g, x)).collect())
            .collect();
        let gamma_action = self
            .parent
            .gamma()
            .elements()
            .map(|s| base.elements().map(|x| self.rho(x, s)).collect())
            .collect();
        GSpace::new(&self.parent, g_action, gamma_action)
    }
}

/// A finite set with compatible actions of `G` and `Γ`: `g^σ ∗ x^σ = (g ∗ x)^σ`.
#[derive(Clone, Debug)]
pub struct GSpace {
    parent: GammaGroup,
    size: usize,
    g_action: Vec<Vec<usize>>,
    gamma_action: Vec<Vec<usize>>,
}

impl GSpace {
    /// `g_action[g][x] = g ∗ x`, `gamma_action[σ][x] = x^σ`.
    pub fn new(
        parent: &GammaGroup,
        g_action: Vec<Vec<usize>>,
        gamma_action: Vec<Vec<usize>>,
    ) -> Result<GSpace> {
        let (gamma, base) = (parent.gamma(), parent.base());
        let size = g_action.first().map_or(0, Vec::len);
        if g_action.len() != base.order()
            || gamma_action.len() != gamma.order()
            || g_action
                .iter()
                .chain(&gamma_action)
                .any(|r| r.len() != size || r.iter().any(|&x| x >= size))
        {
            return Err(Error::InvalidInput("space actions have wrong shape".into()));
        }
        for x in 0..size {
            if g_action[base.identity()][x] != x || gamma_action[gamma.identity()][x] != x {
                return Err(Error::InvalidAction(
                    "identity acts nontrivially on the space".into(),
                ));
            }
            for g in base.elements() {
                for h in base.elements() {
                    if g_action[base.mul(g, h)][x] != g_action[g][g_action[h][x]] {
                        return Err(Error::InvalidAction("G does not act on the space".into()));
                    }
                }
            }
            for s in gamma.elements() {
                for l in gamma.elements() {
                    if gamma_action[gamma.mul(l, s)][x] != gamma_action[l][gamma_action[s][x]] {
                        return Err(Error::InvalidAction("Γ does not act on the space".into()));
                    }
                }
                for g in base.elements() {
                    if g_action[parent.act(s, g)][gamma_action[s][x]]
                        != gamma_action[s][g_action[g][x]]
                    {
                        return Err(Error::InvalidAction(format!(
                            "g^σ ∗ x^σ != (g ∗ x)^σ at g={g}, σ={s}, x={x}"
                        )));
                    }
                }
            }
        }
        Ok(GSpace {
            parent: parent.clone(),
            size,
            g_action,
            gamma_action,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn g_act(&self, g: usize, x: usize) -> usize {
        self.g_action[g][x]
    }

    pub fn gamma_act(&self, s: usize, x: usize) -> usize {
        self.gamma_action[s][x]
    }

    pub fn is_transitive(&self) -> bool {
        self.size > 0 && {
            let orbit: HashSet<usize> = self.g_action.iter().map(|r| r[0]).collect();
            orbit.len() == self.size
        }
    }

    pub fn is_free(&self) -> bool {
        let e = self.parent.base().identity();
        (0..self.size).all(|x| {
            self.parent
                .base()
                .elements()
                .all(|g| g == e || self.g_action[g][x] != x)
        })
    }

    pub fn is_principal(&self) -> bool {
        self.is_transitive() && self.is_free()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.gamma_action.iter().all(|r| r[x] == x))
            .collect()
    }

    /// A bijection commuting with both actions, for principal spaces: the
    /// image of point 0 determines the map, so all `|G|` choices are tried.
    pub fn find_isomorphism(&self, other: &GSpace) -> Option<Vec<usize>> {
        if self.parent != other.parent
            || self.size != other.size
            || !self.is_principal()
            || !other.is_principal()
        {
            return None;
        }
        let base = self.parent.base();
        let mut via = vec![0usize; self.size];
        for g in base.elements() {
            via[self.g_action[g][0]] = g;
        }
        'target: for y in 0..other.size {
            let f: Vec<usize> = (0..self.size).map(|x| other.g_action[via[x]][y]).collect();
            for s in self.parent.gamma().elements() {
                for x in 0..self.size {
                    if f[self.gamma_action[s][x]] != other.gamma_action[s][f[x]] {
                        continue 'target;
                    }
                }
            }
            return Some(f);
        }
        None
    }
}

/// All twisted actions, by exhaustive search over offset vectors with `c_e = e`.
pub fn twisted_actions(parent: &GammaGroup) -> Result<Vec<TwistedSemiaction>> {
    let (gamma, base) = (parent.gamma(), parent.base());
    let free = gamma.order() - 1;
    let total = (base.order() as u128)
        .checked_pow(free as u32)
        .unwrap_or(u128::MAX);
    size_check("twisted semiactions", total, limits().max_enumeration)?;
    let others: Vec<usize> = gamma
        .elements()
        .filter(|&s| s != gamma.identity())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; free];
    loop {
        let mut offsets = vec![base.identity(); gamma.order()];
        for (i, &s) in others.iter().enumerate() {
            offsets[s] = choice[i];
        }
        let rho = TwistedSemiaction {
            parent: parent.clone(),
            offsets,
        };
        if rho.is_twisted_action().0 {
            out.push(rho);
        }
        let mut pos = 0;
        while pos < free {
            choice[pos] += 1;
            if choice[pos] < base.order() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == free {
            break;
        }
    }
    out.sort_by(|a, b| a.offsets.cmp(&b.offsets));
    Ok(out)
}

/// Twisted actions paired with the cocycles of the cohomology module.
#[derive(Clone, Debug)]
pub struct TwistCorrespondence {
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Pairs every twisted action with `α = c⁻¹` and checks that this is a
/// round-tripping bijection onto the enumerated cocycles.
pub fn cocycle_twist_correspondence(parent: &GammaGroup) -> Result<TwistCorrespondence> {
    let actions = twisted_actions(parent)?;
    let cocycles: HashSet<Vec<usize>> = parent.cocycles()?.into_iter().collect();
    let mut pairs = Vec::new();
    let mut hit = HashSet::new();
    for rho in &actions {
        let alpha = rho.to_cocycle();
        if !cocycles.contains(&alpha) {
            return Err(Error::BijectionFailure(format!(
                "twisted action {:?} gives a non-cocycle",
                rho.offsets
            )));
        }
        if TwistedSemiaction::from_cocycle(parent, &alpha)? != *rho {
            return Err(Error::BijectionFailure("round trip failed".into()));
        }
        hit.insert(alpha.clone());
        pairs.push((rho.offsets.clone(), alpha));
    }
    if hit.len() != cocycles.len() || actions.len() != cocycles.len() {
        return Err(Error::BijectionFailure(format!(
            "{} twisted actions against {} cocycles",
            actions.len(),
            cocycles.len()
        )));
    }
    Ok(TwistCorrespondence { pairs })
}

/// Twisted actions grouped into isomorphism classes of their spaces,
/// computed without reference to cohomology.
pub fn twisted_action_classes(parent: &GammaGroup) -> Result<Vec<Vec<TwistedSemiaction>>> {
    let actions = twisted_actions(parent)?;
    let mut classes: Vec<(GSpace, Vec<TwistedSemiaction>)> = Vec::new();
    for rho in actions {
        let space = rho.space()?;
        match classes
            .iter_mut()
            .find(|(rep, _)| rep.find_isomorphism(&space).is_some())
        {
            Some((_, members)) => members.push(rho),
            None => classes.push((space, vec![rho])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

/// One principal homogeneous space per class of `H¹(Γ, G)`.
#[derive(Clone, Debug)]
pub struct PhsClassification {
    pub h1: H1Set,
    pub spaces: Vec<GSpace>,
    pub twisted_classes: usize,
}

/// Realizes every class as a twisted space on `G`; checks that spaces from
/// different classes are not isomorphic, spaces from one class are, and that
/// the isomorphism classes of all twisted actions match `H¹` in number.
pub fn classify_phs(parent: &GammaGroup) -> Result<PhsClassification> {
    let h1 = parent.h1()?;
    let mut spaces = Vec::new();
    for rep in h1.representatives() {
        let space = TwistedSemiaction::from_cocycle(parent, rep)?.space()?;
        if !space.is_principal() {
            return Err(Error::BijectionFailure(
                "twisted space is not principal".into(),
            ));
        }
        spaces.push(space);
    }
    for i in 0..spaces.len() {
        for j in i + 1..spaces.len() {
            if spaces[i].find_isomorphism(&spaces[j]).is_some() {
                return Err(Error::BijectionFailure(format!(
                    "classes {i} and {j} give isomorphic spaces"
                )));
            }
        }
    }
    for (member, class) in h1.cocycles() {
        let space = TwistedSemiaction::from_cocycle(parent, member)?.space()?;
        if spaces[class].find_isomorphism(&space).is_none() {
            return Err(Error::BijectionFailure(format!(
                "a cocycle of class {class} gives a different space"
            )));
        }
    }
    let twisted_classes = twisted_action_classes(parent)?.len();
    if twisted_classes != h1.len() {
        return Err(Error::BijectionFailure(format!(
            "{twisted_classes} twisted actions up to isomorphism against {} classes",
            h1.len()
        )));
    }
    Ok(PhsClassification {
        h1,
        spaces,
        twisted_classes,
    })
}

/// The induced Γ-group `G'` of an `H`-group `G`, stored as `G^(Γ:H)` through
/// the values at the left coset representatives.
#[derive(Clone, Debug)]
pub struct InducedGammaGroup {
    group: GammaGroup,
    subgroup: Subgroup,
    inner: GammaGroup,
    reps: Vec<usize>,
    /// `σ = reps[coset[σ]]·λ[σ]` with `λ[σ]` an index into the subgroup.
    coset: Vec<usize>,
    lambda: Vec<usize>,
}

impl InducedGammaGroup {
    pub fn gamma_group(&self) -> &GammaGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn inner(&self) -> &GammaGroup {
        &self.inner
    }

    pub fn coset_representatives(&self) -> &[usize] {
        &self.reps
    }

    /// `φ(σ)` for an element `φ` of `G'`.
    pub fn value(&self, phi: usize, sigma: usize) -> usize {
        let coords = self.group.base().power_coords(phi).expect("power group");
        let l = self.lambda[sigma];
        let linv = self.inner.gamma().inv(l);
        self.inner.act(linv, coords[self.coset[sigma]])
    }

    /// The map `σ ↦ φ(σ)` in full.
    pub fn as_map(&self, phi: usize) -> Vec<usize> {
        self.group
            .gamma()
            .elements()
            .map(|s| self.value(phi, s))
            .collect()
    }

    /// The element with these values, if the map satisfies the constraint.
    pub fn from_map(&self, values: &[usize]) -> Option<usize> {
        let coords: Vec<usize> = self.reps.iter().map(|&r| values[r]).collect();
        let phi = self.group.base().power_element(&coords)?;
        (self.as_map(phi) == values).then_some(phi)
    }
}

/// The restriction of the `Γ`-action to a subgroup, as an `H`-group whose
/// acting group is `H` in the element order of [`Subgroup::to_group`].
pub fn restrict_gamma(parent: &GammaGroup, h: &Subgroup) -> Result<GammaGroup> {
    if h.parent() != parent.gamma() {
        return Err(Error::InvalidInput("subgroup of a different group".into()));
    }
    let (hg, _) = h.to_group();
    GammaGroup::from_fn(&hg, parent.base(), |l, a| parent.act(h.members()[l], a))
}

/// Builds `G'` from an `H`-group `G` (acting group indexed as in [`Subgroup::to_group`]).
pub fn shapiro_induce(
    gamma: &FiniteGroup,
    h: &Subgroup,
    inner: &GammaGroup,
) -> Result<InducedGammaGroup> {
    if h.parent() != gamma {
        return Err(Error::InvalidInput("subgroup of a different group".into()));
    }
    let hg = inner.gamma();
    if hg.order() != h.len() {
        return Err(Error::InvalidInput(
            "inner group is not acted on by the subgroup".into(),
        ));
    }
    for a in hg.elements() {
        for b in hg.elements() {
            if h.members()[hg.mul(a, b)] != gamma.mul(h.members()[a], h.members()[b]) {
                return Err(Error::InvalidInput(
                    "inner acting group is not indexed like the subgroup".into(),
                ));
            }
        }
    }
    let cosets = h.left_cosets();
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    debug_assert_eq!(reps[0], gamma.identity());
    let mut coset = vec![0usize; gamma.order()];
    let mut lambda = vec![0usize; gamma.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &s in c {
            coset[s] = i;
            let l = gamma.mul(gamma.inv(reps[i]), s);
            lambda[s] = h.index_of(l).expect("coset decomposition");
        }
    }
    let g = inner.base();
    let power = power_group(g, reps.len())?;
    size_check(
        "induced action table",
        (power.order() * gamma.order()) as u128,
        limits().max_enumeration,
    )?;
    // (τ·φ)_i = φ(τ⁻¹ r_i) = φ_j^(λ⁻¹) with τ⁻¹ r_i = r_j λ
    let mut targets = Vec::with_capacity(gamma.order());
    for t in gamma.elements() {
        let row: Vec<(usize, usize)> = reps
            .iter()
            .map(|&r| {
                let s = gamma.mul(gamma.inv(t), r);
                (coset[s], hg.inv(lambda[s]))
            })
            .collect();
        targets.push(row);
    }
    let mut flat = Vec::with_capacity(gamma.order() * power.order());
    for row in &targets {
        for phi in power.elements() {
            let c = power.power_coords(phi).expect("power group");
            let out: Vec<usize> = row.iter().map(|&(j, linv)| inner.act(linv, c[j])).collect();
            flat.push(power.power_element(&out).expect("coordinates in range") as u32);
        }
    }
    let group = GammaGroup::from_flat_unchecked(gamma, &power, flat);
    Ok(InducedGammaGroup {
        group,
        subgroup: h.clone(),
        inner: inner.clone(),
        reps,
        coset,
        lambda,
    })
}

/// The map group `X` of all functions `Γ → G` with `Γ` translating arguments.
pub fn map_group(gamma: &FiniteGroup, g: &FiniteGroup) -> Result<InducedGammaGroup> {
    let h = Subgroup::trivial(gamma);
    shapiro_induce(gamma, &h, &GammaGroup::trivial(&trivial_group(), g))
}

/// Both sides of Shapiro's lemma and the matched classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapiroReport {
    pub induced_classes: usize,
    pub restricted_classes: usize,
    /// `pairs[i]` is the class of `H¹(H, G)` hit by class `i` of `H¹(Γ, G')`.
    pub pairs: Vec<usize>,
}

/// Computes `H¹(Γ, G')` and `H¹(H, G)` separately and checks that
/// `α ↦ (λ ↦ α(λ)(e))` is a well-defined bijection between them.
pub fn shapiro_verify(
    gamma: &FiniteGroup,
    h: &Subgroup,
    inner: &GammaGroup,
) -> Result<ShapiroReport> {
    let induced = shapiro_induce(gamma, h, inner)?;
    induced.group.validate_action()?;
    let left = induced.group.h1()?;
    let right = inner.h1()?;
    let mut pairs = vec![usize::MAX; left.len()];
    for (cocycle, class) in left.cocycles() {
        let beta: Vec<usize> = h
            .members()
            .iter()
            .map(|&l| induced.value(cocycle[l], gamma.identity()))
            .collect();
        let target = right
            .class_of(&beta)
            .ok_or_else(|| Error::BijectionFailure("evaluation does not give a cocycle".into()))?;
        if pairs[class] == usize::MAX {
            pairs[class] = target;
        } else if pairs[class] != target {
            return Err(Error::BijectionFailure(format!(
                "class {class} is not sent to a single class"
            )));
        }
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (i, &t) in pairs.iter().enumerate() {
        if let Some(j) = seen.insert(t, i) {
            return Err(Error::BijectionFailure(format!(
                "classes {j} and {i} have the same image"
            )));
        }
    }
    if seen.len() != right.len() {
        return Err(Error::BijectionFailure(format!(
            "{} classes on the left, {} on the right",
            left.len(),
            right.len()
        )));
    }
    Ok(ShapiroReport {
        induced_classes: left.len(),
        restricted_classes: right.len(),
        pairs,
    })
}
