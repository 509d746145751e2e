//! Finite groups, homomorphisms and subgroups.
//!
//! Elements are indices `0..order`. Small groups keep a full Cayley table;
//! larger ones (symmetric groups, direct powers, matrix groups) compute
//! products on demand. Every constructor emits elements in a documented
//! deterministic order so that fixtures stay stable.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{size_check, Error, Result};
use crate::limits::limits;

/// Groups up to this order get a materialized Cayley table.
const TABLE_CACHE: usize = 1024;

type MulFn = dyn Fn(usize, usize) -> usize + Send + Sync;

enum Law {
    Table(Vec<u32>),
    Perm {
        degree: usize,
        index: HashMap<Vec<u8>, u32>,
    },
    Power {
        base: FiniteGroup,
        arity: usize,
    },
    Custom(Box<MulFn>),
}

struct GroupData {
    order: usize,
    identity: usize,
    inverse: Vec<u32>,
    law: Law,
    labels: Option<Vec<String>>,
    perms: Option<Vec<Vec<u8>>>,
    power: Option<(FiniteGroup, usize)>,
}

/// A finite group on the element set `0..order`.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order())
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.order() != other.order() || self.identity() != other.identity() {
            return false;
        }
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == other.mul(a, b)))
    }
}

impl FiniteGroup {
    fn assemble(
        order: usize,
        identity: usize,
        law: Law,
        labels: Option<Vec<String>>,
        perms: Option<Vec<Vec<u8>>>,
    ) -> FiniteGroup {
        let power = match &law {
            Law::Power { base, arity } => Some((base.clone(), *arity)),
            _ => None,
        };
        let mut data = GroupData {
            order,
            identity,
            inverse: Vec::new(),
            law,
            labels,
            perms,
            power,
        };
        if order <= TABLE_CACHE && !matches!(data.law, Law::Table(_)) {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(mul_by_law(&data, a, b) as u32);
                }
            }
            data.law = Law::Table(table);
        }
        data.inverse = compute_inverses(&data);
        FiniteGroup(Arc::new(data))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        mul_by_law(&self.0, a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inverse[a] as usize
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    /// Permutation of `{0..m-1}` carried by elements of permutation groups.
    pub fn perm(&self, a: usize) -> Option<&[u8]> {
        self.0.perms.as_ref().map(|p| p[a].as_slice())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0
            .perms
            .as_ref()
            .map(|p| p.first().map_or(0, |x| x.len()))
    }

    /// Sign of a permutation element, `+1` or `-1`.
    pub fn sign(&self, a: usize) -> Option<i8> {
        self.perm(a).map(perm_sign)
    }

    /// Cycle type of a permutation element, sorted descending, fixed points included.
    pub fn cycle_type(&self, a: usize) -> Option<Vec<usize>> {
        self.perm(a).map(cycle_type)
    }

    /// For direct powers `G^k`: the base group and the arity.
    pub fn power_base(&self) -> Option<(&FiniteGroup, usize)> {
        self.0.power.as_ref().map(|(b, k)| (b, *k))
    }

    /// Coordinates of an element of a direct power `G^k`.
    pub fn power_coords(&self, a: usize) -> Option<Vec<usize>> {
        self.power_base()
            .map(|(base, arity)| decode(a, base.order(), arity))
    }

    /// Inverse of [`power_coords`](Self::power_coords).
    pub fn power_element(&self, coords: &[usize]) -> Option<usize> {
        self.power_base()
            .map(|(base, _)| encode(coords, base.order()))
    }

    /// The full multiplication table (materialized on demand).
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|a| self.elements().map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Greedy generating set: repeatedly adjoin the smallest-index element
    /// outside the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order()];
        inside[self.identity()] = true;
        let mut members = vec![self.identity()];
        loop {
            let Some(next) = (0..self.order()).find(|&x| !inside[x]) else {
                break;
            };
            gens.push(next);
            members = self.closure_from(&members, &gens, &mut inside);
        }
        gens
    }

    fn closure_from(&self, start: &[usize], gens: &[usize], inside: &mut [bool]) -> Vec<usize> {
        let mut members = start.to_vec();
        let mut queue: VecDeque<usize> = start.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity()] = true;
        let mut members = self.closure_from(&[self.identity()], gens, &mut inside);
        members.sort_unstable();
        members
    }

    /// Breadth-first word decomposition over `gens`: entry `x` is
    /// `Some((i, y))` with `x = gens[i] * y` and `y` discovered earlier,
    /// or `None` for the identity. Returns the discovery order as well.
    pub fn words(&self, gens: &[usize]) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.order()];
        let mut seen = vec![false; self.order()];
        let mut order = vec![self.identity()];
        seen[self.identity()] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(y) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let x = self.mul(s, y);
                if !seen[x] {
                    seen[x] = true;
                    parent[x] = Some((i, y));
                    order.push(x);
                    queue.push_back(x);
                }
            }
        }
        (parent, order)
    }

    /// Group axioms: exhaustive associativity for order <= 64, 10^5
    /// sampled triples above, plus identity and inverse checks.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.order();
        let e = self.identity();
        for x in 0..n {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(Error::NoIdentity);
            }
            if self.mul(x, self.inv(x)) != e || self.mul(self.inv(x), x) != e {
                return Err(Error::NoInverse { element: x });
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::NotAssociative { a, b, c })
            } else {
                Ok(())
            }
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100_000 {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        Ok(())
    }

    /// Builds a group from an explicit list of elements closed under `mul`.
    /// The list order becomes the index order.
    pub fn from_elements<T, M, L>(
        elements: Vec<T>,
        identity: &T,
        mul: M,
        label: L,
    ) -> Result<FiniteGroup>
    where
        T: Clone + Eq + Hash + Send + Sync + 'static,
        M: Fn(&T, &T) -> T + Send + Sync + 'static,
        L: Fn(&T) -> String,
    {
        let n = elements.len();
        size_check("group order", n as u128, limits().max_group_order as u128)?;
        let index: HashMap<T, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (x, i))
            .collect();
        if index.len() != n {
            return Err(Error::InvalidTable("duplicate elements".into()));
        }
        let e = *index
            .get(identity)
            .ok_or_else(|| Error::InvalidTable("identity not among elements".into()))?;
        let labels = Some(elements.iter().map(label).collect());
        let law = if n <= TABLE_CACHE {
            let mut table = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    let p = mul(a, b);
                    let i = index.get(&p).ok_or_else(|| {
                        Error::InvalidTable("element list not closed under product".into())
                    })?;
                    table.push(*i as u32);
                }
            }
            Law::Table(table)
        } else {
            let elems = elements;
            Law::Custom(Box::new(move |a, b| index[&mul(&elems[a], &elems[b])]))
        };
        Ok(FiniteGroup::assemble(n, e, law, labels, None))
    }

    /// Elementwise isomorphism test by searching images of the generators.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        match enumerate_homs(self, other) {
            Ok(homs) => homs.iter().any(|h| h.is_injective()),
            Err(_) => false,
        }
    }
}

fn mul_by_law(d: &GroupData, a: usize, b: usize) -> usize {
    match &d.law {
        Law::Table(t) => t[a * d.order + b] as usize,
        Law::Perm { degree, index } => {
            let perms = d.perms.as_ref().expect("permutation data");
            let (p, q) = (&perms[a], &perms[b]);
            let r: Vec<u8> = (0..*degree).map(|i| p[q[i] as usize]).collect();
            index[&r] as usize
        }
        Law::Power { base, arity } => {
            let n = base.order();
            let (mut x, mut y) = (a, b);
            let mut out = 0;
            let mut scale = 1;
            for _ in 0..*arity {
                out += base.mul(x % n, y % n) * scale;
                x /= n;
                y /= n;
                scale *= n;
            }
            out
        }
        Law::Custom(f) => f(a, b),
    }
}

fn compute_inverses(d: &GroupData) -> Vec<u32> {
    let n = d.order;
    match &d.law {
        Law::Table(t) => (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| t[a * n + b] as usize == d.identity)
                    .unwrap_or(0) as u32
            })
            .collect(),
        Law::Perm { index, .. } => {
            let perms = d.perms.as_ref().expect("permutation data");
            perms
                .iter()
                .map(|p| {
                    let mut q = vec![0u8; p.len()];
                    for (i, &pi) in p.iter().enumerate() {
                        q[pi as usize] = i as u8;
                    }
                    index[&q]
                })
                .collect()
        }
        Law::Power { base, arity } => (0..n)
            .map(|a| {
                let c: Vec<usize> = decode(a, base.order(), *arity)
                    .into_iter()
                    .map(|x| base.inv(x))
                    .collect();
                encode(&c, base.order()) as u32
            })
            .collect(),
        Law::Custom(_) => (0..n)
            .map(|a| {
                let mut prev = d.identity;
                let mut x = a;
                while x != d.identity {
                    prev = x;
                    x = mul_by_law(d, x, a);
                }
                prev as u32
            })
            .collect(),
    }
}

pub(crate) fn decode(mut a: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(arity);
    for _ in 0..arity {
        out.push(a % n);
        a /= n;
    }
    out
}

pub(crate) fn encode(coords: &[usize], n: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * n + c)
}

fn perm_sign(p: &[u8]) -> i8 {
    let transpositions: usize = cycle_type(p).iter().map(|l| l - 1).sum();
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cycles(p: &[u8]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut x = p[s] as usize;
        while x != s {
            seen[x] = true;
            c.push(x);
            x = p[x] as usize;
        }
        out.push(c);
    }
    out
}

fn cycle_type(p: &[u8]) -> Vec<usize> {
    let mut t: Vec<usize> = cycles(p).iter().map(Vec::len).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

fn cycle_label(p: &[u8]) -> String {
    let parts: Vec<String> = cycles(p)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            format!("({})", inner.join(" "))
        })
        .collect();
    if parts.is_empty() {
        "()".to_string()
    } else {
        parts.concat()
    }
}

/// Validates a Cayley table and wraps it as a group.
pub fn make_group(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidTable("empty table".into()));
    }
    size_check("group order", n as u128, limits().max_group_order as u128)?;
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidTable(format!(
                "row {i} has length {} (expected {n})",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidTable(format!(
                "entry {bad} in row {i} out of range"
            )));
        }
    }
    if let Some(l) = &labels {
        if l.len() != n {
            return Err(Error::InvalidTable("label count differs from order".into()));
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or(Error::NoIdentity)?;
    for x in 0..n {
        if !(0..n).any(|y| table[x][y] == identity && table[y][x] == identity) {
            return Err(Error::NoInverse { element: x });
        }
    }
    let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
    let g = FiniteGroup::assemble(n, identity, Law::Table(flat), labels, None);
    g.check_axioms(limits().seed)?;
    Ok(g)
}

pub fn trivial_group() -> FiniteGroup {
    cyclic_group(1)
}

/// `Z/n` with element `i` standing for `i mod n`.
pub fn cyclic_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let labels = (0..n).map(|i| i.to_string()).collect();
    let law = Law::Custom(Box::new(move |a, b| (a + b) % n));
    FiniteGroup::assemble(n, 0, law, Some(labels), None)
}

/// Dihedral group of order `2n`. Index `e*n + i` is `s^e r^i`.
pub fn dihedral_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "dihedral group needs n >= 1");
    let labels = (0..2 * n)
        .map(|x| {
            let (e, i) = (x / n, x % n);
            match (e, i) {
                (0, 0) => "e".to_string(),
                (0, i) => format!("r^{i}"),
                (_, 0) => "s".to_string(),
                (_, i) => format!("s r^{i}"),
            }
        })
        .collect();
    let law = Law::Custom(Box::new(move |a, b| {
        let (e1, i) = (a / n, a % n);
        let (e2, j) = (b / n, b % n);
        let i = if e2 == 1 { (n - i) % n } else { i };
        ((e1 + e2) % 2) * n + (i + j) % n
    }));
    FiniteGroup::assemble(2 * n, 0, law, Some(labels), None)
}

/// Quaternion group `{1, -1, i, -i, j, -j, k, -k}` in that index order.
pub fn quaternion_group() -> FiniteGroup {
    // unit index u in {0:1, 1:i, 2:j, 3:k}; element = 2*u + sign
    const TAB: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    let law = Law::Custom(Box::new(|a, b| {
        let (ua, sa) = (a / 2, a % 2 == 1);
        let (ub, sb) = (b / 2, b % 2 == 1);
        let (u, s) = TAB[ua][ub];
        2 * u + usize::from(s ^ sa ^ sb)
    }));
    FiniteGroup::assemble(
        8,
        0,
        law,
        Some(names.iter().map(|s| s.to_string()).collect()),
        None,
    )
}

/// `S_m` on `{0..m-1}`, elements in lexicographic order of their one-line
/// notation, product `(p q)(i) = p(q(i))`.
pub fn symmetric_group(m: usize) -> Result<FiniteGroup> {
    assert!(m >= 1, "symmetric group needs m >= 1");
    let order: u128 = (1..=m as u128).product();
    size_check(
        "symmetric group order",
        order,
        limits().max_group_order as u128,
    )?;
    let mut perms: Vec<Vec<u8>> = Vec::with_capacity(order as usize);
    let mut p: Vec<u8> = (0..m as u8).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let index = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let labels = perms.iter().map(|p| cycle_label(p)).collect();
    let law = Law::Perm { degree: m, index };
    Ok(FiniteGroup::assemble(
        perms.len(),
        0,
        law,
        Some(labels),
        Some(perms),
    ))
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `G x H` with index `g * |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (g2, h2) = (g.clone(), h.clone());
    let nh = h.order();
    let labels = (0..g.order() * nh)
        .map(|x| format!("({},{})", g.label(x / nh), h.label(x % nh)))
        .collect();
    let law = Law::Custom(Box::new(move |a, b| {
        g2.mul(a / nh, b / nh) * nh + h2.mul(a % nh, b % nh)
    }));
    FiniteGroup::assemble(
        g.order() * nh,
        g.identity() * nh + h.identity(),
        law,
        Some(labels),
        None,
    )
}

/// `G^arity` with pointwise product; index is the little-endian mixed-radix
/// encoding of the coordinate vector.
pub fn power_group(base: &FiniteGroup, arity: usize) -> Result<FiniteGroup> {
    let order = (base.order() as u128)
        .checked_pow(arity as u32)
        .unwrap_or(u128::MAX);
    size_check(
        "direct power order",
        order,
        limits().max_group_order.max(1 << 16) as u128,
    )?;
    let order = order as usize;
    let e = encode(&vec![base.identity(); arity], base.order());
    let law = Law::Power {
        base: base.clone(),
        arity,
    };
    Ok(FiniteGroup::assemble(order, e, law, None, None))
}

/// A homomorphism between finite groups, stored by its image array.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    image: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, image: Vec<usize>) -> Result<GroupHom> {
        if image.len() != source.order() || image.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidInput(
                "image array does not match groups".into(),
            ));
        }
        for x in source.elements() {
            for y in source.elements() {
                if image[source.mul(x, y)] != target.mul(image[x], image[y]) {
                    return Err(Error::NotHomomorphism { x, y });
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub(crate) fn new_unchecked(
        source: &FiniteGroup,
        target: &FiniteGroup,
        image: Vec<usize>,
    ) -> GroupHom {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            image,
        }
    }

    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom::new_unchecked(g, g, g.elements().collect())
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> GroupHom {
        GroupHom::new_unchecked(source, target, vec![target.identity(); source.order()])
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> GroupHom {
        let image = self.image.iter().map(|&y| next.apply(y)).collect();
        GroupHom::new_unchecked(&self.source, &next.target, image)
    }

    pub fn kernel(&self) -> Subgroup {
        let members = self
            .source
            .elements()
            .filter(|&x| self.image[x] == self.target.identity())
            .collect();
        Subgroup {
            parent: self.source.clone(),
            members,
        }
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut members: Vec<usize> = self.image.clone();
        members.sort_unstable();
        members.dedup();
        Subgroup {
            parent: self.target.clone(),
            members,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().len() == self.target.order()
    }
}

/// A subgroup recorded as a sorted member list of its parent.
#[derive(Clone, Debug, PartialEq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, mut members: Vec<usize>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&x| x >= parent.order()) {
            return Err(Error::NotSubgroup("member out of range".into()));
        }
        let set: HashSet<usize> = members.iter().copied().collect();
        if !set.contains(&parent.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &members {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("product {a}*{b} missing")));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            members,
        })
    }

    pub fn generated(parent: &FiniteGroup, gens: &[usize]) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: parent.generated_by(gens),
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: vec![parent.identity()],
        }
    }

    pub fn whole(parent: &FiniteGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: parent.elements().collect(),
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of `x` in the member list, i.e. its index in [`to_group`](Self::to_group).
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    /// Returns the first `(g, n)` with `g n g^-1` outside, if any.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        for g in self.parent.elements() {
            for &n in &self.members {
                if !self.contains(self.parent.conj(g, n)) {
                    return Some((g, n));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&x| self.parent.conj(g, x))
            .collect();
        members.sort_unstable();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    /// The subgroup as a group in its own right (element `i` is
    /// `members[i]`) together with the inclusion.
    pub fn to_group(&self) -> (FiniteGroup, GroupHom) {
        let n = self.members.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                table.push(self.index_of(self.parent.mul(a, b)).expect("closed") as u32);
            }
        }
        let labels = Some(self.members.iter().map(|&x| self.parent.label(x)).collect());
        let e = self.index_of(self.parent.identity()).expect("identity");
        let perms = self
            .parent
            .0
            .perms
            .as_ref()
            .map(|p| self.members.iter().map(|&x| p[x].clone()).collect());
        let g = FiniteGroup::assemble(n, e, Law::Table(table), labels, perms);
        let incl = GroupHom::new_unchecked(&g, &self.parent, self.members.clone());
        (g, incl)
    }

    /// Left cosets `gH`, each sorted, ordered by least element.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.parent.order()];
        let mut out = Vec::new();
        for g in self.parent.elements() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = self
                .members
                .iter()
                .map(|&h| self.parent.mul(g, h))
                .collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }
}

/// Every subgroup of `g`, ordered by (size, members).
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut layer: Vec<Vec<usize>> = Vec::new();
    for x in g.elements() {
        let c = g.generated_by(&[x]);
        if found.insert(c.clone()) {
            layer.push(c);
        }
    }
    let cyclic = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            for c in &cyclic {
                let mut gens = s.clone();
                gens.extend_from_slice(c);
                let j = g.generated_by(&gens);
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        layer = next;
    }
    let mut all: Vec<Vec<usize>> = found.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter()
        .map(|members| Subgroup {
            parent: g.clone(),
            members,
        })
        .collect()
}

/// All homomorphisms `source -> target`, sorted by image array.
///
/// Images are assigned to the greedy generators of `source`, restricted to
/// elements whose order divides the generator's order, extended along the
/// breadth-first word decomposition and then checked on all pairs.
pub fn enumerate_homs(source: &FiniteGroup, target: &FiniteGroup) -> Result<Vec<GroupHom>> {
    let gens = source.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let k = source.element_order(s);
            target
                .elements()
                .filter(|&t| k % target.element_order(t) == 0)
                .collect()
        })
        .collect();
    let total = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    size_check("homomorphism candidates", total, limits().max_enumeration)?;
    let (parent, bfs) = source.words(&gens);
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    let mut image = vec![0usize; source.order()];
    'outer: loop {
        image[source.identity()] = target.identity();
        for &x in bfs.iter().skip(1) {
            let (i, y) = parent[x].expect("non-identity has a parent");
            image[x] = target.mul(candidates[i][choice[i]], image[y]);
        }
        let ok = source.elements().all(|x| {
            source
                .elements()
                .all(|y| image[source.mul(x, y)] == target.mul(image[x], image[y]))
        });
        if ok {
            out.push(GroupHom::new_unchecked(source, target, image.clone()));
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
    out.sort_by(|a, b| a.image.cmp(&b.image));
    Ok(out)
}

/// Orbits of `Hom(source, target)` under conjugation in `target`, as lists
/// of positions into the sorted output of [`enumerate_homs`].
pub fn hom_conjugacy_orbits(homs: &[GroupHom]) -> Vec<Vec<usize>> {
    let Some(first) = homs.first() else {
        return Vec::new();
    };
    let target = first.target.clone();
    let index: HashMap<&[usize], usize> = homs
        .iter()
        .enumerate()
        .map(|(i, h)| (h.image.as_slice(), i))
        .collect();
    let mut assigned = vec![false; homs.len()];
    let mut orbits = Vec::new();
    for i in 0..homs.len() {
        if assigned[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for s in target.elements() {
            let conj: Vec<usize> = homs[i].image.iter().map(|&y| target.conj(s, y)).collect();
            let j = index[conj.as_slice()];
            if !assigned[j] {
                assigned[j] = true;
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// One representative (the lexicographically least) per conjugacy orbit.
pub fn homs_up_to_conjugacy(source: &FiniteGroup, target: &FiniteGroup) -> Result<Vec<GroupHom>> {
    let homs = enumerate_homs(source, target)?;
    let orbits = hom_conjugacy_orbits(&homs);
    Ok(orbits.iter().map(|o| homs[o[0]].clone()).collect())
}

/// `G/N` on the left cosets of `N` (ordered by least element) and the projection.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if let Some((x, y)) = n.normality_witness() {
        return Err(Error::NotNormal { g: x, n: y });
    }
    let cosets = n.left_cosets();
    let mut coset_of = vec![0usize; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let k = cosets.len();
    let mut table = Vec::with_capacity(k * k);
    for a in &cosets {
        for b in &cosets {
            table.push(coset_of[g.mul(a[0], b[0])] as u32);
        }
    }
    let labels = Some(
        cosets
            .iter()
            .map(|c| format!("[{}]", g.label(c[0])))
            .collect(),
    );
    let q = FiniteGroup::assemble(k, coset_of[g.identity()], Law::Table(table), labels, None);
    let proj = GroupHom::new_unchecked(g, &q, coset_of);
    Ok((q, proj))
}
