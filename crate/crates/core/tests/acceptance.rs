//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! elapsed time against a pinned limit; every count is compared with an
//! oracle written here, independently of the library's algorithms.

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::time::{Duration, Instant};

use cocycle::cohomology::GammaGroup;
use cocycle::etale::{classify_etale, realize_over_fq};
use cocycle::exactness::{orbit_kernel_bijection, CentralExtension};
use cocycle::field::FqTower;
use cocycle::galois_linear::{classify_forms, hilbert90_verify, sl_h1_verify, TensorOnV};
use cocycle::group::{cyclic_group, FiniteGroup};
use cocycle::quad::{verify_units_iso, QuadRing};
use cocycle::twisted::{classify_phs, map_group, shapiro_induce, shapiro_verify};
use cocycle::verify::{
    central_corpus, forms_corpus, kernel_bijection_corpus, map_group_corpus, shapiro_corpus,
    twisted_corpus, HILBERT90_CORPUS, UNITS_CORPUS,
};

type Outcome = Result<String, String>;

/// Criteria whose literal statement is false; they are run and reported,
/// and the test requires them to keep failing so a change is noticed.
const KNOWN_FALSE: [&str; 1] = ["6b"];

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Oracle: generic cohomology by generator extension.

fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: HashSet<usize> = HashSet::from([g.identity()]);
    for x in g.elements() {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut frontier: Vec<usize> = span.iter().copied().collect();
        while let Some(y) = frontier.pop() {
            for &s in &gens {
                let z = g.mul(y, s);
                if span.insert(z) {
                    frontier.push(z);
                }
            }
        }
    }
    gens
}

/// All maps `α: Γ → A` with `α(hg) = α(h)·α(g)^h`. Values on generators are
/// drawn from those satisfying the cyclic condition `α(s^k) = e` (`k` the
/// order of `s`), extended along `α(xs) = α(x)·α(s)^x`, and the law is then
/// checked on every pair.
fn cocycles(gg: &GammaGroup) -> Vec<Vec<usize>> {
    let gamma = gg.gamma();
    let base = gg.base();
    let gens = generators(gamma);
    let n = gamma.order();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            base.elements()
                .filter(|&a| {
                    let (mut x, mut v) = (s, a);
                    while x != gamma.identity() {
                        v = base.mul(v, gg.act(x, a));
                        x = gamma.mul(x, s);
                    }
                    v == base.identity()
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let value = |k: usize| candidates[k][choice[k]];
        let mut alpha = vec![usize::MAX; n];
        alpha[gamma.identity()] = base.identity();
        let mut frontier = vec![gamma.identity()];
        let mut consistent = true;
        while let Some(x) = frontier.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let xs = gamma.mul(x, s);
                let v = base.mul(alpha[x], gg.act(x, value(k)));
                if alpha[xs] == usize::MAX {
                    alpha[xs] = v;
                    frontier.push(xs);
                } else if alpha[xs] != v {
                    consistent = false;
                }
            }
        }
        if consistent {
            let law = gamma.elements().all(|h| {
                gamma
                    .elements()
                    .all(|g| alpha[gamma.mul(h, g)] == base.mul(alpha[h], gg.act(h, alpha[g])))
            });
            if law {
                out.push(alpha);
            }
        }
        for (k, c) in choice.iter_mut().enumerate() {
            *c += 1;
            if *c < candidates[k].len() {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    out
}

fn twist(gg: &GammaGroup, a: usize, alpha: &[usize]) -> Vec<usize> {
    let base = gg.base();
    gg.gamma()
        .elements()
        .map(|g| base.mul(base.mul(base.inv(a), alpha[g]), gg.act(g, a)))
        .collect()
}

/// Class index of every cocycle, classes numbered by first appearance.
fn classes(gg: &GammaGroup, z: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    let mut class: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut next = 0;
    for alpha in z {
        if class.contains_key(alpha) {
            continue;
        }
        for a in gg.base().elements() {
            class.insert(twist(gg, a, alpha), next);
        }
        next += 1;
    }
    class
}

fn h1_size(gg: &GammaGroup) -> usize {
    let z = cocycles(gg);
    classes(gg, &z).values().collect::<HashSet<_>>().len()
}

// ---------------------------------------------------------------------------
// Oracle: small finite fields by addition and multiplication tables.

struct Field {
    p: u32,
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Field {
    /// `F_p[x]/(modulus)`, modulus monic and listed lowest degree first.
    fn new(p: u32, modulus: &[u32]) -> Field {
        let k = modulus.len() - 1;
        let q = (p as usize).pow(k as u32);
        let digits = |x: usize| -> Vec<u32> {
            (0..k)
                .map(|i| ((x / (p as usize).pow(i as u32)) % p as usize) as u32)
                .collect()
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for x in 0..q {
            for y in 0..q {
                let (a, b) = (digits(x), digits(y));
                let s: Vec<u32> = (0..k).map(|i| (a[i] + b[i]) % p).collect();
                add[x * q + y] = encode(&s);
                let mut prod = vec![0u32; 2 * k];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
                    }
                }
                for top in (k..2 * k).rev() {
                    let c = prod[top];
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[top - k + i] = (prod[top - k + i] + (p - c) * m) % p;
                    }
                }
                mul[x * q + y] = encode(&prod[..k]);
            }
        }
        let f = Field { p, q, add, mul };
        assert!(
            (1..q).all(|x| (1..q).any(|y| f.mul(x as u32, y as u32) == 1)),
            "modulus is not irreducible"
        );
        f
    }

    fn add(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.q + y as usize]
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.q + y as usize]
    }

    fn neg(&self, x: u32) -> u32 {
        (0..self.q as u32).find(|&y| self.add(x, y) == 0).unwrap()
    }

    fn inv(&self, x: u32) -> u32 {
        (1..self.q as u32).find(|&y| self.mul(x, y) == 1).unwrap()
    }

    fn frob(&self, x: u32) -> u32 {
        (1..self.p).fold(x, |acc, _| self.mul(acc, x))
    }
}

/// An irreducible modulus of degree `n` over `F_p` for the corpus fields.
fn oracle_field(p: u32, n: usize) -> Field {
    let modulus: Vec<u32> = match (p, n) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![1, 0, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (5, 2) => vec![2, 0, 1],
        _ => panic!("no oracle modulus for ({p}, {n})"),
    };
    Field::new(p, &modulus)
}

type M = Vec<u32>;

fn mat_mul(f: &Field, m: usize, a: &M, b: &M) -> M {
    let mut c = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            c[i * m + j] = (0..m).fold(0, |acc, k| f.add(acc, f.mul(a[i * m + k], b[k * m + j])));
        }
    }
    c
}

fn det(f: &Field, m: usize, a: &M) -> u32 {
    match m {
        1 => a[0],
        2 => f.add(f.mul(a[0], a[3]), f.neg(f.mul(a[1], a[2]))),
        _ => panic!("oracle handles m <= 2"),
    }
}

fn mat_inv(f: &Field, m: usize, a: &M) -> M {
    let di = f.inv(det(f, m, a));
    match m {
        1 => vec![di],
        _ => vec![
            f.mul(di, a[3]),
            f.mul(di, f.neg(a[1])),
            f.mul(di, f.neg(a[2])),
            f.mul(di, a[0]),
        ],
    }
}

fn transpose(m: usize, a: &M) -> M {
    (0..m * m).map(|x| a[(x % m) * m + x / m]).collect()
}

fn general_linear(f: &Field, m: usize, sub_p: bool, special: bool) -> Vec<M> {
    let q = if sub_p { f.p as usize } else { f.q };
    let total = q.pow((m * m) as u32);
    (0..total)
        .map(|mut x| {
            (0..m * m)
                .map(|_| {
                    let d = (x % q) as u32;
                    x /= q;
                    d
                })
                .collect::<M>()
        })
        .filter(|a| {
            let d = det(f, m, a);
            d != 0 && (!special || d == 1)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria.

fn hilbert90(special: bool) -> Outcome {
    let mut total = 0;
    for &(q, n, m) in &HILBERT90_CORPUS {
        let f = oracle_field(q as u32, n);
        let group = general_linear(&f, m, false, special);
        let identity: M = (0..m * m).map(|x| u32::from(x % (m + 1) == 0)).collect();
        let frob = |a: &M| -> M { a.iter().map(|&x| f.frob(x)).collect() };
        let coboundaries: HashSet<M> = group
            .iter()
            .map(|b| mat_mul(&f, m, &mat_inv(&f, m, b), &frob(b)))
            .collect();
        let mut z = 0;
        let mut counterexamples = 0;
        for a in &group {
            let mut prod = a.clone();
            let mut conj = a.clone();
            for _ in 1..n {
                conj = frob(&conj);
                prod = mat_mul(&f, m, &prod, &conj);
            }
            if prod == identity {
                z += 1;
                if !coboundaries.contains(a) {
                    counterexamples += 1;
                }
            }
        }
        check(counterexamples == 0, || {
            format!(
                "oracle found {counterexamples} counterexamples at {:?}",
                (q, n, m)
            )
        })?;
        let tower = FqTower::new(q, 1, n).map_err(|e| e.to_string())?;
        let r = if special {
            sl_h1_verify(&tower, m)
        } else {
            hilbert90_verify(&tower, m)
        }
        .map_err(|e| e.to_string())?;
        check(r.counterexamples.is_empty() && r.passed(), || {
            format!("library reports failure at {:?}", (q, n, m))
        })?;
        check(r.group_order == group.len(), || {
            format!(
                "group order {} vs {} at {:?}",
                r.group_order,
                group.len(),
                (q, n, m)
            )
        })?;
        check(r.cocycle_count == z, || {
            format!("cocycles {} vs {} at {:?}", r.cocycle_count, z, (q, n, m))
        })?;
        check(r.coboundary_count == coboundaries.len(), || {
            format!("coboundaries differ at {:?}", (q, n, m))
        })?;
        total += z;
    }
    Ok(format!(
        "{} cases, {total} cocycles, 0 counterexamples",
        HILBERT90_CORPUS.len()
    ))
}

fn orbit_kernel() -> Outcome {
    let corpus = kernel_bijection_corpus().map_err(|e| e.to_string())?;
    check(corpus.len() >= 25, || {
        format!("only {} triples", corpus.len())
    })?;
    for family in ["mu4", "Z4", "S3", "D4", "Q8"] {
        let actions: HashSet<&str> = corpus
            .iter()
            .filter(|(name, _, _)| name.starts_with(family))
            .map(|(name, _, _)| name.split(" ⊃ ").next().unwrap())
            .collect();
        check(actions.len() >= 2, || {
            format!("{family} appears under {} actions", actions.len())
        })?;
    }
    for (name, gg, sub) in &corpus {
        check(gg.base().order() <= 24 && gg.gamma().order() <= 6, || {
            format!("{name} exceeds size bounds")
        })?;
        let base = gg.base();
        let gamma = gg.gamma();
        // fixed cosets bA and their orbits under B^Γ
        let coset = |b: usize| -> Vec<usize> {
            let mut c: Vec<usize> = sub.members().iter().map(|&a| base.mul(b, a)).collect();
            c.sort_unstable();
            c
        };
        let fixed: HashSet<Vec<usize>> = base
            .elements()
            .filter(|&b| {
                gamma
                    .elements()
                    .all(|g| sub.contains(base.mul(base.inv(b), gg.act(g, b))))
            })
            .map(coset)
            .collect();
        let invariants: Vec<usize> = base
            .elements()
            .filter(|&b| gamma.elements().all(|g| gg.act(g, b) == b))
            .collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut orbits = 0;
        for c in &fixed {
            if seen.insert(c.clone()) {
                orbits += 1;
                for &x in &invariants {
                    seen.insert(coset(base.mul(x, c[0])));
                }
            }
        }
        // kernel: cocycles of A that are B-coboundaries, up to A-equivalence
        let (restricted, _) = gg.restrict(sub).map_err(|e| e.to_string())?;
        let index: HashMap<usize, usize> = sub
            .members()
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let mut kernel: HashSet<Vec<usize>> = HashSet::new();
        let mut kernel_classes = 0;
        for b in base.elements() {
            let values: Option<Vec<usize>> = gamma
                .elements()
                .map(|g| index.get(&base.mul(base.inv(b), gg.act(g, b))).copied())
                .collect();
            if let Some(alpha) = values {
                if !kernel.contains(&alpha) {
                    kernel_classes += 1;
                    for a in restricted.base().elements() {
                        kernel.insert(twist(&restricted, a, &alpha));
                    }
                }
            }
        }
        let r = orbit_kernel_bijection(gg, sub).map_err(|e| format!("{name}: {e}"))?;
        check(r.orbit_count == orbits, || {
            format!("{name}: orbits {} vs oracle {orbits}", r.orbit_count)
        })?;
        check(r.kernel_size == kernel_classes, || {
            format!(
                "{name}: kernel {} vs oracle {kernel_classes}",
                r.kernel_size
            )
        })?;
        check(orbits == kernel_classes, || {
            format!("{name}: oracle sides differ")
        })?;
    }
    Ok(format!("{} triples", corpus.len()))
}

fn twisted() -> Outcome {
    let corpus = twisted_corpus().map_err(|e| e.to_string())?;
    for (name, gg) in &corpus {
        check(gg.gamma().order() <= 4 && gg.base().order() <= 8, || {
            format!("{name} exceeds size bounds")
        })?;
        let expected = h1_size(gg);
        let r = classify_phs(gg).map_err(|e| format!("{name}: {e}"))?;
        check(r.twisted_classes == expected, || {
            format!(
                "{name}: {} twisted classes, oracle |H1| = {expected}",
                r.twisted_classes
            )
        })?;
        check(r.h1.len() == expected && r.spaces.len() == expected, || {
            format!("{name}: H1 mismatch")
        })?;
        check(r.spaces.iter().all(|s| s.is_principal()), || {
            format!("{name}: a space is not principal")
        })?;
    }
    Ok(format!("{} pairs", corpus.len()))
}

fn shapiro() -> Outcome {
    let corpus = shapiro_corpus().map_err(|e| e.to_string())?;
    for (name, gamma, h, inner) in &corpus {
        check(inner.base().order() <= 6, || format!("{name}: |G| > 6"))?;
        let induced = shapiro_induce(gamma, h, inner).map_err(|e| e.to_string())?;
        let left = h1_size(induced.gamma_group());
        let right = h1_size(inner);
        check(left == right, || {
            format!("{name}: oracle |H1(Γ,G')| = {left}, |H1(H,G)| = {right}")
        })?;
        let r = shapiro_verify(gamma, h, inner).map_err(|e| format!("{name}: {e}"))?;
        check(
            r.induced_classes == left && r.restricted_classes == right,
            || format!("{name}: library counts differ"),
        )?;
    }
    let maps = map_group_corpus().map_err(|e| e.to_string())?;
    for (name, gamma, g) in &maps {
        let induced = map_group(gamma, g).map_err(|e| e.to_string())?;
        let size = h1_size(induced.gamma_group());
        check(size == 1, || format!("{name}: oracle |H1| = {size}"))?;
        let lib = induced.gamma_group().h1().map_err(|e| e.to_string())?.len();
        check(lib == 1, || format!("{name}: library |H1| = {lib}"))?;
    }
    Ok(format!(
        "{} induced cases, {} map-group cases",
        corpus.len(),
        maps.len()
    ))
}

/// Partitions of `m` as non-increasing part lists.
fn partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Conjugacy classes of `S_m` with order dividing `n`, as cycle types.
fn classes_of_order_dividing(m: usize, n: usize) -> usize {
    partitions(m)
        .iter()
        .filter(|p| n % p.iter().fold(1, |a, &b| lcm(a, b)) == 0)
        .count()
}

fn etale_counts() -> Outcome {
    let mut checked = 0;
    for m in 1..=5 {
        for n in 1..=6 {
            let got = classify_etale(&cyclic_group(n), m)
                .map_err(|e| e.to_string())?
                .len();
            let expected = classes_of_order_dividing(m, n);
            check(got == expected, || {
                format!("(m, n) = ({m}, {n}): {got} classes, oracle {expected}")
            })?;
            if n % (1..=m).fold(1, lcm) == 0 {
                check(got == partitions(m).len(), || {
                    format!("(m, n) = ({m}, {n}): {got} != p({m})")
                })?;
            }
            checked += 1;
        }
    }
    check(partitions(4).len() == 5 && partitions(5).len() == 7, || {
        "partition oracle".into()
    })?;
    Ok(format!("{checked} (m, n) pairs"))
}

fn etale_partition_literal() -> Outcome {
    let mut failures = Vec::new();
    for m in 1..=5 {
        for n in m..=6 {
            let got = classify_etale(&cyclic_group(n), m)
                .map_err(|e| e.to_string())?
                .len();
            let p = partitions(m).len();
            if got != p {
                failures.push(format!("(m={m}, n={n}): {got} != p({m}) = {p}"));
            }
        }
    }
    if failures.is_empty() {
        Ok("count = p(m) whenever n >= m".into())
    } else {
        Err(format!(
            "count = p(m) for n >= m fails at {}",
            failures.join(", ")
        ))
    }
}

fn sign_of(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

fn legendre(x: u64, p: u64) -> u64 {
    (0..(p - 1) / 2).fold(1, |acc, _| acc * x % p)
}

fn realization() -> Outcome {
    let mut algebras = 0;
    for q in [3u64, 5] {
        for n in 1..=4 {
            let tower = FqTower::new(q, 1, n).map_err(|e| e.to_string())?;
            let gamma = cyclic_group(n);
            let phi = 1 % n;
            for m in 1..=4 {
                for class in classify_etale(&gamma, m).map_err(|e| e.to_string())? {
                    let perm = class.permutation(phi);
                    let here = format!("q={q} n={n} m={m} psi={perm:?}");
                    let alg =
                        realize_over_fq(&tower, &class).map_err(|e| format!("{here}: {e}"))?;
                    alg.check_axioms().map_err(|e| format!("{here}: {e}"))?;
                    check(alg.dim() == m, || {
                        format!("{here}: dimension {}", alg.dim())
                    })?;
                    let mut degrees = alg.factor_degrees().to_vec();
                    degrees.sort_unstable();
                    check(degrees == cycle_lengths(&perm), || {
                        format!("{here}: factor degrees {degrees:?}")
                    })?;
                    let disc = tower.digits(alg.trace_form_discriminant());
                    check(disc[0] != 0 && disc[1..].iter().all(|&c| c == 0), || {
                        format!("{here}: discriminant {disc:?}")
                    })?;
                    let square = legendre(disc[0], q) == 1;
                    check(square == (sign_of(&perm) == 1), || {
                        format!("{here}: square class disagrees with sign")
                    })?;
                    let trivial = class.discriminant_trivial().map_err(|e| e.to_string())?;
                    check(trivial == (sign_of(&perm) == 1), || {
                        format!("{here}: discriminant predicate")
                    })?;
                    let field = cycle_lengths(&perm) == vec![m];
                    check(class.is_field() == field, || {
                        format!("{here}: field predicate")
                    })?;
                    if field {
                        let galois = class.is_galois().map_err(|e| e.to_string())?.is_some();
                        check(galois, || {
                            format!("{here}: a finite-field extension is not Galois")
                        })?;
                    }
                    algebras += 1;
                }
            }
        }
    }
    Ok(format!("{algebras} algebras over F3 and F5 towers"))
}

/// `GL_m(k)`-orbits of `k`-tensors in the `GL_m(K)`-orbit of `τ`, for
/// bilinear forms (`gᵀτg`) and endomorphisms (`gτg⁻¹`) with `m ≤ 2`.
fn direct_forms(p: u32, n: usize, tau: &TensorOnV) -> usize {
    let f = oracle_field(p, n);
    let m = tau.m;
    let t: M = tau.coeffs.iter().map(|&c| c as u32).collect();
    let act = |g: &M, x: &M| -> M {
        match (tau.l, tau.r) {
            (0, 2) | (2, 0) => mat_mul(&f, m, &mat_mul(&f, m, &transpose(m, g), x), g),
            (1, 1) => mat_mul(&f, m, &mat_mul(&f, m, g, x), &mat_inv(&f, m, g)),
            other => panic!("oracle does not handle type {other:?}"),
        }
    };
    let rational: HashSet<M> = general_linear(&f, m, false, false)
        .iter()
        .map(|g| act(g, &t))
        .filter(|x| x.iter().all(|&c| c < p))
        .collect();
    let small = general_linear(&f, m, true, false);
    let mut seen: HashSet<M> = HashSet::new();
    let mut orbits = 0;
    for x in &rational {
        if seen.insert(x.clone()) {
            orbits += 1;
            for g in &small {
                seen.insert(act(g, x));
            }
        }
    }
    orbits
}

fn forms() -> Outcome {
    let mut detail = Vec::new();
    for (name, (p, d, n), tau) in forms_corpus().map_err(|e| e.to_string())? {
        assert_eq!(d, 1);
        let tower = FqTower::new(p, d, n).map_err(|e| e.to_string())?;
        let r = classify_forms(&tower, &tau).map_err(|e| format!("{name}: {e}"))?;
        let oracle = direct_forms(p as u32, n, &tau);
        check(r.direct_count() == oracle, || {
            format!("{name}: direct {} vs oracle {oracle}", r.direct_count())
        })?;
        check(r.cohomological_count() == oracle, || {
            format!(
                "{name}: cohomological {} vs oracle {oracle}",
                r.cohomological_count()
            )
        })?;
        if name.starts_with("x^2 + y^2") {
            check(oracle == 2, || format!("x^2 + y^2 gives {oracle}"))?;
            detail.push(format!("x^2+y^2: {oracle}"));
        }
    }
    check(!detail.is_empty(), || {
        "x^2 + y^2 missing from corpus".into()
    })?;
    Ok(format!(
        "{} tensors; {}",
        forms_corpus().unwrap().len(),
        detail.join("")
    ))
}

fn units() -> Outcome {
    for &d in &UNITS_CORPUS {
        let d_i = d as i64;
        let (t, nn) = if d % 4 == 3 {
            (1, (1 + d_i) / 4)
        } else {
            (0, d_i)
        };
        // x + yω with ω² = tω − nn, norm x² + txy + nn·y²
        let norm = |x: i64, y: i64| x * x + t * x * y + nn * y * y;
        let mut us = Vec::new();
        for x in -2..=2 {
            for y in -2..=2 {
                if norm(x, y) == 1 {
                    us.push((x, y));
                }
            }
        }
        let mul = |(a, b): (i64, i64), (c, e): (i64, i64)| {
            (a * c - nn * b * e, a * e + b * c + t * b * e)
        };
        let conj = |(a, b): (i64, i64)| (a + t * b, -b);
        let inv = |u: (i64, i64)| conj(u);
        // H¹(Z/2, U) = {u : u·ū = 1} / {v̄/v}, and every unit has norm 1
        let image: HashSet<(i64, i64)> = us.iter().map(|&v| mul(conj(v), inv(v))).collect();
        let h1 = us.len() / image.len();
        // ramified primes divide the discriminant; a product of them is
        // principal exactly when it is a norm
        let disc = if d % 4 == 3 { d_i } else { 4 * d_i };
        let ramified: Vec<i64> = (2..=disc)
            .filter(|&p| disc % p == 0 && (2..p).all(|r| p % r != 0))
            .collect();
        let mut quotient = 0;
        for mask in 0u32..(1 << ramified.len()) {
            let target: i64 = ramified
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .product();
            let bound = (4 * target) as f64;
            let lim = bound.sqrt() as i64 + 2;
            if (-lim..=lim).any(|x| (-lim..=lim).any(|y| norm(x, y) == target)) {
                quotient += 1;
            }
        }
        let r = verify_units_iso(&QuadRing::new(d).map_err(|e| e.to_string())?)
            .map_err(|e| format!("d={d}: {e}"))?;
        check(r.matched, || {
            format!("d={d}: library bijection not verified")
        })?;
        check(r.h1_order == h1, || {
            format!("d={d}: |H1| {} vs oracle {h1}", r.h1_order)
        })?;
        check(r.quotient_order == quotient, || {
            format!("d={d}: quotient {} vs oracle {quotient}", r.quotient_order)
        })?;
        check(h1 == quotient, || {
            format!("d={d}: oracle sides {h1} vs {quotient}")
        })?;
        let ramified_lib: Vec<i64> = r.ramified.iter().map(|(p, _)| *p as i64).collect();
        check(ramified_lib == ramified, || {
            format!("d={d}: ramified {ramified_lib:?} vs {ramified:?}")
        })?;
        if d == 1 || d == 5 {
            check(h1 == 2, || format!("d={d}: order {h1}"))?;
        }
    }
    Ok(format!("{} fields", UNITS_CORPUS.len()))
}

fn gcd_i(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

/// `|H²|` and the `k`-torsion counts `#{x : kx = 0}` by enumerating every
/// 2-cochain `Γ×Γ → A` with `δc(h,g,k) = h·c(g,k) − c(hg,k) + c(h,gk) − c(h,g)`.
fn h2_brute(gg: &GammaGroup, a: &[usize], ks: &[usize]) -> (usize, Vec<usize>) {
    let gamma = gg.gamma();
    let base = gg.base();
    let n = gamma.order();
    let size = a.len();
    let cells = n * n;
    let add = |x: usize, y: usize| base.mul(x, y);
    let neg = |x: usize| base.inv(x);
    let mut boundaries: HashSet<Vec<usize>> = HashSet::new();
    for mut code in 0..size.pow(n as u32) {
        let beta: Vec<usize> = (0..n)
            .map(|_| {
                let v = a[code % size];
                code /= size;
                v
            })
            .collect();
        let c: Vec<usize> = (0..cells)
            .map(|x| {
                let (h, g) = (x / n, x % n);
                add(add(beta[h], gg.act(h, beta[g])), neg(beta[gamma.mul(h, g)]))
            })
            .collect();
        boundaries.insert(c);
    }
    let mut z = Vec::new();
    for mut code in 0..size.pow(cells as u32) {
        let c: Vec<usize> = (0..cells)
            .map(|_| {
                let v = a[code % size];
                code /= size;
                v
            })
            .collect();
        let closed = gamma.elements().all(|h| {
            gamma.elements().all(|g| {
                gamma.elements().all(|k| {
                    let lhs = add(gg.act(h, c[g * n + k]), c[h * n + gamma.mul(g, k)]);
                    let rhs = add(c[gamma.mul(h, g) * n + k], c[h * n + g]);
                    lhs == rhs
                })
            })
        });
        if closed {
            z.push(c);
        }
    }
    let torsion = ks
        .iter()
        .map(|&k| {
            z.iter()
                .filter(|c| {
                    boundaries.contains(&c.iter().map(|&x| base.pow(x, k)).collect::<Vec<_>>())
                })
                .count()
                / boundaries.len()
        })
        .collect();
    (z.len() / boundaries.len(), torsion)
}

fn h2() -> Outcome {
    let corpus = central_corpus().map_err(|e| e.to_string())?;
    let mut brute = 0;
    for (name, gg, sub) in &corpus {
        let ext = CentralExtension::new(gg, sub).map_err(|e| format!("{name}: {e}"))?;
        let factors = ext.h2().factors().to_vec();
        let n = gg.gamma().order() as u32;
        if (sub.len() as u128).pow(n * n) <= 1 << 16 {
            let ks: Vec<usize> = (1..=12).collect();
            let (order, torsion) = h2_brute(gg, sub.members(), &ks);
            let lib_order: i128 = factors.iter().product();
            check(lib_order == order as i128, || {
                format!("{name}: |H2| {lib_order} vs oracle {order}")
            })?;
            for (&k, &count) in ks.iter().zip(&torsion) {
                let expected: i128 = factors.iter().map(|&d| gcd_i(k as i128, d)).product();
                check(expected == count as i128, || {
                    format!("{name}: {k}-torsion {expected} vs oracle {count}")
                })?;
            }
            brute += 1;
        }
        // exactness at H¹(Γ, B/A): a class lifts iff δ vanishes on it
        let report = ext.exactness_check(0).map_err(|e| format!("{name}: {e}"))?;
        let c = ext.quotient();
        let h_c = c.h1().map_err(|e| e.to_string())?;
        let z_c = cocycles(c);
        let class_c = classes(c, &z_c);
        let proj = ext.projection().hom();
        let hit: HashSet<usize> = cocycles(gg)
            .iter()
            .map(|beta| class_c[&beta.iter().map(|&b| proj.apply(b)).collect::<Vec<_>>()])
            .collect();
        check(
            h_c.len() == class_c.values().collect::<HashSet<_>>().len(),
            || format!("{name}: |H1(B/A)| differs"),
        )?;
        for (i, rep) in h_c.representatives().iter().enumerate() {
            let lifts = hit.contains(&class_c[rep]);
            check(report.lifts[i] == lifts, || {
                format!(
                    "{name}: class {i} lift {} vs oracle {lifts}",
                    report.lifts[i]
                )
            })?;
            let zero = report.delta[i].iter().all(|&x| x == 0);
            check(zero == lifts, || {
                format!(
                    "{name}: class {i} delta {:?} but lifts = {lifts}",
                    report.delta[i]
                )
            })?;
        }
    }
    Ok(format!("{} extensions, {brute} brute-forced", corpus.len()))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, &str, u64, fn() -> Outcome)> = vec![
        ("1", "Hilbert 90 for GL_m", 60, || hilbert90(false)),
        ("2", "SL_m triviality", 60, || hilbert90(true)),
        ("3", "orbit-kernel bijection", 120, orbit_kernel),
        ("4", "twisted actions = H1", 120, twisted),
        ("5", "Shapiro and map groups", 120, shapiro),
        ("6a", "etale count = conjugacy classes", 30, etale_counts),
        (
            "6b",
            "etale count = p(m) for n >= m",
            30,
            etale_partition_literal,
        ),
        ("7", "realization and discriminant", 60, realization),
        ("8", "K/k-forms of quadratic forms", 60, forms),
        ("9", "units isomorphism", 30, units),
        ("10", "H2 oracle and delta exactness", 120, h2),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("exceeded {limit} s")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        // written to the stdout handle directly so the line survives capture
        writeln!(
            std::io::stdout(),
            "{tag} {id:>3} {name} [{:.2} s < {limit} s]: {detail}",
            elapsed.as_secs_f64()
        )
        .unwrap();
        if outcome.is_ok() == KNOWN_FALSE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(
        unexpected.is_empty(),
        "criteria with unexpected outcome: {unexpected:?}"
    );
}
