//! Fixed corpora and the verification suites run by `cocycle verify`.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::cohomology::GammaGroup;
use crate::error::{Error, Result};
use crate::exactness::{orbit_kernel_bijection, CentralExtension};
use crate::field::FqTower;
use crate::galois_linear::{classify_forms, hilbert90_verify, sl_h1_verify, TensorOnV};
use crate::group::{
    all_subgroups, cyclic_group, dihedral_group, direct_product, quaternion_group, symmetric_group,
    FiniteGroup, GroupHom, Subgroup,
};
use crate::quad::{verify_units_iso, QuadRing};
use crate::twisted::{classify_phs, map_group, restrict_gamma, shapiro_verify};

pub const SUITES: [&str; 7] = [
    "hilbert90",
    "kernel-bijection",
    "shapiro",
    "twisted",
    "units",
    "forms",
    "h2",
];

/// `a^(γ) = auto^γ(a)` for cyclic `Γ = Z/n`.
pub fn cyclic_action(n: usize, base: &FiniteGroup, auto: &[usize]) -> Result<GammaGroup> {
    GammaGroup::from_fn(&cyclic_group(n), base, |j, a| {
        (0..j).fold(a, |x, _| auto[x])
    })
}

/// `a^γ = x^γ·a·x^(−γ)` for cyclic `Γ = Z/n`; needs `x^n` central.
pub fn cyclic_conjugation(n: usize, base: &FiniteGroup, x: usize) -> Result<GammaGroup> {
    GammaGroup::from_fn(&cyclic_group(n), base, |j, a| base.conj(base.pow(x, j), a))
}

/// `a^γ = a^(-1)` for odd `γ` in `Z/n` (`n` even), on an abelian group.
pub fn cyclic_inversion(n: usize, base: &FiniteGroup) -> Result<GammaGroup> {
    let inv: Vec<usize> = base.elements().map(|a| base.inv(a)).collect();
    cyclic_action(n, base, &inv)
}

/// Same action as `cyclic_action`, on an `H` indexed as [`Subgroup::to_group`]
/// with `H` cyclic.
fn cyclic_subgroup_action(h: &Subgroup, base: &FiniteGroup, auto: &[usize]) -> Result<GammaGroup> {
    let (hg, _) = h.to_group();
    let n = hg.order();
    let gen = hg
        .elements()
        .find(|&x| hg.element_order(x) == n)
        .expect("cyclic subgroup");
    let mut exponent = vec![0usize; n];
    let mut x = hg.identity();
    for k in 0..n {
        exponent[x] = k;
        x = hg.mul(x, gen);
    }
    GammaGroup::from_fn(&hg, base, |l, a| (0..exponent[l]).fold(a, |y, _| auto[y]))
}

fn klein() -> FiniteGroup {
    direct_product(&cyclic_group(2), &cyclic_group(2))
}

/// The order-3 automorphism `i → j → k → i` of `Q_8`.
const Q8_ROTATION: [usize; 8] = [0, 1, 4, 5, 6, 7, 2, 3];
/// The order-3 automorphism of `Z/2 × Z/2` cycling its nonzero elements.
const V4_ROTATION: [usize; 4] = [0, 2, 3, 1];

/// `Γ`-groups with `|Γ| ≤ 6` and `|B| ≤ 24`.
pub fn action_corpus() -> Result<Vec<(String, GammaGroup)>> {
    let z4 = cyclic_group(4);
    let s3 = symmetric_group(3)?;
    let s4 = symmetric_group(4)?;
    let d4 = dihedral_group(4);
    let q8 = quaternion_group();
    let transposition = |g: &FiniteGroup| {
        g.elements()
            .find(|&x| g.element_order(x) == 2)
            .expect("involution")
    };
    let three_cycle = s3
        .elements()
        .find(|&x| s3.element_order(x) == 3)
        .expect("3-cycle");
    let s3_self = GammaGroup::conjugation(&s3, &s3, &GroupHom::identity(&s3))?;
    Ok(vec![
        ("mu4 / Z2 inversion".into(), cyclic_inversion(2, &z4)?),
        ("mu4 / Z4 inversion".into(), cyclic_inversion(4, &z4)?),
        (
            "Z4 / Z2 trivial".into(),
            GammaGroup::trivial(&cyclic_group(2), &z4),
        ),
        (
            "Z4 / Z3 trivial".into(),
            GammaGroup::trivial(&cyclic_group(3), &z4),
        ),
        (
            "S3 / Z2 conjugation".into(),
            cyclic_conjugation(2, &s3, transposition(&s3))?,
        ),
        (
            "S3 / Z3 conjugation".into(),
            cyclic_conjugation(3, &s3, three_cycle)?,
        ),
        (
            "S3 / Z2 trivial".into(),
            GammaGroup::trivial(&cyclic_group(2), &s3),
        ),
        ("S3 / S3 conjugation".into(), s3_self),
        (
            "D4 / Z2 conjugation by s".into(),
            cyclic_conjugation(2, &d4, 4)?,
        ),
        (
            "D4 / Z2 conjugation by r".into(),
            cyclic_conjugation(2, &d4, 1)?,
        ),
        (
            "D4 / Z3 trivial".into(),
            GammaGroup::trivial(&cyclic_group(3), &d4),
        ),
        (
            "Q8 / Z2 conjugation by i".into(),
            cyclic_conjugation(2, &q8, 2)?,
        ),
        (
            "Q8 / Z3 rotation".into(),
            cyclic_action(3, &q8, &Q8_ROTATION)?,
        ),
        (
            "Q8 / Z2 trivial".into(),
            GammaGroup::trivial(&cyclic_group(2), &q8),
        ),
        (
            "V4 / Z3 rotation".into(),
            cyclic_action(3, &klein(), &V4_ROTATION)?,
        ),
        (
            "Z6 / Z2 inversion".into(),
            cyclic_inversion(2, &cyclic_group(6))?,
        ),
        (
            "S4 / Z2 conjugation".into(),
            cyclic_conjugation(2, &s4, transposition(&s4))?,
        ),
    ])
}

/// `(name, B, A)` for every `Γ`-stable subgroup `A` of every corpus `B`.
pub fn kernel_bijection_corpus() -> Result<Vec<(String, GammaGroup, Subgroup)>> {
    let mut out = Vec::new();
    for (name, g) in action_corpus()? {
        for sub in all_subgroups(g.base()) {
            if g.stability_witness(&sub).is_none() {
                out.push((format!("{name} ⊃ {:?}", sub.members()), g.clone(), sub));
            }
        }
    }
    Ok(out)
}

/// `(Γ, G)` pairs with `|Γ| ≤ 4` and `|G| ≤ 8`.
pub fn twisted_corpus() -> Result<Vec<(String, GammaGroup)>> {
    let mut out: Vec<(String, GammaGroup)> = action_corpus()?
        .into_iter()
        .filter(|(_, g)| g.gamma().order() <= 4 && g.base().order() <= 8)
        .collect();
    let v4 = klein();
    let z4 = cyclic_group(4);
    // V4 acts on Z/4 through its first factor, by inversion
    let through_first =
        GammaGroup::from_fn(&v4, &z4, |g, a| if g / 2 == 1 { z4.inv(a) } else { a })?;
    out.push(("Z4 / V4 inversion".into(), through_first));
    out.push((
        "Z8 / Z2 inversion".into(),
        cyclic_inversion(2, &cyclic_group(8))?,
    ));
    out.push((
        "Z2 / V4 trivial".into(),
        GammaGroup::trivial(&v4, &cyclic_group(2)),
    ));
    let v8 = direct_product(&v4, &cyclic_group(2));
    // swap the two Z/2 factors of V4 inside Z/2^3
    let swap: Vec<usize> = v8
        .elements()
        .map(|x| ((x / 4) % 2) * 2 + (x / 2) % 2 * 4 + x % 2)
        .collect();
    out.push(("Z2^3 / Z2 swap".into(), cyclic_action(2, &v8, &swap)?));
    Ok(out)
}

/// `(name, Γ, H, H-group)` for Shapiro's lemma.
pub fn shapiro_corpus() -> Result<Vec<(String, FiniteGroup, Subgroup, GammaGroup)>> {
    let z4 = cyclic_group(4);
    let s3 = symmetric_group(3)?;
    let z3 = cyclic_group(3);
    let inv3: Vec<usize> = z3.elements().map(|a| z3.inv(a)).collect();
    let inv4: Vec<usize> = z4.elements().map(|a| z4.inv(a)).collect();
    let t = s3
        .elements()
        .find(|&x| s3.element_order(x) == 2)
        .expect("transposition");
    let a3 = Subgroup::new(
        &s3,
        s3.elements()
            .filter(|&x| s3.element_order(x) != 2)
            .collect(),
    )?;
    let t_sub = Subgroup::generated(&s3, &[t]);
    let half = Subgroup::new(&z4, vec![0, 2])?;
    let s3_self = GammaGroup::conjugation(&s3, &s3, &GroupHom::identity(&s3))?;
    let v4 = klein();
    let mut out = Vec::new();
    for (h_name, gamma, h) in [
        ("Z4 ⊃ Z2", &z4, &half),
        ("S3 ⊃ A3", &s3, &a3),
        ("S3 ⊃ <(12)>", &s3, &t_sub),
    ] {
        let (hg, _) = h.to_group();
        out.push((
            format!("{h_name}, Z2 trivial"),
            gamma.clone(),
            h.clone(),
            GammaGroup::trivial(&hg, &cyclic_group(2)),
        ));
        out.push((
            format!("{h_name}, S3 trivial"),
            gamma.clone(),
            h.clone(),
            GammaGroup::trivial(&hg, &s3),
        ));
        if h.len() == 2 {
            out.push((
                format!("{h_name}, Z3 inversion"),
                gamma.clone(),
                h.clone(),
                cyclic_subgroup_action(h, &z3, &inv3)?,
            ));
            out.push((
                format!("{h_name}, mu4 inversion"),
                gamma.clone(),
                h.clone(),
                cyclic_subgroup_action(h, &z4, &inv4)?,
            ));
            let conj_t: Vec<usize> = s3.elements().map(|a| s3.conj(t, a)).collect();
            let inner = cyclic_subgroup_action(h, &s3, &conj_t)?;
            out.push((
                format!("{h_name}, S3 conjugation"),
                gamma.clone(),
                h.clone(),
                inner,
            ));
        } else {
            out.push((
                format!("{h_name}, V4 rotation"),
                gamma.clone(),
                h.clone(),
                cyclic_subgroup_action(h, &v4, &V4_ROTATION)?,
            ));
            out.push((
                format!("{h_name}, S3 conjugation"),
                gamma.clone(),
                h.clone(),
                restrict_gamma(&s3_self, h)?,
            ));
        }
    }
    // Z/4 acting on S3 through conjugation by a transposition, restricted to {0, 2}
    let c = cyclic_conjugation(4, &s3, t)?;
    out.push((
        "Z4 ⊃ Z2, S3 restricted conjugation".into(),
        z4.clone(),
        half.clone(),
        restrict_gamma(&c, &half)?,
    ));
    Ok(out)
}

/// `(name, Γ, G)` for the map-group corollary (`H = {e}`).
pub fn map_group_corpus() -> Result<Vec<(String, FiniteGroup, FiniteGroup)>> {
    let s3 = symmetric_group(3)?;
    let gammas: Vec<(&str, FiniteGroup)> = vec![
        ("Z2", cyclic_group(2)),
        ("Z3", cyclic_group(3)),
        ("Z4", cyclic_group(4)),
        ("V4", klein()),
        ("S3", s3.clone()),
    ];
    let bases: Vec<(&str, FiniteGroup)> = vec![
        ("Z2", cyclic_group(2)),
        ("Z3", cyclic_group(3)),
        ("S3", s3.clone()),
        ("Q8", quaternion_group()),
    ];
    let mut out = Vec::new();
    for (gn, g) in &gammas {
        for (bn, b) in &bases {
            if (b.order() as u128).pow(g.order() as u32) <= 1 << 16 {
                out.push((format!("{gn} on maps to {bn}"), g.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// `(name, B, A)` with `A` central and `Γ`-stable.
pub fn central_corpus() -> Result<Vec<(String, GammaGroup, Subgroup)>> {
    let z4 = cyclic_group(4);
    let z6 = cyclic_group(6);
    let d4 = dihedral_group(4);
    let q8 = quaternion_group();
    let v4 = klein();
    let s3 = symmetric_group(3)?;
    let sign_inversion =
        GammaGroup::from_fn(
            &s3,
            &z4,
            |g, a| if s3.sign(g) == Some(-1) { z4.inv(a) } else { a },
        )?;
    let swap = [0usize, 2, 1, 3];
    let cases: Vec<(&str, GammaGroup, Vec<usize>)> = vec![
        (
            "Z4 ⊃ 2Z4 / Z2 trivial",
            GammaGroup::trivial(&cyclic_group(2), &z4),
            vec![0, 2],
        ),
        (
            "Z4 ⊃ 2Z4 / Z2 inversion",
            cyclic_inversion(2, &z4)?,
            vec![0, 2],
        ),
        (
            "Z4 ⊃ 2Z4 / Z4 inversion",
            cyclic_inversion(4, &z4)?,
            vec![0, 2],
        ),
        ("Z4 ⊃ 2Z4 / S3 sign", sign_inversion, vec![0, 2]),
        (
            "D4 ⊃ centre / Z2 conjugation",
            cyclic_conjugation(2, &d4, 4)?,
            vec![0, 2],
        ),
        (
            "Q8 ⊃ centre / Z2 conjugation",
            cyclic_conjugation(2, &q8, 2)?,
            vec![0, 1],
        ),
        (
            "Q8 ⊃ centre / Z3 rotation",
            cyclic_action(3, &q8, &Q8_ROTATION)?,
            vec![0, 1],
        ),
        (
            "V4 ⊃ Z2 / Z2 trivial",
            GammaGroup::trivial(&cyclic_group(2), &v4),
            vec![0, 1],
        ),
        (
            "V4 ⊃ diagonal / Z2 swap",
            cyclic_action(2, &v4, &swap)?,
            vec![0, 3],
        ),
        (
            "Z6 ⊃ 2Z6 / Z3 trivial",
            GammaGroup::trivial(&cyclic_group(3), &z6),
            vec![0, 2, 4],
        ),
        (
            "Z6 ⊃ 3Z6 / Z2 inversion",
            cyclic_inversion(2, &z6)?,
            vec![0, 3],
        ),
        (
            "Z6 ⊃ 2Z6 / Z2 inversion",
            cyclic_inversion(2, &z6)?,
            vec![0, 2, 4],
        ),
    ];
    cases
        .into_iter()
        .map(|(name, g, members)| {
            let sub = Subgroup::new(g.base(), members)?;
            Ok((name.to_string(), g, sub))
        })
        .collect()
}

/// `(q, n, m)` for `GL_m(F_(q^n))` and `SL_m(F_(q^n))`.
pub const HILBERT90_CORPUS: [(u64, usize, usize); 7] = [
    (2, 2, 1),
    (2, 2, 2),
    (3, 2, 1),
    (3, 2, 2),
    (2, 3, 1),
    (2, 3, 2),
    (5, 2, 1),
];

/// `d` for `Q(√−d)`.
pub const UNITS_CORPUS: [u64; 9] = [1, 2, 3, 5, 6, 7, 10, 13, 15];

/// `(name, (p, d, n), τ)`.
pub fn forms_corpus() -> Result<Vec<(String, (u64, usize, usize), TensorOnV)>> {
    Ok(vec![
        (
            "x^2 + y^2 over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::bilinear(2, &[1, 0, 0, 1])?,
        ),
        (
            "zero form over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::bilinear(2, &[0; 4])?,
        ),
        (
            "x^2 over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::bilinear(1, &[1])?,
        ),
        (
            "2x^2 over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::bilinear(1, &[2])?,
        ),
        (
            "x^2 over F3 split by F27".into(),
            (3, 1, 3),
            TensorOnV::bilinear(1, &[1])?,
        ),
        (
            "x^2 over F5 split by F25".into(),
            (5, 1, 2),
            TensorOnV::bilinear(1, &[1])?,
        ),
        (
            "xy over F2 split by F4".into(),
            (2, 1, 2),
            TensorOnV::bilinear(2, &[0, 1, 1, 0])?,
        ),
        (
            "diag(1,2) endomorphism over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::new(2, 1, 1, vec![1, 0, 0, 2])?,
        ),
        (
            "nilpotent endomorphism over F3 split by F9".into(),
            (3, 1, 2),
            TensorOnV::new(2, 1, 1, vec![0, 1, 0, 0])?,
        ),
    ])
}

/// One corpus case of a suite.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub suite: &'static str,
    pub case: String,
    pub passed: bool,
    pub counts: Value,
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl CaseResult {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "case": self.case,
            "passed": self.passed,
            "counts": self.counts,
            "error": self.error,
        })
    }
}

fn run_case(
    suite: &'static str,
    case: String,
    f: impl FnOnce() -> Result<Value>,
) -> Result<CaseResult> {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    match outcome {
        Ok(counts) => {
            let passed = counts
                .get("passed")
                .and_then(Value::as_bool)
                .unwrap_or(true);
            Ok(CaseResult {
                suite,
                case,
                passed,
                counts,
                error: None,
                elapsed,
            })
        }
        Err(e @ Error::SizeLimit { .. }) => Err(e),
        Err(e) => Ok(CaseResult {
            suite,
            case,
            passed: false,
            counts: Value::Null,
            error: Some(e.to_string()),
            elapsed,
        }),
    }
}

/// Runs one suite (or `all`). Size-limit errors abort the run; every other
/// error is recorded as a failed case.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    match name {
        "all" => {
            for s in SUITES {
                out.extend(run_suite(s, seed)?);
            }
        }
        "hilbert90" => {
            for (q, n, m) in HILBERT90_CORPUS {
                for special in [false, true] {
                    let label = format!("{}_{m}(F_{q}^{n})", if special { "SL" } else { "GL" });
                    out.push(run_case("hilbert90", label, || {
                        let tower = FqTower::new(q, 1, n)?;
                        let r = if special {
                            sl_h1_verify(&tower, m)?
                        } else {
                            hilbert90_verify(&tower, m)?
                        };
                        Ok(crate::io::hilbert90_json(&tower, &r))
                    })?);
                }
            }
        }
        "kernel-bijection" => {
            for (label, g, sub) in kernel_bijection_corpus()? {
                out.push(run_case("kernel-bijection", label, || {
                    let r = orbit_kernel_bijection(&g, &sub)?;
                    Ok(json!({"orbits": r.orbit_count, "kernel": r.kernel_size}))
                })?);
            }
        }
        "shapiro" => {
            for (label, gamma, h, inner) in shapiro_corpus()? {
                out.push(run_case("shapiro", label, || {
                    let r = shapiro_verify(&gamma, &h, &inner)?;
                    Ok(json!({"induced": r.induced_classes, "restricted": r.restricted_classes}))
                })?);
            }
            for (label, gamma, g) in map_group_corpus()? {
                out.push(run_case("shapiro", label, || {
                    let h1 = map_group(&gamma, &g)?.gamma_group().h1()?;
                    Ok(json!({"classes": h1.len(), "passed": h1.len() == 1}))
                })?);
            }
        }
        "twisted" => {
            for (label, g) in twisted_corpus()? {
                out.push(run_case("twisted", label, || {
                    let r = classify_phs(&g)?;
                    Ok(json!({"h1": r.h1.len(), "twisted_classes": r.twisted_classes}))
                })?);
            }
        }
        "units" => {
            for d in UNITS_CORPUS {
                out.push(run_case("units", format!("d = {d}"), || {
                    let r = verify_units_iso(&QuadRing::new(d)?)?;
                    Ok(json!({"quotient_order": r.quotient_order, "h1_order": r.h1_order, "passed": r.matched}))
                })?);
            }
        }
        "forms" => {
            for (label, (p, d, n), tau) in forms_corpus()? {
                out.push(run_case("forms", label, || {
                    let tower = FqTower::new(p, d, n)?;
                    let r = classify_forms(&tower, &tau)?;
                    Ok(json!({
                        "direct": r.direct_count(),
                        "cohomological": r.cohomological_count(),
                        "passed": r.direct_count() == r.cohomological_count(),
                    }))
                })?);
            }
        }
        "h2" => {
            for (label, g, sub) in central_corpus()? {
                out.push(run_case("h2", label, || {
                    let ext = CentralExtension::new(&g, &sub)?;
                    let r = ext.exactness_check(seed)?;
                    Ok(crate::io::h2_json(&ext, &r))
                })?);
            }
        }
        other => return Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
    }
    Ok(out)
}
