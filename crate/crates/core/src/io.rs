//! JSON input schemas and report serialization.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{GammaGroup, H1Set};
use crate::error::{Error, Result};
use crate::etale::{EtaleAlgebra, EtaleClass};
use crate::exactness::{CentralExtension, DeltaReport};
use crate::field::{FqTower, Mat};
use crate::galois_linear::{FormsReport, Hilbert90Report, TensorOnV};
use crate::group::{
    cyclic_group, dihedral_group, make_group, symmetric_group, FiniteGroup, Subgroup,
};
use crate::quad::UnitsReport;

/// A group given by its table or by a named family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Family {
        family: String,
        n: usize,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table {
                order,
                table,
                labels,
            } => {
                if table.len() != *order {
                    return Err(Error::InvalidInput(format!(
                        "table has {} rows, order is {order}",
                        table.len()
                    )));
                }
                make_group(table.clone(), labels.clone())
            }
            GroupSpec::Family { family, n } => {
                let order_check = |order: u128| {
                    crate::error::size_check(
                        "group order",
                        order,
                        crate::limits::limits().max_group_order as u128,
                    )
                };
                match family.as_str() {
                    _ if *n == 0 => Err(Error::InvalidInput(
                        "family parameter must be positive".into(),
                    )),
                    "cyclic" => order_check(*n as u128).map(|_| cyclic_group(*n)),
                    "symmetric" => symmetric_group(*n),
                    "dihedral" => order_check(2 * *n as u128).map(|_| dihedral_group(*n)),
                    other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
                }
            }
        }
    }
}

/// A `Γ`-group, optionally with a central `Γ`-stable subgroup for `H²`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionSpec {
    pub gamma: GroupSpec,
    pub base: GroupSpec,
    /// `action[γ][a] = a^γ`.
    pub action: Vec<Vec<usize>>,
    #[serde(default)]
    pub central: Option<Vec<usize>>,
}

impl ActionSpec {
    pub fn build(&self) -> Result<GammaGroup> {
        let gamma = self.gamma.build()?;
        let base = self.base.build()?;
        GammaGroup::new(&gamma, &base, self.action.clone())
    }

    pub fn build_extension(&self) -> Result<Option<CentralExtension>> {
        let g = self.build()?;
        match &self.central {
            None => Ok(None),
            Some(members) => {
                let sub = Subgroup::new(g.base(), members.clone())?;
                CentralExtension::new(&g, &sub).map(Some)
            }
        }
    }
}

/// A tensor over a tower; coefficients are coordinate vectors over `F_p`
/// in the polynomial basis, lowest degree first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorSpec {
    pub p: u64,
    pub d: usize,
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "type")]
    pub kind: [usize; 2],
    pub coeffs: Vec<Vec<u64>>,
}

impl TensorSpec {
    pub fn build(&self) -> Result<(FqTower, TensorOnV)> {
        let tower = FqTower::new(self.p, self.d, self.n)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if c.len() > tower.degree() || c.iter().any(|&x| x >= self.p) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {c:?} is not an element of the field"
                )));
            }
            coeffs.push(tower.from_digits(c));
        }
        let tensor = TensorOnV::new(self.dim, self.kind[0], self.kind[1], coeffs)?;
        Ok((tower, tensor))
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

fn mat_json(tower: &FqTower, a: &Mat) -> Value {
    let rows: Vec<Vec<Vec<u64>>> = (0..a.m)
        .map(|i| (0..a.m).map(|j| tower.digits(a.get(i, j))).collect())
        .collect();
    json!(rows)
}

pub fn h1_json(h1: &H1Set) -> Value {
    json!({
        "classes": h1.len(),
        "cocycles": h1.cocycle_count(),
        "distinguished": h1.distinguished(),
        "representatives": h1.representatives(),
    })
}

pub fn h2_json(ext: &CentralExtension, delta: &DeltaReport) -> Value {
    json!({
        "h2_factors": ext.h2().factors(),
        "h1_quotient": delta.h1_quotient,
        "delta": delta.delta,
        "lifts": delta.lifts,
    })
}

pub fn etale_json(class: &EtaleClass, algebra: Option<&EtaleAlgebra>) -> Result<Value> {
    let gamma = class.gamma();
    let gens = gamma.generators();
    let psi: Vec<Vec<usize>> = gens.iter().map(|&g| class.permutation(g)).collect();
    let is_galois = if class.is_field() {
        Some(class.is_galois()?.is_some())
    } else {
        None
    };
    let mut row = json!({
        "psi": psi,
        "orbits": class.orbits(),
        "factor_structure": class.factor_structure(),
        "is_field": class.is_field(),
        "is_galois": is_galois,
        "is_cyclic": class.is_cyclic_field(),
        "discriminant_trivial": class.discriminant_trivial()?,
    });
    if let Some(alg) = algebra {
        let tower = alg.tower();
        let disc = alg.trace_form_discriminant();
        row["realization"] = json!({
            "dimension": alg.dim(),
            "factor_degrees": alg.factor_degrees(),
            "trace_discriminant": tower.digits(disc),
            "trace_discriminant_square": tower.is_base_square(disc),
        });
    }
    Ok(row)
}

pub fn hilbert90_json(tower: &FqTower, r: &Hilbert90Report) -> Value {
    json!({
        "p": r.p,
        "d": r.d,
        "n": r.n,
        "m": r.m,
        "group": if r.special { "SL" } else { "GL" },
        "group_order": r.group_order,
        "cocycles": r.cocycle_count,
        "coboundaries": r.coboundary_count,
        "counterexamples": r.counterexamples.iter().map(|a| mat_json(tower, a)).collect::<Vec<_>>(),
        "generic_classes": r.generic_classes,
        "det_surjective": r.det_surjective,
        "norm_surjective": r.norm_surjective,
        "passed": r.passed(),
    })
}

pub fn forms_json(tower: &FqTower, r: &FormsReport) -> Value {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "cocycle": mat_json(tower, &c.cocycle),
                "transporter": mat_json(tower, &c.transporter),
                "form": c.form.coeffs.iter().map(|&x| tower.digits(x)).collect::<Vec<_>>(),
                "orbit": c.orbit,
            })
        })
        .collect();
    json!({
        "stabilizer_order": r.stabilizer_order,
        "orbit_size": r.orbit_size,
        "invariant_tensors": r.invariant_count,
        "direct_count": r.direct_count(),
        "h1_size": r.h1_size,
        "cohomological_count": r.cohomological_count(),
        "classes": classes,
    })
}

pub fn units_json(r: &UnitsReport) -> Value {
    let ramified: Vec<Value> = r
        .ramified
        .iter()
        .map(|(p, q)| {
            let (a, b, c) = q.normal_form();
            json!({"p": p, "ideal": [a.to_string(), b.to_string(), c.to_string()]})
        })
        .collect();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|&(mask, lambda, unit, class)| {
            json!({
                "subset": mask,
                "generator": [lambda.0.to_string(), lambda.1.to_string()],
                "cocycle": [unit.0.to_string(), unit.1.to_string()],
                "class": class,
            })
        })
        .collect();
    json!({
        "d": r.d,
        "ramified": ramified,
        "quotient_order": r.quotient_order,
        "h1_order": r.h1_order,
        "matched": r.matched,
        "witnesses": witnesses,
    })
}

/// Flattens an array of flat JSON objects into TSV; nested values are
/// written as compact JSON.
pub fn to_tsv(rows: &[Value]) -> String {
    let mut keys: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(map) = row {
            for k in map.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
    }
    let mut out = keys.join("\t");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = keys
            .iter()
            .map(|k| match row.get(k) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_action_file() {
        let text = r#"{"gamma": {"family": "cyclic", "n": 2},
                       "base": {"family": "cyclic", "n": 4},
                       "action": [[0,1,2,3],[0,3,2,1]]}"#;
        let spec: ActionSpec = parse(text).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g.h1().unwrap().len(), 2);
        let bad = parse::<ActionSpec>("{\"gamma\": \n [}");
        match bad {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_table_and_tensor() {
        let spec: GroupSpec = parse(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(spec.build().unwrap().order(), 2);
        let t: TensorSpec =
            parse(r#"{"p":3,"d":1,"n":2,"dim":2,"type":[2,0],"coeffs":[[1],[0],[0],[1]]}"#)
                .unwrap();
        let (tower, tensor) = t.build().unwrap();
        assert!(tensor.defined_over_k(&tower));
    }

    #[test]
    fn tsv_layout() {
        let rows = vec![json!({"a": 1, "b": [1, 2]}), json!({"a": 2, "c": "x"})];
        assert_eq!(to_tsv(&rows), "a\tb\tc\n1\t[1,2]\t\n2\t\tx\n");
    }
}
