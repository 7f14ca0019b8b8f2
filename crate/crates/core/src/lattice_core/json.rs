use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{GramMatrix, JordanComponent, JordanLattice, Shape};
use crate::dyadic_field::{Field, IdealExp};
use crate::error::{Error, Result};

/// `{"gram": [[...]]}` or `{"jordan": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeJson {
    Gram { gram: Vec<Vec<Value>> },
    Jordan { jordan: Vec<ComponentJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub scale: i32,
    pub proper: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

fn value_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        other => Err(Error::Parse(format!("expected element text, got {other}"))),
    }
}

impl ComponentJson {
    fn to_component(&self, fd: &Field) -> Result<JordanComponent> {
        if self.proper {
            if self.m.is_some() || self.kind.is_some() {
                return Err(Error::InvalidLattice(
                    "proper components take \"diag\" only".into(),
                ));
            }
            let diag = self
                .diag
                .as_ref()
                .ok_or_else(|| Error::InvalidLattice("proper component needs \"diag\"".into()))?;
            let classes = diag
                .iter()
                .map(|v| {
                    let e = fd.parse(&value_text(v)?)?;
                    if fd.valuation(&e) != Some(0) {
                        return Err(Error::InvalidLattice(format!(
                            "diagonal entry {} is not a unit",
                            fd.format(&e)
                        )));
                    }
                    fd.square_class(&e)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(JordanComponent::proper(self.scale, classes))
        } else {
            if self.diag.is_some() {
                return Err(Error::InvalidLattice(
                    "improper components take \"m\" and \"type\"".into(),
                ));
            }
            let m = self
                .m
                .ok_or_else(|| Error::InvalidLattice("improper component needs \"m\"".into()))?;
            let delta = match self.kind.as_deref() {
                Some("plain") | None => false,
                Some("delta") => true,
                Some(other) => {
                    return Err(Error::InvalidLattice(format!("unknown type {other:?}")))
                }
            };
            Ok(JordanComponent::improper(self.scale, m, delta))
        }
    }

    pub fn from_component(c: &JordanComponent, fd: &Field) -> ComponentJson {
        match &c.shape {
            Shape::Proper(diag) => ComponentJson {
                scale: c.scale,
                proper: true,
                diag: Some(
                    diag.iter()
                        .map(|&e| Value::String(fd.format(&fd.class_rep(e))))
                        .collect(),
                ),
                m: None,
                kind: None,
            },
            Shape::Improper { half_dim, delta } => ComponentJson {
                scale: c.scale,
                proper: false,
                diag: None,
                m: Some(*half_dim),
                kind: Some(if *delta { "delta" } else { "plain" }.to_string()),
            },
        }
    }
}

impl LatticeJson {
    pub fn from_lattice(l: &JordanLattice, fd: &Field) -> LatticeJson {
        LatticeJson::Jordan {
            jordan: l
                .components()
                .iter()
                .map(|c| ComponentJson::from_component(c, fd))
                .collect(),
        }
    }

    pub fn gram_matrix(&self, fd: &Field) -> Result<GramMatrix> {
        match self {
            LatticeJson::Gram { gram } => GramMatrix::new(
                gram.iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| fd.parse(&value_text(v)?))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            LatticeJson::Jordan { .. } => Ok(GramMatrix::from_lattice(&self.to_lattice(fd)?, fd)),
        }
    }

    pub fn to_lattice(&self, fd: &Field) -> Result<JordanLattice> {
        match self {
            LatticeJson::Gram { .. } => self.gram_matrix(fd)?.jordan_split(fd),
            LatticeJson::Jordan { jordan } => {
                let comps = jordan
                    .iter()
                    .map(|c| c.to_component(fd))
                    .collect::<Result<Vec<_>>>()?;
                JordanLattice::new(comps, fd)
            }
        }
    }

    pub fn parse(text: &str) -> Result<LatticeJson> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("lattice JSON: {e}")))
    }
}

impl JordanLattice {
    pub fn to_json(&self, fd: &Field) -> Value {
        serde_json::to_value(LatticeJson::from_lattice(self, fd)).expect("serializable")
    }
}

fn ideal_json(i: IdealExp) -> Value {
    match i.exp() {
        None => Value::String("zero ideal".into()),
        Some(e) => json!(e),
    }
}

/// Scales, norms, dims, component spaces and the `d_i` / `Delta_i` tables
/// over the effective range of `i`.
pub fn invariants_report(l: &JordanLattice, fd: &Field) -> Value {
    let comps: Vec<Value> = l
        .components()
        .iter()
        .zip(l.component_spaces())
        .map(|(c, v)| {
            let mut o = serde_json::to_value(ComponentJson::from_component(c, fd))
                .expect("serializable");
            o["norm"] = json!(c.norm_exp());
            o["dim"] = json!(c.dim());
            o["space"] = serde_json::to_value(v.to_json(fd)).expect("serializable");
            o["signed_disc"] = json!(fd.format(&fd.class_rep(v.signed_disc(fd))));
            o
        })
        .collect();
    let table: Vec<Value> = match (l.min_scale(), l.max_scale()) {
        (Some(lo), Some(hi)) => (lo - 2..=hi + 2)
            .map(|i| {
                json!({
                    "i": i,
                    "dim_le": l.dim_le(i),
                    "fd": ideal_json(l.fd_ideal(i)),
                    "delta": ideal_json(l.delta_ideal(i)),
                })
            })
            .collect(),
        _ => Vec::new(),
    };
    json!({
        "dim": l.dim(),
        "scale": ideal_json(l.scale_ideal()),
        "norm": ideal_json(l.norm_ideal()),
        "is_integral": l.is_integral(),
        "is_classic": l.is_classic(),
        "space": serde_json::to_value(l.space(fd).to_json(fd)).expect("serializable"),
        "components": comps,
        "table": table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_jordan_form() {
        let fd = Field::q2();
        let j = LatticeJson::parse(
            r#"{"jordan":[{"scale":-1,"proper":false,"m":3,"type":"plain"},{"scale":0,"proper":true,"diag":["7",3]}]}"#,
        )
        .unwrap();
        let l = j.to_lattice(&fd).unwrap();
        assert_eq!(l.dim(), 8);
        let back = LatticeJson::from_lattice(&l, &fd);
        assert_eq!(back.to_lattice(&fd).unwrap(), l);
        let text = serde_json::to_string(&back).unwrap();
        assert_eq!(
            text,
            r#"{"jordan":[{"scale":-1,"proper":false,"m":3,"type":"plain"},{"scale":0,"proper":true,"diag":["3","7"]}]}"#
        );
    }

    #[test]
    fn parse_gram_form() {
        let fd = Field::q2();
        let j = LatticeJson::parse(r#"{"gram":[[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        let l = j.to_lattice(&fd).unwrap();
        assert_eq!(l.components().len(), 1);
        assert_eq!(l.dim(), 3);
        let j = LatticeJson::parse(r#"{"gram":[["0","1/2"],["1/2","0"]]}"#).unwrap();
        let l = j.to_lattice(&fd).unwrap();
        assert_eq!(l.components(), &[JordanComponent::improper(-1, 1, false)]);
    }

    #[test]
    fn rejects_malformed() {
        let fd = Field::q2();
        assert!(LatticeJson::parse("{").is_err());
        let bad = LatticeJson::parse(r#"{"jordan":[{"scale":0,"proper":true,"diag":["2"]}]}"#).unwrap();
        assert!(bad.to_lattice(&fd).is_err());
        let bad = LatticeJson::parse(r#"{"jordan":[{"scale":0,"proper":false}]}"#).unwrap();
        assert!(bad.to_lattice(&fd).is_err());
    }

    #[test]
    fn report_examples() {
        let fd = Field::q2();
        let l = LatticeJson::parse(r#"{"gram":[[1,0,0],[0,2,0],[0,0,8]]}"#)
            .unwrap()
            .to_lattice(&fd)
            .unwrap();
        let r = invariants_report(&l, &fd);
        let row = |i: i64| {
            r["table"]
                .as_array()
                .unwrap()
                .iter()
                .find(|x| x["i"] == i)
                .unwrap()
                .clone()
        };
        assert_eq!(row(1)["fd"], 1);
        assert_eq!(row(0)["delta"], 1);
        let h = LatticeJson::parse(r#"{"jordan":[{"scale":-1,"proper":false,"m":1,"type":"plain"}]}"#)
            .unwrap()
            .to_lattice(&fd)
            .unwrap();
        let r = invariants_report(&h, &fd);
        assert_eq!(r["scale"], -1);
        assert_eq!(r["norm"], 0);
        assert_eq!(r["components"][0]["signed_disc"], "1");
        let z = invariants_report(&JordanLattice::zero(), &fd);
        assert_eq!(z["norm"], "zero ideal");
        assert_eq!(z["scale"], "zero ideal");
    }
}
