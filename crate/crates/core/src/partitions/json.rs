//! JSON form of partitions.
//!
//! Every document carries `q`, `k` and a `kind`. Derived kinds (coset,
//! coordinate, support, linear, weight, hwdf) are built on load; output is
//! always `explicit` or `grouped-weight`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::word::Space;

use super::{
    coordinate_partition, kernel_intersection, support_partition, ExplicitPartition, GroupedWeightPartition,
    Partition, Subspace,
};

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum Kind {
    Explicit {
        block_of: Vec<u32>,
    },
    GroupedWeight {
        groups: Vec<Vec<usize>>,
    },
    Coset {
        basis: Vec<Vec<u8>>,
    },
    Coordinate {
        #[serde(rename = "J")]
        coords: Vec<usize>,
    },
    Support,
    Linear {
        matrices: Vec<Vec<Vec<u8>>>,
    },
    Weight,
    Hwdf {
        #[serde(rename = "T")]
        width: usize,
    },
}

#[derive(Deserialize)]
struct Doc {
    q: u32,
    k: usize,
    #[serde(default)]
    modulus: Option<Vec<u8>>,
    #[serde(flatten)]
    kind: Value,
}

fn field_of(q: u32, modulus: Option<&[u8]>) -> Result<Field> {
    let f = Field::new(q)?;
    match modulus {
        Some(m) if m != f.modulus() => {
            let g = Field::with_modulus(f.p(), m)?;
            if g.q() != q {
                return Err(Error::InvalidArgs(format!("modulus defines GF({}), not GF({q})", g.q())));
            }
            Ok(g)
        }
        _ => Ok(f),
    }
}

impl Partition {
    pub fn from_json(v: &Value) -> Result<Partition> {
        let doc: Doc = serde_json::from_value(v.clone())?;
        let field = field_of(doc.q, doc.modulus.as_deref())?;
        let mut rest = doc.kind;
        if let Some(obj) = rest.as_object_mut() {
            obj.remove("q");
            obj.remove("k");
            obj.remove("modulus");
        }
        let kind: Kind = serde_json::from_value(rest)?;
        let k = doc.k;
        let grouped = |groups| Ok(Partition::Grouped { groups, field: field.clone() });
        let explicit = |p: ExplicitPartition| Ok(Partition::Explicit(p));
        match kind {
            Kind::GroupedWeight { groups } => grouped(GroupedWeightPartition::new(k, groups)?),
            Kind::Weight => grouped(GroupedWeightPartition::weight(k)),
            Kind::Hwdf { width } => grouped(GroupedWeightPartition::hwdf(k, width)?),
            Kind::Explicit { block_of } => explicit(ExplicitPartition::from_block_ids(Space::new(field, k)?, &block_of)?),
            Kind::Coset { basis } => explicit(Subspace::from_generators(field, k, &basis)?.coset_partition()?),
            Kind::Coordinate { coords } => {
                if coords.iter().any(|&j| j == 0 || j > k) {
                    return Err(Error::InvalidArgs("J entries must lie in 1..=k".into()));
                }
                let zero_based: Vec<usize> = coords.iter().map(|j| j - 1).collect();
                explicit(coordinate_partition(Space::new(field, k)?, &zero_based)?)
            }
            Kind::Support => explicit(support_partition(Space::new(field, k)?)?),
            Kind::Linear { matrices } => {
                let kernels = matrices
                    .iter()
                    .map(|m| Subspace::kernel_of_linear(field.clone(), k, m))
                    .collect::<Result<Vec<_>>>()?;
                if kernels.is_empty() {
                    return Err(Error::InvalidArgs("linear partition needs at least one matrix".into()));
                }
                explicit(kernel_intersection(&kernels)?.coset_partition()?)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let field = self.field();
        let mut v = match self {
            Partition::Explicit(p) => json!({
                "q": field.q(),
                "k": p.k(),
                "kind": "explicit",
                "block_of": p.block_ids(),
            }),
            Partition::Grouped { groups, .. } => json!({
                "q": field.q(),
                "k": groups.k(),
                "kind": "grouped-weight",
                "groups": groups.groups(),
            }),
        };
        if field.m() > 1 && Field::new(field.q()).is_ok_and(|d| d.modulus() != field.modulus()) {
            v["modulus"] = json!(field.modulus());
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_load() {
        let coset = Partition::from_json(&json!({"q": 2, "k": 4, "kind": "coset", "basis": [[0,0,0,1],[0,1,1,0]]})).unwrap();
        assert_eq!(coset.num_blocks(), 4);
        let lin = Partition::from_json(&json!({"q": 2, "k": 3, "kind": "linear", "matrices": [[[1,0,0]], [[0,1,0]]]})).unwrap();
        assert_eq!(lin.num_blocks(), 4);
        let coord = Partition::from_json(&json!({"q": 3, "k": 3, "kind": "coordinate", "J": [2, 3]})).unwrap();
        assert_eq!(coord.num_blocks(), 9);
        let sup = Partition::from_json(&json!({"q": 4, "k": 2, "kind": "support"})).unwrap();
        assert_eq!(sup.num_blocks(), 4);
        let h = Partition::from_json(&json!({"q": 2, "k": 35, "kind": "hwdf", "T": 3})).unwrap();
        assert_eq!(h.num_blocks(), 12);
        assert!(Partition::from_json(&json!({"q": 2, "k": 3, "kind": "coordinate", "J": [0]})).is_err());
        assert!(Partition::from_json(&json!({"q": 6, "k": 3, "kind": "support"})).is_err());
        assert!(Partition::from_json(&json!({"q": 2, "k": 3, "kind": "nope"})).is_err());
    }

    #[test]
    fn round_trip() {
        for v in [
            json!({"q": 3, "k": 3, "kind": "support"}),
            json!({"q": 2, "k": 9, "kind": "grouped-weight", "groups": [[0, 1], [2, 3, 4, 5, 6, 7, 8, 9]]}),
            json!({"q": 4, "k": 2, "kind": "coordinate", "J": [1]}),
        ] {
            let p = Partition::from_json(&v).unwrap();
            assert_eq!(Partition::from_json(&p.to_json()).unwrap(), p);
        }
        let f = Field::with_modulus(2, &[1, 0, 1, 1]).unwrap();
        if f != Field::new(8).unwrap() {
            let p = Partition::Explicit(support_partition(Space::new(f, 2).unwrap()).unwrap());
            let back = Partition::from_json(&p.to_json()).unwrap();
            assert_eq!(back.field(), p.field());
        }
    }
}
