//! Family file schema. The exporter and the custom-family loader share
//! this one representation, so a round trip through JSON reproduces the
//! catalog exactly.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problems::{FamilyKind, FunctionTable, Goodness, ProblemFamily, ValuePreparation};
use crate::statevec::RegisterLayout;

pub const FAMILY_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub schema: u32,
    pub name: String,
    /// Argument width in bits.
    pub n: u32,
    /// Width of a function value in bits.
    pub value_bits: u32,
    pub goodness: Goodness,
    /// "minus-all" for sign-kickback families, "all-zeros" for write-out
    /// families.
    pub value_preparation: String,
    pub tables: Vec<TableEntry>,
    /// Solution label per suffix.
    pub solutions: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub b: String,
    pub rows: BTreeMap<String, String>,
}

pub fn family_to_json(family: &ProblemFamily) -> FamilyFile {
    let n = family.n;
    let value_bits = family.layout().qubits(crate::statevec::Register::Value);
    let tables = family
        .tables()
        .iter()
        .map(|t| TableEntry {
            b: t.suffix.to_string(),
            rows: (0..family.argument_count())
                .map(|a| {
                    (
                        BitString::new(a, n).to_string(),
                        BitString::new(t.value(a), value_bits.max(1)).to_string(),
                    )
                })
                .collect(),
        })
        .collect();
    let solutions = family
        .tables()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.suffix.to_string(), family.solution(i).to_string()))
        .collect();
    let uniform = 1.0 / (family.len() as f64).sqrt();
    let weights = if family.weights().iter().all(|w| (w - uniform).abs() < 1e-15) {
        None
    } else {
        Some(family.weights().to_vec())
    };
    FamilyFile {
        schema: FAMILY_SCHEMA_VERSION,
        name: family.name.clone(),
        n,
        value_bits,
        goodness: family.goodness(),
        value_preparation: match family.value_preparation() {
            ValuePreparation::MinusAll => "minus-all".to_string(),
            ValuePreparation::AllZeros => "all-zeros".to_string(),
        },
        tables,
        solutions,
        weights,
    }
}

pub fn family_from_json(file: &FamilyFile) -> Result<ProblemFamily> {
    if file.schema != FAMILY_SCHEMA_VERSION {
        return Err(Error::MalformedFamily(format!(
            "unsupported schema version {}",
            file.schema
        )));
    }
    if file.tables.is_empty() {
        return Err(Error::MalformedFamily("family has no tables".into()));
    }
    if file.n == 0 || file.n > 12 {
        return Err(Error::MalformedFamily(format!(
            "argument width {} out of range",
            file.n
        )));
    }
    let rows = 1u64 << file.n;
    let value_preparation = match file.value_preparation.as_str() {
        "minus-all" => ValuePreparation::MinusAll,
        "all-zeros" => ValuePreparation::AllZeros,
        other => {
            return Err(Error::MalformedFamily(format!(
                "unknown value preparation {other:?}"
            )))
        }
    };

    let mut tables = Vec::with_capacity(file.tables.len());
    let mut solutions = Vec::with_capacity(file.tables.len());
    let mut suffix_len = None;
    for entry in &file.tables {
        let suffix = BitString::parse(&entry.b)?;
        match suffix_len {
            None => suffix_len = Some(suffix.len()),
            Some(l) if l == suffix.len() => {}
            Some(l) => {
                return Err(Error::MalformedFamily(format!(
                    "suffix {} has length {}, expected {l}",
                    entry.b,
                    suffix.len()
                )))
            }
        }
        if entry.rows.len() as u64 != rows {
            return Err(Error::MalformedFamily(format!(
                "table {} lists {} rows, expected {rows}",
                entry.b,
                entry.rows.len()
            )));
        }
        let mut values = vec![0u64; rows as usize];
        for (a_str, v_str) in &entry.rows {
            let a = BitString::parse(a_str)?;
            if a.len() != file.n {
                return Err(Error::MalformedFamily(format!(
                    "argument {a_str} has wrong width in table {}",
                    entry.b
                )));
            }
            let v = BitString::parse(v_str)?;
            if v.value() >= (1 << file.value_bits.max(1)) {
                return Err(Error::MalformedFamily(format!(
                    "value {v_str} exceeds {} bits in table {}",
                    file.value_bits, entry.b
                )));
            }
            values[a.value() as usize] = v.value();
        }
        // BTreeMap keys are unique, so row coverage reduces to the count
        // check plus width validation above.
        let label = file.solutions.get(&entry.b).ok_or_else(|| {
            Error::MalformedFamily(format!("no solution label for table {}", entry.b))
        })?;
        tables.push(FunctionTable { suffix, values });
        solutions.push(label.clone());
    }
    let suffix_len = suffix_len.expect("at least one table");
    {
        let mut seen = std::collections::BTreeSet::new();
        for t in &tables {
            if !seen.insert(t.suffix) {
                return Err(Error::MalformedFamily(format!(
                    "duplicate suffix {}",
                    t.suffix
                )));
            }
        }
    }

    let layout = RegisterLayout::new(suffix_len, file.n, file.value_bits)?;
    let weights = match &file.weights {
        Some(w) => {
            if w.len() != tables.len() || w.iter().any(|x| *x <= 0.0) {
                return Err(Error::MalformedFamily("bad weight vector".into()));
            }
            let sum_sq: f64 = w.iter().map(|x| x * x).sum();
            if (sum_sq - 1.0).abs() > 1e-12 {
                return Err(Error::MalformedFamily(format!(
                    "weights not normalized: {sum_sq}"
                )));
            }
            w.clone()
        }
        None => vec![1.0 / (tables.len() as f64).sqrt(); tables.len()],
    };
    Ok(ProblemFamily {
        kind: FamilyKind::Custom,
        n: file.n,
        name: file.name.clone(),
        layout,
        weights,
        solutions,
        tables,
        goodness: file.goodness,
        value_preparation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::build_family;

    #[test]
    fn round_trip_preserves_catalog_content() {
        let f = build_family(FamilyKind::Permutation, 2, None).unwrap();
        let file = family_to_json(&f);
        let g = family_from_json(&file).unwrap();
        assert_eq!(f.name, g.name);
        assert_eq!(f.tables(), g.tables());
        assert_eq!(f.solutions(), g.solutions());
        assert_eq!(f.goodness(), g.goodness());
        assert_eq!(f.weights(), g.weights());
        let file2 = family_to_json(&g);
        assert_eq!(
            serde_json::to_string(&file).unwrap(),
            serde_json::to_string(&file2).unwrap()
        );
    }

    #[test]
    fn rejects_missing_rows_and_labels() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let mut file = family_to_json(&f);
        file.tables[0].rows.remove("00");
        assert!(family_from_json(&file).is_err());

        let mut file = family_to_json(&f);
        file.solutions.remove("00");
        assert!(family_from_json(&file).is_err());
    }

    #[test]
    fn rejects_wrong_schema_version() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let mut file = family_to_json(&f);
        file.schema = 99;
        assert!(family_from_json(&file).is_err());
    }
}
