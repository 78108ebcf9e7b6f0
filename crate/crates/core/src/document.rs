//! Profile documents.
//!
//! ```json
//! {
//!   "K": 2,
//!   "alpha": [
//!     { "cross": [{ "a1": 0.5, "a2": 0.5, "to_cell": 2 }], "direct": [1.0, 2.0] },
//!     { "cross": [{ "a1": 0.5, "a2": 0.5, "to_cell": 1 }], "direct": [1.0, 2.0] }
//!   ]
//! }
//! ```
//!
//! Cell `k` lists its in-cell strengths `direct = [alpha_kk^[1], alpha_kk^[2]]`
//! and, for every other base station `to_cell = i`, the strengths from BS `i`
//! to its own UE 1 and UE 2. Cell numbers are 1-based. The canonical form
//! has sorted keys, cross entries sorted by `to_cell`, two-space indentation
//! and a trailing newline; numbers use shortest round-trip decimals, so
//! `parse(serialize(p)) == p` bit for bit.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::NetworkProfile;

pub fn serialize_profile(profile: &NetworkProfile) -> String {
    let k = profile.cells();
    let cells: Vec<Value> = (0..k)
        .map(|cell| {
            let cross: Vec<Value> = (0..k)
                .filter(|&i| i != cell)
                .map(|i| {
                    json!({
                        "to_cell": i + 1,
                        "a1": profile.alpha(cell, 0, i),
                        "a2": profile.alpha(cell, 1, i),
                    })
                })
                .collect();
            json!({
                "direct": [profile.direct(cell, 0), profile.direct(cell, 1)],
                "cross": cross,
            })
        })
        .collect();
    let doc = json!({ "K": k, "alpha": cells });
    let mut text = serde_json::to_string_pretty(&doc).expect("profile values are finite");
    text.push('\n');
    text
}

/// SHA-256 of the canonical serialization, hex encoded.
pub fn profile_hash(profile: &NetworkProfile) -> String {
    hex::encode(Sha256::digest(serialize_profile(profile).as_bytes()))
}

pub fn parse_profile(text: &str) -> Result<NetworkProfile> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Document("top level must be an object".into()))?;
    reject_unknown(obj, &["K", "alpha"], "top level")?;

    let cells = match obj.get("K") {
        None => return Err(Error::Document("missing field `K`".into())),
        Some(v) => v.as_u64().ok_or_else(|| {
            Error::Document(format!("field `K` must be a positive integer, got {v}"))
        })?,
    };
    if cells == 0 {
        return Err(Error::NoCells);
    }
    let cells = cells as usize;

    let rows = obj
        .get("alpha")
        .ok_or_else(|| Error::Document("missing field `alpha`".into()))?
        .as_array()
        .ok_or_else(|| Error::Document("field `alpha` must be an array".into()))?;
    if rows.len() != cells {
        return Err(Error::DimensionMismatch {
            what: "alpha cells",
            expected: cells,
            actual: rows.len(),
        });
    }

    let mut alpha: Vec<Option<f64>> = vec![None; 2 * cells * cells];
    let slot = |k: usize, l: usize, i: usize| (k * 2 + l) * cells + i;

    for (k, row) in rows.iter().enumerate() {
        let here = format!("alpha[{k}]");
        let row = row
            .as_object()
            .ok_or_else(|| Error::Document(format!("{here} must be an object")))?;
        reject_unknown(row, &["direct", "cross"], &here)?;

        if let Some(direct) = row.get("direct") {
            let direct = direct
                .as_array()
                .ok_or_else(|| Error::Document(format!("{here}.direct must be an array")))?;
            if direct.len() > 2 {
                return Err(Error::Document(format!(
                    "{here}.direct must have 2 entries, got {}",
                    direct.len()
                )));
            }
            for (l, v) in direct.iter().enumerate() {
                alpha[slot(k, l, k)] = Some(number(v, &format!("{here}.direct[{l}]"))?);
            }
        }

        if let Some(cross) = row.get("cross") {
            let cross = cross
                .as_array()
                .ok_or_else(|| Error::Document(format!("{here}.cross must be an array")))?;
            for (n, entry) in cross.iter().enumerate() {
                let at = format!("{here}.cross[{n}]");
                let entry = entry
                    .as_object()
                    .ok_or_else(|| Error::Document(format!("{at} must be an object")))?;
                reject_unknown(entry, &["to_cell", "a1", "a2"], &at)?;
                let to = entry
                    .get("to_cell")
                    .ok_or_else(|| Error::Document(format!("{at}: missing field `to_cell`")))?;
                let i = to
                    .as_u64()
                    .filter(|&i| (1..=cells as u64).contains(&i) && i as usize != k + 1)
                    .ok_or_else(|| {
                        Error::Document(format!(
                            "{at}.to_cell must be another cell in 1..={cells}, got {to}"
                        ))
                    })? as usize
                    - 1;
                for (l, key) in ["a1", "a2"].into_iter().enumerate() {
                    if let Some(v) = entry.get(key) {
                        let s = slot(k, l, i);
                        if alpha[s].is_some() {
                            return Err(Error::Document(format!(
                                "{at}: duplicate entry for (k={}, l={}, i={})",
                                k + 1,
                                l + 1,
                                i + 1
                            )));
                        }
                        alpha[s] = Some(number(v, &format!("{at}.{key}"))?);
                    }
                }
            }
        }
    }

    let mut flat = Vec::with_capacity(alpha.len());
    for k in 0..cells {
        for l in 0..2 {
            for i in 0..cells {
                match alpha[slot(k, l, i)] {
                    Some(v) => flat.push(v),
                    None => {
                        return Err(Error::MissingAlpha {
                            cell: k + 1,
                            user: l + 1,
                            from: i + 1,
                        })
                    }
                }
            }
        }
    }
    NetworkProfile::from_flat(cells, flat)
}

fn number(v: &Value, at: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Document(format!("{at} must be a number, got {v}")))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Document(format!("{at}: unknown field `{k}`"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e1() -> NetworkProfile {
        NetworkProfile::symmetric(2, [1.0, 2.0], 0.5).unwrap()
    }

    #[test]
    fn canonical_layout() {
        let text = serialize_profile(&NetworkProfile::symmetric(1, [1.0, 2.0], 0.0).unwrap());
        assert_eq!(
            text,
            "{\n  \"K\": 1,\n  \"alpha\": [\n    {\n      \"cross\": [],\n      \"direct\": [\n        1.0,\n        2.0\n      ]\n    }\n  ]\n}\n"
        );
    }

    #[test]
    fn round_trip_e1() {
        let p = e1();
        assert_eq!(parse_profile(&serialize_profile(&p)).unwrap(), p);
    }

    #[test]
    fn missing_cross_entry_names_triple() {
        let text = r#"{"K": 2, "alpha": [
            {"direct": [1, 2], "cross": [{"to_cell": 2, "a1": 0.5}]},
            {"direct": [1, 2], "cross": [{"to_cell": 1, "a1": 0.5, "a2": 0.5}]}]}"#;
        assert_eq!(
            parse_profile(text).unwrap_err(),
            Error::MissingAlpha {
                cell: 1,
                user: 2,
                from: 2
            }
        );
        let text = r#"{"K": 2, "alpha": [
            {"direct": [1, 2], "cross": []},
            {"direct": [1, 2], "cross": [{"to_cell": 1, "a1": 0.5, "a2": 0.5}]}]}"#;
        assert_eq!(
            parse_profile(text).unwrap_err(),
            Error::MissingAlpha {
                cell: 1,
                user: 1,
                from: 2
            }
        );
    }

    #[test]
    fn zero_cells_rejected() {
        assert_eq!(
            parse_profile(r#"{"K": 0, "alpha": []}"#).unwrap_err(),
            Error::NoCells
        );
    }

    #[test]
    fn non_numeric_entry_rejected() {
        let err = parse_profile(r#"{"K": 1, "alpha": [{"direct": [1, "two"], "cross": []}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("alpha[0].direct[1]"), "{err}");
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_profile("{"), Err(Error::Document(_))));
        assert!(matches!(parse_profile("[]"), Err(Error::Document(_))));
        assert!(matches!(
            parse_profile(r#"{"K": 1, "alpha": [{"direct": [1, 2]}], "extra": 1}"#),
            Err(Error::Document(_))
        ));
        assert!(matches!(
            parse_profile(
                r#"{"K": 2, "alpha": [{"direct": [1, 2], "cross": [{"to_cell": 1, "a1": 0, "a2": 0}]}, {"direct": [1, 2]}]}"#
            ),
            Err(Error::Document(_))
        ));
        assert!(matches!(
            parse_profile(r#"{"K": 1, "alpha": [{"direct": [-1, 2]}]}"#),
            Err(Error::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        assert_eq!(profile_hash(&e1()), profile_hash(&e1()));
        let other = NetworkProfile::symmetric(2, [1.0, 2.0], 0.25).unwrap();
        assert_ne!(profile_hash(&e1()), profile_hash(&other));
        assert_eq!(profile_hash(&e1()).len(), 64);
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(cells in 1usize..=4, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = NetworkProfile::from_fn(cells, |_, _, _| rng.gen_range(0.0..10.0)).unwrap();
            let text = serialize_profile(&p);
            let back = parse_profile(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(serialize_profile(&back), text);
        }
    }
}
