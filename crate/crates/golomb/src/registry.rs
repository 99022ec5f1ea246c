//! Registry of H(I,J) values, tau(J) bounds, and witness fixtures.
//!
//! H(I,J) is the least n such that I disjoint J-mark Golomb rulers fit in
//! {1..n}; tau(J) is the least bound from which regular packings (n = I*J)
//! exist for every I at or above it. The shipped registry embeds the
//! reference tables and witness files at compile time and cross-validates
//! them against each other on first use.
//!
//! Update discipline: an exact value needs a witness or a source note;
//! bounds merge monotonically (upper bounds only tighten, lower bounds only
//! rise, a meeting pair promotes to exact) and any contradiction is an
//! error, never a silent overwrite.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::dgr::DgrSet;
use crate::format;

const TABLE_H: &str = include_str!("../data/table2_H.txt");
const TABLE_TAU: &str = include_str!("../data/table3_tau.txt");
const TRACE_BLOCKS: &str = include_str!("../data/table1_trace.dgr");
const FIXTURE_BLOCKS: &str = include_str!("../data/table4_fixtures.dgr");
const COMPUTED_BLOCKS: &str = include_str!("../data/computed_witnesses.dgr");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HStatus {
    Exact,
    UpperBound,
    LowerBound,
}

impl fmt::Display for HStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HStatus::Exact => "exact",
            HStatus::UpperBound => "upper-bound",
            HStatus::LowerBound => "lower-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ReferenceTable,
    ComputedExact,
    ComputedUb,
    External,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ReferenceTable => "reference-table",
            Provenance::ComputedExact => "computed-exact",
            Provenance::ComputedUb => "computed-ub",
            Provenance::External => "external",
        })
    }
}

/// One registry entry for H(groups, arity).
#[derive(Clone, Debug, Serialize)]
pub struct HValue {
    pub groups: u32,
    pub arity: u32,
    pub value: u32,
    pub status: HStatus,
    pub provenance: Provenance,
    /// Best known lower bound accompanying an upper-bound entry; meets of
    /// floor and value promote the entry to exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DgrSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TauBounds {
    pub arity: u32,
    pub lower: u32,
    pub upper: u32,
}

/// A witness block and where it came from.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub source: &'static str,
    pub dgr: DgrSet,
}

#[derive(Clone, Debug, Default)]
pub struct FixtureSet {
    blocks: Vec<Fixture>,
    by_key: BTreeMap<(u32, u32), Vec<usize>>,
}

impl FixtureSet {
    fn push(&mut self, source: &'static str, dgr: DgrSet) {
        let key = (dgr.group_count() as u32, dgr.arity() as u32);
        self.by_key
            .entry(key)
            .or_default()
            .push(self.blocks.len());
        self.blocks.push(Fixture { source, dgr });
    }

    pub fn all(&self) -> &[Fixture] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Fixtures with the given group count and arity, in file order.
    pub fn for_key(&self, groups: u32, arity: u32) -> impl Iterator<Item = &Fixture> {
        self.by_key
            .get(&(groups, arity))
            .into_iter()
            .flatten()
            .map(|&i| &self.blocks[i])
    }
}

/// Result of revalidating one fixture block from its raw marks.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub source: String,
    pub groups: u32,
    pub arity: u32,
    pub bound: u32,
    pub ok: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{file} line {line}: {message}")]
    Data {
        file: &'static str,
        line: usize,
        message: String,
    },
    #[error("contradiction for H({groups},{arity}): {detail}")]
    Contradiction {
        groups: u32,
        arity: u32,
        detail: String,
    },
    #[error("exact H({groups},{arity}) needs a witness or a source note")]
    MissingJustification { groups: u32, arity: u32 },
    #[error("witness for H({groups},{arity}) is unusable: {detail}")]
    InvalidWitness {
        groups: u32,
        arity: u32,
        detail: String,
    },
}

/// What an insert did to the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upgrade {
    Inserted,
    /// Existing knowledge already covers the new entry.
    Unchanged,
    /// Same status, sharper value or newly attached witness.
    Tightened,
    /// Bounds met or a bound became exact.
    Promoted,
}

#[derive(Clone, Debug, Default)]
pub struct BoundsRegistry {
    h: BTreeMap<(u32, u32), HValue>,
    tau: BTreeMap<u32, TauBounds>,
    fixtures: FixtureSet,
}

static SHIPPED: OnceLock<BoundsRegistry> = OnceLock::new();

impl BoundsRegistry {
    /// The embedded reference registry, loaded and cross-validated once.
    pub fn shipped() -> &'static BoundsRegistry {
        SHIPPED.get_or_init(|| match BoundsRegistry::load_shipped() {
            Ok(reg) => reg,
            Err(e) => panic!("embedded reference data is inconsistent: {e}"),
        })
    }

    pub fn empty() -> BoundsRegistry {
        BoundsRegistry::default()
    }

    fn load_shipped() -> Result<BoundsRegistry, RegistryError> {
        let mut reg = BoundsRegistry::default();
        reg.load_h_table("table2_H.txt", TABLE_H)?;
        reg.load_tau_table("table3_tau.txt", TABLE_TAU)?;
        reg.load_fixture_file("table1-trace", TRACE_BLOCKS)?;
        reg.load_fixture_file("table4-fixtures", FIXTURE_BLOCKS)?;
        reg.load_fixture_file("computed", COMPUTED_BLOCKS)?;
        reg.attach_fixture_witnesses();
        reg.cross_validate()?;
        Ok(reg)
    }

    fn load_h_table(&mut self, file: &'static str, text: &str) -> Result<(), RegistryError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let [groups, arity, value, status, provenance, note] = fields[..] else {
                return Err(RegistryError::Data {
                    file,
                    line,
                    message: format!("expected 6 fields, found {}", fields.len()),
                });
            };
            let parse_u32 = |s: &str| -> Result<u32, RegistryError> {
                s.parse().map_err(|e| RegistryError::Data {
                    file,
                    line,
                    message: format!("{s:?}: {e}"),
                })
            };
            let status = match status {
                "exact" => HStatus::Exact,
                "ub" => HStatus::UpperBound,
                other => {
                    return Err(RegistryError::Data {
                        file,
                        line,
                        message: format!("unknown status {other:?}"),
                    })
                }
            };
            let provenance = match provenance {
                "reference-table" => Provenance::ReferenceTable,
                "computed-exact" => Provenance::ComputedExact,
                "computed-ub" => Provenance::ComputedUb,
                "external" => Provenance::External,
                other => {
                    return Err(RegistryError::Data {
                        file,
                        line,
                        message: format!("unknown provenance {other:?}"),
                    })
                }
            };
            let entry = HValue {
                groups: parse_u32(groups)?,
                arity: parse_u32(arity)?,
                value: parse_u32(value)?,
                status,
                provenance,
                floor: None,
                witness: None,
                note: Some(note.to_string()),
            };
            if self.h.insert((entry.groups, entry.arity), entry).is_some() {
                return Err(RegistryError::Data {
                    file,
                    line,
                    message: format!("duplicate entry for ({groups},{arity})"),
                });
            }
        }
        Ok(())
    }

    fn load_tau_table(&mut self, file: &'static str, text: &str) -> Result<(), RegistryError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let [arity, lower, upper] = fields[..] else {
                return Err(RegistryError::Data {
                    file,
                    line,
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            };
            let parse_u32 = |s: &str| -> Result<u32, RegistryError> {
                s.parse().map_err(|e| RegistryError::Data {
                    file,
                    line,
                    message: format!("{s:?}: {e}"),
                })
            };
            let row = TauBounds {
                arity: parse_u32(arity)?,
                lower: parse_u32(lower)?,
                upper: parse_u32(upper)?,
            };
            if row.lower > row.upper {
                return Err(RegistryError::Data {
                    file,
                    line,
                    message: format!("lower {} exceeds upper {}", row.lower, row.upper),
                });
            }
            if self.tau.insert(row.arity, row).is_some() {
                return Err(RegistryError::Data {
                    file,
                    line,
                    message: format!("duplicate row for arity {arity}"),
                });
            }
        }
        Ok(())
    }

    fn load_fixture_file(
        &mut self,
        source: &'static str,
        text: &str,
    ) -> Result<(), RegistryError> {
        let blocks = format::parse_dgr_file(text).map_err(|e| RegistryError::Data {
            file: source,
            line: e.line,
            message: e.message,
        })?;
        for dgr in blocks {
            self.fixtures.push(source, dgr);
        }
        Ok(())
    }

    /// Attaches a fixture achieving exactly the recorded value as the
    /// entry's witness. Fixtures with other bounds stay available through
    /// [`BoundsRegistry::fixtures`].
    fn attach_fixture_witnesses(&mut self) {
        for entry in self.h.values_mut() {
            if entry.witness.is_some() {
                continue;
            }
            entry.witness = self
                .fixtures
                .for_key(entry.groups, entry.arity)
                .find(|f| f.dgr.bound() == entry.value)
                .map(|f| f.dgr.clone());
        }
    }

    fn cross_validate(&self) -> Result<(), RegistryError> {
        for entry in self.h.values() {
            self.check_entry(entry)?;
        }
        // A fixture achieving less than an exact value would disprove it.
        for fixture in self.fixtures.all() {
            let key = (
                fixture.dgr.group_count() as u32,
                fixture.dgr.arity() as u32,
            );
            if let Some(entry) = self.h.get(&key) {
                if entry.status == HStatus::Exact && fixture.dgr.bound() < entry.value {
                    return Err(RegistryError::Contradiction {
                        groups: key.0,
                        arity: key.1,
                        detail: format!(
                            "{} fixture fits in n={} but the exact value is {}",
                            fixture.source,
                            fixture.dgr.bound(),
                            entry.value
                        ),
                    });
                }
            }
        }
        // tau lower bounds: no exact regular value below the threshold.
        for row in self.tau.values() {
            for entry in self.h.values() {
                if entry.arity == row.arity
                    && entry.groups < row.lower
                    && entry.status == HStatus::Exact
                    && entry.value == entry.groups * entry.arity
                {
                    return Err(RegistryError::Contradiction {
                        groups: entry.groups,
                        arity: entry.arity,
                        detail: format!(
                            "exact regular value contradicts tau({}) >= {}",
                            row.arity, row.lower
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_entry(&self, entry: &HValue) -> Result<(), RegistryError> {
        if entry.status == HStatus::Exact && entry.witness.is_none() && entry.note.is_none() {
            return Err(RegistryError::MissingJustification {
                groups: entry.groups,
                arity: entry.arity,
            });
        }
        if let Some(floor) = entry.floor {
            if entry.status != HStatus::UpperBound {
                return Err(RegistryError::InvalidWitness {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: "only upper-bound entries carry a floor".to_string(),
                });
            }
            if floor >= entry.value {
                return Err(RegistryError::Contradiction {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: format!(
                        "floor {floor} reaches the upper bound {}; the entry should be exact",
                        entry.value
                    ),
                });
            }
        }
        if let Some(witness) = &entry.witness {
            if entry.status == HStatus::LowerBound {
                return Err(RegistryError::InvalidWitness {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: "a lower bound cannot carry an existence witness".to_string(),
                });
            }
            if witness.group_count() as u32 != entry.groups
                || witness.arity() as u32 != entry.arity
            {
                return Err(RegistryError::InvalidWitness {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: format!(
                        "witness has shape ({},{})",
                        witness.group_count(),
                        witness.arity()
                    ),
                });
            }
            if witness.bound() != entry.value {
                return Err(RegistryError::InvalidWitness {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: format!(
                        "witness bound {} does not achieve the value {}",
                        witness.bound(),
                        entry.value
                    ),
                });
            }
            witness
                .validate()
                .map_err(|e| RegistryError::InvalidWitness {
                    groups: entry.groups,
                    arity: entry.arity,
                    detail: format!("{e}"),
                })?;
        }
        Ok(())
    }

    pub fn get(&self, groups: u32, arity: u32) -> Option<&HValue> {
        self.h.get(&(groups, arity))
    }

    pub fn iter(&self) -> impl Iterator<Item = &HValue> {
        self.h.values()
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn tau(&self, arity: u32) -> Option<TauBounds> {
        self.tau.get(&arity).copied()
    }

    pub fn tau_iter(&self) -> impl Iterator<Item = &TauBounds> {
        self.tau.values()
    }

    pub fn fixtures(&self) -> &FixtureSet {
        &self.fixtures
    }

    /// Revalidates every fixture from its raw marks.
    pub fn validate_fixtures(&self) -> Vec<FixtureCheck> {
        self.fixtures
            .all()
            .iter()
            .map(|fixture| {
                let detail = fixture.dgr.validate().err().map(|e| format!("{e}"));
                FixtureCheck {
                    source: fixture.source.to_string(),
                    groups: fixture.dgr.group_count() as u32,
                    arity: fixture.dgr.arity() as u32,
                    bound: fixture.dgr.bound(),
                    ok: detail.is_none(),
                    detail,
                }
            })
            .collect()
    }

    /// Merges a computed or external result under the monotone rules.
    pub fn insert_computed(&mut self, entry: HValue) -> Result<Upgrade, RegistryError> {
        self.check_entry(&entry)?;
        let key = (entry.groups, entry.arity);
        let Some(existing) = self.h.get_mut(&key) else {
            self.h.insert(key, entry);
            return Ok(Upgrade::Inserted);
        };
        let contradiction = |detail: String| RegistryError::Contradiction {
            groups: key.0,
            arity: key.1,
            detail,
        };
        use HStatus::*;
        match (existing.status, entry.status) {
            (Exact, Exact) => {
                if existing.value != entry.value {
                    return Err(contradiction(format!(
                        "exact values disagree: {} vs {}",
                        existing.value, entry.value
                    )));
                }
                if existing.witness.is_none() && entry.witness.is_some() {
                    existing.witness = entry.witness;
                    return Ok(Upgrade::Tightened);
                }
                Ok(Upgrade::Unchanged)
            }
            (UpperBound, Exact) => {
                if entry.value > existing.value {
                    return Err(contradiction(format!(
                        "exact {} exceeds the known upper bound {}",
                        entry.value, existing.value
                    )));
                }
                if existing.floor.is_some_and(|floor| entry.value < floor) {
                    return Err(contradiction(format!(
                        "exact {} is below the known floor {}",
                        entry.value,
                        existing.floor.unwrap()
                    )));
                }
                *existing = entry;
                Ok(Upgrade::Promoted)
            }
            (LowerBound, Exact) => {
                if entry.value < existing.value {
                    return Err(contradiction(format!(
                        "exact {} is below the known lower bound {}",
                        entry.value, existing.value
                    )));
                }
                *existing = entry;
                Ok(Upgrade::Promoted)
            }
            (Exact, UpperBound) => {
                if entry.value < existing.value {
                    return Err(contradiction(format!(
                        "upper bound {} is below the exact value {}",
                        entry.value, existing.value
                    )));
                }
                Ok(Upgrade::Unchanged)
            }
            (Exact, LowerBound) => {
                if entry.value > existing.value {
                    return Err(contradiction(format!(
                        "lower bound {} is above the exact value {}",
                        entry.value, existing.value
                    )));
                }
                Ok(Upgrade::Unchanged)
            }
            (UpperBound, UpperBound) => {
                if existing.floor.is_some_and(|floor| entry.value < floor) {
                    return Err(contradiction(format!(
                        "upper bound {} is below the known floor {}",
                        entry.value,
                        existing.floor.unwrap()
                    )));
                }
                if existing.floor == Some(entry.value) {
                    // The new upper bound meets the stored floor.
                    return Ok(Self::promote_to_exact(existing, entry.witness, entry.value));
                }
                if entry.value < existing.value {
                    let floor = existing.floor;
                    *existing = entry;
                    existing.floor = floor;
                    Ok(Upgrade::Tightened)
                } else if entry.value == existing.value
                    && existing.witness.is_none()
                    && entry.witness.is_some()
                {
                    existing.witness = entry.witness;
                    Ok(Upgrade::Tightened)
                } else {
                    Ok(Upgrade::Unchanged)
                }
            }
            (LowerBound, LowerBound) => {
                if entry.value > existing.value {
                    *existing = entry;
                    Ok(Upgrade::Tightened)
                } else {
                    Ok(Upgrade::Unchanged)
                }
            }
            (UpperBound, LowerBound) => {
                if entry.value > existing.value {
                    return Err(contradiction(format!(
                        "lower bound {} exceeds the upper bound {}",
                        entry.value, existing.value
                    )));
                }
                if entry.value == existing.value {
                    let witness = existing.witness.take();
                    return Ok(Self::promote_to_exact(existing, witness, entry.value));
                }
                if existing.floor.is_none_or(|floor| entry.value > floor) {
                    existing.floor = Some(entry.value);
                    return Ok(Upgrade::Tightened);
                }
                Ok(Upgrade::Unchanged)
            }
            (LowerBound, UpperBound) => {
                if entry.value < existing.value {
                    return Err(contradiction(format!(
                        "upper bound {} is below the lower bound {}",
                        entry.value, existing.value
                    )));
                }
                if entry.value == existing.value {
                    let value = entry.value;
                    *existing = entry;
                    let witness = existing.witness.take();
                    return Ok(Self::promote_to_exact(existing, witness, value));
                }
                // The concrete upper bound becomes primary; the old lower
                // bound survives as its floor.
                let floor = existing.value;
                *existing = entry;
                existing.floor = Some(floor);
                Ok(Upgrade::Tightened)
            }
        }
    }

    /// Rewrites `entry` in place as an exact value met by both bounds.
    fn promote_to_exact(entry: &mut HValue, witness: Option<DgrSet>, value: u32) -> Upgrade {
        entry.value = value;
        entry.status = HStatus::Exact;
        entry.provenance = Provenance::ComputedExact;
        entry.floor = None;
        entry.witness = witness;
        let note = format!("upper and lower bounds met at {value}");
        entry.note = Some(match entry.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
        Upgrade::Promoted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::Ruler;

    fn witness_2_2_4() -> DgrSet {
        DgrSet::new(
            vec![
                Ruler::new(vec![1, 2]).unwrap(),
                Ruler::new(vec![3, 4]).unwrap(),
            ],
            4,
        )
        .unwrap()
    }

    #[test]
    fn shipped_registry_loads_and_spot_values_match() {
        let reg = BoundsRegistry::shipped();
        let h = |i, j| reg.get(i, j).unwrap();
        assert_eq!(h(7, 10).value, 74);
        assert_eq!(h(7, 10).status, HStatus::Exact);
        assert_eq!(h(10, 10).value, 100);
        assert_eq!(h(13, 13).value, 169);
        assert_eq!(h(10, 12).value, 122);
        assert_eq!(h(10, 12).status, HStatus::UpperBound);
        assert_eq!(h(9, 13).value, 135);
        assert_eq!(h(9, 13).status, HStatus::UpperBound);
        assert_eq!(h(6, 10).value, 70);
        assert_eq!(h(4, 5).value, 20);
        assert_eq!(reg.tau(10).unwrap(), TauBounds { arity: 10, lower: 8, upper: 8 });
        assert_eq!(reg.tau(13).unwrap().upper, 13);
        assert!(reg.tau(9).is_none());
    }

    #[test]
    fn shipped_fixtures_all_validate() {
        let checks = BoundsRegistry::shipped().validate_fixtures();
        assert!(checks.len() >= 27, "expected 5 trace + 22 fixture blocks");
        for check in checks {
            assert!(
                check.ok,
                "fixture ({},{}) n={} from {}: {:?}",
                check.groups, check.arity, check.bound, check.source, check.detail
            );
        }
    }

    #[test]
    fn exact_entries_with_matching_fixtures_carry_witnesses() {
        let reg = BoundsRegistry::shipped();
        for (groups, arity) in [(7, 10), (10, 10), (11, 11), (12, 12), (13, 13), (6, 10)] {
            let entry = reg.get(groups, arity).unwrap();
            let witness = entry.witness.as_ref().expect("fixture should attach");
            assert_eq!(witness.bound(), entry.value);
        }
        // Exact without a shipped witness: justified by its source note.
        let far = reg.get(15, 10).unwrap();
        assert_eq!(far.status, HStatus::Exact);
        assert!(far.witness.is_some() || far.note.is_some());
    }

    #[test]
    fn two_fixtures_deviate_from_their_table_cells_by_one() {
        // The shipped witness blocks for these two shapes fit one above the
        // tabulated upper bounds; the registry keeps both without conflict.
        let reg = BoundsRegistry::shipped();
        for (groups, arity, fixture_bound) in [(10u32, 12u32, 123u32), (9, 13, 136)] {
            let entry = reg.get(groups, arity).unwrap();
            assert_eq!(entry.status, HStatus::UpperBound);
            assert_eq!(entry.value + 1, fixture_bound);
            assert!(entry.witness.is_none());
            let bounds: Vec<u32> = reg
                .fixtures()
                .for_key(groups, arity)
                .map(|f| f.dgr.bound())
                .collect();
            assert_eq!(bounds, vec![fixture_bound]);
        }
    }

    #[test]
    fn insert_into_empty_registry() {
        let mut reg = BoundsRegistry::empty();
        let up = reg
            .insert_computed(HValue {
                groups: 2,
                arity: 2,
                value: 4,
                status: HStatus::Exact,
                provenance: Provenance::ComputedExact,
                floor: None,
                witness: Some(witness_2_2_4()),
                note: None,
            })
            .unwrap();
        assert_eq!(up, Upgrade::Inserted);
        assert_eq!(reg.get(2, 2).unwrap().value, 4);
    }

    #[test]
    fn exact_requires_witness_or_note() {
        let mut reg = BoundsRegistry::empty();
        let err = reg
            .insert_computed(HValue {
                groups: 2,
                arity: 2,
                value: 4,
                status: HStatus::Exact,
                provenance: Provenance::ComputedExact,
                floor: None,
                witness: None,
                note: None,
            })
            .unwrap_err();
        assert!(matches!(err, RegistryError::MissingJustification { .. }));
    }

    #[test]
    fn witness_shape_and_bound_are_checked() {
        let mut reg = BoundsRegistry::empty();
        let err = reg
            .insert_computed(HValue {
                groups: 2,
                arity: 2,
                value: 5,
                status: HStatus::Exact,
                provenance: Provenance::ComputedExact,
                floor: None,
                witness: Some(witness_2_2_4()),
                note: None,
            })
            .unwrap_err();
        assert!(matches!(err, RegistryError::InvalidWitness { .. }));

        let err = reg
            .insert_computed(HValue {
                groups: 3,
                arity: 2,
                value: 4,
                status: HStatus::Exact,
                provenance: Provenance::ComputedExact,
                floor: None,
                witness: Some(witness_2_2_4()),
                note: None,
            })
            .unwrap_err();
        assert!(matches!(err, RegistryError::InvalidWitness { .. }));

        let err = reg
            .insert_computed(HValue {
                groups: 2,
                arity: 2,
                value: 4,
                status: HStatus::LowerBound,
                provenance: Provenance::ComputedUb,
                floor: None,
                witness: Some(witness_2_2_4()),
                note: None,
            })
            .unwrap_err();
        assert!(matches!(err, RegistryError::InvalidWitness { .. }));
    }

    fn bound(status: HStatus, value: u32) -> HValue {
        HValue {
            groups: 9,
            arity: 9,
            value,
            status,
            provenance: Provenance::ComputedUb,
            floor: None,
            witness: None,
            note: Some("test".to_string()),
        }
    }

    #[test]
    fn meeting_bounds_promote_to_exact() {
        let mut reg = BoundsRegistry::empty();
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap(),
            Upgrade::Inserted
        );
        assert_eq!(
            reg.insert_computed(bound(HStatus::LowerBound, 90)).unwrap(),
            Upgrade::Tightened
        );
        assert_eq!(reg.get(9, 9).unwrap().status, HStatus::UpperBound);
        assert_eq!(reg.get(9, 9).unwrap().floor, Some(90));
        assert_eq!(
            reg.insert_computed(bound(HStatus::LowerBound, 100)).unwrap(),
            Upgrade::Promoted
        );
        let entry = reg.get(9, 9).unwrap();
        assert_eq!(entry.status, HStatus::Exact);
        assert_eq!(entry.value, 100);
        assert_eq!(entry.provenance, Provenance::ComputedExact);
    }

    #[test]
    fn tightened_upper_bound_meeting_the_floor_promotes() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap();
        reg.insert_computed(bound(HStatus::LowerBound, 95)).unwrap();
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 95)).unwrap(),
            Upgrade::Promoted
        );
        let entry = reg.get(9, 9).unwrap();
        assert_eq!(entry.status, HStatus::Exact);
        assert_eq!(entry.value, 95);
        assert_eq!(entry.floor, None);

        // And an upper bound dipping below the floor is a contradiction.
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap();
        reg.insert_computed(bound(HStatus::LowerBound, 95)).unwrap();
        assert!(matches!(
            reg.insert_computed(bound(HStatus::UpperBound, 94)),
            Err(RegistryError::Contradiction { .. })
        ));
    }

    #[test]
    fn lower_bound_entry_replaced_by_upper_bound_keeps_floor() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::LowerBound, 80)).unwrap();
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 90)).unwrap(),
            Upgrade::Tightened
        );
        let entry = reg.get(9, 9).unwrap();
        assert_eq!(entry.status, HStatus::UpperBound);
        assert_eq!(entry.value, 90);
        assert_eq!(entry.floor, Some(80));
    }

    #[test]
    fn bounds_tighten_monotonically() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap();
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 95)).unwrap(),
            Upgrade::Tightened
        );
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 98)).unwrap(),
            Upgrade::Unchanged
        );
        assert_eq!(reg.get(9, 9).unwrap().value, 95);

        reg.insert_computed(bound(HStatus::LowerBound, 80)).unwrap();
        assert_eq!(
            reg.insert_computed(bound(HStatus::LowerBound, 85)).unwrap(),
            Upgrade::Tightened
        );
        assert_eq!(
            reg.insert_computed(bound(HStatus::LowerBound, 70)).unwrap(),
            Upgrade::Unchanged
        );
    }

    #[test]
    fn contradictions_are_rejected() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap();
        assert!(matches!(
            reg.insert_computed(bound(HStatus::LowerBound, 101)),
            Err(RegistryError::Contradiction { .. })
        ));

        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::Exact, 100)).unwrap();
        assert!(matches!(
            reg.insert_computed(bound(HStatus::Exact, 99)),
            Err(RegistryError::Contradiction { .. })
        ));
        assert!(matches!(
            reg.insert_computed(bound(HStatus::UpperBound, 99)),
            Err(RegistryError::Contradiction { .. })
        ));
        assert!(matches!(
            reg.insert_computed(bound(HStatus::LowerBound, 101)),
            Err(RegistryError::Contradiction { .. })
        ));
        // Compatible bounds leave the exact entry alone.
        assert_eq!(
            reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap(),
            Upgrade::Unchanged
        );
        assert_eq!(
            reg.insert_computed(bound(HStatus::Exact, 100)).unwrap(),
            Upgrade::Unchanged
        );
    }

    #[test]
    fn exact_overrides_looser_bounds() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(bound(HStatus::UpperBound, 100)).unwrap();
        assert_eq!(
            reg.insert_computed(bound(HStatus::Exact, 97)).unwrap(),
            Upgrade::Promoted
        );
        assert_eq!(reg.get(9, 9).unwrap().status, HStatus::Exact);
        assert_eq!(reg.get(9, 9).unwrap().value, 97);
    }

    #[test]
    fn exact_to_exact_witness_attachment() {
        let mut reg = BoundsRegistry::empty();
        reg.insert_computed(HValue {
            groups: 2,
            arity: 2,
            value: 4,
            status: HStatus::Exact,
            provenance: Provenance::ReferenceTable,
            floor: None,
            witness: None,
            note: Some("table".to_string()),
        })
        .unwrap();
        let up = reg
            .insert_computed(HValue {
                groups: 2,
                arity: 2,
                value: 4,
                status: HStatus::Exact,
                provenance: Provenance::ComputedExact,
                floor: None,
                witness: Some(witness_2_2_4()),
                note: None,
            })
            .unwrap();
        assert_eq!(up, Upgrade::Tightened);
        assert!(reg.get(2, 2).unwrap().witness.is_some());
    }
}
