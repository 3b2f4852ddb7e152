//! Exclusion of citing records.
//!
//! A [`FilterSet`] is a conjunction of clauses. A record survives when it
//! passes every active clause, so clause order never matters and adding a
//! clause can only shrink the surviving set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{citation_counts_per_publication, CitationDataset, CitingRecord, TargetAuthor};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSet {
    /// Drop records co-authored by the target under any name variant.
    pub exclude_self_citations: bool,
    /// Drop records whose only cited target publication is this one.
    pub exclude_citing_only: Option<String>,
    /// Keep only records of these document types.
    pub citing_doc_types: Option<BTreeSet<String>>,
    /// Keep only records citing at least one publication of these types.
    pub cited_doc_types: Option<BTreeSet<String>>,
    pub exclude_ids: BTreeSet<String>,
}

impl FilterSet {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

pub fn is_self_citing(rec: &CitingRecord, target: &TargetAuthor) -> bool {
    rec.authors
        .iter()
        .any(|a| target.name_variants().contains(a))
}

pub fn cites_only(rec: &CitingRecord, pub_id: &str) -> bool {
    rec.cited_target_pub_ids.len() == 1 && rec.cited_target_pub_ids.contains(pub_id)
}

/// The publication with the most distinct citing records. Ties go to the
/// older publication, then to the lexicographically smaller id.
pub fn most_cited_publication(ds: &CitationDataset) -> Result<String> {
    if ds.citing_records.is_empty() {
        return Err(Error::NoCitingRecords);
    }
    let counts = citation_counts_per_publication(ds, &FilterSet::default())?;
    ds.publications
        .iter()
        .min_by(|a, b| {
            counts[&b.id]
                .cmp(&counts[&a.id])
                .then(a.year.cmp(&b.year))
                .then(a.id.cmp(&b.id))
        })
        .map(|p| p.id.clone())
        .ok_or(Error::NoCitingRecords)
}

/// Ids of the citing records passing every active clause of `fs`.
pub fn apply_filters(ds: &CitationDataset, fs: &FilterSet) -> Result<BTreeSet<String>> {
    if let Some(pid) = &fs.exclude_citing_only {
        if ds.publication(pid).is_none() {
            return Err(Error::UnknownPublication(pid.clone()));
        }
    }
    let pub_types: BTreeMap<&str, &str> = ds
        .publications
        .iter()
        .map(|p| (p.id.as_str(), p.doc_type.as_str()))
        .collect();

    let survives = |r: &CitingRecord| {
        if fs.exclude_ids.contains(&r.id) {
            return false;
        }
        if fs.exclude_self_citations && is_self_citing(r, &ds.target) {
            return false;
        }
        if let Some(pid) = &fs.exclude_citing_only {
            if cites_only(r, pid) {
                return false;
            }
        }
        if let Some(allowed) = &fs.citing_doc_types {
            if !allowed.contains(&r.doc_type) {
                return false;
            }
        }
        if let Some(allowed) = &fs.cited_doc_types {
            let any_allowed = r.cited_target_pub_ids.iter().any(|pid| {
                pub_types
                    .get(pid.as_str())
                    .is_some_and(|t| allowed.contains(*t))
            });
            if !any_allowed {
                return false;
            }
        }
        true
    };

    Ok(ds
        .citing_records
        .iter()
        .filter(|r| survives(r))
        .map(|r| r.id.clone())
        .collect())
}
