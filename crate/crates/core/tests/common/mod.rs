#![allow(dead_code)]

use std::collections::BTreeSet;

use impact_vitality::model::{AuthorKey, CitationDataset, CitingRecord, Publication, TargetAuthor};
use impact_vitality::{FilterSet, YearlyCitingCounts};
use num_rational::Ratio;
use proptest::prelude::*;

/// Impact Vitality in exact rational arithmetic, converted to f64 at the end.
pub fn rational_iv(counts_newest_first: &[u64]) -> f64 {
    let n = counts_newest_first.len() as i128;
    let total: i128 = counts_newest_first.iter().map(|&c| c as i128).sum();
    let mut weighted = Ratio::from_integer(0i128);
    let mut harmonic = Ratio::from_integer(0i128);
    for (k, &c) in counts_newest_first.iter().enumerate() {
        let age = k as i128 + 1;
        weighted += Ratio::new(c as i128, age);
        harmonic += Ratio::new(1, age);
    }
    let one = Ratio::from_integer(1i128);
    let iv =
        (Ratio::from_integer(n) * weighted / Ratio::from_integer(total) - one) / (harmonic - one);
    *iv.numer() as f64 / *iv.denom() as f64
}

pub const TABLE5_LAST_YEAR: i32 = 2007;
pub const TABLE5_FIRST_YEAR: i32 = 1988;

/// Citing publication counts 2007 down to 1988 for the three filter regimes:
/// all records, without records citing only the most cited paper, and
/// without self-citing records.
pub const TABLE5_COUNTS: [[u64; 20]; 3] = [
    [
        316, 355, 341, 373, 402, 398, 406, 421, 306, 211, 188, 153, 164, 125, 126, 120, 87, 77, 76,
        82,
    ],
    [
        285, 314, 299, 322, 344, 332, 332, 346, 291, 211, 188, 153, 164, 125, 126, 120, 87, 77, 76,
        82,
    ],
    [
        307, 351, 335, 363, 397, 395, 402, 416, 296, 201, 183, 149, 160, 121, 125, 116, 84, 76, 75,
        82,
    ],
];

/// Printed IV values 2007 down to 1991 for the same three regimes.
pub const TABLE5_IV: [[f64; 17]; 3] = [
    [
        1.40, 1.49, 1.52, 1.62, 1.71, 1.76, 1.82, 1.84, 1.62, 1.42, 1.36, 1.29, 1.32, 1.21, 1.23,
        1.20, 1.04,
    ],
    [
        1.37, 1.44, 1.46, 1.54, 1.61, 1.63, 1.67, 1.70, 1.59, 1.42, 1.36, 1.29, 1.32, 1.21, 1.23,
        1.20, 1.04,
    ],
    [
        1.40, 1.49, 1.53, 1.62, 1.72, 1.77, 1.83, 1.85, 1.61, 1.40, 1.36, 1.28, 1.31, 1.20, 1.23,
        1.19, 1.03,
    ],
];

pub const TABLE5_FILES: [&str; 3] = [
    "table5_all.csv",
    "table5_excl_most_cited.csv",
    "table5_excl_self.csv",
];

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn table5_counts(column: usize) -> YearlyCitingCounts {
    TABLE5_COUNTS[column]
        .iter()
        .enumerate()
        .map(|(i, &c)| (TABLE5_LAST_YEAR - i as i32, c))
        .collect()
}

pub fn key(s: &str, i: &str) -> AuthorKey {
    AuthorKey::new(s, i).unwrap()
}

pub const MOST_CITED: &str = "MC1999";
const OTHER_PUBS: usize = 20;

/// A record-level dataset whose three filter regimes reproduce the Table 5
/// count columns: per year, `all - excl_most_cited` records cite only the
/// 1999 paper, `all - excl_self` records are co-authored by the target, and
/// the rest cite the remaining work.
#[allow(clippy::needless_range_loop)]
pub fn table5_dataset() -> CitationDataset {
    let mut publications: Vec<Publication> = (0..OTHER_PUBS)
        .map(|k| Publication {
            id: format!("P{k:02}"),
            year: 1984 + (k % 5) as i32,
            doc_type: if k % 4 == 0 { "review" } else { "article" }.into(),
            label: None,
        })
        .collect();
    publications.push(Publication {
        id: MOST_CITED.into(),
        year: 1999,
        doc_type: "article".into(),
        label: Some("most cited".into()),
    });

    let target = TargetAuthor::new(key("Vitale", "M."), [key("Vitale", "M.A.")], Some(1988));
    let mut citing_records = Vec::new();
    let mut serial = 0usize;
    let mut next_other = || {
        serial += 1;
        format!("P{:02}", serial % OTHER_PUBS)
    };
    for i in 0..20 {
        let year = TABLE5_LAST_YEAR - i as i32;
        let all = TABLE5_COUNTS[0][i];
        let only_mc = all - TABLE5_COUNTS[1][i];
        let selfc = all - TABLE5_COUNTS[2][i];
        for j in 0..all {
            let id = format!("R{year}-{j:03}");
            let (authors, cited): (BTreeSet<AuthorKey>, BTreeSet<String>) = if j < only_mc {
                (
                    [key("Other", &format!("{j}"))].into(),
                    [MOST_CITED.to_string()].into(),
                )
            } else if j < only_mc + selfc {
                let me = if j % 2 == 0 {
                    key("vitale", "ma")
                } else {
                    key("VITALE", "m")
                };
                ([me, key("Coauthor", "c")].into(), [next_other()].into())
            } else if year >= 1999 && j % 3 == 0 {
                // Cites the 1999 paper together with other work, so it is
                // not removed by the cites-only filter.
                (
                    [key("Other", "z")].into(),
                    [MOST_CITED.to_string(), next_other()].into(),
                )
            } else {
                ([key("Other", "y")].into(), [next_other()].into())
            };
            citing_records.push(CitingRecord {
                id,
                year,
                authors,
                cited_target_pub_ids: cited,
                doc_type: "article".into(),
            });
        }
    }
    CitationDataset {
        target,
        publications,
        citing_records,
    }
}

const PUB_IDS: [&str; 5] = ["A", "B", "C", "D", "E"];
const DOC_TYPES: [&str; 3] = ["article", "review", "letter"];

fn author_pool() -> Vec<AuthorKey> {
    vec![
        key("smith", "j"),
        key("smith", "ja"),
        key("smith", "b"),
        key("jones", "k"),
        key("lee", "s"),
    ]
}

prop_compose! {
    fn arb_record(idx: usize)(
        year in 1995i32..2010,
        authors in proptest::sample::subsequence(author_pool(), 1..=3),
        cited in proptest::sample::subsequence(PUB_IDS.to_vec(), 1..=3),
        doc_type in proptest::sample::select(DOC_TYPES.to_vec()),
    ) -> CitingRecord {
        CitingRecord {
            id: format!("r{idx:02}"),
            year,
            authors: authors.into_iter().collect(),
            cited_target_pub_ids: cited.into_iter().map(String::from).collect(),
            doc_type: doc_type.into(),
        }
    }
}

/// Valid datasets with up to 50 citing records over five publications. The
/// target is `smith j` with variant `smith ja`.
pub fn arb_dataset() -> impl Strategy<Value = CitationDataset> {
    let pubs = proptest::collection::vec(
        (
            1980i32..1995,
            proptest::sample::select(DOC_TYPES[..2].to_vec()),
        ),
        PUB_IDS.len(),
    );
    (pubs, 0usize..=50)
        .prop_flat_map(|(pubs, n)| {
            let recs: Vec<_> = (0..n).map(arb_record).collect();
            (Just(pubs), recs)
        })
        .prop_map(|(pubs, recs)| CitationDataset {
            target: TargetAuthor::new(key("Smith", "J."), [key("smith", "j.a.")], Some(1990)),
            publications: pubs
                .into_iter()
                .zip(PUB_IDS)
                .map(|((year, doc_type), id)| Publication {
                    id: id.into(),
                    year,
                    doc_type: doc_type.into(),
                    label: None,
                })
                .collect(),
            citing_records: recs,
        })
}

/// Every filter set built from the clause types, each either off or set to
/// a fixed value drawn from the dataset.
pub fn all_clause_combinations(ds: &CitationDataset, citing_only: &str) -> Vec<FilterSet> {
    let excluded: BTreeSet<String> = ds
        .citing_records
        .iter()
        .step_by(3)
        .map(|r| r.id.clone())
        .collect();
    (0u32..32)
        .map(|mask| FilterSet {
            exclude_self_citations: mask & 1 != 0,
            exclude_citing_only: (mask & 2 != 0).then(|| citing_only.to_string()),
            citing_doc_types: (mask & 4 != 0)
                .then(|| ["article".to_string(), "letter".to_string()].into()),
            cited_doc_types: (mask & 8 != 0).then(|| ["review".to_string()].into()),
            exclude_ids: if mask & 16 != 0 {
                excluded.clone()
            } else {
                BTreeSet::new()
            },
        })
        .collect()
}

/// Straightforward per-record reading of the filter clauses.
pub fn brute_force_survivors(ds: &CitationDataset, fs: &FilterSet) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for r in &ds.citing_records {
        let mut keep = true;
        if fs.exclude_ids.contains(&r.id) {
            keep = false;
        }
        if fs.exclude_self_citations {
            for a in &r.authors {
                for v in ds.target.name_variants() {
                    if a.surname() == v.surname() && a.initials() == v.initials() {
                        keep = false;
                    }
                }
            }
        }
        if let Some(p) = &fs.exclude_citing_only {
            let ids: Vec<&String> = r.cited_target_pub_ids.iter().collect();
            if ids.len() == 1 && ids[0] == p {
                keep = false;
            }
        }
        if let Some(types) = &fs.citing_doc_types {
            if !types.contains(&r.doc_type) {
                keep = false;
            }
        }
        if let Some(types) = &fs.cited_doc_types {
            let mut hit = false;
            for pid in &r.cited_target_pub_ids {
                for p in &ds.publications {
                    if &p.id == pid && types.contains(&p.doc_type) {
                        hit = true;
                    }
                }
            }
            if !hit {
                keep = false;
            }
        }
        if keep {
            out.insert(r.id.clone());
        }
    }
    out
}

/// Largest h with at least h values >= h, by trying every candidate.
pub fn brute_force_h(values: &[u64]) -> usize {
    (0..=values.len())
        .filter(|&h| values.iter().filter(|&&v| v >= h as u64).count() >= h)
        .max()
        .unwrap()
}
