//! The per-genus classification pipeline: candidate enumeration,
//! filtering, epimorphism search, genus-0/1 exclusion, persistence,
//! and the ν(g) table / plot outputs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogRecord, GroupId, OrderLookup};
use crate::db::{ClassificationDb, DbRecord, StoredWitness};
use crate::episearch::{find_surface_kernel_epi, validate_witness, Witness};
use crate::filters::{run_filters, FilterError, RejectReason};
use crate::group::{FiniteGroup, GroupError};
use crate::perm::Permutation;
use crate::signature::{candidate_pairs, Signature, SignatureError};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("catalog does not cover candidate orders: {}", format_orders(.0))]
    Coverage(Vec<u64>),
    #[error("database incomplete: complete through {0}, need {1}")]
    DbIncomplete(u64, u64),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("catalog record {id} cannot be realized: {err}")]
    BadRecord { id: GroupId, err: GroupError },
    #[error(transparent)]
    Db(#[from] crate::db::DbError),
}

fn format_orders(orders: &[u64]) -> String {
    orders
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone)]
pub struct GenusRecord {
    pub genus: u64,
    pub id: GroupId,
    pub name: String,
    pub degree: usize,
    pub signature: Signature,
    pub witness: Witness,
    /// Witness images rendered as cycle strings, for persistence.
    pub stored_witness: StoredWitness,
}

/// One log entry per rejected candidate pair, for `--verbose`.
#[derive(Debug, Clone)]
pub struct RejectLog {
    pub id: GroupId,
    pub signature: Signature,
    pub reason: RejectReason,
}

pub fn has_genus_zero(g: &FiniteGroup) -> bool {
    g.recognize_genus_zero()
}

/// The five Euclidean signatures; a group not of genus 0 has genus 1
/// iff one of them admits a surface kernel epimorphism onto it. For
/// `(1;-)` that is exactly "abelian and 2-generated".
pub fn has_genus_one(g: &FiniteGroup) -> bool {
    if g.is_abelian() && g.abelian_invariants().factors.len() <= 2 {
        return true;
    }
    let torsion_sigs = [
        Signature::new(0, vec![2, 2, 2, 2]).unwrap(),
        Signature::new(0, vec![3, 3, 3]).unwrap(),
        Signature::new(0, vec![2, 4, 4]).unwrap(),
        Signature::new(0, vec![2, 3, 6]).unwrap(),
    ];
    torsion_sigs
        .iter()
        .any(|s| find_surface_kernel_epi(s, g).is_some())
}

/// Classify one genus. The db must be complete through `g − 1`; the
/// catalog must cover every candidate order. Returns the new records
/// (sorted by group id) and the reject log; the db gains the records
/// and has `complete_through` advanced to `g`.
pub fn classify_genus(
    g: u64,
    catalog: &Catalog,
    db: &mut ClassificationDb,
) -> Result<(Vec<GenusRecord>, Vec<RejectLog>), ClassifyError> {
    if db.complete_through() < g - 1 {
        return Err(ClassifyError::DbIncomplete(db.complete_through(), g - 1));
    }
    let pairs = candidate_pairs(g)?;
    let mut by_order: BTreeMap<u64, Vec<&Signature>> = BTreeMap::new();
    for p in &pairs {
        by_order.entry(p.order).or_default().push(&p.signature);
    }
    let mut work: Vec<(&CatalogRecord, &[&Signature])> = Vec::new();
    let mut missing = Vec::new();
    for (&order, sigs) in &by_order {
        match catalog.groups_of_order(order) {
            OrderLookup::NotCovered => missing.push(order),
            OrderLookup::Covered(recs) => {
                for rec in recs {
                    work.push((rec, sigs.as_slice()));
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(ClassifyError::Coverage(missing));
    }

    type TaskResult = Result<(Option<GenusRecord>, Vec<RejectLog>), ClassifyError>;
    let results: Vec<TaskResult> = work
        .par_iter()
        .map(|(rec, sigs)| -> TaskResult {
            let group = rec.realize().map_err(|err| ClassifyError::BadRecord {
                id: rec.id,
                err,
            })?;
            let mut rejects = Vec::new();
            if has_genus_zero(&group) {
                return Ok((None, rejects));
            }
            let mut genus_one: Option<bool> = None;
            for sig in sigs.iter() {
                let verdict = match run_filters(rec.id, sig, &group, g, db) {
                    Ok(v) => v,
                    Err(FilterError::DbIncomplete(have, need)) => {
                        return Err(ClassifyError::DbIncomplete(have, need))
                    }
                    Err(FilterError::NotAbelian) => unreachable!("guarded by is_abelian"),
                };
                if !verdict.pass {
                    rejects.push(RejectLog {
                        id: rec.id,
                        signature: (*sig).clone(),
                        reason: verdict.reason.unwrap(),
                    });
                    continue;
                }
                if let Some(w) = find_surface_kernel_epi(sig, &group) {
                    debug_assert!(validate_witness(sig, &group, &w));
                    if *genus_one.get_or_insert_with(|| has_genus_one(&group)) {
                        return Ok((None, rejects));
                    }
                    let stored_witness = StoredWitness {
                        hyperbolic: w
                            .hyperbolic_images
                            .iter()
                            .map(|&x| group.element(x).to_cycle_string())
                            .collect(),
                        elliptic: w
                            .elliptic_images
                            .iter()
                            .map(|&x| group.element(x).to_cycle_string())
                            .collect(),
                    };
                    return Ok((
                        Some(GenusRecord {
                            genus: g,
                            id: rec.id,
                            name: rec.name.clone(),
                            degree: rec.degree,
                            signature: (*sig).clone(),
                            witness: w,
                            stored_witness,
                        }),
                        rejects,
                    ));
                }
            }
            Ok((None, rejects))
        })
        .collect();

    let mut records = Vec::new();
    let mut rejects = Vec::new();
    for r in results {
        let (rec, rej) = r?;
        records.extend(rec);
        rejects.extend(rej);
    }
    records.sort_by_key(|r| r.id);
    rejects.sort_by_key(|r| (r.id, r.signature.clone()));

    for r in &records {
        db.insert(to_db_record(r))?;
    }
    db.set_complete_through(g);
    Ok((records, rejects))
}

fn to_db_record(r: &GenusRecord) -> DbRecord {
    DbRecord {
        genus: r.genus,
        order: r.id.order,
        index: r.id.index,
        name: r.name.clone(),
        orbit_genus: r.signature.orbit_genus(),
        periods: r.signature.periods().to_vec(),
        degree: r.degree,
        witness: r.stored_witness.clone(),
    }
}

/// Re-validate a stored record against the catalog: realize the group,
/// parse the witness cycle strings, and re-check the three witness
/// invariants (the stored elliptic images follow descending periods).
pub fn revalidate_stored(rec: &DbRecord, catalog: &Catalog) -> bool {
    let Some(cat_rec) = catalog.lookup(rec.id()) else {
        return false;
    };
    let Ok(group) = cat_rec.realize() else {
        return false;
    };
    let sig = rec.signature();
    let parse_ids = |strs: &[String]| -> Option<Vec<crate::group::ElemId>> {
        strs.iter()
            .map(|s| {
                Permutation::parse_cycles(s, cat_rec.degree)
                    .ok()
                    .and_then(|p| group.id_of(&p))
            })
            .collect()
    };
    let Some(hyperbolic_images) = parse_ids(&rec.witness.hyperbolic) else {
        return false;
    };
    let Some(elliptic_images) = parse_ids(&rec.witness.elliptic) else {
        return false;
    };
    let mut periods = sig.periods().to_vec();
    periods.sort_unstable_by(|a, b| b.cmp(a));
    let w = Witness {
        hyperbolic_images,
        elliptic_images,
        periods,
    };
    validate_witness(&sig, &group, &w)
}

/// `g,nu(g)` rows for every complete genus.
pub fn nu_table(db: &ClassificationDb) -> String {
    let mut out = String::from("g,nu(g)\n");
    for g in 2..=db.complete_through() {
        out.push_str(&format!("{},{}\n", g, db.nu(g)));
    }
    out
}

/// CSV form of the same table, header `genus,nu`.
pub fn plot_csv(db: &ClassificationDb) -> String {
    let mut out = String::from("genus,nu\n");
    for g in 2..=db.complete_through() {
        out.push_str(&format!("{},{}\n", g, db.nu(g)));
    }
    out
}
