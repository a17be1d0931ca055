//! The small-groups catalog: parse, validate, serve by order.
//!
//! Catalog file format (UTF-8):
//! - header lines start with `#`; `#covered-orders:` lists integers and
//!   ranges (`1-12,16,20`); `#count:<order>=<n>` declares the expected
//!   number of isomorphism types for an order; other `#` lines are
//!   comments;
//! - record lines: `order<SP>index<SP>name<SP>degree<SP>gen;gen;...`
//!   with generators in cycle notation, no spaces inside cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate group id {order},{index}")]
    DuplicateId { line: usize, order: u64, index: u64 },
    #[error("missing #covered-orders header")]
    MissingCoverage,
}

/// `(order, index)` pair identifying one isomorphism type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId {
    pub order: u64,
    pub index: u64,
}

impl std::fmt::Display for GroupId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.order, self.index)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogRecord {
    pub id: GroupId,
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl CatalogRecord {
    pub fn realize(&self) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::generate(&self.generators)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CatalogManifest {
    pub covered_orders: BTreeSet<u64>,
    pub expected_counts: BTreeMap<u64, usize>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub manifest: CatalogManifest,
    pub records: Vec<CatalogRecord>,
    by_order: BTreeMap<u64, Vec<usize>>,
}

/// Result of asking for groups of an order: records, or not covered.
pub enum OrderLookup<'a> {
    Covered(Vec<&'a CatalogRecord>),
    NotCovered,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut manifest = CatalogManifest::default();
        let mut saw_coverage = false;
        let mut records: Vec<CatalogRecord> = Vec::new();
        let mut seen: BTreeSet<GroupId> = BTreeSet::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                if let Some(body) = rest.strip_prefix("covered-orders:") {
                    saw_coverage = true;
                    parse_order_set(body, &mut manifest.covered_orders)
                        .map_err(|msg| CatalogError::Malformed { line, msg })?;
                } else if let Some(body) = rest.strip_prefix("count:") {
                    let (o, n) = body.split_once('=').ok_or_else(|| CatalogError::Malformed {
                        line,
                        msg: format!("bad count header {body:?}"),
                    })?;
                    let o: u64 = o.trim().parse().map_err(|_| CatalogError::Malformed {
                        line,
                        msg: format!("bad order in count header {body:?}"),
                    })?;
                    let n: usize = n.trim().parse().map_err(|_| CatalogError::Malformed {
                        line,
                        msg: format!("bad count in count header {body:?}"),
                    })?;
                    manifest.expected_counts.insert(o, n);
                }
                continue;
            }
            let mut parts = trimmed.splitn(5, ' ');
            let (order, index, name, degree, gens) = match (
                parts.next(),
                parts.next(),
                parts.next(),
                parts.next(),
                parts.next(),
            ) {
                (Some(a), Some(b), Some(c), Some(d), Some(e)) => (a, b, c, d, e),
                _ => {
                    return Err(CatalogError::Malformed {
                        line,
                        msg: format!("expected 5 fields, got {:?}", trimmed),
                    })
                }
            };
            let order: u64 = order.parse().map_err(|_| CatalogError::Malformed {
                line,
                msg: format!("bad order {order:?}"),
            })?;
            let index: u64 = index.parse().map_err(|_| CatalogError::Malformed {
                line,
                msg: format!("bad index {index:?}"),
            })?;
            let degree: usize = degree.parse().map_err(|_| CatalogError::Malformed {
                line,
                msg: format!("bad degree {degree:?}"),
            })?;
            let id = GroupId { order, index };
            if !seen.insert(id) {
                return Err(CatalogError::DuplicateId { line, order, index });
            }
            let mut generators = Vec::new();
            for g in gens.split(';') {
                let p = Permutation::parse_cycles(g.trim(), degree).map_err(|e| {
                    CatalogError::Malformed {
                        line,
                        msg: format!("generator {g:?}: {e}"),
                    }
                })?;
                generators.push(p);
            }
            records.push(CatalogRecord {
                id,
                name: name.to_string(),
                degree,
                generators,
            });
        }

        if !saw_coverage {
            return Err(CatalogError::MissingCoverage);
        }
        let mut by_order: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            by_order.entry(r.id.order).or_default().push(i);
        }
        Ok(Catalog {
            manifest,
            records,
            by_order,
        })
    }

    /// Canonical serialization: coverage header, count headers, then
    /// records sorted by (order, index).
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("#covered-orders:");
        out.push_str(&format_order_set(&self.manifest.covered_orders));
        out.push('\n');
        for (&o, &n) in &self.manifest.expected_counts {
            writeln!(out, "#count:{o}={n}").unwrap();
        }
        let mut sorted: Vec<&CatalogRecord> = self.records.iter().collect();
        sorted.sort_by_key(|r| r.id);
        for r in sorted {
            let gens: Vec<String> = r.generators.iter().map(|g| g.to_cycle_string()).collect();
            writeln!(
                out,
                "{} {} {} {} {}",
                r.id.order,
                r.id.index,
                r.name,
                r.degree,
                gens.join(";")
            )
            .unwrap();
        }
        out
    }

    pub fn groups_of_order(&self, n: u64) -> OrderLookup<'_> {
        if !self.manifest.covered_orders.contains(&n) {
            return OrderLookup::NotCovered;
        }
        let mut recs: Vec<&CatalogRecord> = self
            .by_order
            .get(&n)
            .map(|ixs| ixs.iter().map(|&i| &self.records[i]).collect())
            .unwrap_or_default();
        recs.sort_by_key(|r| r.id.index);
        OrderLookup::Covered(recs)
    }

    pub fn lookup(&self, id: GroupId) -> Option<&CatalogRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Consistency report: per-record order check against realization,
    /// per-order index contiguity, and expected-count cross-checks.
    pub fn verify(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for r in &self.records {
            match r.realize() {
                Ok(g) => {
                    if g.order() as u64 != r.id.order {
                        violations.push(format!(
                            "{}: generators produce order {}, declared {}",
                            r.id,
                            g.order(),
                            r.id.order
                        ));
                    }
                }
                Err(e) => violations.push(format!("{}: cannot realize: {e}", r.id)),
            }
        }
        for (&order, ixs) in &self.by_order {
            if !self.manifest.covered_orders.contains(&order) {
                violations.push(format!("order {order} has records but is not covered"));
            }
            let mut indices: Vec<u64> = ixs.iter().map(|&i| self.records[i].id.index).collect();
            indices.sort_unstable();
            let expect: Vec<u64> = (1..=indices.len() as u64).collect();
            if indices != expect {
                violations.push(format!("order {order}: indices are not 1..{}", ixs.len()));
            }
            if let Some(&n) = self.manifest.expected_counts.get(&order) {
                if ixs.len() != n {
                    violations.push(format!(
                        "order {order}: {} records, manifest expects {n}",
                        ixs.len()
                    ));
                }
            }
            if is_prime(order) && ixs.len() != 1 {
                violations.push(format!(
                    "order {order} is prime but has {} records",
                    ixs.len()
                ));
            }
        }
        for (&order, &n) in &self.manifest.expected_counts {
            if is_prime(order) && n != 1 {
                violations.push(format!(
                    "manifest expects {n} groups of prime order {order}"
                ));
            }
        }
        violations
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn parse_order_set(body: &str, out: &mut BTreeSet<u64>) -> Result<(), String> {
    for tok in body.trim().split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((a, b)) = tok.split_once('-') {
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range {tok:?}"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range {tok:?}"))?;
            if a > b {
                return Err(format!("empty range {tok:?}"));
            }
            out.extend(a..=b);
        } else {
            let n: u64 = tok.parse().map_err(|_| format!("bad order {tok:?}"))?;
            out.insert(n);
        }
    }
    Ok(())
}

fn format_order_set(orders: &BTreeSet<u64>) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut iter = orders.iter().copied().peekable();
    while let Some(start) = iter.next() {
        let mut end = start;
        while iter.peek() == Some(&(end + 1)) {
            end = iter.next().unwrap();
        }
        if end > start + 1 {
            parts.push(format!("{start}-{end}"));
        } else if end == start + 1 {
            parts.push(start.to_string());
            parts.push(end.to_string());
        } else {
            parts.push(start.to_string());
        }
    }
    parts.join(",")
}

/// Catalog covering every order candidate enumeration can emit at
/// genus 2.
pub fn bundled_genus2_catalog() -> Catalog {
    Catalog::parse(include_str!("../data/catalog_genus2.txt")).expect("bundled catalog parses")
}

/// Extended catalog: all candidate orders for genera 2 through 4.
pub fn bundled_extended_catalog() -> Catalog {
    Catalog::parse(include_str!("../data/catalog_extended.txt")).expect("bundled catalog parses")
}
