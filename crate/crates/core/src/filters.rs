//! Elimination filters applied to a candidate pair before the
//! epimorphism search: abelianization dominance, the abelian
//! surface-kernel criterion, the prime-signature closure test, and the
//! Hurwitz perfectness shortcut.

use thiserror::Error;

use crate::catalog::GroupId;
use crate::db::ClassificationDb;
use crate::group::{AbelianInvariants, FiniteGroup};
use crate::signature::Signature;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("database incomplete: complete through {0}, need {1}")]
    DbIncomplete(u64, u64),
}

/// Abelianization of the Fuchsian group with the given signature:
/// free rank 2·g0 plus the torsion invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureAbelianization {
    pub rank: usize,
    pub torsion: AbelianInvariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    AlreadyClassified,
    AbelianInvariants,
    AbelianSke,
    PrimeClosure,
    HurwitzPerfect,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::AlreadyClassified => "already-classified",
            RejectReason::AbelianInvariants => "abelian-invariants",
            RejectReason::AbelianSke => "abelian-ske",
            RejectReason::PrimeClosure => "prime-closure",
            RejectReason::HurwitzPerfect => "hurwitz-perfect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterVerdict {
    pub pass: bool,
    pub reason: Option<RejectReason>,
}

impl FilterVerdict {
    fn pass() -> FilterVerdict {
        FilterVerdict {
            pass: true,
            reason: None,
        }
    }

    fn reject(reason: RejectReason) -> FilterVerdict {
        FilterVerdict {
            pass: false,
            reason: Some(reason),
        }
    }
}

/// Nonzero diagonal entries of the Smith normal form, each > 1, in
/// ascending divisibility order.
fn smith_torsion(mut m: Vec<Vec<i64>>) -> Vec<u64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut divisors = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < rows && left < cols {
        // smallest nonzero entry in the remaining block as pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in left..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }
        if m[top][left] < 0 {
            for j in left..cols {
                m[top][j] = -m[top][j];
            }
        }
        // clear the pivot row and column; restart if a remainder shrinks
        // the pivot
        let mut clean = true;
        for i in top + 1..rows {
            let q = m[i][left].div_euclid(m[top][left]);
            if q != 0 {
                for j in left..cols {
                    m[i][j] -= q * m[top][j];
                }
            }
            if m[i][left] != 0 {
                clean = false;
            }
        }
        for j in left + 1..cols {
            let q = m[top][j].div_euclid(m[top][left]);
            if q != 0 {
                for i in top..rows {
                    m[i][j] -= q * m[i][left];
                }
            }
            if m[top][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide every remaining entry; if not, fold the
        // offending row in and redo
        let d = m[top][left];
        let mut fixed = true;
        'scan: for i in top + 1..rows {
            for j in left + 1..cols {
                if m[i][j] % d != 0 {
                    for k in left..cols {
                        let add = m[i][k];
                        m[top][k] += add;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        divisors.push(d as u64);
        top += 1;
        left += 1;
    }
    divisors.retain(|&d| d > 1);
    divisors
}

/// Relation matrix of the signature's abelianization on the elliptic
/// generators: diag(m_1..m_r) plus the all-ones long-relation row.
pub fn signature_abelianization(sig: &Signature) -> SignatureAbelianization {
    let r = sig.period_count();
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(r + 1);
    for (i, &m) in sig.periods().iter().enumerate() {
        let mut row = vec![0i64; r];
        row[i] = m as i64;
        rows.push(row);
    }
    rows.push(vec![1i64; r]);
    SignatureAbelianization {
        rank: 2 * sig.orbit_genus() as usize,
        torsion: AbelianInvariants {
            factors: smith_torsion(rows),
            rank: 0,
        },
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            ps.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

fn p_exponents_desc(factors: &[u64], p: u64) -> Vec<u32> {
    let mut es: Vec<u32> = factors
        .iter()
        .map(|&f| {
            let mut e = 0;
            let mut f = f;
            while f % p == 0 {
                e += 1;
                f /= p;
            }
            e
        })
        .filter(|&e| e > 0)
        .collect();
    es.sort_unstable_by(|a, b| b.cmp(a));
    es
}

/// Does `Z^rank ⊕ H` surject onto the finite abelian group with
/// invariants `g`? Checked prime by prime via invariant-factor
/// dominance: the free rank absorbs the `rank` largest target factors;
/// every remaining factor must be dominated by H's factor of the same
/// position.
pub fn abelian_epi_exists(rank: usize, h: &AbelianInvariants, g: &AbelianInvariants) -> bool {
    let order: u64 = g.factors.iter().product();
    for p in prime_factors(order) {
        let a = p_exponents_desc(&h.factors, p);
        let b = p_exponents_desc(&g.factors, p);
        if b.len() > a.len() + rank {
            return false;
        }
        for (i, &ai) in a.iter().enumerate() {
            if i + rank < b.len() && b[i + rank] > ai {
                return false;
            }
        }
    }
    true
}

/// The five-part surface-kernel criterion for abelian targets.
pub fn abelian_ske_exists(sig: &Signature, g: &FiniteGroup) -> Result<bool, FilterError> {
    if !g.is_abelian() {
        return Err(FilterError::NotAbelian);
    }
    let periods = sig.periods();
    let r = periods.len();
    let g0 = sig.orbit_genus();
    let m = periods.iter().fold(1u64, |l, &p| num_integer::lcm(l, p));
    let exp = g.exponent();
    let invariants = g.abelian_invariants();

    // (iii) period-count constraints
    if r == 1 || (g0 == 0 && r > 0 && r < 3) {
        return Ok(false);
    }
    // (i) dropping any period leaves the lcm unchanged
    for skip in 0..r {
        let rest = periods
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(1u64, |l, (_, &p)| num_integer::lcm(l, p));
        if rest != m {
            return Ok(false);
        }
    }
    // (ii) lcm versus exponent
    if exp % m != 0 || (g0 == 0 && m != exp) {
        return Ok(false);
    }
    if g0 == 0 && r == 0 {
        return Ok(false);
    }
    // (iv) even count of periods at the top 2-power when only one
    // invariant factor reaches it
    if m % 2 == 0 {
        let v = m.trailing_zeros();
        let pow = 1u64 << v;
        let carriers = invariants
            .factors
            .iter()
            .filter(|&&f| f % pow == 0)
            .count();
        if carriers == 1 {
            let count = periods.iter().filter(|&&p| p % pow == 0).count();
            if count % 2 != 0 {
                return Ok(false);
            }
        }
    }
    // (o) epimorphism of abelianizations
    let ab = signature_abelianization(sig);
    Ok(abelian_epi_exists(ab.rank, &ab.torsion, &invariants))
}

/// For signatures `(0; p,...,p)` with p prime: the normal closure of
/// all order-p elements must be the whole group. Vacuously true for
/// any other signature shape.
pub fn prime_signature_ok(g: &FiniteGroup, sig: &Signature) -> bool {
    if sig.orbit_genus() != 0 || sig.periods().is_empty() {
        return true;
    }
    let p = sig.periods()[0];
    if !sig.periods().iter().all(|&m| m == p) || !is_prime(p) {
        return true;
    }
    let seed = g.elements_of_exact_order(p);
    if seed.is_empty() {
        return false;
    }
    // the set of all order-p elements is a union of conjugacy classes,
    // so its subgroup closure is already normal
    g.subgroup_closure(seed).len() == g.order()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The (0;2,3,7) target must be a Hurwitz group, hence perfect.
pub fn hurwitz_ok(g: &FiniteGroup, sig: &Signature) -> bool {
    if sig.orbit_genus() == 0 && sig.periods() == [2, 3, 7] {
        g.is_perfect()
    } else {
        true
    }
}

/// All filters in fixed order; first failure wins.
pub fn run_filters(
    id: GroupId,
    sig: &Signature,
    g: &FiniteGroup,
    target_genus: u64,
    db: &ClassificationDb,
) -> Result<FilterVerdict, FilterError> {
    if target_genus > 2 && db.complete_through() < target_genus - 1 {
        return Err(FilterError::DbIncomplete(
            db.complete_through(),
            target_genus - 1,
        ));
    }
    if db.lookup(id).is_some() {
        return Ok(FilterVerdict::reject(RejectReason::AlreadyClassified));
    }
    let ab = signature_abelianization(sig);
    let g_inv = g.abelian_invariants();
    if !abelian_epi_exists(ab.rank, &ab.torsion, &g_inv) {
        return Ok(FilterVerdict::reject(RejectReason::AbelianInvariants));
    }
    if g.is_abelian() && !abelian_ske_exists(sig, g)? {
        return Ok(FilterVerdict::reject(RejectReason::AbelianSke));
    }
    if !prime_signature_ok(g, sig) {
        return Ok(FilterVerdict::reject(RejectReason::PrimeClosure));
    }
    if !hurwitz_ok(g, sig) {
        return Ok(FilterVerdict::reject(RejectReason::HurwitzPerfect));
    }
    Ok(FilterVerdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn sig(g0: u32, ps: &[u64]) -> Signature {
        Signature::new(g0, ps.to_vec()).unwrap()
    }

    fn inv(fs: &[u64]) -> AbelianInvariants {
        AbelianInvariants {
            factors: fs.to_vec(),
            rank: 0,
        }
    }

    fn cyclic(n: usize) -> FiniteGroup {
        let images: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
        FiniteGroup::generate(&[Permutation::from_images(images).unwrap()]).unwrap()
    }

    #[test]
    fn abelianization_examples() {
        let a = signature_abelianization(&sig(1, &[]));
        assert_eq!(a.rank, 2);
        assert!(a.torsion.factors.is_empty());

        let a = signature_abelianization(&sig(0, &[2, 3, 8]));
        assert_eq!(a.rank, 0);
        assert_eq!(a.torsion.factors, vec![2]);

        let a = signature_abelianization(&sig(0, &[2, 2, 2, 2]));
        assert_eq!(a.torsion.factors, vec![2, 2, 2]);
    }

    #[test]
    fn abelianization_torsion_order() {
        // for g0 = 0 the torsion order is (Π m_i) / lcm(m_i)
        for ps in [
            vec![2u64, 3, 8],
            vec![2, 2, 2, 2],
            vec![3, 3, 4],
            vec![2, 4, 6, 12],
            vec![5, 5, 5],
        ] {
            let s = sig(0, &ps);
            let prod: u64 = ps.iter().product();
            let lcm = ps.iter().fold(1u64, |l, &p| num_integer::lcm(l, p));
            let a = signature_abelianization(&s);
            assert_eq!(a.torsion.torsion_order(), prod / lcm, "{s}");
        }
    }

    #[test]
    fn epi_dominance_examples() {
        assert!(abelian_epi_exists(2, &inv(&[]), &inv(&[6])));
        assert!(!abelian_epi_exists(0, &inv(&[2, 2]), &inv(&[4])));
        assert!(abelian_epi_exists(1, &inv(&[2]), &inv(&[2, 4])));
        assert!(!abelian_epi_exists(1, &inv(&[2]), &inv(&[4, 4])));
    }

    #[test]
    fn ske_examples() {
        assert!(!abelian_ske_exists(&sig(0, &[2, 3, 12]), &cyclic(12)).unwrap()); // (i)
        assert!(abelian_ske_exists(&sig(0, &[2, 4, 4]), &cyclic(4)).unwrap());
        assert!(!abelian_ske_exists(&sig(0, &[2, 2, 2]), &cyclic(2)).unwrap()); // (iv)
        let s3 = FiniteGroup::generate(&[
            Permutation::parse_cycles("(1,2)", 3).unwrap(),
            Permutation::parse_cycles("(1,2,3)", 3).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            abelian_ske_exists(&sig(0, &[2, 4, 4]), &s3),
            Err(FilterError::NotAbelian)
        ));
    }

    #[test]
    fn prime_signature_examples() {
        let a4 = FiniteGroup::generate(&[
            Permutation::parse_cycles("(1,2,3)", 4).unwrap(),
            Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap(),
        ])
        .unwrap();
        let s4 = FiniteGroup::generate(&[
            Permutation::parse_cycles("(1,2)", 4).unwrap(),
            Permutation::parse_cycles("(1,2,3,4)", 4).unwrap(),
        ])
        .unwrap();
        assert!(prime_signature_ok(&cyclic(3), &sig(0, &[3, 3, 3])));
        assert!(!prime_signature_ok(&a4, &sig(0, &[2, 2, 2, 2, 2, 2])));
        assert!(prime_signature_ok(&s4, &sig(0, &[2, 2, 2, 2, 2])));
        // mixed periods: vacuous
        assert!(prime_signature_ok(&a4, &sig(0, &[2, 3, 7])));
    }

    #[test]
    fn hurwitz_examples() {
        let a5 = FiniteGroup::generate(&[
            Permutation::parse_cycles("(1,2,3,4,5)", 5).unwrap(),
            Permutation::parse_cycles("(1,2,3)", 5).unwrap(),
        ])
        .unwrap();
        assert!(!hurwitz_ok(&cyclic(6), &sig(0, &[2, 3, 7])));
        assert!(hurwitz_ok(&a5, &sig(0, &[2, 3, 7])));
        assert!(hurwitz_ok(&cyclic(2), &sig(0, &[2, 3, 8])));
    }

    #[test]
    fn run_filters_order() {
        use crate::db::{DbRecord, StoredWitness};
        let mut db = ClassificationDb::new();
        db.insert(DbRecord {
            genus: 2,
            order: 6,
            index: 2,
            name: "C6".into(),
            orbit_genus: 0,
            periods: vec![2, 6, 6],
            degree: 6,
            witness: StoredWitness {
                hyperbolic: vec![],
                elliptic: vec![],
            },
        })
        .unwrap();
        db.set_complete_through(2);
        let c6 = cyclic(6);
        let id = GroupId { order: 6, index: 2 };
        let v = run_filters(id, &sig(0, &[2, 6, 6]), &c6, 3, &db).unwrap();
        assert_eq!(v.reason, Some(RejectReason::AlreadyClassified));

        let fresh = GroupId { order: 6, index: 1 };
        let v = run_filters(fresh, &sig(0, &[2, 3, 7]), &c6, 3, &db).unwrap();
        assert!(!v.pass);

        let db2 = ClassificationDb::new();
        assert!(matches!(
            run_filters(fresh, &sig(0, &[2, 3, 7]), &c6, 4, &db2),
            Err(FilterError::DbIncomplete(1, 3))
        ));
    }
}
