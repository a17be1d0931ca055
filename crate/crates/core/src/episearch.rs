//! Backtracking search for a surface kernel epimorphism onto a finite
//! group, plus an unpruned brute-force oracle used by the test suites.

use thiserror::Error;

use crate::group::{ElemId, FiniteGroup};
use crate::signature::Signature;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("instance exceeds brute-force guard rails (|G| ≤ 24, r + 2g0 ≤ 6)")]
    GuardRails,
}

/// A certified surface kernel epimorphism: images of the hyperbolic
/// generators a_1,b_1,...,a_{g0},b_{g0} and of the elliptic generators
/// x_1..x_r. The elliptic images follow `periods`, the descending
/// reordering of the signature's periods used by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub hyperbolic_images: Vec<ElemId>,
    pub elliptic_images: Vec<ElemId>,
    pub periods: Vec<u64>,
}

fn descending_periods(sig: &Signature) -> Vec<u64> {
    let mut ps = sig.periods().to_vec();
    ps.sort_unstable_by(|a, b| b.cmp(a));
    ps
}

fn generates(g: &FiniteGroup, images: &[ElemId]) -> bool {
    g.subgroup_closure(images).len() == g.order()
}

/// Product of commutators `[a_1,b_1]...[a_k,b_k]` for an interleaved
/// image list.
fn commutator_product(g: &FiniteGroup, hyp: &[ElemId]) -> ElemId {
    let mut acc = FiniteGroup::IDENTITY;
    for pair in hyp.chunks(2) {
        acc = g.mul(acc, g.commutator(pair[0], pair[1]));
    }
    acc
}

/// Check the three witness invariants: exact orders, the long relation
/// `Π[a_j,b_j]·Πx_i = id`, and generation.
pub fn validate_witness(sig: &Signature, g: &FiniteGroup, w: &Witness) -> bool {
    if w.hyperbolic_images.len() != 2 * sig.orbit_genus() as usize {
        return false;
    }
    if w.elliptic_images.len() != sig.period_count() || w.periods.len() != sig.period_count() {
        return false;
    }
    let mut sorted = w.periods.clone();
    sorted.sort_unstable();
    if sorted != sig.periods() {
        return false;
    }
    for (&x, &m) in w.elliptic_images.iter().zip(&w.periods) {
        if g.element_order(x) != m {
            return false;
        }
    }
    let mut total = commutator_product(g, &w.hyperbolic_images);
    for &x in &w.elliptic_images {
        total = g.mul(total, x);
    }
    if total != FiniteGroup::IDENTITY {
        return false;
    }
    let mut all = w.hyperbolic_images.clone();
    all.extend(&w.elliptic_images);
    generates(g, &all)
}

/// Find one surface kernel epimorphism, or prove none exists.
///
/// Search shape: periods processed in descending order; the last
/// elliptic generator is forced as the inverse of the partial product;
/// for g0 = 0 the first elliptic generator ranges over conjugacy-class
/// representatives only (sound because tuple-wise conjugation preserves
/// orders, the long relation, and generation). Candidates are tried in
/// ascending element-id order, so the returned witness is deterministic.
pub fn find_surface_kernel_epi(sig: &Signature, g: &FiniteGroup) -> Option<Witness> {
    let periods = descending_periods(sig);
    let g0 = sig.orbit_genus() as usize;
    for &m in &periods {
        if g.elements_of_exact_order(m).is_empty() {
            return None;
        }
    }
    if g0 == 0 {
        return elliptic_search(g, &periods, FiniteGroup::IDENTITY, true).map(|xs| Witness {
            hyperbolic_images: vec![],
            elliptic_images: xs,
            periods,
        });
    }
    // g0 > 0: only reached for very small |G| (the positive-orbit-genus
    // bound caps the order at 4(g-1)),
    // so plain nested enumeration of the hyperbolic images suffices
    let n = g.order() as ElemId;
    let mut hyp = vec![FiniteGroup::IDENTITY; 2 * g0];
    fn rec(
        g: &FiniteGroup,
        hyp: &mut Vec<ElemId>,
        pos: usize,
        n: ElemId,
        periods: &[u64],
    ) -> Option<Witness> {
        if pos == hyp.len() {
            let c = commutator_product(g, hyp);
            if periods.is_empty() {
                if c == FiniteGroup::IDENTITY && generates(g, hyp) {
                    return Some(Witness {
                        hyperbolic_images: hyp.clone(),
                        elliptic_images: vec![],
                        periods: vec![],
                    });
                }
                return None;
            }
            // elliptic product must equal c^{-1}; seed the partial
            // product with c and let the forced generator close it
            if let Some(xs) = elliptic_search_with(g, periods, c, hyp) {
                return Some(Witness {
                    hyperbolic_images: hyp.clone(),
                    elliptic_images: xs,
                    periods: periods.to_vec(),
                });
            }
            return None;
        }
        for x in 0..n {
            hyp[pos] = x;
            if let Some(w) = rec(g, hyp, pos + 1, n, periods) {
                return Some(w);
            }
        }
        None
    }
    rec(g, &mut hyp, 0, n, &periods)
}

/// Backtracking over elliptic images with the last one forced. `prefix`
/// is the fixed leading factor of the long relation (the commutator
/// product); `extra` holds already-fixed images counted for generation.
fn elliptic_search_with(
    g: &FiniteGroup,
    periods: &[u64],
    prefix: ElemId,
    extra: &[ElemId],
) -> Option<Vec<ElemId>> {
    let r = periods.len();
    let mut xs: Vec<ElemId> = Vec::with_capacity(r);
    fn rec(
        g: &FiniteGroup,
        periods: &[u64],
        xs: &mut Vec<ElemId>,
        prod: ElemId,
        extra: &[ElemId],
        class_reps_first: bool,
    ) -> bool {
        let pos = xs.len();
        let r = periods.len();
        if pos == r - 1 {
            let forced = g.inverse(prod);
            if g.element_order(forced) != periods[r - 1] {
                return false;
            }
            xs.push(forced);
            let mut all = extra.to_vec();
            all.extend(xs.iter().copied());
            if g.subgroup_closure(&all).len() == g.order() {
                return true;
            }
            xs.pop();
            return false;
        }
        let m = periods[pos];
        let candidates: Vec<ElemId> = if pos == 0 && class_reps_first && extra.is_empty() {
            g.class_representatives_of_order(m)
        } else {
            g.elements_of_exact_order(m).to_vec()
        };
        for x in candidates {
            xs.push(x);
            if rec(g, periods, xs, g.mul(prod, x), extra, class_reps_first) {
                return true;
            }
            xs.pop();
        }
        false
    }
    if r == 0 {
        return None;
    }
    if r == 1 {
        let forced = g.inverse(prefix);
        if g.element_order(forced) != periods[0] {
            return None;
        }
        let mut all = extra.to_vec();
        all.push(forced);
        if g.subgroup_closure(&all).len() == g.order() {
            return Some(vec![forced]);
        }
        return None;
    }
    if rec(g, periods, &mut xs, prefix, extra, extra.is_empty()) {
        Some(xs)
    } else {
        None
    }
}

fn elliptic_search(
    g: &FiniteGroup,
    periods: &[u64],
    prefix: ElemId,
    _class_reduce: bool,
) -> Option<Vec<ElemId>> {
    elliptic_search_with(g, periods, prefix, &[])
}

/// Unpruned, symmetry-free existence oracle: enumerate every image
/// tuple directly. Independent code path from the backtracking search.
pub fn brute_force_epi_exists(sig: &Signature, g: &FiniteGroup) -> Result<bool, SearchError> {
    let g0 = sig.orbit_genus() as usize;
    let r = sig.period_count();
    if g.order() > 24 || r + 2 * g0 > 6 {
        return Err(SearchError::GuardRails);
    }
    let n = g.order() as ElemId;
    let periods = sig.periods(); // ascending, unlike the search
    let mut tuple = vec![FiniteGroup::IDENTITY; 2 * g0 + r];
    fn rec(g: &FiniteGroup, tuple: &mut Vec<ElemId>, pos: usize, n: ElemId, g0: usize, periods: &[u64]) -> bool {
        if pos == tuple.len() {
            let mut total = FiniteGroup::IDENTITY;
            for pair in tuple[..2 * g0].chunks(2) {
                total = g.mul(total, g.commutator(pair[0], pair[1]));
            }
            for &x in &tuple[2 * g0..] {
                total = g.mul(total, x);
            }
            return total == FiniteGroup::IDENTITY
                && g.subgroup_closure(tuple).len() == g.order();
        }
        if pos < 2 * g0 {
            for x in 0..n {
                tuple[pos] = x;
                if rec(g, tuple, pos + 1, n, g0, periods) {
                    return true;
                }
            }
            return false;
        }
        let m = periods[pos - 2 * g0];
        for &x in g.elements_of_exact_order(m) {
            tuple[pos] = x;
            if rec(g, tuple, pos + 1, n, g0, periods) {
                return true;
            }
        }
        false
    }
    Ok(rec(g, &mut tuple, 0, n, g0, periods))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn sig(g0: u32, ps: &[u64]) -> Signature {
        Signature::new(g0, ps.to_vec()).unwrap()
    }

    fn grp(gens: &[(&str, usize)]) -> FiniteGroup {
        let perms: Vec<Permutation> = gens
            .iter()
            .map(|(s, d)| Permutation::parse_cycles(s, *d).unwrap())
            .collect();
        FiniteGroup::generate(&perms).unwrap()
    }

    fn q8() -> FiniteGroup {
        grp(&[("(1,2,3,4)(5,6,7,8)", 8), ("(1,5,3,7)(2,8,4,6)", 8)])
    }

    fn klein() -> FiniteGroup {
        grp(&[("(1,2)", 4), ("(3,4)", 4)])
    }

    fn cyclic(n: usize) -> FiniteGroup {
        let images: Vec<u16> = (0..n).map(|i| ((i + 1) % n) as u16).collect();
        FiniteGroup::generate(&[Permutation::from_images(images).unwrap()]).unwrap()
    }

    #[test]
    fn q8_triangle_witness() {
        let g = q8();
        let s = sig(0, &[4, 4, 4]);
        let w = find_surface_kernel_epi(&s, &g).expect("Q8 admits (0;4,4,4)");
        assert!(validate_witness(&s, &g, &w));
        assert!(brute_force_epi_exists(&s, &g).unwrap());
    }

    #[test]
    fn impossible_orders_absent() {
        let g = cyclic(2);
        assert!(find_surface_kernel_epi(&sig(0, &[2, 3, 7]), &g).is_none());
        assert!(!brute_force_epi_exists(&sig(0, &[2, 3, 7]), &g).unwrap());
    }

    #[test]
    fn klein_square_witness() {
        let g = klein();
        let s = sig(0, &[2, 2, 2, 2]);
        let w = find_surface_kernel_epi(&s, &g).expect("Klein admits (0;2,2,2,2)");
        assert!(validate_witness(&s, &g, &w));
    }

    #[test]
    fn torus_signature_is_two_generated_abelian() {
        // (1;-) admits a witness iff G is abelian and 2-generated
        assert!(find_surface_kernel_epi(&sig(1, &[]), &klein()).is_some());
        assert!(find_surface_kernel_epi(&sig(1, &[]), &cyclic(6)).is_some());
        assert!(find_surface_kernel_epi(&sig(1, &[]), &q8()).is_none());
        let c2cubed = grp(&[("(1,2)", 6), ("(3,4)", 6), ("(5,6)", 6)]);
        assert!(find_surface_kernel_epi(&sig(1, &[]), &c2cubed).is_none());
    }

    #[test]
    fn bad_witness_rejected() {
        let g = q8();
        let s = sig(0, &[4, 4, 4]);
        let a = g
            .id_of(&Permutation::parse_cycles("(1,2,3,4)(5,6,7,8)", 8).unwrap())
            .unwrap();
        let b = g
            .id_of(&Permutation::parse_cycles("(1,5,3,7)(2,8,4,6)", 8).unwrap())
            .unwrap();
        // (a, b, ab): product is (ab)^2 = -1, not the identity
        let w = Witness {
            hyperbolic_images: vec![],
            elliptic_images: vec![a, b, g.mul(a, b)],
            periods: vec![4, 4, 4],
        };
        assert!(!validate_witness(&s, &g, &w));
    }

    #[test]
    fn subgroup_image_rejected() {
        // correct orders and relation inside a proper subgroup of C4xC2
        let g = grp(&[("(1,2,3,4)", 6), ("(5,6)", 6)]);
        let a = g
            .id_of(&Permutation::parse_cycles("(1,2,3,4)", 6).unwrap())
            .unwrap();
        let s = sig(0, &[4, 4, 4, 4]);
        let w = Witness {
            hyperbolic_images: vec![],
            elliptic_images: vec![a, a, g.inverse(a), g.inverse(a)],
            periods: vec![4, 4, 4, 4],
        };
        assert!(!validate_witness(&s, &g, &w)); // images generate only C4
    }

    #[test]
    fn brute_force_small_cases() {
        assert!(brute_force_epi_exists(&sig(0, &[3, 3, 3]), &cyclic(3)).unwrap());
        assert!(!brute_force_epi_exists(&sig(0, &[2, 2, 2]), &cyclic(2)).unwrap());
        assert!(matches!(
            brute_force_epi_exists(&sig(0, &[2, 2, 2]), &grp(&[("(1,2,3,4,5)", 30), ("(6,7)", 30), ("(8,9,10)", 30)])),
            Err(SearchError::GuardRails)
        ));
    }

    #[test]
    fn conjugation_preserves_witnesses() {
        let g = q8();
        let s = sig(0, &[4, 4, 4]);
        let w = find_surface_kernel_epi(&s, &g).unwrap();
        for c in 0..g.order() as ElemId {
            let w2 = Witness {
                hyperbolic_images: vec![],
                elliptic_images: w
                    .elliptic_images
                    .iter()
                    .map(|&x| g.conjugate(x, c))
                    .collect(),
                periods: w.periods.clone(),
            };
            assert!(validate_witness(&s, &g, &w2));
        }
    }

    #[test]
    fn search_matches_oracle_spot() {
        let groups: Vec<FiniteGroup> = vec![cyclic(4), cyclic(6), klein(), q8(),
            grp(&[("(1,2)", 3), ("(1,2,3)", 3)])];
        let sigs = [
            sig(0, &[2, 2, 2, 2]),
            sig(0, &[3, 3, 3]),
            sig(0, &[2, 4, 4]),
            sig(0, &[2, 3, 6]),
            sig(1, &[]),
            sig(0, &[4, 4, 4]),
            sig(1, &[2, 2]),
        ];
        for g in &groups {
            for s in &sigs {
                let found = find_surface_kernel_epi(s, g).is_some();
                let oracle = brute_force_epi_exists(s, g).unwrap();
                assert_eq!(found, oracle, "disagree on {s} order {}", g.order());
            }
        }
    }
}
