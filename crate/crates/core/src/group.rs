//! Finite-group kernel: generated permutation groups with full element
//! enumeration, cached multiplication tables, element orders, conjugacy
//! classes, normal closures, derived subgroups and abelian invariants.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::perm::Permutation;

/// Default cap on enumerated elements; exceeding it signals a broken
/// catalog record rather than a legitimate group.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generator degrees differ: {0} vs {1}")]
    MixedDegrees(usize, usize),
    #[error("element closure exceeded cap of {0} elements")]
    CapExceeded(usize),
}

/// Index of an element within its group's element list.
pub type ElemId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: ElemId,
    pub members: Vec<ElemId>,
    pub element_order: u64,
}

/// Invariant-factor decomposition of a finitely generated abelian group.
/// `factors` is an ascending divisibility chain d1 | d2 | ... ; `rank`
/// counts free summands (always 0 for the groups computed here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub factors: Vec<u64>,
    pub rank: usize,
}

impl AbelianInvariants {
    pub fn torsion_order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }
}

/// A finite permutation group with its complete element set.
///
/// Immutable after construction; all hot-path arithmetic happens in
/// element-index space through the cached multiplication table.
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    mult: Vec<ElemId>,
    inv: Vec<ElemId>,
    elem_order: Vec<u64>,
    order_index: BTreeMap<u64, Vec<ElemId>>,
    class_id: Vec<u32>,
    classes: Vec<ConjugacyClass>,
}

impl FiniteGroup {
    /// Breadth-first closure of the generators.
    pub fn generate(gens: &[Permutation]) -> Result<FiniteGroup, GroupError> {
        Self::generate_capped(gens, DEFAULT_ELEMENT_CAP)
    }

    pub fn generate_capped(gens: &[Permutation], cap: usize) -> Result<FiniteGroup, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let degree = gens[0].degree();
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::MixedDegrees(degree, g.degree()));
            }
        }

        let mut elements: Vec<Permutation> = vec![Permutation::identity(degree)];
        let mut index: HashMap<Vec<u16>, ElemId> = HashMap::new();
        index.insert(elements[0].images().to_vec(), 0);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(i) = frontier.pop() {
            for g in gens {
                let next = elements[i].compose(g).expect("degrees checked");
                if !index.contains_key(next.images()) {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    index.insert(next.images().to_vec(), elements.len() as ElemId);
                    elements.push(next);
                    frontier.push(elements.len() - 1);
                }
            }
        }
        // deterministic element numbering: identity first, then sorted
        // by image array
        let mut rest: Vec<Permutation> = elements.drain(1..).collect();
        rest.sort();
        elements.extend(rest);
        let index: HashMap<Vec<u16>, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec(), i as ElemId))
            .collect();

        let n = elements.len();
        let mut mult = vec![0 as ElemId; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = elements[a].compose(&elements[b]).unwrap();
                mult[a * n + b] = index[p.images()];
            }
        }
        let mut inv = vec![0 as ElemId; n];
        for a in 0..n {
            inv[a] = index[elements[a].inverse().images()];
        }
        let elem_order: Vec<u64> = elements.iter().map(|p| p.order()).collect();
        let mut order_index: BTreeMap<u64, Vec<ElemId>> = BTreeMap::new();
        for (i, &o) in elem_order.iter().enumerate() {
            order_index.entry(o).or_default().push(i as ElemId);
        }

        // conjugacy classes by orbit of conjugation
        let mut class_id = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_id[a] != u32::MAX {
                continue;
            }
            let cid = classes.len() as u32;
            let mut members = Vec::new();
            for g in 0..n {
                let c = mult[(mult[g * n + a] as usize) * n + inv[g] as usize];
                if class_id[c as usize] == u32::MAX {
                    class_id[c as usize] = cid;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: members[0],
                members,
                element_order: elem_order[a],
            });
        }

        Ok(FiniteGroup {
            degree,
            generators: gens.to_vec(),
            elements,
            mult,
            inv,
            elem_order,
            order_index,
            class_id,
            classes,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: ElemId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.elements
            .binary_search_by(|e| {
                if e.is_identity() && !p.is_identity() {
                    std::cmp::Ordering::Less
                } else {
                    e.cmp(p)
                }
            })
            .ok()
            .map(|i| i as ElemId)
            .or_else(|| {
                // fall back to linear scan; identity-first ordering makes
                // the binary search above approximate only
                self.elements
                    .iter()
                    .position(|e| e == p)
                    .map(|i| i as ElemId)
            })
    }

    pub const IDENTITY: ElemId = 0;

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mult[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    #[inline]
    pub fn element_order(&self, a: ElemId) -> u64 {
        self.elem_order[a as usize]
    }

    pub fn conjugate(&self, x: ElemId, by: ElemId) -> ElemId {
        self.mul(self.mul(by, x), self.inverse(by))
    }

    /// `a^-1 b^-1 a b` in the crate's left-to-right convention.
    pub fn commutator(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.mul(self.mul(self.inverse(a), self.inverse(b)), a), b)
    }

    pub fn elements_of_exact_order(&self, m: u64) -> &[ElemId] {
        self.order_index.get(&m).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn element_order_multiset(&self) -> BTreeMap<u64, usize> {
        self.order_index
            .iter()
            .map(|(&o, v)| (o, v.len()))
            .collect()
    }

    pub fn exponent(&self) -> u64 {
        self.order_index
            .keys()
            .fold(1u64, |e, &o| num_integer::lcm(e, o))
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, a: ElemId) -> &ConjugacyClass {
        &self.classes[self.class_id[a as usize] as usize]
    }

    /// One representative per conjugacy class of elements of order m,
    /// in ascending representative order.
    pub fn class_representatives_of_order(&self, m: u64) -> Vec<ElemId> {
        self.classes
            .iter()
            .filter(|c| c.element_order == m)
            .map(|c| c.representative)
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    // -- subgroup machinery (index space) ---------------------------------

    /// Subgroup generated by `seed`, as a sorted element-id list.
    pub fn subgroup_closure(&self, seed: &[ElemId]) -> Vec<ElemId> {
        let n = self.order();
        let mut member = vec![false; n];
        member[0] = true;
        let mut elems: Vec<ElemId> = vec![0];
        let mut frontier: Vec<ElemId> = vec![0];
        let gens: Vec<ElemId> = seed.iter().copied().filter(|&g| g != 0).collect();
        for &g in &gens {
            if !member[g as usize] {
                member[g as usize] = true;
                elems.push(g);
                frontier.push(g);
            }
        }
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                for x in [self.mul(a, g), self.mul(g, a)] {
                    if !member[x as usize] {
                        member[x as usize] = true;
                        elems.push(x);
                        frontier.push(x);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Smallest normal subgroup of G containing `seed` (sorted ids).
    pub fn normal_closure_ids(&self, seed: &[ElemId]) -> Vec<ElemId> {
        // close the seed under conjugation by all generators, then take
        // the subgroup closure; repeat until stable
        let mut current: Vec<ElemId> = seed.to_vec();
        loop {
            let sub = self.subgroup_closure(&current);
            let mut extra = Vec::new();
            let gen_ids: Vec<ElemId> = self
                .generators
                .iter()
                .map(|g| self.id_of(g).expect("generator in element set"))
                .collect();
            let member: Vec<bool> = {
                let mut m = vec![false; self.order()];
                for &x in &sub {
                    m[x as usize] = true;
                }
                m
            };
            for &x in &sub {
                for &g in &gen_ids {
                    let c = self.conjugate(x, g);
                    if !member[c as usize] {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return sub;
            }
            current = sub;
            current.extend(extra);
        }
    }

    /// Normal closure: the subgroup as its own `FiniteGroup`
    /// (same degree, generated by the closure's elements).
    pub fn normal_closure(&self, seed: &[ElemId]) -> FiniteGroup {
        let ids = self.normal_closure_ids(seed);
        let perms: Vec<Permutation> = ids.iter().map(|&i| self.element(i).clone()).collect();
        FiniteGroup::generate_capped(&perms, self.order() + 1).expect("subgroup regenerates")
    }

    /// Derived subgroup `[G, G]` as sorted element ids.
    pub fn derived_subgroup_ids(&self) -> Vec<ElemId> {
        let n = self.order() as ElemId;
        let mut comms = Vec::new();
        // commutators of all pairs; the normal closure of generator
        // commutators equals this set's closure, but the full pair set
        // is cheap at cap scale and makes normality automatic
        for a in 0..n {
            for b in 0..n {
                comms.push(self.commutator(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.subgroup_closure(&comms)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup_ids().len() == self.order()
    }

    /// Invariant factors of G/[G,G], computed by peeling maximal-order
    /// cosets in the abelian quotient.
    pub fn abelian_invariants(&self) -> AbelianInvariants {
        let derived = self.derived_subgroup_ids();
        let quotient = CosetGroup::new(self, &derived);
        AbelianInvariants {
            factors: quotient.invariant_factors(),
            rank: 0,
        }
    }

    // -- structural recognizers -------------------------------------------

    pub fn is_cyclic(&self) -> bool {
        self.order_index.contains_key(&(self.order() as u64))
    }

    /// Dihedral of order 2n, n >= 1: r of order n and an involution s
    /// with (sr)^2 = id generating G. Order 2 counts as cyclic, the
    /// Klein four group as the degenerate dihedral with n = 2.
    pub fn is_dihedral(&self) -> bool {
        let size = self.order();
        if !(size % 2 == 0 && size >= 4) {
            return false;
        }
        let half = (size / 2) as u64;
        let rs = self.elements_of_exact_order(half);
        let ss = self.elements_of_exact_order(2);
        for &r in rs {
            for &s in ss {
                let sr = self.mul(s, r);
                if self.mul(sr, sr) != Self::IDENTITY {
                    continue;
                }
                if self.subgroup_closure(&[r, s]).len() == size {
                    return true;
                }
            }
        }
        false
    }

    /// Genus-zero recognizer: cyclic, dihedral, or one of A4, S4, A5
    /// identified by order plus element-order multiset.
    pub fn recognize_genus_zero(&self) -> bool {
        if self.is_cyclic() || self.is_dihedral() {
            return true;
        }
        let sig: Vec<(u64, usize)> = self
            .element_order_multiset()
            .into_iter()
            .collect();
        match self.order() {
            12 => sig == [(1, 1), (2, 3), (3, 8)],                       // A4
            24 => sig == [(1, 1), (2, 9), (3, 8), (4, 6)],               // S4
            60 => sig == [(1, 1), (2, 15), (3, 20), (5, 24)],            // A5
            _ => false,
        }
    }
}

/// The quotient of a group by a normal subgroup, as a table on coset
/// representatives. Only used for abelian quotients here.
pub(crate) struct CosetGroup {
    n: usize,
    mult: Vec<u32>,
    order: Vec<u64>,
}

impl CosetGroup {
    pub(crate) fn new(g: &FiniteGroup, normal: &[ElemId]) -> CosetGroup {
        let size = g.order();
        let mut coset_of = vec![u32::MAX; size];
        let mut reps: Vec<ElemId> = Vec::new();
        for a in 0..size as ElemId {
            if coset_of[a as usize] != u32::MAX {
                continue;
            }
            let k = reps.len() as u32;
            reps.push(a);
            for &x in normal {
                coset_of[g.mul(a, x) as usize] = k;
            }
        }
        let n = reps.len();
        let mut mult = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = coset_of[g.mul(reps[i], reps[j]) as usize];
            }
        }
        let mut order = vec![0u64; n];
        for i in 0..n {
            let mut k = 1u64;
            let mut x = i as u32;
            while x != 0 {
                x = mult[x as usize * n + i];
                k += 1;
            }
            order[i] = k;
        }
        CosetGroup { n, mult, order }
    }

    fn from_table(n: usize, mult: Vec<u32>) -> CosetGroup {
        let mut order = vec![0u64; n];
        for i in 0..n {
            let mut k = 1u64;
            let mut x = i as u32;
            while x != 0 {
                x = mult[x as usize * n + i];
                k += 1;
            }
            order[i] = k;
        }
        CosetGroup { n, mult, order }
    }

    fn cyclic_quotient(&self, gen: u32) -> CosetGroup {
        // quotient by the cyclic subgroup generated by `gen`
        let mut sub = vec![0u32];
        let mut x = gen;
        while x != 0 {
            sub.push(x);
            x = self.mult[x as usize * self.n + gen as usize];
        }
        let mut coset_of = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for a in 0..self.n as u32 {
            if coset_of[a as usize] != u32::MAX {
                continue;
            }
            let k = reps.len() as u32;
            reps.push(a);
            for &s in &sub {
                coset_of[self.mult[a as usize * self.n + s as usize] as usize] = k;
            }
        }
        let q = reps.len();
        let mut mult = vec![0u32; q * q];
        for i in 0..q {
            for j in 0..q {
                mult[i * q + j] =
                    coset_of[self.mult[reps[i] as usize * self.n + reps[j] as usize] as usize];
            }
        }
        CosetGroup::from_table(q, mult)
    }

    /// Ascending invariant-factor chain, by repeatedly peeling an
    /// element of maximal order (valid in abelian groups).
    pub(crate) fn invariant_factors(&self) -> Vec<u64> {
        let mut factors = Vec::new();
        let mut cur = CosetGroup {
            n: self.n,
            mult: self.mult.clone(),
            order: self.order.clone(),
        };
        while cur.n > 1 {
            let (best, &best_order) = cur
                .order
                .iter()
                .enumerate()
                .max_by_key(|&(i, &o)| (o, std::cmp::Reverse(i)))
                .unwrap();
            factors.push(best_order);
            cur = cur.cyclic_quotient(best as u32);
        }
        factors.reverse();
        factors
    }
}
