//! Fuchsian signatures, exact Riemann–Hurwitz arithmetic, and the
//! candidate (order, signature) enumeration for a target genus.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};
use thiserror::Error;

/// Exact rational number used throughout the enumeration.
pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("signature ({0}) is not hyperbolic")]
    NotHyperbolic(String),
    #[error("period {0} is less than 2")]
    BadPeriod(u64),
}

/// A Fuchsian signature `(g0; m1,...,mr)`: orbit genus plus ascending
/// periods. The empty period list is written `(g0; -)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    orbit_genus: u32,
    periods: Vec<u64>,
}

impl Signature {
    pub fn new(orbit_genus: u32, mut periods: Vec<u64>) -> Result<Signature, SignatureError> {
        for &m in &periods {
            if m < 2 {
                return Err(SignatureError::BadPeriod(m));
            }
        }
        periods.sort_unstable();
        Ok(Signature {
            orbit_genus,
            periods,
        })
    }

    pub fn orbit_genus(&self) -> u32 {
        self.orbit_genus
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn period_count(&self) -> usize {
        self.periods.len()
    }

    /// The hyperbolic area term `2·g0 − 2 + Σ(1 − 1/m_i)`, exact.
    pub fn area_term(&self) -> Rational {
        let mut s = Rational::from_integer(2 * self.orbit_genus as i64 - 2);
        for &m in &self.periods {
            s += Rational::one() - Rational::new(1, m as i64);
        }
        s
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.area_term().is_positive()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.periods.is_empty() {
            write!(f, "({}; -)", self.orbit_genus)
        } else {
            let ps: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
            write!(f, "({}; {})", self.orbit_genus, ps.join(","))
        }
    }
}

/// An (order, signature) pair satisfying Riemann–Hurwitz for `target_genus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePair {
    pub order: u64,
    pub signature: Signature,
    pub target_genus: u64,
}

/// Genus of the acted-on surface: `1 + n(g0 − 1) + (n/2)·Σ(1 − 1/m_i)`.
pub fn rh_genus(sig: &Signature, n: u64) -> Rational {
    let n = Rational::from_integer(n as i64);
    Rational::one() + n / Rational::from_integer(2) * sig.area_term()
}

/// Solve Riemann–Hurwitz for the group order: `n = 2(g−1) / area`.
/// Returns the order only when it is a positive integer.
pub fn order_for(sig: &Signature, g: u64) -> Result<Option<u64>, SignatureError> {
    let area = sig.area_term();
    if !area.is_positive() {
        return Err(SignatureError::NotHyperbolic(sig.to_string()));
    }
    let n = Rational::from_integer(2 * (g as i64 - 1)) / area;
    if n.is_integer() && n.is_positive() {
        Ok(Some(*n.numer() as u64))
    } else {
        Ok(None)
    }
}

/// The nine signatures admissible for orders `|G| ≥ 24(g−1)`, with the
/// coefficient c in `|G| = c·(g−1)`.
pub fn large_order_signatures() -> Vec<(Signature, Rational)> {
    let rows: [(&[u64], i64, i64); 9] = [
        (&[2, 3, 7], 84, 1),
        (&[2, 3, 8], 48, 1),
        (&[2, 4, 5], 40, 1),
        (&[2, 3, 9], 36, 1),
        (&[2, 3, 10], 30, 1),
        (&[2, 3, 11], 132, 5),
        (&[2, 3, 12], 24, 1),
        (&[2, 4, 6], 24, 1),
        (&[3, 3, 4], 24, 1),
    ];
    rows.iter()
        .map(|&(ps, num, den)| {
            (
                Signature::new(0, ps.to_vec()).unwrap(),
                Rational::new(num, den),
            )
        })
        .collect()
}

/// All candidate (order, signature) pairs for target genus `g`.
///
/// Bounds applied during enumeration:
/// - 2 ≤ |G| ≤ 84(g−1);
/// - g0 ≤ (g−1)/|G| + 1;
/// - g0 > 0 or r ≥ 5 forces |G| ≤ 4(g−1); r = 4 forces |G| ≤ 12(g−1);
/// - |G| ≥ 24(g−1) admits only the nine large-order signatures;
/// - r ≤ 4(g−1)/|G| + 4 − 4g0 (each period term is at least 1/2);
/// - all periods divide |G|.
///
/// Output is sorted by ascending order, then orbit genus, then period
/// count, then lexicographic periods.
pub fn candidate_pairs(g: u64) -> Result<Vec<CandidatePair>, SignatureError> {
    if g < 2 {
        return Err(SignatureError::GenusTooSmall(g as i64));
    }
    let gm1 = g - 1;
    let large: Vec<Signature> = large_order_signatures()
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let mut out = Vec::new();
    for n in 2..=84 * gm1 {
        let target = Rational::from_integer(g as i64);
        let divisors: Vec<u64> = (2..=n).filter(|d| n % d == 0).collect();
        let g0_max = (gm1 / n + 1) as u32;
        for g0 in 0..=g0_max {
            if g0 > 0 && n > 4 * gm1 {
                continue;
            }
            let r_budget = {
                // r ≤ 4(g−1)/n + 4 − 4g0, floor
                let v = 4 * gm1 as i64 / n as i64 + 4 - 4 * g0 as i64;
                if v < 0 {
                    continue;
                }
                v as usize
            };
            for r in 0..=r_budget {
                if g0 == 0 && r <= 2 {
                    continue; // not hyperbolic
                }
                if r >= 5 && n > 4 * gm1 {
                    continue;
                }
                if r == 4 && n > 12 * gm1 {
                    continue;
                }
                if r == 0 {
                    let sig = Signature::new(g0, vec![]).unwrap();
                    if sig.is_hyperbolic() && rh_genus(&sig, n) == target {
                        out.push(CandidatePair {
                            order: n,
                            signature: sig,
                            target_genus: g,
                        });
                    }
                    continue;
                }
                // ascending period tuples over divisors of n
                let mut periods = Vec::with_capacity(r);
                extend_periods(
                    n, g0, r, &divisors, 0, target, &mut periods, &mut out, g, gm1, &large,
                );
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_periods(
    n: u64,
    g0: u32,
    r: usize,
    divisors: &[u64],
    start: usize,
    target: Rational,
    periods: &mut Vec<u64>,
    out: &mut Vec<CandidatePair>,
    g: u64,
    gm1: u64,
    large: &[Signature],
) {
    if periods.len() == r {
        let sig = Signature::new(g0, periods.clone()).unwrap();
        if !sig.is_hyperbolic() || rh_genus(&sig, n) != target {
            return;
        }
        if n >= 24 * gm1 && !large.contains(&sig) {
            return;
        }
        out.push(CandidatePair {
            order: n,
            signature: sig,
            target_genus: g,
        });
        return;
    }
    // prune: even if every remaining period were n, the genus cannot
    // fall below what the partial sum already forces; and each further
    // period adds at least 1/2 to the area term.
    let remaining = r - periods.len();
    let mut partial = Rational::from_integer(2 * g0 as i64 - 2);
    for &m in periods.iter() {
        partial += Rational::one() - Rational::new(1, m as i64);
    }
    let n_rat = Rational::from_integer(n as i64);
    let two = Rational::from_integer(2);
    let min_genus =
        Rational::one() + n_rat / two * (partial + Rational::new(remaining as i64, 2));
    if min_genus > target {
        return;
    }
    let max_extra = Rational::from_integer(remaining as i64)
        * (Rational::one() - Rational::new(1, n as i64));
    let max_genus = Rational::one() + n_rat / two * (partial + max_extra);
    if max_genus < target {
        return;
    }
    for (i, &m) in divisors.iter().enumerate().skip(start) {
        periods.push(m);
        extend_periods(n, g0, r, divisors, i, target, periods, out, g, gm1, large);
        periods.pop();
    }
}
