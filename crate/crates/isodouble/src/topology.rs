//! Cohomology rank profiles, characteristic-class invariants, and the
//! homogeneous classification table for isoparametric families.
//!
//! The rank profiles follow the additive structure forced by the two
//! focal manifolds: each focal manifold has one rank in every degree
//! congruent to `0` or to the opposite multiplicity modulo
//! `m_plus + m_minus`, the hypersurface stacks both profiles between its
//! two end classes, and the double of a one-sided region interleaves the
//! shifted profile of the far focal manifold with the profile of the
//! near one.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::clifford::delta_dim;
use crate::doubling::IsoparametricFamily;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientRing {
    Z,
    Z2,
}

impl std::fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoefficientRing::Z => write!(f, "Z"),
            CoefficientRing::Z2 => write!(f, "Z_2"),
        }
    }
}

/// Coefficients in which the rank profiles below are literal: integral
/// when both multiplicities exceed 1, mod 2 otherwise. The profile itself
/// is the same either way.
pub fn default_ring(m_plus: u32, m_minus: u32) -> CoefficientRing {
    if m_plus.min(m_minus) > 1 {
        CoefficientRing::Z
    } else {
        CoefficientRing::Z2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Plus => write!(f, "plus"),
            Side::Minus => write!(f, "minus"),
        }
    }
}

/// Ranks of the cohomology groups of a space, index = degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub ranks: Vec<u64>,
}

impl RankProfile {
    pub fn dim(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, degree: usize) -> u64 {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    fn reduced_rank(&self, degree: usize) -> u64 {
        if degree == 0 {
            self.rank(0).saturating_sub(1)
        } else {
            self.rank(degree)
        }
    }

    pub fn is_poincare_dual(&self) -> bool {
        let r = &self.ranks;
        (0..r.len()).all(|i| r[i] == r[r.len() - 1 - i])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    pub fn nonzero_degrees(&self) -> Vec<usize> {
        self.ranks
            .iter()
            .enumerate()
            .filter_map(|(q, &r)| (r > 0).then_some(q))
            .collect()
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.iter().sum()
    }
}

/// Rank profiles of the two focal manifolds and the hypersurface.
#[derive(Debug, Clone, Serialize)]
pub struct CohomologyProfiles {
    pub g: u32,
    pub m_plus: u32,
    pub m_minus: u32,
    pub ring: CoefficientRing,
    pub focal_plus: RankProfile,
    pub focal_minus: RankProfile,
    pub hypersurface: RankProfile,
}

fn family(g: u32, m_plus: u32, m_minus: u32) -> Result<IsoparametricFamily, TopologyError> {
    IsoparametricFamily::new(g, m_plus, m_minus)
        .map_err(|e| TopologyError::InvalidInput(e.to_string()))
}

/// Profile of the focal manifold of codimension `m_self + 1`: one rank in
/// every degree congruent to `0` or `m_other` modulo `m_plus + m_minus`,
/// up to its dimension `n - 1 - m_self`.
fn focal_profile(n: usize, m_self: u32, m_other: u32) -> RankProfile {
    let dim = n - 1 - m_self as usize;
    let period = (m_self + m_other) as usize;
    let other = m_other as usize % period;
    let ranks = (0..=dim)
        .map(|q| {
            let res = q % period;
            if res == 0 || res == other {
                1
            } else {
                0
            }
        })
        .collect();
    RankProfile { ranks }
}

/// Rank profiles of both focal manifolds and of the hypersurface itself,
/// which carries one class at each end plus the two focal profiles in
/// the intermediate degrees.
pub fn munzner_cohomology(
    g: u32,
    m_plus: u32,
    m_minus: u32,
    ring: Option<CoefficientRing>,
) -> Result<CohomologyProfiles, TopologyError> {
    let fam = family(g, m_plus, m_minus)?;
    let n = fam.n;
    let focal_plus = focal_profile(n, m_plus, m_minus);
    let focal_minus = focal_profile(n, m_minus, m_plus);
    let mut ranks = vec![0u64; n];
    ranks[0] = 1;
    ranks[n - 1] = 1;
    for q in 1..n - 1 {
        ranks[q] = focal_plus.rank(q) + focal_minus.rank(q);
    }
    Ok(CohomologyProfiles {
        g,
        m_plus,
        m_minus,
        ring: ring.unwrap_or_else(|| default_ring(m_plus, m_minus)),
        focal_plus,
        focal_minus,
        hypersurface: RankProfile { ranks },
    })
}

/// Rank profile of the closed `n`-manifold obtained by doubling the
/// region bounded by a hypersurface on the given focal side.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleCohomology {
    pub g: u32,
    pub m_plus: u32,
    pub m_minus: u32,
    pub side: Side,
    pub ring: CoefficientRing,
    pub n: usize,
    pub profile: RankProfile,
}

pub fn double_cohomology(
    g: u32,
    m_plus: u32,
    m_minus: u32,
    side: Side,
    ring: Option<CoefficientRing>,
) -> Result<DoubleCohomology, TopologyError> {
    let profiles = munzner_cohomology(g, m_plus, m_minus, ring)?;
    let n = family(g, m_plus, m_minus)?.n;
    let (near, far) = match side {
        Side::Plus => (&profiles.focal_plus, &profiles.focal_minus),
        Side::Minus => (&profiles.focal_minus, &profiles.focal_plus),
    };
    let mut ranks = vec![0u64; n + 1];
    ranks[0] = 1;
    ranks[n] = 1;
    for q in 1..n {
        ranks[q] = far.reduced_rank(q - 1) + near.reduced_rank(q);
    }
    Ok(DoubleCohomology {
        g,
        m_plus,
        m_minus,
        side,
        ring: profiles.ring,
        n,
        profile: RankProfile { ranks },
    })
}

/// Cell dimensions of the minimal CW structure on the far focal manifold
/// of a four-curvature family: `[0, m_plus, m_plus + m_minus,
/// 2 m_plus + m_minus]`.
pub fn cell_structure(g: u32, m_plus: u32, m_minus: u32) -> Result<[usize; 4], TopologyError> {
    if g != 4 {
        return Err(TopologyError::Inapplicable(format!(
            "cell structure is tabulated only for g = 4, got g = {g}"
        )));
    }
    family(g, m_plus, m_minus)?;
    let (p, q) = (m_plus as usize, m_minus as usize);
    Ok([0, p, p + q, 2 * p + q])
}

/// Factor of the top Pontrjagin class of the degree-`m` focal bundle
/// against the stable generator: `q * beta(m) * (m/2 - 1)!` where
/// `beta = 1` for `m` divisible by 8 and `2` otherwise. Relative to the
/// tautological generator the coefficient carries an extra sign `-1`.
pub fn pontrjagin_top(m: u32, q: i64) -> Result<BigInt, TopologyError> {
    if m % 4 != 0 || m == 0 {
        return Err(TopologyError::Inapplicable(format!(
            "top Pontrjagin coefficient needs m divisible by 4, got {m}"
        )));
    }
    let beta: u32 = if m % 8 == 0 { 1 } else { 2 };
    let mut fact = BigInt::one();
    for k in 2..=(m / 2 - 1) as u64 {
        fact *= k;
    }
    Ok(BigInt::from(q) * beta * fact)
}

/// Residue invariant mod `p = m/2 + 1` of the index-`q` family, as an
/// unordered pair `{res, p - res}` (one element when they coincide).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WuResidue {
    pub p: u64,
    pub residues: Vec<u64>,
}

pub fn wu_residue(m: u32, q: i64) -> Result<WuResidue, TopologyError> {
    if m % 4 != 0 || m == 0 {
        return Err(TopologyError::Inapplicable(format!(
            "residue invariant needs m divisible by 4, got {m}"
        )));
    }
    let p = (m / 2 + 1) as u64;
    if !trial_prime(p) {
        return Err(TopologyError::Inapplicable(format!(
            "p = m/2+1 = {p} not prime"
        )));
    }
    let sign: i128 = if (m / 4) % 2 == 0 { 1 } else { -1 };
    let raw: i128 = if m % 8 == 0 {
        sign * q as i128 * ((p as i128 - 1) / 2)
    } else {
        -sign * q as i128
    };
    let r1 = raw.rem_euclid(p as i128) as u64;
    let r2 = (p - r1) % p;
    let mut residues = vec![r1.min(r2), r1.max(r2)];
    residues.dedup();
    Ok(WuResidue { p, residues })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Distinct,
    Inconclusive,
    Inapplicable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Distinct => write!(f, "distinct"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
            Verdict::Inapplicable => write!(f, "inapplicable"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinguishReport {
    pub m: u32,
    pub l: u64,
    pub q1: i64,
    pub q2: i64,
    pub p: u64,
    /// Whether each index has the parity `l / delta(m)` forced by an
    /// actual family of that dimension.
    pub parity_ok: [bool; 2],
    pub verdict: Verdict,
    pub reason: Option<String>,
}

/// Decide whether the two indices give homotopy-inequivalent doubles in
/// ambient dimension `2l`: they do whenever `q1` and `-q1` both differ
/// from `q2` mod `p = m/2 + 1`, `p` an odd prime.
pub fn distinguish(m: u32, l: u64, q1: i64, q2: i64) -> Result<DistinguishReport, TopologyError> {
    if m % 4 != 0 || m == 0 {
        return Err(TopologyError::InvalidInput(format!(
            "index comparison needs m divisible by 4, got {m}"
        )));
    }
    let delta = delta_dim(m) as u64;
    if l % delta != 0 || l == 0 {
        return Err(TopologyError::InvalidInput(format!(
            "l = {l} is not a positive multiple of delta({m}) = {delta}"
        )));
    }
    let expected_parity = (l / delta) % 2;
    let parity_ok = [
        q1.rem_euclid(2) as u64 == expected_parity,
        q2.rem_euclid(2) as u64 == expected_parity,
    ];
    let p = (m / 2 + 1) as u64;
    if p == 2 || !trial_prime(p) {
        return Ok(DistinguishReport {
            m,
            l,
            q1,
            q2,
            p,
            parity_ok,
            verdict: Verdict::Inapplicable,
            reason: Some("p = m/2+1 not prime".into()),
        });
    }
    let a = q1.rem_euclid(p as i64) as u64;
    let b = q2.rem_euclid(p as i64) as u64;
    let verdict = if a != b && a != (p - b) % p {
        Verdict::Distinct
    } else {
        Verdict::Inconclusive
    };
    Ok(DistinguishReport {
        m,
        l,
        q1,
        q2,
        p,
        parity_ok,
        verdict,
        reason: None,
    })
}

fn trial_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Wilson primality predicate `(p-1)! = -1 mod p`, exact for every
/// `p <= 10^4`.
pub fn wilson_check(p: u64) -> Result<bool, TopologyError> {
    if !(2..=10_000).contains(&p) {
        return Err(TopologyError::InvalidInput(format!(
            "wilson check covers 2 <= p <= 10000, got {p}"
        )));
    }
    let mut fact = 1u64;
    for k in 2..p {
        fact = ((fact as u128 * k as u128) % p as u128) as u64;
    }
    Ok(fact == p - 1)
}

/// One row of the homogeneous classification: the presentation `U/K` and
/// the isotropy groups of the principal and the two singular orbits.
#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousRow {
    pub g: u32,
    pub m_plus: String,
    pub m_minus: String,
    pub group: String,
    pub subgroup: String,
    pub k0: String,
    pub k_plus: String,
    pub k_minus: String,
}

impl HomogeneousRow {
    fn fixed(
        g: u32,
        mults: (&str, &str),
        pair: (&str, &str),
        k0: &str,
        k_plus: &str,
        k_minus: &str,
    ) -> Self {
        HomogeneousRow {
            g,
            m_plus: mults.0.into(),
            m_minus: mults.1.into(),
            group: pair.0.into(),
            subgroup: pair.1.into(),
            k0: k0.into(),
            k_plus: k_plus.into(),
            k_minus: k_minus.into(),
        }
    }
}

/// The classification table with symbolic parameters, in its canonical
/// order. `g_filter` restricts to one curvature count.
pub fn homogeneous_table(g_filter: Option<u32>) -> Vec<HomogeneousRow> {
    let rows = vec![
        HomogeneousRow::fixed(
            1,
            ("n-1", "n-1"),
            ("S^1×SO(n+1)", "SO(n)"),
            "SO(n-1)",
            "SO(n)",
            "SO(n)",
        ),
        HomogeneousRow::fixed(
            2,
            ("p", "q"),
            ("SO(p+2)×SO(q+2)", "SO(p+1)×SO(q+1)"),
            "SO(p)×SO(q)",
            "SO(p+1)×SO(q)",
            "SO(p)×SO(q+1)",
        ),
        HomogeneousRow::fixed(
            3,
            ("1", "1"),
            ("SU(3)", "SO(3)"),
            "Z_2+Z_2",
            "S(O(2)×O(1))",
            "S(O(1)×O(2))",
        ),
        HomogeneousRow::fixed(
            3,
            ("2", "2"),
            ("SU(3)×SU(3)", "SU(3)"),
            "T^2",
            "S(U(2)×U(1))",
            "S(U(1)×U(2))",
        ),
        HomogeneousRow::fixed(
            3,
            ("4", "4"),
            ("SU(6)", "Sp(3)"),
            "Sp(1)^3",
            "Sp(2)×Sp(1)",
            "Sp(2)×Sp(1)",
        ),
        HomogeneousRow::fixed(
            3,
            ("8", "8"),
            ("E_6", "F_4"),
            "Spin(8)",
            "Spin(9)",
            "Spin(9)",
        ),
        HomogeneousRow::fixed(
            4,
            ("2", "2"),
            ("SO(5)×SO(5)", "SO(5)"),
            "T^2",
            "SO(2)×SO(3)",
            "U(2)",
        ),
        HomogeneousRow::fixed(
            4,
            ("4", "5"),
            ("SO(10)", "U(5)"),
            "SU(2)^2×U(1)",
            "Sp(2)×U(1)",
            "SU(2)×U(3)",
        ),
        HomogeneousRow::fixed(
            4,
            ("6", "9"),
            ("E_6", "T·Spin(10)"),
            "U(1)·Spin(6)",
            "U(1)·Spin(7)",
            "S^1·SU(5)",
        ),
        HomogeneousRow::fixed(
            4,
            ("1", "m-2"),
            ("SO(m+2)", "SO(m)×SO(2)"),
            "SO(m-2)×Z_2",
            "SO(m-2)×SO(2)",
            "O(m-1)",
        ),
        HomogeneousRow::fixed(
            4,
            ("2", "2m-3"),
            ("SU(m+2)", "S(U(m)×U(2))"),
            "S(U(m-2)×T^2)",
            "S(U(m-2)×U(2))",
            "S(U(m-1)×T^2)",
        ),
        HomogeneousRow::fixed(
            4,
            ("4", "4m-5"),
            ("Sp(m+2)", "Sp(m)×Sp(2)"),
            "Sp(m-2)×Sp(1)^2",
            "Sp(m-2)×Sp(2)",
            "Sp(m-1)×Sp(1)^2",
        ),
        HomogeneousRow::fixed(6, ("1", "1"), ("G_2", "SO(4)"), "Z_2+Z_2", "O(2)", "O(2)"),
        HomogeneousRow::fixed(
            6,
            ("2", "2"),
            ("G_2×G_2", "G_2"),
            "T^2",
            "U(2)",
            "U(2)",
        ),
    ];
    match g_filter {
        Some(g) => rows.into_iter().filter(|r| r.g == g).collect(),
        None => rows,
    }
}

fn subst(template: &str, var: char, value: i64) -> String {
    // rewrite occurrences like "m+2", "m-2", "m" inside group names
    let mut out = String::new();
    let chars: Vec<char> = template.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let prev_alpha = i > 0 && chars[i - 1].is_ascii_alphanumeric();
        let next = chars.get(i + 1).copied();
        if c == var && !prev_alpha && !next.is_some_and(|n| n.is_ascii_alphanumeric()) {
            let mut val = value;
            let mut consumed = 0;
            if let (Some(op), Some(d)) = (next, chars.get(i + 2)) {
                if (op == '+' || op == '-') && d.is_ascii_digit() {
                    let mut j = i + 2;
                    let mut num = 0i64;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        num = num * 10 + (chars[j] as i64 - '0' as i64);
                        j += 1;
                    }
                    val = if op == '+' { value + num } else { value - num };
                    consumed = j - i - 1;
                }
            }
            out.push_str(&val.to_string());
            i += 1 + consumed;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn resolve(row: &HomogeneousRow, assignments: &[(char, i64)]) -> HomogeneousRow {
    let apply = |s: &str| {
        let mut out = s.to_string();
        for &(var, value) in assignments {
            out = subst(&out, var, value);
        }
        out
    };
    HomogeneousRow {
        g: row.g,
        m_plus: apply(&row.m_plus),
        m_minus: apply(&row.m_minus),
        group: apply(&row.group),
        subgroup: apply(&row.subgroup),
        k0: apply(&row.k0),
        k_plus: apply(&row.k_plus),
        k_minus: apply(&row.k_minus),
    }
}

/// Find the classification row matching `(g, m_plus, m_minus)` exactly,
/// substituting parameters in the first row of the table that fits.
pub fn homogeneous_lookup(g: u32, m_plus: u32, m_minus: u32) -> Option<HomogeneousRow> {
    let rows = homogeneous_table(None);
    let mp = m_plus as i64;
    let mm = m_minus as i64;
    for (idx, row) in rows.iter().enumerate() {
        let assignments: Option<Vec<(char, i64)>> = match idx {
            0 => (g == 1 && m_plus == m_minus && m_plus >= 1).then(|| vec![('n', mp + 1)]),
            1 => (g == 2 && m_plus >= 1 && m_minus >= 1).then(|| vec![('p', mp), ('q', mm)]),
            9 => (g == 4 && m_plus == 1 && m_minus >= 1).then(|| vec![('m', mm + 2)]),
            10 => (g == 4 && m_plus == 2 && m_minus >= 3 && m_minus % 2 == 1)
                .then(|| vec![('m', (mm + 3) / 2)]),
            11 => (g == 4 && m_plus == 4 && m_minus >= 3 && m_minus % 4 == 3)
                .then(|| vec![('m', (mm + 5) / 4)]),
            _ => (row.g == g
                && row.m_plus == m_plus.to_string()
                && row.m_minus == m_minus.to_string())
            .then(Vec::new),
        };
        if let Some(assignments) = assignments {
            let mut resolved = resolve(row, &assignments);
            resolved.m_plus = m_plus.to_string();
            resolved.m_minus = m_minus.to_string();
            return Some(resolved);
        }
    }
    None
}

/// All multiplicity pairs `(m, l - m - 1)` of four-curvature families
/// built from irreducible module sums, for half-dimensions `l` up to
/// `l_max`.
pub fn fkm_multiplicity_sweep(l_max: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    let mut m = 1u32;
    while delta_dim(m) <= l_max {
        let delta = delta_dim(m);
        let mut l = delta;
        while l <= l_max {
            if l >= m as usize + 2 {
                out.push((m, l));
            }
            l += delta;
        }
        m += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn focal_profiles_of_the_benchmark_family() {
        let c = munzner_cohomology(4, 4, 3, None).unwrap();
        assert_eq!(c.focal_plus.dim(), 10);
        assert_eq!(c.focal_minus.dim(), 11);
        assert_eq!(c.focal_plus.nonzero_degrees(), vec![0, 3, 7, 10]);
        assert_eq!(c.focal_minus.nonzero_degrees(), vec![0, 4, 7, 11]);
        assert!(c.focal_plus.is_poincare_dual());
        assert!(c.focal_minus.is_poincare_dual());
        assert_eq!(c.ring, CoefficientRing::Z);
        assert!(c.hypersurface.is_poincare_dual());
        assert_eq!(c.hypersurface.rank(7), 2);
        assert_eq!(c.hypersurface.total_rank(), 8);
    }

    #[test]
    fn doubles_of_the_benchmark_family() {
        let d = double_cohomology(4, 4, 3, Side::Plus, None).unwrap();
        assert_eq!(
            d.profile.ranks,
            vec![1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1]
        );
        assert!(d.profile.is_poincare_dual());
        assert_eq!(d.profile.euler_characteristic(), 0);
        let d = double_cohomology(4, 4, 3, Side::Minus, None).unwrap();
        assert!(d.profile.is_poincare_dual());
        assert_eq!(d.profile.euler_characteristic(), 0);
    }

    #[test]
    fn small_doubles_are_spheres() {
        let d = double_cohomology(1, 1, 1, Side::Plus, None).unwrap();
        assert_eq!(d.profile.ranks, vec![1, 0, 1]);
        let d = double_cohomology(1, 3, 3, Side::Minus, None).unwrap();
        assert_eq!(d.profile.ranks, vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn torus_family_doubles_are_products() {
        let c = munzner_cohomology(2, 2, 5, None).unwrap();
        assert_eq!(c.focal_plus.nonzero_degrees(), vec![0, 5]);
        assert_eq!(c.focal_minus.nonzero_degrees(), vec![0, 2]);
        let d = double_cohomology(2, 2, 5, Side::Plus, None).unwrap();
        // sphere bundle over the near focal sphere
        assert_eq!(d.n, 8);
        assert_eq!(d.profile.ranks, vec![1, 0, 0, 1, 0, 1, 0, 0, 1]);
        assert!(d.profile.is_poincare_dual());
        assert_eq!(d.profile.euler_characteristic(), 0);
    }

    #[test]
    fn odd_dimensional_doubles_have_zero_euler_characteristic() {
        for (g, mp, mm) in [(4u32, 4u32, 3u32), (2, 1, 2), (4, 1, 2), (2, 3, 4)] {
            let fam = IsoparametricFamily::new(g, mp, mm).unwrap();
            if fam.n % 2 == 0 {
                continue;
            }
            for side in [Side::Plus, Side::Minus] {
                let d = double_cohomology(g, mp, mm, side, None).unwrap();
                assert_eq!(d.profile.euler_characteristic(), 0, "({g},{mp},{mm})");
            }
        }
    }

    #[test]
    fn cells_match_far_focal_degrees() {
        assert_eq!(cell_structure(4, 4, 3).unwrap(), [0, 4, 7, 11]);
        assert!(matches!(
            cell_structure(3, 2, 2),
            Err(TopologyError::Inapplicable(_))
        ));
        for (m, l) in fkm_multiplicity_sweep(32) {
            let m_minus = (l - m as usize - 1) as u32;
            let cells = cell_structure(4, m, m_minus).unwrap();
            let c = munzner_cohomology(4, m, m_minus, None).unwrap();
            assert_eq!(
                c.focal_minus.nonzero_degrees(),
                cells.to_vec(),
                "(m, l) = ({m}, {l})"
            );
        }
    }

    #[test]
    fn duality_across_the_sweep() {
        for (m, l) in fkm_multiplicity_sweep(32) {
            let m_minus = (l - m as usize - 1) as u32;
            for side in [Side::Plus, Side::Minus] {
                let d = double_cohomology(4, m, m_minus, side, None).unwrap();
                assert!(d.profile.is_poincare_dual(), "(m, l) = ({m}, {l}) {side}");
            }
        }
    }

    #[test]
    fn pontrjagin_values() {
        assert_eq!(pontrjagin_top(4, 1).unwrap(), BigInt::from(2));
        assert_eq!(pontrjagin_top(8, 1).unwrap(), BigInt::from(6));
        assert_eq!(pontrjagin_top(12, 1).unwrap(), BigInt::from(240));
        assert_eq!(pontrjagin_top(8, -3).unwrap(), BigInt::from(-18));
        assert!(pontrjagin_top(6, 1).is_err());
    }

    #[test]
    fn wu_residues() {
        assert_eq!(
            wu_residue(4, 2).unwrap(),
            WuResidue {
                p: 3,
                residues: vec![1, 2]
            }
        );
        assert_eq!(
            wu_residue(8, 1).unwrap(),
            WuResidue {
                p: 5,
                residues: vec![2, 3]
            }
        );
        assert_eq!(
            wu_residue(4, 0).unwrap(),
            WuResidue {
                p: 3,
                residues: vec![0]
            }
        );
        assert!(matches!(
            wu_residue(16, 1),
            Err(TopologyError::Inapplicable(_))
        ));
    }

    #[test]
    fn wu_residue_agrees_with_the_characteristic_number_route() {
        // independent derivation: q1 = (-1)^{r+1} r p_r mod p with
        // r = (p-1)/2 and p_r = -(top Pontrjagin coefficient)
        for m in [4u32, 8, 12] {
            let p = (m / 2 + 1) as i64;
            let r = (p - 1) / 2;
            for q in -4..=4i64 {
                let top = pontrjagin_top(m, q).unwrap();
                let p_r = -top;
                let sign = if (r + 1) % 2 == 0 { 1 } else { -1 };
                let mut lhs = (BigInt::from(sign * r) * p_r) % p;
                if lhs.is_negative() {
                    lhs += p;
                }
                let expect: u64 = lhs.try_into().unwrap();
                let got = wu_residue(m, q).unwrap();
                assert!(
                    got.residues.contains(&expect),
                    "m = {m}, q = {q}: {expect} not in {:?}",
                    got.residues
                );
            }
        }
    }

    #[test]
    fn distinguish_benchmark_cases() {
        let r = distinguish(4, 8, 0, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Distinct);
        assert_eq!(r.p, 3);
        assert!(r.parity_ok[0] && r.parity_ok[1]);
        let r = distinguish(16, 128, 0, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert_eq!(r.reason.as_deref(), Some("p = m/2+1 not prime"));
        let r = distinguish(12, 64, 1, 3).unwrap();
        assert_ne!(r.verdict, Verdict::Inapplicable);
        assert!(distinguish(6, 8, 0, 1).is_err());
        assert!(distinguish(4, 6, 0, 1).is_err());
    }

    #[test]
    fn distinguish_is_symmetric_and_sign_invariant() {
        for m in [4u32, 8, 12] {
            let l = delta_dim(m) as u64 * 2;
            for q1 in -4..=4i64 {
                for q2 in -4..=4i64 {
                    let base = distinguish(m, l, q1, q2).unwrap().verdict;
                    assert_eq!(base, distinguish(m, l, q2, q1).unwrap().verdict);
                    assert_eq!(base, distinguish(m, l, -q1, q2).unwrap().verdict);
                    assert_eq!(base, distinguish(m, l, q1, -q2).unwrap().verdict);
                }
            }
        }
    }

    #[test]
    fn wilson_matches_trial_division() {
        for p in 2..200u64 {
            assert_eq!(wilson_check(p).unwrap(), trial_prime(p), "{p}");
        }
        assert!(wilson_check(1).is_err());
        assert!(wilson_check(10_001).is_err());
    }

    #[test]
    fn half_factorial_residue_example() {
        // (p-1)!/2 mod p for p = 7: 6!/2 = 360 = 51*7 + 3
        let p = 7u64;
        let mut fact = 1u64;
        for k in 2..p {
            fact = fact * k % (2 * p);
        }
        assert_eq!(fact / 2 % p, 3);
    }

    #[test]
    fn table_has_fourteen_rows_and_filters() {
        assert_eq!(homogeneous_table(None).len(), 14);
        assert_eq!(homogeneous_table(Some(3)).len(), 4);
        assert_eq!(homogeneous_table(Some(4)).len(), 6);
        assert_eq!(homogeneous_table(Some(6)).len(), 2);
    }

    #[test]
    fn lookup_resolves_parameters() {
        let row = homogeneous_lookup(4, 1, 7).unwrap();
        assert_eq!(row.group, "SO(11)");
        assert_eq!(row.subgroup, "SO(9)×SO(2)");
        assert_eq!(row.k_minus, "O(8)");
        let row = homogeneous_lookup(4, 2, 3).unwrap();
        assert_eq!(row.group, "SU(5)");
        assert_eq!(row.k0, "S(U(1)×T^2)");
        let row = homogeneous_lookup(1, 4, 4).unwrap();
        assert_eq!(row.group, "S^1×SO(6)");
        assert_eq!(row.k0, "SO(4)");
        let row = homogeneous_lookup(2, 3, 6).unwrap();
        assert_eq!(row.group, "SO(5)×SO(8)");
        let row = homogeneous_lookup(3, 8, 8).unwrap();
        assert_eq!(row.group, "E_6");
        let row = homogeneous_lookup(4, 4, 3).unwrap();
        assert_eq!(row.group, "Sp(4)");
        assert_eq!(row.k0, "Sp(0)×Sp(1)^2");
        assert!(homogeneous_lookup(3, 3, 3).is_none());
        assert!(homogeneous_lookup(4, 4, 4).is_none());
        assert!(homogeneous_lookup(6, 2, 2).is_some());
    }

    #[test]
    fn duality_across_homogeneous_instances() {
        let instances: [(u32, u32, u32); 14] = [
            (1, 1, 1),
            (2, 1, 1),
            (3, 1, 1),
            (3, 2, 2),
            (3, 4, 4),
            (3, 8, 8),
            (4, 2, 2),
            (4, 4, 5),
            (4, 6, 9),
            (4, 1, 1),
            (4, 2, 3),
            (4, 4, 3),
            (6, 1, 1),
            (6, 2, 2),
        ];
        for (g, mp, mm) in instances {
            let c = munzner_cohomology(g, mp, mm, None).unwrap();
            assert!(c.hypersurface.is_poincare_dual(), "({g},{mp},{mm})");
            for side in [Side::Plus, Side::Minus] {
                let d = double_cohomology(g, mp, mm, side, None).unwrap();
                assert!(d.profile.is_poincare_dual(), "({g},{mp},{mm}) {side}");
            }
        }
    }

    #[test]
    fn sweep_contents() {
        let sweep = fkm_multiplicity_sweep(32);
        assert!(sweep.contains(&(4, 8)));
        assert!(sweep.contains(&(1, 3)));
        assert!(sweep.contains(&(10, 32)));
        assert!(!sweep.iter().any(|&(m, l)| l > 32 || (l as i64 - m as i64) < 2));
        assert!(!sweep.contains(&(4, 4)));
        for &(m, l) in &sweep {
            assert_eq!(l % delta_dim(m), 0);
        }
    }

    #[test]
    fn ring_override_keeps_ranks() {
        let a = munzner_cohomology(4, 1, 2, None).unwrap();
        assert_eq!(a.ring, CoefficientRing::Z2);
        let b = munzner_cohomology(4, 1, 2, Some(CoefficientRing::Z)).unwrap();
        assert_eq!(b.ring, CoefficientRing::Z);
        assert_eq!(a.hypersurface, b.hypersurface);
        assert_eq!(a.focal_plus, b.focal_plus);
    }
}
