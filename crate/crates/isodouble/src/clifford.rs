//! Symmetric Clifford systems on `R^{2l}`.
//!
//! A Clifford system is a tuple of symmetric orthogonal matrices
//! `P_0, ..., P_m` satisfying `P_i P_j + P_j P_i = 2 δ_ij I`. Systems are
//! assembled from irreducible module generators: `m-1` mutually
//! anticommuting skew-symmetric complex structures `E_1, ..., E_{m-1}` on
//! `R^δ(m)`, built from quaternion and octonion left multiplications and a
//! period-8 doubling step. All generator entries are 0 or ±1, so every
//! product and trace below is exact in `f64`.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::report::VerificationReport;

/// Largest supported ambient dimension `2l`.
pub const MAX_AMBIENT_DIM: usize = 256;

/// Residual tolerance for a well-formed system.
pub const SYSTEM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliffordError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ambient dimension 2l = {dim} exceeds the supported envelope {max}")]
    DimensionEnvelope { dim: usize, max: usize },
    #[error("index criterion requires m divisible by 4; got m = {0}")]
    IndexInapplicable(u32),
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("malformed system document: {0}")]
    Document(String),
}

/// Dimension `δ(m)` of the irreducible module carrying `m-1` anticommuting
/// complex structures: (1, 2, 4, 4, 8, 8, 8, 8) for m = 1..8, then
/// `δ(m+8) = 16 δ(m)`.
pub fn delta_dim(m: u32) -> usize {
    assert!(m >= 1, "delta_dim needs m >= 1");
    const BASE: [usize; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    let mut d = BASE[((m - 1) % 8) as usize];
    for _ in 0..(m - 1) / 8 {
        d *= 16;
    }
    d
}

/// Fano-plane lines of the octonion basis `e_1..e_7`: within each line
/// `(a, b, c)` the products are cyclic, `e_a e_b = e_c`.
const FANO: [[usize; 3]; 7] = [
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 6],
    [4, 5, 7],
    [5, 6, 1],
    [6, 7, 2],
    [7, 1, 3],
];

/// Octonion multiplication table over the basis `e_0 = 1, e_1..e_7`:
/// `table[i][j] = (k, s)` means `e_i e_j = s · e_k`.
fn octonion_table() -> [[(usize, f64); 8]; 8] {
    let mut t = [[(0usize, 0.0f64); 8]; 8];
    for j in 0..8 {
        t[0][j] = (j, 1.0);
        t[j][0] = (j, 1.0);
    }
    for i in 1..8 {
        t[i][i] = (0, -1.0);
    }
    for line in FANO {
        for r in 0..3 {
            let (a, b, c) = (line[r], line[(r + 1) % 3], line[(r + 2) % 3]);
            t[a][b] = (c, 1.0);
            t[b][a] = (c, -1.0);
        }
    }
    t
}

/// Matrix of left multiplication by `e_unit` restricted to the span of
/// `basis` (which must be closed under that multiplication).
fn left_mult(table: &[[(usize, f64); 8]; 8], unit: usize, basis: &[usize]) -> DMatrix<f64> {
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (col, &bj) in basis.iter().enumerate() {
        let (k, s) = table[unit][bj];
        let row = basis
            .iter()
            .position(|&x| x == k)
            .expect("basis closed under left multiplication");
        m[(row, col)] = s;
    }
    m
}

/// Eight mutually anticommuting complex structures on `R^16`, the period-8
/// seed: `kron(diag(1,-1), L_{e_i})` for i = 1..7 plus `kron(J, I_8)`.
fn c8_octet() -> Vec<DMatrix<f64>> {
    let t = octonion_table();
    let all: Vec<usize> = (0..8).collect();
    let d2 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let j2 = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let mut g: Vec<DMatrix<f64>> = (1..8).map(|u| d2.kronecker(&left_mult(&t, u, &all))).collect();
    g.push(j2.kronecker(&DMatrix::identity(8, 8)));
    g
}

/// The `m-1` irreducible module generators on `R^δ(m)`, chirality not yet
/// normalized.
fn generators(m: u32) -> Vec<DMatrix<f64>> {
    let t = octonion_table();
    match m {
        1 => Vec::new(),
        2 => vec![left_mult(&t, 1, &[0, 1])],
        3 | 4 => {
            let quat = [0usize, 1, 2, 4];
            [1usize, 2, 4][..(m - 1) as usize]
                .iter()
                .map(|&u| left_mult(&t, u, &quat))
                .collect()
        }
        5..=8 => {
            let all: Vec<usize> = (0..8).collect();
            (1..m as usize).map(|u| left_mult(&t, u, &all)).collect()
        }
        _ => {
            let inner = generators(m - 8);
            let d = delta_dim(m - 8);
            let oct = c8_octet();
            let omega = oct
                .iter()
                .fold(DMatrix::identity(16, 16), |acc, g| acc * g);
            let id = DMatrix::identity(d, d);
            let mut out: Vec<DMatrix<f64>> =
                inner.iter().map(|a| omega.kronecker(a)).collect();
            out.extend(oct.iter().map(|gj| gj.kronecker(&id)));
            out
        }
    }
}

fn is_scaled_identity(m: &DMatrix<f64>, scale: f64) -> bool {
    let n = m.nrows();
    let mut diff = m.clone();
    for i in 0..n {
        diff[(i, i)] -= scale;
    }
    diff.norm() == 0.0
}

/// Build the irreducible generator family `E_1, ..., E_{m-1}` on `R^δ(m)`.
///
/// For `m ≡ 0 (mod 4)` the product `E_1 ⋯ E_{m-1}` acts as ±Id and selects
/// one of the two inequivalent module classes; `chirality_sign` picks the
/// class (the `+1` module is the one where the product is `+Id`). For other
/// `m` the product is not a multiple of the identity and the sign is
/// ignored.
pub fn build_irreducible(m: u32, chirality_sign: i32) -> Result<Vec<DMatrix<f64>>, CliffordError> {
    if m < 1 {
        return Err(CliffordError::InvalidInput("m must be >= 1".into()));
    }
    if chirality_sign != 1 && chirality_sign != -1 {
        return Err(CliffordError::InvalidInput(
            "chirality_sign must be +1 or -1".into(),
        ));
    }
    let mut gens = generators(m);
    if m % 4 == 0 {
        let prod = gens
            .iter()
            .fold(DMatrix::identity(gens[0].nrows(), gens[0].nrows()), |acc, g| acc * g);
        let sign = prod[(0, 0)];
        if !is_scaled_identity(&prod, sign) || sign.abs() != 1.0 {
            return Err(CliffordError::Inconsistency(
                "generator volume element is not plus or minus identity".into(),
            ));
        }
        if sign as i32 != chirality_sign {
            gens[0].neg_mut();
        }
    }
    Ok(gens)
}

fn block_diag(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

fn two_by_two(tl: &DMatrix<f64>, tr: &DMatrix<f64>, bl: &DMatrix<f64>, br: &DMatrix<f64>) -> DMatrix<f64> {
    let l = tl.nrows();
    let mut out = DMatrix::zeros(2 * l, 2 * l);
    out.view_mut((0, 0), (l, l)).copy_from(tl);
    out.view_mut((0, l), (l, l)).copy_from(tr);
    out.view_mut((l, 0), (l, l)).copy_from(bl);
    out.view_mut((l, l), (l, l)).copy_from(br);
    out
}

/// A symmetric Clifford system `P_0, ..., P_m` on `R^{2l}` with
/// `l = (a+b) δ(m)`: the `+1` eigenspace of `P_0` carries `a` copies of the
/// positive-chirality module and `b` copies of the negative one.
#[derive(Debug, Clone)]
pub struct CliffordSystem {
    pub m: u32,
    pub l: usize,
    pub a: u32,
    pub b: u32,
    /// `a - b`; equals the trace index for `m ≡ 0 (mod 4)`.
    pub q: i64,
    /// The `m + 1` matrices, each `2l × 2l`.
    pub matrices: Vec<DMatrix<f64>>,
}

/// Assemble the system from module data.
///
/// `P_0 = diag(I, -I)`, `P_1` is the swap, and `P_{i+1}` embeds the module
/// generator `E_i` off-diagonally with the sign that makes
/// `tr(P_0 ⋯ P_m) = 2 (a - b) δ(m)` for `m ≡ 0 (mod 4)`.
pub fn build_system(m: u32, a: u32, b: u32) -> Result<CliffordSystem, CliffordError> {
    if m < 1 {
        return Err(CliffordError::InvalidInput("m must be >= 1".into()));
    }
    if a + b < 1 {
        return Err(CliffordError::InvalidInput("need a + b >= 1".into()));
    }
    let delta = delta_dim(m);
    let l = (a + b) as usize * delta;
    if 2 * l > MAX_AMBIENT_DIM {
        return Err(CliffordError::DimensionEnvelope {
            dim: 2 * l,
            max: MAX_AMBIENT_DIM,
        });
    }
    let plus = build_irreducible(m, 1)?;
    let minus = build_irreducible(m, -1)?;
    let eye = DMatrix::identity(l, l);
    let zero = DMatrix::zeros(l, l);

    let mut matrices = Vec::with_capacity(m as usize + 1);
    matrices.push(two_by_two(&eye, &zero, &zero, &(-&eye)));
    matrices.push(two_by_two(&zero, &eye, &eye, &zero));
    for i in 0..(m as usize - 1) {
        let copies: Vec<&DMatrix<f64>> = (0..a).map(|_| &plus[i]).chain((0..b).map(|_| &minus[i])).collect();
        let bi = block_diag(&copies);
        matrices.push(two_by_two(&zero, &bi, &(-&bi), &zero));
    }

    Ok(CliffordSystem {
        m,
        l,
        a,
        b,
        q: a as i64 - b as i64,
        matrices,
    })
}

impl CliffordSystem {
    /// `P_0 P_1 ⋯ P_m`.
    pub fn product(&self) -> DMatrix<f64> {
        let n = 2 * self.l;
        self.matrices
            .iter()
            .fold(DMatrix::identity(n, n), |acc, p| acc * p)
    }

    /// Trace index `tr(P_0 ⋯ P_m) / (2 δ(m))`, defined for `m ≡ 0 (mod 4)`.
    ///
    /// The trace must sit within `1e-6` of an integer multiple of `2 δ(m)`;
    /// anything else indicates a corrupted system.
    pub fn index(&self) -> Result<i64, CliffordError> {
        if self.m % 4 != 0 {
            return Err(CliffordError::IndexInapplicable(self.m));
        }
        let t = self.product().trace();
        let scale = 2.0 * delta_dim(self.m) as f64;
        let qf = t / scale;
        if (qf - qf.round()).abs() > 1e-6 {
            return Err(CliffordError::Inconsistency(format!(
                "trace {t} is not an even multiple of delta within 1e-6"
            )));
        }
        Ok(qf.round() as i64)
    }

    /// Whether the induced degree-4 polynomial has a positive second
    /// multiplicity (`l - m - 1 > 0`).
    pub fn fkm_compatible(&self) -> bool {
        self.l as i64 - self.m as i64 - 1 > 0
    }

    /// Residual-based verification: symmetry, anticommutation, and
    /// orthogonality of every matrix, plus shape bookkeeping.
    pub fn verify(&self, tol: f64) -> VerificationReport {
        let mut rep = VerificationReport::new("clifford.verify_system", tol, 0);
        let n = 2 * self.l;
        rep.require(
            "matrix count is m + 1",
            self.matrices.len() == self.m as usize + 1,
        );
        rep.require(
            "matrix shape is 2l x 2l",
            self.matrices.iter().all(|p| p.nrows() == n && p.ncols() == n),
        );
        rep.require(
            "l = (a + b) delta(m)",
            self.l == (self.a + self.b) as usize * delta_dim(self.m),
        );
        if !rep.pass {
            return rep;
        }
        let eye = DMatrix::identity(n, n);
        let mut sym: f64 = 0.0;
        let mut orth: f64 = 0.0;
        for p in &self.matrices {
            sym = sym.max((p - p.transpose()).norm());
            orth = orth.max((p.transpose() * p - &eye).norm());
        }
        let mut cliff: f64 = 0.0;
        for i in 0..self.matrices.len() {
            for j in i..self.matrices.len() {
                let mut anti = &self.matrices[i] * &self.matrices[j]
                    + &self.matrices[j] * &self.matrices[i];
                if i == j {
                    anti -= 2.0 * &eye;
                }
                cliff = cliff.max(anti.norm());
            }
        }
        rep.samples = (self.matrices.len() * (self.matrices.len() + 1) / 2) as u64;
        rep.record("symmetry", sym);
        rep.record("anticommutation", cliff);
        rep.record("orthogonality", orth);
        rep
    }

    pub fn to_json(&self) -> String {
        let doc = SystemDoc {
            m: self.m,
            l: self.l,
            a: self.a,
            b: self.b,
            q: self.q,
            matrices: self
                .matrices
                .iter()
                .map(|p| {
                    (0..p.nrows())
                        .map(|r| p.row(r).iter().copied().collect())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("system serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, CliffordError> {
        let doc: SystemDoc =
            serde_json::from_str(s).map_err(|e| CliffordError::Document(e.to_string()))?;
        let n = 2 * doc.l;
        if doc.matrices.len() != doc.m as usize + 1 {
            return Err(CliffordError::Document(format!(
                "expected {} matrices, found {}",
                doc.m + 1,
                doc.matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(doc.matrices.len());
        for rows in &doc.matrices {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliffordError::Document(format!(
                    "matrix is not {n} x {n}"
                )));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            matrices.push(DMatrix::from_row_slice(n, n, &flat));
        }
        Ok(CliffordSystem {
            m: doc.m,
            l: doc.l,
            a: doc.a,
            b: doc.b,
            q: doc.q,
            matrices,
        })
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SystemDoc {
    m: u32,
    l: usize,
    a: u32,
    b: u32,
    q: i64,
    matrices: Vec<Vec<Vec<f64>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_dim_table_and_recursion() {
        let expect = [1, 2, 4, 4, 8, 8, 8, 8];
        for (i, &d) in expect.iter().enumerate() {
            assert_eq!(delta_dim(i as u32 + 1), d);
        }
        assert_eq!(delta_dim(9), 16);
        assert_eq!(delta_dim(12), 64);
        for m in 1..=16 {
            assert_eq!(delta_dim(m + 8), 16 * delta_dim(m));
        }
    }

    fn generator_residual(gens: &[DMatrix<f64>]) -> f64 {
        let d = gens[0].nrows();
        let eye = DMatrix::identity(d, d);
        let mut worst: f64 = 0.0;
        for g in gens {
            worst = worst.max((g + g.transpose()).norm());
        }
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let mut anti = &gens[i] * &gens[j] + &gens[j] * &gens[i];
                if i == j {
                    anti += 2.0 * &eye;
                }
                worst = worst.max(anti.norm());
            }
        }
        worst
    }

    #[test]
    fn irreducible_generators_satisfy_relations_exactly() {
        for m in 2..=12u32 {
            let gens = build_irreducible(m, 1).unwrap();
            assert_eq!(gens.len(), m as usize - 1);
            assert_eq!(gens[0].nrows(), delta_dim(m));
            assert_eq!(generator_residual(&gens), 0.0, "m = {m}");
        }
    }

    #[test]
    fn chirality_controls_volume_element_for_m_divisible_by_4() {
        for m in [4u32, 8, 12] {
            for sign in [1i32, -1] {
                let gens = build_irreducible(m, sign).unwrap();
                let d = gens[0].nrows();
                let prod = gens
                    .iter()
                    .fold(DMatrix::identity(d, d), |acc, g| acc * g);
                assert!(is_scaled_identity(&prod, sign as f64), "m = {m}, sign = {sign}");
            }
        }
    }

    #[test]
    fn m5_volume_element_is_not_scalar() {
        let gens = build_irreducible(5, 1).unwrap();
        let prod = gens
            .iter()
            .fold(DMatrix::identity(8, 8), |acc, g| acc * g);
        assert!(!is_scaled_identity(&prod, prod[(0, 0)]));
    }

    #[test]
    fn build_system_shapes_and_residuals() {
        let sys = build_system(4, 2, 0).unwrap();
        assert_eq!(sys.l, 8);
        assert_eq!(sys.q, 2);
        let rep = sys.verify(SYSTEM_TOL);
        assert!(rep.pass, "{:?}", rep.details);
        assert_eq!(rep.worst_residual, 0.0);
    }

    #[test]
    fn trace_identity_and_index() {
        let sys = build_system(4, 2, 0).unwrap();
        assert_eq!(sys.product().trace(), 16.0);
        assert_eq!(sys.index().unwrap(), 2);

        let balanced = build_system(4, 1, 1).unwrap();
        assert_eq!(balanced.index().unwrap(), 0);

        let swapped = build_system(4, 0, 2).unwrap();
        assert_eq!(swapped.product().trace(), -16.0);
        assert_eq!(swapped.index().unwrap(), -2);
    }

    #[test]
    fn trace_vanishes_when_m_not_divisible_by_4() {
        for (m, a, b) in [(1u32, 2u32, 1u32), (2, 1, 0), (3, 1, 0), (5, 1, 0), (6, 1, 0)] {
            let sys = build_system(m, a, b).unwrap();
            assert_eq!(sys.product().trace(), 0.0, "m = {m}");
            assert!(matches!(sys.index(), Err(CliffordError::IndexInapplicable(_))));
        }
    }

    #[test]
    fn index_parity_matches_module_count() {
        for (a, b) in [(1u32, 0u32), (1, 1), (2, 0), (2, 1), (3, 1)] {
            let sys = build_system(4, a, b).unwrap();
            let q = sys.index().unwrap();
            assert_eq!(q.rem_euclid(2), ((a + b) as i64).rem_euclid(2), "a={a} b={b}");
        }
    }

    #[test]
    fn fault_injection_fails_verification() {
        let mut sys = build_system(4, 2, 0).unwrap();
        sys.matrices[1][(0, 0)] += 1e-6;
        let rep = sys.verify(SYSTEM_TOL);
        assert!(!rep.pass);
        assert!(rep.worst_residual > 1e-7);
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(matches!(
            build_system(17, 1, 0),
            Err(CliffordError::DimensionEnvelope { .. })
        ));
        assert!(build_system(16, 1, 0).is_ok());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let sys = build_system(3, 1, 0).unwrap();
        let s = sys.to_json();
        let back = CliffordSystem::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        for (p, q) in sys.matrices.iter().zip(back.matrices.iter()) {
            assert_eq!(p, q);
        }
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(CliffordSystem::from_json("{").is_err());
        let sys = build_system(2, 1, 0).unwrap();
        let mut doc: serde_json::Value = serde_json::from_str(&sys.to_json()).unwrap();
        doc["matrices"][0] = serde_json::json!([[1.0]]);
        assert!(CliffordSystem::from_json(&doc.to_string()).is_err());
    }
}
