//! The degree-4 isoparametric polynomial of a Clifford system and the
//! geometry of its level sets on the unit sphere.
//!
//! For a system `P_0, ..., P_m` on `R^{2l}` the polynomial is
//! `F(z) = |z|^4 - 2 Σ_i ⟨P_i z, z⟩²`. Its restriction `f` to the sphere
//! takes values in `[-1, 1]`; regular levels are isoparametric
//! hypersurfaces with 4 distinct principal curvatures and multiplicity
//! pattern `(m_plus, m_minus)` where `m_plus = m`, `m_minus = l - m - 1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::CliffordSystem;
use crate::report::VerificationReport;
use crate::seeds::rng_for;

#[derive(Debug, Error)]
pub enum FkmError {
    #[error("family needs l - m - 1 > 0; got m = {m}, l = {l}")]
    Incompatible { m: u32, l: usize },
    #[error("level {0} does not cut a regular hypersurface; need |level| < 1")]
    SingularLevel(f64),
    #[error("level-point search did not converge for level {0}")]
    NoConvergence(f64),
    #[error("eigenvalue clusters are not separated cleanly; refusing to guess multiplicities")]
    ClusterInconclusive,
}

/// `F(z) = |z|^4 - 2 Σ ⟨P_i z, z⟩²` together with the multiplicity data of
/// its regular level sets.
#[derive(Debug, Clone)]
pub struct FkmPolynomial {
    system: CliffordSystem,
    pub m_plus: usize,
    pub m_minus: usize,
    /// Dimension of the ambient unit sphere, `2l - 1`.
    pub n: usize,
}

impl FkmPolynomial {
    pub fn new(system: CliffordSystem) -> Result<Self, FkmError> {
        let m = system.m as usize;
        let l = system.l;
        if l as i64 - m as i64 - 1 <= 0 {
            return Err(FkmError::Incompatible { m: system.m, l });
        }
        Ok(FkmPolynomial {
            m_plus: m,
            m_minus: l - m - 1,
            n: 2 * l - 1,
            system,
        })
    }

    pub fn system(&self) -> &CliffordSystem {
        &self.system
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.system.l
    }

    pub fn eval(&self, z: &DVector<f64>) -> f64 {
        let n2 = z.norm_squared();
        let quad: f64 = self
            .system
            .matrices
            .iter()
            .map(|p| {
                let u = z.dot(&(p * z));
                u * u
            })
            .sum();
        n2 * n2 - 2.0 * quad
    }

    pub fn gradient(&self, z: &DVector<f64>) -> DVector<f64> {
        let mut g = z * (4.0 * z.norm_squared());
        for p in &self.system.matrices {
            let pz = p * z;
            let u = z.dot(&pz);
            g -= pz * (8.0 * u);
        }
        g
    }

    pub fn hessian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let d = z.len();
        let mut h = DMatrix::identity(d, d) * (4.0 * z.norm_squared());
        h += (z * z.transpose()) * 8.0;
        for p in &self.system.matrices {
            let pz = p * z;
            let u = z.dot(&pz);
            h -= (&pz * pz.transpose()) * 16.0;
            h -= p * (8.0 * u);
        }
        h
    }

    pub fn laplacian(&self, z: &DVector<f64>) -> f64 {
        self.hessian(z).trace()
    }

    /// `f(z) = F(z / |z|)`.
    pub fn restricted(&self, z: &DVector<f64>) -> f64 {
        self.eval(&z.normalize())
    }

    /// Gradient of the spherical restriction at a unit vector: the ambient
    /// gradient projected by `I - z zᵀ`.
    pub fn spherical_gradient(&self, z: &DVector<f64>) -> DVector<f64> {
        let g = self.gradient(z);
        let radial = z.dot(&g);
        g - z * radial
    }

    /// Sampled verification of the defining differential identities:
    /// `|∇F|² = 16 |z|^6` (relative) and `ΔF = 8 (m_minus - m_plus) |z|²`
    /// (absolute, after dividing by `|z|²`).
    pub fn cartan_munzner_check(&self, samples: u64, seed: u64, tol: f64) -> VerificationReport {
        let mut rep = VerificationReport::new("fkm.cartan_munzner", tol, seed);
        let dim = self.ambient_dim();
        let lap_target = 8.0 * (self.m_minus as f64 - self.m_plus as f64);
        let mut worst_grad: f64 = 0.0;
        let mut worst_lap: f64 = 0.0;
        for i in 0..samples {
            let mut rng = rng_for(seed, i);
            let z = loop {
                let cand = DVector::from_fn(dim, |_, _| rng.sample(StandardNormal));
                if cand.norm() > 1e-3 {
                    break cand;
                }
            };
            let n2 = z.norm_squared();
            let g = self.gradient(&z);
            let grad_res = (g.norm_squared() / (16.0 * n2 * n2 * n2) - 1.0).abs();
            let lap_res = (self.laplacian(&z) / n2 - lap_target).abs();
            worst_grad = worst_grad.max(grad_res);
            worst_lap = worst_lap.max(lap_res);
        }
        rep.samples = samples;
        rep.note(format!(
            "m_plus = {}, m_minus = {}, laplacian target = {lap_target}",
            self.m_plus, self.m_minus
        ));
        rep.record("gradient norm identity (relative)", worst_grad);
        rep.record("laplacian identity", worst_lap);
        rep
    }

    /// Newton-project a random unit vector onto the level set `f = level`.
    pub fn sample_level_point(&self, level: f64, seed: u64) -> Result<LevelPoint, FkmError> {
        if !(level.abs() < 1.0) {
            return Err(FkmError::SingularLevel(level));
        }
        let dim = self.ambient_dim();
        for restart in 0..10u64 {
            let mut rng = rng_for(seed, restart);
            let mut z: DVector<f64> =
                DVector::from_fn(dim, |_, _| rng.sample(StandardNormal)).normalize();
            for _ in 0..100 {
                let err = self.eval(&z) - level;
                if err.abs() <= 1e-10 {
                    return Ok(LevelPoint {
                        level,
                        achieved: self.eval(&z),
                        coordinates: z.iter().copied().collect(),
                    });
                }
                let gs = self.spherical_gradient(&z);
                let n2 = gs.norm_squared();
                if n2 < 1e-14 {
                    break;
                }
                z = (z - gs * (err / n2)).normalize();
            }
        }
        Err(FkmError::NoConvergence(level))
    }

    /// Shape-operator spectrum of the level hypersurface through `point`,
    /// with the unit normal taken in the direction of increasing `f`.
    pub fn shape_spectrum(&self, point: &DVector<f64>) -> Result<SpectrumReport, FkmError> {
        let z = point.normalize();
        let f = self.eval(&z);
        if 1.0 - f * f <= 1e-12 {
            return Err(FkmError::SingularLevel(f));
        }
        let gs = self.spherical_gradient(&z);
        let gs_norm = gs.norm();
        if gs_norm < 1e-8 {
            return Err(FkmError::SingularLevel(f));
        }
        let xi = &gs / gs_norm;
        let basis = tangent_basis(&z, &xi);
        let k = basis.len();
        debug_assert_eq!(k, self.ambient_dim() - 2);

        let hess = self.hessian(&z);
        let mut shape = DMatrix::zeros(k, k);
        for i in 0..k {
            let hv = &hess * &basis[i];
            for j in i..k {
                let mut a = -(basis[j].dot(&hv)) / gs_norm;
                if i == j {
                    a += 4.0 * f / gs_norm;
                }
                shape[(i, j)] = a;
                shape[(j, i)] = a;
            }
        }
        let eig = SymmetricEigen::new(shape);
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let clusters = cluster_descending(&eigenvalues)?;
        let mean_curvature = eigenvalues.iter().sum();
        Ok(SpectrumReport {
            level: f,
            mean_curvature,
            clusters,
            eigenvalues,
        })
    }
}

/// Orthonormal basis of `{z, xi}^⊥`, built by projecting coordinate vectors.
fn tangent_basis(z: &DVector<f64>, xi: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = z.len();
    let mut basis = vec![z.clone(), xi.clone()];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        for _ in 0..2 {
            for u in &basis {
                let c = u.dot(&v);
                v -= u * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    basis.split_off(2)
}

/// Greedy gap clustering of a sorted eigenvalue list. Returns clusters in
/// descending eigenvalue order and refuses ambiguous separations.
fn cluster_descending(sorted: &[f64]) -> Result<Vec<CurvatureCluster>, FkmError> {
    if sorted.is_empty() {
        return Ok(Vec::new());
    }
    let spread = sorted[sorted.len() - 1] - sorted[0];
    let gap_tol = 1e-3 * spread.max(1.0);
    let mut groups: Vec<Vec<f64>> = vec![vec![sorted[0]]];
    for w in sorted.windows(2) {
        if w[1] - w[0] > gap_tol {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(w[1]);
    }
    if groups.len() > 1 {
        let max_intra = groups
            .iter()
            .map(|g| g[g.len() - 1] - g[0])
            .fold(0.0f64, f64::max);
        let min_inter = groups
            .windows(2)
            .map(|pair| pair[1][0] - pair[0][pair[0].len() - 1])
            .fold(f64::INFINITY, f64::min);
        if min_inter < 10.0 * max_intra {
            return Err(FkmError::ClusterInconclusive);
        }
    }
    Ok(groups
        .iter()
        .rev()
        .map(|g| CurvatureCluster {
            mean: g.iter().sum::<f64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect())
}

/// A point produced by [`FkmPolynomial::sample_level_point`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelPoint {
    pub level: f64,
    pub achieved: f64,
    pub coordinates: Vec<f64>,
}

impl LevelPoint {
    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coordinates)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureCluster {
    pub mean: f64,
    pub multiplicity: usize,
}

/// Principal-curvature data of one level hypersurface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Value of `f` at the sampled point.
    pub level: f64,
    /// Trace of the shape operator (sum of all eigenvalues).
    pub mean_curvature: f64,
    /// Curvature groups in descending eigenvalue order.
    pub clusters: Vec<CurvatureCluster>,
    /// Raw eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

impl SpectrumReport {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_system;

    fn poly_4_8() -> FkmPolynomial {
        FkmPolynomial::new(build_system(4, 2, 0).unwrap()).unwrap()
    }

    fn random_vec(dim: usize, seed: u64) -> DVector<f64> {
        let mut rng = rng_for(seed, 0);
        DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
    }

    #[test]
    fn multiplicity_bookkeeping() {
        let p = poly_4_8();
        assert_eq!(p.m_plus, 4);
        assert_eq!(p.m_minus, 3);
        assert_eq!(p.n, 15);
    }

    #[test]
    fn incompatible_systems_are_rejected() {
        for (m, a, b) in [(1u32, 1u32, 0u32), (2, 1, 0), (4, 1, 0)] {
            let sys = build_system(m, a, b).unwrap();
            assert!(!sys.fkm_compatible());
            assert!(matches!(
                FkmPolynomial::new(sys),
                Err(FkmError::Incompatible { .. })
            ));
        }
    }

    #[test]
    fn homogeneity_degree_4() {
        let p = poly_4_8();
        let z = random_vec(p.ambient_dim(), 1);
        let t = 1.7;
        let tz = &z * t;
        assert!((p.eval(&tz) - t.powi(4) * p.eval(&z)).abs() < 1e-9 * p.eval(&z).abs().max(1.0));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = poly_4_8();
        let z = random_vec(p.ambient_dim(), 2);
        let g = p.gradient(&z);
        let h = 1e-5;
        for k in 0..p.ambient_dim() {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[k] += h;
            zm[k] -= h;
            let fd = (p.eval(&zp) - p.eval(&zm)) / (2.0 * h);
            assert!((g[k] - fd).abs() < 1e-6, "component {k}: {} vs {}", g[k], fd);
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let p = poly_4_8();
        let z = random_vec(p.ambient_dim(), 3);
        let hess = p.hessian(&z);
        let h = 1e-5;
        for k in 0..6 {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[k] += h;
            zm[k] -= h;
            let fd = (p.gradient(&zp) - p.gradient(&zm)) / (2.0 * h);
            for r in 0..p.ambient_dim() {
                assert!((hess[(r, k)] - fd[r]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn defining_identities_hold() {
        let p = poly_4_8();
        let rep = p.cartan_munzner_check(50, 42, 1e-9);
        assert!(rep.pass, "{:?}", rep.details);
    }

    #[test]
    fn p0_eigenvector_sits_on_lower_focal_set() {
        let p = poly_4_8();
        let mut z = DVector::zeros(p.ambient_dim());
        z[0] = 1.0;
        assert_eq!(p.eval(&z), -1.0);
    }

    #[test]
    fn level_point_hits_target() {
        let p = poly_4_8();
        for level in [-0.9, -1.0 / 7.0, 0.0, 0.42, 0.99] {
            let pt = p.sample_level_point(level, 42).unwrap();
            assert!((pt.achieved - level).abs() <= 1e-10);
            assert!((pt.vector().norm() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            p.sample_level_point(1.0, 42),
            Err(FkmError::SingularLevel(_))
        ));
    }

    #[test]
    fn level_point_is_deterministic() {
        let p = poly_4_8();
        let a = p.sample_level_point(0.3, 7).unwrap();
        let b = p.sample_level_point(0.3, 7).unwrap();
        assert_eq!(a.coordinates, b.coordinates);
    }

    #[test]
    fn spectrum_at_midlevel() {
        let p = poly_4_8();
        let pt = p.sample_level_point(0.0, 42).unwrap();
        let spec = p.shape_spectrum(&pt.vector()).unwrap();
        assert_eq!(spec.multiplicities(), vec![4, 3, 4, 3]);
        assert!((spec.mean_curvature - 2.0).abs() < 1e-6);
        let sorted_ok = spec
            .eigenvalues
            .windows(2)
            .all(|w| w[0] <= w[1]);
        assert!(sorted_ok);
        assert!(spec.clusters.windows(2).all(|w| w[0].mean > w[1].mean));
    }

    #[test]
    fn spectrum_rejects_singular_levels() {
        let p = poly_4_8();
        let mut z = DVector::zeros(p.ambient_dim());
        z[0] = 1.0;
        assert!(matches!(
            p.shape_spectrum(&z),
            Err(FkmError::SingularLevel(_))
        ));
    }
}
