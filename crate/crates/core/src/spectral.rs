//! Spectrum of the normalized adjacency matrix `M = D^{-1/2} A D^{-1/2}`,
//! the expansion parameter σ and the degree ratio γ = δ/Δ.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Accuracy target for the computed eigenvalues.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub n: usize,
    pub m: usize,
    /// λ_1 ≥ … ≥ λ_n.
    pub eigenvalues: Vec<f64>,
    /// max over i ≥ 2 of |λ_i|.
    pub sigma: f64,
    pub gamma: f64,
    pub tolerance: f64,
    /// A disconnected graph has λ_2 = 1, so σ = 1 and every bound is vacuous.
    pub disconnected: bool,
}

impl SpectralProfile {
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(f64::NAN)
    }

    pub fn lambda_n(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }
}

fn require_no_isolated(g: &Graph) -> Result<()> {
    match g.first_isolated() {
        Some(v) => Err(Error::IsolatedNode(v)),
        None => Ok(()),
    }
}

/// Dense normalized adjacency matrix.
pub fn normalized_adjacency(g: &Graph) -> Result<Mat<f64>> {
    require_no_isolated(g)?;
    let n = g.n();
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut m = Mat::<f64>::zeros(n, n);
    for u in 0..n {
        for &v in g.neighbors(u) {
            m.write(u, v, inv_sqrt[u] * inv_sqrt[v]);
        }
    }
    Ok(m)
}

/// Full eigendecomposition (values only) of the normalized adjacency matrix.
pub fn normalized_spectrum(g: &Graph) -> Result<SpectralProfile> {
    let m = normalized_adjacency(g)?;
    let mut eigenvalues = m.selfadjoint_eigenvalues(Side::Lower);
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let sigma = eigenvalues.iter().skip(1).fold(0.0f64, |acc, &l| acc.max(l.abs()));
    Ok(SpectralProfile {
        n: g.n(),
        m: g.m(),
        eigenvalues,
        sigma,
        gamma: gamma(g)?,
        tolerance: SPECTRAL_TOLERANCE,
        disconnected: !g.is_connected(),
    })
}

pub fn sigma(g: &Graph) -> Result<f64> {
    Ok(normalized_spectrum(g)?.sigma)
}

/// δ/Δ; needs no spectrum.
pub fn gamma(g: &Graph) -> Result<f64> {
    require_no_isolated(g)?;
    Ok(g.min_degree() as f64 / g.max_degree() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_erdos_renyi, gen_random_regular, named, Named};

    /// Cyclic Jacobi eigenvalue iteration; an independent dense oracle.
    #[allow(clippy::needless_range_loop)]
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        ev
    }

    fn dense(g: &Graph) -> Vec<Vec<f64>> {
        let n = g.n();
        let mut a = vec![vec![0.0; n]; n];
        for (u, v) in g.edges() {
            let w = 1.0 / ((g.degree(u) * g.degree(v)) as f64).sqrt();
            a[u][v] = w;
            a[v][u] = w;
        }
        a
    }

    #[test]
    fn complete_graph_spectrum() {
        let p = normalized_spectrum(&named(Named::Complete, 4).unwrap()).unwrap();
        let expected = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
        for (a, b) in p.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((p.sigma - 1.0 / 3.0).abs() < 1e-12);
        let k10 = sigma(&named(Named::Complete, 10).unwrap()).unwrap();
        assert!((k10 - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn petersen_star_cycle() {
        let p = normalized_spectrum(&named(Named::Petersen, 10).unwrap()).unwrap();
        assert!((p.sigma - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(p.gamma, 1.0);
        assert!((sigma(&named(Named::Star, 5).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let c4 = normalized_spectrum(&named(Named::Cycle, 4).unwrap()).unwrap();
        for (a, b) in c4.eigenvalues.iter().zip([1.0, 0.0, 0.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((c4.sigma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_spectrum_formula() {
        for n in 3..20 {
            let p = normalized_spectrum(&named(Named::Cycle, n).unwrap()).unwrap();
            let mut expected: Vec<f64> = (0..n)
                .map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
                .collect();
            expected.sort_by(|x, y| y.total_cmp(x));
            for (a, b) in p.eigenvalues.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn isolated_node_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(normalized_spectrum(&g), Err(Error::IsolatedNode(2))));
        assert!(gamma(&g).is_err());
    }

    #[test]
    fn disconnected_graph_has_sigma_one() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let p = normalized_spectrum(&g).unwrap();
        assert!(p.disconnected);
        assert!((p.sigma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_jacobi_oracle_and_trace_is_zero() {
        for seed in 0..10 {
            let g = gen_erdos_renyi(18, 0.35, seed).unwrap();
            if g.first_isolated().is_some() {
                continue;
            }
            let p = normalized_spectrum(&g).unwrap();
            let oracle = jacobi_eigenvalues(dense(&g));
            for (a, b) in p.eigenvalues.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
            }
            let trace: f64 = p.eigenvalues.iter().sum();
            assert!(trace.abs() < 1e-8 * g.n() as f64);
            assert!((p.eigenvalues[0] - 1.0).abs() < 1e-9);
            assert!(p.eigenvalues.iter().all(|&l| (-1.0 - 1e-9..=1.0 + 1e-9).contains(&l)));
            assert!(p.gamma > 0.0 && p.gamma <= 1.0);
            if g.is_connected() {
                assert_eq!(g.is_bipartite(), (p.sigma - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn regular_graph_gamma_is_one() {
        let g = gen_random_regular(60, 5, 1).unwrap();
        assert_eq!(gamma(&g).unwrap(), 1.0);
    }
}
