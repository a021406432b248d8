use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{OpKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::exact_farey::Sign;
use crate::laguerre_space::{basis_change, Basis, SpaceParams};
use crate::par::{self, Exec};
use crate::rational::{binomial_rational, factorial, int};
use crate::special_functions::{
    bessel_j_scaled, gauss_laguerre_cached, laguerre_functions, ln_gamma, QuadratureRule,
};

/// Inner quadrature size of the kernel route for `N`.
pub const DEFAULT_KERNEL_NODES: usize = 200;

/// How [`assemble_n`] computes `(N ê_n, ê_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NMethod {
    /// From the closed-form images `N e_n = e^{-t} t^n / n!`; the integrands
    /// are polynomials against `t^p e^{-2t}` and the rule is exact.
    Exact,
    /// Double quadrature of the Bessel kernel; an independent cross-check.
    Kernel,
}

fn node_count(k: usize) -> usize {
    2 * k + 32
}

/// Per node `u_i` of the `t^p e^{-t}` rule: the factor `ŵ_i e^{-u_i/2} / 2`
/// and the Laguerre functions at `t_i = u_i / 2`. With these,
/// `∫ φ ψ t^p e^{-2t} dt = Σ_i c_i Φ_i Ψ_i` where `Φ = e^{-t/2} t^{p/2} φ`.
struct HalvedNodes {
    rule: Arc<QuadratureRule>,
    factor: Vec<f64>,
    functions: Vec<Vec<f64>>,
}

fn halved_nodes(exec: Exec, params: &SpaceParams) -> Result<HalvedNodes> {
    let rule = gauss_laguerre_cached(params.p, node_count(params.k))?;
    let k = params.k;
    let p = params.p;
    let factor = (0..rule.len())
        .map(|i| 0.5 * rule.scaled_weight(i) * (-0.5 * rule.nodes[i]).exp())
        .collect();
    let functions = par::map_slice(exec, &rule.nodes, |&u| laguerre_functions(k - 1, p, 0.5 * u));
    Ok(HalvedNodes { rule, factor, functions })
}

/// `(M ê_n, ê_m)` with `M φ = e^{-t} φ`.
pub fn assemble_m(params: &SpaceParams) -> Result<OperatorMatrix> {
    assemble_m_with(Exec::default(), params)
}

pub fn assemble_m_with(exec: Exec, params: &SpaceParams) -> Result<OperatorMatrix> {
    let nodes = halved_nodes(exec, params)?;
    let k = params.k;
    let mut m = DMatrix::<f64>::zeros(k, k);
    for (c, f) in nodes.factor.iter().zip(&nodes.functions) {
        for a in 0..k {
            let ca = c * f[a];
            for b in 0..=a {
                m[(a, b)] += ca * f[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            m[(b, a)] = m[(a, b)];
        }
    }
    Ok(OperatorMatrix {
        kind: OpKind::M,
        params: params.clone(),
        basis: Basis::EHat,
        entries: m,
        exact: None,
    })
}

/// `(N ê_n, ê_m)`.
pub fn assemble_n(params: &SpaceParams, method: NMethod) -> Result<OperatorMatrix> {
    assemble_n_with(Exec::default(), params, method)
}

pub fn assemble_n_with(exec: Exec, params: &SpaceParams, method: NMethod) -> Result<OperatorMatrix> {
    match method {
        NMethod::Exact => assemble_n_closed(exec, params),
        NMethod::Kernel => assemble_n_kernel_with(exec, params, DEFAULT_KERNEL_NODES),
    }
}

fn assemble_n_closed(exec: Exec, params: &SpaceParams) -> Result<OperatorMatrix> {
    let nodes = halved_nodes(exec, params)?;
    let k = params.k;
    let p = params.p;
    let ln_norms: Vec<f64> = (0..k).map(|n| 0.5 * params.ln_e_norm_sq(n)).collect();
    let ln_fact: Vec<f64> = (0..k).map(|n| ln_gamma(n as f64 + 1.0).expect("n >= 0")).collect();
    // image columns: e^{-t/2} t^{p/2} (t^n / n!) / ||e_n||
    let images = par::map_slice(exec, &nodes.rule.nodes, |&u| {
        let t = 0.5 * u;
        let lt = t.ln();
        (0..k)
            .map(|n| (-0.5 * t + (0.5 * p + n as f64) * lt - ln_fact[n] - ln_norms[n]).exp())
            .collect::<Vec<f64>>()
    });
    let mut m = DMatrix::<f64>::zeros(k, k);
    for ((c, f), g) in nodes.factor.iter().zip(&nodes.functions).zip(&images) {
        for n in 0..k {
            let cg = c * g[n];
            for row in 0..k {
                m[(row, n)] += cg * f[row];
            }
        }
    }
    Ok(OperatorMatrix {
        kind: OpKind::N,
        params: params.clone(),
        basis: Basis::EHat,
        entries: m,
        exact: None,
    })
}

/// Kernel route with `s_nodes` points for the inner integral.
///
/// `(N ê_n)(t) = ∫ k(s,t) ê_n(s) s^p e^{-s} ds` with
/// `k(s,t) = J_p(2√(st))/(st)^{p/2}` is tabulated at the nodes `t_j` of the
/// outer rule, then paired with `ê_m` as in [`assemble_m`].
pub fn assemble_n_kernel_with(exec: Exec, params: &SpaceParams, s_nodes: usize) -> Result<OperatorMatrix> {
    let k = params.k;
    let p = params.p;
    let outer = halved_nodes(exec, params)?;
    let inner = gauss_laguerre_cached(p, s_nodes)?;
    let two_p = 2f64.powf(p);
    // ŵ_i e^{-s/2} s^{p/2} F_n(s_i) turns Σ w_i ê_n(s_i) into a product of
    // moderate numbers
    let inner_rows = par::map_range(exec, inner.len(), |i| {
        let s = inner.nodes[i];
        let w = inner.scaled_weight(i) * (-0.5 * s + 0.5 * p * s.ln()).exp();
        let f = laguerre_functions(k - 1, p, s);
        let kern: Vec<f64> = outer
            .rule
            .nodes
            .iter()
            .map(|&u| two_p * bessel_j_scaled(p, 2.0 * (s * 0.5 * u).sqrt()))
            .collect();
        (f.into_iter().map(|v| w * v).collect::<Vec<f64>>(), kern)
    });
    let nt = outer.rule.len();
    // image[n][j] = (N ê_n)(t_j)
    let images = par::map_range(exec, k, |n| {
        let mut col = vec![0.0; nt];
        for (wf, kern) in &inner_rows {
            let a = wf[n];
            for (c, kv) in col.iter_mut().zip(kern) {
                *c += a * kv;
            }
        }
        col
    });
    let mut m = DMatrix::<f64>::zeros(k, k);
    for j in 0..nt {
        let t = 0.5 * outer.rule.nodes[j];
        // ½ ŵ_j e^{-t/2} t^{p/2}, the outer pairing for an e^{-t}-type image
        let c = 0.5 * outer.rule.scaled_weight(j) * (-0.5 * t + 0.5 * p * t.ln()).exp();
        let f = &outer.functions[j];
        for n in 0..k {
            let cg = c * images[n][j];
            for row in 0..k {
                m[(row, n)] += cg * f[row];
            }
        }
    }
    Ok(OperatorMatrix {
        kind: OpKind::N,
        params: params.clone(),
        basis: Basis::EHat,
        entries: m,
        exact: None,
    })
}

fn exact_p(params: &SpaceParams) -> Result<u64> {
    let two_q = params
        .two_q_integer()
        .ok_or_else(|| Error::InvalidParameter("exact Gram matrices need 2q in Z".into()))?;
    Ok(two_q - 1)
}

/// Exact `(M e_j, e_m)` for integer `p`: with `e_j = Σ_a c_{j,a} t^a`,
/// `(M e_j, e_m) = Σ c_{j,a} c_{m,b} (a+b+p)! / 2^{a+b+p+1}`.
pub fn m_gram_exact(params: &SpaceParams) -> Result<Vec<Vec<BigRational>>> {
    let p = exact_p(params)?;
    let k = params.k;
    let pr = int(p as i64);
    let coeff: Vec<Vec<BigRational>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|a| {
                    if a > j {
                        return BigRational::zero();
                    }
                    let v = binomial_rational(&(&pr + int(j as i64)), (j - a) as u64)
                        / BigRational::from_integer(factorial(a as u64));
                    if a % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    let moment = |s: usize| {
        let e = s as u64 + p;
        BigRational::new(factorial(e), BigInt::from(2).pow((e + 1) as u32))
    };
    let h: Vec<BigRational> = (0..2 * k).map(moment).collect();
    let mut out = vec![vec![BigRational::zero(); k]; k];
    for j in 0..k {
        for m in 0..=j {
            let mut acc = BigRational::zero();
            for a in 0..=j {
                if coeff[j][a].is_zero() {
                    continue;
                }
                for b in 0..=m {
                    acc += &coeff[j][a] * &coeff[m][b] * &h[a + b];
                }
            }
            out[j][m] = acc.clone();
            out[m][j] = acc;
        }
    }
    Ok(out)
}

/// Exact `(N e_n, e_m)` for integer `p`, composed from `N e_n = M f_n` and
/// `f_n = Σ_j a_{n,j} e_j`.
pub fn n_gram_exact(params: &SpaceParams) -> Result<Vec<Vec<BigRational>>> {
    let m = m_gram_exact(params)?;
    let k = params.k;
    let a = basis_change(params, k - 1);
    let a = a.exact.expect("integer p gives exact entries");
    let mut out = vec![vec![BigRational::zero(); k]; k];
    for n in 0..k {
        for col in 0..k {
            let mut acc = BigRational::zero();
            for j in 0..=n {
                acc += &a[n][j] * &m[j][col];
            }
            out[n][col] = acc;
        }
    }
    Ok(out)
}

/// `e`-coefficients of `ℓ_n^± = e_n ± f_n` (length `params.k`).
pub fn ell_vector_exact(params: &SpaceParams, n: usize, sign: Sign) -> Result<Vec<BigRational>> {
    if n >= params.k {
        return Err(Error::InvalidParameter(format!("n = {n} outside truncation K = {}", params.k)));
    }
    let a = basis_change(params, n)
        .exact
        .ok_or_else(|| Error::InvalidParameter("exact ℓ vectors need rational q".into()))?;
    let mut v = vec![BigRational::zero(); params.k];
    for (j, aj) in a[n].iter().enumerate() {
        v[j] = match sign {
            Sign::Plus => aj.clone(),
            Sign::Minus => -aj.clone(),
        };
    }
    v[n] += BigRational::one();
    Ok(v)
}

fn q_matrix(params: &SpaceParams, sign: Sign) -> OperatorMatrix {
    let k = params.k;
    let a = basis_change(params, k - 1);
    let s = sign.as_f64();
    let ln_norm: Vec<f64> = (0..k).map(|n| 0.5 * params.ln_e_norm_sq(n)).collect();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            // e-basis entry: δ_ij ± a_{j,i}; rescaled to ê coordinates
            let e = if i == j { 1.0 } else { 0.0 } + s * a.entries[j][i];
            m[(i, j)] = e * (ln_norm[i] - ln_norm[j]).exp();
        }
    }
    let exact = a.exact.map(|ax| {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut v = if j >= i {
                            match sign {
                                Sign::Plus => ax[j][i].clone(),
                                Sign::Minus => -ax[j][i].clone(),
                            }
                        } else {
                            BigRational::zero()
                        };
                        if i == j {
                            v += BigRational::one();
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    });
    let kind = match sign {
        Sign::Plus => OpKind::QPlus,
        Sign::Minus => OpKind::QMinus,
    };
    OperatorMatrix { kind, params: params.clone(), basis: Basis::EHat, entries: m, exact }
}

/// `P^± = M ± N`, `Q^± = I ± M^{-1} N` and `J = N M^{-1}`.
///
/// `Q^±` never inverts `M`: `M^{-1} N e_n = f_n`, so in the `e`-basis it is
/// `I ± Aᵀ` exactly, and `exact` holds those rational entries. The float
/// entries are given in the `ê` basis. `J` goes through a Cholesky solve with
/// the truncated `M` and is meant as a diagnostic only.
pub fn assemble_derived(m: &OperatorMatrix, n: &OperatorMatrix, kind: OpKind) -> Result<OperatorMatrix> {
    if m.kind != OpKind::M || n.kind != OpKind::N || m.dim() != n.dim() {
        return Err(Error::InvalidParameter("expects assembled M and N of equal size".into()));
    }
    let params = m.params.clone();
    let entries = match kind {
        OpKind::PPlus => &m.entries + &n.entries,
        OpKind::PMinus => &m.entries - &n.entries,
        OpKind::QPlus => return Ok(q_matrix(&params, Sign::Plus)),
        OpKind::QMinus => return Ok(q_matrix(&params, Sign::Minus)),
        OpKind::J => {
            let chol = m.entries.clone().cholesky().ok_or_else(|| {
                let eig = m.entries.clone().symmetric_eigenvalues();
                Error::IllConditioned(eig.max() / eig.min().abs().max(f64::MIN_POSITIVE))
            })?;
            // J M = N, M symmetric: J = (M^{-1} Nᵀ)ᵀ
            chol.solve(&n.entries.transpose()).transpose()
        }
        OpKind::M | OpKind::N => {
            return Err(Error::InvalidParameter(format!("{kind} is not a derived operator")))
        }
    };
    Ok(OperatorMatrix { kind, params, basis: Basis::EHat, entries, exact: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, to_f64};

    fn s(q: f64, k: usize) -> SpaceParams {
        SpaceParams::new(q, k).unwrap()
    }

    #[test]
    fn m_examples() {
        let m = assemble_m(&s(1.0, 8)).unwrap();
        assert!((m.entries[(0, 0)] - 0.25).abs() < 1e-15);
        assert!((m.entries[(1, 1)] - 3.0 / 16.0).abs() < 1e-15);
        assert!((m.entries[(0, 1)] - m.entries[(1, 0)]).abs() < 1e-14);
        for q in [0.5, 1.0, 2.0] {
            let m = assemble_m(&s(q, 40)).unwrap();
            for n in 0..40 {
                let p = 2.0 * q - 1.0;
                let ln = -(2.0 * n as f64 + 2.0 * q) * std::f64::consts::LN_2
                    + ln_gamma(2.0 * n as f64 + p + 1.0).unwrap()
                    - ln_gamma(n as f64 + 1.0).unwrap()
                    - ln_gamma(n as f64 + p + 1.0).unwrap();
                assert!((m.entries[(n, n)] - ln.exp()).abs() < 1e-14, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn n_examples() {
        let n = assemble_n(&s(1.0, 8), NMethod::Exact).unwrap();
        assert!((n.entries[(0, 0)] - 0.25).abs() < 1e-15);
        assert!((n.entries[(1, 1)] - 1.0 / 16.0).abs() < 1e-15);
        assert!(n.asymmetry() < 1e-14);
    }

    #[test]
    fn exact_gram_matches_float() {
        let params = SpaceParams::exact(rat(1, 1), 10).unwrap();
        let g = n_gram_exact(&params).unwrap();
        assert_eq!(g[0][0], rat(1, 4));
        let n = assemble_n(&params, NMethod::Exact).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let scale = (0.5 * (params.ln_e_norm_sq(i) + params.ln_e_norm_sq(j))).exp();
                assert!((to_f64(&g[i][j]) / scale - n.entries[(j, i)]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn kernel_route_agrees() {
        for q in [0.5, 1.0] {
            let p = s(q, 20);
            let a = assemble_n(&p, NMethod::Exact).unwrap();
            let b = assemble_n(&p, NMethod::Kernel).unwrap();
            let d = (&a.entries - &b.entries).abs().max();
            assert!(d < 1e-8, "q={q} diff={d}");
        }
    }

    #[test]
    fn executors_agree() {
        let p = s(1.0, 16);
        let a = assemble_n_kernel_with(Exec::Sequential, &p, 80).unwrap();
        let b = assemble_n_kernel_with(Exec::Parallel, &p, 80).unwrap();
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn q_on_ell_vectors() {
        let params = SpaceParams::exact(rat(1, 1), 12).unwrap();
        let m = assemble_m(&params).unwrap();
        let n = assemble_n(&params, NMethod::Exact).unwrap();
        let qp = assemble_derived(&m, &n, OpKind::QPlus).unwrap();
        let qm = assemble_derived(&m, &n, OpKind::QMinus).unwrap();
        let l1 = ell_vector_exact(&params, 1, Sign::Plus).unwrap();
        let two = rat(2, 1);
        let image = qp.apply_exact(&l1).unwrap();
        assert!(image.iter().zip(&l1).all(|(a, b)| *a == &two * b));
        assert!(qm.apply_exact(&l1).unwrap().iter().all(|v| v.is_zero()));
    }
}
