//! Collision frequency nu(v, I), the integral kernels k1, k2, k = k2 - k1,
//! the weighted kernel k_w, and quadrature application of the compact part K.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::DistributionGrid;
use crate::model::{weight, ModelParams, PhasePoint};
use crate::quadrature::{
    cached_laguerre_prob, cached_legendre, gauss_laguerre, gauss_legendre_on, QuadratureSpec, Rule,
};
use crate::special::bessel_i0_scaled;

/// A pair of kinetic states at which a kernel is evaluated.
#[derive(Debug, Clone, Copy)]
pub struct KernelPoint {
    pub p: PhasePoint,
    pub p_star: PhasePoint,
}

impl KernelPoint {
    pub fn new(p: PhasePoint, p_star: PhasePoint) -> Self {
        KernelPoint { p, p_star }
    }

    /// The swapped point ((v_*, I_*), (v, I)).
    pub fn swapped(&self) -> KernelPoint {
        KernelPoint {
            p: self.p_star,
            p_star: self.p,
        }
    }
}

/// x^{-q} with fast paths for small integer and half-integer q > 0.
#[inline]
fn pow_neg(x: f64, q: f64) -> f64 {
    let twice = 2.0 * q;
    let k = twice.round();
    if (twice - k).abs() < 1e-12 && (1.0..=16.0).contains(&k) {
        let k = k as u32;
        let half = if k % 2 == 1 { x.sqrt() } else { 1.0 };
        let mut p = 1.0;
        for _ in 0..(k / 2) {
            p *= x;
        }
        1.0 / (p * half)
    } else {
        x.powf(-q)
    }
}

/// Density of s = |v - v_*| for v_* standard normal and |v| = p.
#[inline]
fn relative_speed_density(s: f64, p: f64) -> f64 {
    const SQRT_TAU: f64 = 2.5066282746310002; // sqrt(2 pi)
    if p > 1e-8 {
        let a = (-(s - p) * (s - p) / 2.0).exp() - (-(s + p) * (s + p) / 2.0).exp();
        s / (p * SQRT_TAU) * a
    } else {
        (2.0 / std::f64::consts::PI).sqrt() * s * s * (-s * s / 2.0).exp()
    }
}

/// Collision frequency nu(v, I) = kappa * int Phi^{1-alpha/2} M_* dv_* dI_*
/// by radial x internal-energy quadrature; the post-collision energy
/// integrals are folded into kappa in closed Beta form.
pub fn nu(p: &PhasePoint, params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    if !(p.i >= 0.0) || !p.i.is_finite() {
        return Err(Error::Domain(format!("nu needs I >= 0, got {}", p.i)));
    }
    let speed = p.speed();
    let irule = cached_laguerre_prob(quad.nu_i_nodes, params.delta / 2.0 - 1.0);
    let expo = 1.0 - 0.5 * params.alpha;
    let base_leg = cached_legendre((quad.nu_s_nodes / 2).max(6));

    // two panels meeting at s = p (the peak of the radial density)
    let lo = (speed - quad.s_pad).max(0.0);
    let hi = speed + quad.s_pad;
    let panels: [(f64, f64); 2] = if speed > 1e-8 {
        [(lo, speed), (speed, hi)]
    } else {
        [(0.0, 0.5 * hi), (0.5 * hi, hi)]
    };

    let mut total = 0.0;
    for (&istar, &wi) in irule.nodes.iter().zip(&irule.weights) {
        let base = p.i + istar;
        let mut inner = 0.0;
        for &(a, b) in &panels {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (&x, &w) in base_leg.nodes.iter().zip(&base_leg.weights) {
                let s = mid + half * x;
                inner += w * half * relative_speed_density(s, speed) * (0.25 * s * s + base).powf(expo);
            }
        }
        total += wi * inner;
    }
    Ok(params.rate_prefactor() * total)
}

/// Pointwise kernel k1(v, v_*, I, I_*) = kappa Phi^{1-alpha/2} sqrt(M M_*);
/// the post-collision integrals reduce exactly in Beta form.
pub fn k1(kp: &KernelPoint, params: &ModelParams) -> f64 {
    let u = [
        kp.p.v[0] - kp.p_star.v[0],
        kp.p.v[1] - kp.p_star.v[1],
        kp.p.v[2] - kp.p_star.v[2],
    ];
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let phi = 0.25 * u2 + kp.p.i + kp.p_star.i;
    let v2: f64 = kp.p.v.iter().map(|x| x * x).sum();
    let vs2: f64 = kp.p_star.v.iter().map(|x| x * x).sum();
    let sqrt_mm = params.maxwellian_norm()
        * (kp.p.i * kp.p_star.i).powf(0.25 * params.delta - 0.5)
        * (-0.25 * (v2 + vs2) - 0.5 * (kp.p.i + kp.p_star.i)).exp();
    params.rate_prefactor() * phi.powf(1.0 - 0.5 * params.alpha) * sqrt_mm
}

/// Pointwise kernel k2(v, v_*, I, I_*) by deterministic quadrature over the
/// transverse plane and the post-collision energies, the longitudinal shift
/// pinned by the collision deltas. Requires |v - v_*| >= r_min.
pub fn k2(kp: &KernelPoint, params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    let u = [
        kp.p.v[0] - kp.p_star.v[0],
        kp.p.v[1] - kp.p_star.v[1],
        kp.p.v[2] - kp.p_star.v[2],
    ];
    let u_norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    if u_norm < quad.r_min {
        return Err(Error::SingularInput(format!(
            "k2 needs |v - v_*| >= r_min = {}, got {u_norm}",
            quad.r_min
        )));
    }
    let vc = [
        0.5 * (kp.p.v[0] + kp.p_star.v[0]),
        0.5 * (kp.p.v[1] + kp.p_star.v[1]),
        0.5 * (kp.p.v[2] + kp.p_star.v[2]),
    ];
    let v_par = (vc[0] * u[0] + vc[1] * u[1] + vc[2] * u[2]) / u_norm;
    let vc2 = vc[0] * vc[0] + vc[1] * vc[1] + vc[2] * vc[2];
    let w_perp = (vc2 - v_par * v_par).max(0.0).sqrt();
    Ok(k2_radial(
        u_norm,
        v_par,
        w_perp,
        kp.p.i,
        kp.p_star.i,
        params,
        quad,
    ))
}

/// k2 in collision-frame coordinates: relative speed |u|, center-of-mass
/// velocity components along (v_par) and perpendicular (w_perp) to u, and
/// the internal energies.
pub fn k2_radial(
    u_norm: f64,
    v_par: f64,
    w_perp: f64,
    i: f64,
    i_star: f64,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> f64 {
    let delta = params.delta;
    let q = delta + 0.5 * (params.alpha - 1.0);
    let erule = cached_laguerre_prob(quad.k2_energy_nodes, 0.5 * delta - 1.0);
    // int y^{d/2-1} e^{-y/2} g(y) dy = 2^{d/2} Gamma(d/2) E_prob[g(2x)]
    let energy_mass = 2f64.powf(0.5 * delta) * crate::special::gamma_fn(0.5 * delta).unwrap();

    let rho_lo = (w_perp - quad.s_pad).max(0.0);
    let rho_hi = w_perp + quad.s_pad;
    let rho_half = 0.5 * (rho_hi - rho_lo);
    let rho_mid = 0.5 * (rho_lo + rho_hi);
    let rrule = cached_legendre(quad.k2_rho_nodes);

    let mut t_sum = 0.0;
    for (&xa, &wa) in erule.nodes.iter().zip(&erule.weights) {
        let i_prime = 2.0 * xa;
        for (&xb, &wb) in erule.nodes.iter().zip(&erule.weights) {
            let i_star_prime = 2.0 * xb;
            let zeta = (i_star + i_star_prime - i - i_prime) / u_norm;
            let g_par = v_par - zeta;
            let gauss_par = (-0.5 * g_par * g_par).exp();
            if gauss_par < 1e-290 {
                continue;
            }
            let shift = 0.25 * (u_norm + zeta) * (u_norm + zeta) + i + i_prime;
            let mut j = 0.0;
            for (&x, &w) in rrule.nodes.iter().zip(&rrule.weights) {
                let rho = rho_mid + rho_half * x;
                let d = rho - w_perp;
                let psi = shift + 0.25 * rho * rho;
                j += w
                    * rho
                    * (-0.5 * d * d).exp()
                    * bessel_i0_scaled(rho * w_perp)
                    * pow_neg(psi, q);
            }
            t_sum += wa * wb * gauss_par * j * rho_half;
        }
    }
    let kappa2 = 4.0 * params.c_sigma * params.maxwellian_norm();
    kappa2
        * (i * i_star).powf(0.25 * delta - 0.5)
        * (-0.125 * u_norm * u_norm).exp()
        * energy_mass
        * energy_mass
        * 2.0
        * std::f64::consts::PI
        * t_sum
        / u_norm
}

/// Signed kernel k = k2 - k1.
pub fn kernel_k(kp: &KernelPoint, params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    Ok(k2(kp, params, quad)? - k1(kp, params))
}

/// Outcome of an outer (v_*, I_*) kernel integration: the value plus an
/// estimate of the part lost to the excluded ball |u| < r_min.
#[derive(Debug, Clone, Copy)]
pub struct KernelIntegral {
    pub value: f64,
    pub truncation_error: f64,
}

/// Weighted-kernel integral
/// int |k_w(v, v_*, I, I_*)| e^{eps |v - v_*|^2} (1 + I_*)^m dv_* dI_*
/// with k_w = k w(v, I) / w(v_*, I_*), on the hypothesis range
/// 0 <= eps <= 1/64, 0 <= m <= 1/8.
pub fn kw_weighted_integral(
    p: &PhasePoint,
    eps: f64,
    m: f64,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<KernelIntegral> {
    if !(0.0..=1.0 / 64.0).contains(&eps) {
        return Err(Error::Usage(format!("eps must lie in [0, 1/64], got {eps}")));
    }
    if !(0.0..=0.125).contains(&m) {
        return Err(Error::Usage(format!("m must lie in [0, 1/8], got {m}")));
    }
    let w_self = weight(p, params);
    let integrand = move |vs: [f64; 3], istar: f64, kval: f64, u2: f64| {
        let ps = PhasePoint { v: vs, i: istar };
        kval.abs() * w_self / weight(&ps, params) * (eps * u2).exp() * (1.0 + istar).powf(m)
    };
    outer_kernel_integral(p, params, quad, true, &integrand)
}

/// Apply the integral operator K (or its weighted conjugate K_w f = w K(f/w))
/// to a plain function f(v, I) at the point p.
pub fn apply_k(
    f: &(dyn Fn([f64; 3], f64) -> f64 + Sync),
    p: &PhasePoint,
    weighted: bool,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<KernelIntegral> {
    let w_self = if weighted { weight(p, params) } else { 1.0 };
    let integrand = move |vs: [f64; 3], istar: f64, kval: f64, _u2: f64| {
        let ratio = if weighted {
            let ps = PhasePoint { v: vs, i: istar };
            w_self / weight(&ps, params)
        } else {
            1.0
        };
        kval * ratio * f(vs, istar)
    };
    outer_kernel_integral(p, params, quad, false, &integrand)
}

/// Outer integration over (v_*, I_*) in spherical coordinates around v.
/// The integrand callback receives (v_*, I_*, k(v, v_*, I, I_*), |u|^2);
/// kernel values depend only on (|u|, cos theta, I_*) and are shared across
/// the azimuth ring. With `azimuthal` set the integrand itself is taken to
/// be azimuth-independent and the ring collapses to one evaluation.
fn outer_kernel_integral(
    p: &PhasePoint,
    params: &ModelParams,
    quad: &QuadratureSpec,
    azimuthal: bool,
    integrand: &(dyn Fn([f64; 3], f64, f64, f64) -> f64 + Sync),
) -> Result<KernelIntegral> {
    let speed = p.speed();
    // orthonormal frame with e3 along v (any frame when v = 0)
    let e3 = if speed > 1e-12 {
        [p.v[0] / speed, p.v[1] / speed, p.v[2] / speed]
    } else {
        [0.0, 0.0, 1.0]
    };
    let helper = if e3[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut e1 = [
        helper[1] * e3[2] - helper[2] * e3[1],
        helper[2] * e3[0] - helper[0] * e3[2],
        helper[0] * e3[1] - helper[1] * e3[0],
    ];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for x in &mut e1 {
        *x /= n1;
    }
    let e2 = [
        e3[1] * e1[2] - e3[2] * e1[1],
        e3[2] * e1[0] - e3[0] * e1[2],
        e3[0] * e1[1] - e3[1] * e1[0],
    ];

    // composite radial panels in s = |u|
    let s_max = speed + 2.2 * quad.s_pad;
    let n_panel = (quad.outer_s_nodes / 2).max(8);
    let mut srule = gauss_legendre_on(n_panel, quad.r_min, 2.0)?;
    let m1 = (speed + 4.0).max(6.0);
    let mid = gauss_legendre_on(n_panel, 2.0, m1)?;
    let far = gauss_legendre_on(n_panel, m1, s_max)?;
    srule.nodes.extend(mid.nodes);
    srule.weights.extend(mid.weights);
    srule.nodes.extend(far.nodes);
    srule.weights.extend(far.weights);

    let crule_rc = cached_legendre(quad.outer_angle_nodes);
    let crule = Rule {
        nodes: crule_rc.nodes.clone(),
        weights: crule_rc.weights.clone(),
    };
    let n_phi = if azimuthal { 1 } else { quad.outer_phi_nodes.max(4) };
    let alpha_star = 0.25 * params.delta - 0.5;
    let irule = gauss_laguerre(quad.outer_i_nodes, alpha_star)?;
    // plain dI_* weights at nodes I_* = 2x
    let i_nodes: Vec<f64> = irule.nodes.iter().map(|&x| 2.0 * x).collect();
    let i_weights: Vec<f64> = irule
        .nodes
        .iter()
        .zip(&irule.weights)
        .map(|(&x, &w)| 2.0 * w * x.powf(-alpha_star) * x.exp())
        .collect();

    let two_pi = 2.0 * std::f64::consts::PI;
    let dphi = two_pi / n_phi as f64;
    let shell_of = |s: f64| -> f64 {
        let mut shell = 0.0;
        for (&mu, &wmu) in crule.nodes.iter().zip(&crule.weights) {
            let sin_t = (1.0 - mu * mu).max(0.0).sqrt();
            let u_dot_v = speed * mu;
            let v_par = u_dot_v - 0.5 * s;
            let w_perp = (speed * speed - u_dot_v * u_dot_v).max(0.0).sqrt();
            for (&istar, &wi) in i_nodes.iter().zip(&i_weights) {
                let k2v = k2_radial(s, v_par, w_perp, p.i, istar, params, quad);
                let mut ring = 0.0;
                for kphi in 0..n_phi {
                    let phi = (kphi as f64 + 0.5) * dphi;
                    let dir = [
                        sin_t * (phi.cos() * e1[0] + phi.sin() * e2[0]) + mu * e3[0],
                        sin_t * (phi.cos() * e1[1] + phi.sin() * e2[1]) + mu * e3[1],
                        sin_t * (phi.cos() * e1[2] + phi.sin() * e2[2]) + mu * e3[2],
                    ];
                    let vs = [
                        p.v[0] - s * dir[0],
                        p.v[1] - s * dir[1],
                        p.v[2] - s * dir[2],
                    ];
                    let kp = KernelPoint::new(*p, PhasePoint { v: vs, i: istar });
                    let kval = k2v - k1(&kp, params);
                    ring += integrand(vs, istar, kval, s * s);
                }
                shell += wmu * wi * ring * dphi;
            }
        }
        shell
    };

    let shells: Vec<(f64, f64, f64)> = srule
        .nodes
        .par_iter()
        .zip(srule.weights.par_iter())
        .map(|(&s, &ws)| {
            let sh = shell_of(s);
            (ws * s * s * sh, s, sh)
        })
        .collect();

    let value: f64 = shells.iter().map(|x| x.0).sum();
    // excluded-ball estimate: the shell density behaves like C s near u = 0,
    // so the missing piece is about C r_min^2 / 2 with C from the innermost
    // computed shell
    let truncation_error = shells
        .first()
        .map(|&(_, s, sh)| 0.5 * (s * sh).abs() * quad.r_min * quad.r_min / s.max(quad.r_min))
        .unwrap_or(0.0);
    Ok(KernelIntegral {
        value,
        truncation_error,
    })
}

/// Dense matrix of the weighted operator K_w on the phase nodes of a grid:
/// (K_w h)(p) ~ sum_q M[p, q] h_q. Pairs inside |u| < max(r_min, h/2) are
/// dropped and reported as a truncation estimate.
pub struct KwMatrix {
    pub matrix: Array2<f64>,
    pub truncation: f64,
}

pub fn build_kw_matrix(
    grid: &DistributionGrid,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<KwMatrix> {
    let n = grid.n_phase();
    let coords: Vec<([f64; 3], f64)> = (0..n).map(|p| grid.phase_coords(p)).collect();
    let weights: Vec<f64> = (0..n).map(|p| grid.phase_weight(p)).collect();
    let wvals: Vec<f64> = coords
        .iter()
        .map(|&(v, i)| weight(&PhasePoint { v, i }, params))
        .collect();
    let h = grid.v_axis().step();
    let r_cut = quad.r_min.max(0.5 * h);

    // k is symmetric under the pair swap; evaluate the upper triangle only
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|pi| {
            let (vp, ip) = coords[pi];
            let mut row = Vec::new();
            for qi in (pi + 1)..n {
                let (vq, iq) = coords[qi];
                let du = [vp[0] - vq[0], vp[1] - vq[1], vp[2] - vq[2]];
                let u2 = du[0] * du[0] + du[1] * du[1] + du[2] * du[2];
                if u2 < r_cut * r_cut {
                    continue;
                }
                let kp = KernelPoint::new(
                    PhasePoint { v: vp, i: ip },
                    PhasePoint { v: vq, i: iq },
                );
                row.push((qi, k2(&kp, params, quad).unwrap_or(0.0) - k1(&kp, params)));
            }
            row
        })
        .collect();

    let mut matrix = Array2::zeros((n, n));
    let mut k_near: f64 = 0.0;
    for (p, row) in rows.iter().enumerate() {
        for &(q, kval) in row {
            matrix[[p, q]] = kval * wvals[p] / wvals[q] * weights[q];
            matrix[[q, p]] = kval * wvals[q] / wvals[p] * weights[p];
            let (vp, _) = coords[p];
            let (vq, _) = coords[q];
            let du2 = (vp[0] - vq[0]).powi(2) + (vp[1] - vq[1]).powi(2) + (vp[2] - vq[2]).powi(2);
            if du2 < 1.2 * h * h {
                k_near = k_near.max(kval.abs());
            }
        }
    }
    // dropped-ball estimate: integrand ~ (k u)|_{u ~ h} / u, integrated over
    // the ball of radius r_cut
    let truncation = 2.0 * std::f64::consts::PI * k_near * h * r_cut * r_cut;
    Ok(KwMatrix { matrix, truncation })
}

/// One row of a verification sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub v: [f64; 3],
    pub i: f64,
    pub quantity: String,
    pub value: f64,
    pub est_error: f64,
}

/// Sweep of nu and of nu * (1 + |v| + sqrt I)^{alpha - 2} over a speed x
/// energy grid.
pub fn nu_ratio_sweep(
    params: &ModelParams,
    quad: &QuadratureSpec,
    speeds: &[f64],
    energies: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &s in speeds {
        for &i in energies {
            let p = PhasePoint::new([s, 0.0, 0.0], i)?;
            let val = nu(&p, params, quad)?;
            rows.push(SweepRow {
                v: p.v,
                i,
                quantity: "nu".into(),
                value: val,
                est_error: 0.0,
            });
            rows.push(SweepRow {
                v: p.v,
                i,
                quantity: "nu_ratio".into(),
                value: val * (1.0 + s + i.sqrt()).powf(params.alpha - 2.0),
                est_error: 0.0,
            });
        }
    }
    Ok(rows)
}

/// Sweep of kw_weighted_integral and the bound product
/// (1 + |v| + I^{1/8}) * integral over a speed x energy grid.
pub fn kw_bound_sweep(
    params: &ModelParams,
    quad: &QuadratureSpec,
    eps: f64,
    m: f64,
    speeds: &[f64],
    energies: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &s in speeds {
        for &i in energies {
            let p = PhasePoint::new([s, 0.0, 0.0], i)?;
            let ki = kw_weighted_integral(&p, eps, m, params, quad)?;
            let factor = 1.0 + s + i.powf(0.125);
            rows.push(SweepRow {
                v: p.v,
                i,
                quantity: "kw_integral".into(),
                value: ki.value,
                est_error: ki.truncation_error,
            });
            rows.push(SweepRow {
                v: p.v,
                i,
                quantity: "kw_bound_product".into(),
                value: factor * ki.value,
                est_error: factor * ki.truncation_error,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(v: [f64; 3], i: f64) -> PhasePoint {
        PhasePoint::new(v, i).unwrap()
    }

    #[test]
    fn nu_constant_for_alpha_two() {
        let params = ModelParams::new(2.0, 2.0, 1.0, 6.0).unwrap();
        let quad = QuadratureSpec::default();
        let expect = params.rate_prefactor();
        for (v, i) in [
            ([0.0, 0.0, 0.0], 0.1),
            ([3.0, 0.0, 0.0], 1.0),
            ([0.0, 0.0, 0.0], 10.0),
            ([1.0, -2.0, 2.0], 5.0),
        ] {
            let val = nu(&pt(v, i), &params, &quad).unwrap();
            assert_relative_eq!(val, expect, max_relative = 1e-8);
        }
    }

    #[test]
    fn nu_ratio_bounded_and_stable() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let speeds = [0.0, 1.0, 4.0, 8.0, 12.0];
        let energies = [0.05, 1.0, 10.0, 50.0];
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for &s in &speeds {
            for &i in &energies {
                let v = nu(&pt([s, 0.0, 0.0], i), &params, &quad).unwrap();
                let r = v * (1.0 + s + i.sqrt()).powf(params.alpha - 2.0);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        assert!(lo > 0.0 && hi.is_finite());
        // equivalence constants are order one
        assert!(hi / lo < 10.0, "ratio spread {}", hi / lo);
        // node doubling moves values by < 1e-8 relative
        let refined = quad.refined();
        let a = nu(&pt([2.0, 0.0, 0.0], 0.5), &params, &quad).unwrap();
        let b = nu(&pt([2.0, 0.0, 0.0], 0.5), &params, &refined).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }

    #[test]
    fn k1_symmetric_and_gaussian_decay() {
        let params = ModelParams::default();
        let kp = KernelPoint::new(pt([1.0, 0.5, -0.2], 0.7), pt([-0.4, 0.1, 0.9], 2.0));
        let a = k1(&kp, &params);
        let b = k1(&kp.swapped(), &params);
        assert_relative_eq!(a, b, max_relative = 1e-14);
        assert!(a > 0.0);
        // growing |v| with everything else fixed decays at least like
        // e^{-|v|^2/16}
        let base = KernelPoint::new(pt([1.0, 0.0, 0.0], 0.7), pt([-0.4, 0.1, 0.9], 2.0));
        let far = KernelPoint::new(pt([7.0, 0.0, 0.0], 0.7), pt([-0.4, 0.1, 0.9], 2.0));
        let ratio = k1(&far, &params) / k1(&base, &params);
        assert!(ratio <= ((1.0 - 49.0) / 16.0f64).exp());
    }

    #[test]
    fn k2_swap_symmetry() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let kp = KernelPoint::new(pt([1.0, 0.0, 0.0], 1.0), pt([0.0, 1.0, 0.0], 1.0));
        let a = k2(&kp, &params, &quad).unwrap();
        let b = k2(&kp.swapped(), &params, &quad).unwrap();
        assert!(a > 0.0);
        assert_relative_eq!(a, b, max_relative = 1e-9);
        // an asymmetric configuration
        let kp2 = KernelPoint::new(pt([1.5, -0.3, 0.2], 0.4), pt([-0.7, 0.8, 0.1], 2.3));
        let a2 = k2(&kp2, &params, &quad).unwrap();
        let b2 = k2(&kp2.swapped(), &params, &quad).unwrap();
        assert_relative_eq!(a2, b2, max_relative = 1e-8);
    }

    #[test]
    fn k2_rejects_coincident_velocities() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let kp = KernelPoint::new(pt([1.0, 0.0, 0.0], 1.0), pt([1.0, 0.0, 0.0], 2.0));
        assert!(matches!(
            k2(&kp, &params, &quad),
            Err(Error::SingularInput(_))
        ));
    }

    #[test]
    fn k2_large_separation_decay() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        // doubling |u| multiplies the e^{-|u|^2/16}-type envelope down
        let near = KernelPoint::new(pt([2.0, 0.0, 0.0], 1.0), pt([0.0, 0.0, 0.0], 1.0));
        let far = KernelPoint::new(pt([6.0, 0.0, 0.0], 1.0), pt([0.0, 0.0, 0.0], 1.0));
        let kn = k2(&near, &params, &quad).unwrap();
        let kf = k2(&far, &params, &quad).unwrap();
        assert!(kf < kn);
        // envelope with exponent 1/16 on |u|^2 (conservative form)
        assert!(kf / kn <= ((-(36.0 - 4.0) / 16.0) as f64).exp() * 1e3);
    }

    #[test]
    fn kw_integral_monotone_in_eps_and_m() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let p = pt([1.0, 0.0, 0.0], 1.0);
        let base = kw_weighted_integral(&p, 0.0, 0.0, &params, &quad).unwrap();
        let with_eps = kw_weighted_integral(&p, 1.0 / 64.0, 0.0, &params, &quad).unwrap();
        let with_m = kw_weighted_integral(&p, 0.0, 0.125, &params, &quad).unwrap();
        assert!(base.value > 0.0);
        assert!(with_eps.value >= base.value);
        assert!(with_m.value >= base.value);
        // out-of-range parameters are usage errors
        assert!(kw_weighted_integral(&p, 0.02, 0.0, &params, &quad).is_err());
        assert!(kw_weighted_integral(&p, 0.0, 0.2, &params, &quad).is_err());
    }

    #[test]
    fn apply_k_zero_function() {
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let zero = |_: [f64; 3], _: f64| 0.0;
        let out = apply_k(&zero, &pt([0.5, 0.0, 0.0], 0.5), false, &params, &quad).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn k_applied_to_sqrt_m_gives_nu_sqrt_m() {
        // L sqrt(M) = 0 and L = nu - K force K sqrt(M) = nu sqrt(M)
        let params = ModelParams::default();
        let quad = QuadratureSpec::default();
        let norm = params.maxwellian_norm();
        let delta = params.delta;
        let sqrt_m = move |v: [f64; 3], i: f64| {
            (norm * i.powf(delta / 2.0 - 1.0)
                * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp())
            .sqrt()
        };
        for (v, i) in [([0.6, 0.0, 0.0], 0.8), ([0.0, 1.5, 0.0], 2.0)] {
            let p = pt(v, i);
            let lhs = apply_k(&sqrt_m, &p, false, &params, &quad).unwrap();
            let rhs = nu(&p, &params, &quad).unwrap() * sqrt_m(v, i);
            assert_relative_eq!(lhs.value, rhs, max_relative = 2e-3);
        }
    }
}
