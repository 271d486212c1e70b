//! Model parameters, phase space, equilibrium Maxwellian, polynomial weight
//! and the exact moment identities used as golden values by the quadrature
//! engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::DistributionGrid;
use crate::special::{beta_fn, gamma_fn, ln_gamma};

/// Physical/model constants of the collision model.
///
/// `delta` is the number of internal degrees of freedom, `alpha` the hard
/// potential exponent, `c_sigma` the cross-section constant and `beta` the
/// exponent of the polynomial weight w(v, I) = (1 + |v| + sqrt(I))^beta.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ModelParams {
    pub delta: f64,
    pub alpha: f64,
    pub c_sigma: f64,
    pub beta: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            delta: 2.0,
            alpha: 1.0,
            c_sigma: 1.0,
            beta: 6.0,
        }
    }
}

impl ModelParams {
    pub fn new(delta: f64, alpha: f64, c_sigma: f64, beta: f64) -> Result<Self> {
        let p = ModelParams {
            delta,
            alpha,
            c_sigma,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 2.0) || !self.delta.is_finite() {
            return Err(Error::Config(format!(
                "delta must satisfy delta >= 2, got {}",
                self.delta
            )));
        }
        if !(0.0..=2.0).contains(&self.alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0, 2], got {}",
                self.alpha
            )));
        }
        if !(self.c_sigma > 0.0) || !self.c_sigma.is_finite() {
            return Err(Error::Config(format!(
                "c_sigma must be positive, got {}",
                self.c_sigma
            )));
        }
        if !(self.beta > 5.0) || !self.beta.is_finite() {
            return Err(Error::Config(format!(
                "beta must exceed 5, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Normalization of the equilibrium: 1 / ((2 pi)^{3/2} Gamma(delta/2)).
    pub fn maxwellian_norm(&self) -> f64 {
        ((2.0 * std::f64::consts::PI).powf(1.5) * gamma_fn(self.delta / 2.0).unwrap()).recip()
    }

    /// Rate prefactor of the reduced collision operator once the angular and
    /// energy-splitting variables are integrated out:
    /// 4 pi B(3/2, delta) B(delta/2, delta/2) c_sigma.
    pub fn rate_prefactor(&self) -> f64 {
        4.0 * std::f64::consts::PI
            * beta_fn(1.5, self.delta)
            * beta_fn(self.delta / 2.0, self.delta / 2.0)
            * self.c_sigma
    }
}

/// One kinetic state: velocity v in R^3 and internal energy I.
///
/// `new` enforces I > 0 (the open physical domain); boundary states with
/// I = 0 occur only as post-collision quadrature nodes and are built with
/// `boundary`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub v: [f64; 3],
    pub i: f64,
}

impl PhasePoint {
    pub fn new(v: [f64; 3], i: f64) -> Result<Self> {
        if !(i > 0.0) || !i.is_finite() {
            return Err(Error::Domain(format!(
                "internal energy must be strictly positive, got {i}"
            )));
        }
        Ok(PhasePoint { v, i })
    }

    /// Boundary state with I >= 0, valid only as a quadrature node.
    pub fn boundary(v: [f64; 3], i: f64) -> Result<Self> {
        if !(i >= 0.0) || !i.is_finite() {
            return Err(Error::Domain(format!(
                "boundary internal energy must be nonnegative, got {i}"
            )));
        }
        Ok(PhasePoint { v, i })
    }

    pub fn speed(&self) -> f64 {
        (self.v[0] * self.v[0] + self.v[1] * self.v[1] + self.v[2] * self.v[2]).sqrt()
    }

    /// Total kinetic-plus-internal energy |v|^2/2 + I.
    pub fn energy(&self) -> f64 {
        0.5 * (self.v[0] * self.v[0] + self.v[1] * self.v[1] + self.v[2] * self.v[2]) + self.i
    }
}

/// Equilibrium M(v, I) = I^{delta/2-1} e^{-|v|^2/2 - I} / ((2 pi)^{3/2} Gamma(delta/2)).
pub fn maxwellian(p: &PhasePoint, params: &ModelParams) -> Result<f64> {
    if !(p.i > 0.0) {
        return Err(Error::Domain(format!(
            "maxwellian requires I > 0, got {}",
            p.i
        )));
    }
    Ok(maxwellian_reduced(p, params) * p.i.powf(params.delta / 2.0 - 1.0))
}

/// The reduced equilibrium M / I^{delta/2-1} = norm * e^{-|v|^2/2 - I},
/// continuous up to I = 0.
pub fn maxwellian_reduced(p: &PhasePoint, params: &ModelParams) -> f64 {
    let v2 = p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2];
    params.maxwellian_norm() * (-0.5 * v2 - p.i).exp()
}

/// sqrt(M), used throughout the perturbation framework.
pub fn sqrt_maxwellian(p: &PhasePoint, params: &ModelParams) -> Result<f64> {
    Ok(maxwellian(p, params)?.sqrt())
}

/// Polynomial weight w(v, I) = (1 + |v| + sqrt(I))^beta, defined for I >= 0.
pub fn weight(p: &PhasePoint, params: &ModelParams) -> f64 {
    (1.0 + p.speed() + p.i.max(0.0).sqrt()).powf(params.beta)
}

pub use crate::special::gamma_fn as gamma;

/// Selector for the tabulated Gaussian/Gamma moments. Gaussian moments are
/// with respect to the normalized measure (2 pi)^{-3/2} e^{-|v|^2/2} dv and
/// Gamma moments with respect to I^{delta/2-1} e^{-I} dI / Gamma(delta/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// E[1] = 1
    Unit,
    /// E[v_i^2] = 1
    ViSq,
    /// E[|v|^2] = 3
    VAbsSq,
    /// E[v_i^4] = 3
    ViQuad,
    /// E[v_i^2 v_j^2] = 1 for i != j
    ViSqVjSq,
    /// E[|v|^2 v_j^2] = 5
    VAbsSqVjSq,
    /// E[|v|^4] = 15
    VAbsQuad,
    /// E[|v|^4 v_j^2] = 35
    VAbsQuadVjSq,
    /// E[|v|^6] = 105
    VAbsSix,
    /// E_I[1] = 1
    EnergyUnit,
    /// E_I[I] = delta/2
    EnergyFirst,
    /// E_I[I^2] = (delta/2)(delta/2 + 1)
    EnergySecond,
}

impl MomentKind {
    pub const ALL: [MomentKind; 12] = [
        MomentKind::Unit,
        MomentKind::ViSq,
        MomentKind::VAbsSq,
        MomentKind::ViQuad,
        MomentKind::ViSqVjSq,
        MomentKind::VAbsSqVjSq,
        MomentKind::VAbsQuad,
        MomentKind::VAbsQuadVjSq,
        MomentKind::VAbsSix,
        MomentKind::EnergyUnit,
        MomentKind::EnergyFirst,
        MomentKind::EnergySecond,
    ];

    /// Parse a selector name; unknown selectors are a usage error.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "unit" => Ok(MomentKind::Unit),
            "vi_sq" => Ok(MomentKind::ViSq),
            "vabs_sq" => Ok(MomentKind::VAbsSq),
            "vi_quad" => Ok(MomentKind::ViQuad),
            "vi_sq_vj_sq" => Ok(MomentKind::ViSqVjSq),
            "vabs_sq_vj_sq" => Ok(MomentKind::VAbsSqVjSq),
            "vabs_quad" => Ok(MomentKind::VAbsQuad),
            "vabs_quad_vj_sq" => Ok(MomentKind::VAbsQuadVjSq),
            "vabs_six" => Ok(MomentKind::VAbsSix),
            "energy_unit" => Ok(MomentKind::EnergyUnit),
            "energy_first" => Ok(MomentKind::EnergyFirst),
            "energy_second" => Ok(MomentKind::EnergySecond),
            other => Err(Error::Usage(format!("unknown moment selector `{other}`"))),
        }
    }
}

/// Exact closed-form value of a tabulated moment.
pub fn moment_identity(kind: MomentKind, params: &ModelParams) -> f64 {
    let half_delta = params.delta / 2.0;
    match kind {
        MomentKind::Unit => 1.0,
        MomentKind::ViSq => 1.0,
        MomentKind::VAbsSq => 3.0,
        MomentKind::ViQuad => 3.0,
        MomentKind::ViSqVjSq => 1.0,
        MomentKind::VAbsSqVjSq => 5.0,
        MomentKind::VAbsQuad => 15.0,
        MomentKind::VAbsQuadVjSq => 35.0,
        MomentKind::VAbsSix => 105.0,
        MomentKind::EnergyUnit => 1.0,
        MomentKind::EnergyFirst => half_delta,
        MomentKind::EnergySecond => half_delta * (half_delta + 1.0),
    }
}

/// Defect mass, momentum and energy of F relative to the global equilibrium,
/// the energy weighted by |v|^2 + 2 I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectMoments {
    pub mass: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
}

impl DefectMoments {
    pub fn momentum_norm(&self) -> f64 {
        (self.momentum[0] * self.momentum[0]
            + self.momentum[1] * self.momentum[1]
            + self.momentum[2] * self.momentum[2])
            .sqrt()
    }
}

/// Defect moments of a gridded distribution: integrals over x, v, I of
/// (1, v, |v|^2 + 2I) against F - M.
pub fn defect_moments(f: &DistributionGrid, params: &ModelParams) -> Result<DefectMoments> {
    if (f.delta() - params.delta).abs() > 1e-12 {
        return Err(Error::Usage(format!(
            "grid was built for delta = {}, params have delta = {}",
            f.delta(),
            params.delta
        )));
    }
    let norm = params.maxwellian_norm();
    let half = params.delta / 2.0 - 1.0;
    let mut mass = 0.0;
    let mut momentum = [0.0; 3];
    let mut energy = 0.0;
    f.for_each_node(|_x, v, i, weight, value| {
        let m = norm * i.powf(half) * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp();
        let d = weight * (value - m);
        mass += d;
        momentum[0] += d * v[0];
        momentum[1] += d * v[1];
        momentum[2] += d * v[2];
        energy += d * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + 2.0 * i);
    });
    Ok(DefectMoments {
        mass,
        momentum,
        energy,
    })
}

/// Macroscopic state (density, bulk velocity, temperature) extracted from the
/// conserved moments of a distribution.
#[derive(Debug, Clone, Copy)]
pub struct MacroState {
    pub rho: f64,
    pub u: [f64; 3],
    pub temp: f64,
}

impl MacroState {
    /// From raw moments (mass, momentum, kinetic-plus-internal energy
    /// integral of (|v|^2/2 + I) F).
    pub fn from_moments(mass: f64, momentum: [f64; 3], energy: f64, delta: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::Domain("nonpositive mass".into()));
        }
        let u = [momentum[0] / mass, momentum[1] / mass, momentum[2] / mass];
        let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        let temp = (energy / mass - 0.5 * u2) / (0.5 * (3.0 + delta));
        if !(temp > 0.0) {
            return Err(Error::Domain("nonpositive temperature".into()));
        }
        Ok(MacroState { rho: mass, u, temp })
    }

    /// The Maxwellian with these macroscopic moments, evaluated at (v, I).
    pub fn maxwellian(&self, v: [f64; 3], i: f64, delta: f64) -> f64 {
        let dv2 = (v[0] - self.u[0]).powi(2) + (v[1] - self.u[1]).powi(2) + (v[2] - self.u[2]).powi(2);
        let half = delta / 2.0 - 1.0;
        let ln_norm = -1.5 * (2.0 * std::f64::consts::PI * self.temp).ln()
            - ln_gamma(delta / 2.0)
            - (delta / 2.0) * self.temp.ln();
        self.rho * (ln_norm - 0.5 * dv2 / self.temp - i / self.temp).exp() * i.powf(half)
    }
}
