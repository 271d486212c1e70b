//! Gauss quadrature rules (Golub-Welsch) and the numerical-parameter block
//! that governs every integral in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lapack::tridiag_eig_first_row;
use crate::special::gamma_fn;

/// One-dimensional quadrature rule: nodes and matching weights.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine image of the rule under x -> a + (b - a) * (x + 1) / 2,
    /// for rules defined on [-1, 1].
    pub fn mapped_to(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

/// Golub-Welsch: nodes/weights from the Jacobi recurrence coefficients
/// (`a_k` diagonal, `b_k` squared off-diagonal) and total mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> Result<Rule> {
    let e: Vec<f64> = b.iter().map(|&x| x.sqrt()).collect();
    let (nodes, first_row) = tridiag_eig_first_row(a, &e)?;
    let weights = first_row.iter().map(|&q| mu0 * q * q).collect();
    Ok(Rule { nodes, weights })
}

/// Gauss-Legendre on [-1, 1] (weight 1).
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Usage("quadrature rule needs n >= 1".into()));
    }
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k * k / (4.0 * k * k - 1.0)
        })
        .collect();
    golub_welsch(&a, &b, 2.0)
}

/// Gauss-Legendre mapped to [lo, hi].
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> Result<Rule> {
    Ok(gauss_legendre(n)?.mapped_to(lo, hi))
}

/// Gauss-Hermite for the standard normal weight (2 pi)^{-1/2} e^{-x^2/2}.
/// Weights sum to 1.
pub fn gauss_hermite_normal(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Usage("quadrature rule needs n >= 1".into()));
    }
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n).map(|k| k as f64).collect();
    golub_welsch(&a, &b, 1.0)
}

/// Generalized Gauss-Laguerre for weight x^alpha e^{-x} on (0, inf).
/// Weights sum to Gamma(alpha + 1).
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Usage("quadrature rule needs n >= 1".into()));
    }
    if alpha <= -1.0 {
        return Err(Error::Domain(format!(
            "Laguerre parameter must exceed -1, got {alpha}"
        )));
    }
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k * (k + alpha)
        })
        .collect();
    golub_welsch(&a, &b, gamma_fn(alpha + 1.0)?)
}

/// Gauss-Laguerre normalized to the probability measure
/// x^alpha e^{-x} dx / Gamma(alpha + 1). Weights sum to 1.
pub fn gauss_laguerre_prob(n: usize, alpha: f64) -> Result<Rule> {
    let mut rule = gauss_laguerre(n, alpha)?;
    let mass = gamma_fn(alpha + 1.0)?;
    for w in &mut rule.weights {
        *w /= mass;
    }
    Ok(rule)
}

thread_local! {
    static LEGENDRE_CACHE: std::cell::RefCell<std::collections::HashMap<usize, std::rc::Rc<Rule>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
    static LAGUERRE_CACHE: std::cell::RefCell<std::collections::HashMap<(usize, u64), std::rc::Rc<Rule>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

/// Cached Gauss-Legendre rule on [-1, 1]; hot loops map it per use.
pub fn cached_legendre(n: usize) -> std::rc::Rc<Rule> {
    LEGENDRE_CACHE.with(|c| {
        c.borrow_mut()
            .entry(n)
            .or_insert_with(|| std::rc::Rc::new(gauss_legendre(n).expect("legendre rule")))
            .clone()
    })
}

/// Cached probability-normalized generalized Gauss-Laguerre rule.
pub fn cached_laguerre_prob(n: usize, alpha: f64) -> std::rc::Rc<Rule> {
    LAGUERRE_CACHE.with(|c| {
        c.borrow_mut()
            .entry((n, alpha.to_bits()))
            .or_insert_with(|| {
                std::rc::Rc::new(gauss_laguerre_prob(n, alpha).expect("laguerre rule"))
            })
            .clone()
    })
}

/// Numerical parameters for every integral: deterministic node counts,
/// truncation radii, Monte Carlo sample counts and the RNG seed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Base seed; all Monte Carlo streams are derived from it.
    pub seed: u64,
    /// Samples per Monte Carlo collision-integral estimate.
    pub mc_samples: usize,
    /// Radial nodes for the collision-frequency integral.
    pub nu_s_nodes: usize,
    /// Internal-energy nodes for the collision-frequency integral.
    pub nu_i_nodes: usize,
    /// Post-collision energy nodes (each of I', I'_*) inside k2.
    pub k2_energy_nodes: usize,
    /// Transverse radial nodes inside k2.
    pub k2_rho_nodes: usize,
    /// Relative-speed nodes for outer (v_*, I_*) integrations.
    pub outer_s_nodes: usize,
    /// Polar-angle nodes for outer integrations.
    pub outer_angle_nodes: usize,
    /// Azimuthal nodes for outer integrations against general functions.
    pub outer_phi_nodes: usize,
    /// Internal-energy nodes for outer integrations.
    pub outer_i_nodes: usize,
    /// Excluded ball |v - v_*| < r_min around the k2 singular point.
    pub r_min: f64,
    /// Integration range pad beyond the thermal width, in thermal units.
    pub s_pad: f64,
    /// Radial nodes for Galerkin kernel assembly.
    pub assembly_radial_nodes: usize,
    /// Angular nodes for the Legendre projection in kernel assembly.
    pub assembly_angle_nodes: usize,
    /// Internal-energy nodes for Galerkin kernel assembly.
    pub assembly_energy_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            seed: 42,
            mc_samples: 100_000,
            nu_s_nodes: 48,
            nu_i_nodes: 16,
            k2_energy_nodes: 12,
            k2_rho_nodes: 20,
            outer_s_nodes: 32,
            outer_angle_nodes: 24,
            outer_phi_nodes: 16,
            outer_i_nodes: 12,
            r_min: 1e-3,
            s_pad: 10.0,
            assembly_radial_nodes: 20,
            assembly_angle_nodes: 20,
            assembly_energy_nodes: 12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be >= 1".into()));
        }
        for (name, n) in [
            ("nu_s_nodes", self.nu_s_nodes),
            ("nu_i_nodes", self.nu_i_nodes),
            ("k2_energy_nodes", self.k2_energy_nodes),
            ("k2_rho_nodes", self.k2_rho_nodes),
            ("outer_s_nodes", self.outer_s_nodes),
            ("outer_angle_nodes", self.outer_angle_nodes),
            ("outer_phi_nodes", self.outer_phi_nodes),
            ("outer_i_nodes", self.outer_i_nodes),
            ("assembly_radial_nodes", self.assembly_radial_nodes),
            ("assembly_angle_nodes", self.assembly_angle_nodes),
            ("assembly_energy_nodes", self.assembly_energy_nodes),
        ] {
            if n == 0 {
                return Err(Error::Config(format!("{name} must be >= 1")));
            }
        }
        if !(self.r_min > 0.0) {
            return Err(Error::Config("r_min must be positive".into()));
        }
        if !(self.s_pad > 2.0) {
            return Err(Error::Config("s_pad must exceed 2 thermal units".into()));
        }
        Ok(())
    }

    /// Same spec with every deterministic node count doubled; used by the
    /// refinement-stability checks.
    pub fn refined(&self) -> QuadratureSpec {
        QuadratureSpec {
            seed: self.seed,
            mc_samples: self.mc_samples,
            nu_s_nodes: 2 * self.nu_s_nodes,
            nu_i_nodes: 2 * self.nu_i_nodes,
            k2_energy_nodes: 2 * self.k2_energy_nodes,
            k2_rho_nodes: 2 * self.k2_rho_nodes,
            outer_s_nodes: 2 * self.outer_s_nodes,
            outer_angle_nodes: 2 * self.outer_angle_nodes,
            outer_phi_nodes: 2 * self.outer_phi_nodes,
            outer_i_nodes: 2 * self.outer_i_nodes,
            r_min: self.r_min,
            s_pad: self.s_pad,
            assembly_radial_nodes: 2 * self.assembly_radial_nodes,
            assembly_angle_nodes: 2 * self.assembly_angle_nodes,
            assembly_energy_nodes: 2 * self.assembly_energy_nodes,
        }
    }

    /// Same spec with a different Monte Carlo sample count.
    pub fn with_mc_samples(&self, mc_samples: usize) -> QuadratureSpec {
        QuadratureSpec {
            mc_samples,
            ..self.clone()
        }
    }

    /// Same spec with a different seed.
    pub fn with_seed(&self, seed: u64) -> QuadratureSpec {
        QuadratureSpec {
            seed,
            ..self.clone()
        }
    }
}
