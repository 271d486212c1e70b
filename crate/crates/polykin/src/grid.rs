//! Tensor-grid sampled distributions: spatial cells x uniform velocity grid
//! x internal-energy quadrature nodes, with the quadrature weights needed to
//! integrate them.

use ndarray::prelude::*;

use crate::error::{Error, Result};
use crate::model::{MacroState, ModelParams, PhasePoint};
use crate::quadrature::gauss_laguerre;

/// Spatial layout of a gridded distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Spatial {
    Homogeneous,
    /// Periodic cubic lattice of n_x^3 cells with side `length`.
    Lattice { n_x: usize, length: f64 },
}

/// Uniform symmetric velocity axis on [-r_v, r_v] with n nodes per direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityAxis {
    pub r_v: f64,
    pub n: usize,
}

impl VelocityAxis {
    pub fn new(r_v: f64, n: usize) -> Result<Self> {
        if n < 2 || !(r_v > 0.0) {
            return Err(Error::Config(format!(
                "velocity axis needs n >= 2 and r_v > 0, got n = {n}, r_v = {r_v}"
            )));
        }
        Ok(VelocityAxis { r_v, n })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.r_v / (self.n as f64 - 1.0)
    }

    pub fn node(&self, k: usize) -> f64 {
        -self.r_v + self.step() * k as f64
    }
}

/// A distribution sampled on the product grid. `values` has one row per
/// spatial cell (a single row for homogeneous problems) and one column per
/// phase node (velocity tensor index x internal-energy index).
#[derive(Debug, Clone)]
pub struct DistributionGrid {
    spatial: Spatial,
    v_axis: VelocityAxis,
    i_nodes: Vec<f64>,
    /// Plain dI weights: sum_j i_weights[j] g(i_j) ~ int g(I) dI for g with
    /// the I^{delta/2-1} e^{-I} profile absorbed by the rule.
    i_weights: Vec<f64>,
    delta: f64,
    pub values: Array2<f64>,
    pub time: f64,
}

impl DistributionGrid {
    /// Build a zero-valued grid. The internal-energy rule is generalized
    /// Gauss-Laguerre with parameter delta/2 - 1, so the near-origin
    /// I^{delta/2-1} behavior is carried by the rule, not the integrand.
    pub fn zeros(
        spatial: Spatial,
        v_axis: VelocityAxis,
        n_i: usize,
        delta: f64,
    ) -> Result<Self> {
        if delta < 2.0 {
            return Err(Error::Config(format!("delta must be >= 2, got {delta}")));
        }
        let alpha = delta / 2.0 - 1.0;
        let rule = gauss_laguerre(n_i, alpha)?;
        // convert x^alpha e^{-x} weights to plain dI weights
        let i_weights: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * x.powf(-alpha) * x.exp())
            .collect();
        let n_space = match spatial {
            Spatial::Homogeneous => 1,
            Spatial::Lattice { n_x, length } => {
                if n_x == 0 || !(length > 0.0) {
                    return Err(Error::Config("lattice needs n_x >= 1 and length > 0".into()));
                }
                n_x * n_x * n_x
            }
        };
        let n_phase = v_axis.n.pow(3) * n_i;
        Ok(DistributionGrid {
            spatial,
            v_axis,
            i_nodes: rule.nodes,
            i_weights,
            delta,
            values: Array2::zeros((n_space, n_phase)),
            time: 0.0,
        })
    }

    /// Build from a function of (cell center, v, I).
    pub fn from_fn(
        spatial: Spatial,
        v_axis: VelocityAxis,
        n_i: usize,
        delta: f64,
        mut f: impl FnMut([f64; 3], [f64; 3], f64) -> f64,
    ) -> Result<Self> {
        let mut grid = Self::zeros(spatial, v_axis, n_i, delta)?;
        let n_space = grid.values.nrows();
        for c in 0..n_space {
            let x = grid.cell_center(c);
            for p in 0..grid.values.ncols() {
                let (v, i) = grid.phase_coords(p);
                grid.values[[c, p]] = f(x, v, i);
            }
        }
        Ok(grid)
    }

    /// The global equilibrium sampled on this grid layout.
    pub fn maxwellian(
        spatial: Spatial,
        v_axis: VelocityAxis,
        n_i: usize,
        params: &ModelParams,
    ) -> Result<Self> {
        let norm = params.maxwellian_norm();
        let half = params.delta / 2.0 - 1.0;
        Self::from_fn(spatial, v_axis, n_i, params.delta, |_x, v, i| {
            norm * i.powf(half) * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp()
        })
    }

    pub fn spatial(&self) -> &Spatial {
        &self.spatial
    }

    pub fn v_axis(&self) -> VelocityAxis {
        self.v_axis
    }

    pub fn n_i(&self) -> usize {
        self.i_nodes.len()
    }

    pub fn i_nodes(&self) -> &[f64] {
        &self.i_nodes
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_space(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_phase(&self) -> usize {
        self.values.ncols()
    }

    pub fn cell_volume(&self) -> f64 {
        match self.spatial {
            Spatial::Homogeneous => 1.0,
            Spatial::Lattice { n_x, length } => (length / n_x as f64).powi(3),
        }
    }

    pub fn cell_center(&self, c: usize) -> [f64; 3] {
        match self.spatial {
            Spatial::Homogeneous => [0.0; 3],
            Spatial::Lattice { n_x, length } => {
                let dx = length / n_x as f64;
                let iz = c % n_x;
                let iy = (c / n_x) % n_x;
                let ix = c / (n_x * n_x);
                [ix as f64 * dx, iy as f64 * dx, iz as f64 * dx]
            }
        }
    }

    pub fn phase_coords(&self, p: usize) -> ([f64; 3], f64) {
        let n_i = self.i_nodes.len();
        let nv = self.v_axis.n;
        let ii = p % n_i;
        let rest = p / n_i;
        let k3 = rest % nv;
        let k2 = (rest / nv) % nv;
        let k1 = rest / (nv * nv);
        (
            [self.v_axis.node(k1), self.v_axis.node(k2), self.v_axis.node(k3)],
            self.i_nodes[ii],
        )
    }

    pub fn phase_index(&self, k1: usize, k2: usize, k3: usize, ii: usize) -> usize {
        ((k1 * self.v_axis.n + k2) * self.v_axis.n + k3) * self.i_nodes.len() + ii
    }

    /// Quadrature weight of phase node p (velocity cube weight x plain dI
    /// weight), excluding the spatial cell volume.
    pub fn phase_weight(&self, p: usize) -> f64 {
        let h = self.v_axis.step();
        self.i_weights[p % self.i_nodes.len()] * h * h * h
    }

    /// Visit every (cell, node) with its total integration weight.
    pub fn for_each_node(&self, mut f: impl FnMut([f64; 3], [f64; 3], f64, f64, f64)) {
        let vol = self.cell_volume();
        for c in 0..self.n_space() {
            let x = self.cell_center(c);
            for p in 0..self.n_phase() {
                let (v, i) = self.phase_coords(p);
                f(x, v, i, vol * self.phase_weight(p), self.values[[c, p]]);
            }
        }
    }

    /// Conserved moments of F over the whole domain:
    /// (mass, momentum, integral of (|v|^2/2 + I) F).
    pub fn moments(&self) -> (f64, [f64; 3], f64) {
        let mut mass = 0.0;
        let mut mom = [0.0; 3];
        let mut energy = 0.0;
        self.for_each_node(|_x, v, i, w, val| {
            let d = w * val;
            mass += d;
            mom[0] += d * v[0];
            mom[1] += d * v[1];
            mom[2] += d * v[2];
            energy += d * (0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) + i);
        });
        (mass, mom, energy)
    }

    /// Macroscopic state from the grid moments.
    pub fn macro_state(&self) -> Result<MacroState> {
        let (mass, mom, energy) = self.moments();
        let vol = match self.spatial {
            Spatial::Homogeneous => 1.0,
            Spatial::Lattice { length, .. } => length.powi(3),
        };
        MacroState::from_moments(mass / vol, [mom[0] / vol, mom[1] / vol, mom[2] / vol], energy / vol, self.delta)
    }

    /// L2 distance (over the grid measure) between F and a reference
    /// function of (v, I), homogeneous grids only.
    pub fn l2_distance_to(&self, mut reference: impl FnMut([f64; 3], f64) -> f64) -> f64 {
        let mut out = 0.0;
        self.for_each_node(|_x, v, i, w, val| {
            let d = val - reference(v, i);
            out += w * d * d;
        });
        out.sqrt()
    }

    /// Sup over grid nodes of |w(v,I) (F - M)/sqrt(M)|.
    pub fn sup_weighted_perturbation(&self, params: &ModelParams) -> f64 {
        let norm = params.maxwellian_norm();
        let half = params.delta / 2.0 - 1.0;
        let mut sup: f64 = 0.0;
        self.for_each_node(|_x, v, i, _w, val| {
            let m = norm * i.powf(half) * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp();
            let f = (val - m) / m.sqrt();
            let p = PhasePoint { v, i };
            let wgt = crate::model::weight(&p, params);
            sup = sup.max((wgt * f).abs());
        });
        sup
    }

    /// Fraction of |F| mass carried by the outermost velocity layer; a
    /// truncation-leak monitor.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let nv = self.v_axis.n;
        let n_i = self.i_nodes.len();
        let mut total = 0.0;
        let mut boundary = 0.0;
        for c in 0..self.n_space() {
            for p in 0..self.n_phase() {
                let rest = p / n_i;
                let k3 = rest % nv;
                let k2 = (rest / nv) % nv;
                let k1 = rest / (nv * nv);
                let w = self.phase_weight(p) * self.values[[c, p]].abs();
                total += w;
                if k1 == 0 || k1 == nv - 1 || k2 == 0 || k2 == nv - 1 || k3 == 0 || k3 == nv - 1 {
                    boundary += w;
                }
            }
        }
        if total > 0.0 {
            boundary / total
        } else {
            0.0
        }
    }

    /// Reduced values F / I^{delta/2-1} for interpolation.
    pub fn reduced_values(&self) -> Array2<f64> {
        let half = self.delta / 2.0 - 1.0;
        let n_i = self.i_nodes.len();
        let mut out = self.values.clone();
        for ((_, p), v) in out.indexed_iter_mut() {
            let i = self.i_nodes[p % n_i];
            *v /= i.powf(half);
        }
        out
    }

    /// Interpolate reduced values at (v, i) for spatial row `c`:
    /// quadrilinear (trilinear in v, linear in I), zero outside the velocity
    /// box and above the last energy node, constant below the first node.
    pub fn interp_reduced(&self, reduced: &Array2<f64>, c: usize, v: [f64; 3], i: f64) -> f64 {
        let ax = self.v_axis;
        let h = ax.step();
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for d in 0..3 {
            let t = (v[d] + ax.r_v) / h;
            if t < 0.0 || t > (ax.n - 1) as f64 {
                return 0.0;
            }
            let k = (t.floor() as usize).min(ax.n - 2);
            base[d] = k;
            frac[d] = t - k as f64;
        }
        let n_i = self.i_nodes.len();
        // locate I interval
        let (ilo, ihi, fi) = if i <= self.i_nodes[0] {
            (0, 0, 0.0)
        } else if i > *self.i_nodes.last().unwrap() {
            return 0.0;
        } else {
            let hi = self.i_nodes.partition_point(|&x| x < i).min(n_i - 1);
            let lo = hi - 1;
            let t = (i - self.i_nodes[lo]) / (self.i_nodes[hi] - self.i_nodes[lo]);
            (lo, hi, t)
        };
        let row = reduced.row(c);
        let mut out = 0.0;
        for (db, wb) in [(0usize, 1.0 - frac[0]), (1, frac[0])] {
            for (dc, wc) in [(0usize, 1.0 - frac[1]), (1, frac[1])] {
                for (dd, wd) in [(0usize, 1.0 - frac[2]), (1, frac[2])] {
                    let w3 = wb * wc * wd;
                    if w3 == 0.0 {
                        continue;
                    }
                    let pbase =
                        ((base[0] + db) * ax.n + (base[1] + dc)) * ax.n + (base[2] + dd);
                    let lo = row[pbase * n_i + ilo];
                    let hi = row[pbase * n_i + ihi];
                    out += w3 * (lo + fi * (hi - lo));
                }
            }
        }
        out
    }
}
