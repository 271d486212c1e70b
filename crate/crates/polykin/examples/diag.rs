use polykin::kernel::*;
use polykin::model::*;
use polykin::quadrature::QuadratureSpec;

fn main() {
    let params = ModelParams::default();
    let quad = QuadratureSpec::default();
    let norm = params.maxwellian_norm();
    let delta = params.delta;
    let sqrt_m = move |v: [f64; 3], i: f64| {
        (norm * i.powf(delta / 2.0 - 1.0)
            * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp())
        .sqrt()
    };
    for (v, i) in [([0.6, 0.0, 0.0], 0.8)] {
        let p = PhasePoint::new(v, i).unwrap();
        let nu_v = nu(&p, &params, &quad).unwrap();
        let sm = sqrt_m(v, i);
        // k1 only: integrate k1 * sqrt(M_*) with a fine brute-force grid
        let k1_part = brute_outer(&p, &params, &quad, |kp: &KernelPoint| k1(kp, &params));
        let k2_part = brute_outer(&p, &params, &quad, |kp: &KernelPoint| k2(kp, &params, &quad).unwrap_or(0.0));
        println!("p=({:?},{}) nu*sqrtM={:.6} k1_int={:.6} (expect {:.6}) k2_int={:.6} (expect {:.6})",
            v, i, nu_v*sm, k1_part, nu_v*sm, k2_part, 2.0*nu_v*sm);
    }
}

fn brute_outer(p: &PhasePoint, params: &ModelParams, quad: &QuadratureSpec, ker: impl Fn(&KernelPoint) -> f64) -> f64 {
    // dumb dense spherical integration: s, costheta, I_* (azimuth symmetric for sqrt M)
    let norm = params.maxwellian_norm();
    let delta = params.delta;
    let sqrt_m = move |v: [f64; 3], i: f64| {
        (norm * i.powf(delta / 2.0 - 1.0)
            * (-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - i).exp())
        .sqrt()
    };
    let speed = p.speed();
    let n_s = 150; let n_c = 40; let n_i = 30;
    let s_max = speed + 22.0;
    let ds = (s_max - quad.r_min) / n_s as f64;
    let imax = 40.0; let di = imax / n_i as f64;
    let mut total = 0.0;
    for a in 0..n_s {
        let s = quad.r_min + (a as f64 + 0.5) * ds;
        for b in 0..n_c {
            let mu = -1.0 + (b as f64 + 0.5) * 2.0 / n_c as f64;
            let sint = (1.0 - mu * mu).max(0.0).sqrt();
            // frame: e3 along v (or z)
            let e3 = if speed > 1e-12 { [p.v[0]/speed, p.v[1]/speed, p.v[2]/speed] } else { [0.0,0.0,1.0] };
            // any perpendicular
            let e1 = if e3[0].abs() < 0.9 {
                let mut t = [0.0, -e3[2], e3[1]]; let n = (t[1]*t[1]+t[2]*t[2]).sqrt(); t[1]/=n; t[2]/=n; t
            } else { [0.0, 1.0, 0.0] };
            let dir = [sint*e1[0] + mu*e3[0], sint*e1[1] + mu*e3[1], sint*e1[2] + mu*e3[2]];
            let vs = [p.v[0]-s*dir[0], p.v[1]-s*dir[1], p.v[2]-s*dir[2]];
            for c in 0..n_i {
                let istar = (c as f64 + 0.5) * di;
                let kp = KernelPoint::new(*p, PhasePoint { v: vs, i: istar });
                total += ds * (2.0/n_c as f64) * di * 2.0*std::f64::consts::PI * s*s * ker(&kp) * sqrt_m(vs, istar);
            }
        }
    }
    total
}
