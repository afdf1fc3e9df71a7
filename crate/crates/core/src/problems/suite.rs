use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::burgers::Burgers;
use super::closed_form::{
    kdv_soliton, kdv_two_soliton, km_breather, km_breather_field, periodize, BreatherParams,
    SolitonParams, TwoSolitonParams,
};
use super::elliptic::{elliptic_solve_1d_nodal, elliptic_solve_2d_nodal};
use super::operators::{
    compose_periodic, parametric_ode_solution, target_derivative, target_integrate,
    target_shift_product,
};
use super::random::{random_function, sample_rng};
use crate::error::{Error, Result};
use crate::spectral::{
    analysis, chop, chop_axis, interpolate_to_grid, pad_axis, Basis, CoeffSeries, GridFunction,
    GridKind,
};

/// Benchmark problems. All but `Identity` belong to the benchmark table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    Identity,
    Integration,
    Shift,
    Derivative,
    DerivativeK20,
    Ode,
    Elliptic,
    BurgersNu01,
    BurgersNu001,
    Kdv,
    Kdv2,
    #[serde(rename = "elliptic_2d")]
    Elliptic2d,
    BurgersNu01Xt,
    BurgersNu001Xt,
    KdvXt,
    Kdv2Xt,
    BreatherXt,
}

impl ProblemId {
    pub const ALL: [ProblemId; 17] = [
        ProblemId::Identity,
        ProblemId::Integration,
        ProblemId::Shift,
        ProblemId::Derivative,
        ProblemId::DerivativeK20,
        ProblemId::Ode,
        ProblemId::Elliptic,
        ProblemId::BurgersNu01,
        ProblemId::BurgersNu001,
        ProblemId::Kdv,
        ProblemId::Kdv2,
        ProblemId::Elliptic2d,
        ProblemId::BurgersNu01Xt,
        ProblemId::BurgersNu001Xt,
        ProblemId::KdvXt,
        ProblemId::Kdv2Xt,
        ProblemId::BreatherXt,
    ];

    /// The sixteen problems of the benchmark table.
    pub fn benchmark() -> &'static [ProblemId] {
        &Self::ALL[1..]
    }

    pub fn name(self) -> &'static str {
        use ProblemId::*;
        match self {
            Identity => "identity",
            Integration => "integration",
            Shift => "shift",
            Derivative => "derivative",
            DerivativeK20 => "derivative_k20",
            Ode => "ode",
            Elliptic => "elliptic",
            BurgersNu01 => "burgers_nu01",
            BurgersNu001 => "burgers_nu001",
            Kdv => "kdv",
            Kdv2 => "kdv2",
            Elliptic2d => "elliptic_2d",
            BurgersNu01Xt => "burgers_nu01_xt",
            BurgersNu001Xt => "burgers_nu001_xt",
            KdvXt => "kdv_xt",
            Kdv2Xt => "kdv2_xt",
            BreatherXt => "breather_xt",
        }
    }

    pub fn dim(self) -> usize {
        use ProblemId::*;
        match self {
            Elliptic2d | BurgersNu01Xt | BurgersNu001Xt | KdvXt | Kdv2Xt | BreatherXt => 2,
            _ => 1,
        }
    }

    /// Input band `(k_min, k_max)` of the random family, if any.
    pub fn default_band(self) -> Option<(usize, usize)> {
        use ProblemId::*;
        match self {
            Identity | Derivative => Some((0, 10)),
            Integration => Some((1, 10)),
            Shift => Some((0, 15)),
            DerivativeK20 | Elliptic | Elliptic2d => Some((0, 20)),
            BurgersNu01 | BurgersNu001 | BurgersNu01Xt | BurgersNu001Xt => Some((0, 20)),
            Ode => Some((1, 30)),
            Kdv | Kdv2 | KdvXt | Kdv2Xt | BreatherXt => None,
        }
    }

    /// Lowest input wavenumber the problem accepts.
    pub fn min_wavenumber(self) -> usize {
        match self {
            ProblemId::Integration => 1,
            _ => 0,
        }
    }

    /// Viscosity of the Burgers problems.
    pub fn default_nu(self) -> Option<f64> {
        use ProblemId::*;
        match self {
            BurgersNu01 | BurgersNu01Xt => Some(0.1),
            BurgersNu001 | BurgersNu001Xt => Some(0.01),
            _ => None,
        }
    }

    /// Per-axis resolution used when none is given.
    pub fn default_resolution(self) -> usize {
        if self.dim() == 1 {
            100
        } else {
            32
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown problem {s}")))
    }
}

/// Settings of dataset generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DataOptions {
    /// Coefficients per axis: `n` Chebyshev coefficients or `n / 2 + 1`
    /// packed Fourier coefficients. `0` selects the problem default.
    pub resolution: usize,
    /// Overrides the input band of random-family problems.
    pub band: Option<(usize, usize)>,
    pub sigma: f64,
    /// Overrides the Burgers viscosity.
    pub nu: Option<f64>,
    /// Burgers time step.
    pub dt: f64,
}

impl Default for DataOptions {
    fn default() -> Self {
        Self {
            resolution: 0,
            band: None,
            sigma: 2.0,
            nu: None,
            dt: 1e-4,
        }
    }
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub problem: ProblemId,
    pub count: usize,
    pub seed: u64,
    /// Index of the first sample's random stream.
    pub first_index: u64,
    pub resolution: usize,
    pub band: Option<(usize, usize)>,
    pub sigma: f64,
    /// Solver settings (viscosity, time step, grid, final time).
    pub solver: BTreeMap<String, f64>,
    /// Sampled closed-form parameters, one map per sample.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<BTreeMap<String, f64>>,
}

/// Input and target series of one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub inputs: Vec<CoeffSeries>,
    pub targets: Vec<CoeffSeries>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Writes `manifest.json`, `inputs.specf` and `targets.specf`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(dir.join("manifest.json"), text)?;
        crate::spectral::io::save(dir.join("inputs.specf"), &self.inputs)?;
        crate::spectral::io::save(dir.join("targets.specf"), &self.targets)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest: DatasetManifest =
            serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
        let inputs = crate::spectral::io::load(dir.join("inputs.specf"))?;
        let targets = crate::spectral::io::load(dir.join("targets.specf"))?;
        if inputs.len() != manifest.count || targets.len() != manifest.count {
            return Err(Error::Format("sample count disagrees with the manifest".into()));
        }
        Ok(Self {
            manifest,
            inputs,
            targets,
        })
    }
}

/// Generates `count` samples whose random streams are
/// `first_index..first_index + count` of `seed`.
pub fn build_dataset(
    problem: ProblemId,
    count: usize,
    seed: u64,
    first_index: u64,
    opts: &DataOptions,
) -> Result<Dataset> {
    let n = if opts.resolution == 0 {
        problem.default_resolution()
    } else {
        opts.resolution
    };
    if n < 4 {
        return Err(Error::InvalidArgument(format!("resolution {n} is below 4")));
    }
    let band = opts.band.or(problem.default_band());
    if let Some((lo, hi)) = band {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty band [{lo}, {hi}]")));
        }
    }
    let gen = Generator {
        problem,
        n,
        band,
        sigma: opts.sigma,
        nu: opts.nu.or(problem.default_nu()),
        dt: opts.dt,
    };
    let mut inputs = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    let mut parameters = Vec::new();
    for j in 0..count as u64 {
        let mut rng = sample_rng(seed, first_index + j);
        let s = gen
            .sample(&mut rng)
            .map_err(|e| Error::Solver(format!("sample {}: {e}", first_index + j)))?;
        inputs.push(s.input);
        targets.push(s.target);
        if !s.params.is_empty() {
            parameters.push(s.params);
        }
    }
    Ok(Dataset {
        manifest: DatasetManifest {
            problem,
            count,
            seed,
            first_index,
            resolution: n,
            band,
            sigma: opts.sigma,
            solver: gen.solver_meta(),
            parameters,
        },
        inputs,
        targets,
    })
}

struct Sample {
    input: CoeffSeries,
    target: CoeffSeries,
    params: BTreeMap<String, f64>,
}

struct Generator {
    problem: ProblemId,
    n: usize,
    band: Option<(usize, usize)>,
    sigma: f64,
    nu: Option<f64>,
    dt: f64,
}

impl Generator {
    fn packed(&self) -> usize {
        self.n / 2 + 1
    }

    fn burgers_grid(&self) -> usize {
        (2 * self.n).max(64)
    }

    fn final_time(&self) -> Option<f64> {
        use ProblemId::*;
        match self.problem {
            BurgersNu01 | BurgersNu001 | BurgersNu01Xt | BurgersNu001Xt => Some(1.0),
            Kdv | KdvXt => Some(0.001),
            Kdv2 | Kdv2Xt => Some(0.005),
            BreatherXt => Some(5.0),
            _ => None,
        }
    }

    fn solver_meta(&self) -> BTreeMap<String, f64> {
        use ProblemId::*;
        let mut m = BTreeMap::new();
        if let Some(t) = self.final_time() {
            m.insert("final_time".into(), t);
        }
        match self.problem {
            BurgersNu01 | BurgersNu001 | BurgersNu01Xt | BurgersNu001Xt => {
                m.insert("nu".into(), self.nu.unwrap_or(0.1));
                m.insert("dt".into(), self.dt);
                m.insert("grid".into(), self.burgers_grid() as f64);
            }
            Elliptic => {
                m.insert("grid".into(), (2 * self.n) as f64);
            }
            Elliptic2d => {
                m.insert("grid".into(), self.n as f64);
            }
            _ => {}
        }
        m
    }

    fn random<R: Rng>(&self, rng: &mut R) -> CoeffSeries {
        let (lo, hi) = self.band.expect("random-family problem");
        let f = random_function(lo, hi, self.sigma, rng);
        fit_fourier(&f, self.packed())
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Result<Sample> {
        use ProblemId::*;
        let len = self.packed();
        let n = self.n;
        let mut params = BTreeMap::new();
        let (input, target) = match self.problem {
            Identity => {
                let f = self.random(rng);
                (f.clone(), f)
            }
            Integration => {
                let f = self.random(rng);
                let t = fit_fourier(&target_integrate(&f)?, len);
                (f, t)
            }
            Shift => {
                let f = self.random(rng);
                let t = fit_fourier(&target_shift_product(&f)?, len);
                (f, t)
            }
            Derivative | DerivativeK20 => {
                let f = self.random(rng);
                let t = fit_fourier(&target_derivative(&f)?, len);
                (f, t)
            }
            Ode => {
                let f = self.random(rng);
                let t = parametric_ode_solution(&f, len)?;
                (f, t)
            }
            Elliptic => {
                let g = self.random(rng);
                let k = compose_periodic(&g, len, |v| 10.0 * (v.tanh() + 1.0) + 1.0)?;
                let m = 2 * n;
                let kv = interpolate_to_grid(&k, &[m], &[GridKind::Chebyshev])?.real_values();
                let u = elliptic_solve_1d_nodal(&kv, &vec![1.0; m])?;
                let t = analysis(&GridFunction::from_real(GridKind::Chebyshev, &u)?, true)?;
                (k, chop(&t, n))
            }
            Elliptic2d => {
                let k = |rng: &mut R| -> Result<Vec<f64>> {
                    let g = self.random(rng);
                    let kv = compose_periodic(&g, len, |v| 3.0 * (v.tanh() + 1.0) + 1.0)?;
                    Ok(interpolate_to_grid(&kv, &[n], &[GridKind::Chebyshev])?.real_values())
                };
                let kx = k(rng)?;
                let ky = k(rng)?;
                let u = elliptic_solve_2d_nodal(&kx, &ky, &vec![1.0; n * n])?;
                let grid = |v: Vec<f64>| {
                    GridFunction::new(
                        vec![GridKind::Chebyshev; 2],
                        vec![n, n],
                        v.into_iter().map(|x| C64::new(x, 0.0)).collect(),
                    )
                };
                let kk: Vec<f64> = kx.iter().flat_map(|a| ky.iter().map(move |b| a * b)).collect();
                (analysis(&grid(kk)?, true)?, analysis(&grid(u)?, true)?)
            }
            BurgersNu01 | BurgersNu001 => {
                let f = self.random(rng);
                let solver = Burgers::new(self.nu.unwrap_or(0.1), self.dt, self.burgers_grid())?;
                let u = solver.solve(&f, &[1.0])?.remove(0);
                (f, fit_fourier(&u, len))
            }
            BurgersNu01Xt | BurgersNu001Xt => {
                let f = self.random(rng);
                let solver = Burgers::new(self.nu.unwrap_or(0.1), self.dt, self.burgers_grid())?;
                let nodes = GridKind::Chebyshev.nodes(n)?;
                let mut times: Vec<f64> = nodes.iter().map(|s| (1.0 + s) / 2.0).collect();
                times.reverse();
                let snaps = solver.solve(&f, &times)?;
                let m = 4 * len;
                let mut values = vec![C64::new(0.0, 0.0); n * m];
                for (i, snap) in snaps.iter().rev().enumerate() {
                    let row = interpolate_to_grid(snap, &[m], &[GridKind::Uniform])?;
                    values[i * m..(i + 1) * m].copy_from_slice(row.values());
                }
                let g = GridFunction::new(vec![GridKind::Chebyshev, GridKind::Uniform], vec![n, m], values)?;
                let t = chop_axis(&analysis(&g, true)?, 1, len);
                (broadcast_in_t(&f, n)?, t)
            }
            Kdv | KdvXt => {
                let p = SolitonParams::sample(rng);
                params.insert("a".into(), p.a);
                params.insert("x0".into(), p.x0);
                let field = |x: f64, t: f64| periodize(|y| kdv_soliton(&p, y, t), x, &[p.center(t)]);
                self.kdv_pair(field)?
            }
            Kdv2 | Kdv2Xt => {
                let p = TwoSolitonParams::sample(rng);
                params.insert("a1".into(), p.a1);
                params.insert("a2".into(), p.a2);
                let field = |x: f64, t: f64| periodize(|y| kdv_two_soliton(&p, y, t), x, &p.centers(t));
                self.kdv_pair(field)?
            }
            BreatherXt => {
                let b = BreatherParams::sample(rng);
                params.insert("nu".into(), b.nu);
                let m = 4 * n;
                let x0 = GridFunction::sample(GridKind::Chebyshev, m, |x| km_breather_field(&b, x, 0.0).re)?;
                let input = broadcast_in_t(&chop(&analysis(&x0, true)?, n), n)?;
                let t_end = 5.0;
                let g = GridFunction::sample_2d([GridKind::Chebyshev; 2], [m, m], |s, x| {
                    C64::new(km_breather(&b, x, t_end * (1.0 + s) / 2.0), 0.0)
                })?;
                (input, chop(&analysis(&g, true)?, n))
            }
        };
        Ok(Sample {
            input,
            target,
            params,
        })
    }

    /// Initial state and final state (1d) or space-time field (2d) of a
    /// KdV closed form sampled on an oversampled grid.
    fn kdv_pair(&self, field: impl Fn(f64, f64) -> f64) -> Result<(CoeffSeries, CoeffSeries)> {
        let len = self.packed();
        let t_end = self.final_time().expect("KdV problems have a final time");
        let m = 8 * len;
        let at = |t: f64| -> Result<CoeffSeries> {
            let g = GridFunction::sample(GridKind::Uniform, m, |x| field(x, t))?;
            Ok(chop(&analysis(&g, true)?, len))
        };
        let u0 = at(0.0)?;
        if self.problem.dim() == 1 {
            return Ok((u0, at(t_end)?));
        }
        let n = self.n;
        let g = GridFunction::sample_2d([GridKind::Chebyshev, GridKind::Uniform], [n, m], |s, x| {
            C64::new(field(x, t_end * (1.0 + s) / 2.0), 0.0)
        })?;
        let t = chop_axis(&analysis(&g, true)?, 1, len);
        Ok((broadcast_in_t(&u0, n)?, t))
    }
}

/// Packed Fourier series of exactly `len` coefficients.
fn fit_fourier(f: &CoeffSeries, len: usize) -> CoeffSeries {
    pad_axis(&chop_axis(f, 0, len), 0, len)
}

/// A function of `x` as a constant-in-`t` series on `[Chebyshev t, x]`.
pub fn broadcast_in_t(f: &CoeffSeries, nt: usize) -> Result<CoeffSeries> {
    if f.dim() != 1 {
        return Err(Error::Shape("expected a 1d series".into()));
    }
    let len = f.len();
    let mut c = vec![C64::new(0.0, 0.0); nt * len];
    c[..len].copy_from_slice(f.coeffs());
    CoeffSeries::new(vec![Basis::Chebyshev, f.basis()], vec![nt, len], c, f.real_signal())
}
