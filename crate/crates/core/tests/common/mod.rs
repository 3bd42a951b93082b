//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nonequibath::{FieldSpec, Generator, LevelSystem, StateVector, ThreeLevelParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generic three-level instance with every line coupled.
#[derive(Debug, Clone)]
pub struct ThreeLevel {
    pub system: LevelSystem,
    pub field: FieldSpec,
    /// `[omega1, omega2, omega3]` = `[e2 - e1, e3 - e1, e3 - e2]`.
    pub omegas: [f64; 3],
    pub betas: [f64; 3],
    pub intensities: [f64; 3],
    /// `(d12, d13, d23)`.
    pub dipoles: (f64, f64, f64),
}

impl ThreeLevel {
    pub fn new(
        energies: [f64; 3],
        dipoles: (f64, f64, f64),
        intensities: [f64; 3],
        betas: [f64; 3],
    ) -> Self {
        let (d12, d13, d23) = dipoles;
        let d = vec![
            vec![0.0, d12, d13],
            vec![d12, 0.0, d23],
            vec![d13, d23, 0.0],
        ];
        let system = LevelSystem::new(energies.to_vec(), d).unwrap();
        let omegas = [
            energies[1] - energies[0],
            energies[2] - energies[0],
            energies[2] - energies[1],
        ];
        let field =
            FieldSpec::from_betas((0..3).map(|k| (omegas[k], intensities[k], betas[k]))).unwrap();
        Self {
            system,
            field,
            omegas,
            betas,
            intensities,
            dipoles,
        }
    }

    pub fn params(&self) -> ThreeLevelParams {
        ThreeLevelParams::new(self.omegas, self.dipoles, self.intensities, self.betas).unwrap()
    }

    pub fn generator(&self) -> Generator {
        nonequibath::kinetics::build_generator(&self.system, &self.field).unwrap()
    }
}

/// Energies `(0, e2, e3)` with Bohr frequencies kept well apart.
pub fn random_energies<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let w1: f64 = rng.gen_range(0.5..1.5);
        let w3 = rng.gen_range(0.5..1.5);
        if (w1 - w3).abs() > 0.05 {
            return [0.0, w1, w1 + w3];
        }
    }
}

/// beta in [0.1, 5], I in [0.1, 10], d in [0.1, 1].
pub fn random_three_level<R: Rng>(rng: &mut R) -> ThreeLevel {
    let energies = random_energies(rng);
    let dipoles = (
        rng.gen_range(0.1..1.0),
        rng.gen_range(0.1..1.0),
        rng.gen_range(0.1..1.0),
    );
    let intensities = [(); 3].map(|_| rng.gen_range(0.1..10.0));
    let betas = [(); 3].map(|_| rng.gen_range(0.1..5.0));
    ThreeLevel::new(energies, dipoles, intensities, betas)
}

/// Uniform point on the probability simplex.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> StateVector {
    let x: Vec<f64> = (0..n).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
    StateVector::normalized(x).unwrap()
}

/// Stationary distribution from the Markov chain tree theorem: the weight of
/// state `r` is the sum over spanning trees directed into `r` of the product
/// of their rates. `rates[i][j]` is the rate of the jump `i -> j`.
pub fn tree_theorem_stationary(rates: &[Vec<f64>]) -> Vec<f64> {
    let n = rates.len();
    assert!(n <= 6, "brute force enumeration only");
    let mut weights = vec![0.0; n];
    for (root, weight) in weights.iter_mut().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let total = n.pow(others.len() as u32);
        for code in 0..total {
            let mut parent = vec![usize::MAX; n];
            let mut c = code;
            for &v in &others {
                parent[v] = c % n;
                c /= n;
            }
            let mut product = 1.0;
            let mut is_tree = true;
            for &v in &others {
                if parent[v] == v {
                    is_tree = false;
                    break;
                }
                product *= rates[v][parent[v]];
                // following parents from v must reach the root within n steps
                let mut u = v;
                let mut steps = 0;
                while u != root && steps <= n {
                    u = parent[u];
                    steps += 1;
                }
                if u != root {
                    is_tree = false;
                    break;
                }
            }
            if is_tree {
                *weight += product;
            }
        }
    }
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

/// Jump rates `i -> j` read off the off-diagonal generator entries.
pub fn jump_rates(gen: &Generator) -> Vec<Vec<f64>> {
    let m = gen.matrix();
    let n = gen.dim();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { m[(j, i)] }).collect())
        .collect()
}

/// Smallest non-zero |Re lambda| over the generator spectrum.
pub fn spectral_gap(gen: &Generator) -> f64 {
    let scale = gen.max_abs_entry();
    gen.matrix()
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re.abs())
        .filter(|&r| r > 1e-9 * scale)
        .fold(f64::INFINITY, f64::min)
}

/// `exp(t L) rho0` through the dense matrix exponential.
pub fn exact_propagation(gen: &Generator, rho0: &StateVector, t: f64) -> Vec<f64> {
    let p: DMatrix<f64> = (gen.matrix() * t).exp();
    let v = p * nalgebra::DVector::from_column_slice(rho0.as_slice());
    v.iter().copied().collect()
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}
