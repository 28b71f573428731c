//! Synthetic benchmark instances in three conditioning regimes and three
//! shapes, batch execution with error/time aggregation, and the two bundled
//! worked examples (a real 3×12 compliance-estimation problem and a complex
//! 4×4 problem).

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{svd, ComplexDense, DenseMatrix};
use crate::solver::{solve, SolveOptions};

/// Spectrum profile of the generated X.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Standard-normal entries.
    WellConditioned,
    /// Singular values replaced by the geometric sequence α^(i−1) with
    /// α^(min(m,n)−1) = 10⁶, so κ(X) = 10⁶.
    IllConditioned,
    /// The smallest ⌊min(m,n)/2⌋ singular values zeroed.
    RankDeficient,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::WellConditioned => "well",
            Regime::IllConditioned => "ill",
            Regime::RankDeficient => "rankdef",
        }
    }

    fn index(self) -> u64 {
        match self {
            Regime::WellConditioned => 0,
            Regime::IllConditioned => 1,
            Regime::RankDeficient => 2,
        }
    }
}

/// Aspect ratio of the generated matrices; the larger side is `max_dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// n = m = max_dim.
    Square,
    /// m = 2n = max_dim (more columns than rows).
    Wide,
    /// n = 2m = max_dim (more rows than columns).
    Tall,
}

impl Shape {
    pub fn label(self) -> &'static str {
        match self {
            Shape::Square => "square",
            Shape::Wide => "wide",
            Shape::Tall => "tall",
        }
    }

    /// (rows, cols) for a given maximum dimension.
    pub fn dims(self, max_dim: usize) -> (usize, usize) {
        match self {
            Shape::Square => (max_dim, max_dim),
            Shape::Wide => (max_dim / 2, max_dim),
            Shape::Tall => (max_dim, max_dim / 2),
        }
    }

    fn index(self) -> u64 {
        match self {
            Shape::Square => 0,
            Shape::Wide => 1,
            Shape::Tall => 2,
        }
    }
}

/// One benchmark configuration: a (regime, shape) cell run for `trials`
/// independent instances.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub regime: Regime,
    pub shape: Shape,
    pub max_dim: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn new(regime: Regime, shape: Shape, seed: u64) -> Self {
        Scenario {
            regime,
            shape,
            max_dim: 60,
            trials: 20,
            seed,
        }
    }

    pub fn id(&self) -> String {
        format!(
            "{}/{}/{}",
            self.regime.label(),
            self.shape.label(),
            self.max_dim
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_dim < 2 {
            return Err(Error::Argument(format!(
                "max_dim must be at least 2, got {}",
                self.max_dim
            )));
        }
        if self.trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Stream selector: trials and scenarios each get disjoint ChaCha
    /// streams from the same seed, so any subset of trials can be
    /// regenerated independently (and in parallel) with identical results.
    fn stream(&self, trial: usize) -> u64 {
        ((self.regime.index() * 3 + self.shape.index() + 1) << 32) | trial as u64
    }
}

/// The nine (regime × shape) scenarios at a common size, trial count, seed.
pub fn all_scenarios(max_dim: usize, trials: usize, seed: u64) -> Vec<Scenario> {
    let mut out = Vec::new();
    for regime in [
        Regime::WellConditioned,
        Regime::IllConditioned,
        Regime::RankDeficient,
    ] {
        for shape in [Shape::Square, Shape::Wide, Shape::Tall] {
            out.push(Scenario {
                regime,
                shape,
                max_dim,
                trials,
                seed,
            });
        }
    }
    out
}

fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let entries: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DenseMatrix::from_rows(rows, cols, &entries).expect("generated entries are finite")
}

/// Rebuild a matrix from the compact SVD factors of `x0` with a prescribed
/// set of singular values (extra values beyond the numeric rank reuse the
/// orthonormal completion columns, which is exact for square/compact use).
fn rebuild_with_spectrum(x0: &DenseMatrix, values: &[f64]) -> Result<DenseMatrix> {
    let fact = svd(x0, None)?;
    let (n, m) = x0.shape();
    let k = values.len();
    let u = fact.u.block(0, 0, n, k);
    let v = fact.v.block(0, 0, m, k);
    Ok(&(&u * &DenseMatrix::from_diagonal(values)) * &v.transpose())
}

/// Deterministically generate the (X, B) pair for one trial of a scenario.
/// B always has standard-normal entries; X follows the regime recipe.
pub fn gen_instance(s: &Scenario, trial: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    s.validate()?;
    let (n, m) = s.shape.dims(s.max_dim);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    rng.set_stream(s.stream(trial));
    let x0 = randn(&mut rng, n, m);
    let k = n.min(m);
    let x = match s.regime {
        Regime::WellConditioned => x0,
        Regime::IllConditioned => {
            let alpha = 1e6f64.powf(1.0 / (k as f64 - 1.0));
            let values: Vec<f64> = (0..k).map(|i| alpha.powi(i as i32)).collect();
            rebuild_with_spectrum(&x0, &values)?
        }
        Regime::RankDeficient => {
            let fact = svd(&x0, None)?;
            let keep = k - k / 2;
            let mut values = fact.singular_values.clone();
            values.truncate(k);
            for v in values.iter_mut().skip(keep) {
                *v = 0.0;
            }
            rebuild_with_spectrum(&x0, &values)?
        }
    };
    let b = randn(&mut rng, n, m);
    Ok((x, b))
}

/// Aggregated result of one scenario.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub scenario: String,
    pub solver: String,
    /// Mean of 100·‖AX−B‖_F/‖B‖_F over the successful trials.
    pub rel_err_mean: f64,
    pub rel_err_std: f64,
    pub time_mean: f64,
    pub time_std: f64,
    /// Trials whose solve returned an error (excluded from the statistics).
    #[serde(skip)]
    pub failures: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Run every trial of every scenario, aggregating relative errors and wall
/// times. A failing trial is counted in `failures` and skipped; it does not
/// abort the batch.
pub fn run_bench(scenarios: &[Scenario], opts: &SolveOptions) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        s.validate()?;
        let mut errs = Vec::with_capacity(s.trials);
        let mut times = Vec::with_capacity(s.trials);
        let mut failures = 0usize;
        for trial in 0..s.trials {
            let (x, b) = gen_instance(s, trial)?;
            let started = Instant::now();
            match solve(&x, &b, opts) {
                Ok(sol) => {
                    times.push(started.elapsed().as_secs_f64());
                    let denom = b.frobenius_norm();
                    errs.push(if denom > 0.0 {
                        100.0 * sol.objective / denom
                    } else {
                        0.0
                    });
                }
                Err(_) => failures += 1,
            }
        }
        let (rel_err_mean, rel_err_std) = mean_std(&errs);
        let (time_mean, time_std) = mean_std(&times);
        rows.push(BenchRow {
            scenario: s.id(),
            solver: "an-fgm".into(),
            rel_err_mean,
            rel_err_std,
            time_mean,
            time_std,
            failures,
        });
    }
    Ok(rows)
}

/// CSV rendering with the fixed header
/// `scenario,solver,rel_err_mean,rel_err_std,time_mean,time_std`.
pub fn bench_csv_string(rows: &[BenchRow]) -> String {
    let mut out = String::from("scenario,solver,rel_err_mean,rel_err_std,time_mean,time_std\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{:.4},{:.4}\n",
            r.scenario, r.solver, r.rel_err_mean, r.rel_err_std, r.time_mean, r.time_std
        ));
    }
    out
}

/// JSON rendering of the same fields as the CSV.
pub fn bench_json_string(rows: &[BenchRow]) -> Result<String> {
    serde_json::to_string_pretty(rows)
        .map_err(|e| Error::Argument(format!("benchmark serialization failed: {e}")))
}

/// Names accepted by [`builtin_example`].
pub const BUILTIN_EXAMPLE_NAMES: [&str; 2] = ["compliance", "complex"];

/// The bundled 3×12 local-compliance estimation pair. The sources list Xᵀ
/// and Bᵀ (12×3, two digits); this returns X and B themselves, so the
/// solution matrix is 3×3.
pub fn compliance_example() -> (DenseMatrix, DenseMatrix) {
    #[rustfmt::skip]
    const XT: [f64; 36] = [
        -0.32,  0.03, 0.06,
        -0.33, -0.02, 0.06,
        -0.36,  0.08, 0.06,
        -0.30,  0.03, 0.05,
        -0.32, -0.00, 0.07,
        -0.34,  0.07, 0.05,
        -0.24,  0.07, 0.05,
        -0.21, -0.01, 0.02,
        -0.33,  0.16, 0.10,
        -0.25,  0.09, 0.06,
        -0.22,  0.00, 0.03,
        -0.31,  0.15, 0.09,
    ];
    #[rustfmt::skip]
    const BT: [f64; 36] = [
        -1.43,  0.15, -0.44,
        -1.40, -0.31, -0.42,
        -1.38,  0.44, -0.42,
        -1.43,  0.14, -0.44,
        -1.40, -0.31, -0.42,
        -1.37,  0.43, -0.42,
        -1.43,  0.16, -0.43,
        -1.40, -0.32, -0.42,
        -1.38,  0.42, -0.43,
        -1.43,  0.15, -0.44,
        -1.40, -0.33, -0.42,
        -1.37,  0.42, -0.44,
    ];
    let xt = DenseMatrix::from_rows(12, 3, &XT).expect("constant data");
    let bt = DenseMatrix::from_rows(12, 3, &BT).expect("constant data");
    (xt.transpose(), bt.transpose())
}

/// The reference 3×3 solution of the compliance example, printed to four
/// digits from data rounded to two digits.
pub fn compliance_reference_solution() -> DenseMatrix {
    #[rustfmt::skip]
    const A: [f64; 9] = [
         5.0392,  0.4423,  1.5978,
        -0.6207,  6.0223, -6.8559,
         1.8979, -0.4079,  2.7600,
    ];
    DenseMatrix::from_rows(3, 3, &A).expect("constant data")
}

/// The bundled complex 4×4 pair.
pub fn complex_example() -> (ComplexDense, ComplexDense) {
    #[rustfmt::skip]
    const X_RE: [f64; 16] = [
         0.4694,  0.5354,  0.1326, -0.0787,
        -0.9036,  0.5529,  1.5929, -0.6817,
         0.0359, -0.2037,  1.0184, -1.0246,
        -0.6275, -2.0543, -1.5804, -1.2344,
    ];
    #[rustfmt::skip]
    const X_IM: [f64; 16] = [
         0.2888, -0.4650, -1.3573, -1.3813,
        -0.4293,  0.3710, -1.0226,  0.3155,
         0.0558,  0.7283,  1.0378,  1.5532,
        -0.3679,  2.1122, -0.3898,  0.7079,
    ];
    #[rustfmt::skip]
    const B_RE: [f64; 16] = [
         0.0112, -0.9898,  1.1380, -0.3306,
        -0.6451,  1.3396, -0.6841, -0.8436,
         0.8057,  0.2895, -1.2919,  0.4978,
         0.2316,  1.4789, -0.0729,  1.4885,
    ];
    #[rustfmt::skip]
    const B_IM: [f64; 16] = [
        -0.5465, -0.8542,  0.4853, -0.0793,
        -0.8468, -1.2013, -0.5955,  1.5352,
        -0.2463, -0.1199, -0.1497, -0.6065,
         0.6630, -0.0653, -0.4348, -1.3474,
    ];
    let x = ComplexDense::new(
        DenseMatrix::from_rows(4, 4, &X_RE).expect("constant data"),
        DenseMatrix::from_rows(4, 4, &X_IM).expect("constant data"),
    )
    .expect("constant data");
    let b = ComplexDense::new(
        DenseMatrix::from_rows(4, 4, &B_RE).expect("constant data"),
        DenseMatrix::from_rows(4, 4, &B_IM).expect("constant data"),
    )
    .expect("constant data");
    (x, b)
}

/// Frobenius error of the best symmetric-PSD fit on the complex example, as
/// recorded alongside the original data; the asymmetric solver must beat it.
pub const COMPLEX_EXAMPLE_SYMMETRIC_PSD_ERROR: f64 = 4.19;
