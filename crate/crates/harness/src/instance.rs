//! Seeded problem instances for the experiment families.

use std::sync::Arc;

use adasmooth::linops::Blur;
use adasmooth::oracle::solve_standard_form;
use adasmooth::problems::{build_constrained, build_deblur, build_l1l1, build_sqrt_lasso};
use adasmooth::prox::SetSpec;
use adasmooth::solvers::{ConstrainedProblem, HalfSquaredNorm};
use adasmooth::{CompositeProblem, LinearMap, Phi, ProxFn, Regularizer, SmoothTerm};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::image::synthetic_image;
use crate::rng::GaussianStream;

/// Half-width of the box `U` in the constrained family.
pub const CONSTRAINED_BOX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    L1l1Lasso,
    SqrtLasso,
    DeblurL1,
    DeblurL2,
    ConstrainedLp,
}

impl Family {
    pub fn is_image(self) -> bool {
        matches!(self, Family::DeblurL1 | Family::DeblurL2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::L1l1Lasso => "l1l1-lasso",
            Family::SqrtLasso => "sqrt-lasso",
            Family::DeblurL1 => "deblur-l1",
            Family::DeblurL2 => "deblur-l2",
            Family::ConstrainedLp => "constrained-lp",
        }
    }
}

/// How the data matrix is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Design {
    #[default]
    Gaussian,
    /// `B = I_p`, so `n = p`; lets the double-prox variant run on the regression families.
    Identity,
}

fn default_p() -> usize {
    100
}
fn default_n() -> usize {
    35
}
fn default_s() -> usize {
    10
}
fn default_side() -> usize {
    64
}
fn default_noise() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default = "default_side")]
    pub height: usize,
    #[serde(default = "default_side")]
    pub width: usize,
    pub lambda: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub correlated: bool,
    /// Standard deviation of the additive Gaussian noise.
    #[serde(default = "default_noise")]
    pub noise_sigma: f64,
    #[serde(default)]
    pub design: Design,
}

impl InstanceSpec {
    /// Desk-scale defaults for a family.
    pub fn desk(family: Family, lambda: f64, seed: u64) -> Self {
        InstanceSpec {
            family,
            p: default_p(),
            n: default_n(),
            s: default_s(),
            height: default_side(),
            width: default_side(),
            lambda,
            seed,
            correlated: false,
            noise_sigma: if family.is_image() { 0.01 } else { default_noise() },
            design: Design::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(HarnessError::config("lambda must be finite and nonnegative"));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(HarnessError::config("noise_sigma must be finite and nonnegative"));
        }
        if self.family.is_image() {
            if self.height == 0 || self.width == 0 || !self.height.is_multiple_of(16) || !self.width.is_multiple_of(16)
            {
                return Err(HarnessError::config("image sides must be positive multiples of 16"));
            }
            if self.design != Design::Gaussian {
                return Err(HarnessError::config(
                    "the design option applies to the regression families only",
                ));
            }
            return Ok(());
        }
        if self.p == 0 || self.rows() == 0 {
            return Err(HarnessError::config("p and n must be positive"));
        }
        if self.s > self.p {
            return Err(HarnessError::config(format!(
                "sparsity s = {} exceeds p = {}",
                self.s, self.p
            )));
        }
        if self.design == Design::Identity && self.family == Family::ConstrainedLp {
            return Err(HarnessError::config("the constrained family needs a Gaussian design"));
        }
        Ok(())
    }

    /// Number of rows of `B`.
    pub fn rows(&self) -> usize {
        match self.design {
            Design::Gaussian => self.n,
            Design::Identity => self.p,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance specs always serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: InstanceSpec = toml::from_str(text).map_err(|e| HarnessError::config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Header lines recording how the data was drawn.
    pub fn notes(&self) -> Vec<(String, String)> {
        let mut notes = vec![
            ("family".to_string(), self.family.name().to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("lambda".to_string(), format!("{:e}", self.lambda)),
            (
                "noise".to_string(),
                format!("gaussian, standard deviation {:e}", self.noise_sigma),
            ),
            ("rng".to_string(), "chacha8 with box-muller normals".to_string()),
        ];
        if self.family.is_image() {
            notes.push((
                "image".to_string(),
                format!("{}x{} synthetic, 9x9 gaussian blur", self.height, self.width),
            ));
        } else {
            notes.push((
                "dims".to_string(),
                format!("p={} n={} s={}", self.p, self.rows(), self.s),
            ));
            if self.correlated {
                notes.push((
                    "correlation".to_string(),
                    "column j (0-based odd) = 0.5 * column j-1 + fresh gaussian".to_string(),
                ));
            }
        }
        notes
    }
}

/// `(B, b, x_natural)`: for the image families `B` is the blur, `b` the degraded
/// image and `x_natural` the clean one.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub design: LinearMap<f64>,
    pub rhs: Vec<f64>,
    pub natural: Vec<f64>,
}

pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let mut stream = GaussianStream::new(spec.seed);
    if spec.family.is_image() {
        let truth = synthetic_image(spec.height, spec.width);
        let blur = Blur::gaussian_default(spec.height, spec.width)?;
        let design = LinearMap::Blur(blur);
        let rhs = add_noise(design.apply(&truth)?, spec.noise_sigma, &mut stream);
        return Ok(Instance {
            design,
            rhs,
            natural: truth,
        });
    }
    let (rows, cols) = (spec.rows(), spec.p);
    let data = match spec.design {
        Design::Identity => {
            let mut d = vec![0.0; cols * cols];
            for i in 0..cols {
                d[i * cols + i] = 1.0;
            }
            d
        }
        Design::Gaussian => {
            let mut d = stream.normals(rows * cols);
            if spec.correlated {
                for j in (1..cols).step_by(2) {
                    for i in 0..rows {
                        d[i * cols + j] += 0.5 * d[i * cols + j - 1];
                    }
                }
            }
            d
        }
    };
    let mut natural = vec![0.0; cols];
    for idx in stream.sample_indices(cols, spec.s) {
        natural[idx] = stream.normal();
    }
    let design = LinearMap::dense(rows, cols, data)?;
    let rhs = add_noise(design.apply(&natural)?, spec.noise_sigma, &mut stream);
    Ok(Instance { design, rhs, natural })
}

fn add_noise(mut v: Vec<f64>, sigma: f64, stream: &mut GaussianStream) -> Vec<f64> {
    if sigma > 0.0 {
        for x in &mut v {
            *x += sigma * stream.normal();
        }
    }
    v
}

#[derive(Debug, Clone)]
pub enum BuiltProblem {
    Composite(CompositeProblem<f64>),
    Constrained(ConstrainedProblem<f64>),
}

impl BuiltProblem {
    pub fn composite(&self) -> Result<&CompositeProblem<f64>> {
        match self {
            BuiltProblem::Composite(p) => Ok(p),
            BuiltProblem::Constrained(_) => Err(HarnessError::config(
                "the constrained family runs with dual-primal only",
            )),
        }
    }

    pub fn constrained(&self) -> Result<&ConstrainedProblem<f64>> {
        match self {
            BuiltProblem::Constrained(p) => Ok(p),
            BuiltProblem::Composite(_) => Err(HarnessError::config("dual-primal needs the constrained-lp family")),
        }
    }
}

/// The family's problem, with `U` the dual-norm ball of the fidelity term.
pub fn build_problem(spec: &InstanceSpec, inst: &Instance) -> Result<BuiltProblem> {
    let b = inst.rhs.clone();
    let problem = match spec.family {
        Family::L1l1Lasso => BuiltProblem::Composite(build_l1l1(inst.design.clone(), b, spec.lambda)?),
        Family::SqrtLasso => BuiltProblem::Composite(build_sqrt_lasso(inst.design.clone(), b, spec.lambda)?),
        Family::DeblurL1 | Family::DeblurL2 => {
            let LinearMap::Blur(blur) = &inst.design else {
                return Err(HarnessError::config("image instances carry a blur operator"));
            };
            let alpha = if spec.family == Family::DeblurL1 { 1 } else { 2 };
            BuiltProblem::Composite(build_deblur(b, blur.clone(), spec.lambda, alpha)?)
        }
        Family::ConstrainedLp => BuiltProblem::Constrained(build_constrained(
            Phi::l1(1.0),
            inst.design.clone(),
            b,
            SetSpec::ZeroCone,
            SetSpec::linf_ball(CONSTRAINED_BOX)?,
        )?),
    };
    Ok(problem)
}

/// Same data fidelity with the smooth ridge `g = (λ/2)‖x‖²` in place of the l1 term.
pub fn ridge_variant(problem: &CompositeProblem<f64>, lambda: f64) -> Result<CompositeProblem<f64>> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(HarnessError::config(
            "smooth-g needs lambda > 0 for the ridge regularizer",
        ));
    }
    let g = Regularizer::Smooth(Arc::new(HalfSquaredNorm { weight: lambda }));
    Ok(CompositeProblem::with_opnorm(problem.f.clone(), g, problem.opnorm)?)
}

/// `‖x - b‖₁ + λ‖x‖₁` in conjugate form, for the double-prox variant. Needs `B = I`.
pub fn double_prox_variant(spec: &InstanceSpec, inst: &Instance) -> Result<CompositeProblem<f64>> {
    if spec.family != Family::L1l1Lasso || spec.design != Design::Identity {
        return Err(HarnessError::config(
            "double-prox needs the l1l1-lasso family with design = \"identity\"",
        ));
    }
    let p = spec.p;
    let f = SmoothTerm::Conjugate {
        f: ProxFn::l1_shifted(1.0, inst.rhs.clone())?,
        dim: p,
        diameter: p as f64 / 2.0,
    };
    Ok(CompositeProblem::new(f, Regularizer::Prox(ProxFn::l1(spec.lambda)?))?)
}

/// Optimal value of `min ‖u‖₁ s.t. Bu = b, ‖u‖∞ ≤ box` by simplex, with the
/// equality multipliers when they solve the dual problem.
pub fn constrained_reference(problem: &ConstrainedProblem<f64>, inst: &Instance) -> Result<(f64, Option<Vec<f64>>)> {
    let LinearMap::Dense { rows, cols, data } = &inst.design else {
        return Err(HarnessError::config("the constrained reference needs a dense design"));
    };
    let (m, p) = (*rows, *cols);
    // Variables: u⁺, u⁻, s⁺, s⁻ (p each); rows: B(u⁺ - u⁻) = b, u± + s± = box.
    let nv = 4 * p;
    let mut a = vec![vec![0.0; nv]; m + 2 * p];
    for i in 0..m {
        for j in 0..p {
            a[i][j] = data[i * p + j];
            a[i][p + j] = -data[i * p + j];
        }
    }
    for j in 0..p {
        a[m + j][j] = 1.0;
        a[m + j][2 * p + j] = 1.0;
        a[m + p + j][p + j] = 1.0;
        a[m + p + j][3 * p + j] = 1.0;
    }
    let mut rhs = inst.rhs.clone();
    rhs.extend(std::iter::repeat_n(CONSTRAINED_BOX, 2 * p));
    let mut c = vec![1.0; 2 * p];
    c.extend(std::iter::repeat_n(0.0, 2 * p));
    let sol = solve_standard_form(&a, &rhs, &c)?;
    let phi_star = sol.value;
    let dual = problem.dual()?;
    let y: Vec<f64> = sol.duals[..m].to_vec();
    let tol = 1e-8 * (1.0 + phi_star.abs());
    for cand in [y.clone(), y.iter().map(|v| -v).collect()] {
        if (dual.objective(&cand)? + phi_star).abs() <= tol {
            return Ok((phi_star, Some(cand)));
        }
    }
    Ok((phi_star, None))
}
