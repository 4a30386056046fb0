//! Domain types and the analytic linear-algebra kernels shared by every
//! solver: per-queue parameters, derived coefficients, and the
//! complementarity system `(A, b(T))` with its closed-form block inverses.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance under which a utilization-sum of one marks a block of
/// `A` as singular. The pivoting algorithm never legitimately visits such a
/// block, so hitting it signals invalid input.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Parameters of one queue.
///
/// Rates are per unit time; `tau` is the switchover time the server pays
/// when departing this queue; `theta` is the customers' waiting patience;
/// `reward` is the planner's reward per served customer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueParams {
    pub lambda: f64,
    pub mu: f64,
    pub tau: f64,
    pub theta: f64,
    pub reward: f64,
}

impl QueueParams {
    /// New queue with unit reward.
    pub fn new(lambda: f64, mu: f64, tau: f64, theta: f64) -> Self {
        QueueParams {
            lambda,
            mu,
            tau,
            theta,
            reward: 1.0,
        }
    }

    pub fn with_reward(mut self, reward: f64) -> Self {
        self.reward = reward;
        self
    }

    /// Utilization rate `lambda / mu`.
    pub fn rho(&self) -> f64 {
        self.lambda / self.mu
    }

    /// On-time coefficient `rho * theta / (1 - rho)`, defined for `rho < 1`:
    /// the on duration (net of post-clearance) induced per unit of the
    /// equilibrium variable.
    pub fn c(&self) -> Option<f64> {
        let rho = self.rho();
        if rho < 1.0 {
            Some(rho * self.theta / (1.0 - rho))
        } else {
            None
        }
    }

    fn validate(&self, queue: usize) -> Result<()> {
        let check = |what: &'static str, value: f64, ok: bool| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    queue,
                    what,
                    requirement: if what == "tau" { "non-negative" } else { "positive" },
                    value,
                })
            }
        };
        check("lambda", self.lambda, self.lambda > 0.0)?;
        check("mu", self.mu, self.mu > 0.0)?;
        check("tau", self.tau, self.tau >= 0.0)?;
        check("theta", self.theta, self.theta > 0.0)?;
        check("reward", self.reward, self.reward > 0.0)
    }
}

/// An ordered collection of queues served by one server in fixed order.
///
/// Immutable after construction; all solver entry points borrow it.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemInstance {
    queues: Vec<QueueParams>,
    total_switchover: f64,
}

impl SystemInstance {
    /// Build an instance from per-queue parameters. The total switchover is
    /// the sum of the per-queue values; it must be positive when `n >= 2`.
    pub fn new(queues: Vec<QueueParams>) -> Result<Self> {
        let total = queues.iter().map(|q| q.tau).sum();
        Self::with_total_switchover(queues, total)
    }

    /// Build an instance with an explicitly stated total switchover time.
    /// Only the total enters any formula; the per-queue split is retained
    /// for reporting. The stated total must agree with the per-queue sum to
    /// within `1e-12` relative.
    pub fn with_total_switchover(queues: Vec<QueueParams>, total_switchover: f64) -> Result<Self> {
        if queues.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, q) in queues.iter().enumerate() {
            q.validate(i)?;
        }
        let sum: f64 = queues.iter().map(|q| q.tau).sum();
        if (total_switchover - sum).abs() > 1e-12 * (1.0 + total_switchover.abs() + sum.abs()) {
            return Err(Error::SwitchoverMismatch {
                given: total_switchover,
                sum,
            });
        }
        if queues.len() >= 2 && total_switchover <= 0.0 {
            return Err(Error::ZeroSwitchover(total_switchover));
        }
        Ok(SystemInstance {
            queues,
            total_switchover,
        })
    }

    pub fn n(&self) -> usize {
        self.queues.len()
    }

    pub fn queue(&self, i: usize) -> &QueueParams {
        &self.queues[i]
    }

    pub fn queues(&self) -> &[QueueParams] {
        &self.queues
    }

    /// Sum of all switchover times, `1^T tau`.
    pub fn total_switchover(&self) -> f64 {
        self.total_switchover
    }

    /// Errors unless every queue satisfies `lambda < mu`.
    pub fn require_stable(&self) -> Result<()> {
        for (i, q) in self.queues.iter().enumerate() {
            if q.rho() >= 1.0 {
                return Err(Error::UnstableQueue {
                    queue: i,
                    rho: q.rho(),
                });
            }
        }
        Ok(())
    }
}

/// Coefficients derived from an instance: utilizations, on-time
/// coefficients (where defined), and the pivot bound `n_bar`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedCoefficients {
    /// Utilization `rho_i = lambda_i / mu_i` per queue.
    pub rho: Vec<f64>,
    /// `c_i = rho_i * theta_i / (1 - rho_i)`, `None` where `rho_i >= 1`.
    pub c: Vec<Option<f64>>,
    /// Largest number of queues whose utilizations sum strictly below one.
    pub n_bar: usize,
}

/// Compute [`DerivedCoefficients`] for an instance.
///
/// `n_bar` is found greedily: sort utilizations ascending and count how many
/// can be accumulated while the sum stays below one. Greedy is exact here
/// because any set of `k` queues has utilization-sum at least that of the
/// `k` smallest.
pub fn derive_coefficients(inst: &SystemInstance) -> DerivedCoefficients {
    let rho: Vec<f64> = inst.queues().iter().map(|q| q.rho()).collect();
    let c: Vec<Option<f64>> = inst.queues().iter().map(|q| q.c()).collect();
    let mut sorted = rho.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite utilizations"));
    let mut sum = 0.0;
    let mut n_bar = 0;
    for r in sorted {
        if sum + r < 1.0 {
            sum += r;
            n_bar += 1;
        } else {
            break;
        }
    }
    DerivedCoefficients { rho, c, n_bar }
}

/// The complementarity system describing equilibria of exhaustive service
/// policies: `A` has diagonal `theta_i` and constant off-diagonal column
/// entries `-c_j`; `b(T) = (1^T tau + 1^T T) 1 - T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpSystem {
    theta: Vec<f64>,
    c: Vec<f64>,
    rho: Vec<f64>,
    b: Vec<f64>,
}

/// Assemble the system for a finite post-clearance vector `T >= 0`.
/// Requires `lambda_i < mu_i` for every queue.
pub fn build_lcp_system(inst: &SystemInstance, post_clearance: &[f64]) -> Result<LcpSystem> {
    assert_eq!(post_clearance.len(), inst.n(), "post-clearance length");
    inst.require_stable()?;
    for (i, &t) in post_clearance.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::NegativePostClearance { queue: i, value: t });
        }
    }
    let total_t: f64 = post_clearance.iter().sum();
    let base = inst.total_switchover() + total_t;
    Ok(LcpSystem {
        theta: inst.queues().iter().map(|q| q.theta).collect(),
        c: inst.queues().iter().map(|q| q.c().expect("stable queue")).collect(),
        rho: inst.queues().iter().map(|q| q.rho()).collect(),
        b: post_clearance.iter().map(|&t| base - t).collect(),
    })
}

impl LcpSystem {
    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// Entry `A[i][j]`.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.theta[i]
        } else {
            -self.c[j]
        }
    }

    /// Dense copy of `A`, row-major.
    pub fn dense_a(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.a(i, j)).collect())
            .collect()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `A x` for a dense vector.
    pub fn apply_a(&self, x: &[f64]) -> Vec<f64> {
        let weighted: f64 = x.iter().zip(&self.c).map(|(xi, ci)| xi * ci).sum();
        (0..self.n())
            .map(|i| self.theta[i] * x[i] - (weighted - self.c[i] * x[i]))
            .collect()
    }

    fn inverse_factors(&self, idx: &[usize]) -> Result<(f64, Vec<f64>)> {
        assert!(!idx.is_empty(), "index set must be non-empty");
        let sigma: f64 = idx.iter().map(|&i| self.rho[i]).sum();
        let rho_bar = 1.0 - sigma;
        if rho_bar.abs() < SINGULAR_TOL {
            return Err(Error::SingularSubmatrix);
        }
        // (mu_i - lambda_i) / (mu_i theta_i) = (1 - rho_i) / theta_i
        let factors = idx
            .iter()
            .map(|&i| (1.0 - self.rho[i]) / self.theta[i])
            .collect();
        Ok((rho_bar, factors))
    }

    /// Closed-form inverse of the block `A[idx][idx]`, valid iff the indexed
    /// utilizations do not sum to one:
    ///
    /// * diagonal: `(1 - rho_i)/theta_i * (1 - sum_{k in I \ {i}} rho_k) / rho_bar`
    /// * off-diagonal `(i, j)`: `(1 - rho_i)/theta_i * rho_j / rho_bar`
    ///
    /// with `rho_bar = 1 - sum_{k in I} rho_k`. Rows sum to
    /// `(1 - rho_i) / (theta_i * rho_bar)`.
    pub fn invert_submatrix(&self, idx: &[usize]) -> Result<Vec<Vec<f64>>> {
        let (rho_bar, factors) = self.inverse_factors(idx)?;
        let sigma = 1.0 - rho_bar;
        let m = idx.len();
        let mut out = vec![vec![0.0; m]; m];
        for (p, &i) in idx.iter().enumerate() {
            for (q, &j) in idx.iter().enumerate() {
                out[p][q] = if i == j {
                    factors[p] * (1.0 - (sigma - self.rho[i])) / rho_bar
                } else {
                    factors[p] * self.rho[j] / rho_bar
                };
            }
        }
        Ok(out)
    }

    /// `A[idx][idx]^{-1} y` via the closed form, without materializing the
    /// matrix: `(A_I^{-1} y)_i = f_i ((1 - sigma) y_i + sum_j rho_j y_j) / rho_bar`.
    pub fn apply_submatrix_inverse(&self, idx: &[usize], y: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(idx.len(), y.len());
        let (rho_bar, factors) = self.inverse_factors(idx)?;
        let weighted: f64 = idx.iter().zip(y).map(|(&i, &yi)| self.rho[i] * yi).sum();
        Ok(factors
            .iter()
            .zip(y)
            .map(|(&f, &yi)| f * (rho_bar * yi + weighted) / rho_bar)
            .collect())
    }

    /// Row sums of the block inverse, `(1 - rho_i) / (theta_i * rho_bar)`.
    pub fn submatrix_inverse_row_sums(&self, idx: &[usize]) -> Result<Vec<f64>> {
        let (rho_bar, factors) = self.inverse_factors(idx)?;
        Ok(factors.iter().map(|f| f / rho_bar).collect())
    }
}
