//! Fixed-step RK4 integration of the mass-action ODE.

use num_traits::Float;

use crate::dynamics::{check_positive, exponent_table, monomial_value, net_reaction_map, DynamicsError};
use crate::linalg::Matrix;
use crate::scalar::to_float;
use crate::{MassActionSystem, RatVector};

/// A computed trajectory. `states[i]` is the state at `times[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<F> {
    pub times: Vec<F>,
    pub states: Vec<Vec<F>>,
    /// Basis of the conservation laws (the orthogonal complement of the
    /// stoichiometric subspace) used to measure drift.
    pub conservation_laws: Vec<Vec<F>>,
    /// Largest `|c·x(t) − c·x(0)|` over all recorded states and laws `c`.
    pub conserved_drift: F,
    /// Relative-entropy Lyapunov function at each recorded state; empty when
    /// no reference state was given.
    pub lyapunov: Vec<F>,
    /// The state left the positive orthant (or overflowed) and integration
    /// stopped early. The offending state is not recorded.
    pub aborted: bool,
}

impl<F: Float> Trajectory<F> {
    pub fn last_state(&self) -> &[F] {
        self.states.last().expect("a trajectory holds at least its initial state")
    }

    /// Largest increase between consecutive Lyapunov samples, or zero.
    pub fn max_lyapunov_increase(&self) -> F {
        self.lyapunov.windows(2).map(|w| w[1] - w[0]).fold(F::zero(), F::max)
    }
}

struct Field<F> {
    monomials: Vec<(Vec<F>, Vec<Option<i32>>)>,
    vectors: Vec<Vec<F>>,
}

impl<F: Float> Field<F> {
    fn new(sys: &MassActionSystem) -> Self {
        let net = net_reaction_map(sys);
        let (monomials, vectors) = net
            .vectors
            .iter()
            .map(|(y, w)| (exponent_table::<F>(y), w.iter().map(to_float::<F>).collect()))
            .unzip();
        Self { monomials, vectors }
    }

    fn eval(&self, x: &[F], out: &mut [F]) {
        out.iter_mut().for_each(|o| *o = F::zero());
        for ((exps, ints), w) in self.monomials.iter().zip(&self.vectors) {
            let m = monomial_value(x, exps, ints);
            for (o, &wi) in out.iter_mut().zip(w) {
                *o = *o + m * wi;
            }
        }
    }
}

/// Basis of `S⊥`: vectors `c` with `c·s = 0` for every reaction vector `s`.
pub fn conservation_laws(sys: &MassActionSystem) -> Vec<RatVector> {
    let n = sys.num_species();
    let basis = sys.network().stoichiometric_subspace_basis();
    Matrix::from_rows(n, &basis).expect("reaction vectors have the species dimension").kernel_basis()
}

/// `Σ x_i (ln x_i − ln x*_i) − x_i + x*_i`.
pub fn lyapunov<F: Float>(x: &[F], reference: &[F]) -> F {
    x.iter()
        .zip(reference)
        .fold(F::zero(), |acc, (&xi, &ri)| acc + xi * (xi.ln() - ri.ln()) - xi + ri)
}

fn dot<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Integrate `steps` RK4 steps of size `dt` from `x0`, which must be
/// strictly positive. With a `reference` state, the Lyapunov function
/// relative to it is sampled at every recorded state.
pub fn simulate<F: Float>(
    sys: &MassActionSystem,
    x0: &[F],
    dt: F,
    steps: usize,
    reference: Option<&[F]>,
) -> Result<Trajectory<F>, DynamicsError> {
    let n = sys.num_species();
    check_positive(x0, n)?;
    if let Some(r) = reference {
        check_positive(r, n)?;
    }
    if !(dt > F::zero()) {
        return Err(DynamicsError::NonPositiveStep);
    }

    let field = Field::<F>::new(sys);
    let laws: Vec<Vec<F>> = conservation_laws(sys).iter().map(|c| c.iter().map(to_float::<F>).collect()).collect();
    let initial_totals: Vec<F> = laws.iter().map(|c| dot(c, x0)).collect();
    let two = F::one() + F::one();
    let six = two + two + two;

    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        conservation_laws: laws.clone(),
        conserved_drift: F::zero(),
        lyapunov: Vec::new(),
        aborted: false,
    };
    let mut x = x0.to_vec();
    let record = |traj: &mut Trajectory<F>, t: F, x: &[F]| {
        for (c, total) in traj.conservation_laws.iter().zip(&initial_totals) {
            traj.conserved_drift = traj.conserved_drift.max((dot(c, x) - *total).abs());
        }
        if let Some(r) = reference {
            traj.lyapunov.push(lyapunov(x, r));
        }
        traj.times.push(t);
        traj.states.push(x.to_vec());
    };
    record(&mut traj, F::zero(), &x);

    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![F::zero(); n], vec![F::zero(); n], vec![F::zero(); n], vec![F::zero(); n], vec![F::zero(); n]);
    let half = dt / two;
    for step in 1..=steps {
        field.eval(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + half * k1[i];
        }
        field.eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + half * k2[i];
        }
        field.eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        field.eval(&tmp, &mut k4);
        for i in 0..n {
            tmp[i] = x[i] + dt / six * (k1[i] + two * (k2[i] + k3[i]) + k4[i]);
        }
        if tmp.iter().any(|&v| !(v > F::zero()) || !v.is_finite()) {
            traj.aborted = true;
            break;
        }
        std::mem::swap(&mut x, &mut tmp);
        let t = dt * F::from(step).expect("step count fits the float type");
        record(&mut traj, t, &x);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::complex_balance_residual;
    use crate::fixtures;

    #[test]
    fn cubic_relaxes_to_one() {
        let traj = simulate(&fixtures::cubic_reversible_pair(), &[0.2f64], 1e-3, 20_000, Some(&[1.0])).unwrap();
        assert!(!traj.aborted);
        assert!((traj.last_state()[0] - 1.0).abs() < 1e-9);
        assert!(traj.max_lyapunov_increase() <= 1e-12);
        assert!(traj.conservation_laws.is_empty());
    }

    #[test]
    fn diagonal_pair_conserves_the_difference() {
        let sys = fixtures::diagonal_reversible_pair();
        let laws = conservation_laws(&sys);
        assert_eq!(laws.len(), 1);
        let traj = simulate(&sys, &[0.5f64, 1.5], 1e-3, 5_000, None).unwrap();
        let diff = |s: &[f64]| s[0] - s[1];
        let d0 = diff(&traj.states[0]);
        assert!(traj.states.iter().all(|s| (diff(s) - d0).abs() < 1e-9));
        assert!(traj.conserved_drift < 1e-9);
    }

    #[test]
    fn works_in_single_precision() {
        let traj = simulate(&fixtures::cubic_reversible_pair(), &[0.5f32], 1e-2, 2_000, None).unwrap();
        assert!((traj.last_state()[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn t_cell_reaches_a_complex_balanced_state() {
        let sys = fixtures::t_cell_receptor(1);
        let reference = [2.0, 1.0, 1.0, 1.0];
        let traj = simulate(&sys, &[1.0f64, 2.0, 0.5, 0.5], 1e-2, 5_000, Some(&reference)).unwrap();
        assert_eq!(traj.conservation_laws.len(), 2);
        assert!(traj.conserved_drift < 1e-9);
        assert!(traj.max_lyapunov_increase() <= 1e-9);
        let residual = complex_balance_residual(&sys, traj.last_state()).unwrap();
        assert!(residual.iter().all(|(_, r)| r.abs() < 1e-6));
    }

    #[test]
    fn leaving_the_orthant_aborts() {
        // an enormous step overshoots zero
        let traj = simulate(&fixtures::cubic_reversible_pair(), &[3.0f64], 1.0, 10, None).unwrap();
        assert!(traj.aborted);
        assert!(traj.states.iter().flatten().all(|&v| v > 0.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let sys = fixtures::cubic_reversible_pair();
        assert!(simulate(&sys, &[0.0f64], 1e-3, 1, None).is_err());
        assert!(simulate(&sys, &[1.0f64, 1.0], 1e-3, 1, None).is_err());
        assert!(simulate(&sys, &[1.0f64], 0.0, 1, None).is_err());
        assert!(simulate(&sys, &[1.0f64], 1e-3, 1, Some(&[-1.0])).is_err());
    }

    #[test]
    fn reference_state_is_complex_balanced() {
        let sys = fixtures::t_cell_receptor(1);
        let residual = complex_balance_residual(&sys, &[2.0f64, 1.0, 1.0, 1.0]).unwrap();
        assert!(residual.iter().all(|(_, r)| *r == 0.0));
    }
}
