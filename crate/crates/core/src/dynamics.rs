//! Mass-action semantics: net reaction vectors, the polynomial right-hand
//! side they induce, and dynamical equivalence between systems.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Float, Signed, Zero};
use thiserror::Error;

use crate::network::{Complex, MassActionSystem};
use crate::scalar::{exact_pow, to_float};
use crate::{RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state must be strictly positive, coordinate {index} is {value}")]
    NonPositiveState { index: usize, value: String },
    #[error("x^{exponent} has no exact rational value at x = {base}")]
    InexactPower { base: String, exponent: String },
    #[error("time step must be positive")]
    NonPositiveStep,
}

/// Nonzero net reaction vectors keyed by source complex.
///
/// Vertices whose outgoing reactions cancel exactly are kept aside in
/// `zero_vertices` rather than stored with a zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetReactionMap {
    pub vectors: BTreeMap<Complex, RatVector>,
    pub zero_vertices: Vec<Complex>,
}

impl NetReactionMap {
    pub fn get(&self, complex: &Complex) -> Option<&RatVector> {
        self.vectors.get(complex)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// A polynomial vector field in canonical form: one coefficient vector per
/// distinct monomial, never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMap {
    n: usize,
    terms: BTreeMap<Complex, RatVector>,
}

impl PolynomialMap {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    /// Sum like terms and drop cancelled ones.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, DynamicsError>
    where
        I: IntoIterator<Item = (Complex, RatVector)>,
    {
        let mut acc: BTreeMap<Complex, RatVector> = BTreeMap::new();
        for (monomial, coeff) in terms {
            for d in [monomial.dim(), coeff.dim()] {
                if d != n {
                    return Err(DynamicsError::DimensionMismatch { expected: n, found: d });
                }
            }
            match acc.get_mut(&monomial) {
                Some(existing) => existing.add_scaled(&Rational::from_integer(1.into()), &coeff),
                None => {
                    acc.insert(monomial, coeff);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { n, terms: acc })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Complex, RatVector> {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Complex> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(Complex::is_integral)
    }

    /// Exact evaluation. Fractional exponents succeed only where the power
    /// is itself rational.
    pub fn evaluate(&self, x: &RatVector) -> Result<RatVector, DynamicsError> {
        if x.dim() != self.n {
            return Err(DynamicsError::DimensionMismatch { expected: self.n, found: x.dim() });
        }
        if !self.has_integral_exponents() {
            if let Some(index) = x.iter().position(|v| !v.is_positive()) {
                return Err(DynamicsError::NonPositiveState { index, value: x[index].to_string() });
            }
        }
        let mut out = RatVector::zeros(self.n);
        for (monomial, coeff) in &self.terms {
            let mut value = Rational::from_integer(1.into());
            for (base, exponent) in x.iter().zip(monomial.exponents().iter()) {
                if exponent.is_zero() {
                    continue;
                }
                let p = exact_pow(base, exponent).ok_or_else(|| DynamicsError::InexactPower {
                    base: base.to_string(),
                    exponent: exponent.to_string(),
                })?;
                value *= p;
            }
            out.add_scaled(&value, coeff);
        }
        Ok(out)
    }
}

/// The κ-weighted sum of reaction vectors leaving `y`; zero when `y` is not a
/// vertex.
pub fn net_reaction_vector(sys: &MassActionSystem, y: &Complex) -> RatVector {
    let net = sys.network();
    let mut w = RatVector::zeros(sys.num_species());
    let Some(i) = net.vertex_index(y) else {
        return w;
    };
    for (edge, k) in net.edges().iter().zip(sys.rates()) {
        if edge.source == i {
            w.add_scaled(k, &net.reaction_vector(edge));
        }
    }
    w
}

pub fn net_reaction_map(sys: &MassActionSystem) -> NetReactionMap {
    let mut vectors = BTreeMap::new();
    let mut zero_vertices = Vec::new();
    for y in sys.network().vertices() {
        let w = net_reaction_vector(sys, y);
        if w.is_zero() {
            zero_vertices.push(y.clone());
        } else {
            vectors.insert(y.clone(), w);
        }
    }
    NetReactionMap { vectors, zero_vertices }
}

/// Expand the mass-action right-hand side reaction by reaction:
/// `Σ_{y→y'} κ x^y (y' - y)`, then combine like monomials.
///
/// Deliberately does not go through [`net_reaction_vector`], so the two can
/// cross-check each other.
pub fn rhs_polynomial(sys: &MassActionSystem) -> PolynomialMap {
    let terms = sys
        .reactions()
        .map(|(s, t, k)| (s.clone(), (t.exponents() - s.exponents()).scale(k)));
    PolynomialMap::from_terms(sys.num_species(), terms).expect("complexes share the species dimension")
}

pub fn evaluate_rhs(p: &PolynomialMap, x: &RatVector) -> Result<RatVector, DynamicsError> {
    p.evaluate(x)
}

fn check_same_dim(a: &MassActionSystem, b: &MassActionSystem) -> Result<(), DynamicsError> {
    if a.num_species() != b.num_species() {
        return Err(DynamicsError::DimensionMismatch { expected: a.num_species(), found: b.num_species() });
    }
    Ok(())
}

/// Net reaction vectors agree at every vertex of either system.
pub fn is_dynamically_equivalent(a: &MassActionSystem, b: &MassActionSystem) -> Result<bool, DynamicsError> {
    check_same_dim(a, b)?;
    let union: BTreeSet<&Complex> = a.network().vertices().iter().chain(b.network().vertices()).collect();
    Ok(union.into_iter().all(|y| net_reaction_vector(a, y) == net_reaction_vector(b, y)))
}

/// Net reaction vectors agree on every complex of `subset`.
pub fn is_dynamically_equivalent_on(
    a: &MassActionSystem,
    b: &MassActionSystem,
    subset: &[Complex],
) -> Result<bool, DynamicsError> {
    check_same_dim(a, b)?;
    for y in subset {
        if y.dim() != a.num_species() {
            return Err(DynamicsError::DimensionMismatch { expected: a.num_species(), found: y.dim() });
        }
    }
    Ok(subset.iter().all(|y| net_reaction_vector(a, y) == net_reaction_vector(b, y)))
}

/// `x^y` in floating point. Integral exponents use repeated multiplication.
pub(crate) fn monomial_value<F: Float>(x: &[F], exponents: &[F], integral: &[Option<i32>]) -> F {
    let mut value = F::one();
    for ((&xi, &e), int) in x.iter().zip(exponents).zip(integral) {
        value = value
            * match int {
                Some(0) => F::one(),
                Some(k) => xi.powi(*k),
                None => xi.powf(e),
            };
    }
    value
}

pub(crate) fn exponent_table<F: Float>(c: &Complex) -> (Vec<F>, Vec<Option<i32>>) {
    let exps = c.exponents().iter().map(to_float::<F>).collect();
    let ints = c
        .exponents()
        .iter()
        .map(|e| if e.is_integer() { num_traits::ToPrimitive::to_i32(&e.to_integer()) } else { None })
        .collect();
    (exps, ints)
}

pub(crate) fn check_positive<F: Float>(x: &[F], n: usize) -> Result<(), DynamicsError> {
    if x.len() != n {
        return Err(DynamicsError::DimensionMismatch { expected: n, found: x.len() });
    }
    if let Some(index) = x.iter().position(|&v| !(v > F::zero())) {
        return Err(DynamicsError::NonPositiveState {
            index,
            value: x[index].to_f64().map(|v| v.to_string()).unwrap_or_else(|| "NaN".into()),
        });
    }
    Ok(())
}

/// Outflow minus inflow at each vertex, in vertex order:
/// `Σ_{y_i→y_j} κ_ij x^{y_i} − Σ_{y_j→y_i} κ_ji x^{y_j}`.
///
/// `x` is complex-balanced exactly when every residual vanishes.
pub fn complex_balance_residual<F: Float>(sys: &MassActionSystem, x: &[F]) -> Result<Vec<(Complex, F)>, DynamicsError> {
    let net = sys.network();
    check_positive(x, sys.num_species())?;
    let monomials: Vec<F> = net
        .vertices()
        .iter()
        .map(|v| {
            let (e, i) = exponent_table::<F>(v);
            monomial_value(x, &e, &i)
        })
        .collect();
    let mut residual = vec![F::zero(); net.vertices().len()];
    for (edge, k) in net.edges().iter().zip(sys.rates()) {
        let flux = to_float::<F>(k) * monomials[edge.source];
        residual[edge.source] = residual[edge.source] + flux;
        residual[edge.target] = residual[edge.target] - flux;
    }
    Ok(net.vertices().iter().cloned().zip(residual).collect())
}
