use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on the total probability of a [`DiscreteDistribution`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A probability mass function over opaque string labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct DiscreteDistribution {
    probs: BTreeMap<String, f64>,
}

impl DiscreteDistribution {
    pub fn new<I, S>(probs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, p) in probs {
            let label = label.into();
            if !(p >= 0.0) || p.is_infinite() {
                return Err(Error::InvalidDistribution(format!("P({label}) = {p}")));
            }
            if map.insert(label.clone(), p).is_some() {
                return Err(Error::InvalidDistribution(format!(
                    "duplicate outcome `{label}`"
                )));
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(DiscreteDistribution { probs: map })
    }

    /// Probability of `label`; zero for unknown labels.
    pub fn prob(&self, label: &str) -> f64 {
        self.probs.get(label).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.probs.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl TryFrom<BTreeMap<String, f64>> for DiscreteDistribution {
    type Error = Error;

    fn try_from(map: BTreeMap<String, f64>) -> Result<Self> {
        DiscreteDistribution::new(map)
    }
}

impl From<DiscreteDistribution> for BTreeMap<String, f64> {
    fn from(d: DiscreteDistribution) -> Self {
        d.probs
    }
}

/// Assignment of each fine outcome to a partition element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    assignment: BTreeMap<String, String>,
}

impl Partition {
    pub fn new<I, A, B>(assignment: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        Partition {
            assignment: assignment
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        }
    }

    pub fn element_of(&self, outcome: &str) -> Option<&str> {
        self.assignment.get(outcome).map(String::as_str)
    }

    pub fn elements(&self) -> BTreeSet<&str> {
        self.assignment.values().map(String::as_str).collect()
    }
}

/// Mass of each partition element under `dist`.
pub fn marginalize(
    dist: &DiscreteDistribution,
    partition: &Partition,
) -> Result<BTreeMap<String, f64>> {
    let mut out: BTreeMap<String, f64> = partition
        .elements()
        .into_iter()
        .map(|e| (e.to_string(), 0.0))
        .collect();
    for (label, p) in dist.iter() {
        let element = partition.element_of(label).ok_or_else(|| {
            Error::InvalidDistribution(format!("outcome `{label}` is not assigned to any element"))
        })?;
        *out.get_mut(element).expect("element collected above") += p;
    }
    Ok(out)
}

/// Jeffrey update on a finite partition:
/// `p(ω) = π(ω) / π(E(ω)) · p(E(ω))`.
pub fn discrete_pk_update(
    prior: &DiscreteDistribution,
    partition: &Partition,
    new_marginals: &DiscreteDistribution,
) -> Result<DiscreteDistribution> {
    let elements = partition.elements();
    for label in new_marginals.labels() {
        if !elements.contains(label) {
            return Err(Error::InvalidDistribution(format!(
                "evidence names `{label}`, which is not a partition element"
            )));
        }
    }
    let masses = marginalize(prior, partition)?;
    for (element, &mass) in &masses {
        let evidence = new_marginals.prob(element);
        if evidence > 0.0 && mass == 0.0 {
            return Err(Error::SupportMismatch {
                element: element.clone(),
                evidence,
            });
        }
    }
    let posterior = prior.iter().map(|(label, p)| {
        let element = partition.element_of(label).expect("checked by marginalize");
        let mass = masses[element];
        let q = if mass > 0.0 {
            p / mass * new_marginals.prob(element)
        } else {
            0.0
        };
        (label.to_string(), q)
    });
    DiscreteDistribution::new(posterior)
}
