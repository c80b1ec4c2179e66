use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

const TAU: f64 = 2.0 * PI;

/// Wraps an angle into (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    if r > PI {
        r - TAU
    } else if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// An ordered list of angles, each wrapped into (−π, π].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        AngleVector(values.into_iter().map(wrap_angle).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for AngleVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for AngleVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for AngleVector {
    fn from(values: Vec<f64>) -> Self {
        AngleVector::new(values)
    }
}
