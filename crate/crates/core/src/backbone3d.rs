//! Ideal-geometry protein backbone from (φ, ψ) dihedrals by sequential
//! natural-extension reference frame (NeRF) placement.
//!
//! Residue `i` has atoms N, Cα, C (and optionally Cβ). With the usual
//! conventions `φᵢ = ∠(Cᵢ₋₁, Nᵢ, Cαᵢ, Cᵢ)` and `ψᵢ = ∠(Nᵢ, Cαᵢ, Cᵢ, Nᵢ₊₁)`,
//! so `φ₀` and `ψ_{L−1}` do not move any N/Cα/C atom.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point3 = [f64; 3];

/// Step used by [`end_to_end_grad`].
pub const END_TO_END_GRAD_STEP: f64 = 1e-5;

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: Point3, s: f64) -> Point3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn distance(a: Point3, b: Point3) -> f64 {
    norm(sub(a, b))
}

/// Angle at `b` in the triple `a–b–c`, in radians.
pub fn bond_angle(a: Point3, b: Point3, c: Point3) -> f64 {
    let u = sub(a, b);
    let v = sub(c, b);
    norm(cross(u, v)).atan2(dot(u, v))
}

/// Signed dihedral of `a–b–c–d` in (−π, π] (IUPAC sign convention).
pub fn dihedral(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    let b0 = sub(a, b);
    let b1 = sub(c, b);
    let b2 = sub(d, c);
    let b1n = scale(b1, 1.0 / norm(b1));
    let v = sub(b0, scale(b1n, dot(b0, b1n)));
    let w = sub(b2, scale(b1n, dot(b2, b1n)));
    let x = dot(v, w);
    let y = dot(cross(b1n, v), w);
    y.atan2(x)
}

/// Ideal backbone bond lengths (Å), bond angles (degrees) and the peptide
/// dihedral ω (degrees).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryParams {
    pub n_ca: f64,
    pub ca_c: f64,
    pub c_n: f64,
    pub n_ca_c: f64,
    pub ca_c_n: f64,
    pub c_n_ca: f64,
    pub omega: f64,
    /// Also place Cβ atoms.
    pub place_cb: bool,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            n_ca: 1.458,
            ca_c: 1.525,
            c_n: 1.329,
            n_ca_c: 111.2,
            ca_c_n: 116.2,
            c_n_ca: 121.7,
            omega: 180.0,
            place_cb: false,
        }
    }
}

// Cβ placement from (C, N, Cα).
const CA_CB: f64 = 1.53;
const N_CA_CB: f64 = 110.5;
const CB_DIHEDRAL: f64 = -122.6;

impl GeometryParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n_ca", self.n_ca), ("ca_c", self.ca_c), ("c_n", self.c_n)] {
            if !(v > 0.0) || v.is_infinite() {
                return Err(Error::Domain {
                    name,
                    value: v,
                    expected: "finite bond length > 0",
                });
            }
        }
        for (name, v) in [
            ("n_ca_c", self.n_ca_c),
            ("ca_c_n", self.ca_c_n),
            ("c_n_ca", self.c_n_ca),
        ] {
            if !(v > 0.0 && v < 180.0) {
                return Err(Error::Domain {
                    name,
                    value: v,
                    expected: "bond angle in (0, 180) degrees",
                });
            }
        }
        if !self.omega.is_finite() {
            return Err(Error::Domain {
                name: "omega",
                value: self.omega,
                expected: "finite",
            });
        }
        Ok(())
    }
}

/// Places `d` so that `|cd| = bond_length`, `∠bcd = bond_angle_deg` and the
/// dihedral `a–b–c–d` equals `dihedral` (radians).
pub fn place_atom(
    a: Point3,
    b: Point3,
    c: Point3,
    bond_length: f64,
    bond_angle_deg: f64,
    dihedral: f64,
) -> Result<Point3> {
    let bc = sub(c, b);
    let bc_len = norm(bc);
    if bc_len < 1e-12 {
        return Err(Error::DegenerateFrame);
    }
    let bc = scale(bc, 1.0 / bc_len);
    let n = cross(sub(b, a), bc);
    let n_len = norm(n);
    if n_len < 1e-9 * norm(sub(b, a)).max(1.0) {
        return Err(Error::DegenerateFrame);
    }
    let n = scale(n, 1.0 / n_len);
    let m = cross(n, bc);

    let theta = bond_angle_deg.to_radians();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = dihedral.sin_cos();
    let local = [
        -bond_length * ct,
        bond_length * st * cp,
        bond_length * st * sp,
    ];
    Ok([
        c[0] + local[0] * bc[0] + local[1] * m[0] + local[2] * n[0],
        c[1] + local[0] * bc[1] + local[1] * m[1] + local[2] * n[1],
        c[2] + local[0] * bc[2] + local[1] * m[2] + local[2] * n[2],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub n: Point3,
    pub ca: Point3,
    pub c: Point3,
    pub cb: Option<Point3>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackboneCoords {
    residues: Vec<Residue>,
}

impl BackboneCoords {
    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn from_residues(residues: Vec<Residue>) -> Self {
        BackboneCoords { residues }
    }

    /// Applies `x ↦ R x + t` to every atom.
    pub fn transformed(&self, rotation: [[f64; 3]; 3], translation: Point3) -> Self {
        let f = |p: Point3| {
            let mut out = translation;
            for (i, row) in rotation.iter().enumerate() {
                out[i] += dot(*row, p);
            }
            out
        };
        BackboneCoords {
            residues: self
                .residues
                .iter()
                .map(|r| Residue {
                    n: f(r.n),
                    ca: f(r.ca),
                    c: f(r.c),
                    cb: r.cb.map(f),
                })
                .collect(),
        }
    }

    /// Measured `(φ, ψ)` per residue; `None` where the neighbour atom needed
    /// for the dihedral does not exist.
    pub fn measure_dihedrals(&self) -> Vec<(Option<f64>, Option<f64>)> {
        let r = &self.residues;
        (0..r.len())
            .map(|i| {
                let phi = (i > 0).then(|| dihedral(r[i - 1].c, r[i].n, r[i].ca, r[i].c));
                let psi = (i + 1 < r.len()).then(|| dihedral(r[i].n, r[i].ca, r[i].c, r[i + 1].n));
                (phi, psi)
            })
            .collect()
    }

    /// PDB-style ATOM records, one per atom, followed by `END`.
    pub fn to_pdb(&self) -> String {
        let mut out = String::new();
        let mut serial = 1;
        for (i, res) in self.residues.iter().enumerate() {
            let mut atoms = vec![("N", res.n, "N"), ("CA", res.ca, "C"), ("C", res.c, "C")];
            if let Some(cb) = res.cb {
                atoms.push(("CB", cb, "C"));
            }
            for (name, p, element) in atoms {
                let _ = writeln!(
                    out,
                    "ATOM  {serial:>5} {name:<4} ALA A{seq:>4}    {x:>8.3}{y:>8.3}{z:>8.3}{occ:>6.2}{b:>6.2}          {element:>2}",
                    seq = i + 1,
                    x = p[0],
                    y = p[1],
                    z = p[2],
                    occ = 1.0,
                    b = 0.0,
                    name = format!(" {name}"),
                );
                serial += 1;
            }
        }
        out.push_str("END\n");
        out
    }
}

/// Builds the backbone for `phi`, `psi` (radians, one per residue).
///
/// Seed frame: N₀ at the origin, Cα₀ on +x, C₀ in the xy-plane (y > 0).
pub fn build_backbone(phi: &[f64], psi: &[f64], geom: &GeometryParams) -> Result<BackboneCoords> {
    if phi.len() != psi.len() {
        return Err(Error::Domain {
            name: "psi.len",
            value: psi.len() as f64,
            expected: "equal to phi.len",
        });
    }
    let l = phi.len();
    if l < 2 {
        return Err(Error::Domain {
            name: "residues",
            value: l as f64,
            expected: ">= 2",
        });
    }
    let omega = geom.omega.to_radians();
    let mut residues = Vec::with_capacity(l);

    let n0 = [0.0, 0.0, 0.0];
    let ca0 = [geom.n_ca, 0.0, 0.0];
    let t = geom.n_ca_c.to_radians();
    let c0 = [ca0[0] - geom.ca_c * t.cos(), geom.ca_c * t.sin(), 0.0];
    residues.push(Residue {
        n: n0,
        ca: ca0,
        c: c0,
        cb: None,
    });
    for i in 1..l {
        let prev = residues[i - 1];
        let n = place_atom(prev.n, prev.ca, prev.c, geom.c_n, geom.ca_c_n, psi[i - 1])?;
        let ca = place_atom(prev.ca, prev.c, n, geom.n_ca, geom.c_n_ca, omega)?;
        let c = place_atom(prev.c, n, ca, geom.ca_c, geom.n_ca_c, phi[i])?;
        residues.push(Residue { n, ca, c, cb: None });
    }
    if geom.place_cb {
        for r in &mut residues {
            r.cb = Some(place_atom(
                r.c,
                r.n,
                r.ca,
                CA_CB,
                N_CA_CB,
                CB_DIHEDRAL.to_radians(),
            )?);
        }
    }
    Ok(BackboneCoords { residues })
}

/// Distance between the first and last Cα.
pub fn end_to_end_ca_distance(coords: &BackboneCoords) -> f64 {
    let r = coords.residues();
    distance(r[0].ca, r[r.len() - 1].ca)
}

/// Row-major `L × L` matrix of Cα–Cα distances.
pub fn ca_distance_matrix(coords: &BackboneCoords) -> Vec<Vec<f64>> {
    let r = coords.residues();
    let mut m = vec![vec![0.0; r.len()]; r.len()];
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let d = distance(r[i].ca, r[j].ca);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    m
}

/// End-to-end Cα distance of a flattened angle vector `[φ₀…φ_{L−1}, ψ₀…ψ_{L−1}]`.
pub fn end_to_end_from_angles(angles: &[f64], geom: &GeometryParams) -> Result<f64> {
    let l = angles.len() / 2;
    let coords = build_backbone(&angles[..l], &angles[l..], geom)?;
    Ok(end_to_end_ca_distance(&coords))
}

/// Central-difference gradient of [`end_to_end_from_angles`] with step `h`.
pub fn end_to_end_grad(
    angles: &[f64],
    geom: &GeometryParams,
    h: f64,
    grad: &mut [f64],
) -> Result<f64> {
    let d = end_to_end_from_angles(angles, geom)?;
    let mut work = angles.to_vec();
    for i in 0..angles.len() {
        work[i] = angles[i] + h;
        let plus = end_to_end_from_angles(&work, geom)?;
        work[i] = angles[i] - h;
        let minus = end_to_end_from_angles(&work, geom)?;
        work[i] = angles[i];
        grad[i] = (plus - minus) / (2.0 * h);
    }
    Ok(d)
}
