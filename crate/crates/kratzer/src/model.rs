//! Couplings, range classification, extension parameters and the molecular
//! mapping.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// g₁, g₂ and the reference scale k₀, in units where 2m/ħ² = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub g1: f64,
    pub g2: f64,
    pub k0: f64,
}

impl CouplingParams {
    pub fn new(g1: f64, g2: f64, k0: f64) -> Result<Self> {
        let p = Self { g1, g2, k0 };
        p.validate()?;
        Ok(p)
    }

    /// Couplings with the default reference scale k₀ = 1.
    pub fn with_default_k0(g1: f64, g2: f64) -> Result<Self> {
        Self::new(g1, g2, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g1.is_finite() || !self.g2.is_finite() || !self.k0.is_finite() {
            return Err(Error::InvalidCoupling("non-finite parameter".into()));
        }
        if self.g1 == 0.0 {
            return Err(Error::InvalidCoupling("g1 must be nonzero".into()));
        }
        if self.k0 <= 0.0 {
            return Err(Error::InvalidCoupling(format!("k0 = {} must be positive", self.k0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MuKind {
    Real,
    Imaginary,
}

/// μ = √(g₂ + 1/4), or iϰ with ϰ = √(|g₂| − 1/4) below g₂ = −1/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub kind: MuKind,
    pub magnitude: f64,
}

impl MuValue {
    pub fn from_g2(g2: f64) -> Self {
        if g2 >= -0.25 {
            Self { kind: MuKind::Real, magnitude: (g2 + 0.25).sqrt() }
        } else {
            Self { kind: MuKind::Imaginary, magnitude: (-g2 - 0.25).sqrt() }
        }
    }

    pub fn complex(&self) -> Complex64 {
        match self.kind {
            MuKind::Real => Complex64::new(self.magnitude, 0.0),
            MuKind::Imaginary => Complex64::new(0.0, self.magnitude),
        }
    }

    /// μ², negative for the imaginary kind.
    pub fn squared(&self) -> f64 {
        match self.kind {
            MuKind::Real => self.magnitude * self.magnitude,
            MuKind::Imaginary => -self.magnitude * self.magnitude,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RangeId {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl RangeId {
    pub fn index(self) -> u8 {
        match self {
            RangeId::R1 => 1,
            RangeId::R2 => 2,
            RangeId::R3 => 3,
            RangeId::R4 => 4,
            RangeId::R5 => 5,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        Some(match i {
            1 => RangeId::R1,
            2 => RangeId::R2,
            3 => RangeId::R3,
            4 => RangeId::R4,
            5 => RangeId::R5,
            _ => return None,
        })
    }

    /// Name of the extension angle, if the range has a family.
    pub fn angle_name(self) -> Option<&'static str> {
        match self {
            RangeId::R1 => None,
            RangeId::R2 => Some("nu"),
            RangeId::R3 => Some("vartheta"),
            RangeId::R4 => Some("theta"),
            RangeId::R5 => Some("epsilon"),
        }
    }

    /// Canonical interval of the extension angle (lower bound excluded for
    /// the ±π/2 families, upper bound excluded for θ).
    pub fn angle_interval(self) -> Option<(f64, f64)> {
        match self {
            RangeId::R1 => None,
            RangeId::R4 => Some((0.0, PI)),
            _ => Some((-FRAC_PI_2, FRAC_PI_2)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeClass {
    pub range_id: RangeId,
    pub mu: MuValue,
    pub deficiency: (u8, u8),
}

/// Assigns (g₁, g₂) to one of the five coupling ranges.
pub fn classify(p: &CouplingParams) -> Result<RangeClass> {
    p.validate()?;
    let g2 = p.g2;
    let range_id = if g2 >= 0.75 {
        RangeId::R1
    } else if g2 == 0.0 {
        RangeId::R5
    } else if g2 == -0.25 {
        RangeId::R3
    } else if g2 < -0.25 {
        RangeId::R4
    } else {
        RangeId::R2
    };
    let deficiency = if range_id == RangeId::R1 { (0, 0) } else { (1, 1) };
    Ok(RangeClass { range_id, mu: MuValue::from_g2(g2), deficiency })
}

/// A self-adjoint extension: `angle` is `None` only for the unique R1 case
/// and is stored canonicalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParam {
    pub range_id: RangeId,
    pub angle: Option<f64>,
}

impl ExtensionParam {
    pub fn unique() -> Self {
        Self { range_id: RangeId::R1, angle: None }
    }

    pub fn new(range_id: RangeId, angle: Option<f64>) -> Result<Self> {
        match (range_id, angle) {
            (RangeId::R1, None) => Ok(Self::unique()),
            (RangeId::R1, Some(_)) => Err(Error::InvalidExtension(
                "range 1 has a unique self-adjoint extension; no angle allowed".into(),
            )),
            (_, None) => Err(Error::InvalidExtension(format!("{range_id:?} requires an angle"))),
            (_, Some(a)) if !a.is_finite() => Err(Error::InvalidExtension("non-finite angle".into())),
            (r, Some(a)) => Ok(Self { range_id: r, angle: Some(canonical_angle(r, a)) }),
        }
    }

    /// The natural extension for `p`: unique in R1, angle 0 elsewhere.
    pub fn for_params(p: &CouplingParams, angle: Option<f64>) -> Result<Self> {
        let r = classify(p)?.range_id;
        match (r, angle) {
            (RangeId::R1, _) => Ok(Self::unique()),
            (_, a) => Self::new(r, Some(a.unwrap_or(0.0))),
        }
    }

    pub fn angle_or_zero(&self) -> f64 {
        self.angle.unwrap_or(0.0)
    }
}

/// Maps an angle onto the circle representative: (−π/2, π/2] for ν, ϑ, ε and
/// [0, π) for θ.
pub fn canonical_angle(r: RangeId, a: f64) -> f64 {
    match r {
        RangeId::R4 => {
            let t = a - PI * (a / PI).floor();
            if t >= PI - 1e-15 {
                0.0
            } else {
                t
            }
        }
        _ => {
            let t = a - PI * ((a + FRAC_PI_2) / PI).floor();
            if t <= -FRAC_PI_2 + 1e-15 {
                FRAC_PI_2
            } else {
                t
            }
        }
    }
}

/// Kratzer parameters of a diatomic molecule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoleculeInput {
    pub mass: f64,
    pub dissociation_energy: f64,
    pub equilibrium_separation: f64,
    pub l: u32,
    pub hbar: f64,
}

impl MoleculeInput {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.mass) || !ok(self.equilibrium_separation) || !ok(self.hbar) {
            return Err(Error::Domain("mass, separation and hbar must be positive".into()));
        }
        if !(self.dissociation_energy.is_finite() && self.dissociation_energy >= 0.0) {
            return Err(Error::Domain("dissociation energy must be non-negative".into()));
        }
        Ok(())
    }
}

/// g₁ = −(4m/ħ²)Dₑa and g₂ = (2m/ħ²)Dₑa² + l(l+1), in inverse metres and
/// dimensionless respectively.
pub fn raw_molecule_couplings(m: &MoleculeInput) -> (f64, f64) {
    let s = 2.0 * m.mass / (m.hbar * m.hbar);
    let de_a = m.dissociation_energy * m.equilibrium_separation;
    let l = m.l as f64;
    (-2.0 * s * de_a, s * de_a * m.equilibrium_separation + l * (l + 1.0))
}

/// Couplings of the Kratzer potential −2Dₑ(a/r − a²/2r²) + centrifugal term,
/// with k₀ = 1/a.
pub fn molecule_couplings(m: &MoleculeInput) -> Result<CouplingParams> {
    m.validate()?;
    let (g1, g2) = raw_molecule_couplings(m);
    CouplingParams::new(g1, g2, 1.0 / m.equilibrium_separation)
}

/// One record of the bundled molecular table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    pub name: String,
    pub mass: f64,
    pub dissociation_energy: f64,
    pub equilibrium_separation: f64,
}

impl Molecule {
    pub fn input(&self, l: u32) -> MoleculeInput {
        MoleculeInput {
            mass: self.mass,
            dissociation_energy: self.dissociation_energy,
            equilibrium_separation: self.equilibrium_separation,
            l,
            hbar: HBAR,
        }
    }
}

const BUNDLED: &str = include_str!("../data/molecules.txt");

/// Parses `name mass De a` records; `#` starts a comment line.
pub fn parse_molecule_table(text: &str) -> Result<Vec<Molecule>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Domain(format!("line {}: expected 4 fields", lineno + 1)));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Domain(format!("line {}: {e}", lineno + 1)))
        };
        out.push(Molecule {
            name: fields[0].to_string(),
            mass: num(fields[1])?,
            dissociation_energy: num(fields[2])?,
            equilibrium_separation: num(fields[3])?,
        });
    }
    Ok(out)
}

pub fn bundled_molecules() -> Vec<Molecule> {
    parse_molecule_table(BUNDLED).expect("bundled molecule table is well formed")
}

pub fn find_molecule(name: &str) -> Option<Molecule> {
    bundled_molecules().into_iter().find(|m| m.name.eq_ignore_ascii_case(name))
}

/// V(x) = g₁/x + g₂/x².
pub fn potential_profile(p: &CouplingParams, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            if x > 0.0 && x.is_finite() {
                Ok(p.g1 / x + p.g2 / (x * x))
            } else {
                Err(Error::Domain(format!("potential requires x > 0, got {x}")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_angles_identify_endpoints() {
        assert_eq!(canonical_angle(RangeId::R2, -FRAC_PI_2), FRAC_PI_2);
        assert_eq!(canonical_angle(RangeId::R2, FRAC_PI_2), FRAC_PI_2);
        assert!((canonical_angle(RangeId::R3, 0.3 + PI) - 0.3).abs() < 1e-15);
        assert_eq!(canonical_angle(RangeId::R4, PI), 0.0);
        assert!((canonical_angle(RangeId::R4, -0.5) - (PI - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn r1_rejects_angles() {
        assert!(ExtensionParam::new(RangeId::R1, Some(0.2)).is_err());
        assert!(ExtensionParam::new(RangeId::R2, None).is_err());
    }

    #[test]
    fn bundled_table_parses_bit_exactly() {
        let co = find_molecule("co").unwrap();
        assert_eq!(co.mass, 1.138500e-26);
        assert_eq!(co.dissociation_energy, 1.798603e-18);
        assert_eq!(co.equilibrium_separation, 1.128320e-10);
    }

    #[test]
    fn malformed_table_is_rejected() {
        assert!(parse_molecule_table("X 1 2").is_err());
        assert!(parse_molecule_table("X 1 2 abc").is_err());
    }
}
