//! Jones-calculus model of the photonic phase (`P`) and rotation (`R`) gates.
//!
//! `R` gate layout: each input path `j` passes an amplitude filter, then a
//! hwp/displacer pair twice, giving three sub-beams with real amplitudes
//! `cos2θ₁`, `sin2θ₁·sin2θ₂`, `−sin2θ₁·cos2θ₂`. Sub-beam `i` of path `j`
//! gets a compensator phase and is routed to output `(j+i) mod 3`, slot `j`.
//! Each output merges its three slots through two displacers with half-wave
//! plates at 22.5° and ½·atan(1/√2), keeping the H port: `(x₀+x₁+x₂)/√3`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{c, cis, Operator, C64, ONE, ZERO};

pub type Jones = Matrix2<C64>;
pub type Polarization = Vector2<C64>;

pub const H: Polarization = Vector2::new(ONE, ZERO);
pub const V: Polarization = Vector2::new(ZERO, ONE);

pub fn hwp(theta: f64) -> Jones {
    let (s, co) = (2.0 * theta).sin_cos();
    Matrix2::new(c(co, 0.0), c(s, 0.0), c(s, 0.0), c(-co, 0.0))
}

pub fn qwp(theta: f64) -> Jones {
    let (s, co) = theta.sin_cos();
    let off = c(1.0, -1.0) * (s * co);
    Matrix2::new(
        c(co * co, s * s),
        off,
        off,
        c(s * s, co * co),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JonesElement {
    Hwp { angle: f64 },
    Qwp { angle: f64 },
    /// Tilted glass plate: a polarization-independent phase.
    Compensator { phase: f64 },
}

impl JonesElement {
    pub fn matrix(&self) -> Jones {
        match *self {
            JonesElement::Hwp { angle } => hwp(angle),
            JonesElement::Qwp { angle } => qwp(angle),
            JonesElement::Compensator { phase } => Jones::identity() * cis(phase),
        }
    }
}

/// Elements applied left to right (first element acts first).
pub fn propagate(elements: &[JonesElement], input: Polarization) -> Polarization {
    elements.iter().fold(input, |v, e| e.matrix() * v)
}

/// `diag(e^{−2iθ₁}, e^{−2iθ₂}, e^{−2iθ₃})`
pub fn phase_gate(thetas: [f64; 3]) -> Operator {
    Operator::from_diagonal(&nalgebra::DVector::from_iterator(
        3,
        thetas.iter().map(|&t| cis(-2.0 * t)),
    ))
}

/// Half-wave plate angles in `[0, π)` producing the given per-path phases.
pub fn compile_phase(phases: [f64; 3]) -> [f64; 3] {
    phases.map(|p| (-p / 2.0).rem_euclid(PI))
}

/// qwp(π/4)·hwp(θ)·qwp(π/4) on `|H⟩` for each path. With the plate matrices
/// above this is `i·e^{−2iθ}|H⟩`; the `i` is common to all paths.
pub fn simulate_phase_gate(thetas: [f64; 3]) -> Result<Operator> {
    let mut out = Operator::zeros(3, 3);
    for (k, &t) in thetas.iter().enumerate() {
        let v = propagate(
            &[
                JonesElement::Qwp { angle: FRAC_PI_4 },
                JonesElement::Hwp { angle: t },
                JonesElement::Qwp { angle: FRAC_PI_4 },
            ],
            H,
        );
        if v[1].norm() > 1e-12 {
            return Err(Error::Internal(format!("phase plate leaves V amplitude {}", v[1].norm())));
        }
        out[(k, k)] = v[0];
    }
    Ok(out)
}

pub fn merge_angles() -> [f64; 2] {
    [FRAC_PI_8, 0.5 * (1.0 / 2f64.sqrt()).atan()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RGateSettings {
    /// Amplitude transmission per input path, in `[0, 1]`.
    pub filters: [f64; 3],
    /// `(θ₁, θ₂)` split plates per input path.
    pub split_angles: [[f64; 2]; 3],
    /// Compensator phase for sub-beam `i` of path `j`: `compensators[j][i]`.
    pub compensators: [[f64; 3]; 3],
    pub merge_angles: [f64; 2],
    /// `(output, slot)` of sub-beam `i` of path `j`.
    pub routing: [[(usize, usize); 3]; 3],
}

impl Default for RGateSettings {
    fn default() -> Self {
        Self {
            filters: [1.0; 3],
            split_angles: [[0.0; 2]; 3],
            compensators: [[0.0; 3]; 3],
            merge_angles: merge_angles(),
            routing: default_routing(),
        }
    }
}

pub fn default_routing() -> [[(usize, usize); 3]; 3] {
    std::array::from_fn(|j| std::array::from_fn(|i| ((j + i) % 3, j)))
}

/// Real sub-beam amplitudes of a hwp/displacer/hwp/displacer split of `|H⟩`.
fn split(theta1: f64, theta2: f64) -> [f64; 3] {
    let first = hwp(theta1) * H;
    let h0 = first[0];
    // V part continues; the second plate acts on it as a V-polarized beam.
    let second = hwp(theta2) * (V * first[1]);
    // the last sub-beam leaves V-polarized and is turned to H by a hwp at 45°
    let last = (hwp(FRAC_PI_4) * (V * second[1]))[0];
    [h0.re, second[0].re, last.re]
}

/// Two-stage displacer merge of three H-polarized slots; returns the H port.
fn merge(slots: [C64; 3], angles: [f64; 2]) -> C64 {
    let to_v = hwp(FRAC_PI_4);
    let a = H * slots[0];
    let b = to_v * (H * slots[1]);
    // first displacer joins the H part of slot 0 with the V part of slot 1
    let joined = Vector2::new(a[0], b[1]);
    let after = hwp(angles[0]) * joined;
    let cpart = to_v * (H * slots[2]);
    let joined = Vector2::new(after[0], cpart[1]);
    (hwp(angles[1]) * joined)[0]
}

/// Effective 3×3 transfer matrix of the network; sub-unitary in general.
pub fn r_gate_simulate(s: &RGateSettings) -> Result<Operator> {
    let mut seen = [[false; 3]; 3];
    for j in 0..3 {
        for i in 0..3 {
            let (o, slot) = s.routing[j][i];
            if o >= 3 || slot >= 3 {
                return Err(Error::InvalidArgument(format!("route ({o}, {slot}) out of range")));
            }
            if seen[o][slot] {
                return Err(Error::RoutingCollision { output: o, slot });
            }
            seen[o][slot] = true;
        }
    }
    for &t in &s.filters {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("filter transmission {t} outside [0, 1]")));
        }
    }
    let mut t = Operator::zeros(3, 3);
    for j in 0..3 {
        let amps = split(s.split_angles[j][0], s.split_angles[j][1]);
        // drive input j alone and read every output
        let mut slots = [[ZERO; 3]; 3];
        for i in 0..3 {
            let (o, slot) = s.routing[j][i];
            slots[o][slot] = cis(s.compensators[j][i]) * (s.filters[j] * amps[i]);
        }
        for o in 0..3 {
            t[(o, j)] = merge(slots[o], s.merge_angles);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledRGate {
    pub settings: RGateSettings,
    /// Realized transfer matrix is `scale · target`.
    pub scale: f64,
}

/// Settings realizing `scale · target` with the largest `scale ≤ 1` the
/// passive network allows.
pub fn compile_r_gate(target: &Operator) -> Result<CompiledRGate> {
    if target.nrows() != 3 || target.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: target.nrows().max(target.ncols()),
        });
    }
    if target.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InfeasibleTarget("non-finite entry".into()));
    }
    let norms: Vec<f64> = (0..3).map(|j| target.column(j).norm()).collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::InfeasibleTarget("zero transfer matrix".into()));
    }
    let scale = (1.0 / (3f64.sqrt() * max)).min(1.0);
    let routing = default_routing();
    let mut settings = RGateSettings {
        routing,
        ..RGateSettings::default()
    };
    for j in 0..3 {
        let nu = norms[j];
        settings.filters[j] = (3f64.sqrt() * scale * nu).min(1.0);
        if nu == 0.0 {
            continue;
        }
        let entry = |i: usize| target[(routing[j][i].0, j)];
        let mag: [f64; 3] = std::array::from_fn(|i| (entry(i).norm() / nu).min(1.0));
        let theta1 = 0.5 * mag[0].acos();
        let theta2 = 0.5 * mag[1].atan2(mag[2]);
        settings.split_angles[j] = [theta1, theta2];
        let real = split(theta1, theta2);
        for i in 0..3 {
            let phase = if real[i] < 0.0 { PI } else { 0.0 };
            settings.compensators[j][i] = (entry(i).arg() - phase).rem_euclid(2.0 * PI);
        }
    }
    Ok(CompiledRGate { settings, scale })
}

/// One line of an optical-bench parts list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub stage: String,
    pub kind: String,
    pub modes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub angle_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transmission: Option<f64>,
}

impl Part {
    fn plate(stage: &str, kind: &str, modes: Vec<usize>, angle: f64) -> Self {
        Self {
            stage: stage.into(),
            kind: kind.into(),
            modes,
            angle_deg: Some(angle.to_degrees()),
            transmission: None,
        }
    }
}

pub type PartsList = Vec<Part>;

pub fn phase_gate_parts(stage: &str, thetas: [f64; 3]) -> PartsList {
    let mut v = vec![Part::plate(stage, "qwp", vec![0, 1, 2], FRAC_PI_4)];
    for (k, &t) in thetas.iter().enumerate() {
        v.push(Part::plate(stage, "hwp", vec![k], t));
    }
    v.push(Part::plate(stage, "qwp", vec![0, 1, 2], FRAC_PI_4));
    v
}

/// Modes inside the R gate are numbered `3j + i` (path `j`, sub-beam `i`);
/// merge plates carry the output index.
pub fn r_gate_parts(stage: &str, s: &RGateSettings) -> PartsList {
    let mut v = Vec::new();
    for j in 0..3 {
        v.push(Part {
            stage: stage.into(),
            kind: "filter".into(),
            modes: vec![j],
            angle_deg: None,
            transmission: Some(s.filters[j]),
        });
        v.push(Part::plate(stage, "hwp", vec![j], s.split_angles[j][0]));
        v.push(Part::plate(stage, "hwp", vec![j], s.split_angles[j][1]));
    }
    for j in 0..3 {
        for i in 0..3 {
            v.push(Part {
                stage: stage.into(),
                kind: "compensator".into(),
                modes: vec![3 * j + i, s.routing[j][i].0, s.routing[j][i].1],
                angle_deg: Some(s.compensators[j][i].to_degrees()),
                transmission: None,
            });
        }
    }
    for o in 0..3 {
        for &a in &s.merge_angles {
            v.push(Part::plate(stage, "hwp", vec![o], a));
        }
    }
    v
}
