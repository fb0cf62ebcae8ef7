//! The artifact's own nine sample qutrit states for braiding runs.
//!
//! Coefficients are in the logical basis `{ψ_0, ψ_1, ψ_2}`. Every amplitude
//! is nonzero so both relative phases are defined for each state.

use serde::{Deserialize, Serialize};

use crate::tensor::{c, cis, eigenbasis, BasisKind, BasisLabel, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleState {
    pub label: String,
    pub description: String,
    pub coeffs: [C64; 3],
}

pub fn sample_states() -> Vec<SampleState> {
    let mut out = Vec::with_capacity(9);
    for (kind, name) in [(BasisKind::Tau, "tau"), (BasisKind::Chi, "chi")] {
        for k in 0..3 {
            let v = eigenbasis(BasisLabel::new(kind, k), 3).expect("qutrit eigenbasis");
            out.push(SampleState {
                label: String::new(),
                description: format!("|{k}⟩_{name}"),
                coeffs: std::array::from_fn(|i| v.amplitudes()[i]),
            });
        }
    }
    let generic: [(&str, [C64; 3]); 3] = [
        ("tilted resource state", [c(0.5, 0.0), c(0.0, 0.3), c(-(0.66f64).sqrt(), 0.0)]),
        (
            "unequal phases",
            [c(0.5f64.sqrt(), 0.0), cis(std::f64::consts::PI / 5.0) * 0.5, cis(-2.0 * std::f64::consts::PI / 7.0) * 0.5],
        ),
        ("weighted", [c(0.2, 0.0), c(0.4, -0.4), cis(1.1) * 0.8]),
    ];
    for (d, coeffs) in generic {
        out.push(SampleState {
            label: String::new(),
            description: d.into(),
            coeffs,
        });
    }
    for (j, s) in out.iter_mut().enumerate() {
        s.label = format!("psi{}", j + 1);
    }
    out
}
