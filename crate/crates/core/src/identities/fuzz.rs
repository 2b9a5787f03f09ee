//! Invariance fuzzing: sample group elements and apply them to claimed
//! invariants.

use std::time::Instant;

use serde::Serialize;

use super::orthogonal::gen_name;
use super::SCHEMA;
use crate::error::{Error, Result};
use crate::forms::{apply_action, format_element, FormKind, FormSpec, GroupKind, Sampler};
use crate::invariants::{ga_family_gf, orth_family_gf, ps_family_gf, InvariantFamily};
use crate::mpoly::MPoly;
use crate::ring::Gf;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Zero-based index of the sample.
    pub trial: usize,
    pub generator: String,
    /// The offending element in the matrix text format.
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub schema: u32,
    pub form: String,
    pub group: String,
    pub trials: usize,
    pub seed: u64,
    pub generators: Vec<String>,
    pub violations: Vec<Violation>,
    pub elapsed_ms: Option<u64>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Index of the first sample that exposed a violation.
    pub fn first_detection(&self) -> Option<usize> {
        self.violations.iter().map(|v| v.trial).min()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// The family each group is claimed to fix, `P_n0 .. P_n,kmax`, with `X_n`
/// added for the odd pseudo-symplectic form.
pub fn claimed_invariants(spec: &FormSpec, group: GroupKind, kmax: usize) -> Result<Vec<(String, MPoly<Gf>)>> {
    let fam = match group {
        GroupKind::Orthogonal => orth_family_gf(spec, kmax)?,
        GroupKind::GA => ga_family_gf(spec, kmax)?,
        GroupKind::PseudoSymplectic => ps_family_gf(spec, kmax)?,
    };
    let mut out = named(&fam);
    if group == GroupKind::PseudoSymplectic && spec.kind() == FormKind::PsOdd {
        let n = spec.n();
        out.push((format!("X{n}"), fam.ring().var(n - 1)));
    }
    Ok(out)
}

fn named(fam: &InvariantFamily<Gf>) -> Vec<(String, MPoly<Gf>)> {
    let n = fam.ring().nvars();
    fam.members().iter().enumerate().map(|(k, p)| (gen_name(n, k, 0), p.clone())).collect()
}

/// Replaces `P_n1` by `P_n1 + X_1`, which no nontrivial group should fix.
pub fn mutate(gens: &mut [(String, MPoly<Gf>)]) -> Result<()> {
    let (name, p) = gens.get_mut(1).ok_or(Error::MissingMember(1))?;
    *p = p.add(&p.ring().var(0))?;
    name.push_str("+X1");
    Ok(())
}

/// Draws `trials` elements and checks `σ_T(f) = f` for every generator.
/// Samples are drawn sequentially from one seeded sampler, so a run is
/// reproducible from `(spec, group, trials, seed)`.
pub fn fuzz_invariance(
    spec: &FormSpec,
    group: GroupKind,
    gens: &[(String, MPoly<Gf>)],
    trials: usize,
    seed: u64,
) -> Result<FuzzReport> {
    let start = Instant::now();
    let mut sampler = Sampler::new(spec, group, seed)?;
    let mut violations = Vec::new();
    for trial in 0..trials {
        let t = sampler.sample()?;
        for (name, f) in gens {
            if apply_action(&t, f)? != *f {
                violations.push(Violation { trial, generator: name.clone(), element: format_element(&t, spec) });
            }
        }
    }
    Ok(FuzzReport {
        schema: SCHEMA,
        form: spec.to_string(),
        group: group.to_string(),
        trials,
        seed,
        generators: gens.iter().map(|(n, _)| n.clone()).collect(),
        violations,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}
