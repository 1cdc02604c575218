//! The individual stages of the steering protocol as gate sequences.

use num_complex::Complex64;

use super::scenario::{env_records, names, BranchStructure, ObserveVariant, Participation, RecordEncoding};
use crate::error::{Error, Result};
use crate::statevec::{
    project, sample_outcome, Control, Gate, RegisterLayout, StateVector, NORM_TOLERANCE,
};

/// Cat register in `sum_k w_k |k>`.
pub fn prepare_cat(branches: &BranchStructure) -> Result<StateVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << branches.cat_width()];
    amps[..branches.num_branches()].copy_from_slice(branches.weights());
    StateVector::from_amplitudes(amps)
        .map_err(|e| Error::InvalidBranches(format!("cat preparation failed: {e}")))
}

/// Cat in `branches` with every other register of `layout` blank.
pub fn initial_state(branches: &BranchStructure, layout: &RegisterLayout) -> Result<StateVector> {
    let cat = prepare_cat(branches)?;
    let rest = layout.total_qubits() - cat.num_qubits();
    if layout.qubits(names::CAT)? != (0..cat.num_qubits()).collect::<Vec<_>>() {
        return Err(Error::InvalidLayout {
            total: layout.total_qubits(),
            reason: "cat must occupy the leading qubits".into(),
        });
    }
    if rest == 0 {
        return Ok(cat);
    }
    cat.tensor(&StateVector::basis_state(rest, 0)?)
}

/// True when every qubit of `subsystems` reads 0 with certainty.
pub fn is_blank(state: &StateVector, layout: &RegisterLayout, subsystems: &[&str]) -> Result<bool> {
    let qubits = layout.qubits_of(subsystems)?;
    Ok(state.marginal(&qubits)[0] >= 1.0 - NORM_TOLERANCE)
}

fn cnots<'a>(controls: &'a [usize], targets: &'a [usize]) -> impl Iterator<Item = Gate> + 'a {
    controls.iter().zip(targets).map(|(&c, &t)| Gate::cnot(c, t))
}

/// Writes the cat's value into the brain and the first environment record.
///
/// All three variants produce the same state: (a) cat controls both records,
/// (b) cat writes the brain which informs the environment, (c) cat writes the
/// environment which informs the brain. The tagged encoding also raises the
/// brain flag.
pub fn observe(
    state: &StateVector,
    layout: &RegisterLayout,
    variant: ObserveVariant,
    encoding: RecordEncoding,
) -> Result<StateVector> {
    if !is_blank(state, layout, encoding.brain_subsystems())? {
        return Err(Error::BrainNotBlank);
    }
    let env = names::env(0);
    if !is_blank(state, layout, &[&env])? {
        return Err(Error::EnvironmentNotBlank);
    }
    let c = layout.qubits(names::CAT)?;
    let b = layout.qubits(names::BRAIN)?;
    let e = layout.qubits(&env)?;
    let mut gates = Vec::new();
    if encoding.is_tagged() {
        gates.push(Gate::X(layout.qubits(names::BRAIN_FLAG)?[0]));
    }
    match variant {
        ObserveVariant::A => gates.extend(cnots(c, b).chain(cnots(c, e))),
        ObserveVariant::B => gates.extend(cnots(c, b).chain(cnots(b, e))),
        ObserveVariant::C => gates.extend(cnots(c, e).chain(cnots(e, b))),
    }
    state.apply_gates(&gates)
}

/// Fans the cat's value out into `copies` further environment records
/// (`E2`, `E3`, ...).
pub fn spread_to_environment(
    state: &StateVector,
    layout: &RegisterLayout,
    copies: usize,
) -> Result<StateVector> {
    let records = env_records(layout);
    let available = records.len().saturating_sub(1);
    if copies > available {
        return Err(Error::InsufficientEnvironment {
            requested: copies,
            available,
        });
    }
    let c = layout.qubits(names::CAT)?;
    let mut gates = Vec::new();
    for name in &records[1..=copies] {
        gates.extend(cnots(c, layout.qubits(name)?));
    }
    state.apply_gates(&gates)
}

fn ensure_ancilla_blank(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
) -> Result<()> {
    let mut regs = encoding.ancilla_subsystems().to_vec();
    regs.push(names::CLINIC_FLAG);
    if !is_blank(state, layout, &regs)? {
        return Err(Error::AncillaNotBlank);
    }
    Ok(())
}

/// Move-and-reset on every record qubit, conditioned on the clinic flag:
/// `CNOT(B -> A)` copies the record, `CNOT(A -> B)` resets the brain.
fn erase_gates(layout: &RegisterLayout, encoding: RecordEncoding) -> Result<Vec<Gate>> {
    let flag = layout.qubits(names::CLINIC_FLAG)?[0];
    let brain = layout.qubits_of(encoding.brain_subsystems())?;
    let ancilla = layout.qubits_of(encoding.ancilla_subsystems())?;
    Ok(brain
        .iter()
        .zip(&ancilla)
        .flat_map(|(&b, &a)| {
            [
                Gate::mcx(vec![Control::on(flag), Control::on(b)], a),
                Gate::mcx(vec![Control::on(flag), Control::on(a)], b),
            ]
        })
        .collect())
}

/// Clinic visit in every branch: the record moves from the brain into the
/// fresh ancilla and the brain is left blank.
pub fn clinic_erase(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
) -> Result<StateVector> {
    ensure_ancilla_blank(state, layout, encoding)?;
    let mut gates = vec![Gate::X(layout.qubits(names::CLINIC_FLAG)?[0])];
    gates.extend(erase_gates(layout, encoding)?);
    state.apply_gates(&gates)
}

/// Clinic visit only in the branches selected by `participation`.
///
/// The clinic flag is switched on by a gate controlled on Bob's record, so
/// the ancilla ends up correlated with the branch structure.
pub fn conditional_clinic(
    state: &StateVector,
    layout: &RegisterLayout,
    branches: &BranchStructure,
    participation: Participation,
    encoding: RecordEncoding,
) -> Result<StateVector> {
    ensure_ancilla_blank(state, layout, encoding)?;
    let flag = layout.qubits(names::CLINIC_FLAG)?[0];
    let record = layout.qubits(names::BRAIN)?;
    if record.len() != branches.cat_width() {
        return Err(Error::DimensionMismatch {
            expected: branches.cat_width(),
            got: record.len(),
        });
    }
    let mut gates = Vec::new();
    if participation == Participation::All {
        gates.push(Gate::X(flag));
    } else {
        let width = record.len();
        for value in branches.participating_values(participation) {
            let mut controls: Vec<Control> = record
                .iter()
                .enumerate()
                .map(|(j, &q)| Control {
                    qubit: q,
                    on: value >> (width - 1 - j) & 1 == 1,
                })
                .collect();
            if encoding.is_tagged() {
                controls.push(Control::on(layout.qubits(names::BRAIN_FLAG)?[0]));
            }
            gates.push(Gate::mcx(controls, flag));
        }
    }
    gates.extend(erase_gates(layout, encoding)?);
    state.apply_gates(&gates)
}

/// Restricts the global state to the branches in which Bob visited the clinic.
pub fn condition_on_visit(state: &StateVector, layout: &RegisterLayout) -> Result<StateVector> {
    project(state, layout, names::CLINIC_FLAG, 1)
}

/// Fresh record write from the cat into the (blank) brain, without sampling.
pub fn reobserve_coupling(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
) -> Result<StateVector> {
    if !is_blank(state, layout, encoding.brain_subsystems())? {
        return Err(Error::BrainNotBlank);
    }
    let mut gates = Vec::new();
    if encoding.is_tagged() {
        gates.push(Gate::X(layout.qubits(names::BRAIN_FLAG)?[0]));
    }
    gates.extend(cnots(layout.qubits(names::CAT)?, layout.qubits(names::BRAIN)?));
    state.apply_gates(&gates)
}

/// Record write followed by a Born-rule draw of Bob's new record.
///
/// Returns the record value and the projected global state.
pub fn reobserve(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
    rng_seed: u64,
) -> Result<(usize, StateVector)> {
    let coupled = reobserve_coupling(state, layout, encoding)?;
    sample_outcome(&coupled, layout, names::BRAIN, rng_seed)
}

/// Every record-carrying register of `state` reads `value` with certainty.
///
/// Checked registers: cat, brain, all environment records, and the ancilla
/// when `erased` (plus the tag flags under the tagged encoding).
pub fn records_consistent(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
    value: usize,
    erased: bool,
) -> Result<bool> {
    let certain = |name: &str, v: usize| -> Result<bool> {
        let q = layout.qubits(name)?;
        Ok(state.marginal(q).get(v).copied().unwrap_or(0.0) >= 1.0 - NORM_TOLERANCE)
    };
    let mut regs = vec![names::CAT.to_owned(), names::BRAIN.to_owned()];
    regs.extend(env_records(layout));
    if erased {
        regs.push(names::ANCILLA.to_owned());
    }
    for r in &regs {
        if !certain(r, value)? {
            return Ok(false);
        }
    }
    if encoding.is_tagged() {
        if !certain(names::BRAIN_FLAG, 1)? {
            return Ok(false);
        }
        if erased && !certain(names::ANCILLA_FLAG, 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}
