use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub name: String,
    pub qubits: Vec<usize>,
}

impl Subsystem {
    pub fn width(&self) -> usize {
        self.qubits.len()
    }
}

/// Named partition of a qubit register into logical subsystems.
///
/// Amplitudes are ordered big-endian over qubit indices, and
/// [`RegisterLayout::new`] hands out indices in subsystem order, so the
/// first-listed subsystem is the most significant part of a basis index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    subsystems: Vec<Subsystem>,
    total_qubits: usize,
}

impl RegisterLayout {
    /// Contiguous layout from `(name, width)` pairs.
    pub fn new<S: AsRef<str>>(sizes: &[(S, usize)]) -> Result<Self> {
        let mut next = 0;
        let subsystems = sizes
            .iter()
            .map(|(name, width)| {
                let qubits = (next..next + width).collect();
                next += width;
                Subsystem {
                    name: name.as_ref().to_owned(),
                    qubits,
                }
            })
            .collect();
        Self::from_subsystems(subsystems)
    }

    /// Arbitrary layout; indices must partition `0..total` exactly.
    pub fn from_subsystems(subsystems: Vec<Subsystem>) -> Result<Self> {
        let total: usize = subsystems.iter().map(Subsystem::width).sum();
        if total == 0 {
            return Err(Error::InvalidLayout {
                total,
                reason: "layout has no qubits".into(),
            });
        }
        if total > MAX_QUBITS {
            return Err(Error::QubitBudget {
                requested: total,
                cap: MAX_QUBITS,
            });
        }
        let mut seen = vec![false; total];
        for (i, s) in subsystems.iter().enumerate() {
            if subsystems[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::DuplicateSubsystem(s.name.clone()));
            }
            if s.qubits.is_empty() {
                return Err(Error::InvalidLayout {
                    total,
                    reason: format!("subsystem `{}` is empty", s.name),
                });
            }
            for &q in &s.qubits {
                if q >= total || seen[q] {
                    return Err(Error::InvalidLayout {
                        total,
                        reason: format!("qubit {q} of `{}` is out of range or reused", s.name),
                    });
                }
                seen[q] = true;
            }
        }
        Ok(Self {
            subsystems,
            total_qubits: total,
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn contains(&self, name: &str) -> bool {
        self.subsystems.iter().any(|s| s.name == name)
    }

    pub fn subsystem(&self, name: &str) -> Result<&Subsystem> {
        self.subsystems
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSubsystem(name.to_owned()))
    }

    pub fn qubits(&self, name: &str) -> Result<&[usize]> {
        Ok(&self.subsystem(name)?.qubits)
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        Ok(self.subsystem(name)?.width())
    }

    /// Qubits of several subsystems concatenated in the given order.
    pub fn qubits_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if names[..i].iter().any(|n| n.as_ref() == name) {
                return Err(Error::DuplicateSubsystem(name.to_owned()));
            }
            out.extend_from_slice(self.qubits(name)?);
        }
        Ok(out)
    }

    /// Layout of the reduced register produced by keeping `keep`, in that order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<RegisterLayout> {
        let sizes = keep
            .iter()
            .map(|n| Ok((n.as_ref(), self.width(n.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        RegisterLayout::new(&sizes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguous_indices() {
        let l = RegisterLayout::new(&[("C", 1), ("B", 2), ("E", 1)]).unwrap();
        assert_eq!(l.total_qubits(), 4);
        assert_eq!(l.qubits("B").unwrap(), &[1, 2]);
        assert_eq!(l.qubits_of(&["E", "C"]).unwrap(), vec![3, 0]);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(matches!(
            RegisterLayout::new(&[("C", 1), ("C", 1)]),
            Err(Error::DuplicateSubsystem(_))
        ));
        let gap = vec![
            Subsystem { name: "A".into(), qubits: vec![0] },
            Subsystem { name: "B".into(), qubits: vec![2] },
        ];
        assert!(matches!(
            RegisterLayout::from_subsystems(gap),
            Err(Error::InvalidLayout { .. })
        ));
        assert!(matches!(
            RegisterLayout::new(&[("C", 30)]),
            Err(Error::QubitBudget { requested: 30, .. })
        ));
        let l = RegisterLayout::new(&[("C", 1)]).unwrap();
        assert!(matches!(l.subsystem("X"), Err(Error::UnknownSubsystem(_))));
    }

    #[test]
    fn restrict_keeps_order() {
        let l = RegisterLayout::new(&[("C", 1), ("B", 2), ("E", 1)]).unwrap();
        let r = l.restrict(&["E", "B"]).unwrap();
        assert_eq!(r.qubits("E").unwrap(), &[0]);
        assert_eq!(r.qubits("B").unwrap(), &[1, 2]);
    }
}
