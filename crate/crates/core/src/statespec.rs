//! Initial-state mini-grammar.
//!
//! * `1,8̄` or `1,8bar` or `1,8b`: one label in `1..=8` per slot, slot 0
//!   first. The bar marks an anti-quark slot; it is optional there and
//!   rejected on quark slots.
//! * `gs:B=0`, `gs:1/3`: lowest eigenstate of a baryon sector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::StateVector;
use crate::lattice::{BaryonSector, LatticeOperator, Mapping};
use crate::qu8it::D;
use crate::spectrum::ground_state;

const COMBINING_MACRON: char = '\u{304}';

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum StateSpec {
    /// One-based labels with their bar marks.
    Basis(Vec<(u8, bool)>),
    GroundState(BaryonSector),
}

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::BadStateSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_label(spec: &str, tok: &str) -> Result<(u8, bool)> {
    let tok = tok.trim();
    let mut chars = tok.chars();
    let digit = chars
        .next()
        .and_then(|ch| ch.to_digit(10))
        .filter(|d| (1..=D as u32).contains(d))
        .ok_or_else(|| bad(spec, format!("label {tok:?} must start with a digit 1..8")))?;
    let rest = chars.as_str();
    let barred = match rest {
        "" => false,
        "bar" | "b" => true,
        r if r.chars().eq([COMBINING_MACRON]) => true,
        _ => return Err(bad(spec, format!("unrecognised suffix in {tok:?}"))),
    };
    Ok((digit as u8, barred))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(sec) = t.strip_prefix("gs:") {
            let sector = sec.parse::<BaryonSector>().map_err(|e| bad(s, e.to_string()))?;
            return Ok(StateSpec::GroundState(sector));
        }
        if t.is_empty() {
            return Err(bad(s, "empty state spec"));
        }
        let labels = t
            .split(',')
            .map(|tok| parse_label(s, tok))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateSpec::Basis(labels))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::GroundState(s) => write!(f, "gs:B={s}"),
            StateSpec::Basis(labels) => {
                for (k, (d, barred)) in labels.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{d}")?;
                    if *barred {
                        write!(f, "{COMBINING_MACRON}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl From<StateSpec> for String {
    fn from(s: StateSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for StateSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl StateSpec {
    /// Register index of a basis spec for a register of the given layout.
    pub fn basis_index(&self, h: &LatticeOperator) -> Result<Option<usize>> {
        let StateSpec::Basis(labels) = self else {
            return Ok(None);
        };
        let p = &h.model.params;
        let spec = self.to_string();
        if labels.len() != p.qu8it_count() {
            return Err(bad(
                &spec,
                format!("{} labels given, register has {} slots", labels.len(), p.qu8it_count()),
            ));
        }
        let mut idx = 0usize;
        for (slot, &(d, barred)) in labels.iter().enumerate() {
            if barred && !p.is_anti_slot(slot) {
                return Err(bad(&spec, format!("slot {slot} holds quarks; drop the bar")));
            }
            idx = idx * D + (d as usize - 1);
        }
        Ok(Some(idx))
    }

    /// Normalized initial state on the qu8it register of `h`.
    pub fn resolve(&self, h: &LatticeOperator, dense_cap: usize) -> Result<StateVector> {
        if h.model.mapping != Mapping::Qu8it {
            return Err(bad(&self.to_string(), "states are specified on the qu8it register"));
        }
        match self {
            StateSpec::GroundState(sector) => ground_state(h, *sector, dense_cap),
            StateSpec::Basis(_) => {
                let idx = self.basis_index(h)?.unwrap_or(0);
                Ok(StateVector::basis(h.dim(), idx))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_qu8it_hamiltonian, LatticeParams};

    fn h11() -> LatticeOperator {
        build_qu8it_hamiltonian(&LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0)).unwrap()
    }

    #[test]
    fn bar_spellings_agree() {
        let a: StateSpec = "1,8\u{304}".parse().unwrap();
        let b: StateSpec = "1,8bar".parse().unwrap();
        let c: StateSpec = " 1 , 8b ".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.to_string(), "1,8\u{304}");
    }

    #[test]
    fn basis_index_is_slot_major() {
        let h = h11();
        let s: StateSpec = "2,8bar".parse().unwrap();
        assert_eq!(s.basis_index(&h).unwrap(), Some(8 + 7));
        let psi = s.resolve(&h, 64).unwrap();
        assert_eq!(psi.amplitudes[15].re, 1.0);
    }

    #[test]
    fn rejects_malformed() {
        let h = h11();
        for s in ["", "0,1", "9,1", "1,x", "1,8q", "gs:B=1/2"] {
            assert!(matches!(s.parse::<StateSpec>(), Err(Error::BadStateSpec { .. })), "{s}");
        }
        let wrong_len: StateSpec = "1".parse().unwrap();
        assert!(wrong_len.resolve(&h, 64).is_err());
        let bar_on_quark: StateSpec = "1bar,1".parse().unwrap();
        assert!(matches!(bar_on_quark.resolve(&h, 64), Err(Error::BadStateSpec { .. })));
    }

    #[test]
    fn ground_state_spec() {
        let s: StateSpec = "gs:B=0".parse().unwrap();
        assert_eq!(s, StateSpec::GroundState(BaryonSector::new(0)));
        assert_eq!(s.to_string().parse::<StateSpec>().unwrap(), s);
        let psi = s.resolve(&h11(), 64).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn serde_as_string() {
        let s: StateSpec = "3,5bar".parse().unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<StateSpec>(&js).unwrap(), s);
    }
}
