//! Oracle sequences.
//!
//! Each registered sequence `i ↦ ξᵢ` gets a fresh [`OracleHandle`]; the
//! oracle constant `Term::oracle(h)` fires rule 9 against it. Values are
//! produced on demand, checked for closedness at first access, and memoized
//! per index so repeated firings are deterministic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use thiserror::Error;

use crate::term::{OracleHandle, Term};

/// A total map from naturals to terms.
pub type Sequence = Arc<dyn Fn(usize) -> Term + Send + Sync>;

pub fn sequence<F: Fn(usize) -> Term + Send + Sync + 'static>(f: F) -> Sequence {
    Arc::new(f)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown oracle handle {0:?}")]
    UnknownHandle(OracleHandle),
    #[error("sequence {name} is not closed at index {index}")]
    NotClosed { name: String, index: usize },
    #[error("sequence {name} at index {index} refers to oracle {referenced:?}, which is not registered before it")]
    NotWellFounded { name: String, index: usize, referenced: OracleHandle },
    #[error("an oracle named {0} is already registered")]
    DuplicateName(String),
}

struct Entry {
    name: String,
    seq: Sequence,
    cache: Mutex<HashMap<usize, Result<Term, RegistryError>>>,
}

/// Append-only table of oracle sequences.
#[derive(Default)]
pub struct SeqRegistry {
    entries: RwLock<Vec<Arc<Entry>>>,
}

impl fmt::Debug for SeqRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.entries.read().unwrap().iter().map(|e| e.name.clone()).collect();
        f.debug_struct("SeqRegistry").field("entries", &names).finish()
    }
}

impl SeqRegistry {
    pub fn new() -> SeqRegistry {
        SeqRegistry::default()
    }

    /// Registers an anonymous sequence; it is printed as `@h<index>`.
    pub fn register_sequence(&self, seq: Sequence) -> OracleHandle {
        let mut entries = self.entries.write().unwrap();
        let handle = OracleHandle(entries.len() as u32);
        entries.push(Arc::new(Entry {
            name: format!("h{}", handle.0),
            seq,
            cache: Mutex::new(HashMap::new()),
        }));
        handle
    }

    pub fn register_named(&self, name: &str, seq: Sequence) -> Result<OracleHandle, RegistryError> {
        let mut entries = self.entries.write().unwrap();
        if entries.iter().any(|e| e.name == name) || is_raw_handle_name(name) {
            return Err(RegistryError::DuplicateName(name.to_string()));
        }
        let handle = OracleHandle(entries.len() as u32);
        entries.push(Arc::new(Entry { name: name.to_string(), seq, cache: Mutex::new(HashMap::new()) }));
        Ok(handle)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, handle: OracleHandle) -> bool {
        handle.index() < self.len()
    }

    pub fn lookup(&self, name: &str) -> Option<OracleHandle> {
        let entries = self.entries.read().unwrap();
        if let Some(i) = entries.iter().position(|e| e.name == name) {
            return Some(OracleHandle(i as u32));
        }
        let raw = name.strip_prefix('h')?.parse::<u32>().ok()?;
        ((raw as usize) < entries.len()).then_some(OracleHandle(raw))
    }

    pub fn name(&self, handle: OracleHandle) -> Option<String> {
        self.entries.read().unwrap().get(handle.index()).map(|e| e.name.clone())
    }

    fn entry(&self, handle: OracleHandle) -> Result<Arc<Entry>, RegistryError> {
        self.entries
            .read()
            .unwrap()
            .get(handle.index())
            .cloned()
            .ok_or(RegistryError::UnknownHandle(handle))
    }

    /// `ξₙ` for the sequence behind `handle`.
    pub fn fetch(&self, handle: OracleHandle, n: usize) -> Result<Term, RegistryError> {
        let entry = self.entry(handle)?;
        if let Some(cached) = entry.cache.lock().unwrap().get(&n) {
            return cached.clone();
        }
        // The sequence may itself consult the registry, so the lock is not
        // held while it runs.
        let value = (entry.seq)(n);
        let verdict = if !value.is_closed() {
            Err(RegistryError::NotClosed { name: entry.name.clone(), index: n })
        } else {
            let forward = value.oracles().find(|h| *h >= handle);
            match forward {
                Some(bad) => Err(RegistryError::NotWellFounded { name: entry.name.clone(), index: n, referenced: bad }),
                None => Ok(value),
            }
        };
        let mut cache = entry.cache.lock().unwrap();
        cache.entry(n).or_insert(verdict).clone()
    }
}

fn is_raw_handle_name(name: &str) -> bool {
    name.strip_prefix('h').is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{mk_numeral, Const};

    #[test]
    fn fresh_handles_are_distinct() {
        let reg = SeqRegistry::new();
        let h1 = reg.register_sequence(sequence(|_| Term::constant(Const::K)));
        let h2 = reg.register_sequence(sequence(|_| Term::constant(Const::K)));
        assert_ne!(h1, h2);
        assert_eq!(reg.fetch(h1, 17).unwrap(), Term::constant(Const::K));
    }

    #[test]
    fn open_value_is_rejected_with_index() {
        let reg = SeqRegistry::new();
        let h = reg.register_sequence(sequence(|i| if i == 3 { Term::p() } else { mk_numeral(i) }));
        assert_eq!(reg.fetch(h, 2).unwrap(), mk_numeral(2));
        let err = reg.fetch(h, 3).unwrap_err();
        assert_eq!(err, RegistryError::NotClosed { name: "h0".into(), index: 3 });
        // verdict is cached
        assert_eq!(reg.fetch(h, 3).unwrap_err(), err);
    }

    #[test]
    fn forward_references_are_rejected() {
        let reg = SeqRegistry::new();
        let h = reg.register_sequence(sequence(|_| Term::oracle(OracleHandle(0))));
        assert!(matches!(reg.fetch(h, 0), Err(RegistryError::NotWellFounded { .. })));
        let h2 = reg.register_sequence(sequence(|_| Term::oracle(OracleHandle(0))));
        assert!(reg.fetch(h2, 0).is_ok());
    }

    #[test]
    fn names_resolve() {
        let reg = SeqRegistry::new();
        let anon = reg.register_sequence(sequence(|_| Term::constant(Const::I)));
        let named = reg.register_named("xs", sequence(|_| Term::constant(Const::I))).unwrap();
        assert_eq!(reg.lookup("xs"), Some(named));
        assert_eq!(reg.lookup("h0"), Some(anon));
        assert_eq!(reg.lookup("h7"), None);
        assert!(reg.register_named("xs", sequence(|_| Term::constant(Const::I))).is_err());
        assert!(reg.register_named("h3", sequence(|_| Term::constant(Const::I))).is_err());
        assert!(matches!(reg.fetch(OracleHandle(9), 0), Err(RegistryError::UnknownHandle(_))));
    }
}
