use std::fmt;
use std::sync::{Arc, OnceLock};

use super::AlgebraError;

/// Whether a symbol is a dependent variable of some flow or a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Variable,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolInfo {
    pub name: String,
    pub kind: SymbolKind,
}

/// An ordered registry of indeterminates. The registration order is the
/// variable order of the graded-lex term order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct SymbolTable {
    symbols: Vec<SymbolInfo>,
}

impl SymbolTable {
    pub fn new<'a>(
        entries: impl IntoIterator<Item = (&'a str, SymbolKind)>,
    ) -> Result<Self, AlgebraError> {
        let mut symbols: Vec<SymbolInfo> = Vec::new();
        for (name, kind) in entries {
            if symbols.iter().any(|s| s.name == name) {
                return Err(AlgebraError::DuplicateSymbol(name.to_string()));
            }
            symbols.push(SymbolInfo {
                name: name.to_string(),
                kind,
            });
        }
        Ok(SymbolTable { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn try_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.symbols[idx].name
    }

    pub fn kind(&self, idx: usize) -> SymbolKind {
        self.symbols[idx].kind
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.name.as_str())
    }

    /// Resolve a symbol by name, returning a handle usable with this table.
    pub fn symbol(&self, name: &str) -> Result<Symbol, AlgebraError> {
        self.index(name).map(Symbol)
    }
}

impl fmt::Display for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names().collect();
        write!(f, "{}", names.join(" "))
    }
}

/// Index of a registered symbol inside a [`SymbolTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub usize);

use SymbolKind::{Parameter as P, Variable as V};

/// Table for the three-dimensional family and its parameter restrictions.
pub fn main_table() -> Arc<SymbolTable> {
    static T: OnceLock<Arc<SymbolTable>> = OnceLock::new();
    T.get_or_init(|| {
        Arc::new(
            SymbolTable::new([
                ("x", V),
                ("y", V),
                ("z", V),
                ("t", P),
                ("eta", P),
                ("b", P),
                ("alpha0", P),
                ("alpha1", P),
                ("alpha2", P),
                ("alpha3", P),
                ("alpha4", P),
                ("beta0", P),
                ("beta1", P),
                ("beta2", P),
                ("beta3", P),
            ])
            .expect("static table"),
        )
    })
    .clone()
}

/// Table for the two-dimensional reductions (x = y and the P_VI limit).
///
/// `db` stands for the derivative of `b(t)`; `X1`, `X2` stand for the first
/// and second time derivatives of `X` in the elimination identity.
pub fn reduced_table() -> Arc<SymbolTable> {
    static T: OnceLock<Arc<SymbolTable>> = OnceLock::new();
    T.get_or_init(|| {
        Arc::new(
            SymbolTable::new([
                ("X", V),
                ("Y", V),
                ("x", V),
                ("y", V),
                ("z", V),
                ("t", P),
                ("eta", P),
                ("b", P),
                ("db", P),
                ("X1", P),
                ("X2", P),
                ("alpha0", P),
                ("alpha1", P),
                ("alpha2", P),
                ("alpha3", P),
                ("alpha4", P),
                ("A0", P),
                ("A1", P),
                ("A2", P),
                ("A3", P),
                ("A4", P),
            ])
            .expect("static table"),
        )
    })
    .clone()
}

/// Table for the two appendix systems (symmetric P_V and P_III forms).
pub fn appendix_table() -> Arc<SymbolTable> {
    static T: OnceLock<Arc<SymbolTable>> = OnceLock::new();
    T.get_or_init(|| {
        Arc::new(
            SymbolTable::new([
                ("f0", V),
                ("f1", V),
                ("f2", V),
                ("x", V),
                ("y", V),
                ("t", P),
                ("T", P),
                ("a", P),
                ("phi", P),
                ("eta", P),
                ("c", P),
                ("alpha0", P),
                ("alpha1", P),
                ("alpha2", P),
                ("alpha3", P),
                ("beta0", P),
                ("beta1", P),
                ("beta2", P),
            ])
            .expect("static table"),
        )
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let err = SymbolTable::new([("x", V), ("x", P)]).unwrap_err();
        assert!(matches!(err, AlgebraError::DuplicateSymbol(_)));
    }

    #[test]
    fn tables_register_expected_symbols() {
        let m = main_table();
        assert_eq!(m.index("x").unwrap(), 0);
        assert_eq!(m.kind(m.index("alpha2").unwrap()), SymbolKind::Parameter);
        assert!(m.index("f0").is_err());
        let a = appendix_table();
        assert_eq!(a.kind(a.index("f1").unwrap()), SymbolKind::Variable);
        assert!(Arc::ptr_eq(&main_table(), &m));
    }
}
