use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use super::{Cell, CohomologyValue, SpaceDescriptor, TableError};

#[derive(Clone, Debug, PartialEq)]
pub struct CellFact {
    pub value: CohomologyValue,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiFact {
    pub value: BigUint,
    pub provenance: String,
}

/// Cohomology and Betti facts about named spaces, each tagged with where it
/// came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactStore {
    spaces: BTreeMap<String, (SpaceDescriptor, String)>,
    cells: BTreeMap<(String, Cell), CellFact>,
    betti: BTreeMap<(String, u32), BettiFact>,
}

impl FactStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse a fact file. `source` prefixes every provenance string.
    pub fn ingest_facts(text: &str, source: &str) -> Result<Self, TableError> {
        let mut store = FactStore::new();
        store.ingest(text, source)?;
        Ok(store)
    }

    pub fn ingest(&mut self, text: &str, source: &str) -> Result<(), TableError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let provenance = format!("{source}:{line}");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let err = |msg: String| TableError::Parse { line, msg };
            match tokens.as_slice() {
                ["space", id, "dim", n, "index", r] => {
                    let dim = parse_num::<usize>(n).map_err(err)?;
                    let index = parse_num::<i64>(r).map_err(err)?;
                    self.insert_space(SpaceDescriptor::abstract_space(*id, dim, index), provenance)
                        .map_err(|e| at_line(e, line))?;
                }
                ["betti", id, b, v] => {
                    let i = b
                        .strip_prefix('b')
                        .ok_or_else(|| format!("expected b<i>, found {b}"))
                        .and_then(parse_num::<u32>)
                        .map_err(err)?;
                    let v = parse_num::<BigUint>(v).map_err(err)?;
                    self.insert_betti(id, i, v, provenance).map_err(|e| at_line(e, line))?;
                }
                ["vanish", id, "p", p, "q", q, "t", t] => {
                    let cell = parse_cell(p, q, t).map_err(err)?;
                    self.insert_cell(id, cell, CohomologyValue::Zero, provenance).map_err(|e| at_line(e, line))?;
                }
                ["dim", id, "p", p, "q", q, "t", t, "=", v] => {
                    let cell = parse_cell(p, q, t).map_err(err)?;
                    let v = parse_num::<BigUint>(v).map_err(err)?;
                    self.insert_cell(id, cell, CohomologyValue::from_dim(v), provenance)
                        .map_err(|e| at_line(e, line))?;
                }
                _ => return Err(err(format!("unrecognized fact `{content}`"))),
            }
        }
        Ok(())
    }

    pub fn insert_space(&mut self, space: SpaceDescriptor, provenance: String) -> Result<(), TableError> {
        match self.spaces.get(&space.id) {
            Some((old, _)) if old.dim != space.dim || old.index != space.index => Err(TableError::Contradiction {
                what: format!("space {}", space.id),
                first: old.to_string(),
                second: space.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.spaces.insert(space.id.clone(), (space, provenance));
                Ok(())
            }
        }
    }

    fn require_space(&self, id: &str) -> Result<&SpaceDescriptor, TableError> {
        self.space(id).ok_or_else(|| TableError::UnknownSpace(id.to_string()))
    }

    pub fn insert_cell(&mut self, id: &str, cell: Cell, value: CohomologyValue, provenance: String) -> Result<(), TableError> {
        let dim = self.require_space(id)?.dim;
        if cell.p > dim || cell.q > dim {
            return Err(TableError::CellOutOfRange { cell, dim });
        }
        if !value.is_known() {
            return Ok(());
        }
        let key = (id.to_string(), cell);
        match self.cells.get(&key) {
            Some(old) if old.value != value => Err(TableError::Contradiction {
                what: format!("H^{}({id}, Ω^{}({}))", cell.p, cell.q, cell.t),
                first: format!("{} ({})", old.value, old.provenance),
                second: format!("{value} ({provenance})"),
            }),
            Some(_) => Ok(()),
            None => {
                self.cells.insert(key, CellFact { value, provenance });
                Ok(())
            }
        }
    }

    pub fn insert_betti(&mut self, id: &str, i: u32, value: BigUint, provenance: String) -> Result<(), TableError> {
        let dim = self.require_space(id)?.dim;
        if i as usize > 2 * dim {
            return Err(TableError::InvalidSpace(format!("b{i} exceeds real dimension of {id}")));
        }
        let key = (id.to_string(), i);
        match self.betti.get(&key) {
            Some(old) if old.value != value => Err(TableError::Contradiction {
                what: format!("b{i}({id})"),
                first: format!("{} ({})", old.value, old.provenance),
                second: format!("{value} ({provenance})"),
            }),
            Some(_) => Ok(()),
            None => {
                self.betti.insert(key, BettiFact { value, provenance });
                Ok(())
            }
        }
    }

    pub fn space(&self, id: &str) -> Option<&SpaceDescriptor> {
        self.spaces.get(id).map(|(s, _)| s)
    }

    pub fn spaces(&self) -> impl Iterator<Item = &SpaceDescriptor> {
        self.spaces.values().map(|(s, _)| s)
    }

    pub fn cell(&self, id: &str, cell: Cell) -> Option<&CellFact> {
        self.cells.get(&(id.to_string(), cell))
    }

    pub fn betti(&self, id: &str, i: u32) -> Option<&BettiFact> {
        self.betti.get(&(id.to_string(), i))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&str, Cell, &CellFact)> {
        self.cells.iter().map(|((id, c), f)| (id.as_str(), *c, f))
    }

    pub fn bettis(&self) -> impl Iterator<Item = (&str, u32, &BettiFact)> {
        self.betti.iter().map(|((id, i), f)| (id.as_str(), *i, f))
    }

    pub fn remove_cell(&mut self, id: &str, cell: Cell) -> Option<CellFact> {
        self.cells.remove(&(id.to_string(), cell))
    }

    pub fn remove_betti(&mut self, id: &str, i: u32) -> Option<BettiFact> {
        self.betti.remove(&(id.to_string(), i))
    }

    pub fn len(&self) -> usize {
        self.cells.len() + self.betti.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Serialize back to the fact-file grammar, with provenance as comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, prov) in self.spaces.values() {
            let _ = writeln!(out, "space {} dim {} index {}  # {prov}", s.id, s.dim, s.index);
        }
        for ((id, i), f) in &self.betti {
            let _ = writeln!(out, "betti {id} b{i} {}  # {}", f.value, f.provenance);
        }
        for ((id, c), f) in &self.cells {
            match &f.value {
                CohomologyValue::Zero => {
                    let _ = writeln!(out, "vanish {id} p {} q {} t {}  # {}", c.p, c.q, c.t, f.provenance);
                }
                v => {
                    let _ = writeln!(out, "dim {id} p {} q {} t {} = {v}  # {}", c.p, c.q, c.t, f.provenance);
                }
            }
        }
        out
    }
}

fn at_line(e: TableError, line: usize) -> TableError {
    match e {
        TableError::Parse { .. } => e,
        other => TableError::Parse { line, msg: other.to_string() },
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>().map_err(|_| format!("expected a number, found `{s}`"))
}

fn parse_cell(p: &str, q: &str, t: &str) -> Result<Cell, String> {
    Ok(Cell::new(parse_num(p)?, parse_num(q)?, parse_num(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "space S10 dim 10 index 8\n";

    #[test]
    fn vanishing_line() {
        let s = FactStore::ingest_facts(&format!("{HEADER}vanish S10 p 1 q 6 t 4\n"), "f").unwrap();
        let fact = s.cell("S10", Cell::new(1, 6, 4)).unwrap();
        assert_eq!(fact.value, CohomologyValue::Zero);
        assert_eq!(fact.provenance, "f:2");
    }

    #[test]
    fn betti_line() {
        let s = FactStore::ingest_facts(&format!("{HEADER}betti S10 b3 0 # odd\n"), "f").unwrap();
        assert_eq!(s.betti("S10", 3).unwrap().value, BigUint::from(0u32));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let e = FactStore::ingest_facts(&format!("{HEADER}\nvanish S10 p\n"), "f").unwrap_err();
        assert!(matches!(e, TableError::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn duplicates_deduplicated_and_contradictions_rejected() {
        let text = format!("{HEADER}vanish S10 p 0 q 3 t 2\nvanish S10 p 0 q 3 t 2\n");
        assert_eq!(FactStore::ingest_facts(&text, "f").unwrap().len(), 1);
        let bad = format!("{HEADER}vanish S10 p 0 q 3 t 2\ndim S10 p 0 q 3 t 2 = 4\n");
        assert!(matches!(FactStore::ingest_facts(&bad, "f"), Err(TableError::Parse { line: 3, .. })));
    }

    #[test]
    fn undeclared_space_rejected() {
        assert!(FactStore::ingest_facts("vanish Z p 0 q 0 t 1\n", "f").is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = format!("{HEADER}betti S10 b2 1\nvanish S10 p 1 q 3 t 1\ndim S10 p 2 q 2 t 0 = 1\n");
        let s = FactStore::ingest_facts(&text, "f").unwrap();
        let again = FactStore::ingest_facts(&s.to_text(), "g").unwrap();
        assert_eq!(again.len(), s.len());
        assert_eq!(again.cell("S10", Cell::new(2, 2, 0)).unwrap().value, CohomologyValue::one());
    }
}
