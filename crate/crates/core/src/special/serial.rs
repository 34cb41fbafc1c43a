use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use super::certificate::{Evidence, Premise, SpecialCohomologyCertificate, Support};
use super::predicate::Condition;
use super::SpecialError;
use crate::tables::{Cell, CohomologyTable, CohomologyValue, SpaceDescriptor, SpaceKind, Window};
use crate::weyl::Grassmannian;

impl SpecialCohomologyCertificate {
    /// Fact-file lines for the table, followed by the evidence section.
    pub fn to_text(&self) -> String {
        let s = &self.space;
        let mut out = String::new();
        let _ = writeln!(out, "certificate {}", s.id);
        let _ = match &s.kind {
            SpaceKind::Grassmannian(g) => writeln!(out, "kind grassmannian {} {}", g.k, g.n),
            SpaceKind::Section { parent, degree } => writeln!(out, "kind section {parent} {degree}"),
            SpaceKind::CyclicCover { parent, k, d } => writeln!(out, "kind cover {parent} {k} {d}"),
            SpaceKind::Abstract => writeln!(out, "kind abstract"),
        };
        if let Some(h) = &s.degree {
            let _ = writeln!(out, "degree {h}");
        }
        let _ = writeln!(out, "window {} {}", self.window.min, self.window.max);
        if let Some(p) = &self.parent {
            let _ = writeln!(out, "parent {p}");
        }
        let _ = writeln!(out, "space {} dim {} index {}", s.id, s.dim, s.index);
        for (c, v) in self.table.stored() {
            let _ = match v {
                CohomologyValue::Zero => writeln!(out, "vanish {} p {} q {} t {}", s.id, c.p, c.q, c.t),
                v => writeln!(out, "dim {} p {} q {} t {} = {v}", s.id, c.p, c.q, c.t),
            };
        }
        for (c, e) in &self.evidence {
            let _ = write!(out, "evidence {} {} {} {}", e.condition.label(), c.p, c.q, c.t);
            let _ = match &e.support {
                Support::CellChecked(v) => writeln!(out, " checked {v}"),
                Support::RuleBacked { rule, premises } => {
                    let _ = write!(out, " rule {rule}");
                    for p in premises {
                        let _ = write!(out, " {p}");
                    }
                    writeln!(out)
                }
            };
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SpecialError> {
        let mut id = None;
        let mut kind = None;
        let mut degree = None;
        let mut window = None;
        let mut parent = None;
        let mut header = None;
        let mut cells = Vec::new();
        let mut evidence = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| SpecialError::Parse { line, msg };
            let tok: Vec<&str> = content.split_whitespace().collect();
            match tok.as_slice() {
                ["certificate", s] => id = Some(s.to_string()),
                ["kind", "grassmannian", k, n] => {
                    let g = Grassmannian::new(num(k).map_err(err)?, num(n).map_err(err)?).map_err(|e| err(e.to_string()))?;
                    kind = Some(SpaceKind::Grassmannian(g));
                }
                ["kind", "section", p, d] => {
                    kind = Some(SpaceKind::Section { parent: p.to_string(), degree: num(d).map_err(err)? })
                }
                ["kind", "cover", p, k, d] => {
                    kind = Some(SpaceKind::CyclicCover {
                        parent: p.to_string(),
                        k: num(k).map_err(err)?,
                        d: num(d).map_err(err)?,
                    })
                }
                ["kind", "abstract"] => kind = Some(SpaceKind::Abstract),
                ["degree", h] => degree = Some(num::<BigUint>(h).map_err(err)?),
                ["window", a, b] => {
                    window = Some(Window::new(num(a).map_err(err)?, num(b).map_err(err)?).map_err(|e| err(e.to_string()))?)
                }
                ["parent", p] => parent = Some(p.to_string()),
                ["space", s, "dim", n, "index", r] => {
                    header = Some((s.to_string(), num::<usize>(n).map_err(err)?, num::<i64>(r).map_err(err)?))
                }
                ["vanish", _, "p", p, "q", q, "t", t] => {
                    cells.push((line, cell(p, q, t).map_err(err)?, CohomologyValue::Zero))
                }
                ["dim", _, "p", p, "q", q, "t", t, "=", v] => {
                    cells.push((line, cell(p, q, t).map_err(err)?, value(v).map_err(err)?))
                }
                ["evidence", cond, p, q, t, rest @ ..] => {
                    let condition = Condition::from_label(cond).ok_or_else(|| err(format!("bad condition {cond}")))?;
                    let c = cell(p, q, t).map_err(err)?;
                    let support = match rest {
                        ["checked", v] => Support::CellChecked(value(v).map_err(err)?),
                        ["rule", name, premises @ ..] => Support::RuleBacked {
                            rule: name.to_string(),
                            premises: premises.iter().map(|p| premise(p)).collect::<Result<_, _>>().map_err(err)?,
                        },
                        _ => return Err(err("evidence needs `checked <v>` or `rule <name> ...`".into())),
                    };
                    evidence.insert(c, Evidence { condition, support });
                }
                _ => return Err(err(format!("unrecognized line `{content}`"))),
            }
        }
        let missing = |what: &str| SpecialError::Parse { line: 0, msg: format!("missing {what} line") };
        let (sid, dim, index) = header.ok_or_else(|| missing("space"))?;
        if id.as_deref() != Some(sid.as_str()) {
            return Err(missing("matching certificate"));
        }
        let space = SpaceDescriptor { id: sid, dim, index, degree, kind: kind.ok_or_else(|| missing("kind"))? };
        let window = window.ok_or_else(|| missing("window"))?;
        let mut table = CohomologyTable::new(space.clone(), window);
        for (line, c, v) in cells {
            table.set(c, v).map_err(|e| SpecialError::Parse { line, msg: e.to_string() })?;
        }
        Ok(SpecialCohomologyCertificate { space, window, table, evidence, parent })
    }
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("expected a number, found `{s}`"))
}

fn cell(p: &str, q: &str, t: &str) -> Result<Cell, String> {
    Ok(Cell::new(num(p)?, num(q)?, num(t)?))
}

fn value(s: &str) -> Result<CohomologyValue, String> {
    if s == "?" {
        Ok(CohomologyValue::Unknown)
    } else {
        Ok(CohomologyValue::from_dim(num::<BigUint>(s)?))
    }
}

fn premise(s: &str) -> Result<Premise, String> {
    let (space, rest) = s.rsplit_once(':').ok_or_else(|| format!("bad premise `{s}`"))?;
    let (idx, v) = rest.split_once('=').ok_or_else(|| format!("bad premise `{s}`"))?;
    let parts: Vec<&str> = idx.split(',').collect();
    let [p, q, t] = parts.as_slice() else { return Err(format!("bad premise `{s}`")) };
    Ok(Premise::new(space, cell(p, q, t)?, value(v)?))
}

#[cfg(test)]
mod tests {
    use crate::special::{propagate_cyclic, propagate_section, SpecialCohomologyCertificate};
    use crate::tables::{CohomologyTable, Window};
    use crate::weyl::Grassmannian;

    #[test]
    fn round_trip_checked_and_propagated() {
        let t = CohomologyTable::from_grassmannian(Grassmannian::projective(4).unwrap(), Window::symmetric(10));
        let p4 = SpecialCohomologyCertificate::certify(t).unwrap();
        assert_eq!(SpecialCohomologyCertificate::from_text(&p4.to_text()).unwrap(), p4);
        let q = propagate_section(&p4, 2, Window::symmetric(5)).unwrap();
        let back = SpecialCohomologyCertificate::from_text(&q.to_text()).unwrap();
        assert_eq!(back, q);
        back.validate().unwrap();
        let c = propagate_cyclic(&p4, 2, 2, Window::symmetric(3)).unwrap();
        assert_eq!(SpecialCohomologyCertificate::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = SpecialCohomologyCertificate::from_text("certificate X\nbogus\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
