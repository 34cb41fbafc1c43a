use std::fmt;

use num_bigint::BigUint;

use super::ChaseError;

/// A symbolic sheaf. Space identifiers refer to a [`super::Registry`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SheafExpr {
    /// `Ω^q_X(t)`
    Omega { space: String, q: i64, t: i64 },
    /// `Ω^q_Y(t)` restricted to the divisor `X ⊂ Y`.
    Restricted { ambient: String, section: String, q: i64, t: i64 },
    /// Pushforward to the base of `Ω^q` of the line-bundle total space,
    /// restricted to the cover and twisted by `t`.
    Pushforward { cover: String, q: i64, t: i64 },
    /// `O_X(t)`; canonicalized to `Omega` with `q = 0`.
    Structure { space: String, t: i64 },
    /// Direct sum, in the order the sequence bookkeeping lists it.
    Sum(Vec<SheafExpr>),
}

impl SheafExpr {
    pub fn omega(space: &str, q: i64, t: i64) -> Self {
        SheafExpr::Omega { space: space.to_string(), q, t }
    }

    pub fn restricted(ambient: &str, section: &str, q: i64, t: i64) -> Self {
        SheafExpr::Restricted { ambient: ambient.to_string(), section: section.to_string(), q, t }
    }

    pub fn pushforward(cover: &str, q: i64, t: i64) -> Self {
        SheafExpr::Pushforward { cover: cover.to_string(), q, t }
    }

    /// Structure sheaves become `Omega(_,0,_)`, nested sums are flattened and
    /// singleton sums unwrapped.
    pub fn canonical(self) -> Self {
        match self {
            SheafExpr::Structure { space, t } => SheafExpr::Omega { space, q: 0, t },
            SheafExpr::Sum(items) => {
                let mut flat = Vec::new();
                for item in items {
                    match item.canonical() {
                        SheafExpr::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().expect("one element")
                } else {
                    SheafExpr::Sum(flat)
                }
            }
            other => other,
        }
    }

    pub fn summands(&self) -> Vec<&SheafExpr> {
        match self {
            SheafExpr::Sum(items) => items.iter().collect(),
            other => vec![other],
        }
    }

    pub fn parse(s: &str) -> Result<Self, ChaseError> {
        let parts = split_top_level(s, '+');
        if parts.len() > 1 {
            let items = parts.into_iter().map(SheafExpr::parse).collect::<Result<Vec<_>, _>>()?;
            return Ok(SheafExpr::Sum(items).canonical());
        }
        let bad = || ChaseError::Syntax(format!("bad sheaf expression `{s}`"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let head = &s[..open];
        let args: Vec<&str> = s[open + 1..s.len() - 1].split(',').map(str::trim).collect();
        let int = |x: &str| x.parse::<i64>().map_err(|_| bad());
        let expr = match (head, args.as_slice()) {
            ("Omega", [x, q, t]) => SheafExpr::omega(x, int(q)?, int(t)?),
            ("OmegaR", [yx, q, t]) => {
                let (y, x) = yx.split_once('|').ok_or_else(bad)?;
                SheafExpr::restricted(y, x, int(q)?, int(t)?)
            }
            ("Push", [x, q, t]) => SheafExpr::pushforward(x, int(q)?, int(t)?),
            ("O", [x, t]) => SheafExpr::Structure { space: x.to_string(), t: int(t)? },
            _ => return Err(bad()),
        };
        Ok(expr.canonical())
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafExpr::Omega { space, q, t } => write!(f, "Omega({space},{q},{t})"),
            SheafExpr::Restricted { ambient, section, q, t } => write!(f, "OmegaR({ambient}|{section},{q},{t})"),
            SheafExpr::Pushforward { cover, q, t } => write!(f, "Push({cover},{q},{t})"),
            SheafExpr::Structure { space, t } => write!(f, "O({space},{t})"),
            SheafExpr::Sum(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// `H^p` of a sheaf expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group {
    pub p: i64,
    pub expr: SheafExpr,
}

impl Group {
    pub fn new(p: i64, expr: SheafExpr) -> Self {
        Group { p, expr: expr.canonical() }
    }

    pub fn parse(s: &str) -> Result<Self, ChaseError> {
        let bad = || ChaseError::Syntax(format!("bad cohomology group `{s}`"));
        let rest = s.strip_prefix('H').ok_or_else(bad)?;
        let open = rest.find('(').ok_or_else(bad)?;
        let p = rest[..open].parse::<i64>().map_err(|_| bad())?;
        let inner = rest[open..].strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        Ok(Group::new(p, SheafExpr::parse(inner)?))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}({})", self.p, self.expr)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapProperty {
    Injective,
    Surjective,
    Bijective,
    Zero,
}

impl MapProperty {
    /// Whether a fact with property `self` establishes `wanted`.
    pub fn implies(self, wanted: MapProperty) -> bool {
        self == wanted
            || (self == MapProperty::Bijective && matches!(wanted, MapProperty::Injective | MapProperty::Surjective))
    }

    pub fn name(self) -> &'static str {
        match self {
            MapProperty::Injective => "injective",
            MapProperty::Surjective => "surjective",
            MapProperty::Bijective => "bijective",
            MapProperty::Zero => "zero",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ChaseError> {
        match s {
            "injective" => Ok(MapProperty::Injective),
            "surjective" => Ok(MapProperty::Surjective),
            "bijective" => Ok(MapProperty::Bijective),
            "zero" => Ok(MapProperty::Zero),
            _ => Err(ChaseError::Syntax(format!("unknown map property `{s}`"))),
        }
    }
}

/// A statement the engine can establish.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// `dim H^p(expr) = value`
    Value(Group, BigUint),
    /// A chain of at least two groups; a single map when the chain has two.
    Map(Vec<Group>, MapProperty),
    /// `b_i(space) = value`
    Betti(String, u32, BigUint),
}

impl Claim {
    pub fn zero(g: Group) -> Self {
        Claim::Value(g, BigUint::default())
    }

    pub fn map(source: Group, target: Group, prop: MapProperty) -> Self {
        Claim::Map(vec![source, target], prop)
    }

    /// Parses `H0(...) = 0`, `b5(G) = 0`, or `map H..(..) -> H..(..) [-> ...] <property>`.
    pub fn parse(s: &str) -> Result<Self, ChaseError> {
        let bad = || ChaseError::Syntax(format!("bad claim `{s}`"));
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens.as_slice() {
            ["map", rest @ ..] => {
                let (prop, chain) = rest.split_last().ok_or_else(bad)?;
                let mut groups = Vec::new();
                for (i, tok) in chain.iter().enumerate() {
                    if i % 2 == 1 {
                        if *tok != "->" {
                            return Err(bad());
                        }
                    } else {
                        groups.push(Group::parse(tok)?);
                    }
                }
                if groups.len() < 2 || chain.len() % 2 == 0 {
                    return Err(bad());
                }
                Ok(Claim::Map(groups, MapProperty::parse(prop)?))
            }
            [lhs, "=", v] => {
                let value = v.parse::<BigUint>().map_err(|_| bad())?;
                if let Some(rest) = lhs.strip_prefix('b').filter(|r| !r.starts_with('(')) {
                    let open = rest.find('(').ok_or_else(bad)?;
                    let i = rest[..open].parse::<u32>().map_err(|_| bad())?;
                    let space = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                    Ok(Claim::Betti(space.to_string(), i, value))
                } else {
                    Ok(Claim::Value(Group::parse(lhs)?, value))
                }
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Value(g, v) => write!(f, "{g} = {v}"),
            Claim::Betti(s, i, v) => write!(f, "b{i}({s}) = {v}"),
            Claim::Map(chain, prop) => {
                write!(f, "map")?;
                for (i, g) in chain.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ->")?;
                    }
                    write!(f, " {g}")?;
                }
                write!(f, " {}", prop.name())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["Omega(X,2,1)", "OmegaR(Y|X,4,3)", "Push(X,3,2)", "Omega(Y,3,2)+Omega(Y,3,1)"] {
            assert_eq!(SheafExpr::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(SheafExpr::parse("O(X,3)").unwrap(), SheafExpr::omega("X", 0, 3));
        for s in ["H0(Omega(X,2,1)) = 0", "b5(G) = 0", "map H1(Omega(Y,1,0)) -> H1(Omega(X,1,0)) bijective"] {
            assert_eq!(Claim::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn malformed_rejected() {
        assert!(SheafExpr::parse("Omega(X,2)").is_err());
        assert!(Group::parse("H(Omega(X,1,1))").is_err());
        assert!(Claim::parse("map H0(Omega(X,1,1)) injective").is_err());
    }

    #[test]
    fn bijective_implies_both() {
        assert!(MapProperty::Bijective.implies(MapProperty::Injective));
        assert!(!MapProperty::Injective.implies(MapProperty::Surjective));
    }
}
