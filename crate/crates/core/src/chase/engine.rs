use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::expr::{Claim, Group, MapProperty, SheafExpr};
use super::registry::Registry;
use super::ses::Ses;
use super::sources::{FactRef, FactSources};
use super::ChaseError;

pub type StepId = usize;

/// One derivation: a claim, the rule that produced it, an optional context
/// (the sequence, cupping or restriction it was read from) and premises.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub id: StepId,
    pub claim: Claim,
    pub rule: String,
    pub context: Option<String>,
    pub premises: Vec<StepId>,
}

/// A map or composite property emitted by a named rule.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismFact {
    pub chain: Vec<Group>,
    pub property: MapProperty,
    pub justification: &'static str,
}

impl MorphismFact {
    pub fn claim(&self) -> Claim {
        Claim::Map(self.chain.clone(), self.property)
    }
}

/// Where cupping with the polarization is read off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CuppingContext {
    /// `H^{p-1}(Ω^{q-1}_Y) → H^{p-1}(Ω^{q-1}_X) → H^{p-1}(Ω^q_{Y|X}(d)) → H^p(Ω^q_Y)`
    Section { ambient: String, section: String, p: i64, q: i64 },
    /// Restriction `H^p(Ω^q_Y) → H^p(Ω^q_X)` to a divisor.
    Restriction { ambient: String, section: String, p: i64, q: i64 },
    /// The component `H^{p-1}(Ω^{q-1}_Y) → H^p(Ω^q_Y)` of the connecting
    /// map of the pushforward sequence, in the layer of twist `layer·d`.
    Cover { cover: String, p: i64, q: i64, layer: u32 },
}

/// The cupping and Lefschetz facts, restricted to the ranges where they hold.
pub fn cupping_rule(reg: &Registry, ctx: &CuppingContext) -> Result<MorphismFact, ChaseError> {
    let out_of_range = |what: String| Err(ChaseError::OutOfRange(what));
    match ctx {
        CuppingContext::Section { ambient, section, p, q } => {
            let (parent, d) = reg.section_of(section).ok_or_else(|| ChaseError::Space(format!("{section} is not a divisor")))?;
            if parent != ambient {
                return Err(ChaseError::Space(format!("{section} is not a divisor in {ambient}")));
            }
            let dim_y = reg.get(ambient)?.dim as i64;
            let dim_x = dim_y - 1;
            let chain = vec![
                Group::new(p - 1, SheafExpr::omega(ambient, q - 1, 0)),
                Group::new(p - 1, SheafExpr::omega(section, q - 1, 0)),
                Group::new(p - 1, SheafExpr::restricted(ambient, section, *q, d as i64)),
                Group::new(*p, SheafExpr::omega(ambient, *q, 0)),
            ];
            if *p < 1 || *q < 1 {
                return out_of_range(format!("cupping needs p, q >= 1, got p={p} q={q}"));
            }
            if reg.is_special(ambient) && p + q < dim_x + 1 {
                Ok(MorphismFact { chain, property: MapProperty::Bijective, justification: "cupping-lemma" })
            } else if p + q - 2 < dim_y {
                Ok(MorphismFact { chain, property: MapProperty::Injective, justification: "hard-lefschetz" })
            } else {
                out_of_range(format!("cupping from degree {} on {ambient} of dimension {dim_y}", p + q - 2))
            }
        }
        CuppingContext::Restriction { ambient, section, p, q } => {
            match reg.section_of(section) {
                Some((parent, _)) if parent == ambient => {}
                _ => return Err(ChaseError::Space(format!("{section} is not a divisor in {ambient}"))),
            }
            let dim_x = reg.get(section)?.dim as i64;
            let chain = vec![
                Group::new(*p, SheafExpr::omega(ambient, *q, 0)),
                Group::new(*p, SheafExpr::omega(section, *q, 0)),
            ];
            if *p < 0 || *q < 0 {
                return out_of_range(format!("restriction needs p, q >= 0, got p={p} q={q}"));
            }
            if p + q < dim_x {
                Ok(MorphismFact { chain, property: MapProperty::Bijective, justification: "lefschetz-restriction" })
            } else if p + q == dim_x {
                Ok(MorphismFact { chain, property: MapProperty::Injective, justification: "lefschetz-restriction" })
            } else {
                out_of_range(format!("restriction in degree {} to {section} of dimension {dim_x}", p + q))
            }
        }
        CuppingContext::Cover { cover, p, q, layer } => {
            let (base, k, _) = reg.cover_of(cover).ok_or_else(|| ChaseError::Space(format!("{cover} is not a cyclic cover")))?;
            let dim_y = reg.get(base)?.dim as i64;
            let chain = vec![
                Group::new(p - 1, SheafExpr::omega(base, q - 1, 0)),
                Group::new(*p, SheafExpr::omega(base, *q, 0)),
            ];
            if *layer == 0 || *layer > k || *p < 1 || *q < 1 {
                return out_of_range(format!("cover layer {layer} outside 1..={k} or p, q < 1"));
            }
            if *layer == k {
                Ok(MorphismFact { chain, property: MapProperty::Zero, justification: "cover-trivial-layer" })
            } else if p + q - 2 < dim_y {
                Ok(MorphismFact { chain, property: MapProperty::Injective, justification: "cover-cupping" })
            } else {
                out_of_range(format!("cover cupping from degree {} on {base}", p + q - 2))
            }
        }
    }
}

/// A restriction map `H^0(Ω^q_Y(c)) → H^0(Ω^q_X(c))` whose surjectivity
/// waits on `H^1(Ω^q_Y) = 0` when `c` equals the divisor degree.
#[derive(Clone, Debug, PartialEq)]
struct PendingRestriction {
    source: Group,
    target: Group,
    hypothesis: Group,
}

/// Fact store and derivation log of one chase.
#[derive(Clone, Debug)]
pub struct ChaseState {
    pub registry: Registry,
    sources: FactSources,
    sequences: Vec<(Ses, Vec<Group>)>,
    universe: BTreeSet<Group>,
    values: BTreeMap<Group, StepId>,
    maps: BTreeMap<(Vec<Group>, MapProperty), StepId>,
    edges: BTreeSet<(Group, Group)>,
    chains: BTreeSet<Vec<Group>>,
    betti: BTreeMap<(String, u32), StepId>,
    pending: Vec<PendingRestriction>,
    missing: BTreeSet<FactRef>,
    steps: Vec<Step>,
    known: HashMap<Claim, StepId>,
}

impl ChaseState {
    pub fn new(registry: Registry, sources: FactSources) -> Self {
        ChaseState {
            registry,
            sources,
            sequences: Vec::new(),
            universe: BTreeSet::new(),
            values: BTreeMap::new(),
            maps: BTreeMap::new(),
            edges: BTreeSet::new(),
            chains: BTreeSet::new(),
            betti: BTreeMap::new(),
            pending: Vec::new(),
            missing: BTreeSet::new(),
            steps: Vec::new(),
            known: HashMap::new(),
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn sequences(&self) -> impl Iterator<Item = &Ses> {
        self.sequences.iter().map(|(s, _)| s)
    }

    /// Facts a script cited that no source could supply.
    pub fn missing_facts(&self) -> impl Iterator<Item = &FactRef> {
        self.missing.iter()
    }

    /// Hypotheses of restriction-surjectivity rules still waiting.
    pub fn pending_hypotheses(&self) -> Vec<Claim> {
        self.pending.iter().map(|p| Claim::zero(p.hypothesis.clone())).collect()
    }

    pub fn value(&self, g: &Group) -> Option<(&BigUint, StepId)> {
        let id = *self.values.get(g)?;
        match &self.steps[id].claim {
            Claim::Value(_, v) => Some((v, id)),
            _ => None,
        }
    }

    fn betti_value(&self, space: &str, i: u32) -> Option<(&BigUint, StepId)> {
        let id = *self.betti.get(&(space.to_string(), i))?;
        match &self.steps[id].claim {
            Claim::Betti(_, _, v) => Some((v, id)),
            _ => None,
        }
    }

    fn is_zero(&self, g: &Group) -> Option<StepId> {
        self.value(g).filter(|(v, _)| v.is_zero()).map(|(_, id)| id)
    }

    /// Step establishing `prop` for the chain, if any.
    pub fn map_has(&self, chain: &[Group], prop: MapProperty) -> Option<StepId> {
        let key = (chain.to_vec(), prop);
        if let Some(id) = self.maps.get(&key) {
            return Some(*id);
        }
        if matches!(prop, MapProperty::Injective | MapProperty::Surjective) {
            return self.maps.get(&(chain.to_vec(), MapProperty::Bijective)).copied();
        }
        None
    }

    /// Step that established `claim`, including maps implied by a bijective fact.
    pub fn established(&self, claim: &Claim) -> Option<StepId> {
        match claim {
            Claim::Value(g, v) => self.value(g).filter(|(w, _)| *w == v).map(|(_, id)| id),
            Claim::Betti(s, i, v) => self.betti_value(s, *i).filter(|(w, _)| *w == v).map(|(_, id)| id),
            Claim::Map(chain, prop) => {
                if *prop == MapProperty::Bijective {
                    let inj = self.map_has(chain, MapProperty::Injective)?;
                    let surj = self.map_has(chain, MapProperty::Surjective)?;
                    Some(inj.max(surj))
                } else {
                    self.map_has(chain, *prop)
                }
            }
        }
    }

    /// Every step needed to support `claim` (two for a bijection assembled
    /// from separate injectivity and surjectivity).
    pub fn support(&self, claim: &Claim) -> Option<Vec<StepId>> {
        if let Claim::Map(chain, MapProperty::Bijective) = claim {
            let inj = self.map_has(chain, MapProperty::Injective)?;
            let surj = self.map_has(chain, MapProperty::Surjective)?;
            let mut ids = vec![inj, surj];
            ids.dedup();
            return Some(ids);
        }
        self.established(claim).map(|id| vec![id])
    }

    fn touch(&mut self, g: &Group) {
        if self.universe.insert(g.clone()) {
            if let SheafExpr::Sum(items) = &g.expr {
                for item in items.clone() {
                    self.touch(&Group::new(g.p, item));
                }
            }
        }
    }

    /// Record a claim. Returns whether it was new.
    pub fn add(&mut self, claim: Claim, rule: &str, context: Option<String>, premises: Vec<StepId>) -> Result<bool, ChaseError> {
        if self.known.contains_key(&claim) {
            return Ok(false);
        }
        match &claim {
            Claim::Value(g, v) => {
                if let Some((old, id)) = self.value(g) {
                    if old == v {
                        return Ok(false);
                    }
                    return Err(self.contradiction(&claim, rule, &context, &premises, id));
                }
            }
            Claim::Betti(s, i, v) => {
                if let Some((old, id)) = self.betti_value(s, *i) {
                    if old == v {
                        return Ok(false);
                    }
                    return Err(self.contradiction(&claim, rule, &context, &premises, id));
                }
            }
            Claim::Map(chain, prop) => {
                if self.map_has(chain, *prop).is_some() {
                    return Ok(false);
                }
            }
        }
        let id = self.steps.len();
        match &claim {
            Claim::Value(g, _) => {
                self.touch(g);
                self.values.insert(g.clone(), id);
            }
            Claim::Betti(s, i, _) => {
                self.betti.insert((s.clone(), *i), id);
            }
            Claim::Map(chain, prop) => {
                for g in chain {
                    self.touch(g);
                }
                if chain.len() == 2 {
                    self.edges.insert((chain[0].clone(), chain[1].clone()));
                } else {
                    self.chains.insert(chain.clone());
                }
                self.maps.insert((chain.clone(), *prop), id);
            }
        }
        self.known.insert(claim.clone(), id);
        self.steps.push(Step { id, claim, rule: rule.to_string(), context, premises });
        Ok(true)
    }

    fn contradiction(&self, claim: &Claim, rule: &str, context: &Option<String>, premises: &[StepId], existing: StepId) -> ChaseError {
        let mut chain = format!("new: {claim} by {rule}");
        if let Some(c) = context {
            chain.push_str(&format!(" [{c}]"));
        }
        self.describe_cone(&mut chain, premises);
        chain.push_str(&format!("\nexisting: {}", self.steps[existing].claim));
        self.describe_cone(&mut chain, &[existing]);
        ChaseError::Contradiction(chain)
    }

    fn describe_cone(&self, out: &mut String, roots: &[StepId]) {
        for id in self.cone(roots) {
            let s = &self.steps[id];
            out.push_str(&format!("\n  {} {} by {}", s.id, s.claim, s.rule));
            if let Some(c) = &s.context {
                out.push_str(&format!(" [{c}]"));
            }
        }
    }

    /// Steps the given ones depend on, in derivation order.
    pub fn cone(&self, roots: &[StepId]) -> Vec<StepId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<StepId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.steps[id].premises.iter().copied());
            }
        }
        seen.into_iter().collect()
    }

    pub fn add_goal_group(&mut self, claim: &Claim) {
        match claim {
            Claim::Value(g, _) => self.touch(g),
            Claim::Map(chain, _) => {
                for g in chain {
                    self.touch(g);
                }
            }
            Claim::Betti(..) => {}
        }
    }

    pub fn add_sequence(&mut self, ses: Ses) -> Result<(), ChaseError> {
        if self.sequences.iter().any(|(s, _)| *s == ses) {
            return Ok(());
        }
        let les = ses.long_exact_sequence(&self.registry)?;
        for g in &les {
            self.touch(g);
        }
        for w in les.windows(2) {
            self.edges.insert((w[0].clone(), w[1].clone()));
        }
        self.sequences.push((ses, les));
        Ok(())
    }

    /// Cite an input fact; a fact no source can supply is recorded as missing.
    pub fn cite(&mut self, claim: &Claim) -> Result<Option<StepId>, ChaseError> {
        let fact = FactRef::of_claim(claim)?;
        let Some(found) = self.sources.lookup(&self.registry, &fact)? else {
            self.missing.insert(fact);
            return Ok(None);
        };
        let stated = match claim {
            Claim::Value(_, v) | Claim::Betti(_, _, v) => v,
            Claim::Map(..) => unreachable!("rejected by FactRef::of_claim"),
        };
        if *stated != found.value {
            return Err(ChaseError::Contradiction(format!(
                "cited {claim} but {} gives {}",
                found.provenance, found.value
            )));
        }
        self.add(claim.clone(), "fact", Some(found.provenance), Vec::new())?;
        Ok(self.established(claim))
    }

    pub fn add_cupping(&mut self, ctx: &CuppingContext) -> Result<StepId, ChaseError> {
        if let CuppingContext::Cover { .. } = ctx {
            return Err(ChaseError::OutOfRange("cover layer components are not maps of a long exact sequence".into()));
        }
        let fact = cupping_rule(&self.registry, ctx)?;
        if let CuppingContext::Section { ambient, section, p, q } = ctx {
            self.add_restriction_edge(ambient, section, p - 1, q - 1)?;
        }
        let context = Some(format!("{ctx:?}"));
        let claim = fact.claim();
        self.add(claim.clone(), fact.justification, context, Vec::new())?;
        Ok(self.established(&claim).expect("just added"))
    }

    /// Restriction `H^p(Ω^q_Y) → H^p(Ω^q_X)` together with its Lefschetz fact
    /// when in range.
    pub fn add_restriction_edge(&mut self, ambient: &str, section: &str, p: i64, q: i64) -> Result<(), ChaseError> {
        let ctx = CuppingContext::Restriction { ambient: ambient.into(), section: section.into(), p, q };
        match cupping_rule(&self.registry, &ctx) {
            Ok(fact) => {
                self.add(fact.claim(), fact.justification, Some(format!("restriction {ambient}>{section}")), Vec::new())?;
            }
            Err(ChaseError::OutOfRange(_)) => {
                let a = Group::new(p, SheafExpr::omega(ambient, q, 0));
                let b = Group::new(p, SheafExpr::omega(section, q, 0));
                self.touch(&a);
                self.touch(&b);
                self.edges.insert((a, b));
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    /// Surjectivity of `H^0(Ω^q_Y(c)) → H^0(Ω^q_X(c))` for a divisor
    /// `X ∈ |O(d)|`, `c <= d`, `q < dim Y - 1`. Below the degree both
    /// obstructions vanish by Kodaira–Nakano; at `c = d` the rule waits for
    /// `H^1(Ω^q_Y) = 0`.
    pub fn restriction_surjectivity(&mut self, ambient: &str, section: &str, q: i64, c: i64) -> Result<Option<StepId>, ChaseError> {
        let (parent, d) = self
            .registry
            .section_of(section)
            .ok_or_else(|| ChaseError::Space(format!("{section} is not a divisor")))?;
        if parent != ambient {
            return Err(ChaseError::Space(format!("{section} is not a divisor in {ambient}")));
        }
        let d = d as i64;
        let dim_y = self.registry.get(ambient)?.dim as i64;
        if c > d {
            return Err(ChaseError::OutOfRange(format!("restriction surjectivity needs c <= d, got c={c} d={d}")));
        }
        if q < 0 || q >= dim_y - 1 {
            return Err(ChaseError::OutOfRange(format!("restriction surjectivity needs q < {}, got {q}", dim_y - 1)));
        }
        let source = Group::new(0, SheafExpr::omega(ambient, q, c));
        let target = Group::new(0, SheafExpr::omega(section, q, c));
        self.touch(&source);
        self.touch(&target);
        self.edges.insert((source.clone(), target.clone()));
        let claim = Claim::map(source.clone(), target.clone(), MapProperty::Surjective);
        if c < d {
            let a1 = Group::new(1, SheafExpr::omega(section, q - 1, c - d));
            let a2 = Group::new(1, SheafExpr::omega(ambient, q, c - d));
            let mut premises = Vec::new();
            for g in [a1, a2] {
                self.touch(&g);
                self.apply_group_axioms(&g)?;
                premises.push(self.is_zero(&g).ok_or_else(|| ChaseError::OutOfRange(format!("{g} is not a Kodaira-Nakano vanishing")))?);
            }
            self.add(claim.clone(), "restriction-surjective", Some(format!("below degree {ambient}>{section}")), premises)?;
            return Ok(self.established(&claim));
        }
        let hypothesis = Group::new(1, SheafExpr::omega(ambient, q, 0));
        self.touch(&hypothesis);
        self.pending.push(PendingRestriction { source, target, hypothesis });
        self.flush_pending()?;
        Ok(self.established(&claim))
    }

    /// The same check as [`Self::restriction_surjectivity`], failing when the
    /// hypothesis is not yet established.
    pub fn require_restriction_surjectivity(&mut self, ambient: &str, section: &str, q: i64, c: i64) -> Result<StepId, ChaseError> {
        match self.restriction_surjectivity(ambient, section, q, c)? {
            Some(id) => Ok(id),
            None => Err(ChaseError::MissingPremise(format!("H1(Omega({ambient},{q},0)) = 0"))),
        }
    }

    fn flush_pending(&mut self) -> Result<bool, ChaseError> {
        let mut changed = false;
        let mut still = Vec::new();
        for p in std::mem::take(&mut self.pending) {
            if let Some(h) = self.is_zero(&p.hypothesis) {
                let claim = Claim::map(p.source.clone(), p.target.clone(), MapProperty::Surjective);
                let ctx = format!("at degree, hypothesis {}", p.hypothesis);
                changed |= self.add(claim, "restriction-surjective", Some(ctx), vec![h])?;
            } else {
                still.push(p);
            }
        }
        self.pending = still;
        Ok(changed)
    }

    fn apply_group_axioms(&mut self, g: &Group) -> Result<bool, ChaseError> {
        if self.values.contains_key(g) {
            return Ok(false);
        }
        let dim = self.registry.cohomological_dim(&g.expr)? as i64;
        if g.p < 0 || g.p > dim || self.registry.sheaf_vanishes(&g.expr)? {
            return self.add(Claim::zero(g.clone()), "degree-range", None, Vec::new());
        }
        if let SheafExpr::Omega { space, q, t } = &g.expr {
            let (p, q, t) = (g.p, *q, *t);
            if (t > 0 && p + q > dim) || (t < 0 && p + q < dim) {
                return self.add(Claim::zero(g.clone()), "kodaira-nakano", None, Vec::new());
            }
            if t == 0 {
                let i = (p + q) as u32;
                if let Some((b, id)) = self.betti_value(space, i) {
                    if b.is_zero() {
                        return self.add(Claim::zero(g.clone()), "betti-hodge", None, vec![id]);
                    }
                    if p == q && b.is_one() {
                        return self.add(Claim::Value(g.clone(), BigUint::one()), "betti-hodge", None, vec![id]);
                    }
                }
                let mirror = Group::new(q, SheafExpr::omega(space, p, 0));
                if let Some((v, id)) = self.value(&mirror) {
                    let v = v.clone();
                    return self.add(Claim::Value(g.clone(), v), "hodge-symmetry", None, vec![id]);
                }
            }
        }
        if let SheafExpr::Sum(items) = &g.expr {
            let mut total = BigUint::zero();
            let mut premises = Vec::new();
            for item in items {
                match self.value(&Group::new(g.p, item.clone())) {
                    Some((v, id)) => {
                        total += v;
                        premises.push(id);
                    }
                    None => return Ok(false),
                }
            }
            return self.add(Claim::Value(g.clone(), total), "direct-sum", None, premises);
        }
        Ok(false)
    }

    fn pass_groups(&mut self) -> Result<bool, ChaseError> {
        let mut changed = false;
        let groups: Vec<Group> = self.universe.iter().cloned().collect();
        for g in &groups {
            changed |= self.apply_group_axioms(g)?;
            if let SheafExpr::Sum(items) = &g.expr {
                if let Some(id) = self.is_zero(g) {
                    for item in items {
                        changed |= self.add(Claim::zero(Group::new(g.p, item.clone())), "direct-sum", None, vec![id])?;
                    }
                }
            }
        }
        Ok(changed)
    }

    fn pass_betti(&mut self) -> Result<bool, ChaseError> {
        let mut changed = false;
        let spaces: Vec<(String, String, usize)> = self
            .registry
            .spaces()
            .filter_map(|s| self.registry.section_of(&s.id).map(|(parent, _)| (s.id.clone(), parent.to_string(), s.dim)))
            .collect();
        for (x, y, dim_x) in spaces {
            let known: Vec<(u32, BigUint, StepId)> = self
                .betti
                .keys()
                .filter(|(s, _)| *s == y)
                .filter_map(|(s, i)| self.betti_value(s, *i).map(|(v, id)| (*i, v.clone(), id)))
                .collect();
            for (i, v, id) in known {
                if (i as usize) < dim_x {
                    changed |= self.add(Claim::Betti(x.clone(), i, v), "lefschetz-betti", None, vec![id])?;
                }
            }
        }
        Ok(changed)
    }

    fn pass_maps(&mut self) -> Result<bool, ChaseError> {
        let mut changed = false;
        let edges: Vec<(Group, Group)> = self.edges.iter().cloned().collect();
        for (a, b) in edges {
            let chain = vec![a.clone(), b.clone()];
            if let Some(id) = self.is_zero(&a) {
                changed |= self.add(Claim::Map(chain.clone(), MapProperty::Zero), "zero-group-map", None, vec![id])?;
                changed |= self.add(Claim::Map(chain.clone(), MapProperty::Injective), "zero-group-map", None, vec![id])?;
            }
            if let Some(id) = self.is_zero(&b) {
                changed |= self.add(Claim::Map(chain.clone(), MapProperty::Zero), "zero-group-map", None, vec![id])?;
                changed |= self.add(Claim::Map(chain.clone(), MapProperty::Surjective), "zero-group-map", None, vec![id])?;
            }
            changed |= self.chain_rules(&chain)?;
        }
        let chains: Vec<Vec<Group>> = self.chains.iter().cloned().collect();
        for chain in chains {
            changed |= self.chain_rules(&chain)?;
            changed |= self.composite_rules(&chain)?;
        }
        Ok(changed)
    }

    /// Rules that read a chain as a single map.
    fn chain_rules(&mut self, chain: &[Group]) -> Result<bool, ChaseError> {
        let mut changed = false;
        let (a, b) = (&chain[0], &chain[chain.len() - 1]);
        let zero = self.map_has(chain, MapProperty::Zero);
        let inj = self.map_has(chain, MapProperty::Injective);
        let surj = self.map_has(chain, MapProperty::Surjective);
        if let (Some(z), Some(i)) = (zero, inj) {
            changed |= self.add(Claim::zero(a.clone()), "injective-zero-map", None, vec![z, i])?;
        }
        if let (Some(z), Some(s)) = (zero, surj) {
            changed |= self.add(Claim::zero(b.clone()), "surjective-zero-map", None, vec![z, s])?;
        }
        if let (Some(i), Some(s)) = (inj, surj) {
            if let Some((v, id)) = self.value(a) {
                let v = v.clone();
                changed |= self.add(Claim::Value(b.clone(), v), "bijective-transfer", None, vec![i, s, id])?;
            }
            if let Some((v, id)) = self.value(b) {
                let v = v.clone();
                changed |= self.add(Claim::Value(a.clone(), v), "bijective-transfer", None, vec![i, s, id])?;
            }
        }
        if let (Some((va, ia)), Some((vb, ib))) = (self.value(a), self.value(b)) {
            if va == vb {
                if let Some(i) = inj {
                    changed |= self.add(Claim::Map(chain.to_vec(), MapProperty::Surjective), "dimension-count", None, vec![i, ia, ib])?;
                }
                if let Some(s) = surj {
                    changed |= self.add(Claim::Map(chain.to_vec(), MapProperty::Injective), "dimension-count", None, vec![s, ia, ib])?;
                }
            }
        }
        Ok(changed)
    }

    /// Rules relating a composite to its first and last factors.
    fn composite_rules(&mut self, chain: &[Group]) -> Result<bool, ChaseError> {
        let mut changed = false;
        let n = chain.len();
        let first = &chain[..2];
        let last = &chain[n - 2..];
        let head = &chain[..n - 1];
        let tail = &chain[1..];
        if let Some(s) = self.map_has(chain, MapProperty::Surjective) {
            changed |= self.add(Claim::Map(last.to_vec(), MapProperty::Surjective), "composite-last-surjective", None, vec![s])?;
            if let Some(i) = self.map_has(last, MapProperty::Injective) {
                changed |= self.add(Claim::Map(head.to_vec(), MapProperty::Surjective), "composite-prefix-surjective", None, vec![s, i])?;
            }
        }
        if let Some(i) = self.map_has(chain, MapProperty::Injective) {
            changed |= self.add(Claim::Map(first.to_vec(), MapProperty::Injective), "composite-first-injective", None, vec![i])?;
            if let Some(s) = self.map_has(first, MapProperty::Surjective) {
                changed |= self.add(Claim::Map(tail.to_vec(), MapProperty::Injective), "composite-tail-injective", None, vec![i, s])?;
            }
        }
        Ok(changed)
    }

    /// Exactness rules along one long exact sequence.
    pub fn les_step(&mut self, index: usize) -> Result<bool, ChaseError> {
        let (ses, les) = self.sequences[index].clone();
        let ctx = Some(ses.to_string());
        let mut changed = false;
        for w in les.windows(3) {
            let f = vec![w[0].clone(), w[1].clone()];
            let g = vec![w[1].clone(), w[2].clone()];
            if let Some(z) = self.map_has(&f, MapProperty::Zero) {
                changed |= self.add(Claim::Map(g.clone(), MapProperty::Injective), "exactness", ctx.clone(), vec![z])?;
            }
            if let Some(z) = self.map_has(&g, MapProperty::Zero) {
                changed |= self.add(Claim::Map(f.clone(), MapProperty::Surjective), "exactness", ctx.clone(), vec![z])?;
            }
            if let Some(i) = self.map_has(&g, MapProperty::Injective) {
                changed |= self.add(Claim::Map(f.clone(), MapProperty::Zero), "exactness", ctx.clone(), vec![i])?;
            }
            if let Some(s) = self.map_has(&f, MapProperty::Surjective) {
                changed |= self.add(Claim::Map(g.clone(), MapProperty::Zero), "exactness", ctx.clone(), vec![s])?;
            }
            if let (Some(zf), Some(zg)) = (self.map_has(&f, MapProperty::Zero), self.map_has(&g, MapProperty::Zero)) {
                changed |= self.add(Claim::zero(w[1].clone()), "exact-zero", ctx.clone(), vec![zf, zg])?;
            }
        }
        Ok(changed)
    }

    /// Apply every rule until nothing new is derived.
    pub fn saturate(&mut self) -> Result<(), ChaseError> {
        loop {
            let mut changed = self.pass_groups()?;
            changed |= self.pass_betti()?;
            changed |= self.pass_maps()?;
            for i in 0..self.sequences.len() {
                changed |= self.les_step(i)?;
            }
            changed |= self.flush_pending()?;
            if !changed {
                return Ok(());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chase::ses::SesRule;

    fn state() -> ChaseState {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 5).unwrap();
        r.section("Y", "G", 1).unwrap();
        ChaseState::new(r, FactSources::default())
    }

    fn e(s: &str) -> SheafExpr {
        SheafExpr::parse(s).unwrap()
    }

    fn g(s: &str) -> Group {
        Group::parse(s).unwrap()
    }

    #[test]
    fn flanking_zeros_give_isomorphism() {
        let mut st = state();
        let ses = Ses::new(SesRule::Restriction, e("Omega(G,3,0)"), e("Omega(G,3,1)"), e("OmegaR(G|Y,3,1)"), &st.registry).unwrap();
        st.add_sequence(ses).unwrap();
        for c in ["H2(Omega(G,3,1)) = 0", "H3(Omega(G,3,1)) = 0", "H3(Omega(G,3,0)) = 2"] {
            st.cite(&Claim::parse(c).unwrap()).unwrap().unwrap();
        }
        st.saturate().unwrap();
        let delta = vec![g("H2(OmegaR(G|Y,3,1))"), g("H3(Omega(G,3,0))")];
        assert!(st.map_has(&delta, MapProperty::Injective).is_some());
        assert!(st.map_has(&delta, MapProperty::Surjective).is_some());
        assert_eq!(st.value(&g("H2(OmegaR(G|Y,3,1))")).unwrap().0, &BigUint::from(2u32));
    }

    #[test]
    fn contradiction_names_sequence() {
        let mut st = state();
        let ses = Ses::new(SesRule::Restriction, e("Omega(G,3,0)"), e("Omega(G,3,1)"), e("OmegaR(G|Y,3,1)"), &st.registry).unwrap();
        st.add_sequence(ses).unwrap();
        st.add(Claim::parse("H2(OmegaR(G|Y,3,1)) = 5").unwrap(), "injected", None, vec![]).unwrap();
        st.cite(&Claim::parse("H2(Omega(G,3,1)) = 0").unwrap()).unwrap();
        st.cite(&Claim::parse("H3(Omega(G,3,1)) = 0").unwrap()).unwrap();
        st.cite(&Claim::parse("H3(Omega(G,3,0)) = 2").unwrap()).unwrap();
        let err = st.saturate().unwrap_err().to_string();
        assert!(err.contains("restriction Omega(G,3,0)"), "{err}");
    }

    #[test]
    fn cupping_ranges() {
        let st = state();
        let sec = CuppingContext::Section { ambient: "G".into(), section: "Y".into(), p: 3, q: 3 };
        assert_eq!(cupping_rule(&st.registry, &sec).unwrap().property, MapProperty::Injective);
        let far = CuppingContext::Section { ambient: "G".into(), section: "Y".into(), p: 6, q: 6 };
        assert!(cupping_rule(&st.registry, &far).is_err());
        let res = CuppingContext::Restriction { ambient: "G".into(), section: "Y".into(), p: 1, q: 1 };
        assert_eq!(cupping_rule(&st.registry, &res).unwrap().property, MapProperty::Bijective);
        let mut r = Registry::new();
        r.grassmannian("P", 0, 5).unwrap();
        r.section("Q", "P", 2).unwrap();
        r.cover("Z", "P", 3, 2).unwrap();
        let lemma = CuppingContext::Section { ambient: "P".into(), section: "Q".into(), p: 2, q: 2 };
        assert_eq!(cupping_rule(&r, &lemma).unwrap().property, MapProperty::Bijective);
        let trivial = CuppingContext::Cover { cover: "Z".into(), p: 1, q: 1, layer: 3 };
        assert_eq!(cupping_rule(&r, &trivial).unwrap().property, MapProperty::Zero);
        let layer = CuppingContext::Cover { cover: "Z".into(), p: 1, q: 1, layer: 1 };
        assert_eq!(cupping_rule(&r, &layer).unwrap().property, MapProperty::Injective);
    }

    #[test]
    fn restriction_surjectivity_rules() {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 4).unwrap();
        r.section("Y", "G", 2).unwrap();
        r.section("X", "Y", 1).unwrap();
        let mut st = ChaseState::new(r, FactSources::default());
        assert!(st.restriction_surjectivity("G", "Y", 2, 1).unwrap().is_some());
        assert!(matches!(st.restriction_surjectivity("G", "Y", 2, 3), Err(ChaseError::OutOfRange(_))));
        assert!(matches!(st.require_restriction_surjectivity("Y", "X", 2, 1), Err(ChaseError::MissingPremise(_))));
        st.add(Claim::parse("H1(Omega(Y,2,0)) = 0").unwrap(), "test", None, vec![]).unwrap();
        assert!(st.require_restriction_surjectivity("Y", "X", 2, 1).is_ok());
    }
}
