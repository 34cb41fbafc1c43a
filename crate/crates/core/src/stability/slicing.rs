use std::fmt;

use num_rational::Rational64;

use super::profile::{FanoProfile, SubsheafProfile};
use super::verdict::{Backing, Outcome, Reasons, StabilityVerdict};
use super::StabilityError;

/// The two bounds the slicing argument ends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Endpoints {
    /// Largest slope of a subsheaf of the tangent bundle of the index-one
    /// slice.
    pub reid: Rational64,
    /// Largest `c1` of a rank-one subsheaf.
    pub wahl: i64,
}

impl Endpoints {
    pub fn standard(n: usize, r: usize) -> Self {
        Endpoints { reid: Rational64::new(1, (n - r + 1) as i64), wahl: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `α = 0`: the restriction lands in the tangent bundle of the slice.
    Zero,
    /// `α ≠ 0`: pass to the kernel, rank down one and `c1` down at most one.
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Split(Vec<SliceNode>),
    /// Index-one slice reached with a nonzero sheaf.
    Reid { contradiction: bool },
    /// The sheaf died; the last rank-one sheaf carries `c1`.
    Wahl { contradiction: bool },
}

/// A sheaf after `depth` slicing steps with the given rank and lower bound
/// on `c1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceNode {
    pub depth: usize,
    pub rank: usize,
    pub c1: i64,
    pub via: Option<Branch>,
    pub kind: NodeKind,
}

impl SliceNode {
    pub fn size(&self) -> usize {
        match &self.kind {
            NodeKind::Split(children) => 1 + children.iter().map(SliceNode::size).sum::<usize>(),
            _ => 1,
        }
    }

    fn leaves<'a>(&'a self, path: &mut Vec<&'a SliceNode>, out: &mut Vec<Vec<&'a SliceNode>>) {
        path.push(self);
        match &self.kind {
            NodeKind::Split(children) => {
                for c in children {
                    c.leaves(path, out);
                }
            }
            _ => out.push(path.clone()),
        }
        path.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub path: Vec<(Option<Branch>, usize, i64)>,
    pub endpoint: String,
}

impl fmt::Display for Survivor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self
            .path
            .iter()
            .map(|(b, m, k)| match b {
                None => format!("start rank {m} c1 {k}"),
                Some(Branch::Zero) => format!("α=0 rank {m} c1 {k}"),
                Some(Branch::Nonzero) => format!("α≠0 rank {m} c1 {k}"),
            })
            .collect();
        write!(f, "{} survives {}", steps.join(" → "), self.endpoint)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlicingOutcome {
    /// Every branch contradicts, so `μ(F) < 1`.
    Refuted { tree: SliceNode, nodes: usize },
    Survivor(Survivor),
    NotApplicable(String),
}

fn build(r: usize, depth: usize, rank: usize, c1: i64, via: Option<Branch>, ends: &Endpoints) -> SliceNode {
    let kind = if depth + 1 == r {
        NodeKind::Reid { contradiction: Rational64::new(c1, rank as i64) > ends.reid }
    } else {
        let zero = build(r, depth + 1, rank, c1, Some(Branch::Zero), ends);
        let nonzero = if rank == 1 {
            SliceNode {
                depth: depth + 1,
                rank: 0,
                c1,
                via: Some(Branch::Nonzero),
                kind: NodeKind::Wahl { contradiction: c1 > ends.wahl },
            }
        } else {
            build(r, depth + 1, rank - 1, c1 - 1, Some(Branch::Nonzero), ends)
        };
        NodeKind::Split(vec![zero, nonzero])
    };
    SliceNode { depth, rank, c1, via, kind }
}

/// Each split has exactly the two branches, depths increase by one, every
/// leaf is an endpoint at the right depth.
pub fn is_exhaustive(tree: &SliceNode, r: usize) -> bool {
    match &tree.kind {
        NodeKind::Split(children) => {
            children.len() == 2
                && children[0].via == Some(Branch::Zero)
                && children[1].via == Some(Branch::Nonzero)
                && children.iter().all(|c| c.depth == tree.depth + 1 && is_exhaustive(c, r))
        }
        NodeKind::Reid { .. } => tree.depth + 1 == r,
        NodeKind::Wahl { .. } => tree.rank == 0 && tree.depth < r,
    }
}

/// Exhaustive search over the slicing branches for a rank-`m` subsheaf with
/// `c1 = k >= m` of the tangent bundle of a Fano `n`-fold of index `r`.
/// Assumes the slicing chain exists.
pub fn slicing_search(n: usize, r: usize, m: usize, k: i64) -> SlicingOutcome {
    if r == 0 || r + 1 > n {
        return SlicingOutcome::NotApplicable(format!("index {r} outside 1..={}", n.saturating_sub(1)));
    }
    slicing_search_with(n, r, m, k, &Endpoints::standard(n, r))
}

pub fn slicing_search_with(n: usize, r: usize, m: usize, k: i64, ends: &Endpoints) -> SlicingOutcome {
    if r == 0 || r + 1 > n {
        return SlicingOutcome::NotApplicable(format!("index {r} outside 1..={}", n.saturating_sub(1)));
    }
    if m == 0 || m >= n {
        return SlicingOutcome::NotApplicable(format!("rank {m} outside 1..{n}"));
    }
    if k < m as i64 {
        return SlicingOutcome::NotApplicable(format!("slope {k}/{m} is already below 1"));
    }
    let tree = build(r, 0, m, k, None, ends);
    let mut paths = Vec::new();
    tree.leaves(&mut Vec::new(), &mut paths);
    for path in paths {
        let leaf = path.last().expect("nonempty path");
        let endpoint = match leaf.kind {
            NodeKind::Reid { contradiction: false } => format!("reid bound {}", ends.reid),
            NodeKind::Wahl { contradiction: false } => format!("wahl bound c1 <= {}", ends.wahl),
            _ => continue,
        };
        let path = path.iter().map(|s| (s.via, s.rank, s.c1)).collect();
        return SlicingOutcome::Survivor(Survivor { path, endpoint });
    }
    let nodes = tree.size();
    SlicingOutcome::Refuted { tree, nodes }
}

/// Bound on `c1` of a proper reflexive subsheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsheafBound {
    pub max_c1: i64,
    pub rule: &'static str,
    /// The subsheaf exceeds the bound and cannot exist.
    pub impossible: bool,
}

/// `c1(G) < r` for a proper subsheaf, sharpened to `c1 <= 0` in rank one.
pub fn reid_bound(profile: &FanoProfile, sub: &SubsheafProfile) -> Result<SubsheafBound, StabilityError> {
    if !profile.b2_is_1 {
        return Err(StabilityError::InvalidProfile("the bound needs b2 = 1".into()));
    }
    if sub.m == 0 || sub.m >= profile.n {
        return Err(StabilityError::InvalidProfile(format!("subsheaf rank {} outside 1..{}", sub.m, profile.n)));
    }
    let (max_c1, rule) = if sub.m == 1 && profile.r <= profile.n { (0, "wahl") } else { (profile.r as i64 - 1, "reid") };
    Ok(SubsheafBound { max_c1, rule, impossible: sub.k > max_c1 })
}

/// Index one: every proper subsheaf has `c1 <= 0 < rank / n`.
pub fn reid_verdict(profile: &FanoProfile) -> StabilityVerdict {
    if profile.r != 1 {
        return StabilityVerdict::not_applicable(format!("index {} is not 1", profile.r));
    }
    if !profile.b2_is_1 {
        return StabilityVerdict::not_applicable("b2 is not 1");
    }
    let n = profile.n;
    let mut reasons = Reasons::new();
    let bound = reasons.rule("proper reflexive G ⊂ T_X has c1(G) < c1(X) = 1", "reid", &[]);
    let slope = reasons.rule(format!("μ(G) <= 0 < 1/{n} = μ(T_X)"), "exact-arithmetic", &[bound]);
    reasons.rule(format!("T_X stable for the index-1 {n}-fold"), "reid", &[slope]);
    reasons.finish(Outcome::Stable)
}

/// Index `n - 1`: the slicing lemma caps slopes below one.
pub fn del_pezzo_verdict(n: usize) -> StabilityVerdict {
    if n < 3 {
        return StabilityVerdict::not_applicable(format!("del Pezzo dimension {n} < 3"));
    }
    let mut reasons = Reasons::new();
    let es = reasons.push("(ES) holds for index n-1", "fujita", Backing::Axiom, &[]);
    let mu = Rational64::new(n as i64 - 1, n as i64);
    let mut ranks = Vec::new();
    for m in 1..n {
        match slicing_search(n, n - 1, m, m as i64) {
            SlicingOutcome::Refuted { nodes, .. } => {
                let tree = reasons.rule(format!("rank {m}: μ(F) >= 1 refuted on all {nodes} branches, so c1(F) <= {}", m - 1), "slicing-lemma", &[es]);
                let bound = Rational64::new(m as i64 - 1, m as i64);
                ranks.push(reasons.rule(format!("rank {m}: μ(F) <= {bound} < {mu}"), "exact-arithmetic", &[tree]));
            }
            other => {
                reasons.push(format!("rank {m}: slicing search did not close: {other:?}"), "slicing-lemma", Backing::Open, &[es]);
                return reasons.finish(Outcome::Unknown);
            }
        }
    }
    reasons.rule(format!("T_X stable for the del Pezzo {n}-fold, μ(T_X) = {mu}"), "slope", &ranks);
    reasons.finish(Outcome::Stable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_fold_index_two() {
        match slicing_search(4, 2, 2, 2) {
            SlicingOutcome::Refuted { tree, nodes } => {
                assert_eq!(nodes, 3);
                assert!(is_exhaustive(&tree, 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weakened_wahl_leaves_a_survivor() {
        let ends = Endpoints { wahl: 1, ..Endpoints::standard(5, 4) };
        match slicing_search_with(5, 4, 2, 2, &ends) {
            SlicingOutcome::Survivor(s) => assert!(s.endpoint.contains("wahl"), "{s}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weakened_reid_leaves_a_survivor() {
        let ends = Endpoints { reid: Rational64::from_integer(1), ..Endpoints::standard(4, 2) };
        assert!(matches!(slicing_search_with(4, 2, 2, 2, &ends), SlicingOutcome::Survivor(_)));
    }

    #[test]
    fn preconditions() {
        assert!(matches!(slicing_search(4, 4, 2, 2), SlicingOutcome::NotApplicable(_)));
        assert!(matches!(slicing_search(4, 2, 2, 1), SlicingOutcome::NotApplicable(_)));
        assert!(matches!(slicing_search(4, 2, 4, 4), SlicingOutcome::NotApplicable(_)));
    }

    #[test]
    fn reid_and_wahl_bounds() {
        let x = FanoProfile::new(3, 1).unwrap();
        let b = reid_bound(&x, &SubsheafProfile::new(3, 1, 1).unwrap()).unwrap();
        assert_eq!((b.max_c1, b.rule, b.impossible), (0, "wahl", true));
        let y = FanoProfile::new(5, 3).unwrap();
        let b = reid_bound(&y, &SubsheafProfile::new(5, 2, 3).unwrap()).unwrap();
        assert_eq!((b.max_c1, b.impossible), (2, true));
        assert_eq!(reid_verdict(&FanoProfile::new(7, 1).unwrap()).outcome, Outcome::Stable);
    }

    #[test]
    fn del_pezzo_range() {
        for n in 3..=10 {
            let v = del_pezzo_verdict(n);
            assert_eq!(v.outcome, Outcome::Stable, "{v}");
        }
    }

    proptest! {
        #[test]
        fn tree_is_exhaustive_and_small(n in 2usize..12, r in 1usize..11, m in 1usize..11, extra in 0i64..4) {
            prop_assume!(r < n && m < n);
            match slicing_search(n, r, m, m as i64 + extra) {
                SlicingOutcome::Refuted { tree, nodes } => {
                    prop_assert!(is_exhaustive(&tree, r));
                    prop_assert!(nodes <= (1usize << (r - 1)) * (m + 1));
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
