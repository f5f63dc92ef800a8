//! Finite set functors and their values.
//!
//! A value of `F(V)` is a tree whose leaves sit at "atom positions". For plain
//! functors a leaf is `Atom(v)`; inside a colored functor a leaf is
//! `Colored(vertex_color, leaf)`. Every operation here works over an arbitrary
//! leaf list, which is how colored and summed functors compose.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::{ElementId, FiniteSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorSpec {
    Identity,
    #[serde(rename = "upair")]
    UPair,
    #[serde(rename = "dpair")]
    DPair,
    #[serde(rename = "powerset")]
    FinPowerset,
    DirectedHyper,
    /// k-tuples; when `min_equal >= 2` some component must repeat that often.
    #[serde(rename = "ktuple")]
    KTuple { k: usize, min_equal: usize },
    Colored { edge_colors: FiniteSet, vertex_colors: FiniteSet, inner: Box<FunctorSpec> },
    Sum { parts: Vec<FunctorSpec> },
}

/// Canonical functor value. Set children are sorted and deduplicated, so
/// structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctorValue<A = ElementId> {
    Atom(A),
    Tuple(Vec<FunctorValue<A>>),
    SetOf(Vec<FunctorValue<A>>),
    Tagged(usize, Box<FunctorValue<A>>),
    Colored(ElementId, Box<FunctorValue<A>>),
}

pub type Value = FunctorValue<ElementId>;
/// Value whose atoms are vertex indices.
pub type IxValue = FunctorValue<usize>;

impl<A: Ord> FunctorValue<A> {
    fn rank(&self) -> u8 {
        match self {
            FunctorValue::Atom(_) => 0,
            FunctorValue::Tuple(_) => 1,
            FunctorValue::SetOf(_) => 2,
            FunctorValue::Tagged(..) => 3,
            FunctorValue::Colored(..) => 4,
        }
    }
}

fn shortlex<A: Ord>(a: &[FunctorValue<A>], b: &[FunctorValue<A>]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

// Sequences compare by length first, so sets enumerate as singletons, then pairs, and so on.
impl<A: Ord> Ord for FunctorValue<A> {
    fn cmp(&self, other: &Self) -> Ordering {
        use FunctorValue::*;
        match (self, other) {
            (Atom(a), Atom(b)) => a.cmp(b),
            (Tuple(a), Tuple(b)) | (SetOf(a), SetOf(b)) => shortlex(a, b),
            (Tagged(i, a), Tagged(j, b)) => i.cmp(j).then_with(|| a.cmp(b)),
            (Colored(c, a), Colored(d, b)) => c.cmp(d).then_with(|| a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl<A: Ord> PartialOrd for FunctorValue<A> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<A> FunctorValue<A> {
    pub fn atom(a: impl Into<A>) -> Self {
        FunctorValue::Atom(a.into())
    }

    /// Visits atoms in tree order. Vertex colors are not atoms.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            FunctorValue::Atom(a) => f(a),
            FunctorValue::Tuple(xs) | FunctorValue::SetOf(xs) => {
                for x in xs {
                    x.for_each_atom(f);
                }
            }
            FunctorValue::Tagged(_, x) | FunctorValue::Colored(_, x) => x.for_each_atom(f),
        }
    }

    pub fn all_atoms(&self, mut pred: impl FnMut(&A) -> bool) -> bool {
        let mut ok = true;
        self.for_each_atom(&mut |a| ok = ok && pred(a));
        ok
    }
}

impl<A: Ord + Clone> FunctorValue<A> {
    pub fn set(items: impl IntoIterator<Item = FunctorValue<A>>) -> Self {
        let mut v: Vec<_> = items.into_iter().collect();
        v.sort();
        v.dedup();
        FunctorValue::SetOf(v)
    }

    pub fn tuple(items: impl IntoIterator<Item = FunctorValue<A>>) -> Self {
        FunctorValue::Tuple(items.into_iter().collect())
    }

    /// Sorted, deduplicated atoms.
    pub fn support(&self) -> Vec<A> {
        let mut out = Vec::new();
        self.for_each_atom(&mut |a| out.push(a.clone()));
        out.sort();
        out.dedup();
        out
    }

    /// The functor action on a map of atoms; the result is re-canonicalized.
    pub fn map_atoms<B: Ord>(&self, f: &mut impl FnMut(&A) -> B) -> FunctorValue<B> {
        match self {
            FunctorValue::Atom(a) => FunctorValue::Atom(f(a)),
            FunctorValue::Tuple(xs) => FunctorValue::Tuple(xs.iter().map(|x| x.map_atoms(f)).collect()),
            FunctorValue::SetOf(xs) => {
                let mut v: Vec<_> = xs.iter().map(|x| x.map_atoms(f)).collect();
                v.sort();
                v.dedup();
                FunctorValue::SetOf(v)
            }
            FunctorValue::Tagged(i, x) => FunctorValue::Tagged(*i, Box::new(x.map_atoms(f))),
            FunctorValue::Colored(c, x) => FunctorValue::Colored(c.clone(), Box::new(x.map_atoms(f))),
        }
    }

    pub fn canonicalize(&mut self) {
        match self {
            FunctorValue::Atom(_) => {}
            FunctorValue::Tuple(xs) => xs.iter_mut().for_each(FunctorValue::canonicalize),
            FunctorValue::SetOf(xs) => {
                xs.iter_mut().for_each(FunctorValue::canonicalize);
                xs.sort();
                xs.dedup();
            }
            FunctorValue::Tagged(_, x) | FunctorValue::Colored(_, x) => x.canonicalize(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            FunctorValue::Atom(_) => true,
            FunctorValue::Tuple(xs) => xs.iter().all(FunctorValue::is_canonical),
            FunctorValue::SetOf(xs) => {
                xs.iter().all(FunctorValue::is_canonical) && xs.windows(2).all(|w| w[0] < w[1])
            }
            FunctorValue::Tagged(_, x) | FunctorValue::Colored(_, x) => x.is_canonical(),
        }
    }
}

impl Value {
    pub fn atoms<I, T>(items: I) -> Vec<Value>
    where
        I: IntoIterator<Item = T>,
        T: Into<ElementId>,
    {
        items.into_iter().map(|x| FunctorValue::Atom(x.into())).collect()
    }

    /// `{a, b}` (or `{a}` when equal).
    pub fn upair(a: impl Into<ElementId>, b: impl Into<ElementId>) -> Value {
        FunctorValue::set([FunctorValue::Atom(a.into()), FunctorValue::Atom(b.into())])
    }

    /// `(a, b)`.
    pub fn dpair(a: impl Into<ElementId>, b: impl Into<ElementId>) -> Value {
        FunctorValue::Tuple(vec![FunctorValue::Atom(a.into()), FunctorValue::Atom(b.into())])
    }
}

impl<A: fmt::Display> fmt::Display for FunctorValue<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<A: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[FunctorValue<A>]) -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        match self {
            FunctorValue::Atom(a) => write!(f, "{a}"),
            FunctorValue::Tuple(xs) => {
                f.write_str("(")?;
                list(f, xs)?;
                f.write_str(")")
            }
            FunctorValue::SetOf(xs) => {
                f.write_str("{")?;
                list(f, xs)?;
                f.write_str("}")
            }
            FunctorValue::Tagged(i, x) => write!(f, "#{i}:{x}"),
            FunctorValue::Colored(c, x) => write!(f, "[{c}]{x}"),
        }
    }
}

type LeafPred<'a, A> = &'a dyn Fn(&FunctorValue<A>) -> bool;

impl FunctorSpec {
    pub fn ktuple(k: usize, min_equal: usize) -> Self {
        FunctorSpec::KTuple { k, min_equal }
    }

    pub fn colored(edge_colors: FiniteSet, vertex_colors: FiniteSet, inner: FunctorSpec) -> Self {
        FunctorSpec::Colored { edge_colors, vertex_colors, inner: Box::new(inner) }
    }

    /// Structural sanity of the spec itself.
    pub fn check(&self) -> Result<()> {
        match self {
            FunctorSpec::KTuple { k: 0, .. } => {
                Err(Error::PreconditionViolated("ktuple needs k >= 1".into()))
            }
            FunctorSpec::Colored { inner, .. } => inner.check(),
            FunctorSpec::Sum { parts } => parts.iter().try_for_each(FunctorSpec::check),
            _ => Ok(()),
        }
    }

    /// Whether kernel pairs are weakly preserved, so kernels of homs are
    /// always graph relations.
    pub fn weakly_preserves_kernels(&self) -> bool {
        match self {
            FunctorSpec::KTuple { min_equal, .. } => *min_equal <= 1,
            FunctorSpec::Colored { inner, .. } => inner.weakly_preserves_kernels(),
            FunctorSpec::Sum { parts } => parts.iter().all(FunctorSpec::weakly_preserves_kernels),
            _ => true,
        }
    }

    /// Checks grammar with `leaf` deciding what may sit at an atom position.
    pub fn validate_with<A: Ord + Clone>(&self, w: &FunctorValue<A>, leaf: LeafPred<'_, A>) -> Result<(), String> {
        use FunctorValue as V;
        let leaves = |xs: &[FunctorValue<A>]| -> Result<(), String> {
            match xs.iter().position(|x| !leaf(x)) {
                Some(i) => Err(format!("component {i} is not an admissible atom")),
                None => Ok(()),
            }
        };
        let sorted = |xs: &[FunctorValue<A>]| -> Result<(), String> {
            if xs.windows(2).all(|p| p[0] < p[1]) {
                Ok(())
            } else {
                Err("set is not in canonical order".into())
            }
        };
        match (self, w) {
            (FunctorSpec::Identity, x) => {
                if leaf(x) {
                    Ok(())
                } else {
                    Err("expected an atom".into())
                }
            }
            (FunctorSpec::UPair, V::SetOf(xs)) => {
                if xs.is_empty() || xs.len() > 2 {
                    return Err(format!("unordered pair must have 1 or 2 elements, got {}", xs.len()));
                }
                sorted(xs)?;
                leaves(xs)
            }
            (FunctorSpec::DPair, V::Tuple(xs)) => {
                if xs.len() != 2 {
                    return Err(format!("directed pair must have 2 components, got {}", xs.len()));
                }
                leaves(xs)
            }
            (FunctorSpec::FinPowerset, V::SetOf(xs)) => {
                sorted(xs)?;
                leaves(xs)
            }
            (FunctorSpec::DirectedHyper, V::Tuple(xs)) => match xs.as_slice() {
                [head, V::SetOf(tail)] => {
                    if !leaf(head) {
                        return Err("hyperedge source is not an admissible atom".into());
                    }
                    sorted(tail)?;
                    leaves(tail)
                }
                _ => Err("directed hyperedge must be (v, {..})".into()),
            },
            (FunctorSpec::KTuple { k, min_equal }, V::Tuple(xs)) => {
                if xs.len() != *k {
                    return Err(format!("expected {k} components, got {}", xs.len()));
                }
                leaves(xs)?;
                if *min_equal >= 2 && max_multiplicity(xs) < *min_equal {
                    return Err(format!("no component repeats {min_equal} times"));
                }
                Ok(())
            }
            (FunctorSpec::Colored { edge_colors, vertex_colors, inner }, V::Colored(c, x)) => {
                if !edge_colors.contains(c.as_str()) {
                    return Err(format!("unknown edge color {c}"));
                }
                let inner_leaf = |y: &FunctorValue<A>| match y {
                    V::Colored(xv, l) => vertex_colors.contains(xv.as_str()) && leaf(l),
                    _ => false,
                };
                inner.validate_with(x, &inner_leaf)
            }
            (FunctorSpec::Sum { parts }, V::Tagged(i, x)) => match parts.get(*i) {
                Some(p) => p.validate_with(x, leaf),
                None => Err(format!("no summand {i}")),
            },
            (spec, _) => Err(format!("value does not match {}", spec.kind_name())),
        }
    }

    /// Checks that `w` is a canonical element of `F(set)`.
    pub fn validate_over(&self, w: &Value, set: &FiniteSet) -> Result<()> {
        let leaf = |x: &Value| matches!(x, FunctorValue::Atom(a) if set.contains(a.as_str()));
        self.validate_with(w, &leaf).map_err(|m| Error::MalformedValue(format!("{w}: {m}")))
    }

    /// Grammar check without constraining which atoms occur.
    pub fn validate_shape<A: Ord + Clone>(&self, w: &FunctorValue<A>) -> Result<()> {
        let leaf = |x: &FunctorValue<A>| matches!(x, FunctorValue::Atom(_));
        self.validate_with(w, &leaf).map_err(Error::MalformedValue)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FunctorSpec::Identity => "identity",
            FunctorSpec::UPair => "upair",
            FunctorSpec::DPair => "dpair",
            FunctorSpec::FinPowerset => "powerset",
            FunctorSpec::DirectedHyper => "directed_hyper",
            FunctorSpec::KTuple { .. } => "ktuple",
            FunctorSpec::Colored { .. } => "colored",
            FunctorSpec::Sum { .. } => "sum",
        }
    }

    /// `|F(V)|` for `|V| = n`, or `None` on overflow.
    pub fn count(&self, n: usize) -> Option<u128> {
        let n128 = n as u128;
        match self {
            FunctorSpec::Identity => Some(n128),
            FunctorSpec::UPair => Some(n128 + n128 * n128.saturating_sub(1) / 2),
            FunctorSpec::DPair => n128.checked_mul(n128),
            FunctorSpec::FinPowerset => pow2(n),
            FunctorSpec::DirectedHyper => pow2(n)?.checked_mul(n128),
            FunctorSpec::KTuple { k, min_equal } => {
                let all = n128.checked_pow(u32::try_from(*k).ok()?)?;
                if *min_equal <= 1 {
                    Some(all)
                } else {
                    Some(all - bounded_multiplicity(n, *k, *min_equal)?)
                }
            }
            FunctorSpec::Colored { edge_colors, vertex_colors, inner } => {
                let inner = inner.count(n.checked_mul(vertex_colors.len())?)?;
                inner.checked_mul(edge_colors.len() as u128)
            }
            FunctorSpec::Sum { parts } => {
                parts.iter().try_fold(0u128, |acc, p| acc.checked_add(p.count(n)?))
            }
        }
    }

    /// Enumerates `F` over an explicit leaf list, in canonical order.
    pub fn enumerate_leaves<A: Ord + Clone>(&self, leaves: &[FunctorValue<A>], cap: u128) -> Result<Vec<FunctorValue<A>>> {
        let mut leaves = leaves.to_vec();
        leaves.sort();
        leaves.dedup();
        match self.count(leaves.len()) {
            Some(c) if c <= cap => {}
            _ => {
                return Err(Error::EnumerationCapExceeded {
                    what: format!("{} over {} atoms", self.kind_name(), leaves.len()),
                    cap,
                })
            }
        }
        let mut out = self.enumerate_unchecked(&leaves, cap)?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn enumerate_unchecked<A: Ord + Clone>(&self, ls: &[FunctorValue<A>], cap: u128) -> Result<Vec<FunctorValue<A>>> {
        use FunctorValue as V;
        let n = ls.len();
        Ok(match self {
            FunctorSpec::Identity => ls.to_vec(),
            FunctorSpec::UPair => {
                let mut out: Vec<_> = ls.iter().map(|l| V::SetOf(vec![l.clone()])).collect();
                for i in 0..n {
                    for j in i + 1..n {
                        out.push(V::SetOf(vec![ls[i].clone(), ls[j].clone()]));
                    }
                }
                out
            }
            FunctorSpec::DPair => {
                let mut out = Vec::with_capacity(n * n);
                for a in ls {
                    for b in ls {
                        out.push(V::Tuple(vec![a.clone(), b.clone()]));
                    }
                }
                out
            }
            FunctorSpec::FinPowerset => subsets(ls),
            FunctorSpec::DirectedHyper => {
                let subs = subsets(ls);
                let mut out = Vec::with_capacity(n * subs.len());
                for a in ls {
                    for s in &subs {
                        out.push(V::Tuple(vec![a.clone(), s.clone()]));
                    }
                }
                out
            }
            FunctorSpec::KTuple { k, min_equal } => {
                let mut out = Vec::new();
                if n == 0 {
                    return Ok(out);
                }
                let mut idx = vec![0usize; *k];
                loop {
                    let t: Vec<_> = idx.iter().map(|&i| ls[i].clone()).collect();
                    if *min_equal <= 1 || max_multiplicity(&t) >= *min_equal {
                        out.push(V::Tuple(t));
                    }
                    let mut p = *k;
                    loop {
                        if p == 0 {
                            return Ok(out);
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < n {
                            break;
                        }
                        idx[p] = 0;
                    }
                }
            }
            FunctorSpec::Colored { edge_colors, vertex_colors, inner } => {
                let mut inner_leaves = Vec::with_capacity(n * vertex_colors.len());
                for l in ls {
                    for xv in vertex_colors {
                        inner_leaves.push(V::Colored(xv.clone(), Box::new(l.clone())));
                    }
                }
                let ws = inner.enumerate_leaves(&inner_leaves, cap)?;
                let mut out = Vec::with_capacity(ws.len() * edge_colors.len());
                for c in edge_colors {
                    for w in &ws {
                        out.push(V::Colored(c.clone(), Box::new(w.clone())));
                    }
                }
                out
            }
            FunctorSpec::Sum { parts } => {
                let mut out = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    for w in p.enumerate_leaves(ls, cap)? {
                        out.push(V::Tagged(i, Box::new(w)));
                    }
                }
                out
            }
        })
    }

    /// Enumerates `F(atoms)` in canonical order.
    pub fn enumerate_atoms<A: Ord + Clone>(&self, atoms: &[A], cap: u128) -> Result<Vec<FunctorValue<A>>> {
        let leaves: Vec<_> = atoms.iter().cloned().map(FunctorValue::Atom).collect();
        self.enumerate_leaves(&leaves, cap)
    }

    /// Enumerates `F(set)` in canonical order.
    pub fn enumerate(&self, set: &FiniteSet, cap: u128) -> Result<Vec<Value>> {
        self.enumerate_atoms(set.as_slice(), cap)
    }

    /// `F(f)(w)` for a finite map given as a table. Fails on malformed `w`
    /// or atoms outside the domain of `f`.
    pub fn map_value(&self, f: &BTreeMap<ElementId, ElementId>, w: &Value) -> Result<Value> {
        let leaf = |x: &Value| matches!(x, FunctorValue::Atom(a) if f.contains_key(a));
        self.validate_with(w, &leaf).map_err(|m| Error::MalformedValue(format!("{w}: {m}")))?;
        Ok(w.map_atoms(&mut |a| f[a].clone()))
    }

    /// Vertices occurring in `w`. Vertex colors of colored values are excluded.
    pub fn support(&self, w: &Value) -> Result<FiniteSet> {
        self.validate_shape(w)?;
        Ok(FiniteSet::new(w.support()))
    }

    /// `w ∈ F(sub)`, i.e. its support lies inside `sub`.
    pub fn value_in_subset(&self, w: &Value, sub: &FiniteSet) -> Result<bool> {
        self.validate_shape(w)?;
        Ok(w.all_atoms(|a| sub.contains(a.as_str())))
    }
}

fn max_multiplicity<A: Ord>(xs: &[FunctorValue<A>]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        best = best.max(xs[i..].iter().filter(|y| *y == x).count());
    }
    best
}

fn pow2(n: usize) -> Option<u128> {
    1u128.checked_shl(u32::try_from(n).ok()?).filter(|_| n < 128)
}

/// Number of k-sequences over n symbols in which every symbol occurs fewer
/// than `l` times.
fn bounded_multiplicity(n: usize, k: usize, l: usize) -> Option<u128> {
    let mut binom = vec![vec![0u128; k + 1]; k + 1];
    for i in 0..=k {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1].checked_add(binom[i - 1][j])?;
        }
    }
    let mut dp = vec![0u128; k + 1];
    dp[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; k + 1];
        for t in 0..=k {
            if dp[t] == 0 {
                continue;
            }
            for j in 0..l.min(k - t + 1) {
                let add = dp[t].checked_mul(binom[k - t][j])?;
                next[t + j] = next[t + j].checked_add(add)?;
            }
        }
        dp = next;
    }
    Some(dp[k])
}

fn subsets<A: Clone>(ls: &[FunctorValue<A>]) -> Vec<FunctorValue<A>> {
    let n = ls.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u128..(1u128 << n) {
        let s = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ls[i].clone()).collect();
        out.push(FunctorValue::SetOf(s));
    }
    out
}
