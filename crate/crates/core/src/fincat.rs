//! Finite graphs, categories and groupoids over a fixed object set.

use std::collections::{HashMap, HashSet};

use petgraph::unionfind::UnionFind;

use crate::error::{invalid, Error, Result};

fn check_distinct(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return invalid(format!("duplicate {what} label `{l}`"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGraph {
    pub objects: Vec<String>,
    pub edges: Vec<Edge>,
}

impl FinGraph {
    pub fn new(objects: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        check_distinct(&objects, "object")?;
        let ids: Vec<String> = edges.iter().map(|e| e.id.clone()).collect();
        check_distinct(&ids, "edge")?;
        for e in &edges {
            if e.src >= objects.len() || e.tgt >= objects.len() {
                return invalid(format!("edge `{}` has an endpoint outside the object set", e.id));
            }
        }
        Ok(FinGraph { objects, edges })
    }

    /// Convenience constructor from labels.
    pub fn from_labels(objects: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let pos = |l: &str| {
            objs.iter().position(|o| o == l).ok_or_else(|| Error::Validation(format!("unknown object `{l}`")))
        };
        let mut es = Vec::new();
        for (id, s, t) in edges {
            es.push(Edge { id: id.to_string(), src: pos(s)?, tgt: pos(t)? });
        }
        FinGraph::new(objs, es)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category with an explicit composition table; `compose(g, f)` is `g∘f`.
#[derive(Debug, Clone)]
pub struct FinCat {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identity: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

impl FinCat {
    /// Builds and audits a category. `table` lists triples `(g, f, g∘f)`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        table: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        check_distinct(&objects, "object")?;
        let names: Vec<String> = morphisms.iter().map(|m| m.name.clone()).collect();
        check_distinct(&names, "morphism")?;
        let no = objects.len();
        let nm = morphisms.len();
        for m in &morphisms {
            if m.src >= no || m.tgt >= no {
                return invalid(format!("morphism `{}` has an endpoint outside the object set", m.name));
            }
        }
        if identity.len() != no {
            return invalid("identity assignment must cover every object");
        }
        for (o, &i) in identity.iter().enumerate() {
            if i >= nm || morphisms[i].src != o || morphisms[i].tgt != o {
                return invalid(format!("identity of `{}` is not an endomorphism of it", objects[o]));
            }
        }
        let mut comp = HashMap::with_capacity(table.len());
        for (g, f, h) in table {
            if g >= nm || f >= nm || h >= nm {
                return invalid("composition table refers to an unknown morphism");
            }
            if morphisms[f].tgt != morphisms[g].src {
                return invalid(format!(
                    "composite of non-composable `{}` after `{}`",
                    morphisms[g].name, morphisms[f].name
                ));
            }
            if morphisms[h].src != morphisms[f].src || morphisms[h].tgt != morphisms[g].tgt {
                return invalid(format!("composite `{}` has wrong endpoints", morphisms[h].name));
            }
            if let Some(old) = comp.insert((g, f), h) {
                if old != h {
                    return invalid(format!(
                        "two composites listed for `{}`∘`{}`",
                        morphisms[g].name, morphisms[f].name
                    ));
                }
            }
        }
        let cat = FinCat { objects, morphisms, identity, comp };
        cat.audit()?;
        Ok(cat)
    }

    /// Builds a category from a total composition function on composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut table = Vec::new();
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                if morphisms[f].tgt == morphisms[g].src {
                    table.push((g, f, compose(g, f)));
                }
            }
        }
        FinCat::new(objects, morphisms, identity, table)
    }

    /// Closure, unit and associativity audit.
    pub fn audit(&self) -> Result<()> {
        let nm = self.morphisms.len();
        let by_src = self.out_lists();
        for f in 0..nm {
            for &g in &by_src[self.morphisms[f].tgt] {
                if !self.comp.contains_key(&(g, f)) {
                    return invalid(format!(
                        "composite `{}`∘`{}` missing",
                        self.morphisms[g].name, self.morphisms[f].name
                    ));
                }
            }
            let m = &self.morphisms[f];
            if self.comp[&(self.identity[m.tgt], f)] != f || self.comp[&(f, self.identity[m.src])] != f {
                return invalid(format!("unit law fails at `{}`", m.name));
            }
        }
        for f in 0..nm {
            for &g in &by_src[self.morphisms[f].tgt] {
                let gf = self.comp[&(g, f)];
                for &h in &by_src[self.morphisms[g].tgt] {
                    let hg = self.comp[&(h, g)];
                    if self.comp[&(h, gf)] != self.comp[&(hg, f)] {
                        return invalid(format!(
                            "associativity fails at (`{}`,`{}`,`{}`)",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Vec::new(); self.objects.len()];
        for (i, m) in self.morphisms.iter().enumerate() {
            v[m.src].push(i);
        }
        v
    }

    pub fn discrete(objects: &[&str]) -> Self {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let morphisms =
            objs.iter().enumerate().map(|(i, o)| Morphism { name: format!("id_{o}"), src: i, tgt: i }).collect();
        let identity = (0..objs.len()).collect();
        FinCat::from_fn(objs, morphisms, identity, |g, _| g).expect("discrete category")
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    pub fn table(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.comp.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        t.sort_unstable();
        t
    }

    pub fn hom_from(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == a).collect()
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == a && self.morphisms[m].tgt == b).collect()
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.morphisms[m].src] == m
    }

    pub fn inverse_of(&self, f: usize) -> Option<usize> {
        let m = &self.morphisms[f];
        self.hom(m.tgt, m.src).into_iter().find(|&g| {
            self.compose(g, f) == Some(self.identity[m.src]) && self.compose(f, g) == Some(self.identity[m.tgt])
        })
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }
}

/// Iso classes, numbered by their least object; the representative is that object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClasses {
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

pub fn iso_classes(c: &FinCat) -> IsoClasses {
    let mut uf = UnionFind::<usize>::new(c.objects.len());
    for (f, m) in c.morphisms.iter().enumerate() {
        if m.src != m.tgt && c.inverse_of(f).is_some() {
            uf.union(m.src, m.tgt);
        }
    }
    classes_from_union_find(&mut uf, c.objects.len())
}

pub(crate) fn classes_from_union_find(uf: &mut UnionFind<usize>, n: usize) -> IsoClasses {
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        let r = uf.find_mut(x);
        let k = *root_class.entry(r).or_insert_with(|| {
            reps.push(x);
            reps.len() - 1
        });
        class_of[x] = k;
    }
    IsoClasses { class_of, reps }
}

#[derive(Debug, Clone)]
pub struct FinGroupoid {
    pub cat: FinCat,
    pub inverse: Vec<usize>,
}

impl FinGroupoid {
    pub fn new(cat: FinCat, inverse: Vec<usize>) -> Result<Self> {
        if inverse.len() != cat.morphisms.len() {
            return invalid("inverse assignment must cover every morphism");
        }
        for (g, &h) in inverse.iter().enumerate() {
            let m = &cat.morphisms[g];
            if h >= cat.morphisms.len()
                || cat.compose(h, g) != Some(cat.identity[m.src])
                || cat.compose(g, h) != Some(cat.identity[m.tgt])
            {
                return invalid(format!("`{}` has no valid inverse", m.name));
            }
        }
        Ok(FinGroupoid { cat, inverse })
    }

    pub fn from_cat(cat: FinCat) -> Result<Self> {
        let mut inverse = Vec::with_capacity(cat.morphisms.len());
        for f in 0..cat.morphisms.len() {
            match cat.inverse_of(f) {
                Some(g) => inverse.push(g),
                None => return invalid(format!("`{}` is not invertible", cat.morphisms[f].name)),
            }
        }
        Ok(FinGroupoid { cat, inverse })
    }
}

/// An equivalence relation viewed as a groupoid with at most one arrow per ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRelGroupoid {
    pub objects: Vec<String>,
    pub relation: Vec<(usize, usize)>,
}

impl EqRelGroupoid {
    pub fn new(objects: Vec<String>, relation: Vec<(usize, usize)>) -> Result<Self> {
        check_distinct(&objects, "object")?;
        let n = objects.len();
        let set: HashSet<(usize, usize)> = relation.iter().copied().collect();
        if set.len() != relation.len() {
            return invalid("relation lists a pair twice");
        }
        if relation.iter().any(|&(a, b)| a >= n || b >= n) {
            return invalid("relation mentions an unknown object");
        }
        for x in 0..n {
            if !set.contains(&(x, x)) {
                return invalid(format!("relation is not reflexive at `{}`", objects[x]));
            }
        }
        for &(a, b) in &relation {
            if !set.contains(&(b, a)) {
                return invalid("relation is not symmetric");
            }
            for c in 0..n {
                if set.contains(&(b, c)) && !set.contains(&(a, c)) {
                    return invalid("relation is not transitive");
                }
            }
        }
        let mut relation = relation;
        relation.sort_unstable();
        Ok(EqRelGroupoid { objects, relation })
    }

    pub fn indiscrete(objects: &[&str]) -> Self {
        let n = objects.len();
        let rel = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        EqRelGroupoid::new(objects.iter().map(|s| s.to_string()).collect(), rel).expect("indiscrete")
    }

    pub fn to_groupoid(&self) -> FinGroupoid {
        let pos: HashMap<(usize, usize), usize> = self.relation.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let morphisms = self
            .relation
            .iter()
            .map(|&(a, b)| Morphism { name: format!("{}->{}", self.objects[a], self.objects[b]), src: a, tgt: b })
            .collect();
        let identity = (0..self.objects.len()).map(|x| pos[&(x, x)]).collect();
        let rel = self.relation.clone();
        let cat = FinCat::from_fn(self.objects.clone(), morphisms, identity, |g, f| pos[&(rel[f].0, rel[g].1)])
            .expect("equivalence relation is a category");
        let inverse = self.relation.iter().map(|&(a, b)| pos[&(b, a)]).collect();
        FinGroupoid::new(cat, inverse).expect("equivalence relation is a groupoid")
    }
}

/// A functor given by its object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorMap {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl FunctorMap {
    pub fn identity(c: &FinCat) -> Self {
        FunctorMap { obj: (0..c.objects.len()).collect(), mor: (0..c.morphisms.len()).collect() }
    }

    pub fn check(&self, a: &FinCat, b: &FinCat) -> Result<()> {
        if self.obj.len() != a.objects.len() || self.mor.len() != a.morphisms.len() {
            return invalid("functor maps have the wrong length");
        }
        if self.obj.iter().any(|&o| o >= b.objects.len()) || self.mor.iter().any(|&m| m >= b.morphisms.len()) {
            return invalid("functor maps outside its target");
        }
        for (f, m) in a.morphisms.iter().enumerate() {
            let fm = &b.morphisms[self.mor[f]];
            if fm.src != self.obj[m.src] || fm.tgt != self.obj[m.tgt] {
                return invalid(format!("functor does not preserve endpoints of `{}`", m.name));
            }
        }
        for (o, &i) in a.identity.iter().enumerate() {
            if self.mor[i] != b.identity[self.obj[o]] {
                return invalid("functor does not preserve identities");
            }
        }
        for (g, f, h) in a.table() {
            if b.compose(self.mor[g], self.mor[f]) != Some(self.mor[h]) {
                return invalid("functor does not preserve composition");
            }
        }
        Ok(())
    }
}

/// Full, faithful and essentially surjective, checked by hom-set enumeration.
pub fn is_equivalence(f: &FunctorMap, a: &FinCat, b: &FinCat) -> bool {
    if f.check(a, b).is_err() {
        return false;
    }
    let na = a.objects.len();
    for x in 0..na {
        for y in 0..na {
            let src = a.hom(x, y);
            let mut image: Vec<usize> = src.iter().map(|&m| f.mor[m]).collect();
            image.sort_unstable();
            image.dedup();
            if image.len() != src.len() || image.len() != b.hom(f.obj[x], f.obj[y]).len() {
                return false;
            }
        }
    }
    let cls = iso_classes(b);
    let hit: HashSet<usize> = f.obj.iter().map(|&o| cls.class_of[o]).collect();
    hit.len() == cls.reps.len()
}

/// Whether some identity-on-objects functor `a → b` is an isomorphism.
pub fn isomorphic_over_objects(a: &FinCat, b: &FinCat) -> bool {
    if a.objects.len() != b.objects.len() || a.morphisms.len() != b.morphisms.len() {
        return false;
    }
    let mut assign = vec![usize::MAX; a.morphisms.len()];
    let mut used = vec![false; b.morphisms.len()];
    for (o, &i) in a.identity.iter().enumerate() {
        assign[i] = b.identity[o];
        used[b.identity[o]] = true;
    }
    let table = a.table();
    fn consistent(b: &FinCat, assign: &[usize], table: &[(usize, usize, usize)]) -> bool {
        table.iter().all(|&(g, f, h)| {
            assign[g] == usize::MAX
                || assign[f] == usize::MAX
                || assign[h] == usize::MAX
                || b.compose(assign[g], assign[f]) == Some(assign[h])
        })
    }
    fn go(
        a: &FinCat,
        b: &FinCat,
        m: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        table: &[(usize, usize, usize)],
    ) -> bool {
        if m == a.morphisms.len() {
            return consistent(b, assign, table);
        }
        if assign[m] != usize::MAX {
            return go(a, b, m + 1, assign, used, table);
        }
        let (s, t) = (a.morphisms[m].src, a.morphisms[m].tgt);
        for cand in b.hom(s, t) {
            if used[cand] {
                continue;
            }
            assign[m] = cand;
            used[cand] = true;
            if consistent(b, assign, table) && go(a, b, m + 1, assign, used, table) {
                return true;
            }
            assign[m] = usize::MAX;
            used[cand] = false;
        }
        false
    }
    go(a, b, 0, &mut assign, &mut used, &table)
}

/// Pullback of `f: A → D` and `g: B → D` with its two projections.
pub fn pullback_cat(
    a: &FinCat,
    b: &FinCat,
    d: &FinCat,
    f: &FunctorMap,
    g: &FunctorMap,
) -> Result<(FinCat, FunctorMap, FunctorMap)> {
    f.check(a, d)?;
    g.check(b, d)?;
    let mut objs = Vec::new();
    let mut obj_ix = HashMap::new();
    for x in 0..a.objects.len() {
        for y in 0..b.objects.len() {
            if f.obj[x] == g.obj[y] {
                obj_ix.insert((x, y), objs.len());
                objs.push((x, y));
            }
        }
    }
    let mut mors = Vec::new();
    let mut mor_ix = HashMap::new();
    for (p, pm) in a.morphisms.iter().enumerate() {
        for (q, qm) in b.morphisms.iter().enumerate() {
            if f.mor[p] == g.mor[q] {
                mor_ix.insert((p, q), mors.len());
                mors.push(Morphism {
                    name: format!("({},{})", pm.name, qm.name),
                    src: obj_ix[&(pm.src, qm.src)],
                    tgt: obj_ix[&(pm.tgt, qm.tgt)],
                });
            }
        }
    }
    let pairs: Vec<(usize, usize)> = {
        let mut v = vec![(0, 0); mors.len()];
        for (&k, &i) in &mor_ix {
            v[i] = k;
        }
        v
    };
    let identity = objs.iter().map(|&(x, y)| mor_ix[&(a.identity[x], b.identity[y])]).collect();
    let labels = objs.iter().map(|&(x, y)| format!("({},{})", a.objects[x], b.objects[y])).collect();
    let p = FinCat::from_fn(labels, mors, identity, |h, k| {
        let (h1, h2) = pairs[h];
        let (k1, k2) = pairs[k];
        mor_ix[&(a.compose(h1, k1).unwrap(), b.compose(h2, k2).unwrap())]
    })?;
    let p1 = FunctorMap { obj: objs.iter().map(|o| o.0).collect(), mor: pairs.iter().map(|m| m.0).collect() };
    let p2 = FunctorMap { obj: objs.iter().map(|o| o.1).collect(), mor: pairs.iter().map(|m| m.1).collect() };
    Ok((p, p1, p2))
}

/// Free category on a graph with paths bounded by `bound` edges.
#[derive(Debug, Clone)]
pub struct FreeCat {
    pub base: FinGraph,
    pub bound: usize,
    /// Each morphism is a path, edges listed in order of traversal; identities are empty paths.
    pub paths: Vec<(usize, usize, Vec<usize>)>,
    pub truncated: bool,
    index: HashMap<(usize, Vec<usize>), usize>,
}

pub fn free_category(g: &FinGraph, bound: usize) -> Result<FreeCat> {
    if bound == 0 {
        return Err(Error::Precondition("length bound must be at least 1".into()));
    }
    let mut out = vec![Vec::new(); g.objects.len()];
    for (i, e) in g.edges.iter().enumerate() {
        out[e.src].push(i);
    }
    let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..g.objects.len()).map(|o| (o, o, Vec::new())).collect();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        frontier.push((e.src, e.tgt, vec![i]));
    }
    let mut truncated = false;
    for len in 1..=bound {
        let mut next = Vec::new();
        for (s, t, p) in frontier {
            if len == bound {
                truncated |= !out[t].is_empty();
            } else {
                for &e in &out[t] {
                    let mut q = p.clone();
                    q.push(e);
                    next.push((s, g.edges[e].tgt, q));
                }
            }
            paths.push((s, t, p));
        }
        frontier = next;
    }
    let index = paths.iter().enumerate().map(|(i, (s, _, p))| ((*s, p.clone()), i)).collect();
    Ok(FreeCat { base: g.clone(), bound, paths, truncated, index })
}

impl FreeCat {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path_index(&self, src: usize, edges: &[usize]) -> Option<usize> {
        self.index.get(&(src, edges.to_vec())).copied()
    }

    pub fn name(&self, m: usize) -> String {
        let (s, _, p) = &self.paths[m];
        if p.is_empty() {
            format!("id_{}", self.base.objects[*s])
        } else {
            p.iter().rev().map(|&e| self.base.edges[e].id.as_str()).collect::<Vec<_>>().join("∘")
        }
    }

    /// `g∘f` by concatenation; errors when the result is longer than the bound.
    pub fn compose(&self, g: usize, f: usize) -> Result<Option<usize>> {
        let (fs, ft, fp) = &self.paths[f];
        let (gs, _, gp) = &self.paths[g];
        if ft != gs {
            return Ok(None);
        }
        let mut p = fp.clone();
        p.extend_from_slice(gp);
        match self.path_index(*fs, &p) {
            Some(i) => Ok(Some(i)),
            None => {
                Err(Error::Truncation { bound: self.bound, path: format!("{} ∘ {}", self.name(g), self.name(f)) })
            }
        }
    }

    /// The underlying finite category; refused when composition is not closed.
    pub fn to_fincat(&self) -> Result<FinCat> {
        if self.truncated {
            let (s, _, p) = self.paths.iter().find(|(_, _, p)| p.len() == self.bound).unwrap();
            return Err(Error::Truncation { bound: self.bound, path: self.name(self.index[&(*s, p.clone())]) });
        }
        let morphisms = (0..self.len())
            .map(|i| Morphism { name: self.name(i), src: self.paths[i].0, tgt: self.paths[i].1 })
            .collect();
        let identity = (0..self.base.objects.len()).collect();
        FinCat::from_fn(self.base.objects.clone(), morphisms, identity, |g, f| self.compose(g, f).unwrap().unwrap())
    }

    /// Every non-identity morphism has exactly one factorization into generators.
    pub fn unique_decomposition_audit(&self) -> Result<()> {
        let gens: Vec<usize> = (0..self.base.edges.len())
            .map(|e| self.path_index(self.base.edges[e].src, &[e]).expect("generator present"))
            .collect();
        let mut ways = vec![0usize; self.len()];
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&m| self.paths[m].2.len());
        for &m in &order {
            if self.paths[m].2.is_empty() {
                continue;
            }
            let mut count = 0;
            for (e, &gi) in gens.iter().enumerate() {
                if self.paths[m].1 != self.base.edges[e].tgt {
                    continue;
                }
                if gi == m {
                    count += 1;
                    continue;
                }
                for (f, (fs, ft, fp)) in self.paths.iter().enumerate() {
                    if fp.is_empty() || *fs != self.paths[m].0 || *ft != self.base.edges[e].src {
                        continue;
                    }
                    if let Ok(Some(h)) = self.compose(gi, f) {
                        if h == m {
                            count += ways[f];
                        }
                    }
                }
            }
            ways[m] = count;
            if count != 1 {
                return invalid(format!("`{}` has {count} generator factorizations", self.name(m)));
            }
        }
        Ok(())
    }
}

/// Graph whose edges are all morphisms, identities included.
pub fn underlying_graph(c: &FinCat) -> FinGraph {
    FinGraph {
        objects: c.objects.clone(),
        edges: c.morphisms.iter().map(|m| Edge { id: m.name.clone(), src: m.src, tgt: m.tgt }).collect(),
    }
}

/// Counit `FVC → C`: evaluates a path by composing in `C`.
pub fn counit_eval(c: &FinCat, path: &[usize], src: usize) -> usize {
    path.iter().fold(c.identity[src], |acc, &m| c.compose(m, acc).expect("composable path"))
}

/// Both triangle identities of the free/forgetful adjunction on generators.
pub fn adjunction_triangle_audit(g: &FinGraph, c: &FinCat, bound: usize) -> Result<()> {
    let fg = free_category(g, bound)?;
    let vfg = {
        let mut edges = Vec::new();
        for i in 0..fg.len() {
            edges.push(Edge { id: fg.name(i), src: fg.paths[i].0, tgt: fg.paths[i].1 });
        }
        FinGraph { objects: g.objects.clone(), edges }
    };
    // ε_F ∘ F(η): the generator e goes to the edge [e] of VFG, then is evaluated in FG.
    for e in 0..g.edges.len() {
        let as_path = fg.path_index(g.edges[e].src, &[e]).expect("generator present");
        if vfg.edges[as_path].id != g.edges[e].id {
            return invalid(format!("εF∘Fη moves generator `{}`", g.edges[e].id));
        }
    }
    // Vε ∘ η_V: a morphism m becomes the one-edge path [m] and evaluates back to m.
    let vc = underlying_graph(c);
    for m in 0..c.morphisms.len() {
        if counit_eval(c, &[m], vc.edges[m].src) != m {
            return invalid(format!("Vε∘ηV moves `{}`", c.morphisms[m].name));
        }
    }
    Ok(())
}

/// Generic audit for bounded categories: every non-identity morphism factors uniquely
/// into indecomposables.
pub fn freeness_audit(c: &FinCat) -> Result<()> {
    let nm = c.morphisms.len();
    let non_id: Vec<usize> = (0..nm).filter(|&m| !c.is_identity(m)).collect();
    let decomposable: HashSet<usize> =
        c.table().into_iter().filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f)).map(|(_, _, h)| h).collect();
    let gens: Vec<usize> = non_id.iter().copied().filter(|m| !decomposable.contains(m)).collect();
    // Count factorizations m = g_k ∘ … ∘ g_1 by dynamic programming over lengths.
    let mut ways: HashMap<usize, u64> = HashMap::new();
    let mut layer: HashMap<usize, u64> = gens.iter().map(|&g| (g, 1)).collect();
    for _ in 0..=nm {
        if layer.is_empty() {
            break;
        }
        let mut next: HashMap<usize, u64> = HashMap::new();
        for (&m, &w) in &layer {
            *ways.entry(m).or_default() += w;
            for &g in &gens {
                if let Some(h) = c.compose(g, m) {
                    *next.entry(h).or_default() += w;
                }
            }
        }
        layer = next;
    }
    if !layer.is_empty() {
        return invalid("a morphism admits arbitrarily long factorizations");
    }
    for &m in &non_id {
        let w = ways.get(&m).copied().unwrap_or(0);
        if w != 1 {
            return invalid(format!("`{}` has {w} factorizations into indecomposables", c.morphisms[m].name));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        assert!(FinGraph::from_labels(&["a", "a"], &[]).is_err());
        assert!(FinGraph::from_labels(&["a"], &[("e", "a", "a"), ("e", "a", "a")]).is_err());
    }

    #[test]
    fn missing_composite_rejected() {
        let objs = vec!["a".to_string()];
        let ms = vec![Morphism { name: "id".into(), src: 0, tgt: 0 }, Morphism { name: "e".into(), src: 0, tgt: 0 }];
        let t = vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)];
        assert!(FinCat::new(objs, ms, vec![0], t).is_err());
    }

    #[test]
    fn non_associative_rejected() {
        // (e∘e)∘e = f∘e = f but e∘(e∘e) = e∘f = e
        let objs = vec!["a".to_string()];
        let ms = vec![
            Morphism { name: "id".into(), src: 0, tgt: 0 },
            Morphism { name: "e".into(), src: 0, tgt: 0 },
            Morphism { name: "f".into(), src: 0, tgt: 0 },
        ];
        let table = |g: usize, f: usize| -> usize {
            match (g, f) {
                (0, x) | (x, 0) => x,
                (1, 1) => 2,
                (1, 2) => 1,
                (2, 1) => 2,
                _ => 2,
            }
        };
        assert!(FinCat::from_fn(objs, ms, vec![0], table).is_err());
    }

    #[test]
    fn empty_category_is_legal() {
        let c = FinCat::new(vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(iso_classes(&c).reps.len(), 0);
        assert!(is_equivalence(&FunctorMap::identity(&c), &c, &c));
    }

    #[test]
    fn eqrel_requires_transitivity() {
        let objs: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let rel = vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)];
        assert!(EqRelGroupoid::new(objs, rel).is_err());
    }

    #[test]
    fn free_category_zero_bound_rejected() {
        let g = FinGraph::from_labels(&["a"], &[]).unwrap();
        assert!(matches!(free_category(&g, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn truncated_free_category_refuses_closure() {
        let g = FinGraph::from_labels(&["a"], &[("e", "a", "a")]).unwrap();
        let fc = free_category(&g, 2).unwrap();
        assert!(fc.truncated);
        assert!(matches!(fc.to_fincat(), Err(Error::Truncation { .. })));
        let e2 = fc.path_index(0, &[0, 0]).unwrap();
        assert!(matches!(fc.compose(e2, e2), Err(Error::Truncation { .. })));
    }

    #[test]
    fn functor_check_catches_bad_composition() {
        let a = EqRelGroupoid::indiscrete(&["x", "y"]).to_groupoid().cat;
        // send every morphism of EQ2 to a single point-category morphism but keep two objects: invalid target
        let pt = FinCat::discrete(&["p"]);
        let bad = FunctorMap { obj: vec![0, 1], mor: vec![0; 4] };
        assert!(bad.check(&a, &pt).is_err());
    }
}
