//! n-track categories, stored as (n+1)-fold categories whose first direction is
//! the composition of a category with fixed object set.

use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::fincat::{FinCat, FunctorMap, Morphism};
use crate::multifold::{all_corners, corner_code, is_weakly_globular, truncate_nfold_map, NFoldCat, NFoldMap};

#[derive(Debug, Clone)]
pub struct TrackCatN {
    n: usize,
    objects: Vec<String>,
    x: NFoldCat,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Key {
    Obj(usize),
    Cell(usize, usize, usize),
    Pair(usize, usize, usize, usize, usize),
}

fn prefixed(k0: u8, kp: &[u8]) -> Vec<u8> {
    let mut k = Vec::with_capacity(kp.len() + 1);
    k.push(k0);
    k.extend_from_slice(kp);
    k
}

impl TrackCatN {
    /// Assembles a track category from its hom-objects. `compose(k', a, b, c, f, g)` is
    /// `g∘f` in `hom(a,c)` at corner `k'`, for `f ∈ hom(a,b)` and `g ∈ hom(b,c)`;
    /// `unit[a]` is the identity 1-cell of `a` in `hom(a,a)` at corner `0…0`.
    pub fn from_enriched(
        objects: Vec<String>,
        homs: BTreeMap<(usize, usize), NFoldCat>,
        unit: Vec<usize>,
        compose: impl Fn(&[u8], usize, usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let no = objects.len();
        let n = match homs.values().next() {
            Some(h) => h.dim(),
            None => return invalid("a track category needs the hom-objects of its identities"),
        };
        if homs.values().any(|h| h.dim() != n) {
            return invalid("hom-objects of different dimensions");
        }
        if unit.len() != no {
            return invalid("every object needs an identity 1-cell");
        }
        for a in 0..no {
            match homs.get(&(a, a)) {
                Some(h) if unit[a] < h.size(&vec![0; n]) => {}
                _ => return invalid(format!("identity of `{}` is not a 1-cell of its endo-hom", objects[a])),
            }
        }
        let hom = |a: usize, b: usize| homs.get(&(a, b));
        let size = |a: usize, b: usize, kp: &[u8]| hom(a, b).map_or(0, |h| h.size(kp));
        let unit_at = |a: usize, kp: &[u8]| -> usize {
            let h = &homs[&(a, a)];
            let mut k = vec![0u8; n];
            let mut e = unit[a];
            for d in 0..n {
                while k[d] < kp[d] {
                    e = h.degen(d, 0, &k, e);
                    k[d] += 1;
                }
            }
            e
        };
        let x = NFoldCat::build(
            n + 1,
            |k| {
                let kp = &k[1..];
                match k[0] {
                    0 => (0..no).map(Key::Obj).collect(),
                    1 => {
                        let mut v = Vec::new();
                        for a in 0..no {
                            for b in 0..no {
                                v.extend((0..size(a, b, kp)).map(|e| Key::Cell(a, b, e)));
                            }
                        }
                        v
                    }
                    _ => {
                        let mut v = Vec::new();
                        for a in 0..no {
                            for b in 0..no {
                                for c in 0..no {
                                    for f in 0..size(a, b, kp) {
                                        v.extend((0..size(b, c, kp)).map(|g| Key::Pair(a, b, c, f, g)));
                                    }
                                }
                            }
                        }
                        v
                    }
                }
            },
            |d, i, k, key| {
                let kp = &k[1..];
                if d == 0 {
                    return match (key, i) {
                        (Key::Cell(_, b, _), 0) => Key::Obj(*b),
                        (Key::Cell(a, _, _), _) => Key::Obj(*a),
                        (Key::Pair(_, b, c, _, g), 0) => Key::Cell(*b, *c, *g),
                        (Key::Pair(a, b, c, f, g), 1) => Key::Cell(*a, *c, compose(kp, *a, *b, *c, *f, *g)),
                        (Key::Pair(a, b, _, f, _), _) => Key::Cell(*a, *b, *f),
                        (Key::Obj(_), _) => unreachable!(),
                    };
                }
                let dd = d - 1;
                match key {
                    Key::Obj(a) => Key::Obj(*a),
                    Key::Cell(a, b, e) => Key::Cell(*a, *b, homs[&(*a, *b)].face(dd, i, kp, *e)),
                    Key::Pair(a, b, c, f, g) => {
                        Key::Pair(*a, *b, *c, homs[&(*a, *b)].face(dd, i, kp, *f), homs[&(*b, *c)].face(dd, i, kp, *g))
                    }
                }
            },
            |d, i, k, key| {
                let kp = &k[1..];
                if d == 0 {
                    return match (key, i) {
                        (Key::Obj(a), _) => Key::Cell(*a, *a, unit_at(*a, kp)),
                        (Key::Cell(a, b, e), 0) => Key::Pair(*a, *a, *b, unit_at(*a, kp), *e),
                        (Key::Cell(a, b, e), _) => Key::Pair(*a, *b, *b, *e, unit_at(*b, kp)),
                        (Key::Pair(..), _) => unreachable!(),
                    };
                }
                let dd = d - 1;
                match key {
                    Key::Obj(a) => Key::Obj(*a),
                    Key::Cell(a, b, e) => Key::Cell(*a, *b, homs[&(*a, *b)].degen(dd, i, kp, *e)),
                    Key::Pair(a, b, c, f, g) => Key::Pair(
                        *a,
                        *b,
                        *c,
                        homs[&(*a, *b)].degen(dd, i, kp, *f),
                        homs[&(*b, *c)].degen(dd, i, kp, *g),
                    ),
                }
            },
            |k, key| match key {
                Key::Obj(a) => objects[*a].clone(),
                Key::Cell(a, b, e) => homs[&(*a, *b)].labels(&k[1..])[*e].clone(),
                Key::Pair(a, b, c, f, g) => {
                    format!("({};{})", homs[&(*a, *b)].labels(&k[1..])[*f], homs[&(*b, *c)].labels(&k[1..])[*g])
                }
            },
        )?;
        let t = TrackCatN { n, objects, x };
        t.check_homs()?;
        Ok(t)
    }

    /// Wraps an (n+1)-fold category whose first direction is a category on `objects`.
    pub fn from_nfold(objects: Vec<String>, x: NFoldCat) -> Result<Self> {
        if x.dim() == 0 {
            return invalid("a track category needs a composition direction");
        }
        let n = x.dim() - 1;
        let no = objects.len();
        for kp in all_corners(n) {
            let k0 = prefixed(0, &kp);
            if x.size(&k0) != no {
                return invalid(format!("object level at {kp:?} has {} elements, expected {no}", x.size(&k0)));
            }
            for d in 1..=n {
                let fams: Vec<&[usize]> =
                    if k0[d] >= 1 { (0..=k0[d] as usize).map(|i| x.face_map(d, i, &k0)).collect() } else { vec![] };
                let degs: Vec<&[usize]> =
                    if k0[d] <= 1 { (0..=k0[d] as usize).map(|i| x.degen_map(d, i, &k0)).collect() } else { vec![] };
                for m in fams.into_iter().chain(degs) {
                    if m.iter().enumerate().any(|(i, &j)| i != j) {
                        return invalid(format!("structure map in direction {d} moves objects at {kp:?}"));
                    }
                }
            }
        }
        let t = TrackCatN { n, objects, x };
        t.check_homs()?;
        Ok(t)
    }

    fn check_homs(&self) -> Result<()> {
        for a in 0..self.objects.len() {
            for b in 0..self.objects.len() {
                let h = self.hom(a, b)?;
                let ev = is_weakly_globular(&h);
                if !ev.ok || !ev.groupoid {
                    let why =
                        ev.witness.map(|w| w.to_string()).unwrap_or_else(|| "not a groupoid in every direction".into());
                    return invalid(format!(
                        "hom({},{}) is not a weakly globular n-fold groupoid: {why}",
                        self.objects[a], self.objects[b]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    /// The underlying (n+1)-fold category.
    pub fn nfold(&self) -> &NFoldCat {
        &self.x
    }

    /// `hom(a,b)` as an n-fold category.
    pub fn hom(&self, a: usize, b: usize) -> Result<NFoldCat> {
        if a >= self.objects.len() || b >= self.objects.len() {
            return Err(Error::Precondition(format!("object index out of range ({a},{b})")));
        }
        let keep: Vec<Vec<bool>> = all_corners(self.n)
            .map(|kp| {
                let k1 = prefixed(1, &kp);
                (0..self.x.size(&k1))
                    .map(|e| self.x.face(0, 1, &k1, e) == a && self.x.face(0, 0, &k1, e) == b)
                    .collect()
            })
            .collect();
        self.x.slice(0, 1).restrict(&keep)
    }

    /// Global index of the `local`-th element of `hom(a,b)` at `k'`.
    pub fn cell_index(&self, kp: &[u8], a: usize, b: usize, local: usize) -> Option<usize> {
        let k1 = prefixed(1, kp);
        (0..self.x.size(&k1)).filter(|&e| self.x.face(0, 1, &k1, e) == a && self.x.face(0, 0, &k1, e) == b).nth(local)
    }

    pub fn to_internal(&self) -> InternalForm {
        let n = self.n;
        let nc = 3usize.pow(n as u32);
        let levels: Vec<FinCat> = all_corners(n).map(|kp| self.level_category(&kp)).collect();
        let mut faces = vec![vec![Vec::new(); nc]; n];
        let mut degens = vec![vec![Vec::new(); nc]; n];
        for kp in all_corners(n) {
            let code = corner_code(&kp);
            let k1 = prefixed(1, &kp);
            for d in 0..n {
                let objmap: Vec<usize> = (0..self.objects.len()).collect();
                if kp[d] >= 1 {
                    for i in 0..=kp[d] as usize {
                        faces[d][code]
                            .push(FunctorMap { obj: objmap.clone(), mor: self.x.face_map(d + 1, i, &k1).to_vec() });
                    }
                }
                if kp[d] <= 1 {
                    for i in 0..=kp[d] as usize {
                        degens[d][code]
                            .push(FunctorMap { obj: objmap.clone(), mor: self.x.degen_map(d + 1, i, &k1).to_vec() });
                    }
                }
            }
        }
        InternalForm { n, objects: self.objects.clone(), levels, faces, degens }
    }

    fn level_category(&self, kp: &[u8]) -> FinCat {
        let k0 = prefixed(0, kp);
        let k1 = prefixed(1, kp);
        let k2 = prefixed(2, kp);
        let x = &self.x;
        let names = unique_names(x.labels(&k1));
        let morphisms = (0..x.size(&k1))
            .map(|e| Morphism { name: names[e].clone(), src: x.face(0, 1, &k1, e), tgt: x.face(0, 0, &k1, e) })
            .collect();
        let identity = (0..self.objects.len()).map(|a| x.degen(0, 0, &k0, a)).collect();
        let table =
            (0..x.size(&k2)).map(|p| (x.face(0, 0, &k2, p), x.face(0, 2, &k2, p), x.face(0, 1, &k2, p))).collect();
        FinCat::new(self.objects.clone(), morphisms, identity, table).expect("levels of a valid track category")
    }

    pub fn from_internal(f: &InternalForm) -> Result<Self> {
        f.check()?;
        let n = f.n;
        let no = f.objects.len();
        let nc1 = 3usize.pow(n as u32 + 1);
        let pairs: Vec<Vec<(usize, usize)>> = f
            .levels
            .iter()
            .map(|c| {
                let mut v = Vec::new();
                for a in 0..c.morphisms.len() {
                    for b in c.hom_from(c.morphisms[a].tgt) {
                        v.push((a, b));
                    }
                }
                v
            })
            .collect();
        let pair_ix: Vec<std::collections::HashMap<(usize, usize), usize>> =
            pairs.iter().map(|v| v.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
        let mut labels = vec![Vec::new(); nc1];
        let mut faces = vec![vec![Vec::new(); nc1]; n + 1];
        let mut degens = vec![vec![Vec::new(); nc1]; n + 1];
        for k in all_corners(n + 1) {
            let code = corner_code(&k);
            let kp = &k[1..];
            let pc = corner_code(kp);
            let c = &f.levels[pc];
            labels[code] = match k[0] {
                0 => f.objects.clone(),
                1 => c.morphisms.iter().map(|m| m.name.clone()).collect(),
                _ => pairs[pc]
                    .iter()
                    .map(|&(a, b)| format!("({};{})", c.morphisms[a].name, c.morphisms[b].name))
                    .collect(),
            };
            match k[0] {
                0 => degens[0][code].push(c.identity.clone()),
                1 => {
                    faces[0][code].push(c.morphisms.iter().map(|m| m.tgt).collect());
                    faces[0][code].push(c.morphisms.iter().map(|m| m.src).collect());
                    degens[0][code].push(
                        (0..c.morphisms.len()).map(|m| pair_ix[pc][&(c.identity[c.morphisms[m].src], m)]).collect(),
                    );
                    degens[0][code].push(
                        (0..c.morphisms.len()).map(|m| pair_ix[pc][&(m, c.identity[c.morphisms[m].tgt])]).collect(),
                    );
                }
                _ => {
                    faces[0][code].push(pairs[pc].iter().map(|&(_, b)| b).collect());
                    faces[0][code].push(pairs[pc].iter().map(|&(a, b)| c.compose(b, a).expect("composable")).collect());
                    faces[0][code].push(pairs[pc].iter().map(|&(a, _)| a).collect());
                }
            }
            for d in 0..n {
                for (fam, out, delta) in
                    [(&f.faces[d][pc], &mut faces[d + 1][code], -1i32), (&f.degens[d][pc], &mut degens[d + 1][code], 1)]
                {
                    for fm in fam.iter() {
                        let mut tk = kp.to_vec();
                        tk[d] = (tk[d] as i32 + delta) as u8;
                        let tc = corner_code(&tk);
                        out.push(match k[0] {
                            0 => (0..no).collect(),
                            1 => fm.mor.clone(),
                            _ => pairs[pc].iter().map(|&(a, b)| pair_ix[tc][&(fm.mor[a], fm.mor[b])]).collect(),
                        });
                    }
                }
            }
        }
        let x = NFoldCat::from_tables(n + 1, labels, faces, degens)?;
        TrackCatN::from_nfold(f.objects.clone(), x)
    }

    /// Multinerve in `Cat_O`, assembled hom-object by hom-object.
    pub fn nerve_nn(&self) -> Result<InternalForm> {
        let no = self.objects.len();
        let n = self.n;
        let homs: BTreeMap<(usize, usize), NFoldCat> = (0..no)
            .flat_map(|a| (0..no).map(move |b| (a, b)))
            .map(|(a, b)| self.hom(a, b).map(|h| ((a, b), h)))
            .collect::<Result<_>>()?;
        let nc = 3usize.pow(n as u32);
        let mut levels = Vec::with_capacity(nc);
        // offsets of each hom block inside the level's morphism list
        let mut offsets: Vec<BTreeMap<(usize, usize), usize>> = Vec::with_capacity(nc);
        for kp in all_corners(n) {
            let mut off = BTreeMap::new();
            let mut morphisms = Vec::new();
            for (&(a, b), h) in &homs {
                off.insert((a, b), morphisms.len());
                let names = h.labels(&kp);
                morphisms.extend(names.iter().map(|s| Morphism { name: s.clone(), src: a, tgt: b }));
            }
            let names = unique_names(&morphisms.iter().map(|m| m.name.clone()).collect::<Vec<_>>());
            for (m, s) in morphisms.iter_mut().zip(names) {
                m.name = s;
            }
            let k0 = prefixed(0, &kp);
            let k2 = prefixed(2, &kp);
            let glob: Vec<usize> = {
                // global indices of hom-block elements, in block order
                let mut v = Vec::new();
                for &(a, b) in homs.keys() {
                    for l in 0..homs[&(a, b)].size(&kp) {
                        v.push(self.cell_index(&kp, a, b, l).expect("cell"));
                    }
                }
                v
            };
            let mut local_of = vec![0usize; glob.len()];
            for (i, &g) in glob.iter().enumerate() {
                local_of[g] = i;
            }
            let identity = (0..no).map(|a| local_of[self.x.degen(0, 0, &k0, a)]).collect();
            let table = (0..self.x.size(&k2))
                .map(|p| {
                    (
                        local_of[self.x.face(0, 0, &k2, p)],
                        local_of[self.x.face(0, 2, &k2, p)],
                        local_of[self.x.face(0, 1, &k2, p)],
                    )
                })
                .collect();
            levels.push(FinCat::new(self.objects.clone(), morphisms, identity, table)?);
            offsets.push(off);
        }
        let mut faces = vec![vec![Vec::new(); nc]; n];
        let mut degens = vec![vec![Vec::new(); nc]; n];
        for kp in all_corners(n) {
            let code = corner_code(&kp);
            for d in 0..n {
                for (is_face, out) in [(true, &mut faces[d][code]), (false, &mut degens[d][code])] {
                    let range = if is_face { kp[d] >= 1 } else { kp[d] <= 1 };
                    if !range {
                        continue;
                    }
                    let mut tk = kp.clone();
                    tk[d] = if is_face { tk[d] - 1 } else { tk[d] + 1 };
                    let tc = corner_code(&tk);
                    for i in 0..=kp[d] as usize {
                        let mut mor = Vec::new();
                        for (&(a, b), h) in &homs {
                            for l in 0..h.size(&kp) {
                                let img = if is_face { h.face(d, i, &kp, l) } else { h.degen(d, i, &kp, l) };
                                mor.push(offsets[tc][&(a, b)] + img);
                            }
                        }
                        out.push(FunctorMap { obj: (0..no).collect(), mor });
                    }
                }
            }
        }
        Ok(InternalForm { n, objects: self.objects.clone(), levels, faces, degens })
    }

    /// The diagonal simplicial object in `Cat_O`, materialized through simplicial degree 2.
    pub fn diag_d(&self) -> Result<SOCat> {
        let n = self.n;
        let x = &self.x;
        let levels: Vec<FinCat> = (0..=2u8).map(|j| self.level_category(&vec![j; n])).collect();
        let mut faces = vec![Vec::new(); 3];
        let mut degens = vec![Vec::new(); 3];
        let no = self.objects.len();
        for j in 0..=2u8 {
            let sz = x.size(&prefixed(1, &vec![j; n]));
            if j >= 1 {
                for i in 0..=j as usize {
                    let mor = (0..sz)
                        .map(|e| {
                            let mut k = prefixed(1, &vec![j; n]);
                            let mut e = e;
                            for d in 1..=n {
                                e = x.face(d, i, &k, e);
                                k[d] -= 1;
                            }
                            e
                        })
                        .collect();
                    faces[j as usize].push(FunctorMap { obj: (0..no).collect(), mor });
                }
            }
            if j <= 1 {
                for i in 0..=j as usize {
                    let mor = (0..sz)
                        .map(|e| {
                            let mut k = prefixed(1, &vec![j; n]);
                            let mut e = e;
                            for d in 1..=n {
                                e = x.degen(d, i, &k, e);
                                k[d] += 1;
                            }
                            e
                        })
                        .collect();
                    degens[j as usize].push(FunctorMap { obj: (0..no).collect(), mor });
                }
            }
        }
        let s = SOCat { objects: self.objects.clone(), levels, faces, degens };
        s.check()?;
        Ok(s)
    }

    /// The sub-track category on the selected elements (closed under all structure maps),
    /// with its inclusion.
    pub fn restrict(&self, keep: &[Vec<bool>]) -> Result<(TrackCatN, TrackMap)> {
        let sub = TrackCatN::from_nfold(self.objects.clone(), self.x.restrict(keep)?)?;
        let maps = keep.iter().map(|k| k.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect();
        let f = TrackMap { map: NFoldMap { maps } };
        f.check(&sub, self)?;
        Ok((sub, f))
    }

    /// Iterated hom-wise truncation down to a 1-track category.
    pub fn p1_truncate(&self) -> Result<TrackCatN> {
        let mut x = self.x.clone();
        while x.dim() > 2 {
            x = x.truncate_p()?.0;
        }
        TrackCatN::from_nfold(self.objects.clone(), x)
    }

    /// The homotopy category.
    pub fn p0_truncate(&self) -> Result<FinCat> {
        let mut x = self.x.clone();
        while x.dim() > 1 {
            x = x.truncate_p()?.0;
        }
        let c = x.to_fincat()?;
        FinCat::new(self.objects.clone(), c.morphisms.clone(), c.identity.clone(), c.table())
    }
}

impl PartialEq for TrackCatN {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.to_internal() == other.to_internal()
    }
}

/// A map of track categories over the same object set, given levelwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackMap {
    pub map: NFoldMap,
}

impl TrackMap {
    pub fn check(&self, x: &TrackCatN, y: &TrackCatN) -> Result<()> {
        if x.objects.len() != y.objects.len() {
            return invalid("track maps are identity on objects");
        }
        self.map.check(&x.x, &y.x)?;
        for kp in all_corners(x.n) {
            if self.map.at(&prefixed(0, &kp)).iter().enumerate().any(|(i, &j)| i != j) {
                return invalid("track map moves objects");
            }
        }
        Ok(())
    }

    /// `p₁` applied to a map.
    pub fn p1(&self, x: &TrackCatN, y: &TrackCatN) -> Result<(TrackCatN, TrackCatN, TrackMap)> {
        self.check(x, y)?;
        let (mut px, mut py, mut pf) = (x.x.clone(), y.x.clone(), self.map.clone());
        while px.dim() > 2 {
            let (a, b, f) = truncate_nfold_map(&pf, &px, &py)?;
            px = a;
            py = b;
            pf = f;
        }
        Ok((
            TrackCatN::from_nfold(x.objects.clone(), px)?,
            TrackCatN::from_nfold(y.objects.clone(), py)?,
            TrackMap { map: pf },
        ))
    }
}

fn unique_names(ls: &[String]) -> Vec<String> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for l in ls {
        *count.entry(l).or_default() += 1;
    }
    ls.iter().enumerate().map(|(i, l)| if count[l.as_str()] > 1 { format!("{l}#{i}") } else { l.clone() }).collect()
}

/// n-fold groupoid internal to `Cat_O`: one category per corner, identity-on-objects structure functors.
#[derive(Debug, Clone, PartialEq)]
pub struct InternalForm {
    pub n: usize,
    pub objects: Vec<String>,
    pub levels: Vec<FinCat>,
    pub faces: Vec<Vec<Vec<FunctorMap>>>,
    pub degens: Vec<Vec<Vec<FunctorMap>>>,
}

impl InternalForm {
    pub fn check(&self) -> Result<()> {
        let nc = 3usize.pow(self.n as u32);
        if self.levels.len() != nc || self.faces.len() != self.n || self.degens.len() != self.n {
            return invalid("internal form does not cover every corner");
        }
        for (code, c) in self.levels.iter().enumerate() {
            if c.objects.len() != self.objects.len() {
                return invalid(format!("level {code} has a different object set"));
            }
        }
        for d in 0..self.n {
            for kp in all_corners(self.n) {
                let code = corner_code(&kp);
                for (fam, delta) in [(&self.faces[d][code], -1i32), (&self.degens[d][code], 1)] {
                    let mut tk = kp.clone();
                    for fm in fam {
                        tk[d] = (kp[d] as i32 + delta) as u8;
                        if fm.obj.iter().enumerate().any(|(i, &j)| i != j) {
                            return invalid(format!("structure functor in direction {d} at {kp:?} moves objects"));
                        }
                        fm.check(&self.levels[code], &self.levels[corner_code(&tk)])?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A simplicial object in `Cat_O` through degree 2.
#[derive(Debug, Clone, PartialEq)]
pub struct SOCat {
    pub objects: Vec<String>,
    pub levels: Vec<FinCat>,
    pub faces: Vec<Vec<FunctorMap>>,
    pub degens: Vec<Vec<FunctorMap>>,
}

impl SOCat {
    pub fn check(&self) -> Result<()> {
        for (j, c) in self.levels.iter().enumerate() {
            if c.objects != self.objects {
                return invalid(format!("level {j} has a different object set"));
            }
            for f in &self.faces[j] {
                f.check(c, &self.levels[j - 1])?;
            }
            for s in &self.degens[j] {
                s.check(c, &self.levels[j + 1])?;
            }
        }
        // d_i d_j = d_{j-1} d_i and d_i s_j identities through degree 2
        let m = |f: &FunctorMap, x: usize| f.mor[x];
        for e in 0..self.levels[2].morphisms.len() {
            for j in 1..=2 {
                for i in 0..j {
                    if m(&self.faces[1][i], m(&self.faces[2][j], e))
                        != m(&self.faces[1][j - 1], m(&self.faces[2][i], e))
                    {
                        return invalid("diagonal faces violate the simplicial identities");
                    }
                }
            }
        }
        for e in 0..self.levels[1].morphisms.len() {
            for j in 0..=1 {
                let s = m(&self.degens[1][j], e);
                if m(&self.faces[2][j], s) != e || m(&self.faces[2][j + 1], s) != e {
                    return invalid("diagonal degeneracies violate the simplicial identities");
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_homs_refused() {
        assert!(TrackCatN::from_enriched(vec!["a".into()], BTreeMap::new(), vec![0], |_, _, _, _, _, _| 0).is_err());
    }

    #[test]
    fn internal_form_moving_objects_refused() {
        let mut homs = BTreeMap::new();
        homs.insert((0, 0), crate::multifold::nerve_of(&FinCat::discrete(&["1"])));
        homs.insert((1, 1), crate::multifold::nerve_of(&FinCat::discrete(&["1"])));
        homs.insert((0, 1), crate::multifold::nerve_of(&FinCat::discrete(&[])));
        homs.insert((1, 0), crate::multifold::nerve_of(&FinCat::discrete(&[])));
        let t = TrackCatN::from_enriched(vec!["a".into(), "b".into()], homs, vec![0, 0], |_, _, _, _, _, _| 0).unwrap();
        let mut f = t.to_internal();
        f.faces[0][corner_code(&[1])][0].obj = vec![1, 0];
        assert!(TrackCatN::from_internal(&f).is_err());
    }
}
