//! Fattening adjunctions and the comonad resolution of a track category.
//!
//! Cells of `K^{j}X` (j ≥ 1) at a hom-corner `k'` are words of letters `(m, c)`, where
//! `m` is a top-corner cell of `K^{j-1}X` and `c` picks, in each groupoid direction, a
//! string of `k'_i + 1` vertices of the box `{0,1}`. Top-corner cells of every level are
//! interned; their total weight is bounded by `L`.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;

use crate::error::{invalid, Error, Result};
use crate::fincat::{EqRelGroupoid, FinCat};
use crate::multifold::{all_corners, corner_code, is_homotopically_discrete, is_weakly_globular, NFoldCat, NFoldMap};
use crate::trackcat::TrackCatN;

/// Split epimorphism of finite sets `q: Z₀ → π₀` with section `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    pub z0: Vec<String>,
    pub pi0: Vec<String>,
    pub q: Vec<usize>,
    pub t: Vec<usize>,
}

impl SplitPair {
    pub fn new(z0: Vec<String>, pi0: Vec<String>, q: Vec<usize>, t: Vec<usize>) -> Result<Self> {
        if q.len() != z0.len()
            || t.len() != pi0.len()
            || q.iter().any(|&x| x >= pi0.len())
            || t.iter().any(|&x| x >= z0.len())
        {
            return invalid("split pair maps have the wrong shape");
        }
        if (0..pi0.len()).any(|p| q[t[p]] != p) {
            return invalid("q∘t is not the identity");
        }
        Ok(SplitPair { z0, pi0, q, t })
    }

    /// The kernel-pair equivalence relation of `q`.
    pub fn fattening(&self) -> EqRelGroupoid {
        let mut rel = Vec::new();
        for x in 0..self.z0.len() {
            for y in 0..self.z0.len() {
                if self.q[x] == self.q[y] {
                    rel.push((x, y));
                }
            }
        }
        EqRelGroupoid::new(self.z0.clone(), rel).expect("kernel pairs are equivalence relations")
    }
}

fn bits_keys(len: usize) -> Vec<Vec<u8>> {
    (0..1usize << len).map(|m| (0..len).map(|i| ((m >> i) & 1) as u8).collect()).collect()
}

/// Evaluates an arrow `e` (in direction `dir`, at corner `k` with `k[dir] = 1`) on a string of
/// box vertices of length 1, 2 or 3. Returns the element and its corner.
pub fn eval_box_dir(
    x: &NFoldCat,
    dir: usize,
    k: &[u8],
    e: usize,
    bits: &[u8],
    inverse: &dyn Fn(usize, &[u8], usize) -> usize,
) -> (usize, Vec<u8>) {
    let mut k0 = k.to_vec();
    k0[dir] = 0;
    let edge = |a: u8, b: u8| -> usize {
        match (a, b) {
            (0, 1) => e,
            (1, 0) => inverse(dir, k, e),
            (0, 0) => x.degen(dir, 0, &k0, x.face(dir, 1, k, e)),
            _ => x.degen(dir, 0, &k0, x.face(dir, 0, k, e)),
        }
    };
    match bits.len() {
        1 => (x.face(dir, if bits[0] == 0 { 1 } else { 0 }, k, e), k0),
        2 => (edge(bits[0], bits[1]), k.to_vec()),
        _ => {
            let mut k2 = k.to_vec();
            k2[dir] = 2;
            let lift = x
                .segal_lift(dir, &k2, edge(bits[0], bits[1]), edge(bits[1], bits[2]))
                .expect("consecutive box edges compose");
            (lift, k2)
        }
    }
}

/// `ℓX`: a new last direction in which `X_k × {0,1}^{j+1}` is the kernel pair of the fold map.
pub fn ell(x: &NFoldCat) -> Result<NFoldCat> {
    let ev = is_weakly_globular(x);
    if !ev.ok {
        return Err(Error::Precondition(format!(
            "ℓ needs a weakly globular input: {}",
            ev.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let m = x.dim();
    NFoldCat::build(
        m + 1,
        |k| {
            let mut v = Vec::new();
            for e in 0..x.size(&k[..m]) {
                for b in bits_keys(k[m] as usize + 1) {
                    v.push((e, b));
                }
            }
            v
        },
        |d, i, k, (e, b)| {
            if d == m {
                let mut b = b.clone();
                b.remove(i);
                (*e, b)
            } else {
                (x.face(d, i, &k[..m], *e), b.clone())
            }
        },
        |d, i, k, (e, b)| {
            if d == m {
                let mut b = b.clone();
                b.insert(i, b[i]);
                (*e, b)
            } else {
                (x.degen(d, i, &k[..m], *e), b.clone())
            }
        },
        |k, (e, b)| {
            let bs: String = b.iter().map(|v| if *v == 0 { 's' } else { 't' }).collect();
            format!("{}@{bs}", x.labels(&k[..m])[*e])
        },
    )
}

/// Arrow part in the last direction.
pub fn u(x: &NFoldCat) -> Result<NFoldCat> {
    if x.dim() == 0 {
        return Err(Error::Precondition("a set has no arrow part".into()));
    }
    Ok(x.slice(x.dim() - 1, 1))
}

/// Position of `(e, bits)` in the sorted key order used by `ell`.
fn ell_index(e: usize, bits: &[u8]) -> usize {
    let mut all = bits_keys(bits.len());
    all.sort();
    e * all.len() + all.iter().position(|b| b.as_slice() == bits).expect("bit string")
}

/// Unit `η_Y: Y → uℓY`, `y ↦ (y, (0,1))`.
pub fn ell_unit(y: &NFoldCat) -> NFoldMap {
    let maps = all_corners(y.dim()).map(|k| (0..y.size(&k)).map(|e| ell_index(e, &[0, 1])).collect()).collect();
    NFoldMap { maps }
}

fn inverse_search(x: &NFoldCat) -> impl Fn(usize, &[u8], usize) -> usize + '_ {
    move |d, k, e| x.inverse(d, k, e).expect("groupoid direction")
}

/// Counit `ε_X: ℓuX → X`, evaluating boxes in the last direction.
pub fn ell_counit(x: &NFoldCat) -> NFoldMap {
    let m = x.dim() - 1;
    let inv = inverse_search(x);
    let maps = all_corners(m + 1)
        .map(|k| {
            let mut k1 = k.clone();
            k1[m] = 1;
            let mut out = Vec::new();
            let mut keys = Vec::new();
            for e in 0..x.size(&k1) {
                for b in bits_keys(k[m] as usize + 1) {
                    keys.push((e, b));
                }
            }
            keys.sort();
            for (e, b) in keys {
                out.push(eval_box_dir(x, m, &k1, e, &b, &inv).0);
            }
            out
        })
        .collect();
    NFoldMap { maps }
}

/// Both triangle identities of `ℓ ⊣ u` at `Y` (for `ℓ`) and at `X` (for `u`).
pub fn triangle_audit(y: &NFoldCat, x: &NFoldCat) -> Result<()> {
    // εℓ ∘ ℓη = id on ℓY
    let ly = ell(y)?;
    let uly = u(&ly)?;
    let eta = ell_unit(y);
    eta.check(y, &uly)?;
    let luly = ell(&uly)?;
    let m = y.dim();
    let l_eta = NFoldMap {
        maps: all_corners(m + 1)
            .map(|k| {
                let mut keys = Vec::new();
                for e in 0..y.size(&k[..m]) {
                    for b in bits_keys(k[m] as usize + 1) {
                        keys.push((e, b));
                    }
                }
                keys.sort();
                keys.iter().map(|(e, b)| ell_index(eta.at(&k[..m])[*e], b)).collect()
            })
            .collect(),
    };
    l_eta.check(&ly, &luly)?;
    let eps_ly = ell_counit(&ly);
    eps_ly.check(&luly, &ly)?;
    if l_eta.compose(&eps_ly) != NFoldMap::identity(&ly) {
        return invalid("εℓ ∘ ℓη is not the identity");
    }
    // uε ∘ ηu = id on uX
    let ux = u(x)?;
    let lux = ell(&ux)?;
    let eps = ell_counit(x);
    eps.check(&lux, x)?;
    let eta_u = ell_unit(&ux);
    let u_eps = NFoldMap {
        maps: all_corners(x.dim() - 1)
            .map(|k| {
                let mut kk = k.clone();
                kk.push(1);
                eps.at(&kk).to_vec()
            })
            .collect(),
    };
    if eta_u.compose(&u_eps) != NFoldMap::identity(&ux) {
        return invalid("uε ∘ ηu is not the identity");
    }
    Ok(())
}

/// Structural equality, ignoring labels.
pub fn same_structure(a: &NFoldCat, b: &NFoldCat) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let n = a.dim();
    for k in all_corners(n) {
        if a.size(&k) != b.size(&k) {
            return false;
        }
        for d in 0..n {
            if k[d] >= 1 {
                for i in 0..=k[d] as usize {
                    if a.face_map(d, i, &k) != b.face_map(d, i, &k) {
                        return false;
                    }
                }
            }
            if k[d] <= 1 {
                for i in 0..=k[d] as usize {
                    if a.degen_map(d, i, &k) != b.degen_map(d, i, &k) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------------------
// Fattening internal to Cat_O: reduced two-coloured words and their kernel pairs.

type CWord = Vec<(usize, u8)>;

/// Cells of an (m+1)-fold object whose first direction is a category on a fixed object set.
struct CatOView<'a> {
    y: &'a NFoldCat,
}

impl CatOView<'_> {
    fn k1(&self, kp: &[u8]) -> Vec<u8> {
        let mut k = vec![1u8];
        k.extend_from_slice(kp);
        k
    }
    fn src(&self, kp: &[u8], e: usize) -> usize {
        self.y.face(0, 1, &self.k1(kp), e)
    }
    fn tgt(&self, kp: &[u8], e: usize) -> usize {
        self.y.face(0, 0, &self.k1(kp), e)
    }
    fn id(&self, kp: &[u8], a: usize) -> usize {
        let mut k0 = vec![0u8];
        k0.extend_from_slice(kp);
        self.y.degen(0, 0, &k0, a)
    }
    fn is_id(&self, kp: &[u8], e: usize) -> bool {
        self.id(kp, self.src(kp, e)) == e
    }
    fn comp(&self, kp: &[u8], f: usize, g: usize) -> usize {
        self.y.compose(0, &self.k1(kp), f, g).expect("composable")
    }
    /// Drops identities and merges equal-coloured neighbours.
    fn reduce(&self, kp: &[u8], w: &[(usize, u8)]) -> CWord {
        let mut out: CWord = Vec::new();
        for &(e, c) in w {
            if self.is_id(kp, e) {
                continue;
            }
            match out.last().copied() {
                Some((p, pc)) if pc == c => {
                    out.pop();
                    let h = self.comp(kp, p, e);
                    if !self.is_id(kp, h) {
                        out.push((h, c));
                    }
                }
                _ => out.push((e, c)),
            }
        }
        out
    }
    fn eval(&self, kp: &[u8], a: usize, w: &[(usize, u8)]) -> usize {
        w.iter().fold(self.id(kp, a), |acc, &(e, _)| self.comp(kp, acc, e))
    }
    /// Reduced words from `a`, up to `cap` letters; errors if longer ones exist.
    fn reduced_words(&self, kp: &[u8], objects: usize, cap: usize) -> Result<Vec<(usize, usize, CWord)>> {
        let k1 = self.k1(kp);
        let nonid: Vec<usize> = (0..self.y.size(&k1)).filter(|&e| !self.is_id(kp, e)).collect();
        let mut out: Vec<(usize, usize, CWord)> = (0..objects).map(|a| (a, a, Vec::new())).collect();
        let mut frontier: Vec<(usize, usize, CWord)> = Vec::new();
        for &e in &nonid {
            for c in 0..2u8 {
                frontier.push((self.src(kp, e), self.tgt(kp, e), vec![(e, c)]));
            }
        }
        let mut len = 1;
        while !frontier.is_empty() {
            if len > cap {
                let (_, _, w) = &frontier[0];
                return Err(Error::Truncation {
                    bound: cap,
                    path: w
                        .iter()
                        .map(|(e, c)| format!("{}#{c}", self.y.labels(&k1)[*e]))
                        .collect::<Vec<_>>()
                        .join(" "),
                });
            }
            let mut next = Vec::new();
            for (a, b, w) in &frontier {
                let last = w.last().unwrap().1;
                for &e in &nonid {
                    if self.src(kp, e) == *b {
                        let mut w2 = w.clone();
                        w2.push((e, 1 - last));
                        next.push((*a, self.tgt(kp, e), w2));
                    }
                }
            }
            out.append(&mut frontier);
            frontier = next;
            len += 1;
        }
        Ok(out)
    }
}

/// Fattens an (m+1)-fold object over `Cat_O` in a new last direction, using free products in
/// `Cat_O`. Refuses inputs whose reduced words exceed `cap` letters.
pub fn ell_internal(y: &NFoldCat, objects: usize, cap: usize) -> Result<NFoldCat> {
    let v = CatOView { y };
    let m = y.dim() - 1;
    let mut words: HashMap<Vec<u8>, Vec<(usize, usize, CWord)>> = HashMap::new();
    for kp in all_corners(m) {
        words.insert(kp.clone(), v.reduced_words(&kp, objects, cap)?);
    }
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
    enum Key {
        Obj(usize),
        Tup(usize, usize, Vec<CWord>),
        Pair(usize, usize, usize, Vec<CWord>, Vec<CWord>),
    }
    let tuples = |kp: &[u8], j: usize| -> Vec<(usize, usize, Vec<CWord>)> {
        let mut groups: BTreeMap<(usize, usize, usize), Vec<CWord>> = BTreeMap::new();
        for (a, b, w) in &words[kp] {
            groups.entry((*a, *b, v.eval(kp, *a, w))).or_default().push(w.clone());
        }
        let mut out = Vec::new();
        for ((a, b, _), ws) in groups {
            let mut acc: Vec<Vec<CWord>> = vec![vec![]];
            for _ in 0..=j {
                acc = acc
                    .into_iter()
                    .flat_map(|t| {
                        ws.iter().map(move |w| {
                            let mut t2 = t.clone();
                            t2.push(w.clone());
                            t2
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(|t| (a, b, t)));
        }
        out
    };
    let mapw = |kp: &[u8], d: usize, i: usize, face: bool, w: &CWord| -> CWord {
        let k1 = v.k1(kp);
        let mapped: CWord =
            w.iter().map(|&(e, c)| (if face { y.face(d, i, &k1, e) } else { y.degen(d, i, &k1, e) }, c)).collect();
        let mut tk = kp.to_vec();
        if face {
            tk[d - 1] -= 1;
        } else {
            tk[d - 1] += 1;
        }
        v.reduce(&tk, &mapped)
    };
    let concat = |kp: &[u8], f: &CWord, g: &CWord| -> CWord {
        let mut w = f.clone();
        w.extend_from_slice(g);
        v.reduce(kp, &w)
    };
    let x = NFoldCat::build(
        m + 2,
        |k| {
            let kp = &k[1..=m];
            let j = k[m + 1] as usize;
            match k[0] {
                0 => (0..objects).map(Key::Obj).collect(),
                1 => tuples(kp, j).into_iter().map(|(a, b, t)| Key::Tup(a, b, t)).collect(),
                _ => {
                    let ts = tuples(kp, j);
                    let mut out = Vec::new();
                    for (a, b, f) in &ts {
                        for (b2, c, g) in &ts {
                            if b == b2 {
                                out.push(Key::Pair(*a, *b, *c, f.clone(), g.clone()));
                            }
                        }
                    }
                    out
                }
            }
        },
        |d, i, k, key| {
            let kp = &k[1..=m];
            if d == 0 {
                return match (key, i) {
                    (Key::Tup(_, b, _), 0) => Key::Obj(*b),
                    (Key::Tup(a, _, _), _) => Key::Obj(*a),
                    (Key::Pair(_, b, c, _, g), 0) => Key::Tup(*b, *c, g.clone()),
                    (Key::Pair(a, _, c, f, g), 1) => {
                        Key::Tup(*a, *c, f.iter().zip(g).map(|(x, y)| concat(kp, x, y)).collect())
                    }
                    (Key::Pair(a, b, _, f, _), _) => Key::Tup(*a, *b, f.clone()),
                    (Key::Obj(_), _) => unreachable!(),
                };
            }
            let last = d == m + 1;
            let tmap = |t: &Vec<CWord>| -> Vec<CWord> {
                if last {
                    let mut t = t.clone();
                    t.remove(i);
                    t
                } else {
                    t.iter().map(|w| mapw(kp, d, i, true, w)).collect()
                }
            };
            match key {
                Key::Obj(a) => Key::Obj(*a),
                Key::Tup(a, b, t) => Key::Tup(*a, *b, tmap(t)),
                Key::Pair(a, b, c, f, g) => Key::Pair(*a, *b, *c, tmap(f), tmap(g)),
            }
        },
        |d, i, k, key| {
            let kp = &k[1..=m];
            let j = k[m + 1] as usize;
            if d == 0 {
                return match (key, i) {
                    (Key::Obj(a), _) => Key::Tup(*a, *a, vec![Vec::new(); j + 1]),
                    (Key::Tup(a, b, t), 0) => Key::Pair(*a, *a, *b, vec![Vec::new(); j + 1], t.clone()),
                    (Key::Tup(a, b, t), _) => Key::Pair(*a, *b, *b, t.clone(), vec![Vec::new(); j + 1]),
                    (Key::Pair(..), _) => unreachable!(),
                };
            }
            let last = d == m + 1;
            let tmap = |t: &Vec<CWord>| -> Vec<CWord> {
                if last {
                    let mut t = t.clone();
                    t.insert(i, t[i].clone());
                    t
                } else {
                    t.iter().map(|w| mapw(kp, d, i, false, w)).collect()
                }
            };
            match key {
                Key::Obj(a) => Key::Obj(*a),
                Key::Tup(a, b, t) => Key::Tup(*a, *b, tmap(t)),
                Key::Pair(a, b, c, f, g) => Key::Pair(*a, *b, *c, tmap(f), tmap(g)),
            }
        },
        |k, key| {
            let kp = &k[1..=m];
            let k1 = v.k1(kp);
            let wname = |w: &CWord| -> String {
                if w.is_empty() {
                    "1".into()
                } else {
                    w.iter().map(|(e, c)| format!("{}#{c}", y.labels(&k1)[*e])).collect::<Vec<_>>().join(".")
                }
            };
            match key {
                Key::Obj(a) => y.labels(&{
                    let mut k0 = vec![0u8];
                    k0.extend_from_slice(kp);
                    k0
                })[*a]
                    .clone(),
                Key::Tup(_, _, t) => format!("<{}>", t.iter().map(wname).collect::<Vec<_>>().join(",")),
                Key::Pair(_, _, _, f, g) => format!(
                    "(<{}>;<{}>)",
                    f.iter().map(wname).collect::<Vec<_>>().join(","),
                    g.iter().map(wname).collect::<Vec<_>>().join(",")
                ),
            }
        },
    )?;
    Ok(x)
}

/// `𝓛_n(A) = L_[0]⋯L_[n-1] A` for a plain category `A`.
pub fn ell_n_of_category(a: &FinCat, n: usize, cap: usize) -> Result<TrackCatN> {
    let mut y = crate::multifold::nerve_of(a);
    for _ in 0..n {
        y = ell_internal(&y, a.objects.len(), cap)?;
    }
    TrackCatN::from_nfold(a.objects.clone(), y)
}

/// Hom-objects of `𝓛_n(A)` are homotopically discrete and `p₀𝓛_n(A) ≅ A` over the objects.
pub fn ell_n_audit(a: &FinCat, n: usize, cap: usize) -> Result<()> {
    let l = ell_n_of_category(a, n, cap)?;
    for x in 0..a.objects.len() {
        for y in 0..a.objects.len() {
            if let Err(r) = is_homotopically_discrete(&l.hom(x, y)?) {
                return invalid(format!("hom({x},{y}) is not homotopically discrete: {r}"));
            }
        }
    }
    let p0 = l.p0_truncate()?;
    if !crate::fincat::isomorphic_over_objects(&p0, a) {
        return invalid("p₀ of the fattening differs from the input category");
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------
// The resolution tower.

/// Packed box strings: direction `i` occupies bits `3i..3i+3`.
pub type Colour = u16;

pub fn colour_bit(c: Colour, dir: usize, t: usize) -> u8 {
    ((c >> (3 * dir + t)) & 1) as u8
}

fn colour_set(c: Colour, dir: usize, t: usize, v: u8) -> Colour {
    let mask = 1u16 << (3 * dir + t);
    if v == 1 {
        c | mask
    } else {
        c & !mask
    }
}

/// All strings at a corner.
pub fn colours(kp: &[u8]) -> Vec<Colour> {
    let mut out: Vec<Colour> = vec![0];
    for (dir, &kd) in kp.iter().enumerate() {
        let len = kd as usize + 1;
        let mut next = Vec::with_capacity(out.len() << len);
        for c in out {
            for m in 0..(1u16 << len) {
                next.push(c | (m << (3 * dir)));
            }
        }
        out = next;
    }
    out
}

/// The identity box `((0,1), …, (0,1))` at the top corner.
pub fn top_identity(n: usize) -> Colour {
    (0..n).fold(0, |c, d| colour_set(c, d, 1, 1))
}

/// `(c_g ∘ c)_i[t] = c_g,i[c_i[t]]`.
pub fn compose_colour(cg: Colour, c: Colour, kp: &[u8]) -> Colour {
    let mut out = 0;
    for (dir, &kd) in kp.iter().enumerate() {
        for t in 0..=kd as usize {
            out = colour_set(out, dir, t, colour_bit(cg, dir, colour_bit(c, dir, t) as usize));
        }
    }
    out
}

/// Sign of a top-corner string: `(0,1) ↦ 1`, `(1,0) ↦ -1`, degenerate ↦ 0, multiplied over directions.
pub fn colour_sign(c: Colour, n: usize) -> i64 {
    let mut s = 1;
    for d in 0..n {
        match (colour_bit(c, d, 0), colour_bit(c, d, 1)) {
            (0, 1) => {}
            (1, 0) => s = -s,
            _ => return 0,
        }
    }
    s
}

fn colour_face(c: Colour, kp: &[u8], dir: usize, i: usize) -> Colour {
    let mut out = c & !(0b111 << (3 * dir));
    let mut t2 = 0;
    for t in 0..=kp[dir] as usize {
        if t != i {
            out = colour_set(out, dir, t2, colour_bit(c, dir, t));
            t2 += 1;
        }
    }
    out
}

fn colour_degen(c: Colour, kp: &[u8], dir: usize, i: usize) -> Colour {
    let mut out = c & !(0b111 << (3 * dir));
    let mut t2 = 0;
    for t in 0..=kp[dir] as usize {
        out = colour_set(out, dir, t2, colour_bit(c, dir, t));
        t2 += 1;
        if t == i {
            out = colour_set(out, dir, t2, colour_bit(c, dir, t));
            t2 += 1;
        }
    }
    out
}

pub fn colour_name(c: Colour, kp: &[u8]) -> String {
    kp.iter()
        .enumerate()
        .map(|(d, &kd)| (0..=kd as usize).map(|t| if colour_bit(c, d, t) == 0 { 's' } else { 't' }).collect::<String>())
        .collect::<Vec<_>>()
        .join("|")
}

/// A morphism of `K^j X` at some hom-corner: a composable word of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub src: u32,
    pub tgt: u32,
    pub letters: Vec<(u32, Colour)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    /// An element of `X_{1,k'}`.
    Base(usize),
    Word(Word),
}

#[derive(Debug, Clone, Default)]
struct Level {
    src: Vec<u32>,
    tgt: Vec<u32>,
    weight: Vec<u32>,
    words: Vec<Word>,
    index: HashMap<Word, u32>,
}

/// The bounded resolution `K^{s+1}X`, `s ≤ depth`, with its faces and degeneracies.
#[derive(Debug, Clone)]
pub struct Tower {
    x: TrackCatN,
    n: usize,
    bound: usize,
    /// `levels[j]` holds the top-corner cells of `K^j X`.
    levels: Vec<Level>,
    inverses: HashMap<(usize, usize), Vec<usize>>,
    enumerated: usize,
}

impl Tower {
    pub fn new(x: &TrackCatN, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Precondition("length bound must be at least 1".into()));
        }
        let n = x.dim();
        let xf = x.nfold();
        let mut inverses = HashMap::new();
        for d in 1..=n {
            for k in all_corners(n + 1).filter(|k| k[d] == 1 && k[0] >= 1) {
                let inv: Vec<usize> = (0..xf.size(&k))
                    .map(|e| {
                        xf.inverse(d, &k, e).ok_or_else(|| Error::Validation("hom-object is not a groupoid".into()))
                    })
                    .collect::<Result<_>>()?;
                inverses.insert((d, corner_code(&k)), inv);
            }
        }
        let top = vec![1u8; n + 1];
        let mut l0 = Level::default();
        for e in 0..xf.size(&top) {
            l0.src.push(xf.face(0, 1, &top, e) as u32);
            l0.tgt.push(xf.face(0, 0, &top, e) as u32);
            l0.weight.push(1);
        }
        Ok(Tower { x: x.clone(), n, bound, levels: vec![l0], inverses, enumerated: 0 })
    }

    pub fn base(&self) -> &TrackCatN {
        &self.x
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> Vec<u8> {
        vec![1; self.n]
    }

    /// Number of interned top cells of `K^j X`.
    pub fn level_size(&self, j: usize) -> usize {
        self.levels.get(j).map_or(0, |l| l.src.len())
    }

    pub fn endpoints(&self, j: usize, m: u32) -> (u32, u32) {
        (self.levels[j].src[m as usize], self.levels[j].tgt[m as usize])
    }

    pub fn weight(&self, j: usize, m: u32) -> u32 {
        self.levels[j].weight[m as usize]
    }

    pub fn word(&self, j: usize, m: u32) -> &Word {
        &self.levels[j].words[m as usize]
    }

    pub fn top_cell(&self, j: usize, m: u32) -> Cell {
        if j == 0 {
            Cell::Base(m as usize)
        } else {
            Cell::Word(self.levels[j].words[m as usize].clone())
        }
    }

    fn ensure_level(&mut self, j: usize) {
        while self.levels.len() <= j {
            self.levels.push(Level::default());
        }
    }

    fn word_weight(&self, j: usize, w: &Word) -> u32 {
        w.letters.iter().map(|&(m, _)| self.levels[j - 1].weight[m as usize].max(1)).sum()
    }

    /// Interns a top-corner cell of `K^j X`.
    pub fn intern(&mut self, j: usize, c: &Cell) -> Result<u32> {
        match c {
            Cell::Base(e) => {
                if j != 0 {
                    return Err(Error::Precondition("base cell at a positive level".into()));
                }
                Ok(*e as u32)
            }
            Cell::Word(w) => {
                if j == 0 {
                    return Err(Error::Precondition("word at level 0".into()));
                }
                self.ensure_level(j);
                if let Some(&i) = self.levels[j].index.get(w) {
                    return Ok(i);
                }
                let wt = self.word_weight(j, w);
                if wt as usize > self.bound {
                    return Err(Error::Truncation { bound: self.bound, path: self.describe(j, w) });
                }
                let l = &mut self.levels[j];
                let id = l.src.len() as u32;
                l.src.push(w.src);
                l.tgt.push(w.tgt);
                l.weight.push(wt);
                l.words.push(w.clone());
                l.index.insert(w.clone(), id);
                Ok(id)
            }
        }
    }

    pub fn lookup(&self, j: usize, w: &Word) -> Option<u32> {
        self.levels.get(j).and_then(|l| l.index.get(w).copied())
    }

    /// Human-readable path of a word.
    pub fn describe(&self, j: usize, w: &Word) -> String {
        if w.letters.is_empty() {
            return format!("id[{}]", self.x.objects()[w.src as usize]);
        }
        let top = self.top();
        w.letters
            .iter()
            .map(|&(m, c)| {
                let inner = if j == 1 {
                    self.x.nfold().labels(&{
                        let mut k = vec![1u8];
                        k.extend_from_slice(&top);
                        k
                    })[m as usize]
                        .clone()
                } else {
                    format!("[{}]", self.describe(j - 1, &self.levels[j - 1].words[m as usize]))
                };
                format!("{inner}@{}", colour_name(c, &top))
            })
            .collect::<Vec<_>>()
            .join(" . ")
    }

    /// Enumerates all top cells of `K^j X` of weight at most the bound, for `j ≤ upto`.
    pub fn enumerate(&mut self, upto: usize) -> Result<()> {
        for j in (self.enumerated + 1)..=upto {
            if self.levels.get(j).is_some_and(|l| !l.words.is_empty()) {
                // lazily interned cells would break the canonical order
                return Err(Error::Precondition("enumeration must precede lazy interning".into()));
            }
            self.ensure_level(j);
            let no = self.x.objects().len();
            let prev = &self.levels[j - 1];
            let cs = colours(&self.top());
            let mut out_letters: Vec<Vec<(u32, Colour, u32, u32)>> = vec![Vec::new(); no];
            for m in 0..prev.src.len() {
                let w = prev.weight[m].max(1);
                if w as usize > self.bound {
                    continue;
                }
                for &c in &cs {
                    out_letters[prev.src[m] as usize].push((m as u32, c, prev.tgt[m], w));
                }
            }
            for l in &mut out_letters {
                l.sort_by_key(|x| x.3);
            }
            let mut words: Vec<Word> = Vec::new();
            for a in 0..no as u32 {
                let mut stack: Vec<(Word, u32)> = vec![(Word { src: a, tgt: a, letters: vec![] }, 0)];
                while let Some((w, wt)) = stack.pop() {
                    for &(m, c, t, lw) in &out_letters[w.tgt as usize] {
                        if (wt + lw) as usize > self.bound {
                            break;
                        }
                        let mut w2 = w.clone();
                        w2.letters.push((m, c));
                        w2.tgt = t;
                        stack.push((w2, wt + lw));
                    }
                    words.push(w);
                }
            }
            words.sort();
            for w in words {
                self.intern(j, &Cell::Word(w))?;
            }
            self.enumerated = j;
        }
        Ok(())
    }

    pub fn enumerated_depth(&self) -> usize {
        self.enumerated
    }

    fn xk1(&self, kp: &[u8]) -> Vec<u8> {
        let mut k = vec![1u8];
        k.extend_from_slice(kp);
        k
    }

    fn x_identity(&self, kp: &[u8], a: usize) -> usize {
        let mut k0 = vec![0u8];
        k0.extend_from_slice(kp);
        self.x.nfold().degen(0, 0, &k0, a)
    }

    /// `N(e)(c)` for a top cell `e` of `X`.
    pub fn eval_base(&self, e: usize, c: Colour, kp: &[u8]) -> usize {
        let xf = self.x.nfold();
        let mut k = vec![1u8; self.n + 1];
        let mut e = e;
        for d in 0..self.n {
            let bits: Vec<u8> = (0..=kp[d] as usize).map(|t| colour_bit(c, d, t)).collect();
            let inv = |dir: usize, kk: &[u8], x: usize| self.inverses[&(dir, corner_code(kk))][x];
            let (e2, k2) = eval_box_dir(xf, d + 1, &k, e, &bits, &inv);
            e = e2;
            k = k2;
        }
        e
    }

    /// `N(m)(c)` for a top cell `m` of `K^j X`, as a cell at corner `k'`.
    pub fn eval_box(&self, j: usize, m: u32, c: Colour, kp: &[u8]) -> Cell {
        if j == 0 {
            return Cell::Base(self.eval_base(m as usize, c, kp));
        }
        let w = &self.levels[j].words[m as usize];
        Cell::Word(Word {
            src: w.src,
            tgt: w.tgt,
            letters: w.letters.iter().map(|&(g, cg)| (g, compose_colour(cg, c, kp))).collect(),
        })
    }

    fn concat(&self, j: usize, kp: &[u8], src: u32, parts: Vec<Cell>) -> Cell {
        if j == 0 {
            let xf = self.x.nfold();
            let k1 = self.xk1(kp);
            let mut acc = self.x_identity(kp, src as usize);
            for p in parts {
                let Cell::Base(e) = p else { unreachable!() };
                acc = xf.compose(0, &k1, acc, e).expect("composable cells");
            }
            Cell::Base(acc)
        } else {
            let mut w = Word { src, tgt: src, letters: vec![] };
            for p in parts {
                let Cell::Word(q) = p else { unreachable!() };
                w.tgt = q.tgt;
                w.letters.extend(q.letters);
            }
            Cell::Word(w)
        }
    }

    /// `∂_i: K^j X → K^{j-1} X` on a cell at corner `k'` (`0 ≤ i < j`).
    pub fn face(&mut self, i: usize, j: usize, kp: &[u8], cell: &Cell) -> Result<Cell> {
        let Cell::Word(w) = cell else {
            return Err(Error::Precondition("faces start at level 1".into()));
        };
        if i >= j {
            return Err(Error::Precondition(format!("face {i} does not exist at level {j}")));
        }
        if i == 0 {
            let parts = w.letters.iter().map(|&(m, c)| self.eval_box(j - 1, m, c, kp)).collect();
            return Ok(self.concat(j - 1, kp, w.src, parts));
        }
        let top = self.top();
        let mut letters = Vec::with_capacity(w.letters.len());
        for &(m, c) in &w.letters {
            let inner = self.top_cell(j - 1, m);
            let f = self.face(i - 1, j - 1, &top, &inner)?;
            letters.push((self.intern(j - 2, &f)?, c));
        }
        Ok(Cell::Word(Word { src: w.src, tgt: w.tgt, letters }))
    }

    /// `σ^i: K^j X → K^{j+1} X` on a cell at corner `k'` (`0 ≤ i < j`).
    pub fn degen(&mut self, i: usize, j: usize, _kp: &[u8], cell: &Cell) -> Result<Cell> {
        let Cell::Word(w) = cell else {
            return Err(Error::Precondition("degeneracies start at level 1".into()));
        };
        if i >= j {
            return Err(Error::Precondition(format!("degeneracy {i} does not exist at level {j}")));
        }
        let top = self.top();
        let cstar = top_identity(self.n);
        let mut letters = Vec::with_capacity(w.letters.len());
        for &(m, c) in &w.letters {
            let inner = if i == 0 {
                let (s, t) = self.endpoints(j - 1, m);
                Cell::Word(Word { src: s, tgt: t, letters: vec![(m, cstar)] })
            } else {
                let cell = self.top_cell(j - 1, m);
                self.degen(i - 1, j - 1, &top, &cell)?
            };
            letters.push((self.intern(j, &inner)?, c));
        }
        Ok(Cell::Word(Word { src: w.src, tgt: w.tgt, letters }))
    }

    /// The level-`j` generator `(m, c)` as a one-letter word at corner `k'`.
    pub fn generator(&self, j: usize, m: u32, c: Colour) -> Cell {
        let (s, t) = self.endpoints(j - 1, m);
        Cell::Word(Word { src: s, tgt: t, letters: vec![(m, c)] })
    }

    /// Structure map of `K^j X` in hom-direction `dir`.
    pub fn hom_face(&self, dir: usize, i: usize, kp: &[u8], cell: &Cell) -> Cell {
        match cell {
            Cell::Base(e) => Cell::Base(self.x.nfold().face(dir + 1, i, &self.xk1(kp), *e)),
            Cell::Word(w) => Cell::Word(Word {
                src: w.src,
                tgt: w.tgt,
                letters: w.letters.iter().map(|&(m, c)| (m, colour_face(c, kp, dir, i))).collect(),
            }),
        }
    }

    pub fn hom_degen(&self, dir: usize, i: usize, kp: &[u8], cell: &Cell) -> Cell {
        match cell {
            Cell::Base(e) => Cell::Base(self.x.nfold().degen(dir + 1, i, &self.xk1(kp), *e)),
            Cell::Word(w) => Cell::Word(Word {
                src: w.src,
                tgt: w.tgt,
                letters: w.letters.iter().map(|&(m, c)| (m, colour_degen(c, kp, dir, i))).collect(),
            }),
        }
    }
}

/// Counts of `law` failures with a sample witness.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checked: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(what());
            }
        }
    }
}

/// `(εK)δ = id = (Kε)δ` and `(δK)δ = (Kδ)δ` on all generators of `KX` at every corner and on
/// every composable pair of top-corner generators.
pub fn comonad_law_audit(tower: &mut Tower) -> Result<AuditReport> {
    let n = tower.dim();
    let mut rep = AuditReport::default();
    let mut cells: Vec<(Vec<u8>, Cell)> = Vec::new();
    for kp in all_corners(n) {
        for m in 0..tower.level_size(0) as u32 {
            for c in colours(&kp) {
                cells.push((kp.clone(), tower.generator(1, m, c)));
            }
        }
    }
    let top = tower.top();
    let cs = colours(&top);
    let gens = tower.level_size(0) as u32;
    if tower.bound() >= 2 {
        for m1 in 0..gens {
            for m2 in 0..gens {
                let ((s1, t1), (s2, t2)) = (tower.endpoints(0, m1), tower.endpoints(0, m2));
                if t1 != s2 {
                    continue;
                }
                for &c1 in &cs {
                    for &c2 in &cs {
                        let w = Word { src: s1, tgt: t2, letters: vec![(m1, c1), (m2, c2)] };
                        cells.push((top.clone(), Cell::Word(w)));
                    }
                }
            }
        }
    }
    for (kp, x) in cells {
        let d = tower.degen(0, 1, &kp, &x)?;
        let e0 = tower.face(0, 2, &kp, &d)?;
        let e1 = tower.face(1, 2, &kp, &d)?;
        rep.record(e0 == x, || format!("(εK)δ moves {x:?} at {kp:?}"));
        rep.record(e1 == x, || format!("(Kε)δ moves {x:?} at {kp:?}"));
        let l = tower.degen(0, 2, &kp, &d)?;
        let r = tower.degen(1, 2, &kp, &d)?;
        rep.record(l == r, || format!("coassociativity fails on {x:?} at {kp:?}"));
    }
    Ok(rep)
}

/// All simplicial identities among faces and degeneracies of the resolution, on every
/// generator of levels `s ≤ depth` at every corner, plus the augmentation identity.
pub fn simplicial_identity_audit(tower: &mut Tower, depth: usize, corners: &[Vec<u8>]) -> Result<AuditReport> {
    tower.enumerate(depth)?;
    let mut rep = AuditReport::default();
    for s in 0..=depth {
        let j = s + 1;
        let gens = tower.level_size(s) as u32;
        for kp in corners {
            let cs = colours(kp);
            for m in 0..gens {
                for &c in &cs {
                    let x = tower.generator(j, m, c);
                    simplicial_at(tower, s, kp, &x, &mut rep)?;
                }
            }
        }
    }
    Ok(rep)
}

fn simplicial_at(t: &mut Tower, s: usize, kp: &[u8], x: &Cell, rep: &mut AuditReport) -> Result<()> {
    let j = s + 1;
    // faces: ∂_i ∂_j = ∂_{j-1} ∂_i for i < j; at s = 1 this includes ε∂₀ = ε∂₁
    if s >= 1 {
        for b in 1..=s {
            for a in 0..b {
                let l = {
                    let f = t.face(b, j, kp, x)?;
                    t.face(a, j - 1, kp, &f)?
                };
                let r = {
                    let f = t.face(a, j, kp, x)?;
                    t.face(b - 1, j - 1, kp, &f)?
                };
                rep.record(l == r, || format!("∂{a}∂{b} != ∂{}∂{a} at level {s}", b - 1));
            }
        }
    }
    // ∂_a σ_b
    for b in 0..=s {
        let sx = t.degen(b, j, kp, x)?;
        for a in 0..=s + 1 {
            let l = t.face(a, j + 1, kp, &sx)?;
            let r = if a == b || a == b + 1 {
                x.clone()
            } else if a < b {
                let f = t.face(a, j, kp, x)?;
                t.degen(b - 1, j - 1, kp, &f)?
            } else {
                let f = t.face(a - 1, j, kp, x)?;
                t.degen(b, j - 1, kp, &f)?
            };
            rep.record(l == r, || format!("∂{a}σ{b} identity fails at level {s}"));
        }
        // σ_a σ_b = σ_{b+1} σ_a for a ≤ b
        for a in 0..=b {
            let l = {
                let y = t.degen(b, j, kp, x)?;
                t.degen(a, j + 1, kp, &y)?
            };
            let r = {
                let y = t.degen(a, j, kp, x)?;
                t.degen(b + 1, j + 1, kp, &y)?
            };
            rep.record(l == r, || format!("σ{a}σ{b} != σ{}σ{a} at level {s}", b + 1));
        }
    }
    Ok(())
}

/// Each top cell of `K^j X` has exactly one factorization into generators under the level
/// composition, identities none; the counts match an independent weighted path count.
pub fn freeness_audit(tower: &mut Tower, j: usize) -> Result<AuditReport> {
    tower.enumerate(j)?;
    let mut rep = AuditReport::default();
    let size = tower.level_size(j);
    let mut ways = vec![0usize; size];
    let top = tower.top();
    let cs = colours(&top);
    let gens: Vec<(u32, Colour)> = (0..tower.level_size(j - 1) as u32)
        .filter(|&m| tower.weight(j - 1, m).max(1) as usize <= tower.bound())
        .flat_map(|m| cs.iter().map(move |&c| (m, c)))
        .collect();
    let mut by_src: HashMap<u32, Vec<(u32, Colour)>> = HashMap::new();
    for &(m, c) in &gens {
        by_src.entry(tower.endpoints(j - 1, m).0).or_default().push((m, c));
    }
    let gen_weight = |t: &Tower, m: u32| t.weight(j - 1, m).max(1) as usize;
    for v in by_src.values_mut() {
        v.sort_by_key(|&(m, _)| gen_weight(tower, m));
    }
    let mut order: Vec<u32> = (0..size as u32).collect();
    order.sort_by_key(|&w| tower.word(j, w).letters.len());
    for &f in &order {
        let fw = tower.word(j, f).clone();
        let base = if fw.letters.is_empty() { 1 } else { ways[f as usize] };
        // concatenation appends letters, so products over the bound are never interned
        let room = tower.bound().saturating_sub(tower.weight(j, f) as usize);
        for &(m, c) in by_src.get(&fw.tgt).map(|v| v.as_slice()).unwrap_or(&[]) {
            if gen_weight(tower, m) > room {
                break;
            }
            let g = tower.generator(j, m, c);
            let h = tower.concat(j, &top, fw.src, vec![Cell::Word(fw.clone()), g]);
            let Cell::Word(hw) = h else { unreachable!() };
            if let Some(hi) = tower.lookup(j, &hw) {
                ways[hi as usize] += base;
            }
        }
    }
    for w in 0..size as u32 {
        let empty = tower.word(j, w).letters.is_empty();
        let expect = if empty { 0 } else { 1 };
        rep.record(ways[w as usize] == expect, || {
            format!("cell {w} of level {j} has {} factorizations", ways[w as usize])
        });
    }
    let oracle = weighted_path_count(tower, j);
    rep.record(oracle == size, || format!("level {j} has {size} cells, path count gives {oracle}"));
    Ok(rep)
}

fn weighted_path_count(t: &Tower, j: usize) -> usize {
    let no = t.base().objects().len();
    let bound = t.bound();
    let ncol = colours(&t.top()).len();
    // count[a][w] = number of words from any source ending at object a with weight w
    let mut out_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); no];
    for m in 0..t.level_size(j - 1) as u32 {
        let (s, tg) = t.endpoints(j - 1, m);
        let w = t.weight(j - 1, m).max(1) as usize;
        if w <= bound {
            for _ in 0..ncol {
                out_edges[s as usize].push((tg as usize, w));
            }
        }
    }
    let mut total = 0;
    for a in 0..no {
        let mut count = vec![vec![0usize; bound + 1]; no];
        count[a][0] = 1;
        for wsum in 0..=bound {
            for o in 0..no {
                let c = count[o][wsum];
                if c == 0 {
                    continue;
                }
                for &(t2, w) in &out_edges[o] {
                    if wsum + w <= bound {
                        count[t2][wsum + w] += c;
                    }
                }
            }
        }
        total += count.iter().map(|r| r.iter().sum::<usize>()).sum::<usize>();
    }
    total
}

/// Low-degree asphericity of the augmented simplicial set of top cells from `a` to `b`:
/// the augmentation is onto, constant on components of the 1-skeleton and injective on them.
/// With `corrupt`, `∂₀` of the first level-2 cell is redirected to a level-1 cell with a
/// different augmentation.
pub fn aspherical_spot_check(tower: &mut Tower, a: u32, b: u32, corrupt: bool) -> Result<bool> {
    if tower.enumerated_depth() < 2 {
        tower.enumerate(2)?;
    }
    let top = tower.top();
    let in_ab = |t: &Tower, j: usize, m: u32| t.endpoints(j, m) == (a, b);
    let e0: Vec<u32> = (0..tower.level_size(0) as u32).filter(|&m| in_ab(tower, 0, m)).collect();
    let e1: Vec<u32> = (0..tower.level_size(1) as u32).filter(|&m| in_ab(tower, 1, m)).collect();
    let e2: Vec<u32> = (0..tower.level_size(2) as u32).filter(|&m| in_ab(tower, 2, m)).collect();
    let pos1: HashMap<u32, usize> = e1.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut aug = Vec::with_capacity(e1.len());
    for &m in &e1 {
        let c = tower.top_cell(1, m);
        let f = tower.face(0, 1, &top, &c)?;
        aug.push(tower.intern(0, &f)?);
    }
    // onto
    for &m in &e0 {
        if !aug.contains(&m) {
            return Ok(false);
        }
    }
    let mut uf = UnionFind::<usize>::new(e1.len());
    for (idx, &w) in e2.iter().enumerate() {
        let c = tower.top_cell(2, w);
        let f0 = tower.face(0, 2, &top, &c)?;
        let f1 = tower.face(1, 2, &top, &c)?;
        let mut i0 = tower.intern(1, &f0)?;
        let i1 = tower.intern(1, &f1)?;
        if corrupt && idx == 0 {
            let target = aug[pos1[&i1]];
            if let Some(&other) = e1.iter().find(|&&m| aug[pos1[&m]] != target) {
                i0 = other;
            }
        }
        match (pos1.get(&i0), pos1.get(&i1)) {
            (Some(&p), Some(&q)) => {
                uf.union(p, q);
            }
            _ => return Ok(false),
        }
    }
    let mut class_aug: HashMap<usize, u32> = HashMap::new();
    let mut aug_class: HashMap<u32, usize> = HashMap::new();
    for (p, &v) in aug.iter().enumerate() {
        let r = uf.find(p);
        if *class_aug.entry(r).or_insert(v) != v {
            return Ok(false);
        }
        if *aug_class.entry(v).or_insert(r) != r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bounded hom-object `hom(a,b)` of `KX`: words of at most `bound` letters at every corner.
pub fn k_hom(tower: &Tower, a: u32, b: u32) -> Result<NFoldCat> {
    let n = tower.dim();
    let bound = tower.bound();
    let gens: Vec<u32> = (0..tower.level_size(0) as u32).collect();
    let words_at = |kp: &[u8]| -> Vec<Vec<(u32, Colour)>> {
        let cs = colours(kp);
        let mut out = Vec::new();
        let mut stack: Vec<(u32, Vec<(u32, Colour)>)> = vec![(a, vec![])];
        while let Some((o, w)) = stack.pop() {
            if o == b {
                out.push(w.clone());
            }
            if w.len() < bound {
                for &m in &gens {
                    if tower.endpoints(0, m).0 == o {
                        for &c in &cs {
                            let mut w2 = w.clone();
                            w2.push((m, c));
                            stack.push((tower.endpoints(0, m).1, w2));
                        }
                    }
                }
            }
        }
        out
    };
    NFoldCat::build(
        n,
        |kp| words_at(kp),
        |d, i, kp, w| w.iter().map(|&(m, c)| (m, colour_face(c, kp, d, i))).collect(),
        |d, i, kp, w| w.iter().map(|&(m, c)| (m, colour_degen(c, kp, d, i))).collect(),
        |kp, w| {
            if w.is_empty() {
                "1".into()
            } else {
                let xl = tower.base().nfold().labels(&vec![1u8; n + 1]);
                w.iter()
                    .map(|&(m, c)| format!("{}@{}", xl[m as usize], colour_name(c, kp)))
                    .collect::<Vec<_>>()
                    .join(".")
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_pair_requires_section() {
        assert!(SplitPair::new(vec!["x".into(), "y".into()], vec!["p".into()], vec![0, 0], vec![0]).is_ok());
        assert!(SplitPair::new(vec!["x".into()], vec!["p".into(), "q".into()], vec![0], vec![0, 0]).is_err());
    }

    #[test]
    fn colour_composition_with_identity_box() {
        let kp = [2u8, 0];
        for c in colours(&kp) {
            assert_eq!(compose_colour(top_identity(2), c, &kp), c);
        }
    }

    #[test]
    fn colour_signs() {
        assert_eq!(colour_sign(top_identity(1), 1), 1);
        assert_eq!(colour_sign(0b001, 1), -1);
        assert_eq!(colour_sign(0b011, 1), 0);
        assert_eq!(colour_sign(0b001_001, 2), 1);
    }

    #[test]
    fn zero_bound_refused() {
        let t = crate::fixtures::t1();
        assert!(Tower::new(&t, 0).is_err());
    }

    #[test]
    fn ell_of_loop_refused_when_words_unbounded() {
        // an idempotent loop generates arbitrarily long reduced words
        let a = crate::fixtures::loop_idempotent();
        let err = ell_n_of_category(&a, 1, 6).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
