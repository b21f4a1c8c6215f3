//! n-fold categories in multinerve corner form: every multi-index in `{0,1,2}^n`
//! is stored, higher levels are determined by strict Segal pullbacks.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use petgraph::unionfind::UnionFind;

use crate::error::{invalid, Error, Result};
use crate::fincat::{classes_from_union_find, FinCat, Morphism};

pub type Corner = Vec<u8>;

pub fn corner_code(k: &[u8]) -> usize {
    k.iter().fold(0, |acc, &x| acc * 3 + x as usize)
}

pub fn corner_of(code: usize, n: usize) -> Corner {
    let mut k = vec![0u8; n];
    let mut c = code;
    for i in (0..n).rev() {
        k[i] = (c % 3) as u8;
        c /= 3;
    }
    k
}

pub fn all_corners(n: usize) -> impl Iterator<Item = Corner> {
    (0..3usize.pow(n as u32)).map(move |c| corner_of(c, n))
}

fn with(k: &[u8], dir: usize, v: u8) -> Corner {
    let mut k2 = k.to_vec();
    k2[dir] = v;
    k2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NFoldCat {
    n: usize,
    labels: Vec<Vec<String>>,
    /// `faces[dir][code][i]`, present when the corner has `k[dir] >= 1`.
    faces: Vec<Vec<Vec<Vec<usize>>>>,
    /// `degens[dir][code][i]`, present when the corner has `k[dir] <= 1`.
    degens: Vec<Vec<Vec<Vec<usize>>>>,
    segal: Vec<Vec<HashMap<(usize, usize), usize>>>,
}

/// Witness of a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refusal {
    pub level: usize,
    pub corner: Corner,
    pub reason: String,
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "level {} corner {:?}: {}", self.level, self.corner, self.reason)
    }
}

impl NFoldCat {
    /// Assembles and validates an n-fold category from raw tables.
    pub fn from_tables(
        n: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<Vec<usize>>>>,
        degens: Vec<Vec<Vec<Vec<usize>>>>,
    ) -> Result<Self> {
        let nc = 3usize.pow(n as u32);
        if labels.len() != nc || faces.len() != n || degens.len() != n {
            return invalid(format!("an {n}-fold corner needs {nc} sets and {n} face/degeneracy families"));
        }
        for dir in 0..n {
            if faces[dir].len() != nc || degens[dir].len() != nc {
                return invalid(format!("direction {dir} tables must cover all {nc} corners"));
            }
            for code in 0..nc {
                let k = corner_of(code, n);
                let nf = if k[dir] >= 1 { k[dir] as usize + 1 } else { 0 };
                let nd = if k[dir] <= 1 { k[dir] as usize + 1 } else { 0 };
                if faces[dir][code].len() != nf || degens[dir][code].len() != nd {
                    return invalid(format!("wrong number of maps in direction {dir} at corner {k:?}"));
                }
                let tf = corner_code(&with(&k, dir, k[dir].wrapping_sub(1)));
                for m in &faces[dir][code] {
                    if m.len() != labels[code].len() || m.iter().any(|&x| x >= labels[tf].len()) {
                        return invalid(format!(
                            "face in direction {dir} at {k:?} is not a map between the corner sets"
                        ));
                    }
                }
                for m in &degens[dir][code] {
                    let td = corner_code(&with(&k, dir, k[dir] + 1));
                    if m.len() != labels[code].len() || m.iter().any(|&x| x >= labels[td].len()) {
                        return invalid(format!(
                            "degeneracy in direction {dir} at {k:?} is not a map between the corner sets"
                        ));
                    }
                }
            }
        }
        let mut x = NFoldCat { n, labels, faces, degens, segal: Vec::new() };
        x.check_simplicial()?;
        x.build_segal()?;
        x.check_associativity()?;
        Ok(x)
    }

    /// Builds from element keys. Each corner's keys are sorted to fix a canonical order.
    pub fn build<K: Ord + Clone + Hash>(
        n: usize,
        elems: impl Fn(&[u8]) -> Vec<K>,
        face: impl Fn(usize, usize, &[u8], &K) -> K,
        degen: impl Fn(usize, usize, &[u8], &K) -> K,
        label: impl Fn(&[u8], &K) -> String,
    ) -> Result<Self> {
        let nc = 3usize.pow(n as u32);
        let mut keys: Vec<Vec<K>> = Vec::with_capacity(nc);
        let mut index: Vec<HashMap<K, usize>> = Vec::with_capacity(nc);
        for code in 0..nc {
            let mut ks = elems(&corner_of(code, n));
            ks.sort();
            ks.dedup();
            index.push(ks.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect());
            keys.push(ks);
        }
        let mut faces = vec![vec![Vec::new(); nc]; n];
        let mut degens = vec![vec![Vec::new(); nc]; n];
        for dir in 0..n {
            for code in 0..nc {
                let k = corner_of(code, n);
                if k[dir] >= 1 {
                    let t = corner_code(&with(&k, dir, k[dir] - 1));
                    for i in 0..=k[dir] as usize {
                        let mut m = Vec::with_capacity(keys[code].len());
                        for x in &keys[code] {
                            let y = face(dir, i, &k, x);
                            match index[t].get(&y) {
                                Some(&j) => m.push(j),
                                None => {
                                    return invalid(format!(
                                        "face d{i} in direction {dir} of `{}` at {k:?} leaves the corner",
                                        label(&k, x)
                                    ))
                                }
                            }
                        }
                        faces[dir][code].push(m);
                    }
                }
                if k[dir] <= 1 {
                    let t = corner_code(&with(&k, dir, k[dir] + 1));
                    for i in 0..=k[dir] as usize {
                        let mut m = Vec::with_capacity(keys[code].len());
                        for x in &keys[code] {
                            let y = degen(dir, i, &k, x);
                            match index[t].get(&y) {
                                Some(&j) => m.push(j),
                                None => {
                                    return invalid(format!(
                                        "degeneracy s{i} in direction {dir} of `{}` at {k:?} leaves the corner",
                                        label(&k, x)
                                    ))
                                }
                            }
                        }
                        degens[dir][code].push(m);
                    }
                }
            }
        }
        let labels = keys
            .iter()
            .enumerate()
            .map(|(code, ks)| ks.iter().map(|x| label(&corner_of(code, n), x)).collect())
            .collect();
        NFoldCat::from_tables(n, labels, faces, degens)
    }

    /// A set regarded as a 0-fold category.
    pub fn set(labels: Vec<String>) -> Self {
        NFoldCat { n: 0, labels: vec![labels], faces: vec![], degens: vec![], segal: vec![] }
    }

    /// Same structure with relabelled elements.
    pub fn map_labels(&self, f: impl Fn(&str) -> String) -> NFoldCat {
        let mut y = self.clone();
        for l in y.labels.iter_mut().flatten() {
            *l = f(l);
        }
        y
    }

    /// Replaces the label of one element; structure maps are untouched.
    pub fn with_label(&self, k: &[u8], x: usize, label: String) -> NFoldCat {
        let mut y = self.clone();
        y.labels[corner_code(k)][x] = label;
        y
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self, k: &[u8]) -> usize {
        self.labels[corner_code(k)].len()
    }

    pub fn labels(&self, k: &[u8]) -> &[String] {
        &self.labels[corner_code(k)]
    }

    pub fn face_map(&self, dir: usize, i: usize, k: &[u8]) -> &[usize] {
        &self.faces[dir][corner_code(k)][i]
    }

    pub fn degen_map(&self, dir: usize, i: usize, k: &[u8]) -> &[usize] {
        &self.degens[dir][corner_code(k)][i]
    }

    pub fn face(&self, dir: usize, i: usize, k: &[u8], x: usize) -> usize {
        self.faces[dir][corner_code(k)][i][x]
    }

    pub fn degen(&self, dir: usize, i: usize, k: &[u8], x: usize) -> usize {
        self.degens[dir][corner_code(k)][i][x]
    }

    pub fn total_size(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    /// Element with `(d2, d0) = (f, g)` in direction `dir` at a corner with `k[dir] = 2`.
    pub fn segal_lift(&self, dir: usize, k2: &[u8], f: usize, g: usize) -> Option<usize> {
        self.segal[dir][corner_code(k2)].get(&(f, g)).copied()
    }

    /// `g∘f` in direction `dir`, where `k1[dir] = 1` and `f` comes first.
    pub fn compose(&self, dir: usize, k1: &[u8], f: usize, g: usize) -> Option<usize> {
        let k2 = with(k1, dir, 2);
        self.segal_lift(dir, &k2, f, g).map(|x| self.face(dir, 1, &k2, x))
    }

    pub fn identity(&self, dir: usize, k0: &[u8], x: usize) -> usize {
        self.degen(dir, 0, k0, x)
    }

    pub fn source(&self, dir: usize, k1: &[u8], f: usize) -> usize {
        self.face(dir, 1, k1, f)
    }

    pub fn target(&self, dir: usize, k1: &[u8], f: usize) -> usize {
        self.face(dir, 0, k1, f)
    }

    /// Inverse of `f` in direction `dir`, if any.
    pub fn inverse(&self, dir: usize, k1: &[u8], f: usize) -> Option<usize> {
        let k0 = with(k1, dir, 0);
        let (s, t) = (self.source(dir, k1, f), self.target(dir, k1, f));
        (0..self.size(k1)).find(|&g| {
            self.source(dir, k1, g) == t
                && self.target(dir, k1, g) == s
                && self.compose(dir, k1, f, g) == Some(self.identity(dir, &k0, s))
                && self.compose(dir, k1, g, f) == Some(self.identity(dir, &k0, t))
        })
    }

    fn check_simplicial(&self) -> Result<()> {
        let n = self.n;
        for k in all_corners(n) {
            for a in 0..n {
                // d_i d_j = d_{j-1} d_i, i < j, from level 2
                if k[a] == 2 {
                    for x in 0..self.size(&k) {
                        for j in 1..=2usize {
                            for i in 0..j {
                                let lhs = self.face(a, i, &with(&k, a, 1), self.face(a, j, &k, x));
                                let rhs = self.face(a, j - 1, &with(&k, a, 1), self.face(a, i, &k, x));
                                if lhs != rhs {
                                    return invalid(format!("d{i}d{j} != d{}d{i} in direction {a} at {k:?}", j - 1));
                                }
                            }
                        }
                    }
                }
                // face/degeneracy identities from levels 0 and 1
                if k[a] <= 1 {
                    let up = with(&k, a, k[a] + 1);
                    let m = k[a] as usize;
                    for x in 0..self.size(&k) {
                        for j in 0..=m {
                            let sx = self.degen(a, j, &k, x);
                            for i in 0..=m + 1 {
                                let lhs = self.face(a, i, &up, sx);
                                let rhs = if i == j || i == j + 1 {
                                    x
                                } else if i < j {
                                    self.degen(a, j - 1, &with(&k, a, k[a] - 1), self.face(a, i, &k, x))
                                } else {
                                    self.degen(a, j, &with(&k, a, k[a] - 1), self.face(a, i - 1, &k, x))
                                };
                                if lhs != rhs {
                                    return invalid(format!("d{i}s{j} identity fails in direction {a} at {k:?}"));
                                }
                            }
                        }
                    }
                }
                if k[a] == 0 {
                    for x in 0..self.size(&k) {
                        let l = self.degen(a, 0, &with(&k, a, 1), self.degen(a, 0, &k, x));
                        let r = self.degen(a, 1, &with(&k, a, 1), self.degen(a, 0, &k, x));
                        if l != r {
                            return invalid(format!("s0s0 != s1s0 in direction {a} at {k:?}"));
                        }
                    }
                }
                // maps in distinct directions commute
                for b in 0..n {
                    if b == a {
                        continue;
                    }
                    for x in 0..self.size(&k) {
                        if k[a] >= 1 && k[b] >= 1 {
                            for i in 0..=k[a] as usize {
                                for j in 0..=k[b] as usize {
                                    let l = self.face(b, j, &with(&k, a, k[a] - 1), self.face(a, i, &k, x));
                                    let r = self.face(a, i, &with(&k, b, k[b] - 1), self.face(b, j, &k, x));
                                    if l != r {
                                        return invalid(format!("faces in directions {a},{b} do not commute at {k:?}"));
                                    }
                                }
                            }
                        }
                        if k[a] >= 1 && k[b] <= 1 {
                            for i in 0..=k[a] as usize {
                                for j in 0..=k[b] as usize {
                                    let l = self.degen(b, j, &with(&k, a, k[a] - 1), self.face(a, i, &k, x));
                                    let r = self.face(a, i, &with(&k, b, k[b] + 1), self.degen(b, j, &k, x));
                                    if l != r {
                                        return invalid(format!(
                                            "face in direction {a} and degeneracy in {b} do not commute at {k:?}"
                                        ));
                                    }
                                }
                            }
                        }
                        if a < b && k[a] <= 1 && k[b] <= 1 {
                            for i in 0..=k[a] as usize {
                                for j in 0..=k[b] as usize {
                                    let l = self.degen(b, j, &with(&k, a, k[a] + 1), self.degen(a, i, &k, x));
                                    let r = self.degen(a, i, &with(&k, b, k[b] + 1), self.degen(b, j, &k, x));
                                    if l != r {
                                        return invalid(format!(
                                            "degeneracies in directions {a},{b} do not commute at {k:?}"
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn build_segal(&mut self) -> Result<()> {
        let n = self.n;
        let nc = 3usize.pow(n as u32);
        let mut segal = vec![vec![HashMap::new(); nc]; n];
        for dir in 0..n {
            for k in all_corners(n).filter(|k| k[dir] == 2) {
                let k1 = with(&k, dir, 1);
                let mut map = HashMap::with_capacity(self.size(&k));
                for x in 0..self.size(&k) {
                    let pair = (self.face(dir, 2, &k, x), self.face(dir, 0, &k, x));
                    if map.insert(pair, x).is_some() {
                        return invalid(format!("Segal map in direction {dir} at {k:?} is not injective"));
                    }
                }
                // count composable pairs
                let mut by_src: HashMap<usize, usize> = HashMap::new();
                for g in 0..self.size(&k1) {
                    *by_src.entry(self.face(dir, 1, &k1, g)).or_default() += 1;
                }
                let pairs: usize =
                    (0..self.size(&k1)).map(|f| by_src.get(&self.face(dir, 0, &k1, f)).copied().unwrap_or(0)).sum();
                if pairs != map.len() {
                    return invalid(format!(
                        "Segal map in direction {dir} at {k:?} is not onto the composable pairs ({} of {pairs})",
                        map.len()
                    ));
                }
                segal[dir][corner_code(&k)] = map;
            }
        }
        self.segal = segal;
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        for dir in 0..self.n {
            for k in all_corners(self.n).filter(|k| k[dir] == 1) {
                let sz = self.size(&k);
                let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
                for g in 0..sz {
                    out.entry(self.source(dir, &k, g)).or_default().push(g);
                }
                let empty = Vec::new();
                for f in 0..sz {
                    for &g in out.get(&self.target(dir, &k, f)).unwrap_or(&empty) {
                        let gf = self.compose(dir, &k, f, g).expect("segal pair");
                        for &h in out.get(&self.target(dir, &k, g)).unwrap_or(&empty) {
                            let hg = self.compose(dir, &k, g, h).expect("segal pair");
                            if self.compose(dir, &k, gf, h) != self.compose(dir, &k, f, hg) {
                                return invalid(format!("composition in direction {dir} is not associative at {k:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Permutes directions: new direction `j` is old direction `old_of_new[j]`.
    pub fn permute(&self, old_of_new: &[usize]) -> NFoldCat {
        let n = self.n;
        let nc = 3usize.pow(n as u32);
        let to_old = |knew: &[u8]| -> Corner {
            let mut kold = vec![0u8; n];
            for j in 0..n {
                kold[old_of_new[j]] = knew[j];
            }
            kold
        };
        let mut labels = Vec::with_capacity(nc);
        let mut faces = vec![vec![Vec::new(); nc]; n];
        let mut degens = vec![vec![Vec::new(); nc]; n];
        for code in 0..nc {
            let knew = corner_of(code, n);
            let kold = to_old(&knew);
            labels.push(self.labels[corner_code(&kold)].clone());
            for j in 0..n {
                let d = old_of_new[j];
                faces[j][code] = self.faces[d][corner_code(&kold)].clone();
                degens[j][code] = self.degens[d][corner_code(&kold)].clone();
            }
        }
        NFoldCat::from_tables(n, labels, faces, degens).expect("permutation preserves validity")
    }

    /// Index rotation bringing direction `r` (1-based) to the front.
    pub fn rotate(&self, r: usize) -> Result<NFoldCat> {
        if r < 1 || r > self.n {
            return Err(Error::Precondition(format!("rotation index {r} outside 1..={}", self.n)));
        }
        let mut old_of_new: Vec<usize> = Vec::with_capacity(self.n);
        old_of_new.push(r - 1);
        for j in 0..self.n {
            if j != r - 1 {
                old_of_new.push(j);
            }
        }
        Ok(self.permute(&old_of_new))
    }

    /// Fixes direction `dir` at level `v`, leaving an (n-1)-fold category.
    pub fn slice(&self, dir: usize, v: u8) -> NFoldCat {
        let n = self.n;
        let m = n - 1;
        let nc = 3usize.pow(m as u32);
        let full = |k: &[u8]| -> Corner {
            let mut f = k.to_vec();
            f.insert(dir, v);
            f
        };
        let old_dir = |j: usize| if j < dir { j } else { j + 1 };
        let mut labels = Vec::with_capacity(nc);
        let mut faces = vec![vec![Vec::new(); nc]; m];
        let mut degens = vec![vec![Vec::new(); nc]; m];
        for code in 0..nc {
            let k = corner_of(code, m);
            let fk = corner_code(&full(&k));
            labels.push(self.labels[fk].clone());
            for j in 0..m {
                faces[j][code] = self.faces[old_dir(j)][fk].clone();
                degens[j][code] = self.degens[old_dir(j)][fk].clone();
            }
        }
        NFoldCat::from_tables(m, labels, faces, degens).expect("slices of valid data are valid")
    }

    /// Restricts to the elements selected by `keep`; the selection must be closed under all maps.
    pub fn restrict(&self, keep: &[Vec<bool>]) -> Result<NFoldCat> {
        let n = self.n;
        let nc = 3usize.pow(n as u32);
        let mut new_ix: Vec<Vec<Option<usize>>> = Vec::with_capacity(nc);
        for code in 0..nc {
            let mut c = 0;
            new_ix.push(
                keep[code]
                    .iter()
                    .map(|&b| {
                        if b {
                            c += 1;
                            Some(c - 1)
                        } else {
                            None
                        }
                    })
                    .collect(),
            );
        }
        let mut labels = Vec::with_capacity(nc);
        let mut faces = vec![vec![Vec::new(); nc]; n];
        let mut degens = vec![vec![Vec::new(); nc]; n];
        for code in 0..nc {
            let k = corner_of(code, n);
            labels
                .push(self.labels[code].iter().zip(&keep[code]).filter(|(_, &b)| b).map(|(l, _)| l.clone()).collect());
            for dir in 0..n {
                for (fam, out, delta) in [
                    (&self.faces[dir][code], &mut faces[dir][code], -1i32),
                    (&self.degens[dir][code], &mut degens[dir][code], 1i32),
                ] {
                    if fam.is_empty() {
                        continue;
                    }
                    let t = corner_code(&with(&k, dir, (k[dir] as i32 + delta) as u8));
                    for m in fam {
                        let mut nm = Vec::new();
                        for (x, &y) in m.iter().enumerate() {
                            if keep[code][x] {
                                match new_ix[t][y] {
                                    Some(ny) => nm.push(ny),
                                    None => return invalid("restriction is not closed under the structure maps"),
                                }
                            }
                        }
                        out.push(nm);
                    }
                }
            }
        }
        NFoldCat::from_tables(n, labels, faces, degens)
    }

    /// The category `X_{k',•}` in the last direction: (objects, arrows, src, tgt).
    fn last_dir_category(&self, kp: &[u8]) -> (usize, Vec<(usize, usize)>) {
        let d = self.n - 1;
        let mut k1 = kp.to_vec();
        k1.push(1);
        let mut k0 = kp.to_vec();
        k0.push(0);
        let arrows = (0..self.size(&k1)).map(|f| (self.source(d, &k1, f), self.target(d, &k1, f))).collect();
        (self.size(&k0), arrows)
    }

    /// Iso classes of `X_{k',•}` (invertible arrows in the last direction).
    fn last_dir_classes(&self, kp: &[u8]) -> crate::fincat::IsoClasses {
        let d = self.n - 1;
        let mut k1 = kp.to_vec();
        k1.push(1);
        let (nobj, arrows) = self.last_dir_category(kp);
        let mut uf = UnionFind::<usize>::new(nobj);
        for (f, &(s, t)) in arrows.iter().enumerate() {
            if s != t && self.inverse(d, &k1, f).is_some() {
                uf.union(s, t);
            }
        }
        classes_from_union_find(&mut uf, nobj)
    }

    /// `p^(n-1)`: iso classes in the last direction, with the quotient maps on objects.
    pub fn truncate_p(&self) -> Result<(NFoldCat, Vec<Vec<usize>>)> {
        if self.n == 0 {
            return Err(Error::Precondition("a set has no truncation".into()));
        }
        let m = self.n - 1;
        let nc = 3usize.pow(m as u32);
        let classes: Vec<_> = (0..nc).map(|c| self.last_dir_classes(&corner_of(c, m))).collect();
        let mut labels = Vec::with_capacity(nc);
        let mut faces = vec![vec![Vec::new(); nc]; m];
        let mut degens = vec![vec![Vec::new(); nc]; m];
        for code in 0..nc {
            let kp = corner_of(code, m);
            let mut k0 = kp.clone();
            k0.push(0);
            labels.push(classes[code].reps.iter().map(|&r| format!("[{}]", self.labels(&k0)[r])).collect());
            for dir in 0..m {
                if kp[dir] >= 1 {
                    let t = corner_code(&with(&kp, dir, kp[dir] - 1));
                    for i in 0..=kp[dir] as usize {
                        faces[dir][code].push(
                            classes[code]
                                .reps
                                .iter()
                                .map(|&r| classes[t].class_of[self.face(dir, i, &k0, r)])
                                .collect(),
                        );
                    }
                }
                if kp[dir] <= 1 {
                    let t = corner_code(&with(&kp, dir, kp[dir] + 1));
                    for i in 0..=kp[dir] as usize {
                        degens[dir][code].push(
                            classes[code]
                                .reps
                                .iter()
                                .map(|&r| classes[t].class_of[self.degen(dir, i, &k0, r)])
                                .collect(),
                        );
                    }
                }
            }
        }
        let p = NFoldCat::from_tables(m, labels, faces, degens)
            .map_err(|e| Error::Validation(format!("truncation is not functorial: {e}")))?;
        Ok((p, classes.into_iter().map(|c| c.class_of).collect()))
    }

    /// The (n+1)-fold category constant in a new last direction.
    pub fn discrete_last(&self) -> NFoldCat {
        let n = self.n;
        NFoldCat::build(
            n + 1,
            |k| (0..self.size(&k[..n])).collect::<Vec<_>>(),
            |dir, i, k, &x| if dir == n { x } else { self.face(dir, i, &k[..n], x) },
            |dir, i, k, &x| if dir == n { x } else { self.degen(dir, i, &k[..n], x) },
            |k, &x| self.labels(&k[..n])[x].clone(),
        )
        .expect("constant extension of valid data")
    }

    /// True when every direction-`dir` arrow at every corner is invertible.
    pub fn is_groupoid_in(&self, dir: usize) -> std::result::Result<(), Refusal> {
        for k in all_corners(self.n).filter(|k| k[dir] == 1) {
            for f in 0..self.size(&k) {
                if self.inverse(dir, &k, f).is_none() {
                    return Err(Refusal {
                        level: self.n,
                        corner: k.clone(),
                        reason: format!("`{}` has no inverse in direction {dir}", self.labels(&k)[f]),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_nfold_groupoid(&self) -> std::result::Result<(), Refusal> {
        (0..self.n).try_for_each(|d| self.is_groupoid_in(d))
    }

    /// Checks that `X_{k',•}` is an equivalence relation for every corner with `fixed` coordinates.
    fn levelwise_eqrel(&self, filter: impl Fn(&[u8]) -> bool) -> std::result::Result<(), Refusal> {
        let m = self.n - 1;
        let d = m;
        for kp in all_corners(m).filter(|k| filter(k)) {
            let mut k1 = kp.clone();
            k1.push(1);
            let (_, arrows) = self.last_dir_category(&kp);
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            for (f, &(s, t)) in arrows.iter().enumerate() {
                if let Some(g) = seen.insert((s, t), f) {
                    return Err(Refusal {
                        level: self.n,
                        corner: kp.clone(),
                        reason: format!("parallel arrows `{}` and `{}`", self.labels(&k1)[g], self.labels(&k1)[f]),
                    });
                }
            }
            for (f, &(s, t)) in arrows.iter().enumerate() {
                if !seen.contains_key(&(t, s)) || self.inverse(d, &k1, f).is_none() {
                    return Err(Refusal {
                        level: self.n,
                        corner: kp.clone(),
                        reason: format!("`{}` has no reverse arrow", self.labels(&k1)[f]),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Nerve of a finite category, truncated at level 2.
pub fn nerve_of(c: &FinCat) -> NFoldCat {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
    enum S {
        O(usize),
        M(usize),
        P(usize, usize),
    }
    let x = NFoldCat::build(
        1,
        |k| match k[0] {
            0 => (0..c.objects.len()).map(S::O).collect(),
            1 => (0..c.morphisms.len()).map(S::M).collect(),
            _ => {
                let mut v = Vec::new();
                for f in 0..c.morphisms.len() {
                    for g in c.hom_from(c.morphisms[f].tgt) {
                        v.push(S::P(f, g));
                    }
                }
                v
            }
        },
        |_, i, _, s| match (s, i) {
            (S::M(f), 0) => S::O(c.morphisms[*f].tgt),
            (S::M(f), _) => S::O(c.morphisms[*f].src),
            (S::P(_, g), 0) => S::M(*g),
            (S::P(f, g), 1) => S::M(c.compose(*g, *f).expect("composable")),
            (S::P(f, _), _) => S::M(*f),
            (S::O(_), _) => unreachable!(),
        },
        |_, i, _, s| match (s, i) {
            (S::O(o), _) => S::M(c.identity[*o]),
            (S::M(f), 0) => S::P(c.identity[c.morphisms[*f].src], *f),
            (S::M(f), _) => S::P(*f, c.identity[c.morphisms[*f].tgt]),
            (S::P(..), _) => unreachable!(),
        },
        |_, s| match s {
            S::O(o) => c.objects[*o].clone(),
            S::M(f) => c.morphisms[*f].name.clone(),
            S::P(f, g) => format!("({};{})", c.morphisms[*f].name, c.morphisms[*g].name),
        },
    );
    x.expect("nerve of an audited category")
}

impl NFoldCat {
    /// The category of a 1-fold object. Repeated labels get an index suffix.
    pub fn to_fincat(&self) -> Result<FinCat> {
        if self.n != 1 {
            return Err(Error::Precondition(format!("a {}-fold object is not a category", self.n)));
        }
        let objects = dedup_labels(self.labels(&[0]));
        let names = dedup_labels(self.labels(&[1]));
        let morphisms = (0..self.size(&[1]))
            .map(|f| Morphism { name: names[f].clone(), src: self.source(0, &[1], f), tgt: self.target(0, &[1], f) })
            .collect();
        let identity = (0..self.size(&[0])).map(|o| self.identity(0, &[0], o)).collect();
        let table = (0..self.size(&[2]))
            .map(|p| (self.face(0, 0, &[2], p), self.face(0, 2, &[2], p), self.face(0, 1, &[2], p)))
            .collect();
        FinCat::new(objects, morphisms, identity, table)
    }
}

fn dedup_labels(ls: &[String]) -> Vec<String> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for l in ls {
        *seen.entry(l.as_str()).or_default() += 1;
    }
    ls.iter().enumerate().map(|(i, l)| if seen[l.as_str()] > 1 { format!("{l}#{i}") } else { l.clone() }).collect()
}

/// Levelwise maps between n-fold categories of the same dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NFoldMap {
    pub maps: Vec<Vec<usize>>,
}

impl NFoldMap {
    pub fn identity(x: &NFoldCat) -> Self {
        NFoldMap { maps: x.labels.iter().map(|l| (0..l.len()).collect()).collect() }
    }

    pub fn at(&self, k: &[u8]) -> &[usize] {
        &self.maps[corner_code(k)]
    }

    pub fn compose(&self, after: &NFoldMap) -> NFoldMap {
        NFoldMap { maps: self.maps.iter().zip(&after.maps).map(|(f, g)| f.iter().map(|&x| g[x]).collect()).collect() }
    }

    /// Commutation with every face and degeneracy, checked exhaustively.
    pub fn check(&self, x: &NFoldCat, y: &NFoldCat) -> Result<()> {
        if x.n != y.n || self.maps.len() != x.labels.len() {
            return invalid("map between n-fold categories of different shape");
        }
        for k in all_corners(x.n) {
            let m = self.at(&k);
            if m.len() != x.size(&k) || m.iter().any(|&v| v >= y.size(&k)) {
                return invalid(format!("level map at {k:?} has the wrong domain or codomain"));
            }
            for dir in 0..x.n {
                if k[dir] >= 1 {
                    let t = with(&k, dir, k[dir] - 1);
                    for i in 0..=k[dir] as usize {
                        for e in 0..x.size(&k) {
                            if self.at(&t)[x.face(dir, i, &k, e)] != y.face(dir, i, &k, m[e]) {
                                return invalid(format!("map does not commute with d{i} in direction {dir} at {k:?}"));
                            }
                        }
                    }
                }
                if k[dir] <= 1 {
                    let t = with(&k, dir, k[dir] + 1);
                    for i in 0..=k[dir] as usize {
                        for e in 0..x.size(&k) {
                            if self.at(&t)[x.degen(dir, i, &k, e)] != y.degen(dir, i, &k, m[e]) {
                                return invalid(format!("map does not commute with s{i} in direction {dir} at {k:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Evidence that an n-fold category is homotopically discrete.
#[derive(Debug, Clone)]
pub struct HdCert {
    /// `truncations[0] = X`, `truncations[j+1] = p(truncations[j])`, ending in a set.
    pub truncations: Vec<NFoldCat>,
    /// Class maps of each truncation step, indexed by the corners of the smaller object.
    pub quotients: Vec<Vec<Vec<usize>>>,
}

impl HdCert {
    pub fn discrete_set(&self) -> &NFoldCat {
        self.truncations.last().expect("nonempty chain")
    }

    /// Image of an element of `X_k` in `X^d`.
    pub fn gamma(&self, k: &[u8], x: usize) -> usize {
        let mut k = k.to_vec();
        let mut x = x;
        for (t, q) in self.truncations.iter().zip(&self.quotients) {
            // move to the initial vertex in the last direction, then take its class
            x = first_vertex(t, &k, x);
            k.pop();
            x = q[corner_code(&k)][x];
        }
        x
    }
}

/// Initial vertex, in the last direction, of an element of `X_k`.
fn first_vertex(t: &NFoldCat, k: &[u8], x: usize) -> usize {
    let d = t.n - 1;
    let mut kk = k.to_vec();
    let mut e = x;
    while kk[d] > 0 {
        e = t.face(d, kk[d] as usize, &kk, e);
        kk[d] -= 1;
    }
    e
}

pub fn is_homotopically_discrete(x: &NFoldCat) -> std::result::Result<HdCert, Refusal> {
    let mut truncations = vec![x.clone()];
    let mut quotients = Vec::new();
    let mut cur = x.clone();
    while cur.n > 0 {
        cur.levelwise_eqrel(|_| true)?;
        let (p, q) = cur.truncate_p().map_err(|e| Refusal { level: cur.n, corner: vec![], reason: e.to_string() })?;
        truncations.push(p.clone());
        quotients.push(q);
        cur = p;
    }
    Ok(HdCert { truncations, quotients })
}

/// Discretization `X^d` as a discrete n-fold category and the map `γ_(n): X → X^d`.
pub fn discretization(x: &NFoldCat, cert: &HdCert) -> Result<(NFoldCat, NFoldMap)> {
    if cert.truncations.first() != Some(x) {
        return Err(Error::Precondition("certificate does not belong to this object".into()));
    }
    let set = cert.discrete_set();
    let mut xd = set.clone();
    for _ in 0..x.n {
        xd = xd.discrete_last();
    }
    let maps = all_corners(x.n).map(|k| (0..x.size(&k)).map(|e| cert.gamma(&k, e)).collect()).collect();
    let gamma = NFoldMap { maps };
    gamma.check(x, &xd)?;
    Ok((xd, gamma))
}

/// `X_0` (first direction at level 0) must be homotopically discrete.
fn base_cert(x: &NFoldCat) -> Result<HdCert> {
    let x0 = x.slice(0, 0);
    is_homotopically_discrete(&x0).map_err(|r| Error::Precondition(format!("X_0 is not homotopically discrete: {r}")))
}

/// Hom-fiber `X(a,b)` over `a, b ∈ X_0^d`.
pub fn hom_fiber(x: &NFoldCat, a: usize, b: usize) -> Result<NFoldCat> {
    if x.n == 0 {
        return Err(Error::Precondition("a set has no hom-fibers".into()));
    }
    let cert = base_cert(x)?;
    hom_fiber_with(x, &cert, a, b)
}

fn hom_fiber_with(x: &NFoldCat, cert: &HdCert, a: usize, b: usize) -> Result<NFoldCat> {
    let nd = cert.discrete_set().size(&[]);
    if a >= nd || b >= nd {
        return Err(Error::Precondition(format!("({a},{b}) not in X_0^d of size {nd}")));
    }
    let x1 = x.slice(0, 1);
    let m = x.n - 1;
    let keep: Vec<Vec<bool>> = all_corners(m)
        .map(|k| {
            let mut k1 = vec![1u8];
            k1.extend_from_slice(&k);
            (0..x1.size(&k))
                .map(|e| cert.gamma(&k, x.face(0, 1, &k1, e)) == a && cert.gamma(&k, x.face(0, 0, &k1, e)) == b)
                .collect()
        })
        .collect();
    x1.restrict(&keep)
}

/// Objects of `X_0^d`, for iterating hom-fibers.
pub fn base_discrete_size(x: &NFoldCat) -> Result<usize> {
    Ok(base_cert(x)?.discrete_set().size(&[]))
}

/// Restriction of `f` to the hom-fiber at `(a,b)`.
fn fiber_map(
    f: &NFoldMap,
    x: &NFoldCat,
    y: &NFoldCat,
    cx: &HdCert,
    cy: &HdCert,
    a: usize,
    b: usize,
) -> Result<(NFoldCat, NFoldCat, NFoldMap)> {
    let fa = base_point_image(f, x, cx, cy, a);
    let fb = base_point_image(f, x, cx, cy, b);
    let xab = hom_fiber_with(x, cx, a, b)?;
    let yab = hom_fiber_with(y, cy, fa, fb)?;
    let m = x.n - 1;
    let mut maps = Vec::new();
    for k in all_corners(m) {
        let mut k1 = vec![1u8];
        k1.extend_from_slice(&k);
        let xs: Vec<usize> = (0..x.size(&k1))
            .filter(|&e| cx.gamma(&k, x.face(0, 1, &k1, e)) == a && cx.gamma(&k, x.face(0, 0, &k1, e)) == b)
            .collect();
        let ys: BTreeMap<usize, usize> = (0..y.size(&k1))
            .filter(|&e| cy.gamma(&k, y.face(0, 1, &k1, e)) == fa && cy.gamma(&k, y.face(0, 0, &k1, e)) == fb)
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        maps.push(xs.iter().map(|&e| ys[&f.at(&k1)[e]]).collect());
    }
    Ok((xab, yab, NFoldMap { maps }))
}

fn base_point_image(f: &NFoldMap, x: &NFoldCat, cx: &HdCert, cy: &HdCert, a: usize) -> usize {
    let k0 = vec![0u8; x.n];
    let rep = (0..x.size(&k0)).find(|&e| cx.gamma(&k0[1..], e) == a).expect("class representative");
    cy.gamma(&k0[1..], f.at(&k0)[rep])
}

/// Truncation of a map along `p^(n-1)`.
fn truncate_map(f: &NFoldMap, x: &NFoldCat, qx: &[Vec<usize>], py: &[Vec<usize>], px: &NFoldCat) -> NFoldMap {
    let m = x.n - 1;
    let maps = all_corners(m)
        .map(|kp| {
            let code = corner_code(&kp);
            let mut k0 = kp.clone();
            k0.push(0);
            let npx = px.size(&kp);
            let mut out = vec![usize::MAX; npx];
            for e in 0..x.size(&k0) {
                out[qx[code][e]] = py[code][f.at(&k0)[e]];
            }
            out
        })
        .collect();
    NFoldMap { maps }
}

/// `p^(n-1) f` together with both truncations.
pub fn truncate_nfold_map(f: &NFoldMap, x: &NFoldCat, y: &NFoldCat) -> Result<(NFoldCat, NFoldCat, NFoldMap)> {
    f.check(x, y)?;
    let (px, qx) = x.truncate_p()?;
    let (py, qy) = y.truncate_p()?;
    let pf = truncate_map(f, x, &qx, &qy, &px);
    pf.check(&px, &py)?;
    Ok((px, py, pf))
}

/// Recursive n-equivalence test; refuses inputs whose `X_0` is not homotopically discrete.
pub fn is_n_equivalence(f: &NFoldMap, x: &NFoldCat, y: &NFoldCat) -> Result<bool> {
    f.check(x, y)?;
    if x.n == 0 {
        let mut img = f.maps[0].clone();
        img.sort_unstable();
        img.dedup();
        return Ok(img.len() == f.maps[0].len() && img.len() == y.size(&[]));
    }
    let cx = base_cert(x)?;
    let cy = base_cert(y)?;
    let nd = cx.discrete_set().size(&[]);
    for a in 0..nd {
        for b in 0..nd {
            let (xab, yab, fab) = fiber_map(f, x, y, &cx, &cy, a, b)?;
            if !is_n_equivalence(&fab, &xab, &yab)? {
                return Ok(false);
            }
        }
    }
    let (px, qx) = x.truncate_p()?;
    let (py, qy) = y.truncate_p()?;
    let pf = truncate_map(f, x, &qx, &qy, &px);
    is_n_equivalence(&pf, &px, &py)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WgEvidence {
    pub ok: bool,
    pub groupoid: bool,
    pub witness: Option<Refusal>,
}

/// The globularity criterion: last-direction groupoids, levelwise equivalence
/// relations on each `X_0^{(r)}`, and a weakly globular truncation.
pub fn is_weakly_globular(x: &NFoldCat) -> WgEvidence {
    let groupoid = x.is_nfold_groupoid().is_ok();
    match wg_rec(x) {
        Ok(()) => WgEvidence { ok: true, groupoid, witness: None },
        Err(r) => WgEvidence { ok: false, groupoid, witness: Some(r) },
    }
}

fn wg_rec(x: &NFoldCat) -> std::result::Result<(), Refusal> {
    let n = x.n;
    if n == 0 {
        return Ok(());
    }
    x.is_groupoid_in(n - 1)?;
    for r in 0..n - 1 {
        x.levelwise_eqrel(|kp| kp[r] == 0)?;
    }
    let (p, _) = x.truncate_p().map_err(|e| Refusal { level: n, corner: vec![], reason: e.to_string() })?;
    wg_rec(&p)
}

/// Induced Segal maps `X_k → X_1 ×_{X_0^d} … ×_{X_0^d} X_1` for `k = 2, 3`.
pub fn segal_check(x: &NFoldCat) -> Result<bool> {
    if x.n == 0 {
        return Ok(true);
    }
    let cert = base_cert(x)?;
    let m = x.n - 1;
    for len in 2..=3usize {
        let strict = |k: &[u8]| strings(x, k, len, false, &cert);
        let weak = |k: &[u8]| strings(x, k, len, true, &cert);
        let src = NFoldCat::build(
            m,
            strict,
            |d, i, k, s| face_string(x, d, i, k, s),
            |d, i, k, s| degen_string(x, d, i, k, s),
            |_, s| format!("{s:?}"),
        )?;
        let tgt = NFoldCat::build(
            m,
            weak,
            |d, i, k, s| face_string(x, d, i, k, s),
            |d, i, k, s| degen_string(x, d, i, k, s),
            |_, s| format!("{s:?}"),
        )?;
        if len == 2 {
            // X_2 must agree with the strict pairs it reconstructs to
            for k in all_corners(m) {
                let mut k2 = vec![2u8];
                k2.extend_from_slice(&k);
                if x.size(&k2) != src.size(&k) {
                    return Ok(false);
                }
            }
        }
        let maps = all_corners(m)
            .map(|k| {
                let ws: HashMap<Vec<usize>, usize> = weak(&k)
                    .into_iter()
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect();
                let mut ss = strict(&k);
                ss.sort();
                ss.dedup();
                ss.iter().map(|s| ws[s]).collect()
            })
            .collect();
        if !is_n_equivalence(&NFoldMap { maps }, &src, &tgt)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn strings(x: &NFoldCat, k: &[u8], len: usize, weak: bool, cert: &HdCert) -> Vec<Vec<usize>> {
    let mut k1 = vec![1u8];
    k1.extend_from_slice(k);
    let n1 = x.size(&k1);
    let src = |e: usize| x.face(0, 1, &k1, e);
    let tgt = |e: usize| x.face(0, 0, &k1, e);
    let joins = |f: usize, g: usize| {
        if weak {
            cert.gamma(k, tgt(f)) == cert.gamma(k, src(g))
        } else {
            tgt(f) == src(g)
        }
    };
    let mut out: Vec<Vec<usize>> = (0..n1).map(|e| vec![e]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for s in &out {
            for g in 0..n1 {
                if joins(*s.last().unwrap(), g) {
                    let mut t = s.clone();
                    t.push(g);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

fn face_string(x: &NFoldCat, d: usize, i: usize, k: &[u8], s: &[usize]) -> Vec<usize> {
    let mut k1 = vec![1u8];
    k1.extend_from_slice(k);
    s.iter().map(|&e| x.face(d + 1, i, &k1, e)).collect()
}

fn degen_string(x: &NFoldCat, d: usize, i: usize, k: &[u8], s: &[usize]) -> Vec<usize> {
    let mut k1 = vec![1u8];
    k1.extend_from_slice(k);
    s.iter().map(|&e| x.degen(d + 1, i, &k1, e)).collect()
}

/// Pullback `P = X ×_{d p X} d Z` along `r: Z → p^(n-1) X`, with both projections
/// `w: P → X` and `P → d Z`.
pub fn pullback_transfer(z: &NFoldCat, r: &NFoldMap, x: &NFoldCat) -> Result<(NFoldCat, NFoldMap, NFoldMap)> {
    let n = x.n;
    if n == 0 || z.n != n - 1 {
        return Err(Error::Precondition("pullback transfer needs Z of dimension n-1".into()));
    }
    let (px, qx) = x.truncate_p()?;
    r.check(z, &px)?;
    if !is_n_equivalence(r, z, &px)? {
        return Err(Error::Precondition("r is not an (n-1)-equivalence".into()));
    }
    let class = |k: &[u8], e: usize| -> usize { qx[corner_code(&k[..n - 1])][first_vertex(x, k, e)] };
    let p = NFoldCat::build(
        n,
        |k| {
            let kp = &k[..n - 1];
            let mut v = Vec::new();
            for e in 0..x.size(k) {
                for zz in 0..z.size(kp) {
                    if class(k, e) == r.at(kp)[zz] {
                        v.push((e, zz));
                    }
                }
            }
            v
        },
        |d, i, k, &(e, zz)| {
            let ze = if d == n - 1 { zz } else { z.face(d, i, &k[..n - 1], zz) };
            (x.face(d, i, k, e), ze)
        },
        |d, i, k, &(e, zz)| {
            let ze = if d == n - 1 { zz } else { z.degen(d, i, &k[..n - 1], zz) };
            (x.degen(d, i, k, e), ze)
        },
        |_, &(e, zz)| format!("({e},{zz})"),
    )?;
    let mut maps = Vec::new();
    let mut zmaps = Vec::new();
    for k in all_corners(n) {
        let kp = &k[..n - 1];
        let mut v = Vec::new();
        for e in 0..x.size(&k) {
            for zz in 0..z.size(kp) {
                if class(&k, e) == r.at(kp)[zz] {
                    v.push((e, zz));
                }
            }
        }
        v.sort();
        maps.push(v.iter().map(|&(e, _)| e).collect());
        zmaps.push(v.iter().map(|&(_, zz)| zz).collect());
    }
    let w = NFoldMap { maps };
    w.check(&p, x)?;
    let wz = NFoldMap { maps: zmaps };
    wz.check(&p, &z.discrete_last())?;
    Ok((p, w, wz))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indiscrete(m: usize) -> NFoldCat {
        // nerve of the indiscrete groupoid on m objects, truncated at level 2
        NFoldCat::build(
            1,
            |k| {
                let len = k[0] as usize + 1;
                let mut v: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..len {
                    v = v
                        .into_iter()
                        .flat_map(|s| {
                            (0..m).map(move |x| {
                                let mut t = s.clone();
                                t.push(x);
                                t
                            })
                        })
                        .collect();
                }
                v
            },
            |_, i, _, s| {
                let mut t = s.clone();
                t.remove(i);
                t
            },
            |_, i, _, s| {
                let mut t = s.clone();
                t.insert(i, s[i]);
                t
            },
            |_, s| format!("{s:?}"),
        )
        .unwrap()
    }

    #[test]
    fn corner_codes_roundtrip_small() {
        for c in 0..27 {
            assert_eq!(corner_code(&corner_of(c, 3)), c);
        }
    }

    #[test]
    fn rotate_out_of_range_is_refused() {
        let x = indiscrete(2);
        assert!(x.rotate(0).is_err());
        assert!(x.rotate(2).is_err());
    }

    #[test]
    fn missing_segal_pair_is_rejected() {
        let x = indiscrete(2);
        let mut labels = x.labels.clone();
        let mut faces = x.faces.clone();
        let degens = x.degens.clone();
        // drop the last element of X_2; degeneracies into X_2 must not point at it
        let c2 = corner_code(&[2]);
        let victim = (0..x.size(&[2])).find(|&e| !degens[0][corner_code(&[1])].iter().any(|m| m.contains(&e))).unwrap();
        labels[c2].remove(victim);
        for m in faces[0][c2].iter_mut() {
            m.remove(victim);
        }
        let mut degens = degens;
        for m in degens[0][corner_code(&[1])].iter_mut() {
            for v in m.iter_mut() {
                if *v > victim {
                    *v -= 1;
                }
            }
        }
        assert!(NFoldCat::from_tables(1, labels, faces, degens).is_err());
    }

    #[test]
    fn hom_fiber_of_set_is_refused() {
        let s = NFoldCat::set(vec!["a".into()]);
        assert!(hom_fiber(&s, 0, 0).is_err());
    }

    #[test]
    fn truncation_of_indiscrete_is_point() {
        let (p, q) = indiscrete(3).truncate_p().unwrap();
        assert_eq!(p.size(&[]), 1);
        assert_eq!(q[0], vec![0, 0, 0]);
    }

    #[test]
    fn set_is_zero_dimensional() {
        assert!(NFoldCat::set(vec![]).truncate_p().is_err());
        assert!(is_weakly_globular(&NFoldCat::set(vec![])).ok);
    }
}
