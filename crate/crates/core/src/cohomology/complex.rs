//! Chain complexes on the generators of the resolution tower, their reduction and cochains.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;

use super::linalg::{AbGroupPresentation, Lattice, Mat};
use crate::audit::Check;
use crate::beckmod::AbGroup;
use crate::comonad::{colour_bit, colour_sign, top_identity, Cell, Colour, Tower};
use crate::error::{Error, Result};
use crate::trackcat::TrackCatN;

/// Refuses bounds shorter than a chain of composable non-identity 1-cells of `X`: the
/// truncated tower then misses relations and its cohomology depends on the bound.
pub fn chain_guard(x: &TrackCatN, bound: usize) -> Result<()> {
    let base = &x.to_internal().levels[0];
    let edges: Vec<usize> = (0..base.morphisms.len()).filter(|&m| !base.is_identity(m)).collect();
    // longest[m] = longest chain of non-identity 1-cells starting with m, computed by DFS
    fn visit(
        m: usize,
        base: &crate::fincat::FinCat,
        edges: &[usize],
        state: &mut HashMap<usize, Option<Vec<usize>>>,
    ) -> std::result::Result<Vec<usize>, Vec<usize>> {
        match state.get(&m) {
            Some(Some(c)) => return Ok(c.clone()),
            Some(None) => return Err(vec![m]),
            None => {}
        }
        state.insert(m, None);
        let mut best = vec![m];
        for &g in edges.iter().filter(|&&g| base.morphisms[g].src == base.morphisms[m].tgt) {
            let mut c = visit(g, base, edges, state).map_err(|mut cyc| {
                cyc.insert(0, m);
                cyc
            })?;
            if c.len() + 1 > best.len() {
                c.insert(0, m);
                best = c;
            }
        }
        state.insert(m, Some(best.clone()));
        Ok(best)
    }
    let mut state = HashMap::new();
    let show = |c: &[usize]| c.iter().rev().map(|&m| base.morphisms[m].name.as_str()).collect::<Vec<_>>().join("∘");
    for &m in &edges {
        match visit(m, base, &edges, &mut state) {
            Ok(c) if c.len() > bound => return Err(Error::Truncation { bound, path: show(&c) }),
            Ok(_) => {}
            Err(cyc) => return Err(Error::Truncation { bound, path: format!("{}∘…", show(&cyc)) }),
        }
    }
    Ok(())
}

/// The three cosimplicial groups of the long exact sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    /// `C•` of `X`, computing `H_AQ(DX)`.
    Aq,
    /// `C•` of `X₀`: generators paired with a vertex of the last hom-direction.
    AqVertex,
    /// `D•`, computing `H_Alg(X)`.
    Alg,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Aq => "aq",
            Column::AqVertex => "aq0",
            Column::Alg => "alg",
        }
    }

    pub const ALL: [Column; 3] = [Column::Aq, Column::AqVertex, Column::Alg];
}

/// Faces and degeneracies of the top generators `M_s` of the tower, `s ≤ depth`.
#[derive(Debug, Clone)]
pub struct TowerData {
    pub n: usize,
    pub bound: usize,
    pub depth: usize,
    pub sizes: Vec<usize>,
    /// `faces[s][m][i]`: letters of `∂_i` of the generator `(m, c*)`.
    faces: Vec<Vec<Vec<Vec<(u32, Colour)>>>>,
    /// `degens[s][m][i] = σ_i(m) ∈ M_{s+1}`.
    degens: Vec<Vec<Vec<u32>>>,
    degenerate: Vec<Vec<bool>>,
}

impl TowerData {
    pub fn new(x: &TrackCatN, bound: usize, depth: usize) -> Result<Self> {
        chain_guard(x, bound)?;
        let mut t = Tower::new(x, bound)?;
        t.enumerate(depth)?;
        Self::from_tower(&mut t, depth)
    }

    pub fn from_tower(t: &mut Tower, depth: usize) -> Result<Self> {
        if t.enumerated_depth() < depth {
            return Err(Error::Precondition(format!("tower enumerated to {} < {depth}", t.enumerated_depth())));
        }
        let n = t.dim();
        let top = t.top();
        let cs = top_identity(n);
        let sizes: Vec<usize> = (0..=depth).map(|j| t.level_size(j)).collect();
        let mut faces = vec![vec![vec![]; sizes[0]]];
        for s in 1..=depth {
            let mut lv = Vec::with_capacity(sizes[s]);
            for m in 0..sizes[s] as u32 {
                let g = t.generator(s + 1, m, cs);
                let mut fs = Vec::with_capacity(s + 1);
                for i in 0..=s {
                    match t.face(i, s + 1, &top, &g)? {
                        Cell::Word(w) => fs.push(w.letters),
                        Cell::Base(_) => unreachable!("faces above level 1 are words"),
                    }
                }
                lv.push(fs);
            }
            faces.push(lv);
        }
        let mut degens = Vec::new();
        let mut degenerate: Vec<Vec<bool>> = sizes.iter().map(|&k| vec![false; k]).collect();
        for s in 0..depth {
            let mut lv = Vec::with_capacity(sizes[s]);
            for m in 0..sizes[s] as u32 {
                let g = t.generator(s + 1, m, cs);
                let mut ds = Vec::with_capacity(s + 1);
                for i in 0..=s {
                    let Cell::Word(w) = t.degen(i, s + 1, &top, &g)? else { unreachable!("degeneracies give words") };
                    match w.letters[..] {
                        [(m2, c)] if c == cs => {
                            degenerate[s + 1][m2 as usize] = true;
                            ds.push(m2);
                        }
                        _ => return Err(Error::Validation("degeneracy of a generator is not a generator".into())),
                    }
                }
                lv.push(ds);
            }
            degens.push(lv);
        }
        if (0..=depth).any(|j| t.level_size(j) != sizes[j]) {
            return Err(Error::Validation("faces or degeneracies left the enumerated tower".into()));
        }
        Ok(TowerData { n, bound: t.bound(), depth, sizes, faces, degens, degenerate })
    }

    /// Letters `(generator, colour)` of `∂_i` of generator `m` at level `s ≥ 1`.
    pub fn face_letters(&self, s: usize, m: usize, i: usize) -> &[(u32, Colour)] {
        &self.faces[s][m][i]
    }

    /// `σ_i(m)` at level `s + 1`.
    pub fn degen_index(&self, s: usize, m: usize, i: usize) -> u32 {
        self.degens[s][m][i]
    }

    pub fn cell_count(&self, col: Column, s: usize) -> usize {
        match col {
            Column::AqVertex => 2 * self.sizes[s],
            _ => self.sizes[s],
        }
    }

    fn split(col: Column, cell: usize) -> (usize, usize) {
        match col {
            Column::AqVertex => (cell / 2, cell % 2),
            _ => (cell, 0),
        }
    }

    pub fn is_degenerate(&self, col: Column, s: usize, cell: usize) -> bool {
        self.degenerate[s][Self::split(col, cell).0]
    }

    /// `∂_i` of a degree-`s` cell as a reduced combination of degree-`s−1` cells.
    pub fn face(&self, col: Column, s: usize, cell: usize, i: usize) -> Vec<(u32, i64)> {
        let (m, x) = Self::split(col, cell);
        let n = self.n;
        let mut out: Vec<(u32, i64)> = Vec::new();
        for &(g, c) in &self.faces[s][m][i] {
            let term = match col {
                Column::Alg => (g, colour_sign(c, n)),
                Column::Aq => (g, colour_sign(c, n - 1)),
                Column::AqVertex => (2 * g + colour_bit(c, n - 1, x) as u32, colour_sign(c, n - 1)),
            };
            if term.1 != 0 {
                out.push(term);
            }
        }
        combine(out)
    }

    /// `σ_i` of a degree-`s` cell, `s < depth`.
    pub fn degen(&self, col: Column, s: usize, cell: usize, i: usize) -> usize {
        let (m, x) = Self::split(col, cell);
        let d = self.degens[s][m][i] as usize;
        match col {
            Column::AqVertex => 2 * d + x,
            _ => d,
        }
    }

    /// Unnormalized or normalized chain complex in degrees `0..=top`.
    pub fn chain_complex(&self, col: Column, top: usize, normalized: bool) -> Result<ChainComplex> {
        self.check_top(top)?;
        let index = self.cell_index(col, top, normalized);
        let mut bd = vec![vec![Vec::new(); index[0].1.len()]];
        for s in 1..=top {
            let col_bd = index[s]
                .1
                .iter()
                .map(|&c| {
                    let mut acc = Vec::new();
                    for i in 0..=s {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        for (g, v) in self.face(col, s, c, i) {
                            if let Some(&k) = index[s - 1].0.get(&(g as usize)) {
                                acc.push((k as u32, sign * v));
                            }
                        }
                    }
                    combine(acc)
                })
                .collect();
            bd.push(col_bd);
        }
        let tags = index.iter().map(|(_, cells)| vec![0; cells.len()]).collect();
        Ok(ChainComplex { tags, bd })
    }

    /// The normalized vertex complex in the basis `(w,0)` (tag 0) and `(w,1) − (w,0)` (tag 1).
    /// Tag-1 cells span a copy of the algebraic complex and the tag-0 quotient is the `C•(X)`
    /// complex.
    pub fn split_vertex_complex(&self, top: usize) -> Result<ChainComplex> {
        self.check_top(top)?;
        let index = self.cell_index(Column::Alg, top, true);
        let convert = |s: usize, comb: Vec<(u32, i64)>| -> Vec<(u32, i64)> {
            let mut out = Vec::new();
            for (gx, v) in comb {
                let (g, x) = ((gx / 2) as usize, gx % 2);
                if let Some(&k) = index[s].0.get(&g) {
                    out.push((2 * k as u32, v));
                    if x == 1 {
                        out.push((2 * k as u32 + 1, v));
                    }
                }
            }
            out
        };
        let mut bd = vec![vec![Vec::new(); 2 * index[0].1.len()]];
        let mut tags = vec![];
        for (s, (_, cells)) in index.iter().enumerate() {
            tags.push((0..2 * cells.len()).map(|c| (c % 2) as u8).collect::<Vec<u8>>());
            if s == 0 {
                continue;
            }
            let mut lv = Vec::with_capacity(2 * cells.len());
            for &m in cells {
                let bdry = |x: usize| {
                    let mut acc = Vec::new();
                    for i in 0..=s {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        acc.extend(
                            self.face(Column::AqVertex, s, 2 * m + x, i).into_iter().map(|(g, v)| (g, sign * v)),
                        );
                    }
                    convert(s - 1, acc)
                };
                let b0 = combine(bdry(0));
                let mut diff = bdry(1);
                diff.extend(b0.iter().map(|&(g, v)| (g, -v)));
                let diff = combine(diff);
                if diff.iter().any(|&(g, _)| g % 2 == 0) {
                    return Err(Error::Validation("difference cells do not span a subcomplex".into()));
                }
                lv.push(b0);
                lv.push(diff);
            }
            bd.push(lv);
        }
        Ok(ChainComplex { tags, bd })
    }

    fn check_top(&self, top: usize) -> Result<()> {
        if top > self.depth {
            return Err(Error::Precondition(format!("complex up to degree {top} needs tower depth {top}")));
        }
        Ok(())
    }

    /// Per degree: the map from kept cells to positions and the kept cells in order.
    fn cell_index(&self, col: Column, top: usize, normalized: bool) -> Vec<(HashMap<usize, usize>, Vec<usize>)> {
        (0..=top)
            .map(|s| {
                let cells: Vec<usize> =
                    (0..self.cell_count(col, s)).filter(|&c| !normalized || !self.is_degenerate(col, s, c)).collect();
                (cells.iter().enumerate().map(|(k, &c)| (c, k)).collect(), cells)
            })
            .collect()
    }

    /// Face-face, face-degeneracy and degeneracy-degeneracy identities on every generator.
    pub fn simplicial_identities(&self, col: Column) -> Check {
        let name = format!("cosimplicial identities ({})", col.name());
        let apply_face = |s: usize, comb: &[(u32, i64)], i: usize| -> Vec<(u32, i64)> {
            let mut out = Vec::new();
            for &(c, v) in comb {
                out.extend(self.face(col, s, c as usize, i).into_iter().map(|(g, w)| (g, v * w)));
            }
            combine(out)
        };
        let apply_degen = |s: usize, comb: &[(u32, i64)], i: usize| -> Vec<(u32, i64)> {
            combine(comb.iter().map(|&(c, v)| (self.degen(col, s, c as usize, i) as u32, v)).collect())
        };
        for s in 2..=self.depth {
            for c in 0..self.cell_count(col, s) {
                for j in 1..=s {
                    for i in 0..j {
                        let l = apply_face(s - 1, &self.face(col, s, c, j), i);
                        let r = apply_face(s - 1, &self.face(col, s, c, i), j - 1);
                        if l != r {
                            return Check::fail(
                                &name,
                                format!("d{i} d{j} != d{} d{i} on cell {c} in degree {s}", j - 1),
                            );
                        }
                    }
                }
            }
        }
        for s in 0..self.depth {
            for c in 0..self.cell_count(col, s) {
                let unit = vec![(c as u32, 1i64)];
                for j in 0..=s {
                    let sj = self.degen(col, s, c, j);
                    for i in 0..=s + 1 {
                        let l = self.face(col, s + 1, sj, i);
                        let r = if i == j || i == j + 1 {
                            unit.clone()
                        } else if s == 0 {
                            continue;
                        } else if i < j {
                            apply_degen(s - 1, &self.face(col, s, c, i), j - 1)
                        } else {
                            apply_degen(s - 1, &self.face(col, s, c, i - 1), j)
                        };
                        if l != r {
                            return Check::fail(&name, format!("d{i} s{j} on cell {c} in degree {s}"));
                        }
                    }
                    if s + 1 < self.depth {
                        for i in 0..=j {
                            let l = self.degen(col, s + 1, sj, i);
                            let r = self.degen(col, s + 1, self.degen(col, s, c, i), j + 1);
                            if l != r {
                                return Check::fail(&name, format!("s{i} s{j} on cell {c} in degree {s}"));
                            }
                        }
                    }
                }
            }
        }
        Check::pass(&name)
    }
}

/// Sorts by cell and drops zero coefficients.
pub(crate) fn combine(mut v: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    v.sort_unstable_by_key(|x| x.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
    for (g, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == g => last.1 += c,
            _ => out.push((g, c)),
        }
        if out.last().is_some_and(|l| l.1 == 0) {
            out.pop();
        }
    }
    out
}

/// Sparse integer chain complex in degrees `0..=top`; `bd[s][c]` is the boundary of cell `c`
/// of degree `s` (empty for `s = 0`). Cells carry a tag; tag-1 cells span a subcomplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub tags: Vec<Vec<u8>>,
    pub bd: Vec<Vec<Vec<(u32, i64)>>>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.tags.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.tags.iter().map(Vec::len).collect()
    }

    pub fn dd_zero(&self) -> Check {
        for s in 2..=self.top() {
            for (c, col) in self.bd[s].iter().enumerate() {
                let mut acc = Vec::new();
                for &(r, v) in col {
                    acc.extend(self.bd[s - 1][r as usize].iter().map(|&(q, w)| (q, v * w)));
                }
                if !combine(acc).is_empty() {
                    return Check::fail("d∘d = 0", format!("cell {c} in degree {s}"));
                }
            }
        }
        Check::pass("d∘d = 0")
    }

    /// Cells of one tag, keeping only boundary terms between them.
    pub fn part(&self, tag: u8) -> ChainComplex {
        let keep: Vec<Vec<Option<u32>>> = self
            .tags
            .iter()
            .map(|ts| {
                let mut k = 0;
                ts.iter()
                    .map(|&t| {
                        (t == tag).then(|| {
                            k += 1;
                            k - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let tags = keep.iter().map(|ks| vec![tag; ks.iter().flatten().count()]).collect();
        let bd = self
            .bd
            .iter()
            .enumerate()
            .map(|(s, lv)| {
                lv.iter()
                    .enumerate()
                    .filter(|(c, _)| keep[s][*c].is_some())
                    .map(|(_, col)| col.iter().filter_map(|&(r, v)| keep[s - 1][r as usize].map(|k| (k, v))).collect())
                    .collect()
            })
            .collect();
        ChainComplex { tags, bd }
    }

    /// Cancels pairs of equal-tag cells joined by a unit boundary coefficient. The result is
    /// chain homotopy equivalent, and tag-1 cells still span a subcomplex.
    pub fn reduce(&self) -> Result<ChainComplex> {
        let top = self.top();
        let dims = self.dims();
        let mut bd: Vec<Vec<HashMap<u32, i64>>> =
            self.bd.iter().map(|lv| lv.iter().map(|col| col.iter().copied().collect()).collect()).collect();
        let mut cob: Vec<Vec<HashSet<u32>>> = dims.iter().map(|&d| vec![HashSet::new(); d]).collect();
        for s in 1..=top {
            for (c, col) in bd[s].iter().enumerate() {
                for &r in col.keys() {
                    cob[s - 1][r as usize].insert(c as u32);
                }
            }
        }
        let mut alive: Vec<Vec<bool>> = dims.iter().map(|&d| vec![true; d]).collect();
        for s in 1..=top {
            loop {
                let mut progress = false;
                for tau in 0..dims[s] {
                    if !alive[s][tau] {
                        continue;
                    }
                    let tag = self.tags[s][tau];
                    let pick = bd[s][tau]
                        .iter()
                        .filter(|(&r, &v)| v.abs() == 1 && self.tags[s - 1][r as usize] == tag)
                        .min_by_key(|(&r, _)| (cob[s - 1][r as usize].len(), r))
                        .map(|(&r, &v)| (r as usize, v));
                    if let Some((sigma, eps)) = pick {
                        eliminate(&mut bd, &mut cob, top, s, sigma, tau, eps)?;
                        alive[s][tau] = false;
                        alive[s - 1][sigma] = false;
                        progress = true;
                    }
                }
                if !progress {
                    break;
                }
            }
        }
        let newidx: Vec<Vec<Option<u32>>> = alive
            .iter()
            .map(|a| {
                let mut k = 0;
                a.iter()
                    .map(|&x| {
                        x.then(|| {
                            k += 1;
                            k - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut tags = Vec::new();
        let mut out = Vec::new();
        for s in 0..=top {
            tags.push((0..dims[s]).filter(|&c| alive[s][c]).map(|c| self.tags[s][c]).collect());
            out.push(
                (0..dims[s])
                    .filter(|&c| alive[s][c])
                    .map(|c| {
                        let mut col: Vec<(u32, i64)> = bd[s][c]
                            .iter()
                            .map(|(&r, &v)| (newidx[s - 1][r as usize].expect("boundary of a live cell is live"), v))
                            .collect();
                        col.sort_unstable();
                        col
                    })
                    .collect(),
            );
        }
        Ok(ChainComplex { tags, bd: out })
    }

    /// Drops top-degree cells with zero boundary; they constrain nothing below the top.
    pub fn trim_top(&self) -> ChainComplex {
        let top = self.top();
        let mut out = self.clone();
        if top == 0 {
            return out;
        }
        let keep: Vec<usize> = (0..self.tags[top].len()).filter(|&c| !self.bd[top][c].is_empty()).collect();
        out.tags[top] = keep.iter().map(|&c| self.tags[top][c]).collect();
        out.bd[top] = keep.iter().map(|&c| self.bd[top][c].clone()).collect();
        out
    }

    /// Dense coboundary matrices `d^s = (∂_{s+1})ᵀ`.
    pub fn cochains(&self) -> FinCochainComplex {
        let dims = self.dims();
        let d = (0..self.top())
            .map(|s| {
                let mut m = Mat::zeros(dims[s + 1], dims[s]);
                for (t, col) in self.bd[s + 1].iter().enumerate() {
                    for &(r, v) in col {
                        m.e[t][r as usize] = BigInt::from(v);
                    }
                }
                m
            })
            .collect();
        FinCochainComplex { dims, d }
    }
}

fn overflow() -> Error {
    Error::Precondition("coefficient overflow during elimination".into())
}

fn eliminate(
    bd: &mut [Vec<HashMap<u32, i64>>],
    cob: &mut [Vec<HashSet<u32>>],
    top: usize,
    s: usize,
    sigma: usize,
    tau: usize,
    eps: i64,
) -> Result<()> {
    let col: Vec<(u32, i64)> = bd[s][tau].iter().map(|(&r, &v)| (r, v)).collect();
    let others: Vec<u32> = cob[s - 1][sigma].iter().copied().filter(|&t| t as usize != tau).collect();
    for t2 in others {
        let a = bd[s][t2 as usize][&(sigma as u32)];
        let f = a.checked_mul(eps).ok_or_else(overflow)?;
        for &(r, v) in &col {
            let entry = bd[s][t2 as usize].entry(r).or_insert(0);
            *entry = entry.checked_sub(f.checked_mul(v).ok_or_else(overflow)?).ok_or_else(overflow)?;
            if *entry == 0 {
                bd[s][t2 as usize].remove(&r);
                cob[s - 1][r as usize].remove(&t2);
            } else {
                cob[s - 1][r as usize].insert(t2);
            }
        }
    }
    for &(r, _) in &col {
        cob[s - 1][r as usize].remove(&(tau as u32));
    }
    bd[s][tau].clear();
    if s < top {
        for u in std::mem::take(&mut cob[s][tau]) {
            bd[s + 1][u as usize].remove(&(tau as u32));
        }
    }
    if s >= 2 {
        for r in std::mem::take(&mut bd[s - 1][sigma]).into_keys() {
            cob[s - 2][r as usize].remove(&(sigma as u32));
        }
    }
    debug_assert!(cob[s - 1][sigma].is_empty());
    Ok(())
}

/// Integer cochain complex `C⁰ → C¹ → … → C^top` with `d[s]: C^s → C^{s+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCochainComplex {
    pub dims: Vec<usize>,
    pub d: Vec<Mat>,
}

impl FinCochainComplex {
    pub fn new(dims: Vec<usize>, d: Vec<Mat>) -> Result<Self> {
        if dims.is_empty() || d.len() + 1 != dims.len() {
            return Err(Error::Precondition("one differential per consecutive pair of degrees".into()));
        }
        for (s, m) in d.iter().enumerate() {
            if m.rows != dims[s + 1] || m.cols != dims[s] {
                return Err(Error::Precondition(format!("differential {s} has the wrong shape")));
            }
        }
        Ok(FinCochainComplex { dims, d })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dd_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    fn guard(&self, s: usize) -> Result<()> {
        if s >= self.top() {
            return Err(Error::DegreeGuard { degree: s, depth: self.top(), needed: s + 1 });
        }
        Ok(())
    }

    /// Cocycles with values in `ℤ/k` (`k = 0` for `ℤ`), as a lattice containing `kℤ^n`.
    pub fn cocycles(&self, s: usize, k: &BigInt) -> Result<Lattice> {
        self.guard(s)?;
        let target = Lattice::scaled(self.dims[s + 1], k);
        Ok(Lattice::preimage(&self.d[s], &target).sum(&Lattice::scaled(self.dims[s], k)))
    }

    pub fn coboundaries(&self, s: usize, k: &BigInt) -> Lattice {
        let base = Lattice::scaled(self.dims[s], k);
        if s == 0 {
            return base;
        }
        let m = &self.d[s - 1];
        let gens: Vec<Vec<BigInt>> = (0..m.cols).map(|j| (0..m.rows).map(|i| m.e[i][j].clone()).collect()).collect();
        Lattice::span(self.dims[s], &gens).sum(&base)
    }

    pub fn cohomology_cyclic(&self, s: usize, k: &BigInt) -> Result<AbGroupPresentation> {
        self.cocycles(s, k)?.quotient(&self.coboundaries(s, k))
    }
}

/// `H^s` with coefficients in `A`: the direct sum over the cyclic factors of `A`.
pub fn cohomology_of(c: &FinCochainComplex, s: usize, a: &AbGroup) -> Result<AbGroupPresentation> {
    let mut out = AbGroupPresentation::zero();
    for &k in a.factors() {
        out = out.direct_sum(&c.cohomology_cyclic(s, &BigInt::from(k))?);
    }
    Ok(out)
}

/// Degree-0 cohomology as the equalizer of the two cofaces on unnormalized generators,
/// computed straight from the tower: a rank count over `ℤ`, an exhaustive search over `ℤ/k`.
pub fn h0_oracle(x: &TrackCatN, col: Column, bound: usize, a: &AbGroup) -> Result<AbGroupPresentation> {
    chain_guard(x, bound)?;
    let mut t = Tower::new(x, bound)?;
    t.enumerate(1)?;
    let n = t.dim();
    let top = t.top();
    let cs = top_identity(n);
    let m0 = t.level_size(0);
    let width = if col == Column::AqVertex { 2 * m0 } else { m0 };
    // rows: degree-1 cells, entries of (∂₀ − ∂₁)
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for m in 0..t.level_size(1) as u32 {
        let g = t.generator(2, m, cs);
        let xs: &[usize] = if col == Column::AqVertex { &[0, 1] } else { &[0] };
        for &xv in xs {
            let mut row = vec![0i64; width];
            for (i, sign) in [(0, 1), (1, -1)] {
                let Cell::Word(w) = t.face(i, 2, &top, &g)? else { unreachable!() };
                for (h, c) in w.letters {
                    let (idx, v) = match col {
                        Column::Alg => (h as usize, colour_sign(c, n)),
                        Column::Aq => (h as usize, colour_sign(c, n - 1)),
                        Column::AqVertex => (2 * h as usize + colour_bit(c, n - 1, xv) as usize, colour_sign(c, n - 1)),
                    };
                    row[idx] += sign * v;
                }
            }
            rows.push(row);
        }
    }
    let mut out = AbGroupPresentation::zero();
    for &k in a.factors() {
        let part = if k == 0 {
            let m = Mat::from_i64(rows.len(), width, &rows);
            AbGroupPresentation { rank: width - super::linalg::rank(&m), torsion: vec![] }
        } else {
            equalizer_by_search(&rows, width, k)?
        };
        out = out.direct_sum(&part);
    }
    Ok(out)
}

const SEARCH_LIMIT: u64 = 1 << 22;

fn equalizer_by_search(rows: &[Vec<i64>], width: usize, k: u64) -> Result<AbGroupPresentation> {
    let total = (k as u128).checked_pow(width as u32).filter(|&t| t <= SEARCH_LIMIT as u128);
    let Some(total) = total else {
        return Err(Error::Precondition(format!("equalizer search over {k}^{width} assignments is too large")));
    };
    let primes = prime_powers(k);
    // counts[p][i] = #{φ in the equalizer : p^i φ = 0}
    let mut counts: Vec<Vec<u64>> = primes.iter().map(|&(_, e)| vec![0; e as usize + 1]).collect();
    let mut phi = vec![0u64; width];
    for _ in 0..total {
        let ok = rows.iter().all(|r| {
            let v: i128 = r.iter().zip(&phi).map(|(&a, &b)| a as i128 * b as i128).sum();
            v.rem_euclid(k as i128) == 0
        });
        if ok {
            for (pi, &(p, e)) in primes.iter().enumerate() {
                for i in 0..=e {
                    let q = p.pow(i);
                    if phi.iter().all(|&v| (v * q) % k == 0) {
                        counts[pi][i as usize] += 1;
                    }
                }
            }
        }
        for v in phi.iter_mut() {
            *v += 1;
            if *v < k {
                break;
            }
            *v = 0;
        }
    }
    let mut orders = Vec::new();
    for (pi, &(p, e)) in primes.iter().enumerate() {
        let logs: Vec<u32> = counts[pi].iter().map(|&c| ilog_exact(c, p)).collect();
        for i in 1..=e as usize {
            let at_least = logs[i] - logs[i - 1];
            let at_least_next = if i < e as usize { logs[i + 1] - logs[i] } else { 0 };
            for _ in 0..at_least - at_least_next {
                orders.push(BigInt::from(p.pow(i as u32)));
            }
        }
    }
    Ok(AbGroupPresentation::from_cyclic(0, &orders))
}

fn prime_powers(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        let mut e = 0;
        while k.is_multiple_of(p) {
            k /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

fn ilog_exact(c: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut v = 1;
    while v < c {
        v *= p;
        e += 1;
    }
    assert_eq!(v, c, "subgroup order is a prime power");
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_cancels_and_sorts() {
        assert_eq!(combine(vec![(3, 1), (1, 2), (3, -1), (1, 1)]), vec![(1, 3)]);
        assert!(combine(vec![]).is_empty());
    }

    #[test]
    fn multiplication_by_two() {
        // 0 → ℤ →×2 ℤ → 0
        let c = FinCochainComplex::new(vec![1, 1], vec![Mat::from_i64(1, 1, &[vec![2]])]).unwrap();
        let z = AbGroup::integers();
        assert!(cohomology_of(&c, 0, &z).unwrap().is_zero());
        assert!(matches!(cohomology_of(&c, 1, &z), Err(Error::DegreeGuard { .. })));
        // with a zero degree appended, H¹ becomes visible
        let c2 =
            FinCochainComplex::new(vec![1, 1, 0], vec![Mat::from_i64(1, 1, &[vec![2]]), Mat::zeros(0, 1)]).unwrap();
        assert_eq!(cohomology_of(&c2, 1, &z).unwrap().to_string(), "Z/2");
        assert_eq!(cohomology_of(&c2, 0, &AbGroup::cyclic(2)).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn malformed_cochain_complexes_are_rejected() {
        assert!(FinCochainComplex::new(vec![1, 2], vec![Mat::zeros(1, 2)]).is_err());
        assert!(FinCochainComplex::new(vec![1], vec![Mat::zeros(1, 1)]).is_err());
    }

    #[test]
    fn reduction_keeps_homology_of_a_circle() {
        // two vertices, two edges between them
        let c = ChainComplex {
            tags: vec![vec![0, 0], vec![0, 0]],
            bd: vec![vec![vec![], vec![]], vec![vec![(0, -1), (1, 1)], vec![(0, -1), (1, 1)]]],
        };
        let r = c.reduce().unwrap();
        assert_eq!(r.dims(), vec![1, 1]);
        assert!(r.bd[1][0].is_empty());
    }

    #[test]
    fn search_recovers_mixed_torsion() {
        // φ ∈ (ℤ/4)²  with 2φ₀ = 0: ℤ/2 ⊕ ℤ/4
        let g = equalizer_by_search(&[vec![2, 0]], 2, 4).unwrap();
        assert_eq!(g.to_string(), "Z/2 ⊕ Z/4");
        assert_eq!(prime_powers(12), vec![(2, 2), (3, 1)]);
    }
}
