//! Abelian group objects, Beck modules over 1-track categories, and the
//! Eilenberg–Mac Lane objects `E⁽ⁿ⁾(Q,M)` with their structure maps.
//!
//! A module is stored by its fibres: one finitely generated abelian group per 2-cell
//! of `Q`, plus integer matrices giving horizontal and vertical composition of fibre
//! elements. Everything else (the internal groupoid `M`, the bar directions of
//! `E⁽ⁿ⁾`) is generated from that data and then audited.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use crate::audit::{Check, Report};
use crate::error::{invalid, Error, Result};
use crate::multifold::{
    all_corners, corner_code, corner_of, is_homotopically_discrete, truncate_nfold_map, NFoldCat, NFoldMap,
};
use crate::trackcat::{TrackCatN, TrackMap};

/// `ℤ/d₁ ⊕ … ⊕ ℤ/d_k ⊕ ℤ^r` with `1 < d₁ | d₂ | …`; a factor `0` stands for `ℤ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbGroup {
    factors: Vec<u64>,
}

impl TryFrom<Vec<u64>> for AbGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        AbGroup::from_invariant_factors(v)
    }
}

impl From<AbGroup> for Vec<u64> {
    fn from(g: AbGroup) -> Self {
        g.factors
    }
}

fn prime_powers(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

impl AbGroup {
    /// Canonical form of a direct sum of cyclic groups of the given orders.
    pub fn new(orders: &[u64]) -> Self {
        let mut free = 0;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &d in orders {
            match d {
                0 => free += 1,
                1 => {}
                _ => {
                    for (p, e) in prime_powers(d) {
                        by_prime.entry(p).or_default().push(e);
                    }
                }
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (t, e) in es.into_iter().enumerate() {
                factors[len - 1 - t] *= p.pow(e);
            }
        }
        factors.extend(std::iter::repeat_n(0, free));
        AbGroup { factors }
    }

    /// Accepts only a canonical factor list.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        let g = AbGroup::new(&factors);
        if g.factors != factors {
            return invalid(format!("{factors:?} is not a divisibility chain followed by free factors"));
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        AbGroup { factors: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        AbGroup::new(&[d])
    }

    pub fn integers() -> Self {
        AbGroup { factors: vec![0] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<u64> {
        self.factors.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &d| if d == 0 { None } else { acc.checked_mul(d) })
    }

    pub fn reduce(&self, x: &mut [i64]) {
        for (v, &d) in x.iter_mut().zip(&self.factors) {
            if d != 0 {
                *v = v.rem_euclid(d as i64);
            }
        }
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&mut s);
        s
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        let mut s: Vec<i64> = x.iter().map(|a| -a).collect();
        self.reduce(&mut s);
        s
    }

    /// Mixed-radix position of a reduced element of a finite group; zero is `0`.
    pub fn index_of(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.factors).fold(0usize, |acc, (&v, &d)| acc * d as usize + v as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % d as usize) as i64;
            idx /= d as usize;
        }
        out
    }

    pub fn fmt_element(&self, x: &[i64]) -> String {
        match x.len() {
            0 => "0".into(),
            1 => x[0].to_string(),
            _ => format!("({})", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    /// Elements of a finite group, or the box `[-r, r]` in free coordinates.
    fn sample(&self, r: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.factors {
            let range: Vec<i64> = if d == 0 { (-r..=r).collect() } else { (0..d as i64).collect() };
            out = out.into_iter().flat_map(|p| range.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
        }
        out
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rank();
        let mut parts = Vec::new();
        match r {
            0 => {}
            1 => parts.push("Z".to_string()),
            _ => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion().iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Integer matrix acting between fibres; rows index target factors.
pub type IntMat = Vec<Vec<i64>>;

fn apply(a: &IntMat, x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum()).collect()
}

fn identity_mat(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn zero_mat(rows: usize, cols: usize) -> IntMat {
    vec![vec![0; cols]; rows]
}

/// A homomorphism `⊕ℤ/s_j → ⊕ℤ/t_i` needs `t_i | a_ij s_j`.
fn well_defined(a: &IntMat, src: &AbGroup, tgt: &AbGroup) -> bool {
    if a.len() != tgt.factors.len() || a.iter().any(|r| r.len() != src.factors.len()) {
        return false;
    }
    a.iter().zip(&tgt.factors).all(|(row, &t)| {
        row.iter().zip(&src.factors).all(|(&c, &s)| match (t, s) {
            (0, 0) => true,
            (0, _) => c == 0,
            (_, s) => (c as i128 * s as i128).rem_euclid(t as i128) == 0,
        })
    })
}

/// A group object in a slice over a finite set of base points, given by tables.
/// Missing `mu` entries mark pairs outside a sampled carrier.
#[derive(Debug, Clone)]
pub struct AbGroupObject {
    pub labels: Vec<String>,
    pub base: usize,
    pub rho: Vec<usize>,
    pub sigma: Vec<usize>,
    pub mu: HashMap<(usize, usize), usize>,
    pub inv: Vec<usize>,
}

impl AbGroupObject {
    /// Axioms (a) associativity, (b) commutativity, (c) inverse, (d) zero, plus `μΔφ = φ`,
    /// by element chase over every fibre.
    pub fn check(&self) -> Report {
        let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); self.base];
        for (x, &b) in self.rho.iter().enumerate() {
            fibres[b].push(x);
        }
        let mu = |x: usize, y: usize| self.mu.get(&(x, y)).copied();
        let l = |x: usize| self.labels[x].as_str();
        let mut rep = Report::default();

        let sect = (0..self.base).find(|&b| self.rho[self.sigma[b]] != b);
        rep.push(match sect {
            None => Check::pass("rho sigma = id"),
            Some(b) => Check::fail("rho sigma = id", format!("base point {b}")),
        });
        let over = self.mu.iter().find(|(&(x, _), &z)| self.rho[z] != self.rho[x]);
        rep.push(match over {
            None => Check::pass("mu over base"),
            Some((&(x, y), _)) => Check::fail("mu over base", format!("mu({}, {}) leaves the fibre", l(x), l(y))),
        });

        let mut assoc = None;
        'a: for f in &fibres {
            for &x in f {
                for &y in f {
                    let Some(xy) = mu(x, y) else { continue };
                    for &z in f {
                        let (Some(yz), true) = (mu(y, z), true) else { continue };
                        if let (Some(l1), Some(r1)) = (mu(xy, z), mu(x, yz)) {
                            if l1 != r1 {
                                assoc = Some(format!(
                                    "({} + {}) + {} = {} but {} + ({} + {}) = {}",
                                    l(x),
                                    l(y),
                                    l(z),
                                    l(l1),
                                    l(x),
                                    l(y),
                                    l(z),
                                    l(r1)
                                ));
                                break 'a;
                            }
                        }
                    }
                }
            }
        }
        rep.push(match assoc {
            None => Check::pass("(a) associativity"),
            Some(w) => Check::fail("(a) associativity", w),
        });

        let mut comm = None;
        'b: for f in &fibres {
            for &x in f {
                for &y in f {
                    if let (Some(a), Some(b)) = (mu(x, y), mu(y, x)) {
                        if a != b {
                            comm = Some(format!("{} + {} = {} but {} + {} = {}", l(x), l(y), l(a), l(y), l(x), l(b)));
                            break 'b;
                        }
                    }
                }
            }
        }
        rep.push(match comm {
            None => Check::pass("(b) commutativity"),
            Some(w) => Check::fail("(b) commutativity", w),
        });

        let zero_of = |x: usize| self.sigma[self.rho[x]];
        let inverse = (0..self.rho.len()).find(|&x| mu(x, self.inv[x]).is_some_and(|z| z != zero_of(x)));
        rep.push(match inverse {
            None => Check::pass("(c) inverse"),
            Some(x) => {
                Check::fail("(c) inverse", format!("{} + i({}) = {}", l(x), l(x), l(mu(x, self.inv[x]).unwrap())))
            }
        });
        let zero = (0..self.rho.len()).find(|&x| mu(x, zero_of(x)).is_some_and(|z| z != x));
        rep.push(match zero {
            None => Check::pass("(d) zero"),
            Some(x) => Check::fail("(d) zero", format!("{} + 0 = {}", l(x), l(mu(x, zero_of(x)).unwrap()))),
        });
        let diag = (0..self.base).find(|&b| mu(self.sigma[b], self.sigma[b]) != Some(self.sigma[b]));
        rep.push(match diag {
            None => Check::pass("mu Delta phi = phi"),
            Some(b) => Check::fail("mu Delta phi = phi", format!("base point {b}")),
        });
        rep
    }
}

/// A module over a 1-track category `Q`: fibres over the 2-cells of `Q` and the
/// matrices composing fibre elements along composable pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BeckModule {
    base: TrackCatN,
    fibres: Vec<AbGroup>,
    /// Over pairs in the composition direction: `(A, B)` with `m∘n ↦ A·m_first + B·m_second`.
    horiz: Vec<(IntMat, IntMat)>,
    /// Over vertically composable pairs, same convention.
    vert: Vec<(IntMat, IntMat)>,
}

const C11: [u8; 2] = [1, 1];
const C21: [u8; 2] = [2, 1];
const C12: [u8; 2] = [1, 2];

/// `(first, second, composite)` of a pair at level 2 in direction `dir`.
fn pair_parts(q: &NFoldCat, dir: usize, k: &[u8], p: usize) -> (usize, usize, usize) {
    (q.face(dir, 2, k, p), q.face(dir, 0, k, p), q.face(dir, 1, k, p))
}

impl BeckModule {
    pub fn new(
        base: TrackCatN,
        fibres: Vec<AbGroup>,
        horiz: Vec<(IntMat, IntMat)>,
        vert: Vec<(IntMat, IntMat)>,
    ) -> Result<Self> {
        if base.dim() != 1 {
            return Err(Error::Precondition("modules live over 1-track categories".into()));
        }
        let q = base.nfold();
        if fibres.len() != q.size(&C11) || horiz.len() != q.size(&C21) || vert.len() != q.size(&C12) {
            return invalid("fibre table does not match the cells of the base");
        }
        for (dir, k, table) in [(0, &C21, &horiz), (1, &C12, &vert)] {
            for (p, (a, b)) in table.iter().enumerate() {
                let (f, g, c) = pair_parts(q, dir, k, p);
                if !well_defined(a, &fibres[f], &fibres[c]) || !well_defined(b, &fibres[g], &fibres[c]) {
                    return invalid(format!(
                        "action matrices over the pair `{}` in direction {dir} are not homomorphisms between the fibres",
                        q.labels(k)[p]
                    ));
                }
            }
        }
        Ok(BeckModule { base, fibres, horiz, vert })
    }

    /// Fibres assigned by `fibre(cell)`; matrices are identities between equal groups and zero otherwise.
    pub fn from_fibres(base: &TrackCatN, fibre: impl Fn(usize) -> AbGroup) -> Result<Self> {
        let q = base.nfold();
        let fibres: Vec<AbGroup> = (0..q.size(&C11)).map(fibre).collect();
        let mat = |src: &AbGroup, tgt: &AbGroup| {
            if src == tgt {
                identity_mat(src.factors.len())
            } else {
                zero_mat(tgt.factors.len(), src.factors.len())
            }
        };
        let table = |dir: usize, k: &[u8]| -> Vec<(IntMat, IntMat)> {
            (0..q.size(k))
                .map(|p| {
                    let (f, g, c) = pair_parts(q, dir, k, p);
                    (mat(&fibres[f], &fibres[c]), mat(&fibres[g], &fibres[c]))
                })
                .collect()
        };
        let horiz = table(0, &C21);
        let vert = table(1, &C12);
        BeckModule::new(base.clone(), fibres, horiz, vert)
    }

    /// `M₁ = Q₁ × A` with componentwise structure.
    pub fn constant(base: &TrackCatN, a: &AbGroup) -> Result<Self> {
        BeckModule::from_fibres(base, |_| a.clone())
    }

    /// `M = Q`, `ρ = id`.
    pub fn zero(base: &TrackCatN) -> Result<Self> {
        BeckModule::from_fibres(base, |_| AbGroup::trivial())
    }

    /// Fibre `a` over 2-cells between distinct objects, trivial over endo-cells.
    pub fn off_diagonal(base: &TrackCatN, a: &AbGroup) -> Result<Self> {
        let q = base.nfold();
        BeckModule::from_fibres(base, |c| {
            if q.face(0, 1, &C11, c) != q.face(0, 0, &C11, c) {
                a.clone()
            } else {
                AbGroup::trivial()
            }
        })
    }

    pub fn base(&self) -> &TrackCatN {
        &self.base
    }

    pub fn fibres(&self) -> &[AbGroup] {
        &self.fibres
    }

    pub fn horizontal(&self) -> &[(IntMat, IntMat)] {
        &self.horiz
    }

    pub fn vertical(&self) -> &[(IntMat, IntMat)] {
        &self.vert
    }

    pub fn is_finite(&self) -> bool {
        self.fibres.iter().all(|g| g.order().is_some())
    }

    /// The same fibre group over every 2-cell, if there is one.
    pub fn constant_fibre(&self) -> Option<&AbGroup> {
        let first = self.fibres.first()?;
        let all_same = self.fibres.iter().all(|g| g == first);
        let ident = |t: &[(IntMat, IntMat)]| t.iter().all(|(a, b)| *a == identity_mat(first.factors.len()) && a == b);
        (all_same && ident(&self.horiz) && ident(&self.vert)).then_some(first)
    }

    /// The carrier `M₁ → Q₁` with its tables; free fibres are sampled in a box.
    pub fn group_object(&self) -> AbGroupObject {
        let mut labels = Vec::new();
        let mut rho = Vec::new();
        let mut index: HashMap<(usize, Vec<i64>), usize> = HashMap::new();
        let ql = self.base.nfold().labels(&C11);
        for (c, g) in self.fibres.iter().enumerate() {
            for x in g.sample(2) {
                index.insert((c, x.clone()), labels.len());
                labels.push(format!("{}|{}", ql[c], g.fmt_element(&x)));
                rho.push(c);
            }
        }
        let mut elems: Vec<(usize, Vec<i64>)> = vec![(0, vec![]); labels.len()];
        for (k, &v) in &index {
            elems[v] = k.clone();
        }
        let sigma = (0..self.fibres.len()).map(|c| index[&(c, self.fibres[c].zero())]).collect();
        let mut mu = HashMap::new();
        let mut inv = Vec::with_capacity(elems.len());
        for (xi, (c, x)) in elems.iter().enumerate() {
            let g = &self.fibres[*c];
            inv.push(index.get(&(*c, g.neg(x))).copied().unwrap_or(xi));
            for (yi, (c2, y)) in elems.iter().enumerate() {
                if c2 == c {
                    if let Some(&z) = index.get(&(*c, g.add(x, y))) {
                        mu.insert((xi, yi), z);
                    }
                }
            }
        }
        AbGroupObject { labels, base: self.fibres.len(), rho, sigma, mu, inv }
    }
}

/// `f*M`: fibres and actions read off through `f`.
pub fn pullback_module(f: &TrackMap, w: &TrackCatN, m: &BeckModule) -> Result<BeckModule> {
    f.check(w, &m.base)?;
    let fibres = f.map.at(&C11).iter().map(|&c| m.fibres[c].clone()).collect();
    let horiz = f.map.at(&C21).iter().map(|&p| m.horiz[p].clone()).collect();
    let vert = f.map.at(&C12).iter().map(|&p| m.vert[p].clone()).collect();
    BeckModule::new(w.clone(), fibres, horiz, vert)
}

/// Module axioms: `M` is an internal groupoid with `ρ`, `φ` internal maps, `μ` and `i`
/// internal (additivity of every structure map), and the group-object axioms on `M₁`.
pub fn check_module_axioms(m: &BeckModule) -> Report {
    let mut rep = Report::default();
    if m.is_finite() {
        match build_em(m, 1) {
            Ok(e) => {
                rep.push(Check::from_result("structure", Ok(())));
                rep.push(Check::from_result(
                    "groupoid",
                    e.e.is_groupoid_in(1).map_err(|r| Error::Validation(r.to_string())),
                ));
                rep.checks.extend(e.section_checks());
                rep.push(e.additivity_audit());
            }
            Err(err) => rep.push(Check::fail("structure", err.to_string())),
        }
    } else {
        rep.push(Check::pass("structure"));
    }
    rep.checks.extend(m.group_object().check().checks);
    rep
}

/// An element of `E⁽ⁿ⁾` at some corner: a base element and a grid of fibre indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct EmKey {
    q: usize,
    grid: Vec<u32>,
}

struct CornerInfo {
    /// Grid axes `[k₀, k₁, …, k_n]`, empty when the corner carries only base data.
    shape: Vec<usize>,
    positions: Vec<Vec<usize>>,
}

struct EmBuilder<'a> {
    q: &'a NFoldCat,
    m: &'a BeckModule,
    n: usize,
    corners: Vec<CornerInfo>,
    /// `cells[code][q][position]`: the 2-cell of `Q` under each grid position.
    cells: Vec<Vec<Vec<usize>>>,
}

fn flat_index(shape: &[usize], pos: &[usize]) -> usize {
    pos.iter().zip(shape).fold(0, |acc, (&p, &l)| acc * l + p)
}

impl<'a> EmBuilder<'a> {
    fn new(q: &'a NFoldCat, m: &'a BeckModule, n: usize) -> Self {
        let mut corners = Vec::new();
        let mut cells = Vec::new();
        for k in all_corners(n + 1) {
            let mut shape: Vec<usize> = k.iter().map(|&v| v as usize).collect();
            if shape.contains(&0) {
                shape.clear();
            }
            let mut positions = vec![vec![]];
            if shape.is_empty() {
                positions.clear();
            }
            for &len in &shape {
                positions =
                    positions.into_iter().flat_map(|p| (0..len).map(move |i| [p.clone(), vec![i]].concat())).collect();
            }
            let qk = [k[0], k[n]];
            let cs = (0..q.size(&qk))
                .map(|e| positions.iter().map(|p| Self::basic_cell(q, qk, e, p[0], p[n])).collect())
                .collect();
            corners.push(CornerInfo { shape, positions });
            cells.push(cs);
        }
        EmBuilder { q, m, n, corners, cells }
    }

    fn basic_cell(q: &NFoldCat, qk: [u8; 2], mut e: usize, a: usize, b: usize) -> usize {
        let mut c = qk;
        if c[0] == 2 {
            e = q.face(0, if a == 0 { 2 } else { 0 }, &c, e);
            c[0] = 1;
        }
        if c[1] == 2 {
            e = q.face(1, if b == 0 { 2 } else { 0 }, &c, e);
        }
        e
    }

    fn info(&self, k: &[u8]) -> &CornerInfo {
        &self.corners[corner_code(k)]
    }

    fn qk(&self, k: &[u8]) -> [u8; 2] {
        [k[0], k[self.n]]
    }

    fn fibre(&self, k: &[u8], q: usize, pi: usize) -> &AbGroup {
        &self.m.fibres[self.cells[corner_code(k)][q][pi]]
    }

    fn keys(&self, k: &[u8]) -> Vec<EmKey> {
        let npos = self.info(k).positions.len();
        let mut out = Vec::new();
        for q in 0..self.q.size(&self.qk(k)) {
            let mut grids: Vec<Vec<u32>> = vec![vec![]];
            for pi in 0..npos {
                let o = self.fibre(k, q, pi).order().expect("finite fibres") as u32;
                grids = grids.into_iter().flat_map(|g| (0..o).map(move |v| [g.clone(), vec![v]].concat())).collect();
            }
            out.extend(grids.into_iter().map(|grid| EmKey { q, grid }));
        }
        out.sort();
        out
    }

    fn value(&self, k: &[u8], key: &EmKey, pi: usize) -> Vec<i64> {
        self.fibre(k, key.q, pi).element(key.grid[pi] as usize)
    }

    fn value_at(&self, k: &[u8], key: &EmKey, pos: &[usize]) -> Vec<i64> {
        self.value(k, key, flat_index(&self.info(k).shape, pos))
    }

    fn encode(&self, k: &[u8], q: usize, vals: impl Fn(&[usize], &AbGroup) -> Vec<i64>) -> EmKey {
        let info = self.info(k);
        let grid = info
            .positions
            .iter()
            .enumerate()
            .map(|(pi, p)| {
                let g = self.fibre(k, q, pi);
                let mut v = vals(p, g);
                g.reduce(&mut v);
                g.index_of(&v) as u32
            })
            .collect();
        EmKey { q, grid }
    }

    fn base_face(&self, dir: usize, i: usize, k: &[u8], q: usize) -> usize {
        let qk = self.qk(k);
        if dir == 0 {
            self.q.face(0, i, &qk, q)
        } else if dir == self.n {
            self.q.face(1, i, &qk, q)
        } else {
            q
        }
    }

    fn base_degen(&self, dir: usize, i: usize, k: &[u8], q: usize) -> usize {
        let qk = self.qk(k);
        if dir == 0 {
            self.q.degen(0, i, &qk, q)
        } else if dir == self.n {
            self.q.degen(1, i, &qk, q)
        } else {
            q
        }
    }

    fn face(&self, dir: usize, i: usize, k: &[u8], key: &EmKey) -> EmKey {
        let mut k2 = k.to_vec();
        k2[dir] -= 1;
        let q2 = self.base_face(dir, i, k, key.q);
        let level = k[dir] as usize;
        self.encode(&k2, q2, |p, g| {
            let mut src = p.to_vec();
            if i == 0 {
                src[dir] += 1;
                return self.value_at(k, key, &src);
            }
            if i == level {
                return self.value_at(k, key, &src);
            }
            let mut second = src.clone();
            second[dir] += 1;
            let (x, y) = (self.value_at(k, key, &src), self.value_at(k, key, &second));
            let (ma, mb) = if dir == 0 {
                let b = p[self.n];
                let pe =
                    if k[self.n] == 2 { self.q.face(1, if b == 0 { 2 } else { 0 }, &[2, 2], key.q) } else { key.q };
                &self.m.horiz[pe]
            } else if dir == self.n {
                let a = p[0];
                let pe = if k[0] == 2 { self.q.face(0, if a == 0 { 2 } else { 0 }, &[2, 2], key.q) } else { key.q };
                &self.m.vert[pe]
            } else {
                return g.add(&x, &y);
            };
            apply(ma, &x).iter().zip(apply(mb, &y)).map(|(u, v)| u + v).collect()
        })
    }

    fn degen(&self, dir: usize, i: usize, k: &[u8], key: &EmKey) -> EmKey {
        let mut k2 = k.to_vec();
        k2[dir] += 1;
        let q2 = self.base_degen(dir, i, k, key.q);
        self.encode(&k2, q2, |p, g| {
            if p[dir] == i {
                g.zero()
            } else {
                let mut src = p.to_vec();
                if p[dir] > i {
                    src[dir] -= 1;
                }
                self.value_at(k, key, &src)
            }
        })
    }

    fn label(&self, k: &[u8], key: &EmKey) -> String {
        let ql = &self.q.labels(&self.qk(k))[key.q];
        if key.grid.is_empty() {
            return ql.clone();
        }
        let vals: Vec<String> =
            (0..key.grid.len()).map(|pi| self.fibre(k, key.q, pi).fmt_element(&self.value(k, key, pi))).collect();
        format!("{ql}|{}", vals.join(","))
    }

    /// Concatenated fibre coordinates of every element at a corner, and the moduli per base element.
    fn flat_values(&self, k: &[u8], keys: &[EmKey]) -> (Vec<Vec<i64>>, Vec<Vec<u64>>) {
        let npos = self.info(k).positions.len();
        let moduli = (0..self.q.size(&self.qk(k)))
            .map(|q| (0..npos).flat_map(|pi| self.fibre(k, q, pi).factors.clone()).collect())
            .collect();
        let vals = keys.iter().map(|key| (0..npos).flat_map(|pi| self.value(k, key, pi)).collect()).collect();
        (vals, moduli)
    }
}

/// `d⁽ⁿ⁾Q`: `Q` made constant in `n - 1` new directions placed before its groupoid direction.
pub fn discrete_power(q: &NFoldCat, n: usize) -> NFoldCat {
    let mut x = q.clone();
    for _ in 1..n {
        x = x.discrete_last();
    }
    if n <= 1 {
        return x;
    }
    let mut order = vec![0];
    order.extend(2..=n);
    order.push(1);
    x.permute(&order)
}

/// `E⁽ⁿ⁾(Q,M)` as an `(n+1)`-fold category whose first direction is composition in `Cat_O`,
/// directions `1..n-1` are bar constructions on the fibres and direction `n` is the
/// groupoid direction of `Q`. `n = 1` gives `M` itself.
#[derive(Debug, Clone)]
pub struct EMObject {
    pub n: usize,
    pub module: BeckModule,
    pub e: NFoldCat,
    pub dq: NFoldCat,
    pub rho: NFoldMap,
    pub phi: NFoldMap,
    keys: Vec<Vec<EmKey>>,
}

pub fn build_em(m: &BeckModule, n: usize) -> Result<EMObject> {
    if n == 0 {
        return Err(Error::Precondition("EM objects start at n = 1".into()));
    }
    if !m.is_finite() {
        return Err(Error::Precondition("materializing an EM object needs finite fibres".into()));
    }
    let q = m.base.nfold();
    let b = EmBuilder::new(q, m, n);
    let keys: Vec<Vec<EmKey>> = all_corners(n + 1).map(|k| b.keys(&k)).collect();
    let e = NFoldCat::build(
        n + 1,
        |k| keys[corner_code(k)].clone(),
        |d, i, k, key| b.face(d, i, k, key),
        |d, i, k, key| b.degen(d, i, k, key),
        |k, key| b.label(k, key),
    )
    .map_err(|err| Error::Validation(format!("E({n}) is not an (n+1)-fold category: {err}")))?;
    let dq = discrete_power(q, n);
    let rho = NFoldMap { maps: keys.iter().map(|ks| ks.iter().map(|key| key.q).collect()).collect() };
    let phi = NFoldMap {
        maps: all_corners(n + 1)
            .map(|k| {
                let ks = &keys[corner_code(&k)];
                (0..dq.size(&k))
                    .map(|qq| {
                        let z = b.encode(&k, qq, |_, g| g.zero());
                        ks.binary_search(&z).expect("zero section lands in E")
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(EMObject { n, module: m.clone(), e, dq, rho, phi, keys })
}

/// `E⁽²⁾(Q,M)`, the internal groupoid with arrows `M`, objects `Q` and composition `μ`.
pub fn build_em2(m: &BeckModule) -> Result<EMObject> {
    build_emn(m, 2)
}

pub fn build_emn(m: &BeckModule, n: usize) -> Result<EMObject> {
    if n < 2 {
        return Err(Error::Precondition("E(n) needs n >= 2".into()));
    }
    let axioms = check_module_axioms(m);
    if let Some(f) = axioms.failures().first() {
        return invalid(format!("module fails {}: {}", f.name, f.witness.clone().unwrap_or_default()));
    }
    build_em(m, n)
}

/// Morphisms with endpoints and the composition table of one level category, by label.
type LevelSig = (Vec<(String, String, String)>, Vec<(String, String, String)>);

fn level_signature(x: &NFoldCat, rest: &[u8]) -> LevelSig {
    let at = |v: u8| -> Vec<u8> { [vec![v], rest.to_vec()].concat() };
    let (k0, k1, k2) = (at(0), at(1), at(2));
    let obj = x.labels(&k0);
    let mor = x.labels(&k1);
    let mut ms: Vec<_> = (0..x.size(&k1))
        .map(|e| (mor[e].clone(), obj[x.face(0, 1, &k1, e)].clone(), obj[x.face(0, 0, &k1, e)].clone()))
        .collect();
    let mut cs: Vec<_> = (0..x.size(&k2))
        .map(|p| {
            (mor[x.face(0, 2, &k2, p)].clone(), mor[x.face(0, 0, &k2, p)].clone(), mor[x.face(0, 1, &k2, p)].clone())
        })
        .collect();
    ms.sort();
    cs.sort();
    (ms, cs)
}

impl EMObject {
    pub fn corner_keys(&self, k: &[u8]) -> usize {
        self.keys[corner_code(k)].len()
    }

    /// Replaces one element label, leaving the structure intact.
    pub fn with_label(&self, k: &[u8], x: usize, label: String) -> EMObject {
        let mut c = self.clone();
        c.e = self.e.with_label(k, x, label);
        c
    }

    fn section_checks(&self) -> Vec<Check> {
        let rho_phi = self.phi.compose(&self.rho) == NFoldMap::identity(&self.dq);
        vec![
            Check::from_result("rho internal", self.rho.check(&self.e, &self.dq)),
            Check::from_result("phi internal", self.phi.check(&self.dq, &self.e)),
            if rho_phi {
                Check::pass("rho phi = id")
            } else {
                Check::fail("rho phi = id", "section is not split".into())
            },
        ]
    }

    /// Every face and degeneracy restricts to homomorphisms between fibres over `dⁿQ`,
    /// so `μ` and `i` are maps of n-fold objects. On each fibre a map `f` is checked to
    /// satisfy `f(x) = Σ x_j f(e_j)` for all `x`, with `d_j f(e_j) = 0`, which is
    /// equivalent to additivity.
    pub fn additivity_audit(&self) -> Check {
        let b = EmBuilder::new(self.module.base.nfold(), &self.module, self.n);
        let nd = self.n + 1;
        let flats: Vec<_> = all_corners(nd).map(|k| b.flat_values(&k, &self.keys[corner_code(&k)])).collect();
        for k in all_corners(nd) {
            let code = corner_code(&k);
            let ks = &self.keys[code];
            let (vals, moduli) = &flats[code];
            let mut maps: Vec<(&[usize], Vec<u8>, String, usize)> = Vec::new();
            for dir in 0..nd {
                if k[dir] >= 1 {
                    for i in 0..=k[dir] as usize {
                        let mut t = k.clone();
                        t[dir] -= 1;
                        maps.push((self.e.face_map(dir, i, &k), t, format!("d{i}"), dir));
                    }
                }
                if k[dir] <= 1 {
                    for i in 0..=k[dir] as usize {
                        let mut t = k.clone();
                        t[dir] += 1;
                        maps.push((self.e.degen_map(dir, i, &k), t, format!("s{i}"), dir));
                    }
                }
            }
            for block in ks.chunk_by(|x, y| x.q == y.q) {
                let start = ks.binary_search(&block[0]).expect("block in keys");
                let q = block[0].q;
                let m = &moduli[q];
                let zero = start;
                // generators e_j sit at offsets with a single coordinate equal to 1
                let gens: Vec<(usize, usize)> = (0..m.len())
                    .map(|j| {
                        let want: Vec<i64> = (0..m.len()).map(|t| i64::from(t == j)).collect();
                        (j, start + (0..block.len()).find(|&x| vals[start + x] == want).expect("generator present"))
                    })
                    .collect();
                for (f, t, nm, dir) in &maps {
                    let tcode = corner_code(t);
                    let tk = &self.keys[tcode];
                    let (tvals, tmod) = &flats[tcode];
                    let tq = tk[f[zero]].q;
                    let tm = &tmod[tq];
                    let fail = |what: &str| {
                        Check::fail(
                            "additivity",
                            format!("{nm} in direction {dir} at {k:?}: {what} over `{}`", self.e.labels(&k)[zero]),
                        )
                    };
                    if tvals[f[zero]].iter().any(|&v| v != 0) {
                        return fail("zero not preserved");
                    }
                    for &(j, g) in &gens {
                        if tk[f[g]].q != tq {
                            return fail("fibre not preserved");
                        }
                        if m[j] != 0 {
                            let ok = tvals[f[g]]
                                .iter()
                                .zip(tm)
                                .all(|(&v, &d)| d != 0 && (v * m[j] as i64) % d as i64 == 0 || v == 0);
                            if !ok {
                                return fail("torsion not preserved");
                            }
                        }
                    }
                    let mut acc = vec![0i64; tm.len()];
                    for x in start..start + block.len() {
                        acc.iter_mut().for_each(|a| *a = 0);
                        for &(j, g) in &gens {
                            let c = vals[x][j];
                            if c != 0 {
                                for (a, &v) in acc.iter_mut().zip(&tvals[f[g]]) {
                                    *a += c * v;
                                }
                            }
                        }
                        for (a, &d) in acc.iter_mut().zip(tm) {
                            if d != 0 {
                                *a = a.rem_euclid(d as i64);
                            }
                        }
                        if tk[f[x]].q != tq || tvals[f[x]] != acc {
                            return fail("not additive");
                        }
                    }
                }
            }
        }
        Check::pass("additivity")
    }

    /// Element-chase of the group-object axioms at one corner.
    pub fn group_object_at(&self, k: &[u8]) -> AbGroupObject {
        let b = EmBuilder::new(self.module.base.nfold(), &self.module, self.n);
        let ks = &self.keys[corner_code(k)];
        let ix = |key: &EmKey| ks.binary_search(key).expect("closed under the group law");
        let mut mu = HashMap::new();
        let mut inv = Vec::with_capacity(ks.len());
        let mut start = 0;
        while start < ks.len() {
            let q = ks[start].q;
            let end = start + ks[start..].iter().take_while(|x| x.q == q).count();
            for x in start..end {
                let neg = b.encode(k, q, |p, g| g.neg(&b.value_at(k, &ks[x], p)));
                inv.push(ix(&neg));
                for y in start..end {
                    let s = b.encode(k, q, |p, g| g.add(&b.value_at(k, &ks[x], p), &b.value_at(k, &ks[y], p)));
                    mu.insert((x, y), ix(&s));
                }
            }
            start = end;
        }
        AbGroupObject {
            labels: self.e.labels(k).to_vec(),
            base: self.dq.size(k),
            rho: self.rho.at(k).to_vec(),
            sigma: self.phi.at(k).to_vec(),
            mu,
            inv,
        }
    }

    /// Corner table: with the composition direction at level 1, the entry at
    /// `(1,…,1)` is `M₁`, entries with last index 0 are `Q₀`, all others `Q₁`.
    pub fn multinerve_table(&self) -> Check {
        let n = self.n;
        let q = self.module.base.nfold();
        let m1 = match build_em(&self.module, 1) {
            Ok(m) => m.e,
            Err(e) => return Check::fail("(c) multinerve table", e.to_string()),
        };
        for code in 0..2usize.pow(n as u32) {
            let rest: Vec<u8> = (0..n).map(|d| ((code >> (n - 1 - d)) & 1) as u8).collect();
            let got = level_signature(&self.e, &rest);
            let (want, what) = if rest[n - 1] == 0 {
                (level_signature(q, &[0]), "Q0")
            } else if rest.iter().all(|&v| v == 1) {
                (level_signature(&m1, &[1]), "M1")
            } else {
                (level_signature(q, &[1]), "Q1")
            };
            if got != want {
                let idx = got.0.iter().zip(&want.0).position(|(a, b)| a != b).unwrap_or(got.0.len().min(want.0.len()));
                return Check::fail(
                    "(c) multinerve table",
                    format!("entry {rest:?} should be {what}; first mismatch at morphism {idx}"),
                );
            }
        }
        Check::pass("(c) multinerve table")
    }

    /// `p⁽ⁿ⁻¹⁾` along the last direction gives `d⁽ⁿ⁻¹⁾(pQ)`.
    pub fn truncation_last(&self) -> Result<bool> {
        let (pe, _) = self.e.truncate_p()?;
        let (pq, _) = self.module.base.nfold().truncate_p()?;
        let mut want = pq;
        for _ in 1..self.n {
            want = want.discrete_last();
        }
        Ok(pe == want)
    }

    /// `p⁽ⁿ⁻¹⁾` along a module direction gives `d⁽ⁿ⁻¹⁾Q`.
    pub fn truncation_module(&self) -> Result<bool> {
        if self.n < 2 {
            return Err(Error::Precondition("no module direction at n = 1".into()));
        }
        let mut order = vec![0];
        order.extend(2..=self.n);
        order.push(1);
        let (pe, _) = self.e.permute(&order).truncate_p()?;
        let want = discrete_power(self.module.base.nfold(), self.n - 1).map_labels(|l| format!("[{l}]"));
        Ok(pe == want)
    }
}

/// Largest fibre (over one point of `dⁿQ`) for which the axioms are chased element by element.
const CHASE_LIMIT: usize = 64;

/// The three clauses: (a) n-fold groupoid, weakly globular hom-wise; (b) abelian group
/// object over `dⁿQ`; (c) the corner table, plus both truncation readings.
pub fn verify_em(em: &EMObject) -> Report {
    let mut rep = Report::default();
    let n = em.n;
    let groupoid = (1..=n).try_for_each(|d| em.e.is_groupoid_in(d)).map_err(|r| Error::Validation(r.to_string()));
    rep.push(Check::from_result("(a) n-fold groupoid", groupoid));
    let track = TrackCatN::from_nfold(em.module.base.objects().to_vec(), em.e.clone()).map(|_| ());
    rep.push(Check::from_result("(a) hom-wise weak globularity", track));
    rep.checks.extend(em.section_checks());
    rep.push(em.additivity_audit());
    let mut chased = Report::default();
    for k in all_corners(n + 1) {
        let ks = &em.keys[corner_code(&k)];
        let widest = ks.chunk_by(|a, b| a.q == b.q).map(|c| c.len()).max().unwrap_or(0);
        if widest <= CHASE_LIMIT {
            for c in em.group_object_at(&k).check().checks {
                if !c.ok {
                    chased.push(Check { name: format!("(b) {} at {k:?}", c.name), ..c });
                }
            }
        }
    }
    if chased.checks.is_empty() {
        rep.push(Check::pass("(b) abelian group object"));
    } else {
        rep.checks.extend(chased.checks);
    }
    rep.push(em.multinerve_table());
    let tr = |name: &str, r: Result<bool>| match r {
        Ok(true) => Check::pass(name),
        Ok(false) => Check::fail(name, "truncation differs".into()),
        Err(e) => Check::fail(name, e.to_string()),
    };
    rep.push(tr("p along last direction = d(pQ)", em.truncation_last()));
    if n >= 2 {
        rep.push(tr("p along module direction = dQ", em.truncation_module()));
    }
    rep
}

/// `E⁽ⁿ⁾(W, f*M)` against the pullback of `E⁽ⁿ⁾(Q,M)` along `d⁽ⁿ⁾f`: the comparison map
/// is an n-fold map and a bijection at every corner.
pub fn pullback_em_audit(f: &TrackMap, w: &TrackCatN, m: &BeckModule, n: usize) -> Result<Check> {
    let fm = pullback_module(f, w, m)?;
    let ew = build_em(&fm, n)?;
    let eq = build_em(m, n)?;
    let dw = discrete_power(w.nfold(), n);
    let df = |k: &[u8], x: usize| f.map.at(&[k[0], k[n]])[x];
    let pairs = |k: &[u8]| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for x in 0..dw.size(k) {
            for e in 0..eq.e.size(k) {
                if df(k, x) == eq.rho.at(k)[e] {
                    v.push((x, e));
                }
            }
        }
        v
    };
    let p = NFoldCat::build(
        n + 1,
        pairs,
        |d, i, k, &(x, e)| (dw.face(d, i, k, x), eq.e.face(d, i, k, e)),
        |d, i, k, &(x, e)| (dw.degen(d, i, k, x), eq.e.degen(d, i, k, e)),
        |_, &(x, e)| format!("({x},{e})"),
    )?;
    let mut maps = Vec::new();
    for k in all_corners(n + 1) {
        let pk = pairs(&k);
        let ks = &ew.keys[corner_code(&k)];
        let target = &eq.keys[corner_code(&k)];
        let mut row = Vec::with_capacity(ks.len());
        for key in ks {
            let image = EmKey { q: df(&k, key.q), grid: key.grid.clone() };
            let e =
                target.binary_search(&image).map_err(|_| Error::Validation(format!("no image for a cell at {k:?}")))?;
            row.push(pk.binary_search(&(key.q, e)).expect("pair lies over the base"));
        }
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != pk.len() || row.len() != pk.len() {
            return Ok(Check::fail("pullback square", format!("comparison is not bijective at {k:?}")));
        }
        maps.push(row);
    }
    let cmp = NFoldMap { maps };
    Ok(Check::from_result("pullback square", cmp.check(&ew.e, &p)))
}

/// `j: dZ₀ → Z` and the restricted module `j*M`. Requires homotopically discrete hom-objects.
pub fn j_restriction(z: &TrackCatN, m: &BeckModule) -> Result<(TrackCatN, TrackMap, BeckModule)> {
    if z.dim() != 1 {
        return Err(Error::Precondition("j is defined for 1-track categories".into()));
    }
    for a in 0..z.objects().len() {
        for b in 0..z.objects().len() {
            if is_homotopically_discrete(&z.hom(a, b)?).is_err() {
                return Err(Error::Precondition(format!(
                    "no splitting data: hom({},{}) is not homotopically discrete",
                    z.objects()[a],
                    z.objects()[b]
                )));
            }
        }
    }
    let zx = z.nfold();
    let dz0 = TrackCatN::from_nfold(z.objects().to_vec(), zx.slice(1, 0).discrete_last())?;
    let maps = all_corners(2)
        .map(|k| {
            (0..dz0.nfold().size(&k))
                .map(|x| {
                    let mut e = x;
                    for lvl in 0..k[1] {
                        e = zx.degen(1, 0, &[k[0], lvl], e);
                    }
                    e
                })
                .collect()
        })
        .collect();
    let j = TrackMap { map: NFoldMap { maps } };
    let jm = pullback_module(&j, &dz0, m)?;
    Ok((dz0, j, jm))
}

/// Both vertical faces of the restricted carrier coincide.
pub fn j_faces_agree(jm: &BeckModule) -> Result<bool> {
    let e = build_em(jm, 1)?;
    Ok(e.e.face_map(1, 0, &C11) == e.e.face_map(1, 1, &C11))
}

/// For the split pair `ρ: M ⇄ Q: φ` with `ρ₀ = id`, `p(ρ)` is an isomorphism `pM ≅ pQ`.
pub fn split_p_invariance(m: &BeckModule) -> Result<Check> {
    let e = build_em(m, 1)?;
    let (pm, pq, pr) = truncate_nfold_map(&e.rho, &e.e, &e.dq)?;
    for code in 0..pr.maps.len() {
        let k = corner_of(code, pm.dim());
        let mut img = pr.at(&k).to_vec();
        img.sort_unstable();
        img.dedup();
        if img.len() != pm.size(&k) || img.len() != pq.size(&k) {
            return Ok(Check::fail("pB = pA", format!("p(rho) is not bijective at {k:?}")));
        }
    }
    Ok(Check::pass("pB = pA"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_factors() {
        assert_eq!(AbGroup::new(&[2, 3]).factors(), &[6]);
        assert_eq!(AbGroup::new(&[4, 2, 0, 1]).factors(), &[2, 4, 0]);
        assert_eq!(AbGroup::new(&[6, 10]).factors(), &[2, 30]);
        assert!(AbGroup::from_invariant_factors(vec![3, 2]).is_err());
        assert_eq!(AbGroup::new(&[1, 1]), AbGroup::trivial());
    }

    #[test]
    fn display() {
        assert_eq!(AbGroup::new(&[0, 0, 2]).to_string(), "Z^2 ⊕ Z/2");
        assert_eq!(AbGroup::trivial().to_string(), "0");
    }

    #[test]
    fn element_indexing_round_trips_zero() {
        let g = AbGroup::new(&[2, 4]);
        assert_eq!(g.index_of(&g.zero()), 0);
        assert_eq!(g.element(7), vec![1, 3]);
    }

    #[test]
    fn ill_defined_action_refused() {
        // ℤ/2 → ℤ/3 by 1 is not a homomorphism
        assert!(!well_defined(&vec![vec![1]], &AbGroup::cyclic(2), &AbGroup::cyclic(3)));
        assert!(well_defined(&vec![vec![3]], &AbGroup::cyclic(2), &AbGroup::cyclic(6)));
        assert!(!well_defined(&vec![vec![1]], &AbGroup::cyclic(2), &AbGroup::integers()));
    }

    #[test]
    fn em_needs_finite_fibres() {
        let m = BeckModule::constant(&crate::fixtures::t1(), &AbGroup::integers()).unwrap();
        assert_eq!(build_em(&m, 2).unwrap_err().exit_code(), 1);
    }
}
