//! The free-base replacement `v: S(X) → X` and the resulting isomorphism
//! `H^{s+1}_AQ(DX) ≅ H^s_Alg(S(X))`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::audit::{Check, Report};
use crate::beckmod::AbGroup;
use crate::cohomology::complex::{Column, TowerData};
use crate::cohomology::les::{column_cohomology, les, Fault, LesReport};
use crate::cohomology::linalg::AbGroupPresentation;
use crate::error::{Error, Result};
use crate::fincat::{counit_eval, free_category, freeness_audit, Edge, FinCat, FinGraph, Morphism};
use crate::multifold::{
    all_corners, corner_code, corner_of, is_n_equivalence, nerve_of, pullback_transfer, NFoldCat, NFoldMap,
};
use crate::trackcat::{TrackCatN, TrackMap};

#[derive(Debug, Clone)]
pub struct SXData {
    pub sx: TrackCatN,
    pub v: TrackMap,
    pub z: TrackCatN,
    pub r: TrackMap,
    pub checks: Report,
}

/// Position of `e` among the cells at `(1, kp)` with the same endpoints.
fn local_index(x: &NFoldCat, kp: &[u8], e: usize) -> usize {
    let mut k1 = vec![1u8];
    k1.extend_from_slice(kp);
    let ends = |f: usize| (x.face(0, 1, &k1, f), x.face(0, 0, &k1, f));
    let me = ends(e);
    (0..e).filter(|&f| ends(f) == me).count()
}

/// Extends a map known on the corners with entries `≤ 1` to all corners via Segal lifts.
fn segal_extend(x: &NFoldCat, y: &NFoldCat, low: impl Fn(&[u8], usize) -> Result<usize>) -> Result<NFoldMap> {
    let n = x.dim();
    let mut codes: Vec<usize> = (0..3usize.pow(n as u32)).collect();
    codes.sort_by_key(|&c| corner_of(c, n).iter().filter(|&&v| v == 2).count());
    let mut maps: Vec<Vec<usize>> = vec![Vec::new(); codes.len()];
    for code in codes {
        let k = corner_of(code, n);
        maps[code] = match k.iter().position(|&v| v == 2) {
            None => (0..x.size(&k)).map(|e| low(&k, e)).collect::<Result<_>>()?,
            Some(d) => {
                let mut k1 = k.clone();
                k1[d] = 1;
                let m1 = &maps[corner_code(&k1)];
                (0..x.size(&k))
                    .map(|e| {
                        let (f, g) = (m1[x.face(d, 2, &k, e)], m1[x.face(d, 0, &k, e)]);
                        y.segal_lift(d, &k, f, g)
                            .ok_or_else(|| Error::Validation(format!("no composite over {k:?} in the target")))
                    })
                    .collect::<Result<_>>()?
            }
        };
    }
    let f = NFoldMap { maps };
    f.check(x, y)?;
    Ok(f)
}

/// Path-fattening of a 1-track category: 1-cells become paths of generating 1-cells,
/// 2-cells `p ⇒ q` are the 2-cells between the composites. Returns `Z` and `r: Z → Y`.
pub fn path_fattening(y: &TrackCatN, bound: usize) -> Result<(TrackCatN, TrackMap)> {
    if y.dim() != 1 {
        return Err(Error::Precondition(format!("path-fattening needs a 1-track category, got n = {}", y.dim())));
    }
    let yn = y.nfold();
    let objects = y.objects().to_vec();
    let no = objects.len();
    let base = &y.to_internal().levels[0];
    let gens: Vec<usize> = (0..base.morphisms.len()).filter(|&m| !base.is_identity(m)).collect();
    let graph = FinGraph::new(
        objects.clone(),
        gens.iter()
            .map(|&m| Edge {
                id: base.morphisms[m].name.clone(),
                src: base.morphisms[m].src,
                tgt: base.morphisms[m].tgt,
            })
            .collect(),
    )?;
    let free = free_category(&graph, bound)?;
    free.to_fincat()?;
    let composite: Vec<usize> = free
        .paths
        .iter()
        .map(|(s, _, p)| counit_eval(base, &p.iter().map(|&e| gens[e]).collect::<Vec<_>>(), *s))
        .collect();
    let mut paths: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (m, (s, t, _)) in free.paths.iter().enumerate() {
        paths.entry((*s, *t)).or_default().push(m);
    }
    struct Hom {
        cells: Vec<(usize, usize, usize)>,
        index: HashMap<(usize, usize, usize), usize>,
        nerve: NFoldCat,
    }
    let mut homs: BTreeMap<(usize, usize), Hom> = BTreeMap::new();
    for (&(a, b), ps) in &paths {
        let hy = y.hom(a, b)?.to_fincat()?;
        let loc: Vec<usize> = ps.iter().map(|&m| local_index(yn, &[0], composite[m])).collect();
        let mut cells = Vec::new();
        for i in 0..ps.len() {
            cells.push((i, i, hy.identity[loc[i]]));
        }
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                for alpha in hy.hom(loc[i], loc[j]) {
                    if !(i == j && alpha == hy.identity[loc[i]]) {
                        cells.push((i, j, alpha));
                    }
                }
            }
        }
        let index: HashMap<_, _> = cells.iter().enumerate().map(|(n, &c)| (c, n)).collect();
        let cat = FinCat::from_fn(
            ps.iter().map(|&m| free.name(m)).collect(),
            cells
                .iter()
                .map(|&(i, j, alpha)| Morphism {
                    name: format!("{}:{}⇒{}", hy.morphisms[alpha].name, free.name(ps[i]), free.name(ps[j])),
                    src: i,
                    tgt: j,
                })
                .collect(),
            (0..ps.len()).collect(),
            |g, f| {
                let (i, _, alpha) = cells[f];
                let (_, j, beta) = cells[g];
                index[&(i, j, hy.compose(beta, alpha).expect("composable 2-cells"))]
            },
        )?;
        homs.insert((a, b), Hom { cells, index, nerve: nerve_of(&cat) });
    }
    let path_local = |a: usize, b: usize, m: usize| paths[&(a, b)].iter().position(|&x| x == m).expect("path listed");
    let compose1 = |a: usize, b: usize, c: usize, f: usize, g: usize| -> usize {
        let (i, j, alpha) = homs[&(a, b)].cells[f];
        let (i2, j2, beta) = homs[&(b, c)].cells[g];
        let (pab, pbc) = (&paths[&(a, b)], &paths[&(b, c)]);
        let cat = |p: usize, q: usize| free.compose(q, p).expect("bounded").expect("composable");
        let (src, tgt) = (path_local(a, c, cat(pab[i], pbc[i2])), path_local(a, c, cat(pab[j], pbc[j2])));
        let ag = y.cell_index(&[1], a, b, alpha).expect("2-cell present");
        let bg = y.cell_index(&[1], b, c, beta).expect("2-cell present");
        let h = local_index(yn, &[1], yn.compose(0, &[1, 1], ag, bg).expect("horizontal composite"));
        homs[&(a, c)].index[&(src, tgt, h)]
    };
    let nfold_homs: BTreeMap<(usize, usize), NFoldCat> = homs.iter().map(|(&k, h)| (k, h.nerve.clone())).collect();
    let unit: Vec<usize> = (0..no).map(|a| path_local(a, a, a)).collect();
    let z = TrackCatN::from_enriched(objects, nfold_homs, unit, |kp, a, b, c, f, g| match kp[0] {
        0 => path_local(a, c, free.compose(paths[&(b, c)][g], paths[&(a, b)][f]).unwrap().unwrap()),
        1 => compose1(a, b, c, f, g),
        _ => {
            let (hab, hbc) = (&homs[&(a, b)].nerve, &homs[&(b, c)].nerve);
            let first = compose1(a, b, c, hab.face(0, 2, &[2], f), hbc.face(0, 2, &[2], g));
            let second = compose1(a, b, c, hab.face(0, 0, &[2], f), hbc.face(0, 0, &[2], g));
            homs[&(a, c)].nerve.segal_lift(0, &[2], first, second).expect("composable pair")
        }
    })?;
    let zn = z.nfold();
    let map = segal_extend(zn, yn, |k, e| {
        if k[0] == 0 {
            return Ok(e);
        }
        let kp = &k[1..];
        let mut k1 = vec![1u8];
        k1.extend_from_slice(kp);
        let (a, b) = (zn.face(0, 1, &k1, e), zn.face(0, 0, &k1, e));
        let l = local_index(zn, kp, e);
        let local =
            if kp[0] == 0 { local_index(yn, &[0], composite[paths[&(a, b)][l]]) } else { homs[&(a, b)].cells[l].2 };
        y.cell_index(kp, a, b, local).ok_or_else(|| Error::Validation("fattening leaves the hom-object".into()))
    })?;
    let r = TrackMap { map };
    r.check(&z, y)?;
    Ok((z, r))
}

fn truncate_once(x: &TrackCatN) -> Result<TrackCatN> {
    TrackCatN::from_nfold(x.objects().to_vec(), x.nfold().truncate_p()?.0)
}

/// `S(X)`: path-fattening for `n = 1`, otherwise the pullback of `X` along `d Z → d p X`
/// with `Z = S(pX)`. Every claimed property is verified; a failed check is an error.
pub fn build_sx(x: &TrackCatN, bound: usize) -> Result<SXData> {
    let (sx, v, z, r, wz) = if x.dim() == 1 {
        let (z, r) = path_fattening(x, bound)?;
        (z.clone(), r.clone(), z, r, None)
    } else {
        let inner = build_sx(&truncate_once(x)?, bound)?;
        let (p, w, wz) = pullback_transfer(inner.sx.nfold(), &inner.v.map, x.nfold())?;
        let sx = TrackCatN::from_nfold(x.objects().to_vec(), p)?;
        (sx, TrackMap { map: w }, inner.sx, inner.v, Some(wz))
    };
    let mut checks = Report::default();
    checks.push(Check::from_result("p₀ of S(X) is free", freeness_audit(&sx.to_internal().levels[0])));
    checks.push(match is_n_equivalence(&v.map, sx.nfold(), x.nfold()) {
        Ok(true) => Check::pass("v is an n-equivalence"),
        Ok(false) => Check::fail("v is an n-equivalence", "some hom-fibre or truncation is not an equivalence".into()),
        Err(e) => Check::fail("v is an n-equivalence", e.to_string()),
    });
    checks.push(truncation_matches(&sx, &z, wz.as_ref()));
    if let Some(f) = checks.failures().first() {
        return Err(Error::Validation(format!(
            "S(X) construction: {} ({})",
            f.name,
            f.witness.clone().unwrap_or_default()
        )));
    }
    Ok(SXData { sx, v, z, r, checks })
}

/// `p S(X) = Z`: the projection `S(X) → d Z` descends to an isomorphism on the truncation.
fn truncation_matches(sx: &TrackCatN, z: &TrackCatN, wz: Option<&NFoldMap>) -> Check {
    let name = "p S(X) = Z";
    let Some(wz) = wz else {
        return Check::pass(name);
    };
    let run = || -> Result<()> {
        let (pp, classes) = sx.nfold().truncate_p()?;
        let m = pp.dim();
        let mut maps = Vec::new();
        for kp in all_corners(m) {
            let mut k0 = kp.clone();
            k0.push(0);
            let mut img = vec![usize::MAX; pp.size(&kp)];
            for (e, &c) in classes[corner_code(&kp)].iter().enumerate() {
                let t = wz.at(&k0)[e];
                if img[c] != usize::MAX && img[c] != t {
                    return Err(Error::Validation(format!("class {c} at {kp:?} has two images")));
                }
                img[c] = t;
            }
            let mut sorted = img.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != img.len() || img.len() != z.nfold().size(&kp) {
                return Err(Error::Validation(format!("not a bijection at {kp:?}")));
            }
            maps.push(img);
        }
        NFoldMap { maps }.check(&pp, z.nfold())
    };
    match run() {
        Ok(()) => Check::pass(name),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplacementReport {
    pub degree: usize,
    /// `H^{s+1}_AQ(DX)` from the tower of `X`.
    pub aq: AbGroupPresentation,
    /// `H^s_Alg(S(X))` from the tower of `S(X)`.
    pub alg: AbGroupPresentation,
    pub les: LesReport,
    pub checks: Vec<Check>,
}

impl ReplacementReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Compares `H^{s+1}_AQ(DX)` and `H^s_Alg(S(X))` computed from separate towers, and checks
/// that the long exact sequence of `S(X)` has a vanishing middle column and an invertible
/// connecting map in degree `s`.
pub fn replacement_iso(x: &TrackCatN, a: &AbGroup, s: usize, bound: usize) -> Result<ReplacementReport> {
    if s < 2 {
        return Err(Error::Precondition(format!("the isomorphism is claimed for s > 1, got s = {s}")));
    }
    let sxd = build_sx(x, bound)?;
    let mut checks = sxd.checks.checks.clone();
    let dx = TowerData::new(x, bound, s + 2)?;
    let (left, lc) = column_cohomology(&dx, Column::Aq, a, s + 1)?;
    checks.extend(lc);
    let ds = TowerData::new(&sxd.sx, bound, s + 2)?;
    let (right, rc) = column_cohomology(&ds, Column::Alg, a, s)?;
    checks.extend(rc);
    let (aq, alg) = (left[s + 1].clone(), right[s].clone());
    checks.push(if aq == alg {
        Check::pass("H^{s+1}_AQ(DX) = H^s_Alg(S(X))")
    } else {
        Check::fail("H^{s+1}_AQ(DX) = H^s_Alg(S(X))", format!("{aq} vs {alg}"))
    });
    let les = les(&ds, a, s + 1, Fault::None)?;
    let nonzero: Vec<String> = (1..=s + 1)
        .filter(|&t| !les.groups[t][1].is_zero())
        .map(|t| format!("degree {t}: {}", les.groups[t][1]))
        .collect();
    checks.push(if nonzero.is_empty() {
        Check::pass("middle column vanishes in positive degrees")
    } else {
        Check::fail("middle column vanishes in positive degrees", nonzero.join(", "))
    });
    checks.push(match les.connecting_iso[s] {
        Some(true) => Check::pass("connecting map is an isomorphism"),
        _ => Check::fail("connecting map is an isomorphism", format!("degree {s}")),
    });
    checks.push(Check { name: "long exact sequence of S(X) is exact".into(), ok: les.ok(), witness: None });
    Ok(ReplacementReport { degree: s, aq, alg, les, checks })
}
