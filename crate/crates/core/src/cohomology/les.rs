//! The levelwise short exact sequence `0 → C(X) → C(X₀) → D → 0` and its long exact sequence.

use num_bigint::BigInt;
use serde::Serialize;

use super::complex::{cohomology_of, ChainComplex, Column, FinCochainComplex, TowerData};
use super::linalg::{AbGroupPresentation, Lattice, Mat};
use crate::audit::Check;
use crate::beckmod::AbGroup;
use crate::error::{Error, Result};

/// Deliberate corruption of the connecting map, for testing the exactness audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// `δ ↦ 0`.
    ZeroConnecting,
    /// `δ ↦ 2δ`.
    DoubleConnecting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesSlot {
    pub degree: usize,
    pub column: String,
    pub group: String,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub max_degree: usize,
    /// `groups[s] = [H^s_AQ(DX), H^s_AQ(DX₀), H^s_Alg(X)]`.
    pub groups: Vec<[AbGroupPresentation; 3]>,
    pub slots: Vec<LesSlot>,
    /// Whether `δ: H^s_Alg → H^{s+1}_AQ(DX)` is an isomorphism, for `s + 2 ≤ top`.
    pub connecting_iso: Vec<Option<bool>>,
    pub checks: Vec<Check>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.slots.iter().all(|s| s.exact)
    }

    pub fn ok(&self) -> bool {
        self.exact() && self.checks.iter().all(|c| c.ok)
    }
}

fn selection(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for (i, j, v) in entries {
        m.e[i][j] = BigInt::from(v);
    }
    m
}

fn positions(tags: &[u8], tag: u8) -> Vec<usize> {
    tags.iter().enumerate().filter(|(_, &t)| t == tag).map(|(i, _)| i).collect()
}

struct Pieces {
    xi: Vec<Mat>,
    theta: Vec<Mat>,
    delta: Vec<Mat>,
    mid: FinCochainComplex,
    left: FinCochainComplex,
    right: FinCochainComplex,
}

fn pieces(red: &ChainComplex, fault: Fault) -> Pieces {
    let top = red.top();
    let (mut xi, mut theta, mut delta) = (vec![], vec![], vec![]);
    for s in 0..=top {
        let tags = &red.tags[s];
        let (pl, pr) = (positions(tags, 0), positions(tags, 1));
        xi.push(selection(tags.len(), pl.len(), pl.iter().enumerate().map(|(j, &p)| (p, j, 1))));
        theta.push(selection(pr.len(), tags.len(), pr.iter().enumerate().map(|(j, &p)| (j, p, 1))));
        if s < top {
            let next = &red.tags[s + 1];
            let pl1 = positions(next, 0);
            let rindex: Vec<Option<usize>> = {
                let mut k = 0;
                tags.iter()
                    .map(|&t| {
                        (t == 1).then(|| {
                            k += 1;
                            k - 1
                        })
                    })
                    .collect()
            };
            let scale = match fault {
                Fault::None => 1,
                Fault::ZeroConnecting => 0,
                Fault::DoubleConnecting => 2,
            };
            let mut m = Mat::zeros(pl1.len(), pr.len());
            for (l, &p) in pl1.iter().enumerate() {
                for &(r, v) in &red.bd[s + 1][p] {
                    if let Some(j) = rindex[r as usize] {
                        m.e[l][j] = BigInt::from(scale * v);
                    }
                }
            }
            delta.push(m);
        }
    }
    Pieces { xi, theta, delta, mid: red.cochains(), left: red.part(0).cochains(), right: red.part(1).cochains() }
}

/// Long exact sequence in degrees `≤ max_degree`, audited slot by slot.
pub fn les(data: &TowerData, a: &AbGroup, max_degree: usize, fault: Fault) -> Result<LesReport> {
    let top = max_degree + 1;
    if top > data.depth {
        return Err(Error::DegreeGuard { degree: max_degree, depth: data.depth, needed: top });
    }
    let split = data.split_vertex_complex(top)?;
    let mut checks = vec![split.dd_zero()];
    let red = split.reduce()?.trim_top();
    checks.push(Check { name: "d∘d = 0 after reduction".into(), ..red.dd_zero() });
    let p = pieces(&red, fault);
    let cols = [Column::Aq, Column::AqVertex, Column::Alg];
    let mut groups = vec![[AbGroupPresentation::zero(), AbGroupPresentation::zero(), AbGroupPresentation::zero()]; top];
    let mut exact = vec![[true; 3]; top];
    let mut iso: Vec<Option<bool>> = vec![None; top];
    for &k in a.factors() {
        let k = BigInt::from(k);
        let cx = [&p.left, &p.mid, &p.right];
        let z: Vec<Vec<Lattice>> =
            cx.iter().map(|c| (0..top).map(|s| c.cocycles(s, &k)).collect()).collect::<Result<_>>()?;
        let b: Vec<Vec<Lattice>> = cx.iter().map(|c| (0..=top).map(|s| c.coboundaries(s, &k)).collect()).collect();
        for s in 0..top {
            for c in 0..3 {
                groups[s][c] = groups[s][c].direct_sum(&z[c][s].quotient(&b[c][s])?);
            }
            let (l, m, r) = (0, 1, 2);
            let im_l = if s == 0 { b[l][0].clone() } else { z[r][s - 1].image(&p.delta[s - 1]).sum(&b[l][s]) };
            let ker_xi = z[l][s].restrict_preimage(&p.xi[s], &b[m][s]);
            exact[s][0] &= im_l == ker_xi;
            let im_xi = z[l][s].image(&p.xi[s]).sum(&b[m][s]);
            let ker_theta = z[m][s].restrict_preimage(&p.theta[s], &b[r][s]);
            exact[s][1] &= im_xi == ker_theta;
            let im_theta = z[m][s].image(&p.theta[s]).sum(&b[r][s]);
            let ker_delta = z[r][s].restrict_preimage(&p.delta[s], &b[l][s + 1]);
            exact[s][2] &= im_theta == ker_delta;
            if s + 1 < top {
                let injective = ker_delta == b[r][s];
                let surjective = z[r][s].image(&p.delta[s]).sum(&b[l][s + 1]) == z[l][s + 1];
                iso[s] = Some(iso[s].unwrap_or(true) && injective && surjective);
            }
        }
    }
    let mut slots = Vec::new();
    for s in 0..top {
        for c in 0..3 {
            slots.push(LesSlot {
                degree: s,
                column: cols[c].name().into(),
                group: groups[s][c].to_string(),
                exact: exact[s][c],
            });
        }
    }
    Ok(LesReport { max_degree, groups, slots, connecting_iso: iso, checks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub level: usize,
    pub orders: Option<[String; 3]>,
    pub checks: Vec<Check>,
}

impl SesReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// The normalized cochain groups at level `s` in the basis of generators and vertices:
/// `ξ″` is the diagonal `φ ↦ ((w,x) ↦ φ(w))`, `ϑ′` the difference `ψ ↦ (w ↦ ψ(w,1) − ψ(w,0))`.
pub fn ses_levelwise(data: &TowerData, s: usize, a: &AbGroup) -> Result<SesReport> {
    if s > data.depth {
        return Err(Error::DegreeGuard { degree: s, depth: data.depth, needed: s });
    }
    let n = (0..data.sizes[s]).filter(|&m| !data.is_degenerate(Column::Alg, s, m)).count();
    let xi = selection(2 * n, n, (0..n).flat_map(|i| [(2 * i, i, 1), (2 * i + 1, i, 1)]));
    let theta = selection(n, 2 * n, (0..n).flat_map(|i| [(i, 2 * i, -1), (i, 2 * i + 1, 1)]));
    let (mut inj, mut surj, mut ex) = (true, true, true);
    let mut orders = Some([AbGroupPresentation::zero(), AbGroupPresentation::zero(), AbGroupPresentation::zero()]);
    for &k in a.factors() {
        let k = BigInt::from(k);
        let (kl, km) = (Lattice::scaled(n, &k), Lattice::scaled(2 * n, &k));
        inj &= Lattice::preimage(&xi, &km) == kl;
        surj &= Lattice::full(2 * n).image(&theta).sum(&kl) == Lattice::full(n);
        ex &= Lattice::full(n).image(&xi).sum(&km) == Lattice::preimage(&theta, &kl);
        if let Some(o) = orders.as_mut() {
            let gl = Lattice::full(n).quotient(&kl)?;
            let gm = Lattice::full(2 * n).quotient(&km)?;
            o[0] = o[0].direct_sum(&gl);
            o[1] = o[1].direct_sum(&gm);
            o[2] = o[2].direct_sum(&gl);
        }
    }
    let mut checks = vec![
        if inj { Check::pass("ξ″ injective") } else { Check::fail("ξ″ injective", format!("level {s}")) },
        if surj { Check::pass("ϑ′ surjective") } else { Check::fail("ϑ′ surjective", format!("level {s}")) },
        if ex {
            Check::pass("im ξ″ = ker ϑ′")
        } else {
            Check::fail("im ξ″ = ker ϑ′", format!("level {s}"))
        },
    ];
    let finite = orders.as_ref().and_then(|o| Some([o[0].order()?, o[1].order()?, o[2].order()?]));
    if let Some([l, m, r]) = &finite {
        checks.push(if *m == l * r {
            Check::pass("|middle| = |left|·|right|")
        } else {
            Check::fail("|middle| = |left|·|right|", format!("{m} != {l}·{r}"))
        });
    }
    if s < data.depth {
        checks.push(chain_map_audit(data, s + 1)?);
    }
    Ok(SesReport { level: s, orders: finite.map(|[l, m, r]| [l.to_string(), m.to_string(), r.to_string()]), checks })
}

/// `w ↦ (w,1) − (w,0)` and `(w,x) ↦ w` commute with the normalized boundaries up to degree `top`.
fn chain_map_audit(data: &TowerData, top: usize) -> Result<Check> {
    let name = "ξ″, ϑ′ are cochain maps";
    let l = data.chain_complex(Column::Aq, top, true)?;
    let m = data.chain_complex(Column::AqVertex, top, true)?;
    let r = data.chain_complex(Column::Alg, top, true)?;
    use super::complex::combine;
    for s in 1..=top {
        for c in 0..r.tags[s].len() {
            let up: Vec<(u32, i64)> = r.bd[s][c].iter().flat_map(|&(g, v)| [(2 * g + 1, v), (2 * g, -v)]).collect();
            let mut across = m.bd[s][2 * c + 1].clone();
            across.extend(m.bd[s][2 * c].iter().map(|&(g, v)| (g, -v)));
            if combine(up) != combine(across) {
                return Ok(Check::fail(name, format!("difference map at cell {c} of degree {s}")));
            }
        }
        for c in 0..m.tags[s].len() {
            let down = combine(m.bd[s][c].iter().map(|&(g, v)| (g / 2, v)).collect());
            if down != l.bd[s][c / 2] {
                return Ok(Check::fail(name, format!("projection at cell {c} of degree {s}")));
            }
        }
    }
    Ok(Check::pass(name))
}

/// `H^s` of one column, normalized and reduced, for `s ≤ max_degree`.
pub fn column_cohomology(
    data: &TowerData,
    col: Column,
    a: &AbGroup,
    max_degree: usize,
) -> Result<(Vec<AbGroupPresentation>, Vec<Check>)> {
    let top = max_degree + 1;
    if top > data.depth {
        return Err(Error::DegreeGuard { degree: max_degree, depth: data.depth, needed: top });
    }
    let c = data.chain_complex(col, top, true)?;
    let mut checks = vec![c.dd_zero()];
    let red = c.reduce()?.trim_top();
    let cx = red.cochains();
    checks.push(if cx.dd_zero() {
        Check::pass("d∘d = 0 after reduction")
    } else {
        Check::fail("d∘d = 0 after reduction", "dense coboundaries".into())
    });
    let groups = (0..=max_degree).map(|s| cohomology_of(&cx, s, a)).collect::<Result<_>>()?;
    Ok((groups, checks))
}

/// Normalized and unnormalized complexes agree in degrees 0 and 1.
pub fn normalization_audit(data: &TowerData, col: Column, a: &AbGroup) -> Result<Check> {
    let name = format!("normalized = unnormalized in degrees ≤ 1 ({})", col.name());
    let top = 2.min(data.depth);
    let mut got = Vec::new();
    for normalized in [true, false] {
        let cx = data.chain_complex(col, top, normalized)?.reduce()?.trim_top().cochains();
        got.push((0..top).map(|s| cohomology_of(&cx, s, a)).collect::<Result<Vec<_>>>()?);
    }
    Ok(if got[0] == got[1] { Check::pass(&name) } else { Check::fail(&name, format!("{:?} vs {:?}", got[0], got[1])) })
}
