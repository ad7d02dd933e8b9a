//! Intersection theory on the blown-up plane `X_r` and the Zariski
//! decompositions of `D_t = H − t·E_r` for valuations that are non-positive
//! at infinity.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::ProximityCluster;
use crate::error::{Error, Result};
use crate::flagval::ExceptionalValuation;
use crate::okbody::{check_npi, Body};
use crate::scalar::{rat_int, rat_serde, rat_to_string, rat_vec_serde, ExactScalar, Point, Rat};

/// The class `h·H + Σ e_star[i−1]·E_i*` in `Pic(X_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    #[serde(with = "rat_serde")]
    pub h: Rat,
    #[serde(with = "rat_vec_serde")]
    pub e_star: Vec<Rat>,
}

impl DivisorClass {
    pub fn zero(r: usize) -> Self {
        Self {
            h: Rat::zero(),
            e_star: vec![Rat::zero(); r],
        }
    }

    pub fn hyperplane(r: usize) -> Self {
        Self {
            h: Rat::one(),
            ..Self::zero(r)
        }
    }

    /// `E_i*`.
    pub fn total(r: usize, i: usize) -> Result<Self> {
        if i == 0 || i > r {
            return Err(Error::IndexOutOfRange { index: i, len: r });
        }
        let mut d = Self::zero(r);
        d.e_star[i - 1] = Rat::one();
        Ok(d)
    }

    pub fn rank(&self) -> usize {
        self.e_star.len()
    }

    fn same_rank(&self, o: &Self) -> Result<()> {
        if self.rank() != o.rank() {
            return Err(Error::DimensionMismatch {
                left: self.rank(),
                right: o.rank(),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_rank(o)?;
        Ok(Self {
            h: &self.h + &o.h,
            e_star: self.e_star.iter().zip(&o.e_star).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self {
            h: &self.h * k,
            e_star: self.e_star.iter().map(|a| a * k).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.e_star.iter().all(Zero::is_zero)
    }
}

/// The intersection product: `H² = 1`, `E_i*·E_j* = −δ_ij`, `H·E_i* = 0`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
    a.same_rank(b)?;
    let e: Rat = a.e_star.iter().zip(&b.e_star).map(|(x, y)| x * y).sum();
    Ok(&a.h * &b.h - e)
}

/// Strict transform of `E_i` on `X_r`: `E_i* − Σ_{p_j → p_i, j ≤ r} E_j*`.
pub fn strict_transform(cluster: &ProximityCluster, r: usize, i: usize) -> Result<DivisorClass> {
    cluster.check_index(r)?;
    let mut d = DivisorClass::total(r, i)?;
    for j in cluster.proximate_points(i, r) {
        d.e_star[j - 1] = -Rat::one();
    }
    Ok(d)
}

/// Class `d·H − Σ mult_i·E_i*` of the strict transform of a curve.
pub fn curve_class(r: usize, degree: &Rat, mults: &[Rat]) -> Result<DivisorClass> {
    if mults.len() > r {
        return Err(Error::DimensionMismatch {
            left: mults.len(),
            right: r,
        });
    }
    let mut d = DivisorClass::zero(r);
    d.h = degree.clone();
    for (k, m) in mults.iter().enumerate() {
        d.e_star[k] = -m;
    }
    Ok(d)
}

/// The line through `p_1..p_s`.
pub fn line_class(r: usize, line_support: &[usize]) -> Result<DivisorClass> {
    let mut d = DivisorClass::hyperplane(r);
    for &k in line_support {
        if k == 0 || k > r {
            return Err(Error::IndexOutOfRange { index: k, len: r });
        }
        d.e_star[k - 1] = -Rat::one();
    }
    Ok(d)
}

/// `ν_i(v)`, the value of the line under the divisorial valuation of `E_i`.
pub fn line_value(cluster: &ProximityCluster, i: usize, line_support: &[usize]) -> Result<Rat> {
    let m = cluster.multiplicity_sequence(i)?;
    Ok(line_support
        .iter()
        .filter(|&&k| k <= i)
        .map(|&k| rat_int(&m[k - 1]))
        .sum())
}

/// `𝔻_i = ν_i(v)·H − Σ_k ν_i(𝔪_k)·E_k*` on `X_r`.
pub fn d_class(
    cluster: &ProximityCluster,
    r: usize,
    i: usize,
    line_support: &[usize],
) -> Result<DivisorClass> {
    let m = cluster.multiplicity_sequence(i)?;
    let mults: Vec<Rat> = m.iter().map(rat_int).collect();
    curve_class(r, &line_value(cluster, i, line_support)?, &mults)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BelowBreak,
    AboveBreak,
    MinimalCase,
}

/// An irreducible curve in the support of a negative part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    Line,
    Exceptional { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedComponent {
    pub component: Component,
    #[serde(with = "rat_serde")]
    pub coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiPair {
    #[serde(with = "rat_serde")]
    pub t: Rat,
    pub positive: DivisorClass,
    pub negative: DivisorClass,
    pub regime: Regime,
    /// Support of the negative part with coefficients.
    pub components: Vec<WeightedComponent>,
}

/// The data fixed by an NPI valuation: `V = ν_r(v)`, `B = β̄_{g+1}` and the
/// break point `t_0 = B/V`.
struct NpiData {
    v: Rat,
    b: Rat,
    t0: Rat,
}

fn npi_data(val: &ExceptionalValuation, line_support: &[usize]) -> Result<NpiData> {
    let chk = check_npi(val.cluster(), val.r(), line_support)?;
    if !chk.is_npi {
        return Err(Error::NotNpi);
    }
    let v = rat_int(&chk.nu_v);
    let b = rat_int(val.volume_inverse());
    let t0 = &b / &v;
    Ok(NpiData { v, b, t0 })
}

fn component_class(
    cluster: &ProximityCluster,
    r: usize,
    c: Component,
    line_support: &[usize],
) -> Result<DivisorClass> {
    match c {
        Component::Line => line_class(r, line_support),
        Component::Exceptional { index } => strict_transform(cluster, r, index),
    }
}

pub fn decompose_npi(
    val: &ExceptionalValuation,
    line_support: &[usize],
    t: &Rat,
) -> Result<ZariskiPair> {
    let NpiData { v, b, t0 } = npi_data(val, line_support)?;
    if t.is_negative() || *t > v {
        return Err(Error::TOutOfRange {
            t: rat_to_string(t),
            max: rat_to_string(&v),
        });
    }
    let cluster = val.cluster();
    let r = val.r();
    let d_r = d_class(cluster, r, r, line_support)?;
    let minimal = &v * &v == b;
    let mut weights: Vec<(Component, Rat)> = Vec::new();
    let (positive, regime) = if *t <= t0 {
        let b0 = Rat::one() - &v * t / &b;
        let br = t / &b;
        for i in 1..r {
            weights.push((
                Component::Exceptional { index: i },
                rat_int(&val.nu_r_phi(i)?) * t / &b,
            ));
        }
        let p = DivisorClass::hyperplane(r).scale(&b0).add(&d_r.scale(&br))?;
        let regime = if minimal {
            Regime::MinimalCase
        } else {
            Regime::BelowBreak
        };
        (p, regime)
    } else {
        let den = &v * &v - &b;
        let br = (&v - t) / &den;
        let a0 = (&v * t - &b) / &den;
        weights.push((Component::Line, a0));
        for i in 1..r {
            let nv = line_value(cluster, i, line_support)?;
            let phi = rat_int(&val.nu_r_phi(i)?);
            weights.push((
                Component::Exceptional { index: i },
                (nv * (&v * t - &b) + phi * (&v - t)) / &den,
            ));
        }
        (d_r.scale(&br), Regime::AboveBreak)
    };
    let mut negative = DivisorClass::zero(r);
    let mut components = Vec::new();
    for (c, w) in weights {
        if w.is_zero() {
            continue;
        }
        let cls = component_class(cluster, r, c, line_support)?;
        negative = negative.add(&cls.scale(&w))?;
        components.push(WeightedComponent {
            component: c,
            coefficient: w,
        });
    }
    Ok(ZariskiPair {
        t: t.clone(),
        positive,
        negative,
        regime,
        components,
    })
}

/// `D_t = H − t·E_r`; `E_r = E_r*` on `X_r`.
pub fn d_t(r: usize, t: &Rat) -> Result<DivisorClass> {
    DivisorClass::hyperplane(r).sub(&DivisorClass::total(r, r)?.scale(t))
}

/// Whether the symmetric matrix is negative definite: every pivot of the
/// elimination without row exchanges is negative, which is the sign pattern
/// of the leading principal minors.
pub fn is_negative_definite(gram: &[Vec<Rat>]) -> bool {
    let n = gram.len();
    let mut a = gram.to_vec();
    for k in 0..n {
        let p = a[k][k].clone();
        if !p.is_negative() {
            return false;
        }
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = &row[k] / &p;
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(k) {
                *x -= &f * y;
            }
        }
    }
    true
}

/// Outcome of checking a decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiChecks {
    /// `P + N = D_t`.
    pub sums_to_d_t: bool,
    /// `P·C = 0` for every component of `N`.
    pub orthogonal: bool,
    pub negative_definite: bool,
    /// `P` meets every test curve nonnegatively.
    pub nef_on_test_set: bool,
    /// Below the break, `P·E_i = 0` for `i < r`.
    pub kills_exceptional: bool,
    /// `N` has nonnegative coefficients.
    pub effective: bool,
}

impl ZariskiChecks {
    pub fn all(&self) -> bool {
        self.sums_to_d_t
            && self.orthogonal
            && self.negative_definite
            && self.nef_on_test_set
            && self.kills_exceptional
            && self.effective
    }
}

/// Test curves for nefness: the classes `𝔻_i`, the strict transforms `E_i`
/// and the line.
pub fn nef_test_set(
    cluster: &ProximityCluster,
    r: usize,
    line_support: &[usize],
) -> Result<Vec<DivisorClass>> {
    let mut out = Vec::new();
    for i in 1..=r {
        out.push(d_class(cluster, r, i, line_support)?);
        out.push(strict_transform(cluster, r, i)?);
    }
    out.push(line_class(r, line_support)?);
    Ok(out)
}

pub fn check_pair(
    val: &ExceptionalValuation,
    line_support: &[usize],
    pair: &ZariskiPair,
) -> Result<ZariskiChecks> {
    let cluster = val.cluster();
    let r = val.r();
    let mut out = ZariskiChecks {
        sums_to_d_t: pair.positive.add(&pair.negative)? == d_t(r, &pair.t)?,
        effective: pair.components.iter().all(|c| !c.coefficient.is_negative()),
        ..Default::default()
    };
    let classes = pair
        .components
        .iter()
        .map(|c| component_class(cluster, r, c.component, line_support))
        .collect::<Result<Vec<_>>>()?;
    out.orthogonal = true;
    for c in &classes {
        if !intersect(&pair.positive, c)?.is_zero() {
            out.orthogonal = false;
        }
    }
    let mut gram = Vec::new();
    for a in &classes {
        gram.push(
            classes
                .iter()
                .map(|b| intersect(a, b))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    out.negative_definite = is_negative_definite(&gram);
    out.nef_on_test_set = true;
    for c in nef_test_set(cluster, r, line_support)? {
        if intersect(&pair.positive, &c)?.is_negative() {
            out.nef_on_test_set = false;
        }
    }
    out.kills_exceptional = true;
    if pair.regime != Regime::AboveBreak {
        for i in 1..r {
            if !intersect(&pair.positive, &strict_transform(cluster, r, i)?)?.is_zero() {
                out.kills_exceptional = false;
            }
        }
    }
    Ok(out)
}

/// The vertical segment `{t} × [α(t), β(t)]` of the body.
pub fn slice(val: &ExceptionalValuation, line_support: &[usize], t: &Rat) -> Result<(Rat, Rat)> {
    let pair = decompose_npi(val, line_support, t)?;
    let alpha = match val.eta() {
        None => Rat::zero(),
        Some(eta) => pair
            .components
            .iter()
            .find(|c| c.component == Component::Exceptional { index: eta })
            .map_or_else(Rat::zero, |c| c.coefficient.clone()),
    };
    let r = val.r();
    let er = strict_transform(val.cluster(), r, r)?;
    let beta = &alpha + intersect(&pair.positive, &er)?;
    Ok((alpha, beta))
}

/// Break points of the slices: `0`, `t_0` and `ν_r(v)`.
pub fn break_points(val: &ExceptionalValuation, line_support: &[usize]) -> Result<Vec<Rat>> {
    let NpiData { v, t0, .. } = npi_data(val, line_support)?;
    let mut ts = vec![Rat::zero(), t0, v];
    ts.dedup();
    Ok(ts)
}

/// The body rebuilt from the slices at the break points.
pub fn slice_body(val: &ExceptionalValuation, line_support: &[usize]) -> Result<Body> {
    let NpiData { v, b, .. } = npi_data(val, line_support)?;
    let mut pts = Vec::new();
    for t in break_points(val, line_support)? {
        let (a, bt) = slice(val, line_support, &t)?;
        pts.push(Point::rat(t.clone(), a));
        pts.push(Point::rat(t, bt));
    }
    let minimal = &v * &v == b;
    Body::from_points(&pts, minimal, ExactScalar::from_rat(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagval::{build_flag, FlagSpec};
    use crate::scalar::rat;

    #[test]
    fn lattice_basics() {
        let h = DivisorClass::hyperplane(3);
        assert_eq!(intersect(&h, &h).unwrap(), Rat::one());
        let e = DivisorClass::total(3, 2).unwrap();
        assert_eq!(intersect(&e, &e).unwrap(), -Rat::one());
        assert_eq!(
            intersect(&h, &DivisorClass::hyperplane(2)).unwrap_err().code(),
            "DimensionMismatch"
        );
    }

    #[test]
    fn strict_transforms() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        let e1 = strict_transform(&c, 3, 1).unwrap();
        assert_eq!(e1.e_star, vec![rat(1, 1), rat(-1, 1), rat(-1, 1)]);
        assert_eq!(strict_transform(&c, 3, 3).unwrap(), DivisorClass::total(3, 3).unwrap());
        assert_eq!(strict_transform(&c, 3, 4).unwrap_err().code(), "IndexOutOfRange");
        let g = c.dual_graph(3).unwrap();
        for i in 1..=3 {
            for j in (i + 1)..=3 {
                let x = intersect(
                    &strict_transform(&c, 3, i).unwrap(),
                    &strict_transform(&c, 3, j).unwrap(),
                )
                .unwrap();
                let want = if g.has_edge(i, j) { 1 } else { 0 };
                assert_eq!(x, rat(want, 1));
            }
        }
    }

    #[test]
    fn zero_slice() {
        let c = ProximityCluster::free_chain(3);
        let v = build_flag(&c, FlagSpec::free(3)).unwrap();
        let p = decompose_npi(&v, &[1, 2, 3], &Rat::zero()).unwrap();
        assert_eq!(p.positive, DivisorClass::hyperplane(3));
        assert!(p.negative.is_zero());
        assert_eq!(
            decompose_npi(&v, &[1, 2, 3], &rat(4, 1)).unwrap_err().code(),
            "TOutOfRange"
        );
    }
}
