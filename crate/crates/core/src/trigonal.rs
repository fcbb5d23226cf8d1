//! Explicit trigonal curves on `F_m` and the experiments run on them.
//!
//! A curve is `G = Σ c_i(x₀, x₁)·y₀^{3−i}·y₁^i` with `c_i` a binary form of
//! degree `k − i·m`; its class is `3s + k·f`. The affine charts are
//! `x₁ = 1` or `x₀ = 1` on the base and `y₀ = 1` or `y₁ = 1` on the fibers.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubic::{cubic_discriminant, cubic_triple_root_conditions, BinaryCubic};
use crate::dynamic::{self, gcd_many, normalize, Component, ModPoly};
use crate::error::{Error, Result};
use crate::hirzebruch::trigonal_class_data;
use crate::jets::z_degree;
use crate::linalg::rank;
use crate::poly::{resultant_formal, subresultant_formal, Poly, UPoly};
use crate::scalar::{rint, Field, Fp, Rational};

/// Integer coefficients of sampled curves are drawn from `[-BOX, BOX]`.
pub const SAMPLE_BOX: i64 = 4;
pub const MAX_ATTEMPTS: usize = 1000;
/// Prime used to decide smoothness of integral curves quickly.
const REDUCTION_PRIME: u64 = 2_147_483_647;

/// `2k − 3m − 2`, the genus of a smooth curve in `|3s + kf|` on `F_m`.
pub fn genus_from_class(m: u32, k: i64) -> Result<i64> {
    let g = 2 * k - 3 * m as i64 - 2;
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XChart {
    /// `x₁ = 1`, coordinate `x = x₀`.
    X1,
    /// `x₀ = 1`, coordinate `x = x₁`.
    X0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YChart {
    /// `y₀ = 1`, coordinate `y = y₁`.
    Y0,
    /// `y₁ = 1`, coordinate `y = y₀`.
    Y1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigonalCurve<F: Field> {
    m: u32,
    k: i64,
    /// `coeffs[i][j]` multiplies `x₀^j·x₁^{deg_i − j}`.
    coeffs: [Vec<F>; 4],
}

pub fn coeff_degree(m: u32, k: i64, i: usize) -> i64 {
    k - i as i64 * m as i64
}

fn x_vars() -> [&'static str; 2] {
    ["x0", "x1"]
}

fn to_u<F: Field>(p: &Poly<F>, var: &str) -> UPoly<F> {
    match p.as_constant() {
        Some(c) => UPoly::constant(c),
        None => p.to_upoly(var).expect("univariate"),
    }
}

impl<F: Field> TrigonalCurve<F> {
    pub fn new(m: u32, k: i64, coeffs: [Vec<F>; 4]) -> Result<Self> {
        if m > 1 {
            return Err(Error::Invalid(format!("ambient F_{m}: only m = 0, 1 are used")));
        }
        for (i, c) in coeffs.iter().enumerate() {
            let d = coeff_degree(m, k, i);
            let want = if d < 0 { 0 } else { d as usize + 1 };
            if c.len() != want {
                return Err(Error::Invalid(format!("c_{i} needs {want} coefficients, got {}", c.len())));
            }
        }
        if coeffs.iter().all(|c| c.iter().all(|a| a.is_zero())) {
            return Err(Error::ZeroInput);
        }
        Ok(TrigonalCurve { m, k, coeffs })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn coeffs(&self) -> &[Vec<F>; 4] {
        &self.coeffs
    }

    pub fn genus(&self) -> Result<i64> {
        genus_from_class(self.m, self.k)
    }

    /// `c_i` as a binary form in `x₀, x₁`.
    pub fn c_poly(&self, i: usize) -> Poly<F> {
        let d = coeff_degree(self.m, self.k, i);
        let terms = self.coeffs[i].iter().enumerate().map(|(j, a)| (vec![j as u32, (d - j as i64) as u32], a.clone()));
        Poly::from_terms(&x_vars(), terms)
    }

    /// The fiber cubic in `(y₀, y₁)` with coefficients in `x₀, x₁`.
    pub fn fiber_cubic(&self) -> BinaryCubic<F> {
        BinaryCubic { c3: self.c_poly(0), c2: self.c_poly(1), c1: self.c_poly(2), c0: self.c_poly(3) }
    }

    pub fn form(&self) -> Poly<F> {
        let (y0, y1) = (Poly::var("y0"), Poly::var("y1"));
        (0..4).fold(Poly::zero(), |acc, i| acc + self.c_poly(i) * y0.pow(3 - i as u32) * y1.pow(i as u32))
    }

    /// `c_i` dehomogenised on the chart, as a polynomial in its coordinate.
    fn c_chart(&self, i: usize, xc: XChart) -> UPoly<F> {
        let (one, keep) = match xc {
            XChart::X1 => ("x1", "x0"),
            XChart::X0 => ("x0", "x1"),
        };
        to_u(&self.c_poly(i).dehomogenize(one), keep)
    }

    /// The local equation on a chart, in variables `x` and `y`.
    pub fn chart(&self, xc: XChart, yc: YChart) -> Poly<F> {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let mut acc = Poly::zero_in(&["x", "y"]);
        for i in 0..4 {
            let c = Poly::from_upoly("x", &self.c_chart(i, xc)).substitute("x", &x);
            let e = match yc {
                YChart::Y0 => i as u32,
                YChart::Y1 => 3 - i as u32,
            };
            acc = acc + c * y.pow(e);
        }
        acc
    }

    /// Fiber cubic over a base chart in the fiber chart `y₀ = 1`.
    fn fiber_mod_poly(&self, xc: XChart) -> ModPoly<F> {
        let mut out: ModPoly<F> = (0..4).map(|i| self.c_chart(i, xc)).collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Whether `G` and its partials have no common zero on `F_m`. The chart
    /// `x₁ = y₀ = 1` is handled by elimination; its complement is the fiber
    /// `x₁ = 0` and the section `y₀ = 0`, where the conditions are univariate.
    pub fn is_smooth(&self) -> bool {
        self.reduction_is_smooth() || self.is_smooth_exact()
    }

    /// Smoothness of the reduction modulo a large prime, for integral curves
    /// over Q. The singular locus is proper over `Z_(p)`, so a smooth
    /// reduction forces a smooth curve; `false` means undecided.
    fn reduction_is_smooth(&self) -> bool {
        if F::characteristic() != 0 {
            return false;
        }
        let mut cs: [Vec<Fp<REDUCTION_PRIME>>; 4] = Default::default();
        for (dst, src) in cs.iter_mut().zip(&self.coeffs) {
            for a in src {
                match a.as_i64() {
                    Some(v) => dst.push(Fp::new(v)),
                    None => return false,
                }
            }
        }
        TrigonalCurve::new(self.m, self.k, cs).is_ok_and(|c| c.is_smooth_exact())
    }

    fn is_smooth_exact(&self) -> bool {
        if !main_chart_smooth(&self.fiber_mod_poly(XChart::X1)) {
            return false;
        }
        let at0 = |u: &UPoly<F>| u.coeff(0);
        let c0: Vec<UPoly<F>> = (0..4).map(|i| self.c_chart(i, XChart::X0)).collect();
        // Fiber x₁ = 0 away from y₀ = 0, in y = y₁/y₀.
        let a = UPoly::new(c0.iter().map(at0).collect());
        let ax = UPoly::new(c0.iter().map(|c| at0(&c.derivative())).collect());
        if common_root(&[a.clone(), ax, a.derivative()]) {
            return false;
        }
        // The point x₁ = y₀ = 0.
        if at0(&c0[3]).is_zero() && at0(&c0[3].derivative()).is_zero() && at0(&c0[2]).is_zero() {
            return false;
        }
        // Section y₀ = 0 away from x₁ = 0.
        let c3 = self.c_chart(3, XChart::X1);
        !common_root(&[c3.clone(), c3.derivative(), self.c_chart(2, XChart::X1)])
    }

    pub fn to_json_value(&self) -> CurveJson {
        CurveJson {
            m: self.m,
            k: self.k,
            field: FieldTag::of::<F>(),
            coeffs: self.coeffs.iter().map(|c| c.iter().map(fraction_text).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(j: &CurveJson) -> Result<Self> {
        if j.field != FieldTag::of::<F>() {
            return Err(Error::Invalid(format!("curve is over {:?}, expected {:?}", j.field, FieldTag::of::<F>())));
        }
        if j.coeffs.len() != 4 {
            return Err(Error::Parse(format!("expected 4 coefficient lists, got {}", j.coeffs.len())));
        }
        let mut cs: [Vec<F>; 4] = Default::default();
        for (i, list) in j.coeffs.iter().enumerate() {
            for s in list {
                let q = Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))?;
                let a = F::from_rational(&q).ok_or_else(|| Error::Parse(format!("coefficient {s} not in the field")))?;
                cs[i].push(a);
            }
        }
        Self::new(j.m, j.k, cs)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CurveJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&j)
    }
}

fn fraction_text<F: Field>(a: &F) -> String {
    let s = a.to_string();
    if s.contains('/') {
        s
    } else {
        format!("{s}/1")
    }
}

fn trim<F: Field>(mut p: ModPoly<F>) -> ModPoly<F> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Whether some common zero of `polys` lies in `F̄`; all-zero input counts.
fn common_root<F: Field>(polys: &[UPoly<F>]) -> bool {
    polys.iter().fold(UPoly::zero(), |acc, p| acc.gcd(p)).deg0() > 0 || polys.iter().all(|p| p.is_zero())
}

/// Smoothness on the chart `x₁ = y₀ = 1`, where `g = Σ g_i(x)·y^i`.
///
/// Candidate fibers are the roots of `T`, the squarefree part of
/// `Res_y(g, g_y)`. Where the leading coefficient of `g` and the first
/// subresultant coefficient `s11` do not vanish, `g` and `g_y` share exactly
/// the root `y = −s10/s11`, and the point is singular iff `g_x` vanishes
/// there. The remaining factor of `T` goes through dynamic evaluation.
fn main_chart_smooth<F: Field>(g: &ModPoly<F>) -> bool {
    if g.len() <= 1 {
        // Constant in y: the curve is a multiple of the section y₁ = 0.
        return false;
    }
    let dy = g.len() - 1;
    let gy = dynamic::derivative(g);
    let gx = trim(g.iter().map(|c| c.derivative()).collect());
    let r = dynamic::subresultant(g, &gy, dy, dy - 1, 0).remove(0);
    if r.is_zero() {
        return false;
    }
    if r.deg0() == 0 {
        return true;
    }
    let t = r.squarefree_part();
    let mut rest = t.clone();
    if dy >= 3 {
        let s = dynamic::subresultant(g, &gy, dy, dy - 1, 1);
        rest = t.gcd(&(&g[dy] * &s[1]));
        let good = t.div_exact(&rest).expect("gcd divides");
        if good.deg0() > 0 {
            let root = (-&s[0]).rem(&good);
            let mut v = UPoly::zero();
            let (mut num, mut den) = (UPoly::one(), UPoly::one());
            let mut dens = vec![UPoly::one()];
            for _ in 0..dy {
                den = (&den * &s[1]).rem(&good);
                dens.push(den.clone());
            }
            for i in 0..=dy {
                if let Some(c) = gx.get(i) {
                    v = (&v + &(&(c * &num) * &dens[dy - i])).rem(&good);
                }
                num = (&num * &root).rem(&good);
            }
            if good.gcd(&v).deg0() > 0 {
                return false;
            }
        }
    }
    rest.deg0() == 0 || gcd_many(&rest, &[g.clone(), gy, gx]).iter().all(|c| c.degree() == Some(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FieldTag {
    Q,
    Fp { p: u64 },
}

impl FieldTag {
    pub fn of<F: Field>() -> Self {
        match F::characteristic() {
            0 => FieldTag::Q,
            p => FieldTag::Fp { p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub m: u32,
    pub k: i64,
    pub field: FieldTag,
    pub coeffs: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Profile {
    /// A simple ramification point and an unramified one.
    #[serde(rename = "(2,1)")]
    Simple,
    /// A triple ramification point.
    #[serde(rename = "(3)")]
    Triple,
}

impl Profile {
    /// `Σ (e − 1)` over the points of the fiber.
    pub fn ramification(self) -> i64 {
        match self {
            Profile::Simple => 1,
            Profile::Triple => 2,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Simple => "(2,1)",
            Profile::Triple => "(3)",
        })
    }
}

/// Branch points sharing a multiplicity and a profile: the roots of a
/// squarefree factor of the discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPoints<F: Field> {
    pub chart: XChart,
    /// Squarefree, monic, in the chart coordinate.
    pub modulus: UPoly<F>,
    pub multiplicity: u32,
    pub profile: Profile,
}

impl<F: Field> BranchPoints<F> {
    pub fn degree(&self) -> usize {
        self.modulus.deg0()
    }

    /// The factor as a binary form in `x₀, x₁`.
    pub fn factor(&self) -> Poly<F> {
        let (var, h) = match self.chart {
            XChart::X1 => ("x0", "x1"),
            XChart::X0 => ("x1", "x0"),
        };
        Poly::from_upoly(var, &self.modulus).homogenize(&[var], h, self.degree() as u32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchReport<F: Field> {
    /// Binary form of degree `4k − 6m`.
    pub disc: Poly<F>,
    pub disc_degree: u32,
    pub points: Vec<BranchPoints<F>>,
}

#[derive(Serialize)]
struct BranchPointsJson {
    factor: String,
    degree: usize,
    multiplicity: u32,
    profile: Profile,
}

#[derive(Serialize)]
struct BranchReportJson {
    disc: String,
    disc_degree: u32,
    branch_points: usize,
    total_ramification: i64,
    points: Vec<BranchPointsJson>,
}

impl<F: Field> BranchReport<F> {
    /// Number of distinct branch points.
    pub fn branch_point_count(&self) -> usize {
        self.points.iter().map(|p| p.degree()).sum()
    }

    /// `Σ multiplicity·deg(factor)`, which must be the degree of the
    /// discriminant.
    pub fn weighted_degree(&self) -> u32 {
        self.points.iter().map(|p| p.multiplicity * p.degree() as u32).sum()
    }

    /// `Σ (e − 1)` over all ramification points.
    pub fn total_ramification(&self) -> i64 {
        self.points.iter().map(|p| p.profile.ramification() * p.degree() as i64).sum()
    }

    pub fn to_json(&self) -> String {
        let j = BranchReportJson {
            disc: self.disc.to_string(),
            disc_degree: self.disc_degree,
            branch_points: self.branch_point_count(),
            total_ramification: self.total_ramification(),
            points: self
                .points
                .iter()
                .map(|p| BranchPointsJson {
                    factor: p.factor().to_string(),
                    degree: p.degree(),
                    multiplicity: p.multiplicity,
                    profile: p.profile,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }
}

fn triple_conditions_chart<F: Field>(c: &TrigonalCurve<F>, xc: XChart) -> [UPoly<F>; 3] {
    let cub = BinaryCubic {
        c3: Poly::from_upoly("x", &c.c_chart(0, xc)),
        c2: Poly::from_upoly("x", &c.c_chart(1, xc)),
        c1: Poly::from_upoly("x", &c.c_chart(2, xc)),
        c0: Poly::from_upoly("x", &c.c_chart(3, xc)),
    };
    let (p1, p2, p3) = cubic_triple_root_conditions(&cub);
    [to_u(&p1, "x"), to_u(&p2, "x"), to_u(&p3, "x")]
}

/// Splits the roots of `s` by the shape of their fiber.
fn classify<F: Field>(c: &TrigonalCurve<F>, xc: XChart, s: &UPoly<F>, mult: u32) -> Vec<BranchPoints<F>> {
    let [p1, p2, p3] = triple_conditions_chart(c, xc);
    let s3 = s.gcd(&p1).gcd(&p2).gcd(&p3);
    let s21 = s.monic().div_exact(&s3).expect("gcd divides");
    let mut out = Vec::new();
    for (m, profile) in [(s3, Profile::Triple), (s21, Profile::Simple)] {
        if m.deg0() > 0 {
            out.push(BranchPoints { chart: xc, modulus: m, multiplicity: mult, profile });
        }
    }
    out
}

pub fn branch_report<F: Field>(c: &TrigonalCurve<F>) -> Result<BranchReport<F>> {
    if !c.is_smooth() {
        return Err(Error::NotSmooth);
    }
    let disc = cubic_discriminant(&c.fiber_cubic());
    let n = (4 * c.k - 6 * c.m as i64) as u32;
    let affine = to_u(&disc.dehomogenize("x1"), "x0");
    let at_infinity = n as usize - affine.deg0();
    let at_zero = affine.coeffs().iter().position(|a| !a.is_zero()).expect("smooth curves have a nonzero discriminant");
    let rest = UPoly::new(affine.coeffs()[at_zero..].to_vec());
    let x = UPoly::x();
    let mut points = Vec::new();
    if at_zero > 0 {
        points.extend(classify(c, XChart::X1, &x, at_zero as u32));
    }
    if at_infinity > 0 {
        points.extend(classify(c, XChart::X0, &x, at_infinity as u32));
    }
    for (s, e) in rest.squarefree() {
        points.extend(classify(c, XChart::X1, &s, e));
    }
    Ok(BranchReport { disc, disc_degree: n, points })
}

/// Root structure of the fiber cubics over one group of branch points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberEvidence {
    pub factor: String,
    pub multiplicity: u32,
    pub profile: Profile,
    /// Distinct multiple roots of the fiber cubic.
    pub multiple_roots: usize,
    pub max_root_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrataAudit {
    pub fibers: Vec<FiberEvidence>,
    /// Fibers with two multiple roots.
    pub s12_violations: usize,
    /// Fibers with a root of multiplicity at least 4, or contained in the curve.
    pub s31_violations: usize,
    /// Fibers with a triple and a double root.
    pub s1121_violations: usize,
    /// Profiles that disagree with the root structure.
    pub profile_mismatches: usize,
    /// Groups whose discriminant multiplicity is not the generic one for
    /// their profile (1 for (2,1), 2 for (3)). Reported, not counted as a
    /// violation.
    pub unusual_multiplicities: usize,
    pub pass: bool,
}

impl StrataAudit {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.fibers {
            out.push_str(&format!(
                "fiber {}: multiplicity {}, profile {}, multiple roots {}, max root multiplicity {}\n",
                f.factor, f.multiplicity, f.profile, f.multiple_roots, f.max_root_multiplicity
            ));
        }
        out.push_str(&format!("S_{{1^2}} violations: {}\n", self.s12_violations));
        out.push_str(&format!("S_{{3^1}} violations: {}\n", self.s31_violations));
        out.push_str(&format!("S_{{1^1 2^1}} violations: {}\n", self.s1121_violations));
        out.push_str(&format!("profile mismatches: {}\n", self.profile_mismatches));
        out.push_str(&format!("unusual multiplicities: {}\n", self.unusual_multiplicities));
        out.push_str(if self.pass { "audit: pass\n" } else { "audit: FAIL\n" });
        out
    }
}

/// A component of the modulus with `(distinct multiple roots, maximal
/// multiplicity)` of the affine roots; `None` when the polynomial vanishes on
/// the component.
type RootStructure<F> = (UPoly<F>, Option<(usize, usize)>);

fn root_structure<F: Field>(d: &UPoly<F>, f: &ModPoly<F>) -> Vec<RootStructure<F>> {
    let mut out = Vec::new();
    for c in normalize(d, f) {
        if c.value.is_empty() {
            out.push((c.modulus, None));
            continue;
        }
        // h_{i+1} = gcd(h_i, h_i'); the number of steps to a constant is the
        // maximal multiplicity, deg h_1 − deg h_2 the number of multiple roots.
        let mut chains: Vec<(Component<F>, Vec<usize>)> = vec![(c.clone(), vec![c.degree().unwrap()])];
        let mut done = Vec::new();
        while let Some((cur, degs)) = chains.pop() {
            if cur.degree() == Some(0) {
                done.push((cur.modulus, degs));
                continue;
            }
            for next in dynamic::gcd2(&cur.modulus, &cur.value, &dynamic::derivative(&cur.value)) {
                let mut dg = degs.clone();
                dg.push(next.degree().unwrap_or(0));
                chains.push((next, dg));
            }
        }
        for (m, degs) in done {
            let max = if degs[0] == 0 { 0 } else { degs.len() - 1 };
            let d1 = degs.get(1).copied().unwrap_or(0);
            let d2 = degs.get(2).copied().unwrap_or(0);
            out.push((m, Some((d1 - d2, max))));
        }
    }
    out
}

pub fn forbidden_strata_audit<F: Field>(c: &TrigonalCurve<F>) -> Result<StrataAudit> {
    Ok(audit_report(c, &branch_report(c)?))
}

/// The audit of a curve whose branch report is already known.
pub fn audit_report<F: Field>(c: &TrigonalCurve<F>, report: &BranchReport<F>) -> StrataAudit {
    let mut fibers = Vec::new();
    let (mut s12, mut s31, mut s1121, mut mismatches, mut unusual) = (0, 0, 0, 0, 0);
    for p in &report.points {
        let f = c.fiber_mod_poly(p.chart);
        let expected_mult = match p.profile {
            Profile::Simple => 1,
            Profile::Triple => 2,
        };
        if p.multiplicity != expected_mult {
            unusual += 1;
        }
        for (part, structure) in root_structure(&p.modulus, &f) {
            let Some((affine_multiple, affine_max)) = structure else {
                s31 += part.deg0();
                continue;
            };
            // Roots at y₀ = 0: the drop of degree on this component.
            let deg = normalize(&part, &f).iter().map(|c| c.degree().unwrap_or(0)).max().unwrap_or(0);
            let at_inf = 3 - deg;
            let multiple = affine_multiple + usize::from(at_inf >= 2);
            let max = affine_max.max(at_inf);
            let n = part.deg0();
            if multiple >= 2 {
                s12 += n;
                if max >= 3 {
                    s1121 += n;
                }
            }
            if max >= 4 {
                s31 += n;
            }
            let expected_max = match p.profile {
                Profile::Simple => 2,
                Profile::Triple => 3,
            };
            if max != expected_max || multiple != 1 {
                mismatches += n;
            }
            let factor = BranchPoints { modulus: part.clone(), ..p.clone() }.factor().to_string();
            fibers.push(FiberEvidence {
                factor,
                multiplicity: p.multiplicity,
                profile: p.profile,
                multiple_roots: multiple,
                max_root_multiplicity: max,
            });
        }
    }
    let pass = s12 == 0 && s31 == 0 && s1121 == 0 && mismatches == 0;
    StrataAudit {
        fibers,
        s12_violations: s12,
        s31_violations: s31,
        s1121_violations: s1121,
        profile_mismatches: mismatches,
        unusual_multiplicities: unusual,
        pass,
    }
}

/// A sampled smooth curve and the number of draws it took.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve<F: Field> {
    pub curve: TrigonalCurve<F>,
    pub attempts: usize,
}

fn draw_curve<F: Field>(rng: &mut ChaCha8Rng, m: u32, k: i64) -> Option<TrigonalCurve<F>> {
    let mut cs: [Vec<F>; 4] = Default::default();
    for (i, c) in cs.iter_mut().enumerate() {
        let d = coeff_degree(m, k, i);
        for _ in 0..=d.max(-1) {
            c.push(F::from_i64(rng.gen_range(-SAMPLE_BOX..=SAMPLE_BOX)));
        }
        if d < 0 {
            c.clear();
        }
    }
    TrigonalCurve::new(m, k, cs).ok()
}

fn sample_smooth<F: Field>(rng: &mut ChaCha8Rng, g: i64) -> Result<SampledCurve<F>> {
    let data = trigonal_class_data(g)?;
    for attempt in 1..=MAX_ATTEMPTS {
        if let Some(c) = draw_curve::<F>(rng, data.m, data.k) {
            if c.is_smooth() {
                return Ok(SampledCurve { curve: c, attempts: attempt });
            }
        }
    }
    Err(Error::SamplingFailed(MAX_ATTEMPTS))
}

/// A smooth curve of genus `g` on `F_{g mod 2}`, determined by the seed.
pub fn random_smooth_curve<F: Field>(g: i64, seed: u64) -> Result<SampledCurve<F>> {
    sample_smooth(&mut ChaCha8Rng::seed_from_u64(seed), g)
}

/// Rank of the map from `H⁰(O(C))` to the `n`-jets along the ruling line at
/// a point of the chart `x₁ = y₀ = 1`. The point is drawn from the seed when
/// not given.
pub fn jet_evaluation_rank(g: i64, n: usize, sample: Option<(Rational, Rational)>, seed: u64) -> Result<usize> {
    if !(2..=3).contains(&n) {
        return Err(Error::Invalid(format!("jet length {n} is not 2 or 3")));
    }
    let data = trigonal_class_data(g)?;
    let (x, y) = sample.unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = || rint(rng.gen_range(2..=50)) / rint(rng.gen_range(1..=7));
        (pick(), pick())
    });
    let pow = |a: &Rational, e: i64| -> Rational {
        if e < 0 {
            Rational::zero()
        } else {
            num_traits::pow(a.clone(), e as usize)
        }
    };
    let binom = |a: i64, b: i64| -> Rational { rint((0..b).fold(1i64, |acc, j| acc * (a - j) / (j + 1))) };
    let mut rows = Vec::new();
    for i in 0..4i64 {
        let d = coeff_degree(data.m, data.k, i as usize);
        for j in 0..=d.max(-1) {
            if d < 0 {
                break;
            }
            // Monomial x^j·y^i; its Taylor coefficients in y at the sample.
            rows.push((0..n as i64).map(|l| binom(i, l) * pow(&x, j) * pow(&y, i - l)).collect::<Vec<_>>());
        }
    }
    let r = rank(&rows);
    if r < n {
        return Err(Error::DegenerateSample(format!("rank {r} < {n} at ({x}, {y})")));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilExperiment {
    pub genus: i64,
    pub seed: u64,
    pub field: FieldTag,
    pub members: [CurveJson; 2],
    /// Members of the pencil with a triple point, with multiplicity.
    pub count: usize,
    /// Of these, the one at `t = ∞` if any.
    pub at_infinity: usize,
    pub predicted: i64,
    pub matches: bool,
}

impl PencilExperiment {
    pub fn to_text(&self) -> String {
        format!(
            "count={} predicted={} {}",
            self.count,
            self.predicted,
            if self.matches { "MATCH" } else { "MISMATCH" }
        )
    }
}

/// `P1, P2, P3` of `G⁰ + t·G¹` on the chart `x₁ = 1`, in `x0` and `t`.
fn pencil_conditions<F: Field>(a: &TrigonalCurve<F>, b: &TrigonalCurve<F>) -> [Poly<F>; 3] {
    let t = Poly::var("t");
    let c = |i: usize| (a.c_poly(i) + b.c_poly(i) * t.clone()).dehomogenize("x1");
    let cub = BinaryCubic { c3: c(0), c2: c(1), c1: c(2), c0: c(3) };
    let (p1, p2, p3) = cubic_triple_root_conditions(&cub);
    [p1, p2, p3]
}

/// Number of points of the binary forms' common zero locus, given the
/// affine parts and formal degrees.
fn common_binary_roots<F: Field>(ps: &[UPoly<F>], formal: &[usize]) -> usize {
    let g = ps.iter().fold(UPoly::zero(), |acc, p| acc.gcd(p));
    let affine = if g.is_zero() { usize::MAX } else { g.squarefree_part().deg0() };
    let infinity = ps.iter().zip(formal).all(|(p, &d)| p.deg0() < d || p.is_zero());
    affine.saturating_add(usize::from(infinity))
}

fn degenerate(msg: impl Into<String>) -> Error {
    Error::DegeneratePencil(msg.into())
}

/// Counts the members of a pencil spanned by two sampled smooth curves that
/// have a triple point, and compares with the degree of `Z`.
pub fn pencil_triple_count<F: Field>(g: i64, seed: u64) -> Result<PencilExperiment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = sample_smooth::<F>(&mut rng, g)?.curve;
    let b = sample_smooth::<F>(&mut rng, g)?.curve;
    let (m, k) = (a.m as i64, a.k);
    let formal = [2 * k - 2 * m, 2 * k - 3 * m, 2 * k - 4 * m].map(|d| d as u32);
    let ps = pencil_conditions(&a, &b);
    if ps.iter().any(|p| p.is_zero()) {
        return Err(degenerate("a triple-point condition vanishes on the whole pencil"));
    }

    let pairs = [(0, 1), (1, 2), (0, 2)];
    let mut rs = Vec::new();
    let mut inf_mult = usize::MAX;
    for (i, j) in pairs {
        let r = resultant_formal(&ps[i], &ps[j], "x0", formal[i], formal[j])?;
        if r.is_zero() {
            return Err(degenerate("shared component in the resultant; retry with new seed"));
        }
        let r = to_u(&r, "t");
        let top = 2 * (formal[i] + formal[j]) as usize;
        inf_mult = inf_mult.min(top - r.deg0());
        rs.push(r);
    }
    let t_poly = rs[1..].iter().fold(rs[0].clone(), |acc, r| acc.gcd(r));
    if !t_poly.is_squarefree() || inf_mult > 1 {
        return Err(degenerate("non-reduced triple-point locus"));
    }

    // Every root of T must carry exactly one triple fiber. Where P1 and P2
    // do not both drop degree, they share exactly one root iff the leading
    // coefficient s11 of their first subresultant is nonzero, and that root
    // is x0 = −s10/s11; P3 must vanish there as well.
    if t_poly.deg0() > 0 {
        let in_t = |p: &Poly<F>| -> Vec<UPoly<F>> { p.coeffs_in("x0").iter().map(|c| to_u(c, "t")).collect() };
        let lead = |p: &Poly<F>, d: u32| in_t(p).get(d as usize).cloned().unwrap_or_else(UPoly::zero);
        if t_poly.gcd(&lead(&ps[0], formal[0])).gcd(&lead(&ps[1], formal[1])).deg0() > 0 {
            return Err(degenerate("a triple fiber candidate at x = infinity"));
        }
        let s = subresultant_formal(&ps[0], &ps[1], "x0", formal[0], formal[1], 1)?;
        let (s10, s11) = (to_u(&s[0], "t"), to_u(&s[1], "t"));
        if t_poly.gcd(&s11).deg0() > 0 {
            return Err(degenerate("a member with two candidate triple fibers"));
        }
        let p3 = in_t(&ps[2]);
        let root = (-&s10).rem(&t_poly);
        let d3 = formal[2] as usize;
        let mut num = vec![UPoly::one()];
        let mut den = vec![UPoly::one()];
        for _ in 0..d3 {
            num.push((num.last().unwrap() * &root).rem(&t_poly));
            den.push((den.last().unwrap() * &s11).rem(&t_poly));
        }
        let mut v = UPoly::zero();
        for (i, c) in p3.iter().enumerate() {
            v = &v + &(&(c * &num[i]) * &den[d3 - i]).rem(&t_poly);
        }
        if !v.rem(&t_poly).is_zero() {
            return Err(degenerate("the resultants share a root without a triple fiber"));
        }
    }
    if inf_mult == 1 {
        let ps1 = pencil_conditions(&b, &a).map(|p| to_u(&p.eval_var("t", &F::zero()), "x0"));
        if common_binary_roots(&ps1, &formal.map(|d| d as usize)) != 1 {
            return Err(degenerate("the member at infinity is not a simple solution"));
        }
    }

    let count = t_poly.deg0() + inf_mult;
    let predicted = z_degree(g)?.to_i64().ok_or_else(|| Error::Invalid("non-integral prediction".into()))?;
    Ok(PencilExperiment {
        genus: g,
        seed,
        field: FieldTag::of::<F>(),
        members: [a.to_json_value(), b.to_json_value()],
        count,
        at_infinity: inf_mult,
        predicted,
        matches: count as i64 == predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hirzebruch::{FmDivisor, FmRing, structure_classes};
    use crate::scalar::Fp;

    type Q = Rational;

    fn q(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&a| rint(a)).collect()
    }

    /// `(x₀² + x₁²)·y₀³ + x₀x₁·y₁³` on `F_0`.
    pub(super) fn four_triple_points() -> TrigonalCurve<Q> {
        TrigonalCurve::new(0, 2, [q(&[1, 0, 1]), q(&[0, 0, 0]), q(&[0, 0, 0]), q(&[0, 1, 0])]).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_from_class(0, 2).unwrap(), 2);
        assert_eq!(genus_from_class(1, 4).unwrap(), 3);
        assert_eq!(genus_from_class(0, 3).unwrap(), 4);
        assert!(genus_from_class(0, 1).is_err());
    }

    #[test]
    fn genus_agrees_with_adjunction() {
        for m in 0..2u32 {
            for k in 2..12 {
                let Ok(g) = genus_from_class(m, k) else { continue };
                let fm = FmRing::new(m);
                let c = FmDivisor::new(k, 3);
                let ck = &c + &structure_classes(m).k;
                assert_eq!(fm.intersect(&c, &ck) / rint(2) + rint(1), rint(g));
            }
        }
    }

    #[test]
    fn smoothness_examples() {
        assert!(four_triple_points().is_smooth());
        // Common factor x₀ in every coefficient.
        let c = TrigonalCurve::new(0, 2, [q(&[0, 1, 0]), q(&[0, 0, 1]), q(&[0, 1, 1]), q(&[0, 1, 0])]).unwrap();
        assert!(!c.is_smooth());
        // c₂ = c₃ = 0, so y₀² divides G.
        let c = TrigonalCurve::new(0, 2, [q(&[1, 0, 1]), q(&[0, 1, 0]), q(&[0, 0, 0]), q(&[0, 0, 0])]).unwrap();
        assert!(!c.is_smooth());
        // y₁·(x₁y₁ − x₀y₀)·(x₁y₁ + x₀y₀): three components that meet.
        let c = TrigonalCurve::new(0, 2, [q(&[0, 0, 0]), q(&[0, 0, -1]), q(&[0, 0, 0]), q(&[1, 0, 0])]).unwrap();
        assert!(!c.is_smooth());
    }

    /// Reference test: resultant plus dynamic evaluation on all four charts.
    fn smooth_reference(c: &TrigonalCurve<Q>) -> bool {
        use crate::poly::resultant;
        let as_mod = |p: &Poly<Q>| -> ModPoly<Q> { trim(p.coeffs_in("y").iter().map(|c| to_u(c, "x")).collect()) };
        [XChart::X1, XChart::X0].iter().all(|&xc| {
            [YChart::Y0, YChart::Y1].iter().all(|&yc| {
                let g = c.chart(xc, yc);
                if g.degree_in("y").unwrap_or(0) == 0 {
                    return false;
                }
                let (gy, gx) = (g.derivative("y"), g.derivative("x"));
                let r = resultant(&g, &gy, "y").unwrap();
                if r.is_zero() {
                    return false;
                }
                let r = to_u(&r, "x");
                r.deg0() == 0
                    || gcd_many(&r.squarefree_part(), &[as_mod(&g), as_mod(&gy), as_mod(&gx)])
                        .iter()
                        .all(|c| c.degree() == Some(0))
            })
        })
    }

    #[test]
    fn smoothness_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut smooth, mut singular) = (0, 0);
        for (m, k) in [(0u32, 2i64), (1, 4), (0, 3)] {
            for _ in 0..60 {
                let mut cs: [Vec<Q>; 4] = Default::default();
                for (i, c) in cs.iter_mut().enumerate() {
                    for _ in 0..=coeff_degree(m, k, i) {
                        let v = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-1..=1) };
                        c.push(rint(v));
                    }
                }
                let Ok(c) = TrigonalCurve::new(m, k, cs) else { continue };
                let fast = c.is_smooth();
                assert_eq!(fast, smooth_reference(&c), "{}", c.to_json());
                assert_eq!(fast, c.is_smooth_exact());
                if fast {
                    smooth += 1;
                } else {
                    singular += 1;
                }
            }
        }
        assert!(smooth > 10 && singular > 10, "{smooth} smooth, {singular} singular");
    }

    #[test]
    fn planted_singularity() {
        // c_0 and c_1 vanish to order 2 and 1 at x₀ = 0: G is singular at
        // x₀ = 0, y₁ = 0 on the chart x₁ = y₀ = 1.
        let c = TrigonalCurve::new(1, 4, [q(&[0, 0, 1, 2, 1]), q(&[0, 3, 1, -1]), q(&[2, 1, 1]), q(&[1, 1])]).unwrap();
        assert!(!c.is_smooth());
        assert!(!smooth_reference(&c));
    }

    #[test]
    fn four_triple_point_report() {
        let c = four_triple_points();
        let r = branch_report(&c).unwrap();
        assert_eq!(r.disc_degree, 8);
        assert_eq!(r.branch_point_count(), 4);
        assert_eq!(r.weighted_degree(), 8);
        assert!(r.points.iter().all(|p| p.multiplicity == 2 && p.profile == Profile::Triple));
        let factors: Vec<String> = r.points.iter().map(|p| p.factor().to_string()).collect();
        assert_eq!(factors, vec!["x0", "x1", "x0^2 + x1^2"]);
        assert_eq!(r.total_ramification(), 8);
        let audit = forbidden_strata_audit(&c).unwrap();
        assert!(audit.pass);
        assert_eq!(audit.fibers.len(), 3);
        assert!(audit.fibers.iter().all(|f| f.multiple_roots == 1 && f.max_root_multiplicity == 3));
        assert!(audit.to_text().contains("S_{3^1} violations: 0"));
    }

    #[test]
    fn simple_fiber_profile() {
        // Over x₀ = 0 the fiber is (y−1)²(y+2) = y³ − 3y + 2 in y = y₁/y₀.
        // c_0 y₀³ + c_1 y₀²y₁ + c_2 y₀y₁² + c_3 y₁³ with c_i at x₀ = 0: (2, −3, 0, 1).
        let c = TrigonalCurve::new(0, 2, [q(&[2, 1, 0]), q(&[-3, 0, 1]), q(&[0, 2, 0]), q(&[1, 0, 3])]).unwrap();
        let fib = c.fiber_cubic();
        let at0 = |p: &Poly<Q>| p.eval_all(&[("x0", rint(0)), ("x1", rint(1))]).unwrap();
        assert_eq!([at0(&fib.c3), at0(&fib.c2), at0(&fib.c1), at0(&fib.c0)], [rint(2), rint(-3), rint(0), rint(1)]);
        assert!(c.is_smooth());
        let r = branch_report(&c).unwrap();
        let p = r.points.iter().find(|p| p.factor().to_string() == "x0").unwrap();
        assert_eq!((p.profile, p.multiplicity), (Profile::Simple, 1));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = random_smooth_curve::<Q>(2, 1).unwrap();
        let b = random_smooth_curve::<Q>(2, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.curve.is_smooth());
        let c = random_smooth_curve::<Q>(3, 7).unwrap().curve;
        assert_eq!((c.m(), c.k()), (1, 4));
        assert_eq!(c.coeffs().iter().map(|v| v.len()).collect::<Vec<_>>(), vec![5, 4, 3, 2]);
    }

    #[test]
    fn random_curve_branching() {
        let c = random_smooth_curve::<Q>(2, 1).unwrap().curve;
        let r = branch_report(&c).unwrap();
        assert_eq!(r.weighted_degree(), 8);
        assert_eq!(r.total_ramification(), 8);
        let audit = forbidden_strata_audit(&c).unwrap();
        assert!(audit.pass);
    }

    #[test]
    fn json_round_trip() {
        let c = random_smooth_curve::<Q>(3, 2).unwrap().curve;
        let s = c.to_json();
        assert!(s.contains("\"type\": \"Q\""));
        assert_eq!(TrigonalCurve::<Q>::from_json(&s).unwrap(), c);
        assert!(TrigonalCurve::<Fp<1_000_003>>::from_json(&s).is_err());
        let f = random_smooth_curve::<Fp<1_000_003>>(2, 2).unwrap().curve;
        let s = f.to_json();
        assert!(s.contains("\"p\": 1000003"));
        assert_eq!(TrigonalCurve::<Fp<1_000_003>>::from_json(&s).unwrap(), f);
    }

    #[test]
    fn evaluation_ranks() {
        assert_eq!(jet_evaluation_rank(2, 3, None, 1).unwrap(), 3);
        assert_eq!(jet_evaluation_rank(2, 2, None, 1).unwrap(), 2);
        assert_eq!(jet_evaluation_rank(3, 3, Some((rint(2), rint(5))), 0).unwrap(), 3);
        assert!(jet_evaluation_rank(2, 4, None, 1).is_err());
    }

    #[test]
    fn pencil_genus_two() {
        let e = pencil_triple_count::<Q>(2, 1).unwrap();
        assert_eq!(e.count, 12, "{e:?}");
        assert!(e.matches);
    }
}
