//! Leading coefficients of the sl3 polynomial and the Seifert-graph formulas
//! and predicates built on them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, Resolution, State};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::seifert::{run_profile, SeifertGraph, SeifertReport};
use crate::statesum::StateSum;

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Leading degree and the three leading coefficients at spacing 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gammas {
    pub n: i32,
    pub gamma1: i64,
    pub gamma2: i64,
    pub gamma3: i64,
}

pub fn gammas(p: &LaurentPoly) -> Result<Gammas> {
    let n = p
        .degree()
        .ok_or_else(|| Error::Precondition("zero polynomial has no leading terms".into()))?;
    Ok(Gammas {
        n,
        gamma1: p.coeff_at(n),
        gamma2: p.coeff_at(n - 2),
        gamma3: p.coeff_at(n - 4),
    })
}

/// One named equality between a predicted and an observed integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: i64,
    pub actual: i64,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: i64, actual: i64) -> Self {
        Check {
            name: name.into(),
            expected,
            actual,
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}

fn require_positive(d: &LinkDiagram) -> Result<()> {
    if !d.is_positive() {
        return Err(Error::Precondition("diagram has negative crossings".into()));
    }
    Ok(())
}

/// Polynomial, coefficients, Seifert data and predicates of one diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub polynomial: LaurentPoly,
    pub n: i32,
    pub gamma1: i64,
    pub gamma2: i64,
    pub gamma3: i64,
    pub v: usize,
    pub e: usize,
    pub e_prime: usize,
    pub mu: usize,
    pub theta: usize,
    pub positive: bool,
    pub connected: bool,
    /// Reduced Seifert graph is a tree; only set for connected positive diagrams.
    pub is_fibered_criterion: Option<bool>,
    pub braid_positivity_obstructed: bool,
    pub reasons: Vec<String>,
}

impl InvariantReport {
    pub fn compute(d: &LinkDiagram, ss: &StateSum) -> Result<Self> {
        let polynomial = ss.invariant(d)?;
        Self::from_parts(d, polynomial)
    }

    /// Builds the report around an already computed polynomial.
    pub fn from_parts(d: &LinkDiagram, polynomial: LaurentPoly) -> Result<Self> {
        let g = gammas(&polynomial)?;
        let s = SeifertGraph::of_diagram(d).report();
        let positive = d.is_positive();
        let connected = d.is_connected();
        let mut report = InvariantReport {
            polynomial,
            n: g.n,
            gamma1: g.gamma1,
            gamma2: g.gamma2,
            gamma3: g.gamma3,
            v: s.v,
            e: s.e,
            e_prime: s.e_prime,
            mu: s.mu,
            theta: s.theta,
            positive,
            connected,
            is_fibered_criterion: (positive && connected).then_some(s.is_tree),
            braid_positivity_obstructed: false,
            reasons: Vec::new(),
        };
        let verdict = braid_positivity_obstruction(&report, &BraidHints::default());
        report.braid_positivity_obstructed = verdict.obstructed;
        report.reasons = verdict.reasons;
        Ok(report)
    }

    pub fn gammas(&self) -> Gammas {
        Gammas {
            n: self.n,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            gamma3: self.gamma3,
        }
    }
}

/// Outcome of the coefficient-formula checks on one positive diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub stats: SeifertReport,
    pub gammas: Gammas,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

/// Compares the state-sum polynomial of a positive diagram with the
/// Seifert-graph predictions for its leading degree and first three
/// coefficients, and checks the all-O expansion of `q^-2e [3]^v`.
///
/// Disconnected diagrams are accepted: every quantity involved is additive
/// over split components, so the formulas hold with `v` counting all circles.
pub fn verify_coefficient_theorems(d: &LinkDiagram, ss: &StateSum) -> Result<TheoremReport> {
    require_positive(d)?;
    let p = ss.invariant(d)?;
    verify_with_polynomial(d, &p)
}

/// As [`verify_coefficient_theorems`] with a precomputed polynomial.
pub fn verify_with_polynomial(d: &LinkDiagram, p: &LaurentPoly) -> Result<TheoremReport> {
    require_positive(d)?;
    let g = gammas(p)?;
    let s = SeifertGraph::of_diagram(d).report();
    let (v, e, ep, mu, th) = (s.v as i64, s.e as i64, s.e_prime as i64, s.mu as i64, s.theta as i64);
    let odd = p.terms().filter(|&(x, _)| x % 2 != 0).count() as i64;
    let all_o = LaurentPoly::qint3().pow(s.v as u32).shift(-2 * s.e as i32);
    let top = 2 * (v - e) as i32;
    let checks = vec![
        Check::new("leading degree = 2(v-e)", 2 * (v - e), g.n as i64),
        Check::new("gamma1 = 1", 1, g.gamma1),
        Check::new("gamma2 = v-e'", v - ep, g.gamma2),
        Check::new("gamma3 = C(v-e'+1,2)+mu-theta", binom(v - ep + 1, 2) + mu - th, g.gamma3),
        Check::new("odd exponents", 0, odd),
        Check::new("all-O second coefficient = v", v, all_o.coeff_at(top - 2)),
        Check::new("all-O third coefficient = C(v,1)+C(v,2)", v + binom(v, 2), all_o.coeff_at(top - 4)),
    ];
    Ok(TheoremReport {
        stats: s,
        gammas: g,
        checks,
    })
}

/// Tree test of the reduced Seifert graph, with a cycle as certificate when
/// it fails, cross-checked against `gamma2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberedVerdict {
    pub is_tree: bool,
    pub gamma2: i64,
    /// Vertex cycle in the reduced Seifert graph when it is not a tree.
    pub cycle: Option<Vec<usize>>,
    pub consistent: bool,
}

pub fn fibered_criterion(d: &LinkDiagram, ss: &StateSum) -> Result<FiberedVerdict> {
    require_positive(d)?;
    if !d.is_connected() {
        return Err(Error::Precondition("diagram is not connected".into()));
    }
    let red = SeifertGraph::of_diagram(d).reduce();
    let is_tree = red.is_tree();
    let gamma2 = gammas(&ss.invariant(d)?)?.gamma2;
    Ok(FiberedVerdict {
        is_tree,
        gamma2,
        cycle: if is_tree { None } else { red.find_cycle() },
        consistent: is_tree == (gamma2 == 1),
    })
}

/// Caller-supplied topological facts; nothing here is decided by the library.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidHints {
    pub assume_knot: bool,
    /// Number of prime factors, if known.
    pub prime_count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidVerdict {
    pub obstructed: bool,
    pub reasons: Vec<String>,
}

/// Closed positive braids have `gamma1 = gamma2 = 1`, and a knot with `p`
/// prime factors has `gamma3 = p + 1`. Any violation obstructs; passing never
/// proves positivity.
pub fn braid_positivity_obstruction(report: &InvariantReport, hints: &BraidHints) -> BraidVerdict {
    let mut reasons = Vec::new();
    if report.gamma1 != 1 {
        reasons.push(format!("gamma1 = {} (closed positive braids have 1)", report.gamma1));
    }
    if report.gamma2 != 1 {
        reasons.push(format!("gamma2 = {} (closed positive braid knots have 1)", report.gamma2));
    }
    if let (true, Some(p)) = (hints.assume_knot, hints.prime_count) {
        if report.gamma3 != p as i64 + 1 {
            reasons.push(format!(
                "gamma3 = {} but {p} prime factor(s) require {}",
                report.gamma3,
                p + 1
            ));
        }
    }
    BraidVerdict {
        obstructed: !reasons.is_empty(),
        reasons,
    }
}

/// Connected-sum bookkeeping for a knot built from prime positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSumReport {
    pub parts: Vec<Gammas>,
    pub sum: Gammas,
    pub lambda_parts: Vec<i64>,
    pub lambda: i64,
    pub checks: Vec<Check>,
    /// `[3]^(p-1) <<K>> = prod <<K_j>>`.
    pub polynomial_identity: bool,
    /// `<<K_1 ⊔ ... ⊔ K_p>> = prod <<K_j>>`.
    pub disjoint_identity: bool,
}

impl ConnectedSumReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks) && self.polynomial_identity && self.disjoint_identity
    }
}

fn lambda(d: &LinkDiagram) -> i64 {
    let s = SeifertGraph::of_diagram(d).report();
    s.mu as i64 - s.theta as i64
}

/// Forms the connected sum of the given parts (each taken to be prime) and
/// checks `gamma2(K) = 1 - p + Σ gamma2(K_j)`, `lambda(K) = Σ lambda(K_j)`
/// with `lambda = mu - theta`, and `gamma3(K) = C(gamma2+1, 2) + lambda`.
pub fn connected_sum_check(parts: &[LinkDiagram], ss: &StateSum) -> Result<ConnectedSumReport> {
    if parts.len() < 2 {
        return Err(Error::Precondition("a connected sum needs at least two parts".into()));
    }
    for d in parts {
        require_positive(d)?;
    }
    let sum = parts[1..]
        .iter()
        .try_fold(parts[0].clone(), |acc, d| acc.connected_sum(d, 0, 0))?;
    let union = parts[1..]
        .iter()
        .fold(parts[0].clone(), |acc, d| acc.disjoint_union(d));
    let polys = parts.iter().map(|d| ss.invariant(d)).collect::<Result<Vec<_>>>()?;
    let sum_poly = ss.invariant(&sum)?;
    let part_g = polys.iter().map(gammas).collect::<Result<Vec<_>>>()?;
    let g = gammas(&sum_poly)?;
    let lambda_parts: Vec<i64> = parts.iter().map(lambda).collect();
    let lam = lambda(&sum);
    let p = parts.len() as i64;
    let product: LaurentPoly = polys.iter().cloned().product();
    let checks = vec![
        Check::new(
            "gamma2(K) = 1-p+sum gamma2(K_j)",
            1 - p + part_g.iter().map(|x| x.gamma2).sum::<i64>(),
            g.gamma2,
        ),
        Check::new("lambda(K) = sum lambda(K_j)", lambda_parts.iter().sum(), lam),
        Check::new("gamma3(K) = C(gamma2+1,2)+lambda", binom(g.gamma2 + 1, 2) + lam, g.gamma3),
    ];
    Ok(ConnectedSumReport {
        parts: part_g,
        sum: g,
        lambda_parts,
        lambda: lam,
        checks,
        polynomial_identity: LaurentPoly::qint3().pow(parts.len() as u32 - 1) * &sum_poly == product,
        disjoint_identity: ss.invariant(&union)? == product,
    })
}

/// Decomposition of an alternating positive diagram into (2, k) torus link
/// factors, read off the reduced Seifert graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltBraidVerdict {
    /// Twist counts `k` of the (2, k) factors, one per reduced edge; `None`
    /// when the Seifert data does not have the shape of such a sum.
    pub factors: Option<Vec<usize>>,
    pub theta: usize,
    pub is_tree: bool,
    /// Per-factor Seifert shape checks.
    pub checks: Vec<Check>,
    /// `[3]^(f-1) <<D>> = prod <<T(2,k)>>`, when factors were found.
    pub polynomial_identity: Option<bool>,
}

impl AltBraidVerdict {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks) && self.polynomial_identity != Some(false)
    }
}

/// For a connected positive alternating diagram: alternation forces
/// theta = 0, and when the reduced Seifert graph is a tree every reduced
/// edge is one twist region, i.e. a (2, k) torus factor with mu = 1 and a
/// single reduced edge of its own. The factor product is cross-checked
/// against the state sum.
pub fn alternating_positive_braid_classifier(d: &LinkDiagram, ss: &StateSum) -> Result<AltBraidVerdict> {
    require_positive(d)?;
    if !d.is_alternating() {
        return Err(Error::Precondition("diagram is not alternating".into()));
    }
    if !d.is_connected() {
        return Err(Error::Precondition("diagram is split".into()));
    }
    let g = SeifertGraph::of_diagram(d);
    let red = g.reduce();
    let s = g.report();
    let mut checks = vec![Check::new("theta of an alternating diagram", 0, s.theta as i64)];
    if !s.is_tree || s.theta != 0 {
        return Ok(AltBraidVerdict {
            factors: None,
            theta: s.theta,
            is_tree: s.is_tree,
            checks,
            polynomial_identity: None,
        });
    }
    let factors = red.multiplicities();
    let mut product = LaurentPoly::one();
    for &k in &factors {
        let t = LinkDiagram::from_braid_word(&vec![1; k], 2)?;
        let ts = SeifertGraph::of_diagram(&t).report();
        checks.push(Check::new(format!("T(2,{k}) reduced edges"), 1, ts.e_prime as i64));
        checks.push(Check::new(format!("T(2,{k}) mu"), i64::from(k > 1), ts.mu as i64));
        checks.push(Check::new(format!("T(2,{k}) theta"), 0, ts.theta as i64));
        product *= &ss.invariant(&t)?;
    }
    let whole = ss.invariant(d)?;
    Ok(AltBraidVerdict {
        polynomial_identity: Some(LaurentPoly::qint3().pow(factors.len() as u32 - 1) * whole == product),
        factors: Some(factors),
        theta: s.theta,
        is_tree: true,
        checks,
    })
}

/// Connected sum that keeps alternation: the second diagram is cut at an arc
/// of the same kind (over-to-under or under-to-over) as arc 0 of the first.
pub fn alternating_connected_sum(d1: &LinkDiagram, d2: &LinkDiagram) -> Result<LinkDiagram> {
    let kind = |d: &LinkDiagram, a: usize| d.arc_ends(a).head.1 == 0;
    let want = kind(d1, 0);
    let arc2 = (0..d2.num_arcs())
        .find(|&a| kind(d2, a) == want)
        .ok_or_else(|| Error::Precondition("no matching arc in the second diagram".into()))?;
    d1.connected_sum(d2, 0, arc2)
}

/// Brute-force counts of semi-mixed supports for one mixing index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingReport {
    pub m: usize,
    /// `C_{u,v}` keyed by `(u, v)`; serialized as `[u, v, count]` triples.
    #[serde(with = "pair_keyed")]
    pub counts: BTreeMap<(usize, usize), i64>,
    pub checks: Vec<Check>,
    /// Σ over semi-mixed supports of `(-1)^(|I_u|+|I_v|)`.
    pub support_alternating_sum: i64,
    /// Run lengths used for the state-level sums.
    pub profile: Vec<usize>,
    /// Σ over semi-mixed states of `(-1)^β`, weighted by edge choices.
    pub state_alternating_sum: i64,
    /// Supports whose state sum differs from `(-1)^(|I_u|+|I_v|)`.
    pub chunk_failures: usize,
}

impl MixingReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks) && self.support_alternating_sum == 0 && self.state_alternating_sum == 0 && self.chunk_failures == 0
    }
}

mod pair_keyed {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<(usize, usize), i64>, s: S) -> Result<S::Ok, S::Error> {
        map.iter().map(|(&(u, v), &c)| (u, v, c)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), i64>, D::Error> {
        Ok(Vec::<(usize, usize, i64)>::deserialize(d)?
            .into_iter()
            .map(|(u, v, c)| ((u, v), c))
            .collect())
    }
}

/// Letters of the slot word `a_1 b_1 ... a_m b_m` that are present.
fn support_word(m: usize, iu: u32, iv: u32) -> Vec<u8> {
    let mut w = Vec::with_capacity(2 * m);
    for j in 0..m {
        if iu >> j & 1 == 1 {
            w.push(1);
        }
        if iv >> j & 1 == 1 {
            w.push(2);
        }
    }
    w
}

fn is_semi_mixed(m: usize, iu: u32, iv: u32) -> bool {
    iu != 0 && iv != 0 && run_profile(&support_word(m, iu, iv)).1 == 1
}

/// Closed formula for `C_{u,v} / m` with `u <= v`.
pub fn c_bar_formula(m: usize, u: usize, v: usize) -> i64 {
    let (u, v) = (u.min(v) as i64, u.max(v) as i64);
    let m = m as i64;
    if u == 1 {
        return binom(m, v);
    }
    (v + 1..=m - u + 2).map(|i| binom(i - 1, v) * binom(m - i, u - 2)).sum()
}

/// Enumerates all support pairs `(I_u, I_v)` for mixing index `m` and checks
/// the count formula, the shift symmetry and the vanishing alternating sums.
/// `profile` gives run lengths `a_1, b_1, ..., a_m, b_m` for the state-level
/// sum; the default alternates 2 and 1.
pub fn verify_mixing_combinatorics(m: usize, profile: Option<&[usize]>) -> Result<MixingReport> {
    if !(2..=12).contains(&m) {
        return Err(Error::Precondition(format!("mixing index {m} outside 2..=12")));
    }
    let profile: Vec<usize> = match profile {
        Some(p) if p.len() == 2 * m && p.iter().all(|&x| x >= 1) => p.to_vec(),
        Some(p) => {
            return Err(Error::Precondition(format!(
                "profile {p:?} must have {} positive entries",
                2 * m
            )))
        }
        None => (0..2 * m).map(|i| if i % 2 == 0 { 2 } else { 1 }).collect(),
    };
    let full = (1u32 << m) - 1;
    let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut support_sum = 0i64;
    for iu in 1..=full {
        for iv in 1..=full {
            if is_semi_mixed(m, iu, iv) {
                let (u, v) = (iu.count_ones() as usize, iv.count_ones() as usize);
                *counts.entry((u, v)).or_default() += 1;
                support_sum += if (u + v) % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    let get = |u: usize, v: usize| counts.get(&(u, v)).copied().unwrap_or(0);
    let mut checks = Vec::new();
    for u in 1..=m {
        for v in u..=m {
            let c = get(u, v);
            checks.push(Check::new(format!("m={m} C({u},{v}) divisible by m"), 0, c % m as i64));
            checks.push(Check::new(format!("m={m} Cbar({u},{v})"), c_bar_formula(m, u, v), c / m as i64));
            checks.push(Check::new(format!("m={m} C({u},{v}) = C({v},{u})"), c, get(v, u)));
            if u > 1 && v > 1 {
                checks.push(Check::new(format!("m={m} C({u},{v}) = C({},{})", u + 1, v - 1), c, get(u + 1, v - 1)));
            }
        }
    }
    let (state_sum, chunk_failures) = state_level_sums(m, &profile)?;
    Ok(MixingReport {
        m,
        counts,
        checks,
        support_alternating_sum: support_sum,
        profile,
        state_alternating_sum: state_sum,
        chunk_failures,
    })
}

/// Sums `(-1)^β` times the number of edge choices over all semi-mixed
/// states with the given run lengths, per support and in total.
fn state_level_sums(m: usize, profile: &[usize]) -> Result<(i64, usize)> {
    let total: usize = profile.iter().map(|&x| x + 1).product();
    if total > 20_000_000 {
        return Err(Error::Precondition(format!("{total} states is too many to enumerate")));
    }
    let mut per_support: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let mut counter = vec![0usize; 2 * m];
    'outer: loop {
        let (mut iu, mut iv) = (0u32, 0u32);
        let mut weight = 1i64;
        for (slot, &k) in counter.iter().enumerate() {
            if k > 0 {
                if slot % 2 == 0 {
                    iu |= 1 << (slot / 2);
                } else {
                    iv |= 1 << (slot / 2);
                }
            }
            weight *= binom(profile[slot] as i64, k as i64);
            if k % 2 == 1 {
                weight = -weight;
            }
        }
        if is_semi_mixed(m, iu, iv) {
            *per_support.entry((iu, iv)).or_default() += weight;
        }
        for slot in 0..2 * m {
            counter[slot] += 1;
            if counter[slot] <= profile[slot] {
                continue 'outer;
            }
            counter[slot] = 0;
        }
        break;
    }
    let failures = per_support
        .iter()
        .filter(|&(&(iu, iv), &s)| {
            let want = if (iu.count_ones() + iv.count_ones()) % 2 == 0 { 1 } else { -1 };
            s != want
        })
        .count();
    Ok((per_support.values().sum(), failures))
}

/// Per-pair audit of states whose W-resolutions lie over one mixed pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiMixedAudit {
    pub pairs: usize,
    pub states: usize,
    /// Number of audited states by state mixing index.
    pub by_index: BTreeMap<usize, usize>,
    pub degree_failures: usize,
    pub identity_failures: usize,
    /// Σ of the `q^(2(v-e-2))` coefficients of semi-mixed states.
    pub semi_mixed_leading_sum: i64,
}

impl SemiMixedAudit {
    pub fn passed(&self) -> bool {
        self.degree_failures == 0 && self.identity_failures == 0 && self.semi_mixed_leading_sum == 0
    }
}

/// Web value predicted for a state over one mixed pair with `beta`
/// W-resolutions and state mixing index `n`.
pub fn mixed_pair_web_value(v: usize, beta: usize, n: usize) -> LaurentPoly {
    let q2 = LaurentPoly::qint2();
    let inner = &q2.pow(2) + &(1..n).map(|i| q2.pow(2 * i as u32)).sum::<LaurentPoly>();
    q2.pow((beta - 2 * n) as u32) * LaurentPoly::qint3().pow(v as u32 - 2) * inner
}

/// For each mixed pair of a positive diagram, enumerates every state whose
/// W-set lies in the lifts of the pair and meets both edges; compares the
/// web value and degree with the closed forms, and sums the leading terms of
/// the semi-mixed states.
pub fn semi_mixed_state_audit(d: &LinkDiagram, ss: &StateSum) -> Result<SemiMixedAudit> {
    require_positive(d)?;
    let g = SeifertGraph::of_diagram(d);
    let red = g.reduce();
    let pairs: Vec<_> = g.adjacent_pairs(&red).into_iter().filter(|p| p.is_mixed()).collect();
    if pairs.is_empty() {
        return Err(Error::Precondition("diagram has no mixed pair".into()));
    }
    let (v, e) = (g.num_vertices as i32, d.num_crossings() as i32);
    let mut audit = SemiMixedAudit {
        pairs: pairs.len(),
        states: 0,
        by_index: BTreeMap::new(),
        degree_failures: 0,
        identity_failures: 0,
        semi_mixed_leading_sum: 0,
    };
    for pair in &pairs {
        let l1 = &red.lifts[pair.edges.0];
        let l2 = &red.lifts[pair.edges.1];
        let k = l1.len() + l2.len();
        if k > 20 {
            return Err(Error::CapExceeded { count: k, cap: 20 });
        }
        let lifts: Vec<usize> = l1.iter().chain(l2).copied().collect();
        let results: Vec<(usize, bool, bool, i64)> = (0..1u64 << k)
            .into_par_iter()
            .filter(|mask| mask & ((1 << l1.len()) - 1) != 0 && mask >> l1.len() != 0)
            .map(|mask| {
                let mut res = vec![Resolution::O; d.num_crossings()];
                let mut owner = vec![0u8; d.num_crossings()];
                for (bit, &c) in lifts.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        res[c] = Resolution::W;
                        owner[c] = if bit < l1.len() { 1 } else { 2 };
                    }
                }
                let seq: Vec<u8> = g.rotation[pair.vertex]
                    .iter()
                    .map(|&c| owner[c])
                    .filter(|&o| o != 0)
                    .collect();
                let n = run_profile(&seq).1;
                let beta = mask.count_ones() as usize;
                let w = ss.state_weight(d, &State(res))?;
                let identity_ok = w.web_value == mixed_pair_web_value(g.num_vertices, beta, n);
                let want_deg = 2 * (v - e - 2 - n as i32) + 2.max(2 * (n as i32 - 1));
                let degree_ok = w.weight.degree() == Some(want_deg);
                let lead = if n == 1 { w.weight.coeff_at(2 * (v - e - 2)) } else { 0 };
                Ok((n, identity_ok, degree_ok, lead))
            })
            .collect::<Result<_>>()?;
        for (n, identity_ok, degree_ok, lead) in results {
            audit.states += 1;
            *audit.by_index.entry(n).or_default() += 1;
            audit.identity_failures += usize::from(!identity_ok);
            audit.degree_failures += usize::from(!degree_ok);
            audit.semi_mixed_leading_sum += lead;
        }
    }
    Ok(audit)
}

/// Seifert data claimed for the cyclic Conway-sum family `K_n`, and the
/// coefficients they imply. The diagrams themselves are not constructed.
pub fn kn_family_checks(n: i64) -> Vec<Check> {
    let (v, ep, mu, th) = (6 * n + 5, 6 * n + 4, 6 * n + 4, 6 * n + 3);
    let g2 = v - ep;
    vec![
        Check::new(format!("K_{n} gamma2 = v-e'"), 1, g2),
        Check::new(format!("K_{n} gamma3 = C(gamma2+1,2)+mu-theta"), 2, binom(g2 + 1, 2) + mu - th),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(word: &[i32], strands: usize) -> LinkDiagram {
        LinkDiagram::from_braid_word(word, strands).unwrap()
    }

    #[test]
    fn gammas_of_small_knots() {
        let ss = StateSum::new();
        let g = gammas(&LaurentPoly::qint3()).unwrap();
        assert_eq!((g.n, g.gamma1, g.gamma2, g.gamma3), (2, 1, 1, 1));
        let g = gammas(&ss.invariant(&braid(&[1, 1, 1], 2)).unwrap()).unwrap();
        assert_eq!((g.n, g.gamma1, g.gamma2, g.gamma3), (-2, 1, 1, 2));
        assert!(gammas(&LaurentPoly::zero()).is_err());
    }

    #[test]
    fn torus_two_strand_family() {
        let ss = StateSum::new();
        for n in 2..=7 {
            let d = braid(&vec![1; n], 2);
            let r = verify_coefficient_theorems(&d, &ss).unwrap();
            assert!(r.passed(), "{:?}", r.failures());
            assert_eq!((r.gammas.gamma2, r.gammas.gamma3), (1, 2));
        }
    }

    #[test]
    fn negative_diagram_is_refused() {
        let ss = StateSum::new();
        assert!(matches!(
            verify_coefficient_theorems(&braid(&[-1, -1, -1], 2), &ss),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fibered_criterion_and_cycle_certificate() {
        let ss = StateSum::new();
        let f = fibered_criterion(&braid(&[1, 1, 2, 2, 1, 1, 2, 2], 3), &ss).unwrap();
        assert!(f.is_tree && f.consistent && f.cycle.is_none());
        // positive 5_2 is not fibered
        let d = LinkDiagram::from_pd_str("X[1,5,2,4] X[3,9,4,8] X[5,1,6,10] X[7,3,8,2] X[9,7,10,6]").unwrap();
        assert!(d.is_positive());
        let f = fibered_criterion(&d, &ss).unwrap();
        assert!(!f.is_tree && f.consistent);
        assert!(f.gamma2 < 1);
        assert!(f.cycle.unwrap().len() >= 2);
    }

    #[test]
    fn braid_obstruction_rules() {
        let ss = StateSum::new();
        let r = InvariantReport::compute(&braid(&[1, 1, 1], 2), &ss).unwrap();
        let knot = BraidHints {
            assume_knot: true,
            prime_count: Some(1),
        };
        assert!(!braid_positivity_obstruction(&r, &knot).obstructed);
        let mut fake = r.clone();
        fake.gamma3 = 1;
        assert!(braid_positivity_obstruction(&fake, &knot).obstructed);
        assert!(!braid_positivity_obstruction(&fake, &BraidHints::default()).obstructed);
        fake.gamma2 = 0;
        assert!(braid_positivity_obstruction(&fake, &BraidHints::default()).obstructed);
    }

    #[test]
    fn trefoil_connected_sums() {
        let ss = StateSum::new();
        let t3 = braid(&[1, 1, 1], 2);
        let t5 = braid(&[1; 5], 2);
        let r = connected_sum_check(&[t3.clone(), t3.clone()], &ss).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.sum.gamma2, r.lambda, r.sum.gamma3), (1, 2, 3));
        assert!(connected_sum_check(&[t3, t5], &ss).unwrap().passed());
    }

    #[test]
    fn alternating_braid_factors() {
        let ss = StateSum::new();
        let t5 = braid(&[1; 5], 2);
        let v = alternating_positive_braid_classifier(&t5, &ss).unwrap();
        assert_eq!(v.factors, Some(vec![5]));
        assert!(v.passed());
        let t3 = braid(&[1; 3], 2);
        let sum = alternating_connected_sum(&t3, &t3).unwrap();
        assert!(sum.is_alternating() && sum.is_positive());
        let v = alternating_positive_braid_classifier(&sum, &ss).unwrap();
        assert_eq!(v.factors, Some(vec![3, 3]));
        assert!(v.passed());
        let t34 = braid(&[1, 2, 1, 2, 1, 2, 1, 2], 3);
        assert!(alternating_positive_braid_classifier(&t34, &ss).is_err());
        let k52 = LinkDiagram::from_pd_str("X[1,5,2,4] X[3,9,4,8] X[5,1,6,10] X[7,3,8,2] X[9,7,10,6]").unwrap();
        let v = alternating_positive_braid_classifier(&k52, &ss).unwrap();
        assert_eq!(v.factors, None);
        assert!(!v.is_tree);
    }

    #[test]
    fn mixing_formulas_small() {
        let r = verify_mixing_combinatorics(3, None).unwrap();
        assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
        assert_eq!(r.counts[&(1, 2)] / 3, 3);
        assert_eq!(r.counts[&(2, 2)], r.counts[&(3, 1)]);
        let back: MixingReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(verify_mixing_combinatorics(1, None).is_err());
        assert!(verify_mixing_combinatorics(2, Some(&[1, 1])).is_err());
    }

    #[test]
    fn semi_mixed_audit_on_small_mixed_diagram() {
        let ss = StateSum::new();
        let d = braid(&[1, 2, 1, 2], 3);
        let a = semi_mixed_state_audit(&d, &ss).unwrap();
        assert!(a.passed(), "{a:?}");
        assert!(a.by_index[&2] > 0 && a.by_index[&1] > 0);
        assert!(semi_mixed_state_audit(&braid(&[1, 1, 1], 2), &ss).is_err());
    }

    #[test]
    fn kn_arithmetic() {
        for n in 1..5 {
            assert!(kn_family_checks(n).iter().all(Check::passed));
        }
    }
}
