//! Randomized and exhaustive invariant suites.
//!
//! Each suite runs independent trials through [`Execution`], seeds trial `t`
//! with [`trial_rng`]`(seed, t)`, and reduces results in trial order, so a
//! report is identical under sequential and parallel execution.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::apartments::{divisor_invariance_check, general_membership, incident, intersect_in_apartment, Apartment};
use crate::correspondence::{intersect_maximal, maximal_orders_containing, ApartmentVertex};
use crate::dvr::{
    conjugate, diagonal_conjugates_integral, diagonal_witness, hermite_normal_form, in_split_order, lambda_membership,
    ring_closure_check, ClosureCheck, HermiteForm, LocalMatrix,
};
use crate::error::Result;
use crate::exponent::ExponentMatrix;
use crate::par::Execution;
use crate::polytope::{is_reduced, polytope_of};
use crate::rng::{trial_rng, TrialRng};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub detail: String,
    pub input: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: u64,
    /// Named tallies, e.g. how many sampled matrices were orders.
    pub counters: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }
}

#[derive(Default)]
struct Trial {
    failure: Option<(String, Value)>,
    tags: Vec<&'static str>,
}

impl Trial {
    fn tag(&mut self, t: &'static str) {
        self.tags.push(t);
    }

    fn fail(&mut self, detail: impl Into<String>, input: Value) {
        if self.failure.is_none() {
            self.failure = Some((detail.into(), input));
        }
    }

    fn check(&mut self, ok: bool, detail: &str, input: impl FnOnce() -> Value) {
        if !ok {
            self.fail(detail, input());
        }
    }

    fn from_error(e: crate::error::Error, input: Value) -> Trial {
        let mut t = Trial::default();
        t.fail(format!("unexpected error: {e}"), input);
        t
    }
}

fn run(name: &str, exec: Execution, count: u64, f: impl Fn(u64) -> Trial + Sync + Send) -> SuiteReport {
    let outcomes = exec.map_indexed(count, f);
    let mut counters = BTreeMap::new();
    let mut failures = Vec::new();
    for (trial, t) in outcomes.into_iter().enumerate() {
        for tag in t.tags {
            *counters.entry(tag.to_string()).or_insert(0) += 1;
        }
        if let Some((detail, input)) = t.failure {
            failures.push(Failure { trial: trial as u64, detail, input });
        }
    }
    SuiteReport { name: name.to_string(), trials: count, counters, failures }
}

/// Greedily moves off-diagonal entries toward zero while `fails` stays true.
pub fn shrink_matrix(nu: &ExponentMatrix, fails: impl Fn(&ExponentMatrix) -> bool) -> ExponentMatrix {
    let mut best = nu.clone();
    let n = nu.n();
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                let v = best.get(i, j);
                if i == j || v == 0 {
                    continue;
                }
                let step = v - v.signum();
                let cand = ExponentMatrix::from_fn(n, |a, b| if (a, b) == (i, j) { step } else { best.get(a, b) })
                    .expect("diagonal untouched");
                if fails(&cand) {
                    best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

/// First violated property of the exponent-matrix invariants, if any.
///
/// Order-ness is decided by the triple loop, reducedness by shortest paths
/// on the polytope; the two must agree.
pub fn exponent_matrix_violation(nu: &ExponentMatrix) -> Option<String> {
    match exponent_matrix_checks(nu) {
        Ok(None) => None,
        Ok(Some(msg)) => Some(msg.to_string()),
        Err(e) => Some(format!("unexpected error: {e}")),
    }
}

fn exponent_matrix_checks(nu: &ExponentMatrix) -> Result<Option<&'static str>> {
    let order = nu.is_order();
    let reduced = is_reduced(nu);
    if order != reduced {
        return Ok(Some("is_order disagrees with is_reduced"));
    }
    let feasible = nu.has_containing_maximal();
    let poly = polytope_of(nu);
    if poly.is_empty() == feasible {
        return Ok(Some("polytope emptiness disagrees with closure feasibility"));
    }
    if nu.n() == 2 && order != (nu.get(0, 1) + nu.get(1, 0) >= 0) {
        return Ok(Some("two-dimensional order criterion fails"));
    }
    if !feasible {
        if order {
            return Ok(Some("order without a containing maximal order"));
        }
        return Ok(None);
    }
    let hull = nu.order_hull()?;
    if order != (hull == *nu) {
        return Ok(Some("fixed-point characterization fails"));
    }
    if !hull.le(nu) {
        return Ok(Some("hull not dominated by input"));
    }
    if hull.order_hull()? != hull {
        return Ok(Some("hull not idempotent"));
    }
    if !hull.is_order() || !is_reduced(&hull) {
        return Ok(Some("hull is not a reduced order"));
    }
    let verts = maximal_orders_containing(nu)?;
    if verts != maximal_orders_containing(&hull)? {
        return Ok(Some("hull changes the lattice points"));
    }
    let back = intersect_maximal(&verts)?;
    if back != hull {
        return Ok(Some("intersection of containing maximal orders is not the hull"));
    }
    if reduced && back != *nu {
        return Ok(Some("reduced matrix not recovered by the round trip"));
    }
    for v in &verts {
        if !v.contains(nu) {
            return Ok(Some("enumerated vertex violates the containment bounds"));
        }
    }
    Ok(None)
}

/// Random exponent matrices: the order/reduced equivalence, hull laws and
/// the round trip, on each sample and on its hull.
pub fn bijection_sweep(n: usize, lo: i64, hi: i64, trials: u64, seed: u64, exec: Execution) -> SuiteReport {
    run(&format!("bijection n={n}"), exec, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let nu = match sample::exponent_matrix(&mut rng, n, lo, hi) {
            Ok(nu) => nu,
            Err(e) => return Trial::from_error(e, Value::Null),
        };
        let mut trial = Trial::default();
        if nu.is_order() {
            trial.tag("orders");
        }
        if nu.has_containing_maximal() {
            trial.tag("feasible");
            if let Ok(h) = nu.order_hull() {
                if let Some(msg) = exponent_matrix_violation(&h) {
                    trial.fail(format!("hull: {msg}"), json!(h));
                }
            }
        }
        if let Some(msg) = exponent_matrix_violation(&nu) {
            let min = shrink_matrix(&nu, |m| exponent_matrix_violation(m).is_some());
            trial.fail(msg, json!({ "sample": nu, "minimized": min }));
        }
        trial
    })
}

/// Random vertex sets: the intersection is an order, its polytope contains
/// the set, the round trip fixes it, and adding a vertex only raises entries.
pub fn vertex_set_sweep(n: usize, trials: u64, seed: u64, exec: Execution) -> SuiteReport {
    run(&format!("vertex sets n={n}"), exec, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let count = rng.random_range(1..=6);
        let input = |vs: &[ApartmentVertex]| json!(vs);
        let (vs, extra) = match (sample::vertices(&mut rng, n, count, -4, 4), sample::vertices(&mut rng, n, 1, -4, 4)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Trial::from_error(e, Value::Null),
        };
        let mut trial = Trial::default();
        let body = || -> Result<Option<&'static str>> {
            let mu = intersect_maximal(&vs)?;
            if !mu.is_order() {
                return Ok(Some("intersection is not an order"));
            }
            let around = maximal_orders_containing(&mu)?;
            if !vs.iter().all(|v| around.contains(v)) {
                return Ok(Some("polytope misses a generating vertex"));
            }
            if intersect_maximal(&around)? != mu {
                return Ok(Some("round trip changes the intersection"));
            }
            let mut more = vs.clone();
            more.extend(extra.iter().cloned());
            if !mu.le(&intersect_maximal(&more)?) {
                return Ok(Some("adding a vertex lowered an entry"));
            }
            Ok(None)
        };
        match body() {
            Ok(None) => {}
            Ok(Some(msg)) => trial.fail(msg, input(&vs)),
            Err(e) => trial.fail(format!("unexpected error: {e}"), input(&vs)),
        }
        trial
    })
}

/// Exhaustive two-dimensional sweep over `nu_12, nu_21 ∈ [lo, hi]`.
pub fn hijikata_sweep(lo: i64, hi: i64, exec: Execution) -> SuiteReport {
    let width = (hi - lo + 1).max(0) as u64;
    run("hijikata n=2", exec, width * width, |t| {
        let a = lo + (t / width) as i64;
        let b = lo + (t % width) as i64;
        let mut trial = Trial::default();
        let nu = match ExponentMatrix::new(vec![vec![0, a], vec![b, 0]]) {
            Ok(nu) => nu,
            Err(e) => return Trial::from_error(e, json!([a, b])),
        };
        let input = || json!(nu);
        let level = a + b;
        trial.check(nu.is_order() == (level >= 0), "order iff nu_12 + nu_21 >= 0", input);
        if level < 0 {
            trial.check(nu.hijikata_normal_form().is_err(), "normal form accepted a non-order", input);
            return trial;
        }
        trial.tag("orders");
        let body = || -> Result<Option<&'static str>> {
            let verts = maximal_orders_containing(&nu)?;
            let expected: Vec<ApartmentVertex> =
                (-a..=b).map(|x| ApartmentVertex::new(&[0, x])).collect::<Result<_>>()?;
            if verts != expected {
                return Ok(Some("vertex set is not the geodesic interval"));
            }
            if nu.hijikata_normal_form()? != level as u64 {
                return Ok(Some("normal form level differs from geodesic length"));
            }
            let ends = [expected[0].clone(), expected[expected.len() - 1].clone()];
            if intersect_maximal(&ends)? != nu {
                return Ok(Some("endpoint intersection differs from the order"));
            }
            Ok(None)
        };
        match body() {
            Ok(None) => {}
            Ok(Some(msg)) => trial.fail(msg, input()),
            Err(e) => trial.fail(format!("unexpected error: {e}"), input()),
        }
        trial
    })
}

/// Split orders in random apartments: membership in the intersection agrees
/// with membership in every transported maximal order, the set is closed
/// under sampled products and contains `γRγ^{-1}`, incidence read off from
/// elementary divisors matches the coordinate rule, and elementary divisors
/// are invariant under `γ`.
pub fn apartment_sweep(n: usize, prime: u32, trials: u64, samples: usize, seed: u64, exec: Execution) -> SuiteReport {
    run(&format!("apartments n={n} p={prime}"), exec, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut trial = Trial::default();
        match apartment_trial(&mut rng, n, prime, samples, &mut trial.tags) {
            Ok(None) => {}
            Ok(Some((msg, input))) => trial.fail(msg, input),
            Err(e) => trial.fail(format!("unexpected error: {e}"), Value::Null),
        }
        trial
    })
}

fn apartment_trial(
    rng: &mut TrialRng,
    n: usize,
    p: u32,
    samples: usize,
    tags: &mut Vec<&'static str>,
) -> Result<Option<(&'static str, Value)>> {
    let gamma = sample::gamma(rng, n, p)?;
    let ap = Apartment::new(gamma.clone())?;
    let count = rng.random_range(1..=4);
    let verts = sample::vertices(rng, n, count, -2, 2)?;
    let s = intersect_in_apartment(&ap, &verts)?;
    let input = || json!({ "gamma": gamma, "vertices": verts });
    let (mut members, mut others) = (0usize, 0usize);

    for k in 0..samples {
        let local =
            if k % 2 == 0 { sample::element_of(rng, s.nu(), p)? } else { sample::local_matrix(rng, n, p, -3, 3)? };
        let a = ap.push_forward(&local)?;
        let direct = general_membership(&s, &a)?;
        let each = ap.maximal_order_memberships(&verts, &a)?.into_iter().all(|b| b);
        if direct != each {
            return Ok(Some(("intersection membership disagrees with per-vertex membership", input())));
        }
        if direct {
            members += 1;
        } else {
            others += 1;
        }
        if k % 2 == 0 {
            if !direct {
                return Ok(Some(("transported element of the order rejected", input())));
            }
            let b = ap.push_forward(&sample::element_of(rng, s.nu(), p)?)?;
            if !general_membership(&s, &a.mul(&b)?)? {
                return Ok(Some(("product left the order", input())));
            }
        }
    }
    if members > 0 && others > 0 {
        tags.push("both_outcomes");
    }
    for g in s.diagonal_generators()? {
        if !general_membership(&s, &g)? {
            return Ok(Some(("conjugated diagonal idempotent missing", input())));
        }
    }
    for (i, u) in verts.iter().enumerate() {
        for w in &verts[i + 1..] {
            if incident(u, w) != (u != w && ap.incident_by_divisors(u, w)?) {
                return Ok(Some(("incidence not determined by elementary divisors", input())));
            }
        }
    }
    let l = sample::gamma(rng, n, p)?;
    let l2 = sample::gamma(rng, n, p)?;
    if !divisor_invariance_check(&gamma, &l, &l2)? {
        return Ok(Some(("elementary divisors changed under gamma", input())));
    }
    Ok(None)
}

/// Hermite forms: canonical forms are fixed, invariant under random unit
/// left multiplication, and non-diagonal ones admit a diagonal witness while
/// diagonal ones conjugate every `D ∈ {0,1}^n` integrally.
pub fn hermite_sweep(
    max_n: usize,
    prime: u32,
    max_exp: i64,
    trials: u64,
    unit_mults: usize,
    seed: u64,
    exec: Execution,
) -> SuiteReport {
    run(&format!("hermite n<={max_n} p={prime}"), exec, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut trial = Trial::default();
        let n = rng.random_range(2..=max_n.max(2));
        let res = (|| -> Result<Option<(&'static str, Value)>> {
            let h = sample::hermite_form(&mut rng, n, prime, max_exp, true)?;
            if let Some(msg) = hermite_instance(&mut rng, &h, unit_mults)? {
                return Ok(Some((msg, json!(h.matrix()))));
            }
            let d = diagonal_witness(&h)?;
            if crate::dvr::conjugate_inverse(h.matrix(), &d)?.is_integral() {
                return Ok(Some(("witness conjugate is integral", json!(h.matrix()))));
            }
            let exps: Vec<i64> = (0..n).map(|_| rng.random_range(0..=max_exp)).collect();
            let diag = LocalMatrix::diag_powers(&exps, prime)?;
            if !diagonal_conjugates_integral(&diag)? {
                return Ok(Some(("diagonal conjugator produced a non-integral conjugate", json!(diag))));
            }
            if diagonal_witness(&HermiteForm::from_matrix(diag.clone())?).is_ok() {
                return Ok(Some(("witness found for a diagonal matrix", json!(diag))));
            }
            Ok(None)
        })();
        match res {
            Ok(None) => {}
            Ok(Some((msg, input))) => trial.fail(msg, input),
            Err(e) => trial.fail(format!("unexpected error: {e}"), Value::Null),
        }
        trial
    })
}

fn hermite_instance(rng: &mut TrialRng, h: &HermiteForm, unit_mults: usize) -> Result<Option<&'static str>> {
    let (same, u) = hermite_normal_form(h.matrix())?;
    if &same != h || !u.is_unimodular() {
        return Ok(Some("canonical form not fixed"));
    }
    for _ in 0..unit_mults {
        let u = sample::unimodular(rng, h.matrix().n(), h.matrix().prime())?;
        let moved = u.mul(h.matrix())?;
        let (back, transform) = hermite_normal_form(&moved)?;
        if &back != h {
            return Ok(Some("form changed under a unit left multiplication"));
        }
        if !transform.is_unimodular() || &transform.mul(&moved)? != h.matrix() {
            return Ok(Some("transform is not a unimodular witness"));
        }
    }
    Ok(None)
}

/// Maximal orders as conjugates: `diag(p^{-m})^{-1} M_n(O) diag(p^{-m}) ⊆ Λ(m)`,
/// and elements of `Λ(m)` conjugate back into `M_n(O)`.
pub fn maximal_order_sweep(
    max_n: usize,
    prime: u32,
    bound: i64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> SuiteReport {
    run(&format!("maximal orders n<={max_n} p={prime}"), exec, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut trial = Trial::default();
        let n = rng.random_range(2..=max_n.max(2));
        let res = (|| -> Result<Option<(&'static str, Value)>> {
            let m: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
            let v = ApartmentVertex::new(&m)?;
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            let xi = LocalMatrix::diag_powers(&neg, prime)?;
            let a = sample::integral_matrix(&mut rng, n, prime)?;
            if !lambda_membership(&conjugate(&xi, &a)?, &v)? {
                return Ok(Some(("conjugate of an integral matrix left the maximal order", json!(m))));
            }
            let b = sample::element_of(&mut rng, &v.maximal_order_exponents()?, prime)?;
            if !lambda_membership(&b, &v)? {
                return Ok(Some(("sampled element not in the maximal order", json!(m))));
            }
            let back = conjugate(&xi.inverse().expect("diagonal powers"), &b)?;
            if !back.is_integral() {
                return Ok(Some(("element of the maximal order did not conjugate into M_n(O)", json!(m))));
            }
            Ok(None)
        })();
        match res {
            Ok(None) => {}
            Ok(Some((msg, input))) => trial.fail(msg, input),
            Err(e) => trial.fail(format!("unexpected error: {e}"), Value::Null),
        }
        trial
    })
}

/// Ring closure on a mixed sample: half raw random matrices, half their
/// hulls. Orders must survive `products` sharp products; non-orders must
/// yield a witness pair that lies in the set but multiplies out of it.
#[allow(clippy::too_many_arguments)]
pub fn closure_sweep(
    max_n: usize,
    lo: i64,
    hi: i64,
    prime: u32,
    instances: u64,
    products: u64,
    seed: u64,
    exec: Execution,
) -> SuiteReport {
    run(&format!("ring closure p={prime}"), exec, instances, |t| {
        let mut rng = trial_rng(seed, t);
        let mut trial = Trial::default();
        let n = rng.random_range(2..=max_n.max(2));
        let res = (|| -> Result<Option<(&'static str, Value)>> {
            let mut nu = sample::exponent_matrix(&mut rng, n, lo, hi)?;
            if t % 2 == 1 {
                if let Ok(h) = nu.order_hull() {
                    nu = h;
                }
            }
            let check = ring_closure_check(&nu, prime, products, rng.random())?;
            if nu.is_order() {
                trial.tag("orders");
                if !check.is_closed() {
                    return Ok(Some(("sampled product left an order", json!(nu))));
                }
                let a = sample::element_of(&mut rng, &nu, prime)?;
                let b = sample::element_of(&mut rng, &nu, prime)?;
                if !in_split_order(&a.mul(&b)?, &nu)? {
                    return Ok(Some(("product of members left an order", json!(nu))));
                }
            } else {
                trial.tag("non_orders");
                let ClosureCheck::Counterexample { a, b, triple: Some(_) } = check else {
                    return Ok(Some(("no witness for a non-order", json!(nu))));
                };
                let ok = in_split_order(&a, &nu)? && in_split_order(&b, &nu)? && !in_split_order(&a.mul(&b)?, &nu)?;
                if !ok {
                    return Ok(Some(("witness pair does not violate closure", json!(nu))));
                }
            }
            Ok(None)
        })();
        match res {
            Ok(None) => {}
            Ok(Some((msg, input))) => trial.fail(msg, input),
            Err(e) => trial.fail(format!("unexpected error: {e}"), Value::Null),
        }
        trial
    })
}

/// Parameters of a full fuzz run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub min_n: usize,
    pub max_n: usize,
    pub lo: i64,
    pub hi: i64,
    pub trials: u64,
    pub seed: u64,
    pub prime: u32,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { min_n: 2, max_n: 4, lo: -3, hi: 5, trials: 10_000, seed: 0x5eed, prime: 2 }
    }
}

/// Every suite, with the heavier matrix-model suites scaled down from
/// `trials` (÷10 for apartments, ÷20 for Hermite forms, at least 1).
pub fn run_all(cfg: &FuzzConfig, exec: Execution) -> Vec<SuiteReport> {
    let mut out = Vec::new();
    for n in cfg.min_n..=cfg.max_n {
        out.push(bijection_sweep(n, cfg.lo, cfg.hi, cfg.trials, cfg.seed ^ n as u64, exec));
        out.push(vertex_set_sweep(n, cfg.trials, cfg.seed.wrapping_add(100 + n as u64), exec));
    }
    out.push(hijikata_sweep(cfg.lo, cfg.hi, exec));
    let n_model = cfg.max_n.clamp(2, 3);
    out.push(apartment_sweep(n_model, cfg.prime, (cfg.trials / 10).max(1), 20, cfg.seed.wrapping_add(7), exec));
    out.push(hermite_sweep(n_model, cfg.prime, 3, (cfg.trials / 20).max(1), 10, cfg.seed.wrapping_add(11), exec));
    out.push(maximal_order_sweep(n_model, cfg.prime, 3, (cfg.trials / 20).max(1), cfg.seed.wrapping_add(13), exec));
    out.push(closure_sweep(cfg.max_n, cfg.lo, cfg.hi, cfg.prime, 200, 100, cfg.seed.wrapping_add(17), exec));
    out
}
